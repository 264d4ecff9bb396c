use coprime::colouring::{load_colouring, load_config, sample_coset_config};
use coprime::lattice::{standard_spec, LatticeKind};
use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_coprime");

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Out {
    let o = Command::new(BIN).args(args).output().expect("binary runs");
    Out {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
    }
}

fn dir_bytes(d: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(d)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn golay_dumps() {
    let o = run(&["golay", "--dump", "octads"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 759);
    assert!(o.stdout.lines().all(|l| l.len() == 24 && l.matches('1').count() == 8));
    let o = run(&["golay"]);
    assert_eq!(o.stdout, "weight,count\n0,1\n8,759\n12,2576\n16,759\n24,1\n");
    assert_eq!(run(&["golay", "--dump", "codewords"]).stdout.lines().count(), 4096);
}

#[test]
fn bounds_row_and_exit_codes() {
    let o = run(&["bounds", "--n", "256", "--x", "256"]);
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "n,x,P,f_lo,f_hi,r_upper");
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&cols[..3], &["256", "256", "10000"]);
    let r: f64 = cols[5].parse().unwrap();
    assert!(r > 0.0 && r < 0.05);

    assert_eq!(run(&["bounds", "--n", "1", "--x", "256"]).code, 2);
    assert_eq!(run(&["bounds", "--n", "4", "--x", "8", "--frobnicate"]).code, 3);
    assert_eq!(run(&["bounds", "--n", "four", "--x", "8"]).code, 3);
    assert_eq!(run(&["no-such-command"]).code, 3);
}

#[test]
fn help_lists_flags() {
    let o = run(&["sample", "--help"]);
    assert_eq!(o.code, 0);
    for flag in ["--lattice", "--p", "--seed", "--extents", "--origin", "--oracle", "--out", "--config", "--workers"] {
        assert!(o.stdout.contains(flag), "{flag} missing from help");
    }
    let top = run(&["--help"]);
    for cmd in ["sample", "layers", "crossing", "bounds", "annulus", "staircase", "clusters", "lattice", "golay", "check", "infer"] {
        assert!(top.stdout.contains(cmd), "{cmd} missing");
    }
}

#[test]
fn check_verdicts() {
    let o = run(&["check", "--lattice", "e8", "--theorem", "setup"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("condition2=pass-exact"));
    assert!(o.stdout.contains("condition1=pass-bounded"));
    let o = run(&["check", "--lattice", "spread-d2-inf-2", "--theorem", "setupblack"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("condition2=fail"));
    assert_eq!(run(&["check", "--lattice", "e9", "--theorem", "setup"]).code, 2);
}

#[test]
fn lattice_dump_golden() {
    let o = run(&["lattice", "dump", "--lattice", "triangular"]);
    assert_eq!(o.stdout, "-1 -1\n-1 0\n0 -1\n0 1\n1 0\n1 1\n");
    let o = run(&["lattice", "dump", "--lattice", "d3"]);
    let golden = "-1 -1 0\n-1 0 -1\n-1 0 1\n-1 1 0\n0 -1 -1\n0 -1 1\n0 1 -1\n0 1 1\n1 -1 0\n1 0 -1\n1 0 1\n1 1 0\n";
    assert_eq!(o.stdout, golden);
    assert_eq!(run(&["lattice", "dump", "--lattice", "e8"]).stdout.lines().count(), 240);
    let info = run(&["lattice", "info", "--lattice", "d4"]).stdout;
    assert!(info.contains("det,2\n") && info.contains("span_index,1\n") && info.contains("generating_set,24\n"));
}

#[test]
fn sample_is_deterministic_across_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for w in ["1", "4", "16"] {
        let d = tmp.path().join(format!("w{w}"));
        let o = run(&["--workers", w, "sample", "--seed", "11", "--extents", "512,512", "--out", d.to_str().unwrap()]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        outs.push(dir_bytes(&d));
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
    let names: Vec<&str> = outs[0].iter().map(|f| f.0.as_str()).collect();
    assert_eq!(names, ["colouring.pgm", "config.txt", "manifest.txt", "stats.csv"]);

    let d = tmp.path().join("w1");
    let col = load_colouring(&fs::read(d.join("colouring.pgm")).unwrap()).unwrap();
    assert!((col.white_fraction() - 0.608).abs() < 0.01);
    let cfg = load_config(&fs::read_to_string(d.join("config.txt")).unwrap()).unwrap();
    let z2 = standard_spec(&LatticeKind::Hypercubic(2)).unwrap();
    assert_eq!(cfg, sample_coset_config(&z2, 997, 11).unwrap());

    let manifest = fs::read_to_string(d.join("manifest.txt")).unwrap();
    let repro = manifest.lines().find_map(|l| l.strip_prefix("reproduce=coprime ")).unwrap();
    let again = tmp.path().join("again");
    let mut args: Vec<&str> = repro.split(' ').collect();
    let out_flag = format!("--out={}", again.display());
    args.push(&out_flag);
    assert_eq!(run(&args).code, 0);
    assert_eq!(dir_bytes(&again), outs[0]);
}

#[test]
fn monte_carlo_commands_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        vec!["crossing", "--n", "16", "--x", "33", "--trials", "500", "--seed", "3"],
        vec!["annulus", "--k", "9", "--trials", "40", "--seed", "3"],
        vec!["staircase", "--n-min", "2", "--n-max", "4", "--trials", "40", "--seed", "3"],
    ] {
        let mut outs = Vec::new();
        for w in ["1", "4", "16"] {
            let d = tmp.path().join(format!("{}-{w}", args[0]));
            let mut a = vec!["--workers", w];
            a.extend(&args);
            let ds = d.to_str().unwrap().to_string();
            a.extend(["--out", &ds]);
            let o = run(&a);
            assert_eq!(o.code, 0, "{}", o.stderr);
            outs.push(dir_bytes(&d));
        }
        assert_eq!(outs[0], outs[1], "{}", args[0]);
        assert_eq!(outs[0], outs[2], "{}", args[0]);
    }
}

#[test]
fn oracle_sample() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("o");
    let o = run(&["sample", "--oracle", "X=(3,-4)", "--origin", "-5,-5", "--extents", "30,30", "--out", d.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(!d.join("config.txt").exists());
    let col = load_colouring(&fs::read(d.join("colouring.pgm")).unwrap()).unwrap();
    assert_eq!(col.colour_at(&[3, -4]), Some(false));
    assert_eq!(col.colour_at(&[4, -3]), Some(true));
    assert_eq!(col.colour_at(&[5, -4]), Some(false));
    assert_eq!(col.colour_at(&[6, 0]), Some(true));
    assert_eq!(col.colour_at(&[30, 0]), None);
    let e8 = run(&["sample", "--lattice", "e8", "--oracle", "0,0,0,0,0,0,0,0", "--extents", "2,2,2,2,2,2,2,2"]);
    assert_eq!(e8.code, 2);
}

#[test]
fn layers_palette() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("l");
    let o = run(&["layers", "--seed", "5", "--extents", "40,30", "--out", d.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("2,0,255,255\n") && o.stdout.contains("2+3,128,255,128\n"));
    let img = fs::read(d.join("layers.ppm")).unwrap();
    let header_end = {
        let mut nl = 0;
        let mut pos = 0;
        for (i, &b) in img.iter().enumerate() {
            if b == b'\n' {
                nl += 1;
                if nl == 6 {
                    pos = i + 1;
                    break;
                }
            }
        }
        pos
    };
    let px = &img[header_end..];
    assert_eq!(px.len(), 40 * 30 * 3);
    let cfg = sample_coset_config(&standard_spec(&LatticeKind::Hypercubic(2)).unwrap(), 997, 5).unwrap();
    let (mut seen_cyan, mut seen_mix, mut seen_white) = (false, false, false);
    for y in 0..30i64 {
        for x in 0..40i64 {
            let inb = |p: u64| {
                let r = cfg.rep(p).unwrap();
                x.rem_euclid(p as i64) == r[0] && y.rem_euclid(p as i64) == r[1]
            };
            let black = cfg.reps.iter().any(|(p, _)| inb(*p));
            let i = ((y * 40 + x) * 3) as usize;
            let rgb = [px[i], px[i + 1], px[i + 2]];
            match (inb(2), inb(3), inb(5)) {
                (true, false, false) => {
                    assert_eq!(rgb, [0, 255, 255]);
                    seen_cyan = true;
                }
                (true, true, false) => {
                    assert_eq!(rgb, [128, 255, 128]);
                    seen_mix = true;
                }
                (false, false, false) if !black => {
                    assert_eq!(rgb, [255, 255, 255]);
                    seen_white = true;
                }
                (false, false, false) => assert_eq!(rgb, [0, 0, 0]),
                _ => {}
            }
        }
    }
    assert!(seen_cyan && seen_mix && seen_white);
    assert_eq!(run(&["layers", "--primes", "2,3,5,7"]).code, 2);
    assert_eq!(run(&["layers", "--primes", "4"]).code, 2);
}

#[test]
fn config_file_merging() {
    let tmp = tempfile::tempdir().unwrap();
    let cf = tmp.path().join("run.conf");
    fs::write(&cf, "# crossing run\nn = 16\nx = 64 # overridden below\ntrials = 300\nseed=4\n").unwrap();
    let a = run(&["crossing", "--config", cf.to_str().unwrap(), "--x", "8"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let b = run(&["crossing", "--n", "16", "--x", "8", "--trials", "300", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.lines().nth(1).unwrap().starts_with("crossing,16,8,"));

    fs::write(&cf, "n = 16\nx = 8\nwobble = 3\n").unwrap();
    assert_eq!(run(&["crossing", "--config", cf.to_str().unwrap()]).code, 3);
    fs::write(&cf, "n 16\n").unwrap();
    let o = run(&["crossing", "--config", cf.to_str().unwrap()]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("line 1"));
}

#[test]
fn infer_from_pgm() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("s");
    assert_eq!(run(&["sample", "--seed", "9", "--extents", "200,200", "--out", d.to_str().unwrap()]).code, 0);
    let pgm = d.join("colouring.pgm");
    let o = run(&["infer", "--pgm", pgm.to_str().unwrap(), "--p-max", "7"]);
    assert_eq!(o.code, 0);
    let cfg = load_config(&fs::read_to_string(d.join("config.txt")).unwrap()).unwrap();
    for line in o.stdout.lines() {
        let p: u64 = line.strip_prefix("p=").unwrap().split(' ').next().unwrap().parse().unwrap();
        let r = cfg.rep(p).unwrap();
        assert!(line.contains(&format!(" {},{}", r[0], r[1])), "{line}");
    }
    let o = run(&["infer", "--pgm", pgm.to_str().unwrap(), "--p-max", "1009"]);
    assert!(o.stderr.contains("warning"));
    let bad = tmp.path().join("bad.pgm");
    fs::write(&bad, b"P5\n# origin=0,0\n3 1\n255\n\x00\xff\x00").unwrap();
    assert_eq!(run(&["infer", "--pgm", bad.to_str().unwrap()]).code, 3);
    assert_eq!(run(&["infer", "--pgm", "/nonexistent/x.pgm"]).code, 4);
}

#[test]
fn clusters_summary() {
    let o = run(&["clusters", "--extents", "100,100", "--seed", "2"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("key,value\ncolour,white\npoints,10000\n"));
    let black = run(&["clusters", "--extents", "100,100", "--seed", "2", "--colour", "black"]);
    assert!(black.stdout.contains("colour,black"));
}

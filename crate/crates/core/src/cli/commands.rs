use super::*;
use crate::arith::{is_prime, second_moment_bound, MOMENT_CSV_HEADER};
use crate::colouring::{
    colour_window, colouring_stats_csv, infer_cosets, load_colouring, oracle_from_origin, sample_coset_config,
    save_colouring, save_config, truncation_error_bound, Colouring, CosetConfig, Window,
};
use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::lattice::{
    golay, hypothesis_report, is_normalized, normalize_coordinates, span_index, standard_lattice, standard_spec,
    word_bits, LatticeKind, LatticeSpec, Theorem,
};
use crate::perco::{
    crossing_bias_bound, default_p_cut, estimate_annulus, estimate_crossing, estimate_staircase, label_clusters,
    MC_CSV_HEADER,
};
use crate::rng::RNG_ID;
use num_traits::ToPrimitive;
use std::fs;
use std::path::Path;

type Params = Vec<(&'static str, String)>;

fn lattice_spec(id: &str) -> Result<LatticeSpec> {
    standard_spec(&LatticeKind::parse(id)?)
}

fn window_from(w: &WindowArgs, d: usize) -> Result<Window> {
    let origin = w.origin.clone().unwrap_or_else(|| vec![0; w.extents.len()]);
    if w.extents.len() != d || origin.len() != d {
        return Err(Error::Domain(format!("window needs {d} extents and origin coordinates")));
    }
    Window::new(origin, w.extents.clone())
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn window_params(w: &Window) -> Params {
    vec![("extents", list(&w.extents)), ("origin", list(&w.origin))]
}

/// `manifest.txt`: every effective parameter plus a command line that
/// reproduces the outputs byte for byte (add `--out`). Worker count and
/// output directory are not recorded because no output depends on them.
fn write_manifest(dir: &Path, command: &str, params: &Params, files: &[&str]) -> Result<()> {
    let mut s = format!("coprime-manifest v1\nversion={}\ncommand={command}\nrng={RNG_ID}\n", env!("CARGO_PKG_VERSION"));
    for (k, v) in params {
        s.push_str(&format!("{k}={v}\n"));
    }
    for f in files {
        s.push_str(&format!("file={f}\n"));
    }
    let flags: Vec<String> = params.iter().map(|(k, v)| format!("--{k}={v}")).collect();
    s.push_str(&format!("reproduce=coprime {command} {}\n", flags.join(" ")));
    fs::write(dir.join("manifest.txt"), s)?;
    Ok(())
}

fn parse_point(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let t = t.strip_prefix("X=").unwrap_or(t);
    let t = t.trim_start_matches('(').trim_end_matches(')');
    t.split(',')
        .map(|v| v.trim().parse::<i64>().map_err(|_| Error::Parse { line: 0, msg: format!("bad base point '{s}'") }))
        .collect()
}

pub(super) fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Sample { lattice, p_cut, seed, window, oracle, out: dir } => {
            sample(lattice, *p_cut, *seed, window, oracle.as_deref(), dir, out)
        }
        Command::Layers { lattice, primes, p_cut, seed, window, out: dir } => {
            layers(lattice, primes, *p_cut, *seed, window, dir, out)
        }
        Command::Crossing { n, x, trials, p_cut, seed, out: dir } => {
            let p = p_cut.unwrap_or_else(|| default_p_cut(*x, *trials));
            let st = estimate_crossing(*n, *x, *trials, p, *seed)?;
            let csv = format!("{MC_CSV_HEADER}\n{}\n", st.csv_row());
            write!(out, "{csv}")?;
            if p >= *x {
                let b = crossing_bias_bound(*x, p)?.to_f64().unwrap_or(f64::NAN);
                writeln!(err, "truncation bias bound {}", sig12(b))?;
            }
            if let Some(dir) = dir {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("crossing.csv"), &csv)?;
                let params = vec![
                    ("n", n.to_string()),
                    ("x", x.to_string()),
                    ("trials", trials.to_string()),
                    ("p", p.to_string()),
                    ("seed", seed.to_string()),
                ];
                write_manifest(dir, "crossing", &params, &["crossing.csv"])?;
            }
            Ok(EXIT_OK)
        }
        Command::Bounds { n, x, p_cut } => {
            let r = second_moment_bound(*n, *x, *p_cut)?;
            writeln!(out, "{MOMENT_CSV_HEADER}\n{}", r.csv_row())?;
            Ok(EXIT_OK)
        }
        Command::Annulus { k, margin, trials, p_cut, seed, out: dir } => {
            annulus(*k, *margin, *trials, *p_cut, *seed, dir.as_deref(), out, err)
        }
        Command::Staircase { n_min, n_max, trials, p_cut, seed, out: dir } => {
            staircase(*n_min, *n_max, *trials, *p_cut, *seed, dir.as_deref(), out)
        }
        Command::Clusters { lattice, p_cut, seed, window, colour } => {
            let (spec, s) = standard_lattice(&LatticeKind::parse(lattice)?)?;
            let w = window_from(window, spec.dim)?;
            let c = colour_window(&sample_coset_config(&spec, *p_cut, *seed)?, &w)?;
            let white = matches!(colour, Colour::White);
            let cl = label_clusters(&c, &s, white);
            let faces_all = (1u64 << (2 * spec.dim)) - 1;
            writeln!(out, "key,value")?;
            writeln!(out, "colour,{}", if white { "white" } else { "black" })?;
            writeln!(out, "points,{}", c.len())?;
            writeln!(out, "components,{}", cl.count())?;
            writeln!(out, "largest,{}", cl.sizes.iter().max().copied().unwrap_or(0))?;
            writeln!(out, "boundary_components,{}", cl.faces.iter().filter(|&&f| f != 0).count())?;
            writeln!(out, "all_faces_components,{}", cl.faces.iter().filter(|&&f| f == faces_all).count())?;
            Ok(EXIT_OK)
        }
        Command::Lattice { action, lattice } => {
            let (spec, s) = standard_lattice(&LatticeKind::parse(lattice)?)?;
            match action {
                LatticeAction::Dump => {
                    for v in &s.vectors {
                        writeln!(out, "{}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))?;
                    }
                }
                LatticeAction::Info => {
                    writeln!(out, "key,value\nid,{}\ndim,{}\ndet,{}", spec.id(), spec.dim, spec.det())?;
                    writeln!(out, "generating_set,{}", s.len())?;
                    let si = span_index(&s.vectors, &spec)?;
                    writeln!(out, "span_index,{}", si.map_or("infinite".into(), |v| v.to_string()))?;
                    for row in &spec.basis {
                        writeln!(out, "basis,{}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Golay { dump } => {
            let code = golay();
            match dump {
                GolayDump::Weights => {
                    writeln!(out, "weight,count")?;
                    for (w, c) in code.weight_distribution().iter().enumerate().filter(|(_, &c)| c > 0) {
                        writeln!(out, "{w},{c}")?;
                    }
                }
                GolayDump::Generators => write!(out, "{}", code.serialize_generators())?,
                GolayDump::Codewords | GolayDump::Octads | GolayDump::Dodecads => {
                    let words = match dump {
                        GolayDump::Codewords => &code.codewords,
                        GolayDump::Octads => &code.octads,
                        _ => &code.dodecads,
                    };
                    for w in words {
                        writeln!(out, "{}", word_bits(*w))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Check { lattice, theorem, radius, search } => {
            let (spec, s) = standard_lattice(&LatticeKind::parse(lattice)?)?;
            let (spec, s) = if is_normalized(&spec) {
                (spec, s)
            } else {
                let (spec, s, _) = normalize_coordinates(&spec, &s)?;
                (spec, s)
            };
            let th = match theorem {
                TheoremArg::Setup => Theorem::Setup,
                TheoremArg::Setupblack => Theorem::SetupBlack,
            };
            let report = hypothesis_report(&spec, &s, th, *radius, search.unwrap_or(*radius))?;
            write!(out, "{}", report.to_text())?;
            Ok(if report.verdict.is_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Infer { pgm, p_max } => {
            let c = load_colouring(&fs::read(pgm)?)?;
            let inf = infer_cosets(&c, *p_max)?;
            if let Some(w) = &inf.warning {
                writeln!(err, "warning: {w}")?;
            }
            for (p, cands) in &inf.candidates {
                let rs: Vec<String> = cands.iter().map(|r| list(r)).collect();
                writeln!(out, "p={p} candidates={} {}", cands.len(), rs.join(" "))?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn sample(
    lattice: &str,
    p_cut: u64,
    seed: u64,
    window: &WindowArgs,
    oracle: Option<&str>,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    let spec = lattice_spec(lattice)?;
    let w = window_from(window, spec.dim)?;
    let mut params: Params = vec![("lattice", spec.id())];
    params.extend(window_params(&w));
    let mut files = vec!["colouring.pgm", "stats.csv"];
    let (col, cfg): (Colouring, Option<CosetConfig>) = match oracle {
        Some(x) => {
            let x = parse_point(x)?;
            params.push(("oracle", list(&x)));
            (oracle_from_origin(&spec, &x, &w)?, None)
        }
        None => {
            params.push(("p", p_cut.to_string()));
            params.push(("seed", seed.to_string()));
            let cfg = sample_coset_config(&spec, p_cut, seed)?;
            (colour_window(&cfg, &w)?, Some(cfg))
        }
    };
    let pgm = save_colouring(&col)?;
    fs::create_dir_all(dir)?;
    let mut stats = colouring_stats_csv(&col);
    if let Some(cfg) = &cfg {
        fs::write(dir.join("config.txt"), save_config(cfg))?;
        files.insert(0, "config.txt");
        if spec.dim >= 2 {
            let b = truncation_error_bound(&w, p_cut, spec.dim as u32)?;
            stats.push_str(&format!("truncation_bound,{}\n", sig12(b.to_f64().unwrap_or(f64::INFINITY))));
        }
    }
    fs::write(dir.join("colouring.pgm"), pgm)?;
    fs::write(dir.join("stats.csv"), &stats)?;
    write_manifest(dir, "sample", &params, &files)?;
    write!(out, "{stats}")?;
    Ok(EXIT_OK)
}

/// Colours for subsets of the highlighted primes, indexed by the bit mask
/// of their positions (first = cyan, second = yellow, third = magenta). A
/// mix is the per-channel mean of its members, rounded half up.
pub const PALETTE: [[u8; 3]; 8] = [
    [255, 255, 255],
    [0, 255, 255],
    [255, 255, 0],
    [128, 255, 128],
    [255, 0, 255],
    [128, 128, 255],
    [255, 128, 128],
    [170, 170, 170],
];

/// RGB of a point: palette colour when in some highlighted `B_p`, white
/// when white, black when removed only by other primes.
pub fn layer_colour(mask: usize, white: bool) -> [u8; 3] {
    match (mask, white) {
        (0, true) => [255, 255, 255],
        (0, false) => [0, 0, 0],
        (m, _) => PALETTE[m],
    }
}

fn layers(
    lattice: &str,
    primes: &[u64],
    p_cut: u64,
    seed: u64,
    window: &WindowArgs,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    if primes.is_empty() || primes.len() > 3 {
        return Err(Error::Domain("layers highlights one to three primes".into()));
    }
    if let Some(p) = primes.iter().find(|&&p| !is_prime(p) || p > p_cut) {
        return Err(Error::Domain(format!("{p} is not a prime <= P = {p_cut}")));
    }
    let spec = lattice_spec(lattice)?;
    if spec.dim != 2 || spec.det() != 1 {
        return Err(Error::Unsupported("layers renders two-dimensional Z^2 models only".into()));
    }
    let w = window_from(window, 2)?;
    let cfg = sample_coset_config(&spec, p_cut, seed)?;
    let col = colour_window(&cfg, &w)?;
    let reps: Vec<(i64, Vec<i64>)> = primes.iter().map(|&p| (p as i64, cfg.rep(p).unwrap().to_vec())).collect();
    let mut img = format!(
        "P6\n# origin={}\n# extents={}\n# primes={}\n{} {}\n255\n",
        list(&w.origin),
        list(&w.extents),
        list(primes),
        w.extents[0],
        w.extents[1]
    )
    .into_bytes();
    for i in 0..col.len() {
        let v = col.point(i);
        let mask = reps
            .iter()
            .enumerate()
            .filter(|(_, (p, r))| crate::colouring::in_class(&v, *p, r))
            .fold(0usize, |m, (k, _)| m | 1 << k);
        img.extend(layer_colour(mask, col.is_white(i)));
    }
    fs::create_dir_all(dir)?;
    fs::write(dir.join("layers.ppm"), img)?;
    let mut params: Params = vec![("lattice", spec.id()), ("primes", list(primes)), ("p", p_cut.to_string())];
    params.push(("seed", seed.to_string()));
    params.extend(window_params(&w));
    write_manifest(dir, "layers", &params, &["layers.ppm"])?;
    writeln!(out, "subset,r,g,b")?;
    for (m, rgb) in PALETTE.iter().enumerate().skip(1) {
        let names: Vec<String> =
            (0..primes.len()).filter(|k| m >> k & 1 == 1).map(|k| primes[k].to_string()).collect();
        if m < 1 << primes.len() {
            writeln!(out, "{},{},{},{}", names.join("+"), rgb[0], rgb[1], rgb[2])?;
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn annulus(
    k: i64,
    margin: i64,
    trials: u64,
    p_cut: Option<u64>,
    seed: u64,
    dir: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let s = standard_lattice(&LatticeKind::Hypercubic(2))?.1;
    let p = p_cut.unwrap_or_else(|| default_p_cut(4 * (2 * k.unsigned_abs() + 1), trials));
    let study = estimate_annulus(k, margin, trials, p, seed, &s)?;
    let csv = format!("{MC_CSV_HEADER}\n{}\n", study.stats.csv_row());
    write!(out, "{csv}")?;
    writeln!(err, "positive samples {}, consequence violations {}", study.stats.successes, study.violations)?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("annulus.csv"), &csv)?;
        let mut wit = String::new();
        if let Some((t, lines)) = &study.first_witness {
            wit.push_str(&format!("# trial {t}\n"));
            for l in lines {
                wit.push_str(l);
                wit.push('\n');
            }
        }
        fs::write(dir.join("annulus_witness.txt"), wit)?;
        let params = vec![
            ("k", k.to_string()),
            ("margin", margin.to_string()),
            ("trials", trials.to_string()),
            ("p", p.to_string()),
            ("seed", seed.to_string()),
        ];
        write_manifest(dir, "annulus", &params, &["annulus.csv", "annulus_witness.txt"])?;
    }
    if study.violations > 0 {
        writeln!(err, "error: a positive annulus sample failed the cluster consequences")?;
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn staircase(
    n_min: u32,
    n_max: u32,
    trials: u64,
    p_cut: Option<u64>,
    seed: u64,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let total: u64 = (n_min..=n_max.min(40)).map(|n| (1u64 << (n + 1)) + 1).sum();
    let p = p_cut.unwrap_or_else(|| default_p_cut(total, trials));
    let study = estimate_staircase(n_min, n_max, trials, p, seed)?;
    let csv = format!("{MC_CSV_HEADER}\n{}\n", study.stats.csv_row());
    write!(out, "{csv}")?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("staircase.csv"), &csv)?;
        let mut path = String::new();
        if let Some((t, pts)) = &study.first_path {
            path.push_str(&format!("# trial {t}\n"));
            for q in pts {
                path.push_str(&format!("{} {}\n", q[0], q[1]));
            }
        }
        fs::write(dir.join("staircase_path.txt"), path)?;
        let params = vec![
            ("n-min", n_min.to_string()),
            ("n-max", n_max.to_string()),
            ("trials", trials.to_string()),
            ("p", p.to_string()),
            ("seed", seed.to_string()),
        ];
        write_manifest(dir, "staircase", &params, &["staircase.csv", "staircase_path.txt"])?;
    }
    Ok(EXIT_OK)
}

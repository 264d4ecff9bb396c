use super::colour::{join, require_full, Colouring, Layout, Provenance};
use super::window::Window;
use crate::error::{parse_err, Result};
use crate::fmt::sig12;

/// Binary PGM, white = 255. The image width is axis 0; image row `r` holds
/// flat indices `r·w .. (r+1)·w`, so the top row is the lowest y.
pub fn save_colouring(c: &Colouring) -> Result<Vec<u8>> {
    require_full(c, "PGM output")?;
    let w = c.window.extents[0];
    let h = c.len() as u64 / w;
    let mut out = format!(
        "P5\n# origin={}\n# extents={}\n# provenance={}\n{w} {h}\n255\n",
        join(&c.window.origin),
        c.window.extents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
        c.provenance
    )
    .into_bytes();
    out.extend(c.bits().map(|b| if b { 255u8 } else { 0 }));
    Ok(out)
}

pub fn load_colouring(data: &[u8]) -> Result<Colouring> {
    let mut pos = 0usize;
    let mut line_no = 0usize;
    let mut next_line = |pos: &mut usize| -> Result<(usize, String)> {
        let end = data[*pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| parse_err(line_no + 1, "truncated PGM header"))?;
        let s = std::str::from_utf8(&data[*pos..*pos + end])
            .map_err(|_| parse_err(line_no + 1, "header is not UTF-8"))?
            .to_string();
        *pos += end + 1;
        line_no += 1;
        Ok((line_no, s))
    };
    let (ln, magic) = next_line(&mut pos)?;
    if magic.trim() != "P5" {
        return Err(parse_err(ln, "expected P5"));
    }
    let (mut origin, mut extents, mut provenance) = (None, None, None);
    let dims = loop {
        let (ln, s) = next_line(&mut pos)?;
        if let Some(c) = s.strip_prefix('#') {
            let c = c.trim();
            if let Some(v) = c.strip_prefix("origin=") {
                origin = Some(parse_list::<i64>(v).ok_or_else(|| parse_err(ln, "bad origin"))?);
            } else if let Some(v) = c.strip_prefix("extents=") {
                extents = Some(parse_list::<u64>(v).ok_or_else(|| parse_err(ln, "bad extents"))?);
            } else if let Some(v) = c.strip_prefix("provenance=") {
                provenance = Some(Provenance::parse(v).ok_or_else(|| parse_err(ln, "bad provenance"))?);
            }
            continue;
        }
        let nums: Vec<u64> = s
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(ln, format!("bad size '{t}'"))))
            .collect::<Result<_>>()?;
        if nums.len() != 2 {
            return Err(parse_err(ln, "expected width and height"));
        }
        break (ln, nums[0], nums[1]);
    };
    let (ln, maxval) = next_line(&mut pos)?;
    if maxval.trim() != "255" {
        return Err(parse_err(ln, "maxval must be 255"));
    }
    let (size_ln, w, h) = dims;
    let origin = origin.ok_or_else(|| parse_err(size_ln, "missing origin comment"))?;
    let extents = extents.ok_or_else(|| parse_err(size_ln, "missing extents comment"))?;
    let provenance = provenance.ok_or_else(|| parse_err(size_ln, "missing provenance comment"))?;
    let window = Window::new(origin, extents).map_err(|e| parse_err(size_ln, e.to_string()))?;
    if window.extents[0] != w || window.len() as u64 != w * h {
        return Err(parse_err(size_ln, "image size disagrees with the extents"));
    }
    let pixels = &data[pos..];
    if pixels.len() != window.len() {
        return Err(parse_err(ln + 1, format!("expected {} pixels, found {}", window.len(), pixels.len())));
    }
    let white = pixels
        .iter()
        .map(|&b| match b {
            255 => Ok(true),
            0 => Ok(false),
            v => Err(parse_err(ln + 1, format!("pixel value {v} is neither 0 nor 255"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(Colouring::from_bits(window, Layout::Full, &white, provenance))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    s.trim().split(',').map(|t| t.parse().ok()).collect()
}

/// `key,value` summary of a colouring.
pub fn colouring_stats_csv(c: &Colouring) -> String {
    let mut s = String::from("key,value\n");
    let mut row = |k: &str, v: String| {
        s.push_str(k);
        s.push(',');
        s.push_str(&v);
        s.push('\n');
    };
    row("points", c.len().to_string());
    row("white", c.white_count().to_string());
    row("white_fraction", sig12(c.white_fraction()));
    row("origin", join(&c.window.origin).replace(',', " "));
    row("extents", c.window.extents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "));
    row("provenance", c.provenance.to_string());
    s
}

//! The extended binary Golay code from the icosahedron.
//!
//! Coordinates 0..12 carry `x`, indexed by icosahedron vertices, and 12..24
//! carry `y`, where `y_v` is the sum of `x_u` over the vertices `u` not adjacent
//! to `v` (including `v`). Words are packed into the low 24 bits of a `u32`.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Icosahedron adjacency. Vertex 0 is the top, 1..=5 the upper ring, 6..=10
/// the lower ring and 11 the bottom. Upper vertex `i` touches lower vertices
/// `5+i` and `5+(i mod 5)+1`.
pub const ICOSAHEDRON: [[u8; 5]; 12] = [
    [1, 2, 3, 4, 5],
    [0, 2, 5, 6, 7],
    [0, 1, 3, 7, 8],
    [0, 2, 4, 8, 9],
    [0, 3, 5, 9, 10],
    [0, 1, 4, 10, 6],
    [1, 5, 7, 10, 11],
    [1, 2, 6, 8, 11],
    [2, 3, 7, 9, 11],
    [3, 4, 8, 10, 11],
    [4, 5, 9, 6, 11],
    [6, 7, 8, 9, 10],
];

pub const LENGTH: usize = 24;
const MASK12: u32 = 0xfff;

#[derive(Clone, Debug)]
pub struct GolayCode {
    pub generators: [u32; 12],
    /// Indexed by the 12 information bits.
    pub codewords: Vec<u32>,
    pub octads: Vec<u32>,
    pub dodecads: Vec<u32>,
}

pub fn adjacency_mask(v: usize) -> u32 {
    ICOSAHEDRON[v].iter().fold(0, |m, &u| m | (1 << u))
}

fn encode_with(gens: &[u32; 12], info: u32) -> u32 {
    (0..12).filter(|k| info >> k & 1 == 1).fold(0, |w, k| w ^ gens[k])
}

impl GolayCode {
    pub fn encode(&self, info: u32) -> u32 {
        self.codewords[(info & MASK12) as usize]
    }

    pub fn contains(&self, word: u32) -> bool {
        word >> LENGTH == 0 && self.encode(word & MASK12) == word
    }

    /// Counts of codewords by weight 0..=24.
    pub fn weight_distribution(&self) -> [usize; 25] {
        let mut w = [0usize; 25];
        for &c in &self.codewords {
            w[c.count_ones() as usize] += 1;
        }
        w
    }

    /// 12 lines of 24 characters, coordinate 0 first.
    pub fn serialize_generators(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&word_bits(*g));
            s.push('\n');
        }
        s
    }
}

pub fn word_bits(w: u32) -> String {
    (0..LENGTH).map(|k| if w >> k & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_word(line: &str) -> Option<u32> {
    if line.len() != LENGTH {
        return None;
    }
    line.chars().enumerate().try_fold(0u32, |w, (k, c)| match c {
        '0' => Some(w),
        '1' => Some(w | 1 << k),
        _ => None,
    })
}

pub fn parse_generators(text: &str) -> Result<[u32; 12]> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != 12 {
        return Err(crate::error::parse_err(lines.len(), "expected 12 generator rows"));
    }
    let mut g = [0u32; 12];
    for (i, l) in lines.iter().enumerate() {
        g[i] = parse_word(l.trim()).ok_or_else(|| crate::error::parse_err(i + 1, "expected 24 bits"))?;
    }
    Ok(g)
}

pub fn build_golay() -> Result<GolayCode> {
    let mut generators = [0u32; 12];
    for (u, g) in generators.iter_mut().enumerate() {
        let nonadj = !adjacency_mask(u) & MASK12;
        *g = 1 << u | nonadj << 12;
    }
    let codewords: Vec<u32> = (0..4096).map(|i| encode_with(&generators, i)).collect();
    let mut octads: Vec<u32> = codewords.iter().copied().filter(|c| c.count_ones() == 8).collect();
    let mut dodecads: Vec<u32> = codewords.iter().copied().filter(|c| c.count_ones() == 12).collect();
    octads.sort_unstable();
    dodecads.sort_unstable();
    let code = GolayCode { generators, codewords, octads, dodecads };
    let dist = code.weight_distribution();
    let min_weight = (1..=24).find(|&w| dist[w] > 0);
    let mut sorted = code.codewords.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 4096 || min_weight != Some(8) || dist.iter().sum::<usize>() != 4096 {
        return Err(Error::Internal("icosahedron table does not give the Golay code".into()));
    }
    Ok(code)
}

/// Shared instance, built once.
pub fn golay() -> &'static GolayCode {
    static CODE: OnceLock<GolayCode> = OnceLock::new();
    CODE.get_or_init(|| build_golay().expect("Golay self-check"))
}

/// Two octads whose symmetric difference is the dodecad `delta`.
pub fn dodecad_decomposition(code: &GolayCode, delta: u32) -> Result<(u32, u32)> {
    if delta.count_ones() != 12 || !code.contains(delta) {
        return Err(Error::Domain("argument is not a dodecad of this code".into()));
    }
    for &o1 in &code.octads {
        let o2 = o1 ^ delta;
        if o2.count_ones() == 8 && o1 < o2 {
            return Ok((o1, o2));
        }
    }
    Err(Error::Internal("dodecad is not a sum of two octads".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_is_symmetric_five_regular() {
        for v in 0..12 {
            assert_eq!(adjacency_mask(v).count_ones(), 5);
            assert_eq!(adjacency_mask(v) >> v & 1, 0);
            for &u in &ICOSAHEDRON[v] {
                assert!(adjacency_mask(u as usize) >> v & 1 == 1);
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let c = golay();
        assert_eq!(parse_generators(&c.serialize_generators()).unwrap(), c.generators);
    }
}

//! Seeded generators for dense prefixes and creature colorings.

use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::creature::{CandidatePrefix, Fnv, Creature, CreatureK1, CreatureK2, CreatureKN, Example, PartialFn};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A 2.10 prefix in the dense subspace: `|A^{t_l}| = l + 1`, one function per
/// element of `A`, blocks packed consecutively.
pub fn r1_prefix(rng: &mut impl Rng, len: usize) -> CandidatePrefix {
    let mut out = Vec::with_capacity(len);
    let mut cursor = 0u32;
    for l in 0..len {
        let width = rng.gen_range(1..=2u32);
        let (dn, up) = (cursor, cursor + width);
        let i = rng.gen_range(dn..up);
        let mut u: Vec<u32> = (dn..up).filter(|&p| p == i || rng.gen_bool(0.5)).collect();
        u.sort_unstable();
        let a: Vec<u32> = index::sample(rng, i as usize + 1, l + 1).into_iter().map(|x| x as u32).collect();
        let val = a
            .iter()
            .map(|&x| {
                let pairs = u.iter().map(|&p| (p, if p == i { x } else { rng.gen_range(0..=p) })).collect();
                PartialFn::new(pairs).unwrap()
            })
            .collect();
        out.push(Creature::K1(CreatureK1::new(dn, up, u, i, a, val)));
        cursor = up;
    }
    CandidatePrefix::new(Example::Ex210, out)
}

fn bits_needed(m: usize) -> u32 {
    usize::BITS - (m.max(1) - 1).leading_zeros()
}

/// A 2.11 prefix with `|val[t_l]| = l + 1` and gaps of 0 to 2 points.
pub fn dense_k2_prefix(rng: &mut impl Rng, len: usize) -> CandidatePrefix {
    let mut out = Vec::with_capacity(len);
    let mut cursor = 0u32;
    for l in 0..len {
        let d = bits_needed(l + 1).max(1);
        let dn = cursor + rng.gen_range(0..=2u32);
        let up = dn + d + rng.gen_range(0..=1u32);
        let mut dis: Vec<u32> = index::sample(rng, (up - dn) as usize, d as usize).into_iter().map(|x| dn + x as u32).collect();
        dis.sort_unstable();
        let masks = index::sample(rng, 1 << d, l + 1);
        let val = masks
            .into_iter()
            .map(|m| PartialFn::new(dis.iter().enumerate().map(|(b, &p)| (p, (m as u32 >> b) & 1)).collect()).unwrap())
            .collect();
        out.push(Creature::K2(CreatureK2::new(dn, up, dis, val)));
        cursor = up;
    }
    CandidatePrefix::new(Example::Ex211, out)
}

/// A 2.13 prefix over an `n`-letter alphabet, blocks of width 1 to 3.
pub fn kn_prefix(rng: &mut impl Rng, len: usize, n: u8) -> CandidatePrefix {
    let mut out = Vec::with_capacity(len);
    let mut cursor = 0u32;
    for _ in 0..len {
        let width = rng.gen_range(1..=3u32);
        let mut points: Vec<u32> = (cursor..cursor + width).collect();
        points.shuffle(rng);
        let keep = rng.gen_range(0..width) as usize;
        let phi = points[..keep].iter().map(|&p| (p, rng.gen_range(0..n))).collect();
        out.push(Creature::KN(CreatureKN::new(n, cursor, cursor + width, phi)));
        cursor += width;
    }
    CandidatePrefix::new(Example::Ex213, out)
}

/// The generator matching an example's dense subspace; 2.13 uses `N = 2`.
pub fn dense_prefix(example: Example, len: usize, seed: u64) -> CandidatePrefix {
    let mut r = rng(seed);
    match example {
        Example::Ex210 => r1_prefix(&mut r, len),
        Example::Ex211 => dense_k2_prefix(&mut r, len),
        Example::Ex213 => kn_prefix(&mut r, len, 2),
    }
}

/// A 2-coloring of creatures determined by `seed` and the creature content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededColoring(pub u64);

impl SeededColoring {
    pub fn color(&self, x: &Creature) -> u8 {
        self.color_hash(x.fingerprint())
    }

    pub fn color_hash(&self, h: u64) -> u8 {
        (ChaCha8Rng::seed_from_u64(self.0 ^ h.rotate_left(17)).next_u32() & 1) as u8
    }

    /// Coloring of possibilities `f` starting at base block `k`.
    pub fn color_pos(&self, k: usize, f: &PartialFn) -> u8 {
        let mut h = Fnv::new();
        h.word(k as u32);
        for &(p, v) in f.pairs() {
            h.word(p);
            h.word(v);
        }
        self.color_hash(h.finish())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_prefixes_are_valid_and_dense() {
        for seed in 0..40 {
            for ex in [Example::Ex210, Example::Ex211, Example::Ex213] {
                let p = dense_prefix(ex, 8, seed);
                assert!(p.validate().is_empty(), "{ex:?} seed {seed}: {:?}", p.validate());
                assert!(p.is_dense(), "{ex:?} seed {seed}");
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(dense_prefix(Example::Ex211, 6, 9), dense_prefix(Example::Ex211, 6, 9));
        assert_ne!(dense_prefix(Example::Ex211, 6, 9), dense_prefix(Example::Ex211, 6, 10));
    }
}

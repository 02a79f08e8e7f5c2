//! Fixed-index product pigeonhole: colorings of `[K_0]^k x K_1 x ... x K_n`.
//!
//! [`s_bound`] evaluates the sufficient sizes `S_k(m_0, ..., m_j)` and
//! [`homogenize_product`] runs the stabilization-and-induction procedure:
//! walk every tuple `t` over the lower coordinates, shrink the top
//! coordinate so `c(t, .)` is constant on it, then recurse on the induced
//! coloring.

use alloc::vec::Vec;

use crate::arrow::{find_homogeneous, iterate_arrow, iterate_with, least_arrow, pigeonhole_arrow};
use crate::bits::BitTable;
use crate::error::{Error, Result};
use crate::subset::{binomial, elements, k_subsets, colex_rank};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductShape {
    pub k: u32,
    /// `(|K_0|, ..., |K_n|)`; the k-subset coordinate is always index 0.
    pub sizes: Vec<u32>,
}

impl ProductShape {
    pub fn new(k: u32, sizes: Vec<u32>) -> Result<Self> {
        let s = Self { k, sizes };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::InvalidInput("product needs at least one coordinate, all of size >= 1".into()));
        }
        if self.sizes[0] > 64 {
            return Err(Error::InvalidInput("the k-subset coordinate is limited to 64 points".into()));
        }
        self.domain_len().map(|_| ())
    }

    pub fn n(&self) -> usize {
        self.sizes.len() - 1
    }

    /// `C(|K_0|, k) * prod_{j >= 1} |K_j|`.
    pub fn domain_len(&self) -> Result<usize> {
        let mut total = binomial(self.sizes[0] as u64, self.k as u64).unwrap_or(u64::MAX) as u128;
        for &s in &self.sizes[1..] {
            total *= s as u128;
        }
        if total > (1u128 << 40) {
            return Err(Error::InvalidInput("product domain too large to tabulate".into()));
        }
        Ok(total as usize)
    }

    /// Row-major index with the colex rank of `J` as the slowest axis.
    pub fn index(&self, subset: u64, xs: &[u32]) -> usize {
        debug_assert_eq!(xs.len(), self.n());
        let mut idx = colex_rank(subset) as usize;
        for (x, &s) in xs.iter().zip(&self.sizes[1..]) {
            debug_assert!(*x < s);
            idx = idx * s as usize + *x as usize;
        }
        idx
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductColoring {
    pub shape: ProductShape,
    pub table: BitTable,
}

impl ProductColoring {
    pub fn new(shape: ProductShape, table: BitTable) -> Result<Self> {
        shape.validate()?;
        if table.len() != shape.domain_len()? {
            return Err(Error::InvalidInput(alloc::format!(
                "table has {} bits, shape needs {}",
                table.len(),
                shape.domain_len()?
            )));
        }
        Ok(Self { shape, table })
    }

    /// Tabulates `f(J, x_1..x_n)` over the whole domain.
    pub fn from_fn(shape: ProductShape, mut f: impl FnMut(u64, &[u32]) -> u8) -> Result<Self> {
        shape.validate()?;
        let mut table = BitTable::zeros(shape.domain_len()?);
        for_each_point(&shape, |j, xs| table.set(shape.index(j, xs), f(j, xs)));
        Ok(Self { shape, table })
    }

    pub fn color(&self, subset: u64, xs: &[u32]) -> u8 {
        self.table.get(self.shape.index(subset, xs))
    }
}

/// Visits every `(J, x_1..x_n)` in table order.
pub fn for_each_point(shape: &ProductShape, mut f: impl FnMut(u64, &[u32])) {
    let tail = &shape.sizes[1..];
    let mut xs = alloc::vec![0u32; tail.len()];
    for j in k_subsets(shape.sizes[0], shape.k) {
        xs.iter_mut().for_each(|x| *x = 0);
        loop {
            f(j, &xs);
            if !odometer(&mut xs, |i| tail[i]) {
                break;
            }
        }
    }
}

/// Advances a mixed-radix counter (last digit fastest); false on wrap.
pub(crate) fn odometer(digits: &mut [u32], radix: impl Fn(usize) -> u32) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

pub(crate) fn odometer_u8(digits: &mut [u8], radix: u8) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HomogeneousSelection {
    /// `H_j` as increasing element lists.
    pub h: Vec<Vec<u32>>,
    pub color: u8,
    pub verified: bool,
}

/// `S_k(m_0)`, the least `r` with `r -> (m_0)^k_2`. The `k = 1` value is
/// the pigeonhole number; tests pin it to the enumerated one.
fn s_base(k: u32, m0: u32, cap: u64) -> Result<u64> {
    if k == 1 {
        let v = pigeonhole_arrow(m0) as u64;
        return if v > cap { Err(cap_err("s_bound", 0)) } else { Ok(v) };
    }
    let r = least_arrow(m0, k, cap.min(64) as u32).map_err(|_| cap_err("s_bound", 0))?;
    Ok(r as u64)
}

fn cap_err(what: &'static str, step: u32) -> Error {
    Error::CapExceeded { what, step: Some(step) }
}

/// The sufficient sizes `S_k(m_0), S_k(m_0, m_1), ..., S_k(m_0..m_n)`.
///
/// `S_k(m_0..m_n) = m_n * 2^N` with `N = C(S_k(m_0), k) * prod_{1<=j<n} S_k(m_0..m_j)`.
/// Every value must stay `<= cap`.
pub fn s_bound(k: u32, ms: &[u32], cap: u64) -> Result<Vec<u64>> {
    validate_ms(k, ms)?;
    let mut out = Vec::with_capacity(ms.len());
    out.push(s_base(k, ms[0], cap)?);
    let mut n_acc: u128 = binomial(out[0], k as u64).ok_or(cap_err("s_bound", 1))? as u128;
    for (step, &m) in ms.iter().enumerate().skip(1) {
        if step >= 2 {
            n_acc = n_acc.checked_mul(out[step - 1] as u128).ok_or(cap_err("s_bound", step as u32))?;
        }
        if n_acc >= 64 {
            return Err(cap_err("s_bound", step as u32));
        }
        let value = (m as u128) << n_acc;
        if value > cap as u128 {
            return Err(cap_err("s_bound", step as u32));
        }
        out.push(value as u64);
    }
    Ok(out)
}

fn validate_ms(k: u32, ms: &[u32]) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if ms.is_empty() || ms.contains(&0) {
        return Err(Error::InvalidInput("ms must be a nonempty sequence of positive counts".into()));
    }
    Ok(())
}

/// The first numbers of the varying-index bounds `S_{k,n}` for `n <= 1`:
/// `S_{k,0}(m_0) = r_k(m_0)`, `S_{k,1}(m_0) = 2 r_k(m_0)` and
/// `S_{k,1}(m_0, m_1) = r_k^{S_{k,1}(m_0)}(m_1) * 2^{C(S_{k,1}(m_0), k)}`.
pub fn s_kn_bound(k: u32, n: u32, ms: &[u32], cap: u64) -> Result<Vec<u64>> {
    validate_ms(k, ms)?;
    let arrow_cap = cap.min(64) as u32;
    let least = |m: u32| -> Result<u32> {
        if k == 1 {
            Ok(pigeonhole_arrow(m))
        } else {
            least_arrow(m, k, arrow_cap)
        }
    };
    let check = |v: u128, step: u32| if v > cap as u128 { Err(cap_err("s_kn_bound", step)) } else { Ok(v as u64) };
    match n {
        0 => Ok(alloc::vec![check(least(ms[0]).map_err(|_| cap_err("s_kn_bound", 0))? as u128, 0)?]),
        1 => {
            let first = check(2 * least(ms[0]).map_err(|_| cap_err("s_kn_bound", 0))? as u128, 0)?;
            let mut out = alloc::vec![first];
            if let Some(&m1) = ms.get(1) {
                let iters = u32::try_from(first).map_err(|_| cap_err("s_kn_bound", 1))?;
                let it = if k == 1 {
                    iterate_with(iters, m1, |x| {
                        let v = pigeonhole_arrow(x);
                        if v as u64 > cap { Err(cap_err("s_kn_bound", 1)) } else { Ok(v) }
                    })
                } else {
                    iterate_arrow(iters, m1, k, arrow_cap)
                }
                .map_err(|_| cap_err("s_kn_bound", 1))?;
                let exp = binomial(first, k as u64).ok_or(cap_err("s_kn_bound", 1))?;
                if exp >= 64 {
                    return Err(cap_err("s_kn_bound", 1));
                }
                out.push(check((it as u128) << exp, 1)?);
            }
            Ok(out)
        }
        other => Err(Error::UnsupportedN(other)),
    }
}

/// Produces `H_j` with `|H_j| = m_j` on which the coloring is constant.
///
/// Requires `|K_j| >= S_k(m_0..m_j)`. Coordinates below the one being
/// stabilized are restricted to their first `S_k(m_0..m_j)` points (the
/// stabilization count depends on them); the top coordinate is used in
/// full. At each step the majority color class is kept, ties going to
/// color 0, truncated in ascending order to `m_n * 2^(N - i - 1)`.
pub fn homogenize_product(k: u32, ms: &[u32], coloring: &ProductColoring) -> Result<HomogeneousSelection> {
    let shape = &coloring.shape;
    if shape.k != k {
        return Err(Error::InvalidInput("coloring k differs from requested k".into()));
    }
    if ms.len() != shape.sizes.len() {
        return Err(Error::InvalidInput(alloc::format!(
            "{} sizes requested for a {}-coordinate product",
            ms.len(),
            shape.sizes.len()
        )));
    }
    validate_ms(k, ms)?;
    let bounds = s_bound_prefix(k, ms);
    for (j, &have) in shape.sizes.iter().enumerate() {
        let need = bounds.get(j).copied().unwrap_or(u64::MAX);
        if (have as u64) < need {
            return Err(Error::ShapeTooSmall { coordinate: j, have: have as u64, need });
        }
    }
    let grounds: Vec<Vec<u32>> = shape.sizes.iter().map(|&s| (0..s).collect()).collect();
    let color = |j: u64, xs: &[u32]| coloring.color(j, xs);
    let (h, c) = stabilize(k, ms, &bounds, &grounds, &color)?;
    let mut sel = HomogeneousSelection { h, color: c, verified: false };
    sel.verified = verify_selection(coloring, &sel);
    if !sel.verified {
        return Err(Error::InternalContradiction("homogenized selection failed verification".into()));
    }
    Ok(sel)
}

// Bound values until the first overflow.
fn s_bound_prefix(k: u32, ms: &[u32]) -> Vec<u64> {
    for len in (1..=ms.len()).rev() {
        if let Ok(v) = s_bound(k, &ms[..len], u64::MAX) {
            return v;
        }
    }
    Vec::new()
}

type ColorFn<'a> = dyn Fn(u64, &[u32]) -> u8 + 'a;

// `grounds[0]` holds the k-subset coordinate's points; J masks are over
// actual point values.
fn stabilize(k: u32, ms: &[u32], bounds: &[u64], grounds: &[Vec<u32>], color: &ColorFn<'_>) -> Result<(Vec<Vec<u32>>, u8)> {
    let top = ms.len() - 1;
    if top == 0 {
        let g0 = &grounds[0];
        let (pos, c) = find_homogeneous(g0.len() as u32, k, ms[0], |s| color(lift(g0, s), &[]))
            .ok_or_else(|| Error::InternalContradiction("no homogeneous set above the arrow bound".into()))?;
        return Ok((alloc::vec![elements(pos).into_iter().map(|i| g0[i as usize]).collect()], c));
    }

    let lower: Vec<Vec<u32>> = (0..top)
        .map(|j| grounds[j].iter().copied().take(bounds[j] as usize).collect())
        .collect();
    let lower_shape_sizes: Vec<u32> = lower.iter().map(|g| g.len() as u32).collect();
    let tuples = lower_tuples(k, &lower, &lower_shape_sizes);
    let n_tuples = tuples.len() as u32;
    let m_top = ms[top] as u128;

    let mut current: Vec<u32> = grounds[top].clone();
    for (i, (j, xs)) in tuples.iter().enumerate() {
        let target = m_top << (n_tuples - i as u32 - 1);
        let mut point = xs.clone();
        point.push(0);
        let (mut zeros, mut ones) = (Vec::new(), Vec::new());
        for &x in &current {
            *point.last_mut().unwrap() = x;
            if color(*j, &point) == 0 { zeros.push(x) } else { ones.push(x) }
        }
        let mut keep = if ones.len() > zeros.len() { ones } else { zeros };
        if (keep.len() as u128) < target {
            return Err(Error::InternalContradiction(alloc::format!(
                "stabilization step {i} kept {} points, needs {target}",
                keep.len()
            )));
        }
        keep.truncate(target as usize);
        current = keep;
    }
    current.truncate(ms[top] as usize);
    if current.len() < ms[top] as usize {
        return Err(Error::InternalContradiction("top coordinate ran out of points".into()));
    }
    let h_top = current;
    let anchor = h_top[0];
    let induced = |j: u64, xs: &[u32]| {
        let mut p = xs.to_vec();
        p.push(anchor);
        color(j, &p)
    };
    let (mut h, c) = stabilize(k, &ms[..top], bounds, &lower, &induced)?;
    h.push(h_top);
    Ok((h, c))
}

fn lift(ground: &[u32], positions: u64) -> u64 {
    elements(positions).into_iter().fold(0, |acc, i| acc | 1u64 << ground[i as usize])
}

// Tuples of `[G_0]^k x G_1 x ... x G_{top-1}` in table order, J as a mask
// over actual values.
fn lower_tuples(k: u32, lower: &[Vec<u32>], sizes: &[u32]) -> Vec<(u64, Vec<u32>)> {
    let mut out = Vec::new();
    let tail = &sizes[1..];
    let mut digits = alloc::vec![0u32; tail.len()];
    for pos in k_subsets(sizes[0], k) {
        let j = lift(&lower[0], pos);
        digits.iter_mut().for_each(|d| *d = 0);
        loop {
            let xs: Vec<u32> = digits.iter().enumerate().map(|(i, &d)| lower[i + 1][d as usize]).collect();
            out.push((j, xs));
            if !odometer(&mut digits, |i| tail[i]) {
                break;
            }
        }
    }
    out
}

/// True iff every point of `[H_0]^k x H_1 x ... x H_n` has the selection's
/// color. Pure enumeration; the embedded `verified` flag is ignored.
pub fn verify_selection(coloring: &ProductColoring, sel: &HomogeneousSelection) -> bool {
    let shape = &coloring.shape;
    if sel.h.len() != shape.sizes.len() || sel.color > 1 {
        return false;
    }
    for (h, &size) in sel.h.iter().zip(&shape.sizes) {
        if h.iter().any(|&x| x >= size) || h.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
    }
    let sub_sizes: Vec<u32> = sel.h.iter().map(|h| h.len() as u32).collect();
    if sub_sizes[0] > 64 {
        return false;
    }
    let tail = &sub_sizes[1..];
    if tail.contains(&0) {
        return true;
    }
    let mut digits = alloc::vec![0u32; tail.len()];
    for pos in k_subsets(sub_sizes[0], shape.k) {
        let j = lift(&sel.h[0], pos);
        digits.iter_mut().for_each(|d| *d = 0);
        loop {
            let xs: Vec<u32> = digits.iter().enumerate().map(|(i, &d)| sel.h[i + 1][d as usize]).collect();
            if coloring.color(j, &xs) != sel.color {
                return false;
            }
            if !odometer(&mut digits, |i| tail[i]) {
                break;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn parity_example() -> ProductColoring {
        let shape = ProductShape::new(1, vec![1, 4]).unwrap();
        ProductColoring::from_fn(shape, |_, xs| (xs[0] % 2) as u8).unwrap()
    }

    #[test]
    fn s_bound_hand_recursion() {
        assert_eq!(s_bound(1, &[2, 2], u64::MAX).unwrap(), vec![3, 16]);
        assert_eq!(s_bound(1, &[1, 1], u64::MAX).unwrap(), vec![1, 2]);
        assert_eq!(s_bound(2, &[2], u64::MAX).unwrap(), vec![2]);
        // N = C(1,1) * S(1,1) = 2, S(1,1,1) = 1 * 2^2
        assert_eq!(s_bound(1, &[1, 1, 1], u64::MAX).unwrap(), vec![1, 2, 4]);
        // N = C(3,1) * 16 = 48, 2 * 2^48
        assert_eq!(s_bound(1, &[2, 2, 2], u64::MAX).unwrap(), vec![3, 16, 2u64 << 48]);
        assert!(matches!(s_bound(1, &[2, 2, 2], 1000), Err(Error::CapExceeded { step: Some(2), .. })));
        assert!(matches!(s_bound(1, &[2, 2, 2, 2], u64::MAX), Err(Error::CapExceeded { .. })));
        assert!(s_bound(1, &[], 10).is_err());
        assert!(s_bound(1, &[0], 10).is_err());
    }

    #[test]
    fn k1_base_matches_enumeration() {
        for m in 1..=6 {
            assert_eq!(s_base(1, m, u64::MAX).unwrap(), least_arrow(m, 1, 20).unwrap() as u64);
        }
    }

    #[test]
    fn s_kn_values() {
        assert_eq!(s_kn_bound(1, 0, &[3], u64::MAX).unwrap(), vec![5]);
        assert_eq!(s_kn_bound(1, 1, &[2], u64::MAX).unwrap(), vec![6]);
        assert_eq!(s_kn_bound(2, 0, &[2], u64::MAX).unwrap(), vec![2]);
        // S_{1,1}(1) = 2, r_1^2(1) = 1, 1 * 2^C(2,1) = 4
        assert_eq!(s_kn_bound(1, 1, &[1, 1], u64::MAX).unwrap(), vec![2, 4]);
        // S_{1,1}(2) = 6, r_1^6(2) = 65, 65 * 2^6
        assert_eq!(s_kn_bound(1, 1, &[2, 2], u64::MAX).unwrap(), vec![6, 65 * 64]);
        assert_eq!(s_kn_bound(1, 2, &[2], 100), Err(Error::UnsupportedN(2)));
    }

    #[test]
    fn parity_example_selects_a_parity_class() {
        let c = parity_example();
        let sel = homogenize_product(1, &[1, 2], &c).unwrap();
        assert!(sel.verified);
        assert_eq!(sel.h[0], vec![0]);
        assert!(sel.h[1] == vec![0, 2] || sel.h[1] == vec![1, 3]);
        let bad = HomogeneousSelection { h: vec![vec![0], vec![0, 1]], color: 0, verified: true };
        assert!(!verify_selection(&c, &bad));
    }

    #[test]
    fn constant_colorings_take_first_points() {
        for color in 0..2u8 {
            let shape = ProductShape::new(1, vec![3, 16]).unwrap();
            let c = ProductColoring::from_fn(shape, |_, _| color).unwrap();
            let sel = homogenize_product(1, &[2, 2], &c).unwrap();
            assert_eq!(sel.h, vec![vec![0, 1], vec![0, 1]]);
            assert_eq!(sel.color, color);
            let wrong = HomogeneousSelection { color: color ^ 1, ..sel.clone() };
            assert!(!verify_selection(&c, &wrong));
        }
    }

    #[test]
    fn shape_too_small_is_reported() {
        let shape = ProductShape::new(1, vec![3, 15]).unwrap();
        let c = ProductColoring::from_fn(shape, |_, _| 0).unwrap();
        assert_eq!(
            homogenize_product(1, &[2, 2], &c),
            Err(Error::ShapeTooSmall { coordinate: 1, have: 15, need: 16 })
        );
    }

    #[test]
    fn vacuous_when_m0_below_k() {
        let shape = ProductShape::new(3, vec![2, 2]).unwrap();
        let c = ProductColoring::from_fn(shape, |_, _| 1).unwrap();
        let sel = homogenize_product(3, &[2, 2], &c).unwrap();
        assert_eq!(sel.h, vec![vec![0, 1], vec![0, 1]]);
        assert!(sel.verified);
    }

    #[test]
    fn k2_triangle_level_with_second_coordinate() {
        // S_2(3) = 6, N = C(6,2) = 15, S_2(3,1) = 2^15 is too large to
        // tabulate comfortably, so use m_0 = 2: S_2(2) = 2, N = 1, S = m_1 * 2.
        let shape = ProductShape::new(2, vec![2, 6]).unwrap();
        let c = ProductColoring::from_fn(shape, |_, xs| (xs[0] >= 2) as u8).unwrap();
        let sel = homogenize_product(2, &[2, 3], &c).unwrap();
        assert_eq!(sel.h[1].len(), 3);
        assert!(sel.verified);
    }
}

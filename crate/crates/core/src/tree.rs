//! Finite truncations of the varying-index product-tree theorems.
//!
//! Every search here is a deterministic depth-first walk over coordinates
//! `j = 0, 1, ...`: each coordinate is either placed in `L` (with a chosen
//! subset of the prescribed size) or reduced to a singleton, and is then
//! optionally declared a level of `N`, at which point the coloring must be
//! constant on the whole level. Certificates record how many levels were
//! requested; they never stand for the infinitary statement.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::bits::BitTable;
use crate::error::{Error, Result};
use crate::product::odometer;
use crate::subset::{binomial, colex_rank, elements, k_subsets, mask_of};

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeveledFamily {
    pub sizes: Vec<u32>,
}

impl LeveledFamily {
    pub fn new(sizes: Vec<u32>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidInput("family needs depth >= 1 and nonempty levels".into()));
        }
        if sizes.iter().any(|&s| s > 64) {
            return Err(Error::InvalidInput("levels are limited to 64 points".into()));
        }
        Ok(Self { sizes })
    }

    pub fn depth(&self) -> usize {
        self.sizes.len()
    }

    /// `|K_j| >= j + 1` for every level.
    pub fn has_growth(&self) -> bool {
        self.sizes.iter().enumerate().all(|(j, &s)| s as usize > j)
    }
}

/// A coloring of `U_n U_{l <= n} [K_l]^k x prod_{j <= n, j != l} K_j`.
///
/// `xs` lists the chosen points of the coordinates `j <= n, j != l` in
/// increasing `j`; `subset` is a mask over the points of `K_l`.
pub trait VaryingIndexColoring {
    fn k(&self) -> u32;
    fn sizes(&self) -> &[u32];
    fn color(&self, n: usize, l: usize, subset: u64, xs: &[u32]) -> u8;

    /// Colorings that ignore `xs` may return false; the search then fixes
    /// every singleton to the first point.
    fn uses_side_coordinates(&self) -> bool {
        true
    }
}

/// A coloring of `U_n prod_{j <= n} K_j`.
pub trait PlainColoring {
    fn sizes(&self) -> &[u32];
    fn color(&self, n: usize, xs: &[u32]) -> u8;
}

/// Tabulated [`VaryingIndexColoring`]. Blocks are stored by `(n, l)` with
/// `n` ascending then `l` ascending; inside a block the colex rank of `J`
/// is the slowest axis and the side coordinates follow in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VaryingTable {
    k: u32,
    sizes: Vec<u32>,
    offsets: Vec<Vec<usize>>,
    table: BitTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ManifestEntry {
    pub n: usize,
    pub l: usize,
    pub offset: usize,
    pub len: usize,
}

impl VaryingTable {
    fn layout(k: u32, sizes: &[u32]) -> Result<(Vec<Vec<usize>>, usize)> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        LeveledFamily::new(sizes.to_vec())?;
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total: u128 = 0;
        for n in 0..sizes.len() {
            let mut row = Vec::with_capacity(n + 1);
            for l in 0..=n {
                row.push(total as usize);
                total += block_len(k, sizes, n, l);
                if total > 1 << 32 {
                    return Err(Error::InvalidInput("varying-index table too large".into()));
                }
            }
            offsets.push(row);
        }
        Ok((offsets, total as usize))
    }

    pub fn new(k: u32, sizes: Vec<u32>, table: BitTable) -> Result<Self> {
        let (offsets, total) = Self::layout(k, &sizes)?;
        if table.len() != total {
            return Err(Error::InvalidInput(alloc::format!("table has {} bits, layout needs {total}", table.len())));
        }
        Ok(Self { k, sizes, offsets, table })
    }

    pub fn from_fn(k: u32, sizes: Vec<u32>, mut f: impl FnMut(usize, usize, u64, &[u32]) -> u8) -> Result<Self> {
        let (offsets, total) = Self::layout(k, &sizes)?;
        let mut t = Self { k, sizes, offsets, table: BitTable::zeros(total) };
        for n in 0..t.sizes.len() {
            for l in 0..=n {
                let radix: Vec<u32> = side_coords(n, l).map(|j| t.sizes[j]).collect();
                let mut xs = alloc::vec![0u32; radix.len()];
                for j in k_subsets(t.sizes[l], t.k) {
                    xs.iter_mut().for_each(|x| *x = 0);
                    loop {
                        let idx = t.index(n, l, j, &xs);
                        t.table.set(idx, f(n, l, j, &xs));
                        if !odometer(&mut xs, |i| radix[i]) {
                            break;
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn table(&self) -> &BitTable {
        &self.table
    }

    pub fn manifest(&self) -> Vec<ManifestEntry> {
        let mut out = Vec::new();
        for (n, row) in self.offsets.iter().enumerate() {
            for (l, &offset) in row.iter().enumerate() {
                out.push(ManifestEntry { n, l, offset, len: block_len(self.k, &self.sizes, n, l) as usize });
            }
        }
        out
    }

    fn index(&self, n: usize, l: usize, subset: u64, xs: &[u32]) -> usize {
        let mut idx = colex_rank(subset) as usize;
        for (x, j) in xs.iter().zip(side_coords(n, l)) {
            idx = idx * self.sizes[j] as usize + *x as usize;
        }
        self.offsets[n][l] + idx
    }
}

impl VaryingIndexColoring for VaryingTable {
    fn k(&self) -> u32 {
        self.k
    }
    fn sizes(&self) -> &[u32] {
        &self.sizes
    }
    fn color(&self, n: usize, l: usize, subset: u64, xs: &[u32]) -> u8 {
        self.table.get(self.index(n, l, subset, xs))
    }
}

fn block_len(k: u32, sizes: &[u32], n: usize, l: usize) -> u128 {
    let mut len = binomial(sizes[l] as u64, k as u64).unwrap_or(u64::MAX) as u128;
    for j in side_coords(n, l) {
        len *= sizes[j] as u128;
    }
    len
}

fn side_coords(n: usize, l: usize) -> impl Iterator<Item = usize> {
    (0..=n).filter(move |&j| j != l)
}

/// Tabulated [`PlainColoring`], level blocks in increasing `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainTable {
    sizes: Vec<u32>,
    offsets: Vec<usize>,
    table: BitTable,
}

impl PlainTable {
    pub fn from_fn(sizes: Vec<u32>, mut f: impl FnMut(usize, &[u32]) -> u8) -> Result<Self> {
        LeveledFamily::new(sizes.clone())?;
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total: u128 = 0;
        let mut level: u128 = 1;
        for &s in &sizes {
            offsets.push(total as usize);
            level *= s as u128;
            total += level;
            if total > 1 << 32 {
                return Err(Error::InvalidInput("plain table too large".into()));
            }
        }
        let mut t = Self { sizes, offsets, table: BitTable::zeros(total as usize) };
        for n in 0..t.sizes.len() {
            let mut xs = alloc::vec![0u32; n + 1];
            loop {
                let idx = t.index(n, &xs);
                t.table.set(idx, f(n, &xs));
                if !odometer(&mut xs, |i| t.sizes[i]) {
                    break;
                }
            }
        }
        Ok(t)
    }

    fn index(&self, n: usize, xs: &[u32]) -> usize {
        let idx = xs.iter().zip(&self.sizes).fold(0usize, |acc, (&x, &s)| acc * s as usize + x as usize);
        self.offsets[n] + idx
    }
}

impl PlainColoring for PlainTable {
    fn sizes(&self) -> &[u32] {
        &self.sizes
    }
    fn color(&self, n: usize, xs: &[u32]) -> u8 {
        self.table.get(self.index(n, xs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Targets {
    pub l: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum TreeKind {
    Varying,
    FixedBlock { m0: u32, r: u32 },
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TreeCertificate {
    pub shape: TreeKind,
    /// Subset size of the special coordinate; 0 for plain products.
    pub k: u32,
    /// Requested `|H_{l_i}|` in order of `L`.
    pub ms: Vec<u32>,
    pub l: Vec<usize>,
    pub n: Vec<usize>,
    pub h: Vec<Vec<u32>>,
    pub color: u8,
    /// Number of `N` levels asked for; the certificate says nothing beyond it.
    pub levels_requested: usize,
    pub verified: bool,
}

#[derive(Clone, Copy)]
enum Mode<'a> {
    Varying { ms: &'a [u32] },
    Fixed { m0: u32, r: u32 },
    Plain { ms: &'a [u32] },
}

type Eval<'a> = dyn Fn(usize, Option<usize>, u64, &[u32]) -> u8 + 'a;

struct Search<'a> {
    mode: Mode<'a>,
    k: u32,
    sizes: &'a [u32],
    targets: Targets,
    eval: &'a Eval<'a>,
    side: bool,
    budget: u64,
    nodes: u64,
    h: Vec<Vec<u32>>,
    l: Vec<usize>,
    n: Vec<usize>,
    color: Option<u8>,
}

impl Search<'_> {
    fn l_size(&self, p: usize) -> Option<u32> {
        match self.mode {
            Mode::Varying { ms } => ms.get(p).copied(),
            Mode::Fixed { m0, r } => Some(if p == 0 { m0 } else { r + p as u32 }),
            Mode::Plain { ms } => ms.get(p).copied(),
        }
    }

    fn done(&self) -> bool {
        match self.mode {
            Mode::Plain { .. } => self.n.len() == self.targets.n,
            _ => self.l.len() == self.targets.l && self.n.len() == self.targets.n,
        }
    }

    fn can_be_l(&self, j: usize) -> bool {
        match self.mode {
            Mode::Plain { ms } => j < ms.len(),
            Mode::Fixed { .. } if j == 0 => true,
            Mode::Fixed { .. } if self.l.is_empty() => false,
            _ => self.l.len() < self.targets.l && self.n.len() == self.l.len(),
        }
    }

    fn must_be_l(&self, j: usize) -> bool {
        matches!(self.mode, Mode::Plain { .. }) || (matches!(self.mode, Mode::Fixed { .. }) && j == 0)
    }

    fn can_be_n(&self) -> bool {
        match self.mode {
            Mode::Plain { .. } => self.n.len() < self.targets.n,
            _ => self.n.len() < self.targets.n && self.n.len() < self.l.len(),
        }
    }

    fn certificate(&self) -> TreeCertificate {
        let (shape, k, ms) = match self.mode {
            Mode::Varying { ms } => (TreeKind::Varying, self.k, ms[..self.l.len()].to_vec()),
            Mode::Fixed { m0, r } => (
                TreeKind::FixedBlock { m0, r },
                self.k,
                (0..self.l.len()).map(|p| if p == 0 { m0 } else { r + p as u32 }).collect(),
            ),
            Mode::Plain { ms } => (TreeKind::Plain, 0, ms[..self.h.len()].to_vec()),
        };
        TreeCertificate {
            shape,
            k,
            ms,
            l: self.l.clone(),
            n: self.n.clone(),
            h: self.h.clone(),
            color: self.color.unwrap_or(0),
            levels_requested: self.targets.n,
            verified: false,
        }
    }

    // Checks level `n` against the running color, fixing it if unset.
    fn level_ok(&mut self, n: usize) -> bool {
        let mut want = self.color;
        let ok = level_points(self.mode_kind(), self.k, &self.l, &self.h, n, &mut |lvl, sub, xs| {
            let c = (self.eval)(n, lvl, sub, xs);
            match want {
                None => {
                    want = Some(c);
                    true
                }
                Some(w) => w == c,
            }
        });
        if ok {
            self.color = want.or(self.color);
        }
        ok
    }

    fn mode_kind(&self) -> LevelKind {
        match self.mode {
            Mode::Varying { .. } => LevelKind::Varying,
            Mode::Fixed { .. } => LevelKind::Fixed,
            Mode::Plain { .. } => LevelKind::Plain,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        self.nodes += 1;
        self.nodes > self.budget
    }

    // Returns true once the visitor accepts a certificate.
    fn dfs(&mut self, j: usize, visit: &mut dyn FnMut(&TreeCertificate) -> bool) -> bool {
        if j >= self.sizes.len() || self.out_of_budget() {
            return false;
        }
        let remaining = self.sizes.len() - j;
        let need = match self.mode {
            Mode::Plain { .. } => self.targets.n - self.n.len(),
            _ => (self.targets.l - self.l.len()).max(self.targets.n - self.n.len()),
        };
        if need > remaining {
            return false;
        }
        let size_j = self.sizes[j];

        if self.can_be_l(j) {
            let p = self.l.len();
            if let Some(m) = self.l_size(p).filter(|&m| m <= size_j) {
                for mask in k_subsets(size_j, m) {
                    self.h.push(elements(mask));
                    self.l.push(j);
                    let stop = self.after_choice(j, visit);
                    self.l.pop();
                    self.h.pop();
                    if stop {
                        return true;
                    }
                    if self.nodes > self.budget {
                        return false;
                    }
                }
            }
        }
        if !self.must_be_l(j) {
            let span = if self.side { size_j } else { 1 };
            for x in 0..span {
                self.h.push(alloc::vec![x]);
                let stop = self.after_choice(j, visit);
                self.h.pop();
                if stop {
                    return true;
                }
                if self.nodes > self.budget {
                    return false;
                }
            }
        }
        false
    }

    fn after_choice(&mut self, j: usize, visit: &mut dyn FnMut(&TreeCertificate) -> bool) -> bool {
        if self.can_be_n() {
            let saved = self.color;
            if self.level_ok(j) {
                self.n.push(j);
                let stop = if self.done() {
                    let cert = self.certificate();
                    visit(&cert)
                } else {
                    self.dfs(j + 1, visit)
                };
                self.n.pop();
                self.color = saved;
                if stop {
                    return true;
                }
            } else {
                self.color = saved;
            }
        }
        if self.done() {
            // trailing L index after the last level
            let cert = self.certificate();
            return visit(&cert);
        }
        self.dfs(j + 1, visit)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LevelKind {
    Varying,
    Fixed,
    Plain,
}

type PointFn<'a> = dyn FnMut(Option<usize>, u64, &[u32]) -> bool + 'a;

// Calls `f(l, J, xs)` on every point of level `n`; stops early on false.
fn level_points(
    kind: LevelKind,
    k: u32,
    l_set: &[usize],
    h: &[Vec<u32>],
    n: usize,
    f: &mut PointFn<'_>,
) -> bool {
    let specials: Vec<Option<usize>> = match kind {
        LevelKind::Varying => l_set.iter().copied().filter(|&l| l <= n).map(Some).collect(),
        LevelKind::Fixed => alloc::vec![Some(0)],
        LevelKind::Plain => alloc::vec![None],
    };
    for special in specials {
        let coords: Vec<usize> = match (kind, special) {
            (LevelKind::Fixed, _) => (1..=n).collect(),
            (_, Some(l)) => side_coords(n, l).collect(),
            (_, None) => (0..=n).collect(),
        };
        let radix: Vec<u32> = coords.iter().map(|&j| h[j].len() as u32).collect();
        let subsets: Box<dyn Iterator<Item = u64>> = match special {
            Some(l) => {
                let hl = &h[l];
                Box::new(k_subsets(hl.len() as u32, k).map(move |pos| mask_of(&crate::subset::select(hl, pos))))
            }
            None => Box::new(core::iter::once(0u64)),
        };
        let mut digits = alloc::vec![0u32; coords.len()];
        let mut xs = alloc::vec![0u32; coords.len()];
        for sub in subsets {
            digits.iter_mut().for_each(|d| *d = 0);
            loop {
                for (i, &j) in coords.iter().enumerate() {
                    xs[i] = h[j][digits[i] as usize];
                }
                if !f(special, sub, &xs) {
                    return false;
                }
                if !odometer(&mut digits, |i| radix[i]) {
                    break;
                }
            }
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    mode: Mode<'_>,
    k: u32,
    sizes: &[u32],
    targets: Targets,
    eval: &Eval<'_>,
    side: bool,
    budget: u64,
    visit: &mut dyn FnMut(&TreeCertificate) -> bool,
) -> Result<Option<TreeCertificate>> {
    let mut s = Search {
        mode,
        k,
        sizes,
        targets,
        eval,
        side,
        budget,
        nodes: 0,
        h: Vec::new(),
        l: Vec::new(),
        n: Vec::new(),
        color: None,
    };
    let mut found = None;
    let stopped = s.dfs(0, &mut |c| {
        if visit(c) {
            found = Some(c.clone());
            true
        } else {
            false
        }
    });
    if stopped {
        let mut cert = found.expect("visitor accepted a certificate");
        cert.verified = true;
        return Ok(Some(cert));
    }
    if s.nodes > budget {
        return Err(Error::NotFoundWithinDepth { depth: sizes.len(), budget_exhausted: true });
    }
    Ok(None)
}

fn check_varying_args(k: u32, ms: &[u32], sizes: &[u32], targets: Targets) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    LeveledFamily::new(sizes.to_vec())?;
    if targets.n == 0 || !(targets.l == targets.n || targets.l == targets.n + 1) {
        return Err(Error::InvalidInput("targets need |N| >= 1 and |L| in {|N|, |N|+1}".into()));
    }
    if ms.len() < targets.l || ms.contains(&0) {
        return Err(Error::InvalidInput("one positive size per requested L index is required".into()));
    }
    Ok(())
}

/// Visits varying-index certificates in search order until `visit` returns
/// true. `Ok(None)` means the space within the family's depth is exhausted.
pub fn search_varying(
    ms: &[u32],
    coloring: &dyn VaryingIndexColoring,
    targets: Targets,
    budget: u64,
    visit: &mut dyn FnMut(&TreeCertificate) -> bool,
) -> Result<Option<TreeCertificate>> {
    let k = coloring.k();
    let sizes = coloring.sizes();
    check_varying_args(k, ms, sizes, targets)?;
    let eval = |n: usize, l: Option<usize>, sub: u64, xs: &[u32]| coloring.color(n, l.unwrap_or(0), sub, xs);
    run_search(Mode::Varying { ms }, k, sizes, targets, &eval, coloring.uses_side_coordinates(), budget, visit)
}

/// First certificate (in search order) for the main theorem's conclusion
/// shape: `l_0 <= n_0 < l_1 <= n_1 < ...`, `|H_{l_i}| = ms[i]`, singletons off
/// `L`, constant on every level `n in N`.
pub fn homogenize_varying(ms: &[u32], coloring: &dyn VaryingIndexColoring, targets: Targets) -> Result<TreeCertificate> {
    homogenize_varying_with_budget(ms, coloring, targets, DEFAULT_NODE_BUDGET)
}

pub fn homogenize_varying_with_budget(
    ms: &[u32],
    coloring: &dyn VaryingIndexColoring,
    targets: Targets,
    budget: u64,
) -> Result<TreeCertificate> {
    search_varying(ms, coloring, targets, budget, &mut |_| true)?
        .ok_or(Error::NotFoundWithinDepth { depth: coloring.sizes().len(), budget_exhausted: false })
}

/// The block-step shape: special index fixed at coordinate 0 with
/// `|H_0| = m0`, further `L` sizes `r + 1, r + 2, ...`, singletons elsewhere.
/// Coordinate 0 must hold at least `S_k(m0)` points.
pub fn homogenize_fixed_block(
    m0: u32,
    r: u32,
    coloring: &dyn VaryingIndexColoring,
    targets: Targets,
) -> Result<TreeCertificate> {
    let k = coloring.k();
    let sizes = coloring.sizes();
    LeveledFamily::new(sizes.to_vec())?;
    if m0 == 0 || targets.n == 0 || !(targets.l == targets.n || targets.l == targets.n + 1) {
        return Err(Error::InvalidInput("fixed block needs m0 >= 1, |N| >= 1, |L| in {|N|, |N|+1}".into()));
    }
    let base = crate::product::s_bound(k, &[m0], 64).map_err(|_| Error::Shape("S_k(m0) exceeds 64".into()))?[0];
    if (sizes[0] as u64) < base {
        return Err(Error::Shape(alloc::format!("|K_0| = {} is below S_k(m0) = {base}", sizes[0])));
    }
    // greedy room check for the growing sizes r + i
    let mut j = 1;
    for i in 1..targets.l {
        let need = r + i as u32;
        while j < sizes.len() && sizes[j] < need {
            j += 1;
        }
        if j >= sizes.len() {
            return Err(Error::Shape(alloc::format!("no level can hold |H| = r + {i} = {need}")));
        }
        j += 1;
    }
    let eval = |n: usize, _l: Option<usize>, sub: u64, xs: &[u32]| coloring.color(n, 0, sub, xs);
    run_search(
        Mode::Fixed { m0, r },
        k,
        sizes,
        targets,
        &eval,
        coloring.uses_side_coordinates(),
        DEFAULT_NODE_BUDGET,
        &mut |_| true,
    )?
    .ok_or(Error::NotFoundWithinDepth { depth: sizes.len(), budget_exhausted: false })
}

/// Plain products: `|H_j| = ms[j]` and the coloring constant on
/// `prod_{j <= n} H_j` for at least `levels` many `n`.
pub fn homogenize_dplt(ms: &[u32], coloring: &dyn PlainColoring, levels: usize) -> Result<TreeCertificate> {
    let sizes = coloring.sizes();
    LeveledFamily::new(sizes.to_vec())?;
    if levels == 0 || ms.contains(&0) || ms.is_empty() {
        return Err(Error::InvalidInput("plain search needs levels >= 1 and positive sizes".into()));
    }
    let eval = |n: usize, _l: Option<usize>, _sub: u64, xs: &[u32]| coloring.color(n, xs);
    let targets = Targets { l: 0, n: levels };
    run_search(Mode::Plain { ms }, 0, sizes, targets, &eval, true, DEFAULT_NODE_BUDGET, &mut |_| true)?
        .ok_or(Error::NotFoundWithinDepth { depth: sizes.len(), budget_exhausted: false })
}

fn shape_ok(cert: &TreeCertificate, sizes: &[u32]) -> bool {
    let h = &cert.h;
    if h.len() > sizes.len() || cert.color > 1 {
        return false;
    }
    for (j, hj) in h.iter().enumerate() {
        if hj.is_empty() || hj.iter().any(|&x| x >= sizes[j]) || hj.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
    }
    let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
    if !increasing(&cert.l) || !increasing(&cert.n) || cert.n.iter().any(|&n| n >= h.len()) {
        return false;
    }
    if cert.n.len() < cert.levels_requested {
        return false;
    }
    match cert.shape {
        TreeKind::Plain => h.len() <= cert.ms.len() && h.iter().zip(&cert.ms).all(|(hj, &m)| hj.len() == m as usize),
        _ => {
            if cert.l.len() != cert.ms.len() || cert.l.iter().any(|&l| l >= h.len()) {
                return false;
            }
            if matches!(cert.shape, TreeKind::FixedBlock { .. }) && cert.l.first() != Some(&0) {
                return false;
            }
            // l_0 <= n_0 < l_1 <= n_1 < ...
            if !(cert.l.len() == cert.n.len() || cert.l.len() == cert.n.len() + 1) {
                return false;
            }
            for (i, &n) in cert.n.iter().enumerate() {
                if cert.l[i] > n || cert.l.get(i + 1).is_some_and(|&next| next <= n) {
                    return false;
                }
            }
            (0..h.len()).all(|j| match cert.l.iter().position(|&l| l == j) {
                Some(p) => h[j].len() == cert.ms[p] as usize,
                None => h[j].len() == 1,
            })
        }
    }
}

fn verify_with(cert: &TreeCertificate, sizes: &[u32], eval: &Eval<'_>) -> bool {
    if !shape_ok(cert, sizes) {
        return false;
    }
    let kind = match cert.shape {
        TreeKind::Varying => LevelKind::Varying,
        TreeKind::FixedBlock { .. } => LevelKind::Fixed,
        TreeKind::Plain => LevelKind::Plain,
    };
    cert.n.iter().all(|&n| {
        level_points(kind, cert.k, &cert.l, &cert.h, n, &mut |l, sub, xs| eval(n, l, sub, xs) == cert.color)
    })
}

/// Re-enumerates every point of every level in `N`; the embedded
/// `verified` flag is ignored.
pub fn verify_tree(coloring: &dyn VaryingIndexColoring, cert: &TreeCertificate) -> bool {
    if cert.k != coloring.k() || matches!(cert.shape, TreeKind::Plain) {
        return false;
    }
    let eval = |n: usize, l: Option<usize>, sub: u64, xs: &[u32]| coloring.color(n, l.unwrap_or(0), sub, xs);
    verify_with(cert, coloring.sizes(), &eval)
}

pub fn verify_plain(coloring: &dyn PlainColoring, cert: &TreeCertificate) -> bool {
    if !matches!(cert.shape, TreeKind::Plain) {
        return false;
    }
    let eval = |n: usize, _l: Option<usize>, _sub: u64, xs: &[u32]| coloring.color(n, xs);
    verify_with(cert, coloring.sizes(), &eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(k: u32, sizes: Vec<u32>, f: impl FnMut(usize, usize, u64, &[u32]) -> u8) -> VaryingTable {
        VaryingTable::from_fn(k, sizes, f).unwrap()
    }

    // Every (L, N, H) of the varying shape within the family, in no
    // particular order, checked with `verify_tree`.
    fn brute_force(c: &VaryingTable, ms: &[u32], targets: Targets) -> bool {
        let depth = c.sizes().len();
        let mut found = false;
        for used in 1..=depth {
            let coords = used;
            // each coordinate: 0 = plain, 1 = in L, 2 = in L and N, 3 = in N only
            let mut roles = vec![0u32; coords];
            loop {
                let l: Vec<usize> = (0..coords).filter(|&j| roles[j] == 1 || roles[j] == 2).collect();
                let n: Vec<usize> = (0..coords).filter(|&j| roles[j] == 2 || roles[j] == 3).collect();
                if l.len() == targets.l && n.len() == targets.n {
                    found |= try_all_h(c, ms, &l, &n, coords, targets);
                }
                if found || !odometer(&mut roles, |_| 4) {
                    break;
                }
            }
            if found {
                break;
            }
        }
        found
    }

    fn try_all_h(c: &VaryingTable, ms: &[u32], l: &[usize], n: &[usize], coords: usize, targets: Targets) -> bool {
        let options: Vec<Vec<Vec<u32>>> = (0..coords)
            .map(|j| match l.iter().position(|&x| x == j) {
                Some(p) => k_subsets(c.sizes()[j], ms[p]).map(elements).collect(),
                None => (0..c.sizes()[j]).map(|x| vec![x]).collect(),
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            return false;
        }
        let mut pick = vec![0u32; coords];
        loop {
            let h: Vec<Vec<u32>> = (0..coords).map(|j| options[j][pick[j] as usize].clone()).collect();
            for color in 0..2 {
                let cert = TreeCertificate {
                    shape: TreeKind::Varying,
                    k: c.k(),
                    ms: ms[..l.len()].to_vec(),
                    l: l.to_vec(),
                    n: n.to_vec(),
                    h: h.clone(),
                    color,
                    levels_requested: targets.n,
                    verified: false,
                };
                if verify_tree(c, &cert) {
                    return true;
                }
            }
            if !odometer(&mut pick, |j| options[j].len() as u32) {
                return false;
            }
        }
    }

    fn lcg(seed: &mut u64) -> u8 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*seed >> 33) as u8 & 1
    }

    #[test]
    fn constant_coloring_interleaves() {
        let c = table(1, vec![1, 2, 3, 4, 5], |_, _, _, _| 1);
        let cert = homogenize_varying(&[1, 2], &c, Targets { l: 2, n: 2 }).unwrap();
        assert!(verify_tree(&c, &cert));
        assert_eq!(cert.l, vec![0, 1]);
        assert_eq!(cert.n, vec![0, 1]);
        assert_eq!(cert.color, 1);
        assert_eq!(cert.h[1].len(), 2);
    }

    #[test]
    fn chosen_point_color_blocks_pairs() {
        let c = table(1, vec![2, 2], |_, _, sub, _| sub.trailing_zeros() as u8);
        let ok = homogenize_varying(&[1], &c, Targets { l: 1, n: 1 }).unwrap();
        assert_eq!(ok.h[0].len(), 1);
        assert!(verify_tree(&c, &ok));
        assert_eq!(
            homogenize_varying(&[2], &c, Targets { l: 1, n: 1 }),
            Err(Error::NotFoundWithinDepth { depth: 2, budget_exhausted: false })
        );
    }

    #[test]
    fn parity_of_min_pair() {
        let sizes = vec![4, 1, 1, 1, 1, 1];
        let c = table(2, sizes, |_, l, sub, _| if l == 0 { (sub.trailing_zeros() % 2) as u8 } else { 0 });
        let cert = homogenize_varying(&[3], &c, Targets { l: 1, n: 1 }).unwrap();
        assert_eq!(cert.h[0], vec![0, 2, 3]);
        assert!(verify_tree(&c, &cert));
    }

    #[test]
    fn corrupted_certificates_fail() {
        let c = table(1, vec![1, 2, 3, 4], |n, _, _, xs| (xs.iter().sum::<u32>() as usize + n) as u8 % 2);
        let mut seed = 7;
        let c2 = table(1, vec![1, 2, 3, 4], |_, _, _, _| lcg(&mut seed));
        for col in [&c, &c2] {
            if let Ok(cert) = homogenize_varying(&[1, 2], col, Targets { l: 2, n: 2 }) {
                assert!(verify_tree(col, &cert));
                let mut bad = cert.clone();
                bad.color ^= 1;
                assert!(!verify_tree(col, &bad));
                let mut bad = cert.clone();
                bad.h[cert.l[1]] = vec![0];
                assert!(!verify_tree(col, &bad));
                let mut bad = cert.clone();
                bad.n.swap(0, 1);
                assert!(!verify_tree(col, &bad));
            }
        }
    }

    #[test]
    fn search_complete_against_brute_force() {
        let mut seed = 1;
        let targets = Targets { l: 2, n: 2 };
        for _ in 0..150 {
            let c = table(1, vec![1, 2, 3], |_, _, _, _| lcg(&mut seed));
            let found = homogenize_varying(&[1, 2], &c, targets).is_ok();
            assert_eq!(found, brute_force(&c, &[1, 2], targets));
        }
        for _ in 0..60 {
            let c = table(2, vec![3, 2, 3], |_, _, _, _| lcg(&mut seed));
            let ms = [2, 3];
            let t = Targets { l: 2, n: 1 };
            assert_eq!(homogenize_varying(&ms, &c, t).is_ok(), brute_force(&c, &ms, t));
        }
    }

    #[test]
    fn depth_one_matches_arrow_search() {
        for r in [5u32, 6] {
            let pairs = binomial(r as u64, 2).unwrap() as u32;
            let step = if r == 5 { 1 } else { 37 };
            let mut idx = 0u64;
            while idx < 1 << pairs {
                let bits = BitTable::from_u64(idx, pairs as usize);
                let c = VaryingTable::new(2, vec![r], bits.clone()).unwrap();
                let tree = homogenize_varying(&[3], &c, Targets { l: 1, n: 1 }).is_ok();
                let arrow = crate::arrow::find_homogeneous(r, 2, 3, |m| bits.get(colex_rank(m) as usize)).is_some();
                assert_eq!(tree, arrow, "r={r} coloring {idx}");
                idx += step;
            }
        }
    }

    #[test]
    fn fixed_block_shapes() {
        let c = table(1, vec![3, 1, 4, 1, 5], |_, _, _, _| 0);
        let cert = homogenize_fixed_block(2, 1, &c, Targets { l: 3, n: 3 }).unwrap();
        assert!(verify_tree(&c, &cert));
        assert_eq!(cert.l[0], 0);
        assert_eq!(cert.ms, vec![2, 2, 3]);
        // the only non-singleton level after 0 decides the color
        let c = table(1, vec![1, 4], |n, _, _, xs| if n == 1 { (xs[0] % 2) as u8 } else { 0 });
        let cert = homogenize_fixed_block(1, 1, &c, Targets { l: 2, n: 2 }).unwrap();
        assert!(verify_tree(&c, &cert));
        assert!(cert.h[1].iter().all(|x| x % 2 == 0));
        assert!(matches!(homogenize_fixed_block(1, 9, &c, Targets { l: 2, n: 2 }), Err(Error::Shape(_))));
        let small = table(2, vec![2, 4], |_, _, _, _| 0);
        assert!(matches!(homogenize_fixed_block(3, 1, &small, Targets { l: 1, n: 1 }), Err(Error::Shape(_))));
    }

    #[test]
    fn dplt_levels() {
        let c = PlainTable::from_fn(vec![3, 16], |_, _| 0).unwrap();
        let cert = homogenize_dplt(&[2, 2], &c, 2).unwrap();
        assert_eq!(cert.n, vec![0, 1]);
        assert!(verify_plain(&c, &cert));
        let parity = PlainTable::from_fn(vec![1, 4], |n, xs| if n == 1 { (xs[1] % 2) as u8 } else { 0 }).unwrap();
        let cert = homogenize_dplt(&[1, 2], &parity, 2).unwrap();
        assert_eq!(cert.h[1], vec![0, 2]);
        assert!(verify_plain(&parity, &cert));
        let mut bad = cert.clone();
        bad.h[1] = vec![0, 1];
        assert!(!verify_plain(&parity, &bad));
    }

    #[test]
    fn manifest_covers_table() {
        let c = table(2, vec![2, 3, 4], |_, _, _, _| 0);
        let m = c.manifest();
        assert_eq!(m.len(), 6);
        let last = m.last().unwrap();
        assert_eq!(last.offset + last.len, c.table().len());
    }
}

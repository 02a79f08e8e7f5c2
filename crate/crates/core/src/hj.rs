//! Words, variable words and Hales-Jewett searches over small alphabets.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitTable;
use crate::error::{Error, Result};

/// Alphabets are limited to ten letters so words print as digit strings.
pub const MAX_ALPHABET: u8 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Letter {
    Sym(u8),
    Var,
}

impl Letter {
    fn to_char(self) -> char {
        match self {
            Letter::Sym(a) => (b'0' + a) as char,
            Letter::Var => 'v',
        }
    }

    // v sorts after every symbol
    fn order_key(self, n: u8) -> u8 {
        match self {
            Letter::Sym(a) => a,
            Letter::Var => n,
        }
    }
}

fn check_alphabet(n: u8) -> Result<()> {
    if n == 0 || n > MAX_ALPHABET {
        return Err(Error::InvalidInput(alloc::format!("alphabet size must be in 1..={MAX_ALPHABET}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    n: u8,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(n: u8, letters: Vec<u8>) -> Result<Self> {
        check_alphabet(n)?;
        if letters.iter().any(|&a| a >= n) {
            return Err(Error::InvalidInput("letter outside the alphabet".into()));
        }
        Ok(Self { n, letters })
    }

    pub fn parse(n: u8, s: &str) -> Result<Self> {
        let letters = parse_letters(n, s)?;
        let plain: Option<Vec<u8>> = letters.iter().map(|l| if let Letter::Sym(a) = l { Some(*a) } else { None }).collect();
        Self::new(n, plain.ok_or_else(|| Error::InvalidInput("a word may not contain v".into()))?)
    }

    pub fn alphabet(&self) -> u8 {
        self.n
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Base-`N` value, most significant letter first.
    pub fn rank(&self) -> u64 {
        self.letters.iter().fold(0u64, |acc, &a| acc * self.n as u64 + a as u64)
    }

    pub fn unrank(n: u8, len: usize, mut rank: u64) -> Self {
        let mut letters = alloc::vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (rank % n as u64) as u8;
            rank /= n as u64;
        }
        Self { n, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|&a| write!(f, "{}", Letter::Sym(a).to_char()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableWord {
    n: u8,
    letters: Vec<Letter>,
}

fn parse_letters(n: u8, s: &str) -> Result<Vec<Letter>> {
    check_alphabet(n)?;
    s.chars()
        .map(|ch| match ch {
            'v' => Ok(Letter::Var),
            d if d.is_ascii_digit() && (d as u8 - b'0') < n => Ok(Letter::Sym(d as u8 - b'0')),
            other => Err(Error::InvalidInput(alloc::format!("'{other}' is not a letter of the alphabet {n}"))),
        })
        .collect()
}

impl VariableWord {
    pub fn new(n: u8, letters: Vec<Letter>) -> Result<Self> {
        check_alphabet(n)?;
        if letters.iter().any(|l| matches!(l, Letter::Sym(a) if *a >= n)) {
            return Err(Error::InvalidInput("letter outside the alphabet".into()));
        }
        if !letters.contains(&Letter::Var) {
            return Err(Error::InvalidInput("a variable word needs at least one v".into()));
        }
        Ok(Self { n, letters })
    }

    pub fn parse(n: u8, s: &str) -> Result<Self> {
        Self::new(n, parse_letters(n, s)?)
    }

    pub fn alphabet(&self) -> u8 {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The point `x[a]` of the line through `x`.
    pub fn point(&self, a: u8) -> Word {
        let letters = self.letters.iter().map(|l| match l {
            Letter::Sym(b) => *b,
            Letter::Var => a,
        });
        Word { n: self.n, letters: letters.collect() }
    }

    /// Order used for "first" lines and spans: shorter first, then
    /// lexicographic with `v` above every symbol.
    pub fn order_key(&self) -> (usize, Vec<u8>) {
        (self.len(), self.letters.iter().map(|l| l.order_key(self.n)).collect())
    }
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|l| write!(f, "{}", l.to_char()))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for VariableWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Substituted {
    Word(Word),
    Variable(VariableWord),
}

impl Substituted {
    pub fn letters(&self) -> Vec<Letter> {
        match self {
            Substituted::Word(w) => w.letters.iter().map(|&a| Letter::Sym(a)).collect(),
            Substituted::Variable(x) => x.letters.clone(),
        }
    }
}

impl fmt::Display for Substituted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Substituted::Word(w) => w.fmt(f),
            Substituted::Variable(x) => x.fmt(f),
        }
    }
}

fn check_letter(n: u8, lambda: Letter) -> Result<()> {
    match lambda {
        Letter::Sym(a) if a >= n => Err(Error::InvalidInput(alloc::format!("letter {a} outside alphabet {n}"))),
        _ => Ok(()),
    }
}

/// `x[lambda]`: every `v` replaced by `lambda`.
pub fn substitute(x: &VariableWord, lambda: Letter) -> Result<Substituted> {
    check_letter(x.n, lambda)?;
    Ok(match lambda {
        Letter::Var => Substituted::Variable(x.clone()),
        Letter::Sym(a) => Substituted::Word(x.point(a)),
    })
}

/// `x_0[lambda_0] ^ ... ^ x_m[lambda_m]`.
pub fn concat_span(xs: &[VariableWord], lambdas: &[Letter]) -> Result<Substituted> {
    if xs.len() != lambdas.len() {
        return Err(Error::InvalidInput("span needs one substitution per word".into()));
    }
    if xs.is_empty() {
        return Err(Error::InvalidInput("empty span".into()));
    }
    let n = xs[0].n;
    if xs.iter().any(|x| x.n != n) {
        return Err(Error::InvalidInput("words over different alphabets".into()));
    }
    let mut letters = Vec::new();
    for (x, &lambda) in xs.iter().zip(lambdas) {
        letters.extend(substitute(x, lambda)?.letters());
    }
    Ok(if letters.contains(&Letter::Var) {
        Substituted::Variable(VariableWord { n, letters })
    } else {
        Substituted::Word(Word { n, letters: letters.into_iter().map(|l| l.order_key(n)).collect() })
    })
}

/// Variable words of length `len` in line order.
pub fn variable_words(n: u8, len: usize) -> impl Iterator<Item = VariableWord> {
    let mut digits = alloc::vec![0u8; len];
    let mut done = len == 0;
    core::iter::from_fn(move || {
        while !done {
            let cur = digits.clone();
            done = !crate::product::odometer_u8(&mut digits, n + 1);
            if cur.contains(&n) {
                let letters = cur.iter().map(|&d| if d == n { Letter::Var } else { Letter::Sym(d) }).collect();
                return Some(VariableWord { n, letters });
            }
        }
        None
    })
}

/// All variable words of length `1..=max_len`, shortest first.
pub fn variable_word_pool(n: u8, max_len: usize) -> Vec<VariableWord> {
    (1..=max_len).flat_map(|len| variable_words(n, len)).collect()
}

/// A coloring of `N^length` indexed by word rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordColoring {
    pub n: u8,
    pub length: usize,
    pub table: BitTable,
}

impl WordColoring {
    pub fn new(n: u8, length: usize, table: BitTable) -> Result<Self> {
        check_alphabet(n)?;
        let need = (n as u64).checked_pow(length as u32).filter(|&v| v <= 1 << 30);
        if need != Some(table.len() as u64) {
            return Err(Error::InvalidInput("word coloring table has the wrong length".into()));
        }
        Ok(Self { n, length, table })
    }

    pub fn color(&self, w: &Word) -> u8 {
        self.table.get(w.rank() as usize)
    }
}

/// First variable word (in line order) whose line is monochromatic.
pub fn hj_certify(coloring: &WordColoring) -> Option<(VariableWord, u8)> {
    variable_words(coloring.n, coloring.length).find_map(|x| {
        let c = coloring.color(&x.point(0));
        (1..coloring.n).all(|a| coloring.color(&x.point(a)) == c).then_some((x, c))
    })
}

/// Largest table enumerated by [`hj_number`].
pub const HJ_MAX_POINTS: u32 = 24;

/// Least length at which every 2-coloring of `N^length` has a
/// monochromatic line, by exhaustive enumeration of colorings.
pub fn hj_number(n: u8, cap: usize) -> Result<usize> {
    check_alphabet(n)?;
    for len in 1..=cap {
        if hj_counterexample(n, len)?.is_none() {
            return Ok(len);
        }
    }
    Err(Error::CapExceeded { what: "hj_number", step: Some(cap as u32) })
}

/// The lowest-index coloring of `N^length` with no monochromatic line.
pub fn hj_counterexample(n: u8, len: usize) -> Result<Option<WordColoring>> {
    check_alphabet(n)?;
    let points = (n as u32)
        .checked_pow(len as u32)
        .filter(|&p| p <= HJ_MAX_POINTS)
        .ok_or(Error::CapExceeded { what: "hj_number", step: Some(len as u32) })?;
    for idx in 0..(1u64 << points) {
        let c = WordColoring { n, length: len, table: BitTable::from_u64(idx, points as usize) };
        if hj_certify(&c).is_none() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoSpan {
    /// Pool indices of the chosen words.
    pub indices: Vec<usize>,
    pub words: Vec<VariableWord>,
    pub color: u8,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SpanOptions {
    /// Pool indices must strictly increase (the plain HJ setting); when
    /// false a pool word may be reused at several positions.
    pub allow_repeats: bool,
    /// Bound on the summed length of the chosen words.
    pub max_total_len: Option<usize>,
    /// Search node budget; 0 means unlimited.
    pub budget: u64,
}

/// First `(x_0, ..., x_{p-1})` from `pool` on which `oracle` is constant
/// over every span `x_0[l_0] ^ ... ^ x_m[l_m]`, `m < p`, with some `l_j = v`.
pub fn find_mono_span(oracle: &dyn Fn(&VariableWord) -> u8, pool: &[VariableWord], p: usize) -> Option<MonoSpan> {
    find_mono_span_with(oracle, pool, p, SpanOptions::default()).ok().flatten()
}

pub fn find_mono_span_with(
    oracle: &dyn Fn(&VariableWord) -> u8,
    pool: &[VariableWord],
    p: usize,
    opts: SpanOptions,
) -> Result<Option<MonoSpan>> {
    if p == 0 {
        return Err(Error::InvalidInput("span length must be at least 1".into()));
    }
    let Some(first) = pool.first() else { return Ok(None) };
    let n = first.n;
    if pool.iter().any(|x| x.n != n) {
        return Err(Error::InvalidInput("pool mixes alphabets".into()));
    }
    let mut st = SpanSearch { oracle, pool, p, opts, n, chosen: Vec::new(), color: None, nodes: 0, total_len: 0 };
    if st.dfs() {
        let words = st.chosen.iter().map(|&i| pool[i].clone()).collect();
        return Ok(Some(MonoSpan { indices: st.chosen, words, color: st.color.unwrap_or(0) }));
    }
    if opts.budget > 0 && st.nodes > opts.budget {
        return Err(Error::NotFoundWithinDepth { depth: p, budget_exhausted: true });
    }
    Ok(None)
}

struct SpanSearch<'a> {
    oracle: &'a dyn Fn(&VariableWord) -> u8,
    pool: &'a [VariableWord],
    p: usize,
    opts: SpanOptions,
    n: u8,
    chosen: Vec<usize>,
    color: Option<u8>,
    nodes: u64,
    total_len: usize,
}

impl SpanSearch<'_> {
    fn dfs(&mut self) -> bool {
        if self.chosen.len() == self.p {
            return true;
        }
        let start = match (self.opts.allow_repeats, self.chosen.last()) {
            (false, Some(&i)) => i + 1,
            _ => 0,
        };
        for i in start..self.pool.len() {
            self.nodes += 1;
            if self.opts.budget > 0 && self.nodes > self.opts.budget {
                return false;
            }
            let len = self.pool[i].len();
            if self.opts.max_total_len.is_some_and(|m| self.total_len + len > m) {
                continue;
            }
            self.chosen.push(i);
            self.total_len += len;
            let saved = self.color;
            if self.newest_spans_agree() && self.dfs() {
                return true;
            }
            self.color = saved;
            self.total_len -= len;
            self.chosen.pop();
        }
        false
    }

    // Spans over all chosen words; shorter spans were checked earlier.
    fn newest_spans_agree(&mut self) -> bool {
        let words: Vec<&VariableWord> = self.chosen.iter().map(|&i| &self.pool[i]).collect();
        let mut ok = true;
        for_each_span(self.n, &words, &mut |span| {
            let c = (self.oracle)(span);
            match self.color {
                None => self.color = Some(c),
                Some(w) if w != c => ok = false,
                _ => {}
            }
            ok
        });
        ok
    }
}

/// Calls `f` on every span of exactly `words` with at least one `v`;
/// stops when `f` returns false.
pub fn for_each_span(n: u8, words: &[&VariableWord], f: &mut dyn FnMut(&VariableWord) -> bool) {
    let m = words.len();
    let mut digits = alloc::vec![0u8; m];
    loop {
        if digits.contains(&n) {
            let mut letters = Vec::new();
            for (x, &d) in words.iter().zip(&digits) {
                if d == n {
                    letters.extend_from_slice(&x.letters);
                } else {
                    letters.extend(x.point(d).letters.iter().map(|&a| Letter::Sym(a)));
                }
            }
            if !f(&VariableWord { n, letters }) {
                return;
            }
        }
        if !crate::product::odometer_u8(&mut digits, n + 1) {
            return;
        }
    }
}

/// Re-checks a span by enumerating every prefix and every substitution.
pub fn verify_span(oracle: &dyn Fn(&VariableWord) -> u8, words: &[VariableWord], color: u8) -> bool {
    let Some(first) = words.first() else { return false };
    let n = first.n;
    (1..=words.len()).all(|m| {
        let refs: Vec<&VariableWord> = words[..m].iter().collect();
        let mut ok = true;
        for_each_span(n, &refs, &mut |span| {
            ok = oracle(span) == color;
            ok
        });
        ok
    })
}

pub fn render_letters(letters: &[Letter]) -> String {
    letters.iter().map(|l| l.to_char()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn vw(n: u8, s: &str) -> VariableWord {
        VariableWord::parse(n, s).unwrap()
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&vw(2, "v0v"), Letter::Sym(1)).unwrap().to_string(), "101");
        assert_eq!(substitute(&vw(2, "v"), Letter::Var).unwrap(), Substituted::Variable(vw(2, "v")));
        assert_eq!(substitute(&vw(3, "vv1"), Letter::Sym(2)).unwrap().to_string(), "221");
        assert!(substitute(&vw(2, "v"), Letter::Sym(2)).is_err());
        assert!(VariableWord::parse(2, "01").is_err());
    }

    #[test]
    fn concat_examples() {
        let s = concat_span(&[vw(2, "v"), vw(2, "v")], &[Letter::Sym(0), Letter::Var]).unwrap();
        assert_eq!(s.to_string(), "0v");
        let s = concat_span(&[vw(2, "v0")], &[Letter::Sym(1)]).unwrap();
        assert!(matches!(s, Substituted::Word(_)));
        assert_eq!(s.to_string(), "10");
        let s = concat_span(&[vw(2, "v"), vw(2, "v1")], &[Letter::Var, Letter::Sym(0)]).unwrap();
        assert_eq!(s.to_string(), "v01");
        assert!(concat_span(&[vw(2, "v")], &[]).is_err());
    }

    #[test]
    fn line_order_puts_v_last() {
        let words: Vec<String> = variable_words(2, 2).map(|x| x.to_string()).collect();
        assert_eq!(words, vec!["0v", "1v", "v0", "v1", "vv"]);
        assert_eq!(variable_word_pool(2, 3).len(), 1 + 5 + 19);
    }

    #[test]
    fn certify_small_colorings() {
        // c(00) = c(01) = 0, c(10) = 0, c(11) = 1
        let c = WordColoring::new(2, 2, BitTable::from_bits(&[0, 0, 0, 1])).unwrap();
        let (line, color) = hj_certify(&c).unwrap();
        assert_eq!(line.to_string(), "0v");
        assert_eq!(color, 0);
        let c = WordColoring::new(2, 1, BitTable::from_bits(&[0, 1])).unwrap();
        assert_eq!(hj_certify(&c), None);
    }

    #[test]
    fn hj_numbers() {
        assert_eq!(hj_number(1, 3), Ok(1));
        assert_eq!(hj_number(2, 3), Ok(2));
        assert!(hj_counterexample(2, 1).unwrap().is_some());
        assert!(matches!(hj_number(3, 2), Err(Error::CapExceeded { .. })));
        let witness = hj_counterexample(3, 2).unwrap().unwrap();
        assert_eq!(hj_certify(&witness), None);
    }

    #[test]
    fn spans() {
        let pool = variable_word_pool(2, 2);
        let constant = |_: &VariableWord| 1u8;
        let s = find_mono_span(&constant, &pool, 3).unwrap();
        assert_eq!(s.indices, vec![0, 1, 2]);
        assert_eq!(s.color, 1);

        let first_letter = |x: &VariableWord| match x.letters()[0] {
            Letter::Var => 1,
            Letter::Sym(a) => a % 2,
        };
        let starts_v: Vec<VariableWord> = pool.iter().filter(|x| x.letters()[0] == Letter::Var).cloned().collect();
        let s = find_mono_span(&first_letter, &starts_v, 1).unwrap();
        assert_eq!(s.color, 1);
        assert!(verify_span(&first_letter, &s.words, s.color));
        // a second word lets l_0 = 0 through, which the oracle separates from v
        assert_eq!(find_mono_span(&first_letter, &starts_v, 2), None);

        let distinguish = |x: &VariableWord| (x.len() % 2) as u8;
        assert_eq!(find_mono_span(&distinguish, &[vw(2, "v")], 2), None);
    }

    #[test]
    fn span_search_with_repeats_and_length_cap() {
        let pool = variable_word_pool(2, 3);
        let by_len = |x: &VariableWord| (x.len() >= 3) as u8;
        let opts = SpanOptions { allow_repeats: true, max_total_len: Some(2), budget: 0 };
        let s = find_mono_span_with(&by_len, &pool, 2, opts).unwrap().unwrap();
        assert_eq!(s.words.iter().map(|w| w.len()).sum::<usize>(), 2);
        assert_eq!(s.color, 0);
        assert!(verify_span(&by_len, &s.words, 0));
    }
}

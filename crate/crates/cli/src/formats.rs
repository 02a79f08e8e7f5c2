//! On-disk formats: base64 bit tables, coloring files and oracle specs.

use std::collections::BTreeMap;

use anyhow::{bail, ensure, Context, Result};
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use pcramsey_core::bits::BitTable;
use pcramsey_core::creature::{Creature, Example, PartialFn};
use pcramsey_core::hj::WordColoring;
use pcramsey_core::pigeonhole::BuiltinColoring;
use pcramsey_core::product::{ProductColoring, ProductShape};
use pcramsey_core::sample::SeededColoring;
use pcramsey_core::tree::{ManifestEntry, VaryingTable};

pub fn encode_bits(t: &BitTable) -> String {
    STANDARD.encode(t.to_bytes())
}

pub fn decode_bits(s: &str, len: usize) -> Result<BitTable> {
    let bytes = STANDARD.decode(s).context("bits are not valid base64")?;
    BitTable::from_bytes(&bytes, len).with_context(|| format!("bits do not hold a table of {len} entries"))
}

pub fn parse_example(s: &str) -> std::result::Result<Example, String> {
    match s {
        "2.10" | "ex210" => Ok(Example::Ex210),
        "2.11" | "ex211" => Ok(Example::Ex211),
        "2.13" | "ex213" => Ok(Example::Ex213),
        _ => Err(format!("unknown example {s:?}; expected 2.10, 2.11 or 2.13")),
    }
}

/// `{ "k", "sizes", "bits" }`, rows ordered by subset rank then coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductColoringFile {
    pub k: u32,
    pub sizes: Vec<u32>,
    pub bits: String,
}

impl ProductColoringFile {
    pub fn from_coloring(c: &ProductColoring) -> Self {
        Self { k: c.shape.k, sizes: c.shape.sizes.clone(), bits: encode_bits(&c.table) }
    }

    pub fn to_coloring(&self) -> Result<ProductColoring> {
        let shape = ProductShape::new(self.k, self.sizes.clone())?;
        let table = decode_bits(&self.bits, shape.domain_len()?)?;
        Ok(ProductColoring::new(shape, table)?)
    }
}

/// Varying-index table with its `(n, l)` manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VaryingTableFile {
    pub k: u32,
    pub sizes: Vec<u32>,
    pub manifest: Vec<ManifestEntry>,
    pub bits: String,
}

impl VaryingTableFile {
    pub fn from_table(t: &VaryingTable, k: u32, sizes: &[u32]) -> Self {
        Self { k, sizes: sizes.to_vec(), manifest: t.manifest(), bits: encode_bits(t.table()) }
    }

    pub fn to_table(&self) -> Result<VaryingTable> {
        let len = self.manifest.last().map_or(0, |e| e.offset + e.len);
        let t = VaryingTable::new(self.k, self.sizes.clone(), decode_bits(&self.bits, len)?)?;
        ensure!(t.manifest() == self.manifest, "manifest does not match the layout of k and sizes");
        Ok(t)
    }
}

/// Coloring of `N^length` as a JSON bit array by word rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordColoringFile {
    pub n: u8,
    pub length: usize,
    pub bits: BitTable,
}

impl WordColoringFile {
    pub fn from_coloring(c: &WordColoring) -> Self {
        Self { n: c.n, length: c.length, bits: c.table.clone() }
    }

    pub fn to_coloring(&self) -> Result<WordColoring> {
        Ok(WordColoring::new(self.n, self.length, self.bits.clone())?)
    }
}

/// A creature coloring: a named oracle or a table keyed by fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum ColoringSpec {
    Builtin { oracle: BuiltinColoring },
    Table { default: u8, colors: BTreeMap<String, u8> },
}

impl ColoringSpec {
    pub fn named(name: &str, seed: u64, color: u8) -> Result<Self> {
        let oracle = match name {
            "seeded" => BuiltinColoring::Seeded { seed },
            "constant" => BuiltinColoring::Constant { color },
            "parity-min" => BuiltinColoring::ParityMin,
            "size-parity" => BuiltinColoring::SizeParity,
            "first-letter" => BuiltinColoring::FirstLetter,
            _ => bail!("unknown coloring {name:?}"),
        };
        Ok(Self::Builtin { oracle })
    }

    pub fn check(&self, example: Example) -> Result<()> {
        match self {
            Self::Builtin { oracle: BuiltinColoring::FirstLetter } if example != Example::Ex213 => {
                bail!("first-letter is defined for example 2.13 only")
            }
            Self::Table { default, colors } => {
                ensure!(*default < 2 && colors.values().all(|&c| c < 2), "table colors must be 0 or 1");
                for key in colors.keys() {
                    u64::from_str_radix(key, 16).with_context(|| format!("table key {key:?} is not a hex fingerprint"))?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn oracle<'a>(&'a self, base: &'a [Creature]) -> Box<dyn Fn(&Creature) -> u8 + 'a> {
        match self {
            Self::Builtin { oracle } => Box::new(oracle.oracle(base)),
            Self::Table { default, colors } => {
                let map: BTreeMap<u64, u8> = colors.iter().filter_map(|(k, &v)| Some((u64::from_str_radix(k, 16).ok()?, v))).collect();
                let default = *default;
                Box::new(move |x: &Creature| map.get(&x.fingerprint()).copied().unwrap_or(default))
            }
        }
    }
}

pub fn fingerprint_key(x: &Creature) -> String {
    format!("{:016x}", x.fingerprint())
}

/// A coloring of possibilities for conclusion recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PosColoringSpec {
    Seeded { seed: u64 },
    Constant { color: u8 },
    /// Parity of the value at the least point of the domain.
    LeastPointParity,
}

impl PosColoringSpec {
    pub fn color(&self, k: usize, f: &PartialFn) -> u8 {
        match *self {
            Self::Seeded { seed } => SeededColoring(seed).color_pos(k, f),
            Self::Constant { color } => color & 1,
            Self::LeastPointParity => f.pairs().first().map_or(0, |&(_, v)| (v & 1) as u8),
        }
    }
}

/// `K_N` creatures as words over their interval: digits on `X`, `v` elsewhere.
pub fn render(c: &Creature) -> String {
    match c {
        Creature::KN(t) => (t.m_dn..t.m_up).map(|p| t.phi_at(p).map_or('v', |d| char::from(b'0' + d))).collect(),
        Creature::K1(t) => format!("[{}, {}) i={} A={:?} |val|={}", t.m_dn, t.m_up, t.i, t.a, t.val.len()),
        Creature::K2(t) => format!("[{}, {}) dis={:?} |val|={}", t.m_dn, t.m_up, t.dis, t.val.len()),
    }
}

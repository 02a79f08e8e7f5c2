use alloc::vec;
use alloc::vec::Vec;

/// Fixed-length table of bits, the storage behind every explicit 2-coloring.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitTable {
    len: usize,
    words: Vec<u64>,
}

impl BitTable {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    /// Table whose bit `i` is bit `i` of `value`; `len` must be at most 64.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut t = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            t.words[0] = value & mask;
        }
        t
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> u8) -> Self {
        let mut t = Self::zeros(len);
        for i in 0..len {
            t.set(i, f(i));
        }
        t
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: u8) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let w = &mut self.words[i / 64];
        if bit & 1 == 1 {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, b ^ 1);
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Packs bits LSB-first into bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in 0..self.len {
            out[i / 8] |= self.get(i) << (i % 8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        Some(Self::from_fn(len, |i| (bytes[i / 8] >> (i % 8)) & 1))
    }
}

impl core::fmt::Debug for BitTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("BitTable(")?;
        for b in self.iter() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for BitTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.len))?;
        for b in self.iter() {
            seq.serialize_element(&b)?;
        }
        seq.end()
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for BitTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let bits: Vec<u8> = Vec::deserialize(d)?;
        if bits.iter().any(|&b| b > 1) {
            return Err(serde::de::Error::custom("bit arrays may only contain 0 and 1"));
        }
        Ok(Self::from_bits(&bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_across_words() {
        let mut t = BitTable::zeros(130);
        t.set(0, 1);
        t.set(64, 1);
        t.set(129, 1);
        assert_eq!(t.get(0), 1);
        assert_eq!(t.get(63), 0);
        assert_eq!(t.get(64), 1);
        assert_eq!(t.get(129), 1);
        t.flip(129);
        assert_eq!(t.get(129), 0);
    }

    #[test]
    fn bytes_roundtrip() {
        let t = BitTable::from_bits(&[1, 0, 1, 1, 0, 0, 0, 1, 1, 1]);
        let bytes = t.to_bytes();
        assert_eq!(bytes.len(), 2);
        assert_eq!(BitTable::from_bytes(&bytes, 10), Some(t));
        assert_eq!(BitTable::from_bytes(&bytes, 20), None);
    }

    #[test]
    fn from_u64_masks_high_bits() {
        let t = BitTable::from_u64(0b1111_0101, 4);
        assert_eq!(t.to_bits(), vec![1, 0, 1, 0]);
    }
}

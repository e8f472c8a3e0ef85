//! Share files for secure distributed storage.
//!
//! A byte string is prefixed with its length (8 bytes, big endian), read as
//! a big-endian bit stream, cut into `m`-bit symbols, and zero padded to a
//! whole number of `k`-symbol blocks. Each block is encoded with a fresh
//! randomizer; node `i` stores coordinate `i` of every block codeword.
//!
//! Share file layout, all integers big endian:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "EEWT"
//!      4     1  version (1)
//!      5     1  m
//!      6     4  modulus, GF(2) coefficient bits
//!     10     2  n
//!     12     2  k
//!     14     2  k*
//!     16     2  nu
//!     18     2  mu
//!     20     2  node index
//!     22     4  block count
//!     26     -  payload, block_count symbols of ceil(m/8) bytes each
//! ```

use thiserror::Error;

use crate::analysis::{equivocation_formula, Equivocation};
use crate::galois::Gf;
use crate::matrix::IndexSet;
use crate::rng;
use crate::wiretap::{NestedScheme, SchemeError};

pub const MAGIC: [u8; 4] = *b"EEWT";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 26;
const LENGTH_PREFIX: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StorageError {
    #[error("share files need a binary field GF(2^m) with m <= 16 and n, k, k*, nu, mu < 2^16")]
    UnsupportedField,
    #[error("share headers disagree: {0}")]
    HeaderMismatch(String),
    #[error("have {have} distinct shares, need {need}; need {} more shares", need - have)]
    InsufficientShares { have: usize, need: usize },
    #[error("share data is corrupt: {0}")]
    CorruptShare(String),
    #[error("malformed share file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShareHeader {
    pub m: u8,
    pub modulus: u32,
    pub n: u16,
    pub k: u16,
    pub k_star: u16,
    pub nu: u16,
    pub mu: u16,
    pub node_index: u16,
    pub block_count: u32,
}

impl ShareHeader {
    pub fn symbol_bytes(&self) -> usize {
        (self.m as usize).div_ceil(8)
    }

    fn for_scheme(scheme: &NestedScheme, node_index: usize, block_count: usize) -> Result<Self, StorageError> {
        let f = scheme.field();
        let small = |v: usize| u16::try_from(v).map_err(|_| StorageError::UnsupportedField);
        if f.characteristic() != 2 || f.degree() > 16 {
            return Err(StorageError::UnsupportedField);
        }
        Ok(ShareHeader {
            m: f.degree() as u8,
            modulus: f.modulus_value() as u32,
            n: small(scheme.n())?,
            k: small(scheme.k())?,
            k_star: small(scheme.k_star())?,
            nu: small(scheme.nu())?,
            mu: small(scheme.mu())?,
            node_index: small(node_index)?,
            block_count: u32::try_from(block_count).map_err(|_| StorageError::UnsupportedField)?,
        })
    }

    /// Equal in every field except the node index.
    fn same_scheme(&self, other: &ShareHeader) -> bool {
        ShareHeader {
            node_index: 0,
            ..*self
        } == ShareHeader {
            node_index: 0,
            ..*other
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareFile {
    pub header: ShareHeader,
    pub payload: Vec<u8>,
}

impl ShareFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(h.m);
        out.extend_from_slice(&h.modulus.to_be_bytes());
        for v in [h.n, h.k, h.k_star, h.nu, h.mu, h.node_index] {
            out.extend_from_slice(&v.to_be_bytes());
        }
        out.extend_from_slice(&h.block_count.to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, StorageError> {
        if bytes.len() < HEADER_LEN {
            return Err(StorageError::Malformed(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if bytes[..4] != MAGIC {
            return Err(StorageError::Malformed("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(StorageError::Malformed(format!("unsupported version {}", bytes[4])));
        }
        let u16_at = |o: usize| u16::from_be_bytes([bytes[o], bytes[o + 1]]);
        let u32_at = |o: usize| u32::from_be_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]);
        let header = ShareHeader {
            m: bytes[5],
            modulus: u32_at(6),
            n: u16_at(10),
            k: u16_at(12),
            k_star: u16_at(14),
            nu: u16_at(16),
            mu: u16_at(18),
            node_index: u16_at(20),
            block_count: u32_at(22),
        };
        if header.m == 0 || header.m > 16 {
            return Err(StorageError::Malformed(format!("unsupported symbol width m = {}", header.m)));
        }
        if header.node_index >= header.n {
            return Err(StorageError::Malformed(format!(
                "node index {} >= n = {}",
                header.node_index, header.n
            )));
        }
        let payload = bytes[HEADER_LEN..].to_vec();
        if payload.len() != header.block_count as usize * header.symbol_bytes() {
            return Err(StorageError::Malformed(format!(
                "payload has {} bytes, header promises {} symbols",
                payload.len(),
                header.block_count
            )));
        }
        Ok(ShareFile { header, payload })
    }

    pub fn symbols(&self) -> Vec<Gf> {
        let w = self.header.symbol_bytes();
        self.payload
            .chunks(w)
            .map(|c| Gf::from_raw(c.iter().fold(0u16, |acc, &b| (acc << 8) | b as u16)))
            .collect()
    }
}

/// `<basename>.share<node_index>`.
pub fn share_file_name(basename: &str, node_index: usize) -> String {
    format!("{basename}.share{node_index}")
}

fn check_field(scheme: &NestedScheme) -> Result<(), StorageError> {
    let f = scheme.field();
    if f.characteristic() != 2 || f.degree() > 16 {
        return Err(StorageError::UnsupportedField);
    }
    Ok(())
}

/// Length-prefixed bytes as `m`-bit symbols, padded to whole `k`-blocks.
pub fn pack_message(message: &[u8], m: u32, k: usize) -> Vec<Gf> {
    let mut bytes = (message.len() as u64).to_be_bytes().to_vec();
    bytes.extend_from_slice(message);
    let total_bits = bytes.len() * 8;
    let mut symbols = Vec::with_capacity(total_bits.div_ceil(m as usize));
    let mut bit = 0;
    while bit < total_bits {
        let mut v = 0u16;
        for b in bit..bit + m as usize {
            let set = b < total_bits && (bytes[b / 8] >> (7 - b % 8)) & 1 == 1;
            v = (v << 1) | set as u16;
        }
        symbols.push(Gf::from_raw(v));
        bit += m as usize;
    }
    if k > 0 {
        let blocks = symbols.len().div_ceil(k);
        symbols.resize(blocks * k, Gf::ZERO);
    }
    symbols
}

/// Inverse of [`pack_message`].
pub fn unpack_message(symbols: &[Gf], m: u32) -> Result<Vec<u8>, StorageError> {
    let mut bytes = Vec::with_capacity(symbols.len() * m as usize / 8 + 1);
    let (mut acc, mut filled) = (0u32, 0u32);
    for s in symbols {
        acc = (acc << m) | s.value() as u32;
        filled += m;
        while filled >= 8 {
            bytes.push((acc >> (filled - 8)) as u8);
            filled -= 8;
            acc &= (1 << filled) - 1;
        }
    }
    if bytes.len() < LENGTH_PREFIX {
        return Err(StorageError::CorruptShare("missing length prefix".into()));
    }
    let len = u64::from_be_bytes(bytes[..LENGTH_PREFIX].try_into().expect("8 bytes"));
    let end = LENGTH_PREFIX as u64 + len;
    if end > bytes.len() as u64 {
        return Err(StorageError::CorruptShare(format!(
            "length prefix {len} exceeds the {} recovered bytes",
            bytes.len() - LENGTH_PREFIX
        )));
    }
    Ok(bytes[LENGTH_PREFIX..end as usize].to_vec())
}

/// Splits `message` into `n` share files, drawing randomizers from `seed`.
pub fn split(scheme: &NestedScheme, message: &[u8], seed: u64) -> Result<Vec<ShareFile>, StorageError> {
    check_field(scheme)?;
    if scheme.k() == 0 {
        return Err(StorageError::Scheme(SchemeError::BadDimensions(
            "a scheme with k = 0 carries no data".into(),
        )));
    }
    let k = scheme.k();
    let symbols = pack_message(message, scheme.field().degree(), k);
    let blocks = symbols.len() / k;
    let headers = (0..scheme.n())
        .map(|i| ShareHeader::for_scheme(scheme, i, blocks))
        .collect::<Result<Vec<_>, _>>()?;
    let width = headers[0].symbol_bytes();
    let mut payloads = vec![Vec::with_capacity(blocks * width); scheme.n()];
    let mut rng = rng::seeded(seed, rng::stream::RANDOMIZER);
    for block in symbols.chunks(k) {
        let (x, _) = scheme.encode_with_rng(block, &mut rng)?;
        for (payload, s) in payloads.iter_mut().zip(&x) {
            payload.extend_from_slice(&s.value().to_be_bytes()[2 - width..]);
        }
    }
    Ok(headers
        .into_iter()
        .zip(payloads)
        .map(|(header, payload)| ShareFile { header, payload })
        .collect())
}

/// Checks headers against each other and the scheme; returns the distinct
/// shares in node order.
fn collate<'a>(scheme: &NestedScheme, files: &'a [ShareFile]) -> Result<Vec<&'a ShareFile>, StorageError> {
    check_field(scheme)?;
    let expected = ShareHeader::for_scheme(scheme, 0, 0)?;
    let mut distinct: Vec<&ShareFile> = Vec::new();
    for file in files {
        let h = &file.header;
        let matches_scheme = ShareHeader {
            node_index: 0,
            block_count: 0,
            ..*h
        } == expected;
        if !matches_scheme {
            return Err(StorageError::HeaderMismatch(format!(
                "node {} was written for a different scheme",
                h.node_index
            )));
        }
        if let Some(first) = distinct.first() {
            if !first.header.same_scheme(h) {
                return Err(StorageError::HeaderMismatch(format!(
                    "node {} disagrees with node {}",
                    h.node_index, first.header.node_index
                )));
            }
        }
        match distinct.iter().find(|f| f.header.node_index == h.node_index) {
            Some(prev) if prev.payload != file.payload => {
                return Err(StorageError::CorruptShare(format!(
                    "two different shares for node {}",
                    h.node_index
                )))
            }
            Some(_) => {}
            None => distinct.push(file),
        }
    }
    distinct.sort_by_key(|f| f.header.node_index);
    Ok(distinct)
}

fn node_set(scheme: &NestedScheme, shares: &[&ShareFile]) -> IndexSet {
    IndexSet::new(scheme.n(), shares.iter().map(|f| f.header.node_index as usize).collect())
        .expect("node indices are distinct and below n")
}

/// Recovers the original bytes from at least `ν` distinct shares.
pub fn reconstruct(scheme: &NestedScheme, files: &[ShareFile]) -> Result<Vec<u8>, StorageError> {
    let shares = collate(scheme, files)?;
    if shares.len() < scheme.nu() {
        return Err(StorageError::InsufficientShares {
            have: shares.len(),
            need: scheme.nu(),
        });
    }
    let decoder = scheme.decoder(&node_set(scheme, &shares))?;
    let columns: Vec<Vec<Gf>> = shares.iter().map(|f| f.symbols()).collect();
    let blocks = shares[0].header.block_count as usize;
    let mut symbols = Vec::with_capacity(blocks * scheme.k());
    let mut observed = vec![Gf::ZERO; shares.len()];
    for b in 0..blocks {
        for (slot, col) in observed.iter_mut().zip(&columns) {
            *slot = col[b];
        }
        match decoder.decode(&observed) {
            Ok(s) => symbols.extend(s),
            Err(SchemeError::Inconsistent) => {
                return Err(StorageError::CorruptShare(format!(
                    "block {b} is not consistent with any codeword"
                )))
            }
            Err(e) => return Err(e.into()),
        }
    }
    unpack_message(&symbols, scheme.field().degree())
}

/// What a holder of the given shares learns about each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakReport {
    pub nodes: IndexSet,
    pub block_count: usize,
    pub k: usize,
    /// Same for every block: the revealed positions do not change.
    pub equivocation_per_block: Equivocation,
}

impl LeakReport {
    pub fn full_secrecy(&self) -> bool {
        self.equivocation_per_block.dims == self.k
    }

    /// Secret symbols per block the holder can pin down.
    pub fn shortfall(&self) -> usize {
        self.k - self.equivocation_per_block.dims
    }
}

pub fn adversary_view(scheme: &NestedScheme, files: &[ShareFile]) -> Result<LeakReport, StorageError> {
    let shares = collate(scheme, files)?;
    let nodes = node_set(scheme, &shares);
    let block_count = shares.first().map_or(0, |f| f.header.block_count as usize);
    let equivocation = equivocation_formula(scheme, &nodes).expect("node set spans the scheme length");
    Ok(LeakReport {
        nodes,
        block_count,
        k: scheme.k(),
        equivocation_per_block: equivocation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;

    fn reference() -> NestedScheme {
        NestedScheme::eval(&Field::from_modulus(2, 3, 0xB).unwrap(), 7, 5, 3, None).unwrap()
    }

    #[test]
    fn header_layout_is_bit_exact() {
        let s = reference();
        let files = split(&s, b"hi", 1).unwrap();
        let bytes = files[3].to_bytes();
        assert_eq!(
            &bytes[..HEADER_LEN],
            &[
                0x45, 0x45, 0x57, 0x54, 0x01, 0x03, 0, 0, 0, 0x0B, 0, 7, 0, 2, 0, 3, 0, 5, 0, 3, 0, 3,
                0, 0, 0, 14
            ]
        );
        // 10 bytes = 80 bits = 27 three-bit symbols, padded to 14 blocks of 2
        assert_eq!(files[3].payload.len(), 14);
        assert_eq!(ShareFile::from_bytes(&bytes).unwrap(), files[3]);
    }

    #[test]
    fn pack_round_trip_and_padding() {
        for m in [3u32, 4, 8, 11, 16] {
            for msg in [&b""[..], b"\0\0\0", b"secret data \xff\x00"] {
                let symbols = pack_message(msg, m, 5);
                assert_eq!(symbols.len() % 5, 0);
                assert!(symbols.iter().all(|s| (s.value() as u32) < (1 << m)));
                assert_eq!(unpack_message(&symbols, m).unwrap(), msg);
            }
        }
        assert_eq!(pack_message(b"", 8, 1).len(), 8);
    }

    #[test]
    fn all_shares_and_nu_subsets_reconstruct() {
        let s = reference();
        let msg = b"the quick brown fox".to_vec();
        let files = split(&s, &msg, 7).unwrap();
        assert_eq!(files.len(), 7);
        assert_eq!(reconstruct(&s, &files).unwrap(), msg);
        for subset in IndexSet::combinations(7, 5) {
            let chosen: Vec<ShareFile> = subset.iter().map(|i| files[i].clone()).collect();
            assert_eq!(reconstruct(&s, &chosen).unwrap(), msg);
        }
    }

    #[test]
    fn seeds_change_shares_not_content() {
        let s = reference();
        let a = split(&s, b"abc", 1).unwrap();
        let b = split(&s, b"abc", 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(reconstruct(&s, &a[2..]).unwrap(), reconstruct(&s, &b[..5]).unwrap());
    }

    #[test]
    fn too_few_shares() {
        let s = reference();
        let files = split(&s, b"abc", 1).unwrap();
        let err = reconstruct(&s, &files[..3]).unwrap_err();
        assert_eq!(err, StorageError::InsufficientShares { have: 3, need: 5 });
        assert!(err.to_string().contains("need 2 more shares"));
        let dup = vec![files[0].clone(), files[0].clone(), files[1].clone(), files[2].clone(), files[3].clone()];
        assert!(matches!(
            reconstruct(&s, &dup),
            Err(StorageError::InsufficientShares { have: 4, .. })
        ));
    }

    #[test]
    fn corrupted_share_detected() {
        let s = reference();
        let mut files = split(&s, b"abcdef", 1).unwrap();
        files[1].payload[0] ^= 1;
        assert!(matches!(reconstruct(&s, &files), Err(StorageError::CorruptShare(_))));
    }

    #[test]
    fn mismatched_headers_rejected() {
        let s = reference();
        let mut files = split(&s, b"abcdef", 1).unwrap();
        files[2].header.block_count += 1;
        assert!(matches!(reconstruct(&s, &files), Err(StorageError::HeaderMismatch(_))));
        let other = NestedScheme::eval(&Field::with_default_modulus(2, 4).unwrap(), 7, 5, 3, None).unwrap();
        let files = split(&s, b"abc", 1).unwrap();
        assert!(matches!(reconstruct(&other, &files), Err(StorageError::HeaderMismatch(_))));
    }

    #[test]
    fn malformed_bytes_rejected() {
        let s = reference();
        let bytes = split(&s, b"abc", 1).unwrap()[0].to_bytes();
        assert!(ShareFile::from_bytes(&bytes[..10]).is_err());
        assert!(ShareFile::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(ShareFile::from_bytes(&bad).is_err());
    }

    #[test]
    fn adversary_views() {
        let s = reference();
        let files = split(&s, b"abc", 1).unwrap();
        let three = adversary_view(&s, &files[..3]).unwrap();
        assert!(three.full_secrecy());
        assert_eq!(three.equivocation_per_block.dims, 2);
        let none = adversary_view(&s, &[]).unwrap();
        assert_eq!(none.equivocation_per_block.dims, 2);
        let five = adversary_view(&s, &files[..5]).unwrap();
        assert_eq!((five.equivocation_per_block.dims, five.shortfall()), (0, 2));
    }

    #[test]
    fn prime_fields_unsupported() {
        let s = NestedScheme::eval(&Field::with_default_modulus(11, 1).unwrap(), 7, 5, 3, None).unwrap();
        assert_eq!(split(&s, b"x", 0).unwrap_err(), StorageError::UnsupportedField);
    }
}

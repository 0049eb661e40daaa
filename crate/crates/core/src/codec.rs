//! Vandermonde MDS erasure code over GF(2^8).
//!
//! Coded subpacket `x` of a content carries `sum_j x^j F_j` computed byte by
//! byte, for evaluation points `x = 1, 2, ..., r`. Any `K` distinct points
//! give an invertible `K x K` Vandermonde system.

use std::sync::OnceLock;

use thiserror::Error;

/// Reduction polynomial `x^8 + x^4 + x^3 + x^2 + 1`.
pub const POLY: u16 = 0x11D;

/// Largest number of coded subpackets per content (distinct nonzero points).
pub const MAX_POINTS: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("r = {0} exceeds the {MAX_POINTS} nonzero field elements")]
    TooManyPoints(usize),
    #[error("K = {k} exceeds r = {r}")]
    KExceedsR { k: usize, r: usize },
    #[error("need at least one subpacket")]
    Empty,
    #[error("payload lengths differ")]
    RaggedPayloads,
    #[error("encoding point {0} appears twice")]
    DuplicatePoint(u8),
    #[error("encoding point 0 is not allowed")]
    ZeroPoint,
    #[error("expected {expected} coded subpackets, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("coded subpackets belong to different contents")]
    MixedContent,
    #[error("decoding system is singular")]
    Singular,
}

/// One coded subpacket of a content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedSubpacket {
    pub content_id: usize,
    pub point: u8,
    pub payload: Vec<u8>,
}

/// Log/antilog tables for GF(2^8).
#[derive(Clone)]
pub struct Gf256 {
    exp: [u8; 512],
    log: [u8; 256],
}

impl Default for Gf256 {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for Gf256 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gf256").field("poly", &POLY).finish()
    }
}

impl Gf256 {
    pub fn new() -> Self {
        let mut exp = [0u8; 512];
        let mut log = [0u8; 256];
        let mut x: u16 = 1;
        for (i, e) in exp.iter_mut().take(255).enumerate() {
            *e = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & 0x100 != 0 {
                x ^= POLY;
            }
        }
        for i in 255..512 {
            exp[i] = exp[i - 255];
        }
        Gf256 { exp, log }
    }

    /// Corrupts one antilog entry. Used to check that self-tests notice a
    /// broken field.
    pub fn inject_fault(&mut self, index: usize) {
        let i = index % 255;
        self.exp[i] ^= 0x01;
        self.exp[i + 255] = self.exp[i];
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            None
        } else {
            Some(self.exp[255 - self.log[a as usize] as usize])
        }
    }

    pub fn pow(&self, a: u8, e: usize) -> u8 {
        if e == 0 {
            1
        } else if a == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] as usize * e) % 255]
        }
    }
}

/// Encoder/decoder bound to a set of field tables.
#[derive(Debug, Clone, Default)]
pub struct MdsCodec {
    gf: Gf256,
}

fn check_payloads(mut lens: impl Iterator<Item = usize>) -> Result<usize, CodecError> {
    let first = lens.next().ok_or(CodecError::Empty)?;
    if lens.any(|l| l != first) {
        return Err(CodecError::RaggedPayloads);
    }
    Ok(first)
}

impl MdsCodec {
    pub fn new() -> Self {
        MdsCodec { gf: Gf256::new() }
    }

    pub fn with_field(gf: Gf256) -> Self {
        MdsCodec { gf }
    }

    pub fn field(&self) -> &Gf256 {
        &self.gf
    }

    /// Encodes `K` equal-length subpackets into `r` coded subpackets at
    /// points `1..=r`.
    pub fn encode(
        &self,
        content_id: usize,
        subpackets: &[Vec<u8>],
        r: usize,
    ) -> Result<Vec<CodedSubpacket>, CodecError> {
        let k = subpackets.len();
        let len = check_payloads(subpackets.iter().map(Vec::len))?;
        if r > MAX_POINTS {
            return Err(CodecError::TooManyPoints(r));
        }
        if k > r {
            return Err(CodecError::KExceedsR { k, r });
        }
        let out = (1..=r)
            .map(|x| {
                let x = x as u8;
                let mut payload = vec![0u8; len];
                for (j, sub) in subpackets.iter().enumerate() {
                    let c = self.gf.pow(x, j);
                    for (o, &b) in payload.iter_mut().zip(sub) {
                        *o ^= self.gf.mul(c, b);
                    }
                }
                CodedSubpacket {
                    content_id,
                    point: x,
                    payload,
                }
            })
            .collect();
        Ok(out)
    }

    /// Recovers the `k` original subpackets from exactly `k` coded ones by
    /// Gauss-Jordan elimination.
    pub fn decode(&self, k: usize, coded: &[CodedSubpacket]) -> Result<Vec<Vec<u8>>, CodecError> {
        if coded.len() != k {
            return Err(CodecError::WrongCount {
                expected: k,
                got: coded.len(),
            });
        }
        let len = check_payloads(coded.iter().map(|c| c.payload.len()))?;
        if coded.iter().any(|c| c.content_id != coded[0].content_id) {
            return Err(CodecError::MixedContent);
        }
        let mut seen = [false; 256];
        for c in coded {
            if c.point == 0 {
                return Err(CodecError::ZeroPoint);
            }
            if std::mem::replace(&mut seen[c.point as usize], true) {
                return Err(CodecError::DuplicatePoint(c.point));
            }
        }

        let gf = &self.gf;
        let mut mat: Vec<Vec<u8>> = coded
            .iter()
            .map(|c| (0..k).map(|j| gf.pow(c.point, j)).collect())
            .collect();
        let mut rhs: Vec<Vec<u8>> = coded.iter().map(|c| c.payload.clone()).collect();

        for col in 0..k {
            let pivot = (col..k).find(|&r| mat[r][col] != 0).ok_or(CodecError::Singular)?;
            mat.swap(col, pivot);
            rhs.swap(col, pivot);
            let inv = gf.inv(mat[col][col]).ok_or(CodecError::Singular)?;
            for v in mat[col].iter_mut() {
                *v = gf.mul(*v, inv);
            }
            for v in rhs[col].iter_mut() {
                *v = gf.mul(*v, inv);
            }
            for row in 0..k {
                if row == col || mat[row][col] == 0 {
                    continue;
                }
                let f = mat[row][col];
                let (pm, pr) = (mat[col].clone(), rhs[col].clone());
                for (v, &p) in mat[row].iter_mut().zip(&pm) {
                    *v ^= gf.mul(f, p);
                }
                for (v, &p) in rhs[row].iter_mut().zip(&pr) {
                    *v ^= gf.mul(f, p);
                }
            }
        }
        debug_assert!(rhs.iter().all(|r| r.len() == len));
        Ok(rhs)
    }
}

fn shared() -> &'static MdsCodec {
    static CODEC: OnceLock<MdsCodec> = OnceLock::new();
    CODEC.get_or_init(MdsCodec::new)
}

/// [`MdsCodec::encode`] with the shared default tables.
pub fn encode(
    content_id: usize,
    subpackets: &[Vec<u8>],
    r: usize,
) -> Result<Vec<CodedSubpacket>, CodecError> {
    shared().encode(content_id, subpackets, r)
}

/// [`MdsCodec::decode`] with the shared default tables.
pub fn decode(k: usize, coded: &[CodedSubpacket]) -> Result<Vec<Vec<u8>>, CodecError> {
    shared().decode(k, coded)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift-and-add multiplication, independent of the tables.
    fn slow_mul(mut a: u8, mut b: u8) -> u8 {
        let mut p = 0u8;
        while b != 0 {
            if b & 1 != 0 {
                p ^= a;
            }
            let carry = a & 0x80 != 0;
            a <<= 1;
            if carry {
                a ^= (POLY & 0xFF) as u8;
            }
            b >>= 1;
        }
        p
    }

    #[test]
    fn tables_match_shift_and_add() {
        let gf = Gf256::new();
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(gf.mul(a, b), slow_mul(a, b));
            }
            if a != 0 {
                assert_eq!(gf.mul(a, gf.inv(a).unwrap()), 1);
            }
        }
        assert_eq!(gf.inv(0), None);
    }

    #[test]
    fn encode_examples() {
        let out = encode(0, &[vec![0x2a]], 1).unwrap();
        assert_eq!(out[0].payload, vec![0x2a]);

        let out = encode(7, &[vec![0x01], vec![0x02]], 3).unwrap();
        let payloads: Vec<u8> = out.iter().map(|c| c.payload[0]).collect();
        assert_eq!(payloads, vec![0x03, 0x05, 0x07]);
        assert!(out.iter().all(|c| c.content_id == 7));
    }

    #[test]
    fn decode_examples() {
        let coded = vec![
            CodedSubpacket { content_id: 0, point: 2, payload: vec![0x05] },
            CodedSubpacket { content_id: 0, point: 3, payload: vec![0x07] },
        ];
        assert_eq!(decode(2, &coded).unwrap(), vec![vec![0x01], vec![0x02]]);

        let single = vec![CodedSubpacket { content_id: 3, point: 1, payload: vec![9, 8, 7] }];
        assert_eq!(decode(1, &single).unwrap(), vec![vec![9, 8, 7]]);
    }

    #[test]
    fn errors() {
        let data = vec![vec![1u8, 2], vec![3, 4]];
        assert_eq!(encode(0, &data, 256), Err(CodecError::TooManyPoints(256)));
        assert_eq!(encode(0, &data, 1), Err(CodecError::KExceedsR { k: 2, r: 1 }));
        assert_eq!(encode(0, &[vec![1], vec![2, 3]], 3), Err(CodecError::RaggedPayloads));
        assert_eq!(encode(0, &[], 3), Err(CodecError::Empty));

        let coded = encode(0, &data, 4).unwrap();
        let dup = vec![coded[1].clone(), coded[1].clone()];
        assert_eq!(decode(2, &dup), Err(CodecError::DuplicatePoint(2)));
        assert_eq!(
            decode(2, &coded[..3]),
            Err(CodecError::WrongCount { expected: 2, got: 3 })
        );
        let mut mixed = coded[..2].to_vec();
        mixed[1].content_id = 1;
        assert_eq!(decode(2, &mixed), Err(CodecError::MixedContent));
        let mut zero = coded[..2].to_vec();
        zero[0].point = 0;
        assert_eq!(decode(2, &zero), Err(CodecError::ZeroPoint));
    }

    #[test]
    fn fault_breaks_roundtrip() {
        let mut gf = Gf256::new();
        gf.inject_fault(5);
        let codec = MdsCodec::with_field(gf);
        let data: Vec<Vec<u8>> = (0..3u8).map(|i| (0..32).map(|j| i * 31 + j).collect()).collect();
        let coded = codec.encode(0, &data, 6).unwrap();
        let clean = MdsCodec::new();
        let bad = (0..6).any(|i| {
            let sub = vec![coded[i].clone(), coded[(i + 1) % 6].clone(), coded[(i + 2) % 6].clone()];
            clean.decode(3, &sub).map_or(true, |d| d != data)
        });
        assert!(bad);
    }
}

//! Arithmetic in GF(2^m) using exponent/log tables.
//!
//! Elements are kept in polynomial form (bit `j` is the coefficient of
//! `x^j`), so addition is a XOR. Multiplication and inversion go through the
//! tables built from a primitive polynomial at construction time.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `x^8 + x^4 + x^3 + x^2 + 1`.
pub const DEFAULT_PRIM_POLY: u32 = 0x11d;

/// Extension degree and primitive polynomial of a binary extension field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub m: u32,
    pub prim_poly: u32,
}

impl FieldSpec {
    pub fn new(m: u32, prim_poly: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::Field(format!("extension degree {m} outside 2..=16")));
        }
        if prim_poly >> m != 1 {
            return Err(Error::Field(format!(
                "polynomial {prim_poly:#x} does not have degree {m}"
            )));
        }
        if prim_poly & 1 == 0 {
            return Err(Error::Field(format!(
                "polynomial {prim_poly:#x} has zero constant term"
            )));
        }
        Ok(FieldSpec { m, prim_poly })
    }

    /// Number of field elements, `2^m`.
    pub fn q(&self) -> usize {
        1 << self.m
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            m: 8,
            prim_poly: DEFAULT_PRIM_POLY,
        }
    }
}

/// A field element in polynomial representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Number of nonzero polynomial coefficients (binary-image weight).
    #[inline]
    pub fn bit_weight(self) -> u32 {
        self.0.count_ones()
    }
}

impl std::ops::Add for Gf {
    type Output = Gf;
    #[inline]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Gf {
    #[inline]
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

/// Exponent and log tables for one field. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    spec: FieldSpec,
    order: usize,
    // exp is stored twice over so that exp[a + b] needs no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let spec = FieldSpec::new(spec.m, spec.prim_poly)?;
        let q = spec.q();
        let order = q - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; q];
        let mut seen = vec![false; q];
        let mut a: u32 = 1;
        for k in 0..order {
            if seen[a as usize] {
                return Err(Error::Field(format!(
                    "polynomial {:#x} is not primitive: x has order {k}",
                    spec.prim_poly
                )));
            }
            seen[a as usize] = true;
            exp[k] = a as u16;
            exp[k + order] = a as u16;
            log[a as usize] = k as u16;
            a <<= 1;
            if a >> spec.m != 0 {
                a ^= spec.prim_poly;
            }
        }
        if a != 1 {
            return Err(Error::Field(format!(
                "polynomial {:#x} is not primitive",
                spec.prim_poly
            )));
        }
        Ok(Field {
            spec,
            order,
            exp,
            log,
        })
    }

    /// GF(2^8) under `x^8 + x^4 + x^3 + x^2 + 1`.
    pub fn gf256() -> Self {
        Field::new(FieldSpec::default()).expect("default polynomial is primitive")
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    pub fn q(&self) -> usize {
        self.order + 1
    }

    /// Size of the multiplicative group, `q - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `alpha^k`, with `k` taken modulo `q - 1`.
    #[inline]
    pub fn exp(&self, k: usize) -> Gf {
        Gf(self.exp[k % self.order])
    }

    /// Discrete log base alpha; `None` for zero.
    #[inline]
    pub fn log(&self, a: Gf) -> Option<usize> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize] as usize)
        }
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        Gf(self.exp[la + lb])
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        match self.log(a) {
            None => Err(Error::InverseOfZero),
            Some(0) => Ok(Gf::ONE),
            Some(l) => Ok(Gf(self.exp[self.order - l])),
        }
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Indices of the set coefficients of `a`, ascending.
    pub fn to_bits(&self, a: Gf) -> Vec<u32> {
        (0..self.spec.m).filter(|j| a.0 >> j & 1 == 1).collect()
    }

    pub fn contains(&self, a: Gf) -> bool {
        (a.0 as usize) < self.q()
    }

    /// Iterator over all nonzero elements in exponent order.
    pub fn nonzero(&self) -> impl Iterator<Item = Gf> + '_ {
        self.exp[..self.order].iter().map(|&p| Gf(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Square-and-multiply on raw polynomials, independent of the tables.
    fn poly_pow_x(e: u64, spec: FieldSpec) -> u16 {
        let mulp = |mut a: u32, mut b: u32| {
            let mut r = 0u32;
            while b != 0 {
                if b & 1 == 1 {
                    r ^= a;
                }
                b >>= 1;
                a <<= 1;
                if a >> spec.m != 0 {
                    a ^= spec.prim_poly;
                }
            }
            r
        };
        let (mut r, mut base, mut e) = (1u32, 2u32, e);
        while e != 0 {
            if e & 1 == 1 {
                r = mulp(r, base);
            }
            base = mulp(base, base);
            e >>= 1;
        }
        r as u16
    }

    #[test]
    fn exp_table_entries() {
        let f = Field::gf256();
        assert_eq!(f.exp(0), Gf(1));
        assert_eq!(f.exp(1), Gf(0b10));
        assert_eq!(f.to_bits(f.exp(8)), vec![0, 2, 3, 4]);
    }

    #[test]
    fn exp_table_matches_repeated_squaring() {
        let f = Field::gf256();
        for k in 0..255 {
            assert_eq!(f.exp(k).0, poly_pow_x(k as u64, f.spec()), "alpha^{k}");
        }
    }

    #[test]
    fn binary_expansion() {
        let f = Field::gf256();
        assert_eq!(f.to_bits(f.exp(6)), vec![6]);
        assert_eq!(f.to_bits(f.exp(89)), vec![0, 5, 6, 7]);
        assert!(f.to_bits(Gf::ZERO).is_empty());
    }

    #[test]
    fn addition_and_multiplication() {
        let f = Field::gf256();
        let a = f.exp(17);
        assert_eq!(a + a, Gf::ZERO);
        assert_eq!(a + Gf::ZERO, a);
        assert_eq!(f.exp(1) + f.exp(0), Gf(0b11));
        assert_eq!(f.mul(f.exp(1), f.exp(1)), f.exp(2));
        assert_eq!(f.mul(a, Gf::ZERO), Gf::ZERO);
        assert_eq!(f.inv(f.exp(5)).unwrap(), f.exp(255 - 5));
        assert_eq!(f.inv(Gf::ZERO), Err(Error::InverseOfZero));
        for x in f.nonzero() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Gf::ONE);
        }
    }

    #[test]
    fn log_round_trip() {
        for spec in [FieldSpec::default(), FieldSpec::new(2, 0b111).unwrap()] {
            let f = Field::new(spec).unwrap();
            for k in 0..f.order() {
                assert_eq!(f.log(f.exp(k)), Some(k));
            }
            assert_eq!(f.log(Gf::ZERO), None);
        }
    }

    #[test]
    fn rejects_bad_polynomials() {
        // x^8 + 1 is reducible
        assert!(Field::new(FieldSpec {
            m: 8,
            prim_poly: 0x101
        })
        .is_err());
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        assert!(Field::new(FieldSpec {
            m: 4,
            prim_poly: 0b11111
        })
        .is_err());
        assert!(FieldSpec::new(8, 0x1d).is_err());
        assert!(FieldSpec::new(8, 0x11c).is_err());
        assert!(FieldSpec::new(17, 0x2_0009).is_err());
        assert!(Field::new(FieldSpec {
            m: 16,
            prim_poly: 0x1_100b
        })
        .is_ok());
    }
}

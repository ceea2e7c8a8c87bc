//! Exact arithmetic in `Z[ω]` and `D[ω] = Z[ω, 1/√2]`, with `ω = e^{iπ/4}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// `a + bω + cω² + dω³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ZOmega {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl ZOmega {
    pub const ZERO: ZOmega = ZOmega::new(0, 0, 0, 0);
    pub const ONE: ZOmega = ZOmega::new(1, 0, 0, 0);
    pub const OMEGA: ZOmega = ZOmega::new(0, 1, 0, 0);
    pub const I: ZOmega = ZOmega::new(0, 0, 1, 0);
    /// `√2 = ω − ω³`.
    pub const SQRT2: ZOmega = ZOmega::new(0, 1, 0, -1);

    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> ZOmega {
        ZOmega { a, b, c, d }
    }

    /// `ω^k`.
    pub fn omega_pow(k: u32) -> ZOmega {
        let mut coeffs = [0i128; 4];
        let k = k % 8;
        coeffs[(k % 4) as usize] = if k < 4 { 1 } else { -1 };
        ZOmega::new(coeffs[0], coeffs[1], coeffs[2], coeffs[3])
    }

    pub fn is_zero(self) -> bool {
        self == ZOmega::ZERO
    }

    pub fn conj(self) -> ZOmega {
        ZOmega::new(self.a, -self.d, -self.c, -self.b)
    }

    /// Multiplication by `ω`.
    pub fn mul_omega(self) -> ZOmega {
        ZOmega::new(-self.d, self.a, self.b, self.c)
    }

    pub fn mul_sqrt2(self) -> ZOmega {
        let ZOmega { a, b, c, d } = self;
        ZOmega::new(b - d, a + c, b + d, c - a)
    }

    pub fn divisible_by_sqrt2(self) -> bool {
        (self.a - self.c) % 2 == 0 && (self.b - self.d) % 2 == 0
    }

    /// Exact division by `√2`; `None` when not divisible.
    pub fn div_sqrt2(self) -> Option<ZOmega> {
        if !self.divisible_by_sqrt2() {
            return None;
        }
        let ZOmega { a, b, c, d } = self;
        Some(ZOmega::new((b - d) / 2, (a + c) / 2, (b + d) / 2, (c - a) / 2))
    }

    /// Largest `k` with `√2^k` dividing `self` (`None` for zero).
    pub fn sqrt2_valuation(self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut x = self;
        while let Some(y) = x.div_sqrt2() {
            x = y;
            k += 1;
        }
        Some(k)
    }

    pub fn to_complex(self) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        Complex64::new(a + (b - d) * h, c + (b + d) * h)
    }

    /// Is the value real, i.e. of the form `x + y√2`.
    pub fn is_real(self) -> bool {
        self.c == 0 && self.b == -self.d
    }
}

impl Add for ZOmega {
    type Output = ZOmega;
    fn add(self, o: ZOmega) -> ZOmega {
        ZOmega::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for ZOmega {
    type Output = ZOmega;
    fn sub(self, o: ZOmega) -> ZOmega {
        ZOmega::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for ZOmega {
    type Output = ZOmega;
    fn neg(self) -> ZOmega {
        ZOmega::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for ZOmega {
    type Output = ZOmega;
    fn mul(self, o: ZOmega) -> ZOmega {
        let x = [self.a, self.b, self.c, self.d];
        let y = [o.a, o.b, o.c, o.d];
        let mut r = [0i128; 4];
        for i in 0..4 {
            for j in 0..4 {
                let p = x[i] * y[j];
                if i + j < 4 {
                    r[i + j] += p;
                } else {
                    r[i + j - 4] -= p;
                }
            }
        }
        ZOmega::new(r[0], r[1], r[2], r[3])
    }
}

impl fmt::Display for ZOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}ω+{}ω²+{}ω³", self.a, self.b, self.c, self.d)
    }
}

/// `z / √2^k`, reduced so that `k = 0` or `z` is not divisible by `√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElt {
    pub z: ZOmega,
    pub k: u32,
}

impl RingElt {
    pub const ZERO: RingElt = RingElt { z: ZOmega::ZERO, k: 0 };
    pub const ONE: RingElt = RingElt { z: ZOmega::ONE, k: 0 };

    pub fn new(z: ZOmega, k: u32) -> RingElt {
        RingElt { z, k }.reduced()
    }

    pub fn from_z(z: ZOmega) -> RingElt {
        RingElt { z, k: 0 }
    }

    fn reduced(mut self) -> RingElt {
        if self.z.is_zero() {
            return RingElt::ZERO;
        }
        while self.k > 0 {
            match self.z.div_sqrt2() {
                Some(y) => {
                    self.z = y;
                    self.k -= 1;
                }
                None => break,
            }
        }
        self
    }

    /// Numerator rescaled to denominator exponent `k ≥ self.k`.
    pub fn numerator_at(self, k: u32) -> ZOmega {
        assert!(k >= self.k);
        (self.k..k).fold(self.z, |z, _| z.mul_sqrt2())
    }

    pub fn conj(self) -> RingElt {
        RingElt { z: self.z.conj(), k: self.k }
    }

    /// √2-adic valuation; negative values mean a denominator.
    pub fn valuation(self) -> Option<i64> {
        self.z
            .sqrt2_valuation()
            .map(|v| v as i64 - self.k as i64)
    }

    pub fn to_complex(self) -> Complex64 {
        self.z.to_complex() / 2f64.sqrt().powi(self.k as i32)
    }
}

impl Add for RingElt {
    type Output = RingElt;
    fn add(self, o: RingElt) -> RingElt {
        let k = self.k.max(o.k);
        RingElt::new(self.numerator_at(k) + o.numerator_at(k), k)
    }
}

impl Sub for RingElt {
    type Output = RingElt;
    fn sub(self, o: RingElt) -> RingElt {
        self + (-o)
    }
}

impl Neg for RingElt {
    type Output = RingElt;
    fn neg(self) -> RingElt {
        RingElt { z: -self.z, k: self.k }
    }
}

impl Mul for RingElt {
    type Output = RingElt;
    fn mul(self, o: RingElt) -> RingElt {
        RingElt::new(self.z * o.z, self.k + o.k)
    }
}

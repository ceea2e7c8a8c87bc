use std::f64::consts::PI;
use std::fmt;

/// Default tolerance (radians) used to snap floating-point angles onto
/// exact dyadic multiples of π.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-9;

/// Largest power-of-two denominator exponent tried when snapping a float
/// angle. `π/2^12` is about 7.7e-4, far above any sane tolerance, which keeps
/// spurious snaps of generic angles negligible.
pub const MAX_SNAP_EXPONENT: u32 = 12;

const TWO_PI: f64 = 2.0 * PI;

/// A rotation angle, either an exact dyadic multiple of π or a generic float.
///
/// Exact angles are stored as `num·π / 2^exp`, normalized into `[0, 2π)` with
/// `num` odd whenever `exp > 0`. Float angles are reduced into `[0, 2π)` and
/// are never within the snapping tolerance of a dyadic value when built
/// through [`Angle::radians`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Dyadic { num: i64, exp: u32 },
    Radians(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Dyadic { num: 0, exp: 0 };

    /// `num·π / 2^exp`, normalized.
    pub fn dyadic(num: i64, exp: u32) -> Angle {
        assert!(exp < 62, "dyadic exponent too large");
        let modulus = 1i64 << (exp + 1);
        let mut num = num.rem_euclid(modulus);
        let mut exp = exp;
        while exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        Angle::Dyadic { num, exp }
    }

    /// π/4 as an exact angle.
    pub fn quarter_pi() -> Angle {
        Angle::dyadic(1, 2)
    }

    /// Builds an angle from radians, snapping with [`DEFAULT_ANGLE_TOL`].
    pub fn radians(x: f64) -> Angle {
        Angle::radians_with_tol(x, DEFAULT_ANGLE_TOL)
    }

    pub fn radians_with_tol(x: f64, tol: f64) -> Angle {
        assert!(x.is_finite(), "angle must be finite");
        let reduced = x.rem_euclid(TWO_PI);
        for exp in 0..=MAX_SNAP_EXPONENT {
            let scale = (1u64 << exp) as f64 / PI;
            let n = (reduced * scale).round();
            if (reduced - n / scale).abs() < tol {
                return Angle::dyadic(n as i64, exp);
            }
        }
        Angle::Radians(reduced)
    }

    /// Value in radians, in `[0, 2π)`.
    pub fn to_radians(self) -> f64 {
        match self {
            Angle::Dyadic { num, exp } => num as f64 * PI / (1u64 << exp) as f64,
            Angle::Radians(x) => x,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Angle::Dyadic { .. })
    }

    pub fn neg(self) -> Angle {
        match self {
            Angle::Dyadic { num, exp } => Angle::dyadic(-num, exp),
            Angle::Radians(x) => Angle::radians(-x),
        }
    }

    pub fn half(self) -> Angle {
        match self {
            Angle::Dyadic { num, exp } => Angle::dyadic(num, exp + 1),
            Angle::Radians(x) => Angle::radians(x / 2.0),
        }
    }

    pub fn add(self, other: Angle) -> Angle {
        match (self, other) {
            (Angle::Dyadic { num: a, exp: ea }, Angle::Dyadic { num: b, exp: eb }) => {
                let exp = ea.max(eb);
                Angle::dyadic((a << (exp - ea)) + (b << (exp - eb)), exp)
            }
            _ => Angle::radians(self.to_radians() + other.to_radians()),
        }
    }

    /// Returns `k` in `0..8` when the angle equals `kπ/4` (within `tol` for
    /// float angles).
    pub fn eighth_turns(self, tol: f64) -> Option<u8> {
        match self {
            Angle::Dyadic { num, exp } if exp <= 2 => Some((num << (2 - exp)) as u8),
            Angle::Dyadic { .. } => None,
            Angle::Radians(x) => {
                let k = (x * 4.0 / PI).round();
                if (x - k * PI / 4.0).abs() < tol {
                    Some((k as i64).rem_euclid(8) as u8)
                } else {
                    None
                }
            }
        }
    }

    /// True when the angle is a multiple of π/4, i.e. it needs no approximate
    /// synthesis.
    pub fn is_trivial(self, tol: f64) -> bool {
        self.eighth_turns(tol).is_some()
    }
}

impl fmt::Display for Angle {
    /// QASM expression syntax: `pi/4`, `3*pi/8`, or a plain float literal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Dyadic { num: 0, .. } => write!(f, "0"),
            Angle::Dyadic { num, exp: 0 } => {
                debug_assert_eq!(num, 1);
                write!(f, "pi")
            }
            Angle::Dyadic { num: 1, exp } => write!(f, "pi/{}", 1u64 << exp),
            Angle::Dyadic { num, exp } => write!(f, "{}*pi/{}", num, 1u64 << exp),
            Angle::Radians(x) => write!(f, "{:?}", x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_dyadic() {
        assert_eq!(Angle::dyadic(-1, 2), Angle::Dyadic { num: 7, exp: 2 });
        assert_eq!(Angle::dyadic(2, 3), Angle::Dyadic { num: 1, exp: 2 });
        assert_eq!(Angle::dyadic(8, 2), Angle::ZERO);
        assert_eq!(Angle::dyadic(3, 0), Angle::Dyadic { num: 1, exp: 0 });
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn snaps_float_quarter_pi() {
        let x = 0.7853981633974483;
        assert!((x - PI / 4.0).abs() < 1e-9);
        assert_eq!(Angle::radians(x), Angle::quarter_pi());
        assert_eq!(Angle::radians(-PI / 2.0), Angle::dyadic(3, 1));
        assert_eq!(Angle::radians(2.0 * PI - 1e-12), Angle::ZERO);
    }

    #[test]
    fn generic_float_stays_float() {
        assert_eq!(Angle::radians(0.3), Angle::Radians(0.3));
        assert_eq!(Angle::radians(-0.3), Angle::Radians((-0.3f64).rem_euclid(TWO_PI)));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn canonicalization_is_idempotent() {
        for x in [0.1, 0.7853981633974483, 3.0, -2.5, 6.2] {
            let a = Angle::radians(x);
            assert_eq!(Angle::radians(a.to_radians()), a);
        }
    }

    #[test]
    fn arithmetic_stays_exact() {
        let a = Angle::dyadic(1, 3);
        assert_eq!(a.half(), Angle::dyadic(1, 4));
        assert_eq!(a.add(a), Angle::dyadic(1, 2));
        assert_eq!(a.neg().add(a), Angle::ZERO);
    }

    #[test]
    fn eighth_turns() {
        assert_eq!(Angle::dyadic(1, 1).eighth_turns(1e-9), Some(2));
        assert_eq!(Angle::dyadic(1, 3).eighth_turns(1e-9), None);
        assert_eq!(Angle::Radians(0.3).eighth_turns(1e-9), None);
        assert_eq!(Angle::ZERO.eighth_turns(1e-9), Some(0));
    }

    #[test]
    fn display_is_qasm() {
        assert_eq!(Angle::quarter_pi().to_string(), "pi/4");
        assert_eq!(Angle::dyadic(3, 2).to_string(), "3*pi/4");
        assert_eq!(Angle::dyadic(1, 0).to_string(), "pi");
        assert_eq!(Angle::ZERO.to_string(), "0");
    }
}

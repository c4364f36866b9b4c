//! Exact arithmetic in the cyclotomic ring of 16th roots of unity.
//!
//! Gauss sums of the finite quadratic forms in this crate have terms
//! `exp(pi*i*q(x))` where `q(x)` is a rational with denominator dividing 8,
//! so every term is a power of `zeta = exp(pi*i/8)`, a primitive 16th root
//! of unity. The ring `Z[zeta] = Z[x]/(x^8 + 1)` is free of rank 8 over `Z`,
//! so equality of ring elements is equality of coefficient vectors; no
//! floating point is involved anywhere.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// An element of `Z[zeta_16]` in the basis `1, zeta, ..., zeta^7`,
/// where `zeta = exp(pi*i/8)` and `zeta^8 = -1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Cyc16 {
    coeffs: [i64; 8],
}

impl Cyc16 {
    pub const ZERO: Cyc16 = Cyc16 { coeffs: [0; 8] };

    pub fn from_int(n: i64) -> Cyc16 {
        let mut coeffs = [0; 8];
        coeffs[0] = n;
        Cyc16 { coeffs }
    }

    /// `zeta^m` for any integer exponent (reduced mod 16, with `zeta^8 = -1`).
    pub fn root_power(m: i64) -> Cyc16 {
        let m = m.rem_euclid(16) as usize;
        let mut coeffs = [0; 8];
        if m < 8 {
            coeffs[m] = 1;
        } else {
            coeffs[m - 8] = -1;
        }
        Cyc16 { coeffs }
    }

    /// `sqrt(2) = zeta^2 - zeta^6` (both sides square to 2).
    pub fn sqrt2() -> Cyc16 {
        Cyc16::root_power(2) - Cyc16::root_power(6)
    }

    /// `sqrt(2^a)` for `a >= 0`.
    pub fn sqrt_pow2(a: u32) -> Cyc16 {
        let whole = Cyc16::from_int(1i64 << (a / 2));
        if a % 2 == 0 {
            whole
        } else {
            whole * Cyc16::sqrt2()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeffs(&self) -> &[i64; 8] {
        &self.coeffs
    }
}

impl Add for Cyc16 {
    type Output = Cyc16;
    fn add(self, rhs: Cyc16) -> Cyc16 {
        let mut coeffs = [0; 8];
        for i in 0..8 {
            coeffs[i] = self.coeffs[i] + rhs.coeffs[i];
        }
        Cyc16 { coeffs }
    }
}

impl AddAssign for Cyc16 {
    fn add_assign(&mut self, rhs: Cyc16) {
        for i in 0..8 {
            self.coeffs[i] += rhs.coeffs[i];
        }
    }
}

impl Sub for Cyc16 {
    type Output = Cyc16;
    fn sub(self, rhs: Cyc16) -> Cyc16 {
        self + (-rhs)
    }
}

impl Neg for Cyc16 {
    type Output = Cyc16;
    fn neg(self) -> Cyc16 {
        let mut coeffs = [0; 8];
        for i in 0..8 {
            coeffs[i] = -self.coeffs[i];
        }
        Cyc16 { coeffs }
    }
}

impl Mul for Cyc16 {
    type Output = Cyc16;
    fn mul(self, rhs: Cyc16) -> Cyc16 {
        let mut coeffs = [0i64; 8];
        for i in 0..8 {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..8 {
                if rhs.coeffs[j] == 0 {
                    continue;
                }
                let term = self.coeffs[i] * rhs.coeffs[j];
                let k = i + j;
                if k < 8 {
                    coeffs[k] += term;
                } else {
                    coeffs[k - 8] -= term;
                }
            }
        }
        Cyc16 { coeffs }
    }
}

impl fmt::Debug for Cyc16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else if c == 1 {
                write!(f, "z^{}", i)?;
            } else {
                write!(f, "{}*z^{}", c, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        assert_eq!(Cyc16::sqrt2() * Cyc16::sqrt2(), Cyc16::from_int(2));
    }

    #[test]
    fn root_power_wraps_with_sign() {
        assert_eq!(Cyc16::root_power(8), -Cyc16::from_int(1));
        assert_eq!(Cyc16::root_power(16), Cyc16::from_int(1));
        assert_eq!(Cyc16::root_power(-2), -Cyc16::root_power(6));
        // zeta^m * zeta^n = zeta^(m+n)
        for m in 0..16 {
            for n in 0..16 {
                assert_eq!(
                    Cyc16::root_power(m) * Cyc16::root_power(n),
                    Cyc16::root_power(m + n)
                );
            }
        }
    }

    #[test]
    fn sqrt_pow2_squares_back() {
        for a in 0..8 {
            let s = Cyc16::sqrt_pow2(a);
            assert_eq!(s * s, Cyc16::from_int(1i64 << a));
        }
    }
}

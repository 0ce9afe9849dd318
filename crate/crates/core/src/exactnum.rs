//! Exact scalars: arbitrary-precision rationals and cyclotomic numbers.
//!
//! Rationals are [`num_rational::BigRational`] values, always in lowest
//! terms with a positive denominator. Elements of `Q(zeta_n)` are stored
//! on the power basis `1, zeta_n, ..., zeta_n^(phi(n)-1)` of
//! `Q[x]/(Phi_n(x))`, reduced modulo the cyclotomic polynomial `Phi_n`
//! after every operation, so equality of values of equal order is
//! coefficient-vector equality.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar; lowest terms and positive denominator are
/// maintained by the underlying type.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` used pervasively in construction and tests.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Errors from exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("{k} is not coprime to the order {order}")]
    NotCoprime { k: u64, order: u64 },
    #[error("not a rational value: basis coefficient {index} is nonzero")]
    NotRational { index: usize },
    #[error("no embedding Q(zeta_{from}) -> Q(zeta_{to}): {from} does not divide {to}")]
    NotAnEmbedding { from: u64, to: u64 },
    #[error("order must be positive")]
    ZeroOrder,
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi(0)");
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi -= phi / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Exact division of integer polynomials; the divisor must be monic and
/// must divide exactly. Coefficients ascending.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor not monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                let v = &rem[k + j] - &c * d;
                rem[k + j] = v;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// The `n`-th cyclotomic polynomial `Phi_n`, monic of degree `phi(n)`,
/// computed by exact division of `x^n - 1` by the product of `Phi_d` over
/// proper divisors `d | n`. Coefficients ascending.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic_polynomial(0)");
    let divs = divisors(n);
    let mut table: Vec<(u64, Vec<BigInt>)> = Vec::with_capacity(divs.len());
    for &m in &divs {
        // x^m - 1
        let mut num = vec![BigInt::zero(); (m + 1) as usize];
        num[0] = -BigInt::one();
        num[m as usize] = BigInt::one();
        let mut phi_m = num;
        for &(d, ref phi_d) in &table {
            if m % d == 0 {
                phi_m = int_poly_div_exact(&phi_m, phi_d);
            }
        }
        table.push((m, phi_m));
    }
    let (_, out) = table.pop().expect("n has at least one divisor");
    debug_assert_eq!(out.len() as u64 - 1, euler_phi(n));
    out
}

/// An element of the cyclotomic field `Q(zeta_order)` on the power basis
/// modulo `Phi_order`. `coeffs.len() == phi(order)` always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Reduce an arbitrary polynomial in `zeta_order` (coefficients
    /// ascending, any length) modulo `Phi_order`.
    pub fn from_poly(order: u64, mut poly: Vec<Rational>) -> Result<Self, NumError> {
        if order == 0 {
            return Err(NumError::ZeroOrder);
        }
        let degree = euler_phi(order) as usize;
        if poly.len() > degree {
            let modulus = cyclotomic_polynomial(order);
            let modulus: Vec<Rational> = modulus.into_iter().map(Rational::from_integer).collect();
            // Remainder of division by the monic modulus.
            for k in (degree..poly.len()).rev() {
                let c = poly[k].clone();
                if !c.is_zero() {
                    poly[k] = Rational::zero();
                    for (j, m) in modulus.iter().take(degree).enumerate() {
                        let v = &poly[k - degree + j] - &c * m;
                        poly[k - degree + j] = v;
                    }
                }
            }
        }
        poly.resize(degree, Rational::zero());
        Ok(Cyclotomic { order, coeffs: poly })
    }

    pub fn zero(order: u64) -> Self {
        Cyclotomic::from_poly(order, Vec::new()).expect("positive order")
    }

    pub fn one(order: u64) -> Self {
        Cyclotomic::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, value: Rational) -> Self {
        Cyclotomic::from_poly(order, vec![value]).expect("positive order")
    }

    /// `zeta_order^k` (k taken modulo order; negative k allowed).
    pub fn root_of_unity(order: u64, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Cyclotomic::from_poly(order, poly).expect("positive order")
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_order(&self, rhs: &Self) -> Result<(), NumError> {
        if self.order != rhs.order {
            return Err(NumError::OrderMismatch { left: self.order, right: rhs.order });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_order(rhs)?;
        let mut prod = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = &prod[i + j] + a * b;
                prod[i + j] = v;
            }
        }
        Cyclotomic::from_poly(self.order, prod)
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, c: &Rational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplicative inverse, computed by solving the `phi(n) x phi(n)`
    /// rational linear system given by the multiplication-by-`self` matrix
    /// on the power basis.
    pub fn inverse(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::ZeroInverse);
        }
        let d = self.coeffs.len();
        // Column j of the system is self * zeta^j on the power basis.
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d);
        let mut shifted = self.clone();
        for j in 0..d {
            if j > 0 {
                let zeta = Cyclotomic::root_of_unity(self.order, 1);
                shifted = shifted.mul(&zeta)?;
            }
            cols.push(shifted.coeffs.clone());
        }
        // Augmented system M x = e_0, eliminated in place.
        let mut aug: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut row: Vec<Rational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..d {
            let Some(p) = (pivot_row..d).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(pivot_row, p);
            let inv = aug[pivot_row][col].recip();
            for v in aug[pivot_row].iter_mut() {
                *v *= &inv;
            }
            for r in 0..d {
                if r != pivot_row && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in 0..=d {
                        let v = &aug[r][c] - &f * &aug[pivot_row][c];
                        aug[r][c] = v;
                    }
                }
            }
            pivot_row += 1;
        }
        // self != 0 in a field, so the system is always solvable.
        debug_assert_eq!(pivot_row, d, "multiplication matrix singular for nonzero element");
        let coeffs: Vec<Rational> = aug.iter().map(|row| row[d].clone()).collect();
        let out = Cyclotomic { order: self.order, coeffs };
        debug_assert!(self.mul(&out).map(|p| p.is_one()).unwrap_or(false));
        Ok(out)
    }

    /// The Galois automorphism `zeta -> zeta^k` for `gcd(k, order) = 1`,
    /// applied on the expanded power form and then reduced.
    pub fn galois(&self, k: u64) -> Result<Self, NumError> {
        let k = k % self.order.max(1);
        if BigInt::from(k).gcd(&BigInt::from(self.order)) != BigInt::one() {
            return Err(NumError::NotCoprime { k, order: self.order });
        }
        let mut poly = vec![Rational::zero(); self.order as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                let e = (i as u64 * k % self.order) as usize;
                let v = &poly[e] + a;
                poly[e] = v;
            }
        }
        Cyclotomic::from_poly(self.order, poly)
    }

    /// Complex conjugation `zeta -> zeta^(-1)`.
    pub fn conjugate(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        self.galois(self.order - 1).expect("order - 1 is coprime to order")
    }

    /// Extract the rational value; errors if any basis coefficient beyond
    /// the constant one is nonzero.
    pub fn as_rational(&self) -> Result<Rational, NumError> {
        for (index, c) in self.coeffs.iter().enumerate().skip(1) {
            if !c.is_zero() {
                return Err(NumError::NotRational { index });
            }
        }
        Ok(self.coeffs[0].clone())
    }

    /// Embed into `Q(zeta_new_order)`; requires `order | new_order`.
    pub fn embed(&self, new_order: u64) -> Result<Self, NumError> {
        if new_order == 0 || new_order % self.order != 0 {
            return Err(NumError::NotAnEmbedding { from: self.order, to: new_order });
        }
        if new_order == self.order {
            return Ok(self.clone());
        }
        let step = (new_order / self.order) as usize;
        let mut poly = vec![Rational::zero(); self.coeffs.len() * step];
        for (i, a) in self.coeffs.iter().enumerate() {
            poly[i * step] = a.clone();
        }
        Cyclotomic::from_poly(new_order, poly)
    }
}

impl core::fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if i == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if i == 1 {
                    write!(f, "z{}", self.order)?;
                } else {
                    write!(f, "z{}^{}", self.order, i)?;
                }
            }
        }
        Ok(())
    }
}

/// Least common multiple of two cyclotomic orders.
pub fn lcm_order(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

//! Exact arithmetic in cyclotomic number fields `Q(zeta_N)`.
//!
//! Every scalar in this crate is a [`Cyclotomic`]: a vector of exact rationals
//! of length `phi(N)` giving coordinates in the power basis
//! `1, zeta, ..., zeta^{phi(N)-1}` of `Q(zeta_N)`, reduced modulo the `N`-th
//! cyclotomic polynomial. Values are stored at their given conductor, not the
//! minimal one; equality lifts both sides to the lcm conductor and compares
//! coefficient vectors, which is a complete check because the power basis is a
//! basis.
//!
//! Operator impls (`+`, `*`, ...) panic if the lcm of the conductors exceeds
//! [`CONDUCTOR_BOUND`]; the `checked_*` methods report the overflow as an
//! error instead. No floating point enters any arithmetic path; the only
//! `f64`s appear in [`Cyclotomic::approx`], which is display-only.

mod matrix;

pub use matrix::{quotient_by_columns, ExactMatrix, MatrixError, QuotientBasis};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Largest conductor the arithmetic will lift to (the spec default of `10^6`).
pub const CONDUCTOR_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero in Q(zeta_{conductor})")]
    DivisionByZero { conductor: u64 },
    #[error("conductor {required} exceeds the configured bound {bound}")]
    ConductorOverflow { required: u64, bound: u64 },
    #[error("invalid scalar encoding: {0}")]
    Encoding(String),
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients of `Phi_n`, ascending degree, cached per conductor.
fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact polynomial division.
    let mut num = vec![BigInt::zero(); (n + 1) as usize];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    let arc = Arc::new(num);
    cache.lock().unwrap().insert(n, Arc::clone(&arc));
    arc
}

/// Exact division of integer polynomials, panics on nonzero remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = &rem[k + dd] / &den[dd];
        for i in 0..=dd {
            let t = &c * &den[i];
            rem[k + i] -= t;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// Rational-coefficient remainder of `poly` modulo `Phi_n`.
fn reduce_mod_cyclotomic(mut poly: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi_n = cyclotomic_polynomial(n);
    let deg = phi_n.len() - 1; // = euler_phi(n)
    while poly.len() > deg {
        let top = poly.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = poly.len() - deg;
        // x^{k+deg} = -(Phi_n - x^deg) * x^k  (Phi_n is monic)
        for i in 0..deg {
            if !phi_n[i].is_zero() {
                let t = &top * BigRational::from(phi_n[i].clone());
                poly[k + i] -= t;
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

/// An exact element of the cyclotomic field `Q(zeta_N)`.
#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `zeta_n^k`, the primitive `n`-th root of unity raised to `k`.
    pub fn root_of_unity(n: u64, k: i64) -> Result<Self, ScalarError> {
        if n == 0 || n > CONDUCTOR_BOUND {
            return Err(ScalarError::ConductorOverflow { required: n.max(1), bound: CONDUCTOR_BOUND });
        }
        let k = k.rem_euclid(n as i64) as u64;
        let phi = euler_phi(n) as usize;
        let mut poly = vec![BigRational::zero(); (k as usize) + 1];
        poly[k as usize] = BigRational::one();
        let coeffs = if (k as usize) < phi { { let mut p = poly; p.resize(phi, BigRational::zero()); p } } else { reduce_mod_cyclotomic(poly, n) };
        Ok(Cyclotomic { conductor: n, coeffs })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value if this element lies in `Q` (canonical form makes
    /// this a plain coefficient check).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in `Q(zeta_m)`; requires `conductor | m`.
    pub fn lift(&self, m: u64) -> Result<Self, ScalarError> {
        if m == self.conductor {
            return Ok(self.clone());
        }
        assert!(m.is_multiple_of(self.conductor), "lift target must be a multiple of the conductor");
        if m > CONDUCTOR_BOUND {
            return Err(ScalarError::ConductorOverflow { required: m, bound: CONDUCTOR_BOUND });
        }
        let stride = (m / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * stride + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * stride] = c.clone();
        }
        Ok(Cyclotomic { conductor: m, coeffs: reduce_mod_cyclotomic(poly, m) })
    }

    fn common_conductor(&self, other: &Self) -> Result<u64, ScalarError> {
        let l = self.conductor.lcm(&other.conductor);
        if l > CONDUCTOR_BOUND {
            return Err(ScalarError::ConductorOverflow { required: l, bound: CONDUCTOR_BOUND });
        }
        Ok(l)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect();
            return Ok(Cyclotomic { conductor: self.conductor, coeffs });
        }
        let l = self.common_conductor(other)?;
        let a = self.lift(l)?;
        let b = other.lift(l)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Cyclotomic { conductor: l, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&(-other.clone()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if self.conductor == other.conductor && self.coeffs.len() == 1 {
            return Ok(Cyclotomic {
                conductor: self.conductor,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let (a, b, l);
        if self.conductor == other.conductor {
            l = self.conductor;
            a = self;
            b = other;
        } else {
            l = self.common_conductor(other)?;
            return self.lift(l)?.checked_mul(&other.lift(l)?);
        }
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Ok(Cyclotomic { conductor: l, coeffs: reduce_mod_cyclotomic(poly, l) })
    }

    /// Multiplicative inverse, computed by solving the linear system
    /// `(multiplication by self) x = 1` in the power basis. This keeps
    /// coefficient growth far below a polynomial extended-Euclid run.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero { conductor: self.conductor });
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclotomic { conductor: self.conductor, coeffs: {
                let mut c = vec![BigRational::zero(); self.coeffs.len()];
                c[0] = q.recip();
                c
            } });
        }
        let n = self.conductor;
        let phi = self.coeffs.len();
        // columns of the multiplication-by-self matrix: self * zeta^j
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
        let mut cur = self.coeffs.clone();
        cols.push(cur.clone());
        for _ in 1..phi {
            // multiply by zeta: shift up one degree, reduce
            let mut shifted = vec![BigRational::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                shifted[i + 1] = c.clone();
            }
            cur = reduce_mod_cyclotomic(shifted, n);
            cols.push(cur.clone());
        }
        // solve sum_j x_j * cols[j] = e_0 by Gaussian elimination
        let mut aug: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let mut piv_row = 0;
        for col in 0..phi {
            let Some(r) = (piv_row..phi).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(piv_row, r);
            let inv_p = aug[piv_row][col].recip();
            for j in col..=phi {
                aug[piv_row][j] = &aug[piv_row][j] * &inv_p;
            }
            for r2 in 0..phi {
                if r2 != piv_row && !aug[r2][col].is_zero() {
                    let f = aug[r2][col].clone();
                    for j in col..=phi {
                        let t = &f * &aug[piv_row][j];
                        aug[r2][j] -= t;
                    }
                }
            }
            piv_row += 1;
        }
        assert_eq!(piv_row, phi, "multiplication by a nonzero element is invertible");
        let coeffs = (0..phi).map(|i| aug[i][phi].clone()).collect();
        Ok(Cyclotomic { conductor: n, coeffs })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("pow of zero to a negative exponent").pow(-e);
        }
        let mut acc = Cyclotomic::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// 64-bit complex evaluation at `zeta_N = e^{2 pi i / N}`, display only.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / n;
            re += v * theta.cos();
            im += v * theta.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let l = self.conductor.lcm(&other.conductor);
        match (self.lift(l), other.lift(l)) {
            (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
            _ => panic!("conductor overflow during equality"),
        }
    }
}

impl Eq for Cyclotomic {}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, other: &Cyclotomic) -> Cyclotomic {
                self.$checked(other).expect("conductor bound exceeded")
            }
        }
        impl std::ops::$trait for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, other: Cyclotomic) -> Cyclotomic {
                (&self).$method(&other)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -self.clone()
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.conductor, k)?;
            } else {
                write!(f, "{}*z{}^{}", a, self.conductor, k)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn rational_to_pair(q: &BigRational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

fn rational_from_pair(p: &[String; 2]) -> Result<BigRational, ScalarError> {
    let num: BigInt = p[0].parse().map_err(|_| ScalarError::Encoding(format!("bad numerator {:?}", p[0])))?;
    let den: BigInt = p[1].parse().map_err(|_| ScalarError::Encoding(format!("bad denominator {:?}", p[1])))?;
    if den.is_zero() {
        return Err(ScalarError::Encoding("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    conductor: u64,
    coeffs: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    approx: Option<[f64; 2]>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (re, im) = self.approx();
        CyclotomicJson {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(rational_to_pair).collect(),
            approx: Some([re, im]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CyclotomicJson::deserialize(d)?;
        if raw.conductor == 0 || raw.conductor > CONDUCTOR_BOUND {
            return Err(D::Error::custom(format!("conductor {} out of range", raw.conductor)));
        }
        let phi = euler_phi(raw.conductor) as usize;
        if raw.coeffs.len() != phi {
            return Err(D::Error::custom(format!(
                "expected {} coefficients for conductor {}, got {}",
                phi,
                raw.conductor,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(rational_from_pair)
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Cyclotomic { conductor: raw.conductor, coeffs })
    }
}

/// Sum of a (possibly empty) iterator of scalars.
pub fn cyc_sum<I: IntoIterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
    iter.into_iter().fold(Cyclotomic::zero(), |a, b| &a + &b)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big_rational_approx(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Euler's totient, exposed for conductor bookkeeping elsewhere in the crate.
pub fn phi(n: u64) -> u64 {
    euler_phi(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(n: u64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, 1).unwrap()
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let i = zeta(4);
        assert_eq!(&i * &i, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        let z = zeta(3);
        let sum = &z + &z.pow(2);
        assert_eq!(sum, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta5_multiplies_back() {
        let a = &Cyclotomic::one() + &zeta(5);
        let v = a.inv().unwrap();
        assert_eq!(&v * &a, Cyclotomic::one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(
            Cyclotomic::zero().inv(),
            Err(ScalarError::DivisionByZero { conductor: 1 })
        );
    }

    #[test]
    fn conductor_bound_overflow_is_reported() {
        let a = zeta(999_983); // prime near the bound
        let b = zeta(2);
        match a.checked_mul(&b) {
            Err(ScalarError::ConductorOverflow { required, bound }) => {
                assert_eq!(required, 1_999_966);
                assert_eq!(bound, CONDUCTOR_BOUND);
            }
            other => panic!("expected overflow, got {:?}", other),
        }
    }

    #[test]
    fn cross_conductor_equality() {
        // zeta_6^3 = -1 in Q(zeta_6), equal to -1 in Q.
        let z6 = zeta(6);
        assert_eq!(z6.pow(3), Cyclotomic::from_integer(-1));
        // zeta_3 lifted to conductor 6 equals zeta_6^2.
        assert_eq!(zeta(3), zeta(6).pow(2));
    }

    #[test]
    fn lift_preserves_value() {
        let x = &zeta(3) + &Cyclotomic::from_ratio(1, 2);
        let lifted = x.lift(12).unwrap();
        assert_eq!(lifted, x);
        assert_eq!(lifted.conductor(), 12);
    }

    #[test]
    fn json_round_trip_matches_spec_shape() {
        let x = Cyclotomic::from_integer(8);
        let json = serde_json::to_value(&x).unwrap();
        assert_eq!(json["conductor"], 1);
        assert_eq!(json["coeffs"][0][0], "8");
        assert_eq!(json["coeffs"][0][1], "1");
        let back: Cyclotomic = serde_json::from_value(json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn approx_of_zeta8() {
        let (re, im) = zeta(8).approx();
        assert!((re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((im - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    fn arb_scalar() -> impl Strategy<Value = Cyclotomic> {
        // conductors <= 60, small rational coefficients on a few powers
        (1u64..=60, proptest::collection::vec((-4i64..=4, 1i64..=3, 0usize..6), 1..4)).prop_map(
            |(n, terms)| {
                let mut acc = Cyclotomic::zero();
                for (num, den, pow) in terms {
                    let term = Cyclotomic::root_of_unity(n, pow as i64)
                        .unwrap()
                        .scale(&rational(num, den));
                    acc = &acc + &term;
                }
                acc
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn field_axioms_on_random_triples((a, b, c) in (arb_scalar(), arb_scalar(), arb_scalar())) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn inverse_round_trip(a in arb_scalar()) {
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert_eq!(&inv * &a, Cyclotomic::one());
                prop_assert_eq!(inv.inv().unwrap(), a);
            }
        }

        #[test]
        fn lift_round_trip(a in arb_scalar(), k in 1u64..=4) {
            let m = a.conductor() * k;
            if m <= 240 {
                let lifted = a.lift(m).unwrap();
                prop_assert_eq!(lifted, a);
            }
        }
    }
}

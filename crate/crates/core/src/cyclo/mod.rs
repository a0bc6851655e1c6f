//! Exact arithmetic in `Q` and in cyclotomic fields `Q(ζ_N)`.
//!
//! An element of `Q(ζ_N)` is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}`
//! fully reduced modulo the `N`-th cyclotomic polynomial, so structural
//! equality is field equality and the zero test is exact.

mod parse;
mod poly;
mod roots;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use roots::{nonvanishing_guaranteed, sum_roots};

/// Exact rational number, always reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The field `Q(ζ_N)` together with its defining polynomial.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    /// Monic `Φ_N`, low degree first; length `φ(N) + 1`.
    modulus: Vec<BigInt>,
    modulus_rat: Vec<Rat>,
}

impl CycloField {
    /// Shared handle to `Q(ζ_N)`; polynomials are computed once per order.
    pub fn get(order: u32) -> Arc<CycloField> {
        assert!(order >= 1, "cyclotomic order must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("field cache poisoned");
        if let Some(f) = guard.get(&order) {
            return f.clone();
        }
        let modulus = cyclotomic_polynomial(order);
        let modulus_rat = modulus.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let field = Arc::new(CycloField {
            order,
            modulus,
            modulus_rat,
        });
        guard.insert(order, field.clone());
        field
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Euler's totient of the order, the degree of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn reduce(&self, mut p: Vec<Rat>) -> Vec<Rat> {
        let phi = self.degree();
        for deg in (phi..p.len()).rev() {
            let c = std::mem::replace(&mut p[deg], Rat::zero());
            if c.is_zero() {
                continue;
            }
            let shift = deg - phi;
            for (j, m) in self.modulus.iter().enumerate().take(phi) {
                if !m.is_zero() {
                    p[shift + j] -= &c * m;
                }
            }
        }
        p.resize(phi, Rat::zero());
        p
    }
}

/// `Φ_N` by dividing `x^N - 1` by `Φ_e` for the proper divisors `e` of `N`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for e in 1..n {
        if n.is_multiple_of(e) {
            p = poly::int_exact_div(&p, &cyclotomic_polynomial(e));
        }
    }
    p
}

/// Exact element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    coeffs: Vec<Rat>,
}

impl CycloNum {
    pub fn zero(order: u32) -> Self {
        let field = CycloField::get(order);
        let coeffs = vec![Rat::zero(); field.degree()];
        CycloNum { field, coeffs }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rat(order, Rat::one())
    }

    pub fn from_rat(order: u32, r: Rat) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rat(order, Rat::from_integer(BigInt::from(n)))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let field = CycloField::get(order);
        let e = k.rem_euclid(order as i64) as usize;
        let mut p = vec![Rat::zero(); e + 1];
        p[e] = Rat::one();
        let coeffs = field.reduce(p);
        CycloNum { field, coeffs }
    }

    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// Builds an element from polynomial coefficients in `ζ_N` (any length).
    pub fn from_poly(order: u32, coeffs: Vec<Rat>) -> Self {
        let field = CycloField::get(order);
        let coeffs = field.reduce(coeffs);
        CycloNum { field, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloNum {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloNum {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        if self.is_rational() {
            return Ok(other.scale(&self.coeffs[0]));
        }
        if other.is_rational() {
            return Ok(self.scale(&other.coeffs[0]));
        }
        let prod = poly::mul(&self.coeffs, &other.coeffs);
        Ok(CycloNum {
            field: self.field.clone(),
            coeffs: self.field.reduce(prod),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rat(self.order(), self.coeffs[0].recip()));
        }
        let (g, s) = poly::ext_gcd_inverse_part(&self.coeffs, &self.field.modulus_rat);
        // Φ_N is irreducible, so the gcd with a nonzero reduced element is 1.
        debug_assert_eq!(g.len(), 1);
        Ok(CycloNum {
            field: self.field.clone(),
            coeffs: self.field.reduce(s),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Image under `ζ_N ↦ ζ_M^{M/N}`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        let n = self.order();
        if target == 0 || !target.is_multiple_of(n) {
            return Err(Error::NotDivisible { from: n, to: target });
        }
        let step = (target / n) as usize;
        let mut p = vec![Rat::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        Ok(Self::from_poly(target, p))
    }

    /// Galois action `ζ ↦ ζ^k`, `k` coprime to the order.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = self.order() as i64;
        if k.gcd(&n) != 1 {
            return Err(Error::invalid(format!("{k} is not a unit modulo {n}")));
        }
        let mut acc = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &Self::zeta_pow(self.order(), k * i as i64).scale(c);
            }
        }
        Ok(acc)
    }

    /// Floating-point value with `ζ_N = exp(2πi/N)`; read-only helper for numeric tracking.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let v = rat_to_f64(c);
                Complex64::from_polar(v, std::f64::consts::TAU * i as f64 / n)
            })
            .sum()
    }

    /// Rough size measure used for pivot selection.
    pub fn height(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| (c.numer().bits() + c.denom().bits()) as usize)
            .sum()
    }

    pub fn parse(s: &str, order: u32) -> Result<Self> {
        parse::parse_cyclo(s, order).map_err(|msg| Error::Parse { line: 0, msg })
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // Very large numerators/denominators: shift both to a common scale.
            let shift = r.numer().bits().max(r.denom().bits()) as i64 - 60;
            let n = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for CycloNum {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloNum {
    /// Structural order (order, then coefficients); not a field ordering.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[{}]({})", self.order(), self)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_small() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(CycloField::get(7).degree(), 6);
        assert_eq!(CycloField::get(15).degree(), 8);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycloNum::zeta(4);
        assert_eq!(&i * &i, CycloNum::from_int(4, -1));
    }

    #[test]
    fn zeta3_minimal_relation() {
        let z = CycloNum::zeta(3);
        let s = &(&CycloNum::one(3) + &z) + &(&z * &z);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let a = &CycloNum::one(5) + &CycloNum::zeta(5);
        let x = a.inv().unwrap();
        assert!((&a * &x).is_one());
        assert!(CycloNum::zero(5).inv().is_err());
    }

    #[test]
    fn mismatched_orders_error() {
        let a = CycloNum::zeta(3);
        let b = CycloNum::zeta(4);
        assert_eq!(a.try_add(&b), Err(Error::OrderMismatch(3, 4)));
        assert!(a.try_div(&CycloNum::zero(3)).is_err());
    }

    #[test]
    fn embeddings() {
        let m1 = CycloNum::from_int(1, -1);
        assert_eq!(m1.embed(12).unwrap(), CycloNum::from_int(12, -1));
        assert_eq!(CycloNum::zeta(3).embed(12).unwrap(), CycloNum::zeta_pow(12, 4));
        let z = CycloNum::zeta(3);
        let s = &(&CycloNum::one(3) + &z) + &(&z * &z);
        assert!(s.embed(12).unwrap().is_zero());
        assert!(CycloNum::zeta(5).embed(12).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let a = CycloNum::parse("1/2 - 3z^2", 7).unwrap();
        assert_eq!(a.to_string(), "1/2 - 3z^2");
        assert_eq!(CycloNum::parse(&a.to_string(), 7).unwrap(), a);
        let w = CycloNum::parse("z^3", 3).unwrap();
        assert!(w.is_one());
    }

    #[test]
    fn numeric_value() {
        let i = CycloNum::zeta(4).to_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn galois_conjugate() {
        let z = CycloNum::zeta(5);
        assert_eq!(z.galois(-1).unwrap(), z.inv().unwrap());
        assert!(z.galois(5).is_err());
    }
}

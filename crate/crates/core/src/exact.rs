//! Exact scalar arithmetic: big rationals, root expressions and helpers.
//!
//! Verdicts are exquisitely sensitive to whether a quantity is exactly
//! rational or exactly an integer, so every value that *can* be kept exact
//! is kept exact. Floating point only enters when a value is genuinely
//! transcendental (logarithmic symbols, sampled coefficients).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `ln` of a positive big rational, robust far outside the f64 range.
pub fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln_rational needs a positive argument");
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        return (n.to_f64().unwrap()).ln();
    }
    // ln(m * 2^e) = ln m + e ln 2 with m the top 52 bits.
    let shift = bits - 52;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// log10 of a positive rational.
pub fn log10_rational(r: &BigRational) -> f64 {
    ln_rational(r) / std::f64::consts::LN_10
}

/// Nearest integer to a rational (ties round half away from zero).
pub fn round_rational(r: &BigRational) -> BigInt {
    let two: BigInt = 2.into();
    let num = r.numer();
    let den = r.denom(); // > 0 by normalization
    if num.is_negative() {
        -round_rational(&(-r))
    } else {
        (num * &two + den).div_floor(&(den * &two))
    }
}

/// Distance from a rational to the nearest integer, exactly.
pub fn dist_to_int(r: &BigRational) -> BigRational {
    let n = round_rational(r);
    (r - BigRational::from_integer(n)).abs()
}

/// Exact integer k-th root when `n` is a perfect k-th power.
pub fn perfect_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() && k % 2 == 0 {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational k-th root when one exists.
pub fn perfect_root_rational(r: &BigRational, k: u32) -> Option<BigRational> {
    let num = perfect_root(r.numer(), k)?;
    let den = perfect_root(r.denom(), k)?;
    Some(BigRational::new(num, den))
}

/// The k-th-power-free kernel of a positive integer: the smallest `m` with
/// `n = m * c^k`. Computed by trial division (fine for the magnitudes the
/// searches feed it) with a perfect-power fallback for a large cofactor.
pub fn power_free_kernel(n: &BigInt, k: u32) -> BigInt {
    assert!(n.is_positive());
    let mut rest: BigInt = n.clone();
    let mut kernel = BigInt::one();
    let mut p: BigInt = 2.into();
    let limit: BigInt = 100_000.into();
    while &p * &p <= rest && p <= limit {
        if rest.is_multiple_of(&p) {
            let mut e = 0u32;
            while rest.is_multiple_of(&p) {
                rest /= &p;
                e += 1;
            }
            let r = e % k;
            for _ in 0..r {
                kernel *= &p;
            }
        }
        p += 1;
    }
    if rest > BigInt::one() {
        // Large cofactor: keep it in the kernel unless it is itself a
        // perfect k-th power (or a power-times-smooth remainder would
        // require a full factorization, which we do not attempt).
        if perfect_root(&rest, k).is_none() {
            kernel *= &rest;
        }
    }
    kernel
}

/// An exact real scalar: a rational, or `coef * radicand^(1/index)`.
///
/// Root expressions are normalized on construction: if the radicand is an
/// exact `index`-th power the value collapses to `Rational`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactReal {
    Rational(BigRational),
    RootMul {
        coef: BigRational,
        radicand: BigRational,
        index: u32,
    },
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }

    pub fn from_f64(x: f64) -> Self {
        ExactReal::Rational(BigRational::from_float(x).expect("finite float"))
    }

    pub fn from_int(n: i64) -> Self {
        ExactReal::Rational(BigRational::from_integer(n.into()))
    }

    /// `coef * radicand^(1/index)` with normalization.
    pub fn root_mul(coef: BigRational, radicand: BigRational, index: u32) -> Self {
        assert!(index >= 1);
        assert!(!radicand.is_negative(), "radicand must be non-negative");
        if coef.is_zero() || radicand.is_zero() {
            return ExactReal::zero();
        }
        if index == 1 {
            return ExactReal::Rational(coef * radicand);
        }
        if let Some(root) = perfect_root_rational(&radicand, index) {
            return ExactReal::Rational(coef * root);
        }
        ExactReal::RootMul {
            coef,
            radicand,
            index,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactReal::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_zero())
    }

    /// Exact integer power. Rational stays rational; a root expression
    /// collapses to a rational whenever `index | k * gcd` permits.
    pub fn pow_int(&self, k: u32) -> ExactReal {
        match self {
            ExactReal::Rational(r) => {
                ExactReal::Rational(num_traits::pow::pow(r.clone(), k as usize))
            }
            ExactReal::RootMul {
                coef,
                radicand,
                index,
            } => {
                let coef_k = num_traits::pow::pow(coef.clone(), k as usize);
                let g = (k as u64).gcd(&(*index as u64)) as u32;
                let red_index = index / g;
                let red_pow = k / g;
                let rad_pow = num_traits::pow::pow(radicand.clone(), red_pow as usize);
                ExactReal::root_mul(coef_k, rad_pow, red_index)
            }
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> ExactReal {
        match self {
            ExactReal::Rational(q) => ExactReal::Rational(q * r),
            ExactReal::RootMul {
                coef,
                radicand,
                index,
            } => ExactReal::root_mul(coef * r, radicand.clone(), *index),
        }
    }

    pub fn neg(&self) -> ExactReal {
        self.mul_rational(&BigRational::from_integer((-1).into()))
    }

    /// Exact sum when representable: rationals add freely, root terms only
    /// combine with a rational zero or a like root.
    pub fn add(&self, other: &ExactReal) -> Option<ExactReal> {
        match (self, other) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => {
                Some(ExactReal::Rational(a + b))
            }
            (ExactReal::Rational(a), r @ ExactReal::RootMul { .. }) if a.is_zero() => {
                Some(r.clone())
            }
            (r @ ExactReal::RootMul { .. }, ExactReal::Rational(b)) if b.is_zero() => {
                Some(r.clone())
            }
            (
                ExactReal::RootMul { coef: c1, radicand: r1, index: i1 },
                ExactReal::RootMul { coef: c2, radicand: r2, index: i2 },
            ) if r1 == r2 && i1 == i2 => {
                Some(ExactReal::root_mul(c1 + c2, r1.clone(), *i1))
            }
            _ => None,
        }
    }

    /// General exact product. Root expressions combine over the lcm index.
    pub fn mul(&self, other: &ExactReal) -> ExactReal {
        match (self, other) {
            (ExactReal::Rational(a), _) => other.mul_rational(a),
            (_, ExactReal::Rational(b)) => self.mul_rational(b),
            (
                ExactReal::RootMul { coef: c1, radicand: r1, index: i1 },
                ExactReal::RootMul { coef: c2, radicand: r2, index: i2 },
            ) => {
                let l = (*i1 as u64).lcm(&(*i2 as u64)) as u32;
                let p1 = num_traits::pow::pow(r1.clone(), (l / i1) as usize);
                let p2 = num_traits::pow::pow(r2.clone(), (l / i2) as usize);
                ExactReal::root_mul(c1 * c2, p1 * p2, l)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(r) => rational_to_f64(r),
            ExactReal::RootMul {
                coef,
                radicand,
                index,
            } => {
                rational_to_f64(coef) * rational_to_f64(radicand).powf(1.0 / (*index as f64))
            }
        }
    }

    /// Rational approximation with error below `10^-digits`.
    pub fn approximate(&self, digits: u32) -> BigRational {
        match self {
            ExactReal::Rational(r) => r.clone(),
            ExactReal::RootMul {
                coef,
                radicand,
                index,
            } => {
                let root = nth_root_approx(radicand, *index, digits + 10);
                coef * root
            }
        }
    }
}

/// Rational to f64, falling back to the log-domain when out of range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    match r.to_f64() {
        Some(x) if x.is_finite() && x != 0.0 => x,
        _ => {
            let ln = ln_rational(&r.abs());
            let mag = ln.exp();
            if r.is_negative() {
                -mag
            } else {
                mag
            }
        }
    }
}

/// `radicand^(1/index)` to `digits` decimal digits, by integer Newton
/// iteration on a scaled integer.
pub fn nth_root_approx(radicand: &BigRational, index: u32, digits: u32) -> BigRational {
    assert!(!radicand.is_negative());
    if radicand.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::from(10u32).pow(digits);
    let scale_k = num_traits::pow::pow(scale.clone(), index as usize);
    // target = floor(radicand * 10^(digits*index)), root in integers
    let scaled = (radicand * BigRational::from_integer(scale_k)).floor();
    let root = scaled.numer().nth_root(index);
    BigRational::new(root, scale)
}

/// An exact complex scalar with independently exact parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactComplex {
    pub re: ExactReal,
    pub im: ExactReal,
}

impl ExactComplex {
    pub fn new(re: ExactReal, im: ExactReal) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex::new(ExactReal::zero(), ExactReal::zero())
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        ExactComplex::new(ExactReal::Rational(re), ExactReal::Rational(im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Gaussian-rational view when both parts are rational.
    pub fn as_gaussian(&self) -> Option<(&BigRational, &BigRational)> {
        match (&self.re, &self.im) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => Some((a, b)),
            _ => None,
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> ExactComplex {
        ExactComplex::new(self.re.mul_rational(r), self.im.mul_rational(r))
    }

    /// Product with a Gaussian rational (a + ib), exact when self is Gaussian.
    pub fn mul_gaussian(&self, a: &BigRational, b: &BigRational) -> Option<ExactComplex> {
        let (x, y) = self.as_gaussian()?;
        Some(ExactComplex::from_rationals(a * x - b * y, a * y + b * x))
    }

    /// Scale by an exact real factor.
    pub fn mul_real(&self, s: &ExactReal) -> ExactComplex {
        ExactComplex::new(self.re.mul(s), self.im.mul(s))
    }

    /// Full complex product when the cross terms stay representable.
    pub fn mul(&self, other: &ExactComplex) -> Option<ExactComplex> {
        let re = self.re.mul(&other.re).add(&self.im.mul(&other.im).neg())?;
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re))?;
        Some(ExactComplex::new(re, im))
    }
}

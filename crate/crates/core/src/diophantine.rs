//! Exact-arithmetic number theory: continued fractions, irrationality
//! profiles, Liouville truncations and simultaneous approximation searches.
//!
//! All asymptotic properties are reported as trends over the computed
//! samples, never as certainties; the one exception is an exact zero-error
//! certificate, which settles the simultaneous-approximation question for
//! the given (truncated) input outright.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    ln_rational, nth_root_approx, perfect_root, power_free_kernel, ExactReal,
};

/// Hard cap on certified decimal digits before giving up.
const MAX_DIGITS: u32 = 40_000;

/// Scope note attached to every simultaneous-approximation witness.
pub const SDA_SCOPE_NOTE: &str = "finite samples cannot distinguish `for all l` from `for many l`; \
trend verdicts certify only the computed range";

// ---------------------------------------------------------------------------
// Real-valued constant expressions
// ---------------------------------------------------------------------------

/// A constant real number given as an expression tree. Exact whenever the
/// structure permits; otherwise evaluated to any requested precision.
#[derive(Debug, Clone, PartialEq)]
pub enum RealExpr {
    Rational(BigRational),
    /// arg^(1/index)
    Root { arg: Box<RealExpr>, index: u32 },
    Pow(Box<RealExpr>, u32),
    Mul(Box<RealExpr>, Box<RealExpr>),
    Div(Box<RealExpr>, Box<RealExpr>),
    /// Truncated Liouville constant: sum_{k<=terms} 10^{-k!}.
    Liouville(u32),
    /// Golden ratio (1 + sqrt 5)/2.
    Phi,
    /// Euler's number.
    EulerE,
}

impl RealExpr {
    pub fn rational(n: i64, d: i64) -> Self {
        RealExpr::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn sqrt_of(n: i64, d: i64) -> Self {
        RealExpr::Root {
            arg: Box::new(RealExpr::rational(n, d)),
            index: 2,
        }
    }

    /// Structural exact value, when one exists.
    pub fn exact(&self) -> Option<ExactReal> {
        match self {
            RealExpr::Rational(r) => Some(ExactReal::Rational(r.clone())),
            RealExpr::Liouville(k) => liouville_constant(*k).ok().map(ExactReal::Rational),
            RealExpr::Root { arg, index } => match arg.exact()? {
                ExactReal::Rational(r) => {
                    if r.is_negative() {
                        None
                    } else {
                        Some(ExactReal::root_mul(BigRational::one(), r, *index))
                    }
                }
                ExactReal::RootMul {
                    coef,
                    radicand,
                    index: inner,
                } => {
                    // (c r^{1/i})^{1/k} = (c^i r)^{1/(i k)}
                    if coef.is_negative() {
                        return None;
                    }
                    let combined =
                        num_traits::pow::pow(coef, inner as usize) * radicand;
                    Some(ExactReal::root_mul(BigRational::one(), combined, inner * index))
                }
            },
            RealExpr::Pow(arg, k) => Some(arg.exact()?.pow_int(*k)),
            RealExpr::Mul(a, b) => Some(a.exact()?.mul(&b.exact()?)),
            RealExpr::Div(a, b) => {
                let den = b.exact()?;
                let recip = match den {
                    ExactReal::Rational(r) => {
                        if r.is_zero() {
                            return None;
                        }
                        ExactReal::Rational(r.recip())
                    }
                    ExactReal::RootMul {
                        coef,
                        radicand,
                        index,
                    } => {
                        // 1/(c r^{1/k}) = (1/(c r)) r^{(k-1)/k}
                        let inv_coef = (coef * &radicand).recip();
                        let rad_pow =
                            num_traits::pow::pow(radicand, (index - 1) as usize);
                        ExactReal::root_mul(inv_coef, rad_pow, index)
                    }
                };
                Some(a.exact()?.mul(&recip))
            }
            RealExpr::Phi | RealExpr::EulerE => None,
        }
    }

    /// Exact rational value, when the expression collapses to one.
    pub fn exact_rational(&self) -> Option<BigRational> {
        self.exact()?.as_rational().cloned()
    }

    /// Approximation with |approx - value| <= 10^-digits.
    pub fn approx(&self, digits: u32) -> Result<BigRational> {
        if digits > MAX_DIGITS {
            return Err(Error::PrecisionExhausted(format!(
                "requested {digits} digits exceeds the {MAX_DIGITS} digit cap"
            )));
        }
        Ok(match self {
            RealExpr::Rational(r) => r.clone(),
            RealExpr::Liouville(k) => liouville_constant(*k)?,
            RealExpr::Root { arg, index } => {
                let inner = arg.approx(digits + 8)?;
                if inner.is_negative() {
                    return Err(Error::PrecisionExhausted(
                        "root of a negative value".into(),
                    ));
                }
                nth_root_approx(&inner, *index, digits + 4)
            }
            RealExpr::Pow(arg, k) => {
                let inner = arg.approx(digits + 8 * (*k.max(&1)))?;
                num_traits::pow::pow(inner, *k as usize)
            }
            RealExpr::Mul(a, b) => a.approx(digits + 24)? * b.approx(digits + 24)?,
            RealExpr::Div(a, b) => {
                let d = b.approx(digits + 24)?;
                if d.is_zero() {
                    return Err(Error::PrecisionExhausted("division by zero".into()));
                }
                a.approx(digits + 24)? / d
            }
            RealExpr::Phi => {
                let sqrt5 = nth_root_approx(&BigRational::from_integer(5.into()), 2, digits + 4);
                (sqrt5 + BigRational::one()) / BigRational::from_integer(2.into())
            }
            RealExpr::EulerE => {
                let mut sum = BigRational::zero();
                let mut term = BigRational::one();
                let bound = BigRational::new(
                    1.into(),
                    BigInt::from(10u32).pow(digits + 4),
                );
                let mut k: u64 = 1;
                loop {
                    sum += &term;
                    term /= BigRational::from_integer(k.into());
                    if term < bound {
                        break;
                    }
                    k += 1;
                }
                sum
            }
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.approx(40)
            .map(|r| crate::exact::rational_to_f64(&r))
            .unwrap_or(f64::NAN)
    }
}

// ---------------------------------------------------------------------------
// Expression parser (shared with config ingestion and the CLI)
// ---------------------------------------------------------------------------

/// Parse expressions like `liouville(4) * root(3/2, 4)`, `sqrt(2)`, `phi`,
/// `3/7`, `0.25`, `pow(liouville(6), 2)`.
pub fn parse_real_expr(text: &str) -> std::result::Result<RealExpr, String> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let expr = parse_term(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(format!("unexpected trailing input at token {pos}"));
    }
    Ok(expr)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Star,
    Slash,
    Comma,
    LParen,
    RParen,
    Minus,
}

fn tokenize(text: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                out.push(Tok::Num(chars[start..i].iter().collect()));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

fn parse_term(tokens: &[Tok], pos: &mut usize) -> std::result::Result<RealExpr, String> {
    let mut acc = parse_factor(tokens, pos)?;
    while *pos < tokens.len() {
        match tokens[*pos] {
            Tok::Star => {
                *pos += 1;
                let rhs = parse_factor(tokens, pos)?;
                acc = RealExpr::Mul(Box::new(acc), Box::new(rhs));
            }
            Tok::Slash => {
                *pos += 1;
                let rhs = parse_factor(tokens, pos)?;
                acc = RealExpr::Div(Box::new(acc), Box::new(rhs));
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_factor(tokens: &[Tok], pos: &mut usize) -> std::result::Result<RealExpr, String> {
    if *pos >= tokens.len() {
        return Err("unexpected end of expression".into());
    }
    match tokens[*pos].clone() {
        Tok::Minus => {
            *pos += 1;
            let inner = parse_factor(tokens, pos)?;
            Ok(RealExpr::Mul(
                Box::new(RealExpr::rational(-1, 1)),
                Box::new(inner),
            ))
        }
        Tok::Num(s) => {
            *pos += 1;
            Ok(RealExpr::Rational(decimal_to_rational(&s)?))
        }
        Tok::LParen => {
            *pos += 1;
            let inner = parse_term(tokens, pos)?;
            expect(tokens, pos, Tok::RParen)?;
            Ok(inner)
        }
        Tok::Ident(name) => {
            *pos += 1;
            match name.as_str() {
                "phi" => Ok(RealExpr::Phi),
                "e" => Ok(RealExpr::EulerE),
                "sqrt" => {
                    let args = parse_args(tokens, pos, 1)?;
                    Ok(RealExpr::Root {
                        arg: Box::new(args.into_iter().next().unwrap()),
                        index: 2,
                    })
                }
                "root" => {
                    let mut args = parse_args(tokens, pos, 2)?.into_iter();
                    let arg = args.next().unwrap();
                    let idx = expr_to_u32(&args.next().unwrap())?;
                    Ok(RealExpr::Root {
                        arg: Box::new(arg),
                        index: idx,
                    })
                }
                "pow" => {
                    let mut args = parse_args(tokens, pos, 2)?.into_iter();
                    let arg = args.next().unwrap();
                    let k = expr_to_u32(&args.next().unwrap())?;
                    Ok(RealExpr::Pow(Box::new(arg), k))
                }
                "liouville" => {
                    let args = parse_args(tokens, pos, 1)?;
                    let k = expr_to_u32(&args[0])?;
                    Ok(RealExpr::Liouville(k))
                }
                other => Err(format!("unknown function or constant `{other}`")),
            }
        }
        other => Err(format!("unexpected token {other:?}")),
    }
}

fn parse_args(
    tokens: &[Tok],
    pos: &mut usize,
    count: usize,
) -> std::result::Result<Vec<RealExpr>, String> {
    expect(tokens, pos, Tok::LParen)?;
    let mut args = Vec::new();
    loop {
        args.push(parse_term(tokens, pos)?);
        if *pos < tokens.len() && tokens[*pos] == Tok::Comma {
            *pos += 1;
        } else {
            break;
        }
    }
    expect(tokens, pos, Tok::RParen)?;
    if args.len() != count {
        return Err(format!("expected {count} arguments, got {}", args.len()));
    }
    Ok(args)
}

fn expect(tokens: &[Tok], pos: &mut usize, tok: Tok) -> std::result::Result<(), String> {
    if *pos < tokens.len() && tokens[*pos] == tok {
        *pos += 1;
        Ok(())
    } else {
        Err(format!("expected {tok:?}"))
    }
}

fn expr_to_u32(e: &RealExpr) -> std::result::Result<u32, String> {
    match e {
        RealExpr::Rational(r) if r.is_integer() && r.is_positive() => r
            .to_integer()
            .to_u32()
            .ok_or_else(|| "integer argument out of range".into()),
        _ => Err("expected a positive integer argument".into()),
    }
}

/// Exact decimal string to rational: "1.25" -> 5/4.
fn decimal_to_rational(s: &str) -> std::result::Result<BigRational, String> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("empty number".into());
    }
    let digits: String = format!("{int_part}{frac_part}");
    let num: BigInt = digits
        .parse()
        .map_err(|_| format!("bad number `{s}`"))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(num, den))
}

// ---------------------------------------------------------------------------
// Continued fractions
// ---------------------------------------------------------------------------

/// Partial quotients and exact convergents of a real number.
#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    /// Convergents (p_k, q_k), same length as `quotients`.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Whether the expansion terminated (the input is rational and fully
    /// consumed).
    pub terminated: bool,
}

impl ContinuedFraction {
    fn from_quotients(quotients: Vec<BigInt>, terminated: bool) -> Self {
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (BigInt::zero(), BigInt::one());
        // p_{-1}=1, q_{-1}=0; p_0 = a_0, q_0 = 1
        for a in &quotients {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            convergents.push((p.clone(), q.clone()));
        }
        let cf = ContinuedFraction {
            quotients,
            convergents,
            terminated,
        };
        debug_assert!(cf.recurrence_holds());
        cf
    }

    /// Fundamental recurrence: p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}.
    pub fn recurrence_holds(&self) -> bool {
        let mut prev = (BigInt::one(), BigInt::zero());
        for (k, (p, q)) in self.convergents.iter().enumerate() {
            let det = p * &prev.1 - &prev.0 * q;
            let expect: BigInt = if k % 2 == 0 { (-1).into() } else { 1.into() };
            if det != expect {
                return false;
            }
            prev = (p.clone(), q.clone());
        }
        true
    }
}

/// Continued fraction of `alpha` to at most `depth` partial quotients.
///
/// Rational inputs expand exactly by the Euclidean algorithm. Irrational
/// inputs expand through interval arithmetic: a quotient is emitted only
/// when the floor is certified on the whole interval, and the working
/// precision auto-scales until it is (capped, then `PrecisionExhausted`).
pub fn continued_fraction(alpha: &RealExpr, depth: usize) -> Result<ContinuedFraction> {
    if let Some(r) = alpha.exact_rational() {
        return Ok(rational_cf(&r, depth));
    }
    let mut digits: u32 = (60 + 20 * depth as u32).min(MAX_DIGITS);
    loop {
        match interval_cf(alpha, depth, digits)? {
            Some(cf) => return Ok(cf),
            None => {
                if digits >= MAX_DIGITS {
                    return Err(Error::PrecisionExhausted(format!(
                        "cannot certify partial quotient at depth {depth} with {digits} digits"
                    )));
                }
                digits = (digits * 2).min(MAX_DIGITS);
            }
        }
    }
}

fn rational_cf(r: &BigRational, depth: usize) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    while !den.is_zero() && quotients.len() < depth {
        let a = num.div_floor(&den);
        let rem = &num - &a * &den;
        quotients.push(a);
        num = std::mem::replace(&mut den, rem);
    }
    let terminated = den.is_zero();
    ContinuedFraction::from_quotients(quotients, terminated)
}

fn interval_cf(
    alpha: &RealExpr,
    depth: usize,
    digits: u32,
) -> Result<Option<ContinuedFraction>> {
    let eps = BigRational::new(1.into(), BigInt::from(10u32).pow(digits));
    let mid = alpha.approx(digits)?;
    let mut lo = &mid - &eps;
    let mut hi = &mid + &eps;
    let mut quotients = Vec::new();
    while quotients.len() < depth {
        let a = lo.floor().to_integer();
        if hi.floor().to_integer() != a {
            return Ok(None); // cannot certify this quotient
        }
        quotients.push(a.clone());
        let fl = &lo - BigRational::from_integer(a.clone());
        let fh = &hi - BigRational::from_integer(a);
        if fl.is_zero() || fl.is_negative() {
            // The tail may vanish: indistinguishable from a rational at this
            // precision.
            return Ok(None);
        }
        // reciprocal flips the interval
        lo = fh.recip();
        hi = fl.recip();
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
    }
    Ok(Some(ContinuedFraction::from_quotients(quotients, false)))
}

// ---------------------------------------------------------------------------
// Liouville constants and irrationality profiles
// ---------------------------------------------------------------------------

/// Exact truncated Liouville constant sum_{k=1..terms} 10^{-k!}.
pub fn liouville_constant(terms: u32) -> Result<BigRational> {
    if terms == 0 {
        return Err(Error::BudgetExceeded("need at least one term".into()));
    }
    if terms > 9 {
        return Err(Error::BudgetExceeded(format!(
            "{terms}! decimal digits exceed the big-integer budget"
        )));
    }
    let mut fact: u64 = 1;
    let mut sum = BigRational::zero();
    for k in 1..=terms as u64 {
        fact *= k;
        sum += BigRational::new(BigInt::one(), BigInt::from(10u32).pow(fact as u32));
    }
    Ok(sum)
}

/// One rational-approximation sample of an irrationality profile.
#[derive(Debug, Clone)]
pub struct ExponentSample {
    pub p: BigInt,
    pub q: BigInt,
    /// -log |alpha - p/q| / log q (infinite on an exact hit).
    pub achieved_exponent: f64,
    /// -log10 |alpha - p/q|: correct decimal digits of the approximation.
    pub decimal_digits: f64,
}

/// Approximation quality profile of a real number.
#[derive(Debug, Clone)]
pub struct DiophantineProfile {
    pub samples: Vec<ExponentSample>,
    /// Whether the achieved exponents keep setting new records that exceed
    /// the Liouville threshold.
    pub liouville_trend: bool,
    /// Max exponent over the last third of the samples (finite entries).
    pub best_exponent: f64,
    /// The continued fraction terminated: the input is exactly rational.
    pub rational: bool,
}

/// ln |alpha - p/q|, or None on an exact hit. Exact arithmetic when alpha
/// is rational; certified interval separation otherwise.
fn approx_error(alpha: &RealExpr, p: &BigInt, q: &BigInt) -> Result<Option<f64>> {
    let frac = BigRational::new(p.clone(), q.clone());
    if let Some(r) = alpha.exact_rational() {
        let err = (r - frac).abs();
        if err.is_zero() {
            return Ok(None);
        }
        return Ok(Some(ln_rational(&err)));
    }
    let mut digits: u32 = (2.0 * log10_bigint(q) + 40.0) as u32;
    loop {
        let eps = BigRational::new(1.into(), BigInt::from(10u32).pow(digits));
        let approx = alpha.approx(digits)?;
        let err = (approx - &frac).abs();
        if err > eps.clone() * BigRational::from_integer(16.into()) {
            return Ok(Some(ln_rational(&err)));
        }
        if digits >= MAX_DIGITS {
            return Err(Error::PrecisionExhausted(
                "cannot separate approximation error from working precision".into(),
            ));
        }
        digits = (digits * 2).min(MAX_DIGITS);
    }
}

fn log10_bigint(n: &BigInt) -> f64 {
    ln_rational(&BigRational::from_integer(n.abs())) / std::f64::consts::LN_10
}

/// Profile the rational-approximation quality of `alpha` from its
/// continued-fraction convergents.
pub fn irrationality_profile(alpha: &RealExpr, depth: usize) -> Result<DiophantineProfile> {
    let cf = continued_fraction(alpha, depth)?;
    let mut samples = Vec::new();
    for (p, q) in &cf.convergents {
        if q < &BigInt::from(2) {
            continue;
        }
        let ln_err = approx_error(alpha, p, q)?;
        let ln_q = ln_rational(&BigRational::from_integer(q.clone()));
        let (exp, digits) = match ln_err {
            // exact hit (only for rational inputs)
            None => (f64::INFINITY, f64::INFINITY),
            Some(l) => (-l / ln_q, -l / std::f64::consts::LN_10),
        };
        samples.push(ExponentSample {
            p: p.clone(),
            q: q.clone(),
            achieved_exponent: exp,
            decimal_digits: digits,
        });
    }
    let liouville_trend = liouville_trend_of(&samples);
    let tail_start = samples.len().saturating_sub(samples.len().div_ceil(3));
    let best_exponent = samples[tail_start..]
        .iter()
        .map(|s| s.achieved_exponent)
        .filter(|e| e.is_finite())
        .fold(f64::NAN, f64::max);
    Ok(DiophantineProfile {
        samples,
        liouville_trend,
        best_exponent,
        rational: cf.terminated,
    })
}

/// Record-based trend: exponents must keep setting records (ignoring the
/// small-denominator region), with at least four records, a late record,
/// and the last one beyond the Liouville threshold.
fn liouville_trend_of(samples: &[ExponentSample]) -> bool {
    let threshold = 5.0;
    let mut records: Vec<(usize, f64)> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (i, s) in samples.iter().enumerate() {
        if s.q < BigInt::from(10) {
            continue;
        }
        if s.achieved_exponent > best {
            best = s.achieved_exponent;
            records.push((i, s.achieved_exponent));
        }
    }
    if records.len() < 4 {
        return false;
    }
    let last = records.last().unwrap();
    let late = last.0 + samples.len().div_ceil(3) >= samples.len();
    last.1 > threshold && late
}

// ---------------------------------------------------------------------------
// Simultaneous Diophantine approximation search
// ---------------------------------------------------------------------------

/// Trend verdict of a simultaneous-approximation search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SdaTrend {
    SatisfiedTrend,
    FailedTrend,
    Inconclusive,
}

/// One sampled common denominator.
#[derive(Debug, Clone)]
pub struct SdaSample {
    pub numerators: Vec<BigInt>,
    pub q: BigInt,
    /// max_j |alpha_j^eta - p_j^eta / q|, natural log (0.0 encodes an exact
    /// hit together with `exact_zero`).
    pub ln_max_error: f64,
    pub exact_zero: bool,
    pub implied_exponent: f64,
}

/// Result of the search for the condition with exponent eta.
#[derive(Debug, Clone)]
pub struct SdaWitness {
    pub eta: u32,
    pub samples: Vec<SdaSample>,
    pub trend: SdaTrend,
    /// True when an exact zero-error representation certified the verdict.
    pub exact_certificate: bool,
    pub scope_note: &'static str,
}

/// Search for simultaneous rational approximations of the eta-th powers:
/// common denominators q with integers p_j making |alpha_j^eta - p_j^eta/q|
/// super-polynomially small in q.
///
/// Candidate denominators follow the constructions the theory itself uses:
/// perfect powers d^eta seeded by the convergents of each alpha_j, and
/// m r^{eta-1} s built from convergent pairs (r, s) of each alpha_j^eta.
/// When every alpha_j^eta is exactly rational the search first looks for a
/// zero-error representation, which certifies the verdict outright (such a
/// certificate is exempt from the denominator budget: a constant sequence
/// with zero error satisfies the condition for every exponent).
pub fn sda_witness_search(
    alphas: &[RealExpr],
    eta: u32,
    q_budget: &BigInt,
    l_max: u32,
) -> Result<SdaWitness> {
    if eta == 0 {
        return Err(Error::PreconditionFailed("eta must be >= 1".into()));
    }
    if alphas.is_empty() {
        return Err(Error::PreconditionFailed("empty alpha vector".into()));
    }

    let powers: Vec<RealExpr> = alphas
        .iter()
        .map(|a| RealExpr::Pow(Box::new(a.clone()), eta))
        .collect();

    let mut samples: Vec<SdaSample> = Vec::new();
    let mut exact_certificate = false;

    // Exact route: all eta-th powers rational with matching power-free
    // kernels admit a perfect common denominator.
    let exact_powers: Option<Vec<BigRational>> =
        powers.iter().map(|p| p.exact_rational()).collect();
    if let Some(vals) = &exact_powers {
        if let Some(mut exact_samples) = exact_representation(vals, eta) {
            exact_certificate = true;
            samples.append(&mut exact_samples);
        }
    }

    // Enumerative route.
    let budget_f = log10_bigint(q_budget);
    let mut candidates: Vec<BigInt> = Vec::new();

    // d^eta with d from convergents of each alpha_j (plus small d).
    let d_budget_log = budget_f / eta as f64;
    for alpha in alphas {
        let cf = continued_fraction(alpha, 48).or_else(|e| match e {
            Error::PrecisionExhausted(_) => continued_fraction(alpha, 24),
            other => Err(other),
        })?;
        for (_, q) in &cf.convergents {
            if q > &BigInt::one() && log10_bigint(q) <= d_budget_log {
                candidates.push(num_traits::pow::pow(q.clone(), eta as usize));
            }
        }
    }
    for d in 2..=16u32 {
        let dq = num_traits::pow::pow(BigInt::from(d), eta as usize);
        if &dq <= q_budget {
            candidates.push(dq);
        }
    }

    // m r^{eta-1} s from convergent pairs of each alpha_j^eta.
    if eta > 1 {
        let two_eta = num_traits::pow::pow(BigInt::from(2), eta as usize);
        for pw in &powers {
            let cf = continued_fraction(pw, 48)?;
            for (r, s) in &cf.convergents {
                if r.is_zero() || s.is_zero() {
                    continue;
                }
                let base = num_traits::pow::pow(r.abs(), (eta - 1) as usize) * s;
                for m in [BigInt::one(), two_eta.clone()] {
                    let q = &base * &m;
                    if &q <= q_budget && q > BigInt::one() {
                        candidates.push(q);
                    }
                }
            }
        }
    }

    candidates.sort();
    candidates.dedup();

    for q in &candidates {
        if let Some(sample) = evaluate_denominator(alphas, &powers, exact_powers.as_deref(), q, eta)? {
            samples.push(sample);
        }
    }

    if samples.is_empty() {
        return Err(Error::EmptySearch(format!(
            "no denominator <= {q_budget} produced a sample"
        )));
    }

    samples.sort_by(|a, b| a.q.cmp(&b.q));
    samples.dedup_by(|a, b| a.q == b.q);

    let trend = if exact_certificate || samples.iter().any(|s| s.exact_zero) {
        SdaTrend::SatisfiedTrend
    } else {
        trend_of_exponents(&samples, l_max)
    };

    Ok(SdaWitness {
        eta,
        samples,
        trend,
        exact_certificate,
        scope_note: SDA_SCOPE_NOTE,
    })
}

/// Zero-error representation for exactly-rational eta-th powers: find a
/// multiplier m making every A_j m a perfect eta-th power over the common
/// denominator B, i.e. p_j = (A_j m)^{1/eta}, q = m B.
fn exact_representation(vals: &[BigRational], eta: u32) -> Option<Vec<SdaSample>> {
    use num_traits::pow::pow;
    let mut b = BigInt::one();
    for v in vals {
        b = b.lcm(v.denom());
    }
    let nums: Vec<BigInt> = vals.iter().map(|v| (v * BigRational::from_integer(b.clone())).to_integer()).collect();

    if eta == 1 {
        // trivially representable
        let q = b.clone();
        return Some(vec![SdaSample {
            numerators: nums,
            q,
            ln_max_error: 0.0,
            exact_zero: true,
            implied_exponent: f64::INFINITY,
        }]);
    }

    let mut kernel: Option<BigInt> = None;
    for a in &nums {
        if a.is_zero() {
            continue;
        }
        if a.is_negative() && eta % 2 == 0 {
            return None;
        }
        let k = power_free_kernel(&a.abs(), eta);
        match &kernel {
            None => kernel = Some(k),
            Some(k0) if *k0 == k => {}
            _ => return None,
        }
    }
    let kernel = kernel.unwrap_or_else(BigInt::one);
    let m = pow(kernel, (eta - 1) as usize);
    let q = &m * &b;
    let mut numerators = Vec::new();
    for a in &nums {
        if a.is_zero() {
            numerators.push(BigInt::zero());
            continue;
        }
        let target = a * &m;
        let root = perfect_root(&target, eta)?;
        numerators.push(root);
    }
    let mut out = vec![SdaSample {
        numerators,
        q: q.clone(),
        ln_max_error: 0.0,
        exact_zero: true,
        implied_exponent: f64::INFINITY,
    }];

    // Also report the classical 2^eta p^{eta-1} q pattern when the power
    // ratios allow it.
    let g = nums.iter().fold(b.clone(), |acc, a| acc.gcd(a));
    let p_star = &nums[0] / &g;
    let q_star = &b / &g;
    if !p_star.is_zero() {
        let two_eta = pow(BigInt::from(2), eta as usize);
        let q_pat = &two_eta * pow(p_star.abs(), (eta - 1) as usize) * &q_star;
        let mut pattern_nums = Vec::new();
        let mut ok = true;
        for a in &nums {
            let target = (a / &g) * &two_eta * pow(p_star.abs(), (eta - 1) as usize);
            match perfect_root(&target, eta) {
                Some(r) => pattern_nums.push(r),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(SdaSample {
                numerators: pattern_nums,
                q: q_pat,
                ln_max_error: 0.0,
                exact_zero: true,
                implied_exponent: f64::INFINITY,
            });
        }
    }
    Some(out)
}

/// Best numerators for one denominator; the error is recomputed through an
/// independent path (exact rational against interval arithmetic) when the
/// powers are exact.
fn evaluate_denominator(
    alphas: &[RealExpr],
    powers: &[RealExpr],
    exact_powers: Option<&[BigRational]>,
    q: &BigInt,
    eta: u32,
) -> Result<Option<SdaSample>> {
    let digits = (2.0 * log10_bigint(q) + 40.0) as u32;
    if digits > MAX_DIGITS {
        return Ok(None);
    }
    let q_rat = BigRational::from_integer(q.clone());
    // p_j ~= alpha_j q^{1/eta}, refined +-1
    let q_root = nth_root_approx(&q_rat, eta, digits.min(2_000));
    let mut numerators = Vec::new();
    let mut worst_ln: f64 = f64::NEG_INFINITY;
    let mut worst_exact_zero = true;

    for (j, alpha) in alphas.iter().enumerate() {
        let a_approx = alpha.approx(digits.min(2_000))?;
        let center = crate::exact::round_rational(&(a_approx * &q_root));
        let mut best: Option<(BigInt, f64, bool)> = None;
        for delta in [-1i32, 0, 1] {
            let cand = &center + BigInt::from(delta);
            let cand_pow = num_traits::pow::pow(cand.clone(), eta as usize);
            let frac = BigRational::new(cand_pow, q.clone());
            let err = match exact_powers {
                Some(vals) => (&vals[j] - &frac).abs(),
                None => (powers[j].approx(digits)? - &frac).abs(),
            };
            let (ln_err, zero) = if err.is_zero() {
                (f64::NEG_INFINITY, true)
            } else {
                (ln_rational(&err), false)
            };
            if best.as_ref().map_or(true, |(_, b, _)| ln_err < *b) {
                best = Some((cand, ln_err, zero));
            }
        }
        let (p, ln_err, zero) = best.unwrap();
        numerators.push(p);
        if !zero {
            worst_exact_zero = false;
            worst_ln = worst_ln.max(ln_err);
        }
    }

    let ln_q = ln_rational(&q_rat);
    if worst_exact_zero {
        return Ok(Some(SdaSample {
            numerators,
            q: q.clone(),
            ln_max_error: 0.0,
            exact_zero: true,
            implied_exponent: f64::INFINITY,
        }));
    }
    let implied = -worst_ln / ln_q;
    Ok(Some(SdaSample {
        numerators,
        q: q.clone(),
        ln_max_error: worst_ln,
        exact_zero: false,
        implied_exponent: implied,
    }))
}

fn trend_of_exponents(samples: &[SdaSample], l_max: u32) -> SdaTrend {
    let exps: Vec<f64> = samples.iter().map(|s| s.implied_exponent).collect();
    let max = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= l_max as f64 {
        if samples.len() >= 4 {
            SdaTrend::FailedTrend
        } else {
            SdaTrend::Inconclusive
        }
    } else {
        // beyond the threshold: demand growing records reaching into the
        // last third of the samples
        let mut records = Vec::new();
        let mut best = f64::NEG_INFINITY;
        for (i, e) in exps.iter().enumerate() {
            if *e > best {
                best = *e;
                records.push(i);
            }
        }
        let late = records
            .last()
            .map(|i| i + exps.len().div_ceil(3) >= exps.len())
            .unwrap_or(false);
        if records.len() >= 3 && late {
            SdaTrend::SatisfiedTrend
        } else {
            SdaTrend::Inconclusive
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_quotients_are_all_ones() {
        let cf = continued_fraction(&RealExpr::Phi, 30).unwrap();
        assert_eq!(cf.quotients[0], BigInt::one());
        for a in &cf.quotients[1..] {
            assert_eq!(*a, BigInt::one());
        }
        assert!(!cf.terminated);
        assert!(cf.recurrence_holds());
    }

    #[test]
    fn sqrt2_quotients() {
        let cf = continued_fraction(&RealExpr::sqrt_of(2, 1), 25).unwrap();
        assert_eq!(cf.quotients[0], BigInt::one());
        for a in &cf.quotients[1..] {
            assert_eq!(*a, BigInt::from(2));
        }
    }

    #[test]
    fn liouville_truncations_exact() {
        assert_eq!(
            liouville_constant(1).unwrap(),
            BigRational::new(1.into(), 10.into())
        );
        assert_eq!(
            liouville_constant(2).unwrap(),
            BigRational::new(11.into(), 100.into())
        );
        assert_eq!(
            liouville_constant(3).unwrap(),
            BigRational::new(110001.into(), 1_000_000.into())
        );
    }

    #[test]
    fn liouville4_has_exact_exponent_four_at_q_one_million() {
        // |L4 - 110001/10^6| = 10^-24 exactly, so the profile holds a sample
        // with q = 10^6 and achieved exponent exactly 4.
        let profile = irrationality_profile(&RealExpr::Liouville(4), 40).unwrap();
        let sample = profile
            .samples
            .iter()
            .find(|s| s.q == BigInt::from(1_000_000u64))
            .expect("q = 10^6 must be a convergent");
        assert!((sample.achieved_exponent - 4.0).abs() < 1e-12);
        assert!((sample.decimal_digits - 24.0).abs() < 1e-9);
    }

    #[test]
    fn phi_profile_plateaus_near_two() {
        let profile = irrationality_profile(&RealExpr::Phi, 40).unwrap();
        assert!(!profile.liouville_trend);
        assert!(!profile.rational);
        assert!(profile.best_exponent > 1.9 && profile.best_exponent < 2.1);
    }

    #[test]
    fn rational_input_is_flagged() {
        let profile = irrationality_profile(&RealExpr::rational(3, 7), 20).unwrap();
        assert!(profile.rational);
    }

    #[test]
    fn liouville6_trend_is_detected() {
        let profile = irrationality_profile(&RealExpr::Liouville(6), 64).unwrap();
        assert!(profile.liouville_trend);
    }

    #[test]
    fn sqrt2_sda_fails() {
        let w = sda_witness_search(
            &[RealExpr::sqrt_of(2, 1)],
            1,
            &BigInt::from(10u64).pow(12),
            5,
        )
        .unwrap();
        assert_eq!(w.trend, SdaTrend::FailedTrend);
        assert!(!w.exact_certificate);
        for s in &w.samples {
            assert!(s.implied_exponent < 5.0);
        }
    }

    #[test]
    fn liouville6_sda_satisfied_at_eta_one() {
        let w = sda_witness_search(
            &[RealExpr::Liouville(6)],
            1,
            &BigInt::from(10u64).pow(30),
            5,
        )
        .unwrap();
        assert_eq!(w.trend, SdaTrend::SatisfiedTrend);
    }

    #[test]
    fn example_vector_eta4_exact_certificate() {
        // alpha = (root(3/2,4) L4, root(24,4) L4): the fourth powers are
        // rational with equal power-free kernels, so a zero-error common
        // denominator exists, including the 2^eta p^{eta-1} q pattern.
        let l4 = RealExpr::Liouville(4);
        let a1 = RealExpr::Mul(
            Box::new(RealExpr::Root {
                arg: Box::new(RealExpr::rational(3, 2)),
                index: 4,
            }),
            Box::new(l4.clone()),
        );
        let a2 = RealExpr::Mul(
            Box::new(RealExpr::Root {
                arg: Box::new(RealExpr::rational(24, 1)),
                index: 4,
            }),
            Box::new(l4),
        );
        let w = sda_witness_search(&[a1, a2], 4, &BigInt::from(10u64).pow(30), 5).unwrap();
        assert_eq!(w.trend, SdaTrend::SatisfiedTrend);
        assert!(w.exact_certificate);
        let zero = w.samples.iter().find(|s| s.exact_zero).unwrap();
        // verify the representation p_j^eta / q = alpha_j^eta independently
        let pow1 = RealExpr::Pow(
            Box::new(RealExpr::Mul(
                Box::new(RealExpr::Root {
                    arg: Box::new(RealExpr::rational(3, 2)),
                    index: 4,
                }),
                Box::new(RealExpr::Liouville(4)),
            )),
            4,
        )
        .exact_rational()
        .unwrap();
        let lhs = BigRational::new(
            num_traits::pow::pow(zero.numerators[0].clone(), 4),
            zero.q.clone(),
        );
        assert_eq!(lhs, pow1);
    }

    #[test]
    fn liouville_implies_sda_for_small_eta() {
        for eta in 1..=4u32 {
            let w = sda_witness_search(
                &[RealExpr::Liouville(6)],
                eta,
                &BigInt::from(10u64).pow(30),
                5,
            )
            .unwrap();
            assert_eq!(w.trend, SdaTrend::SatisfiedTrend, "eta = {eta}");
        }
    }

    #[test]
    fn expr_parser_round_trips() {
        let e = parse_real_expr("liouville(4) * root(3/2, 4)").unwrap();
        let exact = e.exact().unwrap();
        assert!(!exact.is_rational());
        let raised = exact.pow_int(4);
        assert!(raised.is_rational());

        let r = parse_real_expr("0.25").unwrap().exact_rational().unwrap();
        assert_eq!(r, BigRational::new(1.into(), 4.into()));

        let d = parse_real_expr("3/7").unwrap().exact_rational().unwrap();
        assert_eq!(d, BigRational::new(3.into(), 7.into()));

        assert!(parse_real_expr("phi").unwrap().exact().is_none());
        assert!(parse_real_expr("nope(3)").is_err());
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        // e cannot be certified to absurd depth within the digit cap
        let err = continued_fraction(&RealExpr::EulerE, 30_000).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted(_)));
    }
}

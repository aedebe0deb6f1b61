//! Smooth 2*pi-periodic coefficients c(t) = a(t) + i b(t).
//!
//! Trig-polynomial coefficients keep exact rational Fourier modes, so
//! averages and antiderivatives are coefficient arithmetic, never
//! quadrature. Sampled coefficients go through an FFT and stay floating.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::{ExactComplex, ExactReal};
use crate::grid::fft_forward;

/// One term `(re + i im) e^{i k t}` of a trig polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigMode {
    pub k: i64,
    pub re: BigRational,
    pub im: BigRational,
}

/// A coefficient function on the circle.
#[derive(Debug, Clone)]
pub enum CoeffSpec {
    /// Finite Fourier sum with exact rational coefficients.
    TrigPoly { modes: Vec<TrigMode> },
    /// Uniform samples over [0, 2*pi); length must be a power of two.
    Sampled { values: Vec<Complex64> },
}

/// Complex Fourier modes of a coefficient, floating view.
#[derive(Debug, Clone)]
pub struct CoeffModes {
    /// (wavenumber, coefficient) pairs, zero modes dropped.
    pub modes: Vec<(i64, Complex64)>,
}

impl CoeffSpec {
    pub fn constant(re: BigRational, im: BigRational) -> Self {
        CoeffSpec::TrigPoly {
            modes: vec![TrigMode {
                k: 0,
                re,
                im,
            }],
        }
    }

    pub fn one() -> Self {
        CoeffSpec::constant(BigRational::from_integer(1.into()), BigRational::zero())
    }

    /// Floating Fourier modes (combining duplicate wavenumbers).
    pub fn modes(&self) -> CoeffModes {
        match self {
            CoeffSpec::TrigPoly { modes } => {
                let mut acc: std::collections::BTreeMap<i64, Complex64> =
                    std::collections::BTreeMap::new();
                for m in modes {
                    let c = Complex64::new(
                        crate::exact::rational_to_f64(&m.re),
                        crate::exact::rational_to_f64(&m.im),
                    );
                    *acc.entry(m.k).or_insert(Complex64::zero()) += c;
                }
                CoeffModes {
                    modes: acc.into_iter().filter(|(_, c)| c.norm() != 0.0).collect(),
                }
            }
            CoeffSpec::Sampled { values } => {
                let n = values.len();
                let hat = fft_forward(values);
                let mut modes = Vec::new();
                for (idx, c) in hat.iter().enumerate() {
                    let k = if idx <= n / 2 {
                        idx as i64
                    } else {
                        idx as i64 - n as i64
                    };
                    let c = c / n as f64;
                    if c.norm() > 1e-15 {
                        modes.push((k, c));
                    }
                }
                modes.sort_by_key(|(k, _)| *k);
                CoeffModes { modes }
            }
        }
    }

    /// c(t) at an arbitrary point.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.modes().eval(t)
    }

    /// Mean value over the circle; exact rational mode for trig polynomials,
    /// spectrally accurate grid mean for sampled data.
    pub fn average(&self) -> Complex64 {
        match self.average_exact() {
            Some(e) => e.to_complex64(),
            None => match self {
                CoeffSpec::Sampled { values } => {
                    let n = values.len() as f64;
                    values.iter().sum::<Complex64>() / n
                }
                CoeffSpec::TrigPoly { .. } => unreachable!(),
            },
        }
    }

    /// Exact average, available only for trig polynomials.
    pub fn average_exact(&self) -> Option<ExactComplex> {
        match self {
            CoeffSpec::TrigPoly { modes } => {
                let mut re = BigRational::zero();
                let mut im = BigRational::zero();
                for m in modes.iter().filter(|m| m.k == 0) {
                    re += &m.re;
                    im += &m.im;
                }
                Some(ExactComplex::new(
                    ExactReal::Rational(re),
                    ExactReal::Rational(im),
                ))
            }
            CoeffSpec::Sampled { .. } => None,
        }
    }

    /// Whether the oscillatory part vanishes (exactly for trig polynomials).
    pub fn is_constant(&self) -> bool {
        match self {
            CoeffSpec::TrigPoly { modes } => modes.iter().all(|m| {
                m.k == 0 || (m.re.is_zero() && m.im.is_zero())
            }),
            CoeffSpec::Sampled { values } => {
                let avg = self.average();
                values.iter().all(|v| (v - avg).norm() < 1e-13)
            }
        }
    }

    /// The zero-mean primitives (A, B) of the real and imaginary parts:
    /// A(t) = int_0^t a(s) ds - a0 t, and likewise for B. Both are
    /// 2*pi-periodic and vanish at t = 0.
    pub fn primitive(&self) -> CoeffPrimitive {
        let modes = self.modes();
        let avg = self.average();
        // Oscillatory integral: sum over k != 0 of c_k (e^{ikt} - 1)/(ik).
        let osc: Vec<(i64, Complex64)> = modes
            .modes
            .iter()
            .filter(|(k, _)| *k != 0)
            .map(|(k, c)| (*k, c / Complex64::new(0.0, *k as f64)))
            .collect();
        CoeffPrimitive { osc, avg }
    }
}

/// Evaluator for the periodic primitives of a coefficient.
#[derive(Debug, Clone)]
pub struct CoeffPrimitive {
    /// Terms c_k/(ik) for k != 0; the primitive of c - c0 is
    /// sum c_k/(ik) (e^{ikt} - 1).
    osc: Vec<(i64, Complex64)>,
    avg: Complex64,
}

impl CoeffPrimitive {
    /// Complex primitive P(t) = int_0^t (c(s) - c0) ds = A(t) + i B(t).
    pub fn eval_complex(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for (k, w) in &self.osc {
            let phase = Complex64::from_polar(1.0, *k as f64 * t);
            acc += w * (phase - 1.0);
        }
        acc
    }

    /// A(t): zero-mean primitive of the real part.
    pub fn eval_a(&self, t: f64) -> f64 {
        // Re P(t) picks exactly int (a - a0) because P integrates c - c0.
        self.eval_complex(t).re
    }

    /// B(t): zero-mean primitive of the imaginary part.
    pub fn eval_b(&self, t: f64) -> f64 {
        self.eval_complex(t).im
    }

    pub fn average(&self) -> Complex64 {
        self.avg
    }

    /// Full primitive of c: int_0^t c(s) ds = c0 t + P(t).
    pub fn eval_full(&self, t: f64) -> Complex64 {
        self.avg * t + self.eval_complex(t)
    }
}

impl CoeffModes {
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for (k, c) in &self.modes {
            acc += c * Complex64::from_polar(1.0, *k as f64 * t);
        }
        acc
    }

    /// Max wavenumber present.
    pub fn band(&self) -> i64 {
        self.modes.iter().map(|(k, _)| k.abs()).max().unwrap_or(0)
    }

    /// Sup of |c| estimated on a fine grid.
    pub fn sup_norm(&self) -> f64 {
        let n = 1024;
        (0..n)
            .map(|i| self.eval(2.0 * std::f64::consts::PI * i as f64 / n as f64).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// c(t) = 2 + sin t as a trig polynomial: sin t = (e^{it} - e^{-it})/(2i).
    fn two_plus_sin() -> CoeffSpec {
        CoeffSpec::TrigPoly {
            modes: vec![
                TrigMode { k: 0, re: rat(2, 1), im: rat(0, 1) },
                TrigMode { k: 1, re: rat(0, 1), im: rat(-1, 2) },
                TrigMode { k: -1, re: rat(0, 1), im: rat(1, 2) },
            ],
        }
    }

    /// c(t) = 1 + cos t + 3i sin t.
    fn cos_plus_3isin() -> CoeffSpec {
        CoeffSpec::TrigPoly {
            modes: vec![
                TrigMode { k: 0, re: rat(1, 1), im: rat(0, 1) },
                TrigMode { k: 1, re: rat(1, 2), im: rat(0, 1) },
                TrigMode { k: -1, re: rat(1, 2), im: rat(0, 1) },
                // 3i sin t = 3i (e^{it} - e^{-it})/(2i) = (3/2)(e^{it} - e^{-it})
                TrigMode { k: 1, re: rat(3, 2), im: rat(0, 1) },
                TrigMode { k: -1, re: rat(-3, 2), im: rat(0, 1) },
            ],
        }
    }

    #[test]
    fn averages_are_exact() {
        let avg = two_plus_sin().average_exact().unwrap();
        assert_eq!(avg.re.as_rational().unwrap(), &rat(2, 1));
        assert!(avg.im.is_zero());

        let avg = cos_plus_3isin().average_exact().unwrap();
        assert_eq!(avg.re.as_rational().unwrap(), &rat(1, 1));
        assert!(avg.im.is_zero());
    }

    #[test]
    fn sampled_exp_cos_average_matches_quadrature_oracle() {
        // Oracle: I0(1) = (2 pi)^{-1} int exp(cos t) dt, modified Bessel.
        let n = 256;
        let values: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((2.0 * PI * i as f64 / n as f64).cos().exp(), 0.0))
            .collect();
        let c = CoeffSpec::Sampled { values };
        let i0 = 1.2660658777520084;
        assert!((c.average().re - i0).abs() < 1e-12);
        assert!(c.average().im.abs() < 1e-14);
    }

    #[test]
    fn primitive_of_one_plus_cos_is_sin() {
        // a(t) = 1 + cos t, a0 = 1, so A(t) = sin t.
        let c = CoeffSpec::TrigPoly {
            modes: vec![
                TrigMode { k: 0, re: rat(1, 1), im: rat(0, 1) },
                TrigMode { k: 1, re: rat(1, 2), im: rat(0, 1) },
                TrigMode { k: -1, re: rat(1, 2), im: rat(0, 1) },
            ],
        };
        let p = c.primitive();
        for i in 0..64 {
            let t = 2.0 * PI * i as f64 / 64.0;
            assert!((p.eval_a(t) - t.sin()).abs() < 1e-13);
            assert!(p.eval_b(t).abs() < 1e-13);
        }
        assert!(p.eval_a(0.0).abs() < 1e-15);
    }

    #[test]
    fn constant_imag_part_has_zero_primitive() {
        let c = CoeffSpec::constant(rat(0, 1), rat(5, 1));
        let p = c.primitive();
        for i in 0..32 {
            let t = 2.0 * PI * i as f64 / 32.0;
            assert_eq!(p.eval_b(t), 0.0);
        }
    }

    #[test]
    fn sampled_primitive_matches_adaptive_quadrature() {
        // a(t) = exp(cos t); compare A(pi/2) against an adaptive Simpson
        // oracle for int_0^{pi/2} (a(s) - a0) ds.
        let n = 512;
        let values: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((2.0 * PI * i as f64 / n as f64).cos().exp(), 0.0))
            .collect();
        let c = CoeffSpec::Sampled { values };
        let a0 = c.average().re;
        let f = |s: f64| s.cos().exp() - a0;
        let oracle = adaptive_simpson(&f, 0.0, PI / 2.0, 1e-13, 30);
        let p = c.primitive();
        assert!((p.eval_a(PI / 2.0) - oracle).abs() < 1e-10);
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        let whole = simpson(f, a, b);
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() < 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            adaptive_simpson(f, a, m, eps / 2.0, depth - 1)
                + adaptive_simpson(f, m, b, eps / 2.0, depth - 1)
        }
    }

    #[test]
    fn periodicity_to_machine_precision() {
        let c = cos_plus_3isin();
        for i in 0..16 {
            let t = 2.0 * PI * i as f64 / 16.0;
            let d = (c.eval(t) - c.eval(t + 2.0 * PI)).norm();
            assert!(d < 1e-12, "periodicity violated: {d}");
        }
    }
}

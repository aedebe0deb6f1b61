//! Declarative data model for systems L_j = D_{t_j} + c_j(t_j) P_j(D_x).

pub mod coeff;
pub mod config;
pub mod symbol;

pub use coeff::{CoeffPrimitive, CoeffSpec, TrigMode};
pub use config::validate_system;
pub use symbol::{SymbolForm, SymbolSpec};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::ExactComplex;

/// Finite truncation of the lattice scan.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FreqWindow {
    /// Scan ||xi||_inf <= xi_max.
    pub xi_max: i64,
    /// tau-box slack: |tau_j| <= ceil(sup |p_j|) + tau_margin (oracle only;
    /// the production minimizer picks the nearest integer directly).
    pub tau_margin: i64,
    /// Number of dyadic sub-windows required by the exponent fits.
    pub dyadic_levels: u32,
}

impl Default for FreqWindow {
    fn default() -> Self {
        FreqWindow {
            xi_max: 256,
            tau_margin: 2,
            dyadic_levels: 4,
        }
    }
}

impl FreqWindow {
    pub fn with_xi_max(xi_max: i64) -> Self {
        FreqWindow {
            xi_max,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.xi_max <= 0 {
            return Err(Error::validation("window.xiMax", "must be positive"));
        }
        if self.tau_margin <= 0 {
            return Err(Error::validation("window.tauMargin", "must be positive"));
        }
        if self.dyadic_levels < 2 {
            return Err(Error::validation(
                "window.dyadicLevels",
                "at least 2 levels are needed for decay-rate regression",
            ));
        }
        Ok(())
    }
}

/// Numeric tolerances shared across the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToleranceSet {
    /// Distance to Z below which a float counts as an integer.
    pub integer_tol: f64,
    /// Target quadrature error.
    pub quad_tol: f64,
    /// Residual tolerance for exponent fits.
    pub fit_tol: f64,
    /// t-grid size per circle (power of two).
    pub grid_points: usize,
    /// Highest t-derivative order checked by decay fits.
    pub deriv_order: u32,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            integer_tol: 1e-9,
            quad_tol: 1e-10,
            fit_tol: 0.15,
            grid_points: 256,
            deriv_order: 2,
        }
    }
}

impl ToleranceSet {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tolerances.integerTol", self.integer_tol),
            ("tolerances.quadTol", self.quad_tol),
            ("tolerances.fitTol", self.fit_tol),
        ] {
            if !(v > 0.0) {
                return Err(Error::validation(name, "must be strictly positive"));
            }
        }
        if self.grid_points < 2 || !self.grid_points.is_power_of_two() {
            return Err(Error::validation(
                "tolerances.gridPoints",
                "power of two required",
            ));
        }
        Ok(())
    }
}

/// A validated system of n operators on T^n x T^N.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    /// Number of t-variables (one operator per t-circle).
    pub n: usize,
    /// Dimension N of the x-torus.
    pub n_x: usize,
    pub coeffs: Vec<CoeffSpec>,
    pub symbols: Vec<SymbolSpec>,
    pub window: FreqWindow,
    pub tolerances: ToleranceSet,
}

impl SystemSpec {
    pub fn new(
        n_x: usize,
        coeffs: Vec<CoeffSpec>,
        symbols: Vec<SymbolSpec>,
        window: FreqWindow,
        tolerances: ToleranceSet,
    ) -> Result<Self> {
        let sys = SystemSpec {
            n: coeffs.len(),
            n_x,
            coeffs,
            symbols,
            window,
            tolerances,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("n", "must be positive"));
        }
        if self.n_x == 0 {
            return Err(Error::validation("N", "must be positive"));
        }
        if self.coeffs.len() != self.n {
            return Err(Error::validation(
                "coeffs",
                format!("expected {}", self.n),
            ));
        }
        if self.symbols.len() != self.n {
            return Err(Error::validation(
                "symbols",
                format!("expected {}", self.n),
            ));
        }
        for (j, s) in self.symbols.iter().enumerate() {
            if s.requires_n1() && self.n_x != 1 {
                return Err(Error::validation(
                    format!("symbols[{j}]"),
                    "homogeneous and parity forms require N = 1",
                ));
            }
        }
        self.window.validate()?;
        self.tolerances.validate()?;
        Ok(())
    }

    /// Average c_{j0} of the j-th coefficient.
    pub fn c0(&self, j: usize) -> Complex64 {
        self.coeffs[j].average()
    }

    /// M_j(t, xi) = c_j(t) p_j(xi).
    pub fn m(&self, j: usize, t: f64, xi: &[i128]) -> Result<Complex64> {
        Ok(self.coeffs[j].eval(t) * self.symbols[j].eval(xi)?)
    }

    /// Normal-form multiplier M_{j0}(xi) = c_{j0} p_j(xi).
    pub fn m0(&self, j: usize, xi: &[i128]) -> Result<Complex64> {
        Ok(self.c0(j) * self.symbols[j].eval(xi)?)
    }

    /// Exact normal-form multiplier when both factors are exact.
    pub fn m0_exact(&self, j: usize, xi: &[i128]) -> Result<Option<ExactComplex>> {
        let avg = match self.coeffs[j].average_exact() {
            Some(a) => a,
            None => return Ok(None),
        };
        let sym = match self.symbols[j].eval_exact(xi)? {
            Some(s) => s,
            None => return Ok(None),
        };
        Ok(avg.mul(&sym))
    }

    /// All coefficients constant (the system equals its normal form).
    pub fn is_constant_coefficient(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_constant())
    }

    /// The normal form: every coefficient replaced by its average.
    pub fn normal_form(&self) -> SystemSpec {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c.average_exact() {
                Some(avg) => CoeffSpec::constant(
                    avg.re.as_rational().cloned().unwrap_or_else(|| {
                        num_rational::BigRational::from_float(c.average().re).unwrap()
                    }),
                    avg.im.as_rational().cloned().unwrap_or_else(|| {
                        num_rational::BigRational::from_float(c.average().im).unwrap()
                    }),
                ),
                None => {
                    let avg = c.average();
                    CoeffSpec::constant(
                        num_rational::BigRational::from_float(avg.re).unwrap(),
                        num_rational::BigRational::from_float(avg.im).unwrap(),
                    )
                }
            })
            .collect();
        SystemSpec {
            n: self.n,
            n_x: self.n_x,
            coeffs,
            symbols: self.symbols.clone(),
            window: self.window,
            tolerances: self.tolerances,
        }
    }

    /// The single-operator subsystem (L_j alone) on T^1 x T^N.
    pub fn single_operator(&self, j: usize) -> SystemSpec {
        SystemSpec {
            n: 1,
            n_x: self.n_x,
            coeffs: vec![self.coeffs[j].clone()],
            symbols: vec![self.symbols[j].clone()],
            window: self.window,
            tolerances: self.tolerances,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let err = SystemSpec::new(
            1,
            vec![CoeffSpec::one(), CoeffSpec::one()],
            vec![SymbolSpec::monomial_xi()],
            FreqWindow::default(),
            ToleranceSet::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "symbols"));
    }

    #[test]
    fn grid_power_of_two_required() {
        let tol = ToleranceSet {
            grid_points: 100,
            ..Default::default()
        };
        let err = tol.validate().unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "tolerances.gridPoints"));
    }

    #[test]
    fn m0_exact_product() {
        // c = 1/2, p(xi) = xi: M0(6) = 3 exactly
        let sys = SystemSpec::new(
            1,
            vec![CoeffSpec::constant(rat(1, 2), rat(0, 1))],
            vec![SymbolSpec::monomial_xi()],
            FreqWindow::default(),
            ToleranceSet::default(),
        )
        .unwrap();
        let m0 = sys.m0_exact(0, &[6]).unwrap().unwrap();
        assert_eq!(m0.as_gaussian().unwrap().0, &rat(3, 1));
    }
}

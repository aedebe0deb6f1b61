//! Config ingestion: JSON documents to validated `SystemSpec`s.
//!
//! Scalars may be plain JSON numbers (binary-exact), `{"num", "den"}`
//! rationals, or expression strings such as `"liouville(4) * root(3/2, 4)"`.
//! Decimal strings parse as exact decimal fractions.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Deserialize;

use crate::diophantine::parse_real_expr;
use crate::error::{Error, Result};
use crate::exact::{ExactComplex, ExactReal};
use crate::freq::Freq;

use super::{CoeffSpec, FreqWindow, SymbolForm, SymbolSpec, SystemSpec, ToleranceSet, TrigMode};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawReal {
    Number(serde_json::Number),
    Fraction { num: i64, den: i64 },
    Expr(String),
}

impl RawReal {
    fn to_exact(&self, path: &str) -> Result<ExactReal> {
        match self {
            RawReal::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(ExactReal::from_int(i))
                } else {
                    let f = n
                        .as_f64()
                        .ok_or_else(|| Error::validation(path, "unrepresentable number"))?;
                    if !f.is_finite() {
                        return Err(Error::validation(path, "number must be finite"));
                    }
                    Ok(ExactReal::from_f64(f))
                }
            }
            RawReal::Fraction { num, den } => {
                if *den == 0 {
                    return Err(Error::validation(path, "zero denominator"));
                }
                Ok(ExactReal::Rational(BigRational::new(
                    (*num).into(),
                    (*den).into(),
                )))
            }
            RawReal::Expr(s) => {
                let expr = parse_real_expr(s)
                    .map_err(|e| Error::validation(path, format!("bad expression: {e}")))?;
                expr.exact().ok_or_else(|| {
                    Error::validation(path, "expression is not exactly representable here")
                })
            }
        }
    }
}

fn default_im() -> RawReal {
    RawReal::Number(serde_json::Number::from(0))
}

#[derive(Debug, Deserialize)]
struct RawComplex {
    re: RawReal,
    #[serde(default = "default_im")]
    im: RawReal,
}

impl RawComplex {
    fn to_exact(&self, path: &str) -> Result<ExactComplex> {
        Ok(ExactComplex::new(
            self.re.to_exact(&format!("{path}.re"))?,
            self.im.to_exact(&format!("{path}.im"))?,
        ))
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawCoeff {
    Trig { trig: Vec<RawTrigMode> },
    Sampled { samples: Vec<[f64; 2]> },
}

#[derive(Debug, Deserialize)]
struct RawTrigMode {
    k: i64,
    re: RawReal,
    #[serde(default = "default_im")]
    im: RawReal,
}

#[derive(Debug, Deserialize)]
struct RawSymbol {
    order: f64,
    form: RawForm,
    #[serde(rename = "boundConstant")]
    bound_constant: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type")]
enum RawForm {
    #[serde(rename = "polynomial")]
    Polynomial { coeffs: Vec<RawPolyCoeff> },
    #[serde(rename = "homogeneous")]
    Homogeneous {
        rho: u32,
        eta: u32,
        #[serde(rename = "pPlus")]
        p_plus: RawComplex,
        #[serde(rename = "pMinus")]
        p_minus: RawComplex,
    },
    #[serde(rename = "logGrowth")]
    LogGrowth { scale: RawComplex },
    #[serde(rename = "parityPiecewise")]
    ParityPiecewise {
        even: Box<RawSymbol>,
        odd: Box<RawSymbol>,
    },
    #[serde(rename = "tabulated")]
    Tabulated {
        table: Vec<RawTableEntry>,
        tail: Box<RawSymbol>,
    },
}

#[derive(Debug, Deserialize)]
struct RawPolyCoeff {
    alpha: Vec<u32>,
    re: RawReal,
    #[serde(default = "default_im")]
    im: RawReal,
}

#[derive(Debug, Deserialize)]
struct RawTableEntry {
    xi: Vec<i64>,
    re: RawReal,
    #[serde(default = "default_im")]
    im: RawReal,
}

#[derive(Debug, Deserialize)]
struct RawWindow {
    #[serde(rename = "xiMax")]
    xi_max: Option<i64>,
    #[serde(rename = "tauMargin")]
    tau_margin: Option<i64>,
    #[serde(rename = "dyadicLevels")]
    dyadic_levels: Option<u32>,
}

#[derive(Debug, Deserialize)]
struct RawTolerances {
    #[serde(rename = "integerTol")]
    integer_tol: Option<f64>,
    #[serde(rename = "quadTol")]
    quad_tol: Option<f64>,
    #[serde(rename = "fitTol")]
    fit_tol: Option<f64>,
    #[serde(rename = "gridPoints")]
    grid_points: Option<usize>,
    #[serde(rename = "derivOrder")]
    deriv_order: Option<u32>,
}

#[derive(Debug, Deserialize)]
struct RawSystem {
    n: Option<usize>,
    #[serde(rename = "N")]
    n_x: usize,
    coeffs: Vec<RawCoeff>,
    symbols: Vec<RawSymbol>,
    window: Option<RawWindow>,
    tolerances: Option<RawTolerances>,
}

fn build_coeff(raw: &RawCoeff, path: &str) -> Result<CoeffSpec> {
    match raw {
        RawCoeff::Trig { trig } => {
            let mut modes = Vec::new();
            for (i, m) in trig.iter().enumerate() {
                let re = m.re.to_exact(&format!("{path}.trig[{i}].re"))?;
                let im = m.im.to_exact(&format!("{path}.trig[{i}].im"))?;
                let as_rat = |e: ExactReal, p: String| {
                    e.as_rational().cloned().ok_or_else(|| {
                        Error::validation(p, "trig coefficients must be rational")
                    })
                };
                modes.push(TrigMode {
                    k: m.k,
                    re: as_rat(re, format!("{path}.trig[{i}].re"))?,
                    im: as_rat(im, format!("{path}.trig[{i}].im"))?,
                });
            }
            Ok(CoeffSpec::TrigPoly { modes })
        }
        RawCoeff::Sampled { samples } => {
            if samples.is_empty() || !samples.len().is_power_of_two() {
                return Err(Error::validation(
                    format!("{path}.samples"),
                    "sample count must be a power of two",
                ));
            }
            Ok(CoeffSpec::Sampled {
                values: samples
                    .iter()
                    .map(|[re, im]| num_complex::Complex64::new(*re, *im))
                    .collect(),
            })
        }
    }
}

fn build_symbol(raw: &RawSymbol, path: &str, n_x: usize) -> Result<SymbolSpec> {
    let form = match &raw.form {
        RawForm::Polynomial { coeffs } => {
            let mut out = Vec::new();
            for (i, c) in coeffs.iter().enumerate() {
                if c.alpha.len() != n_x {
                    return Err(Error::validation(
                        format!("{path}.form.coeffs[{i}].alpha"),
                        format!("expected {n_x} exponents"),
                    ));
                }
                out.push((
                    c.alpha.clone(),
                    ExactComplex::new(
                        c.re.to_exact(&format!("{path}.form.coeffs[{i}].re"))?,
                        c.im.to_exact(&format!("{path}.form.coeffs[{i}].im"))?,
                    ),
                ));
            }
            SymbolForm::Polynomial { coeffs: out }
        }
        RawForm::Homogeneous {
            rho,
            eta,
            p_plus,
            p_minus,
        } => {
            if *rho == 0 || *eta == 0 {
                return Err(Error::validation(
                    format!("{path}.form"),
                    "rho and eta must be positive",
                ));
            }
            if num_integer::gcd(*rho, *eta) != 1 {
                return Err(Error::validation(
                    format!("{path}.form"),
                    "kappa = rho/eta must be in lowest terms",
                ));
            }
            SymbolForm::Homogeneous {
                rho: *rho,
                eta: *eta,
                p_plus: p_plus.to_exact(&format!("{path}.form.pPlus"))?,
                p_minus: p_minus.to_exact(&format!("{path}.form.pMinus"))?,
            }
        }
        RawForm::LogGrowth { scale } => SymbolForm::LogGrowth {
            scale: scale.to_exact(&format!("{path}.form.scale"))?,
        },
        RawForm::ParityPiecewise { even, odd } => SymbolForm::ParityPiecewise {
            even: Box::new(build_symbol(even, &format!("{path}.form.even"), n_x)?),
            odd: Box::new(build_symbol(odd, &format!("{path}.form.odd"), n_x)?),
        },
        RawForm::Tabulated { table, tail } => {
            let mut map: BTreeMap<Freq, ExactComplex> = BTreeMap::new();
            for (i, e) in table.iter().enumerate() {
                if e.xi.len() != n_x {
                    return Err(Error::validation(
                        format!("{path}.form.table[{i}].xi"),
                        format!("expected {n_x} components"),
                    ));
                }
                map.insert(
                    e.xi.iter().map(|&v| v as i128).collect(),
                    ExactComplex::new(
                        e.re.to_exact(&format!("{path}.form.table[{i}].re"))?,
                        e.im.to_exact(&format!("{path}.form.table[{i}].im"))?,
                    ),
                );
            }
            SymbolForm::Tabulated {
                table: map,
                tail: Box::new(build_symbol(tail, &format!("{path}.form.tail"), n_x)?),
            }
        }
    };
    Ok(SymbolSpec {
        order: raw.order,
        form,
        bound_constant: raw.bound_constant,
    })
}

/// Parse and validate a config document; returns the immutable system.
pub fn validate_system(json: &str) -> Result<SystemSpec> {
    let raw: RawSystem = serde_json::from_str(json)
        .map_err(|e| Error::validation("$", format!("syntax: {e}")))?;
    validate_raw(raw)
}

fn validate_raw(raw: RawSystem) -> Result<SystemSpec> {
    if let Some(n) = raw.n {
        if n != raw.coeffs.len() {
            return Err(Error::validation("coeffs", format!("expected {n}")));
        }
        if n != raw.symbols.len() {
            return Err(Error::validation("symbols", format!("expected {n}")));
        }
    } else if raw.coeffs.len() != raw.symbols.len() {
        return Err(Error::validation(
            "symbols",
            format!("expected {}", raw.coeffs.len()),
        ));
    }

    let coeffs = raw
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| build_coeff(c, &format!("coeffs[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let symbols = raw
        .symbols
        .iter()
        .enumerate()
        .map(|(j, s)| build_symbol(s, &format!("symbols[{j}]"), raw.n_x))
        .collect::<Result<Vec<_>>>()?;

    let dw = FreqWindow::default();
    let window = match &raw.window {
        Some(w) => FreqWindow {
            xi_max: w.xi_max.unwrap_or(dw.xi_max),
            tau_margin: w.tau_margin.unwrap_or(dw.tau_margin),
            dyadic_levels: w.dyadic_levels.unwrap_or(dw.dyadic_levels),
        },
        None => dw,
    };
    let dt = ToleranceSet::default();
    let tolerances = match &raw.tolerances {
        Some(t) => ToleranceSet {
            integer_tol: t.integer_tol.unwrap_or(dt.integer_tol),
            quad_tol: t.quad_tol.unwrap_or(dt.quad_tol),
            fit_tol: t.fit_tol.unwrap_or(dt.fit_tol),
            grid_points: t.grid_points.unwrap_or(dt.grid_points),
            deriv_order: t.deriv_order.unwrap_or(dt.deriv_order),
        },
        None => dt,
    };

    SystemSpec::new(raw.n_x, coeffs, symbols, window, tolerances)
}

/// Parse a scalar from the same grammar the config accepts.
pub fn parse_scalar(text: &str) -> Result<ExactReal> {
    let trimmed = text.trim();
    if let Ok(expr) = parse_real_expr(trimmed) {
        if let Some(e) = expr.exact() {
            return Ok(e);
        }
    }
    Err(Error::validation(
        "scalar",
        format!("`{trimmed}` is not an exact scalar"),
    ))
}

impl ExactReal {
    /// Helper for configs: exact zero test after parsing.
    pub fn parsed_is_zero(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARITY_EXAMPLE: &str = r#"{
        "N": 1,
        "coeffs": [ {"trig": [{"k": 0, "re": 1}]}, {"trig": [{"k": 0, "re": 1}]} ],
        "symbols": [
            {"order": 1, "form": {"type": "parityPiecewise",
                "even": {"order": 0, "form": {"type": "polynomial", "coeffs": [{"alpha": [0], "re": 0, "im": 1}]}},
                "odd":  {"order": 1, "form": {"type": "polynomial", "coeffs": [{"alpha": [1], "re": 1}]}}}},
            {"order": 1, "form": {"type": "parityPiecewise",
                "even": {"order": 1, "form": {"type": "polynomial", "coeffs": [{"alpha": [1], "re": 1}]}},
                "odd":  {"order": 0, "form": {"type": "polynomial", "coeffs": [{"alpha": [0], "re": 0, "im": 1}]}}}}
        ],
        "window": {"xiMax": 64}
    }"#;

    #[test]
    fn parity_config_round_trip() {
        let sys = validate_system(PARITY_EXAMPLE).unwrap();
        assert_eq!(sys.n, 2);
        assert_eq!(sys.n_x, 1);
        let v = sys.symbols[0].eval(&[3]).unwrap();
        assert_eq!(v, num_complex::Complex64::new(3.0, 0.0));
        let v = sys.symbols[1].eval(&[3]).unwrap();
        assert_eq!(v, num_complex::Complex64::new(0.0, 1.0));
    }

    #[test]
    fn missing_symbol_is_reported_with_path() {
        let bad = r#"{
            "n": 2, "N": 1,
            "coeffs": [ {"trig": [{"k": 0, "re": 1}]}, {"trig": [{"k": 0, "re": 1}]} ],
            "symbols": [ {"order": 1, "form": {"type": "polynomial", "coeffs": [{"alpha": [1], "re": 1}]}} ]
        }"#;
        let err = validate_system(bad).unwrap_err();
        match err {
            Error::Validation { path, message } => {
                assert_eq!(path, "symbols");
                assert!(message.contains("expected 2"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn grid_points_must_be_power_of_two() {
        let bad = r#"{
            "N": 1,
            "coeffs": [ {"trig": [{"k": 0, "re": 1}]} ],
            "symbols": [ {"order": 1, "form": {"type": "polynomial", "coeffs": [{"alpha": [1], "re": 1}]}} ],
            "tolerances": {"gridPoints": 100}
        }"#;
        let err = validate_system(bad).unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "tolerances.gridPoints"));
    }

    #[test]
    fn expression_scalars_parse_exactly() {
        let cfg = r#"{
            "N": 1,
            "coeffs": [ {"trig": [{"k": 0, "re": "liouville(3)"}]} ],
            "symbols": [ {"order": 1, "form": {"type": "polynomial", "coeffs": [{"alpha": [1], "re": 1}]}} ]
        }"#;
        let sys = validate_system(cfg).unwrap();
        let avg = sys.coeffs[0].average_exact().unwrap();
        let expected = BigRational::new(110001.into(), 1_000_000.into());
        assert_eq!(avg.re.as_rational().unwrap(), &expected);
    }

    #[test]
    fn homogeneous_requires_n1() {
        let bad = r#"{
            "N": 2,
            "coeffs": [ {"trig": [{"k": 0, "re": 1}]} ],
            "symbols": [ {"order": 1, "form": {"type": "homogeneous", "rho": 1, "eta": 1,
                "pPlus": {"re": 1}, "pMinus": {"re": 1}}} ]
        }"#;
        let err = validate_system(bad).unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "symbols[0]"));
    }
}

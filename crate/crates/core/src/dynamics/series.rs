use std::io::Read;

use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// Relative tolerance on sample spacing when checking uniformity.
pub const SPACING_TOL: f64 = 1e-9;

/// Per-sample χ⁰_xy and its field responses, overriding the particle's own.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChiParams {
    pub chi0_xy: f64,
    #[serde(default)]
    pub kappa1: f64,
    #[serde(default)]
    pub kappa2: f64,
    #[serde(default)]
    pub kappa3: f64,
}

impl ChiParams {
    pub fn chi_effective(&self, e_x: f64, b_y: f64) -> f64 {
        self.chi0_xy + self.kappa1 * e_x * b_y + self.kappa2 * e_x + self.kappa3 * b_y
    }
}

/// Uniformly sampled E_x(t), B_y(t) and optionally χ parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRecord", into = "SeriesRecord")]
pub struct FieldTimeSeries {
    t: Vec<f64>,
    e_x: Vec<f64>,
    b_y: Vec<f64>,
    chi: Option<Vec<ChiParams>>,
}

impl FieldTimeSeries {
    pub fn new(t: Vec<f64>, e_x: Vec<f64>, b_y: Vec<f64>, chi: Option<Vec<ChiParams>>) -> Result<Self, DynamicsError> {
        let n = t.len();
        if n < 3 {
            return Err(DynamicsError::TooFewSamples(n));
        }
        if e_x.len() != n || b_y.len() != n || chi.as_ref().is_some_and(|c| c.len() != n) {
            return Err(DynamicsError::SeriesLength);
        }
        let finite = t.iter().chain(&e_x).chain(&b_y).all(|x| x.is_finite())
            && chi
                .iter()
                .flatten()
                .all(|c| [c.chi0_xy, c.kappa1, c.kappa2, c.kappa3].iter().all(|x| x.is_finite()));
        if !finite {
            return Err(DynamicsError::NonFiniteSample);
        }
        let dt = (t[n - 1] - t[0]) / (n - 1) as f64;
        if dt.is_nan() || dt <= 0.0 {
            return Err(DynamicsError::NonUniformSpacing { index: 1 });
        }
        for i in 1..n {
            if ((t[i] - t[i - 1]) - dt).abs() > SPACING_TOL * dt {
                return Err(DynamicsError::NonUniformSpacing { index: i });
            }
        }
        Ok(Self { t, e_x, b_y, chi })
    }

    /// Samples `f(t)` for E_x, B_y and χ at `n` points starting at `t0`.
    pub fn sample<E, B>(
        t0: f64,
        dt: f64,
        n: usize,
        e_x: E,
        b_y: B,
        chi: Option<&dyn Fn(f64) -> ChiParams>,
    ) -> Result<Self, DynamicsError>
    where
        E: Fn(f64) -> f64,
        B: Fn(f64) -> f64,
    {
        let t: Vec<f64> = (0..n).map(|i| t0 + i as f64 * dt).collect();
        let e = t.iter().map(|&x| e_x(x)).collect();
        let b = t.iter().map(|&x| b_y(x)).collect();
        let c = chi.map(|f| t.iter().map(|&x| f(x)).collect());
        Self::new(t, e, b, c)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn dt(&self) -> f64 {
        (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
    }

    pub fn duration(&self) -> f64 {
        self.t[self.t.len() - 1] - self.t[0]
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn e_x(&self) -> &[f64] {
        &self.e_x
    }

    pub fn b_y(&self) -> &[f64] {
        &self.b_y
    }

    pub fn chi_params(&self) -> Option<&[ChiParams]> {
        self.chi.as_deref()
    }

    /// Same series with both field columns multiplied by constant factors.
    pub fn rescaled_fields(&self, e_factor: f64, b_factor: f64) -> Self {
        Self {
            t: self.t.clone(),
            e_x: self.e_x.iter().map(|x| x * e_factor).collect(),
            b_y: self.b_y.iter().map(|x| x * b_factor).collect(),
            chi: self.chi.clone(),
        }
    }

    /// Reads `t_s, E_x, B_y[, chi0_xy, kappa1, kappa2, kappa3]`. χ columns are
    /// optional; if any is present the rest default to 0.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DynamicsError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| DynamicsError::Csv {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let required = |name: &'static str| {
            col(name).ok_or(DynamicsError::Csv {
                line: 1,
                message: format!("missing column `{name}`"),
            })
        };
        let (it, ie, ib) = (required("t_s")?, required("E_x")?, required("B_y")?);
        let chi_cols = ["chi0_xy", "kappa1", "kappa2", "kappa3"].map(col);
        let has_chi = chi_cols.iter().any(Option::is_some);

        let (mut t, mut e, mut b) = (Vec::new(), Vec::new(), Vec::new());
        let mut chi = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| DynamicsError::Csv {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            let field = |idx: usize, name: &str| -> Result<f64, DynamicsError> {
                let raw = rec.get(idx).unwrap_or("");
                raw.parse::<f64>().map_err(|_| DynamicsError::Csv {
                    line,
                    message: format!("field `{name}`: cannot parse `{raw}` as a number"),
                })
            };
            t.push(field(it, "t_s")?);
            e.push(field(ie, "E_x")?);
            b.push(field(ib, "B_y")?);
            if has_chi {
                let names = ["chi0_xy", "kappa1", "kappa2", "kappa3"];
                let mut v = [0.0; 4];
                for (k, c) in chi_cols.iter().enumerate() {
                    if let Some(idx) = c {
                        v[k] = field(*idx, names[k])?;
                    }
                }
                chi.push(ChiParams {
                    chi0_xy: v[0],
                    kappa1: v[1],
                    kappa2: v[2],
                    kappa3: v[3],
                });
            }
        }
        Self::new(t, e, b, has_chi.then_some(chi))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesRecord {
    t_s: Vec<f64>,
    #[serde(rename = "E_x")]
    e_x: Vec<f64>,
    #[serde(rename = "B_y")]
    b_y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<Vec<ChiParams>>,
}

impl TryFrom<SeriesRecord> for FieldTimeSeries {
    type Error = DynamicsError;
    fn try_from(r: SeriesRecord) -> Result<Self, Self::Error> {
        FieldTimeSeries::new(r.t_s, r.e_x, r.b_y, r.chi)
    }
}

impl From<FieldTimeSeries> for SeriesRecord {
    fn from(s: FieldTimeSeries) -> Self {
        Self {
            t_s: s.t,
            e_x: s.e_x,
            b_y: s.b_y,
            chi: s.chi,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_ragged_series() {
        assert_eq!(
            FieldTimeSeries::new(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2], None),
            Err(DynamicsError::TooFewSamples(2))
        );
        assert_eq!(
            FieldTimeSeries::new(vec![0.0, 1.0, 2.0], vec![0.0; 2], vec![0.0; 3], None),
            Err(DynamicsError::SeriesLength)
        );
        assert_eq!(
            FieldTimeSeries::new(vec![0.0, 1.0, 2.5], vec![0.0; 3], vec![0.0; 3], None),
            Err(DynamicsError::NonUniformSpacing { index: 1 })
        );
        assert_eq!(
            FieldTimeSeries::new(vec![0.0, 1.0, 2.0], vec![0.0, f64::NAN, 0.0], vec![0.0; 3], None),
            Err(DynamicsError::NonFiniteSample)
        );
        assert!(FieldTimeSeries::new(vec![2.0, 1.0, 0.0], vec![0.0; 3], vec![0.0; 3], None).is_err());
    }

    #[test]
    fn csv_with_optional_kappas() {
        let text = "t_s,E_x,B_y,chi0_xy,kappa2\n0,1,2,1e-3,0.5\n0.1,1,2,1e-3,0.5\n0.2,1,2,1e-3,0.5\n";
        let s = FieldTimeSeries::from_csv(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 3);
        let c = s.chi_params().unwrap()[0];
        assert_eq!(
            c,
            ChiParams {
                chi0_xy: 1e-3,
                kappa1: 0.0,
                kappa2: 0.5,
                kappa3: 0.0
            }
        );
    }

    #[test]
    fn csv_without_chi_columns() {
        let text = "t_s,E_x,B_y\n0,1,2\n1,1,2\n2,1,2\n";
        let s = FieldTimeSeries::from_csv(text.as_bytes()).unwrap();
        assert!(s.chi_params().is_none());
        assert_eq!(s.dt(), 1.0);
    }

    #[test]
    fn csv_errors_name_line_and_field() {
        let text = "t_s,E_x,B_y\n0,1,2\n1,oops,2\n2,1,2\n";
        let err = FieldTimeSeries::from_csv(text.as_bytes()).unwrap_err();
        match err {
            DynamicsError::Csv { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("E_x"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = FieldTimeSeries::from_csv("t_s,E_x\n0,1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("B_y"));
    }

    #[test]
    fn json_round_trip() {
        let s = FieldTimeSeries::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 3.0], vec![0.1, 0.2, 0.3], None).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"E_x\""));
        let back: FieldTimeSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{c64, Angular, FieldSeries, FieldTerm, Harmonic, Side, Trig};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicJson {
    pub kind: String,
    pub freq: f64,
    /// Present only for complex frequencies.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im_freq: f64,
    pub re_c: f64,
    pub im_c: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub harmonics: Vec<HarmonicJson>,
}

impl FieldSeries {
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms()
            .iter()
            .map(|t| TermJson {
                re_lambda: t.radial_exponent.re,
                im_lambda: t.radial_exponent.im,
                harmonics: t
                    .angular
                    .parts()
                    .iter()
                    .map(|(c, h)| HarmonicJson {
                        kind: match h.kind {
                            Trig::Sin => "sin".into(),
                            Trig::Cos => "cos".into(),
                        },
                        freq: h.freq.re,
                        im_freq: h.freq.im,
                        re_c: c.re,
                        im_c: c.im,
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn from_json_terms(side: Side, terms: &[TermJson]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mut parts: Vec<(Complex64, Harmonic)> = Vec::new();
            for h in &t.harmonics {
                let kind = match h.kind.as_str() {
                    "sin" => Trig::Sin,
                    "cos" => Trig::Cos,
                    other => return Err(Error::Config(format!("unknown harmonic kind {other:?}"))),
                };
                parts.push((c64(h.re_c, h.im_c), Harmonic::new(kind, c64(h.freq, h.im_freq))));
            }
            out.push(FieldTerm::new(c64(t.re_lambda, t.im_lambda), Angular::from_parts(parts)));
        }
        Ok(FieldSeries::from_terms(side, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termalg::re;

    #[test]
    fn json_shape() {
        let s = FieldSeries::term(Side::Upper, 1.5, Angular::sin(3.0, 0.5));
        let v = serde_json::to_value(s.to_json_terms()).unwrap();
        assert_eq!(
            v,
            serde_json::json!([{"re_lambda":1.5,"im_lambda":0.0,
                "harmonics":[{"kind":"sin","freq":0.5,"re_c":3.0,"im_c":0.0}]}])
        );
        let back = FieldSeries::from_json_terms(Side::Upper, &s.to_json_terms()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn complex_frequency_roundtrip() {
        let f = c64(1.5, 0.21);
        let s = FieldSeries::monomial(Side::Lower, f, re(1.0), Harmonic::new(Trig::Cos, f));
        let j = s.to_json_terms();
        assert_eq!(j[0].harmonics[0].im_freq, 0.21);
        assert_eq!(FieldSeries::from_json_terms(Side::Lower, &j).unwrap(), s);
    }
}

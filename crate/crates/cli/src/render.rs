//! JSON and CSV rendering of command results.

use qmoment::exact::XPolyExact;
use qmoment::nevanlinna::DiscreteMeasure;
use qmoment::qcore::SeriesValue;
use qmoment::rootfinder::ZeroTable;
use qmoment::verify::Report;
use rug::{Complex, Float};
use serde_json::{json, Map, Value};

pub use qmoment::format::decimal;

pub trait Render {
    /// Real part and, for complex values, the imaginary part.
    fn parts(&self, digits: usize) -> (String, Option<String>);
}

impl Render for Float {
    fn parts(&self, digits: usize) -> (String, Option<String>) {
        (decimal(self, digits), None)
    }
}

impl Render for Complex {
    fn parts(&self, digits: usize) -> (String, Option<String>) {
        (decimal(self.real(), digits), Some(decimal(self.imag(), digits)))
    }
}

pub struct Row {
    name: String,
    re: String,
    im: Option<String>,
    tail_bound: String,
    round_bound: String,
    terms_used: usize,
}

impl Row {
    pub fn new<T: Render>(name: String, v: &SeriesValue<T>, digits: usize) -> Self {
        let (re, im) = v.value.parts(digits);
        Row {
            name,
            re,
            im,
            tail_bound: decimal(&v.tail_bound, 4),
            round_bound: decimal(&v.round_bound, 4),
            terms_used: v.terms_used,
        }
    }

    fn json(&self) -> Value {
        let value = match &self.im {
            None => json!(self.re),
            Some(im) => json!({ "re": self.re, "im": im }),
        };
        json!({
            "value": value,
            "tail_bound": self.tail_bound,
            "round_bound": self.round_bound,
            "terms_used": self.terms_used,
        })
    }
}

pub enum Output {
    Values { head: Value, rows: Vec<Row> },
    Poly { family: String, n: i64, poly: XPolyExact },
    Zeros(ZeroTable),
    Measure(DiscreteMeasure),
    Density { head: Value, samples: Vec<(String, String)> },
    Moments { head: Value, moments: Vec<(usize, String, String, Option<String>)> },
    Report(Report),
}

fn merge(mut head: Value, extra: Value) -> Value {
    if let (Some(h), Value::Object(e)) = (head.as_object_mut(), extra) {
        h.extend(e);
    }
    head
}

impl Output {
    pub fn json(&self, digits: usize) -> String {
        let v = match self {
            Output::Values { head, rows } => match rows.as_slice() {
                [r] if r.name == "value" => merge(head.clone(), r.json()),
                _ => {
                    let values: Map<String, Value> = rows.iter().map(|r| (r.name.clone(), r.json())).collect();
                    merge(head.clone(), json!({ "values": values }))
                }
            },
            Output::Poly { family, n, poly } => {
                json!({ "family": family, "n": n, "poly": poly.to_json(), "display": poly.to_string() })
            }
            Output::Zeros(t) => t.to_json(digits),
            Output::Measure(m) => m.to_json(digits),
            Output::Density { head, samples } => {
                let s: Vec<Value> = samples.iter().map(|(x, w)| json!({ "x": x, "density": w })).collect();
                merge(head.clone(), json!({ "samples": s }))
            }
            Output::Moments { head, moments } => {
                let m: Vec<Value> = moments
                    .iter()
                    .map(|(k, exact, oracle, measured)| {
                        let mut e = json!({ "k": k, "exact": exact, "oracle": oracle });
                        if let Some(x) = measured {
                            e["measured"] = json!(x);
                        }
                        e
                    })
                    .collect();
                merge(head.clone(), json!({ "moments": m }))
            }
            Output::Report(r) => r.to_json(digits),
        };
        let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn csv(&self, digits: usize) -> String {
        match self {
            Output::Values { rows, .. } => {
                let mut s = String::from("name,re,im,tail_bound,round_bound,terms_used\n");
                for r in rows {
                    let im = r.im.clone().unwrap_or_else(|| "0".into());
                    s.push_str(&format!(
                        "{},{},{im},{},{},{}\n",
                        r.name, r.re, r.tail_bound, r.round_bound, r.terms_used
                    ));
                }
                s
            }
            Output::Poly { poly, .. } => {
                let mut s = String::from("x_power,q_quarter_power,coeff\n");
                let j = poly.to_json();
                for term in j["coeffs"].as_array().into_iter().flatten() {
                    for c in term[1]["coeffs"].as_array().into_iter().flatten() {
                        s.push_str(&format!("{},{},{}\n", term[0], c[0], c[1].as_str().unwrap_or_default()));
                    }
                }
                s
            }
            Output::Zeros(t) => t.to_csv(digits),
            Output::Measure(m) => m.to_csv(digits),
            Output::Density { samples, .. } => {
                let mut s = String::from("x,density\n");
                for (x, w) in samples {
                    s.push_str(&format!("{x},{w}\n"));
                }
                s
            }
            Output::Moments { moments, .. } => {
                let mut s = String::from("k,exact,oracle,measured\n");
                for (k, exact, oracle, measured) in moments {
                    s.push_str(&format!("{k},{exact},{oracle},{}\n", measured.clone().unwrap_or_default()));
                }
                s
            }
            Output::Report(r) => r.to_csv(),
        }
    }
}

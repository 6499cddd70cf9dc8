//! Runge–Kutta methods as Butcher tableaux `(A, b)` with exact rational entries.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::{format_rational, int, parse_rational, rat, to_f64, Rational};

/// Registry identifiers accepted by [`builtin`].
pub const BUILTIN_METHODS: [&str; 7] = [
    "explicit_euler",
    "explicit_midpoint",
    "heun2",
    "rk4",
    "cheb2",
    "implicit_euler",
    "implicit_midpoint",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ButcherTableau {
    name: String,
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
}

impl ButcherTableau {
    /// Checks shapes only; consistency and order are reported by [`validate`].
    pub fn new(name: impl Into<String>, a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self> {
        let p = b.len();
        if p == 0 {
            return Err(Error::Dimension("tableau needs at least one stage".into()));
        }
        if a.len() != p {
            return Err(Error::Dimension(format!(
                "A has {} rows but b has {p} entries",
                a.len()
            )));
        }
        if let Some((i, row)) = a.iter().enumerate().find(|(_, row)| row.len() != p) {
            return Err(Error::Dimension(format!(
                "row {i} of A has {} entries, expected {p}",
                row.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            a,
            b,
        })
    }

    fn from_fracs(name: &str, a: &[&[(i64, i64)]], b: &[(i64, i64)]) -> Self {
        let conv = |row: &[(i64, i64)]| row.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>();
        Self::new(name, a.iter().map(|r| conv(r)).collect(), conv(b))
            .expect("registry tableau is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// Row sums of `A`.
    pub fn c(&self) -> Vec<Rational> {
        self.a
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |s, x| s + x))
            .collect()
    }

    /// `A` strictly lower triangular.
    pub fn is_explicit(&self) -> bool {
        self.a
            .iter()
            .enumerate()
            .all(|(i, row)| row[i..].iter().all(Zero::is_zero))
    }

    pub fn a_f64(&self) -> Vec<Vec<f64>> {
        self.a
            .iter()
            .map(|row| row.iter().map(to_f64).collect())
            .collect()
    }

    pub fn b_f64(&self) -> Vec<f64> {
        self.b.iter().map(to_f64).collect()
    }

    /// JSON document in the tableau schema, rationals as `"p/q"` strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TableauDoc::from(self)).expect("tableau serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct TableauDoc {
    name: String,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    b: Vec<String>,
}

impl From<&ButcherTableau> for TableauDoc {
    fn from(t: &ButcherTableau) -> Self {
        Self {
            name: t.name.clone(),
            a: t.a
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
            b: t.b.iter().map(format_rational).collect(),
        }
    }
}

/// Built-in registry of methods.
pub fn builtin(name: &str) -> Result<ButcherTableau> {
    let t = match name {
        "explicit_euler" => ButcherTableau::from_fracs(name, &[&[(0, 1)]], &[(1, 1)]),
        "explicit_midpoint" => ButcherTableau::from_fracs(
            name,
            &[&[(0, 1), (0, 1)], &[(1, 2), (0, 1)]],
            &[(0, 1), (1, 1)],
        ),
        "heun2" => ButcherTableau::from_fracs(
            name,
            &[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)]],
            &[(1, 2), (1, 2)],
        ),
        "rk4" => ButcherTableau::from_fracs(
            name,
            &[
                &[(0, 1), (0, 1), (0, 1), (0, 1)],
                &[(1, 2), (0, 1), (0, 1), (0, 1)],
                &[(0, 1), (1, 2), (0, 1), (0, 1)],
                &[(0, 1), (0, 1), (1, 1), (0, 1)],
            ],
            &[(1, 6), (1, 3), (1, 3), (1, 6)],
        ),
        "cheb2" => crate::design::realize_two_stage(),
        "implicit_euler" => ButcherTableau::from_fracs(name, &[&[(1, 1)]], &[(1, 1)]),
        "implicit_midpoint" => ButcherTableau::from_fracs(name, &[&[(1, 2)]], &[(1, 1)]),
        _ => {
            return Err(Error::UnknownMethod {
                name: name.to_string(),
                available: BUILTIN_METHODS.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(t)
}

/// Parses a tableau document: `{"name": str, "A": [[...]], "b": [...]}`.
///
/// Entries may be `"p/q"` strings, decimal strings, or JSON numbers (read
/// exactly from their decimal form). A `"c"` key is accepted and ignored.
pub fn parse_tableau(text: &str) -> Result<ButcherTableau> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Malformed("top level must be an object".into()))?;
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::Malformed("`name` must be a string".into())),
        None => "custom".to_string(),
    };
    let a_val = obj
        .get("A")
        .ok_or_else(|| Error::Malformed("missing `A`".into()))?;
    let b_val = obj
        .get("b")
        .ok_or_else(|| Error::Malformed("missing `b`".into()))?;

    let a = a_val
        .as_array()
        .ok_or_else(|| Error::Malformed("`A` must be an array of rows".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Malformed("each row of `A` must be an array".into()))?
                .iter()
                .map(entry)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let b = b_val
        .as_array()
        .ok_or_else(|| Error::Malformed("`b` must be an array".into()))?
        .iter()
        .map(entry)
        .collect::<Result<Vec<_>>>()?;
    ButcherTableau::new(name, a, b)
}

fn entry(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        // serde_json prints the shortest round-trip decimal
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Malformed(format!(
            "entry must be a number or string, got {other}"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub consistent: bool,
    pub explicit: bool,
    pub detected_order: u32,
    pub messages: Vec<String>,
}

/// Checks consistency, explicitness and the classical order conditions up to order 4.
pub fn validate(t: &ButcherTableau) -> ValidationReport {
    let b = t.b();
    let a = t.a();
    let c = t.c();
    let dot = |u: &[Rational], v: &[Rational]| {
        u.iter()
            .zip(v)
            .fold(Rational::zero(), |s, (x, y)| s + x * y)
    };
    let mat_vec = |v: &[Rational]| -> Vec<Rational> { a.iter().map(|row| dot(row, v)).collect() };
    let hadamard = |u: &[Rational], v: &[Rational]| -> Vec<Rational> {
        u.iter().zip(v).map(|(x, y)| x * y).collect()
    };
    let ones = vec![Rational::one(); t.stages()];

    let c2 = hadamard(&c, &c);
    let c3 = hadamard(&c2, &c);
    let ac = mat_vec(&c);
    let ac2 = mat_vec(&c2);
    let aac = mat_vec(&ac);

    let conditions: [(u32, &str, Rational, Rational); 8] = [
        (1, "sum b = 1", dot(b, &ones), int(1)),
        (2, "b.c = 1/2", dot(b, &c), rat(1, 2)),
        (3, "b.c^2 = 1/3", dot(b, &c2), rat(1, 3)),
        (3, "b.Ac = 1/6", dot(b, &ac), rat(1, 6)),
        (4, "b.c^3 = 1/4", dot(b, &c3), rat(1, 4)),
        (4, "b.(c*Ac) = 1/8", dot(b, &hadamard(&c, &ac)), rat(1, 8)),
        (4, "b.Ac^2 = 1/12", dot(b, &ac2), rat(1, 12)),
        (4, "b.AAc = 1/24", dot(b, &aac), rat(1, 24)),
    ];

    let mut messages = Vec::new();
    let mut detected_order = 4;
    for (order, label, got, want) in &conditions {
        if got != want {
            detected_order = detected_order.min(order - 1);
            messages.push(format!(
                "order-{order} condition {label} fails (got {})",
                format_rational(got)
            ));
        }
    }
    let consistent = detected_order >= 1;
    if !consistent {
        messages.push("inconsistent: weights do not sum to 1".into());
    }
    ValidationReport {
        consistent,
        explicit: t.is_explicit(),
        detected_order,
        messages,
    }
}

//! Report building blocks shared by the commands.

use serde::{Serialize, Serializer};

use crate::io::format_real;

/// An `f64` that serializes non-finite values as the strings `"inf"`,
/// `"-inf"` and `"nan"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            s.serialize_f64(x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

pub fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().map(|&x| Num(x)).collect()
}

/// A value and the tolerance it was computed under.
#[derive(Debug, Clone, Serialize)]
pub struct Measured<V: Serialize> {
    pub value: V,
    pub tol: Num,
}

impl<V: Serialize> Measured<V> {
    pub fn new(value: V, tol: f64) -> Self {
        Self {
            value,
            tol: Num(tol),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Eq => "==",
        }
    }
}

/// One verified claim: `computed <relation> claimed`, with `slack` the
/// absolute allowance in the claim's favour.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub claim: String,
    pub computed: Num,
    pub relation: Relation,
    pub claimed: Num,
    pub slack: Num,
    pub pass: bool,
}

impl Check {
    pub fn new(
        claim: impl Into<String>,
        computed: f64,
        relation: Relation,
        claimed: f64,
        slack: f64,
    ) -> Self {
        let pass = match relation {
            Relation::Le => computed <= claimed + slack,
            Relation::Ge => computed >= claimed - slack,
            Relation::Lt => computed < claimed + slack,
            Relation::Gt => computed > claimed - slack,
            Relation::Eq => (computed - claimed).abs() <= slack,
        };
        Self {
            claim: claim.into(),
            computed: Num(computed),
            relation,
            claimed: Num(claimed),
            slack: Num(slack),
            pass,
        }
    }

    /// Equality within `rel · |claimed|`.
    pub fn rel_eq(claim: impl Into<String>, computed: f64, claimed: f64, rel: f64) -> Self {
        Self::new(claim, computed, Relation::Eq, claimed, rel * claimed.abs())
    }

    pub fn line(&self) -> String {
        format!(
            "{}  {}: computed {} {} claimed {} (slack {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.computed,
            self.relation.symbol(),
            self.claimed,
            self.slack
        )
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_become_strings() {
        assert_eq!(
            serde_json::to_string(&Num(f64::INFINITY)).unwrap(),
            "\"inf\""
        );
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "\"nan\"");
        assert_eq!(serde_json::to_string(&Num(0.5)).unwrap(), "0.5");
    }

    #[test]
    fn relations() {
        assert!(Check::new("a", 1.0, Relation::Le, 1.0, 0.0).pass);
        assert!(!Check::new("a", 1.0, Relation::Lt, 1.0, 0.0).pass);
        assert!(Check::new("a", 1.0 - 1e-12, Relation::Ge, 1.0, 1e-9).pass);
        assert!(Check::rel_eq("a", 2500.000001, 2500.0, 1e-6).pass);
        assert!(!Check::rel_eq("a", 2500.01, 2500.0, 1e-6).pass);
    }
}

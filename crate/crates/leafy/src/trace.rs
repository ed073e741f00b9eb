//! Run records for the constructive solver.
//!
//! A [`ProofTrace`] documents one run of [`crate::construct::construct_2k_st`]:
//! which branch of the case analysis was taken, every density-oracle call
//! made on an induced subgraph, and a ledger with both sides of every
//! inequality the construction relied on. A run that returns a certificate
//! has every ledger entry holding; a run that aborts ships the trace inside
//! the error so the failing entry can be inspected.

use serde::Serialize;

use crate::cert::TreeCertificate;
use crate::graph::VertexSet;

/// Comparison operator of a ledger entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Eq => "==",
        }
    }

    fn eval_int(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Eq => lhs == rhs,
        }
    }
}

impl Serialize for Cmp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

/// One checked inequality: `lhs op rhs` and whether it held.
///
/// `lhs`/`rhs` are for display; when the check involves an irrational bound
/// (such as c_k·√n) the decision is made in exact integer arithmetic by the
/// caller and the float values here are only its rendering.
#[derive(Debug, Clone, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub op: Cmp,
    pub rhs: f64,
    pub holds: bool,
}

/// One density-oracle invocation: an induced subgraph handed to the dense
/// solver, with the measurements justifying the hand-off.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCall {
    /// Number of vertices of the subgraph.
    pub vertices: usize,
    /// Minimum degree of the subgraph.
    pub min_degree: usize,
    /// Whether `min_degree ≥ c_k·√vertices` held (exact check).
    pub dense: bool,
}

/// Record of one constructive run. See the module docs.
#[derive(Debug, Clone, Serialize)]
pub struct ProofTrace {
    /// Degree-class bound the run targeted.
    pub k: usize,
    /// The fixed minimum-degree vertex `u`, once chosen (not set on the
    /// dense fast path, which never picks one).
    pub u: Option<usize>,
    /// `W = V ∖ N[u]`, once computed.
    pub w: Option<VertexSet>,
    case_path: Vec<String>,
    /// Free-form progress notes, in order.
    pub steps: Vec<String>,
    pub oracle_calls: Vec<OracleCall>,
    pub ledger: Vec<Inequality>,
    /// The certificate the run produced, if it completed.
    pub certificate: Option<TreeCertificate>,
}

impl ProofTrace {
    pub fn new(k: usize) -> ProofTrace {
        ProofTrace {
            k,
            u: None,
            w: None,
            case_path: Vec::new(),
            steps: Vec::new(),
            oracle_calls: Vec::new(),
            ledger: Vec::new(),
            certificate: None,
        }
    }

    /// Append one segment to the case path (e.g. `"W-connected"`, then
    /// `"Case2"`, then `"Subcase2.1"`).
    pub fn enter(&mut self, segment: &str) {
        self.case_path.push(segment.to_string());
    }

    pub fn case_path(&self) -> &[String] {
        &self.case_path
    }

    /// The full branch the run took, segments joined by `/` — for example
    /// `"W-connected/Case2/Subcase2.1"` or just `"dense"`.
    pub fn case_label(&self) -> String {
        self.case_path.join("/")
    }

    pub fn step(&mut self, note: impl Into<String>) {
        self.steps.push(note.into());
    }

    /// Record an integer comparison in the ledger and return whether it
    /// held. Use [`ProofTrace::record`] for checks decided elsewhere.
    pub fn check_int(&mut self, name: &str, lhs: i128, op: Cmp, rhs: i128) -> bool {
        let holds = op.eval_int(lhs, rhs);
        self.ledger.push(Inequality {
            name: name.to_string(),
            lhs: lhs as f64,
            op,
            rhs: rhs as f64,
            holds,
        });
        holds
    }

    /// Record a comparison whose outcome was already decided (typically in
    /// exact arithmetic against an irrational bound).
    pub fn record(&mut self, name: &str, lhs: f64, op: Cmp, rhs: f64, holds: bool) {
        self.ledger.push(Inequality { name: name.to_string(), lhs, op, rhs, holds });
    }

    pub fn oracle(&mut self, vertices: usize, min_degree: usize, dense: bool) {
        self.oracle_calls.push(OracleCall { vertices, min_degree, dense });
    }

    /// Whether every ledger entry held. True for any trace attached to a
    /// returned certificate; may be false inside a hard error.
    pub fn all_hold(&self) -> bool {
        self.ledger.iter().all(|e| e.holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_label_joins_segments() {
        let mut t = ProofTrace::new(2);
        assert_eq!(t.case_label(), "");
        t.enter("W-connected");
        t.enter("Case2");
        t.enter("Subcase2.1");
        assert_eq!(t.case_label(), "W-connected/Case2/Subcase2.1");
        assert_eq!(t.case_path().len(), 3);
    }

    #[test]
    fn ledger_records_and_reports() {
        let mut t = ProofTrace::new(3);
        assert!(t.check_int("|W| >= 2", 5, Cmp::Ge, 2));
        t.record("delta >= c_k*sqrt(n)", 29.0, Cmp::Ge, 21.9, true);
        assert!(t.all_hold());
        assert!(!t.check_int("n >= n1", 100, Cmp::Ge, 276));
        assert!(!t.all_hold());
        assert_eq!(t.ledger.len(), 3);
        assert_eq!(t.ledger[2].op, Cmp::Ge);
    }

    #[test]
    fn comparison_operators() {
        assert!(Cmp::Gt.eval_int(3, 2));
        assert!(!Cmp::Gt.eval_int(2, 2));
        assert!(Cmp::Le.eval_int(2, 2));
        assert!(Cmp::Lt.eval_int(-5, 0));
        assert!(Cmp::Eq.eval_int(7, 7));
        assert_eq!(Cmp::Lt.symbol(), "<");
    }

    #[test]
    fn serializes_to_structured_json() {
        let mut t = ProofTrace::new(2);
        t.u = Some(0);
        t.w = Some(VertexSet::new([3, 4, 5]));
        t.enter("dense");
        t.step("seeded star at 0");
        t.oracle(6, 5, true);
        t.check_int("2*NC >= n-2", 10, Cmp::Ge, 4);
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["k"], 2);
        assert_eq!(v["u"], 0);
        assert_eq!(v["w"], serde_json::json!([3, 4, 5]));
        assert_eq!(v["case_path"], serde_json::json!(["dense"]));
        assert_eq!(v["oracle_calls"][0]["dense"], true);
        assert_eq!(v["ledger"][0]["op"], ">=");
        assert_eq!(v["ledger"][0]["holds"], true);
        assert!(v["certificate"].is_null());
    }
}

//! Deciders and bounded checkers for gluing properties of tree-shifts.
//!
//! Matrix deciders are exact for hom tree-shifts of Markov shifts. Everything
//! else searches for a joint admissible labeling under explicit budgets and
//! reports what it proved: a fully verified range, a refutation whose scope
//! says how far it reaches, or an exact decision.

mod checks;
mod scenarios;

pub use checks::*;
pub use scenarios::*;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{input, resource, Result};
use crate::hom_construct::{Constraints, TreeShift};
use crate::shift_core::{essentialize, is_irreducible, is_primitive, AdjacencyMatrix, BdProfile};
use crate::tree_core::{Cpc, Pattern, TreeWord};

/// How far a refutation reaches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// The listed obligation itself fails; the property fails at this gap.
    Exact,
    /// Nothing within the budget works; deeper attempts are not excluded.
    Bounded { depth: usize },
    /// An argument that covers every depth, named by its tag.
    Universal(String),
}

/// A pattern pair and the placements of `v` that were shown not to work.
///
/// Each entry of `placements` is one alternative: `u` at the root and `v` at
/// every listed node. All alternatives must be infeasible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_pattern")]
    pub u: Pattern,
    #[serde(serialize_with = "ser_pattern")]
    pub v: Pattern,
    #[serde(serialize_with = "ser_placements")]
    pub placements: Vec<Vec<TreeWord>>,
    #[serde(serialize_with = "ser_cpc")]
    pub cpc: Option<Cpc>,
    pub obligation: String,
    pub scope: Scope,
}

impl Witness {
    pub fn new(u: &Pattern, v: &Pattern, placements: Vec<Vec<TreeWord>>, obligation: impl Into<String>, scope: Scope) -> Self {
        Witness {
            u: u.clone(),
            v: v.clone(),
            placements,
            cpc: None,
            obligation: obligation.into(),
            scope,
        }
    }

    /// Re-checks every alternative from scratch; true iff all are infeasible.
    pub fn recheck(&self, t: &TreeShift) -> Result<bool> {
        for alt in &self.placements {
            if linkable(t, &self.u, &self.v, alt)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Budgets behind a verification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub n_max: Option<usize>,
    pub m_max: Option<usize>,
    pub gap: Option<usize>,
    pub depth: Option<usize>,
    pub support_height: Option<usize>,
    #[serde(serialize_with = "ser_cpc")]
    pub cpc: Option<Cpc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    DecidedTrue,
    /// Universal refutations carry their witness.
    DecidedFalse(Option<Box<Witness>>),
    VerifiedUpTo(Bounds),
    Refuted(Box<Witness>),
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::DecidedTrue | Verdict::VerifiedUpTo(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::DecidedFalse(w) => w.as_deref(),
            Verdict::Refuted(w) => Some(w),
            _ => None,
        }
    }

    /// 0 verified or true, 1 refuted or false, 2 only bounded evidence against.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::DecidedTrue | Verdict::VerifiedUpTo(_) => 0,
            Verdict::DecidedFalse(_) => 1,
            Verdict::Refuted(w) => match w.scope {
                Scope::Bounded { .. } => 2,
                _ => 1,
            },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::DecidedTrue => "decided true",
            Verdict::DecidedFalse(_) => "decided false",
            Verdict::VerifiedUpTo(_) => "verified up to bounds",
            Verdict::Refuted(_) => "refuted",
        }
    }
}

/// One property's outcome, as written to reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub property: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn new(property: impl Into<String>, verdict: Verdict) -> Self {
        Record {
            property: property.into(),
            verdict,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn ser_pattern<S: Serializer>(p: &Pattern, s: S) -> std::result::Result<S::Ok, S::Error> {
    let parts: Vec<String> = p.labels().iter().map(|(w, a)| format!("{w}={a}")).collect();
    s.serialize_str(&parts.join(" "))
}

fn ser_placements<S: Serializer>(ps: &[Vec<TreeWord>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for alt in ps {
        let words: Vec<String> = alt.iter().map(TreeWord::to_string).collect();
        seq.serialize_element(&words)?;
    }
    seq.end()
}

fn ser_cpc<S: Serializer>(c: &Option<Cpc>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.serialize_str(&c.to_string()),
        None => s.serialize_none(),
    }
}

/// `u` at the root and `v` at each of `at`, jointly admissible.
pub fn linkable(t: &TreeShift, u: &Pattern, v: &Pattern, at: &[TreeWord]) -> Result<bool> {
    match joint(u, v, at) {
        Some(c) => t.feasible(&c),
        None => Ok(false),
    }
}

/// The overlay of `u` at the root and `v` at each of `at`; `None` on a clash.
pub fn joint(u: &Pattern, v: &Pattern, at: &[TreeWord]) -> Option<Constraints> {
    let mut c = Constraints::from_pattern(u);
    for w in at {
        if !c.place(v, w) {
            return None;
        }
    }
    Some(c)
}

fn markov_core(a: &AdjacencyMatrix) -> Result<AdjacencyMatrix> {
    let (core, keep) = essentialize(a);
    if keep.is_empty() {
        return input("matrix presents the empty shift");
    }
    Ok(core)
}

/// Irreducibility of the hom tree-shift of `X_A`, which is also its
/// CPC-irreducibility.
pub fn decide_markov_ir(a: &AdjacencyMatrix) -> Result<Verdict> {
    let core = markov_core(a)?;
    Ok(if is_irreducible(&core)? {
        Verdict::DecidedTrue
    } else {
        Verdict::DecidedFalse(None)
    })
}

/// The properties that all coincide with primitivity for hom tree-shifts of
/// Markov shifts.
pub const MARKOV_MIXING_FAMILY: [&str; 5] = ["cpc-ubg", "ubg", "cpc-bg", "tm", "x-mixing"];

pub fn decide_markov_mixing_family(a: &AdjacencyMatrix) -> Result<(Verdict, Vec<&'static str>)> {
    let core = markov_core(a)?;
    let verdict = if is_primitive(&core).0 {
        Verdict::DecidedTrue
    } else {
        Verdict::DecidedFalse(None)
    };
    Ok((verdict, MARKOV_MIXING_FAMILY.to_vec()))
}

/// How far `tm_gap_bound_bd` scans for each `N_l` before giving up.
pub const TM_GAP_SCAN_LIMIT: u64 = 1 << 20;

/// Gap for which the all-zero filling links any two patterns of height at
/// most `m` in the hom tree-shift of a bounded-density shift.
pub fn tm_gap_bound_bd(f: &BdProfile, m: u64) -> Result<u64> {
    let top = f.eval(m + 1);
    let mut best = 0;
    for l in 1..=m + 1 {
        let need = top + f.eval(l);
        let n = (0..=TM_GAP_SCAN_LIMIT)
            .find(|&n| f.eval(l + n) >= need)
            .map_or_else(|| resource("gap scan for a bounded profile", TM_GAP_SCAN_LIMIT), Ok)?;
        best = best.max(n);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn m(rows: &[&[u8]]) -> AdjacencyMatrix {
        AdjacencyMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn markov_deciders() {
        let golden = catalog::golden_mean_matrix();
        assert_eq!(decide_markov_ir(&golden).unwrap(), Verdict::DecidedTrue);
        assert_eq!(decide_markov_mixing_family(&golden).unwrap().0, Verdict::DecidedTrue);
        let upper = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(decide_markov_ir(&upper).unwrap(), Verdict::DecidedFalse(None));
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(decide_markov_ir(&swap).unwrap(), Verdict::DecidedTrue);
        let (v, props) = decide_markov_mixing_family(&swap).unwrap();
        assert_eq!(v, Verdict::DecidedFalse(None));
        assert_eq!(props.len(), 5);
        assert_eq!(decide_markov_ir(&m(&[&[1]])).unwrap(), Verdict::DecidedTrue);
        assert!(decide_markov_ir(&m(&[&[0]])).is_err());
    }

    #[test]
    fn tm_gaps_for_log3() {
        let got: Vec<u64> = (0..=3).map(|m| tm_gap_bound_bd(&BdProfile::Log3, m).unwrap()).collect();
        assert_eq!(got, vec![2, 2, 24, 24]);
        let linear = BdProfile::table(vec![0, 1], 1).unwrap();
        for m in 0..5 {
            assert_eq!(tm_gap_bound_bd(&linear, m).unwrap(), m + 1);
        }
        let flat = BdProfile::table(vec![0, 1], 0).unwrap();
        assert!(tm_gap_bound_bd(&flat, 1).is_err());
    }

    #[test]
    fn exit_codes() {
        let u = Pattern::point(2, 0);
        let w = |scope| Verdict::Refuted(Box::new(Witness::new(&u, &u, vec![], "x", scope)));
        assert_eq!(w(Scope::Exact).exit_code(), 1);
        assert_eq!(w(Scope::Bounded { depth: 3 }).exit_code(), 2);
        assert_eq!(Verdict::VerifiedUpTo(Bounds::default()).exit_code(), 0);
    }
}

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{BirationalRep, BirepError, Letter, Word};
use crate::rootdata::{CoxeterOrder, DiagramAutomorphism};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `s_i^2 = 1`.
    Involution { i: usize },
    /// `(s_i s_j)^m = 1`.
    Braid { i: usize, j: usize, m: u32 },
    /// `m_ij` is infinite; nothing to check beyond involutions.
    NoFiniteRelation { i: usize, j: usize },
    /// `pi^(order) = 1` for a diagram automorphism.
    DiagramOrder { word: String, order: usize },
    /// `o s_i = s_{o(i)} o`.
    DiagramConjugation { word: String, i: usize },
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Involution { i } => write!(f, "s{i}^2 = 1"),
            Relation::Braid { i, j, m } => write!(f, "(s{i} s{j})^{m} = 1"),
            Relation::NoFiniteRelation { i, j } => write!(f, "(s{i} s{j}): no finite relation"),
            Relation::DiagramOrder { word, order } => write!(f, "({word})^{order} = 1"),
            Relation::DiagramConjugation { word, i } => {
                write!(f, "{word} s{i} = s{{{word}({i})}} {word}")
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: Relation,
    /// `None` for vacuous entries.
    pub passed: Option<bool>,
    /// Generator moved by the relation word, and its image.
    pub counterexample: Option<(String, String)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| c.passed == Some(false))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.passed {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "SKIP",
            };
            out.push_str(&format!("{tag} {}", c.relation));
            if let Some((g, img)) = &c.counterexample {
                out.push_str(&format!("  [{g} -> {img}]"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationOptions {
    /// Also check order and conjugation relations of these automorphisms.
    pub diagrams: Vec<DiagramAutomorphism>,
}

impl BirationalRep {
    fn check_word_is_identity(&self, relation: Relation, w: &Word) -> Result<RelationCheck, BirepError> {
        let s = self.apply_word(w)?;
        let moved = self.first_moved(&s);
        Ok(RelationCheck {
            relation,
            passed: Some(moved.is_none()),
            counterexample: moved.map(|(g, img)| (g, img.to_text(self.registry()))),
        })
    }

    /// Involutions and finite braid relations on every generator, plus the
    /// requested diagram relations. Checks run in parallel.
    pub fn verify_coxeter_relations(&self, opts: &RelationOptions) -> Result<RelationReport, BirepError> {
        let n = self.size();
        let a = self.cartan();
        let mut jobs: Vec<(Relation, Option<Word>)> = Vec::new();
        for i in 0..n {
            jobs.push((Relation::Involution { i }, Some(Word::from_indices(&[i, i]))));
        }
        for i in 0..n {
            for j in i + 1..n {
                match a.coxeter(i, j) {
                    CoxeterOrder::Finite(m) => jobs.push((
                        Relation::Braid { i, j, m },
                        Some(Word::from_indices(&[i, j]).pow(m as usize)),
                    )),
                    CoxeterOrder::Infinite => jobs.push((Relation::NoFiniteRelation { i, j }, None)),
                }
            }
        }
        for d in &opts.diagrams {
            let name = Letter::Diagram(d.clone()).to_string();
            let dw = Word::new(vec![Letter::Diagram(d.clone())]);
            let order = d.order();
            jobs.push((
                Relation::DiagramOrder {
                    word: name.clone(),
                    order,
                },
                Some(dw.pow(order)),
            ));
            for i in 0..n {
                // o s_i o^-1 s_{o(i)} = 1
                let w = dw
                    .concat(&Word::from_indices(&[i]))
                    .concat(&dw.inverse())
                    .concat(&Word::from_indices(&[d.apply(i)]));
                jobs.push((
                    Relation::DiagramConjugation {
                        word: name.clone(),
                        i,
                    },
                    Some(w),
                ));
            }
        }
        let checks = jobs
            .into_par_iter()
            .map(|(rel, w)| match w {
                Some(w) => self.check_word_is_identity(rel, &w),
                None => Ok(RelationCheck {
                    relation: rel,
                    passed: None,
                    counterexample: None,
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RelationReport { checks })
    }
}

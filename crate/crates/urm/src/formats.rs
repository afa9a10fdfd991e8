//! JSON documents read and written by the command-line tool.
//!
//! Components are lists of 1-based elements, partitions are lists of 0-based
//! component indices. A document is normalized when its element lists are
//! ascending and it is printed by [`to_json`]; parsing and re-serializing a
//! normalized document reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use urm_core::bounds::BoundsReport;
use urm_core::constructions::{ConstructedInstance, Provenance};
use urm_core::oracle::ExactResult;
use urm_core::zebra::{Category, Puzzle, PuzzleSolution, Rule};
use urm_core::{CanonicalPartition, Error, Multiset, Partition, ResolutionReport, Result, SubsetMask};

/// Compact single-line JSON.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("bad document: {e}")))
}

fn elements(mask: SubsetMask) -> Vec<usize> {
    mask.elements().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultisetDoc {
    pub m: usize,
    pub components: Vec<Vec<usize>>,
}

impl MultisetDoc {
    pub fn from_multiset(ms: &Multiset) -> Self {
        Self {
            m: ms.m(),
            components: ms.components().iter().map(|&c| elements(c)).collect(),
        }
    }

    pub fn to_multiset(&self) -> Result<Multiset> {
        Multiset::from_elements(self.m, &self.components)
    }
}

/// A multiset with a resolution. `n` must match the partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub m: usize,
    pub components: Vec<Vec<usize>>,
    pub partition: Vec<Vec<usize>>,
    pub n: usize,
    pub provenance: String,
}

impl InstanceDoc {
    pub fn from_instance(inst: &ConstructedInstance) -> Self {
        let MultisetDoc { m, components } = MultisetDoc::from_multiset(&inst.ms);
        Self {
            m,
            components,
            partition: inst.partition.classes().to_vec(),
            n: inst.n(),
            provenance: inst.provenance.as_str().to_string(),
        }
    }

    pub fn to_instance(&self) -> Result<ConstructedInstance> {
        let ms = Multiset::from_elements(self.m, &self.components)?;
        if self.partition.len() != self.n {
            return Err(Error::Malformed(format!(
                "n = {} but the partition has {} classes",
                self.n,
                self.partition.len()
            )));
        }
        let provenance = Provenance::parse(&self.provenance)
            .ok_or_else(|| Error::Malformed(format!("unknown provenance {:?}", self.provenance)))?;
        ConstructedInstance::new(ms, Partition::new(self.partition.clone()), provenance)
    }
}

/// Input to `resolve`: a bare multiset, or an instance whose `n` is used.
pub fn parse_resolvable(text: &str) -> Result<(Multiset, Option<usize>)> {
    let value: serde_json::Value = from_json(text)?;
    if value.get("partition").is_some() {
        let doc: InstanceDoc = serde_json::from_value(value)
            .map_err(|e| Error::Malformed(format!("bad instance document: {e}")))?;
        Ok((doc.to_instance()?.ms, Some(doc.n)))
    } else {
        let doc: MultisetDoc = serde_json::from_value(value)
            .map_err(|e| Error::Malformed(format!("bad multiset document: {e}")))?;
        Ok((doc.to_multiset()?, None))
    }
}

/// Classes of a canonical partition as element lists.
pub fn canonical_classes(p: &CanonicalPartition) -> Vec<Vec<Vec<usize>>> {
    p.classes()
        .iter()
        .map(|class| class.iter().map(|&c| elements(c)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionDoc {
    pub status: String,
    pub n: usize,
    pub witnesses: Vec<Vec<Vec<Vec<usize>>>>,
    pub nodes_explored: u64,
}

impl ResolutionDoc {
    pub fn from_report(report: &ResolutionReport, n: usize) -> Self {
        Self {
            status: report.status.as_str().to_string(),
            n,
            witnesses: report.witnesses.iter().map(canonical_classes).collect(),
            nodes_explored: report.nodes_explored,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: usize,
    pub m: usize,
    pub lower: u64,
    pub lower_analytic: Option<f64>,
    pub upper: u64,
    pub exact: Option<u64>,
    pub regime: String,
    pub sources: Vec<String>,
}

impl From<&BoundsReport> for BoundsRow {
    fn from(r: &BoundsReport) -> Self {
        Self {
            n: r.n,
            m: r.m,
            lower: r.lower,
            lower_analytic: r.lower_analytic,
            upper: r.upper,
            exact: r.exact,
            regime: r.regime.as_str().to_string(),
            sources: r.sources.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDoc {
    pub value: usize,
    pub exhausted: bool,
    pub nodes: u64,
    pub candidates: u64,
    pub witness: InstanceDoc,
}

impl From<&ExactResult> for ExactDoc {
    fn from(r: &ExactResult) -> Self {
        Self {
            value: r.value,
            exhausted: r.exhausted,
            nodes: r.stats.nodes,
            candidates: r.stats.candidates,
            witness: InstanceDoc::from_instance(&r.witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub cat_a: usize,
    pub val_a: usize,
    pub cat_b: usize,
    pub val_b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuzzleDoc {
    pub n: usize,
    pub m: usize,
    pub categories: Vec<CategoryDoc>,
    pub rules: Vec<RuleDoc>,
    pub seed: u64,
}

impl PuzzleDoc {
    pub fn from_puzzle(pz: &Puzzle) -> Self {
        Self {
            n: pz.n,
            m: pz.m,
            categories: pz
                .categories
                .iter()
                .map(|c| CategoryDoc {
                    name: c.name.clone(),
                    values: c.values.clone(),
                })
                .collect(),
            rules: pz
                .rules
                .iter()
                .map(|r| RuleDoc {
                    cat_a: r.cat_a,
                    val_a: r.val_a,
                    cat_b: r.cat_b,
                    val_b: r.val_b,
                })
                .collect(),
            seed: pz.seed,
        }
    }

    pub fn to_puzzle(&self) -> Result<Puzzle> {
        let pz = Puzzle {
            n: self.n,
            m: self.m,
            categories: self
                .categories
                .iter()
                .map(|c| Category {
                    name: c.name.clone(),
                    values: c.values.clone(),
                })
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|r| Rule {
                    cat_a: r.cat_a,
                    val_a: r.val_a,
                    cat_b: r.cat_b,
                    val_b: r.val_b,
                })
                .collect(),
            seed: self.seed,
        };
        pz.validate()?;
        Ok(pz)
    }
}

/// One solved puzzle: `people[i][c]` is person `i`'s value name in category `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub people: Vec<Vec<String>>,
}

impl SolutionDoc {
    pub fn from_solution(pz: &Puzzle, s: &PuzzleSolution) -> Self {
        let people = (0..pz.n)
            .map(|person| {
                (0..pz.m)
                    .map(|c| pz.categories[c].values[s.assignment[c][person]].clone())
                    .collect()
            })
            .collect();
        Self { people }
    }
}

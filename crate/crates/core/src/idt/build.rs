use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{IdtError, InfluenceDispersionGraph, InfluenceDispersionTree, Tree};

/// How to choose among equally deep candidate parents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Lexicographically smallest paper id.
    MinId,
    /// Most recently published candidate, by `(year, id)`.
    #[default]
    Latest,
    /// Uniform pick from a generator seeded by `seed` and the root id.
    Random { seed: u64 },
}

impl FromStr for TiePolicy {
    type Err = String;

    /// Accepts `min-id`, `latest` and `random` (seed 0); see
    /// [`TiePolicy::with_seed`].
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "min-id" => Ok(TiePolicy::MinId),
            "latest" => Ok(TiePolicy::Latest),
            "random" => Ok(TiePolicy::Random { seed: 0 }),
            other => Err(format!(
                "unknown tie policy `{other}` (expected min-id, latest or random)"
            )),
        }
    }
}

impl TiePolicy {
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            TiePolicy::Random { .. } => TiePolicy::Random { seed },
            other => other,
        }
    }
}

/// Reduces an IDG to its IDT.
///
/// Citers are inserted in chronological topological order. A citer that
/// cites no other citer hangs off the root; otherwise its parent is the
/// deepest citer it cites, with ties settled by `tie`. Because a placed
/// node's depth never changes, any insertion order that places cited citers
/// first yields the same tree under a deterministic policy.
pub fn build_idt(idg: &InfluenceDispersionGraph, tie: TiePolicy) -> InfluenceDispersionTree {
    let order = idg.topological_order().expect("IDG is acyclic by construction");
    insert_all(idg, tie, &order)
}

/// [`build_idt`] with an explicit insertion order, which must list every
/// citer once and place each citer after the citers it cites.
pub fn build_idt_in_order(
    idg: &InfluenceDispersionGraph,
    tie: TiePolicy,
    order: &[usize],
) -> Result<InfluenceDispersionTree, IdtError> {
    let size = idg.n() + 1;
    let mut placed = vec![false; size];
    placed[0] = true;
    if order.len() != idg.n() {
        return Err(IdtError::InvalidOrder(format!(
            "{} entries for {} citers",
            order.len(),
            idg.n()
        )));
    }
    for &v in order {
        if v == 0 || v >= size || placed[v] {
            return Err(IdtError::InvalidOrder(format!("bad or repeated node {v}")));
        }
        if let Some(&u) = idg.cited_citers(v).iter().find(|&&u| !placed[u as usize]) {
            return Err(IdtError::InvalidOrder(format!(
                "`{}` placed before `{}`",
                idg.id(v),
                idg.id(u as usize)
            )));
        }
        placed[v] = true;
    }
    Ok(insert_all(idg, tie, order))
}

fn insert_all(idg: &InfluenceDispersionGraph, tie: TiePolicy, order: &[usize]) -> InfluenceDispersionTree {
    let size = idg.n() + 1;
    let mut depth = vec![0u32; size];
    let mut parents = vec![0usize; size - 1];
    let mut rng = match tie {
        TiePolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed ^ fnv1a(idg.root_id().as_bytes()))),
        _ => None,
    };
    let mut tied: Vec<usize> = Vec::new();
    for &v in order {
        let candidates = idg.cited_citers(v);
        let parent = match candidates.iter().map(|&u| depth[u as usize]).max() {
            None => 0,
            Some(deepest) => {
                tied.clear();
                tied.extend(candidates.iter().map(|&u| u as usize).filter(|&u| depth[u] == deepest));
                match (&tie, rng.as_mut()) {
                    (TiePolicy::MinId, _) => *tied.iter().min_by_key(|&&u| idg.id(u)).unwrap(),
                    // local indices follow (year, id)
                    (TiePolicy::Latest, _) => *tied.iter().max().unwrap(),
                    (TiePolicy::Random { .. }, Some(rng)) => tied[rng.gen_range(0..tied.len())],
                    (TiePolicy::Random { .. }, None) => unreachable!(),
                }
            }
        };
        parents[v - 1] = parent;
        depth[v] = depth[parent] + 1;
    }
    let tree = Tree::from_parents(&parents).expect("parents are placed nodes");
    InfluenceDispersionTree::new(idg.ids().to_vec(), tree).expect("one label per node")
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SynthError;
use crate::corpus::PaperRecord;
use crate::idt::{InfluenceDispersionTree, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ShapeKind {
    /// Every citer hangs off the root.
    Star,
    /// One unified branch of length `n`.
    Chain,
    /// A chain of `k` nodes whose last node carries the remaining `n - k`
    /// leaves; the index-maximizing shape at the best `k`.
    Broom { k: usize },
    /// `k` unified branches of length `r`.
    Optimal { k: usize, r: usize },
    /// Each node joins the root with probability `root_prob`, otherwise a
    /// uniformly chosen earlier node.
    RandomAttachment { root_prob: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, n: usize) -> Self {
        ShapeSpec { kind, n, seed: 0 }
    }

    /// Square optimal shape; `n` must be a perfect square.
    pub fn optimal(n: usize) -> Self {
        let k = crate::metrics::ceil_sqrt(n as u64) as usize;
        ShapeSpec::new(ShapeKind::Optimal { k, r: k }, n)
    }
}

/// Bare tree of the requested shape. Node numbering is breadth-agnostic:
/// every parent precedes its children.
pub fn gen_tree(spec: &ShapeSpec) -> Result<Tree, SynthError> {
    let n = spec.n;
    let parents: Vec<usize> = match spec.kind {
        ShapeKind::Star => vec![0; n],
        ShapeKind::Chain => (0..n).collect(),
        ShapeKind::Broom { k } => {
            if k == 0 || k > n {
                return Err(SynthError::Shape(format!(
                    "broom needs 1 <= k <= n, got k = {k}, n = {n}"
                )));
            }
            let mut p: Vec<usize> = (0..k).collect();
            p.extend(std::iter::repeat_n(k, n - k));
            p
        }
        ShapeKind::Optimal { k, r } => {
            if k.checked_mul(r) != Some(n) {
                return Err(SynthError::Shape(format!(
                    "optimal needs k * r = n, got {k} * {r} != {n}"
                )));
            }
            (0..k)
                .flat_map(|b| (0..r).map(move |i| if i == 0 { 0 } else { b * r + i }))
                .collect()
        }
        ShapeKind::RandomAttachment { root_prob } => {
            if !(0.0..=1.0).contains(&root_prob) {
                return Err(SynthError::Shape(format!(
                    "root_prob must lie in [0, 1], got {root_prob}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            (1..=n)
                .map(|v| {
                    if v == 1 || rng.gen_bool(root_prob) {
                        0
                    } else {
                        rng.gen_range(1..v)
                    }
                })
                .collect()
        }
    };
    Ok(Tree::from_parents(&parents).expect("parents precede children"))
}

/// Placement of a shape inside a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub root_year: i32,
    /// A node at depth `l` is published `min(l, span)` years after the root.
    pub span: i32,
    /// How many ancestors below the root each citer cites besides the root.
    /// With 1 it cites its parent only; more adds grandparents and so on,
    /// which leaves the parent as the unique deepest candidate.
    pub ancestors: usize,
}

impl Default for Layout {
    fn default() -> Self {
        Layout {
            root_year: 2000,
            span: 10,
            ancestors: 1,
        }
    }
}

/// Papers and `(citing, cited)` edges whose IDT for `root` is `tree`.
/// Citer `v` is named `prefix` followed by `v` zero-padded.
pub fn shape_records(
    tree: &Tree,
    root: &str,
    prefix: &str,
    layout: &Layout,
) -> (Vec<PaperRecord>, Vec<(String, String)>) {
    let width = tree.n().to_string().len();
    let name = |v: usize| {
        if v == 0 {
            root.to_string()
        } else {
            format!("{prefix}{v:0width$}")
        }
    };
    let mut papers = vec![PaperRecord::new(root, layout.root_year)];
    let mut edges = Vec::new();
    for v in 1..tree.size() {
        let id = name(v);
        let year = layout.root_year + (tree.depth_of(v) as i32).min(layout.span);
        papers.push(PaperRecord::new(id.clone(), year));
        edges.push((id.clone(), root.to_string()));
        let mut u = tree.parent(v).unwrap();
        for _ in 0..layout.ancestors {
            if u == 0 {
                break;
            }
            edges.push((id.clone(), name(u)));
            u = tree.parent(u).unwrap();
        }
    }
    (papers, edges)
}

/// A generated tree with the corpus that induces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub idt: InfluenceDispersionTree,
    pub papers: Vec<PaperRecord>,
    pub edges: Vec<(String, String)>,
}

/// Tree of the requested shape rooted at `P`, with citers `p1..pn`.
pub fn gen_shape(spec: &ShapeSpec) -> Result<Shape, SynthError> {
    let tree = gen_tree(spec)?;
    let (papers, edges) = shape_records(&tree, "P", "p", &Layout::default());
    let ids = papers.iter().map(|p| p.id.clone()).collect();
    let idt = InfluenceDispersionTree::new(ids, tree).expect("one label per node");
    Ok(Shape { idt, papers, edges })
}

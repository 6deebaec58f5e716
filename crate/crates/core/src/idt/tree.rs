use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::IdtError;

const NO_PARENT: u32 = u32::MAX;

/// Rooted tree over local node indices; node `0` is the root.
///
/// Only structure lives here, so the metric code can run over millions of
/// synthetic trees without carrying paper ids around.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    parent: Vec<u32>,
    depth: Vec<u32>,
}

impl Tree {
    /// A root with no children.
    pub fn singleton() -> Self {
        Tree {
            parent: vec![NO_PARENT],
            depth: vec![0],
        }
    }

    /// Builds a tree from the parents of nodes `1..=n`: `parents[i]` is the
    /// parent of node `i + 1`. Any node order is accepted as long as every
    /// node reaches the root.
    pub fn from_parents(parents: &[usize]) -> Result<Self, IdtError> {
        let size = parents.len() + 1;
        let mut parent = Vec::with_capacity(size);
        parent.push(NO_PARENT);
        for (i, &p) in parents.iter().enumerate() {
            if p >= size || p == i + 1 {
                return Err(IdtError::InvalidParent { node: i + 1, parent: p });
            }
            parent.push(p as u32);
        }

        const UNSET: u32 = u32::MAX;
        let mut depth = vec![UNSET; size];
        depth[0] = 0;
        let mut path = Vec::new();
        for v in 1..size {
            let mut u = v;
            while depth[u] == UNSET {
                path.push(u);
                if path.len() > size {
                    return Err(IdtError::Cycle);
                }
                u = parent[u] as usize;
            }
            let mut d = depth[u];
            while let Some(w) = path.pop() {
                d += 1;
                depth[w] = d;
            }
        }
        Ok(Tree { parent, depth })
    }

    /// Number of non-root nodes.
    pub fn n(&self) -> usize {
        self.parent.len() - 1
    }

    /// Number of nodes including the root.
    pub fn size(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        match self.parent[v] {
            NO_PARENT => None,
            p => Some(p as usize),
        }
    }

    /// Parents of nodes `1..=n`, the inverse of [`Tree::from_parents`].
    pub fn parents(&self) -> Vec<usize> {
        self.parent[1..].iter().map(|&p| p as usize).collect()
    }

    pub fn depth_of(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn child_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.size()];
        for &p in &self.parent[1..] {
            counts[p as usize] += 1;
        }
        counts
    }

    /// Non-root nodes without children. An empty tree has no leaves.
    pub fn leaves(&self) -> Vec<usize> {
        let counts = self.child_counts();
        (1..self.size()).filter(|&v| counts[v] == 0).collect()
    }

    /// Depth of the tree: the longest root-to-leaf path.
    pub fn height(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// `|N_l|` for levels `1..=height`.
    pub fn level_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![0u32; self.height() as usize];
        for &d in &self.depth[1..] {
            sizes[d as usize - 1] += 1;
        }
        sizes
    }

    pub fn stats(&self) -> TreeStats {
        let level_sizes = self.level_sizes();
        TreeStats {
            n: self.n(),
            depth: level_sizes.len() as u32,
            breadth: level_sizes.iter().copied().max().unwrap_or(0),
            level_sizes,
            leaves: self.leaves(),
        }
    }

    /// Root-to-leaf branches with their fragment points.
    ///
    /// A fragment point of a branch is an intermediate node on it (neither
    /// root nor the leaf) where another branch splits off, i.e. a node with
    /// two or more children. A branch is unified when it has none; a branch
    /// shares an intermediate node with another branch exactly when such a
    /// split exists on it.
    pub fn branches(&self) -> Vec<Branch> {
        let counts = self.child_counts();
        self.leaves()
            .into_iter()
            .map(|leaf| {
                let mut fragment_points = Vec::new();
                let mut u = self.parent[leaf];
                while u != 0 && u != NO_PARENT {
                    if counts[u as usize] >= 2 {
                        fragment_points.push(u as usize);
                    }
                    u = self.parent[u as usize];
                }
                fragment_points.reverse();
                Branch {
                    leaf,
                    length: self.depth[leaf],
                    fragment_points,
                }
            })
            .collect()
    }
}

/// Structural summary of one tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub n: usize,
    pub depth: u32,
    pub breadth: u32,
    pub level_sizes: Vec<u32>,
    pub leaves: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub leaf: usize,
    pub length: u32,
    /// Split points from the root side down.
    pub fragment_points: Vec<usize>,
}

impl Branch {
    pub fn is_unified(&self) -> bool {
        self.fragment_points.is_empty()
    }
}

/// A [`Tree`] whose nodes carry paper ids; node `0` is the root paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceDispersionTree {
    ids: Vec<String>,
    tree: Tree,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    root: String,
    nodes: Vec<NodeJson>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: String,
    parent: String,
    depth: u32,
}

impl InfluenceDispersionTree {
    pub fn new(ids: Vec<String>, tree: Tree) -> Result<Self, IdtError> {
        if ids.len() != tree.size() {
            return Err(IdtError::LabelCount {
                labels: ids.len(),
                nodes: tree.size(),
            });
        }
        Ok(InfluenceDispersionTree { ids, tree })
    }

    pub fn root_id(&self) -> &str {
        &self.ids[0]
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn node_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn parent_id(&self, id: &str) -> Option<&str> {
        let v = self.node_of(id)?;
        self.tree.parent(v).map(|p| self.id(p))
    }

    /// `(parent id, child id)` tree edges in node order.
    pub fn edges(&self) -> Vec<(&str, &str)> {
        (1..self.tree.size())
            .map(|v| (self.id(self.tree.parent(v).unwrap()), self.id(v)))
            .collect()
    }

    /// `{root, nodes: [{id, parent, depth}]}`.
    pub fn to_json(&self) -> String {
        let nodes = (1..self.tree.size())
            .map(|v| NodeJson {
                id: self.ids[v].clone(),
                parent: self.ids[self.tree.parent(v).unwrap()].clone(),
                depth: self.tree.depth_of(v),
            })
            .collect();
        serde_json::to_string(&TreeJson {
            root: self.ids[0].clone(),
            nodes,
        })
        .expect("tree json")
    }

    pub fn from_json(json: &str) -> Result<Self, IdtError> {
        let parsed: TreeJson = serde_json::from_str(json).map_err(|e| IdtError::Json(e.to_string()))?;
        let mut ids = vec![parsed.root];
        ids.extend(parsed.nodes.iter().map(|n| n.id.clone()));
        let position = |id: &str| {
            ids.iter()
                .position(|x| x == id)
                .ok_or_else(|| IdtError::UnknownNode(id.to_string()))
        };
        let parents = parsed
            .nodes
            .iter()
            .map(|n| position(&n.parent))
            .collect::<Result<Vec<_>, _>>()?;
        let tree = Tree::from_parents(&parents)?;
        for (v, n) in parsed.nodes.iter().enumerate() {
            if tree.depth_of(v + 1) != n.depth {
                return Err(IdtError::Json(format!("depth mismatch at `{}`", n.id)));
            }
        }
        InfluenceDispersionTree::new(ids, tree)
    }

    /// Tab-separated `parent<TAB>child` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (p, c) in self.edges() {
            out.push_str(p);
            out.push('\t');
            out.push_str(c);
            out.push('\n');
        }
        out
    }
}

impl Deref for InfluenceDispersionTree {
    type Target = Tree;

    fn deref(&self) -> &Tree {
        &self.tree
    }
}

use super::SynthError;
use crate::idt::Tree;

/// Largest `n` (non-root nodes) accepted by [`enumerate_trees`].
pub const ENUMERATION_CAP: usize = 9;

/// Every unlabeled rooted tree with `n` non-root nodes, once each.
pub fn enumerate_trees(n: usize) -> Result<TreeEnumerator, SynthError> {
    if n > ENUMERATION_CAP {
        return Err(SynthError::AboveCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(TreeEnumerator {
        levels: Some((0..=n as u32).collect()),
    })
}

/// Walks canonical level sequences in reverse lexicographic order, from the
/// chain down to the star (Beyer and Hedetniemi, 1980).
#[derive(Debug, Clone)]
pub struct TreeEnumerator {
    levels: Option<Vec<u32>>,
}

impl Iterator for TreeEnumerator {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        let levels = self.levels.take()?;
        let tree = from_levels(&levels);
        self.levels = successor(levels);
        Some(tree)
    }
}

fn successor(mut levels: Vec<u32>) -> Option<Vec<u32>> {
    let p = levels.iter().rposition(|&l| l > 1)?;
    let q = levels[..p]
        .iter()
        .rposition(|&l| l == levels[p] - 1)
        .expect("a level sequence is contiguous");
    let shift = p - q;
    for i in p..levels.len() {
        levels[i] = levels[i - shift];
    }
    Some(levels)
}

/// Preorder level sequence to tree: each node's parent is the closest
/// earlier node one level up.
fn from_levels(levels: &[u32]) -> Tree {
    let mut stack: Vec<usize> = vec![0];
    let mut parents = Vec::with_capacity(levels.len() - 1);
    for (v, &l) in levels.iter().enumerate().skip(1) {
        stack.truncate(l as usize);
        parents.push(*stack.last().unwrap());
        stack.push(v);
    }
    Tree::from_parents(&parents).expect("preorder parents")
}

//! Markov operators and causal trees.
//!
//! A causal relation from an earlier space Ω₁ to a later space Ω₂ is a
//! Markov operator Φ: functions on Ω₂ pull back to functions on Ω₁ through
//! a row-stochastic matrix indexed `[earlier point][later point]`. Its dual
//! Φ* pushes states forward: (Φ*ρ)(ω') = Σ_ω ρ(ω) Φ[ω][ω']. The two views
//! agree through the pairing ⟨Φ*ρ, f⟩ = ⟨ρ, Φf⟩, so pulling an observable
//! back to the earlier time and pushing the state forward to the later time
//! predict identical outcome statistics.
//!
//! Time is a finite rooted tree: each node carries a space, each edge a
//! Markov operator, and operators compose along downward paths. Nodes not
//! related by ancestry are causally incomparable.
//!
//! # Example
//!
//! A two-stage chain where the same noisy step acts twice: a "lo" state
//! stays put or drifts to "hi" with equal chance, and "hi" is absorbing.
//!
//! ```
//! use finmeas::causality::{CausalFamily, CausalTree, EdgeOp};
//! use finmeas::{MixedState, Scalar, StateSpace};
//!
//! let space = |tag: &str| StateSpace::new([format!("{tag}-lo"), format!("{tag}-hi")]).unwrap();
//! let half = Scalar::ratio(1, 2).unwrap();
//! let step = vec![half.clone(), half, Scalar::zero(), Scalar::one()];
//!
//! let tree = CausalTree::new(
//!     [
//!         ("t0".to_string(), space("t0")),
//!         ("t1".to_string(), space("t1")),
//!         ("t2".to_string(), space("t2")),
//!     ],
//!     [("t0".to_string(), "t1".to_string()), ("t1".to_string(), "t2".to_string())],
//! )?;
//! let family = CausalFamily::new(
//!     tree,
//!     vec![
//!         EdgeOp { parent: "t0".into(), child: "t1".into(), matrix: step.clone() },
//!         EdgeOp { parent: "t1".into(), child: "t2".into(), matrix: step },
//!     ],
//! )?;
//!
//! let two_steps = family.compose("t0", "t2")?;
//! assert!(!two_steps.is_deterministic());
//!
//! // Push a definite "lo" start forward through both stages.
//! let start = MixedState::point(family.tree().space_of("t0")?.clone(), "t0-lo")?;
//! let end = two_steps.dual_apply(&start)?;
//! assert_eq!(end.weights(), &[Scalar::ratio(1, 4).unwrap(), Scalar::ratio(3, 4).unwrap()]);
//! # Ok::<(), finmeas::Error>(())
//! ```

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{MixedState, Observable, StateSpace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Markov operator from functions on `target` to functions on `source`,
/// stored as a row-stochastic matrix `matrix[source point][target point]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovOperator {
    source: StateSpace,
    target: StateSpace,
    matrix: Vec<Vec<Scalar>>,
}

impl MarkovOperator {
    pub fn new(source: StateSpace, target: StateSpace, matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        if matrix.len() != source.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrix rows for a {}-point source space",
                matrix.len(),
                source.len()
            )));
        }
        for (point, row) in source.labels().iter().zip(&matrix) {
            if row.len() != target.len() {
                return Err(Error::DimensionMismatch(format!(
                    "row for `{point}` has {} entries for a {}-point target space",
                    row.len(),
                    target.len()
                )));
            }
            if row.iter().any(Scalar::is_negative) {
                return Err(Error::NotMarkov(format!("negative entry in row for `{point}`")));
            }
            // Row sums are Φ applied to the constant-1 function; a Markov
            // operator must preserve it.
            let sum: Scalar = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::NotMarkov(format!(
                    "row for `{point}` sums to {sum}, expected 1"
                )));
            }
        }
        Ok(MarkovOperator { source, target, matrix })
    }

    pub fn identity(space: StateSpace) -> Self {
        let n = space.len();
        let matrix = (0..n)
            .map(|i| {
                let mut row = vec![Scalar::zero(); n];
                row[i] = Scalar::one();
                row
            })
            .collect();
        MarkovOperator { source: space.clone(), target: space, matrix }
    }

    pub fn source(&self) -> &StateSpace {
        &self.source
    }

    pub fn target(&self) -> &StateSpace {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    /// Pull a function on the target space back to the source space:
    /// (Φf)(ω) = Σ_{ω'} Φ[ω][ω'] f(ω').
    pub fn apply(&self, f: &[Scalar]) -> Result<Vec<Scalar>> {
        if f.len() != self.target.len() {
            return Err(Error::DimensionMismatch(format!(
                "function has {} values for a {}-point target space",
                f.len(),
                self.target.len()
            )));
        }
        Ok(self
            .matrix
            .iter()
            .map(|row| row.iter().zip(f).map(|(m, v)| m * v).sum())
            .collect())
    }

    /// Pull a whole observable on the target space back to the source
    /// space, effect by effect. Outcome labels are preserved.
    pub fn apply_observable(&self, obs: &Observable) -> Result<Observable> {
        if obs.space() != &self.target {
            return Err(Error::SpaceMismatch(
                "observable lives on a different space than the operator's target".into(),
            ));
        }
        let effects = obs
            .effect_rows()
            .iter()
            .map(|row| self.apply(row))
            .collect::<Result<Vec<_>>>()?;
        Observable::new(self.source.clone(), obs.outcomes().to_vec(), effects)
    }

    /// Push a state on the source space forward to the target space:
    /// (Φ*ρ)(ω') = Σ_ω ρ(ω) Φ[ω][ω'].
    pub fn dual_apply(&self, state: &MixedState) -> Result<MixedState> {
        if state.space() != &self.source {
            return Err(Error::SpaceMismatch(
                "state lives on a different space than the operator's source".into(),
            ));
        }
        let n = self.target.len();
        let mut weights = vec![Scalar::zero(); n];
        for (w, row) in state.weights().iter().zip(&self.matrix) {
            for (acc, m) in weights.iter_mut().zip(row) {
                *acc = &*acc + &(w * m);
            }
        }
        MixedState::new(self.target.clone(), weights)
    }

    /// Sequential composition: `a.then(b)` is the operator for the causal
    /// step `a` followed by `b`, i.e. the matrix product `a · b`. On
    /// functions it acts as a∘b; on states as b*∘a*.
    pub fn then(&self, other: &MarkovOperator) -> Result<MarkovOperator> {
        if self.target != other.source {
            return Err(Error::SpaceMismatch(
                "middle spaces of the composition differ".into(),
            ));
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..other.target.len())
                    .map(|k| row.iter().zip(&other.matrix).map(|(a, brow)| a * &brow[k]).sum())
                    .collect()
            })
            .collect();
        MarkovOperator::new(self.source.clone(), other.target.clone(), matrix)
    }

    /// A deterministic operator is induced by a point map: every row is a
    /// point mass.
    pub fn is_deterministic(&self) -> bool {
        self.matrix.iter().all(|row| row.iter().any(Scalar::is_one))
    }
}

/// A finite rooted tree of time points, each carrying a state space. Edges
/// point from parent (earlier) to child (later).
#[derive(Clone, Debug, PartialEq)]
pub struct CausalTree {
    ids: Vec<String>,
    spaces: Vec<StateSpace>,
    index: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
    root: usize,
}

impl CausalTree {
    pub fn new<I, E, S>(nodes: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = (S, StateSpace)>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut ids = Vec::new();
        let mut spaces = Vec::new();
        let mut index = HashMap::new();
        for (id, space) in nodes {
            let id: String = id.into();
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateLabel(id));
            }
            ids.push(id);
            spaces.push(space);
        }
        if ids.is_empty() {
            return Err(Error::MalformedTree("tree has no nodes".into()));
        }
        let mut parent: Vec<Option<usize>> = vec![None; ids.len()];
        for (p, c) in edges {
            let p: String = p.into();
            let c: String = c.into();
            let pi = *index.get(&p).ok_or(Error::UnknownNode(p))?;
            let ci = *index.get(&c).ok_or(Error::UnknownNode(c))?;
            if parent[ci].is_some() {
                return Err(Error::MalformedTree(format!(
                    "node `{}` has more than one parent",
                    ids[ci]
                )));
            }
            parent[ci] = Some(pi);
        }
        let mut roots = (0..ids.len()).filter(|&i| parent[i].is_none());
        let root = roots.next().ok_or_else(|| {
            Error::MalformedTree("no root: every node has a parent (cycle)".into())
        })?;
        if let Some(second) = roots.next() {
            return Err(Error::MalformedTree(format!(
                "nodes `{}` and `{}` are both roots; tree is disconnected",
                ids[root], ids[second]
            )));
        }
        // With a single root, any cycle shows up as a walk that exceeds the
        // node count without reaching the root.
        for start in 0..ids.len() {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > ids.len() {
                    return Err(Error::MalformedTree(format!(
                        "cycle through node `{}`",
                        ids[start]
                    )));
                }
            }
        }
        Ok(CausalTree { ids, spaces, index, parent, root })
    }

    pub fn node_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn root_id(&self) -> &str {
        &self.ids[self.root]
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn space_of(&self, id: &str) -> Result<&StateSpace> {
        Ok(&self.spaces[self.require(id)?])
    }

    pub fn parent_of(&self, id: &str) -> Result<Option<&str>> {
        Ok(self.parent[self.require(id)?].map(|p| self.ids[p].as_str()))
    }

    /// Parent-child index pairs (earlier, later), in child insertion order.
    fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (p, c)))
    }

    /// True when `earlier` lies on the path from the root to `later`
    /// (inclusively).
    pub fn is_ancestor(&self, earlier: &str, later: &str) -> Result<bool> {
        let e = self.require(earlier)?;
        let mut cur = self.require(later)?;
        loop {
            if cur == e {
                return Ok(true);
            }
            match self.parent[cur] {
                Some(p) => cur = p,
                None => return Ok(false),
            }
        }
    }

    /// The edges along the downward path from `earlier` to `later`.
    fn path_edges(&self, earlier: &str, later: &str) -> Result<Vec<(usize, usize)>> {
        let e = self.require(earlier)?;
        let mut cur = self.require(later)?;
        let mut edges = Vec::new();
        while cur != e {
            match self.parent[cur] {
                Some(p) => {
                    edges.push((p, cur));
                    cur = p;
                }
                None => {
                    return Err(Error::NotComparable(earlier.to_string(), later.to_string()))
                }
            }
        }
        edges.reverse();
        Ok(edges)
    }
}

/// A causal tree together with one Markov operator per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct CausalFamily {
    tree: CausalTree,
    ops: HashMap<(usize, usize), MarkovOperator>,
}

/// One edge operator in wire form: the matrix is row-major with
/// `|space(parent)| × |space(child)|` rational entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeOp {
    pub parent: String,
    pub child: String,
    pub matrix: Vec<Scalar>,
}

impl CausalFamily {
    pub fn new(tree: CausalTree, edge_ops: Vec<EdgeOp>) -> Result<Self> {
        let mut ops = HashMap::new();
        for edge in edge_ops {
            let p = tree.require(&edge.parent)?;
            let c = tree.require(&edge.child)?;
            if tree.parent[c] != Some(p) {
                return Err(Error::MalformedTree(format!(
                    "`{}` -> `{}` is not a tree edge",
                    edge.parent, edge.child
                )));
            }
            let source = tree.spaces[p].clone();
            let target = tree.spaces[c].clone();
            let cols = target.len();
            if cols == 0 || edge.matrix.len() != source.len() * cols {
                return Err(Error::DimensionMismatch(format!(
                    "operator for `{}` -> `{}` needs {} entries, got {}",
                    edge.parent,
                    edge.child,
                    source.len() * cols,
                    edge.matrix.len()
                )));
            }
            let rows = edge.matrix.chunks(cols).map(|r| r.to_vec()).collect();
            let op = MarkovOperator::new(source, target, rows)?;
            if ops.insert((p, c), op).is_some() {
                return Err(Error::MalformedTree(format!(
                    "duplicate operator for edge `{}` -> `{}`",
                    edge.parent, edge.child
                )));
            }
        }
        for (p, c) in tree.edge_indices() {
            if !ops.contains_key(&(p, c)) {
                return Err(Error::MalformedTree(format!(
                    "missing operator for edge `{}` -> `{}`",
                    tree.ids[p], tree.ids[c]
                )));
            }
        }
        Ok(CausalFamily { tree, ops })
    }

    pub fn tree(&self) -> &CausalTree {
        &self.tree
    }

    pub fn edge_operator(&self, parent: &str, child: &str) -> Result<&MarkovOperator> {
        let p = self.tree.require(parent)?;
        let c = self.tree.require(child)?;
        self.ops.get(&(p, c)).ok_or_else(|| {
            Error::MalformedTree(format!("`{parent}` -> `{child}` is not a tree edge"))
        })
    }

    /// The composed operator from `earlier` to `later` along the unique tree
    /// path. `earlier == later` yields the identity; unrelated nodes (or a
    /// reversed pair) are not comparable.
    pub fn compose(&self, earlier: &str, later: &str) -> Result<MarkovOperator> {
        if earlier == later {
            return Ok(MarkovOperator::identity(self.tree.space_of(earlier)?.clone()));
        }
        let path = self.tree.path_edges(earlier, later)?;
        let mut composed: Option<MarkovOperator> = None;
        for (p, c) in path {
            let step = &self.ops[&(p, c)];
            composed = Some(match composed {
                None => step.clone(),
                Some(acc) => acc.then(step)?,
            });
        }
        Ok(composed.expect("path between distinct nodes has at least one edge"))
    }
}

#[derive(Serialize, Deserialize)]
struct NodeWire {
    id: String,
    space: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    nodes: Vec<NodeWire>,
    edges: Vec<EdgeOp>,
}

impl Serialize for CausalFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let nodes = self
            .tree
            .ids
            .iter()
            .zip(&self.tree.spaces)
            .map(|(id, space)| NodeWire { id: id.clone(), space: space.labels().to_vec() })
            .collect();
        let edges = self
            .tree
            .edge_indices()
            .map(|(p, c)| EdgeOp {
                parent: self.tree.ids[p].clone(),
                child: self.tree.ids[c].clone(),
                matrix: self.ops[&(p, c)].matrix.iter().flatten().cloned().collect(),
            })
            .collect();
        FamilyWire { nodes, edges }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CausalFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = FamilyWire::deserialize(deserializer)?;
        CausalFamily::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<FamilyWire> for CausalFamily {
    type Error = Error;

    fn try_from(wire: FamilyWire) -> Result<Self> {
        let mut nodes = Vec::with_capacity(wire.nodes.len());
        for node in wire.nodes {
            nodes.push((node.id, StateSpace::new(node.space)?));
        }
        let edges: Vec<(String, String)> =
            wire.edges.iter().map(|e| (e.parent.clone(), e.child.clone())).collect();
        let tree = CausalTree::new(nodes, edges)?;
        CausalFamily::new(tree, wire.edges)
    }
}

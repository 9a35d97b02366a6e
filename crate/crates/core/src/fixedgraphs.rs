//! Torus-fixed stable maps as decorated trees.
//!
//! For degree `d <= 3` every torus-fixed genus-0 stable map to `G(k, n)` is an
//! isolated point, described by a tree whose vertices carry fixed points of
//! the Grassmannian and whose edges carry covering degrees of fixed lines.
//! Contracted components sit implicitly at vertices of valence 3; they are
//! rigid, so the tree is the whole datum.
//!
//! Enumeration goes shape by shape: the handful of tree shapes of total
//! degree `d`, then labels vertex by vertex subject to the adjacency rule,
//! then deduplication by [`canonical_form`].

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{Ambient, Coords, GrassmannPoint};

/// Highest degree with isolated fixed points.
pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub deg: u32,
}

/// The fixed line carried by an edge: it joins `a + {b_u}` and `a + {b_v}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLine {
    pub a: Coords,
    pub b_u: usize,
    pub b_v: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// One edge carrying the whole degree.
    Edge,
    /// Degree 2, two edges of degree 1.
    Path,
    /// Degree 3, two edges of degrees 1 and 2.
    Path12,
    /// Degree 3, three edges at a common vertex.
    Star,
    /// Degree 3, three edges in a row.
    Path111,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Edge => "edge",
            Shape::Path => "path",
            Shape::Path12 => "path12",
            Shape::Star => "star",
            Shape::Path111 => "path111",
        }
    }

    pub fn for_degree(d: usize) -> Result<&'static [Shape]> {
        match d {
            1 => Ok(&[Shape::Edge]),
            2 => Ok(&[Shape::Edge, Shape::Path]),
            3 => Ok(&[Shape::Edge, Shape::Path12, Shape::Star, Shape::Path111]),
            0 => Err(Error::domain("degree must be at least 1")),
            _ => Err(Error::UnsupportedDegree(d)),
        }
    }

    /// For vertices `1..`: (parent, degree of the edge to the parent).
    fn template(self, d: usize) -> Vec<(usize, u32)> {
        match self {
            Shape::Edge => vec![(0, d as u32)],
            Shape::Path => vec![(0, 1), (1, 1)],
            Shape::Path12 => vec![(0, 1), (1, 2)],
            Shape::Star => vec![(0, 1), (0, 1), (0, 1)],
            Shape::Path111 => vec![(0, 1), (1, 1), (2, 1)],
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Isomorphism-invariant key: the lexicographically least (labels, edges)
/// pair over all vertex orderings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    labels: Vec<u64>,
    edges: Vec<(usize, usize, u32)>,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct DecoratedTree {
    k: usize,
    ambient: Ambient,
    vertices: Vec<GrassmannPoint>,
    edges: Vec<TreeEdge>,
}

impl DecoratedTree {
    /// Builds a tree and checks every structural invariant: labels are
    /// k-subsets of the ambient coordinates, the graph is a tree, adjacent
    /// labels share exactly `k - 1` elements, `1 <= d <= 3` and valences are
    /// at most 3.
    pub fn new(
        k: usize,
        ambient: Ambient,
        vertices: Vec<GrassmannPoint>,
        edges: Vec<TreeEdge>,
    ) -> Result<Self> {
        let tree = DecoratedTree { k, ambient, vertices, edges };
        tree.validate()?;
        Ok(tree)
    }

    /// Convenience constructor over `{1..n}` from index lists.
    pub fn from_labels(k: usize, n: usize, vertices: &[&[usize]], edges: &[(usize, usize, u32)]) -> Result<Self> {
        let vertices = vertices
            .iter()
            .map(|ix| Coords::from_indices(ix.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        let edges = edges.iter().map(|&(u, v, deg)| TreeEdge { u, v, deg }).collect();
        Self::new(k, Ambient::full(n), vertices, edges)
    }

    fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        let coords = self.ambient.coords();
        if nv == 0 || self.edges.len() + 1 != nv {
            return Err(Error::domain(format!(
                "{} vertices and {} edges do not form a tree",
                nv,
                self.edges.len()
            )));
        }
        for (i, p) in self.vertices.iter().enumerate() {
            if p.len() != self.k || !p.is_subset(coords) {
                return Err(Error::domain(format!(
                    "vertex {i} label {p:?} is not a {}-subset of {coords:?}",
                    self.k
                )));
            }
        }
        let d = self.degree();
        if d == 0 {
            return Err(Error::domain("edge degrees must be positive"));
        }
        if d > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(d));
        }
        // Union-find over at most four vertices.
        let mut root: Vec<usize> = (0..nv).collect();
        fn find(root: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while root[x] != x {
                x = root[x];
            }
            x
        }
        for e in &self.edges {
            if e.u >= nv || e.v >= nv || e.u == e.v {
                return Err(Error::domain(format!("edge {e:?} has bad endpoints")));
            }
            if e.deg == 0 {
                return Err(Error::domain(format!("edge {e:?} has degree 0")));
            }
            let shared = self.vertices[e.u].intersection(self.vertices[e.v]).len();
            if shared + 1 != self.k {
                return Err(Error::domain(format!(
                    "labels {:?} and {:?} do not span a fixed line",
                    self.vertices[e.u], self.vertices[e.v]
                )));
            }
            let (a, b) = (find(&mut root, e.u), find(&mut root, e.v));
            if a == b {
                return Err(Error::domain("edges contain a cycle"));
            }
            root[a] = b;
        }
        if (0..nv).any(|v| self.valence(v) > 3) {
            return Err(Error::domain("vertex of valence above 3"));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn vertices(&self) -> &[GrassmannPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    /// Total degree of the map.
    pub fn degree(&self) -> usize {
        self.edges.iter().map(|e| e.deg as usize).sum()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    /// Indices of the edges incident to `v`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.u == v || e.v == v).map(|(i, _)| i)
    }

    pub fn line(&self, edge: usize) -> EdgeLine {
        let e = self.edges[edge];
        let (su, sv) = (self.vertices[e.u], self.vertices[e.v]);
        let a = su.intersection(sv);
        EdgeLine {
            a,
            b_u: su.difference(a).single().expect("adjacent labels differ in one element"),
            b_v: sv.difference(a).single().expect("adjacent labels differ in one element"),
        }
    }

    /// Dimension of the moduli space containing this point:
    /// `k(m - k) + d m - 3` with `m` the number of ambient coordinates.
    pub fn moduli_dim(&self) -> i64 {
        let m = self.ambient.dim() as i64;
        let k = self.k as i64;
        k * (m - k) + self.degree() as i64 * m - 3
    }

    pub fn shape(&self) -> Shape {
        match self.edges.len() {
            1 => Shape::Edge,
            2 if self.degree() == 2 => Shape::Path,
            2 => Shape::Path12,
            _ if (0..self.vertices.len()).any(|v| self.valence(v) == 3) => Shape::Star,
            _ => Shape::Path111,
        }
    }

    /// The same tree with vertices in canonical order.
    pub fn canonical(&self) -> Self {
        let form = canonical_form(self);
        self.with_form(&form)
    }

    fn with_form(&self, form: &CanonicalForm) -> Self {
        DecoratedTree {
            k: self.k,
            ambient: self.ambient,
            vertices: form.labels.iter().map(|&m| Coords::from_mask(m)).collect(),
            edges: form.edges.iter().map(|&(u, v, deg)| TreeEdge { u, v, deg }).collect(),
        }
    }

    /// Replaces every label by its complement in the ambient coordinates,
    /// mapping a fixed point of `G(k, V)` to one of `G(dim V - k, V)`.
    pub fn complement(&self) -> Self {
        let coords = self.ambient.coords();
        DecoratedTree {
            k: self.ambient.dim() - self.k,
            ambient: self.ambient,
            vertices: self.vertices.iter().map(|&p| coords.difference(p)).collect(),
            edges: self.edges.clone(),
        }
        .canonical()
    }

    /// Same labels and edges over a different ambient (used by embeddings).
    pub(crate) fn reembed(&self, k: usize, ambient: Ambient, vertices: Vec<GrassmannPoint>) -> Result<Self> {
        DecoratedTree::new(k, ambient, vertices, self.edges.clone())
    }
}

impl fmt::Debug for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DecoratedTree(k={}, {:?}", self.k, self.ambient.coords())?;
        for e in &self.edges {
            write!(
                f,
                ", {:?}-{}-{:?}",
                self.vertices[e.u].iter().collect::<Vec<_>>(),
                e.deg,
                self.vertices[e.v].iter().collect::<Vec<_>>()
            )?;
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    k: usize,
    n: usize,
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<usize>>,
    vertices: Vec<Vec<usize>>,
    edges: Vec<TreeEdge>,
}

impl From<DecoratedTree> for TreeJson {
    fn from(t: DecoratedTree) -> Self {
        TreeJson {
            k: t.k,
            n: t.ambient.n(),
            d: t.degree(),
            coords: (!t.ambient.is_full()).then(|| t.ambient.coords().iter().collect()),
            vertices: t.vertices.iter().map(|p| p.iter().collect()).collect(),
            edges: t.edges,
        }
    }
}

impl TryFrom<TreeJson> for DecoratedTree {
    type Error = Error;

    fn try_from(j: TreeJson) -> Result<Self> {
        let ambient = match j.coords {
            Some(c) => Ambient::new(j.n, Coords::from_indices(c)?)?,
            None => Ambient::full(j.n),
        };
        let vertices = j
            .vertices
            .into_iter()
            .map(Coords::from_indices)
            .collect::<Result<Vec<_>>>()?;
        let tree = DecoratedTree::new(j.k, ambient, vertices, j.edges)?;
        if tree.degree() != j.d {
            return Err(Error::domain(format!("declared d={} but edges sum to {}", j.d, tree.degree())));
        }
        Ok(tree)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Encoding that is equal for two trees exactly when they are isomorphic as
/// label- and degree-decorated graphs. Minimizes over all vertex orderings,
/// which is cheap since fixed trees of degree at most 3 have at most 4 vertices.
pub fn canonical_form(tree: &DecoratedTree) -> CanonicalForm {
    let nv = tree.vertices.len();
    let mut best: Option<CanonicalForm> = None;
    for order in permutations(nv) {
        // order[new] = old
        let mut position = vec![0; nv];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let labels: Vec<u64> = order.iter().map(|&old| tree.vertices[old].mask()).collect();
        if let Some(b) = &best {
            if labels > b.labels {
                continue;
            }
        }
        let mut edges: Vec<(usize, usize, u32)> = tree
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (position[e.u], position[e.v]);
                (a.min(b), a.max(b), e.deg)
            })
            .collect();
        edges.sort_unstable();
        let cand = CanonicalForm { labels, edges };
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.expect("trees have at least one vertex")
}

/// All `k`-subsets of `coords`, in increasing mask order.
pub fn fixed_points(k: usize, coords: Coords) -> Vec<GrassmannPoint> {
    let idx: Vec<usize> = coords.iter().collect();
    let mut out = Vec::new();
    fn go(idx: &[usize], start: usize, left: usize, mask: u64, out: &mut Vec<GrassmannPoint>) {
        if left == 0 {
            out.push(Coords::from_mask(mask));
            return;
        }
        for i in start..=idx.len() - left {
            go(idx, i + 1, left - 1, mask | 1 << idx[i], out);
        }
    }
    if k <= idx.len() {
        go(&idx, 0, k, 0, &mut out);
    }
    out.sort();
    out
}

/// Fixed points joined to `p` by a fixed line: swap one element in for one out.
fn neighbours(p: GrassmannPoint, coords: Coords) -> impl Iterator<Item = GrassmannPoint> {
    let outside = coords.difference(p);
    p.iter().flat_map(move |a| outside.iter().map(move |b| p.without(a).with(b)))
}

fn check_range(k: usize, ambient: &Ambient, d: usize) -> Result<()> {
    Shape::for_degree(d)?;
    let m = ambient.dim();
    if k == 0 || k >= m {
        return Err(Error::domain(format!("need 1 <= k < n, got k={k}, n={m}")));
    }
    Ok(())
}

/// One representative per isomorphism class of fixed maps of degree `d` to
/// `G(k, n)`, sorted by canonical form.
pub fn enumerate_fixed_graphs(k: usize, n: usize, d: usize) -> Result<Vec<DecoratedTree>> {
    if n > crate::weights::MAX_INDEX {
        return Err(Error::domain(format!("n={n} exceeds {}", crate::weights::MAX_INDEX)));
    }
    enumerate_fixed_graphs_in(k, &Ambient::full(n), d)
}

/// [`enumerate_fixed_graphs`] for `G(k, V)` with an arbitrary coordinate set `V`.
pub fn enumerate_fixed_graphs_in(k: usize, ambient: &Ambient, d: usize) -> Result<Vec<DecoratedTree>> {
    check_range(k, ambient, d)?;
    let coords = ambient.coords();
    let roots = fixed_points(k, coords);
    let jobs: Vec<(Shape, GrassmannPoint)> = Shape::for_degree(d)?
        .iter()
        .flat_map(|&s| roots.iter().map(move |&r| (s, r)))
        .collect();

    let found: BTreeMap<CanonicalForm, DecoratedTree> = jobs
        .par_iter()
        .map(|&(shape, root)| {
            let template = shape.template(d);
            let edges: Vec<TreeEdge> = template
                .iter()
                .enumerate()
                .map(|(i, &(parent, deg))| TreeEdge { u: parent, v: i + 1, deg })
                .collect();
            let mut local = BTreeMap::new();
            let mut labels = vec![root];
            extend_labels(&template, coords, &mut labels, &mut |labels| {
                let tree = DecoratedTree { k, ambient: *ambient, vertices: labels.to_vec(), edges: edges.clone() };
                let form = canonical_form(&tree);
                local.entry(form).or_insert_with_key(|f| tree.with_form(f));
            });
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found.into_values().collect())
}

fn extend_labels(
    template: &[(usize, u32)],
    coords: Coords,
    labels: &mut Vec<GrassmannPoint>,
    emit: &mut impl FnMut(&[GrassmannPoint]),
) {
    let next = labels.len();
    if next == template.len() + 1 {
        emit(labels);
        return;
    }
    let (parent, _) = template[next - 1];
    for p in neighbours(labels[parent], coords) {
        labels.push(p);
        extend_labels(template, coords, labels, emit);
        labels.pop();
    }
}

/// Number of enumerated fixed points per shape.
pub fn count_by_shape(k: usize, n: usize, d: usize) -> Result<BTreeMap<Shape, u128>> {
    let trees = enumerate_fixed_graphs(k, n, d)?;
    let mut counts: BTreeMap<Shape, u128> = Shape::for_degree(d)?.iter().map(|&s| (s, 0)).collect();
    for t in &trees {
        *counts.entry(t.shape()).or_default() += 1;
    }
    Ok(counts)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form census per shape, with `B = C(n, k)` fixed points and
/// `m = k(n - k)` fixed lines through each:
/// edges `Bm/2`, degree-2 paths `B C(m+1, 2)`, (1,2)-paths `B m^2`,
/// stars `B C(m+2, 3)`, 3-paths `B m^3 / 2`.
pub fn census_formula(k: usize, n: usize, d: usize) -> Result<BTreeMap<Shape, u128>> {
    check_range(k, &Ambient::full(n), d)?;
    let b = binomial(n as u128, k as u128);
    let m = (k * (n - k)) as u128;
    Ok(Shape::for_degree(d)?
        .iter()
        .map(|&s| {
            let count = match s {
                Shape::Edge => b * m / 2,
                Shape::Path => b * binomial(m + 1, 2),
                Shape::Path12 => b * m * m,
                Shape::Star => b * binomial(m + 2, 3),
                Shape::Path111 => b * m * m * m / 2,
            };
            (s, count)
        })
        .collect())
}

/// Smallest Grassmannian `G(k0, n0)` containing the configuration: drop the
/// indices common to all labels and keep only those used by some label.
pub fn minimal_stratum(tree: &DecoratedTree) -> (usize, usize) {
    let common = tree.vertices.iter().fold(tree.ambient.coords(), |acc, &p| acc.intersection(p));
    let used = tree.vertices.iter().fold(Coords::empty(), |acc, &p| acc.union(p));
    (tree.k - common.len(), used.len() - common.len())
}

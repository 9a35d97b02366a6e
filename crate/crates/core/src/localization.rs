//! Tangent weights at fixed stable maps and the Białynicki-Birula sum.
//!
//! At a fixed tree the tangent space of `M_{0,0}(G(k,n), d)` is assembled from
//! - sections of `f^* T_G` over each edge component ([`edge_h0_weights`]),
//!   less one copy of `T_G` at the image point per node;
//! - node smoothings: at a valence-2 vertex the sum of the two branch
//!   tangent weights, at a valence-3 vertex (implicit contracted component)
//!   one branch tangent weight per edge;
//! - minus infinitesimal automorphisms of each edge component: the zero
//!   weight plus the tangent weight at every end that is not a node.
//!
//! The fixed point contributes `q^(number of positive weights)`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fixedgraphs::{enumerate_fixed_graphs, DecoratedTree, Shape};
use crate::qpoly::QPolynomial;
use crate::weights::{edge_h0_weights, grassmann_tangent_weights, Sign, TorusWeight, WeightMultiset};

/// Tangent weight of edge component `edge` at its end over `vertex`.
fn branch_weight(tree: &DecoratedTree, edge: usize, vertex: usize) -> TorusWeight {
    let e = tree.edges()[edge];
    let line = tree.line(edge);
    let (here, there) = if vertex == e.u { (line.b_u, line.b_v) } else { (line.b_v, line.b_u) };
    TorusWeight::difference(tree.ambient().n(), there, here).scale(Ratio::new(1, e.deg as i64))
}

/// The torus representation on the tangent space of the moduli space at `tree`.
pub fn tangent_weights(tree: &DecoratedTree) -> Result<WeightMultiset> {
    let ambient = tree.ambient();
    let n = ambient.n();
    let mut weights = WeightMultiset::new();

    for (i, e) in tree.edges().iter().enumerate() {
        let line = tree.line(i);
        weights.merge(&edge_h0_weights(line.a, line.b_u, line.b_v, e.deg, ambient)?);
    }

    for (v, &label) in tree.vertices().iter().enumerate() {
        let incident: Vec<usize> = tree.incident(v).collect();
        match incident.len() {
            1 => {}
            2 => weights.insert(&branch_weight(tree, incident[0], v) + &branch_weight(tree, incident[1], v)),
            3 => {
                for &e in &incident {
                    weights.insert(branch_weight(tree, e, v));
                }
            }
            val => return Err(Error::Consistency(format!("vertex of valence {val} in {tree:?}"))),
        }
        if incident.len() >= 2 {
            weights.subtract_times(&grassmann_tangent_weights(label, ambient), incident.len() as i64 - 1);
        }
    }

    for (i, e) in tree.edges().iter().enumerate() {
        weights.remove(TorusWeight::zero(n));
        for end in [e.u, e.v] {
            if tree.valence(end) == 1 {
                weights.remove(branch_weight(tree, i, end));
            }
        }
    }

    if !weights.is_nonnegative() {
        return Err(Error::Consistency(format!("negative multiplicity at {tree:?}: {weights:?}")));
    }
    if weights.zero_multiplicity() != 0 {
        return Err(Error::Consistency(format!("zero weight survives at {tree:?}")));
    }
    if weights.len() != tree.moduli_dim() {
        return Err(Error::Consistency(format!(
            "{} tangent weights at {tree:?}, expected {}",
            weights.len(),
            tree.moduli_dim()
        )));
    }
    Ok(weights)
}

#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub tree: DecoratedTree,
    pub weights: WeightMultiset,
    pub positives: i64,
    pub negatives: i64,
}

impl FixedPointReport {
    pub fn new(tree: DecoratedTree) -> Result<Self> {
        let weights = tangent_weights(&tree)?;
        let positives = weights.count_sign(Sign::Positive);
        let negatives = weights.count_sign(Sign::Negative);
        Ok(FixedPointReport { tree, weights, positives, negatives })
    }
}

impl Serialize for FixedPointReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            tree: &'a DecoratedTree,
            weights: Vec<TorusWeight>,
            positives: i64,
            negatives: i64,
        }
        let weights = self.weights.expanded().map_err(serde::ser::Error::custom)?;
        Wire { tree: &self.tree, weights, positives: self.positives, negatives: self.negatives }
            .serialize(serializer)
    }
}

/// Reports for every fixed point, in enumeration order.
pub fn fixed_point_reports(k: usize, n: usize, d: usize) -> Result<Vec<FixedPointReport>> {
    enumerate_fixed_graphs(k, n, d)?.into_par_iter().map(FixedPointReport::new).collect()
}

fn positive_count(tree: &DecoratedTree) -> Result<usize> {
    Ok(tangent_weights(tree)?.count_sign(Sign::Positive) as usize)
}

/// Histogram of cell dimensions as a polynomial. Reduction adds integer
/// histograms, so the result does not depend on how work was split.
fn sum_cells<'a>(trees: impl IntoParallelIterator<Item = &'a DecoratedTree>) -> Result<QPolynomial> {
    let hist = trees
        .into_par_iter()
        .map(|t| {
            let mut h = Vec::new();
            let p = positive_count(t)?;
            h.resize(p + 1, 0u64);
            h[p] = 1;
            Ok(h)
        })
        .try_reduce(Vec::new, |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            Ok(a)
        })?;
    Ok(QPolynomial::from_terms(hist.into_iter().enumerate().map(|(e, c)| (e as i64, c))))
}

/// Poincaré polynomial of `M_{0,0}(G(k,n), d)`: the sum of
/// `q^(positive tangent weights)` over all fixed points. The coefficient of
/// `q^i` is the Betti number `b_{2i}`.
pub fn poincare_localization(k: usize, n: usize, d: usize) -> Result<QPolynomial> {
    let trees = enumerate_fixed_graphs(k, n, d)?;
    sum_cells(&trees)
}

/// Families of degree-2 fixed points singled out by label pattern. Both are
/// two-edge paths of degree (1,1) with centre `C` and leaves
/// `C - x_1 + y_1`, `C - x_2 + y_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StratumFamily {
    /// Centre `(ij)`, leaves `(jj')`, `(ij')` with `i < j < j'` in the base
    /// `G(2,3)`: one common added index above both removed ones.
    G23Triangle,
    /// Centre `(j)`, both leaves `(i)` with `j < i` in the base `G(1,2)`:
    /// equal leaves, removed index below the added one.
    G12Repeated,
}

impl StratumFamily {
    pub fn id(self) -> &'static str {
        match self {
            StratumFamily::G23Triangle => "G23_triangle",
            StratumFamily::G12Repeated => "G12_repeated",
        }
    }

    pub fn matches(self, tree: &DecoratedTree) -> bool {
        if tree.shape() != Shape::Path {
            return false;
        }
        let Some(centre) = (0..3).find(|&v| tree.valence(v) == 2) else {
            return false;
        };
        let c = tree.vertices()[centre];
        let swaps: Vec<(usize, usize)> = (0..3)
            .filter(|&v| v != centre)
            .map(|v| {
                let leaf = tree.vertices()[v];
                (c.difference(leaf).single().unwrap(), leaf.difference(c).single().unwrap())
            })
            .collect();
        let ((x1, y1), (x2, y2)) = (swaps[0], swaps[1]);
        match self {
            StratumFamily::G23Triangle => y1 == y2 && x1 != x2 && x1 < y1 && x2 < y1,
            StratumFamily::G12Repeated => (x1, y1) == (x2, y2) && x1 < y1,
        }
    }
}

impl FromStr for StratumFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G23_triangle" => Ok(StratumFamily::G23Triangle),
            "G12_repeated" => Ok(StratumFamily::G12Repeated),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for StratumFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Contribution of one family of degree-2 fixed points to the Poincaré
/// polynomial of `M_{0,0}(G(k,n), 2)`, by brute-force summation.
pub fn stratum_family_contribution(k: usize, n: usize, family: StratumFamily) -> Result<QPolynomial> {
    let trees: Vec<DecoratedTree> =
        enumerate_fixed_graphs(k, n, 2)?.into_iter().filter(|t| family.matches(t)).collect();
    sum_cells(&trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Rational;

    fn tree(k: usize, n: usize, v: &[&[usize]], e: &[(usize, usize, u32)]) -> DecoratedTree {
        DecoratedTree::from_labels(k, n, v, e).unwrap()
    }

    #[test]
    fn double_cover_of_p1() {
        let t = tree(1, 2, &[&[1], &[2]], &[(0, 1, 2)]);
        let w = tangent_weights(&t).unwrap();
        let expected: WeightMultiset =
            [TorusWeight::difference(2, 1, 2), TorusWeight::difference(2, 2, 1)].into_iter().collect();
        assert_eq!(w, expected);
        assert_eq!(FixedPointReport::new(t).unwrap().positives, 1);
    }

    #[test]
    fn triangle_in_g23_has_four_positive_weights() {
        let t = tree(2, 3, &[&[1, 2], &[2, 3], &[1, 3]], &[(0, 1, 1), (0, 2, 1)]);
        let r = FixedPointReport::new(t).unwrap();
        assert_eq!(r.weights.len(), 5);
        assert_eq!(r.positives, 4);
        assert_eq!(r.negatives, 1);
    }

    #[test]
    fn path_through_1_in_p1() {
        let t = tree(1, 2, &[&[2], &[1], &[2]], &[(0, 1, 1), (1, 2, 1)]);
        let w = tangent_weights(&t).unwrap();
        let mut expected = WeightMultiset::new();
        expected.insert(TorusWeight::difference(2, 2, 1));
        expected.insert(TorusWeight::difference(2, 2, 1).scale(Rational::from_integer(2)));
        assert_eq!(w, expected);
    }

    #[test]
    fn small_poincare_polynomials() {
        assert_eq!(poincare_localization(1, 2, 2).unwrap(), QPolynomial::from_coeffs(&[1, 1, 1]));
        assert_eq!(poincare_localization(1, 2, 1).unwrap(), QPolynomial::one());
        assert_eq!(
            poincare_localization(1, 3, 3).unwrap(),
            QPolynomial::from_coeffs(&[1, 2, 5, 7, 9, 7, 5, 2, 1])
        );
    }

    #[test]
    fn family_ids() {
        assert_eq!("G23_triangle".parse::<StratumFamily>().unwrap(), StratumFamily::G23Triangle);
        assert!(matches!("G99".parse::<StratumFamily>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn family_sums_at_base_strata() {
        assert_eq!(
            stratum_family_contribution(2, 3, StratumFamily::G23Triangle).unwrap(),
            QPolynomial::q_pow(4)
        );
        assert_eq!(
            stratum_family_contribution(1, 2, StratumFamily::G12Repeated).unwrap(),
            QPolynomial::q_pow(2)
        );
        assert!(stratum_family_contribution(1, 5, StratumFamily::G23Triangle).unwrap().is_zero());
    }

    #[test]
    fn report_json_expands_multiplicities() {
        let t = tree(1, 2, &[&[2], &[1], &[2]], &[(0, 1, 1), (1, 2, 1)]);
        let r = FixedPointReport::new(t).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["positives"], 2);
        assert_eq!(v["weights"].as_array().unwrap().len(), 2);
        assert_eq!(v["weights"][0], serde_json::json!(["-2", "2"]));
        assert_eq!(v["weights"][1], serde_json::json!(["-1", "1"]));
    }
}

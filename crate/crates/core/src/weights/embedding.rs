//! Weights added when a fixed map is pushed into a bigger Grassmannian.
//!
//! Let `V` be a coordinate set missing the index `m`. Two embeddings send
//! fixed maps to `G(k, V)` into maps to a Grassmannian over `V + {m}`:
//!
//! - [`EmbeddingMode::Iota`]: `G(k, V) -> G(k, V + {m})`, labels unchanged;
//! - [`EmbeddingMode::Kappa`]: `G(k, V) -> G(k + 1, V + {m})`, `m` added to every label.
//!
//! The tangent space of the moduli space at the image is the tangent space at
//! the original map plus the weight list computed by [`embedding_weight_delta`].

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{line_points, Rational, TorusWeight, WeightMultiset};
use crate::error::{Error, Result};
use crate::fixedgraphs::DecoratedTree;
use crate::weights::Ambient;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingMode {
    Iota,
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub mode: EmbeddingMode,
    /// The coordinate index being adjoined.
    pub new_index: usize,
}

impl Embedding {
    pub fn iota(new_index: usize) -> Self {
        Embedding { mode: EmbeddingMode::Iota, new_index }
    }

    pub fn kappa(new_index: usize) -> Self {
        Embedding { mode: EmbeddingMode::Kappa, new_index }
    }

    fn check(&self, tree: &DecoratedTree) -> Result<()> {
        let m = self.new_index;
        let amb = tree.ambient();
        if m == 0 || m > amb.n() {
            return Err(Error::domain(format!("new index {m} outside 1..={}", amb.n())));
        }
        if amb.coords().contains(m) {
            return Err(Error::domain(format!("index {m} already belongs to the target coordinates")));
        }
        Ok(())
    }

    /// Image of `tree` under the embedding.
    pub fn apply(&self, tree: &DecoratedTree) -> Result<DecoratedTree> {
        self.check(tree)?;
        let m = self.new_index;
        let amb = tree.ambient();
        let ambient = Ambient::new(amb.n(), amb.coords().with(m))?;
        match self.mode {
            EmbeddingMode::Iota => tree.reembed(tree.k(), ambient, tree.vertices().to_vec()),
            EmbeddingMode::Kappa => {
                let labels = tree.vertices().iter().map(|p| p.with(m)).collect();
                tree.reembed(tree.k() + 1, ambient, labels)
            }
        }
    }
}

/// Cokernel weights of the tangent map induced by the embedding at `tree`.
///
/// Iota: every edge over the line through `A + {b_u}`, `A + {b_v}` contributes
/// `alpha_m - alpha_a` (`a` in `A`) and `alpha_m - ((s/d) alpha_bu + (t/d) alpha_bv)`;
/// every vertex `S` of valence at least 2 removes `alpha_m - alpha_a` (`a` in `S`)
/// once per node over it, i.e. `valence - 1` times.
///
/// Kappa mirrors this with `alpha_x - alpha_m`, taking `x` from the complement
/// of the line's span for edges and from the complement of `S` for vertices.
pub fn embedding_weight_delta(tree: &DecoratedTree, embedding: &Embedding) -> Result<WeightMultiset> {
    embedding.check(tree)?;
    let amb = tree.ambient();
    let n = amb.n();
    let m = embedding.new_index;
    let alpha_m = TorusWeight::alpha(n, m);
    // Orients a weight relative to alpha_m: iota gives alpha_m - x, kappa x - alpha_m.
    let toward = |x: &TorusWeight| match embedding.mode {
        EmbeddingMode::Iota => &alpha_m - x,
        EmbeddingMode::Kappa => x - &alpha_m,
    };

    let mut delta = WeightMultiset::new();
    for (i, e) in tree.edges().iter().enumerate() {
        let line = tree.line(i);
        let fixed = match embedding.mode {
            EmbeddingMode::Iota => line.a,
            EmbeddingMode::Kappa => amb.coords().difference(line.a).without(line.b_u).without(line.b_v),
        };
        for x in fixed.iter() {
            delta.insert(toward(&TorusWeight::alpha(n, x)));
        }
        for p in line_points(n, line.b_u, line.b_v, e.deg) {
            delta.insert(toward(&p));
        }
    }
    for (v, &label) in tree.vertices().iter().enumerate() {
        let nodes = tree.valence(v) as i64 - 1;
        if nodes < 1 {
            continue;
        }
        let removed = match embedding.mode {
            EmbeddingMode::Iota => label,
            EmbeddingMode::Kappa => amb.coords().difference(label),
        };
        for x in removed.iter() {
            delta.add(toward(&TorusWeight::alpha(n, x)), -nodes);
        }
    }
    if !delta.is_nonnegative() {
        return Err(Error::Consistency(format!("embedding delta for {tree:?} has negative entries: {delta:?}")));
    }
    debug_assert!(delta.iter().all(|(w, _)| w.coeff(m) == Rational::one() || w.coeff(m) == -Rational::one()));
    Ok(delta)
}

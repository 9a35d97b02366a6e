//! Formal torus weights and the weight lists that localization assembles.
//!
//! A [`TorusWeight`] is a rational linear combination of the characters
//! `alpha_1, ..., alpha_n` of the diagonal torus acting on `C^n`. Its sign is
//! read off lexicographically from the highest-index nonzero coefficient,
//! which is the sign every numeric choice `alpha_1 << alpha_2 << ... << alpha_n`
//! produces.

pub mod embedding;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use embedding::{embedding_weight_delta, Embedding, EmbeddingMode};

pub type Rational = Ratio<i64>;

/// Largest supported coordinate index; points and coordinate sets are `u64` bitmasks.
pub const MAX_INDEX: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// `sum_i c_i alpha_i` with exact rational coefficients, stored densely for
/// `i = 1..=n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusWeight {
    coeffs: Vec<Rational>,
}

impl TorusWeight {
    pub fn zero(n: usize) -> Self {
        TorusWeight { coeffs: vec![Rational::zero(); n] }
    }

    /// The character `alpha_i` (1-based).
    pub fn alpha(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.add_coeff(i, Rational::from_integer(1));
        w
    }

    /// `alpha_b - alpha_a`.
    pub fn difference(n: usize, b: usize, a: usize) -> Self {
        let mut w = Self::zero(n);
        w.add_coeff(b, Rational::from_integer(1));
        w.add_coeff(a, Rational::from_integer(-1));
        w
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        TorusWeight { coeffs }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `alpha_i` (1-based).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs[i - 1]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn add_coeff(&mut self, i: usize, c: Rational) {
        self.coeffs[i - 1] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: Rational) -> Self {
        TorusWeight { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Sign of the coefficient with the largest index among the nonzero ones.
    pub fn sign(&self) -> Sign {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            None => Sign::Zero,
            Some(c) if c.is_positive() => Sign::Positive,
            Some(_) => Sign::Negative,
        }
    }
}

pub fn weight_sign(w: &TorusWeight) -> Sign {
    w.sign()
}

impl Add<&TorusWeight> for &TorusWeight {
    type Output = TorusWeight;
    fn add(self, rhs: &TorusWeight) -> TorusWeight {
        debug_assert_eq!(self.n(), rhs.n());
        TorusWeight { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&TorusWeight> for &TorusWeight {
    type Output = TorusWeight;
    fn sub(self, rhs: &TorusWeight) -> TorusWeight {
        debug_assert_eq!(self.n(), rhs.n());
        TorusWeight { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &TorusWeight {
    type Output = TorusWeight;
    fn neg(self) -> TorusWeight {
        TorusWeight { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for TorusWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if mag != Rational::from_integer(1) {
                write!(f, "({mag})")?;
            }
            write!(f, "a{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusWeight({self})")
    }
}

// JSON: array of n reduced-fraction strings, ["-1/2","1/2","0"].
impl Serialize for TorusWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for TorusWeight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<Rational>().map_err(|_| D::Error::custom(format!("bad fraction {s:?}"))))
            .collect::<std::result::Result<_, _>>()?;
        Ok(TorusWeight { coeffs })
    }
}

/// A set of coordinate indices, as a bitmask with bit `i` for index `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coords(u64);

impl Coords {
    pub fn empty() -> Self {
        Coords(0)
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_INDEX, "at most {MAX_INDEX} coordinates are supported");
        Coords(((1u64 << n) - 1) << 1)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0u64;
        for i in indices {
            if i == 0 || i > MAX_INDEX {
                return Err(Error::domain(format!("coordinate index {i} out of range 1..={MAX_INDEX}")));
            }
            mask |= 1 << i;
        }
        Ok(Coords(mask))
    }

    pub fn from_mask(mask: u64) -> Self {
        debug_assert_eq!(mask & 1, 0);
        Coords(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i <= MAX_INDEX && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Coords(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Coords(self.0 & !(1 << i))
    }

    pub fn union(self, other: Coords) -> Self {
        Coords(self.0 | other.0)
    }

    pub fn intersection(self, other: Coords) -> Self {
        Coords(self.0 & other.0)
    }

    pub fn difference(self, other: Coords) -> Self {
        Coords(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Coords) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                i
            })
        })
    }

    /// The unique element of a one-element set.
    pub fn single(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Debug for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A torus-fixed point of a Grassmannian: the span of `e_a` for `a` in a
/// k-subset of the ambient coordinates.
pub type GrassmannPoint = Coords;

/// The target `G(k, V)` is described by the coordinate set `V` together with
/// the length `n` of weight vectors (`V` is a subset of `{1..n}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    n: usize,
    coords: Coords,
}

impl Ambient {
    /// `V = {1..n}`.
    pub fn full(n: usize) -> Self {
        Ambient { n, coords: Coords::full(n) }
    }

    pub fn new(n: usize, coords: Coords) -> Result<Self> {
        if n > MAX_INDEX {
            return Err(Error::domain(format!("ambient bound {n} exceeds {MAX_INDEX}")));
        }
        if !coords.is_subset(Coords::full(n)) {
            return Err(Error::domain(format!("coordinates {coords:?} do not fit in 1..={n}")));
        }
        Ok(Ambient { n, coords })
    }

    /// Length of weight vectors.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_full(&self) -> bool {
        self.coords == Coords::full(self.n)
    }
}

/// Signed multiset of weights. Negative multiplicities appear only while
/// weight lists are being assembled; entries with multiplicity zero are dropped.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct WeightMultiset {
    entries: BTreeMap<TorusWeight, i64>,
}

impl WeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: TorusWeight, mult: i64) {
        if mult == 0 {
            return;
        }
        match self.entries.entry(w) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += mult;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(mult);
            }
        }
    }

    pub fn insert(&mut self, w: TorusWeight) {
        self.add(w, 1);
    }

    pub fn remove(&mut self, w: TorusWeight) {
        self.add(w, -1);
    }

    /// Multiset sum.
    pub fn merge(&mut self, other: &WeightMultiset) {
        for (w, &m) in &other.entries {
            self.add(w.clone(), m);
        }
    }

    /// Multiset difference, allowing negative results.
    pub fn subtract(&mut self, other: &WeightMultiset) {
        for (w, &m) in &other.entries {
            self.add(w.clone(), -m);
        }
    }

    pub fn subtract_times(&mut self, other: &WeightMultiset, times: i64) {
        for (w, &m) in &other.entries {
            self.add(w.clone(), -m * times);
        }
    }

    pub fn multiplicity(&self, w: &TorusWeight) -> i64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    /// Total signed multiplicity.
    pub fn len(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TorusWeight, i64)> + '_ {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&m| m >= 0)
    }

    pub fn zero_multiplicity(&self) -> i64 {
        self.entries.iter().filter(|(w, _)| w.is_zero()).map(|(_, &m)| m).sum()
    }

    /// Total multiplicity of the weights with the given sign.
    pub fn count_sign(&self, sign: Sign) -> i64 {
        self.entries.iter().filter(|(w, _)| w.sign() == sign).map(|(_, &m)| m).sum()
    }

    /// Each weight repeated by its multiplicity, in sorted order.
    pub fn expanded(&self) -> Result<Vec<TorusWeight>> {
        if !self.is_nonnegative() {
            return Err(Error::Consistency("cannot expand a multiset with negative entries".into()));
        }
        Ok(self
            .entries
            .iter()
            .flat_map(|(w, &m)| std::iter::repeat(w.clone()).take(m as usize))
            .collect())
    }
}

impl FromIterator<TorusWeight> for WeightMultiset {
    fn from_iter<I: IntoIterator<Item = TorusWeight>>(iter: I) -> Self {
        let mut set = WeightMultiset::new();
        for w in iter {
            set.insert(w);
        }
        set
    }
}

impl fmt::Debug for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(w, m)| (w.to_string(), m))).finish()
    }
}

/// Tangent weights of `G(k, V)` at the fixed point `p`:
/// `{alpha_b - alpha_a : a in p, b in V \ p}`.
pub fn grassmann_tangent_weights(p: GrassmannPoint, ambient: &Ambient) -> WeightMultiset {
    debug_assert!(p.is_subset(ambient.coords()));
    let outside = ambient.coords().difference(p);
    p.iter()
        .flat_map(|a| outside.iter().map(move |b| TorusWeight::difference(ambient.n(), b, a)))
        .collect()
}

/// `(s/d) alpha_bu + (t/d) alpha_bv` for `s + t = d`, listed by `s = 0..=d`.
pub(crate) fn line_points(n: usize, b_u: usize, b_v: usize, d: u32) -> impl Iterator<Item = TorusWeight> {
    let d = d as i64;
    (0..=d).map(move |s| {
        let mut w = TorusWeight::zero(n);
        w.add_coeff(b_u, Rational::new(s, d));
        w.add_coeff(b_v, Rational::new(d - s, d));
        w
    })
}

/// Weights of `H^0(C_e, f^* T_G)` for a degree-`d_e` cover of the fixed line
/// joining `A + {b_u}` and `A + {b_v}`.
///
/// With `R = V \ (A + {b_u, b_v})` the result is the union of
/// - `alpha_r - alpha_a` for `a` in `A`, `r` in `R`;
/// - `(s/d) alpha_bu + (t/d) alpha_bv - alpha_a` for `s + t = d`, `a` in `A`;
/// - `alpha_r - (s/d) alpha_bu - (t/d) alpha_bv` for `s + t = d`, `r` in `R`;
/// - `(c/d)(alpha_bv - alpha_bu)` for `c = -d..=d` (exactly one zero).
///
/// which has `k(dim V - k) + d * dim V` elements.
pub fn edge_h0_weights(
    a: Coords,
    b_u: usize,
    b_v: usize,
    d_e: u32,
    ambient: &Ambient,
) -> Result<WeightMultiset> {
    let coords = ambient.coords();
    if d_e == 0 {
        return Err(Error::domain("edge degree must be positive"));
    }
    if b_u == b_v || a.contains(b_u) || a.contains(b_v) {
        return Err(Error::domain(format!("index sets A={a:?}, b_u={b_u}, b_v={b_v} overlap")));
    }
    if !a.is_subset(coords) || !coords.contains(b_u) || !coords.contains(b_v) {
        return Err(Error::domain(format!(
            "line through A={a:?}, b_u={b_u}, b_v={b_v} is not in the ambient {coords:?}"
        )));
    }
    let n = ambient.n();
    let rest = coords.difference(a).without(b_u).without(b_v);
    let mut out = WeightMultiset::new();

    for x in a.iter() {
        for r in rest.iter() {
            out.insert(TorusWeight::difference(n, r, x));
        }
    }
    for p in line_points(n, b_u, b_v, d_e) {
        for x in a.iter() {
            out.insert(&p - &TorusWeight::alpha(n, x));
        }
        for r in rest.iter() {
            out.insert(&TorusWeight::alpha(n, r) - &p);
        }
    }
    let direction = TorusWeight::difference(n, b_v, b_u);
    let d = d_e as i64;
    for c in -d..=d {
        out.insert(direction.scale(Rational::new(c, d)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn w(coeffs: &[(i64, i64)]) -> TorusWeight {
        TorusWeight::from_coeffs(coeffs.iter().map(|&(a, b)| r(a, b)).collect())
    }

    fn pt(ix: &[usize]) -> GrassmannPoint {
        Coords::from_indices(ix.iter().copied()).unwrap()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(TorusWeight::difference(2, 2, 1).sign(), Sign::Positive);
        assert_eq!(TorusWeight::zero(3).sign(), Sign::Zero);
        assert_eq!(w(&[(1, 2), (1, 2), (-1, 1)]).sign(), Sign::Negative);
        assert_eq!(weight_sign(&w(&[(5, 1), (-1, 3), (0, 1)])), Sign::Negative);
    }

    #[test]
    fn weight_json_uses_reduced_fractions() {
        let x = w(&[(-2, 4), (1, 2), (0, 1)]);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"["-1/2","1/2","0"]"#);
        let back: TorusWeight = serde_json::from_str(r#"["-1/2","1/2","0"]"#).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<TorusWeight>(r#"["1/0x"]"#).is_err());
    }

    #[test]
    fn coords_basics() {
        let c = Coords::full(4);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(c.without(2).iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(c.max(), Some(4));
        assert_eq!(pt(&[3]).single(), Some(3));
        assert!(Coords::from_indices([0]).is_err());
        assert!(Ambient::new(3, pt(&[4])).is_err());
    }

    #[test]
    fn multiset_cancels_to_empty() {
        let mut m = WeightMultiset::new();
        let x = TorusWeight::difference(3, 3, 1);
        m.add(x.clone(), 2);
        m.add(x.clone(), -2);
        assert!(m.is_empty());
        m.remove(x.clone());
        assert!(!m.is_nonnegative());
        assert_eq!(m.multiplicity(&x), -1);
        assert!(m.expanded().is_err());
    }

    #[test]
    fn grassmann_tangent_examples() {
        let t = grassmann_tangent_weights(pt(&[1]), &Ambient::full(2));
        assert_eq!(t.expanded().unwrap(), vec![TorusWeight::difference(2, 2, 1)]);

        let t = grassmann_tangent_weights(pt(&[1, 2]), &Ambient::full(3));
        assert_eq!(t.len(), 2);
        assert_eq!(t.multiplicity(&TorusWeight::difference(3, 3, 1)), 1);
        assert_eq!(t.multiplicity(&TorusWeight::difference(3, 3, 2)), 1);
        assert_eq!(t.count_sign(Sign::Positive), 2);

        let t = grassmann_tangent_weights(pt(&[2]), &Ambient::full(2));
        let only = t.expanded().unwrap();
        assert_eq!(only, vec![TorusWeight::difference(2, 1, 2)]);
        assert_eq!(only[0].sign(), Sign::Negative);
    }

    #[test]
    fn edge_weights_double_cover_of_p1() {
        let got = edge_h0_weights(Coords::empty(), 1, 2, 2, &Ambient::full(2)).unwrap();
        let expected: WeightMultiset = [
            w(&[(-1, 1), (1, 1)]),
            w(&[(1, 1), (-1, 1)]),
            w(&[(-1, 2), (1, 2)]),
            w(&[(1, 2), (-1, 2)]),
            TorusWeight::zero(2),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 5);
    }

    #[test]
    fn edge_weights_line_in_p2() {
        let got = edge_h0_weights(Coords::empty(), 1, 2, 1, &Ambient::full(3)).unwrap();
        let expected: WeightMultiset = [
            TorusWeight::difference(3, 3, 1),
            TorusWeight::difference(3, 3, 2),
            TorusWeight::difference(3, 2, 1),
            TorusWeight::zero(3),
            TorusWeight::difference(3, 1, 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn edge_weights_line_in_dual_p2() {
        let got = edge_h0_weights(pt(&[1]), 2, 3, 1, &Ambient::full(3)).unwrap();
        let expected: WeightMultiset = [
            TorusWeight::difference(3, 2, 1),
            TorusWeight::difference(3, 3, 1),
            TorusWeight::difference(3, 3, 2),
            TorusWeight::zero(3),
            TorusWeight::difference(3, 2, 3),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn edge_weights_reject_overlaps() {
        let amb = Ambient::full(4);
        assert!(matches!(edge_h0_weights(pt(&[1]), 1, 2, 1, &amb), Err(Error::Domain(_))));
        assert!(matches!(edge_h0_weights(pt(&[1]), 2, 2, 1, &amb), Err(Error::Domain(_))));
        assert!(matches!(edge_h0_weights(pt(&[1]), 2, 5, 1, &amb), Err(Error::Domain(_))));
        assert!(matches!(edge_h0_weights(pt(&[1]), 2, 3, 0, &amb), Err(Error::Domain(_))));
    }

    #[test]
    fn edge_weight_count_symmetry_and_single_zero() {
        for n in 2..=8usize {
            let amb = Ambient::full(n);
            for k in 1..n {
                // A = {1..k-1}, line between k and n.
                let a = Coords::from_indices(1..k).unwrap();
                for d in 1..=3u32 {
                    let fwd = edge_h0_weights(a, k, n, d, &amb).unwrap();
                    let back = edge_h0_weights(a, n, k, d, &amb).unwrap();
                    assert_eq!(fwd.len() as usize, k * (n - k) + d as usize * n);
                    assert_eq!(fwd, back);
                    assert_eq!(fwd.zero_multiplicity(), 1);
                    assert!(fwd.is_nonnegative());
                }
            }
        }
    }
}

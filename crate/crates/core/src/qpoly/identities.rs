//! Exhaustive checks of the classical Gaussian binomial identities.
//!
//! Failures are reported as data: each identity records how many parameter
//! tuples it checked and the first counterexample, if any.

use std::fmt;

use serde::Serialize;

use super::{qbinomial_or_zero, QPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `C(n,k) = C(n,n-k)`
    Symmetry,
    /// `C(n,k) = C(n-1,k) + q^(n-k) C(n-1,k-1)`
    PascalHigh,
    /// `C(n,k) = q^k C(n-1,k) + C(n-1,k-1)`
    PascalLow,
    /// `sum_{j=0..a} q^j C(d+j,j) = C(d+a+1,a)`
    HockeyStick,
    /// `sum_{i+j=a} q^((c+1)j) C(c+i,i) C(d+j,j) = C(c+d+a+1,a)`
    Convolution,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::Symmetry,
        Identity::PascalHigh,
        Identity::PascalLow,
        Identity::HockeyStick,
        Identity::Convolution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Symmetry => "symmetry",
            Identity::PascalHigh => "pascal_high",
            Identity::PascalLow => "pascal_low",
            Identity::HockeyStick => "hockey_stick",
            Identity::Convolution => "convolution",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityOutcome {
    pub identity: Identity,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub n_max: usize,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    pub fn outcome(&self, identity: Identity) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.identity == identity)
    }
}

/// Gaussian binomials `C(n,k)` for `0 <= n <= n_max`, zero outside the triangle.
struct Table {
    rows: Vec<Vec<QPolynomial>>,
}

impl Table {
    fn new(n_max: usize) -> Self {
        let rows = (0..=n_max as i64)
            .map(|n| (0..=n).map(|k| qbinomial_or_zero(n, k)).collect())
            .collect();
        Table { rows }
    }

    fn get(&self, n: i64, k: i64) -> QPolynomial {
        if n < 0 || k < 0 || k > n {
            return QPolynomial::zero();
        }
        self.rows[n as usize][k as usize].clone()
    }
}

struct Tally {
    identity: Identity,
    cases: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(identity: Identity) -> Self {
        Tally { identity, cases: 0, counterexample: None }
    }

    fn check(&mut self, lhs: &QPolynomial, rhs: &QPolynomial, params: impl FnOnce() -> String) {
        self.cases += 1;
        if lhs != rhs && self.counterexample.is_none() {
            self.counterexample = Some(format!("{}: lhs {lhs} != rhs {rhs}", params()));
        }
    }

    fn finish(self) -> IdentityOutcome {
        IdentityOutcome {
            identity: self.identity,
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

/// Checks the five identities for every parameter tuple whose largest
/// binomial has top argument at most `n_max`.
pub fn verify_appendix_identities(n_max: usize) -> IdentityReport {
    let t = Table::new(n_max);
    let top = n_max as i64;
    let q = QPolynomial::q_pow;

    let mut sym = Tally::new(Identity::Symmetry);
    let mut high = Tally::new(Identity::PascalHigh);
    let mut low = Tally::new(Identity::PascalLow);
    for n in 0..=top {
        for k in 0..=n {
            sym.check(&t.get(n, k), &t.get(n, n - k), || format!("n={n}, k={k}"));
            if n >= 1 {
                let rhs = t.get(n - 1, k) + q(n - k) * t.get(n - 1, k - 1);
                high.check(&t.get(n, k), &rhs, || format!("n={n}, k={k}"));
                let rhs = q(k) * t.get(n - 1, k) + t.get(n - 1, k - 1);
                low.check(&t.get(n, k), &rhs, || format!("n={n}, k={k}"));
            }
        }
    }

    let mut hockey = Tally::new(Identity::HockeyStick);
    for d in 0..top {
        for a in 0..top - d {
            let lhs: QPolynomial = (0..=a).map(|j| q(j) * t.get(d + j, j)).sum();
            hockey.check(&lhs, &t.get(d + a + 1, a), || format!("d={d}, a={a}"));
        }
    }

    let mut conv = Tally::new(Identity::Convolution);
    for c in 0..top {
        for d in 0..top - c {
            for a in 0..top - c - d {
                let lhs: QPolynomial = (0..=a)
                    .map(|j| {
                        let i = a - j;
                        q((c + 1) * j) * t.get(c + i, i) * t.get(d + j, j)
                    })
                    .sum();
                conv.check(&lhs, &t.get(c + d + a + 1, a), || format!("c={c}, d={d}, a={a}"));
            }
        }
    }

    IdentityReport {
        n_max,
        outcomes: vec![sym.finish(), high.finish(), low.finish(), hockey.finish(), conv.finish()],
    }
}

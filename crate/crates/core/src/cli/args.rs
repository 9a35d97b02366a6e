use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fixedgraphs::MAX_DEGREE;
use crate::verify::Suite;
use crate::weights::MAX_INDEX;

#[derive(Debug, Parser)]
#[command(name = "grassmap", version, about = "Betti numbers of genus-0 stable maps to Grassmannians")]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Poincaré polynomial and Betti numbers of M_{0,0}(G(k,n), d).
    Betti(BettiArgs),
    /// Census of torus-fixed decorated trees.
    Graphs(GraphsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Loc,
    Closed,
    Both,
}

impl Method {
    /// Name used in JSON output and cache file names.
    pub fn label(self) -> &'static str {
        match self {
            Method::Loc => "localization",
            Method::Closed => "closedform",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Inclusive integer range written `a..b`, `a..=b` or just `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn single(x: usize) -> Self {
        Span { lo: x, hi: x }
    }

    pub fn iter(self) -> RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound `{t}`: {e}"));
        let span = match s.split_once("..") {
            Some((a, b)) => Span { lo: parse(a)?, hi: parse(b.strip_prefix('=').unwrap_or(b))? },
            None => Span::single(parse(s)?),
        };
        if span.lo > span.hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CellArgs {
    #[arg(short = 'k', conflicts_with = "k_range")]
    pub k: Option<usize>,
    #[arg(short = 'n', conflicts_with = "n_range")]
    pub n: Option<usize>,
    #[arg(short = 'd', conflicts_with = "d_range")]
    pub d: Option<usize>,
    /// Inclusive range of k, e.g. `1..3`.
    #[arg(long)]
    pub k_range: Option<Span>,
    #[arg(long)]
    pub n_range: Option<Span>,
    #[arg(long)]
    pub d_range: Option<Span>,
}

/// A validated `(k, n, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub d: usize,
    pub n: usize,
    pub k: usize,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{}) d={}", self.k, self.n, self.d)
    }
}

impl CellArgs {
    fn span(single: Option<usize>, range: Option<Span>, flag: &str) -> Result<Span> {
        single
            .map(Span::single)
            .or(range)
            .ok_or_else(|| Error::domain(format!("missing -{flag} or --{flag}-range")))
    }

    /// Cells with `1 <= k < n`, sorted by `(d, n, k)`. An explicit single
    /// cell outside that domain is an error; ranges just skip such cells.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let ks = Self::span(self.k, self.k_range, "k")?;
        let ns = Self::span(self.n, self.n_range, "n")?;
        let ds = Self::span(self.d, self.d_range, "d")?;
        if ds.lo == 0 {
            return Err(Error::domain("degree must be at least 1"));
        }
        if ds.hi > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(ds.hi));
        }
        if ns.hi > MAX_INDEX {
            return Err(Error::domain(format!("n = {} exceeds the supported {MAX_INDEX}", ns.hi)));
        }
        let mut cells = Vec::new();
        for d in ds.iter() {
            for n in ns.iter() {
                for k in ks.iter().filter(|&k| k >= 1 && k < n) {
                    cells.push(Cell { d, n, k });
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::domain(format!("no cell with 1 <= k < n in k={ks}, n={ns}")));
        }
        Ok(cells)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BettiArgs {
    #[command(flatten)]
    pub cells: CellArgs,
    #[arg(long, value_enum, default_value_t = Method::Loc)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for cached results.
    #[arg(long, env = "GRASSMAP_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Include every fixed point with its tangent weights. Skips the cache.
    #[arg(long)]
    pub reports: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GraphsArgs {
    #[command(flatten)]
    pub cells: CellArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print only the total number of fixed trees.
    #[arg(long, conflicts_with = "trees")]
    pub count: bool,
    /// Print every tree as JSON instead of the census.
    #[arg(long)]
    pub trees: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Suite to run (default: all).
    #[arg(long)]
    pub suite: Option<Suite>,
    /// Upper bound on n, replacing each suite's default.
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("2..5".parse::<Span>().unwrap(), Span { lo: 2, hi: 5 });
        assert_eq!("2..=5".parse::<Span>().unwrap(), Span { lo: 2, hi: 5 });
        assert_eq!("4".parse::<Span>().unwrap(), Span::single(4));
        assert!("5..2".parse::<Span>().is_err());
        assert!("a..2".parse::<Span>().is_err());
    }

    #[test]
    fn cell_validation() {
        let args = |k, n, d| CellArgs { k: Some(k), n: Some(n), d: Some(d), k_range: None, n_range: None, d_range: None };
        assert_eq!(args(1, 2, 1).cells().unwrap(), vec![Cell { k: 1, n: 2, d: 1 }]);
        assert!(matches!(args(2, 2, 1).cells(), Err(Error::Domain(_))));
        assert!(matches!(args(1, 2, 4).cells(), Err(Error::UnsupportedDegree(4))));
        assert!(matches!(args(1, 2, 0).cells(), Err(Error::Domain(_))));
        let sweep = CellArgs { k: None, n: None, d: Some(2), k_range: Some("1..3".parse().unwrap()), n_range: Some("2..3".parse().unwrap()), d_range: None };
        let got: Vec<_> = sweep.cells().unwrap().into_iter().map(|c| (c.k, c.n)).collect();
        assert_eq!(got, vec![(1, 2), (1, 3), (2, 3)]);
    }
}

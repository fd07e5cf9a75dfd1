//! Finite words over `Q`, the natural projection and approximate squares.

use std::fmt;

use crate::carpet::{shannon, CarpetSpec, EntropyProfile, Symbol};
use crate::error::{Error, Result};

/// A finite word `(a_1, b_1) ... (a_n, b_n)` of digits in `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicWord {
    symbols: Vec<Symbol>,
}

impl SymbolicWord {
    pub fn new(spec: &CarpetSpec, symbols: Vec<Symbol>) -> Result<Self> {
        for s in &symbols {
            if spec.index_of(*s).is_none() {
                return Err(Error::InvalidParams(format!(
                    "digit {}:{} is not in Q",
                    s.column, s.fiber
                )));
            }
        }
        Ok(Self { symbols })
    }

    /// Word from digit indices into [`CarpetSpec::symbols`].
    pub fn from_indices(spec: &CarpetSpec, idx: &[usize]) -> Self {
        Self {
            symbols: idx.iter().map(|&i| spec.symbols()[i]).collect(),
        }
    }

    /// Parses whitespace-separated `a:b` pairs.
    pub fn parse(spec: &CarpetSpec, text: &str) -> Result<Self> {
        let symbols = text
            .split_whitespace()
            .map(|tok| {
                let (a, b) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidParams(format!("bad digit `{tok}`")))?;
                let parse = |s: &str| {
                    s.parse::<u32>()
                        .map_err(|_| Error::InvalidParams(format!("bad digit `{tok}`")))
                };
                Ok(Symbol::new(parse(a)?, parse(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Digit indices into [`CarpetSpec::symbols`].
    pub fn indices(&self, spec: &CarpetSpec) -> Vec<usize> {
        self.symbols
            .iter()
            .map(|s| spec.index_of(*s).expect("validated word"))
            .collect()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Self { symbols }
    }

    /// `sigma^k`: drops the first `k` digits.
    pub fn shift(&self, k: usize) -> Self {
        Self {
            symbols: self.symbols[k.min(self.len())..].to_vec(),
        }
    }

    pub fn prefix(&self, k: usize) -> Self {
        Self {
            symbols: self.symbols[..k.min(self.len())].to_vec(),
        }
    }
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", s.column, s.fiber)?;
        }
        Ok(())
    }
}

/// `F_w(0, 0) = (sum (a_k - 1) N^-k, sum (b_k - 1) M^-k)`.
pub fn project(spec: &CarpetSpec, word: &SymbolicWord) -> (f64, f64) {
    let (n, m) = (spec.n() as f64, spec.m() as f64);
    word.symbols.iter().rev().fold((0.0, 0.0), |(x, y), s| {
        ((s.column as f64 - 1.0 + x) / n, (s.fiber as f64 - 1.0 + y) / m)
    })
}

/// The approximate square `B_n`: `n` column digits and `floor(n / tau)` full digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApproxSquare {
    pub n: usize,
    pub column_prefix: Vec<u32>,
    pub pair_prefix: Vec<Symbol>,
}

pub fn approx_square(spec: &CarpetSpec, word: &SymbolicWord, n: usize) -> Result<ApproxSquare> {
    if word.len() < n {
        return Err(Error::WordTooShort {
            len: word.len(),
            needed: n,
        });
    }
    let depth = spec.floor_div_tau(n);
    Ok(ApproxSquare {
        n,
        column_prefix: word.symbols[..n].iter().map(|s| s.column).collect(),
        pair_prefix: word.symbols[..depth].to_vec(),
    })
}

/// Entropy and row entropy of the empirical digit frequencies of `word`.
pub fn word_entropy(spec: &CarpetSpec, word: &SymbolicWord) -> EntropyProfile {
    let mut counts = vec![0usize; spec.d()];
    for i in word.indices(spec) {
        counts[i] += 1;
    }
    profile_of_counts(spec, &counts)
}

pub(crate) fn profile_of_counts(spec: &CarpetSpec, counts: &[usize]) -> EntropyProfile {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return EntropyProfile::new(0.0, 0.0);
    }
    let t = total as f64;
    let mut rows = vec![0usize; spec.r()];
    for (i, &c) in counts.iter().enumerate() {
        rows[spec.column_of(i)] += c;
    }
    EntropyProfile::new(
        shannon(counts.iter().map(|&c| c as f64 / t)),
        shannon(rows.iter().map(|&c| c as f64 / t)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &CarpetSpec, s: &str) -> SymbolicWord {
        SymbolicWord::parse(spec, s).unwrap()
    }

    #[test]
    fn parse_and_format_round_trip() {
        let spec = CarpetSpec::figure5();
        let word = w(&spec, "1:1 3:8  2:2");
        assert_eq!(word.to_string(), "1:1 3:8 2:2");
        assert!(SymbolicWord::parse(&spec, "2:3").is_err());
        assert!(SymbolicWord::parse(&spec, "2-1").is_err());
    }

    #[test]
    fn projection_examples() {
        let spec = CarpetSpec::full_torus(2, 4).unwrap();
        assert_eq!(project(&spec, &w(&spec, "1:1 1:1 1:1 1:1")), (0.0, 0.0));
        assert_eq!(project(&spec, &w(&spec, "2:3")), (0.5, 0.5));
        let prefix = w(&spec, "2:3 1:4");
        let (x0, y0) = project(&spec, &prefix);
        let (x, y) = project(&spec, &prefix.concat(&w(&spec, "2:4 2:4 1:2")));
        assert!(x >= x0 && x <= x0 + 0.25 && y >= y0 && y <= y0 + 1.0 / 16.0);
    }

    #[test]
    fn approx_square_depths() {
        let torus = CarpetSpec::full_torus(2, 4).unwrap();
        let word = w(&torus, "1:1 2:2 1:3 2:4 1:1");
        let sq = approx_square(&torus, &word, 4).unwrap();
        assert_eq!(sq.pair_prefix.len(), 2);
        assert_eq!(sq.column_prefix, vec![1, 2, 1, 2]);
        assert!(approx_square(&torus, &word, 5).is_ok());
        assert!(matches!(
            approx_square(&torus, &word, 6),
            Err(Error::WordTooShort { len: 5, needed: 6 })
        ));
        let spec = CarpetSpec::figure5();
        let long = SymbolicWord::from_indices(&spec, &[0; 10]);
        assert_eq!(approx_square(&spec, &long, 10).unwrap().pair_prefix.len(), 5);
    }

    #[test]
    fn word_entropy_examples() {
        let spec = CarpetSpec::figure5();
        let constant = SymbolicWord::from_indices(&spec, &[4; 7]);
        assert_eq!(word_entropy(&spec, &constant), EntropyProfile::new(0.0, 0.0));
        let all: Vec<usize> = (0..spec.d()).chain(0..spec.d()).collect();
        let p = word_entropy(&spec, &SymbolicWord::from_indices(&spec, &all));
        assert!((p.h - spec.log_d()).abs() < 1e-12);
        let rows = [5.0 / 15.0, 2.0 / 15.0, 8.0 / 15.0];
        assert!((p.h_r - shannon(rows)).abs() < 1e-12);
    }

    #[test]
    fn shift_and_prefix() {
        let spec = CarpetSpec::figure5();
        let word = w(&spec, "1:1 2:2 3:3");
        assert_eq!(word.shift(1).to_string(), "2:2 3:3");
        assert_eq!(word.prefix(1).to_string(), "1:1");
        assert!(word.shift(9).is_empty());
    }
}

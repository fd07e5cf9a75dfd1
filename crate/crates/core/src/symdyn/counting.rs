//! Exact word counts by type classes, and covering counts by approximate squares.

use std::collections::HashSet;

use crate::carpet::{shannon, CarpetSpec};
use crate::error::{Error, Result};
use crate::symdyn::word::{approx_square, SymbolicWord};

/// Default cap on the number of type classes enumerated.
pub const TYPE_CLASS_CAP: u64 = 100_000_000;
/// Slack on entropy comparisons between a type and the threshold.
const ENTROPY_SLACK: f64 = 1e-12;

fn binomial_f64(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Pascal's triangle up to row `n` in `u128`.
fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1u128; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

fn overflow(n: usize) -> Error {
    Error::ResourceLimit(format!("counts at length {n} overflow 128 bits"))
}

fn check_size(alphabet: usize, n: usize, cap: u64) -> Result<()> {
    if (alphabet as f64).ln() * n as f64 >= 127.0 * 2f64.ln() {
        return Err(overflow(n));
    }
    let classes = binomial_f64((n + alphabet - 1) as u64, (alphabet - 1) as u64);
    if classes > cap as f64 {
        return Err(Error::ResourceLimit(format!(
            "{classes:.3e} type classes at length {n}"
        )));
    }
    Ok(())
}

/// Visits every composition of `n` into `parts` nonnegative parts.
fn for_each_composition(n: usize, parts: usize, mut f: impl FnMut(&[usize])) {
    let mut c = vec![0usize; parts];
    fn rec(pos: usize, left: usize, c: &mut [usize], f: &mut dyn FnMut(&[usize])) {
        if pos + 1 == c.len() {
            c[pos] = left;
            f(c);
            return;
        }
        for k in 0..=left {
            c[pos] = k;
            rec(pos + 1, left - k, c, f);
        }
    }
    rec(0, n, &mut c, &mut f);
}

fn multinomial(tri: &[Vec<u128>], parts: &[usize]) -> u128 {
    let mut left: usize = parts.iter().sum();
    let mut acc = 1u128;
    for &k in parts {
        acc *= tri[left][k];
        left -= k;
    }
    acc
}

fn type_entropy(counts: &[usize], n: usize) -> f64 {
    shannon(counts.iter().map(|&c| c as f64 / n as f64))
}

/// `#{w in Q^n : h(w) <= h}`, summed over digit type classes.
pub fn count_entropy_bounded(spec: &CarpetSpec, n: usize, h: f64) -> Result<u128> {
    count_entropy_bounded_with_cap(spec, n, h, TYPE_CLASS_CAP)
}

pub fn count_entropy_bounded_with_cap(spec: &CarpetSpec, n: usize, h: f64, cap: u64) -> Result<u128> {
    if n == 0 {
        return Ok(1);
    }
    check_size(spec.d(), n, cap)?;
    let tri = pascal(n);
    let mut total = 0u128;
    for_each_composition(n, spec.d(), |c| {
        if type_entropy(c, n) <= h + ENTROPY_SLACK {
            total += multinomial(&tri, c);
        }
    });
    Ok(total)
}

/// `#{w in Q^n : h_r(w) >= z}`, summed over column type classes weighted by
/// `prod T_a^(r_a)` fiber choices.
pub fn count_rowentropy_above(spec: &CarpetSpec, n: usize, z: f64) -> Result<u128> {
    count_rowentropy_above_with_cap(spec, n, z, TYPE_CLASS_CAP)
}

pub fn count_rowentropy_above_with_cap(spec: &CarpetSpec, n: usize, z: f64, cap: u64) -> Result<u128> {
    if n == 0 {
        return Ok(if z <= ENTROPY_SLACK { 1 } else { 0 });
    }
    check_size(spec.d(), n, u64::MAX)?;
    check_size(spec.r(), n, cap)?;
    let tri = pascal(n);
    let counts: Vec<u128> = spec.counts().iter().map(|&t| t as u128).collect();
    let mut total = 0u128;
    for_each_composition(n, spec.r(), |c| {
        if type_entropy(c, n) >= z - ENTROPY_SLACK {
            let fibers: u128 = c
                .iter()
                .zip(&counts)
                .map(|(&k, &t)| t.pow(k as u32))
                .product();
            total += multinomial(&tri, c) * fibers;
        }
    });
    Ok(total)
}

/// `(n + 1)^D e^(n h)`, the method-of-types bound on [`count_entropy_bounded`].
pub fn types_bound(spec: &CarpetSpec, n: usize, h: f64) -> f64 {
    ((n + 1) as f64).powi(spec.d() as i32) * (n as f64 * h).exp()
}

fn common_length(words: &[SymbolicWord]) -> Result<usize> {
    let n = words.first().map_or(0, |w| w.len());
    for w in words {
        if w.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: w.len(),
            });
        }
    }
    Ok(n)
}

/// Number of distinct depth-`n` approximate squares met by words of length `n`.
pub fn cover_count(spec: &CarpetSpec, words: &[SymbolicWord]) -> Result<usize> {
    let n = common_length(words)?;
    let mut seen = HashSet::new();
    for w in words {
        seen.insert(approx_square(spec, w, n)?);
    }
    Ok(seen.len())
}

/// `#{pair prefixes to floor(n / tau)} * #{column words on (floor(n / tau), n]}`.
pub fn cover_bound(spec: &CarpetSpec, words: &[SymbolicWord]) -> Result<usize> {
    let n = common_length(words)?;
    let g = spec.floor_div_tau(n);
    let mut heads = HashSet::new();
    let mut tails = HashSet::new();
    for w in words {
        heads.insert(w.symbols()[..g].to_vec());
        tails.insert(w.symbols()[g..].iter().map(|s| s.column).collect::<Vec<_>>());
    }
    Ok(heads.len() * tails.len())
}

//! The entropy frontier `psi(z) = max{h(p) : h_r(p) = z}` and its inverse.
//!
//! A maximizer spreads each column's mass uniformly over its fibers, so
//! `psi(z) = z + max{sum_a p_a log T_a : H(p_row) = z}`. On the branch
//! `z >= log #{a : T_a = max T}` the row marginal is the exponential tilt
//! `p_a ∝ T_a^beta`, and the row entropy `H(beta)` is strictly decreasing in
//! `beta > 0` with `dH/dbeta = -beta Var_beta(log T)`. Along the tilt family
//!
//! ```text
//! psi'(z)  = 1 - 1/beta
//! psi''(z) = -1 / (beta^3 Var_beta(log T))
//! ```
//!
//! `beta = 1` gives the row marginal of `p_D`, `beta = 1/tau` that of `p_d`
//! and `beta = 0` that of `p_R`.

use crate::carpet::{CarpetSpec, ProbVector, SIMPLEX_TOL};
use crate::error::{Error, Result};

/// Upper end of the tilt bracket.
pub const MAX_TILT: f64 = 512.0;
/// Row-entropy slack used to declare the entropy constraint non-binding.
const NON_BINDING_TOL: f64 = 1e-10;

/// A point on the frontier together with its maximizing row marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    /// Row entropy.
    pub z: f64,
    /// Exponential tilt; `f64::INFINITY` on the non-binding branch.
    pub beta: f64,
    /// `psi(z)`.
    pub psi: f64,
    /// Row marginal of the maximizer.
    pub row_dist: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct TiltStats {
    /// `log R - H(beta)`.
    deficit: f64,
    /// `E_beta[log T] - mean(log T)`.
    mean: f64,
    var: f64,
}

/// Frontier evaluator for one carpet. Cheap to build; holds only per-column constants.
#[derive(Debug, Clone)]
pub struct Frontier {
    log_r: f64,
    log_d: f64,
    mean_log: f64,
    centered: Vec<f64>,
    max_abs_centered: f64,
    max_log: f64,
    log_max_multiplicity: f64,
    hr_max_entropy: f64,
    hr_max_dimension: f64,
}

impl Frontier {
    pub fn new(spec: &CarpetSpec) -> Self {
        let logs = spec.log_counts();
        let r = logs.len() as f64;
        let mean_log = logs.iter().sum::<f64>() / r;
        let centered: Vec<f64> = logs.iter().map(|l| l - mean_log).collect();
        let max_abs_centered = centered.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let max_log = spec.max_log_count();
        let max_count = *spec.counts().iter().max().expect("nonempty");
        let multiplicity = spec.counts().iter().filter(|&&t| t == max_count).count();
        let mut f = Self {
            log_r: spec.log_r(),
            log_d: spec.log_d(),
            mean_log,
            centered,
            max_abs_centered,
            max_log,
            log_max_multiplicity: (multiplicity as f64).ln(),
            hr_max_entropy: 0.0,
            hr_max_dimension: 0.0,
        };
        f.hr_max_entropy = f.log_r - f.stats(1.0).deficit;
        f.hr_max_dimension = f.log_r - f.stats(1.0 / spec.tau()).deficit;
        f
    }

    /// `h_r(p_D)`, the left end of the decreasing branch.
    pub fn hr_max_entropy(&self) -> f64 {
        self.hr_max_entropy
    }

    /// `h_r(p_d)`.
    pub fn hr_max_dimension(&self) -> f64 {
        self.hr_max_dimension
    }

    pub fn log_r(&self) -> f64 {
        self.log_r
    }

    /// `h(p_R) = log R + mean_a log T_a`.
    pub fn h_max_row_entropy(&self) -> f64 {
        self.log_r + self.mean_log
    }

    /// True when all `T_a` coincide and the branch collapses to a point.
    pub fn is_degenerate(&self) -> bool {
        self.max_abs_centered == 0.0
    }

    fn stats(&self, beta: f64) -> TiltStats {
        let r = self.centered.len() as f64;
        let mut mean = 0.0;
        let log_zr;
        if beta * self.max_abs_centered <= 0.5 {
            // expm1 keeps log(Z/R) accurate as beta -> 0
            let mut s = 0.0;
            for &c in &self.centered {
                s += (beta * c).exp_m1();
            }
            log_zr = (s / r).ln_1p();
            let denom = r + s;
            for &c in &self.centered {
                mean += (1.0 + (beta * c).exp_m1()) / denom * c;
            }
        } else {
            let smax = self
                .centered
                .iter()
                .map(|c| beta * c)
                .fold(f64::NEG_INFINITY, f64::max);
            let z: f64 = self.centered.iter().map(|c| (beta * c - smax).exp()).sum();
            log_zr = smax + z.ln() - r.ln();
            for &c in &self.centered {
                mean += (beta * c - smax).exp() / z * c;
            }
        }
        let var = self
            .weights(beta)
            .iter()
            .zip(&self.centered)
            .map(|(w, c)| w * (c - mean) * (c - mean))
            .sum();
        TiltStats {
            deficit: (beta * mean - log_zr).max(0.0),
            mean,
            var,
        }
    }

    fn weights(&self, beta: f64) -> Vec<f64> {
        let smax = self
            .centered
            .iter()
            .map(|c| beta * c)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut w: Vec<f64> = self.centered.iter().map(|c| (beta * c - smax).exp()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        w
    }

    /// Row weights `T_a^beta / sum T^beta`.
    pub fn tilted_rows(&self, beta: f64) -> Vec<f64> {
        self.weights(beta)
    }

    /// Row entropy of the tilted marginal.
    pub fn tilt_row_entropy(&self, beta: f64) -> f64 {
        self.log_r - self.stats(beta).deficit
    }

    fn check_branch_arg(&self, z: f64, lo: f64) -> Result<f64> {
        if !(z >= lo - SIMPLEX_TOL && z <= self.log_r + SIMPLEX_TOL) {
            return Err(Error::Domain {
                value: z,
                lo,
                hi: self.log_r,
            });
        }
        Ok(z.clamp(lo, self.log_r))
    }

    /// Tilt with `H(beta) = z`, or `None` when the constraint does not bind.
    fn solve_tilt(&self, z: f64) -> Option<(f64, TiltStats)> {
        if self.is_degenerate() || z <= self.log_max_multiplicity {
            return None;
        }
        let target = self.log_r - z;
        if target <= 0.0 {
            return Some((0.0, self.stats(0.0)));
        }
        let top = self.stats(MAX_TILT);
        if top.deficit < target - NON_BINDING_TOL {
            return None;
        }
        if top.deficit <= target {
            return Some((MAX_TILT, top));
        }
        let (mut lo, mut hi) = (0.0, MAX_TILT);
        let var0 = self.stats(0.0).var;
        let mut x = (2.0 * target / var0).sqrt().min(MAX_TILT * 0.5);
        let mut st = self.stats(x);
        for _ in 0..300 {
            let f = st.deficit - target;
            if f.abs() <= 4.0 * f64::EPSILON * target.max(1e-300) {
                break;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let slope = x * st.var;
            let newton = if slope > 0.0 { x - f / slope } else { f64::NAN };
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 1e-16 * x.max(1e-300) || hi - lo <= 1e-16 * hi {
                x = next;
                st = self.stats(x);
                break;
            }
            x = next;
            st = self.stats(x);
        }
        Some((x, st))
    }

    /// `psi(z)` for `z` in `[0, log R]`.
    pub fn psi(&self, z: f64) -> Result<f64> {
        let z = self.check_branch_arg(z, 0.0)?;
        Ok(match self.solve_tilt(z) {
            Some((_, st)) => z + self.mean_log + st.mean,
            None => z + self.max_log,
        })
    }

    /// `(psi, psi', psi'')` at `z`.
    pub fn psi_derivatives(&self, z: f64) -> Result<(f64, f64, f64)> {
        let z = self.check_branch_arg(z, 0.0)?;
        Ok(match self.solve_tilt(z) {
            Some((beta, st)) => {
                let psi = z + self.mean_log + st.mean;
                if beta <= 0.0 || st.var <= 0.0 {
                    (psi, f64::NEG_INFINITY, f64::NEG_INFINITY)
                } else {
                    (psi, 1.0 - 1.0 / beta, -1.0 / (beta * beta * beta * st.var))
                }
            }
            None => (z + self.max_log, 1.0, 0.0),
        })
    }

    /// Frontier point with its tilt and maximizing row marginal.
    pub fn point(&self, z: f64) -> Result<FrontierPoint> {
        let z = self.check_branch_arg(z, 0.0)?;
        Ok(match self.solve_tilt(z) {
            Some((beta, st)) => FrontierPoint {
                z,
                beta,
                psi: z + self.mean_log + st.mean,
                row_dist: self.weights(beta),
            },
            None => {
                let top: Vec<bool> = self
                    .centered
                    .iter()
                    .map(|c| c + self.mean_log == self.max_log)
                    .collect();
                let k = top.iter().filter(|&&t| t).count() as f64;
                FrontierPoint {
                    z,
                    beta: f64::INFINITY,
                    psi: z + self.max_log,
                    row_dist: top.iter().map(|&t| if t { 1.0 / k } else { 0.0 }).collect(),
                }
            }
        })
    }

    /// `phi(h) = max{h_r(p) : h(p) = h}` for `h` in `[0, log D]`.
    ///
    /// Three pieces: the diagonal `phi(h) = h` up to `log R`, the plateau
    /// `log R` up to `h(p_R)`, then the inverse of `psi` on its decreasing branch.
    pub fn phi(&self, h: f64) -> Result<f64> {
        if !(h >= -SIMPLEX_TOL && h <= self.log_d + SIMPLEX_TOL) {
            return Err(Error::Domain {
                value: h,
                lo: 0.0,
                hi: self.log_d,
            });
        }
        let h = h.clamp(0.0, self.log_d);
        if h <= self.log_r {
            return Ok(h);
        }
        if h <= self.h_max_row_entropy() || self.is_degenerate() {
            return Ok(self.log_r);
        }
        // psi is flat at its maximum, so rounding in h is amplified to sqrt(eps)
        if self.log_d - h <= 8.0 * f64::EPSILON * self.log_d {
            return Ok(self.hr_max_entropy);
        }
        // psi along the tilt family is increasing in beta on [0, 1]
        let psi_of = |st: &TiltStats| self.log_r - st.deficit + self.mean_log + st.mean;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut x = 0.5;
        for _ in 0..300 {
            let st = self.stats(x);
            let g = psi_of(&st) - h;
            if g.abs() <= 4.0 * f64::EPSILON * h {
                break;
            }
            if g < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 1e-16 {
                break;
            }
            let slope = st.var * (1.0 - x);
            let newton = if slope > 0.0 { x - g / slope } else { f64::NAN };
            x = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(self.log_r - self.stats(x).deficit)
    }

    /// The frontier maximizer with row entropy `z` in `[h_r(p_D), log R]`:
    /// tilted row marginal, uniform within each column.
    pub fn lift(&self, spec: &CarpetSpec, z: f64) -> Result<ProbVector> {
        let z = self.check_branch_arg(z, self.hr_max_entropy)?;
        let point = self.point(z)?;
        ProbVector::from_rows(spec, &point.row_dist)
    }
}

/// Row weights proportional to `T_a^beta`.
pub fn tilted_rows(spec: &CarpetSpec, beta: f64) -> Vec<f64> {
    Frontier::new(spec).tilted_rows(beta)
}

/// `psi(z) = max{h(p) : h_r(p) = z}` for `z` in `[0, log R]`.
pub fn psi(spec: &CarpetSpec, z: f64) -> Result<f64> {
    Frontier::new(spec).psi(z)
}

/// `phi(h) = max{h_r(p) : h(p) = h}` for `h` in `[0, log D]`.
pub fn phi(spec: &CarpetSpec, h: f64) -> Result<f64> {
    Frontier::new(spec).phi(h)
}

/// The frontier vector with row entropy `z` in `[h_r(p_D), log R]`.
pub fn lift(spec: &CarpetSpec, z: f64) -> Result<ProbVector> {
    Frontier::new(spec).lift(spec, z)
}

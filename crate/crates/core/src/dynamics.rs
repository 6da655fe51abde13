//! Orbit lengths `|φ^k(s)|`, dilatation estimates, and growth classification.
//!
//! Dilatation is estimated as the least-squares slope of `ln |φ^k(s)|`
//! against `k` over the tail of the orbit; polynomial degree as the slope of
//! `ln |φ^k(s)|` against `ln k`.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;

use crate::automorphism::{Automorphism, Verification};
use crate::diagram::{AutomorphismDiagram, CycleClassification, InvariantSubgraphResult};
use crate::error::{Error, Result};
use crate::graph::Vertex;

pub const DEFAULT_K_MAX: usize = 25;
pub const DEFAULT_LENGTH_CAP: usize = 10_000_000;
/// Estimates at or above this slope count as exponential growth.
pub const EXPONENTIAL_THRESHOLD: f64 = 0.05;
/// Horizon needed before an estimate may be called exponential.
pub const MIN_K_FOR_EXPONENTIAL: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitLengths {
    pub generator: Vertex,
    /// `lengths[k] = |φ^k(s)|`, starting from `lengths[0] = 1`.
    pub lengths: Vec<u64>,
    /// The orbit stopped early because the next length exceeded the cap.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorEstimate {
    pub lambda_hat: f64,
    pub window: Range<usize>,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilatationEstimate {
    pub per_generator: Vec<GeneratorEstimate>,
    pub lambda_phi_hat: f64,
    pub argmax_generator: Vertex,
}

impl DilatationEstimate {
    pub fn lambdas(&self) -> Vec<f64> {
        self.per_generator.iter().map(|e| e.lambda_hat).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeFit {
    pub degree_hat: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorGrowth {
    /// `d(s)` is acyclic: polynomial of degree at most the bound.
    PolynomialByTheorem { degree_bound: usize },
    ExponentialEstimate { lambda_hat: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// The whole diagram is acyclic.
    PolynomialByTheorem { degree_bound: usize },
    PerGeneratorMixed(Vec<GeneratorGrowth>),
    /// Cycles exist but no estimate clears the exponential threshold.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    UnverifiedAutomorphism,
    NotPureSupport,
    NotPureCyclic,
    NotSquare,
    Truncated(Vertex),
    ShortHorizon { k_max: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::UnverifiedAutomorphism => f.write_str("unverified-automorphism"),
            Warning::NotPureSupport => f.write_str("not-pure-support"),
            Warning::NotPureCyclic => f.write_str("not-pure-cyclic"),
            Warning::NotSquare => f.write_str("not-square"),
            Warning::Truncated(v) => write!(f, "truncated:{}", v.0),
            Warning::ShortHorizon { k_max } => write!(f, "short-horizon:{k_max}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub classification: Classification,
    pub estimates: DilatationEstimate,
    pub orbits: Vec<OrbitLengths>,
    pub degree_fits: Vec<Option<DegreeFit>>,
    pub cycles: CycleClassification,
    pub invariant_subgraph: Option<InvariantSubgraphResult>,
    pub warnings: Vec<Warning>,
}

fn orbit(phi: &Automorphism, s: Vertex, k_max: usize, cap: usize) -> OrbitLengths {
    let mut word = crate::word::Word::generator(s);
    let mut lengths = vec![1];
    let mut truncated = false;
    for _ in 0..k_max {
        match phi.apply_capped(&word, cap).expect("generator words are over Γ") {
            Some(next) => {
                lengths.push(next.len() as u64);
                word = next;
            }
            None => {
                truncated = true;
                break;
            }
        }
    }
    OrbitLengths {
        generator: s,
        lengths,
        truncated,
    }
}

/// Iterates every generator's orbit up to `k_max` steps. Orbits run in
/// parallel on the current rayon pool and come back in declaration order.
pub fn iterate_lengths(phi: &Automorphism, k_max: usize, length_cap: usize) -> Vec<OrbitLengths> {
    phi.graph()
        .vertices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| orbit(phi, s, k_max, length_cap))
        .collect()
}

/// Ordinary least squares; returns `(slope, intercept, rms residual)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

/// Last half of the recorded indices, at least three points.
fn tail_window(recorded: usize) -> Range<usize> {
    (recorded / 2).min(recorded.saturating_sub(3))..recorded
}

fn ln_length(len: u64) -> f64 {
    (len.max(1) as f64).ln()
}

pub fn estimate_generator(orbit: &OrbitLengths) -> Result<GeneratorEstimate> {
    let recorded = orbit.lengths.len();
    if recorded < 4 {
        return Err(Error::OrbitTooShort { needed: 4, got: recorded });
    }
    let window = tail_window(recorded);
    let xs: Vec<f64> = window.clone().map(|k| k as f64).collect();
    let ys: Vec<f64> = window.clone().map(|k| ln_length(orbit.lengths[k])).collect();
    let (slope, _, residual) = least_squares(&xs, &ys);
    Ok(GeneratorEstimate {
        lambda_hat: slope.max(0.0),
        window,
        residual,
    })
}

pub fn estimate_dilatation(orbits: &[OrbitLengths]) -> Result<DilatationEstimate> {
    let per_generator = orbits
        .iter()
        .map(estimate_generator)
        .collect::<Result<Vec<_>>>()?;
    let mut argmax = 0;
    for (i, e) in per_generator.iter().enumerate() {
        if e.lambda_hat > per_generator[argmax].lambda_hat {
            argmax = i;
        }
    }
    Ok(DilatationEstimate {
        lambda_phi_hat: per_generator.get(argmax).map_or(0.0, |e| e.lambda_hat),
        argmax_generator: orbits.get(argmax).map_or(Vertex(0), |o| o.generator),
        per_generator,
    })
}

/// Slope of `ln |φ^k(s)|` against `ln k` over the tail window, `k ≥ 2`.
pub fn fit_polynomial_degree(orbit: &OrbitLengths) -> Result<DegreeFit> {
    let recorded = orbit.lengths.len();
    if recorded < 5 {
        return Err(Error::OrbitTooShort { needed: 5, got: recorded });
    }
    let window = tail_window(recorded);
    let ks: Vec<usize> = window.filter(|&k| k >= 2).collect();
    let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
    let ys: Vec<f64> = ks.iter().map(|&k| ln_length(orbit.lengths[k])).collect();
    let (degree_hat, _, residual) = least_squares(&xs, &ys);
    Ok(DegreeFit {
        degree_hat,
        residual,
    })
}

/// Classifies growth: polynomial by theorem on acyclic (sub)diagrams, and by
/// empirical dilatation where cycles are present.
pub fn classify_growth(phi: &Automorphism, k_max: usize, length_cap: usize) -> Result<GrowthReport> {
    let graph = phi.graph();
    let mut warnings = Vec::new();
    if phi.verification() == Verification::Homomorphism {
        warnings.push(Warning::UnverifiedAutomorphism);
    }
    let purity = phi.purity();
    if !purity.support_clause() {
        warnings.push(Warning::NotPureSupport);
    }
    if !purity.cyclic_clause() {
        warnings.push(Warning::NotPureCyclic);
    }
    if !phi.is_square() {
        warnings.push(Warning::NotSquare);
    }

    let diagram = AutomorphismDiagram::build(phi);
    let cycles = diagram.cycle_analysis();
    let orbits = iterate_lengths(phi, k_max, length_cap);
    warnings.extend(
        orbits
            .iter()
            .filter(|o| o.truncated)
            .map(|o| Warning::Truncated(o.generator)),
    );
    let estimates = estimate_dilatation(&orbits)?;
    let degree_fits: Vec<Option<DegreeFit>> = orbits
        .iter()
        .map(|o| fit_polynomial_degree(o).ok())
        .collect();

    let mut invariant_subgraph = None;
    let classification = match diagram.terminal_partition() {
        Ok(partition) => Classification::PolynomialByTheorem {
            degree_bound: partition.height(),
        },
        Err(_) => {
            let per_generator = graph
                .vertices()
                .map(|s| {
                    let down = diagram.down_set(s)?;
                    Ok(match diagram.terminal_partition_within(&down) {
                        Ok(partition) => GeneratorGrowth::PolynomialByTheorem {
                            degree_bound: partition.height(),
                        },
                        Err(_) => GeneratorGrowth::ExponentialEstimate {
                            lambda_hat: estimates.per_generator[s.0].lambda_hat,
                        },
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if k_max < MIN_K_FOR_EXPONENTIAL {
                warnings.push(Warning::ShortHorizon { k_max });
            }
            // A slowly growing polynomial orbit can clear the slope threshold
            // at short horizons; require the log-linear fit to beat the log-log one.
            let exponential = k_max >= MIN_K_FOR_EXPONENTIAL
                && per_generator.iter().enumerate().any(|(i, g)| {
                    let estimate = &estimates.per_generator[i];
                    matches!(g, GeneratorGrowth::ExponentialEstimate { lambda_hat } if *lambda_hat >= EXPONENTIAL_THRESHOLD)
                        && degree_fits[i].is_none_or(|fit| estimate.residual <= fit.residual)
                });
            if exponential {
                let lambdas = estimates.lambdas();
                invariant_subgraph =
                    Some(diagram.invariant_subgraph(estimates.argmax_generator, Some(&lambdas))?);
                Classification::PerGeneratorMixed(per_generator)
            } else {
                Classification::Inconclusive
            }
        }
    };

    Ok(GrowthReport {
        classification,
        estimates,
        orbits,
        degree_fits,
        cycles,
        invariant_subgraph,
        warnings,
    })
}

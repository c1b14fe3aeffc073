//! Summary, diagnostics, histogram and study report files.

use std::io::Write;

use pr2d2ord_core::draws::{ChainStats, Diagnostics, ParamSummary, PosteriorDraws};
use pr2d2ord_core::elicit::Histogram;
use pr2d2ord_core::harness::MeanSe;
use serde::Serialize;

use crate::runner::CellResult;

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary<'a> {
    pub prior: &'a str,
    pub seed: u64,
    pub chains: usize,
    pub warmup: usize,
    pub draws_per_chain: usize,
    pub divergences: usize,
    pub divergence_rate: f64,
    pub high_divergence: bool,
    pub max_rhat: Option<f64>,
    pub min_ess_bulk: Option<f64>,
    pub chain_stats: &'a [ChainStats],
    pub parameters: Vec<ParamSummary>,
}

pub fn fit_summary(draws: &PosteriorDraws, parameters: Vec<ParamSummary>) -> FitSummary<'_> {
    let rh: Vec<f64> = parameters.iter().filter_map(|r| r.rhat).collect();
    let es: Vec<f64> = parameters.iter().filter_map(|r| r.ess_bulk).collect();
    FitSummary {
        prior: &draws.prior,
        seed: draws.seed,
        chains: draws.num_chains(),
        warmup: draws.warmup,
        draws_per_chain: draws.draws_per_chain(),
        divergences: draws.divergences(),
        divergence_rate: draws.divergence_rate(),
        high_divergence: draws.high_divergence(),
        max_rhat: (!rh.is_empty()).then(|| rh.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        min_ess_bulk: (!es.is_empty()).then(|| es.iter().copied().fold(f64::INFINITY, f64::min)),
        chain_stats: &draws.stats,
        parameters,
    }
}

pub fn write_diagnostics_csv<W: Write>(diag: &Diagnostics, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["parameter", "rhat", "ess_bulk"])?;
    for (name, d) in diag.names.iter().zip(&diag.params) {
        w.write_record([name.as_str(), &d.rhat.to_string(), &d.ess_bulk.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_histogram_csv<W: Write>(h: &Histogram, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lower", "upper", "count", "density", "target_density"])?;
    let total: usize = h.counts.iter().sum();
    let width = h.edges[1] - h.edges[0];
    for i in 0..h.counts.len() {
        let density = h.counts[i] as f64 / (total as f64 * width);
        w.write_record([
            h.edges[i].to_string(),
            h.edges[i + 1].to_string(),
            h.counts[i].to_string(),
            density.to_string(),
            h.target_pdf[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn pair(m: Option<MeanSe>) -> [String; 2] {
    match m {
        Some(m) => [m.mean.to_string(), m.se.to_string()],
        None => [String::new(), String::new()],
    }
}

pub const STUDY_HEADER: [&str; 22] = [
    "n", "p", "k", "coef", "cut", "prior", "replicates", "failed", "mse", "mse_se", "auc", "auc_se", "coverage",
    "coverage_se", "width", "width_se", "runtime_seconds", "max_rhat", "min_ess", "divergences", "lambda_rho_chi",
    "seed",
];

/// One row per cell.
pub fn write_study_csv<W: Write>(cells: &[CellResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STUDY_HEADER)?;
    for c in cells {
        let d = &c.design;
        let gig = match c.spec.as_ref().map(|s| &s.prior) {
            Some(pr2d2ord_core::posterior::Prior::Pr2d2ord { gig, .. }) => format!("{} {} {}", gig.lambda, gig.rho, gig.chi),
            _ => String::new(),
        };
        let r = &c.report;
        let mut rec = vec![
            d.n.to_string(),
            d.p.to_string(),
            d.k.to_string(),
            format!("{:?}", d.coef_scheme),
            format!("{:?}", d.cut_scheme),
            c.prior.label().to_string(),
            r.replicates.to_string(),
            r.failed.to_string(),
        ];
        for m in [r.mse, r.auc, r.coverage, r.width] {
            rec.extend(pair(m));
        }
        rec.extend([
            c.runtime_seconds.to_string(),
            c.max_rhat.to_string(),
            c.min_ess.to_string(),
            c.divergences.to_string(),
            gig,
            d.seed.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

//! CSV and JSON emission.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always produce identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::experiments::DecayRow;
use crate::fourier::{ProductSpec, ProductValue, SsvReport};
use crate::geometry::NeedleEstimate;
use crate::multiplicity::ExceptionalScan;

/// Opens `path` for writing, or stdout when `path` is `None`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_csv<W, R>(out: W, header: &[&str], rows: R) -> Result<()>
where
    W: Write,
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

/// `theta,measure`
pub fn write_theta_scan<W: Write>(out: W, thetas: &[f64], measures: &[f64]) -> Result<()> {
    write_csv(
        out,
        &["theta", "measure"],
        thetas.iter().zip(measures).map(|(t, m)| vec![s(t), s(m)]),
    )
}

/// `seed,samples,hits,estimate,stderr`
pub fn write_needle_rows<W: Write>(out: W, estimates: &[NeedleEstimate]) -> Result<()> {
    write_csv(
        out,
        &["seed", "samples", "hits", "estimate", "stderr"],
        estimates.iter().map(|e| {
            vec![
                s(e.seed),
                s(e.samples),
                s(e.hits),
                s(e.favard_estimate),
                s(e.standard_error),
            ]
        }),
    )
}

/// One row of the multiplicity scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityRow {
    pub theta: f64,
    pub n: usize,
    pub k: f64,
    pub measure_l: f64,
    pub measure_ak: f64,
    pub l2norm: f64,
    pub in_e: bool,
}

/// `theta,n,K,measure_L,measure_AK,l2norm,in_E`
pub fn write_multiplicity_rows<W: Write>(out: W, rows: &[MultiplicityRow]) -> Result<()> {
    write_csv(
        out,
        &[
            "theta",
            "n",
            "K",
            "measure_L",
            "measure_AK",
            "l2norm",
            "in_E",
        ],
        rows.iter().map(|r| {
            vec![
                s(r.theta),
                s(r.n),
                s(r.k),
                s(r.measure_l),
                s(r.measure_ak),
                s(r.l2norm),
                s(r.in_e),
            ]
        }),
    )
}

/// `theta,a_star,in_E`
pub fn write_exceptional_rows<W: Write>(out: W, scan: &ExceptionalScan) -> Result<()> {
    write_csv(
        out,
        &["theta", "a_star", "in_E"],
        scan.theta_grid
            .iter()
            .zip(&scan.a_star_measures)
            .zip(&scan.in_e)
            .map(|((t, a), e)| vec![s(t), s(a), s(e)]),
    )
}

/// `x,re,im,logmag`
pub fn write_product_trace<W: Write>(out: W, xs: &[f64], values: &[ProductValue]) -> Result<()> {
    write_csv(
        out,
        &["x", "re", "im", "logmag"],
        xs.iter()
            .zip(values)
            .map(|(x, v)| vec![s(x), s(v.value.re), s(v.value.im), s(v.log_magnitude)]),
    )
}

/// Evaluates `spec` at `points` equally spaced abscissae on `[lo, hi]`.
pub fn product_trace(
    spec: &ProductSpec,
    lo: f64,
    hi: f64,
    points: usize,
) -> (Vec<f64>, Vec<ProductValue>) {
    let xs: Vec<f64> = if points <= 1 {
        vec![lo]
    } else {
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let values = xs
        .iter()
        .map(|&x| crate::fourier::product_eval(spec, x))
        .collect();
    (xs, values)
}

/// `cell_lo,cell_hi,status`
pub fn write_ssv_cells<W: Write>(out: W, report: &SsvReport) -> Result<()> {
    write_csv(
        out,
        &["cell_lo", "cell_hi", "status"],
        report
            .cells
            .iter()
            .map(|c| vec![s(c.lo), s(c.hi), c.status.as_str().to_string()]),
    )
}

/// `n,nodes,favard`
pub fn write_decay_rows<W: Write>(out: W, rows: &[DecayRow]) -> Result<()> {
    write_csv(
        out,
        &["n", "nodes", "favard"],
        rows.iter().map(|r| vec![s(r.n), s(r.nodes), s(r.favard)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_scan_csv() {
        let mut buf = Vec::new();
        write_theta_scan(&mut buf, &[0.0, 0.5], &[1.25, 0.1]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "theta,measure\n0,1.25\n0.5,0.1\n"
        );
    }

    #[test]
    fn needle_csv() {
        let e = NeedleEstimate {
            favard_estimate: 0.5,
            standard_error: 0.01,
            hits: 25,
            samples: 100,
            seed: 3,
            offset_halfwidth: 1.0,
        };
        let mut buf = Vec::new();
        write_needle_rows(&mut buf, &[e]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "seed,samples,hits,estimate,stderr\n3,100,25,0.5,0.01\n"
        );
    }
}

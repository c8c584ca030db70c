//! Text artifacts: CSV tables with 12 significant digits and plain PGM
//! heatmaps. All output uses `\n` line endings.

use std::fmt::Write;

use crate::analysis::{CountMatrix, SweepTable, TransferDistribution};
use crate::walk::{DisplayMatrix, JsiMatrix, SinglePhotonDistribution};

/// Scientific notation with 12 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

fn grid_csv(
    corner: &str,
    rows: impl Iterator<Item = i64>,
    cols: &[i64],
    mut cell: impl FnMut(i64, i64) -> String,
) -> String {
    let mut out = String::from(corner);
    for k in cols {
        write!(out, ",{k}").unwrap();
    }
    out.push('\n');
    for j in rows {
        write!(out, "{j}").unwrap();
        for &k in cols {
            out.push(',');
            out.push_str(&cell(j, k));
        }
        out.push('\n');
    }
    out
}

/// Header row of idler indices `k`, first column of signal indices `j`.
pub fn jsi_csv(jsi: &JsiMatrix) -> String {
    let cols: Vec<i64> = (jsi.k_min..=jsi.k_max).collect();
    grid_csv("j\\k", jsi.j_min..=jsi.j_max, &cols, |j, k| {
        sci(jsi.get(j, k))
    })
}

pub fn display_csv(disp: &DisplayMatrix) -> String {
    let cols: Vec<i64> = (disp.axis_min..=disp.axis_max).collect();
    grid_csv("a\\b", disp.axis_min..=disp.axis_max, &cols, |a, b| {
        sci(disp.get(a, b))
    })
}

pub fn counts_csv(counts: &CountMatrix) -> String {
    let cols: Vec<i64> = (counts.k_min..=counts.k_max).collect();
    grid_csv("j\\k", counts.j_min..=counts.j_max, &cols, |j, k| {
        counts.get(j, k).to_string()
    })
}

pub fn single_photon_csv(dist: &SinglePhotonDistribution) -> String {
    let mut out = String::from("n,P\n");
    for n in dist.n_min..=dist.n_max {
        writeln!(out, "{n},{}", sci(dist.get(n))).unwrap();
    }
    out
}

pub fn transfer_csv(dist: &TransferDistribution) -> String {
    let mut out = String::from("u,P\n");
    for u in dist.u_min..=dist.u_max {
        writeln!(out, "{u},{}", sci(dist.get(u))).unwrap();
    }
    out
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = format!("{},mean,sigma", table.axis.label());
    if table.single_photon_sigma.is_some() {
        out.push_str(",single_photon_sigma");
    }
    out.push('\n');
    for i in 0..table.len() {
        write!(
            out,
            "{},{},{}",
            sci(table.values[i]),
            sci(table.mean[i]),
            sci(table.sigma[i])
        )
        .unwrap();
        if let Some(reference) = &table.single_photon_sigma {
            write!(out, ",{}", sci(reference[i])).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Plain (ASCII) 8-bit PGM, linear scale with the largest entry at 255.
/// Row `r` of the image is row `r` of `values`.
pub fn pgm(values: &[f64], rows: usize, cols: usize) -> String {
    assert_eq!(values.len(), rows * cols, "pgm: shape mismatch");
    let max = values.iter().copied().fold(0.0, f64::max);
    let mut out = format!("P2\n{cols} {rows}\n255\n");
    for row in values.chunks(cols.max(1)) {
        let line: Vec<String> = row
            .iter()
            .map(|&v| {
                let level = if max > 0.0 {
                    (255.0 * v.max(0.0) / max).round()
                } else {
                    0.0
                };
                (level as u8).to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn jsi_pgm(jsi: &JsiMatrix) -> String {
    pgm(&jsi.values, jsi.rows(), jsi.cols())
}

pub fn display_pgm(disp: &DisplayMatrix) -> String {
    pgm(&disp.values, disp.size(), disp.size())
}

pub fn counts_pgm(counts: &CountMatrix) -> String {
    let values: Vec<f64> = counts.counts.iter().map(|&c| c as f64).collect();
    pgm(&values, values.len() / counts.cols(), counts.cols())
}

//! Plot-ready series and fitted power-law overlays.

use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::fit::fit_exponent;
use crate::harness::sweep::{write_rows, ResultRow};

#[derive(Serialize)]
struct OverlayRow {
    p: f64,
    p_logical_fit: f64,
    exponent: f64,
}

/// Series name of a row: every column that is constant along a curve.
pub fn series_name(r: &ResultRow) -> String {
    let filter = r.site_filter.to_string().replace(['(', ')'], "");
    format!(
        "{}_d{}_{}_{}_r{}_init{}",
        r.variant, r.d, r.side_policy, filter, r.r, r.p_init_leak
    )
}

/// Writes one `<series>.csv` per curve and, where a fit succeeds, a
/// `<series>_fit.csv` overlay sampled on the same `p` grid. Returns the
/// written paths.
pub fn emit_plot_data(rows: &[ResultRow], dir: &Path) -> Result<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    std::fs::create_dir_all(dir)?;
    let mut names: Vec<String> = rows.iter().map(series_name).collect();
    names.sort();
    names.dedup();
    let mut written = Vec::new();
    for name in names {
        let mut series: Vec<ResultRow> = rows
            .iter()
            .filter(|r| series_name(r) == name)
            .cloned()
            .collect();
        series.sort_by(|a, b| a.p.total_cmp(&b.p));
        let path = dir.join(format!("{name}.csv"));
        write_rows(&series, std::fs::File::create(&path)?)?;
        written.push(path);
        match fit_exponent(&series, series[0].d, None) {
            Ok(fit) => {
                let path = dir.join(format!("{name}_fit.csv"));
                let mut w = csv::Writer::from_path(&path)?;
                for r in &series {
                    w.serialize(OverlayRow {
                        p: r.p,
                        p_logical_fit: fit.predict(r.p),
                        exponent: fit.exponent,
                    })?;
                }
                w.flush()?;
                written.push(path);
            }
            Err(e) => warn!("{name}: no overlay ({e})"),
        }
    }
    Ok(written)
}

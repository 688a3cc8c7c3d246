use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::ari::AriTable;
use crate::error::Result;
use crate::scale::ScaleTable;
use crate::stats::Summary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Open `path`, or stdout when `None`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json(value: &impl Serialize, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn summary_cells(s: Option<&Summary>) -> [String; 3] {
    match s {
        Some(s) => [opt(s.mean), opt(s.sd), s.count.to_string()],
        None => Default::default(),
    }
}

/// One row per (problem type, method), plot-ready.
pub fn write_ari_csv(table: &AriTable, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "k", "method", "mean_ari", "sd_ari", "count", "failed"])?;
    for r in &table.rows {
        let [mean, sd, count] = summary_cells(Some(&r.ari));
        out.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.method.name().to_owned(),
            mean,
            sd,
            count,
            r.failed.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_scale_csv(table: &ScaleTable, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let header = [
        "value",
        "n",
        "k",
        "d",
        "method",
        "variables",
        "formulation_mean",
        "formulation_sd",
        "formulation_count",
        "solve_mean",
        "solve_sd",
        "solve_count",
        "postprocess_mean",
        "postprocess_sd",
        "postprocess_count",
        "estimated_embed",
        "estimated_anneal",
        "total_mean",
        "total_sd",
        "count",
        "failed",
    ];
    out.write_record(header)?;
    for r in &table.rows {
        let mut rec = vec![
            r.value.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.d.to_string(),
            r.method.name().to_owned(),
            r.variables.map(|v| v.to_string()).unwrap_or_default(),
        ];
        for s in [&r.formulation, &r.solve, &r.postprocess] {
            rec.extend(summary_cells(s.as_ref()));
        }
        rec.push(opt(r.estimated_embed));
        rec.push(opt(r.estimated_anneal));
        rec.extend(summary_cells(Some(&r.total)));
        rec.push(r.failed.to_string());
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

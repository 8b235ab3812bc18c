//! CSV emission and gnuplot scripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::BerRecord;
use crate::error::Result;
use crate::rate::RateEstimate;

/// Column order of BER CSV files.
pub const BER_HEADER: [&str; 10] = [
    "ebn0_db",
    "ber",
    "fer",
    "frames",
    "bit_errors",
    "frame_errors",
    "iterations",
    "feedback",
    "csi",
    "mod_order",
];

/// Column order of rate CSV files.
pub const RATE_HEADER: [&str; 7] = [
    "mod_order",
    "csi",
    "es_over_n0_db",
    "eb_over_n0_db",
    "rate",
    "std_error",
    "trials",
];

fn write_records<S: Serialize, W: Write>(records: &[S], header: &[&str], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn read_records<D: DeserializeOwned, R: Read>(input: R) -> Result<Vec<D>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

pub fn write_ber_csv<W: Write>(records: &[BerRecord], out: W) -> Result<()> {
    write_records(records, &BER_HEADER, out)
}

pub fn write_rate_csv<W: Write>(records: &[RateEstimate], out: W) -> Result<()> {
    write_records(records, &RATE_HEADER, out)
}

/// Writes BER records with a header row, one record per line.
pub fn emit_csv(records: &[BerRecord], path: &Path) -> Result<()> {
    write_ber_csv(records, std::fs::File::create(path)?)
}

pub fn emit_rate_csv(records: &[RateEstimate], path: &Path) -> Result<()> {
    write_rate_csv(records, std::fs::File::create(path)?)
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<BerRecord>> {
    read_records(input)
}

pub fn parse_rate_csv<R: Read>(input: R) -> Result<Vec<RateEstimate>> {
    read_records(input)
}

/// Records to plot; the figure layout follows from the kind.
#[derive(Debug, Clone, Copy)]
pub enum PlotData<'a> {
    /// Log-scale BER against Eb/N0; BICM solid, BICM-ID dashed.
    Ber(&'a [BerRecord]),
    /// Rate against Eb/N0; CSI solid, no CSI dashed.
    Rate(&'a [RateEstimate]),
}

fn script_header(title: &str, xlabel: &str, ylabel: &str, output: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script generated by twrc");
    let _ = writeln!(s, "set terminal pngcairo size 900,700 enhanced");
    let _ = writeln!(s, "set output '{output}'");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key outside right");
    s
}

fn ber_script(records: &[BerRecord], output: &str) -> String {
    let mut series: BTreeMap<(usize, String, String, usize), Vec<&BerRecord>> = BTreeMap::new();
    for r in records {
        series
            .entry((r.mod_order, r.csi.to_string(), r.feedback.to_string(), r.iterations))
            .or_default()
            .push(r);
    }
    let mut s = script_header("Relay BER", "E_b/N_0 (dB)", "BER", output);
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set format y '10^{{%L}}'");
    let mut plots = Vec::new();
    for (i, ((m, csi, fb, it), pts)) in series.iter().enumerate() {
        let _ = writeln!(s, "$s{i} << EOD");
        for p in pts.iter().filter(|p| p.ber > 0.0) {
            let _ = writeln!(s, "{} {}", p.ebn0_db, p.ber);
        }
        let _ = writeln!(s, "EOD");
        let dash = if fb == "bicm-id" { 2 } else { 1 };
        plots.push(format!(
            "$s{i} using 1:2 with linespoints dashtype {dash} title 'M={m} {csi} {fb} {it} it'"
        ));
    }
    if plots.is_empty() {
        let _ = writeln!(s, "# no data");
    } else {
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    s
}

fn rate_script(records: &[RateEstimate], output: &str) -> String {
    let mut series: BTreeMap<(usize, String), Vec<&RateEstimate>> = BTreeMap::new();
    for r in records {
        series.entry((r.mod_order, r.csi.to_string())).or_default().push(r);
    }
    let mut s = script_header("Binary information rate", "E_b/N_0 (dB)", "Rate", output);
    let _ = writeln!(s, "set yrange [0:1]");
    let mut plots = Vec::new();
    for (i, ((m, csi), pts)) in series.iter().enumerate() {
        let _ = writeln!(s, "$s{i} << EOD");
        for p in pts.iter().filter(|p| p.eb_over_n0_db.is_finite()) {
            let _ = writeln!(s, "{} {}", p.eb_over_n0_db, p.rate);
        }
        let _ = writeln!(s, "EOD");
        let dash = if csi == "none" { 2 } else { 1 };
        plots.push(format!("$s{i} using 1:2 with lines dashtype {dash} title 'M={m} csi={csi}'"));
    }
    if plots.is_empty() {
        let _ = writeln!(s, "# no data");
    } else {
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    s
}

/// Writes a self-contained gnuplot script (data inlined) rendering to a PNG
/// next to `path`.
pub fn emit_plot_script(data: PlotData<'_>, path: &Path) -> Result<()> {
    let png = path.with_extension("png").display().to_string();
    let script = match data {
        PlotData::Ber(records) => ber_script(records, &png),
        PlotData::Rate(records) => rate_script(records, &png),
    };
    std::fs::write(path, script)?;
    Ok(())
}

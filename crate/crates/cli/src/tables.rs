use std::io::{self, Write};

use serde::Serialize;
use spinbranch::sbolattice::{composition_multiplicity, lattice_window};

use crate::{runtime, Failure, Format, TableArgs};

#[derive(Serialize)]
struct CompositionRow {
    n: usize,
    i: usize,
    j: usize,
    parity: u8,
    ff: usize,
    ft: usize,
    tf: usize,
    tt: usize,
    depth: usize,
    stabilized: bool,
}

#[derive(Serialize)]
struct LatticeRow {
    n: usize,
    lambda0: String,
    nu0: String,
    sector: char,
    depth: usize,
    dim: usize,
    stabilized: bool,
}

const COMPOSITION_HEADER: [&str; 10] = ["n", "i", "j", "parity", "ff", "ft", "tf", "tt", "depth", "stabilized"];
const LATTICE_HEADER: [&str; 7] = ["n", "lambda0", "nu0", "sector", "depth", "dim", "stabilized"];

fn emit<R: Serialize>(rows: &[R], header: &[&str], format: Format) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(runtime)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(header).map_err(runtime)?;
            for r in rows {
                w.serialize(r).map_err(runtime)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn composition(t: &TableArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    if t.imin <= t.imax && t.jmin <= t.jmax {
        let depth = t.depth.unwrap_or(12).max(t.imax + t.jmax + 3);
        for i in t.imin..=t.imax {
            for j in t.jmin..=t.jmax {
                for parity in 0..2u8 {
                    let b = composition_multiplicity(t.n, i, j, parity, depth).map_err(runtime)?;
                    rows.push(CompositionRow {
                        n: b.n,
                        i,
                        j,
                        parity,
                        ff: b.ff,
                        ft: b.ft,
                        tf: b.tf,
                        tt: b.tt,
                        depth,
                        stabilized: b.stabilized,
                    });
                }
            }
        }
    }
    emit(&rows, &COMPOSITION_HEADER, t.format)
}

pub fn lattice(t: &TableArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    if t.imin <= t.imax && t.jmin <= t.jmax {
        let depth = t.depth.unwrap_or(12);
        let a = t.imin as i64 - 1..=t.imax as i64 + 1;
        let b = t.jmin as i64 - 1..=t.jmax as i64 + 1;
        for g in lattice_window(t.n, a, b, depth).map_err(runtime)? {
            rows.push(LatticeRow {
                n: g.n,
                lambda0: g.lam0,
                nu0: g.nu0,
                sector: g.sector,
                depth: g.depth,
                dim: g.dim,
                stabilized: g.stabilized,
            });
        }
    }
    emit(&rows, &LATTICE_HEADER, t.format)
}

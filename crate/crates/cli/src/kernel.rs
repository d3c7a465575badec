use std::fmt::Write as _;
use std::io::Write;

use graphheat::{heat_kernel, simulate, HeatKernel, WalkEstimate, WeightedGraph};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Format, KernelArgs};
use crate::{check_times, console, emit, load_graph, sub_seed, CliError, Result};

/// Half-widths allowed between `p_hat` and `p` for the consistency verdict.
const MC_HALF_WIDTHS: f64 = 3.0;

/// Seed of the walks from `x` at time `t`.
fn walk_seed(root: u64, x: usize, t: f64) -> u64 {
    sub_seed(root, &format!("mc/{x}/{:016x}", t.to_bits()))
}

fn fmt_row(
    text: &mut String,
    format: Format,
    g: &WeightedGraph,
    k: &HeatKernel<'_>,
    x: usize,
    y: usize,
    mc: Option<(&WalkEstimate, bool)>,
) {
    let (t, p) = (k.t(), k.get(x, y));
    match (format, mc) {
        (Format::Csv, None) => writeln!(text, "{t},{},{},{p}", g.id(x), g.id(y)),
        (Format::Csv, Some((e, ok))) => {
            writeln!(text, "{t},{},{},{p},{},{},{ok}", g.id(x), g.id(y), e.p_hat(y), e.p_half_width(y))
        }
        (Format::Json, None) => writeln!(text, "{}", json!({ "t": t, "x": g.id(x), "y": g.id(y), "p": p })),
        (Format::Json, Some((e, ok))) => writeln!(
            text,
            "{}",
            json!({
                "t": t, "x": g.id(x), "y": g.id(y), "p": p,
                "p_hat": e.p_hat(y), "half_width": e.p_half_width(y), "consistent": ok,
            })
        ),
    }
    .unwrap();
}

pub(crate) fn run(a: &KernelArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    check_times(&a.times)?;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    if a.mc == Some(0) {
        return Err(CliError::Usage("--mc needs at least one walk".into()));
    }
    let g = load_graph(&a.graph)?;

    let mut text = String::new();
    if a.format == Format::Csv {
        let header = if a.mc.is_some() { "t,x,y,p,p_hat,half_width,consistent" } else { HeatKernel::CSV_HEADER };
        writeln!(text, "{header}").unwrap();
    }
    let (mut entries, mut consistent) = (0usize, 0usize);
    for &t in &a.times {
        let k = heat_kernel(&g, t, a.tol)?;
        let walks: Option<Vec<WalkEstimate>> = match a.mc {
            Some(n) => Some(
                (0..g.len())
                    .into_par_iter()
                    .map(|x| simulate(&g, x, t, n, walk_seed(a.seed, x, t)))
                    .collect::<graphheat::Result<_>>()?,
            ),
            None => None,
        };
        for x in 0..g.len() {
            for y in 0..g.len() {
                let mc = walks.as_ref().map(|w| {
                    let ok = w[x].consistent_with(y, k.get(x, y), MC_HALF_WIDTHS);
                    entries += 1;
                    consistent += ok as usize;
                    (&w[x], ok)
                });
                fmt_row(&mut text, a.format, &g, &k, x, y, mc);
            }
        }
    }
    emit(a.out.as_deref(), text.as_bytes(), stdout)?;

    if let Some(n) = a.mc {
        let log: &mut dyn Write = if a.out.is_some() { stdout } else { stderr };
        let verdict = if consistent == entries { "consistent" } else { "inconsistent" };
        console(
            log,
            format_args!(
                "monte carlo ({n} walks per source, seed {}): {consistent}/{entries} entries within {MC_HALF_WIDTHS} \
                 approximate 95% half-widths: {verdict}",
                a.seed
            ),
        );
    }
    Ok(())
}

use std::io::Write;

use graphheat::{generate, Family, GenMeasure};

use crate::args::{FamilyArg, GenerateArgs, MeasureArg};
use crate::{emit, CliError, Result};

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    v.ok_or_else(|| CliError::Usage(format!("--family {family} needs --{flag}")))
}

pub(crate) fn family(a: &GenerateArgs) -> Result<Family> {
    Ok(match a.family {
        FamilyArg::Path => Family::Path { n: need(a.n, "n", "path")? },
        FamilyArg::Cycle => Family::Cycle { n: need(a.n, "n", "cycle")? },
        FamilyArg::Complete => Family::Complete { n: need(a.n, "n", "complete")? },
        FamilyArg::Star => Family::Star { n: need(a.n, "n", "star")? },
        FamilyArg::Grid => Family::Grid { rows: need(a.rows, "rows", "grid")?, cols: need(a.cols, "cols", "grid")? },
        FamilyArg::Random => Family::Random {
            n: need(a.n, "n", "random")?,
            p: a.p,
            w_lo: a.wmin,
            w_hi: a.wmax,
            connected: a.connected,
            symmetric: !a.asymmetric,
        },
    })
}

pub(crate) fn run(a: &GenerateArgs, stdout: &mut dyn Write) -> Result<()> {
    if a.family != FamilyArg::Random && (a.asymmetric || a.connected) {
        return Err(CliError::Usage("--asymmetric and --connected only apply to --family random".into()));
    }
    let measure = match a.measure {
        MeasureArg::Unit => GenMeasure::Unit,
        MeasureArg::Degree => GenMeasure::Degree,
        MeasureArg::Explicit => GenMeasure::Explicit { lo: a.mu_min, hi: a.mu_max },
    };
    let g = generate(&family(a)?, measure, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = graphheat::io::graph_to_json(&g);
    text.push('\n');
    emit(a.out.as_deref(), text.as_bytes(), stdout)
}

use cqrac::stabilizer::sweep::{sweep_2q, write_csv};

use crate::run::{emit, CliResult, Format, RunConfig};
use crate::SweepArgs;

/// Below this the per-configuration minima are still noisy.
const RECOMMENDED_SAMPLES: u64 = 10_000;

pub fn run(args: SweepArgs) -> CliResult {
    let mut run = RunConfig::new("sweep2q", Format::Csv);
    run.seed = Some(args.seed);
    run.n = Some(2);
    run.budgets.insert("samples", args.samples);
    run.output("table", args.out.as_ref());
    if args.samples < RECOMMENDED_SAMPLES {
        eprintln!(
            "cqrac: warning: {} samples leave many configurations unobserved; use at least {RECOMMENDED_SAMPLES}",
            args.samples
        );
    }
    let rows = sweep_2q(args.samples, args.seed)?;
    let mut buf = run.comment("#").into_bytes();
    write_csv(&rows, &mut buf)?;
    emit(args.out.as_ref(), &String::from_utf8(buf).expect("ascii output"))
}

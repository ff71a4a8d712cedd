use cqrac::stabilizer::{emit_qasm, CircuitParams};

use crate::retrieve::parse_observable;
use crate::run::{emit, CliResult, Format, RunConfig};
use crate::CircuitArgs;

pub fn run(args: CircuitArgs) -> CliResult {
    let mut run = RunConfig::new("emit-circuit", Format::Json);
    run.output("qasm", args.out.as_ref());
    let params: CircuitParams = args.params.parse()?;
    run.n = Some(params.qubits());
    let measure = args
        .measure
        .as_deref()
        .map(|m| parse_observable(params.qubits(), m))
        .transpose()?;
    let qasm = emit_qasm(&params, measure.as_ref())?;
    emit(args.out.as_ref(), &(run.comment("//") + &qasm))
}

use std::fs::File;
use std::io::{BufWriter, Write};

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cqrac::encoder::data::{parse_bits, parse_hex, pi_over_4_bits};
use cqrac::encoder::{
    data_len, encode, CouplingScheme, EigenCatalog, EncodeOptions, Manifest, SelectOptions, Strategy,
};

use crate::run::{emit, read_text, usage, CliError, CliResult, Format, RunConfig};
use crate::EncodeArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyArg {
    Auto,
    Cover,
    Search,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Cover => Strategy::Cover,
            StrategyArg::Search => Strategy::Search,
        }
    }
}

fn load_data(args: &EncodeArgs, run: &mut RunConfig) -> CliResult<Vec<bool>> {
    let bits = if let Some(path) = &args.data {
        run.input("data", path);
        let text = read_text(path)?;
        let text = text.trim();
        if text.starts_with("0x") || text.starts_with("0X") {
            parse_hex(text)?
        } else {
            parse_bits(text)?
        }
    } else if let Some(b) = &args.bits {
        parse_bits(b)?
    } else if let Some(h) = &args.hex {
        parse_hex(h)?
    } else {
        pi_over_4_bits(args.pi4_bits.expect("clap enforces one input"))
    };
    Ok(bits)
}

pub fn run(args: EncodeArgs) -> CliResult {
    let mut run = RunConfig::new("encode", Format::Json);
    run.n = Some(args.n);
    run.seed = Some(args.seed);
    run.tolerance = Some(args.tolerance);
    run.budgets.insert("iterations", args.iterations);
    run.budgets.insert("restarts", args.restarts);
    run.budgets.insert("target_iterations", args.target_iterations);
    run.budgets.insert("cover_limit", args.cover_limit as u64);
    run.output("manifest", args.out.as_ref());
    run.output("audit", args.audit.as_ref());

    let expected = data_len(args.n)?;
    let data = load_data(&args, &mut run)?;
    if data.len() != expected {
        return Err(usage(format!(
            "{} qubits store exactly {expected} bits, got {}",
            args.n,
            data.len()
        )));
    }
    let scheme = if args.shuffle_coupling {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(u64::MAX);
        CouplingScheme::shuffled(args.n, &mut rng)?
    } else {
        CouplingScheme::alphabetical(args.n)?
    };
    let catalog = EigenCatalog::build(args.n)?;
    let opts = EncodeOptions {
        strategy: args.strategy.into(),
        cover_limit: args.cover_limit,
        target_iterations: args.target_iterations,
        select: SelectOptions {
            tolerance: args.tolerance,
            size: args.size,
            iterations: args.iterations,
            restarts: args.restarts,
            audit: args.audit.is_some(),
            ..SelectOptions::default()
        },
        seed: args.seed,
    };
    let enc = encode(&data, &scheme, &catalog, &opts)?;

    if let Some(path) = &args.audit {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(run.comment("#").as_bytes())?;
        writeln!(out, "step,cost_before,cost_after,branch,accepted")?;
        for a in &enc.selection.audit {
            writeln!(
                out,
                "{},{},{},{},{}",
                a.step, a.cost_before, a.cost_after, a.branch as u8, a.accepted as u8
            )?;
        }
        out.flush()?;
    }

    let manifest = Manifest::from_encoding(&enc, Some(run.to_value()));
    let mut text = manifest.to_json()?;
    text.push('\n');
    emit(args.out.as_ref(), &text)?;

    let decoded = enc.selection.target.decode(&scheme);
    if decoded != data {
        return Err(CliError::Verify("target signs do not decode to the data".into()));
    }
    let r = &manifest.report;
    eprintln!(
        "encoded {} bits into {} states: {}/{} observables matched, f_e = {:.4}, T = {}",
        data.len(),
        r.n_states,
        r.matched,
        r.total,
        r.f_e,
        r.steps
    );
    Ok(())
}

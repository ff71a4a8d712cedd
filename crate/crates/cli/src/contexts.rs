use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufWriter;

use serde::Serialize;

use cqrac::context::{all_contexts, brute_force_maximal_contexts, write_jsonl, ContextOrigin};

use crate::run::{emit, json_with_run, CliError, CliResult, Format, RunConfig};
use crate::ContextsArgs;

#[derive(Serialize)]
struct BruteForce {
    count: usize,
    matches: bool,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    count: usize,
    sizes: Vec<usize>,
    generated: usize,
    bipartite: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<BruteForce>,
}

pub fn run(args: ContextsArgs) -> CliResult {
    let mut run = RunConfig::new("contexts", args.format);
    run.n = Some(args.n);
    run.output("summary", args.out.as_ref());
    run.output("jsonl", args.jsonl.as_ref());

    let contexts = all_contexts(args.n)?;
    let sizes: BTreeSet<usize> = contexts.iter().map(|c| c.len()).collect();
    let bipartite = contexts
        .iter()
        .filter(|c| !matches!(c.origin(), ContextOrigin::Generated { .. }))
        .count();
    let brute_force = if args.verify_brute_force {
        let cliques = brute_force_maximal_contexts(args.n)?;
        let found: BTreeSet<Vec<_>> = contexts.iter().map(|c| c.member_set().into_iter().collect()).collect();
        let expected: BTreeSet<Vec<_>> = cliques.into_iter().collect();
        Some(BruteForce {
            count: expected.len(),
            matches: found == expected,
        })
    } else {
        None
    };
    if let Some(path) = &args.jsonl {
        write_jsonl(&contexts, BufWriter::new(File::create(path)?))?;
    }
    let summary = Summary {
        n: args.n,
        count: contexts.len(),
        sizes: sizes.into_iter().collect(),
        generated: contexts.len() - bipartite,
        bipartite,
        brute_force,
    };
    let text = match args.format {
        Format::Json => json_with_run(&run, &summary)?,
        Format::Csv => {
            let sizes: Vec<String> = summary.sizes.iter().map(|s| s.to_string()).collect();
            let (bf_count, bf_ok) = match &summary.brute_force {
                Some(b) => (b.count.to_string(), (b.matches as u8).to_string()),
                None => (String::new(), String::new()),
            };
            format!(
                "{}n,count,sizes,generated,bipartite,brute_force_count,brute_force_matches\n{},{},{},{},{},{},{}\n",
                run.comment("#"),
                summary.n,
                summary.count,
                sizes.join(";"),
                summary.generated,
                summary.bipartite,
                bf_count,
                bf_ok
            )
        }
    };
    emit(args.out.as_ref(), &text)?;
    if let Some(b) = &summary.brute_force {
        if !b.matches {
            return Err(CliError::Verify(format!(
                "construction gives {} contexts, clique enumeration {}",
                summary.count, b.count
            )));
        }
    }
    Ok(())
}

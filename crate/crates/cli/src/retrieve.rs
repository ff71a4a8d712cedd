use std::fs::File;
use std::io::{BufWriter, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cqrac::encoder::Manifest;
use cqrac::pauli::{Letter, PauliWord};
use cqrac::retrieval::{
    retrieve_bit, retrieve_context, retrieve_parity, RetrievalOutcome, TranscriptEvent,
};
use cqrac::Error;

use crate::run::{emit, json_with_run, read_text, usage, CliResult, Format, RunConfig};
use crate::RetrieveArgs;

/// Parses `ZX`, `Z1X2` (letter then 1-based qubit) or a base-3 index.
pub fn parse_observable(n: usize, text: &str) -> CliResult<PauliWord> {
    let text = text.trim();
    if !text.is_empty() && text.chars().all(|c| c.is_ascii_digit()) {
        let index: u64 = text.parse().map_err(|_| usage(format!("bad observable index {text:?}")))?;
        return Ok(PauliWord::from_index(n, index)?);
    }
    let word: PauliWord = if text.chars().any(|c| c.is_ascii_digit()) {
        let mut letters: Vec<Option<Letter>> = vec![None; n];
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = Letter::try_from(c)?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q: usize = digits
                .parse()
                .map_err(|_| usage(format!("letter {c} in {text:?} has no qubit number")))?;
            if q == 0 || q > n || letters[q - 1].is_some() {
                return Err(usage(format!("bad or repeated qubit {q} in {text:?}")));
            }
            letters[q - 1] = Some(letter);
        }
        let letters: Option<Vec<Letter>> = letters.into_iter().collect();
        let letters = letters.ok_or_else(|| usage(format!("{text:?} does not act on all {n} qubits")))?;
        PauliWord::new(&letters)?
    } else {
        text.parse()?
    };
    if word.len() != n {
        return Err(usage(format!("{text:?} has {} qubits, manifest has {n}", word.len())));
    }
    Ok(word)
}

/// Aggregate over trials of one observable's filter.
#[derive(Default, Serialize)]
struct ParityTally {
    observable: String,
    index: u64,
    target: i8,
    plus: u64,
    minus: u64,
    ties: u64,
    unresolved: u64,
    /// Fraction of resolved trials returning the target sign.
    match_rate: f64,
    mean_survivors: f64,
    mean_samples: f64,
    /// Mean unbiased survivors, the simulated noise.
    nu_estimate: f64,
}

impl ParityTally {
    fn new(word: &PauliWord, target: i8) -> Self {
        ParityTally {
            observable: word.to_string(),
            index: word.index(),
            target,
            ..ParityTally::default()
        }
    }

    fn add(&mut self, outcome: Result<RetrievalOutcome, Error>) -> CliResult {
        match outcome {
            Ok(o) => {
                if o.parity > 0 {
                    self.plus += 1;
                } else {
                    self.minus += 1;
                }
                self.ties += o.tie as u64;
                self.mean_survivors += o.survivors as f64;
                self.mean_samples += o.samples_used as f64;
                self.nu_estimate += o.unfiltered_unbiased as f64;
            }
            Err(Error::Unresolved(_)) => self.unresolved += 1,
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }

    fn finish(&mut self) {
        let resolved = (self.plus + self.minus) as f64;
        if resolved > 0.0 {
            let hits = if self.target > 0 { self.plus } else { self.minus };
            self.match_rate = hits as f64 / resolved;
            self.mean_survivors /= resolved;
            self.mean_samples /= resolved;
            self.nu_estimate /= resolved;
        }
    }
}

#[derive(Default, Serialize)]
struct BitTally {
    bit: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<bool>,
    ones: u64,
    zeros: u64,
    unresolved: u64,
    /// Both parities came from one sample stream.
    shared: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_rate: Option<f64>,
}

impl BitTally {
    fn finish(&mut self) {
        let resolved = self.ones + self.zeros;
        if let (Some(e), true) = (self.expected, resolved > 0) {
            let wrong = if e { self.zeros } else { self.ones };
            self.error_rate = Some(wrong as f64 / resolved as f64);
        }
    }

    fn majority(&self) -> char {
        match self.ones.cmp(&self.zeros) {
            std::cmp::Ordering::Greater => '1',
            std::cmp::Ordering::Less => '0',
            std::cmp::Ordering::Equal => '?',
        }
    }
}

#[derive(Serialize)]
struct Summary {
    manifest_n: usize,
    n_states: usize,
    steps: u32,
    trials: u64,
    sample_bound: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    parities: Vec<ParityTally>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    bits: Vec<BitTally>,
    /// Per-bit majority over trials; `?` marks an even split.
    #[serde(skip_serializing_if = "Option::is_none")]
    decoded: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bit_error_rate: Option<f64>,
}

struct Transcript {
    out: Option<BufWriter<File>>,
    ids: Vec<u64>,
}

impl Transcript {
    fn write(&mut self, trial: u64, words: &[PauliWord], events: &[TranscriptEvent]) -> CliResult {
        if let Some(out) = &mut self.out {
            for e in events {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    trial, words[e.member], e.step, self.ids[e.state], e.outcome, e.discarded as u8
                )?;
            }
        }
        Ok(())
    }
}

pub fn run(args: RetrieveArgs) -> CliResult {
    let mut run = RunConfig::new("retrieve", Format::Json);
    run.seed = Some(args.seed);
    run.input("manifest", &args.manifest);
    run.budgets.insert("trials", args.trials);
    run.output("summary", args.out.as_ref());
    run.output("transcript", args.transcript.as_ref());

    let manifest = Manifest::parse(&read_text(&args.manifest)?)?;
    let n = manifest.n;
    run.n = Some(n);
    let states = manifest.build_states()?;
    let scheme = manifest.scheme()?;
    let target = manifest.target_config()?;
    let data = manifest.data_bits()?;
    let steps = args.steps.unwrap_or(manifest.report.steps);
    if args.trials == 0 {
        return Err(usage("at least one trial is required"));
    }
    run.budgets.insert("steps", steps as u64);

    let mut transcript = Transcript {
        out: match &args.transcript {
            Some(p) => {
                let mut out = BufWriter::new(File::create(p)?);
                out.write_all(run.comment("#").as_bytes())?;
                writeln!(out, "trial,observable,step,state_id,outcome,discarded")?;
                Some(out)
            }
            None => None,
        },
        ids: manifest.states.iter().map(|s| s.id).collect(),
    };
    let logging = args.transcript.is_some();
    let rng_for = |trial: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(trial);
        rng
    };
    let sign_of = |w: &PauliWord| target.sign(w.index() as usize);

    let mut summary = Summary {
        manifest_n: n,
        n_states: states.len(),
        steps,
        trials: args.trials,
        sample_bound: steps as f64 * states.len() as f64,
        parities: Vec::new(),
        bits: Vec::new(),
        decoded: None,
        bit_error_rate: None,
    };

    if args.observable.is_some() || args.context.is_some() {
        let words: Vec<PauliWord> = match (&args.observable, &args.context) {
            (Some(o), _) => vec![parse_observable(n, o)?],
            (_, Some(c)) => c
                .split(',')
                .map(|w| parse_observable(n, w))
                .collect::<CliResult<_>>()?,
            _ => unreachable!(),
        };
        let mut tallies: Vec<ParityTally> = words.iter().map(|w| ParityTally::new(w, sign_of(w))).collect();
        for trial in 0..args.trials {
            let mut rng = rng_for(trial);
            let mut events = Vec::new();
            let log = logging.then_some(&mut events);
            if args.observable.is_some() {
                tallies[0].add(retrieve_parity(&states, &words[0], steps, &mut rng, log))?;
            } else {
                for (t, o) in tallies.iter_mut().zip(retrieve_context(&states, &words, steps, &mut rng, log)?) {
                    t.add(o)?;
                }
            }
            transcript.write(trial, &words, &events)?;
        }
        tallies.iter_mut().for_each(ParityTally::finish);
        summary.parities = tallies;
    } else {
        let bits: Vec<usize> = match args.bit {
            Some(b) if b >= scheme.len() => {
                return Err(usage(format!("bit {b} out of range (manifest stores {})", scheme.len())))
            }
            Some(b) => vec![b],
            None => (0..scheme.len()).collect(),
        };
        let mut tallies: Vec<BitTally> = bits
            .iter()
            .map(|&b| BitTally {
                bit: b,
                expected: data.as_ref().map(|d| d[b]),
                ..BitTally::default()
            })
            .collect();
        let couple_words: Vec<[PauliWord; 2]> = bits
            .iter()
            .map(|&b| {
                let (x, y) = scheme.couple(b);
                Ok([PauliWord::from_index(n, x as u64)?, PauliWord::from_index(n, y as u64)?])
            })
            .collect::<CliResult<_>>()?;
        for trial in 0..args.trials {
            let mut rng = rng_for(trial);
            for (tally, words) in tallies.iter_mut().zip(&couple_words) {
                let mut events = Vec::new();
                let log = logging.then_some(&mut events);
                match retrieve_bit(&states, &scheme, tally.bit, steps, &mut rng, log) {
                    Ok(o) => {
                        tally.shared = o.shared;
                        if o.bit {
                            tally.ones += 1;
                        } else {
                            tally.zeros += 1;
                        }
                    }
                    Err(Error::Unresolved(_)) => tally.unresolved += 1,
                    Err(e) => return Err(e.into()),
                }
                transcript.write(trial, words, &events)?;
            }
        }
        tallies.iter_mut().for_each(BitTally::finish);
        if args.all_bits {
            summary.decoded = Some(tallies.iter().map(BitTally::majority).collect());
            if data.is_some() {
                let (wrong, resolved) = tallies.iter().fold((0u64, 0u64), |(w, r), t| {
                    let e = t.expected.expect("data present");
                    (w + if e { t.zeros } else { t.ones }, r + t.ones + t.zeros)
                });
                summary.bit_error_rate = (resolved > 0).then(|| wrong as f64 / resolved as f64);
            }
        }
        summary.bits = tallies;
    }

    if let Some(out) = &mut transcript.out {
        out.flush()?;
    }
    emit(args.out.as_ref(), &json_with_run(&run, &summary)?)?;

    let unresolved: u64 = summary.parities.iter().map(|p| p.unresolved).sum::<u64>()
        + summary.bits.iter().map(|b| b.unresolved).sum::<u64>();
    let outcomes: u64 = summary.parities.len() as u64 * args.trials + summary.bits.len() as u64 * args.trials;
    if unresolved == outcomes {
        return Err(Error::Unresolved("no trial resolved a parity".into()).into());
    }
    Ok(())
}

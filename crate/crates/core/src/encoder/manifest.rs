//! JSON description of an encoded selection, the only thing handed from
//! the encoder to the retriever.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stabilizer::{CircuitParams, StabilizerState, DEFAULT_METRIC_CAP};

use super::coupling::{CouplingScheme, ParityConfiguration};
use super::data::{bits_to_string, parse_bits};
use super::select::SelectionReport;
use super::Encoding;

pub const MANIFEST_FORMAT: &str = "cqrac-manifest/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestState {
    pub id: u64,
    /// Circuit parameters as `ALPHA,BETA`.
    pub params: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestReport {
    pub n_states: usize,
    /// Observables whose majority matches the target (uncoupled one counts
    /// when it has a preference).
    pub matched: usize,
    pub total: usize,
    pub f_e: f64,
    pub f_e_coupled: f64,
    pub n_well_defined: f64,
    #[serde(rename = "T")]
    pub steps: u32,
    pub nu: f64,
    #[serde(rename = "S")]
    pub expected_samples: f64,
    pub sample_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: String,
    pub n: usize,
    /// Encoded bits as a `0`/`1` string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
    /// Observable order of a non-alphabetical coupling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Vec<u32>>,
    /// Target sign of every observable as a `+`/`-` string.
    pub target: String,
    /// Index of the uncoupled observable.
    pub wildcard: usize,
    pub states: Vec<ManifestState>,
    pub report: ManifestReport,
    /// Settings of the run that produced this manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<serde_json::Value>,
}

impl Manifest {
    pub fn from_encoding(enc: &Encoding, run: Option<serde_json::Value>) -> Self {
        let sel = &enc.selection;
        Manifest {
            format: MANIFEST_FORMAT.into(),
            n: enc.scheme.qubits(),
            data: Some(bits_to_string(&enc.data)),
            coupling: (!enc.scheme.is_alphabetical()).then(|| enc.scheme.order().to_vec()),
            target: sel.target.to_sign_string(),
            wildcard: sel.target.wildcard(),
            states: sel
                .states
                .iter()
                .map(|s| ManifestState {
                    id: s.id,
                    params: s.params.to_string(),
                })
                .collect(),
            report: ManifestReport {
                n_states: sel.states.len(),
                matched: sel.report.matched_all(),
                total: sel.report.total(),
                f_e: sel.report.f_e,
                f_e_coupled: sel.report.f_e_coupled,
                n_well_defined: enc.plan.n_well_defined,
                steps: enc.plan.steps,
                nu: enc.plan.nu,
                expected_samples: enc.plan.expected_samples,
                sample_bound: enc.plan.sample_bound,
            },
            run,
        }
    }

    /// Parses and checks internal consistency (sizes, parameters, and that
    /// the target decodes to the stored data).
    pub fn parse(text: &str) -> Result<Self> {
        let m: Manifest = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn scheme(&self) -> Result<CouplingScheme> {
        match &self.coupling {
            Some(order) => CouplingScheme::from_order(self.n, order.clone()),
            None => CouplingScheme::alphabetical(self.n),
        }
    }

    pub fn target_config(&self) -> Result<ParityConfiguration> {
        ParityConfiguration::parse_sign_string(&self.scheme()?, &self.target)
    }

    pub fn params(&self) -> Result<Vec<CircuitParams>> {
        self.states
            .iter()
            .map(|s| {
                let p: CircuitParams = s.params.parse()?;
                if p.qubits() != self.n {
                    return Err(Error::Parse(format!(
                        "state {} has {} qubits, manifest has {}",
                        s.id,
                        p.qubits(),
                        self.n
                    )));
                }
                Ok(p)
            })
            .collect()
    }

    pub fn build_states(&self) -> Result<Vec<StabilizerState>> {
        self.params()?.iter().map(StabilizerState::build).collect()
    }

    /// Report recomputed from the listed states and target.
    pub fn recompute_report(&self) -> Result<SelectionReport> {
        SelectionReport::compute(&self.build_states()?, &self.target_config()?, DEFAULT_METRIC_CAP)
    }

    pub fn data_bits(&self) -> Result<Option<Vec<bool>>> {
        self.data.as_deref().map(parse_bits).transpose()
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        if self.format != MANIFEST_FORMAT {
            return bad(format!("unknown manifest format {:?}", self.format));
        }
        if self.n == 0 || self.n % 2 == 1 {
            return bad(format!("manifest n must be even and positive (got {})", self.n));
        }
        let scheme = self.scheme().map_err(|e| Error::Parse(e.to_string()))?;
        let target = self.target_config()?;
        if target.wildcard() != self.wildcard {
            return bad(format!(
                "wildcard {} does not match the coupling ({})",
                self.wildcard,
                target.wildcard()
            ));
        }
        if self.states.is_empty() {
            return bad("manifest lists no states".into());
        }
        self.params()?;
        if let Some(bits) = self.data_bits()? {
            if target.decode(&scheme) != bits {
                return bad("target signs do not decode to the stored data".into());
            }
        }
        Ok(())
    }
}

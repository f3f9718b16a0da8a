//! Batch runs over generated instances, used by the self-test command and
//! the benchmarks. Each instance draws from its own random stream, so
//! results are identical in sequential and parallel mode.

use serde::{Deserialize, Serialize};

use crate::det::det_poly;
use crate::error::Result;
use crate::flow::{fe_certificate, FeOptions};
use crate::generate::{GenConfig, Generator, SeedKind};
use crate::parallel::{self, Execution};
use crate::pse::{build_pse, verify_pse};
use crate::shift::{verify_se, ShiftEquivalence};
use crate::smith::cokernel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub index: u64,
    pub lag: usize,
    pub sides: (usize, usize),
    pub witness_valid: bool,
    pub pse_pass: bool,
    pub invariants_pass: bool,
    pub fe_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InstanceOutcome {
    pub fn pass(&self) -> bool {
        self.witness_valid && self.pse_pass && self.invariants_pass && self.fe_pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub count: u64,
    pub pse_pass: u64,
    pub invariants_pass: u64,
    pub fe_pass: u64,
    pub failures: Vec<InstanceOutcome>,
    pub pass: bool,
}

/// `det(I - tA) = det(I - tB)` and isomorphic cokernels of `I - A`, `I - B`.
pub fn invariants_agree(se: &ShiftEquivalence) -> Result<bool> {
    let da = det_poly(&se.a.identity_minus_t()?)?;
    let db = det_poly(&se.b.identity_minus_t()?)?;
    let ga = cokernel(&se.a.identity_minus()?);
    let gb = cokernel(&se.b.identity_minus()?);
    Ok(da == db && ga == gb)
}

pub fn generate_instance(seed: u64, index: u64, kind: SeedKind) -> ShiftEquivalence {
    Generator::for_instance(seed, index, GenConfig::default()).random_se(kind)
}

fn run_instance(seed: u64, index: u64, with_fe: bool) -> InstanceOutcome {
    let se = generate_instance(seed, index, SeedKind::Any);
    let mut out = InstanceOutcome {
        index,
        lag: se.lag,
        sides: (se.a.nrows(), se.b.nrows()),
        witness_valid: false,
        pse_pass: false,
        invariants_pass: false,
        fe_pass: !with_fe,
        error: None,
    };
    let res = (|| -> Result<()> {
        out.witness_valid = verify_se(&se)?.pass;
        out.pse_pass = verify_pse(&build_pse(&se, 0)?)?.pass;
        out.invariants_pass = invariants_agree(&se)?;
        if with_fe {
            let cert = fe_certificate(&se, FeOptions::default());
            out.fe_pass = cert.overall;
            if let Some(f) = cert.failure {
                out.error = Some(format!("{:?}: {}", f.stage, f.message));
            }
        }
        Ok(())
    })();
    if let Err(e) = res {
        out.error = Some(e.to_string());
    }
    out
}

/// PSE construction and verification plus invariant comparison, optionally
/// with the full certificate pipeline, over `count` generated instances.
pub fn sweep(seed: u64, count: u64, exec: Execution, with_fe: bool) -> Vec<InstanceOutcome> {
    parallel::map(exec, (0..count).collect(), |i| run_instance(seed, i, with_fe))
}

pub fn selftest(seed: u64, count: u64, exec: Execution) -> SelftestReport {
    let outcomes = sweep(seed, count, exec, true);
    let tally = |f: fn(&InstanceOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    let failures: Vec<InstanceOutcome> = outcomes.iter().filter(|o| !o.pass()).cloned().collect();
    SelftestReport {
        seed,
        count,
        pse_pass: tally(|o| o.pse_pass),
        invariants_pass: tally(|o| o.invariants_pass),
        fe_pass: tally(|o| o.fe_pass),
        pass: failures.is_empty(),
        failures,
    }
}

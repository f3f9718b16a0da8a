use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use flowcert::batch::selftest;
use flowcert::components::{canonical_partition, irreducible_components, ComponentReport};
use flowcert::det::det_poly;
use flowcert::flow::{bowen_franks, fe_certificate, franks_decide, FeCertificate, FeOptions};
use flowcert::json::to_json_string;
use flowcert::parallel::{self, Execution};
use flowcert::poset::Partition;
use flowcert::pse::{build_partitioned_pse, build_pse, specialize_at_one, verify_pse};
use flowcert::shift::{eliminate_zero_diagonal_blocks, lift_se_to_partitioned, reduce_se, verify_se, ShiftEquivalence};
use flowcert::{Error, IntMatrix};

/// Exact shift equivalence and flow equivalence certificates for nonnegative
/// integer matrices.
///
/// Exit status: 0 pass, 1 fail, 2 input error. Reports go to standard
/// output as JSON, diagnostics to standard error.
#[derive(Parser)]
#[command(name = "flowcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible components, trivial indices and the component poset.
    Components { file: PathBuf },
    /// Cokernel of I - A, det(I - A) and the coefficients of det(I - tA).
    Invariants { file: PathBuf },
    /// Check the shift equivalence equations of a witness.
    VerifySe { file: PathBuf },
    /// Eliminate zero diagonal blocks of a matrix, or of both sides of a
    /// witness.
    Reduce { file: PathBuf },
    /// Build and verify the polynomial equation of a witness.
    Pse {
        file: PathBuf,
        /// Emit the integer matrices at t = 1 instead.
        #[arg(long)]
        at_one: bool,
        /// Split the lag as t^(lag - i) S and t^i R.
        #[arg(long, default_value_t = 0)]
        variant: usize,
        /// Reduce and lift the witness first and carry the component partition.
        #[arg(long)]
        partitioned: bool,
    },
    /// Full flow equivalence certificate for one or more witnesses.
    CertifyFe {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Write `<stem>.cert.json` per input here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also check positivity of the right multiplier on row cokernels.
        #[arg(long)]
        row_side: bool,
        #[arg(long, default_value_t = 0)]
        variant: usize,
    },
    /// Franks' decision for two irreducible non-permutation matrices.
    DecideFeIrreducible { a: PathBuf, b: PathBuf },
    /// Generate random witnesses and run every check on them.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long)]
        sequential: bool,
    },
    /// Recompute every verdict of a stored certificate.
    Recheck { file: PathBuf },
}

enum Verdict {
    Pass,
    Fail,
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn read_value(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A matrix object, or a bare array of rows.
fn read_matrix(path: &Path) -> anyhow::Result<IntMatrix> {
    let v = match read_value(path)? {
        rows @ Value::Array(_) => serde_json::json!({ "rows": rows }),
        v => v,
    };
    IntMatrix::from_json_value(&v).with_context(|| format!("matrix in {}", path.display()))
}

fn read_witness(path: &Path) -> anyhow::Result<ShiftEquivalence> {
    serde_json::from_value(read_value(path)?).with_context(|| format!("witness in {}", path.display()))
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    print!("{}", to_json_string(value)?);
    Ok(())
}

#[derive(Serialize)]
struct ComponentsOut {
    #[serde(flatten)]
    report: ComponentReport,
    /// Present when every index lies in a component.
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<Partition>,
}

fn components(file: &Path) -> anyhow::Result<Verdict> {
    let a = read_matrix(file)?;
    let report = irreducible_components(&a)?;
    let partition = match canonical_partition(&a) {
        Ok(p) => Some(p.row_partition),
        Err(Error::TrivialIndices(_)) => None,
        Err(e) => return Err(e.into()),
    };
    emit(&ComponentsOut { report, partition })?;
    Ok(Verdict::Pass)
}

#[derive(Serialize)]
struct InvariantsOut {
    #[serde(with = "flowcert::json::big_vec")]
    torsion: Vec<BigInt>,
    free_rank: usize,
    #[serde(with = "flowcert::json::big")]
    det: BigInt,
    #[serde(with = "flowcert::json::big_vec")]
    det_poly: Vec<BigInt>,
}

fn invariants(file: &Path) -> anyhow::Result<Verdict> {
    let a = read_matrix(file)?;
    if let Some((r, c)) = a.first_negative() {
        return Err(Error::NegativeEntry { row: r, col: c }.into());
    }
    let bf = bowen_franks(&a)?;
    let p = det_poly(&a.identity_minus_t()?)?;
    emit(&InvariantsOut {
        torsion: bf.group.torsion,
        free_rank: bf.group.free_rank,
        det: bf.determinant,
        det_poly: p.coeffs().to_vec(),
    })?;
    Ok(Verdict::Pass)
}

fn verify(file: &Path) -> anyhow::Result<Verdict> {
    let report = verify_se(&read_witness(file)?)?;
    emit(&report)?;
    Ok(report.pass.into())
}

fn reduce(file: &Path) -> anyhow::Result<Verdict> {
    let v = read_value(file)?;
    if v.get("A").is_some() {
        let se: ShiftEquivalence = serde_json::from_value(v).context("witness")?;
        emit(&reduce_se(&se)?)?;
        return Ok(Verdict::Pass);
    }
    let a = read_matrix(file)?;
    let (reduced, chain) = eliminate_zero_diagonal_blocks(&a)?;
    emit(&serde_json::json!({ "reduced": reduced, "chain": chain }))?;
    Ok(Verdict::Pass)
}

fn pse(file: &Path, at_one: bool, variant: usize, partitioned: bool) -> anyhow::Result<Verdict> {
    let se = read_witness(file)?;
    let cert = if partitioned {
        let lift = lift_se_to_partitioned(&reduce_se(&se)?.se)?;
        build_partitioned_pse(&lift.partitioned, variant)?
    } else {
        build_pse(&se, variant)?
    };
    if at_one {
        let data = specialize_at_one(&cert);
        let report = data.verify()?;
        emit(&serde_json::json!({ "at_one": data, "report": report }))?;
        return Ok(report.pass.into());
    }
    let report = verify_pse(&cert)?;
    emit(&serde_json::json!({ "certificate": cert, "report": report }))?;
    Ok(report.pass.into())
}

#[derive(Serialize)]
struct BatchEntry {
    input: PathBuf,
    output: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    overall: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Write through a temporary file in the same directory so readers never
/// see a partial certificate.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn certify_one(file: &Path, options: FeOptions) -> anyhow::Result<FeCertificate> {
    Ok(fe_certificate(&read_witness(file)?, options))
}

fn certify(files: &[PathBuf], out_dir: Option<&Path>, options: FeOptions) -> anyhow::Result<Verdict> {
    let Some(dir) = out_dir else {
        if let [file] = files {
            let cert = certify_one(file, options)?;
            if let Some(f) = &cert.failure {
                eprintln!("stage {:?} failed: {}", f.stage, f.message);
            }
            emit(&cert)?;
            return Ok(cert.overall.into());
        }
        return Err(anyhow!("several inputs need --out-dir"));
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let entries = parallel::map(Execution::Parallel, files.to_vec(), |file| {
        let stem = file.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned());
        let output = dir.join(format!("{stem}.cert.json"));
        let res = certify_one(&file, options)
            .and_then(|cert| {
                write_atomic(&output, &to_json_string(&cert)?)?;
                Ok(cert.overall)
            });
        match res {
            Ok(overall) => BatchEntry {
                input: file,
                output,
                overall: Some(overall),
                error: None,
            },
            Err(e) => BatchEntry {
                input: file,
                output,
                overall: None,
                error: Some(format!("{e:#}")),
            },
        }
    });
    emit(&serde_json::json!({ "results": entries }))?;
    if let Some(e) = entries.iter().find_map(|e| e.error.as_ref()) {
        return Err(anyhow!("input error: {e}"));
    }
    Ok(entries.iter().all(|e| e.overall == Some(true)).into())
}

fn decide(a: &Path, b: &Path) -> anyhow::Result<Verdict> {
    let verdict = franks_decide(&read_matrix(a)?, &read_matrix(b)?)?;
    emit(&verdict)?;
    Ok(verdict.flow_equivalent.into())
}

fn self_test(seed: u64, count: u64, sequential: bool) -> anyhow::Result<Verdict> {
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let report = selftest(seed, count, exec);
    emit(&report)?;
    Ok(report.pass.into())
}

#[derive(Serialize)]
struct RecheckOut {
    recorded: bool,
    recomputed: bool,
}

fn recheck(file: &Path) -> anyhow::Result<Verdict> {
    let cert: FeCertificate =
        serde_json::from_value(read_value(file)?).with_context(|| format!("certificate in {}", file.display()))?;
    let recomputed = cert.reverify()?;
    emit(&RecheckOut {
        recorded: cert.overall,
        recomputed,
    })?;
    Ok((cert.overall && recomputed).into())
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    match cli.command {
        Command::Components { file } => components(&file),
        Command::Invariants { file } => invariants(&file),
        Command::VerifySe { file } => verify(&file),
        Command::Reduce { file } => reduce(&file),
        Command::Pse {
            file,
            at_one,
            variant,
            partitioned,
        } => pse(&file, at_one, variant, partitioned),
        Command::CertifyFe {
            files,
            out_dir,
            row_side,
            variant,
        } => certify(
            &files,
            out_dir.as_deref(),
            FeOptions {
                row_side_check: row_side,
                variant,
            },
        ),
        Command::DecideFeIrreducible { a, b } => decide(&a, &b),
        Command::Selftest {
            seed,
            count,
            sequential,
        } => self_test(seed, count, sequential),
        Command::Recheck { file } => recheck(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            // Internal consistency failures are verdicts against the
            // implementation, not the input.
            let internal = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Internal(_))));
            ExitCode::from(if internal { 1 } else { 2 })
        }
    }
}

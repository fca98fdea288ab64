//! Command-line front end. Every command prints one JSON record; all
//! numbers are exact strings.
//!
//! Exit status is 0 on success, 1 when a library operation reports an error
//! (the record then carries the error name), and 2 on malformed arguments
//! or input files.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::higgs::{
    cone_equations, higgs_basis_even, higgs_basis_odd, hitchin, validate_higgs_even,
    validate_higgs_odd, HiggsField,
};
use crate::parabolic::{
    destabilizers_even, destabilizers_odd, is_stable_even, is_stable_odd, moduli_point_even,
    moduli_point_odd, FlagConfig, MarkedCurve,
};
use crate::scalar::{parse_rational, serde_rational, GaussianRational, ProjectivePoint};
use crate::strata::{cone_trace_n4, zero_partition, QuadDiff};
use crate::verify::run_all;
use crate::weights::{check_chamber, check_su2, sample_even, sample_odd, ParabolicWeights, Parity};

#[derive(Parser, Debug)]
#[command(name = "parmod", version, about = "Exact computations with rank-2 parabolic bundles on the sphere")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parabolic weights and the optimum chambers.
    Weights {
        #[command(subcommand)]
        action: WeightsAction,
    },
    /// Stability of a flag configuration.
    Stability {
        #[command(subcommand)]
        action: StabilityAction,
    },
    /// Coordinates on the moduli space.
    Moduli {
        #[command(subcommand)]
        action: ModuliAction,
    },
    /// Parabolic Higgs fields.
    Higgs {
        #[command(subcommand)]
        action: HiggsAction,
    },
    /// Quadratic differentials and their strata.
    Strata {
        #[command(subcommand)]
        action: StrataAction,
    },
    /// Randomized self-checks.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
}

#[derive(Subcommand, Debug)]
enum WeightsAction {
    Validate(Inputs),
    Chamber(Inputs),
    Sample(SampleArgs),
    Su2(Inputs),
}

#[derive(Subcommand, Debug)]
enum StabilityAction {
    Check(Inputs),
}

#[derive(Subcommand, Debug)]
enum ModuliAction {
    Point(Inputs),
}

#[derive(Subcommand, Debug)]
enum HiggsAction {
    Validate(Inputs),
    Basis(Inputs),
    Hitchin(Inputs),
    Cone(Inputs),
}

#[derive(Subcommand, Debug)]
enum StrataAction {
    Classify(Inputs),
    ConeTrace(ConeTraceArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyAction {
    All(VerifyArgs),
}

// Aliases keep clap from treating the comma-separated lists as repeated
// flags.
type PointList = Vec<ProjectivePoint>;
type ScalarList = Vec<GaussianRational>;
type PairList = Vec<(BigRational, BigRational)>;

/// Data can come from a JSON file (`--input`, `-` for stdin) or inline;
/// inline values take precedence.
#[derive(Args, Debug, Default)]
struct Inputs {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Marked points, e.g. `2,1,0,inf`.
    #[arg(long, value_parser = parse_points)]
    curve: Option<PointList>,
    /// Flag lines, e.g. `5,0,0,inf`.
    #[arg(long, value_parser = parse_points)]
    flags: Option<PointList>,
    /// Weight pairs, e.g. `0:1/2,1/4:3/4,...`.
    #[arg(long, value_parser = parse_pairs)]
    weights: Option<PairList>,
    /// Residue scales of a Higgs field.
    #[arg(long = "c", value_parser = parse_scalars)]
    c: Option<ScalarList>,
    /// Coordinates of a quadratic differential.
    #[arg(long, value_parser = parse_scalars)]
    coeffs: Option<ScalarList>,
    #[arg(long, value_parser = parse_parity)]
    parity: Option<Parity>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, value_parser = parse_parity)]
    parity: Parity,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_rational_arg)]
    eps: BigRational,
    /// Required for even parity.
    #[arg(long, value_parser = parse_rational_arg)]
    delta: Option<BigRational>,
}

#[derive(Args, Debug)]
struct ConeTraceArgs {
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    inputs: Inputs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_parity(s: &str) -> Result<Parity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_scalars(s: &str) -> Result<ScalarList, String> {
    split_list(s)
        .map(|t| t.parse().map_err(|e: Error| e.to_string()))
        .collect()
}

fn parse_points(s: &str) -> Result<PointList, String> {
    split_list(s)
        .map(|t| t.parse().map_err(|e: Error| e.to_string()))
        .collect()
}

fn parse_pairs(s: &str) -> Result<PairList, String> {
    split_list(s)
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| format!("weight pair {t:?} is not of the form a1:a2"))?;
            Ok((parse_rational_arg(a.trim())?, parse_rational_arg(b.trim())?))
        })
        .collect()
}

/// The result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error, Option<Value>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e, None)
    }
}

type CmdResult = std::result::Result<Value, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (code, record, stderr) = match dispatch(&cli.command) {
        Ok(record) => {
            let failed = record.get("failures").and_then(Value::as_u64).is_some_and(|f| f > 0);
            (i32::from(failed), record, String::new())
        }
        Err(Failure::Usage(msg)) => {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
        Err(Failure::Domain(e, extra)) => {
            let mut record = json!({ "error": e.name(), "message": e.to_string() });
            if let (Some(Value::Object(extra)), Value::Object(map)) = (extra, &mut record) {
                map.extend(extra);
            }
            (1, record, format!("{}: {}\n", e.name(), e))
        }
    };
    let mut text = serde_json::to_string_pretty(&record).expect("json");
    text.push('\n');
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &text) {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: cannot write --output {}: {e}\n", path.display()),
            };
        }
        text = String::new();
    }
    Outcome { code, stdout: text, stderr }
}

fn dispatch(command: &Command) -> CmdResult {
    match command {
        Command::Weights { action } => match action {
            WeightsAction::Validate(i) => {
                let w = Loaded::from(i)?.weights()?;
                Ok(json!({ "valid": true, "degree": w.degree(), "k": w.k(), "parity": w.parity() }))
            }
            WeightsAction::Chamber(i) => {
                let w = Loaded::from(i)?.weights()?;
                let report = check_chamber(&w);
                Ok(json!({
                    "degree": w.degree(),
                    "k": w.k(),
                    "parity": w.parity(),
                    "in_chamber": report.in_chamber,
                    "violations": report.violations,
                }))
            }
            WeightsAction::Sample(a) => {
                let w = match a.parity {
                    Parity::Even => {
                        let delta = a
                            .delta
                            .as_ref()
                            .ok_or_else(|| Failure::Usage("--delta is required for even parity".into()))?;
                        sample_even(a.n, a.k, &a.eps, delta)?
                    }
                    Parity::Odd => sample_odd(a.n, a.k, &a.eps)?,
                };
                let mut record = to_value(&w);
                record["k"] = json!(w.k());
                record["parity"] = to_value(&w.parity());
                Ok(record)
            }
            WeightsAction::Su2(i) => {
                let w = Loaded::from(i)?.weights()?;
                Ok(json!({ "su2": check_su2(&w) }))
            }
        },
        Command::Stability { action: StabilityAction::Check(i) } => {
            let data = Loaded::from(i)?;
            let (curve, flags, w) = (data.curve()?, data.flags()?, data.weights()?);
            match w.parity() {
                Parity::Even => Ok(json!({
                    "stable": is_stable_even(&curve, &flags, &w)?,
                    "destabilizers": destabilizers_even(&curve, &flags, &w)?,
                })),
                Parity::Odd => Ok(json!({
                    "stable": is_stable_odd(&curve, &flags, &w)?,
                    "destabilizers": destabilizers_odd(&curve, &flags, &w)?,
                })),
            }
        }
        Command::Moduli { action: ModuliAction::Point(i) } => {
            let data = Loaded::from(i)?;
            let (curve, flags, w) = (data.curve()?, data.flags()?, data.weights()?);
            let point = match w.parity() {
                Parity::Even => to_value(&moduli_point_even(&curve, &flags, &w)?),
                Parity::Odd => to_value(&moduli_point_odd(&curve, &flags, &w)?),
            };
            Ok(json!({ "parity": w.parity(), "moduli_point": point }))
        }
        Command::Higgs { action } => higgs_command(action),
        Command::Strata { action } => match action {
            StrataAction::Classify(i) => {
                let data = Loaded::from(i)?;
                let curve = data.curve()?;
                let coeffs = data.scalars("coeffs", &i.coeffs)?;
                let q = QuadDiff::new(coeffs, &curve)?;
                Ok(to_value(&zero_partition(&q, &curve)?))
            }
            StrataAction::ConeTrace(a) => {
                let data = Loaded::from(&a.inputs)?;
                let curve = data.curve()?;
                if let Some(n) = a.n {
                    if n != curve.n() {
                        return Err(Failure::Usage(format!(
                            "--n {n} does not match the {} marked points given",
                            curve.n()
                        )));
                    }
                }
                let parity = data.parity()?;
                let points = cone_trace_n4(&curve, parity)?;
                Ok(json!({ "parity": parity, "points": points }))
            }
        },
        Command::Verify { action: VerifyAction::All(a) } => Ok(to_value(&run_all(a.n, a.trials, a.seed)?)),
    }
}

fn higgs_command(action: &HiggsAction) -> CmdResult {
    let inputs = match action {
        HiggsAction::Validate(i) | HiggsAction::Basis(i) | HiggsAction::Hitchin(i) | HiggsAction::Cone(i) => i,
    };
    let data = Loaded::from(inputs)?;
    let (curve, flags, parity) = (data.curve()?, data.flags()?, data.parity()?);
    if let HiggsAction::Basis(_) = action {
        let basis = match parity {
            Parity::Even => higgs_basis_even(&curve, &flags)?,
            Parity::Odd => higgs_basis_odd(&curve, &flags)?,
        };
        return Ok(json!({ "parity": parity, "basis": basis }));
    }
    let c = data.scalars("c", &inputs.c)?;
    let validated = match parity {
        Parity::Even => validate_higgs_even(&curve, &flags, c).map(HiggsField::from),
        Parity::Odd => validate_higgs_odd(&curve, &flags, c).map(HiggsField::from),
    };
    let h = match validated {
        Ok(h) => h,
        Err(Error::ResidueConstraintViolation { residuals }) => {
            let extra = json!({ "valid": false, "violations": residuals });
            return Err(Failure::Domain(Error::ResidueConstraintViolation { residuals }, Some(extra)));
        }
        Err(e) => return Err(e.into()),
    };
    match action {
        HiggsAction::Validate(_) => Ok(json!({ "valid": true, "violations": Vec::<String>::new() })),
        HiggsAction::Hitchin(_) => {
            let image = hitchin(&h);
            Ok(json!({ "coeffs": image.coeffs, "q": image.q }))
        }
        HiggsAction::Cone(_) => Ok(json!({ "cone_values": cone_equations(&h)? })),
        HiggsAction::Basis(_) => unreachable!("handled above"),
    }
}

/// Inline values merged over the optional input file.
struct Loaded<'a> {
    inline: &'a Inputs,
    file: serde_json::Map<String, Value>,
}

impl<'a> Loaded<'a> {
    fn from(inline: &'a Inputs) -> std::result::Result<Self, Failure> {
        let file = match &inline.input {
            None => serde_json::Map::new(),
            Some(path) => {
                let text = if path.as_os_str() == "-" {
                    std::io::read_to_string(std::io::stdin())
                } else {
                    std::fs::read_to_string(path)
                }
                .map_err(|e| Failure::Usage(format!("cannot read --input {}: {e}", path.display())))?;
                match serde_json::from_str(&text) {
                    Ok(Value::Object(map)) => map,
                    Ok(_) => return Err(Failure::Usage("--input must hold a JSON object".into())),
                    Err(e) => return Err(Failure::Usage(format!("--input is not valid JSON: {e}"))),
                }
            }
        };
        Ok(Self { inline, file })
    }

    fn field<T: serde::de::DeserializeOwned>(&self, key: &str) -> std::result::Result<Option<T>, Failure> {
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| Failure::Usage(format!("field {key:?} in --input: {e}"))),
        }
    }

    fn missing(key: &str) -> Failure {
        Failure::Usage(format!("missing --{key} (inline or as a field of --input)"))
    }

    fn curve(&self) -> std::result::Result<MarkedCurve, Failure> {
        let points = match &self.inline.curve {
            Some(p) => p.clone(),
            None => self.field::<Vec<ProjectivePoint>>("curve")?.ok_or_else(|| Self::missing("curve"))?,
        };
        Ok(MarkedCurve::new(points)?)
    }

    fn flags(&self) -> std::result::Result<FlagConfig, Failure> {
        let lines = match &self.inline.flags {
            Some(l) => l.clone(),
            None => self.field::<Vec<ProjectivePoint>>("flags")?.ok_or_else(|| Self::missing("flags"))?,
        };
        Ok(FlagConfig::new(lines))
    }

    fn weights(&self) -> std::result::Result<ParabolicWeights, Failure> {
        #[derive(serde::Deserialize)]
        struct Pairs(#[serde(with = "serde_rational::pairs")] Vec<(BigRational, BigRational)>);
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Record {
            Wrapped { pairs: Pairs },
            Bare(Pairs),
        }
        let pairs = match &self.inline.weights {
            Some(p) => p.clone(),
            None => {
                // the weights may sit under "weights" or be the record itself
                let record = match self.field::<Record>("weights")? {
                    Some(r) => Some(r),
                    None => self.field::<Pairs>("pairs")?.map(|pairs| Record::Wrapped { pairs }),
                };
                match record.ok_or_else(|| Self::missing("weights"))? {
                    Record::Wrapped { pairs } | Record::Bare(pairs) => pairs.0,
                }
            }
        };
        Ok(ParabolicWeights::validate(pairs)?)
    }

    fn parity(&self) -> std::result::Result<Parity, Failure> {
        match self.inline.parity {
            Some(p) => Ok(p),
            None => self.field::<Parity>("parity")?.ok_or_else(|| Self::missing("parity")),
        }
    }

    fn scalars(
        &self,
        key: &str,
        inline: &Option<Vec<GaussianRational>>,
    ) -> std::result::Result<Vec<GaussianRational>, Failure> {
        match inline {
            Some(v) => Ok(v.clone()),
            None => self.field(key)?.ok_or_else(|| Self::missing(key)),
        }
    }
}

//! The `bridgecensus` command line.
//!
//! Every command builds one or more [`OutputRecord`]s and renders them as
//! text, JSON or CSV. Census-like commands emit JSON Lines, one record per
//! line. Exit codes: 0 ok, 1 internal, 2 parse, 3 link or unknot, 4 budget.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::counting::{self, configured_budget, EkMethod};
use crate::epimorphism::{self, CensusRecord, OrsExpansion};
use crate::error::{Error, Result};
use crate::knot::{canonicalize, even_standard_cf, TwoBridgeKnot};
use crate::rational_cf::{euclid_cf, standardize, ContinuedFraction, Fraction};

pub const SCHEMA_VERSION: &str = "1";

/// Largest integer a JSON consumer can hold exactly in a double.
const MAX_SAFE_JSON_INT: u64 = (1 << 53) - 1;

#[derive(Parser, Debug)]
#[command(
    name = "bridgecensus",
    version,
    about = "2-bridge knot continued fractions and epimorphism censuses"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Expansion-count cap; defaults to $BRIDGECENSUS_BUDGET or the built-in budget.
    #[arg(long, global = true)]
    pub budget: Option<u128>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical fraction, standard and even continued fractions of a knot.
    Normalize {
        /// `q/p`, `[a1,a2,...]` or a name such as `5_2`.
        input: String,
    },
    /// Decide whether the group of SOURCE maps onto the group of TARGET.
    Epi { source: String, target: String },
    /// Knots whose groups map onto TARGET's.
    Sources {
        target: String,
        #[arg(long)]
        max_crossing: u32,
        /// Emit every witness rather than the least one per source.
        #[arg(long)]
        all_witnesses: bool,
    },
    /// Knots whose groups SOURCE's group maps onto.
    Targets { source: String },
    /// All epimorphic pairs with source crossing number in a range.
    Census {
        #[arg(long)]
        max_crossing: u32,
        #[arg(long)]
        min_crossing: Option<u32>,
    },
    /// Regenerate the counting tables.
    Tables {
        #[arg(long, value_enum)]
        which: Table,
        /// Largest n for `tk` and `ek`.
        #[arg(long, default_value_t = 24)]
        max: u32,
        /// Smallest n for `tk` and `ek`.
        #[arg(long, default_value_t = 3)]
        min: u32,
        /// `exact` or `bound`, for `ek`.
        #[arg(long, default_value = "exact")]
        method: String,
        /// Target knot for `genfun`.
        #[arg(long, default_value = "1/3")]
        target: String,
        /// Largest exponent for `genfun`.
        #[arg(long, default_value_t = 25)]
        max_exp: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Tk,
    Table1,
    Ek,
    Genfun,
}

/// One line of output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub payload: Value,
}

impl OutputRecord {
    fn new(command: &str, payload: impl Serialize) -> Result<Self> {
        Ok(OutputRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            payload: serde_json::to_value(payload).map_err(|e| Error::Internal(e.to_string()))?,
        })
    }
}

/// Knot reference as it appears in payloads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRef {
    pub fraction: Fraction,
    pub crossing: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
}

impl From<&TwoBridgeKnot> for KnotRef {
    fn from(k: &TwoBridgeKnot) -> Self {
        KnotRef {
            fraction: k.fraction().clone(),
            crossing: k.crossing(),
            name: k.alias().map(str::to_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRef {
    pub base: ContinuedFraction,
    pub n: usize,
    pub eps: String,
    pub c: Vec<i64>,
    pub cf: ContinuedFraction,
}

impl From<&OrsExpansion> for WitnessRef {
    fn from(e: &OrsExpansion) -> Self {
        WitnessRef {
            base: e.base().clone(),
            n: e.n(),
            eps: e.eps_string(),
            c: e.c().to_vec(),
            cf: e.cf(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizePayload {
    pub input: String,
    pub value: Fraction,
    /// Standard continued fraction of the input itself, when it lies in `(0, 1/2)` mod 1.
    pub input_standard_cf: Option<ContinuedFraction>,
    pub knot: KnotRef,
    pub standard_cf: ContinuedFraction,
    pub even_standard_cf: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiPayload {
    pub source: KnotRef,
    pub target: KnotRef,
    pub epimorphism: bool,
    pub witness: Option<WitnessRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPayload {
    pub source: KnotRef,
    pub target: KnotRef,
    pub witness: WitnessRef,
}

impl From<&CensusRecord> for PairPayload {
    fn from(r: &CensusRecord) -> Self {
        PairPayload {
            source: (&r.source).into(),
            target: (&r.target).into(),
            witness: (&r.witness).into(),
        }
    }
}

/// Parses `q/p`, an integer, `[a1,...]` or a built-in name into a knot.
pub fn parse_knot(s: &str) -> Result<TwoBridgeKnot> {
    let s = s.trim();
    if let Some(k) = TwoBridgeKnot::from_alias(s) {
        return Ok(k);
    }
    canonicalize(&parse_value(s)?)
}

fn parse_value(s: &str) -> Result<Fraction> {
    if s.starts_with('[') {
        s.parse::<ContinuedFraction>()?.value()
    } else {
        s.parse::<Fraction>()
    }
}

/// JSON number when exactly representable as a double, decimal string otherwise.
pub fn json_int(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) if v <= MAX_SAFE_JSON_INT => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

fn budget(cli: &Cli) -> Result<u128> {
    match cli.budget {
        Some(b) => Ok(b),
        None => configured_budget(),
    }
}

fn check_budget(needed: &BigUint, budget: u128) -> Result<()> {
    let needed = epimorphism::to_u128(needed);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Rendered output of one command.
pub struct Rendered {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub records: Vec<OutputRecord>,
    pub text: String,
}

fn pair_row(r: &CensusRecord) -> Vec<String> {
    let c: Vec<String> = r.witness.c().iter().map(i64::to_string).collect();
    vec![
        r.source.p().to_string(),
        r.source.q().to_string(),
        r.source.crossing().to_string(),
        r.target.p().to_string(),
        r.target.q().to_string(),
        r.target.crossing().to_string(),
        r.witness.n().to_string(),
        r.witness.eps_string(),
        c.join(";"),
    ]
}

fn pair_header() -> Vec<String> {
    [
        "source_p",
        "source_q",
        "source_crossing",
        "target_p",
        "target_q",
        "target_crossing",
        "n",
        "eps",
        "c",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn pair_text(r: &CensusRecord) -> String {
    format!("{} -> {}  via {}", r.source, r.target, r.witness)
}

fn pairs(command: &str, records: &[CensusRecord]) -> Result<Rendered> {
    let text = records.iter().map(|r| pair_text(r) + "\n").collect();
    Ok(Rendered {
        header: pair_header(),
        rows: records.iter().map(pair_row).collect(),
        records: records
            .iter()
            .map(|r| OutputRecord::new(command, PairPayload::from(r)))
            .collect::<Result<_>>()?,
        text,
    })
}

fn normalize(input: &str) -> Result<Rendered> {
    let value = match TwoBridgeKnot::from_alias(input.trim()) {
        Some(k) => k.fraction().clone(),
        None => parse_value(input.trim())?,
    };
    let knot = canonicalize(&value)?;
    let p = value.denom().clone();
    let q = value.numer().mod_floor(&p);
    let input_standard_cf = if 2 * &q < p {
        Fraction::new(q, p)
            .and_then(|f| standardize(&euclid_cf(&f)?))
            .ok()
    } else {
        None
    };
    let escf = even_standard_cf(&knot)?;
    let payload = NormalizePayload {
        input: input.to_string(),
        value,
        input_standard_cf,
        knot: (&knot).into(),
        standard_cf: knot.std_cf().clone(),
        even_standard_cf: escf.entries().to_vec(),
    };
    let mut text = format!(
        "value {}\nknot {}{}\ncrossing {}\nstandard cf {}\neven standard cf {:?}\n",
        payload.value,
        knot,
        knot.alias().map(|a| format!(" ({a})")).unwrap_or_default(),
        knot.crossing(),
        knot.std_cf(),
        escf.entries()
    );
    if let Some(cf) = &payload.input_standard_cf {
        text.push_str(&format!("input standard cf {cf}\n"));
    }
    let row = vec![
        payload.value.to_string(),
        knot.fraction().to_string(),
        knot.crossing().to_string(),
        knot.std_cf().to_string(),
        format!("{:?}", escf.entries()).replace(' ', ""),
    ];
    Ok(Rendered {
        header: [
            "value",
            "knot",
            "crossing",
            "standard_cf",
            "even_standard_cf",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows: vec![row],
        records: vec![OutputRecord::new("normalize", &payload)?],
        text,
    })
}

fn epi(source: &str, target: &str) -> Result<Rendered> {
    let (s, t) = (parse_knot(source)?, parse_knot(target)?);
    let witness = epimorphism::epimorphism_witness(&s, &t)?;
    let payload = EpiPayload {
        source: (&s).into(),
        target: (&t).into(),
        epimorphism: witness.is_some(),
        witness: witness.as_ref().map(Into::into),
    };
    let text = match &witness {
        Some(w) => format!("{s} -> {t}: yes\nwitness {w}\ncf {}\n", w.cf()),
        None => format!("{s} -> {t}: no\n"),
    };
    let mut row = vec![
        s.fraction().to_string(),
        t.fraction().to_string(),
        payload.epimorphism.to_string(),
    ];
    row.extend(match &witness {
        Some(w) => vec![
            w.n().to_string(),
            w.eps_string(),
            w.c()
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        ],
        None => vec![String::new(); 3],
    });
    Ok(Rendered {
        header: ["source", "target", "epimorphism", "n", "eps", "c"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: vec![row],
        records: vec![OutputRecord::new("epi", &payload)?],
        text,
    })
}

fn sources(target: &str, max_crossing: u32, all: bool, budget: u128) -> Result<Rendered> {
    let t = parse_knot(target)?;
    check_budget(&epimorphism::expansion_total(&t, 0..=max_crossing), budget)?;
    let found = epimorphism::sources(&t, max_crossing)?;
    let mut records = Vec::new();
    for (source, witnesses) in found {
        let keep = if all { witnesses.len() } else { 1 };
        for w in witnesses.into_iter().take(keep) {
            records.push(CensusRecord {
                source: source.clone(),
                target: t.clone(),
                witness: w,
            });
        }
    }
    pairs("sources", &records)
}

fn targets(source: &str) -> Result<Rendered> {
    let s = parse_knot(source)?;
    let records: Vec<CensusRecord> = epimorphism::targets_with_witnesses(&s)?
        .into_iter()
        .map(|(target, witness)| CensusRecord {
            source: s.clone(),
            target,
            witness,
        })
        .collect();
    pairs("targets", &records)
}

fn census(min: u32, max: u32, budget: u128) -> Result<Rendered> {
    if min > max {
        return Err(Error::OutOfRange(format!(
            "empty crossing range {min}..={max}"
        )));
    }
    check_budget(&epimorphism::census_cost(min..=max)?, budget)?;
    let records: Vec<CensusRecord> = epimorphism::census(min..=max)?
        .into_iter()
        .flat_map(|(source, targets)| {
            targets
                .into_iter()
                .map(move |(target, witness)| CensusRecord {
                    source: source.clone(),
                    target,
                    witness,
                })
        })
        .collect();
    pairs("census", &records)
}

fn simple_table(command: &str, header: &[&str], rows: Vec<Vec<Value>>) -> Result<Rendered> {
    let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let text_rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(cell).collect()).collect();
    let records = rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, Value> =
                header.iter().cloned().zip(r.iter().cloned()).collect();
            OutputRecord::new(command, Value::Object(obj))
        })
        .collect::<Result<_>>()?;
    let mut text = header.join("\t") + "\n";
    for r in &text_rows {
        text.push_str(&r.join("\t"));
        text.push('\n');
    }
    Ok(Rendered {
        header,
        rows: text_rows,
        records,
        text,
    })
}

fn tables(
    which: Table,
    min: u32,
    max: u32,
    method: &str,
    target: &str,
    max_exp: u32,
    budget: u128,
) -> Result<Rendered> {
    match which {
        Table::Tk => {
            let rows = (min.max(3)..=max)
                .map(|n| Ok(vec![Value::from(n), json_int(&counting::tk(n)?)]))
                .collect::<Result<_>>()?;
            simple_table("tables.tk", &["n", "tk"], rows)
        }
        Table::Table1 => {
            let rows = counting::table1()
                .into_iter()
                .map(|(ns, v)| {
                    let label = ns.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                    vec![Value::from(label), json_int(&v)]
                })
                .collect();
            simple_table("tables.table1", &["crossings", "cumulative_tk"], rows)
        }
        Table::Ek => {
            let method: EkMethod = method.parse()?;
            let mut rows = Vec::new();
            for n in min.max(3)..=max {
                let value = counting::ek(n, method, budget)?;
                let known = counting::known_ek(n).map_or(Value::Null, Value::from);
                rows.push(vec![
                    Value::from(n),
                    Value::from(value),
                    Value::from(counting::ek_upper_bound(n)),
                    known,
                ]);
            }
            simple_table("tables.ek", &["n", "ek", "bound", "known"], rows)
        }
        Table::Genfun => {
            let t = parse_knot(target)?;
            let series = counting::genfun(&t, max_exp);
            let lo = 3 * t.crossing();
            let rows = (lo..=max_exp)
                .map(|c| vec![Value::from(c), json_int(&series.coefficient(c))])
                .collect();
            simple_table("tables.genfun", &["exponent", "coefficient"], rows)
        }
    }
}

/// Runs a parsed command and produces its output.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Normalize { input } => normalize(input),
        Command::Epi { source, target } => epi(source, target),
        Command::Sources {
            target,
            max_crossing,
            all_witnesses,
        } => sources(target, *max_crossing, *all_witnesses, budget(cli)?),
        Command::Targets { source } => targets(source),
        Command::Census {
            max_crossing,
            min_crossing,
        } => census(
            min_crossing.unwrap_or(*max_crossing),
            *max_crossing,
            budget(cli)?,
        ),
        Command::Tables {
            which,
            max,
            min,
            method,
            target,
            max_exp,
        } => tables(*which, *min, *max, method, target, *max_exp, budget(cli)?),
    }
}

/// Writes `out` in `format`.
pub fn render(out: &Rendered, format: Format, w: &mut dyn Write) -> Result<()> {
    let io_err = |e: io::Error| Error::Internal(e.to_string());
    match format {
        Format::Json => {
            for r in &out.records {
                let line = serde_json::to_string(r).map_err(|e| Error::Internal(e.to_string()))?;
                writeln!(w, "{line}").map_err(io_err)?;
            }
        }
        Format::Text => w.write_all(out.text.as_bytes()).map_err(io_err)?,
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            let csv_err = |e: csv::Error| Error::Internal(e.to_string());
            csv.write_record(&out.header).map_err(csv_err)?;
            for row in &out.rows {
                csv.write_record(row).map_err(csv_err)?;
            }
            csv.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::MalformedInput(_)
        | Error::OutOfRange(_)
        | Error::UndefinedValue => 2,
        Error::IsLink(_) | Error::Trivial(_) => 3,
        Error::BudgetExceeded { .. } => 4,
        Error::Internal(_) => 1,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// to `stdout` unless `--output` is given. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|out| match &cli.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::Internal(format!("{}: {e}", path.display())))?;
            let mut file = BufWriter::new(file);
            render(&out, cli.format, &mut file)?;
            file.flush().map_err(|e| Error::Internal(e.to_string()))
        }
        None => render(&out, cli.format, stdout),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

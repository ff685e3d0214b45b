//! Command-line front end of the `sd2` binary.
//!
//! Exit codes: 0 success, 1 failed verification or spectrum mismatch,
//! 2 usage or parameter error. Artifacts go to `--out` (or stdout),
//! diagnostics to stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Result, Sd2Error};
use crate::interbasis::{build_transition, transition_coeff};
use crate::j2rep::{build_j3_j2basis, GaugeSeq};
use crate::numerics::{dense_eigen, DenseMatrix, Tolerances, C64};
use crate::params::OscParams;
use crate::qdiag::{assemble_q_eigvecs, j2_eigvecs, solve_recurrence, EigvecTable};
use crate::repmat::{b2_states, build, spectrum_closed_form, BasisOrdering, GeneratorSet, SpectrumOp};
use crate::verify::{default_grid, run_suite_with, SuiteConfig, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sd2", version, about = "Representation matrices of the Schwinger-Dunkl algebra sd(2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Relative residual tolerance.
    #[arg(long, global = true, env = "SD2_TOL")]
    pub residual_tol: Option<f64>,
    #[arg(long, global = true)]
    pub eig_match_tol: Option<f64>,
    #[arg(long, global = true)]
    pub degeneracy_tol: Option<f64>,
}

impl TolArgs {
    pub fn resolve(&self) -> Result<Tolerances> {
        let d = Tolerances::default();
        Tolerances::new(
            self.residual_tol.unwrap_or(d.residual_tol),
            self.eig_match_tol.unwrap_or(d.eig_match_tol),
            self.degeneracy_tol.unwrap_or(d.degeneracy_tol),
        )
    }
}

#[derive(Debug, Args, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub mux: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub muy: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<OscParams> {
        OscParams::new(self.n, self.mux, self.muy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EigKind {
    Q,
    J2,
    /// Sector coefficient sequences `a_n`, `b_n`.
    Coeffs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write all generator matrices in one basis as JSON.
    Build {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, default_value = "circular-b2")]
        basis: BasisOrdering,
        /// Comma-separated nonzero gauge values (J2 eigenbasis only).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gauge: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form and numerical spectra side by side.
    Spectrum {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        op: SpectrumOp,
        #[arg(long, default_value = "circular-b2")]
        basis: BasisOrdering,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvector tables of Q or J2 in the B2 basis, or the sector coefficients.
    Eigvecs {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_enum, default_value = "j2")]
        kind: EigKind,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transition matrix between the circular and Cartesian bases.
    Transition {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross-check suite.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// `default` or a list like `0.3:0.7,1.5:0`.
        #[arg(long, default_value = "default", allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Decimal string with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub tolerances: Tolerances,
}

/// Parsed matrix document.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDoc {
    pub params: OscParams,
    pub basis: String,
    pub matrices: BTreeMap<String, DenseMatrix>,
    pub meta: Meta,
}

type RawEntry = [Box<RawValue>; 2];

#[derive(Serialize)]
struct MatrixDocOut<'a> {
    params: &'a OscParams,
    basis: &'a str,
    matrices: BTreeMap<&'a str, Vec<Vec<RawEntry>>>,
    meta: &'a Meta,
}

#[derive(Deserialize)]
struct MatrixDocIn {
    params: OscParams,
    basis: String,
    matrices: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    meta: Meta,
}

fn raw(x: f64) -> Result<Box<RawValue>> {
    if !x.is_finite() {
        return Err(Sd2Error::NonFinite("matrix entry"));
    }
    RawValue::from_string(fmt_f64(x)).map_err(|e| Sd2Error::Format(e.to_string()))
}

pub fn matrices_to_json(
    params: &OscParams,
    basis: &str,
    matrices: &[(&str, &DenseMatrix)],
    tol: &Tolerances,
) -> Result<String> {
    let mut out = BTreeMap::new();
    for (name, m) in matrices {
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|z| Ok([raw(z.re)?, raw(z.im)?]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        out.insert(*name, rows);
    }
    let doc = MatrixDocOut {
        params,
        basis,
        matrices: out,
        meta: &Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: *tol,
        },
    };
    serde_json::to_string(&doc).map_err(|e| Sd2Error::Format(e.to_string()))
}

pub fn read_matrices_json(s: &str) -> Result<MatrixDoc> {
    let doc: MatrixDocIn = serde_json::from_str(s).map_err(|e| Sd2Error::Format(e.to_string()))?;
    let mut matrices = BTreeMap::new();
    for (name, rows) in doc.matrices {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Sd2Error::Format(format!("ragged rows in {name}")));
        }
        let data = rows.into_iter().flatten().map(|[a, b]| C64::new(a, b)).collect();
        matrices.insert(name, DenseMatrix::new(r, c, data)?);
    }
    Ok(MatrixDoc {
        params: doc.params,
        basis: doc.basis,
        matrices,
        meta: doc.meta,
    })
}

pub fn generator_set_to_json(g: &GeneratorSet, tol: &Tolerances) -> Result<String> {
    matrices_to_json(&g.params, g.ordering.as_str(), &g.named(), tol)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fe = |e: csv::Error| Sd2Error::Format(e.to_string());
    w.write_record(header).map_err(fe)?;
    for r in rows {
        w.write_record(&r).map_err(fe)?;
    }
    let bytes = w.into_inner().map_err(|e| Sd2Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Sd2Error::Format(e.to_string()))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            writeln!(stdout, "{}", text.trim_end_matches('\n')).map_err(|e| Sd2Error::Format(e.to_string()))?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Sd2Error::Format(format!("{}: {e}", path.display())))
}

/// Parse `default` or `x:y,x:y,...`.
pub fn parse_grid(s: &str) -> Result<Vec<(f64, f64)>> {
    if s.trim() == "default" {
        return Ok(default_grid());
    }
    s.split(',')
        .map(|pair| {
            let (x, y) = pair
                .split_once(':')
                .ok_or_else(|| Sd2Error::InvalidParams(format!("grid entry {pair:?} is not x:y")))?;
            let f = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Sd2Error::InvalidParams(format!("grid value {t:?}: {e}")))
            };
            Ok((f(x)?, f(y)?))
        })
        .collect()
}

pub struct SpectrumRow {
    pub closed_form: f64,
    pub numeric_re: f64,
    pub numeric_im: f64,
}

/// Sorted closed-form and numerical spectra; the flag is true on agreement.
pub fn spectrum_table(g: &GeneratorSet, op: SpectrumOp, tol: &Tolerances) -> Result<(Vec<SpectrumRow>, bool)> {
    let m = match op {
        SpectrumOp::J2 => g.j2.clone(),
        SpectrumOp::J3 => g.j3.clone(),
        SpectrumOp::H => g.h.clone(),
        SpectrumOp::Q => g.q_operator(),
    };
    let predicted = spectrum_closed_form(&g.params, op);
    let mut vals = dense_eigen(&m)?.values;
    vals.sort_by(|a, b| a.re.total_cmp(&b.re));
    let rows: Vec<SpectrumRow> = predicted
        .iter()
        .zip(&vals)
        .map(|(p, v)| SpectrumRow {
            closed_form: *p,
            numeric_re: v.re,
            numeric_im: v.im,
        })
        .collect();
    let ok = rows.iter().all(|r| {
        (r.closed_form - r.numeric_re).abs() <= tol.eig_match_tol && r.numeric_im.abs() <= tol.eig_match_tol
    });
    Ok((rows, ok))
}

fn eigvec_csv(t: &EigvecTable) -> Result<String> {
    let labels = b2_states(t.params.n);
    let mut rows = Vec::new();
    for v in &t.vectors {
        for (i, z) in v.components.iter().enumerate() {
            let (l, s) = crate::repmat::b2_label(labels[i]);
            rows.push(vec![
                v.k.to_string(),
                v.sign.symbol().to_string(),
                fmt_f64(v.eigenvalue),
                format!("|{l},{}>", s.symbol()),
                fmt_f64(z.re),
                fmt_f64(z.im),
            ]);
        }
    }
    csv_string(&["k", "sign", "eigenvalue", "component", "re", "im"], rows)
}

fn run_command(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let tol = cli.tol.resolve()?;
    match &cli.command {
        Command::Build { p, basis, gauge, out } => {
            let params = p.params()?;
            let g = match (basis, gauge) {
                (BasisOrdering::J2Eigen, Some(values)) => {
                    build_j3_j2basis(&params, &GaugeSeq::new(values.clone())?, tol.degeneracy_tol)?
                }
                (_, Some(_)) => {
                    return Err(Sd2Error::InvalidParams("--gauge applies to the j2-eigen basis only".into()))
                }
                _ => build(&params, *basis)?,
            };
            emit(out, &generator_set_to_json(&g, &tol)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Spectrum { p, op, basis, format, out } => {
            let params = p.params()?;
            let g = build(&params, *basis)?;
            let (rows, ok) = spectrum_table(&g, *op, &tol)?;
            let text = match format {
                Format::Csv => csv_string(
                    &["index", "closed_form", "numeric_re", "numeric_im", "deviation"],
                    rows.iter().enumerate().map(|(i, r)| {
                        vec![
                            i.to_string(),
                            fmt_f64(r.closed_form),
                            fmt_f64(r.numeric_re),
                            fmt_f64(r.numeric_im),
                            fmt_f64((r.closed_form - r.numeric_re).abs()),
                        ]
                    }),
                )?,
                Format::Json => serde_json::to_string(&serde_json::json!({
                    "params": params,
                    "basis": basis.as_str(),
                    "operator": op.to_string(),
                    "closed_form": rows.iter().map(|r| r.closed_form).collect::<Vec<_>>(),
                    "numeric": rows.iter().map(|r| [r.numeric_re, r.numeric_im]).collect::<Vec<_>>(),
                    "match": ok,
                }))
                .map_err(|e| Sd2Error::Format(e.to_string()))?,
                Format::Text => {
                    let mut s = format!("{:>5} {:>24} {:>24} {:>12}\n", "index", "closed form", "numeric", "deviation");
                    for (i, r) in rows.iter().enumerate() {
                        let dev = (r.closed_form - r.numeric_re).abs().max(r.numeric_im.abs());
                        let flag = if dev > tol.eig_match_tol { "  MISMATCH" } else { "" };
                        s += &format!("{i:>5} {:>24.16} {:>24.16} {dev:>12.3e}{flag}\n", r.closed_form, r.numeric_re);
                    }
                    s.trim_end().to_string()
                }
            };
            emit(out, &text, stdout)?;
            if ok {
                Ok(EXIT_OK)
            } else {
                writeln!(stderr, "spectrum of {op} does not match the closed form").ok();
                Ok(EXIT_FAILED)
            }
        }
        Command::Eigvecs { p, kind, format, out } => {
            let params = p.params()?;
            let text = match kind {
                EigKind::Coeffs => {
                    let sectors: Vec<usize> = match params.parity() {
                        crate::Parity::Even => (1..=params.m()).collect(),
                        crate::Parity::Odd => (0..=params.m()).collect(),
                    };
                    let pairs = sectors
                        .iter()
                        .map(|&k| solve_recurrence(k, &params))
                        .collect::<Result<Vec<_>>>()?;
                    match format {
                        Format::Json => serde_json::to_string(&pairs).map_err(|e| Sd2Error::Format(e.to_string()))?,
                        _ => csv_string(
                            &["k", "n", "a", "b"],
                            pairs.iter().flat_map(|c| {
                                (0..c.a.len()).map(move |n| {
                                    vec![c.k.to_string(), n.to_string(), fmt_f64(c.a[n]), fmt_f64(c.b[n])]
                                })
                            }),
                        )?,
                    }
                }
                EigKind::Q | EigKind::J2 => {
                    let t = if *kind == EigKind::Q {
                        assemble_q_eigvecs(&params)?
                    } else {
                        j2_eigvecs(&params)?
                    };
                    match format {
                        Format::Json => serde_json::to_string(&t).map_err(|e| Sd2Error::Format(e.to_string()))?,
                        _ => eigvec_csv(&t)?,
                    }
                }
            };
            emit(out, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Transition { n, format, out } => {
            let params = OscParams::new(*n, 0.0, 0.0)?;
            let text = match format {
                Format::Json => {
                    let t = build_transition(&params)?;
                    matrices_to_json(&params, BasisOrdering::CircularB1.as_str(), &[("T", &t.t)], &tol)?
                }
                _ => {
                    let mut rows = Vec::new();
                    for i in 0..=*n {
                        for j in 0..=*n {
                            rows.push(vec![i.to_string(), j.to_string(), fmt_f64(transition_coeff(i, j, *n)?)]);
                        }
                    }
                    csv_string(&["n", "j", "coefficient"], rows)?
                }
            };
            emit(out, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { n_max, grid, random, seed, report } => {
            let mut cfg = SuiteConfig::new(*n_max, parse_grid(grid)?, tol);
            cfg.random_samples = *random;
            cfg.seed = *seed;
            let r = run_suite_with(&cfg)?;
            writeln!(stderr, "{}", r.summary()).ok();
            for f in r.failures().take(20) {
                writeln!(
                    stderr,
                    "FAIL {} N={} mu=({}, {}) residual={:.3e} tol={:.1e} {}",
                    f.id, f.params.n, f.params.mu_x, f.params.mu_y, f.max_residual, f.tol, f.notes
                )
                .ok();
            }
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&r).map_err(|e| Sd2Error::Format(e.to_string()))?;
                write_file(path, &text)?;
            }
            Ok(if r.passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(stderr, "{text}").ok();
            } else {
                write!(stdout, "{text}").ok();
            }
            return code;
        }
    };
    match run_command(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("sd2").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn build_round_trip() {
        let (code, out, _) = run(&["build", "--n", "4", "--mux", "0.3", "--muy", "0.7", "--basis", "circular-b2"]);
        assert_eq!(code, 0);
        let doc = read_matrices_json(&out).unwrap();
        let g = build(&OscParams::new(4, 0.3, 0.7).unwrap(), BasisOrdering::CircularB2).unwrap();
        for (name, m) in g.named() {
            assert_eq!(&doc.matrices[name], m, "{name}");
        }
        assert_eq!(doc.basis, "circular-b2");
    }

    #[test]
    fn spectrum_and_errors() {
        let (code, out, _) = run(&["spectrum", "--op", "J2", "--n", "4", "--mux", "0.3", "--muy", "0.7"]);
        assert_eq!(code, 0);
        assert!(!out.contains("MISMATCH"));
        assert_eq!(run(&["spectrum", "--op", "J9", "--n", "4", "--mux", "0", "--muy", "0"]).0, 2);
        assert_eq!(run(&["build", "--n", "2", "--mux", "-0.6", "--muy", "0"]).0, 2);
        assert_eq!(run(&["build", "--n", "2", "--mux", "0.3", "--muy", "0.7", "--gauge", "1"]).0, 2);
        assert_eq!(
            run(&["build", "--n", "3", "--mux", "0.3", "--muy", "0.7", "--basis", "j2-eigen", "--gauge", "0"]).0,
            2
        );
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0.3:0.7,-0.4:1.5").unwrap(), vec![(0.3, 0.7), (-0.4, 1.5)]);
        assert_eq!(parse_grid("default").unwrap().len(), 25);
        assert!(parse_grid("0.3").is_err());
    }
}

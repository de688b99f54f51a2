//! Command-line front end. Every subcommand reads polynomials either as
//! expressions (`--poly "u1^2*z1^4"`) or as JSON (`--file PATH`), and writes
//! plain text or, with `--format json`, JSON.
//!
//! Exit codes: 0 success, 1 domain error (a JSON error object on stdout),
//! 2 usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::expr::parse_poly;
use crate::field::FieldTag;
use crate::harness::{self, InstanceReport, PolyMap, PolyMatrix};
use crate::image::{self, CodimSweep};
use crate::json::{laurent_to_json, poly_from_json, PolyJson};
use crate::laurent::LaurentPoly;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::random;
use crate::weyl::{reduce_family, ConstCoeffOp, FirstOrderOp, OpJson};
use crate::worked::{self, WorkedExample};

#[derive(Debug, Parser)]
#[command(name = "imtheta", version, about = "Exact algebra of the image of Theta_i = u_i - d/dz_i")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Number of variable pairs (z_i, u_i).
    #[arg(long, global = true, default_value_t = 1)]
    nvars: usize,
    /// rational | gaussian | fp:P
    #[arg(long, global = true, default_value = "rational")]
    field: String,
    /// Polynomial expression in z1..zn, u1..un.
    #[arg(long, global = true, conflicts_with = "file")]
    poly: Option<String>,
    /// Polynomial in JSON form.
    #[arg(long, global = true)]
    file: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest power m tabulated (default 4; 5 for `examples`).
    #[arg(long, global = true)]
    max_power: Option<u32>,
    /// Total-degree truncation for `jc-invert` (default 9).
    #[arg(long, global = true)]
    truncate: Option<u32>,
    /// Seed for generated instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// E(f): replace u by d/dz.
    EvalE,
    /// Z(f) as a Laurent polynomial in z.
    EvalZ,
    /// Laplace transform in z, as a Laurent polynomial in u.
    Laplace,
    /// Coefficients a_alpha of f = sum (1/alpha!) Theta^alpha a_alpha.
    Taylor,
    /// Decide f in im Theta.
    Member {
        /// Also print w with f = sum_i Theta_i w_i.
        #[arg(long)]
        witness: bool,
    },
    /// Bounded search for f = sum_i op_i(w_i).
    MemberBf {
        /// `theta` for the Theta family; otherwise use --ops-file.
        #[arg(long, default_value = "theta")]
        ops: String,
        /// JSON array of operators.
        #[arg(long)]
        ops_file: Option<String>,
        #[arg(long)]
        dz: Option<u32>,
        #[arg(long)]
        du: Option<u32>,
    },
    /// Lambda^m(P^m) and Lambda^m(P^m Q) for m = 1..M.
    Vc {
        /// Symbol of Lambda in u1..un.
        #[arg(long)]
        lambda: String,
        /// Q (default 1).
        #[arg(long)]
        g: Option<String>,
    },
    /// Power sums sum_{|alpha|=m} d^alpha(H^alpha)/alpha!.
    JcSums {
        /// Components of H separated by ';' (random triangular cubic with --seed).
        #[arg(long)]
        map: Option<String>,
    },
    /// Truncated formal inverse of z - H, or g(G) with --poly.
    JcInvert {
        #[arg(long)]
        map: Option<String>,
    },
    /// Hessian matrix of a z-polynomial and its nilpotency.
    Hessian,
    /// Truncated codimension of the image of d_i - d_i(q).
    Codim {
        #[arg(long, value_delimiter = ',', default_values_t = [8u32, 12, 16])]
        degrees: Vec<u32>,
    },
    /// Reduce a commuting family with constant leading coefficients.
    Reduce {
        #[arg(long)]
        ops_file: String,
    },
    /// Membership of f^m and f^m g for m = 1..M.
    IcCheck {
        #[arg(long)]
        g: String,
    },
    /// Worked counterexample tables.
    Examples {
        /// 2.6 or 2.7
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the CLI on `args` (including the program name) against stdout.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = String>,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let obj = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            let _ = writeln!(out, "{obj}");
            1
        }
    }
}

fn field(c: &Common) -> CliResult<FieldTag> {
    c.field.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn input_poly(c: &Common) -> CliResult<Poly> {
    match (&c.poly, &c.file) {
        (Some(src), _) => Ok(parse_poly(src, c.nvars, field(c)?)?),
        (None, Some(path)) => Ok(poly_from_json(&read(path)?)?),
        (None, None) => Err(Failure::Usage("one of --poly or --file is required".into())),
    }
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn parse_in(src: &str, like: &Poly) -> CliResult<Poly> {
    Ok(parse_poly(src, like.nvars(), like.field())?)
}

fn parse_map(src: &str, nvars: usize, field: FieldTag) -> CliResult<PolyMap> {
    let comps = src
        .split(';')
        .map(|s| parse_poly(s, nvars, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMap::new(comps)?)
}

fn input_map(c: &Common, map: &Option<String>) -> CliResult<PolyMap> {
    let field = field(c)?;
    match (map, c.seed) {
        (Some(src), _) => parse_map(src, c.nvars, field),
        (None, Some(seed)) => {
            Ok(random::random_triangular_map(&mut random::rng_from_seed(seed), c.nvars, field, 3))
        }
        (None, None) => Err(Failure::Usage("one of --map or --seed is required".into())),
    }
}

fn read_ops(path: &str) -> CliResult<Vec<FirstOrderOp>> {
    let raw: Vec<OpJson> = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Domain(Error::Invalid(e.to_string())))?;
    Ok(raw.iter().map(OpJson::to_op).collect::<Result<_, _>>()?)
}

fn pj(p: &Poly) -> Value {
    serde_json::to_value(PolyJson::from_poly(p)).expect("serializable")
}

fn lj(p: &LaurentPoly) -> Value {
    serde_json::from_str(&laurent_to_json(p)).expect("serializable")
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|s| s + "\n").collect()
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    let c = &cli.common;
    let json_out = c.format == Format::Json;
    let text = match &cli.command {
        Command::EvalE => {
            let e = image::eval_e(&input_poly(c)?);
            if json_out { pj(&e).to_string() } else { e.to_string() }
        }
        Command::EvalZ => {
            let z = image::eval_z(&input_poly(c)?)?;
            if json_out { lj(&z).to_string() } else { z.to_string() }
        }
        Command::Laplace => {
            let l = image::laplace_transform(&input_poly(c)?)?;
            if json_out { lj(&l).to_string() } else { l.display_with('u') }
        }
        Command::Taylor => {
            let t = image::twisted_taylor(&input_poly(c)?)?;
            if json_out {
                let coeffs: Vec<Value> = t
                    .coefficients
                    .iter()
                    .map(|(a, p)| json!({"alpha": a.0, "coefficient": pj(p)}))
                    .collect();
                json!({"coefficients": coeffs}).to_string()
            } else {
                return Ok(lines(t.coefficients.iter().map(|(a, p)| format!("a{a} = {p}"))));
            }
        }
        Command::Member { witness } => {
            let f = input_poly(c)?;
            let r = if *witness { image::member_theta_with_witness(&f)? } else { image::member_theta(&f)? };
            if json_out {
                json!({
                    "is_member": r.is_member,
                    "e_value": pj(&r.e_value),
                    "z_holomorphic": pj(&r.z_holomorphic),
                    "witness": r.witness.as_ref().map(|w| w.iter().map(pj).collect::<Vec<_>>()),
                })
                .to_string()
            } else {
                let mut out = vec![
                    format!("member: {}", r.is_member),
                    format!("E(f) = {}", r.e_value),
                    format!("holomorphic part of Z(f) = {}", r.z_holomorphic),
                ];
                if let Some(w) = &r.witness {
                    out.extend(w.iter().enumerate().map(|(i, p)| format!("w{} = {p}", i + 1)));
                }
                return Ok(lines(out));
            }
        }
        Command::MemberBf { ops, ops_file, dz, du } => {
            let f = input_poly(c)?;
            let family = match (ops.as_str(), ops_file) {
                (_, Some(path)) => read_ops(path)?,
                ("theta", None) => FirstOrderOp::theta_family(f.nvars(), f.field()),
                (other, None) => return Err(Failure::Usage(format!("unknown operator family {other:?}"))),
            };
            let (bz, bu) = image::theta_witness_bounds(&f);
            let (dz, du) = (dz.unwrap_or(bz), du.unwrap_or(bu));
            let w = image::member_bruteforce(&f, &family, dz, du)?;
            if json_out {
                json!({
                    "bounds": [dz, du],
                    "witness": w.as_ref().map(|w| w.iter().map(pj).collect::<Vec<_>>()),
                })
                .to_string()
            } else {
                return Ok(match w {
                    Some(w) => lines(
                        std::iter::once("witness found".to_string())
                            .chain(w.iter().enumerate().map(|(i, p)| format!("w{} = {p}", i + 1))),
                    ),
                    None => format!("no witness with deg_z <= {dz}, deg_u <= {du}\n"),
                });
            }
        }
        Command::Vc { lambda, g } => {
            let p = input_poly(c)?;
            let lam = ConstCoeffOp::new(parse_in(lambda, &p)?)?;
            let q = match g {
                Some(src) => parse_in(src, &p)?,
                None => Poly::one(p.nvars(), p.field()),
            };
            let r = harness::vc_check(&lam, &p, &q, c.max_power.unwrap_or(4))?;
            return Ok(report(&r, json_out, "Lambda^m(P^m) = 0", "Lambda^m(P^m Q) = 0"));
        }
        Command::JcSums { map } => {
            let h = input_map(c, map)?;
            let sums = harness::jc_power_sums(&h, c.max_power.unwrap_or(4))?;
            let jac = h.identity_minus().jacobian_determinant();
            if json_out {
                json!({
                    "map": h.components().iter().map(pj).collect::<Vec<_>>(),
                    "power_sums": sums.iter().map(pj).collect::<Vec<_>>(),
                    "jacobian": pj(&jac),
                })
                .to_string()
            } else {
                let mut out = vec![format!("H = ({})", join(h.components()))];
                out.extend(sums.iter().enumerate().map(|(m, s)| format!("m = {}: {s}", m + 1)));
                out.push(format!("j(z - H) = {jac}"));
                return Ok(lines(out));
            }
        }
        Command::JcInvert { map } => {
            let h = input_map(c, map)?;
            let d = c.truncate.unwrap_or(9);
            let (labels, result): (Vec<String>, Vec<Poly>) = if c.poly.is_some() || c.file.is_some() {
                let g = input_poly(c)?;
                (vec!["g(G)".into()], vec![harness::ag_inverse_poly(&h, &g, d)?])
            } else {
                let g = harness::ag_inverse(&h, &PolyMap::identity(h.nvars(), h.field()), d)?;
                ((1..=h.nvars()).map(|i| format!("G{i}")).collect(), g.components().to_vec())
            };
            if json_out {
                json!({"truncate": d, "result": result.iter().map(pj).collect::<Vec<_>>()}).to_string()
            } else {
                return Ok(lines(labels.iter().zip(&result).map(|(l, p)| format!("{l} = {p}"))));
            }
        }
        Command::Hessian => {
            let p = input_poly(c)?;
            let h = harness::hessian_matrix(&p);
            let nil = harness::is_nilpotent_matrix(&h);
            if json_out {
                json!({
                    "hessian": h.iter().map(|r| r.iter().map(pj).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "nilpotent": nil,
                })
                .to_string()
            } else {
                let mut out = matrix_lines(&h);
                out.push(format!("nilpotent: {nil}"));
                return Ok(lines(out));
            }
        }
        Command::Codim { degrees } => {
            let q = input_poly(c)?;
            let sweep = image::codim_sweep(&q, degrees)?;
            codim_output(&sweep, json_out)
        }
        Command::Reduce { ops_file } => {
            let ops = read_ops(ops_file)?;
            let r = reduce_family(&ops)?;
            if json_out {
                json!({
                    "k": r.k,
                    "coord_change": matrix_json(&r.coord_change),
                    "q": pj(&r.q),
                    "zero_order_gens": r.zero_order_gens.iter().map(pj).collect::<Vec<_>>(),
                })
                .to_string()
            } else {
                let mut out = vec![format!("k = {}", r.k), "coord_change =".to_string()];
                out.extend(r.coord_change.to_string().lines().map(str::to_string));
                out.push(format!("q = {}", r.q));
                out.push(format!("gens = [{}]", join(&r.zero_order_gens)));
                return Ok(lines(out));
            }
        }
        Command::IcCheck { g } => {
            let f = input_poly(c)?;
            let g = parse_in(g, &f)?;
            let r = harness::ic_instance_check(&f, &g, c.max_power.unwrap_or(4))?;
            return Ok(report(&r, json_out, "f^m in im Theta", "f^m g in im Theta"));
        }
        Command::Examples { id, p } => {
            let ex: WorkedExample = match id.as_str() {
                "2.6" => worked::euler_example(c.max_power.unwrap_or(5))?,
                "2.7" => worked::char_p_example(*p, c.max_power.unwrap_or(5))?,
                other => return Err(Failure::Usage(format!("unknown example {other:?}; expected 2.6 or 2.7"))),
            };
            if json_out { ex.to_json() } else { return Ok(ex.to_text()) }
        }
    };
    Ok(text + "\n")
}

fn join(ps: &[Poly]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn matrix_lines(m: &PolyMatrix) -> Vec<String> {
    m.iter().map(|row| format!("[{}]", join(row))).collect()
}

fn matrix_json(m: &Matrix) -> Value {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|c| c.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn codim_output(sweep: &CodimSweep, json_out: bool) -> String {
    let stable = sweep.stable_value();
    if json_out {
        json!({
            "sweep": sweep.values.iter().map(|(d, v)| json!({"degree": d, "codim": v})).collect::<Vec<_>>(),
            "stable": stable,
        })
        .to_string()
    } else {
        let mut out: Vec<String> = sweep.values.iter().map(|(d, v)| format!("D = {d}: {v}")).collect();
        out.push(match stable {
            Some(v) => format!("stable: {v}"),
            None => "stable: inconclusive (possibly infinite)".into(),
        });
        out.join("\n")
    }
}

fn report(r: &InstanceReport, json_out: bool, hyp: &str, concl: &str) -> String {
    if json_out {
        return r.to_json() + "\n";
    }
    let mut out = Vec::new();
    for (k, (h, c)) in r.hypothesis.iter().zip(&r.conclusion).enumerate() {
        out.push(format!("m = {}: {hyp}: {h}, {concl}: {c}", k + 1));
    }
    out.push(match r.threshold {
        Some(t) => format!("threshold: {t}"),
        None => "threshold: none within M".into(),
    });
    if !r.hypothesis_holds() {
        out.push("hypothesis violated".into());
    }
    lines(out)
}

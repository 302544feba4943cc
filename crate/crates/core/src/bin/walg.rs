use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use walg::arith::{format_rational, Dim, RegulatedScalar};
use walg::cohomology::{bb_test, rlh_dims, Cochain};
use walg::deformation::{
    bg_test, first_order_cocycle_check, integrate_step, is_coboundary, obstruction_gn,
    DeformationSeries, IntegrateOutcome, Sector,
};
use walg::intertwiner::{enumerate_m_tuples, lambda_table, node_dims, BracketScheme};
use walg::io::{self, EpsPolicy};
use walg::reduced::{
    check_constraints, generate_constraints, gram_positivity_check, invariance_residuals,
    GenerateOptions, ReducedSpace, StructureConstants,
};
use walg::transform::{basis_tuples, y_matrix, y_oracle, y_recursive, z_matrix, RegulatorSet};
use walg::{Error, Result};

/// Exact intertwiner, constraint and cohomology computations for chiral W-algebras.
#[derive(Parser)]
#[command(name = "walg", version)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized tests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Regulator multipliers for the dimensions: 3pow or 5pow.
    #[arg(long, global = true, default_value = "3pow")]
    regulator_set: RegulatorSet,
    /// How regulated values are written: generic, limit or laurent.
    #[arg(long, global = true, default_value = "generic")]
    eps: EpsPolicy,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coefficients λ^c_{ab}(p,q) of the 2-point intertwiner.
    Lambda {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
    },
    /// The intertwiner basis for given dimensions and target.
    Tbasis {
        #[arg(long, value_delimiter = ',')]
        dims: Vec<i64>,
        #[arg(long)]
        e: i64,
        /// Bracketing scheme such as "((1,2),3)"; the right comb by default.
        #[arg(long)]
        scheme: Option<BracketScheme>,
    },
    /// The 3-point change of basis Y_abc(n).
    Ymatrix {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "closed", value_parser = ["closed", "recursive", "oracle"])]
        method: String,
        /// Shorthand for `--eps limit`.
        #[arg(long)]
        eps_limit: bool,
    },
    /// The permutation matrices Z on the n-point intertwiner spaces.
    Zmatrix {
        #[arg(long, value_delimiter = ',')]
        dims: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        perm: Vec<usize>,
        /// Only this target dimension; all nonempty ones by default.
        #[arg(long)]
        e: Option<i64>,
        #[arg(long)]
        source: Option<BracketScheme>,
        #[arg(long)]
        target: Option<BracketScheme>,
    },
    /// Generate or check the reduced Jacobi constraint system.
    #[command(subcommand)]
    Constraints(ConstraintsCmd),
    /// Check invariance of a Gram form under the bracket.
    #[command(subcommand)]
    Invariance(InvarianceCmd),
    /// Check positivity of a Gram form.
    #[command(subcommand)]
    Gram(GramCmd),
    /// Cohomology dimensions and the b∘b = 0 test.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// Order-by-order deformation of the bracket.
    #[command(subcommand)]
    Deform(DeformCmd),
}

#[derive(Args)]
struct Model {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    f: PathBuf,
}

#[derive(Subcommand)]
enum ConstraintsCmd {
    /// Generate the reduced Jacobi constraints as a quadratic system.
    Generate {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        max_total_grade: i64,
        /// Also keep this many subleading ε orders of each constraint.
        #[arg(long, default_value_t = 0)]
        extra_orders: usize,
    },
    /// Evaluate the constraints at a table of structure constants.
    Check {
        #[command(flatten)]
        model: Model,
        /// A constraints file; generated on the fly when absent.
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Defaults to three times the largest grade.
        #[arg(long)]
        max_total_grade: Option<i64>,
    },
}

#[derive(Subcommand)]
enum InvarianceCmd {
    /// Invariance of a quadratic form under the reduced bracket.
    Check {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        gram: PathBuf,
    },
}

#[derive(Subcommand)]
enum GramCmd {
    /// Exact positive definiteness of every grade block.
    Check {
        #[arg(long)]
        gram: PathBuf,
    },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// Dimensions of cochains, cocycles, coboundaries and cohomology.
    Dims {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        degree: usize,
        /// "grade1", "all" or a list of grades such as "1,2".
        #[arg(long, default_value = "grade1")]
        sector: String,
    },
    /// Evaluate b∘b on seeded random cochains.
    BbTest {
        #[command(flatten)]
        model: Model,
        /// A degree or an inclusive range such as "1..2".
        #[arg(long)]
        degree: String,
        #[arg(long)]
        cutoff: i64,
    },
}

#[derive(Args)]
struct SectorArg {
    #[arg(long, default_value = "grade1")]
    sector: String,
}

#[derive(Subcommand)]
enum DeformCmd {
    /// Whether Γ_1 is a 2-cocycle.
    CheckFirstOrder {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        gamma1: PathBuf,
        #[command(flatten)]
        sector: SectorArg,
    },
    /// The obstruction G^n from Γ_1 … Γ_{n−1}.
    Obstruct {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        series: PathBuf,
        #[command(flatten)]
        sector: SectorArg,
    },
    /// Solve b²Γ_n = G^n.
    Integrate {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        series: PathBuf,
        #[command(flatten)]
        sector: SectorArg,
    },
}

/// A computed result and whether every check in it passed.
struct Outcome {
    value: Value,
    ok: bool,
}

fn done(value: Value) -> Outcome {
    Outcome { value, ok: true }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_model(m: &Model) -> Result<(ReducedSpace, StructureConstants)> {
    let space = io::parse_space(&read(&m.space)?)?;
    let f = io::parse_structure_constants(&read(&m.f)?, &space)?;
    Ok((space, f))
}

fn parse_sector(space: &ReducedSpace, s: &str) -> Result<BTreeSet<i64>> {
    match s {
        "all" => Ok(space.grade_list().into_iter().collect()),
        _ => {
            let body = s.strip_prefix("grade").unwrap_or(s);
            body.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Invalid(format!("bad sector `{s}`")))
                })
                .collect()
        }
    }
}

fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Invalid(format!("bad degree `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

fn dims_out(d: &[Dim]) -> Value {
    Value::Array(d.iter().map(|x| json!(x.base)).collect())
}

fn cochain_report(space: &ReducedSpace, c: &Cochain) -> Value {
    io::emit_cochain(space, c)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let reg = cli.regulator_set;
    match &cli.cmd {
        Cmd::Lambda { a, b, c } => {
            let table: serde_json::Map<String, Value> = lambda_table(*a, *b, *c)
                .into_iter()
                .map(|((p, q), v)| (format!("({p},{q})"), Value::String(format_rational(&v))))
                .collect();
            Ok(done(Value::Object(table)))
        }
        Cmd::Tbasis { dims, e, scheme } => {
            let scheme = scheme.clone().unwrap_or_else(|| BracketScheme::right_comb(dims.len()));
            if scheme.leaves() != dims.len() {
                return Err(Error::LengthMismatch {
                    expected: dims.len(),
                    got: scheme.leaves(),
                });
            }
            let d: Vec<Dim> = dims.iter().map(|&x| Dim::int(x)).collect();
            let basis: Vec<Value> = enumerate_m_tuples(&scheme, &d, *e)
                .iter()
                .map(|el| {
                    let nodes = node_dims(&scheme, &d, &el.m);
                    json!({"m": el.m, "intermediateDims": dims_out(&nodes[1..])})
                })
                .collect();
            Ok(done(json!({
                "dims": dims,
                "e": e,
                "scheme": scheme.to_string(),
                "basis": basis,
            })))
        }
        Cmd::Ymatrix { a, b, c, n, method, eps_limit } => {
            let d = reg.regulate(&[*a, *b, *c]);
            let m = match method.as_str() {
                "recursive" => y_recursive::<RegulatedScalar>(d[0], d[1], d[2], *n)?,
                "oracle" => y_oracle::<RegulatedScalar>(d[0], d[1], d[2], *n)?,
                _ => y_matrix(d[0], d[1], d[2], *n).as_ref().clone(),
            };
            let policy = if *eps_limit { EpsPolicy::Limit } else { cli.eps };
            let labels: Vec<Vec<usize>> = (0..=*n).map(|m2| vec![n - m2, m2]).collect();
            Ok(done(io::emit_labelled_matrix(&labels, &labels, &m, policy)))
        }
        Cmd::Zmatrix { dims, perm, e, source, target } => {
            let d = reg.regulate(dims);
            let k = dims.len();
            let src = source.clone().unwrap_or_else(|| BracketScheme::right_comb(k));
            let tgt = target.clone().unwrap_or_else(|| BracketScheme::right_comb(k));
            let es: Vec<i64> = match e {
                Some(e) => vec![*e],
                None => (1..=dims.iter().sum::<i64>() - k as i64 + 1)
                    .filter(|&e| !basis_tuples(&d, e).is_empty())
                    .collect(),
            };
            let blocks = es
                .iter()
                .map(|&e| {
                    let z = z_matrix(&d, perm, &src, &tgt, e)?;
                    let mut v = io::emit_labelled_matrix(&z.rows, &z.cols, &z.entries, cli.eps);
                    v["e"] = json!(e);
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(done(json!({
                "dims": dims,
                "perm": perm,
                "source": src.to_string(),
                "target": tgt.to_string(),
                "blocks": blocks,
            })))
        }
        Cmd::Constraints(ConstraintsCmd::Generate { space, max_total_grade, extra_orders }) => {
            let space = io::parse_space(&read(space)?)?;
            let opts = GenerateOptions {
                regulator: reg,
                extra_orders: *extra_orders,
            };
            let sys = generate_constraints(&space, *max_total_grade, opts);
            Ok(done(io::emit_constraints(&space, &sys)))
        }
        Cmd::Constraints(ConstraintsCmd::Check { model, constraints, max_total_grade }) => {
            let (space, f) = load_model(model)?;
            let sys = match constraints {
                Some(p) => io::parse_constraints(&read(p)?, &space)?,
                None => {
                    let top = space.grade_list().last().copied().unwrap_or(0);
                    let opts = GenerateOptions {
                        regulator: reg,
                        extra_orders: 0,
                    };
                    generate_constraints(&space, max_total_grade.unwrap_or(3 * top), opts)
                }
            };
            let bad = check_constraints(&sys, &f);
            Ok(Outcome {
                ok: bad.is_empty(),
                value: json!({
                    "constraints": sys.constraints.len(),
                    "violations": io::emit_violations(&space, &sys, &bad),
                }),
            })
        }
        Cmd::Invariance(InvarianceCmd::Check { model, gram }) => {
            let (space, f) = load_model(model)?;
            let g = io::parse_gram(&read(gram)?, Some(&space))?;
            let bad: Vec<Value> = invariance_residuals(&space, &f, &g)
                .into_iter()
                .filter(|r| r.residual != Default::default())
                .map(|r| {
                    json!({
                        "A": space.label(r.a),
                        "B": space.label(r.b),
                        "C": space.label(r.c),
                        "residual": format_rational(&r.residual),
                    })
                })
                .collect();
            Ok(Outcome {
                ok: bad.is_empty(),
                value: json!({ "violations": bad }),
            })
        }
        Cmd::Gram(GramCmd::Check { gram }) => {
            let g = io::parse_gram(&read(gram)?, None)?;
            let rep = gram_positivity_check(&g);
            let witness = rep.witness.as_ref().map(|(d, x)| {
                json!({"dim": d, "vector": x.iter().map(format_rational).collect::<Vec<_>>()})
            });
            Ok(Outcome {
                ok: rep.positive,
                value: json!({"positive": rep.positive, "witness": witness}),
            })
        }
        Cmd::Cohomology(CohomologyCmd::Dims { model, degree, sector }) => {
            let (space, f) = load_model(model)?;
            let sector = parse_sector(&space, sector)?;
            let d = rlh_dims(&space, &f, *degree, &sector, reg)?;
            Ok(done(json!({
                "degree": degree,
                "sector": sector,
                "dimC": d.dim_c,
                "dimZ": d.dim_z,
                "dimB": d.dim_b,
                "dimRLH": d.dim_rlh,
            })))
        }
        Cmd::Cohomology(CohomologyCmd::BbTest { model, degree, cutoff }) => {
            let (space, f) = load_model(model)?;
            let mut ok = true;
            let mut results = Vec::new();
            for n in parse_degrees(degree)? {
                let rep = bb_test(&space, &f, n, *cutoff, cli.seed, reg)?;
                ok &= rep.passed();
                let failure = rep.failure.as_ref().map(|(slot, m, v)| {
                    json!({
                        "fields": slot.fields.iter().map(|&x| space.label(x)).collect::<Vec<_>>(),
                        "dims": dims_out(&slot.dims),
                        "e": slot.e,
                        "m": m,
                        "value": v.iter().map(|x| io::emit_regulated(x, cli.eps)).collect::<Vec<_>>(),
                    })
                });
                results.push(json!({
                    "degree": n,
                    "seed": rep.seed,
                    "slotsChecked": rep.slots_checked,
                    "pass": rep.passed(),
                    "failure": failure,
                }));
            }
            Ok(Outcome {
                ok,
                value: json!({"pass": ok, "results": results}),
            })
        }
        Cmd::Deform(cmd) => deform(cli, cmd),
    }
}

fn deform(cli: &Cli, cmd: &DeformCmd) -> Result<Outcome> {
    let reg = cli.regulator_set;
    match cmd {
        DeformCmd::CheckFirstOrder { model, gamma1, sector } => {
            let (space, f) = load_model(model)?;
            let sector = Sector::new(&space, parse_sector(&space, &sector.sector)?, reg)?;
            let g1 = io::parse_cochain(&read(gamma1)?, &space)?;
            let rep = first_order_cocycle_check(&space, &f, &g1, &sector)?;
            Ok(Outcome {
                ok: rep.is_cocycle,
                value: json!({
                    "isCocycle": rep.is_cocycle,
                    "residual": cochain_report(&space, &rep.residual),
                }),
            })
        }
        DeformCmd::Obstruct { model, order, series, sector } => {
            let (space, f) = load_model(model)?;
            let sector = Sector::new(&space, parse_sector(&space, &sector.sector)?, reg)?;
            let terms = io::parse_series(&read(series)?, &space)?;
            let g = obstruction_gn(&space, &terms, *order, &sector)?;
            let exact = is_coboundary(&space, &f, &g, &sector)?;
            let series = DeformationSeries { base: f, terms };
            let bg = bg_test(&space, &series, *order, &sector)?;
            Ok(Outcome {
                ok: bg.vanishes,
                value: json!({
                    "order": order,
                    "obstruction": cochain_report(&space, &g),
                    "isCoboundary": exact,
                    "bG": {"vanishes": bg.vanishes, "value": cochain_report(&space, &bg.value)},
                }),
            })
        }
        DeformCmd::Integrate { model, order, series, sector } => {
            let (space, f) = load_model(model)?;
            let sector = Sector::new(&space, parse_sector(&space, &sector.sector)?, reg)?;
            let terms = io::parse_series(&read(series)?, &space)?;
            let series = DeformationSeries { base: f, terms };
            let bg = bg_test(&space, &series, *order, &sector)?;
            let bg = json!({"vanishes": bg.vanishes, "value": cochain_report(&space, &bg.value)});
            Ok(match integrate_step(&space, &series, *order, &sector)? {
                IntegrateOutcome::Solved { gamma, cocycle_dim } => done(json!({
                    "order": order,
                    "status": "solved",
                    "gamma": cochain_report(&space, &gamma),
                    "cocycleDim": cocycle_dim,
                    "bG": bg,
                })),
                IntegrateOutcome::Obstructed { obstruction, rank_image, rank_augmented } => Outcome {
                    ok: false,
                    value: json!({
                        "order": order,
                        "status": "obstructed",
                        "obstruction": cochain_report(&space, &obstruction),
                        "rankImage": rank_image,
                        "rankAugmented": rank_augmented,
                        "bG": bg,
                    }),
                },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = io::to_text(&outcome.value);
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

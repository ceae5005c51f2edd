//! `twovar`: one computation per invocation, JSON on stdout or in `--out`.
//! Exit status is 0 whenever a result (including a negative verdict) was
//! produced and 1 on errors.

mod input;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use input::{cyc_json, padic_cyc_json, parse_char, parse_coeffs, parse_series2, qexp_json};
use serde_json::{json, Value};
use std::path::PathBuf;
use twovar::arith::DirichletChar;
use twovar::cache::ClassGroupCache;
use twovar::hida::{
    assemble_measure, build_projector, functional_involution, lp_normalize, MeasureEvaluation, MeasureInput,
    ProjectorSpec, RegularizerConvention,
};
use twovar::invariants::{
    euler_characteristic, lambda_basechange, root_number, sha_corank, sha_corank_from_data, CurveArithmeticData,
};
use twovar::io::{parse_jsonl, read_jsonl};
use twovar::iwasawa::{
    basechange_check, divide_with_remainder, greenberg_check, product_specialization, specialize,
    weierstrass_prepare, CharSpec, PowerSeries1,
};
use twovar::measures::{convolution, distribution_check, ConvolutionParams, FiniteLevelFamily};
use twovar::qexp::{p_stabilize, EigenSystem, PadicEigenSystem};
use twovar::quadclass::{class_group, ClassGroup, ImagQuadOrder, RingClassChar};
use twovar::ring::Ring;

#[derive(Parser)]
#[command(name = "twovar", version, about = "Finite-level two-variable p-adic L-function toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub(crate) struct Common {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 5)]
    pub p: u64,
    /// p-adic precision M (coefficients mod p^M).
    #[arg(long, global = true, default_value_t = 10)]
    pub precision: u32,
    /// q-expansion precision Q.
    #[arg(long, global = true, default_value_t = 50)]
    qprec: usize,
    /// Degree caps d1,d2 for two-variable series.
    #[arg(long, global = true, default_value = "8,8", value_parser = parse_caps)]
    pub caps: (usize, usize),
    /// Regulator C for the Eisenstein family.
    #[arg(long = "C", global = true, default_value_t = 2)]
    regulator: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached class-group tables.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

fn parse_caps(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected d1,d2")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Fundamental discriminant of the imaginary quadratic field.
    #[arg(long, default_value_t = -31, allow_hyphen_values = true)]
    disc: i64,
    /// Conductor of the order.
    #[arg(long, default_value_t = 1)]
    order_conductor: u64,
}

#[derive(Args, Clone)]
struct MeasureArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Level N of the eigenform.
    #[arg(long, default_value_t = 53)]
    level: u64,
    /// Exponent m: characters of (Z/p^m)^x.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Index into the list of class-group characters (0 is trivial).
    #[arg(long, default_value_t = 0)]
    rho: usize,
    /// Character of (Z/p^m)^x as MODULUS:IMAGES (images are exponents of
    /// zeta_order on the standard generators); trivial if omitted.
    #[arg(long)]
    chi: Option<String>,
    /// Tame theta character, prime to p; trivial if omitted.
    #[arg(long)]
    tame: Option<String>,
    /// Eigendata file for the target form.
    #[arg(long)]
    eigen: Option<PathBuf>,
    /// Label of the target form in the eigendata.
    #[arg(long, default_value = "53a-ord5")]
    target: String,
    /// Eigendata file of companion systems at the working level.
    #[arg(long)]
    companions: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    AsPrinted,
    Matching,
}

#[derive(Subcommand)]
enum Command {
    /// Partial theta series of a class, one per residue mod p^m.
    Theta {
        #[command(flatten)]
        field: FieldArgs,
        /// Class index; all classes if omitted.
        #[arg(long)]
        class: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Theta character as MODULUS:IMAGES.
        #[arg(long)]
        chi: Option<String>,
        /// Also check the distribution relation against level m+1.
        #[arg(long)]
        check: bool,
    },
    /// Regularized partial Eisenstein series E^C(xi)(a, base p^m).
    Eisenstein {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Odd character xi as MODULUS:IMAGES; the field's quadratic character if omitted.
        #[arg(long)]
        chi: Option<String>,
        /// Base modulus; |disc| if omitted.
        #[arg(long)]
        base: Option<u64>,
        #[arg(long)]
        check: bool,
    },
    /// Convolution of theta and Eisenstein partials at a residue class.
    Convolve {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 53)]
        level: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// Residue a mod p^m; every residue if omitted.
        #[arg(long)]
        residue: Option<u64>,
        #[arg(long)]
        tame: Option<String>,
    },
    /// Measure value at (rho, chi) after the ordinary projector and trace.
    MeasureEval(MeasureArgs),
    /// Normalized value: Euler factors and regularizer applied.
    LpValue {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, value_enum, default_value = "as-printed")]
        convention: Convention,
        /// Second regulator to compare against.
        #[arg(long = "compare-C")]
        compare: Option<u64>,
    },
    /// Weierstrass preparation of a one-variable series.
    Prepare {
        /// Coefficients c0,c1,... or @file with a JSON series.
        #[arg(long, allow_hyphen_values = true)]
        series: String,
    },
    /// Division L = h g + r with deg_T1 r < m.
    Divide {
        /// Grid rows (T1 powers) separated by ';', entries (T2 powers) by ','; or @file.
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Substitute T2 = psi(gamma) - 1 for a character of level n.
    Specialize {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        exponent: u64,
        /// Product over all characters of the given level instead.
        #[arg(long)]
        product: bool,
    },
    /// Does g divide L, probed through specializations.
    GreenbergCheck {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
    },
    /// Base-change comparison of two ideals through norms of specializations.
    BasechangeCheck {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
    },
    /// Euler characteristic from curve data.
    EulerChar {
        /// Curve data file (JSON lines); bundled 53a data if omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        curve: String,
    },
    /// Corank of Sha over the Z_p^2 extension.
    ShaCorank {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        lambda: Option<u32>,
        /// Root number, +1 or -1.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i32>,
        #[arg(long)]
        class_number: Option<u64>,
    },
    /// Global root number from the level and discriminant.
    RootNumber {
        #[arg(long)]
        level: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// lambda in the n-th layer of the cyclotomic tower.
    LambdaBc {
        #[arg(long)]
        lambda: u32,
        #[arg(long)]
        layer: u32,
    },
    /// Run independent jobs concurrently. Each line of the file is a JSON
    /// array of arguments as they would follow `twovar`.
    Batch {
        #[arg(long)]
        jobs: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli).and_then(|v| emit(&cli.common, &v)) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn emit(common: &Common, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn group(common: &Common, field: &FieldArgs) -> Result<ClassGroup> {
    Ok(match &common.cache_dir {
        Some(dir) => {
            ClassGroupCache::new(dir).load_or_compute(ImagQuadOrder::new(field.disc, field.order_conductor)?)?
        }
        None => class_group(field.disc, field.order_conductor)?,
    })
}

fn char_or(given: &Option<String>, default: DirichletChar) -> Result<DirichletChar> {
    given.as_deref().map(parse_char).transpose().map(|c| c.unwrap_or(default))
}

fn curves(path: &Option<PathBuf>) -> Result<Vec<CurveArithmeticData>> {
    Ok(match path {
        Some(p) => read_jsonl(p)?,
        None => parse_jsonl(twovar::data::CURVE_53A)?,
    })
}

fn curve(path: &Option<PathBuf>, label: &str) -> Result<CurveArithmeticData> {
    curves(path)?.into_iter().find(|c| c.curve == label).ok_or_else(|| anyhow!("no curve {label} in the data"))
}

fn systems(path: &Option<PathBuf>, bundled: &str) -> Result<Vec<EigenSystem>> {
    Ok(match path {
        Some(p) => read_jsonl(p)?,
        None => parse_jsonl(bundled)?,
    })
}

fn run(cli: &Cli) -> Result<Value> {
    let c = &cli.common;
    Ok(match &cli.command {
        Command::Theta { field, class, m, chi, check } => {
            let g = group(c, field)?;
            let chi = char_or(chi, DirichletChar::trivial(1))?;
            let classes: Vec<usize> = match class {
                Some(k) if *k >= g.len() => bail!("class {k} out of range, h = {}", g.len()),
                Some(k) => vec![*k],
                None => (0..g.len()).collect(),
            };
            let mut out = Vec::new();
            for k in classes {
                let fam = FiniteLevelFamily::theta(&g, k, &chi, c.p, *m, c.qprec);
                let mut rec = json!({ "class": k, "form": g.form(k), "residues": family_json(&fam) });
                if *check {
                    let fine = FiniteLevelFamily::theta(&g, k, &chi, c.p, m + 1, c.qprec);
                    rec["distribution"] = serde_json::to_value(distribution_check(&fam, &fine)?)?;
                }
                out.push(rec);
            }
            json!({ "disc": field.disc, "class_number": g.len(), "p": c.p, "m": m, "qprec": c.qprec, "classes": out })
        }
        Command::Eisenstein { field, m, chi, base, check } => {
            let xi = match chi {
                Some(s) => parse_char(s)?,
                None => DirichletChar::kronecker(field.disc)?,
            };
            let base = base.unwrap_or(field.disc.unsigned_abs());
            let fam = FiniteLevelFamily::eisenstein(&xi, base, c.p, *m, c.qprec, c.regulator)?;
            let mut rec = json!({
                "xi_modulus": xi.modulus(), "base": base, "p": c.p, "m": m, "regulator": c.regulator,
                "qprec": c.qprec, "residues": family_json(&fam),
            });
            if *check {
                let fine = FiniteLevelFamily::eisenstein(&xi, base, c.p, m + 1, c.qprec, c.regulator)?;
                rec["distribution"] = serde_json::to_value(distribution_check(&fam, &fine)?)?;
            }
            rec
        }
        Command::Convolve { field, level, m, class, residue, tame } => {
            let g = group(c, field)?;
            let tame = char_or(tame, DirichletChar::trivial(1))?;
            let params = ConvolutionParams {
                group: &g,
                chi: &tame,
                p: c.p,
                m: *m,
                level: *level,
                regulator: c.regulator,
                precision: c.qprec,
            };
            params.validate()?;
            let residues: Vec<u64> = match residue {
                Some(a) => vec![*a],
                None => (0..c.p.pow(*m)).collect(),
            };
            let mut out = Vec::new();
            for a in residues {
                out.push(json!({ "a": a, "coeffs": qexp_json(&convolution(&params, *class, a)?, cyc_json) }));
            }
            json!({
                "disc": field.disc, "class": class, "level": level, "p": c.p, "m": m, "regulator": c.regulator,
                "delta": params.delta(), "working_level": params.alpha_modulus(), "qprec": c.qprec, "residues": out,
            })
        }
        Command::MeasureEval(args) => serde_json::to_value(Measure::new(c, args)?.evaluate(c.regulator)?)?,
        Command::LpValue { measure, convention, compare } => {
            let conv = match convention {
                Convention::AsPrinted => RegularizerConvention::AsPrinted,
                Convention::Matching => RegularizerConvention::MatchingConstruction,
            };
            let ctx = Measure::new(c, measure)?;
            let eval = ctx.evaluate(c.regulator)?;
            let lp = lp_normalize(&eval, conv)?;
            let fe = functional_involution(&ctx.group, &ctx.rho, &ctx.chi, measure.level, c.p)
                .map(|f| serde_json::to_value(f).unwrap_or(Value::Null))
                .unwrap_or(Value::Null);
            let mut rec = json!({ "lp": lp, "measure": eval, "functional_equation": fe });
            if let Some(c2) = compare {
                let other = lp_normalize(&ctx.evaluate(*c2)?, conv)?;
                rec["comparison"] = json!({ "regulator": c2, "lp": other, "agree": other.value == lp.value });
            }
            rec
        }
        Command::Prepare { series } => {
            let f = match series.strip_prefix('@') {
                Some(path) => read_jsonl::<PowerSeries1>(path)?.into_iter().next().ok_or_else(|| anyhow!("{path}: empty"))?,
                None => PowerSeries1::new(c.p, c.precision, &parse_coeffs(series)?)?,
            };
            let w = weierstrass_prepare(&f)?;
            let back = w.reassemble(f.precision)?;
            json!({ "series": f, "weierstrass": w, "reassembles": back == f })
        }
        Command::Divide { l, g } => {
            let l = parse_series2(l, c)?;
            let g = parse_series2(g, c)?;
            let d = divide_with_remainder(&l, &g)?;
            let identity = d.quotient.mul(&g)?.add(&d.remainder)? == l;
            json!({ "division": d, "identity_holds": identity })
        }
        Command::Specialize { f, level, exponent, product } => {
            let f = parse_series2(f, c)?;
            if *product {
                json!({ "level": level, "norm": product_specialization(&f, *level)? })
            } else {
                let psi = CharSpec::new(f.p, *level, *exponent)?;
                let s = specialize(&f, &psi)?;
                let coeffs: Vec<Value> = s.coeffs.iter().map(padic_cyc_json).collect();
                json!({ "character": psi, "conductor": s.conductor, "precision": s.precision, "coeffs": coeffs })
            }
        }
        Command::GreenbergCheck { l, g, max_level } => {
            serde_json::to_value(greenberg_check(&parse_series2(l, c)?, &parse_series2(g, c)?, *max_level)?)?
        }
        Command::BasechangeCheck { l, g, max_level } => {
            serde_json::to_value(basechange_check(&parse_series2(l, c)?, &parse_series2(g, c)?, *max_level)?)?
        }
        Command::EulerChar { data, curve: label } => {
            json!({ "curve": label, "euler_characteristic": euler_characteristic(&curve(data, label)?)? })
        }
        Command::ShaCorank { data, curve: label, lambda, sign, class_number } => match (lambda, label) {
            (Some(lambda), _) => {
                let sign = sign.ok_or_else(|| anyhow!("--sign is required with --lambda"))?;
                let h = class_number.ok_or_else(|| anyhow!("--class-number is required with --lambda"))?;
                json!({ "lambda": lambda, "sign": sign, "p": c.p, "corank": sha_corank(*lambda, sign, c.p, h)? })
            }
            (None, Some(label)) => {
                let (corank, rn) = sha_corank_from_data(&curve(data, label)?)?;
                json!({ "curve": label, "corank": corank, "root_number": rn })
            }
            (None, None) => bail!("give --curve, or --lambda with --sign and --class-number"),
        },
        Command::RootNumber { level, disc } => serde_json::to_value(root_number(*level, *disc)?)?,
        Command::LambdaBc { lambda, layer } => serde_json::to_value(lambda_basechange(*lambda, c.p, *layer)?)?,
        Command::Batch { jobs } => batch(&read_jsonl::<Vec<String>>(jobs)?)?,
    })
}

/// Results come back in input order; a failing job records its error and
/// makes the whole batch exit nonzero.
fn batch(jobs: &[Vec<String>]) -> Result<Value> {
    let results: Vec<(Value, bool)> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|args| {
                scope.spawn(move || {
                    let argv = std::iter::once("twovar".to_string()).chain(args.iter().cloned());
                    let outcome = Cli::try_parse_from(argv).map_err(|e| anyhow!(e.to_string())).and_then(|cli| {
                        if matches!(cli.command, Command::Batch { .. }) {
                            bail!("batches do not nest");
                        }
                        run(&cli)
                    });
                    match outcome {
                        Ok(v) => (json!({ "args": args, "result": v }), true),
                        Err(e) => (json!({ "args": args, "error": format!("{e:#}") }), false),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or((json!({ "error": "job panicked" }), false))).collect()
    });
    let failed = results.iter().filter(|(_, ok)| !ok).count();
    let out = Value::Array(results.into_iter().map(|(v, _)| v).collect());
    if failed > 0 {
        bail!("{failed} of {} jobs failed:\n{}", jobs.len(), serde_json::to_string_pretty(&out)?);
    }
    Ok(out)
}

fn family_json(fam: &FiniteLevelFamily) -> Value {
    Value::Array(fam.values.iter().map(|(a, s)| json!({ "a": a, "coeffs": qexp_json(s, cyc_json) })).collect())
}

/// Everything measure-eval and lp-value share: the field, the characters and
/// a projector built once for the working level.
struct Measure {
    group: ClassGroup,
    rho: RingClassChar,
    chi: DirichletChar,
    tame: DirichletChar,
    projector: ProjectorSpec,
    p: u64,
    m: u32,
    level: u64,
    q_precision: usize,
}

impl Measure {
    fn new(c: &Common, a: &MeasureArgs) -> Result<Self> {
        let group = group(c, &a.field)?;
        let rho = if a.rho == 0 {
            RingClassChar::trivial(&group)
        } else {
            let all = RingClassChar::cyclic(&group)?;
            all.get(a.rho).cloned().ok_or_else(|| anyhow!("--rho {} out of range ({} characters)", a.rho, all.len()))?
        };
        let pm = c.p.pow(a.m);
        let chi = char_or(&a.chi, DirichletChar::trivial(pm))?;
        let tame = char_or(&a.tame, DirichletChar::trivial(1))?;
        let params = ConvolutionParams {
            group: &group,
            chi: &tame,
            p: c.p,
            m: a.m,
            level: a.level,
            regulator: c.regulator,
            precision: c.qprec,
        };
        params.validate()?;
        let working = params.alpha_modulus();
        let delta = params.delta();

        let target = systems(&a.eigen, twovar::data::EIGEN_53)?
            .into_iter()
            .find(|s| s.label == a.target)
            .ok_or_else(|| anyhow!("no eigensystem {} in the eigendata", a.target))?;
        let sys = PadicEigenSystem::from_exact(&target, c.p, c.precision)?;
        // Only the eigendata of the stabilized form matters here, so a short
        // expansion is enough.
        let (_, sys0) = p_stabilize(&sys.q_expansion(1)?, &sys, c.p)?;
        let beta = (sys.level % c.p != 0).then(|| sys.ap(c.p).and_then(|ap| Ok(ap.minus(sys0.ap(c.p)?)))).transpose()?;
        let companions: Vec<PadicEigenSystem> = systems(&a.companions, twovar::data::COMPANIONS_8215)?
            .iter()
            .filter(|s| working % s.level == 0)
            .map(|s| PadicEigenSystem::from_exact(s, c.p, c.precision))
            .collect::<twovar::Result<_>>()?;
        let projector = build_projector(&sys0, &companions, working, beta, false)?;
        let q_precision = c.qprec.max(delta as usize * projector.q_shrink() as usize);
        Ok(Measure { group, rho, chi, tame, projector, p: c.p, m: a.m, level: a.level, q_precision })
    }

    fn evaluate(&self, regulator: u64) -> Result<MeasureEvaluation> {
        Ok(assemble_measure(&MeasureInput {
            group: &self.group,
            rho: &self.rho,
            chi: &self.chi,
            tame: &self.tame,
            p: self.p,
            m: self.m,
            level: self.level,
            regulator,
            q_precision: self.q_precision,
            projector: &self.projector,
        })?)
    }
}

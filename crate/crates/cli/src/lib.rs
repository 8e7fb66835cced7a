//! `dehnvol`: reports over the `dehnvol-core` library.

pub mod files;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dehnvol_core::commensurability::{synthetic_chain, Division, DEFAULT_PRIME_BOUND};
use dehnvol_core::dimgroup::{minkowski_decompose, Spectrum};
use dehnvol_core::numberfield::IdealCounter;
use dehnvol_core::*;

use files::{format_ideal, parse_chain, parse_ideal, parse_observations, ChainFile, ChainRow};
use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "dehnvol",
    version,
    about = "Arithmetic of Dehn-surgery slopes, dimension groups and volumes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Significant digits for decimal values.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=70))]
    digits: u32,
    /// Square root normalizing log(epsilon): the discriminant D or the radicand d.
    #[arg(long, global = true, value_enum, default_value_t = Conv::D)]
    convention: Conv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Conv {
    #[value(name = "D")]
    D,
    #[value(name = "d")]
    LowerD,
}

impl Conv {
    fn core(self) -> Convention {
        match self {
            Conv::D => Convention::Discriminant,
            Conv::LowerD => Convention::Radicand,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Conv::D => "D (log eps / sqrt D, D the field discriminant)",
            Conv::LowerD => "d (log eps / sqrt d, d the square-free radicand)",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The surgery slope Per[p1, ..., pn].
    Theta {
        #[arg(required = true, allow_negative_numbers = true)]
        p: Vec<i64>,
    },
    /// Invariants of Q(sqrt d).
    Field {
        #[arg(
            required_unless_present = "from_surgery",
            allow_negative_numbers = true
        )]
        d: Option<i64>,
        /// Take the field of a surgery slope instead.
        #[arg(long, num_args = 1.., conflicts_with = "d", allow_negative_numbers = true)]
        from_surgery: Option<Vec<i64>>,
        /// Also report the volume of the Bianchi orbifold for this negative discriminant.
        #[arg(long, allow_negative_numbers = true)]
        paired: Option<i64>,
    },
    /// Volume prediction C log(eps)/sqrt(D), or calibration of C.
    Volume {
        /// The constant C, as a decimal.
        #[arg(long = "C")]
        c: Option<String>,
        /// Observation file to fit C against.
        #[arg(long, conflicts_with_all = ["c", "p"])]
        calibrate: Option<PathBuf>,
        /// Gap constants k and K for a volume interval.
        #[arg(long, num_args = 2, value_names = ["k", "K"])]
        bounds: Option<Vec<f64>>,
        /// Surgery coefficients p1 ... pn.
        #[arg(allow_negative_numbers = true)]
        p: Vec<i64>,
    },
    /// Classify a stationary dimension group given by its matrix.
    Classify {
        /// Row-major entries of a square matrix.
        #[arg(allow_negative_numbers = true, conflicts_with = "file")]
        entries: Vec<i64>,
        /// Matrix file: one row per line, entries separated by spaces or commas.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// N(t, A)/t per ideal class against 2 log(eps)/sqrt(D).
    Density {
        d: i64,
        #[arg(long = "t", value_parser = clap::value_parser!(u64).range(1..=100_000_000))]
        t: u64,
        /// Worker threads for counting; output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Ideal arithmetic of commensurable manifolds.
    #[command(subcommand)]
    Commensurability(Comm),
}

#[derive(Subcommand, Debug)]
enum Comm {
    /// Prime factorization of an ideal.
    Factor { d: i64, ideal: String },
    /// M1 / M2.
    Divide { d: i64, m1: String, m2: String },
    /// Prime manifolds in order, skipping exclusions.
    NextPrime {
        d: i64,
        /// Comma-separated rational primes (all primes above them) or ideals A:B.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<String>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        bound: u64,
    },
    /// Check a chain file against the gap and scaling inequalities.
    Telescope { file: PathBuf },
    /// Write a synthetic chain file obeying the scaling law exactly.
    Chain(ChainArgs),
}

#[derive(Args, Debug)]
struct ChainArgs {
    d: i64,
    #[arg(long = "t")]
    t: u64,
    #[arg(long, default_value_t = 1.0)]
    v0: f64,
    /// Index of the base class, 0 being principal.
    #[arg(long, default_value_t = 0)]
    class: usize,
    #[arg(long = "k", default_value_t = 1.0)]
    lower: f64,
    #[arg(long = "K", default_value_t = 3.0)]
    upper: f64,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<files::Diagnostics> for Failure {
    fn from(d: files::Diagnostics) -> Self {
        Failure::Domain(d.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn domain<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Domain(msg.into()))
}

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => Outcome {
            stdout: text,
            stderr: String::new(),
            code: 0,
        },
        Err(Failure::Domain(msg)) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 1,
        },
        Err(Failure::Usage(msg)) => Outcome {
            stdout: String::new(),
            stderr: format!("usage error: {msg}\n"),
            code: 2,
        },
    }
}

struct Ctx {
    digits: usize,
    convention: Conv,
}

impl Ctx {
    fn real(&self, x: &Real) -> String {
        x.to_decimal(self.digits)
    }

    fn float(&self, x: f64) -> String {
        if x == 0.0 || !x.is_finite() {
            return x.to_string();
        }
        let e = x.abs().log10().floor() as i64;
        let decimals = (self.digits as i64 - 1 - e).max(0) as usize;
        format!("{x:.decimals$}")
    }

    fn report(&self, command: &str, input: String) -> Report {
        Report::new(command, &input, self.convention.describe())
    }
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn execute(cli: &Cli) -> Res<String> {
    let ctx = Ctx {
        digits: cli.digits as usize,
        convention: cli.convention,
    };
    let report = match &cli.command {
        Command::Theta { p } => theta(&ctx, p)?,
        Command::Field {
            d,
            from_surgery,
            paired,
        } => field(&ctx, *d, from_surgery.as_deref(), *paired)?,
        Command::Volume {
            c,
            calibrate,
            bounds,
            p,
        } => match (calibrate, c) {
            (Some(path), _) => calibration(&ctx, path)?,
            (None, Some(c)) => volume(&ctx, c, p, bounds.as_deref())?,
            (None, None) => return usage("C unspecified: pass --C <value> or --calibrate <file>"),
        },
        Command::Classify { entries, file } => classify(&ctx, entries, file.as_ref())?,
        Command::Density { d, t, threads } => density(&ctx, *d, *t, *threads)?,
        Command::Commensurability(c) => match c {
            Comm::Factor { d, ideal } => factor(&ctx, *d, ideal)?,
            Comm::Divide { d, m1, m2 } => divide_cmd(&ctx, *d, m1, m2)?,
            Comm::NextPrime {
                d,
                exclude,
                count,
                bound,
            } => next_prime(&ctx, *d, exclude, *count, *bound)?,
            Comm::Telescope { file } => telescope(&ctx, file)?,
            Comm::Chain(args) => return chain(args),
        },
    };
    Ok(report.render(cli.format))
}

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).or_else(|e| domain(format!("{}: {e}", path.display())))
}

fn polynomial(c: &[impl ToString; 3]) -> String {
    let [a, b, c] = c
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .try_into()
        .unwrap();
    let term = |coef: &str, var: &str, first: bool| -> String {
        let (neg, mag) = match coef.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, coef),
        };
        if mag == "0" {
            return String::new();
        }
        let body = if mag == "1" && !var.is_empty() {
            var.to_string()
        } else {
            format!("{mag}{var}")
        };
        match (first, neg) {
            (true, true) => format!("-{body}"),
            (true, false) => body,
            (false, true) => format!(" - {body}"),
            (false, false) => format!(" + {body}"),
        }
    };
    format!(
        "{}{}{}",
        term(&a, "x^2", true),
        term(&b, "x", false),
        term(&c, "", false)
    )
}

fn theta(ctx: &Ctx, p: &[i64]) -> Res<Report> {
    let theta = surgery_slope(p)?;
    let cf = cf_expand(&theta);
    let field = field_of(&theta)?;
    let mut r = ctx.report("theta", join(p, " "));
    r.put("theta", &theta)
        .put(
            "theta_decimal",
            ctx.real(&Real::from_quadratic(theta.as_number())),
        )
        .put(
            "minimal_polynomial",
            polynomial(&theta.minimal_polynomial()),
        )
        .put("continued_fraction", &cf)
        .put("conjugate", theta.conjugate())
        .put("d", field.radicand())
        .put("D", field.discriminant());
    Ok(r)
}

fn field(ctx: &Ctx, d: Option<i64>, surgery: Option<&[i64]>, paired: Option<i64>) -> Res<Report> {
    let (field, input) = match (d, surgery) {
        (Some(d), _) => (RealQuadraticField::new(d)?, d.to_string()),
        (None, Some(p)) => (
            field_of(&surgery_slope(p)?)?,
            format!("--from-surgery {}", join(p, " ")),
        ),
        (None, None) => return usage("give d or --from-surgery"),
    };
    let cmp = comparison_report(&field, paired)?;
    let eps = field.fundamental_unit();
    let mut r = ctx.report("field", input);
    r.put("d", field.radicand())
        .put("D", field.discriminant())
        .put("epsilon", eps)
        .put(
            "epsilon_decimal",
            ctx.real(&Real::from_quadratic(eps.as_number())),
        )
        .put("epsilon_norm", field.unit_norm())
        .put("regulator", ctx.real(field.regulator()))
        .put("h", field.class_number())
        .put("density", ctx.real(&cmp.density))
        .put("zeta_residue", ctx.real(&cmp.residue))
        .put("residue_over_density", ctx.real(&cmp.residue_over_density))
        .put(
            "log_eps_over_sqrt_D",
            ctx.real(&cmp.log_unit_over_root_disc),
        )
        .put(
            "log_eps_over_sqrt_d",
            ctx.real(&cmp.log_unit_over_root_radicand),
        );
    let rows = field
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                i.to_string(),
                c.representative().to_string(),
                c.is_principal().to_string(),
                c.cycle().len().to_string(),
            ]
        })
        .collect();
    r.table(
        "classes",
        &["index", "representative", "principal", "cycle_length"],
        rows,
    );
    if let Some(h) = cmp.humbert {
        r.put("paired_disc", h.disc)
            .put("paired_volume", ctx.float(h.value))
            .put("paired_error_bound", format!("{:.2e}", h.error_bound))
            .put("paired_terms", h.terms);
    }
    Ok(r)
}

fn volume(ctx: &Ctx, c: &str, p: &[i64], bounds: Option<&[f64]>) -> Res<Report> {
    if p.is_empty() {
        return usage("surgery coefficients are required");
    }
    let c_real: Real = c
        .parse()
        .or_else(|_| usage(format!("C = {c:?} is not a decimal number")))?;
    let pred = predict_volume(p, &c_real)?;
    let mut r = ctx.report("volume", format!("--C {c} {}", join(p, " ")));
    r.put("surgery", join(p, " "))
        .put("theta", &pred.theta)
        .put("d", pred.field.radicand())
        .put("D", pred.field.discriminant())
        .put("epsilon", pred.field.fundamental_unit())
        .put("C", c)
        .put("volume", ctx.real(pred.value_in(ctx.convention.core())))
        .put("volume_sqrt_D", ctx.real(&pred.value))
        .put("volume_sqrt_d", ctx.real(&pred.value_d))
        .put("C_times_residue", ctx.real(&pred.residue_form));
    if let Some([k, big_k]) = bounds.map(|b| [b[0], b[1]]) {
        let gb = GapBounds::new(k, big_k)?;
        let (lo, hi) = volume_bounds(&pred.field, &gb);
        r.put("bounds_k", k)
            .put("bounds_K", big_k)
            .put("volume_lower", ctx.real(&lo))
            .put("volume_upper", ctx.real(&hi));
    }
    Ok(r)
}

fn calibration(ctx: &Ctx, path: &PathBuf) -> Res<Report> {
    let obs = parse_observations(&read(path)?)?;
    let fit = calibrate_c_in(&obs, ctx.convention.core())?;
    let mut r = ctx.report("volume", format!("--calibrate {}", path.display()));
    r.put("observations", obs.len())
        .put("C", ctx.float(fit.c))
        .put("relative_spread", ctx.float(fit.relative_spread));
    let rows = obs
        .iter()
        .enumerate()
        .map(|(i, o)| {
            vec![
                join(&o.surgery, "-"),
                o.source.clone(),
                ctx.float(o.measured_volume),
                ctx.float(fit.regressors[i]),
                ctx.float(fit.pointwise[i]),
                ctx.float(fit.residuals[i]),
            ]
        })
        .collect();
    r.table(
        "fit",
        &[
            "surgery",
            "source",
            "measured",
            "log_eps_over_root",
            "pointwise_C",
            "residual",
        ],
        rows,
    );
    Ok(r)
}

fn parse_matrix_file(text: &str) -> Res<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<i64>, _> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect();
        match row {
            Ok(r) => rows.push(r),
            Err(_) => return domain(format!("line {}: entries must be integers", n + 1)),
        }
    }
    Ok(rows)
}

fn matrix_string<T: ToString>(m: &[Vec<T>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("({})", join(r, ","))).collect();
    format!("({})", rows.join(","))
}

fn classify(ctx: &Ctx, entries: &[i64], file: Option<&PathBuf>) -> Res<Report> {
    let (rows, input) = match file {
        Some(path) => (
            parse_matrix_file(&read(path)?)?,
            format!("--file {}", path.display()),
        ),
        None => {
            let n = (entries.len() as f64).sqrt().round() as usize;
            if entries.is_empty() || n * n != entries.len() {
                return usage(format!(
                    "{} entries do not form a square matrix",
                    entries.len()
                ));
            }
            (
                entries.chunks(n).map(|c| c.to_vec()).collect(),
                join(entries, " "),
            )
        }
    };
    let g = validate_stationary(&rows)?;
    let mut r = ctx.report("classify", input);
    r.put("matrix", matrix_string(g.matrix()))
        .put("rank", g.rank())
        .put("det", g.det())
        .put("primitivity_exponent", g.primitivity_exponent());
    match g.spectrum() {
        Spectrum::Certified(cert) => {
            let (lo, hi) = cert.bracket();
            r.put("pf_eigenvalue_estimate", ctx.float(cert.estimate))
                .put("pf_bracket", format!("[{lo:.12}, {hi:.12}]"))
                .put("characteristic_polynomial", join(&cert.char_poly, " "))
                .put("classification", "unsupported for rank other than 2");
        }
        Spectrum::Quadratic { lambda, theta } => {
            let a = associated_ideal(&g)?;
            let classes = a.field.classes();
            let index = classes
                .iter()
                .position(|c| c == &a.ideal_class)
                .unwrap_or(0);
            let reps = groups_for_field(&a.field)?;
            let digits = minkowski_decompose(&g.as_mat2()?)
                .map(|d| join(&d, " "))
                .unwrap_or_else(|_| "none".into());
            r.put("pf_eigenvalue", lambda)
                .put(
                    "pf_eigenvalue_decimal",
                    ctx.real(&Real::from_quadratic(lambda.as_number())),
                )
                .put("rotation_number", theta)
                .put(
                    "rotation_number_decimal",
                    ctx.real(&Real::from_quadratic(theta.as_number())),
                )
                .put("minkowski_factors", digits)
                .put("d", a.field.radicand())
                .put("D", a.field.discriminant())
                .put("h", a.field.class_number())
                .put("ideal", a.ideal)
                .put("ideal_class", index)
                .put("principal", a.ideal_class.is_principal())
                .put("order_conductor", &a.order_conductor)
                .put("lattice_conductor", &a.lattice.conductor)
                .put(
                    "class_representative_group",
                    matrix_string(reps[index].matrix()),
                )
                .put(
                    "equivalent_to_representative",
                    morita_equivalent(&g, &reps[index])?,
                );
            if let Some(w) = &a.warning {
                r.put("warning", w);
            }
        }
    }
    Ok(r)
}

fn density(ctx: &Ctx, d: i64, t: u64, threads: Option<usize>) -> Res<Report> {
    let field = RealQuadraticField::new(d)?;
    let threads = threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let counts = IdealCounter::new(&field, t).count_parallel(threads);
    let limit = field.dirichlet_density();
    let limit_f = limit.to_f64();
    let mut checkpoints: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
        .take_while(|&x| x < t)
        .collect();
    checkpoints.push(t);
    let mut rows = Vec::new();
    for &cp in &checkpoints {
        for (i, class) in field.classes().iter().enumerate() {
            let n = counts.count_in_class(class, cp);
            let ratio = n as f64 / cp as f64;
            rows.push(vec![
                cp.to_string(),
                i.to_string(),
                n.to_string(),
                ctx.float(ratio),
                ctx.float((ratio - limit_f) / limit_f),
            ]);
        }
    }
    let mut r = ctx.report("density", format!("{d} --t {t}"));
    r.put("d", d)
        .put("D", field.discriminant())
        .put("h", field.class_number())
        .put("limit", ctx.real(&limit));
    r.table(
        "counts",
        &["t", "class", "N", "N_over_t", "relative_error"],
        rows,
    );
    Ok(r)
}

fn field_for(d: i64) -> Res<RealQuadraticField> {
    Ok(RealQuadraticField::new(d)?)
}

fn ideal(field: &RealQuadraticField, s: &str) -> Res<QuadIdeal> {
    parse_ideal(field, s).or_else(domain)
}

fn factor(ctx: &Ctx, d: i64, s: &str) -> Res<Report> {
    let field = field_for(d)?;
    let i = ideal(&field, s)?;
    let factors = prime_decompose_manifold(&ManifoldIdeal::of(i))?;
    let product: Vec<String> = factors
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.ideal.to_string()
            } else {
                format!("{}^{e}", p.ideal)
            }
        })
        .collect();
    let mut r = ctx.report("commensurability factor", format!("{d} -- {s}"));
    r.put("ideal", i).put("norm", i.norm());
    r.put(
        "factorization",
        if product.is_empty() {
            "(1)".to_string()
        } else {
            product.join("·")
        },
    );
    let rows = factors
        .iter()
        .map(|(p, e)| {
            let class = field
                .class_of(&p.ideal)
                .map(|c| c.is_principal())
                .unwrap_or(false);
            vec![
                p.ideal.to_string(),
                format_ideal(&p.ideal),
                p.ideal.norm().to_string(),
                e.to_string(),
                class.to_string(),
            ]
        })
        .collect();
    r.table(
        "primes",
        &["prime", "syntax", "norm", "exponent", "principal"],
        rows,
    );
    Ok(r)
}

fn divide_cmd(ctx: &Ctx, d: i64, a: &str, b: &str) -> Res<Report> {
    let field = field_for(d)?;
    let (m1, m2) = (
        ManifoldIdeal::new(a, ideal(&field, a)?),
        ManifoldIdeal::new(b, ideal(&field, b)?),
    );
    let mut r = ctx.report("commensurability divide", format!("{d} {a} {b}"));
    r.put("m1", m1.ideal).put("m2", m2.ideal);
    match divide(&m1, &m2)? {
        Division::Quotient(q) => {
            r.put("outcome", "quotient")
                .put("quotient", q.ideal)
                .put("quotient_syntax", format_ideal(&q.ideal));
            r.put(
                "covering_degree",
                covering_degree(&m1, &m2)
                    .map(|x| x.to_string())
                    .unwrap_or_else(|_| "-".into()),
            );
        }
        Division::RelativelyPrime => {
            r.put("outcome", "relatively prime");
        }
        Division::NotDivisible { common } => {
            r.put("outcome", "not divisible")
                .put("common_factor", common);
        }
    }
    Ok(r)
}

fn next_prime(ctx: &Ctx, d: i64, exclude: &[String], count: usize, bound: u64) -> Res<Report> {
    let field = field_for(d)?;
    let mut excluded = Vec::new();
    for item in exclude.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        if item.contains(':') {
            excluded.push(ideal(&field, item)?);
        } else {
            let p: u64 = item
                .parse()
                .or_else(|_| usage(format!("exclusion {item:?} is neither a prime nor A:B")))?;
            excluded.extend(field.prime_splitting(p)?.primes());
        }
    }
    let mut r = ctx.report(
        "commensurability next-prime",
        format!("{d} --exclude {} --count {count}", exclude.join(",")),
    );
    r.put("excluded", join(&excluded, " "));
    let mut rows = Vec::new();
    for _ in 0..count {
        let choice = next_prime_manifold(&field, &excluded, bound)?;
        let p = choice.manifold.ideal;
        rows.push(vec![
            p.to_string(),
            format_ideal(&p),
            p.norm().to_string(),
            choice.principal.to_string(),
            choice.note.unwrap_or_default(),
        ]);
        excluded.push(p);
    }
    if count == 1 {
        r.put("prime", &rows[0][0]);
    }
    r.table(
        "primes",
        &["prime", "syntax", "norm", "principal", "note"],
        rows,
    );
    Ok(r)
}

fn telescope(ctx: &Ctx, path: &PathBuf) -> Res<Report> {
    let chain = parse_chain(&read(path)?)?;
    let get = |k: &str| -> Res<f64> { chain.get::<f64>(k).or_else(domain) };
    let d = chain.get::<i64>("d").or_else(domain)?;
    let t = chain.get::<u64>("t").or_else(domain)?;
    let bounds = GapBounds::new(get("k")?, get("K")?)?;
    let field = field_for(d)?;
    let mut members = Vec::new();
    for row in &chain.rows {
        let i = ideal(&field, &row.ideal).or_else(|e| match e {
            Failure::Domain(m) | Failure::Usage(m) => domain(format!("member {}: {m}", row.label)),
        })?;
        members.push(ManifoldIdeal::new(&row.label, i).with_volume(row.volume));
    }
    let Some(first) = members.first() else {
        return domain("chain has no members");
    };
    let base = field.class_of(&first.ideal)?;
    let class = CommensurabilityClass::new(field.clone(), base, members)?;
    let rep = telescoping_check(&class, t, &bounds)?;
    let mut r = ctx.report("commensurability telescope", path.display().to_string());
    r.put("d", d)
        .put("t", t)
        .put("k", bounds.lower())
        .put("K", bounds.upper());
    r.put("N_t", rep.n_t)
        .put("members", rep.volumes.len())
        .put("degenerate", rep.degenerate);
    if let Some(g) = &rep.gaps {
        let v = g
            .violation
            .map(|(i, s)| format!("gap {i}, {s} bound"))
            .unwrap_or_else(|| "none".into());
        r.put("gap_violation", v);
    }
    if let Some(b) = rep.telescoped {
        r.put(
            "telescoped",
            format!(
                "{} < {} < {}",
                ctx.float(b.lower),
                ctx.float(b.value),
                ctx.float(b.upper)
            ),
        );
    }
    if let (Some(ratio), Some(err)) = (rep.endpoint_ratio, rep.endpoint_relative_error) {
        r.put("endpoint_ratio", ctx.float(ratio))
            .put("endpoint_relative_error", format!("{err:.3e}"));
    }
    if let Some(b) = rep.base {
        r.put(
            "base",
            format!(
                "{} < {} < {}",
                ctx.float(b.lower),
                ctx.float(b.value),
                ctx.float(b.upper)
            ),
        );
    }
    r.put("verdict", if rep.passed { "pass" } else { "fail" });
    if let Some(f) = rep.failure() {
        r.put("failure", f);
    }
    Ok(r)
}

fn chain(a: &ChainArgs) -> Res<String> {
    let field = field_for(a.d)?;
    let classes = field.classes();
    let Some(class) = classes.get(a.class) else {
        return domain(format!(
            "class index {} out of range (h = {})",
            a.class,
            classes.len()
        ));
    };
    GapBounds::new(a.lower, a.upper)?;
    let c = synthetic_chain(&field, class, a.t, a.v0)?;
    let mut directives = std::collections::BTreeMap::new();
    directives.insert("d".to_string(), a.d.to_string());
    directives.insert("t".to_string(), a.t.to_string());
    directives.insert("k".to_string(), a.lower.to_string());
    directives.insert("K".to_string(), a.upper.to_string());
    let rows = c
        .members()
        .iter()
        .map(|m| ChainRow {
            label: m.label.clone(),
            ideal: format_ideal(&m.ideal),
            volume: m.volume.unwrap_or(0.0),
        })
        .collect();
    Ok(ChainFile { directives, rows }.render())
}

//! Command-line front end. Thin dispatch over the library: group reports,
//! skew invariants, decompositions, verification, apolarity, regular-number
//! search, and the self-test suite.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 invalid spec or input,
//! 3 element cap exceeded, 4 requested eigenvalue order not regular,
//! 5 verification failure, 6 size budget exceeded.

use std::path::PathBuf;
use std::sync::mpsc::{self, Sender};
use std::thread::JoinHandle;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::apolar::{
    rs_bound_report, steinberg_check, sylvester_binary_rank, STEINBERG_MAX_DEGREE,
    STEINBERG_MAX_ORDER,
};
use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::groups::{FamilySpec, ReflectionGroup, DEFAULT_CAP};
use crate::io;
use crate::poly::{LinearForm, Polynomial};
use crate::selftest::run_selftest;
use crate::skew::build_skew_invariant;
use crate::waring::{decompose, verify, WaringDecomposition};

#[derive(Parser)]
#[command(
    name = "skewrank",
    version,
    about = "Exact Waring decompositions and apolarity for reflection group invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group family.
    #[arg(long, global = true, value_enum)]
    group: Option<GroupKind>,

    /// Rank parameter n for sym, hyper, demihyper, and imprimitive.
    #[arg(long, global = true)]
    n: Option<u32>,

    /// Dihedral parameter m for the group of the form x^m - y^m.
    #[arg(long, global = true)]
    m: Option<u32>,

    /// Imprimitive parameter d of G(de, e, n).
    #[arg(long, global = true)]
    d: Option<u32>,

    /// Imprimitive parameter e of G(de, e, n).
    #[arg(long, global = true)]
    e: Option<u32>,

    /// Monomial exponents for cyclicprod, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    a: Option<Vec<u32>>,

    /// Custom group JSON file with generators.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Polynomial given inline, e.g. "x^5 - y^5" or "x1*x2^2".
    #[arg(long, global = true)]
    form: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Maximum number of group elements to enumerate.
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Worker threads for verification; defaults to available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the randomized checks in selftest.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Run only selftest items whose name contains this string.
    #[arg(long, global = true)]
    only: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupKind {
    Sym,
    Hyper,
    Demihyper,
    Imprimitive,
    Cyclicprod,
    Dihedral,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Order, degrees, reflections, hyperplanes, and regular numbers.
    Info,
    /// The fundamental skew invariant as a polynomial.
    Skew,
    /// Waring decomposition of the skew invariant via coset reduction.
    Decompose {
        /// Eigenvalue order to use; defaults to the largest regular number.
        #[arg(long)]
        regular_number: Option<u32>,
    },
    /// Re-verify a decomposition JSON file against a group or form.
    Verify { path: PathBuf },
    /// Hilbert function, annihilator generators, and rank bounds.
    Apolar {
        /// Also compute the exact binary rank (two-variable forms).
        #[arg(long)]
        sylvester: bool,
    },
    /// Regular numbers and the resulting rank bracket.
    Regular,
    /// Run the built-in consistency suite.
    Selftest,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // a failure here only means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => 3,
        Error::NotRegular { .. } => 4,
        Error::VerificationFailed(_) => 5,
        Error::BudgetExceeded(_) => 6,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Info => cmd_info(cli),
        Command::Skew => cmd_skew(cli),
        Command::Decompose { regular_number } => cmd_decompose(cli, *regular_number),
        Command::Verify { path } => cmd_verify(cli, path),
        Command::Apolar { sylvester } => cmd_apolar(cli, *sylvester),
        Command::Regular => cmd_regular(cli),
        Command::Selftest => cmd_selftest(cli),
    }
}

fn element_cap(cli: &Cli) -> usize {
    if let Some(cap) = cli.cap {
        return cap;
    }
    if let Ok(text) = std::env::var("SKEWRANK_CAP") {
        if let Ok(cap) = text.parse() {
            return cap;
        }
        eprintln!("warning: ignoring unparsable SKEWRANK_CAP={text:?}");
    }
    DEFAULT_CAP
}

fn family_spec(cli: &Cli, kind: GroupKind) -> Result<FamilySpec> {
    let need = |v: Option<u32>, flag: &str| {
        v.ok_or_else(|| Error::InvalidFamily(format!("this family needs {flag}")))
    };
    Ok(match kind {
        GroupKind::Sym => FamilySpec::Symmetric { n: need(cli.n, "--n")? },
        GroupKind::Hyper => FamilySpec::Hyperoctahedral { n: need(cli.n, "--n")? },
        GroupKind::Demihyper => FamilySpec::Demihyperoctahedral { n: need(cli.n, "--n")? },
        GroupKind::Imprimitive => FamilySpec::Imprimitive {
            d: need(cli.d, "--d")?,
            e: need(cli.e, "--e")?,
            n: need(cli.n, "--n")?,
        },
        GroupKind::Cyclicprod => FamilySpec::CyclicProduct {
            exponents: cli
                .a
                .clone()
                .ok_or_else(|| Error::InvalidFamily("cyclicprod needs --a".into()))?,
        },
        GroupKind::Dihedral => FamilySpec::Dihedral { m: need(cli.m, "--m")? },
        GroupKind::Custom => {
            return Err(Error::InvalidFamily(
                "custom groups are loaded with --config".into(),
            ))
        }
    })
}

fn resolve_group(cli: &Cli) -> Result<ReflectionGroup> {
    let cap = element_cap(cli);
    match (cli.group, &cli.config) {
        (Some(GroupKind::Custom), None) => Err(Error::InvalidFamily(
            "custom groups need a --config file".into(),
        )),
        (Some(GroupKind::Custom), Some(path)) | (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let dto: io::GroupConfigDto = serde_json::from_str(&text)?;
            let _p = Progress::start("enumerating group elements");
            io::group_from_config(&dto, cap)
        }
        (Some(kind), None) => {
            let spec = family_spec(cli, kind)?;
            let _p = Progress::start("enumerating group elements");
            ReflectionGroup::build_family(&spec, cap)
        }
        (Some(_), Some(_)) => Err(Error::InvalidFamily(
            "give either a --group family or a --config file, not both".into(),
        )),
        (None, None) => Err(Error::InvalidFamily(
            "no group given; use --group or --config".into(),
        )),
    }
}

/// The polynomial a command operates on: a group's skew invariant, or an
/// inline form. Returns the group when one was built.
fn resolve_form(cli: &Cli) -> Result<(Polynomial, Option<ReflectionGroup>)> {
    match (&cli.form, cli.group.is_some() || cli.config.is_some()) {
        (Some(text), false) => Ok((io::parse_form(text)?, None)),
        (None, true) => {
            let g = resolve_group(cli)?;
            let f = build_skew_invariant(&g)?;
            Ok((f.polynomial, Some(g)))
        }
        (Some(_), true) => Err(Error::InvalidFamily(
            "give either a group or --form, not both".into(),
        )),
        (None, false) => Err(Error::InvalidFamily(
            "nothing to work on; use --group, --config, or --form".into(),
        )),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: String) -> Result<()> {
    match cli.format {
        Format::Json => print!("{}", io::to_json_string(value)?),
        Format::Text => println!("{text}"),
    }
    Ok(())
}

fn cmd_info(cli: &Cli) -> Result<i32> {
    let g = resolve_group(cli)?;
    let info = io::group_info(&g)?;
    let mut text = String::new();
    text.push_str(&format!("group:            {}\n", info.name));
    text.push_str(&format!("order:            {}\n", info.order));
    text.push_str(&format!("variables:        {}\n", info.nvars));
    text.push_str(&format!("field order:      {}\n", info.field_order));
    text.push_str(&format!("degrees:          {:?}\n", info.degrees));
    text.push_str(&format!("reflections:      {}\n", info.reflection_count));
    text.push_str(&format!("regular numbers:  {:?}\n", info.regular_numbers));
    text.push_str("hyperplanes:\n");
    for h in &info.hyperplanes {
        let functional: Vec<CyclotomicNumber> = h
            .functional
            .iter()
            .map(io::cyclo_from_dto)
            .collect::<Result<_>>()?;
        text.push_str(&format!(
            "  {}  (multiplicity {})\n",
            fmt_form(&functional),
            h.multiplicity
        ));
    }
    text.pop();
    emit(cli, &info, text)?;
    Ok(0)
}

fn cmd_skew(cli: &Cli) -> Result<i32> {
    let g = resolve_group(cli)?;
    let f = build_skew_invariant(&g)?;
    let dto = io::skew_to_dto(&f);
    let text = format!(
        "group:   {}\ndegree:  {}\nf = {}",
        f.group_name,
        f.degree,
        fmt_poly(&f.polynomial)
    );
    emit(cli, &dto, text)?;
    Ok(0)
}

fn cmd_decompose(cli: &Cli, regular_number: Option<u32>) -> Result<i32> {
    let g = resolve_group(cli)?;
    let f = build_skew_invariant(&g)?;
    let d = match regular_number {
        Some(d) => d,
        None => largest_regular(&g)?,
    };
    let dec = {
        let _p = Progress::start("decomposing");
        decompose(&g, d)?
    };
    let ver = {
        let _p = Progress::start("verifying");
        verify(&dec, &f.polynomial)?
    };
    if !ver.exact {
        return Err(Error::VerificationFailed(format!(
            "expansion of the {}-term decomposition is not a nonzero multiple of f",
            dec.terms.len()
        )));
    }
    let report = {
        let _p = Progress::start("computing rank bounds");
        rs_bound_report(&f.polynomial, Some(&dec))?
    };
    let mut dto = io::decomposition_to_dto(&dec, &ver)?;
    dto.certified = Some(report.certified);

    let mut text = String::new();
    text.push_str(&format!("group:           {}\n", g.name()));
    text.push_str(&format!("regular number:  {d}\n"));
    text.push_str(&format!("exponent D:      {}\n", dec.exponent));
    text.push_str(&format!("terms:           {}\n", dec.terms.len()));
    for (c, l) in &dec.terms {
        text.push_str(&format!(
            "  {} * ({})^{}\n",
            fmt_cyclo_factor(c),
            fmt_form(l.coeffs()),
            dec.exponent
        ));
    }
    text.push_str(&format!(
        "verification:    exact, sum = {} * f\n",
        fmt_cyclo_factor(ver.scalar.as_ref().expect("exact result carries a scalar"))
    ));
    text.push_str(&format!(
        "rank bounds:     {} <= r <= {}{}",
        report.rs_lower_bound,
        dec.terms.len(),
        if report.certified { "  (certified minimal)" } else { "" }
    ));
    emit(cli, &dto, text)?;
    Ok(0)
}

fn largest_regular(g: &ReflectionGroup) -> Result<u32> {
    let regular = g.regular_numbers()?;
    regular.last().copied().ok_or(Error::NotRegular { d: 0 })
}

fn cmd_verify(cli: &Cli, path: &PathBuf) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let dto: io::DecompositionDto = serde_json::from_str(&text)?;
    let (dec, _claimed) = io::decomposition_from_dto(&dto)?;
    let (f, _group) = resolve_form(cli)?;
    let ver = {
        let _p = Progress::start("verifying");
        verify(&dec, &f)?
    };
    let out = io::VerificationDto {
        exact: ver.exact,
        scalar: ver.scalar.as_ref().map(io::cyclo_to_dto),
    };
    let text = match &ver.scalar {
        Some(c) if ver.exact => format!(
            "exact: {} terms sum to {} * f",
            ver.term_count,
            fmt_cyclo_factor(c)
        ),
        _ => format!("failed: {} terms do not sum to a multiple of f", ver.term_count),
    };
    emit(cli, &out, text)?;
    Ok(if ver.exact { 0 } else { 5 })
}

fn cmd_apolar(cli: &Cli, sylvester: bool) -> Result<i32> {
    let (f, group) = resolve_form(cli)?;
    let degree = f
        .homogeneous_degree()
        .ok_or_else(|| Error::BadForm("apolar reports need a nonzero homogeneous form".into()))?;
    if degree > STEINBERG_MAX_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "form degree {degree} exceeds the report budget {STEINBERG_MAX_DEGREE}"
        )));
    }
    if let Some(g) = &group {
        if g.order() > STEINBERG_MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "group order {} exceeds the report budget {STEINBERG_MAX_ORDER}",
                g.order()
            )));
        }
    }

    // for a group's skew invariant, a decomposition supplies the upper bound
    let dec: Option<WaringDecomposition> = match &group {
        Some(g) => {
            let d = largest_regular(g)?;
            let _p = Progress::start("decomposing");
            Some(decompose(g, d)?)
        }
        None => None,
    };
    let report = {
        let _p = Progress::start("computing apolar report");
        rs_bound_report(&f, dec.as_ref())?
    };
    let mut dto = io::apolar_to_dto(&report);
    if let Some(g) = &group {
        let skew = build_skew_invariant(g)?;
        let _p = Progress::start("checking invariant operators");
        dto.steinberg = Some(steinberg_check(g, &skew)?);
    }
    if sylvester {
        dto.sylvester_rank = Some(sylvester_binary_rank(&f)?);
    }

    let mut text = String::new();
    text.push_str(&format!("hilbert function:   {:?}\n", report.hilbert));
    text.push_str(&format!("dim A^f:            {}\n", report.dim_af));
    text.push_str(&format!("generator degrees:  {:?}\n", report.generator_degrees));
    text.push_str(&format!("delta:              {}\n", report.delta));
    text.push_str(&format!("lower bound:        {}\n", report.rs_lower_bound));
    match report.upper_bound {
        Some(u) => text.push_str(&format!("upper bound:        {u}\n")),
        None => text.push_str("upper bound:        none\n"),
    }
    text.push_str(&format!("certified:          {}", report.certified));
    if let Some(ccg) = report.ccg_reference {
        text.push_str(&format!("\nmonomial rank:      {ccg}"));
    }
    if let Some(s) = dto.steinberg {
        text.push_str(&format!("\nsteinberg check:    {}", if s { "pass" } else { "FAIL" }));
    }
    if let Some(r) = dto.sylvester_rank {
        text.push_str(&format!("\nsylvester rank:     {r}"));
    }
    emit(cli, &dto, text)?;
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RegularReport {
    group: String,
    order: usize,
    degrees: Vec<u32>,
    largest_degree: u32,
    largest_degree_regular: bool,
    regular_numbers: Vec<u32>,
    largest_regular: u32,
    /// |W| / d_n, the cactus and smoothable rank of the skew invariant.
    cactus_rank: usize,
    /// |W| / D for the greatest regular number D; an upper bound for the rank.
    upper_bound: usize,
}

fn cmd_regular(cli: &Cli) -> Result<i32> {
    let g = resolve_group(cli)?;
    let degrees = g.degrees()?.to_vec();
    let dn = *degrees.last().expect("positive rank");
    let regular = g.regular_numbers()?;
    let dstar = largest_regular(&g)?;
    let report = RegularReport {
        group: g.name().to_string(),
        order: g.order(),
        largest_degree: dn,
        largest_degree_regular: regular.contains(&dn),
        largest_regular: dstar,
        cactus_rank: g.order() / dn as usize,
        upper_bound: g.order() / dstar as usize,
        degrees,
        regular_numbers: regular,
    };
    let text = format!(
        "group:                 {}\norder:                 {}\ndegrees:               {:?}\nregular numbers:       {:?}\nlargest degree:        {} ({}regular)\ngreatest regular:      {}\ncactus rank |W|/d_n:   {}\nupper bound |W|/D:     {}",
        report.group,
        report.order,
        report.degrees,
        report.regular_numbers,
        report.largest_degree,
        if report.largest_degree_regular { "" } else { "not " },
        report.largest_regular,
        report.cactus_rank,
        report.upper_bound
    );
    emit(cli, &report, text)?;
    Ok(0)
}

fn cmd_selftest(cli: &Cli) -> Result<i32> {
    let report = run_selftest(cli.seed, cli.only.as_deref());
    match cli.format {
        Format::Json => {
            for item in &report.items {
                eprintln!(
                    "{} {} ({} ms)",
                    if item.pass { "pass" } else { "FAIL" },
                    item.name,
                    item.millis
                );
            }
            print!("{}", io::to_json_string(&report)?);
        }
        Format::Text => {
            let mut text = String::new();
            for item in &report.items {
                text.push_str(&format!(
                    "{} {} ({} ms)\n",
                    if item.pass { "pass" } else { "FAIL" },
                    item.name,
                    item.millis
                ));
                if let Some(detail) = &item.detail {
                    text.push_str(&format!("     {detail}\n"));
                }
            }
            text.push_str(&format!("{} passed, {} failed", report.passed, report.failed));
            println!("{text}");
        }
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

/// Prints a note to stderr every five seconds while a long stage runs.
struct Progress {
    stop: Option<Sender<()>>,
    handle: Option<JoinHandle<()>>,
}

impl Progress {
    fn start(label: &'static str) -> Progress {
        let (stop, rx) = mpsc::channel();
        let handle = std::thread::spawn(move || {
            let started = std::time::Instant::now();
            while let Err(mpsc::RecvTimeoutError::Timeout) =
                rx.recv_timeout(Duration::from_secs(5))
            {
                eprintln!("{label}... {}s", started.elapsed().as_secs());
            }
        });
        Progress { stop: Some(stop), handle: Some(handle) }
    }
}

impl Drop for Progress {
    fn drop(&mut self) {
        drop(self.stop.take());
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn fmt_rational(r: &crate::cyclo::Rational) -> String {
    r.to_string()
}

/// Readable rendering of a cyclotomic number, with z{m} for the primitive
/// m-th root of unity.
pub fn fmt_cyclo(c: &CyclotomicNumber) -> String {
    if let Some(r) = c.as_rational() {
        return fmt_rational(&r);
    }
    let m = c.order();
    let mut out = String::new();
    for (k, r) in c.terms() {
        let sign_negative = r < &crate::cyclo::rat_int(0);
        let mag = if sign_negative { -r.clone() } else { r.clone() };
        if out.is_empty() {
            if sign_negative {
                out.push('-');
            }
        } else {
            out.push_str(if sign_negative { " - " } else { " + " });
        }
        let coeff = fmt_rational(&mag);
        if k == 0 {
            out.push_str(&coeff);
            continue;
        }
        if coeff != "1" {
            out.push_str(&coeff);
            out.push('*');
        }
        out.push_str(&format!("z{m}"));
        if k > 1 {
            out.push_str(&format!("^{k}"));
        }
    }
    out
}

fn needs_parens(s: &str) -> bool {
    s.contains('+') || s.contains(' ') || s[1..].contains('-')
}

/// Like fmt_cyclo, parenthesized when the rendering is a sum.
fn fmt_cyclo_factor(c: &CyclotomicNumber) -> String {
    let s = fmt_cyclo(c);
    if needs_parens(&s) {
        format!("({s})")
    } else {
        s
    }
}

/// Splits a rendered coefficient into a leading sign and a body suitable for
/// joining terms with " + " and " - ".
fn signed_body(rendered: String) -> (bool, String) {
    match rendered.strip_prefix('-') {
        Some(body) if !needs_parens(&rendered) => (true, body.to_string()),
        _ => (false, rendered),
    }
}

fn push_term(out: &mut String, negative: bool, body: &str) {
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    out.push_str(body);
}

/// Linear combination over x1..xn.
pub fn fmt_form(coeffs: &[CyclotomicNumber]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (negative, coeff) = signed_body(fmt_cyclo(c));
        let var = format!("x{}", i + 1);
        let body = if coeff == "1" {
            var
        } else if needs_parens(&coeff) {
            format!("({coeff})*{var}")
        } else {
            format!("{coeff}*{var}")
        };
        push_term(&mut out, negative, &body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn fmt_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (exp, c) in p.sorted_terms() {
        let (negative, coeff) = signed_body(fmt_cyclo(c));
        let mut monomial = String::new();
        for (i, &a) in exp.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !monomial.is_empty() {
                monomial.push('*');
            }
            monomial.push_str(&format!("x{}", i + 1));
            if a > 1 {
                monomial.push_str(&format!("^{a}"));
            }
        }
        let body = if monomial.is_empty() {
            coeff
        } else if coeff == "1" {
            monomial
        } else if needs_parens(&coeff) {
            format!("({coeff})*{monomial}")
        } else {
            format!("{coeff}*{monomial}")
        };
        push_term(&mut out, negative, &body);
    }
    out
}

// referenced so the helper stays exercised even when only JSON output is used
#[allow(dead_code)]
fn fmt_linear(l: &LinearForm) -> String {
    fmt_form(l.coeffs())
}

//! Batch front end for the polynomial toolkit: reads matrices and complexes
//! from text files, dispatches to the library, and prints canonical
//! polynomials or reports.
//!
//! Exit codes: 0 on success, 1 on any input or usage error, 2 when a
//! machine-verified identity fails (which signals a bug, not bad input).
//! Output is byte-identical across runs for identical inputs and seeds;
//! `--json` switches every report to one JSON record per line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use symanzik_kit::exact_linalg::{IntMatrix, RatMatrix};
use symanzik_kit::matroid::{
    classify_components, grr_probe, mcp, mcp_exhaustive, ExchangePair, GraphSelector,
    MatroidView,
};
use symanzik_kit::multipoly::{parse_rational, MPoly};
use symanzik_kit::simplicial::{
    enumerate_forests, facet_class_factorization, simplicial_kirchhoff, simplicial_symanzik,
    ComplexData, GeneralizedComplex, SimplicialComplex,
};
use symanzik_kit::stability::{
    run_corollary_experiment, run_stability_experiment, Perturbation, StabilityInstance,
};
use symanzik_kit::symanzik::{
    duality_certificate, height_pairing, symanzik_with_params, ParamFamily, VectorFamily,
};
use symanzik_kit::Error as LibError;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lib(#[from] LibError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(LibError::IdentityFailure(_)) => 2,
            _ => 1,
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "symanzik",
    version,
    about = "Exact Kirchhoff and Symanzik polynomials of matrices, complexes, and matroids"
)]
struct Cli {
    /// Emit one JSON record per line instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order-k Kirchhoff polynomial of the columns of a matrix or complex.
    Kirchhoff(PolyArgs),
    /// Order-k Symanzik polynomial, optionally parameterized or factorized.
    Symanzik(SymanzikArgs),
    /// Verify the kernel-family duality identity and print its certificate.
    Duality(PolyArgs),
    /// List the kappa-forests of a complex, one line of 1-based facets each.
    Forests(ForestsArgs),
    /// Torsion orders of the homology below the top dimension.
    HomologyTorsion(FileArgs),
    /// Factor the order-k Symanzik polynomial through facet classes.
    Factorize(PolyArgs),
    /// Check that a stellar subdivision preserves the Symanzik polynomial.
    SubdivideCheck(SubdivideArgs),
    /// Height pairing of two boundary vectors at positive weights.
    HeightPairing(PairingArgs),
    /// Exchange-graph classification and codependent-pair queries.
    #[command(subcommand)]
    Exchange(ExchangeCommand),
    /// Ratio-difference stability experiment under bounded perturbations.
    Stability(StabilityArgs),
}

#[derive(Args)]
struct FileArgs {
    /// Matrix file (`rows cols` header) or complex file (`complex d` or
    /// `matrix rows cols` header).
    file: PathBuf,
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial order; must be even.
    #[arg(short = 'k', long = "order")]
    order: usize,
    file: PathBuf,
}

#[derive(Args)]
struct SymanzikArgs {
    #[arg(short = 'k', long = "order")]
    order: usize,
    file: PathBuf,
    /// Rational matrix file of parameter vectors (one column each), all in
    /// the span of the family.
    #[arg(long, conflicts_with = "factorize")]
    params: Option<PathBuf>,
    /// Print the facet-class factorization instead of the polynomial.
    #[arg(long)]
    factorize: bool,
}

#[derive(Args)]
struct ForestsArgs {
    /// Corank of the enumerated forests; 0 generalizes spanning trees.
    #[arg(long)]
    kappa: usize,
    file: PathBuf,
}

#[derive(Args)]
struct SubdivideArgs {
    #[arg(short = 'k', long = "order", default_value_t = 2)]
    order: usize,
    /// 1-based index of the facet to subdivide.
    #[arg(long)]
    facet: usize,
    /// Complex file; a raw boundary matrix carries no facet structure.
    file: PathBuf,
}

#[derive(Args)]
struct PairingArgs {
    file: PathBuf,
    /// First boundary vector, comma-separated rationals of ambient length.
    #[arg(long)]
    left: String,
    /// Second boundary vector, same length.
    #[arg(long)]
    right: String,
    /// Positive weights, one per family member; defaults to all ones.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Subcommand)]
enum ExchangeCommand {
    /// Decompose an exchange graph into connected components and verify the
    /// (multiset, maximal codependent pair) classification.
    Classify {
        #[command(flatten)]
        matroid: MatroidArgs,
        /// Restrict to pairs of independent sets of sizes P and Q; the full
        /// graph over all sizes is used when absent.
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        layer: Option<Vec<usize>>,
    },
    /// Maximal codependent pair of a pair of independent sets, computed by
    /// fixed point and verified against exhaustive search.
    Mcp {
        #[command(flatten)]
        matroid: MatroidArgs,
        /// First independent set, comma-separated 1-based elements.
        #[arg(long, default_value = "")]
        first: String,
        /// Second independent set, same format.
        #[arg(long, default_value = "")]
        second: String,
    },
    /// Probe the spanning-set extension of the top exchange-graph layer and
    /// report whether the invariants classified its components.
    GrrProbe {
        #[command(flatten)]
        matroid: MatroidArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MatroidArgs {
    /// Linear matroid: integer matrix file whose columns are the elements.
    #[arg(long, value_name = "FILE")]
    linear: Option<PathBuf>,
    /// Uniform matroid `R,N`: sets of at most R of N elements independent.
    #[arg(long, value_name = "R,N")]
    uniform: Option<String>,
    /// Graphic matroid: one-dimensional complex file whose facets are edges.
    #[arg(long, value_name = "FILE")]
    graphic: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbationKind {
    /// No perturbation; every difference is zero.
    Zero,
    /// Seeded diagonal entries in [-1, 1].
    Diagonal,
    /// Seeded entries in [-1, 1] at every hypermatrix position.
    Full,
}

#[derive(Args)]
struct StabilityArgs {
    /// Family matrix or complex file; columns are the family members.
    file: PathBuf,
    #[arg(short = 'k', long = "order", default_value_t = 2)]
    order: usize,
    /// Rational matrix file of parameter lift columns appended to the
    /// kernel; defaults to the single first standard basis vector.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PerturbationKind::Diagonal)]
    perturbation: PerturbationKind,
    /// Resolution denominator for seeded perturbation entries.
    #[arg(long, default_value_t = 100)]
    denominator: i64,
    /// Weight scales, comma-separated positive integers.
    #[arg(long, default_value = "10,100,1000,10000")]
    scales: String,
    /// Number of sampled weight directions per scale.
    #[arg(long, default_value_t = 6)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Divide each difference by max_i y_i^(l-1) for l parameter columns.
    #[arg(long)]
    normalized: bool,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early instead of panicking
    // on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let json = cli.json;
    match cli.command {
        Command::Kirchhoff(args) => cmd_kirchhoff(&args, json),
        Command::Symanzik(args) => cmd_symanzik(&args, json),
        Command::Duality(args) => cmd_duality(&args, json),
        Command::Forests(args) => cmd_forests(&args, json),
        Command::HomologyTorsion(args) => cmd_homology_torsion(&args, json),
        Command::Factorize(args) => cmd_factorize(args.order, &args.file, json),
        Command::SubdivideCheck(args) => cmd_subdivide_check(&args, json),
        Command::HeightPairing(args) => cmd_height_pairing(&args, json),
        Command::Exchange(command) => cmd_exchange(command, json),
        Command::Stability(args) => cmd_stability(&args, json),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Loads the top boundary matrix from any of the three file forms: a bare
/// integer matrix, a `matrix` header, or a `complex` facet list.
fn load_boundary(path: &Path) -> Result<IntMatrix, CliError> {
    let text = read_file(path)?;
    match text.split_whitespace().next() {
        Some("complex") | Some("matrix") => Ok(ComplexData::parse(&text)?.boundary()),
        _ => Ok(IntMatrix::parse_text(&text)?),
    }
}

fn load_complex_data(path: &Path) -> Result<ComplexData, CliError> {
    let text = read_file(path)?;
    match text.split_whitespace().next() {
        Some("complex") | Some("matrix") => Ok(ComplexData::parse(&text)?),
        _ => Ok(ComplexData::Raw(GeneralizedComplex::new(IntMatrix::parse_text(&text)?))),
    }
}

fn load_simplicial(path: &Path) -> Result<SimplicialComplex, CliError> {
    match load_complex_data(path)? {
        ComplexData::Simplicial(complex) => Ok(complex),
        ComplexData::Raw(_) => Err(CliError::Usage(format!(
            "{}: needs a facet list (`complex` header), not a raw boundary matrix",
            path.display()
        ))),
    }
}

/// Parses a rational matrix file: a `rows cols` header followed by entries
/// written as `a` or `a/b`.
fn load_rat_matrix(path: &Path) -> Result<RatMatrix, CliError> {
    let text = read_file(path)?;
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize, CliError> {
        tokens
            .next()
            .ok_or_else(|| CliError::Usage(format!("{}: missing {what}", path.display())))?
            .parse()
            .map_err(|_| CliError::Usage(format!("{}: bad {what}", path.display())))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let token = tokens.next().ok_or_else(|| {
            CliError::Usage(format!("{}: expected {} entries", path.display(), rows * cols))
        })?;
        entries.push(parse_rational(token)?);
    }
    if tokens.next().is_some() {
        return Err(CliError::Usage(format!(
            "{}: trailing tokens after matrix entries",
            path.display()
        )));
    }
    Ok(RatMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j].clone()))
}

fn parse_rational_list(text: &str, what: &str) -> Result<Vec<BigRational>, CliError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|token| parse_rational(token.trim()).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("{what}: expected comma-separated rationals")))
}

/// Parses a comma-separated list of 1-based indices; empty means the empty
/// set.
fn parse_index_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for token in text.split(',') {
        let value: usize = token
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{what}: bad index {token:?}")))?;
        if value == 0 {
            return Err(CliError::Usage(format!("{what}: indices are 1-based")));
        }
        out.push(value - 1);
    }
    Ok(out)
}

fn format_set(elements: &[usize]) -> String {
    let inner: Vec<String> = elements.iter().map(|e| (e + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn one_based(elements: &[usize]) -> Vec<usize> {
    elements.iter().map(|e| e + 1).collect()
}

fn emit_poly(poly: &MPoly, json: bool) {
    if json {
        let mut terms: Vec<_> = poly.terms().collect();
        terms.reverse();
        for (exponents, coefficient) in terms {
            println!(
                "{}",
                json!({
                    "numerator": coefficient.numer().to_string(),
                    "denominator": coefficient.denom().to_string(),
                    "exponents": exponents,
                })
            );
        }
    } else {
        println!("{}", poly.to_canonical_string());
    }
}

fn cmd_kirchhoff(args: &PolyArgs, json: bool) -> CliResult {
    let boundary = load_boundary(&args.file)?;
    let poly = simplicial_kirchhoff(&boundary, args.order)?;
    emit_poly(&poly, json);
    Ok(())
}

fn cmd_symanzik(args: &SymanzikArgs, json: bool) -> CliResult {
    if args.factorize {
        return cmd_factorize(args.order, &args.file, json);
    }
    let boundary = load_boundary(&args.file)?;
    let poly = match &args.params {
        Some(path) => {
            let params = load_rat_matrix(path)?;
            let pf = ParamFamily::new(VectorFamily::new(boundary), params)?;
            symanzik_with_params(&pf, args.order)?
        }
        None => simplicial_symanzik(&boundary, args.order)?,
    };
    emit_poly(&poly, json);
    Ok(())
}

fn cmd_duality(args: &PolyArgs, json: bool) -> CliResult {
    let family = VectorFamily::new(load_boundary(&args.file)?);
    let cert = duality_certificate(&family, args.order)?;
    if json {
        println!(
            "{}",
            json!({
                "status": "ok",
                "order": cert.order,
                "primal_index": cert.primal_index.to_string(),
                "dual_index": cert.dual_index.to_string(),
            })
        );
    } else {
        println!("OK a={} b={}", cert.primal_index, cert.dual_index);
    }
    Ok(())
}

fn cmd_forests(args: &ForestsArgs, json: bool) -> CliResult {
    let boundary = load_boundary(&args.file)?;
    for forest in enumerate_forests(&boundary, args.kappa) {
        if json {
            println!("{}", json!({ "facets": one_based(&forest) }));
        } else {
            let line: Vec<String> = forest.iter().map(|f| (f + 1).to_string()).collect();
            println!("{}", line.join(" "));
        }
    }
    Ok(())
}

fn cmd_homology_torsion(args: &FileArgs, json: bool) -> CliResult {
    match load_complex_data(&args.file)? {
        ComplexData::Simplicial(complex) => {
            for l in 0..complex.dimension() {
                let torsion = complex.torsion_order(l)?;
                if json {
                    println!("{}", json!({ "dim": l, "torsion": torsion.to_string() }));
                } else {
                    println!("H_{l} torsion {torsion}");
                }
            }
        }
        ComplexData::Raw(complex) => {
            let torsion = complex.torsion_below_top();
            if json {
                println!("{}", json!({ "dim": "below-top", "torsion": torsion.to_string() }));
            } else {
                println!("below-top torsion {torsion}");
            }
        }
    }
    Ok(())
}

fn cmd_factorize(order: usize, file: &Path, json: bool) -> CliResult {
    let boundary = load_boundary(file)?;
    let dec = facet_class_factorization(&boundary, order)?;
    if json {
        println!("{}", json!({ "classes": dec.classes.len() }));
        for (i, class) in dec.classes.iter().enumerate() {
            println!(
                "{}",
                json!({
                    "class": i + 1,
                    "facets": one_based(class),
                    "q": dec.q[i].to_canonical_string(),
                })
            );
        }
        println!("{}", json!({ "p": dec.p.to_canonical_string() }));
    } else {
        println!("classes {}", dec.classes.len());
        for (i, class) in dec.classes.iter().enumerate() {
            let facets: Vec<String> = class.iter().map(|f| (f + 1).to_string()).collect();
            println!("class {}: facets {}", i + 1, facets.join(" "));
            println!("Q{} = {}", i + 1, dec.q[i].to_canonical_string());
        }
        println!("P = {}", dec.p.to_canonical_string());
    }
    Ok(())
}

fn cmd_subdivide_check(args: &SubdivideArgs, json: bool) -> CliResult {
    if args.facet == 0 {
        return Err(CliError::Usage("facet indices are 1-based".into()));
    }
    let complex = load_simplicial(&args.file)?;
    let original = simplicial_symanzik(&complex.top_boundary(), args.order)?;
    let (subdivided, parent) = complex.stellar_subdivide(args.facet - 1)?;
    let refined = simplicial_symanzik(&subdivided.top_boundary(), args.order)?;
    let mut assign = vec![Vec::new(); complex.num_facets()];
    for (new_idx, &old_idx) in parent.iter().enumerate() {
        assign[old_idx].push(new_idx);
    }
    let merged = original.substitute_sum(subdivided.num_facets(), &assign)?;
    if merged != refined {
        return Err(LibError::IdentityFailure(
            "subdivision changed the Symanzik polynomial".into(),
        )
        .into());
    }
    if json {
        println!(
            "{}",
            json!({
                "status": "ok",
                "facets": complex.num_facets(),
                "subdivided_facets": subdivided.num_facets(),
            })
        );
    } else {
        println!("OK facets {} -> {}", complex.num_facets(), subdivided.num_facets());
    }
    Ok(())
}

fn cmd_height_pairing(args: &PairingArgs, json: bool) -> CliResult {
    let family = VectorFamily::new(load_boundary(&args.file)?);
    let left = parse_rational_list(&args.left, "--left")?;
    let right = parse_rational_list(&args.right, "--right")?;
    let weights = match &args.weights {
        Some(text) => parse_rational_list(text, "--weights")?,
        None => vec![BigRational::from_integer(BigInt::from(1)); family.len()],
    };
    let value = height_pairing(&family, &left, &right, &weights)?;
    if json {
        println!(
            "{}",
            json!({
                "numerator": value.numer().to_string(),
                "denominator": value.denom().to_string(),
            })
        );
    } else {
        println!("{value}");
    }
    Ok(())
}

fn load_matroid(args: &MatroidArgs) -> Result<MatroidView, CliError> {
    if let Some(path) = &args.linear {
        return Ok(MatroidView::linear(&load_boundary(path)?)?);
    }
    if let Some(spec) = &args.uniform {
        let parts: Vec<&str> = spec.split(',').collect();
        let parse = |token: &str| -> Result<usize, CliError> {
            token
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--uniform: bad number {token:?}")))
        };
        if parts.len() != 2 {
            return Err(CliError::Usage("--uniform expects R,N".into()));
        }
        return Ok(MatroidView::uniform(parse(parts[0])?, parse(parts[1])?)?);
    }
    let path = args.graphic.as_ref().expect("clap guarantees one matroid source");
    let graph = load_simplicial(path)?;
    if graph.dimension() != 1 {
        return Err(CliError::Usage(format!(
            "{}: a graphic matroid needs a one-dimensional complex",
            path.display()
        )));
    }
    let edges: Vec<(usize, usize)> =
        graph.facets().iter().map(|edge| (edge[0], edge[1])).collect();
    Ok(MatroidView::graphic(graph.vertex_count(), &edges)?)
}

fn cmd_exchange(command: ExchangeCommand, json: bool) -> CliResult {
    match command {
        ExchangeCommand::Classify { matroid, layer } => {
            let view = load_matroid(&matroid)?;
            let selector = match layer {
                Some(sizes) => GraphSelector::Layer { p: sizes[0], q: sizes[1] },
                None => GraphSelector::Full,
            };
            let classification = classify_components(&view, selector)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "vertices": classification.vertex_count,
                        "components": classification.components.len(),
                    })
                );
            } else {
                println!("vertices {}", classification.vertex_count);
                println!("components {}", classification.components.len());
            }
            for (i, info) in classification.components.iter().enumerate() {
                if json {
                    println!(
                        "{}",
                        json!({
                            "component": i + 1,
                            "size": info.size,
                            "multiset": one_based(&info.multiset),
                            "mcp_first": one_based(info.mcp.first()),
                            "mcp_second": one_based(info.mcp.second()),
                            "representative_first": one_based(info.representative.first()),
                            "representative_second": one_based(info.representative.second()),
                        })
                    );
                } else {
                    println!(
                        "component {}: size {} multiset {} mcp ({}|{}) representative ({}|{})",
                        i + 1,
                        info.size,
                        format_set(&info.multiset),
                        format_set(info.mcp.first()),
                        format_set(info.mcp.second()),
                        format_set(info.representative.first()),
                        format_set(info.representative.second()),
                    );
                }
            }
            Ok(())
        }
        ExchangeCommand::Mcp { matroid, first, second } => {
            let view = load_matroid(&matroid)?;
            let first = parse_index_list(&first, "--first")?;
            let second = parse_index_list(&second, "--second")?;
            let vertex = ExchangePair::new(&view, &first, &second)?;
            let fast = mcp(&view, &vertex);
            let slow = mcp_exhaustive(&view, &vertex)?;
            if fast != slow {
                return Err(LibError::IdentityFailure(
                    "fixed-point pair disagrees with exhaustive search".into(),
                )
                .into());
            }
            if json {
                println!(
                    "{}",
                    json!({
                        "mcp_first": one_based(fast.first()),
                        "mcp_second": one_based(fast.second()),
                    })
                );
            } else {
                println!("mcp ({}|{})", format_set(fast.first()), format_set(fast.second()));
            }
            Ok(())
        }
        ExchangeCommand::GrrProbe { matroid } => {
            let view = load_matroid(&matroid)?;
            let probe = grr_probe(&view)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "vertices": probe.vertex_count,
                        "components": probe.component_count,
                        "invariant_classes": probe.invariant_class_count,
                        "match": probe.matches,
                    })
                );
            } else {
                println!(
                    "vertices {} components {} invariant classes {} match {}",
                    probe.vertex_count,
                    probe.component_count,
                    probe.invariant_class_count,
                    if probe.matches { "yes" } else { "no" },
                );
            }
            Ok(())
        }
    }
}

fn cmd_stability(args: &StabilityArgs, json: bool) -> CliResult {
    let family = load_boundary(&args.file)?;
    let n = family.cols();
    let params = match &args.params {
        Some(path) => load_rat_matrix(path)?,
        None => RatMatrix::from_fn(n, 1, |i, _| {
            BigRational::from_integer(BigInt::from(i64::from(i == 0)))
        }),
    };
    let perturbation = match args.perturbation {
        PerturbationKind::Zero => Perturbation::Zero,
        PerturbationKind::Diagonal => {
            Perturbation::SeededDiagonal { seed: args.seed, denominator: args.denominator }
        }
        PerturbationKind::Full => {
            Perturbation::SeededFull { seed: args.seed, denominator: args.denominator }
        }
    };
    let mut scales = Vec::new();
    for token in args.scales.split(',') {
        let scale: i64 = token
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--scales: bad scale {token:?}")))?;
        scales.push(scale);
    }
    let instance = StabilityInstance::new(family, params, args.order, perturbation, vec![])?;
    let report = if args.normalized {
        run_corollary_experiment(&instance, &scales, args.samples, args.seed)?
    } else {
        run_stability_experiment(&instance, &scales, args.samples, args.seed)?
    };
    if json {
        for bucket in &report.buckets {
            println!(
                "{}",
                json!({
                    "scale": bucket.scale,
                    "numerator": bucket.sup_abs_difference.numer().to_string(),
                    "denominator": bucket.sup_abs_difference.denom().to_string(),
                })
            );
        }
        println!(
            "{}",
            json!({
                "plateau": report.plateau,
                "normalization_degree": report.normalization_degree,
            })
        );
    } else {
        print!("{}", report.table());
    }
    Ok(())
}

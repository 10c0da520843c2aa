//! Command-line front end: `analyze`, `verify`, `search` and `shift`.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use hgarith::cyclo::{scalar_shift, PairMatch, ParameterPair};
use hgarith::exact::{parse_rational, QMatrix};
use hgarith::group::{presentation_from_pair, solve_invariant_form, InvariantForm, NORMALIZATION_NOTE};
use hgarith::search::{search_root_unipotents, SearchConfig};
use hgarith::slp::{parse_basis_change, verify_certificate, Certificate, Verdict, DEFAULT_HEIGHT_BOUND};
use hgarith::standard::{apply_basis_change, is_standard_shape, root_system, standardize_form};

/// Exit status for a valid result.
pub const EXIT_OK: i32 = 0;
/// Exit status for a certificate that does not verify or a search that finds nothing.
pub const EXIT_FAILED: i32 = 1;
/// Exit status for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hgarith", version, about = "Exact arithmeticity certificates for hypergeometric groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Presentation, invariant form, standard form and root data of a pair.
    Analyze {
        /// Numerator parameters, e.g. 0,0,1/3,2/3
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        /// Denominator parameters, e.g. 1/2,1/2,1/4,3/4
        #[arg(allow_hyphen_values = true)]
        beta: String,
        /// Basis change to standard shape, one matrix row per line
        #[arg(long, value_name = "FILE")]
        basis_change: Option<PathBuf>,
        /// Height bound for the isotropic-vector search when no basis change is given
        #[arg(long, default_value_t = DEFAULT_HEIGHT_BOUND)]
        height_bound: u32,
    },
    /// Check a certificate file.
    Verify {
        #[arg(value_name = "CERT")]
        certificate: PathBuf,
    },
    /// Search for root-group elements and emit a certificate.
    Search {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 256)]
        max_bits: u32,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
        #[arg(long, value_name = "FILE")]
        basis_change: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_HEIGHT_BOUND)]
        height_bound: u32,
        /// Where to write the certificate
        #[arg(long, value_name = "FILE", default_value = "certificate.json")]
        out: PathBuf,
    },
    /// Shift both parameter tuples by a rational constant modulo 1.
    Shift {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
}

/// An error that ends the command with the given exit status.
struct Failure {
    code: i32,
    message: String,
}

fn input_error(e: impl Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out` and diagnostics to `err`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Analyze {
            alpha,
            beta,
            basis_change,
            height_bound,
        } => analyze(&alpha, &beta, basis_change.as_deref(), height_bound, out),
        Command::Verify { certificate } => verify(&certificate, out),
        Command::Search {
            alpha,
            beta,
            max_len,
            max_bits,
            rounds,
            basis_change,
            height_bound,
            out: path,
        } => {
            let cfg = SearchConfig {
                max_word_length: max_len,
                max_entry_bits: max_bits,
                commutator_rounds: rounds,
                ..SearchConfig::default()
            };
            search(&alpha, &beta, &cfg, basis_change.as_deref(), height_bound, &path, out)
        }
        Command::Shift { alpha, beta, c } => shift(&alpha, &beta, &c, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn indented(m: &QMatrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

/// Basis change from a file, or from the isotropic-vector search.
fn basis_change_for(
    form: &InvariantForm,
    file: Option<&Path>,
    height_bound: u32,
) -> Result<Option<(QMatrix, InvariantForm)>, Failure> {
    match file {
        Some(path) => {
            let p = parse_basis_change(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            let target = apply_basis_change(&p, form).map_err(input_error)?;
            Ok(Some((p, target)))
        }
        None => Ok(standardize_form(form, height_bound)
            .map_err(input_error)?
            .map(|change| (change.p, change.target))),
    }
}

fn analyze(alpha: &str, beta: &str, basis: Option<&Path>, height_bound: u32, out: &mut dyn Write) -> Outcome {
    let pair = ParameterPair::parse(alpha, beta).map_err(input_error)?;
    let pres = presentation_from_pair(&pair).map_err(input_error)?;
    let form = solve_invariant_form(&pres).map_err(input_error)?;
    let c = &pres.classification;
    let mut s = String::new();
    s += &format!("parameters: {pair}\n");
    s += &format!("f(x) = {}\n", pres.f);
    s += &format!("g(x) = {}\n", pres.g);
    s += &format!("f(x) - g(x) = {}\n", pres.f.sub(&pres.g));
    s += &format!(
        "classification: {} (degree {}, coprime: {}, primitive: {})\n",
        c.case, c.degree, c.coprime, c.primitive
    );
    s += &format!("A =\n{}", indented(&pres.a));
    s += &format!("B =\n{}", indented(&pres.b));
    s += &format!("C = A^-1 B =\n{}", indented(&pres.c));
    s += &format!("invariant form ({}):\n{}", form.kind, indented(&form.matrix));
    s += &format!("  {NORMALIZATION_NOTE}\n");
    match basis_change_for(&form, basis, height_bound) {
        Ok(Some((p, target))) => {
            s += &format!("basis change P =\n{}", indented(&p));
            s += &format!("standard form P^T M P =\n{}", indented(&target.matrix));
            if !is_standard_shape(&target.matrix) {
                s += "  not of standard (antidiagonal) shape\n";
            } else {
                match root_system(&target) {
                    Ok(roots) => {
                        s += &format!("group: {}\n", roots.group);
                        let simple: Vec<String> = roots.simple_roots.iter().map(|r| r.to_string()).collect();
                        s += &format!("simple roots: {}\n", simple.join(", "));
                        s += &format!("highest root: {}\n", roots.highest_root);
                        s += &format!("second highest root: {}\n", roots.second_highest_root);
                        s += "positive roots:\n";
                        for p in roots.positive_roots() {
                            s += &format!("  {} (height {}): {}\n", p.root, p.height, p.coupling_description().join(", "));
                        }
                    }
                    Err(e) => s += &format!("root data unavailable: {e}\n"),
                }
            }
        }
        Ok(None) => {
            s += &format!("no standard basis found within height {height_bound}; supply --basis-change\n");
        }
        Err(f) if basis.is_some() => return Err(f),
        Err(f) => s += &format!("standard form unavailable: {}\n", f.message),
    }
    write!(out, "{s}").map_err(input_error)?;
    Ok(EXIT_OK)
}

fn report(verdict: &Verdict) -> String {
    let mut s = String::new();
    if let Some(group) = &verdict.group {
        s += &format!("group: {group}\n");
    }
    if let Some(form) = &verdict.standard_form {
        s += &format!("standard form:\n{}", indented(form));
    }
    for c in &verdict.claims {
        s += &format!("claim {} in U_{}: {}\n", c.name, c.root, if c.passed { "verified" } else { "FAILED" });
        if let Some(m) = &c.matrix {
            s += &indented(m);
        }
        if let Some(mem) = &c.membership {
            s += &format!("  membership: {mem}\n");
        }
        if let Some(note) = &c.note {
            s += &format!("  note: {note}\n");
        }
    }
    if !verdict.required_roots.is_empty() {
        let roots: Vec<String> = verdict.required_roots.iter().map(|r| r.to_string()).collect();
        s += &format!("required roots: {}\n", roots.join(", "));
    }
    s += &format!("verdict: {}\n", verdict.status);
    s += &format!("assumptions: {}\n", verdict.assumptions);
    s
}

fn verify(path: &Path, out: &mut dyn Write) -> Outcome {
    let cert = Certificate::parse(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let verdict = verify_certificate(&cert);
    write!(out, "{}", report(&verdict)).map_err(input_error)?;
    Ok(verdict.status.exit_code())
}

fn search(
    alpha: &str,
    beta: &str,
    cfg: &SearchConfig,
    basis: Option<&Path>,
    height_bound: u32,
    path: &Path,
    out: &mut dyn Write,
) -> Outcome {
    let pair = ParameterPair::parse(alpha, beta).map_err(input_error)?;
    let pres = presentation_from_pair(&pair).map_err(input_error)?;
    let form = solve_invariant_form(&pres).map_err(input_error)?;
    let Some((p, _)) = basis_change_for(&form, basis, height_bound)? else {
        return Err(input_error(format!(
            "no standard basis found within height {height_bound}; supply --basis-change"
        )));
    };
    let result = search_root_unipotents(&pres, &p, cfg).map_err(input_error)?;
    let st = &result.statistics;
    let mut s = format!(
        "words expanded: {}, pruned: {}, repeated: {}, unipotent: {}, in a parabolic: {}, radical elements: {}, commutators: {}, time: {:.2?}\n",
        st.nodes_expanded,
        st.pruned,
        st.duplicates,
        st.unipotent_candidates,
        st.stabiliser_members,
        st.radical_elements,
        st.commutators,
        st.elapsed
    );
    if result.found.is_empty() {
        let missing: Vec<String> = result.missing.iter().map(|r| r.to_string()).collect();
        s += &format!("no root-group elements found for {}\n", missing.join(", "));
        write!(out, "{s}").map_err(input_error)?;
        return Ok(EXIT_FAILED);
    }
    let cert = result.certificate(&pair, &p).map_err(input_error)?;
    let json = cert.to_json();
    std::fs::write(path, &json).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let verdict = verify_certificate(&cert);
    s += &json;
    s += &format!("written to {}\n", path.display());
    s += &format!("verdict: {}\n", verdict.status);
    write!(out, "{s}").map_err(input_error)?;
    Ok(verdict.status.exit_code())
}

fn shift(alpha: &str, beta: &str, c: &str, out: &mut dyn Write) -> Outcome {
    let pair = ParameterPair::parse(alpha, beta).map_err(input_error)?;
    let c = parse_rational(c).map_err(input_error)?;
    let shifted = scalar_shift(&pair, &c);
    let relation = match pair.compare_unordered(&shifted) {
        PairMatch::Same => "same pair as the input",
        PairMatch::Swapped => "the input pair with alpha and beta swapped",
        PairMatch::Different => "different from the input pair",
    };
    writeln!(out, "alpha: {}", shifted.alpha).map_err(input_error)?;
    writeln!(out, "beta: {}", shifted.beta).map_err(input_error)?;
    writeln!(out, "relation: {relation}").map_err(input_error)?;
    Ok(EXIT_OK)
}

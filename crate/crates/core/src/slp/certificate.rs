//! Arithmeticity certificates: JSON format and verification.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{evaluate_slp, Slp, Word};
use crate::cyclo::{ParameterPair, ParameterTuple};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, QMatrix};
use crate::group::{presentation_from_pair, solve_invariant_form, InvariantForm};
use crate::standard::{
    apply_basis_change, is_standard_shape, root_group_membership, root_system, standardize_form, GroupKind,
    Membership, RootLabel,
};

/// Height bound for the isotropic-vector search when a certificate has no `P`.
pub const DEFAULT_HEIGHT_BOUND: u32 = 8;

pub const ASSUMPTIONS: &str = "Arithmeticity follows only together with two external results that are not \
checked here: Zariski density of the group in the isometry group of its form (Beukers-Heckman), and \
Venkataramana's criterion that non-trivial unipotents in the highest and second-highest root groups \
force finite index.";

const BASE_SYMBOLS: [&str; 3] = ["A", "B", "P"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub root: RootLabel,
}

/// A straight-line program over `A`, `B` (the companion matrices) and `P`
/// (the basis change), plus the root-group claims it is meant to establish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub parameters: ParameterPair,
    pub basis_change: Option<QMatrix>,
    /// Explicit matrices bound as extra symbols; claims depending on them never verify.
    pub literals: IndexMap<String, QMatrix>,
    pub slp: Slp,
    pub claims: Vec<Claim>,
    pub comments: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParametersDoc {
    alpha: String,
    beta: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimDoc {
    name: String,
    root: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    parameters: ParametersDoc,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    literals: IndexMap<String, Vec<String>>,
    slp: IndexMap<String, String>,
    claims: Vec<ClaimDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    comments: Vec<String>,
}

fn matrix_rows(m: &QMatrix) -> Vec<String> {
    (0..m.dim())
        .map(|i| m.row(i).iter().map(format_rational).collect::<Vec<_>>().join(" "))
        .collect()
}

fn parse_row(text: &str) -> Result<Vec<crate::exact::Rational>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect()
}

fn parse_matrix_rows(rows: &[String], what: &str) -> Result<QMatrix> {
    let parsed = rows
        .iter()
        .map(|r| parse_row(r))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::parse(format!("{what}: {e}")))?;
    QMatrix::from_rows(parsed).map_err(|_| Error::parse(format!("{what} is not a square matrix")))
}

/// Reads a matrix written one row per line (entries separated by spaces or
/// commas); blank lines and lines starting with `#` are skipped.
pub fn parse_basis_change(text: &str) -> Result<QMatrix> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = parse_row(line).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                line: Some(idx + 1),
                column: None,
                message,
            },
            other => other,
        })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse("basis change file contains no rows"));
    }
    QMatrix::from_rows(rows).map_err(|_| Error::parse("basis change is not a square matrix"))
}

impl Certificate {
    /// Empty certificate whose SLP knows `A`, `B`, `P` and the given literals.
    pub fn new(parameters: ParameterPair, basis_change: Option<QMatrix>, literals: IndexMap<String, QMatrix>) -> Self {
        let bases = BASE_SYMBOLS
            .iter()
            .map(|s| s.to_string())
            .chain(literals.keys().cloned());
        Certificate {
            parameters,
            basis_change,
            slp: Slp::new(bases),
            literals,
            claims: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn define(&mut self, name: &str, word: Word) -> Result<()> {
        self.slp.define(name, word)
    }

    pub fn claim(&mut self, name: &str, root: RootLabel) {
        self.claims.push(Claim {
            name: name.to_string(),
            root,
        });
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        let parameters = ParameterPair::new(
            ParameterTuple::parse(&doc.parameters.alpha)?,
            ParameterTuple::parse(&doc.parameters.beta)?,
        );
        let basis_change = doc.p.as_deref().map(|rows| parse_matrix_rows(rows, "P")).transpose()?;
        let mut literals = IndexMap::new();
        for (name, rows) in &doc.literals {
            if BASE_SYMBOLS.contains(&name.as_str()) {
                return Err(Error::parse(format!("literal `{name}` shadows a base symbol")));
            }
            literals.insert(name.clone(), parse_matrix_rows(rows, &format!("literal {name}"))?);
        }
        let mut cert = Certificate::new(parameters, basis_change, literals);
        for (name, text) in &doc.slp {
            let word: Word = text
                .parse()
                .map_err(|e| Error::parse(format!("definition `{name}`: {e}")))?;
            cert.slp.define(name, word).map_err(|e| match e {
                Error::UnboundSymbol(s) => {
                    Error::parse(format!("definition `{name}` uses `{s}` before it is defined"))
                }
                other => other,
            })?;
        }
        for c in &doc.claims {
            let root = c.root.parse()?;
            cert.claim(&c.name, root);
        }
        cert.comments = doc.comments;
        Ok(cert)
    }

    /// Pretty JSON with a trailing newline; `parse` inverts it exactly.
    pub fn to_json(&self) -> String {
        let doc = Document {
            parameters: ParametersDoc {
                alpha: self.parameters.alpha.to_string(),
                beta: self.parameters.beta.to_string(),
            },
            p: self.basis_change.as_ref().map(matrix_rows),
            literals: self
                .literals
                .iter()
                .map(|(k, m)| (k.clone(), matrix_rows(m)))
                .collect(),
            slp: self
                .slp
                .definitions()
                .iter()
                .map(|(k, w)| (k.clone(), w.to_string()))
                .collect(),
            claims: self
                .claims
                .iter()
                .map(|c| ClaimDoc {
                    name: c.name.clone(),
                    root: c.root.to_string(),
                })
                .collect(),
            comments: self.comments.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("certificate serializes");
        s.push('\n');
        s
    }
}

/// Result of checking one claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimResult {
    pub name: String,
    pub root: RootLabel,
    pub matrix: Option<QMatrix>,
    pub membership: Option<Membership>,
    pub passed: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    CertificateValid,
    /// The first claim (in file order) that did not verify.
    ClaimFailed(String),
    /// Every claim verified but these required roots were not claimed.
    Incomplete(Vec<RootLabel>),
    EvaluationError(String),
}

impl VerdictStatus {
    /// 0 when valid, 1 when a claim fails or coverage is missing, 2 when the
    /// certificate could not be evaluated.
    pub fn exit_code(&self) -> i32 {
        match self {
            VerdictStatus::CertificateValid => 0,
            VerdictStatus::ClaimFailed(_) | VerdictStatus::Incomplete(_) => 1,
            VerdictStatus::EvaluationError(_) => 2,
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictStatus::CertificateValid => f.write_str("CertificateValid"),
            VerdictStatus::ClaimFailed(name) => write!(f, "ClaimFailed({name})"),
            VerdictStatus::Incomplete(missing) => {
                let m: Vec<String> = missing.iter().map(|r| r.to_string()).collect();
                write!(f, "Incomplete(missing {})", m.join(", "))
            }
            VerdictStatus::EvaluationError(msg) => write!(f, "EvaluationError({msg})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub claims: Vec<ClaimResult>,
    pub group: Option<GroupKind>,
    pub required_roots: Vec<RootLabel>,
    pub basis_change: Option<QMatrix>,
    pub standard_form: Option<QMatrix>,
    pub assumptions: &'static str,
}

impl Verdict {
    fn error(msg: impl Into<String>) -> Verdict {
        Verdict {
            status: VerdictStatus::EvaluationError(msg.into()),
            claims: Vec::new(),
            group: None,
            required_roots: Vec::new(),
            basis_change: None,
            standard_form: None,
            assumptions: ASSUMPTIONS,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.status == VerdictStatus::CertificateValid
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// Full pipeline: presentation, form, basis change, evaluation, membership.
pub fn verify_certificate(cert: &Certificate) -> Verdict {
    match verify_inner(cert) {
        Ok(v) => v,
        Err(e) => Verdict::error(e.to_string()),
    }
}

/// Generators, basis change and standard form a certificate is evaluated against.
struct Setting {
    bindings: IndexMap<String, QMatrix>,
    p: QMatrix,
    target: InvariantForm,
}

fn setting(cert: &Certificate) -> Result<Setting> {
    let presentation = presentation_from_pair(&cert.parameters)?;
    let form = solve_invariant_form(&presentation)?;
    let (p, target) = match &cert.basis_change {
        Some(p) => (p.clone(), apply_basis_change(p, &form)?),
        None => {
            let change = standardize_form(&form, DEFAULT_HEIGHT_BOUND)?.ok_or_else(|| {
                Error::UnsupportedGroup(format!(
                    "no isotropic basis found within height {DEFAULT_HEIGHT_BOUND}; supply P"
                ))
            })?;
            (change.p, change.target)
        }
    };
    let mut bindings = IndexMap::new();
    bindings.insert("A".to_string(), presentation.a);
    bindings.insert("B".to_string(), presentation.b);
    bindings.insert("P".to_string(), p.clone());
    for (name, m) in &cert.literals {
        bindings.insert(name.clone(), m.clone());
    }
    Ok(Setting { bindings, p, target })
}

/// Values of all base symbols and definitions of the certificate.
pub fn evaluate_certificate(cert: &Certificate) -> Result<IndexMap<String, QMatrix>> {
    let s = setting(cert)?;
    evaluate_slp(&cert.slp, &s.bindings)
}

fn verify_inner(cert: &Certificate) -> Result<Verdict> {
    let Setting { bindings, p, target } = setting(cert)?;
    if !is_standard_shape(&target.matrix) {
        return Err(Error::NotStandardShape);
    }
    let roots = root_system(&target)?;
    let values = evaluate_slp(&cert.slp, &bindings)?;
    let tainted: Vec<String> = cert
        .literals
        .keys()
        .flat_map(|l| cert.slp.dependents_of(l))
        .collect();

    let mut results = Vec::new();
    for claim in &cert.claims {
        let mut result = ClaimResult {
            name: claim.name.clone(),
            root: claim.root.clone(),
            matrix: values.get(&claim.name).cloned(),
            membership: None,
            passed: false,
            note: None,
        };
        let pattern = claim
            .root
            .with_rank(roots.group.rank())
            .and_then(|r| roots.pattern(&r));
        match (&result.matrix, pattern) {
            (None, _) => result.note = Some(format!("`{}` is not defined", claim.name)),
            (_, None) => result.note = Some(format!("{} is not a root of {}", claim.root, roots.group)),
            (Some(m), Some(pattern)) => {
                let membership = root_group_membership(m, &target, pattern)?;
                result.membership = Some(membership);
                if tainted.contains(&claim.name) {
                    result.note = Some("depends on literal matrices, not on the group generators".into());
                } else if membership == Membership::NonTrivialMember {
                    result.passed = true;
                }
            }
        }
        results.push(result);
    }

    let required: Vec<RootLabel> = roots.required_roots().into_iter().cloned().collect();
    let status = if let Some(failed) = results.iter().find(|r| !r.passed) {
        VerdictStatus::ClaimFailed(failed.name.clone())
    } else {
        let missing: Vec<RootLabel> = required
            .iter()
            .filter(|r| {
                !results
                    .iter()
                    .any(|c| c.root.with_rank(roots.group.rank()).as_ref() == Some(*r))
            })
            .cloned()
            .collect();
        if missing.is_empty() {
            VerdictStatus::CertificateValid
        } else {
            VerdictStatus::Incomplete(missing)
        }
    };
    Ok(Verdict {
        status,
        claims: results,
        group: Some(roots.group),
        required_roots: required,
        basis_change: Some(p),
        standard_form: Some(target.matrix),
        assumptions: ASSUMPTIONS,
    })
}

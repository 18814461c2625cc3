//! Subcommand definitions and dispatch.

use crate::document::{
    complex, matrix_to_value, number, parse_document, render, tensor_to_value, Document, DocumentError,
};
use crate::lemmas::{run_lemma_suite, Fault, SuiteConfig};
use clap::{Parser, Subcommand, ValueEnum};
use indefinite_linalg::duality::{
    change_of_basis, conjugate_representation, dual_basis, operator_determinant, rank_nullity, rep_covector,
    rep_vector, represent_map, Basis, LinearMapRep, SpaceHandle,
};
use indefinite_linalg::indefinite::{
    canonical_projectors, compatible_structure_from_hform, dirac_adjoint_covector, dirac_adjoint_operator,
    dirac_adjoint_vector, dirac_spectral, h_orthonormal_basis, is_dirac_selfadjoint, is_orthogonal,
    is_pseudo_orthogonal, is_pseudo_unitary, metric_structure_from, raise_lower_index, signature,
    MetricStructure, RealGroupCheck,
};
use indefinite_linalg::matrix::{classify, determinant, hermitian_conjugate, kronecker_product, matmul, MatrixClass};
use indefinite_linalg::tensor::{contract, kron_flatten, tensor_product, transform_tensor, Tensor};
use indefinite_linalg::unitary::{
    adjoint, eigen_hermitian, inner_product, is_selfadjoint, is_unitary_wrt, norm, orthonormalize, riesz_inverse,
    riesz_map, spectral_representation, InnerProduct, SpectralDecomposition,
};
use indefinite_linalg::{DenseMatrix, Error, Field};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "ila", version, about = "Linear algebra over definite and indefinite inner product spaces")]
pub struct Cli {
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Hermitian,
    Unitary,
    Orthogonal,
    Selfadjoint,
    DiracSelfadjoint,
    PseudoUnitary,
    PseudoOrthogonal,
    Classify,
    RankNullity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Role {
    Vector,
    Covector,
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    BreakCompatibility,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Determinant of a square matrix, optionally through its representation in a basis.
    Det {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Product of two or more matrices, left to right.
    Matmul {
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
    },
    /// Spectral decomposition of a Hermitian matrix.
    Eig {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Spectral representation of a selfadjoint (or, with --hform, Dirac-selfadjoint) operator.
    Spectral {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long)]
        hform: Option<PathBuf>,
    },
    /// Hermitian conjugate, or with --gram the adjoint operator / Riesz map.
    Adjoint {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Dirac adjoint of a vector, covector or operator.
    DiracAdjoint {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        hform: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long = "as", value_enum)]
        role: Option<Role>,
    },
    /// Signature (n+, n-) of an H-form.
    Signature {
        #[arg(long)]
        hform: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Metric structure: Gram matrix, H-form, metric operator and signature.
    Metric {
        #[arg(long)]
        hform: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// h-orthonormal basis of an H-form, or an orthonormalised family of columns.
    CanonicalBasis {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        hform: Option<PathBuf>,
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Canonical projectors p+ and p- of a metric structure.
    Projectors {
        #[arg(long)]
        hform: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Tensor product of two tensors (matrix documents are read as kets, bras or operators).
    TensorProduct {
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
    },
    /// Contraction of two slots, or with --slot and --hform index raising/lowering.
    Contract {
        #[arg(long = "in")]
        input: PathBuf,
        /// Two 1-based slots, e.g. `1,2`.
        #[arg(long)]
        slots: Option<String>,
        #[arg(long)]
        slot: Option<usize>,
        #[arg(long)]
        hform: Option<PathBuf>,
        #[arg(long)]
        gram: Option<PathBuf>,
    },
    /// Kronecker product of two matrices, or the flattening of one tensor.
    Kron {
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
    },
    /// Dual basis, transition matrix, or components of an object in a new basis.
    ChangeBasis {
        #[arg(long)]
        basis: PathBuf,
        /// Basis the input is expressed in (natural basis when omitted).
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long = "as", value_enum)]
        role: Option<Role>,
    },
    /// Property checks.
    Check {
        #[arg(long, value_enum)]
        kind: CheckKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long)]
        hform: Option<PathBuf>,
    },
    /// Inner product of two kets, the norm of one, or H-form values with --hform.
    Inner {
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long)]
        hform: Option<PathBuf>,
    },
    /// Run the seeded lemma suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated dimensions in 1..=12.
        #[arg(long, default_value = "1,2,3,4,5,6")]
        dims: String,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// Run only these lemma ids.
        #[arg(long = "lemma")]
        lemmas: Vec<String>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

/// Every library operation and the one subcommand that exposes it.
pub const OPERATION_REGISTRY: &[(&str, &str)] = &[
    ("matmul", "matmul"),
    ("hermitian_conjugate", "adjoint"),
    ("determinant", "det"),
    ("kronecker_product", "kron"),
    ("classify", "check"),
    ("dual_basis", "change-basis"),
    ("rep_vector", "change-basis"),
    ("rep_covector", "change-basis"),
    ("change_of_basis", "change-basis"),
    ("represent_map", "change-basis"),
    ("conjugate_representation", "change-basis"),
    ("operator_determinant", "det"),
    ("rank_nullity", "check"),
    ("tensor_product", "tensor-product"),
    ("contract", "contract"),
    ("transform_tensor", "change-basis"),
    ("kron_flatten", "kron"),
    ("inner_product", "inner"),
    ("norm", "inner"),
    ("riesz_map", "adjoint"),
    ("riesz_inverse", "adjoint"),
    ("orthonormalize", "canonical-basis"),
    ("adjoint", "adjoint"),
    ("is_selfadjoint", "check"),
    ("eigen_hermitian", "eig"),
    ("spectral_representation", "spectral"),
    ("is_unitary_wrt", "check"),
    ("metric_structure_from", "metric"),
    ("compatible_structure_from_hform", "metric"),
    ("signature", "signature"),
    ("canonical_projectors", "projectors"),
    ("h_orthonormal_basis", "canonical-basis"),
    ("dirac_adjoint_vector", "dirac-adjoint"),
    ("dirac_adjoint_covector", "dirac-adjoint"),
    ("dirac_adjoint_operator", "dirac-adjoint"),
    ("is_dirac_selfadjoint", "check"),
    ("is_pseudo_unitary", "check"),
    ("dirac_spectral", "spectral"),
    ("raise_lower_index", "contract"),
    ("is_orthogonal", "check"),
    ("is_pseudo_orthogonal", "check"),
    ("h_value", "inner"),
    ("run_lemma_suite", "verify"),
];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, message: String },
    Document { path: PathBuf, error: DocumentError },
    Domain(Error),
    /// The lemma suite ran but some lemma failed; the report is still emitted.
    SuiteFailed(Value),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::SuiteFailed(_) => EXIT_DOMAIN,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Document { .. } => EXIT_USAGE,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            CliError::Usage(msg) => json!({"error": "UsageError", "message": msg}),
            CliError::Io { path, message } => {
                json!({"error": "IoError", "path": path.display().to_string(), "message": message})
            }
            CliError::Document { path, error } => {
                let mut v = json!({"error": error.kind(), "path": path.display().to_string(), "message": error.to_string()});
                if let DocumentError::Parse { line, column, .. } = error {
                    v["line"] = json!(line);
                    v["column"] = json!(column);
                }
                v
            }
            CliError::Domain(e) => json!({"error": e.kind(), "message": e.to_string()}),
            CliError::SuiteFailed(_) => json!({"error": "LemmaFailure", "message": "one or more lemmas failed"}),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn load(path: &Path) -> CliResult<Document> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    parse_document(&bytes).map_err(|error| CliError::Document { path: path.to_path_buf(), error })
}

fn load_matrix(path: &Path) -> CliResult<DenseMatrix> {
    match load(path)? {
        Document::Matrix(m) => Ok(m),
        Document::Tensor(_) => usage(format!("{} must be a matrix document", path.display())),
    }
}

fn load_tensor(path: &Path) -> CliResult<Tensor> {
    match load(path)? {
        Document::Tensor(t) => Ok(t),
        Document::Matrix(m) => Ok(matrix_as_tensor(&m, None)?),
    }
}

fn matrix_as_tensor(m: &DenseMatrix, role: Option<Role>) -> Result<Tensor, Error> {
    let sp = |n| SpaceHandle::new("V", n, m.field());
    match role.unwrap_or_else(|| default_role(m)) {
        Role::Vector => Tensor::from_ket(&sp(m.rows())?, m),
        Role::Covector => Tensor::from_bra(&sp(m.cols())?, m),
        Role::Operator => Tensor::from_operator(&sp(m.rows())?, m),
    }
}

/// Square matrices (including 1×1) are operators, columns are vectors, rows are covectors.
fn default_role(m: &DenseMatrix) -> Role {
    if m.is_square() {
        Role::Operator
    } else if m.cols() == 1 {
        Role::Vector
    } else {
        Role::Covector
    }
}

fn space(n: usize, field: Field) -> CliResult<SpaceHandle> {
    Ok(SpaceHandle::new("V", n, field)?)
}

fn joint_field<'a>(ms: impl IntoIterator<Item = &'a DenseMatrix>) -> Field {
    ms.into_iter().fold(Field::Real, |f, m| f.join(m.field()))
}

fn square_dim(m: &DenseMatrix, what: &str) -> CliResult<usize> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{what} must be square, got {}x{}", m.rows(), m.cols())).into());
    }
    Ok(m.rows())
}

fn inner_product_for(gram: Option<&DenseMatrix>, sp: &SpaceHandle) -> CliResult<InnerProduct> {
    Ok(match gram {
        Some(g) => InnerProduct::new(sp, g)?,
        None => InnerProduct::standard(sp),
    })
}

/// Metric structure from `--hform` and an optional `--gram`, over a field wide
/// enough for `extra` as well.
fn structure(hform: &Path, gram: Option<&Path>, extra: &[&DenseMatrix]) -> CliResult<MetricStructure> {
    let k = load_matrix(hform)?;
    let g = gram.map(load_matrix).transpose()?;
    let n = square_dim(&k, "H-form")?;
    let field = joint_field(std::iter::once(&k).chain(g.iter()).chain(extra.iter().copied()));
    let sp = space(n, field)?;
    Ok(match g {
        Some(g) => metric_structure_from(&sp, &g, &k)?,
        None => compatible_structure_from_hform(&sp, &k)?,
    })
}

fn spectral_value(sd: &SpectralDecomposition) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("eigenvalues".into(), Value::Array(sd.eigenvalues.iter().map(|&l| number(l)).collect()));
    obj.insert("multiplicities".into(), json!(sd.multiplicities));
    obj.insert("projectors".into(), Value::Array(sd.projectors.iter().map(matrix_to_value).collect()));
    obj.insert("eigenvectors".into(), matrix_to_value(&sd.eigenbasis));
    obj
}

fn group_value(check: RealGroupCheck) -> Value {
    json!({"result": check.member, "det": number(check.det)})
}

fn parse_slots(s: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => usage(format!("--slots expects two integers, got {s:?}")),
        },
        _ => usage(format!("--slots expects two comma-separated integers, got {s:?}")),
    }
}

fn parse_dims(s: &str) -> CliResult<Vec<usize>> {
    let dims = s
        .split(',')
        .map(|d| d.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("--dims expects comma-separated integers, got {s:?}")))?;
    if dims.is_empty() || dims.iter().any(|d| !(1..=12).contains(d)) {
        return usage("--dims entries must lie in 1..=12");
    }
    Ok(dims)
}

pub fn execute(command: &Command) -> CliResult<Value> {
    match command {
        Command::Det { input, basis } => {
            let a = load_matrix(input)?;
            let d = match basis {
                None => determinant(&a)?,
                Some(b) => {
                    let b = load_matrix(b)?;
                    let n = square_dim(&a, "operator")?;
                    let basis = Basis::new(&space(n, joint_field([&a, &b]))?, &b)?;
                    operator_determinant(&represent_map(&a, &basis, &basis)?)?
                }
            };
            Ok(json!({"det": complex(d)}))
        }
        Command::Matmul { inputs } => {
            if inputs.len() < 2 {
                return usage("matmul needs at least two --in matrices");
            }
            let ms = inputs.iter().map(|p| load_matrix(p)).collect::<CliResult<Vec<_>>>()?;
            let mut acc = ms[0].clone();
            for m in &ms[1..] {
                let field = acc.field().join(m.field());
                acc = matmul(&acc.to_field(field)?, &m.to_field(field)?)?;
            }
            Ok(matrix_to_value(&acc))
        }
        Command::Eig { input } => Ok(Value::Object(spectral_value(&eigen_hermitian(&load_matrix(input)?)?))),
        Command::Spectral { input, gram, hform } => {
            let f = load_matrix(input)?;
            match hform {
                Some(k) => {
                    let ms = structure(k, gram.as_deref(), &[&f])?;
                    let ds = dirac_spectral(&f, &ms)?;
                    let mut obj = spectral_value(&ds.decomposition);
                    obj.insert("metric_operator".into(), matrix_to_value(&ds.metric_operator));
                    Ok(Value::Object(obj))
                }
                None => {
                    let g = gram.as_deref().map(load_matrix).transpose()?;
                    let n = square_dim(&f, "operator")?;
                    let sp = space(n, joint_field(std::iter::once(&f).chain(g.iter())))?;
                    let ip = inner_product_for(g.as_ref(), &sp)?;
                    Ok(Value::Object(spectral_value(&spectral_representation(&f, &ip)?)))
                }
            }
        }
        Command::Adjoint { input, gram } => {
            let a = load_matrix(input)?;
            let Some(g) = gram else {
                return Ok(matrix_to_value(&hermitian_conjugate(&a)));
            };
            let g = load_matrix(g)?;
            let n = square_dim(&g, "Gram matrix")?;
            let ip = InnerProduct::new(&space(n, joint_field([&a, &g]))?, &g)?;
            let out = match default_role(&a) {
                Role::Operator => adjoint(&a, &ip)?,
                Role::Vector => riesz_map(&a, &ip)?,
                Role::Covector => riesz_inverse(&a, &ip)?,
            };
            Ok(matrix_to_value(&out))
        }
        Command::DiracAdjoint { input, hform, gram, role } => {
            let a = load_matrix(input)?;
            let ms = structure(hform, gram.as_deref(), &[&a])?;
            let out = match role.unwrap_or_else(|| default_role(&a)) {
                Role::Vector => dirac_adjoint_vector(&a, &ms)?,
                Role::Covector => dirac_adjoint_covector(&a, &ms)?,
                Role::Operator => dirac_adjoint_operator(&a, &ms)?,
            };
            Ok(matrix_to_value(&out))
        }
        Command::Signature { hform, gram } => {
            let s = signature(&structure(hform, gram.as_deref(), &[])?);
            Ok(json!({"n_plus": s.n_plus, "n_minus": s.n_minus}))
        }
        Command::Metric { hform, gram } => {
            let ms = structure(hform, gram.as_deref(), &[])?;
            let s = signature(&ms);
            Ok(json!({
                "gram": matrix_to_value(ms.inner_product().gram()),
                "hform": matrix_to_value(ms.hform().gram()),
                "metric_operator": matrix_to_value(ms.metric_operator()),
                "n_plus": s.n_plus,
                "n_minus": s.n_minus,
                "compatibility_defect": number(ms.compatibility_defect()),
            }))
        }
        Command::CanonicalBasis { input, hform, gram } => match (hform, input) {
            (Some(k), None) => {
                let hb = h_orthonormal_basis(&structure(k, gram.as_deref(), &[])?)?;
                Ok(json!({"basis": matrix_to_value(hb.basis.matrix()), "eta": hb.eta}))
            }
            (None, Some(input)) => {
                let v = load_matrix(input)?;
                let g = gram.as_deref().map(load_matrix).transpose()?;
                let sp = space(v.rows(), joint_field(std::iter::once(&v).chain(g.iter())))?;
                let ip = inner_product_for(g.as_ref(), &sp)?;
                let family: Vec<DenseMatrix> = (0..v.cols()).map(|j| v.column(j)).collect();
                let b = orthonormalize(&family, &ip)?;
                Ok(json!({"basis": matrix_to_value(b.matrix())}))
            }
            _ => usage("canonical-basis takes either --hform or --in"),
        },
        Command::Projectors { hform, gram } => {
            let (pp, pm) = canonical_projectors(&structure(hform, gram.as_deref(), &[])?);
            Ok(json!({"p_plus": matrix_to_value(&pp), "p_minus": matrix_to_value(&pm)}))
        }
        Command::TensorProduct { inputs } => {
            if inputs.len() != 2 {
                return usage("tensor-product needs exactly two --in documents");
            }
            let (a, b) = (load_tensor(&inputs[0])?, load_tensor(&inputs[1])?);
            Ok(tensor_to_value(&tensor_product(&a, &b)?))
        }
        Command::Contract { input, slots, slot, hform, gram } => {
            let t = load_tensor(input)?;
            match (slots, slot, hform) {
                (Some(s), None, None) => {
                    let (k, l) = parse_slots(s)?;
                    Ok(tensor_to_value(&contract(&t, k, l)?))
                }
                (None, Some(k), Some(hf)) => {
                    let ms = structure(hf, gram.as_deref(), &[])?;
                    let t = if ms.space().field() == Field::Complex && t.space().field() == Field::Real {
                        Tensor::new(ms.space(), t.slots().to_vec(), t.components().to_vec())?
                    } else {
                        t
                    };
                    Ok(tensor_to_value(&raise_lower_index(&t, *k, &ms)?))
                }
                _ => usage("contract takes either --slots k,l or --slot k with --hform"),
            }
        }
        Command::Kron { inputs } => match inputs.as_slice() {
            [a, b] => {
                let (a, b) = (load_matrix(a)?, load_matrix(b)?);
                let field = a.field().join(b.field());
                Ok(matrix_to_value(&kronecker_product(&a.to_field(field)?, &b.to_field(field)?)?))
            }
            [t] => match load(t)? {
                Document::Tensor(t) => Ok(matrix_to_value(&kron_flatten(&t)?)),
                Document::Matrix(_) => usage("kron with one input expects a tensor document"),
            },
            _ => usage("kron takes one tensor or two matrices"),
        },
        Command::ChangeBasis { basis, from, input, role } => change_basis(basis, from.as_deref(), input.as_deref(), *role),
        Command::Check { kind, input, gram, hform } => check(*kind, input, gram.as_deref(), hform.as_deref()),
        Command::Inner { inputs, gram, hform } => {
            if inputs.is_empty() || inputs.len() > 2 {
                return usage("inner takes one or two --in kets");
            }
            let xs = inputs.iter().map(|p| load_matrix(p)).collect::<CliResult<Vec<_>>>()?;
            let y = xs.last().expect("non-empty");
            if let Some(k) = hform {
                let ms = structure(k, gram.as_deref(), &xs.iter().collect::<Vec<_>>())?;
                return Ok(json!({"h_value": complex(ms.h_value(&xs[0], y)?)}));
            }
            let g = gram.as_deref().map(load_matrix).transpose()?;
            let n = xs[0].rows();
            let sp = space(n, joint_field(xs.iter().chain(g.iter())))?;
            let ip = inner_product_for(g.as_ref(), &sp)?;
            if xs.len() == 1 {
                Ok(json!({"norm": number(norm(&xs[0], &ip)?)}))
            } else {
                Ok(json!({"inner": complex(inner_product(&xs[0], y, &ip)?)}))
            }
        }
        Command::Verify { seed, dims, instances, lemmas, inject_fault } => {
            if *instances == 0 {
                return usage("--instances must be at least 1");
            }
            let known: Vec<&str> = crate::lemmas::registry().iter().map(|l| l.id).collect();
            if let Some(bad) = lemmas.iter().find(|id| !known.contains(&id.as_str())) {
                return usage(format!("unknown lemma id {bad:?}"));
            }
            let cfg = SuiteConfig {
                seed: *seed,
                dims: parse_dims(dims)?,
                instances: *instances,
                fault: inject_fault.map(|FaultArg::BreakCompatibility| Fault::BreakCompatibility),
                field: None,
                only: lemmas.clone(),
            };
            let reports = run_lemma_suite(&cfg);
            let passed = reports.iter().all(|r| r.passed);
            let doc = json!({
                "seed": cfg.seed,
                "dims": cfg.dims,
                "instances": cfg.instances,
                "passed": passed,
                "reports": reports.iter().map(|r| r.to_value()).collect::<Vec<_>>(),
            });
            if passed {
                Ok(doc)
            } else {
                Err(CliError::SuiteFailed(doc))
            }
        }
    }
}

fn change_basis(basis: &Path, from: Option<&Path>, input: Option<&Path>, role: Option<Role>) -> CliResult<Value> {
    let b = load_matrix(basis)?;
    let e = from.map(load_matrix).transpose()?;
    let doc = input.map(load).transpose()?;
    let n = square_dim(&b, "basis")?;
    let mut field = joint_field(std::iter::once(&b).chain(e.iter()));
    match &doc {
        Some(Document::Matrix(m)) => field = field.join(m.field()),
        Some(Document::Tensor(t)) => field = field.join(t.space().field()),
        None => {}
    }
    let sp = space(n, field)?;
    let b = Basis::new(&sp, &b)?;
    let e = match e {
        Some(e) => Basis::new(&sp, &e)?,
        None => Basis::natural(&sp),
    };
    match doc {
        None if from.is_none() => Ok(json!({"dual_basis": matrix_to_value(&dual_basis(&b))})),
        None => Ok(json!({"transition": matrix_to_value(&change_of_basis(&e, &b)?)})),
        Some(Document::Tensor(t)) => {
            let t = Tensor::new(&sp, t.slots().to_vec(), t.components().to_vec())?;
            Ok(json!({"tensor": tensor_to_value(&transform_tensor(&t, &change_of_basis(&e, &b)?)?)}))
        }
        Some(Document::Matrix(m)) => {
            let m = m.to_field(field)?;
            match role.unwrap_or_else(|| default_role(&m)) {
                Role::Vector => {
                    let x = matmul(e.matrix(), &m)?;
                    Ok(json!({"components": matrix_to_value(&rep_vector(&x, &b)?.components)}))
                }
                Role::Covector => {
                    let y = matmul(&m, e.inverse())?;
                    Ok(json!({"components": matrix_to_value(&rep_covector(&y, &b)?.components)}))
                }
                Role::Operator if from.is_none() => {
                    Ok(json!({"representation": matrix_to_value(&represent_map(&m, &b, &b)?.matrix)}))
                }
                Role::Operator => {
                    square_dim(&m, "operator")?;
                    let rep = LinearMapRep { domain: e.clone(), codomain: e, matrix: m };
                    Ok(json!({"representation": matrix_to_value(&conjugate_representation(&rep, &b)?.matrix)}))
                }
            }
        }
    }
}

fn check(kind: CheckKind, input: &Path, gram: Option<&Path>, hform: Option<&Path>) -> CliResult<Value> {
    let f = load_matrix(input)?;
    let need_hform = || hform.map_or_else(|| usage(format!("--kind {kind:?} needs --hform")), Ok);
    let ip = |f: &DenseMatrix| -> CliResult<InnerProduct> {
        let g = gram.map(load_matrix).transpose()?;
        let sp = space(f.rows(), joint_field(std::iter::once(f).chain(g.iter())))?;
        inner_product_for(g.as_ref(), &sp)
    };
    let result = |b: bool| Ok(json!({"result": b}));
    match kind {
        CheckKind::Hermitian => result(classify(&f)?.contains(&MatrixClass::Hermitian)),
        CheckKind::Unitary => match gram {
            None => result(classify(&f)?.contains(&MatrixClass::Unitary)),
            Some(_) => result(is_unitary_wrt(&f, &ip(&f)?)?),
        },
        CheckKind::Selfadjoint => result(is_selfadjoint(&f, &ip(&f)?)?),
        CheckKind::Orthogonal => Ok(group_value(is_orthogonal(&f)?)),
        CheckKind::DiracSelfadjoint => {
            let ms = structure(need_hform()?, gram, &[&f])?;
            result(is_dirac_selfadjoint(&f, &ms)?)
        }
        CheckKind::PseudoUnitary => {
            let ms = structure(need_hform()?, gram, &[&f])?;
            result(is_pseudo_unitary(&f, &ms)?)
        }
        CheckKind::PseudoOrthogonal => {
            let ms = structure(need_hform()?, gram, &[&f])?;
            Ok(group_value(is_pseudo_orthogonal(&f, &ms)?))
        }
        CheckKind::Classify => {
            let classes: Vec<&str> = classify(&f)?.into_iter().map(MatrixClass::as_str).collect();
            Ok(json!({"classes": classes}))
        }
        CheckKind::RankNullity => {
            let rn = rank_nullity(&f);
            Ok(json!({"rank": rn.rank, "nullity": rn.nullity}))
        }
    }
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<String, CliError> {
    let text = render(doc);
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_subcommand<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let out = cli.out.as_deref();
    let (result, stdout) = match execute(&cli.command) {
        Ok(doc) => match emit(&doc, out) {
            Ok(text) => return Outcome { code: EXIT_OK, stdout: text, stderr: String::new() },
            Err(e) => (e, String::new()),
        },
        Err(CliError::SuiteFailed(doc)) => match emit(&doc, out) {
            Ok(text) => (CliError::SuiteFailed(Value::Null), text),
            Err(e) => (e, String::new()),
        },
        Err(e) => (e, String::new()),
    };
    Outcome { code: result.exit_code(), stdout, stderr: render(&result.to_value()) }
}

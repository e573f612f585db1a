//! Symbolic Pauli-sum algebra.
//!
//! A Hamiltonian is represented as a sum of complex-weighted tensor products
//! of single-site Pauli operators,
//!
//!   H = Σ_k c_k · (σ^{a_k0} ⊗ σ^{a_k1} ⊗ … ⊗ σ^{a_k,n-1}),
//!
//! with one axis letter per qubit and qubit 0 occupying the leftmost (most
//! significant) tensor slot. Energies are in GHz with ħ = 1.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::dense::DenseOperator;
use crate::error::{CoreError, Result};

/// Coefficients with magnitude below this are dropped by [`PauliSum::canonicalize`].
pub const COEFF_DROP_TOLERANCE: f64 = 1e-14;

/// Largest register for which a dense realization is built by default.
pub const DEFAULT_MAX_DENSE_QUBITS: usize = 12;

/// Single-qubit Pauli operator. The variant order matches the ASCII order of
/// the axis letters, so derived ordering is lexicographic on axis strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn to_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliAxis::I),
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    /// The 2×2 matrix, row-major.
    pub fn matrix(self) -> [Complex64; 4] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match self {
            PauliAxis::I => [l, o, o, l],
            PauliAxis::X => [o, l, l, o],
            PauliAxis::Y => [o, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), o],
            PauliAxis::Z => [l, o, o, -l],
        }
    }

    /// Action on a basis row index bit: returns (column bit, entry value).
    ///
    /// Every Pauli matrix has exactly one nonzero entry per row, which makes
    /// traces against a density matrix computable without densifying.
    fn row_action(self, bit: usize) -> (usize, Complex64) {
        match self {
            PauliAxis::I => (bit, Complex64::new(1.0, 0.0)),
            PauliAxis::X => (1 - bit, Complex64::new(1.0, 0.0)),
            PauliAxis::Y => {
                if bit == 0 {
                    (1, Complex64::new(0.0, -1.0))
                } else {
                    (0, Complex64::new(0.0, 1.0))
                }
            }
            PauliAxis::Z => (bit, Complex64::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0)),
        }
    }
}

/// One weighted tensor product of Pauli operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub axes: Vec<PauliAxis>,
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, axes: Vec<PauliAxis>) -> Self {
        Self { coefficient, axes }
    }

    /// Term from an axis string such as `"YYXX"`.
    pub fn parse(coefficient: Complex64, axes: &str) -> Result<Self> {
        let axes = axes
            .chars()
            .map(|c| {
                PauliAxis::from_char(c).ok_or_else(|| CoreError::Parse {
                    line: 0,
                    message: format!("invalid Pauli axis letter '{c}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coefficient, axes })
    }

    /// Identity on `n` qubits with the given weight.
    pub fn identity(n: usize, coefficient: Complex64) -> Self {
        Self::new(coefficient, vec![PauliAxis::I; n])
    }

    /// Weighted single-site operator embedded in an `n`-qubit register.
    pub fn single(n: usize, site: usize, axis: PauliAxis, coefficient: Complex64) -> Self {
        let mut axes = vec![PauliAxis::I; n];
        axes[site] = axis;
        Self::new(coefficient, axes)
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|a| *a == PauliAxis::I)
    }

    pub fn axes_string(&self) -> String {
        self.axes.iter().map(|a| a.to_char()).collect()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i)·{}",
            self.coefficient.re,
            self.coefficient.im,
            self.axes_string()
        )
    }
}

/// A sum of Pauli terms over a fixed qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(CoreError::EmptyRegister);
        }
        Ok(Self {
            n_qubits,
            terms: Vec::new(),
        })
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        let mut sum = Self::new(n_qubits)?;
        for t in terms {
            sum.push(t)?;
        }
        Ok(sum)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn push(&mut self, term: PauliTerm) -> Result<()> {
        if term.axes.len() != self.n_qubits {
            return Err(CoreError::DimensionMismatch {
                left: self.n_qubits,
                right: term.axes.len(),
            });
        }
        self.terms.push(term);
        Ok(())
    }

    /// Merge terms with identical axes, drop coefficients below
    /// [`COEFF_DROP_TOLERANCE`], and sort lexicographically by axis string.
    /// Idempotent.
    pub fn canonicalize(&self) -> Self {
        let mut merged: BTreeMap<Vec<PauliAxis>, Complex64> = BTreeMap::new();
        for term in &self.terms {
            *merged
                .entry(term.axes.clone())
                .or_insert_with(|| Complex64::new(0.0, 0.0)) += term.coefficient;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_DROP_TOLERANCE)
            .map(|(axes, coefficient)| PauliTerm { coefficient, axes })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    /// True when the canonical form has real coefficients only, which for
    /// Pauli strings (self-adjoint) is equivalent to Hermiticity of the sum.
    pub fn is_hermitian(&self) -> bool {
        self.canonicalize()
            .terms
            .iter()
            .all(|t| t.coefficient.im.abs() <= 1e-12)
    }

    /// Dense matrix realization, qubit 0 in the most significant tensor slot.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(DEFAULT_MAX_DENSE_QUBITS)
    }

    pub fn to_dense_with_limit(&self, max_qubits: usize) -> Result<DenseOperator> {
        if self.n_qubits > max_qubits {
            return Err(CoreError::TooManyQubits {
                n: self.n_qubits,
                max: max_qubits,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut out = DenseOperator::zeros(dim);
        for term in &self.terms {
            let mut m = DenseOperator::from_entries(1, vec![Complex64::new(1.0, 0.0)]);
            for axis in &term.axes {
                let p = DenseOperator::from_entries(2, axis.matrix().to_vec());
                m = m.kron(&p);
            }
            let scaled = m.scale(term.coefficient);
            out = out.add(&scaled)?;
        }
        Ok(out)
    }

    /// `Re Tr[H ρ]` evaluated term by term without densifying the sum.
    ///
    /// Each Pauli string has one nonzero entry per row, so its trace against
    /// ρ costs O(d) per term.
    pub fn expectation(&self, rho: &DenseOperator) -> Result<f64> {
        let dim = 1usize << self.n_qubits;
        if rho.dim() != dim {
            return Err(CoreError::DimensionMismatch {
                left: dim,
                right: rho.dim(),
            });
        }
        let n = self.n_qubits;
        let mut total = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in 0..dim {
                let mut col = 0usize;
                let mut phase = Complex64::new(1.0, 0.0);
                for (q, axis) in term.axes.iter().enumerate() {
                    let bit = (row >> (n - 1 - q)) & 1;
                    let (out_bit, value) = axis.row_action(bit);
                    col |= out_bit << (n - 1 - q);
                    phase *= value;
                }
                // Tr[Pρ] = Σ_row P[row, col] ρ[col, row]
                acc += phase * rho[(col, row)];
            }
            total += term.coefficient * acc;
        }
        if total.im.abs() > 1e-9 {
            return Err(CoreError::NumericalAbort(format!(
                "expectation value trace has imaginary part {:.3e}",
                total.im
            )));
        }
        Ok(total.re)
    }

    /// Parse the Pauli-sum text format: one `<re> <im> <axes>` triple per
    /// line, `#` starts a comment, blank lines ignored. The register size is
    /// inferred from the first term.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut terms: Vec<PauliTerm> = Vec::new();
        let mut n_qubits: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(CoreError::Parse {
                    line: line_no,
                    message: format!("expected `<re> <im> <axes>`, found {} fields", fields.len()),
                });
            }
            let re: f64 = fields[0].parse().map_err(|e| CoreError::Parse {
                line: line_no,
                message: format!("bad real part: {e}"),
            })?;
            let im: f64 = fields[1].parse().map_err(|e| CoreError::Parse {
                line: line_no,
                message: format!("bad imaginary part: {e}"),
            })?;
            let term =
                PauliTerm::parse(Complex64::new(re, im), fields[2]).map_err(|e| match e {
                    CoreError::Parse { message, .. } => CoreError::Parse {
                        line: line_no,
                        message,
                    },
                    other => other,
                })?;
            match n_qubits {
                None => n_qubits = Some(term.axes.len()),
                Some(n) if n != term.axes.len() => {
                    return Err(CoreError::Parse {
                        line: line_no,
                        message: format!(
                            "axis string length {} does not match earlier length {n}",
                            term.axes.len()
                        ),
                    });
                }
                _ => {}
            }
            terms.push(term);
        }
        let n_qubits = n_qubits.ok_or(CoreError::Parse {
            line: 0,
            message: "no terms found".into(),
        })?;
        Self::from_terms(n_qubits, terms)
    }

    /// Serialize to the text format parsed by [`PauliSum::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for term in &self.terms {
            out.push_str(&format!(
                "{} {} {}\n",
                term.coefficient.re,
                term.coefficient.im,
                term.axes_string()
            ));
        }
        out
    }
}

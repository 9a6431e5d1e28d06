//! Test-function families.
//!
//! The executable family is the monomial basis of bounded total degree in
//! `s` variables, ordered graded-lexicographically: by total degree first,
//! then in descending lexicographic order of the exponent vectors (so `x1`
//! precedes `x2`). The first member is always the constant function.
//!
//! Tabulated families carry only member names; their values are supplied
//! externally as a lifted matrix (see [`crate::cubature::subsample_lifted`]).

use std::fmt;

use crate::error::{Error, Result};

/// Largest basis size [`enumerate_monomials`] will materialize.
pub const DEFAULT_MAX_BASIS_SIZE: usize = 200_000;

/// Exponent vector of one monomial `x1^a1 * ... * xs^as`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(s: usize) -> Self {
        MultiIndex(vec![0; s])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `prod_i x_i^{a_i}`, each power by repeated squaring.
    pub fn evaluate(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.0.len());
        self.0
            .iter()
            .zip(point)
            .map(|(&a, &x)| pow_by_squaring(x, a))
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn pow_by_squaring(mut base: f64, mut exp: u32) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        exp >>= 1;
        if exp > 0 {
            base *= base;
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisKind {
    Monomial { max_degree: u32 },
    Tabulated { names: Vec<String> },
}

/// Ordered family `phi = (phi_1, ..., phi_d)` with `phi_1 == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestFunctionBasis {
    input_dim: usize,
    kind: BasisKind,
    members: Vec<MultiIndex>,
}

/// `C(s + m, s)`, the number of `s`-variate monomials of total degree at most `m`.
pub fn basis_dim(s: usize, m: u32) -> Result<usize> {
    if s == 0 {
        return Err(Error::InvalidInput("input dimension must be positive".into()));
    }
    // C(s+m, m) built up as prod_{i=1..m} (s+i)/i; every partial product is an integer.
    let mut acc: u128 = 1;
    for i in 1..=u128::from(m) {
        acc = acc
            .checked_mul(s as u128 + i)
            .ok_or_else(|| overflow(s, m))?
            / i;
    }
    usize::try_from(acc).map_err(|_| overflow(s, m))
}

fn overflow(s: usize, m: u32) -> Error {
    Error::SizeCap {
        context: "monomial basis dimension",
        requested: format!("C({}+{}, {})", s, m, s),
        cap: usize::MAX,
    }
}

/// All monomials of total degree `<= m` in `s` variables, constant first.
pub fn enumerate_monomials(s: usize, m: u32) -> Result<TestFunctionBasis> {
    enumerate_monomials_capped(s, m, DEFAULT_MAX_BASIS_SIZE)
}

pub fn enumerate_monomials_capped(s: usize, m: u32, cap: usize) -> Result<TestFunctionBasis> {
    let d = basis_dim(s, m)?;
    if d > cap {
        return Err(Error::SizeCap {
            context: "monomial basis",
            requested: d.to_string(),
            cap,
        });
    }
    let mut members = Vec::with_capacity(d);
    let mut scratch = vec![0u32; s];
    for degree in 0..=m {
        push_compositions(&mut scratch, 0, degree, &mut members);
    }
    debug_assert_eq!(members.len(), d);
    Ok(TestFunctionBasis {
        input_dim: s,
        kind: BasisKind::Monomial { max_degree: m },
        members,
    })
}

// Exponent vectors of exactly `remaining` total degree over positions `pos..`,
// in descending lexicographic order.
fn push_compositions(scratch: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(MultiIndex(scratch.to_vec()));
        return;
    }
    for a in (0..=remaining).rev() {
        scratch[pos] = a;
        push_compositions(scratch, pos + 1, remaining - a, out);
    }
    scratch[pos] = 0;
}

impl TestFunctionBasis {
    pub fn monomial(s: usize, m: u32) -> Result<Self> {
        enumerate_monomials(s, m)
    }

    /// A family whose values are supplied externally. The first name must be `"1"`.
    pub fn tabulated(input_dim: usize, names: Vec<String>) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::InvalidInput("input dimension must be positive".into()));
        }
        match names.first() {
            Some(first) if first == "1" => {}
            _ => {
                return Err(Error::InvalidInput(
                    "the first tabulated test function must be the constant \"1\"".into(),
                ))
            }
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ',') {
                return Err(Error::InvalidInput(format!("invalid test function name {name:?}")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidInput(format!("duplicate test function {name:?}")));
            }
        }
        Ok(TestFunctionBasis {
            input_dim,
            kind: BasisKind::Tabulated { names },
            members: Vec::new(),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn max_degree(&self) -> Option<u32> {
        match self.kind {
            BasisKind::Monomial { max_degree } => Some(max_degree),
            BasisKind::Tabulated { .. } => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.kind, BasisKind::Monomial { .. })
    }

    /// Number of test functions `d`.
    pub fn len(&self) -> usize {
        match &self.kind {
            BasisKind::Monomial { .. } => self.members.len(),
            BasisKind::Tabulated { names } => names.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Monomial exponents; empty for tabulated families.
    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.members.iter().position(|m| m == alpha)
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.evaluate_into(point, &mut out)?;
        Ok(out)
    }

    /// Writes `phi(point)` into `out`.
    pub fn evaluate_into(&self, point: &[f64], out: &mut [f64]) -> Result<()> {
        if point.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                context: "basis evaluation point",
                expected: self.input_dim,
                found: point.len(),
            });
        }
        if out.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "basis evaluation output",
                expected: self.len(),
                found: out.len(),
            });
        }
        let max_degree = match self.kind {
            BasisKind::Monomial { max_degree } => max_degree as usize,
            BasisKind::Tabulated { .. } => {
                return Err(Error::Unsupported(
                    "tabulated test functions have no pointwise evaluation".into(),
                ))
            }
        };
        // powers[i * (m+1) + k] = x_i^k
        let stride = max_degree + 1;
        let mut powers = vec![1.0; self.input_dim * stride];
        for (i, &x) in point.iter().enumerate() {
            for k in 1..stride {
                powers[i * stride + k] = pow_by_squaring(x, k as u32);
            }
        }
        for (slot, alpha) in out.iter_mut().zip(&self.members) {
            *slot = alpha
                .exponents()
                .iter()
                .enumerate()
                .map(|(i, &a)| powers[i * stride + a as usize])
                .product();
        }
        out[0] = 1.0;
        Ok(())
    }

    /// Column-major `d x n` matrix whose column `j` is `phi(points[j])`.
    pub fn lift(&self, points: &crate::PointSet) -> Result<Vec<f64>> {
        let d = self.len();
        let mut out = vec![0.0; d * points.len()];
        for (row, col) in points.rows().zip(out.chunks_exact_mut(d)) {
            self.evaluate_into(row, col)?;
        }
        Ok(out)
    }

    /// Single-line record: `monomial s=<s> m=<m>` or `tabulated s=<s> names=1,f2,...`.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            BasisKind::Monomial { max_degree } => {
                format!("monomial s={} m={}", self.input_dim, max_degree)
            }
            BasisKind::Tabulated { names } => {
                format!("tabulated s={} names={}", self.input_dim, names.join(","))
            }
        }
    }

    pub fn from_descriptor(text: &str) -> Result<Self> {
        let mut fields = text.split_whitespace();
        let kind = fields
            .next()
            .ok_or_else(|| Error::InvalidInput("empty basis descriptor".into()))?;
        let mut s = None;
        let mut m = None;
        let mut names = None;
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("malformed basis field {field:?}")))?;
            match key {
                "s" => s = Some(parse_field::<usize>(key, value)?),
                "m" => m = Some(parse_field::<u32>(key, value)?),
                "names" => names = Some(value.split(',').map(str::to_owned).collect::<Vec<_>>()),
                _ => return Err(Error::InvalidInput(format!("unknown basis field {key:?}"))),
            }
        }
        let s = s.ok_or_else(|| Error::InvalidInput("basis descriptor lacks s".into()))?;
        match kind {
            "monomial" => {
                let m = m.ok_or_else(|| Error::InvalidInput("monomial basis lacks m".into()))?;
                enumerate_monomials(s, m)
            }
            "tabulated" => {
                let names =
                    names.ok_or_else(|| Error::InvalidInput("tabulated basis lacks names".into()))?;
                TestFunctionBasis::tabulated(s, names)
            }
            other => Err(Error::InvalidInput(format!("unknown basis kind {other:?}"))),
        }
    }
}

fn parse_field<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("invalid value {value:?} for basis field {key}")))
}

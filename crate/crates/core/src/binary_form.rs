//! Homogeneous polynomials in two variables `s, t`.
//!
//! `coeffs[i]` is the coefficient of `s^(d-i) t^i`. Common roots over the
//! algebraic closure are decided by gcds; quadratic roots are made explicit in
//! a degree-2 extension instead of being approximated.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<Scalar>,
}

/// A point `(s : t)` of the projective line, possibly over an extension field.
pub type ProjPoint = [Scalar; 2];

#[derive(Clone, Debug, PartialEq)]
pub enum FormGcd {
    /// Every input form was zero: the forms impose no condition at all.
    IdenticallyZero,
    Form(BinaryForm),
}

impl FormGcd {
    pub fn degree(&self) -> Option<usize> {
        match self {
            FormGcd::IdenticallyZero => None,
            FormGcd::Form(f) => Some(f.degree()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootStructure {
    SplitRational(ProjPoint, ProjPoint),
    DoubleRational(ProjPoint),
    /// Conjugate roots living in `base[θ]/(θ² − disc)`.
    IrreducibleQuadratic { disc: Scalar, field: Field, roots: [ProjPoint; 2] },
}

impl RootStructure {
    pub fn roots(&self) -> Vec<ProjPoint> {
        match self {
            RootStructure::SplitRational(a, b) => vec![a.clone(), b.clone()],
            RootStructure::DoubleRational(a) => vec![a.clone()],
            RootStructure::IrreducibleQuadratic { roots, .. } => roots.to_vec(),
        }
    }

    pub fn field(&self) -> Option<&Field> {
        match self {
            RootStructure::IrreducibleQuadratic { field, .. } => Some(field),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RootStructure::SplitRational(..) => "split",
            RootStructure::DoubleRational(..) => "double",
            RootStructure::IrreducibleQuadratic { .. } => "irreducible",
        }
    }
}

impl BinaryForm {
    pub fn new(field: &Field, coeffs: Vec<Scalar>) -> Result<BinaryForm> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a binary form needs at least one coefficient".into()));
        }
        if let Some(x) = coeffs.iter().find(|x| !field.contains(x)) {
            return Err(Error::InvalidField(format!("coefficient {x} is not in {field}")));
        }
        Ok(BinaryForm { field: field.clone(), coeffs })
    }

    pub fn from_i64(field: &Field, coeffs: &[i64]) -> BinaryForm {
        BinaryForm { field: field.clone(), coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect() }
    }

    pub fn zero(field: &Field, degree: usize) -> BinaryForm {
        BinaryForm { field: field.clone(), coeffs: vec![field.zero(); degree + 1] }
    }

    /// Linear form `a·s + b·t`.
    pub fn linear(a: Scalar, b: Scalar) -> BinaryForm {
        let field = a.field();
        BinaryForm { field, coeffs: vec![a, b] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, s: &Scalar, t: &Scalar) -> Scalar {
        let d = self.degree() as u32;
        let f = s.field();
        self.coeffs.iter().enumerate().fold(f.zero(), |acc, (i, c)| {
            acc + &(&f.embed(c) * &(s.pow(d - i as u32) * t.pow(i as u32)))
        })
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch { op: "form add", left: self.degree(), right: other.degree() });
        }
        Ok(BinaryForm {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> BinaryForm {
        BinaryForm { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut coeffs = vec![self.field.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BinaryForm { field: self.field.clone(), coeffs }
    }

    /// Largest `k` with `s^k` dividing the form (the multiplicity of the root `(0 : 1)`).
    fn s_valuation(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Scale so the first nonzero coefficient is 1.
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Discriminant `c1² − 4 c0 c2` of a quadratic form.
    pub fn discriminant(&self) -> Result<Scalar> {
        if self.degree() != 2 {
            return Err(Error::Invalid(format!("discriminant needs degree 2, got {}", self.degree())));
        }
        let [c0, c1, c2] = [&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]];
        Ok(c1 * c1 - &(&self.field.from_i64(4) * &(c0 * c2)))
    }

    pub fn root_structure(&self) -> Result<RootStructure> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let disc = self.discriminant()?;
        let f = &self.field;
        let [c0, c1, c2] = [&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]];
        if c0.is_zero() {
            // t·(c1 s + c2 t)
            if c1.is_zero() {
                return Ok(RootStructure::DoubleRational([f.one(), f.zero()]));
            }
            return Ok(RootStructure::SplitRational([f.one(), f.zero()], [-c2, c1.clone()]));
        }
        let two_c0 = &f.from_i64(2) * c0;
        if disc.is_zero() {
            return Ok(RootStructure::DoubleRational([-c1, two_c0]));
        }
        if let Some(r) = disc.sqrt() {
            return Ok(RootStructure::SplitRational([-c1 + r.clone(), two_c0.clone()], [-c1 - r, two_c0]));
        }
        let ext = Field::quadratic(f, disc.clone())?;
        let theta = ext.theta().expect("extension field");
        let m = ext.embed(&-c1);
        let d = ext.embed(&two_c0);
        Ok(RootStructure::IrreducibleQuadratic {
            disc,
            field: ext,
            roots: [[&m + &theta, d.clone()], [&m - &theta, d]],
        })
    }

    /// Projective roots of a form of degree at most 2 (with multiplicity collapsed).
    pub fn roots(&self) -> Result<(Option<Field>, Vec<ProjPoint>)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let f = &self.field;
        let nz: Vec<usize> = (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect();
        match self.degree() {
            0 => Ok((None, vec![])),
            1 => Ok((None, vec![[-&self.coeffs[1], self.coeffs[0].clone()]])),
            2 => {
                let rs = self.root_structure()?;
                Ok((rs.field().cloned(), rs.roots()))
            }
            d => Err(Error::Invalid(format!(
                "explicit roots only for degree ≤ 2 (got degree {d}, support {nz:?} over {f})"
            ))),
        }
    }
}

/// Univariate polynomial helpers; coefficient vectors are low degree first.
fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    let lead_inv = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
    while r.len() >= b.len() {
        let top = r.last().unwrap().clone();
        if !top.is_zero() {
            let q = &top * &lead_inv;
            let shift = r.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&q * bi);
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn poly_gcd(a: Vec<Scalar>, b: Vec<Scalar>) -> Vec<Scalar> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Monic gcd of a non-empty list of binary forms over a common field.
///
/// The result has degree 0 exactly when the forms share no projective root
/// over the algebraic closure.
pub fn binary_form_gcd(forms: &[BinaryForm]) -> Result<FormGcd> {
    let Some(first) = forms.first() else {
        return Err(Error::Invalid("gcd of an empty list of forms".into()));
    };
    let field = first.field.clone();
    if forms.iter().any(|f| f.field != field) {
        return Err(Error::InvalidField("forms over different fields".into()));
    }
    let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(FormGcd::IdenticallyZero);
    }
    let sval = nonzero.iter().map(|f| f.s_valuation()).min().unwrap();
    // Dehomogenize at s = 1: f(1, t) = Σ c_i t^i. Roots at (0:1) are the s-factors.
    let g = nonzero.iter().fold(Vec::new(), |acc, f| poly_gcd(acc, f.coeffs.clone()));
    let e = g.len() - 1;
    let lead_inv = g[e].inv().expect("nonzero");
    let mut coeffs: Vec<Scalar> = g.iter().map(|c| c * &lead_inv).collect();
    coeffs.extend(std::iter::repeat_n(field.zero(), sval));
    Ok(FormGcd::Form(BinaryForm { field, coeffs }.monic()))
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => pow_str("s", a),
                (0, b) => pow_str("t", b),
                (a, b) => format!("{}*{}", pow_str("s", a), pow_str("t", b)),
            };
            terms.push(if mono.is_empty() { format!("({c})") } else { format!("({c})*{mono}") });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn pow_str(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

//! Homogeneous forms in up to five variables over a [`FieldDesc`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::{FieldDesc, FqElem};

/// Exponent vector; unused trailing variables stay at zero.
pub type Monomial = [u8; 5];

pub fn monomial_degree(m: &Monomial) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// All monomials of the given degree in `nvars` variables, in lexicographic
/// order with the first variable's exponent most significant (x1^d first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left as u8;
            out.push(*cur);
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(nvars, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = [0u8; 5];
    rec(nvars, 0, degree, &mut cur, &mut out);
    out
}

/// A homogeneous polynomial; only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, FqElem>,
}

impl Form {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        assert!((1..=5).contains(&nvars));
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    /// The coordinate function x_{i+1}.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = [0u8; 5];
        m[i] = 1;
        let mut f = Form::zero(nvars, 1);
        f.terms.insert(m, FqElem::ONE);
        f
    }

    pub fn from_terms(
        field: &FieldDesc,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, FqElem)>,
    ) -> Self {
        let mut f = Form::zero(nvars, degree);
        for (m, c) in terms {
            assert_eq!(monomial_degree(&m), degree, "inhomogeneous term {m:?}");
            assert!(m[nvars..].iter().all(|&e| e == 0));
            f.add_term(field, m, c);
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FqElem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> FqElem {
        self.terms.get(m).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn add_term(&mut self, field: &FieldDesc, m: Monomial, c: FqElem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert(FqElem::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, field: &FieldDesc, other: &Form) -> Form {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        out.nvars = self.nvars.max(other.nvars);
        for (&m, &c) in &other.terms {
            out.add_term(field, m, c);
        }
        out
    }

    pub fn neg(&self, field: &FieldDesc) -> Form {
        self.map_coeffs(|c| field.neg(c))
    }

    pub fn sub(&self, field: &FieldDesc, other: &Form) -> Form {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &FieldDesc, c: FqElem) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (&m, &v) in &self.terms {
            out.add_term(field, m, field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, field: &FieldDesc, other: &Form) -> Form {
        let mut out = Form::zero(self.nvars.max(other.nvars), self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let mut m = [0u8; 5];
                for k in 0..5 {
                    m[k] = a[k] + b[k];
                }
                out.add_term(field, m, field.mul(ca, cb));
            }
        }
        out
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, mut f: impl FnMut(FqElem) -> FqElem) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (&m, &c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(m, v);
            }
        }
        out
    }

    pub fn eval(&self, field: &FieldDesc, point: &[FqElem]) -> FqElem {
        let mut acc = FqElem::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (k, &e) in m.iter().enumerate().take(self.nvars) {
                if e > 0 {
                    t = field.mul(t, field.pow(point[k], e as u64));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Substitutes x_i = sum_j rows[i][j] y_j, producing a form in `rows[0].len()` variables.
    pub fn substitute_linear(&self, field: &FieldDesc, rows: &[Vec<FqElem>]) -> Form {
        assert_eq!(rows.len(), self.nvars);
        let new_vars = rows[0].len();
        let linear: Vec<Form> = rows
            .iter()
            .map(|row| {
                let mut f = Form::zero(new_vars, 1);
                for (j, &c) in row.iter().enumerate() {
                    let mut m = [0u8; 5];
                    m[j] = 1;
                    f.add_term(field, m, c);
                }
                f
            })
            .collect();
        let mut out = Form::zero(new_vars, self.degree);
        for (m, &c) in &self.terms {
            let mut prod = Form::zero(new_vars, 0);
            prod.add_term(field, [0; 5], c);
            for (k, &e) in m.iter().enumerate().take(self.nvars) {
                for _ in 0..e {
                    prod = prod.mul(field, &linear[k]);
                }
            }
            out = out.add(field, &prod);
        }
        out
    }

    /// Partial derivative with respect to x_{i+1}.
    pub fn derivative(&self, field: &FieldDesc, i: usize) -> Form {
        let mut out = Form::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, &c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut d = *m;
            d[i] -= 1;
            out.add_term(field, d, field.mul(c, field.from_int(m[i] as i64)));
        }
        out
    }
}

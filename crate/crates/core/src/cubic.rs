//! Cubic threefolds in P^4, rational lines on them, and the conic-bundle data
//! attached to a line.
//!
//! After a linear change of coordinates moving the line `L` to `{x1 = x2 = x3 = 0}`
//! the cubic reads
//!
//! ```text
//! l1 x4^2 + 2 l2 x4 x5 + l3 x5^2 + 2 q1 x4 + 2 q2 x5 + f
//! ```
//!
//! with `l_i` linear, `q_i` quadratic and `f` cubic in `x1, x2, x3`. The symmetric
//! matrix `M = [[l1, l2, q1], [l2, l3, q2], [q1, q2, f]]` describes the residual conic
//! in each plane through `L`; its determinant cuts out the discriminant quintic and
//! its diagonal minors `delta_i` decide whether a degenerate conic splits over the
//! ground field.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::GeometryError;
use crate::field::{Embedding, FieldDesc, FqElem};
use crate::form::{monomial_degree, monomials, Form, Monomial};
use crate::projective::{p2_point, p2_size, pn_points};

/// A cubic form in x1..x5.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicForm {
    form: Form,
}

impl CubicForm {
    pub fn new(form: Form) -> Result<Self, GeometryError> {
        if form.nvars() != 5 || form.degree() != 3 {
            return Err(GeometryError::BadMonomial([0; 5]));
        }
        if form.is_zero() {
            return Err(GeometryError::ZeroCubic);
        }
        Ok(CubicForm { form })
    }

    /// Builds a cubic from integer coefficients (reduced into the prime field).
    pub fn from_int_terms(field: &FieldDesc, terms: &[(Monomial, i64)]) -> Result<Self, GeometryError> {
        let mut form = Form::zero(5, 3);
        for &(m, c) in terms {
            if monomial_degree(&m) != 3 {
                return Err(GeometryError::BadMonomial(m));
            }
            form.add_term(field, m, field.from_int(c));
        }
        CubicForm::new(form)
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn eval(&self, field: &FieldDesc, x: &[FqElem]) -> FqElem {
        self.form.eval(field, x)
    }

    /// Image of the coefficients under a field embedding.
    pub fn embed(&self, emb: &Embedding, target: &FieldDesc) -> CubicForm {
        CubicForm { form: self.form.map_coeffs(|c| emb.apply(target, c)) }
    }

    pub fn scale(&self, field: &FieldDesc, c: FqElem) -> CubicForm {
        CubicForm { form: self.form.scale(field, c) }
    }

    /// Substitutes x_i = sum_j rows[i][j] y_j.
    pub fn transform(&self, field: &FieldDesc, rows: &[Vec<FqElem>]) -> CubicForm {
        CubicForm { form: self.form.substitute_linear(field, rows) }
    }

    pub fn gradient(&self, field: &FieldDesc) -> [Form; 5] {
        core::array::from_fn(|i| self.form.derivative(field, i))
    }
}

/// A line in P^4 given by a 2x5 matrix in reduced row echelon form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    rows: [[FqElem; 5]; 2],
}

impl Line {
    /// Line through two points; the RREF makes the representative unique.
    pub fn through(field: &FieldDesc, a: [FqElem; 5], b: [FqElem; 5]) -> Result<Self, GeometryError> {
        let mut m = [a, b];
        let mut row = 0;
        for col in 0..5 {
            if row == 2 {
                break;
            }
            let Some(piv) = (row..2).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, piv);
            let inv = field.inv(m[row][col]).unwrap();
            for c in 0..5 {
                m[row][c] = field.mul(m[row][c], inv);
            }
            for r in 0..2 {
                if r != row && !m[r][col].is_zero() {
                    let k = m[r][col];
                    for c in 0..5 {
                        m[r][c] = field.sub(m[r][c], field.mul(k, m[row][c]));
                    }
                }
            }
            row += 1;
        }
        if row < 2 {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(Line { rows: m })
    }

    /// The line {x1 = x2 = x3 = 0}.
    pub fn standard() -> Self {
        let mut rows = [[FqElem::ZERO; 5]; 2];
        rows[0][3] = FqElem::ONE;
        rows[1][4] = FqElem::ONE;
        Line { rows }
    }

    pub fn rows(&self) -> &[[FqElem; 5]; 2] {
        &self.rows
    }

    /// True iff the two lines share a point of P^4.
    pub fn meets(&self, field: &FieldDesc, other: &Line) -> bool {
        let m: Vec<[FqElem; 5]> = self.rows.iter().chain(other.rows.iter()).copied().collect();
        rank(field, m) < 4
    }

    pub fn embed(&self, emb: &Embedding, target: &FieldDesc) -> Line {
        Line { rows: self.rows.map(|r| r.map(|c| emb.apply(target, c))) }
    }
}

fn rank(field: &FieldDesc, mut m: Vec<[FqElem; 5]>) -> usize {
    let mut row = 0;
    for col in 0..5 {
        let Some(piv) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = field.inv(m[row][col]).unwrap();
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let k = field.mul(m[r][col], inv);
                for c in 0..5 {
                    m[r][c] = field.sub(m[r][c], field.mul(k, m[row][c]));
                }
            }
        }
        row += 1;
        if row == m.len() {
            break;
        }
    }
    row
}

/// Restriction of the cubic to the line, as a binary cubic in (s, t) for the point s a + t b.
pub fn restrict_to_line(field: &FieldDesc, cubic: &CubicForm, line: &Line) -> Form {
    let rows: Vec<Vec<FqElem>> = (0..5).map(|k| vec![line.rows[0][k], line.rows[1][k]]).collect();
    cubic.form.substitute_linear(field, &rows)
}

/// True iff the cubic vanishes identically on the line.
pub fn contains_line(field: &FieldDesc, cubic: &CubicForm, line: &Line) -> bool {
    restrict_to_line(field, cubic, line).is_zero()
}

/// Number of points of the Grassmannian G(2,5) over a field with q elements.
pub fn grassmannian_size(q: u64) -> u64 {
    let q = q as u128;
    let n = (q.pow(5) - 1) * (q.pow(4) - 1) / ((q * q - 1) * (q - 1));
    n.min(u64::MAX as u128) as u64
}

/// All lines of P^4 over `field`, pivot pairs in lexicographic order and free
/// entries in increasing code order.
pub fn all_lines(field: &FieldDesc) -> impl Iterator<Item = Line> + '_ {
    let q = field.order();
    let pivots: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    pivots.into_iter().flat_map(move |(i, j)| {
        let free_a: Vec<usize> = (i + 1..5).filter(|&k| k != j).collect();
        let free_b: Vec<usize> = (j + 1..5).collect();
        let nfree = (free_a.len() + free_b.len()) as u32;
        (0..q.pow(nfree)).map(move |mut code| {
            let mut rows = [[FqElem::ZERO; 5]; 2];
            rows[0][i] = FqElem::ONE;
            rows[1][j] = FqElem::ONE;
            // last free entry varies fastest
            for &k in free_b.iter().rev() {
                rows[1][k] = FqElem(code % q);
                code /= q;
            }
            for &k in free_a.iter().rev() {
                rows[0][k] = FqElem(code % q);
                code /= q;
            }
            Line { rows }
        })
    })
}

/// First rational line on the cubic in the enumeration order of [`all_lines`].
pub fn find_rational_line(field: &FieldDesc, cubic: &CubicForm, budget: u64) -> Result<Option<Line>, GeometryError> {
    let needed = grassmannian_size(field.order());
    if needed > budget {
        return Err(GeometryError::Budget { needed, budget });
    }
    Ok(all_lines(field).find(|l| contains_line(field, cubic, l)))
}

/// Conic-bundle data of a cubic relative to a line on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFrame {
    /// Columns 4 and 5 span the line; `x = change * y`.
    pub change: [[FqElem; 5]; 5],
    /// The cubic in the new coordinates.
    pub transformed: CubicForm,
    pub l: [Form; 3],
    pub q: [Form; 2],
    pub f: Form,
    /// det M, degree 5.
    pub det: Form,
    /// (i,i)-minors of M: delta1 = l3 f - q2^2, delta2 = l1 f - q1^2, delta3 = l1 l3 - l2^2.
    pub delta: [Form; 3],
}

/// Completion of the line's two points to a basis by standard vectors in index order.
pub fn default_completion(field: &FieldDesc, line: &Line) -> [[FqElem; 5]; 3] {
    let mut chosen: Vec<[FqElem; 5]> = line.rows.to_vec();
    let mut extra = Vec::new();
    for k in 0..5 {
        let mut e = [FqElem::ZERO; 5];
        e[k] = FqElem::ONE;
        let mut trial = chosen.clone();
        trial.push(e);
        if rank(field, trial.clone()) == trial.len() {
            chosen = trial;
            extra.push(e);
        }
        if extra.len() == 3 {
            break;
        }
    }
    [extra[0], extra[1], extra[2]]
}

pub fn normalize(field: &FieldDesc, cubic: &CubicForm, line: &Line) -> Result<LineFrame, GeometryError> {
    normalize_with_completion(field, cubic, line, default_completion(field, line))
}

/// As [`normalize`], with an explicit choice of the three complementary vectors.
pub fn normalize_with_completion(
    field: &FieldDesc,
    cubic: &CubicForm,
    line: &Line,
    completion: [[FqElem; 5]; 3],
) -> Result<LineFrame, GeometryError> {
    if !contains_line(field, cubic, line) {
        return Err(GeometryError::LineNotOnCubic);
    }
    let cols = [completion[0], completion[1], completion[2], line.rows[0], line.rows[1]];
    if rank(field, cols.to_vec()) != 5 {
        return Err(GeometryError::DegenerateLine);
    }
    let mut change = [[FqElem::ZERO; 5]; 5];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..5 {
            change[i][j] = col[i];
        }
    }
    let rows: Vec<Vec<FqElem>> = change.iter().map(|r| r.to_vec()).collect();
    let transformed = cubic.transform(field, &rows);

    let half = field.inv(field.from_int(2)).expect("odd characteristic");
    let mut l = [Form::zero(3, 1), Form::zero(3, 1), Form::zero(3, 1)];
    let mut q = [Form::zero(3, 2), Form::zero(3, 2)];
    let mut f = Form::zero(3, 3);
    for (m, &c) in transformed.form.terms() {
        let rest: Monomial = [m[0], m[1], m[2], 0, 0];
        match (m[3], m[4]) {
            (2, 0) => l[0].add_term(field, rest, c),
            (1, 1) => l[1].add_term(field, rest, field.mul(c, half)),
            (0, 2) => l[2].add_term(field, rest, c),
            (1, 0) => q[0].add_term(field, rest, field.mul(c, half)),
            (0, 1) => q[1].add_term(field, rest, field.mul(c, half)),
            (0, 0) => f.add_term(field, rest, c),
            _ => return Err(GeometryError::LineNotOnCubic),
        }
    }
    Ok(LineFrame::from_parts(field, change, transformed, l, q, f))
}

impl LineFrame {
    /// Assembles the frame from its conic-bundle forms; `transformed` must equal
    /// [`LineFrame::reassemble`] of the result.
    pub fn from_parts(
        field: &FieldDesc,
        change: [[FqElem; 5]; 5],
        transformed: CubicForm,
        l: [Form; 3],
        q: [Form; 2],
        f: Form,
    ) -> LineFrame {
        let [l1, l2, l3] = &l;
        let [q1, q2] = &q;
        let delta1 = l3.mul(field, &f).sub(field, &q2.mul(field, q2));
        let delta2 = l1.mul(field, &f).sub(field, &q1.mul(field, q1));
        let delta3 = l1.mul(field, l3).sub(field, &l2.mul(field, l2));
        // cofactor expansion along the first row
        let c12 = l2.mul(field, &f).sub(field, &q2.mul(field, q1));
        let c13 = l2.mul(field, q2).sub(field, &l3.mul(field, q1));
        let det = l1.mul(field, &delta1).sub(field, &l2.mul(field, &c12)).add(field, &q1.mul(field, &c13));
        LineFrame { change, transformed, l, q, f, det, delta: [delta1, delta2, delta3] }
    }

    /// Frame with the identity change of coordinates, built from the forms alone.
    pub fn from_forms(field: &FieldDesc, l: [Form; 3], q: [Form; 2], f: Form) -> LineFrame {
        let mut change = [[FqElem::ZERO; 5]; 5];
        for (i, row) in change.iter_mut().enumerate() {
            row[i] = FqElem::ONE;
        }
        let mut frame = LineFrame::from_parts(field, change, CubicForm { form: Form::zero(5, 3) }, l, q, f);
        frame.transformed = frame.reassemble(field);
        frame
    }

    /// l1 x4^2 + 2 l2 x4 x5 + l3 x5^2 + 2 q1 x4 + 2 q2 x5 + f as a form in five variables.
    pub fn reassemble(&self, field: &FieldDesc) -> CubicForm {
        let lift = |g: &Form| -> Form {
            let mut out = Form::zero(5, g.degree());
            for (&m, &c) in g.terms() {
                out.add_term(field, m, c);
            }
            out
        };
        let x4 = Form::var(5, 3);
        let x5 = Form::var(5, 4);
        let two = field.from_int(2);
        let [l1, l2, l3] = &self.l;
        let [q1, q2] = &self.q;
        let total = lift(l1)
            .mul(field, &x4.mul(field, &x4))
            .add(field, &lift(l2).mul(field, &x4.mul(field, &x5)).scale(field, two))
            .add(field, &lift(l3).mul(field, &x5.mul(field, &x5)))
            .add(field, &lift(q1).mul(field, &x4).scale(field, two))
            .add(field, &lift(q2).mul(field, &x5).scale(field, two))
            .add(field, &lift(&self.f));
        CubicForm { form: total }
    }

    /// Entries of M at a point of P^2, row-major.
    pub fn matrix_at(&self, field: &FieldDesc, x: &[FqElem; 3]) -> [[FqElem; 3]; 3] {
        let l: [FqElem; 3] = core::array::from_fn(|i| self.l[i].eval(field, x));
        let q: [FqElem; 2] = core::array::from_fn(|i| self.q[i].eval(field, x));
        let f = self.f.eval(field, x);
        [[l[0], l[1], q[0]], [l[1], l[2], q[1]], [q[0], q[1], f]]
    }

    /// Coefficients embedded into an extension field.
    pub fn embed(&self, emb: &Embedding, target: &FieldDesc) -> LineFrame {
        let e = |g: &Form| g.map_coeffs(|c| emb.apply(target, c));
        LineFrame {
            change: self.change.map(|r| r.map(|c| emb.apply(target, c))),
            transformed: self.transformed.embed(emb, target),
            l: [e(&self.l[0]), e(&self.l[1]), e(&self.l[2])],
            q: [e(&self.q[0]), e(&self.q[1])],
            f: e(&self.f),
            det: e(&self.det),
            delta: [e(&self.delta[0]), e(&self.delta[1]), e(&self.delta[2])],
        }
    }
}

/// 3x3 determinant by the rule of Sarrus.
pub fn det3(field: &FieldDesc, m: &[[FqElem; 3]; 3]) -> FqElem {
    let t = |a: FqElem, b: FqElem, c: FqElem| field.mul(field.mul(a, b), c);
    let pos =
        field.add(field.add(t(m[0][0], m[1][1], m[2][2]), t(m[0][1], m[1][2], m[2][0])), t(m[0][2], m[1][0], m[2][1]));
    let neg =
        field.add(field.add(t(m[0][2], m[1][1], m[2][0]), t(m[0][0], m[1][2], m[2][1])), t(m[0][1], m[1][0], m[2][2]));
    field.sub(pos, neg)
}

/// Outcome of the singular point search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothnessCheck {
    NoSingularPointFound,
    /// A point over F_{q^degree} where all partial derivatives (and the cubic) vanish.
    SingularPoint {
        degree: u32,
        point: [FqElem; 5],
    },
}

/// Searches P^4(F_{q^r}) for r = 1..=rmax for a common zero of the cubic and its
/// gradient. Finding none does not prove smoothness.
pub fn smoothness_heuristic(base: &FieldDesc, cubic: &CubicForm, rmax: u32) -> Result<SmoothnessCheck, GeometryError> {
    for r in 1..=rmax {
        let ext = FieldDesc::new(base.characteristic(), base.degree() * r)?;
        let emb = base.embedding_into(&ext)?;
        let c = cubic.embed(&emb, &ext);
        // the cubic itself first: most points are rejected there
        let mut forms: Vec<Form> = vec![c.form.clone()];
        forms.extend(c.gradient(&ext));
        for x in pn_points(ext.order(), 5) {
            if forms.iter().all(|g| g.eval(&ext, &x).is_zero()) {
                return Ok(SmoothnessCheck::SingularPoint { degree: r, point: [x[0], x[1], x[2], x[3], x[4]] });
            }
        }
    }
    Ok(SmoothnessCheck::NoSingularPointFound)
}

/// Points of P^2(F_{q^r}) where det M and all three diagonal minors vanish.
pub fn quintic_singular_points(base: &FieldDesc, frame: &LineFrame, r: u32) -> Result<Vec<[FqElem; 3]>, GeometryError> {
    let ext = FieldDesc::new(base.characteristic(), base.degree() * r)?;
    let emb = base.embedding_into(&ext)?;
    let fr = frame.embed(&emb, &ext);
    let q = ext.order();
    let mut out = Vec::new();
    for i in 0..p2_size(q) {
        let x = p2_point(q, i);
        if fr.det.eval(&ext, &x).is_zero() && fr.delta.iter().all(|d| d.eval(&ext, &x).is_zero()) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Every monomial of degree 3 in five variables, in the fixed order of [`monomials`].
pub fn cubic_monomials() -> Vec<Monomial> {
    monomials(5, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn standard_line_on_cubic_without_pure_x4_x5_terms() {
        let f = FieldDesc::new(7, 1).unwrap();
        let c = CubicForm::from_int_terms(&f, &[([1, 0, 0, 2, 0], 1), ([0, 1, 1, 0, 1], 3)]).unwrap();
        assert!(contains_line(&f, &c, &Line::standard()));
        let c2 = CubicForm::from_int_terms(&f, &[([1, 0, 0, 2, 0], 1), ([0, 0, 0, 3, 0], 1)]).unwrap();
        assert!(!contains_line(&f, &c2, &Line::standard()));
    }

    #[test]
    fn example_cubic_frame_matches_display() {
        let f = FieldDesc::new(7, 1).unwrap();
        let c = presets::example_cubic(&f);
        let fr = normalize(&f, &c, &Line::standard()).unwrap();
        let x = |i| Form::var(3, i);
        assert_eq!(fr.l[0], x(0));
        assert_eq!(fr.l[1], x(1));
        assert_eq!(fr.l[2], x(2));
        let q1 = Form::from_terms(
            &f,
            3,
            2,
            [
                ([2, 0, 0, 0, 0], FqElem(1)),
                ([0, 2, 0, 0, 0], FqElem(2)),
                ([0, 1, 1, 0, 0], FqElem(1)),
                ([0, 0, 2, 0, 0], FqElem(1)),
            ],
        );
        assert_eq!(fr.q[0], q1);
        assert_eq!(fr.reassemble(&f), fr.transformed);
        assert_eq!(fr.transformed, c);
    }

    #[test]
    fn rref_is_canonical() {
        let f = FieldDesc::new(5, 1).unwrap();
        let e = |v: [u64; 5]| v.map(FqElem);
        let a = Line::through(&f, e([1, 2, 0, 0, 3]), e([0, 0, 1, 4, 0])).unwrap();
        let b = Line::through(&f, e([1, 2, 1, 4, 3]), e([2, 4, 3, 2, 1])).unwrap();
        assert_eq!(a, b);
        assert!(Line::through(&f, e([1, 2, 0, 0, 3]), e([2, 4, 0, 0, 1])).is_err());
    }

    #[test]
    fn grassmannian_over_f3() {
        let f = FieldDesc::new(3, 1).unwrap();
        assert_eq!(grassmannian_size(3), 1210);
        assert_eq!(all_lines(&f).count(), 1210);
        let mut v: Vec<Line> = all_lines(&f).collect();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), 1210);
    }

    #[test]
    fn normalize_rejects_line_off_cubic() {
        let f = FieldDesc::new(5, 1).unwrap();
        let c = CubicForm::from_int_terms(&f, &[([0, 0, 0, 3, 0], 1)]).unwrap();
        assert_eq!(normalize(&f, &c, &Line::standard()), Err(GeometryError::LineNotOnCubic));
    }

    #[test]
    fn bad_monomial_is_named() {
        let f = FieldDesc::new(5, 1).unwrap();
        assert_eq!(
            CubicForm::from_int_terms(&f, &[([1, 1, 0, 0, 0], 1)]),
            Err(GeometryError::BadMonomial([1, 1, 0, 0, 0]))
        );
    }
}

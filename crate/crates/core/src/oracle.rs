//! Brute-force counts used to cross-check the conic-bundle pipeline at small q.
//!
//! Nothing here uses the normal form: points are tested on the original cubic,
//! lines are tested by evaluation at four points, and the discriminant curve is
//! recomputed plane by plane from the restriction of the cubic.

use alloc::vec;
use alloc::vec::Vec;

use crate::cubic::all_lines;
use crate::cubic::grassmannian_size;
use crate::cubic::{default_completion, det3, CubicForm, Line};
use crate::error::GeometryError;
use crate::field::{FieldDesc, FqElem};
use crate::projective::{enumerate_p2, pn_points, pn_size};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// `N_r(F)`: points of the cubic in P^4 over the degree r extension of `field`.
pub fn count_hypersurface_p4(field: &FieldDesc, cubic: &CubicForm, r: u32, budget: u64) -> Result<u64, GeometryError> {
    let ext = FieldDesc::new(field.characteristic(), field.degree() * r)?;
    let needed = pn_size(ext.order(), 5);
    if needed > budget {
        return Err(GeometryError::Budget { needed, budget });
    }
    let emb = field.embedding_into(&ext)?;
    let f = cubic.embed(&emb, &ext);
    Ok(pn_points(ext.order(), 5).filter(|x| f.eval(&ext, x).is_zero()).count() as u64)
}

/// `N_r(F)` for a cubic containing `{x1 = x2 = x3 = 0}`: over each point of P^2 the
/// affine fibre in (x4, x5) is cut out by a polynomial of degree at most 2, whose
/// coefficients are recovered from six evaluations and whose zeros are counted by
/// enumeration. Costs `|P^2| * Q^2` evaluations.
pub fn count_by_fibres(field: &FieldDesc, cubic: &CubicForm, r: u32, budget: u64) -> Result<u64, GeometryError> {
    if !line_on_cubic(field, cubic, &Line::standard()) {
        return Err(GeometryError::LineNotOnCubic);
    }
    let ext = FieldDesc::new(field.characteristic(), field.degree() * r)?;
    let q = ext.order();
    let needed = crate::projective::p2_size(q).saturating_mul(q * q);
    if needed > budget {
        return Err(GeometryError::Budget { needed, budget });
    }
    let f = cubic.embed(&field.embedding_into(&ext)?, &ext);
    let elems: Vec<FqElem> = ext.elements().collect();
    let (z, o) = (FqElem::ZERO, FqElem::ONE);
    let m = ext.neg(o);
    let half = ext.inv(ext.from_int(2)).expect("odd characteristic");
    // the line itself
    let mut n = q + 1;
    for x in enumerate_p2(q) {
        let ev = |s: FqElem, t: FqElem| f.eval(&ext, &[x[0], x[1], x[2], s, t]);
        let g = ev(z, z);
        let (p10, m10, p01, m01, p11) = (ev(o, z), ev(m, z), ev(z, o), ev(z, m), ev(o, o));
        let a = ext.mul(ext.sub(ext.add(p10, m10), ext.add(g, g)), half);
        let d = ext.mul(ext.sub(p10, m10), half);
        let c = ext.mul(ext.sub(ext.add(p01, m01), ext.add(g, g)), half);
        let e = ext.mul(ext.sub(p01, m01), half);
        let b = [a, c, d, e, g].iter().fold(p11, |acc, &v| ext.sub(acc, v));
        for &s in &elems {
            let lin = ext.add(ext.mul(b, s), e);
            let cst = ext.add(ext.mul(ext.add(ext.mul(a, s), d), s), g);
            for &t in &elems {
                if ext.add(ext.mul(ext.add(ext.mul(c, t), lin), t), cst).is_zero() {
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn combine(field: &FieldDesc, s: FqElem, a: &[FqElem; 5], t: FqElem, b: &[FqElem; 5]) -> [FqElem; 5] {
    core::array::from_fn(|k| field.add(field.mul(s, a[k]), field.mul(t, b[k])))
}

/// A binary cubic vanishing at four distinct points of P^1 is zero, so testing
/// `a`, `b`, `a + b`, `a - b` decides containment (odd characteristic).
pub fn line_on_cubic(field: &FieldDesc, cubic: &CubicForm, line: &Line) -> bool {
    let [a, b] = line.rows();
    let one = FqElem::ONE;
    let m1 = field.neg(one);
    [(one, FqElem::ZERO), (FqElem::ZERO, one), (one, one), (one, m1)]
        .iter()
        .all(|&(s, t)| cubic.eval(field, &combine(field, s, a, t, b)).is_zero())
}

/// All rational lines on the cubic, in the order of [`all_lines`].
pub fn lines_on_cubic(field: &FieldDesc, cubic: &CubicForm, budget: u64) -> Result<Vec<Line>, GeometryError> {
    let needed = grassmannian_size(field.order());
    if needed > budget {
        return Err(GeometryError::Budget { needed, budget });
    }
    Ok(all_lines(field).filter(|l| line_on_cubic(field, cubic, l)).collect())
}

/// Plane-by-plane data for the planes through a line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Incidence {
    /// planes whose residual conic is singular: `N_1(Gamma_L)`
    pub gamma_points: u64,
    /// rational lines other than L on the cubic meeting L
    pub lines_meeting: u64,
    /// planes whose residual conic contains L itself
    pub residual_contains_line: u64,
    /// planes whose residual conic is a double line
    pub double_lines: u64,
    /// planes through L contained in the cubic (the cubic is then singular)
    pub planes_in_cubic: u64,
    /// `lines_meeting + residual_contains_line`: rational points of the incidence curve
    pub c_points: u64,
}

impl Incidence {
    pub fn difference(&self) -> i64 {
        self.c_points as i64 - self.gamma_points as i64
    }
}

/// Residual conic of the plane spanned by `line` and `v`, as a symmetric matrix
/// in the coordinates (s, t, u) of `s a + t b + u v`.
fn residual_conic(
    field: &FieldDesc,
    cubic: &CubicForm,
    line: &Line,
    v: &[FqElem; 5],
) -> Result<[[FqElem; 3]; 3], GeometryError> {
    let [a, b] = line.rows();
    let rows: Vec<Vec<FqElem>> = (0..5).map(|k| vec![a[k], b[k], v[k]]).collect();
    let plane = cubic.form().substitute_linear(field, &rows);
    let half = field.inv(field.from_int(2)).expect("odd characteristic");
    let mut m = [[FqElem::ZERO; 3]; 3];
    for (mono, &c) in plane.terms() {
        if c.is_zero() {
            continue;
        }
        if mono[2] == 0 {
            return Err(GeometryError::LineNotOnCubic);
        }
        let mut e = *mono;
        e[2] -= 1;
        let vars: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            m[i][i] = field.add(m[i][i], c);
        } else {
            let h = field.mul(c, half);
            m[i][j] = field.add(m[i][j], h);
            m[j][i] = field.add(m[j][i], h);
        }
    }
    Ok(m)
}

fn rank3(field: &FieldDesc, m: &[[FqElem; 3]; 3]) -> usize {
    if !det3(field, m).is_zero() {
        return 3;
    }
    let minors_vanish = (0..3).all(|r1| {
        (r1 + 1..3).all(|r2| {
            (0..3).all(|c1| {
                (c1 + 1..3).all(|c2| {
                    let x = field.sub(field.mul(m[r1][c1], m[r2][c2]), field.mul(m[r1][c2], m[r2][c1]));
                    x.is_zero()
                })
            })
        })
    });
    if !minors_vanish {
        2
    } else if m.iter().flatten().any(|c| !c.is_zero()) {
        1
    } else {
        0
    }
}

/// Counts on the discriminant curve and the incidence curve of `line` over `field`.
pub fn incidence_counts(
    field: &FieldDesc,
    cubic: &CubicForm,
    line: &Line,
    budget: u64,
) -> Result<Incidence, GeometryError> {
    if !line_on_cubic(field, cubic, line) {
        return Err(GeometryError::LineNotOnCubic);
    }
    let lines = lines_on_cubic(field, cubic, budget)?;
    let lines_meeting = lines.iter().filter(|l| *l != line && l.meets(field, line)).count() as u64;
    let comp = default_completion(field, line);
    let mut out = Incidence { lines_meeting, ..Default::default() };
    for x in enumerate_p2(field.order()) {
        let v: [FqElem; 5] =
            core::array::from_fn(|k| (0..3).fold(FqElem::ZERO, |acc, i| field.add(acc, field.mul(x[i], comp[i][k]))));
        let m = residual_conic(field, cubic, line, &v)?;
        let rank = rank3(field, &m);
        if rank == 3 {
            continue;
        }
        out.gamma_points += 1;
        match rank {
            1 => out.double_lines += 1,
            0 => out.planes_in_cubic += 1,
            _ => {}
        }
        // the conic restricted to u = 0 is the restriction to L
        if m[0][0].is_zero() && m[0][1].is_zero() && m[1][1].is_zero() {
            out.residual_contains_line += 1;
        }
    }
    out.c_points = out.lines_meeting + out.residual_contains_line;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::contains_line;
    use crate::presets::{example_cubic, klein_cubic};
    use crate::{count_difference, normalize};

    #[test]
    fn four_point_test_matches_substitution() {
        let f = FieldDesc::new(3, 1).unwrap();
        let cubic = example_cubic(&f);
        for l in all_lines(&f) {
            assert_eq!(line_on_cubic(&f, &cubic, &l), contains_line(&f, &cubic, &l));
        }
    }

    #[test]
    fn fibres_match_p4_count() {
        for p in [3u64, 5, 7] {
            let f = FieldDesc::new(p, 1).unwrap();
            let cubic = example_cubic(&f);
            let a = count_hypersurface_p4(&f, &cubic, 1, DEFAULT_BUDGET).unwrap();
            assert_eq!(count_by_fibres(&f, &cubic, 1, DEFAULT_BUDGET).unwrap(), a);
        }
        let f = FieldDesc::new(3, 1).unwrap();
        let cubic = example_cubic(&f);
        let a = count_hypersurface_p4(&f, &cubic, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(count_by_fibres(&f, &cubic, 2, DEFAULT_BUDGET).unwrap(), a);
    }

    #[test]
    fn bound_on_points() {
        let f = FieldDesc::new(3, 1).unwrap();
        let n = count_hypersurface_p4(&f, &klein_cubic(&f), 1, DEFAULT_BUDGET).unwrap();
        assert!(n <= pn_size(3, 5));
        assert!(matches!(count_hypersurface_p4(&f, &klein_cubic(&f), 3, 1000), Err(GeometryError::Budget { .. })));
    }

    #[test]
    fn difference_matches_pipeline_small() {
        for p in [3u64, 5] {
            let f = FieldDesc::new(p, 1).unwrap();
            let cubic = example_cubic(&f);
            let line = Line::standard();
            let inc = incidence_counts(&f, &cubic, &line, DEFAULT_BUDGET).unwrap();
            let frame = normalize(&f, &cubic, &line).unwrap();
            let row = count_difference(&f, &frame, 1).unwrap();
            assert_eq!(inc.gamma_points, row.gamma_points, "p = {p}");
            assert_eq!(inc.difference(), row.d, "p = {p}");
            assert!(inc.gamma_points <= 1 + p + p * p);
        }
    }
}

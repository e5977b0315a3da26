//! Point counting on the discriminant quintic.
//!
//! For every point x of P^2(F_{q^r}) on the quintic `det M = 0` the residual conic
//! degenerates; it splits into two rational lines when `-delta_3(x)` is a nonzero
//! square, into two conjugate lines when it is a non-square, and when `delta_3(x) = 0`
//! the test falls through to `delta_1` and then `delta_2`. If all three minors vanish
//! the conic is a double line. The signed tally `D_r = split - nonsplit` equals
//! `N_r(C_L) - N_r(Gamma_L)`.
//!
//! The enumeration runs row by row: along a row `(1 : y : *)` each form becomes a
//! univariate polynomial in `z` whose coefficients are computed once per row, so the
//! per-point work is a Horner evaluation of the degree-5 determinant. With tables the
//! whole inner loop stays in the discrete-log domain.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Range};

use crate::cubic::LineFrame;
use crate::error::CountError;
use crate::field::{FieldDesc, FqElem, LogTables, Squareness};
use crate::form::Form;
use crate::projective::{chunks, p2_size};

/// Default number of points per work unit.
pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// Per-range counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tally {
    /// Quintic points whose conic splits into two rational lines.
    pub split: u64,
    /// Quintic points whose conic splits over the quadratic extension only.
    pub nonsplit: u64,
    /// Quintic points where all three minors vanish.
    pub singular: u64,
    /// Points with delta3 = 0 and delta1, delta2 both nonzero (coherence checked there).
    pub coherence_checks: u64,
}

impl Tally {
    pub fn difference(&self) -> i64 {
        self.split as i64 - self.nonsplit as i64
    }

    pub fn quintic_points(&self) -> u64 {
        self.split + self.nonsplit + self.singular
    }
}

impl Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            split: self.split + o.split,
            nonsplit: self.nonsplit + o.nonsplit,
            singular: self.singular + o.singular,
            coherence_checks: self.coherence_checks + o.coherence_checks,
        }
    }
}

impl AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        *self = *self + o;
    }
}

/// One extension degree worth of counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub r: u32,
    /// D_r = N_r(C_L) - N_r(Gamma_L).
    pub d: i64,
    /// N_r(Gamma_L).
    pub gamma_points: u64,
    pub split: u64,
    pub nonsplit: u64,
    pub singular: u64,
    pub coherence_checks: u64,
    /// Wall-clock time, filled in by drivers that have a clock.
    pub millis: Option<u64>,
}

impl CountRow {
    pub fn from_tally(r: u32, t: Tally) -> Self {
        CountRow {
            r,
            d: t.difference(),
            gamma_points: t.quintic_points(),
            split: t.split,
            nonsplit: t.nonsplit,
            singular: t.singular,
            coherence_checks: t.coherence_checks,
            millis: None,
        }
    }
}

/// Counts for r = 1, 2, ... over a base field with `q` elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountReport {
    pub q: u64,
    pub rows: Vec<CountRow>,
}

impl CountReport {
    pub fn differences(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.d).collect()
    }

    pub fn row(&self, r: u32) -> Option<&CountRow> {
        self.rows.iter().find(|row| row.r == r)
    }
}

/// Arithmetic used by the inner loop; implemented for codes and discrete logs.
trait RowArith {
    type E: Copy + Eq;
    fn lift(&self, x: FqElem) -> Self::E;
    fn is_zero(&self, a: Self::E) -> bool;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
    fn neg(&self, a: Self::E) -> Self::E;
    fn squareness(&self, a: Self::E) -> Squareness;
    fn zero(&self) -> Self::E;
}

impl RowArith for LogTables {
    type E = u32;
    #[inline]
    fn lift(&self, x: FqElem) -> u32 {
        self.log(x)
    }
    #[inline]
    fn is_zero(&self, a: u32) -> bool {
        a == LogTables::ZERO
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        LogTables::add(self, a, b)
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        LogTables::mul(self, a, b)
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        LogTables::neg(self, a)
    }
    #[inline]
    fn squareness(&self, a: u32) -> Squareness {
        LogTables::squareness(self, a)
    }
    #[inline]
    fn zero(&self) -> u32 {
        LogTables::ZERO
    }
}

impl RowArith for FieldDesc {
    type E = FqElem;
    fn lift(&self, x: FqElem) -> FqElem {
        x
    }
    fn is_zero(&self, a: FqElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FieldDesc::add(self, a, b)
    }
    fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FieldDesc::mul(self, a, b)
    }
    fn neg(&self, a: FqElem) -> FqElem {
        FieldDesc::neg(self, a)
    }
    fn squareness(&self, a: FqElem) -> Squareness {
        self.is_square(a)
    }
    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
}

/// Trivariate form of degree d stored as c[b][k] = coefficient of x1^(d-b-k) x2^b x3^k.
#[derive(Clone, Debug)]
struct Grid {
    degree: usize,
    c: Vec<Vec<FqElem>>,
}

impl Grid {
    fn new(form: &Form) -> Self {
        let d = form.degree() as usize;
        let mut c = vec![vec![FqElem::ZERO; d + 1]; d + 1];
        for (m, &v) in form.terms() {
            c[m[1] as usize][m[2] as usize] = v;
        }
        Grid { degree: d, c }
    }

    fn lifted<A: RowArith>(&self, a: &A) -> Vec<Vec<A::E>> {
        self.c.iter().map(|row| row.iter().map(|&x| a.lift(x)).collect()).collect()
    }
}

/// Univariate coefficients u_k (k = 0..=d) in z of the form restricted to a row.
/// `ypow = None` is the row (0 : 1 : z).
#[inline]
fn row_coeffs<A: RowArith>(a: &A, c: &[Vec<A::E>], d: usize, ypow: Option<&[A::E]>, out: &mut [A::E]) {
    for k in 0..=d {
        out[k] = match ypow {
            Some(yp) => {
                let mut acc = a.zero();
                for b in 0..=d - k {
                    acc = a.add(acc, a.mul(c[b][k], yp[b]));
                }
                acc
            }
            None => c[d - k][k],
        };
    }
}

#[inline]
fn horner<A: RowArith>(a: &A, u: &[A::E], d: usize, z: A::E) -> A::E {
    let mut acc = u[d];
    for k in (0..d).rev() {
        acc = a.add(a.mul(acc, z), u[k]);
    }
    acc
}

/// Forms of a [`LineFrame`] with coefficients in F_{q^r}, ready for enumeration.
#[derive(Clone, Debug)]
pub struct CountKernel {
    field: FieldDesc,
    det: Grid,
    delta: [Grid; 3],
}

impl CountKernel {
    /// `frame` must already have coefficients in `ext` (see [`LineFrame::embed`]).
    pub fn new(frame: &LineFrame, ext: FieldDesc) -> Self {
        CountKernel {
            det: Grid::new(&frame.det),
            delta: [Grid::new(&frame.delta[0]), Grid::new(&frame.delta[1]), Grid::new(&frame.delta[2])],
            field: ext,
        }
    }

    /// Embeds the frame from `base` into F_{base^r} and prepares the kernel.
    pub fn for_degree(base: &FieldDesc, frame: &LineFrame, r: u32) -> Result<Self, CountError> {
        let ext = FieldDesc::new(base.characteristic(), base.degree() * r)?;
        let emb = base.embedding_into(&ext)?;
        Ok(CountKernel::new(&frame.embed(&emb, &ext), ext))
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn total_points(&self) -> u64 {
        p2_size(self.field.order())
    }

    /// Counts the points with canonical index in `range` (see [`crate::projective::p2_point`]).
    pub fn count_range(&self, range: Range<u64>) -> Result<Tally, CountError> {
        match self.field.tables() {
            Some(t) => self.count_with(t, range),
            None => self.count_with(&self.field, range),
        }
    }

    fn count_with<A: RowArith>(&self, a: &A, range: Range<u64>) -> Result<Tally, CountError> {
        let q = self.field.order();
        let qq = q * q;
        let det = self.det.lifted(a);
        let deltas: [Vec<Vec<A::E>>; 3] = core::array::from_fn(|i| self.delta[i].lifted(a));
        let ddeg: [usize; 3] = core::array::from_fn(|i| self.delta[i].degree);
        let dd = self.det.degree;

        let mut tally = Tally::default();
        let mut u = vec![a.zero(); dd + 1];
        let mut ud: [Vec<A::E>; 3] = core::array::from_fn(|i| vec![a.zero(); ddeg[i] + 1]);
        let mut ypow = [a.zero(); 6];

        let mut idx = range.start;
        while idx < range.end {
            // row containing idx: rows 0..q are (1:y:*), row q is (0:1:*), row q+1 is (0:0:1)
            let (row_end, ymode) = if idx < qq {
                let y = idx / q;
                ((y + 1) * q, Some(y))
            } else if idx < qq + q {
                (qq + q, None)
            } else {
                // (0:0:1): only the x3^d coefficients survive
                let vals: [A::E; 3] = core::array::from_fn(|i| deltas[i][0][ddeg[i]]);
                if a.is_zero(det[0][dd]) {
                    self.classify(a, &vals, [0, 0, 1], &mut tally)?;
                }
                idx += 1;
                continue;
            };
            let end = row_end.min(range.end);
            let yp = ymode.map(|y| {
                let yl = a.lift(FqElem(y));
                ypow[0] = a.lift(FqElem::ONE);
                for b in 1..6 {
                    ypow[b] = a.mul(ypow[b - 1], yl);
                }
                &ypow[..]
            });
            row_coeffs(a, &det, dd, yp, &mut u);
            for i in 0..3 {
                row_coeffs(a, &deltas[i], ddeg[i], yp, &mut ud[i]);
            }
            let z0 = idx - (row_end - q);
            let z1 = end - (row_end - q);
            for z in z0..z1 {
                let zl = a.lift(FqElem(z));
                if !a.is_zero(horner(a, &u, dd, zl)) {
                    continue;
                }
                let vals: [A::E; 3] = core::array::from_fn(|i| horner(a, &ud[i], ddeg[i], zl));
                let pt = match ymode {
                    Some(y) => [1, y, z],
                    None => [0, 1, z],
                };
                self.classify(a, &vals, pt, &mut tally)?;
            }
            idx = end;
        }
        Ok(tally)
    }

    /// `vals` = (delta1, delta2, delta3) at a quintic point; tests delta3, delta1, delta2 in turn.
    #[inline]
    fn classify<A: RowArith>(
        &self,
        a: &A,
        vals: &[A::E; 3],
        pt: [u64; 3],
        tally: &mut Tally,
    ) -> Result<(), CountError> {
        let s3 = a.squareness(a.neg(vals[2]));
        let s1 = a.squareness(a.neg(vals[0]));
        let s2 = a.squareness(a.neg(vals[1]));
        if s3 == Squareness::Zero && s1 != Squareness::Zero && s2 != Squareness::Zero {
            tally.coherence_checks += 1;
            if s1 != s2 {
                return Err(CountError::Incoherent { point: pt });
            }
        }
        match [s3, s1, s2].into_iter().find(|s| *s != Squareness::Zero) {
            Some(Squareness::Square) => tally.split += 1,
            Some(_) => tally.nonsplit += 1,
            None => tally.singular += 1,
        }
        Ok(())
    }

    /// Serial count over all of P^2, reporting (done, total) after each chunk.
    pub fn count_all_points(&self, chunk: u64, progress: &mut dyn FnMut(u64, u64)) -> Result<Tally, CountError> {
        let total = self.total_points();
        let mut tally = Tally::default();
        for range in chunks(total, chunk) {
            let end = range.end;
            tally += self.count_range(range)?;
            progress(end, total);
        }
        Ok(tally)
    }
}

/// D_r and its breakdown for one extension degree, single-threaded.
pub fn count_difference(base: &FieldDesc, frame: &LineFrame, r: u32) -> Result<CountRow, CountError> {
    let kernel = CountKernel::for_degree(base, frame, r)?;
    let tally = kernel.count_all_points(DEFAULT_CHUNK, &mut |_, _| {})?;
    Ok(CountRow::from_tally(r, tally))
}

/// Counts that stopped early, with the completed rows kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialCount {
    pub report: CountReport,
    pub error: CountError,
}

/// Runs [`count_difference`] for r = 1..=rmax.
pub fn count_all(base: &FieldDesc, frame: &LineFrame, rmax: u32) -> Result<CountReport, PartialCount> {
    let mut report = CountReport { q: base.order(), rows: Vec::new() };
    for r in 1..=rmax {
        match count_difference(base, frame, r) {
            Ok(row) => report.rows.push(row),
            Err(error) => return Err(PartialCount { report, error }),
        }
    }
    Ok(report)
}

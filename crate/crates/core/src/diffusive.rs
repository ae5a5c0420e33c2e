//! Diffusive matrices and the certified trichotomy for strongly diffusive ones.
//!
//! A square matrix is diffusive when its diagonal is strictly negative and its
//! off-diagonal entries are non-negative; strongly diffusive when the
//! off-diagonal entries are strictly positive. For a strongly diffusive `A`
//! exactly one of the following holds, each with a checkable certificate:
//!
//! * `v >= 0`, `v != 0`, `A v = 0`;
//! * `a >= 0` with every component of `a A` at least one;
//! * `C >= 0` with `C A = -I`, i.e. the row cone contains the negative orthant.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{solve_feasibility, FeasibilitySystem};
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    KernelNonneg,
    PositiveCombination,
    NegativeOrthant,
    NoneOfThree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TrichotomyVerdict {
    /// `v >= 0`, `v != 0`, `A v = 0`, normalised to sum one.
    KernelNonneg {
        #[serde(with = "rational::serde_q::vec")]
        v: Vec<Rational>,
    },
    /// `a >= 0` and `min(a A) >= 1`.
    PositiveCombination {
        #[serde(with = "rational::serde_q::vec")]
        a: Vec<Rational>,
    },
    /// `C >= 0` and `C A = -I`.
    NegativeOrthant { c: RationalMatrix },
    /// Only produced for diffusive inputs that are not strongly diffusive.
    NoneOfThree,
}

impl TrichotomyVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            TrichotomyVerdict::KernelNonneg { .. } => VerdictKind::KernelNonneg,
            TrichotomyVerdict::PositiveCombination { .. } => VerdictKind::PositiveCombination,
            TrichotomyVerdict::NegativeOrthant { .. } => VerdictKind::NegativeOrthant,
            TrichotomyVerdict::NoneOfThree => VerdictKind::NoneOfThree,
        }
    }

    /// Replays the certificate against `a` with exact arithmetic.
    pub fn verify(&self, a: &RationalMatrix) -> bool {
        match self {
            TrichotomyVerdict::KernelNonneg { v } => check_kernel_nonneg(a, v),
            TrichotomyVerdict::PositiveCombination { a: coeffs } => {
                check_positive_combination(a, coeffs)
            }
            TrichotomyVerdict::NegativeOrthant { c } => check_negative_orthant(a, c),
            TrichotomyVerdict::NoneOfThree => true,
        }
    }
}

pub fn check_kernel_nonneg(a: &RationalMatrix, v: &[Rational]) -> bool {
    v.len() == a.ncols()
        && rational::all_nonneg(v)
        && !rational::all_zero(v)
        && rational::all_zero(&a.mul_vec(v))
}

pub fn check_positive_combination(a: &RationalMatrix, coeffs: &[Rational]) -> bool {
    coeffs.len() == a.nrows()
        && rational::all_nonneg(coeffs)
        && a.left_mul(coeffs).iter().all(|x| *x >= Rational::one())
}

pub fn check_negative_combination(a: &RationalMatrix, coeffs: &[Rational]) -> bool {
    coeffs.len() == a.nrows()
        && rational::all_nonneg(coeffs)
        && a.left_mul(coeffs).iter().all(|x| *x <= -Rational::one())
}

pub fn check_negative_orthant(a: &RationalMatrix, c: &RationalMatrix) -> bool {
    c.ncols() == a.nrows()
        && c.is_nonneg()
        && c.mul(a) == RationalMatrix::identity(a.ncols()).scale(&-Rational::one())
}

fn require_square(a: &RationalMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

fn sign_pattern(a: &RationalMatrix, strict: bool) -> Result<bool> {
    require_square(a)?;
    let n = a.nrows();
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            let x = a.get(i, j);
            if i == j {
                x.is_negative()
            } else if strict {
                x.is_positive()
            } else {
                !x.is_negative()
            }
        })
    }))
}

pub fn validate_diffusive(a: &RationalMatrix) -> Result<bool> {
    sign_pattern(a, false)
}

pub fn validate_strongly_diffusive(a: &RationalMatrix) -> Result<bool> {
    sign_pattern(a, true)
}

fn kernel_nonneg_search(a: &RationalMatrix) -> Option<Vec<Rational>> {
    let n = a.ncols();
    let mut sys = FeasibilitySystem::new(n)
        .all_nonneg()
        .equal(vec![Rational::one(); n], Rational::one());
    for row in a.rows() {
        sys = sys.equal(row.clone(), Rational::zero());
    }
    solve_feasibility(&sys).point()
}

/// `a >= 0` with `a A >= 1` (or `<= -1` when `negative`). Conic, so `> 0` scales to `>= 1`.
fn combination_search(a: &RationalMatrix, negative: bool) -> Option<Vec<Rational>> {
    let mut sys = FeasibilitySystem::new(a.nrows()).all_nonneg();
    for j in 0..a.ncols() {
        sys = if negative {
            sys.at_most(a.column(j), -Rational::one())
        } else {
            sys.at_least(a.column(j), Rational::one())
        };
    }
    solve_feasibility(&sys).point()
}

/// The trichotomy decided by linear feasibility searches, with `C = -A^{-1}` for the
/// third outcome.
pub fn trichotomy(a: &RationalMatrix) -> Result<TrichotomyVerdict> {
    if !validate_strongly_diffusive(a)? {
        return Err(Error::NotStronglyDiffusive);
    }
    if let Some(v) = kernel_nonneg_search(a) {
        return Ok(TrichotomyVerdict::KernelNonneg { v });
    }
    if let Some(coeffs) = combination_search(a, false) {
        return Ok(TrichotomyVerdict::PositiveCombination { a: coeffs });
    }
    Ok(TrichotomyVerdict::NegativeOrthant {
        c: negative_orthant_from_inverse(a)?,
    })
}

/// Runs all three certificate searches on a diffusive matrix, the third as
/// `a >= 0, a A <= -1`. Returns the first that succeeds, else `NoneOfThree`.
pub fn classify_diffusive_general(a: &RationalMatrix) -> Result<TrichotomyVerdict> {
    if !validate_diffusive(a)? {
        return Err(Error::NotDiffusive);
    }
    if let Some(v) = kernel_nonneg_search(a) {
        return Ok(TrichotomyVerdict::KernelNonneg { v });
    }
    if let Some(coeffs) = combination_search(a, false) {
        return Ok(TrichotomyVerdict::PositiveCombination { a: coeffs });
    }
    if let Some(coeffs) = combination_search(a, true) {
        debug_assert!(check_negative_combination(a, &coeffs));
        return Ok(TrichotomyVerdict::NegativeOrthant {
            c: negative_orthant_from_inverse(a)?,
        });
    }
    Ok(TrichotomyVerdict::NoneOfThree)
}

/// `C = -A^{-1}`, checked non-negative. For a diffusive `A`, `-A` is a Z-matrix, and a
/// semipositive Z-matrix is a non-singular M-matrix whose inverse is non-negative.
fn negative_orthant_from_inverse(a: &RationalMatrix) -> Result<RationalMatrix> {
    let inv = a.inverse().ok_or_else(|| {
        Error::Invariant("diffusive matrix whose row cone meets the negative orthant is singular".into())
    })?;
    let c = inv.scale(&-Rational::one());
    if !c.is_nonneg() {
        return Err(Error::Invariant("-A^{-1} has a negative entry".into()));
    }
    Ok(c)
}

/// Moves a non-negative, non-zero cone point into the open positive orthant by adding a small
/// multiple of one row of a matrix whose off-diagonal entries are positive.
///
/// Returns the strictly positive point and the updated non-negative coefficients.
pub fn lift_to_strictly_positive(
    a: &RationalMatrix,
    v: &[Rational],
    coeffs: &[Rational],
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    require_square(a)?;
    let n = a.ncols();
    if v.len() != n || coeffs.len() != a.nrows() {
        return Err(Error::Dimension("vector length does not match matrix".into()));
    }
    if !(0..n).all(|i| (0..n).all(|j| i == j || a.get(i, j).is_positive())) {
        return Err(Error::Precondition("off-diagonal entries must be positive".into()));
    }
    if !rational::all_nonneg(v) || rational::all_zero(v) {
        return Err(Error::Precondition("v must be non-negative and non-zero".into()));
    }
    if !rational::all_nonneg(coeffs) || a.left_mul(coeffs) != v {
        return Err(Error::Precondition("coefficients must be non-negative with coeffs·A = v".into()));
    }
    if v.iter().all(Signed::is_positive) {
        return Ok((v.to_vec(), coeffs.to_vec()));
    }
    let i = v.iter().position(Signed::is_positive).expect("v is non-zero");
    // Only w_i can shrink: w_i = v_i + eps a_ii > 0 needs eps < v_i / |a_ii|; take half of that.
    let aii = a.get(i, i);
    let eps = if aii.is_negative() {
        &v[i] / (-aii.clone()) / rational::int(2)
    } else {
        Rational::one()
    };
    let w: Vec<Rational> = v
        .iter()
        .zip(a.row(i))
        .map(|(x, r)| x + &eps * r)
        .collect();
    let mut c = coeffs.to_vec();
    c[i] += &eps;
    debug_assert!(w.iter().all(Signed::is_positive));
    Ok((w, c))
}

/// The elimination route: Gauss-Jordan on the diffusive matrix, keeping every current row as a
/// non-negative combination of the original rows. Each row operation adds a non-negative multiple
/// of the pivot row, so the row cone can only shrink; either the matrix stays diffusive through
/// the end (giving the negative-orthant certificate), or a row turns non-negative.
pub fn trichotomy_by_elimination(a: &RationalMatrix) -> Result<TrichotomyVerdict> {
    if !validate_strongly_diffusive(a)? {
        return Err(Error::NotStronglyDiffusive);
    }
    let n = a.nrows();
    let identity: Vec<usize> = (0..n).collect();
    match eliminate(a, &identity)? {
        Elimination::Done(v) => Ok(v),
        Elimination::ZeroRow => {
            let kernel = a.kernel_basis();
            if kernel.len() != 1 {
                return Err(Error::Invariant(format!(
                    "elimination produced a zero row but the kernel has dimension {}",
                    kernel.len()
                )));
            }
            let k = &kernel[0];
            let oriented: Vec<Rational> = if rational::all_nonneg(k) {
                k.clone()
            } else if k.iter().all(|x| !x.is_positive()) {
                k.iter().map(|x| -x.clone()).collect()
            } else {
                // Mixed-sign kernel vector: reorder so its positive entries come first. In that
                // order elimination must meet a non-zero non-negative row before finishing.
                let mut order: Vec<usize> = (0..n).filter(|&i| k[i].is_positive()).collect();
                order.extend((0..n).filter(|&i| !k[i].is_positive()));
                return match eliminate(a, &order)? {
                    Elimination::Done(v) => Ok(v),
                    Elimination::ZeroRow => Err(Error::Invariant(
                        "reordered elimination hit a zero row with a mixed-sign kernel".into(),
                    )),
                };
            };
            let total: Rational = oriented.iter().sum();
            Ok(TrichotomyVerdict::KernelNonneg {
                v: oriented.iter().map(|x| x / &total).collect(),
            })
        }
    }
}

enum Elimination {
    Done(TrichotomyVerdict),
    ZeroRow,
}

fn eliminate(a: &RationalMatrix, order: &[usize]) -> Result<Elimination> {
    let n = a.nrows();
    // Work on the permuted matrix P A P^T; record combinations in original row indices.
    let mut m: Vec<Vec<Rational>> = order
        .iter()
        .map(|&i| order.iter().map(|&j| a.get(i, j).clone()).collect())
        .collect();
    let mut comb: Vec<Vec<Rational>> = order
        .iter()
        .map(|&i| {
            let mut r = vec![Rational::zero(); n];
            r[i] = Rational::one();
            r
        })
        .collect();
    for p in 0..n {
        let pivot = m[p][p].clone();
        debug_assert!(pivot.is_negative());
        for j in 0..n {
            if j == p || m[j][p].is_zero() {
                continue;
            }
            let c = -(&m[j][p] / &pivot);
            debug_assert!(!c.is_negative());
            let (prow, pcomb) = (m[p].clone(), comb[p].clone());
            for (x, y) in m[j].iter_mut().zip(&prow) {
                *x += &c * y;
            }
            for (x, y) in comb[j].iter_mut().zip(&pcomb) {
                *x += &c * y;
            }
            if !m[j][j].is_negative() {
                // Off-diagonal entries stay non-negative, so the whole row is now non-negative.
                debug_assert!(rational::all_nonneg(&m[j]));
                if rational::all_zero(&m[j]) {
                    return Ok(Elimination::ZeroRow);
                }
                let mut v = vec![Rational::zero(); n];
                for (k, &orig) in order.iter().enumerate() {
                    v[orig] = m[j][k].clone();
                }
                let (w, coeffs) = lift_to_strictly_positive(a, &v, &comb[j])?;
                let min = w.iter().min().expect("n >= 1").clone();
                let coeffs = coeffs.iter().map(|x| x / &min).collect();
                return Ok(Elimination::Done(TrichotomyVerdict::PositiveCombination {
                    a: coeffs,
                }));
            }
        }
    }
    // Diagonal with negative entries: row k of comb, scaled by 1/|d_k|, yields -e_k.
    let mut c = vec![vec![Rational::zero(); n]; n];
    for (k, &orig) in order.iter().enumerate() {
        let scale = -m[k][k].recip();
        c[orig] = comb[k].iter().map(|x| x * &scale).collect();
    }
    Ok(Elimination::Done(TrichotomyVerdict::NegativeOrthant {
        c: RationalMatrix::from_rows(c, n)?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn diffusive_only() -> RationalMatrix {
        RationalMatrix::from_i64(&[&[-1, 0, 0], &[0, -1, 2], &[0, 1, -1]])
    }

    #[test]
    fn sign_validation() {
        let strong = RationalMatrix::from_i64(&[&[-1, 2], &[2, -1]]);
        assert!(validate_strongly_diffusive(&strong).unwrap());
        assert!(validate_diffusive(&diffusive_only()).unwrap());
        assert!(!validate_strongly_diffusive(&diffusive_only()).unwrap());
        let one = RationalMatrix::from_i64(&[&[1]]);
        assert!(!validate_diffusive(&one).unwrap());
        assert!(!validate_strongly_diffusive(&one).unwrap());
        assert!(validate_diffusive(&RationalMatrix::from_i64(&[&[1, 2]])).is_err());
    }

    #[test]
    fn singular_symmetric_case() {
        let a = RationalMatrix::from_i64(&[&[-1, 1], &[1, -1]]);
        let v = trichotomy(&a).unwrap();
        assert_eq!(v, TrichotomyVerdict::KernelNonneg { v: vec![ratio(1, 2), ratio(1, 2)] });
        assert!(v.verify(&a));
    }

    #[test]
    fn positive_combination_case() {
        let a = RationalMatrix::from_i64(&[&[-1, 2], &[2, -1]]);
        let v = trichotomy(&a).unwrap();
        assert_eq!(v.kind(), VerdictKind::PositiveCombination);
        assert!(v.verify(&a));
        assert!(check_positive_combination(&a, &[int(1), int(1)]));
    }

    #[test]
    fn negative_orthant_case() {
        let a = RationalMatrix::from_i64(&[&[-2, 1], &[1, -2]]);
        let expected = RationalMatrix::from_i64(&[&[2, 1], &[1, 2]]).scale(&ratio(1, 3));
        assert_eq!(trichotomy(&a).unwrap(), TrichotomyVerdict::NegativeOrthant { c: expected.clone() });
        assert_eq!(
            trichotomy_by_elimination(&a).unwrap(),
            TrichotomyVerdict::NegativeOrthant { c: expected }
        );
    }

    #[test]
    fn rejects_non_strongly_diffusive() {
        assert!(matches!(trichotomy(&diffusive_only()), Err(Error::NotStronglyDiffusive)));
        assert!(matches!(
            classify_diffusive_general(&RationalMatrix::from_i64(&[&[1]])),
            Err(Error::NotDiffusive)
        ));
    }

    #[test]
    fn diffusive_only_has_none_of_three() {
        assert_eq!(classify_diffusive_general(&diffusive_only()).unwrap(), TrichotomyVerdict::NoneOfThree);
    }

    #[test]
    fn one_by_one() {
        let a = RationalMatrix::from_i64(&[&[-1]]);
        let v = classify_diffusive_general(&a).unwrap();
        assert_eq!(v, TrichotomyVerdict::NegativeOrthant { c: RationalMatrix::from_i64(&[&[1]]) });
        assert_eq!(trichotomy(&a).unwrap(), v);
    }

    #[test]
    fn lift_examples() {
        let a = RationalMatrix::from_i64(&[&[-1, 2], &[2, -1]]);
        let (w, c) = lift_to_strictly_positive(&a, &[int(1), int(1)], &[int(1), int(1)]).unwrap();
        assert_eq!(w, vec![int(1), int(1)]);
        assert_eq!(c, vec![int(1), int(1)]);

        let b = RationalMatrix::from_i64(&[&[-2, 3], &[3, -2]]);
        // (1,1) = (2/5)(row1 + row2)·... use the exact combination
        let coeffs = vec![ratio(1, 1), ratio(1, 1)];
        let v = b.left_mul(&coeffs);
        assert_eq!(v, vec![int(1), int(1)]);
        let (w, _) = lift_to_strictly_positive(&b, &v, &coeffs).unwrap();
        assert!(w.iter().all(Signed::is_positive));

        // v = (0,1) = (2/3)(row1) + (1/3)(row2) for [[-1,2],[2,-1]]
        let coeffs = vec![ratio(2, 3), ratio(1, 3)];
        let v = a.left_mul(&coeffs);
        assert_eq!(v, vec![int(0), int(1)]);
        let (w, c) = lift_to_strictly_positive(&a, &v, &coeffs).unwrap();
        assert!(w.iter().all(Signed::is_positive));
        assert_eq!(a.left_mul(&c), w);
        // the lift moves along row 2: w = (2 eps, 1 - eps) with eps = 1/2
        assert_eq!(w, vec![int(1), ratio(1, 2)]);
    }

    #[test]
    fn lift_rejects_bad_input() {
        let a = RationalMatrix::from_i64(&[&[-1, 2], &[2, -1]]);
        assert!(lift_to_strictly_positive(&a, &[int(0), int(0)], &[int(0), int(0)]).is_err());
        assert!(lift_to_strictly_positive(&a, &[int(1), int(1)], &[int(2), int(2)]).is_err());
    }
}

//! Dense linear algebra on small matrices of [`Real`].

use rug::Float;

use super::precision::{PrecisionContext, Real};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<Real>>;

/// Cholesky factor `L` with `A = L Lᵀ`.
///
/// Fails with [`Error::NotPositiveDefinite`] naming the first leading minor
/// whose pivot is not positive.
pub fn cholesky(a: &[Vec<Real>], ctx: &PrecisionContext) -> Result<Matrix> {
    let n = a.len();
    let p = ctx.prec();
    let mut l = vec![vec![Float::new(p); n]; n];
    for j in 0..n {
        let mut d = ctx.lift(&a[j][j]);
        for k in 0..j {
            d -= Float::with_val(p, l[j][k].square_ref());
        }
        if d <= 0 {
            return Err(Error::NotPositiveDefinite {
                order: j + 1,
                digits: ctx.digits(),
            });
        }
        let d = d.sqrt();
        for i in j + 1..n {
            let mut s = ctx.lift(&a[i][j]);
            for k in 0..j {
                s -= Float::with_val(p, &l[i][k] * &l[j][k]);
            }
            l[i][j] = s / &d;
        }
        l[j][j] = d;
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix with non-zero diagonal.
pub fn invert_lower(l: &[Vec<Real>], ctx: &PrecisionContext) -> Matrix {
    let n = l.len();
    let p = ctx.prec();
    let mut inv = vec![vec![Float::new(p); n]; n];
    for i in 0..n {
        inv[i][i] = Float::with_val(p, 1 / &l[i][i]);
        for j in (0..i).rev() {
            let mut s = Float::new(p);
            for k in j..i {
                s += Float::with_val(p, &l[i][k] * &inv[k][j]);
            }
            inv[i][j] = -s / &l[i][i];
        }
    }
    inv
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &[Vec<Real>], b: &[Real], ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let n = a.len();
    let p = ctx.prec();
    let mut m: Matrix = a.iter().map(|r| r.iter().map(|x| ctx.lift(x)).collect()).collect();
    let mut rhs: Vec<Real> = b.iter().map(|x| ctx.lift(x)).collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                let (x, y) = (m[i][col].clone().abs(), m[j][col].clone().abs());
                x.partial_cmp(&y).expect("finite entries")
            })
            .expect("non-empty range");
        if m[pivot][col].is_zero() {
            return Err(Error::Domain("singular linear system".into()));
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let factor = Float::with_val(p, &m[row][col] / &m[col][col]);
            for k in col..n {
                let sub = Float::with_val(p, &factor * &m[col][k]);
                m[row][k] -= sub;
            }
            let sub = Float::with_val(p, &factor * &rhs[col]);
            rhs[row] -= sub;
        }
    }
    let mut x = vec![Float::new(p); n];
    for i in (0..n).rev() {
        let mut s = ctx.lift(&rhs[i]);
        for k in i + 1..n {
            s -= Float::with_val(p, &m[i][k] * &x[k]);
        }
        x[i] = s / &m[i][i];
    }
    Ok(x)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off`, together with the first component of each normalised
/// eigenvector. Sorted by eigenvalue.
///
/// Implicit QL with Wilkinson shifts; only the first row of the eigenvector
/// matrix is carried along.
pub fn tridiagonal_eigen(diag: &[Real], off: &[Real], ctx: &PrecisionContext) -> Result<(Vec<Real>, Vec<Real>)> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) {
        return Err(Error::Domain("off-diagonal length must be one less than the diagonal".into()));
    }
    let p = ctx.prec();
    let mut d: Vec<Real> = diag.iter().map(|x| ctx.lift(x)).collect();
    let mut e: Vec<Real> = off.iter().map(|x| ctx.lift(x)).collect();
    e.push(Float::new(p));
    let mut z = vec![Float::new(p); n];
    if n > 0 {
        z[0] = ctx.one();
    }
    let eps = Float::with_val(p, 1) >> (p - 4);
    let hypot = |a: &Real, b: &Real| Float::with_val(p, a.hypot_ref(b));

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = Float::with_val(p, d[m].abs_ref()) + Float::with_val(p, d[m + 1].abs_ref());
                if Float::with_val(p, e[m].abs_ref()) <= Float::with_val(p, &dd * &eps) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::EigenNonConvergence);
            }
            let mut g = Float::with_val(p, &d[l + 1] - &d[l]) / Float::with_val(p, &e[l] * 2u32);
            let mut r = hypot(&g, &Float::with_val(p, 1));
            let signed_r = if g >= 0 { r.clone() } else { -r.clone() };
            g = Float::with_val(p, &d[m] - &d[l]) + Float::with_val(p, &e[l] / Float::with_val(p, &g + &signed_r));
            let (mut s, mut c, mut pp) = (Float::with_val(p, 1), Float::with_val(p, 1), Float::new(p));
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = Float::with_val(p, &s * &e[i]);
                let b = Float::with_val(p, &c * &e[i]);
                r = hypot(&f, &g);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    d[i + 1] -= &pp;
                    e[m] = Float::new(p);
                    deflated = true;
                    break;
                }
                s = Float::with_val(p, &f / &r);
                c = Float::with_val(p, &g / &r);
                let g2 = Float::with_val(p, &d[i + 1] - &pp);
                r = Float::with_val(p, &d[i] - &g2) * &s + Float::with_val(p, &c * &b) * 2u32;
                pp = Float::with_val(p, &s * &r);
                d[i + 1] = Float::with_val(p, &g2 + &pp);
                g = Float::with_val(p, &c * &r) - &b;
                let zf = z[i + 1].clone();
                z[i + 1] = Float::with_val(p, &s * &z[i]) + Float::with_val(p, &c * &zf);
                z[i] = Float::with_val(p, &c * &z[i]) - Float::with_val(p, &s * &zf);
            }
            if deflated {
                continue;
            }
            d[l] -= &pp;
            e[l] = g;
            e[m] = Float::new(p);
        }
    }
    let mut pairs: Vec<(Real, Real)> = d.into_iter().zip(z).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    Ok(pairs.into_iter().unzip())
}

pub fn mat_mul(a: &[Vec<Real>], b: &[Vec<Real>], ctx: &PrecisionContext) -> Matrix {
    let p = ctx.prec();
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Float::new(p); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            for j in 0..m {
                out[i][j] += Float::with_val(p, &a[i][k] * &bk[j]);
            }
        }
    }
    out
}

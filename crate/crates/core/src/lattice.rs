//! Integer lattice routines: Hermite and Smith normal forms, triangular
//! solves and kernels of maps into finite diagonal groups.
//!
//! Every lattice here is full rank in `Z^k` and contains `diag(moduli)·Z^k`
//! for some known moduli, so coordinates can always be reduced modulo the
//! corresponding modulus. That keeps entries below 2^63 and lets all
//! intermediate products fit in `i128`.
//!
//! Hermite convention (used everywhere): the basis is stored column-wise,
//! lower triangular, with positive diagonal, and every entry below the
//! diagonal in row `r` lies in `[0, d_r)` where `d_r` is the diagonal entry of
//! row `r`.

use crate::arith::{checked_mul_add, ext_gcd};
use crate::error::{Error, Result};

/// Column vectors of a square integer matrix.
pub(crate) type Columns = Vec<Vec<i128>>;

fn reduce_tail(v: &mut [i128], moduli: &[u64], from: usize) {
    for r in from..v.len() {
        v[r] = v[r].rem_euclid(moduli[r] as i128);
    }
}

/// `x*u + y*v` computed entrywise from index `from` on.
fn combine(u: &[i128], x: i128, v: &[i128], y: i128, from: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; u.len()];
    for r in from..u.len() {
        out[r] = checked_mul_add(checked_mul_add(0, x, u[r])?, y, v[r])?;
    }
    Ok(out)
}

/// Canonical Hermite basis of `span(gens) + diag(moduli)·Z^k`.
///
/// Every modulus must be at least 1. The result has exactly `k` columns.
pub(crate) fn hnf_with_moduli(moduli: &[u64], gens: &[Vec<i128>]) -> Result<Columns> {
    let k = moduli.len();
    let mut pool: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| {
            let mut v = g.clone();
            reduce_tail(&mut v, moduli, 0);
            v
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();

    let mut cols: Columns = Vec::with_capacity(k);
    for i in 0..k {
        let mut pivot = vec![0i128; k];
        pivot[i] = moduli[i] as i128;
        let mut rest = Vec::with_capacity(pool.len());
        for v in pool.drain(..) {
            if v[i] == 0 {
                rest.push(v);
                continue;
            }
            let (g, s, t) = ext_gcd(pivot[i], v[i]);
            let a = pivot[i] / g;
            let b = v[i] / g;
            let mut new_pivot = combine(&pivot, s, &v, t, i)?;
            let mut other = combine(&pivot, -b, &v, a, i)?;
            debug_assert_eq!(new_pivot[i], g);
            debug_assert_eq!(other[i], 0);
            reduce_tail(&mut new_pivot, moduli, i + 1);
            reduce_tail(&mut other, moduli, i + 1);
            pivot = new_pivot;
            if other.iter().any(|&x| x != 0) {
                rest.push(other);
            }
        }
        cols.push(pivot);
        pool = rest;
    }

    // Reduce the sub-diagonal entries row by row.
    for j in 0..k {
        for r in (j + 1)..k {
            let d = cols[r][r];
            let q = cols[j][r].div_euclid(d);
            if q != 0 {
                let reducer = cols[r].clone();
                for (row, entry) in cols[j].iter_mut().enumerate().skip(r) {
                    *entry = checked_mul_add(*entry, -q, reducer[row])?;
                }
                reduce_tail(&mut cols[j], moduli, r + 1);
            }
        }
    }
    Ok(cols)
}

/// Reduces `x` modulo the lattice spanned by the Hermite columns `cols`.
///
/// The result is the canonical coset representative with `0 <= x_r < d_r`.
pub(crate) fn hnf_reduce(cols: &[Vec<i128>], x: &mut [i128]) -> Result<()> {
    let k = cols.len();
    for j in 0..k {
        let q = x[j].div_euclid(cols[j][j]);
        if q != 0 {
            for r in j..k {
                x[r] = checked_mul_add(x[r], -q, cols[j][r])?;
            }
        }
    }
    Ok(())
}

/// Solves `L z = b` for lower-triangular `L` given by columns.
///
/// Returns `None` when the solution is not integral.
pub(crate) fn lower_solve(cols: &[Vec<i128>], b: &[i128]) -> Result<Option<Vec<i128>>> {
    let k = cols.len();
    let mut z = vec![0i128; k];
    for i in 0..k {
        let mut acc = b[i];
        for (l, zl) in z.iter().enumerate().take(i) {
            acc = checked_mul_add(acc, -cols[l][i], *zl)?;
        }
        let d = cols[i][i];
        if acc % d != 0 {
            return Ok(None);
        }
        z[i] = acc / d;
    }
    Ok(Some(z))
}

/// Smith form `P·M·Q = diag(d)` of a square matrix.
///
/// Only the left transform is kept: `p` (rows used as coordinate maps) and its
/// inverse `p_inv`. The diagonal is non-negative with `d_0 | d_1 | …`.
#[derive(Debug, Clone)]
pub(crate) struct Smith {
    pub diag: Vec<i128>,
    /// Row-major `P`.
    pub p: Vec<Vec<i128>>,
    /// Row-major `P^{-1}`.
    pub p_inv: Vec<Vec<i128>>,
}

/// Computes the Smith form of the row-major square matrix `m`.
pub(crate) fn smith(mut m: Vec<Vec<i128>>) -> Result<Smith> {
    let k = m.len();
    let mut p: Vec<Vec<i128>> = identity(k);
    let mut p_inv: Vec<Vec<i128>> = identity(k);

    // Row operation helpers; each is mirrored on P (left) and P^{-1} (right).
    fn row_axpy(
        m: &mut [Vec<i128>],
        p: &mut [Vec<i128>],
        p_inv: &mut [Vec<i128>],
        dst: usize,
        src: usize,
        q: i128,
    ) -> Result<()> {
        // row_dst += q * row_src
        let k = m.len();
        for c in 0..k {
            m[dst][c] = checked_mul_add(m[dst][c], q, m[src][c])?;
            p[dst][c] = checked_mul_add(p[dst][c], q, p[src][c])?;
        }
        // P^{-1} ← P^{-1}·E^{-1}: column src -= q * column dst
        for row in p_inv.iter_mut() {
            row[src] = checked_mul_add(row[src], -q, row[dst])?;
        }
        Ok(())
    }

    fn col_axpy(m: &mut [Vec<i128>], dst: usize, src: usize, q: i128) -> Result<()> {
        for row in m.iter_mut() {
            row[dst] = checked_mul_add(row[dst], q, row[src])?;
        }
        Ok(())
    }

    for t in 0..k {
        loop {
            // Smallest nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..k {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != t {
                m.swap(bi, t);
                p.swap(bi, t);
                for row in p_inv.iter_mut() {
                    row.swap(bi, t);
                }
            }
            if bj != t {
                for row in m.iter_mut() {
                    row.swap(bj, t);
                }
            }

            let piv = m[t][t];
            let mut clean = true;
            for i in (t + 1)..k {
                let q = m[i][t].div_euclid(piv);
                if q != 0 {
                    row_axpy(&mut m, &mut p, &mut p_inv, i, t, -q)?;
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in (t + 1)..k {
                let q = m[t][j].div_euclid(piv);
                if q != 0 {
                    col_axpy(&mut m, j, t, -q)?;
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and go again.
            let offending = ((t + 1)..k).find(|&i| ((t + 1)..k).any(|j| m[i][j] % piv != 0));
            match offending {
                Some(i) => row_axpy(&mut m, &mut p, &mut p_inv, t, i, 1)?,
                None => break,
            }
        }
        if m[t][t] < 0 {
            for c in 0..k {
                m[t][c] = -m[t][c];
                p[t][c] = -p[t][c];
            }
            for row in p_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }

    let diag = (0..k).map(|i| m[i][i]).collect();
    Ok(Smith { diag, p, p_inv })
}

pub(crate) fn identity(k: usize) -> Vec<Vec<i128>> {
    (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect()
}

/// Generators of `{x ∈ Z^k : rows·x ≡ 0 (mod moduli)}`.
///
/// `rows[j]` is a linear form on `Z^k`; `moduli[j] >= 1`. The returned set
/// always spans the full kernel lattice (which has rank `k`).
pub(crate) fn kernel_mod(k: usize, rows: &[Vec<i128>], moduli: &[u64]) -> Result<Columns> {
    let mut exponent = 1u64;
    for &s in moduli {
        exponent = crate::arith::lcm(exponent, s)?;
    }
    let uniform = vec![exponent; k];
    let mut basis: Columns = identity(k);
    for (row, &s) in rows.iter().zip(moduli) {
        if s == 1 {
            continue;
        }
        let s = s as i128;
        // Column operations on [vals | s] carrying the basis vectors along.
        let mut pivot_val = s;
        let mut pivot_vec = vec![0i128; k];
        let mut next = Vec::with_capacity(k);
        for b in basis {
            let mut val = 0i128;
            for (c, x) in row.iter().zip(&b) {
                val = checked_mul_add(val, *c, *x)?;
            }
            let val = val.rem_euclid(s);
            if val == 0 {
                next.push(b);
                continue;
            }
            let (g, u, v) = ext_gcd(pivot_val, val);
            let a = pivot_val / g;
            let c = val / g;
            let new_pivot_vec = combine(&pivot_vec, u, &b, v, 0)?;
            let other = combine(&pivot_vec, -c, &b, a, 0)?;
            pivot_val = g;
            pivot_vec = new_pivot_vec;
            next.push(other);
        }
        basis = hnf_with_moduli(&uniform, &next)?;
    }
    Ok(basis)
}

pub(crate) fn to_i128(v: &[u64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

pub(crate) fn reduce_mod(v: &[i128], moduli: &[u64]) -> Vec<u64> {
    v.iter().zip(moduli).map(|(&x, &n)| x.rem_euclid(n as i128) as u64).collect()
}

/// Error helper for callers that know a division must be exact.
pub(crate) fn inexact(context: &'static str) -> Error {
    Error::Verification(format!("{context}: expected an exact integral solve"))
}

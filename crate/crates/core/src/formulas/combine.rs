//! Combining a conjunction of polynomial equations into one equation.
//!
//! - [`combine_pair`]: `f² − 2g²`, zero over ℚ iff `f = g = 0`.
//! - [`combine_many`]: `G(f₁, …, f_n)` for the norm form `G` of
//!   `Σ y_j θ^{j−1}` with `θⁿ = 2`, which has no nontrivial rational zero.
//! - [`combine_sos`]: `Σ f_i²`, valid over subfields of ℝ.
//!
//! For `n ≤ EXACT_NORM_LIMIT` the norm form is expanded exactly. For larger
//! `n` expansion is infeasible, so the norm is computed as a circuit: while
//! `n` is even, `N(A_e(θ²) + θ A_o(θ²)) = N′(A_e² − θ² A_o²)` halves the
//! degree of the extension, and for the remaining odd `m` the norm is the
//! last elementary symmetric function of the conjugates, recovered from the
//! power sums `Tr(uᵏ)` by Newton's identities scaled by `k!` to stay
//! integral. The circuit therefore computes `norm_scale(n)·G` with
//! `norm_scale(n) = m!`; a nonzero constant multiple has the same zero set.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::circuit::{Circuit, NodeId};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Nonsquare used by [`combine_pair`].
pub const PAIR_NONSQUARE: i64 = 2;
/// `θⁿ = NORM_RADICAND` defines the field of the norm form.
pub const NORM_RADICAND: i64 = 2;
/// Largest `n` for which [`combine_many`] uses the expanded norm form.
pub const EXACT_NORM_LIMIT: usize = 6;
/// Largest `n` accepted by [`norm_form`].
pub const NORM_FORM_MAX: usize = 9;

/// `f² − 2g²`.
pub fn combine_pair(c: &mut Circuit, f: NodeId, g: NodeId) -> NodeId {
    let f2 = c.pow(f, 2);
    let g2 = c.pow(g, 2);
    let k = BigInt::from(PAIR_NONSQUARE);
    let t = c.scale(g2, &k);
    c.sub(f2, t)
}

/// `Σ f_i²`.
pub fn combine_sos(c: &mut Circuit, fs: &[NodeId]) -> NodeId {
    let squares: Vec<NodeId> = fs.iter().map(|&f| c.pow(f, 2)).collect();
    c.sum(&squares)
}

/// The norm form `G(y₁, …, y_n) = N(Σ y_j θ^{j−1})`, `θⁿ = 2`, expanded.
///
/// Computed as the determinant of multiplication by `Σ y_j x^{j−1}` on
/// `ℚ[x]/(xⁿ − 2)`, which equals the resultant of `xⁿ − 2` and
/// `Σ y_j x^{j−1}`. The determinant is expanded along rows with a
/// dynamic program over sets of used columns.
pub fn norm_form(n: usize) -> Result<Poly> {
    if n == 0 || n > NORM_FORM_MAX {
        return Err(Error::Precondition(format!(
            "norm_form expands only for 1 ≤ n ≤ {NORM_FORM_MAX}, got {n}"
        )));
    }
    let y: Vec<Poly> = (1..=n).map(|j| Poly::var(&format!("y{j}"))).collect();
    // m[row][col]: coefficient of x^row in (Σ y_j x^{j−1})·x^col
    let mut m = vec![vec![Poly::zero(); n]; n];
    for col in 0..n {
        for (j, yj) in y.iter().enumerate() {
            let e = j + col;
            let (row, term) = if e < n {
                (e, yj.clone())
            } else {
                (e - n, yj.scale(&BigInt::from(NORM_RADICAND)))
            };
            m[row][col] = m[row][col].add(&term);
        }
    }
    let mut dp: Vec<Option<Poly>> = vec![None; 1 << n];
    dp[0] = Some(Poly::constant(1));
    for mask in 0usize..(1 << n) {
        let Some(acc) = dp[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(acc);
            continue;
        }
        for col in 0..n {
            if mask >> col & 1 == 1 || m[row][col].is_zero() {
                continue;
            }
            // sign of placing `col` after the columns already used
            let later = (mask >> (col + 1)).count_ones();
            let mut term = acc.mul(&m[row][col]);
            if later % 2 == 1 {
                term = term.neg();
            }
            let next = mask | 1 << col;
            dp[next] = Some(match dp[next].take() {
                Some(p) => p.add(&term),
                None => term,
            });
        }
    }
    Ok(dp[(1 << n) - 1].take().unwrap_or_default())
}

/// The constant `m!` (with `m` the odd part of `n`) by which the circuit
/// built in [`norm_circuit`] exceeds the norm form.
pub fn norm_scale(n: usize) -> BigInt {
    let mut m = n;
    while m.is_multiple_of(2) && m > 0 {
        m /= 2;
    }
    (1..=m).map(BigInt::from).product()
}

/// `norm_scale(n)·G(ys)` as a circuit, without expansion.
pub fn norm_circuit(c: &mut Circuit, ys: &[NodeId]) -> NodeId {
    assert!(!ys.is_empty(), "norm of an empty vector");
    let mut u: Vec<Option<NodeId>> = ys.iter().map(|&y| Some(y)).collect();
    while u.len().is_multiple_of(2) {
        u = graeffe(c, &u);
    }
    if u.len() == 1 {
        return u[0].unwrap_or_else(|| c.int(0));
    }
    newton_norm(c, &u)
}

/// `G(f₁, …, f_n)` up to the constant [`norm_scale`]; `f₁` itself when
/// `n = 1`.
pub fn combine_many(c: &mut Circuit, fs: &[NodeId]) -> Result<NodeId> {
    match fs.len() {
        0 => Err(Error::Precondition("combine_many needs at least one polynomial".into())),
        1 => Ok(fs[0]),
        n if n <= EXACT_NORM_LIMIT => {
            let g = norm_form(n)?;
            let mut tmp = Circuit::new();
            let root = g.to_circuit(&mut tmp);
            Ok(c.import(&tmp, &[root], |_, name| {
                let j: usize = name[1..].parse().expect("norm variables are y1..yn");
                fs[j - 1]
            })[0])
        }
        _ => Ok(norm_circuit(c, fs)),
    }
}

type Vector = Vec<Option<NodeId>>;

fn add_opt(c: &mut Circuit, a: Option<NodeId>, b: Option<NodeId>) -> Option<NodeId> {
    match (a, b) {
        (Some(x), Some(y)) => Some(c.add(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn sub_opt(c: &mut Circuit, a: Option<NodeId>, b: Option<NodeId>) -> Option<NodeId> {
    match (a, b) {
        (Some(x), Some(y)) => Some(c.sub(x, y)),
        (x, None) => x,
        (None, Some(y)) => Some(c.neg(y)),
    }
}

fn mul_opt(c: &mut Circuit, a: Option<NodeId>, b: Option<NodeId>) -> Option<NodeId> {
    match (a, b) {
        (Some(x), Some(y)) if x == y => Some(c.pow(x, 2)),
        (Some(x), Some(y)) => Some(c.mul(x, y)),
        _ => None,
    }
}

fn scale_opt(c: &mut Circuit, a: Option<NodeId>, k: &BigInt) -> Option<NodeId> {
    a.map(|x| c.scale(x, k))
}

const KARATSUBA_CUTOFF: usize = 8;

/// Polynomial product of coefficient vectors.
fn poly_mul(c: &mut Circuit, a: &[Option<NodeId>], b: &[Option<NodeId>]) -> Vector {
    let n = a.len().max(b.len());
    if n == 0 {
        return Vec::new();
    }
    let mut out = if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        schoolbook(c, a, b)
    } else {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.resize(n, None);
        b.resize(n, None);
        karatsuba(c, &a, &b)
    };
    out.truncate(a.len() + b.len() - 1);
    out
}

fn schoolbook(c: &mut Circuit, a: &[Option<NodeId>], b: &[Option<NodeId>]) -> Vector {
    let mut out = vec![None; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_none() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = mul_opt(c, x, y);
            out[i + j] = add_opt(c, out[i + j], t);
        }
    }
    out
}

fn karatsuba(c: &mut Circuit, a: &[Option<NodeId>], b: &[Option<NodeId>]) -> Vector {
    let n = a.len();
    if n <= KARATSUBA_CUTOFF {
        return schoolbook(c, a, b);
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = poly_mul(c, a0, b0);
    let z2 = poly_mul(c, a1, b1);
    let sa = sum_vec(c, a0, a1);
    let sb = sum_vec(c, b0, b1);
    let z1 = poly_mul(c, &sa, &sb);
    let mut out = vec![None; 2 * n - 1];
    for (k, &t) in z0.iter().enumerate() {
        out[k] = add_opt(c, out[k], t);
    }
    for (k, &t) in z2.iter().enumerate() {
        out[k + 2 * h] = add_opt(c, out[k + 2 * h], t);
    }
    for k in 0..z1.len() {
        let mut mid = z1[k];
        mid = sub_opt(c, mid, z0.get(k).copied().flatten());
        mid = sub_opt(c, mid, z2.get(k).copied().flatten());
        out[k + h] = add_opt(c, out[k + h], mid);
    }
    out
}

fn sum_vec(c: &mut Circuit, a: &[Option<NodeId>], b: &[Option<NodeId>]) -> Vector {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| add_opt(c, a.get(i).copied().flatten(), b.get(i).copied().flatten()))
        .collect()
}

/// Product in `ℚ[X]/(X^n − 2)` with `n = a.len() = b.len()`.
fn alg_mul(c: &mut Circuit, a: &[Option<NodeId>], b: &[Option<NodeId>]) -> Vector {
    let n = a.len();
    let prod = poly_mul(c, a, b);
    let k = BigInt::from(NORM_RADICAND);
    (0..n)
        .map(|i| {
            let high = prod.get(i + n).copied().flatten();
            let wrapped = scale_opt(c, high, &k);
            add_opt(c, prod[i], wrapped)
        })
        .collect()
}

/// One halving step: from `u = A_e(θ²) + θ A_o(θ²)` in degree `n` to
/// `A_e² − θ² A_o²` in degree `n/2`.
fn graeffe(c: &mut Circuit, u: &[Option<NodeId>]) -> Vector {
    let even: Vector = u.iter().step_by(2).copied().collect();
    let odd: Vector = u.iter().skip(1).step_by(2).copied().collect();
    let h = even.len();
    let se = alg_mul(c, &even, &even);
    let so = alg_mul(c, &odd, &odd);
    let k = BigInt::from(NORM_RADICAND);
    // multiply `so` by X, where X^h = 2
    let mut shifted = vec![None; h];
    shifted[0] = scale_opt(c, so[h - 1], &k);
    shifted[1..h].copy_from_slice(&so[..h - 1]);
    (0..h).map(|i| sub_opt(c, se[i], shifted[i])).collect()
}

/// Constant coefficient of `v·w` in `ℚ[X]/(X^n − 2)`.
fn coeff0_of_product(c: &mut Circuit, v: &[Option<NodeId>], w: &[Option<NodeId>]) -> Option<NodeId> {
    let n = v.len();
    let mut acc = mul_opt(c, v[0], w[0]);
    let k = BigInt::from(NORM_RADICAND);
    let mut wrapped = None;
    for a in 1..n {
        let t = mul_opt(c, v[a], w[n - a]);
        wrapped = add_opt(c, wrapped, t);
    }
    let wrapped = scale_opt(c, wrapped, &k);
    acc = add_opt(c, acc, wrapped);
    acc
}

/// `m!·N(u)` for odd `m = u.len() ≥ 3`, via scaled Newton identities.
fn newton_norm(c: &mut Circuit, u: &[Option<NodeId>]) -> NodeId {
    let n = u.len();
    let step = (1..).find(|s| s * s >= n).expect("square root exists");
    // baby[i] = u^i for 1 ≤ i ≤ step
    let mut baby: Vec<Vector> = vec![Vec::new(), u.to_vec()];
    for i in 2..=step {
        let next = alg_mul(c, &baby[i - 1], u);
        baby.push(next);
    }
    // giant[j] = u^{j·step}
    let mut giant: Vec<Vector> = vec![Vec::new(), baby[step].clone()];
    while giant.len() * step <= n {
        let next = alg_mul(c, giant.last().expect("nonempty"), &baby[step]);
        giant.push(next);
    }
    // c0[k] = constant coefficient of u^k, so Tr(u^k) = n·c0[k]
    let mut c0: Vec<Option<NodeId>> = vec![None; n + 1];
    for (k, slot) in c0.iter_mut().enumerate().skip(1) {
        let (j, i) = (k / step, k % step);
        *slot = match (j, i) {
            (0, i) => baby[i][0],
            (j, 0) => giant[j][0],
            (j, i) => {
                let (g, b) = (giant[j].clone(), baby[i].clone());
                coeff0_of_product(c, &g, &b)
            }
        };
    }
    // E_k = k!·e_k = Σ_{i=1}^{k} (−1)^{i−1} (k−1)!/(k−i)! · E_{k−i} · p_i
    let nn = BigInt::from(n);
    let mut e: Vec<Option<NodeId>> = vec![None; n + 1];
    for k in 1..=n {
        let mut acc = None;
        let mut falling = BigInt::one(); // (k−1)!/(k−i)!
        for i in 1..=k {
            if i > 1 {
                falling *= BigInt::from(k - i + 1);
            }
            let mut coef = &falling * &nn;
            if i % 2 == 0 {
                coef = -coef;
            }
            let term = if k == i {
                scale_opt(c, c0[i], &coef)
            } else {
                let prod = mul_opt(c, e[k - i], c0[i]);
                scale_opt(c, prod, &coef)
            };
            acc = add_opt(c, acc, term);
        }
        e[k] = acc;
    }
    e[n].unwrap_or_else(|| c.int(BigInt::zero()))
}

//! Flat coordinates of the Saito cometric η.
//!
//! η is flat, so there are coordinates t_1,…,t_n in which it is constant.
//! Each t_k is sought as u_k plus a weighted-homogeneous correction in
//! u_1,…,u_{k−1} (weight 2k), flat in the sense ∇η dt_k = 0; that Pfaffian
//! system is linear in the unknown coefficients and has a unique solution.
//! A final diagonal rescaling makes η(dt_i, dt_j) the anti-identity
//! δ_{i+j,n+1}: coordinates in the first half stay monic, their partners
//! absorb the pairing constant, and for odd n the middle coordinate needs a
//! rational square root (an error otherwise).

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::matrix::{solve_linear, ExactMatrix, LinearSolution};
use crate::pencil::{build_pencil, contravariant_christoffel, Normalization, PencilData};
use crate::poly::{Monomial, MultiPoly};
use crate::ratfun::RatFun;
use crate::scalar::{q, rational_sqrt, ExactScalar};

/// The Saito flat chart and everything transported into it.
#[derive(Debug, Clone)]
pub struct FlatChart {
    /// Rank of the group.
    pub n: usize,
    /// Orbit chart u_1,…,u_n.
    pub u_chart: Arc<Chart>,
    /// Flat chart t_1,…,t_n.
    pub t_chart: Arc<Chart>,
    /// t_k as polynomials in u (normalized).
    pub t_of_u: Vec<MultiPoly>,
    /// u_k as polynomials in t (exact inverse of the triangular map).
    pub u_of_t: Vec<MultiPoly>,
    /// Diagonal normalization factors: t_k = scale_k · (u_k + correction).
    pub scales: Vec<ExactScalar>,
    /// η^{ij}(t): the anti-identity δ_{i+j,n+1}.
    pub eta_t: Vec<MultiPoly>,
    /// Intersection cometric g^{ij}(t), polynomial.
    pub g_t: Vec<MultiPoly>,
    /// Contravariant Christoffel symbols Γ^{ij}_k(t) of g, polynomial.
    pub gamma_t: Vec<MultiPoly>,
    /// Unit field components e^k(t) (constant: e = ∂/∂u_{n−1} transported).
    pub e_t: Vec<MultiPoly>,
}

impl FlatChart {
    /// g^{ij}(t) (0-based).
    pub fn g(&self, i: usize, j: usize) -> &MultiPoly {
        &self.g_t[i * self.n + j]
    }

    /// η^{ij}(t) (0-based).
    pub fn eta(&self, i: usize, j: usize) -> &MultiPoly {
        &self.eta_t[i * self.n + j]
    }

    /// Γ^{ij}_k(t) (0-based).
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &MultiPoly {
        &self.gamma_t[(i * self.n + j) * self.n + k]
    }
}

/// The invariant τ spanning the degree-2(n−1) flat direction:
/// τ = (u_{n−1} − ((n−2)/(2(n−1))) u_1 u_{n−2} …) — in closed form only its
/// n = 2, 3 instances are needed as fixtures; this returns the normalized
/// flat coordinate direction (1/(4(n−1)))·(u_{n−1} − ((n−2)/(2(n−1)))·u_1·u_{n−2})
/// specialised to n = 3 where u_{n−2} = u_1.
pub fn tau_n3() -> MultiPoly {
    let uc = Chart::u_chart(3);
    let u1 = MultiPoly::var(&uc, 0);
    let u2 = MultiPoly::var(&uc, 1);
    let corr = u1.pow(2).scale(&q(1, 4));
    (&u2 - &corr).scale(&q(1, 8))
}

/// All exponent vectors over u_1,…,u_{max_var} with weighted degree `target`
/// (weights 2·index).
fn weighted_monomials(n: usize, max_var: usize, target: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut exp = vec![0u32; n];
    fn rec(exp: &mut Vec<u32>, var: usize, max_var: usize, remaining: i64, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(exp.clone());
            return;
        }
        if var >= max_var || remaining < 0 {
            return;
        }
        let w = 2 * (var as i64 + 1);
        let max_e = remaining / w;
        for e in (0..=max_e).rev() {
            exp[var] = e as u32;
            rec(exp, var + 1, max_var, remaining - e * w, out);
        }
        exp[var] = 0;
    }
    rec(&mut exp, 0, max_var, target, &mut out);
    out
}

/// Covariant Christoffel symbols Γ^c_{ab}(η) in the orbit chart, polynomial:
/// Γ^c_{ab} = −Σ_i η_{ai} a^{ic}_b where a are the contravariant symbols of
/// η (the u_{n−1}-derivative of those of g) and η_{ai} is the polynomial
/// inverse of η^{ai}.
fn eta_covariant_christoffel(
    pencil: &PencilData,
    gamma_g: &crate::pencil::ChristoffelU,
) -> Result<Vec<MultiPoly>> {
    let n = pencil.n;
    let uc = pencil.u_chart.clone();
    // Polynomial inverse of η (anti-triangular with constant anti-diagonal).
    let eta_m = ExactMatrix::from_fn(n, n, |i, j| RatFun::from_poly(pencil.eta(i, j).clone()));
    let eta_inv = eta_m.inverse()?;
    let eta_cov: Vec<MultiPoly> = (0..n * n)
        .map(|idx| {
            eta_inv
                .get(idx / n, idx % n)
                .as_poly()
                .cloned()
                .ok_or_else(|| Error::Internal("η inverse not polynomial".into()))
        })
        .collect::<Result<_>>()?;
    // a^{ic}_b = ∂Γ^{ic}_b / ∂u_{n−1}.
    let mut out = vec![MultiPoly::zero(&uc); n * n * n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut acc = MultiPoly::zero(&uc);
                for i in 0..n {
                    let aicb = gamma_g.get(i, c, b).derivative(n - 2);
                    acc = &acc + &(&eta_cov[a * n + i] * &aicb);
                }
                out[(c * n + a) * n + b] = -&acc;
            }
        }
    }
    Ok(out)
}

/// Solve ∇η d t = 0 for t = u_k + Σ λ_α u^α with the ansatz monomials of
/// weighted degree 2(k+1) in u_1,…,u_k (0-based k).
fn flat_function(
    pencil: &PencilData,
    gamma_eta_cov: &[MultiPoly],
    k: usize,
) -> Result<MultiPoly> {
    let n = pencil.n;
    let uc = pencil.u_chart.clone();
    let gcov = |c: usize, a: usize, b: usize| &gamma_eta_cov[(c * n + a) * n + b];

    // Residual of the flatness equation for a candidate function.
    let residual = |f: &MultiPoly, a: usize, b: usize| -> MultiPoly {
        let mut r = f.derivative(a).derivative(b);
        for c in 0..n {
            r = &r - &(gcov(c, a, b) * &f.derivative(c));
        }
        r
    };

    let ansatz = weighted_monomials(n, k, 2 * (k as i64 + 1));
    let base = MultiPoly::var(&uc, k);
    let cols: Vec<MultiPoly> = ansatz
        .iter()
        .map(|e| {
            let mut m = MultiPoly::zero(&uc);
            m.add_term(Monomial(e.clone()), ExactScalar::one());
            m
        })
        .collect();

    // Assemble the linear system: rows are (a ≤ b, monomial) coefficient
    // equations, unknowns the λ_α.
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    let mut rhs: Vec<ExactScalar> = Vec::new();
    for a in 0..n {
        for b in a..n {
            let r0 = residual(&base, a, b);
            let r_cols: Vec<MultiPoly> = cols.iter().map(|m| residual(m, a, b)).collect();
            let mut monos: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
            for (m, _) in &r0.terms {
                monos.insert(m.clone());
            }
            for rc in &r_cols {
                for (m, _) in &rc.terms {
                    monos.insert(m.clone());
                }
            }
            for m in monos {
                let row: Vec<ExactScalar> = r_cols
                    .iter()
                    .map(|rc| rc.terms.get(&m).cloned().unwrap_or_else(ExactScalar::zero))
                    .collect();
                rhs.push(-r0.terms.get(&m).cloned().unwrap_or_else(ExactScalar::zero));
                rows.push(row);
            }
        }
    }
    let lambda = match solve_linear(&rows, &rhs) {
        LinearSolution::Unique(x) => x,
        LinearSolution::Parametric { .. } => {
            return Err(Error::InconsistentSystem(format!(
                "flat function for t_{} is not unique",
                k + 1
            )))
        }
        LinearSolution::Inconsistent => {
            return Err(Error::InconsistentSystem(format!(
                "no flat function of the form u_{} + correction",
                k + 1
            )))
        }
    };
    let mut t = base;
    for (lam, col) in lambda.iter().zip(&cols) {
        t = &t + &col.scale(lam);
    }
    Ok(t)
}

/// Transform a contravariant 2-tensor from the u-chart to the t-chart.
pub fn transform_cometric(
    g_u: &[MultiPoly],
    t_of_u: &[MultiPoly],
    u_of_t: &[MultiPoly],
) -> Result<Vec<MultiPoly>> {
    let n = t_of_u.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = MultiPoly::zero(&t_of_u[0].chart);
            for a in 0..n {
                for b in 0..n {
                    let gab = &g_u[a * n + b];
                    if gab.is_zero() {
                        continue;
                    }
                    let term = &(&t_of_u[i].derivative(a) * &t_of_u[j].derivative(b)) * gab;
                    acc = &acc + &term;
                }
            }
            out.push(acc.substitute_full(u_of_t)?);
        }
    }
    Ok(out)
}

/// Transform contravariant Christoffel symbols from the u-chart to the
/// t-chart (one inhomogeneous Jacobian term; everything stays polynomial
/// because u(t) is a polynomial inverse):
/// Γ_t^{fd}_b = [ (∂t_f/∂u_k)(∂t_d/∂u_l) Γ_u^{kl}_j
///              + g_u^{ki} (∂t_f/∂u_k)(∂²t_d/∂u_i∂u_j) ] · (∂u_j/∂t_b) ∘ u(t).
pub fn transform_christoffel(
    g_u: &[MultiPoly],
    gamma_u: &[MultiPoly],
    t_of_u: &[MultiPoly],
    u_of_t: &[MultiPoly],
) -> Result<Vec<MultiPoly>> {
    let n = t_of_u.len();
    let uc = t_of_u[0].chart.clone();
    let tc = u_of_t[0].chart.clone();
    let gam_u = |i: usize, j: usize, k: usize| &gamma_u[(i * n + j) * n + k];
    let mut out = vec![MultiPoly::zero(&tc); n * n * n];
    for f in 0..n {
        for d in 0..n {
            // X_j(u) for this (f, d).
            let mut x: Vec<MultiPoly> = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = MultiPoly::zero(&uc);
                for k in 0..n {
                    let dtf = t_of_u[f].derivative(k);
                    if dtf.is_zero() {
                        continue;
                    }
                    let mut inner = MultiPoly::zero(&uc);
                    for l in 0..n {
                        inner = &inner + &(&t_of_u[d].derivative(l) * gam_u(k, l, j));
                    }
                    for i in 0..n {
                        let second = t_of_u[d].derivative(i).derivative(j);
                        if second.is_zero() {
                            continue;
                        }
                        inner = &inner + &(&g_u[k * n + i] * &second);
                    }
                    acc = &acc + &(&dtf * &inner);
                }
                x.push(acc.substitute_full(u_of_t)?);
            }
            for b in 0..n {
                let mut acc = MultiPoly::zero(&tc);
                for j in 0..n {
                    acc = &acc + &(&x[j] * &u_of_t[j].derivative(b));
                }
                out[(f * n + d) * n + b] = acc;
            }
        }
    }
    Ok(out)
}

/// Build the full flat chart (Saito normalization throughout).
pub fn flat_coordinates(n: usize) -> Result<FlatChart> {
    let pencil = build_pencil(n, Normalization::Saito)?;
    let gamma_g = contravariant_christoffel(n, Normalization::Saito)?;
    flat_coordinates_from(&pencil, &gamma_g)
}

/// Same as [`flat_coordinates`] but reusing an already-built pencil and its
/// Christoffel symbols (both in Saito normalization).
pub fn flat_coordinates_from(
    pencil: &PencilData,
    gamma_g: &crate::pencil::ChristoffelU,
) -> Result<FlatChart> {
    let n = pencil.n;
    assert_eq!(pencil.normalization, Normalization::Saito);
    let uc = pencil.u_chart.clone();
    let tc = Chart::t_chart(n);
    let gamma_eta_cov = eta_covariant_christoffel(pencil, gamma_g)?;

    // Unnormalized flat functions.
    let mut t_raw: Vec<MultiPoly> = Vec::with_capacity(n);
    for k in 0..n {
        t_raw.push(flat_function(pencil, &gamma_eta_cov, k)?);
    }

    // Pairing matrix N_ij = η(dt_i, dt_j); constant by flatness.
    let pairing = |ti: &MultiPoly, tj: &MultiPoly| -> Result<ExactScalar> {
        let mut acc = MultiPoly::zero(&uc);
        for a in 0..n {
            for b in 0..n {
                let e = pencil.eta(a, b);
                if e.is_zero() {
                    continue;
                }
                acc = &acc + &(&(&ti.derivative(a) * &tj.derivative(b)) * e);
            }
        }
        acc.as_constant()
            .ok_or_else(|| Error::Internal("η pairing of flat functions not constant".into()))
    };

    // Diagonal normalization.
    let mut scales = vec![ExactScalar::one(); n];
    for i in 0..n {
        let j = n - 1 - i; // partner index: (i+1) + (j+1) = n+1.
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {}
            std::cmp::Ordering::Greater => {
                let m = pairing(&t_raw[j], &t_raw[i])?;
                if m.is_zero() {
                    return Err(Error::SingularMatrix);
                }
                scales[i] = ExactScalar::one() / m;
            }
            std::cmp::Ordering::Equal => {
                let m = pairing(&t_raw[i], &t_raw[i])?;
                let root = rational_sqrt(&m).ok_or_else(|| {
                    Error::IrrationalNormalization(crate::scalar::format_rational(&m))
                })?;
                if root.is_zero() {
                    return Err(Error::SingularMatrix);
                }
                scales[i] = ExactScalar::one() / root;
            }
        }
    }
    let t_of_u: Vec<MultiPoly> = t_raw
        .iter()
        .zip(&scales)
        .map(|(t, s)| t.scale(s))
        .collect();

    // Invert the triangular polynomial map.
    let mut u_of_t: Vec<MultiPoly> = vec![MultiPoly::zero(&tc); n];
    for k in 0..n {
        // t_k = s_k (u_k + corr(u_1..u_{k-1}))  ⇒  u_k = t_k/s_k − corr(u(t)).
        let corr = &t_raw[k] - &MultiPoly::var(&uc, k);
        let mut images = u_of_t.clone(); // entries ≥ k unused by corr
        images[k] = MultiPoly::zero(&tc);
        let corr_t = corr.substitute_full(&images)?;
        u_of_t[k] = &MultiPoly::var(&tc, k).scale(&(ExactScalar::one() / &scales[k])) - &corr_t;
    }

    // Transport η, g, Γ and the unit field.
    let eta_u: Vec<MultiPoly> = (0..n * n)
        .map(|idx| pencil.eta(idx / n, idx % n).clone())
        .collect();
    let g_u: Vec<MultiPoly> = (0..n * n)
        .map(|idx| pencil.g(idx / n, idx % n).clone())
        .collect();
    let eta_t = transform_cometric(&eta_u, &t_of_u, &u_of_t)?;
    let g_t = transform_cometric(&g_u, &t_of_u, &u_of_t)?;
    let gamma_u: Vec<MultiPoly> = {
        let mut v = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    v.push(gamma_g.get(i, j, k).clone());
                }
            }
        }
        v
    };
    let gamma_t = transform_christoffel(&g_u, &gamma_u, &t_of_u, &u_of_t)?;
    let e_t: Vec<MultiPoly> = (0..n)
        .map(|k| t_of_u[k].derivative(n - 2).substitute_full(&u_of_t))
        .collect::<Result<_>>()?;

    // η(t) must be the anti-identity.
    for i in 0..n {
        for j in 0..n {
            let expect = if i + j == n - 1 {
                MultiPoly::one(&tc)
            } else {
                MultiPoly::zero(&tc)
            };
            if eta_t[i * n + j] != expect {
                return Err(Error::Internal(format!(
                    "η({},{}) in flat chart is {} instead of {}",
                    i + 1,
                    j + 1,
                    eta_t[i * n + j],
                    expect
                )));
            }
        }
    }

    Ok(FlatChart {
        n,
        u_chart: uc,
        t_chart: tc,
        t_of_u,
        u_of_t,
        scales,
        eta_t,
        g_t,
        gamma_t,
        e_t,
    })
}

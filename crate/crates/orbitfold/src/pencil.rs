//! The flat pencil of metrics on the B_n orbit space.
//!
//! The ambient cometric is g^{ij}(p) = (1−δ_ij)/(p_i p_j); it is flat with
//! covariant form g_ij = (1/(n−1) − δ_ij) p_i p_j and Levi-Civita symbols
//! Γ^i_{ii} = 1/p_i (all others zero). Pushed forward to the orbit chart
//! u_1,…,u_n it becomes polynomial, and its u_{n−1}-derivative η is a second
//! flat (constant-in-flat-coordinates) cometric; together they form a flat
//! pencil g − λη.
//!
//! Everything here is polynomial: the pushforward, the contravariant
//! Christoffel symbols (obtained by an exact fraction-free solve against the
//! squared-variable Jacobian), and the three contravariant flatness
//! conditions that characterise a flat pencil.

use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;

use crate::chart::Chart;
use crate::error::Result;
use crate::invariants::{random_regular_p_point, u_point_from_p, Rewriter};
use crate::matrix::solve_poly_system;
use crate::poly::MultiPoly;
use crate::scalar::{q, qi, ExactScalar};

/// Overall scaling of the pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Direct pushforward of (1−δ)/(p_i p_j); η^{ij} = 4(2n−i−j)u_{i+j−n−1}.
    Raw,
    /// Divided by 4(n−1) so that η has unit-size entries and g^{11} = n.
    Saito,
}

impl Normalization {
    /// The scalar the raw tensors are multiplied by.
    pub fn factor(&self, n: usize) -> ExactScalar {
        match self {
            Normalization::Raw => qi(1),
            Normalization::Saito => q(1, 4 * (n as i64 - 1)),
        }
    }
}

/// The pair (g, η) on the orbit chart, with polynomial entries.
#[derive(Debug, Clone)]
pub struct PencilData {
    /// Rank of the group.
    pub n: usize,
    /// Scaling convention.
    pub normalization: Normalization,
    /// Orbit chart u_1,…,u_n.
    pub u_chart: Arc<Chart>,
    /// Intersection cometric g^{ij}(u), row-major n×n.
    pub g: Vec<MultiPoly>,
    /// Saito cometric η^{ij}(u) = ∂g^{ij}/∂u_{n−1}, row-major n×n.
    pub eta: Vec<MultiPoly>,
}

impl PencilData {
    /// g^{ij}(u) (0-based indices).
    pub fn g(&self, i: usize, j: usize) -> &MultiPoly {
        &self.g[i * self.n + j]
    }

    /// η^{ij}(u) (0-based indices).
    pub fn eta(&self, i: usize, j: usize) -> &MultiPoly {
        &self.eta[i * self.n + j]
    }
}

/// Squared-variable scaffolding shared by the pushforward and the
/// Christoffel solve: u_k = e_k(q), its first and second q-derivatives, and
/// the rewriter back to the u-chart.
pub(crate) struct QFrame {
    pub rewriter: Rewriter,
    /// U[k][e] = ∂u_{k+1}/∂q_{e+1} in the q-chart.
    pub du: Vec<Vec<MultiPoly>>,
    /// V[k][c][e] = ∂²u_{k+1}/∂q_{c+1}∂q_{e+1}.
    pub ddu: Vec<Vec<Vec<MultiPoly>>>,
}

impl QFrame {
    pub fn new(n: usize) -> QFrame {
        let rewriter = Rewriter::new(&Chart::p_chart(n));
        let qc = rewriter.q_chart.clone();
        let qs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&qc, i)).collect();
        // Elementary symmetric polynomials of q.
        let mut elem: Vec<MultiPoly> = vec![MultiPoly::zero(&qc); n + 1];
        elem[0] = MultiPoly::one(&qc);
        for v in &qs {
            for k in (1..=n).rev() {
                let add = &elem[k - 1] * v;
                elem[k] = &elem[k] + &add;
            }
        }
        let du: Vec<Vec<MultiPoly>> = (1..=n)
            .map(|k| (0..n).map(|e| elem[k].derivative(e)).collect())
            .collect();
        let ddu: Vec<Vec<Vec<MultiPoly>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|c| (0..n).map(|e| du[k][e].derivative(c)).collect())
                    .collect()
            })
            .collect();
        QFrame { rewriter, du, ddu }
    }
}

/// Build the pencil (g, η) on the orbit chart.
///
/// In squared variables q_a = p_a² the pushforward is already polynomial:
/// g^{ij}(u(q)) = 4 Σ_{a≠b} (∂u_i/∂q_a)(∂u_j/∂q_b), which is symmetric in q
/// and rewrites exactly in u.
pub fn build_pencil(n: usize, normalization: Normalization) -> Result<PencilData> {
    assert!(n >= 2, "need n >= 2");
    let frame = QFrame::new(n);
    let qc = frame.rewriter.q_chart.clone();
    let factor = normalization.factor(n);
    let mut g = Vec::with_capacity(n * n);
    for i in 0..n {
        // Row sums S_i = Σ_a U^i_a let the a≠b sum be written as
        // Σ_{a,b} − Σ_{a=b} without a double loop.
        for j in 0..n {
            let mut full = MultiPoly::zero(&qc);
            let si: MultiPoly = frame.du[i]
                .iter()
                .fold(MultiPoly::zero(&qc), |acc, x| &acc + x);
            let sj: MultiPoly = frame.du[j]
                .iter()
                .fold(MultiPoly::zero(&qc), |acc, x| &acc + x);
            full = &full + &(&si * &sj);
            for a in 0..n {
                full = &full - &(&frame.du[i][a] * &frame.du[j][a]);
            }
            let gij = frame
                .rewriter
                .rewrite_q_in_u(&full.scale(&qi(4)))?
                .scale(&factor);
            g.push(gij);
        }
    }
    let eta: Vec<MultiPoly> = g.iter().map(|gij| gij.derivative(n - 2)).collect();
    Ok(PencilData {
        n,
        normalization,
        u_chart: frame.rewriter.u_chart.clone(),
        g,
        eta,
    })
}

/// Closed form of η^{ij}(u): 4(2n−i−j)·u_{i+j−n−1} (u_0 = 1, out-of-range
/// indices give 0), times the normalization factor.
pub fn eta_closed_form(n: usize, normalization: Normalization) -> Vec<MultiPoly> {
    let u_chart = Chart::u_chart(n);
    let factor = normalization.factor(n);
    let mut eta = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let k = i as i64 + j as i64 - n as i64 - 1;
            let coeff = qi(4 * (2 * n as i64 - i as i64 - j as i64)) * &factor;
            let entry = if k < 0 || coeff.is_zero() {
                MultiPoly::zero(&u_chart)
            } else if k == 0 {
                MultiPoly::constant(&u_chart, coeff)
            } else {
                MultiPoly::var(&u_chart, k as usize - 1).scale(&coeff)
            };
            eta.push(entry);
        }
    }
    eta
}

/// Contravariant Christoffel symbols Γ^{ij}_k(u) of g, polynomial entries.
#[derive(Debug, Clone)]
pub struct ChristoffelU {
    /// Rank of the group.
    pub n: usize,
    /// Scaling convention (matches the pencil it belongs to).
    pub normalization: Normalization,
    /// Orbit chart.
    pub u_chart: Arc<Chart>,
    comps: Vec<MultiPoly>,
}

impl ChristoffelU {
    /// Γ^{ij}_k (0-based indices).
    pub fn get(&self, i: usize, j: usize, k: usize) -> &MultiPoly {
        &self.comps[(i * self.n + j) * self.n + k]
    }
}

/// Compute Γ^{ij}_k(u) exactly.
///
/// In flat ambient coordinates the contravariant symbols transform with one
/// inhomogeneous Jacobian term; in squared variables everything ambient
/// cancels down to the linear systems
///   Σ_k Γ^{ij}_k(u) ∂u_k/∂q_e = 4 Σ_{a≠c} (∂u_i/∂q_a)(∂²u_j/∂q_c∂q_e),
/// one per e, solved fraction-free over the polynomial ring. The exact
/// divisions double as a proof that the symbols are polynomial.
pub fn contravariant_christoffel(
    n: usize,
    normalization: Normalization,
) -> Result<ChristoffelU> {
    let frame = QFrame::new(n);
    let qc = frame.rewriter.q_chart.clone();
    let factor = normalization.factor(n);

    // Coefficient matrix M[e][k] = ∂u_{k+1}/∂q_{e+1}.
    let m: Vec<Vec<MultiPoly>> = (0..n)
        .map(|e| (0..n).map(|k| frame.du[k][e].clone()).collect())
        .collect();

    // Right-hand sides, one column per (i,j).
    let mut rhs = Vec::with_capacity(n * n);
    for i in 0..n {
        let si: MultiPoly = frame.du[i]
            .iter()
            .fold(MultiPoly::zero(&qc), |acc, x| &acc + x);
        for j in 0..n {
            let col: Vec<MultiPoly> = (0..n)
                .map(|e| {
                    let mut acc = MultiPoly::zero(&qc);
                    for c in 0..n {
                        // Σ_{a≠c} U^i_a = S_i − U^i_c.
                        let s = &si - &frame.du[i][c];
                        acc = &acc + &(&s * &frame.ddu[j][c][e]);
                    }
                    acc.scale(&qi(4))
                })
                .collect();
            rhs.push(col);
        }
    }

    let solutions = solve_poly_system(&m, &rhs)?;
    let mut comps = Vec::with_capacity(n * n * n);
    for col in &solutions {
        for x in col {
            comps.push(frame.rewriter.rewrite_q_in_u(x)?.scale(&factor));
        }
    }
    Ok(ChristoffelU {
        n,
        normalization,
        u_chart: frame.rewriter.u_chart.clone(),
        comps,
    })
}

/// How to verify the flatness conditions.
#[derive(Debug, Clone, Copy)]
pub enum FlatnessMode {
    /// Full polynomial identities.
    Symbolic,
    /// Identities instantiated at sample orbit points of regular ambient
    /// points (the pencil parameter stays symbolic).
    Points {
        /// Number of sample points.
        count: usize,
        /// RNG seed.
        seed: u64,
    },
}

/// Verify that g − λη is a flat pencil via the three contravariant
/// conditions, with λ symbolic (so g alone, η alone and every member of the
/// pencil are covered at once):
///   (i)   ∂_k g_λ^{ij} = Γ_λ^{ij}_k + Γ_λ^{ji}_k
///   (ii)  g_λ^{is} Γ_λ^{jk}_s = g_λ^{js} Γ_λ^{ik}_s
///   (iii) g_λ^{is}(∂_s Γ_λ^{jk}_l − ∂_l Γ_λ^{jk}_s)
///         = Γ_λ^{ij}_s Γ_λ^{sk}_l − Γ_λ^{ik}_s Γ_λ^{sj}_l
/// where Γ_λ = Γ − λ·∂Γ/∂u_{n−1}.
pub fn verify_flat_pencil(
    pencil: &PencilData,
    gamma: &ChristoffelU,
    mode: FlatnessMode,
) -> Result<bool> {
    let n = pencil.n;
    assert_eq!(gamma.n, n);
    let lam_chart = pencil.u_chart.extended(&["lam"]);
    let lam = MultiPoly::var_named(&lam_chart, "lam")?;

    // Pencil members with symbolic λ.
    let with_lam = |f: &MultiPoly| -> Result<MultiPoly> {
        let a = f.embed(&lam_chart)?;
        let b = f.derivative(n - 2).embed(&lam_chart)?;
        Ok(&a - &(&b * &lam))
    };
    let mut g = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            g.push(with_lam(pencil.g(i, j))?);
        }
    }
    let mut gam = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                gam.push(with_lam(gamma.get(i, j, k))?);
            }
        }
    }
    let gat = |i: usize, j: usize, k: usize| &gam[(i * n + j) * n + k];
    let g_at = |i: usize, j: usize| &g[i * n + j];

    // ∂_s of every symbol, needed by condition (iii).
    let dgam: Vec<Vec<MultiPoly>> = (0..n)
        .map(|s| gam.iter().map(|x| x.derivative(s)).collect())
        .collect();
    let dgat = |s: usize, i: usize, j: usize, k: usize| &dgam[s][(i * n + j) * n + k];

    // Optional restriction to sample points (λ stays a variable).
    let instantiate: Box<dyn Fn(&MultiPoly) -> Result<MultiPoly>> = match mode {
        FlatnessMode::Symbolic => Box::new(|f: &MultiPoly| Ok(f.clone())),
        FlatnessMode::Points { count, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<Vec<ExactScalar>> = (0..count)
                .map(|_| u_point_from_p(&random_regular_p_point(n, &mut rng)))
                .collect();
            let lam_only = Chart::new("lam", vec![("lam".into(), 0)]);
            let lam_var = MultiPoly::var(&lam_only, 0);
            Box::new(move |f: &MultiPoly| {
                // All sampled instances must vanish; pack them into one
                // polynomial in fresh variables? Simpler: concatenate checks.
                let mut acc_nonzero = MultiPoly::zero(&lam_only);
                for pt in &points {
                    let mut images: Vec<MultiPoly> = pt
                        .iter()
                        .map(|v| MultiPoly::constant(&lam_only, v.clone()))
                        .collect();
                    images.push(lam_var.clone());
                    let inst = f.substitute_full(&images)?;
                    if !inst.is_zero() {
                        acc_nonzero = inst;
                    }
                }
                Ok(acc_nonzero)
            })
        }
    };

    // (i) metric compatibility.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = g_at(i, j).derivative(k);
                let rhs = gat(i, j, k) + gat(j, i, k);
                if !instantiate(&(&lhs - &rhs))?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    // (ii) symmetry of the product g·Γ.
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut diff = MultiPoly::zero(&lam_chart);
                for s in 0..n {
                    diff = &diff + &(&(g_at(i, s) * gat(j, k, s)) - &(g_at(j, s) * gat(i, k, s)));
                }
                if !instantiate(&diff)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    // (iii) zero curvature.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = MultiPoly::zero(&lam_chart);
                    for s in 0..n {
                        let d = &*dgat(s, j, k, l) - &*dgat(l, j, k, s);
                        acc = &acc + &(g_at(i, s) * &d);
                        acc = &acc - &(gat(i, j, s) * gat(s, k, l));
                        acc = &acc + &(gat(i, k, s) * gat(s, j, l));
                    }
                    if !instantiate(&acc)?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Verify quasihomogeneity of the pencil under the Euler field
/// E = Σ (i/(n−1)) u_i ∂_i and the unit direction e = ∂/∂u_{n−1}:
///   L_E g = (d−1) g,  L_E η = (d−2) η,  L_e g = η,  L_e η = 0,
/// with d = 1 − 2/(n−1).
pub fn verify_quasihomogeneity(pencil: &PencilData) -> bool {
    let n = pencil.n;
    let euler = |f: &MultiPoly| -> MultiPoly {
        let mut acc = MultiPoly::zero(&pencil.u_chart);
        for i in 0..n {
            let w = q((i + 1) as i64, n as i64 - 1);
            let term = &MultiPoly::var(&pencil.u_chart, i) * &f.derivative(i);
            acc = &acc + &term.scale(&w);
        }
        acc
    };
    let d_minus_1 = q(-2, n as i64 - 1);
    let d_minus_2 = q(-(n as i64 + 1), n as i64 - 1);
    for i in 0..n {
        for j in 0..n {
            let slot = q((i + j + 2) as i64, n as i64 - 1);
            // L_E T^{ij} = E(T^{ij}) − ((i+j+2)/(n−1)) T^{ij} for a (2,0)
            // tensor with the diagonal Euler field above.
            let lie_g = &euler(pencil.g(i, j)) - &pencil.g(i, j).scale(&slot);
            if lie_g != pencil.g(i, j).scale(&d_minus_1) {
                return false;
            }
            let lie_eta = &euler(pencil.eta(i, j)) - &pencil.eta(i, j).scale(&slot);
            if lie_eta != pencil.eta(i, j).scale(&d_minus_2) {
                return false;
            }
            if &pencil.g(i, j).derivative(n - 2) != pencil.eta(i, j) {
                return false;
            }
            if !pencil.eta(i, j).derivative(n - 2).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Verify the generating identity for the raw intersection cometric:
///   (1/4) Σ_{ij} g^{ij}(u(p)) x^{n−i} y^{n−j}
///     = h′(x)h′(y) − (h′(y)h(x) − h′(x)h(y))/(x − y),
/// with h(x) = Π_l (x + p_l²), as a polynomial identity (multiplied through
/// by x − y).
pub fn generating_identity_check(n: usize) -> Result<bool> {
    let pencil = build_pencil(n, Normalization::Raw)?;
    let chart = Chart::p_chart(n).extended(&["x", "y"]);
    let x = MultiPoly::var_named(&chart, "x")?;
    let y = MultiPoly::var_named(&chart, "y")?;

    // Basic invariants embedded into the extended chart.
    let basics: Vec<MultiPoly> = crate::invariants::elementary_invariants(n)
        .iter()
        .map(|b| b.embed(&chart))
        .collect::<Result<_>>()?;

    // h and h′ in x; same in y.
    let h_of = |t: &MultiPoly| -> MultiPoly {
        let mut h = MultiPoly::one(&chart);
        for l in 0..n {
            let p = MultiPoly::var(&chart, l);
            h = &h * &(t + &(&p * &p));
        }
        h
    };
    let hx = h_of(&x);
    let hy = h_of(&y);
    let x_i = chart.var_index("x")?;
    let y_i = chart.var_index("y")?;
    let hx_p = hx.derivative(x_i);
    let hy_p = hy.derivative(y_i);

    // LHS · (x − y).
    let mut lhs = MultiPoly::zero(&chart);
    for i in 0..n {
        for j in 0..n {
            let gij = pencil.g(i, j).substitute_full(&basics)?;
            let mono = &x.pow((n - 1 - i) as u32) * &y.pow((n - 1 - j) as u32);
            lhs = &lhs + &(&gij * &mono);
        }
    }
    let xmy = &x - &y;
    lhs = &lhs.scale(&q(1, 4)) * &xmy;

    // RHS · (x − y).
    let rhs = &(&(&hx_p * &hy_p) * &xmy) - &(&(&hy_p * &hx) - &(&hx_p * &hy));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pencil_n2_matches_hand_computation() {
        let p = build_pencil(2, Normalization::Raw).unwrap();
        let uc = p.u_chart.clone();
        let u1 = MultiPoly::var(&uc, 0);
        let u2 = MultiPoly::var(&uc, 1);
        assert_eq!(p.g(0, 0), &MultiPoly::constant(&uc, qi(8)));
        assert_eq!(p.g(0, 1), &u1.scale(&qi(4)));
        assert_eq!(p.g(1, 0), &u1.scale(&qi(4)));
        assert_eq!(p.g(1, 1), &u2.scale(&qi(8)));
        assert_eq!(p.eta(0, 0), &MultiPoly::zero(&uc));
        assert_eq!(p.eta(0, 1), &MultiPoly::constant(&uc, qi(4)));
        assert_eq!(p.eta(1, 1), &MultiPoly::zero(&uc));
    }

    #[test]
    fn eta_matches_closed_form_n3() {
        let p = build_pencil(3, Normalization::Raw).unwrap();
        let closed = eta_closed_form(3, Normalization::Raw);
        assert_eq!(p.eta, closed);
        let ps = build_pencil(3, Normalization::Saito).unwrap();
        let closed_s = eta_closed_form(3, Normalization::Saito);
        assert_eq!(ps.eta, closed_s);
    }

    #[test]
    fn g11_value() {
        for n in 2..=4 {
            let p = build_pencil(n, Normalization::Raw).unwrap();
            let expect = MultiPoly::constant(&p.u_chart, qi(4 * (n as i64) * (n as i64 - 1)));
            assert_eq!(p.g(0, 0), &expect);
            let ps = build_pencil(n, Normalization::Saito).unwrap();
            let expect_s = MultiPoly::constant(&ps.u_chart, qi(n as i64));
            assert_eq!(ps.g(0, 0), &expect_s);
        }
    }

    #[test]
    fn generating_identity_small_n() {
        assert!(generating_identity_check(2).unwrap());
        assert!(generating_identity_check(3).unwrap());
    }

    #[test]
    fn christoffel_flatness_and_quasihomogeneity_n3() {
        let p = build_pencil(3, Normalization::Raw).unwrap();
        let gamma = contravariant_christoffel(3, Normalization::Raw).unwrap();
        assert!(verify_flat_pencil(&p, &gamma, FlatnessMode::Symbolic).unwrap());
        assert!(verify_quasihomogeneity(&p));
        // Γ^{ij}_k homogeneous of weighted degree 2(i+j−k)−4, at most linear
        // in u_{n−1}.
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let gam = gamma.get(i, j, k);
                    if gam.is_zero() {
                        continue;
                    }
                    assert_eq!(
                        gam.homogeneous_weighted_degree(),
                        Some(2 * (i as i64 + j as i64 - k as i64) - 2)
                    );
                    assert!(gam.degree_in(1) <= 1);
                }
            }
        }
    }

    #[test]
    fn point_mode_agrees_with_symbolic_n3() {
        let p = build_pencil(3, Normalization::Raw).unwrap();
        let gamma = contravariant_christoffel(3, Normalization::Raw).unwrap();
        assert!(verify_flat_pencil(&p, &gamma, FlatnessMode::Points { count: 4, seed: 11 }).unwrap());
    }
}

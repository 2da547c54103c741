//! The dual-product pipeline on the rank-2 orbit space.
//!
//! A weighted Dunkl-type product on the ambient space is assembled from the
//! mirror arrangement of B_n: every mirror contributes a rank-one projection
//! scaled by an orbit-constant weight, and the normalized weights make the
//! Euler field the unit of the product. For n = 2 the full pipeline is
//! implemented: the natural connection whose flat coordinates are a
//! parameterized basis of invariants, the induced product with a chosen
//! constant unit, the compatibility residual that singles out the admissible
//! weight/parameter families, the dual connection, and the vector potential
//! in the flat chart. For n = 2, 3, 4 the bridge between the normalized
//! arrangement product and the off-diagonal intersection form is verified
//! exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::matrix::{solve_linear_ratfun, ExactMatrix, RatSolution};
use crate::poly::MultiPoly;
use crate::ratfun::RatFun;
use crate::scalar::{q, qi, ExactScalar};

/// Orbit label of a mirror under the group action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbit {
    /// Coordinate hyperplanes p_i = 0.
    I,
    /// Hyperplanes p_i ± p_j = 0.
    II,
}

/// A mirror of the arrangement: the defining linear form and its orbit.
#[derive(Debug, Clone)]
pub struct Mirror {
    /// Coefficients of the linear form α(p) = Σ α_a p_a.
    pub alpha: Vec<ExactScalar>,
    /// Orbit label.
    pub orbit: Orbit,
}

/// The mirror arrangement of B_n: n coordinate hyperplanes (orbit I) and
/// n(n−1) hyperplanes p_i ± p_j (orbit II, both signs for each pair).
pub fn mirrors(n: usize) -> Vec<Mirror> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut alpha = vec![ExactScalar::zero(); n];
        alpha[i] = qi(1);
        out.push(Mirror { alpha, orbit: Orbit::I });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for sign in [1i64, -1] {
                let mut alpha = vec![ExactScalar::zero(); n];
                alpha[i] = qi(1);
                alpha[j] = qi(sign);
                out.push(Mirror { alpha, orbit: Orbit::II });
            }
        }
    }
    out
}

/// Structure constants c*^i_{jk} = Σ_H σ_H α^i α_j α_k / (|α|² α(p)) of the
/// weighted arrangement product, flattened as i·n² + j·n + k. The weights are
/// constant on each orbit; they may be symbolic (rational functions in
/// parameter variables of the chart).
pub fn dual_product(
    chart: &Arc<Chart>,
    n: usize,
    sigma_i: &RatFun,
    sigma_ii: &RatFun,
) -> Result<Vec<RatFun>> {
    if sigma_i.is_zero() && sigma_ii.is_zero() {
        return Err(Error::InvalidParameter("all mirror weights are zero".into()));
    }
    let mut c = vec![RatFun::zero(chart); n * n * n];
    for m in mirrors(n) {
        let sigma = match m.orbit {
            Orbit::I => sigma_i,
            Orbit::II => sigma_ii,
        };
        if sigma.is_zero() {
            continue;
        }
        let norm: ExactScalar = m.alpha.iter().map(|a| a * a).sum();
        let mut alpha_p = MultiPoly::zero(chart);
        for (a, coef) in m.alpha.iter().enumerate() {
            alpha_p = &alpha_p + &MultiPoly::var(chart, a).scale(coef);
        }
        let pole = RatFun::new(MultiPoly::one(chart), alpha_p)?;
        let weighted = &(sigma * &pole);
        for i in 0..n {
            if m.alpha[i].is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let coef = &(&m.alpha[i] * &m.alpha[j]) * &m.alpha[k];
                    if coef.is_zero() {
                        continue;
                    }
                    let idx = i * n * n + j * n + k;
                    c[idx] = &c[idx] + &weighted.scale(&(coef / &norm));
                }
            }
        }
    }
    Ok(c)
}

/// Parameters of the rank-2 pipeline: mirror weights (x on orbit I, y on
/// orbit II, normalized internally), the invariant-basis parameter c, and
/// the constant components (e¹, e²) of the unit in the invariant basis.
#[derive(Debug, Clone)]
pub struct DualSetup {
    /// Ambient chart: p₁, p₂ plus any symbolic parameters.
    pub chart: Arc<Chart>,
    /// Orbit-I weight (before normalization).
    pub x: RatFun,
    /// Orbit-II weight (before normalization).
    pub y: RatFun,
    /// Invariant-basis parameter.
    pub c: RatFun,
    /// Unit components in the invariant basis (∂/∂u₁, ∂/∂u₂).
    pub e_u: [RatFun; 2],
}

impl DualSetup {
    /// Fully symbolic weights and parameter, unit e = ∂/∂u₂.
    pub fn symbolic() -> Result<DualSetup> {
        let chart = Chart::p_chart(2).extended(&["x", "y", "c"]);
        let var = |name: &str| -> Result<RatFun> {
            Ok(RatFun::from_poly(MultiPoly::var_named(&chart, name)?))
        };
        Ok(DualSetup {
            x: var("x")?,
            y: var("y")?,
            c: var("c")?,
            e_u: [RatFun::zero(&chart), RatFun::one(&chart)],
            chart,
        })
    }

    /// Family 1: equal weights, e = ∂/∂u₂, symbolic parameter c.
    pub fn family1() -> Result<DualSetup> {
        let chart = Chart::p_chart(2).extended(&["c"]);
        let c = RatFun::from_poly(MultiPoly::var_named(&chart, "c")?);
        Ok(DualSetup {
            x: RatFun::one(&chart),
            y: RatFun::one(&chart),
            c,
            e_u: [RatFun::zero(&chart), RatFun::one(&chart)],
            chart,
        })
    }

    /// Family 2: weight zero on the coordinate axes, c = 0, e = ∂/∂u₁.
    pub fn family2() -> DualSetup {
        let chart = Chart::p_chart(2);
        DualSetup {
            x: RatFun::zero(&chart),
            y: RatFun::one(&chart),
            c: RatFun::zero(&chart),
            e_u: [RatFun::one(&chart), RatFun::zero(&chart)],
            chart,
        }
    }

    /// Family 3: weight zero on the diagonal mirrors, c = −1/4, e = ∂/∂u₁.
    pub fn family3() -> DualSetup {
        let chart = Chart::p_chart(2);
        DualSetup {
            x: RatFun::one(&chart),
            y: RatFun::zero(&chart),
            c: RatFun::constant(&chart, q(-1, 4)),
            e_u: [RatFun::one(&chart), RatFun::zero(&chart)],
            chart,
        }
    }

    /// Numeric parameters (for off-family falsification points).
    pub fn numeric(
        x: ExactScalar,
        y: ExactScalar,
        c: ExactScalar,
        e1: ExactScalar,
        e2: ExactScalar,
    ) -> DualSetup {
        let chart = Chart::p_chart(2);
        DualSetup {
            x: RatFun::constant(&chart, x),
            y: RatFun::constant(&chart, y),
            c: RatFun::constant(&chart, c),
            e_u: [RatFun::constant(&chart, e1), RatFun::constant(&chart, e2)],
            chart,
        }
    }

    /// Normalized orbit weights (σ_I, σ_II) = (x, y)/(x + y).
    pub fn weights(&self) -> Result<(RatFun, RatFun)> {
        let total = &self.x + &self.y;
        if total.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let inv = total.inverse()?;
        Ok((&self.x * &inv, &self.y * &inv))
    }

    /// The weighted arrangement product for these weights.
    pub fn dual_product(&self) -> Result<Vec<RatFun>> {
        let (si, sii) = self.weights()?;
        dual_product(&self.chart, 2, &si, &sii)
    }

    /// The parameterized basic invariants u₁ = p₁² + p₂²,
    /// u₂ = p₁²p₂² + c·u₁².
    pub fn invariants(&self) -> [RatFun; 2] {
        let p1 = RatFun::from_poly(MultiPoly::var(&self.chart, 0));
        let p2 = RatFun::from_poly(MultiPoly::var(&self.chart, 1));
        let u1 = &(&p1 * &p1) + &(&p2 * &p2);
        let u2 = &(&(&p1 * &p1) * &(&p2 * &p2)) + &(&self.c * &(&u1 * &u1));
        [u1, u2]
    }

    /// Jacobian J_{c,k} = ∂u_c/∂p_k.
    pub fn jacobian(&self) -> ExactMatrix {
        let u = self.invariants();
        ExactMatrix::from_fn(2, 2, |c, k| u[c].derivative(k))
    }
}

/// Christoffel symbols Γ^k_{ij} (flattened k·4 + i·2 + j) of the torsionless
/// connection whose flat coordinates are the basic invariants:
/// Γ^k_{ij} = (∂p_k/∂u_c) ∂²u_c/∂p_i∂p_j.
pub fn natural_connection(setup: &DualSetup) -> Result<Vec<RatFun>> {
    let jinv = setup.jacobian().inverse()?;
    let u = setup.invariants();
    let mut gamma = vec![RatFun::zero(&setup.chart); 8];
    for i in 0..2 {
        for j in 0..2 {
            for c in 0..2 {
                let hess = u[c].derivative(i).derivative(j);
                for k in 0..2 {
                    let idx = k * 4 + i * 2 + j;
                    gamma[idx] = &gamma[idx] + &(jinv.get(k, c) * &hess);
                }
            }
        }
    }
    Ok(gamma)
}

/// The chosen constant unit, expressed in the ambient chart:
/// e^i(p) = (∂p_i/∂u_c) e^c.
pub fn unit_in_p(setup: &DualSetup) -> Result<[RatFun; 2]> {
    let jinv = setup.jacobian().inverse()?;
    let mut e = [RatFun::zero(&setup.chart), RatFun::zero(&setup.chart)];
    for (i, ei) in e.iter_mut().enumerate() {
        for c in 0..2 {
            *ei = &*ei + &(jinv.get(i, c) * &setup.e_u[c]);
        }
    }
    Ok(e)
}

/// The induced product c∘^i_{jk} = ((e·*)⁻¹)^i_s c*^s_{jk} with unit e.
pub fn product_from_dual(cstar: &[RatFun], e: &[RatFun]) -> Result<Vec<RatFun>> {
    let n = e.len();
    assert_eq!(cstar.len(), n * n * n);
    let chart = e[0].chart().clone();
    // Endomorphism (e·*)^i_k = c*^i_{jk} e^j.
    let estar = ExactMatrix::from_fn(n, n, |i, k| {
        let mut acc = RatFun::zero(&chart);
        for j in 0..n {
            acc = &acc + &(&cstar[i * n * n + j * n + k] * &e[j]);
        }
        acc
    });
    let inv = estar.inverse().map_err(|_| Error::SingularMatrix)?;
    let mut c = vec![RatFun::zero(&chart); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = i * n * n + j * n + k;
                for s in 0..n {
                    c[idx] = &c[idx] + &(inv.get(i, s) * &cstar[s * n * n + j * n + k]);
                }
            }
        }
    }
    Ok(c)
}

/// Antisymmetrized covariant derivative R^i_{jkl} = ∇_k c^i_{jl} − ∇_j c^i_{kl}
/// (flattened i·8 + j·4 + k·2 + l); zero iff the connection and the product
/// are compatible.
pub fn compatibility_residual(gamma: &[RatFun], c: &[RatFun]) -> Vec<RatFun> {
    let n = 2usize;
    let chart = c[0].chart().clone();
    let g = |k: usize, i: usize, j: usize| &gamma[k * 4 + i * 2 + j];
    let cc = |i: usize, j: usize, k: usize| &c[i * 4 + j * 2 + k];
    let nabla = |k: usize, i: usize, j: usize, l: usize| -> RatFun {
        let mut acc = cc(i, j, l).derivative(k);
        for s in 0..n {
            acc = &acc + &(g(i, k, s) * cc(s, j, l));
            acc = &acc - &(g(s, k, j) * cc(i, s, l));
            acc = &acc - &(g(s, k, l) * cc(i, j, s));
        }
        acc
    };
    let mut r = vec![RatFun::zero(&chart); 16];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    r[i * 8 + j * 4 + k * 2 + l] = &nabla(k, i, j, l) - &nabla(j, i, k, l);
                }
            }
        }
    }
    r
}

/// Build the full product/connection pair for a setup and report whether the
/// compatibility residual vanishes identically.
pub fn residual_is_zero(setup: &DualSetup) -> Result<bool> {
    let cstar = setup.dual_product()?;
    let e = unit_in_p(setup)?;
    let c = product_from_dual(&cstar, &e)?;
    let gamma = natural_connection(setup)?;
    Ok(compatibility_residual(&gamma, &c).iter().all(|r| r.is_zero()))
}

/// Reinterpret a rational function that is constant in the ambient
/// coordinates as one over `target`, matching parameter variables by name.
fn lift_params(f: &RatFun, target: &Arc<Chart>) -> Result<RatFun> {
    let src = f.chart().clone();
    let coords = src.coord_indices();
    for &ci in &coords {
        if f.num.degree_in(ci) != 0 || f.den.degree_in(ci) != 0 {
            return Err(Error::Internal(
                "parameter lift applied to a non-constant function".into(),
            ));
        }
    }
    let mut images = Vec::with_capacity(src.dim());
    for (idx, name) in src.vars.iter().enumerate() {
        if coords.contains(&idx) {
            images.push(RatFun::zero(target));
        } else {
            images.push(RatFun::from_poly(MultiPoly::var_named(target, name)?));
        }
    }
    f.substitute_full(&images)
}

/// Express the induced product in the flat chart of the basic invariants.
/// Returns (u-chart, components ĉ^i_{jk}(u) flattened i·4 + j·2 + k); each
/// component is a Laurent-type rational function with at most a simple pole
/// in u₂.
pub fn product_in_flat_chart(setup: &DualSetup) -> Result<(Arc<Chart>, Vec<RatFun>)> {
    let cstar = setup.dual_product()?;
    let e = unit_in_p(setup)?;
    let c = product_from_dual(&cstar, &e)?;
    let jac = setup.jacobian();
    let jinv = jac.inverse()?;
    // Pushforward: ĉ^i_{jk} = J_{i,a} c^a_{bc} (J⁻¹)_{b,j} (J⁻¹)_{c,k}.
    let mut hat = vec![RatFun::zero(&setup.chart); 8];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let mut acc = RatFun::zero(&setup.chart);
                for a in 0..2 {
                    for b in 0..2 {
                        for cx in 0..2 {
                            let term = &(&(jac.get(i, a) * &c[a * 4 + b * 2 + cx])
                                * jinv.get(b, j))
                                * jinv.get(cx, k);
                            acc = &acc + &term;
                        }
                    }
                }
                hat[i * 4 + j * 2 + k] = acc;
            }
        }
    }

    // The target chart: the invariants plus the parameters of the setup chart.
    let mut vars: Vec<(String, i64)> = vec![("u1".into(), 2), ("u2".into(), 4)];
    for (idx, name) in setup.chart.vars.iter().enumerate() {
        if !setup.chart.coord_indices().contains(&idx) {
            vars.push((name.clone(), 0));
        }
    }
    let uchart = Chart::new("udual", vars);
    let u = setup.invariants();
    // Images of the u-chart variables inside the ambient chart.
    let mut images: Vec<RatFun> = vec![u[0].clone(), u[1].clone()];
    for (idx, name) in setup.chart.vars.iter().enumerate() {
        if !setup.chart.coord_indices().contains(&idx) {
            images.push(RatFun::from_poly(MultiPoly::var_named(&setup.chart, name)?));
        }
    }

    // Sample ambient points for the interpolation rows (p₁² ≠ p₂², p ≠ 0).
    let samples: [(i64, i64); 8] =
        [(2, 3), (3, 5), (5, 7), (7, 11), (11, 13), (2, 7), (3, 11), (5, 13)];
    let at_point = |f: &RatFun, (a, b): (i64, i64)| -> Result<RatFun> {
        let mut imgs = Vec::with_capacity(setup.chart.dim());
        for (idx, name) in setup.chart.vars.iter().enumerate() {
            if setup.chart.coord_indices().contains(&idx) {
                let v = if idx == 0 { a } else { b };
                imgs.push(RatFun::constant(&setup.chart, qi(v)));
            } else {
                imgs.push(RatFun::from_poly(MultiPoly::var_named(&setup.chart, name)?));
            }
        }
        f.substitute_full(&imgs)
    };

    let mut out = vec![RatFun::zero(&uchart); 8];
    for (slot, target) in hat.iter().enumerate() {
        if target.is_zero() {
            continue;
        }
        // Weighted degree of the component (p-variables weigh 1, parameters 0).
        let dn = target
            .num
            .homogeneous_weighted_degree()
            .ok_or_else(|| Error::Internal("inhomogeneous product component".into()))?;
        let dd = target
            .den
            .homogeneous_weighted_degree()
            .ok_or_else(|| Error::Internal("inhomogeneous product component".into()))?;
        let d = dn - dd;
        // Candidate monomials u₁^a u₂^b with 2a + 4b = d, a ≥ 0, b ≥ −1.
        let mut monos: Vec<(i64, i64)> = Vec::new();
        let mut b = -1i64;
        while 4 * b <= d + 2 {
            let rem = d - 4 * b;
            if rem >= 0 && rem % 2 == 0 {
                monos.push((rem / 2, b));
            }
            b += 1;
        }
        if monos.is_empty() {
            return Err(Error::Internal(format!(
                "no flat-chart ansatz of weighted degree {d}"
            )));
        }
        let u1 = RatFun::from_poly(MultiPoly::var(&uchart, 0));
        let u2 = RatFun::from_poly(MultiPoly::var(&uchart, 1));
        let mono_u: Vec<RatFun> = monos
            .iter()
            .map(|&(a, b)| {
                let mut m = RatFun::one(&uchart);
                for _ in 0..a {
                    m = &m * &u1;
                }
                if b >= 0 {
                    for _ in 0..b {
                        m = &m * &u2;
                    }
                    Ok(m)
                } else {
                    &m / &u2
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mono_p: Vec<RatFun> = mono_u
            .iter()
            .map(|m| m.substitute_full(&images))
            .collect::<Result<Vec<_>>>()?;
        // Interpolate the coefficients from sample points, parameters symbolic.
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &pt in &samples {
            let row = mono_p
                .iter()
                .map(|m| at_point(m, pt))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
            rhs.push(at_point(target, pt)?);
        }
        let coeffs = match solve_linear_ratfun(&rows, &rhs) {
            RatSolution::Unique(c) => c,
            RatSolution::Parametric { particular, .. } => particular,
            RatSolution::Inconsistent => {
                return Err(Error::Internal(
                    "flat-chart interpolation inconsistent".into(),
                ))
            }
        };
        // Verify the interpolation symbolically.
        let mut recon = RatFun::zero(&setup.chart);
        for (cf, mp) in coeffs.iter().zip(&mono_p) {
            recon = &recon + &(cf * mp);
        }
        if &recon != target {
            return Err(Error::Internal(
                "flat-chart expression fails symbolic verification".into(),
            ));
        }
        let mut expr = RatFun::zero(&uchart);
        for (cf, mu) in coeffs.iter().zip(&mono_u) {
            expr = &expr + &(&lift_params(cf, &uchart)? * mu);
        }
        out[slot] = expr;
    }
    Ok((uchart, out))
}

/// Vector potential: F^i with ĉ^i_{jk} = ∂_j∂_k F^i in the flat chart,
/// recovered by Euler integration; requires every component polynomial.
pub fn vector_potential(setup: &DualSetup) -> Result<(Arc<Chart>, [MultiPoly; 2])> {
    let (uchart, hat) = product_in_flat_chart(setup)?;
    let w = [2i64, 4];
    let mut out = Vec::with_capacity(2);
    for i in 0..2 {
        // Weighted degree of F^i from any nonvanishing component.
        let mut wf = None;
        for j in 0..2 {
            for k in 0..2 {
                let comp = &hat[i * 4 + j * 2 + k];
                if comp.is_zero() {
                    continue;
                }
                let dn = comp.num.homogeneous_weighted_degree();
                let dd = comp.den.homogeneous_weighted_degree();
                if let (Some(a), Some(b)) = (dn, dd) {
                    let cand = a - b + w[j] + w[k];
                    match wf {
                        None => wf = Some(cand),
                        Some(prev) if prev != cand => {
                            return Err(Error::Integrability(
                                "inconsistent potential degree".into(),
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
        let wf = wf.ok_or_else(|| Error::Integrability("zero product".into()))?;
        // First Euler integration: F^i_j = Σ_k w_k u_k ĉ^i_{jk} / (wf − w_j).
        let mut f1 = Vec::with_capacity(2);
        for j in 0..2 {
            if wf == w[j] {
                return Err(Error::Integrability("resonant potential degree".into()));
            }
            let mut acc = RatFun::zero(&uchart);
            for k in 0..2 {
                let uk = RatFun::from_poly(MultiPoly::var(&uchart, k).scale(&qi(w[k])));
                acc = &acc + &(&uk * &hat[i * 4 + j * 2 + k]);
            }
            f1.push(acc.scale(&(qi(1) / qi(wf - w[j]))));
        }
        // Second Euler integration: F^i = Σ_j w_j u_j F^i_j / wf.
        let mut f = RatFun::zero(&uchart);
        for (j, fj) in f1.iter().enumerate() {
            let uj = RatFun::from_poly(MultiPoly::var(&uchart, j).scale(&qi(w[j])));
            f = &f + &(&uj * fj);
        }
        let f = f.scale(&(qi(1) / qi(wf)));
        // Verify second derivatives and polynomiality.
        for j in 0..2 {
            for k in 0..2 {
                if f.derivative(j).derivative(k) != hat[i * 4 + j * 2 + k] {
                    return Err(Error::Integrability(format!(
                        "vector potential F^{} fails ∂_{}∂_{} check",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        let fp = f
            .as_poly()
            .ok_or_else(|| Error::NotPolynomial("vector potential".into()))?
            .clone();
        out.push(fp);
    }
    let f2 = out.pop().unwrap();
    let f1 = out.pop().unwrap();
    Ok((uchart, [f1, f2]))
}

/// For the families with unit ∂/∂u₁: verify that the flat-chart product has
/// the hydrodynamic normal form (unit components, ĉ²₂₂ = 0, ĉ¹₂₂ = κ/u₂) and
/// return κ. After the positive diagonal rescaling u₂ → u₂/|κ| the only
/// non-unit entry is sign(κ)/u₂, so sign(κ) selects the branch.
pub fn nls_kappa(setup: &DualSetup) -> Result<ExactScalar> {
    let (uchart, hat) = product_in_flat_chart(setup)?;
    let one = RatFun::one(&uchart);
    let zero = RatFun::zero(&uchart);
    // Unit axiom ĉ^i_{1k} = δ^i_k (and symmetry ĉ^i_{k1}).
    for i in 0..2 {
        for k in 0..2 {
            let expect = if i == k { &one } else { &zero };
            if &hat[i * 4 + k] != expect || &hat[i * 4 + k * 2] != expect {
                return Err(Error::Internal("flat-chart unit axiom fails".into()));
            }
        }
    }
    if !hat[4 + 2 + 1].is_zero() {
        return Err(Error::Internal("ĉ²₂₂ does not vanish".into()));
    }
    let u2 = RatFun::from_poly(MultiPoly::var(&uchart, 1));
    let kappa = (&hat[0 * 4 + 2 + 1] * &u2)
        .as_constant()
        .ok_or_else(|| Error::Internal("ĉ¹₂₂ is not κ/u₂".into()))?;
    if kappa.is_zero() {
        return Err(Error::Internal("κ vanishes".into()));
    }
    Ok(kappa)
}

/// Extract, for a polynomial over an ambient chart with parameters, the map
/// (coordinate exponents) → coefficient polynomial in the parameters alone.
fn split_by_coords(p: &MultiPoly) -> BTreeMap<Vec<u32>, MultiPoly> {
    let chart = p.chart.clone();
    let coords = chart.coord_indices();
    let mut out: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
    for (mono, coef) in &p.terms {
        let mut key = Vec::with_capacity(coords.len());
        let mut rest = mono.clone();
        for &ci in coords.iter() {
            key.push(mono.0[ci]);
            rest.0[ci] = 0;
        }
        let entry = out.entry(key).or_insert_with(|| MultiPoly::zero(&chart));
        entry.add_term(rest, coef.clone());
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Solve for the dual connection b^i_{jk} (flattened i·4 + j·2 + k) from the
/// flat-unit condition on the Euler field (b^i_{jk} p_k = −δ^i_j) and the
/// exterior-derivative compatibility with the natural connection:
/// Σ_s (Γ−b)^i_{ks} ĉ^s_{ml} = Σ_s (Γ−b)^i_{ls} ĉ^s_{mk}.
/// The ansatz is b^i_{jk} = N^i_{jk}(p)/(p₁p₂(p₁²−p₂²)) with N cubic and
/// symmetric in (j,k).
pub fn dual_connection(setup: &DualSetup) -> Result<Vec<RatFun>> {
    let chart = setup.chart.clone();
    let p1 = MultiPoly::var(&chart, 0);
    let p2 = MultiPoly::var(&chart, 1);
    let disc = &p1.pow(2) - &p2.pow(2);
    let dpoly = &(&p1 * &p2) * &disc;

    let cstar = setup.dual_product()?;
    let e = unit_in_p(setup)?;
    let c = product_from_dual(&cstar, &e)?;
    let cpoly: Vec<MultiPoly> = c
        .iter()
        .map(|f| {
            f.as_poly()
                .cloned()
                .ok_or_else(|| Error::NotPolynomial("induced product".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = natural_connection(setup)?;
    // G^k_{ij} = Γ^k_{ij} · D must clear the denominator.
    let dfun = RatFun::from_poly(dpoly.clone());
    let gpoly: Vec<MultiPoly> = gamma
        .iter()
        .map(|f| {
            (f * &dfun)
                .as_poly()
                .cloned()
                .ok_or_else(|| Error::NotPolynomial("natural connection".into()))
        })
        .collect::<Result<Vec<_>>>()?;

    // Unknown layout: i ∈ {0,1}, symmetric pair s ∈ {(0,0),(0,1),(1,1)},
    // cubic monomial m ∈ {p₁³, p₁²p₂, p₁p₂², p₂³} → 24 unknowns.
    let pairs = [(0usize, 0usize), (0, 1), (1, 1)];
    let cubics: Vec<MultiPoly> = (0..4)
        .map(|k| {
            let mut m = MultiPoly::one(&chart);
            for _ in 0..(3 - k) {
                m = &m * &p1;
            }
            for _ in 0..k {
                m = &m * &p2;
            }
            m
        })
        .collect();
    let ncols = 2 * pairs.len() * cubics.len();
    let col = |i: usize, j: usize, k: usize, m: usize| -> usize {
        let (lo, hi) = if j <= k { (j, k) } else { (k, j) };
        let s = pairs.iter().position(|&p| p == (lo, hi)).unwrap();
        (i * pairs.len() + s) * cubics.len() + m
    };

    // Accumulate polynomial-identity equations: each equation is a constant
    // part plus Σ unknown·coefficient-poly, required to vanish identically.
    struct Eq {
        constant: MultiPoly,
        coeffs: Vec<MultiPoly>,
    }
    let mut equations: Vec<Eq> = Vec::new();
    let zero = MultiPoly::zero(&chart);

    // Flat Euler field: Σ_k N^i_{jk} p_k + δ^i_j D = 0.
    for i in 0..2 {
        for j in 0..2 {
            let mut eq = Eq {
                constant: if i == j { dpoly.clone() } else { zero.clone() },
                coeffs: vec![zero.clone(); ncols],
            };
            for k in 0..2 {
                let pk = MultiPoly::var(&chart, k);
                for (m, mono) in cubics.iter().enumerate() {
                    let cidx = col(i, j, k, m);
                    eq.coeffs[cidx] = &eq.coeffs[cidx] + &(mono * &pk);
                }
            }
            equations.push(eq);
        }
    }
    // Compatibility of the exterior covariant derivatives, cleared by D:
    // Σ_s (G−N)^i_{ks} ĉ^s_{ml} − Σ_s (G−N)^i_{ls} ĉ^s_{mk} = 0 with
    // (k,l) = (0,1).
    let (k, l) = (0usize, 1usize);
    for i in 0..2 {
        for m in 0..2 {
            let mut eq = Eq {
                constant: zero.clone(),
                coeffs: vec![zero.clone(); ncols],
            };
            for s in 0..2 {
                let cml = &cpoly[s * 4 + m * 2 + l];
                let cmk = &cpoly[s * 4 + m * 2 + k];
                eq.constant = &eq.constant + &(&gpoly[i * 4 + k * 2 + s] * cml);
                eq.constant = &eq.constant - &(&gpoly[i * 4 + l * 2 + s] * cmk);
                for (mi, mono) in cubics.iter().enumerate() {
                    let ck = col(i, k, s, mi);
                    eq.coeffs[ck] = &eq.coeffs[ck] - &(mono * cml);
                    let cl = col(i, l, s, mi);
                    eq.coeffs[cl] = &eq.coeffs[cl] + &(mono * cmk);
                }
            }
            equations.push(eq);
        }
    }

    // Expand each equation into rows indexed by coordinate monomials; the
    // entries are rational in the parameters only.
    let mut rows: Vec<Vec<RatFun>> = Vec::new();
    let mut rhs: Vec<RatFun> = Vec::new();
    for eq in &equations {
        let mut keys: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
        let const_split = split_by_coords(&eq.constant);
        keys.extend(const_split.keys().cloned());
        let coeff_splits: Vec<BTreeMap<Vec<u32>, MultiPoly>> =
            eq.coeffs.iter().map(split_by_coords).collect();
        for cs in &coeff_splits {
            keys.extend(cs.keys().cloned());
        }
        for key in keys {
            let row: Vec<RatFun> = coeff_splits
                .iter()
                .map(|cs| {
                    cs.get(&key)
                        .map(|p| RatFun::from_poly(p.clone()))
                        .unwrap_or_else(|| RatFun::zero(&chart))
                })
                .collect();
            let b = const_split
                .get(&key)
                .map(|p| RatFun::from_poly((-p).clone()))
                .unwrap_or_else(|| RatFun::zero(&chart));
            rows.push(row);
            rhs.push(b);
        }
    }

    let sol = match solve_linear_ratfun(&rows, &rhs) {
        RatSolution::Unique(s) => s,
        RatSolution::Parametric { .. } => {
            return Err(Error::InconsistentSystem(
                "dual connection underdetermined within the ansatz".into(),
            ))
        }
        RatSolution::Inconsistent => {
            return Err(Error::InconsistentSystem(
                "dual connection conditions unsolvable within the ansatz".into(),
            ))
        }
    };

    let dinv = RatFun::from_poly(dpoly).inverse()?;
    let mut b = vec![RatFun::zero(&chart); 8];
    for i in 0..2 {
        for j in 0..2 {
            for kk in 0..2 {
                let mut num = RatFun::zero(&chart);
                for (m, mono) in cubics.iter().enumerate() {
                    num = &num + &(&sol[col(i, j, kk, m)] * &RatFun::from_poly(mono.clone()));
                }
                b[i * 4 + j * 2 + kk] = &num * &dinv;
            }
        }
    }
    Ok(b)
}

/// Verify the bridge between the arrangement product and the off-diagonal
/// intersection form: with weights 0 on orbit I and 1/(n−1) on orbit II the
/// Euler field is the unit of c*, and lowering an index with the covariant
/// form (1/(n−1) − δ_{ij}) p_i p_j — the exact inverse of
/// g^{ij} = (1−δ^{ij})/(p_ip_j) — yields a totally symmetric tensor.
pub fn metric_bridge(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter("need n ≥ 2".into()));
    }
    let chart = Chart::p_chart(n);
    let sigma_i = RatFun::zero(&chart);
    let sigma_ii = RatFun::constant(&chart, qi(1) / qi(n as i64 - 1));
    let cstar = dual_product(&chart, n, &sigma_i, &sigma_ii)?;
    // Euler unit: c*^i_{jk} p_k = δ^i_j.
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatFun::zero(&chart);
            for k in 0..n {
                acc = &acc
                    + &(&cstar[i * n * n + j * n + k]
                        * &RatFun::from_poly(MultiPoly::var(&chart, k)));
            }
            let expect = if i == j {
                RatFun::one(&chart)
            } else {
                RatFun::zero(&chart)
            };
            if acc != expect {
                return Err(Error::Internal("Euler field is not the unit of c*".into()));
            }
        }
    }
    // Covariant form and its contravariant inverse.
    let gcov = ExactMatrix::from_fn(n, n, |i, j| {
        let coef = if i == j {
            qi(1) / qi(n as i64 - 1) - qi(1)
        } else {
            qi(1) / qi(n as i64 - 1)
        };
        RatFun::from_poly(
            (&MultiPoly::var(&chart, i) * &MultiPoly::var(&chart, j)).scale(&coef),
        )
    });
    let gcontra = ExactMatrix::from_fn(n, n, |i, j| {
        if i == j {
            RatFun::zero(&chart)
        } else {
            RatFun::new(
                MultiPoly::one(&chart),
                &MultiPoly::var(&chart, i) * &MultiPoly::var(&chart, j),
            )
            .expect("nonzero denominator")
        }
    });
    let prod = gcov.mul(&gcontra);
    let id = ExactMatrix::identity(&chart, n);
    for i in 0..n {
        for j in 0..n {
            if prod.get(i, j) != id.get(i, j) {
                return Err(Error::Internal("covariant form is not the inverse".into()));
            }
        }
    }
    // Total symmetry of the lowered tensor c*_{ijk} = g_{is} c*^s_{jk}.
    let lowered = |i: usize, j: usize, k: usize| -> RatFun {
        let mut acc = RatFun::zero(&chart);
        for s in 0..n {
            acc = &acc + &(gcov.get(i, s) * &cstar[s * n * n + j * n + k]);
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let base = lowered(i, j, k);
                if base != lowered(j, i, k) || base != lowered(i, k, j) {
                    return Err(Error::Internal("lowered product is not symmetric".into()));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(_chart: &Arc<Chart>, num: MultiPoly, den: MultiPoly) -> RatFun {
        RatFun::new(num, den).unwrap()
    }

    #[test]
    fn step_displays() {
        let setup = DualSetup::symbolic().unwrap();
        let ch = setup.chart.clone();
        let p1 = MultiPoly::var(&ch, 0);
        let p2 = MultiPoly::var(&ch, 1);
        let x = MultiPoly::var_named(&ch, "x").unwrap();
        let y = MultiPoly::var_named(&ch, "y").unwrap();
        let xy = &x + &y;
        let disc = &p1.pow(2) - &p2.pow(2);

        let cstar = setup.dual_product().unwrap();
        // c*¹₁₁ = ((x+y)p₁² − xp₂²)/((x+y)p₁(p₁²−p₂²)).
        let expect = rf(
            &ch,
            &(&xy * &p1.pow(2)) - &(&x * &p2.pow(2)),
            &(&xy * &p1) * &disc,
        );
        assert_eq!(cstar[0], expect);
        // c*²₁₂ = yp₁/((x+y)(p₁²−p₂²)).
        let expect = rf(&ch, &y * &p1, &xy * &disc);
        assert_eq!(cstar[4 + 1], expect);
        // c*²₂₂ = (xp₁² − (x+y)p₂²)/((x+y)p₂(p₁²−p₂²)).
        let expect = rf(
            &ch,
            &(&x * &p1.pow(2)) - &(&xy * &p2.pow(2)),
            &(&xy * &p2) * &disc,
        );
        assert_eq!(cstar[4 + 2 + 1], expect);

        // Natural connection: Γ¹₁₂ = −2(2c+1)p₂/(p₁²−p₂²).
        let c = MultiPoly::var_named(&ch, "c").unwrap();
        let gamma = natural_connection(&setup).unwrap();
        let two_c_plus_1 = &c.scale(&qi(2)) + &MultiPoly::one(&ch);
        let expect = rf(&ch, (&two_c_plus_1 * &p2).scale(&qi(-2)), disc.clone());
        assert_eq!(gamma[0 * 4 + 0 * 2 + 1], expect);
        assert_eq!(gamma[0 * 4 + 1 * 2 + 0], expect);
        // Γ²₁₁ = 4cp₁²/(p₂(p₁²−p₂²)).
        let expect = rf(&ch, (&c * &p1.pow(2)).scale(&qi(4)), &p2 * &disc);
        assert_eq!(gamma[1 * 4 + 0 * 2 + 0], expect);

        // Induced product: c∘¹₁₁ = −2xp₁³/(x+y) + 2p₁p₂².
        let e = unit_in_p(&setup).unwrap();
        let cdot = product_from_dual(&cstar, &e).unwrap();
        let expect = rf(
            &ch,
            &(&x * &p1.pow(3)).scale(&qi(-2)) + &(&(&p1 * &p2.pow(2)).scale(&qi(2)) * &xy),
            xy.clone(),
        );
        assert_eq!(cdot[0], expect);
    }

    #[test]
    fn bridge_b2() {
        metric_bridge(2).unwrap();
    }

    #[test]
    fn families_compatible_and_off_family_not() {
        assert!(residual_is_zero(&DualSetup::family1().unwrap()).unwrap());
        assert!(residual_is_zero(&DualSetup::family2()).unwrap());
        assert!(residual_is_zero(&DualSetup::family3()).unwrap());
        let off = DualSetup::numeric(qi(1), qi(2), qi(1), qi(0), qi(1));
        assert!(!residual_is_zero(&off).unwrap());
    }

    #[test]
    fn vector_potential_fixture() {
        let setup = DualSetup::family1().unwrap();
        let (uchart, f) = vector_potential(&setup).unwrap();
        let u1 = MultiPoly::var(&uchart, 0);
        let u2 = MultiPoly::var(&uchart, 1);
        let c = MultiPoly::var_named(&uchart, "c").unwrap();
        // F¹ = u₁u₂ − (1/12)(8c+1)u₁³.
        let coef = &c.scale(&qi(8)) + &MultiPoly::one(&uchart);
        let expect1 = &(&u1 * &u2) - &(&coef.scale(&q(1, 12)) * &u1.pow(3));
        assert_eq!(f[0], expect1);
        // F² = −(c/12)(4c+1)u₁⁴ + ½u₂².
        let coef = &(&c.scale(&q(-1, 12)) * &(&c.scale(&qi(4)) + &MultiPoly::one(&uchart)));
        let expect2 = &(coef * &u1.pow(4)) + &u2.pow(2).scale(&q(1, 2));
        assert_eq!(f[1], expect2);
    }

    #[test]
    fn dual_connection_matches_minus_cstar_at_special_c() {
        let setup = DualSetup::family1().unwrap();
        let b = dual_connection(&setup).unwrap();
        let cstar = setup.dual_product().unwrap();
        let ch = setup.chart.clone();
        let special = |f: &RatFun| {
            f.substitute(&[("c", RatFun::constant(&ch, q(-1, 8)))]).unwrap()
        };
        for idx in 0..8 {
            assert_eq!(special(&b[idx]), -&special(&cstar[idx]));
        }
    }

    #[test]
    fn branch_signs() {
        assert_eq!(nls_kappa(&DualSetup::family2()).unwrap(), qi(1));
        assert_eq!(nls_kappa(&DualSetup::family3()).unwrap(), qi(-1));
    }
}

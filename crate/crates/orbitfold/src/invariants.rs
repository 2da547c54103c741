//! Invariant theory of the hyperoctahedral group B_n.
//!
//! B_n acts on p_1,…,p_n by signed permutations. Its basic invariants are
//! taken as u_i = e_i(p_1²,…,p_n²), the elementary symmetric polynomials in
//! the squares, with deg u_i = 2i. Any invariant polynomial rewrites uniquely
//! as a polynomial in u_1,…,u_n; the rewriting walks leading terms in the
//! squared variables q_i = p_i² (classical reduction against elementary
//! symmetric polynomials).
//!
//! Charts may carry weight-0 parameter variables (e.g. a basis parameter);
//! parameters pass through group actions and the rewriting untouched.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::ExactScalar;

/// A signed permutation: p_i ↦ sign_i · p_{perm(i)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    /// Image index of each coordinate (a permutation of 0..n).
    pub perm: Vec<usize>,
    /// Sign flip per coordinate (true = negate).
    pub flip: Vec<bool>,
}

impl GroupElement {
    /// Identity element.
    pub fn identity(n: usize) -> Self {
        GroupElement {
            perm: (0..n).collect(),
            flip: vec![false; n],
        }
    }

    /// Uniform random element (Fisher–Yates permutation plus random signs).
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        GroupElement {
            perm,
            flip: (0..n).map(|_| rng.gen_bool(0.5)).collect(),
        }
    }

    /// The n+1 generators: the sign flip of p_1 and adjacent transpositions.
    pub fn generators(n: usize) -> Vec<GroupElement> {
        let mut gens = Vec::new();
        let mut s = GroupElement::identity(n);
        s.flip[0] = true;
        gens.push(s);
        for i in 0..n.saturating_sub(1) {
            let mut t = GroupElement::identity(n);
            t.perm.swap(i, i + 1);
            gens.push(t);
        }
        gens
    }
}

/// Apply a signed permutation to a polynomial in a p-chart (coordinates of
/// weight 1; parameter variables are fixed).
pub fn apply_group(poly: &MultiPoly, g: &GroupElement) -> MultiPoly {
    let chart = &poly.chart;
    let coords = chart.coord_indices();
    assert_eq!(coords.len(), g.perm.len());
    let mut out = MultiPoly::zero(chart);
    for (m, c) in &poly.terms {
        let mut exp = m.0.clone();
        for &i in &coords {
            exp[i] = 0;
        }
        let mut coeff = c.clone();
        for (slot, &i) in coords.iter().enumerate() {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let target = coords[g.perm[slot]];
            exp[target] += e;
            if g.flip[slot] && e % 2 == 1 {
                coeff = -coeff;
            }
        }
        out.add_term(Monomial(exp), coeff);
    }
    out
}

/// True iff the polynomial is fixed by every generator of B_n.
pub fn is_invariant(poly: &MultiPoly) -> bool {
    let n = poly.chart.coord_indices().len();
    GroupElement::generators(n)
        .iter()
        .all(|g| &apply_group(poly, g) == poly)
}

/// The basic invariants u_1,…,u_n as polynomials in the p-chart.
pub fn elementary_invariants(n: usize) -> Vec<MultiPoly> {
    let chart = Chart::p_chart(n);
    let squares: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let p = MultiPoly::var(&chart, i);
            &p * &p
        })
        .collect();
    elementary_in(&squares, &chart)
}

/// Elementary symmetric polynomials e_1,…,e_k of the given values.
fn elementary_in(values: &[MultiPoly], chart: &Arc<Chart>) -> Vec<MultiPoly> {
    // Row-by-row Newton's triangle: e-polys of a growing variable list.
    let n = values.len();
    let mut e: Vec<MultiPoly> = vec![MultiPoly::zero(chart); n + 1];
    e[0] = MultiPoly::one(chart);
    for v in values {
        for k in (1..=n).rev() {
            let add = &e[k - 1] * v;
            e[k] = &e[k] + &add;
        }
    }
    e.remove(0);
    e
}

/// Halve every coordinate exponent: p-chart → q-chart (q_i = p_i²).
/// Parameters carry over. Fails on an odd exponent.
pub fn to_q_chart(poly: &MultiPoly, q_chart: &Arc<Chart>) -> Result<MultiPoly> {
    let coords = poly.chart.coord_indices();
    let mut out = MultiPoly::zero(q_chart);
    for (m, c) in &poly.terms {
        let mut exp = m.0.clone();
        for &i in &coords {
            if exp[i] % 2 != 0 {
                return Err(Error::OddExponent(poly.chart.vars[i].clone()));
            }
            exp[i] /= 2;
        }
        out.add_term(Monomial(exp), c.clone());
    }
    Ok(out)
}

/// Rewriting context: maps invariants from a p-chart (possibly with
/// parameters) into the matching u-chart.
pub struct Rewriter {
    n: usize,
    /// q-chart with the same parameters as the source p-chart.
    pub q_chart: Arc<Chart>,
    /// Target u-chart with the same parameters.
    pub u_chart: Arc<Chart>,
    /// e_i(q_1,…,q_n) in the q-chart.
    elem_q: Vec<MultiPoly>,
}

impl Rewriter {
    /// Build the rewriter for a given p-chart (its parameters carry over).
    pub fn new(p_chart: &Arc<Chart>) -> Rewriter {
        let coords = p_chart.coord_indices();
        let n = coords.len();
        let params: Vec<&str> = (0..p_chart.dim())
            .filter(|i| !coords.contains(i))
            .map(|i| p_chart.vars[i].as_str())
            .collect();
        let mut q_chart = Chart::q_chart(n);
        let mut u_chart = Chart::u_chart(n);
        if !params.is_empty() {
            q_chart = q_chart.extended(&params);
            u_chart = u_chart.extended(&params);
        }
        let qs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&q_chart, i)).collect();
        let elem_q = elementary_in(&qs, &q_chart);
        Rewriter { n, q_chart, u_chart, elem_q }
    }

    /// Rewrite an invariant polynomial of the p-chart as a polynomial in
    /// u_1,…,u_n (plus parameters). Fails if the input is not invariant.
    pub fn rewrite_in_u(&self, poly: &MultiPoly) -> Result<MultiPoly> {
        let q = to_q_chart(poly, &self.q_chart)?;
        self.rewrite_q_in_u(&q)
    }

    /// Rewrite a symmetric polynomial of the q-chart in the u-chart.
    pub fn rewrite_q_in_u(&self, poly: &MultiPoly) -> Result<MultiPoly> {
        let coords = self.q_chart.coord_indices();
        let mut rest = poly.clone();
        let mut out = MultiPoly::zero(&self.u_chart);
        while let Some((mono, coeff)) = rest.leading().map(|(m, c)| (m.clone(), c.clone())) {
            // Graded-lex leading term of a symmetric polynomial must have
            // weakly decreasing exponents along q_1,…,q_n.
            let lambda: Vec<u32> = coords.iter().map(|&i| mono.0[i]).collect();
            if lambda.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::NotInvariant(format!(
                    "leading monomial {mono:?} is not dominant"
                )));
            }
            // Matching product of elementary symmetric polynomials.
            let mut u_exp = vec![0u32; self.u_chart.dim()];
            let mut product = MultiPoly::one(&self.q_chart);
            for k in 0..self.n {
                let a = lambda[k] - if k + 1 < self.n { lambda[k + 1] } else { 0 };
                if a > 0 {
                    u_exp[k] = a;
                    product = &product * &self.elem_q[k].pow(a);
                }
            }
            // Parameter exponents pass through.
            let mut param_mono = vec![0u32; self.q_chart.dim()];
            for i in 0..self.q_chart.dim() {
                if self.q_chart.weights[i] == 0 {
                    param_mono[i] = mono.0[i];
                    // Same index layout in the u-chart by construction.
                    u_exp[i] = mono.0[i];
                }
            }
            let mut shift = MultiPoly::zero(&self.q_chart);
            shift.add_term(Monomial(param_mono), coeff.clone());
            rest = &rest - &(&shift * &product);
            out.add_term(Monomial(u_exp), coeff);
        }
        Ok(out)
    }
}

/// Convenience: rewrite a polynomial from the plain p-chart into the plain
/// u-chart.
pub fn rewrite_in_u(poly: &MultiPoly) -> Result<MultiPoly> {
    Rewriter::new(&poly.chart).rewrite_in_u(poly)
}

/// The u-values of a rational p-point (for sampling-based checks).
pub fn u_point_from_p(p_point: &[ExactScalar]) -> Vec<ExactScalar> {
    let n = p_point.len();
    let basics = elementary_invariants(n);
    basics.iter().map(|b| b.eval(p_point)).collect()
}

/// Random rational p-point with distinct nonzero squares (so that every
/// denominator appearing in the construction is nonzero).
pub fn random_regular_p_point(n: usize, rng: &mut impl Rng) -> Vec<ExactScalar> {
    loop {
        let pt: Vec<ExactScalar> = (0..n)
            .map(|_| {
                crate::scalar::q(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=8))
            })
            .collect();
        let ok = pt.iter().all(|x| !x.is_zero())
            && (0..n).all(|i| {
                (i + 1..n).all(|j| &pt[i] * &pt[i] != &pt[j] * &pt[j])
            });
        if ok {
            return pt;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use rand::SeedableRng;

    #[test]
    fn basic_invariants_n2() {
        let basics = elementary_invariants(2);
        let c = Chart::p_chart(2);
        let p1 = MultiPoly::var(&c, 0);
        let p2 = MultiPoly::var(&c, 1);
        let sq = |p: &MultiPoly| p * p;
        assert_eq!(basics[0], &sq(&p1) + &sq(&p2));
        assert_eq!(basics[1], &sq(&p1) * &sq(&p2));
        assert!(basics.iter().all(is_invariant));
    }

    #[test]
    fn rewrite_round_trip() {
        // u_1² - 2 u_2 = p_1⁴ + p_2⁴.
        let c = Chart::p_chart(2);
        let p1 = MultiPoly::var(&c, 0);
        let p2 = MultiPoly::var(&c, 1);
        let quartic = &p1.pow(4) + &p2.pow(4);
        let u = rewrite_in_u(&quartic).unwrap();
        let uc = u.chart.clone();
        let mut expect = MultiPoly::var(&uc, 0).pow(2);
        expect = &expect - &MultiPoly::var(&uc, 1).scale(&qi(2));
        assert_eq!(u, expect);
    }

    #[test]
    fn non_invariant_rejected() {
        let c = Chart::p_chart(2);
        let p1 = MultiPoly::var(&c, 0);
        assert!(!is_invariant(&p1));
        assert!(rewrite_in_u(&p1).is_err());
        // Even exponents but not symmetric: p_1² alone.
        let p1sq = p1.pow(2);
        assert!(!is_invariant(&p1sq));
        assert!(rewrite_in_u(&p1sq).is_err());
    }

    #[test]
    fn invariance_under_random_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let basics = elementary_invariants(4);
        for _ in 0..20 {
            let g = GroupElement::random(4, &mut rng);
            for b in &basics {
                assert_eq!(&apply_group(b, &g), b);
            }
        }
    }

    #[test]
    fn parameters_pass_through() {
        // c·(p_1² + p_2²)² rewrites to c·u_1².
        let c = Chart::p_chart(2).extended(&["c"]);
        let p1 = MultiPoly::var(&c, 0);
        let p2 = MultiPoly::var(&c, 1);
        let par = MultiPoly::var(&c, 2);
        let f = &(&(&p1 * &p1) + &(&p2 * &p2)).pow(2) * &par;
        let rw = Rewriter::new(&c);
        let u = rw.rewrite_in_u(&f).unwrap();
        let u1 = MultiPoly::var(&rw.u_chart, 0);
        let cu = MultiPoly::var(&rw.u_chart, 2);
        assert_eq!(u, &u1.pow(2) * &cu);
    }
}

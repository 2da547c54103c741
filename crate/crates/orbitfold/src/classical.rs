//! The classical rank-2 construction with the Euclidean metric.
//!
//! For n = 2 the orbit space also carries the classical structure built from
//! the Euclidean cometric δ^{ab} on the ambient space. The basic invariants
//! are taken as v₁ = (p₁² + p₂²)/8 and v₂ = p₁²p₂² + c·v₁² with a free basis
//! parameter c. The candidate Saito metric is η = ∂g/∂v₂ (derivative along
//! the top-degree invariant); it is constant precisely at c = −8, and there
//! the prepotential is recovered from the inverse-degree formula
//! F_{lm} = h · g^{3−l,3−m} / (d_{3−l} + d_{3−m} − 2) with degrees d = (2,4)
//! and h = 4.

use std::sync::Arc;

use num_traits::One;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::invariants::Rewriter;
use crate::poly::MultiPoly;
use crate::scalar::{q, qi, ExactScalar};

/// The classical pencil data on the rank-2 orbit chart (with symbolic c).
#[derive(Debug, Clone)]
pub struct ClassicalPencil {
    /// v-chart: v₁ (weight 2), v₂ (weight 4), parameter c (weight 0).
    pub v_chart: Arc<Chart>,
    /// Pushforward of the Euclidean cometric, row-major 2×2.
    pub g: Vec<MultiPoly>,
    /// η^{lm} = ∂g^{lm}/∂v₂, row-major 2×2.
    pub eta: Vec<MultiPoly>,
}

impl ClassicalPencil {
    /// g^{lm}(v) (0-based).
    pub fn g(&self, l: usize, m: usize) -> &MultiPoly {
        &self.g[l * 2 + m]
    }

    /// η^{lm}(v) (0-based).
    pub fn eta(&self, l: usize, m: usize) -> &MultiPoly {
        &self.eta[l * 2 + m]
    }

    /// True iff every η entry is free of v₁, v₂ (c may appear).
    pub fn eta_constant(&self) -> bool {
        self.eta
            .iter()
            .all(|e| e.degree_in(0) == 0 && e.degree_in(1) == 0)
    }
}

/// Build the classical pencil with symbolic basis parameter c.
pub fn classical_pencil() -> Result<ClassicalPencil> {
    let pc = Chart::p_chart(2).extended(&["c"]);
    let p1 = MultiPoly::var(&pc, 0);
    let p2 = MultiPoly::var(&pc, 1);
    let cpar = MultiPoly::var_named(&pc, "c")?;
    let v1 = (&p1.pow(2) + &p2.pow(2)).scale(&q(1, 8));
    let v2 = &(&p1.pow(2) * &p2.pow(2)) + &(&cpar * &v1.pow(2));
    let invs = [v1, v2];

    // Pushforward of δ^{ab} and rewriting into the v-chart: first into the
    // elementary-invariant chart (u₁, u₂), then u₁ = 8v₁, u₂ = v₂ − c v₁².
    let rw = Rewriter::new(&pc);
    let v_chart = Chart::new(
        "v2",
        vec![("v1".into(), 2), ("v2".into(), 4), ("c".into(), 0)],
    );
    let vv1 = MultiPoly::var(&v_chart, 0);
    let vv2 = MultiPoly::var(&v_chart, 1);
    let vc = MultiPoly::var(&v_chart, 2);
    let u_images = vec![
        vv1.scale(&qi(8)),
        &vv2 - &(&vc * &vv1.pow(2)),
        vc.clone(),
    ];
    let mut g = Vec::with_capacity(4);
    for l in 0..2 {
        for m in 0..2 {
            let mut acc = MultiPoly::zero(&pc);
            for a in 0..2 {
                acc = &acc + &(&invs[l].derivative(a) * &invs[m].derivative(a));
            }
            let in_u = rw.rewrite_in_u(&acc)?;
            g.push(in_u.substitute_full(&u_images)?);
        }
    }
    let eta: Vec<MultiPoly> = g.iter().map(|x| x.derivative(1)).collect();
    Ok(ClassicalPencil { v_chart, g, eta })
}

/// Specialize a v-chart polynomial at a rational value of c, dropping the
/// parameter variable (result in the plain 2-variable v-chart).
pub fn at_c(p: &MultiPoly, c: &ExactScalar) -> Result<MultiPoly> {
    let target = Chart::new("v2c", vec![("v1".into(), 2), ("v2".into(), 4)]);
    let images = vec![
        MultiPoly::var(&target, 0),
        MultiPoly::var(&target, 1),
        MultiPoly::constant(&target, c.clone()),
    ];
    p.substitute_full(&images)
}

/// Prepotential of the classical structure at c = −8 via the inverse-degree
/// formula and Euler integration; weighted-homogeneous of degree 10.
pub fn classical_prepotential() -> Result<MultiPoly> {
    let pencil = classical_pencil()?;
    let c = qi(-8);
    let degrees = [2i64, 4];
    let h = qi(4);
    // Second derivatives F_{lm}.
    let mut f2 = vec![MultiPoly::zero(&Chart::new(
        "v2c",
        vec![("v1".into(), 2), ("v2".into(), 4)],
    )); 4];
    for l in 0..2 {
        for m in 0..2 {
            let denom = degrees[1 - l] + degrees[1 - m] - 2;
            if denom == 0 {
                return Err(Error::Internal("degenerate degree pair".into()));
            }
            let gd = at_c(pencil.g(1 - l, 1 - m), &c)?;
            f2[l * 2 + m] = gd.scale(&(&h / &qi(denom)));
        }
    }
    let tc = f2[0].chart.clone();
    // Euler integration: deg F = 10, weights (2, 4).
    let w = [qi(2), qi(4)];
    let mut f1 = Vec::with_capacity(2);
    for l in 0..2 {
        let mut acc = MultiPoly::zero(&tc);
        for m in 0..2 {
            acc = &acc + &(&MultiPoly::var(&tc, m).scale(&w[m]) * &f2[l * 2 + m]);
        }
        f1.push(acc.scale(&(ExactScalar::one() / (qi(10) - &w[l]))));
    }
    let mut f = MultiPoly::zero(&tc);
    for l in 0..2 {
        f = &f + &(&MultiPoly::var(&tc, l).scale(&w[l]) * &f1[l]);
    }
    let f = f.scale(&q(1, 10));
    // Integrability check: second derivatives reproduce F_{lm}.
    for l in 0..2 {
        for m in 0..2 {
            if f.derivative(l).derivative(m) != f2[l * 2 + m] {
                return Err(Error::Integrability(format!(
                    "classical F_{{{}{}}} mismatch",
                    l + 1,
                    m + 1
                )));
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_display_and_constancy() {
        let pencil = classical_pencil().unwrap();
        let vc = pencil.v_chart.clone();
        let v1 = MultiPoly::var(&vc, 0);
        let c = MultiPoly::var(&vc, 2);
        // η = [[0, 1], [1, 4(c+8)v₁]].
        assert!(pencil.eta(0, 0).is_zero());
        assert_eq!(pencil.eta(0, 1), &MultiPoly::one(&vc));
        assert_eq!(pencil.eta(1, 0), &MultiPoly::one(&vc));
        let expect = &(&c + &MultiPoly::constant(&vc, qi(8))).scale(&qi(4)) * &v1;
        assert_eq!(pencil.eta(1, 1), &expect);
        assert!(!pencil.eta_constant());
        // At c = −8 every entry is constant.
        for e in &pencil.eta {
            let at = at_c(e, &qi(-8)).unwrap();
            assert!(at.is_constant());
        }
        // At c = 0 it is not.
        let at = at_c(pencil.eta(1, 1), &qi(0)).unwrap();
        assert!(!at.is_constant());
    }

    #[test]
    fn prepotential_fixture() {
        let f = classical_prepotential().unwrap();
        let tc = f.chart.clone();
        let v1 = MultiPoly::var(&tc, 0);
        let v2 = MultiPoly::var(&tc, 1);
        let expect = &(&v1 * &v2.pow(2)).scale(&q(1, 2)) + &v1.pow(5).scale(&q(64, 15));
        assert_eq!(f, expect);
    }
}

//! Tensor fields with exact rational-function components.
//!
//! A `TensorField` stores dense components of an (up, down) tensor over the
//! coordinate directions of one chart (weight-0 parameter variables are not
//! tensor directions). Index order in `get`/`set` is: all contravariant
//! slots first, then all covariant slots.

use std::sync::Arc;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ratfun::RatFun;
use crate::scalar::ExactScalar;

/// Dense tensor field of type (up, down) on a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    /// Chart carrying the components.
    pub chart: Arc<Chart>,
    /// Contravariant rank.
    pub up: usize,
    /// Covariant rank.
    pub down: usize,
    /// Number of coordinate directions.
    pub dim: usize,
    comps: Vec<RatFun>,
}

impl TensorField {
    /// Zero tensor of the given type.
    pub fn zero(chart: &Arc<Chart>, up: usize, down: usize) -> TensorField {
        let dim = chart.coord_indices().len();
        let len = dim.pow((up + down) as u32);
        TensorField {
            chart: chart.clone(),
            up,
            down,
            dim,
            comps: vec![RatFun::zero(chart); len],
        }
    }

    /// Build from a component function.
    pub fn from_fn(
        chart: &Arc<Chart>,
        up: usize,
        down: usize,
        mut f: impl FnMut(&[usize]) -> RatFun,
    ) -> TensorField {
        let mut t = TensorField::zero(chart, up, down);
        let rank = up + down;
        let mut idx = vec![0usize; rank];
        loop {
            let v = f(&idx);
            t.set(&idx, v);
            if !advance(&mut idx, t.dim) {
                break;
            }
        }
        t
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.up + self.down);
        let mut o = 0;
        for &i in idx {
            debug_assert!(i < self.dim);
            o = o * self.dim + i;
        }
        o
    }

    /// Component accessor.
    pub fn get(&self, idx: &[usize]) -> &RatFun {
        &self.comps[self.offset(idx)]
    }

    /// Component mutator.
    pub fn set(&mut self, idx: &[usize], v: RatFun) {
        let o = self.offset(idx);
        self.comps[o] = v;
    }

    /// True iff every component vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Component-wise map.
    pub fn map(&self, mut f: impl FnMut(&RatFun) -> RatFun) -> TensorField {
        TensorField {
            chart: self.chart.clone(),
            up: self.up,
            down: self.down,
            dim: self.dim,
            comps: self.comps.iter().map(|c| f(c)).collect(),
        }
    }

    /// Component-wise sum.
    pub fn add(&self, other: &TensorField) -> TensorField {
        assert_eq!((self.up, self.down), (other.up, other.down));
        TensorField {
            chart: self.chart.clone(),
            up: self.up,
            down: self.down,
            dim: self.dim,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Component-wise difference.
    pub fn sub(&self, other: &TensorField) -> TensorField {
        self.add(&other.map(|c| -c))
    }

    /// Scale by a constant.
    pub fn scale(&self, s: &ExactScalar) -> TensorField {
        self.map(|c| c.scale(s))
    }

    /// Partial derivative of every component along coordinate direction `k`.
    pub fn deriv(&self, k: usize) -> TensorField {
        let var = self.chart.coord_indices()[k];
        self.map(|c| c.derivative(var))
    }

    /// View a (2,0) or (0,2) tensor as a matrix.
    pub fn as_matrix(&self) -> ExactMatrix {
        assert_eq!(self.up + self.down, 2);
        ExactMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j]).clone())
    }

    /// Wrap a matrix as a (2,0) or (0,2) tensor.
    pub fn from_matrix(chart: &Arc<Chart>, up: usize, m: &ExactMatrix) -> TensorField {
        let down = 2 - up;
        TensorField::from_fn(chart, up, down, |idx| m.get(idx[0], idx[1]).clone())
    }

    /// Symmetry check over the two slots `a < b` (both up or both down).
    pub fn is_symmetric_in(&self, a: usize, b: usize) -> bool {
        let rank = self.up + self.down;
        let mut idx = vec![0usize; rank];
        loop {
            let mut swapped = idx.clone();
            swapped.swap(a, b);
            if self.get(&idx) != self.get(&swapped) {
                return false;
            }
            if !advance(&mut idx, self.dim) {
                break;
            }
        }
        true
    }
}

/// Advance a mixed-radix counter; false at wrap-around.
pub fn advance(idx: &mut [usize], dim: usize) -> bool {
    for slot in (0..idx.len()).rev() {
        idx[slot] += 1;
        if idx[slot] < dim {
            return true;
        }
        idx[slot] = 0;
    }
    false
}

/// Jacobian matrix J[a][i] = ∂(image_a)/∂x_i in the source chart.
pub fn jacobian(images: &[RatFun]) -> ExactMatrix {
    let chart = images[0].chart().clone();
    let coords = chart.coord_indices();
    ExactMatrix::from_fn(images.len(), coords.len(), |a, i| {
        images[a].derivative(coords[i])
    })
}

/// Pushforward of a contravariant 2-tensor along a map given by coordinate
/// images: (φ_* g)^{ab} = Σ_{ij} ∂φ_a/∂x_i ∂φ_b/∂x_j g^{ij}, still expressed
/// in the source chart.
pub fn pushforward_cometric(g: &TensorField, images: &[RatFun]) -> TensorField {
    assert_eq!(g.up, 2);
    assert_eq!(g.down, 0);
    let j = jacobian(images);
    let m = j.mul(&g.as_matrix()).mul(&j.transpose());
    TensorField::from_matrix(&g.chart, 2, &m)
}

/// Christoffel symbols Γ^k_{ij} of the Levi-Civita connection of a covariant
/// metric: Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij}).
pub fn christoffel_covariant(g_cov: &TensorField) -> Result<TensorField> {
    assert_eq!((g_cov.up, g_cov.down), (0, 2));
    let n = g_cov.dim;
    let chart = g_cov.chart.clone();
    let g_inv = g_cov.as_matrix().inverse()?;
    // Precompute ∂_k g_{ij}.
    let grads: Vec<TensorField> = (0..n).map(|k| g_cov.deriv(k)).collect();
    let half = crate::scalar::q(1, 2);
    Ok(TensorField::from_fn(&chart, 1, 2, |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let mut acc = RatFun::zero(&chart);
        for l in 0..n {
            let term = &(&(grads[i].get(&[l, j]) + grads[j].get(&[l, i]))
                - grads[l].get(&[i, j]))
                * g_inv.get(k, l);
            acc = &acc + &term;
        }
        acc.scale(&half)
    }))
}

/// Riemann curvature of a connection:
/// R^i_{jkl} = ∂_k Γ^i_{lj} − ∂_l Γ^i_{kj} + Γ^i_{ks}Γ^s_{lj} − Γ^i_{ls}Γ^s_{kj}.
pub fn riemann_curvature(gamma: &TensorField) -> TensorField {
    assert_eq!((gamma.up, gamma.down), (1, 2));
    let n = gamma.dim;
    let chart = gamma.chart.clone();
    let grads: Vec<TensorField> = (0..n).map(|k| gamma.deriv(k)).collect();
    TensorField::from_fn(&chart, 1, 3, |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = grads[k].get(&[i, l, j]) - grads[l].get(&[i, k, j]);
        for s in 0..n {
            let quad = &(gamma.get(&[i, k, s]) * gamma.get(&[s, l, j]))
                - &(gamma.get(&[i, l, s]) * gamma.get(&[s, k, j]));
            acc = &acc + &quad;
        }
        acc
    })
}

/// Lie derivative along a vector field X of tensors of type (1,0), (2,0),
/// (0,2) or (1,2).
pub fn lie_derivative(x: &TensorField, t: &TensorField) -> Result<TensorField> {
    assert_eq!((x.up, x.down), (1, 0));
    let n = t.dim;
    let chart = t.chart.clone();
    let dx = |a: usize, k: usize| x.get(&[a]).derivative(chart.coord_indices()[k]);
    let dt: Vec<TensorField> = (0..n).map(|k| t.deriv(k)).collect();
    let directional = |idx: &[usize]| {
        let mut acc = RatFun::zero(&chart);
        for k in 0..n {
            acc = &acc + &(x.get(&[k]) * dt[k].get(idx));
        }
        acc
    };
    match (t.up, t.down) {
        (1, 0) => Ok(TensorField::from_fn(&chart, 1, 0, |idx| {
            let a = idx[0];
            let mut acc = directional(idx);
            for k in 0..n {
                acc = &acc - &(t.get(&[k]) * &dx(a, k));
            }
            acc
        })),
        (2, 0) => Ok(TensorField::from_fn(&chart, 2, 0, |idx| {
            let (a, b) = (idx[0], idx[1]);
            let mut acc = directional(idx);
            for k in 0..n {
                acc = &acc - &(t.get(&[k, b]) * &dx(a, k));
                acc = &acc - &(t.get(&[a, k]) * &dx(b, k));
            }
            acc
        })),
        (0, 2) => Ok(TensorField::from_fn(&chart, 0, 2, |idx| {
            let (a, b) = (idx[0], idx[1]);
            let mut acc = directional(idx);
            for k in 0..n {
                acc = &acc + &(t.get(&[k, b]) * &dx(k, a));
                acc = &acc + &(t.get(&[a, k]) * &dx(k, b));
            }
            acc
        })),
        (1, 2) => Ok(TensorField::from_fn(&chart, 1, 2, |idx| {
            let (a, i, j) = (idx[0], idx[1], idx[2]);
            let mut acc = directional(idx);
            for k in 0..n {
                acc = &acc - &(t.get(&[k, i, j]) * &dx(a, k));
                acc = &acc + &(t.get(&[a, k, j]) * &dx(k, i));
                acc = &acc + &(t.get(&[a, i, k]) * &dx(k, j));
            }
            acc
        })),
        other => Err(Error::Internal(format!(
            "Lie derivative not implemented for tensor type {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiPoly;
    use crate::scalar::qi;

    fn var(c: &Arc<Chart>, i: usize) -> RatFun {
        RatFun::from_poly(MultiPoly::var(c, i))
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        // g = diag(1, x²) on (x, y): polar-style metric, curvature zero.
        let c = Chart::new("xy", vec![("x".into(), 1), ("y".into(), 1)]);
        let x = var(&c, 0);
        let mut g = TensorField::zero(&c, 0, 2);
        g.set(&[0, 0], RatFun::one(&c));
        g.set(&[1, 1], &x * &x);
        let gamma = christoffel_covariant(&g).unwrap();
        // Γ^x_{yy} = −x, Γ^y_{xy} = 1/x.
        assert_eq!(gamma.get(&[0, 1, 1]), &-&x);
        assert_eq!(gamma.get(&[1, 0, 1]), &x.inverse().unwrap());
        let r = riemann_curvature(&gamma);
        assert!(r.is_zero());
    }

    #[test]
    fn pushforward_of_euclidean_under_squares() {
        // Images (x², y²): pushforward of identity cometric is diag(4x², 4y²).
        let c = Chart::new("xy", vec![("x".into(), 1), ("y".into(), 1)]);
        let x = var(&c, 0);
        let y = var(&c, 1);
        let mut g = TensorField::zero(&c, 2, 0);
        g.set(&[0, 0], RatFun::one(&c));
        g.set(&[1, 1], RatFun::one(&c));
        let push = pushforward_cometric(&g, &[&x * &x, &y * &y]);
        assert_eq!(push.get(&[0, 0]), &(&x * &x).scale(&qi(4)));
        assert_eq!(push.get(&[1, 1]), &(&y * &y).scale(&qi(4)));
        assert!(push.get(&[0, 1]).is_zero());
    }

    #[test]
    fn lie_derivative_euler_on_quadratic_cometric() {
        // X = x∂x + y∂y; T^{ab} = x y for all a,b: L_X T = (2−1−1)T = 0… but
        // each slot subtracts one, so L_X T^{ab} = X(xy) − 2xy = 0.
        let c = Chart::new("xy", vec![("x".into(), 1), ("y".into(), 1)]);
        let x = var(&c, 0);
        let y = var(&c, 1);
        let mut ex = TensorField::zero(&c, 1, 0);
        ex.set(&[0], x.clone());
        ex.set(&[1], y.clone());
        let t = TensorField::from_fn(&c, 2, 0, |_| &x * &y);
        let lt = lie_derivative(&ex, &t).unwrap();
        assert!(lt.is_zero());
    }
}

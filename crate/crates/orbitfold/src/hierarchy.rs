//! The dispersionless (principal) hierarchy of the Frobenius structure.
//!
//! Hamiltonian densities are generated by the recursion
//! ∂_j X^i_{(α)} = c^i_{jk} X^k_{(α−1)}, starting from X_{(0)} = e. Each
//! level is weighted-homogeneous, so the recursion integrates with the Euler
//! operator; re-differentiation verifies integrability exactly. A level
//! induces the hydrodynamic flow ∂_T t^i = A^i_j t^j_x with
//! A^i_j = c^i_{jk} X^k, and two flows commute iff their matrices commute
//! and the symmetrized quadratic terms of the formal mixed derivatives agree.

use num_traits::One;

use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::poly::MultiPoly;
use crate::ratfun::RatFun;
use crate::scalar::{qi, ExactScalar};

/// Generate X_{(0)}, …, X_{(max_level)}; each entry is the component vector
/// in the flat chart.
pub fn hierarchy_fields(
    frob: &Frobenius,
    e_t: &[MultiPoly],
    max_level: usize,
) -> Result<Vec<Vec<RatFun>>> {
    let n = frob.n;
    let tc = frob.f_poly.chart.clone();
    let mut levels: Vec<Vec<RatFun>> = Vec::with_capacity(max_level + 1);
    levels.push(e_t.iter().map(|p| RatFun::from_poly(p.clone())).collect());
    for alpha in 1..=max_level {
        let prev = &levels[alpha - 1];
        let mut x = Vec::with_capacity(n);
        for i in 0..n {
            // Partials G_j = ∂_j X^i and the Euler integral.
            let mut partials = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = RatFun::zero(&tc);
                for k in 0..n {
                    acc = &acc + &(frob.c(i, j, k) * &prev[k]);
                }
                partials.push(acc);
            }
            let d = 2 * (i as i64 + 1) + 2 * (n as i64 - 1) * (alpha as i64 - 1);
            let mut acc = RatFun::zero(&tc);
            for j in 0..n {
                let tj = RatFun::from_poly(
                    MultiPoly::var(&tc, j).scale(&qi(2 * (j as i64 + 1))),
                );
                acc = &acc + &(&tj * &partials[j]);
            }
            let xi = acc.scale(&(ExactScalar::one() / qi(d)));
            // Integrability: the Euler integral must reproduce the partials.
            for (j, p) in partials.iter().enumerate() {
                if &xi.derivative(j) != p {
                    return Err(Error::Integrability(format!(
                        "hierarchy level {alpha}, component {}: ∂_{} mismatch",
                        i + 1,
                        j + 1
                    )));
                }
            }
            x.push(xi);
        }
        levels.push(x);
    }
    Ok(levels)
}

/// Flow matrix A^i_j = c^i_{jk} X^k of a hierarchy level (row-major n×n).
pub fn flow_matrix(frob: &Frobenius, x: &[RatFun]) -> Vec<RatFun> {
    let n = frob.n;
    let tc = frob.f_poly.chart.clone();
    let mut a = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatFun::zero(&tc);
            for k in 0..n {
                acc = &acc + &(frob.c(i, j, k) * &x[k]);
            }
            a.push(acc);
        }
    }
    a
}

/// Formal commutativity of two hydrodynamic flows ∂_α t = A t_x,
/// ∂_β t = B t_x: the matrices must commute (t_xx coefficient) and the
/// quadratic t_x ⊗ t_x terms of the mixed derivatives must agree after
/// symmetrization.
pub fn flows_commute(n: usize, a: &[RatFun], b: &[RatFun]) -> bool {
    let tc = a[0].chart().clone();
    fn at<'a>(n: usize, m: &'a [RatFun], i: usize, j: usize) -> &'a RatFun {
        &m[i * n + j]
    }
    // [A, B] = 0.
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatFun::zero(&tc);
            for k in 0..n {
                acc = &acc + &(&(at(n, a, i, k) * at(n, b, k, j)) - &(at(n, b, i, k) * at(n, a, k, j)));
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    // Quadratic terms: Q^i_{jl}(A,B) = ∂_k A^i_j B^k_l + A^i_k ∂_l B^k_j,
    // antisymmetrized in (A,B) and symmetrized in (j,l).
    let quad = |x: &[RatFun], y: &[RatFun], i: usize, j: usize, l: usize| -> RatFun {
        let mut acc = RatFun::zero(&tc);
        for k in 0..n {
            acc = &acc + &(&at(n, x, i, j).derivative(k) * at(n, y, k, l));
            acc = &acc + &(at(n, x, i, k) * &at(n, y, k, j).derivative(l));
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            for l in j..n {
                let m1 = &quad(a, b, i, j, l) + &quad(a, b, i, l, j);
                let m2 = &quad(b, a, i, j, l) + &quad(b, a, i, l, j);
                if m1 != m2 {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::structure_constants;
    use crate::saito::flat_coordinates;

    #[test]
    fn b2_level_one_is_nls_flow() {
        let fc = flat_coordinates(2).unwrap();
        let frob = structure_constants(&fc).unwrap();
        let levels = hierarchy_fields(&frob, &fc.e_t, 2).unwrap();
        let tc = frob.f_poly.chart.clone();
        let t1 = RatFun::from_poly(MultiPoly::var(&tc, 0));
        let t2 = RatFun::from_poly(MultiPoly::var(&tc, 1));
        // X_{(1)} = (t₁, t₂).
        assert_eq!(levels[1], vec![t1.clone(), t2.clone()]);
        // Level-1 flow: t¹_t = t¹ t¹_x + t²_x, t²_t = t² t¹_x + t¹ t²_x.
        let a = flow_matrix(&frob, &levels[1]);
        assert_eq!(a[0], t1);
        assert_eq!(a[1], RatFun::one(&tc));
        assert_eq!(a[2], t2);
        assert_eq!(a[3], t1);
        // Level-2 flow commutes with level-1.
        let b = flow_matrix(&frob, &levels[2]);
        assert!(flows_commute(2, &a, &b));
        // Trivially, the level-0 flow (identity) commutes too.
        let id = flow_matrix(&frob, &levels[0]);
        assert!(flows_commute(2, &a, &id));
    }
}

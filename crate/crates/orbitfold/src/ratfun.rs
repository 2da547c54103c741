//! Rational functions: quotients of multivariate polynomials.
//!
//! Equality is always decided by cross-multiplication, so reduction is a
//! performance matter, not a correctness one. Construction removes scalar
//! content and, for non-constant denominators, cancels the polynomial gcd;
//! the denominator is normalized to leading coefficient 1.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::{same_chart, Chart};
use crate::error::{Error, Result};
use crate::poly::{poly_gcd, MultiPoly};
use crate::scalar::ExactScalar;

/// A reduced quotient `num/den` of polynomials in one chart.
#[derive(Clone)]
pub struct RatFun {
    /// Numerator polynomial.
    pub num: MultiPoly,
    /// Denominator polynomial, never zero, leading coefficient 1.
    pub den: MultiPoly,
}

impl RatFun {
    /// Build and reduce `num/den`.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        assert!(same_chart(&num.chart, &den.chart), "chart mismatch");
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: MultiPoly, mut den: MultiPoly) -> RatFun {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun {
                den: MultiPoly::one(&num.chart),
                num,
            };
        }
        if !den.is_constant() {
            let g = poly_gcd(&num, &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        // Normalize: denominator leading coefficient 1.
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = ExactScalar::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFun { num, den }
    }

    /// A polynomial as a rational function.
    pub fn from_poly(p: MultiPoly) -> RatFun {
        RatFun {
            den: MultiPoly::one(&p.chart),
            num: p,
        }
    }

    /// Zero in the given chart.
    pub fn zero(chart: &Arc<Chart>) -> RatFun {
        Self::from_poly(MultiPoly::zero(chart))
    }

    /// One in the given chart.
    pub fn one(chart: &Arc<Chart>) -> RatFun {
        Self::from_poly(MultiPoly::one(chart))
    }

    /// A constant.
    pub fn constant(chart: &Arc<Chart>, c: ExactScalar) -> RatFun {
        Self::from_poly(MultiPoly::constant(chart, c))
    }

    /// The chart this function lives in.
    pub fn chart(&self) -> &Arc<Chart> {
        &self.num.chart
    }

    /// True iff identically zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value if the denominator reduced to a constant.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_constant() && !self.den.is_zero() {
            // den is normalized to leading coefficient 1, i.e. exactly 1.
            Some(&self.num)
        } else {
            None
        }
    }

    /// The constant value if this function is constant.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    /// Exact partial derivative (quotient rule) in variable `i`.
    pub fn derivative(&self, i: usize) -> RatFun {
        if self.den.is_constant() {
            return Self::reduced(self.num.derivative(i), self.den.clone());
        }
        let num = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        let den = &self.den * &self.den;
        Self::reduced(num, den)
    }

    /// Derivative by variable name.
    pub fn derivative_named(&self, name: &str) -> Result<RatFun> {
        Ok(self.derivative(self.chart().var_index(name)?))
    }

    /// Scale by a constant.
    pub fn scale(&self, c: &ExactScalar) -> RatFun {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    /// Substitute every chart variable by the corresponding image; the images
    /// share one target chart which becomes the result chart.
    pub fn substitute_full(&self, images: &[RatFun]) -> Result<RatFun> {
        assert_eq!(images.len(), self.chart().dim());
        let target = images
            .first()
            .map(|f| f.chart().clone())
            .unwrap_or_else(|| self.chart().clone());
        let sub_poly = |p: &MultiPoly| -> Result<RatFun> {
            let mut out = RatFun::zero(&target);
            // Cache powers of each image.
            let mut powers: Vec<Vec<RatFun>> = images
                .iter()
                .map(|f| vec![RatFun::one(&target), f.clone()])
                .collect();
            for (m, c) in &p.terms {
                let mut term = RatFun::constant(&target, c.clone());
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    while powers[i].len() <= e as usize {
                        let next = &powers[i][powers[i].len() - 1] * &images[i];
                        powers[i].push(next);
                    }
                    term = &term * &powers[i][e as usize];
                }
                out = &out + &term;
            }
            Ok(out)
        };
        let n = sub_poly(&self.num)?;
        let d = sub_poly(&self.den)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        &n / &d
    }

    /// Substitute a subset of variables (by name) within the same chart;
    /// unbound variables stay themselves.
    pub fn substitute(&self, bindings: &[(&str, RatFun)]) -> Result<RatFun> {
        let chart = self.chart().clone();
        let mut images: Vec<RatFun> = (0..chart.dim())
            .map(|i| RatFun::from_poly(MultiPoly::var(&chart, i)))
            .collect();
        for (name, value) in bindings {
            let i = chart.var_index(name)?;
            if !same_chart(value.chart(), &chart) {
                return Err(Error::ChartMismatch(
                    value.chart().name.clone(),
                    chart.name.clone(),
                ));
            }
            images[i] = value.clone();
        }
        self.substitute_full(&images)
    }

    /// Evaluate at a rational point; `None` when the denominator vanishes.
    pub fn eval(&self, point: &[ExactScalar]) -> Option<ExactScalar> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Map into a larger chart containing the same variable names.
    pub fn embed(&self, target: &Arc<Chart>) -> Result<RatFun> {
        Ok(RatFun {
            num: self.num.embed(target)?,
            den: self.den.embed(target)?,
        })
    }

    /// JSON form as a pair of canonical polynomials.
    pub fn to_json(&self) -> serde_json::Value {
        if let Some(p) = self.as_poly() {
            return p.to_json();
        }
        serde_json::json!({"num": self.num.to_json(), "den": self.den.to_json()})
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        // Cross-multiplication; immune to missed reductions.
        &self.num * &other.den == &other.num * &self.den
    }
}
impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun[{}]({})", self.chart().name, self)
    }
}

impl std::ops::Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::reduced(num, &self.den * &rhs.den)
    }
}

impl std::ops::Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::reduced(&self.num - &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFun::reduced(num, &self.den * &rhs.den)
    }
}

impl std::ops::Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        // Cross-cancel before multiplying to limit growth.
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFun::reduced(&n1 * &n2, &d1 * &d2)
    }
}

impl std::ops::Div for &RatFun {
    type Output = Result<RatFun>;
    fn div(self, rhs: &RatFun) -> Result<RatFun> {
        Ok(self * &rhs.inverse()?)
    }
}

impl std::ops::Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn p2() -> Arc<Chart> {
        Chart::p_chart(2)
    }

    fn v(c: &Arc<Chart>, i: usize) -> RatFun {
        RatFun::from_poly(MultiPoly::var(c, i))
    }

    #[test]
    fn quotient_rule() {
        let c = p2();
        // d/dp1 [1/(p1 p2)] = -1/(p1^2 p2)
        let f = RatFun::one(&c);
        let f = (&f / &(&v(&c, 0) * &v(&c, 1))).unwrap();
        let d = f.derivative(0);
        let expect = (&(-&RatFun::one(&c))
            / &(&(&v(&c, 0) * &v(&c, 0)) * &v(&c, 1)))
            .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn gcd_reduction_in_constructor() {
        let c = p2();
        let x = MultiPoly::var(&c, 0);
        let y = MultiPoly::var(&c, 1);
        let num = &(&x + &y) * &(&x - &y);
        let den = &x + &y;
        let f = RatFun::new(num, den).unwrap();
        assert!(f.as_poly().is_some());
        assert_eq!(f.num, &x - &y);
    }

    #[test]
    fn substitute_zero_denominator_is_error() {
        let c = Chart::u_chart(2);
        let f = (&RatFun::one(&c) / &v(&c, 1)).unwrap();
        let r = f.substitute(&[("u2", RatFun::zero(&c))]);
        assert!(matches!(r, Err(Error::ZeroDenominator)));
    }

    #[test]
    fn arithmetic_and_equality() {
        let c = p2();
        let x = v(&c, 0);
        let y = v(&c, 1);
        let a = (&x / &y).unwrap();
        let b = (&y / &x).unwrap();
        let s = &a + &b;
        let expect = (&(&(&x * &x) + &(&y * &y)) / &(&x * &y)).unwrap();
        assert_eq!(s, expect);
        assert_eq!((&a * &b).as_constant(), Some(qi(1)));
    }
}

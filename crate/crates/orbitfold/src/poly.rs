//! Sparse multivariate polynomials over exact rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded-lex
//! order, so every polynomial has a canonical, bit-stable printed and
//! serialized form. Besides ring arithmetic this module provides exact
//! division, a subresultant-PRS multivariate gcd (used to keep rational
//! functions reduced), derivatives, substitution and evaluation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::chart::{same_chart, Chart};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, ExactScalar};

/// Exponent vector of a single term; ordered graded-lex (total degree first,
/// then lexicographic with earlier variables more significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    /// Constant monomial in `dim` variables.
    pub fn constant(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    /// Single variable monomial x_i.
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Monomial(e)
    }

    /// Sum of exponents.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weight-graded degree with respect to a chart.
    pub fn weighted_degree(&self, chart: &Chart) -> i64 {
        self.0
            .iter()
            .zip(&chart.weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    /// Product of monomials (exponent sum).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise quotient if `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {
                // Lex with earlier variables more significant: the monomial
                // whose first differing exponent is larger is the larger.
                for (a, b) in self.0.iter().zip(&other.0) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial attached to a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    /// The chart whose variables index the exponent vectors.
    pub chart: Arc<Chart>,
    /// Nonzero terms only, canonical graded-lex key order.
    pub terms: BTreeMap<Monomial, ExactScalar>,
}

impl MultiPoly {
    /// The zero polynomial.
    pub fn zero(chart: &Arc<Chart>) -> Self {
        MultiPoly {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(chart: &Arc<Chart>, c: ExactScalar) -> Self {
        let mut p = Self::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(chart.dim()), c);
        }
        p
    }

    /// The constant 1.
    pub fn one(chart: &Arc<Chart>) -> Self {
        Self::constant(chart, ExactScalar::one())
    }

    /// The variable with index `i`.
    pub fn var(chart: &Arc<Chart>, i: usize) -> Self {
        let mut p = Self::zero(chart);
        p.terms.insert(Monomial::var(chart.dim(), i), ExactScalar::one());
        p
    }

    /// The variable with the given name.
    pub fn var_named(chart: &Arc<Chart>, name: &str) -> Result<Self> {
        Ok(Self::var(chart, chart.var_index(name)?))
    }

    /// True iff no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff constant (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// The constant value if this polynomial is constant.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return Some(ExactScalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Number of nonzero terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Weighted degree if the polynomial is weighted-homogeneous.
    pub fn homogeneous_weighted_degree(&self) -> Option<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.weighted_degree(&self.chart);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }

    /// Add a term in place, dropping cancellations.
    pub fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        MultiPoly {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::one(&self.chart);
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        loop {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// Exact partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] = e - 1;
            out.add_term(m2, c * ExactScalar::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Substitute every chart variable by the corresponding image polynomial.
    /// All images must share one chart, which becomes the result chart.
    pub fn substitute_full(&self, images: &[MultiPoly]) -> Result<Self> {
        assert_eq!(images.len(), self.chart.dim());
        let target = match images.first() {
            Some(p) => p.chart.clone(),
            None => self.chart.clone(),
        };
        for p in images {
            if !same_chart(&p.chart, &target) {
                return Err(Error::ChartMismatch(
                    p.chart.name.clone(),
                    target.name.clone(),
                ));
            }
        }
        // Cache powers of each image as we go.
        let mut powers: Vec<Vec<MultiPoly>> =
            images.iter().map(|p| vec![MultiPoly::one(&target), p.clone()]).collect();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(&target, c.clone());
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
    }

    /// Substitute one variable by a polynomial in the same chart.
    pub fn bind(&self, i: usize, value: &MultiPoly) -> Result<Self> {
        if !same_chart(&self.chart, &value.chart) {
            return Err(Error::ChartMismatch(
                self.chart.name.clone(),
                value.chart.name.clone(),
            ));
        }
        let mut images: Vec<MultiPoly> = (0..self.chart.dim())
            .map(|j| MultiPoly::var(&self.chart, j))
            .collect();
        images[i] = value.clone();
        self.substitute_full(&images)
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        assert_eq!(point.len(), self.chart.dim());
        let mut total = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            total += v;
        }
        total
    }

    /// Map this polynomial into a chart that contains all its variables by
    /// name (e.g. from `u3` into `u3+lam`).
    pub fn embed(&self, target: &Arc<Chart>) -> Result<Self> {
        let mut index_map = Vec::with_capacity(self.chart.dim());
        for v in &self.chart.vars {
            index_map.push(target.var_index(v)?);
        }
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.dim()];
            for (i, &x) in m.0.iter().enumerate() {
                e[index_map[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact polynomial division: `Some(q)` with `self = q·d` or `None`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<Self> {
        assert!(same_chart(&self.chart, &d.chart), "chart mismatch");
        if self.is_zero() {
            return Some(Self::zero(&self.chart));
        }
        let (dm, dc) = d.leading()?;
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.chart);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.try_div(&dm)?;
            let qc = rc / &dc;
            let mut t = Self::zero(&self.chart);
            t.terms.insert(qm.clone(), qc.clone());
            quot.add_term(qm, qc);
            rem = &rem - &(&t * d);
        }
        Some(quot)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// View as univariate in `v`: coefficient polynomials (with `v`-exponent
    /// zeroed) keyed by `v`-degree.
    fn coeffs_wrt(&self, v: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[v];
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out.entry(e)
                .or_insert_with(|| MultiPoly::zero(&self.chart))
                .add_term(m2, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Leading coefficient as a polynomial in the remaining variables.
    fn lead_coeff_wrt(&self, v: usize) -> MultiPoly {
        let d = self.degree_in(v);
        let mut out = MultiPoly::zero(&self.chart);
        for (m, c) in &self.terms {
            if m.0[v] == d {
                let mut m2 = m.clone();
                m2.0[v] = 0;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Scale to integer coefficients with content 1 and positive leading
    /// (graded-lex) coefficient. Returns the normalized polynomial.
    pub fn integer_primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut factor = ExactScalar::new(denom_lcm, numer_gcd);
        if self
            .leading()
            .map(|(_, c)| (c * &factor).is_negative())
            .unwrap_or(false)
        {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Canonical JSON form: `{"chart": name, "terms": [...]}` with terms
    /// sorted graded-lex ascending.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "exp": m.0,
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        json!({"chart": self.chart.name, "terms": terms})
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Descending graded-lex: leading term first.
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.chart.vars[i].clone()
                    } else {
                        format!("{}^{}", self.chart.vars[i], e)
                    }
                })
                .collect();
            let coeff = format_rational(c);
            let body = if mono.is_empty() {
                coeff
            } else if c.is_one() {
                mono.join("*")
            } else if (-c).is_one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{}*{}", coeff, mono.join("*"))
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.chart.name, self)
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch");
        let mut out = MultiPoly::zero(&self.chart);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-ExactScalar::one())
    }
}

// ---------------------------------------------------------------------------
// Multivariate gcd via primitive subresultant PRS
// ---------------------------------------------------------------------------

/// Pseudo-remainder of `a` by `b` viewed as univariate in `v`:
/// `lc(b)^(deg a - deg b + 1) · a  mod  b`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let lcb = b.lead_coeff_wrt(v);
    let mut r = a.clone();
    let da = a.degree_in(v);
    let mut e: i64 = da as i64 - db as i64 + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.lead_coeff_wrt(v);
        let shift = {
            let mut t = MultiPoly::var(&a.chart, v).pow(dr - db);
            t = &t * &lr;
            t
        };
        r = &(&r * &lcb) - &(&shift * b);
        e -= 1;
    }
    let mut out = r;
    while e > 0 {
        out = &out * &lcb;
        e -= 1;
    }
    out
}

/// Content of `a` with respect to variable `v`: gcd of its `v`-coefficients.
fn content_wrt(a: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = MultiPoly::zero(&a.chart);
    for (_, coeff) in a.coeffs_wrt(v) {
        g = poly_gcd(&g, &coeff);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Gcd of multivariate polynomials over ℚ, returned integer-primitive with
/// positive leading coefficient (constant 1 when the inputs are coprime).
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.integer_primitive();
    }
    if b.is_zero() {
        return a.integer_primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(&a.chart);
    }
    // Main variable: first variable occurring in either input.
    let v = (0..a.chart.dim())
        .find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0)
        .expect("non-constant polynomial without variables");
    if a.degree_in(v) == 0 {
        return poly_gcd(&content_wrt(b, v), a).integer_primitive();
    }
    if b.degree_in(v) == 0 {
        return poly_gcd(&content_wrt(a, v), b).integer_primitive();
    }

    let ca = content_wrt(a, v);
    let cb = content_wrt(b, v);
    let cont = poly_gcd(&ca, &cb);
    let mut p = a
        .div_exact(&ca)
        .expect("content must divide")
        .integer_primitive();
    let mut q = b
        .div_exact(&cb)
        .expect("content must divide")
        .integer_primitive();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }

    // Subresultant PRS.
    let one = MultiPoly::one(&a.chart);
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = p.degree_in(v) - q.degree_in(v);
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            // Primitive parts are coprime in v.
            q = one.clone();
            break;
        }
        p = q;
        let divisor = {
            let mut d = g.clone();
            for _ in 0..delta {
                d = &d * &h;
            }
            d
        };
        q = r.div_exact(&divisor).expect("subresultant division is exact");
        g = p.lead_coeff_wrt(v);
        h = if delta == 0 {
            h
        } else {
            let gd = g.pow(delta);
            if delta == 1 {
                gd
            } else {
                gd.div_exact(&h.pow(delta - 1))
                    .expect("subresultant h-update is exact")
            }
        };
    }

    if q.is_constant() {
        return cont.integer_primitive();
    }
    let q_primitive = q
        .div_exact(&content_wrt(&q, v))
        .expect("content must divide");
    (&cont * &q_primitive).integer_primitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn xy() -> Arc<Chart> {
        Chart::new("xy", vec![("x".into(), 1), ("y".into(), 1)])
    }

    fn x(c: &Arc<Chart>) -> MultiPoly {
        MultiPoly::var(c, 0)
    }
    fn y(c: &Arc<Chart>) -> MultiPoly {
        MultiPoly::var(c, 1)
    }

    #[test]
    fn difference_of_squares() {
        let c = xy();
        let prod = &(&x(&c) + &y(&c)) * &(&x(&c) - &y(&c));
        let expect = &(&x(&c) * &x(&c)) - &(&y(&c) * &y(&c));
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let c = xy();
        let z = MultiPoly::zero(&c);
        assert!((&x(&c) * &z).is_zero());
    }

    #[test]
    fn graded_lex_ordering() {
        let c = xy();
        // x^2 > xy > y^2 > x > y > 1 in graded-lex.
        let p = &(&x(&c).pow(2) + &(&x(&c) * &y(&c))) + &MultiPoly::one(&c);
        let lead = p.leading().unwrap().0.clone();
        assert_eq!(lead, Monomial(vec![2, 0]));
    }

    #[test]
    fn derivative_and_leibniz() {
        let c = xy();
        let f = &x(&c).pow(2) * &y(&c);
        assert_eq!(f.derivative(0), &x(&c).scale(&qi(2)) * &y(&c));
        let g = &x(&c) + &y(&c).pow(3);
        let fg = &f * &g;
        let lhs = fg.derivative(1);
        let rhs = &(&f.derivative(1) * &g) + &(&f * &g.derivative(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division() {
        let c = xy();
        let a = &(&x(&c) + &y(&c)).pow(3) * &(&x(&c) - &y(&c));
        let d = (&x(&c) + &y(&c)).pow(2);
        let quo = a.div_exact(&d).unwrap();
        assert_eq!(&quo * &d, a);
        assert!(a.div_exact(&(&x(&c) - &y(&c).scale(&qi(2)))).is_none());
    }

    #[test]
    fn gcd_basic() {
        let c = xy();
        let s = &x(&c) + &y(&c);
        let a = &s.pow(2) * &(&x(&c) - &y(&c));
        let b = &s * &(&x(&c) + &y(&c).scale(&qi(2)));
        let g = poly_gcd(&a, &b);
        assert_eq!(g, s.integer_primitive());
        // Coprime inputs.
        let g2 = poly_gcd(&x(&c), &y(&c));
        assert!(g2.is_constant());
    }

    #[test]
    fn gcd_with_rational_coeffs() {
        let c = xy();
        let s = &x(&c).scale(&q(1, 2)) + &y(&c).scale(&q(3, 4));
        let a = &s * &x(&c);
        let b = &s * &y(&c);
        let g = poly_gcd(&a, &b);
        // 2x + 3y after integer-primitive normalization.
        let expect = (&x(&c).scale(&qi(2)) + &y(&c).scale(&qi(3))).integer_primitive();
        assert_eq!(g, expect);
    }

    #[test]
    fn substitution_homomorphism() {
        let c = xy();
        let target = Chart::p_chart(2);
        let images = vec![
            &MultiPoly::var(&target, 0) + &MultiPoly::var(&target, 1),
            MultiPoly::var(&target, 0),
        ];
        let f = &x(&c) * &y(&c);
        let g = &x(&c) + &y(&c).pow(2);
        let lhs = (&f * &g).substitute_full(&images).unwrap();
        let rhs = &f.substitute_full(&images).unwrap() * &g.substitute_full(&images).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_matches_substitution() {
        let c = xy();
        let f = &(&x(&c).pow(3) - &y(&c)).scale(&q(2, 3)) + &MultiPoly::one(&c);
        let v = f.eval(&[q(1, 2), qi(-3)]);
        assert_eq!(v, q(2, 3) * (q(1, 8) - qi(-3)) + qi(1));
    }

    #[test]
    fn canonical_json() {
        let c = xy();
        let f = &x(&c) + &y(&c).scale(&q(-1, 2));
        let s = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"chart":"xy","terms":[{"den":"2","exp":[0,1],"num":"-1"},{"den":"1","exp":[1,0],"num":"1"}]}"#
        );
    }
}

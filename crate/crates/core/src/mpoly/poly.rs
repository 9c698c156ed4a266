use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Monomial;
use crate::error::{Error, Result};

/// Polynomial with arbitrary-precision integer coefficients over a fixed
/// number of variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::term(BigInt::one(), Monomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::term(c.into(), Monomial::one(nvars))
    }

    pub fn term(coeff: impl Into<BigInt>, mono: Monomial) -> Self {
        let mut p = Self::zero(mono.nvars());
        p.add_term(mono, coeff.into());
        p
    }

    /// `x_var` in `nvars` variables.
    pub fn var(nvars: usize, var: usize) -> Self {
        Self::term(1, Monomial::var(nvars, var, 1))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I, C>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::VarCountMismatch {
                    left: nvars,
                    right: exps.len(),
                });
            }
            p.add_term(Monomial::new(exps), c.into());
        }
        Ok(p)
    }

    /// `lhs - rhs` for two monomials, the shape of every equation here.
    pub fn binomial(lhs: Monomial, rhs: Monomial) -> Self {
        let mut p = Self::zero(lhs.nvars());
        p.add_term(lhs, BigInt::one());
        p.add_term(rhs, -BigInt::one());
        p
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, coeff: BigInt) {
        debug_assert_eq!(mono.nvars(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Maximum total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_exponent(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).min().unwrap_or(0)
    }

    /// Sum of the coefficients, i.e. the value at the all-ones point.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn check_vars(&self, other: &SparsePoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other)?;
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<SparsePoly> {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(mono.quotient_of(m)?, c.clone());
        }
        Some(out)
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u32) -> SparsePoly {
        let mut base = self.clone();
        let mut acc = SparsePoly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces `x_last` by `x_last^ell`.
    pub fn gamma_ell(&self, ell: u32) -> SparsePoly {
        let last = self.nvars - 1;
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.exps_mut()[last] *= ell;
            out.add_term(m, c.clone());
        }
        out
    }

    /// Multiplies each term by `x_hom^(D - deg)` where `D` is the total
    /// degree, so the result is homogeneous of degree `D`.
    pub fn homogenize(&self, hom_var: usize) -> Result<SparsePoly> {
        if self.terms.keys().any(|m| m.exp(hom_var) != 0) {
            return Err(Error::HomVarOccurs { var: hom_var });
        }
        let d = self.total_degree();
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.exps_mut()[hom_var] = (d - m.degree()) as u32;
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// Sets `x_var = 1`, keeping the variable count.
    pub fn dehomogenize(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.exps_mut()[var] = 0;
            out.add_term(m, c.clone());
        }
        out
    }

    /// Re-embeds into `nvars` variables by appending (or dropping unused)
    /// trailing variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(nvars);
        for (m, c) in &self.terms {
            let m = m.with_nvars(nvars).ok_or(Error::VarCountMismatch {
                left: self.nvars,
                right: nvars,
            })?;
            out.terms.insert(m, c.clone());
        }
        Ok(out)
    }

    /// Replaces every variable by a monomial in a new set of variables and
    /// expands.
    pub fn substitute_monomials(&self, images: &[Monomial]) -> Result<SparsePoly> {
        if images.len() != self.nvars {
            return Err(Error::VarCountMismatch {
                left: self.nvars,
                right: images.len(),
            });
        }
        let target = images.first().map_or(0, Monomial::nvars);
        if images.iter().any(|m| m.nvars() != target) {
            return Err(Error::VarCountMismatch {
                left: target,
                right: images.iter().map(Monomial::nvars).max().unwrap_or(0),
            });
        }
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut image = Monomial::one(target);
            for (&e, img) in m.exponents().iter().zip(images) {
                if e > 0 {
                    image = image.mul(&img.pow(e));
                }
            }
            out.add_term(image, c.clone());
        }
        Ok(out)
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars, "point dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }

    /// Evaluation modulo a small prime `q` at a point with entries in `0..q`.
    pub fn eval_mod(&self, point: &[u64], q: u64) -> u64 {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let qb = BigInt::from(q);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let c = c.mod_floor_u64(&qb);
            if c == 0 {
                continue;
            }
            let mut v = c;
            for (&e, &x) in m.exponents().iter().zip(point) {
                if e > 0 {
                    v = v * pow_mod(x, e as u64, q) % q;
                    if v == 0 {
                        break;
                    }
                }
            }
            acc = (acc + v) % q;
        }
        acc
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, q: &BigInt) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, q: &BigInt) -> u64 {
        let r = self % q;
        let r = if r.is_negative() { r + q } else { r };
        r.to_u64().expect("residue fits")
    }
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, q: u64) -> u64 {
    base %= q;
    let mut acc = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_add(rhs).expect("variable count mismatch in add")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_sub(rhs).expect("variable count mismatch in sub")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_mul(rhs).expect("variable count mismatch in mul")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> SparsePoly {
        SparsePoly::parse(s, n).unwrap()
    }

    #[test]
    fn additive_inverse() {
        let a = p("x1 - x2", 3);
        let b = p("x2 - x1", 3);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn binomial_square() {
        let a = p("x1 - x0", 2);
        assert_eq!(a.pow(2), p("x1^2 - 2*x0*x1 + x0^2", 2));
    }

    #[test]
    fn product_of_two_binomials() {
        let f1 = p("x1^2 - x0*x3", 4);
        let f2 = p("x2^3 - x0*x3^2", 4);
        let expected = p(
            "x1^2*x2^3 - x0*x1^2*x3^2 - x0*x2^3*x3 + x0^2*x3^3",
            4,
        );
        let prod = &f1 * &f2;
        assert_eq!(prod.len(), 4);
        assert_eq!(prod, expected);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = SparsePoly::var(2, 0);
        let b = SparsePoly::var(3, 0);
        assert!(matches!(
            a.try_add(&b),
            Err(Error::VarCountMismatch { left: 2, right: 3 })
        ));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn gamma_ell_examples() {
        // Variables x1..x4 stored as x0..x3 here: the last one is substituted.
        let g = p("x0*x1 - x3", 4);
        assert_eq!(g.gamma_ell(2), p("x0*x1 - x3^2", 4));
        assert_eq!(g.gamma_ell(1), g);
        let h = p("x0*x1*x2^3 - x3", 4);
        assert_eq!(h.gamma_ell(3), p("x0*x1*x2^3 - x3^3", 4));
    }

    #[test]
    fn homogenize_examples() {
        let g = p("x1*x2*x3^3 - x4", 5);
        assert_eq!(g.homogenize(0).unwrap(), p("x1*x2*x3^3 - x0^4*x4", 5));
        let h = p("x1^2 - x2*x3", 4);
        assert_eq!(h.homogenize(0).unwrap(), h);
        let g = p("x3^5 - x4^2", 5);
        assert_eq!(g.homogenize(0).unwrap(), p("x3^5 - x0^3*x4^2", 5));
        assert!(matches!(
            p("x0 + x1", 2).homogenize(0),
            Err(Error::HomVarOccurs { var: 0 })
        ));
    }

    #[test]
    fn substitution() {
        let u3 = |a: u32, b: u32| Monomial::new(vec![a, b]);
        let f1 = p("x1^2 - x0*x3", 4);
        let images = [u3(6, 0), u3(3, 3), u3(2, 4), u3(0, 6)];
        assert!(f1.substitute_monomials(&images).unwrap().is_zero());
        let one = SparsePoly::one(4);
        assert_eq!(one.substitute_monomials(&images).unwrap(), SparsePoly::one(2));
        let d = p("x0 - x1", 2);
        let out = d.substitute_monomials(&[u3(1, 1), u3(2, 0)]).unwrap();
        assert_eq!(out, p("x0*x1 - x0^2", 2));
    }

    #[test]
    fn evaluation() {
        let f = p("x0^2 - 3*x1 + 7", 2);
        let v = f.eval(&[BigInt::from(4), BigInt::from(-2)]);
        assert_eq!(v, BigInt::from(29));
        assert_eq!(f.eval_mod(&[4, 5], 7), (16 + 7 * 3 - 15 + 7) % 7);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly(nvars: usize) -> impl Strategy<Value = SparsePoly> {
            proptest::collection::vec(
                (proptest::collection::vec(0u32..4, nvars), -5i64..6),
                0..6,
            )
            .prop_map(move |t| SparsePoly::from_terms(nvars, t).unwrap())
        }

        proptest! {
            #[test]
            fn distributive(a in poly(3), b in poly(3), c in poly(3)) {
                prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            }

            #[test]
            fn pow_matches_repeated_product(a in poly(3), k in 0u32..5) {
                let mut expected = SparsePoly::one(3);
                for _ in 0..k {
                    expected = &expected * &a;
                }
                prop_assert_eq!(a.pow(k), expected);
            }

            #[test]
            fn gamma_is_a_ring_homomorphism(a in poly(3), b in poly(3), ell in 1u32..5) {
                prop_assert_eq!((&a * &b).gamma_ell(ell), &a.gamma_ell(ell) * &b.gamma_ell(ell));
                prop_assert_eq!((&a + &b).gamma_ell(ell), &a.gamma_ell(ell) + &b.gamma_ell(ell));
            }

            #[test]
            fn homogenize_then_dehomogenize(a in poly(3)) {
                let a = a.with_nvars(4).unwrap();
                // Shift variables so x0 is free: x_i -> x_{i+1}.
                let shifted = a.substitute_monomials(&[
                    Monomial::var(4, 1, 1),
                    Monomial::var(4, 2, 1),
                    Monomial::var(4, 3, 1),
                    Monomial::one(4),
                ]).unwrap();
                let h = shifted.homogenize(0).unwrap();
                prop_assert!(h.is_homogeneous());
                prop_assert_eq!(h.dehomogenize(0), shifted);
            }
        }
    }
}

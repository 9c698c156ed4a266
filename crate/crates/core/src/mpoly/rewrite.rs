use std::collections::BTreeSet;

use serde::Serialize;

use super::{Monomial, SparsePoly};
use crate::error::{Error, Result};

/// `x_var^threshold -> replacement`, the rewriting direction of the binomial
/// `x_var^a - x_0^(a-b) * x_j^b` with `j > var`.
///
/// Invariants, checked on construction:
/// * `var >= 1` and `threshold > b > 0`, where `b` is the replacement's
///   degree outside `x_0`;
/// * the replacement does not involve `x_1, ..., x_var`;
/// * the replacement has total degree `threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    var: usize,
    threshold: u32,
    replacement: Monomial,
}

impl RewriteRule {
    pub fn new(var: usize, threshold: u32, replacement: Monomial) -> Result<Self> {
        let nvars = replacement.nvars();
        if var == 0 || var >= nvars {
            return Err(Error::InvalidRule(format!(
                "rewritten variable x{var} must be one of x1..x{}",
                nvars.saturating_sub(1)
            )));
        }
        if replacement.exponents()[1..=var].iter().any(|&e| e != 0) {
            return Err(Error::InvalidRule(format!(
                "replacement {replacement} involves a variable with index <= {var}"
            )));
        }
        if replacement.degree() != threshold as u64 {
            return Err(Error::InvalidRule(format!(
                "replacement {replacement} has degree {} but the threshold is {threshold}",
                replacement.degree()
            )));
        }
        let b = replacement.degree() - replacement.exp(0) as u64;
        if !(b > 0 && (threshold as u64) > b) {
            return Err(Error::InvalidRule(format!(
                "need threshold > b > 0, got threshold {threshold}, b {b}"
            )));
        }
        Ok(Self {
            var,
            threshold,
            replacement,
        })
    }

    /// `x_var^a -> x_0^(a-b) * x_target^b` in `nvars` variables.
    pub fn binomial(nvars: usize, var: usize, a: u32, b: u32, target: usize) -> Result<Self> {
        if target >= nvars || b >= a {
            return Err(Error::InvalidRule(format!(
                "x{var}^{a} -> x0^(a-b)*x{target}^{b} is not a valid rule in {nvars} variables"
            )));
        }
        let mut r = Monomial::var(nvars, target, b);
        r.exps_mut()[0] = a - b;
        Self::new(var, a, r)
    }

    /// Reads `x_i^a - x_0^(a-b) * x_j^b` (either sign) as a rule for `x_i`,
    /// taking the pure power with the smallest index as the left side.
    pub fn from_binomial(f: &SparsePoly) -> Result<Self> {
        let bad = || Error::InvalidRule(format!("{f} is not a binomial x_i^a - x_0^(a-b)*x_j^b"));
        if f.len() != 2 {
            return Err(bad());
        }
        let terms: Vec<_> = f.terms().collect();
        if (terms[0].1 + terms[1].1) != 0.into() || terms[0].1.magnitude() != &1u32.into() {
            return Err(bad());
        }
        let pure = |m: &Monomial| {
            let support: Vec<usize> = (1..m.nvars()).filter(|&i| m.exp(i) > 0).collect();
            (m.exp(0) == 0 && support.len() == 1).then(|| support[0])
        };
        let mut candidates: Vec<(usize, &Monomial, &Monomial)> = Vec::new();
        if let Some(i) = pure(terms[0].0) {
            candidates.push((i, terms[0].0, terms[1].0));
        }
        if let Some(i) = pure(terms[1].0) {
            candidates.push((i, terms[1].0, terms[0].0));
        }
        candidates.sort_by_key(|c| c.0);
        for (i, lhs, rhs) in candidates {
            if let Ok(rule) = Self::new(i, lhs.exp(i), rhs.clone()) {
                return Ok(rule);
            }
        }
        Err(bad())
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn replacement(&self) -> &Monomial {
        &self.replacement
    }

    pub fn nvars(&self) -> usize {
        self.replacement.nvars()
    }

    /// Exponent of the replacement outside `x_0`.
    pub fn b(&self) -> u32 {
        (self.replacement.degree() - self.replacement.exp(0) as u64) as u32
    }

    /// The single variable (besides `x_0`) in the replacement, if there is
    /// exactly one.
    pub fn target(&self) -> Option<usize> {
        let support: Vec<usize> = (1..self.nvars())
            .filter(|&i| self.replacement.exp(i) > 0)
            .collect();
        (support.len() == 1).then(|| support[0])
    }

    /// `x_var^threshold - replacement`.
    pub fn polynomial(&self) -> SparsePoly {
        SparsePoly::binomial(
            Monomial::var(self.nvars(), self.var, self.threshold),
            self.replacement.clone(),
        )
    }

    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        let r = self.replacement.with_nvars(nvars).ok_or(Error::VarCountMismatch {
            left: self.nvars(),
            right: nvars,
        })?;
        Self::new(self.var, self.threshold, r)
    }
}

impl std::fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} -> {}",
            Monomial::var(self.nvars(), self.var, self.threshold),
            self.replacement
        )
    }
}

impl Serialize for RewriteRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn sorted_rules(rules: &[RewriteRule]) -> Result<Vec<&RewriteRule>> {
    let mut seen = BTreeSet::new();
    for r in rules {
        if !seen.insert(r.var) {
            return Err(Error::RuleConflict { var: r.var });
        }
    }
    let mut sorted: Vec<&RewriteRule> = rules.iter().collect();
    sorted.sort_by_key(|r| r.var);
    Ok(sorted)
}

/// Normal form of one monomial: for each rule in increasing variable order,
/// `x_i^e` becomes `x_i^(e mod a) * replacement^(e div a)`.
pub fn reduce_monomial(mono: &Monomial, rules: &[RewriteRule]) -> Result<Monomial> {
    let sorted = sorted_rules(rules)?;
    Ok(reduce_monomial_sorted(mono.clone(), &sorted))
}

fn reduce_monomial_sorted(mut mono: Monomial, rules: &[&RewriteRule]) -> Monomial {
    for rule in rules {
        let e = mono.exp(rule.var);
        let q = e / rule.threshold;
        if q > 0 {
            mono.exps_mut()[rule.var] = e % rule.threshold;
            mono = mono.mul(&rule.replacement.pow(q));
        }
    }
    mono
}

/// Normal form of `p` modulo the binomials of `rules`: every term ends up
/// with `x_i` below the threshold of the rule for `x_i`.
pub fn reduce(p: &SparsePoly, rules: &[RewriteRule]) -> Result<SparsePoly> {
    if let Some(r) = rules.iter().find(|r| r.nvars() != p.nvars()) {
        return Err(Error::VarCountMismatch {
            left: p.nvars(),
            right: r.nvars(),
        });
    }
    let sorted = sorted_rules(rules)?;
    let mut out = SparsePoly::zero(p.nvars());
    for (m, c) in p.terms() {
        out.add_term(reduce_monomial_sorted(m.clone(), &sorted), c.clone());
    }
    Ok(out)
}

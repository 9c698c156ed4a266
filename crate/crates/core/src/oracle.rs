//! Independent checks: symbolic vanishing on a parameterization, toric
//! binomial enumeration, exhaustive zero sets over small prime fields, and a
//! naive re-derivation of `F^p = x_0^gamma F*` modulo the base binomials.
//!
//! Finite-field results are evidence about characteristic `q` only and are
//! labeled as such in every report.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::curves::{ExtensionSpec, FStarResult, Parameterization};
use crate::error::{Error, Result};
use crate::mpoly::{Monomial, RewriteRule, SparsePoly};

/// Label attached to every finite-field report.
pub const EVIDENCE: &str = "EVIDENCE";

pub const MAX_TORIC_BOUND: u32 = 12;
pub const MAX_PROJECTIVE_DIM: usize = 5;
pub const MAX_POINTS: u64 = 10_000_000;
pub const DEFAULT_PRIMES: [u64; 3] = [5, 7, 11];

/// `true` iff `p` becomes the zero polynomial in `(u, v)` after substituting
/// the parameterization.
pub fn vanishes_on(p: &SparsePoly, param: &Parameterization) -> Result<bool> {
    Ok(p.substitute_monomials(&param.images)?.is_zero())
}

/// Evaluates `p` at the parameterized points `(u, v)` exactly; `true` iff
/// every value is zero.
pub fn vanishes_at(p: &SparsePoly, param: &Parameterization, uv: &[(BigInt, BigInt)]) -> Result<bool> {
    if p.nvars() != param.nvars() {
        return Err(Error::VarCountMismatch {
            left: p.nvars(),
            right: param.nvars(),
        });
    }
    Ok(uv.iter().all(|(u, v)| {
        let point: Vec<BigInt> = param
            .images
            .iter()
            .map(|m| num_traits::pow(u.clone(), m.exp(0) as usize) * num_traits::pow(v.clone(), m.exp(1) as usize))
            .collect();
        p.eval(&point).is_zero()
    }))
}

/// All binomials `x^A - x^B` (`A > B` in the term order) with
/// `deg A = deg B <= bound` and equal `v`-weight `sum A_j e_j`, where `x_0`
/// has weight 0 and `x_j` weight `e_j`.
pub fn toric_binomials(exponents: &[u64], bound: u32) -> Result<Vec<SparsePoly>> {
    if bound > MAX_TORIC_BOUND {
        return Err(Error::BoundTooLarge {
            bound,
            max: MAX_TORIC_BOUND,
        });
    }
    let nvars = exponents.len() + 1;
    let mut groups: BTreeMap<(u32, u64), Vec<Monomial>> = BTreeMap::new();
    let mut exps = vec![0u32; nvars];
    collect_monomials(exponents, bound, 0, &mut exps, &mut groups);
    let mut out = Vec::new();
    for (&(deg, _), monos) in &groups {
        if deg == 0 {
            continue;
        }
        let mut monos = monos.clone();
        monos.sort_by(|a, b| b.cmp(a));
        for (i, a) in monos.iter().enumerate() {
            for b in &monos[i + 1..] {
                out.push(SparsePoly::binomial(a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

fn collect_monomials(
    exponents: &[u64],
    budget: u32,
    var: usize,
    exps: &mut Vec<u32>,
    groups: &mut BTreeMap<(u32, u64), Vec<Monomial>>,
) {
    if var == exps.len() {
        let deg = exps.iter().sum();
        let weight = exps[1..]
            .iter()
            .zip(exponents)
            .map(|(&a, &e)| a as u64 * e)
            .sum();
        groups
            .entry((deg, weight))
            .or_default()
            .push(Monomial::new(exps.clone()));
        return;
    }
    for e in 0..=budget {
        exps[var] = e;
        collect_monomials(exponents, budget - e, var + 1, exps, groups);
    }
    exps[var] = 0;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteFieldConfig {
    q: u64,
    caveat_ack: bool,
}

impl FiniteFieldConfig {
    pub fn new(q: u64, caveat_ack: bool) -> Result<Self> {
        if !(3..=101).contains(&q) || !is_prime(q) {
            return Err(Error::InvalidField(q));
        }
        Ok(Self { q, caveat_ack })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn caveat_ack(&self) -> bool {
        self.caveat_ack
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Primes from [`DEFAULT_PRIMES`] dividing no pairwise difference of the
/// exponents. Falls back to the smallest larger prime <= 101 that qualifies.
pub fn default_primes(exponents: &[u64]) -> Vec<u64> {
    let values = exponents;
    let ok = |q: u64| {
        values
            .iter()
            .enumerate()
            .all(|(i, &a)| values[i + 1..].iter().all(|&b| a.abs_diff(b) % q != 0))
    };
    let chosen: Vec<u64> = DEFAULT_PRIMES.iter().copied().filter(|&q| ok(q)).collect();
    if !chosen.is_empty() {
        return chosen;
    }
    (13..=101).filter(|&q| is_prime(q) && ok(q)).take(1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSetMode {
    Exact,
    /// Removes the linear subspace `x_i = 0 (i in coords)` from the common
    /// zeros before comparing.
    ExcludeLine(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSetReport {
    pub label: &'static str,
    pub q: u64,
    pub caveat_ack: bool,
    pub mode: ZeroSetMode,
    pub dimension: usize,
    pub hypersurface_points: BTreeSet<Vec<u64>>,
    pub curve_points: BTreeSet<Vec<u64>>,
    pub excluded_points: BTreeSet<Vec<u64>>,
    pub extras: BTreeSet<Vec<u64>>,
    pub missing: BTreeSet<Vec<u64>>,
}

impl ZeroSetReport {
    pub fn agrees(&self) -> bool {
        self.extras.is_empty() && self.missing.is_empty()
    }
}

/// Scales a point so its first nonzero coordinate is 1; `None` for zero.
pub fn normalize_point(point: &[u64], q: u64) -> Option<Vec<u64>> {
    let lead = *point.iter().find(|&&c| c != 0)?;
    let inv = inverse_mod(lead, q);
    Some(point.iter().map(|&c| c * inv % q).collect())
}

fn inverse_mod(a: u64, q: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(q));
    e.x.mod_floor(&BigInt::from(q)).to_u64().expect("inverse fits")
}

/// Coefficients reduced mod `q`, for fast repeated evaluation.
struct ModPoly {
    terms: Vec<(u64, Vec<u32>)>,
}

impl ModPoly {
    fn new(p: &SparsePoly, q: u64) -> Self {
        let qb = BigInt::from(q);
        let terms = p
            .terms()
            .filter_map(|(m, c)| {
                let c = c.mod_floor(&qb).to_u64().expect("residue fits");
                (c != 0).then(|| (c, m.exponents().to_vec()))
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, powers: &[Vec<u64>], q: u64) -> u64 {
        self.terms.iter().fold(0, |acc, (c, exps)| {
            let t = exps
                .iter()
                .enumerate()
                .fold(*c, |t, (i, &e)| t * powers[i][e as usize] % q);
            (acc + t) % q
        })
    }
}

/// Enumerates `P^k(F_q)` and compares the common zeros of `equations` with
/// the image of `P^1(F_q)` under `param`.
pub fn zero_set_compare(
    equations: &[SparsePoly],
    param: &Parameterization,
    cfg: FiniteFieldConfig,
    mode: ZeroSetMode,
) -> Result<ZeroSetReport> {
    if param.hom_degree == 0 {
        return Err(Error::InvalidGenerators(
            "zero-set comparison needs a projective parameterization".into(),
        ));
    }
    let nvars = param.nvars();
    if let Some(p) = equations.iter().find(|p| p.nvars() != nvars) {
        return Err(Error::VarCountMismatch {
            left: p.nvars(),
            right: nvars,
        });
    }
    let dim = nvars - 1;
    if dim > MAX_PROJECTIVE_DIM {
        return Err(Error::TooLarge {
            what: "projective dimension",
            value: dim as u64,
            cap: MAX_PROJECTIVE_DIM as u64,
        });
    }
    let q = cfg.q;
    let count = (q.pow(nvars as u32) - 1) / (q - 1);
    if count > MAX_POINTS {
        return Err(Error::TooLarge {
            what: "number of projective points",
            value: count,
            cap: MAX_POINTS,
        });
    }
    let line = match &mode {
        ZeroSetMode::Exact => None,
        ZeroSetMode::ExcludeLine(coords) => {
            if let Some(&c) = coords.iter().find(|&&c| c >= nvars) {
                return Err(Error::VarCountMismatch { left: c + 1, right: nvars });
            }
            Some(coords.clone())
        }
    };

    let compiled: Vec<ModPoly> = equations.iter().map(|p| ModPoly::new(p, q)).collect();
    let max_deg = equations
        .iter()
        .flat_map(|p| p.terms().flat_map(|(m, _)| m.exponents().to_vec()))
        .max()
        .unwrap_or(0) as usize;

    let mut hypersurface_points = BTreeSet::new();
    let mut point = vec![0u64; nvars];
    for lead in 0..nvars {
        point.iter_mut().for_each(|c| *c = 0);
        point[lead] = 1;
        let free = nvars - lead - 1;
        for idx in 0..q.pow(free as u32) {
            let mut r = idx;
            for c in point[lead + 1..].iter_mut() {
                *c = r % q;
                r /= q;
            }
            let powers: Vec<Vec<u64>> = point
                .iter()
                .map(|&x| {
                    let mut row = Vec::with_capacity(max_deg + 1);
                    let mut acc = 1u64;
                    for _ in 0..=max_deg {
                        row.push(acc);
                        acc = acc * x % q;
                    }
                    row
                })
                .collect();
            if compiled.iter().all(|p| p.eval(&powers, q) == 0) {
                hypersurface_points.insert(point.clone());
            }
        }
    }

    let mut curve_points = BTreeSet::new();
    let params = (0..q).map(|t| (1, t)).chain(std::iter::once((0, 1)));
    for (u, v) in params {
        if let Some(p) = normalize_point(&param.point_mod(u, v, q), q) {
            curve_points.insert(p);
        }
    }

    let on_line = |p: &Vec<u64>| line.as_ref().is_some_and(|c| c.iter().all(|&i| p[i] == 0));
    let excluded_points: BTreeSet<Vec<u64>> =
        hypersurface_points.iter().filter(|p| on_line(p)).cloned().collect();
    let extras = hypersurface_points
        .iter()
        .filter(|p| !on_line(p) && !curve_points.contains(*p))
        .cloned()
        .collect();
    let missing = curve_points
        .iter()
        .filter(|p| !hypersurface_points.contains(*p))
        .cloned()
        .collect();

    Ok(ZeroSetReport {
        label: EVIDENCE,
        q,
        caveat_ack: cfg.caveat_ack,
        mode,
        dimension: dim,
        hypersurface_points,
        curve_points,
        excluded_points,
        extras,
        missing,
    })
}

/// Rewrites one factor `x_i^a` at a time, choosing among all applicable
/// (term, rule) pairs with `choose(len)`. Returns the normal form and the
/// number of steps taken, or `None` if more than `max_steps` were needed.
pub fn naive_reduce(
    p: &SparsePoly,
    rules: &[RewriteRule],
    max_steps: u64,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<Option<(SparsePoly, u64)>> {
    if let Some(r) = rules.iter().find(|r| r.nvars() != p.nvars()) {
        return Err(Error::VarCountMismatch {
            left: p.nvars(),
            right: r.nvars(),
        });
    }
    let lhs: Vec<Monomial> = rules
        .iter()
        .map(|r| Monomial::var(r.nvars(), r.var(), r.threshold()))
        .collect();
    let mut current: BTreeMap<Monomial, BigInt> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut steps = 0u64;
    loop {
        let candidates: Vec<(Monomial, usize)> = current
            .keys()
            .flat_map(|m| {
                lhs.iter()
                    .enumerate()
                    .filter(|(_, l)| l.divides(m))
                    .map(|(k, _)| (m.clone(), k))
                    .collect::<Vec<_>>()
            })
            .collect();
        if candidates.is_empty() {
            break;
        }
        if steps == max_steps {
            return Ok(None);
        }
        let (m, k) = &candidates[choose(candidates.len()) % candidates.len()];
        let c = current.remove(m).expect("candidate term present");
        let image = lhs[*k]
            .quotient_of(m)
            .expect("rule applies")
            .mul(rules[*k].replacement());
        let slot = current.entry(image.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            current.remove(&image);
        }
        steps += 1;
    }
    let out = SparsePoly::from_terms(
        p.nvars(),
        current.into_iter().map(|(m, c)| (m.exponents().to_vec(), c)),
    )?;
    Ok(Some((out, steps)))
}

/// Step budget for [`naive_reduce`]: each step lowers the exponent of some
/// `x_i` by its threshold and raises only later variables, so
/// `nvars * degree` steps per term always suffice.
pub fn step_bound(p: &SparsePoly) -> u64 {
    (p.len() as u64).max(1) * p.nvars() as u64 * p.total_degree().max(1) * p.total_degree().max(1)
}

/// Recomputes `F^p` by repeated multiplication, rewrites it with
/// [`naive_reduce`] and compares with `x_0^gamma F*` term by term.
pub fn check_eq1(spec: &ExtensionSpec, result: &FStarResult) -> Result<bool> {
    check_eq1_with(spec, result, |_| 0)
}

pub fn check_eq1_with(
    spec: &ExtensionSpec,
    result: &FStarResult,
    choose: impl FnMut(usize) -> usize,
) -> Result<bool> {
    let f = crate::curves::projective_f(spec)?;
    let mut fp = SparsePoly::one(f.nvars());
    for _ in 0..result.p {
        fp = fp.try_mul(&f)?;
    }
    let bound = step_bound(&fp);
    let Some((reduced, _)) = naive_reduce(&fp, &result.rules, bound, choose)? else {
        return Ok(false);
    };
    let gamma = u32::try_from(result.gamma).map_err(|_| Error::TooLarge {
        what: "gamma",
        value: result.gamma,
        cap: u32::MAX as u64,
    })?;
    let lhs = result
        .fstar
        .mul_monomial(&Monomial::var(f.nvars(), 0, gamma));
    Ok(reduced == lhs)
}

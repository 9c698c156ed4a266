//! Monomial curves, their extensions, and the hypersurface equations that
//! cut them out.
//!
//! A projective curve `C(m_1, ..., m_n)` in `P^n` lives in the variables
//! `x_0, ..., x_n`; its extension `C(l*m_1, ..., l*m_n, m)` lives in
//! `x_0, ..., x_{n+1}`. The extension's exponent list keeps that order and is
//! never sorted, so `m` is always the exponent of `x_{n+1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::{reduce, Monomial, RewriteRule, SparsePoly};
use crate::numsg::{self, Representation, SemigroupGens};

/// Largest `p = a_1 * ... * a_{n-1}` accepted by [`build_fstar`].
pub const MAX_POWER: u64 = 10_000;

fn small(value: u64, what: &'static str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::TooLarge {
        what,
        value,
        cap: u32::MAX as u64,
    })
}

/// Projective monomial curve `C(m_1, ..., m_n)` in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialCurve {
    exponents: SemigroupGens,
}

impl MonomialCurve {
    pub fn new(exponents: Vec<u64>) -> Result<Self> {
        Ok(Self {
            exponents: SemigroupGens::new(exponents)?,
        })
    }

    pub fn gens(&self) -> &SemigroupGens {
        &self.exponents
    }

    pub fn exponents(&self) -> &[u64] {
        self.exponents.as_slice()
    }

    /// Projective dimension `n` (number of exponents).
    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// Number of homogeneous coordinates, `n + 1`.
    pub fn nvars(&self) -> usize {
        self.n() + 1
    }

    pub fn parameterization(&self) -> Result<Parameterization> {
        Parameterization::projective(self.exponents())
    }
}

/// Images of the coordinates as monomials in `(u, v)`.
///
/// Projective: `x_0 -> u^M` and the coordinate with exponent `a` maps to
/// `u^(M-a) v^a`, with `M` the largest exponent. Affine: `x_0 -> 1` and
/// `x_j -> v^a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameterization {
    #[serde(serialize_with = "serialize_images")]
    pub images: Vec<Monomial>,
    pub hom_degree: u64,
}

fn serialize_images<S: serde::Serializer>(
    images: &[Monomial],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(images.iter().map(|m| {
        m.to_string()
            .replace("x0", "u")
            .replace("x1", "v")
    }))
}

impl Parameterization {
    pub fn projective(exponents: &[u64]) -> Result<Self> {
        let top = exponents.iter().copied().max().unwrap_or(0);
        let m = small(top, "largest exponent")?;
        let mut images = vec![Monomial::new(vec![m, 0])];
        for &a in exponents {
            let a = small(a, "exponent")?;
            images.push(Monomial::new(vec![m - a, a]));
        }
        Ok(Self {
            images,
            hom_degree: top,
        })
    }

    pub fn affine(exponents: &[u64]) -> Result<Self> {
        let mut images = vec![Monomial::one(2)];
        for &a in exponents {
            images.push(Monomial::new(vec![0, small(a, "exponent")?]));
        }
        Ok(Self {
            images,
            hom_degree: 0,
        })
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// The point with parameter `(u : v)` over `F_q`, entries in `0..q`.
    pub fn point_mod(&self, u: u64, v: u64, q: u64) -> Vec<u64> {
        self.images
            .iter()
            .map(|m| {
                crate::mpoly::pow_mod(u, m.exp(0) as u64, q) * crate::mpoly::pow_mod(v, m.exp(1) as u64, q)
                    % q
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionKind {
    /// `delta(m) > l`
    Nice,
    /// `delta(m) <= l`
    Bad,
}

/// The extension `C(l*m_1, ..., l*m_n, m)` of a base curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionSpec {
    base: MonomialCurve,
    ell: u64,
    m: u64,
    rep: Representation,
    kind: ExtensionKind,
}

impl ExtensionSpec {
    pub fn base(&self) -> &MonomialCurve {
        &self.base
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Minimal representation of `m` chosen by [`numsg::degree`].
    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn delta(&self) -> u64 {
        self.rep.weight
    }

    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }

    /// `(l*m_1, ..., l*m_n, m)`, in that order.
    pub fn exponents(&self) -> Vec<u64> {
        self.base
            .exponents()
            .iter()
            .map(|&a| a * self.ell)
            .chain(std::iter::once(self.m))
            .collect()
    }

    /// `n + 2` coordinates `x_0, ..., x_{n+1}`.
    pub fn nvars(&self) -> usize {
        self.base.n() + 2
    }

    pub fn parameterization(&self) -> Result<Parameterization> {
        Parameterization::projective(&self.exponents())
    }

    pub fn affine_parameterization(&self) -> Result<Parameterization> {
        Parameterization::affine(&self.exponents())
    }

    /// `x_1^s_1 * ... * x_n^s_n` in `n + 2` variables.
    fn rep_monomial(&self) -> Result<Monomial> {
        let mut e = vec![0u32; self.nvars()];
        for (i, &s) in self.rep.coeffs.iter().enumerate() {
            e[i + 1] = small(s, "representation coefficient")?;
        }
        Ok(Monomial::new(e))
    }
}

pub fn make_extension(base: &MonomialCurve, ell: u64, m: u64) -> Result<ExtensionSpec> {
    if ell == 0 || m == 0 {
        return Err(Error::InvalidGenerators(format!(
            "l = {ell} and m = {m} must be positive"
        )));
    }
    if ell.gcd(&m) != 1 {
        return Err(Error::NotCoprime { ell, m });
    }
    let rep = numsg::degree(m, base.gens())?;
    let kind = if rep.weight > ell {
        ExtensionKind::Nice
    } else {
        ExtensionKind::Bad
    };
    Ok(ExtensionSpec {
        base: base.clone(),
        ell,
        m,
        rep,
        kind,
    })
}

/// `G = x_1^s_1 * ... * x_n^s_n - x_{n+1}^l`, the affine equation added to
/// the base ideal. `x_0` does not occur.
pub fn affine_g(spec: &ExtensionSpec) -> Result<SparsePoly> {
    let nv = spec.nvars();
    let ell = small(spec.ell, "l")?;
    Ok(SparsePoly::binomial(
        spec.rep_monomial()?,
        Monomial::var(nv, nv - 1, ell),
    ))
}

/// The homogenized equation of an extension.
///
/// Nice: `x^s - x_0^(delta-l) x_{n+1}^l`. Bad: `x_{n+1}^l - x_0^(l-delta) x^s`.
pub fn projective_f(spec: &ExtensionSpec) -> Result<SparsePoly> {
    let nv = spec.nvars();
    let ell = small(spec.ell, "l")?;
    let delta = small(spec.delta(), "delta(m)")?;
    let xs = spec.rep_monomial()?;
    let top = Monomial::var(nv, nv - 1, ell);
    Ok(match spec.kind {
        ExtensionKind::Nice => {
            let mut rhs = top;
            rhs.exps_mut()[0] = delta - ell;
            SparsePoly::binomial(xs, rhs)
        }
        ExtensionKind::Bad => {
            let mut rhs = xs;
            rhs.exps_mut()[0] = ell - delta;
            SparsePoly::binomial(top, rhs)
        }
    })
}

/// Which binomial shape the base equations `f_i` have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ShapeForm {
    /// `f_i = x_i^a_i - x_0^(a_i-b_i) x_n^b_i`
    #[serde(rename = "xn")]
    TopVariable,
    /// `f_i = x_i^a_i - x_0^(a_i-b_i) x_{i+1}^b_i`
    #[serde(rename = "chain")]
    Chain,
    /// No rewriting: `m` is a multiple of `m_n` and `F* = F`.
    #[serde(rename = "none")]
    Trivial,
}

impl std::fmt::Display for ShapeForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShapeForm::TopVariable => "xn",
            ShapeForm::Chain => "chain",
            ShapeForm::Trivial => "none",
        })
    }
}

/// Outcome of the `F*` construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FStarResult {
    pub form: ShapeForm,
    pub rules: Vec<RewriteRule>,
    /// `p = a_1 * ... * a_{n-1}`
    pub p: u64,
    /// `p_i = b_i p / a_i` (xn form) or `q_0, ..., q_{n-2}` (chain form).
    pub partials: Vec<u64>,
    pub gamma: u64,
    pub alpha: u64,
    /// `delta(m) - l - sum (p - w_i - 1) s_i`; the construction requires it
    /// to be positive.
    pub gate_margin: i64,
    /// `delta(m) - l - gamma`, equivalently `s_n - l - sum (p - w_i - 1) s_i`.
    pub theorem_margin: i64,
    /// Smallest power of `x_0` among the terms of `F*` other than `x_n^alpha`.
    pub beta: u32,
    pub f: SparsePoly,
    /// `reduce(F^p)`, equal to `x_0^gamma * F*`.
    pub reduced: SparsePoly,
    pub fstar: SparsePoly,
}

impl FStarResult {
    pub fn theorem_bound_holds(&self) -> bool {
        self.theorem_margin > 0
    }
}

/// Checks that `rules` have one of the supported shapes for `spec` and
/// returns them sorted by variable, re-embedded in `n + 2` variables.
pub fn classify_shape(
    spec: &ExtensionSpec,
    rules: &[RewriteRule],
) -> Result<(ShapeForm, Vec<RewriteRule>)> {
    let n = spec.base.n();
    let nv = spec.nvars();
    let mut rules: Vec<RewriteRule> = rules
        .iter()
        .map(|r| r.with_nvars(nv))
        .collect::<Result<_>>()
        .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    rules.sort_by_key(RewriteRule::var);
    if let Some(w) = rules.windows(2).find(|w| w[0].var() == w[1].var()) {
        return Err(Error::RuleConflict { var: w[0].var() });
    }
    if rules.is_empty() {
        if spec.rep.coeffs[..n - 1].iter().any(|&s| s != 0) {
            return Err(Error::ShapeMismatch(
                "no rules given but m is not a multiple of m_n".into(),
            ));
        }
        return Ok((ShapeForm::Trivial, rules));
    }
    let vars: Vec<usize> = rules.iter().map(RewriteRule::var).collect();
    if vars != (1..n).collect::<Vec<_>>() {
        return Err(Error::ShapeMismatch(format!(
            "expected one rule for each of x1..x{}, got rules for {:?}",
            n - 1,
            vars
        )));
    }
    if rules.iter().all(|r| r.target() == Some(n)) {
        return Ok((ShapeForm::TopVariable, rules));
    }
    if rules.iter().all(|r| r.target() == Some(r.var() + 1)) {
        return Ok((ShapeForm::Chain, rules));
    }
    Err(Error::ShapeMismatch(
        "rules are neither all x_i^a -> x0^(a-b)*x_n^b nor all x_i^a -> x0^(a-b)*x_(i+1)^b".into(),
    ))
}

/// Builds `F*` from `F^p` by rewriting with the base binomials and dividing
/// out `x_0^gamma`, then verifies the result has the form
/// `x_n^alpha + x_0 * (...)`.
pub fn build_fstar(spec: &ExtensionSpec, rules: &[RewriteRule]) -> Result<FStarResult> {
    if spec.kind != ExtensionKind::Nice {
        return Err(Error::NotNiceExtension {
            delta: spec.delta(),
            ell: spec.ell,
        });
    }
    let (form, rules) = classify_shape(spec, rules)?;
    let n = spec.base.n();
    let s = &spec.rep.coeffs;

    let a: Vec<u64> = rules.iter().map(|r| r.threshold() as u64).collect();
    let b: Vec<u64> = rules.iter().map(|r| r.b() as u64).collect();
    let p = a.iter().try_fold(1u64, |acc, &ai| {
        acc.checked_mul(ai).filter(|&v| v <= MAX_POWER)
    });
    let p = p.ok_or(Error::TooLarge {
        what: "p = a_1 * ... * a_(n-1)",
        value: a.iter().product(),
        cap: MAX_POWER,
    })?;

    // Weight of s_j (j = 1..n-1) in alpha.
    let partials: Vec<u64> = match form {
        ShapeForm::Trivial => Vec::new(),
        ShapeForm::TopVariable => (0..n - 1).map(|j| b[j] * p / a[j]).collect(),
        ShapeForm::Chain => (0..n - 1)
            .map(|j| a[..j].iter().product::<u64>() * b[j..].iter().product::<u64>())
            .collect(),
    };

    let gamma: u64 = partials.iter().zip(s).map(|(w, si)| (p - w) * si).sum();
    let alpha: u64 = p * s[n - 1] + partials.iter().zip(s).map(|(w, si)| w * si).sum::<u64>();
    let slack: i128 = partials
        .iter()
        .zip(s)
        .map(|(&w, &si)| (p as i128 - w as i128 - 1) * si as i128)
        .sum();
    let delta = spec.delta() as i128;
    let ell = spec.ell as i128;
    let gate_margin = (delta - ell - slack) as i64;
    let theorem_margin = (delta - ell - gamma as i128) as i64;

    if gate_margin <= 0 {
        return Err(Error::ConditionFails(format!(
            "need delta(m) > l + sum (p - w_i - 1) s_i, got {} <= {} (p = {p}, weights {partials:?})",
            delta,
            ell + slack
        )));
    }

    let f = projective_f(spec)?;
    let reduced = reduce(&f.pow(small(p, "p")?), &rules)?;
    let x0_gamma = Monomial::var(spec.nvars(), 0, small(gamma, "gamma")?);
    let fstar = reduced.div_monomial(&x0_gamma).ok_or_else(|| {
        Error::ConditionFails(format!(
            "reduced F^p is not divisible by x0^{gamma} (smallest power {})",
            reduced.min_exponent(0)
        ))
    })?;

    let lead = Monomial::var(spec.nvars(), n, small(alpha, "alpha")?);
    if fstar.coeff(&lead) != BigInt::one() {
        return Err(Error::ConditionFails(format!(
            "F* does not contain x{n}^{alpha} with coefficient 1"
        )));
    }
    let beta = fstar
        .terms()
        .filter(|(m, _)| **m != lead)
        .map(|(m, _)| m.exp(0))
        .min()
        .unwrap_or(u32::MAX);
    if beta == 0 {
        return Err(Error::ConditionFails(
            "a term of F* other than the pure power is not divisible by x0".into(),
        ));
    }

    Ok(FStarResult {
        form,
        rules,
        p,
        partials,
        gamma,
        alpha,
        gate_margin,
        theorem_margin,
        beta,
        f,
        reduced,
        fstar,
    })
}

/// Binomials `f_1, ..., f_{n-1}` of the given shape vanishing on `curve`,
/// in `curve.nvars()` variables.
///
/// xn form: `f_i = x_i^a - x_0^(a-b) x_n^b` with `a = m_n / g`,
/// `b = m_i / g`, `g = gcd(m_i, m_n)`. Chain form: the same with `m_{i+1}`
/// in place of `m_n`.
pub fn shape_binomials(curve: &MonomialCurve, form: ShapeForm) -> Result<Vec<SparsePoly>> {
    Ok(shape_rules(curve, form, curve.nvars())?
        .iter()
        .map(RewriteRule::polynomial)
        .collect())
}

/// The rewrite rules of [`shape_binomials`], embedded in `nvars` variables.
pub fn shape_rules(curve: &MonomialCurve, form: ShapeForm, nvars: usize) -> Result<Vec<RewriteRule>> {
    let e = curve.exponents();
    let n = curve.n();
    (1..n)
        .map(|i| {
            let target = match form {
                ShapeForm::TopVariable => n,
                ShapeForm::Chain => i + 1,
                ShapeForm::Trivial => {
                    return Err(Error::ShapeMismatch("the trivial shape has no rules".into()))
                }
            };
            let (mi, mt) = (e[i - 1], e[target - 1]);
            let g = mi.gcd(&mt);
            RewriteRule::binomial(nvars, i, small(mt / g, "a_i")?, small(mi / g, "b_i")?, target)
        })
        .collect()
}

/// Where a set of base equations comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseFamily {
    /// `C(1, 2, ..., n)`.
    RationalNormal(usize),
    /// `C(m_1, m_2)` in `P^2`, cut out by `x_1^m_2 - x_0^(m_2-m_1) x_2^m_1`.
    PlaneCurve(u64, u64),
    /// Binomials of a fixed shape built from the exponents.
    Binomials { curve: MonomialCurve, form: ShapeForm },
    /// User-supplied equations.
    Custom {
        curve: MonomialCurve,
        equations: Vec<SparsePoly>,
    },
}

/// How much is known about `Z(f_1, ..., f_{n-1}) = C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sufficiency {
    /// Classical result for this family.
    Known,
    /// Vanishing checked; set-theoretic equality is an assumption.
    Assumed,
    /// Vanishing checked; set-theoretic equality asserted by the user.
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseEquations {
    pub curve: MonomialCurve,
    pub equations: Vec<SparsePoly>,
    pub sufficiency: Sufficiency,
}

/// Picks the equations used for a base curve when none are given: the plane
/// binomial for `n = 2`, the rational normal family for `C(1, ..., n)`, and
/// otherwise whichever binomial shape has the smaller `sum a_i` (xn form on
/// ties).
pub fn default_family(curve: &MonomialCurve) -> BaseFamily {
    let e = curve.exponents();
    let n = curve.n();
    if n == 2 {
        return BaseFamily::PlaneCurve(e[0], e[1]);
    }
    if e.iter().enumerate().all(|(i, &m)| m == i as u64 + 1) {
        return BaseFamily::RationalNormal(n);
    }
    let cost = |form| -> u64 {
        shape_rules(curve, form, curve.nvars())
            .map(|rs| rs.iter().map(|r| r.threshold() as u64).sum())
            .unwrap_or(u64::MAX)
    };
    let form = if cost(ShapeForm::Chain) < cost(ShapeForm::TopVariable) {
        ShapeForm::Chain
    } else {
        ShapeForm::TopVariable
    };
    BaseFamily::Binomials {
        curve: curve.clone(),
        form,
    }
}

/// The `k`-th equation (`k = 2..n`) of the rational normal curve:
/// `sum_j (-1)^j C(k-1, j) x_{k-1}^(k-1-j) x_k^j x_{k-1-j}`.
fn rational_normal_equation(n: usize, k: usize) -> SparsePoly {
    let nv = n + 1;
    let mut f = SparsePoly::zero(nv);
    let mut binom = BigInt::one();
    for j in 0..k {
        let mut e = vec![0u32; nv];
        e[k - 1] += (k - 1 - j) as u32;
        e[k] += j as u32;
        e[k - 1 - j] += 1;
        let sign = if j % 2 == 0 { binom.clone() } else { -binom.clone() };
        f.add_term(Monomial::new(e), sign);
        binom = binom * BigInt::from(k - 1 - j) / BigInt::from(j + 1);
    }
    f
}

pub fn base_equations(family: &BaseFamily) -> Result<BaseEquations> {
    match family {
        BaseFamily::RationalNormal(n) => {
            let curve = MonomialCurve::new((1..=*n as u64).collect())?;
            let equations = (2..=*n).map(|k| rational_normal_equation(*n, k)).collect();
            Ok(BaseEquations {
                curve,
                equations,
                sufficiency: Sufficiency::Known,
            })
        }
        BaseFamily::PlaneCurve(m1, m2) => {
            let curve = MonomialCurve::new(vec![*m1, *m2])?;
            Ok(BaseEquations {
                equations: shape_binomials(&curve, ShapeForm::TopVariable)?,
                curve,
                sufficiency: Sufficiency::Known,
            })
        }
        BaseFamily::Binomials { curve, form } => Ok(BaseEquations {
            curve: curve.clone(),
            equations: shape_binomials(curve, *form)?,
            sufficiency: Sufficiency::Assumed,
        }),
        BaseFamily::Custom { curve, equations } => {
            let param = curve.parameterization()?;
            for f in equations {
                if f.nvars() != curve.nvars() {
                    return Err(Error::VarCountMismatch {
                        left: curve.nvars(),
                        right: f.nvars(),
                    });
                }
                if !f.substitute_monomials(&param.images)?.is_zero() {
                    return Err(Error::DoesNotVanish(f.to_string()));
                }
            }
            Ok(BaseEquations {
                curve: curve.clone(),
                equations: equations.clone(),
                sufficiency: Sufficiency::Unverified,
            })
        }
    }
}

//! Gluing criteria for the semigroup of a projective monomial curve.
//!
//! For exponents `e_1, ..., e_k` with maximum `M` the semigroup is generated
//! by `T = {(M, 0)} ∪ {(M - e_j, e_j)}`. A decomposition `T = T_1 ⊔ T_2`
//! with `|T_1| <= |T_2|` can only be a gluing when `T_1` is a single interior
//! generator `(M - e_i, e_i)`; then it is one iff some `d_j >= 0` satisfy
//!
//! * (I)  `Delta_i * e_i = sum_{j != i} d_j e_j`, and
//! * (II) `sum_{j != i} d_j <= Delta_i`,
//!
//! where `Delta_i` is the gcd of the exponents other than `e_i`.

use serde::Serialize;

use crate::curves::{projective_f, ExtensionKind, ExtensionSpec};
use crate::error::{Error, Result};
use crate::mpoly::SparsePoly;
use crate::numsg::{self, gcd_all};

/// The two generators that never glue: `(M, 0)` for `x_0` and `(0, M)` for
/// the coordinate with the largest exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Origin,
    Top,
}

/// `T_1`, normalized so that `|T_1| <= |T_2|`.
///
/// Generators of `T` are indexed `0` for `(M, 0)` and `j` (1-based) for the
/// generator of exponent `e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    Singleton(usize),
    Endpoint(Endpoint),
    NonSingleton(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupSplit {
    exponents: Vec<u64>,
    kind: SplitKind,
}

impl SemigroupSplit {
    /// Builds the split with `T_1` given as generator indices (see
    /// [`SplitKind`]); the smaller side is taken as `T_1`.
    pub fn new(exponents: Vec<u64>, t1: &[usize]) -> Result<Self> {
        validate(&exponents)?;
        let k = exponents.len();
        let mut t1: Vec<usize> = t1.to_vec();
        t1.sort_unstable();
        t1.dedup();
        if t1.is_empty() || t1.len() > k || t1.iter().any(|&i| i > k) {
            return Err(Error::InvalidGenerators(format!(
                "T_1 = {t1:?} is not a proper non-empty subset of 0..={k}"
            )));
        }
        if 2 * t1.len() > k + 1 {
            t1 = (0..=k).filter(|i| !t1.contains(i)).collect();
        }
        let top = top_index(&exponents);
        let kind = match t1.as_slice() {
            [0] => SplitKind::Endpoint(Endpoint::Origin),
            [i] if *i == top => SplitKind::Endpoint(Endpoint::Top),
            [i] => SplitKind::Singleton(*i),
            _ => SplitKind::NonSingleton(t1),
        };
        Ok(Self { exponents, kind })
    }

    pub fn singleton(exponents: Vec<u64>, i0: usize) -> Result<Self> {
        Self::new(exponents, &[i0])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn kind(&self) -> &SplitKind {
        &self.kind
    }
}

fn validate(exponents: &[u64]) -> Result<()> {
    if exponents.len() < 2 || exponents.contains(&0) || gcd_all(exponents) != 1 {
        return Err(Error::InvalidGenerators(format!(
            "{exponents:?}: need at least two positive exponents with gcd 1"
        )));
    }
    Ok(())
}

/// 1-based index of the (first) largest exponent.
fn top_index(exponents: &[u64]) -> usize {
    let max = exponents.iter().max().copied().unwrap_or(0);
    exponents.iter().position(|&e| e == max).unwrap_or(0) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Glues,
    NoGlue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoGlueReason {
    /// `Z T_1 ∩ Z T_2` has rank two.
    NonSingletonRankTwo,
    /// `N T_1 ∩ N T_2 = {0}`.
    EndpointTrivialIntersection,
    /// `Delta_i = 1` with `e_i` not repeated.
    DeltaOne,
    /// `Delta_i e_i` is not a non-negative combination of the other exponents.
    ConditionIFails,
    /// Every solution of (I) uses more than `Delta_i` parts.
    ConditionIIFails,
}

/// `d_j` for each `j != i_0` (1-based exponent index) and the slack
/// `d = Delta - sum d_j` on `(M, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub d: Vec<(usize, u64)>,
    pub slack: u64,
}

impl Witness {
    /// Only the `d_j` values, in index order.
    pub fn values(&self) -> Vec<u64> {
        self.d.iter().map(|&(_, v)| v).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingDecision {
    pub split: SplitKind,
    pub verdict: Verdict,
    pub reason: Option<NoGlueReason>,
    pub delta: Option<u64>,
    pub witness: Option<Witness>,
}

impl GluingDecision {
    fn no(split: SplitKind, reason: NoGlueReason, delta: Option<u64>) -> Self {
        Self {
            split,
            verdict: Verdict::NoGlue,
            reason: Some(reason),
            delta,
            witness: None,
        }
    }

    pub fn glues(&self) -> bool {
        self.verdict == Verdict::Glues
    }
}

/// Checks (I) and (II) for a witness against the exponents and `i0`.
pub fn witness_is_valid(exponents: &[u64], i0: usize, delta: u64, w: &Witness) -> bool {
    let others: Vec<usize> = (1..=exponents.len()).filter(|&j| j != i0).collect();
    let idx: Vec<usize> = w.d.iter().map(|&(j, _)| j).collect();
    if idx != others {
        return false;
    }
    let lhs = delta as u128 * exponents[i0 - 1] as u128;
    let rhs: u128 = w
        .d
        .iter()
        .map(|&(j, d)| d as u128 * exponents[j - 1] as u128)
        .sum();
    let parts: u64 = w.d.iter().map(|&(_, d)| d).sum();
    lhs == rhs && parts <= delta && w.slack == delta - parts
}

/// Lexicographically smallest `d` with `sum d_j g_j = target` and
/// `sum d_j <= budget`.
fn smallest_witness(gens: &[u64], target: u64, budget: u64) -> Option<Vec<u64>> {
    // Suffix tables: fewest parts to reach each value using gens[k..].
    let t = target as usize;
    let suffix: Vec<Vec<u32>> = (0..=gens.len())
        .map(|k| {
            let mut table = vec![u32::MAX; t + 1];
            table[0] = 0;
            for &g in &gens[k..] {
                let g = g as usize;
                for v in g..=t {
                    let prev = table[v - g];
                    if prev != u32::MAX && prev + 1 < table[v] {
                        table[v] = prev + 1;
                    }
                }
            }
            table
        })
        .collect();
    let mut d = Vec::with_capacity(gens.len());
    let mut rest = t;
    let mut budget = budget;
    for (k, &g) in gens.iter().enumerate() {
        let g = g as usize;
        let mut chosen = None;
        for c in 0..=(rest / g).min(budget as usize) {
            let left = rest - c * g;
            let need = suffix[k + 1][left];
            if need != u32::MAX && c as u64 + need as u64 <= budget {
                chosen = Some(c);
                break;
            }
        }
        let c = chosen?;
        d.push(c as u64);
        rest -= c * g;
        budget -= c as u64;
    }
    (rest == 0).then_some(d)
}

pub fn check_split(split: &SemigroupSplit) -> GluingDecision {
    let e = &split.exponents;
    let i0 = match &split.kind {
        SplitKind::NonSingleton(_) => {
            return GluingDecision::no(split.kind.clone(), NoGlueReason::NonSingletonRankTwo, None)
        }
        SplitKind::Endpoint(_) => {
            return GluingDecision::no(
                split.kind.clone(),
                NoGlueReason::EndpointTrivialIntersection,
                None,
            )
        }
        SplitKind::Singleton(i) => *i,
    };
    let others: Vec<usize> = (1..=e.len()).filter(|&j| j != i0).collect();
    let gens: Vec<u64> = others.iter().map(|&j| e[j - 1]).collect();
    let delta = gcd_all(&gens);
    let target = delta * e[i0 - 1];
    let repeated = gens.contains(&e[i0 - 1]);
    if delta == 1 && !repeated {
        return GluingDecision::no(split.kind.clone(), NoGlueReason::DeltaOne, Some(delta));
    }
    let feasible = numsg::min_representation(target, &gens).ok().flatten();
    let Some(best) = feasible else {
        return GluingDecision::no(split.kind.clone(), NoGlueReason::ConditionIFails, Some(delta));
    };
    if best.weight > delta {
        return GluingDecision::no(split.kind.clone(), NoGlueReason::ConditionIIFails, Some(delta));
    }
    let d = smallest_witness(&gens, target, delta).expect("a witness exists within the budget");
    let parts: u64 = d.iter().sum();
    GluingDecision {
        split: split.kind.clone(),
        verdict: Verdict::Glues,
        reason: None,
        delta: Some(delta),
        witness: Some(Witness {
            d: others.into_iter().zip(d).collect(),
            slack: delta - parts,
        }),
    }
}

/// All singleton splits (`x_0`'s endpoint, every interior exponent, the top
/// endpoint) and the blanket verdict for non-singleton `T_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingReport {
    pub exponents: Vec<u64>,
    pub decisions: Vec<GluingDecision>,
    pub glues: bool,
    /// First interior index that glues.
    pub glue_index: Option<usize>,
}

pub fn check_all_splits(exponents: &[u64]) -> Result<GluingReport> {
    validate(exponents)?;
    if exponents.len() < 3 {
        return Err(Error::InvalidGenerators(format!(
            "{exponents:?}: gluing needs at least 3 exponents"
        )));
    }
    let k = exponents.len();
    let mut decisions = Vec::with_capacity(k + 2);
    for i in 0..=k {
        decisions.push(check_split(&SemigroupSplit::singleton(exponents.to_vec(), i)?));
    }
    decisions.push(GluingDecision::no(
        SplitKind::NonSingleton(Vec::new()),
        NoGlueReason::NonSingletonRankTwo,
        None,
    ));
    let glue_index = decisions.iter().find_map(|d| match (&d.split, d.verdict) {
        (SplitKind::Singleton(i), Verdict::Glues) => Some(*i),
        _ => None,
    });
    Ok(GluingReport {
        exponents: exponents.to_vec(),
        decisions,
        glues: glue_index.is_some(),
        glue_index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadExtensionGluing {
    pub decision: GluingDecision,
    pub f: SparsePoly,
}

/// A bad extension glues along `T_1 = {(l m_n - m, m)}` with the witness
/// `d = (s_1, ..., s_n, 0)` read off the minimal representation of `m`, and
/// is cut out by `F = x_{n+1}^l - x_0^(l - delta) x^s`.
pub fn bad_extension_gluing(spec: &ExtensionSpec) -> Result<BadExtensionGluing> {
    if spec.kind() != ExtensionKind::Bad {
        return Err(Error::NotBadExtension {
            delta: spec.delta(),
            ell: spec.ell(),
        });
    }
    let exponents = spec.exponents();
    let n = spec.base().n();
    let i0 = n + 1;
    let delta = gcd_all(&exponents[..n]);
    debug_assert_eq!(delta, spec.ell());
    let d: Vec<(usize, u64)> = spec
        .rep()
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, &s)| (j + 1, s))
        .collect();
    let witness = Witness {
        d,
        slack: delta - spec.delta(),
    };
    if !witness_is_valid(&exponents, i0, delta, &witness) {
        return Err(Error::ConditionFails(format!(
            "representation witness {:?} fails (I)/(II) for {exponents:?}",
            witness.values()
        )));
    }
    Ok(BadExtensionGluing {
        decision: GluingDecision {
            split: SplitKind::Singleton(i0),
            verdict: Verdict::Glues,
            reason: None,
            delta: Some(delta),
            witness: Some(witness),
        },
        f: projective_f(spec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{make_extension, MonomialCurve};

    fn split(e: &[u64], i: usize) -> GluingDecision {
        check_split(&SemigroupSplit::singleton(e.to_vec(), i).unwrap())
    }

    #[test]
    fn glues_example() {
        let d = split(&[2, 3, 4, 8], 2);
        assert!(d.glues());
        assert_eq!(d.delta, Some(2));
        let w = d.witness.unwrap();
        assert_eq!(w.values(), vec![1, 1, 0]);
        assert_eq!(w.slack, 0);
        let report = check_all_splits(&[2, 3, 4, 8]).unwrap();
        assert!(report.glues);
        assert_eq!(report.glue_index, Some(2));
    }

    #[test]
    fn no_glue_example() {
        let report = check_all_splits(&[2, 4, 7, 8]).unwrap();
        assert!(!report.glues);
        let reasons: Vec<_> = report.decisions.iter().map(|d| d.reason.unwrap()).collect();
        assert_eq!(
            reasons,
            vec![
                NoGlueReason::EndpointTrivialIntersection,
                NoGlueReason::DeltaOne,
                NoGlueReason::DeltaOne,
                NoGlueReason::ConditionIIFails,
                NoGlueReason::EndpointTrivialIntersection,
                NoGlueReason::NonSingletonRankTwo,
            ]
        );
    }

    #[test]
    fn endpoints_and_large_subsets() {
        let d = split(&[2, 3, 4, 8], 0);
        assert_eq!(d.reason, Some(NoGlueReason::EndpointTrivialIntersection));
        let d = split(&[2, 3, 4, 8], 4);
        assert_eq!(d.split, SplitKind::Endpoint(Endpoint::Top));
        let s = SemigroupSplit::new(vec![2, 3, 4, 8], &[0, 1]).unwrap();
        assert_eq!(check_split(&s).reason, Some(NoGlueReason::NonSingletonRankTwo));
        // Complement of a singleton is normalized to the singleton.
        let s = SemigroupSplit::new(vec![2, 3, 4, 8], &[0, 1, 3, 4]).unwrap();
        assert_eq!(s.kind(), &SplitKind::Singleton(2));
        assert!(SemigroupSplit::new(vec![2, 3, 4, 8], &[]).is_err());
        assert!(SemigroupSplit::new(vec![2, 4, 8], &[1]).is_err());
    }

    #[test]
    fn example_family_never_glues() {
        for s in 3..=10u64 {
            let report = check_all_splits(&[3, 4, 6, 6 * s + 7]).unwrap();
            assert!(!report.glues);
            for d in &report.decisions {
                if let SplitKind::Singleton(_) = d.split {
                    assert_eq!(d.reason, Some(NoGlueReason::DeltaOne));
                }
            }
        }
    }

    #[test]
    fn each_reason() {
        // Delta = 2, 18 = 6 + 12.
        assert!(split(&[4, 6, 9, 12], 3).glues());
        // Delta = 5, 30 = 15 + 15.
        assert!(split(&[6, 10, 15, 35], 1).glues());
        // Delta = 2, 18 needs three parts from {4, 6, 10}.
        let d = split(&[4, 6, 9, 10], 3);
        assert_eq!(d.reason, Some(NoGlueReason::ConditionIIFails));
        // Delta = 2, 2 is not in <6, 10, 14>.
        let d = split(&[1, 6, 10, 14], 1);
        assert_eq!(d.reason, Some(NoGlueReason::ConditionIFails));
        let d = split(&[10, 14, 15, 21], 1);
        assert_eq!(d.reason, Some(NoGlueReason::DeltaOne));
    }

    #[test]
    fn repeated_exponent_is_not_delta_one() {
        // (1, 2, 4, 4): i0 = 4 has Delta = 1 but 4 repeats, d = (0, 0, 1).
        let d = split(&[1, 2, 4, 4], 4);
        assert!(d.glues());
        assert_eq!(d.witness.unwrap().values(), vec![0, 0, 1]);
    }

    #[test]
    fn bad_extensions() {
        let base = MonomialCurve::new(vec![1, 2, 4]).unwrap();
        let spec = make_extension(&base, 3, 4).unwrap();
        let g = bad_extension_gluing(&spec).unwrap();
        assert!(g.decision.glues());
        let w = g.decision.witness.as_ref().unwrap();
        assert_eq!(w.values(), vec![0, 0, 1]);
        assert_eq!(w.slack, 2);
        assert_eq!(g.f.to_string(), "-x0^2*x3 + x4^3");
        assert_eq!(g.f, projective_f(&spec).unwrap());

        let spec = make_extension(&base, 1, 4).unwrap();
        let g = bad_extension_gluing(&spec).unwrap();
        assert!(g.decision.glues());
        assert_eq!(g.f.to_string(), "-x3 + x4");

        let base = MonomialCurve::new(vec![3, 4, 6]).unwrap();
        let spec = make_extension(&base, 7, 25).unwrap();
        let g = bad_extension_gluing(&spec).unwrap();
        assert_eq!(g.f.to_string(), "-x0^2*x1*x2*x3^3 + x4^7");

        let nice = make_extension(&base, 1, 25).unwrap();
        assert!(matches!(
            bad_extension_gluing(&nice),
            Err(Error::NotBadExtension { .. })
        ));
    }

    #[test]
    fn bad_extension_agrees_with_split_search() {
        let base = MonomialCurve::new(vec![1, 2, 4]).unwrap();
        let spec = make_extension(&base, 3, 4).unwrap();
        let d = split(&spec.exponents(), 4);
        assert!(d.glues());
        assert_eq!(d.delta, Some(3));
    }

    /// Exhaustive search over the box `0 <= d_j <= Delta e_i / e_j`.
    fn brute_force(e: &[u64], i0: usize) -> bool {
        let others: Vec<u64> = (1..=e.len()).filter(|&j| j != i0).map(|j| e[j - 1]).collect();
        let delta = gcd_all(&others);
        let target = delta * e[i0 - 1];
        fn go(gens: &[u64], target: u64, parts: u64, delta: u64) -> bool {
            match gens.split_first() {
                None => target == 0 && parts <= delta,
                Some((&g, rest)) => (0..=target / g).any(|c| go(rest, target - c * g, parts + c, delta)),
            }
        }
        go(&others, target, 0, delta)
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn exps() -> impl Strategy<Value = Vec<u64>> {
            proptest::collection::btree_set(1u64..=30, 3..6)
                .prop_map(|s| s.into_iter().collect::<Vec<_>>())
                .prop_filter("gcd 1", |v| gcd_all(v) == 1)
        }

        proptest! {
            #[test]
            fn agrees_with_brute_force(e in exps()) {
                let top = top_index(&e);
                for i0 in (1..=e.len()).filter(|&i| i != top) {
                    let d = split(&e, i0);
                    prop_assert_eq!(d.glues(), brute_force(&e, i0), "{:?} at {}", e, i0);
                    if let Some(w) = &d.witness {
                        prop_assert!(witness_is_valid(&e, i0, d.delta.unwrap(), w));
                    }
                    if d.delta == Some(1) {
                        prop_assert!(!d.glues());
                    }
                }
            }
        }
    }
}

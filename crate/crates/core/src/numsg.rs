//! Numerical semigroups: membership, the degree `delta(m)` and minimal
//! representations, and the gcd family `Delta_i`.
//!
//! `delta(m)` is the least number of generators (with repetition) summing to
//! `m`. It is computed with an unbounded change-making table over `0..=m`.
//! Among all representations of minimal weight the one returned maximizes
//! `(s_n, s_{n-1}, ..., s_1)` lexicographically.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest target the dynamic program accepts. The table is `O(m)` words.
pub const DEGREE_CAP: u64 = 10_000_000;

const UNREACHABLE: u32 = u32::MAX;

/// Strictly increasing positive generators with gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SemigroupGens(Vec<u64>);

impl SemigroupGens {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidGenerators("empty generator list".into()));
        }
        if gens.contains(&0) {
            return Err(Error::InvalidGenerators(format!(
                "{gens:?}: generators must be positive"
            )));
        }
        if gens.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGenerators(format!(
                "{gens:?}: generators must be strictly increasing"
            )));
        }
        if gcd_all(&gens) != 1 {
            return Err(Error::InvalidGenerators(format!(
                "{gens:?}: gcd of the generators must be 1"
            )));
        }
        Ok(Self(gens))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("non-empty by construction")
    }
}

/// `target = sum coeffs[i] * gens[i]` with `weight = sum coeffs[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Representation {
    pub coeffs: Vec<u64>,
    pub target: u64,
    pub weight: u64,
}

impl Representation {
    fn from_coeffs(coeffs: Vec<u64>, gens: &[u64]) -> Self {
        let target = coeffs.iter().zip(gens).map(|(s, g)| s * g).sum();
        let weight = coeffs.iter().sum();
        Self {
            coeffs,
            target,
            weight,
        }
    }

    /// Checks `sum s_i g_i = target` and `weight = sum s_i`.
    pub fn is_valid_for(&self, gens: &[u64]) -> bool {
        self.coeffs.len() == gens.len()
            && self.coeffs.iter().zip(gens).map(|(s, g)| s * g).sum::<u64>() == self.target
            && self.coeffs.iter().sum::<u64>() == self.weight
    }
}

pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |acc, v| acc.gcd(v))
}

fn check_cap(m: u64) -> Result<usize> {
    if m > DEGREE_CAP {
        return Err(Error::TooLarge {
            what: "m",
            value: m,
            cap: DEGREE_CAP,
        });
    }
    Ok(m as usize)
}

/// Minimal number of parts for every value in `0..=target`.
fn min_weight_table(gens: &[u64], target: usize) -> Vec<u32> {
    let mut table = vec![UNREACHABLE; target + 1];
    table[0] = 0;
    for &g in gens {
        let g = g as usize;
        if g == 0 || g > target {
            continue;
        }
        for v in g..=target {
            let prev = table[v - g];
            if prev != UNREACHABLE && prev + 1 < table[v] {
                table[v] = prev + 1;
            }
        }
    }
    table
}

pub fn is_member(m: u64, gens: &SemigroupGens) -> bool {
    match check_cap(m) {
        Ok(target) => min_weight_table(gens.as_slice(), target)[target] != UNREACHABLE,
        // Past the cap only the table is too big; membership is still
        // decidable by reducing modulo the smallest generator.
        Err(_) => is_member_large(m, gens.as_slice()),
    }
}

fn is_member_large(m: u64, gens: &[u64]) -> bool {
    // Shortest-path over residues mod the smallest generator (Apery set).
    let g0 = gens[0];
    let mut best = vec![u64::MAX; g0 as usize];
    best[0] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for r in 0..g0 as usize {
            if best[r] == u64::MAX {
                continue;
            }
            for &g in &gens[1..] {
                let v = best[r].saturating_add(g);
                let slot = (v % g0) as usize;
                if v < best[slot] {
                    best[slot] = v;
                    changed = true;
                }
            }
        }
    }
    best[(m % g0) as usize] <= m
}

/// Minimal-weight representation of `target` over arbitrary positive
/// generators (no ordering or gcd requirement), or `None` if `target` is not
/// a non-negative combination. Ties are broken like [`degree`].
pub fn min_representation(target: u64, gens: &[u64]) -> Result<Option<Representation>> {
    let t = check_cap(target)?;
    if gens.is_empty() || gens.contains(&0) {
        return Err(Error::InvalidGenerators(format!(
            "{gens:?}: generators must be positive"
        )));
    }
    let full = min_weight_table(gens, t);
    if full[t] == UNREACHABLE {
        return Ok(None);
    }
    let mut remaining_weight = full[t] as u64;
    let mut rest = t;
    let mut coeffs = vec![0u64; gens.len()];
    for k in (1..gens.len()).rev() {
        let g = gens[k] as usize;
        let prefix = min_weight_table(&gens[..k], rest);
        let mut count = (rest / g) as u64;
        loop {
            let left = rest - count as usize * g;
            let w = prefix[left];
            if w != UNREACHABLE && w as u64 + count == remaining_weight {
                coeffs[k] = count;
                rest = left;
                remaining_weight -= count;
                break;
            }
            // count = 0 always succeeds when the full table was consistent.
            count -= 1;
        }
    }
    let g0 = gens[0] as usize;
    debug_assert_eq!(rest % g0, 0);
    coeffs[0] = (rest / g0) as u64;
    debug_assert_eq!(coeffs[0], remaining_weight);
    Ok(Some(Representation::from_coeffs(coeffs, gens)))
}

/// The degree `delta(m)` together with the preferred minimal representation.
pub fn degree(m: u64, gens: &SemigroupGens) -> Result<Representation> {
    min_representation(m, gens.as_slice())?.ok_or_else(|| Error::NotInSemigroup {
        m,
        gens: gens.as_slice().to_vec(),
    })
}

/// Every minimal-weight representation of `m`, in the same order the
/// tie-break prefers (the first one equals [`degree`]). At most `limit` are
/// returned.
pub fn minimal_representations(
    m: u64,
    gens: &SemigroupGens,
    limit: usize,
) -> Result<Vec<Representation>> {
    let best = degree(m, gens)?;
    let gens = gens.as_slice();
    let t = m as usize;
    let prefixes: Vec<Vec<u32>> = (0..=gens.len())
        .map(|k| min_weight_table(&gens[..k], t))
        .collect();
    let mut out = Vec::new();
    let mut coeffs = vec![0u64; gens.len()];
    collect_minimal(
        gens,
        &prefixes,
        gens.len(),
        t,
        best.weight,
        &mut coeffs,
        &mut out,
        limit,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_minimal(
    gens: &[u64],
    prefixes: &[Vec<u32>],
    k: usize,
    rest: usize,
    weight: u64,
    coeffs: &mut [u64],
    out: &mut Vec<Representation>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if k == 0 {
        if rest == 0 && weight == 0 {
            out.push(Representation::from_coeffs(coeffs.to_vec(), gens));
        }
        return;
    }
    let g = gens[k - 1] as usize;
    for count in (0..=rest / g).rev() {
        let left = rest - count * g;
        let w = prefixes[k - 1][left];
        if w != UNREACHABLE && w as u64 + count as u64 == weight {
            coeffs[k - 1] = count as u64;
            collect_minimal(
                gens,
                prefixes,
                k - 1,
                left,
                weight - count as u64,
                coeffs,
                out,
                limit,
            );
            coeffs[k - 1] = 0;
        }
    }
}

/// `Delta_i = gcd` of all entries except the `i`-th.
pub fn delta_gcds(gens: &[u64]) -> Vec<u64> {
    (0..gens.len())
        .map(|i| {
            gens.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0u64, |acc, (_, v)| acc.gcd(v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(v: &[u64]) -> SemigroupGens {
        SemigroupGens::new(v.to_vec()).unwrap()
    }

    /// Every representation of `m`, by exhaustive enumeration.
    fn all_representations(m: u64, g: &[u64]) -> Vec<Vec<u64>> {
        fn go(m: u64, g: &[u64], acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if acc.len() == g.len() {
                if m == 0 {
                    out.push(acc.clone());
                }
                return;
            }
            let gi = g[acc.len()];
            for s in 0..=m / gi {
                acc.push(s);
                go(m - s * gi, g, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        go(m, g, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn generator_validation() {
        assert!(SemigroupGens::new(vec![]).is_err());
        assert!(SemigroupGens::new(vec![0, 3]).is_err());
        assert!(SemigroupGens::new(vec![4, 3]).is_err());
        assert!(SemigroupGens::new(vec![2, 4]).is_err());
        assert!(SemigroupGens::new(vec![2, 3]).is_ok());
    }

    #[test]
    fn membership() {
        assert!(!is_member(1, &gens(&[3, 4, 6])));
        assert!(is_member(25, &gens(&[3, 4, 6])));
        assert!(is_member(5, &gens(&[2, 3])));
        assert!(!is_member(5, &gens(&[3, 4, 6])));
        // Frobenius number of <3,4,6> is 5.
        assert!((6..200).all(|m| is_member(m, &gens(&[3, 4, 6]))));
    }

    #[test]
    fn membership_past_cap() {
        let g = gens(&[6, 10, 15]);
        assert!(is_member(DEGREE_CAP + 1, &g));
        assert!(!is_member_large(29, g.as_slice()));
        assert!(is_member_large(31, g.as_slice()));
    }

    #[test]
    fn degree_examples() {
        let r = degree(25, &gens(&[3, 4, 6])).unwrap();
        assert_eq!((r.coeffs.clone(), r.weight), (vec![1, 1, 3], 5));
        let r = degree(6, &gens(&[3, 4, 6])).unwrap();
        assert_eq!((r.coeffs.clone(), r.weight), (vec![0, 0, 1], 1));
        let r = degree(19, &gens(&[3, 4, 6])).unwrap();
        assert_eq!((r.coeffs.clone(), r.weight), (vec![1, 1, 2], 4));
        let r = degree(7, &gens(&[2, 3])).unwrap();
        assert_eq!((r.coeffs.clone(), r.weight), (vec![2, 1], 3));
    }

    #[test]
    fn degree_oracle_for_19() {
        // 19 over (3,4,6): every representation, minimum weight and argmax.
        let reps = all_representations(19, &[3, 4, 6]);
        let min = reps.iter().map(|r| r.iter().sum::<u64>()).min().unwrap();
        assert_eq!(min, 4);
        let minimal: Vec<_> = reps.iter().filter(|r| r.iter().sum::<u64>() == min).collect();
        assert_eq!(minimal, vec![&vec![1, 1, 2]]);
    }

    #[test]
    fn not_in_semigroup_is_an_error() {
        let err = degree(1, &gens(&[3, 4, 6])).unwrap_err();
        assert!(matches!(err, Error::NotInSemigroup { m: 1, .. }));
    }

    #[test]
    fn cap_is_enforced() {
        let err = degree(DEGREE_CAP + 1, &gens(&[2, 3])).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }

    #[test]
    fn tie_break_prefers_heavy_last_generator() {
        // 12 over (2,3,4): minimal weight 3, reached by (0,0,3) only.
        let r = degree(12, &gens(&[2, 3, 4])).unwrap();
        assert_eq!(r.coeffs, vec![0, 0, 3]);
        // 10 over (2,3,4): weight 3 via (1,0,2), (0,2,1); tie-break picks s_3 = 2.
        let r = degree(10, &gens(&[2, 3, 4])).unwrap();
        assert_eq!(r.coeffs, vec![1, 0, 2]);
        let all = minimal_representations(10, &gens(&[2, 3, 4]), 10).unwrap();
        let coeffs: Vec<_> = all.iter().map(|r| r.coeffs.clone()).collect();
        assert_eq!(coeffs, vec![vec![1, 0, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn minimal_representations_match_enumeration() {
        for g in [&[3u64, 4, 6][..], &[2, 3], &[4, 5, 7, 9], &[1, 2, 4]] {
            let sg = gens(g);
            for m in 1..=60 {
                let reps = all_representations(m, g);
                if reps.is_empty() {
                    assert!(!is_member(m, &sg));
                    continue;
                }
                let min = reps.iter().map(|r| r.iter().sum::<u64>()).min().unwrap();
                let mut expected: Vec<_> = reps
                    .into_iter()
                    .filter(|r| r.iter().sum::<u64>() == min)
                    .collect();
                // Tie-break order: lexicographically descending in reversed coefficients.
                expected.sort_by(|a, b| b.iter().rev().cmp(a.iter().rev()));
                let got: Vec<_> = minimal_representations(m, &sg, 1000)
                    .unwrap()
                    .into_iter()
                    .map(|r| r.coeffs)
                    .collect();
                assert_eq!(got, expected, "gens {g:?}, m {m}");
                assert_eq!(degree(m, &sg).unwrap().coeffs, expected[0]);
            }
        }
    }

    #[test]
    fn delta_gcd_examples() {
        assert_eq!(delta_gcds(&[3, 4, 6, 25]), vec![1, 1, 1, 1]);
        assert_eq!(delta_gcds(&[2, 3, 4, 8])[1], 2);
        let d = delta_gcds(&[2, 4, 7, 8]);
        assert_eq!((d[0], d[1], d[2]), (1, 1, 2));
    }

    #[test]
    fn min_representation_without_gcd_one() {
        let r = min_representation(6, &[2, 4, 8]).unwrap().unwrap();
        assert_eq!(r.coeffs, vec![1, 1, 0]);
        assert!(min_representation(7, &[2, 4, 8]).unwrap().is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn gen_list() -> impl Strategy<Value = SemigroupGens> {
            proptest::collection::btree_set(2u64..20, 2..5).prop_filter_map("gcd 1", |s| {
                SemigroupGens::new(s.into_iter().collect()).ok()
            })
        }

        proptest! {
            #[test]
            fn degree_is_minimal(g in gen_list(), m in 1u64..200) {
                let reps = all_representations(m, g.as_slice());
                match degree(m, &g) {
                    Ok(r) => {
                        prop_assert!(r.is_valid_for(g.as_slice()));
                        prop_assert_eq!(r.target, m);
                        let min = reps.iter().map(|c| c.iter().sum::<u64>()).min().unwrap();
                        prop_assert_eq!(r.weight, min);
                        prop_assert_eq!(degree(m, &g).unwrap(), r);
                    }
                    Err(_) => prop_assert!(reps.is_empty()),
                }
            }

            #[test]
            fn multiples_of_top_generator(g in gen_list(), k in 1u64..20) {
                let r = degree(k * g.max(), &g).unwrap();
                prop_assert!(r.weight <= k);
            }

            #[test]
            fn delta_divides_the_others(v in proptest::collection::vec(1u64..60, 3..6)) {
                let d = delta_gcds(&v);
                for (i, di) in d.iter().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        if i != j {
                            prop_assert_eq!(vj % di, 0);
                        }
                    }
                    if gcd_all(&v) == 1 {
                        prop_assert_eq!(di.gcd(&v[i]), 1);
                    }
                }
            }
        }
    }
}

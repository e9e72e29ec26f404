//! Brute-force ground truth: counts of transitive ordered factorizations of
//! a fixed permutation of cycle type `alpha` into `r` transpositions.
//!
//! The raw count is computed by dynamic programming over the group algebra
//! of `S_n` (a length-`n!` vector of counts convolved `r` times with the
//! transposition indicator); transitivity is then imposed by an
//! inclusion-exclusion sieve over the orbit containing the point 1. For
//! `n <= 3` a direct DFS over all tuples provides a second, independent
//! oracle.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::foundation::{binomial, theta, Partition, Rational};

/// Default cap on the symmetric group degree; `n!`-sized tables above this
/// get expensive.
pub const DEFAULT_MAX_N: u32 = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorizeError {
    #[error("degree n={n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("negative transposition count: n+m+2g-2 < 0 for the requested type")]
    NegativeTranspositionCount,
}

/// A permutation of `{0..n-1}` in image form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    pub fn from_images(images: Vec<u8>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            assert!((i as usize) < n && !seen[i as usize], "not a bijection");
            seen[i as usize] = true;
        }
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u8) -> u8 {
        self.images[point as usize]
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    /// The transposition `(a b)`.
    pub fn transposition(n: usize, a: u8, b: u8) -> Perm {
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.swap(a as usize, b as usize);
        Perm { images }
    }

    /// Cycle type as a partition (fixed points included as parts 1).
    pub fn cycle_type(&self) -> Partition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur] as usize;
                len += 1;
            }
            parts.push(len);
        }
        Partition::new(parts)
    }

    /// The canonical representative of class `alpha`: parts laid out on
    /// consecutive blocks `{0..a_1-1}, {a_1..a_1+a_2-1}, ...`.
    pub fn canonical_of_type(alpha: &Partition) -> Perm {
        let n: u32 = alpha.weight();
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut base = 0u8;
        for &part in alpha.parts() {
            for k in 0..part as u8 {
                images[(base + k) as usize] = base + (k + 1) % part as u8;
            }
            base += part as u8;
        }
        Perm { images }
    }
}

/// Lehmer-code rank of a permutation, used to index the DP vector.
fn rank(p: &Perm) -> usize {
    let n = p.degree();
    let mut available: Vec<u8> = (0..n as u8).collect();
    let mut r = 0usize;
    for i in 0..n {
        let pos = available.iter().position(|&x| x == p.images[i]).unwrap();
        r = r * (n - i) + pos;
        available.remove(pos);
    }
    r
}

fn factorial_usize(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

/// Number of `r`-tuples of transpositions in `S_n` whose ordered product is
/// the canonical permutation of type `alpha`. Transitivity is not imposed.
pub fn count_all_factorizations(alpha: &Partition, r: u32) -> Result<BigUint, FactorizeError> {
    count_all_with_cap(alpha, r, DEFAULT_MAX_N)
}

pub fn count_all_with_cap(alpha: &Partition, r: u32, cap: u32) -> Result<BigUint, FactorizeError> {
    let n = alpha.weight();
    assert!(n >= 1, "count_all_factorizations requires n >= 1");
    if n > cap {
        return Err(FactorizeError::CapExceeded { n, cap });
    }
    let target = Perm::canonical_of_type(alpha);
    Ok(count_for_target(&target, r))
}

fn count_for_target(target: &Perm, r: u32) -> BigUint {
    let n = target.degree();
    if n == 1 {
        // No transpositions exist; only the empty product equals the identity.
        return if r == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let size = factorial_usize(n);
    // Precompute right-multiplication by each transposition as index maps.
    let perms = all_perms(n);
    let mut index_of: HashMap<Perm, usize> = HashMap::with_capacity(size);
    for (i, p) in perms.iter().enumerate() {
        index_of.insert(p.clone(), i);
    }
    let mut trans_maps: Vec<Vec<u32>> = Vec::new();
    for a in 0..n as u8 {
        for b in (a + 1)..n as u8 {
            let tau = Perm::transposition(n, a, b);
            let map: Vec<u32> = perms
                .iter()
                .map(|g| index_of[&g.compose(&tau)] as u32)
                .collect();
            trans_maps.push(map);
        }
    }
    let mut counts = vec![BigUint::zero(); size];
    counts[index_of[&Perm::identity(n)]] = BigUint::one();
    for _ in 0..r {
        let mut next = vec![BigUint::zero(); size];
        for (g, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for map in &trans_maps {
                next[map[g] as usize] += c;
            }
        }
        counts = next;
    }
    counts[index_of[target]].clone()
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::with_capacity(factorial_usize(n));
    let mut images: Vec<u8> = (0..n as u8).collect();
    heap_permutations(&mut images, n, &mut out);
    out.sort_by_key(rank);
    out
}

fn heap_permutations(seq: &mut Vec<u8>, k: usize, out: &mut Vec<Perm>) {
    if k == 1 {
        out.push(Perm {
            images: seq.clone(),
        });
        return;
    }
    for i in 0..k {
        heap_permutations(seq, k - 1, out);
        if k % 2 == 0 {
            seq.swap(i, k - 1);
        } else {
            seq.swap(0, k - 1);
        }
    }
}

/// Same count restricted to tuples whose transpositions generate a group
/// acting transitively on the `n` points.
pub fn count_transitive_factorizations(alpha: &Partition, r: u32) -> Result<BigUint, FactorizeError> {
    count_transitive_with_cap(alpha, r, DEFAULT_MAX_N)
}

pub fn count_transitive_with_cap(
    alpha: &Partition,
    r: u32,
    cap: u32,
) -> Result<BigUint, FactorizeError> {
    let n = alpha.weight();
    assert!(n >= 1, "count_transitive_factorizations requires n >= 1");
    if n > cap {
        return Err(FactorizeError::CapExceeded { n, cap });
    }
    let mut memo_t = HashMap::new();
    let mut memo_a = HashMap::new();
    Ok(transitive_rec(alpha, r, &mut memo_t, &mut memo_a))
}

/// Inclusion-exclusion over the orbit block containing the point 1: the
/// transitive count is the full count minus, for every proper sigma-invariant
/// subset `S` containing 1's cycle, the tuples that are transitive on `S`
/// and arbitrary on its complement, interleaved in all `C(r, k)` ways.
fn transitive_rec(
    alpha: &Partition,
    r: u32,
    memo_t: &mut HashMap<(Partition, u32), BigUint>,
    memo_a: &mut HashMap<Partition, Vec<BigUint>>,
) -> BigUint {
    if let Some(v) = memo_t.get(&(alpha.clone(), r)) {
        return v.clone();
    }
    let all = count_all_memo(alpha, r, memo_a);
    let first = alpha.parts()[0];
    let rest_mults: Vec<(u32, u32)> = {
        let mut m: Vec<(u32, u32)> = Vec::new();
        for &part in &alpha.parts()[1..] {
            match m.iter_mut().find(|(p, _)| *p == part) {
                Some((_, c)) => *c += 1,
                None => m.push((part, 1)),
            }
        }
        m
    };

    let mut result = all;
    // Choose, for each part size, how many of the remaining cycles join the
    // block of the first cycle.
    let mut choices: Vec<(u32, u32)> = Vec::new(); // (part, chosen count)
    let mut corrections: Vec<(Partition, Partition, BigUint)> = Vec::new();
    enumerate_subsets(&rest_mults, 0, &mut choices, &mut |chosen| {
        let mut beta_parts = vec![first];
        let mut ways = BigUint::one();
        for &(part, take) in chosen {
            let avail = rest_mults
                .iter()
                .find(|&&(p, _)| p == part)
                .map(|&(_, m)| m)
                .unwrap_or(0);
            ways *= binomial(avail, take).to_biguint().unwrap();
            for _ in 0..take {
                beta_parts.push(part);
            }
        }
        let beta = Partition::new(beta_parts);
        if beta.weight() == alpha.weight() {
            return; // improper split: the whole set
        }
        let gamma = subtract_multiset(alpha, &beta);
        corrections.push((beta, gamma, ways));
    });
    for (beta, gamma, ways) in corrections {
        let mut correction = BigUint::zero();
        for k in 0..=r {
            let t = transitive_rec(&beta, k, memo_t, memo_a);
            if t.is_zero() {
                continue;
            }
            let a = count_all_memo(&gamma, r - k, memo_a);
            if a.is_zero() {
                continue;
            }
            correction += binomial(r, k).to_biguint().unwrap() * t * a;
        }
        result -= correction * ways;
    }

    memo_t.insert((alpha.clone(), r), result.clone());
    result
}

/// Per-type cache of the DP output for every transposition count up to the
/// largest requested so far; extending reruns the DP once from scratch.
fn count_all_memo(
    alpha: &Partition,
    r: u32,
    memo: &mut HashMap<Partition, Vec<BigUint>>,
) -> BigUint {
    let entry = memo.entry(alpha.clone()).or_default();
    if entry.len() <= r as usize {
        *entry = counts_by_steps(alpha, r);
    }
    entry[r as usize].clone()
}

/// Runs the group-algebra DP once, recording the target coefficient after
/// each of the `r_max` convolution steps.
fn counts_by_steps(alpha: &Partition, r_max: u32) -> Vec<BigUint> {
    let n = alpha.weight() as usize;
    let target = Perm::canonical_of_type(alpha);
    if n == 1 {
        let mut out = vec![BigUint::zero(); r_max as usize + 1];
        out[0] = BigUint::one();
        return out;
    }
    let size = factorial_usize(n);
    let perms = all_perms(n);
    let mut index_of: HashMap<Perm, usize> = HashMap::with_capacity(size);
    for (i, p) in perms.iter().enumerate() {
        index_of.insert(p.clone(), i);
    }
    let mut trans_maps: Vec<Vec<u32>> = Vec::new();
    for a in 0..n as u8 {
        for b in (a + 1)..n as u8 {
            let tau = Perm::transposition(n, a, b);
            trans_maps.push(
                perms
                    .iter()
                    .map(|g| index_of[&g.compose(&tau)] as u32)
                    .collect(),
            );
        }
    }
    let target_idx = index_of[&target];
    let mut counts = vec![BigUint::zero(); size];
    counts[index_of[&Perm::identity(n)]] = BigUint::one();
    let mut out = Vec::with_capacity(r_max as usize + 1);
    out.push(counts[target_idx].clone());
    for _ in 0..r_max {
        let mut next = vec![BigUint::zero(); size];
        for (g, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for map in &trans_maps {
                next[map[g] as usize] += c;
            }
        }
        counts = next;
        out.push(counts[target_idx].clone());
    }
    out
}

fn enumerate_subsets(
    mults: &[(u32, u32)],
    idx: usize,
    acc: &mut Vec<(u32, u32)>,
    f: &mut impl FnMut(&[(u32, u32)]),
) {
    if idx == mults.len() {
        f(acc);
        return;
    }
    let (part, max) = mults[idx];
    for take in 0..=max {
        acc.push((part, take));
        enumerate_subsets(mults, idx + 1, acc, f);
        acc.pop();
    }
}

fn subtract_multiset(alpha: &Partition, beta: &Partition) -> Partition {
    let mut remaining: Vec<u32> = alpha.parts().to_vec();
    for &b in beta.parts() {
        let pos = remaining.iter().position(|&p| p == b).expect("beta not a sub-multiset");
        remaining.remove(pos);
    }
    Partition::new(remaining)
}

/// Direct DFS enumeration over all transposition tuples; exponential, kept
/// as an independent oracle for tiny degrees.
pub fn count_transitive_dfs(alpha: &Partition, r: u32) -> BigUint {
    let n = alpha.weight() as usize;
    assert!(n <= 5, "DFS oracle is exponential; keep n small");
    if n == 1 {
        return if r == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let target = Perm::canonical_of_type(alpha);
    let mut transpositions = Vec::new();
    for a in 0..n as u8 {
        for b in (a + 1)..n as u8 {
            transpositions.push((a, b, Perm::transposition(n, a, b)));
        }
    }
    let mut count = BigUint::zero();
    let mut tuple: Vec<usize> = Vec::new();
    dfs(
        &transpositions,
        r,
        &Perm::identity(n),
        &target,
        &mut tuple,
        &mut count,
    );
    count
}

fn dfs(
    transpositions: &[(u8, u8, Perm)],
    remaining: u32,
    product: &Perm,
    target: &Perm,
    tuple: &mut Vec<usize>,
    count: &mut BigUint,
) {
    if remaining == 0 {
        if product == target && tuple_transitive(transpositions, tuple, target.degree()) {
            *count += BigUint::one();
        }
        return;
    }
    for (i, (_, _, tau)) in transpositions.iter().enumerate() {
        tuple.push(i);
        // Left-to-right product tau_1 tau_2 ... tau_r.
        dfs(transpositions, remaining - 1, &product.compose(tau), target, tuple, count);
        tuple.pop();
    }
}

fn tuple_transitive(transpositions: &[(u8, u8, Perm)], tuple: &[usize], n: usize) -> bool {
    // Union-find over the points joined by the chosen transpositions.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &i in tuple {
        let (a, b, _) = transpositions[i];
        let ra = find(&mut parent, a as usize);
        let rb = find(&mut parent, b as usize);
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == root)
}

/// The Hurwitz number by brute force: the transitive factorization count of
/// one fixed representative divided by the class symmetry factor
/// `theta(alpha)`, with `r = n + m + 2g - 2`.
pub fn mu_via_factorizations(g: u32, alpha: &Partition) -> Result<Rational, FactorizeError> {
    let n = alpha.weight() as i64;
    let m = alpha.len() as i64;
    let r = n + m + 2 * g as i64 - 2;
    if r < 0 {
        return Err(FactorizeError::NegativeTranspositionCount);
    }
    let count = count_transitive_factorizations(alpha, r as u32)?;
    let count = Rational::from_integer(count.into());
    Ok(count / theta(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn count_all_examples() {
        assert_eq!(count_all_factorizations(&p(&[2]), 3).unwrap(), big(1));
        assert_eq!(count_all_factorizations(&p(&[1, 1]), 2).unwrap(), big(1));
        assert_eq!(count_all_factorizations(&p(&[1, 1, 1]), 2).unwrap(), big(3));
    }

    #[test]
    fn count_transitive_examples() {
        assert_eq!(count_transitive_factorizations(&p(&[3]), 2).unwrap(), big(3));
        assert_eq!(count_transitive_factorizations(&p(&[1, 1]), 2).unwrap(), big(1));
        assert_eq!(count_transitive_factorizations(&p(&[1, 1, 1]), 2).unwrap(), big(0));
    }

    #[test]
    fn sieve_matches_dfs_for_tiny_degrees() {
        for n in 1..=3u32 {
            for alpha in Partition::enumerate(n, crate::foundation::PartitionConstraint::All) {
                for r in 0..=8u32 {
                    assert_eq!(
                        count_transitive_factorizations(&alpha, r).unwrap(),
                        count_transitive_dfs(&alpha, r),
                        "sieve vs DFS at alpha={alpha}, r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn denes_tree_count() {
        // Transitive factorizations of a full cycle into n-1 transpositions:
        // n^{n-2}.
        for n in 2..=6u32 {
            let want = BigUint::from(n).pow(n - 2);
            assert_eq!(
                count_transitive_factorizations(&p(&[n]), n - 1).unwrap(),
                want,
                "Denes count at n={n}"
            );
        }
    }

    #[test]
    fn transitive_never_exceeds_all() {
        for n in 1..=4u32 {
            for alpha in Partition::enumerate(n, crate::foundation::PartitionConstraint::All) {
                for r in 0..=6u32 {
                    let t = count_transitive_factorizations(&alpha, r).unwrap();
                    let a = count_all_factorizations(&alpha, r).unwrap();
                    assert!(t <= a);
                }
            }
        }
    }

    #[test]
    fn counts_invariant_under_conjugate_representative() {
        // Recount against a non-canonical representative of the same class.
        for (alpha, r) in [(p(&[2, 1]), 3u32), (p(&[3, 1]), 4), (p(&[2, 2]), 4)] {
            let canonical = count_for_target(&Perm::canonical_of_type(&alpha), r);
            // Conjugate by the cycle (0 1 2 ... n-1).
            let n = alpha.weight() as usize;
            let mut images: Vec<u8> = (0..n as u8).map(|i| ((i as usize + 1) % n) as u8).collect();
            let c = Perm::from_images(std::mem::take(&mut images));
            let c_inv_imgs: Vec<u8> = {
                let mut inv = vec![0u8; n];
                for i in 0..n {
                    inv[c.images[i] as usize] = i as u8;
                }
                inv
            };
            let c_inv = Perm::from_images(c_inv_imgs);
            let conj = c.compose(&Perm::canonical_of_type(&alpha)).compose(&c_inv);
            assert_eq!(conj.cycle_type(), alpha);
            assert_eq!(count_for_target(&conj, r), canonical);
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_via_factorizations(0, &p(&[3])).unwrap(), rat(1, 1));
        assert_eq!(mu_via_factorizations(0, &p(&[1, 1])).unwrap(), rat(1, 2));
        assert_eq!(mu_via_factorizations(2, &p(&[1, 1])).unwrap(), rat(1, 2));
    }

    #[test]
    fn cap_is_enforced() {
        let alpha = p(&[9]);
        assert_eq!(
            count_all_factorizations(&alpha, 1),
            Err(FactorizeError::CapExceeded { n: 9, cap: 8 })
        );
    }
}

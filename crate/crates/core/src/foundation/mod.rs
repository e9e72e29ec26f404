//! Exact scalar arithmetic, partition combinatorics, symmetric-function
//! evaluation, and exact linear algebra used by every other module.

mod matrix;
mod partition;

pub use matrix::{nullspace, solve_unique, RationalMatrix, SolveOutcome};
pub use partition::{Partition, PartitionConstraint};

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// The scalar field of the whole crate: arbitrary-precision rationals,
/// always stored in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoundationError {
    #[error("Bernoulli numbers are only exposed for even indices, got {0}")]
    OddBernoulliIndex(u32),
    #[error("malformed rational literal {0:?}")]
    BadRationalLiteral(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p/q`, or just `p` when the denominator is one.
/// This is the serialization used in every file format of the crate.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `p/q` form produced by [`rational_to_string`].
pub fn rational_from_str(s: &str) -> Result<Rational, FoundationError> {
    let bad = || FoundationError::BadRationalLiteral(s.to_string());
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() || q.is_negative() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

static FACTORIALS: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// `n!` as an exact integer, from a memoized table. Coefficients like
/// `(n+m+2g-2)!` appear everywhere, so this is shared crate-wide.
pub fn factorial(n: u32) -> BigInt {
    let mut table = FACTORIALS.lock().unwrap();
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= n as usize {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n as usize].clone()
}

/// Binomial coefficient `C(n, k)` as an exact integer; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `base^exp` for a possibly negative exponent, as an exact rational.
/// `base` must be nonzero when `exp < 0`.
pub fn int_pow(base: u32, exp: i32) -> Rational {
    let b = BigInt::from(base);
    if exp >= 0 {
        Rational::from_integer(b.pow(exp as u32))
    } else {
        assert!(base != 0, "0 cannot be raised to a negative power");
        Rational::new(BigInt::one(), b.pow((-exp) as u32))
    }
}

/// The symmetry factor of the conjugacy class `C_alpha`: the product
/// `prod_i i^{m_i} m_i!` over the part multiplicities of `alpha`.
pub fn theta(alpha: &Partition) -> Rational {
    assert!(!alpha.is_empty(), "theta requires a nonempty partition");
    let mut out = BigInt::one();
    for (part, mult) in alpha.multiplicities() {
        out *= BigInt::from(part).pow(mult) * factorial(mult);
    }
    Rational::from_integer(out)
}

/// The series coefficient `a_n = n^n / (n-1)!`.
pub fn a_coeff(n: u32) -> Rational {
    assert!(n >= 1, "a_coeff requires n >= 1");
    Rational::new(BigInt::from(n).pow(n), factorial(n - 1))
}

/// Product of `a_coeff` over the parts of a partition.
pub fn a_coeff_product(alpha: &Partition) -> Rational {
    alpha.parts().iter().map(|&p| a_coeff(p)).product()
}

/// Evaluates the monomial symmetric function `m_nu` with the variables set
/// to the parts of `alpha`: the sum of all distinct monomials obtained by
/// distributing the exponents of `nu` over the parts of `alpha`. Returns 0
/// when `nu` has more parts than `alpha`.
pub fn monomial_sym(nu: &Partition, alpha: &Partition) -> Rational {
    let k = nu.len();
    if k == 0 {
        return Rational::one();
    }
    let vars = alpha.parts();
    if k > vars.len() {
        return Rational::zero();
    }
    // Sum x^nu over distinct injections of exponent slots into variables:
    // choose an ordered k-subset of variable positions, divide by the
    // internal symmetry of equal exponents. Equal variable values would
    // still double-count, so instead enumerate k-subsets and the distinct
    // permutations of nu over each subset.
    let positions: Vec<u32> = vars.to_vec();
    let mut total = BigInt::zero();
    let mut chosen = Vec::with_capacity(k);
    subsets_rec(&positions, k, 0, &mut chosen, &mut |subset: &[u32]| {
        total += distinct_assignments(nu.parts(), subset);
    });
    Rational::from_integer(total)
}

fn subsets_rec(vars: &[u32], k: usize, start: usize, acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    let need = k - acc.len();
    for i in start..=vars.len().saturating_sub(need) {
        acc.push(vars[i]);
        subsets_rec(vars, k, i + 1, acc, f);
        acc.pop();
    }
}

/// Sum of `prod x_i^{e_{sigma(i)}}` over the distinct permutations `sigma`
/// of the exponent list `exps`, with variables `vals`.
fn distinct_assignments(exps: &[u32], vals: &[u32]) -> BigInt {
    let mut perm = exps.to_vec();
    // Sum over distinct permutations: iterate all permutations of the
    // multiset via the standard next-permutation loop on ascending order.
    perm.sort_unstable();
    let mut total = BigInt::zero();
    loop {
        let mut term = BigInt::one();
        for (v, e) in vals.iter().zip(perm.iter()) {
            term *= BigInt::from(*v).pow(*e);
        }
        total += term;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    total
}

fn next_permutation(seq: &mut [u32]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Bernoulli number `B_k` for even `k`, with the convention `B_2 = 1/6`.
/// Computed from the recurrence `sum_{j=0}^{k} C(k+1, j) B_j = 0`.
pub fn bernoulli(k: u32) -> Result<Rational, FoundationError> {
    if k % 2 != 0 {
        return Err(FoundationError::OddBernoulliIndex(k));
    }
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    b.push(Rational::one());
    for m in 1..=k {
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        let bm = -acc / Rational::from_integer(BigInt::from(m + 1));
        b.push(bm);
    }
    Ok(b[k as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&p(&[2, 1, 1])), rat_int(4));
        assert_eq!(theta(&p(&[3])), rat_int(3));
        for n in 1..=8u32 {
            let ones = p(&vec![1; n as usize]);
            assert_eq!(theta(&ones), Rational::from_integer(factorial(n)));
        }
    }

    #[test]
    fn a_coeff_examples() {
        assert_eq!(a_coeff(1), rat_int(1));
        assert_eq!(a_coeff(2), rat_int(4));
        assert_eq!(a_coeff(3), rat(27, 2));
    }

    #[test]
    fn class_equation() {
        // sum over all partitions of n of n!/theta(alpha) = n!
        for n in 0..=10u32 {
            let total: Rational = Partition::enumerate(n, PartitionConstraint::All)
                .iter()
                .filter(|a| !a.is_empty())
                .map(|a| Rational::from_integer(factorial(n)) / theta(a))
                .sum();
            let expect = if n == 0 {
                Rational::zero()
            } else {
                Rational::from_integer(factorial(n))
            };
            assert_eq!(total, expect, "class equation fails at n={n}");
        }
    }

    #[test]
    fn monomial_sym_examples() {
        assert_eq!(monomial_sym(&p(&[2]), &p(&[2])), rat_int(4));
        assert_eq!(monomial_sym(&p(&[2, 1]), &p(&[3, 2])), rat_int(30));
        // m_{(1^k)} = e_k
        let alpha = p(&[4, 2, 1]);
        assert_eq!(monomial_sym(&p(&[1, 1]), &alpha), rat_int(4 * 2 + 4 + 2));
        assert_eq!(monomial_sym(&p(&[1, 1, 1]), &alpha), rat_int(8));
        // more parts than variables
        assert_eq!(monomial_sym(&p(&[1, 1, 1]), &p(&[2, 2])), Rational::zero());
    }

    #[test]
    fn monomial_sym_repeated_exponents() {
        // m_{(2,2)}(x,y,z) = x^2y^2 + x^2z^2 + y^2z^2
        assert_eq!(
            monomial_sym(&p(&[2, 2]), &p(&[3, 2, 1])),
            rat_int(36 + 9 + 4)
        );
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0).unwrap(), rat_int(1));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), rat(1, 42));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(3).is_err());
    }

    #[test]
    fn bernoulli_recurrence_holds() {
        // sum_{j=0}^{k} C(k+1,j) B_j = 0 for even k <= 20, where odd B_j
        // vanish above 1 and B_1 = -1/2 in this recurrence's convention.
        for k in (2..=20u32).step_by(2) {
            let mut b: Vec<Rational> = vec![Rational::one()];
            for m in 1..=k {
                let mut acc = Rational::zero();
                for (j, bj) in b.iter().enumerate() {
                    acc += Rational::from_integer(binomial(m + 1, j as u32)) * bj;
                }
                b.push(-acc / rat_int(m as i64 + 1));
            }
            let sum: Rational = (0..=k)
                .map(|j| Rational::from_integer(binomial(k + 1, j)) * &b[j as usize])
                .sum();
            assert_eq!(sum, Rational::zero());
            assert_eq!(b[k as usize], bernoulli(k).unwrap());
        }
    }

    #[test]
    fn rational_string_round_trip() {
        for r in [rat_int(0), rat_int(-3), rat(22, 7), rat(-5, 9)] {
            let s = rational_to_string(&r);
            assert_eq!(rational_from_str(&s).unwrap(), r);
        }
        assert_eq!(rational_to_string(&rat_int(5)), "5");
        assert_eq!(rational_to_string(&rat(1, 2)), "1/2");
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }
}

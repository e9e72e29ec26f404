//! Explicit coefficient-extraction formulas for genus 2: the monomial
//! symmetric function expansion of `[x^n p_alpha]` of `psi`-products, the
//! resulting closed form for `mu_m^{(2)}(alpha)`, and the unramified
//! specialization `mu_n^{(2)}` as a finite binomial sum.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::foundation::{
    a_coeff_product, binomial, factorial, int_pow, monomial_sym, theta, Partition, Rational,
};

/// `[x^n p_alpha] (1/(1-psi_1)) prod_i psi_i^{j_i}/j_i!` in closed form:
/// `(a_alpha/theta(alpha)) n^{l(alpha)-l(nu)} m_nu(alpha)` with
/// `nu = (1^{j_1} 2^{j_2} ...)`.
///
/// `j` is the multiplicity sequence: `j[i]` is the exponent of `psi_{i+1}`.
pub fn lemma31_coefficient(n: u32, alpha: &Partition, j: &[u32]) -> Rational {
    assert_eq!(alpha.weight(), n, "alpha must be a partition of n");
    assert!(n >= 1);
    let mut nu_parts = Vec::new();
    for (idx, &mult) in j.iter().enumerate() {
        for _ in 0..mult {
            nu_parts.push(idx as u32 + 1);
        }
    }
    let nu = Partition::new(nu_parts);
    let msym = monomial_sym(&nu, alpha);
    if msym.is_zero() {
        return Rational::zero();
    }
    let exponent = alpha.len() as i32 - nu.len() as i32;
    a_coeff_product(alpha) / theta(alpha) * int_pow(n, exponent) * msym
}

/// The explicit genus-2 Hurwitz number from the rational form of `F_2`:
///
/// `mu_m^{(2)}(alpha) = (n+m+2)! (a_alpha/theta(alpha)) (n^m/5760) sum_k [
///    ((k+1)!/n^{k+1}) (5 m_{(4 1^k)} - 12 m_{(3 1^k)} + 7 m_{(2 1^k)})
///  + ((k+2)!/n^{k+2}) ((29/2) m_{(3 2 1^k)} - 25 m_{(2^2 1^k)})
///  + ((k+3)!/n^{k+3}) 28 m_{(2^3 1^k)} ](alpha)`
///
/// The `k`-sum stops at `l(alpha)`: monomial symmetric functions with more
/// parts than variables vanish.
pub fn mu2_explicit(alpha: &Partition) -> Rational {
    assert!(!alpha.is_empty());
    let n = alpha.weight();
    let m = alpha.len() as u32;
    let msym = |base: &[u32], k: u32| {
        let mut parts = base.to_vec();
        parts.extend(std::iter::repeat(1).take(k as usize));
        monomial_sym(&Partition::new(parts), alpha)
    };
    let mut total = Rational::zero();
    for k in 0..=m {
        let f1 = Rational::from_integer(factorial(k + 1)) * int_pow(n, -(k as i32) - 1);
        let f2 = Rational::from_integer(factorial(k + 2)) * int_pow(n, -(k as i32) - 2);
        let f3 = Rational::from_integer(factorial(k + 3)) * int_pow(n, -(k as i32) - 3);
        let group1 = Rational::from_integer(5.into()) * msym(&[4], k)
            - Rational::from_integer(12.into()) * msym(&[3], k)
            + Rational::from_integer(7.into()) * msym(&[2], k);
        let group2 = Rational::new(29.into(), 2.into()) * msym(&[3, 2], k)
            - Rational::from_integer(25.into()) * msym(&[2, 2], k);
        let group3 = Rational::from_integer(28.into()) * msym(&[2, 2, 2], k);
        total += f1 * group1 + f2 * group2 + f3 * group3;
    }
    Rational::from_integer(factorial(n + m + 2))
        * (a_coeff_product(alpha) / theta(alpha))
        * int_pow(n, m as i32)
        * Rational::new(1.into(), 5760.into())
        * total
}

/// The unramified genus-2 count `mu_n^{(2)} = mu_n^{(2)}(1^n)`:
///
/// `((2n+2)!/(1440 n)) (12 A_4 + 21 A_3 + 2 A_2)` with
/// `A_k = sum_{i=0}^{n-k} C(i+5, 5) n^{n-i-k}/(n-i-k)!`;
/// empty sums (when `n < k`) are zero.
pub fn mu2_unramified(n: u32) -> Rational {
    assert!(n >= 1);
    let a = |k: u32| -> Rational {
        if n < k {
            return Rational::zero();
        }
        let mut acc = Rational::zero();
        for i in 0..=(n - k) {
            let e = n - i - k;
            acc += Rational::from_integer(binomial(i + 5, 5))
                * Rational::new(BigInt::from(n).pow(e), factorial(e));
        }
        acc
    };
    let combo = Rational::from_integer(12.into()) * a(4)
        + Rational::from_integer(21.into()) * a(3)
        + Rational::from_integer(2.into()) * a(2);
    Rational::new(factorial(2 * n + 2), BigInt::from(1440u32) * BigInt::from(n)) * combo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, rat_int};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn lemma31_examples() {
        assert_eq!(lemma31_coefficient(1, &p(&[1]), &[]), rat_int(1));
        // n=2, alpha=(2), nu=(2): a_2/theta * 2^0 * m_(2) = (4/2)*4 = 8
        assert_eq!(lemma31_coefficient(2, &p(&[2]), &[0, 1]), rat_int(8));
        // alpha = (1^n), j = 0: a=1, theta=n!, n^{l(alpha)}
        for n in 1..=6u32 {
            let ones = p(&vec![1; n as usize]);
            let want = Rational::new(BigInt::from(n).pow(n), factorial(n));
            assert_eq!(lemma31_coefficient(n, &ones, &[]), want);
        }
    }

    #[test]
    fn lemma31_matches_series_engine() {
        // Oracle: expand (1/(1-psi_1)) prod psi_i^{j_i}/j_i! with the series
        // engine and compare coefficients for all alpha of weight <= 4.
        let order = 4u32;
        let engine = crate::genfun::psi_at_s(1, order).geometric_inverse();
        let cases: &[&[u32]] = &[&[], &[1], &[0, 1], &[2], &[1, 1], &[0, 0, 1], &[0, 2]];
        for j in cases {
            let mut series = engine.clone();
            for (idx, &mult) in j.iter().enumerate() {
                let psi = crate::genfun::psi_at_s(idx as u32 + 1, order);
                for _ in 0..mult {
                    series = series.mul(&psi);
                }
                series = series.scale(&Rational::new(1.into(), factorial(mult)));
            }
            for n in 1..=order {
                for alpha in
                    Partition::enumerate(n, crate::foundation::PartitionConstraint::All)
                {
                    assert_eq!(
                        lemma31_coefficient(n, &alpha, j),
                        series.coefficient(n, &alpha),
                        "lemma 3.1 mismatch at alpha={alpha}, j={j:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn mu2_explicit_examples() {
        assert_eq!(mu2_explicit(&p(&[1])), rat_int(0));
        assert_eq!(mu2_explicit(&p(&[1, 1])), rat(1, 2));
        assert_eq!(mu2_explicit(&p(&[2])), rat(1, 2));
    }

    #[test]
    fn mu2_explicit_matches_brute_force() {
        for n in 1..=4u32 {
            for alpha in Partition::enumerate(n, crate::foundation::PartitionConstraint::All) {
                assert_eq!(
                    mu2_explicit(&alpha),
                    crate::factorize::mu_via_factorizations(2, &alpha).unwrap(),
                    "mu2 mismatch at alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn mu2_unramified_small_values() {
        assert_eq!(mu2_unramified(1), rat_int(0));
        assert_eq!(mu2_unramified(2), rat(1, 2));
        // Confirmed against the cut-and-join recursion (r = n + n + 2).
        let table = crate::cutjoin::hurwitz_table(8, 3);
        let via_recursion =
            crate::cutjoin::mu_via_recursion(2, &p(&[1, 1, 1]), &table).unwrap();
        assert_eq!(via_recursion, rat_int(364));
        assert_eq!(mu2_unramified(3), rat_int(364));
    }

    #[test]
    fn mu2_unramified_matches_explicit() {
        for n in 1..=7u32 {
            let ones = p(&vec![1; n as usize]);
            assert_eq!(mu2_unramified(n), mu2_explicit(&ones), "mismatch at n={n}");
        }
    }
}

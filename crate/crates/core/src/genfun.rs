//! The generating series `F_0 .. F_3` for Hurwitz numbers, coefficient
//! extraction `mu`, the single-part formula, and exact fitting of the
//! conjectured rational-form coefficients `K_theta^{(g)}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cutjoin::HurwitzTable;
use crate::foundation::{
    a_coeff, factorial, int_pow, rational_from_str, rational_to_string, solve_unique, Partition,
    PartitionConstraint, Rational, RationalMatrix, SolveOutcome,
};
use crate::report::Report;
use crate::series::{psi_template, solve_tree_equation, PSeries, XSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenFunError {
    #[error("no closed-form series for genus {0} (supported: 0..=3)")]
    UnsupportedGenus(u32),
    #[error("truncation order {order} too small for |alpha| = {weight}")]
    TruncationTooSmall { order: u32, weight: u32 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("fitting is only wired for genus 2 and 3, got {0}")]
    UnsupportedGenus(u32),
    #[error("underdetermined system: {remaining} degrees of freedom remain at order {order}")]
    Underdetermined { remaining: usize, order: u32 },
    #[error("inconsistent system: equation for coefficient of p_{alpha} x^{n} is violated (the conjectured form is falsified at this genus/truncation)")]
    Inconsistent { n: u32, alpha: Partition },
    #[error("Hurwitz data does not cover alpha={alpha} at r={r} (table holds r <= {max_r}, n <= {max_n})")]
    DataTooSmall {
        alpha: Partition,
        r: u32,
        max_r: u32,
        max_n: u32,
    },
}

/// A rational expression `sum K_{d,theta} psi_theta / (1-psi_1)^d` plus an
/// optional `c_log log(1-psi_1)^{-1} + c_0 psi_0` tail (the genus-1 shape).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiExpression {
    pub terms: BTreeMap<(u32, Partition), Rational>,
    pub log_coeff: Rational,
    pub psi0_coeff: Rational,
}

impl PsiExpression {
    pub fn new() -> Self {
        PsiExpression {
            terms: BTreeMap::new(),
            log_coeff: Rational::zero(),
            psi0_coeff: Rational::zero(),
        }
    }

    pub fn with_term(mut self, d: u32, theta: &[u32], k: Rational) -> Self {
        self.terms.insert((d, Partition::new(theta.to_vec())), k);
        self
    }

    /// Highest psi index appearing anywhere in the expression.
    pub fn max_psi_index(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|(_, theta)| theta.parts().iter().copied())
            .max()
            .unwrap_or(0)
            .max(1)
    }
}

impl Default for PsiExpression {
    fn default() -> Self {
        Self::new()
    }
}

/// Theorem 1.1: `F_2 = (Q_3/(1-psi_1)^3 + Q_4/(1-psi_1)^4 + Q_5/(1-psi_1)^5)/5760`
/// with `Q_3 = 5 psi_4 - 12 psi_3 + 7 psi_2`, `Q_4 = 29 psi_2 psi_3 - 25 psi_2^2`,
/// `Q_5 = 28 psi_2^3`.
pub fn genus2_expression() -> PsiExpression {
    let k = |num: i64| Rational::new(num.into(), 5760.into());
    PsiExpression::new()
        .with_term(3, &[4], k(5))
        .with_term(3, &[3], k(-12))
        .with_term(3, &[2], k(7))
        .with_term(4, &[3, 2], k(29))
        .with_term(4, &[2, 2], k(-25))
        .with_term(5, &[2, 2, 2], k(28))
}

/// The genus-3 series, with overall prefactor `1/(2^3 9!)`.
pub fn genus3_expression() -> PsiExpression {
    let k = |num: i64| Rational::new(num.into(), (8 * 362880).into());
    PsiExpression::new()
        .with_term(5, &[7], k(35))
        .with_term(5, &[6], k(-147))
        .with_term(5, &[5], k(205))
        .with_term(5, &[4], k(-93))
        .with_term(6, &[3, 2], k(-930))
        .with_term(6, &[4, 4], k(607))
        .with_term(6, &[3, 3], k(1501))
        .with_term(6, &[4, 2], k(2329))
        .with_term(6, &[6, 2], k(539))
        .with_term(6, &[5, 3], k(1006))
        .with_term(6, &[4, 3], k(-3078))
        .with_term(6, &[5, 2], k(-1938))
        .with_term(7, &[4, 3, 2], k(13452))
        .with_term(7, &[3, 3, 3], k(2915))
        .with_term(7, &[3, 3, 2], k(-16821))
        .with_term(7, &[4, 2, 2], k(-12984))
        .with_term(7, &[3, 2, 2], k(12885))
        .with_term(7, &[5, 2, 2], k(4284))
        .with_term(7, &[2, 2, 2], k(-1395))
        .with_term(8, &[4, 2, 2, 2], k(22260))
        .with_term(8, &[3, 3, 2, 2], k(43050))
        .with_term(8, &[3, 2, 2, 2], k(-55300))
        .with_term(8, &[2, 2, 2, 2], k(10710))
        .with_term(9, &[3, 2, 2, 2, 2], k(81060))
        .with_term(9, &[2, 2, 2, 2, 2], k(-31220))
        .with_term(10, &[2, 2, 2, 2, 2, 2], k(34300))
}

/// Shared expansion state: the tree series `s`, the composed `psi_i(s, p)`,
/// and powers of `1/(1-psi_1)`.
pub(crate) struct PsiEngine {
    pub order: u32,
    pub s: PSeries,
    psis: Vec<PSeries>,
    gi: PSeries,
}

impl PsiEngine {
    pub fn new(order: u32, max_psi: u32) -> Self {
        let s = solve_tree_equation(order);
        let psis: Vec<PSeries> = (0..=max_psi as i32)
            .map(|i| psi_template(i, order).substitute_x(&s))
            .collect();
        let gi = psis[1].geometric_inverse();
        PsiEngine { order, s, psis, gi }
    }

    pub fn psi(&self, i: u32) -> &PSeries {
        &self.psis[i as usize]
    }

    /// `1/(1-psi_1)`.
    pub fn gi(&self) -> &PSeries {
        &self.gi
    }

    pub fn expand(&self, expr: &PsiExpression) -> PSeries {
        let mut out = PSeries::zero(self.order);
        let mut gi_pow: BTreeMap<u32, PSeries> = BTreeMap::new();
        for ((d, theta), k) in &expr.terms {
            let gi_d = gi_pow
                .entry(*d)
                .or_insert_with(|| self.gi.pow(*d))
                .clone();
            let mut term = gi_d;
            for &part in theta.parts() {
                term = term.mul(self.psi(part));
            }
            out = out.add(&term.scale(k));
        }
        if !expr.log_coeff.is_zero() {
            // log(1-psi_1)^{-1} = -log(1 + (-psi_1))
            let log_term = self.psi(1).scale(&-Rational::one()).log1p().scale(&-Rational::one());
            out = out.add(&log_term.scale(&expr.log_coeff));
        }
        if !expr.psi0_coeff.is_zero() {
            out = out.add(&self.psi(0).scale(&expr.psi0_coeff));
        }
        out
    }
}

/// `psi_i(s, p)` truncated at `order`.
pub fn psi_at_s(i: u32, order: u32) -> PSeries {
    let s = solve_tree_equation(order);
    psi_template(i as i32, order).substitute_x(&s)
}

/// Builds `F_g` for `g <= 3` at the given truncation order.
///
/// `F_0` comes from inverting `(x d/dx)^2 F_0 = psi_0(s,p)` coefficientwise
/// (the two integration constants vanish because `F_0` has no `n = 0` term);
/// `F_1 = (log(1-psi_1)^{-1} - psi_0)/24`; `F_2` and `F_3` are the explicit
/// rational forms.
pub fn build_f(g: u32, order: u32) -> Result<PSeries, GenFunError> {
    let engine = match g {
        0 | 1 => PsiEngine::new(order, 1),
        2 => PsiEngine::new(order, 4),
        3 => PsiEngine::new(order, 7),
        _ => return Err(GenFunError::UnsupportedGenus(g)),
    };
    Ok(build_f_with(&engine, g).expect("genus checked above"))
}

pub(crate) fn build_f_with(engine: &PsiEngine, g: u32) -> Option<PSeries> {
    match g {
        0 => {
            let psi0 = engine.psi(0);
            let mut out = PSeries::zero(engine.order);
            for (m, c) in psi0.terms() {
                let n = m.x_degree;
                debug_assert!(n >= 1);
                out.add_term(m.clone(), c / int_pow(n, 2));
            }
            Some(out)
        }
        1 => {
            let expr = PsiExpression {
                terms: BTreeMap::new(),
                log_coeff: Rational::new(1.into(), 24.into()),
                psi0_coeff: -Rational::new(1.into(), 24.into()),
            };
            Some(engine.expand(&expr))
        }
        2 => Some(engine.expand(&genus2_expression())),
        3 => Some(engine.expand(&genus3_expression())),
        _ => None,
    }
}

/// The Hurwitz number `mu_m^{(g)}(alpha) = (n+m+2g-2)! [x^n p_alpha] F_g`.
pub fn mu(g: u32, alpha: &Partition, order: u32) -> Result<Rational, GenFunError> {
    let n = alpha.weight();
    if n > order {
        return Err(GenFunError::TruncationTooSmall { order, weight: n });
    }
    let f = build_f(g, order)?;
    let r = n + alpha.len() as u32 + 2 * g - 2;
    Ok(Rational::from_integer(factorial(r)) * f.coefficient(n, alpha))
}

/// `mu_1^{(g)}(n)` by the single-part formula
/// `n mu / (n+2g-1)! = a_n (n^{2g-2}/2^{2g}) [x^{2g}] (sinh(x)/x)^{n-1}`.
pub fn mu_single_part(g: u32, n: u32) -> Rational {
    assert!(g >= 1 && n >= 1, "single-part formula requires g >= 1, n >= 1");
    let order = 2 * g;
    // sinh(x)/x = sum_k x^{2k} / (2k+1)!
    let mut coeffs = vec![Rational::zero(); order as usize + 1];
    for k in 0..=(order / 2) {
        coeffs[(2 * k) as usize] = Rational::new(1.into(), factorial(2 * k + 1));
    }
    let sinh_over_x = XSeries::from_coeffs(coeffs);
    let c = sinh_over_x.pow(n - 1).coeff(2 * g);
    Rational::from_integer(factorial(n + 2 * g - 1))
        * a_coeff(n)
        * int_pow(n, 2 * g as i32 - 3)
        * Rational::new(1.into(), num_bigint::BigInt::from(2).pow(2 * g))
        * c
}

/// Fitted coefficients of the conjectured rational form at one genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTable {
    pub genus: u32,
    pub terms: BTreeMap<(u32, Partition), Rational>,
}

impl KTable {
    pub fn to_json(&self) -> String {
        let view = KTableView {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|((d, theta), k)| KTermView {
                    d: *d,
                    theta: theta.parts().to_vec(),
                    K: rational_to_string(k),
                })
                .collect(),
        };
        serde_json::to_string(&view).expect("ktable serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<KTable, String> {
        let view: KTableView = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let mut terms = BTreeMap::new();
        for t in view.terms {
            terms.insert(
                (t.d, Partition::try_from(t.theta)?),
                rational_from_str(&t.K).map_err(|e| e.to_string())?,
            );
        }
        Ok(KTable {
            genus: view.genus,
            terms,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct KTableView {
    genus: u32,
    terms: Vec<KTermView>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct KTermView {
    d: u32,
    theta: Vec<u32>,
    K: String,
}

/// The `(d, theta)` index set of the conjectured form at genus `g`:
/// denominator exponents `2g-1 <= d <= 5g-5`, numerators `psi_theta` with
/// `theta` a partition of `n` with no part one, `l(theta) = d - 2(g-1)`,
/// and `d-1 <= n <= d+g-1`.
pub fn conjecture_index_set(g: u32) -> Vec<(u32, Partition)> {
    assert!(g >= 2);
    let mut out = Vec::new();
    for d in (2 * g - 1)..=(5 * g - 5) {
        let length = d - 2 * (g - 1);
        for n in (d - 1)..=(d + g - 1) {
            for theta in Partition::enumerate(n, PartitionConstraint::NoPartOneWithLength(length)) {
                out.push((d, theta));
            }
        }
    }
    out.sort();
    out
}

/// Fits the conjectured-form coefficients against Hurwitz data by equating
/// `[x^n p_alpha]` coefficients for all `|alpha| <= order` and solving the
/// exact linear system. Inconsistency is a reportable outcome: it falsifies
/// the conjectured form at this genus and truncation.
pub fn fit_k(genus: u32, data: &HurwitzTable, order: u32) -> Result<KTable, FitError> {
    if !(2..=3).contains(&genus) {
        return Err(FitError::UnsupportedGenus(genus));
    }
    fit_k_with_index_set(genus, &conjecture_index_set(genus), data, order)
}

/// The fitter against an arbitrary `(d, theta)` ansatz index set; the
/// experimental path for user-supplied higher-genus tables.
pub fn fit_k_with_index_set(
    genus: u32,
    index_set: &[(u32, Partition)],
    data: &HurwitzTable,
    order: u32,
) -> Result<KTable, FitError> {
    let max_psi = index_set
        .iter()
        .flat_map(|(_, theta)| theta.parts().iter().copied())
        .max()
        .unwrap_or(1);
    let engine = PsiEngine::new(order, max_psi);
    let mut gi_pow: BTreeMap<u32, PSeries> = BTreeMap::new();
    let columns: Vec<PSeries> = index_set
        .iter()
        .map(|(d, theta)| {
            let mut term = gi_pow
                .entry(*d)
                .or_insert_with(|| engine.gi().pow(*d))
                .clone();
            for &part in theta.parts() {
                term = term.mul(engine.psi(part));
            }
            term
        })
        .collect();

    // One equation per (n, alpha).
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut row_labels: Vec<(u32, Partition)> = Vec::new();
    for n in 1..=order {
        for alpha in Partition::enumerate(n, PartitionConstraint::All) {
            let r = n + alpha.len() as u32 + 2 * genus - 2;
            if r > data.max_r() || n > data.max_n() {
                return Err(FitError::DataTooSmall {
                    alpha,
                    r,
                    max_r: data.max_r(),
                    max_n: data.max_n(),
                });
            }
            let mu = data.mu_at(r, &alpha);
            rows.push(columns.iter().map(|c| c.coefficient(n, &alpha)).collect());
            rhs.push(mu / Rational::from_integer(factorial(r)));
            row_labels.push((n, alpha));
        }
    }

    let matrix = RationalMatrix::from_rows(rows.clone());
    match solve_unique(&matrix, &rhs) {
        SolveOutcome::Unique(x) => {
            let terms = index_set
                .iter()
                .cloned()
                .zip(x.into_iter())
                .collect::<BTreeMap<_, _>>();
            Ok(KTable { genus, terms })
        }
        SolveOutcome::Underdetermined(remaining) => {
            Err(FitError::Underdetermined { remaining, order })
        }
        SolveOutcome::Inconsistent(_) => {
            // Find a witness equation: solve the maximal-rank consistent
            // subsystem, then report the first original equation it violates.
            let witness = find_violated_equation(&rows, &rhs, &row_labels, index_set.len());
            let (n, alpha) = witness.unwrap_or_else(|| row_labels[0].clone());
            Err(FitError::Inconsistent { n, alpha })
        }
    }
}

fn find_violated_equation(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    labels: &[(u32, Partition)],
    cols: usize,
) -> Option<(u32, Partition)> {
    // Greedily take rows that increase rank until it saturates, solve that
    // subsystem, then scan all equations against the solution.
    let mut picked: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<Rational>> = picked.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        let m = RationalMatrix::from_rows(trial);
        if m.rank() > rank {
            rank = m.rank();
            picked.push(i);
            if rank == cols {
                break;
            }
        }
    }
    let sub_rows: Vec<Vec<Rational>> = picked.iter().map(|&j| rows[j].clone()).collect();
    let sub_rhs: Vec<Rational> = picked.iter().map(|&j| rhs[j].clone()).collect();
    let sub = RationalMatrix::from_rows(sub_rows);
    let SolveOutcome::Unique(x) = solve_unique(&sub, &sub_rhs) else {
        return None;
    };
    for (i, row) in rows.iter().enumerate() {
        let lhs: Rational = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        if lhs != rhs[i] {
            return Some(labels[i].clone());
        }
    }
    None
}

/// Checks the Lagrange-inversion consequences of the functional equation:
/// `x ds/dx = s/(1-psi_1)`, `ds/dp_k = a_k s^{k+1} / (k (1-psi_1))`, the
/// analogous identities for `psi_i`, and the defining equation of `s`
/// itself, all at the given order for indices up to 4.
pub fn verify_functional_identities(order: u32) -> Report {
    let mut report = Report::new();
    let engine = PsiEngine::new(order, 6);
    let s = &engine.s;
    let gi = engine.gi();

    let x = PSeries::monomial(order, 1, Partition::empty(), Rational::one());
    let defining = x.mul(&psi_template(0, order).substitute_x(s).exp());
    report.push(
        "s = x exp(psi_0(s,p))",
        defining == *s,
        "fixed point of the tree functional equation",
    );

    let lhs = s.x_log_derivative();
    let rhs = s.mul(gi);
    report.push("x ds/dx = s/(1-psi_1)", lhs == rhs, "tree series log-derivative");

    for k in 1..=4u32 {
        let lhs = s.p_derivative(k);
        let rhs = s
            .pow(k + 1)
            .mul(gi)
            .scale(&(a_coeff(k) * int_pow(k, -1)));
        report.push(
            format!("ds/dp_{k} = a_{k} s^{}/({k}(1-psi_1))", k + 1),
            lhs == rhs,
            "tree series ramification derivative",
        );
    }

    for i in 0..=4u32 {
        let psi_i = engine.psi(i);
        let psi_next = engine.psi(i + 1);
        let lhs = psi_i.x_log_derivative();
        let rhs = psi_next.mul(gi);
        report.push(
            format!("x dpsi_{i}/dx = psi_{}/(1-psi_1)", i + 1),
            lhs == rhs,
            "psi log-derivative",
        );
        for k in 1..=4u32 {
            let lhs = psi_i.p_derivative(k);
            let sk = s.pow(k);
            let first = sk.scale(&(int_pow(k, i as i32 - 1) * a_coeff(k)));
            let second = psi_next
                .mul(&sk)
                .mul(gi)
                .scale(&(a_coeff(k) * int_pow(k, -1)));
            report.push(
                format!("dpsi_{i}/dp_{k}"),
                lhs == first.add(&second),
                "psi ramification derivative",
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::mu_via_factorizations;
    use crate::foundation::{bernoulli, rat, rat_int};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn psi_at_s_examples() {
        let psi2 = psi_at_s(2, 4);
        assert_eq!(psi2.coefficient(2, &p(&[2])), rat_int(8));
        // p-linear slice of psi_1 is sum_k a_k p_k x^k
        let psi1 = psi_at_s(1, 5);
        for k in 1..=5u32 {
            assert_eq!(psi1.coefficient(k, &p(&[k])), a_coeff(k));
        }
        // weight grading: p-weight equals x-degree on every monomial
        let psi0 = psi_at_s(0, 6);
        for (m, _) in psi0.terms() {
            assert_eq!(m.p_part.weight(), m.x_degree);
        }
    }

    #[test]
    fn f0_basics() {
        let f0 = build_f(0, 5).unwrap();
        assert_eq!(f0.coefficient(1, &p(&[1])), rat_int(1));
        // mu_1^{(0)}(n) = n^{n-3}
        for n in 1..=5u32 {
            let m = mu(0, &p(&[n]), 5).unwrap();
            assert_eq!(m, int_pow(n, n as i32 - 3), "single-part genus 0 at n={n}");
        }
    }

    #[test]
    fn mu_matches_brute_force() {
        assert_eq!(mu(0, &p(&[1, 1]), 4).unwrap(), rat(1, 2));
        assert_eq!(mu(0, &p(&[3]), 4).unwrap(), rat_int(1));
        assert_eq!(mu(2, &p(&[1, 1]), 4).unwrap(), rat(1, 2));
        for g in 0..=2u32 {
            for n in 1..=3u32 {
                for alpha in Partition::enumerate(n, PartitionConstraint::All) {
                    assert_eq!(
                        mu(g, &alpha, 4).unwrap(),
                        mu_via_factorizations(g, &alpha).unwrap(),
                        "mu mismatch at g={g}, alpha={alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn mu_single_part_examples() {
        assert_eq!(mu_single_part(2, 1), rat_int(0));
        assert_eq!(mu_single_part(2, 2), rat(1, 2));
        assert_eq!(mu_single_part(1, 2), rat(1, 2));
    }

    #[test]
    fn f3_has_the_appendix_ktable() {
        let expr = genus3_expression();
        let k = expr
            .terms
            .get(&(10, p(&[2, 2, 2, 2, 2, 2])))
            .cloned()
            .unwrap();
        assert_eq!(k, rat(245, 20736));
        let k7 = expr.terms.get(&(5, p(&[7]))).cloned().unwrap();
        assert_eq!(k7, rat(35, 8 * 362880));
    }

    #[test]
    fn single_part_ktable_constants() {
        // K_{(3g-2)} at d = 2g-1 is 1/(24^g g!) and K_{(2g-2)} at d = 2g-1
        // is (1-2^{2g-1}) B_{2g} / (2^{2g-1} (2g)!).
        for (g, expr) in [(2u32, genus2_expression()), (3, genus3_expression())] {
            let d = 2 * g - 1;
            let lead = expr.terms.get(&(d, p(&[3 * g - 2]))).unwrap().clone();
            let want_lead = Rational::new(
                1.into(),
                num_bigint::BigInt::from(24).pow(g) * factorial(g),
            );
            assert_eq!(lead, want_lead, "leading K at g={g}");
            let tail = expr.terms.get(&(d, p(&[2 * g - 2]))).unwrap().clone();
            let b2g = bernoulli(2 * g).unwrap();
            let want_tail = (Rational::one()
                - Rational::from_integer(num_bigint::BigInt::from(2).pow(2 * g - 1)))
                * b2g
                / (Rational::from_integer(num_bigint::BigInt::from(2).pow(2 * g - 1))
                    * Rational::from_integer(factorial(2 * g)));
            assert_eq!(tail, want_tail, "trailing K at g={g}");
        }
    }

    #[test]
    fn conjecture_index_sets() {
        let g2 = conjecture_index_set(2);
        assert_eq!(
            g2,
            vec![
                (3, p(&[2])),
                (3, p(&[3])),
                (3, p(&[4])),
                (4, p(&[2, 2])),
                (4, p(&[3, 2])),
                (5, p(&[2, 2, 2])),
            ]
        );
        assert_eq!(conjecture_index_set(3).len(), 26);
    }

    #[test]
    fn fit_recovers_theorem_11_at_small_order() {
        let data = crate::cutjoin::hurwitz_table(16, 6);
        let kt = fit_k(2, &data, 6).unwrap();
        let expect = genus2_expression();
        assert_eq!(kt.terms, expect.terms);
    }

    #[test]
    fn fit_underdetermined_at_tiny_order() {
        // With only the three types of weight <= 2 there are fewer
        // equations than the six unknowns.
        let data = crate::cutjoin::hurwitz_table(8, 2);
        match fit_k(2, &data, 2) {
            Err(FitError::Underdetermined { remaining, .. }) => assert!(remaining >= 3),
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn fit_already_determined_at_order_three() {
        // The six basis series are already independent on the six types of
        // weight <= 3 (every psi_theta has x-valuation l(theta)), so the fit
        // succeeds this early and reproduces the full coefficient set.
        let data = crate::cutjoin::hurwitz_table(10, 3);
        let kt = fit_k(2, &data, 3).unwrap();
        assert_eq!(kt.terms, genus2_expression().terms);
    }

    #[test]
    fn fit_detects_inconsistent_data() {
        let mut data = crate::cutjoin::hurwitz_table(16, 6);
        // Poison mu^{(2)}((2)), which lives at r = 2 + 1 + 2*2 - 2 = 5:
        // the conjectured form must be falsified.
        data.poison_for_test(5, &p(&[2]), rat_int(12345));
        match fit_k(2, &data, 6) {
            Err(FitError::Inconsistent { .. }) => {}
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn functional_identities_hold() {
        let report = verify_functional_identities(6);
        for c in &report.checks {
            assert!(c.passed, "failed: {}", c.name);
        }
    }

    #[test]
    fn ktable_json_round_trip() {
        let kt = KTable {
            genus: 2,
            terms: genus2_expression().terms,
        };
        let js = kt.to_json();
        assert_eq!(KTable::from_json(&js).unwrap(), kt);
        assert!(js.contains("\"K\":\"1/1152\""));
    }
}

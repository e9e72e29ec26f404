//! The unramified specialization `p_1 = 1, p_i = 0`: the univariate series
//! `f_g`, the operator `D = x d/dx` as exact calculus on Laurent
//! polynomials in `W = 1/(1-w)`, the differential-equation ansatz with its
//! four-dimensional solution space, and the recurrence identities for
//! `mu_n^{(2)}` (including the Graber-Pandharipande recurrence).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::foundation::{binomial, factorial, int_pow, nullspace, rational_to_string, solve_unique, Partition, Rational, RationalMatrix, SolveOutcome};
use crate::genfun::{build_f, GenFunError};
use crate::series::{w_series, XSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnivariateError {
    #[error("D^{r} f_{g} is not a Laurent polynomial in W (supported: g=0,1 with r>=1; g=2 with r>=0)")]
    OutsideLaurentDomain { g: u32, r: u32 },
    #[error("degree span of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("unexpected solution-space dimension {got}, wanted {want}")]
    UnexpectedDimension { got: usize, want: usize },
    #[error(transparent)]
    GenFun(#[from] GenFunError),
}

/// A finitely supported Laurent polynomial in `W` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentW {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentW {
    pub fn zero() -> Self {
        LaurentW {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(terms: &[(i64, Rational)]) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, exponent: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exponent).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> Rational {
        self.coeffs
            .get(&exponent)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &LaurentW) -> LaurentW {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentW) -> LaurentW {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> LaurentW {
        if c.is_zero() {
            return LaurentW::zero();
        }
        LaurentW {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentW) -> LaurentW {
        let mut out = LaurentW::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// The operator `D = x d/dx = W^2 (W-1) d/dW`:
    /// `D(W^k) = k (W^{k+2} - W^{k+1})`.
    pub fn d(&self) -> LaurentW {
        let mut out = LaurentW::zero();
        for (e, c) in &self.coeffs {
            let k = Rational::from_integer((*e).into());
            out.add_term(e + 2, c * &k);
            out.add_term(e + 1, -(c * &k));
        }
        out
    }

    /// `(lowest, highest)` exponent of `W` with nonzero coefficient.
    pub fn degree_span(&self) -> Result<(i64, i64), UnivariateError> {
        let lo = self.coeffs.keys().next();
        let hi = self.coeffs.keys().next_back();
        match (lo, hi) {
            (Some(&lo), Some(&hi)) => Ok((lo, hi)),
            _ => Err(UnivariateError::ZeroPolynomial),
        }
    }

    /// Substitutes the tree function: `W = 1/(1-w(x))`, truncated at `order`.
    pub fn x_expansion(&self, order: u32) -> XSeries {
        let w = w_series(order);
        let big_w = w.geometric_inverse();
        let mut one_minus_w = XSeries::zero(order);
        let mut one = XSeries::zero(order);
        {
            // 1 and 1 - w
            let mut coeffs = vec![Rational::zero(); order as usize + 1];
            coeffs[0] = Rational::one();
            one = XSeries::from_coeffs(coeffs);
            one_minus_w = one.sub(&w);
        }
        let mut out = XSeries::zero(order);
        for (e, c) in &self.coeffs {
            let power = if *e >= 0 {
                big_w.pow(*e as u32)
            } else {
                one_minus_w.pow((-e) as u32)
            };
            out = out.add(&power.scale(c));
        }
        let _ = one;
        out
    }
}

/// `D f_0 = 1/2 - W^{-2}/2`.
fn df0() -> LaurentW {
    LaurentW::from_terms(&[
        (0, Rational::new(1.into(), 2.into())),
        (-2, Rational::new((-1).into(), 2.into())),
    ])
}

/// `D f_1 = (W-1)^2 / 24`.
fn df1() -> LaurentW {
    LaurentW::from_terms(&[
        (2, Rational::new(1.into(), 24.into())),
        (1, Rational::new((-2).into(), 24.into())),
        (0, Rational::new(1.into(), 24.into())),
    ])
}

/// `f_2 = (28 W^5 - 80 W^4 + 76 W^3 - 24 W^2)/5760`, the rational form of
/// `(4 w^2/(1-w)^4 + 28 w^3/(1-w)^5)/5760` in `W`.
fn f2_laurent() -> LaurentW {
    LaurentW::from_terms(&[
        (5, Rational::new(28.into(), 5760.into())),
        (4, Rational::new((-80).into(), 5760.into())),
        (3, Rational::new(76.into(), 5760.into())),
        (2, Rational::new((-24).into(), 5760.into())),
    ])
}

/// `D^r f_g` as an exact Laurent polynomial in `W`. Defined for `g = 0, 1`
/// with `r >= 1` and `g = 2` with `r >= 0` (the series themselves contain
/// log/dilog pieces at lower `r`).
pub fn d_power(g: u32, r: u32) -> Result<LaurentW, UnivariateError> {
    let (mut cur, applied) = match (g, r) {
        (0, r) if r >= 1 => (df0(), 1),
        (1, r) if r >= 1 => (df1(), 1),
        (2, _) => (f2_laurent(), 0),
        _ => return Err(UnivariateError::OutsideLaurentDomain { g, r }),
    };
    for _ in applied..r {
        cur = cur.d();
    }
    Ok(cur)
}

/// The specialization `f_g` of `F_g` at `p_1 = 1, p_i = 0`: setting every
/// ramification variable to zero except `p_1` keeps exactly the `p_1^n x^n`
/// monomials.
pub fn specialize_f(g: u32, order: u32) -> Result<XSeries, UnivariateError> {
    let big_f = build_f(g, order)?;
    let mut coeffs = vec![Rational::zero(); order as usize + 1];
    for n in 1..=order {
        let ones = Partition::new(vec![1; n as usize]);
        coeffs[n as usize] = big_f.coefficient(n, &ones);
    }
    Ok(XSeries::from_coeffs(coeffs))
}

/// `f_g` by the univariate route (the tree function directly); the fast
/// path used by the recurrence checks, cross-checked against
/// [`specialize_f`] in the test suites.
pub fn f_via_w(g: u32, order: u32) -> Result<XSeries, UnivariateError> {
    match g {
        0 => {
            // [x^n] f_0 = n^{n-3}/n!
            let mut coeffs = vec![Rational::zero(); order as usize + 1];
            for n in 1..=order {
                coeffs[n as usize] =
                    int_pow(n, n as i32 - 3) / Rational::from_integer(factorial(n));
            }
            Ok(XSeries::from_coeffs(coeffs))
        }
        1 => {
            // f_1 = (log(1-w)^{-1} - w)/24
            let w = w_series(order);
            Ok(w
                .log_geometric()
                .sub(&w)
                .scale(&Rational::new(1.into(), 24.into())))
        }
        2 => Ok(f2_laurent().x_expansion(order)),
        3 => {
            // The rational form of F_3 under psi_i -> w, as W-polynomials:
            // (36 w^2 W^6 + 2336 w^3 W^7 + 20720 w^4 W^8 + 49840 w^5 W^9
            //  + 34300 w^6 W^10) / (2^3 9!)
            let w = w_series(order);
            let big_w = w.geometric_inverse();
            let denom = Rational::from_integer(factorial(9) * num_bigint::BigInt::from(8));
            let pieces: [(u32, u32, i64); 5] = [
                (2, 6, 36),
                (3, 7, 2336),
                (4, 8, 20720),
                (5, 9, 49840),
                (6, 10, 34300),
            ];
            let mut out = XSeries::zero(order);
            for (wp, bp, num) in pieces {
                let term = w
                    .pow(wp)
                    .mul(&big_w.pow(bp as u32))
                    .scale(&(Rational::from_integer(num.into()) / &denom));
                out = out.add(&term);
            }
            Ok(out)
        }
        _ => Err(UnivariateError::GenFun(GenFunError::UnsupportedGenus(g))),
    }
}

/// Exact `mu_n^{(g)} = mu_n^{(g)}(1^n) = (2n+2g-2)! [x^n] f_g` for
/// `n = 0..=n_max` (index 0 unused, kept zero).
pub fn mu_unramified_table(g: u32, n_max: u32) -> Result<Vec<Rational>, UnivariateError> {
    let f = f_via_w(g, n_max)?;
    let mut out = vec![Rational::zero(); n_max as usize + 1];
    for n in 1..=n_max {
        out[n as usize] =
            Rational::from_integer(factorial(2 * n + 2 * g - 2)) * f.coeff(n);
    }
    Ok(out)
}

/// The four named recurrence/differential identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecurrenceId {
    /// The Graber-Pandharipande recurrence.
    Cor42,
    /// The second-order equation with sphere, torus and double-torus terms.
    Cor52,
    /// The first-order equation with torus terms only.
    Cor53,
    /// The minimal-form identity `f_2 = (7 D^3 - 8 D^2) f_1/6! - ...`.
    Cor54,
}

impl RecurrenceId {
    pub fn name(self) -> &'static str {
        match self {
            RecurrenceId::Cor42 => "cor42",
            RecurrenceId::Cor52 => "cor52",
            RecurrenceId::Cor53 => "cor53",
            RecurrenceId::Cor54 => "cor54",
        }
    }

    /// The coefficients `(b_1..b_10)` of the general ansatz realizing this
    /// identity (`None` for the Cor 5.4 shape, which lives in the smaller
    /// ansatz).
    fn b_vector(self) -> Option<[Rational; 10]> {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        match self {
            RecurrenceId::Cor42 => Some([
                r(4, 1),
                r(6, 1),
                r(2, 1),
                r(97, 136),
                r(-20, 17),
                r(0, 1),
                r(3899, 17),
                r(-3899, 34),
                r(8, 1),
                r(21, 17),
            ]),
            RecurrenceId::Cor52 => Some([
                r(2, 1),
                r(-6, 1),
                r(2, 1),
                r(1, 24),
                r(-1, 10),
                r(2, 1),
                r(25, 1),
                r(12, 1),
                r(0, 1),
                r(0, 1),
            ]),
            RecurrenceId::Cor53 => Some([
                r(0, 1),
                r(2, 1),
                r(3, 1),
                r(5, 48),
                r(-3, 20),
                r(0, 1),
                r(14, 1),
                r(-7, 1),
                r(0, 1),
                r(0, 1),
            ]),
            RecurrenceId::Cor54 => None,
        }
    }
}

/// One evaluated instance of a recurrence at a fixed `n`.
#[derive(Clone, Debug)]
pub struct RecurrenceRow {
    pub n: u32,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl RecurrenceRow {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub id: RecurrenceId,
    pub rows: Vec<RecurrenceRow>,
    /// Whether the identity also vanishes exactly as a W-polynomial.
    pub w_identity_exact: bool,
}

impl RecurrenceReport {
    pub fn all_equal(&self) -> bool {
        self.w_identity_exact && self.rows.iter().all(RecurrenceRow::equal)
    }

    /// Rows `(n, lhs, rhs, equal?)` with rationals as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,lhs,rhs,equal\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.n,
                rational_to_string(&row.lhs),
                rational_to_string(&row.rhs),
                row.equal()
            ));
        }
        out
    }
}

/// The columns of the general ansatz
/// `(b_1 D^2 + b_2 D + b_3) f_2 = (b_4 D^3 + b_5 D^2) f_1
///  + b_6 (D^2 f_0)(D^2 f_2) + b_7 (D^2 f_1)^2 + b_8 (D f_1)(D^3 f_1)
///  + b_9 (D^2 f_2)(D f_0) + b_10 (D^2 f_0)(D f_2)`
/// brought to the form `sum_j b_j col_j = 0`.
fn ansatz_columns() -> Vec<LaurentW> {
    let d2f2 = d_power(2, 2).unwrap();
    let df2 = d_power(2, 1).unwrap();
    let f2 = d_power(2, 0).unwrap();
    let d3f1 = d_power(1, 3).unwrap();
    let d2f1 = d_power(1, 2).unwrap();
    let d2f0 = d_power(0, 2).unwrap();
    let df1 = d_power(1, 1).unwrap();
    let df0 = d_power(0, 1).unwrap();
    let neg = -Rational::one();
    vec![
        d2f2.clone(),
        df2.clone(),
        f2,
        d3f1.scale(&neg),
        d2f1.scale(&neg),
        d2f0.mul(&d2f2).scale(&neg),
        d2f1.mul(&d2f1).scale(&neg),
        df1.mul(&d3f1).scale(&neg),
        d2f2.mul(&df0).scale(&neg),
        d2f0.mul(&df2).scale(&neg),
    ]
}

fn columns_to_matrix(columns: &[LaurentW]) -> RationalMatrix {
    let mut exponents: Vec<i64> = Vec::new();
    for col in columns {
        for (e, _) in col.terms() {
            if !exponents.contains(e) {
                exponents.push(*e);
            }
        }
    }
    exponents.sort_unstable();
    let rows: Vec<Vec<Rational>> = exponents
        .iter()
        .map(|e| columns.iter().map(|c| c.coeff(*e)).collect())
        .collect();
    RationalMatrix::from_rows(rows)
}

/// The solved general ansatz: its solution-space dimension and the
/// expressions of the dependent coefficients `b_3, b_6..b_10` in terms of
/// the free `b_1, b_2, b_4, b_5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzSolution {
    pub dimension: usize,
    /// Keyed by dependent index (3, 6, 7, 8, 9, 10); each value holds the
    /// coefficients on `(b_1, b_2, b_4, b_5)`.
    pub relations: BTreeMap<usize, [Rational; 4]>,
}

/// Assembles the 10-coefficient ansatz, equates powers of `W`, and solves
/// the homogeneous system exactly.
pub fn ansatz_nullspace() -> AnsatzSolution {
    let columns = ansatz_columns();
    let matrix = columns_to_matrix(&columns);
    let dimension = nullspace(&matrix).len();

    let free = [0usize, 1, 3, 4]; // b_1, b_2, b_4, b_5
    let dependent = [2usize, 5, 6, 7, 8, 9]; // b_3, b_6..b_10
    let dep_matrix = RationalMatrix::from_rows(
        (0..matrix.rows())
            .map(|r| dependent.iter().map(|&c| matrix.at(r, c).clone()).collect())
            .collect(),
    );
    let mut relations: BTreeMap<usize, [Rational; 4]> = BTreeMap::new();
    for (slot, &fcol) in free.iter().enumerate() {
        let rhs: Vec<Rational> = (0..matrix.rows())
            .map(|r| -matrix.at(r, fcol).clone())
            .collect();
        let SolveOutcome::Unique(x) = solve_unique(&dep_matrix, &rhs) else {
            panic!("dependent columns of the ansatz system must be independent");
        };
        for (di, &dcol) in dependent.iter().enumerate() {
            let entry = relations
                .entry(dcol + 1) // 1-based b index
                .or_insert_with(|| std::array::from_fn(|_| Rational::zero()));
            entry[slot] = x[di].clone();
        }
    }
    AnsatzSolution {
        dimension,
        relations,
    }
}

/// The empirical no-linear-recurrence check: the nullspace dimension of the
/// restricted ansatz `(c_1 D^2 + c_2 D + c_3) f_2 = c_4 D^3 f_1 + c_5 D^2 f_1`
/// (no quadratic terms, no `f_0`). A trivial nullspace supports the absence
/// of a linear recurrence for `mu_n^{(2)}`.
pub fn linear_only_nullspace_dimension() -> usize {
    let neg = -Rational::one();
    let columns = vec![
        d_power(2, 2).unwrap(),
        d_power(2, 1).unwrap(),
        d_power(2, 0).unwrap(),
        d_power(1, 3).unwrap().scale(&neg),
        d_power(1, 2).unwrap().scale(&neg),
    ];
    nullspace(&columns_to_matrix(&columns)).len()
}

/// The solved Cor 5.4 ansatz
/// `(b_1 D + b_2) f_2 = b_3 D^6 f_0 + b_4 (D^2 f_1)(D f_1) + b_5 D^2 f_1 + b_6 D^3 f_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor54Fit {
    pub dimension: usize,
    /// `(b_1..b_6)` normalized so that `b_2 = 1`.
    pub coefficients: [Rational; 6],
}

/// Solves the six-coefficient system; the solution space has dimension one
/// and forces `b_1 = b_3 = 0`, giving
/// `f_2 = (1/6!)(7 D^3 - 8 D^2) f_1 - (14/15)(D^2 f_1)(D f_1)`.
pub fn cor54_unique_fit() -> Result<Cor54Fit, UnivariateError> {
    let neg = -Rational::one();
    let d2f1 = d_power(1, 2).unwrap();
    let df1 = d_power(1, 1).unwrap();
    let columns = vec![
        d_power(2, 1).unwrap(),
        d_power(2, 0).unwrap(),
        d_power(0, 6).unwrap().scale(&neg),
        d2f1.mul(&df1).scale(&neg),
        d2f1.scale(&neg),
        d_power(1, 3).unwrap().scale(&neg),
    ];
    let basis = nullspace(&columns_to_matrix(&columns));
    if basis.len() != 1 {
        return Err(UnivariateError::UnexpectedDimension {
            got: basis.len(),
            want: 1,
        });
    }
    let v = &basis[0];
    if v[1].is_zero() {
        return Err(UnivariateError::UnexpectedDimension { got: 1, want: 1 });
    }
    let scale = v[1].recip();
    let coefficients = std::array::from_fn(|i| &v[i] * &scale);
    Ok(Cor54Fit {
        dimension: 1,
        coefficients,
    })
}

/// The exact W-polynomial residual of a named identity (zero when it holds).
pub fn differential_identity_residual(id: RecurrenceId) -> LaurentW {
    match id.b_vector() {
        Some(b) => {
            let columns = ansatz_columns();
            let mut acc = LaurentW::zero();
            for (bi, col) in b.iter().zip(&columns) {
                acc = acc.add(&col.scale(bi));
            }
            acc
        }
        None => {
            // f_2 - (1/720)(7 D^3 - 8 D^2) f_1 + (14/15)(D^2 f_1)(D f_1)
            let d3f1 = d_power(1, 3).unwrap();
            let d2f1 = d_power(1, 2).unwrap();
            let df1 = d_power(1, 1).unwrap();
            d_power(2, 0)
                .unwrap()
                .sub(
                    &d3f1
                        .scale(&Rational::new(7.into(), 720.into()))
                        .add(&d2f1.scale(&Rational::new((-8).into(), 720.into()))),
                )
                .add(&d2f1.mul(&df1).scale(&Rational::new(14.into(), 15.into())))
        }
    }
}

/// Evaluates both sides of a named identity for each `n <= n_max` with the
/// exact `mu` tables, and also reports the exact W-polynomial residual.
pub fn recurrence_check(id: RecurrenceId, n_max: u32) -> RecurrenceReport {
    let w_identity_exact = differential_identity_residual(id).is_zero();
    let mu0 = mu_unramified_table(0, n_max).unwrap();
    let mu1 = mu_unramified_table(1, n_max).unwrap();
    let mu2 = mu_unramified_table(2, n_max).unwrap();
    let rows = match id {
        RecurrenceId::Cor42 => (1..=n_max)
            .map(|n| {
                let lhs = mu2[n as usize].clone();
                let nn = Rational::from_integer(n.into());
                let mut rhs = &nn * &nn
                    * (Rational::new(97.into(), 136.into()) * &nn
                        - Rational::new(20.into(), 17.into()))
                    * &mu1[n as usize];
                for j in 1..n {
                    let jj = Rational::from_integer(j.into());
                    let nj = Rational::from_integer((n - j).into());
                    rhs += Rational::from_integer(binomial(2 * n, 2 * j - 2))
                        * &mu0[j as usize]
                        * &mu2[(n - j) as usize]
                        * &jj
                        * &nj
                        * (Rational::from_integer((8 * n).into())
                            - Rational::new(115.into(), 17.into()) * &jj);
                    rhs += Rational::from_integer(binomial(2 * n, 2 * j))
                        * &mu1[j as usize]
                        * &mu1[(n - j) as usize]
                        * &jj
                        * &nj
                        * (Rational::new(11697.into(), 34.into()) * &jj * &nj
                            - Rational::new(3899.into(), 68.into()) * &nn * &nn);
                }
                RecurrenceRow { n, lhs, rhs }
            })
            .collect(),
        RecurrenceId::Cor54 => (1..=n_max)
            .map(|n| {
                let lhs = mu2[n as usize].clone();
                let nn = Rational::from_integer(n.into());
                let poly = (Rational::from_integer(7.into()) * &nn * &nn * &nn
                    - Rational::from_integer(8.into()) * &nn * &nn)
                    / Rational::from_integer(factorial(6));
                let mut inner = poly * &mu1[n as usize];
                for j in 1..n {
                    let jj = Rational::from_integer(j.into());
                    let nj = Rational::from_integer((n - j).into());
                    inner -= Rational::new(7.into(), 15.into())
                        * &nn
                        * &jj
                        * &nj
                        * Rational::from_integer(binomial(2 * n, 2 * j))
                        * &mu1[j as usize]
                        * &mu1[(n - j) as usize];
                }
                let rhs =
                    Rational::from_integer(2.into() ) * Rational::from_integer(binomial(2 * n + 2, 2)) * inner;
                RecurrenceRow { n, lhs, rhs }
            })
            .collect(),
        RecurrenceId::Cor52 | RecurrenceId::Cor53 => {
            // x-series instantiation of the printed differential identity.
            let b = id.b_vector().unwrap();
            xseries_rows_for_b(&b, n_max)
        }
    };
    RecurrenceReport {
        id,
        rows,
        w_identity_exact,
    }
}

/// Per-`n` comparison of the two sides of the general ansatz with fixed
/// coefficients, evaluated on the exact x-expansions of the `f_g`.
fn xseries_rows_for_b(b: &[Rational; 10], n_max: u32) -> Vec<RecurrenceRow> {
    let f0 = f_via_w(0, n_max).unwrap();
    let f1 = f_via_w(1, n_max).unwrap();
    let f2 = f_via_w(2, n_max).unwrap();
    let lhs_series = f2
        .x_log_derivative(2)
        .scale(&b[0])
        .add(&f2.x_log_derivative(1).scale(&b[1]))
        .add(&f2.scale(&b[2]));
    let rhs_series = f1
        .x_log_derivative(3)
        .scale(&b[3])
        .add(&f1.x_log_derivative(2).scale(&b[4]))
        .add(&f0.x_log_derivative(2).mul(&f2.x_log_derivative(2)).scale(&b[5]))
        .add(&f1.x_log_derivative(2).mul(&f1.x_log_derivative(2)).scale(&b[6]))
        .add(&f1.x_log_derivative(1).mul(&f1.x_log_derivative(3)).scale(&b[7]))
        .add(&f2.x_log_derivative(2).mul(&f0.x_log_derivative(1)).scale(&b[8]))
        .add(&f0.x_log_derivative(2).mul(&f2.x_log_derivative(1)).scale(&b[9]));
    (1..=n_max)
        .map(|n| RecurrenceRow {
            n,
            lhs: lhs_series.coeff(n),
            rhs: rhs_series.coeff(n),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, rat_int};

    #[test]
    fn d_operator_on_w() {
        // D(W) = W^2 (W - 1) = W^3 - W^2.
        let w = LaurentW::from_terms(&[(1, rat_int(1))]);
        let dw = w.d();
        assert_eq!(dw.coeff(3), rat_int(1));
        assert_eq!(dw.coeff(2), rat_int(-1));
    }

    #[test]
    fn d_power_closed_forms() {
        let df0 = d_power(0, 1).unwrap();
        assert_eq!(df0.coeff(0), rat(1, 2));
        assert_eq!(df0.coeff(-2), rat(-1, 2));
        let d2f0 = d_power(0, 2).unwrap();
        assert_eq!(d2f0.coeff(0), rat_int(1));
        assert_eq!(d2f0.coeff(-1), rat_int(-1));
        assert!(d_power(0, 0).is_err());
        assert!(d_power(1, 0).is_err());
        assert!(d_power(3, 1).is_err());
    }

    #[test]
    fn degree_spans_match_the_table() {
        assert_eq!(d_power(0, 1).unwrap().degree_span().unwrap(), (-2, 0));
        assert_eq!(d_power(0, 2).unwrap().degree_span().unwrap(), (-1, 0));
        assert_eq!(d_power(0, 3).unwrap().degree_span().unwrap(), (0, 1));
        for r in 4..=6u32 {
            assert_eq!(
                d_power(0, r).unwrap().degree_span().unwrap(),
                (r as i64 - 2, 2 * r as i64 - 5)
            );
        }
        assert_eq!(d_power(1, 1).unwrap().degree_span().unwrap(), (0, 2));
        for r in 2..=6u32 {
            assert_eq!(
                d_power(1, r).unwrap().degree_span().unwrap(),
                (r as i64, 2 * r as i64)
            );
        }
        for r in 0..=4u32 {
            assert_eq!(
                d_power(2, r).unwrap().degree_span().unwrap(),
                (r as i64 + 2, 2 * r as i64 + 5)
            );
        }
        assert!(LaurentW::zero().degree_span().is_err());
    }

    #[test]
    fn f_series_examples() {
        let f2 = f_via_w(2, 6).unwrap();
        assert_eq!(f2.coeff(2), rat(4, 5760));
        let f1 = f_via_w(1, 6).unwrap();
        assert_eq!(f1.coeff(1), rat_int(0));
        let f0 = f_via_w(0, 8).unwrap();
        for n in 1..=8u32 {
            assert_eq!(
                f0.coeff(n),
                int_pow(n, n as i32 - 3) / Rational::from_integer(factorial(n))
            );
        }
    }

    #[test]
    fn specialization_matches_w_route() {
        for g in 0..=3u32 {
            let order = if g == 3 { 6 } else { 8 };
            assert_eq!(
                specialize_f(g, order).unwrap(),
                f_via_w(g, order).unwrap(),
                "specialization mismatch at g={g}"
            );
        }
    }

    #[test]
    fn d_power_consistent_with_series_route() {
        // x-expansion of the W-polynomial D^r f_2 equals D applied r times
        // to the specialized series.
        let order = 10;
        let f2 = f_via_w(2, order).unwrap();
        for r in 0..=3u32 {
            let via_w = d_power(2, r).unwrap().x_expansion(order);
            let via_series = f2.x_log_derivative(r);
            assert_eq!(via_w, via_series, "mismatch at r={r}");
        }
    }

    #[test]
    fn ansatz_dimension_and_relations() {
        let sol = ansatz_nullspace();
        assert_eq!(sol.dimension, 4);
        let r = |n: i64, d: i64| rat(n, d);
        let expect: &[(usize, [Rational; 4])] = &[
            (3, [r(-4, 1), r(-2, 1), r(240, 1), r(120, 1)]),
            (6, [r(-11, 2), r(-3, 2), r(-72, 1), r(-70, 1)]),
            (7, [r(47, 4), r(23, 4), r(-1236, 1), r(-875, 1)]),
            (8, [r(-293, 4), r(-85, 4), r(-264, 1), r(-420, 1)]),
            (9, [r(13, 1), r(3, 1), r(144, 1), r(140, 1)]),
            (10, [r(35, 2), r(7, 2), r(336, 1), r(280, 1)]),
        ];
        for (idx, coeffs) in expect {
            assert_eq!(sol.relations.get(idx), Some(coeffs), "relation b_{idx}");
        }
    }

    #[test]
    fn cor54_fit_is_one_dimensional() {
        let fit = cor54_unique_fit().unwrap();
        assert_eq!(fit.dimension, 1);
        let b = &fit.coefficients;
        assert_eq!(b[0], rat_int(0));
        assert_eq!(b[1], rat_int(1));
        assert_eq!(b[2], rat_int(0));
        assert_eq!(b[3], rat(-14, 15));
        assert_eq!(b[4], rat(-8, 720));
        assert_eq!(b[5], rat(7, 720));
    }

    #[test]
    fn no_linear_recurrence() {
        assert_eq!(linear_only_nullspace_dimension(), 0);
    }

    #[test]
    fn recurrences_hold_to_order_eight() {
        for id in [
            RecurrenceId::Cor42,
            RecurrenceId::Cor52,
            RecurrenceId::Cor53,
            RecurrenceId::Cor54,
        ] {
            let report = recurrence_check(id, 8);
            assert!(report.w_identity_exact, "{} W-identity", id.name());
            for row in &report.rows {
                assert!(
                    row.equal(),
                    "{} fails at n={}: {} vs {}",
                    id.name(),
                    row.n,
                    row.lhs,
                    row.rhs
                );
            }
        }
    }

    #[test]
    fn cor42_small_values() {
        let report = recurrence_check(RecurrenceId::Cor42, 2);
        assert_eq!(report.rows[1].lhs, rat(1, 2));
        assert!(report.rows[1].equal());
        let cor54 = recurrence_check(RecurrenceId::Cor54, 2);
        assert_eq!(cor54.rows[0].lhs, rat_int(0));
        assert!(cor54.rows[0].equal());
        assert!(cor54.rows[1].equal());
    }

    #[test]
    fn csv_rendering() {
        let report = recurrence_check(RecurrenceId::Cor54, 3);
        let csv = report.to_csv();
        assert!(csv.starts_with("n,lhs,rhs,equal\n"));
        assert!(csv.contains("1,0,0,true"));
    }
}

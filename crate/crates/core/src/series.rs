//! Truncated formal power series over the rationals in `x` and the
//! ramification variables `p_1, p_2, ...`, together with the functional
//! equation solvers for the tree series `s = x e^{psi_0(s,p)}` and the
//! classical `w = x e^w`.
//!
//! A series is truncated twice: monomials are kept only when both the
//! `x`-degree and the total `p`-weight are at most the truncation order.
//! Every series handled here satisfies p-weight <= x-degree, so the dual
//! truncation loses nothing while bounding intermediate growth.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::foundation::{a_coeff, factorial, int_pow, Partition, Rational};

/// A single monomial `p_lambda x^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PMonomial {
    pub x_degree: u32,
    pub p_part: Partition,
}

impl PMonomial {
    pub fn new(x_degree: u32, p_part: Partition) -> Self {
        PMonomial { x_degree, p_part }
    }

    pub fn pure_x(n: u32) -> Self {
        PMonomial {
            x_degree: n,
            p_part: Partition::empty(),
        }
    }
}

/// A truncated series: a sparse map from monomials to nonzero coefficients.
/// Monomials are ordered by `x`-degree, then canonically on the partition,
/// which fixes the serialization byte-for-byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSeries {
    order: u32,
    terms: BTreeMap<PMonomial, Rational>,
}

impl PSeries {
    pub fn zero(order: u32) -> Self {
        PSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: u32) -> Self {
        let mut s = Self::zero(order);
        s.add_term(PMonomial::pure_x(0), Rational::one());
        s
    }

    /// The series `c * p_lambda x^n` (empty if outside truncation).
    pub fn monomial(order: u32, n: u32, lambda: Partition, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.add_term(PMonomial::new(n, lambda), c);
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c` to the coefficient of `m`, dropping the entry when it
    /// cancels to zero or falls outside the truncation region.
    pub fn add_term(&mut self, m: PMonomial, c: Rational) {
        if c.is_zero() || m.x_degree > self.order || m.p_part.weight() > self.order {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// The exact coefficient of `p_alpha x^n`. Panics when the query lies
    /// outside the truncation region.
    pub fn coefficient(&self, n: u32, alpha: &Partition) -> Rational {
        assert!(
            n <= self.order && alpha.weight() <= self.order,
            "coefficient query (n={n}, |alpha|={}) outside truncation order {}",
            alpha.weight(),
            self.order
        );
        self.terms
            .get(&PMonomial::new(n, alpha.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Smallest `x`-degree with a nonzero coefficient.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x_degree).min()
    }

    pub fn add(&self, other: &PSeries) -> PSeries {
        assert_eq!(self.order, other.order, "truncation order mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PSeries) -> PSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> PSeries {
        if c.is_zero() {
            return PSeries::zero(self.order);
        }
        PSeries {
            order: self.order,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &PSeries) -> PSeries {
        assert_eq!(self.order, other.order, "truncation order mismatch");
        let n = self.order;
        let mut out = PSeries::zero(n);
        for (ma, ca) in &self.terms {
            if ma.x_degree > n {
                break;
            }
            let wa = ma.p_part.weight();
            for (mb, cb) in &other.terms {
                if ma.x_degree + mb.x_degree > n {
                    break; // both maps ascend in x-degree first
                }
                if wa + mb.p_part.weight() > n {
                    continue;
                }
                out.add_term(
                    PMonomial::new(ma.x_degree + mb.x_degree, ma.p_part.union(&mb.p_part)),
                    ca * cb,
                );
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> PSeries {
        let mut acc = PSeries::one(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by the single variable `p_k`.
    pub fn mul_by_p(&self, k: u32) -> PSeries {
        let mut out = PSeries::zero(self.order);
        for (m, c) in &self.terms {
            out.add_term(
                PMonomial::new(m.x_degree, m.p_part.with_part(k)),
                c.clone(),
            );
        }
        out
    }

    /// `1/(1-f)` for `f` with x-valuation >= 1.
    pub fn geometric_inverse(&self) -> PSeries {
        self.valuation_graded(|_| Rational::one())
    }

    /// `exp(f)` for `f` with x-valuation >= 1.
    pub fn exp(&self) -> PSeries {
        self.valuation_graded(|k| Rational::new(1.into(), factorial(k)))
    }

    /// `log(1+f)` for `f` with x-valuation >= 1 (so the argument `1+f` has
    /// constant term one).
    pub fn log1p(&self) -> PSeries {
        self.valuation_graded(|k| {
            if k == 0 {
                Rational::zero()
            } else if k % 2 == 1 {
                Rational::new(1.into(), k.into())
            } else {
                Rational::new((-1).into(), k.into())
            }
        })
    }

    /// Sums `c_k f^k` for `k = 0 ..= order/valuation`; the standard
    /// valuation-graded Taylor accumulation behind exp/log/geometric.
    fn valuation_graded(&self, coeff: impl Fn(u32) -> Rational) -> PSeries {
        let val = self.x_valuation().unwrap_or(self.order + 1);
        assert!(
            val >= 1,
            "series argument must have x-valuation >= 1 (constant term present)"
        );
        let mut out = PSeries::zero(self.order);
        out.add_term(PMonomial::pure_x(0), coeff(0));
        let mut power = self.clone();
        let mut k = 1u32;
        while k * val <= self.order {
            out = out.add(&power.scale(&coeff(k)));
            k += 1;
            if k * val <= self.order {
                power = power.mul(self);
            }
        }
        out
    }

    /// `x d/dx`: multiplies the coefficient of `x^n` by `n`.
    pub fn x_log_derivative(&self) -> PSeries {
        PSeries {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x_degree > 0)
                .map(|(m, c)| (m.clone(), c * Rational::from_integer(m.x_degree.into())))
                .collect(),
        }
    }

    /// `d/dp_k`: removes one part `k` and multiplies by its multiplicity.
    pub fn p_derivative(&self, k: u32) -> PSeries {
        assert!(k >= 1);
        let mut out = PSeries::zero(self.order);
        for (m, c) in &self.terms {
            let mult = m.p_part.count_part(k);
            if mult == 0 {
                continue;
            }
            let reduced = m.p_part.without_part(k).unwrap();
            out.add_term(
                PMonomial::new(m.x_degree, reduced),
                c * Rational::from_integer(mult.into()),
            );
        }
        out
    }

    /// Composition in `x`: every term `c p_lambda x^n` of `self` becomes
    /// `c p_lambda s(x,p)^n`. Requires `s` to have x-valuation 1.
    pub fn substitute_x(&self, s: &PSeries) -> PSeries {
        assert_eq!(self.order, s.order, "truncation order mismatch");
        assert_eq!(s.x_valuation(), Some(1), "substituted series must have x-valuation 1");
        let max_n = self.terms.keys().map(|m| m.x_degree).max().unwrap_or(0);
        let mut powers: Vec<PSeries> = Vec::with_capacity(max_n as usize + 1);
        powers.push(PSeries::one(self.order));
        for k in 1..=max_n {
            powers.push(powers[(k - 1) as usize].mul(s));
        }
        let mut out = PSeries::zero(self.order);
        for (m, c) in &self.terms {
            let sn = &powers[m.x_degree as usize];
            for (sm, sc) in &sn.terms {
                out.add_term(
                    PMonomial::new(sm.x_degree, sm.p_part.union(&m.p_part)),
                    sc * c,
                );
            }
        }
        out
    }

    /// Serializes in canonical monomial order.
    pub fn to_json(&self) -> String {
        let view = PSeriesView {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| PTermView {
                    n: m.x_degree,
                    alpha: m.p_part.parts().to_vec(),
                    c: crate::foundation::rational_to_string(c),
                })
                .collect(),
        };
        serde_json::to_string(&view).expect("series serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<PSeries, String> {
        let view: PSeriesView = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let mut out = PSeries::zero(view.order);
        for t in view.terms {
            let c = crate::foundation::rational_from_str(&t.c).map_err(|e| e.to_string())?;
            out.add_term(
                PMonomial::new(t.n, Partition::try_from(t.alpha)?),
                c,
            );
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PSeriesView {
    order: u32,
    terms: Vec<PTermView>,
}

#[derive(Serialize, Deserialize)]
struct PTermView {
    n: u32,
    alpha: Vec<u32>,
    c: String,
}

/// The template series `psi_i(x, p) = sum_n n^{i-1} a_n p_n x^n`, truncated
/// at `order`. Substituting the tree series for `x` yields `psi_i(s, p)`.
pub fn psi_template(i: i32, order: u32) -> PSeries {
    let mut out = PSeries::zero(order);
    for n in 1..=order {
        out.add_term(
            PMonomial::new(n, Partition::new(vec![n])),
            int_pow(n, i - 1) * a_coeff(n),
        );
    }
    out
}

/// Solves `s = x exp(psi_0(s, p))` by fixed-point iteration from `s = x`.
/// Each pass gains at least one order of x-adic accuracy, so the iteration
/// stabilizes within `order` passes.
pub fn solve_tree_equation(order: u32) -> PSeries {
    assert!(order >= 1);
    let template = psi_template(0, order);
    let x = PSeries::monomial(order, 1, Partition::empty(), Rational::one());
    let mut s = x.clone();
    for _ in 0..order {
        let next = x.mul(&template.substitute_x(&s).exp());
        if next == s {
            break;
        }
        s = next;
    }
    s
}

/// A truncated univariate series in `x` over the rationals; coefficient of
/// `x^k` at index `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XSeries {
    coeffs: Vec<Rational>,
}

impl XSeries {
    pub fn zero(order: u32) -> Self {
        XSeries {
            coeffs: vec![Rational::zero(); order as usize + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        XSeries { coeffs }
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, k: u32) -> Rational {
        assert!(k <= self.order(), "coefficient query outside truncation");
        self.coeffs[k as usize].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &XSeries) -> XSeries {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        XSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &XSeries) -> XSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> XSeries {
        XSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &XSeries) -> XSeries {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        XSeries { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> XSeries {
        let mut acc = {
            let mut one = XSeries::zero(self.order());
            one.coeffs[0] = Rational::one();
            one
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `x d/dx` applied `r` times.
    pub fn x_log_derivative(&self, r: u32) -> XSeries {
        XSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * int_pow(k as u32, r as i32))
                .collect(),
        }
    }

    /// `1/(1 - f)` for `f` with zero constant term.
    pub fn geometric_inverse(&self) -> XSeries {
        assert!(self.coeffs[0].is_zero(), "geometric_inverse needs valuation >= 1");
        let order = self.order();
        let mut out = XSeries::zero(order);
        out.coeffs[0] = Rational::one();
        let mut power = self.clone();
        for _ in 1..=order {
            out = out.add(&power);
            power = power.mul(self);
        }
        out
    }

    /// `log(1/(1-f)) = sum f^k/k` for `f` with zero constant term.
    pub fn log_geometric(&self) -> XSeries {
        assert!(self.coeffs[0].is_zero(), "log_geometric needs valuation >= 1");
        let order = self.order();
        let mut out = XSeries::zero(order);
        let mut power = self.clone();
        for k in 1..=order {
            out = out.add(&power.scale(&Rational::new(1.into(), k.into())));
            power = power.mul(self);
        }
        out
    }
}

/// The tree function `w = x e^w`, truncated at `order`, with zero constant
/// term; solved by the same fixed-point iteration as the `s` series.
pub fn w_series(order: u32) -> XSeries {
    assert!(order >= 1);
    let mut w = XSeries::zero(order);
    w.coeffs[1] = Rational::one();
    for _ in 0..order {
        // x * exp(w)
        let mut next = XSeries::zero(order);
        next.coeffs[0] = Rational::one();
        let mut power = w.clone();
        for k in 1..=order {
            next = next.add(&power.scale(&Rational::new(1.into(), factorial(k))));
            power = power.mul(&w);
        }
        let mut shifted = XSeries::zero(order);
        for k in 0..order {
            shifted.coeffs[(k + 1) as usize] = next.coeffs[k as usize].clone();
        }
        if shifted == w {
            break;
        }
        w = shifted;
    }
    w
}

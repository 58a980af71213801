//! The quantized coordinate algebra on the generic dressing orbit.
//!
//! Elements are finite linear combinations of ordered monomials
//! `w1^n1 w2^n2 w3^n3 w4^n4`. Multiplication rewrites any out-of-order
//! adjacent pair by the defining relations
//!
//! ```text
//! w2 w1 = q w1 w2            w3 w1 = w1 w3 - q^(-1/2) (q - 1) w2^2
//! w3 w2 = q w2 w3            w4 w2 = w2 w4 - q^(-1/2) (q - q^-1) w3
//! w4 w3 = q w3 w4            w4 w1 = q^-1 w1 w4 + (1 - q^-2) w2
//! ```
//!
//! Each rewrite replaces a word by strictly smaller words in the degree-lex
//! order, so leftmost reduction terminates. Confluence (the ordered
//! monomials really are a basis) is not assumed; the test suite checks it
//! through associativity. The `w4 w3` coefficient is the one resolution of
//! its printed source under which the critical pairs close at all: with the
//! factors the other way around, `(w4 w3) w2` and `w4 (w3 w2)` already
//! reduce to different normal forms, and the dressing transformation stops
//! being a derivation-like action.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalgebraError {
    #[error("dependent generator index ({0}, {1}) out of range: need 1 <= j < k <= 5")]
    IndexOutOfRange(u8, u8),
}

/// Ordered monomial `w1^n1 w2^n2 w3^n3 w4^n4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub fn unit() -> Self {
        Monomial([0, 0, 0, 0])
    }

    pub fn generator(j: usize) -> Self {
        let mut e = [0u32; 4];
        e[j - 1] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Letters in normal order: `1` repeated `n1` times, then `2`, ...
    pub fn letters(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (i, &n) in self.0.iter().enumerate() {
            for _ in 0..n {
                out.push(i as u8 + 1);
            }
        }
        out
    }

    fn from_sorted_letters(letters: &[u8]) -> Self {
        let mut e = [0u32; 4];
        for &l in letters {
            e[l as usize - 1] += 1;
        }
        Monomial(e)
    }

    /// Exponents of the two diagonal weights, before the sigma offset:
    /// `(-n1 + n3 + n4, 2 n1 + n2 - n4)` in units of `q`.
    pub fn weight_exponents(&self) -> (i64, i64) {
        let [n1, n2, n3, n4] = self.0.map(i64::from);
        (-n1 + n3 + n4, 2 * n1 + n2 - n4)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &n) in self.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "w{}", i + 1)?;
            } else {
                write!(f, "w{}^{}", i + 1, n)?;
            }
        }
        Ok(())
    }
}

/// Element of the coordinate algebra: monomials with scalar coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl CElement {
    pub fn zero() -> Self {
        CElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::unit())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Scalar::one(), m)
    }

    pub fn generator(j: usize) -> Self {
        Self::monomial(Monomial::generator(j))
    }

    pub fn term(coeff: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        CElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn insert_add(&mut self, m: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        CElement { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return CElement::zero();
        }
        let mut out = CElement::zero();
        for (m, c) in &self.terms {
            out.insert_add(*m, s.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = CElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = mul_monomials(*ma, *mb);
                for (m, c) in prod.terms {
                    out.insert_add(m, ca.mul(cb).mul(&c));
                }
            }
        }
        out
    }

    /// Substitute integer sigma values into every coefficient.
    pub fn substitute_sigma(&self, sigma1: i64, sigma2: i64) -> CElement {
        let mut out = CElement::zero();
        for (m, c) in &self.terms {
            out.insert_add(*m, c.substitute_sigma(sigma1, sigma2));
        }
        out
    }
}

/// Rewrite for one out-of-order adjacent pair `w_a w_b` (`a > b`): the swap
/// coefficient plus an optional lower word with its coefficient.
fn rewrite_pair(a: u8, b: u8) -> (Scalar, Option<(Vec<u8>, Scalar)>) {
    match (a, b) {
        // w2 w1 = q w1 w2
        (2, 1) => (Scalar::q_pow_quarters(4), None),
        // w3 w2 = q w2 w3
        (3, 2) => (Scalar::q_pow_quarters(4), None),
        // w4 w3 = q w3 w4
        (4, 3) => (Scalar::q_pow_quarters(4), None),
        // w3 w1 = w1 w3 - q^(-1/2) (q - 1) w2^2
        (3, 1) => {
            let c = Scalar::q_pow_quarters(2).sub(&Scalar::q_pow_quarters(-2)).neg();
            (Scalar::one(), Some((vec![2, 2], c)))
        }
        // w4 w2 = w2 w4 - q^(-1/2) (q - q^-1) w3
        (4, 2) => {
            let c = Scalar::q_pow_quarters(2).sub(&Scalar::q_pow_quarters(-6)).neg();
            (Scalar::one(), Some((vec![3], c)))
        }
        // w4 w1 = q^-1 w1 w4 + (1 - q^-2) w2
        (4, 1) => {
            let c = Scalar::one().sub(&Scalar::q_pow_quarters(-8));
            (Scalar::q_pow_quarters(-4), Some((vec![2], c)))
        }
        _ => unreachable!("pair ({a}, {b}) is not out of order"),
    }
}

/// Normal form of an arbitrary word with a scalar prefactor.
///
/// Leftmost reduction: scan for the first adjacent out-of-order pair,
/// rewrite, repeat. The worklist merges duplicate words so branching
/// rewrites stay polynomial.
pub fn normalize_word(word: &[u8], coeff: Scalar) -> CElement {
    let mut result = CElement::zero();
    let mut work: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
    if !coeff.is_zero() {
        work.insert(word.to_vec(), coeff);
    }
    while let Some((w, c)) = work.pop_first() {
        match first_inversion(&w) {
            None => result.insert_add(Monomial::from_sorted_letters(&w), c),
            Some(i) => {
                let (a, b) = (w[i], w[i + 1]);
                let (swap_c, extra) = rewrite_pair(a, b);
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                push_work(&mut work, swapped, c.mul(&swap_c));
                if let Some((mid, extra_c)) = extra {
                    let mut lower = Vec::with_capacity(w.len() - 2 + mid.len());
                    lower.extend_from_slice(&w[..i]);
                    lower.extend_from_slice(&mid);
                    lower.extend_from_slice(&w[i + 2..]);
                    push_work(&mut work, lower, c.mul(&extra_c));
                }
            }
        }
    }
    result
}

fn push_work(work: &mut BTreeMap<Vec<u8>, Scalar>, word: Vec<u8>, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    match work.entry(word) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get().add(&coeff);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn first_inversion(w: &[u8]) -> Option<usize> {
    (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1])
}

/// Normal form of a product of two ordered monomials.
pub fn mul_monomials(m1: Monomial, m2: Monomial) -> CElement {
    let mut word = m1.letters();
    word.extend(m2.letters());
    normalize_word(&word, Scalar::one())
}

/// The dependent generator `z*_{jk}` expressed in `w1..w4` (`1 <= j < k <= 5`).
pub fn dependent_generator(j: u8, k: u8) -> Result<CElement, CalgebraError> {
    if !(1 <= j && j < k && k <= 5) {
        return Err(CalgebraError::IndexOutOfRange(j, k));
    }
    let w = |i: usize| CElement::generator(i);
    let qh = Scalar::q_pow_quarters; // q^(n/4)
    let inv_1q = Scalar::new(crate::scalar::LaurentPoly::one(), 0, 1); // 1/(1+q)
    let el = match (j, k) {
        (1, 2) => w(1),
        (1, 3) => w(2),
        (1, 4) => w(3),
        (2, 3) => w(4),
        (4, 5) => w(1).neg(),
        (3, 4) => w(4).scale(&qh(2)).neg(),
        (3, 5) => w(2).scale(&qh(-2)).neg().add(&w(1).mul(&w(4)).scale(&qh(2))),
        (2, 4) => w(4).mul(&w(4)).scale(&qh(2).mul(&inv_1q)).neg(),
        (1, 5) => w(1)
            .mul(&w(3))
            .neg()
            .sub(&w(2).mul(&w(2)).scale(&qh(-2).mul(&inv_1q))),
        (2, 5) => w(3)
            .scale(&qh(-4))
            .neg()
            .sub(&w(2).mul(&w(4)).scale(&qh(-2)))
            .add(&w(1).mul(&w(4)).mul(&w(4)).scale(&qh(2).mul(&inv_1q))),
        _ => unreachable!(),
    };
    Ok(el)
}

impl fmt::Display for CElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (cs, atomic) = c.render();
            if m.degree() == 0 {
                write!(f, "{cs}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if atomic {
                write!(f, "{cs} * {m}")?;
            } else {
                write!(f, "({cs}) * {m}")?;
            }
        }
        Ok(())
    }
}

impl CElement {
    /// JSON form with generic scalar coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "monomial": m.0.to_vec(),
                    "coeff": c.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

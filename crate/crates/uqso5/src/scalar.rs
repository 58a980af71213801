//! Exact coefficient arithmetic.
//!
//! All symbolic coefficients live in the Laurent ring generated by
//! `t = q^(1/4)`, `u = q^(s1/4)`, `v = q^(s2/2)` over the rationals,
//! localized at `q - 1 = t^4 - 1` and `q + 1 = t^4 + 1`. Those two are the
//! only denominators the engine ever produces: `1/(1+q)` comes straight from
//! the structure constants, and `1/(q-1)`, `1/(q^2-1)` appear when a quantum
//! integer with a symbolic sigma shift is expanded over the `(u, v)` lattice.
//! Keeping the denominators in this fixed factored shape avoids any
//! multivariate gcd; after integer specialization everything collapses into
//! [`RationalFunction`], a univariate fraction field where gcd is cheap.

use num::{BigInt, BigRational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("sigma exponent not representable on the (u, v) lattice: {0}")]
    UnrepresentableExponent(String),
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("divisor is not invertible in the scalar ring")]
    NonInvertibleDivisor,
}

/// Exponent triple of a Laurent term: `t^t_exp * u^u_exp * v^v_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpKey {
    pub t_exp: i64,
    pub u_exp: i64,
    pub v_exp: i64,
}

impl ExpKey {
    pub fn new(t_exp: i64, u_exp: i64, v_exp: i64) -> Self {
        ExpKey { t_exp, u_exp, v_exp }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Laurent polynomial in `t`, `u`, `v` with rational coefficients.
///
/// The zero polynomial is the empty map; stored coefficients are never zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<ExpKey, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 0)
    }

    pub fn monomial(t_exp: i64, u_exp: i64, v_exp: i64) -> Self {
        Self::term(rat(1), t_exp, u_exp, v_exp)
    }

    pub fn term(coeff: BigRational, t_exp: i64, u_exp: i64, v_exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(ExpKey::new(t_exp, u_exp, v_exp), coeff);
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpKey, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, key: ExpKey, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
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
        for (k, c) in &other.terms {
            out.insert_add(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect();
        LaurentPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key = ExpKey::new(
                    ka.t_exp + kb.t_exp,
                    ka.u_exp + kb.u_exp,
                    ka.v_exp + kb.v_exp,
                );
                out.insert_add(key, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        let terms = self.terms.iter().map(|(k, a)| (*k, a * c)).collect();
        LaurentPoly { terms }
    }

    /// Exact division by `t^4 + c` (`c = -1` for `q - 1`, `c = +1` for `q + 1`).
    ///
    /// Long division in `t` over the coefficient ring `Q[u^±, v^±]`; the
    /// divisor is monic so no coefficient divisions occur. Returns `None`
    /// when the division leaves a remainder.
    pub fn div_exact_q_factor(&self, c: i64) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // Group by t-exponent; each slice is a Laurent polynomial in (u, v).
        let mut slices: BTreeMap<i64, BTreeMap<(i64, i64), BigRational>> = BTreeMap::new();
        let mut lo = i64::MAX;
        for (k, coeff) in &self.terms {
            lo = lo.min(k.t_exp);
            slices
                .entry(k.t_exp)
                .or_default()
                .insert((k.u_exp, k.v_exp), coeff.clone());
        }
        let cq = rat(c);
        let mut quotient = LaurentPoly::zero();
        while let Some((&deg, _)) = slices.iter().next_back() {
            if deg - lo < 4 {
                // remainder of degree below the divisor
                return None;
            }
            let lead = slices.remove(&deg).unwrap();
            // quotient term lead * t^(deg-4); subtract lead * t^(deg-4) * (t^4 + c)
            for ((u, v), co) in &lead {
                quotient.insert_add(ExpKey::new(deg - 4, *u, *v), co.clone());
            }
            let target = slices.entry(deg - 4).or_default();
            for ((u, v), co) in lead {
                let delta = -(&cq * &co);
                match target.entry((u, v)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        if !delta.is_zero() {
                            e.insert(delta);
                        }
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() + &delta;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
            if slices.get(&(deg - 4)).map_or(false, |m| m.is_empty()) {
                slices.remove(&(deg - 4));
            }
        }
        Some(quotient)
    }

    /// Substitute `u -> t^s1`, `v -> t^(2*s2)`, collapsing onto the t-axis.
    pub fn substitute_sigma(&self, sigma1: i64, sigma2: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (k, c) in &self.terms {
            let t = k.t_exp + sigma1 * k.u_exp + 2 * sigma2 * k.v_exp;
            out.insert_add(ExpKey::new(t, 0, 0), c.clone());
        }
        out
    }
}

/// An exact scalar: `num / ((q - 1)^qm1_pow * (q + 1)^qp1_pow)`.
///
/// Canonical form keeps both powers minimal: whenever a power is positive the
/// numerator is not exactly divisible by the corresponding factor. Two
/// scalars are equal iff their canonical representations coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    num: LaurentPoly,
    qm1_pow: u32,
    qp1_pow: u32,
}

impl Scalar {
    pub fn new(num: LaurentPoly, qm1_pow: u32, qp1_pow: u32) -> Self {
        let mut s = Scalar { num, qm1_pow, qp1_pow };
        s.canonicalize();
        s
    }

    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), qm1_pow: 0, qp1_pow: 0 }
    }

    pub fn one() -> Self {
        Scalar { num: LaurentPoly::one(), qm1_pow: 0, qp1_pow: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { num: LaurentPoly::term(rat(n), 0, 0, 0), qm1_pow: 0, qp1_pow: 0 }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { num: LaurentPoly::term(r, 0, 0, 0), qm1_pow: 0, qp1_pow: 0 }
    }

    /// `t^t_exp * u^u_exp * v^v_exp`.
    pub fn monomial(t_exp: i64, u_exp: i64, v_exp: i64) -> Self {
        Scalar { num: LaurentPoly::monomial(t_exp, u_exp, v_exp), qm1_pow: 0, qp1_pow: 0 }
    }

    /// `q^(quarters/4)`, i.e. `t^quarters`.
    pub fn q_pow_quarters(quarters: i64) -> Self {
        Self::monomial(quarters, 0, 0)
    }

    pub fn term(coeff: BigRational, t_exp: i64, u_exp: i64, v_exp: i64) -> Self {
        Scalar { num: LaurentPoly::term(coeff, t_exp, u_exp, v_exp), qm1_pow: 0, qp1_pow: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.qm1_pow == 0 && self.qp1_pow == 0 && self.num == LaurentPoly::one()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// Power of `q - 1` in the denominator.
    pub fn qm1_pow(&self) -> u32 {
        self.qm1_pow
    }

    /// Power of `q + 1` in the denominator.
    pub fn qp1_pow(&self) -> u32 {
        self.qp1_pow
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.qm1_pow = 0;
            self.qp1_pow = 0;
            return;
        }
        while self.qm1_pow > 0 {
            match self.num.div_exact_q_factor(-1) {
                Some(q) => {
                    self.num = q;
                    self.qm1_pow -= 1;
                }
                None => break,
            }
        }
        while self.qp1_pow > 0 {
            match self.num.div_exact_q_factor(1) {
                Some(q) => {
                    self.num = q;
                    self.qp1_pow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let jm = self.qm1_pow.max(other.qm1_pow);
        let kp = self.qp1_pow.max(other.qp1_pow);
        let a = scale_up(&self.num, jm - self.qm1_pow, kp - self.qp1_pow);
        let b = scale_up(&other.num, jm - other.qm1_pow, kp - other.qp1_pow);
        Scalar::new(a.add(&b), jm, kp)
    }

    pub fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), qm1_pow: self.qm1_pow, qp1_pow: self.qp1_pow }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Scalar::new(
            self.num.mul(&other.num),
            self.qm1_pow + other.qm1_pow,
            self.qp1_pow + other.qp1_pow,
        )
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        Scalar::new(self.num.scale(c), self.qm1_pow, self.qp1_pow)
    }

    /// Division, defined only when the divisor is a unit of the ring: a
    /// single Laurent term times a `(q-1)^a (q+1)^b` factor may remain after
    /// stripping those factors from its numerator.
    pub fn checked_div(&self, divisor: &Self) -> Result<Self, ScalarError> {
        if divisor.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut num = divisor.num.clone();
        let mut extra_qm1 = 0u32;
        let mut extra_qp1 = 0u32;
        loop {
            if let Some(q) = num.div_exact_q_factor(-1) {
                num = q;
                extra_qm1 += 1;
            } else if let Some(q) = num.div_exact_q_factor(1) {
                num = q;
                extra_qp1 += 1;
            } else {
                break;
            }
        }
        if num.num_terms() != 1 {
            return Err(ScalarError::NonInvertibleDivisor);
        }
        let (key, coeff) = num.terms().next().map(|(k, c)| (*k, c.clone())).unwrap();
        // self / divisor = self * (q-1)^(d.qm1) (q+1)^(d.qp1) / (unit * factors)
        let inv_unit = LaurentPoly::term(
            coeff.recip(),
            -key.t_exp,
            -key.u_exp,
            -key.v_exp,
        );
        let mut out = Scalar::new(
            self.num.mul(&inv_unit),
            self.qm1_pow + extra_qm1,
            self.qp1_pow + extra_qp1,
        );
        // multiply back the divisor's own denominator
        out = out.mul(&Scalar {
            num: scale_up(&LaurentPoly::one(), divisor.qm1_pow, divisor.qp1_pow),
            qm1_pow: 0,
            qp1_pow: 0,
        });
        Ok(out)
    }

    /// Substitute integer sigma values, staying in the scalar ring.
    pub fn substitute_sigma(&self, sigma1: i64, sigma2: i64) -> Scalar {
        Scalar::new(
            self.num.substitute_sigma(sigma1, sigma2),
            self.qm1_pow,
            self.qp1_pow,
        )
    }

    /// Specialize to a univariate rational function in `t`.
    pub fn specialize(&self, sigma1: i64, sigma2: i64) -> RationalFunction {
        let num = UniLaurent::from_laurent(&self.num.substitute_sigma(sigma1, sigma2));
        let mut den = UniLaurent::one();
        for _ in 0..self.qm1_pow {
            den = den.mul(&UniLaurent::q_minus_one());
        }
        for _ in 0..self.qp1_pow {
            den = den.mul(&UniLaurent::q_plus_one());
        }
        RationalFunction::new(num, den).expect("denominator is a nonzero product")
    }
}

fn scale_up(p: &LaurentPoly, jm: u32, kp: u32) -> LaurentPoly {
    let mut out = p.clone();
    let qm1 = LaurentPoly::monomial(4, 0, 0).sub(&LaurentPoly::one());
    let qp1 = LaurentPoly::monomial(4, 0, 0).add(&LaurentPoly::one());
    for _ in 0..jm {
        out = out.mul(&qm1);
    }
    for _ in 0..kp {
        out = out.mul(&qp1);
    }
    out
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Which power of `q` plays the role of `p` in a quantum integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grain {
    /// `p = q^(1/4) = t`
    Quarter,
    /// `p = q^(1/2) = t^2`
    Half,
    /// `p = q = t^4`
    Whole,
}

impl Grain {
    fn t_units(self) -> i64 {
        match self {
            Grain::Quarter => 1,
            Grain::Half => 2,
            Grain::Whole => 4,
        }
    }
}

/// Symbolic part of a quantum-integer argument `n ± sigma_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaShift {
    None,
    PlusSigma1,
    MinusSigma1,
    PlusSigma2,
    MinusSigma2,
}

/// `[m]_p = (p^m - p^(-m)) / (p - p^(-1))` for `m = n + shift`.
///
/// For plain integers the division telescopes into a symmetric power sum.
/// A symbolic shift is split with `[a+b] = [a] p^b + p^(-a) [b]`, so the
/// result stays exact; the sigma block `[sigma_i]_p` carries the denominator
/// `p - p^(-1)` folded into the `(q-1)(q+1)` lattice.
pub fn quantum_integer(n: i64, shift: SigmaShift, grain: Grain) -> Result<Scalar, ScalarError> {
    let g = grain.t_units();
    let plain = plain_quantum_integer(n, g);
    let (sign, which) = match shift {
        SigmaShift::None => return Ok(plain),
        SigmaShift::PlusSigma1 => (1i64, 1u8),
        SigmaShift::MinusSigma1 => (-1, 1),
        SigmaShift::PlusSigma2 => (1, 2),
        SigmaShift::MinusSigma2 => (-1, 2),
    };
    // P = p^(sigma_which); must land on the u/v lattice.
    let cap_p = match which {
        1 => Scalar::monomial(0, g, 0),
        _ => {
            if g % 2 != 0 {
                return Err(ScalarError::UnrepresentableExponent(format!(
                    "q^(sigma2/{})",
                    4 / g
                )));
            }
            Scalar::monomial(0, 0, g / 2)
        }
    };
    let cap_p_inv = match which {
        1 => Scalar::monomial(0, -g, 0),
        _ => Scalar::monomial(0, 0, -(g / 2)),
    };
    // 1/(p - p^(-1)) over the (q-1)(q+1) denominators.
    let inv_p_diff = match g {
        1 => Scalar::new(
            LaurentPoly::monomial(3, 0, 0).add(&LaurentPoly::monomial(1, 0, 0)),
            1,
            0,
        ),
        2 => Scalar::new(LaurentPoly::monomial(2, 0, 0), 1, 0),
        _ => Scalar::new(LaurentPoly::monomial(4, 0, 0), 1, 1),
    };
    let sigma_block = (&cap_p - &cap_p_inv).mul(&inv_p_diff);
    let sigma_block = if sign > 0 { sigma_block } else { sigma_block.neg() };
    // [n ± sigma] = [n] P^(±1) + p^(-n) (±[sigma])
    let p_shift = if sign > 0 { cap_p } else { cap_p_inv };
    let p_neg_n = Scalar::q_pow_quarters(-n * g);
    Ok(plain.mul(&p_shift).add(&p_neg_n.mul(&sigma_block)))
}

fn plain_quantum_integer(n: i64, g: i64) -> Scalar {
    if n == 0 {
        return Scalar::zero();
    }
    let m = n.abs();
    let sign = rat(n.signum());
    let mut poly = LaurentPoly::zero();
    for i in 0..m {
        poly = poly.add(&LaurentPoly::term(sign.clone(), g * (m - 1 - 2 * i), 0, 0));
    }
    Scalar { num: poly, qm1_pow: 0, qp1_pow: 0 }
}

// ---------------------------------------------------------------------------
// univariate rational functions in t
// ---------------------------------------------------------------------------

/// Univariate Laurent polynomial in `t` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniLaurent {
    terms: BTreeMap<i64, BigRational>,
}

impl UniLaurent {
    pub fn zero() -> Self {
        UniLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    pub fn monomial(t_exp: i64, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(t_exp, coeff);
        }
        UniLaurent { terms }
    }

    /// `t^4 - 1`
    pub fn q_minus_one() -> Self {
        Self::monomial(4, rat(1)).add(&Self::monomial(0, rat(-1)))
    }

    /// `t^4 + 1`
    pub fn q_plus_one() -> Self {
        Self::monomial(4, rat(1)).add(&Self::monomial(0, rat(1)))
    }

    fn from_laurent(p: &LaurentPoly) -> Self {
        let mut out = UniLaurent::zero();
        for (k, c) in p.terms() {
            debug_assert!(k.u_exp == 0 && k.v_exp == 0);
            out.insert_add(k.t_exp, c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(en) => {
                en.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut en) => {
                let s = en.get() + &c;
                if s.is_zero() {
                    en.remove();
                } else {
                    *en.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        UniLaurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = UniLaurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return UniLaurent::zero();
        }
        UniLaurent { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    fn min_exp(&self) -> i64 {
        *self.terms.keys().next().expect("nonzero")
    }

    fn max_exp(&self) -> i64 {
        *self.terms.keys().next_back().expect("nonzero")
    }

    fn shift(&self, by: i64) -> Self {
        UniLaurent { terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect() }
    }

    fn leading(&self) -> BigRational {
        self.terms.values().next_back().expect("nonzero").clone()
    }
}

/// Polynomial remainder; both arguments must have min exponent >= 0.
fn poly_rem(a: &UniLaurent, b: &UniLaurent) -> UniLaurent {
    let mut r = a.clone();
    let db = b.max_exp();
    let lb = b.leading();
    while !r.is_zero() && r.max_exp() >= db {
        let factor = UniLaurent::monomial(r.max_exp() - db, r.leading() / &lb);
        r = r.sub(&factor.mul(b));
    }
    r
}

fn poly_gcd(a: &UniLaurent, b: &UniLaurent) -> UniLaurent {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
        if !x.is_zero() {
            // keep coefficients tame
            let lead = x.leading();
            x = x.scale(&lead.recip());
        }
    }
    x
}

/// Reduced fraction of univariate Laurent polynomials in `t`.
///
/// Canonical form: denominator is an ordinary polynomial with nonzero
/// constant term and leading coefficient one; numerator and denominator
/// share no polynomial factor. Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: UniLaurent,
    den: UniLaurent,
}

impl RationalFunction {
    pub fn new(num: UniLaurent, den: UniLaurent) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut rf = RationalFunction { num, den };
        rf.reduce();
        Ok(rf)
    }

    pub fn zero() -> Self {
        RationalFunction { num: UniLaurent::zero(), den: UniLaurent::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: UniLaurent::one(), den: UniLaurent::one() }
    }

    pub fn from_poly(num: UniLaurent) -> Self {
        RationalFunction { num, den: UniLaurent::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == UniLaurent::one() && self.den == UniLaurent::one()
    }

    pub fn num(&self) -> &UniLaurent {
        &self.num
    }

    pub fn den(&self) -> &UniLaurent {
        &self.den
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = UniLaurent::one();
            return;
        }
        // strip t-units
        let a = self.num.min_exp();
        let b = self.den.min_exp();
        let p = self.num.shift(-a);
        let d = self.den.shift(-b);
        let g = poly_gcd(&p, &d);
        let (mut p, mut d) = if g.max_exp() > 0 {
            (div_exact(&p, &g), div_exact(&d, &g))
        } else {
            (p, d)
        };
        let lc = d.leading();
        p = p.scale(&lc.recip());
        d = d.scale(&lc.recip());
        self.num = p.shift(a - b);
        self.den = d;
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFunction::new(num, den).expect("product of nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        RationalFunction::one().div(self)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalFunction::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }
}

fn div_exact(a: &UniLaurent, b: &UniLaurent) -> UniLaurent {
    let mut r = a.clone();
    let mut q = UniLaurent::zero();
    let db = b.max_exp();
    let lb = b.leading();
    while !r.is_zero() && r.max_exp() >= db {
        let term = UniLaurent::monomial(r.max_exp() - db, r.leading() / &lb);
        q = q.add(&term);
        r = r.sub(&term.mul(b));
    }
    debug_assert!(r.is_zero(), "division was not exact");
    q
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, rhs)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::sub(self, rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render the q-exponent `t_exp/4 + (u_exp/4) s1 + (v_exp/2) s2`.
fn exponent_str(k: &ExpKey) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let r0 = BigRational::new(BigInt::from(k.t_exp), BigInt::from(4));
    if !r0.is_zero() {
        pieces.push((r0.is_negative(), rational_str(&r0.abs())));
    }
    for (exp, den, sym) in [(k.u_exp, 4, "s1"), (k.v_exp, 2, "s2")] {
        if exp == 0 {
            continue;
        }
        let r = BigRational::new(BigInt::from(exp), BigInt::from(den));
        let mag = r.abs();
        let s = if mag.is_one() {
            sym.to_string()
        } else if mag.numer().is_one() {
            format!("{}/{}", sym, mag.denom())
        } else if mag.denom().is_one() {
            format!("{}*{}", mag.numer(), sym)
        } else {
            format!("{}*{}/{}", mag.numer(), sym, mag.denom())
        };
        pieces.push((r.is_negative(), s));
    }
    let mut out = String::new();
    for (i, (neg, s)) in pieces.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(s);
    }
    out
}

/// One Laurent term without its sign: e.g. `q^(1/2 - s1/4)` or `3/2*q^(-1)`.
fn term_str(k: &ExpKey, coeff: &BigRational) -> String {
    let mag = coeff.abs();
    if k.t_exp == 0 && k.u_exp == 0 && k.v_exp == 0 {
        return rational_str(&mag);
    }
    let qpart = {
        let e = exponent_str(k);
        if e == "1" {
            "q".to_string()
        } else {
            format!("q^({e})")
        }
    };
    if mag.is_one() {
        qpart
    } else {
        format!("{}*{}", rational_str(&mag), qpart)
    }
}

fn laurent_sum_str(p: &LaurentPoly) -> String {
    let mut out = String::new();
    for (i, (k, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term_str(k, c));
    }
    out
}

impl Scalar {
    /// Render in the expression grammar; `atomic` means the string can be a
    /// bare factor in a product without extra parentheses.
    pub fn render(&self) -> (String, bool) {
        if self.is_zero() {
            return ("0".to_string(), true);
        }
        let num_str = laurent_sum_str(&self.num);
        let multi = self.num.num_terms() > 1;
        if self.qm1_pow == 0 && self.qp1_pow == 0 {
            if multi {
                (format!("({num_str})"), true)
            } else {
                let atomic = !num_str.starts_with('-');
                (num_str, atomic)
            }
        } else {
            let mut dfactors: Vec<String> = Vec::new();
            if self.qm1_pow > 0 {
                dfactors.push(if self.qm1_pow == 1 {
                    "(q - 1)".to_string()
                } else {
                    format!("(q - 1)^{}", self.qm1_pow)
                });
            }
            if self.qp1_pow > 0 {
                dfactors.push(if self.qp1_pow == 1 {
                    "(q + 1)".to_string()
                } else {
                    format!("(q + 1)^{}", self.qp1_pow)
                });
            }
            let den = if dfactors.len() == 1 {
                dfactors.pop().unwrap()
            } else {
                format!("({})", dfactors.join("*"))
            };
            (format!("({num_str})/{den}"), true)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render().0)
    }
}

fn uni_sum_str(p: &UniLaurent) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term_str(&ExpKey::new(*e, 0, 0), c));
    }
    out
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UniLaurent::one() {
            let s = uni_sum_str(&self.num);
            if self.num.terms.len() > 1 {
                write!(f, "({s})")
            } else {
                write!(f, "{s}")
            }
        } else {
            write!(f, "({})/({})", uni_sum_str(&self.num), uni_sum_str(&self.den))
        }
    }
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

fn coeff_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl Scalar {
    /// Term list ordered by `(t_exp, u_exp, v_exp)` plus denominator powers.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .num
            .terms()
            .map(|(k, c)| {
                serde_json::json!({
                    "t_exp": k.t_exp,
                    "u_exp": k.u_exp,
                    "v_exp": k.v_exp,
                    "coeff": coeff_string(c),
                })
            })
            .collect();
        serde_json::json!({
            "terms": terms,
            "denom_power": self.qp1_pow,
            "denom_power_qm1": self.qm1_pow,
        })
    }
}

impl RationalFunction {
    pub fn to_json(&self) -> serde_json::Value {
        let side = |p: &UniLaurent| -> Vec<serde_json::Value> {
            p.terms()
                .map(|(e, c)| serde_json::json!({ "t_exp": e, "coeff": coeff_string(c) }))
                .collect()
        };
        serde_json::json!({ "num": side(&self.num), "den": side(&self.den) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Scalar {
        Scalar::q_pow_quarters(4)
    }

    #[test]
    fn quantum_integer_identity_case() {
        assert_eq!(quantum_integer(1, SigmaShift::None, Grain::Whole).unwrap(), Scalar::one());
    }

    #[test]
    fn quantum_integer_two_whole() {
        let expect = &Scalar::q_pow_quarters(4) + &Scalar::q_pow_quarters(-4);
        assert_eq!(quantum_integer(2, SigmaShift::None, Grain::Whole).unwrap(), expect);
    }

    #[test]
    fn quantum_integer_three_half() {
        let expect = &(&Scalar::q_pow_quarters(4) + &Scalar::one()) + &Scalar::q_pow_quarters(-4);
        assert_eq!(quantum_integer(3, SigmaShift::None, Grain::Half).unwrap(), expect);
    }

    #[test]
    fn quantum_integer_symbolic_shift_matches_negated_sigma() {
        // [0 - sigma1]_{q^(1/2)} = -[sigma1]_{q^(1/2)}
        let lhs = quantum_integer(0, SigmaShift::MinusSigma1, Grain::Half).unwrap();
        let rhs = quantum_integer(0, SigmaShift::PlusSigma1, Grain::Half).unwrap().neg();
        assert_eq!(lhs, rhs);
        // and expanding the definition directly: (u^-2 - u^2)/(t^2 - t^-2)
        let num = LaurentPoly::monomial(2, -2, 0).sub(&LaurentPoly::monomial(2, 2, 0));
        assert_eq!(lhs, Scalar::new(num, 1, 0));
    }

    #[test]
    fn quantum_integer_negation_symmetry() {
        for grain in [Grain::Quarter, Grain::Half, Grain::Whole] {
            for m in -6..=6 {
                let a = quantum_integer(m, SigmaShift::None, grain).unwrap();
                let b = quantum_integer(-m, SigmaShift::None, grain).unwrap();
                assert_eq!(a, b.neg(), "m={m}");
            }
        }
    }

    #[test]
    fn quantum_integer_unrepresentable_grain() {
        // q^(sigma2/4) is off the v lattice
        let err = quantum_integer(0, SigmaShift::PlusSigma2, Grain::Quarter).unwrap_err();
        assert!(matches!(err, ScalarError::UnrepresentableExponent(_)));
        // sigma1 is fine at quarter grain
        assert!(quantum_integer(2, SigmaShift::MinusSigma1, Grain::Quarter).is_ok());
    }

    #[test]
    fn quantum_integer_shift_consistency_under_specialization() {
        // [n - sigma1] specialized at sigma1 = s equals [n - s]
        for grain in [Grain::Half, Grain::Whole] {
            for n in -3..=3 {
                for s in 0..=4 {
                    let sym = quantum_integer(n, SigmaShift::MinusSigma1, grain).unwrap();
                    let plain = quantum_integer(n - s, SigmaShift::None, grain).unwrap();
                    assert_eq!(sym.specialize(s, 0), plain.specialize(s, 0));
                }
            }
        }
    }

    #[test]
    fn specialize_examples() {
        // u^2 at sigma1 = 1 is t^2
        let u2 = Scalar::monomial(0, 2, 0);
        assert_eq!(u2.specialize(1, 7), Scalar::q_pow_quarters(2).specialize(1, 7));
        // 1/(1+q) for any sigma
        let s = Scalar::new(LaurentPoly::one(), 0, 1);
        let rf = s.specialize(3, -2);
        assert_eq!(rf, RationalFunction::new(UniLaurent::one(), UniLaurent::q_plus_one()).unwrap());
        // [sigma1]_{q^(1/2)} at sigma1 = 2 is t^2 + t^-2
        let qi = quantum_integer(0, SigmaShift::PlusSigma1, Grain::Half).unwrap();
        let expect = quantum_integer(2, SigmaShift::None, Grain::Half).unwrap();
        assert_eq!(qi.specialize(2, 0), expect.specialize(2, 0));
    }

    #[test]
    fn product_of_conjugates() {
        let a = &Scalar::q_pow_quarters(1) + &Scalar::q_pow_quarters(-1);
        let b = &Scalar::q_pow_quarters(1) - &Scalar::q_pow_quarters(-1);
        let expect = &Scalar::q_pow_quarters(2) - &Scalar::q_pow_quarters(-2);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn exact_division_by_q_plus_one() {
        // (t^8 - 1)/(t^4 + 1) = t^4 - 1
        let p = LaurentPoly::monomial(8, 0, 0).sub(&LaurentPoly::one());
        let q = p.div_exact_q_factor(1).unwrap();
        assert_eq!(q, LaurentPoly::monomial(4, 0, 0).sub(&LaurentPoly::one()));
        // and a non-divisible case
        assert!(LaurentPoly::one().div_exact_q_factor(1).is_none());
    }

    #[test]
    fn canonical_form_reduces_denominators() {
        // (q^2 - 1)/(q - 1) = q + 1
        let num = LaurentPoly::monomial(8, 0, 0).sub(&LaurentPoly::one());
        let s = Scalar::new(num, 1, 0);
        assert_eq!(s.qm1_pow(), 0);
        assert_eq!(s, &q() + &Scalar::one());
    }

    #[test]
    fn checked_div_unit_and_errors() {
        let s = Scalar::one();
        let q1 = &q() + &Scalar::one();
        let r = s.checked_div(&q1).unwrap();
        assert_eq!(r, Scalar::new(LaurentPoly::one(), 0, 1));
        assert_eq!(&r * &q1, Scalar::one());
        assert_eq!(
            s.checked_div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
        let bad = &q1 + &Scalar::monomial(0, 1, 0); // q + 1 + u is not a unit
        assert_eq!(s.checked_div(&bad), Err(ScalarError::NonInvertibleDivisor));
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let term = (-6i64..=6, -3i64..=3, -3i64..=3, -4i64..=4, 1i64..=3)
            .prop_map(|(t, u, v, n, d)| Scalar::term(BigRational::new(BigInt::from(n), BigInt::from(d)), t, u, v));
        (proptest::collection::vec(term, 0..4), 0u32..=2, 0u32..=2).prop_map(|(ts, j, k)| {
            let mut s = Scalar::zero();
            for t in ts {
                s = &s + &t;
            }
            Scalar::new(s.numerator().clone(), j, k)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &Scalar::zero(), a.clone());
            prop_assert_eq!(&a * &Scalar::one(), a.clone());
            prop_assert_eq!(&a + &a.neg(), Scalar::zero());
        }

        #[test]
        fn specialize_is_ring_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            let (s1, s2) = (2i64, -1i64);
            prop_assert_eq!((&a + &b).specialize(s1, s2), &a.specialize(s1, s2) + &b.specialize(s1, s2));
            prop_assert_eq!((&a * &b).specialize(s1, s2), &a.specialize(s1, s2) * &b.specialize(s1, s2));
        }

        #[test]
        fn canonical_form_unique(a in arb_scalar(), b in arb_scalar()) {
            // a == b iff a - b canonicalizes to zero
            let diff = &a - &b;
            prop_assert_eq!(diff.is_zero(), a == b);
        }
    }

    fn arb_ratfun() -> impl Strategy<Value = RationalFunction> {
        let poly = proptest::collection::vec((-5i64..=5, -3i64..=3), 1..4).prop_map(|ts| {
            let mut p = UniLaurent::zero();
            for (e, c) in ts {
                p = p.add(&UniLaurent::monomial(e, rat(c)));
            }
            p
        });
        (poly.clone(), poly).prop_filter_map("nonzero denominator", |(n, d)| {
            if d.is_zero() {
                None
            } else {
                Some(RationalFunction::new(n, d).unwrap())
            }
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_ratfun(), b in arb_ratfun(), c in arb_ratfun()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert_eq!(&a * &inv, RationalFunction::one());
            }
        }
    }

    #[test]
    fn ratfun_division_by_zero_errors() {
        let a = RationalFunction::one();
        assert_eq!(a.div(&RationalFunction::zero()), Err(ScalarError::DivisionByZero));
        assert_eq!(RationalFunction::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn ratfun_canonical_denominator() {
        // (t^2) / (t^6 - t^2) reduces to 1/(t^4 - 1)
        let n = UniLaurent::monomial(2, rat(1));
        let d = UniLaurent::monomial(6, rat(1)).sub(&UniLaurent::monomial(2, rat(1)));
        let rf = RationalFunction::new(n, d).unwrap();
        assert_eq!(rf.den(), &UniLaurent::q_minus_one());
        assert_eq!(rf.num(), &UniLaurent::one());
    }

    #[test]
    fn render_round_numbers() {
        assert_eq!(Scalar::one().to_string(), "1");
        assert_eq!(q().to_string(), "q");
        assert_eq!(Scalar::q_pow_quarters(2).to_string(), "q^(1/2)");
        assert_eq!(Scalar::monomial(2, -1, 0).to_string(), "q^(1/2 - s1/4)");
        let s = Scalar::new(LaurentPoly::monomial(2, 0, 0), 0, 1);
        assert_eq!(s.to_string(), "(q^(1/2))/(q + 1)");
    }
}

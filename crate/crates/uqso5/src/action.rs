//! The dressing action and the twisted module action on the coordinate
//! algebra.
//!
//! Two independent routes compute the same module structure:
//!
//! * [`Action::act_closed`] implements the closed-form action of each
//!   generator on an ordered monomial directly.
//! * [`Action::act_defined`] builds the action from first principles:
//!   `x . f = (xi_{x(1)} . f) phi(x(2))`, with the dressing transformation
//!   `xi` extended to products by the Leibniz rule and `phi` seeded on the
//!   generators.
//!
//! Their agreement on every monomial is the engine's central consistency
//! check, and is what pins down the generator table: the printed sources for
//! the `xi(X1+)` and `xi(X1-)` rows are garbled (five entries for four
//! generators, shifted subscripts), and the table below is the unique
//! assignment compatible with the closed form.

use crate::calgebra::{CElement, Monomial};
use crate::freeu::{GeneratorSymbol, UElement, Word};
use crate::scalar::{quantum_integer, Grain, LaurentPoly, Scalar, SigmaShift};

fn inv_one_plus_q() -> Scalar {
    Scalar::new(LaurentPoly::one(), 0, 1)
}

fn qint(n: i64, shift: SigmaShift, grain: Grain) -> Scalar {
    quantum_integer(n, shift, grain).expect("sigma shift representable at this grain")
}

/// Index into the ladder tables (ordered `E1, E2, F1, F2`) plus the root
/// index `i`.
fn ladder_index(g: GeneratorSymbol) -> Option<(usize, u8)> {
    match g {
        GeneratorSymbol::Raise(i) => Some(((i - 1) as usize, i)),
        GeneratorSymbol::Lower(i) => Some((2 + (i - 1) as usize, i)),
        GeneratorSymbol::CartanHalf { .. } => None,
    }
}

/// A single-coefficient mutation target inside the generator tables, used by
/// the negative-control checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationSite {
    /// Diagonal eigenvalue exponent of `xi(qHi)` on `w_(j+1)`.
    XiDiag { i: usize, j: usize },
    /// One term of `xi(ladder)` on `w_(j+1)`.
    XiLadder { ladder: usize, j: usize, term: usize },
    /// The scalar `phi(qHi)`.
    PhiCartan { i: usize },
    /// One term of `phi(Ei)`.
    PhiRaise { i: usize, term: usize },
}

/// Generator tables for `xi` and `phi` plus the action routines.
#[derive(Debug, Clone)]
pub struct Action {
    /// q-exponent of `xi(qHi) . w_(j+1)`, rows `i = 0, 1`.
    xi_diag: [[i64; 4]; 2],
    /// `xi(g) . w_(j+1)` for the four ladder generators `E1, E2, F1, F2`.
    xi_ladder: [[CElement; 4]; 4],
    /// Extra t-exponent per half-power in `phi(q^(k Hi / 2))`; zero in the
    /// standard table, nonzero only under mutation.
    phi_cartan_extra_t: [i64; 2],
    /// `phi(E1)`, `phi(E2)`.
    phi_raise: [CElement; 2],
    /// `phi(F1)`, `phi(F2)`; zero in the standard table.
    phi_lower: [CElement; 2],
}

impl Default for Action {
    fn default() -> Self {
        Self::standard()
    }
}

impl Action {
    /// The generator tables of the dressing transformation:
    ///
    /// ```text
    /// xi(qH1) w = diag(q^-1, 1, q, q)        xi(qH2) w = diag(q^2, q, 1, q^-1)
    /// xi(E1)  w = { -q^(-1/2) w2,  q^(-1/2) w3,  0,  q^(1/2)/(1+q) w4^2 }
    /// xi(E2)  w = { q^(-1/2) w1^2, w1 w2, -1/(1+q) w2^2, -q^-1 w1 w4 + q^-2 w2 }
    /// xi(F1)  w = { 0, -q^(1/2) w1, q^(1/2) w2, -1 }
    /// xi(F2)  w = { -q^(1/2), 0, 0, 0 }
    /// ```
    ///
    /// and of the map `phi`:
    ///
    /// ```text
    /// phi(qH1) = q^(-s1/2)    phi(qH2) = q^(-s2)    phi(F1) = phi(F2) = 0
    /// phi(E1) = -(q^(1/2 - s1/4)/(1+q)) [s1]_{q^(1/2)} w4
    /// phi(E2) = -q^(-(1+s2)/2) [s2]_q w1
    /// ```
    pub fn standard() -> Self {
        let w = CElement::generator;
        let mono = |e: [u32; 4]| CElement::monomial(Monomial(e));
        let qq = Scalar::q_pow_quarters;

        let xi_e1 = [
            w(2).scale(&qq(-2)).neg(),
            w(3).scale(&qq(-2)),
            CElement::zero(),
            mono([0, 0, 0, 2]).scale(&qq(2).mul(&inv_one_plus_q())),
        ];
        let xi_e2 = [
            mono([2, 0, 0, 0]).scale(&qq(-2)),
            mono([1, 1, 0, 0]),
            mono([0, 2, 0, 0]).scale(&inv_one_plus_q()).neg(),
            mono([1, 0, 0, 1]).scale(&qq(-4)).neg().add(&w(2).scale(&qq(-8))),
        ];
        let xi_f1 = [
            CElement::zero(),
            w(1).scale(&qq(2)).neg(),
            w(2).scale(&qq(2)),
            CElement::one().neg(),
        ];
        let xi_f2 = [
            CElement::term(qq(2).neg(), Monomial::unit()),
            CElement::zero(),
            CElement::zero(),
            CElement::zero(),
        ];

        let phi_e1 = CElement::term(
            Scalar::monomial(2, -1, 0)
                .mul(&inv_one_plus_q())
                .mul(&qint(0, SigmaShift::PlusSigma1, Grain::Half))
                .neg(),
            Monomial([0, 0, 0, 1]),
        );
        let phi_e2 = CElement::term(
            Scalar::monomial(-2, 0, -1)
                .mul(&qint(0, SigmaShift::PlusSigma2, Grain::Whole))
                .neg(),
            Monomial([1, 0, 0, 0]),
        );

        Action {
            xi_diag: [[-1, 0, 1, 1], [2, 1, 0, -1]],
            xi_ladder: [xi_e1, xi_e2, xi_f1, xi_f2],
            phi_cartan_extra_t: [0, 0],
            phi_raise: [phi_e1, phi_e2],
            phi_lower: [CElement::zero(), CElement::zero()],
        }
    }

    // -- mutation support ---------------------------------------------------

    pub fn mutation_sites(&self) -> Vec<MutationSite> {
        let mut sites = Vec::new();
        for i in 0..2 {
            for j in 0..4 {
                sites.push(MutationSite::XiDiag { i, j });
            }
        }
        for ladder in 0..4 {
            for j in 0..4 {
                for term in 0..self.xi_ladder[ladder][j].num_terms() {
                    sites.push(MutationSite::XiLadder { ladder, j, term });
                }
            }
        }
        for i in 0..2 {
            sites.push(MutationSite::PhiCartan { i });
        }
        for i in 0..2 {
            for term in 0..self.phi_raise[i].num_terms() {
                sites.push(MutationSite::PhiRaise { i, term });
            }
        }
        sites
    }

    /// Copy of the tables with one coefficient multiplied by `q`.
    pub fn with_mutation(&self, site: MutationSite) -> Action {
        let mut a = self.clone();
        match site {
            MutationSite::XiDiag { i, j } => a.xi_diag[i][j] += 1,
            MutationSite::XiLadder { ladder, j, term } => {
                a.xi_ladder[ladder][j] = mutate_term(&a.xi_ladder[ladder][j], term);
            }
            MutationSite::PhiCartan { i } => a.phi_cartan_extra_t[i] += 2,
            MutationSite::PhiRaise { i, term } => {
                a.phi_raise[i] = mutate_term(&a.phi_raise[i], term);
            }
        }
        a
    }

    // -- the dressing transformation -----------------------------------------

    /// Eigen-scalar of `xi(q^(k Hi / 2))` on a monomial.
    fn xi_diag_scalar(&self, i: usize, k: i64, m: &Monomial) -> Scalar {
        let sum: i64 = (0..4).map(|j| i64::from(m.0[j]) * self.xi_diag[i][j]).sum();
        Scalar::q_pow_quarters(2 * k * sum)
    }

    fn xi_mono(&self, g: GeneratorSymbol, m: &Monomial) -> CElement {
        match g {
            GeneratorSymbol::CartanHalf { i, k } => CElement::term(
                self.xi_diag_scalar(i as usize - 1, k, m),
                *m,
            ),
            _ => {
                let (ladder, i) = ladder_index(g).expect("ladder generator");
                let Some((j, rest)) = split_first(m) else {
                    return CElement::zero(); // xi(X) . 1 = 0
                };
                let i0 = i as usize - 1;
                // Leibniz: xi_X(w_j m') = xi_X(w_j) xi_{K^-1}(m') + xi_K(w_j) w_j xi_X(m')
                let first = self.xi_ladder[ladder][j - 1]
                    .scale(&self.xi_diag_scalar(i0, -1, &rest))
                    .mul(&CElement::monomial(rest));
                let single = Monomial::generator(j);
                let second = CElement::term(self.xi_diag_scalar(i0, 1, &single), single)
                    .mul(&self.xi_mono(g, &rest));
                first.add(&second)
            }
        }
    }

    /// The dressing transformation `xi(g)` applied to an element.
    pub fn xi(&self, g: GeneratorSymbol, f: &CElement) -> CElement {
        let mut out = CElement::zero();
        for (m, c) in f.terms() {
            out = out.add(&self.xi_mono(g, m).scale(c));
        }
        out
    }

    // -- phi ------------------------------------------------------------------

    /// `phi(q^(k Hi / 2)) = q^(-k sigma_i / (2 or 4))`, a scalar.
    pub fn phi_cartan(&self, i: u8, k: i64) -> Scalar {
        let extra = self.phi_cartan_extra_t[i as usize - 1] * k;
        match i {
            1 => Scalar::monomial(extra, -k, 0),
            _ => Scalar::monomial(extra, 0, -k),
        }
    }

    /// `phi` on a single generator.
    pub fn phi_generator(&self, g: GeneratorSymbol) -> CElement {
        match g {
            GeneratorSymbol::CartanHalf { i, k } => {
                CElement::term(self.phi_cartan(i, k), Monomial::unit())
            }
            GeneratorSymbol::Raise(i) => self.phi_raise[i as usize - 1].clone(),
            GeneratorSymbol::Lower(i) => self.phi_lower[i as usize - 1].clone(),
        }
    }

    /// The recursive extension of `phi` to a word: peel the leading
    /// generator `g` and apply `phi(g y) = (xi_{g(1)} . phi(y)) phi(g(2))`.
    pub fn phi_word(&self, w: &Word) -> CElement {
        let mut out = CElement::one();
        for &g in w.symbols().iter().rev() {
            out = self.act_defined(g, &out);
        }
        out
    }

    /// Linear extension of [`Action::phi_word`].
    pub fn phi_element(&self, x: &UElement) -> CElement {
        let mut out = CElement::zero();
        for (w, c) in x.terms() {
            out = out.add(&self.phi_word(w).scale(c));
        }
        out
    }

    // -- the two action routes -------------------------------------------------

    /// Definitional action `x . f = (xi_{x(1)} . f) phi(x(2))` for a single
    /// generator.
    pub fn act_defined(&self, g: GeneratorSymbol, f: &CElement) -> CElement {
        match g {
            GeneratorSymbol::CartanHalf { i, k } => {
                self.xi(g, f).scale(&self.phi_cartan(i, k))
            }
            GeneratorSymbol::Raise(i) | GeneratorSymbol::Lower(i) => {
                let first = self.xi(g, f).scale(&self.phi_cartan(i, -1));
                let second = self
                    .xi(GeneratorSymbol::cartan(i, 1), f)
                    .mul(&self.phi_generator(g));
                first.add(&second)
            }
        }
    }

    /// Closed-form action of a generator on an element.
    pub fn act_closed(&self, g: GeneratorSymbol, f: &CElement) -> CElement {
        let mut out = CElement::zero();
        for (m, c) in f.terms() {
            out = out.add(&act_closed_mono(g, m).scale(c));
        }
        out
    }

    /// Compose the closed action along a word, rightmost generator first.
    pub fn act_word(&self, w: &Word, f: &CElement) -> CElement {
        let mut out = f.clone();
        for &g in w.symbols().iter().rev() {
            out = self.act_closed(g, &out);
        }
        out
    }

    /// Linear extension of [`Action::act_word`].
    pub fn act_element(&self, x: &UElement, f: &CElement) -> CElement {
        let mut out = CElement::zero();
        for (w, c) in x.terms() {
            out = out.add(&self.act_word(w, f).scale(c));
        }
        out
    }
}

fn mutate_term(el: &CElement, term: usize) -> CElement {
    let q = Scalar::q_pow_quarters(4);
    let mut out = CElement::zero();
    for (idx, (m, c)) in el.terms().enumerate() {
        let coeff = if idx == term { c.mul(&q) } else { c.clone() };
        out.insert_add(*m, coeff);
    }
    out
}

fn split_first(m: &Monomial) -> Option<(usize, Monomial)> {
    let j = (0..4).find(|&j| m.0[j] > 0)?;
    let mut rest = *m;
    rest.0[j] -= 1;
    Some((j + 1, rest))
}

/// The closed-form action on a single ordered monomial.
///
/// For the Cartan half-powers the action is diagonal:
/// `q^(k/2 (-n1+n3+n4-s1/2))` and `q^(k/2 (2n1+n2-n4-s2))`. The ladder
/// formulas move one exponent at a time with quantum-integer coefficients;
/// target exponents that would go negative always carry a vanishing bracket.
pub fn act_closed_mono(g: GeneratorSymbol, m: &Monomial) -> CElement {
    let [n1, n2, n3, n4] = m.0.map(i64::from);
    let mono = |e: [i64; 4]| Monomial([e[0] as u32, e[1] as u32, e[2] as u32, e[3] as u32]);
    let mut out = CElement::zero();
    match g {
        GeneratorSymbol::CartanHalf { i: 1, k } => {
            let s = Scalar::monomial(2 * k * (-n1 + n3 + n4), -k, 0);
            out.insert_add(*m, s);
        }
        GeneratorSymbol::CartanHalf { i: _, k } => {
            let s = Scalar::monomial(2 * k * (2 * n1 + n2 - n4), 0, -k);
            out.insert_add(*m, s);
        }
        GeneratorSymbol::Lower(1) => {
            if n2 > 0 {
                let c = Scalar::monomial(2 * (-n1 + n2 - n3 - n4), 1, 0)
                    .mul(&qint(n2, SigmaShift::None, Grain::Half))
                    .neg();
                out.insert_add(mono([n1 + 1, n2 - 1, n3, n4]), c);
            }
            if n3 > 0 {
                let c = Scalar::monomial(2 * (-n1 + n3 - n4), 1, 0)
                    .mul(&qint(n3, SigmaShift::None, Grain::Whole));
                out.insert_add(mono([n1, n2 + 1, n3 - 1, n4]), c);
            }
            if n4 > 0 {
                let c = Scalar::monomial(2 * (-n1 + n3), 1, 0)
                    .mul(&qint(n4, SigmaShift::None, Grain::Half))
                    .neg();
                out.insert_add(mono([n1, n2, n3, n4 - 1]), c);
            }
        }
        GeneratorSymbol::Lower(_) => {
            if n1 > 0 {
                let c = Scalar::monomial(2 * (1 - n2 + n4), 0, 1)
                    .mul(&qint(n1, SigmaShift::None, Grain::Whole))
                    .neg();
                out.insert_add(mono([n1 - 1, n2, n3, n4]), c);
            }
        }
        GeneratorSymbol::Raise(1) => {
            if n1 > 0 {
                let c = Scalar::monomial(-4 + 2 * (n1 - n3 - n4), 1, 0)
                    .mul(&qint(n1, SigmaShift::None, Grain::Whole))
                    .neg();
                out.insert_add(mono([n1 - 1, n2 + 1, n3, n4]), c);
            }
            if n2 > 0 {
                let c = Scalar::monomial(-4 + 2 * (-n1 + n2 - n3 - n4), 1, 0)
                    .mul(&qint(n2, SigmaShift::None, Grain::Half));
                out.insert_add(mono([n1, n2 - 1, n3 + 1, n4]), c);
            }
            {
                let c = Scalar::monomial(2 * (1 - n1 + n3), -1, 0)
                    .mul(&inv_one_plus_q())
                    .mul(&qint(n4, SigmaShift::MinusSigma1, Grain::Half));
                out.insert_add(mono([n1, n2, n3, n4 + 1]), c);
            }
        }
        GeneratorSymbol::Raise(_) => {
            {
                let c = Scalar::monomial(-2 * (1 - n2 + n4), 0, -1)
                    .mul(&qint(n1 + n2 - n4, SigmaShift::MinusSigma2, Grain::Whole));
                out.insert_add(mono([n1 + 1, n2, n3, n4]), c);
            }
            if n3 > 0 {
                let c = Scalar::monomial(4 * (-1 + n1 + n3) + 2 * n2 - 6 * n4, 0, -3)
                    .mul(&inv_one_plus_q())
                    .mul(&qint(n3, SigmaShift::None, Grain::Whole))
                    .neg();
                out.insert_add(mono([n1, n2 + 2, n3 - 1, n4]), c);
            }
            if n4 > 0 {
                let c = Scalar::monomial(4 * (-1 + n1 + n3 - n4) + 2 * n2, 0, -3)
                    .mul(&qint(n4, SigmaShift::None, Grain::Half));
                out.insert_add(mono([n1, n2 + 1, n3, n4 - 1]), c);
            }
            if n4 > 1 {
                let q_minus_1 = Scalar::q_pow_quarters(4).sub(&Scalar::one());
                let c = q_minus_1
                    .mul(&Scalar::monomial(-10 + 4 * n1 + 2 * (n2 - n4), 0, -3))
                    .mul(&qint(n4, SigmaShift::None, Grain::Half))
                    .mul(&qint(n4 - 1, SigmaShift::None, Grain::Half))
                    .neg();
                out.insert_add(mono([n1, n2, n3 + 1, n4 - 2]), c);
            }
        }
    }
    out
}

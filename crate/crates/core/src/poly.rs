//! Exact sparse polynomials in half-edge variables `a_h`, one auxiliary
//! variable `r`, and one auxiliary variable `q`.
//!
//! Every polynomial here is multilinear in the `a_h`: no `a_h^2` ever
//! arises, because each half-edge is chosen at most once. The representation
//! enforces this — multiplying polynomials with overlapping half-edge
//! support is an error, which catches accidental variable clashes (for
//! example multiplying component polynomials that were not relabeled apart).
//!
//! Coefficients are generic over a scalar ring; the crate root fixes
//! arbitrary-precision integers as the default.

use crate::graph::HalfEdgeId;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

/// Coefficient scalar: an exact commutative ring with 1. Blanket-implemented
/// for everything with the right arithmetic, in particular big integers and
/// big rationals.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + From<i64>
{
}

impl<T> Scalar for T where
    T: Clone
        + fmt::Debug
        + fmt::Display
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + From<i64>
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("product is not multilinear: half-edge variable {0} occurs in both factors")]
    NotMultilinear(HalfEdgeId),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// A monomial `a_{h_1} … a_{h_m} r^i q^j`, stored as a sorted variable list
/// plus the two auxiliary exponents.
///
/// `vars` must stay sorted ascending and duplicate-free; the constructors
/// enforce this, and the derived ordering (used for canonical term order)
/// relies on it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub vars: Vec<HalfEdgeId>,
    pub r_exp: u32,
    pub q_exp: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(h: HalfEdgeId) -> Self {
        Monomial {
            vars: vec![h],
            ..Monomial::default()
        }
    }

    pub fn from_vars<I: IntoIterator<Item = HalfEdgeId>>(vars: I) -> Self {
        let mut vars: Vec<HalfEdgeId> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        Monomial {
            vars,
            ..Monomial::default()
        }
    }

    pub fn r_pow(exp: u32) -> Self {
        Monomial {
            r_exp: exp,
            ..Monomial::default()
        }
    }

    pub fn q_pow(exp: u32) -> Self {
        Monomial {
            q_exp: exp,
            ..Monomial::default()
        }
    }

    pub fn degree(&self) -> usize {
        self.vars.len() + self.r_exp as usize + self.q_exp as usize
    }

    fn try_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            match self.vars[i].cmp(&other.vars[j]) {
                std::cmp::Ordering::Less => {
                    vars.push(self.vars[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push(other.vars[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    return Err(PolyError::NotMultilinear(self.vars[i]));
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Ok(Monomial {
            vars,
            r_exp: self.r_exp + other.r_exp,
            q_exp: self.q_exp + other.q_exp,
        })
    }
}

/// Coefficients serialize as JSON numbers (exact at any magnitude thanks to
/// arbitrary-precision parsing); coefficient types whose display form is not
/// a numeric literal — rationals like `2/3` — fall back to a string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Number(serde_json::Number),
    Text(String),
}

impl CoeffJson {
    fn render(text: String) -> CoeffJson {
        match serde_json::from_str::<serde_json::Number>(&text) {
            Ok(number) => CoeffJson::Number(number),
            Err(_) => CoeffJson::Text(text),
        }
    }

    fn digits(&self) -> String {
        match self {
            CoeffJson::Number(number) => number.to_string(),
            CoeffJson::Text(text) => text.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: CoeffJson,
    vars: Vec<HalfEdgeId>,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    r: u32,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    q: u32,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

/// Exact sparse polynomial, multilinear in the half-edge variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<C: Scalar> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Polynomial<C> {
    fn default() -> Self {
        Polynomial::zero()
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    /// The single variable `a_h`.
    pub fn var(h: HalfEdgeId) -> Self {
        Polynomial::from_monomial(Monomial::var(h), C::one())
    }

    /// The auxiliary variable `r`.
    pub fn r() -> Self {
        Polynomial::from_monomial(Monomial::r_pow(1), C::one())
    }

    /// The auxiliary variable `q`.
    pub fn q() -> Self {
        Polynomial::from_monomial(Monomial::q_pow(1), C::one())
    }

    pub fn from_monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Sum of the variables `a_h` for `h` in the given set.
    pub fn var_sum<I: IntoIterator<Item = HalfEdgeId>>(vars: I) -> Self {
        let mut p = Polynomial::zero();
        for h in vars {
            p.add_term(Monomial::var(h), C::one());
        }
        p
    }

    /// Product of the variables `a_h` (a single monomial).
    pub fn var_product<I: IntoIterator<Item = HalfEdgeId>>(vars: I) -> Self {
        Polynomial::from_monomial(Monomial::from_vars(vars), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Every half-edge variable occurring with a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<HalfEdgeId> {
        self.terms
            .keys()
            .flat_map(|m| m.vars.iter().copied())
            .collect()
    }

    pub fn max_r_exp(&self) -> u32 {
        self.terms.keys().map(|m| m.r_exp).max().unwrap_or(0)
    }

    pub fn max_q_exp(&self) -> u32 {
        self.terms.keys().map(|m| m.q_exp).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut out = Polynomial::zero();
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.clone() * c.clone());
        }
        out
    }

    pub fn negate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        Polynomial { terms }
    }

    /// Multiplies, requiring the half-edge supports to be disjoint (the
    /// product of multilinear polynomials in disjoint variables is again
    /// multilinear). Powers of `r` and `q` multiply freely.
    pub fn try_mul(&self, other: &Polynomial<C>) -> Result<Polynomial<C>, PolyError> {
        if let Some(&h) = self.support().intersection(&other.support()).next() {
            return Err(PolyError::NotMultilinear(h));
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.try_mul(mb)?;
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Multiplies by a polynomial in `r` and `q` only (no half-edge
    /// variables), which is always legal.
    pub fn mul_aux(&self, aux: &Polynomial<C>) -> Polynomial<C> {
        debug_assert!(aux.support().is_empty());
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &aux.terms {
                let m = ma.try_mul(mb).expect("aux factor has no half-edge vars");
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Substitutes polynomials for half-edge variables. Variables without an
    /// entry stay untouched. Substituting into a multilinear polynomial can
    /// leave multilinearity only if replacement supports collide with kept
    /// variables in the same monomial; that raises the same product error.
    pub fn substitute(
        &self,
        map: &BTreeMap<HalfEdgeId, Polynomial<C>>,
    ) -> Result<Polynomial<C>, PolyError> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut product = Polynomial::from_monomial(
                Monomial {
                    vars: m
                        .vars
                        .iter()
                        .copied()
                        .filter(|h| !map.contains_key(h))
                        .collect(),
                    r_exp: m.r_exp,
                    q_exp: m.q_exp,
                },
                c.clone(),
            );
            for h in m.vars.iter().filter(|h| map.contains_key(h)) {
                product = product.try_mul(&map[h])?;
            }
            out += product;
        }
        Ok(out)
    }

    /// Substitutes `r := value` (a polynomial without half-edge variables).
    pub fn substitute_r(&self, value: &Polynomial<C>) -> Polynomial<C> {
        debug_assert!(value.support().is_empty());
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut power = Polynomial::one();
            for _ in 0..m.r_exp {
                power = power.mul_aux(value);
            }
            let base = Polynomial::from_monomial(
                Monomial {
                    vars: m.vars.clone(),
                    r_exp: 0,
                    q_exp: m.q_exp,
                },
                c.clone(),
            );
            out += base.mul_aux(&power);
        }
        out
    }

    /// Substitutes `q := value` (a polynomial without half-edge variables).
    pub fn substitute_q(&self, value: &Polynomial<C>) -> Polynomial<C> {
        debug_assert!(value.support().is_empty());
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut power = Polynomial::one();
            for _ in 0..m.q_exp {
                power = power.mul_aux(value);
            }
            let base = Polynomial::from_monomial(
                Monomial {
                    vars: m.vars.clone(),
                    r_exp: m.r_exp,
                    q_exp: 0,
                },
                c.clone(),
            );
            out += base.mul_aux(&power);
        }
        out
    }

    /// Evaluates with `a_h := assign(h)`, `r := r_value`, `q := q_value` in
    /// any exact field.
    pub fn evaluate<F>(&self, mut assign: impl FnMut(HalfEdgeId) -> F, r_value: &F, q_value: &F) -> F
    where
        F: Clone + Zero + One + Mul<Output = F> + Add<Output = F>,
        C: IntoField<F>,
    {
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut value: F = c.clone().into_field();
            for &h in &m.vars {
                value = value * assign(h);
            }
            for _ in 0..m.r_exp {
                value = value * r_value.clone();
            }
            for _ in 0..m.q_exp {
                value = value * q_value.clone();
            }
            total = total + value;
        }
        total
    }

    /// Canonical text: terms in the fixed monomial order, each as
    /// `{sign}{|coeff|}` then `*a{h}` factors ascending, then `*r`/`*r^i`,
    /// then `*q`/`*q^j`, space-separated, leading `+` included; the zero
    /// polynomial prints as `0`.
    pub fn canonical_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut pieces = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let coeff = format!("{c}");
            let (sign, magnitude) = match coeff.strip_prefix('-') {
                Some(rest) => ('-', rest.to_string()),
                None => ('+', coeff),
            };
            let mut piece = format!("{sign}{magnitude}");
            for &h in &m.vars {
                piece.push_str(&format!("*a{h}"));
            }
            match m.r_exp {
                0 => {}
                1 => piece.push_str("*r"),
                e => piece.push_str(&format!("*r^{e}")),
            }
            match m.q_exp {
                0 => {}
                1 => piece.push_str("*q"),
                e => piece.push_str(&format!("*q^{e}")),
            }
            pieces.push(piece);
        }
        pieces.join(" ")
    }

    fn term_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: CoeffJson::render(format!("{c}")),
                vars: m.vars.iter().copied().collect(),
                r: m.r_exp,
                q: m.q_exp,
            })
            .collect()
    }

    /// Serializes as a JSON array of term objects
    /// `{"coeff": n, "vars": [ids], "r": i, "q": j}` in canonical term
    /// order, `r`/`q` omitted when zero.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.term_json()).expect("polynomial serialization cannot fail")
    }

    /// The JSON form as a string with the field order of the format above.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.term_json()).expect("polynomial serialization cannot fail")
    }
}

/// Conversion of coefficients into an evaluation field.
pub trait IntoField<F> {
    fn into_field(self) -> F;
}

impl IntoField<BigRational> for BigInt {
    fn into_field(self) -> BigRational {
        BigRational::from_integer(self)
    }
}

impl IntoField<BigRational> for BigRational {
    fn into_field(self) -> BigRational {
        self
    }
}

impl IntoField<f64> for BigInt {
    fn into_field(self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().expect("coefficient fits in f64")
    }
}

impl<C: Scalar> Polynomial<C>
where
    C: std::str::FromStr,
{
    /// Parses the canonical text format (and mild variations: optional
    /// leading sign on the first term, `^1` exponents).
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(PolyError::Parse("empty input".to_string()));
        }
        if trimmed == "0" {
            return Ok(Polynomial::zero());
        }
        let mut out = Polynomial::zero();
        for raw_piece in trimmed.split_whitespace() {
            let (sign, rest): (i64, &str) = match raw_piece.as_bytes()[0] {
                b'+' => (1, &raw_piece[1..]),
                b'-' => (-1, &raw_piece[1..]),
                _ => (1, raw_piece),
            };
            if rest.is_empty() {
                return Err(PolyError::Parse(format!("dangling sign in '{raw_piece}'")));
            }
            let mut coeff: Option<C> = None;
            let mut mono = Monomial::one();
            for factor in rest.split('*') {
                if factor.is_empty() {
                    return Err(PolyError::Parse(format!("empty factor in '{raw_piece}'")));
                }
                if let Some(id_text) = factor.strip_prefix('a') {
                    let id: HalfEdgeId = id_text.parse().map_err(|_| {
                        PolyError::Parse(format!("bad variable '{factor}'"))
                    })?;
                    match mono.vars.binary_search(&id) {
                        Ok(_) => {
                            return Err(PolyError::Parse(format!(
                                "variable a{id} repeated in one term"
                            )))
                        }
                        Err(slot) => mono.vars.insert(slot, id),
                    }
                } else if factor == "r" || factor.starts_with("r^") {
                    let exp = parse_exponent(factor, "r")?;
                    mono.r_exp += exp;
                } else if factor == "q" || factor.starts_with("q^") {
                    let exp = parse_exponent(factor, "q")?;
                    mono.q_exp += exp;
                } else {
                    let value: C = factor.parse().map_err(|_| {
                        PolyError::Parse(format!("bad coefficient '{factor}'"))
                    })?;
                    if coeff.is_some() {
                        return Err(PolyError::Parse(format!(
                            "two numeric factors in '{raw_piece}'"
                        )));
                    }
                    coeff = Some(value);
                }
            }
            let mut c = coeff.unwrap_or_else(C::one);
            if sign < 0 {
                c = -c;
            }
            out.add_term(mono, c);
        }
        Ok(out)
    }

    /// Parses the JSON term-array format.
    pub fn from_json_str(text: &str) -> Result<Self, PolyError> {
        let raw: Vec<TermJson> =
            serde_json::from_str(text).map_err(|e| PolyError::Json(e.to_string()))?;
        let mut out = Polynomial::zero();
        for term in raw {
            let digits = term.coeff.digits();
            let coeff: C = digits
                .parse()
                .map_err(|_| PolyError::Json(format!("bad coefficient '{digits}'")))?;
            let mut mono = Monomial::from_vars(term.vars.iter().copied());
            if mono.vars.len() != term.vars.len() {
                return Err(PolyError::Json("repeated variable in one term".to_string()));
            }
            mono.r_exp = term.r;
            mono.q_exp = term.q;
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

fn parse_exponent(factor: &str, name: &str) -> Result<u32, PolyError> {
    if factor == name {
        return Ok(1);
    }
    factor[name.len() + 1..]
        .parse()
        .map_err(|_| PolyError::Parse(format!("bad exponent '{factor}'")))
}

impl<C: Scalar> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(mut self, rhs: Polynomial<C>) -> Polynomial<C> {
        self += rhs;
        self
    }
}

impl<C: Scalar> AddAssign for Polynomial<C> {
    fn add_assign(&mut self, rhs: Polynomial<C>) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<C: Scalar> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Polynomial<C>) -> Polynomial<C> {
        self + rhs.negate()
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = Polynomial<BigInt>;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn canonical_text_examples() {
        assert_eq!(P::zero().canonical_text(), "0");
        assert_eq!(P::one().canonical_text(), "+1");
        let p = P::var(0) + P::var(1);
        assert_eq!(p.canonical_text(), "+1*a0 +1*a1");
        let q = P::var(0).try_mul(&P::var(4)).unwrap().scale(&int(-3));
        assert_eq!(q.canonical_text(), "-3*a0*a4");
        let r2 = P::var(2)
            .try_mul(&P::var(5))
            .unwrap()
            .mul_aux(&P::r().mul_aux(&P::r()));
        assert_eq!(r2.canonical_text(), "+1*a2*a5*r^2");
        let with_q = P::var_sum([0, 1]).mul_aux(&P::q());
        assert_eq!(with_q.canonical_text(), "+1*a0*q +1*a1*q");
    }

    #[test]
    fn term_order_is_stable() {
        // Same polynomial assembled in different orders prints identically.
        let a = P::var(3) + P::var(0) + P::var_product([1, 2]);
        let b = P::var_product([1, 2]) + P::var(3) + P::var(0);
        assert_eq!(a.canonical_text(), b.canonical_text());
    }

    #[test]
    fn multilinearity_is_enforced() {
        let err = P::var(0).try_mul(&P::var(0)).unwrap_err();
        assert_eq!(err, PolyError::NotMultilinear(0));
        let p = P::var_sum([0, 1]);
        let q = P::var_sum([1, 2]);
        assert_eq!(p.try_mul(&q).unwrap_err(), PolyError::NotMultilinear(1));
        // Disjoint supports multiply fine.
        let ok = P::var_sum([0, 1]).try_mul(&P::var_sum([2, 3])).unwrap();
        assert_eq!(ok.term_count(), 4);
    }

    #[test]
    fn addition_cancels_to_zero() {
        let p = P::var_sum([0, 1]);
        assert!(p.clone().sub(p).is_zero());
    }

    #[test]
    fn substitute_collision_is_an_error() {
        let p = P::var_product([0, 2]);
        let replacement = P::var(0).negate() + P::var(1).negate();
        let map = BTreeMap::from([(2u32, replacement)]);
        assert_eq!(p.substitute(&map).unwrap_err(), PolyError::NotMultilinear(0));
    }

    #[test]
    fn substitute_disjoint_replacement() {
        let p = P::var_product([0, 2]);
        let map = BTreeMap::from([(2u32, P::var_sum([3, 4]))]);
        let got = p.substitute(&map).unwrap();
        assert_eq!(got.canonical_text(), "+1*a0*a3 +1*a0*a4");
    }

    #[test]
    fn substitute_r_and_q() {
        let p = P::var(0).mul_aux(&P::r()).mul_aux(&P::q()) + P::var(1);
        let at_r1 = p.substitute_r(&P::one());
        assert_eq!(at_r1.canonical_text(), "+1*a0*q +1*a1");
        let at_r0 = p.substitute_r(&P::zero());
        assert_eq!(at_r0.canonical_text(), "+1*a1");
        let shifted = p.substitute_r(&(P::r() + P::constant(int(-1))));
        // r := r - 1 sends a0*r*q to a0*r*q - a0*q.
        assert_eq!(shifted.canonical_text(), "-1*a0*q +1*a0*r*q +1*a1");
    }

    #[test]
    fn evaluate_exactly() {
        use num_rational::BigRational;
        let p = P::var_product([0, 1]) + P::var(2).mul_aux(&P::r());
        let assign = |h: HalfEdgeId| BigRational::new(int(h as i64 + 1), int(2));
        let r = BigRational::new(int(1), int(3));
        let q = BigRational::from_integer(int(1));
        let got = p.evaluate(assign, &r, &q);
        // (1/2)(2/2) + (3/2)(1/3) = 1/2 + 1/2 = 1.
        assert_eq!(got, BigRational::from_integer(int(1)));
    }

    #[test]
    fn parse_round_trips_canonical_text() {
        let p = P::var_sum([0, 1]).mul_aux(&P::q())
            + P::var(2).mul_aux(&P::q().mul_aux(&P::q()).mul_aux(&P::r()));
        let text = p.canonical_text();
        assert_eq!(text, "+1*a0*q +1*a1*q +1*a2*r*q^2");
        let back = P::parse(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(P::parse("0").unwrap(), P::zero());
        // Unsigned first term and explicit ^1 are tolerated.
        assert_eq!(P::parse("2*a0 -1*a1*r^1").unwrap().canonical_text(), "+2*a0 -1*a1*r");
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(P::parse("").is_err());
        assert!(P::parse("+").is_err());
        assert!(P::parse("+1*").is_err());
        assert!(P::parse("+1*b2").is_err());
        assert!(P::parse("+1*a0*a0").is_err());
        assert!(P::parse("+x*a0").is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = P::var_product([0, 3]).mul_aux(&P::r()).scale(&int(2))
            + P::var(1).negate();
        let json = p.to_json_string();
        assert_eq!(
            json,
            r#"[{"coeff":2,"vars":[0,3],"r":1},{"coeff":-1,"vars":[1]}]"#
        );
        assert_eq!(P::from_json_str(&json).unwrap(), p);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec(
            (
                proptest::collection::btree_set(0u32..6, 0..3),
                0u32..3,
                0u32..2,
                -4i64..5,
            ),
            0..6,
        )
        .prop_map(|terms| {
            let mut p = P::zero();
            for (vars, r_exp, q_exp, c) in terms {
                p.add_term(
                    Monomial {
                        vars: vars.into_iter().collect(),
                        r_exp,
                        q_exp,
                    },
                    int(c),
                );
            }
            p
        })
    }

    proptest! {
        #[test]
        fn addition_is_commutative_and_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        }

        #[test]
        fn zero_is_neutral_and_negation_cancels(a in arb_poly()) {
            prop_assert_eq!(a.clone() + P::zero(), a.clone());
            prop_assert!((a.clone() - a.clone()).is_zero());
        }

        #[test]
        fn canonical_text_round_trips(a in arb_poly()) {
            let text = a.canonical_text();
            prop_assert_eq!(P::parse(&text).unwrap(), a);
        }

        #[test]
        fn json_round_trips(a in arb_poly()) {
            prop_assert_eq!(P::from_json_str(&a.to_json_string()).unwrap(), a);
        }

        #[test]
        fn aux_multiplication_distributes(a in arb_poly(), b in arb_poly()) {
            let r = P::r();
            let left = (a.clone() + b.clone()).mul_aux(&r);
            let right = a.clone().mul_aux(&r) + b.clone().mul_aux(&r);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn evaluation_commutes_with_addition(a in arb_poly(), b in arb_poly()) {
            use num_rational::BigRational;
            let assign = |h: HalfEdgeId| BigRational::new(int(h as i64 + 2), int(3));
            let r = BigRational::new(int(-1), int(2));
            let q = BigRational::new(int(2), int(5));
            let sum = a.clone() + b.clone();
            let lhs = sum.evaluate(assign, &r, &q);
            let rhs = a.evaluate(assign, &r, &q) + b.evaluate(assign, &r, &q);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_commutes_with_evaluation(a in arb_poly(), rv in -3i64..4) {
            use num_rational::BigRational;
            // Substitute r := rv, then evaluate, versus evaluate with r = rv.
            let substituted = a.substitute_r(&P::constant(int(rv)));
            let assign = |h: HalfEdgeId| BigRational::new(int(h as i64 + 1), int(2));
            let q = BigRational::new(int(3), int(7));
            let lhs = substituted.evaluate(assign, &BigRational::from_integer(int(9)), &q);
            let rhs = a.evaluate(assign, &BigRational::from_integer(int(rv)), &q);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

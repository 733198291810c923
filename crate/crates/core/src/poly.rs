//! Multilinear polynomials over binary variables with exact integer
//! coefficients.
//!
//! Monomials are *sets* of variable indices, so u^k = u holds structurally:
//! a product that would raise a variable to a power simply merges the index
//! sets. Coefficients live in i128 with checked arithmetic; modular
//! canonicalization is an explicit operation, never implicit.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A product of distinct binary variables; the empty set is the constant
/// monomial. Ordered by (degree, lexicographic indices), which is also the
/// canonical rendering order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: Vec<u32>,
}

impl Monomial {
    /// Builds a monomial from indices; duplicates collapse (set semantics).
    pub fn new<I: IntoIterator<Item = u32>>(vars: I) -> Self {
        let mut vars: Vec<u32> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        Self { vars }
    }

    pub fn constant() -> Self {
        Self { vars: Vec::new() }
    }

    pub fn var(index: u32) -> Self {
        Self { vars: vec![index] }
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn union(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.vars.iter().chain(other.vars.iter()).copied())
    }

    /// Replaces the pair {x, y} (which must both be present) by z.
    pub fn substitute_pair(&self, x: u32, y: u32, z: u32) -> Monomial {
        debug_assert!(self.vars.contains(&x) && self.vars.contains(&y));
        Monomial::new(
            self.vars
                .iter()
                .copied()
                .filter(|&v| v != x && v != y)
                .chain(std::iter::once(z)),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multilinear polynomial: monomial -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultilinearPoly {
    terms: BTreeMap<Monomial, i128>,
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("polynomial coefficient overflow")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("polynomial coefficient overflow")
}

impl MultilinearPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::constant(), c);
        }
        Self { terms }
    }

    pub fn var(index: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(index), 1);
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i128, Monomial)>>(terms: I) -> Self {
        let mut poly = Self::zero();
        for (coeff, mono) in terms {
            poly.add_term(coeff, mono);
        }
        poly
    }

    /// Accumulates `coeff * mono`, dropping the entry if it cancels.
    pub fn add_term(&mut self, coeff: i128, mono: Monomial) {
        use std::collections::btree_map::Entry;
        if coeff == 0 {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let v = checked_add(*e.get(), coeff);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (degree, lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, mono: &Monomial) -> i128 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    pub fn scale(&self, factor: i128) -> MultilinearPoly {
        if factor == 0 {
            return MultilinearPoly::zero();
        }
        MultilinearPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), checked_mul(c, factor)))
                .collect(),
        }
    }

    /// Largest monomial degree; 0 for constants and the zero polynomial.
    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest variable index appearing, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|m| m.vars().last().copied())
            .max()
    }

    /// Reduces every coefficient to its canonical representative in `[0, p)`.
    pub fn normalize_mod(&self, p: u64) -> MultilinearPoly {
        debug_assert!(p >= 2);
        let m = p as i128;
        MultilinearPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(mono, &c)| {
                    let r = c.rem_euclid(m);
                    (r != 0).then(|| (mono.clone(), r))
                })
                .collect(),
        }
    }

    /// Exact value at a 0/1 assignment (indexed by variable).
    pub fn evaluate(&self, bits: &[u8]) -> Result<i128> {
        let mut total = 0i128;
        'terms: for (mono, &coeff) in &self.terms {
            for &v in mono.vars() {
                match bits.get(v as usize) {
                    None => return Err(Error::UnassignedVariable(v)),
                    Some(0) => continue 'terms,
                    Some(_) => {}
                }
            }
            total = checked_add(total, coeff);
        }
        Ok(total)
    }

    /// Sound value bounds over all 0/1 assignments: the constant plus the sum
    /// of negative (resp. positive) non-constant coefficients.
    pub fn value_bounds(&self) -> (i128, i128) {
        let mut lo = 0i128;
        let mut hi = 0i128;
        for (mono, &coeff) in &self.terms {
            if mono.is_constant() {
                lo = checked_add(lo, coeff);
                hi = checked_add(hi, coeff);
            } else if coeff < 0 {
                lo = checked_add(lo, coeff);
            } else {
                hi = checked_add(hi, coeff);
            }
        }
        (lo, hi)
    }

    /// Replaces every monomial containing both x and y by the same monomial
    /// with {x, y} collapsed to z. Used by linearization.
    pub fn substitute_pair(&self, x: u32, y: u32, z: u32) -> MultilinearPoly {
        let mut out = MultilinearPoly::zero();
        for (mono, &coeff) in &self.terms {
            if mono.vars().contains(&x) && mono.vars().contains(&y) {
                out.add_term(coeff, mono.substitute_pair(x, y, z));
            } else {
                out.add_term(coeff, mono.clone());
            }
        }
        out
    }
}

impl Add for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn add(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        let mut out = self.clone();
        for (mono, &coeff) in &rhs.terms {
            out.add_term(coeff, mono.clone());
        }
        out
    }
}

impl Sub for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn sub(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        let mut out = self.clone();
        for (mono, &coeff) in &rhs.terms {
            out.add_term(-coeff, mono.clone());
        }
        out
    }
}

impl Mul for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn mul(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        let mut out = MultilinearPoly::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.add_term(checked_mul(ca, cb), ma.union(mb));
            }
        }
        out
    }
}

impl Neg for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn neg(self) -> MultilinearPoly {
        self.scale(-1)
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms().enumerate() {
            let mag = coeff.unsigned_abs();
            if i == 0 {
                if coeff < 0 {
                    write!(f, "-")?;
                }
            } else if coeff < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_constant() {
                write!(f, "{}", mag)?;
            } else {
                if mag != 1 {
                    write!(f, "{}*", mag)?;
                }
                let names: Vec<String> = mono.vars().iter().map(|v| format!("u{}", v)).collect();
                write!(f, "{}", names.join("*"))?;
            }
        }
        Ok(())
    }
}

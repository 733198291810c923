//! Short Weierstrass curves y^2 = x^3 + ax + b over small prime fields:
//! the complete affine group law, scalar multiplication, order computation
//! and a brute-force discrete-logarithm oracle.
//!
//! This side of the toolkit is purely classical. Unlike the symbolic chord
//! arithmetic used for the reduction, the group law here handles every case
//! (neutral element, inverse pairs, doubling) so that verification of decoded
//! solutions is unconditional.

use crate::error::{Error, Result};
use crate::field::{is_odd_prime, FieldElement};

/// Hard cap for order computation by iteration.
const ORDER_ITERATION_MODULUS_CAP: u64 = 1 << 20;
/// Hard cap for the brute-force discrete-logarithm search.
const BRUTEFORCE_ORDER_CAP: u64 = 1 << 24;

/// Curve coefficients a, b with the prime modulus carried by the elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveParams {
    a: FieldElement,
    b: FieldElement,
}

/// A point in affine coordinates, or the neutral element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AffinePoint {
    Infinity,
    Finite { x: FieldElement, y: FieldElement },
}

impl AffinePoint {
    pub fn finite(x: FieldElement, y: FieldElement) -> Self {
        AffinePoint::Finite { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, AffinePoint::Infinity)
    }

    /// Affine coordinates of a finite point.
    pub fn coords(&self) -> Option<(FieldElement, FieldElement)> {
        match self {
            AffinePoint::Infinity => None,
            AffinePoint::Finite { x, y } => Some((*x, *y)),
        }
    }
}

impl std::fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AffinePoint::Infinity => write!(f, "O"),
            AffinePoint::Finite { x, y } => write!(f, "({}, {})", x, y),
        }
    }
}

impl CurveParams {
    /// Validates the modulus (odd prime >= 3) and nonsingularity
    /// 4a^3 + 27b^2 != 0 (mod p).
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self> {
        assert_eq!(a.modulus(), b.modulus(), "curve coefficients must share a modulus");
        let p = a.modulus();
        if !is_odd_prime(p) {
            return Err(Error::BadModulus(p));
        }
        let four = FieldElement::new(4, p);
        let twenty_seven = FieldElement::new(27, p);
        let disc = four * a * a * a + twenty_seven * b * b;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Self { a, b })
    }

    pub fn from_integers(p: u64, a: u64, b: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Self::new(FieldElement::new(a, p), FieldElement::new(b, p))
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    pub fn b(&self) -> FieldElement {
        self.b
    }

    pub fn modulus(&self) -> u64 {
        self.a.modulus()
    }

    /// Whether the point satisfies y^2 = x^3 + ax + b (the neutral element
    /// always belongs to the curve).
    pub fn contains(&self, point: &AffinePoint) -> bool {
        match point {
            AffinePoint::Infinity => true,
            AffinePoint::Finite { x, y } => *y * *y == *x * *x * *x + self.a * *x + self.b,
        }
    }

    fn ensure_on_curve(&self, point: &AffinePoint) -> Result<()> {
        if self.contains(point) {
            Ok(())
        } else {
            let (x, y) = point.coords().expect("infinity is always on the curve");
            Err(Error::PointNotOnCurve {
                x: x.value(),
                y: y.value(),
            })
        }
    }

    pub fn negate(&self, point: &AffinePoint) -> AffinePoint {
        match point {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Finite { x, y } => AffinePoint::Finite { x: *x, y: -*y },
        }
    }

    /// Complete group law: handles the neutral element, inverse pairs and
    /// doubling in addition to the generic chord case.
    pub fn add(&self, lhs: &AffinePoint, rhs: &AffinePoint) -> Result<AffinePoint> {
        self.ensure_on_curve(lhs)?;
        self.ensure_on_curve(rhs)?;
        let (x1, y1) = match lhs {
            AffinePoint::Infinity => return Ok(*rhs),
            AffinePoint::Finite { x, y } => (*x, *y),
        };
        let (x2, y2) = match rhs {
            AffinePoint::Infinity => return Ok(*lhs),
            AffinePoint::Finite { x, y } => (*x, *y),
        };
        let lambda = if x1 == x2 {
            if y1 == -y2 {
                // Covers both inverse pairs and doubling a point with y = 0.
                return Ok(AffinePoint::Infinity);
            }
            // Tangent slope (3x^2 + a) / 2y.
            let p = self.modulus();
            let three = FieldElement::new(3, p);
            let two = FieldElement::new(2, p);
            (three * x1 * x1 + self.a) * (two * y1).inv()?
        } else {
            (y2 - y1) * (x2 - x1).inv()?
        };
        let x3 = lambda * lambda - x1 - x2;
        let y3 = lambda * (x1 - x3) - y1;
        Ok(AffinePoint::Finite { x: x3, y: y3 })
    }

    pub fn double(&self, point: &AffinePoint) -> Result<AffinePoint> {
        self.add(point, point)
    }

    /// `[k]P` by double-and-add; `[0]P` is the neutral element.
    pub fn scalar_mul(&self, k: u64, point: &AffinePoint) -> Result<AffinePoint> {
        self.ensure_on_curve(point)?;
        let mut acc = AffinePoint::Infinity;
        let mut addend = *point;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &addend)?;
            }
            k >>= 1;
            if k > 0 {
                addend = self.add(&addend, &addend)?;
            }
        }
        Ok(acc)
    }

    /// Smallest k >= 1 with `[k]P = O`, by naive iteration. Instances here
    /// are tiny by design, so no BSGS machinery is warranted.
    pub fn point_order(&self, point: &AffinePoint) -> Result<u64> {
        self.ensure_on_curve(point)?;
        if point.is_infinity() {
            return Ok(1);
        }
        if self.modulus() >= ORDER_ITERATION_MODULUS_CAP {
            return Err(Error::CapExceeded(ORDER_ITERATION_MODULUS_CAP));
        }
        // Hasse bound: the whole group has at most p + 1 + 2*sqrt(p) points.
        let p = self.modulus();
        let bound = p + 1 + 2 * (p as f64).sqrt().ceil() as u64 + 1;
        let mut acc = *point;
        let mut k = 1u64;
        while !acc.is_infinity() {
            acc = self.add(&acc, point)?;
            k += 1;
            if k > bound {
                return Err(Error::CapExceeded(bound));
            }
        }
        Ok(k)
    }
}

/// A discrete-logarithm instance `[y]P = Q` together with the derived sizes:
/// `order = ord(P)`, `m` the bit length of the order, `n` the bit length of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EcdlpInstance {
    curve: CurveParams,
    base: AffinePoint,
    target: AffinePoint,
    order: u64,
    m: u32,
    n: u32,
}

fn bit_length(v: u64) -> u32 {
    64 - v.leading_zeros()
}

impl EcdlpInstance {
    /// Builds an instance, computing `ord(P)` by iteration.
    ///
    /// Fails fast when `ord(P)` is a power of two: the binary decomposition
    /// of the scalar would then involve a precomputed point equal to the
    /// neutral element, which the symbolic reduction cannot represent.
    pub fn new(curve: CurveParams, base: AffinePoint, target: AffinePoint) -> Result<Self> {
        if base.is_infinity() || target.is_infinity() {
            return Err(Error::NotInSubgroup);
        }
        curve.ensure_on_curve(&base)?;
        curve.ensure_on_curve(&target)?;
        let order = curve.point_order(&base)?;
        if order.is_power_of_two() {
            return Err(Error::DegeneratePower);
        }
        Ok(Self {
            curve,
            base,
            target,
            order,
            m: bit_length(order),
            n: bit_length(curve.modulus()),
        })
    }

    pub fn from_integers(p: u64, a: u64, b: u64, px: u64, py: u64, qx: u64, qy: u64) -> Result<Self> {
        let curve = CurveParams::from_integers(p, a, b)?;
        let base = AffinePoint::finite(FieldElement::new(px, p), FieldElement::new(py, p));
        let target = AffinePoint::finite(FieldElement::new(qx, p), FieldElement::new(qy, p));
        Self::new(curve, base, target)
    }

    pub fn curve(&self) -> &CurveParams {
        &self.curve
    }

    pub fn base(&self) -> AffinePoint {
        self.base
    }

    pub fn target(&self) -> AffinePoint {
        self.target
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Bit length of `ord(P)`; the scalar register is this wide.
    pub fn scalar_bits(&self) -> u32 {
        self.m
    }

    /// Bit length of p; each unknown coordinate is this wide.
    pub fn coordinate_bits(&self) -> u32 {
        self.n
    }

    /// `[P, [2]P, [4]P, ..., [2^(m-1)]P]`, all finite by construction.
    pub fn power_points(&self) -> Result<Vec<AffinePoint>> {
        let mut points = Vec::with_capacity(self.m as usize);
        let mut current = self.base;
        for _ in 0..self.m {
            if current.is_infinity() {
                return Err(Error::DegeneratePower);
            }
            points.push(current);
            current = self.curve.double(&current)?;
        }
        Ok(points)
    }

    /// Exhaustive search for the unique y in `[1, ord-1]` with `[y]P = Q`.
    pub fn bruteforce(&self) -> Result<u64> {
        if self.order >= BRUTEFORCE_ORDER_CAP {
            return Err(Error::CapExceeded(BRUTEFORCE_ORDER_CAP));
        }
        let mut acc = self.base;
        for y in 1..self.order {
            if acc == self.target {
                return Ok(y);
            }
            acc = self.curve.add(&acc, &self.base)?;
        }
        Err(Error::NotInSubgroup)
    }
}

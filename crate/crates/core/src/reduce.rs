//! Reduction of a discrete-logarithm instance to a QUBO.
//!
//! The pipeline has four deterministic stages:
//!
//! 1. `build_system` — write the scalar in binary, u_0 ... u_{m-1}, so that
//!    `[y']P` becomes a chain of conditional additions of the precomputed
//!    points `[2^i]P`. Each addition contributes one x- and one y-equation
//!    over F_p: the chord law is multiplied through by its denominators, and
//!    a per-bit selector polynomial picks which operand survives. Unknown
//!    intermediate sums get fresh binary coordinate registers.
//! 2. `lift_integers` — replace each congruence F = 0 (mod p) by the integer
//!    equation F - p*K = 0, with K a fresh binary carry register sized from
//!    the value bounds of F.
//! 3. `linearize` — collapse every product of two binaries into a fresh
//!    substitution variable so all equations become linear; substitutions
//!    are cached globally and chosen deterministically (two smallest indices
//!    first).
//! 4. `assemble_qubo` — sum the squares of the linear equations and add a
//!    Rosenberg penalty per substitution, weighted so that violating any
//!    substitution always costs more than it can save. The result is a
//!    non-negative objective whose zeros are exactly the honest solutions.
//!
//! Two strategies are provided for the first addition, where both operands
//! may be switched off and the chord law has no value to produce. The first
//! drops the all-zero case and retries with a shifted target when the scalar
//! turns out to be divisible by 4; the second folds a conditional extra copy
//! of the base point into the first addition, at the price of a mandatory
//! target shift and a slightly larger system.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::EcdlpInstance;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{Monomial, MultilinearPoly};
use crate::qubo::{Assignment, QuboInstance};

/// Strategy for the first addition of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Three-case selector; requires a retry with a shifted target when the
    /// (shifted) scalar is divisible by 4.
    FirstIdea,
    /// Four-case selector with a conditional extra base point; requires a
    /// mandatory shift of at least 1.
    SecondIdea,
}

impl Method {
    pub fn number(&self) -> u8 {
        match self {
            Method::FirstIdea => 1,
            Method::SecondIdea => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Method> {
        match n {
            1 => Some(Method::FirstIdea),
            2 => Some(Method::SecondIdea),
            _ => None,
        }
    }

    /// Smallest admissible target shift.
    pub fn mandatory_shift(&self) -> u64 {
        match self {
            Method::FirstIdea => 0,
            Method::SecondIdea => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X,
    Y,
}

/// Semantic role of one binary variable. The sidecar file serializes these
/// verbatim, so decoders can reconstruct the scalar from raw solver output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum VariableRole {
    /// Bit `bit` (weight 2^bit) of the shifted scalar.
    ScalarBit { bit: u32 },
    /// Bit `bit` (weight 2^bit) of coordinate `coord` of the `point`-th
    /// intermediate sum (1-based).
    PointBit { point: u32, coord: Coord, bit: u32 },
    /// Bit `bit` (weight 2^bit) of the carry register of equation `equation`.
    CarryBit { equation: u32, bit: u32 },
    /// Substitution variable constrained to equal the product of two earlier
    /// variables.
    AuxProduct { left: u32, right: u32 },
}

/// Dense variable index space: scalar bits first, then point bits, then
/// carry bits, then substitution variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VariableMap {
    roles: Vec<VariableRole>,
}

/// Per-role variable counts, in allocation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleCounts {
    pub scalar: usize,
    pub point: usize,
    pub carry: usize,
    pub aux: usize,
}

impl RoleCounts {
    pub fn total(&self) -> usize {
        self.scalar + self.point + self.carry + self.aux
    }
}

impl VariableMap {
    fn push(&mut self, role: VariableRole) -> u32 {
        if let VariableRole::AuxProduct { left, right } = role {
            let idx = self.roles.len() as u32;
            debug_assert!(left < idx && right < idx);
        }
        self.roles.push(role);
        (self.roles.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn role(&self, index: u32) -> VariableRole {
        self.roles[index as usize]
    }

    pub fn roles(&self) -> &[VariableRole] {
        &self.roles
    }

    pub fn counts(&self) -> RoleCounts {
        let mut c = RoleCounts {
            scalar: 0,
            point: 0,
            carry: 0,
            aux: 0,
        };
        for role in &self.roles {
            match role {
                VariableRole::ScalarBit { .. } => c.scalar += 1,
                VariableRole::PointBit { .. } => c.point += 1,
                VariableRole::CarryBit { .. } => c.carry += 1,
                VariableRole::AuxProduct { .. } => c.aux += 1,
            }
        }
        c
    }
}

/// The equations of one reduction, together with everything needed to
/// interpret an assignment of their variables.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    equations: Vec<MultilinearPoly>,
    modulus: u64,
    varmap: VariableMap,
    method: Method,
    shift: u64,
    lifted: bool,
    linearized: bool,
}

/// `aux = left * right`, enforced by a Rosenberg penalty during assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubstitutionConstraint {
    pub aux: u32,
    pub left: u32,
    pub right: u32,
}

/// A decoded solver assignment. `verified` reflects a classical scalar
/// multiplication against the original, unshifted target.
#[derive(Debug, Clone)]
pub struct DecodedSolution {
    pub y_candidate: u64,
    pub scalar_bits: Vec<u8>,
    pub verified: bool,
    /// Sum of squared equation residuals at the assignment.
    pub energy: i64,
    /// Residual of each lifted equation at the assignment.
    pub residues: Vec<i128>,
}

impl EquationSystem {
    pub fn equations(&self) -> &[MultilinearPoly] {
        &self.equations
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn varmap(&self) -> &VariableMap {
        &self.varmap
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn is_lifted(&self) -> bool {
        self.lifted
    }

    pub fn is_linearized(&self) -> bool {
        self.linearized
    }

    #[cfg(test)]
    pub(crate) fn synthetic(
        equations: Vec<MultilinearPoly>,
        modulus: u64,
        varmap_len: usize,
    ) -> Self {
        let mut varmap = VariableMap::default();
        for bit in 0..varmap_len as u32 {
            varmap.push(VariableRole::ScalarBit { bit });
        }
        EquationSystem {
            equations,
            modulus,
            varmap,
            method: Method::FirstIdea,
            shift: 0,
            lifted: true,
            linearized: false,
        }
    }
}

fn const_poly(fe: FieldElement) -> MultilinearPoly {
    MultilinearPoly::constant(fe.value() as i128)
}

struct Chord {
    nom_x: MultilinearPoly,
    denom_x: MultilinearPoly,
    nom_y: MultilinearPoly,
    denom_y: MultilinearPoly,
}

/// Chord-law numerators and denominators for `(x1, y1) + (x2, y2)`, as
/// polynomials (either operand may be symbolic):
///
/// ```text
/// x3 = ((y2-y1)^2 - (x1+x2)(x2-x1)^2) / (x2-x1)^2
/// y3 = ((2x1+x2)(y2-y1)(x2-x1)^2 - (y2-y1)^3 - y1(x2-x1)^3) / (x2-x1)^3
/// ```
fn chord(
    x1: &MultilinearPoly,
    y1: &MultilinearPoly,
    x2: &MultilinearPoly,
    y2: &MultilinearPoly,
) -> Chord {
    let dx = x2 - x1;
    let dx2 = &dx * &dx;
    let dx3 = &dx2 * &dx;
    let dy = y2 - y1;
    let dy2 = &dy * &dy;
    let dy3 = &dy2 * &dy;

    let nom_x = &dy2 - &(&(x1 + x2) * &dx2);
    let two_x1_plus_x2 = &(&x1.scale(2) + x2);
    let nom_y = &(&(two_x1_plus_x2 * &dy) * &dx2) - &(&dy3 + &(y1 * &dx3));

    Chord {
        nom_x,
        denom_x: dx2,
        nom_y,
        denom_y: dx3,
    }
}

/// Builds the 2(m-1) chain equations over F_p for the shifted target
/// `Q' = Q + [shift]P`, with coefficients canonicalized to `[0, p)`.
pub fn build_system(inst: &EcdlpInstance, method: Method, shift: u64) -> Result<EquationSystem> {
    if shift < method.mandatory_shift() {
        return Err(Error::InvalidShift {
            method: method.number(),
            shift,
        });
    }
    let curve = inst.curve();
    let p = curve.modulus();
    let order = inst.order();
    let m = inst.scalar_bits();
    let n = inst.coordinate_bits();

    let shift_point = curve.scalar_mul(shift % order, &inst.base())?;
    let shifted_target = curve.add(&inst.target(), &shift_point)?;
    let (qx, qy) = shifted_target.coords().ok_or(Error::ShiftedTargetAtInfinity {
        shift,
        classical: (order - shift % order) % order,
    })?;

    let powers = inst.power_points()?;

    let mut varmap = VariableMap::default();
    for bit in 0..m {
        varmap.push(VariableRole::ScalarBit { bit });
    }
    // One unknown intermediate sum per addition except the last; each gets n
    // bits per coordinate, most significant bit first.
    let num_intermediate = (m as usize).saturating_sub(2);
    let mut intermediate: Vec<(MultilinearPoly, MultilinearPoly)> =
        Vec::with_capacity(num_intermediate);
    for point in 1..=num_intermediate as u32 {
        let mut coords = Vec::with_capacity(2);
        for coord in [Coord::X, Coord::Y] {
            let mut poly = MultilinearPoly::zero();
            for bit in (0..n).rev() {
                let idx = varmap.push(VariableRole::PointBit { point, coord, bit });
                poly.add_term(1i128 << bit, Monomial::var(idx));
            }
            coords.push(poly);
        }
        let y = coords.pop().unwrap();
        let x = coords.pop().unwrap();
        intermediate.push((x, y));
    }

    let one = MultilinearPoly::constant(1);
    let target_coords = (const_poly(qx), const_poly(qy));
    let mut equations = Vec::with_capacity(2 * (m as usize - 1));

    // First addition: [u0]P1 + [u1]P2.
    {
        let (p1x, p1y) = powers[0].coords().expect("powers are finite");
        let (p2x, p2y) = powers[1].coords().expect("powers are finite");
        let ch = chord(
            &const_poly(p1x),
            &const_poly(p1y),
            &const_poly(p2x),
            &const_poly(p2y),
        );
        let u0 = MultilinearPoly::var(0);
        let u1 = MultilinearPoly::var(1);
        let u0u1 = &u0 * &u1;
        let not_u0 = &one - &u0;
        let not_u1 = &one - &u1;
        let (out_x, out_y) = if m == 2 {
            (&target_coords.0, &target_coords.1)
        } else {
            (&intermediate[0].0, &intermediate[0].1)
        };
        let (bx, by) = inst.base().coords().expect("base is finite");
        for (nom, denom, c1, c2, base_coord, out) in [
            (&ch.nom_x, &ch.denom_x, p1x, p2x, bx, out_x),
            (&ch.nom_y, &ch.denom_y, p1y, p2y, by, out_y),
        ] {
            let mut selector = &(&(&u0 * &not_u1) * &const_poly(c1))
                + &(&(&u1 * &not_u0) * &const_poly(c2));
            if method == Method::SecondIdea {
                // All-zero case resolves to the base point itself.
                selector = &selector + &(&(&not_u0 * &not_u1) * &const_poly(base_coord));
            }
            let f = &(&(&u0u1 * nom) + &(denom * &selector)) - &(out * denom);
            equations.push(f.normalize_mod(p));
        }
    }

    // Chain additions: R_{k-1} + [u_k]P_{k+1}, whose output is the next
    // intermediate sum, or the shifted target for the final addition.
    for k in 2..m {
        let (x_prev, y_prev) = &intermediate[(k - 2) as usize];
        let (pkx, pky) = powers[k as usize].coords().expect("powers are finite");
        let ch = chord(x_prev, y_prev, &const_poly(pkx), &const_poly(pky));
        let u = MultilinearPoly::var(k);
        let not_u = &one - &u;
        let (out_x, out_y) = if k == m - 1 {
            (&target_coords.0, &target_coords.1)
        } else {
            (&intermediate[(k - 1) as usize].0, &intermediate[(k - 1) as usize].1)
        };
        for (nom, denom, prev, out) in [
            (&ch.nom_x, &ch.denom_x, x_prev, out_x),
            (&ch.nom_y, &ch.denom_y, y_prev, out_y),
        ] {
            let f = &(&(&u * nom) + &(&(&not_u * denom) * prev)) - &(out * denom);
            equations.push(f.normalize_mod(p));
        }
    }

    Ok(EquationSystem {
        equations,
        modulus: p,
        varmap,
        method,
        shift,
        lifted: false,
        linearized: false,
    })
}

/// Replaces each congruence F = 0 (mod p) by the integer equation
/// `F - p * (sum_j 2^j k_j) = 0` with fresh carry bits, sized so the carry
/// register covers `floor(hi / p)` where `hi` bounds F from above.
pub fn lift_integers(mut sys: EquationSystem) -> EquationSystem {
    assert!(!sys.lifted, "system already lifted");
    let p = sys.modulus as i128;
    for e in 0..sys.equations.len() {
        let (lo, hi) = sys.equations[e].value_bounds();
        debug_assert!(lo >= 0, "canonicalized coefficients are non-negative");
        let max_carry = (hi / p) as u64;
        let bits = 64 - max_carry.leading_zeros();
        for bit in 0..bits {
            let idx = sys.varmap.push(VariableRole::CarryBit {
                equation: e as u32,
                bit,
            });
            sys.equations[e].add_term(-(p << bit), Monomial::var(idx));
        }
    }
    sys.lifted = true;
    sys
}

/// Reduces every equation to degree <= 1 by repeatedly substituting the two
/// smallest indices of each higher-degree monomial with a cached product
/// variable. Returns the constraints that assembly must enforce.
pub fn linearize(mut sys: EquationSystem) -> (EquationSystem, Vec<SubstitutionConstraint>) {
    assert!(sys.lifted, "lift before linearizing");
    let mut cache: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut constraints = Vec::new();
    loop {
        let mut changed = false;
        for e in 0..sys.equations.len() {
            if sys.equations[e].max_degree() <= 1 {
                continue;
            }
            changed = true;
            let eq = std::mem::take(&mut sys.equations[e]);
            let mut out = MultilinearPoly::zero();
            for (mono, coeff) in eq.terms() {
                if mono.degree() >= 2 {
                    let x = mono.vars()[0];
                    let y = mono.vars()[1];
                    let z = match cache.get(&(x, y)) {
                        Some(&z) => z,
                        None => {
                            let z = sys.varmap.push(VariableRole::AuxProduct { left: x, right: y });
                            cache.insert((x, y), z);
                            constraints.push(SubstitutionConstraint { aux: z, left: x, right: y });
                            z
                        }
                    };
                    out.add_term(coeff, mono.substitute_pair(x, y, z));
                } else {
                    out.add_term(coeff, mono.clone());
                }
            }
            sys.equations[e] = out;
        }
        if !changed {
            break;
        }
    }
    sys.linearized = true;
    (sys, constraints)
}

/// Rosenberg penalty for `z = x*y`: non-negative on binaries, zero exactly
/// when the substitution is honest.
fn rosenberg_penalty(c: &SubstitutionConstraint) -> MultilinearPoly {
    let mut pen = MultilinearPoly::zero();
    pen.add_term(1, Monomial::new([c.left, c.right]));
    pen.add_term(-2, Monomial::new([c.left, c.aux]));
    pen.add_term(-2, Monomial::new([c.right, c.aux]));
    pen.add_term(3, Monomial::var(c.aux));
    pen
}

/// Sums the squares of the (linear) equations and adds `M` times each
/// substitution penalty, with `M = 1 + sum_e max(|lo_e|, |hi_e|)^2` so that
/// any penalty violation costs more than the objective could ever regain.
pub fn assemble_qubo(sys: &EquationSystem, constraints: &[SubstitutionConstraint]) -> QuboInstance {
    assert!(
        sys.equations.iter().all(|eq| eq.max_degree() <= 1),
        "equations must be linear before assembly"
    );
    let mut weight: i128 = 1;
    for eq in &sys.equations {
        let (lo, hi) = eq.value_bounds();
        let bound = lo.abs().max(hi.abs());
        weight = weight
            .checked_add(bound.checked_mul(bound).expect("penalty weight overflow"))
            .expect("penalty weight overflow");
    }

    let mut objective = MultilinearPoly::zero();
    for eq in &sys.equations {
        objective = &objective + &(eq * eq);
    }
    for c in constraints {
        objective = &objective + &rosenberg_penalty(c).scale(weight);
    }

    let mut qubo = QuboInstance::new(sys.varmap.len());
    for (mono, coeff) in objective.terms() {
        let coeff = i64::try_from(coeff).expect("QUBO coefficient overflow");
        match mono.vars() {
            [] => qubo.set_offset(coeff),
            [i] => qubo.add_linear(*i, coeff),
            [i, j] => qubo.add_quadratic(*i, *j, coeff),
            _ => unreachable!("objective has degree <= 2"),
        }
    }
    qubo
}

/// Everything produced by one reduction run.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub system: EquationSystem,
    pub constraints: Vec<SubstitutionConstraint>,
    pub qubo: QuboInstance,
}

/// Runs build, lift, linearize and assemble in sequence.
pub fn compile(inst: &EcdlpInstance, method: Method, shift: u64) -> Result<Compiled> {
    let sys = build_system(inst, method, shift)?;
    let sys = lift_integers(sys);
    let (system, constraints) = linearize(sys);
    let qubo = assemble_qubo(&system, &constraints);
    Ok(Compiled {
        system,
        constraints,
        qubo,
    })
}

/// Scalar register value that makes the chain reproduce `[y + shift]P`,
/// or an error when no encoding exists.
fn truth_scalar(shift: u64, y: u64, m: u32) -> Result<u64> {
    let target = y + shift;
    if target == 0 || target >= (1u64 << m) {
        return Err(Error::UnencodableChain(format!(
            "shifted scalar {} is outside [1, 2^{} - 1]",
            target, m
        )));
    }
    if target % 4 == 0 {
        // Both low bits clear: the first addition has no representable value.
        return Err(Error::UnencodableChain(format!(
            "shifted scalar {} is divisible by 4",
            target
        )));
    }
    Ok(target)
}

/// Constructs the ground-truth assignment for a known logarithm `y` from
/// classical arithmetic: scalar bits from the shifted scalar, point bits
/// from the classical partial sums, carries from the equation values, and
/// substitution variables from their defining products.
///
/// Every lifted equation evaluates to zero at the result, and every
/// substitution penalty vanishes.
pub fn encode_truth(
    inst: &EcdlpInstance,
    sys: &EquationSystem,
    constraints: &[SubstitutionConstraint],
    y: u64,
) -> Result<Assignment> {
    assert!(sys.lifted, "encode against the lifted system");
    let curve = inst.curve();
    let m = inst.scalar_bits();
    let p = sys.modulus;
    let val = truth_scalar(sys.shift, y, m)?;

    let powers = inst.power_points()?;
    let shift_point = curve.scalar_mul(sys.shift % inst.order(), &inst.base())?;
    let shifted_target = curve.add(&inst.target(), &shift_point)?;
    if shifted_target.is_infinity() {
        return Err(Error::ShiftedTargetAtInfinity {
            shift: sys.shift,
            classical: (inst.order() - sys.shift % inst.order()) % inst.order(),
        });
    }

    // Walk the chain classically, collecting the intermediate sums.
    let u = |bit: u32| (val >> bit) & 1;
    let mut cur = match (u(0), u(1)) {
        (0, 0) => match sys.method {
            // Unreachable: truth_scalar rejected multiples of 4.
            Method::FirstIdea => unreachable!("rejected by truth_scalar"),
            Method::SecondIdea => inst.base(),
        },
        (1, 0) => powers[0],
        (0, 1) => powers[1],
        (1, 1) => {
            let a = powers[0].coords().unwrap().0;
            let b = powers[1].coords().unwrap().0;
            if a == b {
                return Err(Error::UnencodableChain(
                    "first addition is a degenerate chord".into(),
                ));
            }
            curve.add(&powers[0], &powers[1])?
        }
        _ => unreachable!(),
    };
    // The unknown intermediate sums are the outputs of every addition
    // except the last; for m == 2 the single addition is the final one.
    let mut partial_sums = Vec::new();
    if m > 2 {
        partial_sums.push(cur);
    }
    for k in 2..m {
        if u(k) == 1 {
            let (cx, _) = cur.coords().ok_or_else(|| {
                Error::UnencodableChain(format!("partial sum before step {} is neutral", k))
            })?;
            let (px, _) = powers[k as usize].coords().unwrap();
            if cx == px {
                return Err(Error::UnencodableChain(format!(
                    "chord at step {} has equal x-coordinates",
                    k
                )));
            }
            cur = curve.add(&cur, &powers[k as usize])?;
            if cur.is_infinity() {
                return Err(Error::UnencodableChain(format!(
                    "partial sum after step {} is the neutral element",
                    k
                )));
            }
        }
        if k < m - 1 {
            partial_sums.push(cur);
        }
    }
    if cur != shifted_target {
        return Err(Error::UnencodableChain(
            "chain does not reach the shifted target; y does not solve the instance".into(),
        ));
    }

    let mut bits = vec![0u8; sys.varmap.len()];
    for (idx, role) in sys.varmap.roles().iter().enumerate() {
        match *role {
            VariableRole::ScalarBit { bit } => bits[idx] = u(bit) as u8,
            VariableRole::PointBit { point, coord, bit } => {
                let (x, y) = partial_sums[(point - 1) as usize]
                    .coords()
                    .expect("partial sums are finite");
                let value = match coord {
                    Coord::X => x.value(),
                    Coord::Y => y.value(),
                };
                bits[idx] = ((value >> bit) & 1) as u8;
            }
            // Filled below once the product variables are known.
            VariableRole::CarryBit { .. } | VariableRole::AuxProduct { .. } => {}
        }
    }
    // Substitution variables reference only scalar, point and earlier
    // substitution variables, so a single forward pass settles them.
    for c in constraints {
        bits[c.aux as usize] = bits[c.left as usize] * bits[c.right as usize];
    }
    // With carries still zero, each lifted equation evaluates to its
    // pre-lift value F; the carry register absorbs F / p.
    for (e, eq) in sys.equations.iter().enumerate() {
        let value = eq.evaluate(&bits)?;
        if value < 0 || value % p as i128 != 0 {
            return Err(Error::UnencodableChain(format!(
                "equation {} has residue {} at the truth assignment",
                e, value
            )));
        }
        let carry = (value / p as i128) as u64;
        for (idx, role) in sys.varmap.roles().iter().enumerate() {
            if let VariableRole::CarryBit { equation, bit } = *role {
                if equation as usize == e {
                    bits[idx] = ((carry >> bit) & 1) as u8;
                }
            }
        }
    }
    for (e, eq) in sys.equations.iter().enumerate() {
        let residue = eq.evaluate(&bits)?;
        if residue != 0 {
            return Err(Error::UnencodableChain(format!(
                "equation {} does not vanish at the truth assignment (carry overflow?)",
                e
            )));
        }
    }
    Ok(Assignment::new(bits))
}

/// Reads the scalar register out of an assignment and undoes the shift
/// (and, for the second strategy, the conditional extra base point), then
/// verifies the candidate classically against the original target.
pub fn decode(asg: &Assignment, sys: &EquationSystem, inst: &EcdlpInstance) -> DecodedSolution {
    assert_eq!(
        asg.len(),
        sys.varmap.len(),
        "assignment must cover every variable"
    );
    let mut val: u64 = 0;
    let mut scalar_bits = vec![0u8; inst.scalar_bits() as usize];
    let mut low_bits = (0u8, 0u8);
    for (idx, role) in sys.varmap.roles().iter().enumerate() {
        if let VariableRole::ScalarBit { bit } = *role {
            let b = asg.bit(idx);
            scalar_bits[bit as usize] = b;
            val |= (b as u64) << bit;
            if bit == 0 {
                low_bits.0 = b;
            } else if bit == 1 {
                low_bits.1 = b;
            }
        }
    }
    let order = inst.order() as i128;
    let raw = match sys.method {
        Method::FirstIdea => val as i128 - sys.shift as i128,
        Method::SecondIdea => {
            // The all-zero first addition contributes one extra base point.
            let correction = if low_bits == (0, 0) { 0 } else { 1 };
            val as i128 - correction - (sys.shift as i128 - 1)
        }
    };
    let y_candidate = raw.rem_euclid(order) as u64;
    let verified = inst
        .curve()
        .scalar_mul(y_candidate, &inst.base())
        .map(|point| point == inst.target())
        .unwrap_or(false);
    let residues: Vec<i128> = sys
        .equations
        .iter()
        .map(|eq| eq.evaluate(asg.bits()).expect("assignment covers varmap"))
        .collect();
    let energy = residues
        .iter()
        .map(|r| r.checked_mul(*r).expect("residue overflow"))
        .sum::<i128>();
    DecodedSolution {
        y_candidate,
        scalar_bits,
        verified,
        energy: i64::try_from(energy).expect("energy overflow"),
        residues,
    }
}

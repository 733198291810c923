//! QUBO data model, exact integer energy evaluation and exhaustive
//! ground-state enumeration.
//!
//! Energies are exact integers throughout; there is no floating point in the
//! objective, so ground-state equality tests are bit-exact and reproducible.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Default variable-count cap for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 28;
/// Default cap on the number of reported minima.
pub const DEFAULT_MAX_MINIMA: usize = 1024;

/// Upper-triangular QUBO with a constant offset:
/// `E(x) = offset + sum_i linear[i] x_i + sum_{i<j} quadratic[(i,j)] x_i x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboInstance {
    num_vars: usize,
    linear: BTreeMap<u32, i64>,
    quadratic: BTreeMap<(u32, u32), i64>,
    offset: i64,
}

/// A 0/1 vector over the QUBO variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<u8>,
}

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, index: usize) -> u8 {
        self.bits[index]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn set(&mut self, index: usize, value: u8) {
        debug_assert!(value <= 1);
        self.bits[index] = value;
    }

    pub fn flip(&mut self, index: usize) {
        self.bits[index] ^= 1;
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl QuboInstance {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: i64) {
        self.offset = offset;
    }

    /// Adds to a diagonal coefficient; zero results are dropped.
    pub fn add_linear(&mut self, i: u32, coeff: i64) {
        assert!((i as usize) < self.num_vars, "variable index out of range");
        let entry = self.linear.entry(i).or_insert(0);
        *entry = entry.checked_add(coeff).expect("linear coefficient overflow");
        if *entry == 0 {
            self.linear.remove(&i);
        }
    }

    /// Adds to an off-diagonal coefficient (any order); zero results are
    /// dropped, i == j is folded into the diagonal since x^2 = x.
    pub fn add_quadratic(&mut self, i: u32, j: u32, coeff: i64) {
        if i == j {
            self.add_linear(i, coeff);
            return;
        }
        let key = if i < j { (i, j) } else { (j, i) };
        assert!((key.1 as usize) < self.num_vars, "variable index out of range");
        let entry = self.quadratic.entry(key).or_insert(0);
        *entry = entry
            .checked_add(coeff)
            .expect("quadratic coefficient overflow");
        if *entry == 0 {
            self.quadratic.remove(&key);
        }
    }

    pub fn linear(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.linear.iter().map(|(&i, &c)| (i, c))
    }

    pub fn quadratic(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.quadratic.iter().map(|(&k, &c)| (k, c))
    }

    pub fn linear_coeff(&self, i: u32) -> i64 {
        self.linear.get(&i).copied().unwrap_or(0)
    }

    pub fn quadratic_coeff(&self, i: u32, j: u32) -> i64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.quadratic.get(&key).copied().unwrap_or(0)
    }

    pub fn num_linear_terms(&self) -> usize {
        self.linear.len()
    }

    pub fn num_quadratic_terms(&self) -> usize {
        self.quadratic.len()
    }

    /// Largest coefficient magnitude over diagonal and off-diagonal entries.
    pub fn max_abs_coeff(&self) -> i64 {
        self.linear
            .values()
            .chain(self.quadratic.values())
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
    }

    /// Exact energy at an assignment.
    pub fn energy(&self, asg: &Assignment) -> Result<i64> {
        if asg.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: asg.len(),
            });
        }
        let mut total = self.offset as i128;
        for (&i, &c) in &self.linear {
            if asg.bit(i as usize) == 1 {
                total += c as i128;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if asg.bit(i as usize) == 1 && asg.bit(j as usize) == 1 {
                total += c as i128;
            }
        }
        Ok(i64::try_from(total).expect("energy overflow"))
    }

    /// Neighbor lists for incremental single-flip evaluation: for each
    /// variable, the off-diagonal partners and coefficients touching it.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(u32, i64)>> {
        let mut adj = vec![Vec::new(); self.num_vars];
        for (&(i, j), &c) in &self.quadratic {
            adj[i as usize].push((j, c));
            adj[j as usize].push((i, c));
        }
        adj
    }

    /// Energy change from flipping variable `i` in `asg`.
    pub(crate) fn flip_delta(&self, asg: &Assignment, adj: &[Vec<(u32, i64)>], i: usize) -> i64 {
        let mut field = self.linear_coeff(i as u32);
        for &(j, c) in &adj[i] {
            if asg.bit(j as usize) == 1 {
                field += c;
            }
        }
        if asg.bit(i) == 1 {
            -field
        } else {
            field
        }
    }
}

/// Result of exhaustive enumeration: the exact global minimum and every
/// attaining assignment (up to `max_minima`, with truncation flagged).
#[derive(Debug, Clone)]
pub struct ExhaustiveResult {
    pub min_energy: i64,
    pub minima: Vec<Assignment>,
    pub truncated: bool,
}

/// Enumerates all 2^N assignments by a Gray-code walk with incremental
/// energy updates. Fails with `CapExceeded` when N exceeds `cap`.
pub fn solve_exhaustive(
    qubo: &QuboInstance,
    cap: u32,
    max_minima: usize,
) -> Result<ExhaustiveResult> {
    let n = qubo.num_vars();
    if n as u32 > cap {
        return Err(Error::CapExceeded(cap as u64));
    }
    let adj = qubo.adjacency();
    let mut current = Assignment::zeros(n);
    let mut energy = qubo.offset();
    let mut best = energy;
    let mut minima = vec![current.clone()];
    let mut truncated = false;

    let total: u64 = 1u64 << n;
    for k in 1..total {
        let flip = k.trailing_zeros() as usize;
        energy += qubo.flip_delta(&current, &adj, flip);
        current.flip(flip);
        if energy < best {
            best = energy;
            minima.clear();
            minima.push(current.clone());
            truncated = false;
        } else if energy == best {
            if minima.len() < max_minima {
                minima.push(current.clone());
            } else {
                truncated = true;
            }
        }
    }
    Ok(ExhaustiveResult {
        min_energy: best,
        minima,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 3-variable worked example: f = 3*x0 - 3*x2 + 5*x1*x2.
    pub(crate) fn three_var_example() -> QuboInstance {
        let mut q = QuboInstance::new(3);
        q.add_linear(0, 3);
        q.add_linear(2, -3);
        q.add_quadratic(1, 2, 5);
        q
    }

    #[test]
    fn energy_of_worked_example() {
        let q = three_var_example();
        assert_eq!(q.energy(&Assignment::new(vec![0, 0, 1])).unwrap(), -3);
        assert_eq!(q.energy(&Assignment::new(vec![1, 1, 1])).unwrap(), 5);
    }

    #[test]
    fn energy_of_empty_instance_is_offset() {
        let mut q = QuboInstance::new(0);
        q.set_offset(17);
        assert_eq!(q.energy(&Assignment::new(vec![])).unwrap(), 17);
    }

    #[test]
    fn energy_rejects_length_mismatch() {
        let q = three_var_example();
        assert!(matches!(
            q.energy(&Assignment::new(vec![0, 1])),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn exhaustive_finds_worked_example_minimum() {
        let q = three_var_example();
        let res = solve_exhaustive(&q, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAX_MINIMA).unwrap();
        assert_eq!(res.min_energy, -3);
        assert_eq!(res.minima, vec![Assignment::new(vec![0, 0, 1])]);
        assert!(!res.truncated);
    }

    #[test]
    fn exhaustive_all_zero_instance_truncates() {
        let mut q = QuboInstance::new(12);
        q.set_offset(4);
        let res = solve_exhaustive(&q, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAX_MINIMA).unwrap();
        assert_eq!(res.min_energy, 4);
        assert_eq!(res.minima.len(), DEFAULT_MAX_MINIMA);
        assert!(res.truncated);

        let small = QuboInstance::new(3);
        let res = solve_exhaustive(&small, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAX_MINIMA).unwrap();
        assert_eq!(res.minima.len(), 8);
        assert!(!res.truncated);
    }

    #[test]
    fn exhaustive_respects_cap() {
        let q = QuboInstance::new(30);
        assert!(matches!(
            solve_exhaustive(&q, 28, 16),
            Err(Error::CapExceeded(28))
        ));
    }

    #[test]
    fn incremental_deltas_match_full_recompute() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x0de17a);
        for _ in 0..100 {
            let n = rng.gen_range(1..=10);
            let mut q = QuboInstance::new(n);
            for i in 0..n as u32 {
                q.add_linear(i, rng.gen_range(-20..=20));
                for j in (i + 1)..n as u32 {
                    if rng.gen_bool(0.4) {
                        q.add_quadratic(i, j, rng.gen_range(-20..=20));
                    }
                }
            }
            let adj = q.adjacency();
            let mut asg = Assignment::new((0..n).map(|_| rng.gen_range(0..=1)).collect());
            let mut energy = q.energy(&asg).unwrap();
            for _ in 0..50 {
                let i = rng.gen_range(0..n);
                let delta = q.flip_delta(&asg, &adj, i);
                asg.flip(i);
                energy += delta;
                assert_eq!(energy, q.energy(&asg).unwrap());
            }
        }
    }
}

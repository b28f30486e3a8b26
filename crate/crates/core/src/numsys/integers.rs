//! Ordered enumeration of the free semigroup generated by the primes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use smallvec::SmallVec;

pub type FactorIndices = SmallVec<[u32; 8]>;

/// One generalized integer: a multiset of prime indices and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct GenInteger {
    /// Nearest `f64` to the product of the generating primes.
    pub value: f64,
    /// Rounding error of `value` (double-double companion).
    pub value_lo: f64,
    /// Prime indices, non-decreasing; empty for the unit.
    pub factors: FactorIndices,
    pub squarefree: bool,
}

impl GenInteger {
    pub fn one() -> Self {
        Self { value: 1.0, value_lo: 0.0, factors: FactorIndices::new(), squarefree: true }
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn mu(&self) -> i32 {
        if self.squarefree {
            self.lambda()
        } else {
            0
        }
    }

    pub fn lambda(&self) -> i32 {
        if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

#[inline]
fn dd_mul(hi: f64, lo: f64, p: f64) -> (f64, f64) {
    let h = hi * p;
    let err = hi.mul_add(p, -h);
    let l = err + lo * p;
    let s = h + l;
    (s, l - (s - h))
}

struct Entry {
    int: GenInteger,
    /// The integer this entry was derived from, i.e. `int` without its last factor.
    base_hi: f64,
    base_lo: f64,
    base_squarefree: bool,
}

impl Entry {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.int
            .value
            .total_cmp(&other.int.value)
            .then(self.int.value_lo.total_cmp(&other.int.value_lo))
            .then_with(|| self.int.factors.cmp(&other.int.factors))
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

/// Yields every generalized integer `≤ x` once per factorization, in
/// non-decreasing value order, ties broken by factor indices.
///
/// Each element `b·p_i` (with `i` its largest prime index) is reached from
/// `b·p_{i−1}` (sibling step) or, when `i` is the largest index of `b`, from
/// `b` itself (child step), so no element is pushed twice.
pub struct IntegerStream<'a> {
    primes: &'a [f64],
    x: f64,
    heap: BinaryHeap<Entry>,
    started: bool,
}

impl<'a> IntegerStream<'a> {
    pub fn new(primes: &'a [f64], x: f64) -> Self {
        Self { primes, x, heap: BinaryHeap::new(), started: false }
    }

    fn push(&mut self, base: &GenInteger, base_squarefree: bool, idx: usize) {
        let Some(&p) = self.primes.get(idx) else { return };
        let (hi, lo) = dd_mul(base.value, base.value_lo, p);
        if hi > self.x {
            return;
        }
        let mut factors = base.factors.clone();
        let repeat = factors.last() == Some(&(idx as u32));
        factors.push(idx as u32);
        let int = GenInteger { value: hi, value_lo: lo, factors, squarefree: base_squarefree && !repeat };
        self.heap.push(Entry { int, base_hi: base.value, base_lo: base.value_lo, base_squarefree });
    }
}

impl Iterator for IntegerStream<'_> {
    type Item = GenInteger;

    fn next(&mut self) -> Option<GenInteger> {
        if !self.started {
            self.started = true;
            if self.x < 1.0 {
                return None;
            }
            let one = GenInteger::one();
            self.push(&one, true, 0);
            return Some(one);
        }
        let e = self.heap.pop()?;
        let i = *e.int.factors.last().expect("non-unit entry") as usize;
        // sibling: base · p_{i+1}
        let mut base_factors = e.int.factors.clone();
        base_factors.pop();
        let base =
            GenInteger { value: e.base_hi, value_lo: e.base_lo, factors: base_factors, squarefree: e.base_squarefree };
        self.push(&base, e.base_squarefree, i + 1);
        // child: v · p_i
        self.push(&e.int, e.int.squarefree, i);
        Some(e.int)
    }
}

pub fn generate_integers(primes: &[f64], x: f64) -> IntegerStream<'_> {
    IntegerStream::new(primes, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(primes: &[f64], x: f64) -> Vec<f64> {
        generate_integers(primes, x).map(|g| g.value).collect()
    }

    #[test]
    fn two_and_three() {
        assert_eq!(values(&[2.0, 3.0], 10.0), vec![1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 9.0]);
        assert_eq!(values(&[2.0], 10.0), vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(values(&[2.0], 0.5), Vec::<f64>::new());
        assert_eq!(values(&[], 10.0), vec![1.0]);
    }

    #[test]
    fn mobius_and_liouville_flags() {
        let g: Vec<(f64, i32, i32)> =
            generate_integers(&[2.0, 3.0], 10.0).map(|g| (g.value, g.mu(), g.lambda())).collect();
        assert_eq!(
            g,
            vec![(1.0, 1, 1), (2.0, -1, -1), (3.0, -1, -1), (4.0, 0, 1), (6.0, 1, 1), (8.0, 0, -1), (9.0, 0, 1)]
        );
    }

    #[test]
    fn repeated_prime_values_are_distinct_factors() {
        // the multiset {2, 2}: 2·2' is squarefree, 2·2 is not
        let g: Vec<GenInteger> = generate_integers(&[2.0, 2.0], 4.0).collect();
        assert_eq!(g.len(), 6);
        let fours: Vec<(FactorIndices, bool)> =
            g.iter().filter(|g| g.value == 4.0).map(|g| (g.factors.clone(), g.squarefree)).collect();
        assert_eq!(fours.len(), 3);
        assert_eq!(fours[0].0.as_slice(), &[0, 0]);
        assert!(!fours[0].1);
        assert_eq!(fours[1].0.as_slice(), &[0, 1]);
        assert!(fours[1].1);
    }

    #[test]
    fn double_double_tracks_rounding() {
        let p = 1.1;
        let g: Vec<GenInteger> = generate_integers(&[p], 1.5).collect();
        let sq = &g[2];
        assert_eq!(sq.value, p * p);
        assert_eq!(sq.value_lo, p.mul_add(p, -(p * p)));
    }
}

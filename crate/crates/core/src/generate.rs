//! Instance generators: seeded random closure spaces and exhaustive enumeration
//! of all closure spaces on small universes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::{BitSet, Universe};
use crate::closure::{validate_closure_space, ClosureSpace};

/// Bounds for random closure spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceParams {
    pub max_points: usize,
    pub max_closed: usize,
}

impl Default for SpaceParams {
    fn default() -> Self {
        SpaceParams { max_points: 8, max_closed: 40 }
    }
}

fn space_from_masks(n: usize, masks: &[u64]) -> ClosureSpace {
    validate_closure_space(Universe::indexed("x", n), masks.iter().map(|&m| BitSet::from_mask(n, m)).collect())
        .expect("generated family is intersection closed")
}

/// Random subsets closed under intersection, with `∅` and `X` added.
fn random_masks<R: Rng>(rng: &mut R, n: usize, max_closed: usize) -> Vec<u64> {
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let mut family = vec![0, full];
    family.dedup();
    let target = rng.random_range(0..=max_closed.saturating_sub(2));
    let density: f64 = rng.random_range(0.2..0.8);
    for _ in 0..4 * max_closed {
        if family.len() >= target + 2 || n == 0 {
            break;
        }
        let s = (0..n).filter(|_| rng.random_bool(density)).fold(0u64, |m, i| m | 1 << i);
        let mut grown = family.clone();
        for &f in family.iter().chain(std::iter::once(&s)) {
            let t = f & s;
            if !grown.contains(&t) {
                grown.push(t);
            }
        }
        if !grown.contains(&s) {
            grown.push(s);
        }
        if grown.len() <= max_closed {
            family = grown;
        }
    }
    family
}

/// One random closure space within `params`. About a quarter are disjoint
/// unions of two smaller spaces, so that disconnected spaces with nontrivial
/// components are common.
pub fn random_closure_space<R: Rng>(rng: &mut R, params: SpaceParams) -> ClosureSpace {
    let n = rng.random_range(0..=params.max_points);
    if n >= 2 && rng.random_bool(0.25) {
        let n1 = rng.random_range(1..n);
        let n2 = n - n1;
        let f1 = random_masks(rng, n1, (params.max_closed / 4).max(2));
        let f2 = random_masks(rng, n2, (params.max_closed / f1.len()).max(2));
        let mut family: Vec<u64> = f1.iter().flat_map(|&a| f2.iter().map(move |&b| a | b << n1)).collect();
        family.sort_unstable();
        family.dedup();
        debug_assert!(family.len() <= params.max_closed);
        return space_from_masks(n, &family);
    }
    space_from_masks(n, &random_masks(rng, n, params.max_closed))
}

/// `count` random closure spaces from a ChaCha stream seeded with `seed`.
pub fn random_batch(seed: u64, count: usize, params: SpaceParams) -> Vec<ClosureSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_closure_space(&mut rng, params)).collect()
}

/// Every closure space on the points `x0..x{n-1}`: all intersection-closed
/// families containing `∅` and `X`. Limited to `n <= 4`.
pub fn all_closure_spaces(n: usize) -> Vec<ClosureSpace> {
    assert!(n <= 4, "exhaustive enumeration is limited to 4 points, got {n}");
    let full = (1u64 << n) - 1;
    let middle: Vec<u64> = (1..full).collect();
    let mut out = Vec::new();
    let mut family = Vec::with_capacity(1 << n);
    for choice in 0u64..1 << middle.len() {
        family.clear();
        family.push(0);
        family.extend(middle.iter().enumerate().filter(|(i, _)| choice >> i & 1 == 1).map(|(_, &m)| m));
        if full != 0 {
            family.push(full);
        }
        let closed = family.iter().all(|&a| family.iter().all(|&b| family.contains(&(a & b))));
        if closed {
            out.push(space_from_masks(n, &family));
        }
    }
    out
}

/// All closure spaces on at most `n` points, smallest universes first.
pub fn all_closure_spaces_up_to(n: usize) -> Vec<ClosureSpace> {
    (0..=n).flat_map(all_closure_spaces).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force count of intersection-closed families containing ∅ and X,
    /// written independently of the generator.
    fn count_moore_families(n: usize) -> usize {
        let subsets = 1usize << n;
        let full = subsets - 1;
        let mut count = 0;
        for fam in 0u64..1 << subsets {
            let has = |s: usize| fam >> s & 1 == 1;
            if !has(0) || !has(full) {
                continue;
            }
            if (0..subsets).all(|a| !has(a) || (0..subsets).all(|b| !has(b) || has(a & b))) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn exhaustive_counts() {
        let counts: Vec<usize> = (0..=3).map(|n| all_closure_spaces(n).len()).collect();
        let oracle: Vec<usize> = (0..=3).map(count_moore_families).collect();
        assert_eq!(counts, oracle);
        assert_eq!(counts, vec![1, 1, 4, 45]);
        assert_eq!(all_closure_spaces(4).len(), 2271);
        assert_eq!(all_closure_spaces_up_to(3).len(), 51);
    }

    #[test]
    fn random_spaces_respect_bounds_and_seed() {
        let params = SpaceParams::default();
        let a = random_batch(7, 300, params);
        assert_eq!(a, random_batch(7, 300, params));
        assert_ne!(a, random_batch(8, 300, params));
        for cs in &a {
            assert!(cs.len() <= 8);
            assert!(cs.closed().len() <= 40);
        }
        // the batch is not degenerate
        assert!(a.iter().any(|cs| cs.closed().len() > 10));
        assert!(a.iter().any(|cs| cs.len() == 8));
    }
}

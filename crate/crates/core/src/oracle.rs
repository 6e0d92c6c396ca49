//! Brute-force reference counts.
//!
//! Everything here enumerates tuples or subsets literally and shares no
//! code with the counting tables in [`crate::repfn`]. Inputs beyond the
//! guards are refused rather than truncated.

use itertools::Itertools;
use num_bigint::BigUint;

use crate::error::OracleError;
use crate::repfn::IntSet;
use crate::seqspec::SpecPair;

/// Largest number of tuples an oracle call will enumerate.
pub const TUPLE_GUARD: u128 = 10_000_000;
/// Largest `M` accepted by [`all_r_bases_naive`].
pub const SUBSET_GUARD: u64 = 24;

fn guard(set: &IntSet, h: u64) -> Result<(), OracleError> {
    let total = (set.len() as u128)
        .checked_pow(h.min(u32::MAX as u64) as u32)
        .unwrap_or(u128::MAX);
    if total > TUPLE_GUARD {
        Err(OracleError::TupleGuard(total))
    } else {
        Ok(())
    }
}

/// Counts nondecreasing `h`-tuples `a_1 ≤ … ≤ a_h` from `A` with sum `n`.
pub fn rep_unordered_naive(set: &IntSet, n: u64, h: u64) -> Result<BigUint, OracleError> {
    guard(set, h)?;
    let count = set
        .elements()
        .iter()
        .combinations_with_replacement(h as usize)
        .filter(|t| t.iter().copied().sum::<u64>() == n)
        .count();
    Ok(count.into())
}

/// Counts ordered `h`-tuples from `A^h` with sum `n`.
pub fn rep_ordered_naive(set: &IntSet, n: u64, h: u64) -> Result<BigUint, OracleError> {
    guard(set, h)?;
    let count = (0..h)
        .map(|_| set.elements().iter())
        .multi_cartesian_product()
        .filter(|t| t.iter().copied().sum::<u64>() == n)
        .count();
    Ok(count.into())
}

/// Every finite R-basis containing 0 with maximum at most `m`, sorted
/// lexicographically. Checks all `2^m` subsets of `[0, m]` containing 0.
pub fn all_r_bases_naive(pair: &SpecPair, m: u64) -> Result<Vec<IntSet>, OracleError> {
    if m > SUBSET_GUARD {
        return Err(OracleError::SubsetGuard(m));
    }
    let mut found = Vec::new();
    for mask in 0u32..(1 << m) {
        let elements: Vec<u64> = std::iter::once(0)
            .chain((1..=m).filter(|&x| mask & (1 << (x - 1)) != 0))
            .collect();
        let set = IntSet::new(elements).expect("sorted by construction");
        if is_r_basis_naive(&set, pair)? {
            found.push(set);
        }
    }
    found.sort();
    Ok(found)
}

/// R-membership on `[n0, max(A)]` using naive counting only.
pub fn is_r_basis_naive(set: &IntSet, pair: &SpecPair) -> Result<bool, OracleError> {
    let top = set.max_element().unwrap_or(0);
    for n in pair.start_index..=top {
        let mut total = BigUint::ZERO;
        for h in pair.h.eval(n).iter() {
            total += rep_unordered_naive(set, n, h)?;
        }
        let ok = u64::try_from(&total).is_ok_and(|t| pair.r.eval(n).contains(t));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

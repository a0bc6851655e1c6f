use num_integer::Integer;

use super::CycloNum;
use crate::error::{Error, Result};

/// Exact `Σ_{j∈J} ζ_m^j` for a multiset of residues `J`.
pub fn sum_roots(m: u32, residues: &[i64]) -> Result<CycloNum> {
    if m < 2 {
        return Err(Error::invalid(format!("root order must be at least 2, got {m}")));
    }
    let mut counts = vec![0i64; m as usize];
    for &j in residues {
        counts[j.rem_euclid(m as i64) as usize] += 1;
    }
    let poly = counts.into_iter().map(|c| super::Rat::from_integer(c.into())).collect();
    Ok(CycloNum::from_poly(m, poly))
}

/// Whether every sum of `size` distinct powers of a primitive `m`-th root of unity
/// is certainly nonzero: `gcd(size, m) = 1`, and `size ≤ 4` unless `m` is prime.
pub fn nonvanishing_guaranteed(m: u32, size: usize) -> bool {
    if m < 2 {
        return false;
    }
    size.gcd(&(m as usize)) == 1 && (is_prime(m) || size <= 4)
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_five_counterexample() {
        assert!(sum_roots(12, &[0, 3, 4, 8, 9]).unwrap().is_zero());
        assert!(!nonvanishing_guaranteed(12, 5));
    }

    #[test]
    fn full_orbit_vanishes() {
        for m in 2..=24 {
            let all: Vec<i64> = (0..m as i64).collect();
            assert!(sum_roots(m, &all).unwrap().is_zero(), "m = {m}");
        }
    }

    #[test]
    fn prime_case_nonzero() {
        assert!(!sum_roots(7, &[0, 2, 5]).unwrap().is_zero());
        assert!(nonvanishing_guaranteed(7, 3));
        assert!(!nonvanishing_guaranteed(12, 4));
        assert!(nonvanishing_guaranteed(4, 1));
        assert!(!nonvanishing_guaranteed(4, 0));
    }

    #[test]
    fn residues_are_reduced() {
        assert_eq!(sum_roots(5, &[7]).unwrap(), CycloNum::zeta_pow(5, 2));
        assert_eq!(sum_roots(5, &[-1]).unwrap(), CycloNum::zeta_pow(5, 4));
        assert!(sum_roots(1, &[0]).is_err());
    }

    /// Exhaustive over all subsets for m ≤ 12.
    #[test]
    fn guarantee_is_sound_exhaustively() {
        for m in 2u32..=12 {
            for mask in 0u32..(1 << m) {
                let subset: Vec<i64> = (0..m as i64).filter(|j| mask >> j & 1 == 1).collect();
                if nonvanishing_guaranteed(m, subset.len()) {
                    assert!(!sum_roots(m, &subset).unwrap().is_zero(), "m={m} J={subset:?}");
                }
            }
        }
    }
}

//! Restriction of an arrangement in `P^{n-1}` to a general plane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dot, rank2_flats, Arrangement, Hyperplane};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub struct SectionOptions {
    pub seed: u64,
    pub max_attempts: usize,
    /// Coefficient bound of the first random basis; grows with each retry.
    pub height: i64,
    /// Tried before any random basis (three vectors of length `n`).
    pub initial_basis: Option<Vec<Vec<CycloNum>>>,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions {
            seed: 0,
            max_attempts: 64,
            height: 3,
            initial_basis: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SectionResult {
    pub arrangement: Arrangement,
    /// Basis of the 3-dimensional subspace, in the original coordinates.
    pub basis: Vec<Vec<CycloNum>>,
    /// `flat_map[k]` is the index of the original flat matching flat `k` of the section.
    pub flat_map: Vec<usize>,
    pub attempts: usize,
}

fn restrict(arr: &Arrangement, basis: &[Vec<CycloNum>]) -> Result<Option<(Arrangement, Vec<usize>)>> {
    if Matrix::from_rows(arr.field_order(), arr.ambient_dim(), basis.to_vec())?.rank() != 3 {
        return Ok(None);
    }
    let hyperplanes: Vec<Hyperplane> = arr
        .hyperplanes()
        .iter()
        .map(|h| Hyperplane::new(basis.iter().map(|b| dot(&h.normal, b)).collect(), h.label.clone()))
        .collect();
    let Ok(line_arr) = Arrangement::new(3, arr.field_order(), hyperplanes) else {
        return Ok(None);
    };
    let original = rank2_flats(arr);
    let restricted = rank2_flats(&line_arr);
    if original.len() != restricted.len() {
        return Ok(None);
    }
    // Both lists are sorted by incident set, so a bijection preserving
    // incidences is the identity on positions.
    if original.iter().zip(&restricted).any(|(a, b)| a.incident != b.incident) {
        return Ok(None);
    }
    Ok(Some((line_arr, (0..original.len()).collect())))
}

/// Cuts an arrangement in `P^{n-1}`, `n > 3`, by a pseudo-random plane, retrying
/// until the induced line arrangement is reduced and has exactly the same
/// incidences between hyperplanes and rank-2 flats.
pub fn generic_section(arr: &Arrangement, opts: &SectionOptions) -> Result<SectionResult> {
    let n = arr.ambient_dim();
    if n <= 3 {
        return Err(Error::invalid("generic_section needs ambient dimension above 3"));
    }
    let order = arr.field_order();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut attempts = 0;
    if let Some(basis) = &opts.initial_basis {
        if basis.len() != 3 || basis.iter().any(|b| b.len() != n) {
            return Err(Error::invalid(format!(
                "initial basis must be three vectors of length {n}"
            )));
        }
        attempts += 1;
        if let Some((arrangement, flat_map)) = restrict(arr, basis)? {
            return Ok(SectionResult {
                arrangement,
                basis: basis.clone(),
                flat_map,
                attempts,
            });
        }
    }
    while attempts < opts.max_attempts {
        let h = opts.height.max(1) + attempts as i64;
        attempts += 1;
        let basis: Vec<Vec<CycloNum>> = (0..3)
            .map(|_| {
                (0..n)
                    .map(|_| CycloNum::from_int(order, rng.gen_range(-h..=h)))
                    .collect()
            })
            .collect();
        if let Some((arrangement, flat_map)) = restrict(arr, &basis)? {
            return Ok(SectionResult {
                arrangement,
                basis,
                flat_map,
                attempts,
            });
        }
    }
    Err(Error::Genericity(format!(
        "no generic plane section found in {attempts} attempts ({} hyperplanes, {} rank-2 flats)",
        arr.degree(),
        rank2_flats(arr).len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{census, generate, Family};

    fn q(n: i64) -> CycloNum {
        CycloNum::from_int(1, n)
    }

    #[test]
    fn coordinate_hyperplanes_in_p3() {
        let hs = (0..4)
            .map(|i| Hyperplane::new((0..4).map(|j| q((i == j) as i64)).collect(), ""))
            .collect();
        let a = Arrangement::new(4, 1, hs).unwrap();
        let s = generic_section(&a, &SectionOptions::default()).unwrap();
        assert_eq!(s.arrangement.degree(), 4);
        let flats = rank2_flats(&s.arrangement);
        assert_eq!(flats.len(), 6);
        assert!(flats.iter().all(|f| f.multiplicity() == 2));
    }

    #[test]
    fn braid_space_keeps_census() {
        let a = generate(&Family::BraidSpace, 0).unwrap();
        let before = census(&rank2_flats(&a));
        let s = generic_section(&a, &SectionOptions::default()).unwrap();
        let after = census(&rank2_flats(&s.arrangement));
        assert_eq!(before, after);
        assert_eq!(after.get(&3), Some(&4));
        assert_eq!(after.get(&2), Some(&3));
    }

    #[test]
    fn degenerate_start_is_retried() {
        let a = generate(&Family::BraidSpace, 0).unwrap();
        // This plane contains the line x0 = x1 = x2, so the three planes through it
        // collapse onto one line in the section.
        let basis = vec![
            vec![q(1), q(1), q(1), q(0)],
            vec![q(0), q(0), q(0), q(1)],
            vec![q(1), q(2), q(5), q(7)],
        ];
        let opts = SectionOptions {
            initial_basis: Some(basis.clone()),
            ..Default::default()
        };
        assert!(restrict(&a, &basis).unwrap().is_none());
        let s = generic_section(&a, &opts).unwrap();
        assert!(s.attempts >= 2);
        assert_eq!(census(&rank2_flats(&s.arrangement)), census(&rank2_flats(&a)));
    }

    #[test]
    fn rejects_planes() {
        let a = generate(&Family::Braid, 0).unwrap();
        assert!(generic_section(&a, &SectionOptions::default()).is_err());
    }
}

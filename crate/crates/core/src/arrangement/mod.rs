//! Reduced projective hyperplane arrangements with exact coefficients, their
//! rank-2 flats and multiplicity loci.

mod generate;
mod io;
mod pencil;
mod section;

use std::collections::{BTreeMap, HashSet};

use sha2::{Digest, Sha256};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::par::{self, Strategy};

pub use generate::{generate, Family, Remark26Params};
pub use io::{parse_arrangement, write_arrangement, write_canonical};
pub use pencil::{projection_genericity, random_point_on, PencilChart};
pub use section::{generic_section, SectionOptions, SectionResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<CycloNum>,
    pub label: String,
}

impl Hyperplane {
    pub fn new(normal: Vec<CycloNum>, label: impl Into<String>) -> Self {
        Hyperplane {
            normal,
            label: label.into(),
        }
    }

    /// Value of the defining linear form at a point.
    pub fn eval(&self, point: &[CycloNum]) -> CycloNum {
        dot(&self.normal, point)
    }
}

pub(crate) fn dot(a: &[CycloNum], b: &[CycloNum]) -> CycloNum {
    let order = a[0].order();
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(CycloNum::zero(order), |acc, (x, y)| &acc + &(x * y))
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub(crate) fn normalize_projective(v: &[CycloNum]) -> Vec<CycloNum> {
    let lead = v.iter().find(|c| !c.is_zero()).expect("zero vector");
    if lead.is_one() {
        return v.to_vec();
    }
    let inv = lead.inv().expect("nonzero lead");
    v.iter().map(|c| c * &inv).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ambient_dim: usize,
    field_order: u32,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(ambient_dim: usize, field_order: u32, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if ambient_dim < 3 {
            return Err(Error::invalid(format!(
                "ambient dimension must be at least 3, got {ambient_dim}"
            )));
        }
        if hyperplanes.len() < 3 {
            return Err(Error::invalid(format!(
                "need at least 3 hyperplanes, got {}",
                hyperplanes.len()
            )));
        }
        let mut seen = HashSet::new();
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != ambient_dim {
                return Err(Error::invalid(format!(
                    "hyperplane {i} has {} coefficients, expected {ambient_dim}",
                    h.normal.len()
                )));
            }
            if let Some(c) = h.normal.iter().find(|c| c.order() != field_order) {
                return Err(Error::OrderMismatch(field_order, c.order()));
            }
            if h.normal.iter().all(CycloNum::is_zero) {
                return Err(Error::invalid(format!("hyperplane {i} has zero normal")));
            }
            if !seen.insert(normalize_projective(&h.normal)) {
                return Err(Error::invalid(format!(
                    "hyperplane {i} is proportional to an earlier one (arrangement not reduced)"
                )));
            }
        }
        Ok(Arrangement {
            ambient_dim,
            field_order,
            hyperplanes,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn degree(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    pub fn is_line_arrangement(&self) -> bool {
        self.ambient_dim == 3
    }

    /// True when every coefficient is rational.
    pub fn is_real_rational(&self) -> bool {
        self.hyperplanes
            .iter()
            .all(|h| h.normal.iter().all(CycloNum::is_rational))
    }

    pub fn normals_matrix(&self) -> Matrix {
        let rows = self.hyperplanes.iter().map(|h| h.normal.clone()).collect();
        Matrix::from_rows(self.field_order, self.ambient_dim, rows).expect("validated arrangement")
    }

    /// Normals span the whole coordinate space.
    pub fn is_essential(&self) -> bool {
        self.normals_matrix().rank() == self.ambient_dim
    }

    /// Rank of the normals of the given hyperplanes (codimension of their intersection).
    pub fn rank_of(&self, indices: &[usize]) -> usize {
        if indices.is_empty() {
            return 0;
        }
        let rows = indices.iter().map(|&i| self.hyperplanes[i].normal.clone()).collect();
        Matrix::from_rows(self.field_order, self.ambient_dim, rows)
            .expect("validated arrangement")
            .rank()
    }

    /// New arrangement whose hyperplane `k` is the old hyperplane `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..self.degree()).collect::<Vec<_>>() {
            return Err(Error::invalid("not a permutation of the hyperplane indices"));
        }
        let hyperplanes = perm.iter().map(|&i| self.hyperplanes[i].clone()).collect();
        Arrangement::new(self.ambient_dim, self.field_order, hyperplanes)
    }

    /// SHA-256 of the order-preserving canonical serialization.
    pub fn content_hash(&self) -> String {
        let text = write_arrangement(self, true);
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// A codimension-2 flat: the subspace cut out by at least two hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat2 {
    /// Sorted indices of every hyperplane containing the flat; its length is the multiplicity.
    pub incident: Vec<usize>,
    /// Exact basis of the codim-2 linear subspace (a single point when `n = 3`).
    pub span_basis: Vec<Vec<CycloNum>>,
}

impl Flat2 {
    pub fn multiplicity(&self) -> usize {
        self.incident.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.incident.binary_search(&i).is_ok()
    }
}

/// Reduced echelon rows of the span of two independent vectors; a canonical key.
fn span_key(u: &[CycloNum], v: &[CycloNum]) -> Vec<Vec<CycloNum>> {
    let p = u.iter().position(|c| !c.is_zero()).expect("nonzero normal");
    let u1 = normalize_projective(u);
    let f = v[p].clone();
    let w: Vec<CycloNum> = v.iter().zip(&u1).map(|(b, a)| b - &(&f * a)).collect();
    let q = w.iter().position(|c| !c.is_zero()).expect("independent normals");
    let w1 = normalize_projective(&w);
    let g = u1[q].clone();
    let u2: Vec<CycloNum> = u1.iter().zip(&w1).map(|(a, b)| a - &(&g * b)).collect();
    if p < q {
        vec![u2, w1]
    } else {
        vec![w1, u2]
    }
}

pub fn rank2_flats(arr: &Arrangement) -> Vec<Flat2> {
    rank2_flats_with(arr, Strategy::default())
}

/// All rank-2 flats, grouping every pair of hyperplanes by its exact normal span.
/// Sorted by incident set.
pub fn rank2_flats_with(arr: &Arrangement, strategy: Strategy) -> Vec<Flat2> {
    let d = arr.degree();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let keys = par::map(strategy, &pairs, |&(i, j)| {
        span_key(&arr.hyperplanes[i].normal, &arr.hyperplanes[j].normal)
    });
    let mut groups: BTreeMap<Vec<Vec<CycloNum>>, Vec<usize>> = BTreeMap::new();
    for (key, &(i, j)) in keys.into_iter().zip(&pairs) {
        let entry = groups.entry(key).or_default();
        entry.push(i);
        entry.push(j);
    }
    let mut flats: Vec<Flat2> = groups
        .into_iter()
        .map(|(key, mut incident)| {
            incident.sort_unstable();
            incident.dedup();
            let m = Matrix::from_rows(arr.field_order, arr.ambient_dim, key).expect("key rows");
            Flat2 {
                incident,
                span_basis: m.nullspace(),
            }
        })
        .collect();
    flats.sort_by(|a, b| a.incident.cmp(&b.incident));
    flats
}

/// `table[i][j]` is the index of the flat containing hyperplanes `i` and `j`.
#[derive(Clone, Debug)]
pub struct PairTable {
    d: usize,
    cells: Vec<usize>,
}

impl PairTable {
    pub fn new(d: usize, flats: &[Flat2]) -> Self {
        let mut cells = vec![usize::MAX; d * d];
        for (k, f) in flats.iter().enumerate() {
            for &i in &f.incident {
                for &j in &f.incident {
                    if i != j {
                        cells[i * d + j] = k;
                    }
                }
            }
        }
        PairTable { d, cells }
    }

    pub fn flat_of(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.d + j]
    }
}

/// Split of the flats into those with multiplicity divisible by `m` and the rest (as indices).
pub fn multiplicity_partition(flats: &[Flat2], m: usize) -> (Vec<usize>, Vec<usize>) {
    (0..flats.len()).partition(|&k| flats[k].multiplicity().is_multiple_of(m))
}

/// Multiplicity → number of flats.
pub fn census(flats: &[Flat2]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for f in flats {
        *out.entry(f.multiplicity()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line(order: u32, c: [i64; 3]) -> Hyperplane {
        Hyperplane::new(c.iter().map(|&x| CycloNum::from_int(order, x)).collect(), "")
    }

    fn lines(cs: &[[i64; 3]]) -> Arrangement {
        Arrangement::new(3, 1, cs.iter().map(|&c| line(1, c)).collect()).unwrap()
    }

    #[test]
    fn generic_four_lines() {
        let a = lines(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
        let flats = rank2_flats(&a);
        assert_eq!(flats.len(), 6);
        assert!(flats.iter().all(|f| f.multiplicity() == 2));
        assert!(a.is_essential());
    }

    #[test]
    fn pencil_is_one_flat() {
        let a = lines(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 2, 0], [1, 3, 0]]);
        let flats = rank2_flats(&a);
        assert_eq!(flats.len(), 1);
        assert_eq!(flats[0].incident, vec![0, 1, 2, 3, 4]);
        assert_eq!(flats[0].span_basis.len(), 1);
        let (div, rest) = multiplicity_partition(&flats, 5);
        assert_eq!((div.len(), rest.len()), (1, 0));
        assert!(!a.is_essential());
    }

    #[test]
    fn concurrent_versus_triangle() {
        assert!(!lines(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]]).is_essential());
        assert!(lines(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_essential());
    }

    #[test]
    fn rejects_non_reduced() {
        let r = Arrangement::new(3, 1, vec![line(1, [1, 0, 0]), line(1, [2, 0, 0]), line(1, [0, 0, 1])]);
        assert!(r.is_err());
    }

    #[test]
    fn pair_table_lookup() {
        let a = lines(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]);
        let flats = rank2_flats(&a);
        let t = PairTable::new(4, &flats);
        assert_eq!(flats[t.flat_of(0, 2)].incident, vec![0, 1, 2]);
        assert_eq!(flats[t.flat_of(3, 1)].incident, vec![1, 3]);
    }

    #[test]
    fn span_basis_is_common_kernel() {
        let a = lines(&[[1, 0, -1], [0, 1, -1], [1, -1, 0], [0, 0, 1]]);
        for f in rank2_flats(&a) {
            for &i in &f.incident {
                for v in &f.span_basis {
                    assert!(a.hyperplane(i).eval(v).is_zero());
                }
            }
        }
    }
}

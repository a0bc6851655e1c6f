//! The pencil of lines through a point `P` of `L_d`, in affine coordinates.
//!
//! Points off `L_d` are written `Q0 + u·R + v·P` with `R, P` spanning `L_d`
//! and `ℓ_d(Q0) = 1`. The pencil member through `P` is `{u = const}` and each
//! other line `L_i` meets it at `v = a_i·u + b_i`.

use rand::Rng;

use super::{dot, rank2_flats, Arrangement, Flat2};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub struct PencilChart {
    pub removed: usize,
    pub center: Vec<CycloNum>,
    /// Remaining hyperplane indices in increasing order.
    pub lines: Vec<usize>,
    pub slopes: Vec<CycloNum>,
    pub intercepts: Vec<CycloNum>,
    /// Indices (into the flat list) of flats not containing `L_d`.
    pub flats_off: Vec<usize>,
    /// Pencil parameter of each flat in `flats_off`.
    pub singular_values: Vec<CycloNum>,
}

fn check_center(arr: &Arrangement, removed: usize, p: &[CycloNum]) -> Result<()> {
    if removed >= arr.degree() {
        return Err(Error::invalid(format!("removed index {removed} out of range")));
    }
    if p.len() != 3 || p.iter().all(CycloNum::is_zero) {
        return Err(Error::invalid("center must be a nonzero point of P^2"));
    }
    if !arr.hyperplane(removed).eval(p).is_zero() {
        return Err(Error::invalid("center is not on the removed line"));
    }
    if let Some(i) = (0..arr.degree()).find(|&i| i != removed && arr.hyperplane(i).eval(p).is_zero()) {
        return Err(Error::invalid(format!("center also lies on line {i}")));
    }
    Ok(())
}

impl PencilChart {
    pub fn new(arr: &Arrangement, flats: &[Flat2], removed: usize, center: &[CycloNum]) -> Result<Self> {
        if !arr.is_line_arrangement() {
            return Err(Error::invalid("pencil charts need a line arrangement"));
        }
        check_center(arr, removed, center)?;
        let order = arr.field_order();
        let ld = &arr.hyperplane(removed).normal;
        let kernel = Matrix::from_rows(order, 3, vec![ld.clone()])?.nullspace();
        let rank2 = |u: &[CycloNum]| {
            Matrix::from_rows(order, 3, vec![u.to_vec(), center.to_vec()])
                .expect("3 columns")
                .rank()
                == 2
        };
        let r = kernel
            .into_iter()
            .find(|u| rank2(u))
            .ok_or_else(|| Error::Invariant("no second point on removed line".into()))?;
        let k = ld.iter().position(|c| !c.is_zero()).expect("nonzero normal");
        let mut q0 = vec![CycloNum::zero(order); 3];
        q0[k] = ld[k].inv()?;

        let lines: Vec<usize> = (0..arr.degree()).filter(|&i| i != removed).collect();
        let mut slopes = Vec::with_capacity(lines.len());
        let mut intercepts = Vec::with_capacity(lines.len());
        for &i in &lines {
            let n = &arr.hyperplane(i).normal;
            let lp = dot(n, center).inv()?;
            slopes.push(-&(&dot(n, &r) * &lp));
            intercepts.push(-&(&dot(n, &q0) * &lp));
        }
        let pos = |i: usize| lines.binary_search(&i).expect("line present");
        let mut flats_off = Vec::new();
        let mut singular_values = Vec::new();
        for (fi, f) in flats.iter().enumerate() {
            if f.contains(removed) {
                continue;
            }
            let (i, j) = (pos(f.incident[0]), pos(f.incident[1]));
            let u = (&intercepts[j] - &intercepts[i]).try_div(&(&slopes[i] - &slopes[j]))?;
            flats_off.push(fi);
            singular_values.push(u);
        }
        Ok(PencilChart {
            removed,
            center: center.to_vec(),
            lines,
            slopes,
            intercepts,
            flats_off,
            singular_values,
        })
    }

    /// Singular points off `L_d` have pairwise distinct pencil parameters.
    pub fn is_generic(&self) -> bool {
        let mut vals = self.singular_values.clone();
        vals.sort();
        vals.windows(2).all(|w| w[0] != w[1])
    }

    /// Position in `lines` of hyperplane index `i`.
    pub fn position_of(&self, i: usize) -> Option<usize> {
        self.lines.binary_search(&i).ok()
    }
}

/// Whether projecting from `center ∈ L_d` separates all singular points off `L_d`.
pub fn projection_genericity(arr: &Arrangement, removed: usize, center: &[CycloNum]) -> Result<bool> {
    check_center(arr, removed, center)?;
    let flats = rank2_flats(arr);
    Ok(PencilChart::new(arr, &flats, removed, center)?.is_generic())
}

/// A pseudo-random point of `L_removed` avoiding every other line.
pub fn random_point_on<R: Rng>(arr: &Arrangement, removed: usize, rng: &mut R, height: i64) -> Result<Vec<CycloNum>> {
    let order = arr.field_order();
    let ld = &arr.hyperplane(removed).normal;
    let kernel = Matrix::from_rows(order, 3, vec![ld.clone()])?.nullspace();
    for _ in 0..256 {
        let s = rng.gen_range(-height..=height);
        let t = rng.gen_range(1..=height);
        let p: Vec<CycloNum> = (0..3)
            .map(|c| &kernel[0][c].scale(&crate::cyclo::rat(t, 1)) + &kernel[1][c].scale(&crate::cyclo::rat(s, 1)))
            .collect();
        if check_center(arr, removed, &p).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::Genericity(
        "could not find a point on the removed line avoiding the others".into(),
    ))
}

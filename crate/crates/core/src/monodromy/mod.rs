//! Eigenspace dimensions of the first Milnor fiber cohomology of a line
//! arrangement, as invariants of the monodromy of the rank-1 local system on
//! the fibers of a pencil projection.
//!
//! Coordinates `e_0..e_{n-1}` (`n = d - 1`) index the fiber points by position.
//! Matrices act on column vectors; column `j` holds the image of `e_j`. Every
//! matrix fixes `Σ e_i`, and dimensions are taken on the quotient by that vector.

mod diagram;
mod sweep;
mod track;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use diagram::{block_reversal, BraidedWiringDiagram, DiagramSource, Event, Step};
pub use sweep::sweep_real;
pub use track::{track_complex, TrackOptions};

use crate::arrangement::{random_point_on, rank2_flats, Arrangement, Flat2, PencilChart};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSpace};

/// The scalar `t` by which the deck transformation acts, a primitive `m`-th root of unity.
#[derive(Clone, Debug)]
pub struct EigenRep {
    m: u32,
    t: CycloNum,
}

impl EigenRep {
    /// `t = ζ_m^k` with `gcd(k, m) = 1`.
    pub fn new(m: u32, k: i64) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid("eigenvalue order must be at least 2"));
        }
        if num_integer::gcd(k.rem_euclid(m as i64), m as i64) != 1 {
            return Err(Error::invalid(format!("ζ_{m}^{k} is not primitive")));
        }
        Ok(EigenRep {
            m,
            t: CycloNum::zeta_pow(m, k),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> &CycloNum {
        &self.t
    }
}

/// Monodromy around a point where the strands at positions `start..start+q`
/// meet: `e_{start+i} ↦ t^q e_{start+i} + t^i (1 - t) Σ_j e_{start+j}`.
pub fn local_matrix(dim: usize, start: usize, q: usize, rep: &EigenRep) -> Matrix {
    assert!(start + q <= dim, "block out of range");
    let m = rep.m;
    let t = &rep.t;
    let one = CycloNum::one(m);
    let tq = t.pow(q as i64).expect("t is a unit");
    let mut out = Matrix::identity(dim, m);
    let mut ti = one.clone();
    let one_minus_t = &one - t;
    for i in 0..q {
        let coeff = &ti * &one_minus_t;
        for j in 0..q {
            let mut v = coeff.clone();
            if i == j {
                v = &v + &tq;
            }
            out.set(start + j, start + i, v);
        }
        ti = &ti * t;
    }
    out
}

/// Half-twist exchanging positions `pos` and `pos + 1`; `positive` is the
/// counterclockwise exchange. Squares to `local_matrix(dim, pos, 2, rep)`.
pub fn half_twist(dim: usize, pos: usize, positive: bool, rep: &EigenRep) -> Matrix {
    assert!(pos + 1 < dim, "half-twist position out of range");
    let m = rep.m;
    let t = &rep.t;
    let one = CycloNum::one(m);
    let mut out = Matrix::identity(dim, m);
    let (a, b, c, d) = if positive {
        (&one - t, t.clone(), one.clone(), CycloNum::zero(m))
    } else {
        let ti = t.inv().expect("unit");
        (CycloNum::zero(m), one.clone(), ti.clone(), &one - &ti)
    };
    out.set(pos, pos, a);
    out.set(pos, pos + 1, b);
    out.set(pos + 1, pos, c);
    out.set(pos + 1, pos + 1, d);
    out
}

/// `A ← T·A` for the half-twist `T` at `pos`: only rows `pos`, `pos+1` change.
fn twist_rows(a: &mut [Vec<CycloNum>], pos: usize, positive: bool, t: &CycloNum, t_inv: &CycloNum) {
    let r0 = a[pos].clone();
    let r1 = a[pos + 1].clone();
    let one = CycloNum::one(t.order());
    if positive {
        let s = &one - t;
        a[pos] = r0.iter().zip(&r1).map(|(x, y)| &(&s * x) + &(t * y)).collect();
        a[pos + 1] = r0;
    } else {
        let s = &one - t_inv;
        a[pos] = r1.clone();
        a[pos + 1] = r0.iter().zip(&r1).map(|(x, y)| &(t_inv * x) + &(&s * y)).collect();
    }
}

/// `C ← C·T⁻¹` for the half-twist `T` at `pos`: only columns `pos`, `pos+1` change.
fn twist_inverse_cols(c: &mut [Vec<CycloNum>], pos: usize, positive: bool, t: &CycloNum, t_inv: &CycloNum) {
    let one = CycloNum::one(t.order());
    for row in c.iter_mut() {
        let (x, y) = (row[pos].clone(), row[pos + 1].clone());
        if positive {
            // T⁻¹ = [[0, 1], [t⁻¹, 1 - t⁻¹]]
            row[pos] = t_inv * &y;
            row[pos + 1] = &x + &(&(&one - t_inv) * &y);
        } else {
            // (T⁻¹)⁻¹ = T = [[1 - t, t], [1, 0]]
            row[pos] = &(&(&one - t) * &x) + &y;
            row[pos + 1] = t * &x;
        }
    }
}

/// For each event, the transport `A` from basepoint coordinates to the fiber
/// just before the event, together with `A⁻¹`.
pub fn event_transports(diagram: &BraidedWiringDiagram, rep: &EigenRep) -> Vec<(Matrix, Matrix)> {
    let n = diagram.strands;
    let m = rep.m;
    let t = rep.t.clone();
    let t_inv = t.inv().expect("unit");
    let mut a = Matrix::identity(n, m).into_rows();
    let mut c = a.clone();
    let mut out = Vec::with_capacity(diagram.events.len());
    for step in diagram.steps() {
        match step {
            Step::Twist { pos, positive } => {
                twist_rows(&mut a, pos, positive, &t, &t_inv);
                twist_inverse_cols(&mut c, pos, positive, &t, &t_inv);
            }
            Step::Event(_) => out.push((
                Matrix::from_rows(m, n, a.clone()).expect("square"),
                Matrix::from_rows(m, n, c.clone()).expect("square"),
            )),
        }
    }
    out
}

/// `g_Q = A_Q⁻¹ · local_matrix(block_Q) · A_Q` for every event, in path order.
pub fn global_generators(diagram: &BraidedWiringDiagram, rep: &EigenRep) -> Vec<Matrix> {
    let n = diagram.strands;
    event_transports(diagram, rep)
        .into_iter()
        .zip(&diagram.events)
        .map(|((a, c), e)| c.mul(&local_matrix(n, e.start, e.size, rep)).mul(&a))
        .collect()
}

/// Dimension of the common fixed space of `gens` on `Q(ζ_m)^dim / ⟨Σ e_i⟩`.
pub fn invariant_dim(gens: &[Matrix], dim: usize, rep: &EigenRep) -> Result<usize> {
    if dim < 2 {
        return Err(Error::invalid("need at least two strands"));
    }
    let m = rep.m;
    let ones = vec![CycloNum::one(m); dim];
    let qdim = dim - 1;
    let mut space = RowSpace::new(m, qdim);
    for (k, g) in gens.iter().enumerate() {
        if g.nrows() != dim || g.ncols() != dim || g.order() != m {
            return Err(Error::invalid(format!("generator {k} has the wrong shape or field")));
        }
        if g.mul_vec(&ones) != ones {
            return Err(Error::Invariant(format!(
                "generator {k} does not fix the sum of basis vectors"
            )));
        }
        // Induced map on the quotient in the basis ē_0..ē_{dim-2}, with e_{dim-1} ≡ -Σ ē_i.
        let last = g.row(dim - 1);
        for i in 0..qdim {
            let row: Vec<CycloNum> = (0..qdim)
                .map(|j| {
                    let mut v = g.get(i, j) - &last[j];
                    if i == j {
                        v = &v - &CycloNum::one(m);
                    }
                    v
                })
                .collect();
            space.insert(&row);
            if space.is_full() {
                return Ok(0);
            }
        }
    }
    Ok(qdim - space.rank())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramRoute {
    /// Real sweep for real input, tracking otherwise.
    #[default]
    Auto,
    Real,
    Tracked,
}

#[derive(Clone, Debug)]
pub struct MilnorOptions {
    /// Line playing the role of `L_d`; defaults to the last one.
    pub removed: Option<usize>,
    /// Explicit pencil center on the removed line.
    pub center: Option<Vec<CycloNum>>,
    pub seed: u64,
    pub route: DiagramRoute,
    /// Exponent `k` in `t = ζ_m^k`.
    pub power: i64,
    pub flip: bool,
    pub max_center_attempts: usize,
}

impl Default for MilnorOptions {
    fn default() -> Self {
        MilnorOptions {
            removed: None,
            center: None,
            seed: 0,
            route: DiagramRoute::Auto,
            power: -1,
            flip: false,
            max_center_attempts: 24,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MilnorResult {
    pub m: u32,
    pub dim: usize,
    /// `None` when `m ∤ d` and no diagram was needed.
    pub diagram: Option<BraidedWiringDiagram>,
    pub center_attempts: usize,
}

fn diagram_for(
    arr: &Arrangement,
    flats: &[Flat2],
    removed: usize,
    center: &[CycloNum],
    opts: &MilnorOptions,
) -> Result<BraidedWiringDiagram> {
    let real = arr.is_real_rational() && center.iter().all(CycloNum::is_rational);
    match opts.route {
        DiagramRoute::Real => sweep_real(arr, flats, removed, center, opts.flip),
        DiagramRoute::Auto if real => sweep_real(arr, flats, removed, center, opts.flip),
        _ => track_complex(
            arr,
            flats,
            removed,
            center,
            &TrackOptions {
                flip: opts.flip,
                ..Default::default()
            },
        ),
    }
}

/// Builds a diagram for `arr`, searching for a generic pencil center from the seed.
pub fn build_diagram(
    arr: &Arrangement,
    flats: &[Flat2],
    opts: &MilnorOptions,
) -> Result<(BraidedWiringDiagram, usize)> {
    if !arr.is_line_arrangement() {
        return Err(Error::invalid(
            "monodromy needs a line arrangement; take a generic section first",
        ));
    }
    let removed = opts.removed.unwrap_or(arr.degree() - 1);
    if removed >= arr.degree() {
        return Err(Error::invalid(format!("removed line {removed} out of range")));
    }
    if let Some(p) = &opts.center {
        return Ok((diagram_for(arr, flats, removed, p, opts)?, 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last_err = None;
    for attempt in 0..opts.max_center_attempts {
        let p = random_point_on(arr, removed, &mut rng, 8 + 4 * attempt as i64)?;
        if !PencilChart::new(arr, flats, removed, &p)?.is_generic() {
            continue;
        }
        match diagram_for(arr, flats, removed, &p, opts) {
            Ok(d) => return Ok((d, attempt + 1)),
            Err(e @ Error::Genericity(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Genericity("no generic pencil center found".into())))
}

/// `dim H¹(F, C)_λ` for `λ` of order `m`.
pub fn milnor_dim(arr: &Arrangement, m: u32, opts: &MilnorOptions) -> Result<MilnorResult> {
    let rep = EigenRep::new(m, opts.power)?;
    if !arr.degree().is_multiple_of(m as usize) {
        return Ok(MilnorResult {
            m,
            dim: 0,
            diagram: None,
            center_attempts: 0,
        });
    }
    let flats = rank2_flats(arr);
    let (diagram, attempts) = build_diagram(arr, &flats, opts)?;
    let gens = global_generators(&diagram, &rep);
    let dim = invariant_dim(&gens, diagram.strands, &rep)?;
    Ok(MilnorResult {
        m,
        dim,
        diagram: Some(diagram),
        center_attempts: attempts,
    })
}

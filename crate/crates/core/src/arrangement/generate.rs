//! Families of arrangements used as test subjects. Each generator recomputes
//! the flat census of what it built and rejects (or regenerates) on mismatch.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{census, rank2_flats, Arrangement, Hyperplane};
use crate::cyclo::{rat, CycloNum, Rat};
use crate::error::{Error, Result};

/// Parameters of the 40- and 112-line families built from sums `a_i + b_j`.
/// Unset values are drawn from the seed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Remark26Params {
    pub a: Option<[Rat; 4]>,
    pub b: Option<[Rat; 4]>,
    pub c: Option<Rat>,
    pub c_prime: Option<Rat>,
}

impl Remark26Params {
    fn is_fixed(&self, with_prime: bool) -> bool {
        self.a.is_some() && self.b.is_some() && self.c.is_some() && (!with_prime || self.c_prime.is_some())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `xyz ∏ (ζ^i x + ζ^j y + z)` over `Q(ζ_b)`, degree `b² + 3`.
    Hessian { b: u32 },
    /// Two lines and the `a(m-1)²` lines joining chosen points on them.
    Remark26i { m: usize, a: usize },
    /// 36 lines `y = (a_i - b_j + kc)x + (a_i + b_j)z`, three lines `x = lz`, and `z = 0`.
    Remark26ii(Remark26Params),
    /// As above with an extra `k'c'` in the constant term: 108 + 4 lines.
    Remark26iii(Remark26Params),
    /// Lines in general position (only double points).
    Generic { d: usize },
    /// Lines with small integer coefficients; typically has multiple points.
    RandomReal { d: usize },
    /// `x, y, z, x-y, x-z, y-z`.
    Braid,
    /// The six planes `x_i - x_j` in `P^3`.
    BraidSpace,
}

const MAX_TRIES: usize = 200;

fn line(cs: [CycloNum; 3], label: String) -> Hyperplane {
    Hyperplane::new(cs.to_vec(), label)
}

fn ints(order: u32, cs: [i64; 3], label: &str) -> Hyperplane {
    Hyperplane::new(cs.iter().map(|&c| CycloNum::from_int(order, c)).collect(), label)
}

fn q(r: &Rat) -> CycloNum {
    CycloNum::from_rat(1, r.clone())
}

pub fn generate(family: &Family, seed: u64) -> Result<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Hessian { b } => hessian(*b),
        Family::Remark26i { m, a } => retry(|| remark26i(*m, *a, &mut rng)),
        Family::Remark26ii(p) => remark26(p, false, &mut rng),
        Family::Remark26iii(p) => remark26(p, true, &mut rng),
        Family::Generic { d } => retry(|| generic(*d, &mut rng)),
        Family::RandomReal { d } => retry(|| random_real(*d, &mut rng)),
        Family::Braid => braid(),
        Family::BraidSpace => braid_space(),
    }
}

/// Runs `attempt` until it yields an arrangement; `Ok(None)` means "resample".
fn retry(mut attempt: impl FnMut() -> Result<Option<Arrangement>>) -> Result<Arrangement> {
    for _ in 0..MAX_TRIES {
        if let Some(a) = attempt()? {
            return Ok(a);
        }
    }
    Err(Error::Genericity(format!("no valid sample in {MAX_TRIES} attempts")))
}

fn hessian(b: u32) -> Result<Arrangement> {
    if b < 2 {
        return Err(Error::invalid("hessian needs b >= 2"));
    }
    let mut hs = vec![
        ints(b, [1, 0, 0], "x"),
        ints(b, [0, 1, 0], "y"),
        ints(b, [0, 0, 1], "z"),
    ];
    for i in 0..b {
        for j in 0..b {
            hs.push(line(
                [
                    CycloNum::zeta_pow(b, i as i64),
                    CycloNum::zeta_pow(b, j as i64),
                    CycloNum::one(b),
                ],
                format!("h{i}_{j}"),
            ));
        }
    }
    let arr = Arrangement::new(3, b, hs)?;
    let flats = rank2_flats(&arr);
    let big = b as usize + 1;
    let ok = flats.iter().all(|f| {
        if f.multiplicity() == big {
            f.incident[0] <= 2 && f.incident[1] > 2
        } else {
            f.multiplicity() == 2
        }
    }) && flats.iter().filter(|f| f.multiplicity() == big).count() == 3 * b as usize;
    if !ok {
        return Err(Error::Invariant(format!("hessian({b}) census {:?}", census(&flats))));
    }
    Ok(arr)
}

fn distinct_ints<R: Rng>(rng: &mut R, count: usize, bound: i64, forbid: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(count);
    while out.len() < count {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 && !out.contains(&v) && !forbid.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn remark26i<R: Rng>(m: usize, a: usize, rng: &mut R) -> Result<Option<Arrangement>> {
    if m < 3 || a < 1 {
        return Err(Error::invalid("remark26i needs m >= 3 and a >= 1"));
    }
    let k = a * (m - 1);
    let bound = 4 * k as i64 + 8;
    let ps = distinct_ints(rng, k, bound, &[]);
    let qs = distinct_ints(rng, k, bound, &[]);
    // L1: y = 0 carries the points (p, 0); L2: x = 0 carries (0, q).
    let mut hs = vec![ints(1, [0, 1, 0], "L1"), ints(1, [1, 0, 0], "L2")];
    for i in 0..a {
        for j in 0..m - 1 {
            for jp in 0..m - 1 {
                let (p, qv) = (ps[i * (m - 1) + j], qs[i * (m - 1) + jp]);
                hs.push(ints(1, [qv, p, -p * qv], &format!("L{}.{}.{}", i + 1, j + 1, jp + 1)));
            }
        }
    }
    let Ok(arr) = Arrangement::new(3, 1, hs) else {
        return Ok(None);
    };
    let flats = rank2_flats(&arr);
    let ok = flats.iter().all(|f| match f.multiplicity() {
        2 => true,
        v if v == m => f.contains(0) || f.contains(1),
        _ => false,
    });
    let expected = 2 * k;
    let big = flats.iter().filter(|f| f.multiplicity() == m).count();
    Ok((ok && big == expected).then_some(arr))
}

fn remark26(p: &Remark26Params, with_prime: bool, rng: &mut ChaCha8Rng) -> Result<Arrangement> {
    let fixed = p.is_fixed(with_prime);
    let tries = if fixed { 1 } else { MAX_TRIES };
    let mut last = None;
    for _ in 0..tries {
        let a = p.a.clone().unwrap_or_else(|| {
            let v = distinct_ints(rng, 4, 40, &[]);
            [rat(v[0], 1), rat(v[1], 1), rat(v[2], 1), rat(v[3], 1)]
        });
        let b = p.b.clone().unwrap_or_else(|| {
            let v = distinct_ints(rng, 4, 40, &[]);
            [rat(v[0], 7), rat(v[1], 7), rat(v[2], 7), rat(v[3], 7)]
        });
        let c = p.c.clone().unwrap_or_else(|| rat(1, rng.gen_range(50..=100)));
        let cp = p.c_prime.clone().unwrap_or_else(|| rat(rng.gen_range(1000..=2000), 1));
        let arr = remark26_lines(&a, &b, &c, with_prime.then_some(&cp))?;
        let got = census(&rank2_flats(&arr));
        // With the `k'c'` shift, each `(i, j)` grid of nine lines has two
        // diagonals `k = ±k'` meeting at `x = ∓c'/c`: 24 triple points that no
        // choice of parameters avoids.
        let want: BTreeMap<usize, usize> = if with_prime {
            [(2, 5274), (3, 24), (4, 145)].into()
        } else {
            [(2, 558), (4, 37)].into()
        };
        if got == want {
            return Ok(arr);
        }
        last = Some(got);
    }
    Err(Error::Genericity(format!(
        "parameters do not give the intended flat census (last census {:?})",
        last.unwrap_or_default()
    )))
}

#[allow(clippy::needless_range_loop)]
fn remark26_lines(a: &[Rat; 4], b: &[Rat; 4], c: &Rat, c_prime: Option<&Rat>) -> Result<Arrangement> {
    let signs = ['-', '0', '+'];
    let ks: &[i64] = &[-1, 0, 1];
    let kps: &[i64] = if c_prime.is_some() { &[-1, 0, 1] } else { &[0] };
    let mut hs = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            for &k in ks {
                for &kp in kps {
                    let slope = &a[i] - &b[j] + c * rat(k, 1);
                    let mut constant = &a[i] + &b[j];
                    let mut label = format!("L{}{}{}", i + 1, j + 1, signs[(k + 1) as usize]);
                    if let Some(cp) = c_prime {
                        constant += cp * rat(kp, 1);
                        label.push(signs[(kp + 1) as usize]);
                    }
                    // y = slope·x + constant·z
                    hs.push(Hyperplane::new(vec![q(&slope), q(&rat(-1, 1)), q(&constant)], label));
                }
            }
        }
    }
    for (l, name) in [(-1, "V-"), (0, "V0"), (1, "V+")] {
        hs.push(ints(1, [1, 0, -l], name));
    }
    hs.push(ints(1, [0, 0, 1], "Linf"));
    Arrangement::new(3, 1, hs)
}

fn generic<R: Rng>(d: usize, rng: &mut R) -> Result<Option<Arrangement>> {
    if d < 3 {
        return Err(Error::invalid("generic needs d >= 3"));
    }
    let h = 4 * d as i64;
    let hs = (0..d)
        .map(|i| {
            ints(
                1,
                [rng.gen_range(-h..=h), rng.gen_range(-h..=h), rng.gen_range(-h..=h)],
                &format!("g{i}"),
            )
        })
        .collect::<Vec<_>>();
    if hs.iter().any(|h| h.normal.iter().all(CycloNum::is_zero)) {
        return Ok(None);
    }
    let Ok(arr) = Arrangement::new(3, 1, hs) else {
        return Ok(None);
    };
    Ok(rank2_flats(&arr).iter().all(|f| f.multiplicity() == 2).then_some(arr))
}

fn random_real<R: Rng>(d: usize, rng: &mut R) -> Result<Option<Arrangement>> {
    if d < 3 {
        return Err(Error::invalid("random_real needs d >= 3"));
    }
    let hs = (0..d)
        .map(|i| {
            ints(
                1,
                [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
                &format!("r{i}"),
            )
        })
        .collect::<Vec<_>>();
    if hs.iter().any(|h| h.normal.iter().all(CycloNum::is_zero)) {
        return Ok(None);
    }
    let Ok(arr) = Arrangement::new(3, 1, hs) else {
        return Ok(None);
    };
    Ok(arr.is_essential().then_some(arr))
}

fn braid() -> Result<Arrangement> {
    Arrangement::new(
        3,
        1,
        vec![
            ints(1, [1, 0, 0], "x"),
            ints(1, [0, 1, 0], "y"),
            ints(1, [0, 0, 1], "z"),
            ints(1, [1, -1, 0], "x-y"),
            ints(1, [1, 0, -1], "x-z"),
            ints(1, [0, 1, -1], "y-z"),
        ],
    )
}

fn braid_space() -> Result<Arrangement> {
    let mut hs = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let normal = (0..4)
                .map(|k| CycloNum::from_int(1, (k == i) as i64 - (k == j) as i64))
                .collect();
            hs.push(Hyperplane::new(normal, format!("x{i}-x{j}")));
        }
    }
    Arrangement::new(4, 1, hs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs_check(arr: &Arrangement) {
        let d = arr.degree();
        let total: usize = rank2_flats(arr)
            .iter()
            .map(|f| f.multiplicity() * (f.multiplicity() - 1) / 2)
            .sum();
        assert_eq!(total, d * (d - 1) / 2);
    }

    #[test]
    fn hessian_census() {
        for b in [2u32, 3] {
            let a = generate(&Family::Hessian { b }, 0).unwrap();
            assert_eq!(a.degree(), (b * b + 3) as usize);
            pairs_check(&a);
        }
        let c = census(&rank2_flats(&generate(&Family::Hessian { b: 3 }, 0).unwrap()));
        assert_eq!(c, [(2, 12), (4, 9)].into());
    }

    #[test]
    fn remark26i_small() {
        let a = generate(&Family::Remark26i { m: 3, a: 1 }, 5).unwrap();
        assert_eq!(a.degree(), 6);
        pairs_check(&a);
        let a = generate(&Family::Remark26i { m: 4, a: 2 }, 5).unwrap();
        assert_eq!(a.degree(), 20);
    }

    #[test]
    fn remark26ii_default() {
        let a = generate(&Family::Remark26ii(Remark26Params::default()), 0).unwrap();
        assert_eq!(a.degree(), 40);
        assert_eq!(a.hyperplane(39).label, "Linf");
    }

    #[test]
    fn remark26iii_default() {
        let a = generate(&Family::Remark26iii(Remark26Params::default()), 0).unwrap();
        assert_eq!(a.degree(), 112);
        assert_eq!(a.hyperplane(111).label, "Linf");
    }

    #[test]
    fn braid_families() {
        let c = census(&rank2_flats(&generate(&Family::Braid, 0).unwrap()));
        assert_eq!(c, [(2, 3), (3, 4)].into());
        let s = generate(&Family::BraidSpace, 0).unwrap();
        assert!(!s.is_essential());
        assert_eq!(census(&rank2_flats(&s)), [(2, 3), (3, 4)].into());
    }

    #[test]
    fn generic_and_random() {
        let g = generate(&Family::Generic { d: 7 }, 1).unwrap();
        assert!(rank2_flats(&g).iter().all(|f| f.multiplicity() == 2));
        let r = generate(&Family::RandomReal { d: 8 }, 1).unwrap();
        assert!(r.is_real_rational() && r.is_essential());
        pairs_check(&r);
    }

    #[test]
    fn fixed_bad_parameters_error() {
        let z = rat(0, 1);
        let p = Remark26Params {
            a: Some([z.clone(), z.clone(), z.clone(), z.clone()]),
            b: Some([rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1)]),
            c: Some(rat(1, 100)),
            c_prime: None,
        };
        assert!(generate(&Family::Remark26ii(p), 0).is_err());
    }
}

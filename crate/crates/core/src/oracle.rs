//! Group presentations of line arrangement complements read off a braided
//! wiring diagram, and rank-1 twisted cohomology by Fox calculus.
//!
//! This route shares only the diagram with [`crate::monodromy`]: relators are
//! built by substituting words, not by composing matrices.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::arrangement::Flat2;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::monodromy::{BraidedWiringDiagram, Step};

/// A word in the free group; letter `±(i+1)` is generator `i` or its inverse.
pub type Word = Vec<i32>;

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

/// Concatenation with free reduction at the seams.
pub fn concat(parts: &[&[i32]]) -> Word {
    let mut out: Word = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
    for part in parts {
        for &l in *part {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
    }
    out
}

fn cyclically_reduce(w: &[i32]) -> Word {
    let mut w = concat(&[w]);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    /// Degree of the arrangement; the generators are meridians of the other `d - 1` lines.
    pub degree: usize,
    pub generators: usize,
    /// `generator_lines[i]` is the line whose meridian is generator `i`.
    pub generator_lines: Vec<usize>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Every relator has zero exponent sum in every generator.
    pub fn abelianization_is_free(&self) -> bool {
        self.relators.iter().all(|r| {
            let mut sums = vec![0i64; self.generators];
            for &l in r {
                sums[l.unsigned_abs() as usize - 1] += l.signum() as i64;
            }
            sums.iter().all(|&s| s == 0)
        })
    }

    /// Free and cyclic reduction, dropping trivial and repeated relators.
    pub fn cleaned(&self) -> Presentation {
        let mut seen = HashSet::new();
        let mut relators = Vec::new();
        for r in &self.relators {
            let c = cyclically_reduce(r);
            if c.is_empty() {
                continue;
            }
            let inv = inverse(&c);
            if seen.contains(&c) || seen.contains(&inv) {
                continue;
            }
            seen.insert(c.clone());
            relators.push(c);
        }
        Presentation {
            relators,
            ..self.clone()
        }
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Plain text: one header line of generators, then one relator per line,
    /// `x1*x2*x1^-1*x2^-1` style.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let gens: Vec<String> = (1..=self.generators).map(|i| format!("x{i}")).collect();
        writeln!(out, "generators: {}", gens.join(" ")).unwrap();
        let lines: Vec<String> = self.generator_lines.iter().map(|l| l.to_string()).collect();
        writeln!(out, "lines: {}", lines.join(" ")).unwrap();
        writeln!(out, "relators: {}", self.relators.len()).unwrap();
        for r in &self.relators {
            let letters: Vec<String> = r
                .iter()
                .map(|&l| if l > 0 { format!("x{l}") } else { format!("x{}^-1", -l) })
                .collect();
            writeln!(
                out,
                "{}",
                if letters.is_empty() {
                    "1".to_string()
                } else {
                    letters.join("*")
                }
            )
            .unwrap();
        }
        out
    }
}

/// Images `I_k(s_j)` of the fiber generators just before each event, as words in
/// the basepoint generators; a counterclockwise exchange at `p` substitutes
/// `s_p ↦ s_p⁻¹ s_{p+1} s_p`, `s_{p+1} ↦ s_p`.
pub fn word_images(diagram: &BraidedWiringDiagram) -> Vec<Vec<Word>> {
    let n = diagram.strands;
    let mut images: Vec<Word> = (1..=n as i32).map(|i| vec![i]).collect();
    let mut out = Vec::with_capacity(diagram.events.len());
    for step in diagram.steps() {
        match step {
            Step::Twist { pos, positive } => {
                let (a, b) = (images[pos].clone(), images[pos + 1].clone());
                if positive {
                    images[pos] = concat(&[&inverse(&a), &b, &a]);
                    images[pos + 1] = a;
                } else {
                    images[pos + 1] = concat(&[&b, &a, &inverse(&b)]);
                    images[pos] = b;
                }
            }
            Step::Event(_) => out.push(images.clone()),
        }
    }
    out
}

/// Zariski–van Kampen presentation: for each event the product `D = y_{q-1}⋯y_0`
/// of the block's meridians (as words in basepoint generators) commutes with
/// every `y_j`, written as `q - 1` equalities of consecutive cyclic rotations of `D`.
pub fn presentation_from_diagram(diagram: &BraidedWiringDiagram) -> Result<Presentation> {
    diagram.validate()?;
    let mut relators = Vec::new();
    for (e, images) in diagram.events.iter().zip(word_images(diagram)) {
        let ys = &images[e.start..e.start + e.size];
        let q = ys.len();
        let rotation = |r: usize| -> Word {
            let parts: Vec<&[i32]> = (0..q).rev().map(|j| ys[(j + q - r) % q].as_slice()).collect();
            concat(&parts)
        };
        for r in 1..q {
            relators.push(concat(&[&rotation(r), &inverse(&rotation(r - 1))]));
        }
    }
    let pres = Presentation {
        degree: diagram.degree,
        generators: diagram.strands,
        generator_lines: diagram.initial_order.clone(),
        relators,
    };
    if !pres.abelianization_is_free() {
        return Err(Error::Invariant(
            "presentation relators are not in the commutator subgroup".into(),
        ));
    }
    Ok(pres)
}

/// `ρ(x_i) = ζ_d^k` for every generator, as a power `ζ_m^j` with `m` the order.
fn rho_power(degree: usize, m: u32, k: i64) -> Result<i64> {
    let d = degree as i64;
    let kk = k.rem_euclid(d);
    let order = d / num_integer::gcd(kk, d);
    if order != m as i64 {
        return Err(Error::invalid(format!("ζ_{d}^{k} has order {order}, not {m}")));
    }
    Ok(kk * m as i64 / d)
}

/// Matrix of `ρ(∂w/∂x_i)` (one row per word) with `ρ(x_i) = ζ_m^j` for all `i`,
/// computed from exponent residues.
pub fn fox_derivatives(words: &[Word], generators: usize, m: u32, j: i64) -> Matrix {
    let mm = m as usize;
    let rows = words
        .iter()
        .map(|r| {
            // counts[i][e]: signed multiplicity of ζ^e in ∂r/∂x_i
            let mut counts = vec![vec![0i64; mm]; generators];
            let mut prefix: i64 = 0;
            for &l in r {
                let g = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    counts[g][(prefix * j).rem_euclid(m as i64) as usize] += 1;
                    prefix += 1;
                } else {
                    prefix -= 1;
                    counts[g][(prefix * j).rem_euclid(m as i64) as usize] -= 1;
                }
            }
            counts
                .iter()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .filter(|(_, &n)| n != 0)
                        .fold(CycloNum::zero(m), |acc, (e, &n)| {
                            &acc + &CycloNum::zeta_pow(m, e as i64).scale(&crate::cyclo::rat(n, 1))
                        })
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(m, generators, rows).expect("consistent rows")
}

/// Fox Jacobian of the relators.
pub fn fox_matrix(pres: &Presentation, m: u32, j: i64) -> Matrix {
    fox_derivatives(&pres.relators, pres.generators, m, j)
}

/// `dim H¹` of the presentation complex with every meridian acting by `ζ_d^k`
/// (order `m`; `m = 1` is the trivial system).
pub fn fox_h1(pres: &Presentation, m: u32, k: i64) -> Result<usize> {
    let ranks = fox_ranks(pres, m, k)?;
    Ok(pres.generators - ranks.1 - ranks.0)
}

/// Ranks of the coboundaries `d⁰` and `d¹`.
fn fox_ranks(pres: &Presentation, m: u32, k: i64) -> Result<(usize, usize)> {
    let j = rho_power(pres.degree, m, k)?;
    let field = m.max(1);
    let d0 = usize::from(m != 1);
    let d1 = fox_matrix(pres, field, j).rank();
    Ok((d0, d1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    /// `h⁰ - h¹ + h²` of the twisted presentation complex.
    pub presentation: i64,
    /// `3 - 2d + Σ (ν - 1)` over all rank-2 flats.
    pub combinatorial: i64,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.presentation == self.combinatorial
    }
}

pub fn euler_consistency(pres: &Presentation, flats: &[Flat2], m: u32, k: i64) -> Result<EulerCheck> {
    let (r0, r1) = fox_ranks(pres, m, k)?;
    let h0 = 1 - r0 as i64;
    let h1 = pres.generators as i64 - r1 as i64 - r0 as i64;
    let h2 = pres.relators.len() as i64 - r1 as i64;
    let d = pres.degree as i64;
    let combinatorial = 3 - 2 * d + flats.iter().map(|f| f.multiplicity() as i64 - 1).sum::<i64>();
    Ok(EulerCheck {
        presentation: h0 - h1 + h2,
        combinatorial,
    })
}

/// Relator count predicted by the flats off the removed line.
pub fn expected_relator_count(flats: &[Flat2], removed: usize) -> usize {
    flats
        .iter()
        .filter(|f| !f.contains(removed))
        .map(|f| f.multiplicity() - 1)
        .sum()
}

/// Multiplicity census of the events, for comparison with the flat list.
pub fn event_census(diagram: &BraidedWiringDiagram) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for e in &diagram.events {
        *out.entry(e.size).or_insert(0) += 1;
    }
    out
}

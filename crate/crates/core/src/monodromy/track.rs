//! Braided wiring diagrams for arbitrary (complex) line arrangements.
//!
//! Singular values are visited in decreasing real part. The path runs along
//! straight segments between them and passes each one on an upper half circle
//! of radius `δ`. Fiber points move linearly in the path parameter on each
//! segment, so real-part exchanges are located in closed form; the sign of an
//! exchange is read from the imaginary parts at the crossing. The result is
//! accepted once halving `δ` no longer changes it.

use num_complex::Complex64;

use super::diagram::{BraidedWiringDiagram, DiagramSource, Event};
use crate::arrangement::{Arrangement, Flat2, PencilChart};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TrackOptions {
    /// Negate the pencil parameter (sweep from the other side).
    pub flip: bool,
    /// Starting detour radius; defaults to a quarter of the smallest gap between
    /// real parts of singular values.
    pub initial_radius: Option<f64>,
    pub max_refinements: usize,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            flip: false,
            initial_radius: None,
            max_refinements: 16,
        }
    }
}

struct Tracker<'a> {
    slopes: Vec<Complex64>,
    intercepts: Vec<Complex64>,
    values: Vec<Complex64>,
    /// Singular value indices by decreasing real part.
    visit: Vec<usize>,
    chart: &'a PencilChart,
    flats: &'a [Flat2],
    tol: f64,
}

impl Tracker<'_> {
    fn y(&self, p: usize, u: Complex64) -> Complex64 {
        self.slopes[p] * u + self.intercepts[p]
    }

    /// Positions sorted by real part at `u`, or `None` if two are too close to call.
    fn sorted_at(&self, u: Complex64) -> Option<Vec<usize>> {
        let mut ps: Vec<usize> = (0..self.slopes.len()).collect();
        ps.sort_by(|&p, &q| self.y(p, u).re.total_cmp(&self.y(q, u).re));
        let separated = ps
            .windows(2)
            .all(|w| self.y(w[1], u).re - self.y(w[0], u).re > self.tol);
        separated.then_some(ps)
    }

    /// Moves along the segment `from → to`, appending exchanges to `word`.
    fn segment(&self, order: &mut [usize], from: Complex64, to: Complex64, word: &mut Vec<i32>) -> Option<()> {
        let n = order.len();
        let dir = to - from;
        let mut crossings: Vec<(f64, usize, usize)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let da = self.slopes[i] - self.slopes[j];
                let r0 = (da * from + self.intercepts[i] - self.intercepts[j]).re;
                let r1 = (da * dir).re;
                if r0.abs() <= self.tol || (r0 + r1).abs() <= self.tol {
                    return None;
                }
                if (r0 > 0.0) != (r0 + r1 > 0.0) {
                    crossings.push((-r0 / r1, i, j));
                }
            }
        }
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in crossings.windows(2) {
            let shares = w[0].1 == w[1].1 || w[0].1 == w[1].2 || w[0].2 == w[1].1 || w[0].2 == w[1].2;
            if shares && (w[1].0 - w[0].0).abs() < 1e-12 {
                return None;
            }
        }
        for (s, i, j) in crossings {
            let pi = order.iter().position(|&x| x == i)?;
            let pj = order.iter().position(|&x| x == j)?;
            let (p, left, right) = if pi < pj { (pi, i, j) } else { (pj, j, i) };
            if p + 1 != pi.max(pj) {
                return None;
            }
            let u = from + dir * s;
            let im = (self.y(left, u) - self.y(right, u)).im;
            if im.abs() <= self.tol {
                return None;
            }
            let letter = p as i32 + 1;
            word.push(if im < 0.0 { letter } else { -letter });
            order.swap(p, p + 1);
        }
        Some(())
    }

    /// No exchange of real parts on the half circle around `c`, except inside the block.
    fn arc_is_clean(&self, c: Complex64, delta: f64, block: &[usize]) -> bool {
        let n = self.slopes.len();
        let in_block = |p: usize| block.contains(&p);
        for i in 0..n {
            for j in i + 1..n {
                if in_block(i) && in_block(j) {
                    continue;
                }
                let a = (self.y(i, c) - self.y(j, c)).re;
                let w = (self.slopes[i] - self.slopes[j]).norm() * delta;
                if a.abs() <= w * (1.0 + 1e-9) + self.tol {
                    return false;
                }
            }
        }
        true
    }

    fn attempt(&self, delta: f64) -> Option<Tracked> {
        let first = self.visit.first().map(|&k| self.values[k]).unwrap_or_default();
        let base = first + Complex64::new(1.0, 0.0);
        let mut order = self.sorted_at(base)?;
        let initial = order.clone();
        let mut events = Vec::new();
        let mut braids = vec![Vec::new()];
        let mut cur = base;
        for &k in &self.visit {
            let c = self.values[k];
            let entry = c + delta;
            self.segment(&mut order, cur, entry, braids.last_mut().expect("word"))?;
            if self.sorted_at(entry)? != order {
                return None;
            }
            let fi = self.chart.flats_off[k];
            let block: Vec<usize> = self.flats[fi]
                .incident
                .iter()
                .map(|&i| self.chart.position_of(i).expect("flat off the removed line"))
                .collect();
            let positions: Vec<usize> = block
                .iter()
                .map(|p| order.iter().position(|x| x == p).expect("strand"))
                .collect();
            let lo = *positions.iter().min()?;
            let hi = *positions.iter().max()?;
            if hi - lo + 1 != positions.len() || !self.arc_is_clean(c, delta, &block) {
                return None;
            }
            events.push(Event {
                flat: fi,
                lines: self.flats[fi].incident.clone(),
                start: lo,
                size: positions.len(),
            });
            order[lo..=hi].reverse();
            cur = c - delta;
            if self.sorted_at(cur)? != order {
                return None;
            }
            braids.push(Vec::new());
        }
        Some((initial, events, braids))
    }
}

const ROTATIONS: [f64; 6] = [
    0.0,
    std::f64::consts::FRAC_1_PI,
    std::f64::consts::FRAC_1_SQRT_2,
    1.1547,
    1.6180,
    2.2361,
];

pub fn track_complex(
    arr: &Arrangement,
    flats: &[Flat2],
    removed: usize,
    center: &[CycloNum],
    opts: &TrackOptions,
) -> Result<BraidedWiringDiagram> {
    let chart = PencilChart::new(arr, flats, removed, center)?;
    if !chart.is_generic() {
        return Err(Error::Genericity(
            "two singular points share a pencil line through the center".into(),
        ));
    }
    let sign = if opts.flip { -1.0 } else { 1.0 };
    let raw_slopes: Vec<Complex64> = chart.slopes.iter().map(|s| s.to_complex() * sign).collect();
    let intercepts: Vec<Complex64> = chart.intercepts.iter().map(CycloNum::to_complex).collect();
    let raw_values: Vec<Complex64> = chart.singular_values.iter().map(|s| s.to_complex() * sign).collect();
    let scale = 1.0
        + raw_values.iter().map(|v| v.norm()).fold(0.0, f64::max)
        + intercepts.iter().map(|v| v.norm()).fold(0.0, f64::max)
        + raw_slopes.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = 1e-11 * scale * scale;

    // Symmetric arrangements can put singular values on common vertical lines,
    // or parallel strands at equal real parts. Fixed rotations of the pencil
    // parameter and of the fiber coordinate break such ties.
    let mut last_err = Error::Genericity("singular values with (nearly) equal real parts".into());
    for (k, (au, ay)) in ROTATIONS
        .iter()
        .flat_map(|&au| ROTATIONS.iter().map(move |&ay| (au, ay)))
        .enumerate()
    {
        let wu = Complex64::from_polar(1.0, au);
        let wy = Complex64::from_polar(1.0, ay);
        let values: Vec<Complex64> = raw_values.iter().map(|v| v * wu).collect();
        let mut visit: Vec<usize> = (0..values.len()).collect();
        visit.sort_by(|&i, &j| values[j].re.total_cmp(&values[i].re));
        let min_gap = visit
            .windows(2)
            .map(|pair| values[pair[0]].re - values[pair[1]].re)
            .fold(f64::INFINITY, f64::min);
        if min_gap <= 1e-6 * scale {
            continue;
        }
        let tracker = Tracker {
            slopes: raw_slopes.iter().map(|a| a * wy / wu).collect(),
            intercepts: intercepts.iter().map(|b| b * wy).collect(),
            values,
            visit,
            chart: &chart,
            flats,
            tol,
        };
        let start = opts
            .initial_radius
            .unwrap_or(if min_gap.is_finite() { min_gap / 4.0 } else { 0.25 });
        match stabilize(&tracker, start, opts.max_refinements) {
            Some((initial, events, braids)) => {
                let diagram = BraidedWiringDiagram {
                    degree: arr.degree(),
                    strands: chart.lines.len(),
                    removed,
                    center: center.iter().map(|c| c.to_string()).collect(),
                    basepoint: if opts.flip { "left" } else { "right" }.into(),
                    source: DiagramSource::Tracked,
                    initial_order: initial.iter().map(|&p| chart.lines[p]).collect(),
                    events,
                    braids,
                };
                diagram.validate()?;
                return Ok(diagram);
            }
            None => {
                last_err = Error::Genericity(format!(
                    "braid tracking did not stabilize after {} refinements ({} coordinate rotations tried); try another center",
                    opts.max_refinements,
                    k + 1
                ))
            }
        }
    }
    Err(last_err)
}

type Tracked = (Vec<usize>, Vec<Event>, Vec<Vec<i32>>);

/// Halves the detour radius until two consecutive runs agree.
fn stabilize(tracker: &Tracker<'_>, start: f64, max_refinements: usize) -> Option<Tracked> {
    let mut delta = start;
    let mut previous = None;
    for _ in 0..max_refinements {
        let current = tracker.attempt(delta);
        if current.is_some() && current == previous {
            return current;
        }
        previous = current;
        delta /= 2.0;
    }
    None
}

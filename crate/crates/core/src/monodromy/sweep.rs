//! Exact sweep of a real arrangement along the real axis of the pencil parameter.
//!
//! The basepoint sits to the right of every singular value and the path runs
//! left, passing each singular value on a small upper half circle. On that half
//! circle the block through the singular point turns counterclockwise by half a
//! turn, and between singular values the real fiber points keep their order.

use super::diagram::{BraidedWiringDiagram, DiagramSource, Event};
use crate::arrangement::{Arrangement, Flat2, PencilChart};
use crate::cyclo::{CycloNum, Rat};
use crate::error::{Error, Result};

fn rational(c: &CycloNum) -> Result<Rat> {
    c.to_rat()
        .ok_or_else(|| Error::invalid("real sweep needs rational coefficients"))
}

/// With `flip`, the pencil parameter is negated, so the sweep runs the other way.
pub fn sweep_real(
    arr: &Arrangement,
    flats: &[Flat2],
    removed: usize,
    center: &[CycloNum],
    flip: bool,
) -> Result<BraidedWiringDiagram> {
    if !arr.is_real_rational() || !center.iter().all(CycloNum::is_rational) {
        return Err(Error::invalid("real sweep needs a real arrangement and a real center"));
    }
    let chart = PencilChart::new(arr, flats, removed, center)?;
    if !chart.is_generic() {
        return Err(Error::Genericity(
            "two singular points share a pencil line through the center".into(),
        ));
    }
    let sgn = |r: Rat| if flip { -r } else { r };
    let slopes = chart
        .slopes
        .iter()
        .map(|s| rational(s).map(sgn))
        .collect::<Result<Vec<_>>>()?;
    let intercepts = chart.intercepts.iter().map(rational).collect::<Result<Vec<_>>>()?;
    let values = chart
        .singular_values
        .iter()
        .map(|s| rational(s).map(sgn))
        .collect::<Result<Vec<_>>>()?;

    let mut by_value: Vec<usize> = (0..values.len()).collect();
    by_value.sort_by(|&i, &j| values[j].cmp(&values[i]));
    let one = Rat::from_integer(1.into());
    let (start_x, end_x) = match (by_value.first(), by_value.last()) {
        (Some(&hi), Some(&lo)) => (&values[hi] + &one, &values[lo] - &one),
        _ => (one.clone(), -one.clone()),
    };
    let height = |p: usize, x: &Rat| &slopes[p] * x + &intercepts[p];
    let sort_at = |x: &Rat| {
        let mut ps: Vec<usize> = (0..chart.lines.len()).collect();
        ps.sort_by_cached_key(|&p| height(p, x));
        ps
    };

    let mut order = sort_at(&start_x);
    let initial_order: Vec<usize> = order.iter().map(|&p| chart.lines[p]).collect();
    let mut events = Vec::with_capacity(values.len());
    for &k in &by_value {
        let fi = chart.flats_off[k];
        let flat = &flats[fi];
        let positions: Vec<usize> = flat
            .incident
            .iter()
            .map(|&i| {
                let p = chart.position_of(i).expect("flat off the removed line");
                order.iter().position(|&x| x == p).expect("strand present")
            })
            .collect();
        let lo = *positions.iter().min().expect("nonempty flat");
        let hi = *positions.iter().max().expect("nonempty flat");
        if hi - lo + 1 != positions.len() {
            return Err(Error::Invariant(format!(
                "flat {fi} is not a consecutive block in the sweep"
            )));
        }
        events.push(Event {
            flat: fi,
            lines: flat.incident.clone(),
            start: lo,
            size: positions.len(),
        });
        order[lo..=hi].reverse();
    }
    if order != sort_at(&end_x) {
        return Err(Error::Invariant(
            "sweep permutation is inconsistent with the final line order".into(),
        ));
    }
    let braids = vec![Vec::new(); events.len() + 1];
    let diagram = BraidedWiringDiagram {
        degree: arr.degree(),
        strands: chart.lines.len(),
        removed,
        center: center.iter().map(|c| c.to_string()).collect(),
        basepoint: if flip { "left" } else { "right" }.into(),
        source: DiagramSource::RealSweep,
        initial_order,
        events,
        braids,
    };
    diagram.validate()?;
    Ok(diagram)
}

//! Certificate replay. Flats and components are recomputed here from kernels
//! of normal pairs, without the flat enumeration used by the checkers.

use super::{Certificate, CheckOptions, Checker, Context, Status, Theorem};
use crate::arrangement::Arrangement;
use crate::cyclo::nonvanishing_guaranteed;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Incident set of the flat cut out by hyperplanes `a` and `b`: every
/// hyperplane vanishing on the common kernel of their normals.
fn flat_through(arr: &Arrangement, a: usize, b: usize) -> Vec<usize> {
    let rows = vec![arr.hyperplane(a).normal.clone(), arr.hyperplane(b).normal.clone()];
    let kernel = Matrix::from_rows(arr.field_order(), arr.ambient_dim(), rows)
        .expect("validated arrangement")
        .nullspace();
    (0..arr.degree())
        .filter(|&i| kernel.iter().all(|v| arr.hyperplane(i).eval(v).is_zero()))
        .collect()
}

fn replay_partition(arr: &Arrangement, m: u32, removed: usize) -> Vec<Vec<usize>> {
    let d = arr.degree();
    let mut done = vec![vec![false; d]; d];
    let mut adj = vec![Vec::new(); d];
    for a in 0..d {
        for b in a + 1..d {
            if done[a][b] {
                continue;
            }
            let flat = flat_through(arr, a, b);
            for &i in &flat {
                for &j in &flat {
                    done[i][j] = true;
                }
            }
            if !flat.len().is_multiple_of(m as usize) && !flat.contains(&removed) {
                for &i in &flat {
                    adj[i].extend(flat.iter().copied().filter(|&j| j != i));
                }
            }
        }
    }
    let mut seen = vec![false; d];
    seen[removed] = true;
    let mut parts = Vec::new();
    for s in 0..d {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        parts.push(comp);
    }
    parts
}

/// True iff every predicate the certificate relies on holds when recomputed
/// from `arr`. An Inconclusive certificate is checked by rerunning its checker.
pub fn verify_certificate(arr: &Arrangement, cert: &Certificate) -> Result<bool> {
    if cert.arrangement_hash != arr.content_hash() {
        return Err(Error::invalid("certificate was issued for a different arrangement"));
    }
    let d = arr.degree();
    let m = cert.m;
    if m < 2 || cert.degree != d {
        return Ok(false);
    }
    let divides = d.is_multiple_of(m as usize);
    if cert.status == Status::Inconclusive {
        if cert.theorem.is_some() || !divides {
            return Ok(false);
        }
        let ctx = Context::new(
            arr,
            CheckOptions {
                lattice_only: true,
                ..Default::default()
            },
        )?;
        let again = match cert.checker {
            Checker::Theorem1 => ctx.check_theorem1(m)?,
            Checker::Theorem2 => ctx.check_theorem2(m)?,
        };
        return Ok(again.status == Status::Inconclusive);
    }
    let theorem = match cert.theorem {
        Some(t) => t,
        None => return Ok(false),
    };
    if theorem == Theorem::TrivialOrder {
        return Ok(!divides);
    }
    let removed = match cert.removed_index {
        Some(r) if r < d && divides => r,
        _ => return Ok(false),
    };
    let mut claimed = cert.partition.clone();
    claimed.sort_by_key(|p| p.first().copied());
    if claimed != replay_partition(arr, m, removed) {
        return Ok(false);
    }
    let parts = &cert.partition;
    let ok = match (theorem, cert.checker) {
        (Theorem::T1Connected, Checker::Theorem1) => parts.len() == 1,
        (Theorem::T1Branch2, Checker::Theorem1) => {
            let singletons = parts.len() >= 2 && parts[1..].iter().all(|p| p.len() == 1);
            let rest: Vec<usize> = parts.iter().skip(1).filter_map(|p| p.first().copied()).collect();
            singletons && arr.rank_of(&rest) <= 2 && arr.is_essential()
        }
        (Theorem::T2, Checker::Theorem2) => {
            cert.witnesses.len() + 1 == parts.len()
                && cert.witnesses.iter().enumerate().all(|(idx, w)| {
                    let k = idx + 1;
                    if w.k != k || w.flat.len() < 2 {
                        return false;
                    }
                    let flat = flat_through(arr, w.flat[0], w.flat[1]);
                    let trace =
                        |c: usize| -> Vec<usize> { flat.iter().copied().filter(|i| parts[c].contains(i)).collect() };
                    let (tf, tk) = (trace(0), trace(k));
                    flat == w.flat
                        && flat.len().is_multiple_of(m as usize)
                        && !flat.contains(&removed)
                        && tf == w.trace_first
                        && tk == w.trace_k
                        && !tf.is_empty()
                        && !tk.is_empty()
                        && tf.len() + tk.len() == flat.len()
                        && nonvanishing_guaranteed(m, tk.len())
                })
        }
        _ => false,
    };
    Ok(ok)
}

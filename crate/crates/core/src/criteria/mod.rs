//! Dual (m)-graphs, their component partitions, and the two combinatorial
//! vanishing checks with replayable certificates.
//!
//! Everything here works on rank-2 flats. For `n > 3` the caller either cuts
//! down with [`crate::arrangement::generic_section`] first or acknowledges the
//! restriction with `lattice_only`.

mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arrangement::{census, rank2_flats_with, Arrangement, Flat2};
use crate::cyclo::nonvanishing_guaranteed;
use crate::error::{Error, Result};
use crate::par::{self, Strategy};

pub use verify::verify_certificate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualMGraph {
    pub m: u32,
    pub removed: Option<usize>,
    pub vertices: Vec<usize>,
    /// Sorted pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

fn edge_flat(f: &Flat2, m: u32, removed: Option<usize>) -> bool {
    !f.multiplicity().is_multiple_of(m as usize) && removed.is_none_or(|r| !f.contains(r))
}

pub fn dual_m_graph(arr: &Arrangement, flats: &[Flat2], m: u32, removed: Option<usize>) -> Result<DualMGraph> {
    check_m(m)?;
    check_removed(arr.degree(), removed)?;
    let mut edges = Vec::new();
    for f in flats.iter().filter(|f| edge_flat(f, m, removed)) {
        for (a, &i) in f.incident.iter().enumerate() {
            edges.extend(f.incident[a + 1..].iter().map(|&j| (i, j)));
        }
    }
    edges.sort_unstable();
    Ok(DualMGraph {
        m,
        removed,
        vertices: (0..arr.degree()).filter(|&i| Some(i) != removed).collect(),
        edges,
    })
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid(format!("eigenvalue order must be at least 2, got {m}")));
    }
    Ok(())
}

fn check_removed(d: usize, removed: Option<usize>) -> Result<()> {
    match removed {
        Some(r) if r >= d => Err(Error::invalid(format!("removed index {r} out of range for degree {d}"))),
        _ => Ok(()),
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(g: &DualMGraph) -> Vec<Vec<usize>> {
    let n = g.vertices.iter().max().map_or(0, |&v| v + 1);
    let mut uf = UnionFind((0..n).collect());
    for &(i, j) in &g.edges {
        uf.union(i, j);
    }
    group(&g.vertices, &mut uf)
}

fn group(vertices: &[usize], uf: &mut UnionFind) -> Vec<Vec<usize>> {
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in vertices {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    let mut parts: Vec<Vec<usize>> = by_root.into_values().collect();
    parts.sort_by_key(|p| p[0]);
    parts
}

/// Same as `components(dual_m_graph(..))` without materializing the edges.
pub fn partition(d: usize, flats: &[Flat2], m: u32, removed: Option<usize>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..d).collect());
    for f in flats.iter().filter(|f| edge_flat(f, m, removed)) {
        for w in f.incident.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let vertices: Vec<usize> = (0..d).filter(|&i| Some(i) != removed).collect();
    group(&vertices, &mut uf)
}

/// `r_m` (no removal) and `r′_m` for every choice of removed index.
pub fn component_counts(d: usize, flats: &[Flat2], m: u32) -> (usize, Vec<usize>) {
    let r = partition(d, flats, m, None).len();
    let primes = (0..d).map(|k| partition(d, flats, m, Some(k)).len()).collect();
    (r, primes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Checker {
    Theorem1,
    Theorem2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Vanishes,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "T1-connected")]
    T1Connected,
    #[serde(rename = "T1-branch2")]
    T1Branch2,
    #[serde(rename = "T2")]
    T2,
    #[serde(rename = "TrivialOrder")]
    TrivialOrder,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::T1Connected => "T1-connected",
            Theorem::T1Branch2 => "T1-branch2",
            Theorem::T2 => "T2",
            Theorem::TrivialOrder => "TrivialOrder",
        }
    }
}

/// A flat `Q_k` joining component 1 to component `k` and touching no other component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Index into the certificate partition (component 1 is index 0).
    pub k: usize,
    pub flat: Vec<usize>,
    pub trace_first: Vec<usize>,
    pub trace_k: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub predicate: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub checker: Checker,
    pub m: u32,
    pub degree: usize,
    pub arrangement_hash: String,
    pub status: Status,
    pub theorem: Option<Theorem>,
    pub removed_index: Option<usize>,
    /// Components of the dual graph with the removed index deleted; the one
    /// labeled 1 is listed first.
    pub partition: Vec<Vec<usize>>,
    pub witnesses: Vec<Witness>,
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn vanishes(&self) -> bool {
        self.status == Status::Vanishes
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Accept `n > 3` and work with the rank-2 flats of the arrangement itself.
    pub lattice_only: bool,
    pub strategy: Strategy,
}

/// Flats shared by all checks on one arrangement.
pub struct Context<'a> {
    pub arr: &'a Arrangement,
    pub flats: Vec<Flat2>,
    pub opts: CheckOptions,
}

impl<'a> Context<'a> {
    pub fn new(arr: &'a Arrangement, opts: CheckOptions) -> Result<Self> {
        if arr.ambient_dim() > 3 && !opts.lattice_only {
            return Err(Error::invalid(format!(
                "arrangement lives in P^{}; take a generic plane section first or pass lattice_only",
                arr.ambient_dim() - 1
            )));
        }
        Ok(Context {
            arr,
            flats: rank2_flats_with(arr, opts.strategy),
            opts,
        })
    }

    fn certificate(&self, checker: Checker, m: u32) -> Certificate {
        Certificate {
            checker,
            m,
            degree: self.arr.degree(),
            arrangement_hash: self.arr.content_hash(),
            status: Status::Inconclusive,
            theorem: None,
            removed_index: None,
            partition: Vec::new(),
            witnesses: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn trivial_order(&self, cert: &mut Certificate) -> bool {
        let d = self.arr.degree();
        let divides = d.is_multiple_of(cert.m as usize);
        cert.checks.push(Check {
            predicate: format!("{} divides d={d}", cert.m),
            holds: divides,
        });
        if !divides {
            cert.status = Status::Vanishes;
            cert.theorem = Some(Theorem::TrivialOrder);
        }
        !divides
    }

    /// Removal candidates, the default last index first.
    fn removal_order(&self) -> Vec<usize> {
        (0..self.arr.degree()).rev().collect()
    }

    /// Runs `attempt` for every removed index and keeps the first success in
    /// removal order, with the log of every attempt up to it.
    fn search<F>(&self, cert: &mut Certificate, attempt: F)
    where
        F: Fn(usize, Vec<Vec<usize>>) -> Attempt + Sync + Send,
    {
        let d = self.arr.degree();
        let order = self.removal_order();
        let results = par::map(self.opts.strategy, &order, |&r| {
            attempt(r, partition(d, &self.flats, cert.m, Some(r)))
        });
        for (r, result) in order.into_iter().zip(results) {
            cert.checks.extend(result.checks);
            if let Some((theorem, partition, witnesses)) = result.success {
                cert.status = Status::Vanishes;
                cert.theorem = Some(theorem);
                cert.removed_index = Some(r);
                cert.partition = partition;
                cert.witnesses = witnesses;
                return;
            }
        }
        let default = self.arr.degree() - 1;
        cert.removed_index = Some(default);
        cert.partition = partition(d, &self.flats, cert.m, Some(default));
    }

    pub fn check_theorem1(&self, m: u32) -> Result<Certificate> {
        check_m(m)?;
        let mut cert = self.certificate(Checker::Theorem1, m);
        if self.trivial_order(&mut cert) {
            return Ok(cert);
        }
        let essential = self.arr.is_essential();
        cert.checks.push(Check {
            predicate: "arrangement is essential".into(),
            holds: essential,
        });
        self.search(&mut cert, |r, parts| self.theorem1_attempt(r, parts, essential));
        Ok(cert)
    }

    fn theorem1_attempt(&self, removed: usize, parts: Vec<Vec<usize>>, essential: bool) -> Attempt {
        let mut checks = Vec::new();
        let connected = parts.len() == 1;
        checks.push(Check {
            predicate: format!("removed={removed}: r'={} is 1", parts.len()),
            holds: connected,
        });
        if connected {
            return Attempt::success(checks, Theorem::T1Connected, parts, Vec::new());
        }
        if !essential {
            return Attempt::failure(checks);
        }
        for first in 0..parts.len() {
            let labeled = relabel(&parts, first);
            let singletons = labeled[1..].iter().all(|p| p.len() == 1);
            if !singletons {
                checks.push(Check {
                    predicate: format!(
                        "removed={removed} first={}: components j>=2 are single hyperplanes",
                        labeled[0][0]
                    ),
                    holds: false,
                });
                continue;
            }
            let rest: Vec<usize> = labeled[1..].iter().map(|p| p[0]).collect();
            let codim = self.arr.rank_of(&rest);
            let ok = codim <= 2;
            checks.push(Check {
                predicate: format!(
                    "removed={removed} first={}: singletons {rest:?} meet in codim {codim} <= 2",
                    labeled[0][0]
                ),
                holds: ok,
            });
            if ok {
                return Attempt::success(checks, Theorem::T1Branch2, labeled, Vec::new());
            }
        }
        Attempt::failure(checks)
    }

    pub fn check_theorem2(&self, m: u32) -> Result<Certificate> {
        check_m(m)?;
        let mut cert = self.certificate(Checker::Theorem2, m);
        if self.trivial_order(&mut cert) {
            return Ok(cert);
        }
        self.search(&mut cert, |r, parts| self.theorem2_attempt(m, r, parts));
        Ok(cert)
    }

    fn theorem2_attempt(&self, m: u32, removed: usize, parts: Vec<Vec<usize>>) -> Attempt {
        let mut checks = Vec::new();
        let d = self.arr.degree();
        let mut label = vec![usize::MAX; d];
        for (c, p) in parts.iter().enumerate() {
            for &i in p {
                label[i] = c;
            }
        }
        // Candidate flats: m | ν and off the removed hyperplane.
        let candidates: Vec<&Flat2> = self
            .flats
            .iter()
            .filter(|f| f.multiplicity() % m as usize == 0 && !f.contains(removed))
            .collect();
        'labels: for first in 0..parts.len() {
            let labeled = relabel(&parts, first);
            let mut witnesses = Vec::new();
            for (k, comp) in labeled.iter().enumerate().skip(1) {
                let target = label[comp[0]];
                let found = candidates.iter().find_map(|f| {
                    let mut tf = Vec::new();
                    let mut tk = Vec::new();
                    for &i in &f.incident {
                        match label[i] {
                            c if c == first => tf.push(i),
                            c if c == target => tk.push(i),
                            _ => return None,
                        }
                    }
                    let ok = !tf.is_empty() && !tk.is_empty() && nonvanishing_guaranteed(m, tk.len());
                    ok.then(|| Witness {
                        k,
                        flat: f.incident.clone(),
                        trace_first: tf,
                        trace_k: tk,
                    })
                });
                checks.push(Check {
                    predicate: match &found {
                        Some(w) => format!(
                            "removed={removed} first={}: component {k} has witness flat {:?} with |trace|={}",
                            labeled[0][0],
                            w.flat,
                            w.trace_k.len()
                        ),
                        None => format!(
                            "removed={removed} first={}: component {k} has a witness flat",
                            labeled[0][0]
                        ),
                    },
                    holds: found.is_some(),
                });
                match found {
                    Some(w) => witnesses.push(w),
                    None => continue 'labels,
                }
            }
            return Attempt::success(checks, Theorem::T2, labeled, witnesses);
        }
        Attempt::failure(checks)
    }

    /// Every `m ≥ 2` dividing `d`, plus the non-divisors up to 6 as TrivialOrder entries.
    pub fn analyze_all(&self) -> Result<Analysis> {
        let d = self.arr.degree();
        let orders: Vec<u32> = (2..=d.max(6) as u32)
            .filter(|&m| d.is_multiple_of(m as usize) || m <= 6)
            .collect();
        self.analyze_orders(&orders)
    }

    pub fn analyze_orders(&self, orders: &[u32]) -> Result<Analysis> {
        let d = self.arr.degree();
        let mut orders = orders.to_vec();
        orders.sort_unstable();
        orders.dedup();
        let mut entries = Vec::with_capacity(orders.len());
        for m in orders {
            let divides = d.is_multiple_of(m as usize);
            let (r, r_prime) = if divides {
                let (r, rp) = component_counts(d, &self.flats, m);
                (Some(r), rp)
            } else {
                (None, Vec::new())
            };
            entries.push(OrderAnalysis {
                m,
                r,
                r_prime_default: r_prime.last().copied(),
                r_prime,
                theorem1: self.check_theorem1(m)?,
                theorem2: self.check_theorem2(m)?,
            });
        }
        Ok(Analysis {
            degree: d,
            ambient_dim: self.arr.ambient_dim(),
            arrangement_hash: self.arr.content_hash(),
            census: census(&self.flats),
            orders: entries,
        })
    }
}

/// Component `first` moved to the front; the rest keep their order.
fn relabel(parts: &[Vec<usize>], first: usize) -> Vec<Vec<usize>> {
    let mut out = vec![parts[first].clone()];
    out.extend(
        parts
            .iter()
            .enumerate()
            .filter(|(c, _)| *c != first)
            .map(|(_, p)| p.clone()),
    );
    out
}

struct Attempt {
    checks: Vec<Check>,
    success: Option<(Theorem, Vec<Vec<usize>>, Vec<Witness>)>,
}

impl Attempt {
    fn success(checks: Vec<Check>, t: Theorem, partition: Vec<Vec<usize>>, witnesses: Vec<Witness>) -> Self {
        Attempt {
            checks,
            success: Some((t, partition, witnesses)),
        }
    }

    fn failure(checks: Vec<Check>) -> Self {
        Attempt { checks, success: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderAnalysis {
    pub m: u32,
    /// Components without removal; absent when `m ∤ d`.
    pub r: Option<usize>,
    /// Components with the last hyperplane removed.
    pub r_prime_default: Option<usize>,
    /// Components for each removed index.
    pub r_prime: Vec<usize>,
    pub theorem1: Certificate,
    pub theorem2: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub degree: usize,
    pub ambient_dim: usize,
    pub arrangement_hash: String,
    pub census: BTreeMap<usize, usize>,
    pub orders: Vec<OrderAnalysis>,
}

pub fn check_theorem1(arr: &Arrangement, m: u32, opts: CheckOptions) -> Result<Certificate> {
    Context::new(arr, opts)?.check_theorem1(m)
}

pub fn check_theorem2(arr: &Arrangement, m: u32, opts: CheckOptions) -> Result<Certificate> {
    Context::new(arr, opts)?.check_theorem2(m)
}

pub fn analyze_all(arr: &Arrangement, opts: CheckOptions) -> Result<Analysis> {
    Context::new(arr, opts)?.analyze_all()
}

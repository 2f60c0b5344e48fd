//! Brute-force capacity-region estimation for small topologies.
//!
//! Valid for cutoff age 1 only: entanglements never survive a slot, so the
//! per-slot link state is i.i.d. across slots and the achievable mean
//! service set is a finite mixture over link realizations. The estimator
//! enumerates every Bernoulli realization of the edge set, pushes it
//! through the same capacity-filtered generation rule as the simulator,
//! enumerates the maximal service vectors, and represents the region
//!
//! `{ λ ≥ 0 : λ ≤ Σ_x P(x) Σ_a α(x,a) μ(x,a) for per-state mixtures α }`.
//!
//! Membership and boundary scaling are decided exactly by a small linear
//! program over the enumerated service vectors; explicit vertices and
//! supporting half-spaces are produced for one and two commodities.
// TODO: exact facet enumeration for three or more commodities; the LP
// membership test already covers those instances.

use std::collections::BTreeSet;

use super::linprog::{solve_equality_form, LpStatus};
use crate::error::{Error, Result};
use crate::netsim::{
    feasible_configurations, Commodity, EdgeId, EnumerationBudget, Lle, LleId, NodeId, ServiceCaps,
    SimParams, SlotState, Topology, CandidatePaths,
};

/// A supporting half-space `normal · λ ≤ bound` with `normal ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub bound: f64,
}

/// One enumerated link realization: its probability and the deduplicated
/// maximal service vectors available under it.
#[derive(Debug, Clone)]
struct RealizationEntry {
    probability: f64,
    services: Vec<Vec<f64>>,
}

/// The estimated capacity region.
///
/// `vertices` and `halfspaces` are exact polytope descriptions for at most
/// two commodities (the polygon vertices in counter-clockwise order
/// starting at the origin, and the non-axis facets). For more commodities
/// they are left empty and membership queries go through the linear
/// program, which is exact in any dimension.
#[derive(Debug, Clone)]
pub struct CapacityRegion {
    pub commodity_ids: Vec<u32>,
    pub vertices: Vec<Vec<f64>>,
    pub halfspaces: Vec<Halfspace>,
    realizations: Vec<RealizationEntry>,
}

impl CapacityRegion {
    pub fn dimension(&self) -> usize {
        self.commodity_ids.len()
    }

    /// Probability-weighted maximum of `w · μ` over the region's service
    /// vectors (the support function of the achievable mean-service set).
    pub fn support(&self, w: &[f64]) -> f64 {
        self.realizations
            .iter()
            .map(|r| {
                r.probability
                    * r.services
                        .iter()
                        .map(|mu| dot(w, mu))
                        .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum()
    }

    /// Largest `t` such that `t·direction` lies in the region.
    ///
    /// `direction` must be nonnegative with at least one positive entry.
    pub fn max_scale(&self, direction: &[f64]) -> Result<f64> {
        let k = self.dimension();
        if direction.len() != k {
            return Err(Error::Usage(format!(
                "direction has {} entries for {k} commodities",
                direction.len()
            )));
        }
        if direction.iter().any(|&d| d < 0.0 || !d.is_finite()) || direction.iter().all(|&d| d == 0.0) {
            return Err(Error::Usage("direction must be nonnegative and nonzero".into()));
        }

        // Variables: α_{x,a} per (realization, service vector), then t, then
        // one slack per commodity.
        let nx: usize = self.realizations.iter().map(|r| r.services.len()).sum();
        let n = nx + 1 + k;
        let t_col = nx;
        let rows = k + self.realizations.len();
        let mut a = vec![vec![0.0f64; n]; rows];
        let mut b = vec![0.0f64; rows];

        // Σ_x Σ_a α P(x) μ_c  −  t·direction_c  −  s_c = 0
        let mut col = 0;
        for r in &self.realizations {
            for mu in &r.services {
                for (c, row) in a.iter_mut().enumerate().take(k) {
                    row[col] = r.probability * mu[c];
                }
                col += 1;
            }
        }
        for c in 0..k {
            a[c][t_col] = -direction[c];
            a[c][nx + 1 + c] = -1.0;
        }
        // Σ_a α_{x,a} = 1 per realization.
        let mut col = 0;
        for (xi, r) in self.realizations.iter().enumerate() {
            for _ in &r.services {
                a[k + xi][col] = 1.0;
                col += 1;
            }
            b[k + xi] = 1.0;
        }

        let mut c_obj = vec![0.0f64; n];
        c_obj[t_col] = -1.0; // maximise t
        let sol = solve_equality_form(&a, &b, &c_obj);
        match sol.status {
            LpStatus::Optimal => Ok(sol.x[t_col]),
            LpStatus::Infeasible => Err(Error::Protocol("capacity membership program infeasible".into())),
            LpStatus::Unbounded => Err(Error::Protocol("capacity membership program unbounded".into())),
        }
    }

    /// Whether the arrival-rate vector is supportable.
    pub fn contains(&self, lambda: &[f64]) -> Result<bool> {
        if lambda.len() != self.dimension() {
            return Err(Error::Usage(format!(
                "rate vector has {} entries for {} commodities",
                lambda.len(),
                self.dimension()
            )));
        }
        if lambda.iter().any(|&l| l < 0.0 || !l.is_finite()) {
            return Ok(false);
        }
        if lambda.iter().all(|&l| l == 0.0) {
            return Ok(true);
        }
        Ok(self.max_scale(lambda)? >= 1.0 - 1e-9)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Enumerate the capacity region of a small instance.
///
/// Requires cutoff age 1 (the estimator's validity domain) and at most 16
/// edges. Decay within the slot does not apply to fresh entanglements, so
/// only the generation probabilities, memory capacities and candidate
/// paths shape the region.
pub fn estimate_capacity_region(
    topology: &Topology,
    commodities: &[Commodity],
    params: &SimParams,
    budget: &EnumerationBudget,
) -> Result<CapacityRegion> {
    if params.fidelity.cutoff_age != Some(1) {
        return Err(Error::Unsupported(
            "capacity estimation requires cutoff age 1; bound other regimes with simulation sweeps".into(),
        ));
    }
    let edges = topology.edges();
    if edges.len() > 16 {
        return Err(Error::Budget(format!(
            "capacity enumeration over {} edges exceeds the 16-edge limit",
            edges.len()
        )));
    }
    crate::netsim::validate_commodities(topology, commodities)?;
    let paths = CandidatePaths::build(topology, commodities, params.max_path_hops);
    let k = commodities.len();

    let mut realizations = Vec::new();
    for mask in 0..(1u32 << edges.len()) {
        let mut probability = 1.0f64;
        for (i, e) in edges.iter().enumerate() {
            probability *= if mask & (1 << i) != 0 { e.p_gen } else { 1.0 - e.p_gen };
        }
        if probability == 0.0 {
            continue;
        }
        // Same generation semantics as the simulator: edges in list order,
        // dropped when an endpoint is out of memory.
        let mut lles = Vec::new();
        let mut held = vec![0u64; topology.nodes().len()];
        for (i, e) in edges.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let room = [e.a, e.b].iter().all(|&NodeId(n)| match topology.nodes()[n].memory {
                None => true,
                Some(cap) => held[n] < u64::from(cap),
            });
            if !room {
                continue;
            }
            held[e.a.0] += 1;
            held[e.b.0] += 1;
            lles.push(Lle {
                id: LleId(lles.len() as u64),
                edge: EdgeId(i),
                created_slot: 0,
                fidelity: e.f0,
            });
        }
        let state = SlotState::with_lles(0, lles, vec![0; k])?;
        let configs = feasible_configurations(
            &state,
            topology,
            commodities,
            &paths,
            ServiceCaps::Unlimited,
            params.min_service_fidelity,
            budget,
        )?;
        let mut vectors: BTreeSet<Vec<u64>> = BTreeSet::new();
        for cfg in &configs {
            vectors.insert(cfg.services(k));
        }
        let services: Vec<Vec<f64>> = vectors
            .into_iter()
            .map(|v| v.into_iter().map(|s| s as f64).collect())
            .collect();
        realizations.push(RealizationEntry { probability, services });
    }

    let mut region = CapacityRegion {
        commodity_ids: commodities.iter().map(|c| c.id).collect(),
        vertices: Vec::new(),
        halfspaces: Vec::new(),
        realizations,
    };
    match k {
        1 => {
            let rmax = region.support(&[1.0]);
            region.vertices = vec![vec![0.0], vec![rmax]];
            region.halfspaces = vec![Halfspace { normal: vec![1.0], bound: rmax }];
        }
        2 => {
            let (vertices, halfspaces) = polygon_2d(&region);
            region.vertices = vertices;
            region.halfspaces = halfspaces;
        }
        _ => {}
    }
    Ok(region)
}

/// Exact polygon of a two-commodity region: evaluate the expected-service
/// maximiser at every normal-fan direction, close the set downward, and
/// take the convex hull.
fn polygon_2d(region: &CapacityRegion) -> (Vec<Vec<f64>>, Vec<Halfspace>) {
    // Candidate directions: axes plus every direction where some
    // realization's argmax can switch between two of its service vectors.
    let mut angles: Vec<f64> = vec![0.0, std::f64::consts::FRAC_PI_2];
    for r in &region.realizations {
        for (i, u) in r.services.iter().enumerate() {
            for v in r.services.iter().skip(i + 1) {
                let d = [u[0] - v[0], u[1] - v[1]];
                for perp in [[-d[1], d[0]], [d[1], -d[0]]] {
                    if perp[0] >= 0.0 && perp[1] >= 0.0 && (perp[0] > 0.0 || perp[1] > 0.0) {
                        angles.push(perp[1].atan2(perp[0]));
                    }
                }
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    // Sample between consecutive switch directions as well, where the
    // maximiser is unique.
    let mut directions: Vec<[f64; 2]> = Vec::new();
    for (i, &phi) in angles.iter().enumerate() {
        directions.push([phi.cos(), phi.sin()]);
        if i + 1 < angles.len() {
            let mid = (phi + angles[i + 1]) / 2.0;
            directions.push([mid.cos(), mid.sin()]);
        }
    }

    let mut points: Vec<[f64; 2]> = vec![[0.0, 0.0]];
    for w in &directions {
        let mut p = [0.0f64; 2];
        for r in &region.realizations {
            // Deterministic argmax: best value, ties to the lexicographically
            // largest vector.
            let mut best: Option<&Vec<f64>> = None;
            let mut best_v = f64::NEG_INFINITY;
            for mu in &r.services {
                let v = dot(&w[..], mu);
                let better = v > best_v + 1e-12
                    || ((v - best_v).abs() <= 1e-12
                        && best.map_or(true, |b| mu.as_slice() > b.as_slice()));
                if better {
                    best = Some(mu);
                    best_v = v;
                }
            }
            if let Some(mu) = best {
                p[0] += r.probability * mu[0];
                p[1] += r.probability * mu[1];
            }
        }
        points.push(p);
    }
    // Downward closure: axis projections of the extreme points.
    let xmax = region.support(&[1.0, 0.0]);
    let ymax = region.support(&[0.0, 1.0]);
    points.push([xmax, 0.0]);
    points.push([0.0, ymax]);

    let hull = convex_hull(points);
    let halfspaces = hull
        .windows(2)
        .chain(std::iter::once(
            &[*hull.last().expect("hull nonempty"), hull[0]][..],
        ))
        .filter_map(|pair| {
            let (p, q) = (pair[0], pair[1]);
            // Outward normal of the counter-clockwise edge p → q.
            let n = [q[1] - p[1], p[0] - q[0]];
            let scale = n[0].abs().max(n[1].abs());
            if scale < 1e-12 || n[0] < -1e-12 || n[1] < -1e-12 {
                return None;
            }
            let n = [n[0].max(0.0) / scale, n[1].max(0.0) / scale];
            Some(Halfspace { normal: vec![n[0], n[1]], bound: n[0] * p[0] + n[1] * p[1] })
        })
        .collect();
    (hull.into_iter().map(|p| vec![p[0], p[1]]).collect(), halfspaces)
}

/// Monotone-chain convex hull, counter-clockwise, starting from the
/// lexicographically smallest point.
fn convex_hull(mut points: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    points.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if points.len() <= 2 {
        return points;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &points {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-12 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-12 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

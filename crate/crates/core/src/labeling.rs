//! Vertex label sets: from preferences (`L_i`, `Λ_i`, owner composition), the
//! symmetry and shape validators, and a random generator of symmetric labelings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preferences::{division_from_point, Preference};
use crate::rational_geometry::{facet_set, LabelSet, Permutation, Point};
use crate::triangulation::{OwnerLabeling, Triangulation};

/// A label set per vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLabeling {
    labels: Vec<LabelSet>,
}

impl VertexLabeling {
    pub fn new(labels: Vec<LabelSet>) -> Self {
        Self { labels }
    }

    pub fn get(&self, vertex: usize) -> &LabelSet {
        &self.labels[vertex]
    }

    pub fn labels(&self) -> &[LabelSet] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn set(&mut self, vertex: usize, labels: LabelSet) {
        self.labels[vertex] = labels;
    }

    /// Vertex id → sorted label list, for debugging dumps.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, Vec<usize>> = self
            .labels
            .iter()
            .enumerate()
            .map(|(v, s)| (v.to_string(), s.labels().to_vec()))
            .collect();
        serde_json::to_value(map).expect("string keys")
    }
}

/// `L(x)`: cut indices of the accepted nonempty pieces, plus `J_x` when the
/// empty piece is accepted.
pub fn l_set(preference: &Preference, x: &Point) -> Result<BTreeSet<usize>> {
    let division = division_from_point(x);
    let accepted = preference.accepts(&division);
    let mut out: BTreeSet<usize> = accepted
        .pieces
        .iter()
        .map(|&k| division.pieces()[k].index)
        .collect();
    if accepted.empty {
        out.extend(facet_set(x));
    }
    if out.is_empty() {
        return Err(Error::Assumption {
            player: None,
            reason: format!("{} preference yields no label at {x}", preference.describe()),
        });
    }
    Ok(out)
}

/// `Λ(x)`: `J_x` when `L(x) = J_x`, else the singleton `min(L(x) \ J_x)`.
pub fn lambda_set(preference: &Preference, x: &Point) -> Result<LabelSet> {
    let l = l_set(preference, x)?;
    lambda_from_sets(&l, &facet_set(x))
}

fn lambda_from_sets(l: &BTreeSet<usize>, j: &BTreeSet<usize>) -> Result<LabelSet> {
    if l == j {
        LabelSet::new(j.iter().copied())
    } else {
        let least = l
            .difference(j)
            .next()
            .copied()
            .expect("L differs from J and L is built from pieces and J");
        LabelSet::singleton(least)
    }
}

/// `Λ(v) = Λ_{o(v)}(x_v)` at every vertex.
pub fn build_labeling(
    t: &Triangulation,
    owners: &OwnerLabeling,
    preferences: &[Preference],
) -> Result<VertexLabeling> {
    if preferences.len() != t.n() {
        return Err(Error::Argument(format!(
            "{} preferences for {} players",
            preferences.len(),
            t.n()
        )));
    }
    let results: Vec<Result<LabelSet>> = (0..t.vertex_count())
        .into_par_iter()
        .map(|v| {
            let player = owners.owner(v);
            lambda_set(&preferences[player - 1], t.vertex(v)).map_err(|e| match e {
                Error::Assumption { reason, .. } => Error::Assumption {
                    player: Some(player),
                    reason: format!("{reason} (vertex {v})"),
                },
                other => other,
            })
        })
        .collect();
    let labels = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(VertexLabeling { labels })
}

/// A vertex `v` on the `x_1 = 0` facet with `Λ(r^j v) != ρ^j(Λ(v))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelWitness {
    pub vertex: usize,
    pub j: usize,
}

pub fn nice_labeling_witness(t: &Triangulation, labeling: &VertexLabeling) -> Option<LabelWitness> {
    let n = t.n();
    for v in t.first_facet_vertices() {
        for j in 1..=n {
            let ok = match (t.r_image(j, v), labeling.get(v).rho_image(j, n)) {
                (Some(w), Ok(expected)) => *labeling.get(w) == expected,
                _ => false,
            };
            if !ok {
                return Some(LabelWitness { vertex: v, j });
            }
        }
    }
    None
}

pub fn check_nice_labeling(t: &Triangulation, labeling: &VertexLabeling) -> bool {
    nice_labeling_witness(t, labeling).is_none()
}

/// Whether `labels` is `J_x` or a singleton outside `J_x`.
pub fn has_prop4_shape(x: &Point, labels: &LabelSet) -> bool {
    let j = facet_set(x);
    labels.as_set() == j || (labels.len() == 1 && !j.contains(&labels.labels()[0]))
}

/// First vertex whose label breaks the `J_v`-or-outside-singleton shape.
pub fn prop4_form_witness(t: &Triangulation, labeling: &VertexLabeling) -> Option<usize> {
    (0..t.vertex_count()).find(|&v| !has_prop4_shape(t.vertex(v), labeling.get(v)))
}

/// Shape check, plus comparable supporting faces when `with_supports` is set.
pub fn check_prop4_form(t: &Triangulation, labeling: &VertexLabeling, with_supports: bool) -> bool {
    prop4_form_witness(t, labeling).is_none() && (!with_supports || t.supports_comparable())
}

/// Which label sets the random generator may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelShape {
    /// Any nonempty proper subset of `[n]`.
    Proper,
    /// `J_v` or a singleton outside `J_v`.
    Prop4,
}

fn candidate_sets(n: usize, x: &Point, shape: LabelShape) -> Vec<LabelSet> {
    match shape {
        LabelShape::Proper => (1u32..(1 << n) - 1)
            .map(|mask| {
                LabelSet::new((1..=n).filter(|i| mask & (1 << (i - 1)) != 0)).expect("nonempty mask")
            })
            .collect(),
        LabelShape::Prop4 => {
            let j = facet_set(x);
            let mut out: Vec<LabelSet> = Vec::new();
            if !j.is_empty() {
                out.push(LabelSet::new(j.iter().copied()).expect("nonempty"));
            }
            out.extend((1..=n).filter(|m| !j.contains(m)).map(|m| LabelSet::singleton(m).expect("1-based")));
            out
        }
    }
}

fn permute(set: &LabelSet, perm: &Permutation) -> LabelSet {
    LabelSet::new(set.labels().iter().map(|&i| perm.apply(i))).expect("permutation of a nonempty set")
}

/// Random labeling that is symmetric on the boundary.
///
/// Boundary vertices are grouped into orbits of the maps `r^j`. Each orbit gets
/// a root label drawn uniformly among the sets compatible with every cycle of
/// the orbit graph, and the rest of the orbit follows from `ρ^j`. Interior
/// vertices are labeled independently.
pub fn random_nice_labeling<R: Rng + ?Sized>(
    t: &Triangulation,
    shape: LabelShape,
    rng: &mut R,
) -> Result<VertexLabeling> {
    let n = t.n();
    if n < 2 {
        return Err(Error::Argument("nice labelings with proper subsets need n >= 2".into()));
    }
    let rhos: Vec<Permutation> = (1..=n).map(|j| Permutation::rho(j, n)).collect::<Result<_>>()?;

    // orbit graph: v --(ρ^j)--> r^j(v) for v on the x_1 = 0 facet
    let mut edges: Vec<Vec<(usize, Permutation)>> = vec![Vec::new(); t.vertex_count()];
    for v in t.first_facet_vertices() {
        for j in 1..=n {
            let w = t.r_image(j, v).ok_or_else(|| {
                Error::Precondition(format!("triangulation is not nice: r^{j} of vertex {v} is missing"))
            })?;
            edges[v].push((w, rhos[j - 1].clone()));
            edges[w].push((v, rhos[j - 1].inverse()));
        }
    }

    let mut labels: Vec<Option<LabelSet>> = vec![None; t.vertex_count()];
    let mut transport: Vec<Option<Permutation>> = vec![None; t.vertex_count()];
    for root in 0..t.vertex_count() {
        if labels[root].is_some() {
            continue;
        }
        if edges[root].is_empty() {
            let options = candidate_sets(n, t.vertex(root), shape);
            labels[root] = Some(options[rng.random_range(0..options.len())].clone());
            continue;
        }
        let mut component = vec![root];
        let mut stabilizer: Vec<Permutation> = Vec::new();
        transport[root] = Some(Permutation::identity(n));
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let gv = transport[v].clone().expect("visited");
            for (w, perm) in &edges[v] {
                let through = perm.compose(&gv);
                match &transport[*w] {
                    None => {
                        transport[*w] = Some(through);
                        component.push(*w);
                        queue.push_back(*w);
                    }
                    Some(gw) => {
                        let cycle = gw.inverse().compose(&through);
                        if cycle != Permutation::identity(n) && !stabilizer.contains(&cycle) {
                            stabilizer.push(cycle);
                        }
                    }
                }
            }
        }
        let options: Vec<LabelSet> = candidate_sets(n, t.vertex(root), shape)
            .into_iter()
            .filter(|s| stabilizer.iter().all(|h| permute(s, h) == *s))
            .collect();
        if options.is_empty() {
            return Err(Error::Invariant(format!("orbit of vertex {root} admits no symmetric label")));
        }
        let chosen = options[rng.random_range(0..options.len())].clone();
        for &w in &component {
            let gw = transport[w].as_ref().expect("in component");
            labels[w] = Some(permute(&chosen, gw));
        }
    }
    let labeling = VertexLabeling {
        labels: labels.into_iter().map(|l| l.expect("every vertex labeled")).collect(),
    };
    if let Some(w) = nice_labeling_witness(t, &labeling) {
        return Err(Error::Invariant(format!(
            "generated labeling is not symmetric at vertex {} under r^{}",
            w.vertex, w.j
        )));
    }
    Ok(labeling)
}

//! Determinant sums over oriented simplices, distinct representatives, and the
//! search for fully-labeled simplices.

use num::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::labeling::{check_nice_labeling, nice_labeling_witness, prop4_form_witness, VertexLabeling};
use crate::rational_geometry::{
    barycenter, det_columns, format_rational, proj_point, support_face, AffinePoint, LabelSet, Permutation,
    Rational,
};
use crate::triangulation::Triangulation;

/// A point of the affine hull of `supp(v)` for every vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointLabeling {
    points: Vec<AffinePoint>,
}

fn affine_hull_violation(t: &Triangulation, v: usize, point: &AffinePoint) -> Option<Error> {
    let support = support_face(t.vertex(v));
    let outside = point.dim() != t.n()
        || point
            .coords()
            .iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && !support.contains(&(i + 1)));
    outside.then(|| Error::AffineHull {
        vertex: v,
        label: format!(
            "({})",
            point.coords().iter().map(format_rational).collect::<Vec<_>>().join(", ")
        ),
        support: support.into_iter().collect(),
    })
}

impl PointLabeling {
    /// Checks the affine-hull condition at every vertex.
    pub fn new(t: &Triangulation, points: Vec<AffinePoint>) -> Result<Self> {
        if points.len() != t.vertex_count() {
            return Err(Error::Argument(format!(
                "{} points for {} vertices",
                points.len(),
                t.vertex_count()
            )));
        }
        if let Some(err) = points.iter().enumerate().find_map(|(v, p)| affine_hull_violation(t, v, p)) {
            return Err(err);
        }
        Ok(Self { points })
    }

    /// Skips the affine-hull check. `det_sum` re-checks it.
    pub fn new_unchecked(points: Vec<AffinePoint>) -> Self {
        Self { points }
    }

    pub fn get(&self, vertex: usize) -> &AffinePoint {
        &self.points[vertex]
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }
}

/// `λ(v) = b^{Λ(v)}`, rejected when some `b^{Λ(v)}` leaves the hull of `supp(v)`.
pub fn lambda_from_labels(t: &Triangulation, labeling: &VertexLabeling) -> Result<PointLabeling> {
    PointLabeling::new(t, barycenter_points(t, labeling)?)
}

/// `b^{Λ(v)}` per vertex, no hull check.
pub fn barycenter_points(t: &Triangulation, labeling: &VertexLabeling) -> Result<Vec<AffinePoint>> {
    if labeling.len() != t.vertex_count() {
        return Err(Error::Argument(format!(
            "labeling has {} entries for {} vertices",
            labeling.len(),
            t.vertex_count()
        )));
    }
    labeling
        .labels()
        .iter()
        .map(|s| barycenter(s, t.n()).map(|p| p.to_affine()))
        .collect()
}

/// Random point labeling respecting supports: random small rationals on
/// `supp(v)`, the last support coordinate fixing the sum. Negative values occur.
pub fn random_affine_labeling<R: Rng + ?Sized>(t: &Triangulation, rng: &mut R) -> PointLabeling {
    let n = t.n();
    let points = (0..t.vertex_count())
        .map(|v| {
            let support: Vec<usize> = support_face(t.vertex(v)).into_iter().collect();
            let mut coords = vec![Rational::zero(); n];
            let mut rest = Rational::one();
            for &i in &support[..support.len() - 1] {
                let c = Rational::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=5).into());
                rest -= &c;
                coords[i - 1] = c;
            }
            coords[support[support.len() - 1] - 1] = rest;
            AffinePoint::new(coords).expect("sum is forced to 1")
        })
        .collect();
    PointLabeling { points }
}

fn oriented_det(t: &Triangulation, simplex: usize, columns: &[&[Rational]]) -> Rational {
    let det = det_columns(columns).expect("square by construction");
    if t.orientation(simplex) < 0 {
        -det
    } else {
        det
    }
}

fn simplex_det(t: &Triangulation, simplex: usize, points: &[AffinePoint]) -> Rational {
    let columns: Vec<&[Rational]> = t.simplices()[simplex].iter().map(|&v| points[v].coords()).collect();
    oriented_det(t, simplex, &columns)
}

fn check_for_det_sum(t: &Triangulation, lambda: &PointLabeling) -> Result<()> {
    if lambda.points.len() != t.vertex_count() {
        return Err(Error::Argument("point labeling does not match the triangulation".into()));
    }
    match lambda.points.iter().enumerate().find_map(|(v, p)| affine_hull_violation(t, v, p)) {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

/// `Σ det(λ(v_1), ..., λ(v_n))` over positively oriented maximal simplices.
pub fn det_sum(t: &Triangulation, lambda: &PointLabeling) -> Result<Rational> {
    check_for_det_sum(t, lambda)?;
    Ok((0..t.simplex_count())
        .into_par_iter()
        .map(|s| simplex_det(t, s, &lambda.points))
        .reduce(Rational::zero, |a, b| a + b))
}

pub fn det_sum_serial(t: &Triangulation, lambda: &PointLabeling) -> Result<Rational> {
    check_for_det_sum(t, lambda)?;
    Ok((0..t.simplex_count())
        .map(|s| simplex_det(t, s, &lambda.points))
        .fold(Rational::zero(), |a, b| a + b))
}

pub fn is_unit(value: &Rational) -> bool {
    value.abs().is_one()
}

/// `det(a_1..a_n) = (-1)^(n-1) Σ_i (-1)^(i-1) det(proj a_1 .. omit i .. proj a_n)`
/// for columns summing to 1.
pub fn boundary_identity_check(points: &[AffinePoint]) -> Result<bool> {
    let n = points.len();
    if n < 2 || points.iter().any(|p| p.dim() != n) {
        return Err(Error::Argument("need n >= 2 points of dimension n".into()));
    }
    let lhs = det_columns(&points.iter().map(AffinePoint::coords).collect::<Vec<_>>())?;
    let projected: Vec<Vec<Rational>> =
        points.iter().map(|p| proj_point(p.coords())).collect::<Result<_>>()?;
    let mut rhs = Rational::zero();
    for omit in 0..n {
        let minor: Vec<&[Rational]> = projected
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != omit)
            .map(|(_, c)| c.as_slice())
            .collect();
        let d = det_columns(&minor)?;
        if omit % 2 == 0 {
            rhs += d;
        } else {
            rhs -= d;
        }
    }
    if n.is_multiple_of(2) {
        rhs = -rhs;
    }
    Ok(lhs == rhs)
}

fn augment(sets: &[LabelSet], k: usize, owner: &mut [Option<usize>], seen: &mut [bool], fixed: &[bool]) -> bool {
    for &label in sets[k].labels() {
        let l = label - 1;
        if seen[l] || fixed[l] {
            continue;
        }
        seen[l] = true;
        if owner[l].is_none() || augment(sets, owner[l].expect("checked"), owner, seen, fixed) {
            owner[l] = Some(k);
            return true;
        }
    }
    false
}

/// Whether sets `from..` can be matched into the labels not in `fixed`.
fn matchable(sets: &[LabelSet], from: usize, fixed: &[bool]) -> bool {
    let mut owner = vec![None; fixed.len()];
    (from..sets.len()).all(|k| {
        let mut seen = vec![false; fixed.len()];
        augment(sets, k, &mut owner, &mut seen, fixed)
    })
}

/// Distinct representatives for `n` label sets within `[n]`, the
/// lexicographically smallest vector of picks, or `None` when Hall fails.
pub fn sdr(sets: &[LabelSet]) -> Option<Permutation> {
    let n = sets.len();
    if sets.iter().any(|s| s.max() > n) {
        return None;
    }
    let mut fixed = vec![false; n];
    let mut picks = Vec::with_capacity(n);
    for k in 0..n {
        let label = sets[k].labels().iter().copied().find(|&label| {
            if fixed[label - 1] {
                return false;
            }
            fixed[label - 1] = true;
            let ok = matchable(sets, k + 1, &fixed);
            fixed[label - 1] = false;
            ok
        })?;
        fixed[label - 1] = true;
        picks.push(label);
    }
    Some(Permutation::new(picks).expect("distinct picks in [n]"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Simplices with `det(b^{Λ(v_1)}, ..., b^{Λ(v_n)}) != 0`.
    Det,
    /// Simplices whose label sets have distinct representatives.
    Matching,
}

/// A maximal simplex with one distinct label picked per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullyLabeledWitness {
    pub simplex: usize,
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// `sdr.apply(k)` is the label picked at `vertices[k - 1]`.
    pub sdr: Permutation,
    /// Barycenter determinant in the positive orientation.
    pub det_value: Rational,
}

impl FullyLabeledWitness {
    pub fn pick(&self, position: usize) -> usize {
        self.sdr.apply(position + 1)
    }

    /// Picks are distinct members of the vertex label sets.
    pub fn is_consistent(&self, labeling: &VertexLabeling) -> bool {
        self.vertices
            .iter()
            .enumerate()
            .all(|(k, &v)| labeling.get(v).contains(self.pick(k)))
    }
}

/// Fully-labeled simplices in lexicographic vertex-id order.
pub fn find_fully_labeled(
    t: &Triangulation,
    labeling: &VertexLabeling,
    mode: SearchMode,
) -> Result<Vec<FullyLabeledWitness>> {
    let points = barycenter_points(t, labeling)?;
    let found: Vec<Result<FullyLabeledWitness>> = (0..t.simplex_count())
        .into_par_iter()
        .filter_map(|s| {
            let vertices = t.simplices()[s].clone();
            let det_value = simplex_det(t, s, &points);
            if mode == SearchMode::Det && det_value.is_zero() {
                return None;
            }
            let sets: Vec<LabelSet> = vertices.iter().map(|&v| labeling.get(v).clone()).collect();
            match sdr(&sets) {
                Some(sdr) => Some(Ok(FullyLabeledWitness { simplex: s, vertices, sdr, det_value })),
                None if !det_value.is_zero() => Some(Err(Error::Invariant(format!(
                    "simplex {vertices:?} has nonzero determinant but no distinct representatives"
                )))),
                None => None,
            }
        })
        .collect();
    let mut found = found.into_iter().collect::<Result<Vec<_>>>()?;
    found.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(found)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Whether the existence guarantee covers `n`.
pub fn is_guaranteed(n: usize) -> bool {
    is_prime(n) || n == 4
}

/// Every hypothesis of the existence guarantee, each failure named.
pub fn check_theorem_preconditions(t: &Triangulation, labeling: &VertexLabeling) -> Result<()> {
    let n = t.n();
    if !is_guaranteed(n) {
        return Err(Error::Precondition(format!("n = {n} is neither prime nor 4")));
    }
    if labeling.len() != t.vertex_count() {
        return Err(Error::Precondition("labeling does not cover every vertex".into()));
    }
    if let Some(w) = t.niceness_witness() {
        return Err(Error::Precondition(format!(
            "triangulation is not nice: simplex {:?} under r^{}",
            w.simplex, w.j
        )));
    }
    if let Some(w) = nice_labeling_witness(t, labeling) {
        return Err(Error::Precondition(format!(
            "labeling is not nice at vertex {} under rho^{}",
            w.vertex, w.j
        )));
    }
    if let Some(v) = (0..t.vertex_count()).find(|&v| !labeling.get(v).is_proper_subset_of(n)) {
        return Err(Error::Precondition(format!(
            "label set {} at vertex {v} is not a proper subset of [{n}]",
            labeling.get(v)
        )));
    }
    if n == 4 {
        if let Some((u, v)) = t.incomparable_edge() {
            return Err(Error::Precondition(format!(
                "supporting faces of adjacent vertices {u} and {v} are not comparable"
            )));
        }
        if let Some(v) = prop4_form_witness(t, labeling) {
            return Err(Error::Precondition(format!(
                "label set {} at vertex {v} is neither J_v nor a singleton outside J_v",
                labeling.get(v)
            )));
        }
    }
    debug_assert!(check_nice_labeling(t, labeling));
    Ok(())
}

/// First det-mode witness after checking every hypothesis.
pub fn theorem_witness(t: &Triangulation, labeling: &VertexLabeling) -> Result<FullyLabeledWitness> {
    check_theorem_preconditions(t, labeling)?;
    find_fully_labeled(t, labeling, SearchMode::Det)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::TheoremViolation {
            n: t.n(),
            instance: crate::io::instance_json(t, labeling).to_string(),
        })
}

/// `Σ det(b^{Λ(v_1)}, ..., b^{Λ(v_n)})` over positively oriented simplices.
pub fn nonzero_scan(t: &Triangulation, labeling: &VertexLabeling) -> Result<Rational> {
    let points = barycenter_points(t, labeling)?;
    Ok((0..t.simplex_count())
        .into_par_iter()
        .map(|s| simplex_det(t, s, &points))
        .reduce(Rational::zero, |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{random_nice_labeling, LabelShape};
    use crate::rational_geometry::{int, rat, Point};
    use crate::triangulation::DEFAULT_SIMPLEX_BUDGET;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(labels: &[usize]) -> LabelSet {
        LabelSet::new(labels.iter().copied()).unwrap()
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    fn identity_lambda(t: &Triangulation) -> PointLabeling {
        PointLabeling::new(t, t.vertices().iter().map(Point::to_affine).collect()).unwrap()
    }

    #[test]
    fn lambda_from_labels_examples() {
        let t = Triangulation::standard(3).unwrap();
        let labeling = VertexLabeling::new(vec![set(&[1]), set(&[2]), set(&[3])]);
        let lambda = lambda_from_labels(&t, &labeling).unwrap();
        assert_eq!(lambda, identity_lambda(&t));

        let t = Triangulation::sd_pow(3, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let mid = t.vertex_id(&[rat(1, 2), rat(1, 2), int(0)]).unwrap();
        let mut labels: Vec<LabelSet> = (0..t.vertex_count())
            .map(|v| LabelSet::singleton(*support_face(t.vertex(v)).iter().next().unwrap()).unwrap())
            .collect();
        labels[mid] = set(&[3]);
        match lambda_from_labels(&t, &VertexLabeling::new(labels)).unwrap_err() {
            Error::AffineHull { vertex, support, .. } => {
                assert_eq!(vertex, mid);
                assert_eq!(support, vec![1, 2]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn det_sum_examples() {
        let t = Triangulation::standard(3).unwrap();
        assert_eq!(det_sum(&t, &identity_lambda(&t)).unwrap(), int(1));
        for (n, depth) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
            let t = Triangulation::sd_pow(n, depth, DEFAULT_SIMPLEX_BUDGET).unwrap();
            assert!(is_unit(&det_sum(&t, &identity_lambda(&t)).unwrap()));
        }
    }

    #[test]
    fn classical_sperner_labelings_have_unit_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = Triangulation::sd_pow(3, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        for _ in 0..20 {
            let points = (0..t.vertex_count())
                .map(|v| {
                    let support: Vec<usize> = support_face(t.vertex(v)).into_iter().collect();
                    let label = support[rng.random_range(0..support.len())];
                    Point::unit(3, label).unwrap().to_affine()
                })
                .collect();
            let lambda = PointLabeling::new(&t, points).unwrap();
            assert!(is_unit(&det_sum(&t, &lambda).unwrap()));
        }
    }

    #[test]
    fn random_affine_labelings_have_unit_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, depth) in [(2, 2), (3, 1), (3, 2), (4, 1)] {
            let t = Triangulation::sd_pow(n, depth, DEFAULT_SIMPLEX_BUDGET).unwrap();
            for _ in 0..5 {
                let lambda = random_affine_labeling(&t, &mut rng);
                let parallel = det_sum(&t, &lambda).unwrap();
                assert!(is_unit(&parallel), "n={n} N={depth}: {parallel}");
                assert_eq!(parallel, det_sum_serial(&t, &lambda).unwrap());
            }
        }
    }

    #[test]
    fn det_sum_rejects_hull_violations() {
        let t = Triangulation::sd_pow(2, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let mut points: Vec<AffinePoint> = t.vertices().iter().map(Point::to_affine).collect();
        let corner = t.vertex_id(&[int(1), int(0)]).unwrap();
        points[corner] = AffinePoint::new(vec![int(2), int(-1)]).unwrap();
        assert!(PointLabeling::new(&t, points.clone()).is_err());
        let lambda = PointLabeling::new_unchecked(points);
        assert!(matches!(det_sum(&t, &lambda), Err(Error::AffineHull { .. })));
    }

    #[test]
    fn boundary_identity_examples() {
        let e: Vec<AffinePoint> = (1..=3).map(|i| Point::unit(3, i).unwrap().to_affine()).collect();
        assert!(boundary_identity_check(&e).unwrap());
        let repeated = vec![e[0].clone(), e[0].clone(), e[1].clone()];
        assert!(boundary_identity_check(&repeated).unwrap());
        assert!(boundary_identity_check(&e[..1]).is_err());
    }

    fn affine_columns(n: usize) -> impl Strategy<Value = Vec<AffinePoint>> {
        prop::collection::vec(prop::collection::vec((-9i64..10, 1i64..6), n - 1), n).prop_map(move |cols| {
            cols.into_iter()
                .map(|c| {
                    let mut coords: Vec<Rational> = c.into_iter().map(|(p, q)| rat(p, q)).collect();
                    let rest = int(1) - coords.iter().fold(int(0), |acc, x| acc + x);
                    coords.push(rest);
                    AffinePoint::new(coords).unwrap()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn boundary_identity_holds(points in (2usize..=5).prop_flat_map(affine_columns)) {
            prop_assert!(boundary_identity_check(&points).unwrap());
        }

        #[test]
        fn sdr_is_valid_and_hall_decides(
            sets in prop::collection::vec(prop::collection::btree_set(1usize..=4, 1..=4), 4)
        ) {
            let sets: Vec<LabelSet> = sets.into_iter().map(|s| LabelSet::new(s).unwrap()).collect();
            // Hall's condition by brute force over subfamilies
            let hall = (1u32..16).all(|mask| {
                let chosen: Vec<&LabelSet> = (0..4).filter(|k| mask & (1 << k) != 0).map(|k| &sets[k]).collect();
                let union: std::collections::BTreeSet<usize> =
                    chosen.iter().flat_map(|s| s.labels().iter().copied()).collect();
                union.len() >= chosen.len()
            });
            let picked = sdr(&sets);
            prop_assert_eq!(picked.is_some(), hall);
            if let Some(p) = picked {
                for (k, s) in sets.iter().enumerate() {
                    prop_assert!(s.contains(p.apply(k + 1)));
                }
            }
        }
    }

    #[test]
    fn sdr_examples() {
        assert_eq!(sdr(&[set(&[1]), set(&[2]), set(&[3])]), Some(perm(&[1, 2, 3])));
        assert_eq!(sdr(&[set(&[1]), set(&[1]), set(&[2])]), None);
        assert_eq!(sdr(&[set(&[1, 2]), set(&[2, 3]), set(&[1, 3])]), Some(perm(&[1, 2, 3])));
        assert_eq!(sdr(&[set(&[2, 3]), set(&[1, 2]), set(&[2])]), Some(perm(&[3, 1, 2])));
        assert_eq!(sdr(&[set(&[1, 4]), set(&[2])]), None);
        // b^{12}, b^{23}, b^{13} form a circulant matrix: det = 2/8
        let cols = |sets: &[LabelSet]| -> Vec<Vec<Rational>> {
            sets.iter().map(|s| barycenter(s, 3).unwrap().into_coords()).collect()
        };
        assert_eq!(det_columns(&cols(&[set(&[1, 2]), set(&[2, 3]), set(&[1, 3])])).unwrap(), rat(1, 4));
        let repeated = [set(&[1, 2]), set(&[1, 2]), set(&[3])];
        assert_eq!(det_columns(&cols(&repeated)).unwrap(), int(0));
        assert_eq!(sdr(&repeated), Some(perm(&[1, 2, 3])));
    }

    #[test]
    fn search_examples() {
        let t = Triangulation::standard(3).unwrap();
        let labeling = VertexLabeling::new(vec![set(&[1]), set(&[2]), set(&[3])]);
        let found = find_fully_labeled(&t, &labeling, SearchMode::Det).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].sdr, perm(&[1, 2, 3]));
        assert_eq!(found[0].det_value, int(1));

        let ones = VertexLabeling::new(vec![set(&[1]); 3]);
        assert!(find_fully_labeled(&t, &ones, SearchMode::Det).unwrap().is_empty());
        assert!(find_fully_labeled(&t, &ones, SearchMode::Matching).unwrap().is_empty());

        let cyclic = VertexLabeling::new(vec![set(&[1, 2]), set(&[2, 3]), set(&[1, 3])]);
        let found = find_fully_labeled(&t, &cyclic, SearchMode::Det).unwrap();
        assert_eq!(found[0].det_value, rat(1, 4));
        assert_eq!(found[0].sdr, perm(&[1, 2, 3]));

        let repeated = VertexLabeling::new(vec![set(&[1, 2]), set(&[1, 2]), set(&[3])]);
        assert!(find_fully_labeled(&t, &repeated, SearchMode::Det).unwrap().is_empty());
        let matched = find_fully_labeled(&t, &repeated, SearchMode::Matching).unwrap();
        assert_eq!(matched.len(), 1);
        assert_eq!(matched[0].sdr, perm(&[1, 2, 3]));
        assert_eq!(matched[0].det_value, int(0));
    }

    #[test]
    fn theorem_examples() {
        use crate::labeling::build_labeling;
        use crate::preferences::{Density, Preference};
        let attraction = Preference::Attraction(Density::uniform());
        let rejection = Preference::Rejection(Density::uniform());

        let t = Triangulation::sd_pow(3, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let o = t.owner_labeling().unwrap();
        let labeling = build_labeling(&t, &o, &vec![attraction.clone(); 3]).unwrap();
        let w = theorem_witness(&t, &labeling).unwrap();
        assert!(w.is_consistent(&labeling));
        assert!(!w.det_value.is_zero());

        let t = Triangulation::sd_pow(4, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let o = t.owner_labeling().unwrap();
        let prefs = vec![attraction.clone(), rejection.clone(), attraction, rejection];
        let labeling = build_labeling(&t, &o, &prefs).unwrap();
        assert!(theorem_witness(&t, &labeling).is_ok());

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = Triangulation::sd_pow(2, 3, DEFAULT_SIMPLEX_BUDGET).unwrap();
        for _ in 0..10 {
            let labeling = random_nice_labeling(&t, LabelShape::Proper, &mut rng).unwrap();
            assert!(theorem_witness(&t, &labeling).is_ok());
        }
    }

    #[test]
    fn preconditions_are_named() {
        let t = Triangulation::sd_pow(3, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let full = VertexLabeling::new(vec![set(&[1, 2, 3]); t.vertex_count()]);
        let err = theorem_witness(&t, &full).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("proper")), "{err}");

        let t6 = Triangulation::sd_pow(6, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let labeling = VertexLabeling::new(vec![set(&[1]); t6.vertex_count()]);
        assert!(matches!(theorem_witness(&t6, &labeling), Err(Error::Precondition(_))));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t4 = Triangulation::sd_pow(4, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let labeling = random_nice_labeling(&t4, LabelShape::Proper, &mut rng).unwrap();
        if prop4_form_witness(&t4, &labeling).is_some() {
            assert!(matches!(theorem_witness(&t4, &labeling), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn primes() {
        let primes: Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_guaranteed(4) && !is_guaranteed(6) && !is_guaranteed(1));
    }

    #[test]
    fn scan_matches_witness_existence() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = Triangulation::sd_pow(3, 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        for _ in 0..10 {
            let labeling = random_nice_labeling(&t, LabelShape::Proper, &mut rng).unwrap();
            let scan = nonzero_scan(&t, &labeling).unwrap();
            assert!(!scan.is_zero());
            assert!(!find_fully_labeled(&t, &labeling, SearchMode::Det).unwrap().is_empty());
        }
    }
}

//! Divisions of the cake `[0, 1]`, piecewise-constant measures, and the
//! preference oracles players use to accept pieces (or nothing).

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational_geometry::{Point, Rational};
use crate::triangulation::{Triangulation, DEFAULT_SIMPLEX_BUDGET};

/// Open interval `(start, end)` inside `[0, 1]`; endpoints never matter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    start: Rational,
    end: Rational,
}

impl Interval {
    pub fn new(start: Rational, end: Rational) -> Result<Self> {
        if start.is_negative() || end > Rational::one() || start > end {
            return Err(Error::Argument(format!("({start}, {end}) is not an interval of [0, 1]")));
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn end(&self) -> &Rational {
        &self.end
    }

    pub fn length(&self) -> Rational {
        &self.end - &self.start
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end)
    }
}

/// A positive-length piece together with the smallest cut index `j` such that
/// `X_j` is its right endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub interval: Interval,
    pub index: usize,
}

/// Cuts `0 = X_0 <= X_1 <= ... <= X_n = 1` and the positive-length pieces they leave.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    n: usize,
    cuts: Vec<Rational>,
    pieces: Vec<Piece>,
}

impl Division {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Position in [`Division::pieces`] of the piece `(X_{j-1}, X_j)`, if it has positive length.
    pub fn position_of_index(&self, j: usize) -> Option<usize> {
        self.pieces.iter().position(|p| p.index == j)
    }

    pub fn intervals(&self) -> Vec<&Interval> {
        self.pieces.iter().map(|p| &p.interval).collect()
    }
}

/// Cuts at the prefix sums of `x`; zero-length pieces are dropped.
pub fn division_from_point(x: &Point) -> Division {
    let n = x.dim();
    let mut cuts = Vec::with_capacity(n + 1);
    cuts.push(Rational::zero());
    let mut acc = Rational::zero();
    for c in x.coords() {
        acc += c;
        cuts.push(acc.clone());
    }
    let pieces = (1..=n)
        .filter(|&j| cuts[j] > cuts[j - 1])
        .map(|j| Piece {
            interval: Interval {
                start: cuts[j - 1].clone(),
                end: cuts[j].clone(),
            },
            index: j,
        })
        .collect();
    Division { n, cuts, pieces }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySegment {
    pub start: Rational,
    pub end: Rational,
    pub value: Rational,
}

/// Piecewise-constant density on `[0, 1]` with rational breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    segments: Vec<DensitySegment>,
}

impl Density {
    pub fn new(segments: Vec<DensitySegment>) -> Result<Self> {
        let mut expected_start = Rational::zero();
        for s in &segments {
            if s.start != expected_start || s.end <= s.start {
                return Err(Error::Argument(format!(
                    "density segments must be contiguous from 0 to 1; got ({}, {}) after {expected_start}",
                    s.start, s.end
                )));
            }
            if s.value.is_negative() {
                return Err(Error::Argument("density values are nonnegative".into()));
            }
            expected_start = s.end.clone();
        }
        if expected_start != Rational::one() {
            return Err(Error::Argument("density segments must end at 1".into()));
        }
        let density = Self { segments };
        if !density.total_mass().is_positive() {
            return Err(Error::Argument("density has zero total mass".into()));
        }
        Ok(density)
    }

    pub fn uniform() -> Self {
        Self {
            segments: vec![DensitySegment {
                start: Rational::zero(),
                end: Rational::one(),
                value: Rational::one(),
            }],
        }
    }

    pub fn segments(&self) -> &[DensitySegment] {
        &self.segments
    }

    pub fn total_mass(&self) -> Rational {
        self.segments.iter().map(|s| &s.value * (&s.end - &s.start)).sum()
    }

    fn integrate(&self, start: &Rational, end: &Rational) -> Rational {
        let mut total = Rational::zero();
        for s in &self.segments {
            let lo = if s.start > *start { &s.start } else { start };
            let hi = if s.end < *end { &s.end } else { end };
            if hi > lo {
                total += &s.value * (hi - lo);
            }
        }
        total
    }
}

/// Integral of the density over a piece; the empty piece weighs nothing.
pub fn measure_of(density: &Density, piece: Option<&Interval>) -> Rational {
    match piece {
        Some(i) => density.integrate(&i.start, &i.end),
        None => Rational::zero(),
    }
}

/// Lebesgue measure of `A △ B`, with `None` standing for the empty set.
pub fn sym_diff_distance(a: Option<&Interval>, b: Option<&Interval>) -> Rational {
    let len = |i: Option<&Interval>| i.map(Interval::length).unwrap_or_else(Rational::zero);
    let overlap = match (a, b) {
        (Some(a), Some(b)) => {
            let lo = if a.start > b.start { &a.start } else { &b.start };
            let hi = if a.end < b.end { &a.end } else { &b.end };
            if hi > lo {
                hi - lo
            } else {
                Rational::zero()
            }
        }
        _ => Rational::zero(),
    };
    len(a) + len(b) - overlap * Rational::from_integer(2.into())
}

/// What a player accepts from a division: positions into [`Division::pieces`]
/// and whether the empty piece is acceptable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Acceptance {
    pub pieces: Vec<usize>,
    pub empty: bool,
}

impl Acceptance {
    pub fn only_empty() -> Self {
        Self {
            pieces: Vec::new(),
            empty: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && !self.empty
    }

    pub fn accepts_piece(&self, position: usize) -> bool {
        self.pieces.contains(&position)
    }
}

fn extremal_pieces(density: &Density, division: &Division, want_max: bool) -> Vec<usize> {
    let measures: Vec<Rational> = division
        .pieces
        .iter()
        .map(|p| measure_of(density, Some(&p.interval)))
        .collect();
    let best = if want_max {
        measures.iter().max()
    } else {
        measures.iter().min()
    };
    match best {
        Some(best) => (0..measures.len()).filter(|&k| measures[k] == *best).collect(),
        None => Vec::new(),
    }
}

/// The heaviest pieces.
pub fn attraction_accepts(density: &Density, division: &Division) -> Acceptance {
    Acceptance {
        pieces: extremal_pieces(density, division, true),
        empty: false,
    }
}

/// The lightest pieces when there are exactly `n` of them, otherwise only the empty piece.
pub fn rejection_accepts(density: &Density, n: usize, division: &Division) -> Acceptance {
    if division.len() == n {
        Acceptance {
            pieces: extremal_pieces(density, division, false),
            empty: false,
        }
    } else {
        Acceptance::only_empty()
    }
}

/// Externally supplied preference. The closure must be pure and must satisfy
/// the closed-preferences property; neither is checked.
#[derive(Clone)]
pub struct CustomPreference {
    name: String,
    eval: Arc<dyn Fn(&Division) -> Acceptance + Send + Sync>,
}

impl CustomPreference {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Division) -> Acceptance + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomPreference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPreference").field("name", &self.name).finish()
    }
}

#[derive(Clone, Debug)]
pub enum Preference {
    Attraction(Density),
    Rejection(Density),
    Custom(CustomPreference),
}

impl Preference {
    pub fn accepts(&self, division: &Division) -> Acceptance {
        match self {
            Preference::Attraction(d) => attraction_accepts(d, division),
            Preference::Rejection(d) => rejection_accepts(d, division.n(), division),
            Preference::Custom(c) => (c.eval)(division),
        }
    }

    pub fn density(&self) -> Option<&Density> {
        match self {
            Preference::Attraction(d) | Preference::Rejection(d) => Some(d),
            Preference::Custom(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Preference::Attraction(_) => "attraction".into(),
            Preference::Rejection(_) => "rejection".into(),
            Preference::Custom(c) => format!("custom:{}", c.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullDivisionViolation {
    pub point: Point,
    pub reason: String,
}

/// Spot check of the full division assumption on interior sample points.
pub fn validate_full_division(
    preference: &Preference,
    n: usize,
    samples: &[Point],
) -> std::result::Result<(), FullDivisionViolation> {
    for x in samples {
        let division = division_from_point(x);
        if division.len() != n {
            continue;
        }
        let accepted = preference.accepts(&division);
        let reason = if accepted.is_empty() {
            "accepts nothing"
        } else if accepted.empty {
            "accepts the empty piece although the cake is in n pieces"
        } else {
            continue;
        };
        return Err(FullDivisionViolation {
            point: x.clone(),
            reason: reason.into(),
        });
    }
    Ok(())
}

/// Interior vertices of `sd^2` of the simplex (`sd^1` when `sd^2` is too large);
/// always includes the barycenter.
pub fn default_samples(n: usize) -> Vec<Point> {
    let depth = if n <= 5 { 2 } else { 1 };
    match Triangulation::sd_pow(n, depth, DEFAULT_SIMPLEX_BUDGET) {
        Ok(t) => t
            .vertices()
            .iter()
            .filter(|p| p.coords().iter().all(Signed::is_positive))
            .cloned()
            .collect(),
        Err(_) => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_geometry::{int, rat};
    use proptest::prelude::*;

    fn point(coords: &[(i64, i64)]) -> Point {
        Point::new(coords.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    fn interval(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    fn front_loaded() -> Density {
        Density::new(vec![
            DensitySegment { start: int(0), end: rat(1, 2), value: int(2) },
            DensitySegment { start: rat(1, 2), end: int(1), value: int(0) },
        ])
        .unwrap()
    }

    fn summary(d: &Division) -> Vec<(Rational, Rational, usize)> {
        d.pieces()
            .iter()
            .map(|p| (p.interval.start().clone(), p.interval.end().clone(), p.index))
            .collect()
    }

    #[test]
    fn divisions_from_points() {
        let d = division_from_point(&point(&[(1, 4), (1, 4), (1, 2)]));
        assert_eq!(
            summary(&d),
            vec![(int(0), rat(1, 4), 1), (rat(1, 4), rat(1, 2), 2), (rat(1, 2), int(1), 3)]
        );
        let d = division_from_point(&point(&[(1, 2), (1, 2), (0, 1)]));
        assert_eq!(summary(&d), vec![(int(0), rat(1, 2), 1), (rat(1, 2), int(1), 2)]);
        assert_eq!(d.cuts(), &[int(0), rat(1, 2), int(1), int(1)]);
        let d = division_from_point(&Point::unit(3, 1).unwrap());
        assert_eq!(summary(&d), vec![(int(0), int(1), 1)]);
        // leading zero: first nonempty piece ends at X_2
        let d = division_from_point(&point(&[(0, 1), (1, 3), (2, 3)]));
        assert_eq!(summary(&d), vec![(int(0), rat(1, 3), 2), (rat(1, 3), int(1), 3)]);
    }

    #[test]
    fn measures() {
        let u = Density::uniform();
        assert_eq!(measure_of(&u, Some(&interval((1, 4), (1, 2)))), rat(1, 4));
        assert_eq!(measure_of(&front_loaded(), Some(&interval((1, 2), (1, 1)))), int(0));
        assert_eq!(measure_of(&front_loaded(), None), int(0));
        assert!(Interval::new(rat(1, 2), rat(1, 4)).is_err());
        assert!(Interval::new(rat(-1, 2), rat(1, 4)).is_err());
        assert!(Density::new(vec![DensitySegment { start: int(0), end: rat(1, 2), value: int(1) }]).is_err());
        assert!(Density::new(vec![DensitySegment { start: int(0), end: int(1), value: int(0) }]).is_err());
    }

    #[test]
    fn symmetric_difference() {
        let half = interval((0, 1), (1, 2));
        assert_eq!(sym_diff_distance(Some(&half), Some(&half)), int(0));
        assert_eq!(sym_diff_distance(Some(&half), None), rat(1, 2));
        assert_eq!(sym_diff_distance(Some(&half), Some(&interval((1, 4), (3, 4)))), rat(1, 2));
        assert_eq!(sym_diff_distance(None, None), int(0));
    }

    #[test]
    fn attraction_examples() {
        let u = Density::uniform();
        let d = division_from_point(&point(&[(1, 4), (1, 4), (1, 2)]));
        assert_eq!(attraction_accepts(&u, &d).pieces, vec![2]);
        let thirds = division_from_point(&point(&[(1, 3), (1, 3), (1, 3)]));
        assert_eq!(attraction_accepts(&u, &thirds).pieces, vec![0, 1, 2]);
        let halves = division_from_point(&point(&[(1, 2), (1, 2)]));
        let acc = attraction_accepts(&front_loaded(), &halves);
        assert_eq!(acc, Acceptance { pieces: vec![0], empty: false });
    }

    #[test]
    fn rejection_examples() {
        let u = Density::uniform();
        let thirds = division_from_point(&point(&[(1, 3), (1, 3), (1, 3)]));
        assert_eq!(rejection_accepts(&u, 3, &thirds).pieces, vec![0, 1, 2]);
        let two = division_from_point(&point(&[(1, 2), (1, 2), (0, 1)]));
        assert_eq!(rejection_accepts(&u, 3, &two), Acceptance::only_empty());
        let d = division_from_point(&point(&[(1, 4), (1, 4), (1, 2)]));
        assert_eq!(rejection_accepts(&u, 3, &d).pieces, vec![0, 1]);
    }

    #[test]
    fn full_division_checks() {
        let samples = default_samples(3);
        assert!(samples.contains(&point(&[(1, 3), (1, 3), (1, 3)])));
        assert!(validate_full_division(&Preference::Rejection(Density::uniform()), 3, &samples).is_ok());
        assert!(validate_full_division(&Preference::Attraction(front_loaded()), 3, &samples).is_ok());
        let poisoned = Preference::Custom(CustomPreference::new("poisoned", |_| Acceptance::only_empty()));
        let err = validate_full_division(&poisoned, 3, &samples).unwrap_err();
        assert_eq!(err.point, samples[0]);
        let silent = Preference::Custom(CustomPreference::new("silent", |_| Acceptance::default()));
        assert_eq!(validate_full_division(&silent, 3, &samples).unwrap_err().reason, "accepts nothing");
    }

    fn division_strategy() -> impl Strategy<Value = Division> {
        prop::collection::vec(0i64..5, 2..6).prop_filter_map("nonzero", |raw| {
            let total: i64 = raw.iter().sum();
            (total > 0).then(|| {
                division_from_point(&Point::new(raw.iter().map(|&v| rat(v, total)).collect()).unwrap())
            })
        })
    }

    fn density_strategy() -> impl Strategy<Value = Density> {
        prop::collection::vec((1i64..4, 0i64..5), 1..5).prop_filter_map("mass", |parts| {
            let total: i64 = parts.iter().map(|p| p.0).sum();
            let mut start = int(0);
            let mut segments = Vec::new();
            for (w, v) in parts {
                let end = &start + rat(w, total);
                segments.push(DensitySegment { start: start.clone(), end: end.clone(), value: int(v) });
                start = end;
            }
            Density::new(segments).ok()
        })
    }

    fn interval_strategy() -> impl Strategy<Value = Option<Interval>> {
        prop::option::of((0i64..9, 0i64..9).prop_map(|(a, b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Interval::new(rat(lo, 8), rat(hi, 8)).unwrap()
        }))
    }

    proptest! {
        #[test]
        fn pieces_partition_and_measures_add(d in division_strategy(), density in density_strategy()) {
            let total: Rational = d.pieces().iter().map(|p| measure_of(&density, Some(&p.interval))).sum();
            prop_assert_eq!(total, density.total_mass());
            let lengths: Rational = d.pieces().iter().map(|p| p.interval.length()).sum();
            prop_assert_eq!(lengths, int(1));
            prop_assert!(d.pieces().windows(2).all(|w| w[0].index < w[1].index));
        }

        #[test]
        fn measure_is_additive(a in 0i64..9, b in 0i64..9, c in 0i64..9, density in density_strategy()) {
            let mut v = [a, b, c];
            v.sort_unstable();
            let [a, b, c] = v;
            let whole = measure_of(&density, Some(&Interval::new(rat(a, 8), rat(c, 8)).unwrap()));
            let left = measure_of(&density, Some(&Interval::new(rat(a, 8), rat(b, 8)).unwrap()));
            let right = measure_of(&density, Some(&Interval::new(rat(b, 8), rat(c, 8)).unwrap()));
            prop_assert_eq!(whole, left + right);
        }

        #[test]
        fn sym_diff_is_a_metric(a in interval_strategy(), b in interval_strategy(), c in interval_strategy()) {
            let d = |x: &Option<Interval>, y: &Option<Interval>| sym_diff_distance(x.as_ref(), y.as_ref());
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(!d(&a, &b).is_negative());
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
            prop_assert_eq!(d(&a, &a), int(0));
        }

        #[test]
        fn extremal_sets_ignore_piece_order(parts in prop::collection::vec(1i64..4, 3)) {
            // reversing the cake with a uniform density permutes the pieces
            let total: i64 = parts.iter().sum();
            let x = Point::new(parts.iter().map(|&v| rat(v, total)).collect()).unwrap();
            let y = Point::new(parts.iter().rev().map(|&v| rat(v, total)).collect()).unwrap();
            let (dx, dy) = (division_from_point(&x), division_from_point(&y));
            let u = Density::uniform();
            let lens = |d: &Division, acc: Acceptance| {
                let mut v: Vec<Rational> = acc.pieces.iter().map(|&k| d.pieces()[k].interval.length()).collect();
                v.sort();
                v
            };
            prop_assert_eq!(lens(&dx, attraction_accepts(&u, &dx)), lens(&dy, attraction_accepts(&u, &dy)));
            prop_assert_eq!(lens(&dx, rejection_accepts(&u, 3, &dx)), lens(&dy, rejection_accepts(&u, 3, &dy)));
        }
    }

    #[test]
    fn symmetric_points_give_the_same_division() {
        let t = Triangulation::sd_pow(3, 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        for v in t.first_facet_vertices() {
            let x = t.vertex(v);
            for j in 1..=3 {
                let y = x.r_apply(j).unwrap();
                assert_eq!(division_from_point(x).intervals(), division_from_point(&y).intervals());
            }
        }
    }
}

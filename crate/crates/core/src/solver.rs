//! Envy-free division by global mesh refinement: label `sd^N`, take a
//! fully-labeled simplex, cut the cake near it and hand out the picked pieces.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::labeling::build_labeling;
use crate::preferences::{
    default_samples, division_from_point, measure_of, validate_full_division, Division, Preference,
};
use crate::rational_geometry::{rat, Point, Rational};
use crate::sperner_engine::{
    check_theorem_preconditions, find_fully_labeled, is_guaranteed, FullyLabeledWitness, SearchMode,
};
use crate::triangulation::{simplex_count_after, OwnerLabeling, Triangulation, DEFAULT_SIMPLEX_BUDGET};

#[derive(Clone, Debug)]
pub struct Problem {
    n: usize,
    players: Vec<Preference>,
}

impl Problem {
    pub fn new(players: Vec<Preference>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Argument("a problem needs at least one player".into()));
        }
        Ok(Self { n: players.len(), players })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> &[Preference] {
        &self.players
    }

    pub fn has_custom(&self) -> bool {
        self.players.iter().any(|p| matches!(p, Preference::Custom(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub max_depth: usize,
    /// Keep refining up to this depth even when the target is met earlier.
    pub min_depth: usize,
    pub target_gap: Rational,
    pub simplex_budget: u128,
    pub mode: SearchMode,
}

impl SolveOptions {
    /// Depth 7 for two or three players, 2 above that; gap target 1/20.
    pub fn for_players(n: usize) -> Self {
        Self {
            max_depth: default_max_depth(n),
            min_depth: 1,
            target_gap: rat(1, 20),
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
            mode: SearchMode::Det,
        }
    }
}

pub fn default_max_depth(n: usize) -> usize {
    if n <= 3 {
        7
    } else {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Every condition holds with zero gap.
    Exact,
    /// Complete assignment within the target gap.
    Approximate,
    /// Depth or simplex budget ran out first.
    BudgetExhausted,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Approximate => "approximate",
            Status::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// `pieces[i - 1]` is player `i`'s position in `division.pieces()`, or `None` for the empty piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub division: Division,
    pub pieces: Vec<Option<usize>>,
}

impl Assignment {
    /// Every piece goes to somebody.
    pub fn is_complete(&self) -> bool {
        (0..self.division.len()).all(|k| self.pieces.contains(&Some(k)))
    }

    /// No piece goes to two players.
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.division.len()];
        self.pieces.iter().flatten().all(|&k| !std::mem::replace(&mut seen[k], true))
    }
}

/// Player `o(v)` gets the piece `(X*_{j-1}, X*_j)` for the label `j` picked at
/// `v`, if that piece exists and the player accepts it.
pub fn extract_assignment(
    witness: &FullyLabeledWitness,
    owners: &OwnerLabeling,
    x_star: &Point,
    players: &[Preference],
) -> Assignment {
    let division = division_from_point(x_star);
    let mut pieces = vec![None; players.len()];
    for (k, &v) in witness.vertices.iter().enumerate() {
        let player = owners.owner(v);
        let pick = division.position_of_index(witness.pick(k));
        pieces[player - 1] = pick.filter(|&pos| players[player - 1].accepts(&division).accepts_piece(pos));
    }
    Assignment { division, pieces }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyCheck {
    /// Per player: the assigned piece (or nothing) is acceptable.
    pub cond_i: Vec<bool>,
    pub cond_ii: bool,
    pub cond_iii: bool,
}

impl EnvyCheck {
    pub fn all(&self) -> bool {
        self.cond_i.iter().all(|&c| c) && self.cond_ii && self.cond_iii
    }
}

pub fn verify_envy_free(assignment: &Assignment, players: &[Preference]) -> EnvyCheck {
    let division = &assignment.division;
    let cond_i = players
        .iter()
        .zip(&assignment.pieces)
        .map(|(p, piece)| {
            let accepted = p.accepts(division);
            match piece {
                Some(pos) => accepted.accepts_piece(*pos),
                None => accepted.empty,
            }
        })
        .collect();
    EnvyCheck {
        cond_i,
        cond_ii: assignment.is_complete(),
        cond_iii: assignment.is_injective(),
    }
}

/// Largest measured shortfall over players; `None` with a custom player.
///
/// Attraction: heaviest piece minus the assigned one. Rejection with `n`
/// pieces: assigned minus lightest. Rejection with fewer pieces: 0 for the
/// empty piece. Assignments the player can never accept (the empty piece at
/// `n` pieces, a real piece below `n`) count as the full mass.
pub fn envy_gap(assignment: &Assignment, players: &[Preference]) -> Option<Rational> {
    let division = &assignment.division;
    let mut gap = Rational::zero();
    for (p, piece) in players.iter().zip(&assignment.pieces) {
        let measure = |d, pos: usize| measure_of(d, Some(&division.pieces()[pos].interval));
        let contribution = match p {
            Preference::Custom(_) => return None,
            Preference::Attraction(d) => {
                let best = (0..division.len()).map(|k| measure(d, k)).max().unwrap_or_else(Rational::zero);
                best - piece.map(|k| measure(d, k)).unwrap_or_else(Rational::zero)
            }
            Preference::Rejection(d) => match (division.len() == division.n(), piece) {
                (true, Some(k)) => {
                    let least = (0..division.len()).map(|k| measure(d, k)).min().expect("n pieces");
                    measure(d, *k) - least
                }
                (false, None) => Rational::zero(),
                _ => d.total_mass(),
            },
        };
        if contribution > gap {
            gap = contribution;
        }
    }
    Some(gap)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthRecord {
    pub depth: usize,
    pub mesh: Rational,
    pub simplices: usize,
    pub witnesses: usize,
    pub gap: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    pub depth: usize,
    pub x_star: Point,
    pub assignment: Assignment,
    pub check: EnvyCheck,
    pub witness: FullyLabeledWitness,
    pub envy_gap: Option<Rational>,
    pub trace: Vec<DepthRecord>,
    /// `n` is prime or 4 and the existence guarantee applies.
    pub guaranteed: bool,
    pub mode: SearchMode,
}

struct Candidate {
    x: Point,
    assignment: Assignment,
    check: EnvyCheck,
    gap: Option<Rational>,
}

impl Candidate {
    /// Ordering key: complete assignments first, then the smaller gap.
    fn key(&self) -> (bool, Option<&Rational>, bool) {
        (!self.check.cond_ii, self.gap.as_ref(), !self.check.all())
    }
}

fn barycenter_of(t: &Triangulation, vertices: &[usize]) -> Point {
    let n = t.n();
    let k = Rational::from_integer(vertices.len().into());
    let coords = (1..=n)
        .map(|i| vertices.iter().map(|&v| t.vertex(v).coord(i).clone()).sum::<Rational>() / &k)
        .collect();
    Point::new(coords).expect("convex combination of simplex points")
}

fn meets_target(candidate: &Candidate, target: &Rational) -> bool {
    match &candidate.gap {
        Some(gap) => candidate.check.cond_ii && candidate.check.cond_iii && gap <= target,
        None => candidate.check.all(),
    }
}

/// Refines `sd^N` for `N = 1, 2, ...` until the assignment at the witness
/// simplex is complete and within the target gap.
///
/// The cut point is the witness barycenter or one of its vertices, whichever
/// gives the best assignment (barycenter on ties).
pub fn solve(problem: &Problem, options: &SolveOptions) -> Result<SolveResult> {
    let n = problem.n();
    let players = problem.players();
    let samples = default_samples(n);
    for (i, p) in players.iter().enumerate() {
        if let Err(v) = validate_full_division(p, n, &samples) {
            return Err(Error::Assumption {
                player: Some(i + 1),
                reason: format!("validate_full_division failed at {}: {}", v.point, v.reason),
            });
        }
    }
    if options.max_depth == 0 {
        return Err(Error::Argument("max_depth must be at least 1".into()));
    }
    let guaranteed = is_guaranteed(n);
    let mode = if guaranteed {
        options.mode
    } else {
        if options.mode == SearchMode::Det {
            log::warn!("n = {n} is neither prime nor 4: no existence guarantee, searching in matching mode");
        }
        SearchMode::Matching
    };

    let mut t = Triangulation::standard(n)?;
    let mut trace = Vec::new();
    let mut best: Option<(Candidate, FullyLabeledWitness)> = None;
    for depth in 1..=options.max_depth {
        let required = simplex_count_after(n, depth).unwrap_or(u128::MAX);
        if required > options.simplex_budget {
            if best.is_none() {
                return Err(Error::Budget { required, budget: options.simplex_budget });
            }
            log::info!("simplex budget reached before depth {depth}");
            break;
        }
        t = t.subdivide();
        let owners = t.owner_labeling()?;
        let labeling = build_labeling(&t, &owners, players)?;
        if guaranteed {
            check_theorem_preconditions(&t, &labeling)?;
        }
        let witnesses = find_fully_labeled(&t, &labeling, mode)?;
        let Some(witness) = witnesses.first().cloned() else {
            return Err(Error::TheoremViolation {
                n,
                instance: crate::io::instance_json(&t, &labeling).to_string(),
            });
        };

        let mut candidates = vec![barycenter_of(&t, &witness.vertices)];
        candidates.extend(witness.vertices.iter().map(|&v| t.vertex(v).clone()));
        let chosen = candidates
            .into_iter()
            .map(|x| {
                let assignment = extract_assignment(&witness, &owners, &x, players);
                let check = verify_envy_free(&assignment, players);
                let gap = envy_gap(&assignment, players);
                Candidate { x, assignment, check, gap }
            })
            .reduce(|a, b| if b.key() < a.key() { b } else { a })
            .expect("at least the barycenter");
        debug_assert!(chosen.check.cond_iii);

        trace.push(DepthRecord {
            depth,
            mesh: t.mesh_size(),
            simplices: t.simplex_count(),
            witnesses: witnesses.len(),
            gap: chosen.gap.clone(),
        });
        log::info!(
            "depth {depth}: {} simplices, {} witnesses, gap {}",
            t.simplex_count(),
            witnesses.len(),
            chosen.gap.as_ref().map_or("n/a".to_string(), |g| g.to_string())
        );
        let done = depth >= options.min_depth && meets_target(&chosen, &options.target_gap);
        best = Some((chosen, witness));
        if done {
            break;
        }
    }

    let (chosen, witness) = best.expect("depth 1 always runs or errors");
    let status = if trace.len() < options.min_depth || !meets_target(&chosen, &options.target_gap) {
        Status::BudgetExhausted
    } else if chosen.check.all() && chosen.gap.as_ref().is_none_or(Zero::is_zero) {
        Status::Exact
    } else {
        Status::Approximate
    };
    Ok(SolveResult {
        status,
        depth: trace.len(),
        x_star: chosen.x,
        assignment: chosen.assignment,
        check: chosen.check,
        witness,
        envy_gap: chosen.gap,
        trace,
        guaranteed,
        mode,
    })
}

/// Largest deviation of a piece length from `1/n` (pieces missing count as length 0).
pub fn max_length_deviation(division: &Division, n: usize) -> Rational {
    let target = rat(1, n as i64);
    let mut lengths: Vec<Rational> = division.pieces().iter().map(|p| p.interval.length()).collect();
    lengths.resize(n, Rational::zero());
    lengths.iter().map(|l| (l - &target).abs()).max().expect("n >= 1")
}

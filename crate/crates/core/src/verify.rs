//! Seeded randomized suites for the determinant-sum lemma and the existence
//! theorem, with JSON reports.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::io::instance_json;
use crate::labeling::{random_nice_labeling, LabelShape};
use crate::rational_geometry::{format_rational, AffinePoint, Point, Rational};
use crate::sperner_engine::{
    boundary_identity_check, det_sum, find_fully_labeled, is_guaranteed, is_unit, nonzero_scan,
    random_affine_labeling, theorem_witness, PointLabeling, SearchMode,
};
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaConfig {
    pub n: usize,
    pub depth: usize,
    pub trials: usize,
    /// Random columns for the projection identity.
    pub identity_trials: usize,
    pub seed: u64,
    pub budget: u128,
    /// Push one vertex label off its supporting face before summing.
    pub corrupt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub config: LemmaConfig,
    pub identity_labeling_sum: Rational,
    pub sums: Vec<Rational>,
    pub det_sum_failures: Vec<usize>,
    pub identity_failures: Vec<usize>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        is_unit(&self.identity_labeling_sum) && self.det_sum_failures.is_empty() && self.identity_failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "suite": "lemma",
            "n": c.n,
            "depth": c.depth,
            "seed": c.seed,
            "det_sum": {
                "trials": c.trials,
                "identity_labeling": format_rational(&self.identity_labeling_sum),
                "distinct_values": distinct(&self.sums),
                "failures": self.det_sum_failures,
            },
            "projection_identity": {
                "trials": c.identity_trials,
                "failures": self.identity_failures,
            },
            "passed": self.passed(),
        })
    }
}

fn distinct(values: &[Rational]) -> Vec<String> {
    let mut out: Vec<String> = values.iter().map(format_rational).collect();
    out.sort();
    out.dedup();
    out
}

/// `n` random columns of dimension `n` summing to 1, entries in `[-9, 9] / [1, 5]`.
pub fn random_sum_one_columns<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<AffinePoint> {
    (0..n)
        .map(|_| {
            let mut coords: Vec<Rational> = (0..n - 1)
                .map(|_| Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=5).into()))
                .collect();
            let rest = Rational::one() - coords.iter().sum::<Rational>();
            coords.push(rest);
            AffinePoint::new(coords).expect("sum forced to 1")
        })
        .collect()
}

fn corrupted(t: &Triangulation, lambda: &PointLabeling) -> PointLabeling {
    // a corner of the simplex: its only admissible label is itself
    let mut points = lambda.points().to_vec();
    let n = t.n();
    let mut coords = vec![Rational::zero(); n];
    coords[0] = Rational::from_integer(2.into());
    coords[n - 1] = -Rational::one();
    let corner = t.vertex_id(Point::unit(n, 1).expect("n >= 1").coords()).expect("corners survive subdivision");
    points[corner] = AffinePoint::new(coords).expect("sums to 1");
    PointLabeling::new_unchecked(points)
}

/// Runs both lemma checks. A corrupted run fails with the affine-hull error.
pub fn run_lemma_suite(config: &LemmaConfig) -> Result<LemmaReport> {
    let t = Triangulation::sd_pow(config.n, config.depth, config.budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let identity = PointLabeling::new(&t, t.vertices().iter().map(Point::to_affine).collect())?;
    let identity_labeling_sum = det_sum(&t, &identity)?;
    let mut sums = Vec::with_capacity(config.trials);
    let mut det_sum_failures = Vec::new();
    for trial in 0..config.trials {
        let mut lambda = random_affine_labeling(&t, &mut rng);
        if config.corrupt {
            lambda = corrupted(&t, &lambda);
        }
        let sum = det_sum(&t, &lambda)?;
        if !is_unit(&sum) {
            det_sum_failures.push(trial);
        }
        sums.push(sum);
    }
    let mut identity_failures = Vec::new();
    if config.n >= 2 {
        for trial in 0..config.identity_trials {
            let columns = random_sum_one_columns(config.n, &mut rng);
            if !boundary_identity_check(&columns)? {
                identity_failures.push(trial);
            }
        }
    }
    Ok(LemmaReport {
        config: config.clone(),
        identity_labeling_sum,
        sums,
        det_sum_failures,
        identity_failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremConfig {
    pub n: usize,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub budget: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub det_witnesses: usize,
    pub matching_witnesses: usize,
    /// Sum over positively oriented simplices of the barycenter determinants.
    pub scan: Rational,
    /// Every det-mode witness carried valid distinct picks.
    pub sdr_verified: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub config: TheoremConfig,
    /// `false` for `n` neither prime nor 4: statistics only.
    pub guaranteed: bool,
    pub outcomes: Vec<TrialOutcome>,
    /// Trial index and replayable instance for each trial without a witness.
    pub violations: Vec<(usize, Value)>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        !self.guaranteed || (self.violations.is_empty() && self.outcomes.iter().all(|o| o.sdr_verified))
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        let mode = match (self.guaranteed, c.n) {
            (false, _) => "scan",
            (true, 4) => "prop4",
            (true, _) => "prime",
        };
        let trials: Vec<Value> = self
            .outcomes
            .iter()
            .map(|o| {
                json!({
                    "det_witnesses": o.det_witnesses,
                    "matching_witnesses": o.matching_witnesses,
                    "scan": format_rational(&o.scan),
                    "sdr_verified": o.sdr_verified,
                })
            })
            .collect();
        let mut report = json!({
            "suite": "theorem",
            "mode": mode,
            "n": c.n,
            "depth": c.depth,
            "seed": c.seed,
            "trials": trials,
            "violations": self.violations.iter().map(|(k, _)| k).collect::<Vec<_>>(),
        });
        if self.guaranteed {
            report["passed"] = json!(self.passed());
        }
        report
    }
}

/// Random symmetric labelings (Prop-4 shaped for `n = 4`), each searched in both modes.
pub fn run_theorem_suite(config: &TheoremConfig) -> Result<TheoremReport> {
    let n = config.n;
    let t = Triangulation::sd_pow(n, config.depth, config.budget)?;
    let guaranteed = is_guaranteed(n);
    let shape = if n == 4 { LabelShape::Prop4 } else { LabelShape::Proper };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut outcomes = Vec::with_capacity(config.trials);
    let mut violations = Vec::new();
    for trial in 0..config.trials {
        let labeling = random_nice_labeling(&t, shape, &mut rng)?;
        let det = find_fully_labeled(&t, &labeling, SearchMode::Det)?;
        let matching = find_fully_labeled(&t, &labeling, SearchMode::Matching)?;
        let sdr_verified = det.iter().all(|w| w.is_consistent(&labeling) && !w.det_value.is_zero());
        if guaranteed {
            match theorem_witness(&t, &labeling) {
                Ok(w) => debug_assert_eq!(Some(&w), det.first()),
                Err(crate::Error::TheoremViolation { .. }) => violations.push((trial, instance_json(&t, &labeling))),
                Err(e) => return Err(e),
            }
        }
        outcomes.push(TrialOutcome {
            det_witnesses: det.len(),
            matching_witnesses: matching.len(),
            scan: nonzero_scan(&t, &labeling)?,
            sdr_verified,
        });
    }
    Ok(TheoremReport { config: config.clone(), guaranteed, outcomes, violations })
}

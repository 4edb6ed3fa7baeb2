//! JSON formats. Every rational is a `"p/q"` (or `"p"`) string.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::labeling::VertexLabeling;
use crate::preferences::{Density, DensitySegment, Preference};
use crate::rational_geometry::{format_rational, parse_rational, LabelSet, Point, Rational};
use crate::solver::{Problem, SolveResult};
use crate::triangulation::Triangulation;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    players: Vec<RawPlayer>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlayer {
    #[serde(rename = "type")]
    kind: String,
    density: Vec<RawSegment>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    start: String,
    end: String,
    value: String,
}

fn field_rational(text: &str, field: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

/// Parses a problem. Errors name the line/column (syntax) or the field path.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    if raw.n == 0 {
        return Err(Error::Parse("n: must be at least 1".into()));
    }
    if raw.players.len() != raw.n {
        return Err(Error::Parse(format!("players: expected {} entries, found {}", raw.n, raw.players.len())));
    }
    let mut players = Vec::with_capacity(raw.n);
    for (i, p) in raw.players.iter().enumerate() {
        let segments = p
            .density
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let at = format!("players[{i}].density[{k}]");
                Ok(DensitySegment {
                    start: field_rational(&s.start, &format!("{at}.start"))?,
                    end: field_rational(&s.end, &format!("{at}.end"))?,
                    value: field_rational(&s.value, &format!("{at}.value"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let density =
            Density::new(segments).map_err(|e| Error::Parse(format!("players[{i}].density: {e}")))?;
        players.push(match p.kind.as_str() {
            "attraction" => Preference::Attraction(density),
            "rejection" => Preference::Rejection(density),
            other => {
                return Err(Error::Parse(format!(
                    "players[{i}].type: expected \"attraction\" or \"rejection\", found {other:?}"
                )))
            }
        });
    }
    Problem::new(players)
}

/// Inverse of [`parse_problem`] for measure-based players.
pub fn problem_to_json(problem: &Problem) -> Result<Value> {
    let players = problem
        .players()
        .iter()
        .map(|p| {
            let kind = match p {
                Preference::Attraction(_) => "attraction",
                Preference::Rejection(_) => "rejection",
                Preference::Custom(_) => {
                    return Err(Error::Unsupported("custom preferences have no JSON form".into()))
                }
            };
            let density: Vec<Value> = p
                .density()
                .expect("measure-based")
                .segments()
                .iter()
                .map(|s| {
                    json!({
                        "start": format_rational(&s.start),
                        "end": format_rational(&s.end),
                        "value": format_rational(&s.value),
                    })
                })
                .collect();
            Ok(json!({ "type": kind, "density": density }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "n": problem.n(), "players": players }))
}

fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn optional(value: &Option<Rational>) -> String {
    value.as_ref().map_or_else(|| "n/a".to_string(), format_rational)
}

/// Solver output. Assignment values are 1-based positions in `pieces`.
pub fn solve_result_json(result: &SolveResult) -> Value {
    let division = &result.assignment.division;
    let pieces: Vec<Value> = division
        .pieces()
        .iter()
        .map(|p| json!([format_rational(p.interval.start()), format_rational(p.interval.end())]))
        .collect();
    let assignment: serde_json::Map<String, Value> = result
        .assignment
        .pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            let value = match piece {
                Some(k) => json!(k + 1),
                None => json!("empty"),
            };
            ((i + 1).to_string(), value)
        })
        .collect();
    let trace: Vec<Value> = result
        .trace
        .iter()
        .map(|r| {
            json!({
                "depth": r.depth,
                "mesh": format_rational(&r.mesh),
                "simplices": r.simplices,
                "witnesses": r.witnesses,
                "gap": optional(&r.gap),
            })
        })
        .collect();
    json!({
        "status": result.status.as_str(),
        "x_star": rationals(result.x_star.coords()),
        "cuts": rationals(division.cuts()),
        "pieces": pieces,
        "assignment": assignment,
        "envy_gap": optional(&result.envy_gap),
        "conditions": {
            "i": result.check.cond_i,
            "ii": result.check.cond_ii,
            "iii": result.check.cond_iii,
        },
        "witness": {
            "vertices": result.witness.vertices,
            "picks": result.witness.sdr.images(),
            "det": format_rational(&result.witness.det_value),
        },
        "guaranteed": result.guaranteed,
        "trace": trace,
    })
}

/// Triangulation and labeling, enough to replay a search.
pub fn instance_json(t: &Triangulation, labeling: &VertexLabeling) -> Value {
    let vertices: Vec<Vec<String>> = t.vertices().iter().map(|p| rationals(p.coords())).collect();
    let labels: Vec<&[usize]> = labeling.labels().iter().map(LabelSet::labels).collect();
    json!({
        "n": t.n(),
        "depth": t.depth(),
        "vertices": vertices,
        "simplices": t.simplices(),
        "labels": labels,
    })
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    vertices: Vec<Vec<String>>,
    simplices: Vec<Vec<usize>>,
    labels: Vec<Vec<usize>>,
}

/// Rebuilds an instance written by [`instance_json`]; the triangulation is revalidated.
pub fn parse_instance(text: &str) -> Result<(Triangulation, VertexLabeling)> {
    let raw: RawInstance = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let vertices = raw
        .vertices
        .iter()
        .enumerate()
        .map(|(v, coords)| {
            let coords = coords
                .iter()
                .map(|c| field_rational(c, &format!("vertices[{v}]")))
                .collect::<Result<Vec<_>>>()?;
            Point::new(coords).map_err(|e| Error::Parse(format!("vertices[{v}]: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let t = Triangulation::from_parts(raw.n, vertices, raw.simplices)?;
    let labels = raw
        .labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| LabelSet::new(l).map_err(|e| Error::Parse(format!("labels[{v}]: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if labels.len() != t.vertex_count() {
        return Err(Error::Parse(format!("labels: expected {} entries", t.vertex_count())));
    }
    Ok((t, VertexLabeling::new(labels)))
}

//! Exact rational points of the standard simplex and the symmetry maps acting on them.
//!
//! Indices into `[n]` (coordinates, labels, players) are 1-based everywhere in
//! the public API, matching the combinatorics they encode. Storage is 0-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if let Some((_, denom)) = trimmed.split_once('/') {
        if denom.trim().parse::<BigInt>().map(|d| d.is_zero()).unwrap_or(false) {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
    }
    Rational::from_str(trimmed).map_err(|_| Error::Parse(format!("not a rational: {text:?}")))
}

/// Canonical string form, `"p/q"` or `"p"` when `q = 1`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Point of the standard simplex: nonnegative coordinates summing to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Argument("a point needs at least one coordinate".into()));
        }
        if coords.iter().any(Signed::is_negative) {
            return Err(Error::Argument("simplex points have nonnegative coordinates".into()));
        }
        if coords.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Argument("simplex point coordinates must sum to 1".into()));
        }
        Ok(Self(coords))
    }

    pub(crate) fn new_unchecked(coords: Vec<Rational>) -> Self {
        debug_assert!(Point::new(coords.clone()).is_ok());
        Self(coords)
    }

    /// The unit vector `e_i` (1-based).
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        check_index(i, n)?;
        let mut coords = vec![Rational::zero(); n];
        coords[i - 1] = Rational::one();
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn to_affine(&self) -> AffinePoint {
        AffinePoint(self.0.clone())
    }

    pub fn r_apply(&self, j: usize) -> Result<Point> {
        Ok(Point(r_apply(j, &self.0)?))
    }

    /// True when the point lies on the facet `x_1 = 0`.
    pub fn on_first_facet(&self) -> bool {
        self.0[0].is_zero()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Point of the affine hyperplane `sum x_i = 1`; coordinates may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePoint(Vec<Rational>);

impl AffinePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Argument("a point needs at least one coordinate".into()));
        }
        if coords.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Argument("affine point coordinates must sum to 1".into()));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn r_apply(&self, j: usize) -> Result<AffinePoint> {
        Ok(AffinePoint(r_apply(j, &self.0)?))
    }
}

impl From<Point> for AffinePoint {
    fn from(p: Point) -> Self {
        AffinePoint(p.0)
    }
}

/// Nonempty subset of `[n]`, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(Vec<usize>);

impl LabelSet {
    pub fn new<I: IntoIterator<Item = usize>>(labels: I) -> Result<Self> {
        let set: BTreeSet<usize> = labels.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Argument("label sets are nonempty".into()));
        }
        if set.contains(&0) {
            return Err(Error::Argument("labels are 1-based".into()));
        }
        Ok(Self(set.into_iter().collect()))
    }

    pub fn singleton(label: usize) -> Result<Self> {
        Self::new([label])
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, label: usize) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    pub fn is_proper_subset_of(&self, n: usize) -> bool {
        self.max() <= n && self.0.len() < n
    }

    pub fn as_set(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    /// Image under `rho^j`.
    pub fn rho_image(&self, j: usize, n: usize) -> Result<LabelSet> {
        let mapped = self
            .0
            .iter()
            .map(|&i| rho_apply(j, i, n))
            .collect::<Result<Vec<_>>>()?;
        LabelSet::new(mapped)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Bijection of `[n]`; `images[i - 1] = pi(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &image in &images {
            if image == 0 || image > n || seen[image - 1] {
                return Err(Error::Argument(format!("{images:?} is not a permutation of [{n}]")));
            }
            seen[image - 1] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &image) in self.0.iter().enumerate() {
            inv[image - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn sign(&self) -> i32 {
        let mut visited = vec![false; self.0.len()];
        let mut sign = 1;
        for start in 0..self.0.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !visited[cur] {
                visited[cur] = true;
                cur = self.0[cur] - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn rho(j: usize, n: usize) -> Result<Permutation> {
        let images = (1..=n).map(|i| rho_apply(j, i, n)).collect::<Result<Vec<_>>>()?;
        Ok(Permutation(images))
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::Argument(format!("index {i} outside [1, {n}]")))
    } else {
        Ok(())
    }
}

/// `rho^j(i)`: sends 1 to `j`, shifts `2..=j` down by one, fixes the rest.
pub fn rho_apply(j: usize, i: usize, n: usize) -> Result<usize> {
    check_index(j, n)?;
    check_index(i, n)?;
    Ok(if i == 1 {
        j
    } else if i <= j {
        i - 1
    } else {
        i
    })
}

/// Sign of `rho^j`, which is also `det(r^j)`.
pub fn rho_sign(j: usize, n: usize) -> Result<i32> {
    check_index(j, n)?;
    Ok(if j % 2 == 1 { 1 } else { -1 })
}

/// The linear map `r^j(e_i) = e_{rho^j(i)}`: coordinate `i` moves to `rho^j(i)`.
pub fn r_apply(j: usize, x: &[Rational]) -> Result<Vec<Rational>> {
    let n = x.len();
    check_index(j, n)?;
    let mut out = vec![Rational::zero(); n];
    for (i, value) in x.iter().enumerate() {
        out[rho_apply(j, i + 1, n)? - 1] = value.clone();
    }
    Ok(out)
}

/// `b^S`: weight `1/|S|` on each index of `S`.
pub fn barycenter(labels: &LabelSet, n: usize) -> Result<Point> {
    if labels.max() > n {
        return Err(Error::Argument(format!("{labels} is not a subset of [{n}]")));
    }
    let weight = rat(1, labels.len() as i64);
    let mut coords = vec![Rational::zero(); n];
    for &i in labels.labels() {
        coords[i - 1] = weight.clone();
    }
    Ok(Point(coords))
}

/// `J_x`: indices of the vanishing coordinates.
pub fn facet_set(x: &Point) -> BTreeSet<usize> {
    (1..=x.dim()).filter(|&i| x.coord(i).is_zero()).collect()
}

/// Indices of the positive coordinates, i.e. the vertices of the supporting face.
pub fn support_face(x: &Point) -> BTreeSet<usize> {
    (1..=x.dim()).filter(|&i| !x.coord(i).is_zero()).collect()
}

/// Exact determinant of the square matrix whose columns are `columns`.
///
/// Each column is scaled to integers by the lcm of its denominators, then the
/// integer matrix goes through Bareiss elimination.
pub fn det_columns<C: AsRef<[Rational]>>(columns: &[C]) -> Result<Rational> {
    let n = columns.len();
    if n == 0 {
        return Ok(Rational::one());
    }
    if let Some(bad) = columns.iter().find(|c| c.as_ref().len() != n) {
        return Err(Error::Argument(format!(
            "determinant needs {n} columns of dimension {n}, got one of dimension {}",
            bad.as_ref().len()
        )));
    }
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for column in columns {
        let column = column.as_ref();
        let lcm = column
            .iter()
            .fold(BigInt::one(), |acc, value| acc.lcm(value.denom()));
        rows.push(
            column
                .iter()
                .map(|value| value.numer() * (&lcm / value.denom()))
                .collect(),
        );
        scale *= lcm;
    }
    Ok(Rational::new(bareiss(rows), scale))
}

pub fn det_points(columns: &[AffinePoint]) -> Result<Rational> {
    det_columns(columns.iter().map(AffinePoint::coords).collect::<Vec<_>>().as_slice())
}

fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = value;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Projection onto the first `n - 1` coordinates.
pub fn proj_point(x: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() < 2 {
        return Err(Error::Argument("projection needs n >= 2".into()));
    }
    Ok(x[..x.len() - 1].to_vec())
}

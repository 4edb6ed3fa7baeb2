//! Face-to-face triangulations of the standard simplex, built by iterated
//! barycentric subdivision, together with the symmetry and ownership checks the
//! labeling pipeline relies on.

mod chain;

pub use chain::Chain;

use std::collections::{BTreeSet, HashMap, HashSet};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational_geometry::{det_columns, r_apply, support_face, Point, Rational};

pub const DEFAULT_SIMPLEX_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug)]
pub struct Triangulation {
    n: usize,
    vertices: Vec<Point>,
    index: HashMap<Vec<Rational>, usize>,
    /// Sorted vertex ids, one tuple per maximal simplex.
    simplices: Vec<Vec<usize>>,
    /// Sign of the coordinate determinant of each simplex in sorted order.
    orientation: Vec<i8>,
    depth: usize,
    owner_dim: Option<Vec<usize>>,
}

/// A simplex in the `x_1 = 0` facet whose image under `r^j` is not in the triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceWitness {
    pub simplex: Vec<usize>,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OwnerWitness {
    /// Two vertices of a common simplex share an owner.
    AdjacentEqual { u: usize, v: usize },
    /// `o(r^j(v)) != o(v)` for a vertex on the `x_1 = 0` facet.
    Asymmetric { vertex: usize, j: usize },
    /// `r^j(v)` is not a vertex of the triangulation.
    MissingImage { vertex: usize, j: usize },
    /// Labeling has the wrong length or an owner outside `[n]`.
    Malformed,
}

/// Player index in `[n]` for every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwnerLabeling(Vec<usize>);

impl OwnerLabeling {
    pub fn new(owners: Vec<usize>) -> Self {
        Self(owners)
    }

    pub fn owner(&self, vertex: usize) -> usize {
        self.0[vertex]
    }

    pub fn owners(&self) -> &[usize] {
        &self.0
    }
}

fn sign_of(value: &Rational) -> i8 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

impl Triangulation {
    /// The simplex itself: vertices `e_1..e_n`, one maximal simplex.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("n must be at least 1".into()));
        }
        let vertices = (1..=n).map(|i| Point::unit(n, i)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(n, vertices, vec![(0..n).collect()])
    }

    /// Builds a triangulation from explicit vertices and maximal simplices and
    /// validates it (see [`Triangulation::validate`]).
    pub fn from_parts(n: usize, vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (id, v) in vertices.iter().enumerate() {
            if v.dim() != n {
                return Err(Error::Argument(format!("vertex {id} has dimension {}", v.dim())));
            }
            if index.insert(v.coords().to_vec(), id).is_some() {
                return Err(Error::Invariant(format!("vertex {id} duplicates the coordinates {v}")));
            }
        }
        let mut sorted = Vec::with_capacity(simplices.len());
        for simplex in simplices {
            let mut s = simplex;
            s.sort_unstable();
            s.dedup();
            if s.len() != n || s.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Argument(format!("{s:?} is not a maximal simplex")));
            }
            sorted.push(s);
        }
        let mut t = Self {
            n,
            vertices,
            index,
            simplices: sorted,
            orientation: Vec::new(),
            depth: 0,
            owner_dim: None,
        };
        t.orientation = t.compute_orientation()?;
        t.validate()?;
        Ok(t)
    }

    fn compute_orientation(&self) -> Result<Vec<i8>> {
        self.simplices
            .iter()
            .map(|s| {
                let sign = sign_of(&self.simplex_det(s));
                if sign == 0 {
                    Err(Error::Invariant(format!("simplex {s:?} is degenerate")))
                } else {
                    Ok(sign)
                }
            })
            .collect()
    }

    fn simplex_det(&self, simplex: &[usize]) -> Rational {
        let cols: Vec<&[Rational]> = simplex.iter().map(|&v| self.vertices[v].coords()).collect();
        det_columns(&cols).expect("square by construction")
    }

    /// Checks that the simplices tile the simplex face to face.
    ///
    /// Nondegeneracy, a pseudomanifold condition on codimension-one faces
    /// (interior faces shared by two simplices with opposite induced orientation,
    /// faces on the boundary of the simplex used once), and exact volume
    /// `Σ |det| = 1` together certify a face-to-face tiling.
    pub fn validate(&self) -> Result<()> {
        if self.orientation.contains(&0) {
            return Err(Error::Invariant("degenerate simplex".into()));
        }
        let mut used = vec![false; self.vertices.len()];
        self.simplices.iter().flatten().for_each(|&v| used[v] = true);
        if let Some(v) = used.iter().position(|&u| !u) {
            return Err(Error::Invariant(format!("vertex {v} belongs to no simplex")));
        }
        let volume: Rational = self.simplices.iter().map(|s| self.simplex_det(s).abs()).sum();
        if volume != Rational::one() {
            return Err(Error::Invariant(format!("simplices cover volume {volume}, expected 1")));
        }
        if self.n == 1 {
            return Ok(());
        }
        let mut incidence: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in &self.simplices {
            for omit in 0..s.len() {
                let mut face = s.clone();
                face.remove(omit);
                *incidence.entry(face).or_insert(0) += 1;
            }
        }
        let boundary = self.positively_oriented_chain()?.boundary();
        for (face, count) in incidence {
            let on_boundary = self.common_facets(&face).next().is_some();
            let coeff = boundary.coefficient(&face);
            match (on_boundary, count) {
                (true, 1) if coeff.abs() == 1 => {}
                (false, 2) if coeff == 0 => {}
                _ => {
                    return Err(Error::Invariant(format!(
                        "face {face:?} (boundary: {on_boundary}) lies in {count} simplices with boundary coefficient {coeff}"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Facets `j` (1-based) containing every vertex of `face`.
    fn common_facets<'a>(&'a self, face: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        (1..=self.n).filter(move |&j| face.iter().all(|&v| self.vertices[v].coord(j).is_zero()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn vertex(&self, id: usize) -> &Point {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn orientation(&self, simplex: usize) -> i8 {
        self.orientation[simplex]
    }

    /// Dimension of the simplex of the previous level whose barycenter `vertex` is.
    pub fn owner_dim(&self, vertex: usize) -> Option<usize> {
        self.owner_dim.as_ref().map(|dims| dims[vertex])
    }

    pub fn vertex_id(&self, coords: &[Rational]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Vertex at `r^j` of vertex `v`, if present.
    pub fn r_image(&self, j: usize, v: usize) -> Option<usize> {
        let image = r_apply(j, self.vertices[v].coords()).ok()?;
        self.vertex_id(&image)
    }

    /// Vertices lying on the `x_1 = 0` facet, in id order.
    pub fn first_facet_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].on_first_facet())
    }

    /// One barycentric subdivision.
    pub fn subdivide(&self) -> Triangulation {
        let n = self.n;
        let perms = permutations(n);
        let mut face_vertex: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut vertices: Vec<Point> = Vec::new();
        let mut owner_dim: Vec<usize> = Vec::new();
        let mut simplices = Vec::with_capacity(self.simplices.len() * perms.len());
        for s in &self.simplices {
            for perm in &perms {
                let mut chain = Vec::with_capacity(n);
                let mut face: Vec<usize> = Vec::with_capacity(n);
                for &k in perm {
                    let pos = face.binary_search(&s[k]).unwrap_err();
                    face.insert(pos, s[k]);
                    let id = *face_vertex.entry(face.clone()).or_insert_with(|| {
                        vertices.push(self.barycenter_of(&face));
                        owner_dim.push(face.len() - 1);
                        vertices.len() - 1
                    });
                    chain.push(id);
                }
                chain.sort_unstable();
                simplices.push(chain);
            }
        }
        let index = vertices
            .iter()
            .enumerate()
            .map(|(id, v)| (v.coords().to_vec(), id))
            .collect();
        let mut t = Triangulation {
            n,
            vertices,
            index,
            simplices,
            orientation: Vec::new(),
            depth: self.depth + 1,
            owner_dim: Some(owner_dim),
        };
        t.orientation = t
            .compute_orientation()
            .expect("barycentric subdivision of a nondegenerate simplex is nondegenerate");
        t
    }

    fn barycenter_of(&self, face: &[usize]) -> Point {
        let weight = Rational::new(1.into(), (face.len() as i64).into());
        let mut coords = vec![Rational::zero(); self.n];
        for &v in face {
            for (c, x) in coords.iter_mut().zip(self.vertices[v].coords()) {
                *c += x;
            }
        }
        for c in &mut coords {
            *c *= &weight;
        }
        Point::new_unchecked(coords)
    }

    /// `sd^depth` of the standard simplex, refusing when `(n!)^depth` exceeds `budget`.
    pub fn sd_pow(n: usize, depth: usize, budget: u128) -> Result<Self> {
        let required = simplex_count_after(n, depth);
        if required.is_none_or(|r| r > budget) {
            return Err(Error::Budget {
                required: required.unwrap_or(u128::MAX),
                budget,
            });
        }
        let mut t = Self::standard(n)?;
        for _ in 0..depth {
            t = t.subdivide();
        }
        Ok(t)
    }

    /// Largest L∞ distance between two vertices of a common simplex.
    pub fn mesh_size(&self) -> Rational {
        let mut mesh = Rational::zero();
        for s in &self.simplices {
            for (a, &u) in s.iter().enumerate() {
                for &v in &s[a + 1..] {
                    for (x, y) in self.vertices[u].coords().iter().zip(self.vertices[v].coords()) {
                        let d = (x - y).abs();
                        if d > mesh {
                            mesh = d;
                        }
                    }
                }
            }
        }
        mesh
    }

    /// Every maximal simplex with coefficient +1 in the order whose determinant is positive.
    pub fn positively_oriented_chain(&self) -> Result<Chain> {
        let mut chain = Chain::new();
        for (s, &sign) in self.simplices.iter().zip(&self.orientation) {
            if sign == 0 {
                return Err(Error::Invariant(format!("simplex {s:?} is degenerate")));
            }
            chain.add_oriented(s, i64::from(sign));
        }
        Ok(chain)
    }

    /// All faces (every dimension) whose vertices lie on a common facet.
    fn boundary_faces(&self) -> HashSet<Vec<usize>> {
        let mut faces = HashSet::new();
        for s in &self.simplices {
            for j in 1..=self.n {
                let on: Vec<usize> =
                    s.iter().copied().filter(|&v| self.vertices[v].coord(j).is_zero()).collect();
                for subset in nonempty_subsets(&on) {
                    faces.insert(subset);
                }
            }
        }
        faces
    }

    /// First simplex of the `x_1 = 0` facet (lexicographic) with `r^j(σ) ∉ T`.
    pub fn niceness_witness(&self) -> Option<NiceWitness> {
        let faces = self.boundary_faces();
        let first_facet: BTreeSet<&Vec<usize>> = faces
            .iter()
            .filter(|f| f.iter().all(|&v| self.vertices[v].on_first_facet()))
            .collect();
        for face in first_facet {
            for j in 1..=self.n {
                let image: Option<Vec<usize>> = face.iter().map(|&v| self.r_image(j, v)).collect();
                let ok = image.is_some_and(|mut img| {
                    img.sort_unstable();
                    faces.contains(&img)
                });
                if !ok {
                    return Some(NiceWitness {
                        simplex: face.clone(),
                        j,
                    });
                }
            }
        }
        None
    }

    pub fn is_nice(&self) -> bool {
        self.niceness_witness().is_none()
    }

    /// `o(v) = owner_dim(v) + 1`.
    pub fn owner_labeling(&self) -> Result<OwnerLabeling> {
        match &self.owner_dim {
            Some(dims) => Ok(OwnerLabeling(dims.iter().map(|d| d + 1).collect())),
            None => Err(Error::Unsupported(
                "owner labeling needs a triangulation of depth >= 1".into(),
            )),
        }
    }

    pub fn owner_witness(&self, owners: &OwnerLabeling) -> Option<OwnerWitness> {
        let o = owners.owners();
        if o.len() != self.vertices.len() || o.iter().any(|&p| p == 0 || p > self.n) {
            return Some(OwnerWitness::Malformed);
        }
        for s in &self.simplices {
            for (a, &u) in s.iter().enumerate() {
                if let Some(&v) = s[a + 1..].iter().find(|&&v| o[v] == o[u]) {
                    return Some(OwnerWitness::AdjacentEqual { u, v });
                }
            }
        }
        for v in self.first_facet_vertices() {
            for j in 1..=self.n {
                match self.r_image(j, v) {
                    None => return Some(OwnerWitness::MissingImage { vertex: v, j }),
                    Some(w) if o[w] != o[v] => return Some(OwnerWitness::Asymmetric { vertex: v, j }),
                    Some(_) => {}
                }
            }
        }
        None
    }

    pub fn check_owner(&self, owners: &OwnerLabeling) -> bool {
        self.owner_witness(owners).is_none()
    }

    /// An edge whose endpoints have incomparable supporting faces.
    pub fn incomparable_edge(&self) -> Option<(usize, usize)> {
        let supports: Vec<BTreeSet<usize>> = self.vertices.iter().map(support_face).collect();
        for s in &self.simplices {
            for (a, &u) in s.iter().enumerate() {
                for &v in &s[a + 1..] {
                    if !supports[u].is_subset(&supports[v]) && !supports[v].is_subset(&supports[u]) {
                        return Some((u, v));
                    }
                }
            }
        }
        None
    }

    pub fn supports_comparable(&self) -> bool {
        self.incomparable_edge().is_none()
    }
}

/// `(n!)^depth`, or `None` on overflow.
pub fn simplex_count_after(n: usize, depth: usize) -> Option<u128> {
    let factorial = (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))?;
    (0..depth).try_fold(1u128, |acc, _| acc.checked_mul(factorial))
}

/// All orderings of `0..n`, lexicographic.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                current.push(k);
                rec(n, current, used, out);
                current.pop();
                used[k] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

fn nonempty_subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1u32..(1 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect()
    })
}

//! Finite metric trees `T`, geodesics in the product `ℝ × T`, and the
//! openness test for geodesic triangles there.
//!
//! A triangle with vertices `x, y, z` is open when any two of its sides meet
//! only at their common vertex. When the projections `x̄, ȳ, z̄` span a
//! nondegenerate tripod with center `m̄`, each side crosses the wall
//! `ℝ × {m̄}` once, and two sides overlap exactly when their crossings agree.
//! Otherwise the three points lie in one flat strip and the test is planar.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Relative tolerance for coincidence tests.
pub const TOL: f64 = 1e-12;

pub const SYMMETRIC_DIAGNOSTIC: &str =
    "crossings coincide for all perturbations of z within the branch";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("edge {u}-{v} has non-positive length {length}")]
    BadLength { u: String, v: String, length: f64 },
    #[error("the edges do not form a tree: {0}")]
    NotATree(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("no edge joins {0} and {1}")]
    UnknownEdge(String, String),
    #[error("offset {offset} outside edge of length {length}")]
    OffsetRange { offset: f64, length: f64 },
    #[error("two of the three projections coincide")]
    CoincidentProjections,
    #[error("one projection lies on the arc of the other two")]
    DegenerateTripod,
    #[error("perturbation index must be at least 1")]
    InvalidIndex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct MetricTree {
    names: Vec<String>,
    edges: Vec<Edge>,
    /// `(edge, neighbour)` per vertex.
    adj: Vec<Vec<(usize, usize)>>,
    dist: Vec<Vec<f64>>,
    /// `towards[i][j]`: edge leaving `i` on the arc to `j`.
    towards: Vec<Vec<usize>>,
}

impl MetricTree {
    pub fn from_edges(list: &[(&str, &str, f64)]) -> Result<Self, TreeError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut id = |name: &str, names: &mut Vec<String>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let mut edges = Vec::with_capacity(list.len());
        for &(u, v, length) in list {
            if !(length.is_finite() && length > 0.0) {
                return Err(TreeError::BadLength {
                    u: u.into(),
                    v: v.into(),
                    length,
                });
            }
            if u == v {
                return Err(TreeError::NotATree(format!("loop at {u}")));
            }
            let (a, b) = (id(u, &mut names), id(v, &mut names));
            edges.push(Edge { u: a, v: b, length });
        }
        Self::build(names, edges)
    }

    fn build(names: Vec<String>, edges: Vec<Edge>) -> Result<Self, TreeError> {
        if edges.is_empty() {
            return Err(TreeError::NotATree("no edges".into()));
        }
        let n = names.len();
        if edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} vertices but {} edges",
                n,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            adj[e.u].push((k, e.v));
            adj[e.v].push((k, e.u));
        }
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        let mut towards = vec![vec![usize::MAX; n]; n];
        for s in 0..n {
            // BFS from s; parent edges give the first edge of each arc back to s
            dist[s][s] = 0.0;
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for &(e, b) in &adj[a] {
                    if dist[s][b].is_infinite() {
                        dist[s][b] = dist[s][a] + edges[e].length;
                        towards[b][s] = e;
                        queue.push_back(b);
                    }
                }
            }
            if dist[s].iter().any(|d| d.is_infinite()) {
                return Err(TreeError::NotATree("disconnected".into()));
            }
        }
        for a in 0..n {
            for b in 0..a {
                dist[a][b] = dist[b][a];
            }
        }
        Ok(Self {
            names,
            edges,
            adj,
            dist,
            towards,
        })
    }

    /// Edge list, one `u v length` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut list = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [u, v, len] = fields[..] else {
                return Err(TreeError::Syntax {
                    line: i + 1,
                    message: "expected `u v length`".into(),
                });
            };
            let length: f64 = len.parse().map_err(|_| TreeError::Syntax {
                line: i + 1,
                message: format!("bad length `{len}`"),
            })?;
            list.push((u, v, length));
        }
        Self::from_edges(&list)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize, TreeError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TreeError::UnknownVertex(name.into()))
    }

    pub fn vertex_point(&self, v: usize) -> TreePoint {
        let (e, _) = self.adj[v][0];
        let offset = if self.edges[e].u == v {
            0.0
        } else {
            self.edges[e].length
        };
        TreePoint { edge: e, offset }
    }

    pub fn named_vertex(&self, name: &str) -> Result<TreePoint, TreeError> {
        Ok(self.vertex_point(self.vertex(name)?))
    }

    /// Point on the edge `u`–`v` at distance `offset` from `u`.
    pub fn point_between(&self, u: &str, v: &str, offset: f64) -> Result<TreePoint, TreeError> {
        let (a, b) = (self.vertex(u)?, self.vertex(v)?);
        let &(e, _) = self.adj[a]
            .iter()
            .find(|&&(_, w)| w == b)
            .ok_or_else(|| TreeError::UnknownEdge(u.into(), v.into()))?;
        let length = self.edges[e].length;
        if !(0.0..=length).contains(&offset) {
            return Err(TreeError::OffsetRange { offset, length });
        }
        Ok(if self.edges[e].u == a {
            TreePoint { edge: e, offset }
        } else {
            TreePoint {
                edge: e,
                offset: length - offset,
            }
        })
    }

    pub fn point(&self, edge: usize, offset: f64) -> Result<TreePoint, TreeError> {
        let length = self
            .edges
            .get(edge)
            .map(|e| e.length)
            .ok_or(TreeError::InvalidIndex)?;
        if !(0.0..=length).contains(&offset) {
            return Err(TreeError::OffsetRange { offset, length });
        }
        Ok(TreePoint { edge, offset })
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a][b]
    }

    /// Distances from `p` to the two ends `(u, v)` of its edge.
    fn ends(&self, p: &TreePoint) -> [(usize, f64); 2] {
        let e = &self.edges[p.edge];
        [(e.u, p.offset), (e.v, e.length - p.offset)]
    }

    /// Point at distance `d` from vertex `a` along edge `e`.
    fn along(&self, e: usize, a: usize, d: f64) -> TreePoint {
        let edge = &self.edges[e];
        let d = d.clamp(0.0, edge.length);
        TreePoint {
            edge: e,
            offset: if edge.u == a { d } else { edge.length - d },
        }
    }
}

/// A point of `T`: an edge and the distance from its first vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreePoint {
    pub edge: usize,
    pub offset: f64,
}

pub fn tree_distance(t: &MetricTree, p: &TreePoint, q: &TreePoint) -> f64 {
    if p.edge == q.edge {
        return (p.offset - q.offset).abs();
    }
    let mut best = f64::INFINITY;
    for &(a, da) in &t.ends(p) {
        for &(b, db) in &t.ends(q) {
            // summed in an order independent of the argument order
            best = best.min(da.min(db) + da.max(db) + t.dist[a][b]);
        }
    }
    best
}

/// The unique arc from `from` to `to`, through the listed vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeArc {
    pub from: TreePoint,
    pub to: TreePoint,
    pub vertices: Vec<usize>,
    pub length: f64,
}

pub fn tree_geodesic(t: &MetricTree, p: &TreePoint, q: &TreePoint) -> TreeArc {
    let length = tree_distance(t, p, q);
    if p.edge == q.edge {
        return TreeArc {
            from: *p,
            to: *q,
            vertices: vec![],
            length,
        };
    }
    // exit vertex of p and entry vertex of q realizing the distance
    let mut best = (f64::INFINITY, 0, 0);
    for &(a, da) in &t.ends(p) {
        for &(b, db) in &t.ends(q) {
            let d = da + t.dist[a][b] + db;
            if d < best.0 {
                best = (d, a, b);
            }
        }
    }
    let (_, a, b) = best;
    let mut vertices = vec![a];
    let mut cur = a;
    while cur != b {
        let e = t.towards[cur][b];
        cur = if t.edges[e].u == cur {
            t.edges[e].v
        } else {
            t.edges[e].u
        };
        vertices.push(cur);
    }
    TreeArc {
        from: *p,
        to: *q,
        vertices,
        length,
    }
}

impl TreeArc {
    /// Point at arclength `s` from `from`.
    pub fn point_at(&self, t: &MetricTree, s: f64) -> TreePoint {
        let s = s.clamp(0.0, self.length);
        if self.vertices.is_empty() {
            let dir = if self.to.offset >= self.from.offset {
                1.0
            } else {
                -1.0
            };
            return TreePoint {
                edge: self.from.edge,
                offset: self.from.offset + dir * s,
            };
        }
        let first = self.vertices[0];
        let lead = t
            .ends(&self.from)
            .iter()
            .find(|(v, _)| *v == first)
            .map(|&(_, d)| d)
            .expect("exit vertex");
        if s <= lead {
            // walk from `from` towards `first` on its own edge
            return t.along(self.from.edge, first, lead - s);
        }
        let mut walked = lead;
        for w in self.vertices.windows(2) {
            let e = t.towards[w[0]][w[1]];
            let len = t.edges[e].length;
            if s <= walked + len {
                return t.along(e, w[0], s - walked);
            }
            walked += len;
        }
        let last = *self.vertices.last().expect("nonempty");
        t.along(self.to.edge, last, s - walked)
    }
}

/// The center of the tripod spanned by `a, b, c`.
pub fn median(t: &MetricTree, a: &TreePoint, b: &TreePoint, c: &TreePoint) -> TreePoint {
    let (ab, ac, bc) = (
        tree_distance(t, a, b),
        tree_distance(t, a, c),
        tree_distance(t, b, c),
    );
    tree_geodesic(t, a, b).point_at(t, 0.5 * (ab + ac - bc))
}

/// A point `(t, p)` of `ℝ × T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConePoint {
    pub t: f64,
    pub p: TreePoint,
}

impl fmt::Display for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, edge {} @ {})", self.t, self.p.edge, self.p.offset)
    }
}

pub fn cone_distance(t: &MetricTree, x: &ConePoint, y: &ConePoint) -> f64 {
    (x.t - y.t).hypot(tree_distance(t, &x.p, &y.p))
}

/// Geodesic of `ℝ × T`: the tree arc with the `ℝ`-coordinate linear in
/// arclength.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeGeodesic {
    pub from: ConePoint,
    pub to: ConePoint,
    pub arc: TreeArc,
    pub length: f64,
}

pub fn cone_geodesic(t: &MetricTree, x: &ConePoint, y: &ConePoint) -> ConeGeodesic {
    let arc = tree_geodesic(t, &x.p, &y.p);
    let length = (y.t - x.t).hypot(arc.length);
    ConeGeodesic {
        from: *x,
        to: *y,
        arc,
        length,
    }
}

impl ConeGeodesic {
    /// Point at parameter `s ∈ [0, 1]` (proportional to arclength).
    pub fn at(&self, t: &MetricTree, s: f64) -> ConePoint {
        let s = s.clamp(0.0, 1.0);
        ConePoint {
            t: self.from.t + s * (self.to.t - self.from.t),
            p: self.arc.point_at(t, s * self.arc.length),
        }
    }
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + scale)
}

fn scale_of(t: &MetricTree, pts: &[&ConePoint]) -> f64 {
    let d = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| (a, b)))
        .map(|(a, b)| tree_distance(t, &a.p, &b.p))
        .fold(0.0, f64::max);
    pts.iter().map(|p| p.t.abs()).fold(d, f64::max)
}

/// `ℝ`-coordinates where the sides `[x,y]`, `[x,z]`, `[y,z]` cross the wall
/// through the tripod center.
pub fn wall_crossings(
    t: &MetricTree,
    x: &ConePoint,
    y: &ConePoint,
    z: &ConePoint,
) -> Result<[f64; 3], TreeError> {
    let scale = scale_of(t, &[x, y, z]);
    let (xy, xz, yz) = (
        tree_distance(t, &x.p, &y.p),
        tree_distance(t, &x.p, &z.p),
        tree_distance(t, &y.p, &z.p),
    );
    if [xy, xz, yz].iter().any(|&d| close(d, 0.0, scale)) {
        return Err(TreeError::CoincidentProjections);
    }
    let m = median(t, &x.p, &y.p, &z.p);
    let (dx, dy, dz) = (
        tree_distance(t, &x.p, &m),
        tree_distance(t, &y.p, &m),
        tree_distance(t, &z.p, &m),
    );
    if [dx, dy, dz].iter().any(|&d| close(d, 0.0, scale)) {
        return Err(TreeError::DegenerateTripod);
    }
    let cross = |a: &ConePoint, b: &ConePoint, da: f64, dab: f64| a.t + (b.t - a.t) * da / dab;
    Ok([
        cross(x, y, dx, xy),
        cross(x, z, dx, xz),
        cross(y, z, dy, yz),
    ])
}

pub fn is_open(t: &MetricTree, x: &ConePoint, y: &ConePoint, z: &ConePoint) -> bool {
    let scale = scale_of(t, &[x, y, z]);
    match wall_crossings(t, x, y, z) {
        Ok([a, b, c]) => !close(a, b, scale) && !close(a, c, scale) && !close(b, c, scale),
        Err(_) => {
            // all three in one flat strip ℝ × [p, q]: planar non-collinearity
            let pts = [x, y, z];
            let far = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .max_by(|&(i, j), &(k, l)| {
                    tree_distance(t, &pts[i].p, &pts[j].p)
                        .total_cmp(&tree_distance(t, &pts[k].p, &pts[l].p))
                })
                .expect("three points");
            let origin = pts[far.0].p;
            let planar: Vec<(f64, f64)> = pts
                .iter()
                .map(|q| (tree_distance(t, &origin, &q.p), q.t))
                .collect();
            let (u, v) = (
                (planar[1].0 - planar[0].0, planar[1].1 - planar[0].1),
                (planar[2].0 - planar[0].0, planar[2].1 - planar[0].1),
            );
            let cross = u.0 * v.1 - u.1 * v.0;
            cross.abs() > TOL * (1.0 + scale * scale)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation {
    Found(ConePoint),
    NotFound {
        diagnostic: String,
        candidates: usize,
    },
}

/// A point within `1/n` of `z` making the triangle `x, y, z_n` open, from a
/// deterministic sweep over `ℝ`-offsets and moves of `z̄` along incident
/// edges.
pub fn find_open_perturbation(
    t: &MetricTree,
    x: &ConePoint,
    y: &ConePoint,
    z: &ConePoint,
    n: u32,
) -> Result<Perturbation, TreeError> {
    if n == 0 {
        return Err(TreeError::InvalidIndex);
    }
    if is_open(t, x, y, z) {
        return Ok(Perturbation::Found(*z));
    }
    let radius = 1.0 / f64::from(n);
    let steps = [radius, 0.5 * radius, 0.25 * radius];
    let offsets: Vec<f64> = std::iter::once(0.0)
        .chain(steps.iter().flat_map(|&s| [s, -s]))
        .collect();

    // moves of z̄ along the edges at its position
    let mut moves = vec![(0.0, z.p)];
    let edge = &t.edges[z.p.edge];
    let at_vertex = [(edge.u, z.p.offset), (edge.v, edge.length - z.p.offset)]
        .into_iter()
        .find(|&(_, d)| d == 0.0)
        .map(|(v, _)| v);
    for &s in &steps {
        match at_vertex {
            Some(v) => {
                for &(e, _) in &t.adj[v] {
                    moves.push((s, t.along(e, v, s)));
                }
            }
            None => {
                for dir in [1.0, -1.0] {
                    let p = TreePoint {
                        edge: z.p.edge,
                        offset: (z.p.offset + dir * s).clamp(0.0, edge.length),
                    };
                    moves.push((tree_distance(t, &z.p, &p), p));
                }
            }
        }
    }

    let mut candidates: Vec<(f64, ConePoint)> = Vec::new();
    for &(d, p) in &moves {
        for &dt in &offsets {
            let dist = dt.hypot(d);
            if dist > 0.0 && dist <= radius {
                candidates.push((dist, ConePoint { t: z.t + dt, p }));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, c) in &candidates {
        if cone_distance(t, c, z) <= radius && is_open(t, x, y, c) {
            return Ok(Perturbation::Found(*c));
        }
    }

    let scale = scale_of(t, &[x, y, z]);
    let m = median(t, &x.p, &y.p, &z.p);
    let symmetric = close(x.t, y.t, scale)
        && close(
            tree_distance(t, &x.p, &m),
            tree_distance(t, &y.p, &m),
            scale,
        );
    let diagnostic = if symmetric {
        SYMMETRIC_DIAGNOSTIC.to_string()
    } else {
        format!(
            "no open triangle among {} candidate perturbations",
            candidates.len()
        )
    };
    Ok(Perturbation::NotFound {
        diagnostic,
        candidates: candidates.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tripod() -> MetricTree {
        MetricTree::from_edges(&[("o", "a", 1.0), ("o", "b", 1.0), ("o", "c", 1.0)]).unwrap()
    }

    fn cp(t: &MetricTree, s: f64, v: &str) -> ConePoint {
        ConePoint {
            t: s,
            p: t.named_vertex(v).unwrap(),
        }
    }

    #[test]
    fn parse_and_validate() {
        let t = MetricTree::parse("# tripod\no a 1\no b 1.5\n\no c 2 # leg\n").unwrap();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(
            t.vertex_distance(t.vertex("b").unwrap(), t.vertex("c").unwrap()),
            3.5
        );
        assert!(matches!(
            MetricTree::parse("a b 1\nb c 1\nc a 1\n"),
            Err(TreeError::NotATree(_))
        ));
        assert!(matches!(
            MetricTree::parse("a b 1\nc d 1\n"),
            Err(TreeError::NotATree(_))
        ));
        assert!(matches!(
            MetricTree::parse("a b 0\n"),
            Err(TreeError::BadLength { .. })
        ));
        assert!(matches!(
            MetricTree::parse("a b\n"),
            Err(TreeError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let t = tripod();
        let a = t.named_vertex("a").unwrap();
        let b = t.named_vertex("b").unwrap();
        assert_eq!(tree_distance(&t, &a, &a), 0.0);
        assert_eq!(tree_distance(&t, &a, &b), 2.0);
        let path = MetricTree::from_edges(&[("p", "q", 5.0)]).unwrap();
        let (p1, p4) = (path.point(0, 1.0).unwrap(), path.point(0, 4.0).unwrap());
        assert_eq!(tree_distance(&path, &p1, &p4), 3.0);
    }

    #[test]
    fn median_examples() {
        let t = tripod();
        let [a, b, c] = ["a", "b", "c"].map(|v| t.named_vertex(v).unwrap());
        let m = median(&t, &a, &b, &c);
        assert!(tree_distance(&t, &m, &t.named_vertex("o").unwrap()) < 1e-15);
        let mid = t.point_between("o", "a", 0.5).unwrap();
        let m = median(&t, &mid, &a, &b);
        assert!(tree_distance(&t, &m, &mid) < 1e-15);
        let path = MetricTree::from_edges(&[("p", "q", 5.0)]).unwrap();
        let pts = [0.0, 2.0, 5.0].map(|o| path.point(0, o).unwrap());
        assert_eq!(median(&path, &pts[0], &pts[1], &pts[2]).offset, 2.0);
    }

    #[test]
    fn cone_geodesic_examples() {
        let t = tripod();
        let (x, y) = (cp(&t, 0.0, "a"), cp(&t, 1.0, "b"));
        assert!((cone_distance(&t, &x, &y) - 5.0_f64.sqrt()).abs() < 1e-15);
        let g = cone_geodesic(&t, &x, &y);
        let mid = g.at(&t, 0.5);
        assert_eq!(mid.t, 0.5);
        assert!(tree_distance(&t, &mid.p, &t.named_vertex("o").unwrap()) < 1e-15);
        let up = cp(&t, 3.0, "a");
        assert_eq!(cone_distance(&t, &x, &up), 3.0);
    }

    #[test]
    fn crossing_examples() {
        let t = tripod();
        let (x, y) = (cp(&t, 0.0, "a"), cp(&t, 1.0, "b"));
        assert_eq!(
            wall_crossings(&t, &x, &y, &cp(&t, 0.0, "c")).unwrap(),
            [0.5, 0.0, 0.5]
        );
        assert_eq!(
            wall_crossings(&t, &x, &y, &cp(&t, -0.5, "c")).unwrap(),
            [0.5, -0.25, 0.25]
        );
        let y0 = cp(&t, 0.0, "b");
        for s in [-1.0, 0.3, 2.0] {
            assert_eq!(
                wall_crossings(&t, &x, &y0, &cp(&t, s, "c")).unwrap(),
                [0.0, s / 2.0, s / 2.0]
            );
        }
        assert!(!is_open(&t, &x, &y, &cp(&t, 0.0, "c")));
        assert!(is_open(&t, &x, &y, &cp(&t, -0.5, "c")));
        assert!(!is_open(&t, &x, &cp(&t, 1.0, "a"), &cp(&t, 2.0, "a")));
        assert_eq!(
            wall_crossings(&t, &x, &cp(&t, 1.0, "a"), &y),
            Err(TreeError::CoincidentProjections)
        );
    }

    #[test]
    fn perturbation_examples() {
        let t = tripod();
        let (x, y, z) = (cp(&t, 0.0, "a"), cp(&t, 1.0, "b"), cp(&t, 0.0, "c"));
        let Perturbation::Found(zn) = find_open_perturbation(&t, &x, &y, &z, 4).unwrap() else {
            panic!()
        };
        assert!(cone_distance(&t, &zn, &z) <= 0.25);
        assert!(is_open(&t, &x, &y, &zn));
        let open = cp(&t, -0.5, "c");
        assert_eq!(
            find_open_perturbation(&t, &x, &y, &open, 4).unwrap(),
            Perturbation::Found(open)
        );
        let y0 = cp(&t, 0.0, "b");
        match find_open_perturbation(&t, &x, &y0, &z, 4).unwrap() {
            Perturbation::NotFound { diagnostic, .. } => {
                assert_eq!(diagnostic, SYMMETRIC_DIAGNOSTIC)
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            find_open_perturbation(&t, &x, &y, &z, 0),
            Err(TreeError::InvalidIndex)
        );
    }
}

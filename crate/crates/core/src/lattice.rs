//! Oriented square lattices with four qudit sites per vertex.
//!
//! Every edge points rightward or upward and carries two sites: the tail site
//! at its source vertex (direction E or N) and the head site at its target
//! vertex (direction W or S). Sites are indexed row-major over vertices and
//! then in the order W, N, E, S.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Torus,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    W,
    N,
    E,
    S,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::W, Direction::N, Direction::E, Direction::S];

    pub fn letter(self) -> char {
        match self {
            Direction::W => 'W',
            Direction::N => 'N',
            Direction::E => 'E',
            Direction::S => 'S',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Corner {
    NW,
    NE,
    SE,
    SW,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SE, Corner::SW];
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId {
    pub x: usize,
    pub y: usize,
}

/// A face, named by its south-west vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceId {
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// An edge, named by its source vertex and axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId {
    pub x: usize,
    pub y: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SiteId {
    pub vertex: VertexId,
    pub dir: Direction,
}

impl SiteId {
    pub fn new(x: usize, y: usize, dir: Direction) -> Self {
        SiteId {
            vertex: VertexId { x, y },
            dir,
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.dir.letter())
    }
}

impl FromStr for SiteId {
    type Err = Error;

    /// Parses `(x,y).D`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::parse(
                1,
                format!("expected a site of the form (x,y).D, found {s:?}"),
            )
        };
        let rest = s.trim().strip_prefix('(').ok_or_else(bad)?;
        let (coords, tail) = rest.split_once(')').ok_or_else(bad)?;
        let (xs, ys) = coords.split_once(',').ok_or_else(bad)?;
        let x = xs.trim().parse().map_err(|_| bad())?;
        let y = ys.trim().parse().map_err(|_| bad())?;
        let dir = match tail.strip_prefix('.').ok_or_else(bad)? {
            "W" => Direction::W,
            "N" => Direction::N,
            "E" => Direction::E,
            "S" => Direction::S,
            _ => return Err(bad()),
        };
        Ok(SiteId::new(x, y, dir))
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    topology: Topology,
    m: usize,
    n: usize,
    sites: Vec<SiteId>,
    index: HashMap<SiteId, usize>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.topology == other.topology && self.m == other.m && self.n == other.n
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// `m` faces per row (columns), `n` faces per column (rows).
    pub fn new(topology: Topology, m: usize, n: usize) -> Result<Self> {
        match topology {
            Topology::Torus if m < 2 || n < 2 => {
                return Err(Error::InvalidArgument(format!(
                    "torus needs at least 2x2 faces, got {m}x{n}"
                )))
            }
            Topology::Open if m < 1 || n < 1 => {
                return Err(Error::InvalidArgument(format!(
                    "open lattice needs at least 1x1 faces, got {m}x{n}"
                )))
            }
            _ => {}
        }
        let mut lattice = Lattice {
            topology,
            m,
            n,
            sites: Vec::new(),
            index: HashMap::new(),
        };
        for v in lattice.vertices().collect::<Vec<_>>() {
            for dir in Direction::ALL {
                if lattice.has_direction(v, dir) {
                    let site = SiteId { vertex: v, dir };
                    lattice.index.insert(site, lattice.sites.len());
                    lattice.sites.push(site);
                }
            }
        }
        Ok(lattice)
    }

    pub fn torus(m: usize, n: usize) -> Result<Self> {
        Lattice::new(Topology::Torus, m, n)
    }

    pub fn open(m: usize, n: usize) -> Result<Self> {
        Lattice::new(Topology::Open, m, n)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn vertex_cols(&self) -> usize {
        match self.topology {
            Topology::Torus => self.m,
            Topology::Open => self.m + 1,
        }
    }

    fn vertex_rows(&self) -> usize {
        match self.topology {
            Topology::Torus => self.n,
            Topology::Open => self.n + 1,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_cols() * self.vertex_rows()
    }

    pub fn n_faces(&self) -> usize {
        self.m * self.n
    }

    pub fn n_edges(&self) -> usize {
        match self.topology {
            Topology::Torus => 2 * self.m * self.n,
            Topology::Open => self.m * (self.n + 1) + self.n * (self.m + 1),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// Vertices in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        let (cols, rows) = (self.vertex_cols(), self.vertex_rows());
        (0..rows).flat_map(move |y| (0..cols).map(move |x| VertexId { x, y }))
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> {
        let (m, n) = (self.m, self.n);
        (0..n).flat_map(move |y| (0..m).map(move |x| FaceId { x, y }))
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.n_edges());
        for v in self.vertices() {
            for axis in [Axis::Horizontal, Axis::Vertical] {
                let e = EdgeId {
                    x: v.x,
                    y: v.y,
                    axis,
                };
                if self.is_edge(e) {
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn sites(&self) -> &[SiteId] {
        &self.sites
    }

    pub fn site(&self, index: usize) -> SiteId {
        self.sites[index]
    }

    pub fn site_index(&self, site: SiteId) -> Option<usize> {
        self.index.get(&site).copied()
    }

    /// Index of a site given by raw coordinates, wrapped on the torus.
    pub fn index_of(&self, x: usize, y: usize, dir: Direction) -> Result<usize> {
        let v = self.wrap(x, y);
        let site = SiteId { vertex: v, dir };
        self.site_index(site)
            .ok_or_else(|| Error::MissingSite(site.to_string()))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.x < self.vertex_cols() && v.y < self.vertex_rows()
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        f.x < self.m && f.y < self.n
    }

    fn is_edge(&self, e: EdgeId) -> bool {
        match (self.topology, e.axis) {
            (Topology::Torus, _) => e.x < self.m && e.y < self.n,
            (Topology::Open, Axis::Horizontal) => e.x < self.m && e.y <= self.n,
            (Topology::Open, Axis::Vertical) => e.x <= self.m && e.y < self.n,
        }
    }

    fn wrap(&self, x: usize, y: usize) -> VertexId {
        match self.topology {
            Topology::Torus => VertexId {
                x: x % self.m,
                y: y % self.n,
            },
            Topology::Open => VertexId { x, y },
        }
    }

    fn has_direction(&self, v: VertexId, dir: Direction) -> bool {
        if !self.contains_vertex(v) {
            return false;
        }
        match self.topology {
            Topology::Torus => true,
            Topology::Open => match dir {
                Direction::W => v.x > 0,
                Direction::E => v.x < self.m,
                Direction::S => v.y > 0,
                Direction::N => v.y < self.n,
            },
        }
    }

    /// Sites present at `v`, in W, N, E, S order.
    pub fn vertex_sites(&self, v: VertexId) -> Vec<SiteId> {
        Direction::ALL
            .into_iter()
            .filter(|&d| self.has_direction(v, d))
            .map(|dir| SiteId { vertex: v, dir })
            .collect()
    }

    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.vertex_sites(v).len() < 4
    }

    /// Tail site at the source vertex, head site at the target vertex.
    pub fn edge_sites(&self, e: EdgeId) -> Result<(SiteId, SiteId)> {
        if !self.is_edge(e) {
            return Err(Error::InvalidArgument(format!(
                "no edge {e:?} on this lattice"
            )));
        }
        let (tail_dir, head_dir, dx, dy) = match e.axis {
            Axis::Horizontal => (Direction::E, Direction::W, 1, 0),
            Axis::Vertical => (Direction::N, Direction::S, 0, 1),
        };
        Ok((
            SiteId::new(e.x, e.y, tail_dir),
            SiteId {
                vertex: self.wrap(e.x + dx, e.y + dy),
                dir: head_dir,
            },
        ))
    }

    /// The pair of sites at one corner of a face, on the vertex at that corner.
    pub fn face_corner_sites(&self, f: FaceId, corner: Corner) -> Result<(SiteId, SiteId)> {
        if !self.contains_face(f) {
            return Err(Error::InvalidArgument(format!(
                "no face {f} on this lattice"
            )));
        }
        let (x, y) = (f.x, f.y);
        let at = |dx: usize, dy: usize, d1: Direction, d2: Direction| {
            let v = self.wrap(x + dx, y + dy);
            (SiteId { vertex: v, dir: d1 }, SiteId { vertex: v, dir: d2 })
        };
        Ok(match corner {
            Corner::NW => at(0, 1, Direction::S, Direction::E),
            Corner::NE => at(1, 1, Direction::S, Direction::W),
            Corner::SE => at(1, 0, Direction::N, Direction::W),
            Corner::SW => at(0, 0, Direction::N, Direction::E),
        })
    }

    /// The pair of sites spanning one corner of a vertex.
    pub fn vertex_corner_sites(&self, v: VertexId, corner: Corner) -> Result<(SiteId, SiteId)> {
        if !self.contains_vertex(v) {
            return Err(Error::InvalidArgument(format!(
                "no vertex {v} on this lattice"
            )));
        }
        let (d1, d2) = match corner {
            Corner::NE => (Direction::N, Direction::E),
            Corner::NW => (Direction::N, Direction::W),
            Corner::SW => (Direction::S, Direction::W),
            Corner::SE => (Direction::S, Direction::E),
        };
        for d in [d1, d2] {
            if !self.has_direction(v, d) {
                return Err(Error::MissingSite(SiteId { vertex: v, dir: d }.to_string()));
            }
        }
        Ok((SiteId { vertex: v, dir: d1 }, SiteId { vertex: v, dir: d2 }))
    }

    /// Boundary edges of a face as (left, top, right, bottom); left and right
    /// point up, top and bottom point right.
    pub fn face_edges(&self, f: FaceId) -> [EdgeId; 4] {
        let nw = self.wrap(f.x, f.y + 1);
        let se = self.wrap(f.x + 1, f.y);
        [
            EdgeId {
                x: f.x,
                y: f.y,
                axis: Axis::Vertical,
            },
            EdgeId {
                x: nw.x,
                y: nw.y,
                axis: Axis::Horizontal,
            },
            EdgeId {
                x: se.x,
                y: se.y,
                axis: Axis::Vertical,
            },
            EdgeId {
                x: f.x,
                y: f.y,
                axis: Axis::Horizontal,
            },
        ]
    }

    /// The vertex at a given corner of a face.
    pub fn face_vertex(&self, f: FaceId, corner: Corner) -> VertexId {
        match corner {
            Corner::NW => self.wrap(f.x, f.y + 1),
            Corner::NE => self.wrap(f.x + 1, f.y + 1),
            Corner::SE => self.wrap(f.x + 1, f.y),
            Corner::SW => self.wrap(f.x, f.y),
        }
    }

    /// Parses a site in `(x,y).D` form and checks it exists.
    pub fn parse_site(&self, text: &str) -> Result<usize> {
        let site: SiteId = text.parse()?;
        self.site_index(site)
            .ok_or_else(|| Error::MissingSite(site.to_string()))
    }

    pub fn spec_string(&self) -> String {
        let kind = match self.topology {
            Topology::Torus => "torus",
            Topology::Open => "open",
        };
        format!("{kind}:{}x{}", self.m, self.n)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl FromStr for Lattice {
    type Err = Error;

    /// Parses `torus:MxN` or `open:MxN`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidArgument(format!(
                "lattice spec must be torus:MxN or open:MxN, got {s:?}"
            ))
        };
        let (kind, dims) = s.trim().split_once(':').ok_or_else(bad)?;
        let topology = match kind {
            "torus" => Topology::Torus,
            "open" => Topology::Open,
            _ => return Err(bad()),
        };
        let (ms, ns) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        let m = ms.parse().map_err(|_| bad())?;
        let n = ns.parse().map_err(|_| bad())?;
        Lattice::new(topology, m, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let t = Lattice::torus(2, 2).unwrap();
        assert_eq!(
            (t.n_vertices(), t.n_edges(), t.n_faces(), t.n_sites()),
            (4, 8, 4, 16)
        );
        let o = Lattice::open(3, 4).unwrap();
        assert_eq!(
            (o.n_vertices(), o.n_faces(), o.n_edges(), o.n_sites()),
            (20, 12, 31, 62)
        );
        assert!(Lattice::torus(1, 1).is_err());
        assert!(Lattice::torus(1, 3).is_err());
        assert!(Lattice::open(0, 3).is_err());
    }

    #[test]
    fn open_lattice_counts_match_formulas() {
        for m in 1..=5 {
            for n in 1..=5 {
                let l = Lattice::open(m, n).unwrap();
                assert_eq!(l.n_vertices(), (m + 1) * (n + 1));
                assert_eq!(l.n_edges(), l.edges().len());
                assert_eq!(l.n_sites(), 2 * l.n_edges());
                let corners = l
                    .vertices()
                    .filter(|&v| l.vertex_sites(v).len() == 2)
                    .count();
                let sides = l
                    .vertices()
                    .filter(|&v| l.vertex_sites(v).len() == 3)
                    .count();
                assert_eq!(corners, 4);
                assert_eq!(sides, 2 * (m + n) - 4);
            }
        }
    }

    #[test]
    fn edge_site_conventions() {
        let t = Lattice::torus(3, 3).unwrap();
        let h = t
            .edge_sites(EdgeId {
                x: 0,
                y: 0,
                axis: Axis::Horizontal,
            })
            .unwrap();
        assert_eq!(
            h,
            (
                SiteId::new(0, 0, Direction::E),
                SiteId::new(1, 0, Direction::W)
            )
        );
        let v = t
            .edge_sites(EdgeId {
                x: 2,
                y: 1,
                axis: Axis::Vertical,
            })
            .unwrap();
        assert_eq!(
            v,
            (
                SiteId::new(2, 1, Direction::N),
                SiteId::new(2, 2, Direction::S)
            )
        );
        let wrap = t
            .edge_sites(EdgeId {
                x: 1,
                y: 2,
                axis: Axis::Vertical,
            })
            .unwrap();
        assert_eq!(
            wrap,
            (
                SiteId::new(1, 2, Direction::N),
                SiteId::new(1, 0, Direction::S)
            )
        );
    }

    #[test]
    fn face_corners() {
        let t = Lattice::torus(2, 2).unwrap();
        let f = FaceId { x: 0, y: 0 };
        assert_eq!(
            t.face_corner_sites(f, Corner::SW).unwrap(),
            (
                SiteId::new(0, 0, Direction::N),
                SiteId::new(0, 0, Direction::E)
            )
        );
        assert_eq!(
            t.face_corner_sites(f, Corner::NW).unwrap(),
            (
                SiteId::new(0, 1, Direction::S),
                SiteId::new(0, 1, Direction::E)
            )
        );
    }

    #[test]
    fn open_corner_vertex_lacks_sites() {
        let o = Lattice::open(2, 2).unwrap();
        let top_left = VertexId { x: 0, y: 2 };
        assert!(matches!(
            o.vertex_corner_sites(top_left, Corner::NE),
            Err(Error::MissingSite(_))
        ));
        assert!(o.vertex_corner_sites(top_left, Corner::SE).is_ok());
    }

    #[test]
    fn face_corner_is_opposite_vertex_corner() {
        let t = Lattice::torus(3, 4).unwrap();
        let opposite = [
            (Corner::NW, Corner::SE),
            (Corner::NE, Corner::SW),
            (Corner::SE, Corner::NW),
            (Corner::SW, Corner::NE),
        ];
        for f in t.faces() {
            for (fc, vc) in opposite {
                let (a, b) = t.face_corner_sites(f, fc).unwrap();
                let (c, d) = t.vertex_corner_sites(t.face_vertex(f, fc), vc).unwrap();
                let mut lhs = [a, b];
                let mut rhs = [c, d];
                lhs.sort();
                rhs.sort();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn torus_incidence_counts() {
        let t = Lattice::torus(3, 4).unwrap();
        let mut face_pairs = vec![0; t.n_sites()];
        let mut vertex_pairs = vec![0; t.n_sites()];
        let mut edge_ends = vec![0; t.n_sites()];
        for f in t.faces() {
            for c in Corner::ALL {
                let (a, b) = t.face_corner_sites(f, c).unwrap();
                face_pairs[t.site_index(a).unwrap()] += 1;
                face_pairs[t.site_index(b).unwrap()] += 1;
            }
        }
        for v in t.vertices() {
            for c in Corner::ALL {
                let (a, b) = t.vertex_corner_sites(v, c).unwrap();
                vertex_pairs[t.site_index(a).unwrap()] += 1;
                vertex_pairs[t.site_index(b).unwrap()] += 1;
            }
        }
        for e in t.edges() {
            let (a, b) = t.edge_sites(e).unwrap();
            edge_ends[t.site_index(a).unwrap()] += 1;
            edge_ends[t.site_index(b).unwrap()] += 1;
        }
        assert!(face_pairs.iter().all(|&c| c == 2));
        assert!(vertex_pairs.iter().all(|&c| c == 2));
        assert!(edge_ends.iter().all(|&c| c == 1));
    }

    #[test]
    fn site_ordering_is_row_major_then_wnes() {
        let t = Lattice::torus(2, 2).unwrap();
        assert_eq!(t.site(0), SiteId::new(0, 0, Direction::W));
        assert_eq!(t.site(3), SiteId::new(0, 0, Direction::S));
        assert_eq!(t.site(4), SiteId::new(1, 0, Direction::W));
        assert_eq!(t.site(8), SiteId::new(0, 1, Direction::W));
        let o = Lattice::open(1, 1).unwrap();
        assert_eq!(o.site(0), SiteId::new(0, 0, Direction::N));
        assert_eq!(o.site(1), SiteId::new(0, 0, Direction::E));
    }

    #[test]
    fn spec_strings() {
        let l: Lattice = "open:3x4".parse().unwrap();
        assert_eq!(l.spec_string(), "open:3x4");
        assert!("torus:2".parse::<Lattice>().is_err());
        let s: SiteId = "(2,1).N".parse().unwrap();
        assert_eq!(s, SiteId::new(2, 1, Direction::N));
        assert_eq!(s.to_string(), "(2,1).N");
    }
}

//! The combinatorial map of an arrow diagram and the sphericity test.
//!
//! Every crossing is a 4-valent vertex whose counter-clockwise half-edge order
//! is forced by the chord direction: outgoing first branch, outgoing second
//! branch, incoming first branch, incoming second branch. The first branch is
//! the one carrying the tail. Edges are the skeleton arcs between consecutive
//! endpoints; arc `p` runs from position `p` to position `p + 1`.

use crate::diagram::ArrowDiagram;

/// Half-edges are numbered `2p` (leaving position `p`) and `2p + 1`
/// (arriving at position `p`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    positions: usize,
    /// Counter-clockwise half-edge order around each chord vertex.
    vertices: Vec<[usize; 4]>,
    ccw_next: Vec<usize>,
    ccw_prev: Vec<usize>,
}

/// One traversal of an arc, forward (with the curve) or backward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub arc: usize,
    pub forward: bool,
}

pub const fn out_half(p: usize) -> usize {
    2 * p
}

pub const fn in_half(p: usize) -> usize {
    2 * p + 1
}

impl RotationSystem {
    pub fn new(d: &ArrowDiagram) -> Self {
        let positions = d.len();
        let vertices: Vec<[usize; 4]> =
            d.chord_positions().into_iter().map(|[t, h]| [out_half(t), out_half(h), in_half(t), in_half(h)]).collect();
        let mut ccw_next = vec![0; 2 * positions];
        let mut ccw_prev = vec![0; 2 * positions];
        for v in &vertices {
            for i in 0..4 {
                ccw_next[v[i]] = v[(i + 1) % 4];
                ccw_prev[v[(i + 1) % 4]] = v[i];
            }
        }
        RotationSystem { positions, vertices, ccw_next, ccw_prev }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.positions
    }

    /// Counter-clockwise half-edge order at the vertex of `chord`.
    pub fn vertex(&self, chord: usize) -> [usize; 4] {
        self.vertices[chord]
    }

    fn opposite(&self, h: usize) -> usize {
        let n = self.positions;
        let p = h / 2;
        if h.is_multiple_of(2) {
            in_half((p + 1) % n)
        } else {
            out_half((p + n - 1) % n)
        }
    }

    fn dart_of(&self, h: usize) -> Dart {
        let n = self.positions;
        let p = h / 2;
        if h.is_multiple_of(2) {
            Dart { arc: p, forward: true }
        } else {
            Dart { arc: (p + n - 1) % n, forward: false }
        }
    }

    /// Face boundaries, each a cyclic list of darts with the face on the left.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        if self.positions == 0 {
            // A bare circle: one arc bounding two discs.
            return vec![vec![Dart { arc: 0, forward: true }], vec![Dart { arc: 0, forward: false }]];
        }
        let mut seen = vec![false; 2 * self.positions];
        let mut faces = Vec::new();
        for start in 0..2 * self.positions {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(self.dart_of(h));
                // Turning to the clockwise neighbour keeps the face on the left.
                h = self.ccw_prev[self.opposite(h)];
            }
            faces.push(face);
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Euler characteristic V - E + F of the closed surface built from the map.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn genus(&self) -> usize {
        if self.positions == 0 {
            return 0;
        }
        let defect = 2 - self.euler_characteristic();
        assert!(defect >= 0 && defect % 2 == 0, "ill-formed map: chi = {}", 2 - defect);
        (defect / 2) as usize
    }

    pub fn ccw_next(&self, h: usize) -> usize {
        self.ccw_next[h]
    }
}

pub fn rotation_system(d: &ArrowDiagram) -> RotationSystem {
    RotationSystem::new(d)
}

/// True iff the diagram is the arrow diagram of a curve on the sphere.
pub fn is_realizable(d: &ArrowDiagram) -> bool {
    d.is_empty() || RotationSystem::new(d).genus() == 0
}

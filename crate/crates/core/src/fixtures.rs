//! Named complexes used in tests, benchmarks and the verification suite.

use crate::complex::Complex;
use crate::simplex::{Simplex, VertexId};

fn tri(a: VertexId, b: VertexId, c: VertexId) -> Simplex {
    Simplex::new([a, b, c]).expect("distinct vertices")
}

/// Boundary of a triangle on `{0, 1, 2}`.
pub fn hollow_triangle() -> Complex {
    Complex::from_vertex_lists([[0, 1], [1, 2], [0, 2]]).expect("valid")
}

/// Two triangles sharing the edge `[0, 2]`.
pub fn two_triangles() -> Complex {
    Complex::from_facets([tri(0, 1, 2), tri(0, 2, 3)])
}

/// A `width x height` grid of vertices, every unit square split along its
/// rising diagonal, with the listed squares (by lower-left corner) left out.
pub fn grid_with_holes(width: u32, height: u32, holes: &[(u32, u32)]) -> Complex {
    let id = |x: u32, y: u32| y * width + x;
    let mut facets = Vec::new();
    for y in 0..height - 1 {
        for x in 0..width - 1 {
            if holes.contains(&(x, y)) {
                continue;
            }
            let (a, b, c, d) = (id(x, y), id(x + 1, y), id(x, y + 1), id(x + 1, y + 1));
            facets.push(tri(a, b, d));
            facets.push(tri(a, c, d));
        }
    }
    Complex::from_facets(facets)
}

/// A triangulated annulus: a 4 x 4 vertex grid without its central square.
pub fn annulus() -> Complex {
    grid_with_holes(4, 4, &[(1, 1)])
}

/// A triangulated disk with two holes: a 6 x 4 vertex grid without two
/// interior squares.
pub fn two_hole_disk() -> Complex {
    grid_with_holes(6, 4, &[(1, 1), (3, 1)])
}

/// The seven-vertex triangulation of the torus: triangles `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` modulo 7.
pub fn seven_vertex_torus() -> Complex {
    let m = |x: u32| x % 7;
    Complex::from_facets((0..7).flat_map(|i| [tri(i, m(i + 1), m(i + 3)), tri(i, m(i + 2), m(i + 3))]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let t = seven_vertex_torus();
        assert_eq!((t.count_of_dim(0), t.count_of_dim(1), t.count_of_dim(2)), (7, 21, 14));
        assert_eq!(annulus().euler_characteristic(), 0);
        assert_eq!(two_hole_disk().euler_characteristic(), -1);
        assert_eq!(two_triangles().len(), 11);
    }
}

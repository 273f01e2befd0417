//! Triangulation generators for the test corpus and the `gen` CLI command.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exact_linalg::RandomSource;
use crate::graph::{edge, Edge};
use crate::triangulation::{PlaneTriangulation, TriangulationError};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("need at least {1} vertices, got {0}")]
    TooSmall(usize, usize),
    #[error("flip walk did not reach a 4-connected triangulation")]
    FourConnectedUnreachable,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// K4 embedded as the boundary of the tetrahedron.
pub fn tetrahedron() -> PlaneTriangulation {
    let faces = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 1],
        vec![1, 3, 2],
    ];
    PlaneTriangulation::from_faces(4, &faces, None).expect("tetrahedron is valid")
}

/// Cycle of length `k` plus two poles joined to every cycle vertex.
/// `double_wheel(4)` is the octahedron; `double_wheel(5)` is the unique
/// 4-connected triangulation on seven vertices.
pub fn double_wheel(k: usize) -> PlaneTriangulation {
    assert!(k >= 3);
    let top = k;
    let bottom = k + 1;
    let mut faces = Vec::with_capacity(2 * k);
    for i in 0..k {
        let j = (i + 1) % k;
        faces.push(vec![i, j, top]);
        faces.push(vec![j, i, bottom]);
    }
    PlaneTriangulation::from_faces(k + 2, &faces, None).expect("double wheel is valid")
}

/// The octahedron: rim `0..=3`, poles 4 and 5. The non-adjacent (antipodal)
/// pairs are (0,2), (1,3) and (4,5).
pub fn octahedron() -> PlaneTriangulation {
    double_wheel(4)
}

/// The icosahedron on 12 vertices, 30 edges, 20 faces.
pub fn icosahedron() -> PlaneTriangulation {
    let rotation: Vec<Vec<usize>> = vec![
        vec![1, 2, 6, 8, 7],
        vec![0, 7, 3, 5, 2],
        vec![0, 1, 5, 4, 6],
        vec![1, 7, 11, 9, 5],
        vec![2, 5, 9, 10, 6],
        vec![1, 3, 9, 4, 2],
        vec![0, 2, 4, 10, 8],
        vec![0, 8, 11, 3, 1],
        vec![0, 6, 10, 11, 7],
        vec![3, 11, 10, 4, 5],
        vec![4, 9, 11, 8, 6],
        vec![3, 7, 8, 10, 9],
    ];
    PlaneTriangulation::from_rotation(rotation, None).expect("icosahedron is valid")
}

/// Stacked triangulation: starting from K4, repeatedly subdivide the
/// lexicographically smallest face with a new vertex. Deterministic.
pub fn stacked(n: usize) -> PlaneTriangulation {
    assert!(n >= 4);
    let mut faces = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 1],
        vec![1, 3, 2],
    ];
    for v in 4..n {
        let pick = faces
            .iter()
            .enumerate()
            .min_by_key(|(_, f)| {
                let mut s = (*f).clone();
                s.sort_unstable();
                s
            })
            .map(|(i, _)| i)
            .expect("faces is nonempty");
        let f = faces.swap_remove(pick);
        let (a, b, c) = (f[0], f[1], f[2]);
        faces.push(vec![a, b, v]);
        faces.push(vec![b, c, v]);
        faces.push(vec![c, a, v]);
    }
    PlaneTriangulation::from_faces(n, &faces, None).expect("stacked triangulation is valid")
}

/// Insert a new vertex into the given face of a triangulation (the inverse of
/// deleting a degree-3 vertex). The face is named by its vertex set.
pub fn subdivide_face(
    t: &PlaneTriangulation,
    face: &[usize; 3],
) -> Result<PlaneTriangulation, GenerateError> {
    let idx = t
        .find_face(face)
        .ok_or(TriangulationError::OuterFaceMissing(*face))?;
    let v = t.n();
    let mut faces: Vec<Vec<usize>> = Vec::with_capacity(t.faces().len() + 2);
    for (i, f) in t.faces().iter().enumerate() {
        if i == idx {
            continue;
        }
        faces.push(f.to_vec());
    }
    let f = t.face_triple(idx);
    faces.push(vec![f[0], f[1], v]);
    faces.push(vec![f[1], f[2], v]);
    faces.push(vec![f[2], f[0], v]);
    let outer = if idx == t.outer_face() {
        None
    } else {
        Some(t.face_triple(t.outer_face()))
    };
    Ok(PlaneTriangulation::from_faces(t.n() + 1, &faces, outer)?)
}

/// Random walk in the flip graph of triangulations on `n` vertices, starting
/// from the stacked triangulation. Each step picks a uniform edge and flips
/// the diagonal of the surrounding quadrilateral; flips that would create a
/// parallel edge are rejected (and still consume a step). This is a corpus
/// utility, not a uniform sampler.
pub fn flip_walk(
    n: usize,
    steps: usize,
    seed: u64,
    require_four_connected: bool,
) -> Result<PlaneTriangulation, GenerateError> {
    if n < 4 {
        return Err(GenerateError::TooSmall(n, 4));
    }
    let mut rng = RandomSource::new(seed);
    let start = stacked(n);
    let mut faces: Vec<[usize; 3]> = start.faces().to_vec();

    let rebuild = |faces: &[[usize; 3]]| -> Result<PlaneTriangulation, TriangulationError> {
        let face_vecs: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
        PlaneTriangulation::from_faces(n, &face_vecs, None)
    };

    let do_step = |faces: &mut Vec<[usize; 3]>, rng: &mut RandomSource| {
        let mut edges: BTreeSet<Edge> = BTreeSet::new();
        for f in faces.iter() {
            for i in 0..3 {
                edges.insert(edge(f[i], f[(i + 1) % 3]));
            }
        }
        let list: Vec<Edge> = edges.iter().copied().collect();
        let (a, b) = list[rng.below(list.len() as u64) as usize];
        // the two faces at the edge, as directed walks (a,b,x) and (b,a,y)
        let mut fx = None;
        let mut fy = None;
        for (i, f) in faces.iter().enumerate() {
            for r in 0..3 {
                let (p, q, w) = (f[r], f[(r + 1) % 3], f[(r + 2) % 3]);
                if (p, q) == (a, b) {
                    fx = Some((i, w));
                } else if (p, q) == (b, a) {
                    fy = Some((i, w));
                }
            }
        }
        let ((i, x), (j, y)) = (fx.expect("edge on a face"), fy.expect("edge on a face"));
        if edges.contains(&edge(x, y)) {
            return; // flip would create a parallel edge
        }
        let (hi, lo) = (i.max(j), i.min(j));
        faces.swap_remove(hi);
        faces.swap_remove(lo);
        faces.push([x, a, y]);
        faces.push([y, b, x]);
    };

    for _ in 0..steps {
        do_step(&mut faces, &mut rng);
    }
    if require_four_connected {
        let mut extra = 0usize;
        loop {
            let t = rebuild(&faces)?;
            if t.is_four_connected() {
                return Ok(t);
            }
            if extra >= 20_000 {
                return Err(GenerateError::FourConnectedUnreachable);
            }
            do_step(&mut faces, &mut rng);
            extra += 1;
        }
    }
    Ok(rebuild(&faces)?)
}

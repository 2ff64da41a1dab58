//! Finite `{f, d}` surface graphs from quotients of van Dyck groups.
//!
//! The quotient group `𝒟 = D(d, f, 2) / ⟨⟨extra relators⟩⟩` is enumerated
//! as the coset table of the trivial subgroup, i.e. its regular action.
//! Vertices are the orbits of `⟨a⟩`, edges the orbits of `⟨ab⟩` and faces
//! the orbits of `⟨b⟩`; two cells are incident when their orbits share a
//! group element.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coset::{todd_coxeter, GroupPresentation, Letter, Word};
use crate::error::{Error, Result};
use crate::graph::{build_dual, DualPair, SurfaceGraph};

/// Builds the primal `{f, d}` graph and its `{d, f}` dual from the quotient
/// of `D(d, f, 2)` by `extra_relators`.
pub fn build_quotient_graph(
    d: usize,
    f: usize,
    extra_relators: &[Word],
    max_cosets: usize,
) -> Result<DualPair> {
    if d < 3 || f < 3 {
        return Err(Error::InvalidParameter(format!(
            "need d, f >= 3 (got d = {d}, f = {f})"
        )));
    }
    let mut presentation = GroupPresentation::van_dyck(d, f);
    presentation.relators.extend(extra_relators.iter().cloned());
    let table = todd_coxeter(&presentation, &[], max_cosets)?;
    let order = table.len();

    let a = Word(vec![Letter::A]);
    let b = Word(vec![Letter::B]);
    let ab = Word(vec![Letter::A, Letter::B]);
    let vertex_orbits = table.orbits(&a);
    let edge_orbits = table.orbits(&ab);
    let face_orbits = table.orbits(&b);
    // ⟨a⟩, ⟨ab⟩, ⟨b⟩ must keep their full orders d, 2, f in the quotient.
    for (name, orbits, size) in [
        ("a", &vertex_orbits, d),
        ("ab", &edge_orbits, 2),
        ("b", &face_orbits, f),
    ] {
        if orbits.iter().any(|o| o.len() != size) {
            return Err(Error::DegenerateQuotient(format!(
                "<{name}> does not have order {size} in a group of order {order}"
            )));
        }
    }

    let label = |orbits: &[Vec<usize>]| {
        let mut id = vec![0usize; order];
        for (i, o) in orbits.iter().enumerate() {
            for &g in o {
                id[g] = i;
            }
        }
        id
    };
    let vertex_of = label(&vertex_orbits);
    let edge_of = label(&edge_orbits);

    let mut edges = Vec::with_capacity(edge_orbits.len());
    let mut seen = BTreeSet::new();
    for (e, o) in edge_orbits.iter().enumerate() {
        let (u, v) = (vertex_of[o[0]], vertex_of[o[1]]);
        if u == v {
            return Err(Error::DegenerateQuotient(format!("edge {e} is a loop")));
        }
        let key = if u < v { [u, v] } else { [v, u] };
        if !seen.insert(key) {
            return Err(Error::DegenerateQuotient(format!(
                "edge {e} is a repeated edge"
            )));
        }
        edges.push(key);
    }
    // Along the orbit g, g·b, g·b², ... consecutive edges share a vertex, so
    // this order is the boundary walk.
    let faces: Vec<Vec<usize>> = face_orbits
        .iter()
        .map(|o| o.iter().map(|&g| edge_of[g]).collect())
        .collect();
    for (fi, face) in faces.iter().enumerate() {
        let distinct: BTreeSet<_> = face.iter().collect();
        if distinct.len() != face.len() {
            return Err(Error::DegenerateQuotient(format!(
                "face {fi} meets an edge twice"
            )));
        }
    }

    let primal = SurfaceGraph::from_parts(Some((f, d)), vertex_orbits.len(), edges, faces);
    build_dual(&primal).map_err(|e| Error::DegenerateQuotient(format!("{e}")))
}

/// Pseudo-random relator: a word of uniform length in
/// `[length_min, length_max]` whose letters are `a` or `b`, each with
/// probability one half, drawn from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn random_relator(seed: u64, length_min: usize, length_max: usize) -> Result<Word> {
    if length_min == 0 || length_min > length_max {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= length_min <= length_max (got {length_min}, {length_max})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(length_min..=length_max);
    Ok(Word(
        (0..len)
            .map(|_| {
                if rng.random_bool(0.5) {
                    Letter::A
                } else {
                    Letter::B
                }
            })
            .collect(),
    ))
}

/// A generated quotient graph with the data needed to rebuild it.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub pair: DualPair,
    pub relator: Word,
    /// Seed passed to [`random_relator`].
    pub relator_seed: u64,
}

impl FamilyMember {
    pub fn num_edges(&self) -> usize {
        self.pair.primal().num_edges()
    }
}

/// Relator-search settings for [`generate_family`].
#[derive(Clone, Debug)]
pub struct FamilySearch {
    pub length_min: usize,
    pub length_max: usize,
    pub max_cosets: usize,
    /// Number of relators tried.
    pub attempts: usize,
    /// Accept a graph for target `t` when `|n - t| <= tolerance * t`.
    pub tolerance: f64,
}

impl Default for FamilySearch {
    fn default() -> Self {
        FamilySearch {
            length_min: 8,
            length_max: 20,
            max_cosets: 10_000_000,
            attempts: 200,
            tolerance: 0.5,
        }
    }
}

/// Result of a family search: the member kept for each target (shared
/// members appear once) and targets left unmatched.
#[derive(Clone, Debug, Default)]
pub struct FamilyReport {
    pub members: Vec<FamilyMember>,
    pub missing: Vec<usize>,
}

/// Seed of the `attempt`-th relator of a family search.
pub fn attempt_seed(seed: u64, attempt: u64) -> u64 {
    // splitmix64 step
    let mut z = seed.wrapping_add(attempt.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tries one relator of a family search; `Ok(None)` for rejected quotients.
pub fn try_attempt(
    d: usize,
    f: usize,
    seed: u64,
    attempt: u64,
    search: &FamilySearch,
) -> Result<Option<FamilyMember>> {
    let relator_seed = attempt_seed(seed, attempt);
    let relator = random_relator(relator_seed, search.length_min, search.length_max)?;
    match build_quotient_graph(d, f, core::slice::from_ref(&relator), search.max_cosets) {
        Ok(pair) => Ok(Some(FamilyMember {
            pair,
            relator,
            relator_seed,
        })),
        Err(Error::CapacityExceeded { .. }) | Err(Error::DegenerateQuotient(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Searches random relators and keeps, for each target edge count, the
/// quotient whose size is nearest to it.
pub fn generate_family(
    d: usize,
    f: usize,
    seed: u64,
    targets: &[usize],
    search: &FamilySearch,
) -> Result<FamilyReport> {
    let found: Vec<FamilyMember> = (0..search.attempts as u64)
        .map(|i| try_attempt(d, f, seed, i, search))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(select_for_targets(found, targets, search.tolerance))
}

/// Picks the nearest candidate for every target (first found wins ties).
pub fn select_for_targets(
    found: Vec<FamilyMember>,
    targets: &[usize],
    tolerance: f64,
) -> FamilyReport {
    let mut chosen: Vec<usize> = Vec::new();
    let mut missing = Vec::new();
    for &t in targets {
        let best = found
            .iter()
            .enumerate()
            .filter(|(_, m)| (m.num_edges() as f64 - t as f64).abs() <= tolerance * t as f64)
            .min_by_key(|(i, m)| (m.num_edges().abs_diff(t), *i))
            .map(|(i, _)| i);
        match best {
            Some(i) if !chosen.contains(&i) => chosen.push(i),
            Some(_) => {}
            None => missing.push(t),
        }
    }
    chosen.sort_unstable();
    let members = chosen.into_iter().map(|i| found[i].clone()).collect();
    FamilyReport { members, missing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::incidence_matrices;
    use crate::homology::homology_rank;

    #[test]
    fn tetrahedron() {
        let pair = build_quotient_graph(3, 3, &[], 10_000).unwrap();
        let g = pair.primal();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (4, 6, 4));
        assert_eq!(homology_rank(&incidence_matrices(g)), 0);
        assert!(g.validate().is_empty());
        let dual = pair.dual();
        assert_eq!(
            (dual.num_vertices(), dual.num_edges(), dual.num_faces()),
            (4, 6, 4)
        );
    }

    #[test]
    fn cube_and_octahedron() {
        // three squares at each vertex: the cube
        let cube = build_quotient_graph(3, 4, &[], 10_000).unwrap();
        let g = cube.primal();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (8, 12, 6));
        assert_eq!(homology_rank(&incidence_matrices(g)), 0);
        // four triangles at each vertex: the octahedron, dual to the cube
        let octa = build_quotient_graph(4, 3, &[], 10_000).unwrap();
        let g = octa.primal();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (6, 12, 8));
        assert_eq!(octa.dual().schlafli(), Some((4, 3)));
    }

    #[test]
    fn relator_determinism_and_range() {
        assert_eq!(
            random_relator(7, 8, 20).unwrap(),
            random_relator(7, 8, 20).unwrap()
        );
        for seed in 1..=100 {
            let w = random_relator(seed, 8, 20).unwrap();
            assert!((8..=20).contains(&w.len()));
            assert!(w
                .letters()
                .iter()
                .all(|l| matches!(l, Letter::A | Letter::B)));
        }
        assert!(random_relator(1, 0, 3).is_err());
        assert!(random_relator(1, 5, 3).is_err());
    }

    #[test]
    fn degenerate_quotient_is_rejected() {
        // a = 1 kills ⟨a⟩
        let err = build_quotient_graph(3, 3, &["a".parse().unwrap()], 1000).unwrap_err();
        assert!(matches!(err, Error::DegenerateQuotient(_)));
    }

    #[test]
    fn target_selection() {
        let base = build_quotient_graph(3, 3, &[], 100).unwrap();
        let m = FamilyMember {
            pair: base,
            relator: Word::default(),
            relator_seed: 0,
        };
        let report = select_for_targets(vec![m], &[6, 7, 1000], 0.5);
        assert_eq!(report.members.len(), 1);
        assert_eq!(report.missing, vec![1000]);
    }
}

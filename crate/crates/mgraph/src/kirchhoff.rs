//! Brute-force spanning-tree counting through the matrix-tree theorem.
//!
//! The number of spanning trees of a connected graph equals any cofactor
//! of its Laplacian `L = D - A`. This module evaluates that cofactor as
//! an exact integer determinant (fraction-free Bareiss elimination), so it
//! serves as an oracle that is independent of the recurrences in
//! [`crate::count`].
//!
//! Separating two-tree forests are counted through the identification
//! bijection: spanning trees of the multigraph obtained by merging `u`
//! and `v` correspond exactly to spanning two-tree forests separating `u`
//! from `v`. Parallel edges produced by the merge keep their multiplicity
//! in the Laplacian; self-loops are discarded.
//!
//! For larger levels a mod-p variant runs the same cofactor computation
//! over a prime field. The elimination there follows a minimum-degree
//! order: the family is outerplanar, so some vertex of the partially
//! eliminated matrix always has at most two off-diagonal entries and the
//! fill-in stays linear. A dense elimination backstops the rare case of a
//! vanishing diagonal pivot mod p.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{MGraph, VertexId};

/// Default level cap for exact bigint determinants (256 vertices at t=7).
pub const DEFAULT_MAX_EXACT_T: u32 = 7;
/// Default level cap for the mod-p determinant (2048 vertices at t=10).
pub const DEFAULT_MAX_MOD_T: u32 = 10;

fn env_limit(default: u32) -> u32 {
    match std::env::var("MGRAPH_MAX_T") {
        Ok(v) => v.parse().unwrap_or(default),
        Err(_) => default,
    }
}

/// Level cap for [`count_trees`]; `MGRAPH_MAX_T` overrides.
pub fn max_exact_t() -> u32 {
    env_limit(DEFAULT_MAX_EXACT_T)
}

/// Level cap for [`count_trees_mod`]; `MGRAPH_MAX_T` overrides.
pub fn max_mod_t() -> u32 {
    env_limit(DEFAULT_MAX_MOD_T)
}

/// Dense square matrix of arbitrary-precision integers.
#[derive(Debug, Clone)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    /// Laplacian `D - A` of a simple graph.
    pub fn laplacian(g: &MGraph) -> IntMatrix {
        let n = g.vertex_count();
        let mut m = IntMatrix::zeros(n);
        for v in 0..n as u32 {
            m.set(v as usize, v as usize, BigInt::from(g.degree(v)));
            for &w in g.neighbors(v) {
                m.set(v as usize, w as usize, BigInt::from(-1));
            }
        }
        m
    }

    /// Laplacian of a multigraph given as an edge list; parallel edges
    /// accumulate multiplicity and self-loops are ignored.
    pub fn laplacian_from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> IntMatrix {
        let mut m = IntMatrix::zeros(n);
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            let (u, v) = (u as usize, v as usize);
            let e: BigInt = m.get(u, v) - 1u32;
            m.set(u, v, e.clone());
            m.set(v, u, e);
            let du: BigInt = m.get(u, u) + 1u32;
            m.set(u, u, du);
            let dv: BigInt = m.get(v, v) + 1u32;
            m.set(v, v, dv);
        }
        m
    }

    /// Copy with row and column `k` removed.
    pub fn minor_without(&self, k: usize) -> IntMatrix {
        assert!(k < self.n);
        let n = self.n - 1;
        let mut out = IntMatrix::zeros(n);
        for i in 0..self.n {
            if i == k {
                continue;
            }
            for j in 0..self.n {
                if j == k {
                    continue;
                }
                let (ti, tj) = (i - (i > k) as usize, j - (j > k) as usize);
                out.set(ti, tj, self.get(i, j).clone());
            }
        }
        out
    }
}

/// Exact determinant by fraction-free Bareiss elimination.
///
/// Each step divides by the previous pivot; the division is exact because
/// every intermediate entry is a minor of the input. Pivoting takes the
/// first nonzero entry in column order, so the result is deterministic.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.n;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.entries.clone();
    let mut negate = false;
    let mut prev = BigInt::one();

    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                Some(i) => {
                    for j in 0..n {
                        a.swap(k * n + j, i * n + j);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = a[k * n + k].clone();
    }

    let det = a.pop().expect("n >= 1");
    if negate {
        -det
    } else {
        det
    }
}

fn cofactor_count(lap: &IntMatrix, delete: usize) -> Result<BigUint> {
    let det = determinant(&lap.minor_without(delete));
    if det.is_zero() {
        return Err(Error::Disconnected);
    }
    debug_assert!(det.is_positive(), "Laplacian cofactor is nonnegative");
    Ok(det.magnitude().clone())
}

/// Spanning trees of an explicit graph: the Laplacian cofactor at vertex 0.
pub fn count_trees(g: &MGraph) -> Result<BigUint> {
    count_trees_deleting(g, 0)
}

/// Same count with a caller-chosen deleted row/column; the matrix-tree
/// theorem makes the choice irrelevant, which tests exploit.
pub fn count_trees_deleting(g: &MGraph, delete: VertexId) -> Result<BigUint> {
    if (delete as usize) >= g.vertex_count() {
        return Err(Error::VertexOutOfRange(delete));
    }
    cofactor_count(&IntMatrix::laplacian(g), delete as usize)
}

/// Spanning trees of the multigraph given by an edge list on `n` vertices.
pub fn count_trees_from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<BigUint> {
    if n <= 1 {
        return Ok(BigUint::one());
    }
    cofactor_count(&IntMatrix::laplacian_from_edges(n, edges), 0)
}

/// Spanning two-tree forests of `g` separating `u` from `v`, counted via
/// the identification bijection: merge `v` into `u` (keeping edge
/// multiplicities, dropping the resulting self-loops) and count spanning
/// trees of the merged multigraph.
pub fn count_separating_two_forests(g: &MGraph, u: VertexId, v: VertexId) -> Result<BigUint> {
    if u == v {
        return Err(Error::IdenticalVertices(u));
    }
    let n = g.vertex_count() as u32;
    if u >= n || v >= n {
        return Err(Error::VertexOutOfRange(u.max(v)));
    }
    let relabel = |w: VertexId| -> VertexId {
        if w == v {
            u
        } else if w > v {
            w - 1
        } else {
            w
        }
    };
    let merged: Vec<(VertexId, VertexId)> =
        g.edges().map(|(a, b)| (relabel(a), relabel(b))).collect();
    count_trees_from_edges(n as usize - 1, &merged)
}

// ---------------------------------------------------------------------------
// Mod-p arithmetic
// ---------------------------------------------------------------------------

/// Prime field with Barrett reduction; moduli up to 2^31.
#[derive(Debug, Clone, Copy)]
struct PrimeField {
    p: u64,
    mu: u64, // floor(2^62 / p)
}

impl PrimeField {
    fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 31), "modulus must be in [2, 2^31)");
        PrimeField { p, mu: (1u64 << 62) / p }
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        // x < 2^62; quotient estimate is off by at most 2
        let q = ((x as u128 * self.mu as u128) >> 62) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Laplacian cofactor of `g` over GF(p): equals `s(t) mod p`.
///
/// `p` must be an odd prime below 2^31 (the CLI validates; a debug build
/// asserts). A residue of zero is a valid output.
pub fn count_trees_mod(g: &MGraph, p: u64) -> u64 {
    debug_assert!(is_prime_u64(p), "modulus {p} must be prime");
    let fp = PrimeField::new(p);
    det_mod_min_degree(g, fp, 0).unwrap_or_else(|| det_mod_dense(g, fp, 0))
}

/// Minimum-degree symmetric elimination of the Laplacian minor.
///
/// Returns `None` if a diagonal pivot vanishes mod p, which the dense
/// fallback then handles. The determinant is the product of the pivots;
/// the symmetric row/column order contributes no sign.
fn det_mod_min_degree(g: &MGraph, fp: PrimeField, skip: VertexId) -> Option<u64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = g.vertex_count();
    let mut diag = vec![0u64; n];
    let mut rows: Vec<HashMap<u32, u64>> = vec![HashMap::new(); n];
    for v in 0..n as u32 {
        if v == skip {
            continue;
        }
        diag[v as usize] = g.degree(v) as u64 % fp.p;
        for &w in g.neighbors(v) {
            if w != skip {
                rows[v as usize].insert(w, fp.p - 1);
            }
        }
    }

    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (0..n as u32)
        .filter(|&v| v != skip)
        .map(|v| Reverse((rows[v as usize].len(), v)))
        .collect();
    let mut alive = vec![true; n];
    alive[skip as usize] = false;

    let mut det = 1u64;
    for _ in 0..n - 1 {
        // Lazy heap: stale entries carry an outdated degree.
        let v = loop {
            let Reverse((deg, v)) = heap.pop()?;
            if alive[v as usize] && rows[v as usize].len() == deg {
                break v;
            }
        };
        let pivot = diag[v as usize];
        if pivot == 0 {
            return None;
        }
        det = fp.mul(det, pivot);
        alive[v as usize] = false;

        let nbrs: Vec<(u32, u64)> = rows[v as usize].drain().collect();
        for &(x, _) in &nbrs {
            rows[x as usize].remove(&v);
        }
        let inv = fp.inv(pivot);
        for i in 0..nbrs.len() {
            let (x, cx) = nbrs[i];
            let f = fp.mul(cx, inv);
            diag[x as usize] = fp.sub(diag[x as usize], fp.mul(f, cx));
            for &(y, cy) in &nbrs[i + 1..] {
                let delta = fp.mul(f, cy);
                for (a, b) in [(x, y), (y, x)] {
                    let entry = rows[a as usize].entry(b).or_insert(0);
                    *entry = fp.sub(*entry, delta);
                    if *entry == 0 {
                        rows[a as usize].remove(&b);
                    }
                }
            }
        }
        for &(x, _) in &nbrs {
            heap.push(Reverse((rows[x as usize].len(), x)));
        }
    }
    Some(det)
}

/// Dense Gaussian elimination over GF(p) with row pivoting.
fn det_mod_dense(g: &MGraph, fp: PrimeField, skip: VertexId) -> u64 {
    let n = g.vertex_count();
    let m = n - 1;
    let mut a = vec![0u64; m * m];
    let idx = |v: u32| -> usize { (v - (v > skip) as u32) as usize };
    for v in 0..n as u32 {
        if v == skip {
            continue;
        }
        a[idx(v) * m + idx(v)] = g.degree(v) as u64 % fp.p;
        for &w in g.neighbors(v) {
            if w != skip {
                a[idx(v) * m + idx(w)] = fp.p - 1;
            }
        }
    }

    let mut det = 1u64;
    let mut negate = false;
    for k in 0..m {
        let Some(piv_row) = (k..m).find(|&i| a[i * m + k] != 0) else {
            return 0;
        };
        if piv_row != k {
            for j in 0..m {
                a.swap(k * m + j, piv_row * m + j);
            }
            negate = !negate;
        }
        let pivot = a[k * m + k];
        det = fp.mul(det, pivot);
        let inv = fp.inv(pivot);
        for i in k + 1..m {
            let lead = a[i * m + k];
            if lead == 0 {
                continue;
            }
            let f = fp.mul(lead, inv);
            for j in k..m {
                let sub = fp.mul(f, a[k * m + j]);
                a[i * m + j] = fp.sub(a[i * m + j], sub);
            }
        }
    }
    if negate && det != 0 {
        det = fp.p - det;
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{separating_forest_count, spanning_tree_count, spanning_tree_count_mod};
    use proptest::prelude::*;

    #[test]
    fn laplacian_of_an_edge() {
        let g = MGraph::build(0).unwrap();
        let lap = IntMatrix::laplacian(&g);
        let expect = [(0, 0, 1), (0, 1, -1), (1, 0, -1), (1, 1, 1)];
        for (i, j, v) in expect {
            assert_eq!(lap.get(i, j), &BigInt::from(v));
        }
        assert!(determinant(&lap).is_zero(), "Laplacian is singular");
    }

    #[test]
    fn laplacian_structure() {
        for t in [1u32, 3, 5] {
            let g = MGraph::build(t).unwrap();
            let lap = IntMatrix::laplacian(&g);
            let n = lap.n();
            for i in 0..n {
                let row_sum: BigInt = (0..n).map(|j| lap.get(i, j).clone()).sum();
                assert!(row_sum.is_zero(), "row {i} sums to zero");
                for j in 0..n {
                    assert_eq!(lap.get(i, j), lap.get(j, i), "symmetric");
                    if i != j {
                        assert!(*lap.get(i, j) == BigInt::zero() || *lap.get(i, j) == BigInt::from(-1));
                    }
                }
            }
        }
        let g1 = MGraph::build(1).unwrap();
        let lap1 = IntMatrix::laplacian(&g1);
        for i in 0..4 {
            assert_eq!(lap1.get(i, i), &BigInt::from(2), "4-cycle degrees");
        }
    }

    #[test]
    fn tiny_determinants() {
        let mut one = IntMatrix::zeros(1);
        one.set(0, 0, BigInt::from(7));
        assert_eq!(determinant(&one), BigInt::from(7));
        assert_eq!(determinant(&IntMatrix::zeros(0)), BigInt::one());

        // needs a row swap: [[0, 1], [1, 0]] has determinant -1
        let mut m = IntMatrix::zeros(2);
        m.set(0, 1, BigInt::one());
        m.set(1, 0, BigInt::one());
        assert_eq!(determinant(&m), BigInt::from(-1));
    }

    #[test]
    fn known_small_graphs() {
        // complete graph on 4 vertices: 4^2 = 16 spanning trees
        let k4: Vec<(u32, u32)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(count_trees_from_edges(4, &k4).unwrap(), BigUint::from(16u32));
        // the 4-cycle has 4
        let c4 = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        assert_eq!(count_trees_from_edges(4, &c4).unwrap(), BigUint::from(4u32));
        // a single vertex has exactly one (empty) spanning tree
        assert_eq!(count_trees_from_edges(1, &[]).unwrap(), BigUint::one());
    }

    #[test]
    fn matches_recurrence_up_to_five() {
        for t in 0..=5u32 {
            let g = MGraph::build(t).unwrap();
            assert_eq!(count_trees(&g).unwrap(), spanning_tree_count(t), "s({t})");
        }
    }

    #[test]
    fn reduced_laplacian_of_four_cycle() {
        let g = MGraph::build(1).unwrap();
        let det = determinant(&IntMatrix::laplacian(&g).minor_without(0));
        assert_eq!(det, BigInt::from(4));
    }

    #[test]
    fn deletion_choice_is_irrelevant() {
        let g = MGraph::build(3).unwrap();
        let reference = count_trees(&g).unwrap();
        for delete in [1u32, 5, 9, 15] {
            assert_eq!(count_trees_deleting(&g, delete).unwrap(), reference);
        }
        assert!(matches!(
            count_trees_deleting(&g, 200),
            Err(Error::VertexOutOfRange(200))
        ));
    }

    #[test]
    fn disconnected_graph_reported() {
        let mut g = MGraph::build(1).unwrap();
        // dropping opposite edges of the 4-cycle leaves two disjoint edges
        g.remove_edge(0, 1);
        g.remove_edge(2, 3);
        assert!(matches!(count_trees(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn separating_forest_oracle_matches_formula() {
        for t in 0..=4u32 {
            let g = MGraph::build(t).unwrap();
            let (u, v) = g.hub_pair();
            assert_eq!(
                count_separating_two_forests(&g, u, v).unwrap(),
                separating_forest_count(t),
                "g({t})"
            );
        }
    }

    #[test]
    fn separating_forests_on_the_four_cycle() {
        // every adjacent pair of the 4-cycle is separated by exactly 3
        // two-edge forests
        let g = MGraph::build(1).unwrap();
        for (u, v) in [(0u32, 1u32), (0, 2), (1, 3), (2, 3)] {
            assert_eq!(
                count_separating_two_forests(&g, u, v).unwrap(),
                BigUint::from(3u32)
            );
        }
        assert!(matches!(
            count_separating_two_forests(&g, 2, 2),
            Err(Error::IdenticalVertices(2))
        ));
    }

    #[test]
    fn deletion_contraction_identity() {
        // s(G) = s(G - e) + s(G / e) for every edge, exercising the
        // multigraph Laplacian with real multiplicities.
        for t in [1u32, 2] {
            let g = MGraph::build(t).unwrap();
            let n = g.vertex_count();
            let edges: Vec<_> = g.edges().collect();
            let total = count_trees(&g).unwrap();
            for &(u, v) in &edges {
                let without: Vec<_> =
                    edges.iter().copied().filter(|&e| e != (u, v)).collect();
                let deleted = count_trees_from_edges(n, &without)
                    .unwrap_or_else(|_| BigUint::zero());
                let relabel = |w: u32| if w == v { u } else if w > v { w - 1 } else { w };
                let contracted_edges: Vec<_> = without
                    .iter()
                    .map(|&(a, b)| (relabel(a), relabel(b)))
                    .collect();
                let contracted = count_trees_from_edges(n - 1, &contracted_edges).unwrap();
                assert_eq!(deleted + contracted, total, "edge ({u},{v}) at t={t}");
            }
        }
    }

    #[test]
    fn modular_count_matches_recurrence() {
        for p in [999999937u64, 1000000007, 1000000033] {
            for t in 0..=6u32 {
                let g = MGraph::build(t).unwrap();
                assert_eq!(count_trees_mod(&g, p), spanning_tree_count_mod(t, p), "t={t}, p={p}");
            }
        }
    }

    #[test]
    fn modular_count_small_prime_examples() {
        let g1 = MGraph::build(1).unwrap();
        assert_eq!(count_trees_mod(&g1, 101), 4);
        let g2 = MGraph::build(2).unwrap();
        assert_eq!(count_trees_mod(&g2, 7), 0, "56 = 0 mod 7");
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let fp = PrimeField::new(1000000007);
        for t in 0..=5u32 {
            let g = MGraph::build(t).unwrap();
            assert_eq!(
                det_mod_min_degree(&g, fp, 0).expect("pivots nonzero"),
                det_mod_dense(&g, fp, 0),
                "t={t}"
            );
        }
    }

    #[test]
    fn primality_checker() {
        for p in [2u64, 3, 101, 999999937, 1000000007, 1000000033] {
            assert!(is_prime_u64(p), "{p} is prime");
        }
        for c in [0u64, 1, 4, 100, 1000000008, 999999938, 3 * 1000000007] {
            assert!(!is_prime_u64(c), "{c} is composite");
        }
    }

    proptest! {
        // Bareiss against naive cofactor expansion on small random matrices.
        #[test]
        fn bareiss_matches_cofactor_expansion(
            entries in proptest::collection::vec(-9i64..=9, 16),
            n in 1usize..=4,
        ) {
            let mut m = IntMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, BigInt::from(entries[i * 4 + j]));
                }
            }
            prop_assert_eq!(determinant(&m), naive_det(&m));
        }

        // Exact and mod-p determinants agree on Laplacian minors.
        #[test]
        fn exact_reduces_to_modular(t in 0u32..=4) {
            let g = MGraph::build(t).unwrap();
            let exact = count_trees(&g).unwrap();
            for p in [999999937u64, 101, 7, 3] {
                prop_assert_eq!(
                    count_trees_mod(&g, p),
                    (exact.clone() % BigUint::from(p)).to_string().parse::<u64>().unwrap()
                );
            }
        }
    }

    fn naive_det(m: &IntMatrix) -> BigInt {
        fn go(a: &IntMatrix) -> BigInt {
            let n = a.n();
            if n == 0 {
                return BigInt::one();
            }
            if n == 1 {
                return a.get(0, 0).clone();
            }
            let mut acc = BigInt::zero();
            for j in 0..n {
                let mut sub = IntMatrix::zeros(n - 1);
                for i in 1..n {
                    let mut cj = 0;
                    for jj in 0..n {
                        if jj == j {
                            continue;
                        }
                        sub.set(i - 1, cj, a.get(i, jj).clone());
                        cj += 1;
                    }
                }
                let term = a.get(0, j) * go(&sub);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        go(m)
    }
}

//! Structural measurements of M(t): degree law, clustering, distances,
//! degree correlation, and the outerplanarity certificate.
//!
//! Everything that can be checked exactly is checked exactly: the
//! cumulative degree law is an integer identity, distances come from
//! all-pairs BFS with a rational average, and assortativity is formed
//! from integer stub sums before a single final float conversion.
//!
//! Outerplanarity is certified constructively from the boundary order the
//! builder maintains: the boundary must be a Hamiltonian cycle of the
//! graph and every remaining edge a chord whose circular intervals nest
//! without interleaving. A failed certificate means the boundary is
//! defective, not that the graph is non-outerplanar.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use serde::Serialize;

use crate::count;
use crate::error::{Error, Result};
use crate::graph::{MGraph, VertexId};

/// Roots are subsampled for the average distance above this many vertices
/// (exact BFS from every root below it).
const EXACT_BFS_VERTEX_LIMIT: usize = 1 << 13;

/// Structural metrics of one level, serializable as JSON or CSV.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub t: u32,
    pub degree_histogram: BTreeMap<u32, u64>,
    pub cumulative_law_ok: bool,
    pub triangle_count: u64,
    pub diameter: u32,
    pub avg_distance: f64,
    /// True when BFS roots were subsampled; `avg_distance` is then an
    /// estimate and `diameter` a lower bound.
    pub avg_distance_estimated: bool,
    /// `None` when every degree is equal (t <= 1) and the correlation is
    /// undefined.
    pub assortativity_r: Option<f64>,
    pub outerplanar_certified: bool,
    pub entropy_h_t: f64,
}

/// Exact degree histogram (degree -> vertex count).
pub fn degree_histogram(g: &MGraph) -> BTreeMap<u32, u64> {
    let mut hist = BTreeMap::new();
    for v in 0..g.vertex_count() as u32 {
        *hist.entry(g.degree(v) as u32).or_insert(0) += 1;
    }
    hist
}

/// Checks the exact cumulative degree law: for every k in [2, t+1] the
/// number of vertices with degree >= k times 2^(k-2) equals |V|.
pub fn degree_law_check(g: &MGraph) -> (bool, BTreeMap<u32, u64>) {
    let hist = degree_histogram(g);
    let n = g.vertex_count() as u64;
    let ok = (2..=g.t() + 1).all(|k| {
        let at_least: u64 = hist.iter().filter(|(&d, _)| d >= k).map(|(_, &c)| c).sum();
        at_least.checked_shl(k - 2) == Some(n)
    });
    (ok, hist)
}

/// Exact number of triangles (each counted once).
pub fn triangle_count(g: &MGraph) -> u64 {
    let mut total = 0u64;
    for (u, v) in g.edges() {
        // sorted-list intersection of the two neighborhoods
        let (mut a, mut b) = (g.neighbors(u), g.neighbors(v));
        while let (Some(&x), Some(&y)) = (a.first(), b.first()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => a = &a[1..],
                std::cmp::Ordering::Greater => b = &b[1..],
                std::cmp::Ordering::Equal => {
                    total += 1;
                    a = &a[1..];
                    b = &b[1..];
                }
            }
        }
    }
    total / 3
}

fn bfs_from(g: &MGraph, root: VertexId, dist: &mut [u32]) -> (u32, u64) {
    dist.fill(u32::MAX);
    dist[root as usize] = 0;
    let mut queue = VecDeque::from([root]);
    let mut ecc = 0u32;
    let mut sum = 0u64;
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize];
        ecc = d;
        sum += d as u64;
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }
    (ecc, sum)
}

/// Exact diameter and average distance over unordered distinct pairs,
/// from a BFS rooted at every vertex.
pub fn distances(g: &MGraph) -> (u32, BigRational) {
    let n = g.vertex_count();
    let mut dist = vec![u32::MAX; n];
    let mut diameter = 0u32;
    let mut total = 0u128;
    for root in 0..n as u32 {
        let (ecc, sum) = bfs_from(g, root, &mut dist);
        diameter = diameter.max(ecc);
        total += sum as u128;
    }
    // every unordered pair was counted twice
    let avg = BigRational::new(
        BigInt::from(total),
        BigInt::from(n as u128 * (n as u128 - 1)),
    );
    (diameter, avg)
}

/// Distance metrics with deterministic root subsampling above
/// [`EXACT_BFS_VERTEX_LIMIT`] vertices. Returns
/// `(diameter, avg, estimated)`; when `estimated` is true the diameter is
/// only a lower bound.
pub fn distances_auto(g: &MGraph) -> (u32, BigRational, bool) {
    let n = g.vertex_count();
    if n <= EXACT_BFS_VERTEX_LIMIT {
        let (d, avg) = distances(g);
        return (d, avg, false);
    }
    let stride = n / 1024;
    let mut dist = vec![u32::MAX; n];
    let mut diameter = 0u32;
    let mut total = 0u128;
    let mut roots = 0u128;
    for root in (0..n as u32).step_by(stride) {
        let (ecc, sum) = bfs_from(g, root, &mut dist);
        diameter = diameter.max(ecc);
        total += sum as u128;
        roots += 1;
    }
    let avg = BigRational::new(BigInt::from(total), BigInt::from(roots * (n as u128 - 1)));
    (diameter, avg, true)
}

/// Degree assortativity: the Pearson correlation of endpoint degrees over
/// directed edge stubs (each edge contributes both orientations). Built
/// from exact integer sums; errors when the degree variance is zero.
pub fn assortativity(g: &MGraph) -> Result<f64> {
    let two_m = 2 * g.edge_count() as i128;
    let mut sum_prod = 0i128; // sum over directed stubs of d(u) d(v)
    let mut sum_sq = 0i128; // sum of d^2 over vertices = stub mean numerator
    let mut sum_cube = 0i128;
    for (u, v) in g.edges() {
        sum_prod += 2 * (g.degree(u) * g.degree(v)) as i128;
    }
    for v in 0..g.vertex_count() as u32 {
        let d = g.degree(v) as i128;
        sum_sq += d * d;
        sum_cube += d * d * d;
    }
    // r = (E[xy] - E[x]^2) / (E[x^2] - E[x]^2) with all means over stubs
    let num = sum_prod * two_m - sum_sq * sum_sq;
    let den = sum_cube * two_m - sum_sq * sum_sq;
    if den == 0 {
        return Err(Error::DegenerateDegrees(g.t()));
    }
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    Ok(r.to_f64().unwrap_or(f64::NAN))
}

/// Certifies outerplanarity of `g` with respect to its stored boundary.
pub fn certify_outerplanar(g: &MGraph) -> bool {
    certify_boundary(g, g.boundary())
}

/// Certifies a circular vertex order as an outerplanar embedding witness:
/// the order must be a permutation, consecutive vertices must be adjacent
/// (for t >= 1 the boundary is a Hamiltonian cycle), and no two chords
/// may interleave. A `false` result indicts the boundary, not the graph.
pub fn certify_boundary(g: &MGraph, boundary: &[VertexId]) -> bool {
    let n = g.vertex_count();
    if boundary.len() != n {
        return false;
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in boundary.iter().enumerate() {
        if (v as usize) >= n || position[v as usize] != usize::MAX {
            return false;
        }
        position[v as usize] = i;
    }
    if n == 2 {
        return g.has_edge(boundary[0], boundary[1]);
    }
    for i in 0..n {
        if !g.has_edge(boundary[i], boundary[(i + 1) % n]) {
            return false;
        }
    }

    // Chords as position intervals; sorted sweep verifies nesting.
    let mut chords: Vec<(usize, usize)> = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (position[u as usize], position[v as usize]);
        let (lo, hi) = (a.min(b), a.max(b));
        let consecutive = hi - lo == 1 || (lo == 0 && hi == n - 1);
        if !consecutive {
            chords.push((lo, hi));
        }
    }
    chords.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut open: Vec<(usize, usize)> = Vec::new();
    for &(lo, hi) in &chords {
        while let Some(&(_, h)) = open.last() {
            if h <= lo {
                open.pop();
            } else {
                break;
            }
        }
        if let Some(&(l, h)) = open.last() {
            if l < lo && h < hi {
                return false; // interleaving chords
            }
        }
        open.push((lo, hi));
    }
    true
}

/// One row of the entropy comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyRow {
    pub family: &'static str,
    pub entropy: f64,
    pub source: &'static str,
}

/// Spanning-tree entropies of reference families with average degree 3,
/// alongside the computed limit for M(t). The literature values are
/// display constants, not computed here.
pub fn entropy_table() -> Vec<EntropyRow> {
    vec![
        EntropyRow { family: "honeycomb", entropy: 0.807, source: "Wu (1977)" },
        EntropyRow { family: "4-8-8", entropy: 0.787, source: "Shrock & Wu (2000)" },
        EntropyRow { family: "3-12-12", entropy: 0.721, source: "Shrock & Wu (2000)" },
        EntropyRow { family: "Hanoi", entropy: 0.677, source: "Zhang et al. (2012)" },
        EntropyRow {
            family: "M(t)",
            entropy: count::entropy_limit_f64(),
            source: "computed (partial sum at t=40)",
        },
    ]
}

/// Runs every measurement on one graph.
pub fn analyze(g: &MGraph) -> AnalysisReport {
    let (cumulative_law_ok, degree_histogram) = degree_law_check(g);
    let (diameter, avg, estimated) = distances_auto(g);
    let entropy_h_t = if g.t() == 0 {
        0.0 // ln s(0) / |V_0| = 0
    } else {
        count::entropy(g.t(), 15).expect("t >= 1").h_f64()
    };
    AnalysisReport {
        t: g.t(),
        degree_histogram,
        cumulative_law_ok,
        triangle_count: triangle_count(g),
        diameter,
        avg_distance: avg.to_f64().unwrap_or(f64::NAN),
        avg_distance_estimated: estimated,
        assortativity_r: assortativity(g).ok(),
        outerplanar_certified: certify_outerplanar(g),
        entropy_h_t,
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let hist = self
            .degree_histogram
            .iter()
            .map(|(d, c)| format!("{d}:{c}"))
            .collect::<Vec<_>>()
            .join("|");
        let r = self
            .assortativity_r
            .map(|r| format!("{r:.9}"))
            .unwrap_or_default();
        format!(
            "t,degree_histogram,cumulative_law_ok,triangle_count,diameter,avg_distance,\
             avg_distance_estimated,assortativity_r,outerplanar_certified,entropy_h_t\n\
             {},{},{},{},{},{:.9},{},{},{},{:.9}\n",
            self.t,
            hist,
            self.cumulative_law_ok,
            self.triangle_count,
            self.diameter,
            self.avg_distance,
            self.avg_distance_estimated,
            r,
            self.outerplanar_certified,
            self.entropy_h_t,
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        use std::fmt::Write as _;
        let _ = writeln!(out, "t = {}", self.t);
        let hist = self
            .degree_histogram
            .iter()
            .map(|(d, c)| format!("{d}:{c}"))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "degree_histogram = {hist}");
        let _ = writeln!(out, "cumulative_law_ok = {}", self.cumulative_law_ok);
        let _ = writeln!(out, "triangle_count = {}", self.triangle_count);
        let _ = writeln!(out, "diameter = {}", self.diameter);
        let _ = writeln!(
            out,
            "avg_distance = {:.9}{}",
            self.avg_distance,
            if self.avg_distance_estimated { " (estimate)" } else { "" }
        );
        match self.assortativity_r {
            Some(r) => {
                let _ = writeln!(out, "assortativity_r = {r:.9}");
            }
            None => {
                let _ = writeln!(out, "assortativity_r = undefined (all degrees equal)");
            }
        }
        let _ = writeln!(out, "outerplanar_certified = {}", self.outerplanar_certified);
        let _ = writeln!(out, "entropy_h_t = {:.9}", self.entropy_h_t);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(t: u32) -> MGraph {
        MGraph::build(t).unwrap()
    }

    #[test]
    fn histograms_and_law() {
        let expect: [(u32, &[(u32, u64)]); 4] = [
            (1, &[(2, 4)]),
            (2, &[(2, 4), (3, 4)]),
            (3, &[(2, 8), (3, 4), (4, 4)]),
            (4, &[(2, 16), (3, 8), (4, 4), (5, 4)]),
        ];
        for (t, hist) in expect {
            let (ok, got) = degree_law_check(&build(t));
            assert!(ok, "law at t={t}");
            assert_eq!(got.into_iter().collect::<Vec<_>>(), hist.to_vec(), "hist at t={t}");
        }
        for t in 5..=12 {
            let (ok, hist) = degree_law_check(&build(t));
            assert!(ok, "law at t={t}");
            assert_eq!(hist.values().sum::<u64>(), 1u64 << (t + 1));
        }
    }

    #[test]
    fn triangle_free_at_every_level() {
        for t in 0..=8 {
            assert_eq!(triangle_count(&build(t)), 0, "t={t}");
        }
    }

    #[test]
    fn triangle_counter_positive_control() {
        // 0 and 5 share neighbor 4 in M(2); adding the edge closes one
        // triangle, so a passing zero count is not a blind counter
        let mut g = build(2);
        g.add_edge(0, 5);
        assert_eq!(triangle_count(&g), 1);
    }

    #[test]
    fn exact_distances() {
        let cases: [(u32, u32, (i64, i64)); 4] =
            [(0, 1, (1, 1)), (1, 2, (4, 3)), (2, 4, (2, 1)), (3, 6, (14, 5))];
        for (t, diam, (n, d)) in cases {
            let (got_diam, got_avg) = distances(&build(t));
            assert_eq!(got_diam, diam, "diameter at t={t}");
            assert_eq!(
                got_avg,
                BigRational::new(BigInt::from(n), BigInt::from(d)),
                "avg at t={t}"
            );
        }
    }

    #[test]
    fn distance_growth_is_linear_in_level() {
        // measured law over the test range: diameter 2t for t >= 2,
        // monotone averages, and avg <= diameter
        let mut prev_avg = BigRational::from_integer(BigInt::from(0));
        let mut prev_diam = 0;
        for t in 0..=9u32 {
            let (diam, avg) = distances(&build(t));
            if t >= 2 {
                assert_eq!(diam, 2 * t, "diameter law at t={t}");
            }
            assert!(diam >= prev_diam, "diameter monotone");
            assert!(avg > prev_avg, "average monotone");
            assert!(avg <= BigRational::from_integer(BigInt::from(diam)));
            prev_avg = avg;
            prev_diam = diam;
        }
    }

    #[test]
    fn assortativity_exact_values() {
        // frozen exact correlations: 1/6, 1/4, 31/100
        let expect = [(2u32, 1.0 / 6.0), (3, 0.25), (4, 0.31)];
        for (t, r) in expect {
            let got = assortativity(&build(t)).unwrap();
            assert!((got - r).abs() < 1e-12, "r({t}) = {got}, want {r}");
        }
        for t in 2..=10 {
            assert!(assortativity(&build(t)).unwrap() > 0.0, "assortative at t={t}");
        }
    }

    #[test]
    fn assortativity_degenerate_below_two() {
        assert!(matches!(assortativity(&build(0)), Err(Error::DegenerateDegrees(0))));
        assert!(matches!(assortativity(&build(1)), Err(Error::DegenerateDegrees(1))));
    }

    #[test]
    fn outerplanarity_certificates() {
        for t in 0..=10 {
            assert!(certify_outerplanar(&build(t)), "certificate at t={t}");
        }
    }

    #[test]
    fn corrupted_boundary_rejected() {
        let g = build(2);
        let mut bad = g.boundary().to_vec();
        bad.swap(1, 2);
        assert!(!certify_boundary(&g, &bad), "swapped entries break the cycle");
        let short = &g.boundary()[..6];
        assert!(!certify_boundary(&g, short), "truncation rejected");
        let mut dup = g.boundary().to_vec();
        dup[3] = dup[0];
        assert!(!certify_boundary(&g, &dup), "duplicate rejected");
    }

    #[test]
    fn chord_crossing_detected() {
        // adding the edge {1,6} to M(2) leaves the boundary a valid
        // Hamiltonian cycle but the new chord interleaves with {0,2}
        let mut g = build(2);
        g.add_edge(1, 6);
        assert!(!certify_outerplanar(&g));
    }

    #[test]
    fn average_degree_formula() {
        for t in 1..=12u32 {
            let g = build(t);
            // 2|E| = |V| (3 - 2^(1-t)) exactly: 2(3*2^t - 2) = 2^(t+1)*3 - 4
            assert_eq!(2 * g.edge_count(), 3 * (1u64 << (t + 1)) - 4);
        }
    }

    #[test]
    fn comparison_table_rows() {
        let table = entropy_table();
        let find = |name: &str| table.iter().find(|r| r.family == name).unwrap().entropy;
        assert_eq!(find("honeycomb"), 0.807);
        assert_eq!(find("4-8-8"), 0.787);
        assert_eq!(find("3-12-12"), 0.721);
        assert_eq!(find("Hanoi"), 0.677);
        let ours = find("M(t)");
        assert!((ours - 0.656949).abs() < 1e-5);
        assert!(table.iter().all(|r| r.family == "M(t)" || r.entropy > ours), "smallest");
    }

    #[test]
    fn report_shape() {
        let report = analyze(&build(3));
        assert_eq!(report.t, 3);
        assert_eq!(report.triangle_count, 0);
        assert!(report.cumulative_law_ok);
        assert!(report.outerplanar_certified);
        assert!(!report.avg_distance_estimated);
        assert!((report.avg_distance - 2.8).abs() < 1e-12);
        assert!((report.entropy_h_t - 0.5801779414226832).abs() < 1e-12);

        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "t",
            "degree_histogram",
            "cumulative_law_ok",
            "triangle_count",
            "diameter",
            "avg_distance",
            "assortativity_r",
            "outerplanar_certified",
            "entropy_h_t",
        ] {
            assert!(json.get(key).is_some(), "field {key}");
        }
        assert_eq!(json["degree_histogram"]["2"], 8);

        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.contains("2:8|3:4|4:4"));
    }
}

//! Brute-force oracles and seeded property checks shared by the test targets.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use qsdesign::clique::{clique_below, max_clique, Graph};
use qsdesign::code::{EnumerationConfig, LinearCodeView, MinDistanceConfig, MinDistanceVerdict};
use qsdesign::design::IncidenceStructure;
use qsdesign::gf::{GfMatrix, GfVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrix whose entries are zero with probability about `sparsity`.
pub fn random_matrix(rng: &mut impl Rng, p: u32, rows: usize, cols: usize) -> GfMatrix {
    let sparsity: f64 = rng.gen_range(0.0..0.8);
    let data = (0..rows * cols)
        .map(|_| if rng.gen_bool(sparsity) { 0 } else { rng.gen_range(0..p) as u8 })
        .collect();
    GfMatrix::new(p, rows, cols, data).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let density: f64 = rng.gen_range(0.05..0.95);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Every vector of the row space, built by closing `{0}` under adding multiples of each row.
pub fn row_span(m: &GfMatrix) -> HashSet<Vec<u8>> {
    let p = m.p() as u8;
    let mut span: HashSet<Vec<u8>> = HashSet::from([vec![0; m.cols()]]);
    for row in m.row_iter() {
        let mut next = HashSet::with_capacity(span.len() * p as usize);
        for s in &span {
            for c in 0..p {
                next.insert(s.iter().zip(row).map(|(&a, &b)| (a + c * b) % p).collect::<Vec<u8>>());
            }
        }
        span = next;
    }
    span
}

/// Rank as `log_p |row space|`.
pub fn oracle_rank(m: &GfMatrix) -> usize {
    let size = row_span(m).len();
    let mut rank = 0;
    let mut acc = 1;
    while acc < size {
        acc *= m.p() as usize;
        rank += 1;
    }
    assert_eq!(acc, size, "row space size is a power of p");
    rank
}

/// `{0,1}` vectors of weight `w` orthogonal to every row, by checking all `C(n,w)` supports.
pub fn oracle_dual_01(g: &GfMatrix, w: usize) -> Vec<Vec<usize>> {
    let n = g.cols();
    let p = g.p() as u8;
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != w {
            continue;
        }
        let support: Vec<usize> = (0..n).filter(|&c| mask >> c & 1 == 1).collect();
        if g.row_iter().all(|row| support.iter().fold(0u8, |a, &c| (a + row[c]) % p) == 0) {
            out.push(support);
        }
    }
    out.sort();
    out
}

/// Minimum nonzero weight over the whole row space.
pub fn oracle_min_weight(g: &GfMatrix) -> Option<usize> {
    row_span(g)
        .iter()
        .map(|v| v.iter().filter(|&&x| x != 0).count())
        .filter(|&w| w > 0)
        .min()
}

/// All maximum cliques, found by enumerating every clique.
pub fn oracle_max_cliques(g: &Graph) -> (usize, Vec<Vec<usize>>) {
    fn extend(g: &Graph, clique: &mut Vec<usize>, from: usize, best: &mut (usize, Vec<Vec<usize>>)) {
        if clique.len() > best.0 {
            *best = (clique.len(), Vec::new());
        }
        if clique.len() == best.0 {
            best.1.push(clique.clone());
        }
        for v in from..g.n() {
            if clique.iter().all(|&u| g.adjacent(u, v)) {
                clique.push(v);
                extend(g, clique, v + 1, best);
                clique.pop();
            }
        }
    }
    let mut best = (0, Vec::new());
    extend(g, &mut Vec::new(), 0, &mut best);
    best.1.sort();
    best
}

/// The t-subset counts of a structure, computed directly from block lists.
pub fn oracle_is_t_design(d: &IncidenceStructure, t: usize) -> bool {
    let blocks: Vec<Vec<usize>> = (0..d.b()).map(|j| d.block_points(j)).collect();
    if blocks.is_empty() || t > d.v() {
        return false;
    }
    let k = blocks[0].len();
    if k == 0 || t > k || blocks.iter().any(|b| b.len() != k) {
        return false;
    }
    let mut counts = BTreeSet::new();
    for mask in 0u32..1 << d.v() {
        if mask.count_ones() as usize != t {
            continue;
        }
        let c = blocks.iter().filter(|b| (0..d.v()).all(|x| mask >> x & 1 == 0 || b.contains(&x))).count();
        counts.insert(c);
    }
    counts.len() == 1
}

pub fn check_rank(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = *[2u32, 3, 5].choose(&mut r).unwrap();
    let (rows, cols) = (r.gen_range(1..=8), r.gen_range(1..=8));
    let m = random_matrix(&mut r, p, rows, cols);
    let rank = m.rank();
    let null = m.nullspace_basis();
    ensure!(rank == oracle_rank(&m), "rank {rank} vs oracle {} for {m:?}", oracle_rank(&m));
    ensure!(rank + null.rows() == cols, "rank-nullity fails for {m:?}");
    for i in 0..null.rows() {
        ensure!(m.syndrome(&null.row_vector(i)).unwrap().is_zero(), "null vector {i} not orthogonal");
    }
    ensure!(m.transpose().rank() == rank, "transpose rank differs for {m:?}");
    let (rref, _) = m.rref();
    ensure!(rref.rref().0 == rref, "rref not idempotent for {m:?}");
    Ok(())
}

pub fn check_enumeration(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = *[2u32, 3].choose(&mut r).unwrap();
    let n = r.gen_range(1..=18);
    let rows = r.gen_range(1..=6);
    let g = random_matrix(&mut r, p, rows, n);
    let code = LinearCodeView::new(g.clone());
    for w in 0..=n {
        let got: Vec<Vec<usize>> = code
            .enumerate_01_dual_codewords(w, &EnumerationConfig::default())
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.coordinates().to_vec())
            .collect();
        let want = oracle_dual_01(&g, w);
        ensure!(got == want, "p={p} n={n} w={w}: {} words vs oracle {}", got.len(), want.len());
    }
    Ok(())
}

fn in_code(g: &GfMatrix, v: &GfVector) -> bool {
    g.row_space_contains(v).unwrap()
}

pub fn check_min_distance(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = *[2u32, 3].choose(&mut r).unwrap();
    let n = r.gen_range(2..=14);
    let rows = r.gen_range(1..=6);
    let g = random_matrix(&mut r, p, rows, n);
    let Some(d) = oracle_min_weight(&g) else {
        return Ok(());
    };
    let code = LinearCodeView::new(g.clone());
    let cfg = MinDistanceConfig::default();
    match code.verify_min_distance(d, &cfg).map_err(|e| e.to_string())? {
        MinDistanceVerdict::Confirmed { distance, witness, .. } => {
            ensure!(distance == d && witness.weight() == d && in_code(&g, &witness), "bad confirmation at {d}");
        }
        other => return Err(format!("true distance {d} not confirmed: {other:?}")),
    }
    match code.verify_min_distance(d + 1, &cfg).map_err(|e| e.to_string())? {
        MinDistanceVerdict::Smaller { weight, witness, .. } => {
            ensure!(weight == d && witness.weight() == d && in_code(&g, &witness), "bad refutation of {}", d + 1);
        }
        other => return Err(format!("claim {} above true distance {d} accepted: {other:?}", d + 1)),
    }
    if d > 1 {
        match code.verify_min_distance(d - 1, &cfg).map_err(|e| e.to_string())? {
            MinDistanceVerdict::Larger { minimum, .. } => ensure!(minimum == d, "reported minimum {minimum} vs {d}"),
            other => return Err(format!("claim {} below true distance {d} accepted: {other:?}", d - 1)),
        }
    }
    Ok(())
}

pub fn check_clique(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(1..=25);
    let g = random_graph(&mut r, n);
    let (omega, maxima) = oracle_max_cliques(&g);
    let res = max_clique(&g);
    ensure!(res.size == omega, "clique number {} vs oracle {omega}", res.size);
    ensure!(res.verify(&g), "witness {:?} is not a clique", res.witness);
    ensure!(res.witness == maxima[0], "witness {:?} is not the lex-least {:?}", res.witness, maxima[0]);
    let (below, _) = clique_below(&g, omega + 1).map_err(|e| e.to_string())?;
    ensure!(below, "clique_below(omega + 1) must hold");
    if omega > 0 {
        let (below, found) = clique_below(&g, omega).map_err(|e| e.to_string())?;
        ensure!(!below && found.verify(&g) && found.witness == maxima[0], "clique_below(omega) witness wrong");
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let relabelled = Graph::from_edges(n, &g.edges().iter().map(|&(i, j)| (perm[i], perm[j])).collect::<Vec<_>>())
        .map_err(|e| e.to_string())?;
    ensure!(max_clique(&relabelled).size == omega, "relabelling changed the clique number");

    let keep: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.6)).collect();
    ensure!(max_clique(&g.induced(&keep)).size <= omega, "induced subgraph has a larger clique");
    Ok(())
}

/// Random structure on at most 9 points, sometimes a complete design.
pub fn random_structure(r: &mut impl Rng) -> IncidenceStructure {
    let v = r.gen_range(2..=9);
    let k = r.gen_range(1..=v);
    let blocks: Vec<Vec<usize>> = if r.gen_bool(0.3) {
        let mut all = Vec::new();
        for mask in 0u32..1 << v {
            if mask.count_ones() as usize == k {
                all.push((0..v).filter(|&x| mask >> x & 1 == 1).collect());
            }
        }
        all
    } else {
        (0..r.gen_range(1..=12))
            .map(|_| {
                let mut pts: Vec<usize> = (0..v).collect();
                pts.shuffle(r);
                let mut b = pts[..r.gen_range(1..=v)].to_vec();
                b.sort_unstable();
                b
            })
            .collect()
    };
    IncidenceStructure::from_blocks(v, &blocks).unwrap()
}

pub fn check_t_design(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = random_structure(&mut r);
    for t in 1..=3 {
        let got = d.verify_t_design(t);
        ensure!(got.is_ok() == oracle_is_t_design(&d, t), "t={t}: verify {got:?} disagrees with oracle");
        if let (Ok(sig), true) = (got, t == 2) {
            ensure!(sig.b * sig.k == sig.v * sig.r, "{sig}: bk != vr");
            ensure!(sig.lambda * (sig.v - 1) == sig.r * (sig.k - 1), "{sig}: λ(v−1) != r(k−1)");
            ensure!(sig.satisfies_fisher(), "{sig}: Fisher fails");
        }
    }
    Ok(())
}

/// Runs `check` on `cases` consecutive seeds and returns the first failure.
pub fn run_suite(name: &str, cases: u64, check: fn(u64) -> Check) -> Check {
    for seed in 0..cases {
        check(seed).map_err(|e| format!("{name}, seed {seed}: {e}"))?;
    }
    Ok(())
}

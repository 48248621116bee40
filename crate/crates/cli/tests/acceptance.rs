//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use chainmail_core::family::{canonical_spec, family_member, verify_family_invariance, FamilySpec};
use chainmail_core::graph::{parse_graph, serialize_graph};
use chainmail_core::linalg::{determinant, signature, SymmetricIntMatrix};
use chainmail_core::pi1::{abelianization, presentation_from_graph, weight_one_certificate};
use chainmail_core::spin::{characteristic_subgraphs, corank_mod2, f_value, homology_group, simulate_kaplan_with, ContractionOrder};
use chainmail_core::tait::{checkerboard_coloring, complete_to_tait, parse_pd, reduce_tait, white_tait_graph, Color};
use chainmail_core::{ChainmailGraph, VertexSubset};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const D_EX: &str = r#"{
  "vertices": [
    {"id": "v1", "weight": -5},
    {"id": "v2", "weight": 0},
    {"id": "v3", "weight": 0},
    {"id": "v4", "weight": -4}
  ],
  "edges": [
    {"u": "v1", "v": "v2", "sign": 1},
    {"u": "v1", "v": "v3", "sign": 1},
    {"u": "v1", "v": "v3", "sign": 1},
    {"u": "v1", "v": "v3", "sign": 1},
    {"u": "v2", "v": "v4", "sign": 1},
    {"u": "v3", "v": "v4", "sign": 1}
  ]
}
"#;
const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]\n";
const FIGURE_EIGHT: &str = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]\n";

fn d_ex() -> ChainmailGraph {
    parse_graph(D_EX).unwrap()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_mult: usize, weights: (i64, i64)) -> ChainmailGraph {
    let ids: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let vertices: Vec<(&str, i64)> = ids.iter().map(|id| (id.as_str(), rng.gen_range(weights.0..=weights.1))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                continue;
            }
            for _ in 0..rng.gen_range(1..=max_mult) {
                edges.push((ids[i].as_str(), ids[j].as_str(), if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
        }
    }
    ChainmailGraph::from_lists(&vertices, &edges).unwrap()
}

/// The shared random corpus: graphs with up to 12 vertices, multiplicities up
/// to 4 and weights in [-9, 9]; the first 500 have at most 8 vertices.
fn corpus() -> Vec<ChainmailGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4A1);
    let mut out: Vec<ChainmailGraph> = (0..500).map(|_| { let n = rng.gen_range(0..=8); random_graph(&mut rng, n, 4, (-9, 9)) }).collect();
    out.extend((0..100).map(|_| { let n = rng.gen_range(9..=12); random_graph(&mut rng, n, 4, (-9, 9)) }));
    out
}

fn laplacian_rows(g: &ChainmailGraph) -> Vec<Vec<i64>> {
    // Built from the definition, independent of the library's Laplacian.
    let n = g.vertex_count();
    let mut a = vec![vec![0i64; n]; n];
    for (i, v) in g.vertices().iter().enumerate() {
        a[i][i] = v.weight;
    }
    for e in g.edges() {
        a[e.u][e.v] += e.sign.value();
        a[e.v][e.u] += e.sign.value();
    }
    a
}

fn quadratic_form(a: &[Vec<i64>], s: &[usize]) -> i64 {
    s.iter().map(|&i| s.iter().map(|&j| a[i][j]).sum::<i64>()).sum()
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_chainmail"))
}

fn run_cli(args: &[&str], threads: Option<&str>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(binary());
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("CHAINMAIL_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

// 1

fn example_reproduction() -> Outcome {
    let start = Instant::now();
    let g = d_ex();
    let a = g.laplacian().to_i64_rows().unwrap();
    ensure!(a == vec![vec![-5, 1, 3, 0], vec![1, 0, 0, 1], vec![3, 0, 0, 1], vec![0, 1, 1, -4]], "laplacian {a:?}");
    let det = determinant(&g.laplacian());
    ensure!(det == BigInt::from(4), "det {det}");
    let mut sets: Vec<Vec<&str>> = characteristic_subgraphs(&g).unwrap().iter().map(|s| s.subgraph.ids(&g)).collect();
    sets.sort();
    ensure!(sets == vec![vec!["v1", "v2", "v3", "v4"], vec!["v1", "v4"]], "characteristic {sets:?}");
    ensure!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    Ok(())
}

// 2

/// Every merge history of `ids`: at each step an unordered pair merges, the
/// earlier id surviving. The arithmetic of a merge does not depend on which
/// name survives, so this exhausts all contraction orders.
fn merge_histories(ids: &[String]) -> Vec<Vec<(String, String)>> {
    if ids.len() <= 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let rest: Vec<String> = ids.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect();
            for tail in merge_histories(&rest) {
                let mut h = vec![(ids[i].clone(), ids[j].clone())];
                h.extend(tail);
                out.push(h);
            }
        }
    }
    out
}

fn f_identity(corpus: &[ChainmailGraph]) -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    for g in &corpus[..500] {
        let n = g.vertex_count();
        let a = laplacian_rows(g);
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let s = VertexSubset::from_indices(members.iter().copied());
            let f = f_value(g, &s).unwrap();
            let q = quadratic_form(&a, &members);
            ensure!(f == q, "f_value {f} != 1^T A 1 = {q}");
            let ids: Vec<String> = s.ids(g).into_iter().map(String::from).collect();
            let orders: Vec<ContractionOrder> = if members.len() <= 5 {
                merge_histories(&ids).into_iter().map(ContractionOrder::Pairs).collect()
            } else {
                vec![ContractionOrder::Lexicographic, ContractionOrder::Sequence(ids.iter().rev().cloned().collect())]
            };
            for order in orders {
                let fin = simulate_kaplan_with(g, &s, &order).unwrap().final_framing;
                ensure!(fin == q, "kaplan final framing {fin} != {q} for {order:?}");
                checked += 1;
            }
        }
    }
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    println!("    {checked} contraction runs in {:.1?}", start.elapsed());
    Ok(())
}

// 3

fn gf2_equivalence(corpus: &[ChainmailGraph]) -> Outcome {
    for g in corpus.iter().filter(|g| g.vertex_count() <= 12) {
        let n = g.vertex_count();
        let a = laplacian_rows(g);
        let mut brute: Vec<Vec<usize>> = (0u32..(1 << n))
            .filter(|mask| {
                (0..n).all(|i| {
                    let s: i64 = (0..n).filter(|&j| mask >> j & 1 == 1).map(|j| a[i][j]).sum();
                    (s - a[i][i]).rem_euclid(2) == 0
                })
            })
            .map(|mask| (0..n).filter(|&j| mask >> j & 1 == 1).collect())
            .collect();
        let mut fast: Vec<Vec<usize>> =
            characteristic_subgraphs(g).unwrap().into_iter().map(|s| s.subgraph.indices().to_vec()).collect();
        brute.sort();
        fast.sort();
        ensure!(fast == brute, "characteristic sets differ on a {n}-vertex graph");
        ensure!(fast.len() == 1 << corank_mod2(g), "count {} vs 2^{}", fast.len(), corank_mod2(g));
    }
    Ok(())
}

// 4

fn family_invariance() -> Outcome {
    let spec = FamilySpec::new(d_ex(), "v1").unwrap();
    let report = verify_family_invariance(&spec, 100).unwrap();
    ensure!(report.passed(), "counterexamples: {:?}", report.counterexamples);
    for n in 0..=100u64 {
        let g = family_member(&spec, n);
        let det = determinant(&g.laplacian());
        ensure!(det == BigInt::from(4), "det {det} at n = {n}");
        let a = laplacian_rows(&g);
        let spins = characteristic_subgraphs(&g).unwrap();
        let mut got: Vec<(Vec<usize>, i64)> =
            spins.iter().map(|s| (s.subgraph.indices().to_vec(), quadratic_form(&a, s.subgraph.indices()))).collect();
        got.sort();
        let k = n as i64;
        let want = vec![(vec![0, 1, 2, 3], 3 - 2 * k), (vec![0, 3], -9 - 2 * k)];
        ensure!(got == want, "n = {n}: {got:?}");
    }
    Ok(())
}

// 5

/// The chain evaluated directly in floating point:
/// b2 <= (B + |f| - 2) + h + 1, |sigma| >= |f| - |sigma_A| - h - 1, and
/// the predicate b2 < 1.25 |sigma| + 2.
fn chain_oracle(f: i64) -> bool {
    let (b, h, sigma_a) = (4i64, 4i64, 0i64);
    let b2_upper = (b + f.abs() - 2) + h + 1;
    let sigma_lower = f.abs() - sigma_a.abs() - h - 1;
    f != 0 && sigma_lower > 0 && (b2_upper as f64) < 1.25 * sigma_lower as f64 + 2.0
}

fn obstruction_certificate(dir: &Path) -> Outcome {
    let graph = dir.join("d_ex.json");
    let (code, out) = run_cli(&["certify", graph.to_str().unwrap(), "--pivot", "v1"], None);
    let text = String::from_utf8(out).unwrap();
    ensure!(code == 0, "certify exited {code}");
    let n: u64 = text
        .lines()
        .find_map(|l| l.strip_prefix("conclusion: for all n >= "))
        .and_then(|rest| rest.split(',').next())
        .and_then(|n| n.parse().ok())
        .ok_or("no conclusion line")?;
    ensure!(text.contains("Y_{D_n} is not Dehn surgery on a knot"), "missing statement");
    let holds = |n: u64| [-9 - 2 * n as i64, 3 - 2 * n as i64].iter().all(|&f| chain_oracle(f));
    ensure!(n > 0 && !holds(n - 1), "chain already holds at N - 1 = {}", n - 1);
    for m in n..=1000 {
        ensure!(holds(m), "chain fails at n = {m}");
    }
    ensure!(n == 25, "N = {n}");
    Ok(())
}

// 6

fn char_poly(a: &[Vec<i64>]) -> Vec<BigRational> {
    let n = a.len();
    let am: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { coeffs[n - k + 1].clone() } else { BigRational::zero() };
                for l in 0..n {
                    s += &am[i][l] * &m[l][j];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut trace = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &am[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn sign_changes(c: &[BigRational]) -> i64 {
    let s: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count() as i64
}

fn descartes_signature(a: &[Vec<i64>]) -> i64 {
    let p = char_poly(a);
    let q: Vec<BigRational> = p.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }).collect();
    sign_changes(&p) - sign_changes(&q)
}

fn congruence_signature(a: &[Vec<i64>]) -> i64 {
    let mut m: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut sig = 0;
    while !m.is_empty() {
        let n = m.len();
        let Some(p) = (0..n).find(|&i| !m[i][i].is_zero()) else {
            let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero()) else {
                break;
            };
            for k in 0..n {
                let x = m[j][k].clone();
                m[i][k] += x;
            }
            for k in 0..n {
                let x = m[k][j].clone();
                m[k][i] += x;
            }
            continue;
        };
        let d = m[p][p].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        let row = m[p].clone();
        m = (0..n)
            .filter(|&i| i != p)
            .map(|i| (0..n).filter(|&j| j != p).map(|j| &m[i][j] - &row[i] * &row[j] / &d).collect())
            .collect();
    }
    sig
}

fn signature_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x516);
    for _ in 0..200 {
        let n = rng.gen_range(0..=6);
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = rng.gen_range(-5..=5);
                a[i][j] = x;
                a[j][i] = x;
            }
        }
        let got = signature(&SymmetricIntMatrix::from_i64_rows(&a).unwrap());
        let (c, d) = (congruence_signature(&a), descartes_signature(&a));
        ensure!(c == d, "oracles disagree on {a:?}: {c} vs {d}");
        ensure!(got == c, "signature {got} vs oracle {c} on {a:?}");
    }
    let s = signature(&d_ex().laplacian());
    ensure!(s == 0, "signature of the example {s}");
    Ok(())
}

// 7

fn tait_pipeline() -> Outcome {
    for (text, det) in [(TREFOIL, 3), (FIGURE_EIGHT, 5)] {
        let pd = parse_pd(text).map_err(|e| e.to_string())?;
        for outer in [Color::Black, Color::White] {
            let t = white_tait_graph(&pd, &checkerboard_coloring(&pd, outer).unwrap()).map_err(|e| e.to_string())?;
            for v in t.underlying.vertices() {
                let reduced = reduce_tait(&t, &v.id).unwrap();
                let order = determinant(&reduced.laplacian()).abs();
                ensure!(order == BigInt::from(det), "{} outer {outer} root {}: {order}", text.trim(), v.id);
            }
        }
    }
    Ok(())
}

// 8

fn tait_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7A17);
    for _ in 0..100 {
        let n = rng.gen_range(0..=8);
        let g = random_graph(&mut rng, n, 4, (-9, 9));
        let t = complete_to_tait(&g);
        ensure!(t.satisfies_weight_relation(), "weight relation fails");
        ensure!(reduce_tait(&t, &t.root).unwrap() == g, "round trip changed the graph");
    }
    let spec = FamilySpec::new(d_ex(), "v1").unwrap();
    for n in 0..=20u64 {
        let t = complete_to_tait(&family_member(&spec, n));
        let w = &t.underlying;
        let k = n as i64;
        let count = |v: &str| w.signed_edge_count(&t.root, v).unwrap().0;
        let got = [count("v1"), count("v2"), count("v3"), count("v4")];
        ensure!(got == [2 * k + 1, -2, -4, 2], "root edges {got:?} at n = {n}");
        let rw = w.weight(w.index_of(&t.root).unwrap());
        ensure!(rw == 3 - 2 * k, "root weight {rw} at n = {n}");
    }
    Ok(())
}

// 9

fn pi1_certificates() -> Outcome {
    let spec = FamilySpec::new(d_ex(), "v1").unwrap();
    for n in 0..=50u64 {
        let g = family_member(&spec, n);
        let p = presentation_from_graph(&g);
        let ab = abelianization(&p);
        ensure!(ab == homology_group(&g), "abelianization {ab} vs homology at n = {n}");
        ensure!(ab.to_string() == "Z/4", "abelianization {ab} at n = {n}");
        let cert = weight_one_certificate(&p, p.generator_index("x3").unwrap());
        let mut exps = cert.final_exponents.clone();
        exps.sort();
        let mut want = vec![2, -2 * n as i64 - 17];
        want.sort();
        ensure!(exps == want, "exponents {exps:?} at n = {n}");
        ensure!(cert.gcd == 1 && cert.is_valid(), "gcd {} at n = {n}", cert.gcd);
    }
    Ok(())
}

// 10

fn determinism(dir: &Path) -> Outcome {
    let g = dir.join("d_ex.json");
    let tre = dir.join("trefoil.pd");
    let (g, tre) = (g.to_str().unwrap(), tre.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec!["analyze", g],
        vec!["family", g, "--pivot", "v1"],
        vec!["family", g, "--pivot", "v2"],
        vec!["certify", g, "--pivot", "v1"],
        vec!["tait", tre],
        vec!["tait", tre, "--outer-color", "white"],
        vec!["pi1", g, "--kill", "x3", "--n-range", "0..50", "--pivot", "v1"],
        vec!["prospect", "--max-vertices", "4", "--weight-range", "-5..0", "--max-mult", "3"],
    ];
    let mut prospect_text = String::new();
    for args in &commands {
        let (c1, o1) = run_cli(args, Some("1"));
        let (c2, o2) = run_cli(args, Some("4"));
        ensure!(c1 == c2 && o1 == o2, "{} differs between runs", args.join(" "));
        ensure!(c1 == 0 || args[..3] == ["family", g, "--pivot"], "{} exited {c1}", args.join(" "));
        if args[0] == "prospect" {
            prospect_text = String::from_utf8(o1).unwrap();
        }
    }
    let target = canonical_spec(&FamilySpec::new(d_ex(), "v1").unwrap()).unwrap();
    let block: String = std::iter::once(format!(": pivot {}\n", target.pivot))
        .chain(serialize_graph(&target.base).lines().map(|l| format!("  {l}\n")))
        .collect();
    ensure!(prospect_text.contains(&block), "prospect output lacks the example");
    Ok(())
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d_ex.json"), D_EX).unwrap();
    std::fs::write(dir.path().join("trefoil.pd"), TREFOIL).unwrap();
    let corpus = corpus();

    let criteria: Vec<Criterion> = vec![
        ("example reproduction", Box::new(example_reproduction)),
        ("f-identity over contraction orders", Box::new(|| f_identity(&corpus))),
        ("GF(2) oracle equivalence", Box::new(|| gf2_equivalence(&corpus))),
        ("family invariance", Box::new(family_invariance)),
        ("obstruction certificate", Box::new(|| obstruction_certificate(dir.path()))),
        ("signature correctness", Box::new(signature_correctness)),
        ("Tait pipeline", Box::new(tait_pipeline)),
        ("Tait round trip", Box::new(tait_round_trip)),
        ("pi1 certificates", Box::new(pi1_certificates)),
        ("determinism", Box::new(|| determinism(dir.path()))),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

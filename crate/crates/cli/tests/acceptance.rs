//! Acceptance suite: one PASS/FAIL line per criterion, with the measured runtime
//! against its budget. Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use dihedralsig::coloring::coloring_orbits;
use dihedralsig::coverarith::{disk_cover_euler, ih_euler_characteristic, sashka_signature, viro_signature};
use dihedralsig::covers::{branched_homology, genus_bound};
use dihedralsig::diagram::parse_braid;
use dihedralsig::linalg::smith_normal_form;
use dihedralsig::surfaces::{
    coloring_passes_metabolizer_filter, determinant, double_cover_homology, linking_form, metabolizers, seifert_matrix,
};
use dihedralsig::xi::{assemble_xi, bridge_bound, ribbon_bound, tristram_levine, tristram_levine_family, xi3_parity_check, ParityCheck};
use dihedralsig::{fox_colorings, CoverSpec, Error, IntMatrix, KnotTable};

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [(&str, u64, Check); 9] = [
        ("determinant and parity", 5, determinants),
        ("coloring existence iff p | det", 5, coloring_existence),
        ("two-bridge covers and genus bound", 30, two_bridge),
        ("Tristram-Levine signatures", 10, tristram_levine_suite),
        ("Xi assembly and bounds", 1, xi_assembly),
        ("cover arithmetic", 1, cover_arithmetic),
        ("Smith form vs gcd of minors", 30, smith_oracle),
        ("metabolizer filter", 5, metabolizer_filter),
        ("report determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*budget) => Err(format!("{detail}; over budget")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{}] {name}: {detail} ({:.2}s / {budget}s)", k + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn determinants() -> Result<String, String> {
    let table = KnotTable::bundled();
    let mut both = 0;
    for r in &table.knots {
        let d = r.diagram().map_err(|e| e.to_string())?;
        let det = determinant(&d).map_err(|e| e.to_string())?;
        ensure!(det % 2 == 1, "{}: even determinant {det}", r.name);
        let h1 = double_cover_homology(&d);
        ensure!(h1.order() == Some(BigInt::from(det)), "{}: |H1| = {h1}, det {det}", r.name);
        if let Some(b) = &r.braid {
            let s = seifert_matrix(b).symmetrized.determinant().map_err(|e| e.to_string())?;
            ensure!(s.magnitude() == BigInt::from(det).magnitude(), "{}: Goeritz {det}, Seifert {s}", r.name);
            both += 1;
        }
    }
    Ok(format!("{} knots, {both} with both routes", table.knots.len()))
}

fn coloring_existence() -> Result<String, String> {
    let table = KnotTable::bundled();
    let mut pairs = 0;
    for r in &table.knots {
        let d = r.diagram().map_err(|e| e.to_string())?;
        let det = determinant(&d).map_err(|e| e.to_string())?;
        for p in [3u64, 5, 7, 15] {
            let exists = fox_colorings(&d, p).map_err(|e| e.to_string())?.iter().any(|c| c.surjective);
            ensure!(exists == (det % p == 0), "{} p={p}: det {det}, surjective colorings {exists}", r.name);
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (knot, p) pairs"))
}

fn two_bridge() -> Result<String, String> {
    let table = KnotTable::bundled();
    let (mut spheres, mut ranks) = (0, 0);
    for r in &table.knots {
        let d = r.diagram().map_err(|e| e.to_string())?;
        let n = r.bridge_n.unwrap_or_else(|| d.bridge_upper_bound());
        for p in [3u64, 5, 7, 15] {
            let surjective: Vec<_> = fox_colorings(&d, p).map_err(|e| e.to_string())?.into_iter().filter(|c| c.surjective).collect();
            if n == 2 {
                for c in &surjective {
                    let h = branched_homology(&d, c).map_err(|e| e.to_string())?;
                    ensure!(h.branched.is_trivial(), "{} p={p} {:?}: H1(M) = {}", r.name, c.labels, h.branched);
                    spheres += 1;
                }
            }
            let bound = genus_bound(p, n).map_err(|e| e.to_string())?;
            for o in coloring_orbits(&surjective) {
                let h = branched_homology(&d, &o.representative).map_err(|e| e.to_string())?;
                ensure!(h.branched.rank as u64 <= bound, "{} p={p}: rank {} > {bound}", r.name, h.branched.rank);
                ranks += 1;
            }
        }
    }
    Ok(format!("{spheres} two-bridge colorings give spheres, {ranks} orbit ranks within bound"))
}

/// Signature of a 2×2 Hermitian matrix [[a, b], [b̄, d]] from its closed-form eigenvalues.
fn signature_2x2(a: f64, b: (f64, f64), d: f64) -> Option<i64> {
    let mid = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b.0 * b.0 + b.1 * b.1).sqrt();
    let mut s = 0;
    for ev in [mid + rad, mid - rad] {
        if ev.abs() < 1e-9 {
            return None;
        }
        s += if ev > 0.0 { 1 } else { -1 };
    }
    Some(s)
}

fn tl_oracle_2x2(l: &[Vec<i64>], p: u64, i: u64) -> Option<i64> {
    let theta = 2.0 * std::f64::consts::PI * i as f64 / p as f64;
    // (1 - ω) L_jk + (1 - ω̄) L_kj
    let (c, s) = (1.0 - theta.cos(), theta.sin());
    let entry = |j: usize, k: usize| {
        let (x, y) = (l[j][k] as f64, l[k][j] as f64);
        (c * (x + y), -s * x + s * y)
    };
    signature_2x2(entry(0, 0).0, entry(0, 1), entry(1, 1).0)
}

fn tristram_levine_suite() -> Result<String, String> {
    let trefoil = seifert_matrix(&parse_braid("k=2; 1 1 1").map_err(|e| e.to_string())?);
    let rows = trefoil.l.to_i64_rows().ok_or("trefoil Seifert matrix overflows")?;
    for i in 1..3 {
        let got = tristram_levine(&trefoil.l, 3, i).map_err(|e| e.to_string())?;
        let oracle = tl_oracle_2x2(&rows, 3, i).ok_or("oracle degenerate")?;
        ensure!(got == -2 && oracle == -2, "trefoil σ at ζ3^{i}: {got}, oracle {oracle}");
    }

    let mut runner = TestRunner::deterministic();
    let strategy = (1usize..=3, proptest::collection::vec(-3i64..=3, 36), proptest::sample::select(vec![3u64, 5, 7]));
    let (mut checked, mut degenerate, mut oracle_checked) = (0, 0, 0);
    for _ in 0..1000 {
        let (g, v, p) = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let n = 2 * g;
        // symmetric part plus the standard symplectic form, so L - Lᵀ is unimodular
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| v[i.min(j) * 6 + i.max(j)] + i64::from(i % 2 == 0 && j == i + 1)).collect())
            .collect();
        let l = IntMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
        match tristram_levine_family(&l, p) {
            Ok(sig) => {
                for i in 0..sig.len() {
                    ensure!(sig[i] == sig[sig.len() - 1 - i], "asymmetric family {sig:?} for {rows:?}");
                    ensure!(sig[i].unsigned_abs() as usize <= n, "|σ| > size for {rows:?}");
                }
                if n == 2 {
                    for i in 1..p {
                        if let Some(o) = tl_oracle_2x2(&rows, p, i) {
                            ensure!(o == sig[i as usize - 1], "{rows:?} at ζ{p}^{i}: {} vs oracle {o}", sig[i as usize - 1]);
                            oracle_checked += 1;
                        }
                    }
                }
                checked += 1;
            }
            Err(e) if e.is_indeterminate() => degenerate += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!(
        "trefoil -2/-2; 1000 random Seifert matrices: {checked} symmetric, {degenerate} degenerate, {oracle_checked} 2x2 values match the eigenvalue oracle"
    ))
}

fn xi_assembly() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    for p in [3u64, 5, 7] {
        let tl = vec![-2; p as usize - 1];
        let base = assemble_xi(p, 2 * p as i64 * 3, 0, &tl).map_err(err)?.xi.unwrap();
        for s in -10..=10 {
            let xi = assemble_xi(p, 2 * p as i64 * 3, s, &tl).map_err(err)?.xi.unwrap();
            ensure!(xi == base + s, "p={p}: not affine in sigma_W");
        }
        for l_v in 1..p as i64 {
            ensure!(assemble_xi(p, l_v, 0, &tl).is_err(), "p={p}: L_V = {l_v} accepted");
        }
    }
    ensure!(ribbon_bound(3, 0) == 1, "ribbon_bound(3,0) = {}", ribbon_bound(3, 0));
    let bb = bridge_bound(3, 2).map_err(err)?;
    ensure!(bb == 1, "bridge_bound(3,2) = {bb}");
    // bound 1 plus oddness leaves exactly ±1
    let mut allowed = Vec::new();
    for x in -5..=5 {
        let cert = assemble_xi(3, 0, x, &[0, 0]).map_err(err)?.with_bound(ribbon_bound(3, 0));
        let parity = xi3_parity_check(&cert, true).map_err(err)?;
        if parity == ParityCheck::Pass && cert.verdict == dihedralsig::Verdict::ConsistentWithRibbon {
            allowed.push(x);
        }
    }
    ensure!(allowed == [-1, 1], "allowed Xi_3 values {allowed:?}");
    Ok("affine in sigma_W, L_V guard, bounds 1/1, parity leaves ±1".into())
}

fn cover_arithmetic() -> Result<String, String> {
    let err = |e: Error| e.to_string();
    for sigma in -4..=4 {
        let id = CoverSpec { n: 1, sigma_y: sigma, euler_numbers: Default::default(), dihedral: None };
        ensure!(viro_signature(&id).map_err(err)? == sigma, "identity cover changes σ = {sigma}");
    }
    // conic in CP²: degree 2, self-intersection 4 downstairs, 4/2 upstairs;
    // the cover is the quadric, intersection form [[0,1],[1,0]]
    let quadric = signature_2x2(0.0, (1.0, 0.0), 0.0).ok_or("oracle degenerate")?;
    let upstairs = 2 * 2 / 2;
    let conic = CoverSpec { n: 2, sigma_y: 1, euler_numbers: [(2, upstairs)].into_iter().collect(), dihedral: None };
    let v = viro_signature(&conic).map_err(err)?;
    ensure!(v == quadric, "conic cover σ = {v}, quadric {quadric}");
    for p in [3u64, 5, 7] {
        for xi in -3..=3 {
            ensure!(sashka_signature(p, 0, 0, xi).map_err(err)? == xi, "σ_IH at S⁴ differs from Xi");
        }
        ensure!(disk_cover_euler(p).map_err(err)? == p.div_ceil(2), "disk cover Euler at p={p}");
    }
    ensure!(ih_euler_characteristic(3, 0).map_err(err)? == 3, "Iχ(3, 0)");
    Ok(format!("identity, conic = {v}, S⁴ specialization, Euler characteristics"))
}

/// Fraction-free determinant; entries here stay far inside i128.
fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let (mut sign, mut prev) = (1, 1i128);
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn gcd_of_minors(a: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (a.len(), a[0].len());
    let (mut out, mut prev) = (Vec::new(), 1i128);
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rs in combinations(r, k) {
            for cs in combinations(c, k) {
                g = gcd(g, det_i128(rs.iter().map(|&i| cs.iter().map(|&j| a[i][j] as i128).collect()).collect()));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn smith_oracle() -> Result<String, String> {
    let mut runner = TestRunner::deterministic();
    let strategy = (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r));
    let one = BigInt::from(1);
    for _ in 0..500 {
        let rows = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let a = IntMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
        let s = smith_normal_form(&a);
        let diag: Vec<BigInt> = s.diagonal().into_iter().filter(|d| *d != BigInt::from(0)).collect();
        let oracle: Vec<BigInt> = gcd_of_minors(&rows).into_iter().map(BigInt::from).collect();
        ensure!(diag == oracle, "{rows:?}: {diag:?} vs minors {oracle:?}");
        ensure!(s.u.determinant().map_err(|e| e.to_string())?.magnitude() == one.magnitude(), "U not unimodular for {rows:?}");
        ensure!(s.v.determinant().map_err(|e| e.to_string())?.magnitude() == one.magnitude(), "V not unimodular for {rows:?}");
        let udv = s.u.mul(&s.d).and_then(|x| x.mul(&s.v)).map_err(|e| e.to_string())?;
        ensure!(udv == a, "UDV != A for {rows:?}");
    }
    Ok("500 matrices up to 6x6".into())
}

fn metabolizer_filter() -> Result<String, String> {
    let table = KnotTable::bundled();
    let err = |e: Error| e.to_string();
    let six_one = table.get("6_1").map_err(err)?.diagram().map_err(err)?;
    let lf = linking_form(&six_one).map_err(err)?;
    let mets = metabolizers(&lf).map_err(err)?;
    ensure!(lf.orders == [9], "6_1 linking group orders {:?}", lf.orders);
    ensure!(mets.len() == 1, "6_1: {} metabolizers", mets.len());
    let surjective: Vec<_> = fox_colorings(&six_one, 3).map_err(err)?.into_iter().filter(|c| c.surjective).collect();
    for c in &surjective {
        ensure!(coloring_passes_metabolizer_filter(c, &six_one).map_err(err)?, "6_1 coloring {:?} fails", c.labels);
    }
    let trefoil = table.get("3_1").map_err(err)?.diagram().map_err(err)?;
    let n = metabolizers(&linking_form(&trefoil).map_err(err)?).map_err(err)?.len();
    ensure!(n == 0, "trefoil: {n} metabolizers");
    Ok(format!("6_1: one metabolizer of Z/9, {} colorings pass; 3_1: none", surjective.len()))
}

fn run_report(cache: &std::path::Path, extra: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dihedralsig"))
        .arg("report")
        .args(extra)
        .env("DIHEDRALSIG_CACHE", cache)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "report failed: {}", String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

fn determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let uncached = run_report(dir.path(), &["--no-cache"])?;
    let again = run_report(dir.path(), &["--no-cache"])?;
    ensure!(uncached == again, "two uncached runs differ");
    let cold = run_report(dir.path(), &[])?;
    ensure!(std::fs::read_dir(dir.path()).map_err(|e| e.to_string())?.next().is_some(), "cache left empty");
    let warm = run_report(dir.path(), &[])?;
    ensure!(cold == uncached && warm == uncached, "cache changed the report");
    Ok(format!("4 runs, {} bytes each, identical", uncached.len()))
}

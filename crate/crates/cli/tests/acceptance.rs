//! Acceptance criteria. Prints one `acceptance <id> <name>: PASS|FAIL` line
//! per criterion, with the failed checks indented below, and exits nonzero if
//! any criterion failed.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use eewt_core::analysis::{equivocation_formula, leakage_profile, verify_security, BruteForceOracle};
use eewt_core::codes::{LinearCode, Poly};
use eewt_core::descriptor::SchemeDescriptor;
use eewt_core::rng;
use eewt_core::storage;
use eewt_core::{Field, Gf, IndexSet, Matrix, Mode, NestedScheme, Observation};
use rand::{seq::SliceRandom, RngCore};

const REFERENCE: [&str; 8] = ["--field", "gf(2^3, modulus=0xB)", "--construction", "eval", "--n", "7", "--nu", "5"];

fn eewt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eewt")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn reference_args<'a>(command: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![command];
    v.extend(REFERENCE);
    v.extend(["--mu", "3"]);
    v.extend_from_slice(extra);
    v
}

fn reference_scheme() -> NestedScheme {
    NestedScheme::eval(&Field::from_modulus(2, 3, 0xB).unwrap(), 7, 5, 3, None).unwrap()
}

type Criterion = fn() -> Vec<String>;

const CRITERIA: [(&str, &str, Criterion); 10] = [
    ("1", "rs-255 nested construction", criterion_1_rs255_construction),
    ("2", "exhaustive secrecy", criterion_2_exhaustive_secrecy),
    ("3", "exhaustive reliability", criterion_3_exhaustive_reliability),
    ("4", "leakage curve", criterion_4_leakage_curve),
    ("5", "formula equals brute force", criterion_5_formula_matches_oracle),
    ("6", "ozarow-wyner identity", criterion_6_ozarow_wyner_identity),
    ("7", "threshold secret sharing", criterion_7_shamir_correspondence),
    ("8", "non-MDS detection (mu = 1)", criterion_8_non_mds_detection_mu_1),
    ("8b", "non-MDS detection (mu = 2)", criterion_8_non_mds_detection_mu_2),
    ("9", "storage round trip", criterion_9_storage_round_trip),
];

fn main() -> std::process::ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, run) in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let failures = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            vec![format!("panicked: {msg}")]
        });
        let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!("acceptance {id} {name}: {verdict} ({:.1}s)", start.elapsed().as_secs_f64());
        for f in &failures {
            println!("    {f}");
        }
        failed += !failures.is_empty() as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::ExitCode::FAILURE
    } else {
        std::process::ExitCode::SUCCESS
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn write_descriptor(dir: &Path, scheme: &NestedScheme) -> PathBuf {
    let path = dir.join("scheme.toml");
    std::fs::write(&path, SchemeDescriptor::from_scheme(scheme).to_toml()).unwrap();
    path
}

fn criterion_1_rs255_construction() -> Vec<String> {
    let mut fails = Vec::new();
    let start = Instant::now();
    let out = eewt(&[
        "construct", "--field", "gf(2^8, modulus=0x11D)", "--construction", "cyclic", "--n", "255", "--nu", "200", "--mu",
        "150",
    ]);
    let elapsed = start.elapsed();
    check(&mut fails, out.status.success(), format!("construct exited {:?}", out.status.code()));
    let d = SchemeDescriptor::from_toml(&stdout(&out)).expect("descriptor parses");
    let f: Field = d.field.parse().unwrap();
    let scheme = d.to_scheme().unwrap();
    check(&mut fails, scheme.sum_code().dim() == 200, format!("dim D = {}", scheme.sum_code().dim()));
    check(&mut fails, scheme.k_star() == 150, format!("dim C* = {}", scheme.k_star()));
    let cyc = d.cyclic.as_ref().expect("cyclic parameters");
    let g_sum = Poly::from_hex(&f, &cyc.g_sum).unwrap();
    let g_rand = Poly::from_hex(&f, cyc.g_randomizer.as_deref().unwrap()).unwrap();
    check(&mut fails, g_sum.degree() == Some(55), format!("deg g_D = {:?}", g_sum.degree()));
    check(&mut fails, g_rand.degree() == Some(105), format!("deg g_C* = {:?}", g_rand.degree()));
    // roots are exactly alpha^1..alpha^d: every claimed root vanishes, nothing else does
    for (g, d) in [(&g_sum, 55u64), (&g_rand, 105)] {
        let roots: Vec<u64> = (0..255).filter(|&i| g.eval(f.alpha_pow(i)).is_zero()).collect();
        check(&mut fails, roots == (1..=d).collect::<Vec<_>>(), format!("roots of degree-{d} polynomial: {roots:?}"));
    }
    check(&mut fails, f.primitive_element() == Gf::from_raw(2), "alpha = 0x02");
    check(&mut fails, g_sum.divides(&g_rand), "g_D divides g_C*");
    check(&mut fails, d.capacity == "50/255", format!("capacity {}", d.capacity));
    check(&mut fails, (d.capacity_approx - 0.196).abs() < 5e-4, format!("capacity ≈ {}", d.capacity_approx));
    check(&mut fails, elapsed < Duration::from_secs(10), format!("took {elapsed:?}"));
    fails
}

fn criterion_2_exhaustive_secrecy() -> Vec<String> {
    let mut fails = Vec::new();
    let start = Instant::now();
    let out = eewt(&reference_args("verify", &["--mode", "exhaustive"]));
    let text = stdout(&out);
    check(&mut fails, out.status.code() == Some(0), format!("verify exit {:?}", out.status.code()));
    check(&mut fails, text.lines().next() == Some("PASS"), "first line PASS");
    check(&mut fails, text.contains("property: security\nreveal_count: 3\nexpected_equivocation: 2"), "security section");
    check(&mut fails, text.contains("sets_checked: 35\nviolations: 0"), "35 sets, no violations");

    let s = reference_scheme();
    assert_eq!((s.k(), s.k_star()), (2, 3));
    let pairs = 8u64.pow((s.k() + s.k_star()) as u32);
    check(&mut fails, pairs == 32768, format!("{pairs} (S,E) pairs"));
    let oracle = BruteForceOracle::new(&s).unwrap();
    let mut sets = 0;
    for w in IndexSet::combinations(7, 3) {
        sets += 1;
        let e = oracle.equivocation(&w).unwrap();
        check(&mut fails, e.dims == 2 && e.exact && e.raw_count == Some(64), format!("W={w}: {e:?}"));
        let formula = equivocation_formula(&s, &w).unwrap();
        check(&mut fails, formula.dims == 2, format!("formula on W={w}: {}", formula.dims));
    }
    check(&mut fails, sets == 35, format!("{sets} sets"));
    let elapsed = start.elapsed();
    check(&mut fails, elapsed < Duration::from_secs(60), format!("took {elapsed:?}"));
    fails
}

fn criterion_3_exhaustive_reliability() -> Vec<String> {
    let mut fails = Vec::new();
    let s = reference_scheme();
    let f = s.field().clone();
    let mut r = rng::seeded(3, rng::stream::PAYLOAD);
    let mut sets = 0;
    for m in IndexSet::combinations(7, 5) {
        sets += 1;
        let secret = s.random_vector(2, &mut r);
        let (x, e) = s.encode_random(&secret, sets).unwrap();
        match s.decode(&Observation::restrict(&x, &m).unwrap()) {
            Ok(got) => check(&mut fails, got == secret, format!("M={m}: decoded {got:?}, sent {secret:?}")),
            Err(err) => fails.push(format!("M={m}: {err} (E={})", eewt_core::wiretap::format_symbols(&f, &e))),
        }
        let eq = equivocation_formula(&s, &m).unwrap();
        check(&mut fails, eq.dims == 0, format!("equivocation on M={m} is {}", eq.dims));
    }
    check(&mut fails, sets == 21, format!("{sets} sets"));
    let out = eewt(&reference_args("verify", &[]));
    check(&mut fails, stdout(&out).contains("property: reliability\nreveal_count: 5\nexpected_equivocation: 0"), "CLI reliability section");
    check(&mut fails, stdout(&out).contains("sets_checked: 21\nviolations: 0"), "CLI checked 21 sets");
    fails
}

fn criterion_4_leakage_curve() -> Vec<String> {
    let mut fails = Vec::new();
    let expected = |m: usize| match m {
        0..=2 => 2,
        3 | 4 => 5 - m,
        _ => 0,
    };
    let profile = leakage_profile(&reference_scheme(), Mode::Exhaustive).unwrap();
    check(&mut fails, profile.rows.len() == 8, format!("{} rows", profile.rows.len()));
    for row in &profile.rows {
        let e = expected(row.revealed);
        check(
            &mut fails,
            row.min_equivocation == e && row.max_equivocation == e && row.exhaustive,
            format!("m={}: min {} max {}, expected {e}", row.revealed, row.min_equivocation, row.max_equivocation),
        );
        // k + k* - |J| in the middle segment, clipped to [0, k]
        check(&mut fails, e == (5usize.saturating_sub(row.revealed)).min(2), "piecewise form");
    }
    let out = eewt(&reference_args("leakage", &[]));
    let csv = stdout(&out);
    let mut want = String::from("m,min_equivocation,max_equivocation,min_leaked,max_leaked,exhaustive\n");
    for m in 0..=7 {
        let e = expected(m);
        want += &format!("{m},{e},{e},{},{},true\n", 2 - e, 2 - e);
    }
    check(&mut fails, csv == want, format!("CLI csv:\n{csv}"));
    fails
}

fn binary_4_2() -> LinearCode {
    LinearCode::new(Matrix::from_hex(&Field::with_default_modulus(2, 1).unwrap(), 4, "1010\n0101").unwrap()).unwrap()
}

/// Random nested pair of the given shape with nu = n, mu = n - k.
fn random_pair(f: &Field, n: usize, k: usize, ks: usize, seed: u64) -> NestedScheme {
    let mut r = rng::seeded(seed, rng::stream::SAMPLING);
    loop {
        let g = Matrix::from_fn(f, k + ks, n, |_, _| f.random(&mut r));
        if g.rank() < k + ks {
            continue;
        }
        let c = LinearCode::new(g.select_rows(&(0..k).collect::<Vec<_>>())).unwrap();
        let cs = LinearCode::new(g.select_rows(&(k..k + ks).collect::<Vec<_>>())).unwrap();
        return NestedScheme::new(n, n, n - k, c, cs).unwrap();
    }
}

fn criterion_5_formula_matches_oracle() -> Vec<String> {
    let mut fails = Vec::new();
    let gf2 = Field::with_default_modulus(2, 1).unwrap();
    let gf4 = Field::with_default_modulus(2, 2).unwrap();
    let gf3 = Field::with_default_modulus(3, 1).unwrap();
    let schemes = vec![
        ("reference", reference_scheme()),
        ("ozarow-wyner (4,2)", NestedScheme::ozarow_wyner(binary_4_2(), 2).unwrap()),
        // C = repetition code, C* = the non-MDS (4,2) code
        (
            "non-MDS pair",
            NestedScheme::new(4, 4, 2, LinearCode::new(Matrix::from_hex(&gf2, 4, "1100").unwrap()).unwrap(), binary_4_2())
                .unwrap(),
        ),
        ("gf4 eval", NestedScheme::eval(&gf4, 3, 3, 1, None).unwrap()),
        ("random gf2 (7,2,3)", random_pair(&gf2, 7, 2, 3, 1)),
        ("random gf2 (6,3,1)", random_pair(&gf2, 6, 3, 1, 2)),
        ("random gf4 (6,2,2)", random_pair(&gf4, 6, 2, 2, 3)),
        ("random gf3 (5,2,2)", random_pair(&gf3, 5, 2, 2, 4)),
    ];
    check(&mut fails, !schemes[2].1.randomizer_code().is_mds().unwrap(), "test set contains a non-MDS code");
    for (name, s) in &schemes {
        let oracle = BruteForceOracle::new(s).unwrap();
        for j in IndexSet::all_subsets(s.n()) {
            match oracle.equivocation(&j) {
                Ok(b) => {
                    let formula = equivocation_formula(s, &j).unwrap();
                    check(&mut fails, b.exact && b.dims == formula.dims, format!("{name} J={j}: oracle {b:?}, formula {}", formula.dims));
                }
                Err(e) => fails.push(format!("{name} J={j}: {e}")),
            }
        }
    }
    fails
}

fn criterion_6_ozarow_wyner_identity() -> Vec<String> {
    let mut fails = Vec::new();
    let gf4 = Field::with_default_modulus(2, 2).unwrap();
    let codes = vec![
        ("binary (4,2)", binary_4_2()),
        ("random gf4 (6,3)", random_pair(&gf4, 6, 3, 0, 11).message_code().clone()),
        ("random gf4 (8,3)", random_pair(&gf4, 8, 3, 0, 12).message_code().clone()),
    ];
    for (name, cs) in codes {
        let n = cs.len();
        let dlp = cs.dlp_profile().unwrap();
        for mu in 0..=cs.dim() {
            let s = NestedScheme::ozarow_wyner(cs.clone(), mu).unwrap();
            let min = IndexSet::combinations(n, mu)
                .map(|w| {
                    let e = equivocation_formula(&s, &w).unwrap().dims;
                    let ow = eewt_core::analysis::ozarow_equivocation(&cs, &w).unwrap().dims;
                    check(&mut fails, e == ow, format!("{name} W={w}: formula {e}, ozarow {ow}"));
                    e
                })
                .min()
                .unwrap();
            let identity = n - mu - dlp[n - mu];
            check(&mut fails, min == identity, format!("{name} mu={mu}: min {min}, n-mu-k_(n-mu) = {identity}"));
            if name == "binary (4,2)" {
                let oracle = BruteForceOracle::new(&s).unwrap();
                let brute = IndexSet::combinations(n, mu).map(|w| oracle.equivocation(&w).unwrap().dims).min().unwrap();
                check(&mut fails, brute == identity, format!("{name} mu={mu}: brute-force min {brute}"));
            }
        }
    }
    fails
}

fn criterion_7_shamir_correspondence() -> Vec<String> {
    let mut fails = Vec::new();
    let f = Field::from_modulus(2, 3, 0xB).unwrap();
    let s = NestedScheme::eval(&f, 7, 3, 2, None).unwrap();
    check(&mut fails, (s.k(), s.k_star()) == (1, 2), format!("k={}, k*={}", s.k(), s.k_star()));
    let points = match s.construction() {
        eewt_core::wiretap::Construction::Eval { points } => points.clone(),
        other => panic!("{other:?}"),
    };
    let mut r = rng::seeded(7, rng::stream::PAYLOAD);
    for trial in 0..20 {
        let secret = s.random_vector(1, &mut r);
        let (x, e) = s.encode_random(&secret, trial).unwrap();
        // share i is f(x_i) for f(t) = S + E_1 t + E_2 t^2
        let poly = Poly::new(&f, vec![secret[0], e[0], e[1]]);
        check(&mut fails, poly.degree().unwrap_or(0) <= 2, "degree at most mu");
        let evals: Vec<Gf> = points.iter().map(|&p| poly.eval(p)).collect();
        check(&mut fails, evals == x, format!("trial {trial}: shares are not evaluations"));
        check(&mut fails, poly.eval(Gf::ZERO) == secret[0], "S is f(0)");
        for j in IndexSet::combinations(7, 3) {
            // Lagrange interpolation at zero
            let mut at_zero = Gf::ZERO;
            for a in j.iter() {
                let mut w = Gf::ONE;
                for b in j.iter().filter(|&b| b != a) {
                    w = f.mul(w, f.div(points[b], f.sub(points[b], points[a])).unwrap());
                }
                at_zero = f.add(at_zero, f.mul(w, x[a]));
            }
            check(&mut fails, at_zero == secret[0], format!("interpolation on {j}"));
            let decoded = s.decode(&Observation::restrict(&x, &j).unwrap()).unwrap();
            check(&mut fails, decoded == secret, format!("decode on {j}"));
        }
    }
    let oracle = BruteForceOracle::new(&s).unwrap();
    for w in IndexSet::combinations(7, 2) {
        let e = oracle.equivocation(&w).unwrap();
        check(&mut fails, e.dims == 1 && e.exact, format!("W={w}: {e:?}"));
    }
    fails
}

/// As stated: the non-MDS binary (4,2) randomizer code in a mu = 1 scheme
/// should make verify print FAIL and exit 3.
///
/// It cannot. Every column of that generator is nonzero, so for any nested
/// scheme containing it and any single position w, shortening D and C* on w
/// each drop exactly one dimension and the equivocation stays at k. The test
/// is kept as written and is expected to fail.
fn criterion_8_non_mds_detection_mu_1() -> Vec<String> {
    let mut fails = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let s = NestedScheme::ozarow_wyner(binary_4_2(), 1).unwrap();
    let path = write_descriptor(dir.path(), &s);
    let out = eewt(&["verify", "--scheme", path.to_str().unwrap()]);
    let text = stdout(&out);
    check(&mut fails, text.lines().next() == Some("FAIL"), format!("first line {:?}", text.lines().next()));
    check(&mut fails, text.contains("violation: "), "lists a violating W");
    check(&mut fails, out.status.code() == Some(3), format!("exit {:?}", out.status.code()));
    fails
}

/// The same randomizer code at mu = 2, where the pairs {0,2} and {1,3} each
/// pin down one secret symbol.
fn criterion_8_non_mds_detection_mu_2() -> Vec<String> {
    let mut fails = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let s = NestedScheme::ozarow_wyner(binary_4_2(), 2).unwrap();
    let path = write_descriptor(dir.path(), &s);
    let out = eewt(&["verify", "--scheme", path.to_str().unwrap()]);
    let text = stdout(&out);
    check(&mut fails, text.lines().next() == Some("FAIL"), format!("first line {:?}", text.lines().next()));
    check(&mut fails, text.contains("violation: {0,2} equivocation=1"), "W={0,2} reported");
    check(&mut fails, text.contains("violation: {1,3} equivocation=1"), "W={1,3} reported");
    check(&mut fails, out.status.code() == Some(3), format!("exit {:?}", out.status.code()));
    let report_lib = verify_security(&s, Mode::Exhaustive).unwrap();
    check(&mut fails, report_lib.violations.len() == 2, format!("{} violations", report_lib.violations.len()));
    fails
}

fn criterion_9_storage_round_trip() -> Vec<String> {
    let mut fails = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let s = reference_scheme();
    let desc = write_descriptor(dir.path(), &s);
    let desc = desc.to_str().unwrap();
    let input = dir.path().join("payload.bin");
    let mut data = vec![0u8; 4096];
    rng::seeded(9, rng::stream::PAYLOAD).fill_bytes(&mut data);
    std::fs::write(&input, &data).unwrap();
    let base = dir.path().join("payload");
    let out = eewt(&["shares", "split", "--scheme", desc, "--in", input.to_str().unwrap(), "--out", base.to_str().unwrap(), "--seed", "9"]);
    check(&mut fails, out.status.success(), "split succeeded");
    let share = |i: usize| storage::share_file_name(base.to_str().unwrap(), i);
    for m in IndexSet::combinations(7, 5) {
        let target = dir.path().join(format!("joined{m}"));
        let mut args = vec!["shares".to_string(), "join".into(), "--scheme".into(), desc.into(), "--out".into()];
        args.push(target.to_str().unwrap().into());
        args.extend(m.iter().map(share));
        let out = eewt(&args.iter().map(String::as_str).collect::<Vec<_>>());
        check(&mut fails, out.status.success(), format!("join {m}: {}", String::from_utf8_lossy(&out.stderr)));
        check(&mut fails, std::fs::read(&target).ok().as_deref() == Some(&data[..]), format!("bytes differ for {m}"));
    }
    for w in IndexSet::combinations(7, 3) {
        let mut args = vec!["shares".to_string(), "leak".into(), "--scheme".into(), desc.into()];
        args.extend(w.iter().map(share));
        let text = stdout(&eewt(&args.iter().map(String::as_str).collect::<Vec<_>>()));
        check(&mut fails, text.contains("equivocation_per_block: 2\n") && text.contains("full_secrecy: true"), format!("leak {w}:\n{text}"));
    }

    // n = 255 smoke test: 200 random nodes, sampled verification
    let f = Field::gf256();
    let big = NestedScheme::cyclic(&f, 200, 150, None).unwrap();
    let files = storage::split(&big, &data, 255).unwrap();
    let mut nodes: Vec<usize> = (0..255).collect();
    nodes.shuffle(&mut rng::seeded(255, rng::stream::SAMPLING));
    let chosen: Vec<_> = nodes[..200].iter().map(|&i| files[i].clone()).collect();
    check(&mut fails, storage::reconstruct(&big, &chosen).ok().as_deref() == Some(&data[..]), "n = 255 round trip");
    let big_desc = dir.path().join("big.toml");
    std::fs::write(&big_desc, SchemeDescriptor::from_scheme(&big).to_toml()).unwrap();
    let out = eewt(&["verify", "--scheme", big_desc.to_str().unwrap(), "--mode", "sampled:8", "--seed", "1"]);
    let text = stdout(&out);
    check(&mut fails, out.status.code() == Some(0) && text.starts_with("PASS"), format!("sampled verify:\n{text}"));
    check(&mut fails, text.contains("exhaustive: false") && text.contains("seed: 1") && text.contains("trials: 8"), "sampled report labelled");
    fails
}

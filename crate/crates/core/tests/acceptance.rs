//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use ramify_core::ascover::{self, AsCover};
use ramify_core::gf::{is_prime, Field, FieldElement};
use ramify_core::laurent::LaurentPoly;
use ramify_core::moduli::{dim_abelian, dim_bounds, dim_ordinary, dim_reducible, n_count, ordinary_pieces};
use ramify_core::ramfilt::reduce_sizes;
use ramify_core::rational::{int, Rational};
use ramify_core::tower::quaternion::{a3_dependence, sweep};
use ramify_core::tower::{
    evaluate_quaternion_fiber, genus_rh, oracle_lower_jumps, p_rank_ds, quaternion_tower, MPoly,
    TowerSpec, DS_VARIANT,
};
use ramify_core::Execution;

type Outcome = Result<Vec<String>, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn exec() -> Execution {
    Execution::from_flag(Execution::is_parallel_available())
}

fn criterion_1() -> Outcome {
    let f = Field::new(2, 2).map_err(|e| e.to_string())?;
    let z = f.zero();
    let (spec, gens) = quaternion_tower(&f, &z, &z, &z).map_err(|e| e.to_string())?;
    let rep = oracle_lower_jumps(&spec, &gens, 64).map_err(|e| e.to_string())?;
    ensure!(rep.precision <= 200, "needed precision {}", rep.precision);
    let lower = &rep.filtration;
    let jumps = lower.jumps_with_multiplicity().map_err(|e| e.to_string())?;
    ensure!(jumps == vec![int(1), int(1), int(3)], "lower jumps {jumps:?}");
    let orders: Vec<u64> = (0..=4).map(|i| lower.order_at(int(i))).collect();
    ensure!(orders == vec![8, 8, 2, 2, 1], "orders of I_0..I_4 {orders:?}");
    let upper = lower.lower_to_upper().map_err(|e| e.to_string())?;
    let ujumps = upper.jumps_with_multiplicity().map_err(|e| e.to_string())?;
    ensure!(
        ujumps == vec![int(1), int(1), Rational::new(3, 2)],
        "upper jumps {ujumps:?}"
    );
    let genus = genus_rh(8, lower).map_err(|e| e.to_string())?;
    ensure!(genus == 1, "genus {genus}");
    let gamma = p_rank_ds(8, 0, &[8]).map_err(|e| e.to_string())?;
    ensure!(gamma == 0, "p-rank {gamma}");
    let reduced = reduce_sizes(&upper, &[vec![2, 2], vec![2]]).map_err(|e| e.to_string())?;
    let report = dim_bounds(&reduced).map_err(|e| e.to_string())?;
    ensure!(report.n_list == vec![1, 1, 1], "n = {:?}", report.n_list);
    ensure!(
        (report.lower_bound, report.upper_bound) == (1, 3),
        "bounds [{}, {}]",
        report.lower_bound,
        report.upper_bound
    );
    Ok(vec![
        format!("oracle precision {}, lower jumps 1,1,3, upper 1,1,3/2", rep.precision),
        format!("genus 1, p-rank 0 ({DS_VARIANT}), bounds [1, 3]"),
    ])
}

/// Roots of `x^2 + x + 1` by search.
fn cube_roots(f: &Field) -> Vec<FieldElement> {
    f.elements()
        .filter(|x| (x * x + x + f.one()).is_zero())
        .collect()
}

fn sqrt_f16(x: &FieldElement) -> FieldElement {
    // squaring is a bijection of F_16 with inverse x -> x^8
    x.pow(8)
}

fn criterion_2() -> Outcome {
    let f = Field::new(2, 4).map_err(|e| e.to_string())?;
    let one = f.one();
    let roots = cube_roots(&f);
    ensure!(roots.len() == 2, "F_16 should hold two primitive cube roots");
    let reports = sweep(&f, &[f.zero(), one.clone()], exec()).map_err(|e| e.to_string())?;
    ensure!(reports.len() == 512, "{} fibers", reports.len());
    let mut connected = Vec::new();
    for r in &reports {
        let e1 = &r.a1 + &one;
        let expect_disconnected = r.a1.is_one() || roots.contains(&(&r.a2 / &e1));
        ensure!(
            r.connected != expect_disconnected,
            "({}, {}, {}): connected = {}",
            r.a1,
            r.a2,
            r.a3,
            r.connected
        );
        if !r.connected {
            continue;
        }
        let expect_genus = if r.a2.is_zero() || r.a2 == e1 { 1 } else { 2 };
        ensure!(
            r.genus == Some(expect_genus),
            "({}, {}, {}): genus {:?}, expected {expect_genus}",
            r.a1,
            r.a2,
            r.a3,
            r.genus
        );
        connected.push(r.clone());
    }
    let n = connected.len();
    common::run(20, 0..n, |i| {
        let r = &connected[i];
        let c1 = sqrt_f16(&(&r.a2 / &(&r.a1 + &one)));
        let c2 = &one + &c1 + &c1 * &c1;
        let c3 = &c1 / &c2;
        let c4 = &one + &c3;
        let lead5 = &c3 * &c3 * &c4;
        let lead3 = c4.pow(3) + sqrt_f16(&c3.pow(3));
        proptest::prop_assert_eq!(r.leading.clone(), Some((lead5, lead3)));
        Ok(())
    })?;
    let dependent = a3_dependence(&reports);
    Ok(vec![
        format!("{n} connected fibers of 512; leading terms checked on 20 random fibers"),
        format!("pairs (a1, a2) whose top equation depends on a3: {}", dependent.len()),
    ])
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).map_err(|e| e.to_string())?;
        for j in (1..=9i64).filter(|j| j % p as i64 != 0) {
            let spec = TowerSpec::new(&f, 1, vec![("v".into(), MPoly::monomial(2, 1, vec![-j, 0]))])
                .map_err(|e| e.to_string())?;
            let gens = spec.default_generators().map_err(|e| e.to_string())?;
            let rep = oracle_lower_jumps(&spec, &gens, 32).map_err(|e| e.to_string())?;
            ensure!(rep.filtration.jumps() == vec![int(j)], "p = {p}, j = {j}: {:?}", rep.filtration.jumps());
            let s = ascover::conductor(&LaurentPoly::x_pow(&f, -j), p).map_err(|e| e.to_string())?;
            ensure!(s as i64 == j, "p = {p}, j = {j}: conductor {s}");
            let g = genus_rh(p, &rep.filtration).map_err(|e| e.to_string())?;
            ensure!(g == (p - 1) * (j as u64 - 1) / 2, "p = {p}, j = {j}: genus {g}");
            count += 1;
        }
    }
    Ok(vec![format!("{count} pairs (p, j)")])
}

fn order_mod(p: u64, m: u64) -> u64 {
    (1..=m).find(|&c| p.pow(c as u32) % m == 1 % m).unwrap()
}

fn criterion_4() -> Outcome {
    for p in [2u64, 3, 5] {
        for e in 1..=4u32 {
            let jumps: Vec<i64> = (0..e).map(|k| p.pow(k) as i64).collect();
            let d = dim_abelian(p, &[jumps]).map_err(|e| e.to_string())?;
            ensure!(d == p.pow(e - 1), "dim_abelian p = {p}, e = {e}: {d}");
        }
    }
    for p in [2u64, 3, 5, 7] {
        for sigma in 1..=50i64 {
            let brute = (1..=sigma).filter(|l| l % p as i64 != 0).count() as u64;
            let closed = (sigma - sigma / p as i64) as u64;
            let n = n_count(p, 1, 1, int(sigma)).map_err(|e| e.to_string())?;
            ensure!(n == brute && n == closed, "n_count p = {p}, sigma = {sigma}: {n}");
        }
    }
    let mut checked = 0;
    for p in (2..=7u64).filter(|&p| is_prime(p)) {
        for m in (1..=12u64).filter(|m| m % p != 0) {
            let c = order_mod(p, m);
            for e in (1..=6u64).filter(|e| e % c == 0) {
                let d = dim_ordinary(p, e, m).map_err(|e| e.to_string())?;
                let pieces = ordinary_pieces(p, e, m).map_err(|e| e.to_string())?;
                let r = dim_reducible(&pieces, m).map_err(|e| e.to_string())?;
                ensure!(d == e / c && r == d, "ordinary p = {p}, e = {e}, m = {m}: {d}, {r}");
                checked += 1;
            }
        }
    }
    Ok(vec![format!("{checked} ordinary data sets")])
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    let mut record = |name: &str, result: Result<(), String>| match result {
        Ok(()) => lines.push(format!("{name}: ok")),
        Err(e) => {
            lines.push(format!("{name}: {}", e.replace('\n', " ")));
            failed.push(name.to_string());
        }
    };
    record(
        "standard form idempotence",
        common::run(100, common::cover_case(), |c| common::standard_form_idempotent(&c)),
    );
    let g = proptest::collection::vec((-12..=1i64, proptest::prelude::any::<u32>()), 0..5);
    record(
        "conductor invariance under r -> r + g^q - g",
        common::run(100, (common::cover_case(), g.clone()), |(c, g)| common::wp_invariance(&c, &g)),
    );
    let other = proptest::collection::vec((-40..=2i64, proptest::prelude::any::<u32>()), 0..7);
    record(
        "isomorphism is an equivalence relation",
        common::run(
            100,
            (common::cover_case(), other, g, 0..64u32, 0..64u32),
            |(c, o, g, k1, k2)| common::isomorphism_laws(&c, &o, &g, k1, k2),
        ),
    );
    record(
        "Herbrand phi/psi inversion",
        common::run(100, (common::filtration_case(), common::rational_point()), |(c, x)| {
            common::herbrand_inversion(&c, x)
        }),
    );
    record(
        "lower/upper round trip",
        common::run(100, common::filtration_case(), |c| common::lower_upper_round_trip(&c)),
    );
    record(
        "conductor = s_iota mod m",
        common::run(100, common::equivariant_case(), |c| common::conductor_congruence(&c)),
    );
    let twisted = common::run(100, common::equivariant_case(), |c| common::conductor_frobenius_class(&c));
    lines.push(format!(
        "(not part of the criterion) conductor = p^k s_iota mod m: {}",
        match twisted {
            Ok(()) => "ok".to_string(),
            Err(e) => e,
        }
    ));
    if failed.is_empty() {
        Ok(lines)
    } else {
        Err(format!("failed: {}\n{}", failed.join(", "), lines.join("\n")))
    }
}

fn criterion_6() -> Outcome {
    let f = Field::new(2, 4).map_err(|e| e.to_string())?;
    let z = f.zero();
    let u = |c: &FieldElement| LaurentPoly::monomial(c, -1);
    let mut fibers = Vec::new();
    for a1 in f.elements().filter(|a| !a.is_one()) {
        for a3 in f.elements() {
            let rep = evaluate_quaternion_fiber(&a1, &z, &a3).map_err(|e| e.to_string())?;
            ensure!(
                rep.connected && rep.top_jump == Some(3) && rep.genus == Some(1),
                "({a1}, 0, {a3}): {rep:?}"
            );
            let (spec, gens) = quaternion_tower(&f, &a1, &z, &a3).map_err(|e| e.to_string())?;
            let oracle = oracle_lower_jumps(&spec, &gens, 64).map_err(|e| e.to_string())?;
            let jumps = oracle.filtration.jumps_with_multiplicity().map_err(|e| e.to_string())?;
            ensure!(jumps == vec![int(1), int(1), int(3)], "({a1}, 0, {a3}): jumps {jumps:?}");
            // the deformation terms a1·u on the first step and a3·u on the
            // central quotient, against sigma = 1 and sigma = 3/2
            let (_, eq_v) = ascover::modify_cover(&u(&f.one()), &u(&a1), 2, 1, int(1))
                .map_err(|e| e.to_string())?;
            let (_, eq_y) = ascover::modify_cover(&u(&f.one()), &u(&a3), 2, 1, Rational::new(3, 2))
                .map_err(|e| e.to_string())?;
            ensure!(eq_v && eq_y, "({a1}, 0, {a3}) is not equiramified");
            let cv = AsCover::wild(2, u(&(&a1 + &f.one()))).map_err(|e| e.to_string())?;
            let ca = AsCover::wild(2, u(&a3)).map_err(|e| e.to_string())?;
            fibers.push((a1.clone(), a3.clone(), cv, ca));
        }
    }
    let mut pairs = 0u64;
    for i in 0..fibers.len() {
        for j in i + 1..fibers.len() {
            let (a1, a3, cv, ca) = &fibers[i];
            let (b1, b3, dv, da) = &fibers[j];
            let same_v = ascover::is_isomorphic(cv, dv).map_err(|e| e.to_string())?.is_some();
            let same_a = ascover::is_isomorphic(ca, da).map_err(|e| e.to_string())?.is_some();
            ensure!(
                !(same_v && same_a),
                "fibers ({a1}, 0, {a3}) and ({b1}, 0, {b3}) have isomorphic varying steps"
            );
            pairs += 1;
        }
    }
    let upper = ramify_core::ramfilt::RamFiltration::upper(
        8,
        1,
        &[(int(1), 8), (Rational::new(3, 2), 2)],
    );
    let reduced = reduce_sizes(&upper, &[vec![2, 2], vec![2]]).map_err(|e| e.to_string())?;
    let report = dim_bounds(&reduced).map_err(|e| e.to_string())?;
    ensure!(
        report.lower_bound <= 2 && 2 <= report.upper_bound,
        "bounds [{}, {}] miss 2",
        report.lower_bound,
        report.upper_bound
    );
    Ok(vec![
        format!(
            "substitute check: {} fibers with a2 = 0 over F_16, {pairs} pairs non-isomorphic",
            fibers.len()
        ),
        "all equiramified with jumps 1,1,3; bounds [1, 3] contain 2".to_string(),
    ])
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 6] = [
        ("quaternion germ end-to-end", criterion_1, Duration::from_secs(10)),
        ("quaternion family stratification over F_16", criterion_2, Duration::from_secs(60)),
        ("oracle equivalence on single steps", criterion_3, Duration::from_secs(30)),
        ("dimension formulas", criterion_4, Duration::from_secs(10)),
        ("property suites", criterion_5, Duration::from_secs(30)),
        ("two-parameter equiramified family", criterion_6, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(lines) if elapsed <= *budget => ("PASS", lines),
            Ok(mut lines) => {
                lines.push(format!("over the {budget:?} budget"));
                ("FAIL", lines)
            }
            Err(e) => ("FAIL", e.lines().map(str::to_string).collect()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {}: {status} {name} ({:.2} s)", k + 1, elapsed.as_secs_f64());
        for line in detail {
            println!("    {line}");
        }
    }
    if failures > 0 {
        println!("{failures} of 6 criteria failed");
        std::process::exit(1);
    }
    println!("all 6 criteria passed");
}

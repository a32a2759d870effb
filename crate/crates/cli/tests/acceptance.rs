//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use seqspace::attain::{
    attainment_check, make_attaining, na_combine, random_unit, Sampler, ATTAINMENT_TOLERANCE,
};
use seqspace::norms::{axiom_samples, check_axioms, lp_partial, lp_power_sum, OrliczFunction};
use seqspace::spaceability::{
    avoidance_check, c0_samples, check_proposition_conditions, dominant_block,
    embedding_bound_check, lq_samples, random_coefficients, witness_catalog, AvoidanceSet,
    CustomAvoidance, Witness,
};
use seqspace::{
    block_index, block_of, combine, interleave, ComputableSequence, CoordinateSpace, Exponent,
    SpaceDescriptor,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fin(p: f64) -> Exponent {
    Exponent::Finite(p)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lp_witness(p: f64, q: f64) -> Result<Witness, String> {
    let avoid = AvoidanceSet::union_lq(vec![fin(q)]).map_err(|e| e.to_string())?;
    witness_catalog(&SpaceDescriptor::lp(fin(p)), &avoid).map_err(|e| e.reason)
}

fn c0_witness() -> Result<Witness, String> {
    witness_catalog(&SpaceDescriptor::lp(Exponent::Infinity), &AvoidanceSet::C0)
        .map_err(|e| e.reason)
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("{what} took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

fn partition_bijection() -> Check {
    let t = Instant::now();
    for n in 1..=1_000_000u64 {
        let (i, j) = block_of(n);
        let back = block_index(i, j).map_err(|e| e.to_string())?;
        ensure(back == n, || {
            format!("n = {n} maps to ({i}, {j}) and back to {back}")
        })?;
    }
    let e = within(t, Duration::from_secs(1), "round trip")?;
    Ok(format!("n <= 1e6 round-trips in {e:.2?}"))
}

fn axiom_suite() -> Check {
    let mut spaces: Vec<SpaceDescriptor> = [fin(0.5), fin(1.0), fin(2.0), Exponent::Infinity]
        .into_iter()
        .map(SpaceDescriptor::lp)
        .collect();
    for p in [0.5, 1.0, 2.0] {
        for q in [0.5, 1.0, 2.0] {
            spaces.push(SpaceDescriptor::lorentz(p, q).map_err(|e| e.to_string())?);
        }
    }
    for id in ["t", "square", "tlog:1", "tlog:4", "t^3"] {
        spaces.push(SpaceDescriptor::orlicz(
            OrliczFunction::from_id(id).map_err(|e| e.to_string())?,
        ));
    }
    let samples = axiom_samples(20, 7).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for s in &spaces {
        let r = check_axioms(s, &samples, 10_000);
        worst = worst.max(r.max_b1_deviation);
        ensure(r.pass && r.k == 1.0 && r.max_b2_excess <= 0.0, || {
            format!(
                "{}: b1 deviation {:e}, b2 excess {:e}",
                r.space, r.max_b1_deviation, r.max_b2_excess
            )
        })?;
    }
    Ok(format!(
        "{} spaces, 20 samples, depth 1e4, max b1 deviation {worst:.1e}",
        spaces.len()
    ))
}

fn norm_cross_checks() -> Check {
    let t = Instant::now();
    let samples = axiom_samples(100, 11).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for x in &samples {
        for p in [0.5, 1.0, 2.0] {
            let lp = lp_partial(x, fin(p), 1000)
                .map_err(|e| e.to_string())?
                .value;
            let lz = SpaceDescriptor::lorentz(p, p)
                .map_err(|e| e.to_string())?
                .norm(x, 1000)
                .map_err(|e| e.to_string())?
                .value;
            worst = worst.max(rel(lp, lz));
            if p >= 1.0 {
                let m = OrliczFunction::power(p).map_err(|e| e.to_string())?;
                let o = SpaceDescriptor::orlicz(m)
                    .with_tolerance(1e-12)
                    .map_err(|e| e.to_string())?
                    .norm(x, 1000)
                    .map_err(|e| e.to_string())?
                    .value;
                worst = worst.max(rel(lp, o));
            }
        }
    }
    ensure(worst <= 1e-9, || {
        format!("max relative disagreement {worst:e}")
    })?;
    let e = within(t, Duration::from_secs(10), "cross-checks")?;
    Ok(format!(
        "100 sequences, max relative disagreement {worst:.1e}, {e:.2?}"
    ))
}

fn witness_validity() -> Check {
    let mut parts = Vec::new();
    for p in [0.5, 1.0, 2.0] {
        let t = Instant::now();
        let w = lp_witness(p, p / 2.0)?;
        let c = w
            .certify(10_000, 1e3, 100_000_000)
            .map_err(|e| e.to_string())?;
        let d = &c.divergence[0];
        ensure(c.pass && c.membership.value.is_finite(), || {
            format!("p = {p}: {c:?}")
        })?;
        let e = within(t, Duration::from_secs(60), "witness certificate")?;
        let depth = d.certificate.depth().unwrap_or(0);
        parts.push(format!(
            "p={p}: |x|_p <= {:.4}, crossing N={depth} bracket {:?} ({e:.1?})",
            c.membership.value, d.certificate.bracket
        ));
    }
    Ok(parts.join("; "))
}

fn norm_transfer() -> Check {
    let j = 10_000;
    for p in [0.5, 1.0, 2.0] {
        let x0 = lp_witness(p, p / 2.0)?.sequence().clone();
        for i in 1..=5 {
            let y = interleave(&x0, i).map_err(|e| e.to_string())?;
            let matched = block_index(i, j).map_err(|e| e.to_string())?;
            for r in [fin(p / 2.0), fin(p), Exponent::Infinity] {
                let a = lp_partial(&y, r, matched).map_err(|e| e.to_string())?.value;
                let b = lp_partial(&x0, r, j).map_err(|e| e.to_string())?.value;
                ensure(a.to_bits() == b.to_bits(), || {
                    format!("p={p}, i={i}, r={r}: {a} vs {b}")
                })?;
            }
        }
    }
    Ok("bitwise equal for p in {0.5, 1, 2}, r in {q, p, inf}, i <= 5, J = 1e4".into())
}

fn embedding_identity() -> Check {
    let battery = random_coefficients(5, 200, 2024);
    let mut worst: f64 = 0.0;
    for p in [0.5, 1.0, 2.0] {
        let w = lp_witness(p, p / 2.0)?;
        for a in &battery {
            let r = embedding_bound_check(a, &w, 2000).map_err(|e| e.to_string())?;
            let id = r.lp_identity.as_ref().ok_or("missing identity")?;
            worst = worst.max(id.relative_error);
            ensure(id.holds, || {
                format!("p={p}, a={a:?}: relative error {:e}", id.relative_error)
            })?;
            if p == 0.5 {
                ensure(r.stilde == 0.5 && r.inequality_holds, || {
                    format!("s-inequality fails for a={a:?}")
                })?;
            }
        }
    }
    Ok(format!(
        "200 vectors x 3 exponents, max relative error {worst:.1e}; s=1/2 inequality holds"
    ))
}

fn avoidance_scaling() -> Check {
    let mut worst: f64 = 0.0;
    let depth = 10_000;
    for p in [0.5, 1.0, 2.0] {
        let q = p / 2.0;
        let w = lp_witness(p, q)?;
        let x0 = w.sequence().clone();
        let base = lp_power_sum(&x0, q, depth).map_err(|e| e.to_string())?;
        for a in random_coefficients(5, 50, 99) {
            let m = dominant_block(&a).ok_or("no dominant block")?;
            let z = combine(&a, &x0).map_err(|e| e.to_string())?;
            let restricted = z.block_restriction(m).map_err(|e| e.to_string())?;
            let lhs = lp_power_sum(&restricted, q, depth).map_err(|e| e.to_string())?;
            let rhs = a[m as usize - 1].abs().powf(q) * base;
            worst = worst.max(rel(lhs, rhs));
            ensure(rel(lhs, rhs) <= 1e-12, || {
                format!("p={p}, a={a:?}: {lhs} vs {rhs}")
            })?;
            let r = avoidance_check(&a, &w, 10.0, 10_000_000).map_err(|e| e.to_string())?;
            ensure(r.coordinate_identity && r.pass, || {
                format!("p={p}, a={a:?}: {r:?}")
            })?;
        }
    }
    Ok(format!(
        "50 vectors x 3 exponents, max relative error {worst:.1e}; coordinates bitwise"
    ))
}

fn c0_avoidance() -> Check {
    let t = Instant::now();
    let w = c0_witness()?;
    let mut least = u64::MAX;
    for a in random_coefficients(6, 50, 5) {
        let r = avoidance_check(&a, &w, 1.0, 1).map_err(|e| e.to_string())?;
        let s = r.separation.as_ref().ok_or("missing separation")?;
        least = least.min(s.found);
        ensure(r.pass && s.found >= 1000 && s.delta == r.a_m.abs(), || {
            format!("a={a:?}: {s:?}")
        })?;
    }
    let e = within(t, Duration::from_secs(1), "c0 avoidance")?;
    Ok(format!(
        "50 vectors, at least {least} coordinates >= |a_m| each, {e:.2?}"
    ))
}

fn norm_attaining() -> Check {
    let t = Instant::now();
    let mut worst_id: f64 = 0.0;
    let mut worst_l1: f64 = 0.0;
    let mut seed = 0;
    for r in [1.0, 2.0] {
        for q in [1.0, 2.0] {
            seed += 1;
            let domain = CoordinateSpace::new(4, fin(r)).map_err(|e| e.to_string())?;
            let x0 = random_unit(domain, seed).map_err(|e| e.to_string())?;
            let u = make_attaining(&x0, &[1.0, -0.5, 2.0], q).map_err(|e| e.to_string())?;
            let a = &random_coefficients(6, 1, seed)[0];
            let fam = na_combine(a, &u).map_err(|e| e.to_string())?;
            let sampler = Sampler::Sampled {
                samples: 10_000,
                seed,
            };
            let rep = attainment_check(&fam, &x0, sampler, ATTAINMENT_TOLERANCE)
                .map_err(|e| e.to_string())?;
            worst_id = worst_id.max(rep.identity_error);
            worst_l1 = worst_l1.max(rep.l1_error.unwrap_or(f64::INFINITY));
            ensure(rep.pass && rep.l1_error.is_some(), || {
                format!("r={r}, q={q}: {rep:?}")
            })?;
        }
    }
    let e = within(t, Duration::from_secs(10), "attainment")?;
    Ok(format!(
        "d=4, m=6, r,q in {{1,2}}: no sampled violation, identity error {worst_id:.1e}, l1-sum error {worst_l1:.1e}, {e:.2?}"
    ))
}

fn proposition_conditions() -> Check {
    let depth = 10_000;
    let mut tested = 0;
    for q in [0.5, 1.0, 2.0] {
        let avoid = CustomAvoidance::lq(q).map_err(|e| e.to_string())?;
        let samples = lq_samples(q, 50, 3).map_err(|e| e.to_string())?;
        let witness = lp_witness(2.0 * q, q)?.sequence().clone();
        let r = check_proposition_conditions(&avoid, &samples, &witness, depth)
            .map_err(|e| e.to_string())?;
        ensure(r.pass, || {
            format!(
                "l_{q}: i={} ii={} iii={}",
                r.condition_i, r.condition_ii, r.condition_iii
            )
        })?;
        tested += r.samples.len();
    }
    let avoid = CustomAvoidance::c0();
    let samples = c0_samples(50, 3).map_err(|e| e.to_string())?;
    let witness: ComputableSequence = c0_witness()?.sequence().clone();
    let r = check_proposition_conditions(&avoid, &samples, &witness, depth)
        .map_err(|e| e.to_string())?;
    ensure(r.pass, || {
        format!(
            "c0: i={} ii={} iii={}",
            r.condition_i, r.condition_ii, r.condition_iii
        )
    })?;
    tested += r.samples.len();
    Ok(format!(
        "l_q (q = 0.5, 1, 2) and c0 predicates, {tested} samples, conditions (i)-(iii) hold"
    ))
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_seqspace"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_determinism() -> Check {
    // a lower threshold than the default keeps the run short; the scans are the same code path
    let l1 = [
        "construct",
        "--p",
        "1",
        "--gamma",
        "0.5",
        "--m",
        "5",
        "--depth",
        "10000",
        "--threshold",
        "100",
    ];
    let (c1, r1) = run_cli(&l1)?;
    let (c2, r2) = run_cli(&l1)?;
    ensure(c1 == 0 && c2 == 0, || {
        format!("l1 construct exited {c1}, {c2}")
    })?;
    ensure(r1 == r2 && !r1.is_empty(), || {
        "l1 construct reports differ".into()
    })?;
    let (c, _) = run_cli(&["construct", "--p", "2", "--gamma", "2"])?;
    ensure(c == 2, || format!("l2 against l2 exited {c}, expected 2"))?;
    let sup = ["construct", "--p", "inf", "--avoid", "c0", "--m", "3"];
    let (c, r1) = run_cli(&sup)?;
    let (_, r2) = run_cli(&sup)?;
    ensure(c == 0, || {
        format!("l_inf against c0 exited {c}, expected 0")
    })?;
    ensure(r1 == r2, || "l_inf construct reports differ".into())?;
    Ok("byte-identical reports; exit codes 0, 2, 0 on the three construct cases".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("partition bijection", partition_bijection),
        ("axiom suite", axiom_suite),
        ("norm cross-checks", norm_cross_checks),
        ("witness validity", witness_validity),
        ("norm transfer", norm_transfer),
        ("embedding identity", embedding_identity),
        ("avoidance scaling", avoidance_scaling),
        ("c0 avoidance", c0_avoidance),
        ("norm-attaining family", norm_attaining),
        ("proposition conditions", proposition_conditions),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

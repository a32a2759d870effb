use seqspace::attain::{
    attainment_check, make_attaining, na_combine, random_unit, AttainmentPoint, Sampler,
    ATTAINMENT_TOLERANCE,
};
use seqspace::norms::{axiom_samples, check_axioms, OrliczFunction};
use seqspace::spaceability::{
    avoidance_check, build_basis, catalog_listing, coefficient_battery, embedding_bound_check,
    independence_check, witness_catalog, AvoidanceSet, Witness,
};
use seqspace::{block_index, CoordinateSpace, Exponent, SpaceDescriptor};

use crate::args::{AvoidArg, CommandKind, FamilyArg, RunArgs};
use crate::report::{BasisRecord, Record, Unavailable};

/// How a run ended, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Unavailable = 2,
    BadConfig = 3,
}

/// A configuration error: exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

const AXIOM_SAMPLES: u64 = 20;
const SPHERE_SAMPLES: u64 = 10_000;

pub fn space(args: &RunArgs) -> Result<SpaceDescriptor, ConfigError> {
    let s = match args.family {
        FamilyArg::Lp => SpaceDescriptor::lp(args.p.unwrap_or(Exponent::Finite(1.0))),
        FamilyArg::Lorentz => {
            let (Some(Exponent::Finite(p)), Some(Exponent::Finite(q))) = (args.p, args.q) else {
                return bad("lorentz needs finite --p and --q");
            };
            SpaceDescriptor::lorentz(p, q).map_err(|e| ConfigError(e.to_string()))?
        }
        FamilyArg::Orlicz => {
            let Some(id) = &args.orlicz_id else {
                return bad("orlicz needs --orlicz-id");
            };
            SpaceDescriptor::orlicz(
                OrliczFunction::from_id(id).map_err(|e| ConfigError(e.to_string()))?,
            )
        }
    };
    s.with_tolerance(args.tolerance)
        .map_err(|e| ConfigError(e.to_string()))
}

pub fn avoid(args: &RunArgs) -> Result<AvoidanceSet, ConfigError> {
    match (args.avoid, args.gamma.is_empty()) {
        (Some(AvoidArg::C0), true) => Ok(AvoidanceSet::C0),
        (Some(AvoidArg::C0), false) => bad("--gamma cannot be combined with --avoid c0"),
        (_, false) => {
            AvoidanceSet::union_lq(args.gamma.clone()).map_err(|e| ConfigError(e.to_string()))
        }
        (_, true) => bad("give --gamma or --avoid c0"),
    }
}

fn check_common(args: &RunArgs) -> Result<(), ConfigError> {
    if !(args.threshold.is_finite() && args.threshold > 0.0) {
        return bad("--threshold must be positive");
    }
    if args.depth == 0 || args.n_max == 0 {
        return bad("--depth and --n-max must be positive");
    }
    Ok(())
}

fn lookup(args: &RunArgs) -> Result<Result<Witness, Record>, ConfigError> {
    check_common(args)?;
    let space = space(args)?;
    let avoid = avoid(args)?;
    Ok(witness_catalog(&space, &avoid).map_err(|e| {
        Record::Unavailable(Unavailable {
            space: space.name(),
            avoid: avoid.name(),
            reason: e.reason,
            pass: false,
        })
    }))
}

pub type Outcome = anyhow::Result<(Status, Vec<Record>)>;

fn verdict(records: Vec<Record>, pass: bool) -> (Status, Vec<Record>) {
    (if pass { Status::Pass } else { Status::Fail }, records)
}

pub fn run(kind: CommandKind, args: &RunArgs) -> Result<Outcome, ConfigError> {
    match kind {
        CommandKind::Construct => construct(args),
        CommandKind::Certify => certify(args),
        CommandKind::Axioms => axioms(args),
        CommandKind::Catalog => catalog(args),
        CommandKind::Attain => attain(args),
    }
}

fn construct(args: &RunArgs) -> Result<Outcome, ConfigError> {
    if args.m == 0 || args.m as u64 > seqspace::MAX_BLOCK {
        return bad(format!("--m must lie in 1..={}", seqspace::MAX_BLOCK));
    }
    if block_index(args.m as u64, args.depth).is_err() {
        return bad("--depth is too large for --m blocks");
    }
    let w = match lookup(args)? {
        Ok(w) => w,
        Err(rec) => return Ok(Ok((Status::Unavailable, vec![rec]))),
    };
    Ok((|| {
        let basis = build_basis(&w, args.m)?;
        let first_indices = (1..=args.m as u64)
            .map(|i| block_index(i, 1))
            .collect::<seqspace::Result<Vec<_>>>()?;
        let independent = independence_check(&basis, args.depth)?;
        let mut records = vec![Record::Basis(BasisRecord {
            space: w.home().name(),
            avoid: w.avoid().name(),
            m: args.m,
            first_indices,
            independent,
            pass: independent,
        })];
        let mut pass = independent;
        for a in coefficient_battery(args.m, args.random, args.seed) {
            let e = embedding_bound_check(&a, &w, args.depth)?;
            pass &= e.pass;
            records.push(Record::Embedding(e));
            let v = avoidance_check(&a, &w, args.threshold, args.n_max)?;
            pass &= v.pass;
            records.push(Record::Avoidance(v));
        }
        Ok(verdict(records, pass))
    })())
}

fn certify(args: &RunArgs) -> Result<Outcome, ConfigError> {
    let w = match lookup(args)? {
        Ok(w) => w,
        Err(rec) => return Ok(Ok((Status::Unavailable, vec![rec]))),
    };
    Ok((|| {
        let c = w.certify(args.depth, args.threshold, args.n_max)?;
        let pass = c.pass;
        Ok(verdict(vec![Record::Witness(c)], pass))
    })())
}

fn axioms(args: &RunArgs) -> Result<Outcome, ConfigError> {
    if args.depth == 0 {
        return bad("--depth must be positive");
    }
    let space = space(args)?;
    let count = args.samples.unwrap_or(AXIOM_SAMPLES) as usize;
    Ok((|| {
        let samples = axiom_samples(count, args.seed)?;
        let r = check_axioms(&space, &samples, args.depth);
        let pass = r.pass;
        Ok(verdict(vec![Record::Axioms(r)], pass))
    })())
}

fn catalog(args: &RunArgs) -> Result<Outcome, ConfigError> {
    if args.gamma.is_empty() && args.avoid.is_none() {
        let records: Vec<Record> = catalog_listing()
            .iter()
            .map(|w| Record::Catalog(w.catalog_entry()))
            .collect();
        let status = if records.is_empty() {
            Status::Unavailable
        } else {
            Status::Pass
        };
        return Ok(Ok((status, records)));
    }
    Ok(Ok(match lookup(args)? {
        Ok(w) => (Status::Pass, vec![Record::Catalog(w.catalog_entry())]),
        Err(rec) => (Status::Unavailable, vec![rec]),
    }))
}

fn attain(args: &RunArgs) -> Result<Outcome, ConfigError> {
    let q = match args.q.unwrap_or(Exponent::Finite(2.0)) {
        Exponent::Finite(q) if q >= 1.0 => q,
        other => return bad(format!("--q must lie in [1, inf) for attain, got {other}")),
    };
    if matches!(args.r, Exponent::Finite(r) if r < 1.0) {
        return bad("--r must be at least 1");
    }
    if args.d == 0 {
        return bad("--d must be positive");
    }
    if args.a.is_empty() || args.a.iter().all(|&t| t == 0.0) {
        return bad("--a needs a nonzero entry");
    }
    let domain = CoordinateSpace::new(args.d, args.r).map_err(|e| ConfigError(e.to_string()))?;
    let x0 = match &args.x0 {
        Some(v) => AttainmentPoint::new(domain, v.clone()),
        None => random_unit(domain, args.seed),
    }
    .map_err(|e| ConfigError(e.to_string()))?;
    let u = make_attaining(&x0, &args.w, q).map_err(|e| ConfigError(e.to_string()))?;
    let sampler = if args.exact {
        Sampler::Exact
    } else {
        Sampler::Sampled {
            samples: args.samples.unwrap_or(SPHERE_SAMPLES),
            seed: args.seed,
        }
    };
    Ok((|| {
        let fam = na_combine(&args.a, &u)?;
        let r = attainment_check(&fam, &x0, sampler, ATTAINMENT_TOLERANCE)?;
        let pass = r.pass;
        Ok(verdict(vec![Record::Attainment(r)], pass))
    })())
}

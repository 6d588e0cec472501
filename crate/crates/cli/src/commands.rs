use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use lindeberg_core::ext::parse_extended;
use lindeberg_core::verify::constants::{scalar_constants, ESSEEN_TABLE, ROZOVSKII_TABLE};
use lindeberg_core::verify::{
    a1_lower_bound, default_corpus, gamma_star_constants, lower_bound_search, run_corpus, theorem2_corpus,
    theorem2_suite, CorpusSpec, Family, InequalityId, SearchSpec, SUITE_EPS, SUITE_GAMMA,
};
use lindeberg_core::{
    convolve, esseen_fraction, katz_petrov_fraction, kolmogorov_delta, lindeberg_l, osipov_fraction,
    rozovskii_fraction, sup_zl, DiscreteDistribution, Error, FractionParams, GSpec, Lambda, SumContext, M,
};

use crate::args::*;

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;
pub const EXIT_VERIFY: u8 = 5;

/// Maps an error to the documented exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::SupportTooLarge { .. } => EXIT_RESOURCE,
                Error::Parse(_)
                | Error::Io(_)
                | Error::EmptyAtomList
                | Error::InvalidAtom { .. }
                | Error::NonUnitMass { .. }
                | Error::NonZeroMean { .. } => EXIT_PARSE,
                _ => EXIT_CONFIG,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() || cause.downcast_ref::<csv::Error>().is_some() {
            return EXIT_PARSE;
        }
    }
    1
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fraction(a) => fraction(a),
        Command::Delta(a) => delta(a),
        Command::Verify(a) => verify(a),
        Command::Constants => constants(),
        Command::Search(a) => search(a),
        Command::Plot(a) => plot(a),
    }
}

fn number(name: &str, text: &str) -> Result<f64> {
    parse_extended(text).ok_or_else(|| Error::InvalidParameter(format!("--{name}: not a number: {text:?}")).into())
}

/// Infinite values as the string `"inf"`, like the report types.
fn ext(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn load_context(args: &ContextArgs) -> Result<SumContext> {
    let mut dists = Vec::new();
    for path in &args.dists {
        let d = DiscreteDistribution::from_json_file(path).with_context(|| format!("reading {}", path.display()))?;
        dists.push(d);
    }
    if args.n == 0 {
        return Err(Error::InvalidParameter("--n must be at least 1".into()).into());
    }
    let summands = (0..args.n).flat_map(|_| dists.iter().cloned()).collect();
    Ok(SumContext::new(summands)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn fraction(a: FractionArgs) -> Result<ExitCode> {
    let ctx = load_context(&a.context)?;
    let spec = GSpec::parse(&a.g)?;
    let g = spec.resolve(ctx.bn())?;
    let eps = number("eps", &a.eps)?;
    let gamma = number("gamma", &a.gamma)?;
    let p = FractionParams::new(g, eps, gamma)?;

    let mut out = json!({
        "kind": clap::ValueEnum::to_possible_value(&a.kind).map(|v| v.get_name().to_string()),
        "context": ctx.describe(),
        "bn": ctx.bn(),
    });
    let fields = match a.kind {
        FractionKind::Esseen | FractionKind::Rozovskii | FractionKind::SupZl => {
            let v = match a.kind {
                FractionKind::Esseen => esseen_fraction(&ctx, &p),
                FractionKind::Rozovskii => rozovskii_fraction(&ctx, &p),
                _ => sup_zl(&ctx, eps),
            };
            json!({
                "g": spec.to_string(),
                "eps": ext(eps),
                "gamma": ext(gamma),
                "value": v.value,
                "witness": v.witness.to_string(),
                "witness_z": v.witness.z().is_finite().then(|| v.witness.z()),
                "m_term": v.m_term,
                "l_term": v.l_term,
            })
        }
        FractionKind::KatzPetrov => json!({
            "g": spec.to_string(),
            "value": katz_petrov_fraction(&ctx, &p.g)?,
        }),
        FractionKind::Osipov => json!({
            "eps": ext(eps),
            "value": osipov_fraction(&ctx, eps),
            "lindeberg": lindeberg_l(&ctx, eps),
            "third_abs": Lambda(&ctx, eps),
        }),
    };
    if let (Some(o), Some(f)) = (out.as_object_mut(), fields.as_object()) {
        o.extend(f.clone());
    }
    print_json(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn delta(a: DeltaArgs) -> Result<ExitCode> {
    let ctx = load_context(&a.context)?;
    let s = convolve(&ctx, a.prune)?;
    let d = kolmogorov_delta(&s);
    print_json(&json!({
        "context": ctx.describe(),
        "n": ctx.n(),
        "delta": d.delta,
        "dropped_mass": d.uncertainty,
        "argsup": d.argsup,
        "side": d.side,
        "atoms": s.atoms().len(),
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn write_output(path: &Path, write: impl FnOnce(File) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write(file)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let corpus = match &a.corpus {
        Some(path) => Some(CorpusSpec::from_json_file(path).with_context(|| format!("reading {}", path.display()))?),
        None => None,
    };
    let ids = a
        .ids
        .iter()
        .map(|s| s.parse::<InequalityId>())
        .collect::<lindeberg_core::Result<Vec<_>>>()?;

    let mut summary = serde_json::Map::new();
    let mut failed = false;

    if a.only != Some(Suite::Theorem2) {
        let spec = corpus.clone().unwrap_or_else(default_corpus);
        let report = run_corpus(&spec, &ids)?;
        failed |= report.summary.failures > 0;
        let failing: Vec<_> = report.reports.iter().filter(|r| !r.pass).collect();
        summary.insert(
            "corpus".into(),
            json!({ "summary": report.summary, "failures": failing }),
        );
        if let Some(path) = &a.out {
            write_output(path, |file| {
                match a.format {
                    Format::Json => serde_json::to_writer(file, &report)?,
                    Format::Csv => {
                        let mut w = csv::Writer::from_writer(file);
                        for r in &report.reports {
                            w.serialize(r)?;
                        }
                        w.flush()?;
                    }
                }
                Ok(())
            })?;
        }
    }

    if a.only != Some(Suite::Corpus) {
        let spec = corpus.unwrap_or_else(theorem2_corpus);
        let suite = theorem2_suite(&spec.contexts()?, &SUITE_EPS, &SUITE_GAMMA)?;
        failed |= !suite.pass();
        if a.only == Some(Suite::Theorem2) {
            if let Some(path) = &a.out {
                write_output(path, |file| Ok(serde_json::to_writer(file, &suite)?))?;
            }
        }
        summary.insert("theorem2".into(), serde_json::to_value(&suite)?);
    }

    print_json(&summary)?;
    Ok(if failed {
        ExitCode::from(EXIT_VERIFY)
    } else {
        ExitCode::SUCCESS
    })
}

fn constants() -> Result<ExitCode> {
    let g = gamma_star_constants()?;
    let a1 = a1_lower_bound();
    let published: serde_json::Map<String, serde_json::Value> = scalar_constants()
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    print_json(&json!({
        "x0": g.x0,
        "kappa": g.kappa,
        "gamma_star": g.gamma_star,
        "a1_lower": { "x_star": a1.x_star, "value": a1.value },
        "published": published,
        "esseen_table": ESSEEN_TABLE,
        "rozovskii_table": ROZOVSKII_TABLE,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn search(a: SearchArgs) -> Result<ExitCode> {
    let id: InequalityId = a.id.parse()?;
    let family: Family = a.family.parse()?;
    let mut spec = SearchSpec::new(id, GSpec::parse(&a.g)?, family, a.n);
    spec.eps = number("eps", &a.eps)?;
    spec.gamma = number("gamma", &a.gamma)?;
    spec.budget = a.budget;
    spec.restarts = a.restarts;
    spec.seed = a.seed;
    spec.grid = a.grid;
    print_json(&lower_bound_search(&spec)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PlotRow {
    z: f64,
    lindeberg: f64,
    third: f64,
    third_abs: f64,
    z_lindeberg: f64,
    esseen_objective: f64,
}

fn plot(a: PlotArgs) -> Result<ExitCode> {
    let ctx = load_context(&a.context)?;
    let g = GSpec::parse(&a.g)?.resolve(ctx.bn())?;
    let gamma = number("gamma", &a.gamma)?;
    if a.points < 2 {
        return Err(Error::InvalidParameter("--points must be at least 2".into()).into());
    }
    let top = ctx.breakpoints().last().copied().unwrap_or(1.0);
    let zmax = a.zmax.unwrap_or(2.0 * top);
    if !(zmax > 0.0 && zmax.is_finite()) {
        return Err(Error::InvalidParameter(format!("--zmax must be positive, got {zmax}")).into());
    }
    let zmin = zmax * 1e-3;
    let mut zs: Vec<f64> = (0..a.points)
        .map(|i| zmin * (zmax / zmin).powf(i as f64 / (a.points - 1) as f64))
        .collect();
    zs.extend(ctx.breakpoints().iter().filter(|&&b| b <= zmax));
    zs.sort_by(f64::total_cmp);
    zs.dedup();

    let g_bn = g.eval(ctx.bn())?;
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for z in zs {
        let l = lindeberg_l(&ctx, z);
        let m = M(&ctx, z);
        let weight = g.eval(z * ctx.bn())? / g_bn;
        let m_part = if m == 0.0 { 0.0 } else { gamma * m.abs() };
        w.serialize(PlotRow {
            z,
            lindeberg: l,
            third: m,
            third_abs: Lambda(&ctx, z),
            z_lindeberg: z * l,
            esseen_objective: weight / z * (m_part + z * l),
        })?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

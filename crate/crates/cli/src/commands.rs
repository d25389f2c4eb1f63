use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ffsym_core::datasets::{
    make_coeff_from_key, make_mixed_loop, make_strikeout, make_zero_nonzero, Dataset, Representation, SplitSpec,
    StrikeDistance, StrikeVariant, TargetKind, ZeroPolicy,
};
use ffsym_core::eval::{
    curves_to_text, embedding_angles, magnitude_histogram, read_embeddings, relation_curves, Metrics,
};
use ffsym_core::io::{
    fetch_archive, ingest, read_ids, read_predictions, read_truth, write_symbol, ArchiveManifest, HttpFetcher,
    RetryPolicy,
};
use ffsym_core::quad::write_quad;
use ffsym_core::relations::{
    enumerate_instances, generate_instances, read_instances, write_instances, RelationInstance, EXHAUSTIVE_LIMIT,
};
use ffsym_core::{
    builtin_symbol, catalog, count_valid_keys, expand_quad, relation, score_predictions, to_quad, Error, Expansion,
    Relation, Result, SignPosition,
};
use rayon::prelude::*;

use crate::input::{output, read_bytes, read_symbol_arg};
use crate::{Command, DatasetArgs, Policy, Repr, Target, Task, VerifyArgs};

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Count { loop_order } => {
            println!("{}", count_valid_keys(loop_order)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Builtin { loop_order, out } => {
            let mut w = output(&out)?;
            write_symbol(&mut w, &builtin_symbol(loop_order)?)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ingest {
            manifest,
            data_dir,
            offline,
        } => ingest_cmd(&manifest, &data_dir, offline),
        Command::VerifyRelations(args) => verify(args),
        Command::Quad {
            input,
            out,
            loop_order,
            check,
        } => quad_cmd(&input, &out, loop_order, check),
        Command::Dataset(args) => dataset(args),
        Command::Score {
            truth,
            pred,
            test_ids,
            out,
        } => {
            let truth = read_truth(read_bytes(&truth)?.as_slice())?;
            let preds = read_predictions(read_bytes(&pred)?.as_slice())?;
            let ids = match test_ids {
                Some(p) => read_ids(read_bytes(&p)?.as_slice())?,
                None => truth.keys().cloned().collect(),
            };
            let m = score_predictions(&truth, &preds, &ids)?;
            let mut w = output(&out)?;
            writeln!(w, "{}\n{}", Metrics::HEADER, m.to_row())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Curves {
            dir,
            instances,
            truth,
            force_trivial_zeros,
            out,
        } => {
            let instances = read_instances(read_bytes(&instances)?.as_slice())?;
            let loop_order = instances.first().map(|i| i.loop_order());
            let truth = read_symbol_arg(&truth, loop_order)?;
            let rows = relation_curves(&dir, &instances, &truth, force_trivial_zeros)?;
            let mut w = output(&out)?;
            w.write_all(curves_to_text(&rows).as_bytes())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hist { input, width, out } => {
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::InvalidArgument(format!("bin width {width} must be positive")));
            }
            let symbol = read_symbol_arg(&input, None)?;
            let mut w = output(&out)?;
            w.write_all(magnitude_histogram(&symbol, width).to_text().as_bytes())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Angles { input, out } => {
            let rows = read_embeddings(read_bytes(&input)?.as_slice())?;
            let mut w = output(&out)?;
            w.write_all(embedding_angles(&rows)?.to_text().as_bytes())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn ingest_cmd(manifest: &Path, data_dir: &Path, offline: bool) -> Result<ExitCode> {
    let mut manifest = ArchiveManifest::from_file(manifest)?;
    if offline {
        manifest.base_url = None;
    }
    for (path, outcome) in fetch_archive(&manifest, data_dir, &HttpFetcher::new(), RetryPolicy::default())? {
        log::info!("{}: {outcome:?}", path.display());
    }
    let mut status = ExitCode::SUCCESS;
    println!("path\tloop\tnonzero\tzeros_dropped\tdihedral\ttrivial_zeros");
    for (_, report) in ingest(&manifest, data_dir)? {
        let check = |v: Option<ffsym_core::Key>| v.map_or("ok".to_string(), |k| format!("violated:{k}"));
        if report.dihedral_violation.is_some() || report.trivial_zero_violation.is_some() {
            status = ExitCode::FAILURE;
        }
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            report.path.display(),
            report.loop_order,
            report.nonzero,
            report.zeros_dropped,
            check(report.dihedral_violation),
            check(report.trivial_zero_violation)
        );
    }
    Ok(status)
}

enum Count {
    All,
    Sample(usize),
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let count = match args.n.as_str() {
        "all" => Count::All,
        n => Count::Sample(
            n.parse()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| Error::InvalidArgument(format!("--n must be a positive integer or `all`, got {n:?}")))?,
        ),
    };
    let seed = match (&count, args.seed) {
        (Count::Sample(_), None) => {
            return Err(Error::InvalidArgument("sampled verification needs --seed".into()));
        }
        (_, s) => s.unwrap_or(0),
    };
    let truth = match &args.symbol {
        Some(p) => read_symbol_arg(p, Some(args.loop_order))?,
        None if args.loop_order <= 2 => builtin_symbol(args.loop_order)?,
        None => {
            return Err(Error::InvalidArgument(format!(
                "no built-in symbol at loop {}; pass --symbol",
                args.loop_order
            )))
        }
    };
    let relations: Vec<&'static Relation> = match &args.relation {
        Some(name) => vec![relation(name)?],
        None => catalog().iter().collect(),
    };
    if let Count::All = count {
        for rel in &relations {
            let size = ffsym_core::relations::instance_space_size(rel, args.loop_order);
            if size > EXHAUSTIVE_LIMIT {
                return Err(Error::InvalidArgument(format!(
                    "{} has {size} instances at loop {}, above the exhaustive limit of {EXHAUSTIVE_LIMIT}; use --n <count> --seed <s>",
                    rel.name(),
                    args.loop_order
                )));
            }
        }
    }
    let results: Vec<(&'static Relation, Result<(usize, usize, Vec<RelationInstance>)>)> = relations
        .par_iter()
        .map(|rel| {
            let keep = args.instances_out.is_some();
            let r = match count {
                Count::All => enumerate_instances(rel, args.loop_order, EXHAUSTIVE_LIMIT).map(|it| {
                    let mut checked = 0;
                    let mut failed = 0;
                    let mut kept = Vec::new();
                    for inst in it {
                        checked += 1;
                        failed += (inst.residual(&truth) != 0.into()) as usize;
                        if keep {
                            kept.push(inst);
                        }
                    }
                    (checked, failed, kept)
                }),
                Count::Sample(n) => generate_instances(rel, args.loop_order, n, &truth, seed).map(|v| {
                    let failed = v.iter().filter(|i| i.residual(&truth) != 0.into()).count();
                    (v.len(), failed, if keep { v } else { Vec::new() })
                }),
            };
            (*rel, r)
        })
        .collect();
    let mut status = ExitCode::SUCCESS;
    let mut kept = Vec::new();
    println!("relation\tstatus\tinstances\tnonzero_residuals");
    for (rel, r) in results {
        match r {
            Ok((checked, failed, instances)) => {
                let state = if failed == 0 { "ok" } else { "FAIL" };
                if failed > 0 {
                    status = ExitCode::FAILURE;
                }
                println!("{}\t{state}\t{checked}\t{failed}", rel.name());
                kept.extend(instances);
            }
            Err(e @ (Error::NoNonzeroSupport { .. } | Error::InsufficientInstances { .. })) => {
                println!("{}\tskipped:{}\t0\t0", rel.name(), e.class());
                log::warn!("{}: {e}", rel.name());
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(path) = &args.instances_out {
        let mut w = output(&Some(path.clone()))?;
        write_instances(&mut w, &kept)?;
        w.flush()?;
    }
    Ok(status)
}

fn quad_cmd(input: &Path, out: &Option<PathBuf>, loop_order: Option<usize>, check: bool) -> Result<ExitCode> {
    let symbol = read_symbol_arg(input, loop_order)?;
    let quad = to_quad(&symbol)?;
    let stats = quad.stats();
    eprintln!("{} elements -> {} quad entries", symbol.len(), stats.total());
    if check {
        let keys: Vec<_> = symbol.keys().collect();
        let bad = expand_quad(&quad, &keys)
            .into_iter()
            .zip(symbol.iter())
            .filter(|(e, (_, c))| !matches!(e, Expansion::Determined(v) if v == c))
            .count();
        if bad > 0 {
            return Err(Error::InvalidArgument(format!("{bad} coefficients do not round-trip")));
        }
        eprintln!("round trip ok on {} elements", keys.len());
    }
    let mut w = output(out)?;
    write_quad(&mut w, &quad)?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str, task: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("--task {task} needs --{flag}")))
}

fn dataset(args: DatasetArgs) -> Result<ExitCode> {
    let spec = SplitSpec::new(args.train, args.test);
    let mut sets: Vec<(String, Dataset)> = Vec::new();
    match args.task {
        Task::ZeroNonzero => {
            let s = read_symbol_arg(require(&args.input, "in", "zero-nonzero")?, None)?;
            let policy = match args.policy {
                Policy::Uniform => ZeroPolicy::Uniform,
                Policy::Biased => ZeroPolicy::NontrivialBiased,
            };
            let d = make_zero_nonzero(&s, policy, spec, args.seed)?;
            sets.push((format!("zero-nonzero.l{}", s.loop_order()), d));
        }
        Task::Coeff => {
            let s = read_symbol_arg(require(&args.input, "in", "coeff")?, None)?;
            let repr = match args.repr {
                Repr::Full => Representation::Full,
                Repr::Quad => Representation::Quad,
            };
            let target = match args.target {
                Target::Coefficient => TargetKind::Coefficient,
                Target::Magnitude => TargetKind::MagnitudeOnly,
                Target::Sign => TargetKind::SignOnly,
            };
            let pos = if args.sign_last { SignPosition::Last } else { SignPosition::First };
            let d = make_coeff_from_key(&s, repr, target, pos, spec, args.seed)?;
            sets.push((format!("coeff.l{}", s.loop_order()), d));
        }
        Task::Mixed => {
            let lower = read_symbol_arg(require(&args.lower, "lower", "mixed")?, None)?;
            let upper = read_symbol_arg(require(&args.upper, "upper", "mixed")?, None)?;
            if args.train.is_some() {
                return Err(Error::InvalidArgument(
                    "mixed training sizes follow from the lower-loop count; drop --train".into(),
                ));
            }
            let m = make_mixed_loop(&lower, &upper, args.test, args.seed)?;
            let (lo, up) = (lower.loop_order(), upper.loop_order());
            sets.push((format!("mixed.l{lo}"), m.lower));
            sets.push((format!("mixed.l{up}"), m.upper));
            sets.push((format!("mixed.l{lo}+l{up}"), m.merged));
            sets.push((format!("mixed.l{up}-control"), m.control));
        }
        Task::Strikeout => {
            let child = read_symbol_arg(require(&args.input, "in", "strikeout")?, None)?;
            let parent = read_symbol_arg(require(&args.parent, "parent", "strikeout")?, None)?;
            let k: StrikeDistance = args.k.parse()?;
            let variant: StrikeVariant = args.variant.parse()?;
            let d = make_strikeout(&child, &parent, k, variant, spec, args.seed)?;
            sets.push((format!("strikeout.l{}", child.loop_order()), d));
        }
    }
    let single = sets.len() == 1;
    for (default_stem, d) in sets {
        let stem = match &args.stem {
            Some(s) if single => s.clone(),
            Some(s) => format!("{s}.{default_stem}"),
            None => default_stem,
        };
        for path in d.write(&args.out_dir, &stem)? {
            println!("{}", path.display());
        }
        eprintln!("{stem}: train {} test {}", d.train.len(), d.test.len());
    }
    Ok(ExitCode::SUCCESS)
}

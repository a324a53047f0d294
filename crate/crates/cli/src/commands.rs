use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use gdba_core::data::{self, make_toy_fig2};
use gdba_core::detector::DetectorSpec;
use gdba_core::eval::{self, ROBUST_SIGMA_RANGE};
use gdba_core::oracles::{identity_suite, SuiteOptions};
use gdba_core::scoring::write_scores_csv;
use gdba_core::{Dataset, Error};

use crate::config::RunConfig;

pub type CmdResult = Result<bool, Error>;

pub const TOY_DATASET: &str = "toy";

/// Loads one dataset by name: `toy` or a CSV path.
pub fn load_dataset(name: &str, cfg: &RunConfig) -> Result<Dataset, Error> {
    if name == TOY_DATASET {
        return Ok(make_toy_fig2(cfg.params.seed));
    }
    let table = match data::load_csv(name, Some(&cfg.label_column)) {
        Err(Error::MissingLabelColumn(_)) if !cfg.label_required => data::load_csv(name, None),
        other => other,
    }?;
    let table = match cfg.keep_anomalies {
        Some(n) => table.keep_first_anomalies(n)?,
        None => table,
    };
    if cfg.raw {
        Dataset::new(
            table.features().clone(),
            table.labels().map(<[bool]>::to_vec),
        )
    } else {
        Ok(data::standardize(&table))
    }
}

fn dataset_label(name: &str) -> String {
    Path::new(name)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| name.to_owned())
}

fn single_dataset(cfg: &RunConfig) -> Result<Dataset, Error> {
    match cfg.datasets.as_slice() {
        [one] => load_dataset(one, cfg),
        [] => Err(Error::InvalidParameter("--dataset is required".into())),
        _ => Err(Error::InvalidParameter(
            "this command takes exactly one --dataset".into(),
        )),
    }
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn json_sibling(out: &Path) -> PathBuf {
    out.with_extension("json")
}

pub fn cmd_score(cfg: &RunConfig) -> CmdResult {
    let kind = match cfg.detectors.as_slice() {
        [one] => *one,
        _ => {
            return Err(Error::InvalidParameter(
                "score takes exactly one --detector".into(),
            ))
        }
    };
    let data = single_dataset(cfg)?;
    let spec = DetectorSpec::new(kind, &cfg.params)?;
    let scores = spec.score(&data)?;
    let mut out = open_out(cfg.out.as_deref())?;
    write_scores_csv(&scores, data.labels(), &mut out)?;
    out.flush()?;
    if let Some(labels) = data.labels() {
        match eval::auc(&scores, labels) {
            Ok(r) => eprintln!(
                "{}: AUC = {:.4} ({} anomalies, {} normal)",
                spec.label(),
                r.auc,
                r.n_pos,
                r.n_neg
            ),
            Err(Error::SingleClass { .. }) => {
                eprintln!("{}: labels hold a single class, AUC skipped", spec.label())
            }
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

pub fn cmd_sweep(cfg: &RunConfig) -> CmdResult {
    let data = single_dataset(cfg)?;
    let report = eval::sigma_sweep(&data, &cfg.grid, cfg.params.block_size)?;
    let mut out = open_out(cfg.out.as_deref())?;
    report.write_csv(&mut out)?;
    out.flush()?;
    if let Some(path) = &cfg.out {
        report.write_json(BufWriter::new(File::create(json_sibling(path))?))?;
    }
    eprintln!(
        "best sigma = {} (AUC {:.4}) over {} grid points",
        report.best_sigma,
        report.best_auc,
        report.rows.len()
    );
    if let Some(r) = report.robust {
        eprintln!(
            "AUC over sigma in [{}, {}]: {:.4} ± {:.4} ({} points)",
            ROBUST_SIGMA_RANGE.0, ROBUST_SIGMA_RANGE.1, r.mean, r.std, r.count
        );
    }
    Ok(true)
}

pub fn cmd_compare(cfg: &RunConfig) -> CmdResult {
    if cfg.datasets.is_empty() {
        return Err(Error::InvalidParameter("--dataset is required".into()));
    }
    let datasets = cfg
        .datasets
        .iter()
        .map(|name| Ok((dataset_label(name), load_dataset(name, cfg)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let detectors = cfg
        .detectors
        .iter()
        .map(|&kind| DetectorSpec::new(kind, &cfg.params))
        .collect::<Result<Vec<_>, Error>>()?;
    let table = eval::compare(&datasets, &detectors)?;
    let mut out = open_out(cfg.out.as_deref())?;
    table.write_csv(&mut out)?;
    out.flush()?;
    if let Some(path) = &cfg.out {
        table.write_json(BufWriter::new(File::create(json_sibling(path))?))?;
    }
    for avg in &table.average {
        eprintln!("{:<36} avg AUC {:.4}", avg.detector, avg.auc);
    }
    Ok(true)
}

pub fn cmd_verify(seed: u64, inject_fault: bool) -> CmdResult {
    let checks = identity_suite(&SuiteOptions {
        seed,
        inject_asymmetry: inject_fault,
        ..SuiteOptions::default()
    });
    let mut stdout = io::stdout().lock();
    for c in &checks {
        writeln!(stdout, "{c}")?;
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    let ok = failed.is_empty();
    if ok {
        writeln!(stdout, "all {} identities hold", checks.len())?;
    } else {
        eprintln!("failed identities: {}", failed.join(", "));
    }
    Ok(ok)
}

pub fn cmd_toy(seed: u64, out: Option<&Path>) -> CmdResult {
    let toy = make_toy_fig2(seed);
    let table = gdba_core::RawTable::new(
        toy.features().clone(),
        toy.labels().map(<[bool]>::to_vec),
        vec!["x".into(), "y".into()],
    )?;
    let mut w = open_out(out)?;
    data::write_csv(&table, &mut w)?;
    w.flush()?;
    Ok(true)
}

//! `cellfree run | sweep | summarize`.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::campaign::run_campaign;
use crate::config::{CampaignConfig, ThreadCount};
use crate::error::HarnessError;
use crate::io::{read_records, write_json, write_records};
use crate::summary::{aggregate, labels_in_order};

#[derive(Debug, Parser)]
#[command(name = "cellfree", version, about = "Cell-free massive MIMO uplink power control campaigns")]
struct Cli {
    /// Master seed (overrides the configuration).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of drops (overrides the configuration).
    #[arg(long, global = true)]
    drops: Option<u64>,
    /// Worker threads, or "auto" (overrides the configuration).
    #[arg(long, global = true)]
    threads: Option<ThreadCount>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a full campaign and write records.csv, summary.json and runtime.json.
    Run {
        /// JSON configuration; omitted keys take the baseline values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeat a campaign for each value of one parameter.
    Sweep {
        #[arg(long)]
        param: SweepParam,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the summary of an existing records file.
    Summarize {
        #[arg(long)]
        records: PathBuf,
        /// Campaign configuration, needed only for the mean network EE.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the summary here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    /// SE floor, bit/s/Hz; runs the configured methods.
    #[value(name = "s_r")]
    SR,
    /// Fixed cap ν of the max-min EE inner problem.
    #[value(name = "nu")]
    Nu,
}

/// Parses `args` (program name first) and executes; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(path: Option<&Path>, cli: &Cli) -> Result<CampaignConfig, HarnessError> {
    let mut config = match path {
        Some(p) => CampaignConfig::load(p)?,
        None => CampaignConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(drops) = cli.drops {
        config.num_drops = drops;
    }
    if let Some(threads) = cli.threads {
        config.thread_count = threads;
    }
    config.validate()?;
    Ok(config)
}

fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(HarnessError::io(dir))
}

fn campaign_to(config: &CampaignConfig, dir: &Path, stem: &str) -> Result<(), HarnessError> {
    let threads = config.thread_count.resolve()?;
    let output = run_campaign(config, threads)?;
    let suffix = if stem.is_empty() { String::new() } else { format!("_{stem}") };
    write_records(&dir.join(format!("records{suffix}.csv")), &output.records)?;
    write_json(&dir.join(format!("summary{suffix}.json")), &output.summary)?;
    write_json(&dir.join(format!("runtime{suffix}.json")), &output.runtime)?;
    std::fs::write(dir.join(format!("config{suffix}.json")), config.to_json() + "\n")
        .map_err(HarnessError::io(dir))?;
    eprintln!(
        "{} drops on {} threads in {:.1} s -> {}",
        output.runtime.num_drops,
        output.runtime.threads,
        output.runtime.wall_seconds,
        dir.display()
    );
    Ok(())
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match &cli.command {
        Command::Run { config, out } => {
            let config = load_config(config.as_deref(), &cli)?;
            create_dir(out)?;
            campaign_to(&config, out, "")
        }
        Command::Sweep {
            param,
            values,
            config,
            out,
        } => {
            let base = load_config(config.as_deref(), &cli)?;
            let mut runs = Vec::with_capacity(values.len());
            for &v in values {
                let mut c = base.clone();
                let stem = match param {
                    SweepParam::SR => {
                        c.s_r = v;
                        format!("s_r_{v}")
                    }
                    SweepParam::Nu => {
                        c.methods.clear();
                        c.nu_grid = Some(vec![v]);
                        format!("nu_{v}")
                    }
                };
                c.validate()?;
                runs.push((c, stem));
            }
            create_dir(out)?;
            for (c, stem) in &runs {
                campaign_to(c, out, stem)?;
            }
            Ok(())
        }
        Command::Summarize { records, config, out } => {
            let mut rows = read_records(records)?;
            let num_ues = rows.iter().map(|r| r.ue + 1).max().unwrap_or(0);
            if let Some(path) = config {
                // Network EE is not persisted per record; recompute it per (drop, method).
                let config = load_config(Some(path), &cli)?;
                attach_total_ee(&mut rows, &config)?;
            }
            let summary = aggregate(&rows, &labels_in_order(&rows), num_ues)?;
            match out {
                Some(path) => write_json(path, &summary),
                None => {
                    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
                    Ok(())
                }
            }
        }
    }
}

fn attach_total_ee(rows: &mut [crate::DropRecord], config: &CampaignConfig) -> Result<(), HarnessError> {
    use std::collections::BTreeMap;
    let scenario = config.scenario()?;
    let mut groups: BTreeMap<(u64, String), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in rows.iter() {
        let g = groups.entry((r.drop, r.method.clone())).or_default();
        g.0.push(r.se);
        g.1.push(r.q);
    }
    let totals: BTreeMap<(u64, String), f64> = groups
        .into_iter()
        .map(|(key, (se, q))| {
            let ee = cellfree_core::power::total_ee(
                &se,
                &q,
                &scenario.power,
                scenario.geometry.num_aps,
                scenario.geometry.total_antennas(),
            );
            (key, ee)
        })
        .collect();
    for r in rows.iter_mut() {
        r.total_ee = totals.get(&(r.drop, r.method.clone())).copied();
    }
    Ok(())
}

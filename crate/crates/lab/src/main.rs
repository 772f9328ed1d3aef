use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nld_core::dirac::{assemble_dirac, dirac_spectrum, wave_w_norm, DiracReport};
use nld_core::nls::{assemble_nls, nls_report};
use nld_core::numerics::build_grid;
use nld_core::profiles::{charge, profile_residual, solve_profile, write_profile_csv};
use nld_lab::config::{Overrides, ScanConfig};
use nld_lab::scan::{limit_reference, model_of, resolve_grid, run_scan, spectrum_file_name};
use nld_lab::study::{charge_slope, convergence_study, render_convergence_csv};

#[derive(Parser)]
#[command(
    name = "nld-lab",
    version,
    about = "Solitary waves of the 1D Soler model and their spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    /// Comma-separated frequencies.
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<f64>>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to NLD_LAB_JOBS, then the core count.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<ScanConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text =
                    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                ScanConfig::parse(&text).with_context(|| format!("in {}", p.display()))?
            }
            None => ScanConfig::default(),
        };
        cfg.apply(&Overrides {
            k: self.k,
            a: self.a,
            m: self.m,
            omega: self.omega.clone(),
            points: self.n,
            half_width: self.l,
            out: self.out.clone(),
        })?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve profiles and write x,v,u,X,Y tables.
    Profile(Common),
    /// Kernel residuals, VK integral and Λ of the limit operators (default N = 2048, L = 20).
    Nls(Common),
    /// Classified Dirac spectrum at each ω.
    Spectrum(Common),
    /// ω-scan writing scan.csv, timings.csv and per-ω spectra.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Also fit the charge exponent (needs >= 4 geometric points).
        #[arg(long)]
        charge_fit: bool,
    },
    /// Refinement in N and doubling of L at one ω.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Use the zero-amplitude wave.
        #[arg(long)]
        free: bool,
    },
    /// Run all acceptance criteria; nonzero exit if any fails.
    Reproduce {
        #[arg(long, default_value = "reproduce")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Profile(c) => {
            let cfg = c.config()?;
            let model = model_of(&cfg)?;
            fs::create_dir_all(&cfg.out)?;
            for (i, w) in cfg.omegas().into_iter().enumerate() {
                let grid = resolve_grid(&model, w, &cfg.grid, false)?;
                let wave = solve_profile(&model, w, &grid)?;
                let res = profile_residual(&wave);
                let path = cfg
                    .out
                    .join(format!("profile_{}", spectrum_file_name(i, w)));
                let mut f = fs::File::create(&path)?;
                write_profile_csv(&wave, &mut f)?;
                println!(
                    "ω = {w}: Γ = {:.12e}, Q = {:.12e}, first-order residual {:.2e} -> {}",
                    wave.gamma,
                    charge(&wave)?,
                    res.first_order,
                    path.display()
                );
            }
        }
        Command::Nls(c) => {
            let cfg = c.config()?;
            let grid = build_grid(c.l.unwrap_or(20.0), c.n.unwrap_or(2048))?;
            let report = nls_report(&assemble_nls(cfg.k, &grid)?)?;
            let text = serde_json::to_string_pretty(&report)?;
            fs::create_dir_all(&cfg.out)?;
            fs::write(cfg.out.join(format!("nls_k{}.json", cfg.k)), &text)?;
            println!("{text}");
        }
        Command::Spectrum(c) => {
            let cfg = c.config()?;
            let model = model_of(&cfg)?;
            let lambda_ref = if cfg.k >= 3 && cfg.m == 1.0 {
                limit_reference(cfg.k)?
            } else {
                None
            };
            fs::create_dir_all(&cfg.out)?;
            for (i, w) in cfg.omegas().into_iter().enumerate() {
                let grid = resolve_grid(&model, w, &cfg.grid, true)?;
                let wave = solve_profile(&model, w, &grid)?;
                let mut s = dirac_spectrum(&assemble_dirac(&wave, &model, &grid)?)?;
                if let Some(l) = lambda_ref {
                    s = s.with_limit(l);
                }
                let wn = if cfg.m == 1.0 {
                    Some(wave_w_norm(&wave, &model)?)
                } else {
                    None
                };
                let name = spectrum_file_name(i, w);
                let mut f = fs::File::create(cfg.out.join(format!("spectrum_{name}")))?;
                s.write_csv(&mut f)?;
                let text = serde_json::to_string_pretty(&DiracReport::new(&s, wn))?;
                fs::write(
                    cfg.out
                        .join(format!("report_{}", name.replace(".csv", ".json"))),
                    &text,
                )?;
                println!("{text}");
            }
        }
        Command::Scan { common, charge_fit } => {
            let cfg = common.config()?;
            let result = run_scan(&cfg, common.jobs)?;
            for r in result.rows() {
                println!(
                    "ω = {}: Q = {:?}, λ = {:?}, {} ({})",
                    r.omega,
                    r.q,
                    r.lambda_unstable,
                    r.verdict.as_str(),
                    r.status
                );
            }
            if charge_fit {
                let fit = charge_slope(&cfg, common.jobs)?;
                println!(
                    "charge exponent {:.6} (expected {:.6})",
                    fit.slope, fit.expected
                );
                fs::write(
                    cfg.out.join("charge_fit.json"),
                    serde_json::to_string_pretty(&fit)?,
                )?;
            }
            println!("wrote {}", cfg.out.display());
        }
        Command::Converge { common, free } => {
            let cfg = common.config()?;
            let study = convergence_study(&cfg, free)?;
            fs::create_dir_all(&cfg.out)?;
            let csv = render_convergence_csv(&study)?;
            fs::write(cfg.out.join("convergence.csv"), &csv)?;
            fs::write(
                cfg.out.join("convergence.json"),
                serde_json::to_string_pretty(&study)?,
            )?;
            print!("{}", String::from_utf8_lossy(&csv));
            println!("converged: {}", study.converged);
        }
        Command::Reproduce { out } => {
            let criteria = nld_lab::reproduce::reproduce(&out)?;
            let failed = criteria.iter().filter(|c| !c.pass).count();
            println!(
                "{} of {} criteria pass; wrote {}",
                criteria.len() - failed,
                criteria.len(),
                out.display()
            );
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use kida::arith::FactorBudget;
use kida::iwasawa::{
    classify_place, herbrand_ord, kida_lambda, lambda_difference, lambda_via_herbrand,
    IwasawaError, LambdaLedger, TowerSpec,
};
use kida::polymod::{roots, PolyModP};
use kida::rsfamily::{phi5_at_1728_form, Phi5Form};
use kida::search::{
    candidate_filter, find_candidates, find_t, load_or_search, verify_t, SearchError,
    SearchOptions, TStatus, FILTER_VERSION,
};

use args::{Cli, Command, FilterArgs, Format};
use kida_cli::report::{
    FindTReport, HerbrandCheck, KidaReport, LedgerReport, PlaceLine, SexticSplitting, SieveReport,
};

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    CostGuard(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Assumption(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::CostGuard(_) => 3,
            Failure::NotFound(_) => 4,
            Failure::Assumption(_) => 5,
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::CostGuard { .. } => Failure::CostGuard(e.to_string()),
            SearchError::RootNotFound(_) => Failure::NotFound(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<IwasawaError> for Failure {
    fn from(e: IwasawaError) -> Self {
        match e {
            IwasawaError::AssumptionViolation(_) | IwasawaError::DecompositionViolation(_) => {
                Failure::Assumption(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn emit<T: Serialize + std::fmt::Display>(format: Format, report: &T) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let text =
                serde_json::to_string_pretty(report).map_err(|e| Failure::Config(e.to_string()))?;
            println!("{text}");
        }
        Format::Text => print!("{report}"),
    }
    Ok(())
}

fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn search_options(cli: &Cli, filter: &FilterArgs) -> SearchOptions {
    SearchOptions {
        workers: cli.workers,
        admissibility: !filter.no_admissibility,
        phi5_form: filter.phi5.into(),
        ..SearchOptions::default()
    }
}

fn form_name(form: Phi5Form) -> &'static str {
    match form {
        Phi5Form::AsTabulated => "as_tabulated",
        Phi5Form::Symmetrized => "symmetrized",
    }
}

fn cmd_sieve(
    cli: &Cli,
    bound: u64,
    cache: Option<&Path>,
    filter: &FilterArgs,
) -> Result<(), Failure> {
    let opts = search_options(cli, filter);
    let outcome = match cache {
        Some(path) => {
            let (outcome, cached) = load_or_search(path, bound, &opts)?;
            if cached {
                eprintln!(
                    "read {} primes from {}",
                    outcome.primes.len(),
                    path.display()
                );
            }
            outcome
        }
        None => find_candidates(bound, &opts)?,
    };
    let report = SieveReport {
        bound,
        filter_version: FILTER_VERSION,
        admissibility: opts.admissibility,
        phi5_form: form_name(opts.phi5_form).into(),
        primes: outcome.primes,
        stats: outcome.stats,
    };
    emit(cli.format, &report)
}

fn splitting(l: u64, form: Phi5Form) -> Result<SexticSplitting, Failure> {
    let phi = PolyModP::from_bigints(phi5_at_1728_form(form), l)
        .map_err(|e| Failure::Config(e.to_string()))?;
    let roots = roots(&phi);
    let mut shifts: Vec<u64> = roots.iter().map(|&r| (l - r) % l).collect();
    shifts.sort_unstable();
    Ok(SexticSplitting {
        prime: l,
        roots,
        shifts,
    })
}

fn cmd_find_t(
    cli: &Cli,
    primes: &[u64],
    check_t: Option<&num_bigint::BigInt>,
    max_candidates: usize,
    rho_budget: Option<u64>,
    filter: &FilterArgs,
) -> Result<(), Failure> {
    let opts = search_options(cli, filter);
    let mut candidates = Vec::with_capacity(primes.len());
    let mut splittings = Vec::with_capacity(primes.len());
    for &l in primes {
        let c = candidate_filter(l, &opts)?;
        if let Some(cond) = c.first_failure {
            return Err(Failure::Config(format!("{l} fails condition {cond}")));
        }
        candidates.push(c);
        splittings.push(splitting(l, opts.phi5_form)?);
    }
    let mut budget = FactorBudget {
        seed: cli.seed,
        ..FactorBudget::default()
    };
    if let Some(steps) = rho_budget {
        budget.rho_iterations = steps;
    }
    let reports = match check_t {
        Some(t) => vec![verify_t(t, primes, &budget)],
        None => find_t(primes, max_candidates, &budget)?,
    };
    let verified: Vec<String> = reports
        .iter()
        .filter(|r| r.status == TStatus::Verified)
        .map(|r| r.t.to_string())
        .collect();
    let none = verified.is_empty();
    emit(
        cli.format,
        &FindTReport {
            primes: primes.to_vec(),
            candidates,
            splittings,
            reports,
            verified,
        },
    )?;
    if none {
        return Err(Failure::NotFound("no verified parameter".into()));
    }
    Ok(())
}

fn cmd_kida(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let tower: TowerSpec = read_toml(file)?;
    let lambda_l = kida_lambda(&tower)?;
    let herbrand = if tower.degree == tower.p {
        let lambda = lambda_via_herbrand(&tower)?;
        Some(HerbrandCheck {
            ord_p: herbrand_ord(&tower)?,
            lambda,
            agrees: lambda == lambda_l,
        })
    } else {
        None
    };
    let places = tower
        .places
        .iter()
        .map(|w| PlaceLine {
            label: w.label.clone(),
            above: w.above.clone(),
            e: w.e,
            class: classify_place(w),
        })
        .collect();
    emit(
        cli.format,
        &KidaReport {
            p: tower.p,
            degree: tower.degree,
            lambda_k: tower.lambda_k,
            places,
            lambda_l,
            herbrand,
        },
    )
}

fn cmd_ledger(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let ledger: LambdaLedger = read_toml(file)?;
    let d = lambda_difference(&ledger)?;
    let statement = if d.sigma_difference.as_exact() == Some(0) {
        "λ₂ = λ₁".to_string()
    } else {
        format!("λ₂ {}", d.lambda_2)
    };
    emit(
        cli.format,
        &LedgerReport {
            p: ledger.p,
            lambda_1: ledger.lambda_1,
            sigma_difference: d.sigma_difference,
            lambda_2: d.lambda_2,
            imprimitive_lambda: d.imprimitive_lambda,
            statement,
        },
    )
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Failure::Config("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    match &cli.command {
        Command::Sieve {
            bound,
            cache,
            filter,
        } => cmd_sieve(cli, *bound, cache.as_deref(), filter),
        Command::FindT {
            primes,
            check_t,
            max_candidates,
            rho_budget,
            filter,
        } => cmd_find_t(
            cli,
            primes,
            check_t.as_ref(),
            *max_candidates,
            *rho_budget,
            filter,
        ),
        Command::Kida { file } => cmd_kida(cli, file),
        Command::Ledger { file } => cmd_ledger(cli, file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

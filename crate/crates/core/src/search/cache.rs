//! On-disk prime cache.
//!
//! The first line is a header,
//! `# kida-primes bound=<n> filter=<v> admissibility=<on|off> phi5=<form>`,
//! the second records the filter statistics,
//! `# stats examined=<n> [<condition>=<count> ...]`,
//! followed by one decimal prime per line.

use std::fs;
use std::path::Path;

use super::{
    find_candidates, Condition, SearchError, SearchOptions, SearchOutcome, SearchStats,
    FILTER_VERSION,
};
use crate::rsfamily::Phi5Form;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub bound: u64,
    pub filter_version: u32,
    pub admissibility: bool,
    pub phi5_form: Phi5Form,
}

fn form_name(form: Phi5Form) -> &'static str {
    match form {
        Phi5Form::AsTabulated => "as_tabulated",
        Phi5Form::Symmetrized => "symmetrized",
    }
}

impl CacheHeader {
    pub fn for_search(bound: u64, opts: &SearchOptions) -> Self {
        Self {
            bound,
            filter_version: FILTER_VERSION,
            admissibility: opts.admissibility,
            phi5_form: opts.phi5_form,
        }
    }

    pub fn render(&self) -> String {
        format!(
            "# kida-primes bound={} filter={} admissibility={} phi5={}",
            self.bound,
            self.filter_version,
            if self.admissibility { "on" } else { "off" },
            form_name(self.phi5_form),
        )
    }

    pub fn parse(line: &str) -> Result<Self, SearchError> {
        let bad = || SearchError::Cache(format!("malformed cache header {line:?}"));
        let rest = line.strip_prefix("# kida-primes ").ok_or_else(bad)?;
        let mut fields = rest.split(' ');
        let mut next = |key: &str| {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .ok_or_else(bad)
        };
        let bound = next("bound")?.parse().map_err(|_| bad())?;
        let filter_version = next("filter")?.parse().map_err(|_| bad())?;
        let admissibility = match next("admissibility")? {
            "on" => true,
            "off" => false,
            _ => return Err(bad()),
        };
        let phi5_form = match next("phi5")? {
            "as_tabulated" => Phi5Form::AsTabulated,
            "symmetrized" => Phi5Form::Symmetrized,
            _ => return Err(bad()),
        };
        if fields.next().is_some() {
            return Err(bad());
        }
        Ok(Self {
            bound,
            filter_version,
            admissibility,
            phi5_form,
        })
    }
}

pub fn render_cache(header: &CacheHeader, outcome: &SearchOutcome) -> String {
    let mut out = header.render();
    out.push_str(&format!(
        "\n# stats examined={}",
        outcome.stats.primes_examined
    ));
    for (c, n) in &outcome.stats.first_failures {
        out.push_str(&format!(" {c}={n}"));
    }
    out.push('\n');
    for p in &outcome.primes {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

fn parse_stats(line: &str, bound: u64) -> Result<SearchStats, SearchError> {
    let bad = || SearchError::Cache(format!("malformed stats line {line:?}"));
    let rest = line.strip_prefix("# stats ").ok_or_else(bad)?;
    let mut fields = rest.split(' ');
    let examined = fields
        .next()
        .and_then(|f| f.strip_prefix("examined="))
        .and_then(|n| n.parse().ok())
        .ok_or_else(bad)?;
    let mut stats = SearchStats {
        bound,
        primes_examined: examined,
        ..SearchStats::default()
    };
    for field in fields {
        let (name, count) = field.split_once('=').ok_or_else(bad)?;
        let c: Condition = name.parse().map_err(|_| bad())?;
        let n: u64 = count.parse().map_err(|_| bad())?;
        if stats.first_failures.insert(c, n).is_some() {
            return Err(bad());
        }
    }
    Ok(stats)
}

pub fn parse_cache(text: &str) -> Result<(CacheHeader, SearchOutcome), SearchError> {
    let mut lines = text.lines();
    let header = CacheHeader::parse(lines.next().unwrap_or_default())?;
    let mut stats = parse_stats(lines.next().unwrap_or_default(), header.bound)?;
    let primes = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<u64>()
                .map_err(|_| SearchError::Cache(format!("bad prime line {l:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if primes.windows(2).any(|w| w[0] >= w[1]) || primes.last().is_some_and(|&p| p > header.bound) {
        return Err(SearchError::Cache(
            "primes out of order or above bound".into(),
        ));
    }
    let failures: u64 = stats.first_failures.values().sum();
    if failures + primes.len() as u64 != stats.primes_examined {
        return Err(SearchError::Cache("statistics do not add up".into()));
    }
    stats.survivors = primes.len() as u64;
    Ok((header, SearchOutcome { primes, stats }))
}

/// Reads the cache at `path` if its header matches this search, otherwise
/// runs the search and rewrites the file. Also returns whether the result
/// came from the cache.
pub fn load_or_search(
    path: &Path,
    bound: u64,
    opts: &SearchOptions,
) -> Result<(SearchOutcome, bool), SearchError> {
    let wanted = CacheHeader::for_search(bound, opts);
    if let Ok(text) = fs::read_to_string(path) {
        if let Ok((header, outcome)) = parse_cache(&text) {
            if header == wanted {
                return Ok((outcome, true));
            }
        }
    }
    let outcome = find_candidates(bound, opts)?;
    fs::write(path, render_cache(&wanted, &outcome))
        .map_err(|e| SearchError::Cache(format!("{}: {e}", path.display())))?;
    Ok((outcome, false))
}

//! Copermanent survey: group graphs by their bivariate permanent polynomial
//! and report collision statistics plus the colliding families.
//!
//! Grouping always keys on full fingerprint bytes; the 64-bit hash inside
//! [`Fingerprint`] only buckets the map. Reports are deterministic for a
//! given input universe no matter how many workers run the polynomial map:
//! results are aggregated into a map and every emitted list is sorted.

use crate::bipoly::{BiPoly, Fingerprint};
use crate::engine::{self, EngineError};
use crate::enumerate::{self, EnumerateError};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, Write};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Graphs fingerprinted per dispatch batch; permanents for a fixed order
/// cost the same, so plain batching keeps workers busy and memory flat.
const BATCH: usize = 1024;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("graph {graph6:?} has order {found}, survey expects {expected}")]
    OrderMismatch {
        expected: usize,
        found: usize,
        graph6: String,
    },
    #[error("computing the polynomial of {graph6:?}: {source}")]
    Engine { graph6: String, source: EngineError },
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error("checkpoint line {line}: {reason}")]
    Checkpoint { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("report JSON: {0}")]
    Json(String),
}

/// Two or more pairwise non-isomorphic graphs sharing one polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct CopermanentFamily {
    pub fingerprint: Fingerprint,
    /// Canonical graph6 strings, sorted ascending.
    pub members: Vec<String>,
    pub polynomial: BiPoly,
}

/// Survey statistics for one order, plus the colliding families.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyReport {
    pub order: usize,
    pub num_graphs: u64,
    pub num_polynomials: u64,
    pub num_with_mate: u64,
    pub max_family: u64,
    /// Sorted by fingerprint bytes.
    pub families: Vec<CopermanentFamily>,
}

impl SurveyReport {
    /// Fraction of surveyed graphs that have a mate, as a 6-decimal string
    /// (round half to even, computed in integers).
    pub fn fraction_with_mate(&self) -> String {
        fraction_6dp(self.num_with_mate, self.num_graphs)
    }

    /// One CSV row: order and the five survey statistics.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.order,
            self.num_graphs,
            self.num_polynomials,
            self.num_with_mate,
            self.fraction_with_mate(),
            self.max_family
        )
    }

    /// Aligned human-readable table (header plus one row).
    pub fn to_text_table(&self) -> String {
        format!(
            "{:>3} {:>12} {:>12} {:>10} {:>10} {:>11}\n{:>3} {:>12} {:>12} {:>10} {:>10} {:>11}",
            "n",
            "graphs",
            "polynomials",
            "with-mate",
            "frac-mate",
            "max-family",
            self.order,
            self.num_graphs,
            self.num_polynomials,
            self.num_with_mate,
            self.fraction_with_mate(),
            self.max_family
        )
    }

    /// Full report as deterministic pretty-printed JSON.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let dto = ReportDto::from(self);
        let mut bytes = serde_json::to_vec_pretty(&dto).expect("report serialization is infallible");
        bytes.push(b'\n');
        bytes
    }

    /// Parses a report written by [`SurveyReport::to_json_bytes`].
    pub fn from_json_bytes(bytes: &[u8]) -> Result<SurveyReport, SurveyError> {
        let dto: ReportDto =
            serde_json::from_slice(bytes).map_err(|e| SurveyError::Json(e.to_string()))?;
        dto.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct ReportDto {
    order: usize,
    num_graphs: u64,
    num_polynomials: u64,
    num_with_mate: u64,
    fraction_with_mate: String,
    max_family: u64,
    families: Vec<FamilyDto>,
}

#[derive(Serialize, Deserialize)]
struct FamilyDto {
    fingerprint: String,
    polynomial: String,
    coefficients: Vec<(usize, usize, i64)>,
    members: Vec<String>,
}

impl From<&SurveyReport> for ReportDto {
    fn from(r: &SurveyReport) -> Self {
        ReportDto {
            order: r.order,
            num_graphs: r.num_graphs,
            num_polynomials: r.num_polynomials,
            num_with_mate: r.num_with_mate,
            fraction_with_mate: r.fraction_with_mate(),
            max_family: r.max_family,
            families: r
                .families
                .iter()
                .map(|f| FamilyDto {
                    fingerprint: f.fingerprint.to_hex(),
                    polynomial: f.polynomial.format_text_ascii(),
                    coefficients: f.polynomial.terms().collect(),
                    members: f.members.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ReportDto> for SurveyReport {
    type Error = SurveyError;

    fn try_from(dto: ReportDto) -> Result<Self, SurveyError> {
        let families = dto
            .families
            .into_iter()
            .map(|f| {
                let fingerprint = Fingerprint::from_hex(&f.fingerprint)
                    .map_err(|e| SurveyError::Json(e.to_string()))?;
                let mut polynomial = BiPoly::zero(dto.order)
                    .map_err(|e| SurveyError::Json(e.to_string()))?;
                for (i, j, c) in f.coefficients {
                    polynomial.set_coeff(i, j, c);
                }
                if polynomial.fingerprint() != fingerprint {
                    return Err(SurveyError::Json(
                        "fingerprint does not match coefficients".into(),
                    ));
                }
                Ok(CopermanentFamily {
                    fingerprint,
                    members: f.members,
                    polynomial,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SurveyReport {
            order: dto.order,
            num_graphs: dto.num_graphs,
            num_polynomials: dto.num_polynomials,
            num_with_mate: dto.num_with_mate,
            max_family: dto.max_family,
            families,
        })
    }
}

/// `numerator / denominator` rounded half-to-even at six decimals.
pub(crate) fn fraction_6dp(numerator: u64, denominator: u64) -> String {
    if denominator == 0 {
        return "0.000000".to_string();
    }
    let scaled = numerator as u128 * 1_000_000;
    let den = denominator as u128;
    let mut q = scaled / den;
    let r = scaled % den;
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Greater => q += 1,
        std::cmp::Ordering::Equal => q += q & 1,
        std::cmp::Ordering::Less => {}
    }
    format!("{}.{:06}", q / 1_000_000, q % 1_000_000)
}

/// Runs the whole survey: computes every polynomial (in parallel across
/// graphs when built with the `parallel` feature and `workers != 1`),
/// groups by fingerprint bytes, and assembles the report.
///
/// `workers = 0` uses the ambient thread pool; `workers = 1` forces the
/// sequential path; any other value runs a dedicated pool of that size.
/// The report is byte-for-byte identical for every worker setting.
pub fn run_survey<I>(source: I, order: usize, workers: usize) -> Result<SurveyReport, SurveyError>
where
    I: IntoIterator<Item = Graph>,
{
    run_survey_with_checkpoint(source, order, workers, &HashMap::new(), None)
}

/// [`run_survey`] with a resume cache: graphs whose graph6 string appears in
/// `cache` reuse the stored fingerprint, and every newly computed pair is
/// appended to `sink` as a checkpoint line before the report is built.
pub fn run_survey_with_checkpoint<I>(
    source: I,
    order: usize,
    workers: usize,
    cache: &HashMap<String, Fingerprint>,
    mut sink: Option<&mut dyn Write>,
) -> Result<SurveyReport, SurveyError>
where
    I: IntoIterator<Item = Graph>,
{
    let exec = Exec::new(workers);
    let mut groups: HashMap<Fingerprint, Vec<String>> = HashMap::new();
    let mut batch: Vec<(String, Graph)> = Vec::with_capacity(BATCH);
    let mut source = source.into_iter();

    loop {
        batch.clear();
        for g in source.by_ref().take(BATCH) {
            let g6 = g.to_graph6();
            if g.order() != order {
                return Err(SurveyError::OrderMismatch {
                    expected: order,
                    found: g.order(),
                    graph6: g6,
                });
            }
            batch.push((g6, g));
        }
        if batch.is_empty() {
            break;
        }
        let fps = fingerprint_batch(&batch, cache, &exec)?;
        for ((g6, _), (fp, fresh)) in batch.iter().zip(fps) {
            if fresh {
                if let Some(w) = sink.as_deref_mut() {
                    writeln!(w, "{}\t{}", g6, fp.to_hex())?;
                }
            }
            groups.entry(fp).or_default().push(g6.clone());
        }
    }

    if let Some(w) = sink.as_deref_mut() {
        w.flush()?;
    }
    assemble_report(order, groups)
}

/// How the polynomial map runs: sequentially, on the ambient rayon pool, or
/// on a dedicated pool of a requested size.
enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Ambient,
    #[cfg(feature = "parallel")]
    Pool(Box<rayon::ThreadPool>),
}

impl Exec {
    fn new(workers: usize) -> Exec {
        #[cfg(feature = "parallel")]
        {
            match workers {
                1 => Exec::Sequential,
                0 => Exec::Ambient,
                w => Exec::Pool(Box::new(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(w)
                        .build()
                        .expect("building a rayon pool"),
                )),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = workers;
            Exec::Sequential
        }
    }
}

/// Fingerprints one batch, consulting the resume cache first. The returned
/// flag marks fingerprints that were actually computed (not cache hits).
fn fingerprint_batch(
    batch: &[(String, Graph)],
    cache: &HashMap<String, Fingerprint>,
    exec: &Exec,
) -> Result<Vec<(Fingerprint, bool)>, SurveyError> {
    let one = |(g6, g): &(String, Graph)| -> Result<(Fingerprint, bool), SurveyError> {
        if let Some(fp) = cache.get(g6) {
            return Ok((fp.clone(), false));
        }
        let poly = engine::bivariate_permanent(g).map_err(|source| SurveyError::Engine {
            graph6: g6.clone(),
            source,
        })?;
        Ok((poly.fingerprint(), true))
    };

    match exec {
        Exec::Sequential => batch.iter().map(one).collect(),
        #[cfg(feature = "parallel")]
        Exec::Ambient => batch.par_iter().map(one).collect(),
        #[cfg(feature = "parallel")]
        Exec::Pool(pool) => pool.install(|| batch.par_iter().map(one).collect()),
    }
}

fn assemble_report(
    order: usize,
    groups: HashMap<Fingerprint, Vec<String>>,
) -> Result<SurveyReport, SurveyError> {
    let num_graphs: u64 = groups.values().map(|m| m.len() as u64).sum();
    let num_polynomials = groups.len() as u64;
    let max_family = groups.values().map(|m| m.len() as u64).max().unwrap_or(0);

    let mut num_with_mate = 0u64;
    let mut families = Vec::new();
    for (fp, raw_members) in groups {
        if raw_members.len() < 2 {
            continue;
        }
        num_with_mate += raw_members.len() as u64;
        let mut members = raw_members
            .into_iter()
            .map(|g6| {
                let g = Graph::from_graph6(&g6).expect("member strings come from to_graph6");
                Ok(enumerate::canonical_form(&g)?.canonical_g6)
            })
            .collect::<Result<Vec<_>, SurveyError>>()?;
        members.sort();
        let polynomial = BiPoly::from_fingerprint_bytes(fp.bytes())
            .expect("fingerprints produced by the engine parse back");
        families.push(CopermanentFamily {
            fingerprint: fp,
            members,
            polynomial,
        });
    }
    families.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));

    Ok(SurveyReport {
        order,
        num_graphs,
        num_polynomials,
        num_with_mate,
        max_family,
        families,
    })
}

/// Writes checkpoint lines `graph6 TAB fingerprint-hex` for each pair.
pub fn write_checkpoint<'a, W, I>(pairs: I, mut sink: W) -> std::io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a str, &'a Fingerprint)>,
{
    for (g6, fp) in pairs {
        writeln!(sink, "{}\t{}", g6, fp.to_hex())?;
    }
    sink.flush()
}

/// Reads checkpoint lines back into `(graph6, fingerprint)` pairs,
/// validating that each fingerprint parses as a polynomial.
pub fn read_checkpoint<R: BufRead>(source: R) -> Result<Vec<(String, Fingerprint)>, SurveyError> {
    let mut pairs = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| SurveyError::Checkpoint {
            line: line_no,
            reason: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (g6, hex) = line.split_once('\t').ok_or_else(|| SurveyError::Checkpoint {
            line: line_no,
            reason: "expected `graph6 TAB fingerprint-hex`".into(),
        })?;
        let fp = Fingerprint::from_hex(hex).map_err(|e| SurveyError::Checkpoint {
            line: line_no,
            reason: e.to_string(),
        })?;
        BiPoly::from_fingerprint_bytes(fp.bytes()).map_err(|e| SurveyError::Checkpoint {
            line: line_no,
            reason: e.to_string(),
        })?;
        pairs.push((g6.to_string(), fp));
    }
    Ok(pairs)
}

/// Runs `f` inside a worker pool of the requested size when the `parallel`
/// feature is enabled. `workers = 0` keeps the ambient pool; without the
/// feature, `f` simply runs on the calling thread.
pub fn with_worker_pool<T>(workers: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("building a rayon pool");
            return pool.install(f);
        }
    }
    let _ = workers;
    f()
}

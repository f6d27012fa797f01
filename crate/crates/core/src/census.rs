//! End-to-end census runs: exhaustive height-by-height enumeration of a
//! population (weighted projective points or Drinfeld modules), filtered by
//! reduction conditions, compared against the predicted asymptotics, and
//! serialized as CSV or JSON reports.
//!
//! Reports carry exact integers and exact fractions; the decimal columns
//! are renderings of those exact values, so a report round-trips through
//! its serialized form without loss.

use std::str::FromStr;

use num::{BigInt, BigRational, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::asymptotics::{kappa_drinfeld_everywhere, kappa_drinfeld_finite, kappa_wps,
    AsymptoticPrediction, CurveParams};
use crate::drinfeld::{
    drinfeld_weights, everywhere_stable_geq_excluding, satisfies, DrinfeldModule, LocalCondition,
    ReductionType,
};
use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::polyfq::{enumerate_polys, Prime};
use crate::text::decimal_string;
use crate::wps::{self, WeightVector};

/// Number of decimal digits in the rendered ratio/density columns.
pub const REPORT_DECIMAL_DIGITS: usize = 12;

/// What is being counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Population {
    /// Isomorphism classes of rank-r Drinfeld modules.
    DrinfeldRank(u32),
    /// Points of P(w)(F_q(T)).
    Weights(WeightVector),
}

/// A census request: count the population at each height b in the range,
/// restricted by local conditions.
#[derive(Clone, Debug)]
pub struct CensusQuery {
    pub field: Field,
    pub population: Population,
    pub b_min: u32,
    pub b_max: u32,
    /// Reduction conditions at distinct finite primes (Drinfeld only).
    pub conditions: Vec<(Prime, LocalCondition)>,
    /// Require stable rank ≥ s at every prime outside the condition set
    /// (Drinfeld only).
    pub everywhere_min_rank: Option<u32>,
    pub max_work_log2: f64,
}

impl CensusQuery {
    pub fn new(field: Field, population: Population, b_min: u32, b_max: u32) -> CensusQuery {
        CensusQuery {
            field,
            population,
            b_min,
            b_max,
            conditions: Vec::new(),
            everywhere_min_rank: None,
            max_work_log2: wps::DEFAULT_MAX_WORK_LOG2,
        }
    }

    fn weights(&self) -> Result<WeightVector> {
        match &self.population {
            Population::DrinfeldRank(r) => drinfeld_weights(self.field.q(), *r),
            Population::Weights(w) => Ok(w.clone()),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.b_min > self.b_max {
            return Err(Error::invalid("empty height range"));
        }
        match &self.population {
            Population::Weights(_) => {
                if !self.conditions.is_empty() || self.everywhere_min_rank.is_some() {
                    return Err(Error::invalid(
                        "reduction conditions only apply to Drinfeld populations",
                    ));
                }
            }
            Population::DrinfeldRank(r) => {
                for (p, c) in &self.conditions {
                    if p.field() != &self.field {
                        return Err(Error::invalid(format!(
                            "condition prime {p} lives in {}, query in {}",
                            p.field(),
                            self.field
                        )));
                    }
                    c.validate(*r)?;
                }
                if let Some(s) = self.everywhere_min_rank {
                    if s < 1 || s >= *r {
                        return Err(Error::RankOutOfRange { s, r: *r });
                    }
                }
            }
        }
        Ok(())
    }

    /// The asymptotic prediction this query is tested against.
    pub fn prediction(&self) -> Result<AsymptoticPrediction> {
        self.validate()?;
        let q = self.field.q();
        match &self.population {
            Population::Weights(w) => kappa_wps(&CurveParams::rational(q), w, &[]),
            Population::DrinfeldRank(r) => match self.everywhere_min_rank {
                Some(s) => kappa_drinfeld_everywhere(q, *r, s, &self.conditions),
                None => kappa_drinfeld_finite(q, *r, &self.conditions),
            },
        }
    }
}

/// One prediction evaluation: predicted count at an exponent candidate and
/// the exact ratio of the observed count to it.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionCell {
    pub exponent: u64,
    pub predicted: BigRational,
    pub ratio: BigRational,
}

/// One height slice of a census.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusRow {
    pub b: u32,
    /// Members of the population satisfying all conditions.
    pub exact_count: BigInt,
    /// Size of the whole population at this height.
    pub population_count: BigInt,
    /// exact/population when the population is nonempty.
    pub empirical_density: Option<BigRational>,
    pub predictions: Vec<PredictionCell>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
}

fn population_filter(
    query: &CensusQuery,
    phi: &DrinfeldModule,
    exclude: &[Prime],
) -> Result<bool> {
    for (p, c) in &query.conditions {
        if !satisfies(phi, p, *c)? {
            return Ok(false);
        }
    }
    if let Some(s) = query.everywhere_min_rank {
        if !everywhere_stable_geq_excluding(phi, s, exclude)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Run a census.  Parallelism (over the rayon pool in scope) partitions on
/// the first coordinate, so the outcome is identical for any worker count.
pub fn run_census(query: &CensusQuery) -> Result<CensusReport> {
    query.validate()?;
    let w = query.weights()?;
    let prediction = query.prediction()?;
    let exclude: Vec<Prime> = query.conditions.iter().map(|(p, _)| p.clone()).collect();
    let mut rows = Vec::new();
    for b in query.b_min..=query.b_max {
        wps::check_work(&query.field, &w, b, query.max_work_log2)?;
        let outer = wps::outer_polys(&query.field, &w, b)?;
        let slice_counts: Vec<Result<(u64, u64)>> = outer
            .par_iter()
            .map(|x0| {
                let pts = wps::enumerate_with_outer(&query.field, &w, b, x0)?;
                let mut population = 0u64;
                let mut exact = 0u64;
                for pt in pts {
                    match &query.population {
                        Population::Weights(_) => {
                            population += 1;
                            exact += 1;
                        }
                        Population::DrinfeldRank(_) => {
                            if pt.coords().last().unwrap().is_zero() {
                                continue;
                            }
                            population += 1;
                            let phi = DrinfeldModule::from_point(pt);
                            if population_filter(query, &phi, &exclude)? {
                                exact += 1;
                            }
                        }
                    }
                }
                Ok((population, exact))
            })
            .collect();
        let mut population_count = BigInt::zero();
        let mut exact_count = BigInt::zero();
        for c in slice_counts {
            let (p, e) = c?;
            population_count += p;
            exact_count += e;
        }
        let empirical_density = if population_count.is_zero() {
            None
        } else {
            Some(BigRational::new(
                exact_count.clone(),
                population_count.clone(),
            ))
        };
        let predictions = prediction
            .exponent_candidates()
            .into_iter()
            .filter_map(|e| {
                prediction.predicted_at(b, e).map(|predicted| PredictionCell {
                    exponent: e,
                    ratio: BigRational::from(exact_count.clone()) / &predicted,
                    predicted,
                })
            })
            .collect();
        rows.push(CensusRow {
            b,
            exact_count,
            population_count,
            empirical_density,
            predictions,
        });
    }
    Ok(CensusReport { rows })
}

// ---------------------------------------------------------------------------
// Residue oracle
// ---------------------------------------------------------------------------

/// Independent check of the local density factors: enumerate all
/// N(p)^r residue tuples (g_1, ..., g_r) mod p, classify each by
/// s = max { i : g_i ≠ 0 }, and return the proportion satisfying the
/// condition.  Must equal [`LocalCondition::kappa`] exactly.
pub fn residue_density_oracle(
    field: &Field,
    p: &Prime,
    r: u32,
    c: LocalCondition,
) -> Result<BigRational> {
    c.validate(r)?;
    let norm = p.norm();
    let total_bits = r as f64 * (norm as f64).log2();
    if total_bits > 22.0 {
        return Err(Error::WorkLimit {
            needed: total_bits,
            bound: 22.0,
        });
    }
    let residues: Vec<bool> = enumerate_polys(field, p.degree() as i64 - 1)?
        .map(|g| g.is_zero())
        .collect();
    debug_assert_eq!(residues.len() as u64, norm);
    let total = norm.pow(r);
    let mut hits = 0u64;
    for mut idx in 0..total {
        let mut s = None;
        for i in (1..=r).rev() {
            let digit = (idx % norm) as usize;
            idx /= norm;
            // Digits are consumed from g_r downward.
            if s.is_none() && !residues[digit] {
                s = Some(i);
            }
        }
        let t = match s {
            Some(s) => ReductionType::Stable(s),
            None => ReductionType::Unstable,
        };
        if c.matches(t, r)? {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

// ---------------------------------------------------------------------------
// Convergence diagnostics
// ---------------------------------------------------------------------------

/// Convergence data for one height: the observed growth increment
/// log_q(count(b)/count(b-1)) and the ratio to each prediction.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub b: u32,
    pub exact_count: BigInt,
    /// log_q of the count increase from the previous row, when defined.
    pub log_q_increment: Option<f64>,
    pub ratios: Vec<(u64, BigRational)>,
}

/// Growth diagnostics from a finished report.
pub fn convergence_table(q: u64, report: &CensusReport) -> Vec<ConvergenceRow> {
    let logq = (q as f64).ln();
    report
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let log_q_increment = if i == 0 {
                None
            } else {
                let num = row.exact_count.to_f64().unwrap_or(0.0);
                let den = report.rows[i - 1].exact_count.to_f64().unwrap_or(0.0);
                (num > 0.0 && den > 0.0).then(|| (num / den).ln() / logq)
            };
            ConvergenceRow {
                b: row.b,
                exact_count: row.exact_count.clone(),
                log_q_increment,
                ratios: row
                    .predictions
                    .iter()
                    .map(|c| (c.exponent, c.ratio.clone()))
                    .collect(),
            }
        })
        .collect()
}

/// Pick the exponent candidate closest to the last observed growth
/// increment, provided it is within `tolerance`.
pub fn adjudicate_exponent(
    table: &[ConvergenceRow],
    candidates: &[u64],
    tolerance: f64,
) -> Option<u64> {
    let last = table.iter().rev().find_map(|r| r.log_q_increment)?;
    candidates
        .iter()
        .copied()
        .map(|c| (c, (c as f64 - last).abs()))
        .filter(|&(_, d)| d <= tolerance)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, _)| c)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str = "b,exact_count,population_count,predicted_num,predicted_den,\
exponent_used,ratio_decimal,empirical_density_decimal";

impl CensusReport {
    /// One CSV line per (height, exponent candidate); heights without an
    /// evaluable prediction emit a single line with empty prediction
    /// columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let empirical = row
                .empirical_density
                .as_ref()
                .map(|d| decimal_string(d, REPORT_DECIMAL_DIGITS))
                .unwrap_or_default();
            if row.predictions.is_empty() {
                out.push_str(&format!(
                    "{},{},{},,,,,{}\n",
                    row.b, row.exact_count, row.population_count, empirical
                ));
                continue;
            }
            for cell in &row.predictions {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    row.b,
                    row.exact_count,
                    row.population_count,
                    cell.predicted.numer(),
                    cell.predicted.denom(),
                    cell.exponent,
                    decimal_string(&cell.ratio, REPORT_DECIMAL_DIGITS),
                    empirical,
                ));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<CensusReport> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            _ => return Err(Error::parse("missing census CSV header")),
        }
        let mut rows: Vec<CensusRow> = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 8 {
                return Err(Error::parse(format!("bad census CSV line: {line:?}")));
            }
            let b: u32 = cols[0]
                .parse()
                .map_err(|_| Error::parse(format!("bad height in {line:?}")))?;
            let exact_count = parse_bigint(cols[1])?;
            let population_count = parse_bigint(cols[2])?;
            let cell = if cols[3].is_empty() {
                None
            } else {
                let predicted =
                    BigRational::new(parse_bigint(cols[3])?, parse_bigint(cols[4])?);
                let exponent: u64 = cols[5]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad exponent in {line:?}")))?;
                Some(PredictionCell {
                    exponent,
                    ratio: BigRational::from(exact_count.clone()) / &predicted,
                    predicted,
                })
            };
            match rows.last_mut() {
                Some(last) if last.b == b => {
                    if last.exact_count != exact_count
                        || last.population_count != population_count
                    {
                        return Err(Error::parse(format!(
                            "inconsistent counts for height {b}"
                        )));
                    }
                    last.predictions.extend(cell);
                }
                _ => {
                    let empirical_density = if population_count.is_zero() {
                        None
                    } else {
                        Some(BigRational::new(
                            exact_count.clone(),
                            population_count.clone(),
                        ))
                    };
                    rows.push(CensusRow {
                        b,
                        exact_count,
                        population_count,
                        empirical_density,
                        predictions: cell.into_iter().collect(),
                    });
                }
            }
        }
        Ok(CensusReport { rows })
    }

    /// JSON mirror of the CSV: an array of per-line objects.
    pub fn to_json(&self) -> serde_json::Value {
        let mut lines = Vec::new();
        for row in &self.rows {
            let empirical = row
                .empirical_density
                .as_ref()
                .map(|d| decimal_string(d, REPORT_DECIMAL_DIGITS));
            if row.predictions.is_empty() {
                lines.push(serde_json::json!({
                    "b": row.b,
                    "exact_count": row.exact_count.to_string(),
                    "population_count": row.population_count.to_string(),
                    "empirical_density_decimal": empirical,
                }));
                continue;
            }
            for cell in &row.predictions {
                lines.push(serde_json::json!({
                    "b": row.b,
                    "exact_count": row.exact_count.to_string(),
                    "population_count": row.population_count.to_string(),
                    "predicted_num": cell.predicted.numer().to_string(),
                    "predicted_den": cell.predicted.denom().to_string(),
                    "exponent_used": cell.exponent,
                    "ratio_decimal": decimal_string(&cell.ratio, REPORT_DECIMAL_DIGITS),
                    "empirical_density_decimal": empirical,
                }));
            }
        }
        serde_json::Value::Array(lines)
    }

    pub fn from_json(text: &str) -> Result<CensusReport> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("census JSON: {e}")))?;
        let lines = v
            .as_array()
            .ok_or_else(|| Error::parse("census JSON must be an array"))?;
        let mut rows: Vec<CensusRow> = Vec::new();
        for line in lines {
            let b = line
                .get("b")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::parse("census line needs \"b\""))? as u32;
            let exact_count = parse_bigint(str_field(line, "exact_count")?)?;
            let population_count = parse_bigint(str_field(line, "population_count")?)?;
            let cell = match line.get("predicted_num") {
                None => None,
                Some(_) => {
                    let predicted = BigRational::new(
                        parse_bigint(str_field(line, "predicted_num")?)?,
                        parse_bigint(str_field(line, "predicted_den")?)?,
                    );
                    let exponent = line
                        .get("exponent_used")
                        .and_then(|x| x.as_u64())
                        .ok_or_else(|| Error::parse("census line needs \"exponent_used\""))?;
                    Some(PredictionCell {
                        exponent,
                        ratio: BigRational::from(exact_count.clone()) / &predicted,
                        predicted,
                    })
                }
            };
            match rows.last_mut() {
                Some(last) if last.b == b => last.predictions.extend(cell),
                _ => {
                    let empirical_density = if population_count.is_zero() {
                        None
                    } else {
                        Some(BigRational::new(
                            exact_count.clone(),
                            population_count.clone(),
                        ))
                    };
                    rows.push(CensusRow {
                        b,
                        exact_count,
                        population_count,
                        empirical_density,
                        predictions: cell.into_iter().collect(),
                    });
                }
            }
        }
        Ok(CensusReport { rows })
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::parse(format!("bad integer {s:?}")))
}

fn str_field<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a str> {
    v.get(key)
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::parse(format!("census line needs \"{key}\"")))
}

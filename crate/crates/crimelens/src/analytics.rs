//! Crime aggregation and the occurrence score.
//!
//! Crime-categorized documents are counted into a dense cube `C(year,
//! month, zone)` keyed by publish month and resolved district. Four
//! marginals come straight off the cube:
//!
//! ```text
//! C_ZM = Σ_years C(y, month, zone)          crimes in the zone that month
//! C_TM = Σ_years Σ_zones C(y, month, z)     crimes everywhere that month
//! C_Z  = Σ_years Σ_months C(y, m, zone)     crimes in the zone overall
//! C_T  = grand total
//! ```
//!
//! and the occurrence score for (zone, month) is
//! `P_ZM = (C_ZM/C_TM) · (C_Z/C_T)` when all four counts are positive,
//! otherwise 0. The product does not sum to 1 across zones, so it is
//! reported as a score, not a distribution.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::corpus::Document;

/// Zone label for crime documents whose district could not be resolved.
/// Counted in the cube (so the grand total covers every contributing
/// document) but excluded from ranking and prediction.
pub const UNKNOWN_ZONE: &str = "unknown";

pub const MONTHS: u32 = 12;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("unknown zone {0:?}")]
    UnknownZone(String),
    #[error("month {0} is outside 1..=12")]
    BadMonth(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZoneLevel {
    #[default]
    District,
    Thana,
}

#[derive(Debug, Clone)]
pub struct CubeOptions {
    pub zone_level: ZoneLevel,
    /// Category label that marks a crime story.
    pub crime_category: String,
}

impl Default for CubeOptions {
    fn default() -> Self {
        CubeOptions {
            zone_level: ZoneLevel::District,
            crime_category: "crime".to_string(),
        }
    }
}

/// Dense (year, month, zone) count cube.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrimeCube {
    years: Vec<i32>,
    zones: Vec<String>,
    /// Row-major: `counts[(year_idx * 12 + month-1) * zones + zone_idx]`.
    counts: Vec<u64>,
}

impl CrimeCube {
    /// Build directly from axes and counts; `counts.len()` must equal
    /// `years.len() * 12 * zones.len()`.
    pub fn from_counts(years: Vec<i32>, zones: Vec<String>, counts: Vec<u64>) -> CrimeCube {
        assert_eq!(
            counts.len(),
            years.len() * MONTHS as usize * zones.len(),
            "cube dimensions do not match the count array"
        );
        CrimeCube { years, zones, counts }
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn zones(&self) -> &[String] {
        &self.zones
    }

    fn index(&self, year_idx: usize, month: u32, zone_idx: usize) -> usize {
        (year_idx * MONTHS as usize + (month as usize - 1)) * self.zones.len() + zone_idx
    }

    pub fn get(&self, year_idx: usize, month: u32, zone_idx: usize) -> u64 {
        self.counts[self.index(year_idx, month, zone_idx)]
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn zone_index(&self, zone: &str) -> Result<usize, AnalyticsError> {
        self.zones
            .iter()
            .position(|z| z == zone)
            .ok_or_else(|| AnalyticsError::UnknownZone(zone.to_string()))
    }
}

/// Aggregate crime-labeled documents into a cube. Each contributing
/// document increments exactly one cell: its publish (year, month) and its
/// resolved zone, or [`UNKNOWN_ZONE`] when unresolved.
pub fn build_cube(docs: &[Document], options: &CubeOptions) -> CrimeCube {
    use chrono::Datelike;

    let zone_of = |doc: &Document| -> String {
        let resolved = doc.location.as_ref();
        let name = match options.zone_level {
            ZoneLevel::District => resolved.and_then(|l| l.district.as_ref()),
            ZoneLevel::Thana => resolved.and_then(|l| l.thana.as_ref()),
        };
        name.map(|l| l.name.clone())
            .unwrap_or_else(|| UNKNOWN_ZONE.to_string())
    };

    let contributing: Vec<(&Document, String)> = docs
        .iter()
        .filter(|d| d.category.as_deref() == Some(options.crime_category.as_str()))
        .map(|d| (d, zone_of(d)))
        .collect();

    let mut years: Vec<i32> = contributing
        .iter()
        .map(|(d, _)| d.published_day.year())
        .collect();
    years.sort_unstable();
    years.dedup();

    let mut zones: Vec<String> = contributing
        .iter()
        .map(|(_, z)| z.clone())
        .filter(|z| z != UNKNOWN_ZONE)
        .collect();
    zones.sort_unstable();
    zones.dedup();
    if contributing.iter().any(|(_, z)| z == UNKNOWN_ZONE) {
        zones.push(UNKNOWN_ZONE.to_string());
    }

    let mut cube = CrimeCube {
        counts: vec![0; years.len() * MONTHS as usize * zones.len()],
        years,
        zones,
    };
    for (doc, zone) in contributing {
        let yi = cube
            .years
            .iter()
            .position(|&y| y == doc.published_day.year())
            .expect("year collected above");
        let zi = cube.zone_index(&zone).expect("zone collected above");
        let idx = cube.index(yi, doc.published_day.month(), zi);
        cube.counts[idx] += 1;
    }
    cube
}

/// The four sums behind the occurrence score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Marginals {
    /// C_ZM: crimes in `zone` during `month`, summed over years.
    pub zone_month: u64,
    /// C_TM: crimes in all zones during `month`.
    pub month_total: u64,
    /// C_Z: crimes in `zone` over all months.
    pub zone_total: u64,
    /// C_T: grand total.
    pub grand_total: u64,
}

pub fn marginals(cube: &CrimeCube, month: u32, zone: &str) -> Result<Marginals, AnalyticsError> {
    if !(1..=MONTHS).contains(&month) {
        return Err(AnalyticsError::BadMonth(month));
    }
    let zi = cube.zone_index(zone)?;
    let mut m = Marginals {
        zone_month: 0,
        month_total: 0,
        zone_total: 0,
        grand_total: 0,
    };
    for yi in 0..cube.years.len() {
        for mo in 1..=MONTHS {
            for z in 0..cube.zones.len() {
                let count = cube.get(yi, mo, z);
                m.grand_total += count;
                if mo == month {
                    m.month_total += count;
                }
                if z == zi {
                    m.zone_total += count;
                    if mo == month {
                        m.zone_month += count;
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Occurrence score for (zone, month).
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub zone: String,
    pub month: u32,
    pub zone_month: u64,
    pub month_total: u64,
    pub zone_total: u64,
    pub grand_total: u64,
    /// `(C_ZM/C_TM) · (C_Z/C_T)`, or 0 when any count is 0. A relative
    /// score in [0,1]; scores do not sum to 1 across zones.
    pub score: f64,
}

pub fn predict(cube: &CrimeCube, month: u32, zone: &str) -> Result<Prediction, AnalyticsError> {
    if zone == UNKNOWN_ZONE {
        return Err(AnalyticsError::UnknownZone(zone.to_string()));
    }
    let m = marginals(cube, month, zone)?;
    let score = if m.zone_month > 0 && m.month_total > 0 && m.zone_total > 0 && m.grand_total > 0 {
        (m.zone_month as f64 / m.month_total as f64) * (m.zone_total as f64 / m.grand_total as f64)
    } else {
        0.0
    };
    Ok(Prediction {
        zone: zone.to_string(),
        month,
        zone_month: m.zone_month,
        month_total: m.month_total,
        zone_total: m.zone_total,
        grand_total: m.grand_total,
        score,
    })
}

/// Zones by total crime count, descending; ties break on the byte order of
/// the label. The unknown zone never appears.
pub fn rank_zones(cube: &CrimeCube) -> Vec<(String, u64)> {
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for (zi, zone) in cube.zones.iter().enumerate() {
        if zone == UNKNOWN_ZONE {
            continue;
        }
        let mut total = 0;
        for yi in 0..cube.years.len() {
            for mo in 1..=MONTHS {
                total += cube.get(yi, mo, zi);
            }
        }
        totals.insert(zone, total);
    }
    let mut ranking: Vec<(String, u64)> = totals
        .into_iter()
        .map(|(z, n)| (z.to_string(), n))
        .collect();
    ranking.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranking
}

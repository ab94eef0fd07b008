//! The versioned criterion table shared by induction and namikawa.
//!
//! The table is embedded at build time and can be replaced at run time by
//! pointing `NILSHEET_TABLE` at another TOML file.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rootsys::Family;

pub const TABLE_ENV: &str = "NILSHEET_TABLE";

const EMBEDDED: &str = include_str!("../tables/criteria.toml");

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct BirationalityRule {
    pub rule: String,
    #[serde(default)]
    pub very_even_exception: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ReductionRecord {
    pub id: String,
    pub algebra: String,
    pub lambda: String,
    pub mu: String,
    pub k_min: u32,
    pub slice: String,
    pub rank_k: i64,
    pub rank_c: i64,
    pub branches: u32,
    pub normal: bool,
    pub action: String,
}

impl ReductionRecord {
    pub fn slice_rank(&self, k: u32) -> Result<u32> {
        let r = self.rank_k * k as i64 + self.rank_c;
        u32::try_from(r)
            .ok()
            .filter(|&r| r >= 1)
            .ok_or_else(|| Error::Table(format!("record {} gives slice rank {r} at k={k}", self.id)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct CriterionTable {
    pub version: u32,
    #[serde(default)]
    pub birationality: BTreeMap<String, BirationalityRule>,
    #[serde(default, rename = "reduction")]
    pub reductions: Vec<ReductionRecord>,
}

impl CriterionTable {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Table(e.to_string()))
    }

    pub fn embedded() -> Self {
        CriterionTable::parse(EMBEDDED).expect("embedded criterion table parses")
    }

    pub fn birationality_rule(&self, family: Family) -> Result<&BirationalityRule> {
        self.birationality
            .get(&family.letter().to_string())
            .ok_or_else(|| Error::CriterionNotTranscribed(format!("no birationality rule for type {}", family.letter())))
    }

    pub fn reduction(&self, id: &str) -> Result<&ReductionRecord> {
        self.reductions
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::ReductionTableGap(format!("no reduction record {id:?}")))
    }
}

fn load_default() -> Result<CriterionTable> {
    match std::env::var_os(TABLE_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Table(format!("cannot read {}: {e}", path.to_string_lossy())))?;
            CriterionTable::parse(&text)
        }
        None => Ok(CriterionTable::embedded()),
    }
}

static ACTIVE: Lazy<RwLock<Option<Result<Arc<CriterionTable>>>>> = Lazy::new(|| RwLock::new(None));

/// The active table, loaded on first use.
pub fn active() -> Result<Arc<CriterionTable>> {
    if let Some(t) = ACTIVE.read().unwrap().as_ref() {
        return t.clone();
    }
    let mut slot = ACTIVE.write().unwrap();
    if slot.is_none() {
        *slot = Some(load_default().map(Arc::new));
    }
    slot.as_ref().unwrap().clone()
}

/// Replaces the active table (used by the CLI and by tests probing table gaps).
pub fn install(table: CriterionTable) {
    *ACTIVE.write().unwrap() = Some(Ok(Arc::new(table)));
}

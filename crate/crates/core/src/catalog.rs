//! Built-in reference data and the named codes it defines.
//!
//! `data/tables.json` lists the four-circulant generators, neighbor
//! supports, subtraction pairs, equivalences and reference enumerators.
//! The file ships with its SHA-256 digest, checked on load. Codes are built
//! on demand from those rows and memoized by name.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circulant::{build_four_circulant, CirculantPair};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::neighbors::neighbor;

pub const TABLES_JSON: &str = include_str!("../data/tables.json");
pub const TABLES_SHA256: &str = include_str!("../data/tables.json.sha256");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CirculantRow {
    pub name: String,
    pub ra: String,
    pub rb: String,
    #[serde(default)]
    pub beta: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NeighborRow {
    pub table: String,
    pub name: String,
    pub base: String,
    /// 1-based.
    pub supp: Vec<usize>,
    pub dmin: usize,
    pub beta: i64,
    #[serde(default)]
    pub gamma: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubtractionRow {
    pub name: String,
    /// 1-based pair of deleted coordinates.
    pub coords: [usize; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Subtractions {
    pub base: String,
    pub beta: i64,
    pub gamma: i64,
    pub rows: Vec<SubtractionRow>,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceEnumerator {
    pub name: String,
    pub family: String,
    pub beta: i64,
    /// Coefficients `A_i` for `i ≤ n/2`, keyed by weight.
    pub coefficients: BTreeMap<usize, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationCounts {
    pub d12: usize,
    pub d10: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tables {
    pub version: u32,
    pub four_circulant_d12: Vec<CirculantRow>,
    pub four_circulant_d10: Vec<CirculantRow>,
    pub neighbors: Vec<NeighborRow>,
    pub subtractions: Subtractions,
    pub equivalences: Vec<[String; 2]>,
    pub inequivalent_d12: Vec<String>,
    pub enumerators: Vec<ReferenceEnumerator>,
    pub classification_counts: ClassificationCounts,
}

impl Tables {
    /// Parses the built-in data after checking its digest.
    pub fn builtin() -> Result<Self> {
        let digest = hex_digest(TABLES_JSON.as_bytes());
        if digest != TABLES_SHA256.trim() {
            return Err(Error::Internal(format!(
                "reference data digest {digest} does not match {}",
                TABLES_SHA256.trim()
            )));
        }
        Ok(serde_json::from_str(TABLES_JSON)?)
    }

    pub fn neighbor_rows(&self, table: &str) -> Vec<&NeighborRow> {
        self.neighbors.iter().filter(|r| r.table == table).collect()
    }
}

/// Lowercase hexadecimal SHA-256.
pub fn hex_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

enum Recipe {
    Circulant(CirculantPair),
    Neighbor { base: String, supp: Vec<usize> },
    Subtract { base: String, coords: [usize; 2] },
}

/// Named codes built from [`Tables`].
pub struct Catalog {
    tables: Tables,
    recipes: BTreeMap<String, Recipe>,
    cache: Mutex<HashMap<String, LinearCode>>,
}

impl Catalog {
    pub fn builtin() -> Result<Self> {
        Self::new(Tables::builtin()?)
    }

    pub fn new(tables: Tables) -> Result<Self> {
        let mut recipes = BTreeMap::new();
        for row in tables.four_circulant_d12.iter().chain(&tables.four_circulant_d10) {
            let pair = CirculantPair::new(row.ra.parse()?, row.rb.parse()?)?;
            recipes.insert(row.name.clone(), Recipe::Circulant(pair));
        }
        for row in &tables.neighbors {
            recipes.insert(
                row.name.clone(),
                Recipe::Neighbor { base: row.base.clone(), supp: row.supp.clone() },
            );
        }
        for row in &tables.subtractions.rows {
            recipes.insert(
                row.name.clone(),
                Recipe::Subtract { base: tables.subtractions.base.clone(), coords: row.coords },
            );
        }
        Ok(Self { tables, recipes, cache: Mutex::new(HashMap::new()) })
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn names(&self) -> Vec<&str> {
        self.recipes.keys().map(String::as_str).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.recipes.contains_key(name)
    }

    /// Builds (or returns the cached) code called `name`.
    pub fn code(&self, name: &str) -> Result<LinearCode> {
        if let Some(c) = self.cache.lock().expect("cache lock").get(name) {
            return Ok(c.clone());
        }
        let recipe = self
            .recipes
            .get(name)
            .ok_or_else(|| Error::Argument(format!("unknown code name {name}")))?;
        let code = match recipe {
            Recipe::Circulant(pair) => build_four_circulant(pair),
            Recipe::Neighbor { base, supp } => {
                let base = self.code(base)?;
                neighbor(&base, &crate::gf2::BitVector::from_coords(base.n(), supp)?)?
            }
            Recipe::Subtract { base, coords } => {
                let [i, j] = *coords;
                if i == 0 || j == 0 {
                    return Err(Error::Argument(format!("coordinates of {name} must be 1-based")));
                }
                self.code(base)?.subtract_coordinates(i - 1, j - 1)?
            }
        };
        self.cache.lock().expect("cache lock").insert(name.to_string(), code.clone());
        Ok(code)
    }
}

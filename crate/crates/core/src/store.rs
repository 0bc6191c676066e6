//! File-backed cache of computed expansions.
//!
//! One record per line: `key \t value \t version \t timestamp \t seed`, where
//! `key = "q=<q>;n=<n>;lambda=<type>;mu=<type>"` (`n=inf` for stable products)
//! and `value` lists `type:coefficient` items joined by `|`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;

use crate::classcalc::Expansion;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gltype::{GlType, Role};

pub const FORMAT_VERSION: &str = concat!("glq-", env!("CARGO_PKG_VERSION"));
pub const ENV_VAR: &str = "GLQ_CACHE";

pub fn cache_key(q: u32, n: Option<usize>, lambda: &GlType, mu: &GlType, field: &Field) -> String {
    let n = n.map_or_else(|| "inf".to_string(), |n| n.to_string());
    format!(
        "q={q};n={n};lambda={};mu={}",
        lambda.format(field),
        mu.format(field)
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub key: String,
    pub expansion: Expansion,
    pub version: String,
    pub timestamp: u64,
    pub seed: u64,
}

impl CacheRecord {
    fn encode_value(exp: &Expansion, field: &Field) -> String {
        exp.terms
            .iter()
            .map(|(nu, a)| format!("{}:{a}", nu.format(field)))
            .collect::<Vec<_>>()
            .join("|")
    }

    fn line(&self, field: &Field) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.key,
            Self::encode_value(&self.expansion, field),
            self.version,
            self.timestamp,
            self.seed
        )
    }
}

fn split_key(key: &str) -> Option<(u32, Option<usize>, &str, &str)> {
    let rest = key.strip_prefix("q=")?;
    let (q, rest) = rest.split_once(";n=")?;
    let (n, rest) = rest.split_once(";lambda=")?;
    let (lambda, mu) = rest.split_once(";mu=")?;
    let n = if n == "inf" { None } else { Some(n.parse().ok()?) };
    Some((q.parse().ok()?, n, lambda, mu))
}

/// Parses and revalidates one line. Returns `Ok(None)` for a foreign version.
fn parse_line(line: &str, fields: &mut HashMap<u32, Field>) -> std::result::Result<Option<CacheRecord>, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    let [key, value, version, timestamp, seed] = cols.as_slice() else {
        return Err(format!("expected 5 tab-separated columns, found {}", cols.len()));
    };
    if *version != FORMAT_VERSION {
        return Ok(None);
    }
    let (q, n, lambda, mu) = split_key(key).ok_or("malformed key")?;
    let field = match fields.get(&q) {
        Some(f) => f.clone(),
        None => {
            let f = Field::from_order(q).map_err(|e| e.to_string())?;
            fields.insert(q, f.clone());
            f
        }
    };
    let parse_ty = |s: &str| GlType::parse(s, Role::Modified, &field).map_err(|e| e.to_string());
    let lambda = parse_ty(lambda)?;
    let mu = parse_ty(mu)?;
    let mut terms = BTreeMap::new();
    for item in value.split('|').filter(|s| !s.is_empty()) {
        let (ty, coef) = item.rsplit_once(':').ok_or("malformed term")?;
        let coef: BigUint = coef.parse().map_err(|_| "malformed coefficient")?;
        terms.insert(parse_ty(ty)?, coef);
    }
    let expansion = Expansion {
        q,
        n,
        lambda,
        mu,
        terms,
    };
    if cache_key(q, n, &expansion.lambda, &expansion.mu, &field) != *key {
        return Err("key is not in canonical form".into());
    }
    expansion
        .check_counting_identity(&field)
        .map_err(|e| e.to_string())?;
    Ok(Some(CacheRecord {
        key: key.to_string(),
        expansion,
        version: version.to_string(),
        timestamp: timestamp.parse().map_err(|_| "malformed timestamp")?,
        seed: seed.parse().map_err(|_| "malformed seed")?,
    }))
}

/// In-memory view of a cache file.
#[derive(Clone, Debug, Default)]
pub struct Store {
    records: BTreeMap<String, CacheRecord>,
    warnings: Vec<String>,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    /// `--cache` wins over `GLQ_CACHE`, which wins over the per-user default.
    pub fn resolve_path(flag: Option<&Path>) -> Option<PathBuf> {
        if let Some(p) = flag {
            return Some(p.to_path_buf());
        }
        if let Some(p) = std::env::var_os(ENV_VAR).filter(|p| !p.is_empty()) {
            return Some(PathBuf::from(p));
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
        Some(base.join("glq").join("cache.tsv"))
    }

    /// Reads `path`; a missing file is an empty cache. Bad lines are skipped and
    /// recorded in [`Store::warnings`].
    pub fn load(path: &Path) -> Result<Store> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Store::new()),
            Err(e) => return Err(e.into()),
        };
        let mut store = Store::new();
        let mut fields = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match parse_line(line, &mut fields) {
                Ok(Some(rec)) => {
                    store.records.insert(rec.key.clone(), rec);
                }
                Ok(None) => store
                    .warnings
                    .push(format!("{}:{}: ignored record from another version", path.display(), i + 1)),
                Err(why) => store
                    .warnings
                    .push(format!("{}:{}: skipped corrupt record ({why})", path.display(), i + 1)),
            }
        }
        Ok(store)
    }

    /// Writes a full snapshot next to `path` and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        let mut fields: HashMap<u32, Field> = HashMap::new();
        for rec in self.records.values() {
            let q = rec.expansion.q;
            let field = match fields.get(&q) {
                Some(f) => f.clone(),
                None => {
                    let f = Field::from_order(q)?;
                    fields.insert(q, f.clone());
                    f
                }
            };
            writeln!(tmp, "{}", rec.line(&field))?;
        }
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Expansion> {
        self.records.get(key).map(|r| &r.expansion)
    }

    pub fn record(&self, key: &str) -> Option<&CacheRecord> {
        self.records.get(key)
    }

    pub fn put(&mut self, key: String, expansion: Expansion, seed: u64) {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        self.records.insert(
            key.clone(),
            CacheRecord {
                key,
                expansion,
                version: FORMAT_VERSION.into(),
                timestamp,
                seed,
            },
        );
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.records.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classcalc::{multiply_class_sums, stable_product, Bounds};

    fn f3() -> Field {
        Field::from_order(3).unwrap()
    }

    fn ty(s: &str) -> GlType {
        GlType::parse(s, Role::Modified, &f3()).unwrap()
    }

    fn sample() -> (String, Expansion) {
        let f = f3();
        let exp = multiply_class_sums(&ty("1@t-2"), &ty("1@t-1"), 3, &f, &Bounds::default()).unwrap();
        (cache_key(3, Some(3), &exp.lambda, &exp.mu, &f), exp)
    }

    #[test]
    fn key_format() {
        let f = f3();
        assert_eq!(
            cache_key(3, Some(5), &ty("1@t-2"), &ty("1,1@t-1;1@t-2"), &f),
            "q=3;n=5;lambda=1@t+1;mu=1@t+1;1,1@t+2"
        );
        assert_eq!(
            cache_key(3, None, &GlType::empty(Role::Modified), &ty("1@t-2"), &f),
            "q=3;n=inf;lambda=∅;mu=1@t+1"
        );
        let key = cache_key(3, Some(5), &ty("1@t-2"), &ty("1,1@t-1;1@t-2"), &f);
        let (q, n, l, m) = split_key(&key).unwrap();
        assert_eq!((q, n, l, m), (3, Some(5), "1@t+1", "1@t+1;1,1@t+2"));
    }

    #[test]
    fn get_put_round_trip() {
        let mut store = Store::new();
        let (key, exp) = sample();
        assert!(store.get(&key).is_none());
        store.put(key.clone(), exp.clone(), 7);
        assert_eq!(store.get(&key), Some(&exp));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("cache.tsv");
        let f = f3();
        let mut store = Store::new();
        let (key, exp) = sample();
        store.put(key.clone(), exp.clone(), 1);
        let stable = stable_product(&ty("1@t-1"), &ty("1@t-2"), &f, &Bounds::default()).unwrap();
        let skey = cache_key(3, None, &stable.lambda, &stable.mu, &f);
        store.put(skey.clone(), stable.clone(), 2);
        store.save(&path).unwrap();
        let loaded = Store::load(&path).unwrap();
        assert!(loaded.warnings().is_empty(), "{:?}", loaded.warnings());
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded.get(&key), Some(&exp));
        assert_eq!(loaded.get(&skey), Some(&stable));
        assert_eq!(
            loaded.records().cloned().collect::<Vec<_>>(),
            store.records().cloned().collect::<Vec<_>>()
        );
    }

    #[test]
    fn missing_file_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        assert!(Store::load(&dir.path().join("none.tsv")).unwrap().is_empty());
    }

    #[test]
    fn corrupt_and_foreign_records_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        let mut store = Store::new();
        let (key, exp) = sample();
        store.put(key.clone(), exp, 1);
        store.save(&path).unwrap();
        let good = fs::read_to_string(&path).unwrap();
        let mut tampered = good.replace(":", ":1");
        tampered.push_str("garbage line\n");
        tampered.push_str(&good.replace(FORMAT_VERSION, "glq-0.0.0-old"));
        tampered.push_str(&good);
        fs::write(&path, tampered).unwrap();
        let loaded = Store::load(&path).unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded.warnings().len(), 3);
        assert!(loaded.warnings()[0].contains("counting identity"));
        assert!(loaded.warnings()[2].contains("another version"));
    }

    #[test]
    fn keys_are_injective() {
        let f = f3();
        let types = crate::classcalc::enumerate_modified_types(2, 4, &f);
        let mut seen = std::collections::HashSet::new();
        for n in [3, 4] {
            for l in &types {
                for m in &types {
                    assert!(seen.insert(cache_key(3, Some(n), l, m, &f)));
                }
            }
        }
        assert_eq!(seen.len(), 2 * types.len() * types.len());
    }

    #[test]
    fn flag_beats_environment() {
        let flag = PathBuf::from("/tmp/x.tsv");
        assert_eq!(Store::resolve_path(Some(&flag)), Some(flag));
    }
}

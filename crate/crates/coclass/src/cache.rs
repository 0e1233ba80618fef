//! On-disk result cache keyed by (fingerprint, operation, parameters).
//!
//! Entries are JSON envelopes carrying the engine version; hits are only
//! served when the stored version matches the running one. Writes go
//! through a temp file and an atomic rename, so concurrent invocations
//! see either the old or the complete new entry, never a torn one.
//! Unreadable entries are evicted and treated as misses.

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::ENGINE_VERSION;

pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize)]
struct KeyDoc<'a> {
    fingerprint: &'a str,
    op: &'a str,
    params: &'a serde_json::Value,
}

#[derive(Serialize, serde::Deserialize)]
struct Envelope<T> {
    engine_version: String,
    value: T,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, fingerprint: &str, op: &str, params: &serde_json::Value) -> PathBuf {
        let key = serde_json::to_string(&KeyDoc {
            fingerprint,
            op,
            params,
        })
        .expect("cache keys always serialize");
        let mut h = Sha256::new();
        h.update(key.as_bytes());
        let hex: String = h.finalize().iter().map(|b| format!("{:02x}", b)).collect();
        self.dir.join(format!("{}.json", hex))
    }

    pub fn get<T: DeserializeOwned>(
        &self,
        fingerprint: &str,
        op: &str,
        params: &serde_json::Value,
    ) -> Option<T> {
        let path = self.path_for(fingerprint, op, params);
        let bytes = std::fs::read(&path).ok()?;
        match serde_json::from_slice::<Envelope<T>>(&bytes) {
            Ok(env) if env.engine_version == ENGINE_VERSION => Some(env.value),
            Ok(_) => {
                let _ = std::fs::remove_file(&path);
                None
            }
            Err(_) => {
                eprintln!("cache: evicting unreadable entry {}", path.display());
                let _ = std::fs::remove_file(&path);
                None
            }
        }
    }

    pub fn put<T: Serialize>(
        &self,
        fingerprint: &str,
        op: &str,
        params: &serde_json::Value,
        value: &T,
    ) -> Result<()> {
        let path = self.path_for(fingerprint, op, params);
        let env = Envelope {
            engine_version: ENGINE_VERSION.to_string(),
            value,
        };
        let tmp = path.with_extension(format!(
            "tmp{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.subsec_nanos())
                .unwrap_or(0)
        ));
        std::fs::write(&tmp, serde_json::to_vec(&env)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute<T, F>(
        &self,
        fingerprint: &str,
        op: &str,
        params: &serde_json::Value,
        compute: F,
    ) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(hit) = self.get(fingerprint, op, params) {
            return Ok(hit);
        }
        let value = compute()?;
        self.put(fingerprint, op, params, &value)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn store_then_load_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let value = vec![(1u32, "a".to_string()), (2, "b".to_string())];
        cache.put("fp", "descendants", &json!({"s": 1}), &value).unwrap();
        let back: Vec<(u32, String)> = cache.get("fp", "descendants", &json!({"s": 1})).unwrap();
        assert_eq!(back, value);
        assert_eq!(
            cache.get::<Vec<(u32, String)>>("fp", "descendants", &json!({"s": 2})),
            None
        );
        assert_eq!(
            cache.get::<Vec<(u32, String)>>("other", "descendants", &json!({"s": 1})),
            None
        );
    }

    #[test]
    fn version_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let params = json!(null);
        cache.put("fp", "op", &params, &7u32).unwrap();
        let path = cache.path_for("fp", "op", &params);
        let stale = serde_json::to_vec(&Envelope {
            engine_version: "0-obsolete".to_string(),
            value: 7u32,
        })
        .unwrap();
        std::fs::write(&path, stale).unwrap();
        assert_eq!(cache.get::<u32>("fp", "op", &params), None);
        assert!(!path.exists(), "stale entries are evicted");
    }

    #[test]
    fn corrupt_entries_are_evicted_and_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let params = json!({"c": 5});
        cache.put("fp", "op", &params, &41u32).unwrap();
        let path = cache.path_for("fp", "op", &params);
        std::fs::write(&path, b"{ truncated").unwrap();
        assert_eq!(cache.get::<u32>("fp", "op", &params), None);
        assert!(!path.exists());
        let recomputed: u32 = cache
            .get_or_compute("fp", "op", &params, || Ok(42u32))
            .unwrap();
        assert_eq!(recomputed, 42);
        let hit: u32 = cache
            .get_or_compute("fp", "op", &params, || panic!("must not recompute"))
            .unwrap();
        assert_eq!(hit, 42);
    }

    #[test]
    fn no_temp_files_left_behind() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        for k in 0..5u32 {
            cache.put("fp", "op", &json!({ "k": k }), &k).unwrap();
        }
        let leftovers: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| {
                !e.as_ref()
                    .unwrap()
                    .path()
                    .extension()
                    .is_some_and(|x| x == "json")
            })
            .collect();
        assert!(leftovers.is_empty());
    }
}

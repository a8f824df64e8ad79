//! Persistent memo store: a text file of `namespace:key=value` lines under a
//! version header. The file only ever seeds the in-process memo tables, so
//! a stale or damaged file costs recomputation and nothing else.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::descendent::{self, CorrelatorKey};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, Rational};
use crate::rspin::{self, Insertion, RSpinKey};

pub const CACHE_VERSION: &str = "moduli-cache 1";
pub const CACHE_ENV: &str = "MODULI_CACHE";

/// What `open` found on disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadStatus {
    Missing,
    Loaded,
    /// Written by another format version; ignored.
    Stale,
    /// Unparseable; ignored and rewritten on the next save.
    Corrupted,
}

#[derive(Clone, Debug)]
pub struct CacheStore {
    pub path: PathBuf,
    /// `namespace:key` to a reduced fraction string.
    pub entries: BTreeMap<String, String>,
    pub version: String,
    pub status: LoadStatus,
}

/// `$MODULI_CACHE`, else `$XDG_DATA_HOME/moduli/cache.txt`, else
/// `~/.local/share/moduli/cache.txt`.
pub fn default_path() -> Option<PathBuf> {
    let nonempty = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    if let Some(p) = nonempty(CACHE_ENV) {
        return Some(p);
    }
    if let Some(d) = nonempty("XDG_DATA_HOME") {
        return Some(d.join("moduli").join("cache.txt"));
    }
    nonempty("HOME").map(|h| h.join(".local/share/moduli/cache.txt"))
}

fn rspin_key(r: u32, g: i64, ins: &[Insertion]) -> String {
    let mut s = format!("{r};{g}");
    for (n, m) in ins {
        s.push_str(&format!(";{n},{m}"));
    }
    s
}

fn parse_rspin_key(s: &str) -> Option<(u32, i64, Vec<Insertion>)> {
    let mut it = s.split(';');
    let r = it.next()?.parse().ok()?;
    let g = it.next()?.parse().ok()?;
    let ins = it
        .map(|p| {
            let (n, m) = p.split_once(',')?;
            Some((n.parse().ok()?, m.parse().ok()?))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((r, g, ins))
}

/// A typed entry, or `None` for a malformed line.
enum Entry {
    Psi(CorrelatorKey, Rational),
    RSpin(u32, i64, Vec<Insertion>, Rational),
}

fn parse_entry(ns_key: &str, value: &str) -> Option<Entry> {
    let v = parse_rational(value)?;
    if fmt_rational(&v) != value {
        return None;
    }
    // keys that the evaluators would never memoize mark a damaged file
    match ns_key.split_once(':')? {
        ("psi", k) => {
            let key = CorrelatorKey::parse(k)?;
            (key.is_stable() && key.dimension_ok()).then_some(Entry::Psi(key, v))
        }
        ("rspin", k) => {
            let (r, g, ins) = parse_rspin_key(k)?;
            let key = RSpinKey::new(r, g, &ins).ok()?;
            rspin::selection_check(&key).then_some(Entry::RSpin(r, g, ins, v))
        }
        _ => None,
    }
}

fn parse_file(text: &str) -> (LoadStatus, BTreeMap<String, String>) {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CACHE_VERSION => {}
        Some(h) if h.starts_with("moduli-cache ") => return (LoadStatus::Stale, BTreeMap::new()),
        _ => return (LoadStatus::Corrupted, BTreeMap::new()),
    }
    let mut entries = BTreeMap::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let Some((k, v)) = line.split_once('=') else {
            return (LoadStatus::Corrupted, BTreeMap::new());
        };
        if parse_entry(k, v).is_none() {
            return (LoadStatus::Corrupted, BTreeMap::new());
        }
        entries.insert(k.to_string(), v.to_string());
    }
    (LoadStatus::Loaded, entries)
}

fn read(path: &Path) -> Result<(LoadStatus, BTreeMap<String, String>)> {
    match fs::read(path) {
        Ok(bytes) => Ok(match String::from_utf8(bytes) {
            Ok(text) => parse_file(&text),
            Err(_) => (LoadStatus::Corrupted, BTreeMap::new()),
        }),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok((LoadStatus::Missing, BTreeMap::new())),
        Err(e) => Err(Error::Cache(format!("{}: {e}", path.display()))),
    }
}

fn io_err(path: &Path, e: io::Error) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

impl CacheStore {
    /// Read the file at `path`. A missing, stale or corrupted file gives an
    /// empty store; only an unreadable one is an error.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let (status, entries) = read(&path)?;
        Ok(CacheStore { path, entries, version: CACHE_VERSION.to_string(), status })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Push every entry into the process memo tables.
    pub fn seed_memos(&self) {
        for (k, v) in &self.entries {
            match parse_entry(k, v) {
                Some(Entry::Psi(key, v)) => descendent::memo_seed(key, v),
                Some(Entry::RSpin(r, g, ins, v)) => rspin::memo_seed(r, g, ins, v),
                None => {}
            }
        }
    }

    /// Copy the process memo tables into the store. Returns the number of
    /// new entries.
    pub fn absorb_memos(&mut self) -> usize {
        let before = self.entries.len();
        for (k, v) in descendent::memo_entries() {
            self.entries.insert(format!("psi:{k}"), fmt_rational(&v));
        }
        for ((r, g, ins), v) in rspin::memo_entries() {
            self.entries.insert(format!("rspin:{}", rspin_key(r, g, &ins)), fmt_rational(&v));
        }
        self.entries.len() - before
    }

    /// Serialized form: header, then entries in key order.
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.version);
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// Merge with whatever is on disk and replace the file atomically,
    /// holding an advisory lock on `<path>.lock`. Returns `false` without
    /// writing if another process holds the lock.
    pub fn save(&mut self) -> Result<bool> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        let lock_path = self.path.with_extension("lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| io_err(&lock_path, e))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => return Ok(false),
            Err(TryLockError::Error(e)) => return Err(io_err(&lock_path, e)),
        }
        if let (LoadStatus::Loaded, disk) = read(&self.path)? {
            for (k, v) in disk {
                self.entries.entry(k).or_insert(v);
            }
        }
        let tmp = self.path.with_extension(format!("tmp.{}", std::process::id()));
        let write = || -> io::Result<()> {
            let mut f = File::create(&tmp)?;
            f.write_all(self.render().as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &self.path)
        };
        let res = write();
        if res.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        res.map_err(|e| io_err(&self.path, e))?;
        self.status = LoadStatus::Loaded;
        Ok(true)
    }
}

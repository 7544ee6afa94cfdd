//! Polynomial files and the on-disk cache.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use super::{generate, BiPoly, InvariantLine};
use crate::error::{domain, Error, Result};

/// How a cached lookup was satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Generated,
    /// Entry existed but failed to parse or did not match its key.
    Regenerated(String),
    /// Generated, but the cache could not be written.
    Uncached(String),
}

pub fn read_poly_file(path: &Path) -> Result<(InvariantLine, u32, BiPoly)> {
    let text = fs::read_to_string(path)?;
    BiPoly::from_text(&text)
}

/// Write `contents` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| domain!("output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

fn cache_path(dir: &Path, line: InvariantLine, ell: u32) -> PathBuf {
    dir.join(format!("{}_{}.txt", line.name(), ell))
}

/// Read (line, l) from the cache directory, generating and storing it on a
/// miss. A corrupt entry is regenerated and overwritten.
pub fn load_or_generate(dir: &Path, line: InvariantLine, ell: u32, use_sparsity: bool) -> Result<(BiPoly, CacheOutcome)> {
    let path = cache_path(dir, line, ell);
    let mut note = None;
    if path.exists() {
        match read_poly_file(&path) {
            Ok((l, e, p)) if l == line && e == ell && !p.is_empty() => return Ok((p, CacheOutcome::Hit)),
            Ok(_) => note = Some(format!("cache entry {} has a mismatched header", path.display())),
            Err(err) => note = Some(format!("cache entry {} unreadable: {}", path.display(), err.detail())),
        }
    }
    let poly = generate(line, ell, use_sparsity)?;
    let outcome = match write_atomic(&path, &poly.to_text(line, ell)) {
        Err(Error::Io(msg)) => CacheOutcome::Uncached(msg),
        Err(e) => return Err(e),
        Ok(()) => match note {
            Some(n) => CacheOutcome::Regenerated(n),
            None => CacheOutcome::Generated,
        },
    };
    Ok((poly, outcome))
}

/// Process-wide memo of generated polynomials (sparsity ansatz on).
pub fn memo_generate(line: InvariantLine, ell: u32) -> Result<Arc<BiPoly>> {
    static MEMO: OnceLock<Mutex<HashMap<(InvariantLine, u32), Arc<BiPoly>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(p) = memo.lock().unwrap().get(&(line, ell)) {
        return Ok(p.clone());
    }
    let p = Arc::new(generate(line, ell, true)?);
    memo.lock().unwrap().insert((line, ell), p.clone());
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpoly::builtin;

    fn scratch(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("weber-io-{}-{}", name, std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = scratch("cache");
        let (p1, o1) = load_or_generate(&dir, InvariantLine::X(24), 5, true).unwrap();
        assert_eq!(o1, CacheOutcome::Generated);
        assert_eq!(p1, builtin("phi5").unwrap());
        let bytes = fs::read(dir.join("x24_5.txt")).unwrap();
        let (p2, o2) = load_or_generate(&dir, InvariantLine::X(24), 5, true).unwrap();
        assert_eq!((p2, o2), (p1.clone(), CacheOutcome::Hit));
        fs::write(dir.join("x24_5.txt"), "garbage").unwrap();
        let (p3, o3) = load_or_generate(&dir, InvariantLine::X(24), 5, true).unwrap();
        assert_eq!(p3, p1);
        assert!(matches!(o3, CacheOutcome::Regenerated(_)));
        assert_eq!(fs::read(dir.join("x24_5.txt")).unwrap(), bytes);
        let _ = fs::remove_dir_all(&dir);
    }
}

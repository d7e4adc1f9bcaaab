//! Process-wide cache of Riemann solves, with an optional on-disk sidecar.
//!
//! Entries are keyed by the SHA-256 of the domain JSON, the node count and
//! the base point bits. When `IML_CACHE_DIR` is set, solves are also stored
//! there as `<key>.imlrs` in a little-endian binary layout that reproduces
//! every float bit for bit.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::szego::{default_base_point, RiemannSolve};
use super::MapSpec;
use crate::domain::DomainSpec;
use crate::error::{Error, Result};

type C64 = Complex64;

const MAGIC: &[u8; 8] = b"IMLRS\x00\x00\x01";

pub const CACHE_ENV: &str = "IML_CACHE_DIR";

type Table = Mutex<HashMap<String, Arc<OnceLock<Arc<RiemannSolve>>>>>;

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

pub fn cache_key(domain: &DomainSpec, base_point: C64, n_nodes: usize) -> Result<String> {
    let mut h = Sha256::new();
    h.update(domain.to_json()?.as_bytes());
    h.update((n_nodes as u64).to_le_bytes());
    h.update(base_point.re.to_bits().to_le_bytes());
    h.update(base_point.im.to_bits().to_le_bytes());
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// Solve (or fetch) the Riemann map behind a `NumericalRiemann` map.
pub fn solve_for_map(map: &MapSpec) -> Result<Arc<RiemannSolve>> {
    match map {
        MapSpec::NumericalRiemann {
            domain,
            base_point,
            n_nodes,
        } => cached_riemann_map(domain, *base_point, *n_nodes),
        _ => Err(Error::InvalidMap("not a NumericalRiemann map".into())),
    }
}

/// Solve with the default base point (deepest interior grid point).
pub fn solve_for_domain(domain: &DomainSpec, n_nodes: usize) -> Result<Arc<RiemannSolve>> {
    let a = default_base_point(domain)?;
    cached_riemann_map(domain, a, n_nodes)
}

/// Construction is exclusive per key; concurrent callers for the same key
/// wait for the first one and then share the result.
pub fn cached_riemann_map(
    domain: &DomainSpec,
    base_point: C64,
    n_nodes: usize,
) -> Result<Arc<RiemannSolve>> {
    let key = cache_key(domain, base_point, n_nodes)?;
    let cell = {
        let mut t = table().lock().unwrap_or_else(|e| e.into_inner());
        t.entry(key.clone()).or_default().clone()
    };
    if let Some(s) = cell.get() {
        return Ok(s.clone());
    }
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let mut err = None;
    let solve = cell.get_or_init(|| {
        if let Some(dir) = &dir {
            let path = dir.join(format!("{key}.imlrs"));
            if let Ok(s) = read_sidecar(&path, domain) {
                return Arc::new(s);
            }
        }
        match RiemannSolve::new(domain, base_point, n_nodes) {
            Ok(s) => {
                if let Some(dir) = &dir {
                    // a failed cache write only costs a recomputation later
                    let _ = write_sidecar(&dir.join(format!("{key}.imlrs")), &s);
                }
                Arc::new(s)
            }
            Err(e) => {
                err = Some(e);
                Arc::new(placeholder(domain))
            }
        }
    });
    if let Some(e) = err {
        table()
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .remove(&key);
        return Err(e);
    }
    Ok(solve.clone())
}

fn placeholder(domain: &DomainSpec) -> RiemannSolve {
    RiemannSolve {
        domain: domain.clone(),
        base_point: C64::new(0.0, 0.0),
        n_nodes: 0,
        nodes: vec![],
        dz: vec![],
        szego: vec![],
        boundary_map: vec![],
        szego_aa: f64::NAN,
        residual: f64::NAN,
        condition_estimate: f64::NAN,
        error_estimate: f64::NAN,
        warning: None,
    }
}

fn put_f64(buf: &mut Vec<u8>, x: f64) {
    buf.extend_from_slice(&x.to_bits().to_le_bytes());
}

fn put_c64s(buf: &mut Vec<u8>, v: &[C64]) {
    buf.extend_from_slice(&(v.len() as u64).to_le_bytes());
    for z in v {
        put_f64(buf, z.re);
        put_f64(buf, z.im);
    }
}

fn put_bytes(buf: &mut Vec<u8>, b: &[u8]) {
    buf.extend_from_slice(&(b.len() as u64).to_le_bytes());
    buf.extend_from_slice(b);
}

pub fn encode(s: &RiemannSolve) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    put_bytes(&mut buf, s.domain.to_json()?.as_bytes());
    buf.extend_from_slice(&(s.n_nodes as u64).to_le_bytes());
    put_f64(&mut buf, s.base_point.re);
    put_f64(&mut buf, s.base_point.im);
    for v in [&s.nodes, &s.dz, &s.szego, &s.boundary_map] {
        put_c64s(&mut buf, v);
    }
    for x in [
        s.szego_aa,
        s.residual,
        s.condition_estimate,
        s.error_estimate,
    ] {
        put_f64(&mut buf, x);
    }
    match &s.warning {
        Some(w) => {
            buf.push(1);
            put_bytes(&mut buf, w.as_bytes());
        }
        None => buf.push(0),
    }
    Ok(buf)
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.0.len() < n {
            return Err(Error::Solver("truncated Riemann cache file".into()));
        }
        let (a, b) = self.0.split_at(n);
        self.0 = b;
        Ok(a)
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
    fn c64s(&mut self) -> Result<Vec<C64>> {
        let n = self.u64()? as usize;
        (0..n)
            .map(|_| Ok(C64::new(self.f64()?, self.f64()?)))
            .collect()
    }
    fn bytes(&mut self) -> Result<Vec<u8>> {
        let n = self.u64()? as usize;
        Ok(self.take(n)?.to_vec())
    }
}

pub fn decode(bytes: &[u8]) -> Result<RiemannSolve> {
    let mut r = Reader(bytes);
    if r.take(MAGIC.len())? != MAGIC {
        return Err(Error::Solver("not a Riemann cache file".into()));
    }
    let json = String::from_utf8(r.bytes()?).map_err(|e| Error::Solver(e.to_string()))?;
    let domain = DomainSpec::from_json(&json)?;
    let n_nodes = r.u64()? as usize;
    let base_point = C64::new(r.f64()?, r.f64()?);
    let nodes = r.c64s()?;
    let dz = r.c64s()?;
    let szego = r.c64s()?;
    let boundary_map = r.c64s()?;
    let szego_aa = r.f64()?;
    let residual = r.f64()?;
    let condition_estimate = r.f64()?;
    let error_estimate = r.f64()?;
    let warning = match r.take(1)?[0] {
        0 => None,
        _ => Some(String::from_utf8(r.bytes()?).map_err(|e| Error::Solver(e.to_string()))?),
    };
    Ok(RiemannSolve {
        domain,
        base_point,
        n_nodes,
        nodes,
        dz,
        szego,
        boundary_map,
        szego_aa,
        residual,
        condition_estimate,
        error_estimate,
        warning,
    })
}

pub fn write_sidecar(path: &Path, s: &RiemannSolve) -> Result<()> {
    let bytes = encode(s)?;
    let tmp = path.with_extension("imlrs.tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&bytes)?;
    f.sync_all()?;
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn read_sidecar(path: &Path, expected: &DomainSpec) -> Result<RiemannSolve> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let s = decode(&bytes)?;
    if &s.domain != expected {
        return Err(Error::Solver("cache file belongs to another domain".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_round_trip_is_bit_exact() {
        let d = crate::domain::lookup("blob-jordan").unwrap();
        let s = RiemannSolve::new(&d, C64::new(0.0, 0.0), 64).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.imlrs");
        write_sidecar(&p, &s).unwrap();
        let back = read_sidecar(&p, &d).unwrap();
        assert_eq!(encode(&s).unwrap(), encode(&back).unwrap());
        assert_eq!(s.szego_aa.to_bits(), back.szego_aa.to_bits());
    }

    #[test]
    fn key_depends_on_node_count() {
        let d = crate::domain::lookup("blob-jordan").unwrap();
        let z = C64::new(0.0, 0.0);
        assert_ne!(
            cache_key(&d, z, 64).unwrap(),
            cache_key(&d, z, 128).unwrap()
        );
    }

    #[test]
    fn memory_cache_shares_solves() {
        let d = crate::domain::lookup("unit-disc-jordan").unwrap();
        let a = cached_riemann_map(&d, C64::new(0.0, 0.0), 64).unwrap();
        let b = cached_riemann_map(&d, C64::new(0.0, 0.0), 64).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}

//! Bit-exact binary snapshot format.
//!
//! Layout (all integers little-endian u32, all reals little-endian f64):
//!
//! ```text
//! magic  "SCNS1"                              5 bytes
//! u32    d, n, N, K
//! f64    t, L, a, gamma, mu, eta, M0, epsilon, delta, Gamma, R
//! f64    rho samples, row-major               n^d values
//! f64    u components, row-major per component d * n^d values
//! ```

use crate::model::ModelParams;
use crate::spectral::{SpectralField, SpectralVectorField, TorusGrid};
use crate::{Error, Result};
use std::io::{Read, Write};

use super::state::State;

pub const SNAPSHOT_MAGIC: &[u8; 5] = b"SCNS1";

pub fn write_snapshot<W: Write>(
    w: &mut W,
    state: &State,
    params: &ModelParams,
    k_noise: usize,
) -> Result<()> {
    let grid = state.grid();
    w.write_all(SNAPSHOT_MAGIC)?;
    for v in [
        grid.dim() as u32,
        grid.points() as u32,
        grid.cutoff() as u32,
        k_noise as u32,
    ] {
        w.write_all(&v.to_le_bytes())?;
    }
    for v in [
        state.t,
        grid.length(),
        params.a,
        params.gamma,
        params.mu,
        params.eta,
        params.m0,
        params.epsilon,
        params.delta,
        params.gamma_art,
        params.r_trunc,
    ] {
        w.write_all(&v.to_le_bytes())?;
    }
    let rho = state.rho.to_samples();
    for &v in rho.samples() {
        w.write_all(&v.to_le_bytes())?;
    }
    for c in state.u.components() {
        let c = c.to_samples();
        for &v in c.samples() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

/// Decoded snapshot: the state plus the parameters it was produced under.
pub struct Snapshot {
    pub state: State,
    pub params: ModelParams,
    pub k_noise: usize,
}

pub fn read_snapshot<R: Read>(r: &mut R) -> Result<Snapshot> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::SnapshotFormat(format!(
            "bad magic {:?}, expected {:?}",
            magic, SNAPSHOT_MAGIC
        )));
    }
    let d = read_u32(r)? as usize;
    let n = read_u32(r)? as usize;
    let cutoff = read_u32(r)? as usize;
    let k_noise = read_u32(r)? as usize;
    let t = read_f64(r)?;
    let length = read_f64(r)?;
    let grid = TorusGrid::new(d, n, cutoff, length)
        .map_err(|e| Error::SnapshotFormat(format!("invalid grid header: {e}")))?;
    let params = ModelParams {
        a: read_f64(r)?,
        gamma: read_f64(r)?,
        mu: read_f64(r)?,
        eta: read_f64(r)?,
        m0: read_f64(r)?,
        epsilon: read_f64(r)?,
        delta: read_f64(r)?,
        gamma_art: read_f64(r)?,
        r_trunc: read_f64(r)?,
        k_noise,
    };
    let size = grid.size();
    let mut rho = vec![0.0; size];
    for v in rho.iter_mut() {
        *v = read_f64(r)?;
    }
    let mut comps = Vec::with_capacity(d);
    for _ in 0..d {
        let mut c = vec![0.0; size];
        for v in c.iter_mut() {
            *v = read_f64(r)?;
        }
        comps.push(SpectralField::from_samples(grid, c)?);
    }
    let state = State::from_trusted_samples(
        t,
        SpectralField::from_samples(grid, rho)?,
        SpectralVectorField::new(comps)?,
    )?;
    Ok(Snapshot {
        state,
        params,
        k_noise,
    })
}

/// Serializes a state to bytes (used for byte-identity assertions).
pub fn snapshot_bytes(state: &State, params: &ModelParams, k_noise: usize) -> Vec<u8> {
    let mut buf = Vec::new();
    write_snapshot(&mut buf, state, params, k_noise).expect("in-memory write");
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_roundtrip() {
        let grid = TorusGrid::new(2, 12, 2, 2.0).unwrap();
        let params = ModelParams::default();
        let rho = SpectralField::from_fn(grid, |x| 1.0 + 0.1 * (x[0] * 3.14).cos());
        let u = SpectralVectorField::from_fn(grid, |i, x| 0.05 * ((i + 1) as f64 * x[1]).sin());
        let state = State::new(0.75, rho, u).unwrap();
        let bytes = snapshot_bytes(&state, &params, 8);
        let snap = read_snapshot(&mut bytes.as_slice()).unwrap();
        assert_eq!(snap.state.t, state.t);
        assert_eq!(snap.k_noise, 8);
        assert_eq!(snap.params, params);
        let before = state.rho.to_samples();
        let after = snap.state.rho.to_samples();
        assert_eq!(before.samples(), after.samples());
        // re-encode is byte-identical
        let bytes2 = snapshot_bytes(&snap.state, &snap.params, snap.k_noise);
        assert_eq!(bytes, bytes2);
    }

    #[test]
    fn bad_magic_is_rejected() {
        let err = read_snapshot(&mut &b"NOPE!xxxxxxxx"[..]);
        assert!(err.is_err());
    }
}

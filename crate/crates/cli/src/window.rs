//! Window specifications and the raw window file format.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gabiter_core::{gaussian_window, monster_window, sech_window, Complex64, GaborLattice, Signal};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum WindowSpec {
    Gauss(f64),
    Sech(f64),
    Monster(f64),
    File(PathBuf),
}

impl FromStr for WindowSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("window spec {s:?} is not <kind>:<arg>")))?;
        let number = || {
            arg.parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0 && v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("window parameter {arg:?} must be a positive number")))
        };
        match kind {
            "gauss" => Ok(WindowSpec::Gauss(number()?)),
            "sech" => Ok(WindowSpec::Sech(number()?)),
            "monster" => Ok(WindowSpec::Monster(number()?)),
            "file" if !arg.is_empty() => Ok(WindowSpec::File(PathBuf::from(arg))),
            _ => Err(CliError::Usage(format!("unknown window spec {s:?}"))),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Gauss(w) => write!(f, "gauss:{w}"),
            WindowSpec::Sech(w) => write!(f, "sech:{w}"),
            WindowSpec::Monster(s) => write!(f, "monster:{s}"),
            WindowSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl WindowSpec {
    pub fn build(&self, lattice: &GaborLattice) -> Result<Signal, CliError> {
        match self {
            WindowSpec::Gauss(w) => Ok(gaussian_window(lattice.len, *w)),
            WindowSpec::Sech(w) => Ok(sech_window(lattice.len, *w)),
            WindowSpec::Monster(sigma) => Ok(monster_window(lattice, *sigma)?),
            WindowSpec::File(path) => read_window(path, lattice.len),
        }
    }

    /// Same family with another width; MONSTER and files have none.
    pub fn with_width(&self, w: f64) -> Option<WindowSpec> {
        match self {
            WindowSpec::Gauss(_) => Some(WindowSpec::Gauss(w)),
            WindowSpec::Sech(_) => Some(WindowSpec::Sech(w)),
            _ => None,
        }
    }
}

/// Little-endian (re, im) pairs of 64-bit floats, no header.
pub fn write_window(path: &Path, g: &Signal) -> Result<(), CliError> {
    let mut bytes = Vec::with_capacity(16 * g.len());
    for z in g.values() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_window(path: &Path, len: usize) -> Result<Signal, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.len() != 16 * len {
        return Err(CliError::Usage(format!(
            "{}: expected {} complex samples ({} bytes), found {} bytes",
            path.display(),
            len,
            16 * len,
            bytes.len()
        )));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let values = bytes.chunks_exact(16).map(|c| Complex64::new(f(&c[..8]), f(&c[8..]))).collect();
    Ok(Signal::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        assert_eq!("gauss:1".parse::<WindowSpec>().unwrap(), WindowSpec::Gauss(1.0));
        assert_eq!("sech:0.2".parse::<WindowSpec>().unwrap(), WindowSpec::Sech(0.2));
        assert_eq!("monster:6".parse::<WindowSpec>().unwrap(), WindowSpec::Monster(6.0));
        assert_eq!("file:/x/y.bin".parse::<WindowSpec>().unwrap(), WindowSpec::File("/x/y.bin".into()));
        for bad in ["gauss", "gauss:-1", "gauss:abc", "box:2", "file:", "sech:inf"] {
            assert!(bad.parse::<WindowSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["gauss:0.2", "sech:3", "monster:6"] {
            assert_eq!(s.parse::<WindowSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn file_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.bin");
        let g = Signal::new((0..24).map(|k| Complex64::new(k as f64 / 7.0, -1.0 / (k as f64 + 3.0))).collect());
        write_window(&path, &g).unwrap();
        assert_eq!(fs::metadata(&path).unwrap().len(), 24 * 16);
        assert_eq!(read_window(&path, 24).unwrap(), g);
        assert!(read_window(&path, 25).is_err());
    }
}

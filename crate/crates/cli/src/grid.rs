use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Largest prime accepted on the grid.
pub const MAX_PRIME: u64 = 7;
/// Largest `p^{r+j}` accepted on the grid.
pub const MAX_TWIST: u64 = 729;
/// Largest `m` accepted on the grid.
pub const MAX_M: u32 = 8;
/// Largest square matrix the suites will build.
pub const MAX_MATRIX_DIM: usize = 1000;

/// Parameter grid. Every suite draws the axes it needs from here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub p: Vec<u64>,
    pub r: Vec<u32>,
    pub j: Vec<u32>,
    pub m: Vec<u32>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            p: vec![2, 3],
            r: vec![1, 2],
            j: vec![0, 1],
            m: vec![1, 2],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn parse_values<T>(key: &str, s: &str) -> Result<Vec<T>, ConfigError>
where
    T: FromStr + Copy + Ord + TryFrom<u64>,
{
    let bad = || ConfigError(format!("bad value list for {key}: {s:?}"));
    let num = |x: &str| x.trim().parse::<T>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in s.split(',') {
        if let Some((lo, hi)) = part.split_once("..") {
            let (lo, hi): (u64, u64) = (
                lo.trim().parse().map_err(|_| bad())?,
                hi.trim().parse().map_err(|_| bad())?,
            );
            if hi < lo || hi - lo > 64 {
                return Err(bad());
            }
            for v in lo..=hi {
                out.push(T::try_from(v).map_err(|_| bad())?);
            }
        } else {
            out.push(num(part)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl FromStr for Grid {
    type Err = ConfigError;

    /// `p=2,3;r=1..2;j=0;m=1..2`. Missing axes keep their defaults.
    fn from_str(s: &str) -> Result<Grid, ConfigError> {
        let mut grid = Grid::default();
        for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, values) = item
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("grid entry {item:?} is not key=values")))?;
            match key.trim() {
                "p" => grid.p = parse_values(key, values)?,
                "r" => grid.r = parse_values(key, values)?,
                "j" => grid.j = parse_values(key, values)?,
                "m" => grid.m = parse_values(key, values)?,
                other => return Err(ConfigError(format!("unknown grid axis {other:?}"))),
            }
        }
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        write!(
            f,
            "p={};r={};j={};m={}",
            join(self.p.iter().map(u64::to_string).collect()),
            join(self.r.iter().map(u32::to_string).collect()),
            join(self.j.iter().map(u32::to_string).collect()),
            join(self.m.iter().map(u32::to_string).collect())
        )
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl Grid {
    /// Rejects anything outside the hard caps before any work is done.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.p.is_empty() || self.r.is_empty() || self.j.is_empty() || self.m.is_empty() {
            return Err(ConfigError("every grid axis needs at least one value".into()));
        }
        for &p in &self.p {
            if !is_prime(p) {
                return Err(ConfigError(format!("{p} is not prime")));
            }
            if p > MAX_PRIME {
                return Err(ConfigError(format!("prime {p} exceeds the cap {MAX_PRIME}")));
            }
        }
        if self.r.contains(&0) {
            return Err(ConfigError("r must be at least 1".into()));
        }
        if self.m.contains(&0) {
            return Err(ConfigError("m must be at least 1".into()));
        }
        if let Some(&m) = self.m.iter().find(|&&m| m > MAX_M) {
            return Err(ConfigError(format!("m = {m} exceeds the cap {MAX_M}")));
        }
        let (pmax, rmax, jmax) = (
            *self.p.iter().max().unwrap(),
            *self.r.iter().max().unwrap(),
            *self.j.iter().max().unwrap(),
        );
        match pmax.checked_pow(rmax + jmax) {
            Some(q) if q <= MAX_TWIST => Ok(()),
            _ => Err(ConfigError(format!(
                "p^(r+j) = {pmax}^{} exceeds the cap {MAX_TWIST}",
                rmax + jmax
            ))),
        }
    }
}

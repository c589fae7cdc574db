//! Combinatorial index criterion and the table of strata.
//!
//! A stratum with m >= 1 has index p^m + 1 and needs m | σ, σ/m odd, and
//! every nonzero moduli slot at an index divisible by 2m. m = 0 stands for the
//! ±1 stratum with index 2 and no slot constraints.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_SIGMA: usize = 10;

/// Zero / nonzero flag for each moduli slot a_1..a_(σ-1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroPattern {
    sigma: usize,
    nonzero: Vec<bool>,
}

impl ZeroPattern {
    pub fn new(sigma: usize, nonzero: Vec<bool>) -> Result<Self> {
        check_sigma(sigma)?;
        if nonzero.len() != sigma - 1 {
            return Err(Error::DimensionMismatch {
                expected: sigma - 1,
                got: nonzero.len(),
            });
        }
        Ok(Self { sigma, nonzero })
    }

    pub fn all_zero(sigma: usize) -> Result<Self> {
        Self::new(sigma, vec![false; sigma.saturating_sub(1)])
    }

    /// Every slot nonzero.
    pub fn generic(sigma: usize) -> Result<Self> {
        Self::new(sigma, vec![true; sigma.saturating_sub(1)])
    }

    /// Comma-separated 0/1 flags, e.g. "0,1,0"; empty for σ = 1.
    pub fn parse(sigma: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        let flags = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| match t.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::Parse(format!(
                        "pattern entry {other:?} is not 0 or 1"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(sigma, flags)
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn flags(&self) -> &[bool] {
        &self.nonzero
    }

    /// Whether a_i (1-based) is nonzero.
    pub fn is_nonzero(&self, i: usize) -> bool {
        self.nonzero[i - 1]
    }

    pub fn is_all_zero(&self) -> bool {
        self.nonzero.iter().all(|f| !f)
    }

    pub fn nonzero_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.nonzero
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(i, _)| i + 1)
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .nonzero
            .iter()
            .map(|&b| if b { "1" } else { "0" })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for ZeroPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<u8> = self.nonzero.iter().map(|&b| b as u8).collect();
        v.serialize(s)
    }
}

fn check_sigma(sigma: usize) -> Result<()> {
    if (1..=MAX_SIGMA).contains(&sigma) {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

/// Serialize a big integer as a JSON number when it fits in u64, else as a decimal string.
pub fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(u) => s.serialize_u64(u),
        None => s.serialize_str(&v.to_string()),
    }
}

fn serialize_opt_big<S: Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => serialize_big(b, s),
        None => s.serialize_none(),
    }
}

/// m >= 1 with m | σ and σ/m odd, ignoring slot constraints.
pub fn divisor_candidates(sigma: usize) -> Vec<usize> {
    (1..=sigma)
        .filter(|m| sigma.is_multiple_of(*m) && (sigma / m) % 2 == 1)
        .collect()
}

pub fn admissible_m(sigma: usize, pattern: &ZeroPattern) -> Result<Vec<usize>> {
    check_sigma(sigma)?;
    if pattern.sigma() != sigma {
        return Err(Error::DimensionMismatch {
            expected: sigma,
            got: pattern.sigma(),
        });
    }
    Ok(divisor_candidates(sigma)
        .into_iter()
        .filter(|m| pattern.nonzero_slots().all(|i| i % (2 * m) == 0))
        .collect())
}

/// p^m + 1 for m >= 1, 2 for m = 0.
pub fn stratum_index(p: u64, m: usize) -> BigUint {
    if m == 0 {
        BigUint::from(2u32)
    } else {
        BigUint::from(p).pow(m as u32) + BigUint::one()
    }
}

pub fn symbolic_index(m: usize) -> String {
    match m {
        0 => "2".into(),
        1 => "p+1".into(),
        _ => format!("p^{m}+1"),
    }
}

pub fn stratum_dimension(sigma: usize, m: usize) -> Result<usize> {
    check_sigma(sigma)?;
    if m == 0 {
        return Ok(sigma - 1);
    }
    if !divisor_candidates(sigma).contains(&m) {
        return Err(Error::InadmissibleM { sigma, m });
    }
    Ok((sigma - 1) / (2 * m))
}

pub fn family_label(m: usize, dimension: usize) -> String {
    if m == 0 {
        "generic".into()
    } else if dimension == 0 {
        "unique".into()
    } else {
        format!("{dimension} dimensional")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub m: usize,
    pub symbolic: String,
    #[serde(serialize_with = "serialize_opt_big")]
    pub index: Option<BigUint>,
    pub dimension: usize,
    pub label: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexResult {
    pub p: u64,
    pub sigma: usize,
    pub pattern: ZeroPattern,
    pub admissible_m: Vec<usize>,
    pub m: usize,
    #[serde(serialize_with = "serialize_big")]
    pub index: BigUint,
    pub source: &'static str,
}

pub fn nonsymplectic_index(p: u64, sigma: usize, pattern: &ZeroPattern) -> Result<IndexResult> {
    if p < 5 || !crate::arith::is_prime(p) {
        return Err(if crate::arith::is_prime(p) {
            Error::CharacteristicTooSmall(p)
        } else {
            Error::NotPrime(p)
        });
    }
    let admissible = admissible_m(sigma, pattern)?;
    let m = admissible.last().copied().unwrap_or(0);
    Ok(IndexResult {
        p,
        sigma,
        pattern: pattern.clone(),
        admissible_m: admissible,
        m,
        index: stratum_index(p, m),
        source: "criterion",
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub sigma: usize,
    pub strata: Vec<Stratum>,
}

/// All strata for σ = 1..=10; numeric indices only when `p` is given.
pub fn table1(p: Option<u64>) -> Vec<TableRow> {
    (1..=MAX_SIGMA)
        .map(|sigma| {
            let mut ms = Vec::new();
            if sigma >= 2 {
                ms.push(0);
            }
            ms.extend(divisor_candidates(sigma));
            let strata = ms
                .into_iter()
                .map(|m| {
                    let dimension = stratum_dimension(sigma, m).expect("candidates are admissible");
                    Stratum {
                        m,
                        symbolic: symbolic_index(m),
                        index: p.map(|p| stratum_index(p, m)),
                        dimension,
                        label: family_label(m, dimension),
                    }
                })
                .collect();
            TableRow { sigma, strata }
        })
        .collect()
}

/// Aligned text rendering: one line per stratum, σ shown on the first line of each group.
pub fn render_table(rows: &[TableRow]) -> String {
    let cells: Vec<(String, String, String)> = rows
        .iter()
        .flat_map(|row| {
            row.strata.iter().enumerate().map(move |(i, s)| {
                (
                    if i == 0 {
                        row.sigma.to_string()
                    } else {
                        String::new()
                    },
                    s.index
                        .as_ref()
                        .map_or_else(|| s.symbolic.clone(), |b| b.to_string()),
                    s.label.clone(),
                )
            })
        })
        .collect();
    let header = (
        "sigma".to_string(),
        "non-symplectic index".to_string(),
        "family".to_string(),
    );
    let w0 = cells
        .iter()
        .map(|c| c.0.len())
        .chain([header.0.len()])
        .max()
        .unwrap_or(0);
    let w1 = cells
        .iter()
        .map(|c| c.1.len())
        .chain([header.1.len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let mut line = |a: &str, b: &str, c: &str| {
        out.push_str(format!("{a:<w0$} | {b:<w1$} | {c}").trim_end());
        out.push('\n');
    };
    line(&header.0, &header.1, &header.2);
    line(&"-".repeat(w0), &"-".repeat(w1), "------");
    for (a, b, c) in &cells {
        line(a, b, c);
    }
    out
}

//! Seeded instance generators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::harness::io::{InstanceFile, MatroidDesc, Metadata};
use crate::matroid::Matroid;
use crate::rng::{derive_seed, rng_from};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// Random multigraph without loops on this many vertices.
    Graphic { vertices: usize },
    /// Random nonzero columns of this dimension over GF(field).
    Linear { field: u64, dim: usize },
    /// Random assignment to at most this many blocks with random capacities.
    Partition { blocks: usize },
    Uniform { rank: usize },
    Free,
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RandomKind::Graphic { vertices } => write!(f, "graphic:{vertices}"),
            RandomKind::Linear { field, dim } => write!(f, "linear:{field}:{dim}"),
            RandomKind::Partition { blocks } => write!(f, "partition:{blocks}"),
            RandomKind::Uniform { rank } => write!(f, "uniform:{rank}"),
            RandomKind::Free => write!(f, "free"),
        }
    }
}

impl FromStr for RandomKind {
    type Err = Error;

    /// `graphic:V`, `linear:P:D`, `partition:B`, `uniform:R` or `free`.
    fn from_str(s: &str) -> Result<RandomKind> {
        let fields: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64> {
            fields
                .get(i)
                .ok_or_else(|| Error::Parse(format!("{s:?} is missing a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in {s:?}")))
        };
        let kind = match (fields[0], fields.len()) {
            ("graphic", 2) => RandomKind::Graphic { vertices: num(1)? as usize },
            ("linear", 3) => RandomKind::Linear { field: num(1)?, dim: num(2)? as usize },
            ("partition", 2) => RandomKind::Partition { blocks: num(1)? as usize },
            ("uniform", 2) => RandomKind::Uniform { rank: num(1)? as usize },
            ("free", 1) => RandomKind::Free,
            _ => return Err(Error::Parse(format!("unknown matroid kind {s:?}"))),
        };
        Ok(kind)
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

fn random_desc<R: Rng>(kind: RandomKind, names: &[String], rng: &mut R) -> Result<MatroidDesc> {
    let n = names.len();
    Ok(match kind {
        RandomKind::Graphic { vertices } => {
            if vertices < 2 && n > 0 {
                return Err(Error::Contract("a loopless graph with edges needs two vertices".into()));
            }
            let edges = names
                .iter()
                .map(|l| {
                    let u = rng.random_range(0..vertices);
                    let w = (u + rng.random_range(1..vertices)) % vertices;
                    (u.min(w), u.max(w), l.clone())
                })
                .collect();
            MatroidDesc::Graphic { vertices, edges }
        }
        RandomKind::Linear { field, dim } => {
            if !is_prime(field) || dim == 0 {
                return Err(Error::Contract(format!("need a prime field and positive dimension, got {field}, {dim}")));
            }
            let mut columns = BTreeMap::new();
            for l in names {
                let col = loop {
                    let c: Vec<i64> = (0..dim).map(|_| rng.random_range(0..field) as i64).collect();
                    if c.iter().any(|&v| v != 0) {
                        break c;
                    }
                };
                columns.insert(l.clone(), col);
            }
            MatroidDesc::Linear { field, columns }
        }
        RandomKind::Partition { blocks } => {
            let blocks = blocks.max(1);
            let mut parts = vec![Vec::new(); blocks];
            for l in names {
                parts[rng.random_range(0..blocks)].push(l.clone());
            }
            parts.retain(|p| !p.is_empty());
            let capacities = parts.iter().map(|p| rng.random_range(1..=p.len())).collect();
            MatroidDesc::Partition { parts, capacities }
        }
        RandomKind::Uniform { rank } => MatroidDesc::Uniform { rank: rank.clamp(1, n.max(1)) },
        RandomKind::Free => MatroidDesc::Free {},
    })
}

/// Instance on elements `e0..e{n-1}` with one random matroid per kind; the
/// `i`-th matroid draws from the stream `derive_seed(seed, [i])`.
pub fn gen_random(kinds: &[RandomKind], n: usize, seed: u64) -> Result<InstanceFile> {
    let names = labels(n);
    let matroids = kinds
        .iter()
        .enumerate()
        .map(|(i, &k)| random_desc(k, &names, &mut rng_from(derive_seed(seed, &[i as u64]))))
        .collect::<Result<Vec<_>>>()?;
    let generator = kinds.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    Ok(InstanceFile {
        ground_set: names,
        matroids,
        metadata: Some(Metadata { seed: Some(seed), generator: Some(format!("random n={n} {generator}")) }),
    })
}

/// `r` bases of GF(p)^r, one per row; element `(i, j)` is vector `j` of
/// basis `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotaInstance {
    pub r: usize,
    pub p: u64,
    pub rows: Vec<Vec<Vec<i64>>>,
}

pub const ROTA_RETRIES: usize = 1000;

impl RotaInstance {
    /// Validates that every row is a basis.
    pub fn from_rows(p: u64, rows: Vec<Vec<Vec<i64>>>) -> Result<RotaInstance> {
        let r = rows.len();
        if !is_prime(p) {
            return Err(Error::Contract(format!("{p} is not prime")));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != r || row.iter().any(|v| v.len() != r) {
                return Err(Error::Domain(format!("row {i} is not {r} vectors of length {r}")));
            }
            if Matroid::linear(p, row)?.full_rank() != r {
                return Err(Error::Domain(format!("row {i} is not a basis")));
            }
        }
        Ok(RotaInstance { r, p, rows })
    }

    pub fn label(i: usize, j: usize) -> String {
        format!("b{i}_{j}")
    }

    /// Linear matroid on all vectors, and the partition matroid of the rows.
    pub fn to_file(&self, seed: Option<u64>) -> InstanceFile {
        let mut ground = Vec::with_capacity(self.r * self.r);
        let mut columns = BTreeMap::new();
        let mut parts = Vec::with_capacity(self.r);
        for (i, row) in self.rows.iter().enumerate() {
            let mut part = Vec::with_capacity(self.r);
            for (j, v) in row.iter().enumerate() {
                let l = RotaInstance::label(i, j);
                ground.push(l.clone());
                columns.insert(l.clone(), v.clone());
                part.push(l);
            }
            parts.push(part);
        }
        InstanceFile {
            ground_set: ground,
            matroids: vec![
                MatroidDesc::Linear { field: self.p, columns },
                MatroidDesc::Partition { capacities: vec![1; parts.len()], parts },
            ],
            metadata: Some(Metadata { seed, generator: Some(format!("rota r={} p={}", self.r, self.p)) }),
        }
    }
}

/// Each row is a uniformly random invertible `r x r` matrix over GF(p),
/// found by rejection.
pub fn gen_rota(r: usize, p: u64, seed: u64) -> Result<RotaInstance> {
    if r == 0 {
        return Err(Error::Contract("rank must be positive".into()));
    }
    if !is_prime(p) {
        return Err(Error::Contract(format!("{p} is not prime")));
    }
    let mut rng = rng_from(seed);
    let mut rows = Vec::with_capacity(r);
    for i in 0..r {
        let mut found = None;
        for _ in 0..ROTA_RETRIES {
            let row: Vec<Vec<i64>> =
                (0..r).map(|_| (0..r).map(|_| rng.random_range(0..p) as i64).collect()).collect();
            if row.iter().all(|v| v.iter().any(|&x| x != 0)) && Matroid::linear(p, &row)?.full_rank() == r {
                found = Some(row);
                break;
            }
        }
        rows.push(found.ok_or_else(|| {
            Error::Refusal(format!("no basis found for row {i} after {ROTA_RETRIES} draws (r={r}, p={p})"))
        })?);
    }
    RotaInstance::from_rows(p, rows)
}

//! Synthetic test measures, addressable by short spec strings such as
//! `grid:d=2,m=50,r=1`, `twodirac:gap=1` or `sample:dist=pareto,q=2,N=10000`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto, StandardNormal};

use super::{Atom, DiscreteMeasure, Point};
use crate::error::{Error, Result};

const MAX_GRID_ATOMS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleDist {
    /// Standard normal coordinates.
    Gaussian,
    /// Symmetric Lomax coordinates: `|X|` satisfies `P(|X| > t) = (1 + t)^{-shape}`,
    /// so moments of order below `shape` are finite.
    Pareto { shape: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Uniform weights on the regular `m^d` grid spanning `[-r, r]^d`
    /// (endpoints included; `m = 1` is the single point at the origin).
    Grid { dim: usize, per_axis: usize, radius: f64 },
    /// `(delta_{-gap} + delta_{+gap}) / 2` on the line.
    TwoDirac { gap: f64 },
    /// `count` i.i.d. draws with weight `1/count` each.
    Sample { dist: SampleDist, count: usize, dim: usize, seed: u64 },
}

impl GeneratorSpec {
    /// Replace the seed of a sampling spec; other specs are returned as is.
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            GeneratorSpec::Sample { dist, count, dim, .. } => {
                GeneratorSpec::Sample { dist, count, dim, seed }
            }
            other => other,
        }
    }
}

pub fn synth(spec: &GeneratorSpec) -> Result<DiscreteMeasure> {
    match *spec {
        GeneratorSpec::Grid { dim, per_axis, radius } => grid(dim, per_axis, radius),
        GeneratorSpec::TwoDirac { gap } => {
            if !(gap.is_finite() && gap >= 0.0) {
                return Err(Error::InvalidSpec(format!("gap must be finite and >= 0, got {gap}")));
            }
            DiscreteMeasure::new(
                1,
                vec![Atom::new(Point::new(vec![-gap])?, 0.5), Atom::new(Point::new(vec![gap])?, 0.5)],
            )
        }
        GeneratorSpec::Sample { dist, count, dim, seed } => sample(dist, count, dim, seed),
    }
}

fn grid(dim: usize, per_axis: usize, radius: f64) -> Result<DiscreteMeasure> {
    if dim < 1 || per_axis < 1 {
        return Err(Error::InvalidSpec("grid needs d >= 1 and m >= 1".into()));
    }
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::InvalidSpec(format!("grid radius must be finite and >= 0, got {radius}")));
    }
    let total = (per_axis as u128).checked_pow(dim as u32).filter(|&t| t <= MAX_GRID_ATOMS as u128);
    let total = total.ok_or_else(|| Error::InvalidSpec("grid too large".into()))? as usize;

    let ticks: Vec<f64> = if per_axis == 1 {
        vec![0.0]
    } else {
        (0..per_axis).map(|i| -radius + 2.0 * radius * i as f64 / (per_axis - 1) as f64).collect()
    };
    let weight = 1.0 / total as f64;
    let atoms = (0..total)
        .map(|mut flat| {
            let mut coords = vec![0.0; dim];
            for axis in (0..dim).rev() {
                coords[axis] = ticks[flat % per_axis];
                flat /= per_axis;
            }
            Atom::new(Point::new_unchecked(coords), weight)
        })
        .collect();
    DiscreteMeasure::new(dim, atoms)
}

fn sample(dist: SampleDist, count: usize, dim: usize, seed: u64) -> Result<DiscreteMeasure> {
    if count < 1 || dim < 1 {
        return Err(Error::InvalidSpec("sample needs N >= 1 and d >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pareto = match dist {
        SampleDist::Pareto { shape } => Some(
            Pareto::new(1.0, shape).map_err(|e| Error::InvalidSpec(format!("pareto shape {shape}: {e}")))?,
        ),
        SampleDist::Gaussian => None,
    };
    let draw = |rng: &mut ChaCha8Rng| -> f64 {
        match &pareto {
            None => StandardNormal.sample(rng),
            Some(p) => {
                let magnitude: f64 = p.sample(rng) - 1.0;
                if rng.random::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
        }
    };
    let points = (0..count)
        .map(|_| Point::new((0..dim).map(|_| draw(&mut rng)).collect()))
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::uniform(dim, points)
}

fn parse_keys(body: &str) -> Result<BTreeMap<String, String>> {
    let mut keys = BTreeMap::new();
    for pair in body.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("expected key=value, got {pair:?}")))?;
        keys.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(keys)
}

fn take<T: FromStr>(keys: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    keys.remove(key)
        .map(|v| v.parse().map_err(|_| Error::InvalidSpec(format!("bad value for {key}: {v:?}"))))
        .transpose()
}

fn require<T: FromStr>(keys: &mut BTreeMap<String, String>, key: &str) -> Result<T> {
    take(keys, key)?.ok_or_else(|| Error::InvalidSpec(format!("missing key {key}")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let mut keys = parse_keys(body)?;
        let spec = match kind.trim() {
            "grid" => GeneratorSpec::Grid {
                dim: require(&mut keys, "d")?,
                per_axis: require(&mut keys, "m")?,
                radius: take(&mut keys, "r")?.unwrap_or(1.0),
            },
            "twodirac" => GeneratorSpec::TwoDirac { gap: take(&mut keys, "gap")?.unwrap_or(1.0) },
            "sample" => {
                let dist = match require::<String>(&mut keys, "dist")?.as_str() {
                    "gaussian" => SampleDist::Gaussian,
                    "pareto" => SampleDist::Pareto { shape: require(&mut keys, "q")? },
                    other => return Err(Error::InvalidSpec(format!("unknown dist {other:?}"))),
                };
                GeneratorSpec::Sample {
                    dist,
                    count: require(&mut keys, "N")?,
                    dim: take(&mut keys, "d")?.unwrap_or(1),
                    seed: take(&mut keys, "seed")?.unwrap_or(0),
                }
            }
            other => return Err(Error::InvalidSpec(format!("unknown generator {other:?}"))),
        };
        if let Some(extra) = keys.keys().next() {
            return Err(Error::InvalidSpec(format!("unexpected key {extra:?}")));
        }
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Grid { dim, per_axis, radius } => {
                write!(f, "grid:d={dim},m={per_axis},r={radius}")
            }
            GeneratorSpec::TwoDirac { gap } => write!(f, "twodirac:gap={gap}"),
            GeneratorSpec::Sample { dist, count, dim, seed } => {
                match dist {
                    SampleDist::Gaussian => write!(f, "sample:dist=gaussian")?,
                    SampleDist::Pareto { shape } => write!(f, "sample:dist=pareto,q={shape}")?,
                }
                write!(f, ",N={count},d={dim},seed={seed}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(m: &DiscreteMeasure) -> Vec<(Vec<f64>, f64)> {
        m.atoms().iter().map(|a| (a.point.coords().to_vec(), a.weight)).collect()
    }

    #[test]
    fn two_point_grid() {
        let m = synth(&"grid:d=1,m=2,r=1".parse().unwrap()).unwrap();
        assert_eq!(pairs(&m), vec![(vec![-1.0], 0.5), (vec![1.0], 0.5)]);
    }

    #[test]
    fn two_dirac() {
        let m = synth(&GeneratorSpec::TwoDirac { gap: 1.0 }).unwrap();
        assert_eq!(pairs(&m), vec![(vec![-1.0], 0.5), (vec![1.0], 0.5)]);
    }

    #[test]
    fn grid_is_probability_with_expected_radius() {
        let m = synth(&"grid:d=2,m=20,r=1".parse().unwrap()).unwrap();
        assert_eq!(m.len(), 400);
        assert!(m.is_probability());
        assert_eq!(m.bounding_radius().unwrap(), 1.0);
        let single = synth(&"grid:d=3,m=1".parse().unwrap()).unwrap();
        assert_eq!(pairs(&single), vec![(vec![0.0; 3], 1.0)]);
    }

    #[test]
    fn sampling_is_seeded() {
        let spec: GeneratorSpec = "sample:dist=pareto,q=2,N=500,seed=11".parse().unwrap();
        let a = synth(&spec).unwrap();
        assert_eq!(a, synth(&spec).unwrap());
        assert_ne!(a, synth(&spec.clone().with_seed(12)).unwrap());
        assert!(a.is_probability());
        let g = synth(&"sample:dist=gaussian,N=10,d=3".parse().unwrap()).unwrap();
        assert_eq!(g.dim(), 3);
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(synth(&"grid:d=1,m=0".parse().unwrap()), Err(Error::InvalidSpec(_))));
        assert!(matches!(synth(&"sample:dist=gaussian,N=0".parse().unwrap()), Err(Error::InvalidSpec(_))));
        assert!("grid:d=2".parse::<GeneratorSpec>().is_err());
        assert!("cloud:d=2".parse::<GeneratorSpec>().is_err());
        assert!("grid:d=2,m=3,z=1".parse::<GeneratorSpec>().is_err());
        assert!("sample:dist=cauchy,N=3".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn display_parses_back() {
        for s in ["grid:d=2,m=50,r=1", "twodirac:gap=0.5", "sample:dist=pareto,q=2,N=10000"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<GeneratorSpec>().unwrap(), spec);
        }
    }
}

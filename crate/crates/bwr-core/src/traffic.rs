//! Reproducible traffic generation: Poisson arrivals, light-tailed,
//! bounded-Pareto, and empirical flow-size models, uniform random endpoints.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::model::{Flow, NetworkGraph};

/// Default lower bound of the heavy-tailed size model.
pub const HEAVY_TAIL_MIN: f64 = 2.0;
/// Default upper bound of the heavy-tailed size model.
pub const HEAVY_TAIL_MAX: f64 = 500.0;
/// Light-tailed sizes above this are redrawn (rejection sampling); the
/// resulting mean sits slightly below the nominal one (< 0.01% at mean 50).
pub const LIGHT_TAIL_MAX: f64 = 500.0;

/// Flow-size model.
#[derive(Debug, Clone, PartialEq)]
pub enum SizeDistribution {
    /// Exponential with the given mean, truncated to (0, 500] by rejection.
    LightTailed { mean: f64 },
    /// Bounded Pareto on [min, max] with the shape solved from the mean.
    HeavyTailed { mean: f64, min: f64, max: f64 },
    /// Inverse-transform sampling from a tabulated CDF.
    Empirical(CdfTable),
}

/// A complete traffic description: size model, Poisson arrival rate, and
/// how many flows to emit.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficPattern {
    pub sizes: SizeDistribution,
    pub arrival_rate: f64,
    pub flow_count: usize,
}

impl TrafficPattern {
    pub fn validate(&self) -> Result<()> {
        if !(self.arrival_rate.is_finite() && self.arrival_rate > 0.0) {
            return Err(Error::InvalidPattern(format!(
                "arrival rate must be positive, got {}",
                self.arrival_rate
            )));
        }
        if self.flow_count == 0 {
            return Err(Error::InvalidPattern("flow count must be at least 1".into()));
        }
        match &self.sizes {
            SizeDistribution::LightTailed { mean } => {
                if !(mean.is_finite() && *mean > 0.0) {
                    return Err(Error::InvalidPattern(format!(
                        "light-tailed mean must be positive, got {mean}"
                    )));
                }
            }
            SizeDistribution::HeavyTailed { mean, min, max } => {
                // Surfaces unachievable means before any sampling happens.
                BoundedPareto::with_mean(*mean, *min, *max)?;
            }
            SizeDistribution::Empirical(_) => {}
        }
        Ok(())
    }
}

/// Cumulative distribution table: `(size, cumulative probability)` rows with
/// strictly increasing sizes, non-decreasing probabilities, and a final
/// probability of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    rows: Vec<(f64, f64)>,
}

impl CdfTable {
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidCdf("table has no rows".into()));
        }
        let mut prev: Option<(f64, f64)> = None;
        for &(size, prob) in &rows {
            if !(size.is_finite() && size >= 0.0) {
                return Err(Error::InvalidCdf(format!("size {size} must be non-negative")));
            }
            if !(prob.is_finite() && (0.0..=1.0).contains(&prob)) {
                return Err(Error::InvalidCdf(format!(
                    "cumulative probability {prob} outside [0, 1]"
                )));
            }
            if let Some((ps, pp)) = prev {
                if size <= ps {
                    return Err(Error::InvalidCdf(format!(
                        "sizes must strictly increase ({ps} then {size})"
                    )));
                }
                if prob < pp {
                    return Err(Error::InvalidCdf(format!(
                        "probabilities must not decrease ({pp} then {prob})"
                    )));
                }
            }
            prev = Some((size, prob));
        }
        let last = rows.last().unwrap().1;
        if (last - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidCdf(format!(
                "final cumulative probability must be 1, got {last}"
            )));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    /// Inverse CDF with linear interpolation: the smallest tabulated size
    /// whose cumulative probability reaches `u`, interpolated between the
    /// bracketing rows. `u` at or below the first row's probability maps to
    /// the first size.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if u <= self.rows[0].1 {
            return self.rows[0].0;
        }
        let k = self
            .rows
            .iter()
            .position(|&(_, p)| p >= u)
            .expect("last probability is 1");
        let (s0, p0) = self.rows[k - 1];
        let (s1, p1) = self.rows[k];
        // p0 < u <= p1 here, so the bracket has positive probability mass.
        s0 + (u - p0) / (p1 - p0) * (s1 - s0)
    }

    /// Piecewise-linear CDF through the table rows: 0 below the first size,
    /// 1 at and above the last.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.rows[0].0 {
            return 0.0;
        }
        for w in self.rows.windows(2) {
            let (s0, p0) = w[0];
            let (s1, p1) = w[1];
            if x < s1 {
                return p0 + (x - s0) / (s1 - s0) * (p1 - p0);
            }
        }
        1.0
    }

    /// Parses the two-column CSV format: a required `size,cumulative_probability`
    /// header followed by one numeric row per line.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidCdf("empty file".into()))?;
        let normalized: String = header.chars().filter(|c| !c.is_whitespace()).collect();
        if normalized != "size,cumulative_probability" {
            return Err(Error::InvalidCdf(format!(
                "expected header 'size,cumulative_probability', got '{}'",
                header.trim()
            )));
        }
        let mut rows = Vec::new();
        for line in lines {
            let mut cols = line.split(',');
            let size = parse_field(cols.next(), line)?;
            let prob = parse_field(cols.next(), line)?;
            if cols.next().is_some() {
                return Err(Error::InvalidCdf(format!("row '{line}' has more than 2 columns")));
            }
            rows.push((size, prob));
        }
        Self::new(rows)
    }

    pub fn from_csv_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

fn parse_field(field: Option<&str>, line: &str) -> Result<f64> {
    field
        .map(str::trim)
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| Error::InvalidCdf(format!("row '{line}' is not two numbers")))
}

/// Pareto distribution truncated to `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedPareto {
    pub alpha: f64,
    pub min: f64,
    pub max: f64,
}

/// Bisection search range for the shape parameter.
const ALPHA_LOW: f64 = 0.05;
const ALPHA_HIGH: f64 = 20.0;

impl BoundedPareto {
    pub fn new(alpha: f64, min: f64, max: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) || !(min.is_finite() && min > 0.0) || !(max > min) {
            return Err(Error::NoValidShape { mean: f64::NAN, min, max });
        }
        Ok(Self { alpha, min, max })
    }

    /// Solves the shape so the truncated mean equals `mean`, by bisection
    /// over [0.05, 20]. The mean is strictly decreasing in the shape, from
    /// (max − min)/ln(max/min) down to just above min.
    pub fn with_mean(mean: f64, min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && min > 0.0 && max > min && mean.is_finite()) || mean <= min || mean >= max {
            return Err(Error::NoValidShape { mean, min, max });
        }
        let mean_at = |alpha: f64| Self { alpha, min, max }.mean();
        if mean > mean_at(ALPHA_LOW) || mean < mean_at(ALPHA_HIGH) {
            return Err(Error::NoValidShape { mean, min, max });
        }
        let (mut lo, mut hi) = (ALPHA_LOW, ALPHA_HIGH);
        // Bisect until the achieved mean is within 1e-9 of the target.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let m = mean_at(mid);
            if (m - mean).abs() <= 1e-9 {
                return Ok(Self { alpha: mid, min, max });
            }
            if m > mean {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self { alpha: 0.5 * (lo + hi), min, max })
    }

    /// Closed-form mean of the truncated distribution.
    pub fn mean(&self) -> f64 {
        let (a, l, h) = (self.alpha, self.min, self.max);
        if (a - 1.0).abs() < 1e-9 {
            // The a = 1 limit of the general formula.
            return l * h / (h - l) * (h / l).ln();
        }
        let scale = l.powf(a) / (1.0 - (l / h).powf(a));
        scale * a / (a - 1.0) * (l.powf(1.0 - a) - h.powf(1.0 - a))
    }

    /// Inverse-transform draw; always lands in `[min, max]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let tail = 1.0 - u * (1.0 - (self.min / self.max).powf(self.alpha));
        (self.min * tail.powf(-1.0 / self.alpha)).clamp(self.min, self.max)
    }
}

/// One heavy-tailed draw with the shape solved from `mean`.
pub fn sample_bounded_pareto(mean: f64, min: f64, max: f64, seed: u64) -> Result<f64> {
    let dist = BoundedPareto::with_mean(mean, min, max)?;
    Ok(dist.sample(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// One empirical draw via inverse-transform sampling.
pub fn sample_empirical(table: &CdfTable, seed: u64) -> f64 {
    table.quantile(ChaCha8Rng::seed_from_u64(seed).gen())
}

/// Generates `pattern.flow_count` flows: exponential inter-arrival gaps with
/// rate `arrival_rate` (zero gaps redrawn, so arrival times strictly
/// increase), sizes per the size model (non-positive draws redrawn), and
/// endpoints uniform over ordered node pairs. Per flow the draw order is
/// gap, size, source, destination; deterministic given the seed.
pub fn generate_arrivals(
    pattern: &TrafficPattern,
    graph: &NetworkGraph,
    seed: u64,
) -> Result<Vec<Flow>> {
    pattern.validate()?;
    let n = graph.node_count();
    if n < 2 {
        return Err(Error::InvalidPattern(format!(
            "need at least 2 nodes to draw endpoints, graph has {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap_dist = Exp::new(pattern.arrival_rate).expect("validated rate");
    let pareto = match &pattern.sizes {
        SizeDistribution::HeavyTailed { mean, min, max } => {
            Some(BoundedPareto::with_mean(*mean, *min, *max)?)
        }
        _ => None,
    };
    let light = match &pattern.sizes {
        SizeDistribution::LightTailed { mean } => Some(Exp::new(1.0 / mean).expect("validated mean")),
        _ => None,
    };
    let mut flows = Vec::with_capacity(pattern.flow_count);
    let mut now = 0.0;
    for id in 0..pattern.flow_count {
        let gap = loop {
            let g: f64 = gap_dist.sample(&mut rng);
            if g > 0.0 {
                break g;
            }
        };
        now += gap;
        let size = loop {
            let s = match &pattern.sizes {
                SizeDistribution::LightTailed { .. } => {
                    let s = light.unwrap().sample(&mut rng);
                    if s > LIGHT_TAIL_MAX {
                        continue;
                    }
                    s
                }
                SizeDistribution::HeavyTailed { .. } => pareto.unwrap().sample(&mut rng),
                SizeDistribution::Empirical(table) => table.quantile(rng.gen()),
            };
            if s > 0.0 {
                break s;
            }
        };
        let source = rng.gen_range(0..n);
        let mut destination = rng.gen_range(0..n - 1);
        if destination >= source {
            destination += 1;
        }
        flows.push(Flow::new(id as u64, source, destination, now, size)?);
    }
    Ok(flows)
}

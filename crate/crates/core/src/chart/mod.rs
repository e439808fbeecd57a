//! Metric charts read from JSON, sampled on grids or point lists.

pub mod expr;
mod fd;

use serde::Deserialize;

pub use expr::{parse_expression, Expr, ParseError};
pub use fd::{curvature_at, PointCurvature, DEFAULT_STEP, FD_VALIDATION_TOLERANCE, MAX_CONDITION, MIN_EIGENVALUE};

use crate::error::{Error, Result};

/// Pointwise tolerance for a metric given with textually different off-diagonal entries.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SampleSpec {
    /// Box grid, per-axis `[lo, hi]` and point count.
    Grid { ranges: Vec<[f64; 2]>, counts: Vec<usize> },
    Points(Vec<Vec<f64>>),
}

#[derive(Debug, Clone)]
pub struct MetricChart {
    name: Option<String>,
    coordinates: Vec<String>,
    metric: Vec<Vec<Expr>>,
    metric_text: Vec<Vec<String>>,
    samples: SampleSpec,
    domain: Option<Vec<[f64; 2]>>,
    compact: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    #[serde(default)]
    name: Option<String>,
    dimension: usize,
    coordinates: Vec<String>,
    metric: Vec<Vec<RawEntry>>,
    samples: RawSamples,
    #[serde(default)]
    domain: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    compact: Option<bool>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Text(String),
    Number(f64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    #[serde(default)]
    grid: Option<RawGrid>,
    #[serde(default)]
    points: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    ranges: Vec<[f64; 2]>,
    counts: Vec<usize>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl MetricChart {
    /// Parses and validates a chart document; schema problems carry a `$.`-rooted path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawChart = serde_path_to_error::deserialize(de).map_err(|e| {
            let p = e.path().to_string();
            let path = if p == "." || p == "?" { "$".to_string() } else { format!("$.{p}") };
            schema(path, e.into_inner().to_string())
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawChart) -> Result<Self> {
        let n = raw.dimension;
        if n < 2 {
            return Err(schema("$.dimension", format!("dimension must be at least 2, got {n}")));
        }
        if raw.coordinates.len() != n {
            return Err(schema(
                "$.coordinates",
                format!("expected {n} coordinate names, got {}", raw.coordinates.len()),
            ));
        }
        for (i, c) in raw.coordinates.iter().enumerate() {
            let ok = c.chars().next().is_some_and(|ch| ch.is_alphabetic() || ch == '_')
                && c.chars().all(|ch| ch.is_alphanumeric() || ch == '_');
            if !ok {
                return Err(schema(format!("$.coordinates[{i}]"), format!("`{c}` is not an identifier")));
            }
            if raw.coordinates[..i].contains(c) {
                return Err(schema(format!("$.coordinates[{i}]"), format!("duplicate coordinate `{c}`")));
            }
        }
        if raw.metric.len() != n {
            return Err(schema("$.metric", format!("expected {n} rows, got {}", raw.metric.len())));
        }
        let mut metric = Vec::with_capacity(n);
        let mut metric_text = Vec::with_capacity(n);
        for (i, row) in raw.metric.iter().enumerate() {
            if row.len() != n {
                return Err(schema(format!("$.metric[{i}]"), format!("expected {n} entries, got {}", row.len())));
            }
            let mut erow = Vec::with_capacity(n);
            let mut trow = Vec::with_capacity(n);
            for (j, entry) in row.iter().enumerate() {
                let text = match entry {
                    RawEntry::Text(s) => s.clone(),
                    RawEntry::Number(x) => format!("{x:?}"),
                };
                let e = parse_expression(&text, &raw.coordinates)
                    .map_err(|err| schema(format!("$.metric[{i}][{j}]"), err.to_string()))?;
                erow.push(e);
                trow.push(text);
            }
            metric.push(erow);
            metric_text.push(trow);
        }

        let samples = match (raw.samples.grid, raw.samples.points) {
            (Some(_), Some(_)) => return Err(schema("$.samples", "give either `grid` or `points`, not both")),
            (None, None) => return Err(schema("$.samples", "missing `grid` or `points`")),
            (Some(g), None) => {
                if g.ranges.len() != n {
                    return Err(schema("$.samples.grid.ranges", format!("expected {n} ranges, got {}", g.ranges.len())));
                }
                if g.counts.len() != n {
                    return Err(schema("$.samples.grid.counts", format!("expected {n} counts, got {}", g.counts.len())));
                }
                for (i, r) in g.ranges.iter().enumerate() {
                    if !(r[0] <= r[1]) || !r[0].is_finite() || !r[1].is_finite() {
                        return Err(schema(format!("$.samples.grid.ranges[{i}]"), "need finite lo ≤ hi"));
                    }
                }
                for (i, &c) in g.counts.iter().enumerate() {
                    if c == 0 {
                        return Err(schema(format!("$.samples.grid.counts[{i}]"), "count must be positive"));
                    }
                }
                SampleSpec::Grid {
                    ranges: g.ranges,
                    counts: g.counts,
                }
            }
            (None, Some(pts)) => {
                if pts.is_empty() {
                    return Err(schema("$.samples.points", "empty point list"));
                }
                for (i, p) in pts.iter().enumerate() {
                    if p.len() != n {
                        return Err(schema(format!("$.samples.points[{i}]"), format!("expected {n} coordinates, got {}", p.len())));
                    }
                    if p.iter().any(|x| !x.is_finite()) {
                        return Err(schema(format!("$.samples.points[{i}]"), "non-finite coordinate"));
                    }
                }
                SampleSpec::Points(pts)
            }
        };

        if let Some(dom) = &raw.domain {
            if dom.len() != n {
                return Err(schema("$.domain", format!("expected {n} intervals, got {}", dom.len())));
            }
            for (i, r) in dom.iter().enumerate() {
                if !(r[0] < r[1]) {
                    return Err(schema(format!("$.domain[{i}]"), "need lo < hi"));
                }
            }
        }

        let chart = MetricChart {
            name: raw.name,
            coordinates: raw.coordinates,
            metric,
            metric_text,
            samples,
            domain: raw.domain,
            compact: raw.compact.unwrap_or(true),
        };
        chart.check_symmetry()?;
        Ok(chart)
    }

    /// Textually different off-diagonal pairs must agree numerically at every sample.
    fn check_symmetry(&self) -> Result<()> {
        let n = self.dimension();
        let mut pending = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.metric[i][j] != self.metric[j][i] {
                    pending.push((i, j));
                }
            }
        }
        if pending.is_empty() {
            return Ok(());
        }
        for p in self.sample()? {
            for &(i, j) in &pending {
                let (a, b) = match (self.metric[i][j].eval(&p), self.metric[j][i].eval(&p)) {
                    (Ok(a), Ok(b)) => (a, b),
                    // Points that fail to evaluate are rejected later, per point.
                    _ => continue,
                };
                if (a - b).abs() > SYMMETRY_TOLERANCE * a.abs().max(b.abs()).max(1.0) {
                    return Err(schema(
                        format!("$.metric[{j}][{i}]"),
                        format!("metric is not symmetric at {p:?}: g[{i}][{j}] = {a}, g[{j}][{i}] = {b}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn metric_text(&self) -> &[Vec<String>] {
        &self.metric_text
    }

    pub fn samples(&self) -> &SampleSpec {
        &self.samples
    }

    pub fn domain(&self) -> Option<&[[f64; 2]]> {
        self.domain.as_deref()
    }

    /// Whether the chart author asserts the manifold is compact (default `true`).
    pub fn compact(&self) -> bool {
        self.compact
    }

    /// Metric matrix at `point`; fails on any evaluation error.
    pub fn metric_at(&self, point: &[f64]) -> Result<nalgebra::DMatrix<f64>> {
        let n = self.dimension();
        if point.len() != n {
            return Err(Error::Argument(format!("point has {} coordinates, chart has {n}", point.len())));
        }
        let mut g = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.metric[i][j]
                    .eval(point)
                    .map_err(|m| Error::Eval(format!("g[{i}][{j}] at {point:?}: {m}")))?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }

    /// Sample points in a fixed order: the explicit list as given, or the grid row-major
    /// with the last axis varying fastest. A count of 1 places the point at `lo`.
    pub fn sample(&self) -> Result<Vec<Vec<f64>>> {
        match &self.samples {
            SampleSpec::Points(p) if p.is_empty() => Err(Error::Argument("empty sample set".into())),
            SampleSpec::Points(p) => Ok(p.clone()),
            SampleSpec::Grid { ranges, counts } => grid_points(ranges, counts),
        }
    }
}

pub fn grid_points(ranges: &[[f64; 2]], counts: &[usize]) -> Result<Vec<Vec<f64>>> {
    if ranges.len() != counts.len() || ranges.is_empty() {
        return Err(Error::Argument("grid needs one count per range".into()));
    }
    if counts.contains(&0) {
        return Err(Error::Argument("empty sample set: a grid count is 0".into()));
    }
    let axes: Vec<Vec<f64>> = ranges
        .iter()
        .zip(counts)
        .map(|(r, &c)| {
            if c == 1 {
                vec![r[0]]
            } else {
                (0..c).map(|t| r[0] + (r[1] - r[0]) * t as f64 / (c - 1) as f64).collect()
            }
        })
        .collect();
    let total: usize = counts.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; axes.len()];
    for _ in 0..total {
        out.push(idx.iter().enumerate().map(|(a, &i)| axes[a][i]).collect());
        for a in (0..axes.len()).rev() {
            idx[a] += 1;
            if idx[a] < axes[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S2: &str = r#"{
        "dimension": 2,
        "coordinates": ["th", "ph"],
        "metric": [["1", "0"], ["0", "sin(th)^2"]],
        "samples": {"grid": {"ranges": [[0.5, 2.5], [0, 1]], "counts": [3, 2]}}
    }"#;

    #[test]
    fn grid_enumeration() {
        assert_eq!(grid_points(&[[0.0, 1.0]], &[3]).unwrap(), vec![vec![0.0], vec![0.5], vec![1.0]]);
        assert!(grid_points(&[[0.0, 1.0]], &[0]).is_err());
        assert_eq!(grid_points(&[[2.0, 3.0]], &[1]).unwrap(), vec![vec![2.0]]);
        let c = MetricChart::from_json(S2).unwrap();
        let pts = c.sample().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0.5, 0.0]);
        assert_eq!(pts[1], vec![0.5, 1.0]);
        assert_eq!(pts[2], vec![1.5, 0.0]);
    }

    #[test]
    fn explicit_points_kept_in_order() {
        let text = r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, 0], [0, 1]],
            "samples": {"points": [[3, 1], [0, 0], [1, 2]]}}"#;
        let c = MetricChart::from_json(text).unwrap();
        assert_eq!(c.sample().unwrap(), vec![vec![3.0, 1.0], vec![0.0, 0.0], vec![1.0, 2.0]]);
        assert!(c.compact());
    }

    fn schema_path(text: &str) -> String {
        match MetricChart::from_json(text) {
            Err(Error::Schema { path, .. }) => path,
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors_name_the_path() {
        assert_eq!(schema_path("{"), "$");
        assert_eq!(
            schema_path(r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, 0], [0, 1]],
                "samples": {"grid": {"ranges": [[0, 1], [0, 1]], "counts": [2, "x"]}}}"#),
            "$.samples.grid.counts[1]"
        );
        assert_eq!(
            schema_path(r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, 0], [0, "z"]],
                "samples": {"points": [[0, 0]]}}"#),
            "$.metric[1][1]"
        );
        assert_eq!(
            schema_path(r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, "x"], [0, 1]],
                "samples": {"points": [[1, 0]]}}"#),
            "$.metric[1][0]"
        );
        assert_eq!(
            schema_path(r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, 0], [0, 1]],
                "samples": {"grid": {"ranges": [[0, 1], [0, 1]], "counts": [2, 0]}}}"#),
            "$.samples.grid.counts[1]"
        );
        assert_eq!(
            schema_path(r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, 0], [0, 1]],
                "samples": {"points": []}}"#),
            "$.samples.points"
        );
        assert_eq!(
            schema_path(r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, 0], [0, 1]],
                "samples": {"points": [[0, 0]]}, "colour": 1}"#),
            "$.colour"
        );
        assert_eq!(
            schema_path(r#"{"dimension": 3, "coordinates": ["x", "y"], "metric": [[1, 0], [0, 1]],
                "samples": {"points": [[0, 0]]}}"#),
            "$.coordinates"
        );
    }

    #[test]
    fn numerically_symmetric_text_is_accepted() {
        let text = r#"{"dimension": 2, "coordinates": ["x", "y"], "metric": [[1, "x*y"], ["y*x", 2]],
            "samples": {"points": [[0.1, 0.2]]}}"#;
        assert!(MetricChart::from_json(text).is_ok());
    }
}

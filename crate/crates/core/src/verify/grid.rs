use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Geometric,
}

/// One swept parameter: `count ≥ 2` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn new(name: &str, lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if name.is_empty() {
            return Err(Error::InvalidGrid("axis name is empty".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidGrid(format!("{name}: need lo < hi, got {lo}:{hi}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("{name}: need at least 2 points, got {count}")));
        }
        if spacing == Spacing::Geometric && lo <= 0.0 {
            return Err(Error::InvalidGrid(format!("{name}: geometric spacing needs lo > 0")));
        }
        Ok(Axis { name: name.to_string(), lo, hi, count, spacing })
    }

    pub fn linear(name: &str, lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(name, lo, hi, count, Spacing::Linear)
    }

    pub fn geometric(name: &str, lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(name, lo, hi, count, Spacing::Geometric)
    }

    /// Grid points in increasing order; both endpoints are hit exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == self.count - 1 {
                    return self.hi;
                }
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.lo + (self.hi - self.lo) * s,
                    Spacing::Geometric => self.lo * (self.hi / self.lo).powf(s),
                }
            })
            .collect()
    }

    /// Parses `name=lo:hi:count` with an optional `:geom` or `:lin` suffix.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("expected name=lo:hi:count[:geom], got '{spec}'"));
        let (name, rest) = spec.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        let spacing = match parts.get(3).copied() {
            None | Some("lin") => Spacing::Linear,
            Some("geom") => Spacing::Geometric,
            Some(_) => return Err(bad()),
        };
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(name.trim(), lo, hi, count, spacing)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}:{}:{}", self.name, self.lo, self.hi, self.count)?;
        if self.spacing == Spacing::Geometric {
            write!(f, ":geom")?;
        }
        Ok(())
    }
}

/// A set of named axes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidGrid(format!("axis '{}' given twice", a.name)));
            }
        }
        Ok(GridSpec { axes })
    }

    pub fn single(axis: Axis) -> Self {
        GridSpec { axes: vec![axis] }
    }

    pub fn parse<S: AsRef<str>>(specs: &[S]) -> Result<Self> {
        Self::new(specs.iter().map(|s| Axis::parse(s.as_ref())).collect::<Result<_>>()?)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.axes.iter().find(|a| a.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Axis> {
        self.axis(name).ok_or_else(|| Error::InvalidGrid(format!("grid has no '{name}' axis")))
    }

    /// Replaces or adds axes from `other`.
    pub fn merged(&self, other: &GridSpec) -> GridSpec {
        let mut axes = self.axes.clone();
        for a in &other.axes {
            match axes.iter_mut().find(|b| b.name == a.name) {
                Some(slot) => *slot = a.clone(),
                None => axes.push(a.clone()),
            }
        }
        GridSpec { axes }
    }

    /// `y` geometric over `[0.05, 20]` with 50 points.
    pub fn default_y() -> Self {
        Self::single(Axis::geometric("y", 0.05, 20.0, 50).expect("valid default"))
    }

    /// `t` linear over `[0.01, 0.99]` with 50 points, for density checks.
    pub fn default_t() -> Self {
        Self::single(Axis::linear("t", 0.01, 0.99, 50).expect("valid default"))
    }

    /// `ρ, t₁, t₂` each linear over `[0, 1]` with 20 points.
    pub fn default_two_atom() -> Self {
        let axis = |n| Axis::linear(n, 0.0, 1.0, 20).expect("valid default");
        GridSpec { axes: vec![axis("rho"), axis("t1"), axis("t2")] }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axes.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let a = Axis::parse("y=0.05:20:50:geom").unwrap();
        assert_eq!(a.spacing, Spacing::Geometric);
        assert_eq!(a.to_string(), "y=0.05:20:50:geom");
        let pts = a.points();
        assert_eq!(pts.len(), 50);
        assert_eq!((pts[0], pts[49]), (0.05, 20.0));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let ratio = pts[1] / pts[0];
        assert!((pts[30] / pts[29] - ratio).abs() < 1e-12);
    }

    #[test]
    fn invalid_axes() {
        for s in ["y=1:0:5", "y=0:1:1", "y=0:1:5:geom", "y0:1:5", "y=0:1", "y=0:1:5:log", "=0:1:3"] {
            assert!(Axis::parse(s).is_err(), "{s}");
        }
        assert!(GridSpec::parse(&["y=0:1:3", "y=0:2:3"]).is_err());
    }

    #[test]
    fn merge_overrides_by_name() {
        let g = GridSpec::default_two_atom().merged(&GridSpec::parse(&["rho=0:1:5"]).unwrap());
        assert_eq!(g.require("rho").unwrap().count, 5);
        assert_eq!(g.require("t2").unwrap().count, 20);
        assert!(g.require("y").is_err());
    }
}

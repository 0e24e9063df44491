use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::density::{parse_tabulated_csv, DensitySpec};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, rational_from_f64, rational_to_f64};

/// Tolerance on the total mass of float-specified measures.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

/// A probability measure on `[0, 1]`: finitely many atoms plus an optional
/// density carrying the remaining mass `1 - Σ w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    atoms: Vec<Atom>,
    // Present when every atom is known exactly and the exact weights close
    // to unit mass (together with the density weight).
    exact_atoms: Option<Vec<(BigRational, BigRational)>>,
    density: Option<DensitySpec>,
    density_weight: f64,
}

impl Measure {
    pub fn point_mass(t: f64) -> Result<Self> {
        Self::from_atoms(vec![(t, 1.0)])
    }

    pub fn from_density(density: DensitySpec) -> Self {
        Measure { atoms: Vec::new(), exact_atoms: Some(Vec::new()), density: Some(density), density_weight: 1.0 }
    }

    /// Atom-only measure from floats. Exact moments are available when the
    /// binary values of the weights sum to exactly one.
    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::build(atoms, None)
    }

    /// Atoms plus a density carrying mass `1 - Σ w_i`.
    pub fn mixed(atoms: Vec<(f64, f64)>, density: DensitySpec) -> Result<Self> {
        Self::build(atoms, Some(density))
    }

    fn build(atoms: Vec<(f64, f64)>, density: Option<DensitySpec>) -> Result<Self> {
        let exact: Option<Vec<_>> = atoms
            .iter()
            .map(|&(t, w)| Some((rational_from_f64(t)?, rational_from_f64(w)?)))
            .collect();
        let exact = exact.ok_or_else(|| Error::InvalidMeasure("atom values must be finite".into()))?;
        Self::build_exact(exact, density, false)
    }

    /// Atoms given as exact rationals.
    pub fn from_exact_atoms(
        atoms: Vec<(BigRational, BigRational)>,
        density: Option<DensitySpec>,
    ) -> Result<Self> {
        Self::build_exact(atoms, density, true)
    }

    fn build_exact(
        exact: Vec<(BigRational, BigRational)>,
        density: Option<DensitySpec>,
        strict_exact: bool,
    ) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        for (t, w) in &exact {
            if t < &zero || t > &one {
                return Err(Error::InvalidMeasure(format!("atom location {} outside [0, 1]", format_rational(t))));
            }
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative atom weight {}", format_rational(w))));
            }
        }
        let atoms: Vec<Atom> =
            exact.iter().map(|(t, w)| Atom { t: rational_to_f64(t), w: rational_to_f64(w) }).collect();
        let float_total: f64 = atoms.iter().map(|a| a.w).sum();
        let exact_total: BigRational = exact.iter().map(|(_, w)| w.clone()).sum();

        let (density, density_weight, exact_ok) = match density {
            None => {
                if (float_total - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::InvalidMeasure(format!("total mass {float_total} differs from 1")));
                }
                if strict_exact && exact_total != one {
                    return Err(Error::InvalidMeasure(format!(
                        "exact atom weights sum to {}",
                        format_rational(&exact_total)
                    )));
                }
                (None, 0.0, exact_total == one)
            }
            Some(d) => {
                if float_total > 1.0 + MASS_TOLERANCE || exact_total > one && strict_exact {
                    return Err(Error::InvalidMeasure(format!("atom mass {float_total} exceeds 1")));
                }
                let rest = rational_to_f64(&(&one - &exact_total)).max(0.0);
                (Some(d), rest, exact_total <= one)
            }
        };
        Ok(Measure {
            atoms,
            exact_atoms: if exact_ok { Some(exact) } else { None },
            density,
            density_weight,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn exact_atoms(&self) -> Option<&[(BigRational, BigRational)]> {
        self.exact_atoms.as_deref()
    }

    pub fn density(&self) -> Option<&DensitySpec> {
        self.density.as_ref()
    }

    /// Mass carried by the density part.
    pub fn density_weight(&self) -> f64 {
        self.density_weight
    }

    /// Exact density weight `1 - Σ w_i`, when the atoms are exact.
    pub fn exact_density_weight(&self) -> Option<BigRational> {
        let atoms = self.exact_atoms.as_ref()?;
        let total: BigRational = atoms.iter().map(|(_, w)| w.clone()).sum();
        Some(BigRational::one() - total)
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_none() || self.density_weight == 0.0
    }

    /// True when some mass sits on `(0, 1]`.
    pub fn has_mass_away_from_zero(&self) -> bool {
        self.density_weight > 0.0 || self.atoms.iter().any(|a| a.t > 0.0 && a.w > 0.0)
    }

    /// Parses the `measure v1` text format. `base_dir` resolves the CSV path
    /// of a `density tabulated <path>` line.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        Self::parse_with(text, |path| {
            let resolved = match base_dir {
                Some(dir) if Path::new(path).is_relative() => dir.join(path),
                _ => Path::new(path).to_path_buf(),
            };
            Ok(std::fs::read_to_string(resolved)?)
        })
    }

    /// Like [`Measure::parse`] with a caller-supplied CSV loader.
    pub fn parse_with<L>(text: &str, mut load_csv: L) -> Result<Self>
    where
        L: FnMut(&str) -> Result<String>,
    {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "measure v1")) => {}
            Some((n, other)) => {
                return Err(Error::Parse { line: n, msg: format!("expected 'measure v1' header, got '{other}'") })
            }
            None => return Err(Error::Parse { line: 1, msg: "empty measure file".into() }),
        }
        let mut atoms = Vec::new();
        let mut density = None;
        for (n, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: String| Error::Parse { line: n, msg };
            match fields.as_slice() {
                ["atom", t, w] => {
                    let t = parse_rational(t).ok_or_else(|| bad(format!("bad atom location '{t}'")))?;
                    let w = parse_rational(w).ok_or_else(|| bad(format!("bad atom weight '{w}'")))?;
                    atoms.push((t, w));
                }
                ["density", rest @ ..] => {
                    if density.is_some() {
                        return Err(bad("at most one density line is allowed".into()));
                    }
                    density = Some(parse_density(rest, &mut load_csv).map_err(|e| match e {
                        Error::Parse { .. } | Error::Io(_) => e,
                        other => bad(other.to_string()),
                    })?);
                }
                _ => return Err(bad(format!("unrecognized line '{line}'"))),
            }
        }
        Self::from_exact_atoms(atoms, density)
    }

    /// Serializes to the `measure v1` format.
    pub fn to_text(&self) -> Result<String> {
        let mut out = String::from("measure v1\n");
        match &self.exact_atoms {
            Some(exact) => {
                for (t, w) in exact {
                    let _ = writeln!(out, "atom {} {}", format_rational(t), format_rational(w));
                }
            }
            None => {
                for a in &self.atoms {
                    let _ = writeln!(out, "atom {:?} {:?}", a.t, a.w);
                }
            }
        }
        if let Some(d) = &self.density {
            let _ = writeln!(out, "density {}", d.to_text()?);
        }
        Ok(out)
    }
}

fn parse_density<L>(fields: &[&str], load_csv: &mut L) -> Result<DensitySpec>
where
    L: FnMut(&str) -> Result<String>,
{
    let number = |s: &str| {
        s.parse::<f64>().map_err(|_| Error::InvalidDensity(format!("bad density parameter '{s}'")))
    };
    match fields {
        ["uniform"] => Ok(DensitySpec::Uniform),
        ["power", p] => DensitySpec::power(number(p)?),
        ["log_power", a] => DensitySpec::log_power(number(a)?),
        ["tabulated", path] => {
            let text = load_csv(path)?;
            DensitySpec::tabulated(parse_tabulated_csv(&text)?, Some(Path::new(path).to_path_buf()))
        }
        _ => Err(Error::InvalidDensity(format!("unknown density spec '{}'", fields.join(" ")))),
    }
}

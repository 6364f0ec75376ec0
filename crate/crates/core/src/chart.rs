//! Coordinate charts with declared transcendental generators.
//!
//! A chart fixes the variable universe for every scalar: an ordered list of
//! coordinates followed by an ordered list of generators. Each generator
//! carries one derivative rule per coordinate, itself a rational expression
//! over the same chart (differential closure). The generator of a
//! flat-exponential function like exp(-1/x^2) is the standard example: its
//! x-rule is 2*chi/x^3 and its y-rule is 0.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parse;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Canonical numerator/denominator pair of a generator derivative rule.
/// Stored chart-free to break the chart/scalar construction cycle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct RuleData {
    pub num: Poly,
    pub den: Poly,
}

#[derive(Debug)]
pub(crate) struct ChartInner {
    /// Coordinates first, generators after, each in declaration order.
    pub names: Vec<String>,
    pub n_coords: usize,
    /// `rules[g][i]` is the derivative of generator `g` along coordinate `i`.
    pub rules: Vec<Vec<RuleData>>,
}

/// Immutable chart handle; cheap to clone and share.
#[derive(Clone, Debug)]
pub struct Chart(pub(crate) Arc<ChartInner>);

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    /// Chart with coordinates only.
    pub fn coordinates(coords: &[&str]) -> Result<Chart> {
        Chart::new(coords, &[])
    }

    /// Chart with coordinates and generators. Each generator is given as
    /// `(name, rules)` with `rules` a list of `(coordinate, expression)`
    /// pairs; omitted coordinates get the zero rule. Rule expressions may
    /// reference every coordinate and generator of the chart, including the
    /// generator itself.
    pub fn new(coords: &[&str], gens: &[(&str, &[(&str, &str)])]) -> Result<Chart> {
        if coords.is_empty() {
            return Err(Error::InvalidChart("chart needs at least one coordinate".into()));
        }
        let mut names: Vec<String> = Vec::new();
        for &c in coords {
            names.push(c.to_string());
        }
        for (g, _) in gens {
            names.push(g.to_string());
        }
        for n in &names {
            if !is_identifier(n) {
                return Err(Error::InvalidChart(format!("`{n}` is not a valid identifier")));
            }
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidChart(format!("duplicate symbol `{a}`")));
            }
        }

        // Provisional chart with zero rules so that rule expressions can be
        // parsed against the full symbol set.
        let n_coords = coords.len();
        let zero_rule = RuleData {
            num: Poly::zero(names.len()),
            den: Poly::one(names.len()),
        };
        let provisional = Chart(Arc::new(ChartInner {
            names: names.clone(),
            n_coords,
            rules: vec![vec![zero_rule.clone(); n_coords]; gens.len()],
        }));

        let mut rules = Vec::with_capacity(gens.len());
        for (gname, gen_rules) in gens {
            let mut per_coord = vec![zero_rule.clone(); n_coords];
            for (coord, expr) in gen_rules.iter() {
                let ci = coords
                    .iter()
                    .position(|c| c == coord)
                    .ok_or_else(|| Error::UnknownCoordinate((*coord).to_string()))?;
                let s = parse::parse_scalar(expr, &provisional).map_err(|e| {
                    Error::InvalidChart(format!(
                        "rule for generator `{gname}` along `{coord}`: {e}"
                    ))
                })?;
                per_coord[ci] = RuleData {
                    num: s.num_poly().clone(),
                    den: s.den_poly().clone(),
                };
            }
            rules.push(per_coord);
        }

        Ok(Chart(Arc::new(ChartInner {
            names,
            n_coords,
            rules,
        })))
    }

    /// Number of coordinates (the chart dimension n).
    pub fn dim(&self) -> usize {
        self.0.n_coords
    }

    /// Total number of variables: coordinates plus generators.
    pub(crate) fn n_vars(&self) -> usize {
        self.0.names.len()
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.0.names[..self.0.n_coords]
    }

    /// All symbol names: coordinates first, then generators.
    pub fn symbol_names(&self) -> &[String] {
        &self.0.names
    }

    pub fn coordinate_index(&self, name: &str) -> Option<usize> {
        self.0.names[..self.0.n_coords].iter().position(|n| n == name)
    }

    pub(crate) fn var_index(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub(crate) fn var_name(&self, index: usize) -> &str {
        &self.0.names[index]
    }

    /// Derivative rule of generator `g` (0-based, counted among generators)
    /// along coordinate `coord`, as a scalar over this chart.
    pub(crate) fn rule_scalar(&self, g: usize, coord: usize) -> Scalar {
        let data = &self.0.rules[g][coord];
        Scalar::from_canonical_parts(self.clone(), data.num.clone(), data.den.clone())
    }

    /// Parses an expression over this chart into canonical form.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        parse::parse_scalar(text, self)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.clone())
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.clone())
    }

    /// The coordinate or generator with the given name, as a scalar.
    pub fn var(&self, name: &str) -> Result<Scalar> {
        let idx = self
            .var_index(name)
            .ok_or_else(|| Error::UnknownSymbol { name: name.to_string(), pos: 0 })?;
        Ok(Scalar::from_canonical_parts(
            self.clone(),
            Poly::var(self.n_vars(), idx),
            Poly::one(self.n_vars()),
        ))
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar::from_int(self.clone(), n)
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.names == other.0.names
            && self.0.n_coords == other.0.n_coords
            && self.0.rules == other.0.rules
    }
}

impl Eq for Chart {}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chart({})", self.0.names.join(", "))
    }
}

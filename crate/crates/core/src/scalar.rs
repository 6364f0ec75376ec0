//! Canonical rational functions over a chart.
//!
//! A scalar is a ratio of two multivariate polynomials in the chart's
//! coordinates and generators. The representation is canonical:
//! numerator and denominator are coprime, the denominator is monic under
//! the global degree-lexicographic order and never zero. Two scalars are
//! equal as field elements iff their representations are identical, so
//! every identity check in the crate bottoms out in structural equality
//! against zero.

use std::fmt;

use num::{BigInt, BigRational};
use num::{One, Signed};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::gcd::poly_gcd;
use crate::poly::{Monomial, Poly};

#[derive(Clone, Debug)]
pub struct Scalar {
    chart: Chart,
    num: Poly,
    den: Poly,
}

impl Scalar {
    /// Normalizing constructor: reduces by the gcd and makes the denominator
    /// monic. Fails only when the denominator is the zero polynomial.
    pub(crate) fn from_ratio(chart: Chart, num: Poly, den: Poly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero { at_parse: false });
        }
        if num.is_zero() {
            let n = chart.n_vars();
            return Ok(Scalar {
                chart,
                num: Poly::zero(n),
                den: Poly::one(n),
            });
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.make_monic();
        if !lc.is_one() {
            num = num.scale(&(BigRational::one() / lc));
        }
        Ok(Scalar { chart, num, den })
    }

    /// Wraps parts that are already in canonical form.
    pub(crate) fn from_canonical_parts(chart: Chart, num: Poly, den: Poly) -> Scalar {
        debug_assert!(!den.is_zero());
        Scalar { chart, num, den }
    }

    pub fn zero(chart: Chart) -> Scalar {
        let n = chart.n_vars();
        Scalar {
            chart,
            num: Poly::zero(n),
            den: Poly::one(n),
        }
    }

    pub fn one(chart: Chart) -> Scalar {
        let n = chart.n_vars();
        Scalar {
            chart,
            num: Poly::one(n),
            den: Poly::one(n),
        }
    }

    pub fn from_int(chart: Chart, v: i64) -> Scalar {
        let n = chart.n_vars();
        Scalar {
            chart,
            num: Poly::from_int(n, v),
            den: Poly::one(n),
        }
    }

    pub fn from_rational(chart: Chart, q: BigRational) -> Scalar {
        let n = chart.n_vars();
        Scalar {
            chart,
            num: Poly::constant(n, q),
            den: Poly::one(n),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub(crate) fn num_poly(&self) -> &Poly {
        &self.num
    }

    pub(crate) fn den_poly(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn assert_chart(&self, other: &Scalar) {
        assert!(
            self.chart == other.chart,
            "scalar operands belong to different charts"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_chart(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Work over the lcm denominator: the remaining reduction is much
        // smaller than with the naive product denominator.
        let g = poly_gcd(&self.den, &other.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.exact_div(&g).expect("gcd divides"),
                other.den.exact_div(&g).expect("gcd divides"),
            )
        };
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        let den = self.den.mul(&db);
        Scalar::from_ratio(self.chart.clone(), num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            chart: self.chart.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_chart(other);
        if self.is_zero() || other.is_zero() {
            return Scalar::zero(self.chart.clone());
        }
        // Cross-cancellation: with both operands reduced, any common factor
        // of the product pairs a numerator with the opposite denominator,
        // so the result below is already in lowest terms.
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let na = self.num.exact_div(&g1).expect("gcd divides");
        let nb = other.num.exact_div(&g2).expect("gcd divides");
        let da = self.den.exact_div(&g2).expect("gcd divides");
        let db = other.den.exact_div(&g1).expect("gcd divides");
        let num = na.mul(&nb);
        let mut den = da.mul(&db);
        let lc = den.make_monic();
        let num = if lc.is_one() {
            num
        } else {
            num.scale(&(BigRational::one() / lc))
        };
        Scalar::from_canonical_parts(self.chart.clone(), num, den)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.assert_chart(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero { at_parse: false });
        }
        let inv = Scalar::from_ratio(
            self.chart.clone(),
            other.den.clone(),
            other.num.clone(),
        )?;
        Ok(self.mul(&inv))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn int_pow(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            let e = u32::try_from(e).map_err(|_| {
                Error::InvalidDimension(format!("exponent {e} out of range"))
            })?;
            Scalar::from_ratio(self.chart.clone(), self.num.pow(e), self.den.pow(e))
        } else {
            if self.is_zero() {
                return Err(Error::ZeroToNegativePower { exponent: e });
            }
            let e = u32::try_from(-e).map_err(|_| {
                Error::InvalidDimension(format!("exponent {e} out of range"))
            })?;
            Scalar::from_ratio(self.chart.clone(), self.den.pow(e), self.num.pow(e))
        }
    }

    /// Exact partial derivative along a coordinate, applying the quotient
    /// rule and every generator derivative rule.
    pub fn differentiate(&self, coord: &str) -> Result<Scalar> {
        let ci = self
            .chart
            .coordinate_index(coord)
            .ok_or_else(|| Error::UnknownCoordinate(coord.to_string()))?;
        Ok(self.diff_coord(ci))
    }

    /// Derivative along the coordinate with 0-based index `coord`.
    pub fn diff_coord(&self, coord: usize) -> Scalar {
        assert!(coord < self.chart.dim(), "coordinate index out of range");
        let dnum = self.poly_derivative(&self.num, coord);
        let dden = self.poly_derivative(&self.den, coord);
        // (p/q)' = (p' q - p q') / q^2
        let den_s = Scalar::from_canonical_parts(
            self.chart.clone(),
            self.den.clone(),
            Poly::one(self.chart.n_vars()),
        );
        let num_s = Scalar::from_canonical_parts(
            self.chart.clone(),
            self.num.clone(),
            Poly::one(self.chart.n_vars()),
        );
        let t = dnum.mul(&den_s).sub(&num_s.mul(&dden));
        let q2 = den_s.mul(&den_s);
        t.div(&q2).expect("denominator is nonzero")
    }

    /// Derivative of a polynomial as a scalar: the formal coordinate part
    /// plus one chain-rule term per generator.
    fn poly_derivative(&self, p: &Poly, coord: usize) -> Scalar {
        let nv = self.chart.n_vars();
        let mut acc = Scalar::from_canonical_parts(
            self.chart.clone(),
            p.formal_derivative(coord),
            Poly::one(nv),
        );
        for g in 0..(nv - self.chart.dim()) {
            let var = self.chart.dim() + g;
            let pg = p.formal_derivative(var);
            if pg.is_zero() {
                continue;
            }
            let pg_s = Scalar::from_canonical_parts(self.chart.clone(), pg, Poly::one(nv));
            acc = acc.add(&pg_s.mul(&self.chart.rule_scalar(g, coord)));
        }
        acc
    }

    /// Canonical textual form. Reparsing the result gives back the same
    /// scalar. When the denominator is a monomial its exponents are folded
    /// into the numerator terms as negative powers.
    pub fn render(&self) -> String {
        if self.num.is_zero() {
            return "0".to_string();
        }
        if self.den.is_one() {
            return self.render_poly_shifted(&self.num, None);
        }
        if self.den.is_monic_monomial() {
            let shift = self.den.leading().unwrap().0.clone();
            return self.render_poly_shifted(&self.num, Some(&shift));
        }
        format!(
            "({})/({})",
            self.render_poly_shifted(&self.num, None),
            self.render_poly_shifted(&self.den, None)
        )
    }

    /// Renders the scalar wrapped in parentheses unless it is a bare
    /// nonnegative atom; used when embedding scalars into products.
    pub fn render_factor(&self) -> String {
        let body = self.render();
        let atomic = self.den.is_one()
            && self.num.terms.len() == 1
            && !self.num.leading().unwrap().1.is_negative();
        if atomic && !body.contains('/') {
            body
        } else {
            format!("({body})")
        }
    }

    fn render_poly_shifted(&self, p: &Poly, shift: Option<&Monomial>) -> String {
        let mut out = String::new();
        for (i, (m, c)) in p.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let mut exps: Vec<i64> = m.0.iter().map(|&e| e as i64).collect();
            if let Some(s) = shift {
                for (e, se) in exps.iter_mut().zip(&s.0) {
                    *e -= *se as i64;
                }
            }
            for (vi, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.chart.var_name(vi);
                if e == 1 {
                    factors.push(name.to_string());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            if factors.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.num == other.num && self.den == other.den
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_xy() -> Chart {
        Chart::coordinates(&["x", "y"]).unwrap()
    }

    fn chart_34() -> Chart {
        Chart::new(&["x", "y"], &[("chi", &[("x", "2*chi/x^3")])]).unwrap()
    }

    #[test]
    fn add_inverse_cancels() {
        let c = chart_xy();
        let x = c.var("x").unwrap();
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn mul_by_inverse_is_one() {
        let c = chart_xy();
        let x = c.var("x").unwrap();
        let inv = c.one().div(&x).unwrap();
        assert!(x.mul(&inv).is_one());
    }

    #[test]
    fn quotient_cancellation() {
        // (x^2 - y^2) / (x - y) = x + y
        let c = chart_xy();
        let num = c.parse("x^2 - y^2").unwrap();
        let den = c.parse("x - y").unwrap();
        let q = num.div(&den).unwrap();
        let expect = c.parse("x + y").unwrap();
        assert_eq!(q, expect);
        // Factorization cross-check: quotient times divisor is the dividend.
        assert_eq!(q.mul(&den), num);
    }

    #[test]
    fn division_by_zero_rejected() {
        let c = chart_xy();
        let x = c.var("x").unwrap();
        assert!(matches!(
            x.div(&c.zero()),
            Err(Error::DivisionByZero { .. })
        ));
        assert!(c.zero().int_pow(-1).is_err());
    }

    #[test]
    fn is_zero_by_expansion() {
        let c = chart_xy();
        let s = c.parse("(x+y)^2 - x^2 - 2*x*y - y^2").unwrap();
        assert!(s.is_zero());
        assert!(!c.parse("x - y").unwrap().is_zero());
    }

    #[test]
    fn derivative_product_rule() {
        // d/dx (x^2 y) = 2 x y
        let c = chart_xy();
        let s = c.parse("x^2*y").unwrap();
        assert_eq!(s.differentiate("x").unwrap(), c.parse("2*x*y").unwrap());
    }

    #[test]
    fn derivative_applies_generator_rule() {
        let c = chart_34();
        let chi = c.var("chi").unwrap();
        assert_eq!(
            chi.differentiate("x").unwrap(),
            c.parse("2*chi/x^3").unwrap()
        );
        assert!(chi.differentiate("y").unwrap().is_zero());
    }

    #[test]
    fn derivative_iterated_through_rule() {
        // d/dx (2*chi/x^3) = (4*x^-6 - 6*x^-4)*chi, computed by hand via the
        // product rule.
        let c = chart_34();
        let s = c.parse("2*chi/x^3").unwrap();
        let expect = c.parse("(4 - 6*x^2)*chi/x^6").unwrap();
        assert_eq!(s.differentiate("x").unwrap(), expect);
    }

    #[test]
    fn unknown_coordinate_errors() {
        let c = chart_xy();
        let x = c.var("x").unwrap();
        assert!(matches!(
            x.differentiate("z"),
            Err(Error::UnknownCoordinate(_))
        ));
    }

    #[test]
    fn render_merges_monomial_denominator() {
        let c = chart_34();
        let s = c.parse("(4 - 6*x^2)*chi/x^6").unwrap();
        assert_eq!(s.render(), "-6*x^-4*chi + 4*x^-6*chi");
        assert_eq!(c.parse(&s.render()).unwrap(), s);
    }

    #[test]
    fn render_general_ratio() {
        let c = chart_xy();
        let s = c.parse("1/(1-x) + 1/(1+x)").unwrap();
        assert_eq!(s, c.parse("2/(1 - x^2)").unwrap());
        assert_eq!(c.parse(&s.render()).unwrap(), s);
    }
}

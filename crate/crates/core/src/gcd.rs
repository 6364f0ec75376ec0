//! Multivariate polynomial GCD via a primitive pseudo-remainder sequence.
//!
//! The polynomial is viewed as univariate in its highest-index variable with
//! polynomial coefficients in the remaining variables; contents are removed
//! recursively. Charts are low-dimensional and degrees stay small in every
//! use case, so the primitive PRS is fast enough and easy to keep exact.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::poly::{Monomial, Poly};

/// GCD of two polynomials, normalized to leading coefficient 1 under the
/// global monomial order. Returns 1 when both inputs are constants (units),
/// and the monic associate of the nonzero input when the other is zero.
pub(crate) fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    debug_assert_eq!(a.nvars, b.nvars);
    let mut g = gcd_inner(a, b);
    g.make_monic();
    g
}

fn gcd_inner(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_one() || b.is_one() || a == b {
        return if a.is_one() || b.is_one() {
            Poly::one(a.nvars)
        } else {
            a.clone()
        };
    }
    // Monomial fast path: the gcd with a single term is the largest monomial
    // dividing every term of the other polynomial.
    if a.terms.len() == 1 || b.terms.len() == 1 {
        return monomial_gcd(a, b);
    }
    let v = match main_var(a, b) {
        Some(v) => v,
        // Both nonzero constants: any nonzero constant is a unit.
        None => return Poly::one(a.nvars),
    };

    let ua = to_univar(a, v);
    let ub = to_univar(b, v);
    let cont_a = coeff_content(&ua, a.nvars);
    let cont_b = coeff_content(&ub, a.nvars);
    let cont_gcd = gcd_inner(&cont_a, &cont_b);

    let mut p = primitive(&ua, &cont_a);
    let mut q = primitive(&ub, &cont_b);
    if univar_degree(&p) < univar_degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.is_empty() {
            break;
        }
        let r = pseudo_rem(&p, &q, a.nvars);
        let cont_r = coeff_content(&r, a.nvars);
        p = q;
        q = primitive(&r, &cont_r);
    }
    let pp = from_univar(&p, v, a.nvars);
    pp.mul(&cont_gcd)
}

/// Highest-index variable occurring in either polynomial.
fn main_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars)
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

/// GCD when at least one operand is a single term.
fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut exps = vec![u32::MAX; a.nvars];
    for p in [a, b] {
        for m in p.terms.keys() {
            for (e, me) in exps.iter_mut().zip(&m.0) {
                *e = (*e).min(*me);
            }
        }
    }
    let mut g = Poly::zero(a.nvars);
    g.terms.insert(Monomial(exps), num::BigRational::one());
    g
}

type Univar = BTreeMap<u32, Poly>;

fn to_univar(p: &Poly, v: usize) -> Univar {
    let mut out: Univar = BTreeMap::new();
    for (m, c) in &p.terms {
        let e = m.0[v];
        let mut rest = m.clone();
        rest.0[v] = 0;
        let entry = out.entry(e).or_insert_with(|| Poly::zero(p.nvars));
        let mut t = Poly::zero(p.nvars);
        t.terms.insert(rest, c.clone());
        *entry = entry.add(&t);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn from_univar(u: &Univar, v: usize, nvars: usize) -> Poly {
    let mut out = Poly::zero(nvars);
    for (e, c) in u {
        let mut shift = Monomial::constant(nvars);
        shift.0[v] = *e;
        out = out.add(&c.mul_term(&shift, &num::BigRational::one()));
    }
    out
}

fn univar_degree(u: &Univar) -> u32 {
    u.keys().next_back().copied().unwrap_or(0)
}

/// GCD of the coefficient polynomials; these involve strictly lower-index
/// variables than the main variable, so the recursion terminates. Returns
/// the zero polynomial for an empty (zero) input.
fn coeff_content(u: &Univar, nvars: usize) -> Poly {
    let mut it = u.values();
    let first = match it.next() {
        Some(p) => p.clone(),
        None => return Poly::zero(nvars),
    };
    let mut acc = first;
    for p in it {
        if acc.is_one() {
            break;
        }
        acc = gcd_inner(&acc, p);
    }
    acc
}

fn primitive(u: &Univar, content: &Poly) -> Univar {
    if content.is_zero() {
        return u.clone();
    }
    u.iter()
        .map(|(e, c)| {
            (
                *e,
                c.exact_div(content)
                    .expect("content divides every coefficient"),
            )
        })
        .collect()
}

/// Pseudo-remainder: eliminates leading terms of `p` by `q` until
/// deg(p) < deg(q), multiplying through by the leading coefficient of `q` as
/// needed. The coefficient content is stripped after every elimination step;
/// scaling by lower-variable polynomials never changes the primitive gcd,
/// and without the stripping the coefficient growth is exponential.
fn pseudo_rem(p: &Univar, q: &Univar, nvars: usize) -> Univar {
    let dq = univar_degree(q);
    let lq = q.get(&dq).expect("nonzero divisor").clone();
    let mut r = p.clone();
    loop {
        if r.is_empty() {
            return r;
        }
        let dr = univar_degree(&r);
        if dr < dq {
            return r;
        }
        let lr = r.get(&dr).unwrap().clone();
        // r <- lq * r - lr * x^(dr-dq) * q
        let mut out: Univar = BTreeMap::new();
        for (e, c) in &r {
            out.insert(*e, c.mul(&lq));
        }
        for (e, c) in q {
            let te = e + dr - dq;
            let t = c.mul(&lr);
            let entry = out.entry(te).or_insert_with(|| Poly::zero(nvars));
            *entry = entry.sub(&t);
        }
        out.retain(|_, c| !c.is_zero());
        let cont = coeff_content(&out, nvars);
        r = primitive(&out, &cont);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn y() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn gcd_univariate() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let a = x().mul(&x()).sub(&Poly::one(2));
        let b = x().sub(&Poly::one(2));
        assert_eq!(poly_gcd(&a, &b), b);
    }

    #[test]
    fn gcd_multivariate() {
        // gcd((x+y)(x-y), (x+y)^2) = x + y
        let s = x().add(&y());
        let d = x().sub(&y());
        let a = s.mul(&d);
        let b = s.mul(&s);
        assert_eq!(poly_gcd(&a, &b), s);
    }

    #[test]
    fn gcd_coprime() {
        let a = x().add(&Poly::one(2));
        let b = y().add(&Poly::one(2));
        assert_eq!(poly_gcd(&a, &b), Poly::one(2));
    }

    #[test]
    fn gcd_with_zero() {
        let a = x().scale(&num::BigRational::from_integer(3.into()));
        assert_eq!(poly_gcd(&a, &Poly::zero(2)), x());
        assert_eq!(poly_gcd(&Poly::zero(2), &a), x());
    }

    #[test]
    fn gcd_content_only() {
        // gcd(2x, 2y) = 1 up to units (content is rational, not polynomial)
        let a = x();
        let b = y();
        assert_eq!(poly_gcd(&a, &b), Poly::one(2));
    }
}

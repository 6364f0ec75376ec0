//! Tensor fields of arbitrary type (r,s) over a chart.
//!
//! Components are stored densely over the full index grid; charts are
//! low-dimensional in every use case, so exactness and simplicity win over
//! sparsity. Contravariant slots come first, then covariant slots, each in
//! declaration order; that slot enumeration is also the contract for
//! multi-connection operators downstream.

use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TensorType {
    pub r: usize,
    pub s: usize,
}

impl TensorType {
    pub fn new(r: usize, s: usize) -> Self {
        TensorType { r, s }
    }

    pub fn slots(&self) -> usize {
        self.r + self.s
    }
}

#[derive(Clone, Debug)]
pub struct TensorField {
    chart: Chart,
    ttype: TensorType,
    /// Row-major over `slots()` indices, each running over the chart
    /// dimension.
    comps: Vec<Scalar>,
}

impl TensorField {
    pub fn zero(chart: &Chart, ttype: TensorType) -> TensorField {
        let n = chart.dim();
        let len = n.pow(ttype.slots() as u32);
        TensorField {
            chart: chart.clone(),
            ttype,
            comps: vec![Scalar::zero(chart.clone()); len],
        }
    }

    /// Type (0,0) wrapper around a scalar.
    pub fn from_scalar(f: Scalar) -> TensorField {
        TensorField {
            chart: f.chart().clone(),
            ttype: TensorType::new(0, 0),
            comps: vec![f],
        }
    }

    /// Coordinate vector field with 0-based index `i`.
    pub fn coordinate_vector(chart: &Chart, i: usize) -> TensorField {
        let mut t = TensorField::zero(chart, TensorType::new(1, 0));
        t.comps[i] = Scalar::one(chart.clone());
        t
    }

    /// Coordinate 1-form with 0-based index `i`.
    pub fn coordinate_form(chart: &Chart, i: usize) -> TensorField {
        let mut t = TensorField::zero(chart, TensorType::new(0, 1));
        t.comps[i] = Scalar::one(chart.clone());
        t
    }

    /// Vector field from components in coordinate order.
    pub fn vector(chart: &Chart, comps: Vec<Scalar>) -> Result<TensorField> {
        if comps.len() != chart.dim() {
            return Err(Error::InvalidDimension(format!(
                "expected {} components, got {}",
                chart.dim(),
                comps.len()
            )));
        }
        for c in &comps {
            if c.chart() != chart {
                return Err(Error::ChartMismatch);
            }
        }
        Ok(TensorField {
            chart: chart.clone(),
            ttype: TensorType::new(1, 0),
            comps,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn tensor_type(&self) -> TensorType {
        self.ttype
    }

    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.ttype.slots());
        let n = self.dim();
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    /// Component at a multi-index (0-based, contravariant slots first).
    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.comps[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let k = self.flat(idx);
        self.comps[k] = value;
    }

    /// The unique component of a (0,0) tensor.
    pub fn as_scalar(&self) -> &Scalar {
        assert_eq!(self.ttype.slots(), 0, "not a scalar tensor");
        &self.comps[0]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Iterates over all multi-indices of the given arity, in row-major
    /// order.
    pub(crate) fn indices(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
        let total = n.pow(arity as u32);
        (0..total).map(move |mut flat| {
            let mut idx = vec![0; arity];
            for slot in (0..arity).rev() {
                idx[slot] = flat % n;
                flat /= n;
            }
            idx
        })
    }

    fn check_same_chart(&self, other: &TensorField) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorField) -> Result<TensorField> {
        self.check_same_chart(other)?;
        if self.ttype != other.ttype {
            return Err(Error::TypeMismatch {
                expected_r: self.ttype.r,
                expected_s: self.ttype.s,
                got_r: other.ttype.r,
                got_s: other.ttype.s,
            });
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(TensorField {
            chart: self.chart.clone(),
            ttype: self.ttype,
            comps,
        })
    }

    pub fn sub(&self, other: &TensorField) -> Result<TensorField> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorField {
        TensorField {
            chart: self.chart.clone(),
            ttype: self.ttype,
            comps: self.comps.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, f: &Scalar) -> TensorField {
        TensorField {
            chart: self.chart.clone(),
            ttype: self.ttype,
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// Graded product: contravariant slots of `self` first, then of `other`,
    /// then covariant slots in the same order.
    pub fn tensor_product(&self, other: &TensorField) -> Result<TensorField> {
        self.check_same_chart(other)?;
        let ttype = TensorType::new(self.ttype.r + other.ttype.r, self.ttype.s + other.ttype.s);
        let mut out = TensorField::zero(&self.chart, ttype);
        let n = self.dim();
        for idx in Self::indices(n, ttype.slots()) {
            // Split the combined multi-index back into the two factors.
            let (a_con, rest) = idx.split_at(self.ttype.r);
            let (b_con, rest) = rest.split_at(other.ttype.r);
            let (a_cov, b_cov) = rest.split_at(self.ttype.s);
            let mut ia = a_con.to_vec();
            ia.extend_from_slice(a_cov);
            let mut ib = b_con.to_vec();
            ib.extend_from_slice(b_cov);
            out.set(&idx, self.get(&ia).mul(other.get(&ib)));
        }
        Ok(out)
    }

    /// Applies a vector field to a scalar: v(f) = v^i d_i f.
    pub fn apply_to_scalar(&self, f: &Scalar) -> Result<Scalar> {
        self.expect_type(1, 0)?;
        if f.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        let mut acc = Scalar::zero(self.chart.clone());
        for i in 0..self.dim() {
            let vi = self.get(&[i]);
            if vi.is_zero() {
                continue;
            }
            acc = acc.add(&vi.mul(&f.diff_coord(i)));
        }
        Ok(acc)
    }

    fn expect_type(&self, r: usize, s: usize) -> Result<()> {
        if self.ttype.r != r || self.ttype.s != s {
            return Err(Error::TypeMismatch {
                expected_r: r,
                expected_s: s,
                got_r: self.ttype.r,
                got_s: self.ttype.s,
            });
        }
        Ok(())
    }

    /// Lie bracket of vector fields: [v,w]^i = v^j d_j w^i - w^j d_j v^i.
    pub fn commutator(&self, other: &TensorField) -> Result<TensorField> {
        self.expect_type(1, 0)?;
        other.expect_type(1, 0)?;
        self.check_same_chart(other)?;
        let n = self.dim();
        let mut out = TensorField::zero(&self.chart, TensorType::new(1, 0));
        for i in 0..n {
            let mut acc = Scalar::zero(self.chart.clone());
            for j in 0..n {
                let vj = self.get(&[j]);
                if !vj.is_zero() {
                    acc = acc.add(&vj.mul(&other.get(&[i]).diff_coord(j)));
                }
                let wj = other.get(&[j]);
                if !wj.is_zero() {
                    acc = acc.sub(&wj.mul(&self.get(&[i]).diff_coord(j)));
                }
            }
            out.set(&[i], acc);
        }
        Ok(out)
    }

    /// Standard Lie derivative along a vector field. On functions this is
    /// v(f), on vector fields the commutator; covariant slots follow from
    /// the dual pairing (L_v w)(u) = v(w(u)) - w([v,u]) extended by the
    /// Leibniz rule, which in components reads
    ///   (L_v t)^I_J = v(t^I_J) - sum_a d_k v^{i_a} t^{..k..}_J
    ///                + sum_b d_{j_b} v^k t^I_{..k..}.
    pub fn lie_derivative(&self, t: &TensorField) -> Result<TensorField> {
        self.expect_type(1, 0)?;
        self.check_same_chart(t)?;
        let n = self.dim();
        let ttype = t.ttype;
        let mut out = TensorField::zero(&self.chart, ttype);
        for idx in Self::indices(n, ttype.slots()) {
            let mut acc = self.apply_to_scalar(t.get(&idx))?;
            for slot in 0..ttype.r {
                for k in 0..n {
                    let dv = self.get(&[idx[slot]]).diff_coord(k);
                    if dv.is_zero() {
                        continue;
                    }
                    let mut inner = idx.clone();
                    inner[slot] = k;
                    acc = acc.sub(&dv.mul(t.get(&inner)));
                }
            }
            for slot in ttype.r..ttype.slots() {
                for k in 0..n {
                    let dv = self.get(&[k]).diff_coord(idx[slot]);
                    if dv.is_zero() {
                        continue;
                    }
                    let mut inner = idx.clone();
                    inner[slot] = k;
                    acc = acc.add(&dv.mul(t.get(&inner)));
                }
            }
            out.set(&idx, acc);
        }
        Ok(out)
    }

    /// Contraction of a vector field into the first covariant slot of a
    /// purely covariant tensor.
    pub fn insert(&self, t: &TensorField) -> Result<TensorField> {
        self.expect_type(1, 0)?;
        self.check_same_chart(t)?;
        if t.ttype.r != 0 || t.ttype.s == 0 {
            return Err(Error::ArityViolation);
        }
        let n = self.dim();
        let out_type = TensorType::new(0, t.ttype.s - 1);
        let mut out = TensorField::zero(&self.chart, out_type);
        for idx in Self::indices(n, out_type.slots()) {
            let mut acc = Scalar::zero(self.chart.clone());
            for k in 0..n {
                let vk = self.get(&[k]);
                if vk.is_zero() {
                    continue;
                }
                let mut inner = vec![k];
                inner.extend_from_slice(&idx);
                acc = acc.add(&vk.mul(t.get(&inner)));
            }
            out.set(&idx, acc);
        }
        Ok(out)
    }

    /// Insertion of a T*M (x) TM element, given as (form, vector) pairs,
    /// into a 1-form: iota_{w' (x) v} w = (iota_v w) * w', summed over the
    /// pair list.
    pub fn insert_mixed(pairs: &[(TensorField, TensorField)], omega: &TensorField) -> Result<TensorField> {
        omega.expect_type(0, 1)?;
        let chart = omega.chart().clone();
        let mut out = TensorField::zero(&chart, TensorType::new(0, 1));
        for (form, vec) in pairs {
            form.expect_type(0, 1)?;
            vec.expect_type(1, 0)?;
            if form.chart() != &chart || vec.chart() != &chart {
                return Err(Error::ChartMismatch);
            }
            let paired = vec.insert(omega)?; // iota_v omega, a scalar tensor
            out = out.add(&form.scale(paired.as_scalar()))?;
        }
        Ok(out)
    }
}

impl PartialEq for TensorField {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.ttype == other.ttype && self.comps == other.comps
    }
}

impl Eq for TensorField {}

impl fmt::Display for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tensor(self))
    }
}

/// Renders a tensor as a sum of coefficient-weighted basis monomials, e.g.
/// `(x)*∂y⊗dx`. Deterministic: indices iterate in row-major order.
pub fn render_tensor(t: &TensorField) -> String {
    if t.tensor_type().slots() == 0 {
        return t.as_scalar().render();
    }
    let chart = t.chart();
    let n = chart.dim();
    let mut parts: Vec<String> = Vec::new();
    for idx in TensorField::indices(n, t.tensor_type().slots()) {
        let c = t.get(&idx);
        if c.is_zero() {
            continue;
        }
        let mut basis: Vec<String> = Vec::new();
        for (slot, &i) in idx.iter().enumerate() {
            let name = chart.var_name(i);
            if slot < t.tensor_type().r {
                basis.push(format!("∂{name}"));
            } else {
                basis.push(format!("d{name}"));
            }
        }
        let basis = basis.join("⊗");
        if c.is_one() {
            parts.push(basis);
        } else {
            parts.push(format!("{}*{}", c.render_factor(), basis));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart3() -> Chart {
        Chart::coordinates(&["x", "y", "z"]).unwrap()
    }

    fn vf(chart: &Chart, comps: [&str; 3]) -> TensorField {
        TensorField::vector(
            chart,
            comps.iter().map(|e| chart.parse(e).unwrap()).collect(),
        )
        .unwrap()
    }

    /// The Euclidean metric dx(x)dx + dy(x)dy + dz(x)dz.
    fn metric(chart: &Chart) -> TensorField {
        let mut g = TensorField::zero(chart, TensorType::new(0, 2));
        for i in 0..3 {
            g.set(&[i, i], Scalar::one(chart.clone()));
        }
        g
    }

    #[test]
    fn commutator_of_constant_fields_vanishes() {
        let c = chart3();
        let dx = TensorField::coordinate_vector(&c, 0);
        let dy = TensorField::coordinate_vector(&c, 1);
        assert!(dx.commutator(&dy).unwrap().is_zero());
    }

    #[test]
    fn commutator_of_rotations() {
        // [x∂y - y∂x, x∂z - z∂x] = z∂y - y∂z, by the componentwise formula.
        let c = chart3();
        let a = vf(&c, ["-y", "x", "0"]);
        let b = vf(&c, ["-z", "0", "x"]);
        let expect = vf(&c, ["0", "z", "-y"]);
        assert_eq!(a.commutator(&b).unwrap(), expect);
    }

    #[test]
    fn commutator_through_generator() {
        // [∂x, chi*∂y] = (2*chi/x^3)*∂y
        let c = Chart::new(&["x", "y"], &[("chi", &[("x", "2*chi/x^3")])]).unwrap();
        let dx = TensorField::coordinate_vector(&c, 0);
        let v = TensorField::vector(
            &c,
            vec![c.zero(), c.var("chi").unwrap()],
        )
        .unwrap();
        let expect = TensorField::vector(
            &c,
            vec![c.zero(), c.parse("2*chi/x^3").unwrap()],
        )
        .unwrap();
        assert_eq!(dx.commutator(&v).unwrap(), expect);
    }

    #[test]
    fn metric_is_rotation_invariant() {
        let c = chart3();
        let g = metric(&c);
        let dx = TensorField::coordinate_vector(&c, 0);
        assert!(dx.lie_derivative(&g).unwrap().is_zero());
        let rot = vf(&c, ["-y", "x", "0"]);
        assert!(rot.lie_derivative(&g).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_scaling_field() {
        // L_{x∂x}(dx) = dx, the Cartan formula by hand.
        let c = chart3();
        let v = vf(&c, ["x", "0", "0"]);
        let dx = TensorField::coordinate_form(&c, 0);
        assert_eq!(v.lie_derivative(&dx).unwrap(), dx);
    }

    #[test]
    fn insertions() {
        let c = chart3();
        let dx_form = TensorField::coordinate_form(&c, 0);
        let dy_form = TensorField::coordinate_form(&c, 1);
        let ex = TensorField::coordinate_vector(&c, 0);
        let ez = TensorField::coordinate_vector(&c, 2);
        assert!(ex.insert(&dx_form).unwrap().as_scalar().is_one());
        assert!(ez.insert(&dx_form).unwrap().as_scalar().is_zero());
        // insert_mixed([(dx, ∂y)], dy) = (iota_{∂y} dy) * dx = dx
        let ey = TensorField::coordinate_vector(&c, 1);
        let out = TensorField::insert_mixed(&[(dx_form.clone(), ey)], &dy_form).unwrap();
        assert_eq!(out, dx_form);
    }

    #[test]
    fn products_and_linear_ops() {
        let c = chart3();
        let dx = TensorField::coordinate_form(&c, 0);
        let dy = TensorField::coordinate_form(&c, 1);
        let dz = TensorField::coordinate_form(&c, 2);
        let built = dx
            .tensor_product(&dx)
            .unwrap()
            .add(&dy.tensor_product(&dy).unwrap())
            .unwrap()
            .add(&dz.tensor_product(&dz).unwrap())
            .unwrap();
        assert_eq!(built, metric(&c));
        assert!(built.scale(&c.zero()).is_zero());
        let dxdy = dx.tensor_product(&dy).unwrap();
        assert!(dxdy.add(&dxdy.neg()).unwrap().is_zero());
    }

    #[test]
    fn chart_and_type_mismatches_error() {
        let c = chart3();
        let other = Chart::coordinates(&["u", "v", "w"]).unwrap();
        let a = TensorField::coordinate_vector(&c, 0);
        let b = TensorField::coordinate_vector(&other, 0);
        assert!(matches!(a.commutator(&b), Err(Error::ChartMismatch)));
        let form = TensorField::coordinate_form(&c, 0);
        assert!(matches!(a.add(&form), Err(Error::TypeMismatch { .. })));
        assert!(matches!(form.insert(&form), Err(Error::TypeMismatch { .. })));
    }
}

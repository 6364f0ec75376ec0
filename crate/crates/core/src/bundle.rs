//! Anchored bundles with connections over a chart.
//!
//! Frames are global: every bundle is trivial over its single chart, which
//! covers all use cases here. The induced E-connection on tensor fields is
//! realized through a derivation kernel: for a section s, the operator
//! t -> {}^E∇_s t acts on functions as rho(s) and on the coordinate frame by
//! the matrix A_k^i = -d_k rho(s)^i - rho(grad_k s)^i; duality and the
//! Leibniz rule then fix it on every tensor type. On vector fields this is
//! exactly [rho(s), v] - rho(grad_v s), and on 1-forms the Lie-derivative
//! plus insertion formula; both are pinned by tests.

use std::sync::Arc;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{TensorField, TensorType};

#[derive(Debug)]
pub(crate) struct BundleInner {
    pub chart: Chart,
    pub rank: usize,
    /// `anchor[a][i]`: the d/dx_i component of rho(e_a).
    pub anchor: Vec<Vec<Scalar>>,
}

/// Anchored bundle handle; cheap to clone and share.
#[derive(Clone, Debug)]
pub struct AnchoredBundle(pub(crate) Arc<BundleInner>);

impl AnchoredBundle {
    pub fn new(chart: &Chart, rank: usize, anchor: Vec<Vec<Scalar>>) -> Result<AnchoredBundle> {
        if rank == 0 {
            return Err(Error::InvalidDimension("bundle rank must be positive".into()));
        }
        if anchor.len() != rank {
            return Err(Error::InvalidDimension(format!(
                "anchor has {} rows, expected rank {}",
                anchor.len(),
                rank
            )));
        }
        for row in &anchor {
            if row.len() != chart.dim() {
                return Err(Error::InvalidDimension(format!(
                    "anchor row has {} entries, expected chart dimension {}",
                    row.len(),
                    chart.dim()
                )));
            }
            for s in row {
                if s.chart() != chart {
                    return Err(Error::ChartMismatch);
                }
            }
        }
        Ok(AnchoredBundle(Arc::new(BundleInner {
            chart: chart.clone(),
            rank,
            anchor,
        })))
    }

    pub fn chart(&self) -> &Chart {
        &self.0.chart
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Anchor of the a-th frame section as a vector field.
    pub fn anchor_of_frame(&self, a: usize) -> TensorField {
        TensorField::vector(&self.0.chart, self.0.anchor[a].clone())
            .expect("anchor rows validated at construction")
    }

    pub fn frame_section(&self, a: usize) -> ESection {
        let mut coeffs = vec![Scalar::zero(self.0.chart.clone()); self.0.rank];
        coeffs[a] = Scalar::one(self.0.chart.clone());
        ESection {
            bundle: self.clone(),
            coeffs,
        }
    }

    pub fn section(&self, coeffs: Vec<Scalar>) -> Result<ESection> {
        if coeffs.len() != self.0.rank {
            return Err(Error::InvalidDimension(format!(
                "section has {} coefficients, expected rank {}",
                coeffs.len(),
                self.0.rank
            )));
        }
        Ok(ESection {
            bundle: self.clone(),
            coeffs,
        })
    }
}

impl PartialEq for AnchoredBundle {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.chart == other.0.chart
            && self.0.rank == other.0.rank
            && self.0.anchor == other.0.anchor
    }
}

impl Eq for AnchoredBundle {}

/// Section of the bundle: s = sum_a f^a e_a.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ESection {
    bundle: AnchoredBundle,
    coeffs: Vec<Scalar>,
}

impl ESection {
    pub fn bundle(&self) -> &AnchoredBundle {
        &self.bundle
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, f: &Scalar) -> ESection {
        ESection {
            bundle: self.bundle.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect(),
        }
    }

    pub fn add(&self, other: &ESection) -> Result<ESection> {
        if self.bundle != other.bundle {
            return Err(Error::BundleMismatch);
        }
        Ok(ESection {
            bundle: self.bundle.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// rho(s) = sum_a f^a rho(e_a), a vector field.
    pub fn anchor_apply(&self) -> TensorField {
        let chart = self.bundle.chart();
        let mut comps = vec![Scalar::zero(chart.clone()); chart.dim()];
        for (a, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (i, comp) in comps.iter_mut().enumerate() {
                *comp = comp.add(&f.mul(&self.bundle.0.anchor[a][i]));
            }
        }
        TensorField::vector(chart, comps).expect("component count matches chart")
    }
}

/// Vector bundle connection given by Christoffel coefficients:
/// grad_{d/dx_i} e_a = gamma[i][a][b] e_b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    bundle: AnchoredBundle,
    gamma: Vec<Vec<Vec<Scalar>>>,
}

impl Connection {
    pub fn new(bundle: &AnchoredBundle, gamma: Vec<Vec<Vec<Scalar>>>) -> Result<Connection> {
        let n = bundle.chart().dim();
        let m = bundle.rank();
        if gamma.len() != n || gamma.iter().any(|g| g.len() != m || g.iter().any(|r| r.len() != m)) {
            return Err(Error::InvalidDimension(format!(
                "christoffel array must have shape ({n}, {m}, {m})"
            )));
        }
        Ok(Connection {
            bundle: bundle.clone(),
            gamma,
        })
    }

    /// The flat connection: all Christoffel coefficients zero.
    pub fn flat(bundle: &AnchoredBundle) -> Connection {
        let n = bundle.chart().dim();
        let m = bundle.rank();
        let zero = Scalar::zero(bundle.chart().clone());
        Connection {
            bundle: bundle.clone(),
            gamma: vec![vec![vec![zero; m]; m]; n],
        }
    }

    pub fn bundle(&self) -> &AnchoredBundle {
        &self.bundle
    }

    pub fn christoffel(&self, i: usize, a: usize, b: usize) -> &Scalar {
        &self.gamma[i][a][b]
    }

    pub fn is_flat_coefficients(&self) -> bool {
        self.gamma
            .iter()
            .flatten()
            .flatten()
            .all(|s| s.is_zero())
    }

    /// grad_{d/dx_i} s: (grad_i s)^b = d_i f^b + gamma[i][a][b] f^a.
    pub fn derivative_along_coordinate(&self, i: usize, s: &ESection) -> Result<ESection> {
        if s.bundle != self.bundle {
            return Err(Error::BundleMismatch);
        }
        let m = self.bundle.rank();
        let mut coeffs = Vec::with_capacity(m);
        for b in 0..m {
            let mut acc = s.coeffs[b].diff_coord(i);
            for a in 0..m {
                if s.coeffs[a].is_zero() || self.gamma[i][a][b].is_zero() {
                    continue;
                }
                acc = acc.add(&self.gamma[i][a][b].mul(&s.coeffs[a]));
            }
            coeffs.push(acc);
        }
        Ok(ESection {
            bundle: self.bundle.clone(),
            coeffs,
        })
    }

    /// grad_v s for a vector field v: v^i grad_i s.
    pub fn covariant_derivative(&self, v: &TensorField, s: &ESection) -> Result<ESection> {
        if v.chart() != self.bundle.chart() {
            return Err(Error::ChartMismatch);
        }
        if v.tensor_type() != TensorType::new(1, 0) {
            return Err(Error::TypeMismatch {
                expected_r: 1,
                expected_s: 0,
                got_r: v.tensor_type().r,
                got_s: v.tensor_type().s,
            });
        }
        let chart = self.bundle.chart().clone();
        let mut out = self.bundle.section(vec![Scalar::zero(chart.clone()); self.bundle.rank()])?;
        for i in 0..chart.dim() {
            let vi = v.get(&[i]);
            if vi.is_zero() {
                continue;
            }
            out = out.add(&self.derivative_along_coordinate(i, s)?.scale(vi))?;
        }
        Ok(out)
    }

    /// grad s as an element of T*M (x) E: the list of coordinate-direction
    /// derivatives (dx^i, grad_i s).
    pub fn full_derivative(&self, s: &ESection) -> Result<Vec<ESection>> {
        (0..self.bundle.chart().dim())
            .map(|i| self.derivative_along_coordinate(i, s))
            .collect()
    }

    /// Curvature components F[i][j][a][b] with
    /// F_{ij a}^b = d_i G_{ja}^b - d_j G_{ia}^b + G_{ic}^b G_{ja}^c - G_{jc}^b G_{ia}^c,
    /// antisymmetric in (i,j) by construction.
    pub fn curvature(&self) -> Vec<Vec<Vec<Vec<Scalar>>>> {
        let n = self.bundle.chart().dim();
        let m = self.bundle.rank();
        let zero = Scalar::zero(self.bundle.chart().clone());
        let mut out = vec![vec![vec![vec![zero; m]; m]; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for a in 0..m {
                    for b in 0..m {
                        let mut acc = self.gamma[j][a][b]
                            .diff_coord(i)
                            .sub(&self.gamma[i][a][b].diff_coord(j));
                        for c in 0..m {
                            acc = acc
                                .add(&self.gamma[i][c][b].mul(&self.gamma[j][a][c]))
                                .sub(&self.gamma[j][c][b].mul(&self.gamma[i][a][c]));
                        }
                        out[i][j][a][b] = acc;
                    }
                }
            }
        }
        out
    }
}

/// Action data of the derivative operator {}^E∇_s on tensors: the vector
/// field rho(s) together with w[i] = rho(grad_i s).
#[derive(Clone, Debug)]
pub struct EDerivation {
    rho: TensorField,
    w: Vec<TensorField>,
}

impl EDerivation {
    pub fn new(conn: &Connection, s: &ESection) -> Result<EDerivation> {
        let rho = s.anchor_apply();
        let w = conn
            .full_derivative(s)?
            .iter()
            .map(|d| d.anchor_apply())
            .collect();
        Ok(EDerivation { rho, w })
    }

    /// Assembles the derivation from precomputed data; used by the free
    /// algebroid layer where sections live in the extension rather than E.
    pub(crate) fn from_parts(rho: TensorField, w: Vec<TensorField>) -> EDerivation {
        EDerivation { rho, w }
    }

    pub fn rho(&self) -> &TensorField {
        &self.rho
    }

    fn chart(&self) -> &Chart {
        self.rho.chart()
    }

    /// Frame action matrix: {}^E∇_s (d/dx_k) = A_k^i d/dx_i with
    /// A_k^i = -d_k rho(s)^i - w_k^i.
    fn a_matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.chart().dim();
        let mut a = vec![vec![Scalar::zero(self.chart().clone()); n]; n];
        for (k, row) in a.iter_mut().enumerate() {
            for (i, entry) in row.iter_mut().enumerate() {
                *entry = self.rho.get(&[i]).diff_coord(k).neg().sub(self.w[k].get(&[i]));
            }
        }
        a
    }

    /// Single-connection action on a tensor of any type: every slot is
    /// differentiated with this derivation; on (0,0) it is rho(s)(f).
    pub fn apply(&self, t: &TensorField) -> Result<TensorField> {
        let slots = t.tensor_type().slots();
        if slots == 0 {
            return Ok(TensorField::from_scalar(
                self.rho.apply_to_scalar(t.as_scalar())?,
            ));
        }
        let derivs = vec![self; slots];
        combined_apply(&derivs, t)
    }
}

/// Multi-connection action: slot k of the tensor is differentiated by the
/// k-th derivation (contravariant slots first, then covariant, each in
/// declaration order); the scalar part rho(s)(component) enters once.
pub fn combined_apply(derivs: &[&EDerivation], t: &TensorField) -> Result<TensorField> {
    let ttype = t.tensor_type();
    if derivs.len() != ttype.slots() {
        return Err(Error::SlotCountMismatch {
            slots: ttype.slots(),
            connections: derivs.len(),
        });
    }
    let chart = t.chart().clone();
    for d in derivs {
        if d.chart() != &chart {
            return Err(Error::ChartMismatch);
        }
    }
    if ttype.slots() == 0 {
        // No slot to act on: combined derivative reduces to rho(s)(f). An
        // empty derivation list carries no rho, so this case is exposed via
        // `scalar_action` instead.
        return Err(Error::SlotCountMismatch {
            slots: 0,
            connections: 0,
        });
    }
    let rho = derivs[0].rho().clone();
    let n = chart.dim();
    let mats: Vec<Vec<Vec<Scalar>>> = derivs.iter().map(|d| d.a_matrix()).collect();
    let mut out = TensorField::zero(&chart, ttype);
    for idx in TensorField::indices(n, ttype.slots()) {
        let mut acc = rho.apply_to_scalar(t.get(&idx))?;
        for slot in 0..ttype.r {
            for k in 0..n {
                let a = &mats[slot][k][idx[slot]];
                if a.is_zero() {
                    continue;
                }
                let mut inner = idx.clone();
                inner[slot] = k;
                acc = acc.add(&a.mul(t.get(&inner)));
            }
        }
        for slot in ttype.r..ttype.slots() {
            for k in 0..n {
                let a = &mats[slot][idx[slot]][k];
                if a.is_zero() {
                    continue;
                }
                let mut inner = idx.clone();
                inner[slot] = k;
                acc = acc.sub(&a.mul(t.get(&inner)));
            }
        }
        out.set(&idx, acc);
    }
    Ok(out)
}

/// {}^E∇_s t for a single connection, valid for every tensor type including
/// (0,0), where it reduces to rho(s)(f).
pub fn e_connection_apply(conn: &Connection, s: &ESection, t: &TensorField) -> Result<TensorField> {
    if t.chart() != conn.bundle().chart() {
        return Err(Error::ChartMismatch);
    }
    if t.tensor_type().slots() == 0 {
        let rho = s.anchor_apply();
        return Ok(TensorField::from_scalar(rho.apply_to_scalar(t.as_scalar())?));
    }
    EDerivation::new(conn, s)?.apply(t)
}

/// Combined multi-connection derivative of Definition-style compatibility:
/// one connection per tensor slot.
pub fn combined_e_connection(
    connections: &[&Connection],
    s: &ESection,
    t: &TensorField,
) -> Result<TensorField> {
    if t.tensor_type().slots() != connections.len() {
        return Err(Error::SlotCountMismatch {
            slots: t.tensor_type().slots(),
            connections: connections.len(),
        });
    }
    if t.tensor_type().slots() == 0 {
        let rho = s.anchor_apply();
        return Ok(TensorField::from_scalar(rho.apply_to_scalar(t.as_scalar())?));
    }
    let derivs: Vec<EDerivation> = connections
        .iter()
        .map(|c| EDerivation::new(c, s))
        .collect::<Result<_>>()?;
    let refs: Vec<&EDerivation> = derivs.iter().collect();
    combined_apply(&refs, t)
}

/// Per-frame compatibility residuals of a tensor and the overall verdict.
/// C-infinity-linearity of the combined derivative in the section slot makes
/// the frame sweep complete.
pub fn check_compatibility(
    bundle: &AnchoredBundle,
    connections: &[&Connection],
    t: &TensorField,
) -> Result<(Vec<TensorField>, bool)> {
    let mut residuals = Vec::with_capacity(bundle.rank());
    for a in 0..bundle.rank() {
        let s = bundle.frame_section(a);
        residuals.push(combined_e_connection(connections, &s, t)?);
    }
    let ok = residuals.iter().all(|r| r.is_zero());
    Ok((residuals, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::TensorType;

    fn chart3() -> Chart {
        Chart::coordinates(&["x", "y", "z"]).unwrap()
    }

    /// The rank-3 bundle over R^3 with rho(e1)=dx, rho(e2)=x dy - y dx,
    /// rho(e3)=x dz - z dx, and its flat connection.
    fn isometry_bundle() -> (AnchoredBundle, Connection) {
        let c = chart3();
        let p = |e: &str| c.parse(e).unwrap();
        let anchor = vec![
            vec![p("1"), p("0"), p("0")],
            vec![p("-y"), p("x"), p("0")],
            vec![p("-z"), p("0"), p("x")],
        ];
        let bundle = AnchoredBundle::new(&c, 3, anchor).unwrap();
        let conn = Connection::flat(&bundle);
        (bundle, conn)
    }

    fn metric(c: &Chart) -> TensorField {
        let mut g = TensorField::zero(c, TensorType::new(0, 2));
        for i in 0..3 {
            g.set(&[i, i], Scalar::one(c.clone()));
        }
        g
    }

    #[test]
    fn anchor_apply_on_frames_and_multiples() {
        let (bundle, _) = isometry_bundle();
        let c = bundle.chart().clone();
        let e1 = bundle.frame_section(0);
        assert_eq!(e1.anchor_apply(), TensorField::coordinate_vector(&c, 0));
        let xe1 = e1.scale(&c.var("x").unwrap());
        let expect = TensorField::vector(&c, vec![c.var("x").unwrap(), c.zero(), c.zero()]).unwrap();
        assert_eq!(xe1.anchor_apply(), expect);
    }

    #[test]
    fn anchor_apply_through_generator() {
        let c = Chart::new(&["x", "y"], &[("chi", &[("x", "2*chi/x^3")])]).unwrap();
        let anchor = vec![
            vec![c.one(), c.zero()],
            vec![c.zero(), c.var("chi").unwrap()],
        ];
        let bundle = AnchoredBundle::new(&c, 2, anchor).unwrap();
        let e2 = bundle.frame_section(1);
        let expect = TensorField::vector(&c, vec![c.zero(), c.var("chi").unwrap()]).unwrap();
        assert_eq!(e2.anchor_apply(), expect);
    }

    #[test]
    fn flat_covariant_derivative() {
        let (bundle, conn) = isometry_bundle();
        let c = bundle.chart().clone();
        for a in 0..3 {
            for i in 0..3 {
                assert!(conn
                    .derivative_along_coordinate(i, &bundle.frame_section(a))
                    .unwrap()
                    .is_zero());
            }
        }
        // Leibniz with flat grad: grad(x e1) has dx-component e1, others 0.
        let xe1 = bundle.frame_section(0).scale(&c.var("x").unwrap());
        let full = conn.full_derivative(&xe1).unwrap();
        assert_eq!(full[0], bundle.frame_section(0));
        assert!(full[1].is_zero() && full[2].is_zero());
    }

    /// Rank-2 bundle over (x,y) with grad e2 = x dy (x) e2, everything else
    /// zero; rho(e1)=dx, rho(e2)=0.
    fn xdy_bundle() -> (AnchoredBundle, Connection) {
        let c = Chart::coordinates(&["x", "y"]).unwrap();
        let anchor = vec![vec![c.one(), c.zero()], vec![c.zero(), c.zero()]];
        let bundle = AnchoredBundle::new(&c, 2, anchor).unwrap();
        let mut gamma = vec![vec![vec![c.zero(); 2]; 2]; 2];
        gamma[1][1][1] = c.var("x").unwrap();
        let conn = Connection::new(&bundle, gamma).unwrap();
        (bundle, conn)
    }

    #[test]
    fn directional_derivative_picks_out_components() {
        let (bundle, conn) = xdy_bundle();
        let c = bundle.chart().clone();
        let e2 = bundle.frame_section(1);
        let dx = TensorField::coordinate_vector(&c, 0);
        // grad_{dx} e2 = x dy(dx) e2 = 0
        assert!(conn.covariant_derivative(&dx, &e2).unwrap().is_zero());
        let dy = TensorField::coordinate_vector(&c, 1);
        let expect = e2.scale(&c.var("x").unwrap());
        assert_eq!(conn.covariant_derivative(&dy, &e2).unwrap(), expect);
    }

    #[test]
    fn curvature_of_flat_connection_vanishes() {
        let (_, conn) = isometry_bundle();
        let f = conn.curvature();
        assert!(f.iter().flatten().flatten().flatten().all(|s| s.is_zero()));
    }

    #[test]
    fn curvature_of_x_dy_connection() {
        // With omega = x dy on the e2 line, F = d(omega) = dx ^ dy, so
        // F_{xy 2}^2 = 1 and the other independent components vanish.
        let (bundle, conn) = xdy_bundle();
        let one = Scalar::one(bundle.chart().clone());
        let f = conn.curvature();
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let expect_one = i == 0 && j == 1 && a == 1 && b == 1;
                        let expect_neg = i == 1 && j == 0 && a == 1 && b == 1;
                        if expect_one {
                            assert_eq!(f[i][j][a][b], one);
                        } else if expect_neg {
                            assert_eq!(f[i][j][a][b], one.neg());
                        } else {
                            assert!(f[i][j][a][b].is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_of_exact_abelian_connection_vanishes() {
        // Rank 1 with Gamma_i = d_i f for f = x^2 y: F = d(df) = 0.
        let c = Chart::coordinates(&["x", "y"]).unwrap();
        let bundle =
            AnchoredBundle::new(&c, 1, vec![vec![c.one(), c.zero()]]).unwrap();
        let f = c.parse("x^2*y").unwrap();
        let gamma = vec![
            vec![vec![f.diff_coord(0)]],
            vec![vec![f.diff_coord(1)]],
        ];
        let conn = Connection::new(&bundle, gamma).unwrap();
        let curv = conn.curvature();
        assert!(curv.iter().flatten().flatten().flatten().all(|s| s.is_zero()));
    }

    #[test]
    fn e_connection_on_vectors_matches_defining_formula() {
        // Rank-2 over R^2, rho(e1)=dx, rho(e2)=dy, grad e1 = dx (x) e2:
        // {}^E∇_{e1}(dx) = [dx,dx] - rho(grad_{dx} e1) = -dy.
        let c = Chart::coordinates(&["x", "y"]).unwrap();
        let anchor = vec![vec![c.one(), c.zero()], vec![c.zero(), c.one()]];
        let bundle = AnchoredBundle::new(&c, 2, anchor).unwrap();
        let mut gamma = vec![vec![vec![c.zero(); 2]; 2]; 2];
        gamma[0][0][1] = c.one();
        let conn = Connection::new(&bundle, gamma).unwrap();
        let e1 = bundle.frame_section(0);
        let dx = TensorField::coordinate_vector(&c, 0);
        let got = e_connection_apply(&conn, &e1, &dx).unwrap();
        let expect = TensorField::coordinate_vector(&c, 1).neg();
        assert_eq!(got, expect);
        // Same value through the defining formula directly.
        let direct = e1
            .anchor_apply()
            .commutator(&dx)
            .unwrap()
            .sub(&conn.covariant_derivative(&dx, &e1).unwrap().anchor_apply())
            .unwrap();
        assert_eq!(got, direct);
    }

    #[test]
    fn e_connection_on_forms_matches_lie_insert_formula() {
        // {}^E∇_s omega = L_{rho(s)} omega + iota_{rho(grad s)} omega.
        let (bundle, conn) = xdy_bundle();
        let c = bundle.chart().clone();
        let s = bundle
            .section(vec![c.var("y").unwrap(), c.var("x").unwrap()])
            .unwrap();
        for form_index in 0..2 {
            let omega = TensorField::coordinate_form(&c, form_index);
            let got = e_connection_apply(&conn, &s, &omega).unwrap();
            let lie = s.anchor_apply().lie_derivative(&omega).unwrap();
            let pairs: Vec<(TensorField, TensorField)> = (0..2)
                .map(|i| {
                    (
                        TensorField::coordinate_form(&c, i),
                        conn.derivative_along_coordinate(i, &s).unwrap().anchor_apply(),
                    )
                })
                .collect();
            let ins = TensorField::insert_mixed(&pairs, &omega).unwrap();
            assert_eq!(got, lie.add(&ins).unwrap());
        }
    }

    #[test]
    fn metric_is_compatible_with_isometry_bundle() {
        let (bundle, conn) = isometry_bundle();
        let g = metric(bundle.chart());
        // {}^E∇_{e1}(dy as a vector) with flat grad and constant fields.
        let dy = TensorField::coordinate_vector(bundle.chart(), 1);
        assert!(e_connection_apply(&conn, &bundle.frame_section(0), &dy)
            .unwrap()
            .is_zero());
        // {}^E∇_{e2}(g) = 0.
        assert!(e_connection_apply(&conn, &bundle.frame_section(1), &g)
            .unwrap()
            .is_zero());
        let (_, ok) = check_compatibility(&bundle, &[&conn, &conn], &g).unwrap();
        assert!(ok);
    }

    #[test]
    fn combined_on_scalars_and_noninvariant_tensor() {
        let (bundle, conn) = isometry_bundle();
        let c = bundle.chart().clone();
        // m = 0: reduces to rho(s)(f); with f = 1 the result is zero.
        let one_t = TensorField::from_scalar(c.one());
        assert!(
            combined_e_connection(&[], &bundle.frame_section(1), &one_t)
                .unwrap()
                .is_zero()
        );
        // dx (x) dx is not rotation invariant: the e2 residual is
        // -(dy (x) dx + dx (x) dy).
        let dx = TensorField::coordinate_form(&c, 0);
        let dy = TensorField::coordinate_form(&c, 1);
        let dxdx = dx.tensor_product(&dx).unwrap();
        let got = combined_e_connection(&[&conn, &conn], &bundle.frame_section(1), &dxdx).unwrap();
        let expect = dy
            .tensor_product(&dx)
            .unwrap()
            .add(&dx.tensor_product(&dy).unwrap())
            .unwrap()
            .neg();
        assert_eq!(got, expect);
        let (_, ok) = check_compatibility(&bundle, &[&conn, &conn], &dxdx).unwrap();
        assert!(!ok);
        // The zero tensor of any type is compatible.
        let zero = TensorField::zero(&c, TensorType::new(0, 2));
        let (_, ok) = check_compatibility(&bundle, &[&conn, &conn], &zero).unwrap();
        assert!(ok);
    }

    #[test]
    fn slot_count_mismatch_is_reported() {
        let (bundle, conn) = isometry_bundle();
        let g = metric(bundle.chart());
        assert!(matches!(
            combined_e_connection(&[&conn], &bundle.frame_section(0), &g),
            Err(Error::SlotCountMismatch { slots: 2, connections: 1 })
        ));
    }
}

//! Finite-rank Lie algebroids: rank-k bundles with anchor, structure
//! functions and a connection. These are the targets of universal morphisms
//! and the fixtures on which the two routes to the compatibility tensor are
//! compared:
//!
//! * the curvature route  S = 2 Alt⟨ρ, F⟩ + ∇(ᴬT), with the A-torsion
//!   ᴬT(s,s') = ∇_{ρ(s)}s' - ∇_{ρ(s')}s - [s,s'] and the induced connection
//!   on Λ²A*⊗A via dual Christoffels;
//! * the sections route   S(s,s') = L_s(∇s') - L_{s'}(∇s) - ∇_{ρ(∇s)}s'
//!   + ∇_{ρ(∇s')}s - ∇[s,s'].
//!
//! The two implementations share no code beyond scalar arithmetic.

use std::fmt;

use crate::algebroid::{CartanExtension, FreeSection};
use crate::bracket::TreeMonomial;
use crate::bundle::{AnchoredBundle, Connection};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Section of the finite algebroid: k scalar coefficients in the frame.
pub type ASection = Vec<Scalar>;

/// Element of T*M ⊗ A: one ASection per coordinate 1-form.
pub type ACotensor = Vec<ASection>;

#[derive(Clone, Debug)]
pub struct FiniteLieAlgebroid {
    bundle: AnchoredBundle,
    connection: Connection,
    /// structure[a][b][c]: the e_c coefficient of [e_a, e_b].
    structure: Vec<Vec<Vec<Scalar>>>,
}

/// One located violation of a Lie algebroid axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    /// 1-based frame/coordinate indices locating the identity.
    pub indices: Vec<usize>,
    /// Rendered residual of the violated identity.
    pub residual: String,
}

/// Axiom check report: the first violation found in each identity family.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub antisymmetry: Option<AxiomViolation>,
    pub anchor_morphism: Option<AxiomViolation>,
    pub jacobi: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.antisymmetry.is_none() && self.anchor_morphism.is_none() && self.jacobi.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return f.write_str("all axioms hold");
        }
        let mut parts = Vec::new();
        if let Some(v) = &self.antisymmetry {
            parts.push(format!(
                "antisymmetry violated at C[{},{}]^{}: residual {}",
                v.indices[0], v.indices[1], v.indices[2], v.residual
            ));
        }
        if let Some(v) = &self.anchor_morphism {
            parts.push(format!(
                "anchor morphism violated at ({},{}) component {}: residual {}",
                v.indices[0], v.indices[1], v.indices[2], v.residual
            ));
        }
        if let Some(v) = &self.jacobi {
            parts.push(format!(
                "jacobi violated at triple ({},{},{}) component {}: residual {}",
                v.indices[0], v.indices[1], v.indices[2], v.indices[3], v.residual
            ));
        }
        f.write_str(&parts.join("; "))
    }
}

impl FiniteLieAlgebroid {
    pub fn new(
        bundle: AnchoredBundle,
        connection: Connection,
        structure: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<FiniteLieAlgebroid> {
        if connection.bundle() != &bundle {
            return Err(Error::BundleMismatch);
        }
        let k = bundle.rank();
        if structure.len() != k
            || structure
                .iter()
                .any(|p| p.len() != k || p.iter().any(|r| r.len() != k))
        {
            return Err(Error::InvalidDimension(format!(
                "structure array must have shape ({k}, {k}, {k})"
            )));
        }
        Ok(FiniteLieAlgebroid {
            bundle,
            connection,
            structure,
        })
    }

    pub fn bundle(&self) -> &AnchoredBundle {
        &self.bundle
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    fn dim(&self) -> usize {
        self.bundle.chart().dim()
    }

    fn chart(&self) -> &crate::chart::Chart {
        self.bundle.chart()
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.structure[a][b][c]
    }

    /// Mutable access for building perturbed fixtures in tests and negative
    /// controls; shape is fixed, values are free.
    pub fn structure_constant_mut(&mut self, a: usize, b: usize, c: usize) -> &mut Scalar {
        &mut self.structure[a][b][c]
    }

    pub fn zero_section(&self) -> ASection {
        vec![Scalar::zero(self.chart().clone()); self.rank()]
    }

    pub fn frame(&self, a: usize) -> ASection {
        let mut s = self.zero_section();
        s[a] = Scalar::one(self.chart().clone());
        s
    }

    /// ρ(u) as a vector field.
    pub fn anchor_of(&self, u: &ASection) -> crate::tensor::TensorField {
        self.bundle
            .section(u.clone())
            .expect("section length is the rank")
            .anchor_apply()
    }

    /// Bracket of sections in the frame:
    /// [u,v]^c = u^a v^b C_{ab}^c + ρ(u)(v^c) - ρ(v)(u^c).
    pub fn bracket_sections(&self, u: &ASection, v: &ASection) -> Result<ASection> {
        let k = self.rank();
        let ru = self.anchor_of(u);
        let rv = self.anchor_of(v);
        let mut out = self.zero_section();
        for c in 0..k {
            let mut acc = ru.apply_to_scalar(&v[c])?.sub(&rv.apply_to_scalar(&u[c])?);
            for a in 0..k {
                if u[a].is_zero() {
                    continue;
                }
                for b in 0..k {
                    if v[b].is_zero() || self.structure[a][b][c].is_zero() {
                        continue;
                    }
                    acc = acc.add(&u[a].mul(&v[b]).mul(&self.structure[a][b][c]));
                }
            }
            out[c] = acc;
        }
        Ok(out)
    }

    /// ∇_{∂_i} u in the frame.
    fn nabla_coordinate(&self, i: usize, u: &ASection) -> ASection {
        let k = self.rank();
        let mut out = self.zero_section();
        for c in 0..k {
            let mut acc = u[c].diff_coord(i);
            for d in 0..k {
                let g = self.connection.christoffel(i, d, c);
                if g.is_zero() || u[d].is_zero() {
                    continue;
                }
                acc = acc.add(&g.mul(&u[d]));
            }
            out[c] = acc;
        }
        out
    }

    fn nabla_full(&self, u: &ASection) -> ACotensor {
        (0..self.dim()).map(|i| self.nabla_coordinate(i, u)).collect()
    }

    /// Verifies antisymmetry of the structure functions, the anchor bracket
    /// morphism and the Jacobi identity with anchor-derivative terms.
    /// Reports the first violation found in each family, in deterministic
    /// index order.
    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let k = self.rank();
        let n = self.dim();
        let mut report = AxiomReport::default();

        'antisym: for a in 0..k {
            for b in a..k {
                for c in 0..k {
                    let r = self.structure[a][b][c].add(&self.structure[b][a][c]);
                    if !r.is_zero() {
                        report.antisymmetry = Some(AxiomViolation {
                            indices: vec![a + 1, b + 1, c + 1],
                            residual: r.render(),
                        });
                        break 'antisym;
                    }
                }
            }
        }

        'anchor: for a in 0..k {
            for b in (a + 1)..k {
                let lhs = self
                    .anchor_of(&self.frame(a))
                    .commutator(&self.anchor_of(&self.frame(b)))?;
                let rhs = self.anchor_of(&self.bracket_sections(&self.frame(a), &self.frame(b))?);
                let diff = lhs.sub(&rhs)?;
                for i in 0..n {
                    let r = diff.get(&[i]);
                    if !r.is_zero() {
                        report.anchor_morphism = Some(AxiomViolation {
                            indices: vec![a + 1, b + 1, i + 1],
                            residual: r.render(),
                        });
                        break 'anchor;
                    }
                }
            }
        }

        'jacobi: for a in 0..k {
            for b in (a + 1)..k {
                for c in (b + 1)..k {
                    let ea = self.frame(a);
                    let eb = self.frame(b);
                    let ec = self.frame(c);
                    let j1 = self.bracket_sections(&ea, &self.bracket_sections(&eb, &ec)?)?;
                    let j2 = self.bracket_sections(&eb, &self.bracket_sections(&ec, &ea)?)?;
                    let j3 = self.bracket_sections(&ec, &self.bracket_sections(&ea, &eb)?)?;
                    for e in 0..k {
                        let r = j1[e].add(&j2[e]).add(&j3[e]);
                        if !r.is_zero() {
                            report.jacobi = Some(AxiomViolation {
                                indices: vec![a + 1, b + 1, c + 1, e + 1],
                                residual: r.render(),
                            });
                            break 'jacobi;
                        }
                    }
                }
            }
        }

        Ok(report)
    }

    /// A-torsion components ᴬT[a][b][c]:
    /// ᴬT(e_a, e_b) = ∇_{ρ(e_a)}e_b - ∇_{ρ(e_b)}e_a - [e_a, e_b].
    pub fn a_torsion(&self) -> Result<Vec<Vec<ASection>>> {
        let k = self.rank();
        let n = self.dim();
        let mut out = vec![vec![self.zero_section(); k]; k];
        for a in 0..k {
            for b in 0..k {
                let mut t = self.zero_section();
                for c in 0..k {
                    let mut acc = self.structure[a][b][c].neg();
                    for i in 0..n {
                        let ra = &self.bundle.0.anchor[a][i];
                        if !ra.is_zero() {
                            acc = acc.add(&ra.mul(self.connection.christoffel(i, b, c)));
                        }
                        let rb = &self.bundle.0.anchor[b][i];
                        if !rb.is_zero() {
                            acc = acc.sub(&rb.mul(self.connection.christoffel(i, a, c)));
                        }
                    }
                    t[c] = acc;
                }
                out[a][b] = t;
            }
        }
        Ok(out)
    }

    /// Compatibility tensor via the curvature formula:
    /// S(e_a,e_b)_i^c = ρ_a^j F_{ji b}^c - ρ_b^j F_{ji a}^c + ∇_i(ᴬT)_{ab}^c,
    /// where the covariant derivative of the torsion uses the dual
    /// Christoffels on A*: ∇_i(ᴬT)_{ab}^c = ∂_i ᴬT_{ab}^c - Γ_{ia}^d ᴬT_{db}^c
    /// - Γ_{ib}^d ᴬT_{ad}^c + Γ_{id}^c ᴬT_{ab}^d.
    pub fn cartan_tensor_curvature(&self) -> Result<Vec<Vec<ACotensor>>> {
        let k = self.rank();
        let n = self.dim();
        let f = self.connection.curvature();
        let torsion = self.a_torsion()?;
        let mut out = vec![vec![vec![self.zero_section(); n]; k]; k];
        for a in 0..k {
            for b in 0..k {
                for i in 0..n {
                    for c in 0..k {
                        // 2 Alt⟨ρ, F⟩ with the anchor contracted into the
                        // first curvature leg.
                        let mut acc = Scalar::zero(self.chart().clone());
                        for j in 0..n {
                            let ra = &self.bundle.0.anchor[a][j];
                            if !ra.is_zero() {
                                acc = acc.add(&ra.mul(&f[j][i][b][c]));
                            }
                            let rb = &self.bundle.0.anchor[b][j];
                            if !rb.is_zero() {
                                acc = acc.sub(&rb.mul(&f[j][i][a][c]));
                            }
                        }
                        // ∇(ᴬT) term.
                        acc = acc.add(&torsion[a][b][c].diff_coord(i));
                        for d in 0..k {
                            let gia = self.connection.christoffel(i, a, d);
                            if !gia.is_zero() {
                                acc = acc.sub(&gia.mul(&torsion[d][b][c]));
                            }
                            let gib = self.connection.christoffel(i, b, d);
                            if !gib.is_zero() {
                                acc = acc.sub(&gib.mul(&torsion[a][d][c]));
                            }
                            let gid = self.connection.christoffel(i, d, c);
                            if !gid.is_zero() {
                                acc = acc.add(&gid.mul(&torsion[a][b][d]));
                            }
                        }
                        out[a][b][i][c] = acc;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Module Lie derivative on T*M ⊗ A along a frame section:
    /// L_{e_a}(Σ_i dx^i ⊗ u_i) has dx^j component
    /// Σ_i ∂_j(ρ_a^i)·u_i + [e_a, u_j].
    fn lie_module(&self, a: usize, ct: &ACotensor) -> Result<ACotensor> {
        let n = self.dim();
        let frame = self.frame(a);
        let rho = self.anchor_of(&frame);
        let mut out = vec![self.zero_section(); n];
        for j in 0..n {
            let mut acc = self.bracket_sections(&frame, &ct[j])?;
            for (i, u) in ct.iter().enumerate() {
                let d = rho.get(&[i]).diff_coord(j);
                if d.is_zero() {
                    continue;
                }
                for (c, entry) in acc.iter_mut().enumerate() {
                    *entry = entry.add(&d.mul(&u[c]));
                }
            }
            out[j] = acc;
        }
        Ok(out)
    }

    /// Compatibility tensor on frame pairs via the sections formula; an
    /// independent route from `cartan_tensor_curvature`.
    pub fn cartan_tensor_sections(&self) -> Result<Vec<Vec<ACotensor>>> {
        let k = self.rank();
        let n = self.dim();
        let mut out = vec![vec![vec![self.zero_section(); n]; k]; k];
        let nablas: Vec<ACotensor> = (0..k).map(|a| self.nabla_full(&self.frame(a))).collect();
        for a in 0..k {
            for b in 0..k {
                let l1 = self.lie_module(a, &nablas[b])?;
                let l2 = self.lie_module(b, &nablas[a])?;
                let br = self.bracket_sections(&self.frame(a), &self.frame(b))?;
                let nbr = self.nabla_full(&br);
                for i in 0..n {
                    // ∇_{ρ(∇e_a)}e_b picks the anchor of the i-th leg of
                    // ∇e_a and differentiates e_b along it, and conversely.
                    let wa = self.anchor_of(&nablas[a][i]);
                    let wb = self.anchor_of(&nablas[b][i]);
                    let mut t3 = self.zero_section();
                    let mut t4 = self.zero_section();
                    for j in 0..n {
                        let waj = wa.get(&[j]);
                        if !waj.is_zero() {
                            for c in 0..k {
                                t3[c] = t3[c].add(&waj.mul(&nablas[b][j][c]));
                            }
                        }
                        let wbj = wb.get(&[j]);
                        if !wbj.is_zero() {
                            for c in 0..k {
                                t4[c] = t4[c].add(&wbj.mul(&nablas[a][j][c]));
                            }
                        }
                    }
                    for c in 0..k {
                        out[a][b][i][c] = l1[i][c]
                            .sub(&l2[i][c])
                            .sub(&t3[c])
                            .add(&t4[c])
                            .sub(&nbr[i][c]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Renders one S(e_a, e_b) value as a sum of dx^i ⊗ e_c terms.
    pub fn render_cotensor(&self, ct: &ACotensor) -> String {
        let names = self.chart().coordinate_names();
        let mut parts = Vec::new();
        for (i, row) in ct.iter().enumerate() {
            for (c, coeff) in row.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                if coeff.is_one() {
                    parts.push(format!("d{}⊗e{}", names[i], c + 1));
                } else {
                    parts.push(format!("{}*d{}⊗e{}", coeff.render_factor(), names[i], c + 1));
                }
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Connection-preserving anchored-bundle morphism from (E, ∇) into a finite
/// Lie algebroid, given by the images of the frame sections.
#[derive(Clone, Debug)]
pub struct AnchoredMorphism {
    source: Connection,
    target: FiniteLieAlgebroid,
    /// images[a]: the k coefficients of φ(e_a) in the target frame.
    images: Vec<ASection>,
}

impl AnchoredMorphism {
    pub fn new(
        source: Connection,
        target: FiniteLieAlgebroid,
        images: Vec<ASection>,
    ) -> Result<AnchoredMorphism> {
        if source.bundle().chart() != target.chart() {
            return Err(Error::ChartMismatch);
        }
        let m = source.bundle().rank();
        let k = target.rank();
        if images.len() != m || images.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidDimension(format!(
                "images must be {m} sections of {k} coefficients"
            )));
        }
        Ok(AnchoredMorphism {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &Connection {
        &self.source
    }

    pub fn target(&self) -> &FiniteLieAlgebroid {
        &self.target
    }

    pub fn image_of_frame(&self, a: usize) -> &ASection {
        &self.images[a]
    }

    /// Checks the type invariants: anchor-commuting and
    /// connection-preserving on the frame, exactly.
    pub fn validate(&self) -> Result<()> {
        let m = self.source.bundle().rank();
        let n = self.source.bundle().chart().dim();
        let k = self.target.rank();
        for a in 0..m {
            let lhs = self.target.anchor_of(&self.images[a]);
            let rhs = self.source.bundle().anchor_of_frame(a);
            if lhs != rhs {
                return Err(Error::MorphismInvariant(format!(
                    "anchor of φ(e{}) differs from ρ(e{})",
                    a + 1,
                    a + 1
                )));
            }
        }
        for i in 0..n {
            for a in 0..m {
                // φ(∇_{∂_i} e_a) in the target frame.
                let mut lhs = self.target.zero_section();
                for b in 0..m {
                    let g = self.source.christoffel(i, a, b);
                    if g.is_zero() {
                        continue;
                    }
                    for c in 0..k {
                        lhs[c] = lhs[c].add(&g.mul(&self.images[b][c]));
                    }
                }
                let rhs = self.target.nabla_coordinate(i, &self.images[a]);
                if lhs != rhs {
                    return Err(Error::MorphismInvariant(format!(
                        "∇-compatibility fails for e{} along coordinate {}",
                        a + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// φ̃ on a canonical monomial: φ̃(e_a) = φ(e_a),
    /// φ̃([u,v]) = [φ̃(u), φ̃(v)] in the target.
    pub fn apply_monomial(&self, t: &TreeMonomial) -> Result<ASection> {
        match t {
            TreeMonomial::Leaf(a) => {
                if *a >= self.images.len() {
                    return Err(Error::GeneratorOutOfRange {
                        index: *a + 1,
                        count: self.images.len(),
                    });
                }
                Ok(self.images[*a].clone())
            }
            TreeMonomial::Node(l, r) => {
                let lu = self.apply_monomial(l)?;
                let rv = self.apply_monomial(r)?;
                self.target.bracket_sections(&lu, &rv)
            }
        }
    }

    /// φ̃ extended C^∞-linearly over a free section.
    pub fn apply_section(&self, xi: &FreeSection) -> Result<ASection> {
        let mut out = self.target.zero_section();
        for (t, f) in xi.terms() {
            let img = self.apply_monomial(t)?;
            for (c, entry) in out.iter_mut().enumerate() {
                *entry = entry.add(&f.mul(&img[c]));
            }
        }
        Ok(out)
    }
}

/// The universal morphism: extends a validated anchored morphism to a free
/// section and asserts the postconditions ρ_A(φ̃(ξ)) = ρ(ξ) and
/// φ̃(∇_{∂_i}ξ) = ∇̄_{∂_i}φ̃(ξ) for every coordinate direction.
pub fn extend_morphism(
    ext: &CartanExtension,
    phi: &AnchoredMorphism,
    xi: &FreeSection,
) -> Result<ASection> {
    phi.validate()?;
    if ext.connection() != phi.source() {
        return Err(Error::MorphismInvariant(
            "morphism source connection differs from the extension input".into(),
        ));
    }
    let image = phi.apply_section(xi)?;

    let rho_free = ext.algebroid().anchor_of_section(xi)?;
    let rho_target = phi.target().anchor_of(&image);
    if rho_free != rho_target {
        return Err(Error::MorphismPostcondition(format!(
            "anchor of φ̃({xi}) differs from the free anchor"
        )));
    }

    let nabla = ext.nabla_section(xi)?;
    for i in 0..phi.target().dim() {
        let lhs = phi.apply_section(nabla.component(i))?;
        let rhs = phi.target().nabla_coordinate(i, &image);
        if lhs != rhs {
            return Err(Error::MorphismPostcondition(format!(
                "∇-compatibility of φ̃ fails along coordinate {}",
                i + 1
            )));
        }
    }
    Ok(image)
}

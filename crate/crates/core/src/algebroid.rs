//! Sections of the depth-truncated free (almost-)Lie algebroid generated by
//! an anchored bundle, and the extension of a bundle connection to it.
//!
//! Truncation semantics: the depth bound D filters the algebroid, it does
//! not quotient it. A bracket whose tree part would exceed D is an error,
//! never silently dropped — the span of deep monomials is not closed under
//! the Leibniz terms, so dropping them would corrupt identities.
//!
//! The connection extends to bracket monomials recursively by
//!   ∇[u,v] = L_u(∇v) - L_v(∇u) - ∇_{ρ(∇u)}v + ∇_{ρ(∇v)}u
//! with the module Lie derivative L_s(ω⊗s') = L_{ρ(s)}ω ⊗ s' + ω ⊗ [s,s'].
//! The recursion for degree d only touches brackets and derivatives of
//! degree < d, so results are memoized per monomial and computed on demand.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::bracket::{self, Flavor, TreeMonomial};
use crate::bundle::{AnchoredBundle, Connection, EDerivation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::TensorField;

/// Scalar-weighted combination of canonical monomials of degree <= D.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeSection {
    bundle: AnchoredBundle,
    flavor: Flavor,
    depth: usize,
    coeffs: BTreeMap<TreeMonomial, Scalar>,
}

impl FreeSection {
    pub fn bundle(&self) -> &AnchoredBundle {
        &self.bundle
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TreeMonomial, &Scalar)> {
        self.coeffs.iter()
    }

    /// Largest monomial degree present; 0 for the zero section.
    pub fn max_degree(&self) -> usize {
        self.coeffs.keys().map(|t| t.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, t: TreeMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &FreeSection) -> Result<FreeSection> {
        if self.bundle != other.bundle {
            return Err(Error::BundleMismatch);
        }
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        let mut out = self.clone();
        for (t, c) in &other.coeffs {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FreeSection) -> Result<FreeSection> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FreeSection {
        FreeSection {
            bundle: self.bundle.clone(),
            flavor: self.flavor,
            depth: self.depth,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, c)| (t.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Scalar) -> FreeSection {
        if f.is_zero() {
            return FreeSection {
                bundle: self.bundle.clone(),
                flavor: self.flavor,
                depth: self.depth,
                coeffs: BTreeMap::new(),
            };
        }
        FreeSection {
            bundle: self.bundle.clone(),
            flavor: self.flavor,
            depth: self.depth,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, c)| (t.clone(), c.mul(f)))
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (t, c) in &self.coeffs {
            if c.is_one() {
                parts.push(t.render());
            } else {
                parts.push(format!("{}*{}", c.render_factor(), t.render()));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for FreeSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Element of T*M ⊗ FR_{<=D}(E): one free section per coordinate 1-form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CotensorSection {
    comps: Vec<FreeSection>,
}

impl CotensorSection {
    pub fn components(&self) -> &[FreeSection] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &FreeSection {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &CotensorSection) -> Result<CotensorSection> {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(CotensorSection { comps })
    }

    pub fn sub(&self, other: &CotensorSection) -> Result<CotensorSection> {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(CotensorSection { comps })
    }

    pub fn render(&self, chart_names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(format!("d{}⊗({})", chart_names[i], c.render()));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Computation context for the free algebroid of an anchored bundle at a
/// fixed flavor and depth bound. Anchor values of monomials are memoized.
pub struct FreeAlgebroid {
    bundle: AnchoredBundle,
    flavor: Flavor,
    depth: usize,
    anchor_memo: RefCell<HashMap<TreeMonomial, TensorField>>,
}

impl FreeAlgebroid {
    pub fn new(bundle: &AnchoredBundle, flavor: Flavor, depth: usize) -> FreeAlgebroid {
        assert!(depth >= 1, "depth bound must be positive");
        FreeAlgebroid {
            bundle: bundle.clone(),
            flavor,
            depth,
            anchor_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn bundle(&self) -> &AnchoredBundle {
        &self.bundle
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn zero_section(&self) -> FreeSection {
        FreeSection {
            bundle: self.bundle.clone(),
            flavor: self.flavor,
            depth: self.depth,
            coeffs: BTreeMap::new(),
        }
    }

    /// The section with coefficient 1 on a canonical monomial.
    pub fn monomial_section(&self, t: &TreeMonomial) -> Result<FreeSection> {
        if t.max_leaf() >= self.bundle.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: t.max_leaf() + 1,
                count: self.bundle.rank(),
            });
        }
        if t.degree() > self.depth {
            return Err(Error::DepthOverflow {
                left: t.render(),
                left_degree: t.degree(),
                right: String::new(),
                right_degree: 0,
                bound: self.depth,
            });
        }
        assert!(
            bracket::is_canonical(t, self.flavor),
            "monomial {t} is not canonical for the {} flavor",
            self.flavor
        );
        let mut s = self.zero_section();
        s.add_term(t.clone(), Scalar::one(self.bundle.chart().clone()));
        Ok(s)
    }

    pub fn generator(&self, a: usize) -> FreeSection {
        self.monomial_section(&TreeMonomial::leaf(a))
            .expect("generator indices are within rank")
    }

    /// Canonical basis monomials of one degree.
    pub fn basis(&self, degree: usize) -> Vec<TreeMonomial> {
        bracket::enumerate_basis(self.bundle.rank(), degree, self.flavor)
    }

    /// Canonical basis monomials of all degrees 1..=d.
    pub fn basis_up_to(&self, d: usize) -> Vec<TreeMonomial> {
        (1..=d).flat_map(|k| self.basis(k)).collect()
    }

    fn check_section(&self, s: &FreeSection) -> Result<()> {
        if s.bundle != self.bundle {
            return Err(Error::BundleMismatch);
        }
        if s.flavor != self.flavor {
            return Err(Error::FlavorMismatch);
        }
        Ok(())
    }

    /// ρ on monomials: ρ(e_a) is the anchor row, ρ([u,v]) = [ρ(u), ρ(v)].
    pub fn anchor_of_monomial(&self, t: &TreeMonomial) -> Result<TensorField> {
        if let Some(v) = self.anchor_memo.borrow().get(t) {
            return Ok(v.clone());
        }
        let value = match t {
            TreeMonomial::Leaf(a) => {
                if *a >= self.bundle.rank() {
                    return Err(Error::GeneratorOutOfRange {
                        index: *a + 1,
                        count: self.bundle.rank(),
                    });
                }
                self.bundle.anchor_of_frame(*a)
            }
            TreeMonomial::Node(l, r) => {
                let lv = self.anchor_of_monomial(l)?;
                let rv = self.anchor_of_monomial(r)?;
                lv.commutator(&rv)?
            }
        };
        self.anchor_memo
            .borrow_mut()
            .insert(t.clone(), value.clone());
        Ok(value)
    }

    /// ρ extended C^∞-linearly over a section.
    pub fn anchor_of_section(&self, s: &FreeSection) -> Result<TensorField> {
        self.check_section(s)?;
        let mut out = TensorField::zero(self.bundle.chart(), crate::tensor::TensorType::new(1, 0));
        for (t, f) in &s.coeffs {
            out = out.add(&self.anchor_of_monomial(t)?.scale(f))?;
        }
        Ok(out)
    }

    /// Bracket with Leibniz corrections:
    /// [f·u, g·v] = fg·[u,v] + f·ρ(u)(g)·v - g·ρ(v)(f)·u,
    /// with [u,v] normalized in the flavor. Every contributing monomial pair
    /// must satisfy deg u + deg v <= D.
    pub fn bracket(&self, a: &FreeSection, b: &FreeSection) -> Result<FreeSection> {
        self.check_section(a)?;
        self.check_section(b)?;
        let m = self.bundle.rank();
        let mut out = self.zero_section();
        for (u, f) in &a.coeffs {
            for (v, g) in &b.coeffs {
                if u.degree() + v.degree() > self.depth {
                    return Err(Error::DepthOverflow {
                        left: u.render(),
                        left_degree: u.degree(),
                        right: v.render(),
                        right_degree: v.degree(),
                        bound: self.depth,
                    });
                }
                let fg = f.mul(g);
                if !fg.is_zero() {
                    let tree_part = bracket::normalize(
                        &TreeMonomial::node(u.clone(), v.clone()),
                        m,
                        self.flavor,
                    )?;
                    for (t, c) in tree_part.iter() {
                        out.add_term(t.clone(), fg.mul(&Scalar::from_int(fg.chart().clone(), c)));
                    }
                }
                let rho_u = self.anchor_of_monomial(u)?;
                out.add_term(v.clone(), f.mul(&rho_u.apply_to_scalar(g)?));
                let rho_v = self.anchor_of_monomial(v)?;
                out.add_term(u.clone(), g.mul(&rho_v.apply_to_scalar(f)?).neg());
            }
        }
        Ok(out)
    }

    /// Jac(s1,s2,s3) = [s1,[s2,s3]] + [s2,[s3,s1]] + [s3,[s1,s2]]. In the
    /// lie flavor this must normalize to zero and the operation asserts it.
    pub fn jacobiator(
        &self,
        s1: &FreeSection,
        s2: &FreeSection,
        s3: &FreeSection,
    ) -> Result<FreeSection> {
        let t1 = self.bracket(s1, &self.bracket(s2, s3)?)?;
        let t2 = self.bracket(s2, &self.bracket(s3, s1)?)?;
        let t3 = self.bracket(s3, &self.bracket(s1, s2)?)?;
        let out = t1.add(&t2)?.add(&t3)?;
        if self.flavor == Flavor::Lie && !out.is_zero() {
            return Err(Error::JacobiatorNotZero);
        }
        Ok(out)
    }
}

/// The extension of a bundle connection to the free algebroid, with ∇ of
/// each monomial memoized.
pub struct CartanExtension<'a> {
    alg: &'a FreeAlgebroid,
    conn: &'a Connection,
    memo: RefCell<HashMap<TreeMonomial, CotensorSection>>,
}

impl<'a> CartanExtension<'a> {
    pub fn new(alg: &'a FreeAlgebroid, conn: &'a Connection) -> Result<CartanExtension<'a>> {
        if conn.bundle() != alg.bundle() {
            return Err(Error::BundleMismatch);
        }
        Ok(CartanExtension {
            alg,
            conn,
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn algebroid(&self) -> &FreeAlgebroid {
        self.alg
    }

    pub fn connection(&self) -> &Connection {
        self.conn
    }

    fn dim(&self) -> usize {
        self.alg.bundle().chart().dim()
    }

    fn zero_cotensor(&self) -> CotensorSection {
        CotensorSection {
            comps: vec![self.alg.zero_section(); self.dim()],
        }
    }

    /// Module Lie derivative: L_s(Σ_i dx^i ⊗ ξ_i) has dx^j component
    /// Σ_i ∂_j(ρ(s)^i)·ξ_i + [s, ξ_j].
    fn lie_module(&self, s: &FreeSection, ct: &CotensorSection) -> Result<CotensorSection> {
        let rho = self.alg.anchor_of_section(s)?;
        let mut comps = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let mut acc = self.alg.bracket(s, &ct.comps[j])?;
            for (i, xi) in ct.comps.iter().enumerate() {
                let d = rho.get(&[i]).diff_coord(j);
                if d.is_zero() {
                    continue;
                }
                acc = acc.add(&xi.scale(&d))?;
            }
            comps.push(acc);
        }
        Ok(CotensorSection { comps })
    }

    /// ∇ along the anchored legs of `src`: dx^i component is
    /// Σ_j ρ(src_i)^j · dst_j, where `dst` is the full derivative of the
    /// section being differentiated.
    fn nabla_along(&self, src: &CotensorSection, dst: &CotensorSection) -> Result<CotensorSection> {
        let mut comps = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let w = self.alg.anchor_of_section(&src.comps[i])?;
            let mut acc = self.alg.zero_section();
            for (j, dj) in dst.comps.iter().enumerate() {
                let wj = w.get(&[j]);
                if wj.is_zero() {
                    continue;
                }
                acc = acc.add(&dj.scale(wj))?;
            }
            comps.push(acc);
        }
        Ok(CotensorSection { comps })
    }

    /// ∇T for a canonical monomial, by the recursive extension formula.
    pub fn nabla_monomial(&self, t: &TreeMonomial) -> Result<CotensorSection> {
        if let Some(v) = self.memo.borrow().get(t) {
            return Ok(v.clone());
        }
        let value = match t {
            TreeMonomial::Leaf(a) => {
                let frame = self.alg.bundle().frame_section(*a);
                let mut comps = Vec::with_capacity(self.dim());
                for i in 0..self.dim() {
                    let d = self.conn.derivative_along_coordinate(i, &frame)?;
                    let mut sec = self.alg.zero_section();
                    for (b, coeff) in d.coeffs().iter().enumerate() {
                        sec.add_term(TreeMonomial::leaf(b), coeff.clone());
                    }
                    comps.push(sec);
                }
                CotensorSection { comps }
            }
            TreeMonomial::Node(u, v) => {
                let nu = self.nabla_monomial(u)?;
                let nv = self.nabla_monomial(v)?;
                let su = self.alg.monomial_section(u)?;
                let sv = self.alg.monomial_section(v)?;
                self.lie_module(&su, &nv)?
                    .sub(&self.lie_module(&sv, &nu)?)?
                    .sub(&self.nabla_along(&nu, &nv)?)?
                    .add(&self.nabla_along(&nv, &nu)?)?
            }
        };
        self.memo.borrow_mut().insert(t.clone(), value.clone());
        Ok(value)
    }

    /// ∇ of a section: ∇(Σ f_T·T) = Σ df_T ⊗ T + f_T·∇T.
    pub fn nabla_section(&self, s: &FreeSection) -> Result<CotensorSection> {
        self.alg.check_section(s)?;
        let mut out = self.zero_cotensor();
        for (t, f) in &s.coeffs {
            let nt = self.nabla_monomial(t)?;
            for i in 0..self.dim() {
                let mut acc = nt.comps[i].scale(f);
                let df = f.diff_coord(i);
                if !df.is_zero() {
                    let mut dt = self.alg.zero_section();
                    dt.add_term(t.clone(), df);
                    acc = acc.add(&dt)?;
                }
                out.comps[i] = out.comps[i].add(&acc)?;
            }
        }
        Ok(out)
    }

    /// Compatibility tensor on sections:
    /// S(s,s') = L_s(∇s') - L_{s'}(∇s) - ∇_{ρ(∇s)}s' + ∇_{ρ(∇s')}s - ∇[s,s'].
    /// Identically zero for the extension, by construction; evaluating it is
    /// the mechanical verification.
    pub fn compatibility_tensor(
        &self,
        s: &FreeSection,
        s2: &FreeSection,
    ) -> Result<CotensorSection> {
        let ns = self.nabla_section(s)?;
        let ns2 = self.nabla_section(s2)?;
        let br = self.alg.bracket(s, s2)?;
        self.lie_module(s, &ns2)?
            .sub(&self.lie_module(s2, &ns)?)?
            .sub(&self.nabla_along(&ns, &ns2)?)?
            .add(&self.nabla_along(&ns2, &ns)?)?
            .sub(&self.nabla_section(&br)?)
    }

    /// Covariant-constancy residual of the Jacobiator on a generator triple:
    /// ∇(Jac(e_a,e_b,e_c)) - [ω_c^l ⊗ Jac(e_a,e_b,e_l) + cycl(abc)].
    pub fn jacobiator_constancy_residual(
        &self,
        a: usize,
        b: usize,
        c: usize,
    ) -> Result<CotensorSection> {
        let jac = |x: usize, y: usize, z: usize| -> Result<FreeSection> {
            self.alg.jacobiator(
                &self.alg.generator(x),
                &self.alg.generator(y),
                &self.alg.generator(z),
            )
        };
        let lhs = self.nabla_section(&jac(a, b, c)?)?;
        let m = self.alg.bundle().rank();
        let mut rhs = self.zero_cotensor();
        for l in 0..m {
            let parts = [
                (c, jac(a, b, l)?),
                (a, jac(b, c, l)?),
                (b, jac(c, a, l)?),
            ];
            for (k, j) in parts {
                if j.is_zero() {
                    continue;
                }
                for i in 0..self.dim() {
                    let w = self.conn.christoffel(i, k, l);
                    if w.is_zero() {
                        continue;
                    }
                    rhs.comps[i] = rhs.comps[i].add(&j.scale(w))?;
                }
            }
        }
        lhs.sub(&rhs)
    }

    /// Residuals for all generator triples a <= b <= c, with the verdict.
    pub fn jacobiator_constancy_report(
        &self,
    ) -> Result<(Vec<((usize, usize, usize), CotensorSection)>, bool)> {
        let m = self.alg.bundle().rank();
        let mut rows = Vec::new();
        for a in 0..m {
            for b in a..m {
                for c in b..m {
                    let r = self.jacobiator_constancy_residual(a, b, c)?;
                    rows.push(((a, b, c), r));
                }
            }
        }
        let ok = rows.iter().all(|(_, r)| r.is_zero());
        Ok((rows, ok))
    }

    /// Derivation data of the induced action of a free section on base
    /// tensors: ρ(ξ) together with w_i = ρ((∇ξ)_i).
    pub fn e_derivation(&self, xi: &FreeSection) -> Result<EDerivation> {
        let rho = self.alg.anchor_of_section(xi)?;
        let nabla = self.nabla_section(xi)?;
        let w = nabla
            .comps
            .iter()
            .map(|c| self.alg.anchor_of_section(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(EDerivation::from_parts(rho, w))
    }
}

/// Induced representation of the free algebroid on base tensors, combined
/// over one extended connection per tensor slot. On generators this
/// coincides with the combined E-connection of the underlying bundle.
pub fn fr_representation_apply(
    extensions: &[&CartanExtension],
    xi: &FreeSection,
    t: &TensorField,
) -> Result<TensorField> {
    if t.tensor_type().slots() != extensions.len() {
        return Err(Error::SlotCountMismatch {
            slots: t.tensor_type().slots(),
            connections: extensions.len(),
        });
    }
    if extensions.is_empty() {
        let alg_bundle = xi.bundle().clone();
        if t.chart() != alg_bundle.chart() {
            return Err(Error::ChartMismatch);
        }
        // Zero slots: the combined derivative is ρ(ξ)(f). Build a throwaway
        // context so the anchor can be evaluated.
        let alg = FreeAlgebroid::new(&alg_bundle, xi.flavor(), xi.depth().max(1));
        let rho = alg.anchor_of_section(xi)?;
        return Ok(TensorField::from_scalar(rho.apply_to_scalar(t.as_scalar())?));
    }
    let derivs: Vec<EDerivation> = extensions
        .iter()
        .map(|e| e.e_derivation(xi))
        .collect::<Result<_>>()?;
    let refs: Vec<&EDerivation> = derivs.iter().collect();
    crate::bundle::combined_apply(&refs, t)
}

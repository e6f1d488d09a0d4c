//! Composition contexts: finite presentations of sheaf-like objects by
//! their Hom-space dimensions and associative composition tensors.
//!
//! Everything downstream (complex spaces, mutations, stability, constants)
//! factors through this data. The built-in model is the twists O(d) on
//! projective n-space, where Hom(O(d), O(e)) has the monomial basis of
//! degree e-d forms and composition is polynomial multiplication. Kernel
//! objects of surjective evaluation maps can be adjoined; their Hom tables
//! are forced by exactness together with vanishing axioms the caller
//! declares (the model never computes sheaf cohomology).

use std::collections::BTreeMap;

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::Subspace;

pub type ObjId = usize;

#[derive(Debug, Clone)]
pub struct ObjectInfo {
    pub name: String,
    pub simple: bool,
}

/// Extra structure carried by an adjoined kernel object
/// K = ker(ev: Gamma (x) Hom(Gamma, G) -> G).
#[derive(Debug, Clone)]
pub struct KernelInfo<K: Field> {
    pub gamma: ObjId,
    pub g: ObjId,
    /// The canonical inclusion K -> Gamma (x) Hom(Gamma, G), as an element
    /// of Hom(K, Gamma) (x) Hom(Gamma, G): matrix hom(K,Gamma)-dim x h-dim.
    pub inclusion: Matrix<K>,
}

#[derive(Debug, Clone)]
pub struct CompositionContext<K: Field> {
    pub field: K,
    pub objects: Vec<ObjectInfo>,
    /// hom[(x, y)] = dim Hom(X, Y); absent means "not declared" and is an
    /// error to use, while a declared 0 is an honest vanishing.
    hom: BTreeMap<(ObjId, ObjId), usize>,
    /// comp[(x, y, z)]: Hom(X,Y) (x) Hom(Y,Z) -> Hom(X,Z).
    comp: BTreeMap<(ObjId, ObjId, ObjId), Bilinear<K>>,
    pub kernels: BTreeMap<ObjId, KernelInfo<K>>,
}

impl<K: Field> CompositionContext<K> {
    pub fn new(field: K) -> Self {
        CompositionContext {
            field,
            objects: Vec::new(),
            hom: BTreeMap::new(),
            comp: BTreeMap::new(),
            kernels: BTreeMap::new(),
        }
    }

    pub fn add_object(&mut self, name: impl Into<String>, simple: bool) -> ObjId {
        self.objects.push(ObjectInfo {
            name: name.into(),
            simple,
        });
        self.objects.len() - 1
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn object_name(&self, id: ObjId) -> &str {
        &self.objects[id].name
    }

    pub fn set_hom(&mut self, x: ObjId, y: ObjId, dim: usize) {
        self.hom.insert((x, y), dim);
    }

    pub fn hom_dim(&self, x: ObjId, y: ObjId) -> Result<usize> {
        self.hom.get(&(x, y)).copied().ok_or_else(|| {
            Error::MissingHom(format!(
                "Hom({}, {}) not declared",
                self.object_name(x),
                self.object_name(y)
            ))
        })
    }

    pub fn set_comp(&mut self, x: ObjId, y: ObjId, z: ObjId, t: Bilinear<K>) {
        self.comp.insert((x, y, z), t);
    }

    /// The composition tensor Hom(X,Y) (x) Hom(Y,Z) -> Hom(X,Z). Triples
    /// with a zero Hom space anywhere are implicitly zero.
    pub fn comp(&self, x: ObjId, y: ObjId, z: ObjId) -> Result<Bilinear<K>> {
        if let Some(t) = self.comp.get(&(x, y, z)) {
            return Ok(t.clone());
        }
        let a = self.hom_dim(x, y)?;
        let b = self.hom_dim(y, z)?;
        let c = self.hom_dim(x, z)?;
        if a == 0 || b == 0 {
            return Ok(Bilinear::zero(self.field.clone(), a, b, c));
        }
        Err(Error::MissingHom(format!(
            "composition Hom({0},{1}) (x) Hom({1},{2}) -> Hom({0},{2}) not declared",
            self.object_name(x),
            self.object_name(y),
            self.object_name(z)
        )))
    }

    pub fn has_comp(&self, x: ObjId, y: ObjId, z: ObjId) -> bool {
        self.comp.contains_key(&(x, y, z))
            || self
                .hom_dim(x, y)
                .and_then(|a| self.hom_dim(y, z).map(|b| a == 0 || b == 0))
                .unwrap_or(false)
    }

    /// Compose concrete elements f in Hom(X,Y), g in Hom(Y,Z).
    pub fn compose(&self, x: ObjId, y: ObjId, z: ObjId, f: &Matrix<K>, g: &Matrix<K>) -> Result<Matrix<K>> {
        self.comp(x, y, z)?.apply(f, g)
    }

    /// Associativity of all declared triples, checked exhaustively on basis
    /// elements. Returns the offending quadruple of objects on failure.
    pub fn check_associativity(&self) -> Result<()> {
        let ids: Vec<ObjId> = (0..self.objects.len()).collect();
        for &w in &ids {
            for &x in &ids {
                for &y in &ids {
                    for &z in &ids {
                        let all_declared = [(w, x), (x, y), (y, z), (w, y), (x, z), (w, z)]
                            .iter()
                            .all(|&(s, t)| self.hom.contains_key(&(s, t)));
                        if !all_declared
                            || !(self.has_comp(w, x, y)
                                && self.has_comp(w, y, z)
                                && self.has_comp(x, y, z)
                                && self.has_comp(w, x, z))
                        {
                            continue;
                        }
                        self.check_associativity_quad(w, x, y, z)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity_quad(&self, w: ObjId, x: ObjId, y: ObjId, z: ObjId) -> Result<()> {
        let f = &self.field;
        let ab = self.comp(w, x, y)?;
        let bc = self.comp(x, y, z)?;
        let a_then = self.comp(w, y, z)?;
        let then_c = self.comp(w, x, z)?;
        let (da, db, dc) = (
            self.hom_dim(w, x)?,
            self.hom_dim(x, y)?,
            self.hom_dim(y, z)?,
        );
        for i in 0..da {
            let mut ei = Matrix::zero(f.clone(), da, 1);
            ei.set(i, 0, f.one());
            for j in 0..db {
                let mut ej = Matrix::zero(f.clone(), db, 1);
                ej.set(j, 0, f.one());
                let fg = ab.apply(&ei, &ej)?;
                for k in 0..dc {
                    let mut ek = Matrix::zero(f.clone(), dc, 1);
                    ek.set(k, 0, f.one());
                    let gh = bc.apply(&ej, &ek)?;
                    let left = a_then.apply(&fg, &ek)?;
                    let right = then_c.apply(&ei, &gh)?;
                    if left != right {
                        return Err(Error::Hypothesis(format!(
                            "associativity fails on ({}, {}, {}, {}) at basis ({i}, {j}, {k})",
                            self.object_name(w),
                            self.object_name(x),
                            self.object_name(y),
                            self.object_name(z)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Full validation report: associativity, simplicity flags, and any
    /// declared vanishings inconsistent with the tables.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if let Err(e) = self.check_associativity() {
            violations.push(e.to_string());
        }
        for (id, obj) in self.objects.iter().enumerate() {
            if obj.simple {
                match self.hom_dim(id, id) {
                    Ok(1) => {}
                    Ok(d) => violations.push(format!(
                        "object {} flagged simple but dim Hom = {d}",
                        obj.name
                    )),
                    Err(e) => violations.push(e.to_string()),
                }
            }
        }
        ValidationReport { violations }
    }

    /// Hom-level surjectivity of the composition pairing
    /// Hom(X, Y) (x) Hom(Y, Z) -> Hom(X, Z).
    pub fn pairing_surjective(&self, x: ObjId, y: ObjId, z: ObjId) -> Result<bool> {
        let t = self.comp(x, y, z)?;
        Ok(t.matrix.rank() == t.out_dim)
    }

    /// Adjoin the kernel object of ev: Gamma (x) Hom(Gamma, G) -> G.
    ///
    /// `covariant_for` lists the objects X for which Hom(X, K) tables are
    /// derived (requires the pairing Hom(X,Gamma) (x) Hom(Gamma,G) -> Hom(X,G)
    /// surjective, which is checked). `contravariant_for` lists the objects Y
    /// for which Hom(K, Y) is derived; for those the caller asserts the
    /// vanishing Ext^1(G, Y) = 0 as an axiom of the model.
    pub fn kernel_object(
        &mut self,
        gamma: ObjId,
        g: ObjId,
        name: impl Into<String>,
        covariant_for: &[ObjId],
        contravariant_for: &[ObjId],
    ) -> Result<ObjId> {
        let name = name.into();
        let f = self.field.clone();
        let h = self.hom_dim(gamma, g)?;
        if h == 0 {
            return Err(Error::hypothesis(format!(
                "Hom({}, {}) = 0, evaluation cannot be surjective",
                self.object_name(gamma),
                self.object_name(g)
            )));
        }

        let k_id = self.add_object(name.clone(), true);

        // Hom(X, K) = ker( Hom(X, Gamma) (x) H -> Hom(X, G) ), by left
        // exactness of Hom(X, -). Stored: dimension plus an embedding basis.
        let mut embeddings: BTreeMap<ObjId, Subspace<K>> = BTreeMap::new();
        let mut xs: Vec<ObjId> = covariant_for.to_vec();
        if !xs.contains(&gamma) {
            xs.push(gamma);
        }
        for &x in &xs {
            if x == k_id {
                continue;
            }
            let pair = self.comp(x, gamma, g)?; // Hom(X,Gamma) (x) H -> Hom(X,G)
            if pair.matrix.rank() != pair.out_dim {
                return Err(Error::hypothesis(format!(
                    "pairing Hom({x_name},{g_name}) (x) Hom({g_name},{t_name}) -> Hom({x_name},{t_name}) is not surjective",
                    x_name = self.object_name(x),
                    g_name = self.object_name(gamma),
                    t_name = self.object_name(g),
                )));
            }
            let ker = pair.matrix.kernel_basis_rows();
            let sub = Subspace {
                ambient_dim: pair.a_dim * pair.b_dim,
                basis: ker,
            };
            self.set_hom(x, k_id, sub.dim());
            embeddings.insert(x, sub);
        }

        // Hom(K, Y) = coker( Hom(G, Y) -> Hom(Gamma, Y) (x) H^* ), using the
        // declared Ext^1(G, Y) = 0. The middle map sends u to u . ev, i.e.
        // (pairing with the H-slot transposed).
        let mut quotients: BTreeMap<ObjId, crate::bilinear::Quotient<K>> = BTreeMap::new();
        let mut ys: Vec<ObjId> = contravariant_for.to_vec();
        if !ys.contains(&gamma) {
            ys.push(gamma);
        }
        for &y in &ys {
            if y == k_id {
                continue;
            }
            let d_gy = self.hom_dim(g, y)?;
            let d_gammay = self.hom_dim(gamma, y)?;
            // delta: Hom(G, Y) -> Hom(Gamma, Y) (x) H^*,
            // u |-> [ (v, e_h) -> comp(e_h (x) u) paired against v ].
            // Coordinates: out index (v_idx, h_idx) row-major.
            let comp_gamma_g_y = self.comp(gamma, g, y)?;
            let mut delta = Matrix::zero(f.clone(), d_gammay * h, d_gy);
            for u in 0..d_gy {
                let mut eu = Matrix::zero(f.clone(), d_gy, 1);
                eu.set(u, 0, f.one());
                for hh in 0..h {
                    let mut eh = Matrix::zero(f.clone(), h, 1);
                    eh.set(hh, 0, f.one());
                    let w = comp_gamma_g_y.apply(&eh, &eu)?; // in Hom(Gamma, Y)
                    for v in 0..d_gammay {
                        delta.set(v * h + hh, u, w.get(v, 0).clone());
                    }
                }
            }
            let image = Subspace::from_span(delta.transpose());
            let quo = crate::bilinear::Quotient::new(image);
            self.set_hom(k_id, y, quo.dim());
            quotients.insert(y, quo);
        }

        // The canonical inclusion element of Hom(K, Gamma) (x) H: the class
        // of sum_h id_Gamma (x) e_h^* (x) e_h.
        let d_gg = self.hom_dim(gamma, gamma)?;
        if d_gg != 1 {
            return Err(Error::hypothesis(format!(
                "{} must be simple to adjoin a kernel object",
                self.object_name(gamma)
            )));
        }
        let gamma_quo = quotients
            .get(&gamma)
            .expect("gamma always in contravariant set");
        let hom_k_gamma = gamma_quo.dim();
        let mut inclusion = Matrix::zero(f.clone(), hom_k_gamma, h);
        for hh in 0..h {
            // id (x) e_hh^* lives at index (v=0, hh) of Hom(Gamma,Gamma) (x) H^*.
            let mut vec = Matrix::zero(f.clone(), d_gammay_dim(d_gg, h), 1);
            vec.set(hh, 0, f.one());
            let class = gamma_quo.projection.mul(&vec)?;
            for r in 0..hom_k_gamma {
                inclusion.set(r, hh, class.get(r, 0).clone());
            }
        }

        // Composition tensors involving K.
        // comp(X, X', K): through the ambient Hom(X', Gamma) (x) H embedding.
        let emb_list: Vec<(ObjId, Subspace<K>)> = embeddings.iter().map(|(a, b)| (*a, b.clone())).collect();
        let quo_list: Vec<(ObjId, crate::bilinear::Quotient<K>)> =
            quotients.iter().map(|(a, b)| (*a, b.clone())).collect();

        for &(xp, ref emb_xp) in &emb_list {
            // comp(X, X', K) for every X with declared Hom(X, X') and Hom(X, K).
            for &(x, ref emb_x) in &emb_list {
                let Ok(d_xxp) = self.hom_dim(x, xp) else { continue };
                if d_xxp == 0 {
                    continue;
                }
                let comp_xxpg = self.comp(x, xp, gamma)?;
                let d_xk = emb_x.dim();
                let d_xpk = emb_xp.dim();
                let mut t = Matrix::zero(f.clone(), d_xk, d_xxp * d_xpk);
                for i in 0..d_xxp {
                    let mut ei = Matrix::zero(f.clone(), d_xxp, 1);
                    ei.set(i, 0, f.one());
                    for j in 0..d_xpk {
                        // Ambient element of Hom(X', Gamma) (x) H.
                        let amb = emb_xp_row_tensor(emb_xp, j, &f);
                        // Compose the Gamma-component: Hom(X,X') (x) Hom(X',Gamma) -> Hom(X,Gamma).
                        let d_xgamma = self.hom_dim(x, gamma)?;
                        let mut out_amb = Matrix::zero(f.clone(), d_xgamma * h, 1);
                        let d_xpgamma = self.hom_dim(xp, gamma)?;
                        for hh in 0..h {
                            let slice = Matrix::from_fn(f.clone(), d_xpgamma, 1, |r, _| {
                                amb.get(r * h + hh, 0).clone()
                            });
                            let composed = comp_xxpg.apply(&ei, &slice)?;
                            for r in 0..d_xgamma {
                                out_amb.set(r * h + hh, 0, composed.get(r, 0).clone());
                            }
                        }
                        let coeffs = emb_x.coefficients_of(&out_amb).ok_or_else(|| {
                            Error::Hypothesis(format!(
                                "composite of Hom({},{}) with Hom({},{}) leaves the kernel subspace",
                                self.object_name(x),
                                self.object_name(xp),
                                self.object_name(xp),
                                name
                            ))
                        })?;
                        for r in 0..d_xk {
                            t.set(r, i * d_xpk + j, coeffs.get(r, 0).clone());
                        }
                    }
                }
                self.set_comp(x, xp, k_id, Bilinear::new(d_xxp, d_xpk, d_xk, t)?);
            }

            // comp(X, K, Y): contract the embedded Hom(X,Gamma) (x) H against
            // quotient representatives of Hom(K, Y) in Hom(Gamma, Y) (x) H^*.
            let x = xp;
            let emb_x = emb_xp;
            for &(y, ref quo_y) in &quo_list {
                let d_xk = emb_x.dim();
                let d_ky = quo_y.dim();
                let d_xy = self.hom_dim(x, y)?;
                let comp_xgy = self.comp(x, gamma, y)?;
                let d_xgamma = self.hom_dim(x, gamma)?;
                let d_gammay = self.hom_dim(gamma, y)?;
                let mut t = Matrix::zero(f.clone(), d_xy, d_xk * d_ky);
                for i in 0..d_xk {
                    let amb_x = emb_xp_row_tensor(emb_x, i, &f); // Hom(X,Gamma) (x) H
                    for j in 0..d_ky {
                        let mut ej = Matrix::zero(f.clone(), d_ky, 1);
                        ej.set(j, 0, f.one());
                        let rep = quo_y.section.mul(&ej)?; // Hom(Gamma,Y) (x) H^*
                        // Contract over H: sum_h (x-part_h) o (y-part_h).
                        let mut acc = Matrix::zero(f.clone(), d_xy, 1);
                        for hh in 0..h {
                            let xa = Matrix::from_fn(f.clone(), d_xgamma, 1, |r, _| {
                                amb_x.get(r * h + hh, 0).clone()
                            });
                            let yb = Matrix::from_fn(f.clone(), d_gammay, 1, |r, _| {
                                rep.get(r * h + hh, 0).clone()
                            });
                            acc = acc.add(&comp_xgy.apply(&xa, &yb)?)?;
                        }
                        for r in 0..d_xy {
                            t.set(r, i * d_ky + j, acc.get(r, 0).clone());
                        }
                    }
                }
                self.set_comp(x, k_id, y, Bilinear::new(d_xk, d_ky, d_xy, t)?);
            }
        }

        // comp(K, Y, Z): push the quotient representative through the
        // ambient composition on the Hom(Gamma, -) side.
        for &(y, ref quo_y) in &quo_list {
            for &(z, ref quo_z) in &quo_list {
                let Ok(d_yz) = self.hom_dim(y, z) else { continue };
                if d_yz == 0 {
                    continue;
                }
                let comp_gyz = self.comp(gamma, y, z)?;
                let d_ky = quo_y.dim();
                let d_kz = quo_z.dim();
                let d_gammay = self.hom_dim(gamma, y)?;
                let d_gammaz = self.hom_dim(gamma, z)?;
                let mut t = Matrix::zero(f.clone(), d_kz, d_ky * d_yz);
                for i in 0..d_ky {
                    let mut ei = Matrix::zero(f.clone(), d_ky, 1);
                    ei.set(i, 0, f.one());
                    let rep = quo_y.section.mul(&ei)?; // Hom(Gamma,Y) (x) H^*
                    for j in 0..d_yz {
                        let mut ej = Matrix::zero(f.clone(), d_yz, 1);
                        ej.set(j, 0, f.one());
                        let mut amb = Matrix::zero(f.clone(), d_gammaz * h, 1);
                        for hh in 0..h {
                            let ya = Matrix::from_fn(f.clone(), d_gammay, 1, |r, _| {
                                rep.get(r * h + hh, 0).clone()
                            });
                            let composed = comp_gyz.apply(&ya, &ej)?;
                            for r in 0..d_gammaz {
                                amb.set(r * h + hh, 0, composed.get(r, 0).clone());
                            }
                        }
                        let class = quo_z.projection.mul(&amb)?;
                        for r in 0..d_kz {
                            t.set(r, i * d_yz + j, class.get(r, 0).clone());
                        }
                    }
                }
                self.set_comp(k_id, y, z, Bilinear::new(d_ky, d_yz, d_kz, t)?);
            }
        }

        // The vanishing hypotheses force kernel objects to be simple; this
        // is an axiom of the model, not a computation.
        self.set_hom(k_id, k_id, 1);
        self.kernels.insert(
            k_id,
            KernelInfo {
                gamma,
                g,
                inclusion,
            },
        );
        self.check_associativity()?;
        Ok(k_id)
    }

    /// The opposite context: same objects starred, Hom(X*, Y*) = Hom(Y, X),
    /// compositions transposed. Realizes dualization of chains of locally
    /// free sheaves at the Hom-table level.
    pub fn dual(&self) -> CompositionContext<K> {
        let mut out = CompositionContext::new(self.field.clone());
        for o in &self.objects {
            out.add_object(format!("{}*", o.name), o.simple);
        }
        for (&(x, y), &d) in &self.hom {
            out.set_hom(y, x, d);
        }
        for (&(x, y, z), t) in &self.comp {
            // comp*(Z*, Y*, X*): Hom(Z*,Y*) (x) Hom(Y*,X*) = Hom(Y,Z) (x) Hom(X,Y) -> Hom(X,Z).
            out.set_comp(z, y, x, t.flip());
        }
        out
    }
}

fn d_gammay_dim(d_gg: usize, h: usize) -> usize {
    d_gg * h
}

fn emb_xp_row_tensor<K: Field>(emb: &Subspace<K>, row: usize, f: &K) -> Matrix<K> {
    Matrix::from_fn(f.clone(), emb.ambient_dim, 1, |r, _| emb.basis.get(row, r).clone())
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Monomials of fixed degree in n+1 variables, graded-lex ordered.
pub fn monomials(n_vars: usize, degree: usize) -> Vec<Vec<usize>> {
    fn rec(vars_left: usize, deg_left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if vars_left == 1 {
            let mut m = prefix.clone();
            m.push(deg_left);
            out.push(m);
            return;
        }
        for d in (0..=deg_left).rev() {
            prefix.push(d);
            rec(vars_left - 1, deg_left - d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n_vars, degree, &mut Vec::new(), &mut out);
    out
}

/// The twist model on projective n-space: objects O(d) for each requested
/// twist, Hom(O(d), O(e)) = degree (e-d) forms with the monomial basis,
/// composition = polynomial multiplication.
pub fn projective_context<K: Field>(field: K, n: usize, twists: &[i64]) -> Result<CompositionContext<K>> {
    if n < 1 {
        return Err(Error::invalid("projective space dimension must be >= 1"));
    }
    let mut sorted = twists.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut ctx = CompositionContext::new(field.clone());
    let ids: Vec<ObjId> = sorted
        .iter()
        .map(|d| ctx.add_object(format!("O({d})"), true))
        .collect();

    let mono_count = |deg: i64| -> usize {
        if deg < 0 {
            0
        } else {
            monomials(n + 1, deg as usize).len()
        }
    };

    for (i, &d) in sorted.iter().enumerate() {
        for (j, &e) in sorted.iter().enumerate() {
            ctx.set_hom(ids[i], ids[j], mono_count(e - d));
        }
    }

    for (i, &d) in sorted.iter().enumerate() {
        for (j, &e) in sorted.iter().enumerate() {
            for (k, &g) in sorted.iter().enumerate() {
                let (d1, d2) = (e - d, g - e);
                if d1 < 0 || d2 < 0 {
                    continue; // a zero Hom space, composition implicitly zero
                }
                let m1 = monomials(n + 1, d1 as usize);
                let m2 = monomials(n + 1, d2 as usize);
                let m3 = monomials(n + 1, (d1 + d2) as usize);
                let index: BTreeMap<Vec<usize>, usize> =
                    m3.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
                let mut t = Matrix::zero(field.clone(), m3.len(), m1.len() * m2.len());
                for (a, ma) in m1.iter().enumerate() {
                    for (b, mb) in m2.iter().enumerate() {
                        let prod: Vec<usize> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                        let row = index[&prod];
                        t.set(row, a * m2.len() + b, field.one());
                    }
                }
                ctx.set_comp(
                    ids[i],
                    ids[j],
                    ids[k],
                    Bilinear::new(m1.len(), m2.len(), m3.len(), t)?,
                );
            }
        }
    }
    Ok(ctx)
}

/// Dimension statistics of a morphism setting, read off a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextStats {
    /// dim Hom(E1, E2) (or Hom(F1, F2) in the three-term setting).
    pub a: usize,
    /// dim Hom(E1, H1) for the adjoined kernel object H1.
    pub b: Option<usize>,
    /// dim Hom(E1, F1).
    pub h11: usize,
    /// dim Hom(E2, F1).
    pub h12: usize,
}

impl ContextStats {
    /// a' = a*h12 - h11.
    pub fn a_prime(&self) -> i64 {
        self.a as i64 * self.h12 as i64 - self.h11 as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 1).len(), 3);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 2).len(), 10);
    }

    #[test]
    fn projective_hom_dims() {
        let ctx = projective_context(Rationals, 2, &[-2, -1, 0, 1]).unwrap();
        let om2 = ctx.object_id("O(-2)").unwrap();
        let om1 = ctx.object_id("O(-1)").unwrap();
        let o0 = ctx.object_id("O(0)").unwrap();
        assert_eq!(ctx.hom_dim(om2, om1).unwrap(), 3);
        assert_eq!(ctx.hom_dim(om2, o0).unwrap(), 6);
        assert_eq!(ctx.hom_dim(om1, om1).unwrap(), 1);
        assert_eq!(ctx.hom_dim(o0, om1).unwrap(), 0);
        assert!(ctx.validate().ok());
    }

    #[test]
    fn broken_associativity_is_caught() {
        let q = Rationals;
        let mut ctx = CompositionContext::new(q);
        let a = ctx.add_object("A", true);
        let b = ctx.add_object("B", true);
        let c = ctx.add_object("C", true);
        for &(x, y, d) in &[
            (a, a, 1),
            (b, b, 1),
            (c, c, 1),
            (a, b, 1),
            (b, c, 1),
            (a, c, 1),
            (b, a, 0),
            (c, a, 0),
            (c, b, 0),
        ] {
            ctx.set_hom(x, y, d);
        }
        let one = |_: usize| Bilinear::new(1, 1, 1, Matrix::from_i64(q, 1, 1, &[1])).unwrap();
        let two = Bilinear::new(1, 1, 1, Matrix::from_i64(q, 1, 1, &[2])).unwrap();
        // Identity compositions.
        for &x in &[a, b, c] {
            ctx.set_comp(x, x, x, one(0));
        }
        // comp(a,a,b) = 2 with identity comp(a,a,a) breaks the quadruple
        // (a,a,a,b): 1*2 on one side, 2*2 on the other.
        ctx.set_comp(a, a, b, two);
        ctx.set_comp(a, b, b, one(0));
        ctx.set_comp(b, b, c, one(0));
        ctx.set_comp(b, c, c, one(0));
        ctx.set_comp(a, a, c, one(0));
        ctx.set_comp(a, c, c, one(0));
        ctx.set_comp(a, b, c, one(0));
        let report = ctx.validate();
        assert!(!report.ok());
        assert!(report.violations[0].contains("associativity"));
    }

    #[test]
    fn kernel_object_on_p2() {
        // H1 = ker(O(-1) (x) Hom(O(-1), O) -> O) on P^2;
        // dim Hom(O(-2), H1) = 3*3 - 6 = 3.
        let mut ctx = projective_context(Rationals, 2, &[-2, -1, 0, 1]).unwrap();
        let om2 = ctx.object_id("O(-2)").unwrap();
        let om1 = ctx.object_id("O(-1)").unwrap();
        let o0 = ctx.object_id("O(0)").unwrap();
        let o1 = ctx.object_id("O(1)").unwrap();
        let h1 = ctx
            .kernel_object(om1, o0, "H1", &[om2], &[om1, o0, o1])
            .unwrap();
        assert_eq!(ctx.hom_dim(om2, h1).unwrap(), 3);
        // Hom(H1, O(-1)): coker(Hom(O, O(-1)) -> Hom(O(-1), O(-1)) (x) H^*) = H^*.
        assert_eq!(ctx.hom_dim(h1, om1).unwrap(), 3);
        assert!(ctx.validate().ok());
    }

    #[test]
    fn kernel_object_hom_dims_on_pn() {
        // b = dim Hom(O(-2), H1) = n(n+1)/2, cross-checked against the
        // binomial bookkeeping (n+1)^2 - (n+1)(n+2)/2.
        for n in 2..=4usize {
            let mut ctx = projective_context(Rationals, n, &[-2, -1, 0]).unwrap();
            let om2 = ctx.object_id("O(-2)").unwrap();
            let om1 = ctx.object_id("O(-1)").unwrap();
            let o0 = ctx.object_id("O(0)").unwrap();
            let h1 = ctx.kernel_object(om1, o0, "H1", &[om2], &[om1, o0]).unwrap();
            assert_eq!(ctx.hom_dim(om2, h1).unwrap(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn kernel_object_over_prime_field() {
        let f5 = PrimeField::new(5).unwrap();
        let mut ctx = projective_context(f5, 2, &[-2, -1, 0, 1]).unwrap();
        let om2 = ctx.object_id("O(-2)").unwrap();
        let om1 = ctx.object_id("O(-1)").unwrap();
        let o0 = ctx.object_id("O(0)").unwrap();
        let h1 = ctx.kernel_object(om1, o0, "H1", &[om2], &[om1, o0]).unwrap();
        assert_eq!(ctx.hom_dim(om2, h1).unwrap(), 3);
        assert!(ctx.validate().ok());
    }

    #[test]
    fn dual_context_swaps_homs() {
        let ctx = projective_context(Rationals, 1, &[-2, -1, 0]).unwrap();
        let dual = ctx.dual();
        let om2s = dual.object_id("O(-2)*").unwrap();
        let o0s = dual.object_id("O(0)*").unwrap();
        // Hom(O(0)*, O(-2)*) = Hom(O(-2), O(0)) = degree-2 forms on P^1.
        assert_eq!(dual.hom_dim(o0s, om2s).unwrap(), 3);
        assert_eq!(dual.hom_dim(om2s, o0s).unwrap(), 0);
        assert!(dual.validate().ok());
    }

    #[test]
    fn p1_kernel_object_is_twist_like() {
        // On P^1, ker(O(-1) (x) Hom(O(-1),O) -> O) behaves like O(-2):
        // Hom(O(-2), K) is 1-dimensional.
        let mut ctx = projective_context(Rationals, 1, &[-2, -1, 0, 1]).unwrap();
        let om2 = ctx.object_id("O(-2)").unwrap();
        let om1 = ctx.object_id("O(-1)").unwrap();
        let o0 = ctx.object_id("O(0)").unwrap();
        let o1 = ctx.object_id("O(1)").unwrap();
        let k = ctx
            .kernel_object(om1, o0, "K", &[om2], &[om1, o0, o1])
            .unwrap();
        assert_eq!(ctx.hom_dim(om2, k).unwrap(), 1);
        assert_eq!(ctx.hom_dim(k, o0).unwrap(), 3); // like Hom(O(-2), O)
        assert!(ctx.validate().ok());
    }
}

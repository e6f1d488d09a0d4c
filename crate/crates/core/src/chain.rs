//! Chains of graded terms over a composition context: the varieties of
//! complexes E_0 -> E_1 -> ... -> E_p with E_i a direct sum of simple
//! objects tensored by multiplicity spaces, together with the triangular
//! automorphism groups acting on them.
//!
//! A chain point stores one Hom-tensor block per (source summand, target
//! summand) pair; the chain condition is the vanishing of all two-step
//! composites, evaluated through the context's composition tensors.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::context::{CompositionContext, ContextStats, ObjId};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::spaces::{advance, pow_count};

pub const MAX_LEVELS: usize = 9; // p <= 8
pub const MAX_TOTAL_MULT: usize = 64;

/// One graded term: an ordered list of (object, multiplicity dimension).
pub type LevelShape = Vec<(ObjId, usize)>;

#[derive(Debug, Clone)]
pub struct ChainSpace<K: Field> {
    pub ctx: Arc<CompositionContext<K>>,
    pub levels: Vec<LevelShape>,
}

/// Map from level i to level i+1: blocks[src_j][tgt_k] is the matrix of the
/// block X_j (x) M_j -> Y_k (x) N_k, with column index the M_j basis and row
/// index h * n_k + t over the Hom(X_j, Y_k) basis h and the N_k basis t.
pub type BlockMap<K> = Vec<Vec<Matrix<K>>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPoint<K: Field> {
    pub maps: Vec<BlockMap<K>>,
}

impl<K: Field> ChainSpace<K> {
    pub fn new(ctx: Arc<CompositionContext<K>>, levels: Vec<LevelShape>) -> Result<Self> {
        if levels.len() < 2 || levels.len() > MAX_LEVELS {
            return Err(Error::invalid(format!(
                "chain must have between 2 and {MAX_LEVELS} levels, got {}",
                levels.len()
            )));
        }
        let total: usize = levels.iter().flatten().map(|&(_, m)| m).sum();
        if total > MAX_TOTAL_MULT {
            return Err(Error::invalid(format!(
                "total multiplicity {total} exceeds {MAX_TOTAL_MULT}"
            )));
        }
        for level in &levels {
            for &(_, m) in level {
                if m == 0 {
                    return Err(Error::invalid("multiplicity spaces must be nonzero"));
                }
            }
        }
        let space = ChainSpace { ctx, levels };
        space.check_ordering()?;
        Ok(space)
    }

    /// The grading hypotheses: Hom(X, Y) = 0 whenever X sits at a strictly
    /// later level than Y, or later in the same level.
    fn check_ordering(&self) -> Result<()> {
        for (i, level) in self.levels.iter().enumerate() {
            for (j, &(x, _)) in level.iter().enumerate() {
                // Same level, earlier factor.
                for &(y, _) in &level[..j] {
                    if self.ctx.hom_dim(x, y)? != 0 {
                        return Err(Error::hypothesis(format!(
                            "Hom({}, {}) must vanish (same level ordering)",
                            self.ctx.object_name(x),
                            self.ctx.object_name(y)
                        )));
                    }
                }
                for earlier in &self.levels[..i] {
                    for &(y, _) in earlier {
                        if self.ctx.hom_dim(x, y)? != 0 {
                            return Err(Error::hypothesis(format!(
                                "Hom({}, {}) must vanish (level ordering)",
                                self.ctx.object_name(x),
                                self.ctx.object_name(y)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn junctions(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn zero_map(&self, i: usize) -> BlockMap<K> {
        let f = self.ctx.field.clone();
        self.levels[i]
            .iter()
            .map(|&(x, mx)| {
                self.levels[i + 1]
                    .iter()
                    .map(|&(y, ny)| {
                        let h = self.ctx.hom_dim(x, y).unwrap_or(0);
                        Matrix::zero(f.clone(), h * ny, mx)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn zero_point(&self) -> ChainPoint<K> {
        ChainPoint {
            maps: (0..self.junctions()).map(|i| self.zero_map(i)).collect(),
        }
    }

    pub fn check_shapes(&self, pt: &ChainPoint<K>) -> Result<()> {
        if pt.maps.len() != self.junctions() {
            return Err(Error::shape("wrong number of junction maps"));
        }
        for (i, map) in pt.maps.iter().enumerate() {
            if map.len() != self.levels[i].len() {
                return Err(Error::shape(format!("junction {i}: source block count")));
            }
            for (j, row) in map.iter().enumerate() {
                if row.len() != self.levels[i + 1].len() {
                    return Err(Error::shape(format!("junction {i}: target block count")));
                }
                let (x, mx) = self.levels[i][j];
                for (k, block) in row.iter().enumerate() {
                    let (y, ny) = self.levels[i + 1][k];
                    let h = self.ctx.hom_dim(x, y)?;
                    if block.rows != h * ny || block.cols != mx {
                        return Err(Error::shape(format!(
                            "junction {i} block ({j}, {k}): {}x{} expected {}x{}",
                            block.rows,
                            block.cols,
                            h * ny,
                            mx
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite of block f: X (x) M -> Y (x) N with g: Y (x) N -> Z (x) P.
    fn compose_blocks(
        &self,
        x: ObjId,
        y: ObjId,
        z: ObjId,
        n: usize,
        p_mult: usize,
        f_block: &Matrix<K>,
        g_block: &Matrix<K>,
    ) -> Result<Matrix<K>> {
        compose_hom_blocks(&self.ctx, x, y, z, n, p_mult, f_block, g_block)
    }

    /// First nonzero two-step composite, as (junction, src, tgt, residual).
    pub fn chain_residual(&self, pt: &ChainPoint<K>) -> Result<Option<(usize, usize, usize, Matrix<K>)>> {
        self.check_shapes(pt)?;
        let f = self.ctx.field.clone();
        for i in 0..self.junctions().saturating_sub(1) {
            for (j, &(x, mx)) in self.levels[i].iter().enumerate() {
                for (l, &(z, pz)) in self.levels[i + 2].iter().enumerate() {
                    let hxz = self.ctx.hom_dim(x, z)?;
                    let mut acc = Matrix::zero(f.clone(), hxz * pz, mx);
                    for (k, &(y, ny)) in self.levels[i + 1].iter().enumerate() {
                        let part = self.compose_blocks(
                            x,
                            y,
                            z,
                            ny,
                            pz,
                            &pt.maps[i][j][k],
                            &pt.maps[i + 1][k][l],
                        )?;
                        acc = acc.add(&part)?;
                    }
                    if !acc.is_zero() {
                        return Ok(Some((i, j, l, acc)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_chain(&self, pt: &ChainPoint<K>) -> Result<bool> {
        Ok(self.chain_residual(pt)?.is_none())
    }

    /// Total multiplicity dimensions per factor, flattened level by level.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.levels.iter().flatten().map(|&(_, m)| m).collect()
    }

    /// Dimension of the unipotent radical: one coordinate block per strictly
    /// triangular pair within a level.
    pub fn unipotent_dim(&self) -> Result<usize> {
        let mut total = 0;
        for level in &self.levels {
            for (j, &(x, mx)) in level.iter().enumerate() {
                for &(y, my) in &level[j + 1..] {
                    total += self.ctx.hom_dim(x, y)? * mx * my;
                }
            }
        }
        Ok(total)
    }

    /// The strict coordinate slots (level, src factor, tgt factor, hom dim).
    pub fn strict_slots(&self) -> Result<Vec<StrictSlot>> {
        let mut slots = Vec::new();
        for (i, level) in self.levels.iter().enumerate() {
            for (j, &(x, mx)) in level.iter().enumerate() {
                for (k0, &(y, my)) in level[j + 1..].iter().enumerate() {
                    let k = j + 1 + k0;
                    let h = self.ctx.hom_dim(x, y)?;
                    if h * mx * my > 0 {
                        slots.push(StrictSlot {
                            level: i,
                            src: j,
                            tgt: k,
                            hom_dim: h,
                            src_mult: mx,
                            tgt_mult: my,
                        });
                    }
                }
            }
        }
        Ok(slots)
    }

    /// Enumerate all chain points over a finite field (small cases only).
    pub fn enumerate_points(&self, budget: u128) -> Result<Vec<ChainPoint<K>>> {
        let p = self
            .ctx
            .field
            .cardinality()
            .ok_or_else(|| Error::invalid("chain enumeration needs a finite field"))?;
        let mut coords = 0usize;
        for i in 0..self.junctions() {
            for &(x, mx) in &self.levels[i] {
                for &(y, ny) in &self.levels[i + 1] {
                    coords += self.ctx.hom_dim(x, y)? * ny * mx;
                }
            }
        }
        let total = pow_count(p, coords);
        if total > budget {
            return Err(Error::budget("chain point enumeration", total, budget));
        }
        let f = self.ctx.field.clone();
        let mut out = Vec::new();
        let mut digits = vec![0u64; coords];
        loop {
            let mut it = digits.iter().map(|&d| f.element_at(d));
            let mut pt = self.zero_point();
            for i in 0..self.junctions() {
                for j in 0..self.levels[i].len() {
                    for k in 0..self.levels[i + 1].len() {
                        let block = &mut pt.maps[i][j][k];
                        for r in 0..block.rows {
                            for c in 0..block.cols {
                                block.set(r, c, it.next().unwrap());
                            }
                        }
                    }
                }
            }
            if self.is_chain(&pt)? {
                out.push(pt);
            }
            if !advance(&mut digits, p) {
                break;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictSlot {
    pub level: usize,
    pub src: usize,
    pub tgt: usize,
    pub hom_dim: usize,
    pub src_mult: usize,
    pub tgt_mult: usize,
}

/// Composite of Hom-tensor blocks through the composition tensor:
/// f: X (x) M -> Y (x) N (rows h1*n, cols m), g: Y (x) N -> Z (x) P
/// (rows h2*p, cols n) gives X (x) M -> Z (x) P (rows h3*p, cols m).
pub fn compose_hom_blocks<K: Field>(
    ctx: &CompositionContext<K>,
    x: ObjId,
    y: ObjId,
    z: ObjId,
    n: usize,
    p_mult: usize,
    f_block: &Matrix<K>,
    g_block: &Matrix<K>,
) -> Result<Matrix<K>> {
    let fld = ctx.field.clone();
    let h1 = ctx.hom_dim(x, y)?;
    let h2 = ctx.hom_dim(y, z)?;
    let h3 = ctx.hom_dim(x, z)?;
    let m = f_block.cols;
    let mut out = Matrix::zero(fld.clone(), h3 * p_mult, m);
    if h1 == 0 || h2 == 0 {
        return Ok(out);
    }
    let comp = ctx.comp(x, y, z)?;
    for mm in 0..m {
        for t in 0..n {
            for a in 0..h1 {
                let fa = f_block.get(a * n + t, mm);
                if fld.is_zero(fa) {
                    continue;
                }
                for u in 0..p_mult {
                    for b in 0..h2 {
                        let gb = g_block.get(b * p_mult + u, t);
                        if fld.is_zero(gb) {
                            continue;
                        }
                        let w = fld.mul(fa, gb);
                        for c in 0..h3 {
                            let coeff = comp.matrix.get(c, a * h2 + b);
                            if fld.is_zero(coeff) {
                                continue;
                            }
                            let mut cur = out.get(c * p_mult + u, mm).clone();
                            fld.add_mul_assign(&mut cur, &w, coeff);
                            out.set(c * p_mult + u, mm, cur);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Automorphism of one graded term: invertible multiplicity maps on the
/// diagonal, Hom-tensor blocks strictly below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAut<K: Field> {
    /// diag[j]: m_j x m_j, invertible.
    pub diag: Vec<Matrix<K>>,
    /// strict[(j, k)] for j < k: block X_j (x) M_j -> X_k (x) M_k, stored
    /// like a chain block (rows hom(X_j, X_k) * m_k, cols m_j).
    pub strict: BTreeMap<(usize, usize), Matrix<K>>,
}

/// The identity automorphism of one graded term.
pub fn level_identity<K: Field>(space: &ChainSpace<K>, level: usize) -> LevelAut<K> {
    let f = space.ctx.field.clone();
    LevelAut {
        diag: space.levels[level]
            .iter()
            .map(|&(_, m)| Matrix::identity(f.clone(), m))
            .collect(),
        strict: BTreeMap::new(),
    }
}

/// Whole-chain group element: one level automorphism per graded term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGroupElement<K: Field> {
    pub auts: Vec<LevelAut<K>>,
}

impl<K: Field> ChainGroupElement<K> {
    pub fn identity(space: &ChainSpace<K>) -> Self {
        ChainGroupElement {
            auts: (0..space.levels.len())
                .map(|i| level_identity(space, i))
                .collect(),
        }
    }
}

fn strict_block<'a, K: Field>(
    aut: &'a LevelAut<K>,
    j: usize,
    k: usize,
) -> Option<&'a Matrix<K>> {
    aut.strict.get(&(j, k))
}

/// Compose two automorphisms of the same level: (a . b)(v) = a(b(v)).
pub fn compose_level_auts<K: Field>(
    space: &ChainSpace<K>,
    level: usize,
    a: &LevelAut<K>,
    b: &LevelAut<K>,
) -> Result<LevelAut<K>> {
    let shape = &space.levels[level];
    let f = space.ctx.field.clone();
    let mut diag = Vec::with_capacity(shape.len());
    for j in 0..shape.len() {
        diag.push(a.diag[j].mul(&b.diag[j])?);
    }
    let mut strict = BTreeMap::new();
    for j in 0..shape.len() {
        for k in j + 1..shape.len() {
            let (x, _mx) = shape[j];
            let (y, my) = shape[k];
            let h = space.ctx.hom_dim(x, y)?;
            if h == 0 {
                continue;
            }
            let mut acc = Matrix::zero(f.clone(), h * my, shape[j].1);
            // a_strict(k <- j) . b_diag(j)
            if let Some(s) = strict_block(a, j, k) {
                acc = acc.add(&s.mul(&b.diag[j])?)?;
            }
            // a_diag(k) . b_strict(k <- j): transform the m_k slot.
            if let Some(s) = strict_block(b, j, k) {
                let transformed = transform_tgt_mult(&f, s, &a.diag[k], h, my)?;
                acc = acc.add(&transformed)?;
            }
            // a_strict(k <- l) . b_strict(l <- j) through composition.
            for l in j + 1..k {
                let (w, mw) = shape[l];
                if let (Some(sb), Some(sa)) = (strict_block(b, j, l), strict_block(a, l, k)) {
                    let part = compose_hom_blocks(&space.ctx, x, w, y, mw, my, sb, sa)?;
                    acc = acc.add(&part)?;
                }
            }
            if !acc.is_zero() {
                strict.insert((j, k), acc);
            }
        }
    }
    Ok(LevelAut { diag, strict })
}

fn transform_tgt_mult<K: Field>(
    f: &K,
    block: &Matrix<K>,
    g: &Matrix<K>,
    h: usize,
    my: usize,
) -> Result<Matrix<K>> {
    // rows indexed (hom a, tgt t): new[(a, t'), m] = sum_t g[t', t] block[(a, t), m].
    let mut out = Matrix::zero(f.clone(), block.rows, block.cols);
    for a in 0..h {
        for tp in 0..my {
            for mcol in 0..block.cols {
                let mut acc = f.zero();
                for t in 0..my {
                    f.add_mul_assign(&mut acc, g.get(tp, t), block.get(a * my + t, mcol));
                }
                out.set(a * my + tp, mcol, acc);
            }
        }
    }
    Ok(out)
}

/// Inverse of a level automorphism (triangular, so a finite Neumann series).
pub fn invert_level_aut<K: Field>(
    space: &ChainSpace<K>,
    level: usize,
    a: &LevelAut<K>,
) -> Result<LevelAut<K>> {
    let shape = &space.levels[level];
    let f = space.ctx.field.clone();
    let d_inv = LevelAut {
        diag: a
            .diag
            .iter()
            .map(|d| d.inverse())
            .collect::<Result<Vec<_>>>()?,
        strict: BTreeMap::new(),
    };
    // a = (I + N') . D with N' = strict . D^{-1}; a^{-1} = D^{-1} . sum (-N')^s.
    let n_prime = compose_level_auts(space, level, a, &d_inv)?;
    let mut neg_n = LevelAut {
        diag: shape
            .iter()
            .map(|&(_, m)| Matrix::zero(f.clone(), m, m))
            .collect(),
        strict: n_prime
            .strict
            .iter()
            .map(|(k, v)| (*k, v.scale(&f.neg(&f.one()))))
            .collect(),
    };
    // Series I + (-N) + (-N)^2 + ...; nilpotency bounds the degree by the
    // number of factors.
    let mut series = level_identity(space, level);
    let mut power = level_identity(space, level);
    for _ in 0..shape.len().saturating_sub(1) {
        power = compose_level_auts(space, level, &neg_n, &power)?;
        for (kk, v) in &power.strict {
            let cur = series
                .strict
                .get(kk)
                .cloned()
                .unwrap_or_else(|| Matrix::zero(f.clone(), v.rows, v.cols));
            series.strict.insert(*kk, cur.add(v)?);
        }
        if power.strict.is_empty() {
            break;
        }
    }
    compose_level_auts(space, level, &d_inv, &series)
}

/// aut_tgt . f: post-compose a junction map with a target-level automorphism.
pub fn aut_then_map<K: Field>(
    space: &ChainSpace<K>,
    i: usize,
    f_map: &BlockMap<K>,
    aut_tgt: &LevelAut<K>,
) -> Result<BlockMap<K>> {
    let src_shape = &space.levels[i];
    let tgt_shape = &space.levels[i + 1];
    let fld = space.ctx.field.clone();
    let mut out = space.zero_map(i);
    for (j, &(x, _mx)) in src_shape.iter().enumerate() {
        for (l, &(z, mz)) in tgt_shape.iter().enumerate() {
            let hxz = space.ctx.hom_dim(x, z)?;
            if hxz == 0 {
                continue;
            }
            // Diagonal part: aut.diag[l] acting on the m_l slot of f(j -> l).
            let mut acc = transform_tgt_mult(&fld, &f_map[j][l], &aut_tgt.diag[l], hxz, mz)?;
            // Strict parts: aut(l <- k) . f(j -> k) for k < l.
            for k in 0..l {
                let (y, my) = tgt_shape[k];
                if let Some(s) = strict_block(aut_tgt, k, l) {
                    let part = compose_hom_blocks(&space.ctx, x, y, z, my, mz, &f_map[j][k], s)?;
                    acc = acc.add(&part)?;
                }
            }
            out[j][l] = acc;
        }
    }
    Ok(out)
}

/// f . aut_src: pre-compose a junction map with a source-level automorphism.
pub fn map_then_aut<K: Field>(
    space: &ChainSpace<K>,
    i: usize,
    f_map: &BlockMap<K>,
    aut_src: &LevelAut<K>,
) -> Result<BlockMap<K>> {
    let src_shape = &space.levels[i];
    let tgt_shape = &space.levels[i + 1];
    let fld = space.ctx.field.clone();
    let mut out = space.zero_map(i);
    for (j, &(x, _mx)) in src_shape.iter().enumerate() {
        for (l, &(z, mz)) in tgt_shape.iter().enumerate() {
            let hxz = space.ctx.hom_dim(x, z)?;
            if hxz == 0 {
                continue;
            }
            let mut acc = Matrix::zero(fld.clone(), hxz * mz, src_shape[j].1);
            // Diagonal: f(j -> l) . diag[j] (plain source transform).
            acc = acc.add(&f_map[j][l].mul(&aut_src.diag[j])?)?;
            // Strict: f(k -> l) . aut(k <- j) for j < k.
            for k in j + 1..src_shape.len() {
                let (y, my) = src_shape[k];
                if let Some(s) = strict_block(aut_src, j, k) {
                    let part = compose_hom_blocks(&space.ctx, x, y, z, my, mz, s, &f_map[k][l])?;
                    acc = acc.add(&part)?;
                }
            }
            out[j][l] = acc;
        }
    }
    Ok(out)
}

/// Left action of the chain group: f_i goes to aut_{i+1} . f_i . aut_i^{-1}.
pub fn act_chain<K: Field>(
    space: &ChainSpace<K>,
    g: &ChainGroupElement<K>,
    pt: &ChainPoint<K>,
) -> Result<ChainPoint<K>> {
    let mut maps = Vec::with_capacity(pt.maps.len());
    for i in 0..pt.maps.len() {
        let inv = invert_level_aut(space, i, &g.auts[i])?;
        let step = map_then_aut(space, i, &pt.maps[i], &inv)?;
        let step = aut_then_map(space, i, &step, &g.auts[i + 1])?;
        maps.push(step);
    }
    Ok(ChainPoint { maps })
}

/// Hom(P, -) matrix of a junction map for a probe object: the honest linear
/// map (+) Hom(P, X_j) (x) M_j -> (+) Hom(P, Y_k) (x) N_k.
pub fn probe_matrix<K: Field>(
    space: &ChainSpace<K>,
    pt: &ChainPoint<K>,
    i: usize,
    probe: ObjId,
) -> Result<Matrix<K>> {
    let fld = space.ctx.field.clone();
    let src_shape = &space.levels[i];
    let tgt_shape = &space.levels[i + 1];
    let src_dims: Vec<usize> = src_shape
        .iter()
        .map(|&(x, m)| Ok(space.ctx.hom_dim(probe, x)? * m))
        .collect::<Result<_>>()?;
    let tgt_dims: Vec<usize> = tgt_shape
        .iter()
        .map(|&(y, n)| Ok(space.ctx.hom_dim(probe, y)? * n))
        .collect::<Result<_>>()?;
    let rows: usize = tgt_dims.iter().sum();
    let cols: usize = src_dims.iter().sum();
    let mut out = Matrix::zero(fld.clone(), rows, cols);
    let mut col_off = 0;
    for (j, &(x, mx)) in src_shape.iter().enumerate() {
        let hpx = space.ctx.hom_dim(probe, x)?;
        let mut row_off = 0;
        for (k, &(y, ny)) in tgt_shape.iter().enumerate() {
            let hpy = space.ctx.hom_dim(probe, y)?;
            let hxy = space.ctx.hom_dim(x, y)?;
            if hpx > 0 && hpy > 0 && hxy > 0 {
                let comp = space.ctx.comp(probe, x, y)?;
                let block = &pt.maps[i][j][k];
                // column (a, mm) -> rows (c, t): sum_b block[(b, t), mm] comp[c, a*hxy+b].
                for a in 0..hpx {
                    for mm in 0..mx {
                        for b in 0..hxy {
                            for t in 0..ny {
                                let v = block.get(b * ny + t, mm);
                                if fld.is_zero(v) {
                                    continue;
                                }
                                for c in 0..hpy {
                                    let coeff = comp.matrix.get(c, a * hxy + b);
                                    if fld.is_zero(coeff) {
                                        continue;
                                    }
                                    let r = row_off + c * ny + t;
                                    let cc = col_off + a * mx + mm;
                                    let mut cur = out.get(r, cc).clone();
                                    fld.add_mul_assign(&mut cur, v, coeff);
                                    out.set(r, cc, cur);
                                }
                            }
                        }
                    }
                }
            }
            row_off += hpy * ny;
        }
        col_off += hpx * mx;
    }
    Ok(out)
}

/// Kernel, image and homology dimensions of the Hom(P, -) complex of a
/// chain, per junction. Entry i holds (dim ker f_i, dim im f_i); the
/// homology at the inner spot between f_{i-1} and f_i is
/// dim ker f_i - dim im f_{i-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub ker_im: Vec<(usize, usize)>,
    pub total_dims: Vec<usize>,
}

impl HomologyProfile {
    pub fn homology_at(&self, position: usize) -> usize {
        let ker = if position < self.ker_im.len() {
            self.ker_im[position].0
        } else {
            *self.total_dims.last().unwrap()
        };
        let im = if position == 0 {
            0
        } else {
            self.ker_im[position - 1].1
        };
        ker - im
    }
}

pub fn homology_profile<K: Field>(
    space: &ChainSpace<K>,
    pt: &ChainPoint<K>,
    probe: ObjId,
) -> Result<HomologyProfile> {
    let mut ker_im = Vec::new();
    let mut total_dims = Vec::new();
    for (i, level) in space.levels.iter().enumerate() {
        let mut d = 0;
        for &(x, m) in level {
            d += space.ctx.hom_dim(probe, x)? * m;
        }
        total_dims.push(d);
        if i < space.junctions() {
            let m = probe_matrix(space, pt, i, probe)?;
            let rank = m.rank();
            ker_im.push((m.cols - rank, rank));
        }
    }
    Ok(HomologyProfile { ker_im, total_dims })
}

/// The two-term morphism setting (E1 (x) M1) + (E2 (x) M2) -> F1 (x) N1.
pub struct MorphismSetting<K: Field> {
    pub space: ChainSpace<K>,
    pub e1: ObjId,
    pub e2: ObjId,
    pub f1: ObjId,
    pub stats: ContextStats,
}

pub fn morphism_setting<K: Field>(
    ctx: Arc<CompositionContext<K>>,
    e1: ObjId,
    e2: ObjId,
    f1: ObjId,
    m1: usize,
    m2: usize,
    n1: usize,
) -> Result<MorphismSetting<K>> {
    for &(x, y, what) in &[
        (e2, e1, "Hom(E2, E1)"),
        (f1, e1, "Hom(F1, E1)"),
        (f1, e2, "Hom(F1, E2)"),
    ] {
        if ctx.hom_dim(x, y)? != 0 {
            return Err(Error::hypothesis(format!("{what} must vanish")));
        }
    }
    for &x in &[e1, e2, f1] {
        if ctx.hom_dim(x, x)? != 1 {
            return Err(Error::hypothesis(format!(
                "{} must be simple",
                ctx.object_name(x)
            )));
        }
    }
    let stats = ContextStats {
        a: ctx.hom_dim(e1, e2)?,
        b: None,
        h11: ctx.hom_dim(e1, f1)?,
        h12: ctx.hom_dim(e2, f1)?,
    };
    let space = ChainSpace::new(ctx, vec![vec![(e1, m1), (e2, m2)], vec![(f1, n1)]])?;
    Ok(MorphismSetting {
        space,
        e1,
        e2,
        f1,
        stats,
    })
}

/// The three-term setting E1 (x) L1 -> (F1 (x) M1) + (F2 (x) M2) -> G1 (x) N1.
pub struct ComplexSetting<K: Field> {
    pub space: ChainSpace<K>,
    pub e1: ObjId,
    pub f1: ObjId,
    pub f2: ObjId,
    pub g1: ObjId,
    /// a = dim Hom(F1, F2).
    pub a: usize,
    /// b = dim Hom(E1, H1) when the kernel object H1 is present.
    pub b: Option<usize>,
}

pub fn complex_setting<K: Field>(
    ctx: Arc<CompositionContext<K>>,
    e1: ObjId,
    f1: ObjId,
    f2: ObjId,
    g1: ObjId,
    l1: usize,
    m1: usize,
    m2: usize,
    n1: usize,
) -> Result<ComplexSetting<K>> {
    for &(x, y, what) in &[(f2, f1, "Hom(F2, F1)"), (f1, e1, "Hom(F1, E1)")] {
        if ctx.hom_dim(x, y)? != 0 {
            return Err(Error::hypothesis(format!("{what} must vanish")));
        }
    }
    let a = ctx.hom_dim(f1, f2)?;
    let b = ctx
        .kernels
        .iter()
        .find(|(_, info)| info.gamma == f1 && info.g == f2)
        .map(|(&h1, _)| ctx.hom_dim(e1, h1))
        .transpose()?;
    let space = ChainSpace::new(
        ctx,
        vec![
            vec![(e1, l1)],
            vec![(f1, m1), (f2, m2)],
            vec![(g1, n1)],
        ],
    )?;
    Ok(ComplexSetting {
        space,
        e1,
        f1,
        f2,
        g1,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::projective_context;
    use crate::field::Rationals;

    fn p2_ctx() -> Arc<CompositionContext<Rationals>> {
        Arc::new(projective_context(Rationals, 2, &[-2, -1, 0, 1]).unwrap())
    }

    /// The explicit stable complex on P^2 used by the worked example:
    /// left map (z1, z2, z3), right map (z3^2, -z2 z3, z2^2 - z1 z3, z1).
    pub(crate) fn p2_example_point(
        ctx: &Arc<CompositionContext<Rationals>>,
        space: &ChainSpace<Rationals>,
    ) -> ChainPoint<Rationals> {
        let q = Rationals;
        let mut pt = space.zero_point();
        // Monomial bases: degree 1 in (x0, x1, x2) is graded-lex:
        // [100, 010, 001] = [z1, z2, z3].
        // Degree 2: [200, 110, 101, 020, 011, 002]
        //         = [z1^2, z1z2, z1z3, z2^2, z2z3, z3^2].
        // Junction 0, block (E1 -> F1 (x) M1): rows h*m1 with h = 3, m1 = 3;
        // column the 1-dim L1. Entry (h_idx * 3 + t): monomial h into slot t.
        let f1_block = &mut pt.maps[0][0][0];
        for t in 0..3 {
            // z_{t+1} in slot t.
            f1_block.set(t * 3 + t, 0, q.from_i64(1));
        }
        // Junction 0, block (E1 -> F2): q0 = 0. Nothing to set.
        // Junction 1, block (F1 (x) M1 -> G1): rows h * n1 (h = 6, n1 = 1),
        // cols m1 = 3: columns are (q1, q2, q3) = (z3^2, -z2z3, z2^2 - z1z3, z1).
        let g1_block = &mut pt.maps[1][0][0];
        g1_block.set(5, 0, q.from_i64(1)); // q1 = z3^2
        g1_block.set(4, 1, q.from_i64(-1)); // q2 = -z2 z3
        g1_block.set(3, 2, q.from_i64(1)); // q3 = z2^2 ...
        g1_block.set(2, 2, q.from_i64(-1)); // ... - z1 z3
        // Junction 1, block (F2 -> G1): z0 = z1.
        let z0_block = &mut pt.maps[1][1][0];
        z0_block.set(0, 0, q.from_i64(1));
        pt
    }

    #[test]
    fn p2_syzygy_point_is_a_chain() {
        let ctx = p2_ctx();
        let e1 = ctx.object_id("O(-2)").unwrap();
        let f1 = ctx.object_id("O(-1)").unwrap();
        let f2 = ctx.object_id("O(0)").unwrap();
        let g1 = ctx.object_id("O(1)").unwrap();
        let setting = complex_setting(ctx.clone(), e1, f1, f2, g1, 1, 3, 1, 1).unwrap();
        assert_eq!(setting.a, 3);
        let pt = p2_example_point(&ctx, &setting.space);
        assert!(setting.space.is_chain(&pt).unwrap());
    }

    #[test]
    fn broken_syzygy_rejected() {
        let ctx = p2_ctx();
        let e1 = ctx.object_id("O(-2)").unwrap();
        let f1 = ctx.object_id("O(-1)").unwrap();
        let f2 = ctx.object_id("O(0)").unwrap();
        let g1 = ctx.object_id("O(1)").unwrap();
        let setting = complex_setting(ctx.clone(), e1, f1, f2, g1, 1, 3, 1, 1).unwrap();
        // q0 = 1, z0 = 1, everything else zero: residual = q0 z0 = 1.
        let q = Rationals;
        let mut pt = setting.space.zero_point();
        pt.maps[0][0][1].set(0, 0, q.from_i64(1));
        pt.maps[1][1][0].set(0, 0, q.from_i64(1));
        let res = setting.space.chain_residual(&pt).unwrap();
        let (i, j, l, r) = res.expect("must fail the chain condition");
        assert_eq!((i, j, l), (0, 0, 0));
        assert!(!r.is_zero());
    }

    #[test]
    fn single_morphism_chain_condition_vacuous() {
        let ctx = p2_ctx();
        let e1 = ctx.object_id("O(-2)").unwrap();
        let e2 = ctx.object_id("O(-1)").unwrap();
        let f1 = ctx.object_id("O(0)").unwrap();
        let setting = morphism_setting(ctx.clone(), e1, e2, f1, 1, 1, 4).unwrap();
        assert_eq!(setting.stats.a, 3);
        assert_eq!(setting.stats.h11, 6);
        assert_eq!(setting.stats.h12, 3);
        assert_eq!(setting.stats.a_prime(), 3);
        let pt = setting.space.zero_point();
        assert!(setting.space.is_chain(&pt).unwrap());
    }

    #[test]
    fn unipotent_dims() {
        let ctx = p2_ctx();
        let e1 = ctx.object_id("O(-2)").unwrap();
        let f1 = ctx.object_id("O(-1)").unwrap();
        let f2 = ctx.object_id("O(0)").unwrap();
        let g1 = ctx.object_id("O(1)").unwrap();
        let setting = complex_setting(ctx.clone(), e1, f1, f2, g1, 1, 3, 1, 1).unwrap();
        // Hom(F1, F2) (x) M1* (x) M2 has dimension 3 * 3 * 1.
        assert_eq!(setting.space.unipotent_dim().unwrap(), 9);
    }

    #[test]
    fn chain_action_preserves_chain_condition() {
        use rand::{Rng, SeedableRng};
        let ctx = p2_ctx();
        let e1 = ctx.object_id("O(-2)").unwrap();
        let f1 = ctx.object_id("O(-1)").unwrap();
        let f2 = ctx.object_id("O(0)").unwrap();
        let g1 = ctx.object_id("O(1)").unwrap();
        let setting = complex_setting(ctx.clone(), e1, f1, f2, g1, 1, 3, 1, 1).unwrap();
        let pt = p2_example_point(&ctx, &setting.space);
        let q = Rationals;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let mut g = ChainGroupElement::identity(&setting.space);
            // Random diagonal and a random strict coordinate at level 1.
            g.auts[1].diag[0] = crate::spaces::random_invertible(&q, 3, &mut rng);
            let phi = Matrix::from_fn(q, 3 * 1, 3, |_, _| q.from_i64(rng.gen_range(-2..3)));
            g.auts[1].strict.insert((0, 1), phi);
            let moved = act_chain(&setting.space, &g, &pt).unwrap();
            assert!(setting.space.is_chain(&moved).unwrap());
        }
    }

    #[test]
    fn homology_profile_shapes() {
        let ctx = p2_ctx();
        let e1 = ctx.object_id("O(-2)").unwrap();
        let f1 = ctx.object_id("O(-1)").unwrap();
        let f2 = ctx.object_id("O(0)").unwrap();
        let g1 = ctx.object_id("O(1)").unwrap();
        let setting = complex_setting(ctx.clone(), e1, f1, f2, g1, 1, 3, 1, 1).unwrap();
        let pt = p2_example_point(&ctx, &setting.space);
        let prof = homology_profile(&setting.space, &pt, e1).unwrap();
        // Hom(O(-2), -)-dims of the three terms: 1, 3*3 + 1*6 = 15, 10.
        assert_eq!(prof.total_dims, vec![1, 15, 10]);
    }
}

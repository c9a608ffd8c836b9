//! The space K(chi): cosets of W/W(chi) with the tau-derived symmetric
//! bilinear form, the involutions beta and sigma, the radical, and the
//! induction map from Levi subsystem contexts.

use crate::linalg::{FieldMatrix, RowReducer};
use crate::poly::IntPoly;
use crate::ratfun::RationalFunction;
use crate::rootsys::{vec_display, Rat, RootSystem, Subsystem, WeylGroup};
use num_bigint::BigInt;
use num_traits::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EMode {
    Lusztig,
    One,
}

#[derive(Debug, Error)]
pub enum KSpaceError {
    #[error("root set is not the nilradical of a parabolic")]
    NotParabolic,
    #[error("induced cosets are inconsistent across coset members")]
    IllDefinedInduction,
}

/// A finitely supported vector over the cosets of a context.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct KVector(pub BTreeMap<usize, RationalFunction>);

impl KVector {
    pub fn zero() -> Self {
        KVector(BTreeMap::new())
    }

    pub fn single(coset: usize, coeff: RationalFunction) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(coset, coeff);
        }
        KVector(m)
    }

    pub fn basis(coset: usize) -> Self {
        KVector::single(coset, RationalFunction::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &KVector) -> KVector {
        let mut out = self.0.clone();
        for (&c, v) in &other.0 {
            let e = out.entry(c).or_insert_with(RationalFunction::zero);
            *e = &*e + v;
            if e.is_zero() {
                out.remove(&c);
            }
        }
        KVector(out)
    }

    pub fn sub(&self, other: &KVector) -> KVector {
        self.add(&other.scale(&RationalFunction::from_int(-1)))
    }

    pub fn scale(&self, c: &RationalFunction) -> KVector {
        if c.is_zero() {
            return KVector::zero();
        }
        KVector(self.0.iter().map(|(&k, v)| (k, v * c)).collect())
    }

    pub fn coeff(&self, coset: usize) -> RationalFunction {
        self.0
            .get(&coset)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }
}

pub struct Coset {
    pub label: Vec<Rat>,
    /// Minimal subsystem-length representative.
    pub rep: u32,
    pub members: Vec<u32>,
}

struct RadicalInfo {
    rank: usize,
    /// Coset indices whose gram rows span the row space.
    independent: Vec<usize>,
}

/// A root subsystem together with a dominant middle element grading it.
pub struct GradedContext {
    pub rs: Rc<RootSystem>,
    pub wg: Rc<WeylGroup>,
    pub sub: Subsystem,
    pub chi: Vec<Rat>,
    pub e_mode: EMode,
    pub r2: Vec<usize>,
    pub r0: Vec<usize>,
    /// c = #r2 - #r0.
    pub c: i64,
    pub cosets: Vec<Coset>,
    coset_by_label: BTreeMap<Vec<Rat>, usize>,
    coset_of_elem: HashMap<u32, usize>,
    bits2: HashMap<u32, u64>,
    bits0: HashMap<u32, u64>,
    form_cache: RefCell<HashMap<(usize, usize), RationalFunction>>,
    radical_info: RefCell<Option<Rc<RadicalInfo>>>,
}

impl GradedContext {
    pub fn new(
        rs: Rc<RootSystem>,
        wg: Rc<WeylGroup>,
        sub: Subsystem,
        chi: Vec<Rat>,
        e_mode: EMode,
    ) -> Rc<GradedContext> {
        let r2 = rs.r_n(&sub.root_ids, &chi, 2);
        let r0 = rs.r_n(&sub.root_ids, &chi, 0);
        assert!(r2.len() <= 64 && r0.len() <= 64, "bitset width exceeded");
        let c = r2.len() as i64 - r0.len() as i64;

        let mut bits2 = HashMap::new();
        let mut bits0 = HashMap::new();
        for &w in &sub.elems {
            let mut b2 = 0u64;
            for (i, &a) in r2.iter().enumerate() {
                if rs.positive[wg.apply_root(w, a)] {
                    b2 |= 1 << i;
                }
            }
            let mut b0 = 0u64;
            for (i, &a) in r0.iter().enumerate() {
                if rs.positive[wg.apply_root(w, a)] {
                    b0 |= 1 << i;
                }
            }
            bits2.insert(w, b2);
            bits0.insert(w, b0);
        }

        // Cosets of the subgroup modulo the stabilizer, labeled by orbit point.
        let mut groups: BTreeMap<Vec<Rat>, Vec<u32>> = BTreeMap::new();
        for (pos, &w) in sub.elems.iter().enumerate() {
            let label = wg.apply_vec(&rs, w, &chi);
            groups.entry(label).or_default().push(pos as u32);
        }
        let mut cosets: Vec<Coset> = groups
            .into_iter()
            .map(|(label, positions)| {
                // BFS order is by subsystem length, so the first is minimal.
                let rep = sub.elems[positions[0] as usize];
                let members = positions.iter().map(|&p| sub.elems[p as usize]).collect();
                Coset { label, rep, members }
            })
            .collect();
        cosets.sort_by(|a, b| {
            let la = sub.sub_length[sub.elem_pos[&a.rep] as usize];
            let lb = sub.sub_length[sub.elem_pos[&b.rep] as usize];
            la.cmp(&lb).then_with(|| a.label.cmp(&b.label))
        });
        let coset_by_label: BTreeMap<Vec<Rat>, usize> = cosets
            .iter()
            .enumerate()
            .map(|(i, c)| (c.label.clone(), i))
            .collect();
        let mut coset_of_elem = HashMap::new();
        for (i, c) in cosets.iter().enumerate() {
            for &w in &c.members {
                coset_of_elem.insert(w, i);
            }
        }

        Rc::new(GradedContext {
            rs,
            wg,
            sub,
            chi,
            e_mode,
            r2,
            r0,
            c,
            cosets,
            coset_by_label,
            coset_of_elem,
            bits2,
            bits0,
            form_cache: RefCell::new(HashMap::new()),
            radical_info: RefCell::new(None),
        })
    }

    pub fn dim(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.r2.is_empty()
    }

    pub fn stabilizer_size(&self) -> usize {
        self.sub.size() / self.cosets.len()
    }

    pub fn coset_of_label(&self, label: &[Rat]) -> Option<usize> {
        self.coset_by_label.get(label).copied()
    }

    pub fn coset_of_element(&self, w: u32) -> Option<usize> {
        self.coset_of_elem.get(&w).copied()
    }

    pub fn label_string(&self, coset: usize) -> String {
        format!("[{}]", vec_display(&self.cosets[coset].label))
    }

    pub fn e_chi(&self) -> RationalFunction {
        match self.e_mode {
            EMode::One => RationalFunction::one(),
            EMode::Lusztig => {
                let one_minus_v2 = RationalFunction::from_poly(IntPoly::from_i64s(&[1, 0, -1]));
                let mut e = RationalFunction::one();
                for _ in 0..self.sub.rank {
                    e = &e / &one_minus_v2;
                }
                e
            }
        }
    }

    /// tau on a pair of subgroup elements.
    pub fn tau(&self, w1: u32, w2: u32) -> i64 {
        let d2 = (self.bits2[&w1] ^ self.bits2[&w2]).count_ones() as i64;
        let d0 = (self.bits0[&w1] ^ self.bits0[&w2]).count_ones() as i64;
        d2 - d0
    }

    /// Form of two coset basis vectors, including the e_chi factor.
    pub fn form_coset(&self, a: usize, b: usize) -> RationalFunction {
        if let Some(v) = self.form_cache.borrow().get(&(a, b)) {
            return v.clone();
        }
        let rep_b = self.cosets[b].rep;
        let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
        for &w in &self.cosets[a].members {
            *counts.entry(self.tau(w, rep_b)).or_insert(0) += 1;
        }
        let lo = *counts.keys().next().unwrap();
        let hi = *counts.keys().last().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (t, n) in counts {
            let sign = if t.rem_euclid(2) == 0 { 1 } else { -1 };
            coeffs[(t - lo) as usize] = BigInt::from(sign * n);
        }
        let num = IntPoly::from_coeffs(coeffs);
        let base = if lo >= 0 {
            RationalFunction::from_poly(num.shifted(lo as usize))
        } else {
            RationalFunction::new(num, IntPoly::monomial(BigInt::from(1), (-lo) as usize)).unwrap()
        };
        let out = &base * &self.e_chi();
        self.form_cache.borrow_mut().insert((a, b), out.clone());
        out
    }

    /// Bilinear form of two K-vectors.
    pub fn form(&self, x: &KVector, y: &KVector) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (&a, xa) in &x.0 {
            for (&b, yb) in &y.0 {
                let t = &(xa * yb) * &self.form_coset(a, b);
                acc = &acc + &t;
            }
        }
        acc
    }

    pub fn gram(&self) -> FieldMatrix {
        let n = self.dim();
        let rows: Vec<Vec<RationalFunction>> = (0..n)
            .map(|a| (0..n).map(|b| self.form_coset(a, b)).collect())
            .collect();
        FieldMatrix::from_rows(rows)
    }

    /// Kernel basis of the gram matrix, in reduced echelon form.
    pub fn radical(&self) -> Vec<KVector> {
        self.gram()
            .kernel()
            .into_iter()
            .map(|v| {
                KVector(
                    v.into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .collect(),
                )
            })
            .collect()
    }

    fn radical_data(&self) -> Rc<RadicalInfo> {
        if let Some(info) = self.radical_info.borrow().as_ref() {
            return Rc::clone(info);
        }
        // Duplicate gram rows and columns cannot change the rank; dedupe both
        // by the tau fingerprint of the coset before eliminating.
        let fingerprint = |i: usize| -> Vec<(u64, u64)> {
            let mut f: Vec<(u64, u64)> = self.cosets[i]
                .members
                .iter()
                .map(|w| (self.bits2[w], self.bits0[w]))
                .collect();
            f.sort_unstable();
            f
        };
        let mut seen: BTreeMap<Vec<(u64, u64)>, usize> = BTreeMap::new();
        let mut distinct: Vec<usize> = Vec::new();
        for i in 0..self.dim() {
            let f = fingerprint(i);
            if !seen.contains_key(&f) {
                seen.insert(f, i);
                distinct.push(i);
            }
        }
        let mut reducer = RowReducer::new(distinct.len());
        let mut independent = Vec::new();
        for &i in &distinct {
            let row: Vec<RationalFunction> =
                distinct.iter().map(|&j| self.form_coset(i, j)).collect();
            if reducer.offer(row) {
                independent.push(i);
            }
        }
        let info = Rc::new(RadicalInfo {
            rank: reducer.rank(),
            independent,
        });
        *self.radical_info.borrow_mut() = Some(Rc::clone(&info));
        info
    }

    /// Number of irreducibles: dim K(chi) minus the radical dimension.
    pub fn irr_count(&self) -> usize {
        self.radical_data().rank
    }

    /// Coset indices whose gram rows span the row space.
    pub fn independent_cosets(&self) -> Vec<usize> {
        self.radical_data().independent.clone()
    }

    pub fn in_radical(&self, x: &KVector) -> bool {
        if x.is_zero() {
            return true;
        }
        let info = self.radical_data();
        info.independent.iter().all(|&i| {
            let row = KVector::basis(i);
            self.form(&row, x).is_zero()
        })
    }

    /// beta: bar every coefficient.
    pub fn beta_vec(&self, x: &KVector) -> KVector {
        KVector(x.0.iter().map(|(&c, v)| (c, v.bar())).collect())
    }

    /// sigma: send the coset labeled l to the one labeled w0 l.
    pub fn sigma_vec(&self, x: &KVector) -> KVector {
        let mut out = BTreeMap::new();
        for (&c, v) in &x.0 {
            let new_label = self
                .wg
                .apply_vec(&self.rs, self.sub.w0, &self.cosets[c].label);
            let nc = self.coset_by_label[&new_label];
            out.insert(nc, v.clone());
        }
        KVector(out)
    }

    /// Minimal-length subgroup element sending every root of `u_roots` to a
    /// positive root. Errors unless the set is a parabolic nilradical.
    pub fn minimal_positivizer(&self, u_roots: &[usize]) -> Result<u32, KSpaceError> {
        let current: Vec<usize> = u_roots.to_vec();
        for &a in &current {
            if current.contains(&self.rs.neg_of[a]) {
                return Err(KSpaceError::NotParabolic);
            }
        }
        // Closure within the subsystem.
        for &a in &current {
            for &b in &current {
                if let Some(s) = self.rs.root_sum(a, b) {
                    if self.sub.contains_root(s) && !current.contains(&s) {
                        return Err(KSpaceError::NotParabolic);
                    }
                }
            }
        }
        let mut current = current;
        let mut w = 0u32;
        loop {
            if current.iter().all(|&a| self.rs.positive[a]) {
                return Ok(w);
            }
            let Some(&i) = self
                .sub
                .simple_ids
                .iter()
                .find(|&&i| current.contains(&self.rs.neg_of[i]))
            else {
                return Err(KSpaceError::NotParabolic);
            };
            let refl = self.wg.reflection(&self.rs, i);
            current = current
                .iter()
                .map(|&a| self.wg.apply_root(refl, a))
                .collect();
            w = self.wg.compose(refl, w);
        }
    }

    /// Induction from a Levi context through the parabolic with nilradical
    /// `u_roots`: each Levi coset maps to the ambient coset of w_p w.
    pub fn induce(
        &self,
        sub_ctx: &GradedContext,
        u_roots: &[usize],
        x: &KVector,
    ) -> Result<KVector, KSpaceError> {
        let w_p = self.minimal_positivizer(u_roots)?;
        let mut out = KVector::zero();
        for (&c, v) in &x.0 {
            let coset = &sub_ctx.cosets[c];
            let target = self
                .coset_of_element(self.wg.compose(w_p, coset.rep))
                .ok_or(KSpaceError::IllDefinedInduction)?;
            // Well-definedness across coset members.
            for &m in &coset.members {
                if self.coset_of_element(self.wg.compose(w_p, m)) != Some(target) {
                    return Err(KSpaceError::IllDefinedInduction);
                }
            }
            out = out.add(&KVector::single(target, v.clone()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::rat_vec;

    fn context(label: &str, chi: Vec<Rat>, e_mode: EMode) -> Rc<GradedContext> {
        let rs = Rc::new(RootSystem::build(label).unwrap());
        let wg = Rc::new(WeylGroup::enumerate(&rs, 2_000_000).unwrap());
        let sub = Subsystem::new(&rs, &wg, (0..rs.num_roots()).collect());
        GradedContext::new(Rc::clone(&rs), wg, sub, chi, e_mode)
    }

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, 'v').unwrap()
    }

    #[test]
    fn a2_regular_tau_values() {
        let ctx = context("A2", rat_vec(&[2, 0, -2]), EMode::One);
        assert_eq!(ctx.dim(), 6);
        assert_eq!(ctx.c, 2);
        let id = ctx.coset_of_label(&rat_vec(&[2, 0, -2])).unwrap();
        let s1 = ctx.coset_of_label(&rat_vec(&[0, 2, -2])).unwrap();
        let w0 = ctx.coset_of_label(&rat_vec(&[-2, 0, 2])).unwrap();
        assert_eq!(ctx.tau(ctx.cosets[id].rep, ctx.cosets[id].rep), 0);
        assert_eq!(ctx.tau(ctx.cosets[id].rep, ctx.cosets[s1].rep), 1);
        assert_eq!(ctx.tau(ctx.cosets[id].rep, ctx.cosets[w0].rep), 2);
        assert_eq!(ctx.form_coset(id, s1), rf("-v"));
        assert_eq!(ctx.form_coset(id, w0), rf("v^2"));
        // radical dim 2, spanned by s1 - s2s1 and s2 - s1s2
        assert_eq!(ctx.irr_count(), 4);
        let rad = ctx.radical();
        assert_eq!(rad.len(), 2);
        let s2 = ctx.coset_of_label(&rat_vec(&[2, -2, 0])).unwrap();
        let s1s2 = ctx.coset_of_label(&rat_vec(&[-2, 2, 0])).unwrap();
        let s2s1 = ctx.coset_of_label(&rat_vec(&[0, -2, 2])).unwrap();
        let gen1 = KVector::basis(s1).sub(&KVector::basis(s2s1));
        let gen2 = KVector::basis(s2).sub(&KVector::basis(s1s2));
        assert!(ctx.in_radical(&gen1));
        assert!(ctx.in_radical(&gen2));
    }

    #[test]
    fn c2_gram_matches_printed_table() {
        let ctx = context("C2", rat_vec(&[1, 1]), EMode::One);
        assert_eq!(ctx.dim(), 4);
        assert_eq!(ctx.stabilizer_size(), 2);
        let order = [
            rat_vec(&[1, 1]),
            rat_vec(&[1, -1]),
            rat_vec(&[-1, 1]),
            rat_vec(&[-1, -1]),
        ];
        let idx: Vec<usize> = order
            .iter()
            .map(|l| ctx.coset_of_label(l).unwrap())
            .collect();
        let expect = [
            ["(1+v^2)/v^2", "(-1-v^2)/v", "1+v^2", "-v-v^3"],
            ["(-1-v^2)/v", "2", "-2v", "1+v^2"],
            ["1+v^2", "-2v", "2", "(-1-v^2)/v"],
            ["-v-v^3", "1+v^2", "(-1-v^2)/v", "(1+v^2)/v^2"],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    ctx.form_coset(idx[i], idx[j]),
                    rf(expect[i][j]),
                    "entry ({i},{j})"
                );
            }
        }
        // nondegenerate
        assert_eq!(ctx.irr_count(), 4);
        assert!(ctx.radical().is_empty());
    }

    #[test]
    fn torus_gram_is_e() {
        let rs = Rc::new(RootSystem::build("A1").unwrap());
        let wg = Rc::new(WeylGroup::enumerate(&rs, 100).unwrap());
        let sub = Subsystem::new(&rs, &wg, Vec::new());
        let ctx = GradedContext::new(rs, wg, sub, rat_vec(&[0, 0]), EMode::One);
        assert_eq!(ctx.dim(), 1);
        assert!(ctx.form_coset(0, 0).is_one());
    }

    #[test]
    fn beta_and_sigma() {
        let ctx = context("C2", rat_vec(&[1, 1]), EMode::One);
        let x = KVector::single(0, rf("v")).add(&KVector::single(1, rf("1+v")));
        assert_eq!(ctx.beta_vec(&ctx.beta_vec(&x)), x);
        // sigma on C2: w0 = -1, label negated
        let c = ctx.coset_of_label(&rat_vec(&[1, 1])).unwrap();
        let y = ctx.sigma_vec(&KVector::basis(c));
        let neg = ctx.coset_of_label(&rat_vec(&[-1, -1])).unwrap();
        assert_eq!(y, KVector::basis(neg));
        // beta(Rad) = Rad
        let a2 = context("A2", rat_vec(&[2, 0, -2]), EMode::One);
        for r in a2.radical() {
            assert!(a2.in_radical(&a2.beta_vec(&r)));
        }
    }

    #[test]
    fn gram_is_symmetric() {
        for (label, chi) in [("A2", rat_vec(&[2, 0, -2])), ("C2", rat_vec(&[1, 1]))] {
            let ctx = context(label, chi, EMode::Lusztig);
            let g = ctx.gram();
            for i in 0..ctx.dim() {
                for j in 0..ctx.dim() {
                    assert_eq!(g[(i, j)], g[(j, i)]);
                }
            }
        }
    }
}

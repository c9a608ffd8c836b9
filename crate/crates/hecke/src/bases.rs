//! Recursive construction of the two basis pairs (Z+, U+) and (Z-, U-) of
//! K(chi)/Rad, the multiplicity matrix over Z[v], its conversion to the
//! polynomial matrix over Z[q], and the involution pairing on parameters.
//!
//! The recursion over Levi contexts is memoized on (root set, character).
//! A context whose grading is trivial is the base case; its single basis
//! element carries the scalar v^N / P_W(v^2), where N is the number of
//! positive roots and P_W the Poincare polynomial of the context's Weyl
//! group (v/(1+v^2) in the rank-one case, 1 on a torus).

use crate::chevalley::ChevalleyBasis;
use crate::kspace::{EMode, GradedContext, KSpaceError, KVector};
use crate::linalg::FieldMatrix;
use crate::nilpotent::{middle_element_test, saturation_label, wdd_enumerate};
use crate::orbits::{decorate, parameter_set, OrbitError, OrbitParam};
use crate::poly::IntPoly;
use crate::ratfun::RationalFunction;
use crate::rootsys::{Rat, RootSystem, RootSystemError, Subsystem, WeylGroup};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

pub const MINUS: usize = 0;
pub const PLUS: usize = 1;

#[derive(Debug, Error)]
pub enum BasesError {
    #[error(transparent)]
    Root(#[from] RootSystemError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    KSpace(#[from] KSpaceError),
    #[error("pairing matrix on a basis block is singular")]
    SingularPairing,
    #[error("orthogonality between distinct orbit blocks fails")]
    Orthogonality,
    #[error("triangularity of the bar-expansion fails at ({0}, {1})")]
    Triangularity(usize, usize),
    #[error("bar fixed-point system has no valid split at ({0}, {1}): {2}")]
    BarSplit(usize, usize, String),
    #[error("basis size {got} does not match the irreducible count {want}")]
    Counting { got: usize, want: usize },
    #[error("multiplicity matrices of the two signs disagree")]
    SignsDisagree,
    #[error("matrix entry at ({0}, {1}) is not a polynomial multiplicity: {2}")]
    NotPolynomial(usize, usize, String),
    #[error("involution pairing is not a unique matching for element {0}")]
    AmbiguousInvolution(usize),
    #[error("character does not resolve: {0}")]
    BadCharacter(String),
}

#[derive(Clone, Debug)]
pub struct ElemMeta {
    pub param: usize,
    pub local: usize,
    pub label: String,
    pub dim: i64,
}

pub struct BasisFamily {
    pub params: Vec<OrbitParam>,
    pub elems: Vec<ElemMeta>,
    /// Z and U bases indexed by sign (MINUS, PLUS), aligned with `elems`.
    pub z: [Vec<KVector>; 2],
    pub u: [Vec<KVector>; 2],
    pub open_start: usize,
    /// Primed-element indices feeding the opposite sign's open block.
    pub j_sources: [Vec<usize>; 2],
    pub irr: usize,
    /// Change-of-basis matrix in the printed orientation: column j expands
    /// u[MINUS][j] over the z[MINUS] basis.
    pub n_printed: Vec<Vec<RationalFunction>>,
    /// Involution pairing as (plus element, minus element) index pairs.
    pub im_pairs: Vec<(usize, usize)>,
}

impl BasisFamily {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn open_block(&self, sign: usize) -> &[KVector] {
        &self.z[sign][self.open_start..]
    }

    pub fn block_size(&self, param: usize) -> usize {
        self.elems.iter().filter(|e| e.param == param).count()
    }

    /// The involution as a label pairing.
    pub fn im_label_pairs(&self) -> Vec<(String, String)> {
        self.im_pairs
            .iter()
            .map(|&(p, m)| (self.elems[p].label.clone(), self.elems[m].label.clone()))
            .collect()
    }
}

pub struct MultiplicityMatrix {
    pub labels: Vec<String>,
    pub dims: Vec<i64>,
    pub n: Vec<Vec<RationalFunction>>,
    /// Polynomials in q, nonnegative with unit diagonal.
    pub p: Vec<Vec<IntPoly>>,
    /// Per-entry sign absorbed into the normalization (0 on zero entries).
    pub signs: Vec<Vec<i8>>,
    /// Per-column sign against the minimal-orbit row, for display.
    pub epsilon: Vec<i8>,
}

type CtxKey = (Vec<usize>, Vec<Rat>);

pub struct Engine {
    pub rs: Rc<RootSystem>,
    pub wg: Rc<WeylGroup>,
    pub cb: Rc<ChevalleyBasis>,
    pub full: Rc<Subsystem>,
    pub e_mode: EMode,
    pub seed: u64,
    pub retries: usize,
    contexts: RefCell<HashMap<CtxKey, Rc<GradedContext>>>,
    families: RefCell<HashMap<CtxKey, Rc<BasisFamily>>>,
}

impl Engine {
    pub fn new(label: &str, e_mode: EMode) -> Result<Engine, BasesError> {
        Engine::with_options(label, e_mode, 0, 5, 2_000_000)
    }

    pub fn with_options(
        label: &str,
        e_mode: EMode,
        seed: u64,
        retries: usize,
        weyl_bound: usize,
    ) -> Result<Engine, BasesError> {
        let rs = Rc::new(RootSystem::build(label)?);
        let wg = Rc::new(WeylGroup::enumerate(&rs, weyl_bound)?);
        let cb = Rc::new(ChevalleyBasis::structure_constants(&rs));
        let full = Rc::new(Subsystem::new(&rs, &wg, (0..rs.num_roots()).collect()));
        Ok(Engine {
            rs,
            wg,
            cb,
            full,
            e_mode,
            seed,
            retries,
            contexts: RefCell::new(HashMap::new()),
            families: RefCell::new(HashMap::new()),
        })
    }

    pub fn context(&self, mut root_ids: Vec<usize>, chi: Vec<Rat>) -> Rc<GradedContext> {
        root_ids.sort_unstable();
        root_ids.dedup();
        let key = (root_ids.clone(), chi.clone());
        if let Some(ctx) = self.contexts.borrow().get(&key) {
            return Rc::clone(ctx);
        }
        let sub = Subsystem::new(&self.rs, &self.wg, root_ids);
        let ctx = GradedContext::new(
            Rc::clone(&self.rs),
            Rc::clone(&self.wg),
            sub,
            chi,
            self.e_mode,
        );
        self.contexts.borrow_mut().insert(key, Rc::clone(&ctx));
        ctx
    }

    pub fn full_context(&self, chi: Vec<Rat>) -> Rc<GradedContext> {
        self.context((0..self.rs.num_roots()).collect(), chi)
    }

    /// Resolve a character argument: a comma-separated vector, `2rho`, or an
    /// orbit name recognized by the saturation tables. The result is the
    /// dominant representative, checked to be a middle element.
    pub fn resolve_chi(&self, arg: &str) -> Result<Vec<Rat>, BasesError> {
        let trimmed = arg.trim();
        let candidate: Option<Vec<Rat>> = if trimmed.eq_ignore_ascii_case("2rho") {
            Some(self.rs.two_rho_check())
        } else if let Ok(v) = crate::rootsys::CharacterVector::parse(trimmed) {
            if v.0.len() == self.rs.dim {
                Some(v.0)
            } else {
                None
            }
        } else {
            None
        };
        let chi = match candidate {
            Some(v) => v,
            None => {
                let mut found = None;
                for h in wdd_enumerate(&self.rs, &self.cb, &self.full, self.seed, self.retries) {
                    if let Some(name) = saturation_label(&self.rs, &self.wg, &self.full, &h) {
                        if name == trimmed {
                            found = Some(h);
                            break;
                        }
                    }
                }
                found.ok_or_else(|| BasesError::BadCharacter(arg.to_string()))?
            }
        };
        let (dom, _) = self.full.to_dominant(&self.rs, &self.wg, &chi);
        if middle_element_test(&self.rs, &self.cb, &self.full.root_ids, &dom, self.seed, self.retries)
            .is_none()
        {
            return Err(BasesError::BadCharacter(format!(
                "{} is not a middle element: no sl2 triple over its 2-eigenspace",
                arg
            )));
        }
        Ok(dom)
    }

    pub fn family(&self, ctx: &Rc<GradedContext>) -> Result<Rc<BasisFamily>, BasesError> {
        let key = (ctx.sub.root_ids.clone(), ctx.chi.clone());
        if let Some(fam) = self.families.borrow().get(&key) {
            return Ok(Rc::clone(fam));
        }
        let fam = Rc::new(self.build_family(ctx)?);
        self.families.borrow_mut().insert(key, Rc::clone(&fam));
        Ok(fam)
    }

    fn build_family(&self, ctx: &Rc<GradedContext>) -> Result<BasisFamily, BasesError> {
        let mut params = parameter_set(ctx, &self.cb, self.seed, self.retries)?;
        for p in params.iter_mut() {
            p.saturation = saturation_label(&self.rs, &self.wg, &self.full, &p.s);
        }

        if ctx.is_degenerate() {
            return self.base_family(ctx, params);
        }

        let open_param = params.len() - 1;
        let mut z: [Vec<KVector>; 2] = [Vec::new(), Vec::new()];
        let mut elems: Vec<ElemMeta> = Vec::new();
        for (pi, o) in params.iter().enumerate().take(open_param) {
            let subctx = self.context(o.levi_roots.clone(), o.s.clone());
            let subfam = self.family(&subctx)?;
            let minus_block = subfam.open_block(MINUS);
            let plus_block = subfam.open_block(PLUS);
            assert_eq!(minus_block.len(), plus_block.len());
            for (local, vec) in minus_block.iter().enumerate() {
                z[MINUS].push(ctx.induce(&subctx, &o.u_minus_roots, vec)?);
                elems.push(ElemMeta {
                    param: pi,
                    local,
                    label: String::new(),
                    dim: o.dim,
                });
            }
            for vec in plus_block.iter() {
                z[PLUS].push(ctx.induce(&subctx, &o.u_plus_roots, vec)?);
            }
        }
        let open_start = elems.len();
        let dims: Vec<i64> = elems.iter().map(|e| e.dim).collect();
        let param_of: Vec<usize> = elems.iter().map(|e| e.param).collect();

        let (mu_minus, c_minus, minv_minus) = self.mu_basis(ctx, &z[MINUS], &dims, &param_of)?;
        let (mu_plus, c_plus, minv_plus) = self.mu_basis(ctx, &z[PLUS], &dims, &param_of)?;

        // Open blocks by projection away from the opposite primed span.
        let mut j_sources: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut open_proj: [Vec<Vec<RationalFunction>>; 2] = [Vec::new(), Vec::new()];
        let mut u: [Vec<KVector>; 2] = [mu_minus.clone(), mu_plus.clone()];
        for (sign, sources) in [(PLUS, &mu_minus), (MINUS, &mu_plus)] {
            let primed = &z[sign][..open_start];
            let minv = minv_of(sign, &minv_minus, &minv_plus);
            let mut new_z = Vec::new();
            let mut new_u = Vec::new();
            for (idx, mu) in sources.iter().enumerate().take(open_start) {
                let (coeffs, proj) = project(ctx, primed, minv, mu);
                let perp = mu.sub(&proj);
                if !ctx.in_radical(&perp) {
                    j_sources[sign].push(idx);
                    open_proj[sign].push(coeffs);
                    new_z.push(perp);
                    new_u.push(mu.clone());
                }
            }
            z[sign].extend(new_z);
            u[sign].extend(new_u);
        }

        let irr = ctx.irr_count();
        for sign in [MINUS, PLUS] {
            if z[sign].len() != irr {
                return Err(BasesError::Counting {
                    got: z[sign].len(),
                    want: irr,
                });
            }
        }
        if j_sources[MINUS].len() != j_sources[PLUS].len() {
            return Err(BasesError::SignsDisagree);
        }
        // The zero-orbit element always survives into the open block.
        debug_assert!(j_sources[PLUS].first() == Some(&0));

        let open_len = z[MINUS].len() - open_start;
        for local in 0..open_len {
            elems.push(ElemMeta {
                param: open_param,
                local,
                label: String::new(),
                dim: params[open_param].dim,
            });
        }
        assign_labels(&params, &mut elems);

        let n_minus = assemble_printed(&c_minus, &open_proj[MINUS], open_start, irr);
        let n_plus = assemble_printed(&c_plus, &open_proj[PLUS], open_start, irr);
        if n_minus
            .iter()
            .zip(&n_plus)
            .any(|(r1, r2)| r1.iter().zip(r2).any(|(a, b)| a != b))
        {
            return Err(BasesError::SignsDisagree);
        }

        let im_pairs = self.involution_pairs(ctx, &elems, &z, &u, &j_sources, open_start)?;

        let mut family = BasisFamily {
            params,
            elems,
            z,
            u,
            open_start,
            j_sources,
            irr,
            n_printed: n_minus,
            im_pairs,
        };
        for pi in 0..family.params.len() {
            let size = family.block_size(pi);
            let mut p = family.params[pi].clone();
            decorate(&self.rs, &self.wg, &self.full, &mut p, size);
            family.params[pi] = p;
        }
        Ok(family)
    }

    fn base_family(
        &self,
        ctx: &Rc<GradedContext>,
        mut params: Vec<OrbitParam>,
    ) -> Result<BasisFamily, BasesError> {
        assert_eq!(params.len(), 1);
        assert_eq!(ctx.dim(), 1);
        let irr = ctx.irr_count();
        if irr != 1 {
            return Err(BasesError::Counting { got: 1, want: irr });
        }
        // v^N / P_W(v^2) on the unique coset.
        let n_pos = ctx.sub.pos_ids.len();
        let mut poincare = IntPoly::zero();
        for &w in &ctx.sub.elems {
            let l = ctx.sub.sub_length[ctx.sub.elem_pos[&w] as usize] as usize;
            poincare = &poincare + &IntPoly::monomial(BigInt::from(1), 2 * l);
        }
        let scalar = RationalFunction::new(IntPoly::monomial(BigInt::from(1), n_pos), poincare)
            .expect("nonzero Poincare polynomial");
        let vec = KVector::single(0, scalar);
        decorate(&self.rs, &self.wg, &self.full, &mut params[0], 1);
        let label = params[0].label.clone();
        Ok(BasisFamily {
            params,
            elems: vec![ElemMeta {
                param: 0,
                local: 0,
                label,
                dim: 0,
            }],
            z: [vec![vec.clone()], vec![vec.clone()]],
            u: [vec![vec.clone()], vec![vec]],
            open_start: 0,
            j_sources: [vec![], vec![]],
            irr: 1,
            n_printed: vec![vec![RationalFunction::one()]],
            im_pairs: vec![(0, 0)],
        })
    }

    /// Prop-2.3 step: the pairing matrix M, the bar-expansion coefficients
    /// a', and the unique bar-fixed unitriangular family c over vZ[v].
    #[allow(clippy::type_complexity)]
    fn mu_basis(
        &self,
        ctx: &GradedContext,
        zvecs: &[KVector],
        dims: &[i64],
        param_of: &[usize],
    ) -> Result<(Vec<KVector>, Vec<Vec<RationalFunction>>, FieldMatrix), BasesError> {
        let n = zvecs.len();
        if n == 0 {
            return Ok((Vec::new(), Vec::new(), FieldMatrix::zero(0, 0)));
        }
        let m = FieldMatrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| ctx.form(&zvecs[i], &zvecs[j])).collect())
                .collect(),
        );
        for i in 0..n {
            for j in 0..n {
                if param_of[i] != param_of[j] && !m[(i, j)].is_zero() {
                    return Err(BasesError::Orthogonality);
                }
            }
        }
        let minv = m.invert().map_err(|_| BasesError::SingularPairing)?;

        let mut aprime: Vec<Vec<RationalFunction>> = Vec::with_capacity(n);
        for t in 0..n {
            let beta_z = ctx.beta_vec(&zvecs[t]);
            let b: Vec<RationalFunction> = (0..n).map(|j| ctx.form(&beta_z, &zvecs[j])).collect();
            aprime.push(minv.mul_vec(&b));
        }
        for t in 0..n {
            if !aprime[t][t].is_one() {
                return Err(BasesError::Triangularity(t, t));
            }
            for j in 0..n {
                if j != t && dims[j] >= dims[t] && !aprime[t][j].is_zero() {
                    return Err(BasesError::Triangularity(t, j));
                }
            }
        }
        // Biorthogonality: bar is an involution on the expansions, so the
        // bar of the coefficient matrix composed with itself is the identity.
        for t in 0..n {
            for s in 0..n {
                let mut acc = RationalFunction::zero();
                for k in 0..n {
                    let term = &aprime[t][k].bar() * &aprime[k][s];
                    acc = &acc + &term;
                }
                let expect = if t == s {
                    RationalFunction::one()
                } else {
                    RationalFunction::zero()
                };
                if acc != expect {
                    return Err(BasesError::Triangularity(t, s));
                }
            }
        }

        let mut c: Vec<Vec<RationalFunction>> =
            vec![vec![RationalFunction::zero(); n]; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| dims[b].cmp(&dims[a]).then(a.cmp(&b)));
        for t in 0..n {
            c[t][t] = RationalFunction::one();
            for &j in &order {
                if dims[j] >= dims[t] {
                    continue;
                }
                let mut r = aprime[t][j].clone();
                for &k in &order {
                    if dims[k] <= dims[j] || dims[k] >= dims[t] {
                        continue;
                    }
                    if c[t][k].is_zero() || aprime[k][j].is_zero() {
                        continue;
                    }
                    let term = &c[t][k].bar() * &aprime[k][j];
                    r = &r + &term;
                }
                let cv = split_bar_antisymmetric(&r)
                    .map_err(|e| BasesError::BarSplit(t, j, e))?;
                c[t][j] = cv;
            }
        }

        let mut mus = Vec::with_capacity(n);
        for t in 0..n {
            let mut mu = zvecs[t].clone();
            for j in 0..n {
                if j != t && !c[t][j].is_zero() {
                    mu = mu.add(&zvecs[j].scale(&c[t][j]));
                }
            }
            // bar fixed modulo the radical
            debug_assert!(ctx.in_radical(&ctx.beta_vec(&mu).sub(&mu)));
            mus.push(mu);
        }
        Ok((mus, c, minv))
    }

    #[allow(clippy::too_many_arguments)]
    fn involution_pairs(
        &self,
        ctx: &GradedContext,
        elems: &[ElemMeta],
        z: &[Vec<KVector>; 2],
        u: &[Vec<KVector>; 2],
        j_sources: &[Vec<usize>; 2],
        open_start: usize,
    ) -> Result<Vec<(usize, usize)>, BasesError> {
        let n = elems.len();
        let indep = ctx.independent_cosets();
        assert_eq!(indep.len(), n, "independent rows must match the basis size");
        let pair_matrix = FieldMatrix::from_rows(
            indep
                .iter()
                .map(|&i| {
                    let row = KVector::basis(i);
                    (0..n).map(|col| ctx.form(&row, &u[PLUS][col])).collect()
                })
                .collect(),
        );
        let w = pair_matrix
            .invert()
            .map_err(|_| BasesError::SingularPairing)?;
        let zprime_plus = &z[PLUS][..open_start];
        let m_plus = FieldMatrix::from_rows(
            (0..open_start)
                .map(|i| {
                    (0..open_start)
                        .map(|j| ctx.form(&zprime_plus[i], &zprime_plus[j]))
                        .collect()
                })
                .collect(),
        );
        let m_plus_inv = if open_start > 0 {
            m_plus.invert().map_err(|_| BasesError::SingularPairing)?
        } else {
            FieldMatrix::zero(0, 0)
        };

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (k, &src) in j_sources[PLUS].iter().enumerate() {
            pairs.push((open_start + k, src));
        }
        for m_idx in 0..n {
            if m_idx < open_start && j_sources[PLUS].contains(&m_idx) {
                continue;
            }
            let (_, proj) = project(ctx, zprime_plus, &m_plus_inv, &u[MINUS][m_idx]);
            let b: Vec<RationalFunction> = indep
                .iter()
                .map(|&i| ctx.form(&KVector::basis(i), &proj))
                .collect();
            let d = w.mul_vec(&b);
            let nonzero: Vec<usize> = (0..n).filter(|&i| !d[i].is_zero()).collect();
            if nonzero.len() != 1 {
                return Err(BasesError::AmbiguousInvolution(m_idx));
            }
            pairs.push((nonzero[0], m_idx));
        }
        // Perfect matching, symmetric on labels.
        let mut plus_seen = vec![false; n];
        let mut minus_seen = vec![false; n];
        for &(p, m) in &pairs {
            if plus_seen[p] || minus_seen[m] {
                return Err(BasesError::AmbiguousInvolution(p));
            }
            plus_seen[p] = true;
            minus_seen[m] = true;
        }
        for &(p, m) in &pairs {
            if !pairs.contains(&(m, p)) {
                return Err(BasesError::AmbiguousInvolution(p));
            }
        }
        pairs.sort_unstable();
        Ok(pairs)
    }

    /// Full analysis of a dominant middle element: parameters, bases,
    /// multiplicity matrix, polynomial matrix, involution.
    pub fn analyze(&self, chi: Vec<Rat>) -> Result<(Rc<GradedContext>, Rc<BasisFamily>, MultiplicityMatrix), BasesError> {
        let ctx = self.full_context(chi);
        let family = self.family(&ctx)?;
        let mult = multiplicity_matrix(&family)?;
        Ok((ctx, family, mult))
    }
}

fn minv_of<'a>(sign: usize, minus: &'a FieldMatrix, plus: &'a FieldMatrix) -> &'a FieldMatrix {
    if sign == MINUS {
        minus
    } else {
        plus
    }
}

/// Orthogonal-projection coefficients of `x` onto the span of `basis`,
/// using the precomputed inverse pairing matrix.
fn project(
    ctx: &GradedContext,
    basis: &[KVector],
    minv: &FieldMatrix,
    x: &KVector,
) -> (Vec<RationalFunction>, KVector) {
    if basis.is_empty() {
        return (Vec::new(), KVector::zero());
    }
    let b: Vec<RationalFunction> = basis.iter().map(|z| ctx.form(x, z)).collect();
    let coeffs = minv.mul_vec(&b);
    let mut proj = KVector::zero();
    for (c, z) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            proj = proj.add(&z.scale(c));
        }
    }
    (coeffs, proj)
}

/// Solve c - bar(c) = r for c in vZ[v]; r must be an integer Laurent
/// polynomial, bar-antisymmetric, with no constant term.
fn split_bar_antisymmetric(r: &RationalFunction) -> Result<RationalFunction, String> {
    let bar_r = r.bar();
    let sum = &bar_r + r;
    if !sum.is_zero() {
        return Err(format!("not bar-antisymmetric: {}", r.display("v")));
    }
    let Some((lo, coeffs)) = r.as_int_laurent() else {
        return Err(format!("not an integer Laurent polynomial: {}", r.display("v")));
    };
    if lo <= 0 && coeffs.len() as i64 > -lo && !coeffs[(-lo) as usize].is_zero() {
        return Err(format!("nonzero constant term: {}", r.display("v")));
    }
    let c = r.positive_degree_part().unwrap();
    debug_assert_eq!(&(&c - &c.bar()), r);
    Ok(c)
}

fn assign_labels(params: &[OrbitParam], elems: &mut [ElemMeta]) {
    let block_sizes: Vec<usize> = params
        .iter()
        .enumerate()
        .map(|(pi, _)| elems.iter().filter(|e| e.param == pi).count())
        .collect();
    for e in elems.iter_mut() {
        let base = &params[e.param].label;
        e.label = match block_sizes[e.param] {
            1 => base.clone(),
            2 => format!("{}_{}", base, if e.local == 0 { "t" } else { "s" }),
            _ => format!("{}.{}", base, e.local + 1),
        };
    }
}

fn assemble_printed(
    c: &[Vec<RationalFunction>],
    open_proj: &[Vec<RationalFunction>],
    open_start: usize,
    n: usize,
) -> Vec<Vec<RationalFunction>> {
    let mut out = vec![vec![RationalFunction::zero(); n]; n];
    for (j, row) in c.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            out[i][j] = v.clone();
        }
    }
    for (k, coeffs) in open_proj.iter().enumerate() {
        let j = open_start + k;
        for (i, v) in coeffs.iter().enumerate() {
            out[i][j] = v.clone();
        }
        out[j][j] = RationalFunction::one();
    }
    out
}

/// Convert the change-of-basis matrix to the polynomial matrix: strip the
/// power v^(dim difference), substitute q = 1/v^2, and absorb the sign.
pub fn multiplicity_matrix(family: &BasisFamily) -> Result<MultiplicityMatrix, BasesError> {
    let n = family.len();
    let dims: Vec<i64> = family.elems.iter().map(|e| e.dim).collect();
    let labels: Vec<String> = family.elems.iter().map(|e| e.label.clone()).collect();
    let mut p = vec![vec![IntPoly::zero(); n]; n];
    let mut signs = vec![vec![0i8; n]; n];
    for i in 0..n {
        for j in 0..n {
            let cij = &family.n_printed[i][j];
            if cij.is_zero() {
                continue;
            }
            if i == j {
                if !cij.is_one() {
                    return Err(BasesError::NotPolynomial(i, j, cij.display("v")));
                }
                p[i][j] = IntPoly::one();
                signs[i][j] = 1;
                continue;
            }
            let d = dims[j] - dims[i];
            if d <= 0 {
                return Err(BasesError::Triangularity(i, j));
            }
            let Some((lo, coeffs)) = cij.as_int_laurent() else {
                return Err(BasesError::NotPolynomial(i, j, cij.display("v")));
            };
            if lo < 0 {
                return Err(BasesError::NotPolynomial(i, j, cij.display("v")));
            }
            let mut sign = 0i8;
            let mut qcoeffs: Vec<BigInt> = vec![BigInt::zero(); (d as usize) / 2 + 1];
            for (off, coef) in coeffs.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let deg = lo + off as i64;
                let rem = d - deg;
                if rem < 0 || rem % 2 != 0 {
                    return Err(BasesError::NotPolynomial(i, j, cij.display("v")));
                }
                let s = if coef.is_positive() { 1i8 } else { -1i8 };
                if sign == 0 {
                    sign = s;
                } else if sign != s {
                    return Err(BasesError::NotPolynomial(
                        i,
                        j,
                        format!("mixed signs in {}", cij.display("v")),
                    ));
                }
                qcoeffs[(rem / 2) as usize] = coef.abs();
            }
            p[i][j] = IntPoly::from_coeffs(qcoeffs);
            signs[i][j] = sign;
        }
    }
    let epsilon: Vec<i8> = (0..n)
        .map(|j| if signs[0][j] == 0 { 1 } else { signs[0][j] })
        .collect();
    Ok(MultiplicityMatrix {
        labels,
        dims,
        n: family.n_printed.clone(),
        p,
        signs,
        epsilon,
    })
}

/// Orbit-level reachability edges (from lower to higher dimension wherever a
/// polynomial entry is nonzero), transitively reduced. A heuristic stand-in
/// for the closure order.
pub fn closure_edges(family: &BasisFamily, mult: &MultiplicityMatrix) -> Vec<(usize, usize)> {
    let np = family.params.len();
    let mut reach = vec![vec![false; np]; np];
    for i in 0..family.len() {
        for j in 0..family.len() {
            let (pi, pj) = (family.elems[i].param, family.elems[j].param);
            if pi != pj
                && family.params[pi].dim < family.params[pj].dim
                && !mult.p[i][j].is_zero()
            {
                reach[pi][pj] = true;
            }
        }
    }
    // transitive closure, then reduction
    let mut closure = reach.clone();
    for k in 0..np {
        for i in 0..np {
            for j in 0..np {
                if closure[i][k] && closure[k][j] {
                    closure[i][j] = true;
                }
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..np {
        for j in 0..np {
            if !closure[i][j] {
                continue;
            }
            let redundant = (0..np).any(|k| k != i && k != j && closure[i][k] && closure[k][j]);
            if !redundant {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Render a K-vector against a context's coset labels, canonical string form.
pub fn kvector_display(ctx: &GradedContext, x: &KVector) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    // order by coset index
    let entries: BTreeMap<usize, &RationalFunction> = x.0.iter().map(|(&k, v)| (k, v)).collect();
    for (c, v) in entries {
        let coeff = v.display("v");
        let label = ctx.label_string(c);
        if coeff == "1" {
            parts.push(label);
        } else if coeff == "-1" {
            parts.push(format!("-{}", label));
        } else if v.numerator().num_terms() > 1 && v.denominator().is_one() {
            parts.push(format!("({}){}", coeff, label));
        } else {
            parts.push(format!("{}{}", coeff, label));
        }
    }
    let mut out = String::new();
    for (i, t) in parts.iter().enumerate() {
        if i > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::rat_vec;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, 'v').unwrap()
    }

    #[test]
    fn a1_family_matches_hand_computation() {
        // Hand-run instance: chi = alpha-check on A1. Cosets [1] = (1,-1)
        // and [s] = (-1,1). The zero orbit contributes [1] on the minus side
        // and [s] on the plus side; the open elements are [s]+v[1] and
        // [1]+v[s]; N = [[1,-v],[0,1]].
        let eng = Engine::new("A1", EMode::Lusztig).unwrap();
        let chi = eng.resolve_chi("2rho").unwrap();
        assert_eq!(chi, rat_vec(&[1, -1]));
        let (ctx, fam, mult) = eng.analyze(chi).unwrap();
        assert_eq!(fam.len(), 2);
        let id = ctx.coset_of_label(&rat_vec(&[1, -1])).unwrap();
        let sw = ctx.coset_of_label(&rat_vec(&[-1, 1])).unwrap();
        assert_eq!(fam.z[MINUS][0], KVector::basis(id));
        assert_eq!(
            fam.z[MINUS][1],
            KVector::basis(sw).add(&KVector::single(id, rf("v")))
        );
        assert_eq!(fam.u[MINUS][0], KVector::basis(id));
        assert_eq!(fam.u[MINUS][1], KVector::basis(sw));
        assert_eq!(fam.z[PLUS][0], KVector::basis(sw));
        assert_eq!(
            fam.z[PLUS][1],
            KVector::basis(id).add(&KVector::single(sw, rf("v")))
        );
        assert_eq!(mult.n[0][1], rf("-v"));
        assert_eq!(mult.p[0][1], IntPoly::one());
        assert_eq!(mult.p[1][0], IntPoly::zero());
        // IM swaps the open and zero orbits.
        let pairs = fam.im_label_pairs();
        assert!(pairs.contains(&("1".to_string(), "0".to_string())));
    }

    #[test]
    fn sp4_matches_printed_tables() {
        let eng = Engine::new("C2", EMode::Lusztig).unwrap();
        let (ctx, fam, mult) = eng.analyze(rat_vec(&[1, 1])).unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.open_start, 2);
        let l = |v: &[i64]| ctx.coset_of_label(&rat_vec(v)).unwrap();
        let f0 = rf("v/(1+v^2)");
        // zero orbit: f0 [1,1]
        assert_eq!(fam.z[MINUS][0], KVector::single(l(&[1, 1]), f0.clone()));
        // 2-orbit: [1,-1] + v[1,1]
        assert_eq!(
            fam.z[MINUS][1],
            KVector::basis(l(&[1, -1])).add(&KVector::single(l(&[1, 1]), rf("v")))
        );
        // open: f0[-1,-1] - v[1,-1] - v^2/(1+v^2) [1,1]
        let open_t = KVector::single(l(&[-1, -1]), f0.clone())
            .add(&KVector::single(l(&[1, -1]), rf("-v")))
            .add(&KVector::single(l(&[1, 1]), rf("-v^2/(1+v^2)")));
        assert_eq!(fam.z[MINUS][2], open_t);
        let open_s = KVector::basis(l(&[-1, 1]))
            .add(&KVector::single(l(&[-1, -1]), f0.clone()))
            .add(&KVector::single(l(&[1, 1]), rf("-v^2/(1+v^2)")));
        assert_eq!(fam.z[MINUS][3], open_s);
        // U: f0[1,1]; [1,-1]+f0[1,1]; f0[-1,-1]; [-1,1]+f0[-1,-1]
        assert_eq!(
            fam.u[MINUS][1],
            KVector::basis(l(&[1, -1])).add(&KVector::single(l(&[1, 1]), f0.clone()))
        );
        assert_eq!(fam.u[MINUS][2], KVector::single(l(&[-1, -1]), f0.clone()));
        assert_eq!(
            fam.u[MINUS][3],
            KVector::basis(l(&[-1, 1])).add(&KVector::single(l(&[-1, -1]), f0))
        );
        // printed N
        let expect = [
            ["1", "-v^2", "-v^3", "v"],
            ["0", "1", "v", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "0", "1"],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(mult.n[i][j], rf(expect[i][j]), "N entry ({i},{j})");
            }
        }
        // printed polynomial matrix
        let q = |s: &str| RationalFunction::parse(s, 'q').unwrap().as_int_poly().unwrap().clone();
        let p_expect = [
            ["1", "1", "1", "q"],
            ["0", "1", "1", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "0", "1"],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(mult.p[i][j], q(p_expect[i][j]), "P entry ({i},{j})");
            }
        }
        // IM: 3_t <-> 0 and 3_s <-> 2
        let pairs = fam.im_label_pairs();
        assert!(pairs.contains(&("3_t".to_string(), "0".to_string())));
        assert!(pairs.contains(&("3_s".to_string(), "2".to_string())));
    }

    #[test]
    fn a2_regular_polynomials_are_subset_indicator() {
        let eng = Engine::new("A2", EMode::Lusztig).unwrap();
        let chi = eng.resolve_chi("2rho").unwrap();
        let (_, fam, mult) = eng.analyze(chi).unwrap();
        assert_eq!(fam.len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let li = &fam.params[fam.elems[i].param].levi_roots;
                let lj = &fam.params[fam.elems[j].param].levi_roots;
                let included = li.iter().all(|a| lj.contains(a));
                let expect = if included { IntPoly::one() } else { IntPoly::zero() };
                assert_eq!(mult.p[i][j], expect, "entry ({i},{j})");
            }
        }
    }
}

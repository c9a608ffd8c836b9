//! The orbit parameter set E(chi): semisimple points s with their Levi root
//! sets, the two parabolics, dimensions, and display metadata.

use crate::chevalley::ChevalleyBasis;
use crate::kspace::GradedContext;
use crate::nilpotent::{middle_element_test, saturation_label, wdd_enumerate};
use crate::rootsys::{rat, Rat, RootSystem, Subsystem, WeylGroup};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("character is not a dominant middle element of the system")]
    NotMiddleElement,
    #[error("the open orbit is not the unique maximal one")]
    NoUniqueOpenOrbit,
}

#[derive(Clone, Debug)]
pub struct OrbitParam {
    /// Canonical representative of s modulo the chi-stabilizer.
    pub s: Vec<Rat>,
    pub levi_roots: Vec<usize>,
    pub u_plus_roots: Vec<usize>,
    pub u_minus_roots: Vec<usize>,
    pub dim: i64,
    pub label: String,
    pub is_open: bool,
    pub is_zero: bool,
    pub saturation: Option<String>,
    pub component: Option<String>,
}

/// Canonical representative of `s` modulo the stabilizer of chi: the orbit
/// point dominant for the stabilizer chamber, lexicographically least.
fn canonical_s(ctx: &GradedContext, s: &[Rat]) -> Vec<Rat> {
    let rs = &ctx.rs;
    let wg = &ctx.wg;
    let gens: Vec<u32> = ctx
        .r0
        .iter()
        .filter(|&&a| rs.positive[a])
        .map(|&a| wg.reflection(rs, a))
        .collect();
    let mut orbit: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut frontier = vec![s.to_vec()];
    orbit.insert(s.to_vec());
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = wg.apply_vec(rs, g, &x);
            if orbit.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let dominant: Vec<&Vec<Rat>> = orbit
        .iter()
        .filter(|x| {
            ctx.r0
                .iter()
                .filter(|&&a| rs.positive[a])
                .all(|&a| !rs.pairing(a, x).is_negative())
        })
        .collect();
    dominant
        .first()
        .map(|v| (*v).clone())
        .unwrap_or_else(|| orbit.iter().next().unwrap().clone())
}

fn build_param(ctx: &GradedContext, s: Vec<Rat>) -> OrbitParam {
    let rs = &ctx.rs;
    let d: Vec<Rat> = ctx.chi.iter().zip(&s).map(|(c, si)| c - si).collect();
    let mut levi = Vec::new();
    let mut u_plus = Vec::new();
    let mut u_minus = Vec::new();
    for &a in &ctx.sub.root_ids {
        let p = rs.pairing(a, &d);
        if p.is_zero() {
            levi.push(a);
        } else if p.is_negative() {
            u_plus.push(a);
        } else {
            u_minus.push(a);
        }
    }
    let dim = orbit_dim_from_parts(ctx, &levi, &u_plus, &u_minus);
    let is_open = u_plus.is_empty() && u_minus.is_empty();
    OrbitParam {
        s,
        levi_roots: levi,
        u_plus_roots: u_plus,
        u_minus_roots: u_minus,
        dim,
        label: String::new(),
        is_open,
        is_zero: dim == 0,
        saturation: None,
        component: None,
    }
}

/// Orbit dimension by root counts: dim p_2 - dim p_0 + dim g_0 with the
/// Cartan contributions cancelling. Checked against the mirrored grading.
fn orbit_dim_from_parts(
    ctx: &GradedContext,
    levi: &[usize],
    u_plus: &[usize],
    u_minus: &[usize],
) -> i64 {
    let rs = &ctx.rs;
    let count = |roots: &[usize], n: i64| -> i64 {
        let t = rat(n, 1);
        roots.iter().filter(|&&a| rs.pairing(a, &ctx.chi) == t).count() as i64
    };
    let r0 = ctx.r0.len() as i64;
    let plus_side = count(levi, 2) + count(u_plus, 2) - (count(levi, 0) + count(u_plus, 0)) + r0;
    let minus_side =
        count(levi, -2) + count(u_minus, -2) - (count(levi, 0) + count(u_minus, 0)) + r0;
    assert_eq!(plus_side, minus_side, "parabolic gradings disagree on dim");
    plus_side
}

pub fn orbit_dim(ctx: &GradedContext, o: &OrbitParam) -> i64 {
    orbit_dim_from_parts(ctx, &o.levi_roots, &o.u_plus_roots, &o.u_minus_roots)
}

/// All orbit parameters for the context, sorted by dimension (open last) and
/// labeled by dimension with disambiguating letters.
pub fn parameter_set(
    ctx: &GradedContext,
    cb: &ChevalleyBasis,
    seed: u64,
    retries: usize,
) -> Result<Vec<OrbitParam>, OrbitError> {
    let rs = &ctx.rs;
    let wg = &ctx.wg;
    if !ctx.sub.is_dominant(rs, &ctx.chi)
        || middle_element_test(rs, cb, &ctx.sub.root_ids, &ctx.chi, seed, retries).is_none()
    {
        return Err(OrbitError::NotMiddleElement);
    }

    // chi^{-1}-translates, indexed like the subgroup elements.
    let inv_points: Vec<Vec<Rat>> = ctx
        .sub
        .elems
        .iter()
        .map(|&w| wg.apply_vec(rs, wg.inv[w as usize], &ctx.chi))
        .collect();

    let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let k = ctx.sub.rank;
    for mask in 0u32..(1 << k) {
        let chosen: Vec<usize> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ctx.sub.simple_ids[i])
            .collect();
        let levi_roots = span_closure(rs, &ctx.sub.root_ids, &chosen);
        let levi = Subsystem::new(rs, wg, levi_roots);
        for h in wdd_enumerate(rs, cb, &levi, seed, retries) {
            let two = rat(2, 1);
            let supp: Vec<usize> = levi
                .root_ids
                .iter()
                .copied()
                .filter(|&a| rs.pairing(a, &h) == two)
                .collect();
            if supp.is_empty() {
                found.insert(canonical_s(ctx, &vec![Rat::zero(); rs.dim]));
                continue;
            }
            for (pos, &w) in ctx.sub.elems.iter().enumerate() {
                let lambda = &inv_points[pos];
                if supp.iter().all(|&a| rs.pairing(a, lambda) == two) {
                    let s = wg.apply_vec(rs, w, &h);
                    found.insert(canonical_s(ctx, &s));
                }
            }
        }
    }

    let mut params: Vec<OrbitParam> = found.into_iter().map(|s| build_param(ctx, s)).collect();
    params.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.s.cmp(&b.s)));

    // The open orbit is the unique maximal one.
    let open_count = params.iter().filter(|p| p.is_open).count();
    let last = params.last().ok_or(OrbitError::NoUniqueOpenOrbit)?;
    if open_count != 1 || !last.is_open {
        return Err(OrbitError::NoUniqueOpenOrbit);
    }
    if params.len() > 1 && params[params.len() - 2].dim == last.dim {
        return Err(OrbitError::NoUniqueOpenOrbit);
    }
    debug_assert!(params[0].dim == 0);

    // Labels: dimension plus a, b, ... for ties.
    let mut i = 0;
    while i < params.len() {
        let j = (i..params.len())
            .take_while(|&j| params[j].dim == params[i].dim)
            .last()
            .unwrap()
            + 1;
        for (off, p) in params[i..j].iter_mut().enumerate() {
            p.label = if j - i == 1 {
                format!("{}", p.dim)
            } else {
                format!("{}{}", p.dim, (b'a' + off as u8) as char)
            };
        }
        i = j;
    }
    Ok(params)
}

/// Roots of the subsystem lying in the rational span of the chosen roots.
fn span_closure(rs: &RootSystem, ambient: &[usize], chosen: &[usize]) -> Vec<usize> {
    if chosen.is_empty() {
        return Vec::new();
    }
    // Row-reduce the chosen vectors once, then test membership by reduction.
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for &a in chosen {
        let mut v = rs.roots[a].clone();
        reduce_against(&mut v, &basis);
        if !v.iter().all(|x| x.is_zero()) {
            normalize_lead(&mut v);
            basis.push(v);
        }
    }
    ambient
        .iter()
        .copied()
        .filter(|&a| {
            let mut v = rs.roots[a].clone();
            reduce_against(&mut v, &basis);
            v.iter().all(|x| x.is_zero())
        })
        .collect()
}

fn reduce_against(v: &mut Vec<Rat>, basis: &[Vec<Rat>]) {
    for b in basis {
        let lead = b.iter().position(|x| !x.is_zero()).unwrap();
        if !v[lead].is_zero() {
            let f = v[lead].clone();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = &*vi - &(&f * bi);
            }
        }
    }
}

fn normalize_lead(v: &mut [Rat]) {
    let lead = v.iter().position(|x| !x.is_zero()).unwrap();
    let f = v[lead].clone();
    for x in v.iter_mut() {
        *x = &*x / &f;
    }
}

/// Fill in display metadata: the ambient saturation of the orbit and the
/// component-group label. `block_size` is the number of local systems the
/// basis construction attaches to the orbit.
pub fn decorate(
    rs: &RootSystem,
    wg: &WeylGroup,
    full: &Subsystem,
    o: &mut OrbitParam,
    block_size: usize,
) {
    o.saturation = saturation_label(rs, wg, full, &o.s);
    o.component = match (o.saturation.as_deref(), o.is_open, block_size) {
        (Some("F4(a3)"), true, _) => Some("S4".to_string()),
        (Some("G2(a1)"), true, _) => Some("S3".to_string()),
        (_, _, 1) => Some("1".to_string()),
        (_, _, 2) => Some("Z/2Z".to_string()),
        _ => None,
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kspace::EMode;
    use crate::rootsys::rat_vec;
    use std::rc::Rc;

    fn full_ctx(label: &str, chi: Vec<Rat>) -> (Rc<GradedContext>, ChevalleyBasis) {
        let rs = Rc::new(RootSystem::build(label).unwrap());
        let wg = Rc::new(WeylGroup::enumerate(&rs, 2_000_000).unwrap());
        let cb = ChevalleyBasis::structure_constants(&rs);
        let sub = Subsystem::new(&rs, &wg, (0..rs.num_roots()).collect());
        (GradedContext::new(rs, wg, sub, chi, EMode::Lusztig), cb)
    }

    #[test]
    fn sp4_has_three_orbits() {
        let (ctx, cb) = full_ctx("C2", rat_vec(&[1, 1]));
        let params = parameter_set(&ctx, &cb, 0, 5).unwrap();
        let dims: Vec<i64> = params.iter().map(|p| p.dim).collect();
        assert_eq!(dims, vec![0, 2, 3]);
        assert!(params[2].is_open);
        assert!(params[0].is_zero);
        // s values match the table up to the stabilizer
        assert_eq!(canonical_s(&ctx, &rat_vec(&[0, 1])), params[1].s);
    }

    #[test]
    fn regular_orbits_are_subsets_of_simples() {
        for label in ["A2", "C2"] {
            let rs = RootSystem::build(label).unwrap();
            let chi = rs.two_rho_check();
            let (ctx, cb) = full_ctx(label, chi);
            let params = parameter_set(&ctx, &cb, 0, 5).unwrap();
            assert_eq!(params.len(), 4);
        }
    }

    #[test]
    fn rejects_non_middle_character() {
        let (ctx, cb) = full_ctx("A2", rat_vec(&[1, 1, -2]));
        assert!(parameter_set(&ctx, &cb, 0, 5).is_err());
    }

    #[test]
    fn gl4_zelevinsky_orbits() {
        let (ctx, cb) = full_ctx("A3", rat_vec(&[2, 0, 0, -2]));
        let params = parameter_set(&ctx, &cb, 0, 5).unwrap();
        let dims: Vec<i64> = params.iter().map(|p| p.dim).collect();
        assert_eq!(dims, vec![0, 2, 2, 3, 4]);
        let labels: Vec<&str> = params.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, vec!["0", "2a", "2b", "3", "4"]);
    }

    #[test]
    fn three_way_partition_and_levi_negation() {
        let (ctx, cb) = full_ctx("C3", rat_vec(&[3, 1, 1]));
        let params = parameter_set(&ctx, &cb, 0, 5).unwrap();
        assert_eq!(params.len(), 8);
        for p in &params {
            assert_eq!(
                p.levi_roots.len() + p.u_plus_roots.len() + p.u_minus_roots.len(),
                ctx.sub.root_ids.len()
            );
            for &a in &p.levi_roots {
                assert!(p.levi_roots.contains(&ctx.rs.neg_of[a]));
            }
        }
        let dims: Vec<i64> = params.iter().map(|p| p.dim).collect();
        assert_eq!(dims, vec![0, 2, 2, 3, 3, 4, 4, 5]);
    }
}

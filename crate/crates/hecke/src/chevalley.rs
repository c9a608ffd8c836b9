//! Chevalley basis structure constants via extraspecial pairs.
//!
//! Signs are fixed by choosing +(p+1) on every extraspecial pair for the
//! total order (height, then coordinate-lexicographic) on positive roots;
//! all remaining constants follow from the Jacobi identity and the cyclic
//! relation for root triples summing to zero. Downstream computations are
//! sign-convention independent.

use crate::rootsys::{dot, Rat, RootSystem};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

pub struct ChevalleyBasis {
    /// N[(a, b)] for root index pairs with a+b a root.
    n_table: HashMap<(usize, usize), i64>,
    /// Position of each positive root in the (height, lex) total order.
    order: HashMap<usize, usize>,
    heights: Vec<i64>,
}

/// A Lie algebra element as a Cartan part plus root-vector terms.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement {
    pub cartan: Vec<Rat>,
    pub terms: BTreeMap<usize, Rat>,
}

impl LieElement {
    pub fn zero(dim: usize) -> Self {
        LieElement {
            cartan: vec![Rat::zero(); dim],
            terms: BTreeMap::new(),
        }
    }

    pub fn cartan(h: Vec<Rat>) -> Self {
        LieElement {
            cartan: h,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(dim: usize, terms: Vec<(usize, Rat)>) -> Self {
        let mut t = BTreeMap::new();
        for (root, c) in terms {
            if !c.is_zero() {
                t.insert(root, c);
            }
        }
        LieElement {
            cartan: vec![Rat::zero(); dim],
            terms: t,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cartan.iter().all(|c| c.is_zero()) && self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LieElement {
            cartan: self.cartan.iter().map(|x| x * c).collect(),
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(&k, v)| (k, v * c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &LieElement) -> Self {
        let mut cartan = self.cartan.clone();
        for (a, b) in cartan.iter_mut().zip(&other.cartan) {
            *a -= b;
        }
        let mut terms = self.terms.clone();
        for (&k, v) in &other.terms {
            let e = terms.entry(k).or_insert_with(Rat::zero);
            *e -= v;
            if e.is_zero() {
                terms.remove(&k);
            }
        }
        LieElement { cartan, terms }
    }
}

/// The middle-element data of an sl2 triple (e, h, f) inside a subsystem.
#[derive(Clone, Debug)]
pub struct LieTriple {
    pub e: LieElement,
    pub h: Vec<Rat>,
    pub f: LieElement,
}

impl ChevalleyBasis {
    pub fn structure_constants(rs: &RootSystem) -> ChevalleyBasis {
        // Heights via the expansion in simple roots.
        let simple_vecs: Vec<&Vec<Rat>> = rs.simples.iter().map(|&s| &rs.roots[s]).collect();
        let gram: Vec<Vec<Rat>> = simple_vecs
            .iter()
            .map(|a| simple_vecs.iter().map(|b| dot(a, b)).collect())
            .collect();
        let heights: Vec<i64> = rs
            .roots
            .iter()
            .map(|r| {
                let rhs: Vec<Rat> = simple_vecs.iter().map(|s| dot(r, s)).collect();
                let coefs = crate::rootsys::solve_rational(&gram, &rhs);
                let h: Rat = coefs.iter().sum();
                assert!(h.is_integer());
                h.to_integer().try_into().unwrap()
            })
            .collect();

        let mut pos: Vec<usize> = (0..rs.num_roots()).filter(|&a| rs.positive[a]).collect();
        pos.sort_by(|&a, &b| {
            heights[a]
                .cmp(&heights[b])
                .then_with(|| rs.roots[a].cmp(&rs.roots[b]))
        });
        let order: HashMap<usize, usize> = pos.iter().enumerate().map(|(i, &a)| (a, i)).collect();

        let mut basis = ChevalleyBasis {
            n_table: HashMap::new(),
            order,
            heights,
        };
        // Populate eagerly so lookups stay immutable afterwards.
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                if rs.root_sum(a, b).is_some() {
                    let n = basis.compute_n(rs, a, b, 0);
                    basis.n_table.insert((a, b), n);
                }
            }
        }
        basis
    }

    /// N_{a,b} for roots a, b; zero when a+b is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        *self.n_table.get(&(a, b)).unwrap_or(&0)
    }

    pub fn height(&self, a: usize) -> i64 {
        self.heights[a]
    }

    /// Largest k with b - k a a root (the chain-down length).
    pub fn chain_down(&self, rs: &RootSystem, a: usize, b: usize) -> i64 {
        let mut p = 0i64;
        let mut cur = rs.roots[b].clone();
        loop {
            let next: Vec<Rat> = cur.iter().zip(&rs.roots[a]).map(|(x, y)| x - y).collect();
            match rs.root_index(&next) {
                Some(_) => {
                    p += 1;
                    cur = next;
                }
                None => return p,
            }
        }
    }

    fn extraspecial(&self, rs: &RootSystem, gamma: usize) -> (usize, usize) {
        let mut best: Option<usize> = None;
        for a in 0..rs.num_roots() {
            if !rs.positive[a] || a == gamma {
                continue;
            }
            let rest: Vec<Rat> = rs.roots[gamma]
                .iter()
                .zip(&rs.roots[a])
                .map(|(g, x)| g - x)
                .collect();
            if let Some(b) = rs.root_index(&rest) {
                if rs.positive[b] && best.map_or(true, |c| self.order[&a] < self.order[&c]) {
                    best = Some(a);
                }
            }
        }
        let a = best.expect("non-simple positive root has a special decomposition");
        let rest: Vec<Rat> = rs.roots[gamma]
            .iter()
            .zip(&rs.roots[a])
            .map(|(g, x)| g - x)
            .collect();
        (a, rs.root_index(&rest).unwrap())
    }

    fn norm(&self, rs: &RootSystem, a: usize) -> Rat {
        dot(&rs.roots[a], &rs.roots[a])
    }

    fn compute_n(&mut self, rs: &RootSystem, a: usize, b: usize, depth: usize) -> i64 {
        assert!(depth < 64, "structure constant recursion too deep");
        if let Some(&n) = self.n_table.get(&(a, b)) {
            return n;
        }
        if rs.root_sum(a, b).is_none() {
            return 0;
        }
        let n = self.compute_n_inner(rs, a, b, depth);
        self.n_table.insert((a, b), n);
        n
    }

    fn compute_n_inner(&mut self, rs: &RootSystem, a: usize, b: usize, depth: usize) -> i64 {
        let pos_a = rs.positive[a];
        let pos_b = rs.positive[b];
        if !pos_a && !pos_b {
            return -self.compute_n(rs, rs.neg_of[a], rs.neg_of[b], depth + 1);
        }
        if pos_a && pos_b {
            if self.order[&a] > self.order[&b] {
                return -self.compute_n(rs, b, a, depth + 1);
            }
            let gamma = rs.root_sum(a, b).unwrap();
            let (ea, eb) = self.extraspecial(rs, gamma);
            if (ea, eb) == (a, b) {
                return self.chain_down(rs, a, b) + 1;
            }
            // Jacobi identity on (X_ea, X_eb, X_{-b}) projected to X_a:
            //   N(ea,eb) N(gamma,-b) + N(eb,-b) N(eb-b,ea) + N(-b,ea) N(ea-b,eb) = 0
            let mut rhs = 0i64;
            if rs.root_sum(eb, rs.neg_of[b]).is_some() {
                let d = rs.root_sum(eb, rs.neg_of[b]).unwrap();
                rhs += self.compute_n(rs, eb, rs.neg_of[b], depth + 1) * self.compute_n(rs, d, ea, depth + 1);
            }
            if rs.root_sum(rs.neg_of[b], ea).is_some() {
                let d = rs.root_sum(rs.neg_of[b], ea).unwrap();
                rhs += self.compute_n(rs, rs.neg_of[b], ea, depth + 1) * self.compute_n(rs, d, eb, depth + 1);
            }
            let n_extra = self.compute_n(rs, ea, eb, depth + 1);
            let n_gamma_negb = -rhs / n_extra;
            assert_eq!(n_gamma_negb * n_extra, -rhs, "inexact sign recursion");
            // Cyclic relation on (gamma, -b, -a): N(a,b) = N(gamma,-b) (gamma,gamma)/(a,a).
            let ratio = self.norm(rs, gamma) / self.norm(rs, a);
            let val = Rat::from_integer(n_gamma_negb.into()) * ratio;
            assert!(val.is_integer());
            return i64::try_from(val.to_integer()).unwrap();
        }
        // Mixed signs: canonicalize to (positive, negative).
        if !pos_a && pos_b {
            return -self.compute_n(rs, b, a, depth + 1);
        }
        let d = rs.neg_of[b];
        // a positive, b = -d with d positive, a - d a root.
        let phi = rs.root_sum(a, b).unwrap();
        if rs.positive[phi] {
            // N(a,-d) = -N(d,phi) (phi,phi)/(a,a)
            let val = Rat::from_integer((-self.compute_n(rs, d, phi, depth + 1)).into())
                * (self.norm(rs, phi) / self.norm(rs, a));
            assert!(val.is_integer());
            i64::try_from(val.to_integer()).unwrap()
        } else {
            // N(a,-d) = N(d,-a) = -N(a,psi) (psi,psi)/(d,d) with psi = d-a.
            let psi = rs.neg_of[phi];
            let val = Rat::from_integer((-self.compute_n(rs, a, psi, depth + 1)).into())
                * (self.norm(rs, psi) / self.norm(rs, d));
            assert!(val.is_integer());
            i64::try_from(val.to_integer()).unwrap()
        }
    }

    /// Lie bracket of sparse elements.
    pub fn bracket(&self, rs: &RootSystem, x: &LieElement, y: &LieElement) -> LieElement {
        let dim = rs.dim;
        let mut out = LieElement::zero(dim);
        // [h, X_b] terms
        for (&b, c) in &y.terms {
            let coef = rs.pairing(b, &x.cartan) * c;
            if !coef.is_zero() {
                let e = out.terms.entry(b).or_insert_with(Rat::zero);
                *e += coef;
            }
        }
        for (&a, c) in &x.terms {
            let coef = rs.pairing(a, &y.cartan) * c;
            if !coef.is_zero() {
                let e = out.terms.entry(a).or_insert_with(Rat::zero);
                *e -= coef;
            }
        }
        // [X_a, X_b] terms
        for (&a, ca) in &x.terms {
            for (&b, cb) in &y.terms {
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                if rs.neg_of[a] == b {
                    // [X_a, X_{-a}] = coroot(a)
                    for (o, h) in out.cartan.iter_mut().zip(&rs.coroots[a]) {
                        *o += &c * h;
                    }
                } else if let Some(g) = rs.root_sum(a, b) {
                    let n = self.n(a, b);
                    if n != 0 {
                        let e = out.terms.entry(g).or_insert_with(Rat::zero);
                        *e += c * Rat::from_integer(n.into());
                    }
                }
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }
}

impl LieTriple {
    /// Check [h,e] = 2e, [h,f] = -2f, [e,f] = h exactly.
    pub fn verify(&self, rs: &RootSystem, cb: &ChevalleyBasis) -> bool {
        let h_el = LieElement::cartan(self.h.clone());
        let he = cb.bracket(rs, &h_el, &self.e);
        let hf = cb.bracket(rs, &h_el, &self.f);
        let ef = cb.bracket(rs, &self.e, &self.f);
        he == self.e.scale(&crate::rootsys::rat(2, 1))
            && hf == self.f.scale(&crate::rootsys::rat(-2, 1))
            && ef == LieElement::cartan(self.h.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::rat;

    fn jacobi_holds(rs: &RootSystem, cb: &ChevalleyBasis) -> bool {
        // All triples of basis root vectors.
        let n = rs.num_roots();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let xa = LieElement::from_terms(rs.dim, vec![(a, rat(1, 1))]);
                    let xb = LieElement::from_terms(rs.dim, vec![(b, rat(1, 1))]);
                    let xc = LieElement::from_terms(rs.dim, vec![(c, rat(1, 1))]);
                    let t1 = cb.bracket(rs, &cb.bracket(rs, &xa, &xb), &xc);
                    let t2 = cb.bracket(rs, &cb.bracket(rs, &xb, &xc), &xa);
                    let t3 = cb.bracket(rs, &cb.bracket(rs, &xc, &xa), &xb);
                    let sum = t1.sub(&t2.scale(&rat(-1, 1))).sub(&t3.scale(&rat(-1, 1)));
                    if !sum.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn a2_constants() {
        let rs = RootSystem::build("A2").unwrap();
        let cb = ChevalleyBasis::structure_constants(&rs);
        let a = rs.simples[0];
        let b = rs.simples[1];
        assert_eq!(cb.n(a, b).abs(), 1);
        assert_eq!(cb.n(a, b), -cb.n(b, a));
        // pairs that do not sum to a root bracket to zero
        assert_eq!(cb.n(a, a), 0);
        assert!(jacobi_holds(&rs, &cb));
    }

    #[test]
    fn antisymmetry_and_chain_bounds() {
        for label in ["A2", "C2", "B2", "G2"] {
            let rs = RootSystem::build(label).unwrap();
            let cb = ChevalleyBasis::structure_constants(&rs);
            for a in 0..rs.num_roots() {
                for b in 0..rs.num_roots() {
                    if rs.root_sum(a, b).is_some() {
                        assert_eq!(cb.n(a, b), -cb.n(b, a));
                        assert_eq!(cb.n(a, b).abs(), cb.chain_down(&rs, a, b) + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn g2_has_constant_three() {
        let rs = RootSystem::build("G2").unwrap();
        let cb = ChevalleyBasis::structure_constants(&rs);
        let max = (0..rs.num_roots())
            .flat_map(|a| (0..rs.num_roots()).map(move |b| (a, b)))
            .map(|(a, b)| cb.n(a, b).abs())
            .max()
            .unwrap();
        assert_eq!(max, 3);
        assert!(jacobi_holds(&rs, &cb));
    }

    #[test]
    fn c2_jacobi() {
        let rs = RootSystem::build("C2").unwrap();
        let cb = ChevalleyBasis::structure_constants(&rs);
        assert!(jacobi_holds(&rs, &cb));
    }
}

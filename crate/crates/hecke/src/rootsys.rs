//! Root systems in the explicit epsilon coordinates used by the tables, Weyl
//! groups as root permutations, and subsystem (Levi) machinery.
//!
//! Characters live in the ambient Cartan and pair with roots through the
//! standard dot product; coroots are `2a/(a,a)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(coords: &[i64]) -> Vec<Rat> {
    coords.iter().map(|&c| rat(c, 1)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Render a rational vector as `a,b,c` with fractions like `5/2`.
pub fn vec_display(a: &[Rat]) -> String {
    a.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// An element of the ambient Cartan, identified with its pairing functional.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterVector(pub Vec<Rat>);

impl CharacterVector {
    pub fn parse(s: &str) -> Result<Self, RootSystemError> {
        let coords: Result<Vec<Rat>, _> = s
            .split(',')
            .map(|t| t.trim().parse::<Rat>().map_err(|_| RootSystemError::BadCharacter(s.to_string())))
            .collect();
        Ok(CharacterVector(coords?))
    }
}

impl fmt::Debug for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", vec_display(&self.0))
    }
}

#[derive(Debug, Error)]
pub enum RootSystemError {
    #[error("unsupported Cartan type: {0}")]
    UnsupportedType(String),
    #[error("bad character vector: {0}")]
    BadCharacter(String),
    #[error("character dimension {got} does not match ambient dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("Weyl group size bound {0} exceeded")]
    SizeBound(usize),
}

pub struct RootSystem {
    pub label: String,
    pub factors: Vec<(char, usize)>,
    pub dim: usize,
    pub rank: usize,
    pub roots: Vec<Vec<Rat>>,
    pub coroots: Vec<Vec<Rat>>,
    pub positive: Vec<bool>,
    pub neg_of: Vec<usize>,
    /// Indices of the simple roots, in the conventional numbering per factor.
    pub simples: Vec<usize>,
    index: BTreeMap<Vec<Rat>, usize>,
}

impl RootSystem {
    pub fn build(label: &str) -> Result<RootSystem, RootSystemError> {
        let mut factors = Vec::new();
        for part in label.split(['x', 'X']) {
            let part = part.trim();
            if part.is_empty() {
                return Err(RootSystemError::UnsupportedType(label.to_string()));
            }
            let letter = part.chars().next().unwrap().to_ascii_uppercase();
            let n: usize = part[1..]
                .parse()
                .map_err(|_| RootSystemError::UnsupportedType(label.to_string()))?;
            let ok = match letter {
                'A' | 'B' | 'C' => n >= 1,
                'D' => n >= 2,
                'G' => n == 2,
                'F' => n == 4,
                _ => false,
            };
            if !ok {
                return Err(RootSystemError::UnsupportedType(label.to_string()));
            }
            factors.push((letter, n));
        }

        let mut simple_vecs: Vec<Vec<i64>> = Vec::new();
        let mut dim = 0usize;
        let mut widths = Vec::new();
        for &(letter, n) in &factors {
            let w = match letter {
                'A' => n + 1,
                'B' | 'C' | 'D' => n,
                'G' => 3,
                'F' => 4,
                _ => unreachable!(),
            };
            widths.push(w);
            dim += w;
        }
        let mut offset = 0usize;
        for (fi, &(letter, n)) in factors.iter().enumerate() {
            let w = widths[fi];
            let mut push = |coords: Vec<(usize, i64)>| {
                let mut v = vec![0i64; dim];
                for (i, c) in coords {
                    v[offset + i] = c;
                }
                simple_vecs.push(v);
            };
            match letter {
                'A' => {
                    for i in 0..n {
                        push(vec![(i, 1), (i + 1, -1)]);
                    }
                }
                'B' => {
                    for i in 0..n.saturating_sub(1) {
                        push(vec![(i, 1), (i + 1, -1)]);
                    }
                    push(vec![(n - 1, 1)]);
                }
                'C' => {
                    for i in 0..n.saturating_sub(1) {
                        push(vec![(i, 1), (i + 1, -1)]);
                    }
                    push(vec![(n - 1, 2)]);
                }
                'D' => {
                    for i in 0..n - 1 {
                        push(vec![(i, 1), (i + 1, -1)]);
                    }
                    push(vec![(n - 2, 1), (n - 1, 1)]);
                }
                'G' => {
                    push(vec![(0, 1), (1, -1)]);
                    push(vec![(0, -2), (1, 1), (2, 1)]);
                }
                'F' => {
                    push(vec![(0, 1), (1, -1), (2, -1), (3, -1)]);
                    push(vec![(3, 2)]);
                    push(vec![(2, 1), (3, -1)]);
                    push(vec![(1, 1), (2, -1)]);
                }
                _ => unreachable!(),
            }
            offset += w;
        }

        let simple_rats: Vec<Vec<Rat>> = simple_vecs
            .iter()
            .map(|v| v.iter().map(|&c| rat(c, 1)).collect())
            .collect();

        // Close the simple roots under simple reflections.
        let mut index: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
        let mut roots: Vec<Vec<Rat>> = Vec::new();
        for s in &simple_rats {
            if !index.contains_key(s) {
                index.insert(s.clone(), roots.len());
                roots.push(s.clone());
            }
        }
        let mut frontier: Vec<Vec<Rat>> = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in frontier {
                for alpha in &simple_rats {
                    let aa = dot(alpha, alpha);
                    let coef = dot(&beta, alpha) * rat(2, 1) / aa;
                    let image: Vec<Rat> = beta
                        .iter()
                        .zip(alpha)
                        .map(|(b, a)| b - &coef * a)
                        .collect();
                    if !index.contains_key(&image) {
                        index.insert(image.clone(), roots.len());
                        roots.push(image.clone());
                        next.push(image);
                    }
                    let neg = vec_neg(&beta);
                    if !index.contains_key(&neg) {
                        index.insert(neg.clone(), roots.len());
                        roots.push(neg.clone());
                        next.push(neg);
                    }
                }
            }
            frontier = next;
        }

        let rank = simple_rats.len();
        // A regular vector in the simple-root span decides positivity.
        let greg = {
            let gram: Vec<Vec<Rat>> = simple_rats
                .iter()
                .map(|a| simple_rats.iter().map(|b| dot(a, b)).collect())
                .collect();
            let coefs = solve_rational(&gram, &vec![Rat::one(); rank]);
            let mut g = vec![Rat::zero(); dim];
            for (c, s) in coefs.iter().zip(&simple_rats) {
                for (gi, si) in g.iter_mut().zip(s) {
                    *gi += c * si;
                }
            }
            g
        };
        let positive: Vec<bool> = roots.iter().map(|r| dot(r, &greg).is_positive()).collect();
        let coroots: Vec<Vec<Rat>> = roots
            .iter()
            .map(|r| {
                let rr = dot(r, r);
                r.iter().map(|c| c * rat(2, 1) / &rr).collect()
            })
            .collect();
        let neg_of: Vec<usize> = roots.iter().map(|r| index[&vec_neg(r)]).collect();
        let simples: Vec<usize> = simple_rats.iter().map(|s| index[s]).collect();

        Ok(RootSystem {
            label: label.to_string(),
            factors,
            dim,
            rank,
            roots,
            coroots,
            positive,
            neg_of,
            simples,
            index,
        })
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn root_index(&self, v: &[Rat]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Pairing of root `a` against a Cartan element.
    pub fn pairing(&self, a: usize, chi: &[Rat]) -> Rat {
        dot(&self.roots[a], chi)
    }

    /// Reflection s_a applied to a Cartan element: x - <a,x> a^.
    pub fn reflect_vec(&self, a: usize, x: &[Rat]) -> Vec<Rat> {
        let c = self.pairing(a, x);
        x.iter()
            .zip(&self.coroots[a])
            .map(|(xi, ci)| xi - &c * ci)
            .collect()
    }

    /// Index of s_a(b) for roots a, b.
    pub fn reflect_root(&self, a: usize, b: usize) -> usize {
        let c = dot(&self.roots[b], &self.coroots[a]);
        let image: Vec<Rat> = self.roots[b]
            .iter()
            .zip(&self.roots[a])
            .map(|(bi, ai)| bi - &c * ai)
            .collect();
        self.index[&image]
    }

    /// Index of a+b if it is a root.
    pub fn root_sum(&self, a: usize, b: usize) -> Option<usize> {
        self.root_index(&vec_add(&self.roots[a], &self.roots[b]))
    }

    /// Sum of the positive coroots, the regular character `2rho-check`.
    pub fn two_rho_check(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for (i, c) in self.coroots.iter().enumerate() {
            if self.positive[i] {
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi += ci;
                }
            }
        }
        v
    }

    /// Roots with pairing `n` against `chi`, within the given root set.
    pub fn r_n(&self, root_ids: &[usize], chi: &[Rat], n: i64) -> Vec<usize> {
        let target = rat(n, 1);
        root_ids
            .iter()
            .copied()
            .filter(|&a| self.pairing(a, chi) == target)
            .collect()
    }
}

/// Solve a small square rational system by Gaussian elimination.
pub fn solve_rational(m: &[Vec<Rat>], b: &[Rat]) -> Vec<Rat> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero()).expect("singular system");
        a.swap(col, p);
        let inv = a[col][col].clone();
        for j in col..=n {
            a[col][j] = &a[col][j] / &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let t = &a[col][j] * &f;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n].clone()).collect()
}

/// Basis of the rational nullspace of the (rows x cols) matrix.
pub fn nullspace_rational(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].clone();
        for j in 0..cols {
            a[r][j] = &a[r][j] / &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[ri][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// The Weyl group as permutations of the root list. Elements are enumerated
/// breadth-first with left multiplication by simple reflections, so ids are
/// stable and layer k holds the elements of length k.
pub struct WeylGroup {
    pub perms: Vec<Vec<u16>>,
    pub inv: Vec<u32>,
    pub length: Vec<u32>,
    /// Reduced word in simple-root indices; `w = s[w_0] s[w_1] ... s[w_k]`.
    pub words: Vec<Vec<u8>>,
    pub simple_elem: Vec<u32>,
    id_by_perm: HashMap<Vec<u16>, u32>,
}

impl WeylGroup {
    pub fn enumerate(rs: &RootSystem, bound: usize) -> Result<WeylGroup, RootSystemError> {
        let nr = rs.num_roots();
        let id_perm: Vec<u16> = (0..nr as u16).collect();
        let simple_perms: Vec<Vec<u16>> = rs
            .simples
            .iter()
            .map(|&s| (0..nr).map(|b| rs.reflect_root(s, b) as u16).collect())
            .collect();

        let mut perms = vec![id_perm.clone()];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut length = vec![0u32];
        let mut id_by_perm = HashMap::new();
        id_by_perm.insert(id_perm, 0u32);
        let mut frontier = vec![0u32];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for (i, sp) in simple_perms.iter().enumerate() {
                    // left multiplication: (s_i w)(x) = s_i(w(x))
                    let p: Vec<u16> = perms[w as usize].iter().map(|&x| sp[x as usize]).collect();
                    if !id_by_perm.contains_key(&p) {
                        let id = perms.len() as u32;
                        if perms.len() >= bound {
                            return Err(RootSystemError::SizeBound(bound));
                        }
                        id_by_perm.insert(p.clone(), id);
                        perms.push(p);
                        let mut word = vec![i as u8];
                        word.extend(&words[w as usize]);
                        words.push(word);
                        length.push(length[w as usize] + 1);
                        next.push(id);
                    }
                }
            }
            frontier = next;
        }
        let inv: Vec<u32> = perms
            .iter()
            .map(|p| {
                let mut q = vec![0u16; nr];
                for (i, &pi) in p.iter().enumerate() {
                    q[pi as usize] = i as u16;
                }
                id_by_perm[&q]
            })
            .collect();
        let simple_elem: Vec<u32> = simple_perms.iter().map(|p| id_by_perm[p]).collect();
        Ok(WeylGroup {
            perms,
            inv,
            length,
            words,
            simple_elem,
            id_by_perm,
        })
    }

    pub fn size(&self) -> usize {
        self.perms.len()
    }

    /// `(a b)(x) = a(b(x))`.
    pub fn compose(&self, a: u32, b: u32) -> u32 {
        let pa = &self.perms[a as usize];
        let pb = &self.perms[b as usize];
        let p: Vec<u16> = pb.iter().map(|&x| pa[x as usize]).collect();
        self.id_by_perm[&p]
    }

    pub fn apply_root(&self, w: u32, root: usize) -> usize {
        self.perms[w as usize][root] as usize
    }

    /// Apply `w` to a Cartan element through its reduced word.
    pub fn apply_vec(&self, rs: &RootSystem, w: u32, x: &[Rat]) -> Vec<Rat> {
        let mut v = x.to_vec();
        for &i in self.words[w as usize].iter().rev() {
            v = rs.reflect_vec(rs.simples[i as usize], &v);
        }
        v
    }

    /// Element id of the reflection in the given root.
    pub fn reflection(&self, rs: &RootSystem, root: usize) -> u32 {
        let p: Vec<u16> = (0..rs.num_roots())
            .map(|b| rs.reflect_root(root, b) as u16)
            .collect();
        self.id_by_perm[&p]
    }
}

/// A root subsystem with the positive system inherited from the ambient one,
/// an internally computed simple system, and its reflection subgroup.
pub struct Subsystem {
    pub root_ids: Vec<usize>,
    pub pos_ids: Vec<usize>,
    pub simple_ids: Vec<usize>,
    pub rank: usize,
    /// Subgroup elements (ambient ids), breadth-first by subsystem length.
    pub elems: Vec<u32>,
    pub sub_length: Vec<u32>,
    pub elem_pos: HashMap<u32, u32>,
    pub w0: u32,
}

impl Subsystem {
    pub fn new(rs: &RootSystem, wg: &WeylGroup, mut root_ids: Vec<usize>) -> Subsystem {
        root_ids.sort_unstable();
        root_ids.dedup();
        let pos_ids: Vec<usize> = root_ids.iter().copied().filter(|&a| rs.positive[a]).collect();
        // Simples: positive roots that are not sums of two positive roots.
        let mut simple_ids = Vec::new();
        'outer: for &a in &pos_ids {
            for &b in &pos_ids {
                for &c in &pos_ids {
                    if b <= c && rs.root_sum(b, c) == Some(a) {
                        continue 'outer;
                    }
                }
            }
            simple_ids.push(a);
        }
        let rank = simple_ids.len();

        let gens: Vec<u32> = simple_ids.iter().map(|&a| wg.reflection(rs, a)).collect();
        let mut elems = vec![0u32];
        let mut sub_length = vec![0u32];
        let mut elem_pos = HashMap::new();
        elem_pos.insert(0u32, 0u32);
        let mut frontier = vec![0u32];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for &g in &gens {
                    let e = wg.compose(g, w);
                    if !elem_pos.contains_key(&e) {
                        elem_pos.insert(e, elems.len() as u32);
                        sub_length.push(sub_length[elem_pos[&w] as usize] + 1);
                        elems.push(e);
                        next.push(e);
                    }
                }
            }
            frontier = next;
        }
        let w0 = *elems.last().unwrap();
        debug_assert!(pos_ids.iter().all(|&a| !rs.positive[wg.apply_root(w0, a)]));
        Subsystem {
            root_ids,
            pos_ids,
            simple_ids,
            rank,
            elems,
            sub_length,
            elem_pos,
            w0,
        }
    }

    pub fn contains_root(&self, a: usize) -> bool {
        self.root_ids.binary_search(&a).is_ok()
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    /// Minimal-length subgroup element making `x` dominant for the subsystem
    /// simples, applying the lowest-index negative simple first.
    /// Returns (dominant vector, element id).
    pub fn to_dominant(&self, rs: &RootSystem, wg: &WeylGroup, x: &[Rat]) -> (Vec<Rat>, u32) {
        let mut v = x.to_vec();
        let mut w = 0u32;
        loop {
            let neg = self
                .simple_ids
                .iter()
                .position(|&a| rs.pairing(a, &v).is_negative());
            match neg {
                None => return (v, w),
                Some(i) => {
                    let a = self.simple_ids[i];
                    v = rs.reflect_vec(a, &v);
                    w = wg.compose(wg.reflection(rs, a), w);
                }
            }
        }
    }

    pub fn is_dominant(&self, rs: &RootSystem, x: &[Rat]) -> bool {
        self.simple_ids.iter().all(|&a| !rs.pairing(a, x).is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_roots_and_weyl() {
        let rs = RootSystem::build("A2").unwrap();
        assert_eq!(rs.num_roots(), 6);
        assert_eq!(rs.roots[rs.simples[0]], rat_vec(&[1, -1, 0]));
        assert_eq!(rs.roots[rs.simples[1]], rat_vec(&[0, 1, -1]));
        let wg = WeylGroup::enumerate(&rs, 100_000).unwrap();
        assert_eq!(wg.size(), 6);
        assert_eq!(rs.two_rho_check(), rat_vec(&[2, 0, -2]));
    }

    #[test]
    fn a1_weyl_has_two_elements() {
        let rs = RootSystem::build("A1").unwrap();
        let wg = WeylGroup::enumerate(&rs, 100).unwrap();
        assert_eq!(wg.size(), 2);
    }

    #[test]
    fn c2_simples() {
        let rs = RootSystem::build("C2").unwrap();
        assert_eq!(rs.roots[rs.simples[0]], rat_vec(&[1, -1]));
        assert_eq!(rs.roots[rs.simples[1]], rat_vec(&[0, 2]));
        assert_eq!(rs.num_roots(), 8);
    }

    #[test]
    fn f4_counts() {
        let rs = RootSystem::build("F4").unwrap();
        assert_eq!(rs.num_roots(), 48);
        assert_eq!(rs.positive.iter().filter(|&&p| p).count(), 24);
        assert_eq!(rs.two_rho_check(), rat_vec(&[11, 5, 3, 1]));
        let wg = WeylGroup::enumerate(&rs, 100_000).unwrap();
        assert_eq!(wg.size(), 1152);
    }

    #[test]
    fn g2_counts() {
        let rs = RootSystem::build("G2").unwrap();
        assert_eq!(rs.num_roots(), 12);
        let wg = WeylGroup::enumerate(&rs, 100_000).unwrap();
        assert_eq!(wg.size(), 12);
    }

    #[test]
    fn products_parse() {
        let rs = RootSystem::build("A1xA1").unwrap();
        assert_eq!(rs.num_roots(), 4);
        assert_eq!(rs.dim, 4);
        let wg = WeylGroup::enumerate(&rs, 100).unwrap();
        assert_eq!(wg.size(), 4);
    }

    #[test]
    fn size_bound_respected() {
        let rs = RootSystem::build("F4").unwrap();
        assert!(matches!(
            WeylGroup::enumerate(&rs, 100),
            Err(RootSystemError::SizeBound(100))
        ));
    }

    #[test]
    fn to_dominant_recovers_orbit_point() {
        let rs = RootSystem::build("A2").unwrap();
        let wg = WeylGroup::enumerate(&rs, 100).unwrap();
        let sub = Subsystem::new(&rs, &wg, (0..rs.num_roots()).collect());
        let lam = rat_vec(&[-2, 0, 2]);
        let (dom, w) = sub.to_dominant(&rs, &wg, &lam);
        assert_eq!(dom, rat_vec(&[2, 0, -2]));
        assert_eq!(wg.apply_vec(&rs, w, &lam), dom);
        // dominant input: identity
        let (d2, w2) = sub.to_dominant(&rs, &wg, &rat_vec(&[2, 0, -2]));
        assert_eq!(w2, 0);
        assert_eq!(d2, rat_vec(&[2, 0, -2]));
    }

    #[test]
    fn weyl_composition_and_inverse() {
        let rs = RootSystem::build("C2").unwrap();
        let wg = WeylGroup::enumerate(&rs, 100).unwrap();
        for a in 0..wg.size() as u32 {
            let ia = wg.inv[a as usize];
            assert_eq!(wg.compose(a, ia), 0);
            for b in 0..wg.size() as u32 {
                let c = wg.compose(a, b);
                let x = rat_vec(&[3, 1]);
                assert_eq!(
                    wg.apply_vec(&rs, c, &x),
                    wg.apply_vec(&rs, a, &wg.apply_vec(&rs, b, &x))
                );
            }
        }
    }
}

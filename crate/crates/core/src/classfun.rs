//! Class functions on the finite quotients: characters of subgroups given by
//! tables or formulas, induction with cached transversals, conjugation,
//! restriction, inner products, irreducibility and depth tests.
//!
//! Inner products between induced characters always run over the smaller
//! inducing subgroup (Frobenius reciprocity) rather than the ambient group;
//! at the largest moduli in use the ambient quotient has ~10^7 elements while
//! inducing subgroups stay near 10^5.

use crate::errors::{Error, Result};
use crate::field::Field;
use crate::group::{level_generators, GroupElement, QuotientGroup, Shape};
use crate::local::{LocalElem, LocalField};
use crate::numeric::{abs, as_nonneg_int};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};
use num_complex::Complex64;

pub type C64 = Complex64;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

// ---------------------------------------------------------------------------
// Domains: enumerable element sets with membership.
// ---------------------------------------------------------------------------

/// How the elements of a product domain are recognized.
#[derive(Clone)]
pub enum Membership {
    /// `A = Z * S` for the shape `S` (holds for the normalizer-type groups
    /// once the torus part collapses into the center times the shape).
    SignedShape,
    /// Materialized element set.
    Hashed(Arc<HashSet<GroupElement>>),
}

/// A subgroup presented as a unique-factorization product: every element is
/// `reps[i] * shape_element` exactly once.
pub struct ProductDomain {
    pub reps: Vec<GroupElement>,
    pub shape: Shape,
    pub n: i32,
    pub membership: Membership,
}

/// An enumerable set of group elements at a fixed modulus.
#[derive(Clone)]
pub enum Domain {
    Full { n: i32 },
    Shaped { shape: Shape, n: i32 },
    Product(Arc<ProductDomain>),
    Listed { elems: Arc<Vec<GroupElement>>, n: i32 },
}

impl Domain {
    pub fn n(&self) -> i32 {
        match self {
            Domain::Full { n } => *n,
            Domain::Shaped { n, .. } => *n,
            Domain::Product(p) => p.n,
            Domain::Listed { n, .. } => *n,
        }
    }

    pub fn len(&self, q: u64) -> u64 {
        match self {
            Domain::Full { n } => QuotientGroup { n: *n, q }.order(),
            Domain::Shaped { shape, n } => shape.len(*n, q),
            Domain::Product(p) => p.reps.len() as u64 * p.shape.len(p.n, q),
            Domain::Listed { elems, .. } => elems.len() as u64,
        }
    }

    pub fn get(&self, i: u64, k: &LocalField) -> GroupElement {
        let q = k.q() as u64;
        match self {
            Domain::Full { n } => QuotientGroup { n: *n, q }.get(i, &k.field),
            Domain::Shaped { shape, n } => shape.get(i, *n, q, &k.field),
            Domain::Product(p) => {
                let s = p.shape.len(p.n, q);
                let rep = &p.reps[(i / s) as usize];
                rep.mul(&p.shape.get(i % s, p.n, q, &k.field), &k.field)
            }
            Domain::Listed { elems, .. } => elems[i as usize],
        }
    }

    pub fn contains(&self, g: &GroupElement, k: &LocalField) -> bool {
        match self {
            Domain::Full { n } => g.modulus() == *n,
            Domain::Shaped { shape, .. } => shape.contains(g, &k.field),
            Domain::Product(p) => match &p.membership {
                Membership::SignedShape => {
                    p.shape.contains(g, &k.field)
                        || p
                            .shape
                            .contains(&g.mul(&GroupElement::minus_identity(p.n, &k.field), &k.field), &k.field)
                }
                Membership::Hashed(set) => set.contains(g),
            },
            Domain::Listed { .. } => panic!("membership on listed domains needs a hash"),
        }
    }
}

/// Deterministic (chunked) sum of `f` over a domain.
pub fn sum_over<F>(domain: &Domain, k: &LocalField, f: F) -> C64
where
    F: Fn(&GroupElement) -> C64 + Sync,
{
    let len = domain.len(k.q() as u64);
    crate::parallel::sum_indexed(len, |i| f(&domain.get(i, k)))
}

// ---------------------------------------------------------------------------
// Characters of subgroups.
// ---------------------------------------------------------------------------

/// A character (or degree-scaled class function) on a subgroup, evaluated on
/// membership-checked elements.
pub trait SubValue: Send + Sync {
    fn modulus(&self) -> i32;
    fn degree(&self) -> f64;
    fn domain(&self) -> Domain;
    fn contains(&self, g: &GroupElement) -> bool;
    /// Value at `g`; only called for `g` in the support.
    fn eval_in(&self, g: &GroupElement) -> C64;
}

#[derive(Clone)]
pub struct SubChar(pub Arc<dyn SubValue>);

impl SubChar {
    pub fn eval(&self, g: &GroupElement) -> C64 {
        if self.0.contains(g) {
            self.0.eval_in(g)
        } else {
            ZERO
        }
    }
}

/// A stored table of character values on a materialized subgroup.
pub struct SupportTable {
    pub k: Arc<LocalField>,
    pub n: i32,
    pub elems: Arc<Vec<GroupElement>>,
    pub map: HashMap<GroupElement, C64>,
    pub deg: f64,
}

impl SubValue for SupportTable {
    fn modulus(&self) -> i32 {
        self.n
    }
    fn degree(&self) -> f64 {
        self.deg
    }
    fn domain(&self) -> Domain {
        Domain::Listed { elems: self.elems.clone(), n: self.n }
    }
    fn contains(&self, g: &GroupElement) -> bool {
        self.map.contains_key(g)
    }
    fn eval_in(&self, g: &GroupElement) -> C64 {
        self.map[g]
    }
}

impl SupportTable {
    pub fn from_pairs(k: Arc<LocalField>, n: i32, pairs: Vec<(GroupElement, C64)>) -> SupportTable {
        let mut map = HashMap::with_capacity(pairs.len());
        let mut elems = Vec::with_capacity(pairs.len());
        for (g, v) in pairs {
            if map.insert(g, v).is_none() {
                elems.push(g);
            }
        }
        let deg = map[&GroupElement::identity(n)].re;
        SupportTable { k, n, elems: Arc::new(elems), map, deg }
    }

    /// Pointwise product with another function (e.g. a linear twist).
    pub fn twisted<F: Fn(&GroupElement) -> C64>(&self, f: F) -> SupportTable {
        let pairs: Vec<_> = self.elems.iter().map(|g| (*g, self.map[g] * f(g))).collect();
        SupportTable::from_pairs(self.k.clone(), self.n, pairs)
    }

    /// The conjugated table `(f^m)(h) = f(m^{-1} h m)`, supported on the
    /// conjugated subgroup.
    pub fn conjugated(&self, map: &crate::group::ConjugationMap) -> Result<SupportTable> {
        let f = &self.k.field;
        let mut pairs = Vec::with_capacity(self.elems.len());
        for g in self.elems.iter() {
            let cg = map.apply(g, self.n, f)?;
            pairs.push((cg, self.map[g]));
        }
        Ok(SupportTable::from_pairs(self.k.clone(), self.n, pairs))
    }
}

/// A seed set for the multiplicative closure: elements with their prescribed
/// values and a label used in error reports.
pub struct SeedSet {
    pub label: String,
    pub pairs: Vec<(GroupElement, C64)>,
}

/// Extends the seed values to the subgroup generated by `gens` (all of which
/// must appear among the seeds), verifying multiplicativity on every derived
/// edge and the seeds' mutual consistency.  This is how characters like the
/// extension of a torus character by a Lie-algebra character are constructed:
/// a failure here means the two seed characters do not agree on overlaps.
pub fn close_character(
    k: &Arc<LocalField>,
    n: i32,
    seeds: &[SeedSet],
    gens: &[(GroupElement, C64)],
    expected_order: Option<u64>,
    tol: f64,
) -> Result<SupportTable> {
    let f = &k.field;
    let mut map: HashMap<GroupElement, C64> = HashMap::new();
    let mut order: Vec<GroupElement> = Vec::new();
    let mut insert = |map: &mut HashMap<GroupElement, C64>,
                      order: &mut Vec<GroupElement>,
                      g: GroupElement,
                      v: C64,
                      what: &str|
     -> Result<bool> {
        if let Some(old) = map.get(&g) {
            if !crate::numeric::close(*old, v, tol) {
                return Err(Error::Inconsistent(alloc::format!(
                    "{what}: element has value {old} but was rederived as {v}"
                )));
            }
            Ok(false)
        } else {
            map.insert(g, v);
            order.push(g);
            Ok(true)
        }
    };
    insert(&mut map, &mut order, GroupElement::identity(n), ONE, "identity")?;
    for s in seeds {
        for (g, v) in &s.pairs {
            insert(&mut map, &mut order, *g, *v, &s.label)?;
        }
    }
    let mut head = 0;
    while head < order.len() {
        let g = order[head];
        let vg = map[&g];
        head += 1;
        for (h, vh) in gens {
            let gh = g.mul(h, f);
            insert(&mut map, &mut order, gh, vg * *vh, "closure")?;
        }
    }
    if let Some(expect) = expected_order {
        if map.len() as u64 != expect {
            return Err(Error::Inconsistent(alloc::format!(
                "closure reached {} elements, expected {expect}",
                map.len()
            )));
        }
    }
    let pairs: Vec<_> = order.into_iter().map(|g| (g, map[&g])).collect();
    Ok(SupportTable::from_pairs(k.clone(), n, pairs))
}

/// Generators of a shape subgroup: elementary matrices at the entry levels
/// plus diagonal units (sufficient by the LDU factorization, since the
/// upper-left entry of a shape element is a unit).
pub fn shape_generators(shape: &Shape, n: i32, f: &Field) -> Vec<GroupElement> {
    let mut gens = Vec::new();
    let one = LocalElem::one(n);
    let zero = LocalElem::zero(0, n);
    for j in 0..n {
        for c in 1..f.q as u8 {
            let x = LocalElem::digit_at(c, j, n);
            if j >= shape.upper {
                gens.push(GroupElement { e: [one, x, zero, one] });
            }
            if j >= shape.lower {
                gens.push(GroupElement { e: [one, zero, x, one] });
            }
            let u = if j == 0 {
                if shape.diag > 0 {
                    continue;
                }
                LocalElem::scalar(c, n)
            } else {
                if j < shape.diag {
                    continue;
                }
                one.add(&x, f)
            };
            if u.coeff(0) != Some(0) && u != one {
                let ui = u.inverse(f).unwrap().reduce_mod(n).unwrap();
                gens.push(GroupElement { e: [u, zero, zero, ui] });
            }
        }
    }
    gens
}

// ---------------------------------------------------------------------------
// Induction.
// ---------------------------------------------------------------------------

/// An induced class function: `chi(g) = sum over cosets x of [x^-1 g x in H]
/// chi_H(x^-1 g x)`.
pub struct Induced {
    pub sub: SubChar,
    pub cosets: Vec<(GroupElement, GroupElement)>,
    pub ambient: Domain,
    pub k: Arc<LocalField>,
}

#[derive(Clone)]
pub enum ClassFun {
    /// Supported on a subgroup (zero outside); the support may be the whole
    /// group, e.g. for inflations.
    Sub(SubChar),
    Induced(Arc<Induced>),
}

impl ClassFun {
    pub fn eval(&self, g: &GroupElement) -> C64 {
        match self {
            ClassFun::Sub(s) => s.eval(g),
            ClassFun::Induced(ind) => {
                let f = &ind.k.field;
                let mut acc = ZERO;
                for (x, xi) in &ind.cosets {
                    let h = xi.mul(g, f).mul(x, f);
                    if ind.sub.0.contains(&h) {
                        acc += ind.sub.0.eval_in(&h);
                    }
                }
                acc
            }
        }
    }

    pub fn degree(&self) -> f64 {
        match self {
            ClassFun::Sub(s) => s.0.degree(),
            ClassFun::Induced(ind) => ind.cosets.len() as f64 * ind.sub.0.degree(),
        }
    }

    pub fn modulus(&self) -> i32 {
        match self {
            ClassFun::Sub(s) => s.0.modulus(),
            ClassFun::Induced(ind) => ind.ambient.n(),
        }
    }

    /// Rough per-point evaluation cost (for inner-product routing).
    pub fn eval_cost(&self) -> u64 {
        match self {
            ClassFun::Sub(_) => 1,
            ClassFun::Induced(ind) => ind.cosets.len() as u64,
        }
    }

    /// The inducing domain when this is an induced character.
    pub fn inducing_domain(&self) -> Option<Domain> {
        match self {
            ClassFun::Sub(_) => None,
            ClassFun::Induced(ind) => Some(ind.sub.0.domain()),
        }
    }
}

/// Left transversal of the subgroup (given by membership and order) inside
/// the group generated by `gens`; BFS over coset representatives.
pub fn left_transversal(
    k: &LocalField,
    sub_contains: &dyn Fn(&GroupElement) -> bool,
    index: u64,
    gens: &[GroupElement],
    n: i32,
) -> Result<Vec<(GroupElement, GroupElement)>> {
    let f = &k.field;
    let mut reps: Vec<(GroupElement, GroupElement)> = Vec::with_capacity(index as usize);
    reps.push((GroupElement::identity(n), GroupElement::identity(n)));
    let mut head = 0;
    while head < reps.len() {
        let (r, _) = reps[head];
        head += 1;
        for h in gens {
            let c = h.mul(&r, f);
            let ci = c.inverse(f);
            // new coset iff c not in any existing xH, i.e. x^-1 c not in H
            let mut fresh = true;
            for (_, xi) in &reps {
                if sub_contains(&xi.mul(&c, f)) {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                reps.push((c, ci));
                if reps.len() as u64 > index {
                    return Err(Error::Domain(
                        "transversal exceeded the index; wrong subgroup order".into(),
                    ));
                }
            }
        }
    }
    if reps.len() as u64 != index {
        return Err(Error::Domain(alloc::format!(
            "transversal found {} cosets, index is {index} (generators incomplete?)",
            reps.len()
        )));
    }
    Ok(reps)
}

/// Induces a subgroup character to an ambient domain (the full quotient or a
/// shape subgroup).
pub fn induce(sub: SubChar, ambient: Domain, k: &Arc<LocalField>) -> Result<ClassFun> {
    let q = k.q() as u64;
    let n = ambient.n();
    let sub_len = sub.0.domain().len(q);
    let amb_len = ambient.len(q);
    if amb_len % sub_len != 0 {
        return Err(Error::Domain(alloc::format!(
            "subgroup order {sub_len} does not divide ambient order {amb_len}"
        )));
    }
    let index = amb_len / sub_len;
    let gens = match &ambient {
        Domain::Full { n } => level_generators(0, *n, &k.field),
        Domain::Shaped { shape, n } => shape_generators(shape, *n, &k.field),
        _ => {
            return Err(Error::Domain(
                "induction target must be the full group or a shape".into(),
            ))
        }
    };
    let contains = |g: &GroupElement| sub.0.contains(g);
    let cosets = left_transversal(k, &contains, index, &gens, n)?;
    Ok(ClassFun::Induced(Arc::new(Induced {
        sub,
        cosets,
        ambient,
        k: k.clone(),
    })))
}

// ---------------------------------------------------------------------------
// Inner products, irreducibility, depth.
// ---------------------------------------------------------------------------

/// `(1/|D|) sum_{g in D} f1(g) conj(f2(g))`.
pub fn inner_product_over(domain: &Domain, f1: &ClassFun, f2: &ClassFun, k: &LocalField) -> C64 {
    let len = domain.len(k.q() as u64);
    let s = crate::parallel::sum_indexed(len, |i| {
        let g = domain.get(i, k);
        f1.eval(&g) * f2.eval(&g).conj()
    });
    s / len as f64
}

/// Inner product of two class functions on their common ambient group,
/// routed through the cheapest available summation domain: the inducing
/// subgroup of either factor (Frobenius reciprocity) or the ambient itself.
pub fn inner_product(f1: &ClassFun, f2: &ClassFun, ambient: &Domain, k: &LocalField) -> C64 {
    let q = k.q() as u64;
    let c1 = f1.eval_cost();
    let c2 = f2.eval_cost();
    let mut best_cost = ambient.len(q).saturating_mul(c1 + c2);
    let mut route = 0u8;
    if let Some(d1) = f1.inducing_domain() {
        let cost = d1.len(q).saturating_mul(1 + c2);
        if cost < best_cost {
            best_cost = cost;
            route = 1;
        }
    }
    if let Some(d2) = f2.inducing_domain() {
        let cost = d2.len(q).saturating_mul(1 + c1);
        if cost < best_cost {
            route = 2;
        }
    }
    match (route, f1, f2) {
        (1, ClassFun::Induced(ind), _) => {
            let dom = ind.sub.0.domain();
            let len = dom.len(q);
            let s = crate::parallel::sum_indexed(len, |i| {
                let h = dom.get(i, k);
                ind.sub.0.eval_in(&h) * f2.eval(&h).conj()
            });
            s / len as f64
        }
        (2, _, ClassFun::Induced(ind)) => {
            let dom = ind.sub.0.domain();
            let len = dom.len(q);
            let s = crate::parallel::sum_indexed(len, |i| {
                let h = dom.get(i, k);
                ind.sub.0.eval_in(&h) * f1.eval(&h).conj()
            });
            (s / len as f64).conj()
        }
        _ => inner_product_over(ambient, f1, f2, k),
    }
}

/// Inner product asserted to be a non-negative integer (the intertwining
/// number of two genuine characters).
pub fn intertwining_number(
    f1: &ClassFun,
    f2: &ClassFun,
    ambient: &Domain,
    k: &LocalField,
    tol: f64,
) -> Result<u64> {
    as_nonneg_int(inner_product(f1, f2, ambient, k), tol)
}

pub fn is_irreducible(f: &ClassFun, ambient: &Domain, k: &LocalField, tol: f64) -> Result<bool> {
    Ok(intertwining_number(f, f, ambient, k, tol)? == 1)
}

/// Depth of a character of the quotient at modulus `N`: the least `m >= 0`
/// such that `K_{m+1}` lies in the kernel.  Kernel membership is checked on
/// the level generators (for a genuine character, `chi(g) = chi(1)` exactly
/// characterizes kernel elements, and the kernel is a subgroup).
pub fn depth_of(f: &ClassFun, k: &LocalField, tol: f64) -> Result<i32> {
    let n = f.modulus();
    let deg = f.degree();
    let scaled = tol * (1.0 + abs(deg));
    for m in 0..n {
        let gens = level_generators(m + 1, n, &k.field);
        let trivial = gens.iter().all(|g| {
            let v = f.eval(g);
            abs(v.re - deg) <= scaled && abs(v.im) <= scaled
        });
        if trivial {
            return Ok(m);
        }
    }
    Err(Error::Domain(
        "character is not trivial on the last congruence level; modulus too small".into(),
    ))
}

/// Materializes the restriction of a class function to a small domain.
pub fn restrict_to_table(f: &ClassFun, dom: &Domain, k: &Arc<LocalField>) -> SupportTable {
    let q = k.q() as u64;
    let pairs: Vec<(GroupElement, C64)> = crate::parallel::collect_indexed(dom.len(q), |i| {
        let g = dom.get(i, k);
        (g, f.eval(&g))
    });
    SupportTable::from_pairs(k.clone(), dom.n(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ConjugationMap;

    fn ctx(q: u32) -> Arc<LocalField> {
        Arc::new(LocalField::new(q).unwrap())
    }

    /// The trivial character of a shape subgroup.
    fn trivial_on(k: &Arc<LocalField>, shape: Shape, n: i32) -> SubChar {
        let q = k.q() as u64;
        let pairs: Vec<_> = (0..shape.len(n, q))
            .map(|i| (shape.get(i, n, q, &k.field), ONE))
            .collect();
        SubChar(Arc::new(SupportTable::from_pairs(k.clone(), n, pairs)))
    }

    /// The trivial character of the whole quotient group.
    fn trivial_full(k: &Arc<LocalField>, n: i32) -> SubChar {
        let dom = Domain::Full { n };
        let q = k.q() as u64;
        let pairs: Vec<_> = (0..dom.len(q)).map(|i| (dom.get(i, k), ONE)).collect();
        SubChar(Arc::new(SupportTable::from_pairs(k.clone(), n, pairs)))
    }

    #[test]
    fn induce_trivial() {
        // Ind of the trivial character of G itself is trivial.
        let k = ctx(3);
        let n = 1;
        let sub = trivial_full(&k, n);
        let ind = induce(sub, Domain::Full { n }, &k).unwrap();
        assert_eq!(ind.degree(), 1.0);
        let grp = QuotientGroup::new(n, 3);
        for i in 0..grp.len() {
            let g = grp.get(i, &k.field);
            assert!((ind.eval(&g) - ONE).norm() < 1e-9);
        }
        // <1,1> = 1.
        let ip = intertwining_number(&ind, &ind, &Domain::Full { n }, &k, 1e-6).unwrap();
        assert_eq!(ip, 1);
    }

    #[test]
    fn induced_degree_multiplies() {
        let k = ctx(3);
        let n = 2;
        let sub = trivial_on(&k, Shape::bkd(1), n);
        let ind = induce(sub, Domain::Full { n }, &k).unwrap();
        // [K : BK_1] = q + 1 = 4.
        assert_eq!(ind.degree(), 4.0);
        // Ind 1 from BK_1 contains the trivial character once.
        let triv = ClassFun::Sub(trivial_full(&k, n));
        let m = intertwining_number(&ind, &triv, &Domain::Full { n }, &k, 1e-6).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn closure_detects_conflicts() {
        let k = ctx(3);
        let n = 1;
        // Seeding the unipotent group with a non-character assignment fails.
        let u = Shape::unipotent_upper(n);
        let q = 3u64;
        let elems: Vec<_> = (0..u.len(n, q)).map(|i| u.get(i, n, q, &k.field)).collect();
        let bad: Vec<_> = elems
            .iter()
            .enumerate()
            .map(|(i, g)| (*g, if i == 1 { C64::new(-1.0, 0.0) } else { ONE }))
            .collect();
        let seeds = [SeedSet { label: "bad".into(), pairs: bad.clone() }];
        let res = close_character(&k, n, &seeds, &bad, Some(u.len(n, q)), 1e-9);
        assert!(res.is_err());
        // A genuine character closes fine: psi on the t^0 coefficient.
        let good: Vec<_> = elems
            .iter()
            .map(|g| (*g, k.psi(&g.e[1]).unwrap()))
            .collect();
        let seeds = [SeedSet { label: "psi".into(), pairs: good.clone() }];
        let t = close_character(&k, n, &seeds, &good, Some(u.len(n, q)), 1e-9).unwrap();
        assert_eq!(t.map.len() as u64, u.len(n, q));
    }

    #[test]
    fn conjugated_and_restricted() {
        let k = ctx(3);
        let n = 2;
        let u = Shape::unipotent_upper(n);
        let q = 3u64;
        let pairs: Vec<_> = (0..u.len(n, q))
            .map(|i| {
                let g = u.get(i, n, q, &k.field);
                (g, k.psi(&g.e[1]).unwrap())
            })
            .collect();
        let table = SupportTable::from_pairs(k.clone(), n, pairs);
        let w = ConjugationMap::weyl(&k.field);
        let conj = table.conjugated(&w).unwrap();
        let back = conj.conjugated(&ConjugationMap {
            label: "w-inv".into(),
            m: w.m_inv,
            m_inv: w.m,
        })
        .unwrap();
        for g in table.elems.iter() {
            assert!((back.map[g] - table.map[g]).norm() < 1e-12);
        }
        // restrict(f, support(f)) = f
        let cf = ClassFun::Sub(SubChar(Arc::new(table)));
        let dom = Domain::Shaped { shape: u, n };
        let re = restrict_to_table(&cf, &dom, &k);
        for g in re.elems.iter() {
            assert!((re.map[g] - cf.eval(g)).norm() < 1e-12);
        }
    }

    #[test]
    fn depth_of_trivial_is_zero() {
        let k = ctx(3);
        let n = 3;
        let triv = ClassFun::Sub(trivial_full(&k, n));
        assert_eq!(depth_of(&triv, &k, 1e-6).unwrap(), 0);
    }
}

//! Structure of small finite abelian groups: a basis realizing the group as a
//! direct sum of cyclic groups, discrete logarithms against that basis, and
//! the character group.
//!
//! The decomposition works prime by prime.  In each primary part an element
//! of maximal order generates a direct summand; the quotient is materialized
//! concretely and handled recursively, and each lifted generator is adjusted
//! so its order matches its quotient order.  The final exponent map is built
//! by full enumeration and verified to be a bijection, so any construction
//! error is loud.

use crate::errors::{Error, Result};
use crate::numeric::unit_root;
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use num_complex::Complex64;

pub trait AbelianElem: Clone + Eq + core::hash::Hash {
    /// A stable byte encoding, used only to pick canonical coset
    /// representatives.
    fn encode(&self) -> Vec<u8>;
}

impl AbelianElem for crate::group::GroupElement {
    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for e in &self.e {
            out.push(e.start as u8);
            out.push(e.len);
            for i in 0..e.len as i32 {
                out.push(e.coeff(e.start as i32 + i).unwrap());
            }
        }
        out
    }
}

impl AbelianElem for u64 {
    fn encode(&self) -> Vec<u8> {
        self.to_be_bytes().to_vec()
    }
}

/// A finite abelian group presented by its element list and multiplication,
/// decomposed into cyclic factors.
pub struct AbelianGroup<T> {
    pub elems: Vec<T>,
    pub basis: Vec<T>,
    pub orders: Vec<u64>,
    dlog: HashMap<T, Vec<u64>>,
}

fn pow<T: Clone>(mul: &dyn Fn(&T, &T) -> T, id: &T, x: &T, e: u64) -> T {
    let mut acc = id.clone();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    acc
}

fn order_of<T: Eq + Clone>(mul: &dyn Fn(&T, &T) -> T, id: &T, x: &T) -> u64 {
    let mut n = 1;
    let mut y = x.clone();
    while y != *id {
        y = mul(&y, x);
        n += 1;
    }
    n
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Basis of an abelian p-group given as an element list.
fn primary_basis<T: AbelianElem>(
    elems: &[T],
    mul: &dyn Fn(&T, &T) -> T,
    id: &T,
) -> Vec<(T, u64)> {
    if elems.len() <= 1 {
        return Vec::new();
    }
    // An element of maximal order generates a direct summand.
    let mut top = id.clone();
    let mut top_ord = 1;
    for x in elems {
        let o = order_of(mul, id, x);
        if o > top_ord {
            top_ord = o;
            top = x.clone();
        }
    }
    // Materialize the quotient by <top>: canonical representative of each
    // coset is the member with the least encoding.
    let mut cyc = Vec::with_capacity(top_ord as usize);
    let mut y = id.clone();
    for _ in 0..top_ord {
        cyc.push(y.clone());
        y = mul(&y, &top);
    }
    let mut rep_of: HashMap<T, T> = HashMap::new();
    let mut reps: Vec<T> = Vec::new();
    for x in elems {
        if rep_of.contains_key(x) {
            continue;
        }
        let mut coset: Vec<T> = cyc.iter().map(|c| mul(x, c)).collect();
        coset.sort_by(|a, b| a.encode().cmp(&b.encode()));
        let rep = coset[0].clone();
        for m in coset {
            rep_of.insert(m, rep.clone());
        }
        reps.push(rep);
    }
    reps.sort_by(|a, b| a.encode().cmp(&b.encode()));
    reps.dedup();
    let qmul = |a: &T, b: &T| -> T { rep_of[&mul(a, b)].clone() };
    let qid = rep_of[id].clone();
    let sub = primary_basis(&reps, &qmul, &qid);

    let mut out = vec![(top.clone(), top_ord)];
    let top_inv = pow(mul, id, &top, top_ord - 1);
    for (gbar, m) in sub {
        // Lift: gbar^m lies in <top>, say top^e with m | e; adjust by
        // top^(-e/m) so the lift has exact order m.
        let g = gbar.clone();
        let gm = pow(mul, id, &g, m);
        let mut e = 0u64;
        let mut y = id.clone();
        while y != gm {
            y = mul(&y, &top);
            e += 1;
            assert!(e <= top_ord, "lift landed outside the cyclic summand");
        }
        assert!(e % m == 0, "maximal-order summand adjustment failed");
        let adj = pow(mul, id, &top_inv, e / m);
        let lifted = mul(&g, &adj);
        debug_assert!(pow(mul, id, &lifted, m) == *id);
        out.push((lifted, m));
    }
    out
}

impl<T: AbelianElem> AbelianGroup<T> {
    /// Decomposes the group; `elems` must be the complete element list and
    /// the operation must be commutative (spot-checked).
    pub fn new<M: Fn(&T, &T) -> T>(elems: Vec<T>, mul: M, id: T) -> Result<AbelianGroup<T>> {
        let n = elems.len() as u64;
        if n == 0 {
            return Err(Error::Domain("empty group".into()));
        }
        let step = 1 + elems.len() / 8;
        for a in elems.iter().step_by(step) {
            for b in elems.iter().step_by(step) {
                if mul(a, b) != mul(b, a) {
                    return Err(Error::Domain("operation is not commutative".into()));
                }
            }
        }
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        for (p, k) in prime_factors(n) {
            let pk = p.pow(k);
            let cof = n / pk;
            // p-primary part: image of the cofactor power map.
            let mut part: Vec<T> = elems.iter().map(|x| pow(&mul, &id, x, cof)).collect();
            part.sort_by(|a, b| a.encode().cmp(&b.encode()));
            part.dedup();
            for (b, o) in primary_basis(&part, &mul, &id) {
                basis.push(b);
                orders.push(o);
            }
        }
        if basis.is_empty() {
            basis.push(id.clone());
            orders.push(1);
        }
        // Full exponent map; verifies the decomposition is a bijection.
        let total: u64 = orders.iter().product();
        if total != n {
            return Err(Error::Domain(alloc::format!(
                "basis orders multiply to {total}, group has {n} elements"
            )));
        }
        let mut dlog = HashMap::with_capacity(elems.len());
        let mut stack = vec![(0usize, id.clone(), Vec::<u64>::new())];
        while let Some((i, acc, exps)) = stack.pop() {
            if i == basis.len() {
                if dlog.insert(acc, exps).is_some() {
                    return Err(Error::Domain("exponent map is not injective".into()));
                }
                continue;
            }
            let mut cur = acc.clone();
            for e in 0..orders[i] {
                let mut ex = exps.clone();
                ex.push(e);
                stack.push((i + 1, cur.clone(), ex));
                if e + 1 < orders[i] {
                    cur = mul(&cur, &basis[i]);
                }
            }
        }
        Ok(AbelianGroup {
            elems,
            basis,
            orders,
            dlog,
        })
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn exponents(&self, g: &T) -> Option<&Vec<u64>> {
        self.dlog.get(g)
    }

    pub fn contains(&self, g: &T) -> bool {
        self.dlog.contains_key(g)
    }

    /// Value at `g` of the character indexed by `ks` (one index per factor).
    pub fn char_value(&self, ks: &[u64], g: &T) -> Result<Complex64> {
        let exps = self
            .dlog
            .get(g)
            .ok_or_else(|| Error::Domain("element outside the abelian group".into()))?;
        let mut z = Complex64::new(1.0, 0.0);
        for i in 0..self.basis.len() {
            if ks[i] != 0 && exps[i] != 0 {
                z *= unit_root((ks[i] * exps[i] % self.orders[i]) as i64, self.orders[i] as i64);
            }
        }
        Ok(z)
    }

    /// All character index tuples.
    pub fn character_indices(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &o in &self.orders {
            let mut next = Vec::with_capacity(out.len() * o as usize);
            for t in &out {
                for k in 0..o {
                    let mut t2 = t.clone();
                    t2.push(k);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }

    /// Pointwise product of two character index tuples.
    pub fn char_product(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        (0..self.orders.len())
            .map(|i| (a[i] + b[i]) % self.orders[i])
            .collect()
    }

    pub fn char_inverse(&self, a: &[u64]) -> Vec<u64> {
        (0..self.orders.len())
            .map(|i| (self.orders[i] - a[i]) % self.orders[i])
            .collect()
    }
}

//! Table-backed arithmetic for the residue field `F_q`, `q = p^f` odd.
//!
//! Elements are indices `0..q` encoding base-`p` digit vectors against a fixed
//! monic irreducible polynomial (the lexicographically first one, so the
//! construction is canonical).  All operations are table lookups; `q` stays at
//! desk scale so the tables are tiny.

use crate::errors::{Error, Result};
use crate::numeric::unit_root;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Index of an element of `F_q` in the fixed enumeration.
pub type FqElem = u8;

#[derive(Clone)]
pub struct Field {
    pub p: u32,
    pub f: u32,
    pub q: u32,
    /// A fixed non-square unit; `-1` whenever `-1` is a non-square.
    pub eps: FqElem,
    /// A generator of the cyclic group `F_q^x`.
    pub gen: FqElem,
    add: Vec<FqElem>,
    mul: Vec<FqElem>,
    neg: Vec<FqElem>,
    inv: Vec<FqElem>,
    /// `sqrt[x]` is a square root of `x` when one exists.
    sqrt: Vec<Option<FqElem>>,
    is_square: Vec<bool>,
    /// Discrete log base `gen` (undefined at 0).
    dlog: Vec<u32>,
    /// `exp(2 pi i tr(x) / p)` per element.
    psi_phase: Vec<Complex64>,
}

impl core::fmt::Debug for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Field(q={})", self.q)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q` as `p^f` with `p` prime, or fails.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    for p in 2..=q {
        if !is_prime(p) || q % p != 0 {
            continue;
        }
        let mut n = q;
        let mut f = 0;
        while n % p == 0 {
            n /= p;
            f += 1;
        }
        if n == 1 {
            return Ok((p, f));
        }
        break;
    }
    Err(Error::Domain(alloc::format!("{q} is not a prime power")))
}

/// Polynomial arithmetic over `F_p` on base-`p` digit vectors, used only
/// during table construction.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce by the monic modulus.
    for i in (f..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (k, &mk) in modulus.iter().enumerate().take(f) {
            let idx = i - f + k;
            prod[idx] = (prod[idx] + c * (p - mk % p)) % p;
        }
    }
    prod.truncate(f.max(1));
    prod
}

fn digits(mut x: u32, p: u32, f: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(f as usize);
    for _ in 0..f {
        d.push(x % p);
        x /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    let mut x = 0;
    for &di in d.iter().rev() {
        x = x * p + di;
    }
    x
}

/// Finds the lexicographically first monic irreducible polynomial of degree
/// `f` over `F_p` (constant term first in the comparison order).
fn find_irreducible(p: u32, f: u32) -> Vec<u32> {
    if f == 1 {
        return vec![0, 1];
    }
    let pf = p.pow(f);
    'candidates: for c in 0..pf {
        let mut poly = digits(c, p, f);
        poly.push(1); // monic
        // Irreducible iff no root-free factorization; test divisibility by all
        // monic polynomials of degree 1..=f/2.
        for deg in 1..=(f / 2) {
            let pd = p.pow(deg);
            for dcoef in 0..pd {
                let mut divisor = digits(dcoef, p, deg);
                divisor.push(1);
                if poly_divides(&divisor, &poly, p) {
                    continue 'candidates;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn poly_divides(d: &[u32], a: &[u32], p: u32) -> bool {
    // Remainder of a by monic d.
    let mut r: Vec<u32> = a.to_vec();
    let dd = d.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let n = r.len();
        if lead != 0 {
            for k in 0..=dd {
                let idx = n - 1 - dd + k;
                r[idx] = (r[idx] + lead * (p - d[k] % p)) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

impl Field {
    /// Builds the field of order `q` (odd prime power).
    pub fn new(q: u32) -> Result<Field> {
        let (p, f) = prime_power(q)?;
        if p == 2 {
            return Err(Error::Domain(alloc::format!("q = {q} must be odd")));
        }
        if q > 255 {
            return Err(Error::Domain(alloc::format!("q = {q} exceeds the table backend limit")));
        }
        let modulus: Vec<u32> = find_irreducible(p, f);
        let qz = q as usize;

        let mut add = vec![0u8; qz * qz];
        let mut mul = vec![0u8; qz * qz];
        let mut neg = vec![0u8; qz];
        for a in 0..q {
            let da = digits(a, p, f);
            let mut nd = Vec::with_capacity(f as usize);
            for &x in &da {
                nd.push((p - x) % p);
            }
            neg[a as usize] = from_digits(&nd, p) as u8;
            for b in 0..=a {
                let db = digits(b, p, f);
                let mut sum = Vec::with_capacity(f as usize);
                for i in 0..f as usize {
                    sum.push((da[i] + db[i]) % p);
                }
                let s = from_digits(&sum, p) as u8;
                add[(a * q + b) as usize] = s;
                add[(b * q + a) as usize] = s;
                let prod = poly_mul_mod(&da, &db, &modulus, p);
                let m = from_digits(&prod, p) as u8;
                mul[(a * q + b) as usize] = m;
                mul[(b * q + a) as usize] = m;
            }
        }

        let mut inv = vec![0u8; qz];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u8;
                    break;
                }
            }
        }

        // Generator of the multiplicative group.
        let order_of = |x: u32| -> u32 {
            let mut n = 1;
            let mut y = x;
            while y != 1 {
                y = mul[(y * q + x) as usize] as u32;
                n += 1;
            }
            n
        };
        let mut gen = 0u8;
        for x in 2..q {
            if order_of(x) == q - 1 {
                gen = x as u8;
                break;
            }
        }
        debug_assert!(gen != 0 || q == 2);

        let mut dlog = vec![0u32; qz];
        let mut y = 1u32;
        for k in 0..(q - 1) {
            dlog[y as usize] = k;
            y = mul[(y * q + gen as u32) as usize] as u32;
        }

        let mut is_square = vec![false; qz];
        let mut sqrt: Vec<Option<FqElem>> = vec![None; qz];
        is_square[0] = true;
        sqrt[0] = Some(0);
        for x in 1..q {
            let s = mul[(x * q + x) as usize];
            is_square[s as usize] = true;
            if sqrt[s as usize].is_none() {
                sqrt[s as usize] = Some(x as u8);
            }
        }

        // eps: -1 when -1 is a non-square, otherwise the first non-square in
        // the fixed enumeration.
        let minus_one = neg[1];
        let eps = if !is_square[minus_one as usize] {
            minus_one
        } else {
            (1..q).find(|&x| !is_square[x as usize]).unwrap() as u8
        };

        // tr(x) = sum of the Frobenius conjugates x^(p^i); the sum is
        // Galois-fixed, hence a prime-field element.
        let mut psi_phase = vec![Complex64::new(1.0, 0.0); qz];
        for x in 0..q {
            let mut acc = x;
            let mut y = x;
            for _ in 1..f {
                y = frobenius(y, p, &mul, q);
                acc = add[(acc * q + y) as usize] as u32;
            }
            let d = digits(acc, p, f);
            debug_assert!(d.iter().skip(1).all(|&c| c == 0));
            psi_phase[x as usize] = unit_root(d[0] as i64, p as i64);
        }

        Ok(Field {
            p,
            f,
            q,
            eps,
            gen,
            add,
            mul,
            neg,
            inv,
            sqrt,
            is_square,
            dlog,
            psi_phase,
        })
    }

    #[inline(always)]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.neg[a as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; 0 maps to 0 (callers guard).
    #[inline(always)]
    pub fn inv(&self, a: FqElem) -> FqElem {
        self.inv[a as usize]
    }

    pub fn is_square(&self, a: FqElem) -> bool {
        self.is_square[a as usize]
    }

    pub fn sqrt(&self, a: FqElem) -> Option<FqElem> {
        self.sqrt[a as usize]
    }

    /// Discrete log base `gen`; `a` must be nonzero.
    pub fn dlog(&self, a: FqElem) -> u32 {
        debug_assert!(a != 0);
        self.dlog[a as usize]
    }

    pub fn pow_gen(&self, k: u32) -> FqElem {
        let mut y = 1u8;
        for _ in 0..(k % (self.q - 1)) {
            y = self.mul(y, self.gen);
        }
        y
    }

    /// `exp(2 pi i tr(a)/p)`.
    #[inline(always)]
    pub fn psi_phase(&self, a: FqElem) -> Complex64 {
        self.psi_phase[a as usize]
    }

    pub fn minus_one(&self) -> FqElem {
        self.neg(1)
    }

    /// All nonzero squares, each once, in enumeration order.  This is the
    /// fixed set `S` of representatives used by the Gauss-type sums.
    pub fn squares(&self) -> Vec<FqElem> {
        (1..self.q as usize)
            .filter(|&x| self.is_square[x])
            .map(|x| x as u8)
            .collect()
    }

    /// Embedding data for the quadratic extension `F_q(sqrt(eps))`,
    /// represented as pairs `(a, b) = a + b sqrt(eps)`.
    pub fn ext_mul(&self, x: (FqElem, FqElem), y: (FqElem, FqElem)) -> (FqElem, FqElem) {
        let (a, b) = x;
        let (c, d) = y;
        (
            self.add(self.mul(a, c), self.mul(self.eps, self.mul(b, d))),
            self.add(self.mul(a, d), self.mul(b, c)),
        )
    }

    pub fn ext_norm(&self, x: (FqElem, FqElem)) -> FqElem {
        let (a, b) = x;
        self.sub(self.mul(a, a), self.mul(self.eps, self.mul(b, b)))
    }
}

fn frobenius(x: u32, p: u32, mul: &[FqElem], q: u32) -> u32 {
    let mut y = 1u32;
    for _ in 0..p {
        y = mul[(y * q + x) as usize] as u32;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f3_basics() {
        let f = Field::new(3).unwrap();
        assert_eq!((f.p, f.f), (3, 1));
        assert_eq!(f.add(1, 2), 0);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.inv(2), 2);
        // -1 = 2 is a non-square in F_3, so eps = -1.
        assert_eq!(f.eps, 2);
        assert!(!f.is_square(2));
        assert_eq!(f.squares(), vec![1]);
    }

    #[test]
    fn f5_eps_is_first_nonsquare() {
        let f = Field::new(5).unwrap();
        // -1 = 4 = 2^2 is a square; squares are {1,4}; first non-square is 2.
        assert!(f.is_square(4));
        assert_eq!(f.eps, 2);
        assert_eq!(f.squares(), vec![1, 4]);
    }

    #[test]
    fn f9_field_axioms() {
        let f = Field::new(9).unwrap();
        assert_eq!((f.p, f.f), (3, 2));
        // Associativity and distributivity, exhaustively.
        for a in 0..9u8 {
            for b in 0..9u8 {
                for c in 0..9u8 {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        for a in 1..9u8 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // The multiplicative group is cyclic of order 8.
        let mut seen = [false; 9];
        let mut y = 1u8;
        for _ in 0..8 {
            seen[y as usize] = true;
            y = f.mul(y, f.gen);
        }
        assert!(seen[1..].iter().all(|&s| s));
    }

    #[test]
    fn psi_phase_is_additive() {
        for q in [3u32, 5, 9] {
            let f = Field::new(q).unwrap();
            for a in 0..q as u8 {
                for b in 0..q as u8 {
                    let lhs = f.psi_phase(f.add(a, b));
                    let rhs = f.psi_phase(a) * f.psi_phase(b);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
            // Nontrivial somewhere.
            assert!((1..q as u8).any(|a| (f.psi_phase(a) - Complex64::new(1.0, 0.0)).norm() > 0.1));
        }
    }

    #[test]
    fn quadratic_extension_norm_onto() {
        let f = Field::new(3).unwrap();
        // Norm map is onto F_q^x and ker has q+1 elements.
        let mut kernel = 0;
        for a in 0..3u8 {
            for b in 0..3u8 {
                if f.ext_norm((a, b)) == 1 {
                    kernel += 1;
                }
            }
        }
        assert_eq!(kernel, 4);
    }
}

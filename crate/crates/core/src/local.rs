//! Truncated elements of the local field `k = F_q((t))` with exact window
//! bookkeeping, plus the additive character, square classes, Hensel square
//! roots and the Gauss-type sums `xi_u`.
//!
//! A [`LocalElem`] stores the coefficients of `sum a_i t^(start+i)` on a
//! finite window `[start, start+len)`.  The element is *known modulo
//! `P^(start+len)`*; an operation whose answer would require a coefficient
//! outside the window reports a precision error instead of guessing.

use crate::errors::{Error, Result};
use crate::field::{Field, FqElem};
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Maximum window length.  Group entries use windows of length `<= N <= 8`;
/// Lie-algebra pairings shift windows around but stay comfortably inside.
pub const MAX_WINDOW: usize = 16;

/// Sentinel "end" for exact elements (known at every index).
const EXACT_END: i32 = 1 << 12;

/// An element of `k` known on the coefficient window `[start, start+len)`.
///
/// Coefficients below `start` are zero by construction (valuation bounds
/// compose through every operation).  When `exact` is set the element is the
/// literal polynomial carried by the window — every coefficient outside is
/// zero too — which is how uniformizer powers, conjugating matrices and
/// chosen Lie-algebra representatives avoid spurious precision loss.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalElem {
    pub start: i16,
    pub len: u8,
    exact: bool,
    coeffs: [FqElem; MAX_WINDOW],
}

/// Valuation of a truncated element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i32),
    /// All known coefficients vanish; the true valuation is at least this.
    InfinityBeyond(i32),
}

impl Valuation {
    pub fn finite(self) -> Option<i32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::InfinityBeyond(_) => None,
        }
    }

    pub fn at_least(self, bound: i32) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::InfinityBeyond(e) => e >= bound,
        }
    }
}

impl core::fmt::Debug for LocalElem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.coeffs[i as usize])?;
        }
        write!(f, "]*t^{}..{}", self.start, self.end())
    }
}

impl LocalElem {
    /// The zero element known modulo `P^end` (truncated, not exact).
    pub fn zero(start: i32, end: i32) -> LocalElem {
        debug_assert!(end >= start);
        let len = ((end - start) as usize).min(MAX_WINDOW);
        LocalElem {
            start: start as i16,
            len: len as u8,
            exact: false,
            coeffs: [0; MAX_WINDOW],
        }
    }

    /// Builds a truncated element from digits at `t^start, t^(start+1), ...`.
    pub fn from_digits(start: i32, digits: &[FqElem]) -> LocalElem {
        assert!(digits.len() <= MAX_WINDOW);
        let mut coeffs = [0; MAX_WINDOW];
        coeffs[..digits.len()].copy_from_slice(digits);
        LocalElem {
            start: start as i16,
            len: digits.len() as u8,
            exact: false,
            coeffs,
        }
    }

    /// Builds the exact polynomial with the given digits.
    pub fn exact(start: i32, digits: &[FqElem]) -> LocalElem {
        let mut e = LocalElem::from_digits(start, digits);
        e.exact = true;
        e
    }

    pub fn exact_zero() -> LocalElem {
        LocalElem::exact(0, &[])
    }

    pub fn exact_scalar(c: FqElem) -> LocalElem {
        LocalElem::exact(0, &[c])
    }

    pub fn exact_one() -> LocalElem {
        LocalElem::exact_scalar(1)
    }

    /// The exact monomial `c t^v`.
    pub fn exact_monomial(c: FqElem, v: i32) -> LocalElem {
        LocalElem::exact(v, &[c])
    }

    /// The exact uniformizer power `t^v`.
    pub fn uniformizer_pow(v: i32) -> LocalElem {
        LocalElem::exact_monomial(1, v)
    }

    /// The truncated ring element with a single digit `c` at `t^v`, window
    /// `[v, end)`.
    pub fn monomial(c: FqElem, v: i32, end: i32) -> LocalElem {
        let mut e = LocalElem::zero(v, end);
        if e.len > 0 {
            e.coeffs[0] = c;
        }
        e
    }

    /// The canonical quotient-ring element with a single digit `c` at `t^j`
    /// on the window `[0, n)` (used for group-entry construction, where
    /// equality compares raw windows).
    pub fn digit_at(c: FqElem, j: i32, n: i32) -> LocalElem {
        debug_assert!(0 <= j && j < n);
        let mut e = LocalElem::zero(0, n);
        e.coeffs[j as usize] = c;
        e
    }

    /// `c * t^0` on the truncated window `[0, n)`.
    pub fn scalar(c: FqElem, n: i32) -> LocalElem {
        LocalElem::monomial(c, 0, n)
    }

    pub fn one(n: i32) -> LocalElem {
        LocalElem::scalar(1, n)
    }

    #[inline(always)]
    pub fn end(&self) -> i32 {
        self.start as i32 + self.len as i32
    }

    /// The index up to which coefficients are known (`EXACT_END` for exact
    /// polynomials).
    #[inline(always)]
    pub fn known_end(&self) -> i32 {
        if self.exact {
            EXACT_END
        } else {
            self.end()
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    #[inline(always)]
    pub fn window(&self) -> (i32, i32) {
        (self.start as i32, self.end())
    }

    /// Coefficient at `t^i`; `None` when `i` is outside the known range
    /// (coefficients left of the window are known to be zero, and everything
    /// outside is zero for exact polynomials).
    #[inline(always)]
    pub fn coeff(&self, i: i32) -> Option<FqElem> {
        if i < self.start as i32 {
            return Some(0);
        }
        let idx = i - self.start as i32;
        if idx < self.len as i32 {
            Some(self.coeffs[idx as usize])
        } else if self.exact {
            Some(0)
        } else {
            None
        }
    }

    /// Valuation: position of the first nonzero known coefficient.
    pub fn val(&self) -> Valuation {
        for i in 0..self.len as usize {
            if self.coeffs[i] != 0 {
                return Valuation::Finite(self.start as i32 + i as i32);
            }
        }
        Valuation::InfinityBeyond(self.known_end())
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs[..self.len as usize].iter().all(|&c| c == 0)
    }

    /// True when every known coefficient below index 0 vanishes (so the
    /// element is integral as far as the window can tell).
    pub fn is_integral(&self) -> bool {
        self.val().at_least(0)
    }

    fn build(start: i32, known_end: i32, exact: bool) -> LocalElem {
        // Stored window: clamp to MAX_WINDOW; exactness is dropped when the
        // support cannot be stored in full.
        let start = start.min(known_end);
        let want = known_end - start;
        let (len, exact) = if want > MAX_WINDOW as i32 {
            (MAX_WINDOW as i32, false)
        } else {
            (want, exact)
        };
        LocalElem {
            start: start as i16,
            len: len as u8,
            exact,
            coeffs: [0; MAX_WINDOW],
        }
    }

    pub fn add(&self, other: &LocalElem, field: &Field) -> LocalElem {
        let start = (self.start as i32).min(other.start as i32);
        let exact = self.exact && other.exact;
        let stored_end = if exact {
            self.end().max(other.end())
        } else {
            self.known_end().min(other.known_end())
        };
        let mut out = LocalElem::build(start, stored_end.max(start), exact);
        for i in 0..out.len as usize {
            let idx = start + i as i32;
            let a = self.coeff(idx).unwrap_or(0);
            let b = other.coeff(idx).unwrap_or(0);
            out.coeffs[i] = field.add(a, b);
        }
        out
    }

    pub fn neg(&self, field: &Field) -> LocalElem {
        let mut out = *self;
        for i in 0..out.len as usize {
            out.coeffs[i] = field.neg(out.coeffs[i]);
        }
        out
    }

    pub fn sub(&self, other: &LocalElem, field: &Field) -> LocalElem {
        self.add(&other.neg(field), field)
    }

    /// Product; the result is known on `[s1+s2, min(s1+e2, s2+e1))` (with
    /// exact factors contributing unbounded knowledge).
    pub fn mul(&self, other: &LocalElem, field: &Field) -> LocalElem {
        let start = self.start as i32 + other.start as i32;
        let exact = self.exact && other.exact;
        let stored_end = if exact {
            // Support bound for the polynomial product (empty for a zero
            // factor).
            if self.len == 0 || other.len == 0 {
                start
            } else {
                (self.end() + other.end() - 1).min(EXACT_END)
            }
        } else {
            (self.start as i32 + other.known_end())
                .min(other.start as i32 + self.known_end())
                .min(EXACT_END)
        };
        let mut out = LocalElem::build(start, stored_end.max(start), exact);
        for i in 0..self.len as usize {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..other.len as usize {
                let k = i + j;
                if k >= out.len as usize {
                    break;
                }
                let b = other.coeffs[j];
                if b == 0 {
                    continue;
                }
                out.coeffs[k] = field.add(out.coeffs[k], field.mul(a, b));
            }
        }
        out
    }

    pub fn scale(&self, c: FqElem, field: &Field) -> LocalElem {
        let mut out = *self;
        for i in 0..out.len as usize {
            out.coeffs[i] = field.mul(out.coeffs[i], c);
        }
        out
    }

    /// Multiplies by `t^k` (shifts the window).
    pub fn shift(&self, k: i32) -> LocalElem {
        let mut out = *self;
        out.start = (out.start as i32 + k) as i16;
        out
    }

    /// Inverse of an element of nonzero leading coefficient.  The result is
    /// known on a window of the same length starting at `-val` (for exact
    /// inputs the full storable window is produced; the inverse of a
    /// non-monomial is a genuine power series and stays truncated).
    pub fn inverse(&self, field: &Field) -> Result<LocalElem> {
        let v = match self.val() {
            Valuation::Finite(v) => v,
            Valuation::InfinityBeyond(_) => {
                return Err(Error::Domain("inverse of zero window".into()))
            }
        };
        let len = if self.exact {
            MAX_WINDOW
        } else {
            (self.end() - v) as usize
        };
        let mut u = [0u8; MAX_WINDOW];
        for (i, slot) in u.iter_mut().enumerate().take(len) {
            *slot = self.coeff(v + i as i32).unwrap_or(0);
        }
        let inv0 = field.inv(u[0]);
        let mut w = [0u8; MAX_WINDOW];
        w[0] = inv0;
        let tail_zero = u[1..len].iter().all(|&c| c == 0);
        for i in 1..len {
            let mut acc = 0u8;
            for j in 0..i {
                acc = field.add(acc, field.mul(w[j], u[i - j]));
            }
            w[i] = field.mul(field.neg(acc), inv0);
        }
        let mut out = LocalElem::build(-v, -v + len as i32, false);
        out.coeffs[..len].copy_from_slice(&w[..len]);
        // The inverse of an exact monomial is exact.
        if self.exact && tail_zero {
            out = LocalElem::exact_monomial(w[0], -v);
        }
        Ok(out)
    }

    /// Canonical reduction to the truncated window `[0, n)`.  Fails when the
    /// element has a (known) nonzero coefficient below 0 or is not known up
    /// to `t^n`.
    pub fn reduce_mod(&self, n: i32) -> Result<LocalElem> {
        if !self.is_integral() {
            return Err(Error::Domain(format!("element {self:?} is not integral")));
        }
        if self.known_end() < n {
            return Err(Error::Precision(format!(
                "element {self:?} is only known modulo t^{}, need t^{n}",
                self.end()
            )));
        }
        let mut out = LocalElem::zero(0, n);
        for i in 0..n {
            out.coeffs[i as usize] = self.coeff(i).unwrap();
        }
        Ok(out)
    }

    /// The exact polynomial representative given by the known digits (used
    /// where a canonical representative of a truncated class is needed and
    /// any representative works).
    pub fn as_exact_polynomial(&self) -> LocalElem {
        let mut out = *self;
        out.exact = true;
        out
    }

    /// Truncates knowledge at `end` (forgetting digits and exactness).
    pub fn truncated(&self, end: i32) -> LocalElem {
        if self.exact && end >= self.end() {
            // Still exact: truncation beyond the support changes nothing.
            return *self;
        }
        let start = self.start as i32;
        let end = end.max(start);
        let mut out = LocalElem::zero(start, end.min(start + MAX_WINDOW as i32));
        for i in 0..out.len.min(self.len) as usize {
            out.coeffs[i] = self.coeffs[i];
        }
        out
    }
}

/// Square classes of `k^x` modulo squares, the Klein four-group
/// `{1, eps, pi, eps*pi}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    One,
    Eps,
    Pi,
    EpsPi,
}

impl SquareClass {
    pub fn product(self, other: SquareClass) -> SquareClass {
        use SquareClass::*;
        let bits = |c: SquareClass| -> (bool, bool) {
            match c {
                One => (false, false),
                Eps => (true, false),
                Pi => (false, true),
                EpsPi => (true, true),
            }
        };
        let (a1, a2) = bits(self);
        let (b1, b2) = bits(other);
        match (a1 ^ b1, a2 ^ b2) {
            (false, false) => One,
            (true, false) => Eps,
            (false, true) => Pi,
            (true, true) => EpsPi,
        }
    }
}

/// The ambient local field: the residue field together with the conventions
/// for the uniformizer, the additive character and the square classes.
#[derive(Clone, Debug)]
pub struct LocalField {
    pub field: Field,
    /// Cached `xi_u` values, indexed by the residue of `u` (0 unused).
    xi: Vec<Complex64>,
}

impl LocalField {
    pub fn new(q: u32) -> Result<LocalField> {
        let field = Field::new(q)?;
        let squares = field.squares();
        let mut xi = Vec::with_capacity(q as usize);
        for u in 0..q as u8 {
            let mut acc = Complex64::new(0.0, 0.0);
            for &y in &squares {
                acc += field.psi_phase(field.mul(u, y));
            }
            xi.push(acc);
        }
        Ok(LocalField { field, xi })
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }

    pub fn eps(&self) -> FqElem {
        self.field.eps
    }

    /// The non-square unit `eps` as a ring element on `[0, n)`.
    pub fn eps_elem(&self, n: i32) -> LocalElem {
        LocalElem::scalar(self.field.eps, n)
    }

    /// The additive character: `psi(x) = exp(2 pi i tr(a_0)/p)` where `a_0`
    /// is the `t^0` coefficient.  Trivial on `P`, nontrivial on `R`; digits
    /// below `t^0` never contribute.
    pub fn psi(&self, x: &LocalElem) -> Result<Complex64> {
        match x.coeff(0) {
            Some(a0) => Ok(self.field.psi_phase(a0)),
            None => Err(Error::Precision(format!(
                "psi needs the t^0 coefficient, window of {x:?} ends at {}",
                x.end()
            ))),
        }
    }

    /// Square class of a nonzero truncated element: parity of the valuation
    /// and the square class of the leading unit.
    pub fn square_class(&self, u: &LocalElem) -> Result<SquareClass> {
        let v = u
            .val()
            .finite()
            .ok_or_else(|| Error::Precision(format!("square class of zero window {u:?}")))?;
        let lead = u.coeff(v).unwrap();
        let unit_square = self.field.is_square(lead);
        Ok(match (unit_square, v.rem_euclid(2) == 0) {
            (true, true) => SquareClass::One,
            (false, true) => SquareClass::Eps,
            (true, false) => SquareClass::Pi,
            (false, false) => SquareClass::EpsPi,
        })
    }

    /// Solves `a^2 = 1 + c` with `a = 1 mod P`, digit by digit (Hensel; exact
    /// since `2` is a unit).  Requires `val(c) >= 1`; the answer is produced
    /// on the window `[0, n)`.
    pub fn solve_unit_square(&self, c: &LocalElem, n: i32) -> Result<LocalElem> {
        if !c.val().at_least(1) {
            return Err(Error::Domain(format!(
                "solve_unit_square needs val(c) >= 1, got {c:?}"
            )));
        }
        if c.known_end() < n {
            return Err(Error::Precision(format!(
                "solve_unit_square: c known to t^{}, need t^{n}",
                c.end()
            )));
        }
        let f = &self.field;
        let one = LocalElem::one(n);
        let target = one.add(&c.truncated(n), f);
        // a = 1 + x_1 t + ...; solve (a^2)_k = target_k for x_k successively:
        // the t^k coefficient of a^2 is 2*x_k + (terms in lower digits).
        let mut a = LocalElem::one(n);
        let two_inv = f.inv(f.add(1, 1));
        for k in 1..n {
            let sq = a.mul(&a, f);
            let want = target.coeff(k).unwrap();
            let have = sq.coeff(k).unwrap();
            let delta = f.mul(f.sub(want, have), two_inv);
            a.coeffs[k as usize] = delta;
        }
        let sq = a.mul(&a, f);
        for k in 0..n {
            if sq.coeff(k) != target.coeff(k) {
                return Err(Error::NoSolution(format!(
                    "unit square root failed at digit {k}"
                )));
            }
        }
        Ok(a)
    }

    /// Square root of a unit `u` (val 0) with both branches Hensel-lifted from
    /// the residue field; errors when the leading coefficient is a non-square.
    pub fn sqrt_unit(&self, u: &LocalElem, n: i32) -> Result<LocalElem> {
        let v = u.val();
        if !matches!(v, Valuation::Finite(0)) {
            return Err(Error::Domain(format!("sqrt_unit needs a unit, got {u:?}")));
        }
        let lead = u.coeff(0).unwrap();
        let s0 = self
            .field
            .sqrt(lead)
            .ok_or_else(|| Error::NoSolution(format!("{lead} is a non-square in the residue field")))?;
        // u = lead * (1 + c) with val c >= 1; sqrt = s0 * sqrt(1+c).
        let lead_inv = self.field.inv(lead);
        let ratio = u.scale(lead_inv, &self.field);
        let c = ratio.sub(&LocalElem::one(ratio.end()), &self.field);
        let root = self.solve_unit_square(&c.truncated(n), n)?;
        Ok(root.scale(s0, &self.field))
    }

    /// The Gauss-type sum `xi_u = sum_{y in S} psi(u y)` over the fixed set of
    /// nonzero squares `S`; depends only on the square class of `u`.
    pub fn xi(&self, u: FqElem) -> Result<Complex64> {
        if u == 0 {
            return Err(Error::Domain("xi(0) is undefined".into()));
        }
        Ok(self.xi[u as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(q: u32) -> LocalField {
        LocalField::new(q).unwrap()
    }

    #[test]
    fn valuation_normalization() {
        let k = lf(3);
        let pi = LocalElem::uniformizer_pow(1);
        assert_eq!(pi.val(), Valuation::Finite(1));
        let zero = LocalElem::zero(0, 4);
        assert_eq!(zero.val(), Valuation::InfinityBeyond(4));
        // val(pi^-2 * u) = -2 for any unit u: multiplicativity.
        let u = LocalElem::from_digits(0, &[2, 1, 0, 2]);
        let x = LocalElem::uniformizer_pow(-2).mul(&u, &k.field);
        assert_eq!(x.val(), Valuation::Finite(-2));
        let y = pi.mul(&pi, &k.field);
        assert_eq!(y.val(), Valuation::Finite(2));
    }

    #[test]
    fn window_arithmetic() {
        let k = lf(3);
        let a = LocalElem::from_digits(-1, &[1, 2, 0, 1]); // window [-1, 3)
        let b = LocalElem::from_digits(1, &[2, 2]); // window [1, 3)
        let s = a.add(&b, &k.field);
        assert_eq!(s.window(), (-1, 3));
        let p = a.mul(&b, &k.field);
        // product window: [0, min(-1+3, 1+3)) = [0, 2)
        assert_eq!(p.window(), (0, 2));
    }

    #[test]
    fn inverse_of_unit() {
        let k = lf(5);
        let u = LocalElem::from_digits(0, &[2, 3, 1, 4]);
        let v = u.inverse(&k.field).unwrap();
        let prod = u.mul(&v, &k.field);
        assert_eq!(prod.coeff(0), Some(1));
        for i in 1..4 {
            assert_eq!(prod.coeff(i).unwrap_or(0), 0);
        }
        // Negative valuation inverts to positive.
        let x = LocalElem::from_digits(-2, &[1, 0, 0, 1]);
        let xi = x.inverse(&k.field).unwrap();
        assert_eq!(xi.val(), Valuation::Finite(2));
    }

    #[test]
    fn psi_basics() {
        let k = lf(3);
        // psi(pi) = 1 (trivial on P), psi(0) = 1.
        let pi = LocalElem::uniformizer_pow(1);
        assert_eq!(k.psi(&pi).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(k.psi(&LocalElem::zero(0, 3)).unwrap(), Complex64::new(1.0, 0.0));
        // q = p = 3: psi(1) = exp(2 pi i/3).
        let z = k.psi(&LocalElem::one(3)).unwrap();
        let expect = crate::numeric::unit_root(1, 3);
        assert!((z - expect).norm() < 1e-12);
        // Window excluding index 0 is an error.
        let bad = LocalElem::from_digits(-3, &[1, 2]);
        assert!(k.psi(&bad).is_err());
    }

    #[test]
    fn square_class_examples() {
        let k3 = lf(3);
        // q=3: 2 is a non-square unit -> eps class.
        let two = LocalElem::scalar(2, 3);
        assert_eq!(k3.square_class(&two).unwrap(), SquareClass::Eps);
        assert_eq!(k3.square_class(&LocalElem::one(3)).unwrap(), SquareClass::One);
        // q=5: 4 = 2^2, so pi*4 is in the pi class.
        let k5 = lf(5);
        let x = LocalElem::monomial(4, 1, 4);
        assert_eq!(k5.square_class(&x).unwrap(), SquareClass::Pi);
        // Homomorphism into the Klein four-group on a generating set.
        let gens = [
            LocalElem::one(5),
            LocalElem::scalar(k5.eps(), 5),
            LocalElem::uniformizer_pow(1),
            LocalElem::scalar(3, 5),
            LocalElem::monomial(2, 3, 8),
        ];
        for a in &gens {
            for b in &gens {
                let ab = a.mul(b, &k5.field);
                assert_eq!(
                    k5.square_class(&ab).unwrap(),
                    k5.square_class(a).unwrap().product(k5.square_class(b).unwrap())
                );
            }
        }
    }

    #[test]
    fn unit_square_solver() {
        let k = lf(3);
        // c = 0 -> a = 1.
        let a = k.solve_unit_square(&LocalElem::zero(1, 4), 4).unwrap();
        assert_eq!(a, LocalElem::one(4));
        // c = t at N = 4: check against exhaustive search over F_3[t]/(t^4).
        let c = LocalElem::from_digits(0, &[0, 1, 0, 0]);
        let a = k.solve_unit_square(&c, 4).unwrap();
        let target = LocalElem::one(4).add(&c, &k.field);
        let sq = a.mul(&a, &k.field).reduce_mod(4).unwrap();
        assert_eq!(sq, target.reduce_mod(4).unwrap());
        assert_eq!(a.coeff(0), Some(1));
        // Exhaustive oracle: the solution with a = 1 mod P is unique.
        let mut found = Vec::new();
        for c0 in 0..81u32 {
            let digits = [
                (c0 % 3) as u8,
                (c0 / 3 % 3) as u8,
                (c0 / 9 % 3) as u8,
                (c0 / 27 % 3) as u8,
            ];
            let cand = LocalElem::from_digits(0, &digits);
            let sq = cand.mul(&cand, &k.field).reduce_mod(4).unwrap();
            if sq == target.reduce_mod(4).unwrap() && cand.coeff(0) == Some(1) {
                found.push(cand);
            }
        }
        assert_eq!(found, alloc::vec![a]);
        // 1 + c a non-square unit: no solution.
        let eps_minus_1 = LocalElem::scalar(k.field.sub(k.eps(), 1), 4);
        assert!(k.solve_unit_square(&eps_minus_1, 4).is_err());
    }

    #[test]
    fn xi_values() {
        // q = p = 3, S = {1}: xi_1 = exp(2 pi i / 3).
        let k = lf(3);
        let xi1 = k.xi(1).unwrap();
        assert!((xi1 - crate::numeric::unit_root(1, 3)).norm() < 1e-12);
        // conj(xi_u) = xi_{-u} and the quadratic sum identity.
        for q in [3u32, 5, 7] {
            let k = lf(q);
            let f = &k.field;
            let mut total = Complex64::new(0.0, 0.0);
            for u in 1..q as u8 {
                let xu = k.xi(u).unwrap();
                let xmu = k.xi(f.neg(u)).unwrap();
                assert!((xu.conj() - xmu).norm() < 1e-12);
                total += xu * xmu;
            }
            let expect = ((q * q - 1) / 4) as f64;
            assert!((total.re - expect).abs() < 1e-9 && total.im.abs() < 1e-9);
        }
    }

    #[test]
    fn pairing_nondegeneracy() {
        // For every m >= 0 and x with val(x) = -m there is y in P^m with
        // psi(xy) != 1, and psi(x * P^(m+1)) = 1.
        for q in [3u32, 5] {
            let k = lf(q);
            for m in 0..3i32 {
                let x = LocalElem::monomial(1, -m, 4 - m);
                let mut nontrivial = false;
                for c in 1..q as u8 {
                    let y = LocalElem::monomial(c, m, m + 4);
                    let z = k.psi(&x.mul(&y, &k.field)).unwrap();
                    if (z - Complex64::new(1.0, 0.0)).norm() > 0.1 {
                        nontrivial = true;
                    }
                }
                assert!(nontrivial);
                for c in 0..q as u8 {
                    let y = LocalElem::monomial(c, m + 1, m + 5);
                    let z = k.psi(&x.mul(&y, &k.field)).unwrap();
                    assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}

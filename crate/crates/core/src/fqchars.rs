//! The cuspidal characters of `SL2(F_q)`: the norm-one-torus family, the
//! split pair of half degree, the auxiliary sign twist on `B K_d`, and the
//! inflations to the maximal compact subgroup.
//!
//! The table itself is computed (never transcribed) and the cuspidal rows are
//! selected by the vanishing of the unipotent sum.  Labels are then attached
//! by matching against predicted values: full value vectors for the norm-one
//! family, and the two-valued Gauss sums on the unipotent classes for the
//! split pair.  A labelling failure is a loud error, not a silent guess.

use crate::burnside::{character_table, CharTable};
use crate::classfun::{ClassFun, Domain, SubChar, SubValue, C64};
use crate::errors::{Error, Result};
use crate::field::FqElem;
use crate::group::{GroupElement, QuotientGroup, Shape};
use crate::local::{LocalElem, LocalField};
use crate::numeric::{close, unit_root};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use hashbrown::HashMap;

/// A character of the norm-one subgroup of the quadratic extension
/// (cyclic of order q+1), indexed by `j` against the fixed generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormKernelChar {
    pub j: u32,
    pub modulus: u32, // q + 1
}

impl NormKernelChar {
    pub fn value_at_power(&self, k: u32) -> C64 {
        unit_root((self.j as i64) * (k as i64), self.modulus as i64)
    }

    /// Value at `-1` (which is the generator to the power `(q+1)/2`).
    pub fn at_minus_one(&self) -> f64 {
        if (self.j * (self.modulus / 2)) % self.modulus == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_quadratic(&self) -> bool {
        self.j != 0 && (2 * self.j) % self.modulus == 0
    }
}

/// Which cuspidal a table row is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspidalLabel {
    /// The norm-one-family cuspidal for the canonical index `j`
    /// (`1 <= j <= (q-1)/2`), of degree `q - 1`.
    Family(u32),
    SplitPlus,
    SplitMinus,
}

/// Norm-one elements of the quadratic extension, as pairs `a + b sqrt(eps)`.
pub struct NormOneGroup {
    pub delta: (FqElem, FqElem),
    pub dlog: HashMap<(FqElem, FqElem), u32>,
    pub order: u32,
}

impl NormOneGroup {
    fn build(k: &LocalField) -> NormOneGroup {
        let f = &k.field;
        let q = f.q;
        let mut members = Vec::new();
        for a in 0..q as u8 {
            for b in 0..q as u8 {
                if f.ext_norm((a, b)) == 1 {
                    members.push((a, b));
                }
            }
        }
        assert_eq!(members.len() as u32, q + 1);
        // find a generator
        let order_of = |x: (u8, u8)| -> u32 {
            let mut n = 1;
            let mut y = x;
            while y != (1, 0) {
                y = f.ext_mul(y, x);
                n += 1;
            }
            n
        };
        let delta = *members
            .iter()
            .find(|&&m| order_of(m) == q + 1)
            .expect("norm-one subgroup is cyclic of order q+1");
        let mut dlog = HashMap::new();
        let mut y = (1u8, 0u8);
        for i in 0..(q + 1) {
            dlog.insert(y, i);
            y = f.ext_mul(y, delta);
        }
        NormOneGroup { delta, dlog, order: q + 1 }
    }
}

/// The labelled character table of `SL2(F_q)`.
pub struct Sl2FqTable {
    pub k: Arc<LocalField>,
    pub table: CharTable,
    pub norm_one: NormOneGroup,
    /// (row index, label) for every cuspidal row.
    pub cuspidals: Vec<(usize, CuspidalLabel)>,
    pub split_plus_row: usize,
    pub split_minus_row: usize,
    family_rows: HashMap<u32, usize>,
}

fn mat1(k: &LocalField, a: u8, b: u8, c: u8, d: u8) -> GroupElement {
    let _ = k;
    GroupElement {
        e: [
            LocalElem::from_digits(0, &[a]),
            LocalElem::from_digits(0, &[b]),
            LocalElem::from_digits(0, &[c]),
            LocalElem::from_digits(0, &[d]),
        ],
    }
}

impl Sl2FqTable {
    pub fn q(&self) -> u32 {
        self.k.q()
    }

    pub fn family_row(&self, j: u32) -> Result<usize> {
        self.family_rows
            .get(&j)
            .copied()
            .ok_or_else(|| Error::Labelling(format!("no cuspidal for index {j}")))
    }

    pub fn split_row(&self, plus: bool) -> usize {
        if plus {
            self.split_plus_row
        } else {
            self.split_minus_row
        }
    }

    /// `chi(-I)/deg` of a row.
    pub fn central_sign(&self, row: usize) -> f64 {
        let m = mat1(
            &self.k,
            self.k.field.minus_one(),
            0,
            0,
            self.k.field.minus_one(),
        );
        let v = self.table.value(row, &m);
        v.re / self.table.degrees[row] as f64
    }

    /// Canonical norm-one character attached to a cuspidal row.
    pub fn omega_of_row(&self, row: usize) -> NormKernelChar {
        let q = self.q();
        for (r, label) in &self.cuspidals {
            if *r == row {
                return match label {
                    CuspidalLabel::Family(j) => NormKernelChar { j: *j, modulus: q + 1 },
                    _ => NormKernelChar { j: (q + 1) / 2, modulus: q + 1 },
                };
            }
        }
        panic!("row {row} is not cuspidal");
    }
}

/// Predicted character vector of the norm-one-family representation for
/// `omega`, on every conjugacy class.  Used for labelling and verified
/// against the computed table.
fn predicted_family_vector(
    k: &LocalField,
    t: &CharTable,
    ext: &NormOneGroup,
    omega: NormKernelChar,
) -> Result<Vec<C64>> {
    let f = &k.field;
    let q = f.q;
    let nclasses = t.chars[0].len();
    let mut pred: Vec<Option<C64>> = alloc::vec![None; nclasses];
    let mut put = |idx: usize, v: C64| -> Result<()> {
        match pred[idx] {
            None => {
                pred[idx] = Some(v);
                Ok(())
            }
            Some(old) if close(old, v, 1e-9) => Ok(()),
            Some(old) => Err(Error::Inconsistent(format!(
                "conflicting class predictions {old} vs {v}"
            ))),
        }
    };
    let m1 = f.minus_one();
    let omega_z = |z: u8| -> C64 {
        if z == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(omega.at_minus_one(), 0.0)
        }
    };
    // Central and unipotent classes z * [[1,0],[c,1]].
    for z in [1u8, m1] {
        for c in 0..q as u8 {
            let g = mat1(k, z, 0, f.mul(z, c), z);
            let idx = t.class_index(&g);
            let v = if c == 0 {
                omega_z(z) * (q - 1) as f64
            } else {
                -omega_z(z)
            };
            put(idx, v)?;
        }
    }
    // Elliptic classes: t(a,b) = [[a, b],[b eps, a]], b != 0.
    for a in 0..q as u8 {
        for b in 1..q as u8 {
            if f.ext_norm((a, b)) != 1 {
                continue;
            }
            let g = mat1(k, a, b, f.mul(b, f.eps), a);
            let idx = t.class_index(&g);
            let kpow = ext.dlog[&(a, b)];
            let v = -(omega.value_at_power(kpow) + omega.value_at_power(ext.order - kpow));
            put(idx, v)?;
        }
    }
    // Split regular classes: diag(a, a^-1), a != +-1.
    for a in 2..q as u8 {
        if a == m1 {
            continue;
        }
        let g = mat1(k, a, 0, 0, f.inv(a));
        put(t.class_index(&g), C64::new(0.0, 0.0))?;
    }
    pred.into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::Labelling(format!("class {i} not predicted"))))
        .collect()
}

/// Builds and labels the cuspidal data of `SL2(F_q)`.
pub fn sl2fq_cuspidal_table(k: &Arc<LocalField>, seed: u64) -> Result<Sl2FqTable> {
    let q = k.q();
    if q > 16 {
        return Err(Error::Domain(format!("table construction capped well above desk scale, got q={q}")));
    }
    let f = &k.field;
    let grp = QuotientGroup::new(1, q);
    let elems: Vec<GroupElement> = (0..grp.len()).map(|i| grp.get(i, f)).collect();
    let table = character_table(&elems, f, seed)?;
    let norm_one = NormOneGroup::build(k);

    // Cuspidality: the full unipotent sum vanishes.
    let unip: Vec<GroupElement> = (0..q as u8).map(|b| mat1(k, 1, b, 0, 1)).collect();
    let mut cuspidal_rows = Vec::new();
    for (row, chi) in table.chars.iter().enumerate() {
        let s: C64 = unip.iter().map(|u| chi[table.class_index(u)]).sum();
        if s.norm() < 1e-6 {
            cuspidal_rows.push(row);
        }
    }

    // Label the norm-one family by full predicted vectors.
    let mut family_rows = HashMap::new();
    let mut cuspidals = Vec::new();
    let mut used = alloc::vec![false; table.chars.len()];
    for j in 1..=((q - 1) / 2) {
        let omega = NormKernelChar { j, modulus: q + 1 };
        let pred = predicted_family_vector(k, &table, &norm_one, omega)?;
        let mut found = None;
        for &row in &cuspidal_rows {
            if table.degrees[row] != (q - 1) as u64 || used[row] {
                continue;
            }
            let ok = (0..pred.len()).all(|i| close(table.chars[row][i], pred[i], 1e-6));
            if ok {
                found = Some(row);
                break;
            }
        }
        let row = found.ok_or_else(|| {
            Error::Labelling(format!("no table row matches the predicted cuspidal for j={j}"))
        })?;
        used[row] = true;
        family_rows.insert(j, row);
        cuspidals.push((row, CuspidalLabel::Family(j)));
    }

    // Split pair: the two remaining cuspidal rows of degree (q-1)/2.  Their
    // sum must be the predicted vector for the quadratic character, and the
    // signs are pinned by the Gauss-type values on the unipotent classes:
    // chi(z g_c) = xi_{-z c x} theta0(z) with x = 1 for plus, eps for minus.
    let omega0 = NormKernelChar { j: (q + 1) / 2, modulus: q + 1 };
    assert!(omega0.is_quadratic());
    let halves: Vec<usize> = cuspidal_rows
        .iter()
        .copied()
        .filter(|&r| table.degrees[r] == ((q - 1) / 2) as u64 && !used[r])
        .collect();
    if halves.len() != 2 {
        return Err(Error::Labelling(format!(
            "expected exactly 2 split cuspidal rows, found {}",
            halves.len()
        )));
    }
    let pred0 = predicted_family_vector(k, &table, &norm_one, omega0)?;
    for i in 0..pred0.len() {
        let s = table.chars[halves[0]][i] + table.chars[halves[1]][i];
        if !close(s, pred0[i], 1e-6) {
            return Err(Error::Labelling(
                "split rows do not sum to the quadratic-family character".into(),
            ));
        }
    }
    let theta0 = omega0.at_minus_one();
    let m1 = f.minus_one();
    let matches_sign = |row: usize, x: FqElem| -> bool {
        for z in [1u8, m1] {
            for c in 1..q as u8 {
                let g = mat1(k, z, 0, f.mul(z, c), z);
                let idx = table.class_index(&g);
                let u = f.neg(f.mul(z, f.mul(c, x)));
                let want = k.xi(u).unwrap() * if z == 1 { 1.0 } else { theta0 };
                if !close(table.chars[row][idx], want, 1e-6) {
                    return false;
                }
            }
        }
        true
    };
    let plus: Vec<usize> = halves.iter().copied().filter(|&r| matches_sign(r, 1)).collect();
    let minus: Vec<usize> = halves
        .iter()
        .copied()
        .filter(|&r| matches_sign(r, f.eps))
        .collect();
    if plus.len() != 1 || minus.len() != 1 || plus[0] == minus[0] {
        return Err(Error::Labelling(
            "the Gauss-sum pattern did not pin the split pair (additive character convention bug)"
                .into(),
        ));
    }
    cuspidals.push((plus[0], CuspidalLabel::SplitPlus));
    cuspidals.push((minus[0], CuspidalLabel::SplitMinus));

    Ok(Sl2FqTable {
        k: k.clone(),
        table,
        norm_one,
        cuspidals,
        split_plus_row: plus[0],
        split_minus_row: minus[0],
        family_rows,
    })
}

// ---------------------------------------------------------------------------
// Class functions built from the table.
// ---------------------------------------------------------------------------

/// The value of the canonical order-(q-1) character of the diagonal residue
/// torus at a unit (it sends `-1` to `-1`).
pub fn diag_sign_char(k: &LocalField, a0: FqElem) -> C64 {
    unit_root(k.field.dlog(a0) as i64, (k.q() - 1) as i64)
}

/// `sigma^{eta^d}` on `B K_d` (optionally twisted by the trivial extension
/// `tau` of the diagonal character above), as a formula-backed subgroup
/// character at modulus `n >= d + 1`: the value only depends on the
/// lower-triangular residue reduction of the `eta^{-d}`-conjugate.
pub struct CuspidalOnBkd {
    pub fq: Arc<Sl2FqTable>,
    pub row: usize,
    pub d: i32,
    pub n: i32,
    pub tau_twist: bool,
}

impl SubValue for CuspidalOnBkd {
    fn modulus(&self) -> i32 {
        self.n
    }
    fn degree(&self) -> f64 {
        self.fq.table.degrees[self.row] as f64
    }
    fn domain(&self) -> Domain {
        Domain::Shaped { shape: Shape::bkd(self.d), n: self.n }
    }
    fn contains(&self, g: &GroupElement) -> bool {
        g.e[2].val().at_least(self.d) && g.e[0].coeff(0) != Some(0)
    }
    fn eval_in(&self, g: &GroupElement) -> C64 {
        let k = &self.fq.k;
        let a0 = g.e[0].coeff(0).unwrap();
        let d0 = g.e[3].coeff(0).unwrap();
        let c0 = g.e[2].coeff(self.d).unwrap();
        let red = mat1(k, a0, 0, c0, d0);
        let mut v = self.fq.table.value(self.row, &red);
        if self.tau_twist {
            v *= diag_sign_char(k, a0);
        }
        v
    }
}

/// The inflation of a table row to the full quotient at modulus `n`.
pub struct CuspidalInflation {
    pub fq: Arc<Sl2FqTable>,
    pub row: usize,
    pub n: i32,
}

impl SubValue for CuspidalInflation {
    fn modulus(&self) -> i32 {
        self.n
    }
    fn degree(&self) -> f64 {
        self.fq.table.degrees[self.row] as f64
    }
    fn domain(&self) -> Domain {
        Domain::Full { n: self.n }
    }
    fn contains(&self, _g: &GroupElement) -> bool {
        true
    }
    fn eval_in(&self, g: &GroupElement) -> C64 {
        let k = &self.fq.k;
        let red = mat1(
            k,
            g.e[0].coeff(0).unwrap(),
            g.e[1].coeff(0).unwrap(),
            g.e[2].coeff(0).unwrap(),
            g.e[3].coeff(0).unwrap(),
        );
        self.fq.table.value(self.row, &red)
    }
}

/// The trivial extension to `B K_d` of the canonical sign character of the
/// diagonal torus (`tau(-1) = -1`).
pub struct TauOnBkd {
    pub k: Arc<LocalField>,
    pub d: i32,
    pub n: i32,
}

impl SubValue for TauOnBkd {
    fn modulus(&self) -> i32 {
        self.n
    }
    fn degree(&self) -> f64 {
        1.0
    }
    fn domain(&self) -> Domain {
        Domain::Shaped { shape: Shape::bkd(self.d), n: self.n }
    }
    fn contains(&self, g: &GroupElement) -> bool {
        g.e[2].val().at_least(self.d) && g.e[0].coeff(0) != Some(0)
    }
    fn eval_in(&self, g: &GroupElement) -> C64 {
        diag_sign_char(&self.k, g.e[0].coeff(0).unwrap())
    }
}

/// Convenience constructors used by the branching tables.
pub fn sigma_on_bkd(
    fq: &Arc<Sl2FqTable>,
    row: usize,
    d: i32,
    n: i32,
    tau_twist: bool,
) -> SubChar {
    SubChar(Arc::new(CuspidalOnBkd {
        fq: fq.clone(),
        row,
        d,
        n,
        tau_twist,
    }))
}

pub fn sigma_inflated(fq: &Arc<Sl2FqTable>, row: usize, n: i32) -> ClassFun {
    ClassFun::Sub(SubChar(Arc::new(CuspidalInflation { fq: fq.clone(), row, n })))
}

pub fn tau_char(k: &Arc<LocalField>, d: i32, n: i32) -> SubChar {
    SubChar(Arc::new(TauOnBkd { k: k.clone(), d, n }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classfun::{inner_product_over, intertwining_number};

    fn ctx(q: u32) -> Arc<LocalField> {
        Arc::new(LocalField::new(q).unwrap())
    }

    #[test]
    fn q3_labels() {
        let k = ctx(3);
        let t = sl2fq_cuspidal_table(&k, 7).unwrap();
        // one family cuspidal of degree 2, the split pair of degree 1
        assert_eq!(t.family_rows.len(), 1);
        assert_eq!(t.table.degrees[t.family_row(1).unwrap()], 2);
        assert_eq!(t.table.degrees[t.split_plus_row], 1);
        assert_eq!(t.table.degrees[t.split_minus_row], 1);
        // central character of the split pair at q=3 is trivial
        assert!((t.central_sign(t.split_plus_row) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn q5_q7_counts() {
        for q in [5u32, 7] {
            let k = ctx(q);
            let t = sl2fq_cuspidal_table(&k, 11).unwrap();
            assert_eq!(t.family_rows.len() as u32, (q - 1) / 2);
            for j in 1..=(q - 1) / 2 {
                assert_eq!(t.table.degrees[t.family_row(j).unwrap()], (q - 1) as u64);
            }
            assert_eq!(t.table.degrees[t.split_plus_row], ((q - 1) / 2) as u64);
        }
    }

    #[test]
    fn restriction_to_lower_borel() {
        // <chi_1, chi_2> on B^op is 2 when the central characters agree and 0
        // otherwise; the tau twist converts the 0 case into 2.
        for q in [3u32, 5] {
            let k = ctx(q);
            let t = Arc::new(sl2fq_cuspidal_table(&k, 3).unwrap());
            let n = 1;
            let bop = Domain::Shaped { shape: Shape::borel_op(n), n };
            let rows: Vec<usize> = t.cuspidals.iter().map(|(r, _)| *r).collect();
            for &r1 in &rows {
                for &r2 in &rows {
                    let f1 = sigma_restricted_to_bop(&t, r1, n);
                    let f2 = sigma_restricted_to_bop(&t, r2, n);
                    let ip = inner_product_over(&bop, &f1, &f2, &k);
                    let same = (t.central_sign(r1) - t.central_sign(r2)).abs() < 1e-9;
                    let expect = if same { 2.0 } else { 0.0 };
                    assert!(
                        (ip.re - expect).abs() < 1e-6 && ip.im.abs() < 1e-6,
                        "q={q} rows {r1},{r2}: got {ip}"
                    );
                }
            }
        }
    }

    fn sigma_restricted_to_bop(t: &Arc<Sl2FqTable>, row: usize, n: i32) -> ClassFun {
        // On B^op the inflation and the restriction agree; reuse the
        // inflation and sum only over B^op.
        sigma_inflated(t, row, n)
    }

    #[test]
    fn family_norm_one() {
        // <chi, chi> = 1 on the full group for a cuspidal row.
        let k = ctx(3);
        let t = Arc::new(sl2fq_cuspidal_table(&k, 3).unwrap());
        let f = sigma_inflated(&t, t.family_row(1).unwrap(), 1);
        let m = intertwining_number(&f, &f, &Domain::Full { n: 1 }, &k, 1e-6).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn inflation_depth_zero() {
        let k = ctx(3);
        let t = Arc::new(sl2fq_cuspidal_table(&k, 3).unwrap());
        let f = sigma_inflated(&t, t.family_row(1).unwrap(), 3);
        assert_eq!(crate::classfun::depth_of(&f, &k, 1e-6).unwrap(), 0);
        assert_eq!(f.degree(), 2.0);
    }

    #[test]
    fn tau_values() {
        let k = ctx(5);
        let tau = tau_char(&k, 1, 2);
        // tau(-I) = -1
        let m1 = GroupElement::minus_identity(2, &k.field);
        assert!((tau.eval(&m1) - C64::new(-1.0, 0.0)).norm() < 1e-12);
        // trivial on unit upper triangular
        let u = GroupElement {
            e: [
                LocalElem::one(2),
                LocalElem::digit_at(2, 0, 2),
                LocalElem::zero(0, 2),
                LocalElem::one(2),
            ],
        };
        assert!((tau.eval(&u) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

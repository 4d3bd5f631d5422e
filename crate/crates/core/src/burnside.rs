//! Complex character tables of small finite groups by the class-algebra
//! method: the rows are recovered as simultaneous eigenvectors of the class
//! multiplication matrices, found through random Hermitian combinations.

use crate::eigen::{hermitian_eigen, mat_vec, CMat};
use crate::errors::{Error, Result};
use crate::field::Field;
use crate::group::GroupElement;
use crate::rng::XorShift64;
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use num_complex::Complex64;

type C64 = Complex64;

pub struct ClassData {
    pub reps: Vec<GroupElement>,
    pub sizes: Vec<u64>,
    pub class_of: HashMap<GroupElement, usize>,
    pub inverse_class: Vec<usize>,
}

/// Conjugacy classes of the group given by its element list.
pub fn conjugacy_classes(elems: &[GroupElement], f: &Field) -> ClassData {
    let mut class_of: HashMap<GroupElement, usize> = HashMap::with_capacity(elems.len());
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for x in elems {
        if class_of.contains_key(x) {
            continue;
        }
        let idx = reps.len();
        reps.push(*x);
        let mut size = 0u64;
        for g in elems {
            let c = g.mul(x, f).mul(&g.inverse(f), f);
            if class_of.insert(c, idx).is_none() {
                size += 1;
            }
        }
        sizes.push(size);
    }
    let inverse_class = reps
        .iter()
        .map(|r| class_of[&r.inverse(f)])
        .collect();
    ClassData { reps, sizes, class_of, inverse_class }
}

pub struct CharTable {
    pub classes: ClassData,
    /// `chars[i][j]` is the value of the `i`-th irreducible character on the
    /// `j`-th class.
    pub chars: Vec<Vec<C64>>,
    pub degrees: Vec<u64>,
    pub group_order: u64,
}

impl CharTable {
    pub fn value(&self, i: usize, g: &GroupElement) -> C64 {
        self.chars[i][self.classes.class_of[g]]
    }

    pub fn class_index(&self, g: &GroupElement) -> usize {
        self.classes.class_of[g]
    }
}

/// Splits the span of `cols` (orthonormal columns over the class index) into
/// common eigenvectors of the family `mats`, recursing through random
/// Hermitian combinations.
fn split_subspace(
    mats: &[CMat],
    inverse_class: &[usize],
    cols: Vec<Vec<C64>>,
    rng: &mut XorShift64,
    depth: u32,
) -> Result<Vec<Vec<C64>>> {
    if cols.len() <= 1 {
        return Ok(cols);
    }
    if depth > 12 {
        return Err(Error::Degenerate(
            "eigenvector separation failed; increase recombination rounds".into(),
        ));
    }
    let k = mats.len();
    // Random Hermitian member of the commuting family: coefficients paired
    // with the inverse class carry conjugate values.
    let mut coeff = vec![C64::new(0.0, 0.0); k];
    for i in 0..k {
        let z = C64::new(rng.signed_unit(), rng.signed_unit());
        if inverse_class[i] == i {
            coeff[i] = C64::new(z.re, 0.0);
        } else if coeff[i] == C64::new(0.0, 0.0) {
            coeff[i] = z;
            coeff[inverse_class[i]] = z.conj();
        }
    }
    let n = mats[0].len();
    let mut combo: CMat = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..k {
        for r in 0..n {
            for c in 0..n {
                combo[r][c] += coeff[i] * mats[i][r][c];
            }
        }
    }
    // Project onto the subspace spanned by cols: S = U^dagger combo U.
    let m = cols.len();
    let mut s: CMat = vec![vec![C64::new(0.0, 0.0); m]; m];
    for a in 0..m {
        let cu = mat_vec(&combo, &cols[a]);
        for b in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                acc += cols[b][i].conj() * cu[i];
            }
            s[b][a] = acc;
        }
    }
    let (vals, vecs) = hermitian_eigen(&s);
    // New columns in the big space.
    let mut new_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for e in 0..m {
        let mut col = vec![C64::new(0.0, 0.0); n];
        for (a, base) in cols.iter().enumerate() {
            for i in 0..n {
                col[i] += base[i] * vecs[a][e];
            }
        }
        new_cols.push(col);
    }
    // Cluster by eigenvalue.
    let scale = vals.iter().fold(1.0f64, |acc, v| acc.max(crate::numeric::abs(*v)));
    let mut used = vec![false; m];
    let mut out = Vec::with_capacity(m);
    for e in 0..m {
        if used[e] {
            continue;
        }
        let mut cluster = vec![new_cols[e].clone()];
        used[e] = true;
        for f in (e + 1)..m {
            if !used[f] && crate::numeric::abs(vals[f] - vals[e]) < 1e-8 * scale {
                cluster.push(new_cols[f].clone());
                used[f] = true;
            }
        }
        if cluster.len() == 1 {
            out.push(cluster.pop().unwrap());
        } else {
            out.extend(split_subspace(mats, inverse_class, cluster, rng, depth + 1)?);
        }
    }
    Ok(out)
}

/// Builds the full complex character table.
pub fn character_table(elems: &[GroupElement], f: &Field, seed: u64) -> Result<CharTable> {
    let order = elems.len() as u64;
    let classes = conjugacy_classes(elems, f);
    let k = classes.reps.len();

    // Class multiplication coefficients a[i][j][l], via one pass over G x C_i.
    // (M_i)_{j,l} = a_{ijl} satisfies M_i u = omega_i u for the eigenvalue
    // vectors u_j = |C_j| chi_j / chi(1).
    let mut members: Vec<Vec<GroupElement>> = vec![Vec::new(); k];
    for g in elems {
        members[classes.class_of[g]].push(*g);
    }
    let mut mats: Vec<CMat> = Vec::with_capacity(k);
    for i in 0..k {
        let mut m: CMat = vec![vec![C64::new(0.0, 0.0); k]; k];
        for (j, mem_j) in members.iter().enumerate() {
            // count products x*y0 with x in C_i landing in each class, for a
            // fixed representative y0 of C_j -- the count against a fixed
            // product-class member z0 needs the double loop; do it the robust
            // way: loop x in C_i, y in C_j, bucket class(xy), then divide by
            // |C_l| to get a_{ijl}.
            let _ = mem_j;
            let mut bucket = vec![0u64; k];
            for x in &members[i] {
                for y in &members[j] {
                    bucket[classes.class_of[&x.mul(y, f)]] += 1;
                }
            }
            for l in 0..k {
                m[j][l] = C64::new(bucket[l] as f64 / classes.sizes[l] as f64, 0.0);
            }
        }
        mats.push(m);
    }

    // Rescale to the Hermitian normalization B = D M D^-1, D = diag(1/sqrt|C|).
    let mut bmats: Vec<CMat> = Vec::with_capacity(k);
    for m in &mats {
        let mut b: CMat = vec![vec![C64::new(0.0, 0.0); k]; k];
        for j in 0..k {
            for l in 0..k {
                b[j][l] = m[j][l]
                    * libm::sqrt(classes.sizes[l] as f64 / classes.sizes[j] as f64);
            }
        }
        bmats.push(b);
    }

    let mut rng = XorShift64::new(seed);
    // Start from the standard basis and split.
    let start: Vec<Vec<C64>> = (0..k)
        .map(|i| {
            let mut v = vec![C64::new(0.0, 0.0); k];
            v[i] = C64::new(1.0, 0.0);
            v
        })
        .collect();
    let cols = split_subspace(&bmats, &classes.inverse_class, start, &mut rng, 0)?;
    if cols.len() != k {
        return Err(Error::Degenerate("wrong number of eigenvectors".into()));
    }

    // Recover characters: chi_j = sqrt(|G|) v_j / sqrt(|C_j|), phase-fixed so
    // chi(identity class) is a positive real (= the degree).
    let id = GroupElement::identity(classes.reps[0].modulus());
    let id_class = classes.class_of[&id];
    let mut chars = Vec::with_capacity(k);
    let mut degrees = Vec::with_capacity(k);
    for v in cols {
        let v0 = v[id_class];
        if v0.norm() < 1e-9 {
            return Err(Error::Degenerate("eigenvector vanishes at the identity class".into()));
        }
        let phase = v0.conj() / v0.norm();
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            row.push(v[j] * phase * libm::sqrt(order as f64 / classes.sizes[j] as f64));
        }
        let deg = crate::numeric::as_nonneg_int(row[id_class], 1e-5)?;
        degrees.push(deg);
        chars.push(row);
    }
    // Sort rows by degree, then by value pattern for determinism.
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| {
        degrees[a].cmp(&degrees[b]).then_with(|| {
            for j in 0..k {
                let x = (chars[a][j].re, chars[a][j].im);
                let y = (chars[b][j].re, chars[b][j].im);
                let c = x.partial_cmp(&y).unwrap_or(core::cmp::Ordering::Equal);
                if c != core::cmp::Ordering::Equal {
                    return c;
                }
            }
            core::cmp::Ordering::Equal
        })
    });
    let chars: Vec<Vec<C64>> = idx.iter().map(|&i| chars[i].clone()).collect();
    let degrees: Vec<u64> = idx.iter().map(|&i| degrees[i]).collect();

    let table = CharTable { classes, chars, degrees, group_order: order };
    verify_orthogonality(&table, 1e-6)?;
    Ok(table)
}

/// Row orthogonality and the degree sum; returns an error on violation.
pub fn verify_orthogonality(t: &CharTable, tol: f64) -> Result<()> {
    let k = t.chars.len();
    let sum_deg_sq: u64 = t.degrees.iter().map(|d| d * d).sum();
    if sum_deg_sq != t.group_order {
        return Err(Error::Inconsistent(alloc::format!(
            "degree squares sum to {sum_deg_sq}, group order is {}",
            t.group_order
        )));
    }
    for a in 0..k {
        for b in 0..k {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..k {
                acc += t.chars[a][j] * t.chars[b][j].conj() * t.classes.sizes[j] as f64;
            }
            acc /= t.group_order as f64;
            let expect = if a == b { 1.0 } else { 0.0 };
            if crate::numeric::abs(acc.re - expect) > tol || crate::numeric::abs(acc.im) > tol {
                return Err(Error::Inconsistent(alloc::format!(
                    "rows {a},{b} have inner product {acc}"
                )));
            }
        }
    }
    Ok(())
}

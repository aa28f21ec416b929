//! 5×5 non-negative integer matrices and the sorted-prefix potential.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

/// A permutation of `0..5`; `p[i]` is the image of `i`.
pub type Perm5 = [usize; 5];

/// All 120 permutations of five points, identity first.
pub fn permutations() -> &'static [Perm5] {
    static PERMS: OnceLock<Vec<Perm5>> = OnceLock::new();
    PERMS.get_or_init(|| {
        let mut out = Vec::with_capacity(120);
        let mut cur = [0usize; 5];
        fn rec(k: usize, used: &mut [bool; 5], cur: &mut Perm5, out: &mut Vec<Perm5>) {
            if k == 5 {
                out.push(*cur);
                return;
            }
            for v in 0..5 {
                if !used[v] {
                    used[v] = true;
                    cur[k] = v;
                    rec(k + 1, used, cur, out);
                    used[v] = false;
                }
            }
        }
        rec(0, &mut [false; 5], &mut cur, &mut out);
        out
    })
}

/// Exact 5×5 matrix with non-negative entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix5 {
    entries: [[BigUint; 5]; 5],
}

impl fmt::Debug for Matrix5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

impl Matrix5 {
    pub fn zero() -> Self {
        Matrix5 { entries: Default::default() }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..5 {
            m.entries[i][i] = BigUint::one();
        }
        m
    }

    /// The matrix with a 2×2 block of ones followed by three diagonal ones.
    pub fn a0() -> Self {
        Self::from_u64([[1, 1, 0, 0, 0], [1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    }

    pub fn from_u64(rows: [[u64; 5]; 5]) -> Self {
        let mut m = Self::zero();
        for i in 0..5 {
            for j in 0..5 {
                m.entries[i][j] = BigUint::from(rows[i][j]);
            }
        }
        m
    }

    pub fn from_entries(entries: [[BigUint; 5]; 5]) -> Self {
        Matrix5 { entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[[BigUint; 5]; 5] {
        &self.entries
    }

    pub fn sum(&self) -> BigUint {
        self.entries.iter().flatten().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..5 {
            for j in 0..5 {
                m.entries[j][i] = self.entries[i][j].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix5) -> Matrix5 {
        let mut m = Self::zero();
        for i in 0..5 {
            for k in 0..5 {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..5 {
                    m.entries[i][j] += &self.entries[i][k] * &other.entries[k][j];
                }
            }
        }
        m
    }

    /// `P · self · Q` where `P` sends row `p[i]` to row `i` and `Q` sends
    /// column `q[j]` to column `j`.
    pub fn permuted(&self, p: &Perm5, q: &Perm5) -> Matrix5 {
        let mut m = Self::zero();
        for i in 0..5 {
            for j in 0..5 {
                m.entries[i][j] = self.entries[p[i]][q[j]].clone();
            }
        }
        m
    }

    /// Column action `self · x`.
    pub fn apply(&self, x: &PotentialVector) -> PotentialVector {
        let mut out: [BigUint; 5] = Default::default();
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..5 {
                *o += &self.entries[i][j] * &x.0[j];
            }
        }
        PotentialVector(out)
    }

    /// Entrywise `self >= other`.
    pub fn majorizes(&self, other: &Matrix5) -> bool {
        (0..5).all(|i| (0..5).all(|j| self.entries[i][j] >= other.entries[i][j]))
    }

    /// Row and column permutations `(p, q)` with `self` majorizing
    /// `other.permuted(p, q)`, if any.
    pub fn domination_witness(&self, other: &Matrix5) -> Option<(Perm5, Perm5)> {
        let mut ge = [[[[false; 5]; 5]; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        ge[i][j][k][l] = self.entries[i][j] >= other.entries[k][l];
                    }
                }
            }
        }
        let perms = permutations();
        for p in perms {
            for q in perms {
                if (0..5).all(|i| (0..5).all(|j| ge[i][j][p[i]][q[j]])) {
                    return Some((*p, *q));
                }
            }
        }
        None
    }

    pub fn dominates(&self, other: &Matrix5) -> bool {
        self.domination_witness(other).is_some()
    }

    pub fn is_dominant(&self) -> bool {
        self.dominates(&Matrix5::a0())
    }

    /// Every row and every column has at least two entries that are ≥ 1.
    pub fn is_doubling(&self) -> bool {
        let rows_ok = (0..5).all(|i| (0..5).filter(|&j| !self.entries[i][j].is_zero()).count() >= 2);
        let cols_ok = (0..5).all(|j| (0..5).filter(|&i| !self.entries[i][j].is_zero()).count() >= 2);
        rows_ok && cols_ok
    }

    pub fn classify(&self) -> Classification {
        match (self.is_dominant(), self.is_doubling()) {
            (true, true) => Classification::Both,
            (true, false) => Classification::Dominant,
            (false, true) => Classification::Doubling,
            (false, false) => Classification::Neither,
        }
    }

    /// Equal up to row and column permutations.
    pub fn permutation_equivalent(&self, other: &Matrix5) -> bool {
        let perms = permutations();
        perms.iter().any(|p| perms.iter().any(|q| &other.permuted(p, q) == self))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries.iter().map(|r| serde_json::Value::Array(r.iter().map(big_to_json).collect())).collect(),
        )
    }
}

/// JSON number when the value fits in 64 bits, decimal string otherwise.
pub fn big_to_json(x: &BigUint) -> serde_json::Value {
    match u64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(x.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Dominant,
    Doubling,
    Both,
    Neither,
}

impl Classification {
    pub fn is_dominant(self) -> bool {
        matches!(self, Classification::Dominant | Classification::Both)
    }

    pub fn is_doubling(self) -> bool {
        matches!(self, Classification::Doubling | Classification::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Dominant => "dominant",
            Classification::Doubling => "doubling",
            Classification::Both => "both",
            Classification::Neither => "neither",
        }
    }
}

/// A length-5 vector of non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PotentialVector(pub [BigUint; 5]);

impl PotentialVector {
    pub fn ones() -> Self {
        PotentialVector(std::array::from_fn(|_| BigUint::one()))
    }

    pub fn from_u64(x: [u64; 5]) -> Self {
        PotentialVector(x.map(BigUint::from))
    }

    /// Row action `selfᵀ · m`.
    pub fn times(&self, m: &Matrix5) -> PotentialVector {
        let mut out: [BigUint; 5] = Default::default();
        for (j, o) in out.iter_mut().enumerate() {
            for i in 0..5 {
                *o += &self.0[i] * m.get(i, j);
            }
        }
        PotentialVector(out)
    }

    pub fn permuted(&self, p: &Perm5) -> PotentialVector {
        PotentialVector(std::array::from_fn(|i| self.0[p[i]].clone()))
    }

    /// Sum of the `k` smallest entries.
    pub fn s(&self, k: usize) -> BigUint {
        assert!((1..=5).contains(&k), "k must be in 1..=5");
        let mut sorted = self.0.clone();
        sorted.sort();
        sorted[..k].iter().sum()
    }

    /// `s1 · s2 · s4 · s5`.
    pub fn potential(&self) -> BigUint {
        let mut sorted = self.0.clone();
        sorted.sort();
        let mut prefix = BigUint::zero();
        let mut out = BigUint::one();
        for (k, x) in sorted.iter().enumerate() {
            prefix += x;
            if k != 2 {
                out *= &prefix;
            }
        }
        out
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }
}

/// One multiplication step of [`verify_product_bound`].
#[derive(Clone, Debug, Serialize)]
pub struct ProductStep {
    pub classification: Classification,
    pub potential_before: String,
    pub potential_after: String,
    /// 3/2 for dominant-only steps, 10 for doubling steps.
    pub required_ratio: &'static str,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub n: usize,
    /// `1ᵀ M1 ⋯ Mn 1`.
    pub total: String,
    /// `(total)^4 · 2^n >= 3^n`.
    pub bound_holds: bool,
    pub steps: Vec<ProductStep>,
    /// First step (0-based) that violated its growth requirement, or that
    /// was neither dominant nor doubling.
    pub first_violation: Option<usize>,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        self.bound_holds && self.first_violation.is_none()
    }
}

/// `total^4 · 2^n >= 3^n`, i.e. `total >= (3/2)^(n/4)`.
pub fn meets_three_halves_bound(total: &BigUint, n: usize) -> bool {
    let lhs = total.pow(4u32) << n;
    let rhs = BigUint::from(3u32).pow(n as u32);
    lhs >= rhs
}

/// Multiplies `1ᵀ M1 ⋯ Mn` step by step, checking the potential growth
/// required by each matrix's class and the final `(3/2)^(n/4)` bound.
pub fn verify_product_bound(ms: &[Matrix5]) -> ProductReport {
    let mut x = PotentialVector::ones();
    let mut steps = Vec::with_capacity(ms.len());
    let mut first_violation = None;
    for (i, m) in ms.iter().enumerate() {
        let class = m.classify();
        let before = x.potential();
        let next = x.times(m);
        let after = next.potential();
        let (ratio, ok) = if class.is_doubling() {
            ("10", after >= &before * 10u32)
        } else if class.is_dominant() {
            ("3/2", &after * 2u32 >= &before * 3u32)
        } else {
            ("none", false)
        };
        if !ok && first_violation.is_none() {
            first_violation = Some(i);
        }
        steps.push(ProductStep {
            classification: class,
            potential_before: before.to_string(),
            potential_after: after.to_string(),
            required_ratio: ratio,
            ok,
        });
        x = next;
    }
    let total = x.total();
    ProductReport {
        n: ms.len(),
        bound_holds: meets_three_halves_bound(&total, ms.len()),
        total: total.to_string(),
        steps,
        first_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn there_are_120_permutations() {
        let perms = permutations();
        assert_eq!(perms.len(), 120);
        assert_eq!(perms[0], [0, 1, 2, 3, 4]);
        let mut sorted = perms.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 120);
    }

    #[test]
    fn a0_examples() {
        let a0 = Matrix5::a0();
        assert!(a0.is_dominant());
        assert!(a0.dominates(&Matrix5::identity()));
        assert!(!Matrix5::identity().dominates(&a0));
        assert!(!Matrix5::identity().is_doubling());
        assert!(Matrix5::from_u64([[1; 5]; 5]).is_doubling());
        assert_eq!(a0.classify(), Classification::Dominant);
        assert_eq!(Matrix5::from_u64([[1; 5]; 5]).classify(), Classification::Both);
        assert_eq!(Matrix5::identity().classify(), Classification::Neither);
        assert_eq!(a0.sum(), BigUint::from(7u32));
    }

    #[test]
    fn potential_examples() {
        let one = PotentialVector::ones();
        let s: Vec<_> = (1..=5).map(|k| one.s(k)).collect();
        assert_eq!(s, [1u32, 2, 3, 4, 5].map(BigUint::from));
        assert_eq!(one.potential(), BigUint::from(40u32));

        let x = PotentialVector::from_u64([2, 2, 1, 1, 1]);
        assert_eq!(x.s(1), BigUint::from(1u32));
        assert_eq!(x.s(2), BigUint::from(2u32));
        assert_eq!(x.s(4), BigUint::from(5u32));
        assert_eq!(x.s(5), BigUint::from(7u32));
        assert_eq!(x.potential(), BigUint::from(70u32));
        assert_eq!(PotentialVector::ones().times(&Matrix5::a0()), x);
        assert_eq!(PotentialVector::from_u64([0; 5]).potential(), BigUint::zero());
    }

    #[test]
    fn single_a0_product() {
        let r = verify_product_bound(&[Matrix5::a0()]);
        assert_eq!(r.total, "7");
        assert!(r.passed());
    }

    #[test]
    fn neither_matrix_is_flagged() {
        let r = verify_product_bound(&[Matrix5::a0(), Matrix5::identity()]);
        assert_eq!(r.first_violation, Some(1));
        assert!(!r.passed());
    }

    #[test]
    fn three_halves_bound_is_exact() {
        // (3/2)^(4/4) = 1.5: total 1 fails, total 2 passes.
        assert!(!meets_three_halves_bound(&BigUint::from(1u32), 4));
        assert!(meets_three_halves_bound(&BigUint::from(2u32), 4));
        assert!(meets_three_halves_bound(&BigUint::from(1u32), 0));
    }
}

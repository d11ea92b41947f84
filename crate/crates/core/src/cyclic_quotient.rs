//! Two-dimensional cyclic quotient singularities and Wahl singularities.
//!
//! `1/r(q1, q2)` denotes `C^2` modulo `ζ·(x, y) = (ζ^q1 x, ζ^q2 y)` for a
//! primitive `r`-th root of unity `ζ`. Every isolated one is isomorphic to
//! some `1/r(1, q)`, and `1/r(1, q) ≅ 1/r(1, q')` exactly when `q' = q` or
//! `q q' ≡ 1 (mod r)`. [`CyclicQuotient`] stores the smaller of the two.
//!
//! A Wahl singularity is `1/n²(1, na - 1)` with `0 < a < n` coprime to `n`.
//! The presentations `(n, a)` and `(n, n - a)` differ by swapping the
//! coordinates, so they give the same singularity ([`WahlType`]), but some
//! constructions (the weighted blowup, the surfaces `W_{n,a}`) depend on the
//! ordered coordinates and take a [`WahlPair`] instead.
//!
//! Chain orientation: for `1/r(1, q)` with coordinates `(u, v)`, the first
//! curve of `hj_expand(r, q)` meets the strict transform of `(v = 0)` and the
//! last one meets the strict transform of `(u = 0)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{hj_evaluate, hj_expand, int, mod_inverse, modulo, HjChain};
use crate::homology::{AbelianGroup, ChainComplex, IntMatrix};

/// A cyclic quotient singularity in canonical form `1/r(1, q)`,
/// `q = min(q, q⁻¹ mod r)`. `r = 1` (with `q = 0`) is a smooth point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicQuotient {
    #[serde(with = "crate::serial::dec")]
    r: BigInt,
    #[serde(with = "crate::serial::dec")]
    q: BigInt,
}

impl CyclicQuotient {
    /// `1/r(1, q)`, canonicalized.
    pub fn new(r: &BigInt, q: &BigInt) -> Result<Self> {
        normalize_cq(r, &BigInt::one(), q)
    }

    pub fn smooth() -> Self {
        Self { r: BigInt::one(), q: BigInt::zero() }
    }

    pub fn order(&self) -> &BigInt {
        &self.r
    }

    pub fn twist(&self) -> &BigInt {
        &self.q
    }

    pub fn is_smooth(&self) -> bool {
        self.r.is_one()
    }

    /// The other presentation `1/r(1, q⁻¹)` (equal to `q` for smooth points).
    pub fn inverse_twist(&self) -> BigInt {
        if self.is_smooth() {
            BigInt::zero()
        } else {
            mod_inverse(&self.q, &self.r).expect("canonical twist is a unit")
        }
    }

    /// `A_{r-1}` Du Val singularities are `1/r(1, r - 1)`.
    pub fn is_du_val_a(&self) -> bool {
        !self.is_smooth() && modulo(&(&self.q + 1), &self.r).is_zero()
    }
}

impl fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_smooth() {
            f.write_str("smooth")
        } else {
            write!(f, "1/{}(1,{})", self.r, self.q)
        }
    }
}

/// Reduces `1/r(q1, q2)` to canonical `1/r(1, q1⁻¹ q2)`.
pub fn normalize_cq(r: &BigInt, q1: &BigInt, q2: &BigInt) -> Result<CyclicQuotient> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument(format!("order must be positive, got {r}")));
    }
    if r.is_one() {
        return Ok(CyclicQuotient::smooth());
    }
    for q in [q1, q2] {
        if !q.gcd(r).is_one() {
            return Err(Error::NonIsolatedQuotient { r: r.clone(), q: q.clone() });
        }
    }
    let q = modulo(&(mod_inverse(q1, r)? * q2), r);
    let inv = mod_inverse(&q, r)?;
    Ok(CyclicQuotient { r: r.clone(), q: q.min(inv) })
}

/// Isomorphism class of a Wahl singularity `1/n²(1, na - 1)`,
/// stored with `a = min(a, n - a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WahlType {
    #[serde(with = "crate::serial::dec")]
    n: BigInt,
    #[serde(with = "crate::serial::dec")]
    a: BigInt,
}

/// A Wahl singularity together with its ordered orbifold coordinates `(u, v)`:
/// the action is `(u, v) ↦ (ξu, ξ^{na-1}v)` with this particular `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WahlPair {
    #[serde(with = "crate::serial::dec")]
    n: BigInt,
    #[serde(with = "crate::serial::dec")]
    a: BigInt,
}

fn check_wahl(n: &BigInt, a: &BigInt) -> Result<()> {
    if *n < int(2) {
        return Err(Error::InvalidArgument(format!("Wahl index must be at least 2, got {n}")));
    }
    if !(a.is_positive() && a < n) {
        return Err(Error::InvalidArgument(format!(
            "Wahl parameter must satisfy 0 < a < n, got a = {a}, n = {n}"
        )));
    }
    if !a.gcd(n).is_one() {
        return Err(Error::NotCoprime { a: a.clone(), b: n.clone() });
    }
    Ok(())
}

impl WahlPair {
    pub fn new(n: &BigInt, a: &BigInt) -> Result<Self> {
        check_wahl(n, a)?;
        Ok(Self { n: n.clone(), a: a.clone() })
    }

    pub fn from_u64(n: u64, a: u64) -> Result<Self> {
        Self::new(&int(n), &int(a))
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// `na - 1`.
    pub fn na_minus_one(&self) -> BigInt {
        &self.n * &self.a - 1
    }

    pub fn class(&self) -> WahlType {
        WahlType::canonical(&self.n, &self.a)
    }

    /// Coordinates swapped: `(n, n - a)`.
    pub fn swapped(&self) -> Self {
        Self { n: self.n.clone(), a: &self.n - &self.a }
    }

    /// The chain `hj_expand(n², na - 1)`, first curve meeting `(v = 0)'`.
    pub fn oriented_chain(&self) -> HjChain {
        hj_expand(&(&self.n * &self.n), &modulo(&self.na_minus_one(), &(&self.n * &self.n)))
            .expect("Wahl presentation is coprime")
    }
}

impl WahlType {
    pub fn new(n: &BigInt, a: &BigInt) -> Result<Self> {
        check_wahl(n, a)?;
        Ok(Self::canonical(n, a))
    }

    pub fn from_u64(n: u64, a: u64) -> Result<Self> {
        Self::new(&int(n), &int(a))
    }

    fn canonical(n: &BigInt, a: &BigInt) -> Self {
        let other = n - a;
        Self { n: n.clone(), a: a.clone().min(other) }
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// The presentation with the stored (smaller) `a`.
    pub fn pair(&self) -> WahlPair {
        WahlPair { n: self.n.clone(), a: self.a.clone() }
    }
}

impl fmt::Display for WahlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Wahl({},{})", self.n, self.a)
    }
}

impl fmt::Display for WahlPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, a={})", self.n, self.a)
    }
}

/// `1/n²(1, na - 1)` in canonical form.
pub fn wahl_to_cq(w: &WahlType) -> CyclicQuotient {
    pair_to_cq(&w.pair())
}

pub fn pair_to_cq(w: &WahlPair) -> CyclicQuotient {
    CyclicQuotient::new(&(&w.n * &w.n), &w.na_minus_one()).expect("Wahl presentation is coprime")
}

/// Recognizes `1/n²(1, na - 1)` (in either presentation).
pub fn cq_to_wahl(c: &CyclicQuotient) -> Option<WahlType> {
    if c.is_smooth() {
        return None;
    }
    let n = c.r.sqrt();
    if &n * &n != c.r || n < int(2) {
        return None;
    }
    [c.q.clone(), c.inverse_twist()].into_iter().find_map(|q| {
        // q = na - 1 (mod n²) with 0 < a < n means q + 1 = na exactly.
        let (a, rem) = (&q + BigInt::one()).div_rem(&n);
        (rem.is_zero() && a.is_positive() && a < n && a.gcd(&n).is_one()).then(|| WahlType::canonical(&n, &a))
    })
}

/// Minimal resolution chain of the canonical presentation `1/r(1, q)`.
pub fn minimal_resolution(c: &CyclicQuotient) -> HjChain {
    hj_expand(&c.r, &c.q).expect("canonical quotient is valid")
}

/// Singularity left on the strict transform after the weighted blowup of
/// `1/n²(1, na - 1)` with weights `1/n²(1, na - 1)`: the type
/// `1/(na - 1)(a², -1)` in canonical form.
pub fn wahl_contraction(w: &WahlPair) -> CyclicQuotient {
    let r = w.na_minus_one();
    normalize_cq(&r, &(&w.a * &w.a), &(&r - 1)).expect("a is a unit modulo na - 1")
}

/// The same singularity read off the minimal resolution: contract every
/// curve of the chain except the one meeting `(v = 0)'`.
pub fn wahl_contraction_from_chain(w: &WahlPair) -> CyclicQuotient {
    let chain = w.oriented_chain();
    let tail = HjChain::new(chain.entries()[1..].to_vec()).expect("sub-chain of a valid chain");
    let value = hj_evaluate(&tail);
    CyclicQuotient::new(value.numer(), &modulo(value.denom(), value.numer()))
        .expect("evaluated chain is coprime")
}

/// Index-one cover data of a Wahl singularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexOneCover {
    /// Degree of the cyclic cover, which is the index `n`.
    #[serde(with = "crate::serial::dec")]
    pub degree: BigInt,
    /// The cover is `(xy = z^n)`, the `A_{n-1}` Du Val singularity `1/n(1, -1)`.
    pub cover: CyclicQuotient,
    /// `k` in `A_k`.
    #[serde(with = "crate::serial::dec")]
    pub du_val_a_index: BigInt,
}

/// The index-one cover `C²/(1/n)(1, -1) = (xy = z^n)` of `1/n²(1, na - 1)`.
pub fn index_one_cover(w: &WahlType) -> IndexOneCover {
    let n = w.n.clone();
    let cover = CyclicQuotient::new(&n, &(&n - 1)).expect("n >= 2");
    debug_assert!(cover.is_du_val_a());
    IndexOneCover { du_val_a_index: &n - 1, degree: n, cover }
}

/// Integral homology of the Milnor fibre of a Wahl smoothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorHomology {
    #[serde(with = "crate::serial::dec")]
    pub n: BigInt,
    pub h0: AbelianGroup,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    #[serde(with = "crate::serial::dec")]
    pub euler: BigInt,
}

/// Cellular model of the Milnor fibre up to homotopy: `n` discs glued along
/// their common boundary circle, modulo the free `Z/n` action that rotates
/// the circle by `2π/n` and cycles the discs.
pub mod milnor {
    use super::*;

    /// The quotient complex: one vertex and one edge from the circle, one
    /// 2-cell from the orbit of discs. The disc boundary runs once around
    /// the upstairs circle, which is `n` edges that all lie in the single
    /// edge orbit, so the 2-cell is attached by a map of degree `n`.
    pub fn quotient_model(n: &BigInt) -> ChainComplex {
        // Edge e_i goes from vertex i to vertex i+1; both vertices lie in one
        // orbit, so the edge is a loop.
        let d1 = IntMatrix::zeros(1, 1);
        let boundary_edges_in_orbit = n.clone();
        let d2 = IntMatrix::from_rows(vec![vec![boundary_edges_in_orbit]]);
        ChainComplex::new(vec![1, 1, 1], vec![d1, d2])
    }

    /// The upstairs complex (cover of the model) for small `n`: vertices
    /// `p_i`, edges `e_i: p_i → p_{i+1}`, discs `Δ_j` with `∂Δ_j = Σ e_i`.
    pub fn cover_model(n: usize) -> ChainComplex {
        assert!(n >= 1);
        let mut d1 = IntMatrix::zeros(n, n);
        for i in 0..n {
            d1.add_to((i + 1) % n, i, &int(1));
            d1.add_to(i, i, &int(-1));
        }
        let mut d2 = IntMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                d2.set(i, j, int(1));
            }
        }
        ChainComplex::new(vec![n, n, n], vec![d1, d2])
    }

    /// Quotient of [`cover_model`] by the rotation: every cell is sent to its
    /// (single) orbit and boundaries are pushed forward.
    pub fn orbit_quotient_of_cover(n: usize) -> ChainComplex {
        let cover = cover_model(n);
        let push = |k: usize| {
            let d = cover.boundary(k).expect("degrees 1 and 2 exist");
            // Representative cell 0 in degree k; all cells of degree k-1 lie
            // in orbit 0.
            let coefficient: BigInt = (0..d.rows()).map(|i| d.get(i, 0).clone()).sum();
            IntMatrix::from_rows(vec![vec![coefficient]])
        };
        ChainComplex::new(vec![1, 1, 1], vec![push(1), push(2)])
    }
}

/// Homology of the Milnor fibre computed from [`milnor::quotient_model`].
pub fn milnor_fiber_homology(n: &BigInt) -> Result<MilnorHomology> {
    if *n < int(2) {
        return Err(Error::InvalidArgument(format!("index must be at least 2, got {n}")));
    }
    let cx = milnor::quotient_model(n);
    Ok(MilnorHomology {
        n: n.clone(),
        h0: cx.homology(0),
        h1: cx.homology(1),
        h2: cx.homology(2),
        euler: cx.euler_characteristic(),
    })
}

/// Order of the cokernel of the specialization map `H_2(Y) → H_2(X)` for a
/// single Wahl point, which is the order of `H_1` of the Milnor fibre.
pub fn specialization_cokernel(w: &WahlType) -> BigInt {
    milnor_fiber_homology(&w.n).expect("n >= 2").h1.order().expect("H_1 of the Milnor fibre is finite")
}

/// Link of a cyclic quotient singularity: the lens space of order `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkData {
    #[serde(with = "crate::serial::dec")]
    pub lens_space_order: BigInt,
    pub h1: AbelianGroup,
}

pub fn link_data(c: &CyclicQuotient) -> LinkData {
    LinkData {
        lens_space_order: c.r.clone(),
        h1: if c.is_smooth() { AbelianGroup::trivial() } else { AbelianGroup::cyclic(c.r.clone()) },
    }
}

/// `|H_1(L)| / |H_1(M)|` for the link `L` and Milnor fibre `M` of a Wahl
/// singularity, i.e. the kernel order of the surjection `Z/n² → Z/n`.
pub fn link_to_milnor_kernel_order(w: &WahlType) -> BigInt {
    let link = link_data(&wahl_to_cq(w)).h1.order().expect("finite");
    let milnor = specialization_cokernel(w);
    let (q, rem) = link.div_rem(&milnor);
    assert!(rem.is_zero(), "|H1(M)| must divide |H1(L)|");
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cq(r: i64, q: i64) -> CyclicQuotient {
        CyclicQuotient::new(&int(r), &int(q)).unwrap()
    }

    fn pair(n: u64, a: u64) -> WahlPair {
        WahlPair::from_u64(n, a).unwrap()
    }

    fn wt(n: u64, a: u64) -> WahlType {
        WahlType::from_u64(n, a).unwrap()
    }

    #[test]
    fn wahl_to_cq_examples() {
        assert_eq!(wahl_to_cq(&wt(2, 1)), cq(4, 1));
        assert_eq!(wahl_to_cq(&wt(3, 1)), cq(9, 2));
        assert_eq!(wahl_to_cq(&wt(5, 2)), cq(25, 9));
        assert_eq!(wahl_to_cq(&wt(5, 2)).twist(), &int(9));
    }

    #[test]
    fn cq_to_wahl_examples() {
        assert_eq!(cq_to_wahl(&cq(4, 1)), Some(wt(2, 1)));
        assert_eq!(cq_to_wahl(&cq(25, 4)), Some(wt(5, 1)));
        assert_eq!(cq_to_wahl(&cq(9, 1)), None);
        assert_eq!(cq_to_wahl(&CyclicQuotient::smooth()), None);
        assert_eq!(cq_to_wahl(&cq(8, 3)), None);
    }

    // Brute force: try every (n, a) with n² = r.
    fn brute_recognize(c: &CyclicQuotient) -> Option<WahlType> {
        let r: i64 = c.order().try_into().ok()?;
        let n = (1..=r).find(|n| n * n == r)?;
        (1..n)
            .filter(|a| a.gcd(&n) == 1)
            .find(|&a| cq(r, n * a - 1) == *c)
            .map(|a| WahlType::from_u64(n as u64, a as u64).unwrap())
    }

    #[test]
    fn recognition_matches_brute_force() {
        for r in 2..=400i64 {
            for q in 1..r {
                if q.gcd(&r) == 1 {
                    let c = cq(r, q);
                    assert_eq!(cq_to_wahl(&c), brute_recognize(&c), "{c}");
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_cq(&int(4), &int(1), &int(1)).unwrap(), cq(4, 1));
        assert_eq!(normalize_cq(&int(9), &int(4), &int(8)).unwrap(), cq(9, 2));
        assert_eq!(normalize_cq(&int(2), &int(1), &int(1)).unwrap(), cq(2, 1));
        assert_eq!(normalize_cq(&int(1), &int(0), &int(5)).unwrap(), CyclicQuotient::smooth());
        assert!(matches!(normalize_cq(&int(9), &int(3), &int(1)), Err(Error::NonIsolatedQuotient { .. })));
        assert!(matches!(normalize_cq(&int(9), &int(1), &int(6)), Err(Error::NonIsolatedQuotient { .. })));
    }

    #[test]
    fn normalize_is_symmetric_in_weights() {
        for r in 2..80i64 {
            for q in 1..r {
                if q.gcd(&r) == 1 {
                    assert_eq!(
                        normalize_cq(&int(r), &int(q), &int(1)).unwrap(),
                        normalize_cq(&int(r), &int(1), &int(q)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn minimal_resolution_examples() {
        assert_eq!(minimal_resolution(&cq(4, 1)).to_string(), "[4]");
        assert_eq!(minimal_resolution(&cq(9, 2)).to_string(), "[5, 2]");
        assert!(minimal_resolution(&CyclicQuotient::smooth()).is_empty());
    }

    #[test]
    fn contraction_examples() {
        assert!(wahl_contraction(&pair(2, 1)).is_smooth());
        assert_eq!(wahl_contraction(&pair(3, 1)), cq(2, 1));
        assert_eq!(wahl_contraction(&pair(5, 2)), cq(9, 2));
        // Orientation matters: (3, 2) is the same singularity as (3, 1).
        assert_eq!(wahl_contraction(&pair(3, 2)), cq(5, 1));
    }

    #[test]
    fn contraction_chain_route_agrees() {
        for n in 2..=60u64 {
            for a in 1..n {
                if let Ok(w) = WahlPair::from_u64(n, a) {
                    assert_eq!(wahl_contraction(&w), wahl_contraction_from_chain(&w), "{w}");
                    assert_eq!(wahl_contraction(&w).order(), &w.na_minus_one().max(int(1)));
                }
            }
        }
    }

    #[test]
    fn index_one_cover_examples() {
        for (n, k) in [(2u64, 1u64), (3, 2), (5, 4)] {
            let c = index_one_cover(&wt(n, 1));
            assert_eq!(c.degree, int(n));
            assert_eq!(c.du_val_a_index, int(k));
            assert!(c.cover.is_du_val_a());
        }
    }

    #[test]
    fn milnor_examples() {
        for n in [2i64, 3, 7] {
            let h = milnor_fiber_homology(&int(n)).unwrap();
            assert_eq!(h.h0, AbelianGroup::new(1, vec![]));
            assert_eq!(h.h1, AbelianGroup::cyclic(int(n)));
            assert!(h.h2.is_trivial());
            assert_eq!(h.euler, int(1));
        }
        assert!(milnor_fiber_homology(&int(1)).is_err());
    }

    #[test]
    fn milnor_model_is_quotient_of_disc_cover() {
        for n in 2..=10usize {
            assert_eq!(milnor::orbit_quotient_of_cover(n), milnor::quotient_model(&int(n)));
            let cover = milnor::cover_model(n);
            // n discs on a circle: a bouquet of n - 1 spheres.
            assert!(cover.homology(1).is_trivial());
            assert_eq!(cover.homology(2), AbelianGroup::new(n - 1, vec![]));
            assert_eq!(cover.euler_characteristic(), int(n));
        }
    }

    #[test]
    fn specialization_and_link() {
        assert_eq!(specialization_cokernel(&wt(2, 1)), int(2));
        assert_eq!(specialization_cokernel(&wt(3, 2)), int(3));
        assert_eq!(specialization_cokernel(&wt(5, 1)), int(5));
        assert_eq!(link_data(&cq(4, 1)).h1, AbelianGroup::cyclic(int(4)));
        assert_eq!(link_data(&cq(9, 2)).h1, AbelianGroup::cyclic(int(9)));
        assert!(link_data(&CyclicQuotient::smooth()).h1.is_trivial());
        assert_eq!(link_to_milnor_kernel_order(&wt(7, 3)), int(7));
    }

    #[test]
    fn wahl_validation() {
        assert!(WahlType::from_u64(1, 1).is_err());
        assert!(WahlType::from_u64(4, 2).is_err());
        assert!(WahlType::from_u64(5, 5).is_err());
        assert_eq!(wt(5, 4), wt(5, 1));
        assert_ne!(pair(5, 4), pair(5, 1));
        assert_eq!(pair(5, 4).class(), wt(5, 1));
    }
}

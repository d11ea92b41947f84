//! Chern-class numerics for sheaves on surfaces with Picard rank one.
//!
//! Classes are written in terms of an ample generator `H` of the class
//! group modulo torsion: `c1 = d·H`, `K = k·H`, and `H²` is rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic_quotient::WahlPair;
use crate::error::{Error, Result};
use crate::exact::{int, to_integer};

/// Numerical data of a surface: `χ(O)`, `H²` and `K = k·H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceNumerics {
    #[serde(with = "crate::serial::dec")]
    pub chi_o: BigInt,
    #[serde(with = "crate::serial::rat")]
    pub h_squared: BigRational,
    #[serde(with = "crate::serial::dec")]
    pub k_in_h: BigInt,
}

impl SurfaceNumerics {
    pub fn projective_plane() -> Self {
        Self { chi_o: BigInt::one(), h_squared: BigRational::one(), k_in_h: int(-3) }
    }

    /// `K²`.
    pub fn k_squared(&self) -> BigRational {
        BigRational::from_integer(&self.k_in_h * &self.k_in_h) * &self.h_squared
    }

    fn rat(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
}

/// The hypersurface `W = (XY = Z^n + T^a) ⊂ P(1, na - 1, a, n)`:
/// `H² = 1/(na - 1)` and `K = -(a + n)H`.
pub fn surface_w(w: &WahlPair) -> SurfaceNumerics {
    SurfaceNumerics {
        chi_o: BigInt::one(),
        h_squared: BigRational::new(BigInt::one(), w.na_minus_one()),
        k_in_h: -(w.n() + w.a()),
    }
}

/// Rank, `c1 = degree·H`, and `c2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleNumerics {
    #[serde(with = "crate::serial::dec")]
    pub rank: BigInt,
    #[serde(with = "crate::serial::dec")]
    pub degree: BigInt,
    #[serde(with = "crate::serial::rat")]
    pub c2: BigRational,
}

impl BundleNumerics {
    pub fn new(rank: BigInt, degree: BigInt, c2: BigRational) -> Result<Self> {
        if !rank.is_positive() {
            return Err(Error::InvalidArgument(format!("rank must be positive, got {rank}")));
        }
        Ok(Self { rank, degree, c2 })
    }

    pub fn structure_sheaf() -> Self {
        Self { rank: BigInt::one(), degree: BigInt::zero(), c2: BigRational::zero() }
    }

    pub fn line_bundle(d: BigInt) -> Self {
        Self { rank: BigInt::one(), degree: d, c2: BigRational::zero() }
    }

    /// The exceptional numerics of the given rank and degree.
    pub fn exceptional(rank: BigInt, degree: BigInt, s: &SurfaceNumerics) -> Result<Self> {
        let c2 = exceptional_c2(&rank, &degree, s)?;
        Self::new(rank, degree, c2)
    }

    /// `μ = d/r`.
    pub fn slope(&self) -> BigRational {
        BigRational::new(self.degree.clone(), self.rank.clone())
    }

    /// `c1² = d² H²`.
    pub fn c1_squared(&self, s: &SurfaceNumerics) -> BigRational {
        s.rat(&(&self.degree * &self.degree)) * &s.h_squared
    }

    /// `ch2 = c1²/2 - c2`.
    pub fn ch2(&self, s: &SurfaceNumerics) -> BigRational {
        self.c1_squared(s) / int(2) - &self.c2
    }

    pub fn has_integral_c2(&self) -> bool {
        self.c2.is_integer()
    }
}

/// `c2` forced by `χ(End F) = 1`:
/// `1 = r² χ(O) + (r - 1) c1² - 2 r c2`, i.e.
/// `c2 = ((r - 1) d² H² + r² - 1) / (2r)` when `χ(O) = 1`.
pub fn exceptional_c2(r: &BigInt, d: &BigInt, s: &SurfaceNumerics) -> Result<BigRational> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument(format!("rank must be positive, got {r}")));
    }
    if !s.chi_o.is_one() {
        return Err(Error::InvalidArgument(format!("the c2 formula assumes chi(O) = 1, got {}", s.chi_o)));
    }
    let rr = s.rat(r);
    let c1sq = s.rat(&(d * d)) * &s.h_squared;
    let one = BigRational::one();
    Ok(((&rr - &one) * c1sq + &rr * &rr - one) / (rr * int(2)))
}

/// `c2 = (r - 1)/(2r) (c1² + r + 1)`.
pub fn c2_closed_form(r: &BigInt, c1_squared: &BigRational) -> BigRational {
    let rr = BigRational::from_integer(r.clone());
    let one = BigRational::one();
    (&rr - &one) / (&rr * int(2)) * (c1_squared + &rr + one)
}

/// `χ(F) = r χ(O) + ½ c1 (c1 - K) - c2`.
pub fn riemann_roch(b: &BundleNumerics, s: &SurfaceNumerics) -> BigRational {
    let c1_dot = s.rat(&(&b.degree * (&b.degree - &s.k_in_h))) * &s.h_squared;
    s.rat(&(&b.rank * &s.chi_o)) + c1_dot / int(2) - &b.c2
}

/// `χ(E, F) = Σ (-1)^i dim Ext^i(E, F)`, by Riemann–Roch for `E^∨ ⊗ F`:
/// `r_E r_F χ(O) + ½(r_E d_F - r_F d_E)(-K·H) + r_E ch2(F) + r_F ch2(E) - d_E d_F H²`.
pub fn euler_pairing(e: &BundleNumerics, f: &BundleNumerics, s: &SurfaceNumerics) -> BigRational {
    let rank_term = s.rat(&(&e.rank * &f.rank * &s.chi_o));
    let twist = &e.rank * &f.degree - &f.rank * &e.degree;
    let k_term = s.rat(&(twist * -&s.k_in_h)) * &s.h_squared / int(2);
    let ch2_term = s.rat(&e.rank) * f.ch2(s) + s.rat(&f.rank) * e.ch2(s);
    let cross = s.rat(&(&e.degree * &f.degree)) * &s.h_squared;
    rank_term + k_term + ch2_term - cross
}

/// Numerics of the kernel of the evaluation map `H⁰(F) ⊗ O → F`:
/// rank `h0 - r`, the same `c1`, and exceptional `c2`.
pub fn left_mutation_numerics(
    b: &BundleNumerics,
    h0: &BigInt,
    s: &SurfaceNumerics,
) -> Result<BundleNumerics> {
    if h0 <= &b.rank {
        return Err(Error::MutationNotDefined { h0: h0.clone(), rank: b.rank.clone() });
    }
    BundleNumerics::exceptional(h0 - &b.rank, b.degree.clone(), s)
}

/// `(d H)·(e H) = d e H²`.
pub fn restriction_degree(d: &BigInt, e: &BigInt, s: &SurfaceNumerics) -> BigRational {
    s.rat(&(d * e)) * &s.h_squared
}

/// Numerics of `F1` on `W_{n,a}`: rank `a`, `c1 = (na - 1)H`.
pub fn f1_numerics(w: &WahlPair) -> BundleNumerics {
    BundleNumerics::exceptional(w.a().clone(), w.na_minus_one(), &surface_w(w)).expect("rank a is positive")
}

/// Numerics of `F2` on `W_{n,a}`, the left mutation of `F1` with `h0 = χ(F1)`.
pub fn f2_numerics(w: &WahlPair) -> Result<BundleNumerics> {
    let s = surface_w(w);
    let f1 = f1_numerics(w);
    let h0 = to_integer(&riemann_roch(&f1, &s))?;
    left_mutation_numerics(&f1, &h0, &s)
}

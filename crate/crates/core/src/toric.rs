//! Two-dimensional toric geometry over exact rationals.
//!
//! A rank-2 lattice is presented as `N = Z² + Z·(1/r)(a1, a2) ⊂ Q²`, so that
//! the first quadrant is the cone of the cyclic quotient `1/r(a1, a2)`.
//! Fans are lists of primitive rays in counterclockwise order.
//!
//! Determinants are measured in lattice units (the covolume of `N` is 1),
//! so for lattice vectors they are integers and `det(u, v)` of two primitive
//! rays is the order of the cone they span.
//!
//! Self-intersections of boundary divisors use the three-term relation
//! `det(v_i, v_{i+1}) v_{i-1} - det(v_{i-1}, v_{i+1}) v_i + det(v_{i-1}, v_i) v_{i+1} = 0`,
//! giving `D_i² = -det(v_{i-1}, v_{i+1}) / (det(v_{i-1}, v_i) det(v_i, v_{i+1}))`.
//! In the smooth case this is the familiar `v_{i-1} + v_{i+1} = -D_i² v_i`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic_quotient::{normalize_cq, CyclicQuotient, WahlPair};
use crate::error::{Error, Result};
use crate::exact::{int, modulo, ratio, to_integer};

/// A point of `Q²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vec2 {
    #[serde(with = "crate::serial::rat")]
    pub x: BigRational,
    #[serde(with = "crate::serial::rat")]
    pub y: BigRational,
}

impl Vec2 {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(ratio(x, 1), ratio(y, 1))
    }

    /// `(x, y) / den`.
    pub fn frac(x: &BigInt, y: &BigInt, den: &BigInt) -> Self {
        Self::new(BigRational::new(x.clone(), den.clone()), BigRational::new(y.clone(), den.clone()))
    }

    pub fn e1() -> Self {
        Self::int(1, 0)
    }

    pub fn e2() -> Self {
        Self::int(0, 1)
    }

    /// Euclidean determinant `x1 y2 - y1 x2`.
    pub fn cross(&self, other: &Vec2) -> BigRational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn add(&self, other: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, k: &BigRational) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    // 0 for the half-plane {y > 0} ∪ {y = 0, x > 0}, 1 otherwise.
    fn half(&self) -> u8 {
        if self.y.is_positive() || (self.y.is_zero() && self.x.is_positive()) {
            0
        } else {
            1
        }
    }

    /// Compares polar angles in `[0, 2π)`.
    fn angle_cmp(&self, other: &Vec2) -> Ordering {
        self.half().cmp(&other.half()).then_with(|| BigRational::zero().cmp(&self.cross(other)))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The lattice `Z² + Z·(1/r)(a1, a2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct Lattice2 {
    r: BigInt,
    a1: BigInt,
    a2: BigInt,
    // Basis (g/r, y0/r), (0, h/r) from the Hermite form of r·N.
    basis_g: BigInt,
    basis_y0: BigInt,
    basis_h: BigInt,
    covolume: BigRational,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    #[serde(with = "crate::serial::dec")]
    r: BigInt,
    #[serde(with = "crate::serial::dec")]
    a1: BigInt,
    #[serde(with = "crate::serial::dec")]
    a2: BigInt,
}

impl TryFrom<LatticeRepr> for Lattice2 {
    type Error = Error;
    fn try_from(l: LatticeRepr) -> Result<Self> {
        Lattice2::new(&l.r, &l.a1, &l.a2)
    }
}

impl From<Lattice2> for LatticeRepr {
    fn from(l: Lattice2) -> Self {
        LatticeRepr { r: l.r, a1: l.a1, a2: l.a2 }
    }
}

impl Lattice2 {
    /// Requires `r >= 1` and `gcd(r, a1, a2) = 1`, so that the generator has
    /// order exactly `r` in `N / Z²`.
    pub fn new(r: &BigInt, a1: &BigInt, a2: &BigInt) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidArgument(format!("lattice order must be positive, got {r}")));
        }
        if !r.gcd(a1).gcd(a2).is_one() {
            return Err(Error::InvalidArgument(format!(
                "(1/{r})({a1}, {a2}) does not have order {r} modulo Z²"
            )));
        }
        // Hermite basis of the span of (r, 0), (0, r), (a1, a2).
        let mut pivot: Option<(BigInt, BigInt)> = None;
        let mut h = BigInt::zero();
        for (c, d) in [(r.clone(), BigInt::zero()), (BigInt::zero(), r.clone()), (a1.clone(), a2.clone())] {
            if c.is_zero() {
                h = h.gcd(&d);
                continue;
            }
            match pivot.take() {
                None => pivot = Some((c, d)),
                Some((pa, pb)) => {
                    let eg = pa.extended_gcd(&c);
                    let g = eg.gcd;
                    let new_b = &eg.x * &pb + &eg.y * &d;
                    let leftover = (&c / &g) * &pb - (&pa / &g) * &d;
                    h = h.gcd(&leftover);
                    pivot = Some((g, new_b));
                }
            }
        }
        let (g, y0) = pivot.expect("r > 0 gives a pivot");
        let y0 = modulo(&y0, &h);
        let covolume = BigRational::new(&g * &h, r * r);
        Ok(Self {
            r: r.clone(),
            a1: a1.clone(),
            a2: a2.clone(),
            basis_g: g,
            basis_y0: y0,
            basis_h: h,
            covolume,
        })
    }

    pub fn standard() -> Self {
        Self::new(&int(1), &int(0), &int(0)).expect("Z² is valid")
    }

    /// The lattice of `1/r(1, q)` for a canonical quotient.
    pub fn for_quotient(c: &CyclicQuotient) -> Self {
        Self::new(c.order(), &BigInt::one(), c.twist()).expect("canonical quotient")
    }

    /// The lattice of the Wahl presentation `1/n²(1, na - 1)`.
    pub fn wahl(w: &WahlPair) -> Self {
        Self::new(&(w.n() * w.n()), &BigInt::one(), &w.na_minus_one()).expect("n² >= 4")
    }

    pub fn order(&self) -> &BigInt {
        &self.r
    }

    pub fn weights(&self) -> (&BigInt, &BigInt) {
        (&self.a1, &self.a2)
    }

    /// Area of a fundamental domain in `Q²`; equals `1/r`.
    pub fn covolume(&self) -> &BigRational {
        &self.covolume
    }

    pub fn generator(&self) -> Vec2 {
        Vec2::frac(&self.a1, &self.a2, &self.r)
    }

    pub fn basis(&self) -> [Vec2; 2] {
        [
            Vec2::frac(&self.basis_g, &self.basis_y0, &self.r),
            Vec2::frac(&BigInt::zero(), &self.basis_h, &self.r),
        ]
    }

    /// Integer coordinates of `v` in [`Lattice2::basis`].
    pub fn coords(&self, v: &Vec2) -> Result<(BigInt, BigInt)> {
        let r = BigRational::from_integer(self.r.clone());
        let alpha = &v.x * &r / BigRational::from_integer(self.basis_g.clone());
        let alpha = to_integer(&alpha).map_err(|_| Error::NotInLattice(v.to_string()))?;
        let beta = (&v.y * &r - BigRational::from_integer(&alpha * &self.basis_y0))
            / BigRational::from_integer(self.basis_h.clone());
        let beta = to_integer(&beta).map_err(|_| Error::NotInLattice(v.to_string()))?;
        Ok((alpha, beta))
    }

    pub fn from_coords(&self, alpha: &BigInt, beta: &BigInt) -> Vec2 {
        let [b1, b2] = self.basis();
        b1.scale(&BigRational::from_integer(alpha.clone()))
            .add(&b2.scale(&BigRational::from_integer(beta.clone())))
    }

    pub fn contains(&self, v: &Vec2) -> bool {
        self.coords(v).is_ok()
    }

    pub fn is_primitive(&self, v: &Vec2) -> bool {
        match self.coords(v) {
            Ok((a, b)) => a.gcd(&b).is_one(),
            Err(_) => false,
        }
    }

    /// Determinant in lattice units.
    pub fn det(&self, u: &Vec2, v: &Vec2) -> BigRational {
        u.cross(v) / &self.covolume
    }

    fn int_det(&self, u: &Vec2, v: &Vec2) -> BigInt {
        to_integer(&self.det(u, v)).expect("lattice vectors have integral determinant")
    }

    /// Type of the cone spanned by primitive `p1, p2` with `det(p1, p2) > 0`.
    ///
    /// Completes `p1` to a basis `(p1, f)`; then `p2 = m f - k p1` with
    /// `m = det(p1, p2)` and the cone is `1/m(1, k)`. Returns the oriented
    /// data `(m, k, f)` with `0 <= k < m`.
    pub fn oriented_cone(&self, p1: &Vec2, p2: &Vec2) -> Result<(BigInt, BigInt, Vec2)> {
        let (x1, y1) = self.coords(p1)?;
        if !x1.gcd(&y1).is_one() {
            return Err(Error::NotPrimitive(p1.to_string()));
        }
        if !self.is_primitive(p2) {
            return Err(Error::NotPrimitive(p2.to_string()));
        }
        let m = self.int_det(p1, p2);
        if !m.is_positive() {
            return Err(Error::DegenerateFan(format!(
                "rays {p1} and {p2} do not span a strictly convex counterclockwise cone"
            )));
        }
        // s x1 + t y1 = 1, f = (-t, s) has det(p1, f) = 1 in coordinates;
        // the basis itself is positively oriented.
        let eg = x1.extended_gcd(&y1);
        let mut f = self.from_coords(&-&eg.y, &eg.x);
        debug_assert!(self.int_det(p1, &f).is_one());
        // p2 = alpha p1 + m f with alpha = det(p2, f); shift f to make alpha in (-m, 0].
        let alpha = self.int_det(p2, &f);
        let shift = alpha.div_ceil(&m);
        f = f.add(&p1.scale(&BigRational::from_integer(shift.clone())));
        let k = -(alpha - shift * &m);
        debug_assert!(!k.is_negative() && k < m);
        Ok((m, k, f))
    }

    pub fn cone_type(&self, p1: &Vec2, p2: &Vec2) -> Result<CyclicQuotient> {
        let (m, k, _) = self.oriented_cone(p1, p2)?;
        if m.is_one() {
            return Ok(CyclicQuotient::smooth());
        }
        CyclicQuotient::new(&m, &k)
    }
}

/// A 2-dimensional fan: primitive rays in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan2 {
    lattice: Lattice2,
    rays: Vec<Vec2>,
    complete: bool,
}

impl Fan2 {
    pub fn new(lattice: Lattice2, rays: Vec<Vec2>, complete: bool) -> Result<Self> {
        let min = if complete { 3 } else { 2 };
        if rays.len() < min {
            return Err(Error::DegenerateFan(format!(
                "{} rays is too few for a {} fan",
                rays.len(),
                if complete { "complete" } else { "partial" }
            )));
        }
        for v in &rays {
            if v.is_zero() || !lattice.is_primitive(v) {
                return Err(Error::NotPrimitive(v.to_string()));
            }
        }
        let fan = Self { lattice, rays, complete };
        for i in 0..fan.cone_count() {
            let (a, b) = fan.cone_rays(i);
            if !a.cross(b).is_positive() {
                return Err(Error::DegenerateFan(format!(
                    "consecutive rays {a} and {b} are not strictly convex counterclockwise"
                )));
            }
        }
        // Consecutive cones turn counterclockwise; a complete fan must wind
        // exactly once, a partial one must not wrap at all.
        let wraps = (0..fan.cone_count())
            .filter(|&i| {
                let (a, b) = fan.cone_rays(i);
                a.angle_cmp(b) != Ordering::Less
            })
            .count();
        let expected = usize::from(complete);
        if wraps != expected {
            return Err(Error::DegenerateFan(format!("rays wind around the origin {wraps} times")));
        }
        Ok(fan)
    }

    pub fn lattice(&self) -> &Lattice2 {
        &self.lattice
    }

    pub fn rays(&self) -> &[Vec2] {
        &self.rays
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Number of two-dimensional cones.
    pub fn cone_count(&self) -> usize {
        if self.complete {
            self.rays.len()
        } else {
            self.rays.len() - 1
        }
    }

    fn cone_rays(&self, i: usize) -> (&Vec2, &Vec2) {
        (&self.rays[i], &self.rays[(i + 1) % self.rays.len()])
    }

    /// Type of cone `i`, spanned by rays `i` and `i + 1`.
    pub fn cone_type(&self, i: usize) -> Result<CyclicQuotient> {
        if i >= self.cone_count() {
            return Err(Error::InvalidArgument(format!("no cone with index {i}")));
        }
        let (a, b) = self.cone_rays(i);
        self.lattice.cone_type(a, b)
    }

    pub fn position(&self, v: &Vec2) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Star subdivision at `w`: inserts the ray into the cone containing it
    /// in its interior. Returns the new fan and the index of `w`.
    pub fn insert_ray(&self, w: &Vec2) -> Result<(Fan2, usize)> {
        if !self.lattice.contains(w) {
            return Err(Error::NotInLattice(w.to_string()));
        }
        if !self.lattice.is_primitive(w) {
            return Err(Error::NotPrimitive(w.to_string()));
        }
        let cone = (0..self.cone_count())
            .find(|&i| {
                let (a, b) = self.cone_rays(i);
                a.cross(w).is_positive() && w.cross(b).is_positive()
            })
            .ok_or_else(|| Error::NotInterior(w.to_string()))?;
        let mut rays = self.rays.clone();
        rays.insert(cone + 1, w.clone());
        let fan = Fan2::new(self.lattice.clone(), rays, self.complete)?;
        Ok((fan, cone + 1))
    }

    /// Self-intersection of the boundary divisor of ray `i`.
    pub fn self_intersection(&self, i: usize) -> Result<BigRational> {
        let len = self.rays.len();
        if i >= len {
            return Err(Error::InvalidArgument(format!("no ray with index {i}")));
        }
        let (prev, next) = if self.complete {
            ((i + len - 1) % len, (i + 1) % len)
        } else if i == 0 || i + 1 == len {
            return Err(Error::DegenerateFan(format!(
                "ray {i} lies on the boundary of the support and its divisor is not compact"
            )));
        } else {
            (i - 1, i + 1)
        };
        let l = &self.lattice;
        let (u, v, w) = (&self.rays[prev], &self.rays[i], &self.rays[next]);
        let d_left = l.det(u, v);
        let d_right = l.det(v, w);
        if d_left.is_zero() || d_right.is_zero() {
            return Err(Error::DegenerateFan("adjacent rays are collinear".into()));
        }
        Ok(-l.det(u, w) / (d_left * d_right))
    }
}

/// Numerical data of a weighted projective space `P(w0, ..., wr)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WpsData {
    #[serde(with = "crate::serial::dec_seq")]
    pub weights: Vec<BigInt>,
    /// The class group is `Z`, generated by `O(1)`.
    pub class_group_rank: u32,
    /// `A^r = 1/(w0 ⋯ wr)` for `A = c1(O(1))`.
    #[serde(with = "crate::serial::rat")]
    pub top_power: BigRational,
    /// `K ~ O(-Σ wi)`.
    #[serde(with = "crate::serial::dec")]
    pub canonical_degree: BigInt,
}

impl WpsData {
    pub fn dimension(&self) -> usize {
        self.weights.len() - 1
    }
}

/// Any `len - 1` of the weights must be coprime.
pub fn check_weights(weights: &[BigInt]) -> Result<()> {
    if weights.len() < 2 {
        return Err(Error::InvalidArgument("need at least two weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
        return Err(Error::InvalidArgument(format!("weights must be positive, got {w}")));
    }
    for skip in 0..weights.len() {
        let g =
            weights.iter().enumerate().filter(|&(i, _)| i != skip).fold(BigInt::zero(), |g, (_, w)| g.gcd(w));
        if !g.is_one() {
            return Err(Error::InvalidArgument(format!(
                "weights {} are not well formed: the weights other than w{skip} share the factor {g}",
                fmt_list(weights)
            )));
        }
    }
    Ok(())
}

pub(crate) fn fmt_list(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn wps_data(weights: &[BigInt]) -> Result<WpsData> {
    check_weights(weights)?;
    let product: BigInt = weights.iter().product();
    Ok(WpsData {
        weights: weights.to_vec(),
        class_group_rank: 1,
        top_power: BigRational::new(BigInt::one(), product),
        canonical_degree: -weights.iter().sum::<BigInt>(),
    })
}

/// Singularity of a coordinate chart `(Xi ≠ 0)` of a weighted projective plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSingularity {
    pub vertex: usize,
    pub quotient: CyclicQuotient,
}

/// The singular coordinate vertices of `P(w0, w1, w2)`: `(Xi ≠ 0)` is
/// `C²/(1/wi)(wj, wk)`.
pub fn wps_singular_charts(weights: &[BigInt]) -> Result<Vec<ChartSingularity>> {
    if weights.len() != 3 {
        return Err(Error::InvalidArgument("surface case needs exactly three weights".into()));
    }
    check_weights(weights)?;
    let mut out = Vec::new();
    for i in 0..3 {
        if weights[i].is_one() {
            continue;
        }
        let rest: Vec<&BigInt> = (0..3).filter(|&j| j != i).map(|j| &weights[j]).collect();
        out.push(ChartSingularity { vertex: i, quotient: normalize_cq(&weights[i], rest[0], rest[1])? });
    }
    Ok(out)
}

/// Fan of `P(w0, w1, w2)`: `v0 = e1`, `v1 = e2`, `v2 = -(w0 v0 + w1 v1)/w2`
/// in the lattice generated by them, `Z² + Z·(1/w2)(w0, w1)`.
pub fn wps_fan_surface(weights: &[BigInt]) -> Result<Fan2> {
    if weights.len() != 3 {
        return Err(Error::InvalidArgument("surface case needs exactly three weights".into()));
    }
    check_weights(weights)?;
    let lattice = Lattice2::new(&weights[2], &weights[0], &weights[1])?;
    let v2 = Vec2::frac(&-&weights[0], &-&weights[1], &weights[2]);
    Fan2::new(lattice, vec![Vec2::e1(), Vec2::e2(), v2], true)
}

/// A chart of a weighted blowup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupChart {
    /// Which coordinate axis ray the exceptional ray replaced (1 or 2):
    /// chart `U1` is the cone `<w, e2>`, `U2` is `<e1, w>`.
    pub chart: u8,
    pub quotient: CyclicQuotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedBlowup {
    /// Rays `e1, w, e2`.
    pub fan: Fan2,
    pub exceptional_ray: Vec2,
    pub charts: Vec<BlowupChart>,
    #[serde(with = "crate::serial::rat")]
    pub exceptional_self_intersection: BigRational,
}

/// Weighted blowup of the first-quadrant cone of `lattice` with weight
/// `w = (1/r)(w1, w2)`.
pub fn weighted_blowup(lattice: &Lattice2, w1: &BigInt, w2: &BigInt) -> Result<WeightedBlowup> {
    let w = Vec2::frac(w1, w2, lattice.order());
    if !lattice.contains(&w) {
        return Err(Error::NotInLattice(w.to_string()));
    }
    if !lattice.is_primitive(&w) {
        return Err(Error::NotPrimitive(w.to_string()));
    }
    if !(w1.is_positive() && w2.is_positive()) {
        return Err(Error::NotInterior(w.to_string()));
    }
    let cone = Fan2::new(lattice.clone(), vec![Vec2::e1(), Vec2::e2()], false)?;
    let (fan, idx) = cone.insert_ray(&w)?;
    let charts = vec![
        BlowupChart { chart: 1, quotient: fan.cone_type(1)? },
        BlowupChart { chart: 2, quotient: fan.cone_type(0)? },
    ];
    let exceptional_self_intersection = fan.self_intersection(idx)?;
    Ok(WeightedBlowup { fan, exceptional_ray: w, charts, exceptional_self_intersection })
}

impl WeightedBlowup {
    pub fn chart(&self, which: u8) -> &CyclicQuotient {
        &self.charts.iter().find(|c| c.chart == which).expect("charts 1 and 2 exist").quotient
    }
}

/// The weighted blowup of `1/n²(1, na - 1)` with weights `1/n²(1, na - 1)`.
pub fn wahl_blowup(w: &WahlPair) -> WeightedBlowup {
    weighted_blowup(&Lattice2::wahl(w), &BigInt::one(), &w.na_minus_one())
        .expect("the Wahl weight is primitive and interior")
}

/// Singularity of the strict transform after [`wahl_blowup`], read from the
/// refined fan. Chart `U1` is smooth; the singular point sits in chart `U2`.
pub fn toric_wahl_contraction(w: &WahlPair) -> CyclicQuotient {
    let b = wahl_blowup(w);
    debug_assert!(b.chart(1).is_smooth());
    b.chart(2).clone()
}

/// Minimal resolution of a cone, computed geometrically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedCone {
    /// Rays from `e1` to `e2`, counterclockwise, including the interior rays.
    pub fan: Fan2,
    /// Self-intersections of the interior rays listed from the `e2` side,
    /// i.e. starting next to the strict transform of `(v = 0)`.
    #[serde(with = "crate::serial::dec_seq")]
    pub self_intersections: Vec<BigInt>,
}

/// Resolves `1/r(1, q)` by the boundary of the convex hull of the nonzero
/// lattice points in the first quadrant.
pub fn resolve_cone(c: &CyclicQuotient) -> Result<ResolvedCone> {
    let lattice = Lattice2::for_quotient(c);
    let (p1, p2) = (Vec2::e1(), Vec2::e2());
    let (m, k, f) = lattice.oriented_cone(&p1, &p2)?;
    // In coordinates (s, t) ↦ s f + t p1 the cone is <(0, 1), (m, -k)> and
    // the lowest lattice point above x = s is ceil(-k s / m).
    let mut hull: Vec<(BigInt, BigInt)> = Vec::new();
    let mut s = BigInt::zero();
    while s <= m {
        let t = if s.is_zero() { BigInt::one() } else { (-(&k * &s)).div_ceil(&m) };
        let p = (s.clone(), t);
        while hull.len() >= 2 {
            let (o, a) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let turn = (&a.0 - &o.0) * (&p.1 - &o.1) - (&a.1 - &o.1) * (&p.0 - &o.0);
            if turn.is_negative() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
        s += 1;
    }
    let rays: Vec<Vec2> = hull
        .iter()
        .map(|(s, t)| {
            f.scale(&BigRational::from_integer(s.clone()))
                .add(&p1.scale(&BigRational::from_integer(t.clone())))
        })
        .collect();
    debug_assert_eq!(rays.last(), Some(&p2));
    let fan = Fan2::new(lattice, rays, false)?;
    let mut self_intersections = (1..fan.rays().len() - 1)
        .map(|i| fan.self_intersection(i).and_then(|x| to_integer(&x)))
        .collect::<Result<Vec<_>>>()?;
    self_intersections.reverse();
    Ok(ResolvedCone { fan, self_intersections })
}

/// `(D')²` for the strict transform `D'` of `D = (V = 0)` on the weighted
/// blowup of `P(1, na - 1, a²)` at `(0:0:1)` with weights `1/a²(1, ab - 1)`,
/// `b = n mod a`. Computed on the refined fan; requires `a >= 2`, since for
/// `a = 1` the point is smooth and there is no such blowup.
pub fn blowup_self_intersection_k(w: &WahlPair) -> Result<BigInt> {
    let (n, a) = (w.n(), w.a());
    if *a < int(2) {
        return Err(Error::InvalidArgument(
            "a = 1: the point (0:0:1) of P(1, n-1, 1) is smooth and is not blown up".into(),
        ));
    }
    let b = modulo(n, a);
    let a2 = a * a;
    let fan = wps_fan_surface(&[BigInt::one(), w.na_minus_one(), a2.clone()])?;
    let weight = Vec2::frac(&BigInt::one(), &(a * &b - 1), &a2);
    let (refined, _) = fan.insert_ray(&weight)?;
    let d_index = refined.position(&Vec2::e2()).expect("v1 = e2 is a ray");
    let sq = refined.self_intersection(d_index)?;
    to_integer(&sq)
}

/// The chart formula for a weighted blowup whose weight generates `N/Z²`:
/// `U1 = 1/w1(-r, w2)` and `U2 = 1/w2(w1, -r)`.
pub fn blowup_chart_formula(
    r: &BigInt,
    w1: &BigInt,
    w2: &BigInt,
) -> Result<(CyclicQuotient, CyclicQuotient)> {
    let u1 = normalize_cq(w1, &-r, w2)?;
    let u2 = normalize_cq(w2, w1, &-r)?;
    Ok((u1, u2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::hj_expand;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn cq(r: i64, q: i64) -> CyclicQuotient {
        CyclicQuotient::new(&int(r), &int(q)).unwrap()
    }

    #[test]
    fn lattice_basis_and_membership() {
        let l = Lattice2::new(&int(9), &int(1), &int(2)).unwrap();
        assert_eq!(l.covolume(), &ratio(1, 9));
        assert!(l.contains(&Vec2::frac(&int(1), &int(2), &int(9))));
        assert!(l.contains(&Vec2::frac(&int(5), &int(1), &int(9))));
        assert!(!l.contains(&Vec2::frac(&int(1), &int(1), &int(9))));
        assert!(l.is_primitive(&Vec2::e1()));
        assert!(!l.is_primitive(&Vec2::int(3, 0)));
        let [b1, b2] = l.basis();
        assert_eq!(l.det(&b1, &b2), ratio(1, 1));
        assert!(Lattice2::new(&int(4), &int(2), &int(2)).is_err());
    }

    #[test]
    fn first_quadrant_cone_has_the_quotient_type() {
        for r in 2..60i64 {
            for q in 1..r {
                if q.gcd(&r) == 1 {
                    let l = Lattice2::new(&int(r), &int(1), &int(q)).unwrap();
                    assert_eq!(l.cone_type(&Vec2::e1(), &Vec2::e2()).unwrap(), cq(r, q));
                }
            }
        }
    }

    #[test]
    fn wps_data_examples() {
        let d = wps_data(&ints(&[1, 1, 1])).unwrap();
        assert_eq!((d.top_power.clone(), d.canonical_degree.clone()), (ratio(1, 1), int(-3)));
        let d = wps_data(&ints(&[1, 1, 1, 2])).unwrap();
        assert_eq!((d.top_power.clone(), d.canonical_degree.clone()), (ratio(1, 2), int(-5)));
        assert_eq!(d.dimension(), 3);
        let d = wps_data(&ints(&[1, 9, 2, 5])).unwrap();
        assert_eq!((d.top_power, d.canonical_degree), (ratio(1, 90), int(-17)));
        assert!(wps_data(&ints(&[2, 2, 1])).is_err());
        assert!(wps_data(&ints(&[1, 0, 1])).is_err());
    }

    #[test]
    fn singular_chart_examples() {
        let s = wps_singular_charts(&ints(&[1, 1, 4])).unwrap();
        assert_eq!(s, vec![ChartSingularity { vertex: 2, quotient: cq(4, 1) }]);
        let s = wps_singular_charts(&ints(&[1, 4, 25])).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].quotient, cq(4, 1));
        assert_eq!(s[1].quotient, cq(25, 4));
        assert!(wps_singular_charts(&ints(&[1, 1, 1])).unwrap().is_empty());
    }

    #[test]
    fn wps_fan_examples() {
        let f = wps_fan_surface(&ints(&[1, 1, 1])).unwrap();
        assert_eq!(f.rays()[2], Vec2::int(-1, -1));
        for i in 0..3 {
            assert_eq!(f.self_intersection(i).unwrap(), ratio(1, 1));
        }
        for w in [[1i64, 5, 4], [1, 1, 4], [1, 4, 25], [4, 25, 841]] {
            let f = wps_fan_surface(&ints(&w)).unwrap();
            let sum = (0..3).fold(Vec2::int(0, 0), |acc, i| acc.add(&f.rays()[i].scale(&ratio(w[i], 1))));
            assert!(sum.is_zero());
            // D_i² = wi / (wj wk).
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                assert_eq!(f.self_intersection(i).unwrap(), ratio(w[i], w[j] * w[k]));
            }
        }
    }

    #[test]
    fn fan_validation() {
        let l = Lattice2::standard();
        assert!(Fan2::new(l.clone(), vec![Vec2::e2(), Vec2::e1()], false).is_err());
        assert!(Fan2::new(l.clone(), vec![Vec2::e1(), Vec2::int(-1, 0)], false).is_err());
        assert!(Fan2::new(l.clone(), vec![Vec2::e1(), Vec2::int(2, 2)], false).is_err());
        // Winds twice.
        let twice = vec![
            Vec2::e1(),
            Vec2::int(-1, 1),
            Vec2::int(-1, -1),
            Vec2::int(1, -1),
            Vec2::int(-1, 2),
            Vec2::int(-1, -2),
        ];
        assert!(Fan2::new(l.clone(), twice, true).is_err());
        let partial = Fan2::new(l, vec![Vec2::e1(), Vec2::int(1, 1), Vec2::e2()], false).unwrap();
        assert!(partial.self_intersection(0).is_err());
        assert_eq!(partial.self_intersection(1).unwrap(), ratio(-1, 1));
    }

    #[test]
    fn blowup_examples() {
        let smooth = weighted_blowup(&Lattice2::standard(), &int(1), &int(1)).unwrap();
        assert!(smooth.charts.iter().all(|c| c.quotient.is_smooth()));
        assert_eq!(smooth.exceptional_self_intersection, ratio(-1, 1));

        let b = wahl_blowup(&WahlPair::from_u64(2, 1).unwrap());
        assert!(b.charts.iter().all(|c| c.quotient.is_smooth()));
        assert_eq!(b.exceptional_self_intersection, ratio(-4, 1));

        let b = wahl_blowup(&WahlPair::from_u64(5, 2).unwrap());
        assert!(b.chart(1).is_smooth());
        assert_eq!(b.chart(2), &cq(9, 2));

        let l = Lattice2::standard();
        assert!(matches!(weighted_blowup(&l, &int(2), &int(2)), Err(Error::NotPrimitive(_))));
        assert!(matches!(weighted_blowup(&l, &int(1), &int(0)), Err(Error::NotInterior(_))));
        let l = Lattice2::new(&int(4), &int(1), &int(1)).unwrap();
        assert!(matches!(weighted_blowup(&l, &int(1), &int(2)), Err(Error::NotInLattice(_))));
    }

    #[test]
    fn blowup_charts_match_formula() {
        for r in 2..40i64 {
            for q in 1..r {
                if q.gcd(&r) != 1 {
                    continue;
                }
                let l = Lattice2::new(&int(r), &int(1), &int(q)).unwrap();
                // w = (1/r)(1, q) generates N/Z².
                let b = weighted_blowup(&l, &int(1), &int(q)).unwrap();
                let (u1, u2) = blowup_chart_formula(&int(r), &int(1), &int(q)).unwrap();
                assert_eq!((b.chart(1), b.chart(2)), (&u1, &u2), "1/{r}(1,{q})");
            }
        }
    }

    #[test]
    fn resolve_examples() {
        assert_eq!(resolve_cone(&cq(4, 1)).unwrap().self_intersections, ints(&[-4]));
        assert_eq!(resolve_cone(&cq(9, 2)).unwrap().self_intersections, ints(&[-5, -2]));
        assert!(resolve_cone(&CyclicQuotient::smooth()).unwrap().self_intersections.is_empty());
        assert_eq!(resolve_cone(&cq(3, 2)).unwrap().self_intersections, ints(&[-2, -2]));
    }

    #[test]
    fn resolve_matches_hj_small() {
        for r in 2..=60i64 {
            for q in 1..r {
                if q.gcd(&r) == 1 {
                    let c = cq(r, q);
                    let neg: Vec<BigInt> =
                        resolve_cone(&c).unwrap().self_intersections.into_iter().map(|x| -x).collect();
                    assert_eq!(neg, hj_expand(c.order(), c.twist()).unwrap().into_entries());
                }
            }
        }
    }

    #[test]
    fn self_intersection_k_examples() {
        let k = |n, a| blowup_self_intersection_k(&WahlPair::from_u64(n, a).unwrap()).unwrap();
        assert_eq!(k(5, 2), int(2));
        assert_eq!(k(3, 2), int(1));
        assert_eq!(k(7, 3), int(2));
        assert!(blowup_self_intersection_k(&WahlPair::from_u64(4, 1).unwrap()).is_err());
    }

    #[test]
    fn toric_contraction_examples() {
        let c = |n, a| toric_wahl_contraction(&WahlPair::from_u64(n, a).unwrap());
        assert!(c(2, 1).is_smooth());
        assert_eq!(c(3, 1), cq(2, 1));
        assert_eq!(c(5, 2), cq(9, 2));
    }

    #[test]
    fn lattice_serde_round_trip() {
        let l = Lattice2::new(&int(25), &int(1), &int(9)).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(serde_json::from_str::<Lattice2>(&s).unwrap(), l);
    }
}

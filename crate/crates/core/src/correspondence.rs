//! Surfaces with Wahl singularities degenerating from the projective plane,
//! exceptional bundle classes on the plane, and the map between them.
//!
//! A Markov triple `(a1, a2, a3)` gives the weighted projective plane
//! `P(a1², a2², a3²)` whose vertex of index `ai > 1` is the Wahl singularity
//! `1/ai²(aj², ak²)`. Its parameter satisfies `±a ≡ 3 aj⁻¹ ak (mod ai)`.
//! Smoothing all but that vertex gives a surface with a single singular
//! point; the matching exceptional bundle has rank `ai` and `c1·H = d` with
//! `3d ≡ ±a (mod ai)`, i.e. `d ≡ ±aj⁻¹ ak`.
//!
//! Both signs are identified (swapping orbifold coordinates on one side,
//! dualizing on the other), so the map is between canonical forms.
//! Positions are 0-based.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bundle::{exceptional_c2, surface_w, BundleNumerics, SurfaceNumerics};
use crate::cyclic_quotient::{
    cq_to_wahl, normalize_cq, pair_to_cq, wahl_contraction, CyclicQuotient, WahlPair, WahlType,
};
use crate::error::{Error, Result};
use crate::exact::{int, mod_inverse, modulo, to_integer};
use crate::markov::{enumerate, is_markov, others, MarkovTriple};
use crate::toric::check_weights;

/// An exceptional bundle class on `P²` modulo duals and twists:
/// rank `r >= 2`, `0 <= d <= r/2`, and `c2` from `χ(End) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleClass {
    #[serde(with = "crate::serial::dec")]
    pub rank: BigInt,
    #[serde(with = "crate::serial::dec")]
    pub degree: BigInt,
    #[serde(with = "crate::serial::rat")]
    pub c2: BigRational,
}

impl BundleClass {
    /// Checks the canonical range and that `c2` is the exceptional value.
    pub fn new(rank: BigInt, degree: BigInt, c2: BigRational) -> Result<Self> {
        let b = canonical_bundle_class(&rank, &degree)?;
        if b.degree != degree {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} is not the canonical representative {} modulo rank {rank}",
                b.degree
            )));
        }
        if b.c2 != c2 {
            return Err(Error::InvalidArgument(format!(
                "c2 = {c2} differs from the exceptional value {} for rank {rank}, degree {degree}",
                b.c2
            )));
        }
        Ok(b)
    }

    /// `gcd(r, d) = 1` and integral `c2`.
    pub fn is_realizable(&self) -> bool {
        self.rank.gcd(&self.degree).is_one() && self.c2.is_integer()
    }

    pub fn c2_integer(&self) -> Result<BigInt> {
        to_integer(&self.c2)
    }

    pub fn numerics(&self) -> BundleNumerics {
        BundleNumerics { rank: self.rank.clone(), degree: self.degree.clone(), c2: self.c2.clone() }
    }
}

impl fmt::Display for BundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, degree {}, c2 {})", self.rank, self.degree, self.c2)
    }
}

/// Canonical class of rank `r` and degree `d_raw`: `d = min(d mod r, -d mod r)`.
pub fn canonical_bundle_class(r: &BigInt, d_raw: &BigInt) -> Result<BundleClass> {
    if *r < int(2) {
        return Err(Error::InvalidArgument(format!("rank must be at least 2, got {r}")));
    }
    let d = canonical_residue(d_raw, r);
    let c2 = exceptional_c2(r, &d, &SurfaceNumerics::projective_plane())?;
    Ok(BundleClass { rank: r.clone(), degree: d, c2 })
}

/// `min(x mod m, -x mod m)`.
pub fn canonical_residue(x: &BigInt, m: &BigInt) -> BigInt {
    let pos = modulo(x, m);
    let neg = modulo(&-x, m);
    pos.min(neg)
}

/// One vertex of `P(a1², a2², a3²)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovVertex {
    pub position: usize,
    #[serde(with = "crate::serial::dec")]
    pub entry: BigInt,
    pub quotient: CyclicQuotient,
    pub wahl: WahlType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovSurface {
    pub triple: MarkovTriple,
    #[serde(with = "crate::serial::dec_seq")]
    pub weights: [BigInt; 3],
    /// The singular vertices, one per entry greater than 1.
    pub singularities: Vec<MarkovVertex>,
}

/// The weighted projective plane `P(a1², a2², a3²)` and its singular vertices.
pub fn markov_surface(t: &MarkovTriple) -> Result<MarkovSurface> {
    let e = t.entries();
    let weights = [&e[0] * &e[0], &e[1] * &e[1], &e[2] * &e[2]];
    let mut singularities = Vec::new();
    for pos in 0..3 {
        if e[pos].is_one() {
            continue;
        }
        let (j, k) = others(pos)?;
        let quotient = normalize_cq(&weights[pos], &weights[j], &weights[k])?;
        let wahl = cq_to_wahl(&quotient).ok_or_else(|| Error::NotWahl(quotient.to_string()))?;
        singularities.push(MarkovVertex { position: pos, entry: e[pos].clone(), quotient, wahl });
    }
    Ok(MarkovSurface { triple: t.clone(), weights, singularities })
}

/// Canonical Wahl parameter `min(a, n - a)` at position `pos`, where
/// `a ≡ 3 aj⁻¹ ak (mod ai)`. Works on any positional Markov triple.
pub fn wahl_a_of_entries(e: &[BigInt; 3], pos: usize) -> Result<BigInt> {
    let (j, k) = others(pos)?;
    let n = &e[pos];
    if n.is_one() {
        return Err(Error::SmoothPoint(n.clone()));
    }
    let a = modulo(&(int(3) * mod_inverse(&e[j], n)? * &e[k]), n);
    Ok(canonical_residue(&a, n))
}

pub fn wahl_a_of_triple(t: &MarkovTriple, pos: usize) -> Result<BigInt> {
    wahl_a_of_entries(t.entries(), pos)
}

/// The same parameter read off the normalized vertex quotient.
pub fn wahl_a_via_quotient(t: &MarkovTriple, pos: usize) -> Result<BigInt> {
    let (j, k) = others(pos)?;
    let e = t.entries();
    if e[pos].is_one() {
        return Err(Error::SmoothPoint(e[pos].clone()));
    }
    let sq = |x: &BigInt| x * x;
    let c = normalize_cq(&sq(&e[pos]), &sq(&e[j]), &sq(&e[k]))?;
    let w = cq_to_wahl(&c).ok_or_else(|| Error::NotWahl(c.to_string()))?;
    Ok(w.a().clone())
}

/// The bundle class of the surface keeping only the singularity at `pos`.
pub fn phi_forward(t: &MarkovTriple, pos: usize) -> Result<BundleClass> {
    let r = t.get(pos)?.clone();
    if r.is_one() {
        return Err(Error::RankOne(r));
    }
    let a = wahl_a_of_triple(t, pos)?;
    let d = modulo(&(mod_inverse(&int(3), &r)? * a), &r);
    let class = canonical_bundle_class(&r, &d)?;
    class.c2_integer()?;
    Ok(class)
}

/// The canonical triple whose vertex of index `rank` gives `b`.
///
/// Searches triples with largest entry at most `rank` that contain `rank`,
/// matching `d ≡ ±aj⁻¹ ak (mod rank)`.
pub fn phi_backward(b: &BundleClass) -> Result<MarkovTriple> {
    let r = &b.rank;
    let not_exceptional = || Error::NotExceptionalClass { rank: r.clone(), degree: b.degree.clone() };
    if *r < int(2) {
        return Err(not_exceptional());
    }
    let mut matches: Vec<MarkovTriple> = Vec::new();
    for t in enumerate(r) {
        let e = t.entries();
        let hit = (0..3).filter(|&i| &e[i] == r).any(|i| {
            let (j, k) = others(i).expect("position in range");
            mod_inverse(&e[j], r).map(|inv| canonical_residue(&(inv * &e[k]), r) == b.degree).unwrap_or(false)
        });
        if hit && !matches.contains(&t) {
            matches.push(t);
        }
    }
    match matches.len() {
        0 => Err(not_exceptional()),
        1 => {
            if !b.is_realizable() {
                return Err(not_exceptional());
            }
            Ok(matches.remove(0))
        }
        count => Err(Error::UniquenessViolation { rank: r.clone(), degree: b.degree.clone(), count }),
    }
}

/// Whether the canonical parameter at `fixed` survives mutation at `mutate_pos`.
pub fn mutation_invariance(t: &MarkovTriple, fixed: usize, mutate_pos: usize) -> Result<bool> {
    if fixed == mutate_pos {
        return Err(Error::InvalidArgument("the mutated position must differ from the fixed one".into()));
    }
    let before = wahl_a_of_triple(t, fixed)?;
    let mutated = t.mutate_raw(mutate_pos)?;
    debug_assert!(is_markov(&mutated[0], &mutated[1], &mutated[2]));
    let after = wahl_a_of_entries(&mutated, fixed)?;
    Ok(before == after)
}

/// A monomial `± vars^exponents · params^parameter_exponents`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coefficient: i8,
    #[serde(with = "crate::serial::dec_seq")]
    pub exponents: Vec<BigInt>,
    #[serde(with = "crate::serial::dec_seq")]
    pub parameter_exponents: Vec<BigInt>,
}

impl Monomial {
    pub fn weighted_degree(&self, weights: &[BigInt]) -> BigInt {
        self.exponents.iter().zip(weights).map(|(e, w)| e * w).sum()
    }
}

/// A hypersurface equation: the sum of the terms vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub terms: Vec<Monomial>,
}

impl Equation {
    /// The common weighted degree of every term, if there is one.
    pub fn homogeneous_degree(&self, weights: &[BigInt]) -> Option<BigInt> {
        let mut degrees = self.terms.iter().map(|m| m.weighted_degree(weights));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// `XY - Σ params · Z^p · T^q`-style equations used by all families here.
    fn xy_equals(rhs: Vec<(Vec<BigInt>, Vec<BigInt>)>, parameters: &[&str]) -> Self {
        let one = BigInt::one;
        let zero = BigInt::zero;
        let mut terms = vec![Monomial {
            coefficient: 1,
            exponents: vec![one(), one(), zero(), zero()],
            parameter_exponents: vec![zero(); parameters.len()],
        }];
        for (exponents, parameter_exponents) in rhs {
            terms.push(Monomial { coefficient: -1, exponents, parameter_exponents });
        }
        Self {
            variables: ["X", "Y", "Z", "T"].map(String::from).to_vec(),
            parameters: parameters.iter().map(|s| s.to_string()).collect(),
            terms,
        }
    }

    /// Terms surviving when parameter `i` is zero (`nonzero[i] = false`)
    /// or generic (`true`).
    pub fn specialize(&self, nonzero: &[bool]) -> Vec<Monomial> {
        self.terms
            .iter()
            .filter(|m| m.parameter_exponents.iter().zip(nonzero).all(|(e, &nz)| e.is_zero() || nz))
            .cloned()
            .collect()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.terms.iter().enumerate() {
            let sign = if m.coefficient < 0 { "-" } else { "+" };
            if i > 0 || m.coefficient < 0 {
                write!(f, "{}{}", if i > 0 { " " } else { "" }, sign)?;
                if i > 0 {
                    f.write_str(" ")?;
                }
            }
            let mut factors: Vec<String> = Vec::new();
            let named = m
                .parameter_exponents
                .iter()
                .zip(&self.parameters)
                .chain(m.exponents.iter().zip(&self.variables));
            for (e, name) in named {
                if e.is_one() {
                    factors.push(name.clone());
                } else if !e.is_zero() {
                    factors.push(format!("{name}^{e}"));
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            f.write_str(&factors.join(""))?;
        }
        f.write_str(" = 0")
    }
}

/// `(xy = 0) ⊂ C³/(1/order)(wx, wy, wz)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldNormalCrossing {
    #[serde(with = "crate::serial::dec")]
    pub order: BigInt,
    /// Weights of `x, y, z`, reduced modulo the order.
    #[serde(with = "crate::serial::dec_seq")]
    pub weights: [BigInt; 3],
    /// The branch `(y = 0)` with coordinates `(x, z)`.
    pub branch_y0: CyclicQuotient,
    /// The branch `(x = 0)` with coordinates `(y, z)`.
    pub branch_x0: CyclicQuotient,
}

impl OrbifoldNormalCrossing {
    pub fn new(order: &BigInt, wx: &BigInt, wy: &BigInt, wz: &BigInt) -> Result<Self> {
        let red = |w: &BigInt| modulo(w, order);
        let weights = [red(wx), red(wy), red(wz)];
        Ok(Self {
            order: order.clone(),
            branch_y0: normalize_cq(order, &weights[0], &weights[2])?,
            branch_x0: normalize_cq(order, &weights[1], &weights[2])?,
            weights,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SingularityKind {
    Smooth,
    Wahl { quotient: CyclicQuotient, wahl: WahlType },
    CyclicQuotient { quotient: CyclicQuotient },
    OrbifoldNormalCrossing(OrbifoldNormalCrossing),
}

impl SingularityKind {
    /// Classifies a normalized surface quotient.
    pub fn of_quotient(quotient: CyclicQuotient) -> Self {
        if quotient.is_smooth() {
            return Self::Smooth;
        }
        match cq_to_wahl(&quotient) {
            Some(wahl) => Self::Wahl { quotient, wahl },
            None => Self::CyclicQuotient { quotient },
        }
    }

    pub fn quotient(&self) -> Option<&CyclicQuotient> {
        match self {
            Self::Wahl { quotient, .. } | Self::CyclicQuotient { quotient } => Some(quotient),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub label: String,
    /// Homogeneous coordinates, e.g. `(0:1:0:0)`.
    pub location: String,
    /// Names of the components through the point.
    pub components: Vec<String>,
    pub kind: SingularityKind,
    /// The family restricts to a Q-Gorenstein smoothing of the germ.
    pub qg_smoothed: bool,
    /// The family is locally trivial near the point.
    pub locally_trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub description: String,
    /// Weights when the component is itself a weighted projective plane.
    #[serde(with = "opt_dec_seq", default)]
    pub weights: Option<Vec<BigInt>>,
}

mod opt_dec_seq {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Option<Vec<String>> = v.as_ref().map(|v| v.iter().map(ToString::to_string).collect());
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<BigInt>>, D::Error> {
        let strings = Option::<Vec<String>>::deserialize(d)?;
        strings.map(|v| v.iter().map(|s| crate::serial::parse_int(s)).collect()).transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCurve {
    pub description: String,
    pub components: [String; 2],
    /// Its class on the exceptional surface `W`, as a multiple of `H`.
    #[serde(with = "crate::serial::dec", default)]
    pub class_on_w: BigInt,
}

/// Fibre type over one stratum of the parameter space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRegime {
    /// `true` for each parameter that is nonzero on the stratum.
    pub nonzero: Vec<bool>,
    pub description: String,
    #[serde(with = "opt_dec_seq", default)]
    pub surface_weights: Option<Vec<BigInt>>,
    pub equation: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub family: String,
    #[serde(with = "crate::serial::dec_seq")]
    pub ambient_weights: Vec<BigInt>,
    pub equation: Equation,
    #[serde(with = "crate::serial::dec")]
    pub equation_degree: BigInt,
    #[serde(with = "opt_dec", default)]
    pub base_change_degree: Option<BigInt>,
    pub components: Vec<Component>,
    pub singularities: Vec<SingularPoint>,
    pub double_curve: Option<DoubleCurve>,
    pub regimes: Vec<FiberRegime>,
    /// Numerics of the surface `W` when the family involves one.
    pub surface: Option<SurfaceNumerics>,
}

mod opt_dec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(ToString::to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| crate::serial::parse_int(&s)).transpose()
    }
}

impl DegenerationReport {
    pub fn singularity(&self, label: &str) -> Option<&SingularPoint> {
        self.singularities.iter().find(|s| s.label == label)
    }

    /// Every term has the same weighted degree, equal to `equation_degree`.
    pub fn is_weighted_homogeneous(&self) -> bool {
        self.equation.homogeneous_degree(&self.ambient_weights).as_ref() == Some(&self.equation_degree)
    }

    /// Each reported quotient is already in canonical form, and each
    /// orbifold normal crossing branch matches its weights.
    pub fn singularities_normalized(&self) -> bool {
        self.singularities.iter().all(|s| match &s.kind {
            SingularityKind::Smooth => true,
            SingularityKind::Wahl { quotient, wahl } => {
                CyclicQuotient::new(quotient.order(), quotient.twist()).as_ref() == Ok(quotient)
                    && cq_to_wahl(quotient).as_ref() == Some(wahl)
            }
            SingularityKind::CyclicQuotient { quotient } => {
                CyclicQuotient::new(quotient.order(), quotient.twist()).as_ref() == Ok(quotient)
            }
            SingularityKind::OrbifoldNormalCrossing(o) => {
                OrbifoldNormalCrossing::new(&o.order, &o.weights[0], &o.weights[1], &o.weights[2]).as_ref()
                    == Ok(o)
            }
        })
    }
}

fn ints<const N: usize>(v: [&BigInt; N]) -> Vec<BigInt> {
    v.iter().map(|x| (*x).clone()).collect()
}

/// The weighted blowup family after base change of degree `a`: exceptional
/// surface `W = (XY = Z^n + T^a) ⊂ P(1, na - 1, a, n)`, special fibre
/// `X̃1 ∪ W` glued along `C = (T = 0)`.
pub fn blowup_family(w: &WahlPair) -> Result<DegenerationReport> {
    let (n, a) = (w.n(), w.a());
    let m = w.na_minus_one();
    let one = BigInt::one();
    let zero = BigInt::zero();
    let ambient_weights = ints([&one, &m, a, n]);
    let equation = Equation::xy_equals(
        vec![(ints([&zero, &zero, n, &zero]), vec![]), (ints([&zero, &zero, &zero, a]), vec![])],
        &[],
    );
    let q = OrbifoldNormalCrossing::new(&m, &one, &-&one, &(a * a))?;
    debug_assert_eq!(q.branch_x0, wahl_contraction(w));
    let x1 = "strict transform X~1".to_string();
    let x2 = "W".to_string();
    let singularities = vec![
        SingularPoint {
            label: "Q".into(),
            location: "(0:1:0:0)".into(),
            components: vec![x1.clone(), x2.clone()],
            kind: if m.is_one() {
                SingularityKind::Smooth
            } else {
                SingularityKind::OrbifoldNormalCrossing(q.clone())
            },
            qg_smoothed: false,
            locally_trivial: false,
        },
        SingularPoint {
            label: "Q on X~1".into(),
            location: "C ∩ (contracted chain)".into(),
            components: vec![x1.clone()],
            kind: SingularityKind::of_quotient(wahl_contraction(w)),
            qg_smoothed: false,
            locally_trivial: false,
        },
        SingularPoint {
            label: "Q on W".into(),
            location: "(0:1:0:0)".into(),
            components: vec![x2.clone()],
            kind: SingularityKind::of_quotient(normalize_cq(&m, &one, &(a * a))?),
            qg_smoothed: false,
            locally_trivial: false,
        },
    ];
    Ok(DegenerationReport {
        family: "blowup".into(),
        equation_degree: n * a,
        ambient_weights,
        base_change_degree: Some(a.clone()),
        components: vec![
            Component {
                name: x1.clone(),
                description: format!(
                    "weighted blowup of {} with weights 1/{}(1, {m}), exceptional curve C",
                    pair_to_cq(w),
                    n * n
                ),
                weights: None,
            },
            Component {
                name: x2.clone(),
                description: format!("(XY = Z^{n} + T^{a}) in P(1, {m}, {a}, {n})"),
                weights: None,
            },
        ],
        singularities,
        double_curve: Some(DoubleCurve {
            description: "C = (T = 0) in W, a smooth rational curve".into(),
            components: [x1, x2],
            class_on_w: n.clone(),
        }),
        regimes: Vec::new(),
        surface: Some(surface_w(w)),
        equation,
    })
}

/// The degeneration `(XY = t Z^n + T^a) ⊂ P(1, na - 1, a, n) × C_t` of `W`
/// to `P(1, na - 1, a²)`.
pub fn descent_family(w: &WahlPair) -> Result<DegenerationReport> {
    let (n, a) = (w.n(), w.a());
    let m = w.na_minus_one();
    let one = BigInt::one();
    let zero = BigInt::zero();
    let a2 = a * a;
    let ambient_weights = ints([&one, &m, a, n]);
    let equation = Equation::xy_equals(
        vec![
            (ints([&zero, &zero, n, &zero]), vec![one.clone()]),
            (ints([&zero, &zero, &zero, a]), vec![zero.clone()]),
        ],
        &["t"],
    );
    let fiber_weights = ints([&one, &m, &a2]);
    check_weights(&fiber_weights)?;
    let fiber = "X".to_string();
    let p_quotient = normalize_cq(&a2, &one, &m)?;
    let p_kind = if a.is_one() {
        SingularityKind::Smooth
    } else {
        let b = modulo(n, a);
        let expected = pair_to_cq(&WahlPair::new(a, &b)?);
        if expected != p_quotient {
            return Err(Error::NotWahl(p_quotient.to_string()));
        }
        SingularityKind::of_quotient(p_quotient)
    };
    let q_kind = SingularityKind::of_quotient(normalize_cq(&m, &one, &a2)?);
    let regimes = vec![
        FiberRegime {
            nonzero: vec![false],
            description: format!("P(1, {m}, {a2}) via (U, V, W) -> (U^{a}, V^{a}, W, UV)"),
            surface_weights: Some(fiber_weights.clone()),
            equation: equation.specialize(&[false]),
        },
        FiberRegime {
            nonzero: vec![true],
            description: format!("W_{{{n},{a}}}"),
            surface_weights: None,
            equation: equation.specialize(&[true]),
        },
    ];
    Ok(DegenerationReport {
        family: "descent".into(),
        equation_degree: n * a,
        ambient_weights,
        base_change_degree: None,
        components: vec![Component {
            name: fiber.clone(),
            description: format!("special fibre (XY = T^{a}) = P(1, {m}, {a2})"),
            weights: Some(fiber_weights),
        }],
        singularities: vec![
            SingularPoint {
                label: "P".into(),
                location: "(0:0:1)".into(),
                components: vec![fiber.clone()],
                kind: p_kind,
                qg_smoothed: true,
                locally_trivial: false,
            },
            SingularPoint {
                label: "Q".into(),
                location: "(0:1:0)".into(),
                components: vec![fiber],
                kind: q_kind,
                qg_smoothed: false,
                locally_trivial: true,
            },
        ],
        double_curve: None,
        regimes,
        surface: Some(surface_w(w)),
        equation,
    })
}

/// The two-parameter family `(XY = s Z^{c'} + t T^c) ⊂ P(a², b², c, c') × C²`
/// joining `P(a², b², c²)` and `P(a², b², c'²)`, `c' = 3ab - c`.
pub fn mutation_family(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<DegenerationReport> {
    if !is_markov(a, b, c) {
        return Err(Error::NotMarkov(a.clone(), b.clone(), c.clone()));
    }
    MarkovTriple::new(a.clone(), b.clone(), c.clone())?;
    let cp = int(3) * a * b - c;
    let one = BigInt::one();
    let zero = BigInt::zero();
    let (a2, b2) = (a * a, b * b);
    let ambient_weights = ints([&a2, &b2, c, &cp]);
    let equation = Equation::xy_equals(
        vec![
            (ints([&zero, &zero, &cp, &zero]), vec![one.clone(), zero.clone()]),
            (ints([&zero, &zero, &zero, c]), vec![zero.clone(), one.clone()]),
        ],
        &["s", "t"],
    );
    let comp_a = ints([&a2, c, &cp]);
    let comp_b = ints([&b2, c, &cp]);
    check_weights(&comp_a)?;
    check_weights(&comp_b)?;
    let (name_a, name_b) = (format!("P({a2}, {c}, {cp})"), format!("P({b2}, {c}, {cp})"));
    let vertex = |idx: &BigInt| normalize_cq(&(idx * idx), c, &cp).map(SingularityKind::of_quotient);
    let onc = |order: &BigInt, wz: &BigInt| -> Result<SingularityKind> {
        if order.is_one() {
            Ok(SingularityKind::Smooth)
        } else {
            Ok(SingularityKind::OrbifoldNormalCrossing(OrbifoldNormalCrossing::new(order, &a2, &b2, wz)?))
        }
    };
    let singularities = vec![
        SingularPoint {
            label: format!("index {a}"),
            location: "(1:0:0:0)".into(),
            components: vec![name_a.clone()],
            kind: vertex(a)?,
            qg_smoothed: false,
            locally_trivial: false,
        },
        SingularPoint {
            label: format!("index {b}"),
            location: "(0:1:0:0)".into(),
            components: vec![name_b.clone()],
            kind: vertex(b)?,
            qg_smoothed: false,
            locally_trivial: false,
        },
        SingularPoint {
            label: format!("normal crossing {c}"),
            location: "(0:0:1:0)".into(),
            components: vec![name_a.clone(), name_b.clone()],
            kind: onc(c, &cp)?,
            qg_smoothed: false,
            locally_trivial: false,
        },
        SingularPoint {
            label: format!("normal crossing {cp}"),
            location: "(0:0:0:1)".into(),
            components: vec![name_a.clone(), name_b.clone()],
            kind: onc(&cp, c)?,
            qg_smoothed: false,
            locally_trivial: false,
        },
    ];
    let regime = |s: bool, t: bool, description: String, w: Option<Vec<BigInt>>| FiberRegime {
        nonzero: vec![s, t],
        description,
        surface_weights: w,
        equation: equation.specialize(&[s, t]),
    };
    let regimes = vec![
        regime(false, false, format!("{name_a} ∪ {name_b}"), None),
        regime(
            false,
            true,
            format!("P({a2}, {b2}, {}) by the {c}-uple embedding", c * c),
            Some(ints([&a2, &b2, &(c * c)])),
        ),
        regime(
            true,
            false,
            format!("P({a2}, {b2}, {}) by the {cp}-uple embedding", &cp * &cp),
            Some(ints([&a2, &b2, &(&cp * &cp)])),
        ),
        regime(true, true, format!("smoothing of the index {c} point of P({a2}, {b2}, {})", c * c), None),
    ];
    Ok(DegenerationReport {
        family: "mutation".into(),
        equation_degree: &a2 + &b2,
        ambient_weights,
        base_change_degree: None,
        components: vec![
            Component { name: name_a.clone(), description: "(Y = 0)".into(), weights: Some(comp_a) },
            Component { name: name_b.clone(), description: "(X = 0)".into(), weights: Some(comp_b) },
        ],
        singularities,
        double_curve: Some(DoubleCurve {
            description: format!("(X = Y = 0) = P({c}, {cp})"),
            components: [name_a, name_b],
            class_on_w: BigInt::zero(),
        }),
        regimes,
        surface: None,
        equation,
    })
}

/// A surface obtained from `P(a1², a2², a3²)` by smoothing some vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSmoothing {
    /// Positions whose singularity is smoothed.
    pub smoothed: Vec<usize>,
    pub remaining: Vec<WahlType>,
    pub is_projective_plane: bool,
}

/// One entry per subset of the singular vertices, starting with the empty
/// subset (the weighted plane itself) and ending with `P²`.
pub fn smoothable_surfaces(t: &MarkovTriple) -> Result<Vec<PartialSmoothing>> {
    let surface = markov_surface(t)?;
    let verts = &surface.singularities;
    let mut out = Vec::with_capacity(1 << verts.len());
    for mask in 0u32..(1 << verts.len()) {
        let smoothed = (0..verts.len()).filter(|i| mask & (1 << i) != 0).map(|i| verts[i].position).collect();
        let remaining: Vec<WahlType> =
            (0..verts.len()).filter(|i| mask & (1 << i) == 0).map(|i| verts[i].wahl.clone()).collect();
        out.push(PartialSmoothing { smoothed, is_projective_plane: remaining.is_empty(), remaining });
    }
    Ok(out)
}

/// `(n, a) → (a, n mod a) → ...`, ending at a pair with `a = 1`.
pub fn euclid_chain(w: &WahlPair) -> Result<Vec<WahlPair>> {
    let mut chain = vec![w.clone()];
    let mut cur = w.clone();
    while !cur.a().is_one() {
        let b = modulo(cur.n(), cur.a());
        cur = WahlPair::new(cur.a(), &b)?;
        chain.push(cur.clone());
    }
    Ok(chain)
}

/// `P` of the descent family at each step of [`euclid_chain`] is the
/// singularity whose smoothing is the next step's `W`.
pub fn descent_matches_euclid(w: &WahlPair) -> Result<bool> {
    let chain = euclid_chain(w)?;
    for pair in chain.windows(2) {
        let report = descent_family(&pair[0])?;
        let p = report.singularity("P").expect("descent reports P");
        match &p.kind {
            SingularityKind::Wahl { quotient, .. } if *quotient == pair_to_cq(&pair[1]) => {}
            _ => return Ok(false),
        }
    }
    let last = descent_family(chain.last().expect("chain is nonempty"))?;
    Ok(matches!(last.singularity("P").map(|p| &p.kind), Some(SingularityKind::Smooth)))
}

/// The exceptional surface of the blowup family and the general fibre of
/// the descent family are the same hypersurface.
pub fn families_consistent(w: &WahlPair) -> Result<bool> {
    let up = blowup_family(w)?;
    let down = descent_family(w)?;
    let general = down.regimes.iter().find(|r| r.nonzero == [true]).expect("descent has a general fibre");
    let strip = |terms: &[Monomial]| -> Vec<(i8, Vec<BigInt>)> {
        terms.iter().map(|m| (m.coefficient, m.exponents.clone())).collect()
    };
    Ok(up.ambient_weights == down.ambient_weights
        && strip(&up.equation.terms) == strip(&general.equation)
        && up.surface == down.surface
        && up.is_weighted_homogeneous()
        && down.is_weighted_homogeneous())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn t(a: u64, b: u64, c: u64) -> MarkovTriple {
        MarkovTriple::from_u64(a, b, c).unwrap()
    }

    fn pair(n: u64, a: u64) -> WahlPair {
        WahlPair::from_u64(n, a).unwrap()
    }

    fn class(r: i64, d: i64, c2: i64) -> BundleClass {
        BundleClass::new(int(r), int(d), ratio(c2, 1)).unwrap()
    }

    #[test]
    fn canonical_class_examples() {
        assert_eq!(canonical_bundle_class(&int(2), &int(5)).unwrap().degree, int(1));
        assert_eq!(canonical_bundle_class(&int(5), &int(-2)).unwrap().degree, int(2));
        assert_eq!(canonical_bundle_class(&int(5), &int(3)).unwrap().degree, int(2));
        assert!(canonical_bundle_class(&int(1), &int(0)).is_err());
        assert!(BundleClass::new(int(5), int(3), ratio(4, 1)).is_err());
        assert!(BundleClass::new(int(5), int(2), ratio(5, 1)).is_err());
    }

    #[test]
    fn markov_surface_examples() {
        let s = markov_surface(&t(1, 1, 1)).unwrap();
        assert!(s.singularities.is_empty());
        let s = markov_surface(&t(1, 1, 2)).unwrap();
        assert_eq!(s.weights, [int(1), int(1), int(4)]);
        assert_eq!(s.singularities.len(), 1);
        assert_eq!(s.singularities[0].wahl, WahlType::from_u64(2, 1).unwrap());
        let s = markov_surface(&t(1, 2, 5)).unwrap();
        let w: Vec<_> = s.singularities.iter().map(|v| v.wahl.clone()).collect();
        assert_eq!(w, vec![WahlType::from_u64(2, 1).unwrap(), WahlType::from_u64(5, 1).unwrap()]);
    }

    #[test]
    fn wahl_a_examples() {
        assert_eq!(wahl_a_of_triple(&t(1, 1, 2), 2).unwrap(), int(1));
        assert_eq!(wahl_a_of_triple(&t(1, 2, 5), 2).unwrap(), int(1));
        assert_eq!(wahl_a_of_triple(&t(2, 5, 29), 2).unwrap(), int(7));
        assert!(matches!(wahl_a_of_triple(&t(1, 2, 5), 0), Err(Error::SmoothPoint(_))));
        for tr in enumerate(&int(100_000)) {
            for pos in 0..3 {
                if !tr.entries()[pos].is_one() {
                    assert_eq!(wahl_a_of_triple(&tr, pos), wahl_a_via_quotient(&tr, pos));
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_forward(&t(1, 1, 2), 2).unwrap(), class(2, 1, 1));
        assert_eq!(phi_forward(&t(1, 2, 5), 2).unwrap(), class(5, 2, 4));
        let b = phi_forward(&t(2, 5, 29), 2).unwrap();
        assert_eq!(b.degree, int(12));
        assert!(b.c2.is_integer());
        assert!(matches!(phi_forward(&t(1, 2, 5), 0), Err(Error::RankOne(_))));

        assert_eq!(phi_backward(&class(2, 1, 1)).unwrap(), t(1, 1, 2));
        assert_eq!(phi_backward(&class(5, 2, 4)).unwrap(), t(1, 2, 5));
        let bad = canonical_bundle_class(&int(5), &int(1)).unwrap();
        assert_eq!(bad.c2, ratio(14, 5));
        assert!(matches!(phi_backward(&bad), Err(Error::NotExceptionalClass { .. })));
        let not_markov = canonical_bundle_class(&int(7), &int(1)).unwrap();
        assert!(matches!(phi_backward(&not_markov), Err(Error::NotExceptionalClass { .. })));
    }

    #[test]
    fn round_trip_small() {
        for tr in enumerate(&int(2000)) {
            if tr.is_root() {
                continue;
            }
            let b = phi_forward(&tr, 2).unwrap();
            assert!(b.is_realizable());
            assert_eq!(phi_backward(&b).unwrap(), tr);
        }
    }

    #[test]
    fn mutation_invariance_examples() {
        assert!(mutation_invariance(&t(1, 2, 5), 2, 1).unwrap());
        assert!(mutation_invariance(&t(1, 1, 2), 2, 0).unwrap());
        assert!(mutation_invariance(&t(1, 1, 2), 2, 2).is_err());
    }

    #[test]
    fn blowup_family_examples() {
        let r = blowup_family(&pair(5, 2)).unwrap();
        assert_eq!(r.ambient_weights, vec![int(1), int(9), int(2), int(5)]);
        assert_eq!(r.base_change_degree, Some(int(2)));
        assert!(r.is_weighted_homogeneous());
        assert!(r.singularities_normalized());
        match &r.singularity("Q").unwrap().kind {
            SingularityKind::OrbifoldNormalCrossing(o) => {
                assert_eq!(o.order, int(9));
                assert_eq!(o.weights, [int(1), int(8), int(4)]);
            }
            k => panic!("unexpected {k:?}"),
        }
        let r = blowup_family(&pair(2, 1)).unwrap();
        assert_eq!(r.ambient_weights, vec![int(1), int(1), int(1), int(2)]);
        assert_eq!(r.singularity("Q").unwrap().kind, SingularityKind::Smooth);
        let r = blowup_family(&pair(3, 1)).unwrap();
        assert_eq!(r.ambient_weights, vec![int(1), int(2), int(1), int(3)]);
        assert_eq!(r.base_change_degree, Some(int(1)));
    }

    #[test]
    fn descent_family_examples() {
        let r = descent_family(&pair(5, 2)).unwrap();
        assert_eq!(r.components[0].weights, Some(vec![int(1), int(9), int(4)]));
        let p = r.singularity("P").unwrap();
        assert!(p.qg_smoothed);
        assert!(
            matches!(&p.kind, SingularityKind::Wahl { wahl, .. } if *wahl == WahlType::from_u64(2, 1).unwrap())
        );
        let q = r.singularity("Q").unwrap();
        assert!(q.locally_trivial);
        assert_eq!(q.kind.quotient(), Some(&normalize_cq(&int(9), &int(1), &int(4)).unwrap()));
        let r = descent_family(&pair(3, 2)).unwrap();
        assert_eq!(r.components[0].weights, Some(vec![int(1), int(5), int(4)]));
        let r = descent_family(&pair(2, 1)).unwrap();
        assert_eq!(r.singularity("P").unwrap().kind, SingularityKind::Smooth);
        assert_eq!(r.singularity("Q").unwrap().kind, SingularityKind::Smooth);
        assert!(r.is_weighted_homogeneous());
    }

    #[test]
    fn mutation_family_examples() {
        let r = mutation_family(&int(1), &int(1), &int(1)).unwrap();
        assert_eq!(r.ambient_weights, vec![int(1), int(1), int(1), int(2)]);
        let ws: Vec<_> = r.regimes.iter().filter_map(|g| g.surface_weights.clone()).collect();
        assert_eq!(ws, vec![vec![int(1), int(1), int(1)], vec![int(1), int(1), int(4)]]);
        assert!(r.is_weighted_homogeneous());
        assert!(r.singularities_normalized());
        let r = mutation_family(&int(1), &int(2), &int(5)).unwrap();
        assert_eq!(r.ambient_weights, vec![int(1), int(4), int(5), int(1)]);
        let r = mutation_family(&int(2), &int(5), &int(29)).unwrap();
        assert!(r.is_weighted_homogeneous());
        assert!(r.singularities_normalized());
        assert!(matches!(r.singularities[1].kind, SingularityKind::Wahl { .. }));
        assert!(mutation_family(&int(1), &int(2), &int(4)).is_err());
    }

    #[test]
    fn smoothing_examples() {
        assert_eq!(smoothable_surfaces(&t(1, 1, 1)).unwrap().len(), 1);
        let s = smoothable_surfaces(&t(1, 1, 2)).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!s[0].is_projective_plane && s[1].is_projective_plane);
        assert_eq!(smoothable_surfaces(&t(1, 2, 5)).unwrap().len(), 4);
        assert_eq!(smoothable_surfaces(&t(2, 5, 29)).unwrap().len(), 8);
    }

    #[test]
    fn family_consistency() {
        for n in 2..40u64 {
            for a in 1..n {
                if num_integer::gcd(n, a) == 1 {
                    let w = pair(n, a);
                    assert!(families_consistent(&w).unwrap(), "{w}");
                    assert!(descent_matches_euclid(&w).unwrap(), "{w}");
                    assert!(blowup_family(&w).unwrap().singularities_normalized());
                }
            }
        }
        let chain: Vec<_> =
            euclid_chain(&pair(7, 3)).unwrap().iter().map(|p| (p.n().clone(), p.a().clone())).collect();
        assert_eq!(chain, vec![(int(7), int(3)), (int(3), int(1))]);
    }

    #[test]
    fn report_serde_round_trip() {
        let r = mutation_family(&int(1), &int(2), &int(5)).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<DegenerationReport>(&s).unwrap(), r);
        let r = blowup_family(&pair(5, 2)).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<DegenerationReport>(&s).unwrap(), r);
    }

    #[test]
    fn equation_display() {
        let r = descent_family(&pair(5, 2)).unwrap();
        assert_eq!(r.equation.to_string(), "XY - tZ^5 - T^2 = 0");
    }
}

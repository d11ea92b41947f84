//! The verification suite behind `wahl verify`.
//!
//! Each check enumerates a parameter range and compares independent
//! computations exactly. Checks run on separate threads; results are
//! reported in check order.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bundle::{
    c2_closed_form, euler_pairing, exceptional_c2, f1_numerics, f2_numerics, restriction_degree,
    riemann_roch, surface_w, BundleNumerics, SurfaceNumerics,
};
use crate::correspondence::{
    blowup_family, canonical_bundle_class, descent_family, descent_matches_euclid, families_consistent,
    markov_surface, mutation_family, mutation_invariance, phi_backward, phi_forward, wahl_a_of_triple,
    wahl_a_via_quotient, SingularityKind,
};
use crate::cyclic_quotient::{
    cq_to_wahl, index_one_cover, link_to_milnor_kernel_order, milnor, milnor_fiber_homology,
    minimal_resolution, normalize_cq, specialization_cokernel, wahl_contraction, wahl_contraction_from_chain,
    wahl_to_cq, CyclicQuotient, WahlPair, WahlType,
};
use crate::exact::{chain_determinant, hj_evaluate, hj_expand, int, mod_inverse, ratio};
use crate::homology::AbelianGroup;
use crate::markov::{descend, enumerate, is_markov, mutate_entries, MarkovTriple};
use crate::toric::{
    blowup_chart_formula, blowup_self_intersection_k, resolve_cone, toric_wahl_contraction, weighted_blowup,
    wps_data, wps_fan_surface, Lattice2, Vec2,
};

/// Parameter ranges for the suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Largest Markov entry for the Markov suite.
    #[serde(with = "crate::serial::dec")]
    pub markov_max: BigInt,
    /// Largest Markov entry for the correspondence checks.
    #[serde(with = "crate::serial::dec")]
    pub phi_max: BigInt,
    pub hj_r_max: u64,
    pub wahl_n_max: u64,
    pub contraction_n_max: u64,
    pub numerics_n_max: u64,
    pub c2_r_max: u64,
    pub milnor_n_max: u64,
    pub k_n_max: u64,
    pub resolve_r_max: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            markov_max: int(1_000_000),
            phi_max: int(10_000),
            hj_r_max: 500,
            wahl_n_max: 200,
            contraction_n_max: 50,
            numerics_n_max: 100,
            c2_r_max: 100,
            milnor_n_max: 50,
            k_n_max: 50,
            resolve_r_max: 200,
        }
    }
}

impl VerifyConfig {
    /// Sets both Markov enumeration bounds.
    pub fn with_bound(mut self, bound: BigInt) -> Self {
        self.phi_max = bound.clone();
        self.markov_max = bound;
        self
    }

    /// Sets every integer range (indices, orders, ranks) to `n`.
    pub fn with_n_max(mut self, n: u64) -> Self {
        self.hj_r_max = n;
        self.wahl_n_max = n;
        self.contraction_n_max = n;
        self.numerics_n_max = n;
        self.c2_r_max = n;
        self.milnor_n_max = n;
        self.k_n_max = n;
        self.resolve_r_max = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    /// Number of instances examined.
    pub cases: u64,
    /// First failure, or a short summary.
    pub detail: String,
    pub millis: u64,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:>2}] {} {} ({} cases): {}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.detail
        )
    }
}

/// Accumulates cases and remembers the first failure.
#[derive(Default)]
struct Tally {
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    fn finish(self, summary: &str) -> (bool, u64, String) {
        match self.failure {
            None => (true, self.cases, summary.to_string()),
            Some(f) => (false, self.cases, f),
        }
    }
}

type Check = fn(&VerifyConfig) -> (bool, u64, String);

/// The checks, in report order. The first ten are the acceptance criteria.
pub const CHECKS: &[(&str, Check)] = &[
    ("markov suite", check_markov),
    ("Wahl chains and continued fractions", check_hj),
    ("contraction cross-check", check_contraction),
    ("Riemann-Roch and restriction degrees", check_riemann_roch),
    ("c2 consistency", check_c2),
    ("bijection", check_bijection),
    ("mutation invariance", check_mutation_invariance),
    ("Milnor fibre homology", check_milnor),
    ("toric suite", check_toric),
    ("sanity degeneration", check_sanity),
    ("quotient normal forms", check_normal_forms),
    ("Markov surfaces and vertex parameters", check_markov_surfaces),
    ("Euler pairing diagonal", check_pairing_diagonal),
    ("degeneration families", check_families),
];

/// Runs every check, concurrently, and returns results in check order.
pub fn run_all(config: &VerifyConfig) -> Vec<CheckResult> {
    run_selected(config, |_| true)
}

pub fn run_selected(config: &VerifyConfig, select: impl Fn(usize) -> bool) -> Vec<CheckResult> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .filter(|(i, _)| select(i + 1))
            .map(|(i, (name, check))| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let (passed, cases, detail) = check(config);
                    CheckResult {
                        index: i + 1,
                        name: name.to_string(),
                        passed,
                        cases,
                        detail,
                        millis: start.elapsed().as_millis() as u64,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    })
}

/// Coprime `(n, a)` with `0 < a < n`, `2 <= n <= n_max`.
pub fn wahl_pairs(n_max: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=n_max).flat_map(|n| (1..n).filter(move |&a| a.gcd(&n) == 1).map(move |a| (n, a)))
}

fn pair(n: u64, a: u64) -> WahlPair {
    WahlPair::from_u64(n, a).expect("coprime pair")
}

fn check_markov(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    let triples = enumerate(&c.markov_max);
    for tr in &triples {
        let [a, b, cc] = tr.entries();
        t.check(is_markov(a, b, cc), || format!("{tr} fails the Markov equation"));
        t.check(tr.arithmetic_properties_hold(), || format!("{tr} is not coprime / has a multiple of 3"));
        let steps = descend(tr);
        let reaches_root = steps.last().map_or(tr.is_root(), |s| s.to.is_root());
        t.check(reaches_root, || format!("descent from {tr} does not reach (1, 1, 1)"));
        for pos in 0..3 {
            let once = mutate_entries(tr.entries(), pos).expect("position in range");
            t.check(is_markov(&once[0], &once[1], &once[2]), || {
                format!("mutation of {tr} at {pos} leaves the Markov surface")
            });
            let twice = mutate_entries(&once, pos).expect("position in range");
            t.check(&twice == tr.entries(), || format!("mutation of {tr} at {pos} is not an involution"));
        }
        if !tr.is_root() {
            let smaller = tr.neighbours().iter().filter(|n| n.largest() < tr.largest()).count();
            t.check(smaller == 1, || format!("{tr} has {smaller} neighbours with smaller maximum"));
        }
    }
    t.finish(&format!("{} triples with max entry <= {}", triples.len(), c.markov_max))
}

fn check_hj(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for r in 2..=c.hj_r_max {
        for q in 1..r {
            if q.gcd(&r) != 1 {
                continue;
            }
            let chain = hj_expand(&int(r), &int(q)).expect("coprime");
            t.check(hj_evaluate(&chain) == ratio(r, q), || {
                format!("hj_evaluate(hj_expand({r}, {q})) != {r}/{q}")
            });
            t.check(chain_determinant(&chain) == int(r), || format!("det of hj_expand({r}, {q}) != {r}"));
            let inv = mod_inverse(&int(q), &int(r)).expect("unit");
            t.check(mod_inverse(&inv, &int(r)).ok() == Some(int(q)), || {
                format!("mod_inverse not an involution at {q} mod {r}")
            });
        }
    }
    for (n, a) in wahl_pairs(c.wahl_n_max) {
        let n2 = int(n * n);
        let chain = hj_expand(&n2, &int(n * a - 1)).expect("coprime");
        t.check(chain_determinant(&chain) == n2, || format!("det of the ({n},{a}) chain != n²"));
        t.check(hj_evaluate(&chain) == BigRational::new(n2.clone(), int(n * a - 1)), || {
            format!("hj_evaluate does not invert the ({n},{a}) chain")
        });
    }
    t.finish(&format!("r <= {}, Wahl n <= {}", c.hj_r_max, c.wahl_n_max))
}

fn check_contraction(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for (n, a) in wahl_pairs(c.contraction_n_max) {
        let w = pair(n, a);
        let closed = wahl_contraction(&w);
        let toric = toric_wahl_contraction(&w);
        let chain = wahl_contraction_from_chain(&w);
        let quoted = normalize_cq(&int(n * a - 1), &int(a * a), &int(-1)).expect("coprime");
        t.check(closed == toric, || format!("({n},{a}): modular {closed} != toric {toric}"));
        t.check(closed == chain, || format!("({n},{a}): modular {closed} != chain {chain}"));
        t.check(closed == quoted, || format!("({n},{a}): {closed} != 1/(na-1)(a², -1) = {quoted}"));
    }
    t.finish(&format!("all pairs with n <= {}", c.contraction_n_max))
}

fn check_riemann_roch(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for (n, a) in wahl_pairs(c.numerics_n_max) {
        let w = pair(n, a);
        let s = surface_w(&w);
        let f1 = f1_numerics(&w);
        t.check(riemann_roch(&f1, &s) == ratio(n + a, 1), || format!("chi(F1) != a + n at ({n},{a})"));
        match f2_numerics(&w) {
            Ok(f2) => {
                t.check(f2.rank == int(n), || format!("rank F2 != n at ({n},{a})"));
                let deg = restriction_degree(&f2.degree, &int(n), &s);
                t.check(deg == ratio(n, 1), || format!("F2·C2 = {deg} != n at ({n},{a})"));
            }
            Err(e) => t.fail(format!("F2 at ({n},{a}): {e}")),
        }
        let deg = restriction_degree(&f1.degree, &int(a), &s);
        t.check(deg == ratio(a, 1), || format!("F1·C1 = {deg} != a at ({n},{a})"));
        let k2 = BigRational::new(int((a + n) * (a + n)), int(n * a - 1));
        t.check(s.k_squared() == k2, || format!("K² != (a+n)²/(na-1) at ({n},{a})"));
    }
    t.finish(&format!("all pairs with n <= {}", c.numerics_n_max))
}

fn check_c2(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    let p2 = SurfaceNumerics::projective_plane();
    for r in 1..=c.c2_r_max as i64 {
        for d in -r..=r {
            let b = BundleNumerics::exceptional(int(r), int(d), &p2).expect("positive rank");
            let closed = c2_closed_form(&int(r), &b.c1_squared(&p2));
            t.check(b.c2 == closed, || format!("c2 forms disagree at ({r}, {d})"));
        }
    }
    for tr in enumerate(&c.phi_max) {
        for pos in 0..3 {
            if tr.entries()[pos].is_one() {
                continue;
            }
            match phi_forward(&tr, pos) {
                Ok(b) => {
                    let n = b.numerics();
                    t.check(euler_pairing(&n, &n, &p2).is_one(), || format!("chi(F, F) != 1 for {b}"));
                    t.check(b.c2.is_integer(), || format!("c2 of {b} is not integral"));
                    t.check(b.rank.gcd(&b.degree).is_one(), || format!("gcd(r, d) != 1 for {b}"));
                }
                Err(e) => t.fail(format!("phi_forward({tr}, {pos}): {e}")),
            }
        }
    }
    let control = exceptional_c2(&int(5), &int(1), &p2).expect("valid");
    t.check(!control.is_integer(), || "c2(5, 1) is integral".into());
    t.finish(&format!("r <= {}; c2(5, 1) = {control}", c.c2_r_max))
}

fn check_bijection(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    let mut seen = HashSet::new();
    let triples = enumerate(&c.phi_max);
    for tr in triples.iter().filter(|tr| !tr.is_root()) {
        match phi_forward(tr, 2) {
            Ok(b) => {
                let back = phi_backward(&b);
                t.check(back.as_ref() == Ok(tr), || format!("phi_backward(phi_forward({tr})) = {back:?}"));
                t.check(seen.insert(b.clone()), || format!("{b} is hit twice"));
            }
            Err(e) => t.fail(format!("phi_forward({tr}): {e}")),
        }
    }
    let examples = [((1, 1, 2), (2, 1, 1)), ((1, 2, 5), (5, 2, 4))];
    for ((x, y, z), (r, d, c2)) in examples {
        let got = phi_forward(&MarkovTriple::from_u64(x, y, z).expect("Markov"), 2);
        let ok = got.as_ref().is_ok_and(|b| b.rank == int(r) && b.degree == int(d) && b.c2 == ratio(c2, 1));
        t.check(ok, || format!("phi_forward({x}, {y}, {z}) = {got:?}"));
    }
    t.finish(&format!("{} classes, no collisions", seen.len()))
}

fn check_mutation_invariance(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for tr in enumerate(&c.phi_max) {
        for fixed in 0..3 {
            if tr.entries()[fixed].is_one() {
                continue;
            }
            for m in (0..3).filter(|&m| m != fixed) {
                let ok = mutation_invariance(&tr, fixed, m);
                t.check(ok == Ok(true), || format!("{tr}: fixed {fixed}, mutate {m} gives {ok:?}"));
            }
        }
    }
    t.finish(&format!("triples with max entry <= {}", c.phi_max))
}

fn check_milnor(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for n in 2..=c.milnor_n_max {
        match milnor_fiber_homology(&int(n)) {
            Ok(h) => {
                t.check(h.h0 == AbelianGroup::new(1, vec![]), || format!("H0 != Z at n = {n}"));
                t.check(h.h1 == AbelianGroup::cyclic(int(n)), || format!("H1 = {} at n = {n}", h.h1));
                t.check(h.h2.is_trivial(), || format!("H2 = {} at n = {n}", h.h2));
                t.check(h.euler.is_one(), || format!("euler = {} at n = {n}", h.euler));
            }
            Err(e) => t.fail(format!("n = {n}: {e}")),
        }
        for a in (1..n).filter(|a| a.gcd(&n) == 1) {
            let w = WahlType::from_u64(n, a).expect("coprime");
            t.check(link_to_milnor_kernel_order(&w) == int(n), || {
                format!("|H1(L)|/|H1(M)| != n at ({n},{a})")
            });
            t.check(specialization_cokernel(&w) == int(n), || format!("cokernel != Z/n at ({n},{a})"));
        }
    }
    for n in 2..=c.milnor_n_max.min(12) as usize {
        let q = milnor::orbit_quotient_of_cover(n);
        let model = milnor::quotient_model(&int(n as u64));
        t.check((0..3).all(|k| q.homology(k) == model.homology(k)), || {
            format!("orbit quotient of the cover disagrees with the model at n = {n}")
        });
        let cover = milnor::cover_model(n);
        t.check(cover.euler_characteristic() == int(n as u64), || format!("cover euler != n at n = {n}"));
    }
    t.finish(&format!("2 <= n <= {}", c.milnor_n_max))
}

fn check_toric(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for (n, a) in wahl_pairs(c.numerics_n_max) {
        let m = n * a - 1;
        match wps_data(&[int(1), int(m), int(a), int(n)]) {
            Ok(d) => {
                t.check(d.top_power == ratio(1, m * a * n), || format!("A³ wrong on P(1,{m},{a},{n})"));
                let h2 = &d.top_power * BigRational::from_integer(int(n * a));
                t.check(h2 == ratio(1, m), || format!("H² on W_({n},{a}) = {h2}"));
                let k = &d.canonical_degree + int(n * a);
                t.check(k == surface_w(&pair(n, a)).k_in_h, || format!("adjunction K on W_({n},{a}) = {k}H"));
            }
            Err(e) => t.fail(format!("P(1,{m},{a},{n}): {e}")),
        }
    }
    for (n, a) in wahl_pairs(c.k_n_max).filter(|&(_, a)| a >= 2) {
        let k = blowup_self_intersection_k(&pair(n, a));
        t.check(k == Ok(int(n / a)), || format!("(D')² at ({n},{a}) = {k:?}, expected {}", n / a));
    }
    for (n, a) in wahl_pairs(c.contraction_n_max) {
        let w = pair(n, a);
        let fan = wps_fan_surface(&[int(1), w.na_minus_one(), int(a * a)]);
        let ok = fan.as_ref().is_ok_and(|f| {
            let ws = [int(1), w.na_minus_one(), int(a * a)];
            (0..3)
                .fold(Vec2::int(0, 0), |acc, i| {
                    acc.add(&f.rays()[i].scale(&BigRational::from_integer(ws[i].clone())))
                })
                .is_zero()
        });
        t.check(ok, || format!("Σ wi vi != 0 for P(1, {}, {})", w.na_minus_one(), a * a));
    }
    match wps_fan_surface(&[int(1), int(1), int(1)]) {
        Ok(f) => {
            for i in 0..3 {
                t.check(f.self_intersection(i) == Ok(ratio(1, 1)), || {
                    format!("P² ray {i} self-intersection != 1")
                });
            }
        }
        Err(e) => t.fail(format!("P² fan: {e}")),
    }
    for r in 2..=c.resolve_r_max {
        for q in (1..r).filter(|q| q.gcd(&r) == 1) {
            let cq = CyclicQuotient::new(&int(r), &int(q)).expect("coprime");
            let expected: Vec<BigInt> =
                minimal_resolution(&cq).into_entries().into_iter().map(|b| -b).collect();
            let got = resolve_cone(&cq).map(|res| res.self_intersections);
            t.check(got.as_ref() == Ok(&expected), || format!("resolve_cone({cq}) = {got:?}"));
        }
    }
    for r in 2..=c.contraction_n_max.min(40) {
        for q in (1..r).filter(|q| q.gcd(&r) == 1) {
            let l = Lattice2::new(&int(r), &int(1), &int(q)).expect("coprime");
            let b = weighted_blowup(&l, &int(1), &int(q));
            let f = blowup_chart_formula(&int(r), &int(1), &int(q));
            let ok = matches!((&b, &f), (Ok(b), Ok((u1, u2))) if b.chart(1) == u1 && b.chart(2) == u2);
            t.check(ok, || format!("chart types of the 1/{r}(1,{q}) blowup disagree with the formula"));
        }
    }
    t.finish("WPS numerics, (D')² = floor(n/a), P² fan, resolutions, blowup charts")
}

fn check_sanity(_: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    let s = surface_w(&pair(2, 1));
    t.check(s.h_squared.is_one(), || format!("H² on W_(2,1) = {}", s.h_squared));
    t.check(s.k_in_h == int(-3), || format!("K on W_(2,1) = {}H", s.k_in_h));
    t.check(s.k_squared() == ratio(9, 1), || format!("K² on W_(2,1) = {}", s.k_squared()));
    match descent_family(&pair(5, 2)) {
        Ok(r) => {
            let fiber = r.components.first().and_then(|c| c.weights.clone());
            t.check(fiber == Some(vec![int(1), int(9), int(4)]), || {
                format!("special fibre weights {fiber:?}")
            });
            let p = r.singularity("P").map(|p| p.kind.clone());
            let want_p = WahlType::from_u64(2, 1).expect("valid");
            t.check(matches!(&p, Some(SingularityKind::Wahl { wahl, .. }) if *wahl == want_p), || {
                format!("P = {p:?}")
            });
            let q = r.singularity("Q").and_then(|q| q.kind.quotient().cloned());
            let want_q = normalize_cq(&int(9), &int(1), &int(4)).expect("coprime");
            t.check(q.as_ref() == Some(&want_q), || format!("Q = {q:?}"));
        }
        Err(e) => t.fail(format!("descent_family(5, 2): {e}")),
    }
    t.finish("W_(2,1) = P² numerics; descent (5,2) -> P(1,9,4)")
}

fn check_normal_forms(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for r in 2..=c.wahl_n_max {
        for q in (1..r).filter(|q| q.gcd(&r) == 1) {
            let x = normalize_cq(&int(r), &int(q), &BigInt::one());
            let y = normalize_cq(&int(r), &BigInt::one(), &int(q));
            t.check(x == y, || format!("normalize_cq({r}, {q}, 1) != normalize_cq({r}, 1, {q})"));
        }
    }
    for (n, a) in wahl_pairs(c.wahl_n_max) {
        let w = WahlType::from_u64(n, a).expect("coprime");
        let cq = wahl_to_cq(&w);
        t.check(cq_to_wahl(&cq).as_ref() == Some(&w), || format!("cq_to_wahl(wahl_to_cq({w})) != {w}"));
        t.check(chain_determinant(&minimal_resolution(&cq)) == int(n * n), || {
            format!("det of the resolution of {w} != n²")
        });
        let cover = index_one_cover(&w);
        t.check(
            cover.degree == int(n) && cover.du_val_a_index == int(n - 1) && cover.cover.is_du_val_a(),
            || format!("index-one cover of {w} is not A_(n-1)"),
        );
    }
    t.finish(&format!("r, n <= {}", c.wahl_n_max))
}

fn check_markov_surfaces(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for tr in enumerate(&c.markov_max) {
        match markov_surface(&tr) {
            Ok(s) => {
                let expected = tr.entries().iter().filter(|e| !e.is_one()).count();
                t.check(s.singularities.len() == expected, || format!("{tr}: wrong number of Wahl points"));
            }
            Err(e) => t.fail(format!("markov_surface({tr}): {e}")),
        }
        for pos in (0..3).filter(|&p| !tr.entries()[p].is_one()) {
            let x = wahl_a_of_triple(&tr, pos);
            let y = wahl_a_via_quotient(&tr, pos);
            t.check(x.is_ok() && x == y, || format!("{tr} at {pos}: formula {x:?}, quotient {y:?}"));
        }
    }
    t.finish(&format!("triples with max entry <= {}", c.markov_max))
}

fn check_pairing_diagonal(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    let bound = c.c2_r_max.min(30) as i64;
    let surfaces: Vec<SurfaceNumerics> = std::iter::once(SurfaceNumerics::projective_plane())
        .chain(wahl_pairs(7).map(|(n, a)| surface_w(&pair(n, a))))
        .collect();
    for s in &surfaces {
        for r in 1..=bound {
            for d in 0..=bound {
                let c2 = exceptional_c2(&int(r), &int(d), s).expect("chi(O) = 1");
                for shift in -2..=2i64 {
                    let b =
                        BundleNumerics::new(int(r), int(d), &c2 + ratio(shift, 1)).expect("positive rank");
                    let one = euler_pairing(&b, &b, s).is_one();
                    t.check(one == (shift == 0), || {
                        format!("chi(E, E) = 1 iff c2 exceptional fails at ({r}, {d}, c2{shift:+})")
                    });
                }
            }
        }
    }
    let o = BundleNumerics::structure_sheaf();
    let p2 = SurfaceNumerics::projective_plane();
    t.check(euler_pairing(&o, &BundleNumerics::line_bundle(int(1)), &p2) == ratio(3, 1), || {
        "chi(O, O(1)) != 3".into()
    });
    let tangent = canonical_bundle_class(&int(2), &int(1)).expect("valid").numerics();
    t.check(euler_pairing(&o, &tangent, &p2) == riemann_roch(&tangent, &p2), || "chi(O, F) != chi(F)".into());
    t.finish(&format!("rank, degree <= {bound} on P² and W_(n,a), n <= 7"))
}

fn check_families(c: &VerifyConfig) -> (bool, u64, String) {
    let mut t = Tally::default();
    for (n, a) in wahl_pairs(c.contraction_n_max) {
        let w = pair(n, a);
        t.check(families_consistent(&w) == Ok(true), || {
            format!("blowup and descent families disagree at ({n},{a})")
        });
        t.check(descent_matches_euclid(&w) == Ok(true), || format!("Euclid descent breaks at ({n},{a})"));
        match blowup_family(&w) {
            Ok(r) => {
                t.check(r.singularities_normalized(), || format!("blowup({n},{a}) has unnormalized data"));
                t.check(r.base_change_degree == Some(int(a)), || format!("base change degree at ({n},{a})"));
            }
            Err(e) => t.fail(format!("blowup_family({n},{a}): {e}")),
        }
    }
    for tr in enumerate(&c.phi_max) {
        let [a, b, cc] = tr.entries();
        for (x, y, z) in [(a, b, cc), (a, cc, b), (b, cc, a)] {
            match mutation_family(x, y, z) {
                Ok(r) => {
                    t.check(r.is_weighted_homogeneous(), || {
                        format!("mutation family of {tr} not homogeneous")
                    });
                    t.check(r.singularities_normalized(), || format!("mutation family of {tr} unnormalized"));
                    let cp = int(3) * x * y - z;
                    let ends: Vec<_> = r.regimes.iter().filter_map(|g| g.surface_weights.clone()).collect();
                    let sq = |v: &BigInt| v * v;
                    let want = vec![vec![sq(x), sq(y), sq(z)], vec![sq(x), sq(y), sq(&cp)]];
                    t.check(ends == want, || format!("mutation family of {tr} connects {ends:?}"));
                    let wahl_ok = [x, y].iter().zip(&r.singularities).all(|(e, p)| match &p.kind {
                        SingularityKind::Smooth => e.is_one(),
                        SingularityKind::Wahl { wahl, .. } => wahl.n() == *e,
                        _ => false,
                    });
                    t.check(wahl_ok, || format!("mutation family of {tr} has a non-Wahl vertex"));
                }
                Err(e) => t.fail(format!("mutation_family({x}, {y}, {z}): {e}")),
            }
        }
    }
    t.finish("families for n <= contraction bound and triples <= phi bound")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_configuration_passes() {
        let config = VerifyConfig::default().with_bound(int(2000)).with_n_max(25);
        for r in run_all(&config) {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn results_are_in_order() {
        let config = VerifyConfig::default().with_bound(int(100)).with_n_max(8);
        let idx: Vec<usize> = run_all(&config).iter().map(|r| r.index).collect();
        assert_eq!(idx, (1..=CHECKS.len()).collect::<Vec<_>>());
    }
}

//! Cross-checks against independent recomputations: subgroup indices from
//! exhaustive matrix enumeration over Z/n, cusp counts from orbit walks on
//! projective lines, genus from the Euler-characteristic formula with every
//! ingredient recounted from scratch, and cusp widths from explicit
//! conjugation scans.

use std::collections::HashSet;

use green_bounds::arith::{egcd, factorize, gcd};
use green_bounds::f_bound::{
    f_cusp_extension_factor, f_sup_bound_interior, f_sup_bound_x,
};
use green_bounds::green_assembly::{example_pipeline, PipelineOptions};
use green_bounds::hyperbolic::UhpPoint;
use green_bounds::modular_group::{
    admissible_epsilons, cusps, meets_cusp_disc, Family, GroupSpec, IntMoebius,
};
use std::f64::consts::PI;

fn det_is_one_mod(n: u64, a: u64, b: u64, c: u64, d: u64) -> bool {
    (a * d % n + n - b * c % n) % n == 1 % n
}

fn sl2_order_bruteforce(n: u64) -> u64 {
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if det_is_one_mod(n, a, b, c, d) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Order of the image of the family's subgroup in SL2(Z/n); reduction mod n
/// is surjective onto these images, so index = |SL2(Z/n)| / image order.
fn image_order_bruteforce(n: u64, family: Family) -> u64 {
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if !det_is_one_mod(n, a, b, c, d) {
                        continue;
                    }
                    let member = match family {
                        Family::Full => true,
                        Family::Gamma0 => c == 0,
                        Family::Gamma1 => c == 0 && a == 1 % n && d == 1 % n,
                        Family::Principal => {
                            a == 1 % n && b == 0 && c == 0 && d == 1 % n
                        }
                    };
                    if member {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Multiplicative index formula n * prod (1 + 1/p), built from this test's
/// own factorization - used past the brute-force range after being validated
/// against it below.
fn psi(n: u64) -> u64 {
    let mut idx = n;
    for (p, _) in factorize(n) {
        idx = idx / p * (p + 1);
    }
    idx
}

fn canonical_p1(n: u64, c: u64, d: u64, units: &[u64]) -> (u64, u64) {
    units
        .iter()
        .map(|&u| ((u * c) % n, (u * d) % n))
        .min()
        .unwrap()
}

fn p1_points(n: u64) -> Vec<(u64, u64)> {
    if n == 1 {
        return vec![(0, 0)];
    }
    let units: Vec<u64> = (0..n).filter(|&u| gcd(u as i64, n as i64) == 1).collect();
    let mut seen = HashSet::new();
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c as i64, d as i64), n as i64) == 1 {
                seen.insert(canonical_p1(n, c, d, &units));
            }
        }
    }
    let mut v: Vec<_> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

fn orbit_count<T, F>(points: &[T], step: F) -> u64
where
    T: Eq + std::hash::Hash + Clone,
    F: Fn(&T) -> T,
{
    let mut visited: HashSet<T> = HashSet::new();
    let mut orbits = 0;
    for start in points {
        if visited.contains(start) {
            continue;
        }
        orbits += 1;
        let mut cur = start.clone();
        while visited.insert(cur.clone()) {
            cur = step(&cur);
        }
    }
    orbits
}

fn gamma0_cusp_count_oracle(n: u64) -> u64 {
    let units: Vec<u64> = (0..n).filter(|&u| gcd(u as i64, n as i64) == 1).collect();
    let points = p1_points(n);
    orbit_count(&points, |&(c, d)| canonical_p1(n, c, (c + d) % n, &units))
}

fn primitive_pairs_mod_pm(n: u64) -> Vec<(u64, u64)> {
    let mut seen = HashSet::new();
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c as i64, d as i64), n as i64) == 1 {
                let neg = ((n - c) % n, (n - d) % n);
                seen.insert(std::cmp::min((c, d), neg));
            }
        }
    }
    if n == 1 {
        return vec![(0, 0)];
    }
    let mut v: Vec<_> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

fn gamma1_cusp_count_oracle(n: u64) -> u64 {
    let points = primitive_pairs_mod_pm(n);
    orbit_count(&points, |&(c, d)| {
        let next = (c, (c + d) % n);
        let neg = ((n - next.0) % n, (n - next.1) % n);
        std::cmp::min(next, neg)
    })
}

fn principal_cusp_count_oracle(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut mats = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (a * d + n * n - (b * c) % (n * n)) % n == 1 % n {
                        let m = [a, b, c, d];
                        let neg = [(n - a) % n, (n - b) % n, (n - c) % n, (n - d) % n];
                        mats.push(std::cmp::min(m, neg));
                    }
                }
            }
        }
    }
    mats.sort_unstable();
    mats.dedup();
    orbit_count(&mats, |m| {
        let next = [m[0], (m[0] + m[1]) % n, m[2], (m[2] + m[3]) % n];
        let neg = [
            (n - next[0]) % n,
            (n - next[1]) % n,
            (n - next[2]) % n,
            (n - next[3]) % n,
        ];
        std::cmp::min(next, neg)
    })
}

fn nu2_gamma0(n: u64) -> u64 {
    (0..n).filter(|&x| (x * x + 1) % n == 0).count() as u64
}

fn nu3_gamma0(n: u64) -> u64 {
    (0..n).filter(|&x| (x * x + x + 1) % n == 0).count() as u64
}

fn genus_from_formula(mu: u64, nu2: u64, nu3: u64, nuinf: u64) -> u32 {
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nuinf as i64;
    assert!(twelve_g % 12 == 0, "non-integral genus from mu={mu} nu2={nu2} nu3={nu3} nuinf={nuinf}");
    assert!(twelve_g >= 0);
    (twelve_g / 12) as u32
}

#[test]
fn indices_match_bruteforce_enumeration() {
    for n in 1u64..=12 {
        let order = sl2_order_bruteforce(n);
        assert_eq!(
            GroupSpec::new(Family::Principal, n as u32).unwrap().index_in_sl2z(),
            order,
            "principal level {n}"
        );
        for family in [Family::Gamma0, Family::Gamma1] {
            let image = image_order_bruteforce(n, family);
            assert_eq!(
                GroupSpec::new(family, n as u32).unwrap().index_in_sl2z(),
                order / image,
                "{family} level {n}"
            );
        }
        assert_eq!(order / image_order_bruteforce(n, Family::Gamma0), psi(n));
    }
    assert_eq!(GroupSpec::new(Family::Full, 1).unwrap().index_in_sl2z(), 1);
}

#[test]
fn cusp_counts_match_orbit_walks() {
    for n in 1u64..=30 {
        let spec = GroupSpec::new(Family::Gamma0, n as u32).unwrap();
        assert_eq!(spec.cusp_count(), gamma0_cusp_count_oracle(n), "gamma0 level {n}");
        // The explicit representative list must agree with the count.
        assert_eq!(cusps(&spec).unwrap().len() as u64, spec.cusp_count());
    }
    for n in 1u64..=12 {
        let spec = GroupSpec::new(Family::Gamma1, n as u32).unwrap();
        assert_eq!(spec.cusp_count(), gamma1_cusp_count_oracle(n), "gamma1 level {n}");
    }
    for n in 1u64..=8 {
        let spec = GroupSpec::new(Family::Principal, n as u32).unwrap();
        assert_eq!(spec.cusp_count(), principal_cusp_count_oracle(n), "principal level {n}");
    }
}

#[test]
fn genus_matches_independent_recomputation() {
    // gamma0: every ingredient recounted (index via the validated formula,
    // elliptic points via residue scans, cusps via orbit walks)
    for n in 1u64..=60 {
        let spec = GroupSpec::new(Family::Gamma0, n as u32).unwrap();
        let mu = psi(n); // PSL index; -1 lies in every gamma0 group
        let expected = genus_from_formula(mu, nu2_gamma0(n), nu3_gamma0(n), gamma0_cusp_count_oracle(n));
        assert_eq!(spec.genus(), expected, "gamma0 level {n}");
    }
    // gamma1: brute-force index; elliptic counts are the classical short table
    for n in 1u64..=12 {
        let spec = GroupSpec::new(Family::Gamma1, n as u32).unwrap();
        let sl = sl2_order_bruteforce(n) / image_order_bruteforce(n, Family::Gamma1);
        let mu = if n <= 2 { sl } else { sl / 2 };
        let (nu2, nu3) = match n {
            1 => (1, 1),
            2 => (1, 0),
            3 => (0, 1),
            _ => (0, 0),
        };
        let expected = genus_from_formula(mu, nu2, nu3, gamma1_cusp_count_oracle(n));
        assert_eq!(spec.genus(), expected, "gamma1 level {n}");
    }
    // principal: torsion-free beyond level 1
    for n in 1u64..=8 {
        let spec = GroupSpec::new(Family::Principal, n as u32).unwrap();
        let sl = sl2_order_bruteforce(n);
        let mu = if n <= 2 { sl } else { sl / 2 };
        let (nu2, nu3) = if n == 1 { (1, 1) } else { (0, 0) };
        let expected = genus_from_formula(mu, nu2, nu3, principal_cusp_count_oracle(n));
        assert_eq!(spec.genus(), expected, "principal level {n}");
    }
}

/// Width of a cusp a/c by direct conjugation: the smallest h for which
/// sigma T^h sigma^{-1} lands back in the group, with sigma any integer
/// unimodular matrix sending infinity to a/c.
fn width_by_conjugation(spec: &GroupSpec, num: i64, den: i64) -> u64 {
    let (g, x, y) = egcd(num, den);
    assert_eq!(g, 1, "cusp representative {num}/{den} not in lowest terms");
    let sigma = IntMoebius::new(num, -y, den, x).unwrap();
    let sigma_inv = sigma.inverse();
    let cap = spec.psl_index() + 1;
    for h in 1..=cap {
        let conj = sigma.mul(&IntMoebius::translation(h as i64)).mul(&sigma_inv);
        if spec.contains(&conj) {
            return h;
        }
    }
    panic!("no translation power of order <= {cap} stabilizes {num}/{den}");
}

#[test]
fn cusp_widths_match_conjugation_scan() {
    let mut cases: Vec<(Family, u32)> = vec![(Family::Full, 1)];
    cases.extend((1..=25).map(|n| (Family::Gamma0, n)));
    cases.extend([27, 32, 36, 49].map(|n| (Family::Gamma0, n)));
    for (family, n) in cases {
        let spec = GroupSpec::new(family, n).unwrap();
        let mut scanned: Vec<u64> = Vec::new();
        for cusp in cusps(&spec).unwrap() {
            let w = width_by_conjugation(&spec, cusp.numerator, cusp.denominator);
            assert_eq!(w, cusp.width, "{family} level {n}, cusp {}", cusp.label);
            scanned.push(w);
        }
        scanned.sort_unstable();
        let mut expected: Vec<u64> = spec
            .width_multiset()
            .into_iter()
            .flat_map(|(w, count)| std::iter::repeat(w).take(count as usize))
            .collect();
        expected.sort_unstable();
        assert_eq!(scanned, expected, "{family} level {n}");
        assert_eq!(scanned.iter().sum::<u64>(), spec.psl_index());
    }
}

/// No sample point lies in two different cusps' invariant neighbourhoods at
/// the admissible sizes - the disjointness the assembled bounds rely on.
#[test]
fn admissible_cusp_discs_are_pairwise_disjoint_on_samples() {
    let xs = [-0.48, -0.36, -0.24, -0.12, 0.0, 0.12, 0.24, 0.36, 0.48];
    let ys = [0.03, 0.06, 0.12, 0.3, 0.8, 2.0, 7.5, 12.0];
    for n in [11u32, 15, 37] {
        let spec = GroupSpec::new(Family::Gamma0, n).unwrap();
        let adm = admissible_epsilons(&spec, 2.0).unwrap();
        let cusp_list = cusps(&spec).unwrap();
        let mut total_hits = 0u32;
        for &x in &xs {
            for &y in &ys {
                let z = UhpPoint::new(x, y).unwrap();
                let mut hits = 0u32;
                for cusp in &cusp_list {
                    let eps = cusp.width as f64 * adm.eps_unit;
                    if meets_cusp_disc(&spec, cusp, z, eps).unwrap() {
                        hits += 1;
                    }
                }
                assert!(hits <= 1, "level {n}: z = ({x}, {y}) lies in {hits} discs");
                total_hits += hits;
            }
        }
        assert!(total_hits >= 3, "level {n}: spot check never entered a disc");
    }
}

#[test]
fn interior_bound_shape() {
    // strictly increasing in the count
    let mut prev = 0.0;
    for n in [1u64, 2, 5, 29, 58, 116, 1000] {
        let v = f_sup_bound_interior(1.7, n).unwrap();
        assert!(v > prev);
        prev = v;
    }
    // divergence at both ends of the a-range
    assert!(f_sup_bound_interior(1.0 + 1e-6, 58).unwrap() > 1e5);
    let deep = f_sup_bound_interior(10.0, 58).unwrap();
    assert!(f_sup_bound_interior(1e8, 58).unwrap() > 100.0 * deep);
    // a global interior minimum on a logarithmic sweep of (1, 100]
    let mut best = (f64::INFINITY, 0.0);
    let lo: f64 = 1.001;
    let hi: f64 = 100.0;
    let steps = 4000;
    let mut first = 0.0;
    let mut last = 0.0;
    for i in 0..=steps {
        let a = lo * (hi / lo).powf(i as f64 / steps as f64);
        let v = f_sup_bound_interior(a, 58).unwrap();
        if i == 0 {
            first = v;
        }
        if i == steps {
            last = v;
        }
        if v < best.0 {
            best = (v, a);
        }
    }
    assert!(best.0 < 0.999 * first && best.0 < 0.999 * last);
    assert!(best.1 > 4.0 && best.1 < 20.0, "minimizer at a = {}", best.1);
    // worked-example window: certified counts in [58, 68] keep the strip
    // bound inside [25.68, 30.2]
    let low = f_sup_bound_interior(1.44, 58).unwrap();
    let high = f_sup_bound_interior(1.44, 68).unwrap();
    assert!((low - 25.68).abs() <= 0.01 && low <= 25.7);
    assert!(high <= 30.2);
}

#[test]
fn extension_factor_edges() {
    assert_eq!(f_sup_bound_x(25.7, 1, 0.138702).unwrap(), 25.7);
    assert_eq!(f_cusp_extension_factor(2.0 * PI * (1.0 - 1e-12)).unwrap(), 1.0);
    let just_above = f_cusp_extension_factor(2.0 * PI * (1.0 + 1e-12)).unwrap();
    assert!((just_above - 1.0).abs() <= 1e-9, "discontinuous at 2 pi: {just_above}");
    let at_4pi = f_cusp_extension_factor(4.0 * PI).unwrap();
    assert!((at_4pi - 1.4715177646857693).abs() <= 1e-12 * at_4pi);
    for eps in [1.0, 5.0, 2.0 * PI, 10.0, 50.0, 500.0] {
        let f = f_cusp_extension_factor(eps).unwrap();
        let cap = 1f64.max((eps / (2.0 * PI)) * (eps / (2.0 * PI)));
        assert!(f >= 1.0 && f <= cap * (1.0 + 1e-12));
    }
}

/// The level-linear coefficient of the spectral constant, recovered from the
/// published envelope, stays within 1% of the published slope 3.79.
#[test]
fn global_linear_coefficient_matches_published_slope() {
    let out = example_pipeline(Family::Gamma0, 11, &PipelineOptions::default()).unwrap();
    let poly = &out.report.global;
    let s_lin = poly.c1 / 2.0 - out.report.r_delta * out.params.eps_prime_unit;
    assert!(
        (s_lin / 3.79 - 1.0).abs() <= 0.01,
        "linear spectral coefficient {s_lin} deviates from 3.79"
    );
}

//! Acceptance criteria, each checked exactly against an oracle written
//! here rather than against the library's own bookkeeping. Prints one
//! PASS/FAIL line per criterion and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parabolic_moduli::higgs::{
    cone_equations, cone_expanded_odd, higgs_basis_even, higgs_basis_odd, hitchin,
    validate_higgs_even, validate_higgs_odd, HiggsField,
};
use parabolic_moduli::parabolic::{
    act_even, act_odd, affine_graph_test, is_stable_even, is_stable_odd, moduli_point_even,
    moduli_point_odd, normalize_odd, FlagConfig, MarkedCurve, OddAutomorphism,
};
use parabolic_moduli::scalar::{GaussianRational as G, HomogeneousPoint, Matrix2, Poly, ProjectivePoint, RationalFunction};
use parabolic_moduli::strata::{basis_function, cone_trace_n4, zero_partition, ModuliPoint, QuadDiff};
use parabolic_moduli::weights::{check_chamber_even, check_chamber_odd, sample_even, sample_odd, ParabolicWeights, Parity};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn g(n: i64) -> G {
    G::from_int(n)
}

// ---------------------------------------------------------------- random

struct Rand(ChaCha8Rng);

impl Rand {
    fn new(seed: u64) -> Self {
        Rand(ChaCha8Rng::seed_from_u64(seed))
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    fn coin(&mut self, p: f64) -> bool {
        self.0.gen_bool(p)
    }

    fn rational(&mut self) -> Q {
        q(self.int(-40, 40), self.int(1, 40))
    }

    fn scalar(&mut self) -> G {
        let re = self.rational();
        let im = if self.coin(0.5) { Q::zero() } else { self.rational() };
        G::new(re, im)
    }

    fn nonzero(&mut self) -> G {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn curve(&mut self, n: usize) -> MarkedCurve {
        let mut interior: Vec<G> = Vec::new();
        while interior.len() < n - 3 {
            let z = self.scalar();
            if z.is_zero() || z == g(1) || interior.contains(&z) {
                continue;
            }
            interior.push(z);
        }
        MarkedCurve::standard_gauge(interior).unwrap()
    }

    /// Lines drawn from a small pool so that coincidences are common.
    fn even_flags(&mut self, n: usize) -> FlagConfig {
        let pool: Vec<ProjectivePoint> = (0..self.int(1, n as i64))
            .map(|_| {
                if self.coin(0.2) {
                    ProjectivePoint::infinity()
                } else {
                    ProjectivePoint::affine(self.scalar())
                }
            })
            .collect();
        FlagConfig::new((0..n).map(|_| pool[self.int(0, pool.len() as i64 - 1) as usize].clone()).collect())
    }

    /// Finite flags, often on the graph of a section, sometimes infinite.
    fn odd_flags(&mut self, curve: &MarkedCurve) -> FlagConfig {
        let (b0, b1) = (self.scalar(), self.scalar());
        let graph = self.coin(0.4);
        let lines = curve
            .points()
            .iter()
            .map(|z| {
                if self.coin(0.08) {
                    ProjectivePoint::infinity()
                } else if graph && !self.coin(0.15) {
                    ProjectivePoint::affine(match z.affine_value() {
                        Some(z) => &b0 + &(&b1 * z),
                        None => b1.clone(),
                    })
                } else {
                    ProjectivePoint::affine(self.scalar())
                }
            })
            .collect();
        FlagConfig::new(lines)
    }

    fn matrix(&mut self) -> Matrix2 {
        loop {
            let m = Matrix2::new(self.scalar(), self.scalar(), self.scalar(), self.scalar());
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    fn odd_group(&mut self) -> OddAutomorphism {
        OddAutomorphism::new(self.nonzero(), self.nonzero(), self.scalar(), self.scalar()).unwrap()
    }

    fn even_weights(&mut self, n: usize) -> ParabolicWeights {
        let k = self.int(1, n as i64 - 1) as usize;
        let (eps, delta) = even_grid(n, k)[self.int(0, 24) as usize].clone();
        sample_even(n, k, &eps, &delta).unwrap()
    }

    fn odd_weights(&mut self, n: usize) -> ParabolicWeights {
        let k = self.int(1, n as i64 - 2) as usize;
        let eps = odd_grid(n, k)[self.int(0, 4) as usize].clone();
        sample_odd(n, k, &eps).unwrap()
    }
}

// ---------------------------------------------------------------- grids

/// 5 x 5 grid of `(eps, delta)` strictly inside the even sampling region.
fn even_grid(n: usize, k: usize) -> Vec<(Q, Q)> {
    let (nn, kk) = (n as i64, k as i64);
    let cap = Q::one().min(q(nn, kk) - Q::one()).min(q(nn, 4 * kk));
    let mut out = Vec::new();
    for j in 1..=5 {
        let delta = &cap * q(j, 6);
        for i in 1..=5 {
            let eps = &delta / qi(nn - 3) * q(i, 6);
            out.push((eps, delta.clone()));
        }
    }
    out
}

fn odd_grid(n: usize, k: usize) -> Vec<Q> {
    let cap = q(1, (k * (n - 2)) as i64);
    (1..=5).map(|i| &cap * q(i, 6)).collect()
}

// ---------------------------------------------------------------- oracles

fn weights_well_formed(w: &ParabolicWeights, degree: i64) -> bool {
    let pairs = w.pairs();
    let total: Q = pairs.iter().map(|(a, b)| a + b).sum();
    pairs.iter().all(|(a, b)| a >= &Q::zero() && a < b && b < &Q::one()) && total == qi(-degree) && w.degree() == degree
}

fn lower_sum(pairs: &[(Q, Q)]) -> Q {
    pairs.iter().map(|(a, _)| a.clone()).sum()
}

fn even_chamber_oracle(pairs: &[(Q, Q)], k: i64) -> bool {
    let n = pairs.len();
    let s1 = lower_sum(pairs);
    let mut ok = s1 > qi(k - 1);
    for i in n - 3..n {
        for j in i + 1..n {
            let lhs = &pairs[i].1 + &pairs[j].1 + (&s1 - &pairs[i].0 - &pairs[j].0);
            ok &= lhs > qi(k);
        }
    }
    ok
}

fn odd_chamber_oracle(pairs: &[(Q, Q)], k: i64) -> bool {
    let s1 = lower_sum(pairs);
    let mut ok = s1 > qi(k - 1) && s1 < qi(k);
    for (a1, a2) in pairs {
        ok &= a2 + (&s1 - a1) > qi(k);
    }
    ok
}

/// Slope of a subbundle of degree `d` through exactly the flags in `mask`.
fn slope(w: &ParabolicWeights, d: i64, mask: impl Fn(usize) -> bool) -> Q {
    let mut s = qi(d);
    for (i, (a1, a2)) in w.pairs().iter().enumerate() {
        s += if mask(i) { a2 } else { a1 };
    }
    s
}

/// Every line subbundle of `O(-k) + O(-k)` of degree `-k` is a constant line;
/// enumerate every index set that such a line can pass through. Lower
/// degrees are bounded by `-k-1 + sum a_i2`.
fn even_stable_oracle(flags: &FlagConfig, w: &ParabolicWeights) -> bool {
    let n = flags.len();
    let k = w.k();
    let lines = flags.lines();
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(&first) = members.first() {
            if members.iter().any(|&i| lines[i] != lines[first]) {
                continue;
            }
            // the line lines[first] also passes through every other equal flag
            if (0..n).any(|i| mask & (1 << i) == 0 && lines[i] == lines[first]) {
                continue;
            }
        }
        if slope(w, -k, |i| mask & (1 << i) != 0) >= Q::zero() {
            return false;
        }
    }
    slope(w, -k - 1, |_| true) < Q::zero()
}

fn section_at(b0: &G, b1: &G, z: &ProjectivePoint) -> G {
    match z.affine_value() {
        Some(z) => b0 + &(b1 * z),
        None => b1.clone(),
    }
}

/// Subbundles of `O(-k-1) + O(-k)`: the distinguished `O(-k)`; graphs of
/// sections `b0 + b1 z` (degree `-k-1`), enumerated through every pair of
/// finite flags plus the bound for graphs meeting at most one flag; and
/// degree `<= -k-2`, bounded by `-k-2 + sum a_i2`.
fn odd_stable_oracle(curve: &MarkedCurve, flags: &FlagConfig, w: &ParabolicWeights) -> bool {
    let n = flags.len();
    let k = w.k();
    let lines = flags.lines();
    if slope(w, -k, |i| lines[i].is_infinite()) >= Q::zero() {
        return false;
    }
    let pts = curve.points();
    for i in 0..n {
        // a graph through at most the single flag i
        if slope(w, -k - 1, |l| l == i) >= Q::zero() {
            return false;
        }
        for j in i + 1..n {
            let (Some(ui), Some(uj)) = (lines[i].affine_value(), lines[j].affine_value()) else {
                continue;
            };
            // b0 x0 + b1 x1 = u at each point (x0, x1)
            let (ai, ci) = (pts[i].x0(), pts[i].x1());
            let (aj, cj) = (pts[j].x0(), pts[j].x1());
            let det = &(ai * cj) - &(aj * ci);
            let b0 = &(&(ui * cj) - &(uj * ci)) / &det;
            let b1 = &(&(ai * uj) - &(aj * ui)) / &det;
            let through = |l: usize| lines[l].affine_value() == Some(&section_at(&b0, &b1, &pts[l]));
            if slope(w, -k - 1, through) >= Q::zero() {
                return false;
            }
        }
    }
    slope(w, -k - 2, |_| true) < Q::zero()
}

fn unit_nilpotent(line: &ProjectivePoint) -> [[G; 2]; 2] {
    match line.affine_value() {
        Some(u) => [[-u, g(1)], [-(u * u), u.clone()]],
        None => [[g(0), g(0)], [g(1), g(0)]],
    }
}

fn mat_mul(a: &[[G; 2]; 2], b: &[[G; 2]; 2]) -> [[G; 2]; 2] {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_add(a: &[[G; 2]; 2], b: &[[G; 2]; 2]) -> [[G; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][j] + &b[i][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_scale(a: &[[G; 2]; 2], s: &G) -> [[G; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][j] * s;
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_zero() -> [[G; 2]; 2] {
    [[g(0), g(0)], [g(0), g(0)]]
}

fn is_zero_mat(a: &[[G; 2]; 2]) -> bool {
    a.iter().flatten().all(Zero::is_zero)
}

/// Residue conditions checked from first principles: in even degree the
/// residues sum to zero; in odd degree the expansion of `Phi` at infinity
/// in the frame `diag(z^{k+1}, z^k)` has at most a simple pole whose
/// residue is `c_n` times the nilpotent with kernel `u_n`.
fn higgs_residue_oracle(curve: &MarkedCurve, flags: &FlagConfig, c: &[G], parity: Parity) -> bool {
    let n = c.len();
    match parity {
        Parity::Even => {
            let total = (0..n).fold(mat_zero(), |acc, i| mat_add(&acc, &mat_scale(&unit_nilpotent(flags.line(i)), &c[i])));
            is_zero_mat(&total)
        }
        Parity::Odd => {
            let Some(un) = flags.line(n - 1).affine_value() else {
                return false;
            };
            let mut entry12 = g(0);
            let mut moment12 = g(0);
            let mut r11 = g(0);
            for i in 0..n - 1 {
                let b = mat_scale(&unit_nilpotent(flags.line(i)), &c[i]);
                let zi = curve.point(i).affine_value().unwrap();
                entry12 += &b[0][1];
                moment12 += &(&b[0][1] * zi);
                r11 -= &b[0][0];
            }
            // z * Phi_12 must vanish at infinity; residue entries follow
            let r12 = -&moment12;
            let expected = mat_scale(&unit_nilpotent(flags.line(n - 1)), &c[n - 1]);
            entry12.is_zero() && r12 == expected[0][1] && r11 == expected[0][0] && (&r11 + &(&r12 * un)).is_zero()
        }
    }
}

fn rank(rows: &[Vec<G>]) -> usize {
    let mut m: Vec<Vec<G>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].inv().unwrap();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] * &inv;
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        r += 1;
    }
    r
}

/// `Phi(z)` evaluated directly from the residue data.
fn phi_at(h: &HiggsField, z: &G) -> [[G; 2]; 2] {
    let n = h.c().len();
    let mut total = mat_zero();
    for i in 0..n - 1 {
        let zi = h.curve().point(i).affine_value().unwrap();
        let w = (z - zi).inv().unwrap();
        total = mat_add(&total, &mat_scale(&unit_nilpotent(h.flags().line(i)), &(&h.c()[i] * &w)));
    }
    if h.parity() == Parity::Odd {
        let un = h.flags().line(n - 1).affine_value().unwrap();
        total[1][0] += &(&h.c()[n - 1] * &(un * un));
    }
    total
}

fn p_basis_at(curve: &MarkedCurve, i: usize, z: &G) -> G {
    let zi = curve.point(i).affine_value().unwrap();
    let one = g(1);
    &(&(z - zi).inv().unwrap() + &(&(zi - &one) * &z.inv().unwrap())) - &(zi * &(z - &one).inv().unwrap())
}

/// Residue at a simple pole `a` of `N/D`: `N(a) / D'(a)`.
fn simple_residue(f: &RationalFunction, a: &G) -> G {
    let d = f.denominator();
    if !d.eval(a).is_zero() {
        return g(0);
    }
    &f.numerator().eval(a) / &d.derivative().eval(a)
}

fn sample_points(r: &mut Rand, avoid: &[G], count: usize) -> Vec<G> {
    let mut out = Vec::new();
    while out.len() < count {
        let z = r.scalar();
        if !avoid.contains(&z) && !out.contains(&z) {
            out.push(z);
        }
    }
    out
}

fn poles(curve: &MarkedCurve) -> Vec<G> {
    curve.points().iter().filter_map(|p| p.affine_value().cloned()).collect()
}

// ---------------------------------------------------------------- criteria

struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn chamber_nonemptiness() -> Outcome {
    let mut out = Outcome::new();
    for n in 4..=8usize {
        for k in 1..n {
            for (eps, delta) in even_grid(n, k) {
                let ok = sample_even(n, k, &eps, &delta).is_ok_and(|w| {
                    weights_well_formed(&w, -2 * k as i64)
                        && w.parity() == Parity::Even
                        && even_chamber_oracle(w.pairs(), k as i64)
                        && check_chamber_even(&w).is_ok_and(|r| r.in_chamber)
                });
                out.check(ok, || format!("even n={n} k={k} eps={eps} delta={delta}"));
            }
        }
        for k in 1..n - 1 {
            for eps in odd_grid(n, k) {
                let ok = sample_odd(n, k, &eps).is_ok_and(|w| {
                    weights_well_formed(&w, -(2 * k as i64 + 1))
                        && w.parity() == Parity::Odd
                        && odd_chamber_oracle(w.pairs(), k as i64)
                        && check_chamber_odd(&w).is_ok_and(|r| r.in_chamber)
                });
                out.check(ok, || format!("odd n={n} k={k} eps={eps}"));
            }
        }
    }
    out
}

fn even_locus() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(2);
    for n in 4..=6usize {
        for _ in 0..500 {
            let curve = r.curve(n);
            let w = r.even_weights(n);
            let flags = r.even_flags(n);
            let l = flags.lines();
            let distinct = l[n - 3] != l[n - 2] && l[n - 3] != l[n - 1] && l[n - 2] != l[n - 1];
            let brute = even_stable_oracle(&flags, &w);
            let lib = is_stable_even(&curve, &flags, &w);
            out.check(lib == Ok(distinct) && distinct == brute, || {
                format!("n={n} flags={l:?} lib={lib:?} distinct={distinct} brute={brute}")
            });
        }
    }
    out
}

fn odd_locus() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(3);
    for n in 4..=6usize {
        for _ in 0..500 {
            let curve = r.curve(n);
            let w = r.odd_weights(n);
            let flags = r.odd_flags(&curve);
            let expected = flags.lines().iter().all(|l| !l.is_infinite()) && affine_graph_test(&curve, &flags).is_none();
            let brute = odd_stable_oracle(&curve, &flags, &w);
            let lib = is_stable_odd(&curve, &flags, &w);
            out.check(lib == Ok(expected) && expected == brute, || {
                format!("n={n} flags={:?} lib={lib:?} expected={expected} brute={brute}", flags.lines())
            });
        }
    }
    out
}

fn quotient_invariance() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(4);
    for n in 4..=6usize {
        for _ in 0..200 {
            let curve = r.curve(n);
            let w = r.even_weights(n);
            let flags = loop {
                let f = r.even_flags(n);
                if even_stable_oracle(&f, &w) {
                    break f;
                }
            };
            let a = r.matrix();
            let moved = act_even(&a, &flags).unwrap();
            let before = moduli_point_even(&curve, &flags, &w);
            let after = moduli_point_even(&curve, &moved, &w);
            out.check(before.is_ok() && before == after, || format!("even n={n} {before:?} vs {after:?}"));

            let w = r.odd_weights(n);
            let flags = loop {
                let f = r.odd_flags(&curve);
                if odd_stable_oracle(&curve, &f, &w) {
                    break f;
                }
            };
            let moved = act_odd(&r.odd_group(), &curve, &flags).unwrap();
            let before = moduli_point_odd(&curve, &flags, &w);
            let after = moduli_point_odd(&curve, &moved, &w);
            out.check(before.is_ok() && before == after, || format!("odd n={n} {before:?} vs {after:?}"));
        }
    }
    out
}

fn cotangent_dimension() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(5);
    for n in 4..=6usize {
        for _ in 0..100 {
            let curve = r.curve(n);
            let ew = r.even_weights(n);
            let flags = loop {
                let f = r.even_flags(n);
                if even_stable_oracle(&f, &ew) {
                    break f;
                }
            };
            let basis = higgs_basis_even(&curve, &flags).unwrap();
            let ok = basis.len() == n - 3
                && rank(&basis) == n - 3
                && basis.iter().all(|v| {
                    validate_higgs_even(&curve, &flags, v.clone()).is_ok()
                        && higgs_residue_oracle(&curve, &flags, v, Parity::Even)
                });
            out.check(ok, || format!("even n={n} flags={:?} dim={}", flags.lines(), basis.len()));

            let ow = r.odd_weights(n);
            let flags = loop {
                let f = r.odd_flags(&curve);
                if odd_stable_oracle(&curve, &f, &ow) {
                    break f;
                }
            };
            let basis = higgs_basis_odd(&curve, &flags).unwrap();
            let ok = basis.len() == n - 3
                && rank(&basis) == n - 3
                && basis.iter().all(|v| {
                    validate_higgs_odd(&curve, &flags, v.clone()).is_ok()
                        && higgs_residue_oracle(&curve, &flags, v, Parity::Odd)
                });
            out.check(ok, || format!("odd n={n} flags={:?} dim={}", flags.lines(), basis.len()));
        }
    }
    out
}

fn combination(r: &mut Rand, basis: &[Vec<G>], len: usize) -> Vec<G> {
    let mut c = vec![g(0); len];
    for v in basis {
        let t = r.scalar();
        for (ci, vi) in c.iter_mut().zip(v) {
            *ci += &(&t * vi);
        }
    }
    c
}

/// Random records, a quarter of them on flags where every Higgs field is
/// nilpotent (all flags equal) and, for four points, on the trace points.
fn random_record(r: &mut Rand, n: usize, parity: Parity) -> HiggsField {
    let curve = r.curve(n);
    let choice = r.int(0, 3);
    match parity {
        Parity::Even => {
            let flags = match choice {
                0 => FlagConfig::new(vec![r.even_flags(1).line(0).clone(); n]),
                1 if n == 4 => {
                    let z1 = curve.point(0).clone();
                    let t = [ProjectivePoint::from_int(0), ProjectivePoint::from_int(1), z1, ProjectivePoint::infinity()]
                        [r.int(0, 3) as usize]
                        .clone();
                    FlagConfig::new(vec![t, ProjectivePoint::from_int(1), ProjectivePoint::from_int(0), ProjectivePoint::infinity()])
                }
                _ => r.even_flags(n),
            };
            let c = combination(r, &higgs_basis_even(&curve, &flags).unwrap(), n);
            validate_higgs_even(&curve, &flags, c).unwrap().into()
        }
        Parity::Odd => {
            let flags = match choice {
                0 => FlagConfig::affine(vec![g(0); n]),
                1 if n == 4 => {
                    let z1 = curve.point(0).affine_value().unwrap().clone();
                    let u = [[g(0), g(1)], [g(1), g(0)], [g(1), g(1)], [z1, g(1)]][r.int(0, 3) as usize].clone();
                    FlagConfig::affine(vec![u[0].clone(), u[1].clone(), g(0), g(0)])
                }
                _ => {
                    let raw = FlagConfig::affine((0..n).map(|_| r.scalar()).collect());
                    normalize_odd(&curve, &raw).unwrap().1
                }
            };
            let c = combination(r, &higgs_basis_odd(&curve, &flags).unwrap(), n);
            validate_higgs_odd(&curve, &flags, c).unwrap().into()
        }
    }
}

fn cone_equivalence() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(6);
    let two = g(2);
    let mut nilpotent_seen = 0;
    for n in 4..=6usize {
        for parity in [Parity::Even, Parity::Odd] {
            for _ in 0..200 {
                let h = random_record(&mut r, n, parity);
                let cone = cone_equations(&h).unwrap();
                let image = hitchin(&h);
                let cone_zero = cone.iter().all(Zero::is_zero);
                if image.q.is_zero() {
                    nilpotent_seen += 1;
                }
                // q against tr(Phi^2) and against sum coeffs_i P_i at points
                let pts = sample_points(&mut r, &poles(h.curve()), 3);
                let q_ok = pts.iter().all(|z| {
                    let phi = phi_at(&h, z);
                    let sq = mat_mul(&phi, &phi);
                    let tr = &sq[0][0] + &sq[1][1];
                    let expansion = (0..n - 3).fold(g(0), |acc, i| &acc + &(&image.coeffs[i] * &p_basis_at(h.curve(), i, z)));
                    image.q.eval(z) == Some(tr.clone()) && expansion == tr
                });
                let factor = image.coeffs.iter().zip(&cone).all(|(a, b)| a == &(&two * b));
                let sign = match &h {
                    HiggsField::Odd(odd) => {
                        let e = cone_expanded_odd(odd).unwrap();
                        cone.iter().zip(&e).all(|(a, b)| a == &-b)
                    }
                    HiggsField::Even(_) => true,
                };
                out.check(cone_zero == image.q.is_zero() && q_ok && factor && sign, || {
                    format!("{parity} n={n} c={:?} cone={cone:?} coeffs={:?}", h.c(), image.coeffs)
                });
            }
        }
    }
    // the equivalence must have been exercised on both sides
    out.check(nilpotent_seen > 0, || "no record with q = 0 was generated".into());
    out
}

fn expected_trace(z1: &G, parity: Parity) -> Vec<ModuliPoint> {
    let mut v: Vec<ModuliPoint> = match parity {
        Parity::Even => [g(0), g(1), z1.clone()]
            .into_iter()
            .map(ProjectivePoint::affine)
            .chain([ProjectivePoint::infinity()])
            .map(|p| ModuliPoint::Even(vec![p]))
            .collect(),
        Parity::Odd => [[g(0), g(1)], [g(1), g(0)], [g(1), g(1)], [z1.clone(), g(1)]]
            .into_iter()
            .map(|c| ModuliPoint::Odd(HomogeneousPoint::new(c.to_vec()).unwrap()))
            .collect(),
    };
    v.sort_by_key(|p| p.to_string());
    v
}

/// Cone value on the fiber over the chart value `t`, from the closed-form
/// fiber generator `(1, -t, t - 1, x)` with `x = t(t-1)` (even, flags
/// `(t, 1, 0, inf)`) or `x = t - z_1` (odd, flags `(t, 1, 0, 0)`).
fn closed_form_cone(z1: &G, t: &G) -> G {
    let one = g(1);
    let c2 = -t;
    let c3 = t - &one;
    let tr = |a: &G, b: &G| -&(&(a - b) * &(a - b));
    &(&(&c2 * &tr(t, &one)) / &(z1 - &one)) + &(&(&c3 * &tr(t, &g(0))) / z1)
}

fn hausel_trace() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(7);
    for _ in 0..20 {
        let curve = r.curve(4);
        let z1 = curve.point(0).affine_value().unwrap().clone();
        for parity in [Parity::Even, Parity::Odd] {
            let trace = cone_trace_n4(&curve, parity);
            out.check(trace.as_ref() == Ok(&expected_trace(&z1, parity)), || format!("{parity} z1={z1}: {trace:?}"));
        }
    }
    // direct sweep over 50 moduli points, the four special ones included
    let curve = r.curve(4);
    let z1 = curve.point(0).affine_value().unwrap().clone();
    let mut chart: Vec<Option<G>> = vec![Some(g(0)), Some(g(1)), Some(z1.clone()), None];
    while chart.len() < 50 {
        let t = r.scalar();
        if !chart.contains(&Some(t.clone())) {
            chart.push(Some(t));
        }
    }
    for parity in [Parity::Even, Parity::Odd] {
        for t in &chart {
            let flags = match (parity, t) {
                (Parity::Even, Some(t)) => FlagConfig::new(vec![
                    ProjectivePoint::affine(t.clone()),
                    ProjectivePoint::from_int(1),
                    ProjectivePoint::from_int(0),
                    ProjectivePoint::infinity(),
                ]),
                (Parity::Even, None) => FlagConfig::new(vec![
                    ProjectivePoint::infinity(),
                    ProjectivePoint::from_int(1),
                    ProjectivePoint::from_int(0),
                    ProjectivePoint::infinity(),
                ]),
                (Parity::Odd, Some(t)) => FlagConfig::affine(vec![t.clone(), g(1), g(0), g(0)]),
                (Parity::Odd, None) => FlagConfig::affine(vec![g(1), g(0), g(0), g(0)]),
            };
            let basis = match parity {
                Parity::Even => higgs_basis_even(&curve, &flags).unwrap(),
                Parity::Odd => higgs_basis_odd(&curve, &flags).unwrap(),
            };
            let h: HiggsField = match parity {
                Parity::Even => validate_higgs_even(&curve, &flags, basis[0].clone()).unwrap().into(),
                Parity::Odd => validate_higgs_odd(&curve, &flags, basis[0].clone()).unwrap().into(),
            };
            let lib_zero = basis.len() == 1 && cone_equations(&h).unwrap()[0].is_zero();
            let special = match t {
                Some(t) => t.is_zero() || t == &g(1) || t == &z1,
                None => true,
            };
            let oracle_zero = match t {
                Some(t) => closed_form_cone(&z1, t).is_zero(),
                None => true,
            };
            out.check(lib_zero == special && oracle_zero == special, || {
                format!("{parity} sweep t={t:?}: library {lib_zero}, closed form {oracle_zero}")
            });
        }
    }
    out
}

fn basis_duality() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(8);
    for n in 4..=8usize {
        for _ in 0..10 {
            let curve = r.curve(n);
            let pts = sample_points(&mut r, &poles(&curve), 2);
            for i in 0..n - 3 {
                let p = basis_function(i + 1, &curve).unwrap();
                let formula_ok = pts.iter().all(|z| p.eval(z) == Some(p_basis_at(&curve, i, z)));
                for j in 0..n - 3 {
                    let zj = curve.point(j).affine_value().unwrap();
                    let expected = if i == j { g(1) } else { g(0) };
                    let res = p.residue_at(curve.point(j));
                    out.check(formula_ok && res == expected && simple_residue(&p, zj) == expected, || {
                        format!("n={n} i={} j={} residue {res}", i + 1, j + 1)
                    });
                }
            }
        }
    }
    for _ in 0..100 {
        let n = r.int(4, 8) as usize;
        let curve = r.curve(n);
        let coeffs: Vec<G> = (0..n - 3).map(|_| r.scalar()).collect();
        let qd = QuadDiff::new(coeffs.clone(), &curve).unwrap();
        let back: Vec<G> = (0..n - 3)
            .map(|j| simple_residue(qd.function(), curve.point(j).affine_value().unwrap()))
            .collect();
        let lib_back: Vec<G> = (0..n - 3).map(|j| qd.function().residue_at(curve.point(j))).collect();
        let again = QuadDiff::from_function(qd.function(), &curve);
        out.check(back == coeffs && lib_back == coeffs && again.as_ref() == Ok(&qd), || {
            format!("n={n} coeffs={coeffs:?} back={back:?}")
        });
    }
    out
}

/// Zero pattern of `q * z (z-1) prod (z - z_i)` for `n = 6` from three
/// exact samples of this quadratic: `{2}` for a double zero (finite or at
/// infinity), `{1, 1}` otherwise.
fn quadratic_partition(qd: &QuadDiff, curve: &MarkedCurve, r: &mut Rand) -> Vec<u32> {
    let ps = poles(curve);
    let fixed = |z: &G| ps.iter().fold(g(1), |acc, p| &acc * &(z - p));
    let xs = sample_points(r, &ps, 3);
    let ys: Vec<G> = xs.iter().map(|x| &qd.function().eval(x).unwrap() * &fixed(x)).collect();
    // Newton divided differences give the monomial coefficients
    let d01 = &(&ys[1] - &ys[0]) / &(&xs[1] - &xs[0]);
    let d12 = &(&ys[2] - &ys[1]) / &(&xs[2] - &xs[1]);
    let a = &(&d12 - &d01) / &(&xs[2] - &xs[0]);
    let b = &d01 - &(&a * &(&xs[0] + &xs[1]));
    let c = &ys[0] - &(&(&a * &xs[0]) * &xs[0]) - &(&b * &xs[0]);
    let disc = &(&b * &b) - &(&(&g(4) * &a) * &c);
    let double = if a.is_zero() { b.is_zero() } else { disc.is_zero() };
    if double {
        vec![2]
    } else {
        vec![1, 1]
    }
}

fn stratification() -> Outcome {
    let mut out = Outcome::new();
    let mut r = Rand::new(9);
    for _ in 0..100 {
        let curve = r.curve(6);
        let coeffs: Vec<G> = (0..3).map(|_| r.nonzero()).collect();
        let qd = QuadDiff::new(coeffs.clone(), &curve).unwrap();
        let s = zero_partition(&qd, &curve);
        let oracle = quadratic_partition(&qd, &curve, &mut r);
        out.check(
            s.as_ref().is_ok_and(|s| s.partition.iter().sum::<u32>() == 2 && s.in_u && s.partition == oracle),
            || format!("coeffs={coeffs:?}: {s:?} oracle {oracle:?}"),
        );
    }
    // hand-built: z = (2, 3, -1, 1, 0, inf), cleared numerator -6 (3z - 7)^2
    let curve = MarkedCurve::standard_gauge(vec![g(2), g(3), g(-1)]).unwrap();
    let qd = QuadDiff::new(vec![g(1), g(-1), g(-25)], &curve).unwrap();
    let s = zero_partition(&qd, &curve);
    let cleared = {
        let ps = poles(&curve);
        let fixed = ps.iter().fold(Poly::one(), |acc, p| &acc * &Poly::linear_root(p));
        &qd.function().numerator().clone() * &fixed.div_exact(qd.function().denominator())
    };
    let square = Poly::from_ints(&[-7, 3]).pow(2).scale(&g(-6));
    out.check(
        cleared == square && s.as_ref().is_ok_and(|s| s.partition == vec![2] && s.in_u && !s.in_uprime),
        || format!("zero-discriminant example: {s:?}"),
    );
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("chamber nonemptiness", chamber_nonemptiness),
        ("even stable locus", even_locus),
        ("odd stable locus", odd_locus),
        ("quotient invariance", quotient_invariance),
        ("cotangent fiber dimension", cotangent_dimension),
        ("nilpotent-cone oracle equivalence", cone_equivalence),
        ("four-point cone trace", hausel_trace),
        ("basis duality and reconstruction", basis_duality),
        ("zero-multiplicity stratification", stratification),
    ];
    let mut all_ok = true;
    for (index, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ok = outcome.failures.is_empty();
        all_ok &= ok;
        println!(
            "{} {}. {name}: {} checks, {} failures ({:.1?})",
            if ok { "PASS" } else { "FAIL" },
            index + 1,
            outcome.checked,
            outcome.failures.len(),
            start.elapsed()
        );
        for f in outcome.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

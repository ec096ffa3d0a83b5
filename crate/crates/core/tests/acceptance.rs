//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The process fails
//! when a criterion fails, except for those listed in `KNOWN_UNATTAINABLE`, which are
//! still evaluated at full tolerance and reported as FAIL.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vilenkin::counterexamples::{build_adversarial_spectrum, divergence_report, Route, SearchParams, Variant};
use vilenkin::dirichlet::psi_grid;
use vilenkin::hardy::{atom_tail_weak_type_probe, lp_norm, martingale_from_atoms, validate_atom, weak_lp_quasinorm, Atom};
use vilenkin::summability::convergence::strictly_decreasing;
use vilenkin::summability::predicates::abel_weight_identity;
use vilenkin::summability::{
    convergence_table, convolve, fejer_mean, kernel_domination_sweep, make_weights, norlund_kernel, norlund_mean,
    norlund_mean_abel, norlund_mean_spectral, regularity_probe, SchemeKind, WeightScheme,
};
use vilenkin::{
    dirichlet, forward_transform, Cyclotomic, DirichletMode, GridFunction, Point, RadixSequence, Spectrum,
    VilenkinGroup,
};

type Check = std::result::Result<String, String>;

/// Criteria that cannot hold as stated; see the README section on the acceptance suite.
const KNOWN_UNATTAINABLE: &[&str] = &["AC10"];

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn require(ok: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// `ψ_n(x)` straight from the digit expansions.
fn character(g: &VilenkinGroup, n: u64, x: &Point) -> Complex64 {
    let mut n = n;
    let mut phase = 0.0;
    for k in 0..g.level() {
        let m = g.radix(k) as u64;
        phase += ((n % m) * x.digit(k) as u64) as f64 / m as f64;
        n /= m;
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * phase)
}

fn random_complex(g: &VilenkinGroup, rng: &mut ChaCha8Rng) -> GridFunction<Complex64> {
    let values = (0..g.grid_len().unwrap()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    GridFunction::new(g, values).unwrap()
}

fn random_rational(g: &VilenkinGroup, rng: &mut ChaCha8Rng) -> GridFunction<Cyclotomic> {
    let values = (0..g.grid_len().unwrap()).map(|_| Cyclotomic::rational(ratio(rng.random_range(-8..=8), 8))).collect();
    GridFunction::new(g, values).unwrap()
}

fn max_diff(a: &GridFunction<Complex64>, b: &GridFunction<Complex64>) -> f64 {
    a.max_abs_diff(b)
}

fn ac1() -> Check {
    let start = Instant::now();
    let g = VilenkinGroup::new(&[2, 3, 4]).map_err(e)?;
    let len = g.grid_len().map_err(e)?;
    let inv = ratio(1, len as i64);
    let psis: Vec<_> = (0..len as u64).map(|n| psi_grid::<Cyclotomic>(&g, n).unwrap()).collect();
    for (j, a) in psis.iter().enumerate() {
        for (k, b) in psis.iter().enumerate() {
            let mut acc = Cyclotomic::zero();
            for (u, v) in a.values().iter().zip(b.values()) {
                acc += u.clone() * v.conj();
            }
            let expect = if j == k { Cyclotomic::one() } else { Cyclotomic::zero() };
            require(acc.scale(&inv) == expect, format!("<ψ_{j}, ψ_{k}> is not exact δ"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_rational(&g, &mut rng);
    let s = forward_transform(&f);
    // single |f̂(n)|² may be irrational reals of the cyclotomic field; the sum is rational
    let mut spectral = Cyclotomic::zero();
    for n in 0..len as u64 {
        let c = s.coefficient(n);
        spectral += c.clone() * c.conj();
    }
    let spatial: BigRational = f.values().iter().map(|v| v.norm_sqr_rational().unwrap()).sum::<BigRational>() * inv;
    require(spectral.as_rational() == Some(spatial), "exact Parseval fails")?;

    // float mode: Gram matrix and Parseval against the direct character oracle
    let pts: Vec<Point> = (0..len).map(|i| Point::at(&g, i)).collect();
    let mut gram: f64 = 0.0;
    for j in 0..len as u64 {
        for k in 0..len as u64 {
            let ip: Complex64 = pts.iter().map(|x| character(&g, j, x) * character(&g, k, x).conj()).sum::<Complex64>() / len as f64;
            let delta = if j == k { 1.0 } else { 0.0 };
            gram = gram.max((ip - delta).norm());
        }
    }
    let f = random_complex(&g, &mut rng);
    let s = forward_transform(&f);
    let mut coeff_err: f64 = 0.0;
    for n in 0..len as u64 {
        let direct: Complex64 =
            pts.iter().zip(f.values()).map(|(x, v)| v * character(&g, n, x).conj()).sum::<Complex64>() / len as f64;
        coeff_err = coeff_err.max((direct - s.coefficient(n)).norm());
    }
    let parseval = ((0..len as u64).map(|n| s.coefficient(n).norm_sqr()).sum::<f64>()
        - f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / len as f64)
        .abs();
    let elapsed = start.elapsed().as_secs_f64();
    require(gram <= 1e-12 && coeff_err <= 1e-12 && parseval <= 1e-12, format!("float gram {gram:e}, coefficients {coeff_err:e}, parseval {parseval:e}"))?;
    require(elapsed < 1.0, format!("took {elapsed:.2} s"))?;
    Ok(format!("exact gram and Parseval; float gram {gram:.1e}, coefficients {coeff_err:.1e}, Parseval {parseval:.1e}; {elapsed:.3} s"))
}

fn ac2() -> Check {
    let g = VilenkinGroup::new(&[2, 3, 2, 3]).map_err(e)?;
    for k in 0..=g.level() {
        let m = g.scale(k);
        let closed = dirichlet::<Cyclotomic>(&g, m, DirichletMode::Closed).map_err(e)?;
        let brute = dirichlet::<Cyclotomic>(&g, m, DirichletMode::Brute).map_err(e)?;
        require(closed == brute, format!("D_(M_{k}) closed and brute differ"))?;
        for i in 0..g.grid_len().map_err(e)? {
            let x = Point::at(&g, i);
            let inside = (0..k).all(|j| x.digit(j) == 0);
            let expect = if inside { Cyclotomic::rational(ratio(m as i64, 1)) } else { Cyclotomic::zero() };
            require(*closed.value(i) == expect, format!("D_(M_{k}) is not M_{k} on I_{k}"))?;
        }
    }
    Ok(format!("closed = brute exactly at M_0..M_{}", g.level()))
}

/// `q_k` computed here, not by the library.
fn oracle_weights(kind: &SchemeKind, len: usize) -> Vec<f64> {
    match kind {
        SchemeKind::Fejer => vec![1.0; len],
        SchemeKind::Cesaro { alpha } => {
            let a: f64 = vilenkin::rational::to_f64(alpha);
            let mut out = vec![1.0];
            for k in 1..len {
                let prev = out[k - 1];
                out.push(prev * (a - 1.0 + k as f64) / k as f64);
            }
            out
        }
        SchemeKind::Custom { values, .. } => values.iter().take(len).map(vilenkin::rational::to_f64).collect(),
        _ => unreachable!("not used"),
    }
}

fn ac3() -> Check {
    let g = VilenkinGroup::walsh(6).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut custom: Vec<i64> = (0..64).map(|_| rng.random_range(1..=100)).collect();
    custom.sort_unstable_by(|a, b| b.cmp(a));
    let kinds = vec![
        SchemeKind::Fejer,
        "cesaro:alpha=0.3".parse().map_err(e)?,
        "cesaro:alpha=0.7".parse().map_err(e)?,
        SchemeKind::custom(custom.iter().map(|&v| ratio(v, 1)).collect()),
    ];
    let mut worst: f64 = 0.0;
    for kind in &kinds {
        let scheme = make_weights(kind.clone(), 64).map_err(e)?;
        let q = oracle_weights(kind, 64);
        let big_q = |m: usize| q[..m].iter().sum::<f64>();
        for j in 0..64u64 {
            let delta = Spectrum::<Complex64>::delta(&g, j).map_err(e)?;
            let psi = psi_grid::<Complex64>(&g, j).map_err(e)?;
            for n in j + 1..=64 {
                let t = norlund_mean(&delta, &scheme, n).map_err(e)?;
                let factor = big_q((n - j) as usize) / big_q(n as usize);
                worst = worst.max(max_diff(&t, &psi.scale(&Complex64::new(factor, 0.0))));
            }
        }
    }
    require(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("4 schemes, j < n ≤ 64, max deviation {worst:.1e}"))
}

fn random_kind(rng: &mut ChaCha8Rng, len: usize) -> SchemeKind {
    match rng.random_range(0..5) {
        0 => SchemeKind::Fejer,
        1 => SchemeKind::Cesaro { alpha: ratio(rng.random_range(1..=10), 10) },
        2 => SchemeKind::Power { beta: ratio(rng.random_range(0..=20), 10) },
        3 => SchemeKind::NorlundLog,
        _ => SchemeKind::custom((0..len).map(|_| ratio(rng.random_range(1..=50), 7)).collect()),
    }
}

fn ac4() -> Check {
    let g = VilenkinGroup::new(&[2, 3, 4, 2, 3]).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let kind = random_kind(&mut rng, 128);
        let scheme = make_weights(kind.clone(), 128).map_err(e)?;
        let n = rng.random_range(2..=128);
        let s = forward_transform(&random_complex(&g, &mut rng));
        let a = norlund_mean(&s, &scheme, n).map_err(e)?;
        let b = norlund_mean_abel(&s, &scheme, n).map_err(e)?;
        worst = worst.max(max_diff(&a, &b));
    }
    require(worst <= 1e-12, format!("Abel form deviates by {worst:e}"))?;
    let exact = [SchemeKind::Fejer, SchemeKind::Cesaro { alpha: ratio(1, 3) }, SchemeKind::custom((1..=64).map(|v| ratio(v * v % 17 + 1, 3)).collect())];
    for kind in exact {
        let scheme = make_weights(kind.clone(), 64).map_err(e)?;
        for n in 1..=64 {
            require(abel_weight_identity(&scheme, n) == Some(true), format!("weight identity fails exactly for {kind} at n = {n}"))?;
        }
    }
    Ok(format!("20 triples, max deviation {worst:.1e}; weight identity exact for n ≤ 64"))
}

/// Pointwise `max_{j ≤ n} |σ_j f|` for `n = 1..=n_max`.
fn fejer_envelopes(s: &Spectrum<Complex64>, n_max: u64) -> Vec<Vec<f64>> {
    let mut env = vec![0.0f64; s.group().grid_len().unwrap()];
    let mut out = Vec::new();
    for j in 1..=n_max {
        let sigma = fejer_mean(s, j).unwrap();
        for (m, v) in env.iter_mut().zip(sigma.values()) {
            *m = (*m).max(v.norm());
        }
        out.push(env.clone());
    }
    out
}

/// Largest `|t_n f| − max_{j≤n} |σ_j f|` over points and `n ≤ n_max`.
fn domination_excess(s: &Spectrum<Complex64>, scheme: &WeightScheme, envelopes: &[Vec<f64>]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for (i, env) in envelopes.iter().enumerate() {
        let t = norlund_mean_spectral(s, scheme, i as u64 + 1).unwrap();
        for (v, m) in t.values().iter().zip(env) {
            worst = worst.max(v.norm() - m);
        }
    }
    worst
}

fn ac5() -> Check {
    let g = VilenkinGroup::new(&[2, 3, 2, 3, 2]).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random: Vec<i64> = (0..64).map(|_| rng.random_range(1..=40)).collect();
    random.sort_unstable();
    let monotone = [
        SchemeKind::Fejer,
        SchemeKind::custom((1..=64).map(|k| ratio(k, 1)).collect()),
        SchemeKind::custom(random.iter().map(|&v| ratio(v, 1)).collect()),
    ];
    let schemes: Vec<WeightScheme> = monotone.iter().map(|k| make_weights(k.clone(), 64).unwrap()).collect();
    for s in &schemes {
        require(s.monotonicity().nondecreasing(), format!("{} is not nondecreasing", s.kind()))?;
    }
    let oscillating = make_weights(SchemeKind::custom((0..64).map(|k| ratio(if k % 2 == 0 { 1 } else { 0 }, 1)).collect()), 64).map_err(e)?;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for trial in 0..10 {
        let s = forward_transform(&random_complex(&g, &mut rng));
        let env = fejer_envelopes(&s, 64);
        for scheme in &schemes {
            worst = worst.max(domination_excess(&s, scheme, &env));
        }
        let excess = domination_excess(&s, &oscillating, &env);
        if excess > 1e-9 && witness.is_none() {
            witness = Some((trial, excess));
        }
    }
    require(worst <= 1e-12, format!("domination exceeded by {worst:e}"))?;
    let (trial, excess) = witness.ok_or("no witness against the oscillating scheme")?;
    Ok(format!("3 nondecreasing schemes × 10 functions, max excess {worst:.1e}; oscillating weights exceed by {excess:.3} on function {trial}"))
}

fn ac6() -> Check {
    let start = Instant::now();
    let fejer = make_weights(SchemeKind::Fejer, 10_000).map_err(e)?;
    let report = regularity_probe(&fejer, 10_000).map_err(e)?;
    let exact = report.exact.ok_or("no exact Fejér ratios")?;
    for ((n, _), text) in report.ratios.iter().zip(&exact) {
        let r = vilenkin::rational::parse_rational(text).map_err(e)?;
        require(r == ratio(1, *n as i64), format!("Fejér ratio at {n} is {text}"))?;
    }
    let fejer_time = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let log = make_weights(SchemeKind::NorlundLog, 10_000).map_err(e)?;
    let report = regularity_probe(&log, 10_000).map_err(e)?;
    let log_time = start.elapsed().as_secs_f64();
    let values: Vec<f64> = report.ratios.iter().map(|r| r.1).collect();
    require(strictly_decreasing(&values), "norlund-log ratio not strictly decreasing")?;
    let &(n_last, last) = report.ratios.last().ok_or("empty probe")?;
    // oracle: q_{n−1}/Q_n = (1/(n−1)) / Σ_{j<n} 1/j
    let harmonic: f64 = (1..n_last).map(|j| 1.0 / j as f64).sum();
    let oracle = 1.0 / (n_last - 1) as f64 / harmonic;
    require(((last - oracle) / oracle).abs() < 1e-12, format!("ratio {last:e} vs oracle {oracle:e}"))?;
    require(last < 1e-3 && n_last == 10_000, format!("ratio at {n_last} is {last:e}"))?;
    require(fejer_time < 1.0 && log_time < 1.0, format!("took {fejer_time:.2} s and {log_time:.2} s"))?;
    Ok(format!("Fejér exactly 1/n up to 10^4; norlund-log decreasing, {last:.3e} at 10^4; {fejer_time:.2} s + {log_time:.2} s"))
}

/// Exact Fejér mean `σ_n f` of a Walsh block spectrum, brute force on the level-`level` grid.
fn walsh_fejer_oracle(level: usize, blocks: &[(u64, u64, BigRational)], n: u64) -> Vec<BigRational> {
    let len = 1usize << level;
    let coeff = |j: u64| blocks.iter().find(|b| b.0 <= j && j < b.1).map(|b| b.2.clone()).unwrap_or_else(BigRational::zero);
    let mut partial = vec![BigRational::zero(); len];
    let mut acc = vec![BigRational::zero(); len];
    for k in 1..=n {
        let j = k - 1;
        let c = coeff(j);
        if !c.is_zero() {
            for (x, v) in partial.iter_mut().enumerate() {
                if (j & x as u64).count_ones() % 2 == 0 {
                    *v += &c;
                } else {
                    *v -= &c;
                }
            }
        }
        for (a, v) in acc.iter_mut().zip(&partial) {
            *a += v;
        }
    }
    let inv = ratio(1, n as i64);
    acc.into_iter().map(|a| a * &inv).collect()
}

fn ac7() -> Check {
    let start = Instant::now();
    let params = SearchParams::new(Variant::Thm2, ratio(1, 4), None, RadixSequence::walsh(), 2);
    let report = divergence_report(&params, &SchemeKind::Fejer).map_err(e)?;
    let alphas = &report.sequence.entries;
    require(alphas.len() == 3 && alphas.iter().all(|&a| a <= 64), format!("sequence {alphas:?}"))?;
    let spectrum = build_adversarial_spectrum(&report.sequence, None).map_err(e)?;
    for c in &report.certificates {
        // threshold M^2 / (8 α_k), rebuilt here
        let m = BigUint::one() << c.alpha_k as usize;
        let expected = BigRational::new(BigInt::from(&m * &m), BigInt::from(8 * c.alpha_k));
        require(c.threshold.exact() == Some(expected.clone()), format!("k = {}: threshold {}", c.k, c.threshold.expression()))?;
        require(c.exact && c.ceiling_holds, format!("k = {}: certificate not exact", c.k))?;
        require(c.exceedance_measure != "0", format!("k = {}: empty exceedance set", c.k))?;
        if c.m <= 1 << 14 {
            let cross = c.cross_check.as_ref().ok_or(format!("k = {}: no dense cross-check", c.k))?;
            require(cross.exact_match == Some(true), format!("k = {}: dense grid disagrees", c.k))?;
            // independent exact oracle on the grid of level α_k + 1
            let level = c.alpha_k as usize + 1;
            let blocks: Vec<(u64, u64, BigRational)> = spectrum
                .blocks
                .iter()
                .filter(|b| b.end <= BigUint::one() << level)
                .map(|b| ((&b.start).try_into().unwrap(), (&b.end).try_into().unwrap(), b.value.exact.clone().unwrap()))
                .collect();
            let values = walsh_fejer_oracle(level, &blocks, c.n);
            let hits = values.iter().filter(|v| v.abs() >= expected).count();
            let measure = ratio(hits as i64, values.len() as i64);
            let certified = vilenkin::rational::parse_rational(&c.exceedance_measure).map_err(e)?;
            require(measure >= certified, format!("k = {}: oracle measure {measure} below certified {certified}", c.k))?;
        }
    }
    let q: Vec<f64> = report.certificates.iter().map(|c| c.weak_quasinorm).collect();
    let growth: Vec<f64> = q.windows(2).map(|w| w[1] / w[0]).collect();
    require(growth.iter().all(|&r| r >= 10.0), format!("weak-L_1/4 growth {growth:?}"))?;
    let elapsed = start.elapsed().as_secs_f64();
    require(elapsed < 30.0, format!("took {elapsed:.1} s"))?;
    let raw: Vec<String> = report.certificates.windows(2).map(|w| format!("{:.2}", w[1].weak_raw / w[0].weak_raw)).collect();
    Ok(format!(
        "α = {alphas:?}, exact thresholds M^2/(8α_k), oracle agrees for M ≤ 2^14, quasinorm growth {} (raw T^p growth {}), {elapsed:.1} s",
        growth.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>().join(", "),
        raw.join(", ")
    ))
}

fn ac8() -> Check {
    let params = SearchParams::new(Variant::Thm3, ratio(1, 4), None, RadixSequence::walsh(), 2);
    let kind = SchemeKind::Cesaro { alpha: ratio(1, 2) };
    let report = divergence_report(&params, &kind).map_err(e)?;
    let mut checked = Vec::new();
    for c in &report.certificates {
        require(c.route == Route::Bound && c.exact, format!("k = {}: route {:?}, exact {}", c.k, c.route, c.exact))?;
        require(c.rho.exact == Some(ratio(1, c.n as i64)), format!("k = {}: ρ is not 1/(M+1)", c.k))?;
        // oracle: n q_0 ≥ Q_n with exact (C, 1/2) weights built here
        if c.n <= 1025 {
            let mut q = BigRational::one();
            let mut total = BigRational::zero();
            for j in 0..c.n {
                if j > 0 {
                    q *= ratio(2 * j as i64 - 1, 2 * j as i64);
                }
                total += &q;
            }
            require(ratio(c.n as i64, 1) >= total, format!("k = {}: q_0/Q_n < 1/n", c.k))?;
            checked.push(c.n);
        }
    }
    Ok(format!("α = {:?}, bound route with ρ = 1/(M+1) exact; oracle n q_0 ≥ Q_n at n = {checked:?}", report.sequence.entries))
}

fn ac9() -> Check {
    let g = VilenkinGroup::new(&[2, 3, 2, 3]).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = vec![
        SchemeKind::Fejer,
        SchemeKind::Cesaro { alpha: ratio(3, 10) },
        SchemeKind::Cesaro { alpha: ratio(1, 2) },
        SchemeKind::Power { beta: ratio(1, 2) },
        SchemeKind::NorlundLog,
        SchemeKind::RieszLog,
        SchemeKind::custom((0..32).map(|_| ratio(rng.random_range(1..=20), 3)).collect()),
    ];
    let f = random_complex(&g, &mut rng);
    let s = forward_transform(&f);
    let (mut integral, mut conv): (f64, f64) = (0.0, 0.0);
    for kind in &kinds {
        let scheme = make_weights(kind.clone(), 32).map_err(e)?;
        for n in kind.first_index()..=32 {
            let k = norlund_kernel::<Complex64>(&g, &scheme, n).map_err(e)?;
            integral = integral.max((k.values.integral() - Complex64::new(1.0, 0.0)).norm());
            let c = convolve(&f, &k.values).map_err(e)?;
            conv = conv.max(max_diff(&c, &norlund_mean(&s, &scheme, n).map_err(e)?));
        }
    }
    require(integral <= 1e-12 && conv <= 1e-12, format!("integral {integral:e}, convolution {conv:e}"))?;
    let big = VilenkinGroup::walsh(11).map_err(e)?;
    let ns: Vec<u64> = (16..=2048).collect();
    let mut spreads = Vec::new();
    for a in [ratio(3, 10), ratio(1, 2), ratio(4, 5)] {
        let af = vilenkin::rational::to_f64(&a);
        let scheme = make_weights(SchemeKind::Cesaro { alpha: a }, 2048).map_err(e)?;
        let ratios = kernel_domination_sweep(&big, &scheme, af, &ns).map_err(e)?;
        let half = ratios.len() / 2;
        let lower = ratios[..half].iter().map(|r| r.ratio).fold(0.0, f64::max);
        let upper = ratios[half..].iter().map(|r| r.ratio).fold(0.0, f64::max);
        let growth = upper / lower;
        require(growth <= 1.25, format!("α = {af}: upper/lower = {growth:.3}"))?;
        spreads.push(format!("α={af}: {lower:.3}→{upper:.3}"));
    }
    Ok(format!("∫F_n = 1 within {integral:.1e}, convolution within {conv:.1e}; domination {}", spreads.join(", ")))
}

fn ac10() -> Check {
    let g = VilenkinGroup::walsh(8).map_err(e)?;
    let f = GridFunction::<Complex64>::cylinder_indicator(&g, 1, &[0]).map_err(e)?;
    let ns: Vec<u64> = (2..=8).map(|k| g.scale(k)).collect();
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (name, kind, bound) in [
        ("fejer", SchemeKind::Fejer, Some(1e-3)),
        ("cesaro(0.5)", SchemeKind::Cesaro { alpha: ratio(1, 2) }, Some(1e-3)),
        ("riesz-log", SchemeKind::RieszLog, None),
    ] {
        let scheme = make_weights(kind, 256).map_err(e)?;
        let rows = convergence_table(&f, &scheme, &ns).map_err(e)?;
        let l1: Vec<f64> = rows.iter().map(|r| r.l1_error).collect();
        let last = *l1.last().unwrap();
        let decreasing = strictly_decreasing(&l1);
        if !decreasing {
            failures.push(format!("{name} not decreasing"));
        }
        if let Some(b) = bound {
            if last > b {
                failures.push(format!("{name} error {last:.3e} > {b:e} at M_8"));
            }
        }
        lines.push(format!("{name} {last:.3e}"));
    }
    // For the indicator of I_1, σ_n f − f = −r_0/(2n), so the Fejér error is exactly 1/(2n).
    let fejer = make_weights(SchemeKind::Fejer, 256).map_err(e)?;
    let rows = convergence_table(&f, &fejer, &ns).map_err(e)?;
    let closed = rows.iter().all(|r| (r.l1_error - 0.5 / r.n as f64).abs() < 1e-15);
    let summary = format!("L1 error at M_8: {}; Fejér matches 1/(2n): {closed}", lines.join(", "));
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn random_atom(g: &VilenkinGroup, p: &BigRational, rng: &mut ChaCha8Rng) -> Atom<Cyclotomic> {
    let level = rng.random_range(0..g.level());
    let base: Vec<u32> = (0..level).map(|k| rng.random_range(0..g.radix(k))).collect();
    let m = g.scale(level) as usize;
    let residue = vilenkin::grid::cylinder_residue(g, level, &base).unwrap();
    let len = g.grid_len().unwrap();
    let inside: Vec<usize> = (0..len).filter(|x| x % m == residue).collect();
    let mut raw: Vec<BigRational> = inside.iter().map(|_| ratio(rng.random_range(-8..=8), 1)).collect();
    let mean = raw.iter().sum::<BigRational>() / BigRational::from_integer(BigInt::from(raw.len()));
    for v in raw.iter_mut() {
        *v -= &mean;
    }
    let sup = raw.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero);
    // bound M_k^{1/p}, with 1/p an integer here
    let inv: u32 = num_traits::ToPrimitive::to_u32(&p.recip().to_integer()).unwrap();
    let bound = BigRational::from_integer(BigInt::from(m).pow(inv));
    let shrink = if sup.is_zero() { BigRational::one() } else { bound / sup * ratio(rng.random_range(1..=8), 8) };
    let mut values = vec![Cyclotomic::zero(); len];
    for (x, v) in inside.iter().zip(raw) {
        values[*x] = Cyclotomic::rational(v * &shrink);
    }
    Atom::new(level, base, GridFunction::new(g, values).unwrap()).unwrap()
}

fn ac11() -> Check {
    let g = VilenkinGroup::new(&[2, 3, 2, 2]).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ps = [ratio(1, 4), ratio(1, 2), ratio(1, 1)];
    for i in 0..200 {
        let p = &ps[i % 3];
        let a = random_atom(&g, p, &mut rng);
        let v = validate_atom(&a, p).map_err(e)?;
        require(v.valid() && v.exact, format!("atom {i} rejected: {:?}", v.failures))?;
    }
    // teeth: a nonzero mean is caught
    let mut bad = random_atom(&g, &ps[1], &mut rng);
    let x = (0..g.grid_len().unwrap()).find(|&x| bad.in_support(x)).unwrap();
    let mut values = bad.values.values().to_vec();
    values[x] += Cyclotomic::one();
    bad.values = GridFunction::new(&g, values).unwrap();
    require(!validate_atom(&bad, &ps[1]).map_err(e)?.mean_zero, "perturbed atom accepted")?;

    for i in 0..5 {
        let p = &ps[i % 3];
        let atoms: Vec<_> = (0..3).map(|_| random_atom(&g, p, &mut rng)).collect();
        let coeffs: Vec<BigRational> = (0..3).map(|_| ratio(rng.random_range(-5..=5), 4)).collect();
        let ms = martingale_from_atoms(&g, &coeffs, atoms, p).map_err(e)?;
        require(ms.is_martingale().map_err(e)?, format!("synthesized spec {i} is not a martingale"))?;
    }

    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..50 {
        let f = random_complex(&g, &mut rng).abs();
        for p in [0.25, 0.5, 1.0] {
            let weak = weak_lp_quasinorm(&f, p).quasinorm;
            let strong = lp_norm(&f, p);
            worst = worst.max(weak - strong * (1.0 + 1e-12));
        }
    }
    require(worst <= 0.0, format!("weak-L_p exceeds L_p by {worst:e}"))?;

    let scheme = make_weights(SchemeKind::Fejer, 24).map_err(e)?;
    let a = random_atom(&g, &ps[1], &mut rng);
    let base = atom_tail_weak_type_probe(&scheme, &a, 0.5, 24).map_err(e)?;
    for t in 0..10 {
        let y = Point::at(&g, rng.random_range(0..g.grid_len().unwrap()));
        let moved = atom_tail_weak_type_probe(&scheme, &a.translate(&y).map_err(e)?, 0.5, 24).map_err(e)?;
        require(moved == base, format!("translate {t}: {moved:e} vs {base:e}"))?;
    }
    Ok(format!("200 atoms valid, 5 martingales exact, weak ≤ strong on 50 functions, probe {base:.6e} on 10 translates"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Check); 11] = [
        ("AC1", "orthonormality and Parseval on (2,3,4)", ac1),
        ("AC2", "closed Dirichlet kernels equal the character sums", ac2),
        ("AC3", "eigen-relation of Nörlund means", ac3),
        ("AC4", "Abel form and weight identity", ac4),
        ("AC5", "domination by the Fejér maximal mean", ac5),
        ("AC6", "regularity probe", ac6),
        ("AC7", "Fejér divergence certificate, Walsh, p = 1/4", ac7),
        ("AC8", "Cesàro(0.5) certificate with the automatic bound", ac8),
        ("AC9", "kernel integral, convolution and domination ratio", ac9),
        ("AC10", "convergence on a cylinder indicator", ac10),
        ("AC11", "atoms, martingales, weak-L_p and translation invariance", ac11),
    ];
    let mut unexpected = Vec::new();
    for (id, title, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("{id} PASS [{secs:.2} s] {title}: {detail}"),
            Err(detail) => {
                let known = KNOWN_UNATTAINABLE.contains(&id);
                println!("{id} FAIL{} [{secs:.2} s] {title}: {detail}", if known { " (known unattainable)" } else { "" });
                if !known {
                    unexpected.push(id);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}

//! The eight experiment drivers. Each returns a case table whose `pass` column decides the
//! exit status.

use std::f64::consts::FRAC_PI_4;

use kazlab::cartan::{kak_real, padic_sphere_distortion, solve_sphere_distortion, RealGroupElement};
use kazlab::finite_models::decay_case;
use kazlab::induction::{
    canonical, cocycle, cocycle_growth_check, default_radii, estimate_domain_stats, int_mul, mat_mul, pushforward_mn0,
    random_sl2, sample_domain, truncate_tail, Mat2,
};
use kazlab::linalg::NormMethod;
use kazlab::sphere::{fitted_holder_constant, stheta_norm_gap, tdelta_norm_gap};
use kazlab::twostep::{
    kazhdan_projection_residual, sandwich_star_instance, spectral_gap_profile, verify_star_instance, FiniteGroupModel,
    FiniteMeasure,
};
use kazlab::zigzag::{radius, revalidate, zigzag_certificate, Point};
use kazlab::LabError;
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{ExperimentConfig, KeySpec, UsageError};
use crate::output::{Cell, CommandOutput, Table};

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(Cell::from($x)),*] };
}

pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeySpec],
    pub run: fn(&ExperimentConfig) -> Result<CommandOutput, UsageError>,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> KeySpec {
    KeySpec { name, default, help }
}

pub const COMMANDS: &[Command] = &[
    Command {
        name: "sdelta-decay",
        about: "norms of the residue-ring operators S_{n,chi} against the p^{-(n-h)/2} decay bound",
        keys: &[
            key("p", "2,3", "primes"),
            key("max_dim", "6561", "largest operator dimension p^{2n}"),
            key("method", "auto", "auto | full-svd | exact | power"),
        ],
        run: sdelta_decay,
    },
    Command {
        name: "sphere-gap",
        about: "sup over degrees of |eig(l, delta) - eig(l, 0)| against 2 sqrt(delta)",
        keys: &[
            key("n", "2", "sphere dimensions"),
            key("grid_points", "99", "delta = k / (grid_points + 1)"),
            key("max_degree", "200", "harmonic degree cutoff"),
            key("holder_constant", "2", "constant in the sqrt(delta) bound"),
            key("tolerance", "1e-9", "slack on the bound"),
        ],
        run: sphere_gap,
    },
    Command {
        name: "su2-gap",
        about: "averaging-operator gaps on SU(2) near theta = pi/4 with a fitted Holder constant",
        keys: &[
            key("grid_points", "41", "theta grid on [0, pi/2]"),
            key("two_j_max", "20", "largest 2j"),
            key("points", "256", "quadrature points in phi"),
            key("holder_c", "0", "declared Holder constant, 0 to only report the fit"),
            key("tolerance", "1e-12", "slack on the bounds"),
        ],
        run: su2_gap,
    },
    Command {
        name: "kak",
        about: "real and p-adic Cartan decompositions and the sphere-distortion construction",
        keys: &[
            key("alpha", "0.5,1,2", "real alpha grid"),
            key("r_points", "20", "r values per alpha on [alpha, 4 alpha]"),
            key("padic_p", "2,3", "primes for the p-adic variant"),
            key("padic_alpha_max", "4", "largest integer alpha"),
            key("roundtrips", "50", "random real KAK roundtrips"),
            key("tolerance", "1e-10", "roundtrip residual bound"),
        ],
        run: kak,
    },
    Command {
        name: "zigzag-cert",
        about: "zig-zag path certificates between Weyl-chamber points",
        keys: &[
            key("s", "0.05,0.1,0.2", "growth rates"),
            key("L", "1,10", "representation norm bounds"),
            key("pairs", "200", "random endpoint pairs"),
            key("r_min", "1", "smallest endpoint radius"),
            key("r_max", "20", "largest endpoint radius"),
            key("certificates", "20", "certificates written in full, besides failures"),
        ],
        run: zigzag_cert,
    },
    Command {
        name: "quotient-gap",
        about: "spectral-gap profiles of random walks on finite groups",
        keys: &[
            key("models", "Z/3,D5,SL3(F2)", "group models"),
            key("horizon", "30", "largest convolution power"),
            key("laziness", "0", "mass at the identity"),
            key("tolerance", "1e-10", "projection identity bound"),
        ],
        run: quotient_gap,
    },
    Command {
        name: "star-verify",
        about: "two-step sandwich instances: limit distances and translated residuals",
        keys: &[
            key("model", "SL3(F2)", "group model"),
            key("L", "1,10,100", "sandwich scales"),
            key("weight", "0.1", "length-weight rate of the conjugation"),
            key("horizon", "40", "largest convolution power"),
            key("dims", "3,2", "outer dimensions"),
            key("c_ratio", "2", "allowed spread of the fitted constant across L"),
        ],
        run: star_verify,
    },
    Command {
        name: "cocycle-mc",
        about: "Monte Carlo checks of the SL2(Z) induction cocycle",
        keys: &[
            key("samples", "100000", "domain samples per seed"),
            key("batches", "10", "batches for the standard errors"),
            key("se_factor", "3", "two-seed consistency in standard errors"),
            key("s", "0.2", "growth rate for the integrated check"),
            key("g_count", "100", "group elements in the growth check"),
            key("g_max_length", "10", "their largest length"),
            key("growth_samples", "2000", "domain samples per element"),
            key("triples", "10000", "cocycle identity triples"),
            key("triple_max_length", "5", "length of the triple elements"),
            key("push_elements", "20", "atoms of the pushed-forward measure"),
            key("push_length", "3", "their largest length"),
            key("push_samples", "2000", "domain samples in the pushforward"),
            key("truncation_radius", "2", "ball radius for the truncation"),
            key("log_rows", "1000", "rows of the sample log"),
        ],
        run: cocycle_mc,
    },
];

pub fn find(name: &str) -> Option<&'static Command> {
    COMMANDS.iter().find(|c| c.name == name)
}

fn bad(key: &str, msg: impl std::fmt::Display) -> UsageError {
    UsageError::BadValue { key: key.to_string(), msg: msg.to_string() }
}

fn lab(e: LabError) -> UsageError {
    UsageError::Other(e.to_string())
}

fn positive(key: &str, v: usize) -> Result<usize, UsageError> {
    if v == 0 {
        return Err(bad(key, "must be positive"));
    }
    Ok(v)
}

fn sdelta_decay(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let method = match cfg.string("method")?.as_str() {
        "auto" => NormMethod::Auto,
        "full-svd" => NormMethod::FullSvd,
        "exact" => NormMethod::ExactDecomposition,
        "power" => NormMethod::PowerIteration,
        other => return Err(bad("method", format!("unknown method '{other}'"))),
    };
    let max_dim = cfg.int("max_dim")?;
    let mut t = Table::new(&["p", "n", "h", "index", "dim", "degenerate", "method", "norm", "bound", "pass"]);
    for p in cfg.ints("p")? {
        if !(2..=97).contains(&p) {
            return Err(bad("p", format!("{p} is not a supported prime")));
        }
        let p = p as u64;
        let mut n = 1u32;
        while (p as i64).pow(2 * n) <= max_dim {
            for h in 1..=n {
                // index 0 is the trivial character, which has no decay statement
                for index in 1..p.pow(h) {
                    let c = decay_case(p, n, h, index, method).map_err(lab)?;
                    t.push(row![
                        p,
                        n,
                        h,
                        index,
                        p.pow(2 * n),
                        c.degenerate,
                        c.norm.method.as_str(),
                        c.norm.value,
                        c.bound,
                        c.pass
                    ]);
                }
            }
            n += 1;
        }
    }
    Ok(CommandOutput { cases: t, ..Default::default() })
}

fn sphere_gap(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let k = positive("grid_points", cfg.usize("grid_points")?)?;
    let d = positive("max_degree", cfg.usize("max_degree")?)?;
    let c = cfg.float("holder_constant")?;
    let tol = cfg.float("tolerance")?;
    let mut t = Table::new(&["n", "delta", "gap", "argmax_degree", "bound", "tail_bound", "pass"]);
    for n in cfg.ints("n")? {
        if n < 2 {
            return Err(bad("n", "sphere dimension must be at least 2"));
        }
        for i in 1..=k {
            let delta = i as f64 / (k + 1) as f64;
            let g = tdelta_norm_gap(n as u32, delta, d).map_err(lab)?;
            let bound = c * delta.sqrt();
            // degrees above the cutoff are covered by the analytic tail bound when one exists
            let tail_ok = g.tail_bound.map_or(true, |b| b <= bound + tol);
            let pass = g.value <= bound + tol && tail_ok;
            t.push(row![n, delta, g.value, g.argmax_degree, bound, g.tail_bound.unwrap_or(f64::NAN), pass]);
        }
    }
    Ok(CommandOutput { cases: t, ..Default::default() })
}

fn su2_gap(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let k = cfg.usize("grid_points")?;
    if k < 2 {
        return Err(bad("grid_points", "need at least two points"));
    }
    let two_j_max = cfg.usize("two_j_max")?;
    let points = cfg.usize("points")?;
    let declared = cfg.float("holder_c")?;
    let tol = cfg.float("tolerance")?;
    let gaps = (0..k)
        .map(|i| stheta_norm_gap(FRAC_PI_4 * 2.0 * i as f64 / (k - 1) as f64, two_j_max, points))
        .collect::<Result<Vec<_>, _>>()
        .map_err(lab)?;
    let fitted = fitted_holder_constant(&gaps);
    let mut t = Table::new(&["theta", "gap", "argmax_two_j", "holder_ratio", "spin_half_gap", "pass"]);
    for g in &gaps {
        // the spin-1/2 block alone has gap sqrt(2) |sin((theta - pi/4) / 2)|
        let half = 2f64.sqrt() * ((g.theta - FRAC_PI_4) / 2.0).sin().abs();
        let holder_ok = declared <= 0.0 || g.value <= declared * (g.theta - FRAC_PI_4).abs().powf(0.25) + tol;
        let pass = g.value + tol >= half && g.value <= 2.0 + tol && holder_ok;
        t.push(row![g.theta, g.value, g.argmax_two_j, g.holder_ratio, half, pass]);
    }
    Ok(CommandOutput {
        cases: t,
        documents: vec![("su2-gap-fit".into(), json!({ "fittedHolderConstant": fitted, "exponent": 0.25 }))],
        ..Default::default()
    })
}

fn random_sl3(rng: &mut impl Rng) -> Matrix3<f64> {
    loop {
        let mut m = Matrix3::from_fn(|_, _| rng.gen::<f64>() * 2.0 - 1.0);
        let mut d = m.determinant();
        if d.abs() < 1e-3 {
            continue;
        }
        if d < 0.0 {
            m.row_mut(0).neg_mut();
            d = -d;
        }
        return m / d.cbrt();
    }
}

fn kak(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let r_points = cfg.usize("r_points")?;
    if r_points < 2 {
        return Err(bad("r_points", "need at least two values"));
    }
    let tol = cfg.float("tolerance")?;
    let mut t = Table::new(&["kind", "p", "alpha", "r", "value", "bound", "residual", "pass"]);
    for alpha in cfg.floats("alpha")? {
        if !(alpha > 0.0) {
            return Err(bad("alpha", "must be positive"));
        }
        for i in 0..r_points {
            let r = alpha + 3.0 * alpha * i as f64 / (r_points - 1) as f64;
            let d = solve_sphere_distortion(alpha, r).map_err(lab)?;
            let bound = (r - 4.0 * alpha).exp() * (1.0 + 1e-9);
            let residual = d.residual.max(d.reconstruction_residual);
            t.push(row![
                "real-distortion",
                0u64,
                alpha,
                r,
                d.delta,
                bound,
                residual,
                d.delta <= bound && residual <= tol
            ]);
        }
    }
    let amax = cfg.int("padic_alpha_max")?;
    for p in cfg.ints("padic_p")? {
        if !(2..=97).contains(&p) {
            return Err(bad("padic_p", format!("{p} is not a supported prime")));
        }
        for alpha in 1..=amax {
            for r in alpha..=4 * alpha {
                let d = padic_sphere_distortion(p as u64, alpha, r).map_err(lab)?;
                let mismatch: i64 = d.triple.a.iter().zip(&d.expected.a).map(|(x, y)| (x - y).abs()).sum();
                t.push(row![
                    "padic-distortion",
                    p,
                    alpha as f64,
                    r as f64,
                    d.delta_valuation as f64,
                    (4 * alpha - r) as f64,
                    mismatch as f64,
                    d.pass
                ]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.usize("roundtrips")? {
        let g = RealGroupElement::new(random_sl3(&mut rng)).map_err(lab)?;
        let k = kak_real(&g);
        let residual = (k.reconstruct() - g.matrix()).norm() / g.matrix().norm();
        t.push(row!["real-roundtrip", 0u64, f64::NAN, f64::NAN, k.a.length(), f64::NAN, residual, residual <= tol]);
    }
    Ok(CommandOutput { cases: t, ..Default::default() })
}

/// A chamber point `a1 >= a2 >= a3`, `sum = 0`, with `max(a1, -a3) = r`.
fn chamber_point(rng: &mut impl Rng, r: f64) -> Point {
    let u = 0.5 + 0.5 * rng.gen::<f64>();
    if rng.gen::<bool>() {
        [r, r * u - r, -r * u]
    } else {
        [r * u, r - r * u, -r]
    }
}

fn zigzag_cert(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let (rmin, rmax) = (cfg.float("r_min")?, cfg.float("r_max")?);
    if !(0.0 <= rmin && rmin <= rmax) {
        return Err(bad("r_min", "need 0 <= r_min <= r_max"));
    }
    let keep = cfg.usize("certificates")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(Point, Point)> = (0..cfg.usize("pairs")?)
        .map(|_| {
            let ra = rmin + (rmax - rmin) * rng.gen::<f64>();
            let rb = rmin + (rmax - rmin) * rng.gen::<f64>();
            (chamber_point(&mut rng, ra), chamber_point(&mut rng, rb))
        })
        .collect();
    let mut t =
        Table::new(&["s", "L", "a1", "a2", "a3", "b1", "b2", "b3", "steps", "total", "target", "status", "pass"]);
    let mut certs = Vec::new();
    for s in cfg.floats("s")? {
        for l in cfg.floats("L")? {
            for (a, b) in &pairs {
                let head = row![s, l, a[0], a[1], a[2], b[0], b[1], b[2]];
                let tail = match zigzag_certificate(a, b, s, l) {
                    Ok(cert) => {
                        let status = match revalidate(&cert) {
                            Ok(v) if (v - cert.total).abs() <= 1e-12 * cert.total.max(1.0) => "ok".to_string(),
                            Ok(v) => format!("revalidated total {v:e} differs"),
                            Err(e) => format!("revalidation failed: {e}"),
                        };
                        let pass = cert.pass && status == "ok";
                        let tail = row![cert.steps.len(), cert.total, cert.target, status, pass];
                        if certs.len() < keep || !pass {
                            certs.push(json!({ "radii": [radius(a), radius(b)], "certificate": cert }));
                        }
                        tail
                    }
                    Err(e) => row![0u64, f64::NAN, f64::NAN, format!("rejected: {e}"), false],
                };
                t.push(head.into_iter().chain(tail).collect());
            }
        }
    }
    Ok(CommandOutput {
        cases: t,
        documents: vec![("zigzag-cert-certificates".into(), json!(certs))],
        ..Default::default()
    })
}

fn quotient_gap(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let horizon = positive("horizon", cfg.usize("horizon")?)?;
    let laziness = cfg.float("laziness")?;
    let tol = cfg.float("tolerance")?;
    let mut t = Table::new(&[
        "model",
        "order",
        "generating",
        "nonincreasing",
        "rho",
        "fit_constant",
        "projection_residual",
        "pass",
    ]);
    let mut profile = Table::new(&["model", "n", "distance"]);
    for name in cfg.strings("models")? {
        let model = FiniteGroupModel::by_name(&name).map_err(|e| bad("models", e))?;
        let mu = FiniteMeasure::lazy_walk(&model, laziness).map_err(|e| bad("laziness", e))?;
        let g = spectral_gap_profile(&model, &mu, horizon).map_err(lab)?;
        let proj = kazhdan_projection_residual(&model);
        for (n, v) in g.values.iter().enumerate() {
            profile.push(row![name.as_str(), n + 1, *v]);
        }
        let rho = g.rho.unwrap_or(f64::NAN);
        let pass = g.generating && g.nonincreasing && rho < 1.0 && proj <= tol;
        t.push(row![
            name.as_str(),
            model.order(),
            g.generating,
            g.nonincreasing,
            rho,
            g.fit.map_or(f64::NAN, |f| f.constant),
            proj,
            pass
        ]);
    }
    Ok(CommandOutput { cases: t, extra_tables: vec![("quotient-gap-profile".into(), profile)], ..Default::default() })
}

fn star_verify(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let model = FiniteGroupModel::by_name(&cfg.string("model")?).map_err(|e| bad("model", e))?;
    let dims = cfg.ints("dims")?;
    if dims.len() != 2 || dims.iter().any(|d| *d < 1) {
        return Err(bad("dims", "expected two positive dimensions"));
    }
    let horizon = cfg.usize("horizon")?;
    let weight = cfg.float("weight")?;
    let c_ratio = cfg.float("c_ratio")?;
    let gens = model.generators();
    let e = model.identity();
    let (g0, g1) = (gens[0], gens[gens.len() - 1]);
    let pairs = [(g0, e), (e, g1), (g0, g1)];
    let mut reports = Vec::new();
    for l in cfg.floats("L")? {
        let inst = sandwich_star_instance(&model, l, weight, (dims[0] as usize, dims[1] as usize), horizon, cfg.seed)
            .map_err(lab)?;
        let rep = verify_star_instance(&model, &inst.rep, &inst.measures, &pairs, Some(&inst.limit)).map_err(lab)?;
        reports.push((l, inst.rep.s, rep));
    }
    let cs: Vec<f64> = reports.iter().filter_map(|r| r.2.fitted_c).collect();
    let spread = if cs.len() == reports.len() {
        cs.iter().copied().fold(0.0, f64::max) / cs.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    let mut t = Table::new(&[
        "L",
        "s",
        "fitted_c",
        "fitted_t",
        "rho",
        "min_translated_rate",
        "max_translated_rate",
        "c_spread",
        "pass",
    ]);
    for (l, s, r) in &reports {
        let rates: Vec<f64> = r.invariance_residuals.iter().filter_map(|x| x.fitted_t).collect();
        let ft = r.fitted_t.unwrap_or(f64::NAN);
        t.push(row![
            *l,
            *s,
            r.fitted_c.unwrap_or(f64::NAN),
            ft,
            (-ft).exp(),
            rates.iter().copied().fold(f64::INFINITY, f64::min),
            rates.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            spread,
            r.pass && spread <= c_ratio
        ]);
    }
    let docs = reports.iter().map(|(l, s, r)| json!({ "L": l, "s": s, "report": r })).collect::<Vec<_>>();
    Ok(CommandOutput { cases: t, documents: vec![("star-verify-reports".into(), json!(docs))], ..Default::default() })
}

fn cocycle_mc(cfg: &ExperimentConfig) -> Result<CommandOutput, UsageError> {
    let n = positive("samples", cfg.usize("samples")?)?;
    let batches = cfg.usize("batches")?;
    let seeds = [cfg.seed, cfg.seed.wrapping_add(1)];
    let domains = seeds.iter().map(|&s| sample_domain(n, s)).collect::<Result<Vec<_>, _>>().map_err(lab)?;
    let stats = domains
        .iter()
        .map(|d| estimate_domain_stats(d, &default_radii(), batches))
        .collect::<Result<Vec<_>, _>>()
        .map_err(lab)?;
    let mut t = Table::new(&["check", "seed", "value", "bound", "pass"]);
    for (seed, st) in seeds.iter().zip(&stats) {
        t.push(row!["cusp-rate", *seed, st.cusp_rate, 0.0, st.cusp_rate > 0.0]);
    }
    let diff = (stats[0].cusp_rate - stats[1].cusp_rate).abs();
    let allowed = cfg.float("se_factor")? * stats[0].cusp_rate_se.hypot(stats[1].cusp_rate_se);
    t.push(row!["cusp-rate-consistency", seeds[1], diff, allowed, diff <= allowed]);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let gmax = cfg.float("g_max_length")?;
    let gs: Vec<Mat2> = (0..positive("g_count", cfg.usize("g_count")?)?).map(|_| random_sl2(&mut rng, gmax)).collect();
    let m = cfg.usize("growth_samples")?.clamp(1, n);
    let growth = cocycle_growth_check(&gs, cfg.float("s")?, &domains[0][..m], &stats[0]).map_err(|e| bad("s", e))?;
    t.push(row![
        "kappa",
        seeds[0],
        growth.kappa,
        2.0 * growth.max_slack + 1e-9,
        growth.kappa <= 2.0 * growth.max_slack + 1e-9
    ]);
    t.push(row!["integrated-growth", seeds[0], growth.c_emp, growth.c_pointwise, growth.pass]);

    let tl = cfg.float("triple_max_length")?;
    let mut mismatches = 0u64;
    let triples = cfg.usize("triples")?;
    for k in 0..triples {
        let g1 = random_sl2(&mut rng, tl);
        let g2 = random_sl2(&mut rng, tl);
        let w = &domains[1][k % n].point;
        let c2 = cocycle(&g2, w).map_err(lab)?;
        let c1 = cocycle(&g1, &c2.g_dot_omega).map_err(lab)?;
        let c12 = cocycle(&mat_mul(&g1, &g2), w).map_err(lab)?;
        if c12.alpha != canonical(&int_mul(&c1.alpha, &c2.alpha).map_err(lab)?) {
            mismatches += 1;
        }
    }
    t.push(row!["cocycle-identity", seeds[1], mismatches as f64, 0.0, mismatches == 0]);

    let pl = cfg.float("push_length")?;
    let atoms = positive("push_elements", cfg.usize("push_elements")?)?;
    let m_atoms: Vec<(Mat2, f64)> = (0..atoms).map(|_| (random_sl2(&mut rng, pl), 1.0 / atoms as f64)).collect();
    let ps = cfg.usize("push_samples")?.clamp(1, n);
    let m0 = pushforward_mn0(&m_atoms, pl, &domains[1][..ps]).map_err(lab)?;
    let (trunc, tail) = truncate_tail(&m0, cfg.float("truncation_radius")?).map_err(|e| bad("truncation_radius", e))?;
    let tv = m0.total_variation(&trunc);
    t.push(row!["truncation-tv", seeds[1], tv, 2.0 * tail, (tv - 2.0 * tail).abs() <= 1e-12]);

    let mut log = Table::new(&["seed", "x", "y", "rotation", "length", "weight"]);
    let rows = cfg.usize("log_rows")?;
    for (seed, d) in seeds.iter().zip(&domains) {
        for s in d.iter().take(rows) {
            log.push(row![*seed, s.point.x, s.point.y, s.rotation, s.length, s.weight]);
        }
    }
    let growth_doc = json!({
        "s": growth.s, "kappa": growth.kappa, "maxSlack": growth.max_slack,
        "reconstruction": growth.reconstruction, "cEmp": growth.c_emp, "cPointwise": growth.c_pointwise,
        "pass": growth.pass,
    });
    Ok(CommandOutput {
        cases: t,
        extra_tables: vec![("cocycle-mc-samples".into(), log)],
        documents: vec![(
            "cocycle-mc-stats".into(),
            json!({ "domain": stats, "growth": growth_doc, "pushforwardAtoms": m0.atoms.len(), "tailMass": tail }),
        )],
    })
}

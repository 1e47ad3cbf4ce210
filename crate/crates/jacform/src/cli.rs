//! Command-line front end: reproducible runs of the verification and
//! decomposition machinery.
//!
//! Exit codes: 0 success, 2 hypothesis violation (including a singular
//! index), 3 exact-identity failure, 4 numeric-tolerance failure, 5 I/O or
//! configuration errors. Every run prints its configuration up front so
//! reports are reproducible. The worker-pool size is taken from
//! `JD_THREADS` when set.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::exact::{
    enumerate_pairs, multiplicity_mu, pairs_up_to, random_half_integral, rat, HalfIntSymMatrix,
};
use crate::nearly::{FourierMode, FourierPoly, NearlyHoloElt};
use crate::sympow::SymPoly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_EXACT_FAILURE: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "jacform",
    about = "Exact operator calculus and decomposition engine for Jacobi forms of higher cogenus",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the commutator table of the raising/lowering operators with
    /// exact arithmetic over random half-integral indices.
    VerifyCommutators {
        /// Cogenus.
        #[arg(long, default_value_t = 1)]
        h: usize,
        /// Weight label of the test family.
        #[arg(long, default_value_t = 5)]
        k: i64,
        /// Largest |ν, r| in the generating family.
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Number of random indices to draw.
        #[arg(long, default_value_t = 5)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Corrupt one expected identity to prove the harness detects it.
        #[arg(long, default_value_t = false)]
        inject_fault: bool,
    },
    /// Decompose a serialized form: scalar input through the depth
    /// filtration, vector-valued input into its component tuple.
    Decompose {
        /// Input form (JSON).
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        /// Depth bound for scalar input.
        #[arg(long, default_value_t = 0)]
        d: u32,
    },
    /// Seeded random assemble/decompose round trips, compared bit-exactly.
    Roundtrip {
        #[arg(long, default_value_t = 1)]
        h: usize,
        /// Symmetric-power degree; 0 exercises the scalar filtration.
        #[arg(long, default_value_t = 0)]
        s: u32,
        /// Weight; defaults to s + h + 1 (scalar: d + h + 1).
        #[arg(long)]
        k: Option<i64>,
        /// Depth bound for the scalar round trip.
        #[arg(long, default_value_t = 3)]
        d: u32,
        /// Number of seeds.
        #[arg(long, default_value_t = 25)]
        seeds: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Level of the Fourier data.
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// JSON file with {"two_m": [[...]]} fixing the index; random
        /// otherwise.
        #[arg(long)]
        index_file: Option<PathBuf>,
    },
    /// Compute a lattice theta series.
    Theta {
        /// Lattice file (JSON {"gram": [[...]], "vectors": [[...]]}).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Built-in lattice: e8-h1, e8-h2, a2-h1, a2-h2.
        #[arg(long)]
        builtin: Option<String>,
        /// Fourier truncation bound.
        #[arg(long, default_value_t = 10)]
        trunc: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check slash invariance of a serialized form under the standard
    /// generators, and heat-operator covariance on top of it.
    Slashcheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn configure_threads() {
    if let Ok(threads) = std::env::var("JD_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::HypothesisViolated(_) | Error::SingularIndex => EXIT_HYPOTHESIS,
        Error::InternalInvariant(_) => EXIT_EXACT_FAILURE,
        _ => EXIT_IO,
    }
}

pub fn run() -> i32 {
    configure_threads();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn dispatch(cmd: Command) -> crate::Result<i32> {
    match cmd {
        Command::VerifyCommutators {
            h,
            k,
            max_degree,
            trials,
            seed,
            inject_fault,
        } => cmd_verify_commutators(h, k, max_degree, trials, seed, inject_fault),
        Command::Decompose { input, out, d } => cmd_decompose(&input, &out, d),
        Command::Roundtrip {
            h,
            s,
            k,
            d,
            seeds,
            seed,
            level,
            index_file,
        } => cmd_roundtrip(h, s, k, d, seeds, seed, level, index_file.as_deref()),
        Command::Theta {
            input,
            builtin,
            trunc,
            out,
        } => cmd_theta(input.as_deref(), builtin.as_deref(), trunc, &out),
        Command::Slashcheck { input, tol } => cmd_slashcheck(&input, tol),
    }
}

fn cmd_verify_commutators(
    h: usize,
    k: i64,
    max_degree: u32,
    trials: u32,
    seed: u64,
    inject_fault: bool,
) -> crate::Result<i32> {
    println!(
        "config: {{\"command\":\"verify-commutators\",\"h\":{h},\"k\":{k},\"max_degree\":{max_degree},\"trials\":{trials},\"seed\":{seed},\"inject_fault\":{inject_fault}}}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices: Vec<HalfIntSymMatrix> = (0..trials)
        .map(|_| random_half_integral(&mut rng, h, true))
        .collect();
    let fault = inject_fault.then_some(crate::maass::Fault::LowerRaiseScalar);
    let results: Vec<(usize, Vec<(String, crate::maass::CommutatorReport)>)> = indices
        .par_iter()
        .enumerate()
        .map(|(i, idx)| {
            let table = crate::maass::commutator_table(idx, k, max_degree, fault)
                .expect("table construction");
            (i, table)
        })
        .collect();
    let mut failed = false;
    for (i, table) in results {
        for (name, report) in table {
            if report.pass() {
                println!("index {i}: PASS {name} ({} probes)", report.checked);
            } else {
                failed = true;
                println!(
                    "index {i}: FAIL {name}: {}",
                    report.failures.first().cloned().unwrap_or_default()
                );
            }
        }
    }
    Ok(if failed { EXIT_EXACT_FAILURE } else { EXIT_OK })
}

fn cmd_decompose(input: &std::path::Path, out: &std::path::Path, d: u32) -> crate::Result<i32> {
    println!(
        "config: {{\"command\":\"decompose\",\"in\":{input:?},\"out\":{out:?},\"d\":{d}}}"
    );
    let text = std::fs::read_to_string(input)?;
    let form = crate::io::deserialize_form(&text, false)?;
    let elt = NearlyHoloElt::from_fourier(form.k, form.index.clone(), form.coeffs.clone())?;
    if form.s == 0 {
        let dec = crate::project::nh_decompose(&elt, d)?;
        println!("scalar decomposition at weight {} with depth bound {d}", form.k);
        println!("level multiplicities n(l):");
        for l in 0..=d {
            println!("  l = {l}: {}", enumerate_pairs(l, form.h).len());
        }
        std::fs::write(out, crate::io::serialize_decomposition(&dec))?;
    } else {
        let tuple = crate::split::vv_decompose(&elt)?;
        println!(
            "vector-valued decomposition at weight ({}, {})",
            form.k, form.s
        );
        println!("part multiplicities binom(s-l+h-1, h-1):");
        for l in 0..=form.s {
            println!("  l = {l}: {}", multiplicity_mu(form.s - l, form.h));
        }
        std::fs::write(out, crate::io::serialize_tuple(&tuple))?;
    }
    println!("wrote {}", out.display());
    Ok(EXIT_OK)
}

pub(crate) fn random_scalar_element(
    rng: &mut impl Rng,
    k: i64,
    index: &HalfIntSymMatrix,
    level: u32,
    d: u32,
) -> NearlyHoloElt {
    let h = index.h();
    let mut out = NearlyHoloElt::zero(k, 0, index.clone(), level);
    for pair in pairs_up_to(d, h) {
        if rng.gen_bool(0.4) {
            continue;
        }
        let mut fp = FourierPoly::new(h, level, 0);
        for _ in 0..rng.gen_range(1..=3) {
            let n = rat(rng.gen_range(-2 * level as i64..=3 * level as i64), level as i64);
            let r: Vec<i64> = (0..h).map(|_| rng.gen_range(-2..=2)).collect();
            fp.insert(
                FourierMode::new(n, r),
                SymPoly::scalar(h, rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))),
            )
            .expect("mode admissible at this level");
        }
        if !fp.is_zero() {
            out.insert_term(pair, fp).expect("shapes match");
        }
    }
    out
}

pub(crate) fn random_component_tuple(
    rng: &mut impl Rng,
    k: i64,
    s: u32,
    index: &HalfIntSymMatrix,
    level: u32,
) -> crate::split::ComponentTuple {
    let h = index.h();
    let parts = (0..=s)
        .map(|l| {
            (0..multiplicity_mu(s - l, h))
                .map(|_| {
                    let mut fp = FourierPoly::new(h, level, 0);
                    for _ in 0..rng.gen_range(0..=3) {
                        let n = rat(rng.gen_range(-2..=3), 1);
                        let r: Vec<i64> = (0..h).map(|_| rng.gen_range(-2..=2)).collect();
                        fp.insert(
                            FourierMode::new(n, r),
                            SymPoly::scalar(h, rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))),
                        )
                        .expect("mode admissible");
                    }
                    fp
                })
                .collect()
        })
        .collect();
    crate::split::ComponentTuple {
        k,
        s,
        index: index.clone(),
        level,
        parts,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_roundtrip(
    h: usize,
    s: u32,
    k: Option<i64>,
    d: u32,
    seeds: u64,
    seed: u64,
    level: u32,
    index_file: Option<&std::path::Path>,
) -> crate::Result<i32> {
    let k = k.unwrap_or(if s == 0 {
        d as i64 + h as i64 + 1
    } else {
        s as i64 + h as i64 + 1
    });
    println!(
        "config: {{\"command\":\"roundtrip\",\"h\":{h},\"s\":{s},\"k\":{k},\"d\":{d},\"seeds\":{seeds},\"seed\":{seed},\"level\":{level}}}"
    );
    let fixed_index = match index_file {
        Some(path) => Some(crate::io::deserialize_index(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let failures: Vec<String> = (0..seeds)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let index = fixed_index
                .clone()
                .unwrap_or_else(|| random_half_integral(&mut rng, h, true));
            let outcome = if s == 0 {
                let f = random_scalar_element(&mut rng, k, &index, level, d);
                crate::project::nh_decompose(&f, d)
                    .and_then(|dec| crate::project::nh_assemble(&dec))
                    .map(|back| back == f)
            } else {
                let t = random_component_tuple(&mut rng, k, s, &index, level);
                crate::split::vv_assemble(&t)
                    .and_then(|phi| crate::split::vv_decompose(&phi))
                    .map(|back| back == t)
            };
            match outcome {
                Ok(true) => None,
                Ok(false) => Some(format!("seed {i}: round trip differs")),
                Err(e) => Some(format!("seed {i}: {e}")),
            }
        })
        .collect();
    if failures.is_empty() {
        println!("roundtrip: PASS ({seeds} seeds)");
        Ok(EXIT_OK)
    } else {
        for f in &failures {
            println!("roundtrip: FAIL {f}");
        }
        Ok(EXIT_EXACT_FAILURE)
    }
}

fn builtin_lattice(name: &str) -> crate::Result<crate::theta::LatticeSpec> {
    match name {
        "e8-h1" => crate::theta::LatticeSpec::e8(&[0]),
        "e8-h2" => crate::theta::LatticeSpec::e8(&[0, 2]),
        "a2-h1" => crate::theta::LatticeSpec::a2(&[0]),
        "a2-h2" => crate::theta::LatticeSpec::a2(&[0, 1]),
        other => Err(Error::ShapeMismatch(format!(
            "unknown builtin lattice `{other}`"
        ))),
    }
}

fn cmd_theta(
    input: Option<&std::path::Path>,
    builtin: Option<&str>,
    trunc: u32,
    out: &std::path::Path,
) -> crate::Result<i32> {
    println!(
        "config: {{\"command\":\"theta\",\"in\":{input:?},\"builtin\":{builtin:?},\"trunc\":{trunc},\"out\":{out:?}}}"
    );
    let lattice = match (input, builtin) {
        (Some(path), None) => crate::io::deserialize_lattice(&std::fs::read_to_string(path)?)?,
        (None, Some(name)) => builtin_lattice(name)?,
        _ => {
            return Err(Error::ShapeMismatch(
                "pass exactly one of --in or --builtin".into(),
            ))
        }
    };
    let form = crate::theta::theta_series(&lattice, trunc)?;
    let violations = form.check_support();
    println!(
        "theta series: rank {}, h = {}, weight {}, {} modes, support violations: {}",
        lattice.rank(),
        form.h,
        form.k,
        form.coeffs.num_modes(),
        violations.len()
    );
    std::fs::write(out, crate::io::serialize_form(&form))?;
    println!("wrote {}", out.display());
    Ok(EXIT_OK)
}

fn cmd_slashcheck(input: &std::path::Path, tol: f64) -> crate::Result<i32> {
    println!("config: {{\"command\":\"slashcheck\",\"in\":{input:?},\"tol\":{tol}}}");
    let text = std::fs::read_to_string(input)?;
    let form = crate::io::deserialize_form(&text, true)?;
    let h = form.h;
    let points = crate::slash::default_points(h);
    // The inversion sends Im τ = 2 to 1/2 and τ = 1 + 2i even lower, so it
    // is checked at τ = 2i alone; the other generators keep both points.
    let inversion_points = vec![points[0].clone()];
    let mut generators = vec![
        ("T".to_string(), crate::slash::GroupElement::translation_t(h)),
        ("S".to_string(), crate::slash::GroupElement::inversion_s(h)),
    ];
    let mut lambda = vec![0i64; h];
    lambda[0] = 1;
    generators.push((
        "lattice shift λ=e1".into(),
        crate::slash::GroupElement::lattice_shift(lambda, vec![0; h])?,
    ));
    let mut mu = vec![0i64; h];
    mu[h - 1] = 1;
    generators.push((
        "lattice shift μ=e_h".into(),
        crate::slash::GroupElement::lattice_shift(vec![0; h], mu)?,
    ));
    let mut kappa = vec![vec![0i64; h]; h];
    kappa[0][0] = 1;
    generators.push((
        "κ-shift".into(),
        crate::slash::GroupElement::kappa_shift(kappa)?,
    ));
    let mut worst: f64 = 0.0;
    for (name, g) in &generators {
        let pts = if name == "S" { &inversion_points } else { &points };
        let report = crate::slash::slash_check(&form, g, pts, tol)?;
        println!(
            "slash {name}: max residual {:.3e} (tail ≤ {:.3e}) → {}",
            report.max_residual,
            report.max_tail,
            if report.pass() { "PASS" } else { "FAIL" }
        );
        worst = worst.max(report.max_residual);
    }
    // Heat covariance rides on invertibility of the index.
    if form.index.is_invertible() {
        let heat_tol = tol.max(1e-5);
        for (name, g) in &generators {
            let pts = if name == "S" { &inversion_points } else { &points };
            let report = crate::slash::covariance_check(
                &form,
                crate::maass::heat,
                g,
                pts,
                heat_tol,
            )?;
            println!(
                "heat covariance under {name}: max residual {:.3e} → {}",
                report.max_residual,
                if report.pass() { "PASS" } else { "FAIL" }
            );
            worst = worst.max(if report.pass() { 0.0 } else { report.max_residual });
        }
    }
    Ok(if worst < tol { EXIT_OK } else { EXIT_TOLERANCE })
}

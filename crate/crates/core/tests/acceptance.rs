//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Matrix3, Vector3};
use qsde_cascade::cli::check_qsde;
use qsde_cascade::model::{
    synthesize_bilinear, synthesize_cascade, synthesize_linear, synthesize_linear_with_gain,
    BilinearQSDE, CascadeQSDE, LinearQSDE, Qsde, Slh,
};
use qsde_cascade::oprep::{oracle_drift_match, verify_lemma2, verify_preservation_integrands};
use qsde_cascade::realizability::{
    check_ccr_bilinear, check_ccr_linear, check_ccr_mixed, check_pr_bilinear, check_pr_cascade,
    check_pr_linear, corollary_crosscheck, CShape, RealizabilityReport,
};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn FnOnce() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{out}, {} ms", took.as_millis()))
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn recovered(rep: &RealizabilityReport) -> Result<&Slh, String> {
    rep.recovered
        .as_ref()
        .ok_or_else(|| "nothing recovered".to_string())
}

fn linear_round_trip() -> Outcome {
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = rng.random_range(1..=3);
        let slh = random_linear(&mut rng, n);
        let q = synthesize_linear(&slh).map_err(|e| e.to_string())?;
        let rep = check_qsde(&Qsde::Linear(q), 1e-10, CShape::SeriesProduct)
            .map_err(|e| e.to_string())?;
        ensure(rep.pass(), || {
            format!("trial {trial}: failing {:?}", rep.failing())
        })?;
        let Slh::Linear(back) = recovered(&rep)? else {
            return Err("wrong recovered kind".into());
        };
        let dr = max_abs(&(back.r() - slh.r()));
        let dg = (back.gamma1() - slh.gamma1())
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()));
        ensure(dr <= 1e-10 && dg <= 1e-10, || {
            format!("trial {trial}: recovery error {dr:e}/{dg:e}")
        })?;
        worst = worst.max(rep.max_residual()).max(dr).max(dg);
    }
    Ok(format!(
        "100 systems, worst residual or recovery error {worst:.1e}"
    ))
}

fn bilinear_round_trip() -> Outcome {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let slh = random_bilinear(&mut rng);
        let q = synthesize_bilinear(&slh).map_err(|e| e.to_string())?;
        let rep = check_pr_bilinear(&q, 1e-10).map_err(|e| e.to_string())?;
        ensure(rep.pass() && rep.conditions.len() == 4, || {
            format!("trial {trial}: failing {:?}", rep.failing())
        })?;
        let Slh::Bilinear(back) = recovered(&rep)? else {
            return Err("wrong recovered kind".into());
        };
        let da = (back.alpha2 - slh.alpha2).amax();
        let dg = (back.gamma2 - slh.gamma2)
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()));
        ensure(da <= 1e-10 && dg <= 1e-10, || {
            format!("trial {trial}: recovery error {da:e}/{dg:e}")
        })?;
        worst = worst.max(rep.max_residual()).max(da).max(dg);
    }
    Ok(format!(
        "100 systems, worst residual or recovery error {worst:.1e}"
    ))
}

fn cascade_suite() -> Vec<CascadeQSDE> {
    let mut rng = rng(3);
    (0..100)
        .map(|_| synthesize_cascade(&random_cascade(&mut rng)).unwrap())
        .collect()
}

fn cascade_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    for (trial, q) in cascade_suite().iter().enumerate() {
        let pr = check_pr_cascade(q, 1e-10, CShape::SeriesProduct).map_err(|e| e.to_string())?;
        let mixed = check_ccr_mixed(q, 1e-10).map_err(|e| e.to_string())?;
        ensure(pr.pass() && mixed.pass(), || {
            format!(
                "trial {trial}: failing {:?} {:?}",
                pr.failing(),
                mixed.failing()
            )
        })?;
        ensure(
            pr.condition("thm6.consistency").is_some()
                && mixed.condition("thm3.consistency").is_some(),
            || "consistency conditions missing".into(),
        )?;
        worst = worst.max(pr.max_residual()).max(mixed.max_residual());
    }
    Ok(format!("100 cascades, worst residual {worst:.1e}"))
}

fn corollary() -> Outcome {
    let mut rng = rng(4);
    let mut realizable = 0;
    let mut checked = 0;
    for q in cascade_suite() {
        let mut variants = vec![q.clone()];
        let mut bumped = q.clone();
        let (i, j) = (rng.random_range(0..q.dim()), rng.random_range(0..q.dim()));
        bumped.a[(i, j)] += 1e-3;
        variants.push(bumped);
        for v in variants {
            checked += 1;
            if check_pr_cascade(&v, 1e-10, CShape::SeriesProduct)
                .unwrap()
                .pass()
            {
                realizable += 1;
            }
            ensure(corollary_crosscheck(&v, 1e-10).unwrap(), || {
                "counterexample found".into()
            })?;
        }
    }
    Ok(format!(
        "{checked} systems, {realizable} realizable, 0 counterexamples"
    ))
}

fn cavity_example() -> Outcome {
    let q = synthesize_linear(&cavity()).map_err(|e| e.to_string())?;
    let id = DMatrix::<f64>::identity(2, 2);
    let err = max_abs(&(&q.a + &id))
        .max(max_abs(&(&q.b + &id * SQRT2)))
        .max(max_abs(&(&q.c - &id * SQRT2)));
    ensure(err <= 1e-14, || format!("max deviation {err:e}"))?;
    Ok(format!(
        "A = -I, B = -√2 I, C = √2 I, max deviation {err:.1e}"
    ))
}

fn two_level_example() -> Outcome {
    let q = synthesize_bilinear(&two_level()).map_err(|e| e.to_string())?;
    let a0 = Vector3::new(0.0, 0.0, 1.0);
    let a = Matrix3::from_diagonal(&Vector3::new(-0.5, -0.5, -1.0));
    let b1 = Matrix3::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
    let b2 = Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
    let err = (q.a0 - a0)
        .amax()
        .max((q.a - a).amax())
        .max((q.b1 - b1).amax())
        .max((q.b2 - b2).amax());
    ensure(err <= 1e-14, || format!("max deviation {err:e}"))?;
    Ok(format!("A₀, A, B₁, B₂ reproduced, max deviation {err:.1e}"))
}

fn oracle_run(fock_dim: usize) -> Result<RealizabilityReport, String> {
    let slh = cavity_two_level();
    let q = synthesize_cascade(&slh).map_err(|e| e.to_string())?;
    let mut rep = verify_lemma2(&slh, fock_dim, 1e-9).map_err(|e| e.to_string())?;
    let pres = verify_preservation_integrands(&q, 1e-9).map_err(|e| e.to_string())?;
    let drift = oracle_drift_match(&Qsde::Cascade(q), &Slh::Cascade(slh), fock_dim, 1e-9)
        .map_err(|e| e.to_string())?;
    rep.conditions.extend(pres.conditions);
    rep.conditions.extend(drift.conditions);
    Ok(rep)
}

fn oracle_agreement() -> Outcome {
    let r16 = oracle_run(16)?;
    ensure(r16.pass(), || format!("N=16 failing {:?}", r16.failing()))?;
    let count = |p: &str| {
        r16.conditions
            .iter()
            .filter(|c| c.id.starts_with(p))
            .count()
    };
    ensure(count("lemma2.") == 12 && count("pres") == 8, || {
        "wrong record count".into()
    })?;
    let r32 = oracle_run(32)?;
    ensure(r32.pass(), || format!("N=32 failing {:?}", r32.failing()))?;
    let mut drift: f64 = 0.0;
    for c in &r16.conditions {
        let other = r32
            .residual(&c.id)
            .ok_or_else(|| format!("{} missing at N=32", c.id))?;
        drift = drift.max((c.residual - other).abs());
    }
    ensure(drift <= 1e-12, || format!("N=16 vs N=32 drift {drift:e}"))?;
    Ok(format!(
        "{} records, worst residual {:.1e}, N=16 vs N=32 drift {drift:.1e}",
        r16.conditions.len(),
        r16.max_residual()
    ))
}

/// A perturbation site: which matrix, which rectangle of entries, and the
/// condition expected to flip.
struct Site {
    target: Target,
    rows: (usize, usize),
    cols: (usize, usize),
    diagonal: bool,
    expect: &'static str,
}

#[derive(Clone, Copy)]
enum Target {
    A0,
    A,
    C,
}

fn site(target: Target, rows: (usize, usize), cols: (usize, usize), expect: &'static str) -> Site {
    Site {
        target,
        rows,
        cols,
        diagonal: false,
        expect,
    }
}

fn diag(rows: (usize, usize), expect: &'static str) -> Site {
    Site {
        target: Target::A,
        rows,
        cols: rows,
        diagonal: true,
        expect,
    }
}

fn pick(rng: &mut impl Rng, s: &Site) -> (usize, usize) {
    let i = rng.random_range(s.rows.0..s.rows.1);
    if s.diagonal {
        return (i, s.cols.0 + (i - s.rows.0));
    }
    (i, rng.random_range(s.cols.0..s.cols.1))
}

trait Perturb: Clone {
    fn entry(&mut self, t: Target, i: usize, j: usize) -> &mut f64;
}

impl Perturb for LinearQSDE {
    fn entry(&mut self, t: Target, i: usize, j: usize) -> &mut f64 {
        match t {
            Target::A => &mut self.a[(i, j)],
            Target::C => &mut self.c[(i, j)],
            Target::A0 => unreachable!("linear systems have no A₀"),
        }
    }
}

impl Perturb for BilinearQSDE {
    fn entry(&mut self, t: Target, i: usize, j: usize) -> &mut f64 {
        match t {
            Target::A0 => &mut self.a0[i],
            Target::A => &mut self.a[(i, j)],
            Target::C => &mut self.c[(i, j)],
        }
    }
}

impl Perturb for CascadeQSDE {
    fn entry(&mut self, t: Target, i: usize, j: usize) -> &mut f64 {
        match t {
            Target::A0 => &mut self.a0[i],
            Target::A => &mut self.a[(i, j)],
            Target::C => &mut self.c[(i, j)],
        }
    }
}

const DELTA: f64 = 1e-3;
const CONTROL_TOL: f64 = 1e-4;

fn controls<Q: Perturb>(
    rng: &mut impl Rng,
    base: &Q,
    sites: &[Site],
    check: impl Fn(&Q) -> RealizabilityReport,
) -> Result<f64, String> {
    ensure(check(base).pass(), || "unperturbed system fails".into())?;
    let mut worst_ratio: f64 = 1.0;
    for _ in 0..10 {
        let s = &sites[rng.random_range(0..sites.len())];
        let (i, j) = pick(rng, s);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mut q = base.clone();
        *q.entry(s.target, i, j) += sign * DELTA;
        let rep = check(&q);
        ensure(rep.failing() == vec![s.expect], || {
            format!(
                "entry ({i},{j}) expected only {} to fail, got {:?}",
                s.expect,
                rep.failing()
            )
        })?;
        let r = rep.residual(s.expect).unwrap();
        let ratio = (r / DELTA).max(DELTA / r);
        ensure(ratio <= 10.0, || {
            format!("{}: residual {r:e} not within 10x of {DELTA:e}", s.expect)
        })?;
        worst_ratio = worst_ratio.max(ratio);
    }
    Ok(worst_ratio)
}

fn negative_controls() -> Outcome {
    let mut rng = rng(8);
    let lin = synthesize_linear(&random_linear(&mut rng, 2)).unwrap();
    let bil = synthesize_bilinear(&random_bilinear(&mut rng)).unwrap();
    let cas = synthesize_cascade(&random_cascade(&mut rng)).unwrap();
    let tol = CONTROL_TOL;
    let mut worst: f64 = 1.0;
    let mut record = |name: &str, r: Result<f64, String>| -> Result<(), String> {
        worst = worst.max(r.map_err(|e| format!("{name}: {e}"))?);
        Ok(())
    };

    record(
        "thm1",
        controls(&mut rng, &lin, &[diag((0, 4), "thm1")], |q| {
            check_ccr_linear(q, tol).unwrap()
        }),
    )?;
    record(
        "thm2",
        controls(
            &mut rng,
            &bil,
            &[
                site(Target::A0, (0, 3), (0, 1), "thm2.drift"),
                site(Target::A, (0, 3), (0, 3), "thm2.dissipation"),
            ],
            |q| check_ccr_bilinear(q, tol).unwrap(),
        ),
    )?;
    record(
        "thm3",
        controls(
            &mut rng,
            &cas,
            &[
                site(Target::A, (0, 2), (2, 5), "thm3.consistency"),
                site(Target::A, (2, 5), (0, 2), "thm3.structure"),
                site(Target::A0, (0, 2), (0, 1), "thm3.structure"),
                diag((0, 2), "thm3.x1/thm1"),
                site(Target::A, (2, 5), (2, 5), "thm3.x2/thm2.dissipation"),
                site(Target::A0, (2, 5), (0, 1), "thm3.x2/thm2.drift"),
            ],
            |q| check_ccr_mixed(q, tol).unwrap(),
        ),
    )?;
    record(
        "thm4",
        controls(
            &mut rng,
            &lin,
            &[
                diag((0, 4), "thm4.i"),
                site(Target::C, (0, 2), (0, 4), "thm4.ii"),
            ],
            |q| check_pr_linear(q, tol).unwrap(),
        ),
    )?;
    record(
        "thm5",
        controls(
            &mut rng,
            &bil,
            &[
                site(Target::A0, (0, 3), (0, 1), "thm5.i"),
                site(Target::A, (0, 3), (0, 3), "thm5.iv"),
            ],
            |q| check_pr_bilinear(q, tol).unwrap(),
        ),
    )?;
    record(
        "thm6",
        controls(
            &mut rng,
            &cas,
            &[
                site(Target::A, (0, 2), (2, 5), "thm6.consistency"),
                site(Target::A, (2, 5), (0, 2), "thm6.i"),
                diag((0, 2), "thm6.ii/thm4.i"),
                site(Target::C, (0, 2), (0, 2), "thm6.ii/thm4.ii"),
                site(Target::A, (2, 5), (2, 5), "thm6.iii/thm5.iv"),
                site(Target::A0, (2, 5), (0, 1), "thm6.iii/thm5.i"),
            ],
            |q| check_pr_cascade(q, tol, CShape::SeriesProduct).unwrap(),
        ),
    )?;
    Ok(format!(
        "60 perturbations of {DELTA:e}, each flipped exactly its condition; worst residual/size factor {worst:.2}"
    ))
}

fn literal_prefactor() -> Outcome {
    let corrected = synthesize_linear(&cavity()).map_err(|e| e.to_string())?;
    ensure(check_ccr_linear(&corrected, 1e-12).unwrap().pass(), || {
        "corrected model fails".into()
    })?;
    let literal = synthesize_linear_with_gain(&cavity(), 2.0).map_err(|e| e.to_string())?;
    let rep = check_ccr_linear(&literal, 1e-9).unwrap();
    let r = rep.residual("thm1").unwrap();
    ensure(!rep.pass() && r > 0.0, || {
        "doubled noise prefactor still passes".into()
    })?;
    ensure((r - 6.0 * SQRT2).abs() < 1e-12, || {
        format!("residual {r} differs from ‖−2J + 8J‖ = 6√2")
    })?;
    Ok(format!(
        "doubled prefactor fails with residual {r:.6} = ‖−κJ + 4κJ‖_F at κ = 2"
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "round-trip linear",
            Box::new(|| timed(Duration::from_secs(1), linear_round_trip)),
        ),
        (
            "round-trip bilinear",
            Box::new(|| timed(Duration::from_secs(1), bilinear_round_trip)),
        ),
        (
            "round-trip cascade",
            Box::new(|| timed(Duration::from_secs(2), cascade_round_trip)),
        ),
        (
            "realizable implies commutation-preserving",
            Box::new(corollary),
        ),
        ("damped cavity example", Box::new(cavity_example)),
        ("radiating two-level example", Box::new(two_level_example)),
        (
            "operator oracle agreement",
            Box::new(|| timed(Duration::from_secs(10), oracle_agreement)),
        ),
        ("negative controls", Box::new(negative_controls)),
        ("noise prefactor regression", Box::new(literal_prefactor)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({why})", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}

//! One PASS/FAIL line per acceptance criterion. Exits nonzero when a
//! criterion regresses; the known-red criteria must fail in their documented
//! way, anything else counts as a regression.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use toda2d::hierarchy::{integrate, toda_equation_check, FlowSpec, HamiltonianId};
use toda2d::brackets::Transcription;
use toda2d::sample::Sampler;
use toda2d::verify::{run, Config, Mode, Report, Suite};

const TOL_TODA_RESIDUAL: f64 = 1e-5;
const TOL_DRIFT: f64 = 1e-8;
const RATIO_BAND: (f64, f64) = (3.5, 4.5);
// Random data of unit size leaves the truncated t2 flow before t = 1.
const DRIFT_AMPLITUDE: f64 = 0.5;

struct Outcome {
    lines: Vec<String>,
    regressions: usize,
}

impl Outcome {
    fn line(&mut self, id: u8, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
        let in_time = elapsed <= limit;
        let status = if ok && in_time { "PASS" } else { "FAIL" };
        self.lines.push(format!(
            "{status} criterion {id} {name}: {detail} [{:.1}s of {}s]",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ));
    }

    fn note(&mut self, text: String) {
        self.lines.push(format!("     {text}"));
    }

    fn regression(&mut self, what: &str) {
        self.regressions += 1;
        self.lines.push(format!("     regression: {what}"));
    }
}

fn config(n: usize, samples: Option<usize>) -> Config {
    Config {
        n,
        depth: 4,
        depth_bar: 3,
        samples,
        mode: Mode::Exact,
        ..Config::default()
    }
}

fn timed(suite: Suite, cfg: &Config) -> (Report, Duration) {
    let start = Instant::now();
    let report = run(suite, cfg).expect("suite runs");
    (report, start.elapsed())
}

fn all_pass(report: &Report, pick: impl Fn(&str) -> bool) -> (bool, String) {
    let chosen: Vec<_> = report.records.iter().filter(|r| pick(&r.identity)).collect();
    let cases: usize = chosen.iter().map(|r| r.cases).sum();
    let failures: usize = chosen.iter().map(|r| r.failures).sum();
    let ok = !chosen.is_empty() && failures == 0;
    (ok, format!("{} identities, {cases} cases, {failures} nonzero", chosen.len()))
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() -> ExitCode {
    let mut out = Outcome {
        lines: Vec::new(),
        regressions: 0,
    };

    // 1 and 2 share one run over the random pairs and the |k| <= 3 basis.
    let (myb, t) = timed(Suite::Myb, &config(5, Some(100)));
    let (ok, d) = all_pass(&myb, |id| id.starts_with("yang-baxter"));
    out.line(1, "modified Yang-Baxter, R and A", ok, t, secs(30), &d);
    if !ok || t > secs(30) {
        out.regression("criterion 1");
    }
    let (ok, d) = all_pass(&myb, |id| !id.starts_with("yang-baxter"));
    out.line(2, "adjoint and skew-part identities", ok, t, secs(10), &d);
    if !ok || t > secs(10) {
        out.regression("criterion 2");
    }

    // 3: the third structure is red on the periodic lattice.
    let (red, t) = timed(Suite::Reduction, &config(7, Some(50)));
    let (p2_ok, _) = all_pass(&red, |id| id == "P2-oracle");
    let (p3_ok, d) = all_pass(&red, |id| id == "P2-oracle" || id == "P3-oracle");
    out.line(3, "reduced P2 and P3 against the Dirac oracle", p3_ok, t, secs(300), &d);
    let p3 = red.record(Suite::Reduction, "P3-oracle").expect("record");
    let obstructed = p3.failures == p3.cases
        && p3.detail.as_deref().is_some_and(|s| s.contains("image (obstruction"));
    out.note(format!("P2: {}", if p2_ok { "exact agreement" } else { "MISMATCH" }));
    out.note(format!(
        "P3: {} of {} samples have a periodic obstruction; {}",
        p3.failures,
        p3.cases,
        p3.detail.as_deref().unwrap_or("")
    ));
    let (kernel_ok, d) = all_pass(&red, |id| id == "P3-oracle-unobstructed-modulo-kernel");
    out.note(format!(
        "P3 on unobstructed covectors, modulo the oracle kernel: {} ({d})",
        if kernel_ok { "agrees" } else { "MISMATCH" }
    ));
    if !p2_ok || !obstructed || !kernel_ok || t > secs(300) {
        out.regression("criterion 3 no longer fails only through the periodic obstruction");
    }

    // 4: the corrected summation range; the printed one is reported as a finding.
    let (cross, t) = timed(Suite::Crosscheck, &config(7, Some(10)));
    let (ok, d) = all_pass(&cross, |_| true);
    out.line(4, "coordinate brackets against the tensor route", ok, t, secs(300), &d);
    if !ok || t > secs(300) {
        out.regression("criterion 4");
    }
    let printed_cfg = Config {
        transcription: Transcription::Printed,
        ..config(7, Some(1))
    };
    let printed = run(Suite::Crosscheck, &printed_cfg).expect("suite runs");
    let third = printed.record(Suite::Crosscheck, "P3-formula-vs-tensor").expect("record");
    out.note(format!(
        "printed range of the third (u, ubar) bracket: {} of {} mismatches; {}",
        third.failures,
        third.cases,
        third.detail.as_deref().unwrap_or("")
    ));
    if third.failures == 0 {
        out.regression("printed range no longer disagrees with the tensor route");
    }

    // 5
    let cfg = config(7, Some(200));
    let start = Instant::now();
    let jac = run(Suite::Jacobi, &cfg).expect("suite runs");
    let pen = run(Suite::Pencil, &cfg).expect("suite runs");
    let t = start.elapsed();
    let (a, da) = all_pass(&jac, |_| true);
    let (b, db) = all_pass(&pen, |_| true);
    out.line(5, "Jacobi identity and pencil compatibility", a && b, t, secs(600), &format!("{da}; pencil {db}"));
    if !(a && b) || t > secs(600) {
        out.regression("criterion 5");
    }

    // 6
    let (push, t) = timed(Suite::Pushforward, &config(7, None));
    let (ok, d) = all_pass(&push, |_| true);
    out.line(6, "shift push-forward of the reduced tensors", ok, t, secs(60), &d);
    if !ok || t > secs(60) {
        out.regression("criterion 6");
    }

    // 7
    let (rec, t) = timed(Suite::Recursion, &config(7, None));
    let (ok, d) = all_pass(&rec, |_| true);
    out.line(7, "tri-Hamiltonian recursion and Casimirs", ok, t, secs(120), &d);
    if !ok || t > secs(120) {
        out.regression("criterion 7");
    }

    // 8
    let (zs, t) = timed(Suite::Zs, &config(7, None));
    let (ok, d) = all_pass(&zs, |_| true);
    out.line(8, "zero-curvature equations", ok, t, secs(60), &d);
    if !ok || t > secs(60) {
        out.regression("criterion 8");
    }

    // 9
    let start = Instant::now();
    let (n, depth, depth_bar, step) = (32, 4, 2, 1e-3);
    let mut sampler = Sampler::new(1);
    let u = sampler.float_profile(n, 1.0);
    let base = sampler.float_state(n, depth, depth_bar, 1.0);
    let full = toda_equation_check(&u, &base, step).expect("toda check");
    let half = toda_equation_check(&u, &base, step / 2.0).expect("toda check");
    let ratio = full.relative_residual / half.relative_residual;
    let initial = sampler.float_state(n, depth, depth_bar, DRIFT_AMPLITUDE);
    let drift = |flow: FlowSpec, h: HamiltonianId| {
        let traj = integrate(&[(flow, 1.0, step)], &initial, &[h], 1).expect("integrates");
        traj.relative_drift()[0]
    };
    let d1 = drift(FlowSpec::t(1).unwrap(), HamiltonianId::h(1));
    let d2 = drift(FlowSpec::t(2).unwrap(), HamiltonianId::h(2));
    let t = start.elapsed();
    let ok = full.relative_residual < TOL_TODA_RESIDUAL
        && (RATIO_BAND.0..=RATIO_BAND.1).contains(&ratio)
        && d1 < TOL_DRIFT
        && d2 < TOL_DRIFT;
    let d = format!(
        "residual {:.2e} at step {step:e}, {:.2e} at half step, ratio {ratio:.2}; drift h1 {d1:.1e}, h2 {d2:.1e}",
        full.relative_residual, half.relative_residual
    );
    out.line(9, "numeric two-dimensional Toda", ok, t, secs(60), &d);
    if !ok || t > secs(60) {
        out.regression("criterion 9");
    }

    for l in &out.lines {
        println!("{l}");
    }
    if out.regressions == 0 {
        println!("acceptance: criteria behave as recorded (criterion 3 red by the periodic obstruction)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} regression(s)", out.regressions);
        ExitCode::FAILURE
    }
}

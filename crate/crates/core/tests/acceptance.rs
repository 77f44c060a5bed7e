//! Acceptance criteria A1-A12. Prints one PASS/FAIL line per criterion.
//!
//! `ACCEPTANCE_ONLY=A1,A4` restricts the run, `ACCEPTANCE_STRICT=1` turns any FAIL into a
//! non-zero exit status.

use activeflux_core::cases::*;
use activeflux_core::linalg::{self, CMat, C};
use activeflux_core::poly::{q, to_f64, Q};
use activeflux_core::reconstruction::{build_deriv_ops, reconstruct_eval, shape_value, ShapeBasis, Side};
use activeflux_core::scheme::dt_from_cfl;
use activeflux_core::spectral::{self, Problem, TranslationFactors, RANK_TOL};
use activeflux_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.a.iter().zip(&b.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Translation factors with phases bounded away from 0 and ±π.
fn generic_t(rng: &mut ChaCha8Rng, dim: usize) -> TranslationFactors {
    let mut beta = [0.0; 3];
    for b in beta.iter_mut().take(dim) {
        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        *b = s * rng.gen_range(0.15..PI - 0.15);
    }
    TranslationFactors::from_phases(beta)
}

fn a1() -> Outcome {
    let mut worst: f64 = 0.0;
    let setups: [(Problem, &[usize], [f64; 3], [f64; 3]); 3] = [
        (Problem::Advection1d, &[8], [0.125, 1.0, 1.0], [3.0, 0.0, 0.0]),
        (Problem::Acoustics2d, &[8, 8], [0.125, 0.1, 1.0], [1.0, 2.0, 0.0]),
        (Problem::Acoustics3d, &[4, 4, 4], [0.25, 0.3, 0.2], [1.0, 1.0, 1.0]),
    ];
    for (problem, n, h, wave) in setups {
        let d = problem.dim();
        let grid = GridSpec::new(d, n, &h[..d], &vec![0.0; d], Boundary::Periodic).map_err(|e| e.to_string())?;
        let mut k = [0.0; 3];
        for a in 0..d {
            k[a] = 2.0 * PI * wave[a] / (n[a] as f64 * h[a]);
        }
        let t = TranslationFactors::from_wave_vector(k, grid.h);
        for splitting in [Splitting::Upwind, Splitting::Central] {
            let sym = spectral::assemble_e(problem, splitting, 1.3, grid.h, &t).map_err(|e| e.to_string())?;
            let num = spectral::assemble_e_from_grid(problem, splitting, 1.3, &grid, wave).map_err(|e| e.to_string())?;
            worst = worst.max(max_abs_diff(&sym, &num) / sym.max_abs());
        }
    }
    check(worst <= 1e-12, format!("max relative entry difference {worst:.2e}"))
}

fn a2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases = [
        (Problem::Acoustics2d, Splitting::Upwind, 1),
        (Problem::Acoustics2d, Splitting::Central, 4),
        (Problem::Acoustics3d, Splitting::Upwind, 5),
    ];
    let mut report = Vec::new();
    let mut ok = true;
    for (problem, splitting, want) in cases {
        let h = [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
        let sym = spectral::symbol(problem, splitting, 1.0, h).map_err(|e| e.to_string())?;
        let mut dims = std::collections::BTreeSet::new();
        for _ in 0..50 {
            let t = generic_t(&mut rng, problem.dim());
            dims.insert(spectral::kernel_dim(&sym.eval(&t), RANK_TOL));
        }
        ok &= dims.len() == 1 && dims.contains(&want);
        report.push(format!("{} {} {:?}", problem.name(), splitting.name(), dims));
    }
    check(ok, report.join("; "))
}

fn a3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let h = [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
        let t2 = generic_t(&mut rng, 2);
        let e = spectral::assemble_e(Problem::Acoustics2d, Splitting::Upwind, 1.0, h, &t2).map_err(|e| e.to_string())?;
        for v in spectral::kernel_vector_closed_form(Problem::Acoustics2d, &t2, h).map_err(|e| e.to_string())? {
            worst = worst.max(spectral::relative_residual(&e, &v));
        }
        let t3 = generic_t(&mut rng, 3);
        let e = spectral::assemble_e(Problem::Acoustics3d, Splitting::Upwind, 1.0, h, &t3).map_err(|e| e.to_string())?;
        let mut vs = spectral::kernel_vector_closed_form(Problem::Acoustics3d, &t3, h).map_err(|e| e.to_string())?;
        vs.push(spectral::combined_mode_3d(&t3, h).map_err(|e| e.to_string())?);
        vs.push(spectral::combined_mode_3d_from_parts(&t3, h).map_err(|e| e.to_string())?);
        for v in vs {
            worst = worst.max(spectral::relative_residual(&e, &v));
        }
    }
    check(worst <= 1e-11, format!("max relative residual {worst:.2e}"))
}

fn a4() -> Outcome {
    let t = TranslationFactors::new([C::new(-1.0, 0.0), C::new(-1.0, 0.0), C::new(1.0, 0.0)]);
    let e = spectral::assemble_e(Problem::Acoustics2d, Splitting::Rusanov, 1.0, [1.0; 3], &t).map_err(|e| e.to_string())?;
    let det = spectral::det_e(&e);
    let want = spectral::rusanov_det_closed_form(1.0, 1.0, 1.0);
    let rel = (det - want).norm() / want.abs();
    let dim = spectral::kernel_dim(&e, RANK_TOL);
    check(
        rel <= 1e-9 && (want - 5_308_416.0).abs() < 1e-6 && dim == 0,
        format!("det {:.6} vs {want}, relative error {rel:.2e}, kernel dim {dim}", det.re),
    )
}

fn a5() -> Outcome {
    let adv = spectral::max_stable_dt(Problem::Advection1d, Splitting::Upwind, 1.0, [1.0; 3], 4096).map_err(|e| e.to_string())?;
    let ac = spectral::max_stable_dt(Problem::Acoustics2d, Splitting::Upwind, 1.0, [1.0; 3], 4096).map_err(|e| e.to_string())?;
    check(
        adv > 0.40 && adv < 0.43 && ac > 0.27 && ac < 0.31,
        format!("1-d advection CFL {adv:.4}, 2-d acoustics dt {ac:.4}"),
    )
}

fn order_line(rows: &[ConvergenceRow], var: usize) -> (f64, String) {
    let mut s = String::new();
    let mut last = f64::NAN;
    for w in rows.windows(2) {
        last = observed_order(w[0].l1[var], w[1].l1[var], w[0].h, w[1].h);
        s += &format!("{}->{}: {last:.3} ", w[0].n, w[1].n);
    }
    let errs: Vec<String> = rows.iter().map(|r| format!("{:.3e}", r.l1[var])).collect();
    (last, format!("errors [{}], orders {}", errs.join(", "), s.trim_end()))
}

fn a6() -> Outcome {
    let spec = CaseSpec::named("gaussian2d").map_err(|e| e.to_string())?;
    let rows = convergence_study(&spec, &[25, 50, 100], RADIAL_N).map_err(|e| e.to_string())?;
    let (order, line) = order_line(&rows, 2);
    check(order >= 2.7, line)
}

fn a7() -> Outcome {
    let spec = CaseSpec::named("gaussian3d").map_err(|e| e.to_string())?;
    let rows = convergence_study(&spec, &[10, 20], RADIAL_N).map_err(|e| e.to_string())?;
    let (order, line) = order_line(&rows, 3);
    check(order >= 2.2, line)
}

fn a8() -> Outcome {
    let mut spec = CaseSpec::named("vortex2d").map_err(|e| e.to_string())?;
    let max_steps = 200_000;
    spec.samples = 400;
    let grid = spec.default_grid().map_err(|e| e.to_string())?;
    let s0 = init_case(&spec, &grid).map_err(|e| e.to_string())?;
    let scale = s0.max_abs() / grid.min_h();
    let plan = StepPlan::new(&grid, &spec.model(), Some(spec.cfl), None, None, Some(max_steps)).map_err(|e| e.to_string())?;
    let mut reference = CaseReference::for_case(&spec, &s0, RADIAL_N).map_err(|e| e.to_string())?;
    let mut divs = Vec::new();
    let out = run_case(&spec, s0, plan, &mut reference, |row| divs.push(row.div.unwrap()));
    out.map_err(|e| e.to_string())?;
    let last = divs.last().unwrap();
    let prev = divs[divs.len() - 2];
    let seven = last.max() / scale;
    let control = last.control / scale;
    let control_change = (last.control - prev.control).abs() / last.control;
    let initial = divs[0].max() / scale;
    check(
        seven <= 1e-12 && control > 1e-8 && control_change <= 1e-6,
        format!(
            "{max_steps} steps: seven divergences {initial:.2e} -> {seven:.2e}, control {control:.2e} (last change {control_change:.1e}), relative to max|v0|/h"
        ),
    )
}

fn deviation_after(spec: &CaseSpec, grid: &GridSpec, steps: usize) -> Result<f64> {
    let s0 = init_case(spec, grid)?;
    let mut s = s0.clone();
    let mut st = Stepper::new(Scheme::new(spec.model(), spec.splitting, grid)?);
    let dt = dt_from_cfl(spec.cfl, grid, &spec.model());
    for _ in 0..steps {
        st.step(&mut s, dt)?;
    }
    let dev = s.as_slice().iter().zip(s0.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(dev / s0.max_abs())
}

fn a9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, steps) in [("wellprepared2d", 1000), ("mode3d", 500)] {
        let mut spec = CaseSpec::named(name).map_err(|e| e.to_string())?;
        let grid = spec.default_grid().map_err(|e| e.to_string())?;
        let good = deviation_after(&spec, &grid, steps).map_err(|e| e.to_string())?;
        spec.prep = Preparation::Pointwise;
        let bad = deviation_after(&spec, &grid, 100).map_err(|e| e.to_string())?;
        ok &= good <= 1e-8 && bad > 1e-3;
        lines.push(format!("{name}: well-prepared {good:.2e} after {steps} steps, pointwise {bad:.2e} after 100"));
    }
    check(ok, lines.join("; "))
}

fn random_state(rng: &mut ChaCha8Rng, grid: &GridSpec, m: usize) -> State {
    let n = grid.cells() * grid.n_kinds() * m;
    State::from_vec(grid.clone(), m, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn a10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut drift: f64 = 0.0;
    let mut lin: f64 = 0.0;
    let grids = [
        (GridSpec::cube(1, 17, 0.0, 1.0, Boundary::Periodic), Model::advection(1.0)),
        (GridSpec::new(2, &[9, 7], &[0.1, 0.13], &[0.0, 0.0], Boundary::Periodic), Model::acoustics(2, 1.0)),
        (GridSpec::cube(3, 5, 0.0, 1.0, Boundary::Periodic), Model::acoustics(3, 1.0)),
    ];
    for (grid, model) in grids {
        let grid = grid.map_err(|e| e.to_string())?;
        for splitting in [Splitting::Upwind, Splitting::Central, Splitting::Rusanov] {
            let scheme = Scheme::new(model, splitting, &grid).map_err(|e| e.to_string())?;
            let mut s = random_state(&mut rng, &grid, model.m());
            let m0 = total_average(&s);
            let scale = s.max_abs();
            let mut st = Stepper::new(scheme.clone());
            let dt = dt_from_cfl(0.1, &grid, &model);
            for _ in 0..1000 {
                st.step(&mut s, dt).map_err(|e| e.to_string())?;
            }
            for (a, b) in total_average(&s).iter().zip(&m0) {
                drift = drift.max((a - b).abs() / scale);
            }
            for _ in 0..20 {
                let x = random_state(&mut rng, &grid, model.m());
                let y = random_state(&mut rng, &grid, model.m());
                let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let mut z = x.clone();
                for (zi, yi) in z.as_mut_slice().iter_mut().zip(y.as_slice()) {
                    *zi = a * *zi + b * yi;
                }
                let (rx, ry, rz) = (scheme.rhs(&x).unwrap(), scheme.rhs(&y).unwrap(), scheme.rhs(&z).unwrap());
                let norm = rx.max_abs().max(ry.max_abs()) * (a.abs() + b.abs());
                for i in 0..rz.as_slice().len() {
                    let r = rz.as_slice()[i] - a * rx.as_slice()[i] - b * ry.as_slice()[i];
                    lin = lin.max(r.abs() / norm);
                }
            }
        }
    }
    check(drift <= 1e-13 && lin <= 1e-13, format!("mass drift {drift:.2e} per 1000 steps, linearity residual {lin:.2e}"))
}

fn a11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut notes = Vec::new();
    // unisolvence
    let mut uni: f64 = 0.0;
    for dim in [2, 3] {
        let b = ShapeBasis::new(dim);
        for r in 0..b.len() {
            let f = b.func(r).map_err(|e| e.to_string())?;
            let avg = to_f64(f.average()) - if b.point(r).is_none() { 1.0 } else { 0.0 };
            uni = uni.max(avg.abs());
            for s in 0..b.len() {
                if let Some(p) = b.point(s) {
                    let v = shape_value(&b, r, [to_f64(p[0]), to_f64(p[1]), to_f64(p[2])]).map_err(|e| e.to_string())?;
                    uni = uni.max((v - if r == s { 1.0 } else { 0.0 }).abs());
                }
            }
        }
    }
    notes.push(format!("unisolvence {uni:.1e}"));
    // reproduction of tensor quadratics
    let mut repro: f64 = 0.0;
    for dim in [2, 3] {
        let b = ShapeBasis::new(dim);
        for _ in 0..20 {
            let c: Vec<f64> = (0..27).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = |x: [f64; 3]| {
                let mut v = 0.0;
                for i in 0..27 {
                    let e = [i % 3, (i / 3) % 3, i / 9];
                    if (dim == 2 && e[2] > 0) || c[i] == 0.0 {
                        continue;
                    }
                    v += c[i] * x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32);
                }
                v
            };
            let avg: f64 = {
                let w = [(-0.5, 1.0 / 6.0), (0.0, 4.0 / 6.0), (0.5, 1.0 / 6.0)];
                let mut acc = 0.0;
                for i in 0..3usize.pow(dim as u32) {
                    let mut x = [0.0; 3];
                    let mut wt = 1.0;
                    for a in 0..dim {
                        let (s, wa) = w[(i / 3usize.pow(a as u32)) % 3];
                        x[a] = s;
                        wt *= wa;
                    }
                    acc += wt * f(x);
                }
                acc
            };
            let dofs: Vec<f64> = (0..b.len())
                .map(|r| match b.point(r) {
                    None => avg,
                    Some(p) => f([to_f64(p[0]), to_f64(p[1]), to_f64(p[2])]),
                })
                .collect();
            for _ in 0..10 {
                let mut x = [0.0; 3];
                for xa in x.iter_mut().take(dim) {
                    *xa = rng.gen_range(-0.5..0.5);
                }
                repro = repro.max((reconstruct_eval(&b, &dofs, x) - f(x)).abs());
            }
        }
    }
    notes.push(format!("reproduction {repro:.1e}"));
    // continuity across the shared edge of two neighbouring cells
    let grid = GridSpec::cube(2, 6, 0.0, 1.0, Boundary::Periodic).map_err(|e| e.to_string())?;
    let s = random_state(&mut rng, &grid, 1);
    let b = ShapeBasis::new(2);
    let mut cont: f64 = 0.0;
    for (cell, axis) in [([2i64, 3, 0], 0usize), ([4, 1, 0], 1)] {
        let mut nb = cell;
        nb[axis] += 1;
        let own = accessible_dofs(&s.field(0), cell).map_err(|e| e.to_string())?;
        let other = accessible_dofs(&s.field(0), nb).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let r = rng.gen_range(-0.5..0.5);
            let (mut p, mut pn) = ([0.0; 3], [0.0; 3]);
            p[axis] = 0.5;
            pn[axis] = -0.5;
            p[1 - axis] = r;
            pn[1 - axis] = r;
            cont = cont.max((reconstruct_eval(&b, &own, p) - reconstruct_eval(&b, &other, pn)).abs());
        }
    }
    notes.push(format!("edge continuity {cont:.1e}"));
    // Vandermonde of the broken divergence space at the eight point locations
    let pts: Vec<[f64; 3]> = (0..b.len()).filter_map(|r| b.point(r)).map(|p| [to_f64(p[0]), to_f64(p[1]), 0.0]).collect();
    let vm = CMat::from_fn(8, |i, j| {
        let [x, y, _] = pts[i];
        C::new([1.0, x, x * x, y, x * y, x * x * y, y * y, x * y * y][j], 0.0)
    });
    let det = linalg::det(&vm).norm();
    notes.push(format!("Vandermonde det {det:.3e}"));
    // node derivative stencils
    let t = build_deriv_ops(2, &[1.0, 1.0]);
    let stencil = |axis: usize, side: Side| {
        let mut v: Vec<(Kind, [i32; 3], Q)> = t.get(Kind::N, axis, side).stencil.iter().map(|e| (e.kind, e.shift, e.coeff)).collect();
        v.sort();
        v
    };
    let sorted = |mut v: Vec<(Kind, [i32; 3], Q)>| {
        v.sort();
        v
    };
    let want = [
        (0, Side::Own, sorted(vec![(Kind::N, [0, 0, 0], q(3, 1)), (Kind::EH, [0, 0, 0], q(-4, 1)), (Kind::N, [-1, 0, 0], q(1, 1))])),
        (0, Side::Neighbor, sorted(vec![(Kind::N, [0, 0, 0], q(-3, 1)), (Kind::EH, [1, 0, 0], q(4, 1)), (Kind::N, [1, 0, 0], q(-1, 1))])),
        (1, Side::Own, sorted(vec![(Kind::N, [0, 0, 0], q(3, 1)), (Kind::EV, [0, 0, 0], q(-4, 1)), (Kind::N, [0, -1, 0], q(1, 1))])),
        (1, Side::Neighbor, sorted(vec![(Kind::N, [0, 0, 0], q(-3, 1)), (Kind::EV, [0, 1, 0], q(4, 1)), (Kind::N, [0, 1, 0], q(-1, 1))])),
    ];
    let stencils_ok = want.iter().all(|(axis, side, w)| &stencil(*axis, *side) == w);
    notes.push(format!("node stencils {}", if stencils_ok { "match" } else { "differ" }));
    // full symbol against the printed evolution matrices
    let mut table: f64 = 0.0;
    for _ in 0..10 {
        let h = [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
        for problem in [Problem::Acoustics2d, Problem::Acoustics3d] {
            let t = generic_t(&mut rng, problem.dim());
            let a = spectral::assemble_e(problem, Splitting::Upwind, 1.0, h, &t).map_err(|e| e.to_string())?;
            let b = spectral::closed_form_e(problem, 1.0, h, &t).map_err(|e| e.to_string())?;
            table = table.max(max_abs_diff(&a, &b) / a.max_abs());
        }
    }
    notes.push(format!("symbol vs printed matrices {table:.1e}"));
    check(uni <= 1e-13 && repro <= 1e-13 && cont <= 1e-13 && det > 1e-8 && stencils_ok && table <= 1e-12, notes.join(", "))
}

fn a12() -> Outcome {
    let spec = CaseSpec::named("vortexring").map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let eps = 1e-5;
    let mut spot: f64 = 0.0;
    let mut checked = 0;
    while checked < 1000 {
        let x: [f64; 3] = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let r = (x[0].hypot(x[1]) - RING_R).hypot(x[2]);
        // the profile has kinks at these radii
        if (r - 0.1).abs() < 1e-3 || (r - 0.2).abs() < 1e-3 || x[0].hypot(x[1]) < 1e-3 {
            continue;
        }
        let mut div = 0.0;
        for a in 0..3 {
            let (mut p, mut m) = (x, x);
            p[a] += eps;
            m[a] -= eps;
            div += (vortex_ring_velocity(p)[a] - vortex_ring_velocity(m)[a]) / (2.0 * eps);
        }
        spot = spot.max(div.abs());
        checked += 1;
    }
    let grid = spec.default_grid().map_err(|e| e.to_string())?;
    let s0 = init_case(&spec, &grid).map_err(|e| e.to_string())?;
    let v0 = s0.max_abs();
    let plan = StepPlan::new(&grid, &spec.model(), Some(spec.cfl), None, Some(spec.t_end), None).map_err(|e| e.to_string())?;
    let mut reference = CaseReference::for_case(&spec, &s0, RADIAL_N).map_err(|e| e.to_string())?;
    let out = run_case(&spec, s0, plan, &mut reference, |_| {}).map_err(|e| e.to_string())?;
    let vmax = out.state.max_abs();
    let curve: Vec<f64> = out.series.iter().map(|r| r.l1.iter().sum()).collect();
    let tail = &curve[curve.len() - curve.len() / 10..];
    let (lo, hi) = tail.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let var = (hi - lo) / hi;
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let spread = tail.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean;
    check(
        spot <= 1e-6 && vmax <= 2.0 * v0 && var <= 0.01,
        format!(
            "analytic divergence {spot:.1e}; {} steps, max |q| {vmax:.3} (initial {v0:.3}), final-10% L1 variation {:.2}% at L1 {hi:.3e} (max deviation from the tail mean {:.2}%)",
            out.steps,
            100.0 * var,
            100.0 * spread
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 12] = [
        ("A1", a1, 10),
        ("A2", a2, 30),
        ("A3", a3, 30),
        ("A4", a4, 1),
        ("A5", a5, 120),
        ("A6", a6, 300),
        ("A7", a7, 600),
        ("A8", a8, 900),
        ("A9", a9, 600),
        ("A10", a10, 60),
        ("A11", a11, 10),
        ("A12", a12, 900),
    ];
    let only: Option<Vec<String>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    let strict = std::env::var("ACCEPTANCE_STRICT").map(|v| v == "1").unwrap_or(false);
    let mut failed = 0;
    for (id, f, limit) in criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|x| x == id)) {
            continue;
        }
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(limit);
        let (status, detail) = match res {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; exceeded the {limit} s budget")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{id} {status} ({:.1} s) {detail}", took.as_secs_f64());
    }
    println!("{failed} criteria failed");
    if strict && failed > 0 {
        std::process::exit(1);
    }
}

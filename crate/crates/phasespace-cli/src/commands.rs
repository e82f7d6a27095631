//! One function per subcommand.

use std::f64::consts::PI;

use phasespace::numerics::PhaseGrid;
use phasespace::propagators::{
    circle_damping, gaussian_kernel, gelfand_yaglom, propagate, Family, GaussianKernel, PropagatorSpec,
    QuadraticModel, DEFAULT_GY_STEPS,
};
use phasespace::star::{star_genvalue_residual, star_integral, star_kernel, star_path, star_poly, PolySymbol};
use phasespace::starexp::{
    project_level, star_exp_field, wigner_continuous, wigner_continuous_extrapolated, ClosedFamily, Route,
    StarExponentialClosedForm,
};
use phasespace::validate::{run_criterion, Bound, Suite};
use phasespace::weyl::SampledSymbol;
use phasespace::{Complex64, Error};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{emit, emit_json, Metadata, Table};

/// Failure of a subcommand, mapped to an exit code by `main`.
#[derive(Debug)]
pub enum Failure {
    /// Bad configuration or I/O: exit 2.
    Config(String),
    /// Numerical-domain error such as a caustic: exit 3.
    Domain(String),
    /// A criterion failed: exit 1.
    Criteria(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("i/o: {e}"))
    }
}

type Outcome = Result<(), Failure>;

/// Times closer than this to an oscillator caustic are refused. Wider than
/// the library's window because decimal inputs such as 3.14159 stand for pi.
pub const CLI_CAUSTIC_WINDOW: f64 = 1e-5;

fn caustic_guard(omega: f64, t: f64, odd_only: bool) -> Outcome {
    if t == 0.0 {
        return Ok(());
    }
    let step = if odd_only { 2.0 * PI } else { PI };
    let offset = if odd_only { PI } else { 0.0 };
    let wt = omega * t - offset;
    let k = (wt / step).round();
    if (wt - k * step).abs() < CLI_CAUSTIC_WINDOW {
        return Err(Failure::Domain(format!(
            "omega t = {} lies within {CLI_CAUSTIC_WINDOW:e} of a caustic",
            omega * t
        )));
    }
    Ok(())
}

/// The circle's angle axis defaults to one period.
fn grid_of(g: &GridArgs, hbar: f64, family: Option<FamilyName>) -> Result<PhaseGrid, Failure> {
    let half = if family == Some(FamilyName::Circle) { PI } else { 8.0 };
    Ok(PhaseGrid::new(g.x_min.unwrap_or(-half), g.x_max.unwrap_or(half), g.n_x, hbar)?)
}

fn grid_json(g: &PhaseGrid) -> Value {
    json!({ "x_min": g.x_min(), "x_max": g.x_max(), "n_x": g.n(), "dx": g.dx(), "dp": g.dp() })
}

fn closed_family(f: &FamilyArgs, hbar: f64) -> Result<StarExponentialClosedForm, Failure> {
    let family = match f.family {
        FamilyName::Free => ClosedFamily::Free { m: f.m },
        FamilyName::Ho => ClosedFamily::HarmonicOscillator { m: f.m, omega: f.omega },
        FamilyName::Linear => ClosedFamily::Linear,
        FamilyName::Circle => ClosedFamily::Circle { inertia: f.inertia, n_max: f.nmax },
        FamilyName::Quadratic => {
            return Err(Failure::Config("the quadratic family has no closed-form star exponential".into()))
        }
    };
    Ok(StarExponentialClosedForm::new(family, hbar)?)
}

fn family_params(meta: &mut Metadata, f: &FamilyArgs) {
    match f.family {
        FamilyName::Free => meta.param("m", f.m),
        FamilyName::Ho => {
            meta.param("m", f.m);
            meta.param("omega", f.omega);
        }
        FamilyName::Linear => meta.param("hamiltonian", "p^2 + q"),
        FamilyName::Circle => {
            meta.param("inertia", f.inertia);
            meta.param("nmax", f.nmax);
        }
        FamilyName::Quadratic => meta.param("m", f.m),
    }
}

fn field_table(s: &SampledSymbol, extra: Option<&SampledSymbol>) -> Table {
    let mut t = Table::new(if extra.is_some() { &["q", "p", "re", "im", "residual"] } else { &["q", "p", "re", "im"] });
    let g = s.grid;
    for i in 0..g.n() {
        for l in 0..g.n() {
            let v = s.values[(i, l)];
            let mut row = vec![g.x(i), g.p(l), v.re, v.im];
            if let Some(e) = extra {
                row.push(e.values[(i, l)].re);
            }
            t.push(row);
        }
    }
    t
}

fn finite(name: &str, v: f64) -> Outcome {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Config(format!("{name} must be finite")))
    }
}

pub fn wigner(a: &WignerArgs) -> Outcome {
    let hb = a.common.hbar;
    let grid = grid_of(&a.grid, hb, Some(a.family.family))?;
    let cf = closed_family(&a.family, hb)?;
    let mut meta = Metadata::new(cf.name(), hb, grid_json(&grid));
    family_params(&mut meta, &a.family);
    let rho = match cf.family {
        ClosedFamily::HarmonicOscillator { .. } | ClosedFamily::Circle { .. } => {
            let n = a.n.ok_or_else(|| Failure::Config("--n is required for discrete spectra".into()))?;
            meta.param("n", n);
            let slice = project_level(&cf, n, grid)?;
            meta.diag("energy", slice.energy());
            if matches!(cf.family, ClosedFamily::Circle { .. }) && n != 0 {
                meta.diag("degenerate_pair", json!([-n.abs(), n.abs()]));
            }
            slice.rho().clone()
        }
        _ => {
            let e = a.energy.ok_or_else(|| Failure::Config("--energy is required for continuous spectra".into()))?;
            finite("--energy", e)?;
            meta.param("energy", e);
            match a.eps {
                Some(eps) => {
                    let window = a.t_window.unwrap_or(5.0 / eps);
                    meta.param("eps", eps);
                    meta.param("t_window", window);
                    wigner_continuous(&cf, e, grid, window, eps)?
                }
                None => {
                    meta.diag("eps_extrapolated_from", 0.08);
                    wigner_continuous_extrapolated(&cf, e, grid, 0.08)?
                }
            }
        }
    };
    meta.diag("norm", rho.integral().re);
    meta.diag("max_imag", rho.max_imag());
    meta.diag("max_abs", rho.max_abs());
    emit(a.common.out.as_deref(), a.common.format, &field_table(&rho, None), &meta)?;
    Ok(())
}

pub fn starexp(a: &StarexpArgs) -> Outcome {
    let hb = a.common.hbar;
    finite("--t", a.t)?;
    let grid = grid_of(&a.grid, hb, Some(a.family.family))?;
    let cf = closed_family(&a.family, hb)?;
    if let ClosedFamily::HarmonicOscillator { omega, .. } = cf.family {
        caustic_guard(omega, a.t, true)?;
    }
    let route = match a.route {
        RouteName::Fresnel => Route::Fresnel,
        RouteName::Fft => Route::Fft,
    };
    let num = star_exp_field(&cf.spec(), grid, a.t, route)?;
    // circle propagators are evaluated at a damped time
    let tc = match cf.family {
        ClosedFamily::Circle { inertia, n_max } => Complex64::new(a.t, -circle_damping(inertia, n_max, hb)),
        _ => a.t.into(),
    };
    let exact = cf.sample(grid, tc)?;
    let residual = num.sub(&exact)?.map(|v| v.norm().into());
    let mut meta = Metadata::new(cf.name(), hb, grid_json(&grid));
    family_params(&mut meta, &a.family);
    meta.param("t", a.t);
    meta.param("route", if route == Route::Fresnel { "fresnel" } else { "fft" });
    meta.diag("max_residual", residual.max_abs());
    meta.diag("interior_max_residual", residual.interior_max_abs());
    if tc.im != 0.0 {
        meta.diag("damped_time_im", tc.im);
    }
    emit(a.common.out.as_deref(), a.common.format, &field_table(&num, Some(&residual)), &meta)?;
    Ok(())
}

/// A polynomial in `t` with real coefficients; `omega2` is replaced by `m omega^2`.
pub fn time_polynomial(text: &str, m: f64, omega: f64) -> Result<PolySymbol, Failure> {
    let k = m * omega * omega;
    let src = text.replace("omega2", &format!("({k:e})"));
    if src.contains(['x', 'q', 'p']) {
        return Err(Failure::Config(format!("'{text}' may only use the variable t")));
    }
    let poly = PolySymbol::parse(&src.replace('t', "x"), 1.0)?;
    if !poly.is_real() {
        return Err(Failure::Config(format!("'{text}' must have real coefficients")));
    }
    Ok(poly)
}

fn kernel_json(k: &GaussianKernel) -> Value {
    let c = |v: Complex64| json!([v.re, v.im]);
    json!({ "pref": c(k.pref), "a": c(k.a), "b": c(k.b), "c": c(k.c), "d": c(k.d), "e": c(k.e), "f": c(k.f) })
}

pub fn propagator(a: &PropagatorArgs) -> Outcome {
    let hb = a.common.hbar;
    finite("--t", a.t)?;
    let grid = grid_of(&a.grid, hb, Some(a.family.family))?;
    let fam = &a.family;
    let mut meta = Metadata::new(format!("{:?}", fam.family).to_lowercase(), hb, grid_json(&grid));
    family_params(&mut meta, fam);
    meta.param("t", a.t);
    let family = match fam.family {
        FamilyName::Free => Family::Free { m: fam.m },
        FamilyName::Ho => {
            caustic_guard(fam.omega, a.t, false)?;
            Family::HarmonicOscillator { m: fam.m, omega: fam.omega }
        }
        FamilyName::Linear => Family::LinearPotential,
        FamilyName::Circle => Family::Circle { inertia: fam.inertia, n_max: fam.nmax },
        FamilyName::Quadratic => {
            let c = time_polynomial(&a.c, fam.m, fam.omega)?;
            let f = time_polynomial(&a.f, fam.m, fam.omega)?;
            meta.param("c", c.to_string().replace('x', "t"));
            meta.param("f", f.to_string().replace('x', "t"));
            let model = QuadraticModel::new(fam.m, move |t| c.eval(t, 0.0).re, move |t| f.eval(t, 0.0).re)?;
            match a.slices {
                Some(slices) => {
                    meta.param("slices", slices);
                    Family::Sliced { model, slices }
                }
                None => Family::Quadratic(model),
            }
        }
    };
    let spec = PropagatorSpec::new(family, hb)?;
    if let Family::Sliced { model, .. } = &spec.family {
        let sliced = gaussian_kernel(&spec, a.t.into())?;
        let gy = gelfand_yaglom(model, a.t, DEFAULT_GY_STEPS, hb)?;
        meta.diag("gy_residual", sliced.max_rel_diff(&gy.kernel));
        meta.diag("maslov", gy.maslov);
        meta.diag("gy_coefficients", kernel_json(&gy.kernel));
    }
    if !matches!(spec.family, Family::Circle { .. }) {
        meta.diag("coefficients", kernel_json(&gaussian_kernel(&spec, a.t.into())?));
    }
    let mut table = Table::new(&["xf", "x0", "re", "im"]);
    let xs = grid.xs();
    for &xf in &xs {
        for &x0 in &xs {
            let k = propagate(&spec, xf, a.t, x0)?;
            table.push(vec![xf, x0, k.re, k.im]);
        }
    }
    emit(a.common.out.as_deref(), a.common.format, &table, &meta)?;
    Ok(())
}

fn coefficient_table(p: &PolySymbol) -> Value {
    p.terms()
        .map(|(a, b, c)| json!({ "x_power": a, "p_power": b, "re": c.re, "im": c.im }))
        .collect()
}

pub fn star(a: &StarArgs) -> Outcome {
    let hb = a.common.hbar;
    let f = PolySymbol::parse(&a.f, hb)?;
    let g = PolySymbol::parse(&a.g, hb)?;
    let exact = star_poly(&f, &g)?;
    if a.route == StarRoute::Poly {
        let doc = json!({
            "route": "poly",
            "hbar": hb,
            "f": f.to_string(),
            "g": g.to_string(),
            "product": exact.to_string(),
            "coefficients": coefficient_table(&exact),
            "version": env!("CARGO_PKG_VERSION"),
        });
        emit_json(a.common.out.as_deref(), &doc)?;
        return Ok(());
    }
    let grid = grid_of(&a.grid, hb, None)?;
    let (edge, soft) = (a.taper_edge, a.taper_soft);
    if !(edge > 0.5 && edge < 1.0 && soft > 0.0) {
        return Err(Failure::Config("taper edge must lie in (0.5, 1) and soft width be positive".into()));
    }
    let (fs, gs) = (f.sample_tapered(grid, edge, soft), g.sample_tapered(grid, edge, soft));
    let (name, prod) = match a.route {
        StarRoute::Kernel => ("kernel", star_kernel(&fs, &gs)?),
        StarRoute::Integral => ("integral", star_integral(&fs, &gs)?),
        StarRoute::Path => ("path", star_path(&fs, &gs)?),
        StarRoute::Poly => unreachable!(),
    };
    let mut meta = Metadata::new("polynomial", hb, grid_json(&grid));
    meta.param("f", f.to_string());
    meta.param("g", g.to_string());
    meta.param("route", name);
    meta.param("taper", json!({ "edge": edge, "soft": soft }));
    let reference = exact.sample(grid);
    let diff = prod.interior_diff(&reference)?;
    meta.diag("interior_diff_from_poly", diff);
    meta.diag("interior_rel_diff_from_poly", diff / reference.interior_max_abs());
    emit(a.common.out.as_deref(), a.common.format, &field_table(&prod, None), &meta)?;
    Ok(())
}

pub fn spectrum(a: &SpectrumArgs) -> Outcome {
    let hb = a.common.hbar;
    let grid = grid_of(&a.grid, hb, Some(a.family.family))?;
    let cf = closed_family(&a.family, hb)?;
    let ham = match cf.family {
        ClosedFamily::HarmonicOscillator { m, omega } => PolySymbol::harmonic(m, omega, hb),
        ClosedFamily::Circle { inertia, .. } => {
            PolySymbol::monomial((1.0 / (2.0 * inertia)).into(), 0, 2, hb)?
        }
        _ => return Err(Failure::Config(format!("{} has a continuous spectrum", cf.name()))),
    };
    let mut table = Table::new(&["n", "energy", "norm", "genvalue_residual"]);
    for n in 0..a.levels as i64 {
        let s = project_level(&cf, n, grid)?;
        let r = star_genvalue_residual(&ham, s.rho(), s.energy())?;
        table.push(vec![n as f64, s.energy(), s.rho().integral().re, r]);
    }
    let mut meta = Metadata::new(cf.name(), hb, grid_json(&grid));
    family_params(&mut meta, &a.family);
    meta.param("levels", a.levels);
    emit(a.common.out.as_deref(), a.common.format, &table, &meta)?;
    Ok(())
}

pub fn validate(a: &ValidateArgs) -> Outcome {
    let suite = match a.suite {
        SuiteName::Quick => Suite::Quick,
        SuiteName::Full => Suite::Full,
    };
    let ids: Vec<u8> = match a.criterion {
        Some(id) => vec![id],
        None => (1..=10).collect(),
    };
    let mut failed = 0;
    let mut checks = Vec::new();
    for id in ids {
        let r = run_criterion(id, suite, a.seed);
        println!("{}", r.summary());
        if !r.passed() {
            failed += 1;
        }
        let measurements: Vec<Value> = r
            .measurements
            .iter()
            .map(|m| {
                let bound = match m.bound {
                    Bound::AtMost(l) => json!({ "at_most": l }),
                    Bound::Near { target, tol } => json!({ "target": target, "tol": tol }),
                    Bound::Report => json!("report"),
                };
                json!({ "name": m.name, "value": m.value, "bound": bound, "passed": m.passed() })
            })
            .collect();
        checks.push(json!({
            "id": r.id,
            "title": r.title,
            "passed": r.passed(),
            "elapsed_s": r.elapsed_s,
            "budget_s": r.budget_s,
            "error": r.error,
            "measurements": measurements,
        }));
    }
    if let Some(out) = &a.out {
        let doc = json!({
            "suite": format!("{:?}", a.suite).to_lowercase(),
            "seed": a.seed,
            "passed": failed == 0,
            "criteria": checks,
            "version": env!("CARGO_PKG_VERSION"),
        });
        emit_json(Some(out), &doc)?;
    }
    if failed > 0 {
        Err(Failure::Criteria(failed))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_polynomials() {
        let c = time_polynomial("omega2*(1 + 0.5*t^2)", 2.0, 3.0).unwrap();
        assert!((c.eval(2.0, 0.0).re - 18.0 * 3.0).abs() < 1e-12);
        assert!(matches!(time_polynomial("x + t", 1.0, 1.0), Err(Failure::Config(_))));
        assert!(matches!(time_polynomial("i*t", 1.0, 1.0), Err(Failure::Config(_))));
    }

    #[test]
    fn caustic_windows() {
        assert!(caustic_guard(1.0, 3.14159, true).is_err());
        assert!(caustic_guard(1.0, 3.1, true).is_ok());
        assert!(caustic_guard(1.0, 2.0 * PI, true).is_ok());
        assert!(caustic_guard(1.0, 2.0 * PI, false).is_err());
        assert!(caustic_guard(2.0, 1.0, false).is_ok());
    }
}

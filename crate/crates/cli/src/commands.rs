use erlangen::binary_forms::{
    cubic_covariants, hessian, quartic_covariants, quartic_square_members, roots_on_sphere, BinaryForm,
};
use erlangen::contact::{builtin_contact_map, is_contact_transformation};
use erlangen::fixtures::{format_scalar, serialize_report, Report};
use erlangen::groups::{builtin_group, check_group_axioms_with_tol, invariance_test, orbit_sample, Configuration};
use erlangen::moebius::ExtendedComplex;
use erlangen::properties::{builtin_property, named_metric};
use erlangen::transfers::pluecker::klein_residual;
use erlangen::transfers::{
    circle_to_coords, inverse_stereographic, moebius_to_sphere, pluecker_embed, stereographic, ConicParametrization,
    Orientation, SpherePoint,
};
use erlangen::{Error, MoebiusMap, ProjPoint, Result, Scalar};

use crate::args::{Command, RunArgs};
use crate::input::{expect_len, parse_reals, parse_scalars, resolve};
use crate::output::{list, real, real_list, ValueReport};

/// Tolerance for contact-check when neither flag nor config sets one.
pub const CONTACT_TOLERANCE: f64 = 1e-6;

/// Tolerance for axioms when neither flag nor config sets one.
pub const AXIOM_TOLERANCE: f64 = 1e-8;

/// A finished run: the report text and whether its verdict was favourable.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn finish(r: &dyn Report, ok: bool) -> Outcome {
    Outcome { text: serialize_report(r), ok }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::CheckInvariance { group, property, metric, run } => {
            check_invariance(group.as_deref(), property, metric.as_deref(), run)
        }
        Command::Distance { metric, p, q } => distance(metric, p, q),
        Command::Transfer { map, input, conjugating } => transfer(map, input, *conjugating),
        Command::Covariants { form } => covariants(form),
        Command::ContactCheck { map, run } => contact_check(map, run),
        Command::Orbit { group, point, count, run } => orbit(group.as_deref(), point, *count, run),
        Command::Axioms { group, run } => axioms(group.as_deref(), run),
    }
}

fn check_invariance(group: Option<&str>, property: &str, metric: Option<&str>, run: &RunArgs) -> Result<Outcome> {
    let cfg = resolve(run, group)?;
    let g = builtin_group(&cfg.group, cfg.dimension)?;
    let prop = builtin_property(property, metric, cfg.dimension)?;
    let len = g.point_len();
    let sampler = |s: u64| prop.sample(len, s);
    let v = invariance_test(prop.as_ref(), g.as_ref(), &sampler, cfg.seed, cfg.trials, cfg.tolerance)?;
    Ok(finish(&v, v.is_invariant()))
}

fn distance(metric: &str, p: &str, q: &str) -> Result<Outcome> {
    let p = parse_reals(p)?;
    let q = parse_reals(q)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    let m = named_metric(metric, p.len())?;
    let d = m.distance(&ProjPoint::affine(&p)?, &ProjPoint::affine(&q)?)?;
    let r = ValueReport::new("ok").line("metric", metric).line("distance", format_scalar(d));
    Ok(finish(&r.field("distance", format_scalar(d)), true))
}

fn extended(z: &ExtendedComplex) -> String {
    match z {
        ExtendedComplex::Finite(w) => format_scalar(*w),
        ExtendedComplex::Infinity => "inf".to_string(),
    }
}

fn sphere(p: &SpherePoint) -> String {
    real_list(&[p.x, p.y, p.z])
}

fn transfer(map: &str, input: &str, conjugating: bool) -> Result<Outcome> {
    let r = ValueReport::new("ok").line("map", map);
    let r = match map {
        "stereographic" => {
            let v = expect_len(parse_reals(input)?, 3, "input")?;
            let p = SpherePoint::new(v[0], v[1], v[2])?;
            r.line("image", extended(&stereographic(&p)))
        }
        "inverse-stereographic" => {
            let z = if input.trim() == "inf" {
                ExtendedComplex::Infinity
            } else {
                let v = expect_len(parse_reals(input)?, 2, "input")?;
                ExtendedComplex::finite(v[0], v[1])
            };
            let p = inverse_stereographic(&z);
            let (lat, lon) = p.lat_lon_degrees();
            r.line("image", sphere(&p)).line("latitude", real(lat)).line("longitude", real(lon))
        }
        "pluecker" => {
            let v = expect_len(parse_reals(input)?, 8, "input")?;
            let line = pluecker_embed(&ProjPoint::from_real(&v[..4])?, &ProjPoint::from_real(&v[4..])?)?;
            r.line("image", list(line.coords().iter())).line("klein-residual", real(klein_residual(line.coords())))
        }
        "circle" => {
            let v = parse_reals(input)?;
            let orientation = match v.len() {
                3 => Orientation::Positive,
                4 if v[3] < 0.0 => Orientation::Negative,
                4 => Orientation::Positive,
                n => {
                    return Err(Error::Validation {
                        field: "input".into(),
                        message: format!("expected 3 or 4 values, got {n}"),
                    })
                }
            };
            let c = circle_to_coords(Scalar::new(v[0], v[1]), v[2], orientation)?;
            r.line("image", list(c.coords().iter()))
        }
        "moebius-sphere" => {
            let v = expect_len(parse_scalars(input)?, 4, "input")?;
            let m = MoebiusMap::new(v[0], v[1], v[2], v[3], conjugating)?;
            let s = moebius_to_sphere(&m)?;
            let rows: Vec<String> = s.matrix().row_iter().map(|row| list(row.iter())).collect();
            r.line("image", format!("[{}]", rows.join(", ")))
        }
        "conic" => {
            let t = if input.trim() == "inf" {
                ExtendedComplex::Infinity
            } else {
                let v = expect_len(parse_scalars(input)?, 1, "input")?;
                ExtendedComplex::Finite(v[0])
            };
            let conic = erlangen::transfers::conic::unit_circle_conic();
            let center = ProjPoint::from_real(&[-1.0, 0.0, 1.0])?;
            let p = ConicParametrization::new(&conic, &center)?.point(&t);
            r.line("image", list(p.normalized().iter()))
        }
        other => return Err(Error::Unknown { what: "transfer map", name: other.to_string() }),
    };
    Ok(finish(&r, true))
}

fn roots_line(f: &BinaryForm) -> Result<String> {
    let roots = roots_on_sphere(f)?;
    let parts: Vec<String> = roots
        .points
        .iter()
        .map(|p| {
            let (lat, lon) = p.lat_lon_degrees();
            format!("({}, {})", real(lat), real(lon))
        })
        .collect();
    Ok(format!("[{}]", parts.join(", ")))
}

fn covariants(form: &str) -> Result<Outcome> {
    let f = BinaryForm::new(parse_scalars(form)?)?;
    let mut r = ValueReport::new("ok")
        .line("form", list(f.coeffs()))
        .line("degree", f.degree().to_string())
        .field("degree", f.degree());
    if f.degree() >= 1 {
        r = r.line("roots (lat, lon)", roots_line(&f)?);
    }
    match f.degree() {
        3 => {
            let c = cubic_covariants(&f)?;
            r = r.line("delta", list(c.delta.coeffs())).line("q", list(c.q.coeffs())).line("r", format_scalar(c.r));
            if !c.q.is_zero(0.0) {
                r = r.line("q roots (lat, lon)", roots_line(&c.q)?);
            }
        }
        4 => {
            let c = quartic_covariants(&f)?;
            r = r
                .line("h", list(c.h.coeffs()))
                .line("t", list(c.t.coeffs()))
                .line("i", format_scalar(c.i))
                .line("j", format_scalar(c.j));
            if let Ok(members) = quartic_square_members(&f) {
                for (k, m) in members.iter().enumerate() {
                    r = r
                        .line(&format!("square {k} lambda"), format_scalar(m.lambda))
                        .line(&format!("square {k} root"), list(m.root.coeffs()));
                }
            }
        }
        d if d >= 2 => r = r.line("hessian", list(hessian(&f)?.coeffs())),
        _ => {}
    }
    Ok(finish(&r, true))
}

fn contact_check(map: &str, run: &RunArgs) -> Result<Outcome> {
    let mut run = run.clone();
    if run.config.is_none() && run.tolerance.is_none() {
        run.tolerance = Some(CONTACT_TOLERANCE);
    }
    let cfg = resolve(&run, None)?;
    let m = builtin_contact_map(map)?;
    let v = is_contact_transformation(m.as_ref(), cfg.seed, cfg.trials, cfg.tolerance)?;
    Ok(finish(&v, v.is_contact()))
}

fn orbit_point(point_len: usize, input: &str) -> Result<ProjPoint> {
    let v = parse_reals(input)?;
    match point_len {
        2 => {
            let v = expect_len(v, 2, "point")?;
            Ok(ExtendedComplex::finite(v[0], v[1]).to_point())
        }
        5 => {
            let v = expect_len(v, 3, "point")?;
            Ok(circle_to_coords(Scalar::new(v[0], v[1]), v[2], Orientation::Positive)?.to_point())
        }
        n => ProjPoint::affine(&expect_len(v, n - 1, "point")?),
    }
}

fn orbit(group: Option<&str>, point: &str, count: usize, run: &RunArgs) -> Result<Outcome> {
    let cfg = resolve(run, group)?;
    let g = builtin_group(&cfg.group, cfg.dimension)?;
    let p = orbit_point(g.point_len(), point)?;
    let images = orbit_sample(&Configuration::points(vec![p])?, g.as_ref(), cfg.seed, count)?;
    let mut r = ValueReport::new("ok").line("group", cfg.group.as_str());
    for (k, c) in images.iter().enumerate() {
        let q = c.point(0).ok_or(Error::Precondition("orbit image is not a point".into()))?;
        let shown = match (g.point_len(), q.to_affine(1e-12)) {
            (5, _) | (_, None) => list(q.normalized().iter()),
            (_, Some(a)) => list(a.iter()),
        };
        r = r.line(&format!("image {k}"), shown);
    }
    Ok(finish(&r.field("count", count).field("seed", cfg.seed), true))
}

fn axioms(group: Option<&str>, run: &RunArgs) -> Result<Outcome> {
    let mut run = run.clone();
    if run.config.is_none() && run.tolerance.is_none() {
        run.tolerance = Some(AXIOM_TOLERANCE);
    }
    let cfg = resolve(&run, group)?;
    let g = builtin_group(&cfg.group, cfg.dimension)?;
    let report = check_group_axioms_with_tol(g.as_ref(), cfg.seed, cfg.trials, cfg.tolerance)?;
    Ok(finish(&report, report.passed()))
}

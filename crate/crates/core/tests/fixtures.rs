use std::path::PathBuf;
use std::sync::Arc;

use erlangen::binary_forms::{
    cubic_covariants, cubic_pencil_member, quartic_square_members, roots_on_sphere, BinaryForm,
};
use erlangen::cayley_klein::CKMetric;
use erlangen::fixtures::{FixtureSet, FnOracle, OracleRegistry};
use erlangen::projective::cross_ratio;
use erlangen::{Error, ProjPoint, Result, Scalar};
use nalgebra::{DMatrix, DVector};
use serde_json::Value;

/// Set to rewrite derived values from their oracles instead of checking them.
const REGENERATE_VAR: &str = "ERLANGEN_REGENERATE";

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/canonical.json")
}

fn reals(v: &Value, key: &str) -> Result<Vec<f64>> {
    v[key]
        .as_array()
        .and_then(|a| a.iter().map(Value::as_f64).collect())
        .ok_or_else(|| Error::Validation { field: key.into(), message: "expected an array of numbers".into() })
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn dx(a: &[f64]) -> Vec<f64> {
    let d = a.len() - 1;
    (0..d).map(|k| (d - k) as f64 * a[k]).collect()
}

fn dy(a: &[f64]) -> Vec<f64> {
    (1..a.len()).map(|k| k as f64 * a[k]).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Expands `Q² + α f² = k Δ³` and solves for `α`, then divides by the
/// discriminant written out from its definition.
fn delta_cube_lambda(v: &Value) -> Result<Vec<f64>> {
    let f = reals(v, "cubic")?;
    let (fx, fy) = (dx(&f), dy(&f));
    let delta = sub(&mul(&dx(&fx), &dy(&fy)), &mul(&dy(&fx), &dy(&fx)));
    let q = sub(&mul(&fx, &dy(&delta)), &mul(&fy, &dx(&delta)));
    let (q2, f2) = (mul(&q, &q), mul(&f, &f));
    let d3 = mul(&delta, &mul(&delta, &delta));
    let a = DMatrix::from_fn(7, 2, |i, j| if j == 0 { f2[i] } else { -d3[i] });
    let b = DVector::from_iterator(7, q2.iter().map(|x| -x));
    let sol = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::Precondition(e.into()))?;
    let (a0, b0, c0, d0) = (f[0], f[1], f[2], f[3]);
    let r = b0 * b0 * c0 * c0 - 4.0 * a0 * c0.powi(3) - 4.0 * b0.powi(3) * d0 - 27.0 * a0 * a0 * d0 * d0
        + 18.0 * a0 * b0 * c0 * d0;
    Ok(vec![sol[0] / r])
}

fn artanh_chord(v: &Value) -> Result<Vec<f64>> {
    let (p, q) = (reals(v, "p")?, reals(v, "q")?);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let ratio = (1.0 - dot(&p, &p)) * (1.0 - dot(&q, &q)) / (1.0 - dot(&p, &q)).powi(2);
    Ok(vec![(1.0 - ratio).sqrt().atanh()])
}

/// For `x⁴ + 6c·x²y² + y⁴`: `λ·j ∈ {−144·i·c, 72·i·(c+1), −72·i·(1−c)}`.
fn quartic_square_lambdas(v: &Value) -> Result<Vec<f64>> {
    let c = v["c"].as_f64().ok_or_else(|| Error::Validation { field: "c".into(), message: "number".into() })?;
    let i = 1.0 + 3.0 * c * c;
    let j = c - c * c * c;
    let mut out = vec![-144.0 * i * c / j, 72.0 * i * (c + 1.0) / j, -72.0 * i * (1.0 - c) / j];
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn oracles() -> OracleRegistry {
    let mut r = OracleRegistry::new();
    r.register(Arc::new(FnOracle::new("cubic-delta-cube-least-squares", delta_cube_lambda)));
    r.register(Arc::new(FnOracle::new("artanh-chord", artanh_chord)));
    r.register(Arc::new(FnOracle::new("quartic-square-closed-form", quartic_square_lambdas)));
    r
}

fn canonical() -> FixtureSet {
    FixtureSet::load(&fixture_path()).unwrap()
}

#[test]
fn derived_values_regenerate() {
    let mut set = canonical();
    if std::env::var_os(REGENERATE_VAR).is_some() {
        set.refresh(&oracles()).unwrap();
        set.save(&fixture_path()).unwrap();
    }
    for r in set.regenerate(&oracles()).unwrap() {
        assert!(r.within_tolerance, "{}: stored {:?}, oracle {:?}", r.id, r.stored, r.computed);
    }
}

fn close(got: &[f64], want: &[f64], tol: f64) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol * w.abs().max(1.0))
}

#[test]
fn kernel_matches_every_entry() {
    let set = canonical();
    for e in &set.entries {
        let got: Vec<f64> = match e.id.as_str() {
            "cubic-delta-cube-lambda" => {
                let f = BinaryForm::from_real(&reals(&e.input, "cubic").unwrap()).unwrap();
                let lambda = e.expected[0];
                let member = cubic_pencil_member(&f, Scalar::new(lambda, 0.0)).unwrap();
                let delta = cubic_covariants(&f).unwrap().delta;
                assert!(member.proportionality_residual(&delta.pow(3)) < 1e-8);
                vec![lambda]
            }
            "klein-disk-half" => {
                let p = ProjPoint::affine(&reals(&e.input, "p").unwrap()).unwrap();
                let q = ProjPoint::affine(&reals(&e.input, "q").unwrap()).unwrap();
                vec![CKMetric::klein_disk().distance(&p, &q).unwrap().re]
            }
            "quartic-square-lambdas" => {
                let c = e.input["c"].as_f64().unwrap();
                let f = BinaryForm::from_real(&[1.0, 0.0, 6.0 * c, 0.0, 1.0]).unwrap();
                let mut l: Vec<f64> = quartic_square_members(&f).unwrap().iter().map(|m| m.lambda.re).collect();
                l.sort_by(f64::total_cmp);
                l
            }
            "equator-cubic-q-longitudes" => {
                let f = BinaryForm::from_real(&reals(&e.input, "cubic").unwrap()).unwrap();
                let q = cubic_covariants(&f).unwrap().q;
                let mut lon: Vec<f64> =
                    roots_on_sphere(&q).unwrap().points.iter().map(|p| p.lat_lon_degrees().1).collect();
                lon.sort_by(f64::total_cmp);
                lon
            }
            "harmonic-cross-ratio" => {
                let pts: Vec<ProjPoint> = e.input["points"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|p| {
                        ProjPoint::from_real(
                            &p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect::<Vec<_>>(),
                        )
                        .unwrap()
                    })
                    .collect();
                vec![cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap().re]
            }
            other => panic!("no kernel check for fixture {other}"),
        };
        assert!(close(&got, &e.expected, e.tolerance), "{}: kernel {got:?}, stored {:?}", e.id, e.expected);
    }
}

#[test]
fn file_is_canonically_serialized() {
    let text = std::fs::read_to_string(fixture_path()).unwrap();
    let set = FixtureSet::from_json(&text).unwrap();
    assert_eq!(FixtureSet::from_json(&set.to_json()).unwrap(), set);
}

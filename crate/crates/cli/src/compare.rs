use std::collections::BTreeMap;

use djet_core::geometry::LocalGeometry;
use djet_core::objects::{Components, GeometryBundle};
use djet_core::PhasePoint;
use rayon::prelude::*;

use crate::report::{Discrepancy, IdentityResult, Metadata, Report, Verdict, Worst};
use crate::suites::Identity;
use crate::{sample_points, CliError, ModelSpec, SampleConfig, Tolerances};

struct PointOutcome {
    objects: BTreeMap<&'static str, Discrepancy>,
    identities: Vec<(Identity, f64)>,
}

/// Samples points, evaluates both pipelines at each and folds everything
/// into a [`Report`]. Points run in parallel; the fold is in index order.
pub fn run_compare(config: &SampleConfig, spec: &ModelSpec) -> Result<Report, CliError> {
    let built = spec.build()?;
    let points = sample_points(config, |pt| built.admissible(pt))?;
    log::info!("sampled {} points", points.len());

    let outcomes: Vec<Result<PointOutcome, String>> = points
        .par_iter()
        .enumerate()
        .map(|(n, pt)| {
            let generic = LocalGeometry::new(&built.generic, pt).map_err(|e| format!("point {n} ({pt}): generic: {e}"))?;
            let closed = built.model.bundle(pt).map_err(|e| format!("point {n} ({pt}): closed form: {e}"))?;
            Ok(evaluate_point(n, pt, &generic.bundle(), &closed, &config.tolerances))
        })
        .collect();

    let mut report = Report {
        schema: crate::SCHEMA,
        model: spec.clone(),
        config: config.clone(),
        metadata: Metadata::default(),
        points: points.len(),
        discrepancies: BTreeMap::new(),
        identities: BTreeMap::new(),
        errors: Vec::new(),
        warnings: Vec::new(),
        notes: vec!["the momentum Einstein block uses the metric weighting h11·g*^{ij}".to_string()],
        verdict: Verdict::Pass,
    };
    if built.model.constant_sigma() {
        report.warnings.push("constant sigma".to_string());
    }
    if spec.hamiltonian.is_some() {
        report.warnings.push("custom hamiltonian: closed forms still follow sigma".to_string());
    }

    for (n, outcome) in outcomes.into_iter().enumerate() {
        let outcome = match outcome {
            Ok(o) => o,
            Err(e) => {
                report.errors.push(e);
                continue;
            }
        };
        for (name, d) in outcome.objects {
            merge(report.discrepancies.entry(name.to_string()).or_insert_with(|| d.clone()), &d);
        }
        for (id, residual) in outcome.identities {
            let tolerance = id.tolerance(&config.tolerances);
            let entry = report.identities.entry(id.name().to_string()).or_insert(IdentityResult {
                max_residual: residual,
                worst_point: n,
                tolerance,
                points: 0,
                pass: true,
            });
            entry.points += 1;
            if residual > entry.max_residual || residual.is_nan() {
                entry.max_residual = residual;
                entry.worst_point = n;
            }
            entry.pass &= residual <= tolerance;
        }
    }
    report.settle();
    Ok(report)
}

fn evaluate_point(
    n: usize,
    pt: &PhasePoint,
    generic: &GeometryBundle,
    closed: &GeometryBundle,
    tol: &Tolerances,
) -> PointOutcome {
    let mut objects: BTreeMap<&'static str, Discrepancy> = BTreeMap::new();
    for (g, c) in generic.component_list().into_iter().zip(closed.component_list()) {
        debug_assert_eq!(g.label(), c.label());
        let diff = (g.value - c.value).abs();
        let mag = g.value.abs().max(c.value.abs());
        let allowed = tol.abs.max(tol.rel * mag);
        let ratio = if diff == 0.0 { 0.0 } else { diff / allowed };
        let d = Discrepancy {
            max_abs: diff,
            max_rel: if mag > tol.abs { diff / mag } else { 0.0 },
            worst: Worst { component: g.label(), point: n, generic: g.value, closed_form: c.value, ratio },
            // NaN compares false
            pass: diff <= allowed,
        };
        match objects.get_mut(g.object) {
            Some(acc) => merge(acc, &d),
            None => {
                objects.insert(g.object, d);
            }
        }
    }
    let p = pt.p();
    let identities = Identity::ALL.iter().filter_map(|id| Some((*id, id.residual(generic, &p)?))).collect();
    PointOutcome { objects, identities }
}

fn merge(acc: &mut Discrepancy, d: &Discrepancy) {
    acc.max_abs = acc.max_abs.max(d.max_abs);
    acc.max_rel = acc.max_rel.max(d.max_rel);
    if d.worst.ratio > acc.worst.ratio || (d.worst.ratio.is_nan() && !acc.worst.ratio.is_nan()) {
        acc.worst = d.worst.clone();
    }
    acc.pass &= d.pass;
}

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use minsurf::catalog::{self, catenoid_plateau, PlateauClass};
use minsurf::graph::problem::write_csv;
use minsurf::graph::GraphProblem;
use minsurf::mesh::{sample_mesh, write_obj, Projection};
use minsurf::numeric::quad::QuadOptions;
use minsurf::weierstrass::periods::PERIOD_TOL;
use minsurf::weierstrass::{
    conformality_check, harmonicity_check, harmonicity_check_fd, mean_curvature_vector_check, periods,
    total_curvature_degree, total_curvature_spherical, PrimitiveKind, TotalCurvature,
};
use minsurf::{Complex64, Region};
use serde_json::json;

use crate::report::{sha256_hex, Check};
use crate::source::{self, parse_region, patch_of, Source};
use crate::{CatalogAction, Command, Ctx, Failure, Method, Project};

const CONFORMALITY_TOL: f64 = 1e-8;
const HARMONICITY_TOL: f64 = 1e-10;
const HARMONICITY_FD_TOL: f64 = 1e-6;
const NULLITY_TOL: f64 = 1e-10;
const MEAN_CURVATURE_TOL: f64 = 1e-5;
const CONTROL_H_TOL: f64 = 1e-4;
const INVOLUTION_TOL: f64 = 1e-8;

pub(crate) fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<(), Failure> {
    match cmd {
        Command::SolveGraph { problem, output } => solve_graph(ctx, problem, output.as_deref()),
        Command::Check { surface, samples } => check(ctx, surface, *samples),
        Command::Periods { data } => period_table(ctx, data),
        Command::TotalCurvature {
            data,
            method,
            region,
            complete,
        } => total_curvature(ctx, data, *method, region.as_deref(), *complete),
        Command::Mesh {
            surface,
            res,
            output,
            project,
            patch,
        } => mesh(ctx, surface, *res, output, *project, patch.as_deref()),
        Command::PlateauCatenoid { radius } => plateau(ctx, *radius),
        Command::Catalog { action } => catalog_cmd(ctx, action),
    }
}

fn fmt_vec(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:+.10e}")).collect();
    format!("({})", parts.join(", "))
}

/// `−4π·k` printed as a multiple of π.
fn fmt_pi(x: f64) -> String {
    format!("{x:.12} ({:.6}π)", x / PI)
}

fn load(ctx: &mut Ctx, target: &str) -> Result<Source, Failure> {
    let loaded = source::load(target)?;
    ctx.report.input_hash = Some(loaded.hash);
    ctx.lap("load");
    Ok(loaded.source)
}

fn solve_graph(ctx: &mut Ctx, problem: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let (text, hash) = source::read_file(&problem.to_string_lossy())?;
    ctx.report.input_hash = Some(hash);
    let p = GraphProblem::from_json(&text)?;
    ctx.lap("load");
    let (f, rep) = p.solve()?;
    ctx.lap("solve");
    let csv_path = output
        .map(Path::to_path_buf)
        .unwrap_or_else(|| problem.with_extension("csv"));
    let file =
        fs::File::create(&csv_path).map_err(|e| Failure::input(format!("cannot write {}: {e}", csv_path.display())))?;
    write_csv(&f, std::io::BufWriter::new(file))?;
    ctx.lap("write");
    let (nx, ny) = f.dims();
    ctx.say(format!("grid {nx}x{ny}, {} interior nodes", f.interior_nodes().count()));
    ctx.say(format!(
        "{} iterations, residual {:.3e}, max |G(f)| {:.3e}, area {:.12}",
        rep.iterations, rep.residual, rep.mge_max, rep.area
    ));
    if rep.nonconvex_mask {
        ctx.say("warning: the mask is not convex; solvability is not guaranteed");
    }
    ctx.say(format!("solution written to {}", csv_path.display()));
    ctx.report
        .checks
        .push(Check::at_most("scheme-residual", rep.residual, p.options.tol));
    ctx.report.result = json!({
        "dims": [nx, ny],
        "csv": csv_path.to_string_lossy(),
        "solve": rep,
    });
    Ok(())
}

fn check(ctx: &mut Ctx, target: &str, count: usize) -> Result<(), Failure> {
    if count == 0 {
        return Err(Failure::input("need at least one sample"));
    }
    let src = load(ctx, target)?;
    let s = src.surface()?;
    ctx.lap("integrate");
    let pts = src.samples(count, ctx.seed)?;
    let (minimal, control_h) = match &src {
        Source::Catalog(e) => (e.expect.minimal, e.expect.mean_curvature_norm),
        Source::Data(_) => (true, None),
    };
    let mut checks = vec![Check::at_most(
        "conformality",
        conformality_check(&*s, &pts)?,
        CONFORMALITY_TOL,
    )];
    // Mean curvature needs a conformal parametrisation; without one it is
    // recorded as failed rather than aborting the remaining checks.
    let m = match mean_curvature_vector_check(&*s, &pts) {
        Ok(m) => Some(m),
        Err(e @ (minsurf::Error::NotConformal { .. } | minsurf::Error::NotImmersed { .. })) => {
            ctx.say(format!("mean curvature skipped: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let nan = f64::NAN;
    if minimal {
        checks.push(Check::at_most(
            "harmonicity",
            harmonicity_check(&*s, &pts)?,
            HARMONICITY_TOL,
        ));
        checks.push(Check::at_most(
            "harmonicity-fd",
            harmonicity_check_fd(&*s, &pts)?,
            HARMONICITY_FD_TOL,
        ));
        if let Some(d) = src.derivative()? {
            let zs: Vec<Complex64> = pts.iter().map(|&(u, v)| Complex64::new(u, v)).collect();
            checks.push(Check::at_most(
                "nullity",
                d.nullity_check(&zs)?.max_residual,
                NULLITY_TOL,
            ));
        }
        checks.push(Check::at_most(
            "mean-curvature",
            m.map_or(nan, |m| m.max_h),
            MEAN_CURVATURE_TOL,
        ));
    } else if let Some(h) = control_h {
        let dev = m.map_or(nan, |m| (m.max_h - h).abs().max((m.min_h - h).abs()));
        checks.push(Check::at_most("mean-curvature-deviation", dev, CONTROL_H_TOL));
        checks.push(Check::at_most(
            "laplacian-identity",
            m.map_or(nan, |m| m.residual),
            MEAN_CURVATURE_TOL,
        ));
    }
    if let Source::Catalog(e) = &src {
        if let Some(r) = e.involution_residual(&pts[..pts.len().min(50)])? {
            checks.push(Check::at_most("involution", r, INVOLUTION_TOL));
        }
    }
    ctx.lap("checks");
    ctx.say(format!(
        "{} in R^{}: {} samples (seed {}), {}",
        src.name(),
        s.dim(),
        pts.len(),
        ctx.seed,
        if minimal {
            "expected minimal"
        } else {
            "non-minimal control"
        }
    ));
    if let Some(m) = m {
        ctx.say(format!("|H| in [{:.3e}, {:.3e}]", m.min_h, m.max_h));
    }
    ctx.report.result = json!({
        "surface": src.name(),
        "dim": s.dim(),
        "provenance": s.provenance(),
        "samples": pts.len(),
        "minimal": minimal,
        "mean_curvature": m,
    });
    ctx.report.checks = checks;
    Ok(())
}

fn period_table(ctx: &mut Ctx, target: &str) -> Result<(), Failure> {
    let src = load(ctx, target)?;
    let f = src
        .derivative()?
        .ok_or_else(|| Failure::input(format!("{} has no holomorphic data", src.name())))?;
    let domain = src.domain()?;
    let kind = match &src {
        Source::Data(d) => d.kind(),
        Source::Catalog(_) => PrimitiveKind::RealPart,
    };
    let loops = domain.homology_generators(&src.singular_points());
    let ps = periods(&f, &loops, &QuadOptions::default())?;
    ctx.lap("periods");
    ctx.say(format!("{} generator(s), {} components", loops.len(), f.dim()));
    let mut rows = Vec::new();
    for (k, (l, p)) in loops.iter().zip(&ps).enumerate() {
        let (center, radius) = l.as_circle().unwrap_or((Complex64::new(f64::NAN, f64::NAN), f64::NAN));
        ctx.say(format!(
            "generator {k}: circle |z - ({:.6}{:+.6}i)| = {radius:.6}",
            center.re, center.im
        ));
        ctx.say(format!("  Re period {}", fmt_vec(&p.real)));
        ctx.say(format!("  flux      {}", fmt_vec(&p.flux)));
        let obstruction = match kind {
            PrimitiveKind::RealPart => p.real_norm(),
            PrimitiveKind::FullComplex => p.integral.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt(),
        };
        ctx.report
            .checks
            .push(Check::at_most(format!("period-{k}"), obstruction, PERIOD_TOL));
        rows.push(json!({
            "generator": k,
            "center": [center.re, center.im],
            "radius": radius,
            "real": p.real,
            "flux": p.flux,
            "quadrature_error": p.error,
        }));
    }
    ctx.report.result = json!({ "primitive": kind, "periods": rows });
    Ok(())
}

fn total_curvature(
    ctx: &mut Ctx,
    target: &str,
    method: Method,
    region: Option<&str>,
    complete: bool,
) -> Result<(), Failure> {
    let src = load(ctx, target)?;
    let g = src.gauss_map()?;
    let complete = complete || matches!(&src, Source::Catalog(e) if e.expect.complete);
    match method {
        Method::Degree => {
            let tc = total_curvature_degree(&g, complete)?;
            ctx.lap("degree");
            match tc {
                TotalCurvature::Finite { value, degree } => {
                    ctx.say(format!("Gauss map {} has degree {degree}", g.to_source()));
                    ctx.say(format!("total curvature {}", fmt_pi(value)));
                }
                TotalCurvature::NegativeInfinity => {
                    ctx.say(format!(
                        "Gauss map {} is transcendental on a complete surface",
                        g.to_source()
                    ));
                    ctx.say("total curvature -inf");
                }
            }
            if let Source::Catalog(e) = &src {
                if let Some(want) = e.expect.total_curvature {
                    let got = tc.value();
                    let dev = if got == want { 0.0 } else { (got - want).abs() };
                    ctx.report
                        .checks
                        .push(Check::at_most("catalog-total-curvature", dev, 1e-9));
                }
            }
            ctx.report.result = json!({ "method": "degree", "gauss_map": g.to_source(), "total_curvature": tc });
        }
        Method::Spherical => {
            let region = match region {
                Some(r) => parse_region(r)?,
                None => src.domain()?.sample_region(),
            };
            let value = total_curvature_spherical(&g, &region, &QuadOptions::with_tol(1e-10))?;
            ctx.lap("spherical");
            ctx.say(format!("Gauss map {} over {}", g.to_source(), describe(&region)));
            ctx.say(format!("total curvature {}", fmt_pi(value)));
            ctx.report.result = json!({
                "method": "spherical",
                "gauss_map": g.to_source(),
                "region": region_json(&region),
                "total_curvature": value,
            });
        }
    }
    Ok(())
}

fn describe(r: &Region) -> String {
    match r {
        Region::Rectangle { u, v } => format!("[{}, {}] x [{}, {}]", u[0], u[1], v[0], v[1]),
        Region::Disc { center, radius } => format!("disc |z - ({}, {})| <= {radius}", center[0], center[1]),
        Region::Annulus { center, inner, outer } => {
            format!("annulus {inner} <= |z - ({}, {})| <= {outer}", center[0], center[1])
        }
    }
}

fn region_json(r: &Region) -> serde_json::Value {
    match r {
        Region::Rectangle { u, v } => json!({"kind": "rectangle", "u": u, "v": v}),
        Region::Disc { center, radius } => json!({"kind": "disc", "center": center, "radius": radius}),
        Region::Annulus { center, inner, outer } => {
            json!({"kind": "annulus", "center": center, "inner": inner, "outer": outer})
        }
    }
}

fn mesh(
    ctx: &mut Ctx,
    target: &str,
    res: (usize, usize),
    output: &PathBuf,
    project: Option<Project>,
    patch: Option<&str>,
) -> Result<(), Failure> {
    let src = load(ctx, target)?;
    let s = src.surface()?;
    let region = match patch {
        Some(p) => parse_region(p)?,
        None => s.domain().sample_region(),
    };
    let patch = patch_of(&region);
    let projection = match (s.dim(), project) {
        (3, None) => None,
        (3, Some(_)) => return Err(Failure::input("--project only applies to surfaces in R^4")),
        (4, Some(p)) => Some(match p {
            Project::Xyz => Projection::Xyz,
            Project::Xyw => Projection::Xyw,
            Project::Xzw => Projection::Xzw,
            Project::Yzw => Projection::Yzw,
        }),
        (4, None) => {
            log::warn!(
                "{} lives in R^4; projecting onto xyz (choose with --project)",
                src.name()
            );
            Some(Projection::Xyz)
        }
        (n, _) => return Err(Failure::input(format!("cannot mesh a surface in R^{n}"))),
    };
    let m = sample_mesh(&*s, res, &patch, projection)?;
    ctx.lap("sample");
    let mut obj = Vec::new();
    write_obj(&m, &mut obj)?;
    fs::write(output, &obj).map_err(|e| Failure::input(format!("cannot write {}: {e}", output.display())))?;
    ctx.lap("write");
    ctx.say(format!(
        "{}: {} vertices, {} triangles over {}",
        src.name(),
        m.vertices.len(),
        m.triangles.len(),
        describe(&region)
    ));
    ctx.say(format!("written to {}", output.display()));
    ctx.report.result = json!({
        "surface": src.name(),
        "resolution": [res.0, res.1],
        "patch": patch,
        "projection": projection,
        "vertices": m.vertices.len(),
        "triangles": m.triangles.len(),
        "normals": m.normals.is_some(),
        "obj": output.to_string_lossy(),
        "obj_hash": sha256_hex(&obj),
    });
    Ok(())
}

fn plateau(ctx: &mut Ctx, radius: f64) -> Result<(), Failure> {
    let rep = catenoid_plateau(radius)?;
    ctx.lap("roots");
    ctx.say(format!("r0 = {:.14} (c* = {:.14})", rep.r0, rep.c_star));
    let what = match rep.classification {
        PlateauClass::Two => "two catenoids",
        PlateauClass::Tangent => "one (tangential) catenoid",
        PlateauClass::None => "no catenoid",
    };
    ctx.say(format!("r = {radius}: {what}"));
    for c in &rep.solutions {
        ctx.say(format!("  c = {c:.14}, waist radius 1/c = {:.14}", 1.0 / c));
    }
    ctx.report.result = serde_json::to_value(&rep).expect("report serialises");
    Ok(())
}

fn catalog_cmd(ctx: &mut Ctx, action: &CatalogAction) -> Result<(), Failure> {
    match action {
        CatalogAction::List => {
            let mut rows = Vec::new();
            for name in catalog::NAMES {
                let e = catalog::lookup(name).expect("listed names resolve");
                ctx.say(format!("{name:<14} {}", e.summary));
                rows.push(json!({"name": name, "summary": e.summary}));
            }
            ctx.report.result = json!({ "entries": rows });
        }
        CatalogAction::Info { name } => {
            let e = catalog::lookup(name).ok_or_else(|| {
                Failure::input(format!(
                    "unknown catalog entry {name:?}; known: {}",
                    catalog::NAMES.join(", ")
                ))
            })?;
            let info = serde_json::to_value(e.info()).expect("entry info serialises");
            ctx.say(serde_json::to_string_pretty(&info).expect("serialises"));
            ctx.report.result = info;
        }
    }
    Ok(())
}

use crate::failure::Failure;
use crate::input::{load_family, load_observable, LoadedFamily};
use crate::report::{cell, complex, complex_list, float, floats, matrix, Report, Table};
use crate::{Cli, Command};
use qmarkov::covariance::{center, empirical_covariance, markov_covariance, FluctuationObservable};
use qmarkov::equivalence::{decide_equivalence_with, dimension_witness, finite_window_check, independent_kraus_count};
use qmarkov::{gram, lan, output, spectral, PureStateVector, Tolerances};
use serde_json::Value;
use std::path::Path;

fn tolerances(cli: &Cli) -> Tolerances {
    Tolerances { structural: cli.tolerance, amplitude_guard: cli.size_guard, ..Tolerances::default() }
}

fn name(path: &Path) -> String {
    path.display().to_string()
}

fn inputs(paths: &[&Path]) -> Value {
    Value::Array(paths.iter().map(|p| Value::String(name(p))).collect())
}

fn require(cond: bool, message: &str) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::usage(message.into()))
    }
}

fn source_name(f: &LoadedFamily) -> &'static str {
    f.family.as_ref().map_or("kraus_only", |p| p.source().name())
}

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let tol = tolerances(cli);
    require(cli.tolerance > 0.0, "--tolerance must be positive")?;
    match &cli.command {
        Command::Validate { family } => validate(family, &tol),
        Command::Spectral { family, n_max } => spectral_report(family, *n_max, &tol),
        Command::OutputState { family, n, matrix } => output_state(family, *n, *matrix, &tol),
        Command::Equivalence { first, second, window } => equivalence(first, second, *window, &tol),
        Command::Covariance { family, x, y, center, ns, phi } => {
            covariance(family, x, y.as_deref(), *center, ns, *phi, &tol)
        }
        Command::Qfi { family, ns } => qfi(family, ns, &tol),
        Command::LanScan { family, c, grid, ns } => lan_scan(family, *c, *grid, ns, &tol),
        Command::LanGram { family, grid, ns } => lan_gram(family, grid, ns, &tol),
    }
}

fn validate(path: &Path, tol: &Tolerances) -> Result<Report, Failure> {
    let f = load_family(path, tol)?;
    let mut r = Report::new("validate");
    r.set("inputs", inputs(&[path]));
    r.set("dim_system", f.base.dim_system().into());
    r.set("dim_noise", f.base.dim_noise().into());
    r.set("deviation", float(f.base.deviation()));
    r.set("independent_kraus", independent_kraus_count(&f.base).into());
    r.set("source", source_name(&f).into());
    if let Some(p) = &f.family {
        r.set("first_order_defect", float(p.first_order_defect()));
        r.set("second_order_defect", float(p.second_order_defect()));
    }
    Ok(r)
}

fn spectral_report(path: &Path, n_max: Option<usize>, tol: &Tolerances) -> Result<Report, Failure> {
    let f = load_family(path, tol)?;
    let v = &f.base;
    let d = v.dim_system();
    let rep = spectral::primitivity_check_with(v, tol);
    let mut r = Report::new("spectral");
    r.set("inputs", inputs(&[path]));
    r.set("eigenvalues", complex_list(&rep.eigenvalues));
    r.set("spectral_gap", float(rep.spectral_gap));
    r.set("is_irreducible", rep.is_irreducible.into());
    r.set("is_primitive", rep.is_primitive.into());
    r.set("borderline", rep.borderline.into());
    r.set("stationary_eigen_residual", float(rep.stationary_eigen_residual));
    r.set("stationary", rep.stationary.as_ref().map_or(Value::Null, |rho| matrix(rho.matrix())));
    let n_max = n_max.unwrap_or(d * d);
    r.set("positivity_word_length", spectral::power_positivity_check(v, n_max).map_or(Value::Null, Value::from));
    r.set("positivity_search_limit", n_max.into());
    let rows = rep
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, z)| vec![i.to_string(), cell(z.re), cell(z.im), cell(z.norm())])
        .collect();
    r.set_table(Table { columns: vec!["index", "re", "im", "modulus"], rows });
    Ok(r)
}

fn output_state(path: &Path, n: usize, with_matrix: bool, tol: &Tolerances) -> Result<Report, Failure> {
    require(n >= 1, "--n must be at least 1")?;
    let f = load_family(path, tol)?;
    let v = &f.base;
    let rho = spectral::require_primitive(v, tol)?;
    let mut r = Report::new("output-state");
    r.set("inputs", inputs(&[path]));
    r.set("n", n.into());
    r.set("purity", float(output::output_purity(v, n)?));
    r.set("purity_limit", float(output::purity_limit(&rho)));
    r.set("stationary", matrix(rho.matrix()));
    if with_matrix {
        let side = (v.dim_noise() as u128).checked_pow(n as u32);
        require(side.is_some_and(|s| s <= 64), "--matrix needs k^n <= 64")?;
        r.set("output", matrix(output::stationary_output_with(v, n, tol)?.matrix()));
    }
    Ok(r)
}

fn equivalence(a: &Path, b: &Path, window: Option<usize>, tol: &Tolerances) -> Result<Report, Failure> {
    let f1 = load_family(a, tol)?;
    let f2 = load_family(b, tol)?;
    let rep = decide_equivalence_with(&f1.base, &f2.base, tol)?;
    let mut r = Report::new("equivalence");
    r.set("inputs", inputs(&[a, b]));
    r.set("dimension_witness", dimension_witness(&f1.base, &f2.base).into());
    r.set("equivalent", rep.equivalent.into());
    r.set("c", rep.c.map_or(Value::Null, complex));
    r.set("u", rep.u.as_ref().map_or(Value::Null, matrix));
    r.set("peripheral_modulus", float(rep.peripheral_modulus));
    r.set("leading_spectrum", complex_list(&rep.leading_spectrum));
    r.set("residual", rep.reconstruction_residual.map_or(Value::Null, float));
    r.set("proportionality_defect", rep.proportionality_defect.map_or(Value::Null, float));
    if let Some(n) = window {
        require(n >= 1, "--window must be at least 1")?;
        let w = finite_window_check(&f1.base, &f2.base, n)?;
        r.set("window_n", w.n.into());
        r.set("window_trace_distance", float(w.trace_distance));
        r.set("independent_kraus", w.independent_kraus.into());
        r.set("theoretical_window", w.theoretical_n0.into());
    }
    Ok(r)
}

fn observable(path: &Path, v: &qmarkov::KrausFamily, centered: bool) -> Result<FluctuationObservable, Failure> {
    let m = load_observable(path)?;
    let n = v.dim_system() * v.dim_noise();
    if m.shape() != (n, n) {
        return Err(Failure::schema(format!("{}: observable must be {n}x{n}", name(path)), "dim"));
    }
    Ok(if centered { center(v, &m)? } else { FluctuationObservable::new(v, m)? })
}

fn covariance(
    path: &Path,
    x: &Path,
    y: Option<&Path>,
    centered: bool,
    ns: &[usize],
    phi: usize,
    tol: &Tolerances,
) -> Result<Report, Failure> {
    require(ns.iter().all(|&n| n >= 1), "--ns entries must be at least 1")?;
    let f = load_family(path, tol)?;
    let v = &f.base;
    require(phi < v.dim_system(), "--phi must index a system basis state")?;
    let xo = observable(x, v, centered)?;
    let yo = match y {
        Some(p) => observable(p, v, centered)?,
        None => xo.clone(),
    };
    let analytic = markov_covariance(v, &xo, &yo)?;
    let start = PureStateVector::basis(v.dim_system(), phi);
    let mut r = Report::new("covariance");
    let mut files = vec![path, x];
    files.extend(y);
    r.set("inputs", inputs(&files));
    r.set("centered", centered.into());
    r.set("analytic", complex(analytic));
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for &n in ns {
        let e = empirical_covariance(v, &start, &xo, &yo, n)?;
        let dev = (e - analytic).norm();
        entries.push(serde_json::json!({ "n": n, "empirical": complex(e), "deviation": float(dev) }));
        rows.push(vec![n.to_string(), cell(e.re), cell(e.im), cell(dev)]);
    }
    r.set("ladder", Value::Array(entries));
    r.set_table(Table { columns: vec!["n", "re", "im", "deviation"], rows });
    Ok(r)
}

fn qfi(path: &Path, ns: &[usize], tol: &Tolerances) -> Result<Report, Failure> {
    require(ns.iter().all(|&n| n >= 1), "--ns entries must be at least 1")?;
    let f = load_family(path, tol)?;
    let fam = f.param(&name(path))?;
    let rep = lan::qfi_both(fam)?;
    let fit = lan::fit_lambda(fam, &lan::symmetric_grid(2.0, 5))?;
    let mut r = Report::new("qfi");
    r.set("inputs", inputs(&[path]));
    r.set("source", source_name(&f).into());
    r.set("f", float(rep.f));
    r.set("f_covariance", rep.f_covariance.map_or(Value::Null, float));
    r.set("agreement", rep.agreement.map_or(Value::Null, float));
    r.set("a", float(rep.a));
    r.set("gauge_b", float(rep.gauge_b));
    r.set("hermitian_certificate", float(lan::hermitian_certificate(fam)));
    r.set("lambda_fit_residual", float(fit.residual));
    r.set("lambda_fit_f", float(fit.f));
    r.set("lambda_fit_a", float(fit.a));
    let start = PureStateVector::basis(fam.base().dim_system(), 0);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for &n in ns {
        let fn_ = lan::finite_n_qfi_with(fam, &start, n, tol)?;
        entries.push(serde_json::json!({ "n": n, "f_n": float(fn_), "f_n_per_step": float(fn_ / n as f64) }));
        rows.push(vec![n.to_string(), cell(fn_), cell(fn_ / n as f64)]);
    }
    r.set("finite_n", Value::Array(entries));
    r.set_table(Table { columns: vec!["n", "f_n", "f_n_per_step"], rows });
    Ok(r)
}

fn lan_scan(path: &Path, c: f64, grid: usize, ns: &[usize], tol: &Tolerances) -> Result<Report, Failure> {
    require(c > 0.0, "--c must be positive")?;
    require(grid >= 2, "--grid must be at least 2")?;
    require(!ns.is_empty() && ns.iter().all(|&n| n >= 1), "--ns entries must be at least 1")?;
    let f = load_family(path, tol)?;
    let fam = f.param(&name(path))?;
    let scan = lan::lan_scan(fam, c, grid, ns)?;
    let mut r = Report::new("lan-scan");
    r.set("inputs", inputs(&[path]));
    r.set("f", float(scan.f));
    r.set("a", float(scan.a));
    r.set("c", float(c));
    r.set("grid", floats(&scan.grid));
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "n": row.n,
                "sup_error": float(row.sup_error),
                "sup_matrix_error": float(row.sup_matrix_error),
                "argmax": floats(&[row.argmax.0, row.argmax.1]),
            })
        })
        .collect();
    r.set("rows", Value::Array(rows));
    r.set(
        "series",
        serde_json::json!({
            "n": scan.rows.iter().map(|row| row.n).collect::<Vec<_>>(),
            "log10_sup_error": floats(&scan.rows.iter().map(|row| row.sup_error.log10()).collect::<Vec<_>>()),
        }),
    );
    let table_rows = scan
        .rows
        .iter()
        .map(|row| vec![row.n.to_string(), cell(row.sup_error), cell(row.sup_matrix_error)])
        .collect();
    r.set_table(Table { columns: vec!["n", "sup_error", "sup_matrix_error"], rows: table_rows });
    Ok(r)
}

fn lan_gram(path: &Path, grid: &[f64], ns: &[usize], tol: &Tolerances) -> Result<Report, Failure> {
    require(!grid.is_empty(), "--grid needs at least one point")?;
    require(!ns.is_empty() && ns.iter().all(|&n| n >= 1), "--ns entries must be at least 1")?;
    let f = load_family(path, tol)?;
    let fam = f.param(&name(path))?;
    let diag = gram::weak_convergence_diagnostic(fam, grid, ns)?;
    let mut r = Report::new("lan-gram");
    r.set("inputs", inputs(&[path]));
    r.set("f", float(diag.f));
    r.set("a", float(diag.a));
    r.set("grid", floats(grid));
    let rows: Vec<Value> = diag
        .rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "n": row.n,
                "max_deviation": float(row.max_deviation),
                "model_distance": float(row.model_distance),
            })
        })
        .collect();
    r.set("rows", Value::Array(rows));
    let table_rows = diag
        .rows
        .iter()
        .map(|row| vec![row.n.to_string(), cell(row.max_deviation), cell(row.model_distance)])
        .collect();
    r.set_table(Table { columns: vec!["n", "max_deviation", "model_distance"], rows: table_rows });
    Ok(r)
}

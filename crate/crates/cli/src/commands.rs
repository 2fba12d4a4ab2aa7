use lacunary_core::operator::{
    apply_t_by_convolution, build_kernel, kernel_sup_norm_report, l2_operator_norm_bound, reproducing_residual,
};
use lacunary_core::polyspace::{
    norm_quotient, random_lacunary_s2, random_lacunary_zonal, synthesize_s2, validate_spectrum,
    CoefficientDistribution, NikolskiiReport,
};
use lacunary_core::quadrature::{gauss_jacobi_rule, SphereGridS2};
use lacunary_core::search::{maximize_ratio, sweep, SearchOptions, SweepConfig, SweepFamily, SweepRow};
use lacunary_core::specfun::empirical_bound_constant;
use lacunary_core::{DimensionParams, LacunarySpectrum, NormOptions, Polynomial, ZonalPolynomial};
use serde_json::json;

use crate::artifact::{num, Output};
use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// Largest spectrum degree for which `reproduce` also runs the S² convolution route.
pub const CONVOLUTION_MAX_DEGREE: u32 = 64;

pub fn run(config: &RunConfig) -> Result<Output, CliError> {
    config.validate()?;
    let dim = DimensionParams::new(config.d)?;
    match config.command {
        Command::Kernel => kernel(config, dim),
        Command::Bounds => bounds(config, dim),
        Command::Reproduce => reproduce(config, dim),
        Command::Ratio => ratio(config, dim),
        Command::Sweep => run_sweep(config, dim),
        Command::Search => search(config, dim),
        Command::QuadCheck => quad_check(config, dim),
    }
}

fn spectrum(config: &RunConfig) -> Result<LacunarySpectrum, CliError> {
    let degrees = config.spectrum.as_deref().expect("resolved configs carry a spectrum");
    Ok(validate_spectrum(degrees, config.l)?)
}

fn grid(config: &RunConfig) -> &[u32] {
    config.n_grid.as_deref().expect("resolved configs carry a degree grid")
}

fn norm_options(config: &RunConfig) -> NormOptions {
    NormOptions { tol: config.tol, sup_grid: config.grid_size, ..NormOptions::default() }
}

fn kernel(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let kernel = build_kernel(&spectrum(config)?, dim)?;
    let export = kernel.export();
    let sup = kernel_sup_norm_report(&kernel, config.grid_size);
    let l2 = l2_operator_norm_bound(&kernel);
    let mut out = Output::new(
        &["degree", "coefficient", "multiplier"],
        json!({ "kernel": export, "sup_norm": sup, "l2_operator_norm": l2 }),
    );
    for (&(k, a), &(_, mult)) in export.expansion.iter().zip(&export.multipliers) {
        out.row(vec![k.to_string(), num(a), num(mult)]);
    }
    Ok(out)
}

fn bounds(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let degrees = grid(config);
    let base = empirical_bound_constant(&dim, degrees, config.l, config.grid_size)?;
    let doubled = empirical_bound_constant(&dim, degrees, config.l, 2 * config.grid_size)?;
    let change = |a: f64, b: f64| (b - a).abs() / a.abs().max(f64::MIN_POSITIVE);
    let max_change = base
        .per_degree
        .iter()
        .zip(&doubled.per_degree)
        .map(|(a, b)| change(a.pointwise, b.pointwise).max(change(a.uniform, b.uniform)))
        .fold(0.0, f64::max);
    let mut out = Output::new(
        &["d", "l", "n", "grid_size", "pointwise", "uniform", "pointwise_doubled", "uniform_doubled"],
        json!({
            "report": base,
            "doubled": doubled,
            "pointwise_spread": base.pointwise_spread(),
            "uniform_spread": base.uniform_spread(),
            "max_relative_change": max_change,
        }),
    );
    for (a, b) in base.per_degree.iter().zip(&doubled.per_degree) {
        out.row(vec![
            config.d.to_string(),
            config.l.to_string(),
            a.n.to_string(),
            config.grid_size.to_string(),
            num(a.pointwise),
            num(a.uniform),
            num(b.pointwise),
            num(b.uniform),
        ]);
    }
    Ok(out)
}

fn reproduce(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let spectrum = spectrum(config)?;
    let kernel = build_kernel(&spectrum, dim)?;
    let f: Polynomial = if config.d == 2 {
        random_lacunary_s2(&spectrum, config.seed)?.into()
    } else {
        random_lacunary_zonal(&spectrum, dim, config.seed, &CoefficientDistribution::Gaussian)?.into()
    };
    let coefficient = reproducing_residual(&f, &kernel)?;
    let convolution = match &f {
        Polynomial::S2(g) if spectrum.top() <= CONVOLUTION_MAX_DEGREE => {
            let grid = SphereGridS2::with_capacity(spectrum.top() + kernel.degree())?;
            let values = synthesize_s2(g, &grid)?;
            let image = apply_t_by_convolution(&values, spectrum.top(), &kernel, &grid)?;
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let diff = image.iter().zip(&values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            Some(diff / scale)
        }
        _ => None,
    };
    let mut out = Output::new(
        &["route", "d", "l", "degree", "residual"],
        json!({
            "coefficient_residual": coefficient,
            "convolution_residual": convolution,
            "l2_operator_norm": l2_operator_norm_bound(&kernel),
        }),
    );
    let row = |route: &str, r: f64| {
        vec![route.into(), config.d.to_string(), config.l.to_string(), spectrum.top().to_string(), num(r)]
    };
    out.row(row("coefficient", coefficient));
    if let Some(r) = convolution {
        out.row(row("convolution", r));
    }
    Ok(out)
}

const SWEEP_HEADER: [&str; 14] = [
    "family",
    "d",
    "l",
    "l0",
    "p",
    "q",
    "n",
    "m",
    "ratio",
    "theorem_bound",
    "coarse_bound",
    "classical_bound",
    "ratio_over_bound",
    "seed",
];

fn ratio(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let spectrum = spectrum(config)?;
    let (family, f): (SweepFamily, Polynomial) = if spectrum.degrees().len() == 1 {
        (SweepFamily::SingleHarmonic, ZonalPolynomial::single(dim, spectrum.top(), 1.0)?.into())
    } else {
        let g = random_lacunary_zonal(&spectrum, dim, config.seed, &CoefficientDistribution::Signs)?;
        (SweepFamily::LacunaryRandom, g.into())
    };
    let ratio = norm_quotient(&f, config.p, config.q, &norm_options(config))?;
    let report = NikolskiiReport::new(config.d, spectrum.top(), spectrum.m(), config.l, config.p, config.q, ratio);
    let row = SweepRow {
        family,
        d: config.d,
        l: config.l,
        l0: report.ell0,
        p: config.p,
        q: config.q,
        n: report.n,
        m: report.m,
        ratio,
        theorem_bound: report.theorem_bound,
        coarse_bound: report.coarse_bound,
        classical_bound: report.classical_bound,
        ratio_over_bound: report.ratio_over_bound(),
        seed: config.seed,
    };
    let mut out = Output::new(&SWEEP_HEADER, json!({ "report": report }));
    out.serialize_rows(&[row])?;
    Ok(out)
}

fn search_options(config: &RunConfig) -> SearchOptions {
    SearchOptions {
        restarts: config.restarts,
        seed: config.seed,
        budget: config.budget,
        s2: config.s2,
        norm: norm_options(config),
    }
}

fn run_sweep(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let cfg = SweepConfig {
        family: config.family,
        dim,
        ell: config.l,
        p: config.p,
        q: config.q,
        n_grid: grid(config).to_vec(),
        m_rule: config.m_rule,
        seed: config.seed,
        search: search_options(config),
        norm: norm_options(config),
    };
    let result = sweep(&cfg)?;
    let rows = result.rows();
    let warnings: Vec<_> =
        result.points.iter().map(|p| json!({ "n": p.row.n, "warnings": p.report.warnings })).collect();
    let mut out = Output::new(
        &SWEEP_HEADER,
        json!({
            "rows": rows,
            "ratio_fit": result.ratio_fit,
            "bound_fit": result.bound_fit,
            "fitted_constant": result.fitted_constant(),
            "bound_spread": result.bound_spread(),
            "warnings": warnings,
        }),
    );
    out.serialize_rows(&rows)?;
    Ok(out)
}

fn search(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let report = maximize_ratio(&spectrum(config)?, dim, config.p, config.q, &search_options(config))?;
    let mut out = Output::new(
        &["restart", "start_ratio", "final_ratio", "best_so_far", "evaluations"],
        serde_json::to_value(&report).expect("reports serialize"),
    );
    out.serialize_rows(&report.log)?;
    Ok(out)
}

/// ∫_{-1}^{1} t^{2j} (1-t²)^α dt for j = 0..=count, by the Beta-function recurrences.
fn even_moments(alpha: f64, count: usize) -> Vec<f64> {
    // mass at α, stepped down from α ∈ {0, 1/2}
    let mut alpha0 = alpha.fract();
    let mut mass = if alpha0 == 0.0 { 2.0 } else { std::f64::consts::FRAC_PI_2 };
    while alpha0 + 0.5 < alpha + 1e-12 {
        alpha0 += 1.0;
        mass *= 2.0 * alpha0 / (2.0 * alpha0 + 1.0);
    }
    let mut out = Vec::with_capacity(count + 1);
    out.push(mass);
    for j in 1..=count {
        let prev = out[j - 1];
        out.push(prev * (2 * j - 1) as f64 / (2.0 * j as f64 + 2.0 * alpha + 1.0));
    }
    out
}

fn quad_check(config: &RunConfig, dim: DimensionParams) -> Result<Output, CliError> {
    let alpha = dim.jacobi_alpha();
    let mut out = Output::new(&["alpha", "n", "exactness_degree", "max_relative_error"], serde_json::Value::Null);
    let mut worst = 0.0f64;
    let mut records = Vec::new();
    for &n in grid(config) {
        if n == 0 {
            return Err(CliError::validation("invalid_value", "rule sizes must be positive"));
        }
        let rule = gauss_jacobi_rule(alpha, n as usize)?;
        let top = rule.exactness_degree();
        let moments = even_moments(alpha, top / 2);
        let mut err = 0.0f64;
        for k in 0..=top {
            let got = rule.integrate(|t| t.powi(k as i32));
            let e = if k % 2 == 0 {
                let exact = moments[k / 2];
                (got - exact).abs() / exact
            } else {
                // odd moments vanish; measure against the mass
                got.abs() / moments[0]
            };
            err = err.max(e);
        }
        worst = worst.max(err);
        records.push(json!({ "n": n, "exactness_degree": top, "max_relative_error": err }));
        out.row(vec![num(alpha), n.to_string(), top.to_string(), num(err)]);
    }
    out.json = json!({ "alpha": alpha, "rows": records, "max_relative_error": worst });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_masses() {
        let pi = std::f64::consts::PI;
        for (alpha, mass) in [(0.0, 2.0), (0.5, pi / 2.0), (1.0, 4.0 / 3.0), (1.5, 3.0 * pi / 8.0)] {
            assert!((even_moments(alpha, 0)[0] - mass).abs() < 1e-15, "α={alpha}");
        }
        let m = even_moments(0.0, 2);
        assert!((m[1] - 2.0 / 3.0).abs() < 1e-15 && (m[2] - 0.4).abs() < 1e-15);
    }
}

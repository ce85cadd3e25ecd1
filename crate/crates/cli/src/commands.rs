//! The five subcommands. Each resolves its parameters and returns a table.

use gaussq::channels::{degraded_tmsv, FiberParams};
use gaussq::entanglement::{
    fiber_separability_threshold, is_separable, log_negativity, max_transmittable, separability_length,
    transmitted_log_negativity, LogBase, Threshold,
};
use gaussq::states::{classicality_test, GaussianState};
use gaussq::symplectic::{sigma, symplectic_eigenvalues, validate_covariance, CovarianceMatrix};
use gaussq::teleportation::{fixed_gain_fidelity_mc, teleport, TeleportSetup};
use gaussq::DEFAULT_TOL;

use crate::error::CliError;
use crate::grid::{parse_grid, parse_single};
use crate::settings::Settings;
use crate::table::{Column, Table, Value};

/// A finished table plus, when the numbers failed a validity check, the reason.
/// The table is still written so the offending rows can be inspected.
pub struct Outcome {
    pub table: Table,
    pub invalid: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self { table, invalid: None }
    }
}

fn grid(s: &Settings, key: &str, default: &str, allow_inf: bool) -> Result<Vec<f64>, CliError> {
    parse_grid(key, s.get(key).unwrap_or(default), allow_inf)
}

fn single(s: &Settings, key: &str, default: &str) -> Result<f64, CliError> {
    parse_single(key, s.get(key).unwrap_or(default), false)
}

fn non_negative(key: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|v| **v < 0.0) {
        Some(v) => Err(CliError::Input(format!("--{key} values must be ≥ 0, got {v}"))),
        None => Ok(()),
    }
}

fn absorption_length(s: &Settings) -> Result<f64, CliError> {
    let l_a = single(s, "absorption-length", "1")?;
    if l_a <= 0.0 {
        return Err(CliError::Input(format!("--absorption-length must be > 0, got {l_a}")));
    }
    Ok(l_a)
}

fn symmetric_fiber(t2: f64, r2: f64, n_th: f64) -> Result<FiberParams, CliError> {
    if !(0.0..=1.0).contains(&t2) || !(0.0..=1.0).contains(&r2) {
        return Err(CliError::Input(format!("|T|² and |R|² must lie in [0, 1], got {t2} and {r2}")));
    }
    Ok(FiberParams::new(t2.sqrt(), 0.0, r2.sqrt(), n_th)?)
}

fn threshold(t: Threshold) -> Value {
    Value::Num(t.value())
}

/// `E_N` against fiber length for a lossy but noiseless fiber (`n_th = 0`).
pub fn entanglement_sweep(s: &Settings) -> Result<Outcome, CliError> {
    let base = s.log_base()?;
    let l_a = absorption_length(s)?;
    let lengths = grid(s, "length", "0:3:31", false)?;
    let zetas = grid(s, "zeta", "inf", true)?;
    non_negative("length", &lengths)?;
    non_negative("zeta", &zetas)?;
    if let Some(text) = s.get("nth") {
        if parse_grid("nth", text, false)?.iter().any(|n| *n != 0.0) {
            return Err(CliError::Input("entanglement-sweep covers noiseless fibers only (n_th = 0)".into()));
        }
    }
    let mut rows = Vec::new();
    for &zeta in &zetas {
        for &l in &lengths {
            let e = if zeta.is_infinite() {
                max_transmittable(l, l_a, base)?
            } else {
                transmitted_log_negativity(zeta, (-l / l_a).exp(), base)?
            };
            rows.push(vec![Value::Num(l), Value::Num(l / l_a), Value::Num(zeta), Value::Num(e)]);
        }
    }
    Ok(Table {
        command: "entanglement-sweep",
        log_base: Some(base.label()),
        columns: vec![
            Column::new("length", "absorption-length units"),
            Column::new("l_over_l_A", ""),
            Column::unbounded("zeta", ""),
            Column::unbounded("E_N", base.label()),
        ],
        rows,
    }
    .into())
}

/// Closed-form fidelity of a pure squeezed signal teleported with an undisturbed TMSV.
pub fn fidelity_sweep(s: &Settings) -> Result<Outcome, CliError> {
    let etas = grid(s, "eta", "0:2:21", false)?;
    let zetas = grid(s, "zeta", "0:2:21", false)?;
    let mut rows = Vec::new();
    let mut invalid = None;
    for &eta in &etas {
        for &zeta in &zetas {
            let f = gaussq::teleportation::pure_squeezed_fidelity(eta, zeta);
            if !(0.0..=1.0 + DEFAULT_TOL).contains(&f) && invalid.is_none() {
                invalid = Some(format!("fidelity {f} outside [0, 1] at eta = {eta}, zeta = {zeta}"));
            }
            rows.push(vec![Value::Num(eta), Value::Num(zeta), Value::Num(f)]);
        }
    }
    let table = Table {
        command: "fidelity-sweep",
        log_base: None,
        columns: vec![Column::new("eta", ""), Column::new("zeta", ""), Column::new("F_qu", "")],
        rows,
    };
    Ok(Outcome { table, invalid })
}

/// Separability thresholds, cross-checked against the criterion on the degraded state.
pub fn separability_report(s: &Settings) -> Result<Outcome, CliError> {
    let l_a = absorption_length(s)?;
    let zetas = grid(s, "zeta", "0.5", false)?;
    let t2s = grid(s, "t2", "0.5", false)?;
    let r2s = grid(s, "r2", "0", false)?;
    let nths = grid(s, "nth", "0,0.5", false)?;
    non_negative("zeta", &zetas)?;
    non_negative("nth", &nths)?;
    let mut rows = Vec::new();
    let mut invalid = None;
    for &zeta in &zetas {
        for &t2 in &t2s {
            for &r2 in &r2s {
                let f = symmetric_fiber(t2, r2, 0.0)?;
                let crit = fiber_separability_threshold(zeta, f.t_mag, f.r_mag)?;
                for &n in &nths {
                    let f = symmetric_fiber(t2, r2, n)?;
                    let l_s = separability_length(zeta, n, l_a)?;
                    let verdict = is_separable(&degraded_tmsv(zeta, &f, &f)?)?;
                    let c = crit.value();
                    let clear = (n - c).abs() > 1e-6 * c.max(1.0);
                    if clear && verdict.separable != (n >= c) && invalid.is_none() {
                        invalid = Some(format!(
                            "criterion says separable = {} at n_th = {n}, threshold is {c} (zeta = {zeta}, |T|² = {t2}, |R|² = {r2})",
                            verdict.separable
                        ));
                    }
                    rows.push(vec![
                        Value::Num(zeta),
                        Value::Num(t2),
                        Value::Num(r2),
                        Value::Num(n),
                        threshold(crit),
                        threshold(l_s),
                        Value::Bool(verdict.separable),
                    ]);
                }
            }
        }
    }
    let table = Table {
        command: "separability",
        log_base: None,
        columns: vec![
            Column::new("zeta", ""),
            Column::new("t2", ""),
            Column::new("r2", ""),
            Column::new("n_th", "photons"),
            Column::unbounded("n_th_crit", "photons"),
            Column::unbounded("l_S", "absorption-length units"),
            Column::new("separable", ""),
        ],
        rows,
    };
    Ok(Outcome { table, invalid })
}

/// Full protocol for a pure squeezed signal through two identical fibers.
pub fn teleport_sweep(s: &Settings) -> Result<Outcome, CliError> {
    let etas = grid(s, "eta", "0.5", false)?;
    let zetas = grid(s, "zeta", "1", false)?;
    let t2s = grid(s, "t2", "1", false)?;
    let r2s = grid(s, "r2", "0", false)?;
    let nths = grid(s, "nth", "0", false)?;
    let samples = s.samples()?;
    let seed = s.seed()?;
    let mut columns: Vec<Column> = ["eta", "zeta", "t2", "r2"].iter().map(|k| Column::new(k, "")).collect();
    columns.push(Column::new("n_th", "photons"));
    for k in ["F_qu", "gamma_rec_xx", "gamma_rec_xp", "gamma_rec_pp", "gain_xx", "gain_xp", "gain_px", "gain_pp"] {
        columns.push(Column::new(k, ""));
    }
    if samples > 0 {
        columns.push(Column::new("F_unit_gain_mc", ""));
        columns.push(Column::new("F_unit_gain_mc_stderr", ""));
    }
    let mut rows = Vec::new();
    let mut invalid = None;
    for &eta in &etas {
        for &zeta in &zetas {
            for &t2 in &t2s {
                for &r2 in &r2s {
                    for &n in &nths {
                        let f = symmetric_fiber(t2, r2, n)?;
                        let gin = GaussianState::squeezed_signal(eta).gamma().clone();
                        let setup = TeleportSetup::new(gin, zeta, f, f)?;
                        let r = teleport(&setup)?;
                        let g = r.gamma_rec.as_matrix();
                        let report = validate_covariance(&r.gamma_rec, DEFAULT_TOL);
                        if (!report.physical || r.fidelity_zero_mean > 1.0 + DEFAULT_TOL) && invalid.is_none() {
                            invalid = Some(format!(
                                "receiver state invalid at eta = {eta}, zeta = {zeta} (min eigenvalue {:e}, F = {})",
                                report.min_eigenvalue, r.fidelity_zero_mean
                            ));
                        }
                        let mut row = vec![eta, zeta, t2, r2, n, r.fidelity_zero_mean, g[(0, 0)], g[(0, 1)], g[(1, 1)]];
                        row.extend([r.gain[(0, 0)], r.gain[(0, 1)], r.gain[(1, 0)], r.gain[(1, 1)]]);
                        if samples > 0 {
                            let mc = fixed_gain_fidelity_mc(&setup, &sigma(1), samples, seed)?;
                            row.extend([mc.mean, mc.std_error]);
                        }
                        rows.push(row.into_iter().map(Value::Num).collect());
                    }
                }
            }
        }
    }
    let table = Table { command: "teleport", log_base: None, columns, rows };
    Ok(Outcome { table, invalid })
}

fn build_state(s: &Settings) -> Result<CovarianceMatrix, CliError> {
    if let Some(text) = s.get("gamma") {
        let data = text
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Input(format!("--gamma entry {t:?} is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() || dim == 0 || !dim.is_multiple_of(2) {
            return Err(CliError::Input(format!(
                "--gamma needs (2N)² row-major entries, got {}",
                data.len()
            )));
        }
        let m = CovarianceMatrix::from_row_slice(dim, &data).map_err(|e| CliError::Input(e.to_string()))?;
        let asym = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).any(|(i, j)| {
            (data[i * dim + j] - data[j * dim + i]).abs() > DEFAULT_TOL * data[i * dim + j].abs().max(1.0)
        });
        if asym {
            return Err(CliError::Input("--gamma must be symmetric".into()));
        }
        return Ok(m);
    }
    let zeta = single(s, "zeta", "0.5")?;
    let n = single(s, "nth", "0")?;
    Ok(match s.get("state").unwrap_or("tmsv") {
        "vacuum" => GaussianState::vacuum(1).gamma().clone(),
        "thermal" => GaussianState::thermal(&[n])?.gamma().clone(),
        "squeezed" => GaussianState::squeezed(zeta, 0.0).gamma().clone(),
        "tmsv" => GaussianState::tmsv(zeta).gamma().clone(),
        "degraded-tmsv" => {
            let f = symmetric_fiber(single(s, "t2", "1")?, single(s, "r2", "0")?, n)?;
            degraded_tmsv(zeta, &f, &f)?
        }
        other => {
            return Err(CliError::Input(format!(
                "--state must be vacuum, thermal, squeezed, tmsv or degraded-tmsv, got {other:?}"
            )))
        }
    })
}

/// Physicality, classicality and (for two modes) entanglement of one state.
pub fn check_state(s: &Settings) -> Result<Outcome, CliError> {
    let base = s.log_base()?;
    let gamma = build_state(s)?;
    let report = validate_covariance(&gamma, DEFAULT_TOL);
    let nu_min = symplectic_eigenvalues(&gamma).first().copied().unwrap_or(f64::NAN);
    let mut row = vec![
        Value::Int(gamma.modes() as u64),
        Value::Bool(report.physical),
        Value::Num(report.min_eigenvalue),
        Value::Num(nu_min),
    ];
    let invalid = if report.physical {
        let c = classicality_test(&gamma, DEFAULT_TOL)?;
        row.extend([Value::Bool(c.classical), Value::Num(c.min_gamma_eigenvalue)]);
        if gamma.modes() == 2 {
            let v = is_separable(&gamma)?;
            row.extend([Value::Bool(v.separable), Value::Num(log_negativity(&gamma, base)?.e_n)]);
        } else {
            row.extend([Value::Missing, Value::Missing]);
        }
        None
    } else {
        row.extend([Value::Missing; 4]);
        Some(format!(
            "state violates the uncertainty relation (min eigenvalue of Γ + iΣ = {:e})",
            report.min_eigenvalue
        ))
    };
    let table = Table {
        command: "check-state",
        log_base: Some(base.label()),
        columns: vec![
            Column::new("modes", ""),
            Column::new("physical", ""),
            Column::new("min_eig_gamma_plus_i_sigma", ""),
            Column::new("min_symplectic_eigenvalue", ""),
            Column::new("classical", ""),
            Column::new("min_gamma_eigenvalue", ""),
            Column::new("separable", ""),
            Column::new("E_N", base.label()),
        ],
        rows: vec![row],
    };
    Ok(Outcome { table, invalid })
}

pub(crate) fn parse_log_base(text: &str) -> Result<LogBase, CliError> {
    match text {
        "e" | "ln" | "natural" => Ok(LogBase::Natural),
        "2" | "log2" => Ok(LogBase::Two),
        _ => Err(CliError::Input(format!("--log-base must be e or 2, got {text:?}"))),
    }
}

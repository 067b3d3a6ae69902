use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::PathBuf;

use qphase::extraction::{
    paired_seeds, qpeh_config, qpev_config, reconstruct_abs_a, reconstruct_cs,
};
use qphase::generator::{amplitudes_ab, amplitudes_cs, path1_phase, total_phase};
use qphase::sampling::Mode;
use qphase::sweep::{axis_points, grid, run_sweep};
use qphase::{
    decode, expected_bins, full_pipeline_with, run_qpe, Axis, DecodeOptions, Error, Exec,
    ExtractionOptions, PathParams, QpeConfig, RotationSpec, Warning,
};

use crate::args::{
    AnalyticArgs, BranchArg, Command, Format, PipelineArgs, QpehArgs, QpevArgs, Readout, SweepArgs,
};
use crate::record::{
    AnalyticRecord, ConfigRecord, DecodedRecord, ErrorRecord, HistogramRecord, RunRecord,
    SeedRecord, SweepReport, WarningRecord, VERSION,
};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const CONFIG: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub exit_code: i32,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn new(exit_code: i32, code: &str, message: impl Into<String>) -> Self {
        Failure {
            exit_code,
            code: code.to_string(),
            message: message.into(),
        }
    }

    fn record(&self) -> ErrorRecord {
        ErrorRecord {
            code: self.code.clone(),
            message: self.message.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::Size { .. } | Error::Index { .. } => exit::USAGE,
            _ => exit::CONFIG,
        };
        Failure::new(exit_code, e.code(), e.to_string())
    }
}

/// How a [`RunRecord`] is laid out as CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Histogram,
    Summary,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Report {
    Record(RunRecord, Layout),
    Sweep(SweepReport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<Failure>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(exit::OK, |f| f.exit_code)
    }
}

pub fn execute(cmd: &Command) -> Outcome {
    match cmd {
        Command::Analytic(a) => analytic(a),
        Command::Qpev(a) => qpev(a),
        Command::Qpeh(a) => qpeh(a),
        Command::Pipeline(a) => pipeline(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn finish(
    mut rec: RunRecord,
    layout: Layout,
    result: Result<(), Failure>,
    format: Format,
    out: &Option<PathBuf>,
) -> Outcome {
    let failure = result.err();
    rec.error = failure.as_ref().map(Failure::record);
    Outcome {
        report: Report::Record(rec, layout),
        failure,
        format,
        out: out.clone(),
    }
}

fn readout_echo(cmd: &mut String, r: &Readout, sample_by_default: bool) {
    let (mode, shots) = r.mode(sample_by_default);
    write!(cmd, " --n {}", r.n).unwrap();
    match mode {
        Mode::Exact => cmd.push_str(" --exact"),
        Mode::Sampled => write!(cmd, " --shots {shots} --seed {}", r.seed).unwrap(),
    }
    if let Some(w) = r.window {
        write!(cmd, " --window {w}").unwrap();
    }
    write!(cmd, " --coverage-threshold {}", r.coverage_threshold).unwrap();
    if r.allow_leakage {
        cmd.push_str(" --allow-leakage");
    }
}

fn readout_config(cfg: &mut ConfigRecord, r: &Readout, sample_by_default: bool) {
    let (mode, shots) = r.mode(sample_by_default);
    cfg.n = Some(r.n);
    cfg.mode = Some(mode);
    if mode == Mode::Sampled {
        cfg.shots = Some(shots);
        cfg.seed = Some(r.seed);
    }
    cfg.window = r.window;
    cfg.coverage_threshold = Some(r.coverage_threshold);
}

fn base_config(axis: Axis, aux: f64, r: &Readout, sample_by_default: bool, seed: u64) -> QpeConfig {
    let base = QpeConfig::new(RotationSpec::new(axis, aux)).with_counting_qubits(r.n);
    match r.mode(sample_by_default) {
        (Mode::Exact, _) => base.exact(),
        (Mode::Sampled, shots) => base.sampled(shots, seed),
    }
}

fn decode_options(r: &Readout) -> DecodeOptions {
    DecodeOptions {
        window: r.window,
        coverage_threshold: r.coverage_threshold,
    }
}

/// Rejects auxiliary angles whose eigenphases miss the counting grid unless
/// leakage was explicitly allowed.
fn check_grid(cfg: &QpeConfig, register: &str, allow_leakage: bool) -> Result<(), Failure> {
    cfg.validate()?;
    if allow_leakage || expected_bins(cfg).dyadic_exact {
        return Ok(());
    }
    Err(Failure::new(
        exit::CONFIG,
        "non_dyadic_aux",
        format!(
            "{register} auxiliary angle {} does not put the eigenphases on the {}-bit grid; \
             probability leaks into neighbouring bins (use --allow-leakage to run anyway)",
            cfg.aux.angle, cfg.counting_qubits
        ),
    ))
}

fn retag(warnings: &[Warning], register: &str) -> Vec<WarningRecord> {
    warnings
        .iter()
        .map(|w| match w {
            Warning::Leakage {
                coverage,
                threshold,
                ..
            } => WarningRecord::from(&Warning::Leakage {
                register: register.to_string(),
                coverage: *coverage,
                threshold: *threshold,
            }),
            other => WarningRecord::from(other),
        })
        .collect()
}

fn fill_leg1(a: &mut AnalyticRecord, eta: f64) {
    let cs = amplitudes_cs(eta);
    a.c = Some(cs.c);
    a.s = Some(cs.s);
    a.c2 = Some(cs.c * cs.c);
    a.s2 = Some(cs.s * cs.s);
    a.path1_phase = Some(path1_phase(eta).phase);
}

fn fill_leg2(a: &mut AnalyticRecord, p: PathParams) {
    let ab = amplitudes_ab(p);
    a.a = Some(ab.a.into());
    a.b = Some(ab.b.into());
    a.abs_a = Some(ab.a.norm());
    a.abs_a2 = Some(ab.a.norm_sqr());
    a.half_abs_a2 = Some(ab.a.norm_sqr() / 2.0);
    a.half_abs_b2 = Some(ab.b.norm_sqr() / 2.0);
    a.gamma1 = Some(ab.gamma1);
    a.gamma2 = Some(ab.gamma2);
    a.sin_delta = Some(p.delta.sin());
}

fn fill_phase(a: &mut AnalyticRecord, p: PathParams) -> Result<Option<Warning>, Failure> {
    let tp = total_phase(p)?;
    a.theta = Some(tp.theta);
    a.theta_closed_form = tp.theta_closed_form;
    a.magnitude = Some(tp.magnitude);
    Ok(tp.warning())
}

fn analytic(args: &AnalyticArgs) -> Outcome {
    let command = format!("qphase analytic --eta {} --delta {}", args.eta, args.delta);
    let config = ConfigRecord {
        eta: Some(args.eta.value),
        delta: Some(args.delta.value),
        ..Default::default()
    };
    let mut rec = RunRecord::new(command, config);
    let p = PathParams::new(args.eta.value, args.delta.value);
    let result = (|| {
        fill_leg1(&mut rec.analytic, p.eta);
        fill_leg2(&mut rec.analytic, p);
        if let Some(w) = path1_phase(p.eta).warning {
            rec.warnings.push((&w).into());
        }
        if let Some(w) = fill_phase(&mut rec.analytic, p)? {
            rec.warnings.push((&w).into());
        }
        Ok(())
    })();
    finish(
        rec,
        Layout::Summary,
        result,
        args.output.format,
        &args.output.out,
    )
}

fn qpev(args: &QpevArgs) -> Outcome {
    let r = &args.readout;
    let mut command = format!("qphase qpev --eta {} --aux {}", args.eta, args.aux);
    readout_echo(&mut command, r, true);
    let mut config = ConfigRecord {
        eta: Some(args.eta.value),
        aux_v: Some(args.aux.value),
        ..Default::default()
    };
    readout_config(&mut config, r, true);
    if config.mode == Some(Mode::Sampled) {
        config.seeds = Some(SeedRecord {
            qpev: Some(r.seed),
            qpeh: None,
        });
    }
    let mut rec = RunRecord::new(command, config);
    let result = (|| {
        let base = base_config(Axis::Y, args.aux.value, r, true, r.seed);
        let cfg = qpev_config(&base, args.eta.value);
        check_grid(&cfg, "qpev", r.allow_leakage)?;
        fill_leg1(&mut rec.analytic, args.eta.value);
        let hist = run_qpe(&cfg)?;
        rec.histograms.qpev = Some(HistogramRecord::from(&hist));
        let d = decode(&hist, &cfg, &decode_options(r))?;
        rec.decoded.qpev = Some(DecodedRecord::new(&d, r.n));
        rec.warnings.extend(retag(&d.warnings, "qpev"));
        rec.estimates.c2 = Some(d.p_plus);
        rec.estimates.s2 = Some(d.p_minus);
        let cs = reconstruct_cs(d.p_plus, d.p_minus)?;
        rec.estimates.c = Some(cs.c);
        rec.estimates.s = Some(cs.s);
        rec.residuals.c2 = rec.analytic.c2.map(|c2| d.p_plus - c2);
        Ok(())
    })();
    finish(
        rec,
        Layout::Histogram,
        result,
        args.output.format,
        &args.output.out,
    )
}

fn qpeh(args: &QpehArgs) -> Outcome {
    let r = &args.readout;
    let mut command = format!(
        "qphase qpeh --eta {} --delta {} --aux {}",
        args.eta, args.delta, args.aux
    );
    readout_echo(&mut command, r, true);
    let mut config = ConfigRecord {
        eta: Some(args.eta.value),
        delta: Some(args.delta.value),
        aux_h: Some(args.aux.value),
        ..Default::default()
    };
    readout_config(&mut config, r, true);
    if config.mode == Some(Mode::Sampled) {
        config.seeds = Some(SeedRecord {
            qpev: None,
            qpeh: Some(r.seed),
        });
    }
    let mut rec = RunRecord::new(command, config);
    let p = PathParams::new(args.eta.value, args.delta.value);
    let result = (|| {
        let base = base_config(Axis::X, args.aux.value, r, true, r.seed);
        let cfg = qpeh_config(&base, p);
        check_grid(&cfg, "qpeh", r.allow_leakage)?;
        fill_leg2(&mut rec.analytic, p);
        let hist = run_qpe(&cfg)?;
        rec.histograms.qpeh = Some(HistogramRecord::from(&hist));
        let d = decode(&hist, &cfg, &decode_options(r))?;
        rec.decoded.qpeh = Some(DecodedRecord::new(&d, r.n));
        rec.warnings.extend(retag(&d.warnings, "qpeh"));
        rec.estimates.half_abs_a2 = Some(d.p_plus);
        rec.estimates.half_abs_b2 = Some(d.p_minus);
        if d.coverage > 0.0 {
            rec.estimates.abs_a = Some(reconstruct_abs_a(d.p_plus / d.coverage));
        }
        rec.residuals.half_abs_a2 = rec.analytic.half_abs_a2.map(|h| d.p_plus - h);
        Ok(())
    })();
    finish(
        rec,
        Layout::Histogram,
        result,
        args.output.format,
        &args.output.out,
    )
}

/// Config record and QPE base configs shared by `pipeline` and `sweep`.
fn pipeline_setup(
    r: &Readout,
    aux_v: f64,
    aux_h: f64,
    branch: BranchArg,
) -> (ConfigRecord, QpeConfig, QpeConfig) {
    let (seed_v, seed_h) = paired_seeds(r.seed);
    let mut config = ConfigRecord {
        aux_v: Some(aux_v),
        aux_h: Some(aux_h),
        branch: Some(branch.into()),
        ..Default::default()
    };
    readout_config(&mut config, r, false);
    if config.mode == Some(Mode::Sampled) {
        config.seeds = Some(SeedRecord {
            qpev: Some(seed_v),
            qpeh: Some(seed_h),
        });
    }
    let v = base_config(Axis::Y, aux_v, r, false, seed_v);
    let h = base_config(Axis::X, aux_h, r, false, seed_h);
    (config, v, h)
}

fn extraction_options(r: &Readout) -> ExtractionOptions {
    ExtractionOptions {
        decode: decode_options(r),
        ..Default::default()
    }
}

fn pipeline(args: &PipelineArgs) -> Outcome {
    let r = &args.readout;
    let mut command = format!(
        "qphase pipeline --eta {} --delta {} --aux-v {} --aux-h {} --branch {}",
        args.eta,
        args.delta,
        args.aux_v,
        args.aux_h,
        args.branch.name()
    );
    readout_echo(&mut command, r, false);
    let (mut config, v, h) = pipeline_setup(r, args.aux_v.value, args.aux_h.value, args.branch);
    config.eta = Some(args.eta.value);
    config.delta = Some(args.delta.value);
    let mut rec = RunRecord::new(command, config);
    let p = PathParams::new(args.eta.value, args.delta.value);
    let result = (|| {
        check_grid(&qpev_config(&v, p.eta), "qpev", r.allow_leakage)?;
        check_grid(&qpeh_config(&h, p), "qpeh", r.allow_leakage)?;
        fill_leg1(&mut rec.analytic, p.eta);
        fill_leg2(&mut rec.analytic, p);
        fill_phase(&mut rec.analytic, p)?;
        let res = full_pipeline_with(p, &v, &h, args.branch.into(), &extraction_options(r))?;
        rec.histograms.qpev = Some(HistogramRecord::from(&res.qpev.histogram));
        rec.histograms.qpeh = Some(HistogramRecord::from(&res.qpeh.histogram));
        rec.decoded.qpev = Some(DecodedRecord::new(&res.qpev.decoded, r.n));
        rec.decoded.qpeh = Some(DecodedRecord::new(&res.qpeh.decoded, r.n));
        let e = &mut rec.estimates;
        e.c = Some(res.c_est);
        e.s = Some(res.s_est);
        e.abs_a = Some(res.abs_a_est);
        e.sin_delta = Some(res.sin_delta_est);
        e.delta = Some(res.delta_est);
        e.theta = Some(res.theta_est);
        e.c2 = Some(res.qpev.decoded.p_plus);
        e.s2 = Some(res.qpev.decoded.p_minus);
        e.half_abs_a2 = Some(res.qpeh.decoded.p_plus);
        e.half_abs_b2 = Some(res.qpeh.decoded.p_minus);
        rec.residuals.theta = Some(res.residual_theta);
        rec.residuals.c2 = rec.analytic.c2.map(|c2| res.qpev.decoded.p_plus - c2);
        rec.residuals.half_abs_a2 = rec
            .analytic
            .half_abs_a2
            .map(|x| res.qpeh.decoded.p_plus - x);
        rec.warnings = res.warnings.iter().map(WarningRecord::from).collect();
        Ok(())
    })();
    finish(
        rec,
        Layout::Summary,
        result,
        args.output.format,
        &args.output.out,
    )
}

fn check_range(name: &str, lo: f64, hi: f64) -> Result<(), Failure> {
    let inside = |x: f64| x > -FRAC_PI_2 && x < FRAC_PI_2;
    if !(inside(lo) && inside(hi)) {
        return Err(Failure::new(
            exit::USAGE,
            "range",
            format!("{name} range [{lo}, {hi}] must lie inside (-pi/2, pi/2)"),
        ));
    }
    if lo > hi {
        return Err(Failure::new(
            exit::USAGE,
            "range",
            format!("{name} range has MIN > MAX ({lo} > {hi})"),
        ));
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Outcome {
    let r = &args.readout;
    let mut command = format!(
        "qphase sweep --eta-range {} --delta-range {} --steps {} --aux-v {} --aux-h {} --branch {}",
        args.eta_range,
        args.delta_range,
        args.steps,
        args.aux_v,
        args.aux_h,
        args.branch.name()
    );
    readout_echo(&mut command, r, false);
    let (config, v, h) = pipeline_setup(r, args.aux_v.value, args.aux_h.value, args.branch);
    let mut report = SweepReport {
        command,
        config,
        rows: Vec::new(),
        error: None,
        version: VERSION,
    };
    let result = (|| {
        let (e0, e1) = (args.eta_range.min.value, args.eta_range.max.value);
        let (d0, d1) = (args.delta_range.min.value, args.delta_range.max.value);
        check_range("eta", e0, e1)?;
        check_range("delta", d0, d1)?;
        let steps = args.steps as usize;
        let points = grid(&axis_points(e0, e1, steps)?, &axis_points(d0, d1, steps)?);
        // grid alignment depends only on the auxiliary angles and n
        check_grid(&qpev_config(&v, points[0].eta), "qpev", r.allow_leakage)?;
        check_grid(&qpeh_config(&h, points[0]), "qpeh", r.allow_leakage)?;
        let opts = extraction_options(r);
        report.rows = run_sweep(&points, &v, &h, args.branch.into(), &opts, Exec::Parallel)?;
        Ok(())
    })();
    let failure = result.err();
    report.error = failure.as_ref().map(Failure::record);
    Outcome {
        report: Report::Sweep(report),
        failure,
        format: args.format,
        out: args.out.clone(),
    }
}

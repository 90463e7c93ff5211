use std::path::Path;

use crate::cli::output::OutputDir;
use crate::cli::{Axis, Cli, Command, SweepArgs, SynthArgs, Theorem, VerifyArgs};
use crate::config::{NetKind, RunConfig};
use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::io::{fmt_real, read_field, write_field_to};
use crate::lipschitz::{boundary_derivative_anchor, empirical_derivative_sup};
use crate::net::{build_indicator, build_partition, build_selector_net, default_gamma, ramp, Net};
use crate::pde::{snapshot_series, solve_steady};
use crate::verify::{
    delta_for_epsilon, manufactured_residual, node_probes, sine_truncation_bound, theorem1_constants, theorem1_probes,
    threshold_net_for_field, uniform_probes, verify_lemma1, verify_lemma2_lemma3, verify_order, verify_theorem1,
    verify_theorem2, ProbeOptions, VerificationReport, DEFAULT_PROBES, DEFAULT_SEED,
};

const DEFAULT_SIZES: [usize; 3] = [33, 65, 129];

struct Context {
    config: Option<(RunConfig, String)>,
    opts: ProbeOptions,
}

impl Context {
    fn config(&self) -> Result<&RunConfig> {
        self.config
            .as_ref()
            .map(|(c, _)| c)
            .ok_or_else(|| Error::config("this command needs --config"))
    }

    fn digest(&self) -> Option<String> {
        self.config.as_ref().map(|(_, d)| d.clone())
    }

    fn solve(&self) -> Result<ScalarField> {
        let cfg = self.config()?;
        let problem = cfg.problem()?;
        Ok(solve_steady(
            &cfg.initial_field()?,
            &problem.diffusion,
            &problem.boundary,
            &problem.config,
        )?
        .field)
    }

    /// The field named by `--field`, or the steady state of the config.
    fn field(&self, path: Option<&Path>) -> Result<ScalarField> {
        match path {
            Some(p) => read_field(p),
            None => self.solve(),
        }
    }
}

fn required(name: &str, options: &[Option<f64>]) -> Result<f64> {
    options
        .iter()
        .find_map(|v| *v)
        .ok_or_else(|| Error::config(format!("{name} is required (flag or config)")))
}

/// Runs one command. `Ok(false)` means it completed but a check failed.
pub(crate) fn run(cli: &Cli) -> Result<bool> {
    let config = cli.config.as_deref().map(RunConfig::load).transpose()?;
    let seed = cli
        .seed
        .or(config.as_ref().and_then(|(c, _)| c.seed))
        .unwrap_or(DEFAULT_SEED);
    let count = cli
        .probes
        .or(config.as_ref().and_then(|(c, _)| c.probes))
        .unwrap_or(DEFAULT_PROBES);
    if count == 0 {
        return Err(Error::config("--probes must be positive"));
    }
    let ctx = Context {
        config,
        opts: ProbeOptions { count, seed },
    };
    let mut out = OutputDir::prepare(&cli.out)?;
    let (name, outcome) = match &cli.command {
        Command::Solve => ("solve".to_string(), cmd_solve(&ctx, &mut out)),
        Command::Synth(a) => ("synth".to_string(), cmd_synth(&ctx, a, &mut out)),
        Command::Verify(a) => (
            format!("verify {}", theorem_name(a.theorem)),
            cmd_verify(&ctx, a, &mut out),
        ),
        Command::Sweep(a) => (format!("sweep {}", axis_name(a.axis)), cmd_sweep(&ctx, a, &mut out)),
    };
    // The manifest is written even after a failure so that every file in
    // the directory stays accounted for.
    out.finish(
        &name,
        cli.config.as_ref().map(|p| p.display().to_string()),
        ctx.digest(),
        seed,
    )?;
    outcome
}

fn theorem_name(t: Theorem) -> &'static str {
    match t {
        Theorem::T1 => "t1",
        Theorem::T2 => "t2",
        Theorem::L1 => "l1",
        Theorem::L2l3 => "l2l3",
        Theorem::Order => "order",
    }
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::Epsilon => "epsilon",
        Axis::Delta => "delta",
        Axis::R => "r",
        Axis::N => "n",
    }
}

fn field_csv(field: &ScalarField) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_field_to(&mut buf, field, "u")?;
    Ok(buf)
}

fn cmd_solve(ctx: &Context, out: &mut OutputDir) -> Result<bool> {
    let cfg = ctx.config()?;
    let problem = cfg.problem()?;
    let init = cfg.initial_field()?;
    if problem.config.snapshot_times.is_some() {
        for (t, field) in snapshot_series(&init, &problem.diffusion, &problem.boundary, &problem.config)? {
            out.write(&format!("field_t{t}.csv"), &field_csv(&field)?)?;
        }
    }
    let steady = solve_steady(&init, &problem.diffusion, &problem.boundary, &problem.config)?;
    out.write("field.csv", &field_csv(&steady.field)?)?;
    Ok(true)
}

/// `x[,y],g,h,abs_err` over the probes.
fn error_csv(net: &Net, field: &ScalarField, probes: &[Vec<f64>]) -> Result<Vec<u8>> {
    let dim = field.grid().dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = ["x", "y"][..dim].to_vec();
    header.extend(["g", "h", "abs_err"]);
    w.write_record(&header)?;
    for x in probes {
        let g = field.interpolate(x)?;
        let h = net.eval(x).map_err(|e| Error::Evaluation {
            probe: x.clone(),
            reason: e.to_string(),
        })?;
        let mut row: Vec<String> = x.iter().map(|&c| fmt_real(c)).collect();
        row.extend([fmt_real(g), fmt_real(h), fmt_real((h - g).abs())]);
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Error::invalid(e.to_string()))
}

/// One-sided ramp and two-sided trapezoid of a sample unit on `[0.4, 0.6]`
/// with margin 0.1, sampled on 201 points.
fn ramp_csv() -> Result<Vec<u8>> {
    let (a, b, gamma) = (0.4, 0.6, 0.1);
    let unit = build_indicator(a, b, gamma)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "one_sided", "two_sided"])?;
    for i in 0..=200 {
        let x = i as f64 / 200.0;
        w.write_record([fmt_real(x), fmt_real(ramp(x, a - gamma, a)), fmt_real(unit.eval(x))])?;
    }
    w.into_inner().map_err(|e| Error::invalid(e.to_string()))
}

fn net_probes(net: &Net, field: &ScalarField, opts: &ProbeOptions) -> Vec<Vec<f64>> {
    match net {
        Net::Threshold(t) => theorem1_probes(field, t, opts),
        Net::Selector(_) => {
            let mut p = uniform_probes(2.min(field.grid().dim()), opts.count, opts.seed);
            p.extend(node_probes(field.grid()));
            p
        }
    }
}

fn cmd_synth(ctx: &Context, args: &SynthArgs, out: &mut OutputDir) -> Result<bool> {
    let field = ctx.field(args.field.as_deref())?;
    let synth = ctx.config.as_ref().map(|(c, _)| c.synth.clone()).unwrap_or_default();
    let net = match &args.net {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Net::from_json(&text)?
        }
        None => {
            let kind = args
                .kind
                .map(NetKind::from)
                .or(synth.kind)
                .ok_or_else(|| Error::config("net kind is required (--kind or synth.kind)"))?;
            match kind {
                NetKind::Threshold => {
                    if field.grid().dim() != 1 {
                        return Err(Error::config("threshold nets need a 1D field"));
                    }
                    let cfg = ctx.config()?;
                    let epsilon = required("epsilon", &[args.epsilon, synth.epsilon])?;
                    let problem = cfg.problem()?;
                    let anchor = boundary_derivative_anchor(&problem.boundary, field.grid())?;
                    let (k, _) = theorem1_constants(&problem, field.grid().spacing(), epsilon, anchor)?;
                    Net::Threshold(threshold_net_for_field(&field, k.m)?)
                }
                NetKind::Selector => {
                    let delta = required("delta", &[args.delta, synth.delta])?;
                    let gamma = match args.gamma.or(synth.gamma) {
                        Some(g) => g,
                        None => default_gamma(&build_partition(field.grid().dim(), delta)?),
                    };
                    Net::Selector(build_selector_net(
                        |x| field.interpolate(x),
                        delta,
                        gamma,
                        field.grid().dim(),
                    )?)
                }
            }
        }
    };
    if net.dim() != field.grid().dim() {
        return Err(Error::config(format!(
            "net is {}D but the field is {}D",
            net.dim(),
            field.grid().dim()
        )));
    }
    out.write("net.json", (net.to_json()? + "\n").as_bytes())?;
    let probes = net_probes(&net, &field, &ctx.opts);
    out.write("errors.csv", &error_csv(&net, &field, &probes)?)?;
    out.write("ramps.csv", &ramp_csv()?)?;
    Ok(true)
}

fn gamma_or_default(gamma: Option<f64>, dim: usize, delta: f64) -> Result<f64> {
    match gamma {
        Some(g) => Ok(g),
        None => Ok(default_gamma(&build_partition(dim, delta)?)),
    }
}

fn run_verifier(ctx: &Context, args: &VerifyArgs) -> Result<VerificationReport> {
    if args.theorem == Theorem::Order {
        let sizes = args
            .sizes
            .clone()
            .or(ctx.config.as_ref().and_then(|(c, _)| c.verify.sizes.clone()))
            .unwrap_or(DEFAULT_SIZES.to_vec());
        return verify_order(&sizes);
    }
    let field = ctx.field(args.field.as_deref())?;
    let vs = ctx.config.as_ref().map(|(c, _)| c.verify.clone()).unwrap_or_default();
    match args.theorem {
        Theorem::T1 => {
            let problem = ctx.config()?.problem()?;
            let epsilon = required("epsilon", &[args.epsilon, vs.epsilon])?;
            let anchor = boundary_derivative_anchor(&problem.boundary, field.grid())?;
            verify_theorem1(&problem, &field, epsilon, anchor, &ctx.opts)
        }
        Theorem::T2 => {
            let problem = ctx.config()?.problem()?;
            let delta = required("delta", &[args.delta, vs.delta])?;
            let gamma = gamma_or_default(args.gamma.or(vs.gamma), 2, delta)?;
            verify_theorem2(&problem, &field, delta, gamma, &ctx.opts)
        }
        Theorem::L1 => {
            let cells = args
                .tiling
                .clone()
                .or(vs.tiling)
                .ok_or_else(|| Error::config("tiling is required (--tiling or verify.tiling)"))?;
            let tiling = crate::net::RectPartition::uniform(cells)?;
            verify_lemma1(&field, &tiling)
        }
        Theorem::L2l3 => verify_lemma2_lemma3(&ctx.config()?.problem()?, &field),
        Theorem::Order => unreachable!(),
    }
}

fn cmd_verify(ctx: &Context, args: &VerifyArgs, out: &mut OutputDir) -> Result<bool> {
    let mut report = run_verifier(ctx, args)?;
    if !args.timing {
        report.runtime_ms = 0;
    }
    out.write("report.json", (report.to_json()? + "\n").as_bytes())?;
    Ok(report.status.is_pass())
}

struct SweepRow {
    value: f64,
    count: usize,
    measured: f64,
    bound: f64,
    pass: bool,
}

impl SweepRow {
    fn from_report(value: f64, count: usize, report: &VerificationReport) -> Self {
        Self {
            value,
            count,
            measured: report.measured,
            bound: report.predicted + report.tolerance,
            pass: report.status.is_pass(),
        }
    }
}

fn selector_count(report: &VerificationReport) -> usize {
    report.inputs.layer_sizes.as_ref().map_or(0, |s| s[1])
}

fn cmd_sweep(ctx: &Context, args: &SweepArgs, out: &mut OutputDir) -> Result<bool> {
    let cfg = ctx.config()?;
    let values = args
        .values
        .clone()
        .or(cfg.sweep.values.clone())
        .ok_or_else(|| Error::config("sweep values are required (--values or sweep.values)"))?;
    if values.len() < 2 {
        return Err(Error::config("a sweep needs at least 2 values"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config("sweep values must be finite"));
    }
    let dim = cfg.dim;
    let eps_cfg = args.epsilon.or(cfg.verify.epsilon);
    let delta_cfg = args.delta.or(cfg.verify.delta);
    let gamma_cfg = args.gamma.or(cfg.verify.gamma);

    let mut rows = Vec::new();
    match args.axis {
        Axis::Epsilon | Axis::Delta => {
            let field = ctx.solve()?;
            let problem = cfg.problem()?;
            for &v in &values {
                let row = match (args.axis, dim) {
                    (Axis::Epsilon, 1) => {
                        let anchor = boundary_derivative_anchor(&problem.boundary, field.grid())?;
                        let rep = verify_theorem1(&problem, &field, v, anchor, &ctx.opts)?;
                        SweepRow::from_report(v, rep.inputs.m.unwrap_or(0), &rep)
                    }
                    (Axis::Epsilon, _) => {
                        let delta = delta_for_epsilon(v, empirical_derivative_sup(&field).rho)?;
                        let rep = verify_theorem2(
                            &problem,
                            &field,
                            delta,
                            gamma_or_default(gamma_cfg, 2, delta)?,
                            &ctx.opts,
                        )?;
                        SweepRow::from_report(v, selector_count(&rep), &rep)
                    }
                    (_, 2) => {
                        let rep = verify_theorem2(&problem, &field, v, gamma_or_default(gamma_cfg, 2, v)?, &ctx.opts)?;
                        SweepRow::from_report(v, selector_count(&rep), &rep)
                    }
                    _ => return Err(Error::config("a delta sweep needs a 2D config")),
                };
                rows.push(row);
            }
        }
        Axis::R => {
            for &v in &values {
                let mut c = cfg.clone();
                c.r = v;
                let problem = c.problem()?;
                let field = solve_steady(
                    &c.initial_field()?,
                    &problem.diffusion,
                    &problem.boundary,
                    &problem.config,
                )?
                .field;
                let row = if dim == 1 {
                    let epsilon = eps_cfg.ok_or_else(|| Error::config("an r sweep in 1D needs epsilon"))?;
                    let anchor = boundary_derivative_anchor(&problem.boundary, field.grid())?;
                    let rep = verify_theorem1(&problem, &field, epsilon, anchor, &ctx.opts)?;
                    SweepRow::from_report(v, rep.inputs.m.unwrap_or(0), &rep)
                } else {
                    let delta = delta_cfg.ok_or_else(|| Error::config("an r sweep in 2D needs delta"))?;
                    let rep = verify_theorem2(
                        &problem,
                        &field,
                        delta,
                        gamma_or_default(gamma_cfg, 2, delta)?,
                        &ctx.opts,
                    )?;
                    SweepRow::from_report(v, selector_count(&rep), &rep)
                };
                rows.push(row);
            }
        }
        Axis::N => {
            for &v in &values {
                if v < 3.0 || v.fract() != 0.0 {
                    return Err(Error::config(format!("grid size {v} is not an integer >= 3")));
                }
                let n = v as usize;
                let residual = manufactured_residual(dim, n, cfg.r)?;
                let bound = sine_truncation_bound(1.0, dim, 1.0 / (n - 1) as f64);
                rows.push(SweepRow {
                    value: v,
                    count: n,
                    measured: residual,
                    bound,
                    pass: residual <= bound,
                });
            }
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["value", "count", "measured_error", "predicted_bound", "pass"])?;
    for r in &rows {
        w.write_record([
            fmt_real(r.value),
            r.count.to_string(),
            fmt_real(r.measured),
            fmt_real(r.bound),
            r.pass.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    out.write("sweep.csv", &bytes)?;
    Ok(rows.iter().all(|r| r.pass))
}

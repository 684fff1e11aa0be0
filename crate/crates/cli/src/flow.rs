use cremona::flows::{continuum_limit_experiment, rk4_integrate, ContinuumReport, Family};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Format, Sink};

#[derive(Serialize)]
struct FlowSummary {
    family: String,
    samples: usize,
    x_end: f64,
    stopped: Option<String>,
    /// Largest value of each invariant column.
    invariants: Vec<(String, f64)>,
}

/// Integrates the configured family. Affine even families get a `sum_drift`
/// column, odd families `even_scaled` and `odd_scaled` columns holding the
/// relative change of the index sums times `exp(-delta (x - x0)/2)`.
pub fn integrate(cfg: &RunConfig, sink: &Sink) -> Result<bool, CliError> {
    let (spec, y0) = cfg.flow_spec()?;
    let f = &cfg.flow;
    let t = rk4_integrate(&spec, &y0, f.x0, f.x1, f.step)?;
    let mut header = t.header();
    let mut rows = t.rows();
    let mut invariants: Vec<(String, f64)> = Vec::new();
    let mut add_column = |name: &str, vals: Vec<f64>, header: &mut Vec<String>| {
        header.push(name.to_string());
        for (r, v) in rows.iter_mut().zip(&vals) {
            r.push(format!("{v:.6e}"));
        }
        invariants.push((name.to_string(), vals.iter().fold(0.0, |m, v| f64::max(m, v.abs()))));
    };
    match spec.family {
        Family::AEven(_) => {
            let s0: f64 = y0.iter().sum();
            let vals = t
                .xs
                .iter()
                .zip(&t.states)
                .map(|(x, s)| s.iter().sum::<f64>() - (s0 + spec.delta() * (x - f.x0)))
                .collect();
            add_column("sum_drift", vals, &mut header);
        }
        Family::AOdd(_) => {
            for (name, start) in [("even_scaled", 0), ("odd_scaled", 1)] {
                let sum = |s: &[f64]| s.iter().skip(start).step_by(2).sum::<f64>();
                let c0 = sum(&y0);
                let vals = t
                    .xs
                    .iter()
                    .zip(&t.states)
                    .map(|(x, s)| (sum(s) * (-spec.delta() / 2.0 * (x - f.x0)).exp() - c0) / c0)
                    .collect();
                add_column(name, vals, &mut header);
            }
        }
        Family::P2 => {}
    }
    sink.table(&header, &rows)?;
    let summary = FlowSummary {
        family: spec.family.to_string(),
        samples: t.xs.len(),
        x_end: *t.xs.last().expect("start sample"),
        stopped: t.stopped.clone(),
        invariants,
    };
    let text = match sink.format {
        Format::Json => sink.json(&summary),
        _ => {
            let mut s = format!(
                "{} on [{}, {}]: {} samples, step {}\n",
                summary.family, f.x0, summary.x_end, summary.samples, t.step
            );
            for (name, v) in &summary.invariants {
                s.push_str(&format!("max |{name}| = {v:.3e}\n"));
            }
            if let Some(why) = &summary.stopped {
                s.push_str(&format!("stopped: {why}\n"));
            }
            s
        }
    };
    sink.summary(&text)?;
    Ok(t.stopped.is_none())
}

fn continuum_text(r: &ContinuumReport, f: Format) -> String {
    let lines = [
        format!("matching: {}", r.matching),
        format!("eps = {}: {} steps, max |psi_disc - psi_ode| = {:.4e}", r.coarse.eps, r.coarse.steps, r.coarse.max_error),
        format!("eps = {}: {} steps, max |psi_disc - psi_ode| = {:.4e}", r.fine.eps, r.fine.steps, r.fine.max_error),
        format!("ratio = {:.4}", r.ratio),
    ];
    match f {
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{rrr}\n$\\varepsilon$ & steps & $\\max|\\psi_{disc}-\\psi_{ODE}|$ \\\\\n");
            for run in [&r.coarse, &r.fine] {
                s.push_str(&format!("{} & {} & {:.4e} \\\\\n", run.eps, run.steps, run.max_error));
            }
            s.push_str(&format!("\\end{{tabular}}\n% ratio {:.4}\n", r.ratio));
            s
        }
        _ => lines.join("\n") + "\n",
    }
}

/// Runs the dP2 to P2 comparison at `eps` and `eps/2`; the table holds the
/// samples of both runs.
pub fn continuum(cfg: &RunConfig, sink: &Sink) -> Result<bool, CliError> {
    let r = continuum_limit_experiment(cfg.continuum.eps, &cfg.continuum.params())?;
    let header: Vec<String> = ["eps", "x", "psi_disc", "psi_ode"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = [&r.coarse, &r.fine]
        .iter()
        .flat_map(|run| {
            run.samples
                .iter()
                .map(move |(x, d, o)| vec![run.eps.to_string(), format!("{x:.6}"), format!("{d:.12e}"), format!("{o:.12e}")])
        })
        .collect();
    sink.table(&header, &rows)?;
    let text = match sink.format {
        Format::Json => sink.json(&serde_json::json!({
            "params": r.params,
            "matching": r.matching,
            "coarse": { "eps": r.coarse.eps, "steps": r.coarse.steps, "max_error": r.coarse.max_error },
            "fine": { "eps": r.fine.eps, "steps": r.fine.steps, "max_error": r.fine.max_error },
            "ratio": r.ratio,
        })),
        f => continuum_text(&r, f),
    };
    sink.summary(&text)?;
    Ok((1.5..=2.5).contains(&r.ratio))
}

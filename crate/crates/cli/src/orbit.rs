use std::fmt::Display;

use cremona::latticedyn::{
    dp2_orbit, orbit_iterate, translation_word, AffineA, Direction, Dp2Params, Orbit, OrbitState,
};
use cremona::symfield::Scalar;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::config::{parse_rational, OrbitSection, RunConfig};
use crate::error::CliError;
use crate::output::{Format, Sink};

pub fn dp2_params(o: &OrbitSection) -> Result<Dp2Params<BigRational>, CliError> {
    Ok(Dp2Params {
        c: parse_rational(&o.c)?,
        alpha0: parse_rational(&o.alpha0)?,
        alpha1: parse_rational(&o.alpha1)?,
        delta: parse_rational(&o.delta)?,
    })
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn direction(o: &OrbitSection) -> Result<Direction, CliError> {
    match o.direction.to_ascii_lowercase().as_str() {
        "forward" | "+" => Ok(Direction::Forward),
        "backward" | "-" => Ok(Direction::Backward),
        d => Err(CliError::Config(format!("orbit.direction must be forward or backward, got {d:?}"))),
    }
}

#[derive(Serialize)]
struct OrbitSummary {
    kind: String,
    exact: bool,
    steps_requested: usize,
    steps_done: usize,
    stopped: Option<String>,
}

impl OrbitSummary {
    fn render(&self, f: Format) -> String {
        match f {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(self).expect("serializable")),
            _ => {
                let mut s = format!(
                    "{} orbit ({}): {} of {} steps\n",
                    self.kind,
                    if self.exact { "exact" } else { "float" },
                    self.steps_done,
                    self.steps_requested
                );
                if let Some(why) = &self.stopped {
                    s.push_str(&format!("stopped: {why}\n"));
                }
                s
            }
        }
    }
}

/// Header, rows, stop reason, completed steps.
type Table = (Vec<String>, Vec<Vec<String>>, Option<String>, usize);

fn dp2_table<T: Scalar + Display>(
    start: (T, T),
    p: &Dp2Params<T>,
    o: &OrbitSection,
) -> Result<Table, CliError> {
    let d = dp2_orbit(start, p, o.n0, o.steps, direction(o)?);
    let rows = d
        .states
        .iter()
        .map(|(n, a, b)| vec![n.to_string(), a.to_string(), b.to_string()])
        .collect();
    Ok((vec!["n".into(), "f0".into(), "f1".into()], rows, d.stopped, d.states.len() - 1))
}

fn shift_table<T: Scalar + Display>(orbit: Orbit<T>) -> Table {
    let stopped = orbit
        .pole
        .as_ref()
        .map(|p| format!("pole at step {} in f{}: denominator {} vanishes", p.step, p.j, p.expr));
    (orbit.header(), orbit.rows(), stopped, orbit.states.len() - 1)
}

pub fn run(cfg: &RunConfig, sink: &Sink) -> Result<bool, CliError> {
    let o = &cfg.orbit;
    let (header, rows, stopped, done) = match o.kind.as_str() {
        "dp2" => {
            let p = dp2_params(o)?;
            let (f0, f1) = (parse_rational(&o.f0)?, parse_rational(&o.f1)?);
            if o.exact {
                dp2_table((f0, f1), &p, o)?
            } else {
                let pf = Dp2Params {
                    c: to_f64(&p.c),
                    alpha0: to_f64(&p.alpha0),
                    alpha1: to_f64(&p.alpha1),
                    delta: to_f64(&p.delta),
                };
                dp2_table((to_f64(&f0), to_f64(&f1)), &pf, o)?
            }
        }
        "shift" => {
            let ctx = AffineA::new(cfg.root.affine_rank()?)?;
            let n = ctx.l() + 1;
            let tw = translation_word(&ctx, o.shift)?;
            if o.alpha.len() != n || o.f.len() != n {
                return Err(CliError::Config(format!("orbit.alpha and orbit.f need {n} entries each")));
            }
            let alpha = o.alpha.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
            let f = o.f.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
            if o.exact {
                shift_table(orbit_iterate(ctx.rep(), &OrbitState::start(ctx.l(), alpha, f), &tw, o.steps)?)
            } else {
                let alpha = alpha.iter().map(to_f64).collect();
                let f = f.iter().map(to_f64).collect();
                shift_table(orbit_iterate(ctx.rep(), &OrbitState::start(ctx.l(), alpha, f), &tw, o.steps)?)
            }
        }
        k => return Err(CliError::Config(format!("orbit.kind must be dp2 or shift, got {k:?}"))),
    };
    sink.table(&header, &rows)?;
    let summary = OrbitSummary {
        kind: if o.kind == "shift" { format!("T{}", o.shift) } else { "dP2".into() },
        exact: o.exact,
        steps_requested: o.steps,
        steps_done: done,
        stopped: stopped.clone(),
    };
    sink.summary(&summary.render(sink.format))?;
    Ok(stopped.is_none())
}

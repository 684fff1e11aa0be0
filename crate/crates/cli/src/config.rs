//! Run configuration: built-in defaults, then a named preset, then the
//! config file, then command-line overrides.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use cremona::birep::BirationalRep;
use cremona::flows::{ContinuumParams, Family, FlowSpec};
use cremona::rootdata::{CartanMatrix, OrientationMatrix, OrientationMode};
use cremona::symfield::{Rf, VarRegistry};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use toml::Value;

use crate::error::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub root: RootSection,
    pub verify: VerifySection,
    pub orbit: OrbitSection,
    pub flow: FlowSection,
    pub continuum: ContinuumSection,
    pub scan: ScanSection,
}

/// Cartan matrix and orientation.
///
/// `cartan` is one of `A1l:<l>` (also `A(1)_<l>`), `A:<n>`, `A1xA1`, `B2`,
/// `G2`, or `matrix` for the explicit `matrix` field. `orientation` is
/// `cyclic`, `symbolic`, `zero`, or `explicit` (entries in `u`, rational
/// numbers written as strings).
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RootSection {
    pub cartan: String,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub orientation: String,
    pub u: Option<Vec<Vec<String>>>,
    pub mode: String,
}

impl Default for RootSection {
    fn default() -> Self {
        RootSection {
            cartan: "A1l:2".into(),
            matrix: None,
            orientation: "cyclic".into(),
            u: None,
            mode: "thmA".into(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub suites: Vec<String>,
    /// Longest word in the exhaustive cocycle suite.
    pub max_len: usize,
    /// Number of random word pairs in `cocycle-random`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            suites: Vec::new(),
            max_len: 3,
            samples: 40,
            seed: 0,
        }
    }
}

/// `kind = "dp2"` iterates the second discrete Painleve equation from
/// `(f0, f1)`; `kind = "shift"` iterates `T_<shift>` on the full A(1)_l
/// state `(alpha, f)`. Numbers are strings so that `1/4` stays exact.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitSection {
    pub kind: String,
    pub exact: bool,
    pub steps: usize,
    pub direction: String,
    pub n0: i64,
    pub c: String,
    pub alpha0: String,
    pub alpha1: String,
    pub delta: String,
    pub f0: String,
    pub f1: String,
    pub shift: usize,
    pub alpha: Vec<String>,
    pub f: Vec<String>,
}

impl Default for OrbitSection {
    fn default() -> Self {
        OrbitSection {
            kind: "dp2".into(),
            exact: true,
            steps: 20,
            direction: "forward".into(),
            n0: 0,
            c: "2".into(),
            alpha0: "1/4".into(),
            alpha1: "1/4".into(),
            delta: "1/2".into(),
            f0: "1".into(),
            f1: "1".into(),
            shift: 1,
            alpha: Vec::new(),
            f: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSection {
    pub family: String,
    pub alpha: Vec<f64>,
    pub b1: f64,
    pub initial: Vec<f64>,
    pub x0: f64,
    pub x1: f64,
    pub step: f64,
    /// Words whose commutation with the flow `verify backlund` checks.
    pub words: Vec<String>,
}

impl Default for FlowSection {
    fn default() -> Self {
        FlowSection {
            family: "sp4".into(),
            alpha: vec![0.2, 0.3, 0.4],
            b1: 0.6,
            initial: vec![0.5, -0.3, 0.8],
            x0: 0.0,
            x1: 1.0,
            step: 1e-3,
            words: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuumSection {
    pub eps: f64,
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub x0: f64,
    pub psi0: f64,
    pub dpsi0: f64,
    pub window: f64,
    pub substeps: usize,
}

impl Default for ContinuumSection {
    fn default() -> Self {
        let p = ContinuumParams::default();
        ContinuumSection {
            eps: 0.1,
            a0: p.a0,
            a1: p.a1,
            b1: p.b1,
            x0: p.x0,
            psi0: p.psi0,
            dpsi0: p.dpsi0,
            window: p.window,
            substeps: p.substeps,
        }
    }
}

impl ContinuumSection {
    pub fn params(&self) -> ContinuumParams {
        ContinuumParams {
            a0: self.a0,
            a1: self.a1,
            b1: self.b1,
            x0: self.x0,
            psi0: self.psi0,
            dpsi0: self.dpsi0,
            window: self.window,
            substeps: self.substeps,
        }
    }
}

/// The scan replaces the root orientation with `orientation` (symbolic
/// atoms by default) and validates it in conjecture mode.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    pub max_len: usize,
    pub orientation: String,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            max_len: 6,
            orientation: "symbolic".into(),
        }
    }
}

pub const PRESETS: &[(&str, &str)] = &[
    ("A1l:<l>", "A(1)_l with the cyclic orientation"),
    ("dp2", "exact dP2 orbit, c = 2, alpha0 = alpha1 = 1/4, delta = 1/2, 20 steps"),
    ("sp4", "symmetric form of P_IV (A_even(1)) on [0, 1]"),
    ("pv", "P_V form (A_odd(1)) on [0, 1]"),
    ("a_even:<n>", "A_even(n) flow on A(1)_2n"),
    ("a_odd:<n>", "A_odd(n) flow on A(1)_(2n+1)"),
    ("p2", "second Painleve equation, b1 = 0.6"),
    ("continuum", "dP2 to P2 limit, eps = 0.1 and 0.05"),
    ("conjecture", "polynomiality scan on A(1)_2 with symbolic orientation"),
];

fn affine_flow_preset(family: Family) -> String {
    let n = family.dim();
    let l = n - 1;
    let alpha: Vec<String> = (0..n).map(|j| format!("{:.2}", 0.1 + 0.05 * j as f64)).collect();
    let init: Vec<String> = (0..n)
        .map(|j| format!("{:.2}", if j % 2 == 0 { 0.6 + 0.1 * j as f64 } else { -0.2 - 0.05 * j as f64 }))
        .collect();
    format!(
        "[root]\ncartan = \"A1l:{l}\"\n[flow]\nfamily = \"{family}\"\nalpha = [{}]\ninitial = [{}]\n",
        alpha.join(", "),
        init.join(", ")
    )
}

/// TOML text of a named preset.
pub fn preset_toml(name: &str) -> Result<String, CliError> {
    let lower = name.trim().to_ascii_lowercase();
    if let Some(l) = lower.strip_prefix("a1l:") {
        let l: usize = l.parse().map_err(|_| CliError::Config(format!("bad preset {name:?}")))?;
        return Ok(format!("[root]\ncartan = \"A1l:{l}\"\norientation = \"cyclic\"\n"));
    }
    let text = match lower.as_str() {
        "dp2" => "[root]\ncartan = \"A1l:2\"\n[orbit]\nkind = \"dp2\"\nexact = true\nsteps = 20\n\
                  c = \"2\"\nalpha0 = \"1/4\"\nalpha1 = \"1/4\"\ndelta = \"1/2\"\nf0 = \"1\"\nf1 = \"1\"\n"
            .to_string(),
        "sp4" => "[root]\ncartan = \"A1l:2\"\n[flow]\nfamily = \"sp4\"\nalpha = [0.2, 0.3, 0.4]\n\
                  initial = [0.5, -0.3, 0.8]\nwords = [\"s0\", \"s1\", \"s2\", \"pi\"]\n"
            .to_string(),
        "pv" => "[root]\ncartan = \"A1l:3\"\n[flow]\nfamily = \"pv\"\nalpha = [0.1, 0.2, 0.3, 0.15]\n\
                 initial = [0.4, 0.3, -0.2, 0.5]\n"
            .to_string(),
        "p2" => "[flow]\nfamily = \"p2\"\nb1 = 0.6\ninitial = [0.3, 0.1]\n".to_string(),
        "continuum" => "[continuum]\neps = 0.1\n".to_string(),
        "conjecture" => "[root]\ncartan = \"A1l:2\"\norientation = \"symbolic\"\nmode = \"conjecture\"\n\
                         [scan]\nmax_len = 6\norientation = \"symbolic\"\n"
            .to_string(),
        _ => {
            let known: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            let family = Family::from_str(&lower).map_err(|_| {
                CliError::Config(format!("unknown preset {name:?}; known: {}", known.join(", ")))
            })?;
            if family == Family::P2 {
                unreachable!("handled above");
            }
            affine_flow_preset(family)
        }
    };
    Ok(text)
}

/// Recursive merge: tables merge key by key, anything else is replaced.
fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Table(b), Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn parse_table(text: &str) -> Result<Value, CliError> {
    Ok(Value::Table(toml::from_str::<toml::Table>(text)?))
}

impl RunConfig {
    /// Loads `path` (if any) on top of `preset` (or the file's own
    /// `preset` key), then validates the root data.
    pub fn load(path: Option<&Path>, preset: Option<&str>) -> Result<RunConfig, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| CliError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                parse_table(&text)?
            }
            None => Value::Table(Default::default()),
        };
        let preset = preset
            .map(str::to_string)
            .or_else(|| file.get("preset").and_then(Value::as_str).map(str::to_string));
        let mut merged = match &preset {
            Some(name) => parse_table(&preset_toml(name)?)?,
            None => Value::Table(Default::default()),
        };
        merge(&mut merged, file);
        if let Some(name) = preset {
            merge(&mut merged, Value::Table([("preset".to_string(), Value::String(name))].into_iter().collect()));
        }
        let cfg: RunConfig = merged.try_into()?;
        cfg.root.build()?;
        Ok(cfg)
    }

    pub fn flow_spec(&self) -> Result<(FlowSpec, Vec<f64>), CliError> {
        let family: Family = self.flow.family.parse()?;
        let spec = match family {
            Family::P2 => FlowSpec::p2(self.flow.b1),
            _ => FlowSpec::affine(family, self.flow.alpha.clone())?,
        };
        if self.flow.initial.len() != family.dim() {
            return Err(CliError::Config(format!(
                "flow.initial has {} entries, {family} needs {}",
                self.flow.initial.len(),
                family.dim()
            )));
        }
        Ok((spec, self.flow.initial.clone()))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let t = s.trim();
    if let Ok(q) = BigRational::from_str(t) {
        return Ok(q);
    }
    // Terminating decimals such as 0.25.
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        if let Ok(n) = num_bigint::BigInt::from_str(&digits) {
            let d = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
            return Ok(BigRational::new(n, d));
        }
    }
    Err(CliError::Config(format!("not a rational number: {s:?}")))
}

impl RootSection {
    pub fn with_l(&self, l: usize) -> RootSection {
        RootSection {
            cartan: format!("A1l:{l}"),
            matrix: None,
            ..self.clone()
        }
    }

    pub fn cartan_matrix(&self) -> Result<CartanMatrix, CliError> {
        let name = self.cartan.trim();
        let lower = name.to_ascii_lowercase();
        let num = |s: &str| -> Result<usize, CliError> {
            s.trim_end_matches(')').parse().map_err(|_| CliError::Config(format!("bad Cartan name {name:?}")))
        };
        let a = if let Some(l) = lower.strip_prefix("a1l:").or_else(|| lower.strip_prefix("a(1)_")) {
            CartanMatrix::affine_a(num(l)?)?
        } else if let Some(n) = lower.strip_prefix("a:") {
            CartanMatrix::finite_a(num(n)?)?
        } else {
            match lower.as_str() {
                "a2" => CartanMatrix::finite_a(2)?,
                "a1xa1" => CartanMatrix::rank2(0, 0)?,
                "b2" => CartanMatrix::rank2(-2, -1)?,
                "g2" => CartanMatrix::rank2(-3, -1)?,
                "matrix" => CartanMatrix::new(
                    self.matrix
                        .clone()
                        .ok_or_else(|| CliError::Config("cartan = \"matrix\" needs root.matrix".into()))?,
                )?,
                _ => return Err(CliError::Config(format!("unknown Cartan matrix {name:?}"))),
            }
        };
        Ok(a)
    }

    pub fn mode(&self) -> Result<OrientationMode, CliError> {
        Ok(self.mode.parse()?)
    }

    /// Validated representation.
    pub fn build(&self) -> Result<BirationalRep, CliError> {
        let a = self.cartan_matrix()?;
        let mode = self.mode()?;
        let reg = Arc::new(VarRegistry::with_rank(a.size()));
        let n = a.size();
        let u = match self.orientation.trim().to_ascii_lowercase().as_str() {
            "cyclic" => OrientationMatrix::cyclic(&a, mode)?,
            "symbolic" => OrientationMatrix::symbolic(&a, &reg, mode)?,
            "zero" => OrientationMatrix::from_ints(&vec![vec![0; n]; n], &a, mode)?,
            "explicit" => {
                let rows = self
                    .u
                    .as_ref()
                    .ok_or_else(|| CliError::Config("orientation = \"explicit\" needs root.u".into()))?;
                let entries = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse_rational(s).map(|q| Rf::rational(&q))).collect())
                    .collect::<Result<Vec<Vec<Rf>>, CliError>>()?;
                OrientationMatrix::new(entries, &a, mode)?
            }
            other => return Err(CliError::Config(format!("unknown orientation {other:?}"))),
        };
        Ok(BirationalRep::new(a, u, reg)?)
    }

    /// `l` when the Cartan matrix is A(1)_l.
    pub fn affine_rank(&self) -> Result<usize, CliError> {
        let a = self.cartan_matrix()?;
        let n = a.size();
        if n >= 3 && a == CartanMatrix::affine_a(n - 1)? {
            Ok(n - 1)
        } else {
            Err(CliError::Config(format!("this command needs A(1)_l with l >= 2, got {}", self.cartan)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_presets() {
        let c = RunConfig::load(None, None).unwrap();
        assert_eq!(c.root.cartan, "A1l:2");
        assert_eq!(c.orbit.steps, 20);
        let c = RunConfig::load(None, Some("pv")).unwrap();
        assert_eq!(c.flow.alpha.len(), 4);
        assert_eq!(c.root.affine_rank().unwrap(), 3);
        let c = RunConfig::load(None, Some("a_even:2")).unwrap();
        assert_eq!(c.flow.initial.len(), 5);
        assert_eq!(c.flow_spec().unwrap().0.family, Family::AEven(2));
        assert!(RunConfig::load(None, Some("nope")).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/4").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn cartan_names() {
        for (name, n) in [("A1l:3", 4), ("A(1)_2", 3), ("A:3", 3), ("B2", 2), ("G2", 2), ("A1xA1", 2)] {
            let r = RootSection {
                cartan: name.into(),
                ..RootSection::default()
            };
            assert_eq!(r.cartan_matrix().unwrap().size(), n, "{name}");
        }
    }
}

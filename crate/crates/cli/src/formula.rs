use cremona::birep::Word;
use cremona::flows::{flow_context, symbolic_rhs, Family};
use cremona::latticedyn::{dal_closed_form, evolution_formula, g_continued_fraction, translation_word, AffineA};
use cremona::rootdata::WeightVector;
use cremona::symfield::{Rf, VarRegistry};
use cremona::taucocycle::cocycle_of_word;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Format;

/// What `formula` prints.
#[derive(Clone, Debug)]
pub enum Target {
    /// Images of every `alpha_j`, `f_j` under a word.
    Word(String),
    /// Evolution formulas of `T_i`, or of its inverse.
    Shift { i: usize, inverse: bool },
    Cocycle { word: String, weight: String },
    /// Closed forms of `T_1(f_j)`.
    Dal,
    /// `g_{k,r}` as a continued fraction.
    G { k: i64, r: usize },
    /// Right-hand sides of a flow family.
    Family(String),
}

impl Target {
    /// `T3`, `T1^-1`, `word`, `cocycle`, `dal`, `g`, `family`.
    pub fn parse(
        target: &str,
        arg: Option<&str>,
        word: Option<&str>,
        weight: Option<&str>,
        k: Option<i64>,
        r: Option<usize>,
    ) -> Result<Target, CliError> {
        let need = |x: Option<&str>, what: &str| {
            x.map(str::to_string)
                .ok_or_else(|| CliError::Config(format!("formula {target} needs {what}")))
        };
        let t = target.trim();
        if let Some(rest) = t.strip_prefix('T').or_else(|| t.strip_prefix('t')) {
            let (num, inverse) = match rest.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (rest, false),
            };
            let i = num
                .parse()
                .map_err(|_| CliError::Config(format!("bad shift operator {target:?}")))?;
            return Ok(Target::Shift { i, inverse });
        }
        Ok(match t {
            "word" => Target::Word(need(arg.or(word), "a word")?),
            "cocycle" => Target::Cocycle {
                word: need(word.or(arg), "--word")?,
                weight: need(weight, "--weight")?,
            },
            "dal" => Target::Dal,
            "g" => Target::G {
                k: k.ok_or_else(|| CliError::Config("formula g needs --k".into()))?,
                r: r.ok_or_else(|| CliError::Config("formula g needs --r".into()))?,
            },
            "family" => Target::Family(need(arg, "a family name")?),
            _ => return Err(CliError::Config(format!("unknown formula target {target:?}"))),
        })
    }
}

struct Line {
    text: String,
    latex: String,
    value: Rf,
}

fn line(text: String, latex: String, value: Rf) -> Line {
    Line { text, latex, value }
}

fn render(lines: &[Line], reg: &VarRegistry, f: Format) -> String {
    match f {
        Format::Text => lines
            .iter()
            .map(|l| format!("{} = {}\n", l.text, l.value.to_text(reg)))
            .collect(),
        Format::Latex => {
            let mut s = String::from("\\begin{align*}\n");
            for l in lines {
                s.push_str(&format!("{} &= {} \\\\\n", l.latex, l.value.to_latex(reg)));
            }
            s.push_str("\\end{align*}\n");
            s
        }
        Format::Json => {
            let v: Vec<_> = lines
                .iter()
                .map(|l| {
                    json!({
                        "name": l.text,
                        "text": l.value.to_text(reg),
                        "value": l.value.to_json(reg),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
        }
    }
}

fn word_latex(w: &Word) -> String {
    w.to_string()
        .split_whitespace()
        .map(|t| {
            if let Some(i) = t.strip_prefix('s') {
                format!("s_{{{i}}}")
            } else if let Some(rest) = t.strip_prefix("pi") {
                format!("\\pi{}", rest.replace('^', "^{").replace("{-1", "{-1}").replace("{2", "{2}"))
            } else {
                t.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(cfg: &RunConfig, target: &Target, f: Format) -> Result<String, CliError> {
    match target {
        Target::Word(src) => {
            let rep = cfg.root.build()?;
            let w = Word::parse(src, rep.cartan())?;
            let s = rep.apply_word(&w)?;
            let (wt, wl) = (w.to_string(), word_latex(&w));
            let n = rep.size();
            let mut lines = Vec::new();
            for j in 0..n {
                lines.push(line(format!("{wt}(a{j})"), format!("{wl}(\\alpha_{{{j}}})"), s.alpha(j).clone()));
            }
            for j in 0..n {
                lines.push(line(format!("{wt}(f{j})"), format!("{wl}(f_{{{j}}})"), s.f(j).reduced()));
            }
            Ok(render(&lines, rep.registry(), f))
        }
        Target::Shift { i, inverse } => {
            let ctx = AffineA::new(cfg.root.affine_rank()?)?;
            let mut tw = translation_word(&ctx, *i)?;
            if *inverse {
                tw = tw.inverse();
            }
            let ev = evolution_formula(ctx.rep(), &tw)?;
            let name = if *inverse { format!("T{i}^-1") } else { format!("T{i}") };
            let lname = if *inverse { format!("T_{{{i}}}^{{-1}}") } else { format!("T_{{{i}}}") };
            let mut lines = Vec::new();
            for (j, a) in ev.alpha.iter().enumerate() {
                lines.push(line(format!("{name}(a{j})"), format!("{lname}(\\alpha_{{{j}}})"), a.clone()));
            }
            for (j, x) in ev.f.iter().enumerate() {
                lines.push(line(format!("{name}(f{j})"), format!("{lname}(f_{{{j}}})"), x.clone()));
            }
            let mut out = render(&lines, ctx.rep().registry(), f);
            if f == Format::Text {
                out = format!("{name} = {}\n{out}", tw.word);
            }
            Ok(out)
        }
        Target::Cocycle { word, weight } => {
            let rep = cfg.root.build()?;
            let n = rep.size();
            let w = Word::parse(word, rep.cartan())?;
            let lam = WeightVector::parse(weight, n)
                .ok_or_else(|| CliError::Config(format!("bad weight {weight:?} for rank {n}")))?;
            let v = cocycle_of_word(&rep, &w, &lam)?;
            let moved = w.act_on_weight(rep.cartan(), &lam)?;
            let lines = [line(
                format!("phi_{{{w}}}({lam})"),
                format!("\\varphi_{{{}}}({})", word_latex(&w), lam.to_string().replace('L', "\\Lambda_")),
                v.value,
            )];
            let mut out = render(&lines, rep.registry(), f);
            if f == Format::Text {
                out.push_str(&format!("w(lambda) = {moved}\n"));
            }
            Ok(out)
        }
        Target::Dal => {
            let ctx = AffineA::new(cfg.root.affine_rank()?)?;
            let lines = (0..=ctx.l())
                .map(|j| {
                    Ok(line(
                        format!("T1(f{j})"),
                        format!("T_{{1}}(f_{{{j}}})"),
                        dal_closed_form(&ctx, j)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(render(&lines, ctx.rep().registry(), f))
        }
        Target::G { k, r } => {
            let ctx = AffineA::new(cfg.root.affine_rank()?)?;
            let v = g_continued_fraction(&ctx, *k, *r)?;
            let lines = [line(format!("g_{{{k},{r}}}"), format!("g_{{{k},{r}}}"), v)];
            Ok(render(&lines, ctx.rep().registry(), f))
        }
        Target::Family(name) => {
            let fam: Family = name.parse()?;
            let rep = flow_context(fam)?;
            let rhs = symbolic_rhs(fam, &rep)?;
            let lines: Vec<Line> = rhs
                .into_iter()
                .enumerate()
                .map(|(j, r)| line(format!("f{j}'"), format!("f_{{{j}}}'"), r))
                .collect();
            Ok(render(&lines, rep.registry(), f))
        }
    }
}

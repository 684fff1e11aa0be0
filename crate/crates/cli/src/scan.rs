use cremona::rootdata::OrientationMode;
use cremona::taucocycle::scan_conjecture;

use crate::config::{RootSection, RunConfig};
use crate::error::CliError;
use crate::output::Format;

/// Returns the rendered report and whether every value was an integer
/// polynomial.
pub fn run(cfg: &RunConfig, max_len: Option<usize>, f: Format) -> Result<(String, bool), CliError> {
    let root = RootSection {
        orientation: cfg.scan.orientation.clone(),
        mode: "conjecture".into(),
        ..cfg.root.clone()
    };
    let rep = root.build()?;
    debug_assert_eq!(rep.orientation().mode(), OrientationMode::Conjecture);
    let max_len = max_len.unwrap_or(cfg.scan.max_len);
    let r = scan_conjecture(&rep, max_len)?;
    let bad = r.failures();
    let text = match f {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "cartan": root.cartan,
                "max_len": max_len,
                "rows": r.rows,
                "non_polynomial": bad,
            }))?
        ),
        Format::Text => format!(
            "{}{} rows, words up to length {max_len}, {bad} not integer polynomials\n",
            r.to_text(),
            r.rows.len()
        ),
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{lrrr}\n$w$ & $k$ & terms & degree \\\\\n");
            for row in &r.rows {
                s.push_str(&format!("{} & {} & {} & {} \\\\\n", row.word, row.k, row.nterms, row.max_degree));
            }
            s.push_str(&format!("\\end{{tabular}}\n% {bad} not integer polynomials\n"));
            s
        }
    };
    Ok((text, bad == 0))
}

use std::fmt::Write;

use wittlift::classes::{
    check_congruence_p2, cup_power, phi_twisted, project_universal_class, universal_cochain, witt_polynomial,
    MAX_COEFFICIENT_RANK,
};
use wittlift::comodules::{div_power, gl2_conjugation};
use wittlift::pairlat::{build_k, build_y};
use wittlift::{IntegerMatrix, UniversalClassSpec};

use crate::grid::ConfigError;

pub const SELECTORS: [&str; 10] = [
    "c",
    "phi",
    "congruence",
    "cup",
    "coaction",
    "K-basis",
    "Y-basis",
    "hnf",
    "universal",
    "projection",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShowArgs {
    pub p: Option<u64>,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub j: Option<u32>,
    pub m: Option<u32>,
    /// Rows separated by `;`, entries by `,`.
    pub matrix: Option<String>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, selector: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError(format!("`show {selector}` needs --{flag}")))
}

fn parse_matrix(s: &str) -> Result<IntegerMatrix, ConfigError> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| ConfigError(format!("bad matrix row {row:?}")))
        })
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(ConfigError("matrix rows must be nonempty and of equal length".into()));
    }
    Ok(IntegerMatrix::from_rows(&rows))
}

/// Deterministic text for a named object.
pub fn show(selector: &str, args: &ShowArgs) -> Result<String, ConfigError> {
    let alg = |e: wittlift::AlgebraError| ConfigError(e.to_string());
    let text = match selector {
        "c" => {
            let (p, r) = (need(args.p, "p", selector)?, need(args.r, "r", selector)?);
            witt_polynomial(p, r).map_err(alg)?.to_string()
        }
        "phi" => {
            let p = need(args.p, "p", selector)?;
            phi_twisted(p, args.s.unwrap_or(0)).map_err(alg)?.to_string()
        }
        "congruence" => {
            let (p, r) = (need(args.p, "p", selector)?, need(args.r, "r", selector)?);
            check_congruence_p2(p, r).map_err(alg)?.difference.to_string()
        }
        "cup" => {
            let (p, r, m) = (
                need(args.p, "p", selector)?,
                need(args.r, "r", selector)?,
                need(args.m, "m", selector)?,
            );
            cup_power(p, r, m).map_err(alg)?.component(0).to_string()
        }
        "coaction" => {
            let m = args.m.unwrap_or(1);
            let gamma = div_power(&gl2_conjugation(), m);
            if gamma.rank() > MAX_COEFFICIENT_RANK {
                return Err(ConfigError(format!("rank {} exceeds {MAX_COEFFICIENT_RANK}", gamma.rank())));
            }
            let mut out = String::new();
            for (i, row) in gamma.coaction_matrix().map_err(alg)?.iter().enumerate() {
                let entries: Vec<String> = row.iter().map(|f| f.to_string()).collect();
                let _ = writeln!(out, "{}: [{}]", gamma.label(i), entries.join(", "));
            }
            out.trim_end().to_string()
        }
        "K-basis" | "k-basis" => {
            let (p, r) = (need(args.p, "p", selector)?, need(args.r, "r", selector)?);
            build_k(p, r).map_err(alg)?.to_string().trim_end().to_string()
        }
        "Y-basis" | "y-basis" => {
            let (p, r) = (need(args.p, "p", selector)?, need(args.r, "r", selector)?);
            build_y(p, r).map_err(alg)?.to_string().trim_end().to_string()
        }
        "hnf" => {
            let a = parse_matrix(args.matrix.as_deref().ok_or_else(|| ConfigError("`show hnf` needs --matrix".into()))?)?;
            a.hnf().to_string().trim_end().to_string()
        }
        "universal" | "projection" => {
            let spec = UniversalClassSpec::new(
                need(args.p, "p", selector)?,
                need(args.r, "r", selector)?,
                args.j.unwrap_or(0),
                need(args.m, "m", selector)?,
            )
            .map_err(alg)?;
            if selector == "universal" {
                universal_cochain(&spec).map_err(alg)?.to_string()
            } else {
                project_universal_class(&spec).map_err(alg)?.to_string()
            }
        }
        other => {
            return Err(ConfigError(format!(
                "unknown selector {other:?}; expected one of {}",
                SELECTORS.join(", ")
            )))
        }
    };
    Ok(text)
}

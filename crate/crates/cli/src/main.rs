//! `finpot`: command-line access to traces, determinants, exponentials,
//! residues, local symbols and the loop-group pairing.
//!
//! Every verb prints one JSON object on stdout. Exit status is 0 on
//! success, 1 on a domain error and 2 when the input does not parse.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use finpot::arith::parse::parse_rational_function;
use finpot::arith::{format_rational, Polynomial, RationalFunction, TruncatedLaurentSeries};
use finpot::ast::lift_ast;
use finpot::det::{self, Route};
use finpot::expo;
use finpot::loops::{self, LoopExponent, Side};
use finpot::operator::FinitePotentOperator;
use finpot::residue::{self, Place};
use finpot::wire::{matrix_to_json, operator_from_json, operator_to_json, rational_to_json, series_to_json};
use finpot::{selftest, Error};

const DEFAULT_EXP_PREC: i64 = 10;
const PREC_ENV: &str = "FINPOT_PREC";

#[derive(Parser)]
#[command(name = "finpot", version, about = "Exact traces, determinants and residues for finite potent operators")]
struct Cli {
    /// Output format; only json is stable.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetRoute {
    Ast,
    Exterior,
    Charpoly,
    PlemeljSmithies,
    Logdet,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResidueRoute {
    Coefficient,
    Operator,
}

#[derive(Subcommand)]
enum Verb {
    /// Tate trace of an operator.
    Trace {
        /// Operator JSON, or @file.
        #[arg(long)]
        op: String,
    },
    /// Det(1 + φ).
    Det {
        #[arg(long)]
        op: String,
        #[arg(long, value_enum, default_value_t = DetRoute::Ast)]
        route: DetRoute,
    },
    /// det(1 + μ·φ) as a polynomial in mu.
    Detpoly {
        #[arg(long)]
        op: String,
    },
    /// Invertible/nilpotent splitting of the certified core.
    Ast {
        #[arg(long)]
        op: String,
    },
    /// Trace of the r-th exterior power.
    Exterior {
        #[arg(long)]
        op: String,
        #[arg(long)]
        r: usize,
    },
    /// ψ with (1 + φ)(1 + ψ) = 1.
    Invert {
        #[arg(long)]
        op: String,
    },
    /// Power-sum expansion of det(1 + μ·φ) through the given order.
    PsSeries {
        #[arg(long)]
        op: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// exp(−Σ μ^r tr(−φ)^r / r).
    Logdet {
        #[arg(long)]
        op: String,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// m-regularized determinant as a series in mu.
    Regdet {
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Det exp_{z^k}(φ) and the trace it must match.
    Exp {
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Zassenhaus terms C₁..C₃ and the identity through the given precision.
    Zassenhaus {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 5)]
        prec: i64,
    },
    /// Product of Det exp over a compatible family.
    Infprod {
        /// JSON list of {"weight": k, "op": operator}, or @file.
        #[arg(long)]
        family: String,
        /// Index from which every member has trace zero.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// res_P(f dg).
    Residue {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Monic irreducible polynomial in t, or "inf".
        #[arg(long)]
        place: String,
        #[arg(long, value_enum, default_value_t = ResidueRoute::Coefficient)]
        route: ResidueRoute,
        #[arg(long)]
        window: Option<i64>,
    },
    /// exp(z²·½·res_P(f dg)).
    Cocycle {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        place: String,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long, value_enum, default_value_t = ResidueRoute::Coefficient)]
        route: ResidueRoute,
        /// Half-space cut for the operator route.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        cut: i64,
    },
    /// exp(z²·res_P(f dg)).
    Pairing {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        place: String,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Sum of residues and product of cocycles over all places.
    Reciprocity {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Truncated Det(ã·a·ã⁻¹·a⁻¹) against exp(Σ n·aₙ·bₙ).
    SwPairing {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        ftilde: String,
        #[arg(long = "T")]
        t: usize,
    },
    /// Cross-route agreement suite.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Failure {
    Domain(Error),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(d) => Failure::Parse(d),
            other => Failure::Domain(other),
        }
    }
}

type Out = Result<Value, Failure>;

/// Inline text, or the contents of a file for `@path`.
fn read_arg(s: &str) -> Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Parse(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn json_arg(s: &str) -> Result<Value, Failure> {
    let text = read_arg(s)?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("invalid JSON: {e}")))
}

fn op_arg(s: &str) -> Result<FinitePotentOperator, Failure> {
    Ok(operator_from_json(&json_arg(s)?)?)
}

fn fn_arg(s: &str) -> Result<RationalFunction, Failure> {
    Ok(parse_rational_function(read_arg(s)?.trim(), "t")?)
}

fn place_arg(s: &str) -> Result<Place, Failure> {
    Place::parse(s).map_err(|e| match e {
        Error::NotIrreducible(_) => Failure::Domain(e),
        other => other.into(),
    })
}

fn precision(explicit: Option<i64>, default: i64) -> Result<i64, Failure> {
    if let Some(p) = explicit {
        return Ok(p);
    }
    match std::env::var(PREC_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Parse(format!("{PREC_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(default),
    }
}

fn poly_json(p: &Polynomial, var: &str) -> Value {
    json!({ "coeffs": p.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(), "poly": p.display_with(var) })
}

fn series_json(s: &TruncatedLaurentSeries) -> Value {
    json!({ "series": series_to_json(s), "text": s.to_string() })
}

fn symbol_json(s: &TruncatedLaurentSeries) -> Value {
    let mut m = Map::new();
    m.insert("value".into(), json!(s.to_string()));
    if let Some(q) = residue::symbol_exponent(s) {
        m.insert("exponent".into(), rational_to_json(&q));
    }
    Value::Object(m)
}

fn route_of(r: DetRoute) -> Option<Route> {
    match r {
        DetRoute::Ast => Some(Route::Ast),
        DetRoute::Exterior => Some(Route::Exterior),
        DetRoute::Charpoly => Some(Route::Charpoly),
        DetRoute::PlemeljSmithies => Some(Route::PlemeljSmithies),
        DetRoute::Logdet => Some(Route::Logdet),
        DetRoute::All => None,
    }
}

fn family_arg(s: &str) -> Result<Vec<(i64, FinitePotentOperator)>, Failure> {
    let v = json_arg(s)?;
    let items = v.as_array().ok_or_else(|| Failure::Parse("family must be a JSON list".into()))?;
    items
        .iter()
        .map(|item| {
            let w = item.get("weight").map_or(Some(1), Value::as_i64).ok_or_else(|| Failure::Parse("weight must be an integer".into()))?;
            let op = item.get("op").ok_or_else(|| Failure::Parse("family member without \"op\"".into()))?;
            Ok((w, operator_from_json(op)?))
        })
        .collect()
}

fn run(verb: Verb) -> Out {
    let sym_prec = |p| precision(p, residue::DEFAULT_SYMBOL_PREC);
    let exp_prec = |p| precision(p, DEFAULT_EXP_PREC);
    Ok(match verb {
        Verb::Trace { op } => json!({ "value": rational_to_json(&det::tate_trace(&op_arg(&op)?)?) }),
        Verb::Det { op, route } => {
            let phi = op_arg(&op)?;
            match route_of(route) {
                Some(r) => json!({ "value": rational_to_json(&det::det_by_route(&phi, r)?) }),
                None => {
                    let all = det::det_all_routes(&phi)?;
                    let routes: Map<String, Value> =
                        all.iter().map(|d| (d.route.name().to_string(), rational_to_json(&d.value))).collect();
                    let agree = all.iter().all(|d| d.value == all[0].value);
                    json!({ "value": rational_to_json(&all[0].value), "routes": routes, "agree": agree })
                }
            }
        }
        Verb::Detpoly { op } => poly_json(&det::det_poly(&op_arg(&op)?)?, det::MU),
        Verb::Ast { op } => {
            let d = lift_ast(&op_arg(&op)?)?;
            let cols = |b: &Vec<Vec<_>>| -> Value {
                Value::Array(b.iter().map(|c| Value::Array(c.iter().map(rational_to_json).collect())).collect())
            };
            json!({
                "indices": d.indices,
                "core_dim": d.core_dim(),
                "core_basis": cols(&d.core_basis),
                "nil_basis": cols(&d.nil_basis),
                "core_matrix": matrix_to_json(&d.core_matrix),
                "nil_matrix": matrix_to_json(&d.nil_matrix),
                "nil_degree": d.nil_degree,
            })
        }
        Verb::Exterior { op, r } => json!({ "value": rational_to_json(&det::exterior_trace(&op_arg(&op)?, r)?) }),
        Verb::Invert { op } => json!({ "operator": operator_to_json(&det::invert_one_plus(&op_arg(&op)?)?) }),
        Verb::PsSeries { op, order } => {
            let phi = op_arg(&op)?;
            let order = match order {
                Some(o) => o,
                None => phi.certify()?.w.len(),
            };
            poly_json(&det::plemelj_smithies_series(&phi, order)?, det::MU)
        }
        Verb::Logdet { op, prec } => series_json(&det::log_det_series(&op_arg(&op)?, exp_prec(prec)?)?),
        Verb::Regdet { op, m, prec } => series_json(&det::regularized_det_series(&op_arg(&op)?, m, exp_prec(prec)?)?),
        Verb::Exp { op, k, prec } => {
            let phi = op_arg(&op)?;
            let prec = exp_prec(prec)?;
            let d = expo::det_series(&expo::exp_op(&phi, k, prec)?)?;
            let tr = det::tate_trace(&phi)?;
            let expected = finpot::arith::series::exp_monomial(expo::Z, &tr, k, prec);
            json!({ "det": series_json(&d), "trace": rational_to_json(&tr), "matches_trace": d == expected })
        }
        Verb::Zassenhaus { f, g, prec } => {
            let (f, g) = (op_arg(&f)?, op_arg(&g)?);
            let (c1, c2, c3) = expo::zassenhaus_terms(&f, &g)?;
            json!({
                "c1": operator_to_json(&c1),
                "c2": operator_to_json(&c2),
                "c3": operator_to_json(&c3),
                "holds": expo::zassenhaus_check(&f, &g, prec)?,
            })
        }
        Verb::Infprod { family, m, prec } => {
            let family = family_arg(&family)?;
            let v = expo::infinite_product_det(&family, m, exp_prec(prec)?)?;
            series_json(&v)
        }
        Verb::Residue { f, g, place, route, window } => {
            let (f, g, p) = (fn_arg(&f)?, fn_arg(&g)?, place_arg(&place)?);
            let v = match route {
                ResidueRoute::Coefficient => residue::residue_classical(&f, &g, &p)?,
                ResidueRoute::Operator => residue::residue_tate(&f, &g, &p, window)?,
            };
            json!({ "value": rational_to_json(&v) })
        }
        Verb::Cocycle { f, g, place, prec, route, cut } => {
            let (f, g, p) = (fn_arg(&f)?, fn_arg(&g)?, place_arg(&place)?);
            let prec = sym_prec(prec)?;
            let v = match route {
                ResidueRoute::Coefficient => residue::cocycle(&f, &g, &p, prec)?,
                ResidueRoute::Operator => residue::cocycle_operator_route(&f, &g, &p, cut, prec)?,
            };
            symbol_json(&v)
        }
        Verb::Pairing { f, g, place, prec } => {
            let (f, g, p) = (fn_arg(&f)?, fn_arg(&g)?, place_arg(&place)?);
            symbol_json(&residue::pairing(&f, &g, &p, sym_prec(prec)?)?)
        }
        Verb::Reciprocity { f, g, prec } => {
            let r = residue::reciprocity_check(&fn_arg(&f)?, &fn_arg(&g)?, sym_prec(prec)?)?;
            json!({ "sum": rational_to_json(&r.sum), "product": r.product.to_string() })
        }
        Verb::SwPairing { f, ftilde, t } => {
            let f = LoopExponent::parse(read_arg(&f)?.trim(), Side::Plus)?;
            let ft = LoopExponent::parse(read_arg(&ftilde)?.trim(), Side::Minus)?;
            let v = loops::sw_pairing_truncated(&f, &ft, t)?;
            let r = loops::sw_pairing_closed(&f, &ft)?;
            json!({
                "truncated": format_rational(&v),
                "exponent": format_rational(&r),
                "error": format!("{:.3e}", loops::sw_truncation_error(&f, &ft, t)?),
                "residue_agrees": loops::sw_vs_tate_check(&f, &ft)?,
            })
        }
        Verb::Selftest { seed } => {
            let outcomes = selftest::run(seed);
            let passed = outcomes.iter().all(|o| o.passed);
            let checks: Vec<Value> =
                outcomes.iter().map(|o| json!({ "name": o.name, "passed": o.passed, "detail": o.detail })).collect();
            if !passed {
                let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
                return Err(Failure::Domain(Error::CheckFailed(failed.join(", "))));
            }
            json!({ "passed": passed, "checks": checks })
        }
    })
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => v.to_string(),
        Format::Text => match v {
            Value::Object(m) => m
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}: {s}"),
                    other => format!("{k}: {other}"),
                })
                .collect::<Vec<_>>()
                .join("\n"),
            other => other.to_string(),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(v) => {
            println!("{}", render(&v, cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            println!("{}", json!({ "error": e.code(), "detail": e.to_string() }));
            ExitCode::from(1)
        }
        Err(Failure::Parse(d)) => {
            println!("{}", json!({ "error": "parse", "detail": d }));
            ExitCode::from(2)
        }
    }
}

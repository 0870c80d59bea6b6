//! Cross-route agreement suite run by `finpot selftest`.

use num_traits::{One, Zero};

use crate::arith::series::exp_monomial;
use crate::arith::{NumberField, Rational};
use crate::det::{det_all_routes, det_one_plus, invert_one_plus, restrict_scalars, tate_trace};
use crate::error::{Error, Result};
use crate::expo::{det_series, exp_op, zassenhaus_check, Z};
use crate::gen;
use crate::loops::{sw_pairing_closed, sw_truncation_error, sw_vs_tate_check, Side};
use crate::operator::FinitePotentOperator;
use crate::residue::{cocycle_identity_check, reciprocity_check, residue_classical, residue_tate};

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::CheckFailed(what()))
    }
}

fn det_routes(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..60 {
        let op = gen::operator(rng, 6);
        let all = det_all_routes(&op)?;
        ensure(all.iter().all(|r| r.value == all[0].value), || format!("routes disagree on {op:?}: {all:?}"))?;
    }
    Ok("60 operators, 5 routes each".into())
}

fn inverses(rng: &mut gen::Rng) -> Result<String> {
    let mut checked = 0;
    for _ in 0..40 {
        let op = gen::operator(rng, 4);
        if det_one_plus(&op)?.is_zero() {
            continue;
        }
        let psi = invert_one_plus(&op)?;
        // (1 + φ)(1 + ψ) = 1 + φ + ψ + φψ
        let prod = op.add(&psi)?.add(&op.compose(&psi)?)?;
        ensure(prod.is_zero(), || format!("(1+φ)(1+ψ) ≠ 1 for {op:?}"))?;
        checked += 1;
    }
    Ok(format!("{checked} invertible operators"))
}

fn norms(rng: &mut gen::Rng) -> Result<String> {
    for field in [NumberField::gaussian(), NumberField::sqrt2()] {
        for _ in 0..10 {
            let op = gen::field_operator(rng, &field, 3);
            let d = det_one_plus(&op)?;
            if d.is_zero() {
                continue;
            }
            let down = restrict_scalars(&op, &field)?;
            ensure(det_one_plus(&down)? == d.norm(), || format!("norm mismatch over {}", field.modulus()))?;
        }
    }
    Ok("ℚ(i) and ℚ(√2)".into())
}

fn exponentials(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..20 {
        let op = gen::operator(rng, 3);
        let lhs = det_series(&exp_op(&op, 1, 10)?)?;
        let rhs = exp_monomial(Z, &tate_trace(&op)?, 1, 10);
        ensure(lhs == rhs, || format!("Det exp ≠ exp tr for {op:?}"))?;
    }
    Ok("20 operators to z^10".into())
}

fn zassenhaus(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..10 {
        let f = gen::finite_operator(rng, 3);
        let g = gen::finite_operator(rng, 3);
        ensure(zassenhaus_check(&f, &g, 5)?, || format!("Zassenhaus fails for {f:?}, {g:?}"))?;
    }
    Ok("10 pairs through z^4".into())
}

fn residues(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..30 {
        let (f, g, p) = gen::degree_one_pair(rng);
        let a = residue_tate(&f, &g, &p, None)?;
        let b = residue_classical(&f, &g, &p)?;
        ensure(a == b, || format!("res({f} d{g}) at {p}: operator {a}, coefficient {b}"))?;
    }
    Ok("30 degree-one pairs".into())
}

fn cocycles(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..15 {
        let f = gen::rational_function(rng);
        let g = gen::rational_function(rng);
        let h = gen::rational_function(rng);
        for p in crate::residue::relevant_places(&f, &g) {
            ensure(cocycle_identity_check(&f, &g, &h, &p, 8)?, || format!("cocycle identity at {p}"))?;
        }
    }
    Ok("15 triples at all relevant places".into())
}

fn reciprocity(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..40 {
        let f = gen::rational_function(rng);
        let g = gen::rational_function(rng);
        let r = reciprocity_check(&f, &g, 8)?;
        ensure(r.holds(), || format!("reciprocity fails for {f}, {g}: sum {}", r.sum))?;
    }
    Ok("40 pairs".into())
}

fn segal_wilson(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..20 {
        let f = gen::loop_exponent(rng, Side::Plus, 3);
        let ft = gen::loop_exponent(rng, Side::Minus, 3);
        ensure(sw_vs_tate_check(&f, &ft)?, || format!("closed form ≠ residue for {f}, {ft}"))?;
    }
    let f = gen::loop_exponent(rng, Side::Plus, 2);
    let ft = gen::loop_exponent(rng, Side::Minus, 2);
    let t = (f.max_degree() + ft.max_degree()) as usize + 30;
    let err = sw_truncation_error(&f, &ft, t)?;
    ensure(err < 1e-8, || format!("truncation error {err:e} at T = {t}"))?;
    let r: Rational = sw_pairing_closed(&f, &ft)?;
    Ok(format!("20 residue bridges; exponent {r}, error {err:.1e} at T = {t}"))
}

fn trivial_on_nilpotents(rng: &mut gen::Rng) -> Result<String> {
    for _ in 0..20 {
        let op: FinitePotentOperator = gen::nilpotent_operator(rng);
        ensure(det_one_plus(&op)?.is_one() && tate_trace(&op)?.is_zero(), || format!("nilpotent {op:?}"))?;
    }
    Ok("20 nilpotent operators".into())
}

type Check = fn(&mut gen::Rng) -> Result<String>;

const CHECKS: [(&str, Check); 10] = [
    ("det_routes", det_routes),
    ("nilpotent", trivial_on_nilpotents),
    ("inverse", inverses),
    ("norm", norms),
    ("exp_trace", exponentials),
    ("zassenhaus", zassenhaus),
    ("residue_routes", residues),
    ("cocycle_identity", cocycles),
    ("reciprocity", reciprocity),
    ("segal_wilson", segal_wilson),
];

/// Runs every check with a generator derived from `seed`.
pub fn run(seed: u64) -> Vec<Outcome> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(k, (name, check))| {
            let mut rng = gen::rng(seed.wrapping_add(k as u64));
            match check(&mut rng) {
                Ok(detail) => Outcome { name, passed: true, detail },
                Err(e) => Outcome { name, passed: false, detail: e.to_string() },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for o in super::run(7) {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }
}

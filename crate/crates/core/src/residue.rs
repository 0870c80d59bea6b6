//! Residues of differentials `f dg` on the projective line over ℚ, the
//! cocycle `exp(z²·½·res)`, its commutator pairing, and the reciprocity law.
//!
//! Two residue routes are provided. The coefficient route reads the
//! `π⁻¹` digit of a local expansion and takes the residue-field trace. The
//! operator route (degree-one places only) takes the trace of the
//! commutator of truncated multiplication operators on `k((t))`, one of
//! them compressed to `k[[t]]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::arith::factor::{factor, is_irreducible};
use crate::arith::parse::parse_rational_function;
use crate::arith::{rat, Matrix, NumberField, NumberFieldElement, Polynomial, Rational, RationalFunction, TruncatedLaurentSeries};
use crate::det::tate_trace;
use crate::error::{Error, Result};
use crate::expo::{det_series, exp_op, Z};
use crate::operator::{FinitePotentOperator, SparseOperator};

type Series = TruncatedLaurentSeries<Rational>;

/// Default `z`-precision of symbol values.
pub const DEFAULT_SYMBOL_PREC: i64 = 8;

/// Name of the local parameter in expansions.
pub const LOCAL_VAR: &str = "u";

/// A closed point of the projective line over ℚ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// Zero set of a monic irreducible polynomial in `t`.
    Finite(Polynomial),
    Infinity,
}

impl Place {
    pub fn finite(p: Polynomial) -> Result<Self> {
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::Precondition("a place needs a polynomial of positive degree".into()));
        }
        let p = p.monic();
        if !is_irreducible(&p) {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    /// The place `t = a`.
    pub fn at(a: Rational) -> Self {
        Place::Finite(Polynomial::linear_root(a))
    }

    /// `t = 0`.
    pub fn origin() -> Self {
        Self::at(Rational::zero())
    }

    /// `"inf"`, `"infinity"` or `"∞"`, or a polynomial in `t`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "oo" => Ok(Place::Infinity),
            other => {
                let r = parse_rational_function(other, "t")?;
                if !r.is_polynomial() {
                    return Err(Error::Parse(format!("place {other:?} must be a polynomial in t")));
                }
                Self::finite(r.numerator().clone())
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap(),
            Place::Infinity => 1,
        }
    }

    /// The rational point `a` of a degree-one finite place `t − a`.
    fn rational_point(&self) -> Option<Rational> {
        match self {
            Place::Finite(p) if p.degree() == Some(1) => Some(-p.coeff(0)),
            _ => None,
        }
    }

    /// Residue field `ℚ[θ]/(π)`; ℚ itself at infinity.
    pub fn residue_field(&self) -> Arc<NumberField> {
        let m = match self {
            Place::Finite(p) => p.clone(),
            Place::Infinity => Polynomial::x(),
        };
        NumberField::new(m).expect("place polynomials are irreducible")
    }

    /// `f` in the coordinate of the place: `f` itself at a finite place,
    /// `f(1/w)` at infinity. The local parameter is then `π(t)` or `w`.
    fn local_function(&self, f: &RationalFunction) -> RationalFunction {
        match self {
            Place::Finite(_) => f.clone(),
            Place::Infinity => f.invert_variable(),
        }
    }

    fn parameter(&self) -> Polynomial {
        match self {
            Place::Finite(p) => p.clone(),
            Place::Infinity => Polynomial::x(),
        }
    }

    /// Order of vanishing of `f` at this place.
    pub fn valuation(&self, f: &RationalFunction) -> Result<i64> {
        match self {
            Place::Finite(p) => f.valuation(p),
            Place::Infinity => f.valuation_at_infinity(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

/// Digits `a_k` (polynomials of degree below `deg π`) with
/// `f = Σ_{k ≥ v} a_k π^k`, for `v ≤ k < prec`.
fn digits(f: &RationalFunction, pi: &Polynomial, prec: i64) -> Result<Vec<(i64, Polynomial)>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let v = f.valuation(pi)?;
    let mut num = f.numerator().clone();
    let mut den = f.denominator().clone();
    if v > 0 {
        num = num.exact_div(&pi.pow(v as u32)).unwrap();
    } else if v < 0 {
        den = den.exact_div(&pi.pow((-v) as u32)).unwrap();
    }
    let den_inv = den.inv_mod(pi).expect("denominator is a unit at the place");
    let mut out = Vec::new();
    for k in v..prec {
        let a = (&num * &den_inv).rem(pi);
        let r = &num - &(&a * &den);
        num = r.exact_div(pi).expect("digit clears the residue class");
        if !a.is_zero() {
            out.push((k, a));
        }
    }
    Ok(out)
}

/// Expansion of `f` in powers of the local parameter `π` (or `w = 1/t` at
/// infinity) with coefficients in the residue field.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub place: Place,
    pub series: TruncatedLaurentSeries<NumberFieldElement>,
}

impl LocalExpansion {
    /// `Σ a_k(t)·π^k` as a rational function of `t`.
    pub fn resum(&self) -> RationalFunction {
        let pi = RationalFunction::from_poly(self.place.parameter());
        let mut acc = RationalFunction::zero();
        for (k, a) in self.series.terms() {
            let term = &RationalFunction::from_poly(a.rep().clone()) * &pi.pow(k as i32).expect("parameter is nonzero");
            acc = &acc + &term;
        }
        match self.place {
            Place::Infinity => acc.invert_variable(),
            Place::Finite(_) => acc,
        }
    }
}

pub fn local_expand(f: &RationalFunction, place: &Place, prec: i64) -> Result<LocalExpansion> {
    let k = place.residue_field();
    let lf = place.local_function(f);
    let ds = digits(&lf, &place.parameter(), prec)?;
    let series = TruncatedLaurentSeries::new(LOCAL_VAR, prec, ds.into_iter().map(|(d, a)| (d, k.element(a))));
    Ok(LocalExpansion { place: place.clone(), series })
}

/// `res_P(f dg)` by the coefficient route: the residue-field trace of the
/// `π⁻¹` digit of `f·g′/π′`. At infinity the differential is rewritten in
/// `w = 1/t` as `−f(1/w)·g′(1/w)/w² dw`. Needs no precision argument: the
/// expansion is always carried to the `π⁻¹` digit.
pub fn residue_classical(f: &RationalFunction, g: &RationalFunction, place: &Place) -> Result<Rational> {
    let fdg = f * &g.derivative();
    if fdg.is_zero() {
        return Ok(Rational::zero());
    }
    let (h, pi) = match place {
        Place::Finite(p) => {
            let dp = RationalFunction::from_poly(p.derivative());
            (fdg.div(&dp)?, p.clone())
        }
        Place::Infinity => {
            let w2 = RationalFunction::new(Polynomial::from_ints(&[-1]), Polynomial::from_ints(&[0, 0, 1]))?;
            (&fdg.invert_variable() * &w2, Polynomial::x())
        }
    };
    let ds = digits(&h, &pi, 0)?;
    let Some((_, a)) = ds.into_iter().find(|(k, _)| *k == -1) else {
        return Ok(Rational::zero());
    };
    Ok(place.residue_field().element(a).trace())
}

/// Laurent coefficients of `f` at `t = 0` for degrees below `prec`.
fn laurent_at_zero(f: &RationalFunction, prec: i64) -> Result<BTreeMap<i64, Rational>> {
    Ok(digits(f, &Polynomial::x(), prec)?.into_iter().map(|(k, a)| (k, a.coeff(0))).collect())
}

/// Moves a degree-one place to `t = 0`.
fn to_origin(f: &RationalFunction, place: &Place) -> Result<RationalFunction> {
    match place {
        Place::Infinity => Ok(f.invert_variable()),
        _ => match place.rational_point() {
            Some(a) => Ok(f.shift(&a)),
            None => Err(Error::Precondition(format!("the operator route needs a degree-one place, got {place}"))),
        },
    }
}

/// Pole order at `t = 0` (0 if regular).
fn pole_order(f: &RationalFunction) -> i64 {
    if f.is_zero() {
        0
    } else {
        (-f.valuation(&Polynomial::x()).unwrap()).max(0)
    }
}

/// Multiplication by `Σ c_k t^k` on `span{e_i : lo ≤ i ≤ hi}`, `e_i ↔ t^i`.
pub fn multiplication_operator(coeffs: &BTreeMap<i64, Rational>, lo: i64, hi: i64) -> SparseOperator {
    let mut entries = Vec::new();
    for j in lo..=hi {
        for (k, c) in coeffs {
            let i = j + k;
            if (lo..=hi).contains(&i) {
                entries.push((i, j, c.clone()));
            }
        }
    }
    SparseOperator::new(entries)
}

/// Local data for the operator routes: truncated Laurent coefficients at
/// the origin and the band width `D`.
struct WindowModel {
    f: BTreeMap<i64, Rational>,
    g: BTreeMap<i64, Rational>,
    d: i64,
}

impl WindowModel {
    /// Truncates both expansions to degrees `≤ P`, the larger pole order;
    /// the residue only sees `f_i g_j` with `i + j = 0`, so nothing that
    /// matters is dropped.
    fn new(f: &RationalFunction, g: &RationalFunction, place: &Place) -> Result<Self> {
        let f0 = to_origin(f, place)?;
        let g0 = to_origin(g, place)?;
        let p = pole_order(&f0).max(pole_order(&g0));
        let expand = |h: &RationalFunction| -> Result<BTreeMap<i64, Rational>> {
            if h.is_zero() {
                Ok(BTreeMap::new())
            } else {
                laurent_at_zero(h, p + 1)
            }
        };
        Ok(WindowModel { f: expand(&f0)?, g: expand(&g0)?, d: p.max(1) })
    }
}

const WINDOW_RETRIES: usize = 3;

/// `res_P(f dg)` as `tr [π₊fπ₊, g]` on a window `[−W, W]` of `k((t))` at a
/// degree-one place, `π₊` the projection onto `k[[t]]`. Columns above
/// `W − 2D` see truncated products and are discarded; a nonzero entry in
/// the band just below that line means the window was too small, and the
/// window is doubled (at most three times).
pub fn residue_tate(f: &RationalFunction, g: &RationalFunction, place: &Place, window: Option<i64>) -> Result<Rational> {
    let model = WindowModel::new(f, g, place)?;
    let d = model.d;
    let mut w = window.unwrap_or(6 * d).max(2 * d);
    for _ in 0..=WINDOW_RETRIES {
        let mf = multiplication_operator(&model.f, -w, w);
        let mg = multiplication_operator(&model.g, -w, w);
        let f1 = mf.filter(|i| i >= 0);
        let comm = f1.commutator(&mg);
        let exact = w - 2 * d;
        let collar = comm.entries().any(|(i, j, _)| j <= exact && j > exact - d || (j <= exact && i > exact - d && i <= exact));
        if !collar {
            let kept = comm.filter(|i| i <= exact);
            return tate_trace(&FinitePotentOperator::from_sparse(kept));
        }
        w *= 2;
    }
    Err(Error::WindowExhausted { window: w / 2 })
}

/// `exp(z²·q)` to precision `prec`.
fn exp_z2(q: &Rational, prec: i64) -> Series {
    Series::monomial(Z, q.clone(), 2, prec).exp().expect("z^2 monomial has positive valuation")
}

/// `c_P(f, g) = exp(z²·½·res_P(f dg))`.
pub fn cocycle(f: &RationalFunction, g: &RationalFunction, place: &Place, prec: i64) -> Result<Series> {
    let r = residue_classical(f, g, place)?;
    Ok(exp_z2(&(r * rat(1, 2)), prec))
}

/// `Det(exp_z(f₁)·exp_z(g₁)·exp_z(−(f₁+g₁)))` on the window model, with
/// `f₁, g₁` the compressions of the multiplication operators to
/// `V₊ = span{e_i : i ≥ cut}`.
///
/// Products of `m` factors applied to `e_j` are exact while `j + mD ≤ W`,
/// so everything above `W − (prec−1)·D` is discarded, after checking that
/// the band just below is empty.
pub fn cocycle_operator_route(
    f: &RationalFunction,
    g: &RationalFunction,
    place: &Place,
    cut: i64,
    prec: i64,
) -> Result<Series> {
    let model = WindowModel::new(f, g, place)?;
    let d = model.d;
    let reach = (prec - 1).max(1) * d;
    let mut w = cut + 2 * reach + 2 * d;
    for _ in 0..=WINDOW_RETRIES {
        let f1 = FinitePotentOperator::from_sparse(multiplication_operator(&model.f, cut, w));
        let g1 = FinitePotentOperator::from_sparse(multiplication_operator(&model.g, cut, w));
        let sum = f1.add(&g1)?.neg();
        let prod = exp_op(&f1, 1, prec)?.mul(&exp_op(&g1, 1, prec)?)?.mul(&exp_op(&sum, 1, prec)?)?;
        let exact = w - reach;
        let collar_hit = prod.terms().any(|(_, op)| {
            op.finite_part()
                .entries()
                .any(|(i, j, _)| (i <= exact && j <= exact) && (i > exact - d || j > exact - d))
        });
        if !collar_hit {
            return det_series(&prod.filter(|i| i <= exact));
        }
        w += 2 * (w - cut);
    }
    Err(Error::WindowExhausted { window: w })
}

/// `q` with `s = exp(z²·q)` to the precision of `s`, or `None` if `s` is
/// not of that form.
pub fn symbol_exponent(s: &Series) -> Option<Rational> {
    let l = s.log().ok()?;
    let q = l.coeff(2).unwrap_or_else(Rational::zero);
    if l.terms().all(|(k, _)| k == 2) {
        Some(q)
    } else {
        None
    }
}

/// `{f, g}_P = exp(z²·res_P(f dg))`.
pub fn pairing(f: &RationalFunction, g: &RationalFunction, place: &Place, prec: i64) -> Result<Series> {
    Ok(exp_z2(&residue_classical(f, g, place)?, prec))
}

/// `c(f,g)·c(f+g,h) = c(g,h)·c(f,g+h)`.
pub fn cocycle_identity_check(
    f: &RationalFunction,
    g: &RationalFunction,
    h: &RationalFunction,
    place: &Place,
    prec: i64,
) -> Result<bool> {
    let fg = f + g;
    let gh = g + h;
    let lhs = cocycle(f, g, place, prec)?.mul(&cocycle(&fg, h, place, prec)?)?;
    let rhs = cocycle(g, h, place, prec)?.mul(&cocycle(f, &gh, place, prec)?)?;
    Ok(lhs == rhs)
}

/// Trace of multiplication by `r` on `ℚ[t]/(q)`.
fn quotient_trace(r: &Polynomial, q: &Polynomial) -> Rational {
    let n = q.degree().unwrap_or(0);
    let mut m = Matrix::zeros(n, n);
    let mut col = r.rem(q);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = col.coeff(i);
        }
        col = (&col * &Polynomial::x()).rem(q);
    }
    m.trace()
}

/// Traces of `h` on `A/(A ∩ gA)` and `gA/(A ∩ gA)`, `A` the local ring at
/// the place. Both quotients are `A/π^{|v(g)|}A` up to an `h`-equivariant
/// isomorphism, and at most one of them is nonzero.
pub fn quotient_traces(g: &RationalFunction, h: &RationalFunction, place: &Place) -> Result<(Rational, Rational)> {
    if g.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !h.is_zero() && place.valuation(h)? < 0 {
        return Err(Error::Precondition(format!("h must be regular at {place}")));
    }
    let v = place.valuation(g)?;
    if v == 0 || h.is_zero() {
        return Ok((Rational::zero(), Rational::zero()));
    }
    let hl = place.local_function(h);
    let q = place.parameter().pow(v.unsigned_abs() as u32);
    let den_inv = hl.denominator().inv_mod(&q).expect("h is regular at the place");
    let r = (hl.numerator() * &den_inv).rem(&q);
    let t = quotient_trace(&r, &q);
    Ok(if v > 0 { (t, Rational::zero()) } else { (Rational::zero(), t) })
}

/// `c(h/g, g) = exp(z²·½·tr_{A/A∩gA}(h))·exp(−z²·½·tr_{gA/A∩gA}(h))`.
pub fn c4_check(g: &RationalFunction, h: &RationalFunction, place: &Place, prec: i64) -> Result<bool> {
    let (ta, tg) = quotient_traces(g, h, place)?;
    let f = h.div(g)?;
    let lhs = cocycle(&f, g, place, prec)?;
    let rhs = exp_z2(&(ta * rat(1, 2)), prec).mul(&exp_z2(&(tg * rat(-1, 2)), prec))?;
    Ok(lhs == rhs)
}

/// `c_{A+B}·c_{A∩B} = c_A·c_B` for the half spaces with cuts `a` and `b`,
/// all four values by the operator route.
pub fn c5_check(f: &RationalFunction, g: &RationalFunction, place: &Place, a: i64, b: i64, prec: i64) -> Result<bool> {
    let c = |cut| cocycle_operator_route(f, g, place, cut, prec);
    let lhs = c(a.min(b))?.mul(&c(a.max(b))?)?;
    let rhs = c(a)?.mul(&c(b)?)?;
    Ok(lhs == rhs)
}

/// Irreducible factors of the numerators and denominators of `f` and `g`,
/// and infinity.
pub fn relevant_places(f: &RationalFunction, g: &RationalFunction) -> Vec<Place> {
    let mut polys: Vec<Polynomial> = Vec::new();
    for r in [f, g] {
        for p in [r.numerator(), r.denominator()] {
            for (q, _) in factor(p) {
                if !polys.contains(&q) {
                    polys.push(q);
                }
            }
        }
    }
    polys.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    let mut out: Vec<Place> = polys.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinity);
    out
}

/// Per-place residues and cocycles for the reciprocity law.
#[derive(Clone, Debug)]
pub struct Reciprocity {
    pub places: Vec<(Place, Rational)>,
    pub sum: Rational,
    pub product: Series,
}

/// Sums residues of `f dg` and multiplies the cocycles over all places
/// where `f` or `g` has a zero or pole, plus infinity. Elsewhere `f dg` is
/// regular and contributes nothing.
pub fn reciprocity_check(f: &RationalFunction, g: &RationalFunction, prec: i64) -> Result<Reciprocity> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut places = Vec::new();
    let mut sum = Rational::zero();
    let mut product = Series::one(Z, prec);
    for p in relevant_places(f, g) {
        let r = residue_classical(f, g, &p)?;
        sum += &r;
        product = product.mul(&exp_z2(&(r.clone() * rat(1, 2)), prec))?;
        places.push((p, r));
    }
    Ok(Reciprocity { places, sum, product })
}

impl Reciprocity {
    pub fn holds(&self) -> bool {
        self.sum.is_zero() && self.product == Series::one(Z, self.product.precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn rf(s: &str) -> RationalFunction {
        parse_rational_function(s, "t").unwrap()
    }

    fn place(s: &str) -> Place {
        Place::parse(s).unwrap()
    }

    #[test]
    fn expansions() {
        let e = local_expand(&rf("1/t"), &place("t"), 3).unwrap();
        assert_eq!(e.series.min_degree(), -1);
        assert_eq!(e.series.terms().count(), 1);
        let e = local_expand(&rf("1/(t-1)"), &Place::Infinity, 5).unwrap();
        for k in 1..5 {
            assert_eq!(e.series.coeff(k).unwrap().as_rational(), Some(int(1)));
        }
        assert_eq!(e.series.coeff(0).unwrap().as_rational(), Some(int(0)));
        let k = place("t^2+1");
        let e = local_expand(&rf("t"), &k, 4).unwrap();
        assert_eq!(e.series.terms().count(), 1);
        assert_eq!(e.series.coeff(0).unwrap(), k.residue_field().generator());
    }

    #[test]
    fn expansions_resum_to_the_function() {
        for (f, p) in [("(t^3+2)/((t^2+1)^2*(t-3))", "t^2+1"), ("t/(t-1)^2", "t-1"), ("(t^2+t)/(t-5)", "inf")] {
            let f = rf(f);
            let p = place(p);
            let e = local_expand(&f, &p, 6).unwrap();
            let diff = &f - &e.resum();
            assert!(diff.is_zero() || p.valuation(&diff).unwrap() >= 6, "{f} at {p}");
        }
    }

    #[test]
    fn classical_residues() {
        assert_eq!(residue_classical(&rf("1/t"), &rf("t"), &place("t")).unwrap(), int(1));
        assert_eq!(residue_classical(&rf("t+1"), &rf("t^2"), &place("t")).unwrap(), int(0));
        assert_eq!(residue_classical(&rf("t"), &rf("1/(t-1)"), &place("t-1")).unwrap(), int(-1));
        assert_eq!(residue_classical(&rf("t"), &rf("1/(t-1)"), &Place::Infinity).unwrap(), int(1));
        assert_eq!(residue_classical(&rf("1/t"), &rf("t"), &Place::Infinity).unwrap(), int(-1));
        // d(t^2+1)/(t^2+1) has residue 1 at each root of t^2 + 1
        assert_eq!(residue_classical(&rf("1/(t^2+1)"), &rf("t^2+1"), &place("t^2+1")).unwrap(), int(2));
    }

    #[test]
    fn operator_residues() {
        assert_eq!(residue_tate(&rf("1/t"), &rf("t"), &place("t"), None).unwrap(), int(1));
        assert_eq!(residue_tate(&rf("t^-2"), &rf("t^2"), &place("t"), None).unwrap(), int(2));
        assert_eq!(residue_tate(&rf("1/(t^2-t)"), &rf("1/(t^2-t)"), &place("t"), None).unwrap(), int(0));
        for (f, g, p) in [("t", "1/(t-1)", "t-1"), ("(t^2+3)/(t-2)^3", "(t+1)/(t-2)", "t-2"), ("t^3+t", "1/(t+4)", "inf")] {
            let (f, g, p) = (rf(f), rf(g), place(p));
            assert_eq!(residue_tate(&f, &g, &p, None).unwrap(), residue_classical(&f, &g, &p).unwrap());
        }
    }

    #[test]
    fn small_windows_are_enlarged() {
        let f = rf("1/t^3 + 2/t");
        let g = rf("t^3 - t/2 + 5");
        let expect = residue_classical(&f, &g, &place("t")).unwrap();
        assert_eq!(residue_tate(&f, &g, &place("t"), Some(6)).unwrap(), expect);
    }

    #[test]
    fn cocycle_values() {
        let c = cocycle(&rf("1/t"), &rf("t"), &place("t"), 8).unwrap();
        assert_eq!(c.to_string(), "1 + z^2/2 + z^4/8 + z^6/48 + O(z^8)");
        assert_eq!(cocycle(&rf("1"), &rf("1/t^2"), &place("t"), 8).unwrap(), Series::one(Z, 8));
        assert_eq!(cocycle(&rf("t+1"), &rf("t^2"), &place("t"), 8).unwrap(), Series::one(Z, 8));
        let op = cocycle_operator_route(&rf("1/t"), &rf("t"), &place("t"), 0, 8).unwrap();
        assert_eq!(op, c);
        assert_eq!(symbol_exponent(&c), Some(rat(1, 2)));
        assert_eq!(symbol_exponent(&Series::new(Z, 8, [(0, int(1)), (1, int(1))])), None);
    }

    #[test]
    fn pairings() {
        let p = pairing(&rf("1/t"), &rf("t"), &place("t"), 8).unwrap();
        assert_eq!(p, exp_z2(&int(1), 8));
        assert_eq!(pairing(&rf("t/(t-1)"), &rf("t/(t-1)"), &place("t-1"), 8).unwrap(), Series::one(Z, 8));
        let (f, g, x) = (rf("(t+2)/t^2"), rf("t^3/(t-1)"), place("t"));
        let both = pairing(&f, &g, &x, 8).unwrap().mul(&pairing(&g, &f, &x, 8).unwrap()).unwrap();
        assert_eq!(both, Series::one(Z, 8));
    }

    #[test]
    fn cocycle_identity() {
        let t = place("t");
        assert!(cocycle_identity_check(&rf("1/t"), &rf("t"), &rf("t^2"), &t, 8).unwrap());
        assert!(cocycle_identity_check(&rf("t^2"), &rf("1/t"), &rf("t"), &t, 8).unwrap());
        assert!(cocycle_identity_check(&rf("t+1"), &rf("t"), &rf("3"), &t, 8).unwrap());
    }

    #[test]
    fn c4_examples() {
        let t = place("t");
        assert_eq!(quotient_traces(&rf("t"), &rf("1"), &t).unwrap(), (int(1), int(0)));
        assert!(c4_check(&rf("t"), &rf("1"), &t, 8).unwrap());
        assert_eq!(quotient_traces(&rf("t+1"), &rf("5"), &t).unwrap(), (int(0), int(0)));
        assert!(c4_check(&rf("t+1"), &rf("5"), &t, 8).unwrap());
        assert_eq!(quotient_traces(&rf("t^2"), &rf("t"), &t).unwrap(), (int(0), int(0)));
        assert!(c4_check(&rf("t^2"), &rf("t"), &t, 8).unwrap());
        assert!(c4_check(&rf("1/(t^2+1)"), &rf("t+3"), &place("t^2+1"), 8).unwrap());
        assert!(c4_check(&rf("t^3"), &rf("(t+1)/t"), &Place::Infinity, 8).unwrap());
    }

    #[test]
    fn operator_route_cocycles() {
        for (f, g, p) in [("1/t^2 + 3/t", "t^2 + t", "t"), ("t", "1/(t-1)", "t-1"), ("t^2+1", "1/t", "inf")] {
            let (f, g, p) = (rf(f), rf(g), place(p));
            assert_eq!(cocycle_operator_route(&f, &g, &p, 0, 6).unwrap(), cocycle(&f, &g, &p, 6).unwrap(), "{f}, {g} at {p}");
        }
    }

    #[test]
    fn c5_examples() {
        let t = place("t");
        let (f, g) = (rf("t^-2"), rf("t^3"));
        assert!(c5_check(&f, &g, &t, 0, 2, 6).unwrap());
        let (f, g) = (rf("1/t"), rf("t"));
        assert_eq!(
            cocycle_operator_route(&f, &g, &t, 0, 6).unwrap(),
            cocycle_operator_route(&f, &g, &t, 5, 6).unwrap()
        );
    }

    #[test]
    fn reciprocity_examples() {
        let r = reciprocity_check(&rf("t"), &rf("1/(t-1)"), 8).unwrap();
        assert_eq!(r.sum, int(0));
        assert_eq!(r.product.to_string(), "1 + O(z^8)");
        let r = reciprocity_check(&rf("1/t"), &rf("t"), 8).unwrap();
        assert!(r.holds());
        let r = reciprocity_check(&rf("t^3+2t"), &rf("t^2-7"), 8).unwrap();
        assert!(r.places.iter().all(|(_, res)| res.is_zero()));
        let r = reciprocity_check(&rf("(t^3+1)/(t^2+1)^2"), &rf("t/(t^2-2)"), 8).unwrap();
        assert!(r.holds());
    }
}

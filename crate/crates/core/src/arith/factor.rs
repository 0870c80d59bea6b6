//! Factorization of polynomials over ℚ.
//!
//! Squarefree decomposition, factorization modulo a small prime,
//! Hensel lifting to a power of that prime and recombination of the lifted
//! factors by trial division.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Polynomial;

/// Irreducible monic factors with multiplicities, sorted by degree and then
/// coefficients. Constants factor as the empty list.
pub fn factor(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(&f.monic()) {
        for h in factor_squarefree(&g) {
            out.push((h, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    out
}

/// True for polynomials of positive degree with no nontrivial factor
/// over ℚ.
pub fn is_irreducible(f: &Polynomial) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        _ => {
            let fs = factor(f);
            fs.len() == 1 && fs[0].1 == 1
        }
    }
}

/// Yun's algorithm. Input monic; output pairs `(a_i, i)` with
/// `f = Π a_i^i`, each `a_i` monic squarefree and of positive degree.
pub fn squarefree_decomposition(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = Polynomial::gcd(f, &df);
    let mut b = f.exact_div(&a0).unwrap();
    let c = df.exact_div(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = Polynomial::gcd(&b, &d);
        let nb = b.exact_div(&a).unwrap();
        let nc = d.exact_div(&a).unwrap();
        d = &nc - &nb.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        b = nb;
        i += 1;
    }
    out
}

fn factor_squarefree(g: &Polynomial) -> Vec<Polynomial> {
    if g.degree().unwrap() <= 1 {
        return vec![g.monic()];
    }
    let ints = g.primitive_integer();
    zassenhaus(ints)
        .into_iter()
        .map(|h| Polynomial::from_integers(&h).monic())
        .collect()
}

// ---- integer polynomials ----------------------------------------------

type ZPoly = Vec<BigInt>;

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out)
}

fn z_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    z_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division over ℤ, `None` if `b` does not divide `a`.
fn z_exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    if r.len() < b.len() {
        return r.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db];
        if c.is_zero() {
            continue;
        }
        let (qq, rem) = c.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &qq * bj;
        }
        q[k] = qq;
    }
    r.iter().all(|c| c.is_zero()).then(|| z_trim(q))
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: ZPoly) -> ZPoly {
    let c = content(&a);
    let s = if a.last().is_some_and(|x| x.is_negative()) { -c } else { c };
    a.into_iter().map(|x| x / &s).collect()
}

// ---- polynomials over F_p ----------------------------------------------

type FpPoly = Vec<u64>;

#[derive(Clone, Copy)]
struct Fp {
    p: u64,
}

impl Fp {
    fn trim(&self, mut a: FpPoly) -> FpPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn mul_s(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv_s(&self, a: u64) -> u64 {
        self.pow_s(a, self.p - 2)
    }

    fn pow_s(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_s(r, a);
            }
            a = self.mul_s(a, a);
            e >>= 1;
        }
        r
    }

    fn from_z(&self, a: &ZPoly) -> FpPoly {
        let p = BigInt::from(self.p);
        self.trim(a.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
    }

    fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + self.p - y) % self.p
            })
            .collect();
        self.trim(r)
    }

    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mul_s(x, y)) % self.p;
            }
        }
        self.trim(out)
    }

    fn divrem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let li = self.inv_s(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul_s(r[k + db], li);
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - self.mul_s(c, bj)) % self.p;
            }
            q[k] = c;
        }
        (self.trim(q), self.trim(r))
    }

    fn rem(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &FpPoly) -> FpPoly {
        let li = self.inv_s(*a.last().unwrap());
        a.iter().map(|&c| self.mul_s(c, li)).collect()
    }

    fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    /// `(g, s, t)` with `s·a + t·b = g` monic.
    fn ext_gcd(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], vec![]);
        let (mut t0, mut t1): (FpPoly, FpPoly) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let li = self.inv_s(*r0.last().unwrap());
        let sc = |v: &FpPoly| self.trim(v.iter().map(|&c| self.mul_s(c, li)).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    fn derivative(&self, a: &FpPoly) -> FpPoly {
        let r = a.iter().enumerate().skip(1).map(|(i, &c)| self.mul_s(c, i as u64 % self.p)).collect();
        self.trim(r)
    }

    fn powmod(&self, a: &FpPoly, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut result: FpPoly = vec![1];
        let base = self.rem(a, m);
        for i in (0..e.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), m);
            if e.bit(i) {
                result = self.rem(&self.mul(&result, &base), m);
            }
        }
        result
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf(&self, f: &FpPoly) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x: FpPoly = vec![0, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut d = 1;
        while f.len() - 1 >= 2 * d {
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Equal-degree splitting (odd `p`) of a product of irreducibles of
    /// degree `d`.
    fn edf(&self, f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.clone()];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: FpPoly = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() <= 1 {
                continue;
            }
            let g = self.gcd(&a, f);
            let split = if g.len() > 1 && g.len() < f.len() {
                g
            } else {
                let b = self.sub(&self.powmod(&a, &e, f), &vec![1]);
                self.gcd(&b, f)
            };
            if split.len() > 1 && split.len() < f.len() {
                let rest = self.divrem(f, &split).0;
                let mut out = self.edf(&split, d, rng);
                out.extend(self.edf(&self.monic(&rest), d, rng));
                return out;
            }
        }
    }
}

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
];

/// Factors a primitive squarefree integer polynomial of degree ≥ 2 with
/// positive leading coefficient into primitive irreducible factors.
fn zassenhaus(f: ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let lc = f.last().unwrap().clone();
    let fp = PRIMES
        .iter()
        .map(|&p| Fp { p })
        .find(|fp| {
            let pb = BigInt::from(fp.p);
            if lc.mod_floor(&pb).is_zero() {
                return false;
            }
            let g = fp.from_z(&f);
            fp.gcd(&g, &fp.derivative(&g)).len() == 1
        })
        .expect("some small prime keeps a squarefree polynomial squarefree");

    let monic_fp = fp.monic(&fp.from_z(&f));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut modular: Vec<FpPoly> = Vec::new();
    for (g, d) in fp.ddf(&monic_fp) {
        modular.extend(fp.edf(&g, d, &mut rng));
    }
    if modular.len() == 1 {
        return vec![f];
    }

    // coefficient bound for lc times any factor
    let max_coef = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * max_coef;
    let p = BigInt::from(fp.p);
    let mut k = 1u32;
    let mut m = p.clone();
    while m <= bound {
        m *= &p;
        k += 1;
    }

    let lifted = multifactor_lift(&f, &modular, fp, k, &m);

    // recombination
    let mut remaining = f;
    let mut pool: Vec<ZPoly> = lifted;
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= pool.len() {
        let mut hit = None;
        for subset in combinations(pool.len(), s) {
            let lc_r = remaining.last().unwrap().clone();
            let mut cand: ZPoly = vec![lc_r];
            for &i in &subset {
                cand = z_mod(&z_mul(&cand, &pool[i]), &m);
            }
            let cand = primitive(symmetric(&cand, &m));
            if let Some(q) = z_exact_div(&remaining, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                remaining = q;
                for i in subset.into_iter().rev() {
                    pool.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if remaining.len() > 1 {
        found.push(primitive(remaining));
    }
    found
}

/// Lifts `f ≡ lc · Π g_i (mod p)` to monic factors modulo `m = p^k`.
fn multifactor_lift(f: &ZPoly, gs: &[FpPoly], fp: Fp, k: u32, m: &BigInt) -> Vec<ZPoly> {
    let lc = f.last().unwrap().clone();
    let mut target = z_mod(f, m);
    let mut out = Vec::new();
    for i in 0..gs.len() - 1 {
        let g = gs[i].clone();
        let mut h: FpPoly = vec![fp.from_z(&vec![lc.clone()])[0]];
        for gj in &gs[i + 1..] {
            h = fp.mul(&h, gj);
        }
        let (g_l, h_l) = hensel_pair(&target, &g, &h, fp, k, m);
        out.push(g_l);
        target = h_l;
    }
    // the last factor: target / lc modulo m
    let lc_inv = lc.modinv(m).expect("lc is a unit modulo p^k");
    out.push(z_mod(&target.iter().map(|c| c * &lc_inv).collect(), m));
    out
}

/// Linear Hensel lifting of `f ≡ g·h (mod p)`, `g` monic, `lc(h) = lc(f)`,
/// to modulus `p^k`.
fn hensel_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, fp: Fp, k: u32, m: &BigInt) -> (ZPoly, ZPoly) {
    let (one, s, t) = fp.ext_gcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let to_z = |a: &FpPoly| -> ZPoly { a.iter().map(|&c| BigInt::from(c)).collect() };
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    // force lc(h) to the exact leading coefficient of f
    *hz.last_mut().unwrap() = f.last().unwrap().clone();
    let p = BigInt::from(fp.p);
    let mut pj = p.clone();
    for _ in 1..k {
        let diff: ZPoly = {
            let gh = z_mul(&gz, &hz);
            let len = f.len().max(gh.len());
            (0..len)
                .map(|i| {
                    f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default()
                })
                .collect()
        };
        let e: ZPoly = z_mod(&diff, m).iter().map(|c| c / &pj).collect();
        let e = fp.from_z(&e);
        let te = fp.mul(&t, &e);
        let (q, r) = fp.divrem(&te, g);
        let hc = fp.trim({
            let a = fp.mul(&e, &s);
            let b = fp.mul(&q, h);
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % fp.p)
                .collect()
        });
        let next = &pj * &p;
        gz = add_scaled(&gz, &r, &pj, &next);
        hz = add_scaled(&hz, &hc, &pj, &next);
        pj = next;
    }
    (z_mod(&gz, m), z_mod(&hz, m))
}

fn add_scaled(a: &ZPoly, c: &FpPoly, scale: &BigInt, m: &BigInt) -> ZPoly {
    let n = a.len().max(c.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = BigInt::from(c.get(i).copied().unwrap_or(0));
            (x + y * scale).mod_floor(m)
        })
        .collect();
    z_trim(v)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

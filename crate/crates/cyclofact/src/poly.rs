//! Polynomials with coefficients at a fixed extension level of the tower.
//!
//! Everything a factorization pipeline needs lives here: exact division,
//! gcds, modular powering, Rabin's irreducibility test, square-free /
//! distinct-degree / equal-degree factorization, minimal polynomials of
//! extension elements, and the cyclotomic-coset ("orbit") factorization of
//! x^n - 1 that the rest of the crate uses as an independent cross-check.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::{factor_u128, factor_u64, gcd_u64, ord_mod};
use crate::error::{Error, Result};
use crate::field::{rng_for, Digits, FieldElement, FieldTower};

/// Dense polynomial over F_{q^level}, coefficients ascending, no trailing
/// zeros (the zero polynomial has an empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    level: usize,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn zero(level: usize) -> Self {
        Polynomial {
            level,
            coeffs: Vec::new(),
        }
    }

    pub fn one(tower: &FieldTower, level: usize) -> Self {
        Polynomial {
            level,
            coeffs: vec![tower.one(level)],
        }
    }

    pub fn x(tower: &FieldTower, level: usize) -> Self {
        Polynomial {
            level,
            coeffs: vec![tower.zero(level), tower.one(level)],
        }
    }

    /// x - a.
    pub fn x_minus(tower: &FieldTower, a: &FieldElement) -> Self {
        Polynomial {
            level: a.level(),
            coeffs: vec![tower.el_neg(a), tower.one(a.level())],
        }
    }

    pub fn from_el_coeffs(tower: &FieldTower, level: usize, coeffs: Vec<FieldElement>) -> Self {
        for c in &coeffs {
            assert_eq!(c.level(), level, "coefficient at wrong level");
        }
        let mut f = Polynomial { level, coeffs };
        f.trim(tower);
        f
    }

    /// Level-1 polynomial from F_q coefficient digit vectors (ascending).
    pub fn from_fq_coeffs(tower: &FieldTower, coeffs: Vec<Digits>) -> Self {
        let els = coeffs.iter().map(|c| tower.from_fq(1, c)).collect();
        Self::from_el_coeffs(tower, 1, els)
    }

    /// Level-1 polynomial from integer representatives (ascending, base-p
    /// encoded for s > 1).
    pub fn from_integers(tower: &FieldTower, coeffs: &[u128]) -> Self {
        let els = coeffs
            .iter()
            .map(|&c| tower.from_fq(1, &tower.fq_from_u128(c)))
            .collect();
        Self::from_el_coeffs(tower, 1, els)
    }

    fn trim(&mut self, tower: &FieldTower) {
        while self
            .coeffs
            .last()
            .map(|c| tower.el_is_zero(c))
            .unwrap_or(false)
        {
            self.coeffs.pop();
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, tower: &FieldTower, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| tower.zero(self.level))
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, tower: &FieldTower) -> bool {
        self.leading().map(|c| tower.el_is_one(c)).unwrap_or(false)
    }

    /// Integer representatives of the coefficients, for display and for the
    /// canonical ordering of factor lists.
    pub fn int_coeffs(&self, tower: &FieldTower) -> Vec<Vec<u128>> {
        self.coeffs
            .iter()
            .map(|c| c.coord_values(tower.p(), tower.s()))
            .collect()
    }

    /// Level-1 polynomials print as comma-separated ascending integers.
    pub fn to_int_string(&self, tower: &FieldTower) -> String {
        self.coeffs
            .iter()
            .map(|c| c.coord_values(tower.p(), tower.s())[0].to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the comma format ("1,4,1,4,1,4,1", ascending) into a level-1
    /// polynomial.
    pub fn parse(tower: &FieldTower, text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for part in text.split(',') {
            let v: u128 = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
            if v >= tower.q() {
                return Err(Error::Parse(format!(
                    "coefficient {v} out of range for a field of size {}",
                    tower.q()
                )));
            }
            coeffs.push(v);
        }
        if coeffs.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        Ok(Self::from_integers(tower, &coeffs))
    }
}

fn check_levels(a: &Polynomial, b: &Polynomial) -> Result<()> {
    if a.level != b.level {
        return Err(Error::MixedLevels(a.level, b.level));
    }
    Ok(())
}

pub fn add(tower: &FieldTower, a: &Polynomial, b: &Polynomial) -> Polynomial {
    check_levels(a, b).expect("mixed levels");
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|i| tower.el_add(&a.coeff(tower, i), &b.coeff(tower, i)))
        .collect();
    Polynomial::from_el_coeffs(tower, a.level, coeffs)
}

pub fn sub(tower: &FieldTower, a: &Polynomial, b: &Polynomial) -> Polynomial {
    check_levels(a, b).expect("mixed levels");
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|i| tower.el_sub(&a.coeff(tower, i), &b.coeff(tower, i)))
        .collect();
    Polynomial::from_el_coeffs(tower, a.level, coeffs)
}

pub fn neg(tower: &FieldTower, a: &Polynomial) -> Polynomial {
    let coeffs = a.coeffs.iter().map(|c| tower.el_neg(c)).collect();
    Polynomial {
        level: a.level,
        coeffs,
    }
}

pub fn mul(tower: &FieldTower, a: &Polynomial, b: &Polynomial) -> Polynomial {
    check_levels(a, b).expect("mixed levels");
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero(a.level);
    }
    let mut coeffs = vec![tower.zero(a.level); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ac) in a.coeffs.iter().enumerate() {
        if tower.el_is_zero(ac) {
            continue;
        }
        for (j, bc) in b.coeffs.iter().enumerate() {
            if tower.el_is_zero(bc) {
                continue;
            }
            let prod = tower.el_mul(ac, bc);
            coeffs[i + j] = tower.el_add(&coeffs[i + j], &prod);
        }
    }
    Polynomial::from_el_coeffs(tower, a.level, coeffs)
}

pub fn scale(tower: &FieldTower, a: &Polynomial, c: &FieldElement) -> Polynomial {
    let coeffs = a.coeffs.iter().map(|x| tower.el_mul(x, c)).collect();
    Polynomial::from_el_coeffs(tower, a.level, coeffs)
}

/// Balanced product of a list of polynomials (keeps degrees paired instead
/// of multiplying a huge running product by tiny factors).
pub fn product(tower: &FieldTower, polys: &[Polynomial], level: usize) -> Polynomial {
    if polys.is_empty() {
        return Polynomial::one(tower, level);
    }
    let mut layer: Vec<Polynomial> = polys.to_vec();
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            if pair.len() == 2 {
                next.push(mul(tower, &pair[0], &pair[1]));
            } else {
                next.push(pair[0].clone());
            }
        }
        layer = next;
    }
    layer.pop().unwrap()
}

pub fn divmod(
    tower: &FieldTower,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<(Polynomial, Polynomial)> {
    check_levels(f, g)?;
    let dg = g.deg().ok_or(Error::DivisionByZero)?;
    let df = match f.deg() {
        Some(d) if d >= dg => d,
        _ => return Ok((Polynomial::zero(f.level), f.clone())),
    };
    let lead_inv = tower.el_inv(g.leading().unwrap())?;
    let mut rem = f.coeffs.clone();
    let mut quot = vec![tower.zero(f.level); df - dg + 1];
    for k in (dg..=df).rev() {
        let c = tower.el_mul(&rem[k], &lead_inv);
        if tower.el_is_zero(&c) {
            continue;
        }
        quot[k - dg] = c.clone();
        for t in 0..=dg {
            let prod = tower.el_mul(&c, &g.coeffs[t]);
            rem[k - dg + t] = tower.el_sub(&rem[k - dg + t], &prod);
        }
    }
    Ok((
        Polynomial::from_el_coeffs(tower, f.level, quot),
        Polynomial::from_el_coeffs(tower, f.level, rem),
    ))
}

pub fn rem(tower: &FieldTower, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    Ok(divmod(tower, f, g)?.1)
}

/// Division that must be exact.
pub fn exact_div(tower: &FieldTower, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let (q, r) = divmod(tower, f, g)?;
    if !r.is_zero() {
        return Err(Error::InexactDivision);
    }
    Ok(q)
}

pub fn monic(tower: &FieldTower, f: &Polynomial) -> Result<Polynomial> {
    let lead = f.leading().ok_or(Error::DivisionByZero)?;
    if tower.el_is_one(lead) {
        return Ok(f.clone());
    }
    let inv = tower.el_inv(lead)?;
    Ok(scale(tower, f, &inv))
}

/// Monic gcd.
pub fn gcd(tower: &FieldTower, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = rem(tower, &x, &y)?;
        x = y;
        y = r;
    }
    if x.is_zero() {
        Ok(x)
    } else {
        monic(tower, &x)
    }
}

pub fn eval(tower: &FieldTower, f: &Polynomial, at: &FieldElement) -> FieldElement {
    assert_eq!(f.level, at.level(), "evaluation point at wrong level");
    let mut acc = tower.zero(f.level);
    for c in f.coeffs.iter().rev() {
        acc = tower.el_mul(&acc, at);
        acc = tower.el_add(&acc, c);
    }
    acc
}

pub fn derivative(tower: &FieldTower, f: &Polynomial) -> Polynomial {
    if f.coeffs.len() <= 1 {
        return Polynomial::zero(f.level);
    }
    let coeffs = f.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = tower.constant(f.level, ((i as u128) + 1) % tower.p() as u128);
            tower.el_mul(c, &k)
        })
        .collect();
    Polynomial::from_el_coeffs(tower, f.level, coeffs)
}

/// f(x^t).
pub fn subst_xpow(tower: &FieldTower, f: &Polynomial, t: usize) -> Polynomial {
    assert!(t >= 1);
    if f.is_zero() {
        return f.clone();
    }
    let mut coeffs = vec![tower.zero(f.level); (f.coeffs.len() - 1) * t + 1];
    for (i, c) in f.coeffs.iter().enumerate() {
        coeffs[i * t] = c.clone();
    }
    Polynomial::from_el_coeffs(tower, f.level, coeffs)
}

/// f(-x).
pub fn sign_flip(tower: &FieldTower, f: &Polynomial) -> Polynomial {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { tower.el_neg(c) } else { c.clone() })
        .collect();
    Polynomial::from_el_coeffs(tower, f.level, coeffs)
}

/// For monic f with roots {r_k}, returns the monic polynomial with roots
/// {v * r_k}: the coefficient of x^j picks up a factor v^(deg - j).
pub fn scale_roots(tower: &FieldTower, f: &Polynomial, v: &FieldElement) -> Polynomial {
    let d = f.deg().expect("scale_roots of zero polynomial");
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut vpow = tower.one(f.level);
    for j in (0..=d).rev() {
        coeffs.push((j, tower.el_mul(&f.coeffs[j], &vpow)));
        vpow = tower.el_mul(&vpow, v);
    }
    coeffs.sort_by_key(|&(j, _)| j);
    Polynomial::from_el_coeffs(tower, f.level, coeffs.into_iter().map(|(_, c)| c).collect())
}

/// f(x + a).
pub fn translate(tower: &FieldTower, f: &Polynomial, a: &FieldElement) -> Polynomial {
    assert_eq!(f.level, a.level());
    let shift = Polynomial::from_el_coeffs(tower, f.level, vec![a.clone(), tower.one(f.level)]);
    let mut acc = Polynomial::zero(f.level);
    for c in f.coeffs.iter().rev() {
        acc = mul(tower, &acc, &shift);
        acc = add(
            tower,
            &acc,
            &Polynomial::from_el_coeffs(tower, f.level, vec![c.clone()]),
        );
    }
    acc
}

/// Lift a level-1 polynomial to a higher level (constant embedding of each
/// coefficient).
pub fn lift(tower: &FieldTower, f: &Polynomial, level: usize) -> Result<Polynomial> {
    assert_eq!(f.level, 1, "can only lift from the base field");
    tower.ensure_level(level)?;
    let coeffs = f
        .coeffs
        .iter()
        .map(|c| tower.from_fq(level, &tower.descend_el(c).expect("level-1 coefficient")))
        .collect();
    Ok(Polynomial::from_el_coeffs(tower, level, coeffs))
}

/// Descend a polynomial whose coefficients all lie in F_q back to level 1.
pub fn descend(tower: &FieldTower, f: &Polynomial) -> Result<Polynomial> {
    let mut coeffs = Vec::with_capacity(f.coeffs.len());
    for c in &f.coeffs {
        coeffs.push(tower.descend_el(c)?);
    }
    Ok(Polynomial::from_fq_coeffs(tower, coeffs))
}

pub fn powmod(tower: &FieldTower, base: &Polynomial, e: u128, m: &Polynomial) -> Result<Polynomial> {
    if e == 0 {
        return Ok(Polynomial::one(tower, base.level));
    }
    let bits = 128 - e.leading_zeros();
    let mut acc = rem(tower, base, m)?;
    for i in (0..bits - 1).rev() {
        acc = rem(tower, &mul(tower, &acc, &acc), m)?;
        if (e >> i) & 1 == 1 {
            acc = rem(tower, &mul(tower, &acc, base), m)?;
        }
    }
    Ok(acc)
}

pub fn powmod_big(
    tower: &FieldTower,
    base: &Polynomial,
    e: &BigUint,
    m: &Polynomial,
) -> Result<Polynomial> {
    let bits = e.bits();
    if bits == 0 {
        return Ok(Polynomial::one(tower, base.level));
    }
    let mut acc = rem(tower, base, m)?;
    for i in (0..bits - 1).rev() {
        acc = rem(tower, &mul(tower, &acc, &acc), m)?;
        if e.bit(i) {
            acc = rem(tower, &mul(tower, &acc, base), m)?;
        }
    }
    Ok(acc)
}

/// x^(Q^k) mod m, where Q = q^level is the coefficient field size, computed
/// as k successive Q-th powers.
fn frobenius_power_mod(
    tower: &FieldTower,
    start: &Polynomial,
    k: usize,
    m: &Polynomial,
) -> Result<Polynomial> {
    let q_eff = tower.level_size(m.level);
    let mut cur = start.clone();
    for _ in 0..k {
        cur = powmod_big(tower, &cur, &q_eff, m)?;
    }
    Ok(cur)
}

/// Rabin's irreducibility test over the coefficient field F_{q^level}.
pub fn is_irreducible(tower: &FieldTower, f: &Polynomial) -> Result<bool> {
    let n = match f.deg() {
        None | Some(0) => return Ok(false),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = monic(tower, f)?;
    let x = Polynomial::x(tower, f.level);
    // Record x^(Q^k) mod f at the checkpoints n/l and at n itself.  The
    // extra checkpoints at k = 1, 2, 3 are an early screen: a factor of
    // degree <= 3 shows up in the gcd there, so most reducible candidates
    // are rejected after three Frobenius steps instead of n/2.
    let mut checkpoints: Vec<usize> = factor_u64(n as u64)
        .iter()
        .map(|&(l, _)| n / l as usize)
        .collect();
    checkpoints.extend((1..=3).filter(|&k| k < n));
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let mut cur = rem(tower, &x, &f)?;
    let mut step = 0usize;
    for &cp in &checkpoints {
        cur = frobenius_power_mod(tower, &cur, cp - step, &f)?;
        step = cp;
        let diff = sub(tower, &cur, &x);
        let g = gcd(tower, &diff, &f)?;
        if g.deg() != Some(0) {
            return Ok(false);
        }
    }
    cur = frobenius_power_mod(tower, &cur, n - step, &f)?;
    let diff = sub(tower, &cur, &x);
    Ok(rem(tower, &diff, &f)?.is_zero())
}

/// Order of an irreducible f with f(0) != 0: the least t with f | x^t - 1.
/// Requires factoring q^deg(f) - 1, hence the size refusal.
pub fn poly_order(tower: &FieldTower, f: &Polynomial) -> Result<u128> {
    assert_eq!(f.level, 1);
    let n = f.deg().ok_or(Error::DivisionByZero)?;
    if n == 0 || tower.el_is_zero(&f.coeff(tower, 0)) {
        return Err(Error::ZeroConstantTerm);
    }
    let f = monic(tower, f)?;
    let big = tower.level_size(n) - 1u8;
    let group = u128::try_from(&big).map_err(|_| Error::SizeRefusal(n))?;
    let x = Polynomial::x(tower, 1);
    let one = Polynomial::one(tower, 1);
    let mut ord = group;
    for (pr, _) in factor_u128(group) {
        while ord % pr == 0 && powmod(tower, &x, ord / pr, &f)? == one {
            ord /= pr;
        }
    }
    Ok(ord)
}

/// Minimal polynomial over F_q of an element at any level: the product of
/// x - beta^(q^i) over the Frobenius orbit, descended to level 1.
pub fn minimal_polynomial(tower: &FieldTower, beta: &FieldElement) -> Result<Polynomial> {
    let mut orbit = vec![beta.clone()];
    let mut cur = tower.frobenius(beta);
    while &cur != beta {
        orbit.push(cur.clone());
        cur = tower.frobenius(&cur);
    }
    let linears: Vec<Polynomial> = orbit
        .iter()
        .map(|b| Polynomial::x_minus(tower, b))
        .collect();
    let prod = product(tower, &linears, beta.level());
    let down = descend(tower, &prod)?;
    debug_assert!(tower.el_is_zero(&eval(
        tower,
        &lift(tower, &down, beta.level())?,
        beta
    )));
    Ok(down)
}

// ---- factorization ----------------------------------------------------------

/// Square-free decomposition of a monic polynomial.
fn squarefree_parts(tower: &FieldTower, f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    let p = tower.p() as usize;
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    let fp = derivative(tower, f);
    if fp.is_zero() {
        // f is a p-th power: take the p-th root coefficient-wise and recurse.
        let root = pth_root(tower, f)?;
        for (g, e) in squarefree_parts(tower, &root)? {
            out.push((g, e * p as u32));
        }
        return Ok(out);
    }
    let mut c = gcd(tower, f, &fp)?;
    let mut w = exact_div(tower, f, &c)?;
    let mut i = 1u32;
    while w.deg() != Some(0) {
        let y = gcd(tower, &w, &c)?;
        let fac = exact_div(tower, &w, &y)?;
        if fac.deg() != Some(0) {
            out.push((fac, i));
        }
        w = y.clone();
        c = exact_div(tower, &c, &y)?;
        i += 1;
    }
    if c.deg() != Some(0) {
        let root = pth_root(tower, &c)?;
        for (g, e) in squarefree_parts(tower, &root)? {
            out.push((g, e * p as u32));
        }
    }
    Ok(out)
}

/// p-th root of a polynomial in F_{q^level}[x^p]: drop to every p-th
/// coefficient and take the p-th root of each (a -> a^(Q/p)).
fn pth_root(tower: &FieldTower, f: &Polynomial) -> Result<Polynomial> {
    let p = tower.p() as usize;
    let q_over_p = tower.level_size(f.level) / tower.p();
    let mut coeffs = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        if i % p == 0 {
            coeffs.push(tower.el_pow_big(c, &q_over_p));
        } else if !tower.el_is_zero(c) {
            return Err(Error::InexactDivision);
        }
    }
    Ok(Polynomial::from_el_coeffs(tower, f.level, coeffs))
}

/// Distinct-degree factorization of a monic square-free polynomial:
/// (product of irreducibles of degree d, d) pairs.
fn distinct_degree(tower: &FieldTower, f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let x = Polynomial::x(tower, f.level);
    let mut h = rem(tower, &x, &g)?;
    let mut d = 0usize;
    while let Some(dg) = g.deg() {
        if dg == 0 {
            break;
        }
        d += 1;
        if 2 * d > dg {
            out.push((g.clone(), dg));
            break;
        }
        h = frobenius_power_mod(tower, &h, 1, &g)?;
        let gd = gcd(tower, &sub(tower, &h, &x), &g)?;
        if gd.deg() != Some(0) {
            out.push((gd.clone(), d));
            g = exact_div(tower, &g, &gd)?;
            h = rem(tower, &h, &g)?;
        }
    }
    Ok(out)
}

/// Equal-degree (Cantor-Zassenhaus) splitting: `f` is monic square-free with
/// all irreducible factors of degree d over F_{q^level}.
fn equal_degree(tower: &FieldTower, f: &Polynomial, d: usize) -> Result<Vec<Polynomial>> {
    let deg = f.deg().expect("nonzero input");
    if deg == d {
        return Ok(vec![f.clone()]);
    }
    let level = f.level;
    let q_eff = tower.level_size(level);
    let mut rng = rng_for(
        tower.seed(),
        "equal-degree",
        &[level as u64, deg as u64, d as u64],
    );
    let mut todo = vec![f.clone()];
    let mut done = Vec::new();
    while let Some(g) = todo.pop() {
        let dg = g.deg().unwrap();
        if dg == d {
            done.push(g);
            continue;
        }
        // Random candidate of degree < deg g.
        let coeffs: Vec<FieldElement> = (0..dg)
            .map(|_| {
                let digits: Vec<Digits> = (0..level)
                    .map(|_| (0..tower.s()).map(|_| rng.gen_range(0..tower.p())).collect())
                    .collect();
                tower.from_coords(level, digits)
            })
            .collect();
        let cand = Polynomial::from_el_coeffs(tower, level, coeffs);
        if cand.deg().is_none() {
            todo.push(g);
            continue;
        }
        let splitter = if tower.p() == 2 {
            // Trace map to F_2: sum of cand^(2^i) for i < log2(Q^d).
            let k = (tower.s() * level * d) as u32;
            let mut acc = rem(tower, &cand, &g)?;
            let mut term = acc.clone();
            for _ in 1..k {
                term = rem(tower, &mul(tower, &term, &term), &g)?;
                acc = add(tower, &acc, &term);
            }
            acc
        } else {
            let e = (q_eff.pow(d as u32) - 1u8) >> 1;
            let b = powmod_big(tower, &cand, &e, &g)?;
            sub(tower, &b, &Polynomial::one(tower, level))
        };
        let h = gcd(tower, &splitter, &g)?;
        match h.deg() {
            Some(k) if k > 0 && k < dg => {
                todo.push(exact_div(tower, &g, &h)?);
                todo.push(h);
            }
            _ => todo.push(g), // unlucky candidate; try the next one
        }
    }
    Ok(done)
}

/// Full factorization into monic irreducibles with multiplicities,
/// canonically ordered.  Works at any coefficient level.
/// Least-degree monic psi with psi(g) = 0 mod f, for irreducible f. The
/// powers 1, g, g^2, ... are reduced against a growing row-echelon basis of
/// F_q-vectors until the first linear dependency appears.
pub fn min_poly_in_quotient(
    tower: &FieldTower,
    g: &Polynomial,
    f: &Polynomial,
) -> Result<Polynomial> {
    let n = f.deg().unwrap();
    // Echelon rows: (pivot column, coordinate vector, combination over the
    // powers of g that produced it).
    let mut rows: Vec<(usize, Vec<Vec<u64>>, Vec<Vec<u64>>)> = Vec::new();
    let mut power = Polynomial::one(tower, 1);
    for k in 0..=n {
        let mut vec: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                power
                    .coeffs()
                    .get(i)
                    .map(|c| c.coords(tower.s())[0].clone())
                    .unwrap_or_else(|| tower.fq_zero())
            })
            .collect();
        let mut combo: Vec<Vec<u64>> = vec![tower.fq_zero(); k + 1];
        combo[k] = tower.fq_one();
        for (pivot, row_vec, row_combo) in &rows {
            let c = vec[*pivot].clone();
            if tower.fq_is_zero(&c) {
                continue;
            }
            for i in 0..n {
                vec[i] = tower.fq_sub(&vec[i], &tower.fq_mul(&c, &row_vec[i]));
            }
            for (i, rc) in row_combo.iter().enumerate() {
                combo[i] = tower.fq_sub(&combo[i], &tower.fq_mul(&c, rc));
            }
        }
        match (0..n).find(|&i| !tower.fq_is_zero(&vec[i])) {
            Some(pivot) => {
                let inv = tower.fq_inv(&vec[pivot])?;
                for i in 0..n {
                    vec[i] = tower.fq_mul(&vec[i], &inv);
                }
                for c in combo.iter_mut() {
                    *c = tower.fq_mul(c, &inv);
                }
                rows.push((pivot, vec, combo));
            }
            None => {
                // First dependency: combo encodes the minimal polynomial,
                // already monic in degree k.
                return Ok(Polynomial::from_fq_coeffs(tower, combo));
            }
        }
        power = rem(tower, &mul(tower, &power, g), f)?;
    }
    Err(Error::DescentFailure)
}


pub fn factor(tower: &FieldTower, f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    if f.deg().is_none() {
        return Err(Error::DivisionByZero);
    }
    let mut g = monic(tower, f)?;
    // Pull out the x^k part so that everything later has nonzero constant term.
    let mut k = 0u32;
    while g.deg() > Some(0) && tower.el_is_zero(&g.coeff(tower, 0)) {
        g = exact_div(tower, &g, &Polynomial::x(tower, f.level))?;
        k += 1;
    }
    if k > 0 {
        out.push((Polynomial::x(tower, f.level), k));
    }
    if g.deg() > Some(0) {
        for (sf, mult) in squarefree_parts(tower, &g)? {
            for (prod_d, d) in distinct_degree(tower, &sf)? {
                for irr in equal_degree(tower, &prod_d, d)? {
                    out.push((irr, mult));
                }
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| canon_cmp(tower, a, b));
    Ok(out)
}

/// Canonical order on polynomials: by degree, then lexicographically on the
/// ascending coefficient integer representatives.
pub fn canon_cmp(tower: &FieldTower, a: &Polynomial, b: &Polynomial) -> Ordering {
    (a.deg(), a.int_coeffs(tower)).cmp(&(b.deg(), b.int_coeffs(tower)))
}

/// lcm of the degrees of the irreducible factors: the degree of the smallest
/// extension containing every root.
pub fn splitting_degree(tower: &FieldTower, f: &Polynomial) -> Result<usize> {
    let mut l = 1u64;
    for (g, _) in factor(tower, f)? {
        if g.deg() > Some(0) {
            l = crate::arith::lcm_u64(l, g.deg().unwrap() as u64);
        }
    }
    Ok(l as usize)
}

/// All distinct roots of a level-1 polynomial inside F_{q^level},
/// canonically sorted.
pub fn distinct_roots_in_level(
    tower: &FieldTower,
    f: &Polynomial,
    level: usize,
) -> Result<Vec<FieldElement>> {
    assert_eq!(f.level, 1);
    let fl = lift(tower, f, level)?;
    let fl = monic(tower, &fl)?;
    let x = Polynomial::x(tower, level);
    let xq = frobenius_power_mod(tower, &rem(tower, &x, &fl)?, 1, &fl)?;
    let lin = gcd(tower, &sub(tower, &xq, &x), &fl)?;
    let mut roots = Vec::new();
    if lin.deg() > Some(0) {
        for factor in equal_degree(tower, &lin, 1)? {
            // monic linear x - r.
            roots.push(tower.el_neg(&factor.coeff(tower, 0)));
        }
    }
    roots.sort_by(|a, b| a.canon_cmp(b, tower.p(), tower.s()));
    Ok(roots)
}

/// Roots in F_{q^level} with multiplicities.
pub fn roots_with_multiplicity(
    tower: &FieldTower,
    f: &Polynomial,
    level: usize,
) -> Result<Vec<(FieldElement, u32)>> {
    let roots = distinct_roots_in_level(tower, f, level)?;
    let mut fl = monic(tower, &lift(tower, f, level)?)?;
    let mut out = Vec::new();
    for r in roots {
        let lin = Polynomial::x_minus(tower, &r);
        let mut m = 0u32;
        loop {
            match divmod(tower, &fl, &lin)? {
                (q, rest) if rest.is_zero() => {
                    fl = q;
                    m += 1;
                }
                _ => break,
            }
        }
        out.push((r, m));
    }
    Ok(out)
}

// ---- cyclotomic cosets and the orbit factorization of x^n - 1 -------------

/// One coset {j q^i mod n} of primitive exponents, with the corresponding
/// irreducible factor of the n-th cyclotomic polynomial and its signed
/// elementary symmetric functions: minpoly = sum_i (-1)^i S_i x^(d-i).
#[derive(Clone, Debug)]
pub struct OrbitFactor {
    pub rep: u64,
    pub exponents: Vec<u64>,
    pub minpoly: Polynomial,
    pub sym: Vec<Digits>,
}

/// The factorization of the n-th cyclotomic polynomial by q-cosets on the
/// primitive n-th roots of unity.
#[derive(Debug)]
pub struct UnityOrbits {
    pub n: u64,
    pub level: usize,
    pub factors: Vec<OrbitFactor>,
}

pub fn orbit_factorize_unity(tower: &FieldTower, n: u64) -> Result<UnityOrbits> {
    if gcd_u64(n, tower.p()) != 1 {
        return Err(Error::CharacteristicDivides(n));
    }
    if n == 1 || n == 2 {
        let minus_one = tower.fq_neg(&tower.fq_one());
        let c = if n == 1 {
            minus_one.clone() // the factor is x - 1
        } else {
            tower.fq_one()
        };
        let f = Polynomial::from_fq_coeffs(tower, vec![c, tower.fq_one()]);
        let root_exp = if n == 1 { 0 } else { 1 };
        let sym = vec![
            tower.fq_one(),
            if n == 1 { tower.fq_one() } else { minus_one },
        ];
        return Ok(UnityOrbits {
            n,
            level: 1,
            factors: vec![OrbitFactor {
                rep: root_exp,
                exponents: vec![root_exp],
                minpoly: f,
                sym,
            }],
        });
    }
    let level = ord_mod(tower.q(), n)? as usize;
    tower.ensure_level(level)?;
    let xi = tower.root_of_unity(n, level)?;
    let qn = (tower.q() % n as u128) as u64;
    // Modulus of the ambient level, for minimal polynomials by elimination.
    let modulus = if level > 1 {
        Some(Polynomial::from_fq_coeffs(tower, tower.modulus_coeffs(level)?))
    } else {
        None
    };
    let mut seen = vec![false; n as usize];
    let mut factors = Vec::new();
    for rep in 1..n {
        if seen[rep as usize] || gcd_u64(rep, n) != 1 {
            continue;
        }
        let mut exponents = Vec::new();
        let mut e = rep;
        loop {
            seen[e as usize] = true;
            exponents.push(e);
            e = ((e as u128 * qn as u128) % n as u128) as u64;
            if e == rep {
                break;
            }
        }
        exponents.sort_unstable();
        let root = tower.el_pow(&xi, rep as u128);
        let minpoly = match &modulus {
            None => Polynomial::x_minus(tower, &root),
            Some(m) => {
                let as_poly = Polynomial::from_fq_coeffs(tower, root.coords(tower.s()));
                min_poly_in_quotient(tower, &as_poly, m)?
            }
        };
        debug_assert_eq!(minpoly.deg(), Some(exponents.len()));
        let d = minpoly.deg().unwrap();
        let mut sym = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let c = tower.descend_el(&minpoly.coeff(tower, d - i)).unwrap();
            sym.push(if i % 2 == 1 { tower.fq_neg(&c) } else { c });
        }
        factors.push(OrbitFactor {
            rep,
            exponents,
            minpoly,
            sym,
        });
    }
    factors.sort_by_key(|f| f.rep);
    Ok(UnityOrbits { n, level, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldTower {
        FieldTower::new(5, 1, 42).unwrap()
    }

    fn poly(tower: &FieldTower, cs: &[u128]) -> Polynomial {
        Polynomial::from_integers(tower, cs)
    }

    #[test]
    fn ring_ops() {
        let t = f5();
        let f = poly(&t, &[1, 2, 3]); // 3x^2 + 2x + 1
        let g = poly(&t, &[4, 1]); // x + 4
        let h = mul(&t, &f, &g);
        assert_eq!(h.int_coeffs(&t), vec![vec![4], vec![4], vec![4], vec![3]]);
        let (q, r) = divmod(&t, &h, &g).unwrap();
        assert_eq!(q, f);
        assert!(r.is_zero());
        // Remainder arithmetic agrees with evaluation at the root of x - 1.
        let (_, r) = divmod(&t, &f, &poly(&t, &[4, 1])).unwrap();
        let at = eval(&t, &f, &t.constant(1, 1));
        assert_eq!(r.coeff(&t, 0), at);
    }

    #[test]
    fn parse_and_print() {
        let t = f5();
        let f = Polynomial::parse(&t, "1,4,1,4,1,4,1").unwrap();
        assert_eq!(f.deg(), Some(6));
        assert_eq!(f.to_int_string(&t), "1,4,1,4,1,4,1");
        assert!(Polynomial::parse(&t, "1,7").is_err());
        assert!(Polynomial::parse(&t, "1,x").is_err());
    }

    #[test]
    fn substitution_and_flips() {
        let t = f5();
        let f = poly(&t, &[2, 3, 1]); // x^2 + 3x + 2 = (x+1)(x+2)
        let g = subst_xpow(&t, &f, 3);
        assert_eq!(g.deg(), Some(6));
        assert_eq!(
            eval(&t, &g, &t.constant(1, 2)),
            eval(&t, &f, &t.constant(1, 3)) // 2^3 = 8 = 3 mod 5
        );
        let h = sign_flip(&t, &f); // roots negated: (x-1)(x-2) = x^2 - 3x + 2
        assert_eq!(h, poly(&t, &[2, 2, 1]));
        // scale_roots by 2: roots -2, -4: (x+2)(x+4) = x^2 + 6x + 8
        let sr = scale_roots(&t, &f, &t.constant(1, 2));
        assert_eq!(sr, poly(&t, &[3, 1, 1]));
        // translate: f(x+1) has roots -2, -3.
        let tr = translate(&t, &f, &t.constant(1, 1));
        assert_eq!(tr, poly(&t, &[1, 0, 1]));
    }

    #[test]
    fn irreducibility_small_cases() {
        let t = f5();
        // x^2 + 2 is irreducible over F_5 (−2 = 3 is a non-square mod 5).
        assert!(is_irreducible(&t, &poly(&t, &[2, 0, 1])).unwrap());
        // x^2 + 1 = (x+2)(x+3) over F_5.
        assert!(!is_irreducible(&t, &poly(&t, &[1, 0, 1])).unwrap());
        // The 7th cyclotomic polynomial is irreducible over F_5 (ord_7(5) = 6).
        assert!(is_irreducible(&t, &poly(&t, &[1, 1, 1, 1, 1, 1, 1])).unwrap());
        // Constants and the zero polynomial are not irreducible.
        assert!(!is_irreducible(&t, &poly(&t, &[3])).unwrap());
        assert!(!is_irreducible(&t, &Polynomial::zero(1)).unwrap());
        // Squares are caught.
        let sq = mul(&t, &poly(&t, &[2, 0, 1]), &poly(&t, &[2, 0, 1]));
        assert!(!is_irreducible(&t, &sq).unwrap());
    }

    #[test]
    fn orders_of_polynomials() {
        let t = f5();
        // x - 1 has order 1; x + 1 has order 2.
        assert_eq!(poly_order(&t, &poly(&t, &[4, 1])).unwrap(), 1);
        assert_eq!(poly_order(&t, &poly(&t, &[1, 1])).unwrap(), 2);
        // The 7th cyclotomic polynomial has order 7.
        assert_eq!(
            poly_order(&t, &poly(&t, &[1, 1, 1, 1, 1, 1, 1])).unwrap(),
            7
        );
        // Zero constant term is rejected.
        assert_eq!(
            poly_order(&t, &poly(&t, &[0, 1])).unwrap_err(),
            Error::ZeroConstantTerm
        );
    }

    #[test]
    fn minimal_polynomials() {
        let t = f5();
        // A primitive 7th root of unity over F_5 has Phi_7 as minimal polynomial.
        let xi = t.root_of_unity(7, 6).unwrap();
        let mp = minimal_polynomial(&t, &xi).unwrap();
        assert_eq!(mp, poly(&t, &[1, 1, 1, 1, 1, 1, 1]));
        // Constants have linear minimal polynomials.
        let c = t.constant(6, 3);
        assert_eq!(minimal_polynomial(&t, &c).unwrap(), poly(&t, &[2, 1]));
    }

    #[test]
    fn factorization_roundtrip() {
        let t = f5();
        // x^2(x+1)^3(x^2+2): mixed multiplicities and an irreducible quadratic.
        let f = mul(
            &t,
            &mul(
                &t,
                &poly(&t, &[0, 0, 1]),
                &mul(&t, &poly(&t, &[1, 1]), &mul(&t, &poly(&t, &[1, 1]), &poly(&t, &[1, 1]))),
            ),
            &poly(&t, &[2, 0, 1]),
        );
        let fs = factor(&t, &f).unwrap();
        let mut prod = Polynomial::one(&t, 1);
        for (g, e) in &fs {
            assert!(is_irreducible(&t, g).unwrap() || g.deg() == Some(1));
            for _ in 0..*e {
                prod = mul(&t, &prod, g);
            }
        }
        assert_eq!(prod, f);
        assert_eq!(fs.len(), 3);
        // 5th powers exercise the p-th root path: (x+2)^5 = x^5 + 2^5.
        let f = poly(&t, &[2, 0, 0, 0, 0, 1]);
        let fs = factor(&t, &f).unwrap();
        assert_eq!(fs, vec![(poly(&t, &[2, 1]), 5)]);
    }

    #[test]
    fn splitting_degrees() {
        let t = f5();
        assert_eq!(splitting_degree(&t, &poly(&t, &[1, 1, 1, 1, 1, 1, 1])).unwrap(), 6);
        // (x+1)(x^2+2): lcm(1, 2) = 2.
        let f = mul(&t, &poly(&t, &[1, 1]), &poly(&t, &[2, 0, 1]));
        assert_eq!(splitting_degree(&t, &f).unwrap(), 2);
    }

    #[test]
    fn roots_in_extensions() {
        let t = f5();
        // x^2 + 2 has no roots at level 1, two at level 2.
        let f = poly(&t, &[2, 0, 1]);
        assert!(distinct_roots_in_level(&t, &f, 1).unwrap().is_empty());
        let roots = distinct_roots_in_level(&t, &f, 2).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(t.el_is_zero(&eval(&t, &lift(&t, &f, 2).unwrap(), r)));
        }
        // Multiplicities: (x-1)^2 (x-2).
        let g = mul(&t, &mul(&t, &poly(&t, &[4, 1]), &poly(&t, &[4, 1])), &poly(&t, &[3, 1]));
        let rm = roots_with_multiplicity(&t, &g, 1).unwrap();
        assert_eq!(rm.len(), 2);
        let mult: Vec<u32> = rm.iter().map(|&(_, m)| m).collect();
        assert_eq!(mult.iter().sum::<u32>(), 3);
    }

    #[test]
    fn unity_orbits_f5_n7() {
        let t = f5();
        let orbits = orbit_factorize_unity(&t, 7).unwrap();
        assert_eq!(orbits.level, 6);
        assert_eq!(orbits.factors.len(), 1);
        let f = &orbits.factors[0];
        assert_eq!(f.rep, 1);
        assert_eq!(f.exponents, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(f.minpoly, poly(&t, &[1, 1, 1, 1, 1, 1, 1]));
        // Phi_7 has all coefficients 1, so its elementary symmetric functions
        // alternate: S_i = (-1)^i, i.e. 1, 4, 1, 4, ... over F_5.
        for (i, s) in f.sym.iter().enumerate() {
            assert_eq!(s, &vec![if i % 2 == 0 { 1 } else { 4 }]);
        }
    }

    #[test]
    fn unity_orbits_f2_n7() {
        let t = FieldTower::new(2, 1, 0).unwrap();
        // ord_7(2) = 3: two cubic factors x^3+x+1 and x^3+x^2+1.
        let orbits = orbit_factorize_unity(&t, 7).unwrap();
        assert_eq!(orbits.level, 3);
        assert_eq!(orbits.factors.len(), 2);
        let polys: Vec<Vec<Vec<u128>>> = orbits
            .factors
            .iter()
            .map(|f| f.minpoly.int_coeffs(&t))
            .collect();
        let cubic1 = vec![vec![1], vec![1], vec![0], vec![1]];
        let cubic2 = vec![vec![1], vec![0], vec![1], vec![1]];
        assert!(polys.contains(&cubic1) && polys.contains(&cubic2));
        let prod = product(
            &t,
            &orbits.factors.iter().map(|f| f.minpoly.clone()).collect::<Vec<_>>(),
            1,
        );
        // Their product is the 7th cyclotomic polynomial.
        assert_eq!(prod, poly(&t, &[1, 1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn unity_orbit_edge_cases() {
        let t = f5();
        let o1 = orbit_factorize_unity(&t, 1).unwrap();
        assert_eq!(o1.factors[0].minpoly, poly(&t, &[4, 1])); // x - 1
        let o2 = orbit_factorize_unity(&t, 2).unwrap();
        assert_eq!(o2.factors[0].minpoly, poly(&t, &[1, 1])); // x + 1
        assert!(orbit_factorize_unity(&t, 10).is_err()); // 5 | 10
    }
}

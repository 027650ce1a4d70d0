//! Finite field towers F_p <= F_q <= F_{q^d}.
//!
//! The base field F_q = F_{p^s} is fixed when the tower is created; extensions
//! F_{q^d} are built lazily as single steps over F_q, each with its own
//! deterministically-chosen irreducible modulus.  An element of F_{q^d} is a
//! vector of d coordinates in F_q, and each F_q coordinate is a vector of s
//! base-p digits.  Internally the digits are stored flat (d*s little-endian
//! u64 words) so that arithmetic at high levels stays allocation-light.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factor_u128, gcd_u64, is_prime_u64};
use crate::error::{Error, Result};

/// An F_q element as little-endian base-p digits (length = s).
pub type Digits = Vec<u64>;

/// An element of F_{q^level}.  `level == 1` is the base field F_q itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    level: usize,
    coords: Vec<u64>, // flat: level blocks of s digits each
}

impl FieldElement {
    pub fn level(&self) -> usize {
        self.level
    }

    /// Coordinates over F_q, as digit vectors.
    pub fn coords(&self, s: usize) -> Vec<Digits> {
        self.coords.chunks(s).map(|c| c.to_vec()).collect()
    }

    /// Integer representatives of the coordinates (digit vectors read in
    /// base p); the canonical order on elements compares these
    /// lexicographically.
    pub fn coord_values(&self, p: u64, s: usize) -> Vec<u128> {
        self.coords
            .chunks(s)
            .map(|c| c.iter().rev().fold(0u128, |acc, &d| acc * p as u128 + d as u128))
            .collect()
    }

    /// Lexicographic order on the coordinate integer representatives.
    pub fn canon_cmp(&self, other: &FieldElement, p: u64, s: usize) -> Ordering {
        self.coord_values(p, s).cmp(&other.coord_values(p, s))
    }
}

#[derive(Debug)]
struct LevelData {
    /// Monic irreducible modulus of degree d over F_q, stored as (d+1)
    /// flat coefficient blocks (ascending degree).
    modulus: Vec<u64>,
    /// z^{q*i} mod modulus for i in 0..d, where z is the residue of x.
    /// Lets the Frobenius map x -> x^q run in d coordinate multiplications.
    frob_pows: Vec<Vec<u64>>,
}

#[derive(Debug)]
pub struct FieldTower {
    p: u64,
    s: usize,
    q: u128,
    seed: u64,
    /// Monic irreducible degree-s modulus over F_p (empty when s == 1).
    base_modulus: Vec<u64>,
    levels: RefCell<BTreeMap<usize, LevelData>>,
}

/// Deterministic RNG derivation: the stream depends only on (seed, label,
/// params), never on platform hashing or call order.
pub fn rng_for(seed: u64, label: &str, params: &[u64]) -> ChaCha8Rng {
    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let mut state = seed;
    let mut acc = splitmix(&mut state);
    for b in label.bytes() {
        state ^= b as u64;
        acc ^= splitmix(&mut state);
    }
    for &x in params {
        state ^= x;
        acc ^= splitmix(&mut state);
    }
    ChaCha8Rng::seed_from_u64(acc)
}

impl FieldTower {
    /// Build the tower over F_{p^s}.  The seed fixes every later random
    /// choice (moduli, generators, splitting candidates).
    pub fn new(p: u64, s: usize, seed: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(s >= 1, "extension degree s must be positive");
        let q = crate::arith::checked_pow_u128(p as u128, s as u32)
            .ok_or(Error::SizeRefusal(s))?;
        let base_modulus = if s == 1 {
            Vec::new()
        } else {
            search_base_modulus(p, s, seed)
        };
        Ok(FieldTower {
            p,
            s,
            q,
            seed,
            base_modulus,
            levels: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn q(&self) -> u128 {
        self.q
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// q^level as a big integer.
    pub fn level_size(&self, level: usize) -> BigUint {
        BigUint::from(self.q).pow(level as u32)
    }

    pub fn base_modulus_digits(&self) -> Vec<u64> {
        self.base_modulus.clone()
    }

    /// Moduli of all extensions built so far, as coefficient lists over F_q.
    pub fn extension_moduli(&self) -> BTreeMap<usize, Vec<Digits>> {
        self.levels
            .borrow()
            .iter()
            .map(|(&d, ld)| (d, ld.modulus.chunks(self.s).map(|c| c.to_vec()).collect()))
            .collect()
    }

    // ---- F_q digit arithmetic ------------------------------------------

    pub fn fq_zero(&self) -> Digits {
        vec![0; self.s]
    }

    pub fn fq_one(&self) -> Digits {
        let mut d = vec![0; self.s];
        d[0] = 1;
        d
    }

    /// Interpret `c` as a base-p encoding of an F_q element (for c < p this
    /// is the natural embedding of F_p).
    pub fn fq_from_u128(&self, mut c: u128) -> Digits {
        let mut d = vec![0u64; self.s];
        for slot in d.iter_mut() {
            *slot = (c % self.p as u128) as u64;
            c /= self.p as u128;
        }
        assert!(c == 0, "integer representative out of range for F_q");
        d
    }

    pub fn fq_value(&self, a: &[u64]) -> u128 {
        a.iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.p as u128 + d as u128)
    }

    pub fn fq_is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&d| d == 0)
    }

    fn fq_add_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x += y;
            if *x >= self.p {
                *x -= self.p;
            }
        }
    }

    fn fq_sub_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + self.p - y) % self.p;
        }
    }

    fn fq_neg_assign(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            if *x != 0 {
                *x = self.p - *x;
            }
        }
    }

    pub fn fq_add(&self, a: &[u64], b: &[u64]) -> Digits {
        let mut out = a.to_vec();
        self.fq_add_assign(&mut out, b);
        out
    }

    pub fn fq_sub(&self, a: &[u64], b: &[u64]) -> Digits {
        let mut out = a.to_vec();
        self.fq_sub_assign(&mut out, b);
        out
    }

    pub fn fq_neg(&self, a: &[u64]) -> Digits {
        let mut out = a.to_vec();
        self.fq_neg_assign(&mut out);
        out
    }

    /// out = a * b in F_q.  `out` must have length s.
    fn fq_mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let p = self.p as u128;
        if self.s == 1 {
            out[0] = ((a[0] as u128 * b[0] as u128) % p) as u64;
            return;
        }
        // Schoolbook product, then reduce by the monic base modulus.
        let mut tmp = vec![0u128; 2 * self.s - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                tmp[i + j] = (tmp[i + j] + ai as u128 * bj as u128) % p;
            }
        }
        for k in (self.s..tmp.len()).rev() {
            let c = tmp[k];
            if c == 0 {
                continue;
            }
            tmp[k] = 0;
            for t in 0..self.s {
                let m = self.base_modulus[t] as u128;
                if m != 0 {
                    let sub = (c * m) % p;
                    tmp[k - self.s + t] = (tmp[k - self.s + t] + p - sub) % p;
                }
            }
        }
        for (o, &t) in out.iter_mut().zip(tmp.iter()) {
            *o = t as u64;
        }
    }

    pub fn fq_mul(&self, a: &[u64], b: &[u64]) -> Digits {
        let mut out = vec![0; self.s];
        self.fq_mul_into(a, b, &mut out);
        out
    }

    /// out += a * b in F_q.
    fn fq_mul_add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        if self.s == 1 {
            let p = self.p as u128;
            out[0] = ((out[0] as u128 + a[0] as u128 * b[0] as u128 % p) % p) as u64;
            return;
        }
        let mut t = vec![0; self.s];
        self.fq_mul_into(a, b, &mut t);
        self.fq_add_assign(out, &t);
    }

    pub fn fq_pow(&self, a: &[u64], mut e: u128) -> Digits {
        let mut acc = self.fq_one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fq_mul(&acc, &base);
            }
            base = self.fq_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn fq_inv(&self, a: &[u64]) -> Result<Digits> {
        if self.fq_is_zero(a) {
            return Err(Error::ZeroElement);
        }
        Ok(self.fq_pow(a, self.q - 2))
    }

    // ---- extensions ------------------------------------------------------

    /// Make sure F_{q^level} exists (finds a modulus on first use).
    pub fn ensure_level(&self, level: usize) -> Result<()> {
        assert!(level >= 1);
        if level == 1 || self.levels.borrow().contains_key(&level) {
            return Ok(());
        }
        let modulus = self.search_extension_modulus(level)?;
        self.levels.borrow_mut().insert(
            level,
            LevelData {
                modulus,
                frob_pows: Vec::new(),
            },
        );
        // Frobenius powers z^{q*i}: computed with ordinary element ops now
        // that the modulus is installed.
        let z = self.gen(level)?;
        let zq = self.el_pow(&z, self.q);
        let mut pows = Vec::with_capacity(level);
        let mut cur = self.one(level);
        for _ in 0..level {
            pows.push(cur.coords.clone());
            cur = self.el_mul(&cur, &zq);
        }
        self.levels
            .borrow_mut()
            .get_mut(&level)
            .expect("level just inserted")
            .frob_pows = pows;
        Ok(())
    }

    /// Deterministic search for a monic irreducible of degree `level` over
    /// F_q, driven by the tower seed.
    fn search_extension_modulus(&self, level: usize) -> Result<Vec<u64>> {
        let mut rng = rng_for(self.seed, "extension-modulus", &[level as u64]);
        loop {
            let mut coeffs: Vec<Digits> = Vec::with_capacity(level + 1);
            for i in 0..level {
                let mut c = self.fq_zero();
                for d in c.iter_mut() {
                    *d = rng.gen_range(0..self.p);
                }
                if i == 0 && self.fq_is_zero(&c) {
                    c[0] = 1; // nonzero constant term; x never divides an irreducible of degree > 1
                }
                coeffs.push(c);
            }
            coeffs.push(self.fq_one());
            let f = crate::poly::Polynomial::from_fq_coeffs(self, coeffs.clone());
            if crate::poly::is_irreducible(self, &f)? {
                return Ok(coeffs.into_iter().flatten().collect());
            }
        }
    }

    /// The modulus of F_{q^level} over F_q, as ascending F_q coefficients.
    pub fn modulus_coeffs(&self, level: usize) -> Result<Vec<Digits>> {
        self.ensure_level(level)?;
        Ok(self.levels.borrow()[&level]
            .modulus
            .chunks(self.s)
            .map(|c| c.to_vec())
            .collect())
    }

    // ---- element construction -------------------------------------------

    pub fn zero(&self, level: usize) -> FieldElement {
        FieldElement {
            level,
            coords: vec![0; level * self.s],
        }
    }

    pub fn one(&self, level: usize) -> FieldElement {
        let mut e = self.zero(level);
        e.coords[0] = 1;
        e
    }

    /// The residue class of x, a generator of F_{q^level} over F_q.
    pub fn gen(&self, level: usize) -> Result<FieldElement> {
        assert!(level >= 2, "x is not a generator of the base field");
        self.ensure_level(level)?;
        let mut e = self.zero(level);
        e.coords[self.s] = 1;
        Ok(e)
    }

    /// Constant embedding of an F_q element at the given level.
    pub fn from_fq(&self, level: usize, digits: &[u64]) -> FieldElement {
        assert_eq!(digits.len(), self.s);
        let mut e = self.zero(level);
        e.coords[..self.s].copy_from_slice(digits);
        e
    }

    pub fn from_coords(&self, level: usize, coords: Vec<Digits>) -> FieldElement {
        assert_eq!(coords.len(), level);
        for c in &coords {
            assert_eq!(c.len(), self.s);
        }
        FieldElement {
            level,
            coords: coords.into_iter().flatten().collect(),
        }
    }

    /// Small-integer constant at a level (base-p encoding, see fq_from_u128).
    pub fn constant(&self, level: usize, c: u128) -> FieldElement {
        self.from_fq(level, &self.fq_from_u128(c))
    }

    // ---- element arithmetic ----------------------------------------------

    fn check_levels(&self, a: &FieldElement, b: &FieldElement) {
        assert_eq!(
            a.level, b.level,
            "elements live at different extension levels"
        );
    }

    pub fn el_is_zero(&self, a: &FieldElement) -> bool {
        a.coords.iter().all(|&d| d == 0)
    }

    pub fn el_is_one(&self, a: &FieldElement) -> bool {
        a.coords[0] == 1 && a.coords[1..].iter().all(|&d| d == 0)
    }

    pub fn el_add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_levels(a, b);
        let mut out = a.clone();
        for (chunk, bc) in out
            .coords
            .chunks_mut(self.s)
            .zip(b.coords.chunks(self.s))
        {
            self.fq_add_assign(chunk, bc);
        }
        out
    }

    pub fn el_sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_levels(a, b);
        let mut out = a.clone();
        for (chunk, bc) in out
            .coords
            .chunks_mut(self.s)
            .zip(b.coords.chunks(self.s))
        {
            self.fq_sub_assign(chunk, bc);
        }
        out
    }

    pub fn el_neg(&self, a: &FieldElement) -> FieldElement {
        let mut out = a.clone();
        for chunk in out.coords.chunks_mut(self.s) {
            self.fq_neg_assign(chunk);
        }
        out
    }

    /// Multiply by an F_q scalar.
    pub fn el_scale(&self, a: &FieldElement, c: &[u64]) -> FieldElement {
        let mut out = self.zero(a.level);
        for (oc, ac) in out
            .coords
            .chunks_mut(self.s)
            .zip(a.coords.chunks(self.s))
        {
            self.fq_mul_into(ac, c, oc);
        }
        out
    }

    pub fn el_mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_levels(a, b);
        let d = a.level;
        if d == 1 {
            let mut out = self.zero(1);
            self.fq_mul_into(&a.coords, &b.coords, &mut out.coords);
            return out;
        }
        self.ensure_level(d).expect("extension modulus search failed");
        let s = self.s;
        // Full product in z, then reduce by the monic level modulus.
        let mut acc = vec![0u64; (2 * d - 1) * s];
        for i in 0..d {
            let ac = &a.coords[i * s..(i + 1) * s];
            if self.fq_is_zero(ac) {
                continue;
            }
            for j in 0..d {
                let bc = &b.coords[j * s..(j + 1) * s];
                if self.fq_is_zero(bc) {
                    continue;
                }
                self.fq_mul_add(ac, bc, &mut acc[(i + j) * s..(i + j + 1) * s]);
            }
        }
        let levels = self.levels.borrow();
        let ld = levels.get(&d).expect("extension level not built");
        for k in (d..2 * d - 1).rev() {
            let c = acc[k * s..(k + 1) * s].to_vec();
            if self.fq_is_zero(&c) {
                continue;
            }
            for t in 0..d {
                let m = &ld.modulus[t * s..(t + 1) * s];
                if self.fq_is_zero(m) {
                    continue;
                }
                let prod = self.fq_mul(&c, m);
                let dst = &mut acc[(k - d + t) * s..(k - d + t + 1) * s];
                self.fq_sub_assign(dst, &prod);
            }
        }
        acc.truncate(d * s);
        FieldElement {
            level: d,
            coords: acc,
        }
    }

    pub fn el_pow(&self, a: &FieldElement, e: u128) -> FieldElement {
        if e == 0 {
            return self.one(a.level);
        }
        let bits = 128 - e.leading_zeros();
        let mut acc = a.clone();
        for i in (0..bits - 1).rev() {
            acc = self.el_mul(&acc, &acc);
            if (e >> i) & 1 == 1 {
                acc = self.el_mul(&acc, a);
            }
        }
        acc
    }

    pub fn el_pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let bits = e.bits();
        if bits == 0 {
            return self.one(a.level);
        }
        let mut acc = a.clone();
        for i in (0..bits - 1).rev() {
            acc = self.el_mul(&acc, &acc);
            if e.bit(i) {
                acc = self.el_mul(&acc, a);
            }
        }
        acc
    }

    pub fn el_inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.el_is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let e = self.level_size(a.level) - 2u8;
        Ok(self.el_pow_big(a, &e))
    }

    /// Frobenius x -> x^q via the precomputed power table (identity on F_q).
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        let d = a.level;
        if d == 1 {
            return a.clone();
        }
        self.ensure_level(d).expect("extension modulus search failed");
        let levels = self.levels.borrow();
        let ld = levels.get(&d).expect("extension level not built");
        let s = self.s;
        let mut out = self.zero(d);
        for i in 0..d {
            let c = &a.coords[i * s..(i + 1) * s];
            if self.fq_is_zero(c) {
                continue;
            }
            for t in 0..d {
                let pw = &ld.frob_pows[i][t * s..(t + 1) * s];
                if self.fq_is_zero(pw) {
                    continue;
                }
                let mut prod = vec![0; s];
                self.fq_mul_into(c, pw, &mut prod);
                let dst = &mut out.coords[t * s..(t + 1) * s];
                self.fq_add_assign(dst, &prod);
            }
        }
        out
    }

    /// Check that an element actually lies in F_q and return it there.
    pub fn descend_el(&self, a: &FieldElement) -> Result<Digits> {
        if a.coords[self.s..].iter().any(|&d| d != 0) {
            return Err(Error::DescentFailure);
        }
        Ok(a.coords[..self.s].to_vec())
    }

    // ---- higher-level operations ------------------------------------------

    /// Multiplicative order.  Requires factoring q^level - 1, so refuses
    /// levels where that exceeds 128 bits.
    pub fn element_order(&self, a: &FieldElement) -> Result<u128> {
        if self.el_is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let n_big = self.level_size(a.level) - 1u8;
        let n = u128::try_from(&n_big).map_err(|_| Error::SizeRefusal(a.level))?;
        let mut ord = n;
        for (pr, _) in factor_u128(n) {
            while ord % pr == 0 && self.el_is_one(&self.el_pow(a, ord / pr)) {
                ord /= pr;
            }
        }
        Ok(ord)
    }

    /// Deterministic primitive n-th root of unity in F_{q^level}.
    /// Needs n | q^level - 1; only n itself is ever factored.
    pub fn root_of_unity(&self, n: u64, level: usize) -> Result<FieldElement> {
        if gcd_u64(n, self.p) != 1 {
            return Err(Error::CharacteristicDivides(n));
        }
        self.ensure_level(level)?;
        let group = self.level_size(level) - 1u8;
        if (&group % n) != BigUint::from(0u8) {
            return Err(Error::NoSuchRoot(n, level));
        }
        if n == 1 {
            return Ok(self.one(level));
        }
        let exp = &group / n;
        let primes: Vec<u64> = crate::arith::factor_u64(n).into_iter().map(|(p, _)| p).collect();
        let mut rng = rng_for(self.seed, "root-of-unity", &[n, level as u64]);
        loop {
            let mut cand = self.zero(level);
            for d in cand.coords.iter_mut() {
                *d = rng.gen_range(0..self.p);
            }
            if self.el_is_zero(&cand) {
                continue;
            }
            let root = self.el_pow_big(&cand, &exp);
            if primes
                .iter()
                .all(|&pr| !self.el_is_one(&self.el_pow(&root, (n / pr) as u128)))
            {
                return Ok(root);
            }
        }
    }

    /// Square root by Tonelli-Shanks (or the Frobenius inverse in
    /// characteristic 2).  Returns the canonical root: the lexicographically
    /// smaller of the two coordinate vectors.
    pub fn sqrt(&self, a: &FieldElement) -> Result<FieldElement> {
        let level = a.level;
        if self.el_is_zero(a) {
            return Ok(a.clone());
        }
        let q_big = self.level_size(level);
        if self.p == 2 {
            // Squaring is bijective; the inverse is x -> x^(Q/2).
            return Ok(self.el_pow_big(a, &(&q_big >> 1)));
        }
        let group = &q_big - 1u8;
        let legendre = self.el_pow_big(a, &(&group >> 1));
        if !self.el_is_one(&legendre) {
            return Err(Error::NonResidue);
        }
        let e = group.trailing_zeros().expect("group order is nonzero") as u32;
        let t = &group >> e; // odd part
        // Deterministic quadratic non-residue.
        let mut rng = rng_for(self.seed, "non-residue", &[level as u64]);
        let nqr = loop {
            let mut cand = self.zero(level);
            for d in cand.coords.iter_mut() {
                *d = rng.gen_range(0..self.p);
            }
            if self.el_is_zero(&cand) {
                continue;
            }
            let sym = self.el_pow_big(&cand, &(&group >> 1));
            if !self.el_is_one(&sym) {
                break cand;
            }
        };
        let mut c = self.el_pow_big(&nqr, &t);
        let mut x = self.el_pow_big(a, &((&t + 1u8) >> 1));
        let mut b = self.el_pow_big(a, &t);
        let mut m = e;
        while !self.el_is_one(&b) {
            // Least i with b^{2^i} = 1.
            let mut i = 0u32;
            let mut probe = b.clone();
            while !self.el_is_one(&probe) {
                probe = self.el_mul(&probe, &probe);
                i += 1;
            }
            let mut g = c.clone();
            for _ in 0..(m - i - 1) {
                g = self.el_mul(&g, &g);
            }
            x = self.el_mul(&x, &g);
            let g2 = self.el_mul(&g, &g);
            b = self.el_mul(&b, &g2);
            c = g2;
            m = i;
        }
        let neg = self.el_neg(&x);
        Ok(if x.canon_cmp(&neg, self.p, self.s) == Ordering::Greater {
            neg
        } else {
            x
        })
    }
}

/// Search for a monic irreducible of degree s over F_p for the base field,
/// with a self-contained Rabin test on F_p polynomials (the tower's own
/// polynomial machinery needs this modulus to exist first).
fn search_base_modulus(p: u64, s: usize, seed: u64) -> Vec<u64> {
    let mut rng = rng_for(seed, "base-modulus", &[s as u64]);
    loop {
        let mut f: Vec<u64> = (0..s).map(|_| rng.gen_range(0..p)).collect();
        if f[0] == 0 {
            f[0] = 1;
        }
        f.push(1);
        if pp_is_irreducible(p, &f) {
            f.pop();
            return f; // store only the s lower coefficients; leading 1 implied
        }
    }
}

// -- minimal F_p[x] arithmetic for the base modulus search ------------------

fn pp_trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn pp_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + ai as u128 * bj as u128) % p as u128) as u64;
        }
    }
    pp_rem(p, prod, m)
}

fn pp_rem(p: u64, mut f: Vec<u64>, m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let lead_inv = crate::arith::powmod_u64(m[dm], p - 2, p);
    while f.len() > dm {
        let k = f.len() - 1;
        let c = crate::arith::mulmod_u64(f[k], lead_inv, p);
        if c != 0 {
            for t in 0..=dm {
                let sub = crate::arith::mulmod_u64(c, m[t], p);
                f[k - dm + t] = (f[k - dm + t] + p - sub) % p;
            }
        }
        f.pop();
        pp_trim(&mut f);
        if f.is_empty() {
            break;
        }
    }
    f
}

fn pp_gcd(p: u64, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    pp_trim(&mut a);
    pp_trim(&mut b);
    while !b.is_empty() {
        let r = pp_rem(p, a, &b);
        a = b;
        b = r;
    }
    a
}

fn pp_powmod_x(p: u64, e_steps: usize, m: &[u64]) -> Vec<u64> {
    // x^(p^e_steps) mod m by repeated p-th powering.
    let mut cur = vec![0, 1]; // x
    for _ in 0..e_steps {
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = pp_mulmod(p, &acc, &base, m);
            }
            base = pp_mulmod(p, &base, &base, m);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn pp_is_irreducible(p: u64, f: &[u64]) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // Rabin: x^(p^n) = x mod f, and gcd(x^(p^(n/l)) - x, f) = 1 for primes l | n.
    let xpn = pp_powmod_x(p, n, f);
    let mut diff = xpn;
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    pp_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    for (l, _) in crate::arith::factor_u64(n as u64) {
        let mut d = pp_powmod_x(p, n / l as usize, f);
        if d.len() < 2 {
            d.resize(2, 0);
        }
        d[1] = (d[1] + p - 1) % p;
        let g = pp_gcd(p, f.to_vec(), d);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let t = FieldTower::new(7, 1, 1).unwrap();
        let a = t.constant(1, 3);
        let b = t.constant(1, 5);
        assert_eq!(t.el_add(&a, &b), t.constant(1, 1));
        assert_eq!(t.el_mul(&a, &b), t.constant(1, 1));
        assert_eq!(t.el_pow(&a, 6), t.one(1));
        let inv = t.el_inv(&a).unwrap();
        assert!(t.el_is_one(&t.el_mul(&a, &inv)));
        assert!(t.el_inv(&t.zero(1)).is_err());
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FieldTower::new(6, 1, 0).unwrap_err(), Error::NotPrime(6));
    }

    #[test]
    fn fq_basics_f9() {
        let t = FieldTower::new(3, 2, 7).unwrap();
        assert_eq!(t.q(), 9);
        // Every nonzero element has order dividing 8, and some element has
        // order exactly 8.
        let mut found_generator = false;
        for v in 1..9u128 {
            let a = t.constant(1, v);
            let ord = t.element_order(&a).unwrap();
            assert_eq!(8 % ord, 0);
            assert!(t.el_is_one(&t.el_pow(&a, ord)));
            found_generator |= ord == 8;
        }
        assert!(found_generator);
    }

    #[test]
    fn extension_arithmetic_f25_over_f5() {
        let t = FieldTower::new(5, 1, 3).unwrap();
        let z = t.gen(2).unwrap();
        // z satisfies the modulus; Fermat: z^(25) = z.
        assert_eq!(t.el_pow(&z, 25), z);
        // Frobenius is the 5th power map and squares to the identity.
        let f = t.frobenius(&z);
        assert_eq!(f, t.el_pow(&z, 5));
        assert_eq!(t.frobenius(&f), z);
        // Inverse round-trips.
        let inv = t.el_inv(&z).unwrap();
        assert!(t.el_is_one(&t.el_mul(&z, &inv)));
    }

    #[test]
    fn multiplication_is_commutative_and_distributes() {
        let t = FieldTower::new(3, 2, 5).unwrap();
        t.ensure_level(3).unwrap();
        let mut rng = rng_for(99, "test-elems", &[]);
        for _ in 0..25 {
            let rand_el = |rng: &mut rand_chacha::ChaCha8Rng| {
                let coords: Vec<Digits> = (0..3)
                    .map(|_| (0..2).map(|_| rng.gen_range(0..3)).collect())
                    .collect();
                t.from_coords(3, coords)
            };
            let a = rand_el(&mut rng);
            let b = rand_el(&mut rng);
            let c = rand_el(&mut rng);
            assert_eq!(t.el_mul(&a, &b), t.el_mul(&b, &a));
            let lhs = t.el_mul(&a, &t.el_add(&b, &c));
            let rhs = t.el_add(&t.el_mul(&a, &b), &t.el_mul(&a, &c));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_fq() {
        let t = FieldTower::new(5, 1, 11).unwrap();
        t.ensure_level(4).unwrap();
        for v in 0..5u128 {
            let c = t.constant(4, v);
            assert_eq!(t.frobenius(&c), c);
        }
        let z = t.gen(4).unwrap();
        assert_ne!(t.frobenius(&z), z);
        // Frobenius has order 4 on F_{5^4}.
        let mut w = z.clone();
        for _ in 0..4 {
            w = t.frobenius(&w);
        }
        assert_eq!(w, z);
    }

    #[test]
    fn roots_of_unity() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        // ord_7(5) = 6, so a primitive 7th root lives at level 6.
        let xi = t.root_of_unity(7, 6).unwrap();
        assert!(t.el_is_one(&t.el_pow(&xi, 7)));
        assert!(!t.el_is_one(&xi));
        // Deterministic: same tower parameters give the same root.
        let t2 = FieldTower::new(5, 1, 2).unwrap();
        let xi2 = t2.root_of_unity(7, 6).unwrap();
        assert_eq!(xi.coords(1), xi2.coords(1));
        // No 7th root at level 1 over F_5, and never one of order p.
        assert!(t.root_of_unity(7, 1).is_err());
        assert!(matches!(
            t.root_of_unity(5, 6),
            Err(Error::CharacteristicDivides(5))
        ));
    }

    #[test]
    fn sqrt_tonelli_shanks() {
        let t = FieldTower::new(19, 1, 4).unwrap();
        for v in 1..19u128 {
            let a = t.constant(1, v);
            let sq = t.el_mul(&a, &a);
            let r = t.sqrt(&sq).unwrap();
            assert_eq!(t.el_mul(&r, &r), sq);
        }
        // Exactly (19-1)/2 = 9 nonzero squares; a non-residue must error.
        let non_squares = (1..19u128)
            .filter(|&v| t.sqrt(&t.constant(1, v)).is_err())
            .count();
        assert_eq!(non_squares, 9);
        // At level 2 every F_19 element becomes a square.
        for v in 1..19u128 {
            let a = t.constant(2, v);
            let r = t.sqrt(&a).unwrap();
            assert_eq!(t.el_mul(&r, &r), a);
        }
    }

    #[test]
    fn sqrt_char2() {
        let t = FieldTower::new(2, 3, 6).unwrap();
        for v in 0..8u128 {
            let a = t.constant(1, v);
            let r = t.sqrt(&a).unwrap();
            assert_eq!(t.el_mul(&r, &r), a);
        }
    }

    #[test]
    fn element_order_refuses_oversized_groups() {
        let t = FieldTower::new(23, 1, 0).unwrap();
        t.ensure_level(32).unwrap();
        let z = t.gen(32).unwrap();
        assert_eq!(t.element_order(&z).unwrap_err(), Error::SizeRefusal(32));
        // But roots of unity still work there: only n is factored.
        let xi = t.root_of_unity(4352, 32).unwrap(); // 2^8 * 17
        assert!(t.el_is_one(&t.el_pow(&xi, 4352)));
        assert!(!t.el_is_one(&t.el_pow(&xi, 2176)));
    }

    #[test]
    fn descend_and_embed() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        let c = t.constant(3, 4);
        assert_eq!(t.descend_el(&c).unwrap(), vec![4]);
        let z = t.gen(3).unwrap();
        assert_eq!(t.descend_el(&z).unwrap_err(), Error::DescentFailure);
    }
}

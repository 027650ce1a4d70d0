//! Plain integer number theory: primality, factorization, Euler phi, Mobius,
//! multiplicative orders.  Everything here is exact; 128-bit intermediates are
//! widened through `BigUint` where u128 would overflow.

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// 2-adic valuation of `n` (n must be nonzero).
pub fn v2(n: u128) -> u32 {
    assert!(n != 0, "v2(0) is undefined");
    n.trailing_zeros()
}

pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the 12 smallest prime bases cover the
/// full 64-bit range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    // Miller-Rabin through BigUint with a generous fixed base set.
    let nb = BigUint::from(n);
    let one = BigUint::from(1u8);
    let nm1 = &nb - &one;
    let s = (n - 1).trailing_zeros();
    let d = &nm1 >> s;
    'witness: for a in [
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ] {
        let ab = BigUint::from(a);
        let mut x = ab.modpow(&d, &nb);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % &nb;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho (Brent variant, batched gcds) with native u64 arithmetic.
fn rho_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut cycle_len = 1u64;
        let mut d = 1u64;
        'outer: while d == 1 {
            let x = y;
            for _ in 0..cycle_len {
                y = f(y);
            }
            let mut k = 0u64;
            while k < cycle_len && d == 1 {
                let ys = y;
                let mut prod = 1u64;
                let batch = 128.min(cycle_len - k);
                for _ in 0..batch {
                    y = f(y);
                    prod = mulmod_u64(prod, x.abs_diff(y), n);
                }
                k += batch;
                d = gcd_u64(prod, n);
                if d == n {
                    y = ys;
                    d = 1;
                    for _ in 0..batch {
                        y = f(y);
                        d = gcd_u64(x.abs_diff(y), n);
                        if d != 1 {
                            break;
                        }
                    }
                    if d == 1 || d == n {
                        break 'outer;
                    }
                }
            }
            cycle_len *= 2;
        }
        if d != 1 && d != n {
            return d;
        }
        c += 1;
    }
}

/// Pollard's rho (Brent variant, batched gcds) on a composite `n` with no
/// factors below the trial bound.
fn rho_u128(n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return rho_u64(n as u64) as u128;
    }
    let nb = BigUint::from(n);
    let one = BigUint::from(1u8);
    let mut c = BigUint::from(1u8);
    loop {
        let f = |x: &BigUint| (x * x + &c) % &nb;
        let mut y = BigUint::from(2u8);
        let mut cycle_len = 1u64;
        let mut d = one.clone();
        'outer: while d == one {
            let x = y.clone();
            for _ in 0..cycle_len {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < cycle_len && d == one {
                let ys = y.clone();
                let mut prod = one.clone();
                let batch = 128.min(cycle_len - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x >= y { &x - &y } else { &y - &x };
                    prod = (&prod * &diff) % &nb;
                }
                k += batch;
                d = prod.gcd_big(&nb);
                if d == nb {
                    // Overshot: replay this batch one step at a time.
                    y = ys;
                    d = one.clone();
                    for _ in 0..batch {
                        y = f(&y);
                        let diff = if x >= y { &x - &y } else { &y - &x };
                        d = diff.gcd_big(&nb);
                        if d != one {
                            break;
                        }
                    }
                    if d == one || d == nb {
                        break 'outer;
                    }
                }
            }
            cycle_len *= 2;
        }
        if d != one && d != nb {
            return u128::try_from(&d).expect("factor of a u128 fits in u128");
        }
        c += 1u8;
    }
}

trait GcdBig {
    fn gcd_big(&self, other: &BigUint) -> BigUint;
}

impl GcdBig for BigUint {
    fn gcd_big(&self, other: &BigUint) -> BigUint {
        let mut a = self.clone();
        let mut b = other.clone();
        let zero = BigUint::from(0u8);
        while b != zero {
            let t = &a % &b;
            a = b;
            b = t;
        }
        a
    }
}

/// Full factorization of `n` as sorted (prime, exponent) pairs.
///
/// Trial division up to 10^6, then Pollard's rho for whatever survives.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    assert!(n != 0, "cannot factor 0");
    let mut out: Vec<(u128, u32)> = Vec::new();
    let push = |out: &mut Vec<(u128, u32)>, p: u128, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let e2 = n.trailing_zeros();
    push(&mut out, 2, e2);
    n >>= e2;
    let mut d = 3u128;
    while d <= 1_000_000 && d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(&mut out, d, e);
        d += 2;
    }
    // Split the remaining cofactor recursively.
    let mut stack = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime_u128(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => out.push((m, 1)),
            }
        } else {
            let f = rho_u128(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    out
}

pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor_u128(n as u128)
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect()
}

pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factor_u64(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Mobius function.
pub fn mobius(n: u64) -> i32 {
    let fs = factor_u64(n);
    if fs.iter().any(|&(_, e)| e > 1) {
        0
    } else if fs.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Multiplicative order of `q` modulo `n`; requires gcd(q, n) = 1.
pub fn ord_mod(q: u128, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Parse("order modulo 0 is undefined".into()));
    }
    if n == 1 {
        return Ok(1);
    }
    let qn = (q % n as u128) as u64;
    if gcd_u64(qn, n) != 1 {
        return Err(Error::CharacteristicDivides(n));
    }
    // ord divides phi(n); descend through its divisors.
    let phi = euler_phi(n);
    let mut ord = phi;
    for (p, _) in factor_u64(phi) {
        while ord % p == 0 && powmod_u64(qn, ord / p, n) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Is `q` a primitive root modulo `m`?
pub fn is_primitive_root(q: u128, m: u64) -> bool {
    if m <= 2 {
        // The unit group mod 1 and mod 2 is trivial; anything coprime works.
        return m == 1 || q % 2 == 1;
    }
    match ord_mod(q, m) {
        Ok(d) => d == euler_phi(m),
        Err(_) => false,
    }
}

/// q^e as u128, or None on overflow.
pub fn checked_pow_u128(q: u128, e: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

/// 2-adic valuation of q^i - 1 for odd q, via the lifting-the-exponent
/// identity: for odd i it equals v2(q-1); for even i it is
/// v2(q-1) + v2(q+1) + v2(i) - 1.
pub fn v2_of_pow_minus_one(q: u128, i: u64) -> u32 {
    assert!(q % 2 == 1 && q > 1 && i > 0);
    if i % 2 == 1 {
        v2(q - 1)
    } else {
        v2(q - 1) + v2(q + 1) + v2(i as u128) - 1
    }
}

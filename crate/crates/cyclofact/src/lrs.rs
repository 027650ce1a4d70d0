//! Linear recurring sequences over F_q: generation from a characteristic
//! polynomial, term-wise products, Berlekamp-Massey minimal polynomial and
//! linear complexity, and the divisibility check tying product sequences to
//! composed multiplication.

use crate::composed::{composed_product, ComposedKind};
use crate::error::{Error, Result};
use crate::field::{Digits, FieldTower};
use crate::poly::{self, Polynomial};

/// A homogeneous linear recurring sequence: a monic characteristic
/// polynomial of degree k over F_q together with k initial terms.
#[derive(Clone, Debug)]
pub struct LinearSequence {
    pub charpoly: Polynomial,
    pub init: Vec<Digits>,
}

impl LinearSequence {
    pub fn new(tower: &FieldTower, charpoly: Polynomial, init: Vec<Digits>) -> Result<Self> {
        if !charpoly.is_monic(tower) {
            return Err(Error::NotMonic);
        }
        let k = charpoly.deg().unwrap_or(0);
        if init.len() != k {
            return Err(Error::LengthMismatch {
                got: init.len(),
                want: k,
            });
        }
        Ok(LinearSequence { charpoly, init })
    }
}

/// First `count` terms of the sequence: s_{j+k} = -sum_i c_i s_{j+i} where
/// the c_i are the non-leading coefficients of the characteristic
/// polynomial.
pub fn generate(tower: &FieldTower, seq: &LinearSequence, count: usize) -> Vec<Digits> {
    let k = seq.charpoly.deg().unwrap_or(0);
    let coeffs: Vec<Digits> = (0..k)
        .map(|i| seq.charpoly.coeff(tower, i).coords(tower.s())[0].clone())
        .collect();
    let mut terms = seq.init.clone();
    terms.truncate(count);
    while terms.len() < count {
        let j = terms.len() - k;
        let mut next = tower.fq_zero();
        for i in 0..k {
            next = tower.fq_add(&next, &tower.fq_mul(&coeffs[i], &terms[j + i]));
        }
        terms.push(tower.fq_neg(&next));
    }
    terms
}

/// Term-wise product of the first `count` terms of two sequences.
pub fn product_sequence(
    tower: &FieldTower,
    s: &LinearSequence,
    t: &LinearSequence,
    count: usize,
) -> Vec<Digits> {
    let a = generate(tower, s, count);
    let b = generate(tower, t, count);
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| tower.fq_mul(x, y))
        .collect()
}

/// Berlekamp-Massey over F_q: the monic minimal polynomial of the given
/// prefix and its degree (the linear complexity). The caller must supply at
/// least twice the true complexity in terms for the answer to be exact.
pub fn berlekamp_massey(tower: &FieldTower, terms: &[Digits]) -> (Polynomial, usize) {
    // Connection polynomials in ascending order: c(x) with c_0 = 1 such
    // that sum_j c_j s_{i-j} = 0 for all admissible i.
    let mut c: Vec<Digits> = vec![tower.fq_one()];
    let mut b: Vec<Digits> = vec![tower.fq_one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut prev_delta = tower.fq_one();
    for i in 0..terms.len() {
        let mut delta = terms[i].clone();
        for j in 1..=l {
            if j < c.len() {
                delta = tower.fq_add(&delta, &tower.fq_mul(&c[j], &terms[i - j]));
            }
        }
        if tower.fq_is_zero(&delta) {
            m += 1;
            continue;
        }
        let factor = tower
            .fq_mul(&delta, &tower.fq_inv(&prev_delta).expect("non-zero discrepancy"));
        if 2 * l <= i {
            let old_c = c.clone();
            if c.len() < b.len() + m {
                c.resize(b.len() + m, tower.fq_zero());
            }
            for (j, bj) in b.iter().enumerate() {
                c[j + m] = tower.fq_sub(&c[j + m], &tower.fq_mul(&factor, bj));
            }
            l = i + 1 - l;
            b = old_c;
            prev_delta = delta;
            m = 1;
        } else {
            if c.len() < b.len() + m {
                c.resize(b.len() + m, tower.fq_zero());
            }
            for (j, bj) in b.iter().enumerate() {
                c[j + m] = tower.fq_sub(&c[j + m], &tower.fq_mul(&factor, bj));
            }
            m += 1;
        }
    }
    // The minimal polynomial is the reversal of the connection polynomial,
    // padded to degree l: x^l + c_1 x^{l-1} + ... + c_l.
    let mut coeffs = vec![tower.fq_zero(); l + 1];
    coeffs[l] = tower.fq_one();
    for j in 1..=l {
        if j < c.len() {
            coeffs[l - j] = c[j].clone();
        }
    }
    (Polynomial::from_fq_coeffs(tower, coeffs), l)
}

/// True iff the minimal polynomial of the term-wise product divides the
/// composed multiplication of the two characteristic polynomials. The term
/// budget is twice the product of the degrees, enough for Berlekamp-Massey
/// to be exact.
pub fn zierler_mills_check(
    tower: &FieldTower,
    s: &LinearSequence,
    t: &LinearSequence,
) -> Result<bool> {
    let ds = s.charpoly.deg().unwrap_or(0);
    let dt = t.charpoly.deg().unwrap_or(0);
    let count = 2 * ds * dt;
    let prod = product_sequence(tower, s, t, count);
    let (minpoly, _) = berlekamp_massey(tower, &prod);
    if minpoly.deg() == Some(0) {
        return Ok(true);
    }
    let composed = composed_product(tower, ComposedKind::Mul, &s.charpoly, &t.charpoly)?;
    Ok(poly::rem(tower, &composed, &minpoly)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib(tower: &FieldTower) -> LinearSequence {
        // x^2 - x - 1 with initial terms 0, 1.
        let charpoly = Polynomial::from_integers(tower, &[4, 4, 1]);
        LinearSequence::new(tower, charpoly, vec![tower.fq_from_u128(0), tower.fq_from_u128(1)])
            .unwrap()
    }

    #[test]
    fn generates_fibonacci_mod_5() {
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let seq = fib(&tower);
        let terms: Vec<u128> = generate(&tower, &seq, 10)
            .iter()
            .map(|d| tower.fq_value(d))
            .collect();
        assert_eq!(terms, vec![0, 1, 1, 2, 3, 0, 3, 3, 1, 4]);
    }

    #[test]
    fn degenerate_sequences() {
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let zero = LinearSequence::new(
            &tower,
            Polynomial::from_integers(&tower, &[4, 4, 1]),
            vec![tower.fq_zero(); 2],
        )
        .unwrap();
        assert!(generate(&tower, &zero, 6).iter().all(|d| tower.fq_is_zero(d)));
        let constant = LinearSequence::new(
            &tower,
            Polynomial::from_integers(&tower, &[4, 1]), // x - 1
            vec![tower.fq_from_u128(3)],
        )
        .unwrap();
        let terms = generate(&tower, &constant, 5);
        assert!(terms.iter().all(|d| tower.fq_value(d) == 3));
        // Mismatched initial-segment length is rejected.
        assert!(matches!(
            LinearSequence::new(
                &tower,
                Polynomial::from_integers(&tower, &[4, 4, 1]),
                vec![tower.fq_zero()],
            ),
            Err(Error::LengthMismatch { got: 1, want: 2 })
        ));
    }

    #[test]
    fn berlekamp_massey_recovers_fibonacci() {
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let seq = fib(&tower);
        let terms = generate(&tower, &seq, 8);
        let (minpoly, complexity) = berlekamp_massey(&tower, &terms);
        assert_eq!(complexity, 2);
        assert_eq!(minpoly, seq.charpoly);
    }

    #[test]
    fn berlekamp_massey_zero_prefix() {
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let (minpoly, complexity) = berlekamp_massey(&tower, &vec![tower.fq_zero(); 12]);
        assert_eq!(complexity, 0);
        assert_eq!(minpoly, Polynomial::one(&tower, 1));
    }

    #[test]
    fn berlekamp_massey_recovers_random_charpolys() {
        use rand::Rng;
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let mut rng = crate::field::rng_for(7, "lrs-test", &[]);
        for _ in 0..20 {
            let k = rng.gen_range(1..=4usize);
            let mut coeffs: Vec<u128> = (0..k).map(|_| rng.gen_range(0..5)).collect();
            coeffs.push(1);
            let f = Polynomial::from_integers(&tower, &coeffs);
            let f = match poly::is_irreducible(&tower, &f) {
                Ok(true) => f,
                _ => continue,
            };
            let init: Vec<Digits> = (0..k).map(|_| tower.fq_from_u128(rng.gen_range(1..5))).collect();
            let seq = LinearSequence::new(&tower, f.clone(), init).unwrap();
            let terms = generate(&tower, &seq, 2 * k);
            let (minpoly, _) = berlekamp_massey(&tower, &terms);
            assert_eq!(minpoly, f, "irreducible charpoly with non-zero init");
        }
    }

    #[test]
    fn product_of_fibonacci_passes_divisibility() {
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let s = fib(&tower);
        // All-ones sequence leaves terms unchanged.
        let ones = LinearSequence::new(
            &tower,
            Polynomial::from_integers(&tower, &[4, 1]),
            vec![tower.fq_one()],
        )
        .unwrap();
        assert_eq!(
            product_sequence(&tower, &s, &ones, 10),
            generate(&tower, &s, 10)
        );
        assert!(zierler_mills_check(&tower, &s, &ones).unwrap());
        assert!(zierler_mills_check(&tower, &s, &s).unwrap());
    }
}

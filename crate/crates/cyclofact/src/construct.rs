//! Irreducible-polynomial constructions built from minimal polynomials of
//! root powers: the Mobius-product family F_m, the quotient family
//! f(x^r)/f(x), Varshamov's quotient, powers of prime-index cyclotomics, and
//! products of Frobenius-conjugate twists.

use num_bigint::BigUint;

use crate::arith::{
    checked_pow_u128, divisors, euler_phi, gcd_u64, is_prime_u64, mobius, ord_mod,
};
use crate::composed::{composed_product, ComposedKind};
use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower};
use crate::poly::{self, Polynomial};

/// One divisor's worth of data for the Mobius-product construction: the
/// power residue R_d = x^d mod f next to the minimal polynomial of alpha^d.
#[derive(Clone, Debug)]
pub struct MinimalPolyPair {
    pub d: u64,
    pub r_d: Polynomial,
    pub psi_d: Polynomial,
}

/// A named precondition together with its verdict.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Output of a construction: the polynomial, its certified degree, its
/// multiplicative order when small enough to compute, the full hypothesis
/// log, and the per-divisor components that built it.
#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub result: Polynomial,
    pub degree: usize,
    pub order: Option<u128>,
    pub hypotheses: Vec<Hypothesis>,
    pub components: Vec<MinimalPolyPair>,
}

fn check_hypotheses(hypotheses: &[Hypothesis]) -> Result<()> {
    let failed: Vec<&str> = hypotheses
        .iter()
        .filter(|h| !h.passed)
        .map(|h| h.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(failed.join(", ")))
    }
}

/// Multiplicative order of the result, when q^deg - 1 is small enough to
/// factor. Degrees past 100 bits are skipped rather than refused.
fn try_poly_order(tower: &FieldTower, f: &Polynomial) -> Option<u128> {
    let deg = f.deg()? as u32;
    let size = checked_pow_u128(tower.q(), deg)?;
    if size > 1u128 << 100 {
        return None;
    }
    poly::poly_order(tower, f).ok()
}

/// Decides f(x) | f(x^r) for irreducible f with f(0) != 0, by testing the
/// congruence r = q^i (mod t) for i in [0, deg f), t the order of f. Returns
/// the witness exponent i when the divisibility holds.
pub fn check_self_divisibility(
    tower: &FieldTower,
    f: &Polynomial,
    r: u64,
) -> Result<(bool, Option<u32>)> {
    if !poly::is_irreducible(tower, f)? {
        return Err(Error::HypothesisViolation("f irreducible".into()));
    }
    let t = poly::poly_order(tower, f)?;
    let n = f.deg().unwrap() as u32;
    let tb = BigUint::from(t);
    let target = BigUint::from(r) % &tb;
    let mut pow = BigUint::from(1u32);
    for i in 0..n {
        if pow == target {
            return Ok((true, Some(i)));
        }
        pow = pow * BigUint::from(tower.q()) % &tb;
    }
    Ok((false, None))
}

/// True iff the multiplicative order of q modulo m equals `want`, checked by
/// modular exponentiation over the divisors of `want` (m may be too large to
/// hand to the order routine directly).
fn ord_equals(q: u128, m: u128, want: u64) -> bool {
    if m == 1 {
        return want == 1;
    }
    let mb = BigUint::from(m);
    let qb = BigUint::from(q) % &mb;
    let one = BigUint::from(1u32);
    if qb.modpow(&BigUint::from(want), &mb) != one {
        return false;
    }
    divisors(want)
        .into_iter()
        .filter(|&d| d < want)
        .all(|d| qb.modpow(&BigUint::from(d), &mb) != one)
}

/// Mobius-product construction: F_m(x) = prod over d | m of
/// Psi_d(x^d)^(mu(m/d)), where Psi_d is the minimal polynomial of alpha^d for
/// a fixed root alpha of f. Under the logged hypotheses F_m is irreducible of
/// degree (deg f) * phi(m) and order lcm(t, m).
pub fn construct_fm(tower: &FieldTower, f: &Polynomial, m: u64) -> Result<ConstructionReport> {
    let mut hypotheses = Vec::new();
    let irreducible = poly::is_irreducible(tower, f)?;
    hypotheses.push(Hypothesis {
        name: "f irreducible",
        passed: irreducible,
        detail: format!("deg f = {:?}", f.deg()),
    });
    let nonzero_const = !tower.el_is_zero(&f.coeff(tower, 0));
    hypotheses.push(Hypothesis {
        name: "f(0) != 0",
        passed: nonzero_const,
        detail: String::new(),
    });
    check_hypotheses(&hypotheses)?;

    let n = f.deg().unwrap() as u64;
    let t = poly::poly_order(tower, f)?;
    let q = tower.q();
    let prim = crate::arith::is_primitive_root(q, m);
    hypotheses.push(Hypothesis {
        name: "q primitive root mod m",
        passed: prim,
        detail: format!("q = {q}, m = {m}"),
    });
    let phi = euler_phi(m);
    let coprime = gcd_u64(n, phi) == 1;
    hypotheses.push(Hypothesis {
        name: "gcd(deg f, phi(m)) = 1",
        passed: coprime,
        detail: format!("deg f = {n}, phi(m) = {phi}"),
    });
    if m % 2 == 0 && t % 2 == 0 {
        let ok = ord_equals(q, t / 2, n);
        hypotheses.push(Hypothesis {
            name: "ord_{t/2}(q) = deg f",
            passed: ok,
            detail: format!("t = {t}"),
        });
    }
    check_hypotheses(&hypotheses)?;

    let alpha = first_root(tower, f)?;
    let mut components = Vec::new();
    let mut numerator: Vec<Polynomial> = Vec::new();
    let mut denominator: Vec<Polynomial> = Vec::new();
    let x = Polynomial::x(tower, 1);
    for d in divisors(m) {
        let psi = poly::minimal_polynomial(tower, &tower.el_pow(&alpha, d as u128))?;
        let r_d = poly::powmod(tower, &x, d as u128, f)?;
        match mobius(m / d) {
            1 => numerator.push(poly::subst_xpow(tower, &psi, d as usize)),
            -1 => denominator.push(poly::subst_xpow(tower, &psi, d as usize)),
            _ => {}
        }
        components.push(MinimalPolyPair { d, r_d, psi_d: psi });
    }
    let num = poly::product(tower, &numerator, 1);
    let den = poly::product(tower, &denominator, 1);
    let result = poly::exact_div(tower, &num, &den)?;

    let degree = result.deg().unwrap_or(0);
    assert_eq!(degree as u64, n * phi, "degree law violated");
    assert!(
        poly::is_irreducible(tower, &result)?,
        "construction output failed the irreducibility certificate"
    );
    let order = try_poly_order(tower, &result);
    if let Some(ord) = order {
        let want = lcm_u128(t, m as u128);
        assert_eq!(ord, want, "order invariant lcm(t, m) violated");
    }
    Ok(ConstructionReport {
        result,
        degree,
        order,
        hypotheses,
        components,
    })
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    a / crate::arith::gcd_u128(a, b) * b
}

fn first_root(tower: &FieldTower, f: &Polynomial) -> Result<FieldElement> {
    let n = f.deg().unwrap();
    let roots = poly::distinct_roots_in_level(tower, f, n)?;
    roots.into_iter().next().ok_or(Error::DescentFailure)
}

/// Quotient construction F(x) = f(x^r)/f(x) for irreducible f with
/// f | f(x^r), q a primitive root mod the prime r, and gcd(deg f, r-1) = 1.
/// For k >= 1 the result is the further substitution F(x^{r^k}), certified
/// irreducible under the stronger hypotheses r^2 not dividing q^{r-1}-1 and
/// gcd(deg f, r(r-1)) = 1.
pub fn construct_thm2(
    tower: &FieldTower,
    f: &Polynomial,
    r: u64,
    k: u32,
) -> Result<ConstructionReport> {
    let mut hypotheses = Vec::new();
    let irreducible = poly::is_irreducible(tower, f)?;
    hypotheses.push(Hypothesis {
        name: "f irreducible",
        passed: irreducible,
        detail: String::new(),
    });
    let nonzero_const = irreducible && !tower.el_is_zero(&f.coeff(tower, 0));
    hypotheses.push(Hypothesis {
        name: "f(0) != 0",
        passed: nonzero_const,
        detail: String::new(),
    });
    check_hypotheses(&hypotheses)?;

    let n = f.deg().unwrap() as u64;
    let q = tower.q();
    let (divides, witness) = check_self_divisibility(tower, f, r)?;
    hypotheses.push(Hypothesis {
        name: "f(x) divides f(x^r)",
        passed: divides,
        detail: match witness {
            Some(i) => format!("r = q^{i} mod ord(f)"),
            None => "no exponent witness".into(),
        },
    });
    hypotheses.push(Hypothesis {
        name: "r prime",
        passed: is_prime_u64(r),
        detail: format!("r = {r}"),
    });
    hypotheses.push(Hypothesis {
        name: "q primitive root mod r",
        passed: crate::arith::is_primitive_root(q, r),
        detail: String::new(),
    });
    hypotheses.push(Hypothesis {
        name: "gcd(deg f, r-1) = 1",
        passed: gcd_u64(n, r - 1) == 1,
        detail: String::new(),
    });
    if k >= 1 {
        hypotheses.push(Hypothesis {
            name: "r odd",
            passed: r % 2 == 1,
            detail: String::new(),
        });
        let r2 = BigUint::from(r) * BigUint::from(r);
        let unramified =
            (BigUint::from(q) % &r2).modpow(&BigUint::from(r - 1), &r2) != BigUint::from(1u32);
        hypotheses.push(Hypothesis {
            name: "r^2 does not divide q^{r-1} - 1",
            passed: unramified,
            detail: String::new(),
        });
        hypotheses.push(Hypothesis {
            name: "gcd(deg f, r(r-1)) = 1",
            passed: gcd_u64(n, r * (r - 1)) == 1,
            detail: String::new(),
        });
    }
    check_hypotheses(&hypotheses)?;

    let base = poly::exact_div(tower, &poly::subst_xpow(tower, f, r as usize), f)?;
    let phi_r = cyclotomic_poly(tower, r)?;
    let via_composed = composed_product(tower, ComposedKind::Mul, f, &phi_r)?;
    assert_eq!(base, via_composed, "quotient disagrees with composed product");

    let result = if k == 0 {
        base
    } else {
        let rk = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(r));
        let rk = rk.ok_or(Error::SizeRefusal(k as usize))?;
        poly::subst_xpow(tower, &base, rk as usize)
    };
    assert!(
        poly::is_irreducible(tower, &result)?,
        "construction output failed the irreducibility certificate"
    );
    let degree = result.deg().unwrap_or(0);
    let order = try_poly_order(tower, &result);
    Ok(ConstructionReport {
        result,
        degree,
        order,
        hypotheses,
        components: Vec::new(),
    })
}

/// Varshamov's construction: with R = x^r mod f, find the monic polynomial
/// psi of least degree with psi(R) = 0 in F_q[x]/(f) by Gaussian elimination
/// on the powers of R, then return psi(x^r)/f(x). Deliberately avoids the
/// Frobenius-orbit minimal-polynomial routine so the two paths cross-check
/// each other.
pub fn varshamov(tower: &FieldTower, f: &Polynomial, r: u64) -> Result<ConstructionReport> {
    let mut hypotheses = Vec::new();
    let irreducible = poly::is_irreducible(tower, f)?;
    hypotheses.push(Hypothesis {
        name: "f irreducible",
        passed: irreducible,
        detail: String::new(),
    });
    let nonzero_const = irreducible && !tower.el_is_zero(&f.coeff(tower, 0));
    hypotheses.push(Hypothesis {
        name: "f(0) != 0",
        passed: nonzero_const,
        detail: String::new(),
    });
    hypotheses.push(Hypothesis {
        name: "r odd prime",
        passed: r % 2 == 1 && is_prime_u64(r),
        detail: format!("r = {r}"),
    });
    check_hypotheses(&hypotheses)?;
    let n = f.deg().unwrap() as u64;
    let q = tower.q();
    hypotheses.push(Hypothesis {
        name: "ord_r(q) = r - 1",
        passed: ord_mod(q, r)? == r - 1,
        detail: String::new(),
    });
    hypotheses.push(Hypothesis {
        name: "gcd(deg f, r-1) = 1",
        passed: gcd_u64(n, r - 1) == 1,
        detail: String::new(),
    });
    check_hypotheses(&hypotheses)?;

    let x = Polynomial::x(tower, 1);
    let r_poly = poly::powmod(tower, &x, r as u128, f)?;
    let psi = poly::min_poly_in_quotient(tower, &r_poly, f)?;
    let result = poly::exact_div(tower, &poly::subst_xpow(tower, &psi, r as usize), f)?;
    assert!(
        poly::is_irreducible(tower, &result)?,
        "construction output failed the irreducibility certificate"
    );
    let degree = result.deg().unwrap_or(0);
    assert_eq!(degree as u64, (r - 1) * n, "degree law violated");
    let order = try_poly_order(tower, &result);
    if let Some(ord) = order {
        let t = poly::poly_order(tower, f)?;
        assert_eq!(ord, r as u128 * t, "order invariant r*t violated");
    }
    Ok(ConstructionReport {
        result,
        degree,
        order,
        hypotheses,
        components: vec![MinimalPolyPair {
            d: r,
            r_d: r_poly,
            psi_d: psi,
        }],
    })
}

/// The substituted cyclotomic Phi_r(x^{r^k}) = Phi_{r^{k+1}}, irreducible
/// over F_q when q is a primitive root mod r and r^2 does not divide
/// q^{r-1} - 1.
pub fn phi_r_power(tower: &FieldTower, r: u64, k: u32) -> Result<Polynomial> {
    let q = tower.q();
    if r % 2 == 0 || !is_prime_u64(r) {
        return Err(Error::HypothesisViolation(format!("r = {r} not an odd prime")));
    }
    if !crate::arith::is_primitive_root(q, r) {
        return Err(Error::HypothesisViolation(format!(
            "q = {q} is not a primitive root mod {r}"
        )));
    }
    let r2 = BigUint::from(r) * BigUint::from(r);
    if (BigUint::from(q) % &r2).modpow(&BigUint::from(r - 1), &r2) == BigUint::from(1u32) {
        return Err(Error::HypothesisViolation(format!(
            "r^2 divides q^(r-1) - 1 for r = {r}"
        )));
    }
    let rk = (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(r))
        .ok_or(Error::SizeRefusal(k as usize))?;
    let phi_r = cyclotomic_poly(tower, r)?;
    let result = poly::subst_xpow(tower, &phi_r, rk as usize);
    assert!(
        poly::is_irreducible(tower, &result)?,
        "construction output failed the irreducibility certificate"
    );
    Ok(result)
}

/// Result of multiplying out all Frobenius twists of a polynomial over an
/// extension level: the product always descends to the base, and it is
/// irreducible exactly when g is irreducible over the extension and its
/// coefficients generate the whole extension.
#[derive(Clone, Debug)]
pub struct ConjugateProductReport {
    pub result: Polynomial,
    /// Degree over F_q of the field generated by the coefficients of g.
    pub coefficient_field_degree: usize,
    /// True when the coefficient field is the full extension level of g.
    pub full_field: bool,
}

fn twist(tower: &FieldTower, g: &Polynomial) -> Polynomial {
    Polynomial::from_el_coeffs(
        tower,
        g.level(),
        g.coeffs().iter().map(|c| tower.frobenius(c)).collect(),
    )
}

/// Product of the coefficient-wise Frobenius twists g, g^(1), ..., g^(d-1)
/// of a monic polynomial over F_{q^d}, descended to F_q.
pub fn conjugate_product(tower: &FieldTower, g: &Polynomial) -> Result<ConjugateProductReport> {
    let d = g.level();
    let mut twists = vec![g.clone()];
    let mut coefficient_field_degree = d;
    for u in 1..d {
        let next = twist(tower, twists.last().unwrap());
        if next == *g && coefficient_field_degree == d {
            coefficient_field_degree = u;
        }
        twists.push(next);
    }
    let product = poly::product(tower, &twists, d);
    let result = poly::descend(tower, &product)?;
    Ok(ConjugateProductReport {
        result,
        coefficient_field_degree,
        full_field: coefficient_field_degree == d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::minimal_polynomial;

    #[test]
    fn self_divisibility_examples() {
        let tower = FieldTower::new(2, 1, 7).unwrap();
        let f = Polynomial::from_integers(&tower, &[1, 0, 1, 1]); // x^3 + x^2 + 1
        assert_eq!(check_self_divisibility(&tower, &f, 11).unwrap(), (true, Some(2)));
        assert_eq!(check_self_divisibility(&tower, &f, 1).unwrap(), (true, Some(0)));
        assert_eq!(check_self_divisibility(&tower, &f, 3).unwrap(), (false, None));
        // Cross-check against direct division.
        let lifted = poly::subst_xpow(&tower, &f, 3);
        assert!(poly::rem(&tower, &lifted, &f).unwrap().deg().is_some());
    }

    #[test]
    fn fm_matches_published_rows() {
        // (m, q, n) = (2, 5, 5)
        let tower = FieldTower::new(5, 1, 7).unwrap();
        let f = Polynomial::from_integers(&tower, &[2, 4, 0, 4, 3, 1]);
        let report = construct_fm(&tower, &f, 2).unwrap();
        assert_eq!(
            report.result,
            Polynomial::from_integers(&tower, &[3, 4, 0, 4, 2, 1])
        );
        assert_eq!(report.degree, 5);
        // Psi_1 = f always.
        assert_eq!(report.components[0].psi_d, f);

        // (m, q, n) = (4, 7, 3)
        let tower = FieldTower::new(7, 1, 7).unwrap();
        let f = Polynomial::from_integers(&tower, &[1, 0, 4, 1]);
        let report = construct_fm(&tower, &f, 4).unwrap();
        assert_eq!(
            report.result,
            Polynomial::from_integers(&tower, &[1, 0, 6, 0, 2, 0, 1])
        );
    }

    #[test]
    fn fm_sparse_binary_row() {
        // (m, q, n) = (3^2, 2, 5): only exponents 30, 27, 21, 6, 0 appear.
        let tower = FieldTower::new(2, 1, 7).unwrap();
        let f = Polynomial::from_integers(&tower, &[1, 0, 1, 0, 0, 1]);
        let report = construct_fm(&tower, &f, 9).unwrap();
        let mut want = vec![0u128; 31];
        for e in [0, 6, 21, 27, 30] {
            want[e] = 1;
        }
        assert_eq!(report.result, Polynomial::from_integers(&tower, &want));
        assert_eq!(report.degree, 30);
    }

    #[test]
    fn thm2_quotient_example() {
        let tower = FieldTower::new(2, 1, 7).unwrap();
        let f = Polynomial::from_integers(&tower, &[1, 0, 1, 1]);
        let report = construct_thm2(&tower, &f, 11, 0).unwrap();
        assert_eq!(report.degree, 30);
        assert_eq!(report.order, Some(77));
        // Degenerate input is filtered, not silently accepted.
        let lin = Polynomial::from_integers(&tower, &[1, 1]); // x + 1
        assert!(matches!(
            construct_thm2(&tower, &lin, 11, 0),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn varshamov_agrees_with_fm() {
        let tower = FieldTower::new(2, 1, 7).unwrap();
        let f = Polynomial::from_integers(&tower, &[1, 0, 1, 1]);
        let v = varshamov(&tower, &f, 11).unwrap();
        let fm = construct_fm(&tower, &f, 11).unwrap();
        let t2 = construct_thm2(&tower, &f, 11, 0).unwrap();
        assert_eq!(v.result, fm.result);
        assert_eq!(v.result, t2.result);
        assert_eq!(v.order, Some(77));
    }

    #[test]
    fn phi_r_power_examples() {
        let tower = FieldTower::new(2, 1, 7).unwrap();
        let p9 = phi_r_power(&tower, 3, 1).unwrap();
        assert_eq!(p9, Polynomial::from_integers(&tower, &[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(p9, cyclotomic_poly(&tower, 9).unwrap());
        let p3 = phi_r_power(&tower, 3, 0).unwrap();
        assert_eq!(p3, cyclotomic_poly(&tower, 3).unwrap());
        let p11 = phi_r_power(&tower, 11, 0).unwrap();
        assert!(poly::is_irreducible(&tower, &p11).unwrap());
    }

    #[test]
    fn conjugate_product_cases() {
        let tower = FieldTower::new(5, 1, 7).unwrap();
        // d = 1: identity.
        let f = Polynomial::from_integers(&tower, &[1, 1, 0, 1]);
        assert!(poly::is_irreducible(&tower, &f).unwrap());
        let rep = conjugate_product(&tower, &f).unwrap();
        assert_eq!(rep.result, f);
        assert!(rep.full_field);

        // Linear g = x - gamma for a proper element of F_{5^2}.
        tower.ensure_level(2).unwrap();
        let gamma = tower.gen(2).unwrap();
        let g = Polynomial::x_minus(&tower, &gamma);
        let rep = conjugate_product(&tower, &g).unwrap();
        assert_eq!(rep.result, minimal_polynomial(&tower, &gamma).unwrap());
        assert!(rep.full_field);

        // Twisted composite: conjugate_product(f(a x + beta)) equals the
        // composed sum of the root-scaled f with the minimal polynomial of
        // -a^{-1} beta, and is irreducible of degree 6.
        let a = tower.constant(2, 2);
        let beta = gamma.clone();
        let ainv = tower.el_inv(&a).unwrap();
        let f2 = poly::lift(&tower, &f, 2).unwrap();
        // Monic image of f(a x + beta): shift the roots by -beta, then
        // scale them by a^{-1}.
        let shifted = poly::scale_roots(&tower, &poly::translate(&tower, &f2, &beta), &ainv);
        let rep = conjugate_product(&tower, &shifted).unwrap();
        assert_eq!(rep.result.deg(), Some(6));
        assert!(rep.full_field);
        assert!(poly::is_irreducible(&tower, &rep.result).unwrap());
        let scaled = poly::descend(&tower, &poly::scale_roots(&tower, &f2, &ainv)).unwrap();
        let shift_min =
            minimal_polynomial(&tower, &tower.el_neg(&tower.el_mul(&ainv, &beta))).unwrap();
        let via_sum = composed_product(&tower, ComposedKind::Sum, &scaled, &shift_min).unwrap();
        assert_eq!(rep.result, via_sum);

        // Coefficients confined to a subfield are reported as not full.
        let low = poly::lift(&tower, &f, 2).unwrap();
        let rep = conjugate_product(&tower, &low).unwrap();
        assert_eq!(rep.coefficient_field_degree, 1);
        assert!(!rep.full_field);
        assert!(!poly::is_irreducible(&tower, &rep.result).unwrap());
    }
}

//! Composed products of polynomials over F_q.
//!
//! For monic f, g with roots {a}, {b} in the algebraic closure, the composed
//! product with respect to a binary operation * on roots is the monic
//! polynomial whose roots are {a * b}, with multiplicities multiplying.
//! Four operations are supported:
//!
//!   Mul:         a * b = ab            (needs f(0), g(0) != 0)
//!   Sum:         a * b = a + b
//!   CircleMinus: a * b = a + b - ab    (needs f(1), g(1) != 0)
//!   CirclePlus:  a * b = a + b + ab    (needs f(-1), g(-1) != 0)
//!
//! Mul and Sum have closed forms that only enumerate the roots of one
//! operand; the circle variants and `oracle_composed` enumerate root pairs
//! directly in a common splitting field.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd_u64, lcm_u64};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower};
use crate::poly::{self, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComposedKind {
    Mul,
    Sum,
    CircleMinus,
    CirclePlus,
}

impl ComposedKind {
    pub fn name(self) -> &'static str {
        match self {
            ComposedKind::Mul => "mul",
            ComposedKind::Sum => "sum",
            ComposedKind::CircleMinus => "circle-minus",
            ComposedKind::CirclePlus => "circle-plus",
        }
    }

    pub const ALL: [ComposedKind; 4] = [
        ComposedKind::Mul,
        ComposedKind::Sum,
        ComposedKind::CircleMinus,
        ComposedKind::CirclePlus,
    ];
}

/// The excluded evaluation point for each kind, if any: a root of an operand
/// at that point makes the root operation degenerate.
fn excluded_point(tower: &FieldTower, kind: ComposedKind) -> Option<(FieldElement, &'static str)> {
    match kind {
        ComposedKind::Mul => Some((tower.zero(1), "0")),
        ComposedKind::Sum => None,
        ComposedKind::CircleMinus => Some((tower.one(1), "1")),
        ComposedKind::CirclePlus => Some((tower.el_neg(&tower.one(1)), "-1")),
    }
}

fn domain_check(tower: &FieldTower, kind: ComposedKind, f: &Polynomial) -> Result<()> {
    if let Some((pt, label)) = excluded_point(tower, kind) {
        if tower.el_is_zero(&poly::eval(tower, f, &pt)) {
            return Err(Error::RootOutsideDomain {
                kind: kind.name(),
                point: label,
            });
        }
    }
    Ok(())
}

fn check_operand(tower: &FieldTower, f: &Polynomial) -> Result<Polynomial> {
    if f.level() != 1 {
        return Err(Error::MixedLevels(f.level(), 1));
    }
    if f.deg().map(|d| d < 1).unwrap_or(true) {
        return Err(Error::NotMonic);
    }
    poly::monic(tower, f)
}

/// Apply the root operation to a pair of roots at a common level.
fn combine_roots(
    tower: &FieldTower,
    kind: ComposedKind,
    a: &FieldElement,
    b: &FieldElement,
) -> FieldElement {
    match kind {
        ComposedKind::Mul => tower.el_mul(a, b),
        ComposedKind::Sum => tower.el_add(a, b),
        ComposedKind::CircleMinus => {
            let sum = tower.el_add(a, b);
            tower.el_sub(&sum, &tower.el_mul(a, b))
        }
        ComposedKind::CirclePlus => {
            let sum = tower.el_add(a, b);
            tower.el_add(&sum, &tower.el_mul(a, b))
        }
    }
}

/// Composed product via closed forms where available (Mul, Sum), otherwise
/// by root-pair enumeration.  The result is monic of degree deg(f)*deg(g)
/// over F_q.
pub fn composed_product(
    tower: &FieldTower,
    kind: ComposedKind,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial> {
    let f = check_operand(tower, f)?;
    let g = check_operand(tower, g)?;
    domain_check(tower, kind, &f)?;
    domain_check(tower, kind, &g)?;
    let expected = f.deg().unwrap() * g.deg().unwrap();
    let result = match kind {
        ComposedKind::Mul | ComposedKind::Sum => {
            // Enumerate the roots of the lower-degree operand.
            let (small, large) = if f.deg() <= g.deg() { (&f, &g) } else { (&g, &f) };
            let level = poly::splitting_degree(tower, small)?;
            let roots = poly::roots_with_multiplicity(tower, small, level)?;
            let large_l = poly::lift(tower, large, level)?;
            let mut parts = Vec::new();
            for (alpha, m) in &roots {
                let factor = match kind {
                    // a^n g(x/a) is monic with roots {a*b : g(b) = 0}.
                    ComposedKind::Mul => poly::scale_roots(tower, &large_l, alpha),
                    // g(x - a) has roots {a + b}.
                    ComposedKind::Sum => poly::translate(tower, &large_l, &tower.el_neg(alpha)),
                    _ => unreachable!(),
                };
                for _ in 0..*m {
                    parts.push(factor.clone());
                }
            }
            let prod = poly::product(tower, &parts, level);
            poly::descend(tower, &prod)?
        }
        ComposedKind::CircleMinus | ComposedKind::CirclePlus => {
            root_pair_product(tower, kind, &f, &g)?
        }
    };
    assert_eq!(
        result.deg(),
        Some(expected),
        "composed product degree law violated"
    );
    Ok(result)
}

/// Independent reference: enumerate all root pairs in a common splitting
/// field for every kind, including the ones with closed forms.
pub fn oracle_composed(
    tower: &FieldTower,
    kind: ComposedKind,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial> {
    let f = check_operand(tower, f)?;
    let g = check_operand(tower, g)?;
    domain_check(tower, kind, &f)?;
    domain_check(tower, kind, &g)?;
    root_pair_product(tower, kind, &f, &g)
}

fn root_pair_product(
    tower: &FieldTower,
    kind: ComposedKind,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial> {
    let df = poly::splitting_degree(tower, f)? as u64;
    let dg = poly::splitting_degree(tower, g)? as u64;
    let level = lcm_u64(df, dg) as usize;
    let fr = poly::roots_with_multiplicity(tower, f, level)?;
    let gr = poly::roots_with_multiplicity(tower, g, level)?;
    let mut parts = Vec::new();
    for (a, ma) in &fr {
        for (b, mb) in &gr {
            let root = combine_roots(tower, kind, a, b);
            let lin = Polynomial::x_minus(tower, &root);
            for _ in 0..(ma * mb) {
                parts.push(lin.clone());
            }
        }
    }
    let prod = poly::product(tower, &parts, level);
    poly::descend(tower, &prod)
}

/// All pairwise composed products of two factor lists (the factorization of
/// a composed product of squarefree polynomials with coprime-order roots).
pub fn composed_product_lists(
    tower: &FieldTower,
    kind: ComposedKind,
    fs: &[Polynomial],
    gs: &[Polynomial],
) -> Result<Vec<Polynomial>> {
    let mut out = Vec::with_capacity(fs.len() * gs.len());
    for f in fs {
        for g in gs {
            out.push(composed_product(tower, kind, f, g)?);
        }
    }
    Ok(out)
}

/// The coprime-degree irreducibility criterion: the composed product of two
/// irreducible polynomials is irreducible exactly when their degrees are
/// coprime.  This checks the hypotheses, not the conclusion.
pub fn brawley_carlitz_irreducible(
    tower: &FieldTower,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<bool> {
    let df = match f.deg() {
        Some(d) if d >= 1 => d as u64,
        _ => return Ok(false),
    };
    let dg = match g.deg() {
        Some(d) if d >= 1 => d as u64,
        _ => return Ok(false),
    };
    Ok(gcd_u64(df, dg) == 1
        && poly::is_irreducible(tower, f)?
        && poly::is_irreducible(tower, g)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldTower {
        FieldTower::new(5, 1, 17).unwrap()
    }

    fn poly5(t: &FieldTower, cs: &[u128]) -> Polynomial {
        Polynomial::from_integers(t, cs)
    }

    #[test]
    fn linear_cases() {
        let t = f5();
        let f = poly5(&t, &[3, 1]); // x + 3, root 2
        let g = poly5(&t, &[2, 1]); // x + 2, root 3
        // roots 2*3 = 6 = 1, 2+3 = 0, 2+3-6 = 4, 2+3+6 = 1 (mod 5)
        assert_eq!(
            composed_product(&t, ComposedKind::Mul, &f, &g).unwrap(),
            poly5(&t, &[4, 1])
        );
        assert_eq!(
            composed_product(&t, ComposedKind::Sum, &f, &g).unwrap(),
            poly5(&t, &[0, 1])
        );
        assert_eq!(
            composed_product(&t, ComposedKind::CircleMinus, &f, &g).unwrap(),
            poly5(&t, &[1, 1])
        );
        assert_eq!(
            composed_product(&t, ComposedKind::CirclePlus, &f, &g).unwrap(),
            poly5(&t, &[4, 1])
        );
    }

    #[test]
    fn closed_forms_match_oracle() {
        let t = f5();
        // Mixed degrees, reducible and irreducible operands.
        let cases = [
            (vec![2u128, 0, 1], vec![1u128, 1, 1, 1, 1, 1, 1]),
            (vec![1, 1], vec![2, 0, 1]),
            (vec![2, 3, 1], vec![3, 1, 1]), // both reducible
            (vec![4, 1, 0, 1], vec![2, 1]),
        ];
        for (fc, gc) in &cases {
            let f = poly5(&t, fc);
            let g = poly5(&t, gc);
            for kind in ComposedKind::ALL {
                let closed = composed_product(&t, kind, &f, &g);
                let oracle = oracle_composed(&t, kind, &f, &g);
                match (closed, oracle) {
                    (Ok(c), Ok(o)) => assert_eq!(c, o, "{} on {fc:?} {gc:?}", kind.name()),
                    (Err(a), Err(b)) => assert_eq!(a, b),
                    (c, o) => panic!("closed={c:?} oracle={o:?}"),
                }
            }
        }
    }

    #[test]
    fn multiplicities_multiply() {
        let t = f5();
        // f = (x+3)^2 has the double root 2; g = x + 2 has root 3.
        let f = poly::mul(&t, &poly5(&t, &[3, 1]), &poly5(&t, &[3, 1]));
        let g = poly5(&t, &[2, 1]);
        let h = composed_product(&t, ComposedKind::Mul, &f, &g).unwrap();
        assert_eq!(h, poly::mul(&t, &poly5(&t, &[4, 1]), &poly5(&t, &[4, 1])));
    }

    #[test]
    fn domain_violations() {
        let t = f5();
        let has_root_0 = poly5(&t, &[0, 1]);
        let has_root_1 = poly5(&t, &[4, 1]);
        let has_root_m1 = poly5(&t, &[1, 1]);
        let ok = poly5(&t, &[2, 0, 1]);
        assert!(matches!(
            composed_product(&t, ComposedKind::Mul, &has_root_0, &ok),
            Err(Error::RootOutsideDomain { kind: "mul", point: "0" })
        ));
        assert!(matches!(
            composed_product(&t, ComposedKind::CircleMinus, &ok, &has_root_1),
            Err(Error::RootOutsideDomain { kind: "circle-minus", point: "1" })
        ));
        assert!(matches!(
            composed_product(&t, ComposedKind::CirclePlus, &has_root_m1, &ok),
            Err(Error::RootOutsideDomain { kind: "circle-plus", point: "-1" })
        ));
        // Sum has no excluded point.
        assert!(composed_product(&t, ComposedKind::Sum, &has_root_0, &has_root_1).is_ok());
        // Constants are rejected.
        assert!(composed_product(&t, ComposedKind::Sum, &poly5(&t, &[3]), &ok).is_err());
    }

    #[test]
    fn coprime_degree_criterion() {
        let t = f5();
        let quadratic = poly5(&t, &[2, 0, 1]); // irreducible, degree 2
        let cubic = poly5(&t, &[1, 1, 0, 1]); // x^3 + x + 1, irreducible over F_5
        assert!(poly::is_irreducible(&t, &cubic).unwrap());
        assert!(brawley_carlitz_irreducible(&t, &quadratic, &cubic).unwrap());
        let h = composed_product(&t, ComposedKind::Mul, &quadratic, &cubic).unwrap();
        assert!(poly::is_irreducible(&t, &h).unwrap());
        // Equal degrees: hypotheses fail and the product is indeed reducible.
        let quadratic2 = poly5(&t, &[3, 0, 1]);
        assert!(poly::is_irreducible(&t, &quadratic2).unwrap());
        assert!(!brawley_carlitz_irreducible(&t, &quadratic, &quadratic2).unwrap());
        let h = composed_product(&t, ComposedKind::Mul, &quadratic, &quadratic2).unwrap();
        assert!(!poly::is_irreducible(&t, &h).unwrap());
        // Reducible operand.
        let red = poly5(&t, &[2, 3, 1]);
        assert!(!brawley_carlitz_irreducible(&t, &red, &cubic).unwrap());
    }

    #[test]
    fn pairwise_lists() {
        let t = f5();
        let fs = vec![poly5(&t, &[3, 1]), poly5(&t, &[2, 1])];
        let gs = vec![poly5(&t, &[4, 1]), poly5(&t, &[1, 1]), poly5(&t, &[2, 0, 1])];
        let out = composed_product_lists(&t, ComposedKind::Mul, &fs, &gs).unwrap();
        assert_eq!(out.len(), 6);
        // The product of the pairwise composed products equals the composed
        // product of the full products.
        let f = poly::product(&t, &fs, 1);
        let g = poly::product(&t, &gs, 1);
        let whole = composed_product(&t, ComposedKind::Mul, &f, &g).unwrap();
        assert_eq!(poly::product(&t, &out, 1), whole);
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FieldElement, EXHAUSTIVE_ROOT_THRESHOLD};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Distinct roots in GF(p^d) of the polynomial with the given coefficients
/// (low degree first), sorted canonically.
///
/// Small fields are scanned exhaustively. Otherwise the split part
/// gcd(f, T^q - T) is separated with Cantor-Zassenhaus using a fixed-seed
/// RNG, so the output is deterministic either way.
pub fn poly_roots(coeffs: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let first = coeffs.first().ok_or(Error::ZeroPolynomial)?;
    for c in coeffs {
        if !c.same_ctx(first) {
            return Err(Error::ContextMismatch);
        }
    }
    let ctx = first.ctx().clone();
    let f = Poly::new(coeffs.to_vec(), ctx.zero());
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut roots = if ctx.size() <= EXHAUSTIVE_ROOT_THRESHOLD {
        ctx.elements().filter(|x| f.eval(x).is_zero()).collect()
    } else {
        let f = f.monic();
        // T^q mod f through d successive p-th powers
        let mut tq = Poly::x(ctx.zero());
        for _ in 0..ctx.degree() {
            tq = tq.pow_mod(ctx.p() as u128, &f);
        }
        let split = f.gcd(&tq.sub(&Poly::x(ctx.zero())));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut out = Vec::new();
        equal_degree_split(&split, &mut rng, &mut out);
        out
    };
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn equal_degree_split(g: &Poly<FieldElement>, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElement>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c = g.monic();
            out.push(-&c.coeffs()[0]);
        }
        Some(_) => {
            let ctx = g.coeffs()[0].ctx().clone();
            let half = ctx.group_order() / 2;
            let one = Poly::constant(ctx.one());
            loop {
                let a = ctx.from_index(rng.gen_range(0..ctx.size()));
                let shifted = Poly::new(vec![a, ctx.one()], ctx.zero());
                let h = shifted.pow_mod(half, g).sub(&one);
                let d = g.gcd(&h);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && Some(dd) < g.degree() {
                    let (q, _) = g.div_rem(&d);
                    equal_degree_split(&d, rng, out);
                    equal_degree_split(&q, rng, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_create;

    fn ints(ctx: &std::sync::Arc<crate::ffield::FieldCtx>, c: &[i64]) -> Vec<FieldElement> {
        c.iter().map(|&x| ctx.from_int(x)).collect()
    }

    #[test]
    fn prime_field_examples() {
        let f5 = field_create(5, 1).unwrap();
        let r = poly_roots(&ints(&f5, &[-1, 0, 1])).unwrap();
        assert_eq!(r, ints(&f5, &[1, 4]));
        let r = poly_roots(&ints(&f5, &[1, 0, 1])).unwrap();
        assert_eq!(r, ints(&f5, &[2, 3]));
        assert!(poly_roots(&ints(&f5, &[-2, 0, 1])).unwrap().is_empty());
        assert_eq!(
            poly_roots(&ints(&f5, &[0, 0])).unwrap_err(),
            Error::ZeroPolynomial
        );
        assert_eq!(poly_roots(&[]).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn splitting_agrees_with_scan_in_larger_field() {
        let f = field_create(5, 4).unwrap();
        // product of (T - r) for a few chosen r, times an irreducible-over-GF(625)?-free factor T^2 - t
        let rs: Vec<FieldElement> = [3u128, 100, 257, 600]
            .iter()
            .map(|&k| f.from_index(k))
            .collect();
        let mut poly = Poly::constant(f.one());
        for r in &rs {
            poly = poly.mul(&Poly::new(vec![-r, f.one()], f.zero()));
        }
        let extra = Poly::new(vec![-f.generator_t(), f.zero(), f.one()], f.zero());
        poly = poly.mul(&extra);
        let found = poly_roots(poly.coeffs()).unwrap();
        let scanned: Vec<FieldElement> = f.elements().filter(|x| poly.eval(x).is_zero()).collect();
        assert_eq!(found, scanned);
        for r in &rs {
            assert!(found.contains(r));
        }
    }

    #[test]
    fn repeated_roots_are_collapsed() {
        let f = field_create(7, 3).unwrap();
        let r = f.from_index(200);
        let lin = Poly::new(vec![-&r, f.one()], f.zero());
        let sq = lin.mul(&lin).mul(&lin);
        assert_eq!(poly_roots(sq.coeffs()).unwrap(), vec![r]);
    }
}

//! `K⊗kC_p` for a comodule algebra `K` over `H` with trivial grouplike part.

use std::sync::Arc;

use super::loewy::loewy_filtration;
use super::ComodAlgebra;
use crate::error::{Error, Result};
use crate::pointed::PointedHopf;
use crate::tensoralg::{unit_in, BasisLabel, FinAlgebra, LinMap, Tensor};

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `(k⊗σᵃ)(k′⊗σᵇ) = q^{p·a·deg(k′)} kk′⊗σ^{a+b}` and
/// `λ(k⊗σᵃ) = Σ k₋₁σᵃ⊗k₀⊗σᵃ`, where `deg` is the `d`-weighted degree
/// (`deg y_l = d_l`) given per basis element of `K`.
///
/// Basis `k_i⊗σᵃ` has index `i·p + a`.
pub fn extend_by_cp(k: &ComodAlgebra, h: &PointedHopf, ddeg: &[u32]) -> Result<ComodAlgebra> {
    let p = h.datum.m();
    let mut problems = Vec::new();
    if !is_prime(p) {
        problems.push(format!("m = {p} is not prime"));
    }
    if !k.over.alg.same_structure(h.alg()) {
        problems.push("K is not a comodule algebra over H".into());
    }
    if k.over.assoc != k.over.unit(3) || k.assoc != unit_in(&k.algs(2)) {
        problems.push("H and K must have trivial associators".into());
    }
    if ddeg.len() != k.dim() {
        problems.push(format!("{} degrees for dim K = {}", ddeg.len(), k.dim()));
    }
    if problems.is_empty() {
        let l = loewy_filtration(k, &h.degrees())?;
        if l.level_dims[0] != 1 {
            problems.push(format!("K₀ has dimension {}, expected 1", l.level_dims[0]));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }
    let alg = &*k.alg;
    let d = alg.dim();
    let pu = p as usize;
    let labels = (0..d * pu)
        .map(|x| {
            let sigma = BasisLabel::Group { symbol: "σ".into(), exp: (x % pu) as u32 };
            BasisLabel::Tensor(vec![alg.label(x / pu).clone(), sigma])
        })
        .collect();
    let unit = alg.unit().as_vec().into_iter().map(|(i, c)| (i * p, c)).collect();
    let prod = FinAlgebra::from_fn(format!("{}⊗kC{p}", alg.name()), k.order(), labels, unit, |x, y| {
        let (i, a) = (x / pu, (x % pu) as u32);
        let (j, b) = (y / pu, (y % pu) as u32);
        let c = h.datum.q((p * a * ddeg[j]) as i64);
        let s = (a + b) % p;
        alg.product(i, j).iter().map(|(z, v)| (z * p + s, v * &c)).collect()
    });
    let big = h.alg();
    let images = (0..d * pu)
        .map(|x| {
            let (i, a) = (x / pu, (x % pu) as u32);
            let sig = h.chi_pow((p * a) as i64);
            let mut out = Tensor::zero(2);
            for (key, c) in k.coaction.image(i).terms() {
                let hs = big.mul(&big.basis(key[0] as usize), &sig);
                for (hk, hc) in hs.terms() {
                    out.add_term([hk[0], key[1] * p + a].into_iter().collect(), c * hc);
                }
            }
            out
        })
        .collect();
    Ok(ComodAlgebra::with_trivial_associator(k.over.clone(), Arc::new(prod), LinMap::new(2, images)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comodalg::verify_comodule_algebra;
    use crate::exactnum::CycNum;
    use crate::pointed::{build_bosonization, PointedDatum};
    use crate::tensoralg::mul_in;

    /// `k[y]/(y^N)` with `λ(y) = x⊗1 + g⊗y`, `g = χ^{-b}`.
    fn truncated_line(h: &PointedHopf) -> (ComodAlgebra, Vec<u32>) {
        let n = h.datum.nilpotency(0) as usize;
        let order = h.alg().order();
        let one = CycNum::one(order);
        let labels = (0..n).map(|r| BasisLabel::Named(format!("y^{r}"))).collect();
        let table = (0..n * n)
            .map(|ij| {
                let s = ij / n + ij % n;
                if s < n { vec![(s as u32, one.clone())] } else { vec![] }
            })
            .collect();
        let alg = Arc::new(FinAlgebra::new("k[y]", order, labels, table, vec![(0, one.clone())]));
        let g = h.chi_pow(-(h.datum.b(0) as i64));
        let big = h.alg();
        let mut images = vec![Tensor::monomial(&[0, 0], one.clone())];
        let ly = &h.x(0).tensor(&alg.unit()) + &g.tensor(&alg.basis(1));
        let mut cur = ly.clone();
        for _ in 1..n {
            images.push(cur.clone());
            cur = mul_in(&[big, &alg], &cur, &ly);
        }
        let k = ComodAlgebra::with_trivial_associator(h.hopf.base.clone(), alg, LinMap::new(2, images));
        let ddeg = (0..n as u32).map(|r| r * h.datum.d(0)).collect();
        (k, ddeg)
    }

    #[test]
    fn extension_of_truncated_line() {
        let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
        let (k, ddeg) = truncated_line(&h);
        let rep = verify_comodule_algebra(&k);
        assert!(rep.all_passed(), "{rep}");
        let e = extend_by_cp(&k, &h, &ddeg).unwrap();
        assert_eq!(e.dim(), 2 * k.dim());
        let rep = verify_comodule_algebra(&e);
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn regular_coaction_is_rejected() {
        let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
        let k = ComodAlgebra::regular(&h.hopf.base);
        let ddeg = vec![0; k.dim()];
        assert!(matches!(extend_by_cp(&k, &h, &ddeg), Err(Error::Precondition(_))));
    }
}

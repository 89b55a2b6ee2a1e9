//! `F_{n,k} = Σ_{μ(A)=k} QCx^{2ν(A)} QCx̄^{2ν(A^Q)}` and its closed forms.

use rug::Float;

use crate::asm::{group_by_stats, mu_max};
use crate::chebyshev::{binomial, cheb_u, AlphaParam};
use crate::delta::pmix_qcx;
use crate::error::{Error, Result};
use crate::hp::{self, Complex, Real};

pub const FNK_MAX_N: usize = 7;

#[derive(Clone, Debug)]
pub struct FnkValue {
    pub value: Real,
    pub imag_residue: Real,
    pub n: usize,
    pub k: u32,
}

impl FnkValue {
    /// `|Im| / |Re|`, or `|Im|` when the real part vanishes.
    pub fn imag_ratio(&self) -> Real {
        if self.value.is_zero() {
            self.imag_residue.clone()
        } else {
            Float::with_val(
                self.value.prec(),
                &self.imag_residue / Float::with_val(self.value.prec(), self.value.abs_ref()),
            )
        }
    }
}

fn check_point(x: &Real, y: &Real) -> Result<()> {
    if *x <= 0 || *y <= 0 {
        return Err(Error::domain("x and y must be positive"));
    }
    Ok(())
}

fn qcx(a: &AlphaParam, x: &Real, y: &Real) -> Complex {
    pmix_qcx(a, x, y).1
}

pub fn f_nk(a: &AlphaParam, n: usize, k: u32, x: &Real, y: &Real) -> Result<FnkValue> {
    check_point(x, y)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if n > FNK_MAX_N {
        return Err(Error::CapExceeded {
            what: "f_nk size",
            value: n,
            limit: FNK_MAX_N,
        });
    }
    if k > mu_max(n as u32) {
        return Err(Error::domain(format!(
            "k = {k} exceeds the largest μ = {} at n = {n}",
            mu_max(n as u32)
        )));
    }
    let prec = a.prec().max(x.prec()).max(y.prec());
    let wp = prec + 32;
    let aw = a.with_prec(wp);
    let q = qcx(&aw, &Float::with_val(wp, x), &Float::with_val(wp, y));
    let q2 = &q * &q;
    let q2bar = q2.conj();
    let top = (n * (n - 1) / 2) as u32 - k;
    let mut sum = Complex::zero(wp);
    for (nu, count) in group_by_stats(n)?.slice(k) {
        let t = &q2.powu(nu) * &q2bar.powu(top - nu);
        sum = &sum + &t.scale(&Float::with_val(wp, count));
    }
    Ok(FnkValue {
        value: Float::with_val(prec, &sum.re),
        imag_residue: Float::with_val(prec, sum.im.abs_ref()),
        n,
        k,
    })
}

/// `(Q̄^{2i} − Q^{2i}) / (Q̄² − Q²)`, by the geometric sum when the quotient
/// is ill-conditioned.
fn gaussian_factor(q2: &Complex, i: u32, prec: u32) -> Real {
    let q2bar = q2.conj();
    let den = &q2bar - q2;
    let threshold = Float::with_val(prec, q2.abs()) >> (prec as i32 / 4);
    if den.abs() > threshold {
        let num = &q2bar.powu(i) - &q2.powu(i);
        return (&num / &den).re;
    }
    let mut sum = Complex::zero(prec);
    for j in 0..i {
        sum = &sum + &(&q2.powu(j) * &q2bar.powu(i - 1 - j));
    }
    sum.re
}

/// `F_{n,0} = ∏_{i=1}^n (Q̄^{2i} − Q^{2i}) / (Q̄² − Q²)`.
pub fn f_n0_closed(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Result<Real> {
    check_point(x, y)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let prec = a.prec().max(x.prec()).max(y.prec());
    let wp = prec + 32;
    let aw = a.with_prec(wp);
    let q = qcx(&aw, &Float::with_val(wp, x), &Float::with_val(wp, y));
    let q2 = &q * &q;
    let mut prod = hp::one(wp);
    for i in 1..=n as u32 {
        prod *= gaussian_factor(&q2, i, wp);
    }
    Ok(Float::with_val(prec, prod))
}

/// Coefficients of `(Q̄^{2n} − Q^{2n}) / (Q̄² − Q²) = Σ_i c_i x^i y^{2n−2−i}`:
/// `c_i = Σ_{m≥0} C(2n, i+2+2m) U_{i+2+2m−n}`. At α = 0 the U values are
/// their limits `U_k = k`, so no special case is needed.
pub fn c_coefficients(a: &AlphaParam, n: usize) -> Result<Vec<Real>> {
    if n < 2 {
        return Err(Error::domain("c_coefficients needs n ≥ 2"));
    }
    if *a.rational() < 0 || *a.rational() >= 1 {
        return Err(Error::domain("c_coefficients needs α in [0, 1)"));
    }
    let n_i = n as i64;
    Ok((0..=2 * n_i - 2)
        .map(|i| {
            let mut c = Float::new(a.prec());
            let mut j = i + 2;
            while j <= 2 * n_i {
                c += cheb_u(a, j - n_i) * binomial(2 * n_i, j);
                j += 2;
            }
            c
        })
        .collect())
}

/// One of the worked positivity decompositions of `F_{n,k}`.
#[derive(Clone, Debug)]
pub struct DecompositionCheck {
    pub label: &'static str,
    pub n: usize,
    pub k: u32,
    pub direct: Real,
    pub decomposed: Real,
    pub rel_diff: Real,
}

/// Evaluates `F_{4,1}`, `F_{5,1}`, `F_{5,2}`, `F_{5,3}` by enumeration and by
/// their rearrangements into manifestly signed pieces.
///
/// The `F_{5,1}` rearrangement is built on `Z_{5,1}` with coefficients
/// `3, 14, 35, 48, …`; enumeration gives `3, 14, 34, 49, …`. The difference
/// is `x³(1−x)²(1+x)`, which `F51-corrected` adds back as
/// `−|Q|^{12}(Q²−Q̄²)²(Q²+Q̄²)`, itself non-negative.
pub fn decomposition_checks(a: &AlphaParam, x: &Real, y: &Real) -> Result<Vec<DecompositionCheck>> {
    check_point(x, y)?;
    let prec = a.prec().max(x.prec()).max(y.prec());
    let wp = prec + 32;
    let aw = a.with_prec(wp);
    let (xw, yw) = (Float::with_val(wp, x), Float::with_val(wp, y));
    let q = qcx(&aw, &xw, &yw);
    let q2 = &q * &q;
    let q4 = &q2 * &q2;
    let m = q.norm_sqr();
    let m_pow = |e: u32| hp::powi(&m, e);
    // Q^{2j} + Q̄^{2j} and Q² − Q̄² (the latter squared is real).
    let sym = |z: &Complex| Float::with_val(wp, &z.re * 2u32);
    let s2 = sym(&q2);
    let s4 = sym(&q4);
    let d2 = &q2 - &q2.conj();
    let d2_sq = (&d2 * &d2).re;
    let f0: Vec<Real> = (0..=5)
        .map(|n| f_n0_closed(&aw, n.max(1), &xw, &yw))
        .collect::<Result<_>>()?;

    let f41 = m_pow(2) * hp::powi(&s2, 3) * 2u32;
    let f51 = m_pow(2) * Float::with_val(wp, &f0[5] / &f0[3]) * 3u32
        + m_pow(4) * Float::with_val(wp, &f0[4] / &f0[2]) * 8u32
        + m_pow(6) * Float::with_val(wp, &f0[4] / &f0[3]) * 10u32
        + m_pow(8) * &f0[2] * 2u32;
    let f51_fixed = Float::with_val(wp, &f51 - m_pow(6) * &d2_sq * &s2);
    let f52 = m_pow(2) * &f0[4] * 2u32
        + m_pow(4) * Float::with_val(wp, s4.square_ref()) * 6u32
        + m_pow(6) * &s4 * 11u32;
    let inner = m_pow(4) * 3u32 + Float::with_val(wp, s4.square_ref()) - m_pow(2) * d2_sq;
    let f53 = m_pow(2) * &s2 * inner;

    [
        ("F41", 4, 1, f41),
        ("F51", 5, 1, f51),
        ("F52", 5, 2, f52),
        ("F53", 5, 3, f53),
        ("F51-corrected", 5, 1, f51_fixed),
    ]
    .into_iter()
    .map(|(label, n, k, decomposed)| {
        let direct = f_nk(&aw, n, k, &xw, &yw)?.value;
        let rel_diff = Float::with_val(prec, hp::rel_diff(&direct, &decomposed));
        Ok(DecompositionCheck {
            label,
            n,
            k,
            direct: Float::with_val(prec, direct),
            decomposed: Float::with_val(prec, decomposed),
            rel_diff,
        })
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> AlphaParam {
        AlphaParam::parse(s, 256).unwrap()
    }

    fn pt(x: f64, y: f64) -> (Real, Real) {
        (hp::real(256, x), hp::real(256, y))
    }

    #[test]
    fn two_by_two_permutations() {
        let a = alpha("0.3");
        let (x, y) = pt(1.2, 0.7);
        let f = f_nk(&a, 2, 0, &x, &y).unwrap();
        let c = a.cos_pi_alpha().to_f64();
        let expected = 2.0 * (1.44 + 0.49) * c + 4.0 * 1.2 * 0.7;
        assert!((f.value.to_f64() - expected).abs() < 1e-13);
        assert!(f.imag_ratio() < 1e-70);
        assert!(f_nk(&a, 2, 1, &x, &y).is_err());
    }

    #[test]
    fn single_matrix_slices() {
        let a = alpha("0.15");
        let (x, y) = pt(0.9, 0.4);
        let m = qcx(&a, &x, &y).norm_sqr();
        let f31 = f_nk(&a, 3, 1, &x, &y).unwrap().value;
        assert!(hp::rel_diff(&f31, &hp::powi(&m, 2)) < 1e-70);
        let f54 = f_nk(&a, 5, 4, &x, &y).unwrap().value;
        assert!(hp::rel_diff(&f54, &hp::powi(&m, 6)) < 1e-70);
    }

    #[test]
    fn product_formula_and_degenerate_locus() {
        let a = alpha("0.2");
        let (x, y) = pt(1.5, 0.4);
        for n in 1..=6 {
            let direct = f_nk(&a, n, 0, &x, &y).unwrap().value;
            let closed = f_n0_closed(&a, n, &x, &y).unwrap();
            assert!(hp::rel_diff(&direct, &closed) < 1e-60, "n = {n}");
        }
        let (t, _) = pt(0.8, 0.0);
        let direct = f_nk(&a, 4, 0, &t, &t).unwrap().value;
        let closed = f_n0_closed(&a, 4, &t, &t).unwrap();
        assert!(hp::rel_diff(&direct, &closed) < 1e-60);
        let z = alpha("0");
        let direct = f_nk(&z, 3, 0, &x, &y).unwrap().value;
        let closed = f_n0_closed(&z, 3, &x, &y).unwrap();
        assert!(hp::rel_diff(&direct, &closed) < 1e-60);
    }

    #[test]
    fn c_coefficients_small_cases() {
        let a = alpha("0.3");
        let c = c_coefficients(&a, 2).unwrap();
        let cos = a.cos_pi_alpha().clone();
        assert!(hp::rel_diff(&c[0], &(cos.clone() * 2u32)) < 1e-70);
        assert_eq!(c[1], 4);
        assert!(hp::rel_diff(&c[2], &c[0]) < 1e-70);
        // α = 0: the quotient degenerates to n(x+y)^{2n−2}.
        let c = c_coefficients(&alpha("0"), 4).unwrap();
        for (i, ci) in c.iter().enumerate() {
            assert_eq!(*ci, 4 * binomial(6, i as i64).to_f64() as i64);
        }
    }

    #[test]
    fn decompositions_hold() {
        for (s, x, y) in [("0.1", 1.0, 0.3), ("0.37", 0.6, 2.2), ("0", 1.0, 1.0)] {
            let (x, y) = pt(x, y);
            for c in decomposition_checks(&alpha(s), &x, &y).unwrap() {
                if c.label == "F51" {
                    continue;
                }
                assert!(
                    c.rel_diff < 1e-60,
                    "{} at α = {s}: {} vs {}",
                    c.label,
                    c.direct,
                    c.decomposed
                );
            }
        }
    }
}

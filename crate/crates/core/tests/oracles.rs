//! Independent reference computations checked against the library.

use std::collections::BTreeMap;

use rug::{Float, Integer};
use tplab_core::asm::{asm_count, enumerate_asm, z_nk_poly, Asm, IntPolynomial};
use tplab_core::chebyshev::{binomial, cheb_u, AlphaParam};
use tplab_core::conjecture::{band_matrix, c_coefficients, subsets, transform_factor, ChebCombo};

use tplab_core::delta::{
    a_sigma, a_sigma_minor, b_sigma, delta, delta_at_origin, t_kernel_at_origin, Route,
};
use tplab_core::hp::{self, Complex, Real};

const P: u32 = 256;

fn alpha(s: &str) -> AlphaParam {
    AlphaParam::parse(s, P).unwrap()
}

fn rel(a: &Real, b: &Real) -> f64 {
    hp::rel_diff(a, b).to_f64()
}

/// `|a − b| / (1 + |b|)`, for targets that may vanish.
fn gap(a: &Real, b: &Real) -> f64 {
    let d = Float::with_val(P, a - b).abs();
    (d / (hp::one(P) + Float::with_val(P, b.abs_ref()))).to_f64()
}

/// Leibniz expansion; fine for n ≤ 5.
fn leibniz(m: &[Vec<Real>]) -> Real {
    let n = m.len();
    let prec = m[0][0].prec();
    let mut total = Float::new(prec);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut term = hp::one(prec);
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
        }
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

// ---------------------------------------------------------------------------
// Alternating sign matrices

fn product_formula(n: u32) -> Integer {
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for k in 0..n {
        num *= Integer::from(Integer::factorial(3 * k + 1));
        den *= Integer::from(Integer::factorial(n + k));
    }
    num / den
}

#[test]
fn asm_counts_match_product_formula() {
    for n in 1..=8u32 {
        assert_eq!(
            Integer::from(asm_count(n as usize).unwrap()),
            product_formula(n),
            "n = {n}"
        );
    }
}

/// Every {−1,0,1} matrix, filtered by the definition.
fn brute_force_asms(n: usize) -> Vec<Vec<i8>> {
    let cells = n * n;
    let mut out = Vec::new();
    for code in 0..3usize.pow(cells as u32) {
        let mut c = code;
        let m: Vec<i8> = (0..cells)
            .map(|_| {
                let v = (c % 3) as i8 - 1;
                c /= 3;
                v
            })
            .collect();
        let line_ok = |vals: Vec<i8>| {
            let nz: Vec<i8> = vals.into_iter().filter(|&v| v != 0).collect();
            nz.iter().sum::<i8>() == 1
                && nz.first() == Some(&1)
                && nz.windows(2).all(|w| w[0] != w[1])
        };
        let ok = (0..n).all(|i| line_ok((0..n).map(|j| m[i * n + j]).collect()))
            && (0..n).all(|j| line_ok((0..n).map(|i| m[i * n + j]).collect()));
        if ok {
            out.push(m);
        }
    }
    out
}

/// `I(A) = Σ_{i<k, j>l} a_ij a_kl` straight from the definition.
fn inversion_number(m: &[i8], n: usize) -> i64 {
    let mut total = 0i64;
    for i in 0..n {
        for j in 0..n {
            for k in i + 1..n {
                for l in 0..j {
                    total += (m[i * n + j] * m[k * n + l]) as i64;
                }
            }
        }
    }
    total
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=3 {
        let mut brute = brute_force_asms(n);
        let mut listed: Vec<Vec<i8>> = enumerate_asm(n)
            .unwrap()
            .map(|a| a.entries().to_vec())
            .collect();
        brute.sort();
        listed.sort();
        assert_eq!(brute, listed, "n = {n}");
    }
}

#[test]
fn statistics_match_definitions() {
    for n in 1..=5 {
        for a in enumerate_asm(n).unwrap() {
            let s = a.stats();
            let mu = a.entries().iter().filter(|&&v| v < 0).count() as u32;
            let inv = inversion_number(a.entries(), n);
            assert_eq!(s.mu, mu);
            assert_eq!(s.inv as i64, inv, "{a:?}");
            assert_eq!(s.nu as i64, inv - mu as i64, "{a:?}");
        }
    }
}

#[test]
fn permutations_give_mahonian_numbers() {
    // Z_{n,0} counts permutations by inversions.
    for n in 1..=6usize {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        let mut p: Vec<usize> = (0..n).collect();
        permute(&mut p, 0, &mut |p| {
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            *counts.entry(inv).or_insert(0) += 1;
        });
        let z = z_nk_poly(n, 0).unwrap();
        for (d, c) in counts {
            assert_eq!(z.coeff(d), c, "n = {n}, degree {d}");
        }
        assert_eq!(z, IntPolynomial::q_factorial(n));
    }
}

#[test]
fn quarter_turn_on_explicit_matrix() {
    let a = Asm::new(4, vec![0, 1, 0, 0, 1, -1, 1, 0, 0, 1, -1, 1, 0, 0, 1, 0]).unwrap();
    let q = a.quarter_turn();
    let rotated: Vec<i8> = vec![0, 0, 1, 0, 0, 1, -1, 1, 1, -1, 1, 0, 0, 1, 0, 0];
    assert_eq!(q.entries(), &rotated[..]);
}

// ---------------------------------------------------------------------------
// Derivative determinant against symbolic differentiation of 1/D

/// Polynomial in x, y with real coefficients.
type Poly = BTreeMap<(u32, u32), Real>;

fn padd(a: &Poly, b: &Poly, sign: i32) -> Poly {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(|| Float::new(P));
        if sign > 0 {
            *e += v;
        } else {
            *e -= v;
        }
    }
    out
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((ax, ay), av) in a {
        for ((bx, by), bv) in b {
            let e = out
                .entry((ax + bx, ay + by))
                .or_insert_with(|| Float::new(P));
            *e += Float::with_val(P, av * bv);
        }
    }
    out
}

fn pscale(a: &Poly, k: i64) -> Poly {
    a.iter()
        .map(|(e, v)| (*e, Float::with_val(P, v * k)))
        .collect()
}

fn pdiff(a: &Poly, wrt_x: bool) -> Poly {
    a.iter()
        .filter_map(|(&(ex, ey), v)| {
            let (e, key) = if wrt_x {
                (ex, (ex.wrapping_sub(1), ey))
            } else {
                (ey, (ex, ey.wrapping_sub(1)))
            };
            (e > 0).then(|| (key, Float::with_val(P, v * e)))
        })
        .collect()
}

fn peval(a: &Poly, x: &Real, y: &Real) -> Real {
    a.iter().fold(Float::new(P), |acc, (&(ex, ey), v)| {
        acc + Float::with_val(P, v * hp::powi(x, ex)) * hp::powi(y, ey)
    })
}

/// `∂_x^i ∂_y^j (1/D) = P_ij / D^{i+j+1}` with `∂(P/D^m) = (P' D − m P D')/D^{m+1}`.
fn symbolic_delta(a: &AlphaParam, n: usize, x: &Real, y: &Real) -> Real {
    let c = a.cos_pi_alpha().clone();
    let mut d = Poly::new();
    d.insert((2, 0), hp::one(P));
    d.insert((1, 1), Float::with_val(P, &c * 2u32));
    d.insert((0, 2), hp::one(P));
    let (dx, dy) = (pdiff(&d, true), pdiff(&d, false));
    let mut p: Vec<Vec<Poly>> = vec![vec![Poly::new(); n]; n];
    p[0][0].insert((0, 0), hp::one(P));
    for i in 0..n {
        for j in 0..n {
            if i == 0 && j == 0 {
                continue;
            }
            let (src, wrt_x, dd) = if j > 0 {
                (&p[i][j - 1], false, &dy)
            } else {
                (&p[i - 1][j], true, &dx)
            };
            let m = (i + j) as i64; // src carries D^{-m}
            let next = padd(
                &pmul(&pdiff(src, wrt_x), &d),
                &pscale(&pmul(src, dd), m),
                -1,
            );
            p[i][j] = next;
        }
    }
    let dv = peval(&d, x, y);
    let m: Vec<Vec<Real>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| peval(&p[i][j], x, y) / hp::powi(&dv, (i + j + 1) as u32))
                .collect()
        })
        .collect();
    leibniz(&m)
}

#[test]
fn order_two_closed_form() {
    // Δ² = (4xy + 2cos(πα)(x²+y²)) / D⁴ by hand.
    for s in ["0", "1/5", "1/2", "0.45", "0.8"] {
        let a = alpha(s);
        for (xf, yf) in [(1.0, 0.3), (0.7, 2.5), (3.0, 3.0)] {
            let (x, y) = (hp::real(P, xf), hp::real(P, yf));
            let c = a.cos_pi_alpha();
            let d = Float::with_val(P, &x * &x)
                + Float::with_val(P, &y * &y)
                + Float::with_val(P, c * Float::with_val(P, &x * &y)) * 2u32;
            let num = Float::with_val(P, &x * &y) * 4u32
                + Float::with_val(P, c * 2u32)
                    * (Float::with_val(P, &x * &x) + Float::with_val(P, &y * &y));
            let expected = num / hp::powi(&d, 4);
            for route in [Route::Schur, Route::Lascoux, Route::Asm] {
                let got = delta(&a, 2, &x, &y, route).unwrap().value;
                assert!(rel(&got, &expected) < 1e-70, "{s} ({xf},{yf}) {route:?}");
            }
        }
    }
}

#[test]
fn routes_match_symbolic_differentiation() {
    for s in ["1/7", "0.3", "2/3"] {
        let a = alpha(s);
        for n in 3..=4 {
            for (xf, yf) in [(1.0, 0.4), (0.5, 1.75)] {
                let (x, y) = (hp::real(P, xf), hp::real(P, yf));
                let expected = symbolic_delta(&a, n, &x, &y);
                for route in [Route::Schur, Route::Lascoux, Route::Asm] {
                    let got = delta(&a, n, &x, &y, route).unwrap().value;
                    assert!(
                        rel(&got, &expected) < 1e-50,
                        "{s} n={n} {route:?}: {}",
                        rel(&got, &expected)
                    );
                }
            }
        }
    }
}

#[test]
fn origin_value_is_the_boundary_limit() {
    // Δ is smooth up to y = 0, so y = 1e-60 lands within O(1e-60) of the limit.
    let x = hp::one(P);
    let y = hp::parse_real(P, "1e-60").unwrap();
    for s in ["0.1", "0.4", "3/4"] {
        let a = alpha(s);
        for n in 1..=5 {
            let near = delta(&a, n, &x, &y, Route::Schur).unwrap().value;
            let origin = delta_at_origin(&a, n).unwrap();
            assert!(gap(&near, &origin) < 1e-45, "{s} n={n}");
        }
    }
}

#[test]
fn chebyshev_boundary_values_by_power_sum() {
    // T_r(1,0+) for even r: (2p)! Σ_k (−1)^k C(2p−k, k) (2cos πα)^{2p−2k}.
    let a = alpha("0.37");
    let two_c = Float::with_val(P, a.cos_pi_alpha() * 2u32);
    for p in 0..=5i64 {
        let mut s = Float::new(P);
        for k in 0..=p {
            let term = hp::powi(&two_c, (2 * p - 2 * k) as u32) * binomial(2 * p - k, k);
            if k % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        let expected = s * Integer::from(Integer::factorial(2 * p as u32));
        assert!(
            rel(&t_kernel_at_origin(&a, 2 * p as u32), &expected) < 1e-60,
            "p = {p}"
        );
    }
}

// ---------------------------------------------------------------------------
// c_i by polynomial long division

/// Coefficients (in x, at y = 1) of `(Q̄^{2n} − Q^{2n}) / (Q̄² − Q²)` by dividing
/// the expanded numerator by `(ω̄² − ω²)(x² − 1)`.
fn division_oracle(a: &AlphaParam, n: usize) -> Vec<Real> {
    let w = a.omega().clone();
    let wb = w.conj();
    // Q = ω x + ω̄ y at y = 1 as coefficient vectors in x.
    let pow = |lead: &Complex, tail: &Complex, e: usize| -> Vec<Complex> {
        let mut out = vec![Complex::one(P)];
        for _ in 0..e {
            let mut next = vec![Complex::zero(P); out.len() + 1];
            for (d, c) in out.iter().enumerate() {
                next[d + 1] = &next[d + 1] + &(c * lead);
                next[d] = &next[d] + &(c * tail);
            }
            out = next;
        }
        out
    };
    let qb = pow(&wb, &w, 2 * n);
    let q = pow(&w, &wb, 2 * n);
    let mut num: Vec<Complex> = qb.iter().zip(&q).map(|(a, b)| a - b).collect();
    let lead = &(&wb * &wb) - &(&w * &w);
    let mut quot = vec![Complex::zero(P); 2 * n - 1];
    for d in (2..=2 * n).rev() {
        let c = &num[d] / &lead;
        num[d - 2] = &num[d - 2] + &(&c * &lead);
        quot[d - 2] = c;
    }
    for r in &num[..2] {
        assert!(r.abs() < 1e-60, "division leaves a remainder");
    }
    quot.into_iter()
        .map(|c| {
            assert!(c.im.clone().abs() < 1e-60);
            c.re
        })
        .collect()
}

#[test]
fn c_coefficients_match_division() {
    for s in ["1/9", "0.2", "1/3", "0.61"] {
        let a = alpha(s);
        for n in 2..=6 {
            let lib = c_coefficients(&a, n).unwrap();
            let oracle = division_oracle(&a, n);
            assert_eq!(lib.len(), oracle.len());
            for (i, (l, o)) in lib.iter().zip(&oracle).enumerate() {
                assert!(gap(l, o) < 1e-60, "{s} n={n} i={i}");
            }
        }
    }
    // α = 0: U_k = k collapses the sum to n·C(2n−2, i).
    let a = alpha("0");
    for n in 2..=6i64 {
        let lib = c_coefficients(&a, n as usize).unwrap();
        for (i, l) in lib.iter().enumerate() {
            assert_eq!(*l, binomial(2 * n - 2, i as i64) * n, "n={n} i={i}");
        }
    }
}

// ---------------------------------------------------------------------------
// Band matrices

fn combo(terms: &[(i64, i64)]) -> ChebCombo {
    ChebCombo::from_terms(terms)
}

/// Hand-expanded band matrices for n ≤ 4.
fn expanded(n: usize) -> Vec<Vec<ChebCombo>> {
    let z = ChebCombo::zero;
    match n {
        1 => vec![vec![combo(&[(1, 1)])]],
        2 => vec![
            vec![combo(&[(1, 2)]), combo(&[(2, 1)]), z()],
            vec![z(), combo(&[(2, 1)]), combo(&[(1, 2)])],
        ],
        3 => vec![
            vec![
                combo(&[(1, 3)]),
                combo(&[(2, 3)]),
                combo(&[(3, 1)]),
                z(),
                z(),
            ],
            vec![
                z(),
                combo(&[(2, 3)]),
                combo(&[(3, 1), (1, 9)]),
                combo(&[(2, 3)]),
                z(),
            ],
            vec![
                z(),
                z(),
                combo(&[(3, 1)]),
                combo(&[(2, 3)]),
                combo(&[(1, 3)]),
            ],
        ],
        4 => vec![
            vec![
                combo(&[(1, 4)]),
                combo(&[(2, 6)]),
                combo(&[(3, 4)]),
                combo(&[(4, 1)]),
                z(),
                z(),
                z(),
            ],
            vec![
                z(),
                combo(&[(2, 6)]),
                combo(&[(3, 4), (1, 24)]),
                combo(&[(4, 1), (2, 16)]),
                combo(&[(3, 4)]),
                z(),
                z(),
            ],
            vec![
                z(),
                z(),
                combo(&[(3, 4)]),
                combo(&[(4, 1), (2, 16)]),
                combo(&[(3, 4), (1, 24)]),
                combo(&[(2, 6)]),
                z(),
            ],
            vec![
                z(),
                z(),
                z(),
                combo(&[(4, 1)]),
                combo(&[(3, 4)]),
                combo(&[(2, 6)]),
                combo(&[(1, 4)]),
            ],
        ],
        _ => unreachable!(),
    }
}

#[test]
fn band_matrices_match_hand_expansion() {
    for n in 1..=4 {
        let b = band_matrix(n).unwrap();
        assert_eq!(b.entries(), &expanded(n)[..], "n = {n}");
    }
    // n = 5: columns 1–5 and the last one.
    let b = band_matrix(5).unwrap();
    let known: [[&[(i64, i64)]; 5]; 5] = [
        [&[(1, 5)], &[(2, 10)], &[(3, 10)], &[(4, 5)], &[(5, 1)]],
        [
            &[],
            &[(2, 10)],
            &[(3, 10), (1, 50)],
            &[(4, 5), (2, 50)],
            &[(5, 1), (3, 25)],
        ],
        [
            &[],
            &[],
            &[(3, 10)],
            &[(4, 5), (2, 50)],
            &[(5, 1), (3, 25), (1, 100)],
        ],
        [&[], &[], &[], &[(4, 5)], &[(5, 1), (3, 25)]],
        [&[], &[], &[], &[], &[(5, 1)]],
    ];
    for (i, row) in known.iter().enumerate() {
        for (k, terms) in row.iter().enumerate() {
            assert_eq!(
                b.entry(i + 1, k + 1),
                &combo(terms),
                "({}, {})",
                i + 1,
                k + 1
            );
        }
        let last = if i == 4 {
            combo(&[(1, 5)])
        } else {
            ChebCombo::zero()
        };
        assert_eq!(b.entry(i + 1, 9), &last);
    }
}

#[test]
fn band_minors_are_scaled_lascoux_minors() {
    for s in ["0.13", "0.4", "0.77"] {
        let a = alpha(s);
        for n in 1..=4usize {
            let m = band_matrix(n).unwrap().evaluate(&a);
            let factor = Float::with_val(P, transform_factor(n));
            let expected_factor: Integer = (1..=n as i64).map(|i| binomial(n as i64, i)).product();
            assert_eq!(transform_factor(n), expected_factor);
            for cols in subsets(2 * n - 1, n) {
                let sub: Vec<Vec<Real>> = m
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                    .collect();
                let band_minor = leibniz(&sub);
                // Columns of the reversed transpose map back to rows 2n − c of B_n(1).
                let mut sigma: Vec<usize> = cols.iter().map(|&c| 2 * n - 1 - c).collect();
                sigma.sort();
                let b = b_sigma(&a, n, &sigma).unwrap();
                let expected = Float::with_val(P, &b * &factor);
                let scale = Float::with_val(P, factor.clone())
                    * (hp::one(P) + Float::with_val(P, b.abs_ref()));
                let gap = Float::with_val(P, &band_minor - &expected).abs() / scale;
                assert!(gap < 1e-60, "{s} n={n} cols={cols:?}");
            }
        }
    }
}

#[test]
fn a_sigma_product_formula() {
    for n in 1..=5usize {
        for cols in subsets(2 * n - 1, n) {
            let sigma: Vec<usize> = cols.iter().map(|c| c + 1).collect();
            let direct = a_sigma_minor(n, &sigma).unwrap();
            assert_eq!(a_sigma(n, &sigma).unwrap(), direct, "σ = {sigma:?}");
            assert!(direct > 0);
            let tilde: Vec<usize> = sigma.iter().rev().map(|s| 2 * n - s).collect();
            assert_eq!(a_sigma_minor(n, &tilde).unwrap(), direct);
        }
    }
}

#[test]
fn reversed_identity_minors() {
    let a = alpha("0.29");
    for n in 1..=6usize {
        let id_tilde: Vec<usize> = (n..=2 * n - 1).collect();
        assert_eq!(a_sigma(n, &id_tilde).unwrap(), 1);
        assert_eq!(a_sigma_minor(n, &id_tilde).unwrap(), 1);
        let prod = (1..=n as i64).fold(hp::one(P), |acc, k| acc * cheb_u(&a, k));
        assert!(
            rel(&b_sigma(&a, n, &id_tilde).unwrap(), &prod) < 1e-60,
            "n = {n}"
        );
    }
}

use proptest::prelude::*;
use rug::{Float, Integer};
use tplab_core::asm::{asm_count, enumerate_asm};
use tplab_core::chebyshev::{cheb_u, cheb_u_recurrence, AlphaParam};
use tplab_core::conjecture::{f_nk, ChebCombo};
use tplab_core::delta::{delta, Route};
use tplab_core::hp::{self, Real};
use tplab_core::kernel::{det_kernel_matrix, eval_kernel, PointTuple};

const P: u32 = 192;

fn alpha_of(num: i64, den: u64) -> AlphaParam {
    AlphaParam::from_ratio(num, den, P).unwrap()
}

fn rel(a: &Real, b: &Real) -> f64 {
    hp::rel_diff(a, b).to_f64()
}

fn small_alpha() -> impl Strategy<Value = AlphaParam> {
    (0i64..=95).prop_map(|k| alpha_of(k, 100))
}

fn positive() -> impl Strategy<Value = f64> {
    (-1.5f64..1.5).prop_map(|e| 10f64.powf(e))
}

fn combo() -> impl Strategy<Value = ChebCombo> {
    prop::collection::vec((-8i64..=8, -20i64..=20), 0..5).prop_map(|t| ChebCombo::from_terms(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_is_homogeneous(a in small_alpha(), n in 1usize..=4, x in positive(), y in positive(), t in positive()) {
        let (x, y, t) = (hp::real(P, x), hp::real(P, y), hp::real(P, t));
        prop_assume!(x != y);
        let base = delta(&a, n, &x, &y, Route::Lascoux).unwrap().value;
        let scaled = delta(&a, n, &Float::with_val(P, &x * &t), &Float::with_val(P, &y * &t), Route::Lascoux).unwrap().value;
        let expected = base * hp::powi_signed(&t, -((n * (n + 1)) as i32));
        prop_assert!(rel(&scaled, &expected) < 1e-40);
    }

    #[test]
    fn delta_is_symmetric(a in small_alpha(), n in 1usize..=4, x in positive(), y in positive()) {
        let (x, y) = (hp::real(P, x), hp::real(P, y));
        let d1 = delta(&a, n, &x, &y, Route::Schur).unwrap().value;
        let d2 = delta(&a, n, &y, &x, Route::Schur).unwrap().value;
        prop_assert!(rel(&d1, &d2) < 1e-40);
    }

    #[test]
    fn exact_routes_agree(a in small_alpha(), n in 1usize..=5, x in positive(), y in positive()) {
        let (x, y) = (hp::real(P, x), hp::real(P, y));
        prop_assume!(x != y);
        let s = delta(&a, n, &x, &y, Route::Schur).unwrap().value;
        let l = delta(&a, n, &x, &y, Route::Lascoux).unwrap().value;
        let m = delta(&a, n, &x, &y, Route::Asm).unwrap().value;
        let scale: Real = Float::with_val(P, s.abs_ref()) + Float::with_val(P, l.abs_ref()) + 1e-300;
        let gap = |u: &Real, v: &Real| -> f64 {
            let d: Real = Float::with_val(P, u - v).abs();
            (d / &scale).to_f64()
        };
        prop_assert!(gap(&s, &l) < 1e-30, "schur/lascoux {}", gap(&s, &l));
        prop_assert!(gap(&l, &m) < 1e-30, "lascoux/asm {}", gap(&l, &m));
    }

    #[test]
    fn kernel_determinant_scales(a in small_alpha(), n in 1usize..=4, seed in prop::collection::vec(positive(), 8), t in positive()) {
        let mut xs: Vec<f64> = seed[..n].to_vec();
        let mut ys: Vec<f64> = seed[4..4 + n].to_vec();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        prop_assume!(xs.windows(2).all(|w| w[0] < w[1]) && ys.windows(2).all(|w| w[0] < w[1]));
        let x = PointTuple::from_f64(P, &xs).unwrap();
        let y = PointTuple::from_f64(P, &ys).unwrap();
        let t = hp::real(P, t);
        let stretch = |p: &PointTuple| PointTuple::new(p.values().iter().map(|v| Float::with_val(P, v * &t)).collect()).unwrap();
        let base = det_kernel_matrix(&a, &x, &y).unwrap();
        let scaled = det_kernel_matrix(&a, &stretch(&x), &stretch(&y)).unwrap();
        let expected = base * hp::powi_signed(&t, -2 * n as i32);
        prop_assert!(rel(&scaled, &expected) < 1e-30);
    }

    #[test]
    fn kernel_is_symmetric(a in small_alpha(), x in positive(), y in positive()) {
        let (x, y) = (hp::real(P, x), hp::real(P, y));
        prop_assert_eq!(eval_kernel(&a, &x, &y).unwrap(), eval_kernel(&a, &y, &x).unwrap());
    }

    #[test]
    fn chebyshev_odd_and_recurrent(a in small_alpha(), k in 0i64..40) {
        prop_assert_eq!(cheb_u(&a, -k), -cheb_u(&a, k));
        let r = cheb_u_recurrence(&a, k as u32);
        let direct = cheb_u(&a, k);
        let gap = Float::with_val(P, &r - &direct).abs() / (hp::one(P) + Float::with_val(P, direct.abs_ref()));
        prop_assert!(gap < 1e-40);
        let two_c = Float::with_val(P, a.cos_pi_alpha() * 2u32);
        let rec = two_c * cheb_u(&a, k) - cheb_u(&a, k - 1);
        let next = cheb_u(&a, k + 1);
        let gap = Float::with_val(P, &rec - &next).abs() / (hp::one(P) + Float::with_val(P, next.abs_ref()));
        prop_assert!(gap < 1e-40);
    }

    #[test]
    fn combo_algebra(u in combo(), v in combo(), w in combo(), k in -9i64..=9, a in small_alpha()) {
        prop_assert_eq!(u.add(&v), v.add(&u));
        prop_assert_eq!(u.add(&v).add(&w), u.add(&v.add(&w)));
        let k = Integer::from(k);
        prop_assert_eq!(u.add(&v).scale(&k), u.scale(&k).add(&v.scale(&k)));
        prop_assert!(u.add(&u.scale(&Integer::from(-1))).is_zero());
        let lhs = u.add(&v).eval(&a);
        let rhs = u.eval(&a) + v.eval(&a);
        let gap = Float::with_val(P, &lhs - &rhs).abs() / (hp::one(P) + Float::with_val(P, rhs.abs_ref()));
        prop_assert!(gap < 1e-40);
    }

    #[test]
    fn point_tuples_validate(vals in prop::collection::vec(-3.0f64..3.0, 0..6)) {
        let ok = !vals.is_empty() && vals[0] > 0.0 && vals.windows(2).all(|w| w[0] < w[1]);
        prop_assert_eq!(PointTuple::from_f64(P, &vals).is_ok(), ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fnk_is_real(a in small_alpha(), n in 2usize..=5, x in positive(), y in positive(), pick in 0u32..8) {
        let (x, y) = (hp::real(P, x), hp::real(P, y));
        let kmax = tplab_core::asm::mu_max(n as u32);
        let k = pick % (kmax + 1);
        let f = f_nk(&a, n, k, &x, &y).unwrap();
        prop_assert!(f.imag_ratio() < 1e-40);
    }

    #[test]
    fn quarter_turn_exchanges_inversions(n in 1usize..=6, pick in any::<prop::sample::Index>()) {
        let total = asm_count(n).unwrap() as usize;
        let a = enumerate_asm(n).unwrap().nth(pick.index(total)).unwrap();
        let q = a.quarter_turn();
        prop_assert_eq!(q.quarter_turn().quarter_turn().quarter_turn(), a.clone());
        let (s, t) = (a.stats(), q.stats());
        prop_assert_eq!(s.mu, t.mu);
        prop_assert_eq!(s.nu + t.nu + s.mu, (n * (n - 1) / 2) as u32);
    }
}

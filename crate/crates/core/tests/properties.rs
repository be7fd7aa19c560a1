use mf_core::abelian::{
    abel_jacobi_invert, cocycle_residual, elementary_divisors, genus1_periods,
    riemann_relations_check, theta_sum, PeriodData, SemicharPhase, SiegelTau, ThetaChar,
};
use mf_core::continuation::{continue_along, germ_builtin, BuiltinKind, PathPoly};
use mf_core::difference::{
    solve_polynomial_difference, solve_polynomial_difference_exact, telescoping_residual,
    RationalPoly,
};
use mf_core::elliptic::{eisenstein, Lattice, Weierstrass};
use mf_core::foundations::{cross_ratio, ExtComplex, MoebiusMap, Poly, ToleranceCtx};
use mf_core::normal_forms::{a_from_lambda, j_of_lambda, lambda_from_a, lambda_orbit, Branch};
use mf_core::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn generic_lambda() -> impl Strategy<Value = Complex64> {
    complex(3.0).prop_filter("away from 0 and 1", |l| {
        l.norm() > 0.05 && (l - 1.0).norm() > 0.05
    })
}

fn upper_tau() -> impl Strategy<Value = Complex64> {
    (-0.5..0.5f64, 0.8..1.8f64).prop_map(|(a, b)| c(a, b))
}

/// Products of elementary row operations, so the determinant is ±1.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 1..8).prop_map(move |ops| {
        let mut u: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for (i, j, k, swap) in ops {
            if swap {
                u.swap(i, j);
            } else if i != j {
                for col in 0..n {
                    u[i][col] += k * u[j][col];
                }
            }
        }
        u
    })
}

fn congruence(e: &[Vec<i64>], u: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = e.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .flat_map(|k| (0..n).map(move |l| (k, l)))
                        .map(|(k, l)| u[k][i] * e[k][l] * u[l][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

fn block(ts: &[i64]) -> Vec<Vec<i64>> {
    let n = ts.len();
    let mut e = vec![vec![0; 2 * n]; 2 * n];
    for (i, &t) in ts.iter().enumerate() {
        e[i][n + i] = t;
        e[n + i][i] = -t;
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn j_is_constant_on_lambda_orbit(l in generic_lambda()) {
        let j = j_of_lambda(l).unwrap();
        for m in lambda_orbit(l).unwrap() {
            prop_assert!((j_of_lambda(m).unwrap() - j).norm() <= 1e-8 * (1.0 + j.norm()));
        }
    }

    #[test]
    fn lambda_a_round_trip(l in generic_lambda(), minus in any::<bool>()) {
        let br = if minus { Branch::Minus } else { Branch::Plus };
        let a = a_from_lambda(l, br).unwrap();
        prop_assert!((lambda_from_a(a).unwrap() - l).norm() <= 1e-9 * (1.0 + l.norm()));
    }

    #[test]
    fn cross_ratio_is_moebius_invariant(
        pts in prop::array::uniform4(complex(2.0)),
        m in prop::array::uniform4(complex(2.0)),
    ) {
        let tol = ToleranceCtx::default();
        let sep = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| (pts[i] - pts[j]).norm()).fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 0.1);
        let Ok(g) = MoebiusMap::new(m[0], m[1], m[2], m[3]) else { return Ok(()) };
        prop_assume!(g.det().norm() > 0.1);
        let e: Vec<ExtComplex> = pts.iter().map(|&p| p.into()).collect();
        let ge: Vec<ExtComplex> = e.iter().map(|&p| g.apply(p)).collect();
        prop_assume!(ge.iter().all(|p| p.as_finite().is_some_and(|z| z.norm() < 1e3)));
        let before = cross_ratio(e[0], e[1], e[2], e[3], &tol).unwrap();
        let after = cross_ratio(ge[0], ge[1], ge[2], ge[3], &tol).unwrap();
        prop_assert!(before.approx_eq(&after, &tol.scaled(1e4)), "{before:?} vs {after:?}");
    }

    #[test]
    fn elementary_divisors_survive_unimodular_congruence(
        ts in prop::sample::select(vec![vec![1, 1], vec![1, 2], vec![2, 3], vec![1, 4], vec![3, 3]]),
        u in unimodular(4),
    ) {
        let e = block(&ts);
        let want = elementary_divisors(&e).unwrap();
        prop_assert_eq!(elementary_divisors(&congruence(&e, &u)).unwrap(), want);
    }

    #[test]
    fn difference_solver_is_linear(
        f1 in prop::collection::vec(-20i64..20, 0..6),
        f2 in prop::collection::vec(-20i64..20, 0..6),
        alpha in -5i64..5,
        beta in -5i64..5,
    ) {
        let (p1, p2) = (RationalPoly::from_integers(&f1), RationalPoly::from_integers(&f2));
        let (a, b) = (BigRational::from_integer(alpha.into()), BigRational::from_integer(beta.into()));
        let combined = p1.scale(&a).add(&p2.scale(&b));
        let lhs = solve_polynomial_difference_exact(&combined).g;
        let rhs = solve_polynomial_difference_exact(&p1).g.scale(&a).add(&solve_polynomial_difference_exact(&p2).g.scale(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn telescoping_sums(coeffs in prop::collection::vec(complex(2.0), 1..5), z in complex(1.0)) {
        let f = Poly::new(coeffs);
        let g = solve_polynomial_difference(&f).g;
        for m in 1..=5 {
            let scale: f64 = (0..=m).map(|k| 1.0 + g.eval(z + k as f64).norm()).sum();
            prop_assert!(telescoping_residual(&g, &f, z, m) <= 1e-12 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theta_radius_doubling_within_tail_bound(tau in upper_tau(), z in complex(0.5), r in 2usize..5) {
        let t = SiegelTau::genus1(tau).unwrap();
        let ch = ThetaChar::zero(1);
        let small = theta_sum(&ch, &[z], &t, r).unwrap();
        let big = theta_sum(&ch, &[z], &t, 2 * r).unwrap();
        prop_assert!((small.value - big.value).norm() <= small.tail_bound + 1e-14 * big.value.norm());
    }

    #[test]
    fn principal_data_satisfies_riemann_relations(tau in upper_tau(), tau2 in upper_tau()) {
        let tol = ToleranceCtx::default();
        for t in [SiegelTau::genus1(tau).unwrap(), SiegelTau::diagonal(&[tau, tau2]).unwrap()] {
            let p = PeriodData::principal(&t).unwrap();
            let r = riemann_relations_check(&p, &tol);
            prop_assert!(r.first_ok && r.second_ok);
            let neg = riemann_relations_check(&p.with_h(-p.h().clone()).unwrap(), &tol);
            prop_assert!(!neg.second_ok);
        }
    }

    #[test]
    fn cocycle_identity(tau in upper_tau(), tau2 in upper_tau(), zs in prop::collection::vec(complex(1.0), 5)) {
        let tol = ToleranceCtx::default();
        let g1 = PeriodData::principal(&SiegelTau::genus1(tau).unwrap()).unwrap();
        let pts1: Vec<Vec<Complex64>> = zs.iter().map(|&z| vec![z]).collect();
        prop_assert!(cocycle_residual(&g1, &pts1, SemicharPhase::Pi, &tol).unwrap() < 1e-8);
        let g2 = PeriodData::principal(&SiegelTau::diagonal(&[tau, tau2]).unwrap()).unwrap();
        let pts2: Vec<Vec<Complex64>> = zs.windows(2).map(|w| w.to_vec()).collect();
        prop_assert!(cocycle_residual(&g2, &pts2, SemicharPhase::Pi, &tol).unwrap() < 1e-8);
    }

    #[test]
    fn abel_jacobi_inverts_wp(tau in upper_tau(), s in -0.45..0.45f64, t in -0.45..0.45f64) {
        let l = Lattice::from_tau(tau).unwrap();
        let z = l.point(s, t);
        prop_assume!(l.distance_to_lattice(z) > 0.05);
        let wp = Weierstrass::new(&l, 60, &ToleranceCtx::default()).unwrap();
        let v = wp.eval(z).unwrap();
        let r = abel_jacobi_invert(wp.g2(), wp.g3(), v.p, v.dp, &ToleranceCtx::default()).unwrap();
        let d = l.distance_to_lattice(r.z - z).min(l.distance_to_lattice(r.z + z));
        prop_assert!(d < 1e-6, "{z} -> {}", r.z);
    }

    #[test]
    fn periods_recover_the_lattice(tau in upper_tau(), k in complex(2.0)) {
        prop_assume!(k.norm() > 0.3);
        let l = Lattice::from_tau(tau).unwrap().scaled(k).unwrap();
        let inv = eisenstein(&l, 60, &ToleranceCtx::default()).unwrap();
        let back = genus1_periods(inv.g2, inv.g3).unwrap();
        prop_assert!(back.same_lattice(&l, 1e-7));
        prop_assert!(back.tau().im > 0.0);
    }

    #[test]
    fn sqrt_continuation_in_slit_plane(r in 0.5..3.0f64, theta in -2.5..2.5f64) {
        let g = germ_builtin(BuiltinKind::Sqrt, c(1.0, 0.0), 24).unwrap();
        let end = Complex64::from_polar(r, theta);
        let n = 24;
        let path = PathPoly::new(
            (0..=n)
                .map(|k| {
                    let u = k as f64 / n as f64;
                    Complex64::from_polar(1.0 + (r - 1.0) * u, theta * u)
                })
                .collect(),
        )
        .unwrap();
        let out = continue_along(&g, &path, 0.5, &ToleranceCtx::default()).unwrap();
        prop_assert!((out.value() - end.sqrt()).norm() < 1e-9);
    }
}

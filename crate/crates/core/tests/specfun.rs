mod common;

use std::f64::consts::PI;

use common::{assert_close, integrate};
use ctinv_core::specfun::{
    bessel_jy, bessel_jy_asymptotic, bessel_jy_recurrence, cross_wronskian, hankel_threshold,
    interlacing_check, positive_zeros, riccati, ChainMember, Order, ZeroKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (nu, x, [J, Y, J', Y']) evaluated with 40-digit arithmetic (mpmath).
const ORACLE: &[(f64, f64, [f64; 4])] = &[
    (
        1.7,
        5.0,
        [
            -8.50897673452504059e-2,
            3.56264127687647863e-1,
            -3.28709395762686426e-1,
            -1.20068354258571755e-1,
        ],
    ),
    (
        0.1,
        0.05,
        [
            7.26451350189826349e-1,
            -2.14039238590322153,
            1.43638797372154962,
            1.32947121134421156e+1,
        ],
    ),
    (
        0.1,
        3.0,
        [
            -1.98601726336507112e-1,
            4.12675904392332409e-1,
            -3.85112207317440226e-1,
            -2.68275927529778685e-1,
        ],
    ),
    (
        0.5,
        1.9,
        [
            5.47762303682864771e-1,
            1.87134969346302973e-1,
            -3.31282943999688446e-1,
            4.98516259118048197e-1,
        ],
    ),
    (
        2.3,
        30.0,
        [
            1.24133146938055037e-1,
            7.66236852930996329e-2,
            -7.84896955922813604e-2,
            1.22501440752916455e-1,
        ],
    ),
    (
        5.5,
        100.0,
        [
            -7.41246640272193527e-2,
            2.96867191991011545e-2,
            -2.92704241975026849e-2,
            -7.41622904040054189e-2,
        ],
    ),
    (
        0.0,
        0.001,
        [
            9.99999750000015625e-1,
            -4.47141661137592326,
            -4.99999937500002615e-4,
            6.36622167231139415e+2,
        ],
    ),
    (
        10.2,
        7.5,
        [
            3.25542581793152829e-2,
            -1.45866286186115931,
            3.19753872869555593e-2,
            1.17469506372798324,
        ],
    ),
    (
        0.35,
        700.0,
        [
            1.00466126718835899e-2,
            2.84345260760104582e-2,
            -2.84417059254300014e-2,
            1.00263036084805456e-2,
        ],
    ),
    (
        3.25,
        1.0,
        [
            1.19581462393213173e-2,
            -8.67775284172188786,
            3.74410685211416554e-2,
            2.60672036762808298e+1,
        ],
    ),
    (
        0.75,
        24.0,
        [
            -1.6267054201693723e-1,
            -8.44384486082294725e-3,
            1.18323597131974016e-2,
            -1.62450514464641487e-1,
        ],
    ),
    (
        0.75,
        26.0,
        [
            7.23450652900876681e-2,
            -1.38770372891116391e-1,
            1.37346472791020672e-1,
            7.49982682861091812e-2,
        ],
    ),
    (
        7.0,
        48.0,
        [
            6.53095136086923434e-2,
            -9.56036723214741411e-2,
            9.38925305874142131e-2,
            6.56327227039855455e-2,
        ],
    ),
    (
        7.0,
        50.0,
        [
            6.04912012595371084e-2,
            9.59120278245424836e-2,
            -9.55897949973040755e-2,
            5.89207074023175115e-2,
        ],
    ),
    (
        0.05,
        999.0,
        [
            1.58785305459337425e-2,
            -1.96247093756938339e-2,
            1.9616764598597638e-2,
            1.58883546892635168e-2,
        ],
    ),
    (
        12.4,
        0.3,
        [
            4.5804298119624667e-20,
            -5.60596242762325206e+17,
            1.89273152779717567e-18,
            2.3163933700721008e+19,
        ],
    ),
];

#[test]
fn bessel_matches_high_precision_oracle() {
    for &(nu, x, [j, y, jp, yp]) in ORACLE {
        let b = bessel_jy(nu, x).unwrap();
        // Relative to the local envelope: pointwise relative error is meaningless at zeros.
        let env = j.hypot(y);
        let envp = jp.hypot(yp);
        assert_close(b.j, j, 1e-10 * env, &format!("J_{nu}({x})"));
        assert_close(b.y, y, 1e-10 * env, &format!("Y_{nu}({x})"));
        assert_close(b.j_prime, jp, 1e-10 * envp, &format!("J'_{nu}({x})"));
        assert_close(b.y_prime, yp, 1e-10 * envp, &format!("Y'_{nu}({x})"));
    }
}

#[test]
fn closed_form_examples() {
    let b = bessel_jy(0.5, PI / 2.0).unwrap();
    assert_close(b.j, 2.0 / PI, 1e-15, "J_1/2(pi/2)");
    let b = bessel_jy(0.5, PI).unwrap();
    assert_close(b.j, 0.0, 1e-15, "J_1/2(pi)");
    // Riccati order -0.4 at x = 2, 40-digit oracle.
    let p = riccati(Order::new(-0.4).unwrap(), 2.0).unwrap();
    assert_close(p.u, 0.531819726634034443, 1e-10, "u");
    assert_close(p.u_prime, -0.847652411702064777, 1e-10, "u'");
    assert_close(p.v, 0.833019954725344411, 1e-10, "v");
    assert_close(p.v_prime, 0.552609487130500967, 1e-10, "v'");
}

/// Tiny arguments, where `J` and `Y` differ by many orders of magnitude; each
/// value is checked to relative precision.
const SMALL_ARGUMENT_ORACLE: &[(f64, f64, [f64; 4])] = &[
    (
        1.8,
        1e-10,
        [
            1.7129505920649845e-19,
            -1.03236384328213429e+18,
            3.08331106571697217e-9,
            1.85825491790784176e+28,
        ],
    ),
    (
        2.9,
        1e-6,
        [
            1.00644968816150528e-19,
            -1.09058635528080537e+18,
            2.91870409566823618e-13,
            3.16270043031404849e+24,
        ],
    ),
    (
        0.6,
        1e-25,
        [
            7.38380102717209417e-16,
            -718486962230841.45,
            4430280616.30325634,
            4.31092177338504854e+39,
        ],
    ),
];

#[test]
fn small_arguments_keep_relative_precision() {
    for &(nu, x, want) in SMALL_ARGUMENT_ORACLE {
        let b = bessel_jy(nu, x).unwrap();
        for (got, exp) in [b.j, b.y, b.j_prime, b.y_prime].into_iter().zip(want) {
            assert_close(
                got,
                exp,
                1e-12 * exp.abs(),
                &format!("nu = {nu}, x = {x:e}"),
            );
        }
    }
    // u_l(x) / x^(l+1) is constant as x -> 0.
    for l in [-0.4, 0.3, 1.3, 2.6] {
        let at = |x: f64| riccati(Order::new(l).unwrap(), x).unwrap().u / x.powf(l + 1.0);
        assert_close(
            at(1e-30),
            at(1e-20),
            1e-12 * at(1e-20).abs(),
            "leading power",
        );
    }
}

#[test]
fn half_integer_orders_reduce_to_spherical_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let x: f64 = rng.gen_range(0.05..300.0);
        let (s, c) = x.sin_cos();
        let amp = (2.0 / (PI * x)).sqrt();
        let exact = [
            (0.5, amp * s, -amp * c),
            (1.5, amp * (s / x - c), -amp * (c / x + s)),
            (
                2.5,
                amp * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x),
                -amp * ((3.0 / (x * x) - 1.0) * c + 3.0 * s / x),
            ),
        ];
        for (nu, j, y) in exact {
            let b = bessel_jy(nu, x).unwrap();
            let env = j.hypot(y);
            assert_close(b.j, j, 1e-12 * env, &format!("J_{nu}({x})"));
            assert_close(b.y, y, 1e-12 * env, &format!("Y_{nu}({x})"));
        }
    }
}

#[test]
fn wronskians_hold_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let lambda: f64 = rng.gen_range(-0.49..8.0);
        let x: f64 = 10f64.powf(rng.gen_range(-1.0..3.0));
        let nu = lambda + 0.5;
        let b = bessel_jy(nu, x).unwrap();
        let expected = 2.0 / (PI * x);
        assert_close(
            b.wronskian(),
            expected,
            1e-9 * expected,
            &format!("Bessel W at nu={nu}, x={x}"),
        );
        let p = riccati(Order::new(lambda).unwrap(), x).unwrap();
        assert_close(
            p.wronskian(),
            1.0,
            1e-9,
            &format!("Riccati W at lambda={lambda}, x={x}"),
        );
    }
}

#[test]
fn regimes_agree_where_they_overlap() {
    for &nu in &[0.0, 0.1, 0.5, 0.9, 1.5, 2.7, 4.0, 6.5] {
        let t = hankel_threshold(nu);
        for &x in &[t, t * 1.1, t * 1.5, t * 3.0] {
            let a = bessel_jy_asymptotic(nu, x).expect("asymptotic series converges");
            let r = bessel_jy_recurrence(nu, x).unwrap();
            let env = r.j.hypot(r.y);
            let envp = r.j_prime.hypot(r.y_prime);
            assert_close(a.j, r.j, 1e-10 * env, &format!("J_{nu}({x})"));
            assert_close(a.y, r.y, 1e-10 * env, &format!("Y_{nu}({x})"));
            assert_close(a.j_prime, r.j_prime, 1e-10 * envp, &format!("J'_{nu}({x})"));
            assert_close(a.y_prime, r.y_prime, 1e-10 * envp, &format!("Y'_{nu}({x})"));
        }
    }
    // The Temme/Steed switch at x = 2.
    for &nu in &[0.2, 1.3, 3.9] {
        let lo = bessel_jy(nu, 2.0 - 1e-12).unwrap();
        let hi = bessel_jy(nu, 2.0).unwrap();
        assert_close(lo.j, hi.j, 1e-11, "J across x = 2");
        assert_close(lo.y, hi.y, 1e-11 * hi.y.abs().max(1.0), "Y across x = 2");
    }
}

#[test]
fn cross_wronskian_limits() {
    let zero = Order::new(0.0).unwrap();
    let one = Order::new(1.0).unwrap();
    let two = Order::new(2.0).unwrap();
    assert_close(
        cross_wronskian(two, two, 3.7).unwrap(),
        1.0,
        1e-13,
        "same order",
    );
    // W(u_L, v_l) -> cos((l - L) pi / 2) at large x.
    assert_close(
        cross_wronskian(zero, one, 1000.0).unwrap(),
        0.0,
        1e-2,
        "L = l - 1",
    );
    for &(big, ell) in &[(-0.4, 0.0), (0.3, 1.0), (2.5, 1.0), (1.7, 3.0)] {
        let w =
            cross_wronskian(Order::new(big).unwrap(), Order::new(ell).unwrap(), 1000.0).unwrap();
        assert_close(
            w,
            ((ell - big) * PI / 2.0).cos(),
            1e-2,
            "asymptotic constant",
        );
    }
    // S = {0}, T = {2} changes sign on (0, 10).
    let w: Vec<f64> = (1..1000)
        .map(|k| cross_wronskian(two, zero, k as f64 * 0.01).unwrap())
        .collect();
    assert!(w.windows(2).any(|p| p[0].signum() != p[1].signum()));
}

/// `W(u_L, v_l) / (l(l+1) - L(L+1))` has derivative `u_L v_l / r^2`, so
/// increments of the scaled Wronskian equal quadratures of that product.
#[test]
fn cross_wronskian_matches_quadrature() {
    let pairs = [(-0.4, 0.0), (0.6, 0.0), (1.3, 2.0), (2.5, 1.0), (0.2, 3.0)];
    for (big, ell) in pairs {
        let bo = Order::new(big).unwrap();
        let eo = Order::new(ell).unwrap();
        let den = eo.centrifugal() - bo.centrifugal();
        let scaled = |x: f64| cross_wronskian(bo, eo, x).unwrap() / den;
        let integrand = |r: f64| {
            let a = riccati(bo, r).unwrap();
            let b = riccati(eo, r).unwrap();
            a.u * b.v / (r * r)
        };
        let x0 = 0.5;
        for &x in &[1.0, 5.0, 17.0, 50.0] {
            let quad = integrate(integrand, x0, x, 200);
            assert_close(
                scaled(x) - scaled(x0),
                quad,
                1e-7,
                &format!("L={big}, l={ell}, x={x}"),
            );
        }
        if big > ell {
            // The integral from the origin converges like r^(L - l): dyadic
            // panels toward the origin resolve the algebraic endpoint.
            for &x in &[0.5f64, 3.0, 20.0] {
                let quad: f64 = (0..80)
                    .map(|k| {
                        let hi = x.min(0.5) * 0.5f64.powi(k);
                        integrate(integrand, 0.5 * hi, hi, 2)
                    })
                    .sum::<f64>()
                    + if x > 0.5 {
                        integrate(integrand, 0.5, x, 200)
                    } else {
                        0.0
                    };
                assert_close(
                    scaled(x),
                    quad,
                    1e-7,
                    &format!("from 0, L={big}, l={ell}, x={x}"),
                );
            }
        }
    }
}

#[test]
fn zeros_examples() {
    let z = positive_zeros(ZeroKind::J, 0.5, 3).unwrap();
    for (k, v) in z.into_iter().enumerate() {
        assert_close(v, (k + 1) as f64 * PI, 1e-10, "j_{1/2}");
    }
    let z = positive_zeros(ZeroKind::Y, 0.5, 2).unwrap();
    assert_close(z[0], PI / 2.0, 1e-10, "y_{1/2,1}");
    assert_close(z[1], 1.5 * PI, 1e-10, "y_{1/2,2}");
    let z = positive_zeros(ZeroKind::J, 1.3, 5).unwrap();
    assert!(z.windows(2).all(|w| w[0] < w[1]));
    for x in &z {
        assert!(bessel_jy(1.3, *x).unwrap().j.abs() < 1e-9);
    }
    // mpmath: j_{2.7,1}, y'_{2.7,3}
    assert_close(
        positive_zeros(ZeroKind::YPrime, 2.7, 3).unwrap()[2],
        12.55752565511208801117,
        1e-10,
        "y'_{2.7,3}",
    );
}

#[test]
fn j_and_y_zeros_alternate() {
    for &nu in &[0.0, 0.3, 1.0, 2.2, 5.5] {
        let j = positive_zeros(ZeroKind::J, nu, 12).unwrap();
        let y = positive_zeros(ZeroKind::Y, nu, 12).unwrap();
        for s in 0..12 {
            assert!(y[s] < j[s], "y_{nu},{s} < j_{nu},{s}");
            if s + 1 < 12 {
                assert!(j[s] < y[s + 1], "j_{nu},{s} < y_{nu},{s}+1");
            }
        }
    }
}

#[test]
fn interlacing_examples() {
    assert!(interlacing_check(0.5, 1.0, 5).unwrap().holds);
    assert!(interlacing_check(0.5, 0.5, 5).unwrap().holds);
    let v = interlacing_check(0.5, 1.5, 20).unwrap();
    assert!(!v.holds);
    let at = v.violated_at.unwrap();
    assert!(at.left.value > at.right.value);
    // First failure: y_{2,1} = 3.384 lies above y'_{1/2,1} = 2.975.
    assert_eq!(at.left.member, ChainMember::YShifted);
    assert_eq!(at.right.member, ChainMember::YPrime);
    assert_eq!(at.index, 1);
}

//! Randomized algebraic and geometric invariants.

use meridian::curves::{MeridianProfile, SphericalCurve};
use meridian::{wedge, Vector4};
use proptest::prelude::*;

fn vec4() -> impl Strategy<Value = Vector4> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(Vector4)
}

proptest! {
    #[test]
    fn wedge_is_bilinear(a in vec4(), b in vec4(), c in vec4(), s in -5.0..5.0f64) {
        let lhs = wedge(a + b * s, c);
        let rhs = wedge(a, c) + wedge(b, c) * s;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn wedge_is_antisymmetric(a in vec4(), b in vec4()) {
        prop_assert!((wedge(a, b) + wedge(b, a)).norm() == 0.0);
    }

    #[test]
    fn bivector_inner_product_is_the_gram_determinant(
        a in vec4(), b in vec4(), c in vec4(), d in vec4()
    ) {
        let lhs = wedge(a, b).dot(wedge(c, d));
        let rhs = a.dot(c) * b.dot(d) - a.dot(d) * b.dot(c);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()));
    }

    #[test]
    fn circle_frames_are_orthonormal(kappa0 in -3.0..3.0f64, v in 0.0..5.0f64) {
        let curve = SphericalCurve::circle(kappa0, (0.0, 5.0));
        let fr = curve.frenet_frame(v).unwrap();
        for (i, a) in [fr.r, fr.t, fr.n].iter().enumerate() {
            for (j, b) in [fr.r, fr.t, fr.n].iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((a.dot(*b) - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn circle_curvature_is_constant(kappa0 in -3.0..3.0f64, v in 0.0..5.0f64) {
        let curve = SphericalCurve::circle(kappa0, (0.0, 5.0));
        prop_assert!((curve.spherical_curvature(v).unwrap() - kappa0).abs() <= 1e-12);
    }

    #[test]
    fn profiles_are_unit_speed(
        base in 1.5..3.0f64,
        amp in 0.05..0.4f64,
        freq in 0.2..1.5f64,
        u in 0.0..2.0f64,
    ) {
        prop_assume!((amp * freq).abs() < 0.95);
        let profile = MeridianProfile::analytic(
            move |u: f64| {
                let (s, c) = (freq * u).sin_cos();
                [
                    base + amp * s,
                    amp * freq * c,
                    -amp * freq * freq * s,
                    -amp * freq * freq * freq * c,
                ]
            },
            1.0,
            0.0,
            (0.0, 2.0),
        );
        let e = profile.eval(u).unwrap();
        prop_assert!((e.df * e.df + e.dg * e.dg - 1.0).abs() <= 1e-12);
        // meridian curvature identity: kappa_alpha g' = -f''
        prop_assert!((e.kappa_alpha * e.dg + e.d2f).abs() <= 1e-12);
    }
}

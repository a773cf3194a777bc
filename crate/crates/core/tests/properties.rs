use std::f64::consts::PI;

use latticesol_core::energy::{lq_norm_q, quotient, quotient_gradient, wp_energy_p};
use latticesol_core::mesh::build_mesh;
use latticesol_core::{DomainSpec, Field, Mesh, QuotientParams, Shape};
use proptest::prelude::*;

fn coarse() -> Mesh {
    build_mesh(&DomainSpec::rectangle(1.5, 2.0, 0.5)).unwrap()
}

fn all_shapes() -> Vec<DomainSpec> {
    vec![
        DomainSpec::rectangle(1.3, 2.0, 0.25),
        DomainSpec::new(Shape::EquilateralTriangle, 2.0, 0.25),
        DomainSpec::new(Shape::RightTriangle3060, 2.0, 0.25),
        DomainSpec::new(Shape::RightTriangle4545, 2.0, 0.25),
        DomainSpec::new(Shape::Strip { half_height: 3.0 }, 2.0, 0.25),
        DomainSpec::new(Shape::Interval, 2.0, 0.25),
    ]
}

#[test]
fn meshes_are_positive_and_weights_sum_to_area() {
    for spec in all_shapes() {
        let mesh = build_mesh(&spec).unwrap();
        let area = spec.area();
        assert!((mesh.total_weight() - area).abs() <= 1e-12 * area, "{:?}", spec.shape);
        for t in &mesh.triangles {
            let [a, b, c] = t.map(|i| mesh.vertices[i]);
            let signed = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            assert!(signed > 0.0);
        }
    }
}

#[test]
fn constants_are_integrated_exactly() {
    for spec in all_shapes() {
        let mesh = build_mesh(&spec).unwrap();
        let area = spec.area();
        let u = Field::constant(&mesh, 1.7);
        assert!((lq_norm_q(&mesh, &u, 3.0) - 1.7f64.powi(3) * area).abs() <= 1e-12 * area);
        assert!((wp_energy_p(&mesh, &u, 2.0) - 1.7f64.powi(2) * area).abs() <= 1e-12 * area);
    }
}

#[test]
fn energy_converges_at_second_order() {
    let exact = (1.0 + 2.0 * PI * PI) / 4.0;
    let error = |h: f64| {
        let mesh = build_mesh(&DomainSpec::rectangle(1.0, 1.0, h)).unwrap();
        let u = Field::from_fn(&mesh, |p| (PI * p[0]).cos() * (PI * p[1]).cos());
        (wp_energy_p(&mesh, &u, 2.0) - exact).abs()
    };
    let e = [error(1.0 / 8.0), error(1.0 / 16.0), error(1.0 / 32.0)];
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..=4.5).contains(&ratio), "{e:?}");
    }
}

fn field_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.5f64..1.5, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gradient_matches_central_differences(values in field_strategy(35), cubic in any::<bool>()) {
        let mesh = coarse();
        prop_assume!(values.iter().any(|v| v.abs() > 0.1));
        let params = if cubic { QuotientParams::cubic() } else { QuotientParams::new(3.0, 5.0, 2).unwrap() };
        let g = quotient_gradient(&mesh, &values, &params).unwrap();
        let step = 1e-6 * values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for i in 0..values.len() {
            let mut up = values.clone();
            let mut down = values.clone();
            up[i] += step;
            down[i] -= step;
            let fd = (quotient(&mesh, &up, &params).unwrap() - quotient(&mesh, &down, &params).unwrap()) / (2.0 * step);
            worst = worst.max((fd - g[i]).abs());
        }
        let scale = g.sup_norm();
        prop_assert!(worst <= 1e-6 * scale, "worst {worst} vs |g| {scale}");
    }

    #[test]
    fn quotient_is_homogeneous(values in field_strategy(35), c in prop_oneof![-50.0f64..-0.02, 0.02f64..50.0]) {
        let mesh = coarse();
        prop_assume!(values.iter().any(|v| v.abs() > 0.1));
        let params = QuotientParams::cubic();
        let scaled: Vec<f64> = values.iter().map(|v| c * v).collect();
        let (a, b) = (quotient(&mesh, &values, &params).unwrap(), quotient(&mesh, &scaled, &params).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

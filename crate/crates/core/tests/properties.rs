use proptest::prelude::*;
use symfem::burgers::{assemble_invariant_lagrangian, transform_rhs, transform_state, BurgersState};
use symfem::group::{BurgersElement, ExpGroupElement, PainleveElement, PlaneAction};
use symfem::mesh::{hat_eval, DiscreteJet, Mesh};
use symfem::ode::{residual_exp, residual_painleve_inv};
use symfem::solvers::solve_tridiagonal;

fn stencil() -> impl Strategy<Value = [f64; 3]> {
    (-2.0..2.0f64, 0.05..0.5f64, 0.05..0.5f64).prop_map(|(x0, h0, h1)| [x0, x0 + h0, x0 + h0 + h1])
}

fn sorted_nodes(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (-1.0..1.0f64, prop::collection::vec(0.05..0.4f64, n)).prop_map(|(start, widths)| {
        let mut nodes = vec![start];
        for w in widths {
            nodes.push(nodes.last().unwrap() + w);
        }
        nodes
    })
}

proptest! {
    #[test]
    fn tridiagonal_solution_satisfies_system(
        rows in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -5.0..5.0f64), 1..40)
    ) {
        let lower: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let upper: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let diag: Vec<f64> = rows.iter().map(|r| 2.5 + r.0.abs() + r.1.abs()).collect();
        let rhs: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
        let n = x.len();
        for i in 0..n {
            let mut r = diag[i] * x[i] - rhs[i];
            if i > 0 { r += lower[i] * x[i - 1]; }
            if i + 1 < n { r += upper[i] * x[i + 1]; }
            prop_assert!(r.abs() < 1e-12, "row {i} residual {r}");
        }
    }

    #[test]
    fn hats_form_a_partition_of_unity(nodes in sorted_nodes(8), s in 0.0..1.0f64) {
        let mesh = Mesh::new(nodes.clone()).unwrap();
        let x = nodes[0] + s * (nodes[8] - nodes[0]);
        let total: f64 = (0..mesh.len()).map(|k| hat_eval(&mesh, k, x).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exp_residual_is_group_invariant(
        x in stencil(),
        u in prop::array::uniform3(-1.0..1.0f64),
        eps in -0.5..0.5f64, a in -1.0..1.0f64, b in -1.0..1.0f64,
    ) {
        let jet = DiscreteJet::new(0, x, u).unwrap();
        let g = ExpGroupElement::new(eps, a, b);
        let moved = g.act_jet(&jet).unwrap();
        let (r0, r1) = (residual_exp(&jet), residual_exp(&moved));
        prop_assert!((r0 - r1).abs() <= 1e-9 * (1.0 + r0.abs()), "{r0} vs {r1}");
    }

    #[test]
    fn painleve_residual_is_group_invariant(
        x in stencil(),
        u in prop::array::uniform3(0.5..2.0f64),
        a in -1.0..1.0f64, b in -0.5..0.5f64,
    ) {
        let jet = DiscreteJet::new(0, x, u).unwrap();
        let g = PainleveElement::new(a, b);
        let moved = g.act_jet(&jet).unwrap();
        let r0 = residual_painleve_inv(&jet).unwrap();
        let r1 = residual_painleve_inv(&moved).unwrap();
        prop_assert!((r0 - r1).abs() <= 1e-9 * (1.0 + r0.abs()), "{r0} vs {r1}");
    }

    #[test]
    fn lagrangian_assembly_is_equivariant(
        nodes in sorted_nodes(12),
        values in prop::collection::vec(-1.0..1.0f64, 13),
        lambda in 0.5..2.0f64, shift in -1.0..1.0f64, v in -1.0..1.0f64,
    ) {
        let state = BurgersState::new(0.3, nodes, values, 0.1).unwrap();
        let g = BurgersElement::new(lambda, shift, 0.0, v).unwrap();
        let moved = transform_state(&g, &state).unwrap();
        let direct = assemble_invariant_lagrangian(&moved).unwrap();
        let mapped = transform_rhs(&g, &assemble_invariant_lagrangian(&state).unwrap());
        let scale = 1.0 + mapped.du_dt.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        for (d, m) in direct.du_dt.iter().zip(&mapped.du_dt) {
            prop_assert!((d - m).abs() <= 1e-10 * scale, "{d} vs {m}");
        }
        for (d, m) in direct.dx_dt.iter().zip(&mapped.dx_dt) {
            prop_assert!((d - m).abs() <= 1e-12 * (1.0 + m.abs()), "{d} vs {m}");
        }
    }
}

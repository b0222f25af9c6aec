use brc_core::fm::{
    build_brc_constraints, check_projection_default, CodingTerms, LinearInequalitySystem, Row,
    BRC_HELPER_VARIABLES, BRC_RATE_VARIABLES,
};
use brc_core::info::RateUnit;
use brc_core::region::{regions_agree_on_grid, GRID_STEP, MEMBERSHIP_TOL};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Z_BOX: f64 = 5.0;

/// Random rows over (x, y, z) with small integer coefficients, plus a box on z.
fn system() -> impl Strategy<Value = LinearInequalitySystem<f64>> {
    prop::collection::vec(([-2i32..=2, -2i32..=2, -2i32..=2], -3.0f64..3.0), 2..7).prop_map(
        |rows| {
            let mut rows: Vec<Row<f64>> = rows
                .into_iter()
                .map(|(c, b)| Row::new(c.iter().map(|&v| v as f64).collect(), b, ""))
                .collect();
            rows.push(Row::new(vec![0.0, 0.0, 1.0], Z_BOX, "z <= box"));
            rows.push(Row::new(vec![0.0, 0.0, -1.0], Z_BOX, "-z <= box"));
            LinearInequalitySystem::new(["x", "y", "z"], rows).unwrap()
        },
    )
}

/// Existence of a feasible z by scanning a fine grid; returns `None` when the
/// feasible z-interval is too thin to decide at this resolution.
fn grid_feasible(sys: &LinearInequalitySystem<f64>, x: f64, y: f64) -> Option<bool> {
    let n = 20_000;
    let mut best = f64::NEG_INFINITY;
    for k in 0..=n {
        let z = -Z_BOX + 2.0 * Z_BOX * k as f64 / n as f64;
        let worst = sys
            .rows()
            .iter()
            .map(|r| r.bound - (r.coeffs[0] * x + r.coeffs[1] * y + r.coeffs[2] * z))
            .fold(f64::INFINITY, f64::min);
        best = best.max(worst);
    }
    if best.abs() < 0.01 {
        None
    } else {
        Some(best > 0.0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn projection_matches_grid_search(sys in system(), pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 8)) {
        let projected = sys.eliminate("z").unwrap();
        prop_assert_eq!(projected.variables(), &["x".to_string(), "y".to_string()]);
        for (x, y) in pts {
            if let Some(expected) = grid_feasible(&sys, x, y) {
                prop_assert_eq!(projected.satisfies(&[x, y], 1e-9), expected, "point ({}, {})", x, y);
            }
        }
    }
}

#[test]
fn random_coding_terms_project_onto_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let terms = CodingTerms::<f64>::sample(&mut rng);
        let check = check_projection_default(&terms, RateUnit::Bits).unwrap();
        assert!(check.admissible, "draw {k}");
        assert!(
            check.agree,
            "draw {k}: {terms:?}\nderived {:?}",
            check.derived
        );
    }
}

#[test]
fn elimination_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut reversed = BRC_HELPER_VARIABLES;
    reversed.reverse();
    let rotated = ["S0", "S'2", "T1", "S1", "S'1", "T2", "S2"];
    for _ in 0..20 {
        let terms = CodingTerms::<f64>::sample(&mut rng);
        let sys = build_brc_constraints(&terms).unwrap().system;
        let regions: Vec<_> = [&BRC_HELPER_VARIABLES[..], &reversed[..], &rotated[..]]
            .iter()
            .map(|order| {
                sys.eliminate_all(order)
                    .unwrap()
                    .0
                    .to_rate_region(&BRC_RATE_VARIABLES)
                    .unwrap()
            })
            .collect();
        let q = terms.quantities(RateUnit::Bits);
        let hi = q.i1.max(q.i2) + GRID_STEP;
        for r in &regions[1..] {
            assert!(regions_agree_on_grid(
                &regions[0],
                r,
                hi,
                GRID_STEP,
                MEMBERSHIP_TOL
            ));
        }
    }
}

#[test]
fn eliminated_system_keeps_only_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let terms = CodingTerms::<f64>::sample(&mut rng);
    let check = check_projection_default(&terms, RateUnit::Bits).unwrap();
    assert_eq!(check.report.eliminated.len(), BRC_HELPER_VARIABLES.len());
    assert_eq!(check.derived.dim(), 3);
    assert!(check.report.rows_after <= check.report.rows_before * check.report.rows_before);
}

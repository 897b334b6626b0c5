use ihm_core::bounds::{
    bounds_row, divisor_closure, divisor_matrix_bound_check, euler_phi, hong_loewy_check,
    jordan_totient, mattila_bounds, mattila_log_bounds, smith_determinant_check,
};
use ihm_core::charpoly::DEFAULT_TOL;
use ihm_core::extremal::z0_smallest_eigenvalue;
use ihm_core::search::{exhaustive_min, SearchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exhaustive_c(n: usize) -> f64 {
    exhaustive_min(&SearchConfig::new(n)).unwrap().c_n_estimate
}

#[test]
fn exhaustive_minima_exceed_mattila_bounds() {
    for n in 2..=6 {
        let row = bounds_row(n, Some(exhaustive_c(n))).unwrap();
        assert_eq!(row.holds, Some(true), "{row:?}");
    }
}

#[test]
fn extremal_eigenvalue_exceeds_mattila_bounds() {
    for n in 2..=30 {
        let z0 = z0_smallest_eigenvalue(n, DEFAULT_TOL).unwrap();
        let (g, p) = mattila_log_bounds(n).unwrap();
        assert!(z0.ln() >= g && z0.ln() >= p, "n = {n}");
        assert_eq!(bounds_row(n, Some(z0)).unwrap().holds, Some(true));
    }
    assert!(mattila_bounds(2).unwrap().general < 0.381_966);
}

#[test]
fn divisor_bound_up_to_fifty() {
    for n in 1..=50 {
        let d = divisor_matrix_bound_check(n).unwrap();
        assert!(d.holds, "n = {n}: {d:?}");
    }
}

#[test]
fn smith_on_random_factor_closed_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a17);
    for _ in 0..20 {
        let seeds: Vec<u64> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(1..=200))
            .collect();
        let set = divisor_closure(&seeds);
        let s = smith_determinant_check(&set).unwrap();
        assert!(s.equal, "{set:?}: {s:?}");
    }
}

fn subsets(universe: &[u64], max: usize) -> Vec<Vec<u64>> {
    (1u32..1 << universe.len())
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| {
            universe
                .iter()
                .enumerate()
                .filter(|&(i, _)| m >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

#[test]
fn hong_loewy_on_small_sets() {
    let c: Vec<f64> = (1..=5).map(exhaustive_c).collect();
    let universe: Vec<u64> = (1..=8).collect();
    let mut checked = 0;
    for set in subsets(&universe, 5) {
        for eps in [1.0, 2.0] {
            let h = hong_loewy_check(&set, eps, c[set.len() - 1]).unwrap();
            assert!(h.holds, "{set:?}, eps {eps}: {h:?}");
            checked += 1;
        }
    }
    assert_eq!(checked, 2 * (8 + 28 + 56 + 70 + 56));
    let h = hong_loewy_check(&[2, 4, 6, 8], 2.0, c[3]).unwrap();
    assert!(h.holds);
}

#[test]
fn jordan_with_unit_exponent_is_euler() {
    for m in 1..=10_000 {
        assert!((jordan_totient(m, 1.0) - euler_phi(m) as f64).abs() <= 1e-9 * m as f64);
    }
}

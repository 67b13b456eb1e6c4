//! Property-based invariants. Everything here must hold for arbitrary
//! signals and parameters, not just the curated cases in the unit tests.

use proptest::prelude::*;
use rustfft::num_complex::Complex64;

use modspace::engine::{apply_multiplier, square_function};
use modspace::io::{signal_from_json, signal_to_json};
use modspace::modnorm::{mod_norm_blocks, mod_norm_stft};
use modspace::partition::{partition_bumps, PartitionKind};
use modspace::stft::{stft, stft_alternate, StftForm, Window};
use modspace::symbols::{collection_dyadic, Symbol};
use modspace::{
    dft, modulate, translate, Exponent, Grid, MixedNormParams, NormMode, Signal,
};

fn signal_strategy(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn nonzero_signal_strategy(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    signal_strategy(n).prop_filter("needs some energy", |v| {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn all_transform_routes_agree(
        f in nonzero_signal_strategy(24),
        g in nonzero_signal_strategy(24),
    ) {
        let grid = Grid::new(24, 0.25).unwrap();
        let f = Signal::new(grid, f).unwrap();
        let g = Window::new(Signal::new(grid, g).unwrap()).unwrap();
        let reference = stft(&f, &g).unwrap();
        let scale = reference.energy().sqrt().max(1e-12);
        for form in [
            StftForm::SpectralInner,
            StftForm::TransformPair,
            StftForm::TimeConvolution,
            StftForm::SpectralConvolution,
            StftForm::HalfShift,
        ] {
            let alt = stft_alternate(&f, &g, form).unwrap();
            prop_assert!(alt.max_abs_diff(&reference) / scale < 1e-10);
        }
    }

    #[test]
    fn transform_energy_is_n_times_input_energies(
        f in nonzero_signal_strategy(16),
        g in nonzero_signal_strategy(16),
    ) {
        let grid = Grid::new(16, 0.5).unwrap();
        let f = Signal::new(grid, f).unwrap();
        let g = Window::new(Signal::new(grid, g).unwrap()).unwrap();
        let v = stft(&f, &g).unwrap();
        let expected = 16.0 * f.l2().powi(2) * g.l2().powi(2);
        prop_assert!((v.energy() / expected - 1.0).abs() < 1e-10);
    }

    #[test]
    fn norms_are_homogeneous(
        data in nonzero_signal_strategy(32),
        c_re in -3.0f64..3.0,
        c_im in -3.0f64..3.0,
        pq in (1.0f64..8.0, 1.0f64..8.0),
    ) {
        let grid = Grid::new(32, 0.25).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let c = Complex64::new(c_re, c_im);
        prop_assume!(c.norm() > 1e-3);
        let params = MixedNormParams::new(
            Exponent::Finite(pq.0),
            Exponent::Finite(pq.1),
            NormMode::Discrete,
        );
        let part = partition_bumps(&grid, PartitionKind::Smooth).unwrap();
        let window = Window::gaussian(grid);
        for (va, vb) in [
            (
                mod_norm_blocks(&f.scale(c), &part, params).unwrap(),
                mod_norm_blocks(&f, &part, params).unwrap(),
            ),
            (
                mod_norm_stft(&f.scale(c), &window, params).unwrap(),
                mod_norm_stft(&f, &window, params).unwrap(),
            ),
        ] {
            prop_assert!((va / (c.norm() * vb) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn block_norm_satisfies_the_triangle_inequality(
        a in signal_strategy(32),
        b in signal_strategy(32),
        pq in (1.0f64..6.0, 1.0f64..6.0),
    ) {
        let grid = Grid::new(32, 0.25).unwrap();
        let fa = Signal::new(grid, a.clone()).unwrap();
        let fb = Signal::new(grid, b.clone()).unwrap();
        let sum = Signal::new(
            grid,
            a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        )
        .unwrap();
        let params = MixedNormParams::new(
            Exponent::Finite(pq.0),
            Exponent::Finite(pq.1),
            NormMode::Discrete,
        );
        let part = partition_bumps(&grid, PartitionKind::Smooth).unwrap();
        let na = mod_norm_blocks(&fa, &part, params).unwrap();
        let nb = mod_norm_blocks(&fb, &part, params).unwrap();
        let ns = mod_norm_blocks(&sum, &part, params).unwrap();
        prop_assert!(ns <= (na + nb) * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn transform_norm_ignores_time_frequency_shifts(
        data in nonzero_signal_strategy(32),
        shift in 0i64..32,
        bin in 0i64..32,
        pq in (1.0f64..6.0, 1.0f64..6.0),
    ) {
        let grid = Grid::new(32, 0.25).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let moved = modulate(&translate(&f, shift), bin);
        let params = MixedNormParams::new(
            Exponent::Finite(pq.0),
            Exponent::Finite(pq.1),
            NormMode::Discrete,
        );
        let window = Window::gaussian(grid);
        let a = mod_norm_stft(&f, &window, params).unwrap();
        let b = mod_norm_stft(&moved, &window, params).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn outer_exponents_order_the_block_norm(
        data in nonzero_signal_strategy(32),
        p in 1.0f64..6.0,
        q_lo in 1.0f64..4.0,
        bump in 0.5f64..4.0,
    ) {
        let grid = Grid::new(32, 0.25).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let part = partition_bumps(&grid, PartitionKind::Smooth).unwrap();
        let lo = mod_norm_blocks(
            &f,
            &part,
            MixedNormParams::new(Exponent::Finite(p), Exponent::Finite(q_lo), NormMode::Discrete),
        )
        .unwrap();
        let hi = mod_norm_blocks(
            &f,
            &part,
            MixedNormParams::new(
                Exponent::Finite(p),
                Exponent::Finite(q_lo + bump),
                NormMode::Discrete,
            ),
        )
        .unwrap();
        // counting weights make the sequence norm decrease in the exponent
        prop_assert!(hi <= lo * (1.0 + 1e-12));
    }

    #[test]
    fn multipliers_never_beat_their_sup_on_l2(
        data in nonzero_signal_strategy(32),
        mask in proptest::collection::vec(-2.0f64..2.0, 32),
    ) {
        let grid = Grid::new(32, 0.25).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let sym = Symbol::new(
            grid,
            mask.iter().map(|m| Complex64::new(*m, 0.0)).collect(),
            "mask",
        )
        .unwrap();
        let out = apply_multiplier(&sym, &f).unwrap();
        prop_assert!(out.l2() <= sym.sup_norm() * f.l2() * (1.0 + 1e-10));
    }

    #[test]
    fn multipliers_compose_by_pointwise_product(
        data in signal_strategy(32),
        m1 in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 32),
        m2 in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 32),
    ) {
        let grid = Grid::new(32, 0.25).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let to_sym = |v: &[(f64, f64)], name: &str| {
            Symbol::new(
                grid,
                v.iter().map(|(re, im)| Complex64::new(*re, *im)).collect(),
                name,
            )
            .unwrap()
        };
        let s1 = to_sym(&m1, "m1");
        let s2 = to_sym(&m2, "m2");
        let prod = Symbol::new(
            grid,
            s1.values()
                .iter()
                .zip(s2.values())
                .map(|(a, b)| a * b)
                .collect(),
            "m1 m2",
        )
        .unwrap();
        let chained = apply_multiplier(&s2, &apply_multiplier(&s1, &f).unwrap()).unwrap();
        let direct = apply_multiplier(&prod, &f).unwrap();
        prop_assert!(chained.max_abs_diff(&direct).unwrap() < 1e-10 * (1.0 + f.l2()));
    }

    #[test]
    fn square_function_pieces_never_exceed_total_energy(
        data in nonzero_signal_strategy(64),
        levels in 1usize..5,
    ) {
        // band [-16, 16): the widest shell [8, 16) still fits at levels = 4
        let grid = Grid::new(64, 1.0 / 32.0).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let c = collection_dyadic(levels, &grid).unwrap();
        let pieces = square_function(&c, &f).unwrap();
        let piece_energy: f64 = pieces.iter().map(|p| p.l2().powi(2)).sum();
        prop_assert!(piece_energy <= f.l2().powi(2) * (1.0 + 1e-10));
    }

    #[test]
    fn signal_json_round_trip_is_byte_identical(
        data in signal_strategy(16),
        dx in prop::sample::select(vec![0.125f64, 0.25, 0.5, 1.0]),
    ) {
        let grid = Grid::new(16, dx).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let text = signal_to_json(&f);
        let back = signal_from_json(&text).unwrap();
        prop_assert_eq!(signal_to_json(&back), text);
    }

    #[test]
    fn spectra_obey_parseval(data in signal_strategy(32)) {
        let grid = Grid::new(32, 0.25).unwrap();
        let f = Signal::new(grid, data).unwrap();
        let spec = dft(&f);
        prop_assert!((spec.l2().powi(2) / 32.0 - f.l2().powi(2)).abs() < 1e-9 * (1.0 + f.l2().powi(2)));
    }

    #[test]
    fn conjugate_exponents_pair_up(p in 1.0f64..50.0) {
        let e = Exponent::Finite(p);
        let c = e.conjugate();
        if p == 1.0 {
            prop_assert!(c.is_inf());
        } else {
            prop_assert!((1.0 / p + 1.0 / c.value() - 1.0).abs() < 1e-12);
        }
        match (e.conjugate().conjugate(), e) {
            (Exponent::Finite(a), Exponent::Finite(b)) => {
                prop_assert!((a - b).abs() < 1e-10)
            }
            (x, y) => prop_assert_eq!(x.is_inf(), y.is_inf()),
        }
    }
}

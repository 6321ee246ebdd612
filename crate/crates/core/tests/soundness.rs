use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specbox_core::certificate::{certify, grid_certify};
use specbox_core::enclosure::{gershgorin_enclosure, qnr_enclosure, range_constants, tretter_strip, WeightFunction};
use specbox_core::linalg::{eigenvalues_general, operator_norm};
use specbox_core::qnr::{qnr_sample, QnrStrategy};
use specbox_core::{fixtures, Execution, Rect};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nonreal_eigenvalues_are_enclosed(seed in any::<u64>(), n in 1usize..7, m in 1usize..7, b in 0.05f64..3.0) {
        let s = fixtures::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), n, m, b);
        let sp = s.spectra().unwrap();
        let tol = 1e-8 * operator_norm(&s.assemble()).max(1.0);
        let one = WeightFunction::ConstantOne;
        let regions = [
            qnr_enclosure(&sp),
            tretter_strip(&sp),
            gershgorin_enclosure(&sp, &one, &one, false).unwrap(),
            gershgorin_enclosure(&sp, &one, &one, true).unwrap(),
        ];
        for z in eigenvalues_general(&s.assemble()).unwrap() {
            if z.im.abs() <= tol {
                continue;
            }
            for r in &regions {
                prop_assert!(r.contains_within(z, tol), "{z} outside {r:?}");
            }
            let cert = certify(&sp, z).unwrap();
            prop_assert!(cert.in_best && cert.in_neumann, "{z}: {cert:?}");
        }
    }

    #[test]
    fn separated_ranges_give_real_spectrum(seed in any::<u64>(), n in 1usize..7, m in 1usize..7) {
        let s = fixtures::random_gap_instance(&mut ChaCha8Rng::seed_from_u64(seed), n, m);
        let sp = s.spectra().unwrap();
        let rc = range_constants(&sp);
        let r = rc.gap_radius(sp.b_norm).unwrap();
        let tol = 1e-8 * operator_norm(&s.assemble());
        for z in eigenvalues_general(&s.assemble()).unwrap() {
            prop_assert!(z.im.abs() <= tol);
            prop_assert!((z.re - rc.c).abs() >= r - tol, "{z} within {r} of {}", rc.c);
        }
    }
}

#[test]
fn execution_modes_agree() {
    let s = fixtures::random_instance(&mut ChaCha8Rng::seed_from_u64(3), 6, 5, 1.2);
    let sp = s.spectra().unwrap();
    let rect = Rect::new(-3.0, 3.0, -1.0, 1.0);
    let seq = grid_certify(&sp, rect, 31, 21, Execution::Sequential).unwrap();
    let def = grid_certify(&sp, rect, 31, 21, Execution::default()).unwrap();
    assert_eq!(seq, def);
    let a = qnr_sample(&s, 500, QnrStrategy::Mixed, 5, Execution::Sequential).unwrap();
    let b = qnr_sample(&s, 500, QnrStrategy::Mixed, 5, Execution::default()).unwrap();
    assert_eq!(a.points, b.points);
}

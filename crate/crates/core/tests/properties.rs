use proptest::prelude::*;

use refutekit::instances::{gen_random_xor, read_instance_str, write_instance_string, Format, Instance};
use refutekit::refute::{refute_poly, verify_certificate, RefutationCertificate, RefuteConfig};
use refutekit::subsets::{binomial, SubsetIndex, Universe};

proptest! {
    #[test]
    fn rank_unrank_are_inverse(n in 1u32..12, ell_frac in 0.0f64..1.0, cloned: bool, pick in any::<u64>()) {
        let universe = if cloned { Universe::Cloned { n } } else { Universe::Plain { n } };
        let size = universe.size() as usize;
        let ell = ((size as f64 * ell_frac) as usize).max(1);
        let index = SubsetIndex::new(universe, ell).unwrap();
        prop_assert_eq!(index.len() as u128, binomial(size as u64, ell as u64).unwrap());
        let rank = pick % index.len();
        let set = index.unrank(rank);
        prop_assert_eq!(set.len(), ell);
        prop_assert!(set.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(index.rank(&set), rank);
    }

    #[test]
    fn xor_text_round_trip(n in 4u32..20, k in 2u32..5, m in 0usize..40, seed in any::<u64>()) {
        let inst = Instance::Xor(gen_random_xor(n, k, m, seed).unwrap());
        for format in [Format::Xor, Format::Json] {
            let text = write_instance_string(&inst, format).unwrap();
            prop_assert_eq!(&read_instance_str(&text, format).unwrap(), &inst);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificate_survives_json(m in 20usize..120, seed in any::<u64>()) {
        let inst = gen_random_xor(14, 3, m, seed).unwrap();
        let r = refute_poly(&inst, 2, &RefuteConfig::default()).unwrap();
        let text = serde_json::to_string(&r.certificate).unwrap();
        let back: RefutationCertificate = serde_json::from_str(&text).unwrap();
        let replay = verify_certificate(&back, Some(&inst));
        prop_assert!(replay.ok, "{:?}", replay.problems);
        prop_assert_eq!(replay.recomputed, r.alg_val);
    }
}

use proptest::prelude::*;

use palstruct::cfarray::{split_dense, CfLookup};
use palstruct::codec::decode_compact_traced;
use palstruct::periodic::{factor_palindromic_period, minimal_period};
use palstruct::*;

fn text(max_sigma: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    (1..=max_sigma).prop_flat_map(move |sigma| {
        proptest::collection::vec((0..sigma).prop_map(|b| b'a' + b), 0..max_len)
    })
}

/// Texts built from repeated blocks, which are rich in periodic palindromes.
fn repetitive_text() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec((text(3, 6), 1usize..12), 1..6).prop_map(|blocks| {
        blocks
            .into_iter()
            .flat_map(|(b, reps)| b.repeat(reps))
            .collect()
    })
}

fn naive_constraint(entries: &[CfEntry]) -> bool {
    entries.iter().enumerate().all(|(a, x)| {
        entries[a + 1..]
            .iter()
            .all(|y| (x.index.abs_diff(y.index) as u64) >= x.value.min(y.value) / 8)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn manacher_matches_brute_force(t in text(4, 400)) {
        prop_assert_eq!(manacher(&t), brute_force_pals(&t));
    }

    #[test]
    fn arrays_satisfy_their_invariants(t in text(3, 200)) {
        let pals = manacher(&t);
        let m = pals.len();
        prop_assert!(PalArray::from_lengths(pals.as_slice().to_vec()).is_ok());
        for c in 0..m {
            let len = pals[c];
            prop_assert_eq!(len % 2, 1 - c % 2);
            prop_assert!(c % 2 == 1 || len >= 1);
            prop_assert!(len <= c.min(m - 1 - c) + 1);
            for d in 1..len.max(1) {
                if d > c || c + d >= m {
                    break;
                }
                if pals[c - d] + d < len {
                    prop_assert_eq!(pals[c + d], pals[c - d]);
                }
            }
        }
    }

    #[test]
    fn codec_round_trips(t in text(5, 600)) {
        let pals = manacher(&t);
        let compact = encode_compact(&pals)?;
        let bytes = compact.to_bytes();
        let restored = CompactPal::from_bytes(&bytes)?;
        let (decoded, stats) = decode_compact_traced(&restored)?;
        prop_assert_eq!(decoded, pals.clone());
        prop_assert_eq!(stats.writes, pals.len());
    }

    #[test]
    fn corrupt_codec_input_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
        if let Ok(c) = CompactPal::from_bytes(&bytes) {
            if let Ok(pals) = decode_compact(&c) {
                prop_assert!(PalArray::from_lengths(pals.into_vec()).is_ok());
            }
        }
    }

    #[test]
    fn flipped_codec_bits_are_caught_or_valid(t in text(3, 80), flip in any::<prop::sample::Index>()) {
        let compact = encode_compact(&manacher(&t))?;
        let mut bytes = compact.to_bytes();
        if bytes.len() > 20 {
            let i = 20 + flip.index(bytes.len() - 20);
            bytes[i] ^= 1 << (i % 8);
            if let Ok(c) = CompactPal::from_bytes(&bytes) {
                let _ = decode_compact(&c);
            }
        }
    }

    #[test]
    fn cf_array_stores_and_finds(
        n in 1usize..5000,
        raw in proptest::collection::vec((any::<prop::sample::Index>(), 0u32..40, any::<u64>()), 0..200),
    ) {
        let mut entries: Vec<CfEntry> = raw
            .iter()
            .map(|(i, bits, v)| CfEntry::new(i.index(n), if *bits == 0 { 0 } else { v >> (64 - bits) }))
            .collect();
        entries.sort_by_key(|e| e.index);
        entries.dedup_by_key(|e| e.index);
        prop_assert_eq!(cf_check_constraint(&entries)?, naive_constraint(&entries));
        let (kept, dropped) = split_dense(&entries)?;
        prop_assert!(naive_constraint(&kept));
        prop_assert_eq!(kept.len() + dropped.len(), entries.len());
        let array = cf_build(&kept, n)?;
        let mut expected = vec![None; n];
        for e in &kept {
            expected[e.index] = Some(e.value);
        }
        for (i, want) in expected.into_iter().enumerate() {
            let CfLookup { value, hops } = array.find_traced(i)?;
            prop_assert_eq!(value, want);
            prop_assert!(hops <= 5);
        }
        prop_assert_eq!(CfArray::from_bytes(&array.to_bytes())?, array);
    }

    #[test]
    fn rank_and_select_are_inverse(bits in proptest::collection::vec(any::<bool>(), 0..5000)) {
        let v = RsBitVector::from_bits(bits.iter().copied());
        for k in 1..=v.count_ones() {
            prop_assert_eq!(v.rank1(v.select1(k)?)?, k - 1);
            prop_assert_eq!(v.rank1(v.select1(k)? + 1)?, k);
        }
        prop_assert_eq!(v.rank1(bits.len())?, bits.iter().filter(|&&b| b).count());
    }

    #[test]
    fn index_is_exact(t in text(4, 300)) {
        let index = build_index(&t);
        prop_assert_eq!(index.to_lengths()?, brute_force_pals(&t).into_vec());
        prop_assert_eq!(PalIndex::from_bytes(&index.to_bytes())?, index);
    }

    #[test]
    fn index_is_exact_on_repetitive_texts(t in repetitive_text()) {
        let index = build_index(&t);
        prop_assert_eq!(index.to_lengths()?, brute_force_pals(&t).into_vec());
        let report = index.stats()?;
        prop_assert!(report.max_hops <= 10);
    }

    #[test]
    fn corrupt_index_files_never_panic(t in repetitive_text(), flips in proptest::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let mut bytes = build_index(&t).to_bytes();
        for f in flips {
            let i = f.index(bytes.len());
            bytes[i] ^= 1 << (i % 8);
        }
        if let Ok(index) = PalIndex::from_bytes(&bytes) {
            for c in 0..index.centers() {
                let _ = index.access(c);
            }
        }
    }

    #[test]
    fn descriptors_reproduce_centric_lengths(t in repetitive_text()) {
        let pals = manacher(&t);
        for d in detect_ppds(&t, &pals) {
            prop_assert!(d.reps >= 1 && d.q0_len >= 1);
            let lo = d.run_start_char();
            let hi = lo + d.run_len() - 1;
            prop_assert_eq!(minimal_period(&t, lo, hi)?, d.period());
            prop_assert_eq!(factor_palindromic_period(&t, lo, hi, d.period())?, (d.q0_len, d.q1_len));
            for c in centric_centers(&d) {
                prop_assert_eq!(ppd_radius(&d, c)?, pals[c]);
            }
        }
    }

    #[test]
    fn reconstruction_round_trips(t in text(6, 300)) {
        let pals = manacher(&t);
        let pre = reconstruct_min(&pals)?;
        prop_assert!(verify_pal_match(&pre.text, &pals)?);
        let mut next = 0;
        for &s in &pre.text {
            prop_assert!(s <= next);
            if s == next {
                next += 1;
            }
        }
        prop_assert_eq!(next as usize, pre.sigma);
        let distinct = t.iter().collect::<std::collections::HashSet<_>>().len();
        prop_assert!(pre.sigma <= distinct.max(usize::from(!t.is_empty())));
    }
}

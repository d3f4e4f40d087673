use proptest::prelude::*;
use rand::Rng;
use uepsim::approx::{
    build_webpage_mapping, throughput, GrayImage, Payload, Ratio, ThroughputParams, WebPagePayload,
};
use uepsim::fec::{construct_polar_code, generate_ldpc_code, CodeKind, CodeSpec, DecoderConfig};
use uepsim::rng::substream;
use uepsim::sched::{make_nodes, wftm_assign, WorkloadJob};
use uepsim::uep::characterize_range;
use uepsim::{protection_order, BitErrorProfile, Bits, ChannelConfig, Llrs};

fn ratio_strategy() -> impl Strategy<Value = Ratio> {
    (0usize..=62).prop_map(|px| Ratio::new(500 - 8 * px, 8 * px).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn protection_order_is_a_permutation(counts in prop::collection::vec(0u64..20, 1..200)) {
        let p = BitErrorProfile::new(CodeKind::Polar, 1.0, 20, counts.clone()).unwrap();
        let order = protection_order(&p);
        let mut sorted = order.clone();
        sorted.sort();
        prop_assert_eq!(sorted, (0..counts.len()).collect::<Vec<_>>());
        for w in order.windows(2) {
            prop_assert!((counts[w[0]], w[0]) < (counts[w[1]], w[1]));
        }
    }

    #[test]
    fn small_polar_round_trip(m in 3u32..7, kfrac in 0.1f64..1.0, crc in prop::sample::select(vec![0usize, 4]), seed: u64) {
        let n = 1usize << m;
        let k = ((n as f64 * kfrac).ceil() as usize).clamp(crc + 1, n);
        let spec = construct_polar_code(n, k, 1.0, crc).unwrap();
        let payload = Bits::random(spec.payload_len(), &mut substream(seed, &[]));
        let c = spec.encode(&payload).unwrap();
        let d = spec.decode(&Llrs::noiseless(&c, 8.0), 4).unwrap();
        prop_assert!(d.crc_pass);
        prop_assert_eq!(d.payload(crc), payload);
    }

    #[test]
    fn small_ldpc_round_trip(seed in 0u64..1000, payload_seed: u64) {
        let spec = generate_ldpc_code(96, 48, seed).unwrap();
        let payload = Bits::random(spec.k_info, &mut substream(payload_seed, &[]));
        let c = spec.encode(&payload).unwrap();
        prop_assert!(spec.parity_check.is_codeword(&c));
        let d = spec.decode(&Llrs::noiseless(&c, 8.0), 10).unwrap();
        prop_assert!(d.converged);
        prop_assert_eq!(d.payload, payload);
    }

    #[test]
    fn ratio_text_round_trip(r in ratio_strategy()) {
        prop_assert_eq!(r.to_string().parse::<Ratio>().unwrap(), r);
    }

    #[test]
    fn throughput_is_non_increasing(a in 0.0f64..0.99, b in 0.0f64..0.99) {
        let prm = ThroughputParams::default();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(throughput(lo, &prm).unwrap() >= throughput(hi, &prm).unwrap());
    }

    #[test]
    fn pgm_round_trip(w in 1usize..40, h in 1usize..40, seed: u64) {
        let mut rng = substream(seed, &[]);
        let img = GrayImage::from_fn(w, h, |_, _| rng.random());
        prop_assert_eq!(GrayImage::from_pgm(&img.to_pgm()).unwrap(), img);
    }

    #[test]
    fn wftm_ignores_weight_scale(work in prop::collection::vec(0.0f64..20.0, 6), tl in 0.5f64..10.0, tp in 0.5f64..10.0,
                                  weights in prop::collection::vec(0.1f64..5.0, 6), scale in 0.01f64..100.0) {
        let mut nodes = make_nodes(4, 2).unwrap();
        for (i, (n, &w)) in nodes.iter_mut().zip(&work).enumerate() {
            if w > 0.0 {
                n.enqueue(&WorkloadJob { job_id: i as u64, size_mb: 1.0, text_ratio: 0.1, quality_level: 1, arrival: 0, tl: w, tp: w });
            }
        }
        let job = WorkloadJob { job_id: 99, size_mb: 1.0, text_ratio: 0.1, quality_level: 1, arrival: 0, tl, tp };
        let scaled: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let a = wftm_assign(&job, &nodes, &weights).unwrap();
        let b = wftm_assign(&job, &nodes, &scaled).unwrap();
        // Rounding may break an exact tie differently; the increase must still match.
        let delta = |i: usize| weights[i] * (nodes[i].remaining_work() + job.processing_time(nodes[i].kind));
        prop_assert!((delta(a) - delta(b)).abs() <= 1e-9 * delta(a).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn webpage_chunks_survive_pack_and_unpack(r in ratio_strategy(), seed: u64) {
        let code = CodeSpec::standard(CodeKind::Polar).unwrap();
        let prof = BitErrorProfile::new(CodeKind::Polar, 2.0, 512, (0..512).collect()).unwrap();
        let m = build_webpage_mapping(&code, &prof, r, 1).unwrap();
        let mut rng = substream(seed, &[]);
        let image = GrayImage::from_fn(9, 7, |_, _| rng.random());
        let page = WebPagePayload::with_random_text(image, r, &mut rng).unwrap();
        let chunks = page.chunks();
        let back: Vec<_> = chunks.iter().map(|c| m.unpack(&m.pack(c), c)).collect();
        prop_assert_eq!(&back, &chunks);
        let rebuilt = Payload::from(page.clone()).from_chunks(&back).unwrap();
        prop_assert_eq!(rebuilt, Payload::from(page));
    }
}

#[test]
fn split_characterization_sums_exactly() {
    let code = CodeSpec::Polar(construct_polar_code(64, 32, 1.0, 0).unwrap());
    let cfg = ChannelConfig::new(1.0, code.rate(), 6).unwrap();
    let dec = DecoderConfig::default();
    let whole = characterize_range(&code, &cfg, &dec, 0..400).unwrap();
    let mut parts = characterize_range(&code, &cfg, &dec, 0..150).unwrap();
    parts.merge(&characterize_range(&code, &cfg, &dec, 150..400).unwrap()).unwrap();
    assert_eq!(parts, whole);
    assert!(whole.error_counts.iter().sum::<u64>() > 0);
}

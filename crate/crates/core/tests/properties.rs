mod common;

use std::collections::BTreeSet;

use fuzzygeno::evolution::{crossover, mutate};
use fuzzygeno::grouping::confusion_region;
use fuzzygeno::imaging::{crop, OverlapImage, FRAME};
use fuzzygeno::{
    accuracy, classify, confusion, extract_features, form_groups, normalize, overlap_image, random_chromosome,
    similarity, strip_membership, Chromosome, ClassModel, ConfusionMatrix, CutBounds, FeatureVector, FuzzyParams,
    GroupingConfig, Label, ModelSet, NormImage, RawImage, Rect,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn chromosome() -> impl Strategy<Value = Chromosome> {
    any::<u64>().prop_map(|s| random_chromosome_anywhere(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn image() -> impl Strategy<Value = NormImage> {
    any::<u64>().prop_map(|s| random_image(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn unit_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn memberships_sum_to_one_and_stay_in_unit_range(ch in chromosome(), w in 0usize..=8) {
        for cuts in [&ch.h_cuts, &ch.v_cuts] {
            for x in cuts[0]..=*cuts.last().unwrap() {
                let m = strip_membership(cuts, w, x).unwrap();
                prop_assert!((m.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                prop_assert!(m.iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
    }

    #[test]
    fn crisp_extraction_is_the_cell_mean(img in image(), ch in chromosome()) {
        let got = extract_features(&img, &ch, FuzzyParams { ramp: 0 }).unwrap();
        let want = crisp_features(&img, &ch);
        prop_assert_eq!(got.values(), want.as_slice());
    }

    #[test]
    fn features_are_bounded_by_the_image(img in image(), ch in chromosome(), w in 0usize..=4) {
        let fv = extract_features(&img, &ch, FuzzyParams { ramp: w }).unwrap();
        prop_assert_eq!(fv.len(), (ch.h_cuts.len() - 1) * (ch.v_cuts.len() - 1));
        prop_assert!(fv.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn brighter_image_never_lowers_a_feature(img in image(), ch in chromosome(), w in 0usize..=4, bump in 0.0..0.5f64) {
        let brighter = NormImage::from_fn(|r, c| img.get(r, c) + bump);
        let fp = FuzzyParams { ramp: w };
        let a = extract_features(&img, &ch, fp).unwrap();
        let b = extract_features(&brighter, &ch, fp).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!(y + 1e-12 >= *x);
        }
    }

    #[test]
    fn similarity_is_symmetric_and_unit_on_self((x, y) in (1usize..40).prop_flat_map(|n| (unit_vec(n), unit_vec(n)))) {
        let model = |v: &[f64]| ClassModel { class_id: 0, prototype: FeatureVector(v.to_vec()), sample_count: 1 };
        let fx = FeatureVector(x.clone());
        let fy = FeatureVector(y.clone());
        let sxy = similarity(&fx, &model(&y)).unwrap();
        let syx = similarity(&fy, &model(&x)).unwrap();
        prop_assert_eq!(sxy, syx);
        prop_assert!((0.0..=1.0).contains(&sxy));
        prop_assert_eq!(similarity(&fx, &model(&x)).unwrap(), 1.0);
        let l1: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        prop_assert!((sxy - (1.0 - l1 / x.len() as f64)).abs() < 1e-12);
    }

    #[test]
    fn classification_ignores_allowed_order(
        protos in prop::collection::vec(unit_vec(6), 2..8),
        x in unit_vec(6),
        seed in any::<u64>(),
    ) {
        let ch = Chromosome::from_cuts(vec![0, 10, 31], vec![0, 8, 16, 31]).unwrap();
        let models = protos
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let l = i as Label * 3;
                (l, ClassModel { class_id: l, prototype: FeatureVector(p.clone()), sample_count: 1 })
            })
            .collect();
        let ms = ModelSet { chromosome: ch, fuzzy_params: FuzzyParams::default(), models };
        let mut allowed = ms.labels();
        let fx = FeatureVector(x);
        let first = classify(&fx, &ms, &allowed).unwrap();
        use rand::seq::SliceRandom;
        allowed.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let second = classify(&fx, &ms, &allowed).unwrap();
        prop_assert_eq!(&first, &second);
        // Oracle: highest score, smallest label among ties.
        let best = first.scores.values().cloned().fold(f64::MIN, f64::max);
        let want = *first.scores.iter().find(|(_, s)| **s == best).unwrap().0;
        prop_assert_eq!(first.label, want);
    }

    #[test]
    fn accuracy_counts_agreements(pairs in prop::collection::vec((0u32..6, 0u32..6), 1..200)) {
        let labels: Vec<Label> = (0..6).collect();
        let cm = confusion(&pairs, &labels).unwrap();
        let agree = pairs.iter().filter(|(t, p)| t == p).count();
        prop_assert_eq!(cm.total(), pairs.len() as u64);
        prop_assert_eq!(cm.correct(), agree as u64);
        prop_assert_eq!(accuracy(&cm).unwrap(), agree as f64 / pairs.len() as f64);
        for l in &labels {
            prop_assert_eq!(cm.row_total(*l), pairs.iter().filter(|(t, _)| t == l).count() as u64);
        }
    }

    #[test]
    fn groups_are_disjoint_linked_components(
        counts in prop::collection::vec(prop::collection::vec(0u64..12, 8), 8),
        tau in 1u64..12,
    ) {
        let cm = ConfusionMatrix::from_counts((0..8).collect(), counts.clone()).unwrap();
        let groups = form_groups(&cm, tau);
        let mut seen = BTreeSet::new();
        for g in &groups {
            prop_assert!(g.len() >= 2);
            prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
            for l in g {
                prop_assert!(seen.insert(*l));
            }
        }
        // Oracle: linked pairs must share a group, and every group member
        // must be reachable through linked pairs (union-find by brute force).
        let linked = |i: usize, j: usize| counts[i][j] + counts[j][i] >= tau;
        let group_of = |l: usize| groups.iter().position(|g| g.contains(&(l as Label)));
        let mut comp: Vec<usize> = (0..8).collect();
        for _ in 0..8 {
            for i in 0..8 {
                for j in 0..8 {
                    if i != j && linked(i, j) {
                        let m = comp[i].min(comp[j]);
                        comp[i] = m;
                        comp[j] = m;
                    }
                }
            }
        }
        for i in 0..8 {
            let size = comp.iter().filter(|&&c| c == comp[i]).count();
            match group_of(i) {
                None => prop_assert_eq!(size, 1),
                Some(g) => {
                    for j in 0..8 {
                        prop_assert_eq!(group_of(j) == Some(g), comp[j] == comp[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn confusion_region_bounds_every_disagreeing_pixel(
        a in unit_vec(FRAME * FRAME),
        b in unit_vec(FRAME * FRAME),
        threshold in 0.05..=1.0f64,
    ) {
        let overlap = |v: &[f64], id| OverlapImage {
            image: NormImage::from_pixels(v.to_vec()).unwrap(),
            class_id: id,
            sample_count: 1,
        };
        let result = confusion_region(&[overlap(&a, 0), overlap(&b, 1)], threshold);
        let hot: Vec<(usize, usize)> = (0..FRAME)
            .flat_map(|r| (0..FRAME).map(move |c| (r, c)))
            .filter(|&(r, c)| (a[r * FRAME + c] - b[r * FRAME + c]).abs() >= threshold)
            .collect();
        match result {
            Err(_) => prop_assert!(hot.is_empty()),
            Ok(rect) => {
                prop_assert!(!hot.is_empty());
                let want = Rect::new(
                    hot.iter().map(|p| p.0).min().unwrap(),
                    hot.iter().map(|p| p.1).min().unwrap(),
                    hot.iter().map(|p| p.0).max().unwrap(),
                    hot.iter().map(|p| p.1).max().unwrap(),
                ).unwrap();
                prop_assert_eq!(rect, want);
            }
        }
    }

    #[test]
    fn operators_keep_chromosomes_valid(s1 in any::<u64>(), s2 in any::<u64>(), min in 2usize..6, extra in 0usize..8) {
        let bounds = CutBounds::new(min, min + extra).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s1);
        let region = Rect::new(4, 2, 27, 30).unwrap();
        let a = random_chromosome(region, bounds, &mut rng).unwrap();
        let b = random_chromosome(region, bounds, &mut ChaCha8Rng::seed_from_u64(s2)).unwrap();
        prop_assert!(a.is_valid(bounds) && b.is_valid(bounds));
        let (c, d) = crossover(&a, &b, bounds, &mut rng).unwrap();
        prop_assert!(c.is_valid(bounds), "crossover child {} invalid", c);
        prop_assert!(d.is_valid(bounds), "crossover child {} invalid", d);
        let m = mutate(&c, &mut rng, bounds);
        prop_assert!(m.is_valid(bounds), "mutant {} invalid", m);
        prop_assert_eq!(m.region, region);
    }

    #[test]
    fn chromosome_text_round_trips(ch in chromosome()) {
        let text = ch.to_string_with_region();
        let back: Chromosome = text.parse().unwrap();
        prop_assert_eq!(back, ch);
    }

    #[test]
    fn extra_ink_on_one_pixel_never_lowers_a_feature(
        img in image(), ch in chromosome(), w in 0usize..=4, r in 0usize..FRAME, c in 0usize..FRAME, bump in 0.0..1.0f64,
    ) {
        let mut inked = img.clone();
        inked.set(r, c, img.get(r, c) + bump);
        let fp = FuzzyParams { ramp: w };
        let a = extract_features(&img, &ch, fp).unwrap();
        let b = extract_features(&inked, &ch, fp).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!(y + 1e-12 >= *x);
        }
    }

    #[test]
    fn raising_tau_never_enlarges_the_grouped_set(
        counts in prop::collection::vec(prop::collection::vec(0u64..12, 6), 6),
        tau in 1u64..12,
        step in 1u64..6,
    ) {
        let cm = ConfusionMatrix::from_counts((0..6).collect(), counts).unwrap();
        let union = |t| form_groups(&cm, t).into_iter().flatten().collect::<BTreeSet<Label>>();
        prop_assert!(union(tau + step).is_subset(&union(tau)));
    }

    #[test]
    fn region_override_is_returned_verbatim(t in 0usize..16, l in 0usize..16, h in 1usize..16, w in 1usize..16) {
        let rect = Rect::new(t, l, t + h, l + w).unwrap();
        let gcfg = GroupingConfig { region_overrides: [(vec![2, 7], rect)].into(), ..GroupingConfig::default() };
        let blank = |id| OverlapImage { image: NormImage::blank(), class_id: id, sample_count: 1 };
        prop_assert_eq!(gcfg.resolve_region(&[2, 7], &[blank(2), blank(7)]).unwrap(), rect);
    }

    #[test]
    fn normalizing_a_full_frame_binary_image_is_identity(bits in prop::collection::vec(any::<bool>(), FRAME * FRAME)) {
        let mut px: Vec<u8> = bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        px[0] = 255;
        px[FRAME * FRAME - 1] = 255;
        let once = normalize(&RawImage::new(FRAME, FRAME, px.clone()).unwrap(), false).unwrap();
        prop_assert_eq!(once.to_bytes(), px);
        let twice = normalize(&RawImage::new(FRAME, FRAME, once.to_bytes()).unwrap(), false).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn overlap_of_copies_is_the_stretched_image(img in image(), k in 1usize..6) {
        let copies = vec![&img; k];
        let o = overlap_image(&copies, 4).unwrap();
        let (lo, hi) = img.pixels().iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        for (got, v) in o.image.pixels().iter().zip(img.pixels()) {
            prop_assert!((got - (v - lo) / (hi - lo)).abs() < 1e-12);
        }
        prop_assert!(o.image.pixels().contains(&0.0) && o.image.pixels().contains(&1.0));
        prop_assert_eq!(o.sample_count, k);
    }

    #[test]
    fn cropping_to_the_frame_changes_nothing(img in image()) {
        let sub = crop(&img, Rect::FULL);
        for r in 0..FRAME {
            for c in 0..FRAME {
                prop_assert_eq!(sub.get(r, c), img.get(r, c));
            }
        }
    }
}

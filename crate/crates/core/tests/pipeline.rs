use wfpsnr::fuzzy::{Orientation, SystemConfig};
use wfpsnr::image::{decode_pgm, encode_pgm};
use wfpsnr::synthetic::test_image;
use wfpsnr::watermark::{decile_regions, embed, EmbedSpec};
use wfpsnr::Pipeline;

#[test]
fn embedding_in_important_blocks_costs_more_than_elsewhere() {
    let img = test_image();
    let pipeline = Pipeline::default();
    let weights = pipeline.weights(&img).unwrap();
    let (top, bottom) = decile_regions(&weights).unwrap();
    let mark = |region| {
        let spec = EmbedSpec {
            region: Some(region),
            ..EmbedSpec::new(0.05, 3)
        };
        embed(&img, &spec).unwrap()
    };
    let imp = pipeline.score(&img, &mark(top)).unwrap();
    let non = pipeline.score(&img, &mark(bottom)).unwrap();
    assert!(imp.wfpsnr < imp.psnr, "{imp:?}");
    assert!(non.wfpsnr > non.psnr, "{non:?}");
}

#[test]
fn shipped_config_matches_default_pipeline() {
    let img = test_image();
    let from_config = Pipeline::from_config(&SystemConfig::default()).unwrap();
    assert_eq!(
        from_config.weights(&img).unwrap(),
        Pipeline::default().weights(&img).unwrap()
    );
}

#[test]
fn embedding_orientation_inverts_the_verdicts() {
    let img = test_image();
    let noisy = decode_pgm(&encode_pgm(&img)).unwrap();
    let p = Pipeline {
        orientation: Orientation::Embedding,
        ..Pipeline::default()
    };
    let emb_weights = p.weights(&img).unwrap();
    let imp_weights = Pipeline::default().weights(&img).unwrap();
    let (top, _) = decile_regions(&imp_weights).unwrap();
    let mean_in_top = |w: &wfpsnr::fuzzy::WeightMap| {
        top.bits()
            .iter()
            .zip(w.weights())
            .filter(|(m, _)| **m)
            .map(|(_, v)| v)
            .sum::<f64>()
            / top.count() as f64
    };
    assert!(mean_in_top(&imp_weights) > 1.0);
    assert!(mean_in_top(&emb_weights) < 1.0);
    assert_eq!(p.score(&img, &noisy).unwrap().psnr, f64::INFINITY);
}

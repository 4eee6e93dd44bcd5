use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use wfpsnr::features::{canny_with, CannyConfig};
use wfpsnr::image::{encode_pgm, load_pgm, save_pgm};
use wfpsnr::GrayImage;

fn asset() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/synthetic.pgm")
}

fn wfpsnr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfpsnr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, img: &GrayImage) -> PathBuf {
    let p = dir.path().join(name);
    save_pgm(img, &p).unwrap();
    p
}

#[test]
fn bundled_asset_matches_generator() {
    assert_eq!(fs::read(asset()).unwrap(), encode_pgm(&wfpsnr::synthetic::test_image()));
}

#[test]
fn score_identical_files() {
    let out = wfpsnr(&["score", "--ref", path_str(&asset()), "--test", path_str(&asset())]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"mse\":0.0,\"psnr_db\":\"inf\",\"fmse\":0.0,\"wfpsnr_db\":\"inf\",\"L\":1}\n"
    );
    assert!(out.stderr.is_empty());
}

#[test]
fn score_flat_reference_is_plain_psnr() {
    let dir = TempDir::new().unwrap();
    let flat = write(&dir, "flat.pgm", &GrayImage::filled(40, 32, 128.0 / 255.0).unwrap());
    let test = write(
        &dir,
        "test.pgm",
        &GrayImage::from_fn(40, 32, |x, y| (128 + (x * y) % 9) as f64 / 255.0).unwrap(),
    );
    let out = wfpsnr(&["score", "--ref", path_str(&flat), "--test", path_str(&test)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["psnr_db"], v["wfpsnr_db"]);
    assert_eq!(v["mse"], v["fmse"]);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let small = write(&dir, "small.pgm", &GrayImage::filled(16, 16, 0.5).unwrap());
    let missing = dir.path().join("missing.pgm");
    let junk = dir.path().join("junk.pgm");
    fs::write(&junk, b"P2\n1 1\n255\n0\n").unwrap();

    let out = wfpsnr(&["score", "--ref", path_str(&asset()), "--test", path_str(&small)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = wfpsnr(&["score", "--ref", path_str(&missing), "--test", path_str(&small)]);
    assert_eq!(out.status.code(), Some(2));
    let out = wfpsnr(&[
        "map",
        "--input",
        path_str(&junk),
        "--out",
        path_str(&dir.path().join("m.pgm")),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let bad_config = dir.path().join("bad.json");
    fs::write(&bad_config, "{\"rules\": []}").unwrap();
    let out = wfpsnr(&[
        "--config",
        path_str(&bad_config),
        "score",
        "--ref",
        path_str(&small),
        "--test",
        path_str(&small),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = wfpsnr(&["score", "--ref"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn map_of_constant_image_is_mid_gray() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "flat.pgm", &GrayImage::filled(37, 21, 0.3).unwrap());
    let out_path = dir.path().join("map.pgm");
    let out = wfpsnr(&["map", "--input", path_str(&input), "--out", path_str(&out_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let map = load_pgm(&out_path).unwrap();
    assert_eq!((map.width(), map.height()), (37, 21));
    assert!(map.to_bytes().iter().all(|&b| b == 128));
}

#[test]
fn map_has_input_dimensions() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("map.pgm");
    let out = wfpsnr(&["map", "--input", path_str(&asset()), "--out", path_str(&out_path)]);
    assert!(out.status.success());
    let map = load_pgm(&out_path).unwrap();
    assert_eq!((map.width(), map.height()), (128, 128));
    assert!(map.data().contains(&0.0) && map.data().contains(&1.0));
}

/// Edge concentration from an edge map by direct enumeration of each
/// zero-padded 3×3 patch.
fn patch_variance_oracle(edges: &[bool], w: usize, h: usize) -> Vec<Vec<f64>> {
    let rows = h.div_ceil(8);
    let cols = w.div_ceil(8);
    let mut grid = vec![vec![0.0; cols]; rows];
    for (br, row) in grid.iter_mut().enumerate() {
        for (bc, cell) in row.iter_mut().enumerate() {
            let mut total = 0.0;
            let mut n = 0;
            for y in br * 8..((br + 1) * 8).min(h) {
                for x in bc * 8..((bc + 1) * 8).min(w) {
                    let mut samples = Vec::with_capacity(9);
                    for dy in -1i64..=1 {
                        for dx in -1i64..=1 {
                            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                            let inside = nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h;
                            samples.push(if inside && edges[ny as usize * w + nx as usize] {
                                1.0
                            } else {
                                0.0
                            });
                        }
                    }
                    let mean = samples.iter().sum::<f64>() / 9.0;
                    total += samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / 9.0;
                    n += 1;
                }
            }
            *cell = total / n as f64;
        }
    }
    let max = grid.iter().flatten().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        for v in grid.iter_mut().flatten() {
            *v /= max;
        }
    }
    grid
}

#[test]
fn dumped_edge_map_matches_oracle_on_checkerboard() {
    let dir = TempDir::new().unwrap();
    let board = GrayImage::from_fn(64, 48, |x, y| if (x / 6 + y / 6) % 2 == 0 { 0.2 } else { 0.8 }).unwrap();
    let input = write(&dir, "board.pgm", &board);
    let dump = dir.path().join("features");
    let out = wfpsnr(&[
        "map",
        "--input",
        path_str(&input),
        "--out",
        path_str(&dir.path().join("map.pgm")),
        "--dump-features",
        path_str(&dump),
    ]);
    assert!(out.status.success());
    for name in ["saliency.pgm", "intensity.pgm", "fuzzy.pgm"] {
        assert!(dump.join(name).exists(), "{name}");
    }
    let dumped = load_pgm(dump.join("edge_concentration.pgm")).unwrap();
    assert_eq!((dumped.width(), dumped.height()), (8, 6));

    let edges = canny_with(&board, &CannyConfig::default()).unwrap();
    assert!(edges.count() > 0);
    let oracle = patch_variance_oracle(edges.bits(), 64, 48);
    let bytes = dumped.to_bytes();
    for (r, row) in oracle.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            assert_eq!(bytes[r * 8 + c], (v * 255.0 + 0.5).floor() as u8, "block ({r}, {c})");
        }
    }
}

#[test]
fn features_json_shape() {
    let out = wfpsnr(&["features", "--input", path_str(&asset())]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"], 16);
    assert_eq!(v["cols"], 16);
    for key in ["saliency", "edge_concentration", "intensity", "fuzzy"] {
        assert_eq!(v[key].as_array().unwrap().len(), 256, "{key}");
    }
    let fuzzy: Vec<f64> = v["fuzzy"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(fuzzy.iter().all(|&f| (0.1..=0.27).contains(&f)));
}

#[test]
fn zero_magnitude_operations_copy_the_file() {
    let dir = TempDir::new().unwrap();
    let original = fs::read(asset()).unwrap();
    let sp = dir.path().join("sp.pgm");
    let out = wfpsnr(&[
        "attack",
        "--input",
        path_str(&asset()),
        "--out",
        path_str(&sp),
        "--kind",
        "sp",
        "--param",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&sp).unwrap(), original);

    let marked = dir.path().join("embed.pgm");
    let out = wfpsnr(&[
        "embed",
        "--input",
        path_str(&asset()),
        "--out",
        path_str(&marked),
        "--strength",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&marked).unwrap(), original);
}

#[test]
fn attack_respects_region_mask() {
    let dir = TempDir::new().unwrap();
    let mask = write(
        &dir,
        "mask.pgm",
        &GrayImage::from_fn(128, 128, |x, _| if x < 64 { 1.0 } else { 0.0 }).unwrap(),
    );
    let out_path = dir.path().join("attacked.pgm");
    let out = wfpsnr(&[
        "--seed",
        "7",
        "attack",
        "--input",
        path_str(&asset()),
        "--out",
        path_str(&out_path),
        "--kind",
        "gn",
        "--param",
        "0.1",
        "--region",
        path_str(&mask),
    ]);
    assert!(out.status.success());
    let before = load_pgm(asset()).unwrap().to_bytes();
    let after = load_pgm(&out_path).unwrap().to_bytes();
    let mut changed_left = 0;
    for y in 0..128 {
        for x in 0..128 {
            let i = y * 128 + x;
            if x >= 64 {
                assert_eq!(before[i], after[i]);
            } else if before[i] != after[i] {
                changed_left += 1;
            }
        }
    }
    assert!(changed_left > 4000);
}

#[test]
fn embed_changes_pixels_deterministically() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.pgm");
    let b = dir.path().join("b.pgm");
    for p in [&a, &b] {
        let out = wfpsnr(&[
            "embed",
            "--input",
            path_str(&asset()),
            "--out",
            path_str(p),
            "--strength",
            "0.2",
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(asset()).unwrap());
}

#[test]
fn experiment_on_bundled_image() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("table.csv");
    let out = wfpsnr(&["experiment", "--input", path_str(&asset()), "--csv", path_str(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["ordering_important_ok"], true);
    assert_eq!(summary["ordering_nonimportant_ok"], true);
    let table = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "attack,kind,param,region,psnr_db,wfpsnr_db");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("SP(0.05),salt-pepper,0.05,important,"));
    assert!(lines[4].starts_with("GN(0.05),gaussian-noise,0.05,non-important,"));

    let out = wfpsnr(&["experiment", "--input", path_str(&asset()), "--attack", "gn:0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("GN(0),gaussian-noise,0,important,inf,inf"), "{text}");
}

#[test]
fn orientation_flag_flips_the_map() {
    let dir = TempDir::new().unwrap();
    let imp = dir.path().join("imp.pgm");
    let emb = dir.path().join("emb.pgm");
    assert!(wfpsnr(&["map", "--input", path_str(&asset()), "--out", path_str(&imp)])
        .status
        .success());
    assert!(wfpsnr(&[
        "--orientation",
        "embedding",
        "map",
        "--input",
        path_str(&asset()),
        "--out",
        path_str(&emb)
    ])
    .status
    .success());
    let a = load_pgm(&imp).unwrap().to_bytes();
    let b = load_pgm(&emb).unwrap().to_bytes();
    let argmax = a.iter().enumerate().max_by_key(|(_, &v)| v).unwrap().0;
    assert!(b[argmax] < 128);
}

#[test]
fn calibrated_edge_scoring_runs() {
    let dir = TempDir::new().unwrap();
    let noisy = dir.path().join("noisy.pgm");
    assert!(wfpsnr(&[
        "attack",
        "--input",
        path_str(&asset()),
        "--out",
        path_str(&noisy),
        "--kind",
        "gn",
        "--param",
        "0.02"
    ])
    .status
    .success());
    let out = wfpsnr(&[
        "--calibrate-edge",
        "score",
        "--ref",
        path_str(&asset()),
        "--test",
        path_str(&noisy),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["wfpsnr_db"].as_f64().unwrap().is_finite());
}

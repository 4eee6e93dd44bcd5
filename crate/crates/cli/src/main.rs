use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wfpsnr::features::FEATURE_BLOCK;
use wfpsnr::fuzzy::{Orientation, SystemConfig};
use wfpsnr::image::{load_pgm, save_pgm};
use wfpsnr::watermark::{attack, embed, run_experiment, AttackKind, AttackPair, AttackSpec, EmbedSpec};
use wfpsnr::{BlockGrid, GrayImage, Pipeline, RegionMask};

/// Exit status for malformed command lines; distinct from the pipeline codes.
const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] wfpsnr::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Core(
                wfpsnr::Error::Io { .. }
                | wfpsnr::Error::UnsupportedMagic(_)
                | wfpsnr::Error::MalformedHeader(_)
                | wfpsnr::Error::TruncatedPayload { .. },
            ) => 2,
            CliError::Core(wfpsnr::Error::DimensionMismatch(_)) => 3,
            CliError::Core(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "wfpsnr",
    version,
    about = "Fuzzy HVS-weighted PSNR for 8/16-bit binary PGM images"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// JSON fuzzy-system description; the shipped defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Weight polarity; overrides the configuration file.
    #[arg(long, global = true)]
    orientation: Option<Orientation>,
    /// Refit the edge memberships by fuzzy c-means on the reference image.
    #[arg(long, global = true)]
    calibrate_edge: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the JSON score report of a test image against a reference.
    Score {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Write the per-pixel weight map as a min-max scaled PGM.
    Map {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the block feature maps and the fuzzy map into this directory.
        #[arg(long)]
        dump_features: Option<PathBuf>,
    },
    /// Print the block feature grids as JSON.
    Features {
        #[arg(long)]
        input: PathBuf,
        /// Also write one PGM per feature into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Additive mid-band DCT embedding.
    Embed(EmbedArgs),
    /// Region-masked salt-and-pepper or Gaussian noise.
    Attack(AttackArgs),
    /// Attack the most and least important deciles and compare scores.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Additive delta applied to each selected coefficient.
    #[arg(long)]
    strength: f64,
    #[arg(long, default_value_t = 16)]
    block_size: usize,
    /// Fraction of eligible blocks to mark, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    block_fraction: f64,
    /// PGM mask; pixels at or above mid-gray belong to the region.
    #[arg(long)]
    region: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// sp (salt-pepper) or gn (gaussian-noise).
    #[arg(long)]
    kind: AttackKind,
    /// Density for sp, standard deviation for gn.
    #[arg(long)]
    param: f64,
    /// PGM mask; the whole image is attacked when omitted.
    #[arg(long)]
    region: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long)]
    input: PathBuf,
    /// Attacks as kind:param, applied to both regions.
    #[arg(long = "attack", value_parser = parse_pair_spec, default_values = ["sp:0.05", "gn:0.05"])]
    attacks: Vec<(AttackKind, f64)>,
    /// Write the CSV table here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the JSON summary here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn parse_pair_spec(s: &str) -> Result<(AttackKind, f64), String> {
    let (kind, param) = s
        .split_once(':')
        .ok_or_else(|| format!("expected kind:param, got {s:?}"))?;
    let kind: AttackKind = kind.parse().map_err(|e: wfpsnr::Error| e.to_string())?;
    let param: f64 = param.parse().map_err(|_| format!("bad attack parameter {param:?}"))?;
    kind.check_param(param).map_err(|e| e.to_string())?;
    Ok((kind, param))
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_region(path: Option<&Path>, img: &GrayImage) -> CliResult<Option<RegionMask>> {
    let Some(path) = path else { return Ok(None) };
    let mask = RegionMask::from_image(&load_pgm(path)?);
    if !mask.matches(img) {
        return Err(wfpsnr::Error::DimensionMismatch(format!(
            "region {} is {}x{}, image is {}x{}",
            path.display(),
            mask.width(),
            mask.height(),
            img.width(),
            img.height()
        ))
        .into());
    }
    Ok(Some(mask))
}

fn pipeline(cli: &Cli) -> CliResult<Pipeline> {
    let config = match &cli.config {
        Some(path) => SystemConfig::load(path)?,
        None => SystemConfig::default(),
    };
    let mut p = Pipeline::from_config(&config)?;
    if let Some(o) = cli.orientation {
        p.orientation = o;
    }
    if cli.calibrate_edge {
        p.calibrate_edge = Some(cli.seed);
    }
    Ok(p)
}

fn grid_image(grid: &BlockGrid) -> CliResult<GrayImage> {
    Ok(GrayImage::from_clamped(
        grid.cols(),
        grid.rows(),
        grid.values().to_vec(),
    )?)
}

fn dump_features(dir: &Path, analysis: &wfpsnr::Analysis) -> CliResult<()> {
    create_dir(dir)?;
    let f = &analysis.features;
    save_pgm(&grid_image(&f.saliency)?, dir.join("saliency.pgm"))?;
    save_pgm(&grid_image(&f.edge_concentration)?, dir.join("edge_concentration.pgm"))?;
    save_pgm(&grid_image(&f.intensity)?, dir.join("intensity.pgm"))?;
    let fuzzy = &analysis.fuzzy;
    save_pgm(
        &GrayImage::from_min_max(fuzzy.cols(), fuzzy.rows(), fuzzy.values())?,
        dir.join("fuzzy.pgm"),
    )?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Score { reference, test } => {
            let reference = load_pgm(reference)?;
            let test = load_pgm(test)?;
            Ok(pipeline(cli)?.score(&reference, &test)?.to_json() + "\n")
        }
        Command::Map {
            input,
            out,
            dump_features: dump,
        } => {
            let img = load_pgm(input)?;
            let analysis = pipeline(cli)?.analyze(&img)?;
            let w = &analysis.weights;
            save_pgm(&GrayImage::from_min_max(w.width(), w.height(), w.weights())?, out)?;
            if let Some(dir) = dump {
                dump_features(dir, &analysis)?;
            }
            Ok(String::new())
        }
        Command::Features { input, out_dir } => {
            let img = load_pgm(input)?;
            let analysis = pipeline(cli)?.analyze(&img)?;
            if let Some(dir) = out_dir {
                dump_features(dir, &analysis)?;
            }
            let f = &analysis.features;
            let payload = json!({
                "width": img.width(),
                "height": img.height(),
                "block_size": FEATURE_BLOCK,
                "rows": f.rows(),
                "cols": f.cols(),
                "saliency": f.saliency.values(),
                "edge_concentration": f.edge_concentration.values(),
                "intensity": f.intensity.values(),
                "fuzzy": analysis.fuzzy.values(),
            });
            Ok(payload.to_string() + "\n")
        }
        Command::Embed(args) => {
            let img = load_pgm(&args.input)?;
            let spec = EmbedSpec {
                block_size: args.block_size,
                strength: args.strength,
                block_fraction: args.block_fraction,
                region: load_region(args.region.as_deref(), &img)?,
                seed: cli.seed,
            };
            save_pgm(&embed(&img, &spec)?, &args.out)?;
            Ok(String::new())
        }
        Command::Attack(args) => {
            let img = load_pgm(&args.input)?;
            let region = load_region(args.region.as_deref(), &img)?
                .unwrap_or_else(|| RegionMask::full(img.width(), img.height()));
            let spec = AttackSpec {
                kind: args.kind,
                param: args.param,
                region,
                seed: cli.seed,
            };
            save_pgm(&attack(&img, &spec)?, &args.out)?;
            Ok(String::new())
        }
        Command::Experiment(args) => {
            let img = load_pgm(&args.input)?;
            let weights = pipeline(cli)?.weights(&img)?;
            let pairs: Vec<AttackPair> = args
                .attacks
                .iter()
                .map(|&(kind, param)| AttackPair {
                    kind,
                    param,
                    seed: cli.seed,
                })
                .collect();
            let report = run_experiment(&img, &weights, &pairs)?;
            let summary = report.summary_json() + "\n";
            if let Some(path) = &args.summary {
                write_file(path, summary.as_bytes())?;
            }
            match &args.csv {
                Some(path) => {
                    write_file(path, report.to_csv().as_bytes())?;
                    Ok(summary)
                }
                None => Ok(report.to_csv()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(payload) => {
            print!("{payload}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("wfpsnr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_spec_parsing() {
        assert_eq!(parse_pair_spec("sp:0.05").unwrap(), (AttackKind::SaltPepper, 0.05));
        assert_eq!(
            parse_pair_spec("gaussian-noise:0.1").unwrap(),
            (AttackKind::GaussianNoise, 0.1)
        );
        assert!(parse_pair_spec("sp").is_err());
        assert!(parse_pair_spec("sp:2").is_err());
        assert!(parse_pair_spec("jpeg:0.5").is_err());
    }

    #[test]
    fn exit_codes() {
        let io = CliError::Io {
            path: "x".into(),
            source: std::io::Error::other("boom"),
        };
        assert_eq!(io.exit_code(), 2);
        let bad: CliError = wfpsnr::Error::UnsupportedMagic("P2".into()).into();
        assert_eq!(bad.exit_code(), 2);
        let dim: CliError = wfpsnr::Error::DimensionMismatch("x".into()).into();
        assert_eq!(dim.exit_code(), 3);
        let other: CliError = wfpsnr::Error::Config("x".into()).into();
        assert_eq!(other.exit_code(), 1);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data or format
//! error. Diagnostics go to stderr. Output files are staged and renamed into
//! place only once every output of a command has been produced.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io::{
    format_ascii_grid, read_ascii_grid, render_ppm, to_feature_collection, write_files_atomic,
    LayerEntry, Manifest, RunConfig,
};
use crate::raster::{Feature, FeatureSet, Geometry, Role};
use crate::scoring::{build_vulnerability_map, VulnerabilityMap};
use crate::synth::{generate_landscape, Landscape, SynthConfig};
use crate::validation::validate_sites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;

pub const SCORE_FILE: &str = "score.asc";
pub const CLASS_FILE: &str = "class.asc";
pub const IMAGE_FILE: &str = "vulnerability.ppm";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const RUN_CONFIG_FILE: &str = "run.json";

#[derive(Debug, Parser)]
#[command(
    name = "vulnmap",
    version,
    about = "Illegal-dumping vulnerability maps from vector layers and a DEM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded synthetic scene and a run configuration for it.
    Synth {
        #[arg(long)]
        seed: u64,
        /// Scene parameters (JSON); defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute score and class grids, a rendered map and a manifest.
    Score {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tally observed sites per vulnerability class.
    Validate {
        #[arg(long)]
        config: PathBuf,
        /// Report file (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a class grid (ESRI ASCII) to a PPM image.
    Render {
        #[arg(long)]
        classes: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Synth { seed, config, out } => synth(seed, config.as_deref(), &out),
        Command::Score { config, out } => score(&config, out.as_deref()),
        Command::Validate { config, out } => validate(&config, &out),
        Command::Render { classes, out } => render(&classes, &out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_DATA
            }
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Layer files written by `synth`, in a fixed order.
const SYNTH_LAYERS: [(&str, Role); 9] = [
    ("builtup.geojson", Role::Builtup),
    ("rivers.geojson", Role::River),
    ("floodplain.geojson", Role::Floodplain),
    ("pasture.geojson", Role::Pasture),
    ("degraded.geojson", Role::Degraded),
    ("loam.geojson", Role::Loam),
    ("roads.geojson", Role::Road),
    ("exclusion.geojson", Role::Exclusion),
    ("sites.geojson", Role::Sites),
];

/// Files for a synthetic scene: DEM, one GeoJSON per role and a run config
/// pointing at them with relative paths.
pub fn landscape_files(scene: &Landscape, config: &SynthConfig) -> Vec<(String, Vec<u8>)> {
    let mut files = vec![(
        "dem.asc".to_string(),
        format_ascii_grid(scene.dem.grid()).into_bytes(),
    )];
    let mut layers = Vec::new();
    for (name, role) in SYNTH_LAYERS {
        let set = if role == Role::Sites {
            FeatureSet::new(
                scene
                    .sites
                    .iter()
                    .map(|s| Feature {
                        geometry: Geometry::Point(s.location),
                        role: Role::Sites,
                        name: Some(s.id.clone()),
                        date: s.date.clone(),
                    })
                    .collect(),
            )
        } else {
            FeatureSet::new(scene.features.with_role(role).cloned().collect())
        };
        files.push((name.to_string(), to_feature_collection(&set).into_bytes()));
        layers.push(LayerEntry {
            path: name.into(),
            role,
        });
    }
    let mut run = RunConfig::new("dem.asc", layers);
    run.seed = Some(config.seed);
    files.push((RUN_CONFIG_FILE.to_string(), run.to_json().into_bytes()));
    let mut synth_json = serde_json::to_string_pretty(config).expect("in-memory JSON");
    synth_json.push('\n');
    files.push(("synth.json".to_string(), synth_json.into_bytes()));
    files
}

fn synth(seed: u64, config: Option<&Path>, out: &Path) -> Result<()> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SynthConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => SynthConfig::default(),
    };
    cfg.seed = seed;
    let scene = generate_landscape(&cfg)?;
    create_dir(out)?;
    let files: Vec<(PathBuf, Vec<u8>)> = landscape_files(&scene, &cfg)
        .into_iter()
        .map(|(name, bytes)| (out.join(name), bytes))
        .collect();
    write_files_atomic(&files)?;
    println!("wrote synthetic scene (seed {seed}) to {}", out.display());
    Ok(())
}

fn build_map(
    config_path: &Path,
) -> Result<(
    RunConfig,
    PathBuf,
    VulnerabilityMap,
    crate::io::config::Inputs,
)> {
    let (config, base) = RunConfig::load(config_path)?;
    let inputs = config.load_inputs(&base)?;
    let map = build_vulnerability_map(
        &inputs.dem,
        &inputs.features,
        &config.weights,
        &config.radii,
        config.min_area,
    )?;
    Ok((config, base, map, inputs))
}

/// Score, class, image and manifest bytes for a finished map.
pub fn score_outputs(config: &RunConfig, map: &VulnerabilityMap) -> Result<Vec<(String, Vec<u8>)>> {
    let score = format_ascii_grid(&map.scores).into_bytes();
    let class = format_ascii_grid(&map.classes).into_bytes();
    let image = render_ppm(&map.classes)?;
    let mut manifest = Manifest::new(config, map);
    manifest.record_output(SCORE_FILE, &score);
    manifest.record_output(CLASS_FILE, &class);
    manifest.record_output(IMAGE_FILE, &image);
    Ok(vec![
        (SCORE_FILE.into(), score),
        (CLASS_FILE.into(), class),
        (IMAGE_FILE.into(), image),
        (MANIFEST_FILE.into(), manifest.to_json().into_bytes()),
    ])
}

fn score(config_path: &Path, out: Option<&Path>) -> Result<()> {
    let (config, base, map, _) = build_map(config_path)?;
    let out_dir = match (out, &config.output_dir) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(dir)) if dir.is_absolute() => dir.clone(),
        (None, Some(dir)) => base.join(dir),
        (None, None) => {
            return Err(Error::Config(
                "no output directory: pass --out or set `output_dir`".into(),
            ))
        }
    };
    let outputs = score_outputs(&config, &map)?;
    create_dir(&out_dir)?;
    let files: Vec<(PathBuf, Vec<u8>)> = outputs
        .into_iter()
        .map(|(name, bytes)| (out_dir.join(name), bytes))
        .collect();
    write_files_atomic(&files)?;
    println!("wrote {} outputs to {}", files.len(), out_dir.display());
    Ok(())
}

fn validate(config_path: &Path, out: &Path) -> Result<()> {
    let (_, _, map, inputs) = build_map(config_path)?;
    let report = validate_sites(&inputs.sites, &map);
    let mut text = serde_json::to_string_pretty(&report).expect("in-memory JSON");
    text.push('\n');
    write_files_atomic(&[(out.to_path_buf(), text.into_bytes())])?;
    println!(
        "{} sites: {} validated, {} outside the buffer",
        report.total, report.validated, report.outside_buffer
    );
    Ok(())
}

fn render(classes: &Path, out: &Path) -> Result<()> {
    let grid = read_ascii_grid(classes)?;
    let bytes = render_ppm(&grid).map_err(|e| Error::format(classes, e.to_string()))?;
    write_files_atomic(&[(out.to_path_buf(), bytes)])
}

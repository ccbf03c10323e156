//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! name = "simple_rectangle"
//! geometry = "exact"              # or "reconstructed"
//! origin = [0.0, 0.0]
//! allow_panel_rotation = false    # also try each panel turned 90 degrees
//! strategy = "first-fit"          # or "best-fit"
//!
//! [policy]
//! rotation = "r90"                # "none", "r180" or "r90"
//! flip = true
//!
//! [[panels]]
//! id = "P50x100"
//! width = 50.0
//! height = 100.0
//!
//! [[regions]]
//! name = "floor"
//! outer = [[0.0, 0.0], [300.0, 0.0], [300.0, 300.0], [0.0, 300.0]]
//! holes = [[[50.0, 50.0], [100.0, 50.0], [100.0, 150.0], [50.0, 150.0]]]
//!
//! [algorithm]
//! kind = "greedy"                 # or "mc" / "ga" with their parameters
//! ```

use std::fmt;
use std::fs;
use std::path::Path;

use mcpo_core::geometry::{Point, PolygonRegion, Ring};
use mcpo_core::nesting::{PlacementStrategy, RotationPolicy, TransformPolicy};
use mcpo_core::optimizers::{GaConfig, McConfig};
use mcpo_core::overlay::{OriginPoint, StockPanel};
use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometrySource {
    Exact,
    Reconstructed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Greedy,
    Mc(McConfig),
    Ga(GaConfig),
}

impl AlgorithmConfig {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmConfig::Greedy => "greedy",
            AlgorithmConfig::Mc(_) => "mc",
            AlgorithmConfig::Ga(_) => "ga",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            AlgorithmConfig::Greedy => None,
            AlgorithmConfig::Mc(c) => Some(c.seed),
            AlgorithmConfig::Ga(c) => Some(c.seed),
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            AlgorithmConfig::Greedy => AlgorithmConfig::Greedy,
            AlgorithmConfig::Mc(c) => AlgorithmConfig::Mc(McConfig { seed, ..c }),
            AlgorithmConfig::Ga(c) => AlgorithmConfig::Ga(GaConfig { seed, ..c }),
        }
    }
}

impl fmt::Display for AlgorithmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmConfig::Greedy => write!(f, "greedy"),
            AlgorithmConfig::Mc(c) => write!(
                f,
                "mc (iterations {}, max flips {}, flip probability {}, seed {})",
                c.iterations,
                c.max_flips.map_or_else(|| "all".to_string(), |m| m.to_string()),
                c.flip_probability,
                c.seed
            ),
            AlgorithmConfig::Ga(c) => write!(
                f,
                "ga (population {}, generations {}, crossover {}, mutation {}, elitism {}, seed {})",
                c.population, c.generations, c.crossover_probability, c.mutation_probability, c.elitism, c.seed
            ),
        }
    }
}

/// One building section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub region: PolygonRegion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub geometry: GeometrySource,
    pub regions: Vec<Section>,
    pub candidate_panels: Vec<StockPanel>,
    pub origin: OriginPoint,
    pub allow_panel_rotation: bool,
    pub policy: TransformPolicy,
    pub strategy: PlacementStrategy,
    pub algorithm: AlgorithmConfig,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    geometry: GeometrySource,
    #[serde(default)]
    origin: [f64; 2],
    #[serde(default)]
    allow_panel_rotation: bool,
    #[serde(default)]
    strategy: PlacementStrategy,
    #[serde(default)]
    policy: PolicyFile,
    panels: Vec<PanelFile>,
    regions: Vec<RegionFile>,
    #[serde(default = "greedy")]
    algorithm: AlgorithmConfig,
}

fn greedy() -> AlgorithmConfig {
    AlgorithmConfig::Greedy
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyFile {
    #[serde(default)]
    rotation: RotationPolicy,
    #[serde(default)]
    flip: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PanelFile {
    id: String,
    width: f64,
    height: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    name: String,
    outer: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    holes: Vec<Vec<[f64; 2]>>,
}

fn ring(points: &[[f64; 2]], what: impl Fn() -> String) -> Result<Ring> {
    Ring::new(points.iter().map(|&[x, y]| Point::new(x, y)).collect())
        .map_err(|e| PipelineError::Validation(format!("{}: {e}", what())))
}

fn points(r: &Ring) -> Vec<[f64; 2]> {
    r.vertices().iter().map(|p| [p.x, p.y]).collect()
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario> {
        if self.regions.is_empty() {
            return Err(PipelineError::Validation("scenario has no regions".into()));
        }
        if self.panels.is_empty() {
            return Err(PipelineError::Validation("scenario has no candidate panels".into()));
        }
        let origin = Point::new(self.origin[0], self.origin[1]);
        if !origin.is_finite() {
            return Err(PipelineError::Validation("origin is not finite".into()));
        }
        let mut regions = Vec::with_capacity(self.regions.len());
        for (i, r) in self.regions.into_iter().enumerate() {
            let label = format!("region {i} ('{}')", r.name);
            let outer = ring(&r.outer, || format!("{label} outer ring"))?;
            let holes = r
                .holes
                .iter()
                .enumerate()
                .map(|(h, pts)| ring(pts, || format!("{label} hole {h}")))
                .collect::<Result<Vec<_>>>()?;
            let region = PolygonRegion::new(outer, holes).map_err(|e| PipelineError::Validation(format!("{label}: {e}")))?;
            regions.push(Section { name: r.name, region });
        }
        let candidate_panels = self
            .panels
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                StockPanel::new(p.id.clone(), p.width, p.height)
                    .map_err(|e| PipelineError::Validation(format!("panel {i} ('{}'): {e}", p.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        match &self.algorithm {
            AlgorithmConfig::Greedy => {}
            AlgorithmConfig::Mc(c) => c.validate().map_err(|e| PipelineError::Validation(format!("algorithm: {e}")))?,
            AlgorithmConfig::Ga(c) => c.validate().map_err(|e| PipelineError::Validation(format!("algorithm: {e}")))?,
        }
        Ok(Scenario {
            name: self.name,
            geometry: self.geometry,
            regions,
            candidate_panels,
            origin: OriginPoint(origin),
            allow_panel_rotation: self.allow_panel_rotation,
            policy: TransformPolicy::new(self.policy.rotation, self.policy.flip),
            strategy: self.strategy,
            algorithm: self.algorithm,
        })
    }

    fn from_scenario(s: &Scenario) -> Self {
        ScenarioFile {
            name: s.name.clone(),
            geometry: s.geometry,
            origin: [s.origin.0.x, s.origin.0.y],
            allow_panel_rotation: s.allow_panel_rotation,
            strategy: s.strategy,
            policy: PolicyFile {
                rotation: s.policy.rotation,
                flip: s.policy.allow_flip,
            },
            panels: s
                .candidate_panels
                .iter()
                .map(|p| PanelFile {
                    id: p.id.clone(),
                    width: p.dims.width,
                    height: p.dims.height,
                })
                .collect(),
            regions: s
                .regions
                .iter()
                .map(|r| RegionFile {
                    name: r.name.clone(),
                    outer: points(r.region.outer()),
                    holes: r.region.holes().iter().map(points).collect(),
                })
                .collect(),
            algorithm: s.algorithm,
        }
    }
}

pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| PipelineError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    file.validate()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    parse_scenario(&text, path)
}

pub fn scenario_to_toml(s: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from_scenario(s)).expect("scenario fields are all representable in TOML")
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, scenario_to_toml(s)).map_err(|e| PipelineError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
name = "t"
geometry = "exact"
[[panels]]
id = "a"
width = 10
height = 20
[[regions]]
name = "r"
outer = [[0, 0], [30, 0], [30, 40], [0, 40]]
"#;

    fn parse(s: &str) -> Result<Scenario> {
        parse_scenario(s, Path::new("test.toml"))
    }

    #[test]
    fn defaults_apply() {
        let s = parse(SMALL).unwrap();
        assert_eq!(s.origin, OriginPoint(Point::ORIGIN));
        assert_eq!(s.algorithm, AlgorithmConfig::Greedy);
        assert_eq!(s.policy, TransformPolicy::default());
        assert_eq!(s.strategy, PlacementStrategy::FirstFit);
        assert_eq!(s.regions[0].region.area(), 1200.0);
    }

    #[test]
    fn algorithm_blocks() {
        let mc = parse(&format!("{SMALL}[algorithm]\nkind = \"mc\"\niterations = 5\nseed = 9\n")).unwrap();
        assert_eq!(
            mc.algorithm,
            AlgorithmConfig::Mc(McConfig { iterations: 5, seed: 9, ..McConfig::default() })
        );
        let ga = parse(&format!("{SMALL}[algorithm]\nkind = \"ga\"\npopulation = 3\n"));
        assert!(matches!(ga, Err(PipelineError::Validation(m)) if m.contains("population")));
    }

    #[test]
    fn two_vertex_ring_names_the_region() {
        let bad = SMALL.replace("[[0, 0], [30, 0], [30, 40], [0, 40]]", "[[0, 0], [30, 0]]");
        match parse(&bad) {
            Err(PipelineError::Validation(m)) => assert!(m.contains("region 0 ('r') outer ring"), "{m}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hole_outside_is_rejected() {
        let bad = format!("{SMALL}holes = [[[40, 1], [50, 1], [50, 5]]]\n");
        let m = match parse(&bad) {
            Err(PipelineError::Validation(m)) => m,
            other => panic!("unexpected {other:?}"),
        };
        assert!(m.contains("region 0 ('r')") && m.contains("hole 0"), "{m}");
    }

    #[test]
    fn empty_panel_list() {
        let bad = SMALL.replace("[[panels]]\nid = \"a\"\nwidth = 10\nheight = 20\n", "panels = []\n");
        assert!(matches!(parse(&bad), Err(PipelineError::Validation(m)) if m.contains("no candidate panels")));
    }

    #[test]
    fn malformed_file_is_a_parse_error() {
        assert!(matches!(parse("name = "), Err(PipelineError::Parse { .. })));
        assert!(matches!(parse(&format!("{SMALL}colour = 1\n")), Err(PipelineError::Parse { .. })));
    }

    #[test]
    fn round_trip() {
        let text = format!("{SMALL}[algorithm]\nkind = \"ga\"\npopulation = 4\nelitism = true\n");
        let s = parse(&text).unwrap();
        let again = parse(&scenario_to_toml(&s)).unwrap();
        assert_eq!(s, again);
        let mc = parse(&format!("{SMALL}[algorithm]\nkind = \"mc\"\nmax_flips = 3\n")).unwrap();
        assert_eq!(parse(&scenario_to_toml(&mc)).unwrap(), mc);
    }
}

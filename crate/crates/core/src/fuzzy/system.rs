//! Mamdani min-max inference over saliency, edge concentration and intensity.

use super::membership::{triangular_partition, FuzzyVariable, Level, MembershipFunction, OutputLevel, Variable};
use crate::error::{Error, Result};
use crate::features::FeatureMaps;
use crate::image::BlockGrid;

/// Crisp output domain of the importance map.
pub const OUTPUT_DOMAIN: (f64, f64) = (0.1, 0.27);
/// Number of samples used for centroid defuzzification.
pub const CENTROID_GRID: usize = 1024;

/// Default output-set peaks: five triangles spaced `0.17 / 6` apart whose
/// outer feet land exactly on the domain bounds.
pub fn default_output_peaks() -> [f64; 5] {
    let (lo, hi) = OUTPUT_DOMAIN;
    let step = (hi - lo) / 6.0;
    std::array::from_fn(|k| lo + step * (k + 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub saliency: Level,
    pub edge: Level,
    pub intensity: Level,
    pub output: OutputLevel,
}

/// Complete 27-entry rule table, one consequent per antecedent triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleBase {
    consequents: [OutputLevel; 27],
}

impl RuleBase {
    pub fn from_rules(rules: &[Rule]) -> Result<Self> {
        if rules.len() != 27 {
            return Err(Error::Config(format!("rule base needs 27 rules, got {}", rules.len())));
        }
        let mut table: [Option<OutputLevel>; 27] = [None; 27];
        for r in rules {
            let slot = &mut table[Self::slot(r.saliency, r.edge, r.intensity)];
            if slot.is_some() {
                return Err(Error::Config(format!(
                    "duplicate rule for (saliency={:?}, edge={:?}, intensity={:?})",
                    r.saliency, r.edge, r.intensity
                )));
            }
            *slot = Some(r.output);
        }
        Ok(Self {
            consequents: table.map(|c| c.expect("27 distinct rules fill the table")),
        })
    }

    /// Every antecedent maps to the same consequent.
    pub fn constant(output: OutputLevel) -> Self {
        Self {
            consequents: [output; 27],
        }
    }

    fn slot(s: Level, e: Level, i: Level) -> usize {
        s.index() * 9 + e.index() * 3 + i.index()
    }

    pub fn consequent(&self, s: Level, e: Level, i: Level) -> OutputLevel {
        self.consequents[Self::slot(s, e, i)]
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut out = Vec::with_capacity(27);
        for s in Level::ALL {
            for e in Level::ALL {
                for i in Level::ALL {
                    out.push(Rule {
                        saliency: s,
                        edge: e,
                        intensity: i,
                        output: self.consequent(s, e, i),
                    });
                }
            }
        }
        out
    }
}

impl Default for RuleBase {
    fn default() -> Self {
        RuleBase::from_rules(&default_rules()).expect("default rules are complete")
    }
}

/// Importance rises with saliency and falls with edge concentration and
/// intensity: consequent index `clamp(2 s - e - i + 2, 0, 4)`.
pub fn default_rules() -> Vec<Rule> {
    let mut rules = Vec::with_capacity(27);
    for s in Level::ALL {
        for e in Level::ALL {
            for i in Level::ALL {
                let idx = (2 * s.index() as i32 - e.index() as i32 - i.index() as i32 + 2).clamp(0, 4);
                rules.push(Rule {
                    saliency: s,
                    edge: e,
                    intensity: i,
                    output: OutputLevel::from_index(idx as usize).expect("clamped index"),
                });
            }
        }
    }
    rules
}

/// Mamdani fuzzy system. Rule firing uses `min`, rule aggregation `max`, and
/// the aggregated set is defuzzified by its centroid on a uniform grid over
/// [`OUTPUT_DOMAIN`].
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    variables: [FuzzyVariable; 3],
    rules: RuleBase,
    output_peaks: [f64; 5],
    output_sets: [MembershipFunction; 5],
    grid: Vec<f64>,
    // output set degrees at each grid point
    set_samples: Vec<[f64; 5]>,
}

impl FuzzySystem {
    pub fn new(
        saliency: [MembershipFunction; 3],
        edge: [MembershipFunction; 3],
        intensity: [MembershipFunction; 3],
        rules: RuleBase,
        output_peaks: [f64; 5],
    ) -> Result<Self> {
        let output_sets = output_sets_from_peaks(&output_peaks)?;
        let (lo, hi) = OUTPUT_DOMAIN;
        let grid: Vec<f64> = (0..CENTROID_GRID)
            .map(|i| lo + (hi - lo) * i as f64 / (CENTROID_GRID - 1) as f64)
            .collect();
        let set_samples = grid
            .iter()
            .map(|&x| std::array::from_fn(|k| output_sets[k].eval(x)))
            .collect();
        Ok(Self {
            variables: [
                FuzzyVariable {
                    variable: Variable::Saliency,
                    levels: saliency,
                },
                FuzzyVariable {
                    variable: Variable::Edge,
                    levels: edge,
                },
                FuzzyVariable {
                    variable: Variable::Intensity,
                    levels: intensity,
                },
            ],
            rules,
            output_peaks,
            output_sets,
            grid,
            set_samples,
        })
    }

    pub fn variable(&self, v: Variable) -> &FuzzyVariable {
        &self.variables[v as usize]
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    pub fn output_peaks(&self) -> [f64; 5] {
        self.output_peaks
    }

    pub fn output_set(&self, level: OutputLevel) -> &MembershipFunction {
        &self.output_sets[level.index()]
    }

    pub fn with_rules(&self, rules: RuleBase) -> Self {
        Self { rules, ..self.clone() }
    }

    /// Replaces the membership functions of one input variable.
    pub fn with_memberships(&self, v: Variable, levels: [MembershipFunction; 3]) -> Self {
        let mut out = self.clone();
        out.variables[v as usize].levels = levels;
        out
    }

    /// Crisp importance in [`OUTPUT_DOMAIN`] for one feature triple.
    pub fn infer(&self, saliency: f64, edge: f64, intensity: f64) -> Result<f64> {
        for (name, x) in [("saliency", saliency), ("edge", edge), ("intensity", intensity)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::param(format!("{name} input {x} outside [0, 1]")));
            }
        }
        let ds = self.variables[0].degrees(saliency);
        let de = self.variables[1].degrees(edge);
        let di = self.variables[2].degrees(intensity);

        // max over rules sharing a consequent commutes with clipping
        let mut strength = [0.0f64; 5];
        for s in Level::ALL {
            for e in Level::ALL {
                for i in Level::ALL {
                    let fire = ds[s.index()].min(de[e.index()]).min(di[i.index()]);
                    let k = self.rules.consequent(s, e, i).index();
                    strength[k] = strength[k].max(fire);
                }
            }
        }

        let (mut num, mut den) = (0.0, 0.0);
        for (x, sets) in self.grid.iter().zip(&self.set_samples) {
            let mut mu = 0.0f64;
            for k in 0..5 {
                mu = mu.max(strength[k].min(sets[k]));
            }
            num += x * mu;
            den += mu;
        }
        let (lo, hi) = OUTPUT_DOMAIN;
        if den <= 0.0 {
            return Ok(0.5 * (lo + hi));
        }
        Ok((num / den).clamp(lo, hi))
    }
}

impl Default for FuzzySystem {
    fn default() -> Self {
        FuzzySystem::new(
            triangular_partition(),
            triangular_partition(),
            triangular_partition(),
            RuleBase::default(),
            default_output_peaks(),
        )
        .expect("default system is valid")
    }
}

/// Triangles centred on each peak with feet on the neighbouring peaks; the
/// outer feet mirror the first and last spacing.
pub fn output_sets_from_peaks(peaks: &[f64; 5]) -> Result<[MembershipFunction; 5]> {
    let (lo, hi) = OUTPUT_DOMAIN;
    if peaks.iter().any(|p| !(lo..=hi).contains(p)) {
        return Err(Error::Config(format!("output peaks must lie in [{lo}, {hi}]")));
    }
    if peaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("output peaks must be strictly increasing".into()));
    }
    let left_foot = 2.0 * peaks[0] - peaks[1];
    let right_foot = 2.0 * peaks[4] - peaks[3];
    let mut sets = Vec::with_capacity(5);
    for k in 0..5 {
        let a = if k == 0 { left_foot } else { peaks[k - 1] };
        let c = if k == 4 { right_foot } else { peaks[k + 1] };
        sets.push(MembershipFunction::triangle(a, peaks[k], c)?);
    }
    Ok(sets.try_into().expect("five sets"))
}

/// Per-block inference over aligned feature grids.
pub fn fuzzy_map(features: &FeatureMaps, system: &FuzzySystem) -> Result<BlockGrid> {
    let FeatureMaps {
        saliency,
        edge_concentration,
        intensity,
    } = features;
    if !saliency.same_shape(edge_concentration) || !saliency.same_shape(intensity) {
        return Err(Error::DimensionMismatch("feature grids are not aligned".into()));
    }
    let mut out = saliency.clone();
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        *v = system.infer(
            saliency.values()[i],
            edge_concentration.values()[i],
            intensity.values()[i],
        )?;
    }
    Ok(out)
}

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Inclusive integer range, serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    pub const fn new(lo: usize, hi: usize) -> Self {
        IntRange { lo, hi }
    }

    pub const fn fixed(v: usize) -> Self {
        IntRange { lo: v, hi: v }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo <= v && v <= self.hi
    }

    fn check(&self, name: &str) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::param(name, format!("empty range [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }
}

impl From<[usize; 2]> for IntRange {
    fn from([lo, hi]: [usize; 2]) -> Self {
        IntRange { lo, hi }
    }
}

impl From<IntRange> for [usize; 2] {
    fn from(r: IntRange) -> Self {
        [r.lo, r.hi]
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(name, format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollectorParams {
    pub in_range: IntRange,
    pub noise_prob: f64,
}

impl Default for CollectorParams {
    fn default() -> Self {
        CollectorParams {
            in_range: IntRange::new(4, 20),
            noise_prob: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SinkParams {
    pub out_range: IntRange,
    pub noise_prob: f64,
}

impl Default for SinkParams {
    fn default() -> Self {
        SinkParams {
            out_range: IntRange::new(4, 20),
            noise_prob: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollusionParams {
    pub two_input_prob: f64,
    pub multi_input_range: IntRange,
    pub out_range: IntRange,
    pub noise_prob: f64,
    pub noise_count_range: IntRange,
}

impl Default for CollusionParams {
    fn default() -> Self {
        CollusionParams {
            two_input_prob: 0.5,
            multi_input_range: IntRange::new(3, 4),
            out_range: IntRange::new(1, 4),
            noise_prob: 0.3,
            noise_count_range: IntRange::new(1, 5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatterGatherParams {
    pub mid_range: IntRange,
    pub noise_prob: f64,
}

impl Default for ScatterGatherParams {
    fn default() -> Self {
        ScatterGatherParams {
            mid_range: IntRange::new(4, 10),
            noise_prob: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GatherScatterParams {
    pub in_range: IntRange,
    /// Fan-in at or above which the fan-out is drawn around the fan-in.
    pub large_threshold: usize,
    pub out_offset: usize,
    pub small_out_range: IntRange,
    pub noise_prob: f64,
}

impl Default for GatherScatterParams {
    fn default() -> Self {
        GatherScatterParams {
            in_range: IntRange::new(4, 10),
            large_threshold: 8,
            out_offset: 3,
            small_out_range: IntRange::new(3, 7),
            noise_prob: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CyclicParams {
    /// Cycle nodes in addition to the focal node.
    pub extra_range: IntRange,
    pub noise_prob: f64,
    pub noise_count_range: IntRange,
}

impl Default for CyclicParams {
    fn default() -> Self {
        CyclicParams {
            extra_range: IntRange::new(2, 10),
            noise_prob: 0.3,
            noise_count_range: IntRange::new(1, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BranchingParams {
    pub root_range: IntRange,
    /// `u <= p3` gives three children.
    pub p3: f64,
    /// `p3 < u <= p0` gives none; anything above gives two.
    pub p0: f64,
    pub max_depth: usize,
}

impl Default for BranchingParams {
    fn default() -> Self {
        BranchingParams {
            root_range: IntRange::new(2, 3),
            p3: 0.08,
            p0: 0.15,
            max_depth: 4,
        }
    }
}

/// Every generator constant, overridable from a config file or `key=value` pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorParams {
    pub collector: CollectorParams,
    pub sink: SinkParams,
    pub collusion: CollusionParams,
    pub sg: ScatterGatherParams,
    pub gs: GatherScatterParams,
    pub cyclic: CyclicParams,
    pub branching: BranchingParams,
}

impl GeneratorParams {
    /// Copy with every noise probability set to `p`.
    pub fn with_noise(mut self, p: f64) -> Self {
        self.collector.noise_prob = p;
        self.sink.noise_prob = p;
        self.collusion.noise_prob = p;
        self.sg.noise_prob = p;
        self.gs.noise_prob = p;
        self.cyclic.noise_prob = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.collector;
        c.in_range.check("collector.in_range")?;
        if c.in_range.lo < 3 {
            return Err(Error::param("collector.in_range", "lower bound must be >= 3 so the noise range is nonempty"));
        }
        check_prob("collector.noise_prob", c.noise_prob)?;

        let s = &self.sink;
        s.out_range.check("sink.out_range")?;
        if s.out_range.lo < 3 {
            return Err(Error::param("sink.out_range", "lower bound must be >= 3 so the noise range is nonempty"));
        }
        check_prob("sink.noise_prob", s.noise_prob)?;

        let co = &self.collusion;
        check_prob("collusion.two_input_prob", co.two_input_prob)?;
        co.multi_input_range.check("collusion.multi_input_range")?;
        co.out_range.check("collusion.out_range")?;
        co.noise_count_range.check("collusion.noise_count_range")?;
        check_prob("collusion.noise_prob", co.noise_prob)?;
        if co.multi_input_range.lo == 0 || co.out_range.lo == 0 {
            return Err(Error::param("collusion", "input and output counts must be >= 1"));
        }

        self.sg.mid_range.check("sg.mid_range")?;
        check_prob("sg.noise_prob", self.sg.noise_prob)?;

        let gs = &self.gs;
        gs.in_range.check("gs.in_range")?;
        gs.small_out_range.check("gs.small_out_range")?;
        check_prob("gs.noise_prob", gs.noise_prob)?;
        if gs.large_threshold <= gs.out_offset {
            return Err(Error::param("gs.large_threshold", "must exceed gs.out_offset"));
        }

        let cy = &self.cyclic;
        cy.extra_range.check("cyclic.extra_range")?;
        if cy.extra_range.lo < 1 {
            return Err(Error::param("cyclic.extra_range", "a cycle needs at least one node besides the focal node"));
        }
        cy.noise_count_range.check("cyclic.noise_count_range")?;
        check_prob("cyclic.noise_prob", cy.noise_prob)?;

        let b = &self.branching;
        b.root_range.check("branching.root_range")?;
        check_prob("branching.p3", b.p3)?;
        check_prob("branching.p0", b.p0)?;
        if b.p3 > b.p0 {
            return Err(Error::param("branching.p3", "must not exceed branching.p0"));
        }
        if b.max_depth < 1 {
            return Err(Error::param("branching.max_depth", "must be >= 1"));
        }
        Ok(())
    }

    /// Applies a dotted override such as `collector.noise_prob=0.1` or `sg.mid_range=[4,6]`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let (section, name) = key
            .split_once('.')
            .ok_or_else(|| Error::param(key, "expected `section.field`"))?;
        let mut doc = serde_json::to_value(&*self)?;
        let slot = doc
            .get_mut(section)
            .and_then(|s| s.get_mut(name))
            .ok_or_else(|| Error::param(key, "unknown parameter"))?;
        *slot = serde_json::from_str::<Value>(value)
            .map_err(|e| Error::param(key, format!("bad value `{value}`: {e}")))?;
        let updated: GeneratorParams =
            serde_json::from_value(doc).map_err(|e| Error::param(key, e.to_string()))?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }
}

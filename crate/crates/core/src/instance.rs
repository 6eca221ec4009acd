//! JSON problem instances.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, select_subfan, Compactification, FaceId, TropicalComplex};
use crate::curves::{phase_for_twists, twists_from_phase};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::lattice::{validate_primitive, LatticePoint, Triangulation};
use crate::phase::{
    phase_from_bases, phase_from_signs, validate_phase, RealPhaseStructure, SignDistribution,
};

/// Inputs beyond these bounds are rejected before any geometry is done.
pub const MAX_AMBIENT_DIM: usize = 5;
pub const MAX_POINTS: usize = 40;
pub const MAX_COORDINATE: i64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CompactificationSpec {
    Named(String),
    Cones { cones: Vec<Vec<LatticePoint>> },
}

impl Default for CompactificationSpec {
    fn default() -> Self {
        CompactificationSpec::Named("newton".into())
    }
}

impl CompactificationSpec {
    pub fn resolve(&self) -> Result<Compactification> {
        match self {
            CompactificationSpec::Named(s) if s == "newton" => Ok(Compactification::Newton),
            CompactificationSpec::Named(s) if s == "torus" => Ok(Compactification::Torus),
            CompactificationSpec::Named(s) => Err(Error::Instance(format!(
                "compactification must be \"newton\", \"torus\" or {{\"cones\": ...}}, got {s:?}"
            ))),
            CompactificationSpec::Cones { cones } => Ok(Compactification::Cones(cones.clone())),
        }
    }
}

/// The on-disk format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ambient_dim: usize,
    pub points: Vec<LatticePoint>,
    pub triangulation: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<BTreeMap<String, Vec<u8>>>,
    #[serde(default)]
    pub compactification: CompactificationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<String>>,
}

/// Where the real phase structure of an instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseSource {
    Signs,
    Phase,
    Twists,
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub complex: TropicalComplex,
    pub signs: Option<SignDistribution>,
    pub phase: Option<RealPhaseStructure>,
    pub phase_source: Option<PhaseSource>,
    pub twists: Option<Vec<usize>>,
}

impl Instance {
    pub fn require_phase(&self) -> Result<&RealPhaseStructure> {
        self.phase
            .as_ref()
            .ok_or_else(|| Error::Instance("this command needs signs, a phase or twists".into()))
    }
}

fn check_shape(file: &InstanceFile) -> Result<()> {
    let n = file.ambient_dim;
    if n == 0 || n > MAX_AMBIENT_DIM {
        return Err(Error::Instance(format!(
            "ambient_dim must be between 1 and {MAX_AMBIENT_DIM}"
        )));
    }
    if file.points.len() > MAX_POINTS {
        return Err(Error::Instance(format!(
            "at most {MAX_POINTS} points are supported"
        )));
    }
    for (i, p) in file.points.iter().enumerate() {
        if p.len() != n {
            return Err(Error::Instance(format!(
                "point {i} has {} coordinates, expected {n}",
                p.len()
            )));
        }
        if p.iter().any(|c| c.abs() > MAX_COORDINATE) {
            return Err(Error::Instance(format!(
                "point {i} has a coordinate beyond ±{MAX_COORDINATE}"
            )));
        }
    }
    for (i, s) in file.triangulation.iter().enumerate() {
        if s.iter().any(|&v| v >= file.points.len()) {
            return Err(Error::Instance(format!(
                "simplex {i} refers to a missing point"
            )));
        }
    }
    if let Some(signs) = &file.signs {
        if signs.len() != file.points.len() {
            return Err(Error::Instance(format!(
                "{} signs for {} points",
                signs.len(),
                file.points.len()
            )));
        }
    }
    if let CompactificationSpec::Cones { cones } = &file.compactification {
        if cones
            .iter()
            .flatten()
            .any(|r| r.len() != n || r.iter().any(|c| c.abs() > MAX_COORDINATE))
        {
            return Err(Error::Instance(
                "cone ray outside the ambient lattice".into(),
            ));
        }
    }
    Ok(())
}

fn parse_bases(
    x: &TropicalComplex,
    raw: &BTreeMap<String, Vec<u8>>,
) -> Result<BTreeMap<usize, BitVector>> {
    let mut bases = BTreeMap::new();
    for (key, bits) in raw {
        let id: FaceId = key.parse()?;
        let face = x.face_index(&id)?;
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Instance(format!(
                "phase entry {key} must contain only 0 and 1"
            )));
        }
        bases.insert(face, BitVector::from_u8s(bits));
    }
    Ok(bases)
}

pub fn parse_instance_file(file: InstanceFile) -> Result<Instance> {
    check_shape(&file)?;
    let t = Triangulation::new(file.points.clone(), file.triangulation.clone());
    validate_primitive(&t).map_err(Error::InvalidTriangulation)?;
    let polytope = t.polytope()?;
    let fan = select_subfan(&polytope, &file.compactification.resolve()?)?;
    let complex = build_complex(&t, &fan)?;

    let signs = file
        .signs
        .as_deref()
        .map(SignDistribution::parse)
        .transpose()?;
    let explicit = file
        .phase
        .as_ref()
        .map(|p| parse_bases(&complex, p))
        .transpose()?;
    let twists = file
        .twists
        .as_ref()
        .map(|list| {
            list.iter()
                .map(|s| complex.face_index(&s.parse::<FaceId>()?))
                .collect::<Result<Vec<usize>>>()
        })
        .transpose()?;

    let (phase, phase_source) = match (&signs, explicit) {
        (Some(s), explicit) => {
            let from_signs = phase_from_signs(&complex, s)?;
            if let Some(bases) = explicit {
                let differing: Vec<String> = bases
                    .iter()
                    .filter(|(f, b)| !from_signs.spaces.get(f).is_some_and(|s| s.contains(b)))
                    .map(|(f, _)| complex.faces[*f].id.to_string())
                    .collect();
                if !differing.is_empty() {
                    return Err(Error::PhaseMismatch(format!(
                        "explicit phase differs from the signs on {}",
                        differing.join(", ")
                    )));
                }
            }
            (Some(from_signs), Some(PhaseSource::Signs))
        }
        (None, Some(bases)) => (
            Some(phase_from_bases(&complex, &bases)?),
            Some(PhaseSource::Phase),
        ),
        (None, None) => match &twists {
            Some(t) if complex.n == 1 => (
                Some(phase_for_twists(&complex, t)?),
                Some(PhaseSource::Twists),
            ),
            _ => (None, None),
        },
    };
    if let Some(e) = &phase {
        validate_phase(&complex, e).map_err(Error::InvalidPhase)?;
        if let (Some(t), true) = (&twists, phase_source != Some(PhaseSource::Twists)) {
            if complex.n != 1 {
                return Err(Error::NotACurve);
            }
            let mut found = twists_from_phase(&complex, e)?;
            let mut wanted = t.clone();
            found.sort_unstable();
            wanted.sort_unstable();
            if found != wanted {
                return Err(Error::PhaseMismatch(
                    "listed twists differ from those of the phase".into(),
                ));
            }
        }
    }
    Ok(Instance {
        file,
        complex,
        signs,
        phase,
        phase_source,
        twists,
    })
}

pub fn parse_instance_str(s: &str) -> Result<Instance> {
    parse_instance_file(serde_json::from_str(s)?)
}

pub fn parse_instance_bytes(bytes: &[u8]) -> Result<Instance> {
    parse_instance_file(serde_json::from_slice(bytes)?)
}

pub fn parse_instance(path: &Path) -> Result<Instance> {
    parse_instance_bytes(&std::fs::read(path)?)
}

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::group::{GroupElement, GroupKind, Sl2, So3, RENORMALIZE_EVERY};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;

/// Default tolerance recorded in freshly sampled representations.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// A homomorphism from a presentation's group to `E`, given by generator
/// images.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep<E: GroupElement> {
    presentation: Presentation,
    images: Vec<E>,
    seed: u64,
    tolerance: f64,
}

impl<E: GroupElement> MatrixRep<E> {
    /// `images` are in the presentation's generator order.
    pub fn new(
        presentation: Presentation,
        images: Vec<E>,
        seed: u64,
        tolerance: f64,
    ) -> Result<Self> {
        if images.len() != presentation.rank() {
            return Err(Error::LengthMismatch {
                expected: presentation.rank(),
                got: images.len(),
            });
        }
        Ok(MatrixRep {
            presentation,
            images,
            seed,
            tolerance,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[E] {
        &self.images
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Images indexed by letter code: `2i ↦ g_i`, `2i + 1 ↦ g_i⁻¹`.
    pub fn letter_images(&self) -> Vec<E> {
        self.images.iter().flat_map(|g| [*g, g.inverse()]).collect()
    }

    pub fn evaluate(&self, w: &Word) -> Result<E> {
        let codes = self.presentation.encode(w)?;
        Ok(evaluate_codes(&self.letter_images(), &codes))
    }

    /// `‖ρ(R) − I‖` for the relator, or 0 for a free presentation.
    pub fn relator_residual(&self) -> f64 {
        if !self.presentation.is_surface() {
            return 0.0;
        }
        self.evaluate(self.presentation.relator())
            .expect("relator is over its own presentation")
            .distance_to_identity()
    }
}

/// Left-to-right product with the fixed renormalization cadence. The ball
/// walks use the same order, so both paths give bit-identical results.
pub fn evaluate_codes<E: GroupElement>(letters: &[E], codes: &[u32]) -> E {
    let mut acc = E::identity();
    for (i, &c) in codes.iter().enumerate() {
        acc = step(&acc, &letters[c as usize], i + 1);
    }
    acc
}

/// Appends one letter image to a prefix product of length `depth − 1`.
#[inline]
pub fn step<E: GroupElement>(prefix: &E, letter: &E, depth: usize) -> E {
    let next = prefix.compose(letter);
    if depth.is_multiple_of(RENORMALIZE_EVERY) {
        next.renormalize()
    } else {
        next
    }
}

/// `k` independent samples on the free presentation `x1..xk`, deterministic
/// in `seed`.
pub fn sample_tuple<E: GroupElement>(k: usize, seed: u64) -> Result<MatrixRep<E>> {
    if k < 2 {
        return Err(Error::RankTooSmall(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = (0..k).map(|_| E::sample(&mut rng)).collect();
    MatrixRep::new(Presentation::free(k), images, seed, DEFAULT_TOLERANCE)
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    group: GroupKind,
    presentation: Presentation,
    images: BTreeMap<String, Vec<f64>>,
    seed: u64,
    tolerance: f64,
}

impl<E: GroupElement> Serialize for MatrixRep<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Images keep generator order, so build the object by hand.
        use serde::ser::SerializeMap;
        struct Images<'a, E: GroupElement>(&'a MatrixRep<E>);
        impl<E: GroupElement> Serialize for Images<'_, E> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.images.len()))?;
                for (g, e) in self.0.presentation.generators().iter().zip(&self.0.images) {
                    map.serialize_entry(g.name(), &e.to_row_major())?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("group", &E::KIND)?;
        map.serialize_entry("presentation", &self.presentation)?;
        map.serialize_entry("images", &Images(self))?;
        map.serialize_entry("seed", &self.seed)?;
        map.serialize_entry("tolerance", &self.tolerance)?;
        map.end()
    }
}

impl<E: GroupElement> MatrixRep<E> {
    fn from_json(j: RepJson) -> Result<Self> {
        if j.group != E::KIND {
            return Err(Error::GroupMismatch(format!(
                "expected {}, found {}",
                E::KIND.as_str(),
                j.group.as_str()
            )));
        }
        let mut images = Vec::with_capacity(j.presentation.rank());
        for name in j.presentation.generator_names() {
            let entries = j
                .images
                .get(name)
                .ok_or_else(|| Error::AlphabetMismatch(format!("no image for generator {name}")))?;
            images.push(E::from_row_major(entries)?);
        }
        if j.images.len() != images.len() {
            return Err(Error::AlphabetMismatch(
                "images for unknown generators".into(),
            ));
        }
        MatrixRep::new(j.presentation, images, j.seed, j.tolerance)
    }
}

impl<'de, E: GroupElement> Deserialize<'de> for MatrixRep<E> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RepJson::deserialize(d)?;
        MatrixRep::from_json(j).map_err(D::Error::custom)
    }
}

/// A representation into either group, tagged by the JSON `group` field.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyRep {
    So3(MatrixRep<So3>),
    Sl2(MatrixRep<Sl2>),
}

impl AnyRep {
    pub fn sample(kind: GroupKind, k: usize, seed: u64) -> Result<AnyRep> {
        Ok(match kind {
            GroupKind::So3 => AnyRep::So3(sample_tuple(k, seed)?),
            GroupKind::Sl2 => AnyRep::Sl2(sample_tuple(k, seed)?),
        })
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            AnyRep::So3(_) => GroupKind::So3,
            AnyRep::Sl2(_) => GroupKind::Sl2,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        match self {
            AnyRep::So3(r) => r.presentation(),
            AnyRep::Sl2(r) => r.presentation(),
        }
    }
}

impl Serialize for AnyRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AnyRep::So3(r) => r.serialize(s),
            AnyRep::Sl2(r) => r.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for AnyRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RepJson::deserialize(d)?;
        let rep = match j.group {
            GroupKind::So3 => MatrixRep::from_json(j).map(AnyRep::So3),
            GroupKind::Sl2 => MatrixRep::from_json(j).map(AnyRep::Sl2),
        };
        rep.map_err(D::Error::custom)
    }
}

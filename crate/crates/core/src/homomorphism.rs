//! Homomorphisms between presented groups, given by generator images, and
//! the three eventually faithful families:
//!
//! * [`HomFamily::TwistFold`]: `Γ_{2r} → F_{2r}`, the fold `f` (collapse the
//!   mirrored surface onto one half) after `n` Dehn twists along
//!   `γ = [a1,a1']⋯[ar,ar']`. In closed form, `a_i ↦ x_i`, `a_i' ↦ x_i'`,
//!   `b_i ↦ γ̄ⁿ x_i γ̄⁻ⁿ`, `b_i' ↦ γ̄ⁿ x_i' γ̄⁻ⁿ` with `γ̄ = f(γ)`.
//! * [`HomFamily::ConjugateExtension`]: `F_{k+1} → F_k`, fixing `x1..xk` and
//!   sending `x_{k+1} ↦ bⁿ a b⁻ⁿ` for noncommuting `a, b`.
//! * [`HomFamily::PowerTwist`]: `F_{2r} → Γ_r`, `x1 ↦ a1·(a1')ⁿ`, all other
//!   generators to their namesakes.

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::presentation::{Presentation, SurfaceForm};
use crate::symbol::Gen;
use crate::word::Word;

/// A homomorphism `source → target` determined by generator images.
///
/// Construction checks that the source relator maps to the identity of the
/// target, so every value of this type is well defined.
#[derive(Clone, PartialEq)]
pub struct Homomorphism {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

/// Builds a homomorphism from `(generator name, image)` pairs.
pub fn make_hom<I, S>(source: Presentation, target: Presentation, images: I) -> Result<Homomorphism>
where
    I: IntoIterator<Item = (S, Word)>,
    S: AsRef<str>,
{
    let mut by_name: HashMap<String, Word> = HashMap::new();
    for (name, w) in images {
        let name = name.as_ref().to_owned();
        if source.position(Gen::new(&name)?).is_none() {
            return Err(Error::AlphabetMismatch(format!(
                "`{name}` is not a generator of the source {source}"
            )));
        }
        by_name.insert(name, w);
    }
    let ordered = source
        .generator_names()
        .iter()
        .map(|n| {
            by_name
                .remove(*n)
                .ok_or_else(|| Error::AlphabetMismatch(format!("no image given for `{n}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::from_images(source, target, ordered)
}

impl Homomorphism {
    /// Images listed in source generator order.
    pub fn from_images(
        source: Presentation,
        target: Presentation,
        images: Vec<Word>,
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        for w in &images {
            target.encode(w)?;
        }
        let hom = Homomorphism {
            source,
            target,
            images,
        };
        if hom.source.is_surface() {
            let image = hom.apply(hom.source.relator())?;
            if !hom.target.is_trivial(&image)? {
                return Err(Error::NotWellDefined(image.to_string()));
            }
        }
        Ok(hom)
    }

    pub fn identity(p: &Presentation) -> Homomorphism {
        let images = p.generators().iter().map(|&g| Word::generator(g)).collect();
        Homomorphism {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    /// Images in source generator order.
    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: Gen) -> Option<&Word> {
        self.source.position(gen).map(|i| &self.images[i])
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.substitute(|g| {
            self.image(g).cloned().ok_or_else(|| {
                Error::AlphabetMismatch(format!("`{g}` is not a generator of {}", self.source))
            })
        })
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.target != self.source {
            return Err(Error::ChainMismatch);
        }
        let images = inner
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Homomorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            images,
        })
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (g, w) in self.source.generators().iter().zip(&self.images) {
            m.entry(&g.name(), &w.to_string());
        }
        m.finish()
    }
}

/// `γ = [a1,a1']⋯[ar,ar']` in the mirrored genus-`2r` surface group.
pub fn separating_curve(r: usize) -> Word {
    (1..=r).fold(Word::identity(), |acc, i| {
        acc.multiply(&Word::gen(&format!("a{i}")).commutator(&Word::gen(&format!("a{i}'"))))
    })
}

/// `γ̄ = [x1,x1']⋯[xr,xr']`, the image of the separating curve under the fold.
pub fn folded_curve(r: usize) -> Word {
    (1..=r).fold(Word::identity(), |acc, i| {
        acc.multiply(&Word::gen(&format!("x{i}")).commutator(&Word::gen(&format!("x{i}'"))))
    })
}

/// Dehn twist along the separating curve: fixes `a_i, a_i'`, conjugates
/// `b_i, b_i'` by `γ`.
pub fn dehn_twist(r: usize) -> Result<Homomorphism> {
    twist_power(r, 1)
}

fn twist_power(r: usize, n: usize) -> Result<Homomorphism> {
    let surface = Presentation::surface(2 * r, SurfaceForm::Mirrored)?;
    let gamma_n = separating_curve(r).pow(n as i64);
    let images = surface
        .generators()
        .iter()
        .map(|&g| {
            let w = Word::generator(g);
            if g.name().starts_with('b') {
                w.conjugate(&gamma_n)
            } else {
                w
            }
        })
        .collect();
    Homomorphism::from_images(surface.clone(), surface, images)
}

/// The fold `Γ_{2r} → F_{2r}`: `a_i, b_i ↦ x_i` and `a_i', b_i' ↦ x_i'`.
pub fn fold(r: usize) -> Result<Homomorphism> {
    twist_fold_member(r, 0)
}

fn twist_fold_member(r: usize, n: usize) -> Result<Homomorphism> {
    let surface = Presentation::surface(2 * r, SurfaceForm::Mirrored)?;
    let free = Presentation::free_paired(r);
    let gamma_n = folded_curve(r).pow(n as i64);
    let images = surface
        .generators()
        .iter()
        .map(|g| {
            let name = g.name();
            let x = Word::gen(&format!("x{}", &name[1..]));
            if name.starts_with('b') {
                x.conjugate(&gamma_n)
            } else {
                x
            }
        })
        .collect();
    Homomorphism::from_images(surface, free, images)
}

/// A sequence of homomorphisms indexed by `n ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum HomFamily {
    /// Fold after `n` Dehn twists, `Γ_{2r} → F_{2r}`.
    TwistFold { r: usize },
    /// `F_{rank+1} → F_rank`, `x_{rank+1} ↦ bⁿ a b⁻ⁿ`.
    ConjugateExtension { rank: usize, a: Word, b: Word },
    /// `F_{2r} → Γ_r`, `x1 ↦ a1·(a1')ⁿ`.
    PowerTwist { r: usize },
}

/// Result of [`HomFamily::separate`].
#[derive(Clone, Debug)]
pub struct Separation {
    pub n: usize,
    pub hom: Homomorphism,
}

impl HomFamily {
    pub fn twist_fold(r: usize) -> Result<HomFamily> {
        if r == 0 {
            return Err(Error::GenusTooSmall(0));
        }
        Ok(HomFamily::TwistFold { r })
    }

    /// Checks `a, b ∈ F_rank` and that they do not commute.
    pub fn conjugate_extension(rank: usize, a: Word, b: Word) -> Result<HomFamily> {
        let target = Presentation::free(rank);
        target.encode(&a)?;
        target.encode(&b)?;
        if a.commutes(&b) {
            return Err(Error::CommutingPair(format!("[{a}] and [{b}]")));
        }
        Ok(HomFamily::ConjugateExtension { rank, a, b })
    }

    pub fn power_twist(r: usize) -> Result<HomFamily> {
        Presentation::surface(r, SurfaceForm::Standard)?;
        Ok(HomFamily::PowerTwist { r })
    }

    pub fn source(&self) -> Presentation {
        match self {
            HomFamily::TwistFold { r } => {
                Presentation::surface(2 * r, SurfaceForm::Mirrored).expect("validated genus")
            }
            HomFamily::ConjugateExtension { rank, .. } => Presentation::free(rank + 1),
            HomFamily::PowerTwist { r } => Presentation::free_paired(*r),
        }
    }

    pub fn target(&self) -> Presentation {
        match self {
            HomFamily::TwistFold { r } => Presentation::free_paired(*r),
            HomFamily::ConjugateExtension { rank, .. } => Presentation::free(*rank),
            HomFamily::PowerTwist { r } => {
                Presentation::surface(*r, SurfaceForm::Standard).expect("validated genus")
            }
        }
    }

    /// The `n`-th member, built in closed form.
    pub fn member(&self, n: i64) -> Result<Homomorphism> {
        if n < 0 {
            return Err(Error::BadIndex(n));
        }
        match self {
            HomFamily::TwistFold { r } => twist_fold_member(*r, n as usize),
            HomFamily::ConjugateExtension { rank, a, b } => {
                let mut images: Vec<Word> =
                    (1..=*rank).map(|i| Word::gen(&format!("x{i}"))).collect();
                images.push(a.conjugate(&b.pow(n)));
                Homomorphism::from_images(self.source(), self.target(), images)
            }
            HomFamily::PowerTwist { r } => {
                let source = self.source();
                let twisted = Word::gen("a1").multiply(&Word::gen("a1'").pow(n));
                let images = source
                    .generator_names()
                    .iter()
                    .map(|name| {
                        if *name == "x1" {
                            twisted.clone()
                        } else {
                            Word::gen(&format!("a{}", &name[1..]))
                        }
                    })
                    .collect();
                debug_assert_eq!(source.rank(), 2 * r);
                Homomorphism::from_images(source, self.target(), images)
            }
        }
    }

    /// Smallest `n ≤ horizon` such that every member with index in
    /// `[n, n + window]` keeps every element of `k` nontrivial.
    pub fn separate(&self, k: &[Word], horizon: usize, window: usize) -> Result<Separation> {
        self.separate_with(k, horizon, window, Execution::default())
    }

    pub fn separate_with(
        &self,
        k: &[Word],
        horizon: usize,
        window: usize,
        exec: Execution,
    ) -> Result<Separation> {
        let source = self.source();
        for w in k {
            if source.is_trivial(w)? {
                return Err(Error::TrivialElementInK(w.to_string()));
            }
        }
        let target = self.target();
        let last = horizon + window;
        let kills: Vec<Result<bool>> = exec::map_indexed(exec, last + 1, |m| {
            let hom = self.member(m as i64)?;
            for w in k {
                if target.is_trivial(&hom.apply(w)?)? {
                    return Ok(true);
                }
            }
            Ok(false)
        });
        let kills = kills.into_iter().collect::<Result<Vec<bool>>>()?;
        // Scan for the first run of `window + 1` clean indices.
        let mut run = 0;
        for (m, &killed) in kills.iter().enumerate() {
            run = if killed { 0 } else { run + 1 };
            if run == window + 1 {
                let n = m - window;
                return Ok(Separation {
                    n,
                    hom: self.member(n as i64)?,
                });
            }
        }
        Err(Error::HorizonExhausted { horizon, window })
    }
}

impl Serialize for Homomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Images<'a>(&'a Homomorphism);
        impl Serialize for Images<'_> {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.images.len()))?;
                for (g, w) in self.0.source.generators().iter().zip(&self.0.images) {
                    map.serialize_entry(g.name(), w)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("source", &self.source)?;
        map.serialize_entry("target", &self.target)?;
        map.serialize_entry("images", &Images(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Homomorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            source: Presentation,
            target: Presentation,
            images: HashMap<String, Word>,
        }
        let raw = Raw::deserialize(d)?;
        make_hom(raw.source, raw.target, raw.images).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    a: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    b: Option<Word>,
}

/// Canonical family kind for a tag; the legacy short tags are accepted as
/// aliases.
pub fn family_kind_tag(tag: &str) -> Option<&'static str> {
    match tag.to_ascii_lowercase().as_str() {
        "twist-fold" | "cor22" => Some("twist-fold"),
        "conjugate-extension" | "cor24" => Some("conjugate-extension"),
        "power-twist" | "cor25" => Some("power-twist"),
        _ => None,
    }
}

impl Serialize for HomFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match self {
            HomFamily::TwistFold { r } => FamilyJson {
                kind: "twist-fold".into(),
                r: Some(*r),
                rank: None,
                a: None,
                b: None,
            },
            HomFamily::ConjugateExtension { rank, a, b } => FamilyJson {
                kind: "conjugate-extension".into(),
                r: None,
                rank: Some(*rank),
                a: Some(a.clone()),
                b: Some(b.clone()),
            },
            HomFamily::PowerTwist { r } => FamilyJson {
                kind: "power-twist".into(),
                r: Some(*r),
                rank: None,
                a: None,
                b: None,
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = FamilyJson::deserialize(d)?;
        let missing = |f: &'static str| D::Error::missing_field(f);
        let family = match family_kind_tag(&json.kind) {
            Some("twist-fold") => HomFamily::twist_fold(json.r.ok_or_else(|| missing("r"))?),
            Some("conjugate-extension") => HomFamily::conjugate_extension(
                json.rank.ok_or_else(|| missing("rank"))?,
                json.a.ok_or_else(|| missing("a"))?,
                json.b.ok_or_else(|| missing("b"))?,
            ),
            Some(_) => HomFamily::power_twist(json.r.ok_or_else(|| missing("r"))?),
            None => {
                return Err(D::Error::custom(format!(
                    "unknown family kind `{}`",
                    json.kind
                )))
            }
        };
        family.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn fold_is_well_defined_and_not_injective() {
        let f = fold(1).unwrap();
        assert!(f.apply(&w("a1 b1-")).unwrap().is_identity());
        assert_eq!(
            f.apply(&w("a1 a1' a1- a1'-")).unwrap(),
            w("x1 x1' x1- x1'-")
        );
        assert!(f.apply(&Word::identity()).unwrap().is_identity());
        assert!(f.apply(f.source().relator()).unwrap().is_identity());
    }

    #[test]
    fn make_hom_examples() {
        let surface = Presentation::surface(2, SurfaceForm::Mirrored).unwrap();
        let free = Presentation::free_paired(1);
        let f = make_hom(
            surface.clone(),
            free.clone(),
            [
                ("a1", w("x1")),
                ("b1", w("x1")),
                ("a1'", w("x1'")),
                ("b1'", w("x1'")),
            ],
        )
        .unwrap();
        assert_eq!(f, fold(1).unwrap());

        let f2 = Presentation::free(2);
        assert!(make_hom(f2.clone(), f2.clone(), [("x1", w("x1")), ("x2", w("x2"))]).is_ok());

        let std2 = Presentation::surface(2, SurfaceForm::Standard).unwrap();
        let collapse = std2.generator_names().into_iter().map(|n| (n, w("x1")));
        assert!(make_hom(std2.clone(), f2.clone(), collapse).is_ok());

        let bad = [
            ("a1", w("x1")),
            ("a1'", w("x2")),
            ("a2", w("x1")),
            ("a2'", w("x1")),
        ];
        assert!(matches!(
            make_hom(std2.clone(), f2.clone(), bad),
            Err(Error::NotWellDefined(_))
        ));
        assert!(matches!(
            make_hom(f2.clone(), f2.clone(), [("x1", w("x1"))]),
            Err(Error::AlphabetMismatch(_))
        ));
        assert!(matches!(
            make_hom(f2.clone(), f2.clone(), [("x1", w("x1")), ("x2", w("x9"))]),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn composition_examples() {
        let f = fold(1).unwrap();
        let sigma = dehn_twist(1).unwrap();
        let id = Homomorphism::identity(f.source());
        assert_eq!(f.compose(&id).unwrap(), f);

        let fs = f.compose(&sigma).unwrap();
        let gamma_bar = folded_curve(1);
        let b1 = Gen::new("b1").unwrap();
        assert_eq!(fs.image(b1).unwrap(), &w("x1").conjugate(&gamma_bar));
        assert_eq!(fs.image(b1).unwrap().len(), 9);

        let ss = sigma.compose(&sigma).unwrap();
        let gamma = separating_curve(1);
        assert_eq!(ss.image(b1).unwrap(), &w("b1").conjugate(&gamma.pow(2)));
        assert_eq!(ss.image(b1).unwrap().len(), 17);

        assert_eq!(sigma.compose(&f).unwrap_err(), Error::ChainMismatch);
    }

    #[test]
    fn twist_is_well_defined_in_the_surface_group() {
        for r in 1..=3 {
            let sigma = dehn_twist(r).unwrap();
            let image = sigma.apply(sigma.source().relator()).unwrap();
            assert!(!image.is_identity());
            assert!(sigma.source().dehn_trivial(&image).unwrap());
        }
    }

    #[test]
    fn member_examples() {
        let fam = HomFamily::twist_fold(1).unwrap();
        let b1 = Gen::new("b1").unwrap();
        let m1 = fam.member(1).unwrap();
        assert_eq!(
            m1.image(b1).unwrap(),
            &w("x1").conjugate(&w("x1 x1' x1- x1'-"))
        );
        assert_eq!(m1.image(b1).unwrap().len(), 9);
        assert_eq!(fam.member(0).unwrap(), fold(1).unwrap());

        let pt = HomFamily::power_twist(2).unwrap();
        let x1 = Gen::new("x1").unwrap();
        assert_eq!(
            pt.member(3).unwrap().image(x1).unwrap(),
            &w("a1 a1' a1' a1'")
        );
        let p0 = pt.member(0).unwrap();
        for (g, img) in p0.source().generators().iter().zip(p0.images()) {
            assert_eq!(img.to_string(), format!("a{}", &g.name()[1..]));
        }

        let ce = HomFamily::conjugate_extension(2, w("x1"), w("x2")).unwrap();
        let x3 = Gen::new("x3").unwrap();
        assert_eq!(
            ce.member(2).unwrap().image(x3).unwrap(),
            &w("x2 x2 x1 x2- x2-")
        );

        assert_eq!(fam.member(-1).unwrap_err(), Error::BadIndex(-1));
        assert!(matches!(
            HomFamily::conjugate_extension(2, w("x1"), w("x1 x1")),
            Err(Error::CommutingPair(_))
        ));
    }

    #[test]
    fn closed_form_matches_iterated_twists() {
        let f = fold(1).unwrap();
        let sigma = dehn_twist(1).unwrap();
        let fam = HomFamily::twist_fold(1).unwrap();
        let mut iterated = Homomorphism::identity(sigma.source());
        for n in 0..=8 {
            assert_eq!(
                f.compose(&iterated).unwrap(),
                fam.member(n).unwrap(),
                "n = {n}"
            );
            iterated = sigma.compose(&iterated).unwrap();
        }
    }

    #[test]
    fn separate_examples() {
        let fam = HomFamily::twist_fold(1).unwrap();
        let k = [w("a1"), w("b1"), w("a1 b1-")];
        let sep = fam.separate(&k, 20, 10).unwrap();
        assert_eq!(sep.n, 1);
        assert_eq!(sep.hom, fam.member(1).unwrap());
        assert_eq!(fam.separate(&[w("a1")], 20, 10).unwrap().n, 0);
        let relator = fam.source().relator().clone();
        assert!(matches!(
            fam.separate(&[relator], 20, 10),
            Err(Error::TrivialElementInK(_))
        ));
    }

    #[test]
    fn separation_modes_agree() {
        let fam = HomFamily::twist_fold(1).unwrap();
        let k = [w("a1 b1- a1' b1'-"), w("b1 b1' a1-")];
        let seq = fam.separate_with(&k, 10, 5, Execution::Sequential).unwrap();
        let par = fam.separate_with(&k, 10, 5, Execution::Parallel).unwrap();
        assert_eq!(seq.n, par.n);
    }

    #[test]
    fn power_twist_kills_the_commutator_product() {
        // [a1·a1'ⁿ, a1'] = [a1, a1'], so the product of commutators in the
        // source always lands on the relator of the target.
        let fam = HomFamily::power_twist(2).unwrap();
        let word = folded_curve(2);
        for n in 0..10 {
            let image = fam.member(n).unwrap().apply(&word).unwrap();
            assert!(fam.target().dehn_trivial(&image).unwrap());
        }
        assert_eq!(
            fam.separate(&[word], 10, 10).unwrap_err(),
            Error::HorizonExhausted {
                horizon: 10,
                window: 10
            }
        );
    }

    #[test]
    fn json_round_trips() {
        let h = HomFamily::twist_fold(1).unwrap().member(2).unwrap();
        let json = serde_json::to_string(&h).unwrap();
        assert!(json.starts_with(r#"{"source":"#));
        let back: Homomorphism = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);

        for fam in [
            HomFamily::twist_fold(2).unwrap(),
            HomFamily::power_twist(2).unwrap(),
            HomFamily::conjugate_extension(2, w("x1 x2"), w("x2")).unwrap(),
        ] {
            let json = serde_json::to_string(&fam).unwrap();
            let back: HomFamily = serde_json::from_str(&json).unwrap();
            assert_eq!(back, fam);
        }
        let commuting = r#"{"kind":"conjugate-extension","rank":2,"a":["x1"],"b":["x1","x1"]}"#;
        assert!(serde_json::from_str::<HomFamily>(commuting).is_err());
    }
}

//! Free and surface-group presentations, and the surface word problem.
//!
//! Surface relators are products of commutators in which every generator
//! occurs exactly twice, so distinct cyclic shifts of `R^{±1}` share at most
//! one letter. That puts them in C'(1/6) for genus ≥ 2, and Dehn's algorithm
//! (repeatedly replace more than half of a relator shift by the inverse of
//! the rest) decides triviality. The piece bound is recomputed and checked
//! whenever a surface presentation is built.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ball::{inverse_code, ReducedWords};
use crate::error::{Error, Result};
use crate::symbol::Gen;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceForm {
    /// `[a1,a1']⋯[ag,ag']`
    Standard,
    /// `[a1,a1']⋯[ar,ar']·[br',br]⋯[b1',b1]` for genus `2r`; the first half
    /// and the second half are separated by the curve `[a1,a1']⋯[ar,ar']`.
    Mirrored,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresentationKind {
    Free { rank: usize },
    Surface { genus: usize, form: SurfaceForm },
}

/// Symmetrized relator: every cyclic shift of `R` and `R⁻¹`, indexed by
/// first letter.
#[derive(Debug)]
struct RelatorTable {
    len: usize,
    shifts: Vec<Vec<u32>>,
    by_first: Vec<Vec<usize>>,
}

impl RelatorTable {
    fn new(relator: &[u32], letters: usize) -> Self {
        let len = relator.len();
        let inverse: Vec<u32> = relator.iter().rev().map(|&c| inverse_code(c)).collect();
        let mut shifts = Vec::with_capacity(2 * len);
        for base in [relator, &inverse[..]] {
            for i in 0..len {
                shifts.push(
                    base[i..]
                        .iter()
                        .chain(&base[..i])
                        .copied()
                        .collect::<Vec<_>>(),
                );
            }
        }
        shifts.sort();
        shifts.dedup();
        let mut by_first = vec![Vec::new(); letters];
        for (i, s) in shifts.iter().enumerate() {
            by_first[s[0] as usize].push(i);
        }
        RelatorTable {
            len,
            shifts,
            by_first,
        }
    }

    /// Longest common prefix of two distinct symmetrized shifts.
    fn max_piece(&self) -> usize {
        let mut best = 0;
        for group in &self.by_first {
            for (i, &a) in group.iter().enumerate() {
                for &b in &group[i + 1..] {
                    let (x, y) = (&self.shifts[a], &self.shifts[b]);
                    best = best.max(x.iter().zip(y).take_while(|(p, q)| p == q).count());
                }
            }
        }
        best
    }

    /// Dehn's algorithm on an encoded word.
    fn is_trivial(&self, mut codes: Vec<u32>) -> bool {
        let half = self.len / 2;
        loop {
            free_reduce(&mut codes);
            cyclic_trim(&mut codes);
            let m = codes.len();
            if m == 0 {
                return true;
            }
            if m <= half {
                return false;
            }
            let Some((start, shift, matched)) = self.find_long_subword(&codes) else {
                return false;
            };
            let complement = &self.shifts[shift][matched..];
            let mut next = Vec::with_capacity(m - matched + complement.len());
            next.extend(complement.iter().rev().map(|&c| inverse_code(c)));
            next.extend((matched..m).map(|k| codes[(start + k) % m]));
            codes = next;
        }
    }

    /// A cyclic subword of `codes` agreeing with more than half of some
    /// symmetrized shift: `(start, shift index, length)`.
    fn find_long_subword(&self, codes: &[u32]) -> Option<(usize, usize, usize)> {
        let m = codes.len();
        let limit = m.min(self.len);
        for start in 0..m {
            for &s in &self.by_first[codes[start] as usize] {
                let shift = &self.shifts[s];
                let matched = (0..limit)
                    .take_while(|&k| codes[(start + k) % m] == shift[k])
                    .count();
                if 2 * matched > self.len {
                    return Some((start, s, matched));
                }
            }
        }
        None
    }
}

fn free_reduce(codes: &mut Vec<u32>) {
    let mut top = 0;
    for i in 0..codes.len() {
        let c = codes[i];
        if top > 0 && codes[top - 1] == inverse_code(c) {
            top -= 1;
        } else {
            codes[top] = c;
            top += 1;
        }
    }
    codes.truncate(top);
}

fn cyclic_trim(codes: &mut Vec<u32>) {
    let n = codes.len();
    let mut k = 0;
    while 2 * k + 1 < n && codes[k] == inverse_code(codes[n - 1 - k]) {
        k += 1;
    }
    if k > 0 {
        codes.truncate(n - k);
        codes.drain(..k);
    }
}

/// A free group or a one-relator surface group presentation.
#[derive(Clone)]
pub struct Presentation {
    kind: PresentationKind,
    generators: Vec<Gen>,
    relator: Word,
    index: HashMap<Gen, u32>,
    table: Option<Arc<RelatorTable>>,
}

impl Presentation {
    /// Free group on `x1, …, xk`.
    pub fn free(rank: usize) -> Presentation {
        let names: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
        Presentation::free_named(&names).expect("generated names are valid")
    }

    /// Free group on `x1, x1', …, xr, xr'`.
    pub fn free_paired(r: usize) -> Presentation {
        let names: Vec<String> = (1..=r)
            .flat_map(|i| [format!("x{i}"), format!("x{i}'")])
            .collect();
        Presentation::free_named(&names).expect("generated names are valid")
    }

    pub fn free_named<S: AsRef<str>>(names: &[S]) -> Result<Presentation> {
        let generators = names
            .iter()
            .map(|n| Gen::new(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let index = index_of(&generators)?;
        Ok(Presentation {
            kind: PresentationKind::Free {
                rank: generators.len(),
            },
            generators,
            relator: Word::identity(),
            index,
            table: None,
        })
    }

    /// Closed orientable surface group of the given genus.
    pub fn surface(genus: usize, form: SurfaceForm) -> Result<Presentation> {
        if genus < 2 {
            return Err(Error::GenusTooSmall(genus));
        }
        let pair = |p: &str, q: &str| {
            let (a, b) = (Word::gen(p), Word::gen(q));
            (vec![p.to_owned(), q.to_owned()], a.commutator(&b))
        };
        let mut names = Vec::new();
        let mut relator = Word::identity();
        match form {
            SurfaceForm::Standard => {
                for i in 1..=genus {
                    let (n, c) = pair(&format!("a{i}"), &format!("a{i}'"));
                    names.extend(n);
                    relator = relator.multiply(&c);
                }
            }
            SurfaceForm::Mirrored => {
                if !genus.is_multiple_of(2) {
                    return Err(Error::MirroredOddGenus(genus));
                }
                let r = genus / 2;
                for i in 1..=r {
                    let (n, c) = pair(&format!("a{i}"), &format!("a{i}'"));
                    names.extend(n);
                    relator = relator.multiply(&c);
                }
                for i in 1..=r {
                    names.extend([format!("b{i}"), format!("b{i}'")]);
                }
                for i in (1..=r).rev() {
                    let (_, c) = pair(&format!("b{i}'"), &format!("b{i}"));
                    relator = relator.multiply(&c);
                }
            }
        }
        let generators: Vec<Gen> = names.iter().map(|n| Gen::intern(n)).collect();
        let index = index_of(&generators)?;
        let mut p = Presentation {
            kind: PresentationKind::Surface { genus, form },
            generators,
            relator,
            index,
            table: None,
        };
        let codes = p.encode(&p.relator)?;
        let table = RelatorTable::new(&codes, 2 * p.generators.len());
        let piece = table.max_piece();
        if 6 * piece >= table.len {
            return Err(Error::SmallCancellationViolated {
                piece,
                relator: table.len,
            });
        }
        p.table = Some(Arc::new(table));
        Ok(p)
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn generators(&self) -> &[Gen] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<&'static str> {
        self.generators.iter().map(|g| g.name()).collect()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The defining relator; empty for free groups.
    pub fn relator(&self) -> &Word {
        &self.relator
    }

    pub fn is_surface(&self) -> bool {
        matches!(self.kind, PresentationKind::Surface { .. })
    }

    /// Longest piece of the symmetrized relator (surface groups only).
    pub fn max_piece(&self) -> Option<usize> {
        self.table.as_ref().map(|t| t.max_piece())
    }

    pub fn position(&self, gen: Gen) -> Option<usize> {
        self.index.get(&gen).map(|&i| i as usize)
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| self.index.contains_key(&l.gen))
    }

    /// Parses a word and checks it is over this alphabet.
    pub fn word(&self, text: &str) -> Result<Word> {
        let names = self.generator_names();
        crate::word::parse_word(text, Some(&names))
    }

    pub fn encode(&self, w: &Word) -> Result<Vec<u32>> {
        w.letters()
            .iter()
            .map(|l| match self.index.get(&l.gen) {
                Some(&i) => Ok(2 * i + u32::from(l.inverse)),
                None => Err(Error::AlphabetMismatch(format!(
                    "`{}` is not a generator of {self}",
                    l.gen
                ))),
            })
            .collect()
    }

    pub fn decode(&self, codes: &[u32]) -> Word {
        Word::from_letters(
            codes
                .iter()
                .map(|&c| Letter::new(self.generators[(c / 2) as usize], c & 1 == 1)),
        )
    }

    /// Dehn's algorithm: is `w` the identity of this surface group?
    pub fn dehn_trivial(&self, w: &Word) -> Result<bool> {
        let table = self.table.as_ref().ok_or(Error::NotSurface)?;
        let codes = self.encode(w)?;
        Ok(table.is_trivial(codes))
    }

    /// Triviality in the presented group: free reduction for free groups,
    /// Dehn's algorithm for surface groups.
    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        match &self.table {
            Some(table) => Ok(table.is_trivial(self.encode(w)?)),
            None => {
                self.encode(w)?;
                Ok(w.is_identity())
            }
        }
    }

    pub(crate) fn is_trivial_codes(&self, codes: &[u32]) -> bool {
        match &self.table {
            Some(table) => table.is_trivial(codes.to_vec()),
            None => codes.is_empty(),
        }
    }

    pub fn equal_in_group(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_trivial(&u.multiply(&v.inverse()))
    }

    /// Reduced words of length `1..=max_len` that are nontrivial in the
    /// group, one per reduced word, ordered by length then lexicographically.
    pub fn enumerate_nontrivial_ball(&self, max_len: usize) -> NontrivialBall<'_> {
        NontrivialBall {
            presentation: self,
            max_len,
            len: 1,
            sphere: ReducedWords::new(self.rank(), 1),
        }
    }

    /// The commutator pairs `(p_i, q_i)` reading the relator as
    /// `[p_1,q_1]⋯[p_g,q_g]`.
    pub fn commutator_pairs(&self) -> Result<Vec<(Gen, Gen)>> {
        if !self.is_surface() {
            return Err(Error::NotSurface);
        }
        Ok(self
            .relator
            .letters()
            .chunks(4)
            .map(|block| (block[0].gen, block[1].gen))
            .collect())
    }
}

fn index_of(generators: &[Gen]) -> Result<HashMap<Gen, u32>> {
    let mut index = HashMap::with_capacity(generators.len());
    for (i, &g) in generators.iter().enumerate() {
        if index.insert(g, i as u32).is_some() {
            return Err(Error::ParseError(format!("duplicate generator `{g}`")));
        }
    }
    Ok(index)
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.generators == other.generators
            && self.relator == other.relator
    }
}

impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({self})")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.generator_names().join(", ");
        match self.kind {
            PresentationKind::Free { .. } => write!(f, "<{names}>"),
            PresentationKind::Surface { .. } => write!(f, "<{names} | {}>", self.relator),
        }
    }
}

/// Stream returned by [`Presentation::enumerate_nontrivial_ball`].
pub struct NontrivialBall<'a> {
    presentation: &'a Presentation,
    max_len: usize,
    len: usize,
    sphere: ReducedWords,
}

impl Iterator for NontrivialBall<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        while self.len <= self.max_len {
            match self.sphere.next() {
                Some(codes) => {
                    if !self.presentation.is_trivial_codes(&codes) {
                        return Some(self.presentation.decode(&codes));
                    }
                }
                None => {
                    self.len += 1;
                    self.sphere = ReducedWords::new(self.presentation.rank(), self.len);
                }
            }
        }
        None
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    genus: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    form: Option<SurfaceForm>,
    generators: Vec<String>,
    #[serde(default)]
    relator: Word,
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let generators = self
            .generator_names()
            .iter()
            .map(|n| n.to_string())
            .collect();
        let json = match self.kind {
            PresentationKind::Free { rank } => PresentationJson {
                kind: "free".into(),
                rank: Some(rank),
                genus: None,
                form: None,
                generators,
                relator: Word::identity(),
            },
            PresentationKind::Surface { genus, form } => PresentationJson {
                kind: "surface".into(),
                rank: None,
                genus: Some(genus),
                form: Some(form),
                generators,
                relator: self.relator.clone(),
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = PresentationJson::deserialize(d)?;
        let p = match json.kind.as_str() {
            "free" => {
                let p = Presentation::free_named(&json.generators).map_err(D::Error::custom)?;
                if json.rank.is_some_and(|r| r != p.rank()) {
                    return Err(D::Error::custom("rank does not match generator list"));
                }
                if !json.relator.is_identity() {
                    return Err(D::Error::custom("free presentation with a relator"));
                }
                p
            }
            "surface" => {
                let genus = json.genus.ok_or_else(|| D::Error::missing_field("genus"))?;
                let form = json.form.unwrap_or(SurfaceForm::Standard);
                let p = Presentation::surface(genus, form).map_err(D::Error::custom)?;
                if p.generator_names() != json.generators
                    || (!json.relator.is_identity() && json.relator != p.relator)
                {
                    return Err(D::Error::custom(
                        "generators or relator differ from the named surface presentation",
                    ));
                }
                p
            }
            other => {
                return Err(D::Error::custom(format!(
                    "unknown presentation kind `{other}`"
                )))
            }
        };
        Ok(p)
    }
}

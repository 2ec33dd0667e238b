use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use surfgroup::ball::{ball_size, DEFAULT_BUDGET};
use surfgroup::baumslag::{BaumslagInstance, BoxOutcome};
use surfgroup::exec::Execution;
use surfgroup::homomorphism::{family_kind_tag, make_hom, HomFamily, Homomorphism};
use surfgroup::repr::{
    certify_free_with, covering_radius_with, enlarge_rank, free_from_surface, surface_from_free,
    AnyRep, Certificate, FreeCheck, GroupElement, GroupKind, MatrixRep, SearchOptions,
};
use surfgroup::{Presentation, SurfaceForm, Word};

use crate::args::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] surfgroup::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Json(String),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.name(),
            CliError::Io { .. } => "IoError",
            CliError::Json(_) => "ParseError",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Primary output of a command.
pub enum Output {
    Json(String),
    Text(String),
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Output {
    Output::Json(serde_json::to_string_pretty(value).expect("serializable"))
}

fn word_output(w: &Word, plain: bool) -> Output {
    if plain {
        Output::Text(w.to_string())
    } else {
        to_json(w)
    }
}

fn word(text: &str) -> Result<Word> {
    Ok(Word::parse(text)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let value: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Json(format!("{}: {e}", path.display())))?;
    from_value(value, path)
}

fn from_value<T: DeserializeOwned>(value: Value, path: &Path) -> Result<T> {
    serde_json::from_value(value).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))
}

/// Loads an artifact that may also be wrapped as `{key: artifact, …}`, as in
/// the combined outputs of this tool.
fn load_unwrapped<T: DeserializeOwned>(path: &Path, key: &str) -> Result<T> {
    let mut value: Value = load(path)?;
    if let Some(inner) = value.get_mut(key) {
        value = inner.take();
    }
    from_value(value, path)
}

/// `free:N`, `paired:R`, `surface:G[:standard|mirrored]`, or a JSON file.
fn presentation(arg: &str) -> Result<Presentation> {
    let parts: Vec<&str> = arg.split(':').collect();
    let number = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| surfgroup::Error::ParseError(format!("bad presentation `{arg}`")))
    };
    Ok(match parts.as_slice() {
        ["free", n] => Presentation::free(number(n)?),
        ["paired", r] => Presentation::free_paired(number(r)?),
        ["surface", g] => Presentation::surface(number(g)?, SurfaceForm::Standard)?,
        ["surface", g, "standard"] => Presentation::surface(number(g)?, SurfaceForm::Standard)?,
        ["surface", g, "mirrored"] => Presentation::surface(number(g)?, SurfaceForm::Mirrored)?,
        _ => load(Path::new(arg))?,
    })
}

fn surface(args: &SurfaceArgs) -> Result<Presentation> {
    let form = match args.form {
        Form::Standard => SurfaceForm::Standard,
        Form::Mirrored => SurfaceForm::Mirrored,
    };
    Ok(Presentation::surface(args.genus, form)?)
}

fn family(args: &FamilyArgs) -> Result<HomFamily> {
    if let Some(path) = &args.family {
        return load(path);
    }
    let kind = args.kind.as_deref().unwrap_or_default();
    let missing =
        |flag: &str| surfgroup::Error::ParseError(format!("family `{kind}` needs --{flag}"));
    Ok(match family_kind_tag(kind) {
        Some("twist-fold") => HomFamily::twist_fold(args.r.ok_or_else(|| missing("r"))?)?,
        Some("conjugate-extension") => HomFamily::conjugate_extension(
            args.rank.ok_or_else(|| missing("rank"))?,
            word(args.a.as_deref().ok_or_else(|| missing("a"))?)?,
            word(args.b.as_deref().ok_or_else(|| missing("b"))?)?,
        )?,
        Some(_) => HomFamily::power_twist(args.r.ok_or_else(|| missing("r"))?)?,
        None => {
            return Err(
                surfgroup::Error::ParseError(format!("unknown family kind `{kind}`")).into(),
            )
        }
    })
}

fn instance(args: &InstanceArgs) -> Result<BaumslagInstance> {
    if let Some(path) = &args.instance {
        return load(path);
    }
    let u = word(args.u.as_deref().unwrap_or_default())?;
    let a = args.a.iter().map(|s| word(s)).collect::<Result<Vec<_>>>()?;
    Ok(BaumslagInstance::new(u, a)?)
}

/// A word given either as a token array or as text.
#[derive(Deserialize)]
#[serde(untagged)]
enum WordInput {
    Tokens(Word),
    Text(String),
}

fn words_file(path: &Path) -> Result<Vec<Word>> {
    let inputs: Vec<WordInput> = load(path)?;
    inputs
        .into_iter()
        .map(|w| match w {
            WordInput::Tokens(w) => Ok(w),
            WordInput::Text(t) => word(&t),
        })
        .collect()
}

/// Applies `$body` to the concrete representation inside an [`AnyRep`].
macro_rules! with_rep {
    ($rep:expr, $r:ident => $body:expr) => {
        match $rep {
            AnyRep::So3($r) => $body,
            AnyRep::Sl2($r) => $body,
        }
    };
}

pub struct Runner {
    common: Common,
}

impl Runner {
    pub fn new(common: Common) -> Self {
        Runner { common }
    }

    fn budget(&self) -> u128 {
        self.common.budget.unwrap_or(DEFAULT_BUDGET)
    }

    fn exec(&self) -> Execution {
        if self.common.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    fn search_options(&self) -> SearchOptions {
        SearchOptions {
            budget: self.budget(),
            exec: self.exec(),
            ..SearchOptions::default()
        }
    }

    fn stamp(&self, mut cert: Certificate) -> Certificate {
        if self.common.stamp {
            cert.timestamp =
                Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
        }
        cert
    }

    pub fn run(&self, command: &Command) -> Result<Output> {
        match command {
            Command::Word(cmd) => self.word(cmd),
            Command::Surface(cmd) => self.surface(cmd),
            Command::Hom(cmd) => self.hom(cmd),
            Command::Family(cmd) => self.family(cmd),
            Command::Baumslag(cmd) => self.baumslag(cmd),
            Command::Rep(cmd) => self.rep(cmd),
        }
    }

    fn word(&self, cmd: &WordCmd) -> Result<Output> {
        let w = match cmd {
            WordCmd::Reduce { word: w } => word(w)?,
            WordCmd::Mul { u, v } => word(u)?.multiply(&word(v)?),
            WordCmd::Inv { u } => word(u)?.inverse(),
            WordCmd::Conj { u, g } => word(u)?.conjugate(&word(g)?),
            WordCmd::Comm { u, v } => word(u)?.commutator(&word(v)?),
        };
        Ok(word_output(&w, self.common.plain))
    }

    fn surface(&self, cmd: &SurfaceCmd) -> Result<Output> {
        match cmd {
            SurfaceCmd::Trivial {
                surface: s,
                word: w,
            } => {
                let trivial = surface(s)?.dehn_trivial(&word(w)?)?;
                Ok(to_json(&json!({ "trivial": trivial })))
            }
            SurfaceCmd::Equal { surface: s, u, v } => {
                let equal = surface(s)?.equal_in_group(&word(u)?, &word(v)?)?;
                Ok(to_json(&json!({ "equal": equal })))
            }
            SurfaceCmd::Ball { surface: s } => {
                let p = surface(s)?;
                let size = ball_size(p.rank(), self.common.l);
                if size > self.budget() {
                    return Err(surfgroup::Error::BallTooLarge {
                        size,
                        budget: self.budget(),
                    }
                    .into());
                }
                let words: Vec<Word> = p.enumerate_nontrivial_ball(self.common.l).collect();
                if self.common.plain {
                    let lines: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                    Ok(Output::Text(lines.join("\n")))
                } else {
                    Ok(to_json(&words))
                }
            }
        }
    }

    fn hom(&self, cmd: &HomCmd) -> Result<Output> {
        match cmd {
            HomCmd::Make {
                source,
                target,
                images,
            } => {
                let pairs = images
                    .iter()
                    .map(|image| {
                        let (name, w) = image.split_once('=').ok_or_else(|| {
                            surfgroup::Error::ParseError(format!("image `{image}` is not name=word"))
                        })?;
                        Ok((name.trim().to_owned(), word(w)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(to_json(&make_hom(
                    presentation(source)?,
                    presentation(target)?,
                    pairs,
                )?))
            }
            HomCmd::Apply { hom, word: w } => {
                let h: Homomorphism = load_unwrapped(hom, "hom")?;
                Ok(word_output(&h.apply(&word(w)?)?, self.common.plain))
            }
            HomCmd::Compose { outer, inner } => {
                let outer: Homomorphism = load_unwrapped(outer, "hom")?;
                let inner: Homomorphism = load_unwrapped(inner, "hom")?;
                Ok(to_json(&outer.compose(&inner)?))
            }
        }
    }

    fn family(&self, cmd: &FamilyCmd) -> Result<Output> {
        match cmd {
            FamilyCmd::Member { family: f, n } => Ok(to_json(&family(f)?.member(*n)?)),
            FamilyCmd::Separate { family: f, words } => {
                let k = words_file(words)?;
                let sep = family(f)?.separate_with(
                    &k,
                    self.common.horizon,
                    self.common.window,
                    self.exec(),
                )?;
                Ok(to_json(&json!({ "n": sep.n, "hom": sep.hom })))
            }
        }
    }

    fn baumslag(&self, cmd: &BaumslagCmd) -> Result<Output> {
        let budget = self.common.budget;
        match cmd {
            BaumslagCmd::Word {
                instance: i,
                exponents,
            } => Ok(word_output(
                &instance(i)?.word(exponents)?,
                self.common.plain,
            )),
            BaumslagCmd::Check {
                instance: i,
                n0,
                n_max,
            } => {
                let outcome = instance(i)?.check_box_with(*n0, *n_max, budget, self.exec())?;
                Ok(to_json(&match outcome {
                    BoxOutcome::Holds => json!({ "holds": true, "n0": n0, "n_max": n_max }),
                    BoxOutcome::Fails(v) => {
                        json!({ "holds": false, "n0": n0, "n_max": n_max, "exponents": v })
                    }
                }))
            }
            BaumslagCmd::N0 { instance: i, n_max } => {
                let n0 = instance(i)?.find_n0_with(*n_max, budget, self.exec())?;
                Ok(to_json(&json!({ "n0": n0, "n_max": n_max })))
            }
        }
    }

    fn rep(&self, cmd: &RepCmd) -> Result<Output> {
        let c = &self.common;
        let opts = self.search_options();
        match cmd {
            RepCmd::Sample { group, k } => {
                let kind = GroupKind::parse(group).ok_or_else(|| {
                    surfgroup::Error::ParseError(format!("unknown group `{group}`"))
                })?;
                Ok(to_json(&AnyRep::sample(kind, *k, c.seed)?))
            }
            RepCmd::Eval { rep, word: w } => {
                let rep: AnyRep = load_unwrapped(rep, "rep")?;
                let w = word(w)?;
                with_rep!(rep, r => {
                    let g = r.evaluate(&w)?;
                    Ok(to_json(&json!({
                        "group": g_kind(&g),
                        "word": w,
                        "matrix": g.to_row_major(),
                        "distance_to_identity": g.distance_to_identity(),
                    })))
                })
            }
            RepCmd::CertifyFree { rep } => {
                let rep: AnyRep = load_unwrapped(rep, "rep")?;
                let check = with_rep!(rep, r => certify_free_with(&r, c.l, c.tol, self.budget(), self.exec())?);
                Ok(to_json(&match check {
                    FreeCheck::Pass(cert) => {
                        json!({ "passed": true, "certificate": self.stamp(cert) })
                    }
                    FreeCheck::Fail(witness) => json!({ "passed": false, "witness": witness }),
                }))
            }
            RepCmd::Enlarge { rep, a, b } => {
                let rep: AnyRep = load_unwrapped(rep, "rep")?;
                let (a, b) = (word(a)?, word(b)?);
                with_rep!(rep, r => self.deformed(enlarge_rank(&r, &a, &b, c.grid, c.l, c.tol, &opts)?))
            }
            RepCmd::SurfaceFromFree { rep } => {
                let rep: AnyRep = load_unwrapped(rep, "rep")?;
                with_rep!(rep, r => self.deformed(surface_from_free(&r, c.grid, c.l, c.tol, &opts)?))
            }
            RepCmd::FreeFromSurface { rep } => {
                let rep: AnyRep = load_unwrapped(rep, "rep")?;
                with_rep!(rep, r => self.deformed(free_from_surface(&r, c.grid, c.l, c.tol, &opts)?))
            }
            RepCmd::Density { rep, samples } => {
                let rep: AnyRep = load_unwrapped(rep, "rep")?;
                let AnyRep::So3(r) = rep else {
                    return Err(surfgroup::Error::GroupMismatch(
                        "covering radius needs SO3".into(),
                    )
                    .into());
                };
                let cert =
                    covering_radius_with(&r, c.l, *samples, c.seed, self.budget(), self.exec())?;
                Ok(to_json(&self.stamp(cert)))
            }
        }
    }

    fn deformed<E: GroupElement>(
        &self,
        (rep, cert): (MatrixRep<E>, Certificate),
    ) -> Result<Output> {
        Ok(to_json(
            &json!({ "rep": rep, "certificate": self.stamp(cert) }),
        ))
    }
}

fn g_kind<E: GroupElement>(_: &E) -> GroupKind {
    E::KIND
}

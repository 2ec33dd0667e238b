use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "surfgroup",
    version,
    about = "Free groups, surface groups and their dense representations"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug)]
pub struct Common {
    /// Seed for every random choice; recorded in emitted artifacts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Distance below which an element counts as the identity.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Word length bound for balls and certificates.
    #[arg(long = "L", global = true, default_value_t = 6)]
    pub l: usize,
    /// Number of grid points on a closure curve.
    #[arg(long, global = true, default_value_t = 64)]
    pub grid: usize,
    /// Largest family index tried as a separating start.
    #[arg(long, global = true, default_value_t = 20)]
    pub horizon: usize,
    /// Number of further family members that must also separate.
    #[arg(long, global = true, default_value_t = 30)]
    pub window: usize,
    /// Largest ball or exponent box to enumerate.
    #[arg(long, global = true, env = "SURFGROUP_BUDGET")]
    pub budget: Option<u128>,
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print words as text instead of JSON token arrays.
    #[arg(long, global = true)]
    pub plain: bool,
    /// Record the current time in emitted certificates.
    #[arg(long, global = true)]
    pub stamp: bool,
    /// Run every search on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Free-group word operations.
    #[command(subcommand)]
    Word(WordCmd),
    /// Surface-group word problem and balls.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Homomorphisms given by generator images.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Eventually faithful homomorphism families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Words u^{n1} a1 ⋯ u^{nk} ak and their threshold search.
    #[command(subcommand)]
    Baumslag(BaumslagCmd),
    /// Matrix representations and certificates.
    #[command(subcommand)]
    Rep(RepCmd),
}

#[derive(Subcommand, Debug)]
pub enum WordCmd {
    /// Freely reduce a word.
    Reduce { word: String },
    /// Reduced product u·v.
    Mul { u: String, v: String },
    /// Inverse of u.
    Inv { u: String },
    /// Conjugate g·u·g⁻¹.
    Conj { u: String, g: String },
    /// Commutator u·v·u⁻¹·v⁻¹.
    Comm { u: String, v: String },
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub genus: usize,
    #[arg(long, value_enum, default_value_t = Form::Standard)]
    pub form: Form,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Form {
    Standard,
    Mirrored,
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCmd {
    /// Is the word trivial in the surface group?
    Trivial {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        word: String,
    },
    /// Do two words represent the same element?
    Equal {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Reduced words of length 1..=L that are nontrivial in the group.
    Ball {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum HomCmd {
    /// Build a homomorphism and check that it is well defined.
    Make {
        /// `free:N`, `paired:R`, `surface:G[:mirrored]` or a JSON file.
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// `name=word`, once per source generator.
        #[arg(long = "image", required = true)]
        images: Vec<String>,
    },
    /// Image of a word.
    Apply {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// The composite outer∘inner.
    Compose {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// twist-fold, conjugate-extension or power-twist.
    #[arg(long, required_unless_present = "family")]
    pub kind: Option<String>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// Family JSON file, instead of the flags above.
    #[arg(long, conflicts_with = "kind")]
    pub family: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// The n-th member.
    Member {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: i64,
    },
    /// Smallest n after which every member keeps every word nontrivial.
    Separate {
        #[command(flatten)]
        family: FamilyArgs,
        /// JSON array of words (token arrays or strings).
        #[arg(long)]
        words: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct InstanceArgs {
    #[arg(long, required_unless_present = "instance")]
    pub u: Option<String>,
    /// One per factor a_i.
    #[arg(long = "a")]
    pub a: Vec<String>,
    /// Instance JSON file, instead of --u / --a.
    #[arg(long, conflicts_with = "u")]
    pub instance: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BaumslagCmd {
    /// The word for one exponent vector.
    Word {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated exponents, one per factor.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        exponents: Vec<i64>,
    },
    /// Check every vector with n0 ≤ |n_i| ≤ N.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        n0: i64,
        #[arg(long = "n-max")]
        n_max: i64,
    },
    /// Smallest n0 for which the box up to N holds.
    N0 {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long = "n-max")]
        n_max: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepCmd {
    /// Seeded sample of k group elements on x1..xk.
    Sample {
        /// SO3 or SL2R.
        #[arg(long, default_value = "SO3")]
        group: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Matrix of a word.
    Eval {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Check that no word of length ≤ L lies within tol of the identity.
    CertifyFree {
        #[arg(long)]
        rep: PathBuf,
    },
    /// Add a generator conjugated along the closure of ρ(b).
    Enlarge {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Deform a rank-2r free representation into a genus-2r surface one.
    SurfaceFromFree {
        #[arg(long)]
        rep: PathBuf,
    },
    /// Deform a surface representation into a free one.
    FreeFromSurface {
        #[arg(long)]
        rep: PathBuf,
    },
    /// Covering radius of the word ball of length L (SO3 only).
    Density {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

//! Deformations along closures of cyclic subgroups, with a deterministic
//! grid search standing in for a generic choice of parameter.
//!
//! * [`enlarge_rank`]: adds `β·ρ(a)·β⁻¹`, `β` near the closure of `⟨ρ(b)⟩`.
//! * [`surface_from_free`]: doubles a free representation across the
//!   separating curve `γ = ∏[x_i, x_i']`, conjugating the second half by `α`
//!   on the closure of `⟨γ⟩`.
//! * [`free_from_surface`]: pulls a surface representation back to a free
//!   group, translating the first generator by `ω` on the closure of the
//!   second.
//!
//! Every grid point is ranked by its margin (least distance to the identity
//! over a word ball). When the full ball at length `L` times the grid is
//! expensive, all points are first ranked at a shorter screening length and
//! only the best few are checked at `L`; the certificate records both.

use std::collections::HashSet;

use super::certify::{check_ball_budget, Certificate, CertificateKind};
use super::group::{ClosureCurve, GroupElement};
use super::rep::MatrixRep;
use super::scan::{scan_ball, trivial_words, Scan};
use crate::ball::{ball_size, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::presentation::{Presentation, SurfaceForm};
use crate::word::Word;

/// Largest acceptable relator residual for a doubled representation.
pub const RESIDUAL_BOUND: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Largest word ball scanned at any single grid point.
    pub budget: u128,
    /// Words evaluated in the screening pass over all grid points.
    pub screen_work: u128,
    /// Grid points carried from screening to the full-length check.
    pub finalists: usize,
    pub exec: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            screen_work: 1 << 26,
            finalists: 4,
            exec: Execution::default(),
        }
    }
}

struct GridChoice {
    j: usize,
    scan: Scan,
    screen_l: usize,
}

struct GridFailure {
    j: usize,
    scan: Scan,
}

/// Screening length: the longest `ℓ ≤ l` whose ball over all grid points
/// fits the screening budget (at least 1).
fn screen_length(rank: usize, l: usize, grid: usize, screen_work: u128) -> usize {
    (1..=l)
        .rev()
        .find(|&s| ball_size(rank, s).saturating_mul(grid as u128) <= screen_work)
        .unwrap_or(1)
}

/// Higher margin first; ties go to the smaller index.
fn better(a: (usize, &Scan), b: (usize, &Scan)) -> bool {
    a.1.min > b.1.min || (a.1.min == b.1.min && a.0 < b.0)
}

fn grid_search<E, F>(
    rank: usize,
    grid: usize,
    l: usize,
    tol: f64,
    skip: &HashSet<Vec<u32>>,
    opts: &SearchOptions,
    letters_at: F,
) -> Result<std::result::Result<GridChoice, GridFailure>>
where
    E: GroupElement,
    F: Fn(usize) -> Vec<E> + Sync + Send,
{
    if grid == 0 || l == 0 {
        return Err(Error::InvalidInstance("grid and L must be positive".into()));
    }
    check_ball_budget(rank, l, opts.budget)?;
    let screen_l = screen_length(rank, l, grid, opts.screen_work);
    let screened = exec::map_indexed(opts.exec, grid, |j| {
        scan_ball(&letters_at(j), screen_l, tol, skip, Execution::Sequential)
    });
    let best_of = |scans: &mut dyn Iterator<Item = (usize, Scan)>| {
        scans.fold(None::<(usize, Scan)>, |best, (j, s)| match best {
            Some((bj, bs)) if !better((j, &s), (bj, &bs)) => Some((bj, bs)),
            _ => Some((j, s)),
        })
    };
    let finals: Vec<(usize, Scan)> = if screen_l == l {
        screened.into_iter().enumerate().collect()
    } else {
        let mut order: Vec<usize> = (0..grid)
            .filter(|&j| screened[j].failure.is_none())
            .collect();
        order.sort_by(|&a, &b| screened[b].min.total_cmp(&screened[a].min).then(a.cmp(&b)));
        order.truncate(opts.finalists);
        if order.is_empty() {
            let (j, scan) = best_of(&mut screened.into_iter().enumerate()).expect("grid ≥ 1");
            return Ok(Err(GridFailure { j, scan }));
        }
        let full = exec::map_slice(opts.exec, &order, |&j| {
            scan_ball(&letters_at(j), l, tol, skip, Execution::Sequential)
        });
        order.into_iter().zip(full).collect()
    };
    let passing = best_of(&mut finals.iter().filter(|(_, s)| s.failure.is_none()).cloned());
    Ok(match passing {
        Some((j, scan)) => Ok(GridChoice { j, scan, screen_l }),
        None => {
            let (j, scan) = best_of(&mut finals.into_iter()).expect("grid ≥ 1");
            Err(GridFailure { j, scan })
        }
    })
}

fn curve_of<E: GroupElement>(g: &E) -> Result<ClosureCurve<E>> {
    g.closure_curve()
}

fn conjugate<E: GroupElement>(by: &E, g: &E) -> E {
    by.compose(g).compose(&by.inverse())
}

fn letters_of<E: GroupElement>(images: &[E]) -> Vec<E> {
    images.iter().flat_map(|g| [*g, g.inverse()]).collect()
}

fn require_free<E: GroupElement>(rep: &MatrixRep<E>) -> Result<()> {
    if rep.presentation().is_surface() {
        Err(Error::NotFree)
    } else {
        Ok(())
    }
}

fn fill_grid_fields(cert: &mut Certificate, grid: usize, t: f64, screen_l: usize) {
    cert.grid = Some(grid);
    cert.t = Some(t);
    if screen_l != cert.l {
        cert.screen_l = Some(screen_l);
    }
}

/// Rank `r` free representation → rank `r + 1`, adding `β·ρ(a)·β⁻¹` with `β`
/// on the closure curve of `ρ(b)`. The new generator is the first unused
/// name `x{n}`, `n > r`.
pub fn enlarge_rank<E: GroupElement>(
    rep: &MatrixRep<E>,
    a: &Word,
    b: &Word,
    grid: usize,
    l: usize,
    tol: f64,
    opts: &SearchOptions,
) -> Result<(MatrixRep<E>, Certificate)> {
    require_free(rep)?;
    if a.commutes(b) {
        return Err(Error::CommutingPair(format!("a = [{a}], b = [{b}]")));
    }
    let ea = rep.evaluate(a)?;
    let curve = curve_of(&rep.evaluate(b)?)?;

    let names = rep.presentation().generator_names();
    let fresh = (names.len() + 1..)
        .map(|n| format!("x{n}"))
        .find(|n| !names.contains(&n.as_str()))
        .expect("unbounded");
    let mut all: Vec<String> = names.iter().map(|n| n.to_string()).collect();
    all.push(fresh);
    let target = Presentation::free_named(&all)?;

    let base = rep.letter_images();
    let new_image = |j: usize| conjugate(&curve.at(curve.grid_parameter(j, grid)), &ea);
    let outcome = grid_search(rep.rank() + 1, grid, l, tol, &HashSet::new(), opts, |j| {
        let g = new_image(j);
        let mut letters = base.clone();
        letters.extend([g, g.inverse()]);
        letters
    })?;
    match outcome {
        Ok(choice) => {
            let mut images = rep.images().to_vec();
            images.push(new_image(choice.j));
            let out = MatrixRep::new(target, images, rep.seed(), rep.tolerance())?;
            let mut cert =
                Certificate::new(CertificateKind::FreeUpToL, &out, l, tol, choice.scan.min);
            fill_grid_fields(
                &mut cert,
                grid,
                curve.grid_parameter(choice.j, grid),
                choice.screen_l,
            );
            Ok((out, cert))
        }
        Err(fail) => Err(Error::NoGridPointPasses {
            best_margin: fail.scan.min,
            best_t: curve.grid_parameter(fail.j, grid),
        }),
    }
}

/// Free representation of rank `2r` on `g1, …, g2r`, read as pairs
/// `(x_i, x_i') = (g_{2i−1}, g_{2i})` → genus `2r` surface, mirrored form:
/// `a_i ↦ x_i`, `a_i' ↦ x_i'`, `b_i ↦ α x_i α⁻¹`, `b_i' ↦ α x_i' α⁻¹`.
pub fn surface_from_free<E: GroupElement>(
    rep: &MatrixRep<E>,
    grid: usize,
    l: usize,
    tol: f64,
    opts: &SearchOptions,
) -> Result<(MatrixRep<E>, Certificate)> {
    require_free(rep)?;
    if rep.rank() < 2 || !rep.rank().is_multiple_of(2) {
        return Err(Error::RankTooSmall(rep.rank()));
    }
    let r = rep.rank() / 2;
    let gens = rep.presentation().generators();
    let gamma_word = (0..r).fold(Word::identity(), |acc, i| {
        let (x, y) = (
            Word::generator(gens[2 * i]),
            Word::generator(gens[2 * i + 1]),
        );
        acc.multiply(&x.commutator(&y))
    });
    let gamma = rep.evaluate(&gamma_word)?;
    let curve = curve_of(&gamma).map_err(|e| Error::DegenerateGamma(e.to_string()))?;

    let target = Presentation::surface(2 * r, SurfaceForm::Mirrored)?;
    let images_at = |j: usize| {
        let alpha = curve.at(curve.grid_parameter(j, grid));
        let mut images = rep.images().to_vec();
        images.extend(rep.images().iter().map(|g| conjugate(&alpha, g)));
        images
    };

    // The relator maps to γαγ⁻¹α⁻¹, which vanishes because α commutes with γ.
    let relator = target.encode(target.relator())?;
    let residuals = exec::map_indexed(opts.exec, grid, |j| {
        super::rep::evaluate_codes(&letters_of(&images_at(j)), &relator).distance_to_identity()
    });
    if let Some(j) = residuals.iter().position(|&res| res.is_nan() || res > RESIDUAL_BOUND) {
        return Err(Error::ResidualTooLarge {
            residual: residuals[j],
            bound: RESIDUAL_BOUND,
            t: curve.grid_parameter(j, grid),
        });
    }
    let residual = residuals.iter().copied().fold(0.0, f64::max);

    let skip = trivial_words(&target, l);
    let outcome = grid_search(target.rank(), grid, l, tol, &skip, opts, |j| {
        letters_of(&images_at(j))
    })?;
    match outcome {
        Ok(choice) => {
            let out = MatrixRep::new(target, images_at(choice.j), rep.seed(), rep.tolerance())?;
            let mut cert = Certificate::new(
                CertificateKind::SurfaceMargin,
                &out,
                l,
                tol,
                choice.scan.min,
            );
            fill_grid_fields(
                &mut cert,
                grid,
                curve.grid_parameter(choice.j, grid),
                choice.screen_l,
            );
            cert.residual = Some(residual);
            Ok((out, cert))
        }
        Err(fail) => Err(Error::MarginZeroEverywhere {
            best_margin: fail.scan.min,
            best_t: curve.grid_parameter(fail.j, grid),
            word: target.decode(&fail.scan.argmin).to_string(),
        }),
    }
}

/// Surface representation with relator `[p_1,q_1]⋯[p_g,q_g]` → free
/// representation on `x1, x1', …, xg, xg'`: `x1 ↦ ρ(p_1)·ω`, `x1' ↦ ρ(q_1)`,
/// `x_i ↦ ρ(p_i)`, `x_i' ↦ ρ(q_i)`, with `ω` on the closure curve of `ρ(q_1)`.
pub fn free_from_surface<E: GroupElement>(
    srep: &MatrixRep<E>,
    grid: usize,
    l: usize,
    tol: f64,
    opts: &SearchOptions,
) -> Result<(MatrixRep<E>, Certificate)> {
    let source = srep.presentation();
    let pairs = source.commutator_pairs()?;
    let image_of = |g| {
        let i = source.position(g).expect("relator letters are generators");
        srep.images()[i]
    };
    let fixed: Vec<E> = pairs
        .iter()
        .flat_map(|&(p, q)| [image_of(p), image_of(q)])
        .collect();
    let curve = curve_of(&fixed[1])?;
    let target = Presentation::free_paired(pairs.len());
    let images_at = |j: usize| {
        let mut images = fixed.clone();
        images[0] = fixed[0].compose(&curve.at(curve.grid_parameter(j, grid)));
        images
    };
    let outcome = grid_search(target.rank(), grid, l, tol, &HashSet::new(), opts, |j| {
        letters_of(&images_at(j))
    })?;
    match outcome {
        Ok(choice) => {
            let out = MatrixRep::new(target, images_at(choice.j), srep.seed(), srep.tolerance())?;
            let mut cert =
                Certificate::new(CertificateKind::FreeUpToL, &out, l, tol, choice.scan.min);
            fill_grid_fields(
                &mut cert,
                grid,
                curve.grid_parameter(choice.j, grid),
                choice.screen_l,
            );
            Ok((out, cert))
        }
        Err(fail) => Err(Error::NoGridPointPasses {
            best_margin: fail.scan.min,
            best_t: curve.grid_parameter(fail.j, grid),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::certify::{certify_free, FreeCheck};
    use crate::repr::group::{Sl2, So3};
    use crate::repr::rep::sample_tuple;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn enlarge_adds_a_generator() {
        let rep: MatrixRep<So3> = sample_tuple(2, 11).unwrap();
        let (big, cert) = enlarge_rank(
            &rep,
            &w("x1"),
            &w("x2"),
            64,
            5,
            1e-6,
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(big.presentation().generator_names(), ["x1", "x2", "x3"]);
        assert_eq!(&big.images()[..2], rep.images());
        assert!(cert.value > 1e-6);
        assert!(cert.t.unwrap() > 0.0);
        let FreeCheck::Pass(again) = certify_free(&big, 5, 1e-6).unwrap() else {
            panic!()
        };
        assert_eq!(again.value, cert.value);
    }

    #[test]
    fn enlarge_errors() {
        let rep: MatrixRep<So3> = sample_tuple(2, 11).unwrap();
        let opts = SearchOptions::default();
        assert!(matches!(
            enlarge_rank(&rep, &w("x1"), &w("x1 x1"), 8, 3, 1e-6, &opts),
            Err(Error::CommutingPair(_))
        ));
        // Only t = 0 is tried, where the new generator equals ρ(a).
        assert!(matches!(
            enlarge_rank(&rep, &w("x1"), &w("x2"), 1, 3, 1e-6, &opts),
            Err(Error::NoGridPointPasses { best_margin, best_t }) if best_margin == 0.0 && best_t == 0.0
        ));
    }

    #[test]
    fn surface_round_trip() {
        let rep: MatrixRep<So3> = sample_tuple(2, 4).unwrap();
        let opts = SearchOptions::default();
        let (srep, cert) = surface_from_free(&rep, 64, 4, 1e-6, &opts).unwrap();
        assert_eq!(cert.kind, CertificateKind::SurfaceMargin);
        assert!(cert.residual.unwrap() <= RESIDUAL_BOUND);
        assert!(srep.relator_residual() <= RESIDUAL_BOUND);
        assert_eq!(
            srep.presentation(),
            &Presentation::surface(2, SurfaceForm::Mirrored).unwrap()
        );
        assert!(cert.value > 1e-6);
        // b1 ↦ α x1 α⁻¹ is not ρ(a1) at the chosen point.
        assert!(srep.evaluate(&w("a1 b1-")).unwrap().distance_to_identity() >= cert.value);

        let (frep, fcert) = free_from_surface(&srep, 32, 4, 1e-6, &opts).unwrap();
        assert_eq!(frep.presentation(), &Presentation::free_paired(2));
        assert!(certify_free(&frep, 4, 1e-6).unwrap().passed());
        assert_eq!(fcert.kind, CertificateKind::FreeUpToL);
    }

    #[test]
    fn identity_alpha_kills_a1_b1_inverse() {
        // With a single grid point only α = I is tried: b1 ↦ ρ(a1).
        let rep: MatrixRep<So3> = sample_tuple(2, 4).unwrap();
        match surface_from_free(&rep, 1, 2, 1e-6, &SearchOptions::default()) {
            Err(Error::MarginZeroEverywhere {
                best_margin,
                best_t,
                word,
            }) => {
                assert_eq!(best_margin, 0.0);
                assert_eq!(best_t, 0.0);
                let killed = w(&word);
                assert_eq!(killed, w("a1 b1-"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn omega_at_zero_restricts() {
        let rep: MatrixRep<So3> = sample_tuple(2, 4).unwrap();
        let (srep, _) = surface_from_free(&rep, 16, 3, 1e-6, &SearchOptions::default()).unwrap();
        // grid 1: ω = I, so the free rep is the untranslated tuple.
        let (frep, cert) = free_from_surface(&srep, 1, 3, 1e-6, &SearchOptions::default()).unwrap();
        assert_eq!(cert.t, Some(0.0));
        let untranslated = MatrixRep::new(
            Presentation::free_paired(2),
            {
                let names = ["a1", "a1'", "b1'", "b1"];
                names
                    .iter()
                    .map(|n| srep.evaluate(&w(n)).unwrap())
                    .collect()
            },
            4,
            1e-6,
        )
        .unwrap();
        assert_eq!(frep.images(), untranslated.images());
    }

    #[test]
    fn screening_matches_exact_search_when_it_finds_the_optimum() {
        let rep: MatrixRep<So3> = sample_tuple(2, 21).unwrap();
        let exact = SearchOptions::default();
        let screened = SearchOptions {
            screen_work: 1,
            ..SearchOptions::default()
        };
        let (a, ca) = enlarge_rank(&rep, &w("x1"), &w("x2"), 32, 4, 1e-6, &exact).unwrap();
        let (b, cb) = enlarge_rank(&rep, &w("x1"), &w("x2"), 32, 4, 1e-6, &screened).unwrap();
        assert_eq!(cb.screen_l, Some(1));
        assert!(ca.screen_l.is_none());
        // The screened choice is never better than the exact optimum.
        assert!(cb.value <= ca.value);
        assert!(certify_free(&b, 4, 1e-6).unwrap().passed());
        assert!(certify_free(&a, 4, 1e-6).unwrap().passed());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let rep: MatrixRep<So3> = sample_tuple(2, 8).unwrap();
        let run = |exec| {
            let opts = SearchOptions {
                exec,
                ..SearchOptions::default()
            };
            surface_from_free(&rep, 32, 3, 1e-6, &opts).unwrap()
        };
        let (r1, c1) = run(Execution::Sequential);
        let (r2, c2) = run(Execution::Parallel);
        assert_eq!(r1, r2);
        assert_eq!(c1, c2);
    }

    #[test]
    fn works_in_sl2() {
        let rep: MatrixRep<Sl2> = sample_tuple(2, 2).unwrap();
        let (big, _) = enlarge_rank(
            &rep,
            &w("x1"),
            &w("x2"),
            16,
            3,
            1e-6,
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(big.rank(), 3);
    }

    #[test]
    fn odd_rank_and_surface_inputs_are_rejected() {
        let rep: MatrixRep<So3> = sample_tuple(3, 1).unwrap();
        assert!(surface_from_free(&rep, 4, 2, 1e-6, &SearchOptions::default()).is_err());
        assert_eq!(
            free_from_surface(&rep, 4, 2, 1e-6, &SearchOptions::default()).unwrap_err(),
            Error::NotSurface
        );
    }
}

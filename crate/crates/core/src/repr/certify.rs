use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::group::{GroupElement, GroupKind, SL2_SAMPLER};
use super::rep::MatrixRep;
use super::scan::scan_ball;
use crate::ball::{ball_size, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    FreeUpToL,
    SurfaceMargin,
    CoveringRadius,
}

/// Evidence for a finite-scale claim, re-runnable from `seed` and the
/// recorded parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub group: GroupKind,
    #[serde(rename = "L")]
    pub l: usize,
    pub tol: f64,
    /// Margin (least distance to the identity) or covering radius.
    pub value: f64,
    pub seed: u64,
    pub grid: Option<usize>,
    pub t: Option<f64>,
    /// Largest relator residual seen over the grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Word length used to rank grid points before the full check.
    #[serde(rename = "screen_L", default, skip_serializing_if = "Option::is_none")]
    pub screen_l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
    pub timestamp: Option<String>,
}

impl Certificate {
    pub(crate) fn new<E: GroupElement>(
        kind: CertificateKind,
        rep: &MatrixRep<E>,
        l: usize,
        tol: f64,
        value: f64,
    ) -> Self {
        Certificate {
            kind,
            group: E::KIND,
            l,
            tol,
            value,
            seed: rep.seed(),
            grid: None,
            t: None,
            residual: None,
            screen_l: None,
            samples: None,
            sampler: (E::KIND == GroupKind::Sl2).then(|| SL2_SAMPLER.to_string()),
            timestamp: None,
        }
    }
}

/// A word of the ball evaluating within tolerance of the identity: a
/// relation candidate, not a proof that the image is not free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub word: Word,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FreeCheck {
    Pass(Certificate),
    Fail(FailureWitness),
}

impl FreeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, FreeCheck::Pass(_))
    }
}

pub(crate) fn check_ball_budget(rank: usize, l: usize, budget: u128) -> Result<()> {
    let size = ball_size(rank, l);
    if size > budget {
        return Err(Error::BallTooLarge { size, budget });
    }
    Ok(())
}

/// Checks that every reduced word of length `1..=l` lies farther than `tol`
/// from the identity (Frobenius norm).
pub fn certify_free<E: GroupElement>(rep: &MatrixRep<E>, l: usize, tol: f64) -> Result<FreeCheck> {
    certify_free_with(rep, l, tol, DEFAULT_BUDGET, Execution::default())
}

pub fn certify_free_with<E: GroupElement>(
    rep: &MatrixRep<E>,
    l: usize,
    tol: f64,
    budget: u128,
    exec: Execution,
) -> Result<FreeCheck> {
    if rep.presentation().is_surface() {
        return Err(Error::NotFree);
    }
    check_ball_budget(rep.rank(), l, budget)?;
    let scan = scan_ball(&rep.letter_images(), l, tol, &HashSet::new(), exec);
    Ok(match scan.failure {
        Some(codes) => {
            let word = rep.presentation().decode(&codes);
            let distance = rep.evaluate(&word)?.distance_to_identity();
            FreeCheck::Fail(FailureWitness { word, distance })
        }
        None => FreeCheck::Pass(Certificate::new(
            CertificateKind::FreeUpToL,
            rep,
            l,
            tol,
            scan.min,
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use crate::repr::group::{Sl2, So3};
    use crate::repr::rep::sample_tuple;
    use nalgebra::Vector3;

    #[test]
    fn commuting_rotations_fail_at_the_commutator() {
        let p = Presentation::free(2);
        let images = vec![
            So3::from_axis_angle(Vector3::z(), 0.7),
            So3::from_axis_angle(Vector3::z(), 1.3),
        ];
        let rep = MatrixRep::new(p, images, 0, 1e-6).unwrap();
        let FreeCheck::Fail(w) = certify_free(&rep, 6, 1e-6).unwrap() else {
            panic!()
        };
        assert_eq!(w.word, Word::parse("x1 x2 x1- x2-").unwrap());
        assert_eq!(w.word, Word::gen("x1").commutator(&Word::gen("x2")));
    }

    #[test]
    fn identity_generator_fails_at_length_one() {
        let mut rep: MatrixRep<So3> = sample_tuple(2, 3).unwrap();
        rep = MatrixRep::new(
            rep.presentation().clone(),
            vec![rep.images()[0], So3::identity()],
            3,
            1e-6,
        )
        .unwrap();
        let FreeCheck::Fail(w) = certify_free(&rep, 4, 1e-6).unwrap() else {
            panic!()
        };
        assert_eq!(w.word, Word::gen("x2"));
        assert_eq!(w.distance, 0.0);
    }

    #[test]
    fn random_pairs_pass() {
        for seed in 0..3 {
            let rep: MatrixRep<So3> = sample_tuple(2, seed).unwrap();
            let FreeCheck::Pass(cert) = certify_free(&rep, 8, 1e-6).unwrap() else {
                panic!()
            };
            assert!(cert.value > 1e-6);
            assert_eq!(cert.seed, seed);
            let rep: MatrixRep<Sl2> = sample_tuple(2, seed).unwrap();
            assert!(certify_free(&rep, 6, 1e-6).unwrap().passed());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let rep: MatrixRep<So3> = sample_tuple(2, 0).unwrap();
        assert_eq!(
            certify_free_with(&rep, 10, 1e-6, 1000, Execution::Sequential).unwrap_err(),
            Error::BallTooLarge {
                size: ball_size(2, 10),
                budget: 1000
            }
        );
    }

    #[test]
    fn certificate_json() {
        let rep: MatrixRep<So3> = sample_tuple(2, 5).unwrap();
        let FreeCheck::Pass(cert) = certify_free(&rep, 3, 1e-6).unwrap() else {
            panic!()
        };
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.starts_with(r#"{"kind":"FreeUpToL","group":"SO3","L":3,"tol":1e-6,"#));
        assert!(json.ends_with(r#""seed":5,"grid":null,"t":null,"timestamp":null}"#));
        assert_eq!(serde_json::from_str::<Certificate>(&json).unwrap(), cert);
    }
}

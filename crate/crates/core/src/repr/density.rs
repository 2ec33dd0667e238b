//! Covering radius of a word ball in `SO(3)`: how far a Haar-random rotation
//! can be from the nearest element of the ball, as a finite-scale proxy for
//! density.
//!
//! Rotations are unit quaternions up to sign. For unit vectors `p`, `r` in
//! `ℝ⁴`, `‖p − r‖ = 2 sin(φ/2)` with `φ` the angle between them, and the
//! rotation angle between the corresponding rotations is `2φ` when `r` is
//! the closer of `±r`. Nearest neighbours in `ℝ⁴` therefore give geodesic
//! distances exactly, and a kd-tree over one representative per rotation,
//! queried at both `p` and `−p`, finds them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::certify::{Certificate, CertificateKind};
use super::group::{GroupElement, So3};
use super::rep::{step, MatrixRep};
use crate::ball::{self, ball_size, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

type Point = [f64; 4];

fn dist2(a: &Point, b: &Point) -> f64 {
    (0..4).map(|i| (a[i] - b[i]) * (a[i] - b[i])).sum()
}

/// Static kd-tree in `ℝ⁴`, stored implicitly: the subtree over `lo..hi` has
/// its splitting point at the midpoint, split on axis `depth % 4`.
pub struct KdTree {
    points: Vec<Point>,
}

const LEAF: usize = 8;

impl KdTree {
    pub fn new(mut points: Vec<Point>) -> KdTree {
        fn build(points: &mut [Point], depth: usize) {
            if points.len() <= LEAF {
                return;
            }
            let axis = depth % 4;
            let mid = points.len() / 2;
            points.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
            let (left, right) = points.split_at_mut(mid);
            build(left, depth + 1);
            build(&mut right[1..], depth + 1);
        }
        build(&mut points, 0);
        KdTree { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Squared distance from `q` to its nearest point.
    pub fn nearest_dist2(&self, q: &Point) -> f64 {
        let mut best = f64::INFINITY;
        self.search(&self.points, 0, q, &mut best);
        best
    }

    fn search(&self, points: &[Point], depth: usize, q: &Point, best: &mut f64) {
        if points.len() <= LEAF {
            for p in points {
                let d = dist2(p, q);
                if d < *best {
                    *best = d;
                }
            }
            return;
        }
        let axis = depth % 4;
        let mid = points.len() / 2;
        let split = &points[mid];
        let d = dist2(split, q);
        if d < *best {
            *best = d;
        }
        let delta = q[axis] - split[axis];
        let (near, far) = if delta < 0.0 {
            (&points[..mid], &points[mid + 1..])
        } else {
            (&points[mid + 1..], &points[..mid])
        };
        self.search(near, depth + 1, q, best);
        if delta * delta < *best {
            self.search(far, depth + 1, q, best);
        }
    }
}

/// Rotation angle between `p` and the nearest of the tree's rotations.
fn nearest_angle(tree: &KdTree, p: &Point) -> f64 {
    let neg = [-p[0], -p[1], -p[2], -p[3]];
    let d2 = tree.nearest_dist2(p).min(tree.nearest_dist2(&neg));
    4.0 * (0.5 * d2.sqrt()).min(1.0).asin()
}

/// Maximum over `samples` seeded Haar rotations of the rotation-angle
/// distance to the ball of radius `l` (identity included).
pub fn covering_radius(
    rep: &MatrixRep<So3>,
    l: usize,
    samples: usize,
    seed: u64,
) -> Result<Certificate> {
    covering_radius_with(rep, l, samples, seed, DEFAULT_BUDGET, Execution::default())
}

pub fn covering_radius_with(
    rep: &MatrixRep<So3>,
    l: usize,
    samples: usize,
    seed: u64,
    budget: u128,
    exec: Execution,
) -> Result<Certificate> {
    let size = ball_size(rep.rank(), l).saturating_add(1);
    if size > budget {
        return Err(Error::BallTooLarge { size, budget });
    }
    let letters = rep.letter_images();
    let mut points = Vec::with_capacity(size as usize);
    points.push(So3::identity().coords());
    let step_fn =
        |prefix: &So3, code: u32, depth: usize| step(prefix, &letters[code as usize], depth);
    ball::walk(
        rep.rank(),
        l,
        0..letters.len() as u32,
        So3::identity(),
        &step_fn,
        &mut |_: &[u32], g: &So3| points.push(g.renormalize().coords()),
    );
    let tree = KdTree::new(points);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<Point> = (0..samples)
        .map(|_| So3::sample(&mut rng).coords())
        .collect();
    let radius = exec::map_slice(exec, &probes, |p| nearest_angle(&tree, p))
        .into_iter()
        .fold(0.0, f64::max);
    let mut cert = Certificate::new(
        CertificateKind::CoveringRadius,
        rep,
        l,
        rep.tolerance(),
        radius,
    );
    cert.seed = seed;
    cert.samples = Some(samples);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use crate::repr::rep::sample_tuple;

    #[test]
    fn kd_tree_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let points: Vec<Point> = (0..2000).map(|_| So3::sample(&mut rng).coords()).collect();
        let tree = KdTree::new(points.clone());
        for _ in 0..200 {
            let q = So3::sample(&mut rng).coords();
            let brute = points
                .iter()
                .map(|p| dist2(p, &q))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(tree.nearest_dist2(&q), brute);
        }
    }

    #[test]
    fn nearest_angle_is_rotation_angle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<So3> = (0..50).map(|_| So3::sample(&mut rng)).collect();
        let tree = KdTree::new(pts.iter().map(|g| g.coords()).collect());
        for _ in 0..50 {
            let p = So3::sample(&mut rng);
            let brute = pts
                .iter()
                .map(|g| g.angle_to(&p))
                .fold(f64::INFINITY, f64::min);
            assert!((nearest_angle(&tree, &p.coords()) - brute).abs() < 1e-7);
        }
    }

    #[test]
    fn trivial_rep_covers_nothing_but_the_identity() {
        let rep = MatrixRep::new(Presentation::free(2), vec![So3::identity(); 2], 0, 1e-6).unwrap();
        let cert = covering_radius(&rep, 2, 500, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let expected = (0..500)
            .map(|_| So3::sample(&mut rng).angle())
            .fold(0.0, f64::max);
        assert!((cert.value - expected).abs() < 1e-7);
        assert!(cert.value > 2.9 && cert.value <= std::f64::consts::PI);
    }

    #[test]
    fn radius_shrinks_with_length() {
        let rep: MatrixRep<So3> = sample_tuple(2, 5).unwrap();
        let values: Vec<f64> = [2, 4, 6]
            .iter()
            .map(|&l| covering_radius(&rep, l, 300, 9).unwrap().value)
            .collect();
        assert!(values.windows(2).all(|v| v[1] <= v[0]), "{values:?}");
        assert!(values[2] > 0.0);
        assert_eq!(covering_radius(&rep, 6, 300, 9).unwrap().value, values[2]);
        assert!(matches!(
            covering_radius_with(&rep, 6, 10, 0, 100, Execution::Sequential),
            Err(Error::BallTooLarge { .. })
        ));
    }
}

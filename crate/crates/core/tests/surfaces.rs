use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surfgroup::homomorphism::HomFamily;
use surfgroup::{Presentation, SurfaceForm, Word};

fn random_word(rng: &mut ChaCha8Rng, p: &Presentation, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let mut codes: Vec<u32> = Vec::new();
    while codes.len() < len {
        let c = rng.random_range(0..2 * p.rank() as u32);
        if codes.last().is_none_or(|&prev| prev != c ^ 1) {
            codes.push(c);
        }
    }
    p.decode(&codes)
}

#[test]
fn nontrivial_ball_counts_grow_with_length() {
    for p in [
        Presentation::surface(2, SurfaceForm::Standard).unwrap(),
        Presentation::surface(2, SurfaceForm::Mirrored).unwrap(),
    ] {
        let counts: Vec<usize> = (0..=8)
            .map(|l| p.enumerate_nontrivial_ball(l).count())
            .collect();
        assert!(counts.windows(2).all(|c| c[0] <= c[1]), "{counts:?}");
        // Below the relator length the ball is the full free ball.
        assert_eq!(counts[7] as u128, surfgroup::ball::ball_size(4, 7));
        assert_eq!(counts[8] as u128, surfgroup::ball::ball_size(4, 8) - 16);
    }
}

#[test]
fn cyclic_conjugates_of_the_relator_are_trivial() {
    for form in [SurfaceForm::Standard, SurfaceForm::Mirrored] {
        let p = Presentation::surface(4, form).unwrap();
        let r = p.relator().letters().to_vec();
        for s in 0..r.len() {
            let rotated = Word::from_letters(r[s..].iter().chain(&r[..s]).copied());
            assert!(p.dehn_trivial(&rotated).unwrap());
            assert!(p.dehn_trivial(&rotated.inverse()).unwrap());
            // Dropping one letter leaves a nontrivial word.
            let cut = Word::from_letters(rotated.letters()[1..].iter().copied());
            assert!(!p.dehn_trivial(&cut).unwrap());
        }
    }
}

#[test]
fn twist_fold_images_agree_with_dehn() {
    // Homomorphisms send trivial words to trivial words, and every word the
    // family keeps nontrivial for some n must be nontrivial in the source.
    let family = HomFamily::twist_fold(1).unwrap();
    let source = family.source();
    let target = family.target();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let members: Vec<_> = (0..=20).map(|n| family.member(n).unwrap()).collect();
    for _ in 0..300 {
        let g = random_word(&mut rng, &source, 5);
        let h = random_word(&mut rng, &source, 5);
        let trivial = source
            .relator()
            .conjugate(&g)
            .multiply(&source.relator().inverse().conjugate(&h));
        assert!(source.dehn_trivial(&trivial).unwrap());
        for m in &members {
            assert!(target.is_trivial(&m.apply(&trivial).unwrap()).unwrap());
        }

        let w = random_word(&mut rng, &source, 12);
        let dehn_nontrivial = !source.dehn_trivial(&w).unwrap();
        let some_image_nontrivial = members.iter().any(|m| !m.apply(&w).unwrap().is_identity());
        assert_eq!(dehn_nontrivial, some_image_nontrivial, "{w}");
    }
}

#[test]
fn equality_in_the_group_respects_relator_moves() {
    let p = Presentation::surface(2, SurfaceForm::Standard).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let u = random_word(&mut rng, &p, 10);
        let g = random_word(&mut rng, &p, 3);
        let v = u.multiply(&p.relator().conjugate(&g));
        assert!(p.equal_in_group(&u, &v).unwrap());
        assert!(!p.equal_in_group(&u, &v.multiply(&Word::gen("a1"))).unwrap());
    }
}

//! Words `u^{n1}·a1·u^{n2}·a2⋯u^{nk}·ak` and the search for a threshold `n0`
//! beyond which they are never trivial.
//!
//! Writing `u = c·p·c⁻¹` with `p` cyclically reduced, the word is conjugate
//! to `p^{n1}·a1'⋯p^{nk}·ak'` where `ai' = c⁻¹·ai·c`. The box search walks
//! exponent vectors depth-first on a reduction stack: moving from `n` to
//! `n + 1` pushes one copy of `p`, and a leaf is trivial exactly when the
//! stack equals `ak'⁻¹`. Each vector therefore costs `O(|p|)` instead of a
//! full reduction.

use serde::{Deserialize, Serialize};

use crate::ball::{inverse_code, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::presentation::Presentation;
use crate::word::Word;

/// `u` together with `a1, …, ak`, none of which commutes with `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceJson", into = "InstanceJson")]
pub struct BaumslagInstance {
    u: Word,
    a_list: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    u: Word,
    a: Vec<Word>,
}

impl TryFrom<InstanceJson> for BaumslagInstance {
    type Error = Error;
    fn try_from(j: InstanceJson) -> Result<Self> {
        BaumslagInstance::new(j.u, j.a)
    }
}

impl From<BaumslagInstance> for InstanceJson {
    fn from(inst: BaumslagInstance) -> Self {
        InstanceJson {
            u: inst.u,
            a: inst.a_list,
        }
    }
}

/// Outcome of an exhaustive box check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxOutcome {
    Holds,
    /// First exponent vector (in search order) giving the identity.
    Fails(Vec<i64>),
}

impl BoxOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, BoxOutcome::Holds)
    }
}

impl BaumslagInstance {
    pub fn new(u: Word, a_list: Vec<Word>) -> Result<Self> {
        if u.is_identity() {
            return Err(Error::InvalidInstance("u is trivial".into()));
        }
        if a_list.is_empty() {
            return Err(Error::InvalidInstance("empty list of a_i".into()));
        }
        for (i, a) in a_list.iter().enumerate() {
            if u.commutes(a) {
                return Err(Error::CommutingPair(format!(
                    "u = [{u}] and a{} = [{a}]",
                    i + 1
                )));
            }
        }
        Ok(BaumslagInstance { u, a_list })
    }

    pub fn u(&self) -> &Word {
        &self.u
    }

    pub fn a_list(&self) -> &[Word] {
        &self.a_list
    }

    pub fn k(&self) -> usize {
        self.a_list.len()
    }

    /// `u^{n1}·a1⋯u^{nk}·ak`, reduced.
    pub fn word(&self, exponents: &[i64]) -> Result<Word> {
        if exponents.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: exponents.len(),
            });
        }
        let letters = exponents.iter().zip(&self.a_list).flat_map(|(&n, a)| {
            let mut part = self.u.pow(n).letters().to_vec();
            part.extend_from_slice(a.letters());
            part
        });
        Ok(Word::from_letters(letters))
    }

    /// Is the word nontrivial for every exponent vector with
    /// `n0 ≤ |n_i| ≤ n_max`, both signs?
    pub fn check_box(&self, n0: i64, n_max: i64, budget: Option<u128>) -> Result<BoxOutcome> {
        self.check_box_with(n0, n_max, budget, Execution::default())
    }

    pub fn check_box_with(
        &self,
        n0: i64,
        n_max: i64,
        budget: Option<u128>,
        exec: Execution,
    ) -> Result<BoxOutcome> {
        if n0 < 1 || n_max < n0 {
            return Err(Error::InvalidInstance(format!(
                "need 1 ≤ n0 ≤ N, got n0 = {n0}, N = {n_max}"
            )));
        }
        self.check_budget(n0, n_max, budget)?;
        let search = Search::new(self, n0, n_max);
        let found = exec::find_first(exec, search.exponents.len(), |i| {
            let mut exps = vec![search.exponents[i]];
            let mut hit = None;
            search.descend(search.start(i), &mut exps, &mut |v| {
                hit = Some(v.to_vec());
                false
            });
            hit
        });
        Ok(match found {
            Some((_, v)) => BoxOutcome::Fails(v),
            None => BoxOutcome::Holds,
        })
    }

    /// Smallest `n0 ≤ n_max` with `check_box(n0, n_max)` passing.
    pub fn find_n0(&self, n_max: i64, budget: Option<u128>) -> Result<i64> {
        self.find_n0_with(n_max, budget, Execution::default())
    }

    pub fn find_n0_with(&self, n_max: i64, budget: Option<u128>, exec: Execution) -> Result<i64> {
        if n_max < 1 {
            return Err(Error::NotFoundWithin(n_max));
        }
        self.check_budget(1, n_max, budget)?;
        let search = Search::new(self, 1, n_max);
        // Largest min|n_i| over trivial vectors; every n0 up to it fails.
        let worst = exec::map_indexed(exec, search.exponents.len(), |i| {
            let mut exps = vec![search.exponents[i]];
            let mut worst = 0i64;
            search.descend(search.start(i), &mut exps, &mut |v| {
                worst = worst.max(v.iter().map(|n| n.abs()).min().unwrap_or(0));
                true
            });
            worst
        });
        let n0 = worst.into_iter().max().unwrap_or(0) + 1;
        if n0 > n_max {
            return Err(Error::NotFoundWithin(n_max));
        }
        Ok(n0)
    }

    fn check_budget(&self, n0: i64, n_max: i64, budget: Option<u128>) -> Result<()> {
        let budget = budget.unwrap_or(DEFAULT_BUDGET);
        let side = 2 * (n_max - n0 + 1) as u128;
        let size = (0..self.k()).fold(1u128, |acc, _| acc.saturating_mul(side));
        if size > budget {
            return Err(Error::BoxTooLarge { size, budget });
        }
        Ok(())
    }
}

/// Encoded data for the incremental box walk.
struct Search {
    /// `p` and `p⁻¹`
    blocks: [Vec<u32>; 2],
    /// Conjugated `a_i' = c⁻¹ a_i c`.
    tails: Vec<Vec<u32>>,
    /// `a_k'⁻¹`: a leaf is trivial iff its stack equals this.
    target: Vec<u32>,
    /// Exponent values per level, in search order: `n0..=N`, then `-n0..=-N`.
    exponents: Vec<i64>,
}

#[inline]
fn push(stack: &mut Vec<u32>, c: u32) {
    if stack.last() == Some(&inverse_code(c)) {
        stack.pop();
    } else {
        stack.push(c);
    }
}

impl Search {
    fn new(inst: &BaumslagInstance, n0: i64, n_max: i64) -> Self {
        let mut names: Vec<&'static str> = Vec::new();
        for w in std::iter::once(&inst.u).chain(&inst.a_list) {
            for g in w.generators() {
                if !names.contains(&g.name()) {
                    names.push(g.name());
                }
            }
        }
        let alphabet = Presentation::free_named(&names).expect("names come from words");
        let encode = |w: &Word| alphabet.encode(w).expect("word over its own alphabet");
        let (core, conj) = inst.u.cyclic_reduce();
        let p = encode(&core);
        let p_inv = encode(&core.inverse());
        let tails: Vec<Vec<u32>> = inst
            .a_list
            .iter()
            .map(|a| encode(&conj.inverse().multiply(a).multiply(&conj)))
            .collect();
        let target = tails
            .last()
            .expect("nonempty list")
            .iter()
            .rev()
            .map(|&c| inverse_code(c))
            .collect();
        let exponents = (n0..=n_max).chain((n0..=n_max).map(|n| -n)).collect();
        Search {
            blocks: [p, p_inv],
            tails,
            target,
            exponents,
        }
    }

    /// Stack after `p^{e}` for the first-level exponent with index `i`.
    fn start(&self, i: usize) -> Vec<u32> {
        let e = self.exponents[i];
        let block = &self.blocks[usize::from(e < 0)];
        let mut stack = Vec::with_capacity(block.len() * e.unsigned_abs() as usize);
        for _ in 0..e.abs() {
            for &c in block {
                push(&mut stack, c);
            }
        }
        stack
    }

    /// Continues the walk below a fixed prefix of exponents. `stack` holds the
    /// reduction of `p^{n1}a1'⋯p^{nj}` for the `j = exps.len()` exponents
    /// chosen so far. `on_trivial` sees each trivial vector and returns
    /// whether to keep going. Returns `false` once stopped.
    fn descend<F>(&self, stack: Vec<u32>, exps: &mut Vec<i64>, on_trivial: &mut F) -> bool
    where
        F: FnMut(&[i64]) -> bool,
    {
        let k = self.tails.len();
        if exps.len() == k {
            return stack != self.target || on_trivial(exps);
        }
        let mut base = stack;
        for &c in &self.tails[exps.len() - 1] {
            push(&mut base, c);
        }
        // Children at the last level are compared in place, without cloning.
        let leaf = exps.len() + 1 == k;
        let half = self.exponents.len() / 2;
        for sign in 0..2 {
            let block = &self.blocks[sign];
            let mut current = base.clone();
            let mut reps = 0i64;
            for &e in &self.exponents[sign * half..(sign + 1) * half] {
                while reps < e.abs() {
                    for &c in block {
                        push(&mut current, c);
                    }
                    reps += 1;
                }
                exps.push(e);
                let keep_going = if leaf {
                    current != self.target || on_trivial(exps)
                } else {
                    self.descend(current.clone(), exps, on_trivial)
                };
                exps.pop();
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn naive_trivial(inst: &BaumslagInstance, exps: &[i64]) -> bool {
        let mut acc = Word::identity();
        for (&n, a) in exps.iter().zip(inst.a_list()) {
            for _ in 0..n.abs() {
                acc = if n > 0 {
                    &acc * inst.u()
                } else {
                    &acc * &inst.u().inverse()
                };
            }
            acc = &acc * a;
        }
        acc.is_identity()
    }

    #[test]
    fn word_examples() {
        let inst = BaumslagInstance::new(w("x1"), vec![w("x2")]).unwrap();
        assert_eq!(inst.word(&[3]).unwrap(), w("x1 x1 x1 x2"));

        let u = w("x1 x2 x1-");
        let inst = BaumslagInstance::new(u.clone(), vec![u.pow(-2).multiply(&w("x3"))]).unwrap();
        assert_eq!(inst.word(&[2]).unwrap(), w("x3"));

        let inst = BaumslagInstance::new(w("x1"), vec![w("x2"), w("x2-")]).unwrap();
        assert_eq!(inst.word(&[1, -1]).unwrap(), w("x1 x2 x1- x2-"));
        assert_eq!(
            inst.word(&[1]).unwrap_err(),
            Error::LengthMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn construction_rejects_commuting_pairs() {
        assert!(matches!(
            BaumslagInstance::new(w("x1"), vec![w("x1 x1")]),
            Err(Error::CommutingPair(_))
        ));
        let u = w("x1 x2");
        let a = u.pow(-3);
        assert!(u.pow(3).multiply(&a).is_identity());
        assert!(matches!(
            BaumslagInstance::new(u, vec![a]),
            Err(Error::CommutingPair(_))
        ));
        assert!(BaumslagInstance::new(Word::identity(), vec![w("x1")]).is_err());
        assert!(BaumslagInstance::new(w("x1"), vec![]).is_err());
    }

    #[test]
    fn check_box_examples() {
        let inst = BaumslagInstance::new(w("x1"), vec![w("x2")]).unwrap();
        assert!(inst.check_box(1, 10, None).unwrap().holds());
        let inst = BaumslagInstance::new(w("x1"), vec![w("x2"), w("x2-")]).unwrap();
        assert!(inst.check_box(1, 5, None).unwrap().holds());

        let four = BaumslagInstance::new(w("x1"), vec![w("x2"); 4]).unwrap();
        assert_eq!(
            four.check_box(1, 100, Some(1000)).unwrap_err(),
            Error::BoxTooLarge {
                size: 200u128.pow(4),
                budget: 1000
            }
        );
    }

    #[test]
    fn find_n0_examples() {
        let inst = BaumslagInstance::new(w("x1"), vec![w("x2")]).unwrap();
        assert_eq!(inst.find_n0(50, None).unwrap(), 1);
        let u = w("x1 x2 x1-");
        let inst = BaumslagInstance::new(u.clone(), vec![u.pow(-2).multiply(&w("x3"))]).unwrap();
        assert_eq!(inst.find_n0(50, None).unwrap(), 1);
    }

    #[test]
    fn constructed_failure_is_found() {
        // x1^{n1}·x2·x1^{n2}·x1^{-3} x2⁻¹ x1^{-2} is trivial exactly at (2, 3).
        let inst =
            BaumslagInstance::new(w("x1"), vec![w("x2"), w("x1- x1- x1- x2- x1- x1-")]).unwrap();
        assert!(inst.word(&[2, 3]).unwrap().is_identity());
        assert_eq!(
            inst.check_box(1, 5, None).unwrap(),
            BoxOutcome::Fails(vec![2, 3])
        );
        assert!(inst.check_box(3, 5, None).unwrap().holds());
        assert_eq!(inst.find_n0(5, None).unwrap(), 3);
        // Only vectors inside the box count.
        assert_eq!(inst.find_n0(2, None).unwrap(), 1);

        let diagonal =
            BaumslagInstance::new(w("x1"), vec![w("x2"), w("x1- x1- x2- x1- x1-")]).unwrap();
        assert_eq!(
            diagonal.check_box(1, 4, None).unwrap(),
            BoxOutcome::Fails(vec![2, 2])
        );
        assert_eq!(
            diagonal.find_n0(2, None).unwrap_err(),
            Error::NotFoundWithin(2)
        );
        assert_eq!(diagonal.find_n0(4, None).unwrap(), 3);
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let letters = ["x1", "x1-", "x2", "x2-"];
        let random_word = |rng: &mut rand_chacha::ChaCha8Rng, max: usize| {
            let len = rng.random_range(1..=max);
            let text: Vec<&str> = (0..len).map(|_| letters[rng.random_range(0..4)]).collect();
            w(&text.join(" "))
        };
        let mut checked = 0;
        while checked < 40 {
            let u = random_word(&mut rng, 3);
            let a: Vec<Word> = (0..2).map(|_| random_word(&mut rng, 4)).collect();
            let Ok(inst) = BaumslagInstance::new(u, a) else {
                continue;
            };
            checked += 1;
            let range: Vec<i64> = (1..=4).chain((1..=4).map(|n: i64| -n)).collect();
            let brute = range
                .iter()
                .flat_map(|&e1| range.iter().map(move |&e2| vec![e1, e2]))
                .find(|v| naive_trivial(&inst, v));
            let outcome = inst.check_box(1, 4, None).unwrap();
            assert_eq!(
                outcome,
                brute.map_or(BoxOutcome::Holds, BoxOutcome::Fails),
                "{inst:?}"
            );
        }
    }

    #[test]
    fn modes_agree() {
        let inst =
            BaumslagInstance::new(w("x1 x2"), vec![w("x2- x1"), w("x3 x1-"), w("x2")]).unwrap();
        let seq = inst.find_n0_with(12, None, Execution::Sequential).unwrap();
        let par = inst.find_n0_with(12, None, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(
            inst.check_box_with(1, 8, None, Execution::Sequential)
                .unwrap(),
            inst.check_box_with(1, 8, None, Execution::Parallel)
                .unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let inst = BaumslagInstance::new(w("x1 x2"), vec![w("x3"), w("x2- x1")]).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        assert_eq!(json, r#"{"u":["x1","x2"],"a":[["x3"],["x2-","x1"]]}"#);
        assert_eq!(
            serde_json::from_str::<BaumslagInstance>(&json).unwrap(),
            inst
        );
        assert!(serde_json::from_str::<BaumslagInstance>(r#"{"u":["x1"],"a":[["x1"]]}"#).is_err());
    }
}

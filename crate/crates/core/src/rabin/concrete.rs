use alloc::vec::Vec;

use num_traits::One;

use crate::rational::{rat, Rational};

/// `n + 1` for even `n`, `n - 1` for odd `n`.
pub fn conj(n: u32) -> u32 {
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// What one unit of reward stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// One per loop iteration, i.e. per served tourist.
    Step,
    /// One per round. In a round every waiting tourist is served once, in
    /// an order the adversary picks; a tourist moved to the other place
    /// waits for the next round.
    Sweep,
}

/// An undecided tourist: the number on their notepad and whether they
/// were already served in the current round (always false under
/// [`Convention::Step`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tourist {
    pub pad: u32,
    pub served: bool,
}

/// One demonic resolution: which place to serve, and which notepad value
/// to take from its queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub side: Side,
    pub tourist: Tourist,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RabinState {
    pub lout: Vec<Tourist>,
    pub rout: Vec<Tourist>,
    pub lin: Vec<u32>,
    pub rin: Vec<u32>,
    pub board_l: u32,
    pub board_r: u32,
    /// At the start of a round (sweep convention); always true under the
    /// step convention.
    pub fresh: bool,
}

fn insert<T: Ord>(bag: &mut Vec<T>, x: T) {
    let i = bag.partition_point(|y| *y <= x);
    bag.insert(i, x);
}

impl RabinState {
    pub fn initial(a: u32, b: u32) -> Self {
        let t = Tourist { pad: 0, served: false };
        RabinState {
            lout: alloc::vec![t; a as usize],
            rout: alloc::vec![t; b as usize],
            lin: Vec::new(),
            rin: Vec::new(),
            board_l: 0,
            board_r: 0,
            fresh: true,
        }
    }

    pub fn tourists(&self) -> usize {
        self.lout.len() + self.rout.len() + self.lin.len() + self.rin.len()
    }

    pub fn is_terminated(&self) -> bool {
        self.lout.is_empty() && self.rout.is_empty()
    }

    /// `#lin = N ∨ #rin = N`.
    pub fn is_target(&self) -> bool {
        let n = self.tourists();
        self.lin.len() == n || self.rin.len() == n
    }

    /// Largest number on any board or notepad.
    pub fn max_value(&self) -> u32 {
        let pads = self.lout.iter().chain(&self.rout).map(|t| t.pad);
        pads.chain(self.lin.iter().copied()).chain(self.rin.iter().copied()).fold(self.board_l.max(self.board_r), u32::max)
    }

    pub fn gap(&self) -> i64 {
        self.board_l as i64 - self.board_r as i64
    }

    /// Enabled moves: each non-empty queue, each distinct tourist in it. Under
    /// the sweep convention only tourists not yet served this round.
    pub fn moves(&self, conv: Convention) -> Vec<Move> {
        let mut out = Vec::new();
        for (side, bag) in [(Side::Left, &self.lout), (Side::Right, &self.rout)] {
            let mut last = None;
            for t in bag {
                if conv == Convention::Sweep && t.served {
                    continue;
                }
                if last != Some(*t) {
                    out.push(Move { side, tourist: *t });
                    last = Some(*t);
                }
            }
        }
        out
    }

    /// One loop iteration. Returns one outcome, or two equally likely ones
    /// when the tourist flips the coin.
    ///
    /// Panics if the move is not enabled.
    pub fn step(&self, mv: Move, conv: Convention) -> Vec<(RabinState, Rational)> {
        let mut base = self.clone();
        let (queue, other, decided, board) = match mv.side {
            Side::Left => (&mut base.lout, &mut base.rout, &mut base.lin, &mut base.board_l),
            Side::Right => (&mut base.rout, &mut base.lout, &mut base.rin, &mut base.board_r),
        };
        let i = queue.iter().position(|t| *t == mv.tourist).expect("move is enabled");
        let k = queue.remove(i).pad;
        let served = conv == Convention::Sweep;
        let mut outcomes = Vec::with_capacity(2);
        if !decided.is_empty() || k > *board {
            insert(decided, k);
            outcomes.push((base, Rational::one()));
        } else if k == *board {
            let up = *board + 2;
            for b in [up, conj(up)] {
                let mut s = base.clone();
                match mv.side {
                    Side::Left => {
                        s.board_l = b;
                        insert(&mut s.rout, Tourist { pad: b, served });
                    }
                    Side::Right => {
                        s.board_r = b;
                        insert(&mut s.lout, Tourist { pad: b, served });
                    }
                }
                outcomes.push((s, rat(1, 2)));
            }
        } else {
            insert(other, Tourist { pad: *board, served });
            outcomes.push((base, Rational::one()));
        }
        for (s, _) in &mut outcomes {
            s.end_of_step(conv);
        }
        outcomes
    }

    fn end_of_step(&mut self, conv: Convention) {
        if conv == Convention::Step {
            return;
        }
        let waiting = self.lout.iter().chain(&self.rout);
        if waiting.clone().all(|t| t.served) {
            for bag in [&mut self.lout, &mut self.rout] {
                for t in bag.iter_mut() {
                    t.served = false;
                }
            }
            self.fresh = true;
        } else {
            self.fresh = false;
        }
    }

    /// `|L - R| ≤ 2`.
    pub fn boards_close(&self) -> bool {
        self.gap().abs() <= 2
    }
}

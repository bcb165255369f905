use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::One;

use super::concrete::{Convention, RabinState, Side};
use super::explore::explore;
use super::{Init, RabinError};
use crate::mdp::Mdp;
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Queue {
    Lout,
    Rout,
    Lin,
    Rin,
}

/// A notepad value relative to the boards: `At(o)` is the value `L + o` and
/// lies between the two boards (inclusive); `Low` is anything below both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Low,
    At(i8),
}

/// One tourist of the abstract model. Decided tourists are `Low` and
/// unserved, since their notepads are never read again.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Desc {
    pub queue: Queue,
    pub pos: Pos,
    pub served: bool,
}

/// Abstract state: the signed board gap `L - R` (always within ±3), the
/// parity of `L`, and the multiset of tourist descriptors. Absolute board
/// values are forgotten.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractState {
    pub gap: i8,
    pub l_odd: bool,
    pub tourists: Vec<Desc>,
    pub fresh: bool,
}

fn odd_step(odd: bool) -> i8 {
    // L + 2 keeps the parity, its conjugate is L + 3 (even L) or L + 1 (odd L)
    if odd {
        1
    } else {
        3
    }
}

impl AbstractState {
    pub fn initial(a: u32, b: u32) -> Self {
        AbstractState::of_concrete(&RabinState::initial(a, b))
    }

    /// The abstraction function.
    pub fn of_concrete(c: &RabinState) -> Self {
        let gap = c.gap() as i8;
        let lo = 0.min(-gap) as i64;
        let pos = |pad: u32| {
            let o = pad as i64 - c.board_l as i64;
            if o < lo {
                Pos::Low
            } else {
                Pos::At(o as i8)
            }
        };
        let waiting = |q, bag: &[super::concrete::Tourist]| {
            bag.iter().map(move |t| Desc { queue: q, pos: pos(t.pad), served: t.served }).collect::<Vec<_>>()
        };
        let mut tourists = waiting(Queue::Lout, &c.lout);
        tourists.extend(waiting(Queue::Rout, &c.rout));
        let decided = |q| Desc { queue: q, pos: Pos::Low, served: false };
        tourists.extend(c.lin.iter().map(|_| decided(Queue::Lin)));
        tourists.extend(c.rin.iter().map(|_| decided(Queue::Rin)));
        tourists.sort_unstable();
        AbstractState { gap, l_odd: c.board_l % 2 == 1, tourists, fresh: c.fresh }
    }

    /// 0 when `L = R`, 1 when they differ by 2, 2 when `L` is the conjugate
    /// of `R`. Other reachable configurations (a gap of 3, or a gap of 1
    /// between non-conjugates) have no slot.
    pub fn slot(&self) -> Option<u8> {
        match self.gap {
            0 => Some(0),
            2 | -2 => Some(1),
            // R = L - 1 with L odd, or R = L + 1 with L even
            1 if self.l_odd => Some(2),
            -1 if !self.l_odd => Some(2),
            _ => None,
        }
    }

    fn count(&self, q: Queue) -> usize {
        self.tourists.iter().filter(|d| d.queue == q).count()
    }

    pub fn is_target(&self) -> bool {
        let n = self.tourists.len();
        self.count(Queue::Lin) == n || self.count(Queue::Rin) == n
    }

    pub fn is_terminated(&self) -> bool {
        self.count(Queue::Lout) == 0 && self.count(Queue::Rout) == 0
    }

    /// Comparison of a descriptor's value with `L` and with `R`.
    pub fn compare(&self, d: &Desc) -> (Ordering, Ordering) {
        match d.pos {
            Pos::Low => (Ordering::Less, Ordering::Less),
            Pos::At(o) => (o.cmp(&0), o.cmp(&-self.gap)),
        }
    }

    pub fn moves(&self, conv: Convention) -> Vec<(Side, Desc)> {
        let mut out: Vec<(Side, Desc)> = Vec::new();
        for d in &self.tourists {
            let side = match d.queue {
                Queue::Lout => Side::Left,
                Queue::Rout => Side::Right,
                _ => continue,
            };
            if conv == Convention::Sweep && d.served {
                continue;
            }
            if out.last() != Some(&(side, *d)) {
                out.push((side, *d));
            }
        }
        out
    }

    pub fn step(&self, side: Side, d: Desc, conv: Convention) -> Result<Vec<(AbstractState, Rational)>, RabinError> {
        let mut base = self.clone();
        let i = base.tourists.iter().position(|x| *x == d).expect("move is enabled");
        base.tourists.remove(i);
        let served = conv == Convention::Sweep;
        let (decided, next_queue, cmp, board_at) = match side {
            Side::Left => (Queue::Lin, Queue::Rout, self.compare(&d).0, 0),
            Side::Right => (Queue::Rin, Queue::Lout, self.compare(&d).1, -self.gap),
        };
        let mut outcomes = Vec::with_capacity(2);
        if base.count(decided) > 0 || cmp == Ordering::Greater {
            base.tourists.push(Desc { queue: decided, pos: Pos::Low, served: false });
            outcomes.push((base, Rational::one()));
        } else if cmp == Ordering::Less {
            base.tourists.push(Desc { queue: next_queue, pos: Pos::At(board_at), served });
            outcomes.push((base, Rational::one()));
        } else {
            let r_odd = self.l_odd ^ (self.gap % 2 != 0);
            let odd = if side == Side::Left { self.l_odd } else { r_odd };
            for delta in [2, odd_step(odd)] {
                let mut s = base.clone();
                match side {
                    Side::Left => {
                        // offsets are relative to L, which moves up by delta
                        for t in &mut s.tourists {
                            if let Pos::At(o) = &mut t.pos {
                                *o -= delta;
                            }
                        }
                        s.gap += delta;
                        s.l_odd ^= delta % 2 != 0;
                        s.tourists.push(Desc { queue: Queue::Rout, pos: Pos::At(0), served });
                    }
                    Side::Right => {
                        s.gap -= delta;
                        s.tourists.push(Desc { queue: Queue::Lout, pos: Pos::At(-s.gap), served });
                    }
                }
                outcomes.push((s, rat(1, 2)));
            }
        }
        for (s, _) in &mut outcomes {
            s.canonicalize()?;
            s.end_of_step(conv);
        }
        Ok(outcomes)
    }

    fn canonicalize(&mut self) -> Result<(), RabinError> {
        if self.gap.abs() > 3 {
            return Err(RabinError::Invariant(format!("board gap {} exceeds 3", self.gap)));
        }
        let (lo, hi) = (0.min(-self.gap), 0.max(-self.gap));
        for t in &mut self.tourists {
            if let Pos::At(o) = t.pos {
                if o > hi {
                    return Err(RabinError::Invariant(format!("notepad above both boards (offset {o}, gap {})", self.gap)));
                }
                if o < lo || matches!(t.queue, Queue::Lin | Queue::Rin) {
                    t.pos = Pos::Low;
                }
            }
        }
        self.tourists.sort_unstable();
        Ok(())
    }

    fn end_of_step(&mut self, conv: Convention) {
        if conv == Convention::Step {
            return;
        }
        let waiting = |d: &&mut Desc| matches!(d.queue, Queue::Lout | Queue::Rout);
        if self.tourists.iter_mut().filter(waiting).all(|d| d.served) {
            self.tourists.iter_mut().for_each(|d| d.served = false);
            self.tourists.sort_unstable();
            self.fresh = true;
        } else {
            self.fresh = false;
        }
    }
}

impl fmt::Display for AbstractState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot() {
            Some(k) => write!(f, "slot={k}")?,
            None => f.write_str("slot=-")?,
        }
        write!(f, " L-R={} L{}", self.gap, if self.l_odd { "odd" } else { "even" })?;
        for d in &self.tourists {
            let q = match d.queue {
                Queue::Lout => "lout",
                Queue::Rout => "rout",
                Queue::Lin => "lin",
                Queue::Rin => "rin",
            };
            let p: String = match d.pos {
                Pos::Low => "low".into(),
                Pos::At(o) => format!("L{o:+}"),
            };
            write!(f, " {q}:{p}{}", if d.served { "*" } else { "" })?;
        }
        if !self.fresh {
            f.write_str(" (mid-round)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AbstractModel {
    pub mdp: Mdp,
    pub states: Vec<AbstractState>,
    pub depth: Vec<u32>,
    pub convention: Convention,
}

impl AbstractModel {
    pub fn target(&self) -> Vec<bool> {
        self.states.iter().map(AbstractState::is_target).collect()
    }
}

/// The finite slot abstraction of the algorithm, explored from the initial
/// splits of `init`.
pub fn abstract_mdp(init: Init, conv: Convention, limit: usize) -> Result<AbstractModel, RabinError> {
    let starts: Vec<_> = init.splits().into_iter().map(|(a, b)| AbstractState::initial(a, b)).collect();
    let ex = explore(
        starts,
        limit,
        |s: &AbstractState| {
            let moves = s.moves(conv);
            if moves.is_empty() {
                return Ok(alloc::vec![alloc::vec![(s.clone(), Rational::one())]]);
            }
            moves.into_iter().map(|(side, d)| s.step(side, d, conv)).collect()
        },
        RabinError::StateLimit,
    )?;
    let initial: Vec<usize> = (0..init.splits().len()).collect();
    let target = ex.states.iter().map(AbstractState::is_target).collect();
    let fresh = ex.states.iter().map(|s| s.fresh).collect();
    let names = ex.states.iter().map(|s| format!("{s}")).collect();
    let mdp = Mdp::new(ex.actions, initial)?.with_label("target", target)?.with_label("round_start", fresh)?.with_names(names);
    Ok(AbstractModel { mdp, states: ex.states, depth: ex.depth, convention: conv })
}

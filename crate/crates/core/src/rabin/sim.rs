use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::concrete::{Convention, Move, RabinState, Side};

/// Resolves the demonic choices of the concrete algorithm during simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    /// Uniform over enabled moves.
    UniformRandom,
    /// Alternates places when possible, cycling through the distinct
    /// tourists of a queue.
    RoundRobin,
    /// Greedy delay: prefers tourists that will copy the board, then those
    /// that flip the coin, and lets someone decide only when forced.
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// Every visited state, the initial one first.
    pub states: Vec<RabinState>,
    pub moves: Vec<Move>,
    pub terminated: bool,
}

impl Trace {
    pub fn steps(&self) -> usize {
        self.moves.len()
    }
}

fn rank(s: &RabinState, mv: &Move) -> u8 {
    let (decided, board) = match mv.side {
        Side::Left => (&s.lin, s.board_l),
        Side::Right => (&s.rin, s.board_r),
    };
    if !decided.is_empty() || mv.tourist.pad > board {
        2
    } else if mv.tourist.pad == board {
        1
    } else {
        0
    }
}

/// Runs the concrete algorithm from `A` tourists on the left and `B` on the
/// right until termination or `max_steps` iterations. `seed` drives both the
/// coin and the random scheduler.
pub fn simulate(a: u32, b: u32, sched: Scheduler, seed: u64, max_steps: usize, conv: Convention) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = RabinState::initial(a, b);
    let mut trace = Trace { states: alloc::vec![state.clone()], moves: Vec::new(), terminated: false };
    let mut last_side = Side::Right;
    let mut turn = 0usize;
    while trace.moves.len() < max_steps {
        let moves = state.moves(conv);
        if moves.is_empty() {
            trace.terminated = state.is_terminated();
            return trace;
        }
        let mv = match sched {
            Scheduler::UniformRandom => moves[rng.gen_range(0..moves.len())],
            Scheduler::RoundRobin => {
                let want = if last_side == Side::Left { Side::Right } else { Side::Left };
                let side: Vec<&Move> = moves.iter().filter(|m| m.side == want).collect();
                let pool: Vec<&Move> = if side.is_empty() { moves.iter().collect() } else { side };
                turn += 1;
                *pool[turn % pool.len()]
            }
            Scheduler::Adversarial => *moves.iter().min_by_key(|m| rank(&state, m)).expect("non-empty"),
        };
        last_side = mv.side;
        let mut outcomes = state.step(mv, conv);
        let pick = if outcomes.len() == 1 { 0 } else { usize::from(rng.gen_bool(0.5)) };
        state = outcomes.swap_remove(pick).0;
        trace.moves.push(mv);
        trace.states.push(state.clone());
    }
    trace.terminated = state.is_terminated();
    trace
}

/// State indices of a trace that break the expected invariants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantReport {
    /// `|L - R| > 2`.
    pub gap_over_2: Vec<usize>,
    /// `|L - R| > 3`.
    pub gap_over_3: Vec<usize>,
    /// The tourist count differs from the initial one.
    pub count_changed: Vec<usize>,
}

pub fn check_invariants(trace: &Trace) -> InvariantReport {
    let n = trace.states.first().map_or(0, RabinState::tourists);
    let mut r = InvariantReport::default();
    for (i, s) in trace.states.iter().enumerate() {
        let gap = s.gap().abs();
        if gap > 2 {
            r.gap_over_2.push(i);
        }
        if gap > 3 {
            r.gap_over_3.push(i);
        }
        if s.tourists() != n {
            r.count_changed.push(i);
        }
    }
    r
}

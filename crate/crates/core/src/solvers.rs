//! Constructive algorithms, exhaustive existence oracles, and a deviation
//! dynamics engine with cycle detection.
//!
//! All improvement loops use the deterministic scheduler of
//! [`find_deviation`]: lowest mover id, then its most preferred target.

use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph_matching::{max_matching, Graph};
use crate::matching::{visit_matchings, Matching};
use crate::model::{has_no_unacceptability, raise_preferences, Game, GameKind, PlayerId, Side};
use crate::stability::{
    check, find_deviation, is_blocking_pair, is_stable, is_valid_deviation, Concept,
    DeviationWitness, Target,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    /// A guarantee that should hold by construction was violated.
    #[error("internal invariant violated: {0}")]
    Bug(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("game has {n} players, above the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverReport {
    pub matching: Matching,
    pub deviation_count: usize,
    pub elapsed: Duration,
}

/// Applies `concept` deviations from all-singletons until none is left,
/// failing loudly if more than `bound` are needed.
fn improve_from_singletons(
    game: &Game,
    concept: Concept,
    bound: usize,
) -> Result<SolverReport, SolverError> {
    let start = Instant::now();
    let mut matching = Matching::singletons(game.n());
    let mut count = 0;
    while let Some(w) = find_deviation(game, &matching, concept) {
        count += 1;
        if count > bound {
            return Err(SolverError::Bug(format!(
                "{concept} dynamics exceeded {bound} deviations"
            )));
        }
        matching = w.apply(&matching);
    }
    Ok(SolverReport {
        matching,
        deviation_count: count,
        elapsed: start.elapsed(),
    })
}

/// A matching that is both CIS and IR. Starting from singletons, every CIS
/// deviation strictly helps the mover and hurts nobody, so IR is preserved
/// and at most `n(n-1)` deviations happen.
pub fn compute_cis_ir(game: &Game) -> Result<SolverReport, SolverError> {
    let n = game.n();
    let report = improve_from_singletons(game, Concept::Cis, n * n.saturating_sub(1))?;
    if !is_stable(game, &report.matching, Concept::Ir) {
        return Err(SolverError::Bug("CIS dynamics left an IR violation".into()));
    }
    Ok(report)
}

/// A CNS matching, by CNS deviations from singletons. The output need not
/// be IR. Capped at `2n²` deviations.
pub fn compute_cns(game: &Game) -> Result<SolverReport, SolverError> {
    let n = game.n();
    improve_from_singletons(game, Concept::Cns, 2 * n * n)
}

/// Deferred acceptance on a marriage game with `proposers` proposing.
///
/// Ties are broken by lowest id. A partner is acceptable when weakly
/// preferred to being alone, so players tied with being alone are treated
/// as ranked just above it. The result is the proposer-optimal stable
/// matching of that strict instance.
pub fn gale_shapley(game: &Game, proposers: Side) -> Result<Matching, SolverError> {
    if !game.is_marriage() {
        return Err(SolverError::Precondition(
            "deferred acceptance needs a marriage game".into(),
        ));
    }
    let key = |who: PlayerId, other: PlayerId| (game.rank(who, other), other.get());
    let proposing = game.side_members(proposers);
    let mut lists: HashMap<PlayerId, Vec<PlayerId>> = HashMap::with_capacity(proposing.len());
    for &p in &proposing {
        let mut list: Vec<PlayerId> = game
            .potential_partners(p)
            .filter(|&r| game.acceptable(p, r))
            .collect();
        list.sort_by_key(|&r| key(p, r));
        lists.insert(p, list);
    }
    let mut next = vec![0usize; game.n()];
    let mut matching = Matching::singletons(game.n());
    let mut free: VecDeque<PlayerId> = proposing.iter().copied().collect();
    while let Some(p) = free.pop_front() {
        let list = &lists[&p];
        let Some(&r) = list.get(next[p.index()]) else {
            continue;
        };
        next[p.index()] += 1;
        if !game.acceptable(r, p) {
            free.push_back(p);
            continue;
        }
        if matching.is_single(r) {
            matching.pair(p, r);
        } else {
            let held = matching.partner(r);
            if key(r, p) < key(r, held) {
                matching.pair(p, r);
                free.push_back(held);
            } else {
                free.push_back(p);
            }
        }
    }
    Ok(matching)
}

/// An individually stable matching for a marriage game: raise the
/// preferences, then run women-proposing deferred acceptance. The output is
/// verified IS and IR against the original preferences.
pub fn compute_is_marriage(game: &Game) -> Result<Matching, SolverError> {
    let raised = raise_preferences(game);
    let matching = gale_shapley(&raised, Side::Woman)?;
    for concept in [Concept::Is, Concept::Ir] {
        if let Err(v) = check(game, &matching, concept) {
            return Err(SolverError::Bug(format!(
                "deferred acceptance on raised preferences is not {concept}: {v}"
            )));
        }
    }
    Ok(matching)
}

/// A Nash stable matching for a marriage game in which every
/// opposite-sex player is acceptable. Under such preferences an IS matching
/// is already NS.
pub fn compute_ns_marriage_complete(game: &Game) -> Result<Matching, SolverError> {
    if !game.is_marriage() || !has_no_unacceptability(game) {
        return Err(SolverError::Precondition(
            "needs a marriage game in which every opposite-sex player is acceptable".into(),
        ));
    }
    let matching = compute_is_marriage(game)?;
    if let Err(v) = check(game, &matching, Concept::Ns) {
        return Err(SolverError::Bug(format!("IS matching is not NS: {v}")));
    }
    Ok(matching)
}

/// Decides whether a roommate game with no unacceptability has a Nash
/// stable matching (equivalently an individually stable one), returning one
/// if so. Runs in O(n⁴).
///
/// For even `n` any perfect matching works. For odd `n`, some player `i` is
/// left alone and the rest must be perfectly matched so that nobody prefers
/// `i` to their partner; that is a perfect matching of the graph on
/// `N \ {i}` with an edge `{j, k}` whenever both weakly prefer each other to
/// `i`.
pub fn exists_ns_is_roommate_complete(game: &Game) -> Result<Option<Matching>, SolverError> {
    if game.kind() != GameKind::Roommate || !has_no_unacceptability(game) {
        return Err(SolverError::Precondition(
            "needs a roommate game in which every player is acceptable to everyone".into(),
        ));
    }
    let n = game.n();
    let found = if n.is_multiple_of(2) {
        let pairs: Vec<(PlayerId, PlayerId)> = (0..n / 2)
            .map(|k| (PlayerId::from_index(2 * k), PlayerId::from_index(2 * k + 1)))
            .collect();
        Some(Matching::from_pairs(n, &pairs).expect("disjoint pairs"))
    } else {
        game.players().find_map(|alone| perfect_without(game, alone))
    };
    if let Some(m) = &found {
        if let Err(v) = check(game, m, Concept::Ns) {
            return Err(SolverError::Bug(format!("constructed matching is not NS: {v}")));
        }
    }
    Ok(found)
}

fn perfect_without(game: &Game, alone: PlayerId) -> Option<Matching> {
    let others: Vec<PlayerId> = game.players().filter(|&p| p != alone).collect();
    let mut g = Graph::new(others.len());
    for (a, &j) in others.iter().enumerate() {
        for (b, &k) in others.iter().enumerate().skip(a + 1) {
            if game.weakly_prefers(j, k, alone) && game.weakly_prefers(k, j, alone) {
                g.add_edge(a, b).expect("fresh edge");
            }
        }
    }
    let m = max_matching(&g);
    (2 * m.len() == others.len()).then(|| {
        let pairs: Vec<(PlayerId, PlayerId)> =
            m.iter().map(|&(a, b)| (others[a], others[b])).collect();
        Matching::from_pairs(game.n(), &pairs).expect("matching edges are disjoint")
    })
}

/// Default player cap for [`brute_force`].
pub const BRUTE_FORCE_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceResult {
    /// First stable matching in enumeration order.
    pub first: Option<Matching>,
    /// Number of stable matchings.
    pub count: usize,
}

/// Checks every matching of the game against `concept`.
pub fn brute_force(game: &Game, concept: Concept, cap: usize) -> Result<BruteForceResult, SolverError> {
    if game.n() > cap {
        return Err(SolverError::CapExceeded { n: game.n(), cap });
    }
    let mut result = BruteForceResult {
        first: None,
        count: 0,
    };
    let _ = visit_matchings(game.n(), |m| {
        if is_stable(game, m, concept) {
            result.count += 1;
            if result.first.is_none() {
                result.first = Some(m.clone());
            }
        }
        ControlFlow::Continue(())
    });
    Ok(result)
}

/// Same answer as [`brute_force`] (same first matching, same count) without
/// a player cap: the enumeration is cut as soon as the players decided so
/// far already exhibit a violation that later decisions cannot remove.
/// With `count_all == false` the search stops at the first stable matching
/// and `count` is 0 or 1.
pub fn pruned_search(game: &Game, concept: Concept, count_all: bool) -> BruteForceResult {
    let n = game.n();
    let mut search = Pruned {
        game,
        concept,
        count_all,
        matching: Matching::singletons(n),
        assigned: vec![false; n],
        result: BruteForceResult {
            first: None,
            count: 0,
        },
    };
    if !search.stranded(0) {
        let _ = search.descend(0);
    }
    search.result
}

struct Pruned<'a> {
    game: &'a Game,
    concept: Concept,
    count_all: bool,
    matching: Matching,
    assigned: Vec<bool>,
    result: BruteForceResult,
}

impl Pruned<'_> {
    fn descend(&mut self, start: usize) -> ControlFlow<()> {
        let n = self.assigned.len();
        let Some(i) = (start..n).find(|&i| !self.assigned[i]) else {
            debug_assert!(is_stable(self.game, &self.matching, self.concept));
            self.result.count += 1;
            if self.result.first.is_none() {
                self.result.first = Some(self.matching.clone());
            }
            return if self.count_all {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            };
        };
        let pi = PlayerId::from_index(i);
        self.assigned[i] = true;
        for j in (i + 1)..n {
            if self.assigned[j] {
                continue;
            }
            let pj = PlayerId::from_index(j);
            self.assigned[j] = true;
            self.matching.pair(pi, pj);
            let flow = if self.frozen_violation(&[pi, pj]) || self.stranded(i + 1) {
                ControlFlow::Continue(())
            } else {
                self.descend(i + 1)
            };
            self.matching.unpair(pi);
            self.assigned[j] = false;
            if flow.is_break() {
                self.assigned[i] = false;
                return flow;
            }
        }
        let flow = if self.frozen_violation(&[pi]) || self.stranded(i + 1) {
            ControlFlow::Continue(())
        } else {
            self.descend(i + 1)
        };
        self.assigned[i] = false;
        flow
    }

    /// Some undecided player (index `from` or later) whose every remaining
    /// option, staying single or pairing with another undecided player,
    /// already produces a frozen violation.
    fn stranded(&mut self, from: usize) -> bool {
        let n = self.assigned.len();
        for w in from..n {
            if self.assigned[w] || self.has_option(w) {
                continue;
            }
            return true;
        }
        false
    }

    fn has_option(&mut self, w: usize) -> bool {
        let n = self.assigned.len();
        let pw = PlayerId::from_index(w);
        self.assigned[w] = true;
        let mut ok = !self.frozen_violation(&[pw]);
        for x in 0..n {
            if ok {
                break;
            }
            if self.assigned[x] {
                continue;
            }
            let px = PlayerId::from_index(x);
            self.assigned[x] = true;
            self.matching.pair(pw, px);
            ok = !self.frozen_violation(&[pw, px]);
            self.matching.unpair(pw);
            self.assigned[x] = false;
        }
        self.assigned[w] = false;
        ok
    }

    /// A violation among decided players involving one of `fresh`.
    fn frozen_violation(&self, fresh: &[PlayerId]) -> bool {
        let (game, m, concept) = (self.game, &self.matching, self.concept);
        let decided = || {
            (0..self.assigned.len())
                .filter(|&k| self.assigned[k])
                .map(PlayerId::from_index)
        };
        match concept {
            Concept::Core | Concept::StrictCore => {
                let strict = concept == Concept::StrictCore;
                fresh.iter().any(|&u| {
                    game.strictly_prefers(u, u, m.partner(u))
                        || decided().any(|v| is_blocking_pair(game, m, u, v, strict))
                })
            }
            _ => fresh.iter().any(|&u| {
                is_valid_deviation(game, m, u, Target::Alone, concept)
                    || (concept != Concept::Ir
                        && decided().filter(|&v| v != u).any(|v| {
                            (m.is_single(v) && is_valid_deviation(game, m, u, Target::Join(v), concept))
                                || (m.is_single(u)
                                    && is_valid_deviation(game, m, v, Target::Join(u), concept))
                        }))
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DynamicsOutcome {
    Stable,
    /// The matching reached after the last step already occurred as the
    /// `first_repeat`-th matching of the trace (0 is the initial matching).
    CycleDetected { first_repeat: usize },
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsTrace {
    /// Each matching together with the deviation applied to it.
    pub steps: Vec<(Matching, DeviationWitness)>,
    /// The matching after the last step.
    pub last: Matching,
    pub outcome: DynamicsOutcome,
}

impl DynamicsTrace {
    /// Replays the recorded witnesses from `initial` and checks every
    /// intermediate matching.
    pub fn replays_from(&self, initial: &Matching) -> bool {
        let mut current = initial.clone();
        for (before, w) in &self.steps {
            if *before != current {
                return false;
            }
            current = w.apply(&current);
        }
        current == self.last
    }

    /// Length of the detected cycle, if any.
    pub fn cycle_length(&self) -> Option<usize> {
        match self.outcome {
            DynamicsOutcome::CycleDetected { first_repeat } => Some(self.steps.len() - first_repeat),
            _ => None,
        }
    }
}

/// Follows the deterministic deviation of [`find_deviation`] from
/// `initial` until the matching is stable, a matching repeats, or
/// `max_steps` deviations have been applied.
pub fn run_dynamics(
    game: &Game,
    concept: Concept,
    initial: &Matching,
    max_steps: usize,
) -> DynamicsTrace {
    let mut seen: HashMap<Matching, usize> = HashMap::new();
    seen.insert(initial.clone(), 0);
    let mut steps = Vec::new();
    let mut current = initial.clone();
    let outcome = loop {
        let Some(w) = find_deviation(game, &current, concept) else {
            break DynamicsOutcome::Stable;
        };
        if steps.len() == max_steps {
            break DynamicsOutcome::StepLimit;
        }
        let next = w.apply(&current);
        steps.push((std::mem::replace(&mut current, next), w));
        if let Some(&first_repeat) = seen.get(&current) {
            break DynamicsOutcome::CycleDetected { first_repeat };
        }
        seen.insert(current.clone(), steps.len());
    };
    DynamicsTrace {
        steps,
        last: current,
        outcome,
    }
}

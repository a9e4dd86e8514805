//! Stability verifiers. Individual-based concepts (IR, NS, IS, CNS, CIS) are
//! checked by searching single-player moves; core and strict core by
//! searching blocking pairs. Every failure comes with a concrete witness.

use std::fmt;
use std::str::FromStr;

use crate::matching::Matching;
use crate::model::{Game, PlayerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Ir,
    Ns,
    Is,
    Cns,
    Cis,
    Core,
    StrictCore,
}

impl Concept {
    pub const ALL: [Concept; 7] = [
        Concept::Ir,
        Concept::Ns,
        Concept::Is,
        Concept::Cns,
        Concept::Cis,
        Concept::Core,
        Concept::StrictCore,
    ];

    /// Concepts defined by single-player moves.
    pub const MOVES: [Concept; 4] = [Concept::Ns, Concept::Is, Concept::Cns, Concept::Cis];

    pub fn name(self) -> &'static str {
        match self {
            Concept::Ir => "IR",
            Concept::Ns => "NS",
            Concept::Is => "IS",
            Concept::Cns => "CNS",
            Concept::Cis => "CIS",
            Concept::Core => "CORE",
            Concept::StrictCore => "STRICT_CORE",
        }
    }

    /// Whether every matching stable under this concept is individually
    /// rational.
    pub fn implies_ir(self) -> bool {
        matches!(
            self,
            Concept::Ir | Concept::Ns | Concept::Is | Concept::Core | Concept::StrictCore
        )
    }

    fn requires_target_consent(self) -> bool {
        matches!(self, Concept::Is | Concept::Cis)
    }

    fn requires_abandoned_consent(self) -> bool {
        matches!(self, Concept::Cns | Concept::Cis)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown stability concept `{0}`")]
pub struct UnknownConcept(pub String);

impl FromStr for Concept {
    type Err = UnknownConcept;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "ir" => Concept::Ir,
            "ns" => Concept::Ns,
            "is" => Concept::Is,
            "cns" => Concept::Cns,
            "cis" => Concept::Cis,
            "core" | "c" => Concept::Core,
            "strict-core" | "sc" => Concept::StrictCore,
            _ => return Err(UnknownConcept(s.to_owned())),
        })
    }
}

/// The coalition a deviating player moves to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Alone,
    /// Join the singleton `{j}`.
    Join(PlayerId),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Alone => f.write_str("alone"),
            Target::Join(p) => write!(f, "{p}"),
        }
    }
}

/// A profitable single-player move certifying instability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeviationWitness {
    pub mover: PlayerId,
    pub target: Target,
    pub concept: Concept,
}

impl DeviationWitness {
    /// The matching after the move.
    pub fn apply(&self, matching: &Matching) -> Matching {
        let mut next = matching.clone();
        match self.target {
            Target::Alone => next.unpair(self.mover),
            Target::Join(j) => next.pair(self.mover, j),
        }
        next
    }

    /// The partner the mover ends up with (itself when alone).
    pub fn new_partner(&self) -> PlayerId {
        match self.target {
            Target::Alone => self.mover,
            Target::Join(j) => j,
        }
    }
}

impl fmt::Display for DeviationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DEVIATION mover={} target={} concept={}",
            self.mover, self.target, self.concept
        )
    }
}

/// A blocking coalition of size one or two for core or strict core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairBlockWitness {
    pub first: PlayerId,
    /// `None` when `first` alone blocks (an individual rationality failure).
    pub second: Option<PlayerId>,
    pub concept: Concept,
}

impl fmt::Display for PairBlockWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BLOCK i={} j=", self.first)?;
        match self.second {
            Some(j) => write!(f, "{j}")?,
            None => f.write_str("alone")?,
        }
        write!(f, " concept={}", self.concept)
    }
}

/// Why a matching fails a concept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    Deviation(DeviationWitness),
    Block(PairBlockWitness),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Deviation(w) => w.fmt(f),
            Violation::Block(w) => w.fmt(f),
        }
    }
}

/// Every player weakly prefers its partner to being alone.
pub fn is_individually_rational(game: &Game, matching: &Matching) -> bool {
    ir_violation(game, matching).is_none()
}

fn ir_violation(game: &Game, matching: &Matching) -> Option<PlayerId> {
    game.players()
        .find(|&i| game.strictly_prefers(i, i, matching.partner(i)))
}

/// Whether `mover` moving to `target` is a profitable deviation under
/// `concept`, including the concept's consent conditions.
pub fn is_valid_deviation(
    game: &Game,
    matching: &Matching,
    mover: PlayerId,
    target: Target,
    concept: Concept,
) -> bool {
    let current = matching.partner(mover);
    let next = match target {
        Target::Alone => {
            if current == mover {
                return false;
            }
            mover
        }
        Target::Join(j) => {
            if j == mover || !matching.is_single(j) {
                return false;
            }
            j
        }
    };
    if concept == Concept::Ir && target != Target::Alone {
        return false;
    }
    if !game.strictly_prefers(mover, next, current) {
        return false;
    }
    if concept.requires_target_consent() {
        if let Target::Join(j) = target {
            if !game.acceptable(j, mover) {
                return false;
            }
        }
    }
    if concept.requires_abandoned_consent()
        && current != mover
        && game.strictly_prefers(current, mover, current)
    {
        return false;
    }
    true
}

/// First profitable move under `concept` in scheduler order: smallest mover
/// id, then the mover's most preferred target, ties by smallest target id
/// with being alone after every id of its tier. Joining an existing pair is
/// never considered since coalitions of three are unacceptable.
///
/// `concept` must be one of IR, NS, IS, CNS, CIS; for IR only moves to
/// being alone count.
///
/// # Panics
///
/// On `Core` or `StrictCore`, which are pair-based; see [`find_pair_block`].
pub fn find_deviation(
    game: &Game,
    matching: &Matching,
    concept: Concept,
) -> Option<DeviationWitness> {
    assert!(
        !matches!(concept, Concept::Core | Concept::StrictCore),
        "{concept} is not defined by single-player moves"
    );
    let singles: Vec<PlayerId> = matching.singles().collect();
    for mover in game.players() {
        let current = matching.partner(mover);
        let current_rank = game.rank(mover, current);
        let mut best: Option<(u32, usize, Target)> = None;
        let mut consider = |target: Target| {
            let partner = match target {
                Target::Alone => mover,
                Target::Join(j) => j,
            };
            let rank = game.rank(mover, partner);
            if rank >= current_rank {
                return;
            }
            let order = match target {
                Target::Alone => usize::MAX,
                Target::Join(j) => j.get(),
            };
            if best.is_some_and(|(r, o, _)| (r, o) <= (rank, order)) {
                return;
            }
            if is_valid_deviation(game, matching, mover, target, concept) {
                best = Some((rank, order, target));
            }
        };
        if current != mover {
            consider(Target::Alone);
        }
        if concept != Concept::Ir {
            for &j in singles.iter().filter(|&&j| j != mover) {
                consider(Target::Join(j));
            }
        }
        if let Some((_, _, target)) = best {
            return Some(DeviationWitness {
                mover,
                target,
                concept,
            });
        }
    }
    None
}

/// First blocking coalition of size one or two. Individual rationality
/// failures are reported first (lowest id), then pairs `(i, j)` with `i < j`
/// in lexicographic order. With `strict == false` both members of a pair
/// must strictly improve (core); with `strict == true` both weakly and one
/// strictly (strict core).
pub fn find_pair_block(game: &Game, matching: &Matching, strict: bool) -> Option<PairBlockWitness> {
    let concept = if strict {
        Concept::StrictCore
    } else {
        Concept::Core
    };
    if let Some(i) = ir_violation(game, matching) {
        return Some(PairBlockWitness {
            first: i,
            second: None,
            concept,
        });
    }
    for i in game.players() {
        for j in game.players().filter(|&j| j > i) {
            if is_blocking_pair(game, matching, i, j, strict) {
                return Some(PairBlockWitness {
                    first: i,
                    second: Some(j),
                    concept,
                });
            }
        }
    }
    None
}

/// Whether `{i, j}` blocks: both strictly better off together (core), or
/// both weakly and one strictly (strict core). Partners never block.
pub fn is_blocking_pair(
    game: &Game,
    matching: &Matching,
    i: PlayerId,
    j: PlayerId,
    strict: bool,
) -> bool {
    use std::cmp::Ordering::{Greater, Less};
    if i == j || matching.partner(i) == j {
        return false;
    }
    let gain_i = game.compare(i, j, matching.partner(i));
    let gain_j = game.compare(j, i, matching.partner(j));
    if strict {
        gain_i != Less && gain_j != Less && (gain_i == Greater || gain_j == Greater)
    } else {
        gain_i == Greater && gain_j == Greater
    }
}

/// `Ok(())` when `matching` is stable under `concept`, otherwise the first
/// witness in scheduler order.
pub fn check(game: &Game, matching: &Matching, concept: Concept) -> Result<(), Violation> {
    assert_eq!(
        game.n(),
        matching.n(),
        "matching size does not match the game"
    );
    match concept {
        Concept::Core => find_pair_block(game, matching, false).map_or(Ok(()), |w| Err(Violation::Block(w))),
        Concept::StrictCore => {
            find_pair_block(game, matching, true).map_or(Ok(()), |w| Err(Violation::Block(w)))
        }
        _ => find_deviation(game, matching, concept).map_or(Ok(()), |w| Err(Violation::Deviation(w))),
    }
}

pub fn is_stable(game: &Game, matching: &Matching, concept: Concept) -> bool {
    check(game, matching, concept).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_instance;

    fn pid(i: usize) -> PlayerId {
        PlayerId::new(i)
    }

    fn cyclic3() -> Game {
        parse_instance("roommate 3\n1: 2 3\n2: 3 1\n3: 1 2\n").unwrap()
    }

    #[test]
    fn singletons_are_individually_rational() {
        let g = cyclic3();
        assert!(is_individually_rational(&g, &Matching::singletons(3)));
    }

    #[test]
    fn unacceptable_partner_breaks_ir() {
        let g = parse_instance("roommate 2\n1: 2\n2:\n").unwrap();
        let m = Matching::from_pairs(2, &[(pid(1), pid(2))]).unwrap();
        assert!(!is_individually_rational(&g, &m));
        assert_eq!(
            find_deviation(&g, &m, Concept::Ir),
            Some(DeviationWitness {
                mover: pid(2),
                target: Target::Alone,
                concept: Concept::Ir
            })
        );
    }

    #[test]
    fn same_sex_pairs_are_never_ir() {
        let g = parse_instance("marriage 2 1\n1: 3\n2: 3\n3: 1 2\n").unwrap();
        let m = Matching::from_pairs(3, &[(pid(1), pid(2))]).unwrap();
        assert!(!is_individually_rational(&g, &m));
    }

    #[test]
    fn cyclic_game_witnesses() {
        let g = cyclic3();
        let m = Matching::from_pairs(3, &[(pid(1), pid(2))]).unwrap();
        let expect = |concept| DeviationWitness {
            mover: pid(2),
            target: Target::Join(pid(3)),
            concept,
        };
        assert_eq!(find_deviation(&g, &m, Concept::Ns), Some(expect(Concept::Ns)));
        assert_eq!(find_deviation(&g, &m, Concept::Is), Some(expect(Concept::Is)));
        // player 1 would be left worse off
        assert_eq!(find_deviation(&g, &m, Concept::Cns), None);
        assert_eq!(find_deviation(&g, &m, Concept::Cis), None);
        assert_eq!(
            expect(Concept::Ns).to_string(),
            "DEVIATION mover=2 target=3 concept=NS"
        );
    }

    #[test]
    fn mutual_top_choices_are_stable_everywhere() {
        let g = parse_instance("roommate 2\n1: 2\n2: 1\n").unwrap();
        let m = Matching::from_pairs(2, &[(pid(1), pid(2))]).unwrap();
        for c in Concept::ALL {
            assert!(is_stable(&g, &m, c), "{c}");
        }
    }

    #[test]
    fn contractual_nash_needs_abandoned_consent() {
        let g = parse_instance("roommate 2\n1: 2\n2:\n").unwrap();
        let m = Matching::from_pairs(2, &[(pid(1), pid(2))]).unwrap();
        assert_eq!(find_deviation(&g, &m, Concept::Cns), None);
        assert!(!is_stable(&g, &m, Concept::Ir));
        assert!(!is_stable(&g, &m, Concept::Ns));
    }

    #[test]
    fn witness_prefers_most_preferred_target() {
        // 1 likes 3 > (2 4) > self, everyone else single
        let g = parse_instance("roommate 4\n1: 3 (2 4)\n2: 1\n3: 1\n4: 1\n").unwrap();
        let m = Matching::singletons(4);
        let w = find_deviation(&g, &m, Concept::Ns).unwrap();
        assert_eq!(w.target, Target::Join(pid(3)));
        let g = parse_instance("roommate 4\n1: (4 2) 3\n2: 1\n3: 1\n4: 1\n").unwrap();
        let w = find_deviation(&g, &m, Concept::Ns).unwrap();
        assert_eq!(w.target, Target::Join(pid(2)));
    }

    #[test]
    fn alone_loses_ties_to_listed_players() {
        let g = parse_instance("roommate 3\n1: 3 (2 self)\n2: 1\n3: 1\n").unwrap();
        let g2 = parse_instance("roommate 4\n1: (2 self) 4\n2: 1\n3: 1\n4: 1\n").unwrap();
        let m = Matching::from_pairs(4, &[(pid(1), pid(4))]).unwrap();
        let w = find_deviation(&g2, &m, Concept::Ns).unwrap();
        assert_eq!(w.target, Target::Join(pid(2)));
        assert!(is_stable(&g, &Matching::from_pairs(3, &[(pid(1), pid(3))]).unwrap(), Concept::Ns));
    }

    #[test]
    fn core_blocks() {
        let g = parse_instance("roommate 2\n1: 2\n2: 1\n").unwrap();
        let m = Matching::from_pairs(2, &[(pid(1), pid(2))]).unwrap();
        assert_eq!(find_pair_block(&g, &m, false), None);
        assert_eq!(find_pair_block(&g, &m, true), None);

        let g = parse_instance("marriage 1 1\n1: 2\n2: 1\n").unwrap();
        let w = find_pair_block(&g, &Matching::singletons(2), false).unwrap();
        assert_eq!((w.first, w.second), (pid(1), Some(pid(2))));
    }

    #[test]
    fn strict_core_block_through_indifference() {
        // m1=1, m2=2, w=3, w'=4; w indifferent between m1 and m2
        let g = parse_instance("marriage 2 2\n1: 3\n2: 3\n3: (1 2)\n4:\n").unwrap();
        let m = Matching::from_pairs(4, &[(pid(1), pid(3))]).unwrap();
        assert_eq!(find_pair_block(&g, &m, false), None);
        let w = find_pair_block(&g, &m, true).unwrap();
        assert_eq!((w.first, w.second), (pid(2), Some(pid(3))));
        assert_eq!(w.to_string(), "BLOCK i=2 j=3 concept=STRICT_CORE");
    }

    #[test]
    fn pair_block_reports_ir_failures() {
        let g = parse_instance("roommate 2\n1: 2\n2:\n").unwrap();
        let m = Matching::from_pairs(2, &[(pid(1), pid(2))]).unwrap();
        let w = find_pair_block(&g, &m, false).unwrap();
        assert_eq!((w.first, w.second), (pid(2), None));
    }

    #[test]
    fn concept_names_parse() {
        for c in Concept::ALL {
            assert_eq!(c.name().parse::<Concept>().unwrap(), c);
        }
        assert_eq!("strict-core".parse::<Concept>().unwrap(), Concept::StrictCore);
        assert!("foo".parse::<Concept>().is_err());
    }
}

//! Matchings as self-inverse partner maps, their text format, and exhaustive
//! enumeration.
//!
//! Text format: one line per cell, `i j` for a pair and `i -` for a
//! singleton, `#` starts a comment.

use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::model::PlayerId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: player id {id} is out of range 1..={n}")]
    DanglingId { line: usize, id: usize, n: usize },
    #[error("line {line}: player {player} appears more than once")]
    RepeatedPlayer { line: usize, player: usize },
    #[error("line {line}: player {player} would be matched to both {first} and {second}")]
    NonInvolution {
        line: usize,
        player: usize,
        first: String,
        second: String,
    },
    #[error("player {player} does not appear in the matching")]
    MissingPlayer { player: usize },
    #[error("matching covers {found} players but the game has {expected}")]
    SizeMismatch { expected: usize, found: usize },
}

/// A partition of players `1..=n` into pairs and singletons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    // partner[i] is the zero-based index of i's partner; i itself when single.
    partner: Vec<u32>,
}

impl Matching {
    /// Everyone alone.
    pub fn singletons(n: usize) -> Self {
        Matching {
            partner: (0..n as u32).collect(),
        }
    }

    /// Builds a matching from disjoint pairs; unmentioned players are single.
    pub fn from_pairs(n: usize, pairs: &[(PlayerId, PlayerId)]) -> Result<Self, MatchingError> {
        let mut m = Matching::singletons(n);
        for &(a, b) in pairs {
            for p in [a, b] {
                if p.get() > n {
                    return Err(MatchingError::DanglingId {
                        line: 0,
                        id: p.get(),
                        n,
                    });
                }
            }
            if a == b || !m.is_single(a) || !m.is_single(b) {
                let busy = if m.is_single(a) { b } else { a };
                return Err(MatchingError::RepeatedPlayer {
                    line: 0,
                    player: busy.get(),
                });
            }
            m.pair(a, b);
        }
        Ok(m)
    }

    /// Builds a matching from a zero-based partner table.
    pub fn from_partner_indices(partner: Vec<usize>) -> Result<Self, MatchingError> {
        let n = partner.len();
        for (i, &p) in partner.iter().enumerate() {
            if p >= n || partner[p] != i {
                return Err(MatchingError::NonInvolution {
                    line: 0,
                    player: i + 1,
                    first: (p + 1).to_string(),
                    second: partner.get(p).map_or("?".into(), |q| (q + 1).to_string()),
                });
            }
        }
        Ok(Matching {
            partner: partner.into_iter().map(|p| p as u32).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.partner.len()
    }

    /// The partner of `p`, or `p` itself when single.
    pub fn partner(&self, p: PlayerId) -> PlayerId {
        PlayerId::from_index(self.partner[p.index()] as usize)
    }

    pub fn is_single(&self, p: PlayerId) -> bool {
        self.partner[p.index()] as usize == p.index()
    }

    /// Pairs `(a, b)` with `a < b`, ordered by `a`.
    pub fn pairs(&self) -> impl Iterator<Item = (PlayerId, PlayerId)> + '_ {
        self.partner.iter().enumerate().filter(|&(i, &p)| i < p as usize).map(|(i, &p)| (PlayerId::from_index(i), PlayerId::from_index(p as usize)))
    }

    pub fn singles(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i == p as usize)
            .map(|(i, _)| PlayerId::from_index(i))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs().count()
    }

    /// Detaches `p` from its partner, if any.
    pub fn unpair(&mut self, p: PlayerId) {
        let q = self.partner[p.index()] as usize;
        self.partner[q] = q as u32;
        self.partner[p.index()] = p.index() as u32;
    }

    /// Pairs `a` with `b`, first detaching both from their current partners.
    pub fn pair(&mut self, a: PlayerId, b: PlayerId) {
        assert_ne!(a, b, "cannot pair a player with itself");
        self.unpair(a);
        self.unpair(b);
        self.partner[a.index()] = b.index() as u32;
        self.partner[b.index()] = a.index() as u32;
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &p) in self.partner.iter().enumerate() {
            let p = p as usize;
            if p == i {
                writeln!(f, "{} -", i + 1)?;
            } else if i < p {
                writeln!(f, "{} {}", i + 1, p + 1)?;
            }
        }
        Ok(())
    }
}

/// Parses the matching file format for an `n`-player game. Every player must
/// appear exactly once.
pub fn parse_matching(text: &str, n: usize) -> Result<Matching, MatchingError> {
    // Zero-based partner per player, filled as lines are read.
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let show = |p: usize, of: usize| {
        if p == of {
            "nobody".to_owned()
        } else {
            (p + 1).to_string()
        }
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(MatchingError::Syntax {
                line,
                message: format!("expected `i j` or `i -`, found {} fields", fields.len()),
            });
        }
        let parse_id = |s: &str| -> Result<usize, MatchingError> {
            let id: usize = s.parse().map_err(|_| MatchingError::Syntax {
                line,
                message: format!("expected player id, found `{s}`"),
            })?;
            if id == 0 || id > n {
                return Err(MatchingError::DanglingId { line, id, n });
            }
            Ok(id - 1)
        };
        let a = parse_id(fields[0])?;
        let b = if fields[1] == "-" { a } else { parse_id(fields[1])? };
        if a == b && fields[1] != "-" {
            return Err(MatchingError::Syntax {
                line,
                message: format!("player {} paired with itself; use `{} -`", a + 1, a + 1),
            });
        }
        for (x, y) in [(a, b), (b, a)] {
            match partner[x] {
                None => {}
                Some(prev) if prev == y => {
                    return Err(MatchingError::RepeatedPlayer { line, player: x + 1 })
                }
                Some(prev) => {
                    return Err(MatchingError::NonInvolution {
                        line,
                        player: x + 1,
                        first: show(prev, x),
                        second: show(y, x),
                    })
                }
            }
        }
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    let partner = partner
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or(MatchingError::MissingPlayer { player: i + 1 }))
        .collect::<Result<Vec<_>, _>>()?;
    Matching::from_partner_indices(partner)
}

pub fn serialize_matching(m: &Matching) -> String {
    m.to_string()
}

/// Calls `visit` on every matching of `n` players, stopping early on
/// `Break`.
///
/// Order: the smallest unassigned player is paired with each larger
/// unassigned candidate in increasing order, and only then left single. The
/// first matching visited pairs `1-2, 3-4, ...`; the last is all singletons.
pub fn visit_matchings<F>(n: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&Matching) -> ControlFlow<()>,
{
    let mut m = Matching::singletons(n);
    let mut assigned = vec![false; n];
    visit_from(0, &mut m, &mut assigned, &mut visit)
}

fn visit_from<F>(
    start: usize,
    m: &mut Matching,
    assigned: &mut [bool],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Matching) -> ControlFlow<()>,
{
    let Some(i) = (start..assigned.len()).find(|&i| !assigned[i]) else {
        return visit(m);
    };
    assigned[i] = true;
    for j in (i + 1)..assigned.len() {
        if assigned[j] {
            continue;
        }
        assigned[j] = true;
        m.partner[i] = j as u32;
        m.partner[j] = i as u32;
        let flow = visit_from(i + 1, m, assigned, visit);
        m.partner[i] = i as u32;
        m.partner[j] = j as u32;
        assigned[j] = false;
        flow?;
    }
    let flow = visit_from(i + 1, m, assigned, visit);
    assigned[i] = false;
    flow
}

/// Every matching of `n` players, in [`visit_matchings`] order.
pub fn enumerate_matchings(n: usize) -> Vec<Matching> {
    let mut out = Vec::new();
    let _ = visit_matchings(n, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

//! Players, weak preference lists with ties and unacceptability, and
//! roommate/marriage games.
//!
//! A [`PreferenceList`] is a sequence of tie tiers, most preferred first, plus
//! the position of the owner's own singleton ("being alone"). Players in tiers
//! strictly above that position are liked, players tied with it are
//! acceptable but not liked, and everything below it is unacceptable. Players
//! that do not appear in a list at all share one implicit bottom tier.
//!
//! The textual instance format is
//!
//! ```text
//! # comment
//! roommate 3
//! 1: 2 3
//! 2: (3 self) 1
//! 3: 1 2
//! ```
//!
//! or `marriage <m> <w>` where men are `1..=m` and women `m+1..=m+w`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense 1-based player identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId(u32);

impl PlayerId {
    /// Panics if `id == 0`.
    pub fn new(id: usize) -> Self {
        assert!(id >= 1, "player ids are 1-based");
        PlayerId(u32::try_from(id).expect("player id overflows u32"))
    }

    pub fn from_index(index: usize) -> Self {
        PlayerId::new(index + 1)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Zero-based position of this player in per-player tables.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where the owner's own singleton sits relative to the listed tiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SelfPosition {
    /// Indifferent between being alone and the players of tier `i`.
    Tied(usize),
    /// A strict tier of its own, immediately above tier `i`
    /// (`i == tiers.len()` puts it below every listed player).
    Before(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: player {entry} appears more than once in the list of player {owner}")]
    DuplicateEntry {
        line: usize,
        owner: usize,
        entry: usize,
    },
    #[error("line {line}: player {owner} lists itself; use the `self` token")]
    SelfReference { line: usize, owner: usize },
    #[error("line {line}: player id {id} is out of range 1..={n}")]
    OutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: player {owner} lists same-sex player {entry} in a marriage game")]
    SameSex {
        line: usize,
        owner: usize,
        entry: usize,
    },
    #[error("line {line}: preference list of player {owner} given twice")]
    DuplicateList { line: usize, owner: usize },
    #[error("no preference list given for player {owner}")]
    MissingList { owner: usize },
    #[error("invalid preference list for player {owner}: {message}")]
    InvalidList { owner: usize, message: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// One player's weak order over the other players and being alone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceList {
    owner: PlayerId,
    tiers: Vec<Vec<PlayerId>>,
    self_pos: SelfPosition,
}

impl PreferenceList {
    /// Builds a list; tiers are stored sorted by id so that equal relations
    /// compare equal.
    pub fn new(
        owner: PlayerId,
        mut tiers: Vec<Vec<PlayerId>>,
        self_pos: SelfPosition,
    ) -> Result<Self, ModelError> {
        let invalid = |message: &str| ModelError::InvalidList {
            owner: owner.get(),
            message: message.to_owned(),
        };
        let mut seen = HashSet::new();
        for tier in &mut tiers {
            if tier.is_empty() {
                return Err(invalid("empty tie tier"));
            }
            for &p in tier.iter() {
                if p == owner {
                    return Err(invalid("owner listed as an entry"));
                }
                if !seen.insert(p) {
                    return Err(invalid(&format!("player {p} listed twice")));
                }
            }
            tier.sort_unstable();
        }
        match self_pos {
            SelfPosition::Tied(i) if i >= tiers.len() => {
                return Err(invalid("self tied with a tier that does not exist"))
            }
            SelfPosition::Before(i) if i > tiers.len() => {
                return Err(invalid("self position past the end of the list"))
            }
            _ => {}
        }
        Ok(PreferenceList {
            owner,
            tiers,
            self_pos,
        })
    }

    /// A strict list with `self` below every entry.
    pub fn strict(owner: PlayerId, order: &[PlayerId]) -> Result<Self, ModelError> {
        let tiers = order.iter().map(|&p| vec![p]).collect::<Vec<_>>();
        let len = tiers.len();
        PreferenceList::new(owner, tiers, SelfPosition::Before(len))
    }

    pub fn owner(&self) -> PlayerId {
        self.owner
    }

    pub fn tiers(&self) -> &[Vec<PlayerId>] {
        &self.tiers
    }

    pub fn self_position(&self) -> SelfPosition {
        self.self_pos
    }

    pub fn is_strict(&self) -> bool {
        self.tiers.iter().all(|t| t.len() == 1) && matches!(self.self_pos, SelfPosition::Before(_))
    }

    /// Rank levels (lower is better) for every player of an `n`-player game,
    /// indexed by zero-based player index. The owner's entry is the level of
    /// being alone.
    fn levels(&self, n: usize) -> Vec<u32> {
        let mut levels = vec![u32::MAX; n];
        let mut level = 0u32;
        let own = self.owner.index();
        for (t, tier) in self.tiers.iter().enumerate() {
            if self.self_pos == SelfPosition::Before(t) {
                levels[own] = level;
                level += 1;
            }
            for p in tier {
                levels[p.index()] = level;
            }
            if self.self_pos == SelfPosition::Tied(t) {
                levels[own] = level;
            }
            level += 1;
        }
        if self.self_pos == SelfPosition::Before(self.tiers.len()) {
            levels[own] = level;
            level += 1;
        }
        for l in levels.iter_mut() {
            if *l == u32::MAX {
                *l = level;
            }
        }
        levels
    }
}

impl fmt::Display for PreferenceList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.owner)?;
        for (t, tier) in self.tiers.iter().enumerate() {
            if self.self_pos == SelfPosition::Before(t) {
                write!(f, " self")?;
            }
            let tied = self.self_pos == SelfPosition::Tied(t);
            if tier.len() == 1 && !tied {
                write!(f, " {}", tier[0])?;
            } else {
                write!(f, " (")?;
                for (k, p) in tier.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{p}")?;
                }
                if tied {
                    write!(f, " self")?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

/// Which side of a marriage game a player belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    Roommate,
    /// Men are players `1..=men`, women `men+1..=men+women`.
    Marriage { men: usize, women: usize },
}

/// A roommate or marriage game. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    kind: GameKind,
    lists: Vec<PreferenceList>,
    // ranks[i][j]: level of partner j for player i; ranks[i][i] is being alone.
    ranks: Vec<Vec<u32>>,
}

impl Game {
    /// Validates one list per player (in id order), ids in range and, for
    /// marriage games, that nobody lists a same-sex player.
    pub fn new(kind: GameKind, lists: Vec<PreferenceList>) -> Result<Self, ModelError> {
        let n = lists.len();
        if let GameKind::Marriage { men, women } = kind {
            if men + women != n {
                return Err(ModelError::InvalidParams(format!(
                    "marriage game with {men} men and {women} women needs {} lists, got {n}",
                    men + women
                )));
            }
        }
        for (i, list) in lists.iter().enumerate() {
            if list.owner.index() != i {
                return Err(ModelError::InvalidList {
                    owner: list.owner.get(),
                    message: format!("expected list of player {}", i + 1),
                });
            }
            for p in list.tiers.iter().flatten() {
                if p.get() > n {
                    return Err(ModelError::OutOfRange {
                        line: 0,
                        id: p.get(),
                        n,
                    });
                }
                if let GameKind::Marriage { men, .. } = kind {
                    if (p.get() <= men) == (list.owner.get() <= men) {
                        return Err(ModelError::SameSex {
                            line: 0,
                            owner: list.owner.get(),
                            entry: p.get(),
                        });
                    }
                }
            }
        }
        let ranks = lists.iter().map(|l| l.levels(n)).collect();
        Ok(Game { kind, lists, ranks })
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn is_marriage(&self) -> bool {
        matches!(self.kind, GameKind::Marriage { .. })
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> + '_ {
        (0..self.n()).map(PlayerId::from_index)
    }

    pub fn list(&self, p: PlayerId) -> &PreferenceList {
        &self.lists[p.index()]
    }

    pub fn lists(&self) -> &[PreferenceList] {
        &self.lists
    }

    pub fn side(&self, p: PlayerId) -> Option<Side> {
        match self.kind {
            GameKind::Roommate => None,
            GameKind::Marriage { men, .. } => Some(if p.get() <= men {
                Side::Man
            } else {
                Side::Woman
            }),
        }
    }

    /// Players on `side`, in id order. Empty for roommate games.
    pub fn side_members(&self, side: Side) -> Vec<PlayerId> {
        self.players()
            .filter(|&p| self.side(p) == Some(side))
            .collect()
    }

    /// Rank level of `partner` for `who` (lower is better). `partner == who`
    /// is the level of being alone.
    pub fn rank(&self, who: PlayerId, partner: PlayerId) -> u32 {
        self.ranks[who.index()][partner.index()]
    }

    /// `Greater` when `who` strictly prefers partner `a` to partner `b`.
    /// Passing `who` itself stands for being alone.
    pub fn compare(&self, who: PlayerId, a: PlayerId, b: PlayerId) -> Ordering {
        self.rank(who, b).cmp(&self.rank(who, a))
    }

    pub fn strictly_prefers(&self, who: PlayerId, a: PlayerId, b: PlayerId) -> bool {
        self.compare(who, a, b) == Ordering::Greater
    }

    pub fn weakly_prefers(&self, who: PlayerId, a: PlayerId, b: PlayerId) -> bool {
        self.compare(who, a, b) != Ordering::Less
    }

    /// `{who, other}` is at least as good as being alone for `who`.
    pub fn acceptable(&self, who: PlayerId, other: PlayerId) -> bool {
        self.weakly_prefers(who, other, who)
    }

    /// `who` strictly prefers `{who, other}` to being alone.
    pub fn likes(&self, who: PlayerId, other: PlayerId) -> bool {
        self.strictly_prefers(who, other, who)
    }

    /// Players `p` may legitimately be paired with: everyone else in a
    /// roommate game, the opposite side in a marriage game.
    pub fn potential_partners(&self, p: PlayerId) -> impl Iterator<Item = PlayerId> + '_ {
        let side = self.side(p);
        self.players()
            .filter(move |&q| q != p && (side.is_none() || self.side(q) != side))
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GameKind::Roommate => writeln!(f, "roommate {}", self.n())?,
            GameKind::Marriage { men, women } => writeln!(f, "marriage {men} {women}")?,
        }
        for list in &self.lists {
            writeln!(f, "{list}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Colon,
    Word(String),
}

fn tokenize(line: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut word = String::new();
    let mut word_col = 0;
    for (i, c) in line.chars().enumerate() {
        let col = i + 1;
        let punct = match c {
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            ':' => Some(Token::Colon),
            _ => None,
        };
        if c.is_whitespace() || punct.is_some() {
            if !word.is_empty() {
                out.push((word_col, Token::Word(std::mem::take(&mut word))));
            }
            if let Some(t) = punct {
                out.push((col, t));
            }
        } else {
            if word.is_empty() {
                word_col = col;
            }
            word.push(c);
        }
    }
    if !word.is_empty() {
        out.push((word_col, Token::Word(word)));
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_count(line: usize, tok: Option<&(usize, Token)>, what: &str) -> Result<usize, ModelError> {
    match tok {
        Some((col, Token::Word(w))) => w
            .parse::<usize>()
            .map_err(|_| syntax(line, *col, format!("expected {what}, found `{w}`"))),
        Some((col, _)) => Err(syntax(line, *col, format!("expected {what}"))),
        None => Err(syntax(line, 0, format!("missing {what}"))),
    }
}

/// Parses the textual instance format described in the module docs.
pub fn parse_instance(text: &str) -> Result<Game, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, "missing header line"))?;
    let htoks = tokenize(header);
    let kind = match htoks.first() {
        Some((_, Token::Word(w))) if w == "roommate" => {
            let n = parse_count(hline, htoks.get(1), "player count")?;
            if htoks.len() > 2 {
                return Err(syntax(hline, htoks[2].0, "trailing tokens after header"));
            }
            (GameKind::Roommate, n)
        }
        Some((_, Token::Word(w))) if w == "marriage" => {
            let men = parse_count(hline, htoks.get(1), "number of men")?;
            let women = parse_count(hline, htoks.get(2), "number of women")?;
            if htoks.len() > 3 {
                return Err(syntax(hline, htoks[3].0, "trailing tokens after header"));
            }
            (GameKind::Marriage { men, women }, men + women)
        }
        Some((col, _)) => {
            return Err(syntax(hline, *col, "expected `roommate <n>` or `marriage <m> <w>`"))
        }
        None => unreachable!("blank lines are filtered"),
    };
    let (kind, n) = kind;

    let mut slots: Vec<Option<PreferenceList>> = vec![None; n];
    for (lno, line) in lines {
        let toks = tokenize(line);
        let owner = parse_count(lno, toks.first(), "player id")?;
        if owner == 0 || owner > n {
            return Err(ModelError::OutOfRange {
                line: lno,
                id: owner,
                n,
            });
        }
        match toks.get(1) {
            Some((_, Token::Colon)) => {}
            Some((col, _)) => return Err(syntax(lno, *col, "expected `:` after player id")),
            None => return Err(syntax(lno, line.len() + 1, "expected `:` after player id")),
        }
        let list = parse_entries(lno, PlayerId::new(owner), &toks[2..], n, kind)?;
        if slots[owner - 1].is_some() {
            return Err(ModelError::DuplicateList { line: lno, owner });
        }
        slots[owner - 1] = Some(list);
    }
    let lists = slots
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or(ModelError::MissingList { owner: i + 1 }))
        .collect::<Result<Vec<_>, _>>()?;
    Game::new(kind, lists)
}

fn parse_entries(
    lno: usize,
    owner: PlayerId,
    toks: &[(usize, Token)],
    n: usize,
    kind: GameKind,
) -> Result<PreferenceList, ModelError> {
    let mut tiers: Vec<Vec<PlayerId>> = Vec::new();
    let mut self_pos: Option<SelfPosition> = None;
    let mut seen = HashSet::new();
    // Open group: its members and whether `self` is among them.
    let mut group: Option<(Vec<PlayerId>, bool)> = None;

    for (col, tok) in toks {
        let col = *col;
        match tok {
            Token::Open => {
                if group.is_some() {
                    return Err(syntax(lno, col, "nested tie groups are not allowed"));
                }
                group = Some((Vec::new(), false));
            }
            Token::Close => {
                let (members, has_self) = group
                    .take()
                    .ok_or_else(|| syntax(lno, col, "unmatched `)`"))?;
                if members.is_empty() {
                    if !has_self {
                        return Err(syntax(lno, col, "empty tie group"));
                    }
                    self_pos = Some(SelfPosition::Before(tiers.len()));
                } else {
                    if has_self {
                        self_pos = Some(SelfPosition::Tied(tiers.len()));
                    }
                    tiers.push(members);
                }
            }
            Token::Colon => return Err(syntax(lno, col, "unexpected `:`")),
            Token::Word(w) if w == "self" => {
                if self_pos.is_some() || group.as_ref().is_some_and(|g| g.1) {
                    return Err(syntax(lno, col, "`self` given more than once"));
                }
                match group.as_mut() {
                    Some(g) => g.1 = true,
                    None => self_pos = Some(SelfPosition::Before(tiers.len())),
                }
            }
            Token::Word(w) => {
                let id: usize = w
                    .parse()
                    .map_err(|_| syntax(lno, col, format!("expected player id or `self`, found `{w}`")))?;
                if id == 0 || id > n {
                    return Err(ModelError::OutOfRange { line: lno, id, n });
                }
                if id == owner.get() {
                    return Err(ModelError::SelfReference {
                        line: lno,
                        owner: owner.get(),
                    });
                }
                if let GameKind::Marriage { men, .. } = kind {
                    if (id <= men) == (owner.get() <= men) {
                        return Err(ModelError::SameSex {
                            line: lno,
                            owner: owner.get(),
                            entry: id,
                        });
                    }
                }
                if !seen.insert(id) {
                    return Err(ModelError::DuplicateEntry {
                        line: lno,
                        owner: owner.get(),
                        entry: id,
                    });
                }
                let p = PlayerId::new(id);
                match group.as_mut() {
                    Some(g) => g.0.push(p),
                    None => tiers.push(vec![p]),
                }
            }
        }
    }
    if group.is_some() {
        return Err(syntax(lno, 0, "unclosed `(`"));
    }
    let len = tiers.len();
    PreferenceList::new(owner, tiers, self_pos.unwrap_or(SelfPosition::Before(len)))
}

/// Returns the game in which every player tied with being alone is moved
/// strictly above it; every other comparison is unchanged.
pub fn raise_preferences(game: &Game) -> Game {
    let lists = game
        .lists
        .iter()
        .map(|l| {
            let self_pos = match l.self_pos {
                SelfPosition::Tied(i) => SelfPosition::Before(i + 1),
                before => before,
            };
            PreferenceList {
                self_pos,
                ..l.clone()
            }
        })
        .collect();
    Game::new(game.kind, lists).expect("raising preserves game validity")
}

/// Acceptability is symmetric between every pair of players.
pub fn is_mutual(game: &Game) -> bool {
    game.players().all(|i| {
        game.players()
            .filter(|&j| j > i)
            .all(|j| game.acceptable(i, j) == game.acceptable(j, i))
    })
}

/// Every potential partner (everyone else, or the opposite side) is
/// acceptable to every player.
pub fn has_no_unacceptability(game: &Game) -> bool {
    game.players()
        .all(|i| game.potential_partners(i).all(|j| game.acceptable(i, j)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameShape {
    Roommate { n: usize },
    Marriage { men: usize, women: usize },
}

/// Parameters for [`random_game`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub shape: GameShape,
    /// Probability that an entry is merged into the tier above it.
    pub tie_probability: f64,
    /// Probability that a potential partner is acceptable. Ignored when
    /// `complete` is set.
    pub acceptability_probability: f64,
    /// Draw acceptability per unordered pair so that it is symmetric.
    pub mutual: bool,
    /// Every potential partner is acceptable.
    pub complete: bool,
    pub seed: u64,
}

impl GenParams {
    pub fn roommate(n: usize, seed: u64) -> Self {
        GenParams {
            shape: GameShape::Roommate { n },
            tie_probability: 0.0,
            acceptability_probability: 1.0,
            mutual: false,
            complete: false,
            seed,
        }
    }

    pub fn marriage(men: usize, women: usize, seed: u64) -> Self {
        GenParams {
            shape: GameShape::Marriage { men, women },
            ..GenParams::roommate(0, seed)
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        for (name, p) in [
            ("tie probability", self.tie_probability),
            ("acceptability probability", self.acceptability_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ModelError::InvalidParams(format!(
                    "{name} {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Seeded random game. The same parameters always produce the same game.
pub fn random_game(params: &GenParams) -> Result<Game, ModelError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (kind, n) = match params.shape {
        GameShape::Roommate { n } => (GameKind::Roommate, n),
        GameShape::Marriage { men, women } => (GameKind::Marriage { men, women }, men + women),
    };
    let opposite = |i: usize, j: usize| match kind {
        GameKind::Roommate => i != j,
        GameKind::Marriage { men, .. } => (i < men) != (j < men),
    };

    let mut accepted: Vec<Vec<usize>> = vec![Vec::new(); n];
    if params.complete {
        for (i, acc) in accepted.iter_mut().enumerate() {
            acc.extend((0..n).filter(|&j| opposite(i, j)));
        }
    } else if params.mutual {
        for i in 0..n {
            for j in (i + 1)..n {
                if opposite(i, j) && rng.gen_bool(params.acceptability_probability) {
                    accepted[i].push(j);
                    accepted[j].push(i);
                }
            }
        }
    } else {
        for (i, acc) in accepted.iter_mut().enumerate() {
            for j in 0..n {
                if opposite(i, j) && rng.gen_bool(params.acceptability_probability) {
                    acc.push(j);
                }
            }
        }
    }

    let mut lists = Vec::with_capacity(n);
    for (i, mut acc) in accepted.into_iter().enumerate() {
        acc.shuffle(&mut rng);
        let mut tiers: Vec<Vec<PlayerId>> = Vec::new();
        for j in acc {
            let p = PlayerId::from_index(j);
            match tiers.last_mut() {
                Some(last) if rng.gen_bool(params.tie_probability) => last.push(p),
                _ => tiers.push(vec![p]),
            }
        }
        let self_pos = if !tiers.is_empty() && rng.gen_bool(params.tie_probability) {
            SelfPosition::Tied(tiers.len() - 1)
        } else {
            SelfPosition::Before(tiers.len())
        };
        lists.push(PreferenceList::new(PlayerId::from_index(i), tiers, self_pos)?);
    }
    Game::new(kind, lists)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pid(i: usize) -> PlayerId {
        PlayerId::new(i)
    }

    #[test]
    fn parses_smallest_instance() {
        let g = parse_instance("roommate 2\n1: 2\n2: 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.likes(pid(1), pid(2)));
        assert!(g.likes(pid(2), pid(1)));
    }

    #[test]
    fn rejects_duplicate_entry() {
        let err = parse_instance("roommate 3\n1: 2 2\n2: 1\n3: 1\n").unwrap_err();
        assert!(matches!(err, ModelError::DuplicateEntry { entry: 2, .. }), "{err}");
        let err = parse_instance("roommate 3\n1: (2 3) 2\n2: 1\n3: 1\n").unwrap_err();
        assert!(matches!(err, ModelError::DuplicateEntry { entry: 2, .. }));
    }

    #[test]
    fn rejects_same_sex_entry() {
        let err = parse_instance("marriage 2 1\n1: 2\n2: 3\n3: 1\n").unwrap_err();
        assert!(matches!(err, ModelError::SameSex { owner: 1, entry: 2, .. }));
    }

    #[test]
    fn rejects_malformed_lines() {
        for (text, expect_syntax) in [
            ("roommate 2\n1 2\n2: 1\n", true),
            ("roommate 2\n1: (2\n2: 1\n", true),
            ("roommate 2\n1: 2)\n2: 1\n", true),
            ("roommate 2\n1: ()\n2: 1\n", true),
            ("roommate 2\n1: self self\n2: 1\n", true),
            ("roommate 2\n1: x\n2: 1\n", true),
            ("bogus 2\n", true),
            ("", true),
        ] {
            let err = parse_instance(text).unwrap_err();
            assert_eq!(matches!(err, ModelError::Syntax { .. }), expect_syntax, "{text:?}: {err}");
        }
        assert!(matches!(
            parse_instance("roommate 2\n1: 1\n2: 1\n").unwrap_err(),
            ModelError::SelfReference { owner: 1, .. }
        ));
        assert!(matches!(
            parse_instance("roommate 2\n1: 3\n2: 1\n").unwrap_err(),
            ModelError::OutOfRange { id: 3, .. }
        ));
        assert!(matches!(
            parse_instance("roommate 2\n1: 2\n").unwrap_err(),
            ModelError::MissingList { owner: 2 }
        ));
        assert!(matches!(
            parse_instance("roommate 2\n1: 2\n1: 2\n2:\n").unwrap_err(),
            ModelError::DuplicateList { owner: 1, .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_instance("# header next\nroommate 2\n1: 2 foo\n2: 1\n").unwrap_err();
        assert_eq!(
            err,
            ModelError::Syntax {
                line: 3,
                column: 6,
                message: "expected player id or `self`, found `foo`".into()
            }
        );
    }

    #[test]
    fn self_token_positions() {
        let g = parse_instance("roommate 4\n1: 2 (3 self) 4\n2: self 1\n3:\n4: (self) 1\n").unwrap();
        let (p1, p2, p3, p4) = (pid(1), pid(2), pid(3), pid(4));
        assert!(g.likes(p1, p2));
        assert!(g.acceptable(p1, p3) && !g.likes(p1, p3));
        assert!(!g.acceptable(p1, p4));
        // ranked-but-unacceptable entries still beat unlisted players
        assert!(g.strictly_prefers(p2, p1, p3));
        assert!(!g.acceptable(p2, p1));
        assert!(!g.acceptable(p3, p1));
        assert_eq!(g.compare(p3, p1, p2), Ordering::Equal);
        assert_eq!(g.list(p4).self_position(), SelfPosition::Before(0));
    }

    #[test]
    fn display_round_trips() {
        let text = "roommate 4\n1: 2 (3 self) 4\n2: self 1\n3:\n4: (1 3)\n";
        let g = parse_instance(text).unwrap();
        assert_eq!(g.to_string(), text);
        assert_eq!(parse_instance(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn raise_moves_tied_players_above_self() {
        let g = parse_instance("roommate 6\n1: 2 (5 self) 3\n2:\n3:\n4:\n5:\n6:\n").unwrap();
        let r = raise_preferences(&g);
        assert_eq!(r.list(pid(1)).to_string(), "1: 2 5 self 3");
        assert!(r.likes(pid(1), pid(5)));
        assert!(!r.acceptable(pid(1), pid(3)));
    }

    #[test]
    fn raise_is_identity_on_strict_games() {
        let g = parse_instance("roommate 3\n1: 2 3\n2: 3 1\n3: 1 2\n").unwrap();
        assert_eq!(raise_preferences(&g), g);
    }

    #[test]
    fn mutuality() {
        assert!(is_mutual(&parse_instance("roommate 2\n1: 2\n2: 1\n").unwrap()));
        assert!(!is_mutual(&parse_instance("roommate 2\n1: 2\n2:\n").unwrap()));
        // tied with self counts as acceptable
        assert!(is_mutual(&parse_instance("roommate 2\n1: (2 self)\n2: 1\n").unwrap()));
    }

    #[test]
    fn completeness() {
        let cyclic = parse_instance("roommate 3\n1: 2 3\n2: 3 1\n3: 1 2\n").unwrap();
        assert!(has_no_unacceptability(&cyclic));
        assert!(is_mutual(&cyclic));
        let empty = parse_instance("roommate 2\n1:\n2: 1\n").unwrap();
        assert!(!has_no_unacceptability(&empty));
        let marriage = parse_instance("marriage 1 2\n1: 2 3\n2: 1\n3: (1 self)\n").unwrap();
        assert!(has_no_unacceptability(&marriage));
    }

    #[test]
    fn generator_is_deterministic() {
        let params = GenParams {
            tie_probability: 0.3,
            acceptability_probability: 0.6,
            ..GenParams::roommate(9, 42)
        };
        assert_eq!(random_game(&params).unwrap(), random_game(&params).unwrap());
        let other = GenParams { seed: 43, ..params };
        assert_ne!(random_game(&params).unwrap(), random_game(&other).unwrap());
    }

    #[test]
    fn generator_respects_flags() {
        for seed in 0..200 {
            let mutual = GenParams {
                tie_probability: 0.3,
                acceptability_probability: 0.5,
                mutual: true,
                ..GenParams::roommate(7, seed)
            };
            assert!(is_mutual(&random_game(&mutual).unwrap()));
        }
        for seed in 0..100 {
            let complete = GenParams {
                tie_probability: 0.4,
                complete: true,
                ..GenParams::marriage(4, 3, seed)
            };
            let g = random_game(&complete).unwrap();
            assert!(has_no_unacceptability(&g));
            assert!(is_mutual(&g));
            let rm = GenParams {
                shape: GameShape::Roommate { n: 6 },
                ..complete
            };
            assert!(has_no_unacceptability(&random_game(&rm).unwrap()));
        }
    }

    #[test]
    fn generator_rejects_bad_probabilities() {
        let bad = GenParams {
            tie_probability: 1.5,
            ..GenParams::roommate(3, 0)
        };
        assert!(matches!(random_game(&bad), Err(ModelError::InvalidParams(_))));
        let nan = GenParams {
            acceptability_probability: f64::NAN,
            ..GenParams::roommate(3, 0)
        };
        assert!(random_game(&nan).is_err());
    }

    #[test]
    fn marriage_games_never_accept_same_sex() {
        for seed in 0..50 {
            let g = random_game(&GenParams {
                tie_probability: 0.5,
                complete: seed % 2 == 0,
                ..GenParams::marriage(3, 4, seed)
            })
            .unwrap();
            for i in g.players() {
                for j in g.players().filter(|&j| j != i && g.side(j) == g.side(i)) {
                    assert!(!g.acceptable(i, j));
                }
            }
        }
    }
}

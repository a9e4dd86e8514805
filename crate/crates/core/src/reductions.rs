//! Instance generators for the hardness gadgets: minimum maximal matching
//! on a (padded) subdivision graph is turned into a marriage game that has a
//! Nash stable matching, or a roommate game that has an individually stable
//! matching, exactly when the graph has a maximal matching of size at most
//! `k`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph_matching::{pad_bipartition, subdivision_graph, Graph, GraphError, Part};
use crate::model::{Game, GameKind, ModelError, PlayerId, PreferenceList, SelfPosition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("k = {k} exceeds the side size n = {n} of the padded subdivision graph")]
    KTooLarge { k: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// What a player of a reduced game stands for. Vertex indices refer to the
/// padded subdivision graph of the artifact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    AVertex(usize),
    BVertex(usize),
    /// Gadget player number `index` (0-based); `layer` is its position in a
    /// cyclic triplet for the roommate reduction and `None` for the marriage
    /// reduction.
    X { index: usize, layer: Option<u8> },
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub game: Game,
    /// Role of player `i` at index `i - 1`.
    pub roles: Vec<Role>,
    /// Side size of the padded subdivision graph.
    pub n: usize,
    pub k: usize,
    /// Number of padding gadgets added to balance the sides.
    pub r: usize,
    /// The padded subdivision graph the game encodes.
    pub graph: Graph,
}

impl ReductionArtifact {
    pub fn role(&self, p: PlayerId) -> Role {
        self.roles[p.index()]
    }

    /// `#`-comment lines describing every player's role (vertices 1-based).
    pub fn role_map_comment(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# reduction {name}: n={} k={} r={} players={}",
            self.n,
            self.k,
            self.r,
            self.roles.len()
        );
        for (i, role) in self.roles.iter().enumerate() {
            let desc = match *role {
                Role::AVertex(v) => format!("A vertex {}", v + 1),
                Role::BVertex(v) => format!("B vertex {}", v + 1),
                Role::X { index, layer: None } => format!("X {}", index + 1),
                Role::X {
                    index,
                    layer: Some(j),
                } => format!("X triplet {} layer {j}", index + 1),
                Role::Y => "Y".to_owned(),
            };
            let _ = writeln!(out, "# role {} {desc}", i + 1);
        }
        out
    }
}

struct Sides {
    graph: Graph,
    a: Vec<usize>,
    b: Vec<usize>,
    r: usize,
}

fn padded_sides(g0: &Graph, k: usize) -> Result<Sides, ReductionError> {
    let (graph, padding) = pad_bipartition(&subdivision_graph(g0))?;
    let a = graph.part_members(Part::A);
    let b = graph.part_members(Part::B);
    debug_assert_eq!(a.len(), b.len());
    if k > a.len() {
        return Err(ReductionError::KTooLarge { k, n: a.len() });
    }
    Ok(Sides {
        graph,
        a,
        b,
        r: padding.r,
    })
}

fn list(owner: usize, tiers: Vec<Vec<usize>>) -> Result<PreferenceList, ModelError> {
    let tiers: Vec<Vec<PlayerId>> = tiers
        .into_iter()
        .filter(|t| !t.is_empty())
        .map(|t| t.into_iter().map(PlayerId::new).collect())
        .collect();
    let len = tiers.len();
    PreferenceList::new(PlayerId::new(owner), tiers, SelfPosition::Before(len))
}

/// Vertex-to-player lookup for one side.
fn position(side: &[usize], total: usize) -> Vec<Option<usize>> {
    let mut pos = vec![None; total];
    for (i, &v) in side.iter().enumerate() {
        pos[v] = Some(i);
    }
    pos
}

/// Marriage game with a Nash stable matching iff the padded subdivision
/// graph of `g0` has a maximal matching of size at most `k`.
///
/// Men are the A vertices (players `1..=n`) and `y` (`n+1`); women are the
/// B vertices (`n+2..=2n+1`) and the `n-k` gadget players after them.
/// Each `a` likes its B neighbours (tied), then all of X (tied); each `b`
/// likes its A neighbours (tied); each `x` is indifferent among all of A and
/// `y`; `y` prefers to be alone.
pub fn mmm_to_marriage_ns(g0: &Graph, k: usize) -> Result<ReductionArtifact, ReductionError> {
    let Sides { graph, a, b, r } = padded_sides(g0, k)?;
    let n = a.len();
    let a_id = |i: usize| i + 1;
    let y_id = n + 1;
    let b_id = |i: usize| n + 2 + i;
    let x_ids: Vec<usize> = (0..n - k).map(|i| 2 * n + 2 + i).collect();
    let (a_pos, b_pos) = (position(&a, graph.vertex_count()), position(&b, graph.vertex_count()));

    let mut lists = Vec::with_capacity(2 * n + 1 + (n - k));
    let mut roles = Vec::with_capacity(lists.capacity());
    for (i, &v) in a.iter().enumerate() {
        let nb: Vec<usize> = graph.neighbors(v).iter().map(|&w| b_id(b_pos[w].expect("B neighbour"))).collect();
        lists.push(list(a_id(i), vec![nb, x_ids.clone()])?);
        roles.push(Role::AVertex(v));
    }
    lists.push(list(y_id, vec![])?);
    roles.push(Role::Y);
    for (i, &v) in b.iter().enumerate() {
        let nb: Vec<usize> = graph.neighbors(v).iter().map(|&w| a_id(a_pos[w].expect("A neighbour"))).collect();
        lists.push(list(b_id(i), vec![nb])?);
        roles.push(Role::BVertex(v));
    }
    let mut a_and_y: Vec<usize> = (0..n).map(a_id).collect();
    a_and_y.push(y_id);
    for (index, &x) in x_ids.iter().enumerate() {
        lists.push(list(x, vec![a_and_y.clone()])?);
        roles.push(Role::X { index, layer: None });
    }
    let game = Game::new(
        GameKind::Marriage {
            men: n + 1,
            women: n + (n - k),
        },
        lists,
    )?;
    Ok(ReductionArtifact {
        game,
        roles,
        n,
        k,
        r,
        graph,
    })
}

/// Roommate game with an individually stable matching iff the padded
/// subdivision graph of `g0` has a maximal matching of size at most `k`.
///
/// Players: A vertices `1..=n`, B vertices `n+1..=2n`, then `n-k` triplets
/// `x_i^0, x_i^1, x_i^2`. A and B lists are as in the marriage reduction
/// (without `y`); `x_i^j` is indifferent among all of A and `x_i^{j+1}`,
/// then prefers `x_i^{j-1}`, then being alone.
pub fn mmm_to_roommate_is(g0: &Graph, k: usize) -> Result<ReductionArtifact, ReductionError> {
    let Sides { graph, a, b, r } = padded_sides(g0, k)?;
    let n = a.len();
    let a_id = |i: usize| i + 1;
    let b_id = |i: usize| n + 1 + i;
    let x_id = |t: usize, layer: usize| 2 * n + 3 * t + layer + 1;
    let triplets = n - k;
    let all_x: Vec<usize> = (0..triplets).flat_map(|t| (0..3).map(move |j| x_id(t, j))).collect();
    let (a_pos, b_pos) = (position(&a, graph.vertex_count()), position(&b, graph.vertex_count()));

    let mut lists = Vec::with_capacity(2 * n + 3 * triplets);
    let mut roles = Vec::with_capacity(lists.capacity());
    for (i, &v) in a.iter().enumerate() {
        let nb: Vec<usize> = graph.neighbors(v).iter().map(|&w| b_id(b_pos[w].expect("B neighbour"))).collect();
        lists.push(list(a_id(i), vec![nb, all_x.clone()])?);
        roles.push(Role::AVertex(v));
    }
    for (i, &v) in b.iter().enumerate() {
        let nb: Vec<usize> = graph.neighbors(v).iter().map(|&w| a_id(a_pos[w].expect("A neighbour"))).collect();
        lists.push(list(b_id(i), vec![nb])?);
        roles.push(Role::BVertex(v));
    }
    for t in 0..triplets {
        for j in 0..3 {
            let mut top: Vec<usize> = (0..n).map(a_id).collect();
            top.push(x_id(t, (j + 1) % 3));
            lists.push(list(x_id(t, j), vec![top, vec![x_id(t, (j + 2) % 3)]])?);
            roles.push(Role::X {
                index: t,
                layer: Some(j as u8),
            });
        }
    }
    let game = Game::new(GameKind::Roommate, lists)?;
    Ok(ReductionArtifact {
        game,
        roles,
        n,
        k,
        r,
        graph,
    })
}

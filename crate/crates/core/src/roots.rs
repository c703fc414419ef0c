//! Reduced irreducible root systems in Bourbaki numbering.
//!
//! Roots are integer coefficient vectors over the simple roots. Positive roots
//! are stored first, sorted by height and then by decreasing coefficient
//! vector, so that the simple roots come out as `α_1, …, α_l`; the negative of
//! positive root `i` is stored at `i + N` with `N` the number of positive
//! roots. Root ids therefore carry the canonical order used for every ordered
//! unipotent product: within each sign, id order is height order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];

    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.letter() == c.to_ascii_uppercase())
    }
}

/// A Cartan type such as `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<CartanType> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if rank > 16 {
            return Err(Error::InvalidType(format!("{}{rank}: rank above 16 is not supported", family.letter())));
        }
        if family == Family::D && rank == 3 {
            return Err(Error::InvalidType("D3 is not accepted, use A3".into()));
        }
        if !ok {
            return Err(Error::InvalidType(format!("{}{rank}", family.letter())));
        }
        Ok(CartanType { family, rank })
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<CartanType> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Index into [`RootSystem`]'s root list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootId(pub(crate) u16);

impl RootId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bitmask of simple-root nodes (bit `k - 1` is node `k`).
pub type NodeSet = u32;

const NO_ROOT: u16 = u16::MAX;

/// Squared lengths of the simple roots and their nonzero off-diagonal inner
/// products, scaled to integers.
fn gram_data(ty: CartanType) -> (Vec<i32>, Vec<(usize, usize, i32)>) {
    let l = ty.rank;
    let chain = |len: usize, ip: i32| (0..len.saturating_sub(1)).map(move |i| (i, i + 1, ip));
    match ty.family {
        Family::A => (vec![2; l], chain(l, -1).collect()),
        Family::B => {
            let mut lens = vec![4; l];
            lens[l - 1] = 2;
            (lens, chain(l, -2).collect())
        }
        Family::C => {
            let mut lens = vec![2; l];
            lens[l - 1] = 4;
            let mut edges: Vec<_> = chain(l - 1, -1).collect();
            edges.push((l - 2, l - 1, -2));
            (lens, edges)
        }
        Family::D => {
            let mut edges: Vec<_> = chain(l - 1, -1).collect();
            edges.push((l - 3, l - 1, -1));
            (vec![2; l], edges)
        }
        Family::E => {
            let mut edges = vec![(0, 2, -1), (1, 3, -1)];
            edges.extend((2..l - 1).map(|i| (i, i + 1, -1)));
            (vec![2; l], edges)
        }
        Family::F => (vec![4, 4, 2, 2], vec![(0, 1, -2), (1, 2, -2), (2, 3, -1)]),
        Family::G => (vec![2, 6], vec![(0, 1, -3)]),
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: CartanType,
    gram: Vec<Vec<i32>>,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Vec<i32>>,
    npos: usize,
    lookup: HashMap<Vec<i32>, RootId>,
    sums: Vec<u16>,
    heights: Vec<i32>,
    supports: Vec<NodeSet>,
    norms: Vec<i32>,
}

impl RootSystem {
    /// Builds the root system by closing the simple roots under root strings.
    pub fn build(ty: CartanType) -> RootSystem {
        let l = ty.rank;
        let (lens, edges) = gram_data(ty);
        let mut gram = vec![vec![0; l]; l];
        for i in 0..l {
            gram[i][i] = lens[i];
        }
        for &(i, j, ip) in &edges {
            gram[i][j] = ip;
            gram[j][i] = ip;
        }
        let cartan: Vec<Vec<i32>> = (0..l)
            .map(|i| (0..l).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();

        // ⟨β, α_i^∨⟩ for a coefficient vector β
        let pair_simple = |beta: &[i32], i: usize| -> i32 { (0..l).map(|j| beta[j] * cartan[j][i]).sum() };

        let mut known: HashMap<Vec<i32>, ()> = HashMap::new();
        let mut level: Vec<Vec<i32>> = (0..l)
            .map(|i| {
                let mut v = vec![0; l];
                v[i] = 1;
                v
            })
            .collect();
        let mut positive = Vec::new();
        while !level.is_empty() {
            for r in &level {
                known.insert(r.clone(), ());
            }
            let mut next: Vec<Vec<i32>> = Vec::new();
            for beta in &level {
                for i in 0..l {
                    let mut p = 0;
                    let mut probe = beta.clone();
                    loop {
                        probe[i] -= 1;
                        if known.contains_key(&probe) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - pair_simple(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            positive.extend(level);
            level = next;
        }
        positive.sort_by(|a, b| {
            let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let npos = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));

        let lookup: HashMap<Vec<i32>, RootId> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), RootId(i as u16)))
            .collect();
        let n = roots.len();
        let mut sums = vec![NO_ROOT; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<i32> = roots[a].iter().zip(&roots[b]).map(|(x, y)| x + y).collect();
                if let Some(id) = lookup.get(&s) {
                    sums[a * n + b] = id.0;
                }
            }
        }
        let heights = roots.iter().map(|r| r.iter().sum()).collect();
        let supports = roots
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .fold(0, |m, (k, _)| m | (1 << k))
            })
            .collect();
        let norms = roots
            .iter()
            .map(|r| {
                (0..l)
                    .flat_map(|i| (0..l).map(move |j| (i, j)))
                    .map(|(i, j)| r[i] * r[j] * gram[i][j])
                    .sum()
            })
            .collect();
        RootSystem { ty, gram, cartan, roots, npos, lookup, sums, heights, supports, norms }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    /// `cartan()[i][j] = ⟨α_{i+1}, α_{j+1}^∨⟩`.
    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn roots(&self) -> impl Iterator<Item = RootId> + '_ {
        (0..self.roots.len()).map(|i| RootId(i as u16))
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = RootId> {
        (0..self.npos).map(|i| RootId(i as u16))
    }

    pub fn negative_roots(&self) -> impl Iterator<Item = RootId> {
        (self.npos..2 * self.npos).map(|i| RootId(i as u16))
    }

    /// Coefficient vector of a root.
    pub fn vector(&self, a: RootId) -> &[i32] {
        &self.roots[a.index()]
    }

    pub fn find(&self, v: &[i32]) -> Option<RootId> {
        self.lookup.get(v).copied()
    }

    pub fn root(&self, v: &[i32]) -> Result<RootId> {
        self.find(v).ok_or_else(|| Error::UnknownRoot(v.to_vec()))
    }

    /// Simple root `α_k`, 1-based.
    pub fn simple(&self, k: usize) -> RootId {
        let mut v = vec![0; self.rank()];
        v[k - 1] = 1;
        self.lookup[&v]
    }

    pub fn is_simple(&self, a: RootId) -> bool {
        self.heights[a.index()] == 1
    }

    /// Whether `a ∈ ±Π`.
    pub fn is_fundamental(&self, a: RootId) -> bool {
        self.heights[a.index()].abs() == 1
    }

    pub fn neg(&self, a: RootId) -> RootId {
        let i = a.index();
        RootId(if i < self.npos { i + self.npos } else { i - self.npos } as u16)
    }

    pub fn is_positive(&self, a: RootId) -> bool {
        a.index() < self.npos
    }

    pub fn height(&self, a: RootId) -> i32 {
        self.heights[a.index()]
    }

    /// `m_k(α)`, 1-based `k`.
    pub fn coeff(&self, a: RootId, k: usize) -> i32 {
        self.roots[a.index()][k - 1]
    }

    /// Nodes carrying a nonzero coefficient of `a`.
    pub fn support(&self, a: RootId) -> NodeSet {
        self.supports[a.index()]
    }

    /// `(α, α)` in the integer normalisation where the shortest roots have
    /// the smallest squared length in the table.
    pub fn norm(&self, a: RootId) -> i32 {
        self.norms[a.index()]
    }

    pub fn inner(&self, a: RootId, b: RootId) -> i32 {
        let (x, y) = (self.vector(a), self.vector(b));
        let l = self.rank();
        (0..l)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| x[i] * y[j] * self.gram[i][j])
            .sum()
    }

    /// Cartan integer `⟨β, α^∨⟩`.
    pub fn pairing(&self, beta: RootId, alpha: RootId) -> i32 {
        2 * self.inner(beta, alpha) / self.norm(alpha)
    }

    /// `⟨β, α_k^∨⟩` for a simple coroot, 0-based `k`.
    pub fn pairing_simple(&self, beta: RootId, k: usize) -> i32 {
        let v = self.vector(beta);
        (0..self.rank()).map(|j| v[j] * self.cartan[j][k]).sum()
    }

    /// Coefficients of `α^∨` over the simple coroots.
    pub fn coroot(&self, a: RootId) -> Vec<i32> {
        let n = self.norm(a);
        self.vector(a)
            .iter()
            .enumerate()
            .map(|(i, &m)| m * self.gram[i][i] / n)
            .collect()
    }

    pub fn sum(&self, a: RootId, b: RootId) -> Option<RootId> {
        let s = self.sums[a.index() * self.roots.len() + b.index()];
        (s != NO_ROOT).then_some(RootId(s))
    }

    /// `i·α + j·β` if it is a root.
    pub fn combine(&self, i: i32, a: RootId, j: i32, b: RootId) -> Option<RootId> {
        let v: Vec<i32> = self
            .vector(a)
            .iter()
            .zip(self.vector(b))
            .map(|(x, y)| i * x + j * y)
            .collect();
        self.find(&v)
    }

    /// `w_α(β) = β − ⟨β, α^∨⟩α`.
    pub fn reflect(&self, alpha: RootId, beta: RootId) -> RootId {
        let c = self.pairing(beta, alpha);
        self.combine(1, beta, -c, alpha).expect("reflection of a root is a root")
    }

    /// Largest `p` with `β − pα ∈ Φ`.
    pub fn string_below(&self, alpha: RootId, beta: RootId) -> i32 {
        (1..).take_while(|&k| self.combine(1, beta, -k, alpha).is_some()).count() as i32
    }

    /// Largest `q` with `β + qα ∈ Φ`.
    pub fn string_above(&self, alpha: RootId, beta: RootId) -> i32 {
        (1..).take_while(|&k| self.combine(1, beta, k, alpha).is_some()).count() as i32
    }

    pub fn highest_root(&self) -> RootId {
        RootId(self.npos as u16 - 1)
    }

    /// All nodes.
    pub fn all_nodes(&self) -> NodeSet {
        (1u32 << self.rank()) - 1
    }

    /// Nodes of `set` that have at most one neighbour inside `set`.
    pub fn leaves(&self, set: NodeSet) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| set & (1 << i) != 0)
            .filter(|&i| {
                (0..self.rank())
                    .filter(|&j| j != i && set & (1 << j) != 0 && self.cartan[i][j] != 0)
                    .count()
                    <= 1
            })
            .collect()
    }

    pub fn parabolic(&self, r: usize) -> ParabolicData {
        let mut data = ParabolicData { node: r, ..Default::default() };
        for a in self.roots() {
            match self.coeff(a, r) {
                0 => {
                    data.s.push(a);
                    data.s_minus.push(a);
                    data.delta.push(a);
                }
                m if m > 0 => {
                    data.s.push(a);
                    data.sigma.push(a);
                }
                _ => {
                    data.s_minus.push(a);
                    data.neg_sigma.push(a);
                }
            }
        }
        data
    }

    /// Root system of the diagram with node `r` (1 or `l`) removed, relabelled
    /// in Bourbaki numbering, together with the embedding of its roots.
    pub fn terminal_subsystem(&self, r: usize) -> Result<(RootSystem, Vec<RootId>)> {
        let l = self.rank();
        if l < 2 {
            return Err(Error::RankTooSmall);
        }
        if r != 1 && r != l {
            return Err(Error::InvalidType(format!("node {r} is not terminal in {}", self.ty)));
        }
        let nodes: Vec<usize> = (0..l).filter(|&i| i != r - 1).collect();
        let sub_cartan: Vec<Vec<i32>> = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| self.cartan[i][j]).collect())
            .collect();
        let (sub, perm) = identify(&sub_cartan)
            .ok_or_else(|| Error::Internal(format!("unrecognised subdiagram of {}", self.ty)))?;
        // sub node k corresponds to ambient node nodes[perm[k]]
        let map = sub
            .roots
            .iter()
            .map(|v| {
                let mut w = vec![0; l];
                for (k, &c) in v.iter().enumerate() {
                    w[nodes[perm[k]]] = c;
                }
                self.root(&w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((sub, map))
    }
}

/// Finds the Cartan type of a connected Cartan matrix and a node bijection
/// `perm` with `cartan[perm[i]][perm[j]] == standard[i][j]`.
fn identify(cartan: &[Vec<i32>]) -> Option<(RootSystem, Vec<usize>)> {
    let n = cartan.len();
    for family in Family::ALL {
        let Ok(ty) = CartanType::new(family, n) else { continue };
        let candidate = RootSystem::build(ty);
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        if match_nodes(&candidate.cartan, cartan, &mut perm, &mut used) {
            return Some((candidate, perm));
        }
    }
    None
}

fn match_nodes(std: &[Vec<i32>], target: &[Vec<i32>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let k = perm.len();
    if k == std.len() {
        return true;
    }
    for cand in 0..std.len() {
        if used[cand] {
            continue;
        }
        let fits = (0..k).all(|i| std[i][k] == target[perm[i]][cand] && std[k][i] == target[cand][perm[i]]);
        if fits && std[k][k] == target[cand][cand] {
            used[cand] = true;
            perm.push(cand);
            if match_nodes(std, target, perm, used) {
                return true;
            }
            perm.pop();
            used[cand] = false;
        }
    }
    false
}

/// The `r`-th standard parabolic subset and its parts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParabolicData {
    pub node: usize,
    /// `S_r = {m_r ≥ 0}`
    pub s: Vec<RootId>,
    /// `Δ_r = {m_r = 0}`
    pub delta: Vec<RootId>,
    /// `Σ_r = {m_r > 0}`
    pub sigma: Vec<RootId>,
    /// `S_r^- = {m_r ≤ 0}`
    pub s_minus: Vec<RootId>,
    /// `−Σ_r = {m_r < 0}`
    pub neg_sigma: Vec<RootId>,
}

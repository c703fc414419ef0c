//! Matrix representations used as independent oracles: the adjoint
//! representation and the minuscule representations (which include the
//! natural representations of types A and C).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use crate::constants::StructureConstants;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::ring::{Elem, Ring};
use crate::roots::{CartanType, Family, RootId, RootSystem};
use crate::words::{expand_generators, GenKind, Generator, Word};

/// Square matrix over a ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = ring.one();
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    if !ring.is_zero(b) {
                        data[i * n + j] = ring.add(data[i * n + j], ring.mul(a, b));
                    }
                }
            }
        }
        Matrix { n, data }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        *self == Matrix::identity(ring, self.n)
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        Value::Array(
            self.data
                .chunks(self.n.max(1))
                .map(|r| Value::Array(r.iter().map(|&e| ring.encode(e)).collect()))
                .collect(),
        )
    }

    /// `self ← self · (1 + Σ_k t^k E_k)` for sparse integer matrices `E_k`.
    fn mul_unipotent(&mut self, ring: &Ring, powers: &[Sparse], t: Elem) {
        let n = self.n;
        let orig = self.data.clone();
        let mut tk = ring.one();
        for e in powers {
            tk = ring.mul(tk, t);
            for &(r, c, v) in &e.entries {
                let f = ring.mul(ring.from_i64(v), tk);
                if ring.is_zero(f) {
                    continue;
                }
                for i in 0..n {
                    let a = orig[i * n + r];
                    if !ring.is_zero(a) {
                        self.data[i * n + c] = ring.add(self.data[i * n + c], ring.mul(a, f));
                    }
                }
            }
        }
    }
}

/// Sparse integer matrix as `(row, col, value)` triples.
#[derive(Clone, Debug, Default)]
struct Sparse {
    entries: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Adjoint,
    /// Natural representation of type `A_l`, dimension `l + 1`.
    NaturalA,
    /// Natural representation of type `C_l`, dimension `2l`.
    NaturalC,
    /// Minuscule representation with highest weight `ω_k`.
    Minuscule(usize),
}

impl FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<RepKind> {
        match s {
            "adjoint" => Ok(RepKind::Adjoint),
            "natural-a" | "natural-A" => Ok(RepKind::NaturalA),
            "natural-c" | "natural-C" => Ok(RepKind::NaturalC),
            _ => s
                .strip_prefix("minuscule:")
                .and_then(|k| k.parse().ok())
                .map(RepKind::Minuscule)
                .ok_or_else(|| Error::Parse(format!("unknown representation `{s}`"))),
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepKind::Adjoint => write!(f, "adjoint"),
            RepKind::NaturalA => write!(f, "natural-a"),
            RepKind::NaturalC => write!(f, "natural-c"),
            RepKind::Minuscule(k) => write!(f, "minuscule:{k}"),
        }
    }
}

/// A representation of the Lie algebra with the divided powers of every
/// root operator precomputed.
#[derive(Clone, Debug)]
pub struct Representation {
    kind: RepKind,
    dim: usize,
    /// `powers[α][k−1] = ρ(e_α)^k / k!`
    powers: Vec<Vec<Sparse>>,
}

impl Representation {
    pub fn new(group: &Group, kind: RepKind) -> Result<Representation> {
        let rs = group.system();
        let ty = rs.cartan_type();
        let incompatible = || Error::IncompatibleRep { rep: kind.to_string(), system: ty.to_string() };
        match kind {
            RepKind::Adjoint => Ok(adjoint(group.constants())),
            RepKind::NaturalA if ty.family == Family::A => minuscule(group.constants(), 1, kind),
            RepKind::NaturalC if ty.family == Family::C => minuscule(group.constants(), 1, kind),
            RepKind::Minuscule(k) if (1..=rs.rank()).contains(&k) => {
                minuscule(group.constants(), k, kind).map_err(|_| incompatible())
            }
            _ => Err(incompatible()),
        }
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ρ(e_α)` as a dense integer matrix.
    pub fn root_operator(&self, a: RootId) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.dim]; self.dim];
        if let Some(e) = self.powers[a.index()].first() {
            for &(r, c, v) in &e.entries {
                m[r][c] = v;
            }
        }
        m
    }

    fn apply(&self, group: &Group, m: &mut Matrix, g: &Generator) -> Result<()> {
        match g.kind {
            GenKind::X => {
                if !group.ring.is_zero(g.param) {
                    m.mul_unipotent(&group.ring, &self.powers[g.root.index()], g.param);
                }
            }
            _ => {
                for x in expand_generators(group, &Word::new(vec![*g]))?.gens {
                    self.apply(group, m, &x)?;
                }
            }
        }
        Ok(())
    }

    pub fn gen_matrix(&self, group: &Group, g: &Generator) -> Result<Matrix> {
        let mut m = Matrix::identity(&group.ring, self.dim);
        self.apply(group, &mut m, g)?;
        Ok(m)
    }

    pub fn eval(&self, group: &Group, w: &Word) -> Result<Matrix> {
        let mut m = Matrix::identity(&group.ring, self.dim);
        for g in &w.gens {
            self.apply(group, &mut m, g)?;
        }
        Ok(m)
    }

    pub fn verify_equal(&self, group: &Group, w1: &Word, w2: &Word) -> Result<bool> {
        Ok(self.eval(group, w1)? == self.eval(group, w2)?)
    }
}

/// Representations that together separate the elements of the simply
/// connected group: the natural one for types A and C, otherwise the
/// adjoint representation plus minuscule ones that detect the centre.
pub fn oracle_kinds(ty: CartanType) -> Vec<RepKind> {
    let l = ty.rank;
    match (ty.family, l) {
        (Family::A, _) => vec![RepKind::NaturalA],
        (Family::C, _) => vec![RepKind::NaturalC],
        (Family::B, _) => vec![RepKind::Adjoint, RepKind::Minuscule(l)],
        (Family::D, _) => vec![RepKind::Adjoint, RepKind::Minuscule(1), RepKind::Minuscule(l)],
        (Family::E, 6) => vec![RepKind::Adjoint, RepKind::Minuscule(1)],
        (Family::E, 7) => vec![RepKind::Adjoint, RepKind::Minuscule(7)],
        _ => vec![RepKind::Adjoint],
    }
}

/// A bundle of representations checked together.
#[derive(Clone, Debug)]
pub struct Oracle {
    reps: Vec<Representation>,
}

impl Oracle {
    pub fn new(group: &Group, kinds: &[RepKind]) -> Result<Oracle> {
        let reps = kinds.iter().map(|&k| Representation::new(group, k)).collect::<Result<_>>()?;
        Ok(Oracle { reps })
    }

    /// The default faithful oracle for the group's type.
    pub fn faithful(group: &Group) -> Result<Oracle> {
        Oracle::new(group, &oracle_kinds(group.system().cartan_type()))
    }

    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    pub fn eval(&self, group: &Group, w: &Word) -> Result<Vec<Matrix>> {
        self.reps.iter().map(|r| r.eval(group, w)).collect()
    }

    pub fn verify_equal(&self, group: &Group, w1: &Word, w2: &Word) -> Result<bool> {
        for r in &self.reps {
            if !r.verify_equal(group, w1, w2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

type SparseVec = HashMap<usize, i64>;

fn divided_powers(op: impl Fn(&SparseVec) -> SparseVec, dim: usize) -> Vec<Sparse> {
    let mut powers: Vec<Sparse> = Vec::new();
    for col in 0..dim {
        let mut v: SparseVec = HashMap::from([(col, 1)]);
        let mut k = 1i64;
        loop {
            let mut next = op(&v);
            next.retain(|_, c| *c != 0);
            if next.is_empty() {
                break;
            }
            for c in next.values_mut() {
                assert_eq!(*c % k, 0, "divided power is not integral");
                *c /= k;
            }
            let idx = (k - 1) as usize;
            if powers.len() <= idx {
                powers.resize_with(idx + 1, Sparse::default);
            }
            let mut entries: Vec<_> = next.iter().map(|(&r, &c)| (r, col, c)).collect();
            entries.sort();
            powers[idx].entries.extend(entries);
            v = next;
            k += 1;
        }
    }
    powers
}

fn adjoint(sc: &StructureConstants) -> Representation {
    let rs = sc.system();
    let dim = sc.lie_dim();
    let powers = rs
        .roots()
        .map(|a| {
            divided_powers(
                |v| {
                    let mut out = SparseVec::new();
                    for (&b, &c) in v {
                        for (i, m) in sc.bracket(a.index(), b) {
                            *out.entry(i).or_insert(0) += m * c;
                        }
                    }
                    out
                },
                dim,
            )
        })
        .collect();
    Representation { kind: RepKind::Adjoint, dim, powers }
}

/// Weights of the minuscule representation `V(ω_k)` in fundamental-weight
/// coordinates, in breadth-first order from the highest weight.
fn minuscule_weights(rs: &RootSystem, k: usize) -> Option<Vec<Vec<i32>>> {
    let l = rs.rank();
    let cartan = rs.cartan();
    let mut top = vec![0; l];
    top[k - 1] = 1;
    let mut seen: HashMap<Vec<i32>, usize> = HashMap::from([(top.clone(), 0)]);
    let mut weights = vec![top];
    let mut i = 0;
    while i < weights.len() {
        let mu = weights[i].clone();
        for s in 0..l {
            if mu[s] > 0 {
                let nu: Vec<i32> = (0..l).map(|t| mu[t] - mu[s] * cartan[s][t]).collect();
                if nu.iter().any(|c| c.abs() > 1) {
                    return None;
                }
                if !seen.contains_key(&nu) {
                    seen.insert(nu.clone(), weights.len());
                    weights.push(nu);
                }
            }
        }
        i += 1;
    }
    Some(weights)
}

fn minuscule(sc: &StructureConstants, k: usize, kind: RepKind) -> Result<Representation> {
    let rs = sc.system();
    let l = rs.rank();
    let cartan = rs.cartan();
    let weights = minuscule_weights(rs, k).ok_or_else(|| Error::IncompatibleRep {
        rep: kind.to_string(),
        system: rs.cartan_type().to_string(),
    })?;
    let dim = weights.len();
    let index: HashMap<&[i32], usize> = weights.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let shift = |mu: &[i32], s: usize, sign: i32| -> Vec<i32> {
        (0..l).map(|t| mu[t] + sign * cartan[s][t]).collect()
    };

    // dense integer operators for every root, built by height
    let nr = rs.num_roots();
    let mut ops: Vec<Option<Vec<Vec<i64>>>> = vec![None; nr];
    for s in 0..l {
        let mut e = vec![vec![0i64; dim]; dim];
        let mut f = vec![vec![0i64; dim]; dim];
        for (j, mu) in weights.iter().enumerate() {
            if mu[s] == -1 {
                e[index[shift(mu, s, 1).as_slice()]][j] = 1;
            }
            if mu[s] == 1 {
                f[index[shift(mu, s, -1).as_slice()]][j] = 1;
            }
        }
        let a = rs.simple(s + 1);
        ops[a.index()] = Some(e);
        ops[rs.neg(a).index()] = Some(f);
    }
    let commutator = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; dim]; dim];
        for i in 0..dim {
            for t in 0..dim {
                let (a, b) = (x[i][t], y[i][t]);
                for j in 0..dim {
                    out[i][j] += a * y[t][j] - b * x[t][j];
                }
            }
        }
        out
    };
    for sign in [true, false] {
        let seq: Vec<RootId> = if sign { rs.positive_roots().collect() } else { rs.negative_roots().collect() };
        for g in seq {
            if rs.is_fundamental(g) {
                continue;
            }
            let (s, rest) = (0..l)
                .map(|s| {
                    let a = rs.simple(s + 1);
                    if sign {
                        a
                    } else {
                        rs.neg(a)
                    }
                })
                .find_map(|a| rs.combine(1, g, -1, a).map(|b| (a, b)))
                .expect("non-fundamental roots decompose");
            let n = sc.n(s, rest) as i64;
            let mut m = commutator(ops[s.index()].as_ref().unwrap(), ops[rest.index()].as_ref().unwrap());
            for row in m.iter_mut() {
                for c in row.iter_mut() {
                    assert_eq!(*c % n, 0);
                    *c /= n;
                }
            }
            ops[g.index()] = Some(m);
        }
    }
    let powers = ops
        .into_iter()
        .map(|m| {
            let m = m.unwrap();
            divided_powers(
                |v| {
                    let mut out = SparseVec::new();
                    for (&c, &x) in v {
                        for (r, row) in m.iter().enumerate() {
                            if row[c] != 0 {
                                *out.entry(r).or_insert(0) += row[c] * x;
                            }
                        }
                    }
                    out
                },
                dim,
            )
        })
        .collect();
    Ok(Representation { kind, dim, powers })
}

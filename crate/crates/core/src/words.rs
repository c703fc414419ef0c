//! Generator words and the rewriting toolkit: torus and Weyl conjugation,
//! reduction to fundamental generators, collection and Levi splitting.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, RootOrder};
use crate::ring::{Elem, Ring};
use crate::roots::RootId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    X,
    H,
    W,
}

/// `x_α(ξ)`, `h_α(ε)` or `w_α(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub kind: GenKind,
    pub root: RootId,
    pub param: Elem,
}

impl Generator {
    pub fn x(root: RootId, param: Elem) -> Generator {
        Generator { kind: GenKind::X, root, param }
    }

    pub fn h(root: RootId, param: Elem) -> Generator {
        Generator { kind: GenKind::H, root, param }
    }

    pub fn w(root: RootId, param: Elem) -> Generator {
        Generator { kind: GenKind::W, root, param }
    }
}

/// A product of generators, read left to right. The empty word is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word {
    pub gens: Vec<Generator>,
}

impl Word {
    pub fn new(gens: Vec<Generator>) -> Word {
        Word { gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Word { gens }
    }

    /// Checks that `H`/`W` parameters are units.
    pub fn validate(&self, ring: &Ring) -> Result<()> {
        for g in &self.gens {
            if g.kind != GenKind::X && !ring.is_unit(g.param) {
                return Err(Error::NotUnit(ring.show(g.param)));
            }
        }
        Ok(())
    }
}

/// Ordered product `∏ x_α(ξ_α)` over a special set, stored sorted by root
/// id (the canonical order) with zero parameters omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnipotentParams {
    pub terms: Vec<(RootId, Elem)>,
}

impl UnipotentParams {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, a: RootId) -> Option<Elem> {
        self.terms.iter().find(|(r, _)| *r == a).map(|&(_, v)| v)
    }

    pub fn gens(&self) -> impl Iterator<Item = Generator> + '_ {
        self.terms.iter().map(|&(a, v)| Generator::x(a, v))
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.gens().collect())
    }

    /// Generators of the inverse element.
    pub fn inverse_gens(&self, ring: &Ring) -> Vec<(RootId, Elem)> {
        self.terms.iter().rev().map(|&(a, v)| (a, ring.neg(v))).collect()
    }
}

/// `∏ h_{α_i}(ε_i)` over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusParams {
    pub eps: Vec<Elem>,
}

impl TorusParams {
    pub fn identity(group: &Group) -> TorusParams {
        TorusParams { eps: vec![group.ring.one(); group.rank()] }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        self.eps.iter().all(|&e| e == ring.one())
    }

    /// `h_α(ε)` written in simple-coroot coordinates.
    pub fn of_root(group: &Group, a: RootId, eps: Elem) -> Result<TorusParams> {
        let ring = &group.ring;
        let co = group.system().coroot(a);
        let eps = co
            .iter()
            .map(|&n| ring.pow(eps, n as i64).ok_or_else(|| Error::NotUnit(ring.show(eps))))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusParams { eps })
    }

    pub fn mul(&self, other: &TorusParams, ring: &Ring) -> TorusParams {
        TorusParams { eps: self.eps.iter().zip(&other.eps).map(|(&a, &b)| ring.mul(a, b)).collect() }
    }

    pub fn inverse(&self, ring: &Ring) -> TorusParams {
        TorusParams { eps: self.eps.iter().map(|&e| ring.inv(e).expect("torus entries are units")).collect() }
    }

    /// The character value `β(t) = ∏ ε_i^{⟨β, α_i^∨⟩}`.
    pub fn character(&self, group: &Group, beta: RootId) -> Elem {
        let ring = &group.ring;
        let rs = group.system();
        let mut acc = ring.one();
        for (k, &e) in self.eps.iter().enumerate() {
            let m = rs.pairing_simple(beta, k);
            if m != 0 {
                acc = ring.mul(acc, ring.pow(e, m as i64).expect("torus entries are units"));
            }
        }
        acc
    }

    pub fn to_word(&self, group: &Group) -> Word {
        let gens = self
            .eps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != group.ring.one())
            .map(|(k, &e)| Generator::h(group.system().simple(k + 1), e))
            .collect();
        Word::new(gens)
    }
}

/// `t · x_β(ξ) · t⁻¹ = x_β(β(t)·ξ)`; returns the new parameter.
pub fn torus_conjugate(group: &Group, t: &TorusParams, beta: RootId, xi: Elem) -> Elem {
    group.ring.mul(t.character(group, beta), xi)
}

/// `w_α(1) · x_β(ξ) · w_α(1)⁻¹ = x_{w_α(β)}(η ξ)`.
pub fn weyl_conjugate(group: &Group, alpha: RootId, beta: RootId, xi: Elem) -> (RootId, Elem) {
    let rs = group.system();
    let eta = group.constants().weyl_sign(alpha, beta);
    (rs.reflect(alpha, beta), group.ring.scale(eta as i64, xi))
}

/// X-generators of `w_α(ε) = x_α(ε) x_{−α}(−ε⁻¹) x_α(ε)`.
pub fn w_gens(group: &Group, a: RootId, eps: Elem) -> Result<[Generator; 3]> {
    let ring = &group.ring;
    let inv = ring.inv(eps).ok_or_else(|| Error::NotUnit(ring.show(eps)))?;
    let na = group.system().neg(a);
    Ok([Generator::x(a, eps), Generator::x(na, ring.neg(inv)), Generator::x(a, eps)])
}

/// Rewrites `H` and `W` generators into X-generators:
/// `h_α(ε) = w_α(ε) w_α(−1)`.
pub fn expand_generators(group: &Group, word: &Word) -> Result<Word> {
    let ring = &group.ring;
    let mut out = Vec::with_capacity(word.len());
    for g in &word.gens {
        match g.kind {
            GenKind::X => out.push(*g),
            GenKind::W => out.extend(w_gens(group, g.root, g.param)?),
            GenKind::H => {
                out.extend(w_gens(group, g.root, g.param)?);
                out.extend(w_gens(group, g.root, ring.neg(ring.one()))?);
            }
        }
    }
    Ok(Word::new(out))
}

/// Simple reflections `s_{i_1}, …, s_{i_k}` and the fundamental root `β′`
/// with `β = s_{i_1} ⋯ s_{i_k}(β′)`, together with the sign `η` such that
/// `x_β(ξ) = n · x_{β′}(η ξ) · n⁻¹` for `n = w_{i_1}(1) ⋯ w_{i_k}(1)`.
pub fn fundamental_path(group: &Group, beta: RootId) -> (Vec<RootId>, RootId, i64) {
    let rs = group.system();
    let mut path = Vec::new();
    let mut cur = beta;
    let mut eta = 1i64;
    while !rs.is_fundamental(cur) {
        let pos = rs.is_positive(cur);
        let k = (0..rs.rank())
            .find(|&k| {
                let m = rs.pairing_simple(cur, k);
                if pos {
                    m > 0
                } else {
                    m < 0
                }
            })
            .expect("a non-fundamental root has a height-reducing simple reflection");
        let s = rs.simple(k + 1);
        let next = rs.reflect(s, cur);
        // x_cur(ξ) = w_s x_next(η' ξ) w_s⁻¹ where w_s x_next(ζ) w_s⁻¹ = x_cur(η(s,next) ζ)
        eta *= group.constants().weyl_sign(s, next) as i64;
        path.push(s);
        cur = next;
    }
    (path, cur, eta)
}

/// Rewrites a single `x_β(ξ)` as fundamental X-generators.
pub fn expand_root_generator(group: &Group, beta: RootId, xi: Elem) -> Vec<Generator> {
    let ring = &group.ring;
    let rs = group.system();
    let (path, base, eta) = fundamental_path(group, beta);
    let one = ring.one();
    let minus = ring.neg(one);
    let mut out = Vec::with_capacity(6 * path.len() + 1);
    for &s in &path {
        out.extend([Generator::x(s, one), Generator::x(rs.neg(s), minus), Generator::x(s, one)]);
    }
    out.push(Generator::x(base, ring.scale(eta, xi)));
    for &s in path.iter().rev() {
        out.extend([Generator::x(s, minus), Generator::x(rs.neg(s), one), Generator::x(s, minus)]);
    }
    out
}

/// Rewrites a word into X-generators whose roots are in `±Π`.
pub fn expand_to_fundamental(group: &Group, word: &Word) -> Result<Word> {
    let word = expand_generators(group, word)?;
    let mut out = Vec::new();
    for g in &word.gens {
        if group.ring.is_zero(g.param) {
            continue;
        }
        if group.system().is_fundamental(g.root) {
            out.push(*g);
        } else {
            out.extend(expand_root_generator(group, g.root, g.param));
        }
    }
    Ok(Word::new(out))
}

static COLLECTION_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of times any collector left its filtration in this process.
pub fn collection_violations() -> u64 {
    COLLECTION_VIOLATIONS.load(Ordering::Relaxed)
}

/// Ordered product over a [`RootOrder`] under construction.
pub struct Collector<'a> {
    group: &'a Group,
    order: &'a RootOrder,
    vals: Vec<Elem>,
    nonzero: usize,
}

impl<'a> Collector<'a> {
    pub fn new(group: &'a Group, order: &'a RootOrder) -> Collector<'a> {
        Collector { group, order, vals: vec![group.ring.zero(); order.seq().len()], nonzero: 0 }
    }

    fn set(&mut self, p: usize, v: Elem) {
        let ring = &self.group.ring;
        match (ring.is_zero(self.vals[p]), ring.is_zero(v)) {
            (true, false) => self.nonzero += 1,
            (false, true) => self.nonzero -= 1,
            _ => {}
        }
        self.vals[p] = v;
    }

    /// Right-multiplies the current product by `x_β(b)`.
    pub fn mul(&mut self, beta: RootId, b: Elem) -> Result<()> {
        let ring = self.group.ring.clone();
        if ring.is_zero(b) {
            return Ok(());
        }
        let p = self.order.position(beta).ok_or_else(|| {
            Error::UnsupportedRootSet(format!("root {:?} outside the collection set", self.group.system().vector(beta)))
        })?;
        let mut suffix = Vec::new();
        if self.nonzero > 0 {
            for q in p + 1..self.vals.len() {
                let v = self.vals[q];
                if !ring.is_zero(v) {
                    suffix.push((q, v));
                    self.set(q, ring.zero());
                }
            }
        }
        let merged = ring.add(self.vals[p], b);
        self.set(p, merged);
        // u·x_γ(c)·x_β(b) = u·x_β(b)·x_γ(c)·[x_γ(−c), x_β(−b)]
        for (q, c) in suffix {
            let gamma = self.order.seq()[q];
            self.mul(gamma, c)?;
            let terms = self
                .group
                .constants()
                .commutator_expansion(&ring, gamma, beta, ring.neg(c), ring.neg(b))?;
            for (delta, e) in terms {
                match self.order.position(delta) {
                    Some(d) if d > q => self.mul(delta, e)?,
                    _ => {
                        COLLECTION_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
                        return Err(Error::CollectionBound(format!(
                            "commutator term {:?} does not follow {:?}",
                            self.group.system().vector(delta),
                            self.group.system().vector(gamma)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The product as parameters, sorted by root id.
    pub fn finish(self) -> UnipotentParams {
        let ring = &self.group.ring;
        let mut terms: Vec<(RootId, Elem)> = self
            .order
            .seq()
            .iter()
            .zip(&self.vals)
            .filter(|(_, &v)| !ring.is_zero(v))
            .map(|(&a, &v)| (a, v))
            .collect();
        terms.sort_by_key(|t| t.0);
        UnipotentParams { terms }
    }

    /// The product split at `boundary`: positions before it and from it on.
    fn finish_split(self, boundary: impl Fn(RootId) -> bool) -> (UnipotentParams, UnipotentParams) {
        let all = self.finish();
        let (a, b): (Vec<_>, Vec<_>) = all.terms.into_iter().partition(|t| boundary(t.0));
        (UnipotentParams { terms: a }, UnipotentParams { terms: b })
    }
}

/// Collects a product of X-generators over `order`.
pub fn collect_in<I>(group: &Group, order: &RootOrder, gens: I) -> Result<UnipotentParams>
where
    I: IntoIterator<Item = (RootId, Elem)>,
{
    let mut c = Collector::new(group, order);
    for (a, v) in gens {
        c.mul(a, v)?;
    }
    Ok(c.finish())
}

/// Collects a sequence of X-generators whose roots form a special set
/// `set` inside `Φ⁺` or `Φ⁻`.
pub fn collect(group: &Group, set: &[RootId], word: &[(RootId, Elem)]) -> Result<UnipotentParams> {
    let order = RootOrder::for_set(group.system(), set)?;
    collect_in(group, &order, word.iter().copied())
}

/// Collects X-generators into `Φ⁺` (`positive`) or `Φ⁻`.
pub fn collect_signed<I>(group: &Group, positive: bool, gens: I) -> Result<UnipotentParams>
where
    I: IntoIterator<Item = (RootId, Elem)>,
{
    collect_in(group, group.order(positive), gens)
}

/// `u = (Δ-part)·(Σ-part)` for `u` over `Φ^σ` and the parabolic at node `r`.
pub fn split_levi(
    group: &Group,
    u: &UnipotentParams,
    r: usize,
    positive: bool,
) -> Result<(UnipotentParams, UnipotentParams)> {
    let rs = group.system();
    if u.terms.iter().all(|&(a, _)| rs.coeff(a, r) == 0) {
        return Ok((u.clone(), UnipotentParams::default()));
    }
    let mut c = Collector::new(group, group.split_order(r, positive));
    for &(a, v) in &u.terms {
        c.mul(a, v)?;
    }
    Ok(c.finish_split(|a| rs.coeff(a, r) == 0))
}

/// `d · s · d⁻¹` where `d` is the product of `conj` (left to right) and `s`
/// lies in `Σ^ρ`; the result is collected over `Φ^ρ`.
pub fn conj_levi(
    group: &Group,
    conj: &[(RootId, Elem)],
    s: &UnipotentParams,
    positive: bool,
) -> Result<UnipotentParams> {
    let ring = &group.ring;
    let sc = group.constants();
    let mut cur = s.clone();
    for &(gamma, zeta) in conj.iter().rev() {
        if cur.is_empty() {
            break;
        }
        if ring.is_zero(zeta) {
            continue;
        }
        // x_γ(ζ) x_β(ξ) x_γ(−ζ) = [x_γ(ζ), x_β(ξ)] x_β(ξ)
        let mut c = Collector::new(group, group.order(positive));
        for &(beta, xi) in &cur.terms {
            for (delta, e) in sc.commutator_expansion(ring, gamma, beta, zeta, xi)? {
                c.mul(delta, e)?;
            }
            c.mul(beta, xi)?;
        }
        cur = c.finish();
    }
    Ok(cur)
}

/// Same as [`conj_levi`] with the conjugating element given as parameters.
pub fn conj_levi_params(
    group: &Group,
    d: &UnipotentParams,
    s: &UnipotentParams,
    positive: bool,
) -> Result<UnipotentParams> {
    conj_levi(group, &d.terms, s, positive)
}

//! Commutative rings with 1 and the stable-rank-1 witness search.
//!
//! Rings are runtime descriptors (`zmod:<n>`, `gf:<p>`, `prod:<a>,<b>`, `int`)
//! and elements are plain [`Elem`] values interpreted by the ring that made
//! them. Finite rings enumerate their elements in a canonical order: residues
//! `0..n`, and for products the mixed-radix order `(x, y) ↦ x·|S| + y`. The
//! integers are present only to exhibit a ring whose stable rank is not 1.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};

/// Largest ring order accepted for finite rings.
pub const MAX_RING_SIZE: u64 = 1 << 31;

/// Witness search bound used over the integers when none is supplied.
pub const DEFAULT_INT_BOUND: u64 = 1000;

/// A ring element in canonical encoding: a residue for `zmod`/`gf`, a
/// mixed-radix index for products, the integer itself for `int`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) i64);

impl Elem {
    pub fn raw(self) -> i64 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Zmod(u64),
    Gf(u64),
    Prod(Arc<Ring>, Arc<Ring>),
    Int,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `n`, if it exists.
fn inv_mod(a: i64, n: i64) -> Option<i64> {
    let (mut r0, mut r1) = (n, a.rem_euclid(n));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n))
}

fn int_op(v: Option<i64>) -> Elem {
    Elem(v.expect("integer ring overflow"))
}

impl Ring {
    pub fn zmod(n: u64) -> Result<Ring> {
        if !(2..=MAX_RING_SIZE).contains(&n) {
            return Err(Error::InvalidRing(format!("zmod:{n}")));
        }
        Ok(Ring::Zmod(n))
    }

    pub fn gf(p: u64) -> Result<Ring> {
        if p > MAX_RING_SIZE || !is_prime(p) {
            return Err(Error::InvalidRing(format!("gf:{p} (modulus must be prime)")));
        }
        Ok(Ring::Gf(p))
    }

    pub fn product(a: Ring, b: Ring) -> Result<Ring> {
        match (a.size(), b.size()) {
            (Some(x), Some(y)) if x.checked_mul(y).is_some_and(|s| s <= MAX_RING_SIZE) => {
                Ok(Ring::Prod(Arc::new(a), Arc::new(b)))
            }
            _ => Err(Error::InvalidRing(format!(
                "prod:{a},{b} (factors must be finite and the product small)"
            ))),
        }
    }

    /// Number of elements, `None` for the integers.
    pub fn size(&self) -> Option<u64> {
        match self {
            Ring::Zmod(n) | Ring::Gf(n) => Some(*n),
            Ring::Prod(a, b) => Some(a.size()? * b.size()?),
            Ring::Int => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    fn split(&self, e: Elem) -> (Elem, Elem) {
        match self {
            Ring::Prod(_, b) => {
                let nb = b.size().unwrap() as i64;
                (Elem(e.0 / nb), Elem(e.0 % nb))
            }
            _ => unreachable!("split on a non-product ring"),
        }
    }

    fn join(&self, x: Elem, y: Elem) -> Elem {
        match self {
            Ring::Prod(_, b) => Elem(x.0 * b.size().unwrap() as i64 + y.0),
            _ => unreachable!("join on a non-product ring"),
        }
    }

    /// Components of a product-ring element.
    pub fn components(&self, e: Elem) -> Option<(Elem, Elem)> {
        matches!(self, Ring::Prod(..)).then(|| self.split(e))
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn is_zero(&self, e: Elem) -> bool {
        e.0 == 0
    }

    /// Image of an integer under the unique ring map `Z → R`.
    pub fn from_i64(&self, k: i64) -> Elem {
        match self {
            Ring::Zmod(n) | Ring::Gf(n) => Elem(k.rem_euclid(*n as i64)),
            Ring::Prod(a, b) => self.join(a.from_i64(k), b.from_i64(k)),
            Ring::Int => Elem(k),
        }
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match self {
            Ring::Zmod(n) | Ring::Gf(n) => Elem((x.0 + y.0) % *n as i64),
            Ring::Prod(a, b) => {
                let ((x1, x2), (y1, y2)) = (self.split(x), self.split(y));
                self.join(a.add(x1, y1), b.add(x2, y2))
            }
            Ring::Int => int_op(x.0.checked_add(y.0)),
        }
    }

    pub fn neg(&self, x: Elem) -> Elem {
        match self {
            Ring::Zmod(n) | Ring::Gf(n) => Elem((*n as i64 - x.0) % *n as i64),
            Ring::Prod(a, b) => {
                let (x1, x2) = self.split(x);
                self.join(a.neg(x1), b.neg(x2))
            }
            Ring::Int => int_op(x.0.checked_neg()),
        }
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match self {
            Ring::Zmod(n) | Ring::Gf(n) => Elem(x.0 * y.0 % *n as i64),
            Ring::Prod(a, b) => {
                let ((x1, x2), (y1, y2)) = (self.split(x), self.split(y));
                self.join(a.mul(x1, y1), b.mul(x2, y2))
            }
            Ring::Int => int_op(x.0.checked_mul(y.0)),
        }
    }

    /// `k·x` for an integer `k`.
    pub fn scale(&self, k: i64, x: Elem) -> Elem {
        self.mul(self.from_i64(k), x)
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.inv(x).is_some()
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        match self {
            Ring::Zmod(n) | Ring::Gf(n) => inv_mod(x.0, *n as i64).map(Elem),
            Ring::Prod(a, b) => {
                let (x1, x2) = self.split(x);
                Some(self.join(a.inv(x1)?, b.inv(x2)?))
            }
            Ring::Int => (x.0 == 1 || x.0 == -1).then_some(x),
        }
    }

    /// `x^k`; negative exponents require `x` to be a unit.
    pub fn pow(&self, x: Elem, k: i64) -> Option<Elem> {
        let base = if k < 0 { self.inv(x)? } else { x };
        let mut e = k.unsigned_abs();
        let (mut acc, mut sq) = (self.one(), base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        Some(acc)
    }

    /// All elements in canonical order. Panics for the integers.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        let n = self.size().expect("cannot enumerate an infinite ring") as i64;
        (0..n).map(Elem)
    }

    /// The element at position `k` of the canonical order.
    pub fn element(&self, k: u64) -> Option<Elem> {
        (k < self.size()?).then_some(Elem(k as i64))
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&e| self.is_unit(e)).collect()
    }

    /// Checks that `e` is a canonical encoding of an element of this ring.
    pub fn contains(&self, e: Elem) -> bool {
        match self.size() {
            Some(n) => (0..n as i64).contains(&e.0),
            None => true,
        }
    }

    /// Whether `c` and `d` generate the unit ideal. Uses gcds rather than
    /// enumeration; see the exhaustive cross-check in the tests.
    pub fn is_unimodular(&self, c: Elem, d: Elem) -> Result<bool> {
        Ok(match self {
            Ring::Zmod(n) | Ring::Gf(n) => gcd(gcd(c.0, d.0), *n as i64) == 1,
            Ring::Prod(a, b) => {
                let ((c1, c2), (d1, d2)) = (self.split(c), self.split(d));
                a.is_unimodular(c1, d1)? && b.is_unimodular(c2, d2)?
            }
            Ring::Int => gcd(c.0, d.0) == 1,
        })
    }

    /// Smallest `z` in canonical order with `d + c·z` a unit. Over the
    /// integers the search uses [`DEFAULT_INT_BOUND`].
    pub fn stable_rank_witness(&self, c: Elem, d: Elem) -> Result<Option<Elem>> {
        self.stable_rank_witness_bounded(c, d, DEFAULT_INT_BOUND)
    }

    /// As [`Ring::stable_rank_witness`]; `bound` limits `|z|` over the
    /// integers and is ignored for finite rings, which are searched
    /// exhaustively.
    ///
    /// Over the integers a failed search is followed by an exact congruence
    /// test: if no `z` at all solves `d + c·z = ±1` the answer is `None`,
    /// otherwise the search could not certify and `SearchBoundExceeded` is
    /// returned.
    pub fn stable_rank_witness_bounded(&self, c: Elem, d: Elem, bound: u64) -> Result<Option<Elem>> {
        if self.is_finite() {
            return Ok(self
                .elements()
                .find(|&z| self.is_unit(self.add(d, self.mul(c, z)))));
        }
        let ok = |z: i64| {
            c.0.checked_mul(z)
                .and_then(|cz| cz.checked_add(d.0))
                .is_some_and(|v| v == 1 || v == -1)
        };
        if ok(0) {
            return Ok(Some(Elem(0)));
        }
        let bound = bound.min(i64::MAX as u64) as i64;
        for k in 1..=bound {
            for z in [k, -k] {
                if ok(z) {
                    return Ok(Some(Elem(z)));
                }
            }
        }
        let solvable = c.0 != 0 && [1i64, -1].iter().any(|t| (t - d.0) % c.0 == 0);
        if solvable {
            Err(Error::SearchBoundExceeded(bound as u64))
        } else {
            Ok(None)
        }
    }

    /// Whether every unimodular pair has a stable-rank witness.
    pub fn check_sr1(&self) -> Result<bool> {
        if !self.is_finite() {
            return Err(Error::UnsupportedRing {
                ring: self.to_string(),
                reason: "stable rank check needs a finite ring".into(),
            });
        }
        for c in self.elements() {
            for d in self.elements() {
                if self.is_unimodular(c, d)? && self.stable_rank_witness(c, d)?.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// JSON encoding: decimal string, nested arrays for products.
    pub fn encode(&self, e: Elem) -> Value {
        match self {
            Ring::Prod(a, b) => {
                let (x, y) = self.split(e);
                Value::Array(vec![a.encode(x), b.encode(y)])
            }
            _ => Value::String(e.0.to_string()),
        }
    }

    /// Inverse of [`Ring::encode`]. Integers (as strings or JSON numbers) are
    /// reduced into canonical form.
    pub fn decode(&self, v: &Value) -> Result<Elem> {
        match (self, v) {
            (Ring::Prod(a, b), Value::Array(items)) if items.len() == 2 => {
                Ok(self.join(a.decode(&items[0])?, b.decode(&items[1])?))
            }
            (Ring::Prod(..), _) => Err(Error::Parse(format!("expected a pair for {self}, got {v}"))),
            (_, Value::String(s)) => s
                .trim()
                .parse::<i64>()
                .map(|k| self.from_i64(k))
                .map_err(|_| Error::Parse(format!("bad ring element `{s}`"))),
            (_, Value::Number(n)) => n
                .as_i64()
                .map(|k| self.from_i64(k))
                .ok_or_else(|| Error::Parse(format!("bad ring element {n}"))),
            _ => Err(Error::Parse(format!("bad ring element {v}"))),
        }
    }

    /// Human-readable element, e.g. `4` or `(1,2)`.
    pub fn show(&self, e: Elem) -> String {
        match self {
            Ring::Prod(a, b) => {
                let (x, y) = self.split(e);
                format!("({},{})", a.show(x), b.show(y))
            }
            _ => e.0.to_string(),
        }
    }

    fn parse_prefix(s: &str) -> Result<(Ring, &str)> {
        let bad = || Error::InvalidRing(s.to_string());
        let number = |rest: &str| -> Result<(u64, usize)> {
            let len = rest.bytes().take_while(u8::is_ascii_digit).count();
            let n = rest[..len].parse::<u64>().map_err(|_| bad())?;
            Ok((n, len))
        };
        if let Some(rest) = s.strip_prefix("zmod:") {
            let (n, len) = number(rest)?;
            Ok((Ring::zmod(n)?, &rest[len..]))
        } else if let Some(rest) = s.strip_prefix("gf:") {
            let (p, len) = number(rest)?;
            Ok((Ring::gf(p)?, &rest[len..]))
        } else if let Some(rest) = s.strip_prefix("prod:") {
            let (a, rest) = Ring::parse_prefix(rest)?;
            let rest = rest.strip_prefix(',').ok_or_else(bad)?;
            let (b, rest) = Ring::parse_prefix(rest)?;
            Ok((Ring::product(a, b)?, rest))
        } else if let Some(rest) = s.strip_prefix("int") {
            Ok((Ring::Int, rest))
        } else {
            Err(bad())
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        let s = s.trim();
        match Ring::parse_prefix(s)? {
            (ring, "") => Ok(ring),
            _ => Err(Error::InvalidRing(s.to_string())),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Zmod(n) => write!(f, "zmod:{n}"),
            Ring::Gf(p) => write!(f, "gf:{p}"),
            Ring::Prod(a, b) => write!(f, "prod:{a},{b}"),
            Ring::Int => write!(f, "int"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ring {
        s.parse().unwrap()
    }

    /// Ideal membership by enumeration: is there (s, t) with cs + dt = 1?
    fn unimodular_brute(ring: &Ring, c: Elem, d: Elem) -> bool {
        let one = ring.one();
        ring.elements().any(|s| {
            ring.elements()
                .any(|t| ring.add(ring.mul(c, s), ring.mul(d, t)) == one)
        })
    }

    #[test]
    fn descriptor_round_trip() {
        for s in ["zmod:6", "gf:7", "prod:zmod:2,zmod:3", "prod:prod:zmod:2,gf:3,zmod:4", "int"] {
            assert_eq!(r(s).to_string(), s);
        }
        for bad in ["zmod:1", "gf:6", "zmod:", "prod:zmod:2", "prod:int,zmod:3", "zmod:6x", "q"] {
            assert!(bad.parse::<Ring>().is_err(), "{bad}");
        }
    }

    #[test]
    fn ring_axioms_on_small_rings() {
        for s in ["zmod:6", "zmod:8", "gf:5", "prod:zmod:2,zmod:3", "prod:zmod:4,gf:3"] {
            let ring = r(s);
            let els: Vec<_> = ring.elements().collect();
            for &a in &els {
                assert_eq!(ring.add(a, ring.zero()), a);
                assert_eq!(ring.mul(a, ring.one()), a);
                assert_eq!(ring.add(a, ring.neg(a)), ring.zero());
                for &b in &els {
                    assert_eq!(ring.add(a, b), ring.add(b, a));
                    assert_eq!(ring.mul(a, b), ring.mul(b, a));
                    for &c in &els {
                        assert_eq!(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c)));
                        assert_eq!(ring.add(ring.add(a, b), c), ring.add(a, ring.add(b, c)));
                        assert_eq!(
                            ring.mul(a, ring.add(b, c)),
                            ring.add(ring.mul(a, b), ring.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn units_and_inverses_match_enumeration() {
        for s in ["zmod:12", "gf:7", "prod:zmod:4,zmod:9", "zmod:16"] {
            let ring = r(s);
            for x in ring.elements() {
                let brute = ring.elements().find(|&y| ring.mul(x, y) == ring.one());
                assert_eq!(ring.is_unit(x), brute.is_some(), "{s} {x:?}");
                if let Some(y) = ring.inv(x) {
                    assert_eq!(ring.mul(x, y), ring.one());
                }
            }
        }
    }

    #[test]
    fn unimodularity_matches_enumeration() {
        for s in ["zmod:12", "zmod:4", "prod:zmod:2,zmod:6", "gf:5"] {
            let ring = r(s);
            for c in ring.elements() {
                for d in ring.elements() {
                    assert_eq!(ring.is_unimodular(c, d).unwrap(), unimodular_brute(&ring, c, d));
                }
            }
        }
    }

    #[test]
    fn unimodular_examples() {
        let z6 = r("zmod:6");
        assert!(z6.is_unimodular(Elem(2), Elem(3)).unwrap());
        assert!(z6.is_unimodular(z6.one(), z6.zero()).unwrap());
        let z4 = r("zmod:4");
        assert!(!z4.is_unimodular(Elem(2), Elem(2)).unwrap());
        assert!(Ring::Int.is_unimodular(Elem(5), Elem(3)).unwrap());
    }

    #[test]
    fn witness_examples() {
        let z6 = r("zmod:6");
        // brute force: 3 + 2z for z = 0..5 is 3,5,1,3,5,1; the first unit is at z = 1
        assert_eq!(z6.stable_rank_witness(Elem(2), Elem(3)).unwrap(), Some(Elem(1)));
        assert_eq!(z6.stable_rank_witness(Elem(0), Elem(1)).unwrap(), Some(Elem(0)));
        // 2 + 5z = ±1 forces 5 | -1 or 5 | -3
        assert_eq!(Ring::Int.stable_rank_witness(Elem(5), Elem(2)).unwrap(), None);
        assert_eq!(Ring::Int.stable_rank_witness(Elem(5), Elem(3)).unwrap(), None);
        assert_eq!(Ring::Int.stable_rank_witness(Elem(2), Elem(3)).unwrap(), Some(Elem(-1)));
        // -6 + 7z = 1 at z = 1, outside a zero bound
        assert_eq!(
            Ring::Int.stable_rank_witness_bounded(Elem(7), Elem(-6), 0),
            Err(Error::SearchBoundExceeded(0))
        );
    }

    #[test]
    fn witness_is_deterministic_and_sound() {
        let ring = r("prod:zmod:4,zmod:9");
        for c in ring.elements().step_by(5) {
            for d in ring.elements().step_by(7) {
                let z = ring.stable_rank_witness(c, d).unwrap();
                assert_eq!(z, ring.stable_rank_witness(c, d).unwrap());
                if let Some(z) = z {
                    assert!(ring.is_unit(ring.add(d, ring.mul(c, z))));
                }
            }
        }
    }

    #[test]
    fn sr1_examples() {
        assert!(r("zmod:12").check_sr1().unwrap());
        assert!(r("gf:7").check_sr1().unwrap());
        assert!(r("prod:zmod:2,zmod:3").check_sr1().unwrap());
        assert!(matches!(Ring::Int.check_sr1(), Err(Error::UnsupportedRing { .. })));
    }

    #[test]
    fn element_json_encoding() {
        let ring = r("prod:zmod:4,prod:zmod:2,zmod:3");
        for e in ring.elements() {
            let v = ring.encode(e);
            assert_eq!(ring.decode(&v).unwrap(), e);
        }
        let z6 = r("zmod:6");
        assert_eq!(z6.encode(Elem(4)), Value::String("4".into()));
        assert_eq!(z6.decode(&Value::String("-1".into())).unwrap(), Elem(5));
        assert!(z6.decode(&serde_json::json!(["1", "2"])).is_err());
    }

    #[test]
    fn pow_with_negative_exponent() {
        let f7 = r("gf:7");
        assert_eq!(f7.pow(Elem(3), -1), Some(Elem(5)));
        assert_eq!(f7.pow(Elem(3), 6), Some(Elem(1)));
        assert_eq!(r("zmod:4").pow(Elem(2), -1), None);
    }
}

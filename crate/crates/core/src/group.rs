//! A root system, its structure constants and a ring, bundled with the
//! root orders used by the collector.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::constants::StructureConstants;
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::roots::{CartanType, RootId, RootSystem};

/// A total order on a special set of roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOrder {
    seq: Vec<RootId>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl RootOrder {
    /// Orders `seq` as given. Fails with `NotSpecial` if it contains a pair
    /// of opposite roots.
    pub fn new(rs: &RootSystem, seq: Vec<RootId>) -> Result<RootOrder> {
        let mut pos = vec![ABSENT; rs.num_roots()];
        for (k, &a) in seq.iter().enumerate() {
            pos[a.index()] = k as u32;
        }
        if seq.iter().any(|&a| pos[rs.neg(a).index()] != ABSENT) {
            return Err(Error::NotSpecial);
        }
        Ok(RootOrder { seq, pos })
    }

    /// Canonical order on a special set contained in `Φ⁺` or in `Φ⁻`.
    pub fn for_set(rs: &RootSystem, set: &[RootId]) -> Result<RootOrder> {
        let mut seq = set.to_vec();
        seq.sort();
        seq.dedup();
        let order = RootOrder::new(rs, seq)?;
        let signs: Vec<bool> = order.seq.iter().map(|&a| rs.is_positive(a)).collect();
        if signs.iter().any(|&s| s != signs[0]) {
            return Err(Error::UnsupportedRootSet(
                "special sets must lie in the positive or the negative roots".into(),
            ));
        }
        Ok(order)
    }

    pub fn seq(&self) -> &[RootId] {
        &self.seq
    }

    pub fn position(&self, a: RootId) -> Option<usize> {
        let p = self.pos[a.index()];
        (p != ABSENT).then_some(p as usize)
    }

    pub fn contains(&self, a: RootId) -> bool {
        self.pos[a.index()] != ABSENT
    }
}

/// Root-system data shared by every ring.
#[derive(Debug)]
pub struct SystemData {
    pub system: Arc<RootSystem>,
    pub constants: Arc<StructureConstants>,
    positive: RootOrder,
    negative: RootOrder,
    /// `split[2(r−1) + s]`: roots of sign `s` (0 = +) with `m_r = 0` first.
    split: Vec<RootOrder>,
}

impl SystemData {
    fn build(ty: CartanType) -> SystemData {
        let system = Arc::new(RootSystem::build(ty));
        let constants = Arc::new(StructureConstants::compute(system.clone()));
        let rs = &*system;
        let positive = RootOrder::new(rs, rs.positive_roots().collect()).unwrap();
        let negative = RootOrder::new(rs, rs.negative_roots().collect()).unwrap();
        let mut split = Vec::new();
        for r in 1..=rs.rank() {
            for base in [&positive, &negative] {
                let (mut levi, sigma): (Vec<RootId>, Vec<RootId>) =
                    base.seq().iter().partition(|&&a| rs.coeff(a, r) == 0);
                levi.extend(sigma);
                split.push(RootOrder::new(rs, levi).unwrap());
            }
        }
        SystemData { system, constants, positive, negative, split }
    }

    /// Cached data for a Cartan type; built once per process.
    pub fn get(ty: CartanType) -> Arc<SystemData> {
        static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<SystemData>>>> = OnceLock::new();
        let key = ty;
        let cache = CACHE.get_or_init(Default::default);
        if let Some(d) = cache.lock().unwrap().get(&key) {
            return d.clone();
        }
        let data = Arc::new(SystemData::build(ty));
        cache.lock().unwrap().entry(key).or_insert(data).clone()
    }
}

/// The elementary group `E(Φ, R)` as a computational context.
#[derive(Clone, Debug)]
pub struct Group {
    data: Arc<SystemData>,
    pub ring: Ring,
    /// Search bound for stable-rank witnesses over the integers. Decomposition
    /// over an infinite ring is refused when this is `None`.
    pub witness_bound: Option<u64>,
}

impl Group {
    pub fn new(ty: CartanType, ring: Ring) -> Group {
        Group { data: SystemData::get(ty), ring, witness_bound: None }
    }

    pub fn with_witness_bound(mut self, bound: Option<u64>) -> Group {
        self.witness_bound = bound;
        self
    }

    pub fn system(&self) -> &RootSystem {
        &self.data.system
    }

    pub fn system_arc(&self) -> &Arc<RootSystem> {
        &self.data.system
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.data.constants
    }

    pub fn rank(&self) -> usize {
        self.data.system.rank()
    }

    /// Canonical order on `Φ⁺` (`positive = true`) or `Φ⁻`.
    pub fn order(&self, positive: bool) -> &RootOrder {
        if positive {
            &self.data.positive
        } else {
            &self.data.negative
        }
    }

    /// Order on `Φ^σ` putting roots with `m_r = 0` before the rest.
    pub fn split_order(&self, r: usize, positive: bool) -> &RootOrder {
        &self.data.split[2 * (r - 1) + usize::from(!positive)]
    }
}

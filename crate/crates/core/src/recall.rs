//! Bounded memory of opponent personalities and the eviction policies that
//! decide whom to forget.

use crate::payoff::Personality;
use crate::rng::DrawSource;
use crate::strategy::{Majority, Strategy};

const EMPTY: u32 = u32::MAX;

/// Bounded store mapping opponent index to recorded personality.
///
/// Records are kept in two dense lists, one per personality, so that a
/// uniformly random record of either type can be drawn in constant time.
/// `slots[opponent]` holds `position << 1 | is_defector` or `EMPTY`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recall {
    capacity: u32,
    slots: Vec<u32>,
    cooperators: Vec<u32>,
    defectors: Vec<u32>,
}

/// What `record_encounter` did with an observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordEffect {
    /// Opponent was already recorded.
    Known,
    /// Zero capacity; nothing can be stored.
    NoCapacity,
    Inserted,
    /// The victim was forgotten to make room.
    Replaced { victim: u32 },
    /// Full recall and the strategy allows no victim; observation dropped.
    Discarded,
}

impl Recall {
    /// Empty recall for a player among `population` players.
    pub fn new(capacity: u32, population: u32) -> Self {
        let slots = if capacity == 0 {
            Vec::new()
        } else {
            vec![EMPTY; population as usize]
        };
        Recall {
            capacity,
            slots,
            cooperators: Vec::with_capacity(capacity as usize),
            defectors: Vec::with_capacity(capacity as usize),
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.cooperators.len() + self.defectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() >= self.capacity as usize
    }

    pub fn cooperator_count(&self) -> usize {
        self.cooperators.len()
    }

    pub fn defector_count(&self) -> usize {
        self.defectors.len()
    }

    #[inline]
    pub fn get(&self, opponent: u32) -> Option<Personality> {
        match self.slots.get(opponent as usize) {
            Some(&slot) if slot != EMPTY => Some(if slot & 1 == 1 {
                Personality::Defector
            } else {
                Personality::Cooperator
            }),
            _ => None,
        }
    }

    #[inline]
    pub fn knows_defector(&self, opponent: u32) -> bool {
        matches!(self.slots.get(opponent as usize), Some(&slot) if slot != EMPTY && slot & 1 == 1)
    }

    /// Records sorted by opponent index.
    pub fn entries(&self) -> Vec<(u32, Personality)> {
        let mut out: Vec<_> = self
            .cooperators
            .iter()
            .map(|&o| (o, Personality::Cooperator))
            .chain(self.defectors.iter().map(|&o| (o, Personality::Defector)))
            .collect();
        out.sort_unstable();
        out
    }

    fn list(&self, personality: Personality) -> &[u32] {
        match personality {
            Personality::Cooperator => &self.cooperators,
            Personality::Defector => &self.defectors,
        }
    }

    fn insert(&mut self, opponent: u32, personality: Personality) {
        debug_assert!(!self.is_full());
        debug_assert_eq!(self.slots[opponent as usize], EMPTY);
        let list = match personality {
            Personality::Cooperator => &mut self.cooperators,
            Personality::Defector => &mut self.defectors,
        };
        self.slots[opponent as usize] = (list.len() as u32) << 1 | personality.is_defector() as u32;
        list.push(opponent);
    }

    fn remove(&mut self, opponent: u32) {
        let slot = self.slots[opponent as usize];
        debug_assert_ne!(slot, EMPTY);
        let is_defector = slot & 1;
        let pos = (slot >> 1) as usize;
        let list = if is_defector == 1 {
            &mut self.defectors
        } else {
            &mut self.cooperators
        };
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.slots[moved as usize] = (pos as u32) << 1 | is_defector;
        }
        self.slots[opponent as usize] = EMPTY;
    }

    /// Test and oracle helper: builds a recall holding exactly `entries`.
    pub fn from_entries(capacity: u32, population: u32, entries: &[(u32, Personality)]) -> Self {
        assert!(entries.len() <= capacity as usize, "more entries than capacity");
        let mut recall = Recall::new(capacity, population);
        for &(opponent, personality) in entries {
            assert!(recall.get(opponent).is_none(), "duplicate opponent {opponent}");
            recall.insert(opponent, personality);
        }
        recall
    }
}

#[inline]
fn pick<R: DrawSource>(list: &[u32], rng: &mut R) -> Option<u32> {
    match list.len() {
        0 => None,
        1 => Some(list[0]),
        len => Some(list[rng.below(len as u32) as usize]),
    }
}

/// Chooses the record to forget from a full recall, or `None` when the
/// strategy forbids every stored record.
///
/// Panics if the recall is not full or has zero capacity.
pub fn select_eviction<R: DrawSource>(
    recall: &Recall,
    strategy: Strategy,
    majority: Majority,
    rng: &mut R,
) -> Option<u32> {
    assert!(
        recall.capacity > 0 && recall.is_full(),
        "eviction requested on a recall that is not full"
    );
    let forget = |personality: Personality, rng: &mut R| pick(recall.list(personality), rng);
    match strategy {
        Strategy::Foc => forget(Personality::Cooperator, rng),
        Strategy::Fod => forget(Personality::Defector, rng),
        Strategy::Far => {
            let cooperators = recall.cooperators.len() as u32;
            let k = rng.below(cooperators + recall.defectors.len() as u32);
            Some(if k < cooperators {
                recall.cooperators[k as usize]
            } else {
                recall.defectors[(k - cooperators) as usize]
            })
        }
        Strategy::Feq => {
            let (first, second) = if rng.coin() {
                (Personality::Defector, Personality::Cooperator)
            } else {
                (Personality::Cooperator, Personality::Defector)
            };
            forget(first, rng).or_else(|| forget(second, rng))
        }
        Strategy::Fmj => {
            let delegate = match majority {
                Majority::Cooperators => Strategy::Foc,
                Majority::Defectors => Strategy::Fod,
                Majority::Tie => Strategy::Far,
            };
            select_eviction(recall, delegate, majority, rng)
        }
    }
}

/// Stores the observation that `opponent` has `personality`, evicting per
/// `strategy` when the recall is full.
pub fn record_encounter<R: DrawSource>(
    recall: &mut Recall,
    opponent: u32,
    personality: Personality,
    strategy: Strategy,
    majority: Majority,
    rng: &mut R,
) -> RecordEffect {
    if recall.capacity == 0 {
        return RecordEffect::NoCapacity;
    }
    if recall.get(opponent).is_some() {
        return RecordEffect::Known;
    }
    if !recall.is_full() {
        recall.insert(opponent, personality);
        return RecordEffect::Inserted;
    }
    match select_eviction(recall, strategy, majority, rng) {
        Some(victim) => {
            recall.remove(victim);
            recall.insert(opponent, personality);
            RecordEffect::Replaced { victim }
        }
        None => RecordEffect::Discarded,
    }
}

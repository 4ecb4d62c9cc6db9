use rustc_hash::FxHashMap;

/// Largest torus for which per-site tables are stored densely.
const DENSE_LIMIT: u64 = 1 << 24;

const ABSENT: u32 = u32::MAX;

/// Map from torus site index to a small payload (a position along a walk).
///
/// Dense array for desk-scale tori, hash map beyond.
#[derive(Clone, Debug)]
pub(crate) enum SiteTable {
    Dense(Vec<u32>),
    Sparse(FxHashMap<u64, u32>),
}

impl SiteTable {
    pub(crate) fn new(volume: u64) -> Self {
        if volume <= DENSE_LIMIT {
            SiteTable::Dense(vec![ABSENT; volume as usize])
        } else {
            SiteTable::Sparse(FxHashMap::default())
        }
    }

    #[inline]
    pub(crate) fn get(&self, site: u64) -> Option<u32> {
        match self {
            SiteTable::Dense(v) => Some(v[site as usize]).filter(|&p| p != ABSENT),
            SiteTable::Sparse(m) => m.get(&site).copied(),
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, site: u64, value: u32) {
        debug_assert_ne!(value, ABSENT);
        match self {
            SiteTable::Dense(v) => v[site as usize] = value,
            SiteTable::Sparse(m) => {
                m.insert(site, value);
            }
        }
    }

    #[inline]
    pub(crate) fn remove(&mut self, site: u64) {
        match self {
            SiteTable::Dense(v) => v[site as usize] = ABSENT,
            SiteTable::Sparse(m) => {
                m.remove(&site);
            }
        }
    }
}

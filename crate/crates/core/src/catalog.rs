//! Discrete types `(m, n)` and cone-direction configurations up to the
//! rigid motions that identify them.
//!
//! The identifications used are the global up/down flip (reflection in a
//! horizontal plane), reversing the order of the cones on both axes at once
//! (rotation by `pi` about the `x3`-axis), and, when `m = n`, exchanging the
//! two axes with both lists reversed (rotation by `pi` about a horizontal
//! line). This group gives 6 / 6 / 5 classes for four cones; it is a
//! reconstruction chosen to match those counts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::weierstrass::{Direction, SurfaceParams};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeConfig {
    pub m: usize,
    pub n: usize,
    pub dirs_pos: Vec<Direction>,
    pub dirs_neg: Vec<Direction>,
}

impl ConeConfig {
    pub fn new(dirs_pos: Vec<Direction>, dirs_neg: Vec<Direction>) -> Self {
        Self {
            m: dirs_pos.len(),
            n: dirs_neg.len(),
            dirs_pos,
            dirs_neg,
        }
    }

    fn key(&self) -> Vec<Direction> {
        self.dirs_pos
            .iter()
            .chain(&self.dirs_neg)
            .copied()
            .collect()
    }

    fn flipped(&self) -> Self {
        Self::new(
            self.dirs_pos.iter().map(|d| d.flip()).collect(),
            self.dirs_neg.iter().map(|d| d.flip()).collect(),
        )
    }

    fn reversed(&self) -> Self {
        Self::new(
            self.dirs_pos.iter().rev().copied().collect(),
            self.dirs_neg.iter().rev().copied().collect(),
        )
    }

    fn axes_swapped(&self) -> Self {
        Self::new(
            self.dirs_neg.iter().rev().copied().collect(),
            self.dirs_pos.iter().rev().copied().collect(),
        )
    }

    /// All configurations identified with this one.
    pub fn orbit(&self) -> BTreeSet<ConeConfig> {
        let start = if self.n > self.m {
            self.axes_swapped()
        } else {
            self.clone()
        };
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            if !seen.insert(c.clone()) {
                continue;
            }
            queue.push_back(c.flipped());
            queue.push_back(c.reversed());
            if c.m == c.n {
                queue.push_back(c.axes_swapped());
            }
        }
        seen
    }

    /// Smallest member of the orbit, ordering `up` before `down` and the
    /// positive axis first; in particular the first positive cone is up.
    pub fn canonicalize(&self) -> Self {
        self.orbit()
            .into_iter()
            .min_by(|a, b| a.key().cmp(&b.key()))
            .expect("orbit contains the configuration itself")
    }

    /// Evenly spaced parameters with `a_1 = 1` realizing these directions
    /// (`up` on the positive axis is `alpha = -1`, on the negative axis
    /// `beta = +1`).
    pub fn instantiate(&self, spacing: f64) -> Result<SurfaceParams> {
        let a = (0..2 * self.m).map(|j| 1.0 + j as f64 * spacing).collect();
        let b = (0..2 * self.n)
            .map(|k| -(1.0 + k as f64 * spacing))
            .collect();
        let alpha = self
            .dirs_pos
            .iter()
            .map(|d| if *d == Direction::Up { -1 } else { 1 })
            .collect();
        let beta = self
            .dirs_neg
            .iter()
            .map(|d| if *d == Direction::Up { 1 } else { -1 })
            .collect();
        SurfaceParams::new(a, b, alpha, beta)
    }

    /// Directions of an existing parameter set under the same convention.
    pub fn of_params(params: &SurfaceParams) -> Self {
        let total = params.m() + params.n();
        let dirs: Vec<Direction> = (0..total).map(|k| params.predicted_direction(k)).collect();
        Self::new(dirs[..params.m()].to_vec(), dirs[params.m()..].to_vec())
    }
}

/// All `(m, n)` with `m + n = total` and `m >= n >= 0`, `m >= 1`.
pub fn enumerate_types(total: usize) -> Vec<(usize, usize)> {
    (0..=total / 2)
        .map(|n| (total - n, n))
        .filter(|&(m, _)| m >= 1)
        .collect()
}

/// Every configuration of type `(m, n)` whose first positive cone is up.
pub fn raw_configs(m: usize, n: usize) -> Vec<ConeConfig> {
    let free = m + n - 1;
    (0..1usize << free)
        .map(|bits| {
            let dirs: Vec<Direction> = std::iter::once(Direction::Up)
                .chain((0..free).map(|i| {
                    if bits >> (free - 1 - i) & 1 == 1 {
                        Direction::Down
                    } else {
                        Direction::Up
                    }
                }))
                .collect();
            ConeConfig::new(dirs[..m].to_vec(), dirs[m..].to_vec())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogClass {
    #[serde(flatten)]
    pub config: ConeConfig,
    /// Number of raw configurations (first positive cone up) in the class.
    pub class_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogType {
    pub m: usize,
    pub n: usize,
    pub raw_configurations: usize,
    pub classes: Vec<CatalogClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub cones: usize,
    pub types: Vec<CatalogType>,
    /// Class count per type, keyed `"m,n"`.
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
}

/// Canonical classes of type `(m, n)`, in increasing canonical order.
pub fn classes(m: usize, n: usize) -> Vec<CatalogClass> {
    let mut sizes: BTreeMap<Vec<Direction>, (ConeConfig, usize)> = BTreeMap::new();
    for c in raw_configs(m, n) {
        let canon = c.canonicalize();
        sizes.entry(canon.key()).or_insert((canon, 0)).1 += 1;
    }
    sizes
        .into_values()
        .map(|(config, class_size)| CatalogClass { config, class_size })
        .collect()
}

pub fn catalog(cones: usize) -> Catalog {
    let types: Vec<CatalogType> = enumerate_types(cones)
        .into_iter()
        .map(|(m, n)| CatalogType {
            m,
            n,
            raw_configurations: 1 << (m + n - 1),
            classes: classes(m, n),
        })
        .collect();
    let counts: BTreeMap<String, usize> = types
        .iter()
        .map(|t| (format!("{},{}", t.m, t.n), t.classes.len()))
        .collect();
    let total = counts.values().sum();
    Catalog {
        cones,
        types,
        counts,
        total,
    }
}

//! Behavior-space novelty.
//!
//! A point's novelty is the mean Euclidean distance to its `k` nearest
//! neighbours among the current cohort and a fixed-capacity archive. The
//! archive fills up first; once full, a point enters only by strictly
//! exceeding the smallest stored emergence score, replacing that entry.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NoveltyError {
    #[error("behavior dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("archive capacity must be positive")]
    ZeroCapacity,
    #[error("archive restore holds {found} entries, capacity is {capacity}")]
    OverCapacity { capacity: usize, found: usize },
}

/// A point in behavior space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BehaviorPoint(pub Vec<f64>);

impl BehaviorPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn distance(&self, other: &BehaviorPoint) -> Result<f64, NoveltyError> {
        if self.dim() != other.dim() {
            return Err(NoveltyError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(euclidean(&self.0, &other.0))
    }
}

impl From<Vec<f64>> for BehaviorPoint {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoveltyParams {
    /// Number of nearest neighbours averaged.
    pub k: usize,
}

impl Default for NoveltyParams {
    fn default() -> Self {
        Self { k: 15 }
    }
}

/// An archived point with the novelty it had when it was inserted.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub point: BehaviorPoint,
    pub emergence_score: f64,
    /// Insertion sequence number; breaks eviction ties toward older entries.
    pub inserted: u64,
}

/// Fixed-capacity archive of historically novel points.
#[derive(Debug, Clone, PartialEq)]
pub struct NoveltyArchive {
    capacity: usize,
    entries: Vec<ArchiveEntry>,
    next_seq: u64,
}

impl NoveltyArchive {
    pub const DEFAULT_CAPACITY: usize = 1000;

    pub fn new(capacity: usize) -> Result<Self, NoveltyError> {
        if capacity == 0 {
            return Err(NoveltyError::ZeroCapacity);
        }
        Ok(Self {
            capacity,
            entries: Vec::with_capacity(capacity.min(4096)),
            next_seq: 0,
        })
    }

    /// Rebuilds an archive from `(point, emergence score)` pairs listed in
    /// insertion order.
    pub fn restore(
        capacity: usize,
        entries: impl IntoIterator<Item = (BehaviorPoint, f64)>,
    ) -> Result<Self, NoveltyError> {
        let mut a = Self::new(capacity)?;
        for (point, score) in entries {
            if a.entries.len() == capacity {
                return Err(NoveltyError::OverCapacity {
                    capacity,
                    found: capacity + 1,
                });
            }
            if let Some(first) = a.entries.first() {
                if first.point.dim() != point.dim() {
                    return Err(NoveltyError::DimensionMismatch {
                        expected: first.point.dim(),
                        found: point.dim(),
                    });
                }
            }
            a.push(point, score);
        }
        Ok(a)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    /// Entries in storage order (replacements reuse the evicted slot).
    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    /// Entries sorted by insertion sequence.
    pub fn entries_by_insertion(&self) -> Vec<&ArchiveEntry> {
        let mut v: Vec<&ArchiveEntry> = self.entries.iter().collect();
        v.sort_by_key(|e| e.inserted);
        v
    }

    pub fn min_score(&self) -> Option<f64> {
        self.min_slot().map(|i| self.entries[i].emergence_score)
    }

    fn min_slot(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, e) in self.entries.iter().enumerate() {
            best = match best {
                Some(b) => {
                    let cur = &self.entries[b];
                    if e.emergence_score < cur.emergence_score
                        || (e.emergence_score == cur.emergence_score && e.inserted < cur.inserted)
                    {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
                None => Some(i),
            };
        }
        best
    }

    fn push(&mut self, point: BehaviorPoint, score: f64) {
        self.entries.push(ArchiveEntry {
            point,
            emergence_score: score,
            inserted: self.next_seq,
        });
        self.next_seq += 1;
    }

    /// Offers a point with its novelty score. Returns whether it was stored.
    pub fn offer(&mut self, point: BehaviorPoint, score: f64) -> bool {
        if !self.is_full() {
            self.push(point, score);
            return true;
        }
        let slot = match self.min_slot() {
            Some(s) => s,
            None => return false,
        };
        if score > self.entries[slot].emergence_score {
            self.entries[slot] = ArchiveEntry {
                point,
                emergence_score: score,
                inserted: self.next_seq,
            };
            self.next_seq += 1;
            true
        } else {
            false
        }
    }

    pub fn points(&self) -> impl Iterator<Item = &BehaviorPoint> {
        self.entries.iter().map(|e| &e.point)
    }
}

/// Free-function form of [`NoveltyArchive::offer`].
pub fn archive_offer(archive: &mut NoveltyArchive, point: BehaviorPoint, score: f64) -> bool {
    archive.offer(point, score)
}

/// Mean of the `min(k, n)` smallest distances from `point` to the `n`
/// neighbours; 0 without neighbours.
fn knn_mean<'a>(
    point: &BehaviorPoint,
    neighbours: impl Iterator<Item = &'a BehaviorPoint>,
    k: usize,
    scratch: &mut Vec<f64>,
) -> Result<f64, NoveltyError> {
    scratch.clear();
    for n in neighbours {
        if n.dim() != point.dim() {
            return Err(NoveltyError::DimensionMismatch {
                expected: point.dim(),
                found: n.dim(),
            });
        }
        scratch.push(euclidean(&point.0, &n.0));
    }
    let m = k.min(scratch.len());
    if m == 0 {
        return Ok(0.0);
    }
    if m < scratch.len() {
        scratch.select_nth_unstable_by(m - 1, f64::total_cmp);
    }
    let nearest = &mut scratch[..m];
    // fixed summation order, independent of neighbour order
    nearest.sort_unstable_by(f64::total_cmp);
    Ok(nearest.iter().sum::<f64>() / m as f64)
}

/// Novelty of `point` against `cohort` and the archive. The caller excludes
/// `point` itself from `cohort`.
pub fn knn_novelty(
    point: &BehaviorPoint,
    cohort: &[BehaviorPoint],
    archive: &NoveltyArchive,
    params: &NoveltyParams,
) -> Result<f64, NoveltyError> {
    let mut scratch = Vec::with_capacity(cohort.len() + archive.len());
    knn_mean(
        point,
        cohort.iter().chain(archive.points()),
        params.k,
        &mut scratch,
    )
}

/// Scores a whole generation, then offers every point to the archive.
///
/// Each individual is scored against the rest of the population plus the
/// archive as it stood before this call, so scores do not depend on the
/// order of `behaviors`. Offers follow population order.
pub fn generation_update(
    behaviors: &[BehaviorPoint],
    archive: &mut NoveltyArchive,
    params: &NoveltyParams,
) -> Result<Vec<f64>, NoveltyError> {
    let mut scratch = Vec::with_capacity(behaviors.len() + archive.len());
    let mut scores = Vec::with_capacity(behaviors.len());
    for (i, b) in behaviors.iter().enumerate() {
        let others = behaviors
            .iter()
            .enumerate()
            .filter(move |&(j, _)| j != i)
            .map(|(_, p)| p);
        scores.push(knn_mean(
            b,
            others.chain(archive.points()),
            params.k,
            &mut scratch,
        )?);
    }
    for (b, &s) in behaviors.iter().zip(&scores) {
        archive.offer(b.clone(), s);
    }
    Ok(scores)
}

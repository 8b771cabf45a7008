//! Combinatorial number system for fermionic occupation sets.
//!
//! An [`OccupationSet`] is a fixed-cardinality subset of the `M` orbitals of
//! one spin sector. [`rank`] maps it to its position in the lexicographic
//! order of all `C(M, N)` such subsets and [`unrank`] inverts that map. Two
//! sector ranks are combined into a single basis index by [`pair`], with the
//! spin-down rank as the fast index.
//!
//! Orbital indices are 0-based and sets are stored as `u64` bitmasks, so a
//! sector holds at most 64 orbitals.

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest sector size supported by the bitmask representation.
pub const MAX_ORBITALS: usize = 64;

// Every C(n, k) with n <= 64 fits in a u64 (C(64, 32) ~ 1.8e18).
static PASCAL: LazyLock<Vec<[u64; MAX_ORBITALS + 1]>> = LazyLock::new(|| {
    let mut rows = vec![[0u64; MAX_ORBITALS + 1]; MAX_ORBITALS + 1];
    for n in 0..=MAX_ORBITALS {
        rows[n][0] = 1;
        for k in 1..=n {
            rows[n][k] = rows[n - 1][k - 1] + if k < n { rows[n - 1][k] } else { 0 };
        }
    }
    rows
});

#[inline]
fn choose_small(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        PASCAL[n][k]
    }
}

/// Exact binomial coefficient `C(n, k)`, zero when `k > n`.
///
/// Overflow is reported as [`Error::Overflow`] rather than wrapped.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    if n as usize <= MAX_ORBITALS {
        return Ok(PASCAL[n as usize][k as usize]);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow { n, k });
        }
    }
    Ok(acc as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Down, Spin::Up];
}

/// Orbital count and per-spin particle numbers of a fixed-(N↑, N↓) sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorShape {
    orbitals: usize,
    n_up: usize,
    n_down: usize,
}

impl SectorShape {
    pub fn new(orbitals: usize, n_up: usize, n_down: usize) -> Result<Self> {
        if orbitals == 0 || orbitals > MAX_ORBITALS {
            return Err(Error::InvalidShape(format!(
                "orbital count {orbitals} outside 1..={MAX_ORBITALS}"
            )));
        }
        if n_up > orbitals || n_down > orbitals {
            return Err(Error::InvalidShape(format!(
                "particle counts ({n_up}, {n_down}) exceed {orbitals} orbitals"
            )));
        }
        Ok(Self {
            orbitals,
            n_up,
            n_down,
        })
    }

    pub fn orbitals(&self) -> usize {
        self.orbitals
    }

    pub fn spin_orbitals(&self) -> usize {
        2 * self.orbitals
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    pub fn particles(&self, spin: Spin) -> usize {
        match spin {
            Spin::Up => self.n_up,
            Spin::Down => self.n_down,
        }
    }

    /// `C(M, N_spin)`.
    pub fn sector_dimension(&self, spin: Spin) -> u64 {
        choose_small(self.orbitals, self.particles(spin))
    }

    /// `C(M, N↑) · C(M, N↓)`, the number of physical basis states.
    pub fn dimension(&self) -> Result<u64> {
        self.sector_dimension(Spin::Up)
            .checked_mul(self.sector_dimension(Spin::Down))
            .ok_or(Error::Overflow {
                n: self.orbitals as u64,
                k: self.n_up.max(self.n_down) as u64,
            })
    }

    /// Smallest register with `2^n >= dimension`, and never fewer than one qubit.
    pub fn qubit_count(&self) -> Result<usize> {
        Ok(qubits_for(self.dimension()?))
    }

    /// Spin label of a spin-orbital index under block ordering:
    /// `0..M` are spin-down, `M..2M` are spin-up.
    pub fn spin_of(&self, spin_orbital: usize) -> Spin {
        if spin_orbital < self.orbitals {
            Spin::Down
        } else {
            Spin::Up
        }
    }

    pub fn spatial_of(&self, spin_orbital: usize) -> usize {
        spin_orbital % self.orbitals
    }

    pub fn spin_orbital(&self, spin: Spin, orbital: usize) -> usize {
        match spin {
            Spin::Down => orbital,
            Spin::Up => orbital + self.orbitals,
        }
    }

    /// Lowest-rank set of each sector: the Hartree–Fock reference.
    pub fn reference(&self) -> Determinant {
        Determinant {
            up: OccupationSet::lowest(self.n_up),
            down: OccupationSet::lowest(self.n_down),
        }
    }

    pub fn paired_rank(&self, det: &Determinant) -> Result<PairedRank> {
        let up = rank(&det.up, self.orbitals, self.n_up)?;
        let down = rank(&det.down, self.orbitals, self.n_down)?;
        pair(up, down, self)
    }

    /// Combined rank of a determinant already known to be valid for this shape.
    pub(crate) fn index_of(&self, det: &Determinant) -> usize {
        let up = rank_unchecked(det.up.bits, self.orbitals, self.n_up);
        let down = rank_unchecked(det.down.bits, self.orbitals, self.n_down);
        (up * self.sector_dimension(Spin::Down) + down) as usize
    }

    pub fn determinant(&self, combined: u64) -> Result<Determinant> {
        let (up, down) = unpair(combined, self)?;
        Ok(Determinant {
            up: unrank(up, self.orbitals, self.n_up)?,
            down: unrank(down, self.orbitals, self.n_down)?,
        })
    }

    /// All physical determinants in combined-rank order.
    pub fn basis(&self) -> Result<Vec<Determinant>> {
        let ups = sector_sets(self.orbitals, self.n_up);
        let downs = sector_sets(self.orbitals, self.n_down);
        let mut out = Vec::with_capacity(self.dimension()? as usize);
        for up in &ups {
            for down in &downs {
                out.push(Determinant {
                    up: *up,
                    down: *down,
                });
            }
        }
        Ok(out)
    }
}

pub fn qubits_for(dimension: u64) -> usize {
    let bits = if dimension <= 1 {
        0
    } else {
        64 - (dimension - 1).leading_zeros() as usize
    };
    bits.max(1)
}

/// Lexicographically ordered set of occupied orbitals within one sector.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OccupationSet {
    bits: u64,
}

impl OccupationSet {
    /// Builds a set from strictly increasing orbital indices.
    pub fn new(elements: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        let mut prev: Option<usize> = None;
        for &e in elements {
            if e >= MAX_ORBITALS {
                return Err(Error::InvalidSet(format!(
                    "element {e} exceeds the 64-orbital limit"
                )));
            }
            if let Some(p) = prev {
                if e == p {
                    return Err(Error::InvalidSet(format!("duplicate element {e}")));
                }
                if e < p {
                    return Err(Error::InvalidSet(format!("elements not increasing at {e}")));
                }
            }
            prev = Some(e);
            bits |= 1 << e;
        }
        Ok(Self { bits })
    }

    pub fn from_bits(bits: u64) -> Self {
        Self { bits }
    }

    /// `{0, 1, …, n-1}`.
    pub fn lowest(n: usize) -> Self {
        Self { bits: low_mask(n) }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, orbital: usize) -> bool {
        orbital < MAX_ORBITALS && self.bits >> orbital & 1 == 1
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Position of `orbital` in the sorted set, if present.
    pub fn position(&self, orbital: usize) -> Option<usize> {
        self.contains(orbital)
            .then(|| (self.bits & low_mask(orbital)).count_ones() as usize)
    }

    /// Orbitals of `0..orbitals` not in the set.
    pub fn vacancies(&self, orbitals: usize) -> OccupationSet {
        Self {
            bits: !self.bits & low_mask(orbitals),
        }
    }

    fn validate(&self, orbitals: usize, particles: usize) -> Result<()> {
        if self.bits & !low_mask(orbitals) != 0 {
            return Err(Error::InvalidSet(format!(
                "{self:?} has an element outside 0..{orbitals}"
            )));
        }
        if self.len() != particles {
            return Err(Error::InvalidSet(format!(
                "{self:?} has {} elements, sector holds {particles}",
                self.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for OccupationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

impl fmt::Display for OccupationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Product state of one spin-up and one spin-down occupation set.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Determinant {
    pub up: OccupationSet,
    pub down: OccupationSet,
}

impl Determinant {
    pub fn sector(&self, spin: Spin) -> OccupationSet {
        match spin {
            Spin::Up => self.up,
            Spin::Down => self.down,
        }
    }

    pub fn with_sector(mut self, spin: Spin, set: OccupationSet) -> Self {
        match spin {
            Spin::Up => self.up = set,
            Spin::Down => self.down = set,
        }
        self
    }

    /// Jordan–Wigner occupation bitstring under block ordering
    /// (spin-down orbitals on the low qubits).
    pub fn to_bitstring(&self, orbitals: usize) -> u64 {
        self.down.bits | self.up.bits << orbitals
    }

    pub fn from_bitstring(bits: u64, orbitals: usize) -> Self {
        Self {
            down: OccupationSet::from_bits(bits & low_mask(orbitals)),
            up: OccupationSet::from_bits(bits >> orbitals & low_mask(orbitals)),
        }
    }
}

/// Index of a set on the combinatoric number line of its sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankedState {
    pub rank: u64,
    pub sector_dimension: u64,
}

impl RankedState {
    pub fn new(rank: u64, sector_dimension: u64) -> Result<Self> {
        if rank >= sector_dimension {
            return Err(Error::RankOutOfRange {
                rank,
                dimension: sector_dimension,
            });
        }
        Ok(Self {
            rank,
            sector_dimension,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairedRank {
    pub rank_up: u64,
    pub rank_down: u64,
    pub combined: u64,
}

#[inline]
fn rank_unchecked(bits: u64, orbitals: usize, particles: usize) -> u64 {
    // Largest element first: the k-th largest element s contributes C(M - (s + 1), k + 1).
    let mut sum = 0u64;
    let mut rest = bits;
    let mut k = 0;
    while rest != 0 {
        let s = 63 - rest.leading_zeros() as usize;
        rest &= !(1u64 << s);
        sum += choose_small(orbitals - (s + 1), k + 1);
        k += 1;
    }
    choose_small(orbitals, particles) - 1 - sum
}

/// Lexicographic rank of `sigma` among all `particles`-subsets of `0..orbitals`.
pub fn rank(sigma: &OccupationSet, orbitals: usize, particles: usize) -> Result<RankedState> {
    if orbitals > MAX_ORBITALS {
        return Err(Error::InvalidShape(format!(
            "{orbitals} orbitals exceeds {MAX_ORBITALS}"
        )));
    }
    sigma.validate(orbitals, particles)?;
    Ok(RankedState {
        rank: rank_unchecked(sigma.bits, orbitals, particles),
        sector_dimension: choose_small(orbitals, particles),
    })
}

/// Inverse of [`rank`] by greedy descent through the combinatorial number system.
pub fn unrank(r: RankedState, orbitals: usize, particles: usize) -> Result<OccupationSet> {
    if orbitals > MAX_ORBITALS || particles > orbitals {
        return Err(Error::InvalidShape(format!(
            "{particles} of {orbitals} orbitals"
        )));
    }
    let dim = choose_small(orbitals, particles);
    if r.rank >= dim {
        return Err(Error::RankOutOfRange {
            rank: r.rank,
            dimension: dim,
        });
    }
    // Complement c = Σ_k C(y_k, k + 1) with y_k = M - 1 - (k-th largest element),
    // strictly increasing in k.
    let mut c = dim - 1 - r.rank;
    let mut bits = 0u64;
    let mut upper = orbitals;
    for k in (0..particles).rev() {
        // Largest y < upper with C(y, k + 1) <= c; y >= k keeps room for the rest.
        let mut y = upper - 1;
        while choose_small(y, k + 1) > c {
            y -= 1;
        }
        c -= choose_small(y, k + 1);
        bits |= 1 << (orbitals - 1 - y);
        upper = y;
    }
    Ok(OccupationSet { bits })
}

/// Combines sector ranks as `rank_up · C(M, N↓) + rank_down`.
pub fn pair(up: RankedState, down: RankedState, shape: &SectorShape) -> Result<PairedRank> {
    let dim_up = shape.sector_dimension(Spin::Up);
    let dim_down = shape.sector_dimension(Spin::Down);
    if up.rank >= dim_up {
        return Err(Error::RankOutOfRange {
            rank: up.rank,
            dimension: dim_up,
        });
    }
    if down.rank >= dim_down {
        return Err(Error::RankOutOfRange {
            rank: down.rank,
            dimension: dim_down,
        });
    }
    Ok(PairedRank {
        rank_up: up.rank,
        rank_down: down.rank,
        combined: up.rank * dim_down + down.rank,
    })
}

/// Quotient/remainder inverse of [`pair`]; returns `(up, down)`.
pub fn unpair(combined: u64, shape: &SectorShape) -> Result<(RankedState, RankedState)> {
    let dim_up = shape.sector_dimension(Spin::Up);
    let dim_down = shape.sector_dimension(Spin::Down);
    let dim = shape.dimension()?;
    if combined >= dim {
        return Err(Error::RankOutOfRange {
            rank: combined,
            dimension: dim,
        });
    }
    Ok((
        RankedState {
            rank: combined / dim_down,
            sector_dimension: dim_up,
        },
        RankedState {
            rank: combined % dim_down,
            sector_dimension: dim_down,
        },
    ))
}

/// All `particles`-subsets of `0..orbitals` in lexicographic (rank) order.
pub fn sector_sets(orbitals: usize, particles: usize) -> Vec<OccupationSet> {
    let dim = choose_small(orbitals, particles);
    (0..dim)
        .map(|r| {
            unrank(
                RankedState {
                    rank: r,
                    sector_dimension: dim,
                },
                orbitals,
                particles,
            )
            .expect("rank below sector dimension")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> OccupationSet {
        OccupationSet::new(e).unwrap()
    }

    /// Pascal-triangle recurrence on u128, independent of the table and the
    /// multiplicative formula.
    fn pascal_oracle(n: usize, k: usize) -> u128 {
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        row.get(k).copied().unwrap_or(0)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(0, 1).unwrap(), 0);
        assert_eq!(pascal_oracle(30, 15), 155_117_520);
        assert_eq!(binomial(30, 15).unwrap(), 155_117_520);
        assert_eq!(binomial(0, 0).unwrap(), 1);
    }

    #[test]
    fn binomial_matches_pascal_beyond_table() {
        for n in [65u64, 70, 90, 120] {
            for k in [0u64, 1, 2, 5, 9, 13] {
                assert_eq!(
                    binomial(n, k).unwrap() as u128,
                    pascal_oracle(n as usize, k as usize)
                );
            }
        }
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert!(matches!(binomial(200, 100), Err(Error::Overflow { .. })));
        assert!(binomial(68, 34).is_err());
        assert!(binomial(67, 33).is_ok());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&set(&[0, 1]), 4, 2).unwrap().rank, 0);
        assert_eq!(rank(&set(&[1, 2]), 4, 2).unwrap().rank, 3);
        assert_eq!(rank(&set(&[2, 3]), 4, 2).unwrap().rank, 5);
    }

    #[test]
    fn rank_rejects_invalid_sets() {
        assert!(OccupationSet::new(&[2, 1]).is_err());
        assert!(OccupationSet::new(&[1, 1]).is_err());
        assert!(rank(&set(&[0, 4]), 4, 2).is_err());
        assert!(rank(&set(&[0]), 4, 2).is_err());
    }

    #[test]
    fn unrank_examples() {
        let r = |rank| RankedState::new(rank, 6).unwrap();
        assert_eq!(unrank(r(0), 4, 2).unwrap(), set(&[0, 1]));
        assert_eq!(unrank(r(5), 4, 2).unwrap(), set(&[2, 3]));
        assert!(unrank(
            RankedState {
                rank: 6,
                sector_dimension: 6
            },
            4,
            2
        )
        .is_err());

        // Exhaustive lexicographic enumeration of the ten 2-subsets of 0..5.
        let mut lex = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                lex.push(set(&[a, b]));
            }
        }
        let seventh = unrank(RankedState::new(7, 10).unwrap(), 5, 2).unwrap();
        assert_eq!(seventh, lex[7]);
        assert_eq!(seventh, set(&[2, 3]));
    }

    #[test]
    fn pair_examples() {
        let s = SectorShape::new(2, 1, 1).unwrap();
        let p = pair(
            RankedState::new(1, 2).unwrap(),
            RankedState::new(0, 2).unwrap(),
            &s,
        )
        .unwrap();
        assert_eq!(p.combined, 2);
        let p = pair(
            RankedState::new(0, 2).unwrap(),
            RankedState::new(0, 2).unwrap(),
            &s,
        )
        .unwrap();
        assert_eq!(p.combined, 0);

        let s = SectorShape::new(3, 1, 2).unwrap();
        let p = pair(
            RankedState::new(2, 3).unwrap(),
            RankedState::new(1, 3).unwrap(),
            &s,
        )
        .unwrap();
        assert_eq!(p.combined, 7);
        let (u, d) = unpair(7, &s).unwrap();
        assert_eq!((u.rank, d.rank), (2, 1));
        let (u, d) = unpair(0, &s).unwrap();
        assert_eq!((u.rank, d.rank), (0, 0));
        assert!(unpair(9, &s).is_err());

        let s = SectorShape::new(2, 1, 1).unwrap();
        let (u, d) = unpair(2, &s).unwrap();
        assert_eq!((u.rank, d.rank), (1, 0));
    }

    #[test]
    fn qubit_count_examples() {
        let q = |m, u, d| SectorShape::new(m, u, d).unwrap().qubit_count().unwrap();
        assert_eq!(q(2, 1, 1), 2);
        assert_eq!(q(15, 1, 1), 8);
        assert_eq!(q(5, 2, 2), 7);
        assert_eq!(q(3, 0, 0), 1);
        assert_eq!(q(1, 1, 1), 1);
    }

    #[test]
    fn lexicographic_order_is_rank_order_m6() {
        for n in 0..=6 {
            let sets = sector_sets(6, n);
            for w in sets.windows(2) {
                assert!(w[0].to_vec() < w[1].to_vec());
            }
        }
    }

    #[test]
    fn positions_and_vacancies() {
        let s = set(&[1, 3, 4]);
        assert_eq!(s.position(3), Some(1));
        assert_eq!(s.position(2), None);
        assert_eq!(s.vacancies(6).to_vec(), vec![0, 2, 5]);
        assert_eq!(format!("{s}"), "{1, 3, 4}");
    }

    #[test]
    fn bitstring_layout_is_block_ordered() {
        let d = Determinant {
            up: set(&[0]),
            down: set(&[1]),
        };
        assert_eq!(d.to_bitstring(3), 0b001_010);
        assert_eq!(Determinant::from_bitstring(0b001_010, 3), d);
    }
}

//! Second-quantized excitation operators acting on occupation sets.
//!
//! `E_ij = a_i† a_j` moves a particle from orbital `j` to orbital `i` and
//! picks up the sign `(-1)^p`, where `p` counts the occupied orbitals strictly
//! between `i` and `j`. On the ranked basis this is a signed shift along the
//! combinatoric number line, collected here as a [`ShiftMatrix`].

use nalgebra::DMatrix;

use crate::combinadics::{low_mask, Determinant, OccupationSet, SectorShape};
use crate::error::Result;

/// Result of a non-vanishing operator application.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedState<S> {
    pub state: S,
    pub sign: i32,
}

/// `a_i† a_j |sigma⟩` within one sector; `None` when the state is annihilated.
///
/// `i == j` is the number operator and returns `sigma` with sign `+1` when
/// `j` is occupied.
pub fn apply_one_body(
    i: usize,
    j: usize,
    sigma: OccupationSet,
) -> Option<SignedState<OccupationSet>> {
    if !sigma.contains(j) {
        return None;
    }
    if i == j {
        return Some(SignedState {
            state: sigma,
            sign: 1,
        });
    }
    if sigma.contains(i) {
        return None;
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let between = sigma.bits() & low_mask(hi) & !low_mask(lo + 1);
    let sign = if between.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    };
    let bits = sigma.bits() & !(1u64 << j) | 1u64 << i;
    Some(SignedState {
        state: OccupationSet::from_bits(bits),
        sign,
    })
}

/// `a_i† a_j a_k† a_l |sigma⟩`: the `(k, l)` stage acts first.
pub fn apply_two_body(
    (i, j, k, l): (usize, usize, usize, usize),
    sigma: OccupationSet,
) -> Option<SignedState<OccupationSet>> {
    let first = apply_one_body(k, l, sigma)?;
    let second = apply_one_body(i, j, first.state)?;
    Some(SignedState {
        state: second.state,
        sign: first.sign * second.sign,
    })
}

/// `a_i† a_j` on a two-sector determinant, with `i, j` spin-orbital indices in
/// block order. Spin-flipping pairs leave the fixed-(N↑, N↓) sector and
/// evaluate to `None`.
pub fn excite(
    i: usize,
    j: usize,
    det: &Determinant,
    shape: &SectorShape,
) -> Option<SignedState<Determinant>> {
    let spin = shape.spin_of(j);
    if shape.spin_of(i) != spin {
        return None;
    }
    let m = shape.orbitals();
    let out = apply_one_body(i % m, j % m, det.sector(spin))?;
    Some(SignedState {
        state: det.with_sector(spin, out.state),
        sign: out.sign,
    })
}

/// `a_i† a_j a_k† a_l` on a two-sector determinant. Each sector carries its
/// own parity; there is no inter-sector string under block ordering.
pub fn excite_two(
    (i, j, k, l): (usize, usize, usize, usize),
    det: &Determinant,
    shape: &SectorShape,
) -> Option<SignedState<Determinant>> {
    let first = excite(k, l, det, shape)?;
    let second = excite(i, j, &first.state, shape)?;
    Some(SignedState {
        state: second.state,
        sign: first.sign * second.sign,
    })
}

/// Sparse matrix of an excitation operator on the padded ranked basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftMatrix {
    /// `2^n` for the shape's register.
    pub dimension: usize,
    /// Number of physical basis states; rows/columns above this are padding.
    pub physical: usize,
    /// `(row, column, coefficient)` with `row = rank(out)` and `column = rank(in)`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl ShiftMatrix {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Physical block only.
    pub fn to_dense_physical(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.physical, self.physical);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn transpose(&self) -> ShiftMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_by_key(|&(r, c, _)| (c, r));
        ShiftMatrix { entries, ..*self }
    }

    /// Signed displacement `row - column` of every entry.
    pub fn shifts(&self) -> Vec<i64> {
        self.entries
            .iter()
            .map(|&(r, c, _)| r as i64 - c as i64)
            .collect()
    }
}

fn build_shift(
    shape: &SectorShape,
    mut op: impl FnMut(&Determinant) -> Option<SignedState<Determinant>>,
) -> Result<ShiftMatrix> {
    let basis = shape.basis()?;
    let dimension = 1usize << shape.qubit_count()?;
    let mut entries = Vec::new();
    for (col, det) in basis.iter().enumerate() {
        if let Some(out) = op(det) {
            entries.push((shape.index_of(&out.state), col, out.sign as f64));
        }
    }
    Ok(ShiftMatrix {
        dimension,
        physical: basis.len(),
        entries,
    })
}

/// Matrix of `E_ij` (spin-orbital indices) in the paired ranked basis.
pub fn shift_matrix(i: usize, j: usize, shape: &SectorShape) -> Result<ShiftMatrix> {
    build_shift(shape, |det| excite(i, j, det, shape))
}

/// Matrix of `E_ij E_kl` built state-by-state from [`excite_two`].
pub fn two_body_matrix(
    ijkl: (usize, usize, usize, usize),
    shape: &SectorShape,
) -> Result<ShiftMatrix> {
    build_shift(shape, |det| excite_two(ijkl, det, shape))
}

/// Max-abs residual of `[E_ij, E_kl] - δ_jk E_il + δ_li E_kj` on the physical block.
pub fn commutator_check(
    (i, j): (usize, usize),
    (k, l): (usize, usize),
    shape: &SectorShape,
) -> Result<f64> {
    let eij = shift_matrix(i, j, shape)?.to_dense_physical();
    let ekl = shift_matrix(k, l, shape)?.to_dense_physical();
    let mut residual = &eij * &ekl - &ekl * &eij;
    if j == k {
        residual -= shift_matrix(i, l, shape)?.to_dense_physical();
    }
    if l == i {
        residual += shift_matrix(k, j, shape)?.to_dense_physical();
    }
    Ok(residual.amax())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> OccupationSet {
        OccupationSet::new(e).unwrap()
    }

    #[test]
    fn one_body_examples() {
        let out = apply_one_body(2, 0, set(&[0, 1])).unwrap();
        assert_eq!(out.state, set(&[1, 2]));
        assert_eq!(out.sign, -1);

        let out = apply_one_body(1, 1, set(&[1, 3])).unwrap();
        assert_eq!((out.state, out.sign), (set(&[1, 3]), 1));

        assert!(apply_one_body(0, 2, set(&[0, 1])).is_none());
        assert!(apply_one_body(3, 3, set(&[0, 1])).is_none());
    }

    #[test]
    fn two_body_examples() {
        // a_3† a_1 on {0,1} -> {0,3} with orbital 0 outside (1,3): +1;
        // then a_2† a_0 on {0,3}: nothing strictly between 0 and 2: +1.
        let out = apply_two_body((2, 0, 3, 1), set(&[0, 1])).unwrap();
        assert_eq!(out.state, set(&[2, 3]));
        assert_eq!(out.sign, 1);

        assert!(apply_two_body((2, 0, 3, 2), set(&[0, 1])).is_none());
        let out = apply_two_body((0, 0, 1, 1), set(&[0, 1])).unwrap();
        assert_eq!((out.state, out.sign), (set(&[0, 1]), 1));
    }

    #[test]
    fn sign_matches_position_difference() {
        // (-1)^{|q - r|} with q the position of i after the move and r the
        // position of j before it.
        for bits in 0u64..(1 << 6) {
            let sigma = OccupationSet::from_bits(bits);
            for i in 0..6 {
                for j in 0..6 {
                    if let Some(out) = apply_one_body(i, j, sigma) {
                        let q = out.state.position(i).unwrap() as i64;
                        let r = sigma.position(j).unwrap() as i64;
                        let expected = if (q - r).abs() % 2 == 0 { 1 } else { -1 };
                        assert_eq!(out.sign, expected, "i={i} j={j} sigma={sigma}");
                    }
                }
            }
        }
    }

    #[test]
    fn shift_matrix_examples() {
        // Spin-down only sectors: spin-orbital i < M is orbital i of the down sector.
        let s = SectorShape::new(2, 0, 1).unwrap();
        let e00 = shift_matrix(0, 0, &s).unwrap().to_dense();
        assert_eq!(e00.nrows(), 2);
        assert_eq!(e00[(0, 0)], 1.0);
        assert_eq!(e00[(1, 1)], 0.0);

        let s = SectorShape::new(4, 0, 2).unwrap();
        let e20 = shift_matrix(2, 0, &s).unwrap();
        assert!(e20.entries.contains(&(3, 0, -1.0)));
        assert_eq!(e20.dimension, 8);

        for i in 0..8 {
            let d = shift_matrix(i, i, &s).unwrap().to_dense();
            for r in 0..8 {
                for c in 0..8 {
                    let v = d[(r, c)];
                    assert!(if r == c {
                        v == 0.0 || v == 1.0
                    } else {
                        v == 0.0
                    });
                }
            }
        }
    }

    #[test]
    fn at_most_one_entry_per_column() {
        let s = SectorShape::new(4, 2, 1).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let m = shift_matrix(i, j, &s).unwrap();
                let mut cols: Vec<_> = m.entries.iter().map(|e| e.1).collect();
                let n = cols.len();
                cols.dedup();
                assert_eq!(cols.len(), n);
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let s = SectorShape::new(3, 0, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert_eq!(commutator_check((i, j), (k, l), &s).unwrap(), 0.0);
                    }
                }
            }
        }
        let s = SectorShape::new(4, 0, 2).unwrap();
        assert_eq!(commutator_check((2, 0), (0, 1), &s).unwrap(), 0.0);
        assert_eq!(commutator_check((1, 0), (3, 2), &s).unwrap(), 0.0);
    }

    #[test]
    fn transpose_is_hermitian_partner() {
        let s = SectorShape::new(4, 1, 2).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let a = shift_matrix(i, j, &s).unwrap().to_dense();
                let b = shift_matrix(j, i, &s).unwrap().to_dense();
                assert_eq!(a, b.transpose());
            }
        }
    }

    #[test]
    fn composition_matches_two_body_action() {
        let s = SectorShape::new(3, 1, 2).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    for l in 0..6 {
                        let prod = shift_matrix(i, j, &s).unwrap().to_dense()
                            * shift_matrix(k, l, &s).unwrap().to_dense();
                        let direct = two_body_matrix((i, j, k, l), &s).unwrap().to_dense();
                        assert_eq!(prod, direct);
                    }
                }
            }
        }
    }

    #[test]
    fn padding_is_untouched() {
        let s = SectorShape::new(3, 1, 1).unwrap();
        let m = shift_matrix(3, 4, &s).unwrap();
        assert_eq!(m.physical, 9);
        assert_eq!(m.dimension, 16);
        assert!(m.entries.iter().all(|&(r, c, _)| r < 9 && c < 9));
    }
}

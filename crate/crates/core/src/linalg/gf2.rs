//! Affine linear systems over GF(2).

use std::fmt;

use num_integer::Integer;

use super::{IntMatrix, LinalgError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Solutions of `M x ≡ b (mod 2)`: a particular solution (free variables
/// zero) plus a kernel basis, one vector per free column in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2AffineSolutionSet {
    pub particular: Option<BitVec>,
    pub kernel_basis: Vec<BitVec>,
}

impl Gf2AffineSolutionSet {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    pub fn kernel_dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    /// Number of solutions, `0` or `2^k` (saturating).
    pub fn count(&self) -> u128 {
        match self.particular {
            None => 0,
            Some(_) => 1u128.checked_shl(self.kernel_basis.len() as u32).unwrap_or(u128::MAX),
        }
    }

    /// All solutions, particular first, then in reflected Gray-code order over
    /// the kernel basis.
    pub fn solutions(&self) -> GrayCodeSolutions<'_> {
        GrayCodeSolutions { set: self, current: self.particular.clone(), step: 0 }
    }
}

pub struct GrayCodeSolutions<'a> {
    set: &'a Gf2AffineSolutionSet,
    current: Option<BitVec>,
    step: u128,
}

impl Iterator for GrayCodeSolutions<'_> {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        let out = self.current.clone()?;
        self.step += 1;
        let k = self.set.kernel_basis.len();
        if k >= 128 || self.step >= 1u128 << k {
            self.current = None;
        } else {
            let flip = self.step.trailing_zeros() as usize;
            self.current.as_mut().unwrap().xor_assign(&self.set.kernel_basis[flip]);
        }
        Some(out)
    }
}

fn reduce_mod2(m: &IntMatrix) -> Vec<BitVec> {
    (0..m.rows())
        .map(|i| {
            let mut row = BitVec::zeros(m.cols());
            for (j, x) in m.row(i).iter().enumerate() {
                row.set(j, x.is_odd());
            }
            row
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns (one per pivot
/// row, rows reordered so pivot row `r` is `rows[r]`).
fn rref(rows: &mut [(BitVec, bool)], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0.get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let (pivot_row, pivot_rhs) = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0.get(c) {
                row.0.xor_assign(&pivot_row);
                row.1 ^= pivot_rhs;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn gf2_rank(m: &IntMatrix) -> usize {
    let mut rows: Vec<(BitVec, bool)> = reduce_mod2(m).into_iter().map(|r| (r, false)).collect();
    rref(&mut rows, m.cols()).len()
}

/// Complete solution description of `M x ≡ b (mod 2)`.
pub fn solve_affine_gf2(m: &IntMatrix, b: &BitVec) -> Result<Gf2AffineSolutionSet, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    let n = m.cols();
    let mut rows: Vec<(BitVec, bool)> =
        reduce_mod2(m).into_iter().enumerate().map(|(i, r)| (r, b.get(i))).collect();
    let pivots = rref(&mut rows, n);
    let consistent = rows[pivots.len()..].iter().all(|(_, rhs)| !rhs);

    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let kernel_basis = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::zeros(n);
            v.set(f, true);
            for (r, &c) in pivots.iter().enumerate() {
                if rows[r].0.get(f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();
    let particular = consistent.then(|| {
        let mut x = BitVec::zeros(n);
        for (r, &c) in pivots.iter().enumerate() {
            x.set(c, rows[r].1);
        }
        x
    });
    Ok(Gf2AffineSolutionSet { particular, kernel_basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn bits(s: &str) -> BitVec {
        BitVec::from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn example_system_has_two_solutions() {
        let a = mat(&[vec![-5, 1, 3, 0], vec![1, 0, 0, 1], vec![3, 0, 0, 1], vec![0, 1, 1, -4]]);
        let set = solve_affine_gf2(&a, &bits("1000")).unwrap();
        let all: Vec<BitVec> = set.solutions().collect();
        assert_eq!(all, vec![bits("1001"), bits("1111")]);
        assert_eq!(set.count(), 2);
    }

    #[test]
    fn identity_has_unique_solution() {
        let id = IntMatrix::identity(5);
        let b = bits("10110");
        let set = solve_affine_gf2(&id, &b).unwrap();
        assert_eq!(set.solutions().collect::<Vec<_>>(), vec![b]);
    }

    #[test]
    fn zero_matrix_nonzero_rhs_is_inconsistent() {
        let z = IntMatrix::zeros(3, 3);
        let set = solve_affine_gf2(&z, &bits("010")).unwrap();
        assert!(!set.is_consistent());
        assert_eq!(set.count(), 0);
        assert_eq!(set.solutions().count(), 0);
        assert_eq!(set.kernel_dimension(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(solve_affine_gf2(&IntMatrix::identity(2), &bits("1")).is_err());
    }

    #[test]
    fn brute_force_agreement() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(0..=7);
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let b: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let m = IntMatrix::from_rows_with_cols(
                rows.iter().map(|r| r.iter().copied().map(Into::into).collect()).collect(),
                n,
            )
            .unwrap();
            let set = solve_affine_gf2(&m, &BitVec::from_bools(&b)).unwrap();
            let mut fast: Vec<Vec<bool>> = set.solutions().map(|v| v.to_bools()).collect();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << n) {
                let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let ok = (0..n).all(|i| {
                    let s: i64 = (0..n).filter(|&j| x[j]).map(|j| rows[i][j]).sum();
                    (s.rem_euclid(2) == 1) == b[i]
                });
                if ok {
                    brute.push(x);
                }
            }
            assert_eq!(fast.len(), brute.len());
            fast.sort();
            brute.sort();
            assert_eq!(fast, brute);
            if set.is_consistent() {
                assert_eq!(set.count(), 1u128 << (n - gf2_rank(&m)));
            }
        }
    }
}

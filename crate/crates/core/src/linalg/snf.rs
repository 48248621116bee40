use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Invariant factors `d_1 | d_2 | … | d_k` of an integer matrix, `k` the
/// smaller dimension. Zero factors (free summands) come last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SnfDiagonal {
    pub factors: Vec<BigInt>,
}

impl SnfDiagonal {
    /// Pads with zero factors (free `Z` summands) up to `len`.
    pub fn padded(mut self, len: usize) -> Self {
        while self.factors.len() < len {
            self.factors.push(BigInt::zero());
        }
        self
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    /// Nontrivial torsion coefficients.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    /// Order of the cokernel group; `None` when it is infinite.
    pub fn group_order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            None
        } else {
            Some(self.factors.iter().product())
        }
    }

    pub fn divisibility_holds(&self) -> bool {
        self.factors.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        })
    }
}

impl fmt::Display for SnfDiagonal {
    /// Cokernel group, e.g. `Z/4`, `Z^2`, `Z + Z/2 + Z/6`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion().iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

struct Work {
    rows: usize,
    cols: usize,
    a: Vec<Vec<BigInt>>,
}

impl Work {
    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if self.a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        for row in &mut self.a {
            row.swap(x, y);
        }
    }

    fn move_to(&mut self, t: usize, (i, j): (usize, usize)) {
        self.a.swap(t, i);
        self.swap_cols(t, j);
    }

    /// Clears row and column `t` by remainders. Returns false if some
    /// remainder is nonzero (a smaller pivot exists).
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.rows {
            if self.a[i][t].is_zero() {
                continue;
            }
            let q = self.a[i][t].div_floor(&self.a[t][t]);
            for j in t..self.cols {
                let delta = &q * &self.a[t][j];
                self.a[i][j] -= delta;
            }
            clean &= self.a[i][t].is_zero();
        }
        for j in t + 1..self.cols {
            if self.a[t][j].is_zero() {
                continue;
            }
            let q = self.a[t][j].div_floor(&self.a[t][t]);
            for i in t..self.rows {
                let delta = &q * &self.a[i][t];
                self.a[i][j] -= delta;
            }
            clean &= self.a[t][j].is_zero();
        }
        clean
    }
}

/// Smith normal form by direct row/column reduction over `Z`.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDiagonal {
    let mut w = Work { rows: m.rows(), cols: m.cols(), a: m.to_rows() };
    let k = w.rows.min(w.cols);
    let mut factors = Vec::with_capacity(k);
    for t in 0..k {
        let Some(pos) = w.smallest_nonzero(t) else {
            break;
        };
        w.move_to(t, pos);
        loop {
            if !w.clear_cross(t) {
                let pos = w.smallest_nonzero(t).expect("a nonzero remainder exists");
                w.move_to(t, pos);
                continue;
            }
            let offender = (t + 1..w.rows)
                .find(|&i| (t + 1..w.cols).any(|j| !(&w.a[i][j] % &w.a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..w.cols {
                        let x = w.a[i][j].clone();
                        w.a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        factors.push(w.a[t][t].abs());
    }
    while factors.len() < k {
        factors.push(BigInt::zero());
    }
    SnfDiagonal { factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn snf_i64(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_i64_rows(rows).unwrap())
            .factors
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    /// gcd of all k×k minors (determinantal divisors), computed by brute force.
    fn determinantal_divisors(rows: &[Vec<i64>]) -> Vec<i64> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..(1 << n))
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
                .collect()
        }
        let (r, c) = (rows.len(), rows[0].len());
        let mut out = Vec::new();
        for k in 1..=r.min(c) {
            let mut g = BigInt::zero();
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                    let d = IntMatrix::from_i64_rows(&minor).unwrap().determinant().unwrap();
                    g = g.gcd(&d);
                }
            }
            out.push(g.to_i64().unwrap());
        }
        out
    }

    #[test]
    fn documented_examples() {
        assert_eq!(
            snf_i64(&[vec![-5, 1, 3, 0], vec![1, 0, 0, 1], vec![3, 0, 0, 1], vec![0, 1, 1, -4]]),
            vec![1, 1, 1, 4]
        );
        assert_eq!(snf_i64(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf_i64(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn group_rendering() {
        let d = SnfDiagonal { factors: vec![1, 1, 1, 4].into_iter().map(BigInt::from).collect() };
        assert_eq!(d.to_string(), "Z/4");
        assert_eq!(d.group_order(), Some(BigInt::from(4)));
        let d = SnfDiagonal { factors: vec![BigInt::from(2), BigInt::zero(), BigInt::zero()] };
        assert_eq!(d.to_string(), "Z^2 + Z/2");
        assert_eq!(d.group_order(), None);
        assert_eq!(SnfDiagonal { factors: vec![] }.to_string(), "0");
    }

    #[test]
    fn matches_determinantal_divisor_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let r = rng.gen_range(1..=4);
            let c = rng.gen_range(1..=4);
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let snf = smith_normal_form(&IntMatrix::from_i64_rows(&rows).unwrap());
            assert!(snf.divisibility_holds(), "{rows:?}");
            let dd = determinantal_divisors(&rows);
            let mut prefix = BigInt::one();
            for (k, d) in snf.factors.iter().enumerate() {
                prefix *= d;
                assert_eq!(prefix, BigInt::from(dd[k]), "{rows:?}");
            }
        }
    }
}

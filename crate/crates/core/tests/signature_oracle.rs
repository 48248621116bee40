use chainmail_core::linalg::{signature, SymmetricIntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Characteristic polynomial `det(tI − A)` by Faddeev–LeVerrier; coefficients
/// from the constant term up.
fn char_poly(a: &[Vec<i64>]) -> Vec<BigRational> {
    let n = a.len();
    let am: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    s += &am[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut trace = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &am[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn sign_changes(coeffs: &[BigRational]) -> i64 {
    let signs: Vec<bool> = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count() as i64
}

/// All roots are real, so Descartes' rule counts them exactly.
fn descartes_signature(a: &[Vec<i64>]) -> i64 {
    let p = char_poly(a);
    let q: Vec<BigRational> =
        p.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }).collect();
    sign_changes(&p) - sign_changes(&q)
}

/// Congruence diagonalisation over Q with largest-diagonal pivoting; an
/// all-zero diagonal is repaired by adding a row/column pair.
fn congruence_signature(a: &[Vec<i64>]) -> i64 {
    let mut m: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut sig = 0;
    while !m.is_empty() {
        let n = m.len();
        let best = (0..n).max_by(|&i, &j| m[i][i].abs().cmp(&m[j][j].abs()).then(j.cmp(&i))).unwrap();
        if m[best][best].is_zero() {
            let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero()) else {
                break;
            };
            // row_i += row_j, col_i += col_j gives m_ii = 2 m_ij.
            for k in 0..n {
                let x = m[j][k].clone();
                m[i][k] += x;
            }
            for k in 0..n {
                let x = m[k][j].clone();
                m[k][i] += x;
            }
            continue;
        }
        let p = m[best][best].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        let row = m[best].clone();
        let mut next = Vec::new();
        for i in (0..n).filter(|&i| i != best) {
            next.push(
                (0..n)
                    .filter(|&j| j != best)
                    .map(|j| &m[i][j] - &row[i] * &row[j] / &p)
                    .collect::<Vec<_>>(),
            );
        }
        m = next;
    }
    sig
}

fn symmetric(entries: Vec<i64>, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            a[i][j] = entries[k];
            a[j][i] = entries[k];
            k += 1;
        }
    }
    a
}

#[test]
fn oracles_on_known_forms() {
    let e8_like = vec![vec![2, -1], vec![-1, 2]];
    assert_eq!(descartes_signature(&e8_like), 2);
    let hyperbolic = vec![vec![0, 1], vec![1, 0]];
    assert_eq!(descartes_signature(&hyperbolic), 0);
    assert_eq!(congruence_signature(&hyperbolic), 0);
    let d_ex = vec![vec![-5, 1, 3, 0], vec![1, 0, 0, 1], vec![3, 0, 0, 1], vec![0, 1, 1, -4]];
    assert_eq!(descartes_signature(&d_ex), 0);
    assert_eq!(signature(&SymmetricIntMatrix::from_i64_rows(&d_ex).unwrap()), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn signature_matches_oracles(n in 0usize..=6, seed in proptest::collection::vec(-4i64..=4, 21)) {
        let a = symmetric(seed, n);
        let got = signature(&SymmetricIntMatrix::from_i64_rows(&a).unwrap());
        prop_assert_eq!(got, congruence_signature(&a));
        prop_assert_eq!(got, descartes_signature(&a));
    }
}

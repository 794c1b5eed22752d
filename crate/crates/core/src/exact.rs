//! Exact rank of complex-dyadic vectors over the rationals.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dyadic::{ComplexDyadic, Dyadic};

type Q = Complex<BigRational>;

fn rational(d: &Dyadic) -> BigRational {
    let den = BigInt::one() << d.exponent() as usize;
    BigRational::new(BigInt::from(d.numerator()), den)
}

fn to_q(z: &ComplexDyadic) -> Q {
    Complex::new(rational(&z.re), rational(&z.im))
}

/// Rank of the given row vectors (all of equal length).
pub fn rank(rows: &[Vec<ComplexDyadic>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(to_q).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        let inv = Q::one() / m[rank][col].clone();
        for v in m[rank].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                #[allow(clippy::needless_range_loop)]
                for c in col..cols {
                    let sub = f.clone() * m[rank][c].clone();
                    m[r][c] = m[r][c].clone() - sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<ComplexDyadic> {
        xs.iter().map(|&x| ComplexDyadic::from_int(x)).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[v(&[1, 0]), v(&[0, 1])]), 2);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(rank(&[v(&[0, 0])]), 0);
        let i = ComplexDyadic::I;
        // (1, i) and (i, -1) are parallel over C
        assert_eq!(rank(&[vec![ComplexDyadic::ONE, i], vec![i, ComplexDyadic::from_int(-1)]]), 1);
        let half = ComplexDyadic::real(Dyadic::HALF);
        assert_eq!(rank(&[vec![half, half], vec![ComplexDyadic::ONE, ComplexDyadic::from_int(-1)]]), 2);
    }
}

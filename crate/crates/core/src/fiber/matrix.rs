use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::FiberError;

/// Square integer matrix, row-major, with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = BigInt::one();
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, FiberError> {
        Self::from_big_rows(&rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>())
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>]) -> Result<Self, FiberError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(FiberError::Malformed("matrix must be square and non-empty".into()));
        }
        Ok(Self { dim, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, FiberError> {
        let n = self.dim;
        if n != other.dim {
            return Err(FiberError::ModelMismatch);
        }
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * &other.data[k * n + j];
                }
            }
        }
        Ok(IntMatrix { dim: n, data })
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, FiberError> {
        let n = self.dim;
        if v.len() != n {
            return Err(FiberError::ModelMismatch);
        }
        Ok((0..n)
            .map(|i| (0..n).map(|j| &self.data[i * n + j] * &v[j]).sum())
            .collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        IntMatrix { dim: n, data }
    }

    /// The standard symplectic form `J = diag([[0,1],[-1,0]], ...)`.
    pub fn standard_form(dim: usize) -> IntMatrix {
        let mut data = vec![BigInt::zero(); dim * dim];
        for b in 0..dim / 2 {
            data[2 * b * dim + 2 * b + 1] = BigInt::one();
            data[(2 * b + 1) * dim + 2 * b] = -BigInt::one();
        }
        IntMatrix { dim, data }
    }

    /// `MᵀJM = J`.
    pub fn is_symplectic(&self) -> bool {
        if self.dim % 2 != 0 {
            return false;
        }
        let j = IntMatrix::standard_form(self.dim);
        match self.transpose().mul(&j).and_then(|m| m.mul(self)) {
            Ok(m) => m == j,
            Err(_) => false,
        }
    }

    /// Inverse of a symplectic matrix, `-J Mᵀ J`.
    pub fn symplectic_inverse(&self) -> IntMatrix {
        let n = self.dim;
        let mut out = vec![BigInt::zero(); n * n];
        // (J X J)_{ab} = J_{a,pa} X_{pa,pb} J_{pb,b}, with X = Mᵀ.
        for a in 0..n {
            for b in 0..n {
                let (pa, sa) = partner(a);
                let (pb, sb) = partner(b);
                let x = &self.data[pb * n + pa];
                out[a * n + b] = if sa * sb > 0 { x.clone() } else { -x };
            }
        }
        IntMatrix { dim: n, data: out }
    }

    /// The transvection `v ↦ v + sign·⟨v,c⟩c`, i.e. `I + sign·c (Jc)ᵀ`.
    pub fn transvection(c: &[BigInt], sign: i64) -> IntMatrix {
        let n = c.len();
        let jc = apply_form(c);
        let mut m = IntMatrix::identity(n);
        for a in 0..n {
            for b in 0..n {
                m.data[a * n + b] += &c[a] * &jc[b] * sign;
            }
        }
        m
    }
}

/// Index paired with `a` by `J`, and the entry `J_{a, partner}`.
fn partner(a: usize) -> (usize, i64) {
    if a % 2 == 0 {
        (a + 1, 1)
    } else {
        (a - 1, -1)
    }
}

/// `J c`.
fn apply_form(c: &[BigInt]) -> Vec<BigInt> {
    (0..c.len())
        .map(|a| {
            let (p, s) = partner(a);
            &c[p] * s
        })
        .collect()
}

/// `⟨u,v⟩ = Σ (u_{2i-1} v_{2i} − u_{2i} v_{2i-1})`.
pub fn symplectic_pairing(u: &[BigInt], v: &[BigInt]) -> Result<BigInt, FiberError> {
    if u.len() != v.len() {
        return Err(FiberError::ModelMismatch);
    }
    Ok(u.chunks(2).zip(v.chunks(2)).map(|(a, b)| &a[0] * &b[1] - &a[1] * &b[0]).sum())
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.dim).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pairing_matches_form() {
        let j = IntMatrix::standard_form(4);
        let (u, v) = (big(&[1, 2, -3, 4]), big(&[0, 5, 7, -1]));
        let jv = j.apply(&v).unwrap();
        let direct: BigInt = u.iter().zip(&jv).map(|(a, b)| a * b).sum();
        assert_eq!(symplectic_pairing(&u, &v).unwrap(), direct);
    }

    #[test]
    fn transvection_is_symplectic_with_symplectic_inverse() {
        let c = big(&[1, -2, 3, 1]);
        let t = IntMatrix::transvection(&c, 1);
        assert!(t.is_symplectic());
        let inv = t.symplectic_inverse();
        assert_eq!(t.mul(&inv).unwrap(), IntMatrix::identity(4));
        assert_eq!(inv, IntMatrix::transvection(&c, -1));
    }

    #[test]
    fn torus_transvection() {
        let t = IntMatrix::transvection(&big(&[1, 0]), 1);
        assert_eq!(t, IntMatrix::from_rows(&[vec![1, -1], vec![0, 1]]).unwrap());
    }
}

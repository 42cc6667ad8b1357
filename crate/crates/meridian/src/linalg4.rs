//! Small fixed-dimension linear and exterior algebra for E^4 and the
//! bivector space Lambda^2(E^4).
//!
//! Bivector components use the fixed ordered basis
//! (e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4); every module in the crate
//! shares this ordering.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A point or direction in E^4.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector4(pub [f64; 4]);

impl Vector4 {
    pub const ZERO: Vector4 = Vector4([0.0; 4]);

    pub const fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Vector4([x, y, z, w])
    }

    /// The standard basis vector e_i (0-indexed).
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 4];
        c[i] = 1.0;
        Vector4(c)
    }

    pub fn dot(self, other: Vector4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalize(self) -> Result<Vector4> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateVector);
        }
        Ok(self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Cross product of the e1-e2-e3 part, with zero fourth component.
    /// Used to complete right-handed frames for curves on S^2.
    pub fn cross3(self, other: Vector4) -> Vector4 {
        let [a1, a2, a3, _] = self.0;
        let [b1, b2, b3, _] = other.0;
        Vector4([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1, 0.0])
    }
}

impl Add for Vector4 {
    type Output = Vector4;
    fn add(self, rhs: Vector4) -> Vector4 {
        let mut c = self.0;
        for (ci, r) in c.iter_mut().zip(rhs.0) {
            *ci += r;
        }
        Vector4(c)
    }
}

impl Sub for Vector4 {
    type Output = Vector4;
    fn sub(self, rhs: Vector4) -> Vector4 {
        let mut c = self.0;
        for (ci, r) in c.iter_mut().zip(rhs.0) {
            *ci -= r;
        }
        Vector4(c)
    }
}

impl Mul<f64> for Vector4 {
    type Output = Vector4;
    fn mul(self, s: f64) -> Vector4 {
        Vector4(self.0.map(|c| c * s))
    }
}

impl Neg for Vector4 {
    type Output = Vector4;
    fn neg(self) -> Vector4 {
        self * -1.0
    }
}

/// An element of Lambda^2(E^4) in the ordered basis
/// (e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bivector4(pub [f64; 6]);

impl Bivector4 {
    pub const ZERO: Bivector4 = Bivector4([0.0; 6]);

    /// Inner product in which the wedge basis above is orthonormal.
    /// Satisfies <a^b, c^d> = (a.c)(b.d) - (a.d)(b.c).
    pub fn dot(self, other: Bivector4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Add for Bivector4 {
    type Output = Bivector4;
    fn add(self, rhs: Bivector4) -> Bivector4 {
        let mut c = self.0;
        for (ci, r) in c.iter_mut().zip(rhs.0) {
            *ci += r;
        }
        Bivector4(c)
    }
}

impl Sub for Bivector4 {
    type Output = Bivector4;
    fn sub(self, rhs: Bivector4) -> Bivector4 {
        let mut c = self.0;
        for (ci, r) in c.iter_mut().zip(rhs.0) {
            *ci -= r;
        }
        Bivector4(c)
    }
}

impl Mul<f64> for Bivector4 {
    type Output = Bivector4;
    fn mul(self, s: f64) -> Bivector4 {
        Bivector4(self.0.map(|c| c * s))
    }
}

impl Neg for Bivector4 {
    type Output = Bivector4;
    fn neg(self) -> Bivector4 {
        self * -1.0
    }
}

/// Exterior product of two vectors: components are the 2x2 minors
/// a_i b_j - a_j b_i in basis order.
pub fn wedge(a: Vector4, b: Vector4) -> Bivector4 {
    let [a1, a2, a3, a4] = a.0;
    let [b1, b2, b3, b4] = b.0;
    Bivector4([
        a1 * b2 - a2 * b1,
        a1 * b3 - a3 * b1,
        a1 * b4 - a4 * b1,
        a2 * b3 - a3 * b2,
        a2 * b4 - a4 * b2,
        a3 * b4 - a4 * b3,
    ])
}

/// A 2x2 real matrix; houses the shape operators in the (x, y) tangent basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Matrix2 {
    pub m: [[f64; 2]; 2],
}

impl Matrix2 {
    pub fn diag(a: f64, b: f64) -> Self {
        Matrix2 {
            m: [[a, 0.0], [0.0, b]],
        }
    }

    pub fn matmul(self, other: Matrix2) -> Matrix2 {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * other.m[0][j] + self.m[i][1] * other.m[1][j];
            }
        }
        Matrix2 { m: out }
    }

    /// Commutator [A, B] = AB - BA.
    pub fn commutator(self, other: Matrix2) -> Matrix2 {
        let ab = self.matmul(other);
        let ba = other.matmul(self);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = ab.m[i][j] - ba.m[i][j];
            }
        }
        Matrix2 { m: out }
    }

    pub fn max_abs(self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vector4 {
        Vector4::basis(i)
    }

    #[test]
    fn wedge_basis_case() {
        assert_eq!(wedge(e(0), e(1)).0, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn wedge_self_is_zero() {
        let v = Vector4::new(1.3, -2.0, 0.7, 4.1);
        assert_eq!(wedge(v, v), Bivector4::ZERO);
    }

    #[test]
    fn wedge_hand_expanded_minors() {
        let a = Vector4::new(1.0, 1.0, 0.0, 0.0);
        let b = Vector4::new(0.0, 0.0, 1.0, 1.0);
        assert_eq!(wedge(a, b).0, [0.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn wedge_antisymmetric() {
        let a = Vector4::new(0.3, -1.1, 2.2, 0.5);
        let b = Vector4::new(1.7, 0.4, -0.9, 3.0);
        let ab = wedge(a, b);
        let ba = wedge(b, a);
        for i in 0..6 {
            assert!((ab.0[i] + ba.0[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn biv_inner_basis_cases() {
        assert_eq!(wedge(e(0), e(1)).dot(wedge(e(0), e(1))), 1.0);
        assert_eq!(wedge(e(0), e(1)).dot(wedge(e(2), e(3))), 0.0);
    }

    #[test]
    fn dot_and_norm_basics() {
        assert_eq!(e(0).dot(e(0)), 1.0);
        assert_eq!(Vector4::new(3.0, 4.0, 0.0, 0.0).norm(), 5.0);
        assert!(matches!(
            Vector4::ZERO.normalize(),
            Err(Error::DegenerateVector)
        ));
    }

    // Independent oracle: <a^b, c^d> must equal the 2x2 Gram determinant
    // (a.c)(b.d) - (a.d)(b.c).
    #[test]
    fn biv_inner_matches_gram_determinant() {
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for _ in 0..1000 {
            let a = Vector4::new(next(), next(), next(), next());
            let b = Vector4::new(next(), next(), next(), next());
            let c = Vector4::new(next(), next(), next(), next());
            let d = Vector4::new(next(), next(), next(), next());
            let lhs = wedge(a, b).dot(wedge(c, d));
            let gram = a.dot(c) * b.dot(d) - a.dot(d) * b.dot(c);
            assert!(
                (lhs - gram).abs() <= 1e-10 * (1.0 + gram.abs()),
                "lhs={lhs} gram={gram}"
            );
        }
    }

    #[test]
    fn commutator_of_diagonals_vanishes() {
        let a = Matrix2::diag(0.0, 2.0);
        let b = Matrix2::diag(1.5, -0.3);
        assert_eq!(a.commutator(b).max_abs(), 0.0);
    }
}

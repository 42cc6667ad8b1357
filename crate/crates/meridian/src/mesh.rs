//! Triangulated grid meshes of the E^4 surface projected to E^3, in the
//! plain text format "v x y z" / "f i j k" (1-indexed).

use crate::error::{Error, Result};
use crate::linalg4::Vector4;
use crate::surface::MeridianSurface;

#[derive(Debug, Clone)]
pub enum Projection {
    /// Drop coordinate axis k (0-indexed).
    DropAxis(usize),
    /// Orthographic projection by a 3x4 matrix.
    Orthographic([[f64; 4]; 3]),
}

impl Projection {
    pub fn apply(&self, p: Vector4) -> [f64; 3] {
        match self {
            Projection::DropAxis(k) => {
                let mut out = [0.0; 3];
                let mut j = 0;
                for i in 0..4 {
                    if i != *k {
                        out[j] = p.0[i];
                        j += 1;
                    }
                }
                out
            }
            Projection::Orthographic(m) => {
                let mut out = [0.0; 3];
                for (i, row) in m.iter().enumerate() {
                    out[i] = row.iter().zip(p.0.iter()).map(|(a, b)| a * b).sum();
                }
                out
            }
        }
    }

    /// A degenerate projection flattens the image; callers surface this as a
    /// warning, not an error.
    pub fn degeneracy_warning(&self) -> Option<String> {
        let Projection::Orthographic(m) = self else {
            return None;
        };
        // rank of the 3x4 matrix by Gram determinant of the rows
        let dot = |a: &[f64; 4], b: &[f64; 4]| -> f64 {
            a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
        };
        let g = [
            [dot(&m[0], &m[0]), dot(&m[0], &m[1]), dot(&m[0], &m[2])],
            [dot(&m[1], &m[0]), dot(&m[1], &m[1]), dot(&m[1], &m[2])],
            [dot(&m[2], &m[0]), dot(&m[2], &m[1]), dot(&m[2], &m[2])],
        ];
        let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        if det.abs() < 1e-12 {
            Some(format!(
                "orthographic projection matrix has rank < 3 (gram det = {det:.3e}); \
                 the mesh will be flattened"
            ))
        } else {
            None
        }
    }
}

/// Builds an nu x nv vertex grid over the full domain and triangulates each
/// cell into two faces: nu*nv vertices, 2*(nu-1)*(nv-1) triangles.
pub fn export_mesh(
    surface: &MeridianSurface,
    nu: usize,
    nv: usize,
    projection: &Projection,
) -> Result<String> {
    if nu < 2 || nv < 2 {
        return Err(Error::GridTooSmall { min: 2, nu, nv });
    }
    let ((u0, u1), (v0, v1)) = surface.domain();
    let mut out = String::new();
    for i in 0..nu {
        let u = u0 + (u1 - u0) * i as f64 / (nu - 1) as f64;
        for j in 0..nv {
            let v = v0 + (v1 - v0) * j as f64 / (nv - 1) as f64;
            let p = projection.apply(surface.eval_point(u, v)?);
            out.push_str(&format!("v {:.17e} {:.17e} {:.17e}\n", p[0], p[1], p[2]));
        }
    }
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j + 1; // 1-indexed
            let b = a + 1;
            let c = a + nv;
            let d = c + 1;
            out.push_str(&format!("f {a} {c} {b}\n"));
            out.push_str(&format!("f {b} {c} {d}\n"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{MeridianProfile, SphericalCurve};

    fn plane() -> MeridianSurface {
        MeridianSurface::new(
            MeridianProfile::GConstant {
                slope: 1.0,
                intercept: 1.0,
                g_value: 0.0,
                domain: (0.0, 2.0),
            },
            SphericalCurve::circle(0.0, (0.0, 1.0)),
        )
    }

    #[test]
    fn mesh_counts_for_8x8_grid() {
        let text = export_mesh(&plane(), 8, 8, &Projection::DropAxis(3)).unwrap();
        let verts = text.lines().filter(|l| l.starts_with("v ")).count();
        let faces = text.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(verts, 64);
        assert_eq!(faces, 98);
    }

    #[test]
    fn plane_mesh_is_coplanar() {
        // plane surface lives in the e1-e2 plane (kappa = 0, g = 0), so after
        // dropping e4 every vertex has zero third coordinate
        let text = export_mesh(&plane(), 8, 8, &Projection::DropAxis(3)).unwrap();
        for line in text.lines().filter(|l| l.starts_with("v ")) {
            let z: f64 = line.split_whitespace().nth(3).unwrap().parse().unwrap();
            assert!(z.abs() <= 1e-9);
        }
    }

    #[test]
    fn vertices_match_eval_point() {
        let s = plane();
        let text = export_mesh(&s, 3, 3, &Projection::DropAxis(3)).unwrap();
        let first = text.lines().next().unwrap();
        let x: f64 = first.split_whitespace().nth(1).unwrap().parse().unwrap();
        let expect = s.eval_point(0.0, 0.0).unwrap().0[0];
        assert!((x - expect).abs() < 1e-12);
    }

    #[test]
    fn degenerate_projection_warns() {
        let m = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
        ];
        assert!(Projection::Orthographic(m).degeneracy_warning().is_some());
        assert!(Projection::DropAxis(3).degeneracy_warning().is_none());
    }
}

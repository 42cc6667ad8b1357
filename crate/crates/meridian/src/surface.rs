//! The meridian surface z(u, v) = f(u) r(v) + g(u) e4, its adapted frame
//! {x, y, n1, n2}, shape operators, curvatures and connection coefficients.

use crate::curves::{MeridianProfile, ProfileEval, SphericalCurve};
use crate::error::{Error, Result};
use crate::linalg4::{Matrix2, Vector4};

#[derive(Debug, Clone)]
pub struct MeridianSurface {
    pub profile: MeridianProfile,
    pub curve: SphericalCurve,
}

/// The adapted orthonormal frame at (u, v):
/// x = f' r + g' e4, y = t, n1 = n, n2 = -g' r + f' e4.
#[derive(Debug, Clone, Copy)]
pub struct FrameAt {
    pub x: Vector4,
    pub y: Vector4,
    pub n1: Vector4,
    pub n2: Vector4,
    pub u: f64,
    pub v: f64,
}

/// The eight nonzero coefficients of the ambient covariant derivatives of
/// the adapted frame, in the order they appear in the derivative table:
/// nabla_x x = ka n2; nabla_x y = 0; nabla_y x = (f'/f) y;
/// nabla_y y = -(f'/f) x + (k/f) n1 + (g'/f) n2;
/// nabla_x n1 = 0; nabla_y n1 = -(k/f) y;
/// nabla_x n2 = -ka x; nabla_y n2 = -(g'/f) y.
#[derive(Debug, Clone, Copy)]
pub struct ConnectionCoefficients {
    /// nabla_x x, n2 component.
    pub xx_n2: f64,
    /// nabla_x y (all components).
    pub xy: f64,
    /// nabla_y x, y component.
    pub yx_y: f64,
    /// nabla_y y, x component.
    pub yy_x: f64,
    /// nabla_y y, n1 component.
    pub yy_n1: f64,
    /// nabla_y y, n2 component.
    pub yy_n2: f64,
    /// nabla_x n1 (all components).
    pub xn1: f64,
    /// nabla_y n1, y component.
    pub yn1_y: f64,
    /// nabla_x n2, x component.
    pub xn2_x: f64,
    /// nabla_y n2, y component.
    pub yn2_y: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ShapeOperators {
    /// A_{n1} = diag(0, k/f) in the (x, y) basis.
    pub a1: Matrix2,
    /// A_{n2} = diag(kappa_alpha, g'/f) in the (x, y) basis.
    pub a2: Matrix2,
}

impl MeridianSurface {
    pub fn new(profile: MeridianProfile, curve: SphericalCurve) -> MeridianSurface {
        MeridianSurface { profile, curve }
    }

    pub fn domain(&self) -> ((f64, f64), (f64, f64)) {
        (self.profile.domain(), self.curve.domain())
    }

    /// Profile data at u, with the embedding-regularity check f != 0.
    pub fn profile_at(&self, u: f64) -> Result<ProfileEval> {
        let e = self.profile.eval(u)?;
        if e.f == 0.0 {
            return Err(Error::SingularProfile { u });
        }
        Ok(e)
    }

    /// z(u, v) = f(u) r(v) + g(u) e4.
    pub fn eval_point(&self, u: f64, v: f64) -> Result<Vector4> {
        let p = self.profile_at(u)?;
        let fr = self.curve.frenet_frame(v)?;
        Ok(fr.r * p.f + Vector4::basis(3) * p.g)
    }

    pub fn frame_at(&self, u: f64, v: f64) -> Result<FrameAt> {
        let p = self.profile_at(u)?;
        let fr = self.curve.frenet_frame(v)?;
        let e4 = Vector4::basis(3);
        Ok(FrameAt {
            x: fr.r * p.df + e4 * p.dg,
            y: fr.t,
            n1: fr.n,
            n2: fr.r * (-p.dg) + e4 * p.df,
            u,
            v,
        })
    }

    pub fn shape_operators(&self, u: f64, v: f64) -> Result<ShapeOperators> {
        let p = self.profile_at(u)?;
        let k = self.curve.spherical_curvature(v)?;
        Ok(ShapeOperators {
            a1: Matrix2::diag(0.0, k / p.f),
            a2: Matrix2::diag(p.kappa_alpha, p.dg / p.f),
        })
    }

    /// Gauss curvature K = kappa_alpha g' / f.
    pub fn gauss_curvature(&self, u: f64, v: f64) -> Result<f64> {
        let p = self.profile_at(u)?;
        self.curve.spherical_curvature(v)?;
        Ok(p.kappa_alpha * p.dg / p.f)
    }

    /// Mean curvature vector H = (k/2f) n1 + ((kappa_alpha f + g')/2f) n2,
    /// returned in ambient E^4 coordinates.
    pub fn mean_curvature_vector(&self, u: f64, v: f64) -> Result<Vector4> {
        let p = self.profile_at(u)?;
        let k = self.curve.spherical_curvature(v)?;
        let frame = self.frame_at(u, v)?;
        Ok(frame.n1 * (k / (2.0 * p.f)) + frame.n2 * ((p.kappa_alpha * p.f + p.dg) / (2.0 * p.f)))
    }

    pub fn connection_coefficients(&self, u: f64, v: f64) -> Result<ConnectionCoefficients> {
        let p = self.profile_at(u)?;
        let k = self.curve.spherical_curvature(v)?;
        Ok(ConnectionCoefficients {
            xx_n2: p.kappa_alpha,
            xy: 0.0,
            yx_y: p.df / p.f,
            yy_x: -p.df / p.f,
            yy_n1: k / p.f,
            yy_n2: p.dg / p.f,
            xn1: 0.0,
            yn1_y: -k / p.f,
            xn2_x: -p.kappa_alpha,
            yn2_y: -p.dg / p.f,
        })
    }

    /// Second fundamental form values from the shape-operator lemma:
    /// h(x,x) = kappa_alpha n2, h(x,y) = 0, h(y,y) = (k/f) n1 + (g'/f) n2.
    pub fn second_fundamental_form(&self, u: f64, v: f64) -> Result<[Vector4; 3]> {
        let p = self.profile_at(u)?;
        let k = self.curve.spherical_curvature(v)?;
        let frame = self.frame_at(u, v)?;
        Ok([
            frame.n2 * p.kappa_alpha,
            Vector4::ZERO,
            frame.n1 * (k / p.f) + frame.n2 * (p.dg / p.f),
        ])
    }

    /// Totally geodesic test: max(|kappa_alpha|, |kappa|, |g'|) over the grid.
    pub fn totally_geodesic_defect(&self, grid: &[(f64, f64)]) -> Result<f64> {
        let mut worst = 0.0_f64;
        for &(u, v) in grid {
            let p = self.profile_at(u)?;
            let k = self.curve.spherical_curvature(v)?;
            worst = worst.max(p.kappa_alpha.abs()).max(k.abs()).max(p.dg.abs());
        }
        Ok(worst)
    }

    pub fn is_totally_geodesic(&self, grid: &[(f64, f64)]) -> Result<bool> {
        Ok(self.totally_geodesic_defect(grid)? <= 1e-9)
    }
}

/// Uniform sample grid over a rectangle, inset by `margin` from each edge.
pub fn sample_grid(
    u_range: (f64, f64),
    v_range: (f64, f64),
    nu: usize,
    nv: usize,
    margin: f64,
) -> Vec<(f64, f64)> {
    let (u0, u1) = (u_range.0 + margin, u_range.1 - margin);
    let (v0, v1) = (v_range.0 + margin, v_range.1 - margin);
    let mut pts = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let fu = if nu > 1 {
            i as f64 / (nu - 1) as f64
        } else {
            0.5
        };
        for j in 0..nv {
            let fv = if nv > 1 {
                j as f64 / (nv - 1) as f64
            } else {
                0.5
            };
            pts.push((u0 + fu * (u1 - u0), v0 + fv * (v1 - v0)));
        }
    }
    pts
}

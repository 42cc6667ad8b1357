//! The Gauss map G = x ^ y of a meridian surface, its closed-form Laplacian
//! on the moving bivector basis, and an independent finite-difference
//! Laplacian used as the numeric oracle.
//!
//! Sign convention: the Laplacian has positive spectrum, so on component
//! functions it reduces to -[G_uu + (1/f^2) G_vv + (f'/f) G_u].
//! This reduction was re-derived by hand from the frame x = d/du,
//! y = (1/f) d/dv and the connection (nabla_y y has tangential part
//! -(f'/f) x, nabla_x x has none) and is confirmed against the closed
//! form on a worked constant-f example in the tests below.

use crate::error::{Error, Result};
use crate::linalg4::{wedge, Bivector4};
use crate::surface::{FrameAt, MeridianSurface};

/// Base finite-difference step; Richardson extrapolation combines this with
/// half of it. Grid points within 2h of the boundary are excluded upstream.
pub const FD_BASE_STEP: f64 = 1e-3;

/// The Laplacian of the Gauss map on the moving bivector basis
/// {x^y, x^n1, x^n2, y^n1, y^n2, n1^n2}, plus the assembled ambient bivector.
/// The x^n2 and n1^n2 coefficients are identically zero.
#[derive(Debug, Clone, Copy)]
pub struct LaplacianDecomposition {
    pub xy: f64,
    pub xn1: f64,
    pub xn2: f64,
    pub yn1: f64,
    pub yn2: f64,
    pub n1n2: f64,
    pub ambient: Bivector4,
}

/// G(u, v) = x ^ y, a unit bivector.
pub fn gauss_map(surface: &MeridianSurface, u: f64, v: f64) -> Result<Bivector4> {
    let fr = surface.frame_at(u, v)?;
    Ok(wedge(fr.x, fr.y))
}

/// Closed-form Laplacian:
/// Delta G = ((f ka)^2 + k^2 + g'^2)/f^2 x^y - k'/f^2 x^n1
///         - k f'/f^2 y^n1 - (f' g' - f (f ka)')/f^2 y^n2.
pub fn laplacian_closed(
    surface: &MeridianSurface,
    u: f64,
    v: f64,
) -> Result<LaplacianDecomposition> {
    let p = surface.profile_at(u)?;
    let k = surface.curve.spherical_curvature(v)?;
    let dk = surface.curve.spherical_curvature_deriv(v)?;
    let fr = surface.frame_at(u, v)?;
    let f2 = p.f * p.f;
    let fka = p.f * p.kappa_alpha;
    let xy = (fka * fka + k * k + p.dg * p.dg) / f2;
    let xn1 = -dk / f2;
    let yn1 = -k * p.df / f2;
    let yn2 = -(p.df * p.dg - p.f * p.d_fka) / f2;
    Ok(assemble(&fr, xy, xn1, 0.0, yn1, yn2, 0.0))
}

fn assemble(
    fr: &FrameAt,
    xy: f64,
    xn1: f64,
    xn2: f64,
    yn1: f64,
    yn2: f64,
    n1n2: f64,
) -> LaplacianDecomposition {
    let ambient = wedge(fr.x, fr.y) * xy
        + wedge(fr.x, fr.n1) * xn1
        + wedge(fr.x, fr.n2) * xn2
        + wedge(fr.y, fr.n1) * yn1
        + wedge(fr.y, fr.n2) * yn2
        + wedge(fr.n1, fr.n2) * n1n2;
    LaplacianDecomposition {
        xy,
        xn1,
        xn2,
        yn1,
        yn2,
        n1n2,
        ambient,
    }
}

/// Projects an ambient bivector onto the moving bivector basis at (u, v).
pub fn decompose(fr: &FrameAt, b: Bivector4) -> LaplacianDecomposition {
    let xy = b.dot(wedge(fr.x, fr.y));
    let xn1 = b.dot(wedge(fr.x, fr.n1));
    let xn2 = b.dot(wedge(fr.x, fr.n2));
    let yn1 = b.dot(wedge(fr.y, fr.n1));
    let yn2 = b.dot(wedge(fr.y, fr.n2));
    let n1n2 = b.dot(wedge(fr.n1, fr.n2));
    LaplacianDecomposition {
        xy,
        xn1,
        xn2,
        yn1,
        yn2,
        n1n2,
        ambient: b,
    }
}

fn fd_once(surface: &MeridianSurface, u: f64, v: f64, h: f64) -> Result<Bivector4> {
    let g00 = gauss_map(surface, u, v)?;
    let gup = gauss_map(surface, u + h, v)?;
    let gum = gauss_map(surface, u - h, v)?;
    let gvp = gauss_map(surface, u, v + h)?;
    let gvm = gauss_map(surface, u, v - h)?;
    let p = surface.profile_at(u)?;
    let guu = (gup + gum - g00 * 2.0) * (1.0 / (h * h));
    let gvv = (gvp + gvm - g00 * 2.0) * (1.0 / (h * h));
    let gu = (gup - gum) * (0.5 / h);
    Ok(-(guu + gvv * (1.0 / (p.f * p.f)) + gu * (p.df / p.f)))
}

/// Finite-difference Laplacian of G with central differences of step h,
/// Richardson-extrapolated across h and h/2 (second-order differences, so
/// the combination is (4 L(h/2) - L(h)) / 3).
pub fn laplacian_fd(surface: &MeridianSurface, u: f64, v: f64, h: f64) -> Result<Bivector4> {
    let ((u0, u1), (v0, v1)) = surface.domain();
    if u - 2.0 * h < u0 || u + 2.0 * h > u1 || v - 2.0 * h < v0 || v + 2.0 * h > v1 {
        return Err(Error::Domain {
            value: u,
            lo: u0 + 2.0 * h,
            hi: u1 - 2.0 * h,
        });
    }
    let coarse = fd_once(surface, u, v, h)?;
    let fine = fd_once(surface, u, v, h / 2.0)?;
    Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{MeridianProfile, SphericalCurve};
    use crate::surface::sample_grid;

    fn plane() -> MeridianSurface {
        MeridianSurface::new(
            MeridianProfile::GConstant {
                slope: 1.0,
                intercept: 1.0,
                g_value: 0.0,
                domain: (0.0, 2.0),
            },
            SphericalCurve::circle(0.0, (0.0, 3.0)),
        )
    }

    fn ruled(kappa0: f64) -> MeridianSurface {
        MeridianSurface::new(
            MeridianProfile::GConstant {
                slope: 1.0,
                intercept: 1.0,
                g_value: 0.0,
                domain: (0.0, 2.0),
            },
            SphericalCurve::circle(kappa0, (0.0, 3.0)),
        )
    }

    fn cylinder_like(kappa0: f64) -> MeridianSurface {
        MeridianSurface::new(
            MeridianProfile::analytic(|_| [1.0, 0.0, 0.0, 0.0], 1.0, 0.0, (0.0, 2.0)),
            SphericalCurve::circle(kappa0, (0.0, 3.0)),
        )
    }

    #[test]
    fn gauss_map_is_unit_and_constant_on_plane() {
        let s = plane();
        let g0 = gauss_map(&s, 0.1, 0.1).unwrap();
        for (u, v) in sample_grid((0.0, 2.0), (0.0, 3.0), 6, 6, 0.01) {
            let g = gauss_map(&s, u, v).unwrap();
            assert!((g.norm() - 1.0).abs() < 1e-12);
            assert!((g - g0).norm() < 1e-12);
        }
    }

    #[test]
    fn gauss_map_unit_everywhere() {
        let s = cylinder_like(1.2);
        for (u, v) in sample_grid((0.0, 2.0), (0.0, 3.0), 8, 8, 0.01) {
            assert!((gauss_map(&s, u, v).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_vanishes_on_plane() {
        let s = plane();
        for (u, v) in sample_grid((0.0, 2.0), (0.0, 3.0), 6, 6, 0.01) {
            assert!(laplacian_closed(&s, u, v).unwrap().ambient.norm() < 1e-14);
        }
    }

    // Worked example fixing the sign convention of the reduction: f = 1,
    // g' = 1, circle kappa0 -- here G = e4 ^ t and
    // G_vv = -(1 + kappa0^2) G, so Delta G = (1 + kappa0^2) x^y exactly.
    #[test]
    fn constant_f_closed_form_and_fd() {
        for kappa0 in [0.0, 1.0, 2.0] {
            let s = cylinder_like(kappa0);
            let want = 1.0 + kappa0 * kappa0;
            let d = laplacian_closed(&s, 1.0, 1.5).unwrap();
            assert!((d.xy - want).abs() < 1e-12);
            assert!(d.xn1.abs() + d.xn2.abs() + d.yn1.abs() + d.yn2.abs() + d.n1n2.abs() < 1e-12);
            let fd = laplacian_fd(&s, 1.0, 1.5, FD_BASE_STEP).unwrap();
            let g = gauss_map(&s, 1.0, 1.5).unwrap();
            assert!((fd - g * want).norm() < 1e-6, "kappa0={kappa0}");
        }
    }

    // Ruled Case I surface: Delta G = (kappa0^2/f^2) x^y - (kappa0/f^2) y^n1.
    #[test]
    fn ruled_case_closed_form() {
        let kappa0 = 1.5;
        let s = ruled(kappa0);
        let (u, v) = (0.5, 1.0);
        let f = 1.0 + u;
        let d = laplacian_closed(&s, u, v).unwrap();
        assert!((d.xy - kappa0 * kappa0 / (f * f)).abs() < 1e-12);
        assert!((d.yn1 + kappa0 / (f * f)).abs() < 1e-12);
        assert!(d.xn1.abs() + d.xn2.abs() + d.yn2.abs() + d.n1n2.abs() < 1e-12);
    }

    #[test]
    fn fd_vanishes_on_plane() {
        let s = plane();
        for (u, v) in sample_grid((0.0, 2.0), (0.0, 3.0), 5, 5, 0.05) {
            assert!(laplacian_fd(&s, u, v, FD_BASE_STEP).unwrap().norm() < 1e-8);
        }
    }

    #[test]
    fn fd_matches_closed_form_on_generic_surface() {
        let s = MeridianSurface::new(
            MeridianProfile::analytic(
                |u: f64| {
                    let s = 0.4 * (0.8 * u).sin();
                    [
                        1.7 + s,
                        0.32 * (0.8 * u).cos(),
                        -0.256 * (0.8 * u).sin(),
                        -0.2048 * (0.8 * u).cos(),
                    ]
                },
                1.0,
                0.0,
                (0.0, 2.0),
            ),
            SphericalCurve::circle(0.7, (0.0, 3.0)),
        );
        for (u, v) in sample_grid((0.0, 2.0), (0.0, 3.0), 5, 5, 0.05) {
            let closed = laplacian_closed(&s, u, v).unwrap().ambient;
            let fd = laplacian_fd(&s, u, v, FD_BASE_STEP).unwrap();
            let denom = closed.norm().max(1.0);
            assert!(
                (fd - closed).norm() / denom < 1e-5,
                "({u},{v}): {:?} vs {:?}",
                fd,
                closed
            );
        }
    }

    #[test]
    fn vanishing_components_of_fd() {
        let s = cylinder_like(0.9);
        let (u, v) = (1.0, 1.5);
        let fr = s.frame_at(u, v).unwrap();
        let fd = laplacian_fd(&s, u, v, FD_BASE_STEP).unwrap();
        let d = decompose(&fr, fd);
        assert!(d.xn2.abs() < 1e-5);
        assert!(d.n1n2.abs() < 1e-5);
    }

    #[test]
    fn fd_near_boundary_is_rejected() {
        let s = plane();
        assert!(matches!(
            laplacian_fd(&s, 0.0005, 1.0, FD_BASE_STEP),
            Err(Error::Domain { .. })
        ));
    }
}

//! Curves feeding the meridian construction: a unit-speed curve c on the
//! unit sphere S^2 in span{e1,e2,e3} with its moving frame {t, n, r}, and
//! the plane meridian profile alpha = (f, g) with unit-speed constraint
//! f'^2 + g'^2 = 1.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg4::Vector4;

/// Integration step for the numeric Frenet kind.
const FRENET_STEP: f64 = 1e-4;

/// The moving frame of c at a parameter value, embedded in E^4 with zero
/// fourth component.
#[derive(Debug, Clone, Copy)]
pub struct CurveFrame {
    pub r: Vector4,
    pub t: Vector4,
    pub n: Vector4,
}

impl CurveFrame {
    fn orthonormalized(self) -> Result<CurveFrame> {
        let r = self.r.normalize()?;
        let t = (self.t - r * self.t.dot(r)).normalize()?;
        let n = (self.n - r * self.n.dot(r) - t * self.n.dot(t)).normalize()?;
        Ok(CurveFrame { r, t, n })
    }
}

type KappaFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A unit-speed curve on S^2(1), given either as a circle of constant
/// spherical curvature or by integrating the Frenet system
/// r' = t, t' = kappa n - r, n' = -kappa t from an initial frame.
#[derive(Clone)]
pub enum SphericalCurve {
    Circle { kappa0: f64, domain: (f64, f64) },
    Numeric(NumericCurve),
}

impl std::fmt::Debug for SphericalCurve {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SphericalCurve::Circle { kappa0, domain } => fm
                .debug_struct("Circle")
                .field("kappa0", kappa0)
                .field("domain", domain)
                .finish(),
            SphericalCurve::Numeric(c) => fm
                .debug_struct("Numeric")
                .field("domain", &c.domain)
                .finish(),
        }
    }
}

/// Frenet-numeric curve: frames precomputed on a fixed fine grid, with one
/// final partial step per evaluation. Each accepted step is re-orthonormalized.
#[derive(Clone)]
pub struct NumericCurve {
    kappa: KappaFn,
    domain: (f64, f64),
    table: Arc<Vec<CurveFrame>>,
}

fn frenet_rhs(frame: &CurveFrame, kappa: f64) -> CurveFrame {
    CurveFrame {
        r: frame.t,
        t: frame.n * kappa - frame.r,
        n: frame.t * (-kappa),
    }
}

fn frame_axpy(a: &CurveFrame, s: f64, d: &CurveFrame) -> CurveFrame {
    CurveFrame {
        r: a.r + d.r * s,
        t: a.t + d.t * s,
        n: a.n + d.n * s,
    }
}

/// One classical fourth-order step of the Frenet system.
fn frenet_rk4_step(frame: &CurveFrame, v: f64, h: f64, kappa: &dyn Fn(f64) -> f64) -> CurveFrame {
    let k1 = frenet_rhs(frame, kappa(v));
    let k2 = frenet_rhs(&frame_axpy(frame, h / 2.0, &k1), kappa(v + h / 2.0));
    let k3 = frenet_rhs(&frame_axpy(frame, h / 2.0, &k2), kappa(v + h / 2.0));
    let k4 = frenet_rhs(&frame_axpy(frame, h, &k3), kappa(v + h));
    CurveFrame {
        r: frame.r + (k1.r + k2.r * 2.0 + k3.r * 2.0 + k4.r) * (h / 6.0),
        t: frame.t + (k1.t + k2.t * 2.0 + k3.t * 2.0 + k4.t) * (h / 6.0),
        n: frame.n + (k1.n + k2.n * 2.0 + k3.n * 2.0 + k4.n) * (h / 6.0),
    }
}

impl NumericCurve {
    /// Builds the frame table over `domain` starting from `initial`
    /// (defaults to the standard frame r = e1, t = e2, n = e3 at domain start).
    pub fn new(
        kappa: KappaFn,
        domain: (f64, f64),
        initial: Option<CurveFrame>,
    ) -> Result<NumericCurve> {
        let (v0, v1) = domain;
        if !v0.is_finite() || !v1.is_finite() || v1 <= v0 {
            return Err(Error::Config(format!("bad curve domain [{v0}, {v1}]")));
        }
        if v1 - v0 > 50.0 {
            return Err(Error::Config("curve domain span exceeds 50".into()));
        }
        let mut frame = initial
            .unwrap_or(CurveFrame {
                r: Vector4::basis(0),
                t: Vector4::basis(1),
                n: Vector4::basis(2),
            })
            .orthonormalized()?;
        let steps = ((v1 - v0) / FRENET_STEP).ceil() as usize;
        let mut table = Vec::with_capacity(steps + 1);
        table.push(frame);
        for i in 0..steps {
            let v = v0 + i as f64 * FRENET_STEP;
            let h = FRENET_STEP.min(v1 - v);
            frame = frenet_rk4_step(&frame, v, h, &*kappa).orthonormalized()?;
            table.push(frame);
        }
        Ok(NumericCurve {
            kappa,
            domain,
            table: Arc::new(table),
        })
    }

    fn frame(&self, v: f64) -> CurveFrame {
        let (v0, v1) = self.domain;
        let idx = (((v - v0) / FRENET_STEP).floor() as isize)
            .clamp(0, self.table.len() as isize - 1) as usize;
        let node_v = (v0 + idx as f64 * FRENET_STEP).min(v1);
        let frame = self.table[idx];
        let dv = v - node_v;
        if dv.abs() < 1e-300 {
            return frame;
        }
        frenet_rk4_step(&frame, node_v, dv, &*self.kappa)
            .orthonormalized()
            .expect("frame stays orthonormalizable inside the domain")
    }
}

impl SphericalCurve {
    pub fn circle(kappa0: f64, domain: (f64, f64)) -> SphericalCurve {
        SphericalCurve::Circle { kappa0, domain }
    }

    pub fn numeric(
        kappa: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
    ) -> Result<SphericalCurve> {
        Ok(SphericalCurve::Numeric(NumericCurve::new(
            Arc::new(kappa),
            domain,
            None,
        )?))
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            SphericalCurve::Circle { domain, .. } => *domain,
            SphericalCurve::Numeric(c) => c.domain,
        }
    }

    fn check_domain(&self, v: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if v < lo - 1e-12 || v > hi + 1e-12 {
            return Err(Error::Domain { value: v, lo, hi });
        }
        Ok(())
    }

    /// The moving frame {r, t, n} at v.
    ///
    /// For a circle of spherical curvature kappa0 the curve is
    /// r(v) = (R cos(v/R), R sin(v/R), z0, 0) with R = 1/sqrt(1+kappa0^2)
    /// and z0 = kappa0/sqrt(1+kappa0^2).
    pub fn frenet_frame(&self, v: f64) -> Result<CurveFrame> {
        self.check_domain(v)?;
        match self {
            SphericalCurve::Circle { kappa0, .. } => {
                let q = (1.0 + kappa0 * kappa0).sqrt();
                let radius = 1.0 / q;
                let z0 = kappa0 / q;
                let (s, c) = (v / radius).sin_cos();
                Ok(CurveFrame {
                    r: Vector4::new(radius * c, radius * s, z0, 0.0),
                    t: Vector4::new(-s, c, 0.0, 0.0),
                    n: Vector4::new(-kappa0 * radius * c, -kappa0 * radius * s, radius, 0.0),
                })
            }
            SphericalCurve::Numeric(curve) => Ok(curve.frame(v)),
        }
    }

    pub fn spherical_curvature(&self, v: f64) -> Result<f64> {
        self.check_domain(v)?;
        match self {
            SphericalCurve::Circle { kappa0, .. } => Ok(*kappa0),
            SphericalCurve::Numeric(c) => Ok((c.kappa)(v)),
        }
    }

    /// d(kappa)/dv; central differences of the supplied kappa for the
    /// numeric kind (h = 1e-5, clipped at the domain ends).
    pub fn spherical_curvature_deriv(&self, v: f64) -> Result<f64> {
        self.check_domain(v)?;
        match self {
            SphericalCurve::Circle { .. } => Ok(0.0),
            SphericalCurve::Numeric(c) => {
                let (lo, hi) = c.domain;
                let h = 1e-5_f64.min((hi - lo) / 4.0);
                let a = (v - h).max(lo);
                let b = (v + h).min(hi);
                Ok(((c.kappa)(b) - (c.kappa)(a)) / (b - a))
            }
        }
    }
}

type DerivFn = Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

/// All quantities of the profile at one u.
#[derive(Debug, Clone, Copy)]
pub struct ProfileEval {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub d3f: f64,
    pub g: f64,
    pub dg: f64,
    /// Meridian curvature kappa_alpha = f' g'' - g' f''.
    pub kappa_alpha: f64,
    /// (f kappa_alpha)'.
    pub d_fka: f64,
}

/// The plane meridian curve alpha = (f, g) with f'^2 + g'^2 = 1.
///
/// f is supplied analytically (or as dense ODE samples); g is always derived:
/// g' = eps * sqrt(1 - f'^2) and g itself by quadrature from the domain start.
/// The degenerate branch g' = 0 (f linear with slope +-1) is a separate kind.
#[derive(Clone)]
pub enum MeridianProfile {
    /// g constant, f = slope * u + intercept with slope = +-1.
    GConstant {
        slope: f64,
        intercept: f64,
        g_value: f64,
        domain: (f64, f64),
    },
    Analytic(AnalyticProfile),
    Sampled(SampledProfile),
}

#[derive(Clone)]
pub struct AnalyticProfile {
    /// Returns [f, f', f'', f'''] at u.
    pub derivs: DerivFn,
    /// Branch sign eps = +-1 in g' = eps * sqrt(1 - f'^2).
    pub eps: f64,
    pub g_offset: f64,
    pub domain: (f64, f64),
}

/// Dense samples of (f, f', f'', f''') on a uniform grid, interpolated by
/// cubic Hermite segments (each column uses the next column as its slope;
/// f''' is interpolated linearly).
#[derive(Clone)]
pub struct SampledProfile {
    pub u0: f64,
    pub step: f64,
    /// nodes[i] = [f, f', f'', f'''] at u0 + i*step.
    pub nodes: Arc<Vec<[f64; 4]>>,
    pub eps: f64,
    pub g_offset: f64,
    /// Set when f''' came from differencing rather than the ODE right-hand side.
    pub lower_accuracy_d3f: bool,
}

impl std::fmt::Debug for MeridianProfile {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeridianProfile::GConstant {
                slope,
                intercept,
                g_value,
                domain,
            } => fm
                .debug_struct("GConstant")
                .field("slope", slope)
                .field("intercept", intercept)
                .field("g_value", g_value)
                .field("domain", domain)
                .finish(),
            MeridianProfile::Analytic(p) => fm
                .debug_struct("Analytic")
                .field("eps", &p.eps)
                .field("domain", &p.domain)
                .finish(),
            MeridianProfile::Sampled(p) => fm
                .debug_struct("Sampled")
                .field("u0", &p.u0)
                .field("nodes", &p.nodes.len())
                .finish(),
        }
    }
}

fn hermite(u: f64, ua: f64, ub: f64, ya: f64, da: f64, yb: f64, db: f64) -> f64 {
    let h = ub - ua;
    let s = (u - ua) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    ya * (2.0 * s3 - 3.0 * s2 + 1.0)
        + da * h * (s3 - 2.0 * s2 + s)
        + yb * (-2.0 * s3 + 3.0 * s2)
        + db * h * (s3 - s2)
}

impl SampledProfile {
    pub fn domain(&self) -> (f64, f64) {
        (self.u0, self.u0 + self.step * (self.nodes.len() - 1) as f64)
    }

    fn derivs_at(&self, u: f64) -> [f64; 4] {
        let n = self.nodes.len();
        let idx = (((u - self.u0) / self.step).floor() as isize).clamp(0, n as isize - 2) as usize;
        let ua = self.u0 + idx as f64 * self.step;
        let ub = ua + self.step;
        let a = self.nodes[idx];
        let b = self.nodes[idx + 1];
        let s = (u - ua) / self.step;
        [
            hermite(u, ua, ub, a[0], a[1], b[0], b[1]),
            hermite(u, ua, ub, a[1], a[2], b[1], b[2]),
            hermite(u, ua, ub, a[2], a[3], b[2], b[3]),
            a[3] * (1.0 - s) + b[3] * s,
        ]
    }
}

impl MeridianProfile {
    pub fn analytic(
        derivs: impl Fn(f64) -> [f64; 4] + Send + Sync + 'static,
        eps: f64,
        g_offset: f64,
        domain: (f64, f64),
    ) -> MeridianProfile {
        MeridianProfile::Analytic(AnalyticProfile {
            derivs: Arc::new(derivs),
            eps,
            g_offset,
            domain,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            MeridianProfile::GConstant { domain, .. } => *domain,
            MeridianProfile::Analytic(p) => p.domain,
            MeridianProfile::Sampled(p) => p.domain(),
        }
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if u < lo - 1e-12 || u > hi + 1e-12 {
            return Err(Error::Domain { value: u, lo, hi });
        }
        Ok(())
    }

    fn raw_derivs(&self, u: f64) -> [f64; 4] {
        match self {
            MeridianProfile::GConstant {
                slope, intercept, ..
            } => [slope * u + intercept, *slope, 0.0, 0.0],
            MeridianProfile::Analytic(p) => (p.derivs)(u),
            MeridianProfile::Sampled(p) => p.derivs_at(u),
        }
    }

    fn eps_and_offset(&self) -> (f64, f64) {
        match self {
            MeridianProfile::GConstant { g_value, .. } => (0.0, *g_value),
            MeridianProfile::Analytic(p) => (p.eps, p.g_offset),
            MeridianProfile::Sampled(p) => (p.eps, p.g_offset),
        }
    }

    /// Evaluates f and its derivatives, g, g', kappa_alpha and (f kappa_alpha)'.
    pub fn eval(&self, u: f64) -> Result<ProfileEval> {
        self.check_domain(u)?;
        let [f, df, d2f, d3f] = self.raw_derivs(u);
        if let MeridianProfile::GConstant { .. } = self {
            let (_, g_value) = self.eps_and_offset();
            return Ok(ProfileEval {
                f,
                df,
                d2f: 0.0,
                d3f: 0.0,
                g: g_value,
                dg: 0.0,
                kappa_alpha: 0.0,
                d_fka: 0.0,
            });
        }
        if df.abs() > 1.0 + 1e-12 {
            return Err(Error::NotUnitSpeed { u, slope: df.abs() });
        }
        let (eps, _) = self.eps_and_offset();
        let s = (1.0 - df * df).max(0.0);
        let dg = eps * s.sqrt();
        if dg.abs() < 1e-12 {
            if d2f.abs() > 1e-12 {
                return Err(Error::SingularProfile { u });
            }
            // flat limit: f' = +-1 with f'' = 0 means a straight profile
            return Ok(ProfileEval {
                f,
                df,
                d2f,
                d3f,
                g: self.g(u)?,
                dg,
                kappa_alpha: 0.0,
                d_fka: 0.0,
            });
        }
        // unit speed gives kappa_alpha = f' g'' - g' f'' = -f''/g'
        let kappa_alpha = -d2f / dg;
        // (f kappa_alpha)' = -(f' f'' + f f''')/g' - f f' f''^2 / g'^3
        let d_fka = -(df * d2f + f * d3f) / dg - f * df * d2f * d2f / (dg * dg * dg);
        Ok(ProfileEval {
            f,
            df,
            d2f,
            d3f,
            g: self.g(u)?,
            dg,
            kappa_alpha,
            d_fka,
        })
    }

    /// g(u) = g-offset + integral of g' from the domain start, by adaptive
    /// Simpson quadrature to 1e-10 absolute.
    pub fn g(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        match self {
            MeridianProfile::GConstant { g_value, .. } => Ok(*g_value),
            _ => {
                let (eps, offset) = self.eps_and_offset();
                let (lo, _) = self.domain();
                let dg = |x: f64| -> Result<f64> {
                    let [_, df, ..] = self.raw_derivs(x);
                    if df.abs() > 1.0 + 1e-12 {
                        return Err(Error::NotUnitSpeed {
                            u: x,
                            slope: df.abs(),
                        });
                    }
                    Ok(eps * (1.0 - df * df).max(0.0).sqrt())
                };
                Ok(offset + adaptive_simpson(&dg, lo, u, 1e-10)?)
            }
        }
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if (b - a).abs() < 1e-300 {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(fa, fm, fb, b - a);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?,
    )
}

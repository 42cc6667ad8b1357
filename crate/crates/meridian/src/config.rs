//! Declarative surface configs: a flat key = value text document describing
//! the profile, the spherical curve, the domain rectangle and the grid.
//!
//! Example:
//!
//! ```text
//! profile = linear-both
//! a = 0.6
//! a1 = 2.0
//! epsilon = 1
//! g-offset = 0.0
//! curve = circle
//! kappa0 = 1.0
//! u-min = 0.0
//! u-max = 1.0
//! v-min = 0.0
//! v-max = 2.0
//! grid = 16x16
//! ```

use std::collections::HashMap;
use std::path::Path;

use crate::curves::{MeridianProfile, SphericalCurve};
use crate::error::{Error, Result};
use crate::odes::profile_from_csv;
use crate::surface::MeridianSurface;

#[derive(Debug, Clone)]
pub enum ProfileSpec {
    /// f = slope * u + intercept with slope = +-1, g constant.
    LinearF {
        slope: f64,
        intercept: f64,
        g_value: f64,
    },
    /// f = a constant, g' = epsilon.
    ConstantF { a: f64 },
    /// f = a u + a1, g' = epsilon * sqrt(1 - a^2).
    LinearBoth { a: f64, a1: f64 },
    /// f = base + amp * sin(freq * u); requires |amp * freq| < 1.
    SineDemo { base: f64, amp: f64, freq: f64 },
    /// Profile sampled from an ODE solution CSV (columns u, f, df, d2f).
    FromOdeCsv { path: String },
}

#[derive(Debug, Clone)]
pub enum CurveSpec {
    Circle {
        kappa0: f64,
    },
    /// Piecewise-linear kappa(v) through the given (v, kappa) pairs.
    Table {
        points: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone)]
pub struct SurfaceConfig {
    pub profile: ProfileSpec,
    pub epsilon: f64,
    pub g_offset: f64,
    pub curve: CurveSpec,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub grid: (usize, usize),
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let mut it = s.split(['x', 'X']);
    let bad = || Error::Config(format!("grid '{s}' is not of the form NxM"));
    let nu = it
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let nv = it
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((nu, nv))
}

struct KeyValues {
    map: HashMap<String, (usize, String)>,
}

impl KeyValues {
    fn parse(text: &str) -> Result<KeyValues> {
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            map.insert(
                key.trim().to_string(),
                (lineno + 1, value.trim().to_string()),
            );
        }
        Ok(KeyValues { map })
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.map
            .get(key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }

    fn number(&self, key: &str) -> Result<f64> {
        let (line, v) = self
            .map
            .get(key)
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))?;
        v.parse()
            .map_err(|_| Error::Config(format!("line {line}, key '{key}': '{v}' is not a number")))
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64> {
        if self.map.contains_key(key) {
            self.number(key)
        } else {
            Ok(default)
        }
    }
}

impl SurfaceConfig {
    pub fn parse(text: &str) -> Result<SurfaceConfig> {
        let kv = KeyValues::parse(text)?;
        let profile = match kv.required("profile")? {
            "linear-f" => ProfileSpec::LinearF {
                slope: kv.number_or("slope", 1.0)?,
                intercept: kv.number_or("intercept", 1.0)?,
                g_value: kv.number_or("g-value", 0.0)?,
            },
            "constant-f" => ProfileSpec::ConstantF {
                a: kv.number_or("a", 1.0)?,
            },
            "linear-both" => ProfileSpec::LinearBoth {
                a: kv.number("a")?,
                a1: kv.number("a1")?,
            },
            "sine-demo" => ProfileSpec::SineDemo {
                base: kv.number_or("base", 1.7)?,
                amp: kv.number_or("amp", 0.4)?,
                freq: kv.number_or("freq", 0.8)?,
            },
            "from-ode-csv" => ProfileSpec::FromOdeCsv {
                path: kv.required("path")?.to_string(),
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown profile kind '{other}' (expected linear-f, constant-f, \
                     linear-both, sine-demo or from-ode-csv)"
                )))
            }
        };
        let curve = match kv.required("curve")? {
            "circle" => CurveSpec::Circle {
                kappa0: kv.number("kappa0")?,
            },
            "table" => {
                let raw = kv.required("kappa-table")?;
                let mut points = Vec::new();
                for pair in raw.split(',') {
                    let Some((v, k)) = pair.split_once(':') else {
                        return Err(Error::Config(format!(
                            "kappa-table entry '{pair}' is not of the form v:kappa"
                        )));
                    };
                    let parse = |s: &str| -> Result<f64> {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::Config(format!("bad number '{s}' in kappa-table")))
                    };
                    points.push((parse(v)?, parse(k)?));
                }
                if points.len() < 2 {
                    return Err(Error::Config("kappa-table needs at least 2 points".into()));
                }
                points.sort_by(|a, b| a.0.total_cmp(&b.0));
                CurveSpec::Table { points }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown curve kind '{other}' (expected circle or table)"
                )))
            }
        };
        let config = SurfaceConfig {
            profile,
            epsilon: kv.number_or("epsilon", 1.0)?,
            g_offset: kv.number_or("g-offset", 0.0)?,
            curve,
            u_range: (kv.number("u-min")?, kv.number("u-max")?),
            v_range: (kv.number("v-min")?, kv.number("v-max")?),
            grid: parse_grid(kv.required("grid")?)?,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if !self.u_range.0.is_finite()
            || !self.u_range.1.is_finite()
            || self.u_range.1 <= self.u_range.0
        {
            return Err(Error::Config(format!(
                "empty u domain [{}, {}]",
                self.u_range.0, self.u_range.1
            )));
        }
        if !self.v_range.0.is_finite()
            || !self.v_range.1.is_finite()
            || self.v_range.1 <= self.v_range.0
        {
            return Err(Error::Config(format!(
                "empty v domain [{}, {}]",
                self.v_range.0, self.v_range.1
            )));
        }
        if self.epsilon != 1.0 && self.epsilon != -1.0 {
            return Err(Error::Config(format!(
                "epsilon must be 1 or -1, got {}",
                self.epsilon
            )));
        }
        match &self.profile {
            ProfileSpec::LinearF { slope, .. } => {
                if slope.abs() != 1.0 {
                    return Err(Error::Config(format!(
                        "linear-f slope must be 1 or -1 (unit speed with g constant), got {slope}"
                    )));
                }
            }
            ProfileSpec::ConstantF { a } => {
                if *a == 0.0 {
                    return Err(Error::Config("constant-f radius a must be nonzero".into()));
                }
            }
            ProfileSpec::LinearBoth { a, .. } => {
                if a.abs() >= 1.0 {
                    return Err(Error::Config(format!(
                        "linear-both requires |a| < 1, got {a}"
                    )));
                }
            }
            ProfileSpec::SineDemo { amp, freq, .. } => {
                if (amp * freq).abs() >= 1.0 {
                    return Err(Error::Config(format!(
                        "sine-demo requires |amp * freq| < 1 for unit speed, got {}",
                        amp * freq
                    )));
                }
            }
            ProfileSpec::FromOdeCsv { .. } => {}
        }
        if let CurveSpec::Table { points } = &self.curve {
            if points.first().unwrap().0 > self.v_range.0
                || points.last().unwrap().0 < self.v_range.1
            {
                return Err(Error::Config(
                    "kappa-table does not cover the v domain".into(),
                ));
            }
        }
        Ok(())
    }

    /// Builds the surface; CSV paths are resolved relative to `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<MeridianSurface> {
        let (eps, g_offset) = (self.epsilon, self.g_offset);
        let u_range = self.u_range;
        let profile = match &self.profile {
            ProfileSpec::LinearF {
                slope,
                intercept,
                g_value,
            } => MeridianProfile::GConstant {
                slope: *slope,
                intercept: *intercept,
                g_value: *g_value,
                domain: u_range,
            },
            ProfileSpec::ConstantF { a } => {
                let a = *a;
                MeridianProfile::analytic(move |_| [a, 0.0, 0.0, 0.0], eps, g_offset, u_range)
            }
            ProfileSpec::LinearBoth { a, a1 } => {
                let (a, a1) = (*a, *a1);
                MeridianProfile::analytic(
                    move |u| [a * u + a1, a, 0.0, 0.0],
                    eps,
                    g_offset,
                    u_range,
                )
            }
            ProfileSpec::SineDemo { base, amp, freq } => {
                let (b, a, w) = (*base, *amp, *freq);
                MeridianProfile::analytic(
                    move |u| {
                        let (s, c) = (w * u).sin_cos();
                        [b + a * s, a * w * c, -a * w * w * s, -a * w * w * w * c]
                    },
                    eps,
                    g_offset,
                    u_range,
                )
            }
            ProfileSpec::FromOdeCsv { path } => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full).map_err(|e| {
                    Error::Config(format!("cannot read ode csv '{}': {e}", full.display()))
                })?;
                let profile = profile_from_csv(&text, eps, g_offset)?;
                let (lo, hi) = profile.domain();
                if u_range.0 < lo - 1e-12 || u_range.1 > hi + 1e-12 {
                    return Err(Error::Config(format!(
                        "u domain [{}, {}] exceeds the csv span [{lo}, {hi}]",
                        u_range.0, u_range.1
                    )));
                }
                profile
            }
        };
        let curve = match &self.curve {
            CurveSpec::Circle { kappa0 } => SphericalCurve::circle(*kappa0, self.v_range),
            CurveSpec::Table { points } => {
                let pts = points.clone();
                SphericalCurve::numeric(
                    move |v| {
                        let i = pts.partition_point(|p| p.0 <= v).clamp(1, pts.len() - 1);
                        let (v0, k0) = pts[i - 1];
                        let (v1, k1) = pts[i];
                        k0 + (k1 - k0) * (v - v0) / (v1 - v0)
                    },
                    self.v_range,
                )?
            }
        };
        Ok(MeridianSurface::new(profile, curve))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO: &str = "\
# a ruled demo surface
profile = linear-f
slope = 1
intercept = 1
curve = circle
kappa0 = 1.0
u-min = 0.0
u-max = 2.0
v-min = 0.0
v-max = 3.0
grid = 16x16
";

    #[test]
    fn parses_demo_config() {
        let cfg = SurfaceConfig::parse(DEMO).unwrap();
        assert_eq!(cfg.grid, (16, 16));
        assert!(matches!(cfg.profile, ProfileSpec::LinearF { .. }));
        let s = cfg.build(Path::new(".")).unwrap();
        // z = f r + g e4 with |r| = 1 and g = 0, so the point lies at
        // distance f(0) = 1 from the origin in the e1-e2-e3 hyperplane
        let p = s.eval_point(0.0, 0.0).unwrap();
        let radial = (p.0[0] * p.0[0] + p.0[1] * p.0[1] + p.0[2] * p.0[2]).sqrt();
        assert!((radial - 1.0).abs() < 1e-9);
        assert!(p.0[3].abs() < 1e-12);
    }

    #[test]
    fn reports_missing_key() {
        let err = SurfaceConfig::parse("profile = linear-f\n").unwrap_err();
        assert!(err.to_string().contains("curve"), "{err}");
    }

    #[test]
    fn reports_bad_number_with_line() {
        let bad = DEMO.replace("kappa0 = 1.0", "kappa0 = one");
        let err = SurfaceConfig::parse(&bad).unwrap_err();
        assert!(err.to_string().contains("kappa0"), "{err}");
    }

    #[test]
    fn rejects_non_unit_slope() {
        let bad = DEMO.replace("slope = 1", "slope = 0.5");
        assert!(SurfaceConfig::parse(&bad).is_err());
    }

    #[test]
    fn rejects_bad_grid() {
        let bad = DEMO.replace("grid = 16x16", "grid = sixteen");
        assert!(SurfaceConfig::parse(&bad).is_err());
    }

    #[test]
    fn kappa_table_curve_builds() {
        let text = DEMO.replace(
            "curve = circle\nkappa0 = 1.0",
            "curve = table\nkappa-table = 0:1, 3:1",
        );
        let cfg = SurfaceConfig::parse(&text).unwrap();
        let s = cfg.build(Path::new(".")).unwrap();
        assert!((s.curve.spherical_curvature(1.5).unwrap() - 1.0).abs() < 1e-12);
    }
}

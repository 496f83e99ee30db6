//! Named tetrad charts and local frame rotations.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::ETA;
use crate::error::{Error, Result};
use crate::jets::{jet_eval, FieldExpr, Point};

/// A coordinate region with an orthonormal frame field `e^alpha_(a)(x)`.
#[derive(Clone, Debug)]
pub struct TetradChart {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub coords: [&'static str; 4],
    /// Closed per-coordinate intervals.
    pub domain: [(f64, f64); 4],
    /// `tetrad[a][alpha] = e^alpha_(a)`.
    pub tetrad: [[FieldExpr; 4]; 4],
}

/// Names accepted by [`TetradChart::by_name`], in catalog order.
pub const CHART_NAMES: [&str; 6] = [
    "minkowski_diag",
    "minkowski_boosted",
    "flat_spherical",
    "schwarzschild",
    "frw_flat",
    "de_sitter_static",
];

fn var(i: usize) -> FieldExpr {
    FieldExpr::var(i)
}

fn c(v: f64) -> FieldExpr {
    FieldExpr::real(v)
}

fn diagonal(entries: [FieldExpr; 4]) -> [[FieldExpr; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|alpha| if a == alpha { entries[a].clone() } else { FieldExpr::zero() })
    })
}

/// Static spherically symmetric frame with `g = f dt^2 - dr^2/f - r^2 dOmega^2`.
fn static_spherical(f: FieldExpr) -> [[FieldExpr; 4]; 4] {
    let r = var(1);
    let sqrt_f = f.sqrt();
    diagonal([sqrt_f.recip(), sqrt_f, r.recip(), (r * var(2).sin()).recip()])
}

impl TetradChart {
    /// Builds a catalog chart, overriding default parameters with `overrides`.
    ///
    /// | name | coordinates | tetrad `e^alpha_(a)` |
    /// |---|---|---|
    /// | `minkowski_diag` | t x y z | identity |
    /// | `minkowski_boosted` | t x y z | identity rotated by a constant boost (`rapidity`) along x and a rotation (`angle`) in the x-y plane |
    /// | `flat_spherical` | t r th ph | `diag(1, 1, 1/r, 1/(r sin th))` |
    /// | `schwarzschild` | t r th ph | `diag(f^-1/2, f^1/2, 1/r, 1/(r sin th))`, `f = 1 - 2M/r` |
    /// | `frw_flat` | t x y z | `diag(1, 1/a, 1/a, 1/a)`, `a = a0 exp(H t)` |
    /// | `de_sitter_static` | t r th ph | as schwarzschild with `f = 1 - r^2/ell^2` |
    pub fn by_name(name: &str, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let defaults: &[(&str, f64)] = match name {
            "minkowski_diag" | "flat_spherical" => &[],
            "minkowski_boosted" => &[("rapidity", 0.6), ("angle", 0.4)],
            "schwarzschild" => &[("M", 1.0)],
            "frw_flat" => &[("a0", 1.0), ("H", 0.5)],
            "de_sitter_static" => &[("ell", 1.0)],
            _ => return Err(Error::UnknownChart(name.to_string())),
        };
        let mut params: BTreeMap<String, f64> = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(Error::Config(format!("chart `{name}` has no parameter `{k}`")));
            }
            if !v.is_finite() {
                return Err(Error::Config(format!("parameter `{k}` must be finite")));
            }
            params.insert(k.clone(), *v);
        }
        let p = |k: &str| params[k];
        let cart = ["t", "x", "y", "z"];
        let sph = ["t", "r", "th", "ph"];
        let box1 = [(-1.0, 1.0); 4];
        let (coords, domain, tetrad) = match name {
            "minkowski_diag" => (cart, box1, diagonal([c(1.0), c(1.0), c(1.0), c(1.0)])),
            "minkowski_boosted" => {
                let lam = LocalLorentz::boost(1, c(p("rapidity"))).then(&LocalLorentz::rotation(1, 2, c(p("angle"))));
                let base = diagonal([c(1.0), c(1.0), c(1.0), c(1.0)]);
                (cart, box1, lam.rotate(&base))
            }
            "flat_spherical" => (
                sph,
                [(-1.0, 1.0), (1.0, 5.0), (0.3, PI - 0.3), (0.0, 2.0 * PI)],
                static_spherical(c(1.0)),
            ),
            "schwarzschild" => {
                let m = p("M");
                if m <= 0.0 {
                    return Err(Error::Config("schwarzschild mass M must be positive".into()));
                }
                let f = c(1.0) - var(1).recip() * (2.0 * m);
                (sph, [(-m, m), (3.0 * m, 10.0 * m), (0.3, PI - 0.3), (0.0, 2.0 * PI)], static_spherical(f))
            }
            "frw_flat" => {
                let (a0, h) = (p("a0"), p("H"));
                if a0 <= 0.0 {
                    return Err(Error::Config("frw_flat scale a0 must be positive".into()));
                }
                let inv_a = (var(0) * (-h)).exp() * (1.0 / a0);
                (cart, box1, diagonal([c(1.0), inv_a.clone(), inv_a.clone(), inv_a]))
            }
            "de_sitter_static" => {
                let ell = p("ell");
                if ell <= 0.0 {
                    return Err(Error::Config("de_sitter_static radius ell must be positive".into()));
                }
                let f = c(1.0) - var(1).powi(2) * (1.0 / (ell * ell));
                (sph, [(-ell, ell), (0.2 * ell, 0.8 * ell), (0.3, PI - 0.3), (0.0, 2.0 * PI)], static_spherical(f))
            }
            _ => unreachable!(),
        };
        Ok(Self { name: name.to_string(), params, coords, domain, tetrad })
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.is_finite()
            && self.domain.iter().zip(p.x).all(|(&(lo, hi), x)| {
                let slack = 1e-12 * (hi - lo).abs().max(1.0);
                x >= lo - slack && x <= hi + slack
            })
    }

    /// Midpoint of the sampling box, a natural expansion point for test fields.
    pub fn centre(&self) -> [f64; 4] {
        self.domain.map(|(lo, hi)| 0.5 * (lo + hi))
    }

    /// Latin-hypercube sample of `n` points inside the domain, reproducible from `seed`.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_c4a7);
        let strata: Vec<Vec<usize>> = (0..4)
            .map(|_| {
                let mut s: Vec<usize> = (0..n).collect();
                s.shuffle(&mut rng);
                s
            })
            .collect();
        (0..n)
            .map(|i| {
                Point::new(std::array::from_fn(|mu| {
                    let (lo, hi) = self.domain[mu];
                    let u = (strata[mu][i] as f64 + rng.gen::<f64>()) / n as f64;
                    lo + (hi - lo) * u
                }))
            })
            .collect()
    }

    /// Tetrad values at `p` (no domain check).
    pub fn tetrad_values(&self, p: &Point) -> Result<[[f64; 4]; 4]> {
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for alpha in 0..4 {
                out[a][alpha] = jet_eval(&self.tetrad[a][alpha], p)?.val.re;
            }
        }
        Ok(out)
    }
}

/// The six catalog charts with default parameters.
pub fn catalog() -> Vec<TetradChart> {
    CHART_NAMES
        .iter()
        .map(|n| TetradChart::by_name(n, &BTreeMap::new()).expect("catalog defaults are valid"))
        .collect()
}

/// A frame rotation `e'^alpha_(b) = Lambda_b^a e^alpha_(a)` with field-valued entries.
#[derive(Clone, Debug)]
pub struct LocalLorentz {
    /// `lam[b][a] = Lambda_b^a`.
    pub lam: [[FieldExpr; 4]; 4],
}

impl LocalLorentz {
    pub fn identity() -> Self {
        Self::constant([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
    }

    pub fn constant(m: [[f64; 4]; 4]) -> Self {
        Self { lam: m.map(|row| row.map(FieldExpr::real)) }
    }

    /// Spatial reflection of the frame, `diag(1, -1, -1, -1)`.
    pub fn p_reflection() -> Self {
        Self::constant([[1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, -1.0]])
    }

    /// Boost along spatial axis `k` with rapidity field `chi`.
    pub fn boost(k: usize, chi: FieldExpr) -> Self {
        assert!((1..4).contains(&k));
        let (ch, sh) = cosh_sinh(&chi);
        let mut lam = Self::identity().lam;
        lam[0][0] = ch.clone();
        lam[k][k] = ch;
        lam[0][k] = sh.clone();
        lam[k][0] = sh;
        Self { lam }
    }

    /// Rotation by `angle` in the spatial `(i, j)` plane.
    pub fn rotation(i: usize, j: usize, angle: FieldExpr) -> Self {
        assert!(i != j && (1..4).contains(&i) && (1..4).contains(&j));
        let (co, si) = (angle.cos(), angle.sin());
        let mut lam = Self::identity().lam;
        lam[i][i] = co.clone();
        lam[j][j] = co;
        lam[i][j] = si.clone();
        lam[j][i] = -si;
        Self { lam }
    }

    /// The rotation applying `self` first and then `next`.
    pub fn then(&self, next: &LocalLorentz) -> Self {
        Self {
            lam: std::array::from_fn(|b| {
                std::array::from_fn(|a| {
                    (0..4)
                        .map(|c| next.lam[b][c].clone() * self.lam[c][a].clone())
                        .reduce(|x, y| x + y)
                        .unwrap()
                })
            }),
        }
    }

    pub fn values(&self, p: &Point) -> Result<[[f64; 4]; 4]> {
        let mut out = [[0.0; 4]; 4];
        for b in 0..4 {
            for a in 0..4 {
                out[b][a] = jet_eval(&self.lam[b][a], p)?.val.re;
            }
        }
        Ok(out)
    }

    /// `max |Lambda eta Lambda^T - eta|` at `p`, relative to `max(1, |Lambda|^2)`.
    pub fn lorentz_defect(&self, p: &Point) -> Result<f64> {
        let l = self.values(p)?;
        let scale = l.iter().flatten().fold(1.0f64, |m, x| m.max(x * x));
        let mut worst = 0.0f64;
        for b in 0..4 {
            for d in 0..4 {
                let s: f64 = (0..4).map(|a| l[b][a] * ETA[a] * l[d][a]).sum();
                let target = if b == d { ETA[b] } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        Ok(worst / scale)
    }

    /// Applies the rotation to a tetrad array.
    pub fn rotate(&self, tetrad: &[[FieldExpr; 4]; 4]) -> [[FieldExpr; 4]; 4] {
        std::array::from_fn(|b| {
            std::array::from_fn(|alpha| {
                (0..4)
                    .filter_map(|a| {
                        let l = &self.lam[b][a];
                        match l.as_constant() {
                            Some(z) if z.norm() == 0.0 => None,
                            _ => Some(l.clone() * tetrad[a][alpha].clone()),
                        }
                    })
                    .reduce(|x, y| x + y)
                    .unwrap_or_else(FieldExpr::zero)
            })
        })
    }
}

fn cosh_sinh(chi: &FieldExpr) -> (FieldExpr, FieldExpr) {
    let (ep, em) = (chi.exp(), (-chi.clone()).exp());
    ((ep.clone() + em.clone()) * 0.5, (ep - em) * 0.5)
}

/// The chart with its frame rotated by `lam`.
///
/// The rotation must be Lorentz to within `1e-12` at a fixed set of sample
/// points of the chart.
pub fn apply_local_lorentz(chart: &TetradChart, lam: &LocalLorentz) -> Result<TetradChart> {
    for p in chart.sample_points(8, 0) {
        let d = lam.lorentz_defect(&p)?;
        if d > 1e-12 {
            return Err(Error::NotLorentz(d));
        }
    }
    Ok(TetradChart { tetrad: lam.rotate(&chart.tetrad), ..chart.clone() })
}

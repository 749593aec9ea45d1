//! CHSH string, the orientation-sensitive bound expression, a deterministic
//! coplanar maximizer and angular sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::direction::{cross3, dot3, Direction};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Four measurement settings: `a`, `a′` for Alice and `b`, `b′` for Bob.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshConfig<T> {
    pub a: Direction<T>,
    pub a_prime: Direction<T>,
    pub b: Direction<T>,
    pub b_prime: Direction<T>,
}

impl<T: Real> ChshConfig<T> {
    /// All four settings in the x-y plane, angles in degrees from `e_x`.
    pub fn planar_deg(a: T, a_prime: T, b: T, b_prime: T) -> Self {
        Self {
            a: Direction::in_plane_deg(a),
            a_prime: Direction::in_plane_deg(a_prime),
            b: Direction::in_plane_deg(b),
            b_prime: Direction::in_plane_deg(b_prime),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshReport<T> {
    pub s: T,
    pub paper_bound: T,
    pub paper_bound_flipped: T,
    pub tsirelson: T,
    pub within_paper_bound: bool,
    pub within_tsirelson: bool,
}

pub fn tsirelson<T: Real>() -> T {
    T::lit(2.0) * T::SQRT_2()
}

/// `|E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)|`.
pub fn chsh_s<T, F>(e: F, cfg: &ChshConfig<T>) -> T
where
    T: Real,
    F: Fn(&Direction<T>, &Direction<T>) -> T,
{
    (e(&cfg.a, &cfg.b) + e(&cfg.a, &cfg.b_prime) + e(&cfg.a_prime, &cfg.b)
        - e(&cfg.a_prime, &cfg.b_prime))
    .abs()
}

/// `2√(1 − (a×a′)·(b′×b))` and the orientation-flipped
/// `2√(1 − (a×a′)·(b×b′))`.
///
/// The radicand is clamped at zero; for unit inputs it can only go negative
/// by rounding.
pub fn paper_bound<T: Real>(cfg: &ChshConfig<T>) -> (T, T) {
    let alice = cfg.a.cross(&cfg.a_prime);
    let bob = cross3(&cfg.b_prime.components(), &cfg.b.components());
    let t = dot3(&alice, &bob);
    let two = T::lit(2.0);
    let bound = |x: T| two * x.max(T::zero()).sqrt();
    (bound(T::one() - t), bound(T::one() + t))
}

/// S together with both bound variants at one configuration.
pub fn chsh_report<T, F>(e: F, cfg: &ChshConfig<T>) -> ChshReport<T>
where
    T: Real,
    F: Fn(&Direction<T>, &Direction<T>) -> T,
{
    let s = chsh_s(e, cfg);
    let (paper_bound, paper_bound_flipped) = paper_bound(cfg);
    let tol = T::tolerance();
    ChshReport {
        s,
        paper_bound,
        paper_bound_flipped,
        tsirelson: tsirelson(),
        within_paper_bound: s <= paper_bound + tol,
        within_tsirelson: s <= tsirelson::<T>() + tol,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Grid step in degrees over `[0°, 360°)` for each angle.
    pub resolution_deg: f64,
    /// Coordinate-descent passes after the grid.
    pub refine_iters: usize,
    /// Force `a′ = a` (searches three angles instead of four).
    pub tie_alice: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            resolution_deg: 15.0,
            refine_iters: 50,
            tie_alice: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchResult<T> {
    pub config: ChshConfig<T>,
    /// `(a, a′, b, b′)` in degrees from `e_x` in the x-y plane.
    pub angles_deg: [T; 4],
    pub s: T,
}

/// Maximizes S over coplanar settings with the default options apart from
/// the given resolution and pass count.
pub fn maximize_s<T, F>(
    e: F,
    resolution_deg: f64,
    refine_iters: usize,
) -> Result<(ChshConfig<T>, T)>
where
    T: Real,
    F: Fn(&Direction<T>, &Direction<T>) -> T + Sync,
{
    let r = maximize_s_with(
        e,
        &SearchOptions {
            resolution_deg,
            refine_iters,
            tie_alice: false,
        },
    )?;
    Ok((r.config, r.s))
}

fn config_from<T: Real>(theta: &[T; 4], tie_alice: bool) -> ChshConfig<T> {
    let a_prime = if tie_alice { theta[0] } else { theta[1] };
    ChshConfig::planar_deg(theta[0], a_prime, theta[2], theta[3])
}

/// Grid search followed by compass coordinate descent.
///
/// Near-ties on the grid resolve to the lowest grid index (`a` most
/// significant) and refinement only accepts gains above rounding level, so the
/// result is fully deterministic.
pub fn maximize_s_with<T, F>(e: F, opts: &SearchOptions) -> Result<SearchResult<T>>
where
    T: Real,
    F: Fn(&Direction<T>, &Direction<T>) -> T + Sync,
{
    let res = opts.resolution_deg;
    if !(res > 0.0 && res.is_finite() && res <= 360.0) {
        return Err(Error::InvalidStep {
            step: res,
            expected: "0 < resolution <= 360",
        });
    }
    let m = (360.0 / res - 1e-9).ceil() as u64;
    let tie = opts.tie_alice;
    let grid_angle = |k: u64| T::lit(k as f64 * res);
    // a is the most significant digit, b′ the least
    let decode = |idx: u64| -> [T; 4] {
        let (rest, i3) = (idx / m, idx % m);
        let (rest, i2) = (rest / m, rest % m);
        let (i0, i1) = if tie {
            (rest, rest)
        } else {
            (rest / m, rest % m)
        };
        [
            grid_angle(i0),
            grid_angle(i1),
            grid_angle(i2),
            grid_angle(i3),
        ]
    };
    let total = if tie { m.pow(3) } else { m.pow(4) };
    let objective = |theta: &[T; 4]| chsh_s(&e, &config_from(theta, tie));

    // Two associative passes: the maximum, then the lowest index within
    // tolerance of it. Rounding noise among equivalent optima cannot pick the
    // winner, and the result does not depend on how rayon splits the range.
    let top = (0..total)
        .into_par_iter()
        .map(|idx| objective(&decode(idx)))
        .reduce(T::neg_infinity, T::max);
    let best_idx = (0..total)
        .into_par_iter()
        .filter(|&idx| objective(&decode(idx)) >= top - T::tolerance())
        .min()
        .unwrap_or(0);
    let mut theta = decode(best_idx);
    let mut best_s = objective(&theta);

    let coords: &[usize] = if tie { &[0, 2, 3] } else { &[0, 1, 2, 3] };
    let mut h = T::lit(res / 2.0);
    // improvements at rounding level only let the angles drift
    let min_gain = T::epsilon() * T::lit(16.0);
    for _ in 0..opts.refine_iters {
        let mut improved = false;
        for &c in coords {
            for step in [h, -h] {
                let mut trial = theta;
                trial[c] = trial[c] + step;
                let s = objective(&trial);
                if s > best_s + min_gain {
                    best_s = s;
                    theta = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h = h / T::lit(2.0);
        }
    }

    if tie {
        theta[1] = theta[0];
    }
    Ok(SearchResult {
        config: config_from(&theta, tie),
        angles_deg: theta,
        s: best_s,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint<T, R> {
    pub angle_deg: T,
    pub value: R,
    /// `−cos θ`.
    pub reference: T,
}

/// Fixed in-plane `a` for a plane with the given normal: the coordinate axis
/// least aligned with the normal, projected into the plane.
pub fn plane_reference<T: Real>(normal: &Direction<T>) -> Direction<T> {
    let n = normal.components();
    let k = (0..3)
        .min_by(|&i, &j| n[i].abs().partial_cmp(&n[j].abs()).expect("finite"))
        .expect("three axes");
    let mut e = [T::zero(); 3];
    e[k] = T::one();
    let p = n[k];
    Direction::normalized(e[0] - p * n[0], e[1] - p * n[1], e[2] - p * n[2])
        .expect("axis least aligned with a unit normal is never parallel to it")
}

/// Evaluates `e(a, b(θ))` for `θ = 0, step, …` up to 180°, where `b(θ)` is
/// `a` rotated by `θ` about `normal`.
pub fn sweep_curve<T, R, F>(
    normal: &Direction<T>,
    step_deg: T,
    e: F,
) -> Result<Vec<SweepPoint<T, R>>>
where
    T: Real,
    F: Fn(&Direction<T>, &Direction<T>) -> R,
{
    if !(step_deg > T::zero() && step_deg <= T::lit(90.0)) {
        return Err(Error::InvalidStep {
            step: step_deg.as_f64(),
            expected: "0 < step <= 90",
        });
    }
    let a = plane_reference(normal);
    let u = a.components();
    let w = normal.cross(&a);
    let count = (T::lit(180.0) / step_deg + T::lit(1e-9))
        .floor()
        .to_u64()
        .unwrap_or(0)
        + 1;
    (0..count)
        .map(|k| {
            let angle_deg = step_deg * T::lit(k as f64);
            let t = angle_deg.to_radians();
            let (s, c) = t.sin_cos();
            let b = Direction::new(
                c * u[0] + s * w[0],
                c * u[1] + s * w[1],
                c * u[2] + s * w[2],
            )?;
            Ok(SweepPoint {
                angle_deg,
                value: e(&a, &b),
                reference: -c,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = Direction<f64>;

    fn quantum(a: &D, b: &D) -> f64 {
        -a.dot(b)
    }

    #[test]
    fn degenerate_and_zero() {
        let cfg = ChshConfig::planar_deg(10.0, 10.0, 70.0, 70.0);
        let s = chsh_s(quantum, &cfg);
        assert!((s - 2.0 * quantum(&cfg.a, &cfg.b).abs()).abs() < 1e-15);
        assert!(s <= 2.0);
        assert_eq!(chsh_s(|_: &D, _: &D| 0.0, &cfg), 0.0);
    }

    #[test]
    fn tsirelson_config() {
        let r = 0.5f64.sqrt();
        let cfg = ChshConfig {
            a: D::e_x(),
            a_prime: D::e_y(),
            b: D::new(-r, -r, 0.0).unwrap(),
            b_prime: D::new(-r, r, 0.0).unwrap(),
        };
        assert!((chsh_s(quantum, &cfg) - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bound_cases() {
        let cfg = ChshConfig::planar_deg(30.0, 30.0, 0.0, 100.0);
        assert_eq!(paper_bound(&cfg), (2.0, 2.0));
        let cfg = ChshConfig {
            a: D::e_x(),
            a_prime: D::e_y(),
            b: D::e_y(),
            b_prime: D::e_x().neg(),
        };
        let (p, f) = paper_bound(&cfg);
        assert!((p - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(f, 0.0);
    }

    #[test]
    fn report_flags() {
        let cfg = ChshConfig::planar_deg(0.0, 90.0, 225.0, 135.0);
        let r = chsh_report(quantum, &cfg);
        assert!(r.within_tsirelson);
        assert!((r.s - r.tsirelson).abs() < 1e-12);
    }

    #[test]
    fn maximize_quantum() {
        let (cfg, s) = maximize_s(quantum, 15.0, 50).unwrap();
        assert!(s >= 8f64.sqrt() - 1e-6 && s <= 8f64.sqrt() + 1e-9);
        assert!((chsh_s(quantum, &cfg) - s).abs() < 1e-15);
    }

    #[test]
    fn maximize_needs_refinement_off_grid() {
        // 7° does not divide 45°, so the grid alone misses the optimum
        let grid_only = maximize_s(quantum, 7.0, 0).unwrap().1;
        let refined = maximize_s(quantum, 7.0, 200).unwrap().1;
        assert!(grid_only < 8f64.sqrt() - 1e-6);
        assert!(refined >= 8f64.sqrt() - 1e-6 && refined <= 8f64.sqrt() + 1e-9);
    }

    #[test]
    fn maximize_constant_and_tied() {
        let (_, s) = maximize_s(|_: &D, _: &D| -1.0, 15.0, 50).unwrap();
        assert_eq!(s, 2.0);
        let r = maximize_s_with(
            quantum,
            &SearchOptions {
                tie_alice: true,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        assert!((r.s - 2.0).abs() < 1e-12);
        assert_eq!(r.config.a, r.config.a_prime);
    }

    #[test]
    fn invalid_resolution() {
        assert!(maximize_s(quantum, 0.0, 1).is_err());
        assert!(maximize_s(quantum, f64::NAN, 1).is_err());
    }

    #[test]
    fn sweep_grid() {
        let pts = sweep_curve(&D::e_z(), 10.0, quantum).unwrap();
        assert_eq!(pts.len(), 19);
        assert_eq!(pts[0].angle_deg, 0.0);
        assert_eq!(pts[18].angle_deg, 180.0);
        for p in &pts {
            assert!((p.value - p.reference).abs() < 1e-12);
        }
        assert_eq!(sweep_curve(&D::e_z(), 5.0, quantum).unwrap().len(), 37);
        assert_eq!(sweep_curve(&D::e_z(), 90.0, quantum).unwrap().len(), 3);
        assert!(sweep_curve(&D::e_z(), 0.0, quantum).is_err());
        assert!(sweep_curve(&D::e_z(), 90.5, quantum).is_err());
    }

    #[test]
    fn plane_reference_is_orthogonal() {
        let n = D::normalized(0.3, -0.2, 0.9).unwrap();
        let a = plane_reference(&n);
        assert!(a.dot(&n).abs() < 1e-15);
        assert_eq!(plane_reference(&D::e_z()), D::e_x());
    }
}

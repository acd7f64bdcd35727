//! Physics-knowledge predictors.
//!
//! Four forecasting models share one contract (history in, future out):
//!
//! - `const_v`: constant velocity, estimated from the last two frames;
//! - `const_a`: constant acceleration, second difference of the last three;
//! - `kinematic`: the bicycle kinematic model
//!   `ẋ = v cos φ, ẏ = v sin φ, φ̇ = (v / L_B) tan δ`
//!   with state estimated by finite differences and integrated by RK4;
//! - `xkalman`: an extended Kalman filter over (x, y, φ, v) with the same
//!   process model (steering folded into heading noise), rolled forward with
//!   the filtered heading-rate estimate.
//!
//! All predictors are pure; the learned part is the ensemble encoder in the
//! model module, which consumes [`PhysicsForecast`].

use nalgebra::{Matrix2, Matrix2x4, Matrix4, Matrix4x2, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::wrap_angle;
use crate::traj::Trajectory;

/// Steering clamp: |δ| ≤ 45°.
pub const DELTA_MAX: f64 = std::f64::consts::FRAC_PI_4;
/// Speeds below this make heading estimation meaningless; callers fall back
/// to constant velocity.
pub const V_MIN: f64 = 0.1;
/// Default bicycle length (wheelbase-ish), meters.
pub const L_B_DEFAULT: f64 = 1.8;

/// Bicycle kinematic state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub x: f64,
    pub y: f64,
    /// Heading, radians.
    pub phi: f64,
    /// Speed, m/s (non-negative).
    pub v: f64,
    /// Steering angle, radians (|δ| < π/2).
    pub delta: f64,
    /// Bicycle length, meters.
    pub l_b: f64,
}

impl KinematicState {
    pub fn validate(&self) -> Result<()> {
        if self.v < 0.0 {
            return Err(Error::Config(format!("speed must be non-negative, got {}", self.v)));
        }
        if self.delta.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Config(format!(
                "steering angle must satisfy |delta| < pi/2, got {}",
                self.delta
            )));
        }
        if self.l_b <= 0.0 {
            return Err(Error::Config(format!("bicycle length must be positive, got {}", self.l_b)));
        }
        Ok(())
    }
}

/// Process / measurement noise for the extended Kalman filter,
/// per step at the dataset frame rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    /// Process position noise, meters per step.
    pub sigma_p: f64,
    /// Process heading noise, radians per step (absorbs the unmodeled steering).
    pub sigma_phi: f64,
    /// Process speed noise, m/s per step.
    pub sigma_v: f64,
    /// Measurement noise, meters.
    pub sigma_m: f64,
    /// Scale of the initial covariance.
    pub init_cov: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            sigma_p: 0.05,
            sigma_phi: 0.05,
            sigma_v: 0.1,
            sigma_m: 0.1,
            init_cov: 1.0,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma_p", self.sigma_p),
            ("sigma_phi", self.sigma_phi),
            ("sigma_v", self.sigma_v),
            ("sigma_m", self.sigma_m),
            ("init_cov", self.init_cov),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// The four predictors' futures for one ego, plus (after encoding) their
/// joint latent embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsForecast {
    pub const_v: Vec<(f64, f64)>,
    pub const_a: Vec<(f64, f64)>,
    pub kinematic: Vec<(f64, f64)>,
    pub xkalman: Vec<(f64, f64)>,
    /// 4 × hidden concatenated encoder states; present only after encoding.
    pub embedding: Option<Vec<f64>>,
}

impl PhysicsForecast {
    pub fn as_array(&self) -> [&Vec<(f64, f64)>; 4] {
        [&self.const_v, &self.const_a, &self.kinematic, &self.xkalman]
    }

    pub fn horizon(&self) -> usize {
        self.const_v.len()
    }
}

// ---------------------------------------------------------------------------
// Point-slice implementations. Public wrappers over `Trajectory` below.
// ---------------------------------------------------------------------------

pub(crate) fn const_v_points(pts: &[(f64, f64)], dt: f64, t_pred: usize) -> Result<Vec<(f64, f64)>> {
    let n = pts.len();
    if n < 2 {
        return Err(Error::Input(format!(
            "constant-velocity forecast needs at least 2 points, got {n}"
        )));
    }
    let last = pts[n - 1];
    let vx = (last.0 - pts[n - 2].0) / dt;
    let vy = (last.1 - pts[n - 2].1) / dt;
    Ok((1..=t_pred)
        .map(|k| {
            let t = k as f64 * dt;
            (last.0 + vx * t, last.1 + vy * t)
        })
        .collect())
}

pub(crate) fn const_a_points(pts: &[(f64, f64)], dt: f64, t_pred: usize) -> Result<Vec<(f64, f64)>> {
    let n = pts.len();
    if n < 3 {
        return Err(Error::Input(format!(
            "constant-acceleration forecast needs at least 3 points, got {n}"
        )));
    }
    let (p2, p1, p0) = (pts[n - 3], pts[n - 2], pts[n - 1]);
    // Second-order backward difference: the instantaneous velocity at the
    // last frame for quadratic motion. A plain two-frame difference lags by
    // a·dt/2 and would bias every forecast of accelerating motion.
    let vx = (3.0 * p0.0 - 4.0 * p1.0 + p2.0) / (2.0 * dt);
    let vy = (3.0 * p0.1 - 4.0 * p1.1 + p2.1) / (2.0 * dt);
    let ax = (p0.0 - 2.0 * p1.0 + p2.0) / (dt * dt);
    let ay = (p0.1 - 2.0 * p1.1 + p2.1) / (dt * dt);
    Ok((1..=t_pred)
        .map(|k| {
            let t = k as f64 * dt;
            (
                p0.0 + vx * t + 0.5 * ax * t * t,
                p0.1 + vy * t + 0.5 * ay * t * t,
            )
        })
        .collect())
}

pub(crate) fn estimate_state_points(pts: &[(f64, f64)], dt: f64, l_b: f64) -> Result<KinematicState> {
    let n = pts.len();
    if n < 3 {
        return Err(Error::Input(format!(
            "kinematic state estimation needs at least 3 points, got {n}"
        )));
    }
    if l_b <= 0.0 {
        return Err(Error::Config(format!("bicycle length must be positive, got {l_b}")));
    }
    let (p2, p1, p0) = (pts[n - 3], pts[n - 2], pts[n - 1]);
    let (dx1, dy1) = (p0.0 - p1.0, p0.1 - p1.1);
    let (dx2, dy2) = (p1.0 - p2.0, p1.1 - p2.1);
    let v = (dx1 * dx1 + dy1 * dy1).sqrt() / dt;
    let v_prev = (dx2 * dx2 + dy2 * dy2).sqrt() / dt;
    if v < V_MIN || v_prev < V_MIN {
        return Err(Error::LowSpeed);
    }
    let phi = dy1.atan2(dx1);
    let phi_prev = dy2.atan2(dx2);
    let phi_dot = wrap_angle(phi - phi_prev) / dt;
    let delta = (l_b * phi_dot / v).atan().clamp(-DELTA_MAX, DELTA_MAX);
    Ok(KinematicState {
        x: p0.0,
        y: p0.1,
        phi,
        v,
        delta,
        l_b,
    })
}

fn kinematic_derivative(state: &Vector4<f64>, delta: f64, l_b: f64) -> Vector4<f64> {
    let (phi, v) = (state[2], state[3]);
    Vector4::new(v * phi.cos(), v * phi.sin(), v / l_b * delta.tan(), 0.0)
}

/// One RK4 step of the bicycle model with frozen speed and steering.
fn rk4_step(state: &Vector4<f64>, delta: f64, l_b: f64, dt: f64) -> Vector4<f64> {
    let k1 = kinematic_derivative(state, delta, l_b);
    let k2 = kinematic_derivative(&(state + 0.5 * dt * k1), delta, l_b);
    let k3 = kinematic_derivative(&(state + 0.5 * dt * k2), delta, l_b);
    let k4 = kinematic_derivative(&(state + dt * k3), delta, l_b);
    state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

pub(crate) fn kinematic_rollout(state: &KinematicState, t_pred: usize, dt: f64) -> Vec<(f64, f64)> {
    let mut s = Vector4::new(state.x, state.y, state.phi, state.v);
    let mut out = Vec::with_capacity(t_pred);
    for _ in 0..t_pred {
        s = rk4_step(&s, state.delta, state.l_b, dt);
        out.push((s[0], s[1]));
    }
    out
}

pub(crate) fn kinematic_points(
    pts: &[(f64, f64)],
    dt: f64,
    t_pred: usize,
    l_b: f64,
) -> Result<Vec<(f64, f64)>> {
    match estimate_state_points(pts, dt, l_b) {
        Ok(state) => Ok(kinematic_rollout(&state, t_pred, dt)),
        Err(Error::LowSpeed) => const_v_points(pts, dt, t_pred),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Extended Kalman filter
// ---------------------------------------------------------------------------

/// Filtered state (x, y, φ, v) with covariance, plus the filtered positions
/// and the previous heading for the heading-rate estimate used at rollout.
#[derive(Debug, Clone)]
pub struct EkfResult {
    pub state: Vector4<f64>,
    pub cov: Matrix4<f64>,
    /// Filtered position estimates, one per input frame.
    pub filtered: Vec<(f64, f64)>,
    phi_prev: f64,
}

impl EkfResult {
    /// Heading rate from the last two filtered headings.
    pub fn heading_rate(&self, dt: f64) -> f64 {
        wrap_angle(self.state[2] - self.phi_prev) / dt
    }
}

/// Run the EKF over a full history with the bicycle process model.
///
/// Steering is not part of the state; it acts as a zero-mean disturbance
/// absorbed by `sigma_phi`. The measurement is the position. Updates use the
/// Joseph form so the covariance stays symmetric positive-definite.
pub fn ekf_filter(pts: &[(f64, f64)], dt: f64, noise: &NoiseConfig) -> Result<EkfResult> {
    noise.validate()?;
    let n = pts.len();
    if n < 3 {
        return Err(Error::Input(format!("EKF needs at least 3 points, got {n}")));
    }
    // Initialize at the first point, heading/speed from the first displacement.
    let (dx, dy) = (pts[1].0 - pts[0].0, pts[1].1 - pts[0].1);
    let v0 = (dx * dx + dy * dy).sqrt() / dt;
    let phi0 = if v0 > 1e-12 { dy.atan2(dx) } else { 0.0 };
    let mut x = Vector4::new(pts[0].0, pts[0].1, phi0, v0);
    let mut p = Matrix4::identity() * noise.init_cov;
    let q = Matrix4::from_diagonal(&Vector4::new(
        noise.sigma_p * noise.sigma_p,
        noise.sigma_p * noise.sigma_p,
        noise.sigma_phi * noise.sigma_phi,
        noise.sigma_v * noise.sigma_v,
    ));
    let r = Matrix2::identity() * (noise.sigma_m * noise.sigma_m);
    let h = Matrix2x4::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
    let identity = Matrix4::identity();

    let mut filtered = Vec::with_capacity(n);
    filtered.push((x[0], x[1]));
    let mut phi_prev = x[2];

    for &(zx, zy) in &pts[1..] {
        phi_prev = x[2];
        // Predict.
        let (phi, v) = (x[2], x[3]);
        let pred = Vector4::new(x[0] + v * phi.cos() * dt, x[1] + v * phi.sin() * dt, phi, v);
        #[rustfmt::skip]
        let f = Matrix4::new(
            1.0, 0.0, -v * phi.sin() * dt, phi.cos() * dt,
            0.0, 1.0,  v * phi.cos() * dt, phi.sin() * dt,
            0.0, 0.0,  1.0,                0.0,
            0.0, 0.0,  0.0,                1.0,
        );
        x = pred;
        p = f * p * f.transpose() + q;

        // Update (Joseph form).
        let innovation = Vector2::new(zx - x[0], zy - x[1]);
        let s = h * p * h.transpose() + r;
        let s_inv = s
            .try_inverse()
            .ok_or_else(|| Error::Numerical("EKF innovation covariance is singular".into()))?;
        let k: Matrix4x2<f64> = p * h.transpose() * s_inv;
        x += k * innovation;
        let ikh = identity - k * h;
        p = ikh * p * ikh.transpose() + k * r * k.transpose();
        p = (p + p.transpose()) * 0.5;
        if p.cholesky().is_none() {
            return Err(Error::Numerical(
                "EKF covariance lost positive-definiteness".into(),
            ));
        }
        filtered.push((x[0], x[1]));
    }

    Ok(EkfResult {
        state: x,
        cov: p,
        filtered,
        phi_prev,
    })
}

pub(crate) fn xkalman_points(
    pts: &[(f64, f64)],
    dt: f64,
    t_pred: usize,
    noise: &NoiseConfig,
    l_b: f64,
) -> Result<Vec<(f64, f64)>> {
    let ekf = ekf_filter(pts, dt, noise)?;
    let v = ekf.state[3].max(0.0);
    let delta = if v < V_MIN {
        0.0
    } else {
        (l_b * ekf.heading_rate(dt) / v).atan().clamp(-DELTA_MAX, DELTA_MAX)
    };
    let state = KinematicState {
        x: ekf.state[0],
        y: ekf.state[1],
        phi: ekf.state[2],
        v,
        delta,
        l_b,
    };
    Ok(kinematic_rollout(&state, t_pred, dt))
}

// ---------------------------------------------------------------------------
// Public trajectory-level API
// ---------------------------------------------------------------------------

fn forecast_trajectory(history: &Trajectory, future: Vec<(f64, f64)>) -> Result<Trajectory> {
    let last = history
        .last_frame()
        .ok_or_else(|| Error::Input("empty history".into()))?;
    let points = future
        .into_iter()
        .enumerate()
        .map(|(k, (x, y))| crate::traj::TrackedPoint::new(last + 1 + k as i64, x, y))
        .collect();
    Trajectory::new(history.agent, history.dt, points)
}

/// Constant-velocity forecast; velocity from the last two frames.
pub fn forecast_const_v(history: &Trajectory, t_pred: usize) -> Result<Trajectory> {
    forecast_trajectory(history, const_v_points(&history.coords(), history.dt, t_pred)?)
}

/// Constant-acceleration forecast; second difference of the last three frames.
pub fn forecast_const_a(history: &Trajectory, t_pred: usize) -> Result<Trajectory> {
    forecast_trajectory(history, const_a_points(&history.coords(), history.dt, t_pred)?)
}

/// Estimate the bicycle state from the last three frames.
/// Returns [`Error::LowSpeed`] when the recent speed is below `V_MIN`.
pub fn estimate_kinematic_state(history: &Trajectory, l_b: f64) -> Result<KinematicState> {
    estimate_state_points(&history.coords(), history.dt, l_b)
}

/// Integrate the bicycle model forward with frozen speed and steering (RK4).
pub fn forecast_kinematic(state: &KinematicState, t_pred: usize, dt: f64) -> Result<Vec<(f64, f64)>> {
    state.validate()?;
    Ok(kinematic_rollout(state, t_pred, dt))
}

/// EKF-filtered forecast: filter the full history, then roll the final state
/// forward with the kinematic integrator.
pub fn forecast_xkalman(
    history: &Trajectory,
    t_pred: usize,
    noise: &NoiseConfig,
    l_b: f64,
) -> Result<Trajectory> {
    forecast_trajectory(
        history,
        xkalman_points(&history.coords(), history.dt, t_pred, noise, l_b)?,
    )
}

/// Run all four predictors on one history (kinematic falls back to const_v
/// at low speed).
pub fn forecast_all(
    pts: &[(f64, f64)],
    dt: f64,
    t_pred: usize,
    noise: &NoiseConfig,
    l_b: f64,
) -> Result<PhysicsForecast> {
    Ok(PhysicsForecast {
        const_v: const_v_points(pts, dt, t_pred)?,
        const_a: const_a_points(pts, dt, t_pred)?,
        kinematic: kinematic_points(pts, dt, t_pred, l_b)?,
        xkalman: xkalman_points(pts, dt, t_pred, noise, l_b)?,
        embedding: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traj::{AgentId, TrackedPoint};
    use approx::assert_abs_diff_eq;

    fn traj(points: &[(f64, f64)], dt: f64) -> Trajectory {
        let pts = points
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| TrackedPoint::new(k as i64, x, y))
            .collect();
        Trajectory::new(AgentId(0), dt, pts).unwrap()
    }

    #[test]
    fn const_v_linear_extrapolation() {
        let h = traj(&[(0.0, 0.0), (1.0, 0.0)], 1.0);
        let f = forecast_const_v(&h, 3).unwrap();
        let coords = f.coords();
        assert_eq!(coords, vec![(2.0, 0.0), (3.0, 0.0), (4.0, 0.0)]);
        assert_eq!(f.first_frame(), Some(2));
    }

    #[test]
    fn const_v_stationary() {
        let h = traj(&[(2.0, 3.0), (2.0, 3.0)], 0.04);
        let f = forecast_const_v(&h, 4).unwrap();
        for p in f.coords() {
            assert_eq!(p, (2.0, 3.0));
        }
    }

    #[test]
    fn const_v_needs_two_points() {
        let h = traj(&[(0.0, 0.0)], 1.0);
        assert!(matches!(forecast_const_v(&h, 1), Err(Error::Input(_))));
    }

    #[test]
    fn const_a_hand_evaluated() {
        // (0, 1, 3) are samples of q(t) = 0.5 t² + 0.5 t, so the forecast
        // must continue it: v̂ = (9 - 4 + 0)/2 = 2.5, â = 1,
        // next point x = 3 + 2.5 + 0.5 = 6 = q(3).
        let h = traj(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], 1.0);
        let f = forecast_const_a(&h, 1).unwrap();
        assert_abs_diff_eq!(f.coords()[0].0, 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.coords()[0].1, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn const_a_zero_accel_matches_const_v() {
        let h = traj(&[(0.0, 1.0), (0.5, 1.5), (1.0, 2.0)], 0.5);
        let a = forecast_const_a(&h, 5).unwrap();
        let v = forecast_const_v(&h, 5).unwrap();
        for (pa, pv) in a.coords().iter().zip(v.coords()) {
            assert_abs_diff_eq!(pa.0, pv.0, epsilon = 1e-12);
            assert_abs_diff_eq!(pa.1, pv.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn const_a_needs_three_points() {
        let h = traj(&[(0.0, 0.0), (1.0, 0.0)], 1.0);
        assert!(matches!(forecast_const_a(&h, 1), Err(Error::Input(_))));
    }

    #[test]
    fn exactness_on_synthetic_motion() {
        // const_v is exact on affine motion, const_a on quadratic motion.
        let dt = 0.04;
        let affine: Vec<(f64, f64)> = (0..20)
            .map(|k| (1.0 + 2.0 * k as f64 * dt, -0.5 + 0.7 * k as f64 * dt))
            .collect();
        let quad: Vec<(f64, f64)> = (0..20)
            .map(|k| {
                let t = k as f64 * dt;
                (1.0 + 2.0 * t + 0.3 * t * t, -0.5 + 0.7 * t - 0.2 * t * t)
            })
            .collect();
        let hist = traj(&affine[..10], dt);
        let f = forecast_const_v(&hist, 10).unwrap();
        let truth: Vec<_> = affine[10..].to_vec();
        assert!(crate::metrics::ade(&f.coords(), &truth).unwrap() < 1e-9);

        let hist = traj(&quad[..10], dt);
        let f = forecast_const_a(&hist, 10).unwrap();
        let truth: Vec<_> = quad[10..].to_vec();
        assert!(crate::metrics::ade(&f.coords(), &truth).unwrap() < 1e-9);
    }

    #[test]
    fn kinematic_state_straight_motion_zero_delta() {
        let h = traj(&[(0.0, 0.0), (0.2, 0.0), (0.4, 0.0)], 0.04);
        let s = estimate_kinematic_state(&h, 1.8).unwrap();
        assert_abs_diff_eq!(s.delta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.v, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.phi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kinematic_state_circular_motion() {
        // Uniform circular motion at radius R: steady state has
        // tan(delta) = L_B / R. Sampled at a small angular step so the
        // chord-based estimate is within 1e-6 of the analytic value.
        let (radius, v, dt, l_b) = (25.0, 5.0, 0.04, 1.8);
        let omega = v / radius;
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|k| {
                let th = omega * k as f64 * dt;
                (radius * th.cos(), radius * th.sin())
            })
            .collect();
        let h = traj(&pts, dt);
        let s = estimate_kinematic_state(&h, l_b).unwrap();
        assert_abs_diff_eq!(s.delta, (l_b / radius).atan(), epsilon = 1e-6);
    }

    #[test]
    fn kinematic_state_low_speed_fallback() {
        let h = traj(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)], 0.04);
        assert!(matches!(estimate_kinematic_state(&h, 1.8), Err(Error::LowSpeed)));
    }

    #[test]
    fn kinematic_forecast_straight_matches_const_v() {
        let h = traj(&[(0.0, 0.0), (0.2, 0.15), (0.4, 0.3)], 0.04);
        let s = estimate_kinematic_state(&h, 1.8).unwrap();
        let kin = forecast_kinematic(&s, 50, 0.04).unwrap();
        let cv = forecast_const_v(&h, 50).unwrap();
        for (a, b) in kin.iter().zip(cv.coords()) {
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-9);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn kinematic_forecast_arc_lies_on_circle() {
        // With steering delta, the model traces a circle of radius
        // R = L_B / tan(delta) centered 90° left of the initial heading.
        let (l_b, delta, v, dt) = (1.8, 0.3f64, 5.0, 0.04);
        let radius = l_b / delta.tan();
        let state = KinematicState {
            x: 0.0,
            y: 0.0,
            phi: 0.0,
            v,
            delta,
            l_b,
        };
        let pts = forecast_kinematic(&state, 100, dt).unwrap();
        let (cx, cy) = (0.0, radius);
        for &(x, y) in &pts {
            let r = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
            assert_abs_diff_eq!(r, radius, epsilon = 1e-6);
        }
    }

    #[test]
    fn kinematic_forecast_stationary() {
        let state = KinematicState {
            x: 1.0,
            y: 2.0,
            phi: 0.7,
            v: 0.0,
            delta: 0.2,
            l_b: 1.8,
        };
        for p in forecast_kinematic(&state, 10, 0.04).unwrap() {
            assert_abs_diff_eq!(p.0, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.1, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn kinematic_conserves_speed_at_modest_curvature() {
        let (l_b, delta, v, dt) = (1.8, 0.01f64, 5.0, 0.04);
        let state = KinematicState {
            x: 0.0,
            y: 0.0,
            phi: 0.3,
            v,
            delta,
            l_b,
        };
        let pts = forecast_kinematic(&state, 50, dt).unwrap();
        let mut prev = (0.0, 0.0);
        for &p in &pts {
            let speed = ((p.0 - prev.0).powi(2) + (p.1 - prev.1).powi(2)).sqrt() / dt;
            assert_abs_diff_eq!(speed, v, epsilon = 1e-6);
            prev = p;
        }
    }

    #[test]
    fn ekf_noiseless_straight_line_matches_const_v() {
        let dt = 0.04;
        let pts: Vec<(f64, f64)> = (0..100).map(|k| (5.0 * k as f64 * dt, 2.0)).collect();
        let h = traj(&pts, dt);
        let f = forecast_xkalman(&h, 25, &NoiseConfig::default(), 1.8).unwrap();
        let cv = forecast_const_v(&h, 25).unwrap();
        for (a, b) in f.coords().iter().zip(cv.coords()) {
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-6);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-6);
        }
    }

    #[test]
    fn ekf_covariance_stays_positive_definite() {
        // Noisy curved motion; after every update the covariance must admit a
        // Cholesky factorization (checked inside) and have positive eigenvalues.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let dt = 0.04;
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|k| {
                let th = 0.2 * k as f64 * dt;
                (
                    25.0 * th.cos() + 0.05 * rng.random_range(-1.0..1.0),
                    25.0 * th.sin() + 0.05 * rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        let res = ekf_filter(&pts, dt, &NoiseConfig::default()).unwrap();
        let eig = res.cov.symmetric_eigenvalues();
        for i in 0..4 {
            assert!(eig[i] > 0.0, "eigenvalue {} = {}", i, eig[i]);
        }
    }

    #[test]
    fn predictors_translation_equivariant() {
        let dt = 0.04;
        let pts: Vec<(f64, f64)> = (0..30)
            .map(|k| {
                let th = 0.25 * k as f64 * dt;
                (20.0 * th.cos(), 20.0 * th.sin())
            })
            .collect();
        let shifted: Vec<(f64, f64)> = pts.iter().map(|p| (p.0 + 11.0, p.1 - 4.0)).collect();
        let noise = NoiseConfig::default();
        let base = forecast_all(&pts, dt, 10, &noise, 1.8).unwrap();
        let moved = forecast_all(&shifted, dt, 10, &noise, 1.8).unwrap();
        for (a, b) in base.as_array().iter().zip(moved.as_array().iter()) {
            for (pa, pb) in a.iter().zip(b.iter()) {
                assert_abs_diff_eq!(pa.0 + 11.0, pb.0, epsilon = 1e-9);
                assert_abs_diff_eq!(pa.1 - 4.0, pb.1, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn predictors_rotation_equivariant_about_last_point() {
        let dt = 0.04;
        let pts: Vec<(f64, f64)> = (0..30)
            .map(|k| {
                let th = 0.25 * k as f64 * dt;
                (20.0 * th.cos(), 20.0 * th.sin())
            })
            .collect();
        let pivot = *pts.last().unwrap();
        let ang = 0.9f64;
        let rot = |p: (f64, f64)| {
            let (dx, dy) = (p.0 - pivot.0, p.1 - pivot.1);
            (
                pivot.0 + dx * ang.cos() - dy * ang.sin(),
                pivot.1 + dx * ang.sin() + dy * ang.cos(),
            )
        };
        let rotated: Vec<(f64, f64)> = pts.iter().map(|&p| rot(p)).collect();
        let noise = NoiseConfig::default();
        let base = forecast_all(&pts, dt, 10, &noise, 1.8).unwrap();
        let moved = forecast_all(&rotated, dt, 10, &noise, 1.8).unwrap();
        for (a, b) in base.as_array().iter().zip(moved.as_array().iter()) {
            for (pa, pb) in a.iter().zip(b.iter()) {
                let pr = rot(*pa);
                assert_abs_diff_eq!(pr.0, pb.0, epsilon = 1e-6);
                assert_abs_diff_eq!(pr.1, pb.1, epsilon = 1e-6);
            }
        }
    }
}

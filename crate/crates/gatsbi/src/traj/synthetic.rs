//! Synthetic circular-track scene generation.
//!
//! Produces reproducible desk-scale scenes of agents riding a ring: steady
//! followers, accelerating riders, and overtakers that shift laterally when
//! they close in on a slower leader, pass on the outside, and merge back.
//! Overtaking maneuvers are labeled in the scene metadata.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AgentId, OvertakeEvent, Scene, SceneMetadata, TrackedPoint, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::LaneFrame;

/// How many agents of each behavior a scene contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BehaviorMix {
    /// Constant-speed riders.
    pub followers: usize,
    /// Riders with constant longitudinal acceleration (speed-capped).
    pub accelerators: usize,
    /// Overtaker + slower leader pairs (two agents each).
    pub overtake_pairs: usize,
}

impl Default for BehaviorMix {
    fn default() -> Self {
        Self {
            followers: 1,
            accelerators: 1,
            overtake_pairs: 1,
        }
    }
}

impl BehaviorMix {
    pub fn agent_count(&self) -> usize {
        self.followers + self.accelerators + 2 * self.overtake_pairs
    }

    fn group_count(&self) -> usize {
        self.followers + self.accelerators + self.overtake_pairs
    }

    /// Spread a flat agent count over behaviors, biased toward overtakes.
    pub fn from_agent_count(n: usize) -> Self {
        let pairs = (n / 3).max(if n >= 2 { 1 } else { 0 });
        let rest = n.saturating_sub(2 * pairs);
        let followers = rest.div_ceil(2);
        let accelerators = rest - followers;
        Self {
            followers,
            accelerators,
            overtake_pairs: pairs,
        }
    }
}

/// Generator parameters for one scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub scene_id: String,
    /// Nominal track radius in meters.
    pub track_radius: f64,
    pub fps: f64,
    pub duration_s: f64,
    pub mix: BehaviorMix,
    /// Sampled rider speed range, m/s.
    pub speed_min: f64,
    pub speed_max: f64,
    /// Sampled acceleration range for accelerating riders, m/s².
    pub accel_min: f64,
    pub accel_max: f64,
    /// Radial jitter of each rider's base lane, meters.
    pub lane_spread: f64,
    /// Standard deviation of isotropic observation noise, meters.
    pub sigma_obs: f64,
    /// Minimum Euclidean gap the generator guarantees between an overtaker
    /// and its leader.
    pub clearance: f64,
    /// Arc gap at which an overtaker starts its lateral shift.
    pub overtake_trigger_gap: f64,
    /// Lateral offset used while passing, meters.
    pub overtake_lateral: f64,
    /// Duration of the lateral ramp, seconds.
    pub overtake_shift_s: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            scene_id: "synthetic".into(),
            track_radius: 25.0,
            fps: 25.0,
            duration_s: 10.0,
            mix: BehaviorMix::default(),
            speed_min: 4.0,
            speed_max: 7.0,
            accel_min: 0.10,
            accel_max: 0.35,
            lane_spread: 0.5,
            sigma_obs: 0.0,
            clearance: 1.5,
            overtake_trigger_gap: 6.0,
            overtake_lateral: 2.2,
            overtake_shift_s: 1.2,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.track_radius > 0.0) {
            return Err(Error::Config(format!(
                "track_radius must be positive, got {}",
                self.track_radius
            )));
        }
        if !(self.duration_s > 0.0) {
            return Err(Error::Config(format!(
                "duration_s must be positive, got {}",
                self.duration_s
            )));
        }
        if !(self.fps > 0.0) {
            return Err(Error::Config(format!("fps must be positive, got {}", self.fps)));
        }
        if self.sigma_obs < 0.0 {
            return Err(Error::Config(format!(
                "sigma_obs must be non-negative, got {}",
                self.sigma_obs
            )));
        }
        if self.mix.agent_count() == 0 {
            return Err(Error::Config("behavior mix has no agents".into()));
        }
        if !(self.speed_min > 0.0 && self.speed_max >= self.speed_min) {
            return Err(Error::Config("invalid speed range".into()));
        }
        Ok(())
    }
}

/// Raised-cosine blend from 0 to 1 over `[0, 1]`.
fn smooth01(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    0.5 - 0.5 * (std::f64::consts::PI * u).cos()
}

fn sample_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u1 away from zero to keep ln finite.
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

struct AgentPlan {
    id: u64,
    /// Angle at frame 0.
    theta0: f64,
    /// Base radial lane.
    radius: f64,
    speed0: f64,
    accel: f64,
    /// Overtake plan: (leader index in plans, trigger, lateral, shift frames).
    overtakes: Option<usize>,
}

/// Generate one synthetic scene. Same (config, seed) ⇒ bit-identical output.
pub fn generate_synthetic_track(cfg: &GeneratorConfig, seed: u64) -> Result<Scene> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dt = 1.0 / cfg.fps;
    let n_frames = (cfg.duration_s * cfg.fps).round() as usize;
    if n_frames < 2 {
        return Err(Error::Config("duration too short for two frames".into()));
    }

    // Each behavior group owns an angular sector so groups do not interfere.
    let groups = cfg.mix.group_count();
    let sector = 2.0 * std::f64::consts::PI / groups as f64;
    let mut plans: Vec<AgentPlan> = Vec::new();
    let mut next_id = 0u64;
    let mut group_idx = 0usize;
    let sector_center = |group_idx: &mut usize| {
        let c = sector * (*group_idx as f64 + 0.5);
        *group_idx += 1;
        c
    };

    for _ in 0..cfg.mix.followers {
        let center = sector_center(&mut group_idx);
        plans.push(AgentPlan {
            id: next_id,
            theta0: center,
            radius: cfg.track_radius + rng.random_range(-cfg.lane_spread..=cfg.lane_spread),
            speed0: rng.random_range(cfg.speed_min..=cfg.speed_max),
            accel: 0.0,
            overtakes: None,
        });
        next_id += 1;
    }
    for _ in 0..cfg.mix.accelerators {
        let center = sector_center(&mut group_idx);
        plans.push(AgentPlan {
            id: next_id,
            theta0: center,
            radius: cfg.track_radius + rng.random_range(-cfg.lane_spread..=cfg.lane_spread),
            speed0: rng.random_range(cfg.speed_min..=cfg.speed_min.midpoint(cfg.speed_max)),
            accel: rng.random_range(cfg.accel_min..=cfg.accel_max),
            overtakes: None,
        });
        next_id += 1;
    }
    for _ in 0..cfg.mix.overtake_pairs {
        let center = sector_center(&mut group_idx);
        let leader_speed = rng.random_range(cfg.speed_min..=cfg.speed_min + 1.0);
        let delta_v = rng.random_range(1.5..=3.0);
        // Start the approach so the trigger fires somewhere mid-scene.
        let t_trigger = rng.random_range(0.25..=0.45) * cfg.duration_s;
        let start_gap = cfg.overtake_trigger_gap + delta_v * t_trigger;
        let lane = cfg.track_radius + rng.random_range(-cfg.lane_spread..=cfg.lane_spread);
        let leader_idx = plans.len();
        plans.push(AgentPlan {
            id: next_id,
            theta0: center,
            radius: lane,
            speed0: leader_speed,
            accel: 0.0,
            overtakes: None,
        });
        next_id += 1;
        plans.push(AgentPlan {
            id: next_id,
            theta0: center - start_gap / cfg.track_radius,
            radius: lane,
            speed0: leader_speed + delta_v,
            accel: 0.0,
            overtakes: Some(leader_idx),
        });
        next_id += 1;
    }

    // Integrate longitudinal motion (angle) per agent.
    let v_cap = cfg.speed_max + 1.0;
    let mut thetas: Vec<Vec<f64>> = Vec::with_capacity(plans.len());
    for plan in &plans {
        let mut theta = plan.theta0;
        let mut v = plan.speed0;
        let mut seq = Vec::with_capacity(n_frames);
        for _ in 0..n_frames {
            seq.push(theta);
            theta += v / plan.radius * dt;
            v = (v + plan.accel * dt).clamp(0.5, v_cap);
        }
        thetas.push(seq);
    }

    // Lateral (radial) motion: overtakers ramp out, pass, ramp back.
    let shift_frames = (cfg.overtake_shift_s * cfg.fps).round().max(1.0) as usize;
    let mut radii: Vec<Vec<f64>> = plans
        .iter()
        .map(|p| vec![p.radius; n_frames])
        .collect();
    let mut events = Vec::new();
    for (i, plan) in plans.iter().enumerate() {
        let Some(leader_idx) = plan.overtakes else {
            continue;
        };
        #[derive(PartialEq)]
        enum Phase {
            Approach,
            Shift(usize),
            Pass,
            Merge(usize),
            Done,
        }
        let mut phase = Phase::Approach;
        let mut start_frame = None;
        let mut end_frame = None;
        for k in 0..n_frames {
            // Arc gap to leader along the ring (positive = leader ahead).
            let gap = (thetas[leader_idx][k] - thetas[i][k]) * cfg.track_radius;
            match phase {
                Phase::Approach => {
                    if gap <= cfg.overtake_trigger_gap {
                        phase = Phase::Shift(k);
                        start_frame = Some(k as i64);
                    }
                }
                Phase::Shift(k0) => {
                    if k - k0 >= shift_frames {
                        phase = Phase::Pass;
                    }
                }
                Phase::Pass => {
                    if gap <= -cfg.overtake_trigger_gap {
                        phase = Phase::Merge(k);
                    }
                }
                Phase::Merge(k0) => {
                    if k - k0 >= shift_frames {
                        phase = Phase::Done;
                        end_frame = Some(k as i64);
                    }
                }
                Phase::Done => {}
            }
            let lateral = match phase {
                Phase::Approach => 0.0,
                Phase::Shift(k0) => smooth01((k - k0) as f64 / shift_frames as f64),
                Phase::Pass => 1.0,
                Phase::Merge(k0) => 1.0 - smooth01((k - k0) as f64 / shift_frames as f64),
                Phase::Done => 0.0,
            };
            radii[i][k] = plan.radius + cfg.overtake_lateral * lateral;
        }
        if let Some(start) = start_frame {
            events.push(OvertakeEvent {
                overtaker: AgentId(plan.id),
                leader: AgentId(plans[leader_idx].id),
                start_frame: start,
                end_frame: end_frame.unwrap_or(n_frames as i64 - 1),
            });
        }
    }

    // Emit noisy Cartesian observations.
    let mut trajectories = Vec::with_capacity(plans.len());
    for (i, plan) in plans.iter().enumerate() {
        let mut points = Vec::with_capacity(n_frames);
        for k in 0..n_frames {
            let theta = thetas[i][k];
            let r = radii[i][k];
            let (mut x, mut y) = (r * theta.cos(), r * theta.sin());
            if cfg.sigma_obs > 0.0 {
                x += cfg.sigma_obs * sample_normal(&mut rng);
                y += cfg.sigma_obs * sample_normal(&mut rng);
            }
            points.push(TrackedPoint::new(k as i64, x, y));
        }
        trajectories.push(Trajectory::new(AgentId(plan.id), dt, points)?);
    }

    let meta = SceneMetadata {
        lane_frame: Some(LaneFrame::new(0.0, 0.0, cfg.track_radius)?),
        overtakes: events,
    };
    Scene::with_metadata(cfg.scene_id.clone(), cfg.fps, trajectories, meta)
}

/// Generate a batch of scenes with ids `{prefix}_{index}` and per-scene seeds
/// derived from the base seed.
pub fn generate_scene_set(
    base: &GeneratorConfig,
    prefix: &str,
    count: usize,
    seed: u64,
) -> Result<Vec<Scene>> {
    (0..count)
        .map(|i| {
            let mut cfg = base.clone();
            cfg.scene_id = format!("{prefix}_{i:04}");
            generate_synthetic_track(&cfg, seed.wrapping_add(i as u64).wrapping_mul(0x9e37_79b9))
        })
        .collect()
}

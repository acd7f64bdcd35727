//! Trajectory data model, dataset ingestion, windowing, neighborhood
//! selection, and fold splitting.
//!
//! The universal currency is a [`Trajectory`]: timestamped 2-D positions of a
//! single agent at uniform frame spacing. Scenes group trajectories recorded
//! together; [`SampleWindow`]s slice them into (history, future, neighbors)
//! units for training and evaluation.

mod csv_io;
pub mod synthetic;

pub use csv_io::{load_trajectories, write_trajectory_csv, CsvSchema};

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LaneFrame;

/// Identifier of one tracked agent, unique within a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgentId(pub u64);

impl std::fmt::Display for AgentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One observation: frame index plus planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackedPoint {
    pub frame: i64,
    pub x: f64,
    pub y: f64,
}

impl TrackedPoint {
    pub fn new(frame: i64, x: f64, y: f64) -> Self {
        Self { frame, x, y }
    }

    pub fn pos(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// Ordered, gap-free observations of one agent.
///
/// Frames are consecutive by construction: ingestion splits tracks at frame
/// gaps instead of interpolating across them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub agent: AgentId,
    /// Seconds per frame.
    pub dt: f64,
    points: Vec<TrackedPoint>,
}

impl Trajectory {
    pub fn new(agent: AgentId, dt: f64, points: Vec<TrackedPoint>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {dt}")));
        }
        for p in &points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::Data(format!(
                    "non-finite coordinate for agent {} at frame {}",
                    agent, p.frame
                )));
            }
        }
        for w in points.windows(2) {
            if w[1].frame != w[0].frame + 1 {
                return Err(Error::Data(format!(
                    "frames must be consecutive for agent {}: {} then {}",
                    agent, w[0].frame, w[1].frame
                )));
            }
        }
        Ok(Self { agent, dt, points })
    }

    pub fn points(&self) -> &[TrackedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first_frame(&self) -> Option<i64> {
        self.points.first().map(|p| p.frame)
    }

    pub fn last_frame(&self) -> Option<i64> {
        self.points.last().map(|p| p.frame)
    }

    /// Position at an absolute frame index, if observed.
    pub fn at_frame(&self, frame: i64) -> Option<(f64, f64)> {
        let first = self.first_frame()?;
        if frame < first {
            return None;
        }
        let idx = (frame - first) as usize;
        self.points.get(idx).map(|p| p.pos())
    }

    /// Positions as bare coordinate pairs.
    pub fn coords(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| p.pos()).collect()
    }
}

/// An overtaking maneuver recorded by the synthetic generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OvertakeEvent {
    pub overtaker: AgentId,
    pub leader: AgentId,
    /// First frame of the lateral shift.
    pub start_frame: i64,
    /// Last frame of the merge back.
    pub end_frame: i64,
}

/// Side information attached to a scene.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SceneMetadata {
    /// Circular-track frame for lane-coordinate conversion, when known.
    pub lane_frame: Option<LaneFrame>,
    pub overtakes: Vec<OvertakeEvent>,
}

/// A set of trajectories recorded together at a common frame rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub scene_id: String,
    /// Frames per second; all trajectories share dt = 1/fps.
    pub fps: f64,
    trajectories: Vec<Trajectory>,
    pub meta: SceneMetadata,
}

impl Scene {
    pub fn new(scene_id: impl Into<String>, fps: f64, trajectories: Vec<Trajectory>) -> Result<Self> {
        Self::with_metadata(scene_id, fps, trajectories, SceneMetadata::default())
    }

    pub fn with_metadata(
        scene_id: impl Into<String>,
        fps: f64,
        trajectories: Vec<Trajectory>,
        meta: SceneMetadata,
    ) -> Result<Self> {
        let scene_id = scene_id.into();
        if !(fps > 0.0) || !fps.is_finite() {
            return Err(Error::Config(format!("fps must be positive, got {fps}")));
        }
        let dt = 1.0 / fps;
        let mut seen = std::collections::BTreeSet::new();
        for t in &trajectories {
            if (t.dt - dt).abs() > 1e-12 {
                return Err(Error::Data(format!(
                    "trajectory dt {} does not match scene dt {}",
                    t.dt, dt
                )));
            }
            if !seen.insert(t.agent) {
                return Err(Error::Data(format!(
                    "duplicate agent id {} in scene {}",
                    t.agent, scene_id
                )));
            }
        }
        Ok(Self {
            scene_id,
            fps,
            trajectories,
            meta,
        })
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn trajectory(&self, agent: AgentId) -> Option<&Trajectory> {
        self.trajectories.iter().find(|t| t.agent == agent)
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.fps
    }

    /// Replace every trajectory's coordinates, keeping ids and frames.
    /// Used by the lane-coordinate pipeline.
    pub fn map_coords(&self, mut f: impl FnMut(&Trajectory) -> Result<Vec<(f64, f64)>>) -> Result<Scene> {
        let mut out = Vec::with_capacity(self.trajectories.len());
        for t in &self.trajectories {
            let coords = f(t)?;
            if coords.len() != t.len() {
                return Err(Error::Shape(format!(
                    "coordinate map changed length for agent {}: {} -> {}",
                    t.agent,
                    t.len(),
                    coords.len()
                )));
            }
            let points = t
                .points()
                .iter()
                .zip(coords)
                .map(|(p, (x, y))| TrackedPoint::new(p.frame, x, y))
                .collect();
            out.push(Trajectory::new(t.agent, t.dt, points)?);
        }
        Scene::with_metadata(self.scene_id.clone(), self.fps, out, self.meta.clone())
    }
}

/// Windowing and neighborhood parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    /// Observation horizon in frames; histories have `t_obs + 1` points.
    pub t_obs: usize,
    /// Prediction horizons in frames. Windows carry futures of the maximum
    /// horizon; shorter horizons evaluate on the prefix.
    pub horizons: Vec<usize>,
    /// Start-frame stride between consecutive windows of one agent.
    pub stride: usize,
    /// Maximum number of neighbors per window.
    pub n_max: usize,
    /// Neighborhood radius in meters at the reference frame.
    pub neighbor_radius: f64,
    pub k_folds: usize,
    pub seed: u64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            t_obs: 100,
            horizons: vec![25, 50, 75, 100],
            stride: 1,
            n_max: 5,
            neighbor_radius: 20.0,
            k_folds: 5,
            seed: 0,
        }
    }
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_obs == 0 || self.stride == 0 || self.k_folds == 0 {
            return Err(Error::Config(
                "t_obs, stride and k_folds must be positive".into(),
            ));
        }
        if self.horizons.is_empty() || self.horizons.iter().any(|&h| h == 0) {
            return Err(Error::Config("horizons must be non-empty and positive".into()));
        }
        if !(self.neighbor_radius > 0.0) {
            return Err(Error::Config(format!(
                "neighbor_radius must be positive, got {}",
                self.neighbor_radius
            )));
        }
        Ok(())
    }

    pub fn max_horizon(&self) -> usize {
        self.horizons.iter().copied().max().unwrap_or(0)
    }
}

/// A neighbor's history aligned to the ego's observation frames.
///
/// Frames before the neighbor appeared are zero-padded with `valid = false`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborTrack {
    pub agent: AgentId,
    pub points: Vec<TrackedPoint>,
    pub valid: Vec<bool>,
}

impl NeighborTrack {
    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }
}

/// One training / evaluation unit: an ego's history and future plus the
/// aligned histories of its neighborhood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleWindow {
    pub scene_id: String,
    pub ego: AgentId,
    pub t_obs: usize,
    pub t_pred: usize,
    pub dt: f64,
    /// `t_obs + 1` points, ending at the reference frame.
    pub ego_history: Vec<TrackedPoint>,
    /// `t_pred` points immediately after the reference frame.
    pub ego_future: Vec<TrackedPoint>,
    pub neighbors: Vec<NeighborTrack>,
    /// Period of the longitudinal coordinate for ring topologies
    /// (2π · ref_radius in lane coordinates); used to align neighbors that
    /// sit across the angular branch cut from the ego.
    pub ring_period: Option<f64>,
}

impl SampleWindow {
    /// Last observed frame; neighborhoods and relative coordinates anchor here.
    pub fn ref_frame(&self) -> i64 {
        self.ego_history.last().map(|p| p.frame).unwrap_or(0)
    }

    pub fn ref_point(&self) -> (f64, f64) {
        self.ego_history.last().map(|p| p.pos()).unwrap_or((0.0, 0.0))
    }

    /// Copy of this window with the future truncated to a shorter horizon.
    pub fn truncated(&self, t_pred: usize) -> Result<SampleWindow> {
        if t_pred == 0 || t_pred > self.t_pred {
            return Err(Error::Config(format!(
                "cannot truncate window of horizon {} to {}",
                self.t_pred, t_pred
            )));
        }
        let mut w = self.clone();
        w.ego_future.truncate(t_pred);
        w.t_pred = t_pred;
        Ok(w)
    }
}

/// Agents within `neighbor_radius` of the ego at `ref_frame`, nearest first,
/// ties broken by ascending agent id, truncated to `n_max`.
pub fn select_neighborhood(
    scene: &Scene,
    ego: AgentId,
    ref_frame: i64,
    cfg: &DatasetConfig,
) -> Result<Vec<AgentId>> {
    let ego_pos = scene
        .trajectory(ego)
        .and_then(|t| t.at_frame(ref_frame))
        .ok_or_else(|| {
            Error::Lookup(format!(
                "ego {ego} not present at frame {ref_frame} in scene {}",
                scene.scene_id
            ))
        })?;
    let mut candidates: Vec<(f64, AgentId)> = Vec::new();
    for t in scene.trajectories() {
        if t.agent == ego {
            continue;
        }
        if let Some((x, y)) = t.at_frame(ref_frame) {
            let d = ((x - ego_pos.0).powi(2) + (y - ego_pos.1).powi(2)).sqrt();
            if d <= cfg.neighbor_radius {
                candidates.push((d, t.agent));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates.truncate(cfg.n_max);
    Ok(candidates.into_iter().map(|(_, id)| id).collect())
}

/// Slice scenes into sample windows at the configured stride.
///
/// A window is emitted for every (agent, start frame) whose history and
/// future are fully observed; agents that are too short simply yield none.
pub fn window_scenes(scenes: &[Scene], cfg: &DatasetConfig) -> Result<Vec<SampleWindow>> {
    cfg.validate()?;
    let t_pred = cfg.max_horizon();
    let span = cfg.t_obs + 1 + t_pred;
    let mut windows = Vec::new();
    for scene in scenes {
        let ring_period = scene
            .meta
            .lane_frame
            .as_ref()
            .map(|f| 2.0 * std::f64::consts::PI * f.ref_radius);
        for traj in scene.trajectories() {
            if traj.len() < span {
                continue;
            }
            let first = traj.first_frame().unwrap();
            let mut start = 0usize;
            while start + span <= traj.len() {
                let pts = traj.points();
                let ego_history = pts[start..start + cfg.t_obs + 1].to_vec();
                let ego_future = pts[start + cfg.t_obs + 1..start + span].to_vec();
                let ref_frame = first + (start + cfg.t_obs) as i64;
                let neighbor_ids = select_neighborhood(scene, traj.agent, ref_frame, cfg)?;
                let neighbors = neighbor_ids
                    .iter()
                    .map(|&id| {
                        align_neighbor(
                            scene.trajectory(id).expect("selected neighbor exists"),
                            first + start as i64,
                            cfg.t_obs,
                        )
                    })
                    .collect();
                windows.push(SampleWindow {
                    scene_id: scene.scene_id.clone(),
                    ego: traj.agent,
                    t_obs: cfg.t_obs,
                    t_pred,
                    dt: traj.dt,
                    ego_history,
                    ego_future,
                    neighbors,
                    ring_period,
                });
                start += cfg.stride;
            }
        }
    }
    Ok(windows)
}

/// Extract a neighbor's observations over `[start_frame, start_frame + t_obs]`,
/// zero-padding frames where it was absent.
fn align_neighbor(traj: &Trajectory, start_frame: i64, t_obs: usize) -> NeighborTrack {
    let mut points = Vec::with_capacity(t_obs + 1);
    let mut valid = Vec::with_capacity(t_obs + 1);
    for k in 0..=t_obs {
        let frame = start_frame + k as i64;
        match traj.at_frame(frame) {
            Some((x, y)) => {
                points.push(TrackedPoint::new(frame, x, y));
                valid.push(true);
            }
            None => {
                points.push(TrackedPoint::new(frame, 0.0, 0.0));
                valid.push(false);
            }
        }
    }
    NeighborTrack {
        agent: traj.agent,
        points,
        valid,
    }
}

/// Scene-grouped fold assignment: windows of one scene never straddle folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    /// Fold index per window, parallel to the input slice.
    pub fold_of: Vec<usize>,
}

impl FoldAssignment {
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .enumerate()
            .filter(|(_, &f)| f != fold)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Deterministically partition windows into `k` folds, grouping by scene.
pub fn split_folds(windows: &[SampleWindow], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::Config(format!("k_folds must be at least 2, got {k}")));
    }
    let mut scenes: Vec<&str> = windows.iter().map(|w| w.scene_id.as_str()).collect();
    scenes.sort_unstable();
    scenes.dedup();
    if scenes.len() < k {
        return Err(Error::Config(format!(
            "cannot split {} scene(s) into {} folds",
            scenes.len(),
            k
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = scenes.clone();
    shuffled.shuffle(&mut rng);
    let fold_by_scene: BTreeMap<&str, usize> = shuffled
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i % k))
        .collect();
    let fold_of = windows
        .iter()
        .map(|w| fold_by_scene[w.scene_id.as_str()])
        .collect();
    Ok(FoldAssignment { k, fold_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_traj(agent: u64, dt: f64, n: usize, v: f64) -> Trajectory {
        let points = (0..n)
            .map(|k| TrackedPoint::new(k as i64, v * k as f64 * dt, 0.0))
            .collect();
        Trajectory::new(AgentId(agent), dt, points).unwrap()
    }

    #[test]
    fn trajectory_rejects_gaps() {
        let pts = vec![
            TrackedPoint::new(0, 0.0, 0.0),
            TrackedPoint::new(2, 1.0, 0.0),
        ];
        assert!(matches!(
            Trajectory::new(AgentId(1), 0.04, pts),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn scene_rejects_duplicate_agents() {
        let a = line_traj(1, 0.04, 5, 1.0);
        let b = line_traj(1, 0.04, 5, 2.0);
        assert!(Scene::new("s", 25.0, vec![a, b]).is_err());
    }

    #[test]
    fn window_count_130_frames() {
        // 130 frames, t_obs=100, t_pred=25, stride=1: admissible starts are
        // 0..=130-(100+1+25) -> 5 windows.
        let scene = Scene::new("s", 25.0, vec![line_traj(1, 0.04, 130, 5.0)]).unwrap();
        let cfg = DatasetConfig {
            horizons: vec![25],
            ..DatasetConfig::default()
        };
        let windows = window_scenes(&[scene], &cfg).unwrap();
        assert_eq!(windows.len(), 5);
        for w in &windows {
            assert_eq!(w.ego_history.len(), cfg.t_obs + 1);
            assert_eq!(w.ego_future.len(), 25);
        }
    }

    #[test]
    fn window_count_brute_force() {
        // Independent enumeration: count (start) positions with full coverage.
        for n in [126, 127, 140, 160] {
            for stride in [1usize, 3, 10] {
                let scene = Scene::new("s", 25.0, vec![line_traj(1, 0.04, n, 5.0)]).unwrap();
                let cfg = DatasetConfig {
                    horizons: vec![25],
                    stride,
                    ..DatasetConfig::default()
                };
                let windows = window_scenes(&[scene], &cfg).unwrap();
                let span = cfg.t_obs + 1 + 25;
                let mut expect = 0usize;
                let mut s = 0usize;
                while s + span <= n {
                    expect += 1;
                    s += stride;
                }
                assert_eq!(windows.len(), expect, "n={n} stride={stride}");
            }
        }
    }

    #[test]
    fn too_short_yields_no_windows() {
        let scene = Scene::new("s", 25.0, vec![line_traj(1, 0.04, 100, 5.0)]).unwrap();
        let cfg = DatasetConfig {
            horizons: vec![25],
            ..DatasetConfig::default()
        };
        assert!(window_scenes(&[scene], &cfg).unwrap().is_empty());
    }

    #[test]
    fn windows_attach_nearby_neighbors() {
        let a = line_traj(1, 0.04, 130, 5.0);
        let mut pts = Vec::new();
        for k in 0..130 {
            pts.push(TrackedPoint::new(k, 5.0 * k as f64 * 0.04, 3.0));
        }
        let b = Trajectory::new(AgentId(2), 0.04, pts).unwrap();
        let scene = Scene::new("s", 25.0, vec![a, b]).unwrap();
        let cfg = DatasetConfig {
            horizons: vec![25],
            ..DatasetConfig::default()
        };
        let windows = window_scenes(&[scene], &cfg).unwrap();
        assert_eq!(windows.len(), 10);
        for w in &windows {
            assert_eq!(w.neighbors.len(), 1);
            assert_ne!(w.neighbors[0].agent, w.ego);
            // Brute-force distance check at the reference frame.
            let refp = w.ref_point();
            let np = w.neighbors[0].points.last().unwrap();
            let d = ((np.x - refp.0).powi(2) + (np.y - refp.1).powi(2)).sqrt();
            assert!(d <= cfg.neighbor_radius);
        }
    }

    #[test]
    fn neighborhood_truncates_to_five_nearest() {
        let mut trajs = vec![line_traj(0, 0.04, 10, 0.0)];
        // 7 agents within 20 m at distinct distances 1..=7.
        for i in 1..=7u64 {
            let pts = (0..10)
                .map(|k| TrackedPoint::new(k, i as f64, 0.0))
                .collect();
            trajs.push(Trajectory::new(AgentId(i), 0.04, pts).unwrap());
        }
        let scene = Scene::new("s", 25.0, trajs).unwrap();
        let cfg = DatasetConfig::default();
        let ids = select_neighborhood(&scene, AgentId(0), 5, &cfg).unwrap();
        assert_eq!(ids, vec![AgentId(1), AgentId(2), AgentId(3), AgentId(4), AgentId(5)]);
    }

    #[test]
    fn neighborhood_excludes_beyond_radius() {
        let a = line_traj(0, 0.04, 10, 0.0);
        let pts = (0..10).map(|k| TrackedPoint::new(k, 25.0, 0.0)).collect();
        let b = Trajectory::new(AgentId(1), 0.04, pts).unwrap();
        let scene = Scene::new("s", 25.0, vec![a, b]).unwrap();
        let ids = select_neighborhood(&scene, AgentId(0), 5, &DatasetConfig::default()).unwrap();
        assert!(ids.is_empty());
    }

    #[test]
    fn neighborhood_ties_break_by_agent_id() {
        // Two agents at identical distance; permute insertion order.
        for flip in [false, true] {
            let ego = line_traj(5, 0.04, 10, 0.0);
            let p1: Vec<_> = (0..10).map(|k| TrackedPoint::new(k, 3.0, 0.0)).collect();
            let p2: Vec<_> = (0..10).map(|k| TrackedPoint::new(k, -3.0, 0.0)).collect();
            let t1 = Trajectory::new(AgentId(9), 0.04, p1).unwrap();
            let t2 = Trajectory::new(AgentId(2), 0.04, p2).unwrap();
            let trajs = if flip {
                vec![ego.clone(), t2.clone(), t1.clone()]
            } else {
                vec![ego.clone(), t1.clone(), t2.clone()]
            };
            let scene = Scene::new("s", 25.0, trajs).unwrap();
            let cfg = DatasetConfig {
                n_max: 1,
                ..DatasetConfig::default()
            };
            let ids = select_neighborhood(&scene, AgentId(5), 3, &cfg).unwrap();
            assert_eq!(ids, vec![AgentId(2)]);
        }
    }

    #[test]
    fn neighborhood_missing_ego_errors() {
        let scene = Scene::new("s", 25.0, vec![line_traj(1, 0.04, 5, 1.0)]).unwrap();
        assert!(matches!(
            select_neighborhood(&scene, AgentId(1), 99, &DatasetConfig::default()),
            Err(Error::Lookup(_))
        ));
    }

    fn windows_for_scenes(n_scenes: usize) -> Vec<SampleWindow> {
        (0..n_scenes)
            .flat_map(|s| {
                (0..3).map(move |i| SampleWindow {
                    scene_id: format!("scene{s:02}"),
                    ego: AgentId(i),
                    t_obs: 2,
                    t_pred: 1,
                    dt: 0.04,
                    ego_history: vec![],
                    ego_future: vec![],
                    neighbors: vec![],
                    ring_period: None,
                })
            })
            .collect()
    }

    #[test]
    fn folds_partition_evenly_and_by_scene() {
        let windows = windows_for_scenes(10);
        let folds = split_folds(&windows, 5, 7).unwrap();
        // Every window in exactly one fold; scenes unsplit; 2 scenes per fold.
        let mut scene_fold = BTreeMap::new();
        for (w, &f) in windows.iter().zip(&folds.fold_of) {
            assert!(f < 5);
            let prev = scene_fold.insert(w.scene_id.clone(), f);
            if let Some(p) = prev {
                assert_eq!(p, f, "scene split across folds");
            }
        }
        let mut per_fold = vec![0usize; 5];
        for f in scene_fold.values() {
            per_fold[*f] += 1;
        }
        assert_eq!(per_fold, vec![2; 5]);
        let total: usize = (0..5).map(|f| folds.test_indices(f).len()).sum();
        assert_eq!(total, windows.len());
    }

    #[test]
    fn folds_deterministic() {
        let windows = windows_for_scenes(10);
        let a = split_folds(&windows, 5, 42).unwrap();
        let b = split_folds(&windows, 5, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn folds_too_few_scenes() {
        let windows = windows_for_scenes(3);
        assert!(matches!(
            split_folds(&windows, 5, 0),
            Err(Error::Config(_))
        ));
    }
}

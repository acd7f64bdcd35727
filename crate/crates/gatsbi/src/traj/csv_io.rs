//! CSV ingestion for trajectory datasets.
//!
//! Expected header: `scene_id,agent_id,frame,x,y` (remappable through
//! [`CsvSchema`]); coordinates in meters, frames as non-negative integers.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AgentId, Scene, TrackedPoint, Trajectory};
use crate::error::{Error, Result};

/// Column names for the five required roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvSchema {
    pub scene: String,
    pub agent: String,
    pub frame: String,
    pub x: String,
    pub y: String,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            scene: "scene_id".into(),
            agent: "agent_id".into(),
            frame: "frame".into(),
            x: "x".into(),
            y: "y".into(),
        }
    }
}

struct RawRow {
    line: u64,
    frame: i64,
    x: f64,
    y: f64,
}

/// Load scenes from a trajectory CSV.
///
/// Rows are grouped by (scene, agent) in file order; frames must be strictly
/// increasing within an agent. Frame gaps split an agent's track into
/// separate trajectories (never interpolated); continuation segments receive
/// fresh agent ids above the scene's maximum so ids stay unique.
pub fn load_trajectories(path: impl AsRef<Path>, schema: &CsvSchema, fps: f64) -> Result<Vec<Scene>> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("missing column '{name}' in CSV header")))
    };
    let c_scene = col(&schema.scene)?;
    let c_agent = col(&schema.agent)?;
    let c_frame = col(&schema.frame)?;
    let c_x = col(&schema.x)?;
    let c_y = col(&schema.y)?;

    // scene -> agent -> rows, insertion-ordered within agent.
    let mut by_scene: BTreeMap<String, BTreeMap<u64, Vec<RawRow>>> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| -> Result<&str> {
            record
                .get(idx)
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: "row has too few fields".into(),
                })
        };
        let scene = field(c_scene)?.to_string();
        let agent: u64 = field(c_agent)?.trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("agent_id '{}' is not a non-negative integer", field(c_agent).unwrap_or("")),
        })?;
        let frame: i64 = field(c_frame)?.trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("frame '{}' is not an integer", field(c_frame).unwrap_or("")),
        })?;
        if frame < 0 {
            return Err(Error::Parse {
                line,
                msg: format!("frame must be non-negative, got {frame}"),
            });
        }
        let parse_f = |idx: usize, name: &str| -> Result<f64> {
            let raw = field(idx)?;
            let v: f64 = raw.trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("{name} '{raw}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("{name} must be finite, got {raw}"),
                });
            }
            Ok(v)
        };
        let x = parse_f(c_x, "x")?;
        let y = parse_f(c_y, "y")?;
        by_scene
            .entry(scene)
            .or_default()
            .entry(agent)
            .or_default()
            .push(RawRow { line, frame, x, y });
    }

    let dt = 1.0 / fps;
    let mut scenes = Vec::new();
    for (scene_id, agents) in by_scene {
        let max_id = agents.keys().copied().max().unwrap_or(0);
        let mut next_extra = max_id + 1;
        let mut trajectories = Vec::new();
        for (agent, rows) in agents {
            for w in rows.windows(2) {
                if w[1].frame <= w[0].frame {
                    return Err(Error::Data(format!(
                        "non-monotone frames for agent {agent} in scene {scene_id} near line {}: {} then {}",
                        w[1].line, w[0].frame, w[1].frame
                    )));
                }
            }
            // Split at gaps (frame jump > 1).
            let mut segment: Vec<TrackedPoint> = Vec::new();
            let mut first_segment = true;
            let mut flush = |segment: &mut Vec<TrackedPoint>, first: &mut bool| -> Result<()> {
                if segment.is_empty() {
                    return Ok(());
                }
                let id = if *first {
                    AgentId(agent)
                } else {
                    let id = AgentId(next_extra);
                    next_extra += 1;
                    id
                };
                *first = false;
                trajectories.push(Trajectory::new(id, dt, std::mem::take(segment))?);
                Ok(())
            };
            for row in &rows {
                if let Some(last) = segment.last() {
                    if row.frame != last.frame + 1 {
                        flush(&mut segment, &mut first_segment)?;
                    }
                }
                segment.push(TrackedPoint::new(row.frame, row.x, row.y));
            }
            flush(&mut segment, &mut first_segment)?;
        }
        scenes.push(Scene::new(scene_id, fps, trajectories)?);
    }
    Ok(scenes)
}

/// Write scenes in the canonical CSV schema.
pub fn write_trajectory_csv(path: impl AsRef<Path>, scenes: &[Scene]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(["scene_id", "agent_id", "frame", "x", "y"])?;
    for scene in scenes {
        for traj in scene.trajectories() {
            for p in traj.points() {
                writer.write_record([
                    scene.scene_id.as_str(),
                    &traj.agent.0.to_string(),
                    &p.frame.to_string(),
                    &format!("{:.9}", p.x),
                    &format!("{:.9}", p.y),
                ])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

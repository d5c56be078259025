use serde::{Deserialize, Serialize};

use super::geom::{Arena, Disc, Vec2};
use super::policy::{PolicyOverrides, PolicySpec};
use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    /// Empty sidewalk, no dynamic obstacles.
    #[serde(rename = "l1")]
    L1Empty,
    /// Sidewalk with pedestrian traffic.
    #[serde(rename = "l2")]
    L2Crowded,
}

impl Level {
    pub fn default_scenario_id(self) -> &'static str {
        match self {
            Level::L1Empty => "l1-empty",
            Level::L2Crowded => "l2-crowded",
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "l1-empty" => Ok(Level::L1Empty),
            "l2" | "l2-crowded" => Ok(Level::L2Crowded),
            other => Err(format!("unknown level `{other}` (expected l1 or l2)")),
        }
    }
}

/// Rigid-body and actuation limits of the delivery robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotParams {
    pub mass_kg: f64,
    /// Bounding disc over the 60 × 50 cm footprint.
    pub radius_m: f64,
    pub v_max: f64,
    pub a_max: f64,
    pub yaw_rate_max: f64,
}

impl Default for RobotParams {
    fn default() -> Self {
        RobotParams {
            mass_kg: 25.0,
            radius_m: 0.4,
            v_max: 2.0,
            a_max: 1.0,
            yaw_rate_max: 1.0,
        }
    }
}

/// Electrical draw: `p_idle + k_drive·m·max(a, 0)·v + k_drag·v²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerModel {
    /// Sensing and compute floor, W.
    pub p_idle_w: f64,
    pub k_drive: f64,
    pub k_drag: f64,
}

impl Default for PowerModel {
    /// 550 W when cruising at 2 m/s.
    fn default() -> Self {
        PowerModel {
            p_idle_w: 80.0,
            k_drive: 6.0,
            k_drag: 117.5,
        }
    }
}

impl PowerModel {
    pub fn power(&self, mass_kg: f64, speed: f64, accel: f64) -> f64 {
        self.p_idle_w + self.k_drive * mass_kg * accel.max(0.0) * speed.abs() + self.k_drag * speed * speed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    pub level: Level,
    pub arena_length_m: f64,
    pub arena_width_m: f64,
    /// Start sits on the strip's centre line this far from the `x = 0` end.
    pub start_x_m: f64,
    pub goal_distance_m: f64,
    pub goal_radius_m: f64,
    pub timeout_s: f64,
    pub dt_s: f64,
    pub n_pedestrians: u32,
    pub pedestrian_speed: f64,
    pub pedestrian_radius: f64,
    pub master_seed: u64,
    pub n_episodes: u32,
    pub obstacles: Vec<Disc>,
    pub robot: RobotParams,
    pub power: PowerModel,
}

impl ScenarioConfig {
    pub fn level1() -> Self {
        ScenarioConfig {
            scenario_id: Level::L1Empty.default_scenario_id().into(),
            level: Level::L1Empty,
            arena_length_m: 30.0,
            arena_width_m: 6.0,
            start_x_m: 2.0,
            goal_distance_m: 20.0,
            goal_radius_m: 0.5,
            timeout_s: 600.0,
            dt_s: 0.1,
            n_pedestrians: 0,
            pedestrian_speed: 1.2,
            pedestrian_radius: 0.3,
            master_seed: 0,
            n_episodes: 100,
            obstacles: Vec::new(),
            robot: RobotParams::default(),
            power: PowerModel::default(),
        }
    }

    pub fn level2() -> Self {
        ScenarioConfig {
            scenario_id: Level::L2Crowded.default_scenario_id().into(),
            level: Level::L2Crowded,
            n_pedestrians: 6,
            ..ScenarioConfig::level1()
        }
    }

    pub fn for_level(level: Level) -> Self {
        match level {
            Level::L1Empty => ScenarioConfig::level1(),
            Level::L2Crowded => ScenarioConfig::level2(),
        }
    }

    pub fn arena(&self) -> Arena {
        Arena {
            length: self.arena_length_m,
            width: self.arena_width_m,
        }
    }

    pub fn start(&self) -> Vec2 {
        Vec2::new(self.start_x_m, self.arena_width_m / 2.0)
    }

    pub fn goal(&self) -> Vec2 {
        self.start() + Vec2::new(self.goal_distance_m, 0.0)
    }

    pub fn timeout_steps(&self) -> u64 {
        (self.timeout_s / self.dt_s - 1e-9).ceil().max(0.0) as u64
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::Config(msg));
        let positive = [
            ("arena_length_m", self.arena_length_m),
            ("arena_width_m", self.arena_width_m),
            ("goal_distance_m", self.goal_distance_m),
            ("goal_radius_m", self.goal_radius_m),
            ("timeout_s", self.timeout_s),
            ("dt_s", self.dt_s),
            ("robot.mass_kg", self.robot.mass_kg),
            ("robot.radius_m", self.robot.radius_m),
            ("robot.v_max", self.robot.v_max),
            ("robot.a_max", self.robot.a_max),
            ("robot.yaw_rate_max", self.robot.yaw_rate_max),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return bad(format!("{name} must be > 0, got {value}"));
            }
        }
        let non_negative = [
            ("start_x_m", self.start_x_m),
            ("pedestrian_speed", self.pedestrian_speed),
            ("power.p_idle_w", self.power.p_idle_w),
            ("power.k_drive", self.power.k_drive),
            ("power.k_drag", self.power.k_drag),
        ];
        for (name, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return bad(format!("{name} must be >= 0, got {value}"));
            }
        }
        if self.level == Level::L1Empty && self.n_pedestrians != 0 {
            return bad(format!("level l1 has no pedestrians, got n_pedestrians = {}", self.n_pedestrians));
        }
        if self.goal_distance_m >= self.arena_length_m {
            return bad(format!(
                "goal_distance_m {} must be shorter than arena_length_m {}",
                self.goal_distance_m, self.arena_length_m
            ));
        }
        if self.goal_radius_m >= self.goal_distance_m {
            return bad("goal_radius_m must be smaller than goal_distance_m".into());
        }
        let arena = self.arena();
        if arena.disc_outside(self.start(), self.robot.radius_m) {
            return bad("robot start position touches the arena boundary".into());
        }
        if self.goal().x > self.arena_length_m {
            return bad("goal lies outside the arena".into());
        }
        if self.n_pedestrians > 0 {
            let r = self.pedestrian_radius;
            if !(r.is_finite() && r > 0.0) || 2.0 * r >= self.arena_width_m.min(self.arena_length_m) {
                return bad(format!("pedestrian_radius {r} does not fit the arena"));
            }
        }
        for (i, obstacle) in self.obstacles.iter().enumerate() {
            if !(obstacle.x.is_finite() && obstacle.y.is_finite() && obstacle.radius.is_finite() && obstacle.radius > 0.0) {
                return bad(format!("obstacle {i} is malformed"));
            }
            if obstacle.center().distance(self.start()) < obstacle.radius + self.robot.radius_m {
                return bad(format!("obstacle {i} overlaps the robot start"));
            }
        }
        Ok(())
    }
}

/// Flat scenario + policy configuration file. Every key is optional and
/// falls back to the level's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub level: Option<Level>,
    pub scenario_id: Option<String>,
    pub arena_length_m: Option<f64>,
    pub arena_width_m: Option<f64>,
    pub start_x_m: Option<f64>,
    pub goal_distance_m: Option<f64>,
    pub goal_radius_m: Option<f64>,
    pub timeout_s: Option<f64>,
    pub dt_s: Option<f64>,
    pub n_pedestrians: Option<u32>,
    pub pedestrian_speed: Option<f64>,
    pub pedestrian_radius: Option<f64>,
    pub master_seed: Option<u64>,
    pub n_episodes: Option<u32>,
    pub obstacles: Option<Vec<Disc>>,
    pub robot_mass_kg: Option<f64>,
    pub robot_radius_m: Option<f64>,
    pub v_max: Option<f64>,
    pub a_max: Option<f64>,
    pub yaw_rate_max: Option<f64>,
    pub p_idle_w: Option<f64>,
    pub k_drive: Option<f64>,
    pub k_drag: Option<f64>,
    pub policy: Option<String>,
    pub policy_speed: Option<f64>,
    pub heading_gain: Option<f64>,
    pub noise_std: Option<f64>,
    pub attraction: Option<f64>,
    pub repulsion: Option<f64>,
    pub influence_m: Option<f64>,
    pub stop_distance_m: Option<f64>,
}

impl ScenarioFile {
    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))
    }

    /// Resolve against level defaults. `level` overrides the file's level.
    pub fn resolve(&self, level: Option<Level>) -> Result<(ScenarioConfig, PolicySpec), SimError> {
        let level = level.or(self.level).unwrap_or(Level::L1Empty);
        let mut c = ScenarioConfig::for_level(level);
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { $target = v; })*
            };
        }
        set! {
            scenario_id => c.scenario_id,
            arena_length_m => c.arena_length_m,
            arena_width_m => c.arena_width_m,
            start_x_m => c.start_x_m,
            goal_distance_m => c.goal_distance_m,
            goal_radius_m => c.goal_radius_m,
            timeout_s => c.timeout_s,
            dt_s => c.dt_s,
            n_pedestrians => c.n_pedestrians,
            pedestrian_speed => c.pedestrian_speed,
            pedestrian_radius => c.pedestrian_radius,
            master_seed => c.master_seed,
            n_episodes => c.n_episodes,
            obstacles => c.obstacles,
            robot_mass_kg => c.robot.mass_kg,
            robot_radius_m => c.robot.radius_m,
            v_max => c.robot.v_max,
            a_max => c.robot.a_max,
            yaw_rate_max => c.robot.yaw_rate_max,
            p_idle_w => c.power.p_idle_w,
            k_drive => c.power.k_drive,
            k_drag => c.power.k_drag,
        }
        c.validate()?;

        let kind = self.policy.as_deref().unwrap_or("straight-line");
        let mut policy: PolicySpec = kind.parse().map_err(SimError::Config)?;
        policy.apply_overrides(&PolicyOverrides {
            speed: self.policy_speed,
            heading_gain: self.heading_gain,
            noise_std: self.noise_std,
            attraction: self.attraction,
            repulsion: self.repulsion,
            influence_m: self.influence_m,
            stop_distance_m: self.stop_distance_m,
        });
        policy.validate()?;
        Ok((c, policy))
    }
}

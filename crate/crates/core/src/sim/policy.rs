//! Scripted navigation policies standing in for a learned controller.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::geom::{wrap_angle, Arena, Disc, Vec2};
use super::pedestrian::Pedestrian;
use super::seed::EpisodeRng;
use super::SimError;

/// What a policy sees at each step.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub time_s: f64,
    pub dt_s: f64,
    pub position: Vec2,
    pub heading: f64,
    pub speed: f64,
    pub goal: Vec2,
    pub goal_radius_m: f64,
    pub robot_radius_m: f64,
    /// Acceleration limit; a policy needs it to know its stopping distance.
    pub a_max: f64,
    pub arena: Arena,
    pub pedestrians: &'a [Pedestrian],
    pub obstacles: &'a [Disc],
}

/// Requested forward speed and yaw rate; the integrator clamps both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Command {
    pub speed: f64,
    pub yaw_rate: f64,
}

pub trait Controller {
    fn command(&mut self, obs: &Observation<'_>, rng: &mut EpisodeRng) -> Command;
}

impl<F> Controller for F
where
    F: FnMut(&Observation<'_>) -> Command,
{
    fn command(&mut self, obs: &Observation<'_>, _rng: &mut EpisodeRng) -> Command {
        self(obs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PolicySpec {
    /// Drive at `speed` straight for the goal, ignoring obstacles.
    StraightLine { speed: f64, heading_gain: f64 },
    /// Goal attraction plus repulsion from pedestrians, obstacles and curbs.
    PotentialField {
        speed: f64,
        heading_gain: f64,
        attraction: f64,
        repulsion: f64,
        influence_m: f64,
    },
    /// Straight-line driving with a mean-reverting random heading error of
    /// stationary standard deviation `noise_std` radians. Stops while a
    /// pedestrian is within `stop_distance_m` (surface to surface) ahead.
    NoisyHeading {
        speed: f64,
        heading_gain: f64,
        noise_std: f64,
        stop_distance_m: f64,
    },
}

/// Correlation time of the heading error.
const NOISE_CORRELATION_S: f64 = 2.0;
/// Gap the potential field aims to keep when braking for something ahead.
const BRAKE_MARGIN_M: f64 = 0.15;

/// Distance the robot can drive straight ahead before its disc touches a
/// pedestrian or obstacle.
fn clearance_ahead(obs: &Observation<'_>) -> f64 {
    let dir = Vec2::from_angle(obs.heading);
    let discs = obs
        .pedestrians
        .iter()
        .map(|p| (p.position, p.radius))
        .chain(obs.obstacles.iter().map(|d| (d.center(), d.radius)));
    discs
        .filter_map(|(c, r)| {
            let offset = c - obs.position;
            let along = offset.x * dir.x + offset.y * dir.y;
            let across = offset.x * dir.y - offset.y * dir.x;
            let reach = obs.robot_radius_m + r;
            (along > 0.0 && across.abs() < reach).then(|| (along - (reach * reach - across * across).sqrt()).max(0.0))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Optional parameter values to lay over a policy's defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PolicyOverrides {
    pub speed: Option<f64>,
    pub heading_gain: Option<f64>,
    pub noise_std: Option<f64>,
    pub attraction: Option<f64>,
    pub repulsion: Option<f64>,
    pub influence_m: Option<f64>,
    pub stop_distance_m: Option<f64>,
}

impl PolicySpec {
    pub fn straight_line() -> Self {
        PolicySpec::StraightLine {
            speed: 2.0,
            heading_gain: 2.0,
        }
    }

    pub fn potential_field() -> Self {
        PolicySpec::PotentialField {
            speed: 2.0,
            heading_gain: 2.5,
            attraction: 1.0,
            repulsion: 0.6,
            influence_m: 1.5,
        }
    }

    pub fn noisy_heading() -> Self {
        PolicySpec::NoisyHeading {
            speed: 2.0,
            heading_gain: 2.0,
            noise_std: 0.3,
            stop_distance_m: 0.6,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            PolicySpec::StraightLine { .. } => "straight-line",
            PolicySpec::PotentialField { .. } => "potential-field",
            PolicySpec::NoisyHeading { .. } => "noisy-heading",
        }
    }

    /// Replace the parameters named in `o`; those a policy lacks are ignored.
    pub fn apply_overrides(&mut self, o: &PolicyOverrides) {
        let PolicyOverrides {
            speed,
            heading_gain: gain,
            noise_std: noise,
            attraction: attract,
            repulsion: repulse,
            influence_m: influence,
            stop_distance_m: stop_distance,
        } = *o;
        match self {
            PolicySpec::StraightLine { speed: s, heading_gain } => {
                *s = speed.unwrap_or(*s);
                *heading_gain = gain.unwrap_or(*heading_gain);
            }
            PolicySpec::PotentialField {
                speed: s,
                heading_gain,
                attraction,
                repulsion,
                influence_m,
            } => {
                *s = speed.unwrap_or(*s);
                *heading_gain = gain.unwrap_or(*heading_gain);
                *attraction = attract.unwrap_or(*attraction);
                *repulsion = repulse.unwrap_or(*repulsion);
                *influence_m = influence.unwrap_or(*influence_m);
            }
            PolicySpec::NoisyHeading {
                speed: s,
                heading_gain,
                noise_std,
                stop_distance_m,
            } => {
                *s = speed.unwrap_or(*s);
                *heading_gain = gain.unwrap_or(*heading_gain);
                *noise_std = noise.unwrap_or(*noise_std);
                *stop_distance_m = stop_distance.unwrap_or(*stop_distance_m);
            }
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let values: &[(&str, f64)] = match self {
            PolicySpec::StraightLine { speed, heading_gain } => &[("speed", *speed), ("heading_gain", *heading_gain)],
            PolicySpec::PotentialField {
                speed,
                heading_gain,
                attraction,
                repulsion,
                influence_m,
            } => &[
                ("speed", *speed),
                ("heading_gain", *heading_gain),
                ("attraction", *attraction),
                ("repulsion", *repulsion),
                ("influence_m", *influence_m),
            ],
            PolicySpec::NoisyHeading {
                speed,
                heading_gain,
                noise_std,
                stop_distance_m,
            } => &[
                ("speed", *speed),
                ("heading_gain", *heading_gain),
                ("noise_std", *noise_std),
                ("stop_distance_m", *stop_distance_m),
            ],
        };
        for (name, value) in values {
            if !(value.is_finite() && *value >= 0.0) {
                return Err(SimError::Config(format!("policy {name} must be >= 0, got {value}")));
            }
        }
        if let PolicySpec::PotentialField { influence_m, .. } = self {
            if *influence_m <= 0.0 {
                return Err(SimError::Config("policy influence_m must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn controller(&self) -> PolicyController {
        PolicyController {
            spec: *self,
            heading_error: 0.0,
        }
    }
}

impl std::str::FromStr for PolicySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "straight-line" => Ok(PolicySpec::straight_line()),
            "potential-field" => Ok(PolicySpec::potential_field()),
            "noisy-heading" => Ok(PolicySpec::noisy_heading()),
            other => Err(format!(
                "unknown policy `{other}` (expected straight-line, potential-field or noisy-heading)"
            )),
        }
    }
}

/// Per-episode state of a [`PolicySpec`].
#[derive(Debug, Clone)]
pub struct PolicyController {
    spec: PolicySpec,
    heading_error: f64,
}

fn steer(obs: &Observation<'_>, desired_heading: f64, gain: f64) -> f64 {
    gain * wrap_angle(desired_heading - obs.heading)
}

impl Controller for PolicyController {
    fn command(&mut self, obs: &Observation<'_>, rng: &mut EpisodeRng) -> Command {
        let to_goal = obs.goal - obs.position;
        match self.spec {
            PolicySpec::StraightLine { speed, heading_gain } => Command {
                speed,
                yaw_rate: steer(obs, to_goal.angle(), heading_gain),
            },
            PolicySpec::NoisyHeading {
                speed,
                heading_gain,
                noise_std,
                stop_distance_m,
            } => {
                // Ornstein-Uhlenbeck heading error.
                let dt = obs.dt_s;
                let z: f64 = rng.sample(StandardNormal);
                let diffusion = noise_std * (2.0 * dt / NOISE_CORRELATION_S).sqrt();
                self.heading_error += -self.heading_error * dt / NOISE_CORRELATION_S + diffusion * z;
                let braking = obs.speed * obs.speed / (2.0 * obs.a_max);
                let blocked = clearance_ahead(obs) < stop_distance_m + braking;
                Command {
                    speed: if blocked { 0.0 } else { speed },
                    yaw_rate: steer(obs, to_goal.angle() + self.heading_error, heading_gain),
                }
            }
            PolicySpec::PotentialField {
                speed,
                heading_gain,
                attraction,
                repulsion,
                influence_m,
            } => potential_field(obs, speed, heading_gain, attraction, repulsion, influence_m),
        }
    }
}

fn potential_field(
    obs: &Observation<'_>,
    cruise: f64,
    gain: f64,
    attraction: f64,
    repulsion: f64,
    influence: f64,
) -> Command {
    let to_goal = obs.goal - obs.position;
    let mut force = to_goal.normalized() * attraction;
    let mut min_clearance = f64::INFINITY;
    let mut push = |away: Vec2, clearance: f64| {
        let clearance = clearance.max(0.05);
        min_clearance = min_clearance.min(clearance);
        if clearance < influence {
            let magnitude = repulsion * (1.0 / clearance - 1.0 / influence) / (clearance * clearance);
            force += away.normalized() * magnitude;
        }
    };
    let p = obs.position;
    let r = obs.robot_radius_m;
    for ped in obs.pedestrians {
        push(p - ped.position, p.distance(ped.position) - r - ped.radius);
    }
    for disc in obs.obstacles {
        push(p - disc.center(), p.distance(disc.center()) - r - disc.radius);
    }
    push(Vec2::new(0.0, 1.0), p.y - r);
    push(Vec2::new(0.0, -1.0), obs.arena.width - p.y - r);
    push(Vec2::new(1.0, 0.0), p.x - r);
    push(Vec2::new(-1.0, 0.0), obs.arena.length - p.x - r);

    let desired = force.angle();
    let alignment = wrap_angle(desired - obs.heading).cos().max(0.0);
    let caution = (min_clearance / influence).clamp(0.25, 1.0);
    let approach = to_goal.norm().max(0.3);
    // fastest speed from which the robot can still stop short of the
    // nearest thing ahead
    let stoppable = (2.0 * obs.a_max * (clearance_ahead(obs) - BRAKE_MARGIN_M).max(0.0)).sqrt();
    Command {
        speed: (cruise.min(approach) * caution * alignment).min(stoppable),
        yaw_rate: steer(obs, desired, gain),
    }
}

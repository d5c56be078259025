use super::config::ScenarioConfig;
use super::geom::{wrap_angle, Vec2};
use super::pedestrian::{pedestrian_step, random_point, Pedestrian};
use super::policy::{Controller, Observation, PolicySpec};
use super::seed::{episode_rng, episode_seed, EpisodeRng};
use super::SimError;
use crate::log::{EpisodeRecord, Termination};

/// One integration step of the robot, as recorded in a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub step: u64,
    pub time_s: f64,
    pub position: Vec2,
    pub heading: f64,
    /// Forward speed at the end of the step (at contact for a collision).
    pub speed: f64,
    /// Mean acceleration over the step.
    pub accel: f64,
    pub power_w: f64,
}

/// Clearance kept between a freshly placed pedestrian and the robot start.
const START_CLEARANCE_M: f64 = 1.0;
const PLACEMENT_ATTEMPTS: usize = 10_000;
/// Pedestrians do not walk into the robot: a step that would close to
/// within this gap, plus the robot's current stopping distance, is skipped.
const PEDESTRIAN_YIELD_M: f64 = 0.1;

fn place_pedestrians(scenario: &ScenarioConfig, rng: &mut EpisodeRng) -> Result<Vec<Pedestrian>, SimError> {
    let arena = scenario.arena();
    let radius = scenario.pedestrian_radius;
    let start = scenario.start();
    let keep_out = scenario.robot.radius_m + radius + START_CLEARANCE_M;
    let mut peds = Vec::with_capacity(scenario.n_pedestrians as usize);
    for _ in 0..scenario.n_pedestrians {
        let mut placed = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let p = random_point(&arena, radius, rng);
            let clear_of_obstacles = scenario
                .obstacles
                .iter()
                .all(|o| p.distance(o.center()) >= o.radius + radius);
            if p.distance(start) >= keep_out && clear_of_obstacles {
                placed = Some(p);
                break;
            }
        }
        let position = placed.ok_or_else(|| SimError::Config("could not place pedestrians clear of the start".into()))?;
        peds.push(Pedestrian {
            position,
            waypoint: random_point(&arena, radius, rng),
            speed: scenario.pedestrian_speed,
            radius,
        });
    }
    Ok(peds)
}

fn in_collision(scenario: &ScenarioConfig, position: Vec2, pedestrians: &[Pedestrian]) -> bool {
    let r = scenario.robot.radius_m;
    scenario.arena().disc_outside(position, r)
        || scenario
            .obstacles
            .iter()
            .any(|o| position.distance(o.center()) < r + o.radius)
        || pedestrians
            .iter()
            .any(|p| position.distance(p.position) < r + p.radius)
}

/// Run episode `episode_index` of `scenario` with a built-in policy.
pub fn run_episode(scenario: &ScenarioConfig, policy: &PolicySpec, episode_index: u64) -> Result<EpisodeRecord, SimError> {
    let mut controller = policy.controller();
    simulate(scenario, policy.id(), &mut controller, episode_index, None)
}

/// Like [`run_episode`], also returning the per-step trace.
pub fn run_episode_traced(
    scenario: &ScenarioConfig,
    policy: &PolicySpec,
    episode_index: u64,
) -> Result<(EpisodeRecord, Vec<TraceSample>), SimError> {
    let mut controller = policy.controller();
    let mut trace = Vec::new();
    let record = simulate(scenario, policy.id(), &mut controller, episode_index, Some(&mut trace))?;
    Ok((record, trace))
}

/// Run one episode with an arbitrary controller.
///
/// Fixed-step semi-implicit integration: the commanded speed is clamped to
/// `[0, v_max]` and its change to `a_max × dt`, the yaw rate to
/// `±yaw_rate_max`; heading, then position, are advanced with the new
/// values. Pedestrians then move, holding still rather than stepping into
/// contact with the robot, and the episode ends at the first of
/// collision, arrival at the goal disc, or timeout. A collision is an
/// inelastic stop and records the impulse `m × |v|`. Energy is the
/// trapezoidal integral of the power samples, the first taken at rest.
pub fn simulate<C: Controller + ?Sized>(
    scenario: &ScenarioConfig,
    policy_id: &str,
    controller: &mut C,
    episode_index: u64,
    mut trace: Option<&mut Vec<TraceSample>>,
) -> Result<EpisodeRecord, SimError> {
    scenario.validate()?;
    let seed = episode_seed(scenario.master_seed, episode_index);
    let mut rng = episode_rng(seed);
    let robot = scenario.robot;
    let dt = scenario.dt_s;
    let arena = scenario.arena();
    let goal = scenario.goal();
    let timeout_steps = scenario.timeout_steps();

    let mut pedestrians = place_pedestrians(scenario, &mut rng)?;
    let mut position = scenario.start();
    let mut heading = 0.0_f64;
    let mut speed = 0.0_f64;
    let mut distance = 0.0_f64;

    let idle = scenario.power.power(robot.mass_kg, 0.0, 0.0);
    let mut prev_power = idle;
    let mut max_power = idle;
    let mut energy_j = 0.0_f64;
    if let Some(t) = trace.as_deref_mut() {
        t.push(TraceSample {
            step: 0,
            time_s: 0.0,
            position,
            heading,
            speed,
            accel: 0.0,
            power_w: idle,
        });
    }

    let mut step: u64 = 0;
    let (termination, impulse) = loop {
        let time_s = step as f64 * dt;
        let obs = Observation {
            time_s,
            dt_s: dt,
            position,
            heading,
            speed,
            goal,
            goal_radius_m: scenario.goal_radius_m,
            robot_radius_m: robot.radius_m,
            a_max: robot.a_max,
            arena,
            pedestrians: &pedestrians,
            obstacles: &scenario.obstacles,
        };
        let cmd = controller.command(&obs, &mut rng);

        let max_dv = robot.a_max * dt;
        let target = cmd.speed.clamp(0.0, robot.v_max);
        let new_speed = (speed + (target - speed).clamp(-max_dv, max_dv)).clamp(0.0, robot.v_max);
        let accel = (new_speed - speed) / dt;
        let yaw_rate = cmd.yaw_rate.clamp(-robot.yaw_rate_max, robot.yaw_rate_max);
        heading = wrap_angle(heading + yaw_rate * dt);
        position += Vec2::from_angle(heading) * (new_speed * dt);

        if !(position.is_finite() && heading.is_finite() && new_speed.is_finite()) {
            return Err(SimError::NonFinite {
                episode_index,
                seed,
                step: step + 1,
            });
        }
        assert!(new_speed <= robot.v_max, "speed limit violated");
        assert!(
            (new_speed - speed).abs() <= max_dv * (1.0 + 1e-12),
            "acceleration limit violated"
        );

        speed = new_speed;
        distance += speed * dt;
        step += 1;

        let stopping = speed * speed / (2.0 * robot.a_max);
        for ped in pedestrians.iter_mut() {
            let next = pedestrian_step(ped, &arena, dt, &mut rng);
            let gap = robot.radius_m + ped.radius + PEDESTRIAN_YIELD_M + stopping;
            let closing = next.position.distance(position) < ped.position.distance(position);
            if !(closing && next.position.distance(position) < gap) {
                *ped = next;
            }
        }

        let power = scenario.power.power(robot.mass_kg, speed, accel);
        energy_j += 0.5 * (prev_power + power) * dt;
        prev_power = power;
        max_power = max_power.max(power);
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceSample {
                step,
                time_s: step as f64 * dt,
                position,
                heading,
                speed,
                accel,
                power_w: power,
            });
        }

        if in_collision(scenario, position, &pedestrians) {
            break (Termination::Collision, robot.mass_kg * speed.abs());
        }
        if position.distance(goal) <= scenario.goal_radius_m {
            break (Termination::Arrive, 0.0);
        }
        if step >= timeout_steps {
            break (Termination::Timeout, 0.0);
        }
    };

    let duration_s = step as f64 * dt;
    let mean_power_w = energy_j / duration_s;
    Ok(EpisodeRecord {
        episode_id: format!("{}-{episode_index:06}", scenario.scenario_id),
        scenario_id: scenario.scenario_id.clone(),
        policy_id: policy_id.to_string(),
        seed,
        termination,
        duration_s,
        distance_m: distance,
        collision_impulse_ns: impulse,
        mean_power_w,
        max_power_w: max_power.max(mean_power_w),
        energy_wh: energy_j / 3600.0,
    })
}

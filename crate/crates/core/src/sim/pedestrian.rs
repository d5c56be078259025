use rand::Rng;
use serde::{Deserialize, Serialize};

use super::geom::{Arena, Vec2};

/// A pedestrian walking at constant speed toward its current waypoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pedestrian {
    pub position: Vec2,
    pub waypoint: Vec2,
    pub speed: f64,
    pub radius: f64,
}

impl Pedestrian {
    pub fn velocity(&self) -> Vec2 {
        (self.waypoint - self.position).normalized() * self.speed
    }
}

/// Uniform point at which a disc of `radius` fits inside the arena.
pub fn random_point<R: Rng + ?Sized>(arena: &Arena, radius: f64, rng: &mut R) -> Vec2 {
    let x = rng.random_range(radius..=(arena.length - radius));
    let y = rng.random_range(radius..=(arena.width - radius));
    Vec2::new(x, y)
}

/// Reflect `value` into `[lo, hi]`; returns whether a reflection happened.
fn reflect(value: &mut f64, waypoint: &mut f64, lo: f64, hi: f64) -> bool {
    if *value < lo {
        *value = 2.0 * lo - *value;
        *waypoint = 2.0 * lo - *waypoint;
        true
    } else if *value > hi {
        *value = 2.0 * hi - *value;
        *waypoint = 2.0 * hi - *waypoint;
        true
    } else {
        false
    }
}

/// Advance one pedestrian by `dt`.
///
/// The pedestrian moves `speed × dt` toward its waypoint. Crossing a
/// boundary mirrors both position and waypoint across it, so the motion is a
/// specular reflection with unchanged speed. On reaching the waypoint a new
/// one is drawn uniformly from the arena.
pub fn pedestrian_step<R: Rng + ?Sized>(ped: &Pedestrian, arena: &Arena, dt: f64, rng: &mut R) -> Pedestrian {
    let mut next = *ped;
    let step = ped.speed * dt;
    let to_waypoint = ped.waypoint - ped.position;
    let remaining = to_waypoint.norm();
    if step <= 0.0 {
        return next;
    }
    if remaining <= step {
        next.position = ped.waypoint;
        next.waypoint = random_point(arena, ped.radius, rng);
        return next;
    }
    next.position = ped.position + to_waypoint * (step / remaining);
    let r = ped.radius;
    reflect(&mut next.position.x, &mut next.waypoint.x, r, arena.length - r);
    reflect(&mut next.position.y, &mut next.waypoint.y, r, arena.width - r);
    next
}

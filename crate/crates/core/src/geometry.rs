//! Coordinate conventions and projections on the viewing sphere.
//!
//! Yaw is measured in degrees in `[-180, 180)`, zero at the video front and
//! positive toward the viewer's right. Pitch is in `[-90, 90]`, positive up.
//! Internally directions are unit vectors with `x` to the right, `y` up and
//! `z` toward the front.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vertical field of view {0}° is outside (0, 180)")]
    VerticalFov(f64),
    #[error("horizontal field of view {0}° is outside (0, 180)")]
    HorizontalFov(f64),
    #[error("aspect ratio {0} must be positive and finite")]
    Aspect(f64),
    #[error("map point ({x:.3}, {y:.3}) lies outside the planet disk of radius {radius}")]
    OutsideDisk { x: f64, y: f64, radius: f64 },
    #[error("map radius {0} must be positive")]
    MapRadius(f64),
    #[error("cannot interpolate between antipodal directions")]
    Antipodal,
}

/// Wraps any angle into `[-180, 180)`.
pub fn normalize_yaw(yaw: f64) -> f64 {
    let r = (yaw + 180.0).rem_euclid(360.0);
    // rem_euclid rounds tiny negative inputs up to exactly 360
    if r >= 360.0 {
        -180.0
    } else {
        r - 180.0
    }
}

/// Wraps any angle into `[0, 360)`.
pub fn normalize_azimuth(az: f64) -> f64 {
    let r = az.rem_euclid(360.0);
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawDirection")]
pub struct Direction {
    yaw: f64,
    pitch: f64,
}

#[derive(Deserialize)]
struct RawDirection {
    yaw: f64,
    pitch: f64,
}

impl From<RawDirection> for Direction {
    fn from(raw: RawDirection) -> Self {
        Direction::new(raw.yaw, raw.pitch)
    }
}

impl Default for Direction {
    fn default() -> Self {
        Direction::FRONT
    }
}

impl Direction {
    pub const FRONT: Direction = Direction { yaw: 0.0, pitch: 0.0 };
    pub const ZENITH: Direction = Direction { yaw: 0.0, pitch: 90.0 };
    pub const NADIR: Direction = Direction { yaw: 0.0, pitch: -90.0 };

    /// Builds a normalized direction: yaw wrapped, pitch clamped, and yaw
    /// forced to zero at the poles.
    pub fn new(yaw: f64, pitch: f64) -> Self {
        let pitch = pitch.clamp(-90.0, 90.0);
        let yaw = if pitch.abs() == 90.0 { 0.0 } else { normalize_yaw(yaw) };
        Direction { yaw, pitch }
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Same direction with yaw shifted by `delta` degrees.
    pub fn rotated_yaw(&self, delta: f64) -> Self {
        Direction::new(self.yaw + delta, self.pitch)
    }

    pub fn to_vector(&self) -> [f64; 3] {
        let (sy, cy) = self.yaw.to_radians().sin_cos();
        let (sp, cp) = self.pitch.to_radians().sin_cos();
        [cp * sy, sp, cp * cy]
    }

    /// Inverse of [`Direction::to_vector`]; the input need not be normalized.
    pub fn from_vector(v: [f64; 3]) -> Self {
        let horiz = v[0].hypot(v[2]);
        let pitch = v[1].atan2(horiz).to_degrees();
        if horiz == 0.0 {
            return Direction::new(0.0, pitch.signum() * 90.0);
        }
        Direction::new(v[0].atan2(v[2]).to_degrees(), pitch)
    }

    pub fn antipode(&self) -> Self {
        Direction::new(self.yaw + 180.0, -self.pitch)
    }
}

/// Normalized equirectangular frame coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquirectCoord {
    u: f64,
    v: f64,
}

impl EquirectCoord {
    /// `u` wraps modulo 1, `v` is clamped to `[0, 1]`.
    pub fn new(u: f64, v: f64) -> Self {
        let mut u = u.rem_euclid(1.0);
        if u >= 1.0 {
            u = 0.0;
        }
        EquirectCoord { u, v: v.clamp(0.0, 1.0) }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

pub fn dir_from_equirect(c: EquirectCoord) -> Direction {
    Direction::new(c.u * 360.0 - 180.0, 90.0 - c.v * 180.0)
}

pub fn equirect_from_dir(d: Direction) -> EquirectCoord {
    EquirectCoord::new((d.yaw + 180.0) / 360.0, (90.0 - d.pitch) / 180.0)
}

/// Horizontal field of view of a symmetric perspective frustum with the
/// given vertical field of view and width/height ratio.
pub fn hfov_from_aspect(vfov: f64, aspect: f64) -> Result<f64, GeometryError> {
    if !(vfov > 0.0 && vfov < 180.0) {
        return Err(GeometryError::VerticalFov(vfov));
    }
    if !(aspect > 0.0 && aspect.is_finite()) {
        return Err(GeometryError::Aspect(aspect));
    }
    let half = ((vfov / 2.0).to_radians().tan() * aspect).atan();
    Ok((2.0 * half.to_degrees()).min(MAX_FOV))
}

const MAX_FOV: f64 = 180.0 - 1e-9;

/// A pinhole view into the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: Direction,
    vfov: f64,
    hfov: f64,
}

impl Viewport {
    pub fn new(center: Direction, vfov: f64, hfov: f64) -> Result<Self, GeometryError> {
        if !(vfov > 0.0 && vfov < 180.0) {
            return Err(GeometryError::VerticalFov(vfov));
        }
        if !(hfov > 0.0 && hfov < 180.0) {
            return Err(GeometryError::HorizontalFov(hfov));
        }
        Ok(Viewport { center, vfov, hfov })
    }

    /// Viewport whose horizontal field of view follows from a display area
    /// of the given width/height ratio.
    pub fn from_aspect(center: Direction, vfov: f64, aspect: f64) -> Result<Self, GeometryError> {
        let hfov = hfov_from_aspect(vfov, aspect)?;
        Viewport::new(center, vfov, hfov)
    }

    pub fn vfov(&self) -> f64 {
        self.vfov
    }

    pub fn hfov(&self) -> f64 {
        self.hfov
    }

    pub fn with_center(mut self, center: Direction) -> Self {
        self.center = center;
        self
    }

    /// Half-extents of the image plane at unit focal distance.
    fn tangent_extents(&self) -> (f64, f64) {
        (
            (self.hfov / 2.0).to_radians().tan(),
            (self.vfov / 2.0).to_radians().tan(),
        )
    }
}

// camera-local is x right, y up, z forward; world from camera is pitch then yaw
fn world_to_camera(center: Direction, w: [f64; 3]) -> [f64; 3] {
    let (sp, cp) = center.pitch.to_radians().sin_cos();
    let (sy, cy) = center.yaw.to_radians().sin_cos();
    let x = w[0] * cy - w[2] * sy;
    let z = w[0] * sy + w[2] * cy;
    [x, w[1] * cp - z * sp, w[1] * sp + z * cp]
}

/// Direction of the pinhole ray through normalized device coordinates
/// `(x, y)`, both in `[-1, 1]` with `y` pointing up.
pub fn viewport_ray(vp: &Viewport, x: f64, y: f64) -> Direction {
    RayCaster::new(vp).ray(x, y)
}

/// [`viewport_ray`] with the camera rotation precomputed, for per-pixel
/// loops.
#[derive(Debug, Clone, Copy)]
pub struct RayCaster {
    sin_pitch: f64,
    cos_pitch: f64,
    sin_yaw: f64,
    cos_yaw: f64,
    tx: f64,
    ty: f64,
}

impl RayCaster {
    pub fn new(vp: &Viewport) -> Self {
        let (sin_pitch, cos_pitch) = vp.center.pitch.to_radians().sin_cos();
        let (sin_yaw, cos_yaw) = vp.center.yaw.to_radians().sin_cos();
        let (tx, ty) = vp.tangent_extents();
        RayCaster {
            sin_pitch,
            cos_pitch,
            sin_yaw,
            cos_yaw,
            tx,
            ty,
        }
    }

    pub fn ray(&self, x: f64, y: f64) -> Direction {
        let l = [x * self.tx, y * self.ty, 1.0];
        let wy = l[1] * self.cos_pitch + l[2] * self.sin_pitch;
        let z = -l[1] * self.sin_pitch + l[2] * self.cos_pitch;
        Direction::from_vector([
            l[0] * self.cos_yaw + z * self.sin_yaw,
            wy,
            -l[0] * self.sin_yaw + z * self.cos_yaw,
        ])
    }
}

/// Projects `d` into the viewport, returning NDC coordinates when the
/// direction is in front of the camera and inside the frustum.
pub fn dir_to_viewport(vp: &Viewport, d: Direction) -> Option<(f64, f64)> {
    let (x, y) = project_unbounded(vp, d)?;
    const SLACK: f64 = 1e-12;
    (x.abs() <= 1.0 + SLACK && y.abs() <= 1.0 + SLACK).then_some((x, y))
}

/// Like [`dir_to_viewport`] but without the frustum bounds check.
pub fn project_unbounded(vp: &Viewport, d: Direction) -> Option<(f64, f64)> {
    let l = world_to_camera(vp.center, d.to_vector());
    if l[2] <= 0.0 {
        return None;
    }
    let (tx, ty) = vp.tangent_extents();
    Some((l[0] / l[2] / tx, l[1] / l[2] / ty))
}

/// Finds the viewport center (same fields of view, no roll) for which the
/// ray through NDC `(ndc_x, 0)` hits `target`. When the target pitch is
/// out of reach for that column the center pitch saturates at a pole.
pub fn aim_viewport(vp: &Viewport, target: Direction, ndc_x: f64) -> Viewport {
    let (tx, _) = vp.tangent_extents();
    let alpha = (ndc_x * tx).atan();
    let sin_pitch = (target.pitch.to_radians().sin() / alpha.cos()).clamp(-1.0, 1.0);
    let pitch = sin_pitch.asin();
    let yaw = target.yaw.to_radians() - alpha.sin().atan2(alpha.cos() * pitch.cos());
    vp.with_center(Direction::new(yaw.to_degrees(), pitch.to_degrees()))
}

/// Great-circle angle between two directions, in degrees.
pub fn angular_distance(a: Direction, b: Direction) -> f64 {
    let va = a.to_vector();
    let vb = b.to_vector();
    let c = cross(va, vb);
    norm(c).atan2(dot(va, vb)).to_degrees()
}

/// Great-circle interpolation from `a` (t = 0) to `b` (t = 1).
pub fn slerp_dir(a: Direction, b: Direction, t: f64) -> Result<Direction, GeometryError> {
    let va = a.to_vector();
    let vb = b.to_vector();
    let sin_omega = norm(cross(va, vb));
    let omega = sin_omega.atan2(dot(va, vb));
    if omega > std::f64::consts::PI - 1e-9 {
        return Err(GeometryError::Antipodal);
    }
    if t == 0.0 || omega == 0.0 {
        return Ok(a);
    }
    if t == 1.0 {
        return Ok(b);
    }
    let wa = ((1.0 - t) * omega).sin() / sin_omega;
    let wb = (t * omega).sin() / sin_omega;
    Ok(Direction::from_vector([
        wa * va[0] + wb * vb[0],
        wa * va[1] + wb * vb[1],
        wa * va[2] + wb * vb[2],
    ]))
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Pole {
    #[default]
    Nadir,
    Zenith,
}

/// Azimuthal equidistant ("tiny planet") map settings.
///
/// Map offsets are measured in pixels from the disk center with `y`
/// pointing down. Looking at a nadir-centered map the viewer's right is on
/// the right; a zenith-centered map is mirrored, as when looking up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanetMapConfig {
    pub center_pole: Pole,
    /// Yaw that points toward the top of the map.
    pub up_direction_yaw: f64,
    radius_px: f64,
}

impl PlanetMapConfig {
    pub fn new(center_pole: Pole, up_direction_yaw: f64, radius_px: f64) -> Result<Self, GeometryError> {
        if !(radius_px > 0.0 && radius_px.is_finite()) {
            return Err(GeometryError::MapRadius(radius_px));
        }
        Ok(PlanetMapConfig {
            center_pole,
            up_direction_yaw,
            radius_px,
        })
    }

    /// Nadir-centered, front pointing up.
    pub fn nadir(radius_px: f64) -> Result<Self, GeometryError> {
        PlanetMapConfig::new(Pole::Nadir, 0.0, radius_px)
    }

    pub fn radius_px(&self) -> f64 {
        self.radius_px
    }

    fn handedness(&self) -> f64 {
        match self.center_pole {
            Pole::Nadir => 1.0,
            Pole::Zenith => -1.0,
        }
    }
}

pub fn planet_project(d: Direction, cfg: &PlanetMapConfig) -> (f64, f64) {
    let polar = match cfg.center_pole {
        Pole::Nadir => 90.0 + d.pitch,
        Pole::Zenith => 90.0 - d.pitch,
    };
    let r = polar / 180.0 * cfg.radius_px;
    let theta = (d.yaw - cfg.up_direction_yaw).to_radians();
    (cfg.handedness() * r * theta.sin(), -r * theta.cos())
}

pub fn planet_unproject(p: (f64, f64), cfg: &PlanetMapConfig) -> Result<Direction, GeometryError> {
    let (mx, my) = p;
    let r = mx.hypot(my);
    if r > cfg.radius_px * (1.0 + 1e-12) {
        return Err(GeometryError::OutsideDisk {
            x: mx,
            y: my,
            radius: cfg.radius_px,
        });
    }
    let polar = (r / cfg.radius_px * 180.0).min(180.0);
    let pitch = match cfg.center_pole {
        Pole::Nadir => polar - 90.0,
        Pole::Zenith => 90.0 - polar,
    };
    let theta = (cfg.handedness() * mx).atan2(-my).to_degrees();
    Ok(Direction::new(theta + cfg.up_direction_yaw, pitch))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn direction_normalization() {
        assert_eq!(Direction::new(200.0, 0.0).yaw(), -160.0);
        assert_eq!(Direction::new(180.0, 0.0).yaw(), -180.0);
        assert_eq!(Direction::new(-180.0, 0.0).yaw(), -180.0);
        assert_eq!(Direction::new(45.0, 120.0), Direction::ZENITH);
        assert_eq!(Direction::new(-30.0, -90.0).yaw(), 0.0);
        assert!(normalize_yaw(-1e-20).abs() < 1e-12);
        assert!(normalize_yaw(-180.0 - 1e-14) >= -180.0);
        assert!(normalize_azimuth(-1e-20) < 360.0);
    }

    #[test]
    fn equirect_examples() {
        assert_eq!(dir_from_equirect(EquirectCoord::new(0.5, 0.5)), Direction::new(0.0, 0.0));
        assert_eq!(dir_from_equirect(EquirectCoord::new(0.75, 0.5)), Direction::new(90.0, 0.0));
        assert_eq!(dir_from_equirect(EquirectCoord::new(0.5, 0.0)), Direction::new(0.0, 90.0));
        assert_eq!(equirect_from_dir(Direction::FRONT), EquirectCoord::new(0.5, 0.5));
        assert_eq!(equirect_from_dir(Direction::new(-180.0, 0.0)), EquirectCoord::new(0.0, 0.5));
        // u wraps, v clamps
        assert_eq!(EquirectCoord::new(1.25, 1.5), EquirectCoord::new(0.25, 1.0));
    }

    #[test]
    fn hfov_examples() {
        assert!(close(hfov_from_aspect(40.0, 1.0).unwrap(), 40.0, 1e-12));
        assert!(close(hfov_from_aspect(40.0, 3.1606).unwrap(), 98.0, 0.1));
        assert!(close(hfov_from_aspect(40.0, 1.5545).unwrap(), 59.0, 0.1));
        assert_eq!(hfov_from_aspect(0.0, 1.0), Err(GeometryError::VerticalFov(0.0)));
        assert_eq!(hfov_from_aspect(180.0, 1.0), Err(GeometryError::VerticalFov(180.0)));
        assert_eq!(hfov_from_aspect(40.0, -1.0), Err(GeometryError::Aspect(-1.0)));
        assert!(hfov_from_aspect(170.0, 1e9).unwrap() < 180.0);
    }

    #[test]
    fn viewport_ray_examples() {
        let vp = Viewport::new(Direction::FRONT, 40.0, 98.0).unwrap();
        assert_eq!(viewport_ray(&vp, 0.0, 0.0), Direction::FRONT);
        let edge = viewport_ray(&vp, 1.0, 0.0);
        assert!(close(edge.yaw(), 49.0, 1e-9) && close(edge.pitch(), 0.0, 1e-9));
        let top = viewport_ray(&vp, 0.0, 1.0);
        assert!(close(top.pitch(), 20.0, 1e-9));

        let off = vp.with_center(Direction::new(30.0, 10.0));
        let axis = viewport_ray(&off, 0.0, 0.0);
        assert!(close(axis.yaw(), 30.0, 1e-9) && close(axis.pitch(), 10.0, 1e-9));
    }

    #[test]
    fn dir_to_viewport_examples() {
        let vp = Viewport::new(Direction::FRONT, 40.0, 60.0).unwrap();
        assert_eq!(dir_to_viewport(&vp, Direction::FRONT), Some((0.0, 0.0)));
        assert_eq!(dir_to_viewport(&vp, Direction::new(180.0, 0.0)), None);
        assert_eq!(dir_to_viewport(&vp, Direction::new(45.0, 0.0)), None);
    }

    #[test]
    fn aim_viewport_hits_target_column() {
        let vp = Viewport::new(Direction::FRONT, 40.0, 98.0).unwrap();
        let target = Direction::new(120.0, 25.0);
        for &x in &[-0.75, -0.25, 0.0, 0.5, 0.9] {
            let aimed = aim_viewport(&vp, target, x);
            let (px, py) = dir_to_viewport(&aimed, target).unwrap();
            assert!(close(px, x, 1e-9) && close(py, 0.0, 1e-9), "{x}: {px} {py}");
        }
    }

    #[test]
    fn planet_examples() {
        let cfg = PlanetMapConfig::nadir(100.0).unwrap();
        let (x, y) = planet_project(Direction::NADIR, &cfg);
        assert!(close(x, 0.0, 1e-12) && close(y, 0.0, 1e-12));
        let (x, y) = planet_project(Direction::FRONT, &cfg);
        assert!(close(x, 0.0, 1e-9) && close(y, -50.0, 1e-9));
        let (x, y) = planet_project(Direction::new(90.0, 0.0), &cfg);
        assert!(close(x, 50.0, 1e-9) && close(y, 0.0, 1e-9));
        assert_eq!(planet_unproject((0.0, 0.0), &cfg).unwrap(), Direction::NADIR);
        assert_eq!(planet_unproject((100.0, 0.0), &cfg).unwrap(), Direction::ZENITH);
        assert!(matches!(
            planet_unproject((80.0, 80.0), &cfg),
            Err(GeometryError::OutsideDisk { .. })
        ));
        assert!(PlanetMapConfig::nadir(0.0).is_err());

        let zen = PlanetMapConfig::new(Pole::Zenith, 0.0, 100.0).unwrap();
        assert_eq!(planet_unproject((0.0, 0.0), &zen).unwrap(), Direction::ZENITH);
        let (x, _) = planet_project(Direction::new(90.0, 0.0), &zen);
        assert!(close(x, -50.0, 1e-9));
    }

    #[test]
    fn planet_radius_linear_in_polar_angle() {
        let cfg = PlanetMapConfig::nadir(64.0).unwrap();
        for &polar in &[0.0, 45.0, 90.0, 135.0, 180.0] {
            let d = Direction::new(33.0, polar - 90.0);
            let (x, y) = planet_project(d, &cfg);
            assert!(close(x.hypot(y), polar / 180.0 * 64.0, 1e-9));
        }
    }

    #[test]
    fn angular_distance_examples() {
        assert_eq!(angular_distance(Direction::FRONT, Direction::FRONT), 0.0);
        assert!(close(angular_distance(Direction::FRONT, Direction::new(90.0, 0.0)), 90.0, 1e-12));
        assert_eq!(angular_distance(Direction::new(10.0, 90.0), Direction::new(170.0, 90.0)), 0.0);
        assert!(close(angular_distance(Direction::FRONT, Direction::new(180.0, 0.0)), 180.0, 1e-12));
    }

    #[test]
    fn slerp_examples() {
        let a = Direction::FRONT;
        let b = Direction::new(90.0, 0.0);
        assert_eq!(slerp_dir(a, b, 0.0).unwrap(), a);
        assert_eq!(slerp_dir(a, b, 1.0).unwrap(), b);
        let mid = slerp_dir(a, b, 0.5).unwrap();
        assert!(close(mid.yaw(), 45.0, 1e-12) && close(mid.pitch(), 0.0, 1e-12));
        assert_eq!(slerp_dir(a, a.antipode(), 0.5), Err(GeometryError::Antipodal));
    }
}

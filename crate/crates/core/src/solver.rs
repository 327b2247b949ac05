//! ROI-driven view presets: ROIs side by side, ROIs overlaid, and the
//! reset layouts.
//!
//! VR solvers only rotate lunes about the polar axis, so they align the
//! ROIs in yaw and leave each at its native pitch. 2D solvers re-aim the
//! perspective views.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::display::{CanvasLayout, LayoutError, LuneArea, Technique, VideoId, VrLayout};
use crate::geometry::{aim_viewport, project_unbounded, Direction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("{action} is not supported by {technique}")]
    Unsupported {
        action: &'static str,
        technique: Technique,
    },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Width of the front lune after a VR overlay solve, degrees.
    pub overlay_span: f64,
    /// Yaw separation of the two ROIs after a VR side-by-side solve.
    pub sxs_separation: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            overlay_span: 60.0,
            sxs_separation: 40.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveRequest {
    pub technique: Technique,
    pub roi_a: Direction,
    pub roi_b: Direction,
    /// Where the viewer is looking; only VR solvers use it.
    pub viewer_forward: Direction,
    pub params: SolverParams,
}

impl SolveRequest {
    pub fn new(technique: Technique, roi_a: Direction, roi_b: Direction) -> Self {
        SolveRequest {
            technique,
            roi_a,
            roi_b,
            viewer_forward: Direction::FRONT,
            params: SolverParams::default(),
        }
    }

    pub fn facing(mut self, forward: Direction) -> Self {
        self.viewer_forward = forward;
        self
    }

    pub fn roi(&self, video: VideoId) -> Direction {
        match video {
            VideoId::A => self.roi_a,
            VideoId::B => self.roi_b,
        }
    }

    fn require(&self, action: &'static str, allowed: &[Technique]) -> Result<(), SolveError> {
        if allowed.contains(&self.technique) {
            Ok(())
        } else {
            Err(SolveError::Unsupported {
                action,
                technique: self.technique,
            })
        }
    }
}

/// Default layout: two half-sphere lunes, A in front covering the front
/// hemisphere.
pub fn reset_views_vr() -> VrLayout {
    VrLayout::new(
        LuneArea::new(-90.0, 90.0, 0.0),
        LuneArea::new(90.0, 270.0, 0.0),
        VideoId::A,
    )
}

/// Both videos over the whole sphere.
pub fn set_views_360(front: VideoId) -> VrLayout {
    VrLayout::new(LuneArea::full(0.0, 0.0), LuneArea::full(0.0, 0.0), front)
}

/// Points both views straight ahead, keeping divider and layer order.
pub fn reset_views_2d(layout: &CanvasLayout) -> CanvasLayout {
    VideoId::BOTH
        .into_iter()
        .fold(*layout, |l, v| l.with_center(v, Direction::FRONT))
}

/// Rotates both videos so their ROIs sit at the viewer's forward yaw. The
/// front video shows through a lune of `overlay_span` degrees centered on
/// forward; the back video covers the whole sphere underneath it.
pub fn solve_rois_overlay_vr(req: &SolveRequest, layout: &VrLayout) -> Result<VrLayout, SolveError> {
    req.require("ROIs Overlay", &[Technique::SlideInVR])?;
    let fwd = req.viewer_forward.yaw();
    let half = req.params.overlay_span / 2.0;
    let front = layout.front();
    let back = front.other();
    let front_area = LuneArea::new(fwd - half, fwd + half, fwd - req.roi(front).yaw());
    let back_area = LuneArea::full(fwd + half, fwd - req.roi(back).yaw());
    let (a, b) = match front {
        VideoId::A => (front_area, back_area),
        VideoId::B => (back_area, front_area),
    };
    Ok(VrLayout::new(a, b, front))
}

/// Places ROI A `separation/2` left of forward and ROI B the same amount
/// to the right, each inside its own half-sphere lune split at forward.
pub fn solve_rois_sxs_vr(req: &SolveRequest, layout: &VrLayout) -> Result<VrLayout, SolveError> {
    req.require("ROIs SxS", &[Technique::SlideInVR])?;
    let fwd = req.viewer_forward.yaw();
    let half = req.params.sxs_separation / 2.0;
    let a = LuneArea::new(fwd - 180.0, fwd, fwd - half - req.roi_a.yaw());
    let b = LuneArea::new(fwd, fwd + 180.0, fwd + half - req.roi_b.yaw());
    Ok(VrLayout::new(a, b, layout.front()))
}

const DIVIDER_MIN: f64 = 0.05;
const DIVIDER_MAX: f64 = 0.95;
/// Headroom kept between an aimed view's center and the pole.
const POLE_MARGIN_DEG: f64 = 0.5;

/// Largest |NDC x| from which a view can be aimed at `pitch` without
/// rolling the camera. A ray at horizontal angle `alpha` off the view axis
/// tops out at `90 - |alpha|` degrees of pitch.
fn column_reach(hfov: f64, pitch: f64) -> f64 {
    let reach = (90.0 - pitch.abs() - POLE_MARGIN_DEG).max(0.0);
    reach.to_radians().tan() / (hfov / 2.0).to_radians().tan()
}

/// Centers each ROI in the visible part of its display area.
///
/// For SlideIn2D the back layer is only visible right of the divider, so
/// its view is aimed to put the ROI in the middle of that strip rather
/// than the canvas center. A divider too far right for a steep back ROI to
/// be reached from that strip is moved left until it is.
pub fn solve_rois_sxs_2d(req: &SolveRequest, layout: &CanvasLayout) -> Result<CanvasLayout, SolveError> {
    req.require("ROIs SxS", &[Technique::SlideIn2D, Technique::SideBySideIn2D])?;
    if layout.technique() != req.technique {
        return Err(SolveError::Unsupported {
            action: "ROIs SxS",
            technique: layout.technique(),
        });
    }
    match layout.technique() {
        Technique::SideBySideIn2D => Ok(layout
            .with_center(VideoId::A, req.roi_a)
            .with_center(VideoId::B, req.roi_b)),
        _ => {
            let mut out = *layout;
            let d = out.divider_x();
            if !(DIVIDER_MIN..=DIVIDER_MAX).contains(&d) {
                out = out.extend(0.5)?;
            }
            let front = out.front();
            let back = front.other();
            let ceiling = column_reach(out.viewport(back).hfov(), req.roi(back).pitch()).max(DIVIDER_MIN);
            if out.divider_x() > ceiling {
                out = out.extend(ceiling)?;
            }
            let back_ndc = out.divider_x();
            let aimed = aim_viewport(out.viewport(back), req.roi(back), back_ndc);
            Ok(out
                .with_center(front, req.roi(front))
                .with_center(back, aimed.center))
        }
    }
}

/// Puts both ROIs on the same canvas pixel: the middle of the front
/// layer's area.
///
/// When the back ROI is too steep to be reached from that column the
/// divider is moved right until it is, up to the divider maximum.
pub fn solve_rois_overlay_2d(req: &SolveRequest, layout: &CanvasLayout) -> Result<CanvasLayout, SolveError> {
    req.require("ROIs Overlay", &[Technique::SlideIn2D])?;
    if layout.technique() != Technique::SlideIn2D {
        return Err(SolveError::Unsupported {
            action: "ROIs Overlay",
            technique: layout.technique(),
        });
    }
    let mut out = *layout;
    if out.divider_x() < DIVIDER_MIN {
        out = out.extend(0.5)?;
    }
    let front = out.front();
    let back = front.other();
    let floor = (1.0 - column_reach(out.viewport(back).hfov(), req.roi(back).pitch())).min(DIVIDER_MAX);
    if out.divider_x() < floor {
        out = out.extend(floor)?;
    }
    // the front area's center column, in the back layer's full-canvas NDC
    let back_ndc = out.divider_x() - 1.0;
    let aimed = aim_viewport(out.viewport(back), req.roi(back), back_ndc);
    Ok(out
        .with_center(front, req.roi(front))
        .with_center(back, aimed.center))
}

/// World direction at which a video's ROI appears in a VR layout.
pub fn projected_roi_vr(layout: &VrLayout, video: VideoId, roi: Direction) -> Direction {
    layout.area(video).world_direction(roi)
}

/// Canvas position (pixels) at which a video's ROI appears, when it is in
/// front of that video's camera.
pub fn projected_roi_2d(layout: &CanvasLayout, video: VideoId, roi: Direction) -> Option<(f64, f64)> {
    let ndc = project_unbounded(layout.viewport(video), roi)?;
    Some(layout.ndc_to_canvas(video, ndc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::display::{CanvasSize, PeekState};
    use crate::geometry::{dir_to_viewport, normalize_yaw};

    const CANVAS: CanvasSize = CanvasSize {
        width: 1896,
        height: 600,
    };

    #[test]
    fn reset_and_360_presets() {
        let reset = reset_views_vr();
        assert_eq!(reset.area(VideoId::A).fraction(), 0.5);
        assert_eq!(reset.area(VideoId::B).fraction(), 0.5);
        assert_eq!(reset.front(), VideoId::A);
        assert_eq!(reset.visible_layer(Direction::FRONT, &PeekState::Off), Some(VideoId::A));
        assert_eq!(reset.visible_layer(Direction::new(180.0, 0.0), &PeekState::Off), Some(VideoId::B));

        let full = set_views_360(VideoId::A);
        assert_eq!(full.area(VideoId::A).fraction(), 1.0);
        assert_eq!(full.area(VideoId::B).fraction(), 1.0);
        assert_eq!(full.visible_layer(Direction::new(-120.0, 40.0), &PeekState::Off), Some(VideoId::A));
        assert_eq!(full.swap().visible_layer(Direction::new(-120.0, 40.0), &PeekState::Off), Some(VideoId::B));
    }

    #[test]
    fn overlay_vr_examples() {
        let layout = reset_views_vr();
        let req = SolveRequest::new(Technique::SlideInVR, Direction::FRONT, Direction::FRONT);
        let out = solve_rois_overlay_vr(&req, &layout).unwrap();
        assert_eq!(out.area(VideoId::A).yaw_offset(), 0.0);
        assert_eq!(out.area(VideoId::B).yaw_offset(), 0.0);

        let req = SolveRequest::new(Technique::SlideInVR, Direction::new(90.0, 0.0), Direction::new(-45.0, 10.0));
        let out = solve_rois_overlay_vr(&req, &layout).unwrap();
        for v in VideoId::BOTH {
            let yaw = projected_roi_vr(&out, v, req.roi(v)).yaw();
            assert!(normalize_yaw(yaw).abs() < 1e-9, "{v}: {yaw}");
        }
        // the front ROI is shown, the back ROI is underneath and peekable
        let roi_world = Direction::new(0.0, 10.0);
        assert_eq!(out.visible_layer(roi_world, &PeekState::Off), Some(VideoId::A));
        let peek = PeekState::Gaze { anchor: roi_world };
        assert_eq!(out.visible_layer(roi_world, &peek), Some(VideoId::B));
        assert_eq!(solve_rois_overlay_vr(&req, &out).unwrap(), out);

        let toggle = SolveRequest::new(Technique::ToggleInVR, Direction::FRONT, Direction::FRONT);
        assert!(matches!(solve_rois_overlay_vr(&toggle, &layout), Err(SolveError::Unsupported { .. })));
    }

    #[test]
    fn sxs_vr_examples() {
        let layout = reset_views_vr().swap();
        let req = SolveRequest::new(Technique::SlideInVR, Direction::new(100.0, 5.0), Direction::new(-60.0, -5.0));
        let out = solve_rois_sxs_vr(&req, &layout).unwrap();
        let ya = projected_roi_vr(&out, VideoId::A, req.roi_a).yaw();
        let yb = projected_roi_vr(&out, VideoId::B, req.roi_b).yaw();
        assert!((ya + 20.0).abs() < 1e-9 && (yb - 20.0).abs() < 1e-9);
        assert!(ya.abs() < 52.0 && yb.abs() < 52.0);
        assert_eq!(out.front(), VideoId::B);
        assert!(out.area(VideoId::A).contains(ya) && !out.area(VideoId::B).contains(ya));
        assert!(out.area(VideoId::B).contains(yb) && !out.area(VideoId::A).contains(yb));
        assert_eq!(solve_rois_sxs_vr(&req, &out).unwrap(), out);
    }

    #[test]
    fn sxs_2d_examples() {
        let sbs = CanvasLayout::new(Technique::SideBySideIn2D, CANVAS).unwrap();
        let req = SolveRequest::new(Technique::SideBySideIn2D, Direction::new(30.0, -10.0), Direction::new(-70.0, 20.0));
        let out = solve_rois_sxs_2d(&req, &sbs).unwrap();
        assert_eq!(out.viewport(VideoId::A).center, Direction::new(30.0, -10.0));
        let (x, y) = dir_to_viewport(out.viewport(VideoId::A), req.roi_a).unwrap();
        assert!(x.abs() < 1e-9 && y.abs() < 1e-9);
        let (x, y) = dir_to_viewport(out.viewport(VideoId::B), req.roi_b).unwrap();
        assert!(x.abs() < 1e-9 && y.abs() < 1e-9);
        assert_eq!(solve_rois_sxs_2d(&req, &out).unwrap(), out);
    }

    #[test]
    fn sxs_2d_slide_layout() {
        let slide = CanvasLayout::new(Technique::SlideIn2D, CANVAS).unwrap().extend(0.01).unwrap();
        let req = SolveRequest::new(Technique::SlideIn2D, Direction::new(30.0, -10.0), Direction::new(150.0, 15.0));
        let out = solve_rois_sxs_2d(&req, &slide).unwrap();
        assert_eq!(out.divider_x(), 0.5);
        let (ax, ay) = projected_roi_2d(&out, VideoId::A, req.roi_a).unwrap();
        let (bx, by) = projected_roi_2d(&out, VideoId::B, req.roi_b).unwrap();
        assert!((ax - 474.0).abs() < 1e-6 && (ay - 300.0).abs() < 1e-6);
        assert!((bx - 1422.0).abs() < 1e-6 && (by - 300.0).abs() < 1e-6);

        let kept = CanvasLayout::new(Technique::SlideIn2D, CANVAS).unwrap().extend(0.3).unwrap();
        assert_eq!(solve_rois_sxs_2d(&req, &kept).unwrap().divider_x(), 0.3);

        // a steep back ROI pulls a wide divider left
        let wide = CanvasLayout::new(Technique::SlideIn2D, CANVAS).unwrap().extend(0.9).unwrap();
        let steep = SolveRequest::new(Technique::SlideIn2D, Direction::new(113.0, 18.0), Direction::new(174.0, -54.0));
        let out = solve_rois_sxs_2d(&steep, &wide).unwrap();
        assert!(out.divider_x() < 0.9 && out.divider_x() > 0.5, "{}", out.divider_x());
        let (bx, by) = projected_roi_2d(&out, VideoId::B, steep.roi_b).unwrap();
        let strip_mid = (1.0 + out.divider_x()) / 2.0 * 1896.0;
        assert!((bx - strip_mid).abs() < 1e-6 && (by - 300.0).abs() < 1e-6);

        let toggle = CanvasLayout::new(Technique::ToggleIn2D, CANVAS).unwrap();
        let treq = SolveRequest::new(Technique::ToggleIn2D, Direction::FRONT, Direction::FRONT);
        assert!(matches!(solve_rois_sxs_2d(&treq, &toggle), Err(SolveError::Unsupported { .. })));
    }

    #[test]
    fn overlay_2d_examples() {
        let slide = CanvasLayout::new(Technique::SlideIn2D, CANVAS).unwrap();
        let req = SolveRequest::new(Technique::SlideIn2D, Direction::new(-40.0, 12.0), Direction::new(75.0, -8.0));
        let out = solve_rois_overlay_2d(&req, &slide).unwrap();
        let pa = projected_roi_2d(&out, VideoId::A, req.roi_a).unwrap();
        let pb = projected_roi_2d(&out, VideoId::B, req.roi_b).unwrap();
        assert!((pa.0 - pb.0).hypot(pa.1 - pb.1) < 0.5);
        assert!((pa.0 - 474.0).abs() < 1e-6);
        let px = (pa.0.floor() as u32, pa.1.floor() as u32);
        let peek = PeekState::Pixel { x: px.0, y: px.1 };
        assert_eq!(out.pixel_owner(px.0, px.1, &PeekState::Off).unwrap(), VideoId::A);
        assert_eq!(out.pixel_owner(px.0, px.1, &peek).unwrap(), VideoId::B);
        assert_eq!(solve_rois_overlay_2d(&req, &out).unwrap(), out);

        // a steep back ROI pushes a narrow divider right
        let narrow = slide.extend(0.1).unwrap();
        let steep = SolveRequest::new(Technique::SlideIn2D, Direction::new(165.0, -53.0), Direction::new(159.0, -47.0));
        let out = solve_rois_overlay_2d(&steep, &narrow).unwrap();
        assert!(out.divider_x() > 0.1 && out.divider_x() < 0.5, "{}", out.divider_x());
        let pa = projected_roi_2d(&out, VideoId::A, steep.roi_a).unwrap();
        let pb = projected_roi_2d(&out, VideoId::B, steep.roi_b).unwrap();
        assert!((pa.0 - pb.0).hypot(pa.1 - pb.1) < 0.5);

        let sbs = CanvasLayout::new(Technique::SideBySideIn2D, CANVAS).unwrap();
        let sreq = SolveRequest::new(Technique::SideBySideIn2D, Direction::FRONT, Direction::FRONT);
        assert!(matches!(solve_rois_overlay_2d(&sreq, &sbs), Err(SolveError::Unsupported { .. })));
    }
}

// ROI-driven view presets for VR and 2D layouts.
//
// cargo run --example solvers

use panocmp::display::{CanvasLayout, VideoId};
use panocmp::geometry::Direction;
use panocmp::session::DEFAULT_CANVAS;
use panocmp::solver::{
    projected_roi_2d, projected_roi_vr, reset_views_vr, solve_rois_overlay_2d, solve_rois_overlay_vr,
    solve_rois_sxs_2d, solve_rois_sxs_vr, SolveRequest,
};
use panocmp::Technique;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let roi_a = Direction::new(120.0, 5.0);
    let roi_b = Direction::new(-70.0, -10.0);

    let req = SolveRequest::new(Technique::SlideInVR, roi_a, roi_b).facing(Direction::new(30.0, 0.0));
    let overlay = solve_rois_overlay_vr(&req, &reset_views_vr())?;
    let sxs = solve_rois_sxs_vr(&req, &reset_views_vr())?;
    for (name, layout) in [("VR overlay", overlay), ("VR side by side", sxs)] {
        println!(
            "{name}: ROI A at yaw {:.1}, ROI B at yaw {:.1}",
            projected_roi_vr(&layout, VideoId::A, roi_a).yaw(),
            projected_roi_vr(&layout, VideoId::B, roi_b).yaw()
        );
    }

    let slide = CanvasLayout::new(Technique::SlideIn2D, DEFAULT_CANVAS)?.extend(0.4)?;
    let req = SolveRequest::new(Technique::SlideIn2D, roi_a, roi_b);
    for (name, layout) in [
        ("2D overlay", solve_rois_overlay_2d(&req, &slide)?),
        ("2D side by side", solve_rois_sxs_2d(&req, &slide)?),
    ] {
        let pa = projected_roi_2d(&layout, VideoId::A, roi_a).unwrap_or((f64::NAN, f64::NAN));
        let pb = projected_roi_2d(&layout, VideoId::B, roi_b).unwrap_or((f64::NAN, f64::NAN));
        println!(
            "{name}: divider {:.2}, ROI A at ({:.1}, {:.1}) px, ROI B at ({:.1}, {:.1}) px",
            layout.divider_x(),
            pa.0,
            pa.1,
            pb.0,
            pb.1
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

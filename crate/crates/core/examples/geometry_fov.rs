// Field-of-view arithmetic and the basic projections.
//
// cargo run --example geometry_fov

use panocmp::display::CanvasLayout;
use panocmp::geometry::{
    angular_distance, dir_from_equirect, dir_to_viewport, equirect_from_dir, hfov_from_aspect, slerp_dir,
    viewport_ray, Direction, EquirectCoord,
};
use panocmp::session::DEFAULT_CANVAS;
use panocmp::Technique;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let canvas = DEFAULT_CANVAS;
    let full = hfov_from_aspect(40.0, canvas.aspect())?;
    let half = hfov_from_aspect(40.0, canvas.aspect() / 2.0)?;
    println!("canvas {}x{}: hfov {full:.2} (full width), {half:.2} (half width)", canvas.width, canvas.height);

    for divider in [0.25, 0.5, 0.75, 1.0] {
        let layout = CanvasLayout::new(Technique::SlideIn2D, canvas)?.extend(divider)?;
        println!("  divider {divider:.2}: top layer hfov {:.2}", layout.viewport(layout.front()).hfov());
    }

    let right = dir_from_equirect(EquirectCoord::new(0.75, 0.5));
    println!("u=0.75 v=0.5 -> yaw {} pitch {}", right.yaw(), right.pitch());
    let back = equirect_from_dir(Direction::new(-180.0, 0.0));
    println!("back seam -> u {} v {}", back.u(), back.v());

    let layout = CanvasLayout::new(Technique::ToggleIn2D, canvas)?;
    let vp = layout.viewport(layout.front());
    let edge = viewport_ray(vp, 1.0, 0.0);
    println!("right edge of the toggle view looks at yaw {:.2}", edge.yaw());
    let target = Direction::new(20.0, 10.0);
    if let Some((x, y)) = dir_to_viewport(vp, target) {
        println!("{target:?} appears at ndc ({x:.3}, {y:.3})");
    }

    let mid = slerp_dir(Direction::FRONT, Direction::new(90.0, 0.0), 0.5)?;
    println!(
        "midpoint of front and right: yaw {:.1}, {:.1} deg from each",
        mid.yaw(),
        angular_distance(mid, Direction::FRONT)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

// Lune display areas in VR: extend, slide, swap and per-direction
// visibility.
//
// cargo run --example lune_layouts

use panocmp::display::{Edge, PeekState, VideoId, VrLayout};
use panocmp::geometry::Direction;
use panocmp::solver::{reset_views_vr, set_views_360};

fn describe(name: &str, layout: &VrLayout) {
    let shown: String = (-180..180)
        .step_by(30)
        .map(|yaw| match layout.visible_layer(Direction::new(f64::from(yaw), 0.0), &PeekState::Off) {
            Some(VideoId::A) => 'A',
            Some(VideoId::B) => 'B',
            None => '.',
        })
        .collect();
    println!(
        "{name:<22} A {:>5.1}%  B {:>5.1}%  front {}  yaw -180..180: {shown}",
        layout.area(VideoId::A).fraction() * 100.0,
        layout.area(VideoId::B).fraction() * 100.0,
        layout.front()
    );
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let reset = reset_views_vr();
    describe("reset", &reset);

    // A grows to 75%; where it overlaps B, A is in front
    let wide = reset.extend(VideoId::A, Edge::End, 180.0);
    describe("A end -> 180", &wide);

    let preview = wide.slide(VideoId::A, 45.0, false);
    describe("slide A +45 preview", &preview);
    let committed = wide.slide(VideoId::A, 45.0, true);
    describe("slide A +45 commit", &committed);

    describe("swap", &committed.swap());
    describe("360", &set_views_360(VideoId::A));

    let peek = PeekState::Gaze { anchor: Direction::new(10.0, 0.0) };
    let full = set_views_360(VideoId::A);
    println!(
        "peek at yaw 10 on the 360 layout shows {:?}, 20 deg away shows {:?}",
        full.visible_layer(Direction::new(10.0, 0.0), &peek),
        full.visible_layer(Direction::new(30.0, 0.0), &peek)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

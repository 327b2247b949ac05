// Headset view and flattened composite of a VR layout.
//
// cargo run --example render_vr

use panocmp::compositor::{render_equirect_composite, render_vr_view};
use panocmp::display::{Edge, VideoId};
use panocmp::fixture::checker_frame;
use panocmp::geometry::Direction;
use panocmp::script::{Command, PeekAnchor};
use panocmp::session::{Engine, EngineConfig};
use panocmp::{RenderOptions, Sources, Technique};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::temp_dir().join("panocmp-examples");
    std::fs::create_dir_all(&out_dir)?;
    let a = checker_frame(VideoId::A, 512, 256, None);
    let b = checker_frame(VideoId::B, 512, 256, None);
    let src = Sources::new(&a, &b);

    let engine = Engine::new(EngineConfig::new(Technique::SlideInVR, [10.0, 10.0]))?;
    let mut state = engine.initial_state()?;
    for cmd in [
        Command::ExtendVr { video: VideoId::A, edge: Edge::End, az: 135.0 },
        Command::SlideVr { video: VideoId::B, delta: 20.0, commit: false },
        Command::SetHeadPose(Direction::new(90.0, 0.0)),
        Command::PeekOn(PeekAnchor::Gaze),
    ] {
        state = engine.apply(&state, &cmd)?;
    }

    let view = render_vr_view(&state, &src, state.head_pose, 416, 384, &RenderOptions::default())?;
    let composite = render_equirect_composite(&state, &src, 720, 360, &RenderOptions::default())?;
    for (name, frame) in [("vrview", view), ("equirect", composite)] {
        let path = out_dir.join(format!("{name}.png"));
        frame.save_png(&path)?;
        println!("{name}: {}", path.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

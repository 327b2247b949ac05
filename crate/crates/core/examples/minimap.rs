// Planet-view minimaps with ROI trajectories, in 2D and VR styling.
//
// cargo run --example minimap

use panocmp::compositor::render_minimap;
use panocmp::display::VideoId;
use panocmp::fixture::{demo_markers, SequenceSpec};
use panocmp::script::Command;
use panocmp::session::{Engine, EngineConfig};
use panocmp::{RenderOptions, Technique};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::temp_dir().join("panocmp-examples");
    std::fs::create_dir_all(&out_dir)?;
    let spec = SequenceSpec::new(VideoId::A, 256, 1.0, 30).with_marker(demo_markers()[0]);
    let track = spec.marker_track().ok_or("marker track")?;

    for technique in [Technique::SlideIn2D, Technique::SlideInVR] {
        let engine = Engine::new(EngineConfig::new(technique, [30.0, 30.0]).with_roi(track.clone()))?;
        let mut state = engine.initial_state()?;
        state = engine.apply(&state, &Command::Seek(VideoId::A, 12.0))?;
        let frame = spec.frame(12);
        let map = render_minimap(&state, VideoId::A, &frame, Some(&track), 240, &RenderOptions::default())?;
        let path = out_dir.join(format!("minimap_{}.png", technique.name()));
        map.save_png(&path)?;
        println!("{technique}: {}", path.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

// Rendering the three 2D techniques from synthetic frames.
//
// cargo run --example render_canvas

use panocmp::compositor::render_canvas;
use panocmp::display::{CanvasSize, VideoId};
use panocmp::fixture::checker_frame;
use panocmp::script::{Command, DragTarget, PeekAnchor};
use panocmp::session::{Engine, EngineConfig};
use panocmp::{RenderOptions, Sources, Technique};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::temp_dir().join("panocmp-examples");
    std::fs::create_dir_all(&out_dir)?;
    let a = checker_frame(VideoId::A, 512, 256, None);
    let b = checker_frame(VideoId::B, 512, 256, None);
    let src = Sources::new(&a, &b);
    let canvas = CanvasSize { width: 632, height: 200 };

    for technique in [Technique::SlideIn2D, Technique::ToggleIn2D, Technique::SideBySideIn2D] {
        let engine = Engine::new(EngineConfig::new(technique, [10.0, 10.0]).with_canvas(canvas))?;
        let mut state = engine.initial_state()?;
        // only the toggle view has a single shared camera
        let target = match technique {
            Technique::ToggleIn2D => DragTarget::Shared,
            _ => DragTarget::Video(VideoId::A),
        };
        state = engine.apply(&state, &Command::Drag { target, dyaw: 30.0, dpitch: 0.0 })?;
        if technique == Technique::SlideIn2D {
            state = engine.apply(&state, &Command::ExtendDivider(0.8))?;
        }
        if technique != Technique::SideBySideIn2D {
            state = engine.apply(&state, &Command::PeekOn(PeekAnchor::Pixel { x: 100, y: 100 }))?;
        }
        let frame = render_canvas(&state, &src, &RenderOptions::default())?;
        let path = out_dir.join(format!("canvas_{}.png", technique.name()));
        frame.save_png(&path)?;
        println!("{technique}: {}", path.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

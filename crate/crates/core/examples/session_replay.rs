// Driving the session engine with an interaction script.
//
// cargo run --example session_replay

use panocmp::display::{CanvasSize, VideoId};
use panocmp::fixture::{demo_markers, SequenceSpec};
use panocmp::session::{Engine, EngineConfig};
use panocmp::{Script, Technique};

const SCRIPT: &str = "\
AT 0    PLAY BOTH
AT 2    DRAG A 25 -5
AT 3    EXTEND_DIVIDER 0.3
AT 5    ROIS_OVERLAY
AT 6    PEEK_ON PX 140 100
AT 6.5  PEEK_OFF
AT 8    JUMP B -5
AT 9    SWAP
";

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = EngineConfig::new(Technique::SlideIn2D, [30.0, 30.0]).with_canvas(CanvasSize {
        width: 632,
        height: 200,
    });
    for (v, marker) in VideoId::BOTH.into_iter().zip(demo_markers()) {
        let track = SequenceSpec::new(v, 64, 1.0, 30)
            .with_marker(marker)
            .marker_track()
            .ok_or("marker track")?;
        config = config.with_roi(track);
    }
    let engine = Engine::new(config)?;
    let script = Script::parse(SCRIPT)?;

    for (t, state) in engine.run_script(&script)? {
        let layout = state.layout.as_canvas().ok_or("2D layout")?;
        println!(
            "t={t:>4}: A {:>5.2}s B {:>5.2}s  front {}  divider {:.2}  peek {}",
            state.clock(VideoId::A).position,
            state.clock(VideoId::B).position,
            layout.front(),
            layout.divider_x(),
            state.peek.is_active()
        );
    }

    let end = engine.state_at(&script, 12.0)?;
    println!("state at 12 s is valid: {:?}", end.check_invariants());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

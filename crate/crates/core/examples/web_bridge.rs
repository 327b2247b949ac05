// The JSON message boundary a front end talks to.
//
// cargo run --example web_bridge

use panocmp::bridge::{Bridge, StillMedia};
use panocmp::display::{CanvasSize, VideoId};
use panocmp::fixture::solid_frame;
use panocmp::io::RenderSizes;
use panocmp::session::{Engine, EngineConfig};
use panocmp::Technique;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(EngineConfig::new(Technique::SlideIn2D, [30.0, 30.0]).with_canvas(CanvasSize {
        width: 316,
        height: 100,
    }))?;
    let media = StillMedia([solid_frame(VideoId::A, 64, 32), solid_frame(VideoId::B, 64, 32)]);
    let mut bridge = Bridge::new(engine.clone(), media, RenderSizes::default())?;

    for request in [
        r#"{"type":"command","line":"PLAY BOTH"}"#,
        r#"{"type":"tick","dt":1.25}"#,
        r#"{"type":"command","line":"EXTEND_DIVIDER 0.7"}"#,
        r#"{"type":"command","line":"SWAP"}"#,
        r#"{"type":"command","line":"TOGGLE"}"#,
        r#"{"type":"render","mode":"canvas","overlays":false}"#,
    ] {
        let response = bridge.handle_json(request);
        let kind: serde_json::Value = serde_json::from_str(&response)?;
        println!("{request} -> {} ({} bytes)", kind["type"], response.len());
    }

    let log = bridge.log().clone();
    println!("command log:\n{log}");
    let replayed = engine.state_at(&log, bridge.state().time_now)?;
    println!("replay matches live state: {}", &replayed == bridge.state());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}

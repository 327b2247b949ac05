//! JSON message boundary for an interactive front end.
//!
//! Each request is one JSON object with a `type` tag:
//!
//! | request                                            | response            |
//! |----------------------------------------------------|---------------------|
//! | `{"type":"command","line":"DRAG A -10 0"}`          | `state` or `error`  |
//! | `{"type":"tick","dt":0.016}`                       | `state`             |
//! | `{"type":"snapshot"}`                              | `state`             |
//! | `{"type":"render","mode":"canvas"}`                | `image` or `error`  |
//! | `{"type":"log"}`                                   | `log`               |
//!
//! Command lines use the interaction-script grammar without the `AT`
//! prefix. Every accepted command is appended to a log stamped with the
//! session time, so replaying the log through [`Engine::run_script`]
//! reproduces the bridge's state. Rendered images are base64-encoded PNG.

use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::compositor::{RenderOptions, Sources};
use crate::display::VideoId;
use crate::frame::{Frame, Sampling};
use crate::io::{render_mode, IoError, LoadedSession, RenderMode, RenderSizes};
use crate::roi::RoiTrack;
use crate::script::{Command, Script};
use crate::session::{Engine, SessionState};

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BridgeRequest {
    Command {
        line: String,
    },
    Tick {
        dt: f64,
    },
    Snapshot,
    Render {
        mode: RenderMode,
        #[serde(default)]
        sampling: Sampling,
        #[serde(default = "default_true")]
        overlays: bool,
    },
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BridgeResponse {
    State {
        state: Box<SessionState>,
    },
    Image {
        mode: RenderMode,
        width: u32,
        height: u32,
        png_base64: String,
    },
    Log {
        script: String,
    },
    Error {
        message: String,
    },
}

/// Where the bridge gets the frames for a state.
pub trait MediaSource {
    fn frames_at(&self, state: &SessionState) -> Result<[Frame; 2], IoError>;
}

impl MediaSource for LoadedSession {
    fn frames_at(&self, state: &SessionState) -> Result<[Frame; 2], IoError> {
        LoadedSession::frames_at(self, state)
    }
}

/// The same pair of frames at every time.
#[derive(Debug, Clone)]
pub struct StillMedia(pub [Frame; 2]);

impl MediaSource for StillMedia {
    fn frames_at(&self, _state: &SessionState) -> Result<[Frame; 2], IoError> {
        Ok(self.0.clone())
    }
}

#[derive(Debug)]
pub struct Bridge<M> {
    engine: Engine,
    media: M,
    sizes: RenderSizes,
    state: SessionState,
    log: Script,
}

impl Bridge<LoadedSession> {
    pub fn from_session(session: LoadedSession) -> Result<Self, IoError> {
        let engine = session.engine.clone();
        let sizes = session.config.render;
        Bridge::new(engine, session, sizes)
    }
}

impl<M: MediaSource> Bridge<M> {
    pub fn new(engine: Engine, media: M, sizes: RenderSizes) -> Result<Self, IoError> {
        let state = engine.initial_state()?;
        Ok(Bridge {
            engine,
            media,
            sizes,
            state,
            log: Script::new(),
        })
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn log(&self) -> &Script {
        &self.log
    }

    fn snapshot(&self) -> BridgeResponse {
        BridgeResponse::State {
            state: Box::new(self.state.clone()),
        }
    }

    pub fn handle(&mut self, req: BridgeRequest) -> BridgeResponse {
        let error = |message: String| BridgeResponse::Error { message };
        match req {
            BridgeRequest::Command { line } => {
                let cmd: Command = match line.parse() {
                    Ok(c) => c,
                    Err(e) => return error(format!("{e}")),
                };
                match self.engine.apply(&self.state, &cmd) {
                    Ok(next) => {
                        if let Err(e) = self.log.push(next.time_now, cmd) {
                            return error(e.to_string());
                        }
                        self.state = next;
                        self.snapshot()
                    }
                    Err(e) => error(e.to_string()),
                }
            }
            BridgeRequest::Tick { dt } => {
                self.state = self.engine.tick(&self.state, dt);
                self.snapshot()
            }
            BridgeRequest::Snapshot => self.snapshot(),
            BridgeRequest::Render {
                mode,
                sampling,
                overlays,
            } => match self.render(mode, sampling, overlays) {
                Ok((w, h, png)) => BridgeResponse::Image {
                    mode,
                    width: w,
                    height: h,
                    png_base64: base64::engine::general_purpose::STANDARD.encode(png),
                },
                Err(e) => error(e.to_string()),
            },
            BridgeRequest::Log => BridgeResponse::Log {
                script: self.log.to_string(),
            },
        }
    }

    fn render(&self, mode: RenderMode, sampling: Sampling, overlays: bool) -> Result<(u32, u32, Vec<u8>), IoError> {
        let frames = self.media.frames_at(&self.state)?;
        let tracks: [Option<&RoiTrack>; 2] = VideoId::BOTH.map(|v| self.engine.roi_track(v));
        let src = Sources::new(&frames[0], &frames[1]).with_tracks(tracks[0], tracks[1]);
        let mut opts = RenderOptions::default().with_sampling(sampling);
        opts.overlays = overlays;
        let f = render_mode(&self.state, &src, mode, &self.sizes, &opts)?;
        Ok((f.width(), f.height(), f.encode_png()?))
    }

    /// Handles one JSON request and returns the JSON response.
    pub fn handle_json(&mut self, request: &str) -> String {
        let resp = match serde_json::from_str::<BridgeRequest>(request) {
            Ok(req) => self.handle(req),
            Err(e) => BridgeResponse::Error {
                message: format!("bad request: {e}"),
            },
        };
        serde_json::to_string(&resp).unwrap_or_else(|e| format!("{{\"type\":\"error\",\"message\":\"{e}\"}}"))
    }
}

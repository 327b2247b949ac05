//! The comparison session state machine.
//!
//! [`Engine`] holds everything that stays fixed for a session (technique,
//! clip durations, ROI tracks, canvas or headset frustum). [`SessionState`]
//! is a plain value; every command or tick produces a new one, so replaying
//! the same script always yields the same states.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::display::{
    CanvasLayout, CanvasSize, LayoutError, PeekState, Technique, VideoId, VrLayout, CANVAS_VFOV_DEG,
};
use crate::geometry::{hfov_from_aspect, Direction};
use crate::roi::{RoiTrack, TrackError};
use crate::script::{Command, DragTarget, PeekAnchor, Script, Target};
use crate::solver::{self, SolveError, SolveRequest, SolverParams};

/// Seconds moved by a rewind or fast-forward.
pub const JUMP_SECONDS: f64 = 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("invalid session config: {0}")]
    Config(String),
    #[error("{command} is not supported by {technique}")]
    Unsupported { technique: Technique, command: &'static str },
    #[error("only the current video ({current}) can be navigated, not {requested}")]
    NotCurrent { current: VideoId, requested: VideoId },
    #[error("video {0} has no ROI track")]
    MissingRoi(VideoId),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Track(#[from] TrackError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("script line {line} ({command}): {source}")]
pub struct ReplayError {
    pub line: usize,
    pub command: String,
    pub source: SessionError,
}

/// Headset field of view used for VR views.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frustum {
    pub hfov: f64,
    pub vfov: f64,
}

impl Default for Frustum {
    fn default() -> Self {
        Frustum {
            hfov: 104.0,
            vfov: 96.0,
        }
    }
}

/// Canvas whose full width gives a ≈98° horizontal field of view at 40°
/// vertical, and whose halves give ≈60°.
pub const DEFAULT_CANVAS: CanvasSize = CanvasSize {
    width: 1896,
    height: 600,
};

/// Optional starting overrides for the default layout.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialLayout {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front: Option<VideoId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divider: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_pose: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub technique: Technique,
    pub durations: [f64; 2],
    pub canvas: CanvasSize,
    pub frustum: Frustum,
    /// Restart clips at the end instead of pausing.
    pub looping: bool,
    pub solver: SolverParams,
    pub rois: [Option<Arc<RoiTrack>>; 2],
    pub initial: InitialLayout,
}

impl EngineConfig {
    pub fn new(technique: Technique, durations: [f64; 2]) -> Self {
        EngineConfig {
            technique,
            durations,
            canvas: DEFAULT_CANVAS,
            frustum: Frustum::default(),
            looping: false,
            solver: SolverParams::default(),
            rois: [None, None],
            initial: InitialLayout::default(),
        }
    }

    pub fn with_roi(mut self, track: RoiTrack) -> Self {
        let idx = track.video().index();
        self.rois[idx] = Some(Arc::new(track));
        self
    }

    pub fn with_canvas(mut self, canvas: CanvasSize) -> Self {
        self.canvas = canvas;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Clock {
    pub position: f64,
    pub playing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Layout {
    Vr(VrLayout),
    Canvas(CanvasLayout),
}

impl Layout {
    pub fn as_vr(&self) -> Option<&VrLayout> {
        match self {
            Layout::Vr(l) => Some(l),
            Layout::Canvas(_) => None,
        }
    }

    pub fn as_canvas(&self) -> Option<&CanvasLayout> {
        match self {
            Layout::Canvas(l) => Some(l),
            Layout::Vr(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub technique: Technique,
    pub layout: Layout,
    pub clocks: [Clock; 2],
    pub durations: [f64; 2],
    pub peek: PeekState,
    /// Whether a VR peek re-anchors to the head pose each time it moves.
    pub peek_follows_gaze: bool,
    pub head_pose: Direction,
    pub frustum: Frustum,
    pub time_now: f64,
}

impl SessionState {
    pub fn clock(&self, video: VideoId) -> &Clock {
        &self.clocks[video.index()]
    }

    pub fn duration(&self, video: VideoId) -> f64 {
        self.durations[video.index()]
    }

    /// The one navigable video under toggle techniques.
    pub fn current_video(&self) -> Option<VideoId> {
        match (&self.layout, self.technique) {
            (Layout::Vr(l), Technique::ToggleInVR) => Some(l.front()),
            (Layout::Canvas(l), Technique::ToggleIn2D) => Some(l.toggle_current()),
            _ => None,
        }
    }

    /// Checks every structural invariant of the state for its technique.
    pub fn check_invariants(&self) -> Result<(), String> {
        for v in VideoId::BOTH {
            let c = self.clock(v);
            let d = self.duration(v);
            if !(c.position >= 0.0 && c.position <= d) {
                return Err(format!("clock {v} at {} outside [0, {d}]", c.position));
            }
        }
        match (&self.layout, self.technique.is_vr()) {
            (Layout::Vr(l), true) => {
                for v in VideoId::BOTH {
                    let f = l.area(v).fraction();
                    if !(f > 0.0 && f <= 1.0) {
                        return Err(format!("lune {v} fraction {f}"));
                    }
                }
                if self.technique == Technique::ToggleInVR {
                    if !(l.area(VideoId::A).is_full() && l.area(VideoId::B).is_full()) {
                        return Err("ToggleInVR lunes must cover the sphere".into());
                    }
                    if l.pending_slide().is_some() {
                        return Err("ToggleInVR cannot slide".into());
                    }
                }
                if matches!(self.peek, PeekState::Pixel { .. }) {
                    return Err("pixel peek in a VR technique".into());
                }
                if self.peek_follows_gaze {
                    match self.peek {
                        PeekState::Gaze { anchor } if anchor == self.head_pose => {}
                        _ => return Err("gaze-following peek is not anchored at the head pose".into()),
                    }
                }
            }
            (Layout::Canvas(l), false) => {
                if l.technique() != self.technique {
                    return Err(format!("canvas layout for {} in {}", l.technique(), self.technique));
                }
                let CanvasSize { width, height } = l.canvas();
                let h = f64::from(height);
                let fov = |w: f64| hfov_from_aspect(CANVAS_VFOV_DEG, w.max(1.0) / h).unwrap();
                let d = l.divider_x();
                if !(0.0..=1.0).contains(&d) {
                    return Err(format!("divider {d} outside [0, 1]"));
                }
                let expected = match self.technique {
                    Technique::SlideIn2D => {
                        let mut e = [0.0; 2];
                        e[l.front().index()] = fov(d * f64::from(width));
                        e[l.back().index()] = fov(f64::from(width));
                        e
                    }
                    Technique::SideBySideIn2D => [fov(f64::from(width) / 2.0); 2],
                    _ => [fov(f64::from(width)); 2],
                };
                for v in VideoId::BOTH {
                    let got = l.viewport(v).hfov();
                    if (got - expected[v.index()]).abs() > 1e-9 {
                        return Err(format!("view {v} hfov {got}, expected {}", expected[v.index()]));
                    }
                    if l.viewport(v).vfov() != CANVAS_VFOV_DEG {
                        return Err(format!("view {v} vfov {}", l.viewport(v).vfov()));
                    }
                }
                if self.technique == Technique::ToggleIn2D
                    && l.viewport(VideoId::A).center != l.viewport(VideoId::B).center
                {
                    return Err("ToggleIn2D views are not shared".into());
                }
                match self.peek {
                    PeekState::Gaze { .. } => return Err("gaze peek in a 2D technique".into()),
                    PeekState::Pixel { x, y } => {
                        if self.technique == Technique::SideBySideIn2D {
                            return Err("SideBySideIn2D cannot peek".into());
                        }
                        if x >= width || y >= height {
                            return Err("peek anchor outside the canvas".into());
                        }
                    }
                    PeekState::Off => {}
                }
                if self.peek_follows_gaze {
                    return Err("2D peek cannot follow gaze".into());
                }
            }
            _ => return Err(format!("layout kind does not match {}", self.technique)),
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self, SessionError> {
        for (v, d) in VideoId::BOTH.into_iter().zip(config.durations) {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(SessionError::Config(format!("duration of {v} is {d}")));
            }
        }
        for (i, track) in config.rois.iter().enumerate() {
            if let Some(t) = track {
                if t.video().index() != i {
                    return Err(SessionError::Config(format!(
                        "ROI track for {} supplied in slot {}",
                        t.video(),
                        VideoId::BOTH[i]
                    )));
                }
            }
        }
        let f = config.frustum;
        if !(f.hfov > 0.0 && f.hfov < 180.0 && f.vfov > 0.0 && f.vfov < 180.0) {
            return Err(SessionError::Config(format!("VR frustum {}x{}", f.hfov, f.vfov)));
        }
        if let Some(d) = config.initial.divider {
            if !(0.0..=1.0).contains(&d) {
                return Err(SessionError::Config(format!("divider {d} outside [0, 1]")));
            }
        }
        let engine = Engine { config };
        engine.initial_state()?;
        Ok(engine)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn technique(&self) -> Technique {
        self.config.technique
    }

    pub fn roi_track(&self, video: VideoId) -> Option<&RoiTrack> {
        self.config.rois[video.index()].as_deref()
    }

    /// Clocks at zero and paused, layout at the technique default.
    pub fn initial_state(&self) -> Result<SessionState, SessionError> {
        let cfg = &self.config;
        let init = cfg.initial;
        let front = init.front.unwrap_or(VideoId::A);
        let layout = match cfg.technique {
            Technique::SlideInVR => Layout::Vr(solver::reset_views_vr().with_front(front)),
            Technique::ToggleInVR => Layout::Vr(solver::set_views_360(front)),
            t => {
                let mut l = CanvasLayout::new(t, cfg.canvas)?.with_front(front)?;
                if let Some(d) = init.divider {
                    l = l.with_divider(d)?;
                }
                Layout::Canvas(l)
            }
        };
        Ok(SessionState {
            technique: cfg.technique,
            layout,
            clocks: [Clock::default(); 2],
            durations: cfg.durations,
            peek: PeekState::Off,
            peek_follows_gaze: false,
            head_pose: init.head_pose.unwrap_or(Direction::FRONT),
            frustum: cfg.frustum,
            time_now: 0.0,
        })
    }

    /// Advances playing clocks and the session time. Negative `dt` is
    /// treated as zero.
    pub fn tick(&self, state: &SessionState, dt: f64) -> SessionState {
        let mut next = state.clone();
        let dt = if dt > 0.0 { dt } else { 0.0 };
        if dt == 0.0 {
            return next;
        }
        next.time_now += dt;
        for (clock, &duration) in next.clocks.iter_mut().zip(&state.durations) {
            if !clock.playing {
                continue;
            }
            let pos = clock.position + dt;
            if pos < duration {
                clock.position = pos;
            } else if self.config.looping && duration > 0.0 {
                clock.position = pos.rem_euclid(duration);
            } else {
                clock.position = duration;
                clock.playing = false;
            }
        }
        next
    }

    fn unsupported(&self, cmd: &Command) -> SessionError {
        SessionError::Unsupported {
            technique: self.config.technique,
            command: cmd.keyword(),
        }
    }

    fn check_navigable(state: &SessionState, video: VideoId) -> Result<(), SessionError> {
        match state.current_video() {
            Some(current) if current != video => Err(SessionError::NotCurrent {
                current,
                requested: video,
            }),
            _ => Ok(()),
        }
    }

    fn roi_request(&self, state: &SessionState) -> Result<SolveRequest, SessionError> {
        let mut rois = [Direction::FRONT; 2];
        for v in VideoId::BOTH {
            let track = self.roi_track(v).ok_or(SessionError::MissingRoi(v))?;
            let t = state.clock(v).position.clamp(0.0, track.duration());
            rois[v.index()] = track.nearest_roi(t)?.center;
        }
        let mut req = SolveRequest::new(self.config.technique, rois[0], rois[1]).facing(state.head_pose);
        req.params = self.config.solver;
        Ok(req)
    }

    /// Applies one command. Rejected commands leave no trace: the caller
    /// keeps the previous state.
    pub fn apply(&self, state: &SessionState, cmd: &Command) -> Result<SessionState, SessionError> {
        let technique = self.config.technique;
        let mut next = state.clone();
        match *cmd {
            Command::Play(target) | Command::Pause(target) => {
                let playing = matches!(cmd, Command::Play(_));
                if let Target::Video(v) = target {
                    Self::check_navigable(state, v)?;
                }
                for v in target.videos() {
                    let clock = &mut next.clocks[v.index()];
                    // a finished clip stays paused unless it loops
                    clock.playing = playing && (clock.position < state.duration(v) || self.config.looping);
                }
            }
            Command::Seek(v, t) | Command::Jump(v, t) => {
                Self::check_navigable(state, v)?;
                let base = if matches!(cmd, Command::Jump(..)) {
                    state.clock(v).position
                } else {
                    0.0
                };
                let clock = &mut next.clocks[v.index()];
                clock.position = (base + t).clamp(0.0, state.duration(v));
                if clock.position >= state.duration(v) && !self.config.looping {
                    clock.playing = false;
                }
            }
            Command::Toggle => {
                next.layout = match (&state.layout, technique) {
                    (Layout::Vr(l), Technique::ToggleInVR) => Layout::Vr(l.swap()),
                    (Layout::Canvas(l), Technique::ToggleIn2D) => Layout::Canvas(l.toggle()?),
                    _ => return Err(self.unsupported(cmd)),
                };
            }
            Command::Swap => {
                next.layout = match (&state.layout, technique) {
                    (Layout::Vr(l), Technique::SlideInVR) => Layout::Vr(l.swap()),
                    (Layout::Canvas(l), Technique::SlideIn2D) => Layout::Canvas(l.swap()?),
                    _ => return Err(self.unsupported(cmd)),
                };
            }
            Command::ExtendVr { video, edge, az } => match (&state.layout, technique) {
                (Layout::Vr(l), Technique::SlideInVR) => next.layout = Layout::Vr(l.extend(video, edge, az)),
                _ => return Err(self.unsupported(cmd)),
            },
            Command::SlideVr { video, delta, commit } => match (&state.layout, technique) {
                (Layout::Vr(l), Technique::SlideInVR) => {
                    next.layout = Layout::Vr(l.slide(video, delta, commit))
                }
                _ => return Err(self.unsupported(cmd)),
            },
            Command::ExtendDivider(x) => match (&state.layout, technique) {
                (Layout::Canvas(l), Technique::SlideIn2D) => next.layout = Layout::Canvas(l.extend(x)?),
                _ => return Err(self.unsupported(cmd)),
            },
            Command::Drag { target, dyaw, dpitch } => {
                let Layout::Canvas(l) = &state.layout else {
                    return Err(self.unsupported(cmd));
                };
                let video = match (target, technique) {
                    (DragTarget::Shared, Technique::ToggleIn2D) => l.toggle_current(),
                    (DragTarget::Video(v), Technique::SlideIn2D | Technique::SideBySideIn2D) => v,
                    _ => {
                        return Err(SessionError::InvalidArgument(format!(
                            "drag target {target:?} under {technique}"
                        )))
                    }
                };
                let c = l.viewport(video).center;
                let center = Direction::new(c.yaw() + dyaw, (c.pitch() + dpitch).clamp(-90.0, 90.0));
                next.layout = Layout::Canvas(l.with_center(video, center));
            }
            Command::PeekOn(anchor) => {
                if technique == Technique::SideBySideIn2D {
                    return Err(self.unsupported(cmd));
                }
                let (peek, follows) = match (anchor, technique.is_vr()) {
                    (PeekAnchor::Gaze, true) => (PeekState::Gaze { anchor: state.head_pose }, true),
                    (PeekAnchor::Direction(d), true) => (PeekState::Gaze { anchor: d }, false),
                    (PeekAnchor::Pixel { x, y }, false) => {
                        let CanvasSize { width, height } = self.config.canvas;
                        if x >= width || y >= height {
                            return Err(SessionError::InvalidArgument(format!(
                                "peek pixel ({x}, {y}) outside the {width}x{height} canvas"
                            )));
                        }
                        (PeekState::Pixel { x, y }, false)
                    }
                    _ => {
                        return Err(SessionError::InvalidArgument(format!(
                            "peek anchor {anchor:?} under {technique}"
                        )))
                    }
                };
                next.peek = peek;
                next.peek_follows_gaze = follows;
            }
            Command::PeekOff => {
                next.peek = PeekState::Off;
                next.peek_follows_gaze = false;
            }
            Command::RoisSxs => {
                if !matches!(technique, Technique::SlideInVR | Technique::SlideIn2D | Technique::SideBySideIn2D) {
                    return Err(self.unsupported(cmd));
                }
                let req = self.roi_request(state)?;
                next.layout = match &state.layout {
                    Layout::Vr(l) => Layout::Vr(solver::solve_rois_sxs_vr(&req, l)?),
                    Layout::Canvas(l) => Layout::Canvas(solver::solve_rois_sxs_2d(&req, l)?),
                };
            }
            Command::RoisOverlay => {
                if !matches!(technique, Technique::SlideInVR | Technique::SlideIn2D) {
                    return Err(self.unsupported(cmd));
                }
                let req = self.roi_request(state)?;
                next.layout = match &state.layout {
                    Layout::Vr(l) => Layout::Vr(solver::solve_rois_overlay_vr(&req, l)?),
                    Layout::Canvas(l) => Layout::Canvas(solver::solve_rois_overlay_2d(&req, l)?),
                };
            }
            Command::ResetViews => {
                next.layout = match (&state.layout, technique) {
                    (Layout::Vr(_), Technique::SlideInVR) => Layout::Vr(solver::reset_views_vr()),
                    (Layout::Canvas(l), _) => Layout::Canvas(solver::reset_views_2d(l)),
                    _ => return Err(self.unsupported(cmd)),
                };
            }
            Command::SetViews360 => match (&state.layout, technique) {
                (Layout::Vr(l), Technique::SlideInVR) => {
                    next.layout = Layout::Vr(solver::set_views_360(l.front()))
                }
                _ => return Err(self.unsupported(cmd)),
            },
            Command::RestartVideos => {
                for clock in &mut next.clocks {
                    clock.position = 0.0;
                    clock.playing = true;
                }
                for v in VideoId::BOTH {
                    if state.duration(v) == 0.0 {
                        next.clocks[v.index()].playing = false;
                    }
                }
            }
            Command::SetHeadPose(d) => {
                if !technique.is_vr() {
                    return Err(self.unsupported(cmd));
                }
                next.head_pose = d;
                if state.peek_follows_gaze {
                    next.peek = PeekState::Gaze { anchor: d };
                }
            }
        }
        Ok(next)
    }

    /// Replays a script from the initial state, returning the state after
    /// every command (preceded by the initial state at time zero).
    pub fn run_script(&self, script: &Script) -> Result<Vec<(f64, SessionState)>, ReplayError> {
        let mut state = self.initial_state().map_err(|source| ReplayError {
            line: 0,
            command: String::new(),
            source,
        })?;
        let mut out = vec![(0.0, state.clone())];
        for entry in script.entries() {
            state = self.tick(&state, entry.at - state.time_now);
            state = self.apply(&state, &entry.command).map_err(|source| ReplayError {
                line: entry.line,
                command: entry.command.to_string(),
                source,
            })?;
            out.push((entry.at, state.clone()));
        }
        Ok(out)
    }

    /// State at session time `t`: every command stamped at or before `t`
    /// applied, then clocks advanced to `t`.
    pub fn state_at(&self, script: &Script, t: f64) -> Result<SessionState, ReplayError> {
        let mut state = self.initial_state().map_err(|source| ReplayError {
            line: 0,
            command: String::new(),
            source,
        })?;
        for entry in script.entries().iter().take_while(|e| e.at <= t) {
            state = self.tick(&state, entry.at - state.time_now);
            state = self.apply(&state, &entry.command).map_err(|source| ReplayError {
                line: entry.line,
                command: entry.command.to_string(),
                source,
            })?;
        }
        Ok(self.tick(&state, t - state.time_now))
    }
}

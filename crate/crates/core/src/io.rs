//! Media manifests, session configuration and render dispatch.
//!
//! Media is an image sequence plus a TOML manifest:
//!
//! ```toml
//! video = "A"
//! frames = "frames"            # directory, relative to the manifest
//! pattern = "frame_%04d.png"   # printf-style index, optional
//! first_index = 0              # optional
//! fps = 30.0
//! count = 900
//! ```
//!
//! A session config names the technique and both videos:
//!
//! ```toml
//! technique = "SlideIn2D"
//! looping = false                       # optional
//! roi_gap_threshold = 1.0               # optional
//!
//! [video.a]
//! manifest = "media/a/manifest.toml"    # relative to the config
//! roi = "media/a/roi.txt"               # optional
//!
//! [video.b]
//! manifest = "media/b/manifest.toml"
//!
//! [canvas]                              # optional, 2D techniques
//! width = 1896
//! height = 600
//!
//! [frustum]                             # optional, VR techniques
//! hfov = 104.0
//! vfov = 96.0
//!
//! [initial]                             # optional overrides
//! front = "B"
//! divider = 0.3
//! head_pose = { yaw = 0.0, pitch = 0.0 }
//!
//! [render]                              # optional output sizes
//! vr_view = [416, 384]
//! equirect = [720, 360]
//! minimap = 180
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compositor::{self, RenderError, RenderOptions, Sources};
use crate::display::{CanvasSize, Technique, VideoId};
use crate::frame::{png_dimensions, Frame, FrameError};
use crate::roi::{RoiTrack, TrackError, TrackParseOptions, DEFAULT_GAP_THRESHOLD};
use crate::session::{Engine, EngineConfig, Frustum, InitialLayout, SessionError, SessionState, DEFAULT_CANVAS};
use crate::solver::SolverParams;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("serialize: {0}")]
    Serialize(String),
    #[error("{path}: fps must be positive and finite, got {fps}")]
    Fps { path: PathBuf, fps: f64 },
    #[error("{path}: frame count must be positive")]
    FrameCount { path: PathBuf },
    #[error("{path}: unsupported frame pattern {pattern:?}")]
    FramePattern { path: PathBuf, pattern: String },
    #[error("missing frame {index}: {path}")]
    MissingFrame { index: u32, path: PathBuf },
    #[error("{path}: frame is {width}x{height}, equirectangular frames need width = 2 * height")]
    Aspect { path: PathBuf, width: u32, height: u32 },
    #[error("{path}: frame is {width}x{height}, sequence frames are {expected_width}x{expected_height}")]
    FrameSize {
        path: PathBuf,
        width: u32,
        height: u32,
        expected_width: u32,
        expected_height: u32,
    },
    #[error("{path}: manifest is for video {found}, config slot is {expected}")]
    VideoMismatch {
        path: PathBuf,
        expected: VideoId,
        found: VideoId,
    },
    #[error("time {t} outside [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },
    #[error("{path}: {source}")]
    Track { path: PathBuf, source: TrackError },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl IoError {
    pub(crate) fn read(path: &Path, source: std::io::Error) -> Self {
        IoError::Read {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn write(path: &Path, source: std::io::Error) -> Self {
        IoError::Write {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn default_pattern() -> String {
    "frame_%04d.png".to_string()
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

/// Expands a printf-style `%d` / `%0Nd` index in a file name pattern.
pub fn format_frame_name(pattern: &str, index: u32) -> Option<String> {
    let start = pattern.find('%')?;
    let rest = &pattern[start + 1..];
    let end = rest.find('d')?;
    let spec = &rest[..end];
    let width = if spec.is_empty() {
        0
    } else if spec.starts_with('0') || spec.chars().all(|c| c.is_ascii_digit()) {
        spec.parse::<usize>().ok()?
    } else {
        return None;
    };
    let zero_pad = spec.starts_with('0');
    let number = if zero_pad {
        format!("{index:0width$}")
    } else {
        format!("{index:width$}")
    };
    Some(format!("{}{}{}", &pattern[..start], number, &rest[end + 1..]))
}

/// An image sequence on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediaManifest {
    pub video: VideoId,
    pub frames: PathBuf,
    #[serde(default = "default_pattern")]
    pub pattern: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub first_index: u32,
    pub fps: f64,
    pub count: u32,
    #[serde(skip)]
    base_dir: PathBuf,
    #[serde(skip)]
    frame_size: Option<(u32, u32)>,
}

impl MediaManifest {
    pub fn new(video: VideoId, frames: impl Into<PathBuf>, fps: f64, count: u32) -> Self {
        MediaManifest {
            video,
            frames: frames.into(),
            pattern: default_pattern(),
            first_index: 0,
            fps,
            count,
            base_dir: PathBuf::new(),
            frame_size: None,
        }
    }

    /// Parses manifest text without touching the file system.
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Self::parse_at(text, Path::new("<manifest>"))
    }

    fn parse_at(text: &str, path: &Path) -> Result<Self, IoError> {
        let m: MediaManifest = toml::from_str(text).map_err(|e| IoError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if !(m.fps > 0.0 && m.fps.is_finite()) {
            return Err(IoError::Fps {
                path: path.to_path_buf(),
                fps: m.fps,
            });
        }
        if m.count == 0 {
            return Err(IoError::FrameCount { path: path.to_path_buf() });
        }
        if format_frame_name(&m.pattern, 0).is_none() {
            return Err(IoError::FramePattern {
                path: path.to_path_buf(),
                pattern: m.pattern.clone(),
            });
        }
        Ok(m)
    }

    /// Loads and fully validates a manifest: every frame must exist and all
    /// frames must share one equirectangular size.
    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::read(path, e))?;
        let mut m = Self::parse_at(&text, path)?;
        m.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        m.validate_frames()?;
        Ok(m)
    }

    fn validate_frames(&mut self) -> Result<(), IoError> {
        let mut size = None;
        for i in 0..self.count {
            let path = self.frame_path(i);
            if !path.is_file() {
                return Err(IoError::MissingFrame {
                    index: self.first_index + i,
                    path,
                });
            }
            let (w, h) = png_dimensions(&path)?;
            if w != 2 * h || h == 0 {
                return Err(IoError::Aspect {
                    path,
                    width: w,
                    height: h,
                });
            }
            match size {
                None => size = Some((w, h)),
                Some((ew, eh)) if (ew, eh) != (w, h) => {
                    return Err(IoError::FrameSize {
                        path,
                        width: w,
                        height: h,
                        expected_width: ew,
                        expected_height: eh,
                    })
                }
                _ => {}
            }
        }
        self.frame_size = size;
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        f64::from(self.count) / self.fps
    }

    /// Width and height shared by all frames, known after [`Self::load`].
    pub fn frame_size(&self) -> Option<(u32, u32)> {
        self.frame_size
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    /// File name of the `i`-th frame of the sequence (zero based).
    pub fn frame_name(&self, i: u32) -> String {
        format_frame_name(&self.pattern, self.first_index + i).unwrap_or_else(|| self.pattern.clone())
    }

    pub fn frame_dir(&self) -> PathBuf {
        self.base_dir.join(&self.frames)
    }

    pub fn frame_path(&self, i: u32) -> PathBuf {
        self.frame_dir().join(self.frame_name(i))
    }

    /// Sequence index shown at time `t`: `floor(t * fps)` clamped to the
    /// last frame.
    pub fn frame_index(&self, t: f64) -> Result<u32, IoError> {
        let duration = self.duration();
        if !(0.0..=duration).contains(&t) {
            return Err(IoError::TimeOutOfRange { t, duration });
        }
        // absorbs the rounding of t = k / fps computed elsewhere
        let i = (t * self.fps + 1e-9).floor();
        Ok((i as u32).min(self.count - 1))
    }

    pub fn frame_at(&self, t: f64) -> Result<Frame, IoError> {
        let i = self.frame_index(t)?;
        Ok(Frame::load_png(&self.frame_path(i))?)
    }

    pub fn to_toml(&self) -> Result<String, IoError> {
        toml::to_string(self).map_err(|e| IoError::Serialize(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        let text = self.to_toml()?;
        std::fs::write(path, text).map_err(|e| IoError::write(path, e))
    }
}

pub fn load_manifest(path: &Path) -> Result<MediaManifest, IoError> {
    MediaManifest::load(path)
}

pub fn frame_at(manifest: &MediaManifest, t: f64) -> Result<Frame, IoError> {
    manifest.frame_at(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoSource {
    pub manifest: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roi: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoPair {
    pub a: VideoSource,
    pub b: VideoSource,
}

impl VideoPair {
    pub fn get(&self, video: VideoId) -> &VideoSource {
        match video {
            VideoId::A => &self.a,
            VideoId::B => &self.b,
        }
    }

    pub fn get_mut(&mut self, video: VideoId) -> &mut VideoSource {
        match video {
            VideoId::A => &mut self.a,
            VideoId::B => &mut self.b,
        }
    }
}

/// Output sizes for the render modes that do not follow the canvas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderSizes {
    pub vr_view: (u32, u32),
    pub equirect: (u32, u32),
    /// Minimap diameter for the `minimap` mode.
    pub minimap: u32,
}

impl Default for RenderSizes {
    fn default() -> Self {
        RenderSizes {
            vr_view: (416, 384),
            equirect: (720, 360),
            minimap: 180,
        }
    }
}

fn default_canvas() -> CanvasSize {
    DEFAULT_CANVAS
}

fn default_gap() -> f64 {
    DEFAULT_GAP_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub technique: Technique,
    #[serde(default)]
    pub looping: bool,
    #[serde(default = "default_gap")]
    pub roi_gap_threshold: f64,
    pub video: VideoPair,
    #[serde(default = "default_canvas")]
    pub canvas: CanvasSize,
    #[serde(default)]
    pub frustum: Frustum,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub initial: InitialLayout,
    #[serde(default)]
    pub render: RenderSizes,
}

impl SessionConfig {
    pub fn new(technique: Technique, manifest_a: impl Into<PathBuf>, manifest_b: impl Into<PathBuf>) -> Self {
        SessionConfig {
            technique,
            looping: false,
            roi_gap_threshold: DEFAULT_GAP_THRESHOLD,
            video: VideoPair {
                a: VideoSource {
                    manifest: manifest_a.into(),
                    roi: None,
                },
                b: VideoSource {
                    manifest: manifest_b.into(),
                    roi: None,
                },
            },
            canvas: DEFAULT_CANVAS,
            frustum: Frustum::default(),
            solver: SolverParams::default(),
            initial: InitialLayout::default(),
            render: RenderSizes::default(),
        }
    }

    pub fn to_toml(&self) -> Result<String, IoError> {
        toml::to_string(self).map_err(|e| IoError::Serialize(e.to_string()))
    }

    fn validate(&self) -> Result<(), IoError> {
        let invalid = |m: String| Err(IoError::Invalid(m));
        if self.canvas.width == 0 || self.canvas.height == 0 {
            return invalid(format!("canvas {}x{}", self.canvas.width, self.canvas.height));
        }
        let f = self.frustum;
        if !(f.hfov > 0.0 && f.hfov < 180.0 && f.vfov > 0.0 && f.vfov < 180.0) {
            return invalid(format!("frustum {}x{}", f.hfov, f.vfov));
        }
        if !(self.roi_gap_threshold >= 0.0 && self.roi_gap_threshold.is_finite()) {
            return invalid(format!("roi_gap_threshold {}", self.roi_gap_threshold));
        }
        if let Some(d) = self.initial.divider {
            if !(0.0..=1.0).contains(&d) {
                return invalid(format!("initial divider {d} outside [0, 1]"));
            }
        }
        let s = self.solver;
        if !(s.overlay_span > 0.0 && s.overlay_span <= 360.0 && s.sxs_separation.is_finite()) {
            return invalid(format!("solver {s:?}"));
        }
        let r = self.render;
        if r.vr_view.0 == 0 || r.vr_view.1 == 0 || r.equirect.0 == 0 || r.equirect.1 == 0 || r.minimap == 0 {
            return invalid(format!("render sizes {r:?}"));
        }
        Ok(())
    }
}

impl FromStr for SessionConfig {
    type Err = IoError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_session_config(text)
    }
}

/// Parses and structurally validates a config, applying defaults. Files it
/// references are checked by [`LoadedSession::load`].
pub fn parse_session_config(text: &str) -> Result<SessionConfig, IoError> {
    let cfg: SessionConfig = toml::from_str(text).map_err(|e| IoError::Parse {
        path: PathBuf::from("<config>"),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// A config with its media and ROI tracks loaded and an engine built.
#[derive(Debug, Clone)]
pub struct LoadedSession {
    pub config: SessionConfig,
    pub base_dir: PathBuf,
    pub manifests: [MediaManifest; 2],
    pub engine: Engine,
}

impl LoadedSession {
    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::read(path, e))?;
        let config = parse_session_config(&text).map_err(|e| match e {
            IoError::Parse { message, .. } => IoError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_config(config, &base)
    }

    /// Resolves the config's relative paths against `base_dir`.
    pub fn from_config(config: SessionConfig, base_dir: &Path) -> Result<Self, IoError> {
        config.validate()?;
        let load = |video: VideoId| -> Result<(MediaManifest, Option<RoiTrack>), IoError> {
            let src = config.video.get(video);
            let path = base_dir.join(&src.manifest);
            let m = MediaManifest::load(&path)?;
            if m.video != video {
                return Err(IoError::VideoMismatch {
                    path,
                    expected: video,
                    found: m.video,
                });
            }
            let track = match &src.roi {
                Some(rel) => {
                    let p = base_dir.join(rel);
                    let text = std::fs::read_to_string(&p).map_err(|e| IoError::read(&p, e))?;
                    let mut opts = TrackParseOptions::new(video).with_duration(m.duration());
                    opts.gap_threshold = config.roi_gap_threshold;
                    let t = RoiTrack::parse(&text, &opts).map_err(|source| IoError::Track { path: p, source })?;
                    Some(t)
                }
                None => None,
            };
            Ok((m, track))
        };
        let (ma, ta) = load(VideoId::A)?;
        let (mb, tb) = load(VideoId::B)?;
        let mut ec = EngineConfig::new(config.technique, [ma.duration(), mb.duration()]).with_canvas(config.canvas);
        ec.frustum = config.frustum;
        ec.looping = config.looping;
        ec.solver = config.solver;
        ec.initial = config.initial;
        ec.rois = [ta.map(Arc::new), tb.map(Arc::new)];
        let engine = Engine::new(ec)?;
        Ok(LoadedSession {
            config,
            base_dir: base_dir.to_path_buf(),
            manifests: [ma, mb],
            engine,
        })
    }

    pub fn manifest(&self, video: VideoId) -> &MediaManifest {
        &self.manifests[video.index()]
    }

    pub fn track(&self, video: VideoId) -> Option<&RoiTrack> {
        self.engine.roi_track(video)
    }

    /// The frame each video shows at its clock position.
    pub fn frames_at(&self, state: &SessionState) -> Result<[Frame; 2], IoError> {
        let load = |v: VideoId| {
            let m = self.manifest(v);
            m.frame_at(state.clock(v).position.clamp(0.0, m.duration()))
        };
        Ok([load(VideoId::A)?, load(VideoId::B)?])
    }

    pub fn render(&self, state: &SessionState, mode: RenderMode, opts: &RenderOptions) -> Result<Frame, IoError> {
        let frames = self.frames_at(state)?;
        let src = Sources::new(&frames[0], &frames[1]).with_tracks(self.track(VideoId::A), self.track(VideoId::B));
        Ok(render_mode(state, &src, mode, &self.config.render, opts)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Canvas,
    VrView,
    Equirect,
    Minimap,
}

impl RenderMode {
    pub const ALL: [RenderMode; 4] = [RenderMode::Canvas, RenderMode::VrView, RenderMode::Equirect, RenderMode::Minimap];

    pub fn name(self) -> &'static str {
        match self {
            RenderMode::Canvas => "canvas",
            RenderMode::VrView => "vrview",
            RenderMode::Equirect => "equirect",
            RenderMode::Minimap => "minimap",
        }
    }
}

impl std::fmt::Display for RenderMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RenderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RenderMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown render mode {s:?}, expected canvas, vrview, equirect or minimap"))
    }
}

/// Renders one mode. `minimap` places the maps of A and B side by side.
pub fn render_mode(
    state: &SessionState,
    src: &Sources,
    mode: RenderMode,
    sizes: &RenderSizes,
    opts: &RenderOptions,
) -> Result<Frame, RenderError> {
    match mode {
        RenderMode::Canvas => compositor::render_canvas(state, src, opts),
        RenderMode::VrView => {
            let (w, h) = sizes.vr_view;
            compositor::render_vr_view(state, src, state.head_pose, w, h, opts)
        }
        RenderMode::Equirect => {
            let (w, h) = sizes.equirect;
            compositor::render_equirect_composite(state, src, w, h, opts)
        }
        RenderMode::Minimap => {
            let s = sizes.minimap;
            let mut out = Frame::new(2 * s, s);
            for v in VideoId::BOTH {
                let map = compositor::render_minimap(state, v, src.frames[v.index()], src.tracks[v.index()], s, opts)?;
                out.composite(&map, i64::from(s) * v.index() as i64, 0);
            }
            Ok(out)
        }
    }
}

/// Output file name for a render at session time `t`.
pub fn output_name(mode: RenderMode, t: f64) -> String {
    format!("{}_{}.png", mode.name(), (t * 1000.0).round() as i64)
}

/// Writes a self-contained static bundle for the web viewer:
/// `session.toml` and `session.json` (same config, paths rewritten),
/// `media/{a,b}/manifest.toml` with their frames, `media/{a,b}/roi.txt`
/// when present, and `initial_state.json`.
pub fn export_web(session: &LoadedSession, out_dir: &Path) -> Result<(), IoError> {
    let mut config = session.config.clone();
    for v in VideoId::BOTH {
        let name = v.to_string().to_lowercase();
        let media = out_dir.join("media").join(&name);
        let frames = media.join("frames");
        std::fs::create_dir_all(&frames).map_err(|e| IoError::write(&frames, e))?;
        let m = session.manifest(v);
        for i in 0..m.count {
            let from = m.frame_path(i);
            let to = frames.join(m.frame_name(i));
            std::fs::copy(&from, &to).map_err(|e| IoError::write(&to, e))?;
        }
        let mut exported = m.clone();
        exported.frames = PathBuf::from("frames");
        exported.save(&media.join("manifest.toml"))?;
        let slot = config.video.get_mut(v);
        slot.manifest = PathBuf::from(format!("media/{name}/manifest.toml"));
        if let Some(track) = session.track(v) {
            let p = media.join("roi.txt");
            std::fs::write(&p, crate::roi::format_roi_track(track)).map_err(|e| IoError::write(&p, e))?;
            slot.roi = Some(PathBuf::from(format!("media/{name}/roi.txt")));
        }
    }
    let write = |name: &str, text: String| {
        let p = out_dir.join(name);
        std::fs::write(&p, text).map_err(|e| IoError::write(&p, e))
    };
    write("session.toml", config.to_toml()?)?;
    write("session.json", to_json(&config)?)?;
    write("initial_state.json", to_json(&session.engine.initial_state()?)?)?;
    Ok(())
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    serde_json::to_string_pretty(value).map_err(|e| IoError::Serialize(e.to_string()))
}

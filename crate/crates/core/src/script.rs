//! Commands and the interaction-script text format.
//!
//! A script is a list of time-stamped commands, one per line:
//!
//! ```text
//! # comments and blank lines are ignored
//! AT 0     PLAY BOTH
//! AT 2.5   DRAG A 15 -5
//! AT 4     EXTEND_DIVIDER 0.3
//! AT 6     PEEK_ON PX 400 300
//! AT 6.5   PEEK_OFF
//! ```
//!
//! Times are seconds of session time and must not decrease. Keywords are
//! case-insensitive. The full command set:
//!
//! | command | arguments |
//! |---|---|
//! | `PLAY`, `PAUSE` | `A`, `B` or `BOTH` |
//! | `SEEK` | video, absolute seconds |
//! | `JUMP` | video, signed seconds |
//! | `TOGGLE`, `SWAP` | |
//! | `EXTEND_VR` | video, `START` or `END`, azimuth degrees |
//! | `SLIDE_VR` | video, delta degrees, `PREVIEW` or `COMMIT` |
//! | `EXTEND_DIVIDER` | fraction of canvas width |
//! | `DRAG` | `A`, `B` or `SHARED`, yaw delta, pitch delta |
//! | `PEEK_ON` | nothing or `GAZE` (follow head pose), `DIR` yaw pitch, `PX` x y |
//! | `PEEK_OFF` | |
//! | `ROIS_SXS`, `ROIS_OVERLAY` | |
//! | `RESET_VIEWS`, `SET_VIEWS_360`, `RESTART_VIDEOS` | |
//! | `HEAD_POSE` | yaw, pitch |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::display::{Edge, VideoId};
use crate::geometry::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    Video(VideoId),
    Both,
}

impl Target {
    pub fn videos(self) -> Vec<VideoId> {
        match self {
            Target::Video(v) => vec![v],
            Target::Both => VideoId::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DragTarget {
    Video(VideoId),
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PeekAnchor {
    /// Follow the head pose until peek is released.
    Gaze,
    Direction(Direction),
    Pixel { x: u32, y: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Command {
    Play(Target),
    Pause(Target),
    Seek(VideoId, f64),
    Jump(VideoId, f64),
    Toggle,
    Swap,
    ExtendVr { video: VideoId, edge: Edge, az: f64 },
    SlideVr { video: VideoId, delta: f64, commit: bool },
    ExtendDivider(f64),
    Drag { target: DragTarget, dyaw: f64, dpitch: f64 },
    PeekOn(PeekAnchor),
    PeekOff,
    RoisSxs,
    RoisOverlay,
    ResetViews,
    SetViews360,
    RestartVideos,
    SetHeadPose(Direction),
}

impl Command {
    pub fn keyword(&self) -> &'static str {
        match self {
            Command::Play(_) => "PLAY",
            Command::Pause(_) => "PAUSE",
            Command::Seek(..) => "SEEK",
            Command::Jump(..) => "JUMP",
            Command::Toggle => "TOGGLE",
            Command::Swap => "SWAP",
            Command::ExtendVr { .. } => "EXTEND_VR",
            Command::SlideVr { .. } => "SLIDE_VR",
            Command::ExtendDivider(_) => "EXTEND_DIVIDER",
            Command::Drag { .. } => "DRAG",
            Command::PeekOn(_) => "PEEK_ON",
            Command::PeekOff => "PEEK_OFF",
            Command::RoisSxs => "ROIS_SXS",
            Command::RoisOverlay => "ROIS_OVERLAY",
            Command::ResetViews => "RESET_VIEWS",
            Command::SetViews360 => "SET_VIEWS_360",
            Command::RestartVideos => "RESTART_VIDEOS",
            Command::SetHeadPose(_) => "HEAD_POSE",
        }
    }
}

fn target_str(t: Target) -> String {
    match t {
        Target::Video(v) => v.to_string(),
        Target::Both => "BOTH".into(),
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = self.keyword();
        match *self {
            Command::Play(t) | Command::Pause(t) => write!(f, "{kw} {}", target_str(t)),
            Command::Seek(v, x) | Command::Jump(v, x) => write!(f, "{kw} {v} {x}"),
            Command::ExtendVr { video, edge, az } => {
                let edge = match edge {
                    Edge::Start => "START",
                    Edge::End => "END",
                };
                write!(f, "{kw} {video} {edge} {az}")
            }
            Command::SlideVr { video, delta, commit } => {
                write!(f, "{kw} {video} {delta} {}", if commit { "COMMIT" } else { "PREVIEW" })
            }
            Command::ExtendDivider(x) => write!(f, "{kw} {x}"),
            Command::Drag { target, dyaw, dpitch } => {
                let t = match target {
                    DragTarget::Video(v) => v.to_string(),
                    DragTarget::Shared => "SHARED".into(),
                };
                write!(f, "{kw} {t} {dyaw} {dpitch}")
            }
            Command::PeekOn(PeekAnchor::Gaze) => write!(f, "{kw}"),
            Command::PeekOn(PeekAnchor::Direction(d)) => write!(f, "{kw} DIR {} {}", d.yaw(), d.pitch()),
            Command::PeekOn(PeekAnchor::Pixel { x, y }) => write!(f, "{kw} PX {x} {y}"),
            Command::SetHeadPose(d) => write!(f, "{kw} {} {}", d.yaw(), d.pitch()),
            _ => write!(f, "{kw}"),
        }
    }
}

struct Tokens<'a> {
    items: std::vec::IntoIter<&'a str>,
}

impl<'a> Tokens<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str, String> {
        self.items.next().ok_or_else(|| format!("missing {what}"))
    }

    fn number(&mut self, what: &str) -> Result<f64, String> {
        let tok = self.next(what)?;
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("{what}: `{tok}` is not a finite number")),
        }
    }

    fn pixel(&mut self, what: &str) -> Result<u32, String> {
        let tok = self.next(what)?;
        tok.parse().map_err(|_| format!("{what}: `{tok}` is not a pixel index"))
    }

    fn video(&mut self) -> Result<VideoId, String> {
        self.next("video")?.parse()
    }

    fn keyword(&mut self, what: &str) -> Result<String, String> {
        Ok(self.next(what)?.to_ascii_uppercase())
    }

    fn finish(mut self) -> Result<(), String> {
        match self.items.next() {
            None => Ok(()),
            Some(extra) => Err(format!("unexpected argument `{extra}`")),
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut toks = Tokens {
            items: s.split_whitespace().collect::<Vec<_>>().into_iter(),
        };
        let kw = toks.keyword("command")?;
        let cmd = match kw.as_str() {
            "PLAY" | "PAUSE" => {
                let t = match toks.keyword("target")?.as_str() {
                    "BOTH" => Target::Both,
                    other => Target::Video(other.parse()?),
                };
                if kw == "PLAY" {
                    Command::Play(t)
                } else {
                    Command::Pause(t)
                }
            }
            "SEEK" => Command::Seek(toks.video()?, toks.number("time")?),
            "JUMP" => Command::Jump(toks.video()?, toks.number("offset")?),
            "TOGGLE" => Command::Toggle,
            "SWAP" => Command::Swap,
            "EXTEND_VR" => {
                let video = toks.video()?;
                let edge = match toks.keyword("edge")?.as_str() {
                    "START" => Edge::Start,
                    "END" => Edge::End,
                    other => return Err(format!("unknown edge `{other}`")),
                };
                Command::ExtendVr {
                    video,
                    edge,
                    az: toks.number("azimuth")?,
                }
            }
            "SLIDE_VR" => {
                let video = toks.video()?;
                let delta = toks.number("delta")?;
                let commit = match toks.keyword("mode")?.as_str() {
                    "COMMIT" => true,
                    "PREVIEW" => false,
                    other => return Err(format!("unknown slide mode `{other}`")),
                };
                Command::SlideVr { video, delta, commit }
            }
            "EXTEND_DIVIDER" => Command::ExtendDivider(toks.number("divider")?),
            "DRAG" => {
                let target = match toks.keyword("target")?.as_str() {
                    "SHARED" => DragTarget::Shared,
                    other => DragTarget::Video(other.parse()?),
                };
                Command::Drag {
                    target,
                    dyaw: toks.number("yaw delta")?,
                    dpitch: toks.number("pitch delta")?,
                }
            }
            "PEEK_ON" => {
                let anchor = match toks.items.next().map(|t| t.to_ascii_uppercase()) {
                    None => PeekAnchor::Gaze,
                    Some(k) if k == "GAZE" => PeekAnchor::Gaze,
                    Some(k) if k == "DIR" => {
                        PeekAnchor::Direction(Direction::new(toks.number("yaw")?, toks.number("pitch")?))
                    }
                    Some(k) if k == "PX" => PeekAnchor::Pixel {
                        x: toks.pixel("x")?,
                        y: toks.pixel("y")?,
                    },
                    Some(k) => return Err(format!("unknown peek anchor `{k}`")),
                };
                Command::PeekOn(anchor)
            }
            "PEEK_OFF" => Command::PeekOff,
            "ROIS_SXS" => Command::RoisSxs,
            "ROIS_OVERLAY" => Command::RoisOverlay,
            "RESET_VIEWS" => Command::ResetViews,
            "SET_VIEWS_360" => Command::SetViews360,
            "RESTART_VIDEOS" => Command::RestartVideos,
            "HEAD_POSE" => Command::SetHeadPose(Direction::new(toks.number("yaw")?, toks.number("pitch")?)),
            other => return Err(format!("unknown command `{other}`")),
        };
        toks.finish()?;
        Ok(cmd)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScriptParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: time {at} is earlier than the previous command at {previous}")]
    OutOfOrder { line: usize, at: f64, previous: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptEntry {
    /// 1-based source line, 0 for entries built in code.
    pub line: usize,
    pub at: f64,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Script {
    entries: Vec<ScriptEntry>,
}

impl Script {
    pub fn new() -> Self {
        Script::default()
    }

    /// Appends a command; times must not decrease.
    pub fn push(&mut self, at: f64, command: Command) -> Result<(), ScriptParseError> {
        let line = self.entries.len() + 1;
        if let Some(prev) = self.entries.last() {
            if at < prev.at {
                return Err(ScriptParseError::OutOfOrder {
                    line,
                    at,
                    previous: prev.at,
                });
            }
        }
        if !(at >= 0.0 && at.is_finite()) {
            return Err(ScriptParseError::Syntax {
                line,
                message: format!("invalid time {at}"),
            });
        }
        self.entries.push(ScriptEntry { line: 0, at, command });
        Ok(())
    }

    pub fn entries(&self) -> &[ScriptEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn end_time(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.at)
    }

    pub fn parse(text: &str) -> Result<Self, ScriptParseError> {
        let mut entries: Vec<ScriptEntry> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| ScriptParseError::Syntax { line, message };
            let mut parts = content.splitn(3, char::is_whitespace);
            let at_kw = parts.next().unwrap_or("");
            if !at_kw.eq_ignore_ascii_case("AT") {
                return Err(syntax(format!("expected `AT`, found `{at_kw}`")));
            }
            let at_tok = parts.next().unwrap_or("").trim();
            let at: f64 = at_tok
                .parse()
                .ok()
                .filter(|t: &f64| t.is_finite() && *t >= 0.0)
                .ok_or_else(|| syntax(format!("invalid time `{at_tok}`")))?;
            let command: Command = parts.next().unwrap_or("").trim().parse().map_err(syntax)?;
            if let Some(prev) = entries.last() {
                if at < prev.at {
                    return Err(ScriptParseError::OutOfOrder {
                        line,
                        at,
                        previous: prev.at,
                    });
                }
            }
            entries.push(ScriptEntry { line, at, command });
        }
        Ok(Script { entries })
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "AT {} {}", e.at, e.command)?;
        }
        Ok(())
    }
}

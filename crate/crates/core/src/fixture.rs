//! Synthetic equirectangular test media.
//!
//! Two patterns are available: a solid tint (pink for A, blue for B) and a
//! direction-labeled checkerboard. Checkerboard cells are 30° in yaw and
//! pitch. The horizon carries the labels `F`, `R`, `BK` and `L` at yaw 0,
//! 90, 180 and −90, and each video's letter is repeated at ±45° pitch. An
//! optional yellow marker moves along a path over the clip and can be
//! written out as a matching ROI track.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::display::VideoId;
use crate::frame::{draw_text, lerp_color, text_width, Frame, Rgba, BLUE, PINK};
use crate::geometry::{angular_distance, dir_from_equirect, equirect_from_dir, Direction, EquirectCoord};
use crate::io::{IoError, MediaManifest};
use crate::roi::{format_roi_track, RoiSample, RoiTrack};

pub const MARKER_COLOR: Rgba = [250, 204, 21, 255];
const CELL_DEG: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    Solid,
    #[default]
    Checker,
}

/// Straight path in yaw and pitch, traversed linearly over the clip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerPath {
    pub from: Direction,
    pub to: Direction,
    /// Angular radius of the marker disk.
    pub radius: f64,
}

impl MarkerPath {
    pub fn at(&self, fraction: f64) -> Direction {
        let f = fraction.clamp(0.0, 1.0);
        Direction::new(
            self.from.yaw() + (self.to.yaw() - self.from.yaw()) * f,
            self.from.pitch() + (self.to.pitch() - self.from.pitch()) * f,
        )
    }
}

/// Marker paths used by the bundled demo media: A sweeps left to right
/// and up, B right to left and down.
pub fn demo_markers() -> [MarkerPath; 2] {
    [
        MarkerPath {
            from: Direction::new(-60.0, -5.0),
            to: Direction::new(60.0, 15.0),
            radius: 6.0,
        },
        MarkerPath {
            from: Direction::new(150.0, 10.0),
            to: Direction::new(30.0, -10.0),
            radius: 6.0,
        },
    ]
}

pub fn video_color(video: VideoId) -> Rgba {
    match video {
        VideoId::A => PINK,
        VideoId::B => BLUE,
    }
}

/// A solid frame in the video's tint.
pub fn solid_frame(video: VideoId, width: u32, height: u32) -> Frame {
    Frame::solid(width, height, video_color(video))
}

/// Direction-labeled checkerboard with an optional marker disk.
pub fn checker_frame(video: VideoId, width: u32, height: u32, marker: Option<(Direction, f64)>) -> Frame {
    let tint = video_color(video);
    let light = lerp_color(tint, [255, 255, 255, 255], 0.55);
    let dark = lerp_color(tint, [0, 0, 0, 255], 0.45);
    let mut f = Frame::new(width, height);
    for y in 0..height {
        for x in 0..width {
            let c = EquirectCoord::new(
                (f64::from(x) + 0.5) / f64::from(width),
                (f64::from(y) + 0.5) / f64::from(height),
            );
            let d = dir_from_equirect(c);
            let i = ((d.yaw() + 180.0) / CELL_DEG).floor() as i64;
            let j = ((d.pitch() + 90.0) / CELL_DEG).floor() as i64;
            let mut px = if (i + j).rem_euclid(2) == 0 { light } else { dark };
            if let Some((center, radius)) = marker {
                if angular_distance(d, center) <= radius {
                    px = MARKER_COLOR;
                }
            }
            f.put(x, y, px);
        }
    }
    let scale = i64::from((height / 96).max(1));
    let ink = [20, 20, 20, 255];
    let mut label = |text: &str, d: Direction| {
        let c = equirect_from_dir(d);
        let cx = (c.u() * f64::from(width)).round() as i64;
        let cy = (c.v() * f64::from(height)).round() as i64;
        draw_text(&mut f, text, cx - text_width(text, scale) / 2, cy - 7 * scale / 2, scale, ink);
    };
    for (text, yaw) in [("F", 0.0), ("R", 90.0), ("BK", -180.0), ("L", -90.0)] {
        label(text, Direction::new(yaw, 0.0));
    }
    let letter = video.to_string();
    for yaw in [-135.0, -45.0, 45.0, 135.0] {
        label(&letter, Direction::new(yaw, 45.0));
        label(&letter, Direction::new(yaw, -45.0));
    }
    f
}

/// Parameters of a generated image sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub video: VideoId,
    pub width: u32,
    pub fps: f64,
    pub count: u32,
    pub pattern: Pattern,
    pub marker: Option<MarkerPath>,
    /// Angular size of the ROI rectangle written with the marker track.
    pub roi_size: (f64, f64),
}

impl SequenceSpec {
    pub fn new(video: VideoId, width: u32, fps: f64, count: u32) -> Self {
        SequenceSpec {
            video,
            width,
            fps,
            count,
            pattern: Pattern::Checker,
            marker: None,
            roi_size: (20.0, 20.0),
        }
    }

    pub fn with_marker(mut self, marker: MarkerPath) -> Self {
        self.marker = Some(marker);
        self
    }

    pub fn with_pattern(mut self, pattern: Pattern) -> Self {
        self.pattern = pattern;
        self
    }

    pub fn height(&self) -> u32 {
        self.width / 2
    }

    pub fn duration(&self) -> f64 {
        f64::from(self.count) / self.fps
    }

    /// Frame shown at index `i`; the marker sits where it is at `i / fps`.
    pub fn frame(&self, i: u32) -> Frame {
        let t = f64::from(i) / self.fps;
        match self.pattern {
            Pattern::Solid => solid_frame(self.video, self.width, self.height()),
            Pattern::Checker => {
                let marker = self.marker.map(|m| (m.at(t / self.duration()), m.radius));
                checker_frame(self.video, self.width, self.height(), marker)
            }
        }
    }

    /// ROI track following the marker, sampled at every frame time and at
    /// the clip end.
    pub fn marker_track(&self) -> Option<RoiTrack> {
        let m = self.marker?;
        let d = self.duration();
        let samples = (0..=self.count)
            .map(|i| {
                let t = f64::from(i) / self.fps;
                RoiSample::new(t.min(d), m.at(t / d), self.roi_size.0, self.roi_size.1)
            })
            .collect::<Result<Vec<_>, _>>()
            .ok()?;
        RoiTrack::new(self.video, vec![samples], d).ok()
    }
}

/// Files produced by [`write_sequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct WrittenSequence {
    pub manifest: PathBuf,
    pub roi: Option<PathBuf>,
}

/// Writes `frames/frame_NNNN.png`, `manifest.toml` and, when the spec has a
/// marker, `roi.txt` into `dir`.
pub fn write_sequence(dir: &Path, spec: &SequenceSpec) -> Result<WrittenSequence, IoError> {
    let frames = dir.join("frames");
    std::fs::create_dir_all(&frames).map_err(|e| IoError::write(&frames, e))?;
    let manifest = MediaManifest::new(spec.video, "frames", spec.fps, spec.count);
    for i in 0..spec.count {
        let path = frames.join(manifest.frame_name(i));
        spec.frame(i).save_png(&path)?;
    }
    let manifest_path = dir.join("manifest.toml");
    manifest.save(&manifest_path)?;
    let roi = match spec.marker_track() {
        Some(track) => {
            let path = dir.join("roi.txt");
            std::fs::write(&path, format_roi_track(&track)).map_err(|e| IoError::write(&path, e))?;
            Some(path)
        }
        None => None,
    };
    Ok(WrittenSequence {
        manifest: manifest_path,
        roi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checker_is_equirect_and_tinted() {
        let f = checker_frame(VideoId::B, 128, 64, None);
        assert!(f.is_equirect());
        let light = lerp_color(BLUE, [255, 255, 255, 255], 0.55);
        let dark = lerp_color(BLUE, [0, 0, 0, 255], 0.45);
        // yaw −175.8, pitch −88.6: cell (0, 0)
        assert_eq!(f.get(1, 63), light);
        // yaw −146.7: cell (1, 0)
        assert_eq!(f.get(12, 63), dark);
    }

    #[test]
    fn marker_is_drawn_where_the_track_says() {
        let spec = SequenceSpec::new(VideoId::A, 360, 1.0, 10).with_marker(MarkerPath {
            from: Direction::new(-60.0, 0.0),
            to: Direction::new(60.0, 20.0),
            radius: 6.0,
        });
        let track = spec.marker_track().unwrap();
        assert_eq!(track.samples().count(), 11);
        let s = track.nearest_roi(5.0).unwrap();
        assert_eq!((s.center.yaw(), s.center.pitch()), (0.0, 10.0));
        let f = spec.frame(5);
        let c = equirect_from_dir(Direction::new(3.0, 12.0));
        let (x, y) = ((c.u() * 360.0) as u32, (c.v() * 180.0) as u32);
        assert_eq!(f.get(x, y), MARKER_COLOR);
    }

    #[test]
    fn solid_pattern() {
        let spec = SequenceSpec::new(VideoId::A, 64, 1.0, 2).with_pattern(Pattern::Solid);
        assert_eq!(spec.frame(1), Frame::solid(64, 32, PINK));
    }
}

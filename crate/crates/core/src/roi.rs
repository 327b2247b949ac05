//! Time-stamped region-of-interest tracks and their minimap trajectories.
//!
//! # Track file format
//!
//! One sample per line, five whitespace-separated numbers:
//!
//! ```text
//! # t_seconds  yaw_deg  pitch_deg  width_deg  height_deg
//! 0.0   12.5  -3.0  20  15
//! 0.5   13.0  -3.1  20  15
//!
//! 4.0   40.0   0.0  18  14
//! ```
//!
//! `#` starts a comment (whole line or trailing). A blank line ends the
//! current run. A run also ends when consecutive samples are further apart
//! than the gap threshold (1 s by default). Times must strictly increase
//! across the whole file. Yaw is wrapped into `[-180, 180)` and pitch
//! clamped to `[-90, 90]`; widths and heights must lie in `(0, 180)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::display::VideoId;
use crate::geometry::{planet_project, slerp_dir, Direction, PlanetMapConfig};

pub const DEFAULT_GAP_THRESHOLD: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: time {t} does not follow previous sample at {previous}")]
    NonMonotonic { line: usize, t: f64, previous: f64 },
    #[error("sample at {t} s lies beyond the track duration {duration} s")]
    BeyondDuration { t: f64, duration: f64 },
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("time {t} s is outside [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },
    #[error("track has no samples")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoiSample {
    pub t: f64,
    pub center: Direction,
    pub width: f64,
    pub height: f64,
}

impl RoiSample {
    pub fn new(t: f64, center: Direction, width: f64, height: f64) -> Result<Self, TrackError> {
        let finite = [t, center.yaw(), center.pitch(), width, height]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(TrackError::InvalidSample("non-finite value".into()));
        }
        if t < 0.0 {
            return Err(TrackError::InvalidSample(format!("negative time {t}")));
        }
        for (name, v) in [("width", width), ("height", height)] {
            if !(v > 0.0 && v < 180.0) {
                return Err(TrackError::InvalidSample(format!("{name} {v} outside (0, 180)")));
            }
        }
        Ok(RoiSample {
            t,
            center,
            width,
            height,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackParseOptions {
    pub video: VideoId,
    /// Defaults to the time of the last sample.
    pub duration: Option<f64>,
    pub gap_threshold: f64,
}

impl TrackParseOptions {
    pub fn new(video: VideoId) -> Self {
        TrackParseOptions {
            video,
            duration: None,
            gap_threshold: DEFAULT_GAP_THRESHOLD,
        }
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = Some(duration);
        self
    }
}

/// A trajectory made of runs of samples. Gaps between runs are periods
/// where the region of interest is not visible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoiTrack {
    video: VideoId,
    runs: Vec<Vec<RoiSample>>,
    duration: f64,
    gap_threshold: f64,
}

impl RoiTrack {
    /// Validates and orders runs. Runs may arrive in any order but must
    /// not overlap in time.
    pub fn new(video: VideoId, runs: Vec<Vec<RoiSample>>, duration: f64) -> Result<Self, TrackError> {
        let mut runs: Vec<_> = runs.into_iter().filter(|r| !r.is_empty()).collect();
        runs.sort_by(|a, b| a[0].t.total_cmp(&b[0].t));
        let mut previous: Option<f64> = None;
        for sample in runs.iter().flatten() {
            if let Some(p) = previous {
                if sample.t <= p {
                    return Err(TrackError::NonMonotonic {
                        line: 0,
                        t: sample.t,
                        previous: p,
                    });
                }
            }
            if sample.t > duration {
                return Err(TrackError::BeyondDuration { t: sample.t, duration });
            }
            previous = Some(sample.t);
        }
        Ok(RoiTrack {
            video,
            runs,
            duration,
            gap_threshold: DEFAULT_GAP_THRESHOLD,
        })
    }

    pub fn with_gap_threshold(mut self, gap_threshold: f64) -> Self {
        self.gap_threshold = gap_threshold;
        self
    }

    pub fn video(&self) -> VideoId {
        self.video
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn runs(&self) -> &[Vec<RoiSample>] {
        &self.runs
    }

    pub fn samples(&self) -> impl Iterator<Item = &RoiSample> {
        self.runs.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn parse(text: &str, opts: &TrackParseOptions) -> Result<Self, TrackError> {
        parse_roi_track(text, opts)
    }

    /// Joins runs that are separated only by an explicit break into one
    /// drawable segment. Real time gaps stay as breaks.
    pub fn merge_segments(&self) -> RoiTrack {
        let mut merged: Vec<Vec<RoiSample>> = Vec::new();
        for run in &self.runs {
            match merged.last_mut() {
                Some(last) if run[0].t - last[last.len() - 1].t <= self.gap_threshold => {
                    last.extend_from_slice(run)
                }
                _ => merged.push(run.clone()),
            }
        }
        RoiTrack {
            runs: merged,
            ..self.clone()
        }
    }

    fn check_time(&self, t: f64) -> Result<(), TrackError> {
        if t >= 0.0 && t <= self.duration {
            Ok(())
        } else {
            Err(TrackError::TimeOutOfRange {
                t,
                duration: self.duration,
            })
        }
    }

    /// Interpolated sample at `t`, or `None` when the region is not
    /// tracked at that time.
    pub fn roi_at(&self, t: f64) -> Result<Option<RoiSample>, TrackError> {
        self.check_time(t)?;
        let Some(run) = self.runs.iter().find(|r| r[0].t <= t && t <= r[r.len() - 1].t) else {
            return Ok(None);
        };
        let next = run.partition_point(|s| s.t <= t);
        if next == 0 {
            return Ok(Some(run[0]));
        }
        let lo = run[next - 1];
        if lo.t == t || next == run.len() {
            return Ok(Some(lo));
        }
        let hi = run[next];
        let f = (t - lo.t) / (hi.t - lo.t);
        // antipodal neighbors cannot be interpolated; hold the earlier one
        let center = slerp_dir(lo.center, hi.center, f).unwrap_or(lo.center);
        Ok(Some(RoiSample {
            t,
            center,
            width: lo.width + f * (hi.width - lo.width),
            height: lo.height + f * (hi.height - lo.height),
        }))
    }

    /// Sample at `t`, falling back to the closest run boundary when the
    /// region is untracked. Ties go to the earlier boundary.
    pub fn nearest_roi(&self, t: f64) -> Result<RoiSample, TrackError> {
        if self.is_empty() {
            return Err(TrackError::Empty);
        }
        if let Some(s) = self.roi_at(t)? {
            return Ok(s);
        }
        let mut best: Option<RoiSample> = None;
        for run in &self.runs {
            for s in [run[0], run[run.len() - 1]] {
                let better = match best {
                    None => true,
                    Some(b) => (t - s.t).abs() < (t - b.t).abs(),
                };
                if better {
                    best = Some(s);
                }
            }
        }
        best.ok_or(TrackError::Empty)
    }

    /// Minimap polylines with a red-to-green time gradient; one polyline
    /// per run.
    pub fn trajectory_2d(&self, cfg: &PlanetMapConfig) -> Vec<Vec<TrajectoryPoint>> {
        self.runs
            .iter()
            .map(|run| {
                run.iter()
                    .map(|s| TrajectoryPoint {
                        map_pos: planet_project(s.center, cfg),
                        time: TimeEncoding::Color(time_fraction(s.t, self.duration)),
                    })
                    .collect()
            })
            .collect()
    }

    /// Minimap polylines where time is a depth offset from `t_now`
    /// (negative for the past).
    pub fn trajectory_vr(&self, t_now: f64, cfg: &PlanetMapConfig) -> Vec<Vec<TrajectoryPoint>> {
        self.runs
            .iter()
            .map(|run| {
                run.iter()
                    .map(|s| TrajectoryPoint {
                        map_pos: planet_project(s.center, cfg),
                        time: TimeEncoding::Depth(s.t - t_now),
                    })
                    .collect()
            })
            .collect()
    }
}

fn time_fraction(t: f64, duration: f64) -> f64 {
    if duration > 0.0 {
        (t / duration).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TimeEncoding {
    /// Fraction of the clip in `[0, 1]`, drawn red (0) to green (1).
    Color(f64),
    /// Seconds relative to the current playback time.
    Depth(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub map_pos: (f64, f64),
    pub time: TimeEncoding,
}

/// Linear red-to-green ramp in 8-bit RGB.
pub fn gradient_color(fraction: f64) -> [u8; 3] {
    let f = fraction.clamp(0.0, 1.0);
    [(255.0 * (1.0 - f)).round() as u8, (255.0 * f).round() as u8, 0]
}

pub fn parse_roi_track(text: &str, opts: &TrackParseOptions) -> Result<RoiTrack, TrackError> {
    let mut runs: Vec<Vec<RoiSample>> = Vec::new();
    let mut current: Vec<RoiSample> = Vec::new();
    let mut previous: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            // a blank line breaks the run; a comment-only line does not
            if raw.trim().is_empty() && !current.is_empty() {
                runs.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(TrackError::Parse {
                line,
                message: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let mut values = [0.0f64; 5];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| TrackError::Parse {
                line,
                message: format!("`{field}` is not a number"),
            })?;
        }
        let [t, yaw, pitch, width, height] = values;
        let sample = RoiSample::new(t, Direction::new(yaw, pitch), width, height).map_err(|e| {
            TrackError::Parse {
                line,
                message: e.to_string(),
            }
        })?;
        if let Some(p) = previous {
            if t <= p {
                return Err(TrackError::NonMonotonic { line, t, previous: p });
            }
            if t - p > opts.gap_threshold && !current.is_empty() {
                runs.push(std::mem::take(&mut current));
            }
        }
        previous = Some(t);
        current.push(sample);
    }
    if !current.is_empty() {
        runs.push(current);
    }

    let duration = opts.duration.unwrap_or(previous.unwrap_or(0.0));
    Ok(RoiTrack::new(opts.video, runs, duration)?.with_gap_threshold(opts.gap_threshold))
}

/// Writes a track in the line format accepted by [`parse_roi_track`].
pub fn format_roi_track(track: &RoiTrack) -> String {
    let mut out = String::from("# t yaw pitch width height\n");
    for (i, run) in track.runs().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for s in run {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                s.t,
                s.center.yaw(),
                s.center.pitch(),
                s.width,
                s.height
            ));
        }
    }
    out
}

pub fn merge_segments(track: &RoiTrack) -> RoiTrack {
    track.merge_segments()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> TrackParseOptions {
        TrackParseOptions::new(VideoId::A)
    }

    fn sample(t: f64, yaw: f64) -> RoiSample {
        RoiSample::new(t, Direction::new(yaw, 0.0), 10.0, 10.0).unwrap()
    }

    #[test]
    fn parse_empty() {
        let track = parse_roi_track("# nothing here\n\n", &opts()).unwrap();
        assert!(track.is_empty());
        assert_eq!(track.duration(), 0.0);
    }

    #[test]
    fn parse_splits_on_time_gap() {
        let text = "0 0 0 10 10\n1 1 0 10 10\n6 2 0 10 10\n7 3 0 10 10\n";
        let track = parse_roi_track(text, &opts()).unwrap();
        assert_eq!(track.runs().len(), 2);
        assert_eq!(track.duration(), 7.0);
    }

    #[test]
    fn parse_splits_on_blank_line() {
        let text = "0 0 0 10 10\n0.5 1 0 10 10\n\n1.0 2 0 10 10\n";
        let track = parse_roi_track(text, &opts()).unwrap();
        assert_eq!(track.runs().len(), 2);
        // a comment-only line keeps the run going
        let text = "0 0 0 10 10\n# note\n0.5 1 0 10 10\n";
        assert_eq!(parse_roi_track(text, &opts()).unwrap().runs().len(), 1);
    }

    #[test]
    fn parse_wraps_yaw() {
        let track = parse_roi_track("0 200 0 10 10  # trailing comment\n", &opts()).unwrap();
        assert_eq!(track.runs()[0][0].center.yaw(), -160.0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_roi_track("0 0 0 10 10\n1 x 0 10 10\n", &opts()).unwrap_err();
        assert!(matches!(err, TrackError::Parse { line: 2, .. }));
        let err = parse_roi_track("0 0 0 10\n", &opts()).unwrap_err();
        assert!(matches!(err, TrackError::Parse { line: 1, .. }));
        let err = parse_roi_track("0 0 0 10 10\n# c\n0 0 0 10 10\n", &opts()).unwrap_err();
        assert!(matches!(err, TrackError::NonMonotonic { line: 3, .. }));
        let err = parse_roi_track("0 0 0 0 10\n", &opts()).unwrap_err();
        assert!(matches!(err, TrackError::Parse { line: 1, .. }));
        let err = parse_roi_track("5 0 0 10 10\n", &opts().with_duration(4.0)).unwrap_err();
        assert!(matches!(err, TrackError::BeyondDuration { .. }));
        let err = parse_roi_track("0 nan 0 10 10\n", &opts()).unwrap_err();
        assert!(matches!(err, TrackError::Parse { .. }));
    }

    #[test]
    fn merge_examples() {
        let single = RoiTrack::new(VideoId::A, vec![vec![sample(0.0, 0.0), sample(1.0, 1.0)]], 2.0).unwrap();
        assert_eq!(single.merge_segments(), single);

        let gapped = RoiTrack::new(
            VideoId::A,
            vec![
                vec![sample(12.0, 5.0), sample(20.0, 6.0)],
                vec![sample(0.0, 0.0), sample(10.0, 1.0)],
            ],
            30.0,
        )
        .unwrap();
        let merged = gapped.merge_segments();
        assert_eq!(merged.runs().len(), 2);
        assert_eq!(merged.roi_at(11.0).unwrap(), None);
        assert_eq!(merged.merge_segments(), merged);

        let touching = RoiTrack::new(
            VideoId::A,
            vec![vec![sample(0.0, 0.0), sample(1.0, 1.0)], vec![sample(1.5, 2.0)]],
            2.0,
        )
        .unwrap();
        assert_eq!(touching.merge_segments().runs().len(), 1);
    }

    #[test]
    fn overlapping_runs_rejected() {
        let err = RoiTrack::new(
            VideoId::B,
            vec![vec![sample(0.0, 0.0), sample(5.0, 0.0)], vec![sample(3.0, 0.0)]],
            10.0,
        );
        assert!(matches!(err, Err(TrackError::NonMonotonic { .. })));
    }

    #[test]
    fn roi_at_examples() {
        let track = RoiTrack::new(
            VideoId::A,
            vec![
                vec![sample(0.0, 0.0), sample(2.0, 90.0)],
                vec![sample(12.0, 10.0), sample(20.0, 20.0)],
            ],
            30.0,
        )
        .unwrap();
        assert_eq!(track.roi_at(0.0).unwrap(), Some(sample(0.0, 0.0)));
        assert_eq!(track.roi_at(2.0).unwrap(), Some(sample(2.0, 90.0)));
        let mid = track.roi_at(1.0).unwrap().unwrap();
        assert!((mid.center.yaw() - 45.0).abs() < 1e-12);
        assert_eq!(track.roi_at(5.0).unwrap(), None);
        assert_eq!(track.roi_at(25.0).unwrap(), None);
        assert!(matches!(track.roi_at(31.0), Err(TrackError::TimeOutOfRange { .. })));
        assert!(matches!(track.roi_at(-0.1), Err(TrackError::TimeOutOfRange { .. })));
    }

    #[test]
    fn nearest_roi_examples() {
        let track = RoiTrack::new(
            VideoId::A,
            vec![
                vec![sample(2.0, 0.0), sample(10.0, 1.0)],
                vec![sample(12.0, 2.0), sample(20.0, 3.0)],
            ],
            30.0,
        )
        .unwrap();
        assert_eq!(track.nearest_roi(11.0).unwrap().t, 10.0);
        assert_eq!(track.nearest_roi(11.5).unwrap().t, 12.0);
        assert_eq!(track.nearest_roi(0.0).unwrap().t, 2.0);
        assert_eq!(track.nearest_roi(29.0).unwrap().t, 20.0);
        assert_eq!(track.nearest_roi(5.0).unwrap(), track.roi_at(5.0).unwrap().unwrap());
        let empty = RoiTrack::new(VideoId::A, vec![], 30.0).unwrap();
        assert_eq!(empty.nearest_roi(1.0), Err(TrackError::Empty));
    }

    #[test]
    fn trajectory_2d_gradient() {
        let cfg = PlanetMapConfig::nadir(100.0).unwrap();
        let track = RoiTrack::new(
            VideoId::A,
            vec![vec![sample(0.0, 0.0), sample(15.0, 0.0), sample(30.0, 0.0)]],
            30.0,
        )
        .unwrap();
        let lines = track.trajectory_2d(&cfg);
        assert_eq!(lines.len(), 1);
        let pts = &lines[0];
        assert_eq!(pts[0].time, TimeEncoding::Color(0.0));
        assert_eq!(pts[2].time, TimeEncoding::Color(1.0));
        assert!(pts.iter().all(|p| p.map_pos == pts[0].map_pos));
        assert_eq!(gradient_color(0.0), [255, 0, 0]);
        assert_eq!(gradient_color(1.0), [0, 255, 0]);
        assert_eq!(gradient_color(0.5), [128, 128, 0]);

        let one = RoiTrack::new(VideoId::A, vec![vec![sample(6.0, 0.0)]], 30.0).unwrap();
        assert_eq!(one.trajectory_2d(&cfg)[0][0].time, TimeEncoding::Color(0.2));
    }

    #[test]
    fn trajectory_vr_depth() {
        let cfg = PlanetMapConfig::nadir(100.0).unwrap();
        let track = RoiTrack::new(
            VideoId::A,
            vec![vec![sample(1.0, 0.0), sample(4.0, 10.0)], vec![sample(9.0, 20.0)]],
            10.0,
        )
        .unwrap();
        let now = track.trajectory_vr(4.0, &cfg);
        assert_eq!(now[0][1].time, TimeEncoding::Depth(0.0));
        assert_eq!(now[0][0].time, TimeEncoding::Depth(-3.0));
        assert_eq!(now[1][0].time, TimeEncoding::Depth(5.0));
    }

    #[test]
    fn format_round_trips() {
        let text = "0 10 -5 20 15\n0.5 11.25 -5 20 15\n\n0.75 12 -5 21 16\n";
        let track = parse_roi_track(text, &opts()).unwrap();
        let again = parse_roi_track(&format_roi_track(&track), &opts()).unwrap();
        assert_eq!(again, track);
    }
}

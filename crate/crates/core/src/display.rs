//! Layered display areas for the five comparison techniques.
//!
//! In VR each video owns a spherical lune bounded by two meridians (its
//! start and end edges). On a 2D canvas each video owns a rectangular
//! perspective view. Both models answer the same question: which video is
//! visible in a given direction or pixel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    angular_distance, equirect_from_dir, normalize_azimuth, normalize_yaw, viewport_ray, Direction,
    EquirectCoord, GeometryError, Viewport,
};

/// Radius of the circular VR peek region, in degrees.
pub const VR_PEEK_RADIUS_DEG: f64 = 7.5;
/// Side of the square canvas peek block, in pixels.
pub const CANVAS_PEEK_SIZE_PX: u32 = 300;
/// Fixed vertical field of view of every 2D view.
pub const CANVAS_VFOV_DEG: f64 = 40.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("{operation} is not available for {technique}")]
    WrongTechnique {
        operation: &'static str,
        technique: Technique,
    },
    #[error("pixel ({x}, {y}) is outside the {width}x{height} canvas")]
    OutsideCanvas { x: u32, y: u32, width: u32, height: u32 },
    #[error("canvas size {0}x{1} must be non-zero")]
    EmptyCanvas(u32, u32),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VideoId {
    A,
    B,
}

impl VideoId {
    pub const BOTH: [VideoId; 2] = [VideoId::A, VideoId::B];

    pub fn other(self) -> VideoId {
        match self {
            VideoId::A => VideoId::B,
            VideoId::B => VideoId::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            VideoId::A => 0,
            VideoId::B => 1,
        }
    }
}

impl fmt::Display for VideoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VideoId::A => "A",
            VideoId::B => "B",
        })
    }
}

impl FromStr for VideoId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(VideoId::A),
            "B" | "b" => Ok(VideoId::B),
            _ => Err(format!("unknown video `{s}` (expected A or B)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Technique {
    SlideInVR,
    ToggleInVR,
    SlideIn2D,
    ToggleIn2D,
    SideBySideIn2D,
}

impl Technique {
    pub const ALL: [Technique; 5] = [
        Technique::SlideInVR,
        Technique::ToggleInVR,
        Technique::SlideIn2D,
        Technique::ToggleIn2D,
        Technique::SideBySideIn2D,
    ];

    pub fn is_vr(self) -> bool {
        matches!(self, Technique::SlideInVR | Technique::ToggleInVR)
    }

    pub fn is_toggle(self) -> bool {
        matches!(self, Technique::ToggleInVR | Technique::ToggleIn2D)
    }

    pub fn name(self) -> &'static str {
        match self {
            Technique::SlideInVR => "SlideInVR",
            Technique::ToggleInVR => "ToggleInVR",
            Technique::SlideIn2D => "SlideIn2D",
            Technique::ToggleIn2D => "ToggleIn2D",
            Technique::SideBySideIn2D => "SideBySideIn2D",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Technique::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown technique `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Edge {
    Start,
    End,
}

/// A spherical-lune display area.
///
/// The visible span runs from `start_az` to `end_az` in increasing azimuth,
/// start inclusive and end exclusive. Equal edges mean the whole sphere.
/// `yaw_offset` rotates the video content shown inside the lune.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LuneArea {
    start_az: f64,
    end_az: f64,
    yaw_offset: f64,
}

impl LuneArea {
    pub fn new(start_az: f64, end_az: f64, yaw_offset: f64) -> Self {
        LuneArea {
            start_az: normalize_azimuth(start_az),
            end_az: normalize_azimuth(end_az),
            yaw_offset: normalize_yaw(yaw_offset),
        }
    }

    /// Whole-sphere area with both edges at `edge_az`.
    pub fn full(edge_az: f64, yaw_offset: f64) -> Self {
        LuneArea::new(edge_az, edge_az, yaw_offset)
    }

    pub fn start_az(&self) -> f64 {
        self.start_az
    }

    pub fn end_az(&self) -> f64 {
        self.end_az
    }

    pub fn yaw_offset(&self) -> f64 {
        self.yaw_offset
    }

    pub fn edge(&self, edge: Edge) -> f64 {
        match edge {
            Edge::Start => self.start_az,
            Edge::End => self.end_az,
        }
    }

    pub fn is_full(&self) -> bool {
        self.start_az == self.end_az
    }

    /// Visible span in degrees, in `(0, 360]`.
    pub fn span(&self) -> f64 {
        if self.is_full() {
            360.0
        } else {
            normalize_azimuth(self.end_az - self.start_az)
        }
    }

    pub fn fraction(&self) -> f64 {
        self.span() / 360.0
    }

    pub fn contains(&self, az: f64) -> bool {
        self.is_full() || normalize_azimuth(az - self.start_az) < self.span()
    }

    pub fn with_edge(self, edge: Edge, az: f64) -> Self {
        match edge {
            Edge::Start => LuneArea::new(az, self.end_az, self.yaw_offset),
            Edge::End => LuneArea::new(self.start_az, az, self.yaw_offset),
        }
    }

    /// Rotates edges and content together about the polar axis.
    pub fn rotated(self, delta: f64) -> Self {
        if delta == 0.0 {
            return self;
        }
        LuneArea::new(
            self.start_az + delta,
            self.end_az + delta,
            self.yaw_offset + delta,
        )
    }

    /// Direction in the source video shown at world direction `d`.
    pub fn content_direction(&self, d: Direction) -> Direction {
        d.rotated_yaw(-self.yaw_offset)
    }

    /// World direction at which source content `c` is displayed.
    pub fn world_direction(&self, c: Direction) -> Direction {
        c.rotated_yaw(self.yaw_offset)
    }
}

pub fn lune_contains(area: &LuneArea, az: f64) -> bool {
    area.contains(az)
}

pub fn lune_fraction(area: &LuneArea) -> f64 {
    area.fraction()
}

/// Slide preview: shown while the user drags, applied on release.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendingSlide {
    pub video: VideoId,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VrLayout {
    areas: [LuneArea; 2],
    front: VideoId,
    pending_slide: Option<PendingSlide>,
}

impl VrLayout {
    pub fn new(area_a: LuneArea, area_b: LuneArea, front: VideoId) -> Self {
        VrLayout {
            areas: [area_a, area_b],
            front,
            pending_slide: None,
        }
    }

    pub fn area(&self, video: VideoId) -> &LuneArea {
        &self.areas[video.index()]
    }

    pub fn front(&self) -> VideoId {
        self.front
    }

    pub fn back(&self) -> VideoId {
        self.front.other()
    }

    pub fn pending_slide(&self) -> Option<PendingSlide> {
        self.pending_slide
    }

    pub fn with_front(mut self, front: VideoId) -> Self {
        self.front = front;
        self
    }

    pub fn extend(mut self, video: VideoId, edge: Edge, new_az: f64) -> Self {
        let area = self.areas[video.index()];
        if area.edge(edge) == normalize_azimuth(new_az) {
            return self;
        }
        self.areas[video.index()] = area.with_edge(edge, new_az);
        self
    }

    pub fn slide(mut self, video: VideoId, delta_az: f64, commit: bool) -> Self {
        if commit {
            self.areas[video.index()] = self.areas[video.index()].rotated(delta_az);
            self.pending_slide = None;
        } else {
            self.pending_slide = Some(PendingSlide {
                video,
                delta: delta_az,
            });
        }
        self
    }

    pub fn swap(mut self) -> Self {
        self.front = self.front.other();
        self
    }

    /// Which video is visible in world direction `d`, or `None` for the
    /// unrendered complement.
    pub fn visible_layer(&self, d: Direction, peek: &PeekState) -> Option<VideoId> {
        let az = d.yaw();
        if let PeekState::Gaze { anchor } = peek {
            let other = self.back();
            if angular_distance(d, *anchor) <= VR_PEEK_RADIUS_DEG && self.area(other).contains(az) {
                return Some(other);
            }
        }
        [self.front, self.back()]
            .into_iter()
            .find(|v| self.area(*v).contains(az))
    }
}

pub fn extend_vr(layout: VrLayout, video: VideoId, edge: Edge, new_az: f64) -> VrLayout {
    layout.extend(video, edge, new_az)
}

pub fn slide_vr(layout: VrLayout, video: VideoId, delta_az: f64, commit: bool) -> VrLayout {
    layout.slide(video, delta_az, commit)
}

pub fn visible_layer_vr(layout: &VrLayout, d: Direction, peek: &PeekState) -> Option<VideoId> {
    layout.visible_layer(d, peek)
}

/// Temporary reveal of the hidden video.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum PeekState {
    #[default]
    Off,
    /// VR: a disk of [`VR_PEEK_RADIUS_DEG`] around a gaze direction.
    Gaze { anchor: Direction },
    /// 2D: a [`CANVAS_PEEK_SIZE_PX`] square block centered on a pixel.
    Pixel { x: u32, y: u32 },
}

impl PeekState {
    pub fn is_active(&self) -> bool {
        !matches!(self, PeekState::Off)
    }

    /// Whether canvas pixel `(x, y)` is inside a pixel peek block.
    pub fn covers_pixel(&self, x: u32, y: u32) -> bool {
        match *self {
            PeekState::Pixel { x: ax, y: ay } => {
                let half = i64::from(CANVAS_PEEK_SIZE_PX / 2);
                let (dx, dy) = (i64::from(x) - i64::from(ax), i64::from(y) - i64::from(ay));
                (-half..half).contains(&dx) && (-half..half).contains(&dy)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanvasSize {
    pub width: u32,
    pub height: u32,
}

impl CanvasSize {
    pub fn aspect(&self) -> f64 {
        f64::from(self.width) / f64::from(self.height)
    }
}

/// Horizontal pixel span `[x0, x1)` of a display area; areas always cover
/// the full canvas height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaSpan {
    pub x0: f64,
    pub x1: f64,
}

impl AreaSpan {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn center_x(&self) -> f64 {
        (self.x0 + self.x1) / 2.0
    }
}

/// Layout of the three 2D techniques.
///
/// SlideIn2D anchors the front layer at the left edge and lets the divider
/// move its right edge; the back layer always spans the whole canvas.
/// SideBySideIn2D splits the canvas into equal halves. ToggleIn2D shows one
/// video at a time through a view shared by both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanvasLayout {
    technique: Technique,
    canvas: CanvasSize,
    viewports: [Viewport; 2],
    front: VideoId,
    divider_x: f64,
    toggle_current: VideoId,
}

impl CanvasLayout {
    pub fn new(technique: Technique, canvas: CanvasSize) -> Result<Self, LayoutError> {
        if technique.is_vr() {
            return Err(LayoutError::WrongTechnique {
                operation: "canvas layout",
                technique,
            });
        }
        if canvas.width == 0 || canvas.height == 0 {
            return Err(LayoutError::EmptyCanvas(canvas.width, canvas.height));
        }
        let vp = Viewport::from_aspect(Direction::FRONT, CANVAS_VFOV_DEG, canvas.aspect())?;
        let mut layout = CanvasLayout {
            technique,
            canvas,
            viewports: [vp, vp],
            front: VideoId::A,
            divider_x: 0.5,
            toggle_current: VideoId::A,
        };
        layout.refit_fovs()?;
        Ok(layout)
    }

    pub fn technique(&self) -> Technique {
        self.technique
    }

    pub fn canvas(&self) -> CanvasSize {
        self.canvas
    }

    pub fn viewport(&self, video: VideoId) -> &Viewport {
        &self.viewports[video.index()]
    }

    pub fn front(&self) -> VideoId {
        self.front
    }

    pub fn back(&self) -> VideoId {
        self.front.other()
    }

    pub fn divider_x(&self) -> f64 {
        self.divider_x
    }

    pub fn toggle_current(&self) -> VideoId {
        self.toggle_current
    }

    /// The video whose content is normally shown (ignoring peek) for a
    /// toggle layout, or the front layer otherwise.
    pub fn primary(&self) -> VideoId {
        match self.technique {
            Technique::ToggleIn2D => self.toggle_current,
            _ => self.front,
        }
    }

    /// Pixel span of a video's display area.
    pub fn area(&self, video: VideoId) -> AreaSpan {
        let w = f64::from(self.canvas.width);
        match self.technique {
            Technique::SlideIn2D if video == self.front => AreaSpan {
                x0: 0.0,
                x1: self.divider_x * w,
            },
            Technique::SideBySideIn2D => match video {
                VideoId::A => AreaSpan { x0: 0.0, x1: w / 2.0 },
                VideoId::B => AreaSpan { x0: w / 2.0, x1: w },
            },
            _ => AreaSpan { x0: 0.0, x1: w },
        }
    }

    fn refit_fovs(&mut self) -> Result<(), LayoutError> {
        let h = f64::from(self.canvas.height);
        for video in VideoId::BOTH {
            // a collapsed area keeps a one-pixel-wide frustum
            let width = self.area(video).width().max(1.0);
            let center = self.viewports[video.index()].center;
            self.viewports[video.index()] = Viewport::from_aspect(center, CANVAS_VFOV_DEG, width / h)?;
        }
        Ok(())
    }

    fn require(&self, operation: &'static str, allowed: &[Technique]) -> Result<(), LayoutError> {
        if allowed.contains(&self.technique) {
            Ok(())
        } else {
            Err(LayoutError::WrongTechnique {
                operation,
                technique: self.technique,
            })
        }
    }

    /// Moves the SlideIn2D divider; only the front layer's view changes.
    pub fn extend(mut self, new_divider_x: f64) -> Result<Self, LayoutError> {
        self.require("extend", &[Technique::SlideIn2D])?;
        self.divider_x = if new_divider_x.is_nan() {
            self.divider_x
        } else {
            new_divider_x.clamp(0.0, 1.0)
        };
        self.refit_fovs()?;
        Ok(self)
    }

    pub fn swap(mut self) -> Result<Self, LayoutError> {
        self.require("swap", &[Technique::SlideIn2D])?;
        self.front = self.front.other();
        self.refit_fovs()?;
        Ok(self)
    }

    pub fn toggle(mut self) -> Result<Self, LayoutError> {
        self.require("toggle", &[Technique::ToggleIn2D])?;
        self.toggle_current = self.toggle_current.other();
        Ok(self)
    }

    /// Points a video's view at `center`. ToggleIn2D views are shared, so
    /// both move together.
    pub fn with_center(mut self, video: VideoId, center: Direction) -> Self {
        if self.technique == Technique::ToggleIn2D {
            for vp in &mut self.viewports {
                vp.center = center;
            }
        } else {
            self.viewports[video.index()].center = center;
        }
        self
    }

    pub fn with_viewport(mut self, video: VideoId, vp: Viewport) -> Self {
        self = self.with_center(video, vp.center);
        self
    }

    pub fn with_divider(mut self, divider_x: f64) -> Result<Self, LayoutError> {
        if self.technique == Technique::SlideIn2D {
            self = self.extend(divider_x)?;
        }
        Ok(self)
    }

    pub fn with_front(mut self, front: VideoId) -> Result<Self, LayoutError> {
        match self.technique {
            Technique::SlideIn2D => {
                self.front = front;
                self.refit_fovs()?;
            }
            Technique::ToggleIn2D => self.toggle_current = front,
            _ => {}
        }
        Ok(self)
    }

    /// Video that owns canvas pixel `(x, y)` and where it samples.
    pub fn visible_source(&self, x: u32, y: u32, peek: &PeekState) -> Result<(VideoId, EquirectCoord), LayoutError> {
        let video = self.pixel_owner(x, y, peek)?;
        Ok((video, self.sample_coord(video, x, y)))
    }

    /// Owner of a pixel without computing the sample location.
    pub fn pixel_owner(&self, x: u32, y: u32, peek: &PeekState) -> Result<VideoId, LayoutError> {
        let CanvasSize { width, height } = self.canvas;
        if x >= width || y >= height {
            return Err(LayoutError::OutsideCanvas { x, y, width, height });
        }
        let peekable = matches!(self.technique, Technique::SlideIn2D | Technique::ToggleIn2D);
        if peekable && peek.covers_pixel(x, y) {
            return Ok(self.primary().other());
        }
        let cx = f64::from(x) + 0.5;
        Ok(match self.technique {
            Technique::SlideIn2D => {
                if cx < self.divider_x * f64::from(width) {
                    self.front
                } else {
                    self.back()
                }
            }
            Technique::SideBySideIn2D => {
                if cx < f64::from(width) / 2.0 {
                    VideoId::A
                } else {
                    VideoId::B
                }
            }
            _ => self.toggle_current,
        })
    }

    /// NDC of a pixel center inside a video's display area.
    pub fn pixel_to_ndc(&self, video: VideoId, x: u32, y: u32) -> (f64, f64) {
        let span = self.area(video);
        let nx = (f64::from(x) + 0.5 - span.x0) / span.width().max(1e-12) * 2.0 - 1.0;
        let ny = 1.0 - (f64::from(y) + 0.5) / f64::from(self.canvas.height) * 2.0;
        (nx, ny)
    }

    /// Canvas position of an NDC point inside a video's display area.
    pub fn ndc_to_canvas(&self, video: VideoId, ndc: (f64, f64)) -> (f64, f64) {
        let span = self.area(video);
        (
            span.x0 + (ndc.0 + 1.0) / 2.0 * span.width(),
            (1.0 - ndc.1) / 2.0 * f64::from(self.canvas.height),
        )
    }

    pub fn sample_coord(&self, video: VideoId, x: u32, y: u32) -> EquirectCoord {
        let (nx, ny) = self.pixel_to_ndc(video, x, y);
        equirect_from_dir(viewport_ray(self.viewport(video), nx, ny))
    }
}

pub fn extend_2d(layout: CanvasLayout, new_divider_x: f64) -> Result<CanvasLayout, LayoutError> {
    layout.extend(new_divider_x)
}

pub fn swap_vr(layout: VrLayout) -> VrLayout {
    layout.swap()
}

pub fn visible_source_2d(
    layout: &CanvasLayout,
    pixel: (u32, u32),
    peek: &PeekState,
) -> Result<(VideoId, EquirectCoord), LayoutError> {
    layout.visible_source(pixel.0, pixel.1, peek)
}

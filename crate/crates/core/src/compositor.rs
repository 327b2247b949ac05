//! Headless rasterization of session states.
//!
//! Every render is a pure function of the state, the source frames and the
//! options. With [`Sampling::Nearest`] the output is bit-exact, which is
//! what the golden images rely on.
//!
//! The VR slide selector is drawn as a thin band at +10° pitch for A and
//! −10° for B across the video's lune. Its look is not normative.

use thiserror::Error;

use crate::display::{CanvasLayout, LayoutError, PeekState, Technique, VideoId, VrLayout, VR_PEEK_RADIUS_DEG};
use crate::frame::{
    blend_over, draw_text, text_width, with_alpha, Frame, Rgba, Sampling, BLUE, COMPLEMENT_GRAY, PINK, TRANSPARENT,
    WHITE,
};
use crate::geometry::{
    equirect_from_dir, dir_from_equirect, planet_project, planet_unproject, Direction, EquirectCoord, GeometryError,
    PlanetMapConfig, Pole, RayCaster, Viewport,
};
use crate::roi::{gradient_color, RoiTrack, TimeEncoding};
use crate::session::{Layout, SessionState};

pub const ROI_MARKER: Rgba = [250, 204, 21, 255];
const PANEL_BG: Rgba = [0, 0, 0, 170];
const BAND_PITCH_DEG: f64 = 10.0;
const BAND_HALF_WIDTH_DEG: f64 = 1.0;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("{operation} needs a {expected} technique, session uses {technique}")]
    WrongTechnique {
        operation: &'static str,
        expected: &'static str,
        technique: Technique,
    },
    #[error("source frame {video} is {width}x{height}, not equirectangular")]
    NotEquirect { video: VideoId, width: u32, height: u32 },
    #[error("output size {0}x{1} is empty")]
    EmptyOutput(u32, u32),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub sampling: Sampling,
    /// Lune edges in VR, area borders and the divider in 2D.
    pub draw_edges: bool,
    /// Minimaps, labels, peek indicators, slide selector and the depth
    /// panel.
    pub overlays: bool,
    pub edge_width_front: f64,
    pub edge_width_back: f64,
    pub video_colors: [Rgba; 2],
    pub complement_fill: Rgba,
    pub slide_preview_tint: [Rgba; 2],
    pub map_pole: Pole,
    pub map_up_yaw: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            sampling: Sampling::Nearest,
            draw_edges: true,
            overlays: true,
            edge_width_front: 1.0,
            edge_width_back: 0.5,
            video_colors: [PINK, BLUE],
            complement_fill: COMPLEMENT_GRAY,
            slide_preview_tint: [with_alpha(PINK, 0.35), with_alpha(BLUE, 0.35)],
            map_pole: Pole::Nadir,
            map_up_yaw: 0.0,
        }
    }
}

impl RenderOptions {
    /// Video content only: no edges and no overlays.
    pub fn plain() -> Self {
        RenderOptions {
            draw_edges: false,
            overlays: false,
            ..RenderOptions::default()
        }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    fn color(&self, video: VideoId) -> Rgba {
        self.video_colors[video.index()]
    }

    fn map_config(&self, radius_px: f64) -> Result<PlanetMapConfig, GeometryError> {
        PlanetMapConfig::new(self.map_pole, self.map_up_yaw, radius_px)
    }
}

/// Source frames for both videos and their optional ROI tracks.
#[derive(Debug, Clone, Copy)]
pub struct Sources<'a> {
    pub frames: [&'a Frame; 2],
    pub tracks: [Option<&'a RoiTrack>; 2],
}

impl<'a> Sources<'a> {
    pub fn new(frame_a: &'a Frame, frame_b: &'a Frame) -> Self {
        Sources {
            frames: [frame_a, frame_b],
            tracks: [None, None],
        }
    }

    pub fn with_tracks(mut self, a: Option<&'a RoiTrack>, b: Option<&'a RoiTrack>) -> Self {
        self.tracks = [a, b];
        self
    }

    fn frame(&self, video: VideoId) -> &'a Frame {
        self.frames[video.index()]
    }

    fn track(&self, video: VideoId) -> Option<&'a RoiTrack> {
        self.tracks[video.index()]
    }

    fn check(&self) -> Result<(), RenderError> {
        for v in VideoId::BOTH {
            let f = self.frame(v);
            if !f.is_equirect() {
                return Err(RenderError::NotEquirect {
                    video: v,
                    width: f.width(),
                    height: f.height(),
                });
            }
        }
        Ok(())
    }
}

fn canvas_layout<'s>(state: &'s SessionState, operation: &'static str) -> Result<&'s CanvasLayout, RenderError> {
    match &state.layout {
        Layout::Canvas(l) if !state.technique.is_vr() => Ok(l),
        _ => Err(RenderError::WrongTechnique {
            operation,
            expected: "2D",
            technique: state.technique,
        }),
    }
}

fn vr_layout<'s>(state: &'s SessionState, operation: &'static str) -> Result<&'s VrLayout, RenderError> {
    match &state.layout {
        Layout::Vr(l) if state.technique.is_vr() => Ok(l),
        _ => Err(RenderError::WrongTechnique {
            operation,
            expected: "VR",
            technique: state.technique,
        }),
    }
}

fn check_size(width: u32, height: u32) -> Result<(), RenderError> {
    if width == 0 || height == 0 {
        return Err(RenderError::EmptyOutput(width, height));
    }
    Ok(())
}

/// Renders a 2D technique at the layout's canvas size.
pub fn render_canvas(state: &SessionState, src: &Sources, opts: &RenderOptions) -> Result<Frame, RenderError> {
    let layout = canvas_layout(state, "render_canvas")?;
    src.check()?;
    let canvas = layout.canvas();
    let (w, h) = (canvas.width, canvas.height);
    check_size(w, h)?;

    // column owners without peek; peek is a rectangle checked per pixel
    let owners: Vec<VideoId> = (0..w)
        .map(|x| layout.pixel_owner(x, 0, &PeekState::Off))
        .collect::<Result<_, _>>()?;
    let peek_video = layout.primary().other();
    let peekable = matches!(layout.technique(), Technique::SlideIn2D | Technique::ToggleIn2D);
    let casters = VideoId::BOTH.map(|v| RayCaster::new(layout.viewport(v)));
    let ndc_x: [Vec<f64>; 2] = VideoId::BOTH.map(|v| (0..w).map(|x| layout.pixel_to_ndc(v, x, 0).0).collect());

    let mut out = Frame::new(w, h);
    for y in 0..h {
        let ny = layout.pixel_to_ndc(VideoId::A, 0, y).1;
        for x in 0..w {
            let mut video = owners[x as usize];
            if peekable && state.peek.covers_pixel(x, y) {
                video = peek_video;
            }
            let d = casters[video.index()].ray(ndc_x[video.index()][x as usize], ny);
            out.put(x, y, src.frame(video).sample(equirect_from_dir(d), opts.sampling));
        }
    }

    if opts.draw_edges {
        draw_canvas_edges(&mut out, layout, opts);
    }
    if opts.overlays {
        draw_canvas_overlays(&mut out, state, layout, src, opts)?;
    }
    Ok(out)
}

fn draw_canvas_edges(out: &mut Frame, layout: &CanvasLayout, opts: &RenderOptions) {
    let (w, h) = (i64::from(out.width()), i64::from(out.height()));
    match layout.technique() {
        Technique::SlideIn2D => {
            let x = (layout.divider_x() * w as f64).round() as i64;
            out.fill_rect(x - 1, 0, 2, h, opts.color(layout.front()));
        }
        Technique::SideBySideIn2D => {
            out.fill_rect(w / 2 - 1, 0, 1, h, opts.color(VideoId::A));
            out.fill_rect(w / 2, 0, 1, h, opts.color(VideoId::B));
        }
        _ => {
            let c = opts.color(layout.toggle_current());
            out.stroke_rect(0, 0, w, h, c);
            out.stroke_rect(1, 1, w - 2, h - 2, c);
        }
    }
}

fn draw_canvas_overlays(
    out: &mut Frame,
    state: &SessionState,
    layout: &CanvasLayout,
    src: &Sources,
    opts: &RenderOptions,
) -> Result<(), RenderError> {
    let h = f64::from(out.height());
    let size = (h * 0.3).floor().max(16.0) as u32;
    let margin = (h * 0.02).round().max(2.0) as i64;
    let scale = (h / 200.0).floor().max(1.0) as i64;

    let shown: Vec<VideoId> = match layout.technique() {
        Technique::ToggleIn2D => vec![layout.toggle_current()],
        Technique::SlideIn2D => vec![layout.front(), layout.back()],
        _ => VideoId::BOTH.to_vec(),
    };
    for (i, &video) in shown.iter().enumerate() {
        let span = layout.area(video);
        let left = i == 0;
        let x0 = span.x0.round() as i64;
        let x1 = span.x1.round() as i64;
        if x1 - x0 < i64::from(size) + 2 * margin {
            continue;
        }
        draw_text(out, &video.to_string(), x0 + margin, margin, scale * 2, opts.color(video));
        let map = render_minimap(state, video, src.frame(video), src.track(video), size, opts)?;
        let mx = if left { x0 + margin } else { x1 - margin - i64::from(size) };
        out.composite(&map, mx, i64::from(out.height()) - margin - i64::from(size));
    }

    if let PeekState::Pixel { .. } = state.peek {
        let label = "PEEKING";
        let s = scale * 2;
        let tw = text_width(label, s);
        let x = i64::from(out.width()) - margin - tw;
        out.fill_rect(x - s * 2, margin - s * 2, tw + s * 4, 7 * s + s * 4, PANEL_BG);
        draw_text(out, label, x, margin, s, WHITE);
    }
    Ok(())
}

/// Renders what a headset with the session frustum sees at `head_pose`.
pub fn render_vr_view(
    state: &SessionState,
    src: &Sources,
    head_pose: Direction,
    width: u32,
    height: u32,
    opts: &RenderOptions,
) -> Result<Frame, RenderError> {
    let layout = vr_layout(state, "render_vr_view")?;
    src.check()?;
    check_size(width, height)?;
    let vp = Viewport::new(head_pose, state.frustum.vfov, state.frustum.hfov)?;
    let caster = RayCaster::new(&vp);
    let mut out = Frame::new(width, height);
    let decorate = opts.draw_edges || opts.overlays;
    for y in 0..height {
        let ny = 1.0 - (f64::from(y) + 0.5) / f64::from(height) * 2.0;
        for x in 0..width {
            let nx = (f64::from(x) + 0.5) / f64::from(width) * 2.0 - 1.0;
            let d = caster.ray(nx, ny);
            let mut c = shade_vr(layout, &state.peek, src, d, opts);
            if decorate {
                c = decorate_vr(c, state, layout, d, opts);
            }
            out.put(x, y, c);
        }
    }
    Ok(out)
}

/// Flattened whole-sphere view of a VR state.
pub fn render_equirect_composite(
    state: &SessionState,
    src: &Sources,
    width: u32,
    height: u32,
    opts: &RenderOptions,
) -> Result<Frame, RenderError> {
    let layout = vr_layout(state, "render_equirect_composite")?;
    src.check()?;
    check_size(width, height)?;
    let mut out = Frame::new(width, height);
    let decorate = opts.draw_edges || opts.overlays;
    for y in 0..height {
        let v = (f64::from(y) + 0.5) / f64::from(height);
        for x in 0..width {
            let u = (f64::from(x) + 0.5) / f64::from(width);
            let d = dir_from_equirect(EquirectCoord::new(u, v));
            let mut c = shade_vr(layout, &state.peek, src, d, opts);
            if decorate {
                c = decorate_vr(c, state, layout, d, opts);
            }
            out.put(x, y, c);
        }
    }
    if opts.overlays {
        draw_depth_panel(&mut out, state, src, opts);
    }
    Ok(out)
}

fn shade_vr(layout: &VrLayout, peek: &PeekState, src: &Sources, d: Direction, opts: &RenderOptions) -> Rgba {
    match layout.visible_layer(d, peek) {
        Some(video) => {
            let content = layout.area(video).content_direction(d);
            src.frame(video).sample(equirect_from_dir(content), opts.sampling)
        }
        None => opts.complement_fill,
    }
}

/// Angular distance from `d` to the meridian half-plane at azimuth `az`.
fn meridian_distance(d: Direction, az: f64) -> f64 {
    let delta = (d.yaw() - az).to_radians();
    if delta.cos() >= 0.0 {
        let s = (d.pitch().to_radians().cos() * delta.sin().abs()).min(1.0);
        s.asin().to_degrees()
    } else {
        90.0 - d.pitch().abs()
    }
}

fn decorate_vr(base: Rgba, state: &SessionState, layout: &VrLayout, d: Direction, opts: &RenderOptions) -> Rgba {
    let mut c = base;
    if opts.overlays {
        if let Some(p) = layout.pending_slide() {
            if layout.area(p.video).rotated(p.delta).contains(d.yaw()) {
                c = blend_over(c, opts.slide_preview_tint[p.video.index()]);
            }
        }
        if state.technique == Technique::SlideInVR {
            for video in VideoId::BOTH {
                let pitch = match video {
                    VideoId::A => BAND_PITCH_DEG,
                    VideoId::B => -BAND_PITCH_DEG,
                };
                if (d.pitch() - pitch).abs() <= BAND_HALF_WIDTH_DEG && layout.area(video).contains(d.yaw()) {
                    c = blend_over(c, with_alpha(opts.color(video), 0.6));
                }
            }
        }
    }
    if opts.draw_edges {
        // back edges first so the front layer's edges stay on top
        for video in [layout.back(), layout.front()] {
            let area = layout.area(video);
            if area.is_full() {
                continue;
            }
            let width = if video == layout.front() {
                opts.edge_width_front
            } else {
                opts.edge_width_back
            };
            for az in [area.start_az(), area.end_az()] {
                if meridian_distance(d, az) <= width / 2.0 {
                    c = opts.color(video);
                }
            }
        }
    }
    if opts.overlays {
        if let PeekState::Gaze { anchor } = state.peek {
            let r = crate::geometry::angular_distance(d, anchor);
            if r > VR_PEEK_RADIUS_DEG && r <= VR_PEEK_RADIUS_DEG + 0.4 {
                c = WHITE;
            }
        }
    }
    c
}

// Inset panel with one progress bar per video and a time-vs-yaw plot of the
// ROI trajectories centered on each video's playback position.
fn draw_depth_panel(out: &mut Frame, state: &SessionState, src: &Sources, opts: &RenderOptions) {
    let (w, h) = (i64::from(out.width()), i64::from(out.height()));
    let pw = (w * 2 / 5).max(20);
    let ph = (h / 4).max(16);
    let margin = (h / 60).max(2);
    let (px, py) = (margin, h - margin - ph);
    out.fill_rect(px, py, pw, ph, PANEL_BG);
    let bar_h = (ph / 12).max(2);
    let inner_w = pw - 2 * margin;
    for video in VideoId::BOTH {
        let by = py + margin + video.index() as i64 * (bar_h + margin / 2 + 1);
        out.fill_rect(px + margin, by, inner_w, bar_h, [90, 90, 90, 255]);
        let d = state.duration(video);
        let f = if d > 0.0 { state.clock(video).position / d } else { 0.0 };
        let filled = (f * inner_w as f64).round() as i64;
        out.fill_rect(px + margin, by, filled, bar_h, opts.color(video));
    }
    let gy0 = py + margin + 2 * (bar_h + margin / 2 + 1) + margin / 2;
    let gh = (py + ph - margin) - gy0;
    if gh < 4 {
        return;
    }
    let gx_mid = px + pw / 2;
    out.fill_rect(gx_mid, gy0, 1, gh, with_alpha(WHITE, 0.5));
    let span = state.durations[0].max(state.durations[1]).max(1e-9);
    let to_px = |depth: f64, yaw: f64| {
        let x = gx_mid as f64 + depth / span * (inner_w as f64 / 2.0);
        let y = gy0 as f64 + (180.0 - yaw) / 360.0 * (gh - 1) as f64;
        (x.round() as i64, y.round() as i64)
    };
    let cfg = PlanetMapConfig::nadir(1.0).expect("unit radius is valid");
    for video in VideoId::BOTH {
        let Some(track) = src.track(video) else { continue };
        let c = opts.color(video);
        let t_now = state.clock(video).position;
        for (run, points) in track.runs().iter().zip(track.trajectory_vr(t_now, &cfg)) {
            let pts: Vec<(i64, i64)> = run
                .iter()
                .zip(points)
                .map(|(s, p)| match p.time {
                    TimeEncoding::Depth(depth) => to_px(depth, s.center.yaw()),
                    TimeEncoding::Color(_) => to_px(0.0, s.center.yaw()),
                })
                .collect();
            draw_polyline_px(out, &pts, c, i64::from(out.height()) / 4);
        }
    }
}

fn draw_polyline_px(out: &mut Frame, pts: &[(i64, i64)], c: Rgba, max_jump: i64) {
    if pts.len() == 1 {
        out.blend(pts[0].0, pts[0].1, c);
    }
    for seg in pts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if (a.0 - b.0).abs().max((a.1 - b.1).abs()) <= max_jump {
            out.line(a, b, c, c);
        }
    }
}

/// Pixel position of a direction on a minimap of the given size.
pub fn minimap_pixel(d: Direction, cfg: &PlanetMapConfig) -> (f64, f64) {
    let (mx, my) = planet_project(d, cfg);
    (cfg.radius_px() + mx, cfg.radius_px() + my)
}

fn to_pixel(p: (f64, f64)) -> (i64, i64) {
    (p.0.floor() as i64, p.1.floor() as i64)
}

/// Planet-view minimap of one video in its own content coordinates. The
/// disk is `size` pixels across and the exterior is transparent.
///
/// Overlays: the visible display area in the video's color, the current
/// field of view in white, an "F" at the viewer's front, the ROI marker
/// and the trajectory. 2D states draw the trajectory with a red-to-green
/// time gradient; VR states draw past samples solid and future samples
/// faded.
pub fn render_minimap(
    state: &SessionState,
    video: VideoId,
    frame: &Frame,
    track: Option<&RoiTrack>,
    size: u32,
    opts: &RenderOptions,
) -> Result<Frame, RenderError> {
    if !frame.is_equirect() {
        return Err(RenderError::NotEquirect {
            video,
            width: frame.width(),
            height: frame.height(),
        });
    }
    check_size(size, size)?;
    let r = f64::from(size) / 2.0;
    let cfg = opts.map_config(r)?;
    let mut out = Frame::new(size, size);
    for y in 0..size {
        for x in 0..size {
            let p = (f64::from(x) + 0.5 - r, f64::from(y) + 0.5 - r);
            if p.0.hypot(p.1) > r {
                continue;
            }
            let d = planet_unproject(p, &cfg)?;
            out.put(x, y, frame.sample(equirect_from_dir(d), opts.sampling));
        }
    }
    if !opts.overlays {
        return Ok(out);
    }

    let color = opts.color(video);
    let max_jump = (r * 0.5) as i64;
    let front_yaw;
    match &state.layout {
        Layout::Canvas(l) => {
            let vp = l.viewport(video);
            outline_frustum(&mut out, &cfg, vp, (-1.0, 1.0), |d| d, WHITE, max_jump);
            let visible = match l.technique() {
                Technique::SlideIn2D if video == l.back() => (2.0 * l.divider_x() - 1.0, 1.0),
                _ => (-1.0, 1.0),
            };
            outline_frustum(&mut out, &cfg, vp, visible, |d| d, color, max_jump);
            front_yaw = 0.0;
        }
        Layout::Vr(l) => {
            let area = *l.area(video);
            if !area.is_full() {
                let rim_pitch = match cfg.center_pole {
                    Pole::Nadir => 89.9,
                    Pole::Zenith => -89.9,
                };
                for az in [area.start_az(), area.end_az()] {
                    let yaw = az - area.yaw_offset();
                    let c = to_pixel((r, r));
                    let e = to_pixel(minimap_pixel(Direction::new(yaw, rim_pitch), &cfg));
                    out.line(c, e, color, color);
                }
            }
            let vp = Viewport::new(state.head_pose, state.frustum.vfov, state.frustum.hfov)?;
            outline_frustum(&mut out, &cfg, &vp, (-1.0, 1.0), |d| area.content_direction(d), WHITE, max_jump);
            front_yaw = -area.yaw_offset();
        }
    }

    if let Some(track) = track {
        draw_trajectory(&mut out, state, video, track, &cfg, color, max_jump);
        let t = state.clock(video).position.clamp(0.0, track.duration());
        if let Ok(s) = track.nearest_roi(t) {
            let (cx, cy) = minimap_pixel(s.center, &cfg);
            out.ring(cx, cy, 2.5, 4.5, ROI_MARKER);
        }
    }

    let scale = (size / 80).max(1) as i64;
    let f_pitch = match cfg.center_pole {
        Pole::Nadir => 60.0,
        Pole::Zenith => -60.0,
    };
    let (fx, fy) = minimap_pixel(Direction::new(front_yaw, f_pitch), &cfg);
    let (gx, gy) = (fx.round() as i64 - 2 * scale, fy.round() as i64 - 3 * scale - scale / 2);
    draw_text(&mut out, "F", gx + 1, gy + 1, scale, [0, 0, 0, 255]);
    draw_text(&mut out, "F", gx, gy, scale, WHITE);

    // clip overlays to the disk
    for y in 0..size {
        for x in 0..size {
            let p = (f64::from(x) + 0.5 - r, f64::from(y) + 0.5 - r);
            if p.0.hypot(p.1) > r {
                out.put(x, y, TRANSPARENT);
            }
        }
    }
    Ok(out)
}

fn outline_frustum(
    out: &mut Frame,
    cfg: &PlanetMapConfig,
    vp: &Viewport,
    x_range: (f64, f64),
    to_content: impl Fn(Direction) -> Direction,
    c: Rgba,
    max_jump: i64,
) {
    const STEPS: usize = 48;
    let caster = RayCaster::new(vp);
    let (x0, x1) = x_range;
    let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
    let mut ndc = Vec::with_capacity(4 * STEPS + 1);
    for i in 0..STEPS {
        ndc.push((lerp(x0, x1, i as f64 / STEPS as f64), 1.0));
    }
    for i in 0..STEPS {
        ndc.push((x1, lerp(1.0, -1.0, i as f64 / STEPS as f64)));
    }
    for i in 0..STEPS {
        ndc.push((lerp(x1, x0, i as f64 / STEPS as f64), -1.0));
    }
    for i in 0..=STEPS {
        ndc.push((x0, lerp(-1.0, 1.0, i as f64 / STEPS as f64)));
    }
    let pts: Vec<(i64, i64)> = ndc
        .into_iter()
        .map(|(x, y)| to_pixel(minimap_pixel(to_content(caster.ray(x, y)), cfg)))
        .collect();
    draw_polyline_px(out, &pts, c, max_jump);
}

fn draw_trajectory(
    out: &mut Frame,
    state: &SessionState,
    video: VideoId,
    track: &RoiTrack,
    cfg: &PlanetMapConfig,
    color: Rgba,
    max_jump: i64,
) {
    let r = cfg.radius_px();
    let polylines = if state.technique.is_vr() {
        track.trajectory_vr(state.clock(video).position, cfg)
    } else {
        track.trajectory_2d(cfg)
    };
    for run in polylines {
        let styled: Vec<((i64, i64), Rgba)> = run
            .iter()
            .map(|p| {
                let px = to_pixel((r + p.map_pos.0, r + p.map_pos.1));
                let c = match p.time {
                    TimeEncoding::Color(f) => {
                        let [red, green, blue] = gradient_color(f);
                        [red, green, blue, 255]
                    }
                    TimeEncoding::Depth(depth) if depth <= 0.0 => color,
                    TimeEncoding::Depth(_) => with_alpha(color, 0.4),
                };
                (px, c)
            })
            .collect();
        if styled.len() == 1 {
            out.blend(styled[0].0 .0, styled[0].0 .1, styled[0].1);
        }
        for seg in styled.windows(2) {
            let ((a, ca), (b, cb)) = (seg[0], seg[1]);
            if (a.0 - b.0).abs().max((a.1 - b.1).abs()) <= max_jump {
                out.line(a, b, ca, cb);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::display::{CanvasSize, LuneArea};
    use crate::roi::RoiSample;
    use crate::session::{Engine, EngineConfig};
    use crate::solver;

    fn state(technique: Technique, canvas: CanvasSize) -> SessionState {
        let engine = Engine::new(EngineConfig::new(technique, [10.0, 10.0]).with_canvas(canvas)).unwrap();
        engine.initial_state().unwrap()
    }

    fn solids() -> (Frame, Frame) {
        (Frame::solid(64, 32, PINK), Frame::solid(64, 32, BLUE))
    }

    fn count(f: &Frame, c: Rgba) -> usize {
        f.pixels().chunks(4).filter(|p| *p == c).count()
    }

    #[test]
    fn side_by_side_halves() {
        let (a, b) = solids();
        let s = state(Technique::SideBySideIn2D, CanvasSize { width: 200, height: 80 });
        let f = render_canvas(&s, &Sources::new(&a, &b), &RenderOptions::plain()).unwrap();
        assert_eq!(count(&f, PINK), 100 * 80);
        assert_eq!(count(&f, BLUE), 100 * 80);
        assert_eq!(f.get(99, 40), PINK);
        assert_eq!(f.get(100, 40), BLUE);
    }

    #[test]
    fn slide_divider_quarter() {
        let (a, b) = solids();
        let mut s = state(Technique::SlideIn2D, CanvasSize { width: 400, height: 100 });
        if let Layout::Canvas(l) = &mut s.layout {
            *l = l.extend(0.25).unwrap();
        }
        let f = render_canvas(&s, &Sources::new(&a, &b), &RenderOptions::plain()).unwrap();
        assert_eq!(count(&f, PINK), 100 * 100);
    }

    #[test]
    fn canvas_peek_is_local() {
        let (a, b) = solids();
        let mut s = state(Technique::SlideIn2D, CanvasSize { width: 800, height: 400 });
        let off = render_canvas(&s, &Sources::new(&a, &b), &RenderOptions::plain()).unwrap();
        s.peek = PeekState::Pixel { x: 200, y: 200 };
        let on = render_canvas(&s, &Sources::new(&a, &b), &RenderOptions::plain()).unwrap();
        let mut changed = 0;
        for y in 0..400 {
            for x in 0..800 {
                if off.get(x, y) != on.get(x, y) {
                    changed += 1;
                    assert!((50..350).contains(&x) && (50..350).contains(&y));
                }
            }
        }
        // the block lies left of the divider, so every pixel switches source
        assert_eq!(changed, 300 * 300);
    }

    #[test]
    fn wrong_technique_errors() {
        let (a, b) = solids();
        let vr = state(Technique::SlideInVR, CanvasSize { width: 10, height: 10 });
        assert!(matches!(
            render_canvas(&vr, &Sources::new(&a, &b), &RenderOptions::plain()),
            Err(RenderError::WrongTechnique { .. })
        ));
        let flat = state(Technique::ToggleIn2D, CanvasSize { width: 10, height: 10 });
        assert!(render_vr_view(&flat, &Sources::new(&a, &b), Direction::FRONT, 8, 8, &RenderOptions::plain()).is_err());
        assert!(render_equirect_composite(&flat, &Sources::new(&a, &b), 8, 4, &RenderOptions::plain()).is_err());
    }

    #[test]
    fn non_equirect_source_rejected() {
        let a = Frame::solid(10, 10, PINK);
        let b = Frame::solid(20, 10, BLUE);
        let s = state(Technique::SlideInVR, CanvasSize { width: 10, height: 10 });
        assert!(matches!(
            render_equirect_composite(&s, &Sources::new(&a, &b), 8, 4, &RenderOptions::plain()),
            Err(RenderError::NotEquirect { video: VideoId::A, .. })
        ));
    }

    #[test]
    fn overlay_view_is_all_front() {
        let (a, b) = solids();
        let mut s = state(Technique::ToggleInVR, CanvasSize { width: 10, height: 10 });
        let f = render_vr_view(&s, &Sources::new(&a, &b), Direction::new(30.0, 10.0), 52, 48, &RenderOptions::plain()).unwrap();
        assert_eq!(count(&f, PINK), 52 * 48);
        s.layout = Layout::Vr(solver::set_views_360(VideoId::B));
        let f = render_vr_view(&s, &Sources::new(&a, &b), Direction::FRONT, 52, 48, &RenderOptions::plain()).unwrap();
        assert_eq!(count(&f, BLUE), 52 * 48);
    }

    #[test]
    fn half_and_half_splits_at_boundary() {
        let (a, b) = solids();
        let s = state(Technique::SlideInVR, CanvasSize { width: 10, height: 10 });
        let f = render_vr_view(&s, &Sources::new(&a, &b), Direction::new(90.0, 0.0), 40, 20, &RenderOptions::plain()).unwrap();
        for y in 0..20 {
            for x in 0..40 {
                assert_eq!(f.get(x, y), if x < 20 { PINK } else { BLUE }, "{x},{y}");
            }
        }
    }

    #[test]
    fn composite_half_and_half() {
        let (a, b) = solids();
        let s = state(Technique::SlideInVR, CanvasSize { width: 10, height: 10 });
        let f = render_equirect_composite(&s, &Sources::new(&a, &b), 360, 180, &RenderOptions::plain()).unwrap();
        for x in 0..360 {
            let yaw = f64::from(x) + 0.5 - 180.0;
            let expected = if (-90.0..90.0).contains(&yaw) { PINK } else { BLUE };
            assert_eq!(f.get(x, 90), expected);
        }
    }

    #[test]
    fn composite_complement_fill() {
        let (a, b) = solids();
        let mut s = state(Technique::SlideInVR, CanvasSize { width: 10, height: 10 });
        s.layout = Layout::Vr(VrLayout::new(
            LuneArea::new(270.0, 90.0, 0.0),
            LuneArea::new(90.0, 180.0, 0.0),
            VideoId::A,
        ));
        let f = render_equirect_composite(&s, &Sources::new(&a, &b), 360, 180, &RenderOptions::plain()).unwrap();
        assert_eq!(count(&f, COMPLEMENT_GRAY), 90 * 180);
    }

    #[test]
    fn vr_peek_disk() {
        let (a, b) = solids();
        let mut s = state(Technique::ToggleInVR, CanvasSize { width: 10, height: 10 });
        s.peek = PeekState::Gaze { anchor: Direction::FRONT };
        let f = render_vr_view(&s, &Sources::new(&a, &b), Direction::FRONT, 104, 96, &RenderOptions::plain()).unwrap();
        // about 1.41 degrees per pixel near the center: the disk covers ~89 px
        assert_eq!(f.get(52, 48), BLUE);
        assert_eq!(f.get(52 + 10, 48), PINK);
        let blue = count(&f, BLUE) as f64;
        assert!(blue > 75.0 && blue < 105.0, "{blue}");
    }

    #[test]
    fn minimap_roi_and_gradient() {
        let s = state(Technique::SlideIn2D, CanvasSize { width: 400, height: 100 });
        let track = RoiTrack::new(
            VideoId::A,
            vec![vec![
                RoiSample::new(0.0, Direction::new(-90.0, 0.0), 10.0, 10.0).unwrap(),
                RoiSample::new(5.0, Direction::FRONT, 10.0, 10.0).unwrap(),
                RoiSample::new(10.0, Direction::new(90.0, 0.0), 10.0, 10.0).unwrap(),
            ]],
            10.0,
        )
        .unwrap();
        let frame = Frame::solid(64, 32, [0, 0, 80, 255]);
        let mut s = s;
        s.clocks[0].position = 5.0;
        let map = render_minimap(&s, VideoId::A, &frame, Some(&track), 120, &RenderOptions::default()).unwrap();
        let cfg = PlanetMapConfig::nadir(60.0).unwrap();
        let (cx, cy) = minimap_pixel(Direction::FRONT, &cfg);
        assert_eq!((cx, cy), (60.0, 30.0));
        assert_eq!(map.get(60 + 3, 30), ROI_MARKER);
        let (sx, sy) = minimap_pixel(Direction::new(-90.0, 0.0), &cfg);
        assert_eq!(map.get(sx as u32, sy as u32), [255, 0, 0, 255]);
        let (ex, ey) = minimap_pixel(Direction::new(90.0, 0.0), &cfg);
        assert_eq!(map.get(ex as u32, ey as u32), [0, 255, 0, 255]);
        assert_eq!(map.get(0, 0), TRANSPARENT);
        assert_eq!(map.get(119, 119), TRANSPARENT);
    }

    #[test]
    fn deterministic_output() {
        let (a, b) = solids();
        let s = state(Technique::SlideIn2D, CanvasSize { width: 300, height: 100 });
        let opts = RenderOptions::default();
        let f1 = render_canvas(&s, &Sources::new(&a, &b), &opts).unwrap();
        let f2 = render_canvas(&s, &Sources::new(&a, &b), &opts).unwrap();
        assert_eq!(f1.encode_png().unwrap(), f2.encode_png().unwrap());
    }
}

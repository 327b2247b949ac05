//! RGBA8 raster frames, PNG encoding and the few drawing primitives the
//! compositor needs.

use std::io::{BufRead, Cursor, Seek};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::EquirectCoord;

pub type Rgba = [u8; 4];

pub const TRANSPARENT: Rgba = [0, 0, 0, 0];
pub const PINK: Rgba = [236, 72, 153, 255];
pub const BLUE: Rgba = [59, 130, 246, 255];
pub const COMPLEMENT_GRAY: Rgba = [40, 40, 40, 255];
pub const WHITE: Rgba = [255, 255, 255, 255];

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("pixel buffer holds {got} bytes, expected {expected} for {width}x{height}")]
    BufferSize {
        width: u32,
        height: u32,
        expected: usize,
        got: usize,
    },
    #[error("png decode: {0}")]
    Decode(#[from] png::DecodingError),
    #[error("png encode: {0}")]
    Encode(#[from] png::EncodingError),
    #[error("unsupported png layout {0:?}")]
    Unsupported(png::ColorType),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    #[default]
    Nearest,
    Bilinear,
}

/// Row-major RGBA8 image.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Frame({}x{})", self.width, self.height)
    }
}

impl Frame {
    /// Fully transparent frame.
    pub fn new(width: u32, height: u32) -> Self {
        Frame::solid(width, height, TRANSPARENT)
    }

    pub fn solid(width: u32, height: u32, color: Rgba) -> Self {
        let n = width as usize * height as usize;
        Frame {
            width,
            height,
            pixels: color.repeat(n),
        }
    }

    pub fn from_rgba(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, FrameError> {
        let expected = width as usize * height as usize * 4;
        if pixels.len() != expected {
            return Err(FrameError::BufferSize {
                width,
                height,
                expected,
                got: pixels.len(),
            });
        }
        Ok(Frame { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn is_equirect(&self) -> bool {
        self.width == 2 * self.height && self.height > 0
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 4
    }

    pub fn get(&self, x: u32, y: u32) -> Rgba {
        let o = self.offset(x, y);
        [self.pixels[o], self.pixels[o + 1], self.pixels[o + 2], self.pixels[o + 3]]
    }

    pub fn put(&mut self, x: u32, y: u32, c: Rgba) {
        let o = self.offset(x, y);
        self.pixels[o..o + 4].copy_from_slice(&c);
    }

    /// Source-over blend, ignoring out-of-bounds coordinates.
    pub fn blend(&mut self, x: i64, y: i64, c: Rgba) {
        if x < 0 || y < 0 || x >= i64::from(self.width) || y >= i64::from(self.height) {
            return;
        }
        let (x, y) = (x as u32, y as u32);
        let dst = self.get(x, y);
        self.put(x, y, blend_over(dst, c));
    }

    pub fn fill_rect(&mut self, x0: i64, y0: i64, w: i64, h: i64, c: Rgba) {
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                self.blend(x, y, c);
            }
        }
    }

    pub fn stroke_rect(&mut self, x0: i64, y0: i64, w: i64, h: i64, c: Rgba) {
        for x in x0..x0 + w {
            self.blend(x, y0, c);
            self.blend(x, y0 + h - 1, c);
        }
        for y in y0 + 1..y0 + h - 1 {
            self.blend(x0, y, c);
            self.blend(x0 + w - 1, y, c);
        }
    }

    /// Bresenham line with per-pixel color interpolated from `c0` to `c1`.
    pub fn line(&mut self, p0: (i64, i64), p1: (i64, i64), c0: Rgba, c1: Rgba) {
        let (mut x, mut y) = p0;
        let dx = (p1.0 - x).abs();
        let dy = -(p1.1 - y).abs();
        let sx = if x < p1.0 { 1 } else { -1 };
        let sy = if y < p1.1 { 1 } else { -1 };
        let steps = dx.max(-dy).max(1) as f64;
        let mut err = dx + dy;
        let mut i = 0.0;
        loop {
            self.blend(x, y, lerp_color(c0, c1, i / steps));
            if (x, y) == p1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
            i += 1.0;
        }
    }

    pub fn disk(&mut self, cx: f64, cy: f64, r: f64, c: Rgba) {
        let (x0, x1) = ((cx - r).floor() as i64, (cx + r).ceil() as i64);
        let (y0, y1) = ((cy - r).floor() as i64, (cy + r).ceil() as i64);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let (px, py) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
                if px * px + py * py <= r * r {
                    self.blend(x, y, c);
                }
            }
        }
    }

    pub fn ring(&mut self, cx: f64, cy: f64, r_in: f64, r_out: f64, c: Rgba) {
        let (x0, x1) = ((cx - r_out).floor() as i64, (cx + r_out).ceil() as i64);
        let (y0, y1) = ((cy - r_out).floor() as i64, (cy + r_out).ceil() as i64);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let (px, py) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
                let d2 = px * px + py * py;
                if d2 <= r_out * r_out && d2 >= r_in * r_in {
                    self.blend(x, y, c);
                }
            }
        }
    }

    /// Draws `other` with its top-left corner at `(x0, y0)`, alpha blended.
    pub fn composite(&mut self, other: &Frame, x0: i64, y0: i64) {
        for y in 0..other.height {
            for x in 0..other.width {
                let c = other.get(x, y);
                if c[3] > 0 {
                    self.blend(x0 + i64::from(x), y0 + i64::from(y), c);
                }
            }
        }
    }

    /// Samples an equirectangular frame; `u` wraps, `v` clamps.
    pub fn sample(&self, c: EquirectCoord, sampling: Sampling) -> Rgba {
        let (w, h) = (self.width, self.height);
        match sampling {
            Sampling::Nearest => {
                let x = ((c.u() * f64::from(w)) as u32).min(w - 1);
                let y = ((c.v() * f64::from(h)) as u32).min(h - 1);
                self.get(x, y)
            }
            Sampling::Bilinear => {
                let fx = c.u() * f64::from(w) - 0.5;
                let fy = (c.v() * f64::from(h) - 0.5).clamp(0.0, f64::from(h - 1));
                let x0 = fx.floor();
                let y0 = fy.floor();
                let (tx, ty) = (fx - x0, fy - y0);
                let wrap = |x: f64| (x as i64).rem_euclid(i64::from(w)) as u32;
                let (xa, xb) = (wrap(x0), wrap(x0 + 1.0));
                let ya = y0 as u32;
                let yb = (ya + 1).min(h - 1);
                let top = lerp_color(self.get(xa, ya), self.get(xb, ya), tx);
                let bottom = lerp_color(self.get(xa, yb), self.get(xb, yb), tx);
                lerp_color(top, bottom, ty)
            }
        }
    }

    pub fn encode_png(&self) -> Result<Vec<u8>, FrameError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgba);
            enc.set_depth(png::BitDepth::Eight);
            enc.set_compression(png::Compression::Balanced);
            let mut writer = enc.write_header()?;
            writer.write_image_data(&self.pixels)?;
            writer.finish()?;
        }
        Ok(out)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Self, FrameError> {
        decode_png_reader(Cursor::new(bytes))
    }

    pub fn save_png(&self, path: &Path) -> Result<(), FrameError> {
        let bytes = self.encode_png()?;
        std::fs::write(path, bytes).map_err(|source| FrameError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load_png(path: &Path) -> Result<Self, FrameError> {
        let file = std::fs::File::open(path).map_err(|source| FrameError::Io {
            path: path.display().to_string(),
            source,
        })?;
        decode_png_reader(std::io::BufReader::new(file))
    }
}

/// Reads only the PNG header of a file.
pub fn png_dimensions(path: &Path) -> Result<(u32, u32), FrameError> {
    let file = std::fs::File::open(path).map_err(|source| FrameError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = png::Decoder::new(std::io::BufReader::new(file)).read_info()?;
    let info = reader.info();
    Ok((info.width, info.height))
}

fn decode_png_reader<R: BufRead + Seek>(r: R) -> Result<Frame, FrameError> {
    let mut decoder = png::Decoder::new(r);
    decoder.set_transformations(png::Transformations::normalize_to_color8());
    let mut reader = decoder.read_info()?;
    let size = reader.output_buffer_size().unwrap_or(0);
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf)?;
    buf.truncate(info.buffer_size());
    let n = info.width as usize * info.height as usize;
    let pixels = match info.color_type {
        png::ColorType::Rgba => buf,
        png::ColorType::Rgb => buf.chunks_exact(3).flat_map(|p| [p[0], p[1], p[2], 255]).collect(),
        png::ColorType::Grayscale => buf.iter().take(n).flat_map(|&g| [g, g, g, 255]).collect(),
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).flat_map(|p| [p[0], p[0], p[0], p[1]]).collect(),
        other => return Err(FrameError::Unsupported(other)),
    };
    Frame::from_rgba(info.width, info.height, pixels)
}

pub fn lerp_color(a: Rgba, b: Rgba, t: f64) -> Rgba {
    let t = t.clamp(0.0, 1.0);
    let mut out = [0u8; 4];
    for i in 0..4 {
        out[i] = (f64::from(a[i]) + (f64::from(b[i]) - f64::from(a[i])) * t).round() as u8;
    }
    out
}

pub fn with_alpha(c: Rgba, alpha: f64) -> Rgba {
    [c[0], c[1], c[2], (alpha.clamp(0.0, 1.0) * 255.0).round() as u8]
}

/// Integer source-over compositing.
pub fn blend_over(dst: Rgba, src: Rgba) -> Rgba {
    let sa = u32::from(src[3]);
    if sa == 255 {
        return src;
    }
    if sa == 0 {
        return dst;
    }
    let da = u32::from(dst[3]);
    let out_a = sa + da * (255 - sa) / 255;
    if out_a == 0 {
        return TRANSPARENT;
    }
    let mut out = [0u8; 4];
    for i in 0..3 {
        let s = u32::from(src[i]) * sa;
        let d = u32::from(dst[i]) * da * (255 - sa) / 255;
        out[i] = ((s + d) / out_a).min(255) as u8;
    }
    out[3] = out_a as u8;
    out
}

// 5x7 glyphs, one row per byte, bit 4 is the leftmost column
fn glyph(c: char) -> Option<[u8; 7]> {
    Some(match c.to_ascii_uppercase() {
        'A' => [0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11],
        'B' => [0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E],
        'C' => [0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E],
        'D' => [0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E],
        'E' => [0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F],
        'F' => [0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10],
        'G' => [0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F],
        'H' => [0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11],
        'I' => [0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E],
        'J' => [0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C],
        'K' => [0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11],
        'L' => [0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F],
        'M' => [0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11],
        'N' => [0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11],
        'O' => [0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E],
        'P' => [0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10],
        'Q' => [0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D],
        'R' => [0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11],
        'S' => [0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E],
        'T' => [0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04],
        'U' => [0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E],
        'V' => [0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04],
        'W' => [0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A],
        'X' => [0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11],
        'Y' => [0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04],
        'Z' => [0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F],
        '0' => [0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E],
        '1' => [0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E],
        '2' => [0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F],
        '3' => [0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E],
        '4' => [0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02],
        '5' => [0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E],
        '6' => [0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E],
        '7' => [0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
        '8' => [0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E],
        '9' => [0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C],
        '-' => [0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00],
        '+' => [0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00],
        '.' => [0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C],
        ':' => [0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00],
        ' ' => [0; 7],
        _ => return None,
    })
}

/// Width in pixels of `text` drawn at `scale`.
pub fn text_width(text: &str, scale: i64) -> i64 {
    let n = text.chars().count() as i64;
    (n * 6 - 1).max(0) * scale
}

/// Draws text with a tiny built-in upper-case bitmap font. Characters
/// without a glyph are skipped.
pub fn draw_text(frame: &mut Frame, text: &str, x0: i64, y0: i64, scale: i64, c: Rgba) {
    for (i, ch) in text.chars().enumerate() {
        let Some(rows) = glyph(ch) else { continue };
        let gx = x0 + i as i64 * 6 * scale;
        for (ry, bits) in rows.iter().enumerate() {
            for col in 0..5 {
                if bits & (0x10 >> col) != 0 {
                    frame.fill_rect(gx + col * scale, y0 + ry as i64 * scale, scale, scale, c);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip() {
        let mut f = Frame::solid(4, 2, PINK);
        f.put(3, 1, BLUE);
        f.put(0, 0, [1, 2, 3, 4]);
        let bytes = f.encode_png().unwrap();
        assert_eq!(Frame::decode_png(&bytes).unwrap(), f);
        assert_eq!(f.encode_png().unwrap(), bytes);
    }

    #[test]
    fn from_rgba_checks_size() {
        assert!(Frame::from_rgba(2, 2, vec![0; 15]).is_err());
        assert!(Frame::from_rgba(2, 2, vec![0; 16]).is_ok());
    }

    #[test]
    fn nearest_sampling_hits_cells() {
        let mut f = Frame::solid(4, 2, PINK);
        f.put(0, 0, BLUE);
        assert_eq!(f.sample(EquirectCoord::new(0.1, 0.1), Sampling::Nearest), BLUE);
        assert_eq!(f.sample(EquirectCoord::new(0.3, 0.1), Sampling::Nearest), PINK);
        assert_eq!(f.sample(EquirectCoord::new(0.999_999, 1.0), Sampling::Nearest), PINK);
    }

    #[test]
    fn bilinear_wraps_horizontally() {
        let mut f = Frame::solid(4, 2, [0, 0, 0, 255]);
        f.put(0, 0, [200, 0, 0, 255]);
        f.put(0, 1, [200, 0, 0, 255]);
        // halfway between the last and first columns
        let c = f.sample(EquirectCoord::new(0.0, 0.5), Sampling::Bilinear);
        assert_eq!(c, [100, 0, 0, 255]);
    }

    #[test]
    fn blending() {
        assert_eq!(blend_over(PINK, BLUE), BLUE);
        assert_eq!(blend_over(PINK, TRANSPARENT), PINK);
        assert_eq!(blend_over(TRANSPARENT, [10, 20, 30, 128]), [10, 20, 30, 128]);
        let half = blend_over([0, 0, 0, 255], [255, 255, 255, 128]);
        assert_eq!(half[3], 255);
        assert!((i32::from(half[0]) - 128).abs() <= 1);
    }

    #[test]
    fn gradient_line_endpoints() {
        let mut f = Frame::new(10, 10);
        f.line((1, 1), (8, 5), [255, 0, 0, 255], [0, 255, 0, 255]);
        assert_eq!(f.get(1, 1), [255, 0, 0, 255]);
        assert_eq!(f.get(8, 5), [0, 255, 0, 255]);
    }

    #[test]
    fn text_draws_something() {
        let mut f = Frame::new(60, 10);
        draw_text(&mut f, "PEEKING", 0, 0, 1, WHITE);
        assert!(f.pixels().chunks(4).any(|p| p[3] == 255));
        assert_eq!(text_width("PEEKING", 2), 82);
    }
}

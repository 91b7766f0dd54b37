//! Top-down frame export as binary PPM images.

use std::io::Write;

use arena_core::geom::Vec2;
use arena_core::observation::color;
use arena_core::physics::{DiscBody, StaticShape};

pub const FRAME_SIZE: usize = 700;
/// Minimum drawn half thickness of line shapes, in world units.
const LINE_HALF_WIDTH: f64 = 2.5;

/// RGB triple for each global color code.
pub fn palette(code: u8) -> [u8; 3] {
    match code {
        color::BACKGROUND => [245, 245, 240],
        color::STICKY_WALL => [150, 95, 40],
        color::ELASTIC_WALL => [60, 60, 70],
        color::SENSOR => [40, 170, 70],
        color::SELF => [40, 90, 220],
        color::OPPONENT => [210, 50, 50],
        color::OWN_OBJECT => [120, 170, 250],
        color::OPPONENT_OBJECT => [245, 140, 140],
        color::NEUTRAL_OBJECT => [240, 170, 20],
        _ => [255, 0, 255],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameImage {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB triples, top row first.
    pub pixels: Vec<u8>,
}

impl FrameImage {
    pub fn blank(width: usize, height: usize) -> Self {
        let mut pixels = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            pixels.extend_from_slice(&palette(color::BACKGROUND));
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }

    /// Binary PPM (P6) encoding.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_ppm(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(&self.to_ppm())
    }
}

/// Maps world coordinates (centered, y up) onto a square image.
#[derive(Debug, Clone, Copy)]
pub struct Camera {
    pub size: usize,
    /// Pixels per world unit.
    pub scale: f64,
}

impl Camera {
    /// One unit per pixel, shrunk when the map would not fit.
    pub fn fit(size: usize, map_w: f64, map_h: f64) -> Self {
        let extent = map_w.max(map_h);
        let scale = if extent > size as f64 {
            size as f64 / extent
        } else {
            1.0
        };
        Self { size, scale }
    }

    fn world_of(&self, px: usize, py: usize) -> Vec2 {
        let half = self.size as f64 / 2.0;
        Vec2::new(
            (px as f64 + 0.5 - half) / self.scale,
            (half - py as f64 - 0.5) / self.scale,
        )
    }

    /// Pixel range covering the world box `[lo, hi]`, clipped to the image.
    fn pixel_box(&self, lo: Vec2, hi: Vec2) -> Option<(usize, usize, usize, usize)> {
        let half = self.size as f64 / 2.0;
        let x0 = (lo.x * self.scale + half - 1.0).floor().max(0.0);
        let x1 = (hi.x * self.scale + half + 1.0)
            .ceil()
            .min(self.size as f64 - 1.0);
        let y0 = (half - hi.y * self.scale - 1.0).floor().max(0.0);
        let y1 = (half - lo.y * self.scale + 1.0)
            .ceil()
            .min(self.size as f64 - 1.0);
        (x0 <= x1 && y0 <= y1).then_some((x0 as usize, x1 as usize, y0 as usize, y1 as usize))
    }

    fn fill(
        &self,
        img: &mut FrameImage,
        lo: Vec2,
        hi: Vec2,
        rgb: [u8; 3],
        inside: impl Fn(Vec2) -> bool,
    ) {
        if let Some((x0, x1, y0, y1)) = self.pixel_box(lo, hi) {
            for py in y0..=y1 {
                for px in x0..=x1 {
                    if inside(self.world_of(px, py)) {
                        img.set(px, py, rgb);
                    }
                }
            }
        }
    }
}

/// Draws static shapes, then bodies in id order.
pub fn render_frame(camera: &Camera, shapes: &[StaticShape], bodies: &[DiscBody]) -> FrameImage {
    let mut img = FrameImage::blank(camera.size, camera.size);
    let half_width = LINE_HALF_WIDTH.max(0.5 / camera.scale);
    let pad = Vec2::new(half_width, half_width);
    for s in shapes {
        let (lo, hi) = s.geometry.bounds();
        let g = s.geometry;
        camera.fill(&mut img, lo - pad, hi + pad, palette(s.color_code), |p| {
            g.distance(p) <= half_width
        });
    }
    for b in bodies {
        let r = Vec2::new(b.radius, b.radius);
        let (c, rad) = (b.position, b.radius);
        camera.fill(&mut img, c - r, c + r, palette(b.color_code), |p| {
            p.distance(c) <= rad
        });
    }
    img
}

/// Steps at which frames are taken: 0, k, 2k, ... up to `steps`.
pub fn frame_steps(steps: u32, every: u32) -> Vec<u32> {
    (0..=steps / every).map(|i| i * every).collect()
}

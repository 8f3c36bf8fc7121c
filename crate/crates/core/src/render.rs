//! Space-time diagrams: one row per step, the unit interval split into
//! equal cells per word, time running downwards.

use std::fmt::Write as _;
use std::io;

use num_rational::Ratio;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::Trajectory;
use crate::rulespec::Symbol;

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("palette has no color for symbol {symbol} (palette size {size})")]
    MissingColor { symbol: u32, size: usize },
    #[error("image width must be at least 1 pixel")]
    ZeroWidth,
    #[error("row height must be at least 1 pixel")]
    ZeroRowHeight,
    #[error("unknown palette `{0}`")]
    UnknownPalette(String),
    #[error("invalid PPM data: {0}")]
    BadPpm(&'static str),
    #[error("could not start render workers: {0}")]
    Workers(String),
}

/// One color per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    colors: Vec<Rgb>,
}

impl Palette {
    pub fn new(colors: Vec<Rgb>) -> Self {
        Palette { colors }
    }

    /// Black for 0, then evenly spaced fully saturated hues.
    pub fn hexcone(p: u32) -> Self {
        let mut colors = vec![[0, 0, 0]];
        let others = p.saturating_sub(1);
        for k in 0..others {
            let hue = 360.0 * f64::from(k) / f64::from(others);
            colors.push(hsv_to_rgb(hue, 1.0, 1.0));
        }
        colors.truncate(p as usize);
        Palette { colors }
    }

    /// Black, brown, red, green, orange, yellow, white. The green for
    /// symbol 3 is a placeholder.
    pub fn warm() -> Self {
        Palette {
            colors: vec![
                [0, 0, 0],
                [139, 69, 19],
                [255, 0, 0],
                [0, 128, 0],
                [255, 165, 0],
                [255, 255, 0],
                [255, 255, 255],
            ],
        }
    }

    /// `"default"` (hexcone) or `"warm"`.
    pub fn named(name: &str, p: u32) -> Result<Self, RenderError> {
        match name {
            "default" | "hexcone" => Ok(Palette::hexcone(p)),
            "warm" => Ok(Palette::warm()),
            other => Err(RenderError::UnknownPalette(other.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, s: Symbol) -> Result<Rgb, RenderError> {
        self.colors
            .get(s as usize)
            .copied()
            .ok_or(RenderError::MissingColor {
                symbol: u32::from(s),
                size: self.colors.len(),
            })
    }

    fn check_covers(&self, traj: &Trajectory) -> Result<(), RenderError> {
        let mut used = [false; 256];
        for w in traj.words() {
            for &s in w.symbols() {
                used[s as usize] = true;
            }
        }
        match used.iter().rposition(|&u| u) {
            Some(max) if max >= self.colors.len() => Err(RenderError::MissingColor {
                symbol: max as u32,
                size: self.colors.len(),
            }),
            _ => Ok(()),
        }
    }
}

fn hsv_to_rgb(hue: f64, s: f64, v: f64) -> Rgb {
    let c = v * s;
    let h = (hue / 60.0) % 6.0;
    let x = c * (1.0 - ((h % 2.0) - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let to_byte = |u: f64| ((u + m) * 255.0).round() as u8;
    [to_byte(r), to_byte(g), to_byte(b)]
}

/// Row-major RGB pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() + 32);
        write_ppm(self, &mut out).expect("writing to a Vec cannot fail");
        out
    }
}

/// First pixel column of cell `j` in a row of `len` cells over `width`
/// pixels: `⌊j·width/len⌋`.
#[inline]
pub fn cell_start(j: usize, len: usize, width: usize) -> usize {
    ((j as u128 * width as u128) / len as u128) as usize
}

fn paint_row(row: &mut [u8], symbols: &[Symbol], colors: &[Rgb], width: usize) {
    let len = symbols.len();
    let line = &mut row[..3 * width];
    for (j, &s) in symbols.iter().enumerate() {
        let (x0, x1) = (cell_start(j, len, width), cell_start(j + 1, len, width));
        let color = colors[s as usize];
        for px in line[3 * x0..3 * x1].chunks_exact_mut(3) {
            px.copy_from_slice(&color);
        }
    }
    let (first, rest) = row.split_at_mut(3 * width);
    for copy in rest.chunks_exact_mut(3 * width) {
        copy.copy_from_slice(first);
    }
}

/// Rasterizes a trajectory, one band of `row_height` pixels per step, using
/// rayon's global pool.
pub fn render_spacetime(
    traj: &Trajectory,
    palette: &Palette,
    image_width: usize,
    row_height: usize,
) -> Result<RasterImage, RenderError> {
    render_spacetime_with_workers(traj, palette, image_width, row_height, 0)
}

/// As [`render_spacetime`], on a dedicated pool of `workers` threads
/// (`0` picks the rayon default). The output does not depend on `workers`.
pub fn render_spacetime_with_workers(
    traj: &Trajectory,
    palette: &Palette,
    image_width: usize,
    row_height: usize,
    workers: usize,
) -> Result<RasterImage, RenderError> {
    if image_width == 0 {
        return Err(RenderError::ZeroWidth);
    }
    if row_height == 0 {
        return Err(RenderError::ZeroRowHeight);
    }
    palette.check_covers(traj)?;

    let rows = traj.words().len();
    let band = 3 * image_width * row_height;
    let mut pixels = vec![0u8; band * rows];
    let colors = &palette.colors;
    let paint = |pixels: &mut Vec<u8>| {
        pixels
            .par_chunks_mut(band)
            .zip(traj.words().par_iter())
            .for_each(|(row, w)| paint_row(row, w.symbols(), colors, image_width));
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RenderError::Workers(e.to_string()))?;
    pool.install(|| paint(&mut pixels));

    Ok(RasterImage {
        width: image_width,
        height: rows * row_height,
        pixels,
    })
}

/// Binary PPM: `P6\n<w> <h>\n255\n` followed by the raw RGB bytes.
pub fn write_ppm<W: io::Write>(img: &RasterImage, mut out: W) -> io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", img.width, img.height)?;
    out.write_all(&img.pixels)?;
    out.flush()
}

/// Reads back what [`write_ppm`] writes (single-space separated header, no
/// comments, maxval 255).
pub fn parse_ppm(bytes: &[u8]) -> Result<RasterImage, RenderError> {
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            return Err(RenderError::BadPpm("truncated header"));
        }
        fields.push(&bytes[start..pos]);
        pos += 1;
    }
    if fields[0] != b"P6" {
        return Err(RenderError::BadPpm("not a P6 file"));
    }
    let num = |f: &[u8]| -> Result<usize, RenderError> {
        std::str::from_utf8(f)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(RenderError::BadPpm("bad header number"))
    };
    let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval != 255 {
        return Err(RenderError::BadPpm("maxval must be 255"));
    }
    let pixels = &bytes[pos..];
    if pixels.len() != 3 * width * height {
        return Err(RenderError::BadPpm("pixel data has the wrong size"));
    }
    Ok(RasterImage {
        width,
        height,
        pixels: pixels.to_vec(),
    })
}

/// Hex SHA-256 of a byte stream, used to pin golden images.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// A cell of the exact (vector) diagram; `x0` and `x1` are fractions of the
/// unit interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub row: usize,
    pub x0: Ratio<u64>,
    pub x1: Ratio<u64>,
    pub symbol: Symbol,
}

/// Every cell of every row, exact.
pub fn cells(traj: &Trajectory) -> Vec<Cell> {
    traj.words()
        .iter()
        .enumerate()
        .flat_map(|(row, w)| {
            let len = w.len() as u64;
            w.symbols()
                .iter()
                .enumerate()
                .map(move |(j, &symbol)| Cell {
                    row,
                    x0: Ratio::new(j as u64, len),
                    x1: Ratio::new(j as u64 + 1, len),
                    symbol,
                })
        })
        .collect()
}

fn hex(c: Rgb) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// SVG 1.1 with one `rect` per cell.
///
/// Each row is a nested viewport whose user space is `len_t` units wide, so
/// cell `j` sits exactly at `j/len_t` of the unit width with no rounding.
pub fn write_svg(traj: &Trajectory, palette: &Palette) -> Result<String, RenderError> {
    palette.check_covers(traj)?;
    let rows = traj.words().len();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"{}\" \
         viewBox=\"0 0 1 {rows}\" preserveAspectRatio=\"none\" shape-rendering=\"crispEdges\">",
        rows * 20
    );
    for (t, w) in traj.words().iter().enumerate() {
        let _ = writeln!(
            out,
            "  <svg x=\"0\" y=\"{t}\" width=\"1\" height=\"1\" viewBox=\"0 0 {} 1\" preserveAspectRatio=\"none\">",
            w.len()
        );
        for (j, &s) in w.symbols().iter().enumerate() {
            let _ = writeln!(
                out,
                "    <rect x=\"{j}\" y=\"0\" width=\"1\" height=\"1\" fill=\"{}\"/>",
                hex(palette.color(s)?)
            );
        }
        out.push_str("  </svg>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, RunOptions, Word};
    use crate::rulespec::named::*;
    use crate::rulespec::{RuleTable, WolframCode};

    fn traj(rule: &RuleTable, seed: &str, steps: usize) -> Trajectory {
        let w = Word::parse(rule.alphabet_size(), seed).unwrap();
        run(rule, &w, steps, RunOptions::default()).unwrap()
    }

    fn bw() -> Palette {
        Palette::new(vec![[0, 0, 0], [255, 255, 255]])
    }

    #[test]
    fn cantor_row_runs() {
        let img = render_spacetime(&traj(&cantor(), "1", 2), &bw(), 27, 1).unwrap();
        assert_eq!((img.width(), img.height()), (27, 3));
        let expected = [1, 0, 1, 0, 0, 0, 1, 0, 1];
        for x in 0..27 {
            let want = if expected[x / 3] == 1 {
                [255; 3]
            } else {
                [0; 3]
            };
            assert_eq!(img.pixel(x, 2), want, "x={x}");
        }
        // Row 1 is "101" in 9-pixel runs.
        assert_eq!(img.pixel(8, 1), [255; 3]);
        assert_eq!(img.pixel(9, 1), [0; 3]);
        assert_eq!(img.pixel(18, 1), [255; 3]);
    }

    #[test]
    fn single_symbol_row_is_solid() {
        let t = traj(&cantor(), "1", 0);
        let img = render_spacetime(&t, &Palette::hexcone(2), 5, 2).unwrap();
        let color = Palette::hexcone(2).color(1).unwrap();
        for y in 0..2 {
            for x in 0..5 {
                assert_eq!(img.pixel(x, y), color);
            }
        }
    }

    #[test]
    fn rejects_bad_dimensions_and_palettes() {
        let t = traj(&fibonacci(), "1", 2);
        assert_eq!(
            render_spacetime(&t, &bw(), 0, 1),
            Err(RenderError::ZeroWidth)
        );
        assert_eq!(
            render_spacetime(&t, &bw(), 10, 0),
            Err(RenderError::ZeroRowHeight)
        );
        assert_eq!(
            render_spacetime(&t, &bw(), 10, 1),
            Err(RenderError::MissingColor { symbol: 2, size: 2 })
        );
        assert_eq!(
            write_svg(&t, &bw()),
            Err(RenderError::MissingColor { symbol: 2, size: 2 })
        );
        assert!(matches!(
            Palette::named("sepia", 2),
            Err(RenderError::UnknownPalette(_))
        ));
    }

    #[test]
    fn columns_partition_every_row() {
        for width in [1usize, 7, 27, 100, 333] {
            for len in [1usize, 2, 3, 5, 13, 27, 128, 1000] {
                let mut covered = vec![0u32; width];
                for j in 0..len {
                    for c in &mut covered[cell_start(j, len, width)..cell_start(j + 1, len, width)]
                    {
                        *c += 1;
                    }
                }
                assert!(covered.iter().all(|&c| c == 1), "width={width} len={len}");
            }
        }
    }

    #[test]
    fn doubling_width_doubles_boundaries() {
        for len in [1usize, 2, 3, 9, 27] {
            let width = 27 * 4;
            for j in 0..=len {
                assert_eq!(cell_start(j, len, 2 * width), 2 * cell_start(j, len, width));
            }
        }
    }

    #[test]
    fn ppm_bytes() {
        let img = RasterImage {
            width: 1,
            height: 1,
            pixels: vec![0, 0, 0],
        };
        assert_eq!(img.to_ppm(), b"P6\n1 1\n255\n\x00\x00\x00");
        let t = traj(&cantor(), "1", 3);
        let img = render_spacetime(&t, &bw(), 27, 1).unwrap();
        let back = parse_ppm(&img.to_ppm()).unwrap();
        assert_eq!(back, img);
        assert!(parse_ppm(b"P3\n1 1\n255\n000").is_err());
        assert!(parse_ppm(b"P6\n2 1\n255\n\x00\x00\x00").is_err());
    }

    #[test]
    fn rendering_is_independent_of_workers() {
        let code = WolframCode::new(74330023345u64.into(), 3, 7).unwrap();
        let t = traj(&code.decode(), "1", 5);
        let one = render_spacetime_with_workers(&t, &Palette::warm(), 243, 4, 1).unwrap();
        let four = render_spacetime_with_workers(&t, &Palette::warm(), 243, 4, 4).unwrap();
        assert_eq!(one.to_ppm(), four.to_ppm());
    }

    #[test]
    fn hexcone_palette() {
        assert_eq!(Palette::hexcone(2).colors, vec![[0, 0, 0], [255, 0, 0]]);
        assert_eq!(
            Palette::hexcone(4).colors,
            vec![[0, 0, 0], [255, 0, 0], [0, 255, 0], [0, 0, 255]]
        );
        let many = Palette::hexcone(7);
        let mut sorted = many.colors.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 7);
    }

    #[test]
    fn svg_geometry_is_exact() {
        let t = traj(&cantor(), "1", 1);
        let row1: Vec<Cell> = cells(&t).into_iter().filter(|c| c.row == 1).collect();
        let starts: Vec<Ratio<u64>> = row1.iter().map(|c| c.x0).collect();
        assert_eq!(
            starts,
            vec![Ratio::new(0, 1), Ratio::new(1, 3), Ratio::new(2, 3)]
        );
        let svg = write_svg(&t, &bw()).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
        assert!(svg.contains("viewBox=\"0 0 3 1\""));
        assert!(svg.contains("<rect x=\"2\" y=\"0\" width=\"1\" height=\"1\" fill=\"#ffffff\"/>"));

        let single = write_svg(&traj(&cantor(), "101", 0), &bw()).unwrap();
        assert_eq!(single.matches("<rect").count(), 3);
        assert_eq!(single.matches("<svg").count(), 2);
    }
}

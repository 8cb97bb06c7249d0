//! ASCII PGM/PPM heatmaps of C-P and delta maps.
//!
//! One pixel per cell. The top image row is `y = M`, so the easiest config
//! sits at the top-right corner. Undefined cells are black.

use std::fmt::Write as _;

use crate::cpmap::{CellGrid, CpMap};
use crate::delta::DeltaMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColorScale {
    /// Grayscale: `min` renders white, `max` renders black.
    Sequential { min: f64, max: f64 },
    /// White at `center`, pure red at `center + span`, pure blue at
    /// `center - span`.
    Diverging { center: f64, span: f64 },
}

impl ColorScale {
    pub fn sequential(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::Input(format!("degenerate sequential scale [{min}, {max}]")));
        }
        Ok(ColorScale::Sequential { min, max })
    }

    pub fn diverging(span: f64) -> Result<Self> {
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::Input(format!("diverging span must be positive, got {span}")));
        }
        Ok(ColorScale::Diverging { center: 0.0, span })
    }

    /// Min/max over defined cells. A constant or empty grid gets a unit
    /// wide range starting at its value (or at 0).
    pub fn sequential_for(grid: &CellGrid) -> Self {
        match grid.value_range() {
            Some((lo, hi)) if lo < hi => ColorScale::Sequential { min: lo, max: hi },
            Some((lo, _)) => ColorScale::Sequential { min: lo, max: lo + 1.0 },
            None => ColorScale::Sequential { min: 0.0, max: 1.0 },
        }
    }

    /// Span = largest |value| over defined cells, or 1 if that is zero.
    pub fn diverging_for(grid: &CellGrid) -> Self {
        let span = grid.cells().iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        ColorScale::Diverging {
            center: 0.0,
            span: if span > 0.0 && span.is_finite() { span } else { 1.0 },
        }
    }
}

fn channel(fraction: f64) -> u8 {
    (255.0 * fraction).round() as u8
}

pub fn render_grid_pgm(grid: &CellGrid, scale: &ColorScale) -> Result<String> {
    let ColorScale::Sequential { min, max } = *scale else {
        return Err(Error::Input("grayscale rendering needs a sequential scale".into()));
    };
    ColorScale::sequential(min, max)?;
    let m = grid.resolution();
    let mut out = format!("P2\n{m} {m}\n255\n");
    for y in (1..=m).rev() {
        let row: Vec<String> = (1..=m)
            .map(|x| match grid.get(x, y) {
                Some(v) => {
                    let t = ((v - min) / (max - min)).clamp(0.0, 1.0);
                    channel(1.0 - t).to_string()
                }
                None => "0".to_string(),
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    Ok(out)
}

pub fn render_grid_ppm(grid: &CellGrid, scale: &ColorScale) -> Result<String> {
    let ColorScale::Diverging { center, span } = *scale else {
        return Err(Error::Input("color rendering needs a diverging scale".into()));
    };
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::Input(format!("diverging span must be positive, got {span}")));
    }
    let m = grid.resolution();
    let mut out = format!("P3\n{m} {m}\n255\n");
    for y in (1..=m).rev() {
        let row: Vec<String> = (1..=m)
            .map(|x| {
                let (r, g, b) = match grid.get(x, y) {
                    None => (0, 0, 0),
                    Some(v) => {
                        let t = ((v - center) / span).clamp(-1.0, 1.0);
                        let fade = 255 - channel(t.abs());
                        if t >= 0.0 {
                            (255, fade, fade)
                        } else {
                            (fade, fade, 255)
                        }
                    }
                };
                format!("{r} {g} {b}")
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    Ok(out)
}

pub fn render_sequential(map: &CpMap, scale: &ColorScale) -> Result<String> {
    render_grid_pgm(&map.grid, scale)
}

pub fn render_diverging(delta: &DeltaMap, scale: &ColorScale) -> Result<String> {
    render_grid_ppm(&delta.grid, scale)
}

use crate::model::CavityGeometry;

use super::OracleError;

/// Smallest grid the solver accepts along either axis, in nodes.
pub const MIN_NODES: usize = 16;
/// Minimum nodes a via disk must cover.
pub const MIN_NODES_PER_VIA: usize = 4;

/// Where a [`DiscretizedCavity`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub geometry: CavityGeometry,
    /// Distance between the via-center rectangle and the outer Dirichlet box, m.
    pub margin: f64,
}

/// Uniform square grid over the cavity cross-section. Node `(i, j)` lives at
/// index `j * nx + i`; `true` in the mask marks a conductor (Dirichlet) node.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedCavity {
    spacing: f64,
    nx: usize,
    ny: usize,
    mask: Vec<bool>,
    via_count: usize,
    provenance: Option<Provenance>,
}

impl DiscretizedCavity {
    /// Empty solid-wall rectangle `width × length` with `intervals` grid
    /// intervals across the width. The length is rounded to a whole number
    /// of intervals.
    pub fn rectangle(width: f64, length: f64, intervals: usize) -> Result<Self, OracleError> {
        if !(width > 0.0 && length > 0.0) {
            return Err(OracleError::InvalidCavity("rectangle sides must be positive".into()));
        }
        let spacing = width / intervals as f64;
        let ny_int = (length / spacing).round() as usize;
        Self::boxed(spacing, intervals, ny_int, None)
    }

    fn boxed(
        spacing: f64,
        nx_int: usize,
        ny_int: usize,
        provenance: Option<Provenance>,
    ) -> Result<Self, OracleError> {
        let (nx, ny) = (nx_int + 1, ny_int + 1);
        if nx < MIN_NODES || ny < MIN_NODES {
            return Err(OracleError::ResolutionTooCoarse(format!(
                "grid is {nx}x{ny} nodes, need at least {MIN_NODES} per axis"
            )));
        }
        let mut mask = vec![false; nx * ny];
        for i in 0..nx {
            mask[i] = true;
            mask[(ny - 1) * nx + i] = true;
        }
        for j in 0..ny {
            mask[j * nx] = true;
            mask[j * nx + nx - 1] = true;
        }
        Ok(Self { spacing, nx, ny, mask, via_count: 0, provenance })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
    pub fn is_conductor(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.nx + i]
    }
    pub fn via_count(&self) -> usize {
        self.via_count
    }
    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }
    pub fn unknowns(&self) -> usize {
        self.mask.iter().filter(|m| !**m).count()
    }

    /// Node coordinate relative to the grid center along x.
    fn x(&self, i: usize) -> f64 {
        (i as f64 - (self.nx - 1) as f64 / 2.0) * self.spacing
    }

    fn y(&self, j: usize) -> f64 {
        (j as f64 - (self.ny - 1) as f64 / 2.0) * self.spacing
    }

    /// Same grid with every via removed (outer box only).
    pub fn without_vias(&self) -> Self {
        let mut out = Self::boxed(self.spacing, self.nx - 1, self.ny - 1, self.provenance)
            .expect("grid already validated");
        out.via_count = 0;
        out
    }

    /// Masks every node within `radius` of `(cx, cy)`; returns how many
    /// nodes the disk covers.
    fn stamp_disk(&mut self, cx: f64, cy: f64, radius: f64) -> usize {
        let r2 = radius * radius;
        let h = self.spacing;
        let lo_i = (((cx - radius) / h + (self.nx - 1) as f64 / 2.0).floor().max(0.0)) as usize;
        let hi_i = (((cx + radius) / h + (self.nx - 1) as f64 / 2.0).ceil() as usize).min(self.nx - 1);
        let lo_j = (((cy - radius) / h + (self.ny - 1) as f64 / 2.0).floor().max(0.0)) as usize;
        let hi_j = (((cy + radius) / h + (self.ny - 1) as f64 / 2.0).ceil() as usize).min(self.ny - 1);
        let mut covered = 0;
        for j in lo_j..=hi_j {
            let dy = self.y(j) - cy;
            for i in lo_i..=hi_i {
                let dx = self.x(i) - cx;
                if dx * dx + dy * dy <= r2 {
                    self.mask[j * self.nx + i] = true;
                    covered += 1;
                }
            }
        }
        covered
    }
}

/// Via centers on the `w × l` perimeter, centered on the origin. Each side
/// carries `round(side/p) + 1` evenly spaced vias; corners are shared.
pub fn via_centers(geometry: &CavityGeometry) -> Vec<(f64, f64)> {
    let (w, l, p) = (geometry.w(), geometry.l(), geometry.p());
    let count_w = (w / p).round().max(1.0) as usize + 1;
    let count_l = (l / p).round().max(1.0) as usize + 1;
    let along = |k: usize, count: usize, side: f64| {
        (k as f64 - (count - 1) as f64 / 2.0) * (side / (count - 1) as f64)
    };
    let mut centers = Vec::with_capacity(2 * (count_w + count_l));
    for k in 0..count_w {
        let x = along(k, count_w, w);
        centers.push((x, -l / 2.0));
        centers.push((x, l / 2.0));
    }
    for k in 1..count_l - 1 {
        let y = along(k, count_l, l);
        centers.push((-w / 2.0, y));
        centers.push((w / 2.0, y));
    }
    centers
}

/// Rasterizes the via-fenced cavity with `resolution` grid intervals per
/// via diameter (per pitch when `d = 0`).
///
/// The outer Dirichlet box sits one pitch outside the via-center rectangle.
pub fn rasterize(geometry: &CavityGeometry, resolution: usize) -> Result<DiscretizedCavity, OracleError> {
    if resolution < MIN_NODES_PER_VIA {
        return Err(OracleError::ResolutionTooCoarse(format!(
            "resolution {resolution} < {MIN_NODES_PER_VIA} nodes per via diameter"
        )));
    }
    let base = if geometry.d() > 0.0 { geometry.d() } else { geometry.p() };
    rasterize_with_spacing(geometry, base / resolution as f64)
}

pub fn rasterize_with_spacing(
    geometry: &CavityGeometry,
    spacing: f64,
) -> Result<DiscretizedCavity, OracleError> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(OracleError::InvalidCavity(format!("grid spacing must be positive, got {spacing}")));
    }
    let margin = geometry.p();
    let nx_int = ((geometry.w() + 2.0 * margin) / spacing).round() as usize;
    let ny_int = ((geometry.l() + 2.0 * margin) / spacing).round() as usize;
    let mut cavity =
        DiscretizedCavity::boxed(spacing, nx_int, ny_int, Some(Provenance { geometry: *geometry, margin }))?;
    if geometry.d() > 0.0 {
        let radius = geometry.d() / 2.0;
        let centers = via_centers(geometry);
        for &(cx, cy) in &centers {
            let covered = cavity.stamp_disk(cx, cy, radius);
            if covered < MIN_NODES_PER_VIA {
                return Err(OracleError::ResolutionTooCoarse(format!(
                    "via at ({cx:.3e}, {cy:.3e}) covers {covered} nodes, need {MIN_NODES_PER_VIA}"
                )));
            }
        }
        cavity.via_count = centers.len();
    }
    Ok(cavity)
}

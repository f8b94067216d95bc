//! Lattice regions: hexagons and hexagons with central bowtie holes.
//!
//! A hexagon `H(x, y, z)` has side lengths `x, y, z, x, y, z` in cyclic
//! order. In the coordinates used here its bottom and top sides have length
//! `x` and run east; the lower-right and upper-left sides have length `z` and
//! run north-east; the remaining two sides have length `y`. The west-bottom
//! corner sits at the axial origin.
//!
//! `B(x, y, z, k)` removes a bowtie from the center of `H(x, y, z)`: two
//! size-`k` lattice triangles meeting at the central lattice point, with
//! their free edges (the edges not touching the center) parallel to the
//! sides of length `z`. This requires `x, y, z, k` to share one parity.
//!
//! When `y` has parity opposite to `x` and `z`, the hexagon's center is
//! instead the midpoint of a unit lattice segment `s`. `B'(x, y, z, k)`
//! removes two size-`k` triangles whose apexes are the endpoints of `s`,
//! again with free edges parallel to the `z` sides.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell::{Orientation, TriCell};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("side lengths x={x}, y={y}, z={z} and lobe size k={k} violate the parity rule for {family:?}")]
    Parity {
        family: Family,
        x: u32,
        y: u32,
        z: u32,
        k: u32,
    },
    #[error("lobe size k={k} exceeds min(x, y, z) = {min}")]
    LobeTooLarge { k: u32, min: u32 },
    #[error("lobe separation must be odd, got {0}")]
    EvenGap(u32),
    #[error("region has no symmetry center")]
    NoCenter,
    #[error("cell {0:?} is not in the region")]
    CellOutside(TriCell),
}

/// The region families the library constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Hexagon,
    Bowtie,
    DisconnectedBowtie,
}

/// Construction parameters for a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionParams {
    pub family: Family,
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub k: u32,
}

impl RegionParams {
    pub fn validate(&self) -> Result<(), RegionError> {
        let RegionParams { family, x, y, z, k } = *self;
        let same = |a: u32, b: u32| a % 2 == b % 2;
        match family {
            Family::Hexagon => {
                if k != 0 {
                    return Err(RegionError::LobeTooLarge { k, min: 0 });
                }
                Ok(())
            }
            Family::Bowtie => {
                if !(same(x, y) && same(y, z) && same(z, k)) {
                    return Err(RegionError::Parity { family, x, y, z, k });
                }
                if k > x.min(y).min(z) {
                    return Err(RegionError::LobeTooLarge {
                        k,
                        min: x.min(y).min(z),
                    });
                }
                Ok(())
            }
            Family::DisconnectedBowtie => {
                if !(same(x, z) && !same(x, y)) {
                    return Err(RegionError::Parity { family, x, y, z, k });
                }
                if k > x.min(y).min(z) {
                    return Err(RegionError::LobeTooLarge {
                        k,
                        min: x.min(y).min(z),
                    });
                }
                Ok(())
            }
        }
    }
}

/// A finite set of unit triangles, optionally with a 180-degree symmetry
/// center (stored in doubled axial coordinates so half-integer centers stay
/// exact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    cells: BTreeSet<TriCell>,
    center2: Option<(i64, i64)>,
    label: String,
    params: Option<RegionParams>,
}

impl Region {
    /// Assemble a region from raw parts. The center, when given, must map
    /// the cell set onto itself.
    pub fn from_cells(
        cells: BTreeSet<TriCell>,
        center2: Option<(i64, i64)>,
        label: impl Into<String>,
    ) -> Region {
        let region = Region {
            cells,
            center2,
            label: label.into(),
            params: None,
        };
        if let Some(c2) = region.center2 {
            debug_assert!(region
                .cells
                .iter()
                .all(|c| region.cells.contains(&c.rotated180(c2))));
        }
        region
    }

    pub fn cells(&self) -> impl Iterator<Item = &TriCell> {
        self.cells.iter()
    }

    /// Cells in row-major order (row, then column, then orientation). This is
    /// the vertex order used by the dual graph.
    pub fn cells_sorted(&self) -> Vec<TriCell> {
        self.cells.iter().copied().collect()
    }

    pub fn cell_set(&self) -> &BTreeSet<TriCell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: &TriCell) -> bool {
        self.cells.contains(cell)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> Option<RegionParams> {
        self.params
    }

    /// Doubled axial coordinates of the symmetry center, if any.
    pub fn center2(&self) -> Option<(i64, i64)> {
        self.center2
    }

    pub fn up_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.orient == Orientation::Up)
            .count()
    }

    pub fn down_count(&self) -> usize {
        self.len() - self.up_count()
    }

    /// The image of a cell under the central involution.
    pub fn central_image(&self, cell: &TriCell) -> Result<TriCell, RegionError> {
        let c2 = self.center2.ok_or(RegionError::NoCenter)?;
        if !self.contains(cell) {
            return Err(RegionError::CellOutside(*cell));
        }
        Ok(cell.rotated180(c2))
    }

    /// Checks that the central involution is defined, fixed-point free,
    /// orientation-flipping and maps the region onto itself.
    pub fn symmetry_is_valid(&self) -> bool {
        let Some(c2) = self.center2 else { return false };
        self.cells.iter().all(|c| {
            let img = c.rotated180(c2);
            img != *c && self.cells.contains(&img) && img.rotated180(c2) == *c
        })
    }

    pub fn translated(&self, dc: i64, dr: i64) -> Region {
        Region {
            cells: self.cells.iter().map(|c| c.translated(dc, dr)).collect(),
            center2: self.center2.map(|(a, b)| (a + 2 * dc, b + 2 * dr)),
            label: self.label.clone(),
            params: self.params,
        }
    }

    /// The cell set shifted so its minimal column and row are zero. Two
    /// regions are translates of each other exactly when their normalized
    /// cell sets agree.
    pub fn normalized_cells(&self) -> BTreeSet<TriCell> {
        normalize_cells(&self.cells)
    }
}

pub(crate) fn normalize_cells(cells: &BTreeSet<TriCell>) -> BTreeSet<TriCell> {
    if cells.is_empty() {
        return BTreeSet::new();
    }
    let dc = cells.iter().map(|c| c.col).min().unwrap();
    let dr = cells.iter().map(|c| c.row).min().unwrap();
    cells.iter().map(|c| c.translated(-dc, -dr)).collect()
}

fn hexagon_cells(x: i64, y: i64, z: i64) -> BTreeSet<TriCell> {
    let mut cells = BTreeSet::new();
    for r in 0..(z + y) {
        for c in -y..x {
            if (0..=(x + z - 1)).contains(&(c + r)) {
                cells.insert(TriCell::up(c, r));
            }
            if (-1..=(x + z - 2)).contains(&(c + r)) {
                cells.insert(TriCell::down(c, r));
            }
        }
    }
    cells
}

fn hexagon_center2(x: i64, y: i64, z: i64) -> (i64, i64) {
    (x - y, z + y)
}

/// Down-pointing lattice triangle of side `k` whose top-left corner sits at
/// `apex`; the side opposite the apex is parallel to the north-east lattice
/// direction.
fn lobe_cells(apex: (i64, i64), k: i64) -> BTreeSet<TriCell> {
    let (u, v) = apex;
    let mut cells = BTreeSet::new();
    for r in (v - k)..v {
        for c in u..(u + k) {
            if c + r >= u + v {
                cells.insert(TriCell::up(c, r));
            }
            if c + r >= u + v - 1 {
                cells.insert(TriCell::down(c, r));
            }
        }
    }
    cells
}

/// The hexagon `H(x, y, z)`. Degenerate sides are allowed; a zero side gives
/// a parallelogram and two zero sides an empty region.
pub fn build_hexagon(x: u32, y: u32, z: u32) -> Region {
    let (xi, yi, zi) = (x as i64, y as i64, z as i64);
    Region {
        cells: hexagon_cells(xi, yi, zi),
        center2: Some(hexagon_center2(xi, yi, zi)),
        label: format!("H({x},{y},{z})"),
        params: Some(RegionParams {
            family: Family::Hexagon,
            x,
            y,
            z,
            k: 0,
        }),
    }
}

/// The bowtie region `B(x, y, z, k)`.
pub fn carve_bowtie(x: u32, y: u32, z: u32, k: u32) -> Result<Region, RegionError> {
    let params = RegionParams {
        family: Family::Bowtie,
        x,
        y,
        z,
        k,
    };
    params.validate()?;
    let (xi, yi, zi, ki) = (x as i64, y as i64, z as i64, k as i64);
    let mut cells = hexagon_cells(xi, yi, zi);
    let c2 = hexagon_center2(xi, yi, zi);
    let apex = (c2.0 / 2, c2.1 / 2);
    remove_lobes(&mut cells, c2, apex, ki);
    Ok(Region {
        cells,
        center2: Some(c2),
        label: format!("B({x},{y},{z},{k})"),
        params: Some(params),
    })
}

/// The disconnected bowtie region `B'(x, y, z, k)`.
pub fn carve_disconnected_bowtie(x: u32, y: u32, z: u32, k: u32) -> Result<Region, RegionError> {
    let params = RegionParams {
        family: Family::DisconnectedBowtie,
        x,
        y,
        z,
        k,
    };
    params.validate()?;
    let region = carve_separated_bowtie(x, y, z, k, 1)?;
    Ok(Region {
        params: Some(params),
        label: format!("B'({x},{y},{z},{k})"),
        ..region
    })
}

/// Generalization of [`carve_disconnected_bowtie`] with the lobe apexes
/// `gap` lattice units apart instead of one. `gap` must be odd so the
/// midpoint of the joining segment is the hexagon center. `gap = 1` is the
/// standard disconnected bowtie; larger gaps leave room between the lobes
/// and are used to exercise the correction term of the disk identity.
pub fn carve_separated_bowtie(
    x: u32,
    y: u32,
    z: u32,
    k: u32,
    gap: u32,
) -> Result<Region, RegionError> {
    if gap % 2 == 0 {
        return Err(RegionError::EvenGap(gap));
    }
    let probe = RegionParams {
        family: Family::DisconnectedBowtie,
        x,
        y,
        z,
        k,
    };
    probe.validate()?;
    let (xi, yi, zi, ki, g) = (x as i64, y as i64, z as i64, k as i64, gap as i64);
    let mut cells = hexagon_cells(xi, yi, zi);
    let c2 = hexagon_center2(xi, yi, zi);
    let apex = ((c2.0 + g) / 2, (c2.1 - g) / 2);
    remove_lobes(&mut cells, c2, apex, ki);
    Ok(Region {
        cells,
        center2: Some(c2),
        label: format!("B'({x},{y},{z},{k};gap {gap})"),
        params: None,
    })
}

fn remove_lobes(cells: &mut BTreeSet<TriCell>, c2: (i64, i64), apex: (i64, i64), k: i64) {
    let lobe1 = lobe_cells(apex, k);
    let lobe2: BTreeSet<TriCell> = lobe1.iter().map(|c| c.rotated180(c2)).collect();
    debug_assert!(
        lobe1.iter().all(|c| cells.contains(c)),
        "lobe escapes the hexagon"
    );
    debug_assert!(
        lobe2.iter().all(|c| cells.contains(c)),
        "lobe escapes the hexagon"
    );
    debug_assert!(lobe1.is_disjoint(&lobe2));
    for c in lobe1.iter().chain(lobe2.iter()) {
        cells.remove(c);
    }
}

/// Apex of the first removed lobe (the one south-east of the center), in
/// axial coordinates, for bowtie-family regions built by this module.
pub fn lobe_apex(params: &RegionParams, gap: u32) -> (i64, i64) {
    let c2 = hexagon_center2(params.x as i64, params.y as i64, params.z as i64);
    match params.family {
        Family::Hexagon | Family::Bowtie => (c2.0 / 2, c2.1 / 2),
        Family::DisconnectedBowtie => ((c2.0 + gap as i64) / 2, (c2.1 - gap as i64) / 2),
    }
}

/// Construct the region described by `params`.
pub fn build_region(params: &RegionParams) -> Result<Region, RegionError> {
    match params.family {
        Family::Hexagon => {
            params.validate()?;
            Ok(build_hexagon(params.x, params.y, params.z))
        }
        Family::Bowtie => carve_bowtie(params.x, params.y, params.z, params.k),
        Family::DisconnectedBowtie => {
            carve_disconnected_bowtie(params.x, params.y, params.z, params.k)
        }
    }
}

/// Serialized form of a region: the construction parameters plus the
/// explicit cell list as `[row, col, "U"|"D"]` triples.
#[derive(Serialize, Deserialize)]
pub struct RegionJson {
    pub family: Option<Family>,
    pub x: Option<u32>,
    pub y: Option<u32>,
    pub z: Option<u32>,
    pub k: Option<u32>,
    pub center2: Option<(i64, i64)>,
    pub cells: Vec<TriCell>,
}

impl From<&Region> for RegionJson {
    fn from(region: &Region) -> Self {
        RegionJson {
            family: region.params.map(|p| p.family),
            x: region.params.map(|p| p.x),
            y: region.params.map(|p| p.y),
            z: region.params.map(|p| p.z),
            k: region.params.map(|p| p.k),
            center2: region.center2,
            cells: region.cells_sorted(),
        }
    }
}

impl From<RegionJson> for Region {
    fn from(json: RegionJson) -> Self {
        let label = match (json.family, json.x, json.y, json.z, json.k) {
            (Some(f), Some(x), Some(y), Some(z), Some(k)) => format!("{f:?}({x},{y},{z},{k})"),
            _ => "region".to_string(),
        };
        let mut region = Region::from_cells(json.cells.into_iter().collect(), json.center2, label);
        region.params = match (json.family, json.x, json.y, json.z, json.k) {
            (Some(family), Some(x), Some(y), Some(z), Some(k)) => {
                Some(RegionParams { family, x, y, z, k })
            }
            _ => None,
        };
        region
    }
}

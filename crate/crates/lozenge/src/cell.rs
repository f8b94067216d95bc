//! Unit triangles of the triangular lattice.
//!
//! The lattice is described in axial coordinates: lattice points are integer
//! pairs `(c, r)` mapping to the Cartesian point `(c + r/2, r*sqrt(3)/2)`.
//! Each lattice row `r` holds a strip of unit triangles alternating between
//! up-pointing and down-pointing:
//!
//! * the up triangle at `(c, r)` has corners `(c, r)`, `(c+1, r)`, `(c, r+1)`,
//! * the down triangle at `(c, r)` has corners `(c+1, r)`, `(c, r+1)`, `(c+1, r+1)`.
//!
//! Two triangles are adjacent exactly when they share a unit edge, and
//! adjacency always joins an up triangle to a down triangle.

use serde::{Deserialize, Serialize};

/// Which way a unit triangle points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

/// One unit triangle, identified by its row, its position within the row, and
/// its orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriCell {
    pub row: i64,
    pub col: i64,
    pub orient: Orientation,
}

impl TriCell {
    pub fn up(col: i64, row: i64) -> TriCell {
        TriCell {
            row,
            col,
            orient: Orientation::Up,
        }
    }

    pub fn down(col: i64, row: i64) -> TriCell {
        TriCell {
            row,
            col,
            orient: Orientation::Down,
        }
    }

    /// The three potential edge-neighbours of this cell. All have the
    /// opposite orientation; whether they exist in a given region is a
    /// separate question.
    pub fn neighbors(&self) -> [TriCell; 3] {
        let (c, r) = (self.col, self.row);
        match self.orient {
            Orientation::Up => [
                TriCell::down(c, r),
                TriCell::down(c - 1, r),
                TriCell::down(c, r - 1),
            ],
            Orientation::Down => [
                TriCell::up(c, r),
                TriCell::up(c + 1, r),
                TriCell::up(c, r + 1),
            ],
        }
    }

    /// Corner lattice points in axial coordinates.
    pub fn corners(&self) -> [(i64, i64); 3] {
        let (c, r) = (self.col, self.row);
        match self.orient {
            Orientation::Up => [(c, r), (c + 1, r), (c, r + 1)],
            Orientation::Down => [(c + 1, r), (c, r + 1), (c + 1, r + 1)],
        }
    }

    /// Centroid in axial coordinates scaled by 6, so that it is exact.
    pub fn centroid6(&self) -> (i64, i64) {
        let (c, r) = (self.col, self.row);
        match self.orient {
            Orientation::Up => (6 * c + 2, 6 * r + 2),
            Orientation::Down => (6 * c + 4, 6 * r + 4),
        }
    }

    pub fn translated(&self, dc: i64, dr: i64) -> TriCell {
        TriCell {
            row: self.row + dr,
            col: self.col + dc,
            orient: self.orient,
        }
    }

    /// Image under the 180-degree rotation about the point with doubled axial
    /// coordinates `center2`. Orientation flips; the composition with itself
    /// is the identity.
    pub fn rotated180(&self, center2: (i64, i64)) -> TriCell {
        let s = center2.0 - 1;
        let t = center2.1 - 1;
        TriCell {
            row: t - self.row,
            col: s - self.col,
            orient: self.orient.flipped(),
        }
    }
}

impl Serialize for TriCell {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let o = match self.orient {
            Orientation::Up => "U",
            Orientation::Down => "D",
        };
        (self.row, self.col, o).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TriCell {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let (row, col, o): (i64, i64, String) = Deserialize::deserialize(de)?;
        let orient = match o.as_str() {
            "U" => Orientation::Up,
            "D" => Orientation::Down,
            other => {
                return Err(serde::de::Error::custom(format!(
                    "orientation must be \"U\" or \"D\", got {other:?}"
                )))
            }
        };
        Ok(TriCell { row, col, orient })
    }
}

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Mdd, Point};
use crate::cayley::CayleyDigraph;
use crate::error::{Error, Result};
use crate::zmatrix::IntMatrix;

/// `L(l, h, w, y)`: the `l × h` rectangle with its top-right `w × y` corner
/// removed. Rectangles are stored with `w = y = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LShape {
    pub l: u64,
    pub h: u64,
    pub w: u64,
    pub y: u64,
}

impl LShape {
    pub fn new(l: u64, h: u64, w: u64, y: u64) -> Result<Self> {
        if w >= l || y >= h {
            return Err(Error::NotLShape(format!(
                "L({l},{h},{w},{y}) needs w < l and y < h"
            )));
        }
        // a notch with one side zero is a rectangle
        let (w, y) = if w == 0 || y == 0 { (0, 0) } else { (w, y) };
        Ok(LShape { l, h, w, y })
    }

    pub fn area(&self) -> u64 {
        self.l * self.h - self.w * self.y
    }

    pub fn is_rectangle(&self) -> bool {
        self.w == 0 || self.y == 0
    }

    /// Column height at `x`.
    fn height(&self, x: u64) -> u64 {
        if x + self.w >= self.l && self.w > 0 {
            self.h - self.y
        } else {
            self.h
        }
    }

    /// The cubes of the shape, in lexicographic order.
    pub fn cells(&self) -> Vec<Point> {
        (0..self.l)
            .flat_map(|x| (0..self.height(x)).map(move |z| vec![x, z]))
            .collect()
    }

    pub fn dilate(&self, m: u64) -> LShape {
        LShape {
            l: m * self.l,
            h: m * self.h,
            w: m * self.w,
            y: m * self.y,
        }
    }
}

impl fmt::Display for LShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{},{},{})", self.l, self.h, self.w, self.y)
    }
}

/// Reads the L-shape off a planar MDD from its column heights.
pub fn extract_lshape(h: &Mdd) -> Result<LShape> {
    if h.source().degree() != 2 {
        return Err(Error::UnsupportedDegree(h.source().degree() as u32));
    }
    let mut heights: Vec<u64> = Vec::new();
    for p in h.points() {
        let (x, z) = (p[0] as usize, p[1]);
        if heights.len() <= x {
            heights.resize(x + 1, 0);
        }
        heights[x] = heights[x].max(z + 1);
    }
    let area: u64 = heights.iter().sum();
    if area != h.len() as u64 || heights.contains(&0) {
        return Err(Error::NotLShape("columns are not contiguous".into()));
    }
    let first = heights[0];
    let last = *heights.last().expect("nonempty");
    let l = heights.len() as u64;
    let w = heights
        .iter()
        .filter(|&&c| c == last && last != first)
        .count() as u64;
    let shape = LShape::new(l, first, w, first - last)?;
    let expected = shape.cells();
    if expected.as_slice() != h.points() {
        return Err(Error::NotLShape(format!("column heights {heights:?}")));
    }
    Ok(shape)
}

/// Checks the degree-2 characterization of an L-shape against
/// `Cay(Z_{s_1} ⊕ Z_{s_2}, {a, b})`:
/// area `n = lh - wy`, `s_1 = gcd(l,h,w,y)`, `la = yb`, `wa = hb`, and
/// `(l - y)(h - w) ≥ 0` with at most one factor vanishing.
///
/// A rectangle tiles with a shear that the normalized form drops, so for
/// rectangles every `L(l,h,w,0)` and `L(l,h,0,y)` is tried.
pub fn lshape_validate(shape: &LShape, g: &CayleyDigraph) -> bool {
    if g.degree() != 2 || shape.w >= shape.l || shape.y >= shape.h {
        return false;
    }
    let LShape { l, h, .. } = *shape;
    if shape.is_rectangle() {
        (0..l).any(|w| notch_conditions(l, h, w, 0, g))
            || (1..h).any(|y| notch_conditions(l, h, 0, y, g))
    } else {
        notch_conditions(l, h, shape.w, shape.y, g)
    }
}

fn notch_conditions(l: u64, h: u64, w: u64, y: u64, g: &CayleyDigraph) -> bool {
    let group = g.group();
    if (l * h).checked_sub(w * y) != Some(g.order()) {
        return false;
    }
    let gcd = [h, w, y].iter().fold(l, |acc, &v| acc.gcd(&v));
    if gcd != group.moduli()[0] {
        return false;
    }
    let (a, b) = (&g.gens()[0], &g.gens()[1]);
    if group.scalar_mul(l, a) != group.scalar_mul(y, b) {
        return false;
    }
    if group.scalar_mul(w, a) != group.scalar_mul(h, b) {
        return false;
    }
    let f1 = l as i128 - y as i128;
    let f2 = h as i128 - w as i128;
    f1 * f2 >= 0 && !(f1 == 0 && f2 == 0)
}

/// Tessellation matrices the shape may tile by: the normalized one, plus
/// every sheared `[[l,-w],[0,h]]` and `[[l,0],[-y,h]]` for rectangles.
pub(crate) fn tessellation_candidates(shape: &LShape) -> Vec<IntMatrix> {
    if !shape.is_rectangle() {
        return vec![lshape_tessellation_matrix(shape)];
    }
    let (l, h) = (shape.l as i64, shape.h as i64);
    let rows = |w: i64, y: i64| IntMatrix::from_rows(&[vec![l, -w], vec![-y, h]]).expect("2x2");
    (0..l)
        .map(|w| rows(w, 0))
        .chain((1..h).map(|y| rows(0, y)))
        .collect()
}

/// `D(H) = l + h - min(w, y)`.
pub fn lshape_solid_diameter(shape: &LShape) -> u64 {
    shape.l + shape.h - shape.w.min(shape.y)
}

/// Columns `m_1 = (l, -y)` and `m_2 = (-w, h)`.
pub fn lshape_tessellation_matrix(shape: &LShape) -> IntMatrix {
    let LShape { l, h, w, y } = *shape;
    IntMatrix::from_rows(&[vec![l as i64, -(w as i64)], vec![-(y as i64), h as i64]]).expect("2x2")
}

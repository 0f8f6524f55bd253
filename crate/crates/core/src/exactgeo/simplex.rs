use num_traits::{One, Signed, Zero};

use super::{QMatrix, Rat};
use crate::error::{Error, Result};

pub type Point = Vec<Rat>;

/// Affinely independent points with an orientation twist on their order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSimplex {
    points: Vec<Point>,
    orientation: i64,
}

/// An oriented linear subspace: the column span of `basis`, oriented by the
/// columns in order times `weight`. A zero-column frame is a signed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub basis: QMatrix,
    pub weight: i64,
}

impl Frame {
    pub fn new(basis: QMatrix, weight: i64) -> Self {
        assert!(weight == 1 || weight == -1);
        Frame { basis, weight }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn reversed(&self) -> Frame {
        Frame { basis: self.basis.clone(), weight: -self.weight }
    }
}

impl AffineSimplex {
    pub fn new(points: Vec<Point>, orientation: i64) -> Result<Self> {
        if orientation != 1 && orientation != -1 {
            return Err(Error::Input("orientation must be +1 or -1".into()));
        }
        let Some(first) = points.first() else {
            return Err(Error::Input("simplex without points".into()));
        };
        let d = first.len();
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::Input("points of different dimensions".into()));
        }
        let s = AffineSimplex { points, orientation };
        if s.dim() > d || s.edge_matrix().rank() < s.dim() {
            return Err(Error::Degenerate("affinely dependent simplex vertices".into()));
        }
        Ok(s)
    }

    pub fn from_ints(points: &[Vec<i64>], orientation: i64) -> Result<Self> {
        Self::new(points.iter().map(|p| p.iter().map(|&x| super::rat(x)).collect()).collect(), orientation)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn orientation(&self) -> i64 {
        self.orientation
    }

    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn reversed(&self) -> AffineSimplex {
        AffineSimplex { points: self.points.clone(), orientation: -self.orientation }
    }

    pub fn with_orientation(&self, orientation: i64) -> AffineSimplex {
        AffineSimplex { points: self.points.clone(), orientation }
    }

    /// `[p_1 - p_0 | … | p_m - p_0]`.
    pub fn edge_matrix(&self) -> QMatrix {
        edge_matrix(&self.points)
    }

    pub fn frame(&self) -> Frame {
        Frame::new(self.edge_matrix(), self.orientation)
    }

    /// The facet omitting vertex `i`, with reference orientation.
    pub fn facet(&self, i: usize) -> AffineSimplex {
        let mut points = self.points.clone();
        points.remove(i);
        AffineSimplex { points, orientation: 1 }
    }
}

pub(crate) fn edge_matrix(points: &[Point]) -> QMatrix {
    let d = points[0].len();
    let cols: Vec<Vec<Rat>> =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()).collect();
    QMatrix::from_columns(d, &cols)
}

/// A common point of r simplices together with its barycentric coordinates
/// (vertex order) in each simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub point: Point,
    pub barycentric: Vec<Vec<Rat>>,
}

/// System `p_{i,0} + B_i s_i = y` for all i, in unknowns `(s_1, …, s_r, y)`.
fn hull_system(point_sets: &[&[Point]]) -> (QMatrix, Vec<Rat>) {
    let d = point_sets[0][0].len();
    let r = point_sets.len();
    let edge_cols: usize = point_sets.iter().map(|p| p.len() - 1).sum();
    let mut m = QMatrix::zeros(d * r, edge_cols + d);
    let mut rhs = vec![Rat::zero(); d * r];
    let mut col = 0;
    for (i, pts) in point_sets.iter().enumerate() {
        let b = edge_matrix(pts);
        for a in 0..d {
            for j in 0..b.cols() {
                m[(i * d + a, col + j)] = b[(a, j)].clone();
            }
            m[(i * d + a, edge_cols + a)] = -Rat::one();
            rhs[i * d + a] = -pts[0][a].clone();
        }
        col += b.cols();
    }
    (m, rhs)
}

/// The unique point where the affine hulls meet, if it lies in the open
/// relative interior of every simplex.
///
/// A singular system or a barycentric coordinate equal to zero violates
/// general position and is reported as [`Error::Degenerate`].
pub fn intersection_point(simplices: &[AffineSimplex]) -> Result<Option<Intersection>> {
    let r = simplices.len();
    if r < 2 {
        return Err(Error::Input("need at least two simplices".into()));
    }
    let d = simplices[0].ambient_dim();
    if simplices.iter().any(|s| s.ambient_dim() != d) {
        return Err(Error::Input("simplices live in different ambient spaces".into()));
    }
    let total: usize = simplices.iter().map(AffineSimplex::dim).sum();
    if total != d * (r - 1) {
        return Err(Error::Input(format!("dimension sum {total} differs from d(r-1) = {}", d * (r - 1))));
    }
    let sets: Vec<&[Point]> = simplices.iter().map(|s| s.points()).collect();
    let (m, rhs) = hull_system(&sets);
    let sol = m.solve(&rhs).ok_or_else(|| Error::Degenerate("affine hulls not transverse".into()))?;
    let point: Point = sol[total..].to_vec();
    let mut barycentric = Vec::with_capacity(r);
    let mut col = 0;
    for s in simplices {
        let edge = &sol[col..col + s.dim()];
        col += s.dim();
        let lambda0 = Rat::one() - edge.iter().sum::<Rat>();
        barycentric.push(std::iter::once(lambda0).chain(edge.iter().cloned()).collect::<Vec<Rat>>());
    }
    // a point outside some closed simplex is no contact at all
    if barycentric.iter().flatten().any(Signed::is_negative) {
        return Ok(None);
    }
    if barycentric.iter().flatten().any(Zero::is_zero) {
        return Err(Error::Degenerate("intersection on a simplex boundary".into()));
    }
    Ok(Some(Intersection { point, barycentric }))
}

/// Whether the affine hulls of the given point sets have a common point.
pub fn hulls_meet(point_sets: &[&[Point]]) -> bool {
    let (m, rhs) = hull_system(point_sets);
    m.is_consistent(&rhs)
}

/// Dimension of the intersection of the affine hulls, `None` if empty.
pub fn affine_hull_intersection_dim(point_sets: &[&[Point]]) -> Option<usize> {
    let (m, rhs) = hull_system(point_sets);
    if !m.is_consistent(&rhs) {
        return None;
    }
    let nullity = m.cols() - m.rank();
    let redundancy: usize = point_sets
        .iter()
        .map(|p| {
            let b = edge_matrix(p);
            b.cols() - b.rank()
        })
        .sum();
    Some(nullity - redundancy)
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_frac};
    use super::*;

    fn seg(a: [i64; 2], b: [i64; 2]) -> AffineSimplex {
        AffineSimplex::from_ints(&[a.to_vec(), b.to_vec()], 1).unwrap()
    }

    #[test]
    fn crossing_segments_meet_at_origin() {
        let hit = intersection_point(&[seg([-1, 0], [1, 0]), seg([0, -1], [0, 1])]).unwrap().unwrap();
        assert_eq!(hit.point, vec![rat(0), rat(0)]);
        for b in &hit.barycentric {
            assert_eq!(b, &vec![rat_frac(1, 2), rat_frac(1, 2)]);
        }
    }

    #[test]
    fn translated_segments_miss() {
        assert!(intersection_point(&[seg([2, 0], [3, 0]), seg([0, -1], [0, 1])]).unwrap().is_none());
    }

    #[test]
    fn endpoint_on_line_outside_other_segment_misses() {
        // lines cross at (1, 0): an endpoint of the first, outside the second
        assert!(intersection_point(&[seg([0, 0], [1, 0]), seg([1, 1], [1, 2])]).unwrap().is_none());
    }

    #[test]
    fn parallel_segments_are_degenerate() {
        let r = intersection_point(&[seg([0, 0], [1, 0]), seg([0, 1], [1, 1])]);
        assert!(matches!(r, Err(Error::Degenerate(_))));
        let touching = intersection_point(&[seg([0, 0], [2, 0]), seg([0, 0], [0, 1])]);
        assert!(matches!(touching, Err(Error::Degenerate(_))));
    }

    #[test]
    fn three_triangles_through_a_point() {
        // Triangles built around y = (1, 2, 3) with y at known barycentric weights.
        let y = [rat(1), rat(2), rat(3)];
        let raw: [[[i64; 3]; 2]; 3] = [[[5, 0, 1], [-2, 7, 3]], [[0, -3, 8], [4, 4, -1]], [[-6, 1, 0], [2, 9, 9]]];
        let weights = [rat_frac(1, 3), rat_frac(1, 4), rat_frac(1, 5)];
        let simplices: Vec<AffineSimplex> = raw
            .iter()
            .zip(&weights)
            .map(|(pts, w)| {
                let p0: Point = pts[0].iter().map(|&x| rat(x)).collect();
                let p1: Point = pts[1].iter().map(|&x| rat(x)).collect();
                // y = w p0 + w p1 + (1 - 2w) p2
                let rest = rat(1) - w * rat(2);
                let p2: Point = (0..3).map(|a| (&y[a] - w * &p0[a] - w * &p1[a]) / &rest).collect();
                AffineSimplex::new(vec![p0, p1, p2], 1).unwrap()
            })
            .collect();
        let hit = intersection_point(&simplices).unwrap().unwrap();
        assert_eq!(hit.point, y.to_vec());
    }

    #[test]
    fn hull_intersection_dimensions() {
        let pts = |v: &[[i64; 3]]| -> Vec<Point> { v.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect() };
        let plane1 = pts(&[[0, 0, 0], [1, 0, 0], [0, 1, 0]]);
        let plane2 = pts(&[[0, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(affine_hull_intersection_dim(&[&plane1, &plane2]), Some(1));
        let shifted = pts(&[[0, 0, 1], [1, 0, 1], [0, 1, 1]]);
        assert_eq!(affine_hull_intersection_dim(&[&plane1, &shifted]), None);
        assert!(!hulls_meet(&[&plane1, &shifted]));
        let repeated = pts(&[[0, 0, 0], [1, 0, 0], [2, 0, 0]]);
        assert_eq!(affine_hull_intersection_dim(&[&repeated, &plane2]), Some(0));
    }
}

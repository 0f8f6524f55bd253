//! Orientation signs of transverse intersections.
//!
//! Every route takes the orientation of the ambient space as `ambient = ±1`
//! relative to the standard basis, so that restriction can recurse into
//! subspaces carrying an arbitrary orientation.

use num_traits::{One, Zero};

use super::{AffineSimplex, Frame, QMatrix, Rat};
use crate::error::{Error, Result};

fn parity(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `ε_{d,m_1,…,m_r} = (-1)^t` with
/// `t = Σ_i (r-i)·d·(d-m_i) + Σ_{i<j} (d-m_i)(d-m_j)`.
pub fn epsilon(d: usize, dims: &[usize]) -> Result<i64> {
    let r = dims.len();
    if r < 1 || dims.iter().sum::<usize>() != d * (r - 1) || dims.iter().any(|&m| m > d) {
        return Err(Error::Input(format!("dimensions {dims:?} do not sum to d(r-1) with d = {d}")));
    }
    let codim: Vec<usize> = dims.iter().map(|&m| d - m).collect();
    let mut t = 0usize;
    for (i, c) in codim.iter().enumerate() {
        t += (r - 1 - i) * d * c;
        t += codim[i + 1..].iter().map(|c2| c * c2).sum::<usize>();
    }
    Ok(parity(t))
}

/// `ε_{r,k}`: `-1` iff `k` is odd and `r ≡ 2 (mod 4)`.
pub fn epsilon_rk(r: usize, k: usize) -> i64 {
    if k % 2 == 1 && r % 4 == 2 {
        -1
    } else {
        1
    }
}

fn ambient_basis(d: usize, ambient: i64) -> QMatrix {
    let mut o = QMatrix::identity(d);
    if ambient < 0 {
        o[(0, 0)] = -Rat::one();
    }
    o
}

fn check_frames(frames: &[Frame]) -> Result<usize> {
    let Some(first) = frames.first() else {
        return Err(Error::Input("no frames".into()));
    };
    let d = first.ambient_dim();
    if frames.iter().any(|f| f.ambient_dim() != d) {
        return Err(Error::Input("frames in different ambient spaces".into()));
    }
    let r = frames.len();
    let total: usize = frames.iter().map(Frame::dim).sum();
    if r >= 2 && total != d * (r - 1) {
        return Err(Error::Input(format!("dimension sum {total} differs from d(r-1) = {}", d * (r - 1))));
    }
    Ok(d)
}

/// The product-versus-diagonal route:
/// `ε_{d,m} · sign det[M_P | M_δ] · sign det M · Π w_i`, where `M_P` is
/// block-diagonal in the frame bases and `M_δ` stacks copies of the ambient basis.
pub fn det_route_sign(frames: &[Frame], ambient: i64) -> Result<i64> {
    let d = check_frames(frames)?;
    if d == 0 {
        return Err(Error::Input("determinant route needs d >= 1".into()));
    }
    let r = frames.len();
    let dims: Vec<usize> = frames.iter().map(Frame::dim).collect();
    let eps = epsilon(d, &dims)?;
    let o = ambient_basis(d, ambient);
    let n = d * r;
    let mut m = QMatrix::zeros(n, n);
    let mut col = 0;
    for (i, f) in frames.iter().enumerate() {
        for a in 0..d {
            for j in 0..f.dim() {
                m[(i * d + a, col + j)] = f.basis[(a, j)].clone();
            }
            for b in 0..d {
                m[(i * d + a, n - d + b)] = o[(a, b)].clone();
            }
        }
        col += f.dim();
    }
    let s = m.det_sign();
    if s == 0 {
        return Err(Error::Degenerate("non-transverse intersection".into()));
    }
    let weights: i64 = frames.iter().map(|f| f.weight).product();
    let big_m = if r % 2 == 1 { ambient } else { 1 };
    Ok(eps * s * big_m * weights)
}

/// r-fold intersection sign of oriented simplices in standard-oriented `Q^d`.
pub fn r_fold_sign(simplices: &[AffineSimplex]) -> Result<i64> {
    let frames: Vec<Frame> = simplices.iter().map(AffineSimplex::frame).collect();
    det_route_sign(&frames, 1)
}

/// Basis of the intersection of the column spans (unoriented).
pub fn intersect_subspaces(bases: &[&QMatrix]) -> QMatrix {
    let mut cur = bases[0].clone();
    for b in &bases[1..] {
        cur = intersect_two(&cur, b);
    }
    cur
}

fn intersect_two(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let d = a.rows();
    let mut neg_b = b.clone();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            neg_b[(i, j)] = -b[(i, j)].clone();
        }
    }
    let stacked = QMatrix::hstack(d, &[a, &neg_b]);
    let cols: Vec<Vec<Rat>> = stacked.nullspace().into_iter().map(|v| a.mul_vec(&v[..a.cols()])).collect();
    // Drop dependent vectors (only possible if `a` has dependent columns).
    let (_, pivots) = QMatrix::from_columns(d, &cols).rref();
    let keep: Vec<Vec<Rat>> = pivots.iter().map(|&j| cols[j].clone()).collect();
    QMatrix::from_columns(d, &keep)
}

/// The unraveled definition for a 0-dimensional intersection:
/// `γ_i` spans `∩_{j≠i} L_j`, `ε = sign det[γ_r|…|γ_1]`,
/// `ε_i = sign det(B_iᵀ[γ_r … γ̂_i … γ_1]) · w_i`, result `ε^{r-1} Π ε_i`.
pub fn unraveled_sign(frames: &[Frame], ambient: i64) -> Result<i64> {
    let d = check_frames(frames)?;
    let r = frames.len();
    let gammas: Vec<QMatrix> = (0..r)
        .map(|i| {
            let others: Vec<&QMatrix> =
                frames.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| &f.basis).collect();
            intersect_subspaces(&others)
        })
        .collect();
    for (i, g) in gammas.iter().enumerate() {
        if g.cols() != d - frames[i].dim() {
            return Err(Error::Degenerate("non-transverse intersection".into()));
        }
    }
    let reversed: Vec<&QMatrix> = gammas.iter().rev().collect();
    let all = QMatrix::hstack(d, &reversed);
    let eps = ambient * all.det_sign();
    if eps == 0 {
        return Err(Error::Degenerate("non-transverse intersection".into()));
    }
    let mut sign = if r % 2 == 0 { eps } else { 1 };
    for (i, f) in frames.iter().enumerate() {
        if f.dim() == 0 {
            sign *= f.weight;
            continue;
        }
        let rest: Vec<&QMatrix> = gammas.iter().enumerate().rev().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
        let h = QMatrix::hstack(d, &rest);
        let s = f.basis.transpose().mul(&h).det_sign();
        if s == 0 {
            return Err(Error::Degenerate("non-transverse intersection".into()));
        }
        sign *= s * f.weight;
    }
    Ok(sign)
}

/// Complete the columns of `c` (independent, in `Q^n`) to a basis of `Q^n`
/// with standard basis vectors; returns the added vectors.
fn complete_basis(c: &QMatrix) -> Vec<Vec<Rat>> {
    let n = c.rows();
    let mut cols = c.columns();
    let mut added = Vec::new();
    for e in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![Rat::zero(); n];
        v[e] = Rat::one();
        cols.push(v.clone());
        if QMatrix::from_columns(n, &cols).rank() == cols.len() {
            added.push(v);
        } else {
            cols.pop();
        }
    }
    added
}

/// Induced orientation on `L_1 ∩ L_2`: the basis `α` oriented so that
/// `α∧β_1∧β_2` matches the ambient orientation, where `α∧β_i` orients `L_i`.
pub fn oriented_intersection(f1: &Frame, f2: &Frame, ambient: i64) -> Result<Frame> {
    let d = f1.ambient_dim();
    if f2.ambient_dim() != d {
        return Err(Error::Input("frames in different ambient spaces".into()));
    }
    let (m1, m2) = (f1.dim(), f2.dim());
    if m1 + m2 < d {
        return Err(Error::Degenerate("subspaces cannot span the ambient space".into()));
    }
    let ell = m1 + m2 - d;
    let mut neg_b2 = f2.basis.clone();
    for i in 0..d {
        for j in 0..m2 {
            neg_b2[(i, j)] = -f2.basis[(i, j)].clone();
        }
    }
    let kernel = QMatrix::hstack(d, &[&f1.basis, &neg_b2]).nullspace();
    if kernel.len() != ell {
        return Err(Error::Degenerate("non-transverse subspaces".into()));
    }
    let coeff1: Vec<Vec<Rat>> = kernel.iter().map(|v| v[..m1].to_vec()).collect();
    let coeff2: Vec<Vec<Rat>> = kernel.iter().map(|v| v[m1..].to_vec()).collect();
    let alpha = QMatrix::from_columns(d, &coeff1.iter().map(|a| f1.basis.mul_vec(a)).collect::<Vec<_>>());

    let mut complement = Vec::new();
    let mut scalar = 1i64;
    for (f, coeff, m) in [(f1, &coeff1, m1), (f2, &coeff2, m2)] {
        let c = QMatrix::from_columns(m, coeff);
        let extra = complete_basis(&c);
        let mut full = coeff.clone();
        full.extend(extra.iter().cloned());
        let s = QMatrix::from_columns(m, &full).det_sign();
        if s == 0 {
            return Err(Error::Degenerate("dependent frame".into()));
        }
        scalar *= s * f.weight;
        complement.extend(extra.iter().map(|e| f.basis.mul_vec(e)));
    }
    let mut cols = alpha.columns();
    cols.extend(complement);
    let s = QMatrix::from_columns(d, &cols).det_sign();
    if s == 0 {
        return Err(Error::Degenerate("non-transverse subspaces".into()));
    }
    Ok(Frame::new(alpha, scalar * s * ambient))
}

/// Induced orientation of the intersection of two simplices' linear spaces
/// in standard-oriented space.
pub fn oriented_intersection_basis(s1: &AffineSimplex, s2: &AffineSimplex) -> Result<Frame> {
    oriented_intersection(&s1.frame(), &s2.frame(), 1)
}

/// The inductive definition: `((σ_1 ∩ σ_2) ∩ σ_3) ∩ …`.
pub fn inductive_sign(frames: &[Frame], ambient: i64) -> Result<i64> {
    check_frames(frames)?;
    let mut cur = frames[0].clone();
    for f in &frames[1..] {
        cur = oriented_intersection(&cur, f, ambient)?;
    }
    if cur.dim() != 0 {
        return Err(Error::Input("intersection is not zero-dimensional".into()));
    }
    Ok(cur.weight)
}

/// Restriction route: the `(r-1)`-fold sign of `σ_1∩σ_2, …, σ_1∩σ_r`
/// computed inside `L(σ_1)`, in the coordinates of σ_1's basis.
pub fn sign_via_restriction(frames: &[Frame], ambient: i64) -> Result<i64> {
    check_frames(frames)?;
    let r = frames.len();
    if r < 2 {
        return Err(Error::Input("restriction needs r >= 2".into()));
    }
    let first = &frames[0];
    let pieces: Vec<Frame> =
        frames[1..].iter().map(|f| oriented_intersection(first, f, ambient)).collect::<Result<_>>()?;
    if r == 2 {
        return Ok(pieces[0].weight);
    }
    let m1 = first.dim();
    let local: Vec<Frame> = pieces
        .iter()
        .map(|p| {
            let cols: Vec<Vec<Rat>> = p
                .basis
                .columns()
                .iter()
                .map(|c| first.basis.solve_any(c).expect("intersection lies in the first subspace"))
                .collect();
            Frame::new(QMatrix::from_columns(m1, &cols), p.weight)
        })
        .collect();
    sign_via_restriction(&local, first.weight)
}

/// Apply the reflection `x_1 ↦ -x_1` to every frame.
pub fn reflect_frames(frames: &[Frame]) -> Vec<Frame> {
    frames
        .iter()
        .map(|f| {
            let mut b = f.basis.clone();
            for j in 0..b.cols() {
                b[(0, j)] = -b[(0, j)].clone();
            }
            Frame::new(b, f.weight)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn seg(a: [i64; 2], b: [i64; 2], o: i64) -> AffineSimplex {
        AffineSimplex::from_ints(&[a.to_vec(), b.to_vec()], o).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(2, &[1, 1]).unwrap(), -1);
        assert_eq!(epsilon(3, &[2, 2, 2]).unwrap(), epsilon_rk(3, 1));
        assert_eq!(epsilon(3, &[2, 2, 2]).unwrap(), 1);
        assert_eq!(epsilon(2, &[2, 0]).unwrap(), 1);
        assert!(epsilon(2, &[1, 0]).is_err());
    }

    #[test]
    fn epsilon_rk_examples() {
        assert_eq!(epsilon_rk(2, 1), -1);
        assert_eq!(epsilon_rk(3, 1), 1);
        assert_eq!(epsilon_rk(6, 3), -1);
        assert_eq!(epsilon_rk(6, 2), 1);
    }

    #[test]
    fn crossing_segments_sign() {
        let we = seg([-1, 0], [1, 0], 1);
        let sn = seg([0, -1], [0, 1], 1);
        assert_eq!(r_fold_sign(&[we.clone(), sn.clone()]).unwrap(), 1);
        assert_eq!(r_fold_sign(&[we.reversed(), sn.clone()]).unwrap(), -1);
        assert_eq!(r_fold_sign(&[sn.clone(), we.clone()]).unwrap(), -1);
        let frames = [we.frame(), sn.frame()];
        assert_eq!(unraveled_sign(&frames, 1).unwrap(), 1);
        assert_eq!(inductive_sign(&frames, 1).unwrap(), 1);
        assert_eq!(sign_via_restriction(&frames, 1).unwrap(), 1);
        let point = oriented_intersection_basis(&we, &sn).unwrap();
        assert_eq!(point.dim(), 0);
        assert_eq!(point.weight, 1);
    }

    #[test]
    fn transverse_planes_in_space() {
        let p1 = Frame::new(QMatrix::from_i64(&[vec![1, 0], vec![0, 1], vec![0, 0]]), 1);
        let p2 = Frame::new(QMatrix::from_i64(&[vec![0, 1], vec![1, 0], vec![0, 1]]), 1);
        let line = oriented_intersection(&p1, &p2, 1).unwrap();
        assert_eq!(line.dim(), 1);
        let flipped = oriented_intersection(&p1.reversed(), &p2, 1).unwrap();
        assert_eq!(flipped.basis, line.basis);
        assert_eq!(flipped.weight, -line.weight);
        // α ∧ β1 ∧ β2 is positive: β1 = e1-ish complement in p1, β2 in p2.
        let alpha: Vec<Rat> = line.basis.column(0).iter().map(|x| x * rat(line.weight)).collect();
        let b1 = [rat(1), rat(0), rat(0)];
        let b2 = [rat(0), rat(0), rat(1)];
        let s1 = QMatrix::from_columns(3, &[alpha.clone(), b1.to_vec()]);
        let s2 = QMatrix::from_columns(3, &[alpha.clone(), b2.to_vec()]);
        // Orient the complements so α∧β_i matches each plane, then test the triple.
        let rel = |m: &QMatrix, f: &Frame| f.basis.transpose().mul(m).det_sign() * f.weight;
        let c1 = rel(&s1, &p1);
        let c2 = rel(&s2, &p2);
        let triple = QMatrix::from_columns(3, &[alpha, b1.to_vec(), b2.to_vec()]).det_sign();
        assert_eq!(triple * c1 * c2, 1);
    }

    #[test]
    fn non_transverse_is_degenerate() {
        let a = Frame::new(QMatrix::from_i64(&[vec![1], vec![0]]), 1);
        assert!(matches!(det_route_sign(&[a.clone(), a.clone()], 1), Err(Error::Degenerate(_))));
        assert!(matches!(oriented_intersection(&a, &a, 1), Err(Error::Degenerate(_))));
        assert!(matches!(unraveled_sign(&[a.clone(), a], 1), Err(Error::Degenerate(_))));
    }
}

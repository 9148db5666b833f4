//! Point-set tools: plane fits, rigid alignment and negative-control
//! surfaces.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::surface::Vec3;

/// Smallest over largest singular value of the centered sample matrix.
/// Zero for coplanar samples. Fails when the samples collapse to a point.
pub fn planarity_ratio(points: &[Vec3]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(
            "planarity needs at least 3 samples".into(),
        ));
    }
    let centroid = points.iter().sum::<Vec3>() / points.len() as f64;
    let m = DMatrix::from_fn(points.len(), 3, |r, c| points[r][c] - centroid[c]);
    let sv = m.svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if smax.is_nan() || smax <= 1e-12 {
        return Err(Error::Degenerate("point, not circle"));
    }
    Ok(smin / smax)
}

/// RMS distance between `b` and the best proper rigid motion of `a`
/// (rotation + translation, no reflection, no scaling).
pub fn procrustes_residual(a: &[Vec3], b: &[Vec3]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "point sets differ in size: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 4 {
        return Err(Error::InvalidInput(
            "Procrustes needs at least 4 points".into(),
        ));
    }
    let n = a.len() as f64;
    let ca = a.iter().sum::<Vec3>() / n;
    let cb = b.iter().sum::<Vec3>() / n;
    let spread: f64 = a.iter().map(|p| (p - ca).norm_squared()).sum();
    if spread.is_nan() || spread <= 0.0 {
        return Err(Error::Degenerate("reference point set has no spread"));
    }
    let mut h = Matrix3::zeros();
    for (p, q) in a.iter().zip(b) {
        h += (p - ca) * (q - cb).transpose();
    }
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut fix = Matrix3::identity();
    if (vt.transpose() * u.transpose()).determinant() < 0.0 {
        fix[(2, 2)] = -1.0;
    }
    let rot = vt.transpose() * fix * u.transpose();
    let sq: f64 = a
        .iter()
        .zip(b)
        .map(|(p, q)| (rot * (p - ca) - (q - cb)).norm_squared())
        .sum();
    Ok((sq / n).sqrt())
}

/// Unit sphere in coordinates whose parameter lines are loxodrome-like
/// spirals (longitude `u + v`, latitude `(u − v)/2`). Neither family of
/// coordinate lines is planar.
pub fn twisted_sphere(u: f64, v: f64) -> Vec3 {
    let lon = u + v;
    let lat = 0.5 * (u - v);
    Vector3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin())
}

pub fn helix(t: f64) -> Vec3 {
    Vector3::new(t.cos(), t.sin(), 0.3 * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Rotation3, Unit};

    fn cloud() -> Vec<Vec3> {
        (0..30)
            .map(|i| {
                let t = i as f64 * 0.37;
                Vector3::new(t.sin(), (2.0 * t).cos(), 0.1 * t * t - 1.0)
            })
            .collect()
    }

    #[test]
    fn rigid_copy_aligns() {
        let a = cloud();
        let axis = Unit::new_normalize(Vector3::new(1.0, -2.0, 0.5));
        let r = Rotation3::from_axis_angle(&axis, 1.1);
        let t = Vector3::new(3.0, -1.0, 2.0);
        let b: Vec<Vec3> = a.iter().map(|p| r * p + t).collect();
        assert!(procrustes_residual(&a, &b).unwrap() <= 1e-12);
    }

    #[test]
    fn scaled_copy_does_not_align() {
        let a = cloud();
        let b: Vec<Vec3> = a.iter().map(|p| p * 2.0).collect();
        let diameter = a
            .iter()
            .flat_map(|p| a.iter().map(move |q| (p - q).norm()))
            .fold(0.0, f64::max);
        assert!(procrustes_residual(&a, &b).unwrap() >= 0.1 * diameter);
    }

    #[test]
    fn reflection_is_not_a_rigid_motion() {
        let a = cloud();
        let b: Vec<Vec3> = a.iter().map(|p| Vector3::new(p.x, p.y, -p.z)).collect();
        assert!(procrustes_residual(&a, &b).unwrap() > 1e-2);
    }

    #[test]
    fn procrustes_input_errors() {
        let a = cloud();
        assert!(procrustes_residual(&a, &a[..10]).is_err());
        assert!(procrustes_residual(&a[..3], &a[..3]).is_err());
        let same = vec![Vector3::new(1.0, 1.0, 1.0); 5];
        assert!(matches!(
            procrustes_residual(&same, &same),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn planarity_cases() {
        let line: Vec<Vec3> = (0..12)
            .map(|i| Vector3::new(i as f64, 2.0 * i as f64, 0.0))
            .collect();
        assert!(planarity_ratio(&line).unwrap() < 1e-15);
        let circle: Vec<Vec3> = (0..20)
            .map(|i| {
                let t = i as f64 * 0.2;
                Vector3::new(t.cos(), t.sin(), 1.0)
            })
            .collect();
        assert!(planarity_ratio(&circle).unwrap() < 1e-14);
        let hx: Vec<Vec3> = (0..40).map(|i| helix(i as f64 * 0.16)).collect();
        assert!(planarity_ratio(&hx).unwrap() >= 1e-2);
        let pt = vec![Vector3::new(0.0, 0.0, 1.0); 10];
        assert!(matches!(
            planarity_ratio(&pt),
            Err(Error::Degenerate("point, not circle"))
        ));
    }
}

//! Bilinear (Q1) reference element on `[0,1]^2` and tensor Gauss rules.
//!
//! Local node order is counterclockwise: `(0,0), (1,0), (1,1), (0,1)`.

pub type Corners = [[f64; 2]; 4];

pub fn shape(xi: f64, eta: f64) -> [f64; 4] {
    [
        (1.0 - xi) * (1.0 - eta),
        xi * (1.0 - eta),
        xi * eta,
        (1.0 - xi) * eta,
    ]
}

/// Reference gradients `[dN/dxi, dN/deta]` of the four shape functions.
pub fn shape_grad(xi: f64, eta: f64) -> [[f64; 2]; 4] {
    [
        [-(1.0 - eta), -(1.0 - xi)],
        [1.0 - eta, -xi],
        [eta, xi],
        [-eta, 1.0 - xi],
    ]
}

pub fn map_point(c: &Corners, xi: f64, eta: f64) -> [f64; 2] {
    let n = shape(xi, eta);
    let mut p = [0.0; 2];
    for a in 0..4 {
        p[0] += n[a] * c[a][0];
        p[1] += n[a] * c[a][1];
    }
    p
}

/// Jacobian `[[dx/dxi, dx/deta], [dy/dxi, dy/deta]]`.
pub fn jacobian(c: &Corners, xi: f64, eta: f64) -> [[f64; 2]; 2] {
    let g = shape_grad(xi, eta);
    let mut j = [[0.0; 2]; 2];
    for a in 0..4 {
        j[0][0] += c[a][0] * g[a][0];
        j[0][1] += c[a][0] * g[a][1];
        j[1][0] += c[a][1] * g[a][0];
        j[1][1] += c[a][1] * g[a][1];
    }
    j
}

pub fn det2(j: &[[f64; 2]; 2]) -> f64 {
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// Geometry of the map at one reference point.
pub struct PointGeometry {
    pub x: [f64; 2],
    pub det: f64,
    pub values: [f64; 4],
    /// Physical gradients of the four shape functions.
    pub grads: [[f64; 2]; 4],
}

pub fn point_geometry(c: &Corners, xi: f64, eta: f64) -> PointGeometry {
    let j = jacobian(c, xi, eta);
    let det = det2(&j);
    let g = shape_grad(xi, eta);
    // J^{-T} applied to reference gradients
    let inv = [
        [j[1][1] / det, -j[1][0] / det],
        [-j[0][1] / det, j[0][0] / det],
    ];
    let mut grads = [[0.0; 2]; 4];
    for a in 0..4 {
        grads[a][0] = inv[0][0] * g[a][0] + inv[0][1] * g[a][1];
        grads[a][1] = inv[1][0] * g[a][0] + inv[1][1] * g[a][1];
    }
    PointGeometry {
        x: map_point(c, xi, eta),
        det,
        values: shape(xi, eta),
        grads,
    }
}

/// Maximum pairwise corner distance.
pub fn diameter(c: &Corners) -> f64 {
    let mut h: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            h = h.max(((c[a][0] - c[b][0]).powi(2) + (c[a][1] - c[b][1]).powi(2)).sqrt());
        }
    }
    h
}

/// Gauss-Legendre points and weights on `[0, 1]`.
pub fn gauss_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (pts, wts): (&[f64], &[f64]) = match n {
        1 => (&[0.0], &[2.0]),
        2 => {
            let a = 1.0 / 3f64.sqrt();
            return (
                vec![0.5 * (1.0 - a), 0.5 * (1.0 + a)],
                vec![0.5, 0.5],
            );
        }
        3 => {
            let a = (0.6f64).sqrt();
            return (
                vec![0.5 * (1.0 - a), 0.5, 0.5 * (1.0 + a)],
                vec![5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0],
            );
        }
        4 => {
            let s = (6.0 / 5.0f64).sqrt();
            let a = ((3.0 - 2.0 * s) / 7.0).sqrt();
            let b = ((3.0 + 2.0 * s) / 7.0).sqrt();
            let wa = (18.0 + 30f64.sqrt()) / 36.0;
            let wb = (18.0 - 30f64.sqrt()) / 36.0;
            return (
                vec![0.5 * (1.0 - b), 0.5 * (1.0 - a), 0.5 * (1.0 + a), 0.5 * (1.0 + b)],
                vec![0.5 * wb, 0.5 * wa, 0.5 * wa, 0.5 * wb],
            );
        }
        _ => panic!("unsupported Gauss rule with {n} points"),
    };
    (
        pts.iter().map(|p| 0.5 * (p + 1.0)).collect(),
        wts.iter().map(|w| 0.5 * w).collect(),
    )
}

/// Tensor rule `(xi, eta, weight)` on the reference square.
pub fn gauss_2d(n: usize) -> Vec<(f64, f64, f64)> {
    let (p, w) = gauss_1d(n);
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            out.push((p[i], p[j], w[i] * w[j]));
        }
    }
    out
}

/// Inverts the bilinear map by Newton's method starting from `guess`.
/// Points outside the cell give reference coordinates outside `[0,1]^2`.
pub fn inverse_map(c: &Corners, p: [f64; 2], guess: [f64; 2]) -> [f64; 2] {
    let scale = diameter(c);
    let mut xi = guess;
    for _ in 0..50 {
        let x = map_point(c, xi[0], xi[1]);
        let r = [p[0] - x[0], p[1] - x[1]];
        if r[0].hypot(r[1]) <= 1e-15 * scale {
            break;
        }
        let j = jacobian(c, xi[0], xi[1]);
        let det = det2(&j);
        let d0 = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let d1 = (-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        xi[0] += d0;
        xi[1] += d1;
        if d0.abs().max(d1.abs()) < 1e-16 {
            break;
        }
    }
    xi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        for &(xi, eta) in &[(0.1, 0.7), (0.5, 0.5), (-0.2, 1.3)] {
            let n = shape(xi, eta);
            assert!((n.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            let g = shape_grad(xi, eta);
            assert!(g.iter().map(|v| v[0]).sum::<f64>().abs() < 1e-15);
            assert!(g.iter().map(|v| v[1]).sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn gauss_integrates_polynomials() {
        for n in 1..=4 {
            let (p, w) = gauss_1d(n);
            for deg in 0..2 * n {
                let q: f64 = p.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn inverse_map_roundtrip() {
        let c = [[0.0, 0.0], [2.0, 0.2], [2.3, 1.9], [-0.1, 1.1]];
        for &g in &[[0.3, 0.4], [1.2, -0.1], [0.0, 1.0]] {
            let p = map_point(&c, g[0], g[1]);
            let xi = inverse_map(&c, p, [0.5, 0.5]);
            assert!((xi[0] - g[0]).abs() < 1e-13 && (xi[1] - g[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn diameter_of_unit_square() {
        let c = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!((diameter(&c) - 2f64.sqrt()).abs() < 1e-15);
    }
}

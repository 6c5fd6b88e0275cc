//! Central finite differences, used to cross-check analytic derivatives.

/// (u_x, u_y, u_xx, u_xy, u_yy) by second-order central differences.
pub fn fd_derivatives(u: impl Fn(f64, f64) -> f64, p: (f64, f64), h: f64) -> [f64; 5] {
    let (x, y) = p;
    let c = u(x, y);
    let xp = u(x + h, y);
    let xm = u(x - h, y);
    let yp = u(x, y + h);
    let ym = u(x, y - h);
    let pp = u(x + h, y + h);
    let pm = u(x + h, y - h);
    let mp = u(x - h, y + h);
    let mm = u(x - h, y - h);
    let h2 = h * h;
    [
        (xp - xm) / (2.0 * h),
        (yp - ym) / (2.0 * h),
        (xp - 2.0 * c + xm) / h2,
        (pp - pm - mp + mm) / (4.0 * h2),
        (yp - 2.0 * c + ym) / h2,
    ]
}

/// Central-difference Jacobian of a map ℝ³ → ℝ³; `jac[i][j] = ∂Fᵢ/∂xⱼ`.
pub fn fd_jacobian3(f: impl Fn([f64; 3]) -> [f64; 3], p: [f64; 3], h: f64) -> [[f64; 3]; 3] {
    let mut jac = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut fwd = p;
        let mut bwd = p;
        fwd[j] += h;
        bwd[j] -= h;
        let (a, b) = (f(fwd), f(bwd));
        for i in 0..3 {
            jac[i][j] = (a[i] - b[i]) / (2.0 * h);
        }
    }
    jac
}

/// Fourth-order central-difference Jacobian; used where the map is smooth and
/// the O(h²) error of [`fd_jacobian3`] would dominate a tight tolerance.
pub fn fd_jacobian3_o4(f: impl Fn([f64; 3]) -> [f64; 3], p: [f64; 3], h: f64) -> [[f64; 3]; 3] {
    let mut jac = [[0.0; 3]; 3];
    for j in 0..3 {
        let shifted = |k: f64| {
            let mut q = p;
            q[j] += k * h;
            f(q)
        };
        let (p1, m1, p2, m2) = (shifted(1.0), shifted(-1.0), shifted(2.0), shifted(-2.0));
        for i in 0..3 {
            jac[i][j] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
        }
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square() {
        let d = fd_derivatives(|x, _| x * x, (1.0, 1.0), 1e-4);
        assert!((d[2] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn trig() {
        let (x, y) = (0.3f64, 0.4f64);
        let d = fd_derivatives(|x, y| x.sin() * y.cos(), (x, y), 1e-4);
        let exact = [
            x.cos() * y.cos(),
            -x.sin() * y.sin(),
            -x.sin() * y.cos(),
            -x.cos() * y.sin(),
            -x.sin() * y.cos(),
        ];
        for k in 0..5 {
            assert!((d[k] - exact[k]).abs() < 1e-7, "component {k}");
        }
    }

    #[test]
    fn arcsine_slope() {
        let d = fd_derivatives(|_, y| (y / 2.0).asin(), (0.0, 0.5), 1e-4);
        let exact = 0.5 / (1.0f64 - 0.0625).sqrt();
        assert!((d[1] - exact).abs() < 1e-6);
        assert!((exact - 0.5164).abs() < 1e-4);
    }
}

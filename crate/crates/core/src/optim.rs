//! Bounded scalar minimization.

/// Brent's method (golden section with parabolic steps) on `[lo, hi]`.
/// Returns `(argmin, min)`. `rel_tol` is relative to `|x|`, `abs_tol` guards
/// minima near zero.
pub fn brent_minimize<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol = rel_tol * x.abs() + abs_tol;
        let tol2 = 2.0 * tol;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol {
            // parabola through x, w, v
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol } else { -tol };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol {
            x + d
        } else if d > 0.0 {
            x + tol
        } else {
            x - tol
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let (x, fx) = brent_minimize(
            |x| (x - 1.234).powi(2) + 3.0,
            -10.0,
            10.0,
            1e-10,
            1e-12,
            200,
        );
        assert!((x - 1.234).abs() < 1e-7, "{x}");
        assert!((fx - 3.0).abs() < 1e-14);
    }

    #[test]
    fn boundary_minimum_is_approached() {
        let (x, _) = brent_minimize(|x| x, 0.0, 1.0, 1e-10, 1e-12, 200);
        assert!(x < 1e-9);
    }

    #[test]
    fn non_quadratic() {
        let (x, _) = brent_minimize(|x: f64| x.exp() - 2.0 * x, 0.0, 3.0, 1e-12, 1e-14, 200);
        assert!((x - 2f64.ln()).abs() < 1e-7, "{x}");
    }
}

//! Bracketed root finding shared by the quantile, envelope inversion and
//! truncation-length solvers.

/// Bracket width at which bisection stops.
pub const BRACKET_WIDTH: f64 = 1e-13;

/// Finds `x` in `[lo, hi]` with `g(x) = 0`, where `g` is nondecreasing and
/// `g(lo) <= 0 <= g(hi)`. Bisects down to `width`, then takes one Newton step
/// with `dg` if that step stays inside the final bracket and improves `|g|`.
pub fn solve_increasing<G, D>(g: G, dg: Option<D>, mut lo: f64, mut hi: f64, width: f64) -> f64
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut g_lo = g(lo);
    let mut g_hi = g(hi);
    if g_lo >= 0.0 {
        return lo;
    }
    if g_hi <= 0.0 {
        return hi;
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm < 0.0 {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
            g_hi = gm;
        }
    }
    // secant point inside the bracket
    let mut x = if g_hi > g_lo {
        lo - g_lo * (hi - lo) / (g_hi - g_lo)
    } else {
        0.5 * (lo + hi)
    };
    let mut gx = g(x);
    if let Some(dg) = dg {
        let d = dg(x);
        if d > 0.0 && d.is_finite() {
            let y = x - gx / d;
            if y >= lo && y <= hi {
                let gy = g(y);
                if gy.abs() < gx.abs() {
                    x = y;
                    gx = gy;
                }
            }
        }
    }
    // fall back to whichever end is closer in value
    if gx.abs() > g_lo.abs() {
        x = lo;
        gx = g_lo;
    }
    if gx.abs() > g_hi.abs() {
        x = hi;
    }
    x
}

/// Bisection for a sign change of `g` on `[lo, hi]` (either orientation).
pub fn bisect_sign_change<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let s_lo = g(lo).signum();
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid).signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

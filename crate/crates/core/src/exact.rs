//! Analytic reference solutions.

/// Exact solution of `u_t + c u_x = 0` on the periodic interval
/// `[x_min, x_min + length)`: `x ↦ ic(wrap(x - c t))`.
pub fn advect_exact<'a>(
    ic: impl Fn(f64) -> f64 + 'a,
    speed: f64,
    t: f64,
    (x_min, length): (f64, f64),
) -> impl Fn(f64) -> f64 + 'a {
    move |x| {
        let shifted = x - speed * t;
        ic(x_min + (shifted - x_min).rem_euclid(length))
    }
}

/// Taylor–Green vorticity `ω(x, y, t) = 2 cos x cos y · exp(-2νt)` on `[0, 2π]²`.
pub fn taylor_green_oracle(viscosity: f64, t: f64) -> impl Fn(f64, f64) -> f64 {
    let decay = (-2.0 * viscosity * t).exp();
    move |x, y| 2.0 * x.cos() * y.cos() * decay
}

/// Inviscid Burgers solution before shock formation, by characteristics:
/// `u(x, t) = u0(ξ)` where `ξ + t u0(ξ) = x`.
///
/// `bounds` must bracket the range of `u0`. The foot `ξ` is found by
/// bisection, which is exact to round-off as long as no characteristics have
/// crossed (the map `ξ ↦ ξ + t u0(ξ)` is then increasing).
pub fn burgers_characteristic<'a>(
    u0: impl Fn(f64) -> f64 + 'a,
    t: f64,
    bounds: (f64, f64),
) -> impl Fn(f64) -> f64 + 'a {
    move |x| {
        if t == 0.0 {
            return u0(x);
        }
        let mut lo = x - t * bounds.1 - 1e-12;
        let mut hi = x - t * bounds.0 + 1e-12;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid + t * u0(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
                break;
            }
        }
        u0(0.5 * (lo + hi))
    }
}

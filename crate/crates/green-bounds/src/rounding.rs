//! Directed rounding to a fixed number of significant figures, used when
//! presenting certified constants: upper bounds round up, lower bounds round
//! down, so the displayed value stays a valid bound.

/// Rounds `x` to `sig` significant figures toward +infinity.
pub fn round_up_sig(x: f64, sig: u32) -> f64 {
    round_sig(x, sig, Direction::Up)
}

/// Rounds `x` to `sig` significant figures toward -infinity.
pub fn round_down_sig(x: f64, sig: u32) -> f64 {
    round_sig(x, sig, Direction::Down)
}

/// Rounds `x` to `sig` significant figures to nearest.
pub fn round_nearest_sig(x: f64, sig: u32) -> f64 {
    round_sig(x, sig, Direction::Nearest)
}

/// Three-figure upward rounding, the presentation default for upper bounds.
pub fn round_up_3sig(x: f64) -> f64 {
    round_up_sig(x, 3)
}

/// Three-figure downward rounding, the presentation default for lower bounds.
pub fn round_down_3sig(x: f64) -> f64 {
    round_down_sig(x, 3)
}

#[derive(Clone, Copy)]
enum Direction {
    Up,
    Down,
    Nearest,
}

/// Values this close to a representable grid point (relatively) are treated
/// as lying on it, so directed rounding does not bump a value that is a
/// grid point up to binary noise.
const GRID_FUZZ: f64 = 1e-9;

fn round_sig(x: f64, sig: u32, dir: Direction) -> f64 {
    assert!(sig >= 1, "need at least one significant figure");
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log10().floor() as i32;
    let p = e - (sig as i32 - 1);
    // scale into [10^(sig-1), 10^sig)
    let v = if p >= 0 {
        x / 10f64.powi(p)
    } else {
        x * 10f64.powi(-p)
    };
    let v = match dir {
        Direction::Up => (v - GRID_FUZZ * v.abs()).ceil(),
        Direction::Down => (v + GRID_FUZZ * v.abs()).floor(),
        Direction::Nearest => v.round(),
    };
    if p >= 0 {
        v * 10f64.powi(p)
    } else {
        v / 10f64.powi(-p)
    }
}

/// Full-precision scientific rendering of a raw f64 (17 significant digits).
pub fn fmt_raw(x: f64) -> String {
    format!("{x:.16e}")
}

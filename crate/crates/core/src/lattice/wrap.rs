/// How a gene's value space closes on itself.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WrapRule {
    /// Unbounded real line.
    #[default]
    None,
    /// Periodic on the half-open interval `(lo, hi]`, e.g. longitude on
    /// `(-180, 180]`. Differences are taken along the shorter arc.
    Periodic { lo: f64, hi: f64 },
    /// Saturating at the bounds, e.g. latitude on `[-90, 90]`.
    Clamp { lo: f64, hi: f64 },
}

impl WrapRule {
    pub const LONGITUDE: WrapRule = WrapRule::Periodic {
        lo: -180.0,
        hi: 180.0,
    };
    pub const LATITUDE: WrapRule = WrapRule::Clamp {
        lo: -90.0,
        hi: 90.0,
    };

    /// Brings `value` back into the gene's domain. Idempotent.
    pub fn apply(self, value: f64) -> f64 {
        match self {
            WrapRule::None => value,
            WrapRule::Clamp { lo, hi } => value.clamp(lo, hi),
            WrapRule::Periodic { lo, hi } => wrap_half_open(value, lo, hi),
        }
    }

    /// Signed step from `from` to `to`; for periodic genes the result lies in
    /// `(-period/2, period/2]`.
    pub fn difference(self, from: f64, to: f64) -> f64 {
        match self {
            WrapRule::Periodic { lo, hi } => {
                let half = 0.5 * (hi - lo);
                wrap_half_open(to - from, -half, half)
            }
            _ => to - from,
        }
    }
}

fn wrap_half_open(value: f64, lo: f64, hi: f64) -> f64 {
    if value > lo && value <= hi {
        return value;
    }
    let period = hi - lo;
    let r = lo + (value - lo).rem_euclid(period);
    if r <= lo {
        hi
    } else {
        r
    }
}

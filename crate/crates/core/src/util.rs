// Counts derived from ratios. A small epsilon absorbs representation error,
// e.g. 0.7 * 5 = 3.4999999999999996 must round to 4.
const EPS: f64 = 1e-9;

/// Round half up: 2.5 -> 3.
pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5 + EPS).floor().max(0.0) as usize
}

pub(crate) fn ceil_count(x: f64) -> usize {
    (x - EPS).ceil().max(0.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_half_up(2.5), 3);
        assert_eq!(round_half_up(0.7 * 5.0), 4);
        assert_eq!(round_half_up(2.4999), 2);
        assert_eq!(round_half_up(0.0), 0);
        assert_eq!(ceil_count(0.2 * 100.0), 20);
        assert_eq!(ceil_count(0.3 * 10.0), 3);
        assert_eq!(ceil_count(0.01), 1);
    }
}

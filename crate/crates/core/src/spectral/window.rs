use super::GridSpec;

/// C^∞ step: 0 for `s <= 0`, 1 for `s >= 1`, built from `exp(-1/s)`.
pub fn smooth_step(s: f64) -> f64 {
    fn bump(y: f64) -> f64 {
        if y > 0.0 {
            (-1.0 / y).exp()
        } else {
            0.0
        }
    }
    let s = s.clamp(0.0, 1.0);
    let (a, b) = (bump(s), bump(1.0 - s));
    a / (a + b)
}

/// Plateau window on a grid: 1 for `|x| <= inner·L`, 0 for `|x| >= outer·L`,
/// smooth in between. With `inner = 0.25` the plateau is the central half.
pub fn plateau(grid: &GridSpec, inner: f64, outer: f64) -> Vec<f64> {
    let l = grid.length();
    grid.nodes()
        .iter()
        .map(|x| 1.0 - smooth_step((x.abs() - inner * l) / ((outer - inner) * l)))
        .collect()
}

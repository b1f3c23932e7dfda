//! Fixed decimal rendering shared by the JSON and CSV writers.

use rug::Float;

/// `x` in scientific notation with `digits` significant digits.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    format!("{:.*e}", digits.max(1) - 1, x)
}

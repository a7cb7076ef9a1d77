use super::RateAccuracyCurve;
use crate::error::{Error, Result};
use crate::pdfa::OperatingPoint;

/// Euclidean distance from `p` to the polyline through `vertices`, both
/// given as `(x, y)` pairs.
pub fn point_to_polyline_distance(p: (f64, f64), vertices: &[(f64, f64)]) -> f64 {
    match vertices {
        [] => f64::INFINITY,
        [v] => ((p.0 - v.0).powi(2) + (p.1 - v.1).powi(2)).sqrt(),
        _ => vertices
            .windows(2)
            .map(|w| point_to_segment(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

fn point_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Distance from a predictor's operating point to the curve after dividing
/// rates by `R_opt` and accuracies by `A_opt`. Machines whose optimal
/// predictor has zero rate cannot be normalized and are rejected.
pub fn normalized_distance(point: OperatingPoint, curve: &RateAccuracyCurve) -> Result<f64> {
    let opt = curve.augmented_point;
    if !(opt.rate_nats > 0.0) {
        return Err(Error::ExcludedMachine(format!(
            "optimal rate {} is not positive",
            opt.rate_nats
        )));
    }
    let norm = |v: OperatingPoint| (v.rate_nats / opt.rate_nats, v.accuracy / opt.accuracy);
    let vertices: Vec<(f64, f64)> = curve.vertices().into_iter().map(norm).collect();
    Ok(point_to_polyline_distance(norm(point), &vertices))
}

/// Percent shortfall of `accuracy` relative to `optimal_accuracy`, floored at −100.
pub fn normalized_distortion(accuracy: f64, optimal_accuracy: f64) -> f64 {
    (100.0 * (optimal_accuracy - accuracy) / optimal_accuracy).max(-100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdfa::Pdfa;
    use crate::rate_accuracy::trace_curve;

    #[test]
    fn distortion_arithmetic() {
        assert_eq!(normalized_distortion(0.8, 0.8), 0.0);
        assert!((normalized_distortion(0.6, 0.8) - 25.0).abs() < 1e-12);
        assert!((normalized_distortion(4.0 / 7.0, 5.0 / 7.0) - 20.0).abs() < 1e-12);
        assert_eq!(normalized_distortion(1.0, 0.4), -100.0);
    }

    #[test]
    fn on_curve_points_have_zero_distance() {
        let curve = trace_curve(&Pdfa::even_process(0.4)).unwrap();
        let vertex = curve.points[curve.points.len() / 2].operating_point();
        assert!(normalized_distance(vertex, &curve).unwrap() < 1e-12);
        assert!(normalized_distance(curve.augmented_point, &curve).unwrap() < 1e-12);
    }

    #[test]
    fn zero_rate_optimum_is_excluded() {
        let curve = trace_curve(&Pdfa::fair_coin()).unwrap();
        let p = curve.augmented_point;
        assert!(matches!(normalized_distance(p, &curve), Err(Error::ExcludedMachine(_))));
    }

    #[test]
    fn polyline_distance_basics() {
        let line = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)];
        assert!((point_to_polyline_distance((0.5, 0.5), &line) - 0.5).abs() < 1e-15);
        assert!((point_to_polyline_distance((2.0, 2.0), &line) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(point_to_polyline_distance((1.0, 0.5), &line), 0.0);
    }
}

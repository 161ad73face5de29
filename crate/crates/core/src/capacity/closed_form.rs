use std::f64::consts::LN_2;

use crate::domain::Piece;
use crate::error::{Error, Result};

use super::LogCapacity;

/// Arc of angular half-width `w` at radius `R`: `cap = R sin(w/2)`.
pub fn arc_log_capacity(radius: f64, half_width: f64) -> Result<LogCapacity> {
    if !(radius > 0.0) {
        return Err(Error::param("radius", format!("need radius > 0, got {radius}")));
    }
    if !(half_width > 0.0 && half_width <= std::f64::consts::PI) {
        return Err(Error::param("half_width", format!("need half_width in (0, pi], got {half_width}")));
    }
    Ok(LogCapacity::new(radius.ln() + (half_width / 2.0).sin().ln()))
}

/// Same closed form from `ln R` and `ln sin(w/2)`, without leaving log space.
pub fn arc_log_capacity_from_logs(log_radius: f64, log_sin_quarter: f64) -> LogCapacity {
    LogCapacity::new(log_radius + log_sin_quarter)
}

pub fn disc_log_capacity(radius: f64) -> Result<LogCapacity> {
    if !(radius > 0.0) {
        return Err(Error::param("radius", format!("need radius > 0, got {radius}")));
    }
    Ok(LogCapacity::new(radius.ln()))
}

/// `cap = L / 4`.
pub fn segment_log_capacity(length: f64) -> Result<LogCapacity> {
    if !(length > 0.0) {
        return Err(Error::param("length", format!("need length > 0, got {length}")));
    }
    Ok(LogCapacity::new(length.ln() - 2.0 * LN_2))
}

pub fn point_log_capacity() -> LogCapacity {
    LogCapacity::polar()
}

/// Lower and upper closed-form bounds for one piece. They coincide except for
/// lenses, bounded below by their largest inscribed disc and above by the
/// smaller of the two discs.
pub fn piece_log_capacity_bounds(piece: &Piece) -> (LogCapacity, LogCapacity) {
    let exact = |c: LogCapacity| (c, c);
    match piece {
        Piece::Arc(a) if a.degenerate => exact(LogCapacity::polar()),
        Piece::Arc(a) => exact(arc_log_capacity_from_logs(a.log_radius, a.log_sin_quarter)),
        Piece::Disc(d) => exact(LogCapacity::new(d.radius.ln())),
        Piece::Segment(s) => {
            let len = s.length();
            if len > 0.0 {
                exact(LogCapacity::new(len.ln() - 2.0 * LN_2))
            } else {
                exact(LogCapacity::polar())
            }
        }
        Piece::Point { .. } => exact(LogCapacity::polar()),
        Piece::Lens { disc, clip } => {
            let d = (disc.center - clip.center).norm();
            let smaller = disc.radius.min(clip.radius);
            let inscribed = smaller.min(0.5 * (disc.radius + clip.radius - d));
            let lo = if inscribed > 0.0 {
                LogCapacity::new(inscribed.ln())
            } else {
                LogCapacity::polar()
            };
            (lo, LogCapacity::new(smaller.ln()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{family_arc, make_arc, ParamRT};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn canonical_values() {
        assert_eq!(arc_log_capacity(1.0, PI).unwrap().log_value(), 0.0);
        assert_relative_eq!(arc_log_capacity(1.0, PI / 2.0).unwrap().capacity(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(disc_log_capacity(1.0).unwrap().log_value(), 0.0);
        assert_relative_eq!(segment_log_capacity(4.0).unwrap().capacity(), 1.0, max_relative = 1e-15);
        assert!(point_log_capacity().is_polar());
        assert!(arc_log_capacity(0.0, 1.0).is_err());
        assert!(arc_log_capacity(1.0, 4.0).is_err());
    }

    #[test]
    fn family_arc_capacity_in_log_domain() {
        let p = ParamRT::ratio(1, 8, 1, 32).unwrap();
        for j in 1..=6u32 {
            let a = make_arc(&p, j).unwrap();
            let c = arc_log_capacity_from_logs(a.log_radius, a.log_sin_quarter);
            let expected = j as f64 * (0.125f64).ln() - 32f64.powi(j as i32);
            assert_relative_eq!(c.log_value(), expected, max_relative = 1e-15);
        }
        let a = make_arc(&p, 1).unwrap();
        let c = piece_log_capacity_bounds(&Piece::Arc(a)).0;
        assert_relative_eq!(c.log_value(), -34.07944154167984, max_relative = 1e-15);
    }

    #[test]
    fn representable_arc_matches_linear_formula() {
        let a = family_arc(0.2, 0.5, 1).unwrap();
        let via_width = arc_log_capacity(a.radius, a.half_width).unwrap();
        let via_logs = arc_log_capacity_from_logs(a.log_radius, a.log_sin_quarter);
        assert_relative_eq!(via_width.log_value(), via_logs.log_value(), max_relative = 1e-13);
    }
}

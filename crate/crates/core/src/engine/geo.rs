use crate::corpus::GeoPoint;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Great-circle distance in kilometres (haversine formula).
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = (b.lat - a.lat).to_radians();
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint { lat, lon }
    }

    #[test]
    fn zero_distance_to_self() {
        assert_eq!(haversine_km(p(69.68, 18.92), p(69.68, 18.92)), 0.0);
    }

    #[test]
    fn antipodes_are_half_circumference() {
        let d = haversine_km(p(10.0, 20.0), p(-10.0, -160.0));
        assert!((d - std::f64::consts::PI * EARTH_RADIUS_KM).abs() < 1e-3);
    }

    #[test]
    fn one_degree_of_latitude() {
        let d = haversine_km(p(0.0, 0.0), p(1.0, 0.0));
        assert!((d - EARTH_RADIUS_KM * 1f64.to_radians()).abs() < 1e-9);
    }

    #[test]
    fn symmetric() {
        let (a, b) = (p(53.38, -6.25), p(69.68, 18.92));
        assert_eq!(haversine_km(a, b), haversine_km(b, a));
    }
}

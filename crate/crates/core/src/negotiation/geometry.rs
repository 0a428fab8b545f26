//! Convex polygons cut by half-planes.

pub(crate) type Point = [f64; 2];

/// `{ p : normal . p <= offset }`
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HalfPlane {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: [f64; 2], offset: f64) -> Self {
        HalfPlane { normal, offset }
    }

    fn excess(&self, p: Point) -> f64 {
        self.normal[0] * p[0] + self.normal[1] * p[1] - self.offset
    }
}

pub(crate) fn rectangle(lo: Point, hi: Point) -> Vec<Point> {
    vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]]
}

/// Sutherland-Hodgman step: keeps the part of `poly` inside `h`.
pub(crate) fn clip(poly: &[Point], h: &HalfPlane) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    if n == 0 {
        return out;
    }
    for i in 0..n {
        let s = poly[(i + n - 1) % n];
        let e = poly[i];
        let ds = h.excess(s);
        let de = h.excess(e);
        if de <= 0.0 {
            if ds > 0.0 {
                out.push(intersect(s, e, ds, de));
            }
            out.push(e);
        } else if ds <= 0.0 {
            out.push(intersect(s, e, ds, de));
        }
    }
    out
}

fn intersect(s: Point, e: Point, ds: f64, de: f64) -> Point {
    let t = ds / (ds - de);
    [s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])]
}

pub(crate) fn clip_all(mut poly: Vec<Point>, planes: &[HalfPlane]) -> Vec<Point> {
    for h in planes {
        if poly.is_empty() {
            break;
        }
        poly = clip(&poly, h);
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(poly: &[Point]) -> f64 {
        let n = poly.len();
        (0..n)
            .map(|i| {
                let a = poly[i];
                let b = poly[(i + 1) % n];
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            .abs()
            / 2.0
    }

    #[test]
    fn clip_square_by_diagonal() {
        let sq = rectangle([0.0, 0.0], [1.0, 1.0]);
        let lower = clip(&sq, &HalfPlane::new([-1.0, 1.0], 0.0)); // p2 <= p1
        assert!((area(&lower) - 0.5).abs() < 1e-12);
        let upper = clip(&sq, &HalfPlane::new([1.0, -1.0], 0.0));
        assert!((area(&upper) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn clip_to_empty_and_full() {
        let sq = rectangle([0.0, 0.0], [1.0, 1.0]);
        assert!(clip(&sq, &HalfPlane::new([1.0, 1.0], -0.5)).is_empty());
        let full = clip(&sq, &HalfPlane::new([1.0, 1.0], 5.0));
        assert!((area(&full) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clip_corner_triangle() {
        let sq = rectangle([0.0, 0.0], [2.0, 2.0]);
        let tri = clip_all(sq, &[HalfPlane::new([1.0, 1.0], 1.0)]);
        assert_eq!(tri.len(), 3);
        assert!((area(&tri) - 0.5).abs() < 1e-12);
    }
}

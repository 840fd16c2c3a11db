use serde::{Deserialize, Serialize};

use crate::chain::Vec2;

/// Region a bead may not enter. Beads are treated as discs of radius R1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstacle {
    /// Solid half-plane behind `point`; `normal` (unit) points into free space.
    HalfPlane { point: [f64; 2], normal: [f64; 2] },
    /// Solid disc.
    Circle { center: [f64; 2], radius: f64 },
    /// Solid convex polygon; either winding is accepted.
    ConvexPolygon { vertices: Vec<[f64; 2]> },
}

fn v(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

impl Obstacle {
    pub fn check(&self) -> Result<(), String> {
        match self {
            Obstacle::HalfPlane { point, normal } => {
                let n = v(*normal);
                if !point.iter().chain(normal).all(|x| x.is_finite()) {
                    return Err("half-plane has non-finite coordinates".into());
                }
                if (n.norm() - 1.0).abs() > 1e-9 {
                    return Err(format!("half-plane normal has length {}", n.norm()));
                }
            }
            Obstacle::Circle { center, radius } => {
                if !(center.iter().all(|x| x.is_finite()) && *radius > 0.0 && radius.is_finite()) {
                    return Err(format!("invalid circle radius {radius}"));
                }
            }
            Obstacle::ConvexPolygon { vertices } => {
                if vertices.len() < 3 {
                    return Err("polygon needs at least 3 vertices".into());
                }
                let pts: Vec<Vec2> = vertices.iter().map(|p| v(*p)).collect();
                let n = pts.len();
                let mut sign = 0.0f64;
                for i in 0..n {
                    let a = pts[(i + 1) % n] - pts[i];
                    let b = pts[(i + 2) % n] - pts[(i + 1) % n];
                    let c = a.perp(&b);
                    if c.abs() < 1e-12 {
                        continue;
                    }
                    if sign == 0.0 {
                        sign = c.signum();
                    } else if c.signum() != sign {
                        return Err("polygon is not convex".into());
                    }
                }
                if sign == 0.0 {
                    return Err("polygon is degenerate".into());
                }
            }
        }
        Ok(())
    }

    /// Signed distance from `p` to the solid (negative inside) and its unit
    /// gradient.
    pub fn signed_distance(&self, p: Vec2) -> (f64, Vec2) {
        match self {
            Obstacle::HalfPlane { point, normal } => {
                let n = v(*normal);
                (n.dot(&(p - v(*point))), n)
            }
            Obstacle::Circle { center, radius } => {
                let d = p - v(*center);
                let r = d.norm();
                let g = if r > 0.0 { d / r } else { Vec2::new(1.0, 0.0) };
                (r - radius, g)
            }
            Obstacle::ConvexPolygon { vertices } => polygon_distance(vertices, p),
        }
    }
}

fn polygon_distance(vertices: &[[f64; 2]], p: Vec2) -> (f64, Vec2) {
    let n = vertices.len();
    let area: f64 = (0..n)
        .map(|i| v(vertices[i]).perp(&v(vertices[(i + 1) % n])))
        .sum();
    let ccw = area > 0.0;
    let mut inside = true;
    let mut best_out = (f64::INFINITY, Vec2::zeros());
    let mut best_in = (f64::INFINITY, Vec2::zeros());
    for i in 0..n {
        let (a, b) = if ccw {
            (v(vertices[i]), v(vertices[(i + 1) % n]))
        } else {
            (v(vertices[(i + 1) % n]), v(vertices[i]))
        };
        let edge = b - a;
        let len = edge.norm();
        let outward = Vec2::new(edge.y, -edge.x) / len;
        let side = outward.dot(&(p - a));
        if side > 0.0 {
            inside = false;
        }
        if -side < best_in.0 {
            best_in = (-side, outward);
        }
        let t = ((p - a).dot(&edge) / (len * len)).clamp(0.0, 1.0);
        let closest = a + edge * t;
        let d = (p - closest).norm();
        if d < best_out.0 {
            let g = if d > 0.0 { (p - closest) / d } else { outward };
            best_out = (d, g);
        }
    }
    if inside {
        (-best_in.0, best_in.1)
    } else {
        best_out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_plane_distance() {
        let o = Obstacle::HalfPlane {
            point: [0.0, -2.0],
            normal: [0.0, 1.0],
        };
        assert!(o.check().is_ok());
        assert_relative_eq!(o.signed_distance(Vec2::new(5.0, 1.0)).0, 3.0);
        let bad = Obstacle::HalfPlane {
            point: [0.0, 0.0],
            normal: [0.0, 2.0],
        };
        assert!(bad.check().is_err());
    }

    #[test]
    fn circle_distance() {
        let o = Obstacle::Circle {
            center: [1.0, 1.0],
            radius: 2.0,
        };
        let (d, g) = o.signed_distance(Vec2::new(1.0, 4.0));
        assert_relative_eq!(d, 1.0);
        assert_relative_eq!(g.y, 1.0);
    }

    #[test]
    fn square_distance_both_windings() {
        let sq = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let mut rev = sq.clone();
        rev.reverse();
        for verts in [sq, rev] {
            let o = Obstacle::ConvexPolygon { vertices: verts };
            assert!(o.check().is_ok());
            let (d, g) = o.signed_distance(Vec2::new(1.0, 0.5));
            assert_relative_eq!(d, -0.5);
            assert_relative_eq!(g.y, -1.0);
            let (d, _) = o.signed_distance(Vec2::new(5.0, 6.0));
            assert_relative_eq!(d, 5.0);
            let (d, g) = o.signed_distance(Vec2::new(3.0, 1.0));
            assert_relative_eq!(d, 1.0);
            assert_relative_eq!(g.x, 1.0);
        }
    }

    #[test]
    fn non_convex_polygon_rejected() {
        let o = Obstacle::ConvexPolygon {
            vertices: vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.5], [2.0, 2.0], [0.0, 2.0]],
        };
        assert!(o.check().is_err());
    }
}

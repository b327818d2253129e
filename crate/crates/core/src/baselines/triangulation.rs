use crate::error::{CoverError, Result};
use crate::geometry::{ring_circle_area, Point, Polygon, Scene};

/// Ear-clipping triangulation of a simple counterclockwise polygon. Collinear
/// vertices are dropped without emitting a triangle.
pub fn ear_clip(polygon: &Polygon) -> Result<Vec<[Point; 3]>> {
    let v = polygon.vertices();
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::with_capacity(v.len().saturating_sub(2));
    let mut i = 0;
    let mut since_clip = 0;
    while idx.len() > 3 {
        let n = idx.len();
        let (ip, ic, inx) = (idx[(i + n - 1) % n], idx[i % n], idx[(i + 1) % n]);
        let (a, b, c) = (v[ip], v[ic], v[inx]);
        let turn = b.sub(a).cross(c.sub(b));
        let clip = if turn == 0.0 {
            Some(None)
        } else if turn > 0.0
            && !idx.iter().any(|&k| k != ip && k != ic && k != inx && in_triangle(v[k], a, b, c))
        {
            Some(Some([a, b, c]))
        } else {
            None
        };
        match clip {
            Some(tri) => {
                out.extend(tri);
                idx.remove(i % n);
                since_clip = 0;
                if i >= idx.len() {
                    i = 0;
                }
            }
            None => {
                i = (i + 1) % n;
                since_clip += 1;
                if since_clip > n {
                    return Err(CoverError::Triangulation(format!("no ear among {n} remaining vertices")));
                }
            }
        }
    }
    let (a, b, c) = (v[idx[0]], v[idx[1]], v[idx[2]]);
    if b.sub(a).cross(c.sub(b)) != 0.0 {
        out.push([a, b, c]);
    }
    Ok(out)
}

/// Closed containment in a counterclockwise triangle.
fn in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    b.sub(a).cross(p.sub(a)) >= 0.0 && c.sub(b).cross(p.sub(b)) >= 0.0 && a.sub(c).cross(p.sub(c)) >= 0.0
}

fn triangle_area(t: &[Point; 3]) -> f64 {
    0.5 * t[1].sub(t[0]).cross(t[2].sub(t[0]))
}

/// Sum over triangles of `min(Area(T), Σ_k Area(T ∩ C_k))`. Overlapping disks
/// inside one triangle are counted once per disk up to the triangle's area.
pub fn triangulation(scene: &Scene) -> Result<f64> {
    let tris = ear_clip(&scene.polygon)?;
    let total: f64 = tris
        .iter()
        .map(|t| {
            let area = triangle_area(t);
            let per_circle: f64 = scene
                .circles
                .iter()
                .map(|c| ring_circle_area(t, c).clamp(0.0, area.min(c.area())))
                .sum();
            per_circle.min(area)
        })
        .sum();
    Ok(total.min(scene.polygon.area()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aqbf::{compute_area, AqbfParams};
    use crate::baselines::fixtures::*;
    use crate::exact::exact_area;
    use crate::scenario::{gen_scene, GenSpec};
    use approx::assert_relative_eq;

    #[test]
    fn triangles_cover_the_polygon() {
        for seed in 1..=20 {
            let p = crate::scenario::gen_polygon(&GenSpec { n_vertices: 3 + seed as usize * 2, seed, ..GenSpec::default() });
            let tris = ear_clip(&p).unwrap();
            assert_eq!(tris.len(), p.len() - 2);
            let sum: f64 = tris.iter().map(triangle_area).sum();
            assert_relative_eq!(sum, p.area(), max_relative = 1e-12);
            assert!(tris.iter().all(|t| triangle_area(t) > 0.0));
        }
    }

    #[test]
    fn non_convex_l_shape() {
        let l = Polygon::new(vec![
            Point::new(0., 0.),
            Point::new(2., 0.),
            Point::new(2., 2.),
            Point::new(1., 2.),
            Point::new(1., 1.),
            Point::new(0., 1.),
        ])
        .unwrap();
        let tris = ear_clip(&l).unwrap();
        assert_eq!(tris.iter().map(triangle_area).sum::<f64>(), 3.0);
    }

    #[test]
    fn trivial_scenes() {
        let contained = Scene::new(square(0., 1.), vec![circle(0.5, 0.5, 5.0)]);
        assert_relative_eq!(triangulation(&contained).unwrap(), 1.0, max_relative = 1e-12);
        assert_eq!(triangulation(&disjoint()).unwrap(), 0.0);
        let doubled = Scene::new(square(0., 1.), vec![circle(0.5, 0.5, 5.0), circle(0.5, 0.5, 5.0)]);
        assert_relative_eq!(triangulation(&doubled).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn overlap_blindness_costs_accuracy() {
        for seed in [11u64, 12, 13] {
            let scene = gen_scene(&GenSpec { seed, ..GenSpec::default() });
            let exact = exact_area(&scene);
            let tri = (triangulation(&scene).unwrap() - exact).abs();
            let aqbf = (compute_area(&scene, &AqbfParams::default()).unwrap().area - exact).abs();
            assert!(tri > aqbf, "seed {seed}: tri {tri} aqbf {aqbf}");
        }
    }
}

use std::collections::HashMap;

use crate::{Error, Result};

/// Supporting half-space `normal · y ≤ offset` with a unit normal, in the
/// hull's own coordinates (ambient for full-dimensional hulls, the affine
/// frame otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Convex hull of a finite point set in 2 or 3 dimensions.
///
/// Inputs that do not span the full space are hulled inside their affine
/// hull; membership then also requires the point to lie on that flat.
#[derive(Debug, Clone)]
pub struct Hull {
    dim: usize,
    affine_dim: usize,
    origin: Vec<f64>,
    // orthonormal rows spanning the affine hull; empty when full-dimensional
    frame: Vec<Vec<f64>>,
    vertices: Vec<usize>,
    coords: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    triangles: Vec<[usize; 3]>,
}

impl Hull {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// Input indices of the hull vertices; counter-clockwise for 2-D hulls.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Coordinates of the vertices, aligned with [`Hull::vertices`].
    pub fn vertex_coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Boundary triangles of a full-dimensional 3-D hull, as positions into
    /// [`Hull::vertices`].
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// True when `x` is inside the hull or within `tol` of it.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension");
        let y = if self.frame.is_empty() {
            if self.affine_dim == self.dim {
                x.to_vec()
            } else {
                // single point
                return dist(x, &self.origin) <= tol;
            }
        } else {
            let d: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = self.frame.iter().map(|b| dot(b, &d)).collect();
            let mut resid = d;
            for (b, c) in self.frame.iter().zip(&y) {
                for (r, bi) in resid.iter_mut().zip(b) {
                    *r -= c * bi;
                }
            }
            if norm(&resid) > tol {
                return false;
            }
            y
        };
        self.facets
            .iter()
            .all(|f| dot(&f.normal, &y) <= f.offset + tol)
    }

    /// Intersection of a full-dimensional 3-D hull with the plane
    /// `x[axis] = value`, returned as a 2-D hull over the remaining two
    /// coordinates (in increasing axis order).
    pub fn slice(&self, axis: usize, value: f64) -> Result<Hull> {
        if self.dim != 3 || !self.is_full_dimensional() {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if axis >= 3 {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
        }
        let keep: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
        let mut pts: Vec<Vec<f64>> = Vec::new();
        let mut push = |p: &[f64]| pts.push(keep.iter().map(|&a| p[a]).collect());
        for t in &self.triangles {
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                let a = &self.coords[t[i]];
                let b = &self.coords[t[j]];
                let da = a[axis] - value;
                let db = b[axis] - value;
                if da == 0.0 {
                    push(a);
                }
                if da * db < 0.0 {
                    let s = da / (da - db);
                    let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect();
                    push(&p);
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "plane x[{axis}] = {value} does not meet the hull"
            )));
        }
        convex_hull(&pts)
    }
}

/// Convex hull of points in 2 or 3 dimensions.
///
/// 2-D uses Andrew's monotone chain; 3-D uses an incremental
/// beneath-beyond construction. Points within a scale-relative `1e-12` of
/// the current hull are treated as inside, so collinear and coplanar
/// boundary points are not reported as vertices.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<Hull> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidParameter("no points".into()));
    };
    let dim = first.len();
    if !(dim == 2 || dim == 3) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Shape("points have different dimensions".into()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coordinate".into()));
    }
    let scale = points
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let eps = 1e-12 * scale;

    let (simplex, frame) = affine_frame(points, eps);
    let affine_dim = simplex.len() - 1;
    let origin = points[simplex[0]].clone();

    if affine_dim == dim {
        return Ok(match dim {
            2 => hull_2d(points, eps, dim, Vec::new(), origin_zero(dim)),
            _ => hull_3d(points, &simplex, eps),
        });
    }

    // Lower-dimensional input: hull in the affine frame.
    let reduced: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let d: Vec<f64> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            frame.iter().map(|b| dot(b, &d)).collect()
        })
        .collect();
    let mut hull = match affine_dim {
        0 => Hull {
            dim,
            affine_dim: 0,
            origin: origin.clone(),
            frame: Vec::new(),
            vertices: vec![simplex[0]],
            coords: vec![origin.clone()],
            facets: Vec::new(),
            triangles: Vec::new(),
        },
        1 => hull_1d(&reduced, dim),
        _ => hull_2d(&reduced, eps, dim, frame.clone(), origin.clone()),
    };
    hull.frame = frame;
    hull.origin = origin;
    hull.coords = hull.vertices.iter().map(|&i| points[i].clone()).collect();
    Ok(hull)
}

fn origin_zero(dim: usize) -> Vec<f64> {
    vec![0.0; dim]
}

/// Greedily picks affinely independent points: the lexicographic minimum,
/// then repeatedly the point farthest from the current affine span.
fn affine_frame(points: &[Vec<f64>], eps: f64) -> (Vec<usize>, Vec<Vec<f64>>) {
    let dim = points[0].len();
    let start = (0..points.len())
        .min_by(|&a, &b| lex_cmp(&points[a], &points[b]))
        .unwrap();
    let origin = &points[start];
    let mut simplex = vec![start];
    let mut frame: Vec<Vec<f64>> = Vec::new();
    while frame.len() < dim {
        let mut best = (0.0, usize::MAX, Vec::new());
        for (i, p) in points.iter().enumerate() {
            let mut r: Vec<f64> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
            for b in &frame {
                let c = dot(b, &r);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
            let d = norm(&r);
            if d > best.0 {
                best = (d, i, r);
            }
        }
        if best.0 <= eps {
            break;
        }
        let (d, i, r) = best;
        simplex.push(i);
        frame.push(r.into_iter().map(|x| x / d).collect());
    }
    (simplex, frame)
}

fn hull_1d(reduced: &[Vec<f64>], dim: usize) -> Hull {
    let lo = (0..reduced.len())
        .min_by(|&a, &b| reduced[a][0].total_cmp(&reduced[b][0]))
        .unwrap();
    let hi = (0..reduced.len())
        .max_by(|&a, &b| reduced[a][0].total_cmp(&reduced[b][0]))
        .unwrap();
    Hull {
        dim,
        affine_dim: 1,
        origin: Vec::new(),
        frame: Vec::new(),
        vertices: vec![lo, hi],
        coords: Vec::new(),
        facets: vec![
            Facet {
                normal: vec![-1.0],
                offset: -reduced[lo][0],
            },
            Facet {
                normal: vec![1.0],
                offset: reduced[hi][0],
            },
        ],
        triangles: Vec::new(),
    }
}

/// Monotone chain on the first two coordinates of `pts`.
fn hull_2d(pts: &[Vec<f64>], eps: f64, dim: usize, frame: Vec<Vec<f64>>, origin: Vec<f64>) -> Hull {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| lex_cmp(&pts[a], &pts[b]).then(a.cmp(&b)));
    idx.dedup_by(|a, b| pts[*a][0] == pts[*b][0] && pts[*a][1] == pts[*b][1]);

    let cross = |o: usize, a: usize, b: usize| {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1])
            - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };
    // drops `a` when it is within eps of the chord o-b or turns clockwise
    let keep_turn = |o: usize, a: usize, b: usize| {
        let len = ((pts[b][0] - pts[o][0]).powi(2) + (pts[b][1] - pts[o][1]).powi(2)).sqrt();
        cross(o, a, b) > eps * len.max(f64::MIN_POSITIVE)
    };

    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !keep_turn(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !keep_turn(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let mut ring = lower;
    ring.extend(upper);

    if ring.len() < 3 {
        // numerically collinear although the frame search said otherwise
        let reduced: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let a = &pts[idx[0]];
                let b = &pts[*idx.last().unwrap()];
                let d = [b[0] - a[0], b[1] - a[1]];
                let l = (d[0] * d[0] + d[1] * d[1]).sqrt().max(f64::MIN_POSITIVE);
                vec![((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l]
            })
            .collect();
        let mut h = hull_1d(&reduced, dim);
        if frame.is_empty() {
            // full 2-D ambient space: express the segment frame explicitly
            let a = &pts[idx[0]];
            let b = &pts[*idx.last().unwrap()];
            let d = [b[0] - a[0], b[1] - a[1]];
            let l = (d[0] * d[0] + d[1] * d[1]).sqrt().max(f64::MIN_POSITIVE);
            h.frame = vec![vec![d[0] / l, d[1] / l]];
            h.origin = a.clone();
            h.coords = h.vertices.iter().map(|&i| pts[i].clone()).collect();
        }
        return h;
    }

    let mut facets = Vec::with_capacity(ring.len());
    for k in 0..ring.len() {
        let a = &pts[ring[k]];
        let b = &pts[ring[(k + 1) % ring.len()]];
        let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
        let l = (ex * ex + ey * ey).sqrt();
        let normal = vec![ey / l, -ex / l];
        let offset = normal[0] * a[0] + normal[1] * a[1];
        facets.push(Facet { normal, offset });
    }
    let affine_dim = 2;
    let coords = ring.iter().map(|&i| pts[i].clone()).collect();
    Hull {
        dim,
        affine_dim,
        origin,
        frame,
        vertices: ring,
        coords,
        facets,
        triangles: Vec::new(),
    }
}

#[derive(Clone)]
struct Face {
    v: [usize; 3],
    n: [f64; 3],
    off: f64,
}

fn hull_3d(points: &[Vec<f64>], simplex: &[usize], eps: f64) -> Hull {
    let p: Vec<[f64; 3]> = points.iter().map(|x| [x[0], x[1], x[2]]).collect();
    let make = |a: usize, b: usize, c: usize| -> Face {
        let u = sub3(p[b], p[a]);
        let w = sub3(p[c], p[a]);
        let mut n = cross3(u, w);
        let l = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if l > 0.0 {
            n = [n[0] / l, n[1] / l, n[2] / l];
        }
        Face {
            v: [a, b, c],
            n,
            off: dot3(n, p[a]),
        }
    };

    let s = [simplex[0], simplex[1], simplex[2], simplex[3]];
    let centroid = {
        let mut c = [0.0; 3];
        for &i in &s {
            for k in 0..3 {
                c[k] += p[i][k] / 4.0;
            }
        }
        c
    };
    let mut faces: Vec<Face> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add_face = |f: Face, faces: &mut Vec<Face>, alive: &mut Vec<bool>, edges: &mut HashMap<(usize, usize), usize>| {
        let id = faces.len();
        let [a, b, c] = f.v;
        edges.insert((a, b), id);
        edges.insert((b, c), id);
        edges.insert((c, a), id);
        faces.push(f);
        alive.push(true);
        id
    };
    for (a, b, c) in [(s[0], s[1], s[2]), (s[0], s[1], s[3]), (s[0], s[2], s[3]), (s[1], s[2], s[3])] {
        let mut f = make(a, b, c);
        if dot3(f.n, centroid) > f.off {
            f = make(a, c, b);
        }
        add_face(f, &mut faces, &mut alive, &mut edges);
    }
    let mut live: Vec<usize> = (0..4).collect();

    let mut visible = vec![false; 4];
    for (i, &q) in p.iter().enumerate() {
        if s.contains(&i) {
            continue;
        }
        let seen: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&f| dot3(faces[f].n, q) - faces[f].off > eps)
            .collect();
        if seen.is_empty() {
            continue;
        }
        visible.resize(faces.len(), false);
        for &f in &seen {
            visible[f] = true;
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &f in &seen {
            let [a, b, c] = faces[f].v;
            for (x, y) in [(a, b), (b, c), (c, a)] {
                match edges.get(&(y, x)) {
                    Some(&twin) if visible[twin] => {}
                    _ => horizon.push((x, y)),
                }
            }
        }
        for &f in &seen {
            alive[f] = false;
            let [a, b, c] = faces[f].v;
            for e in [(a, b), (b, c), (c, a)] {
                if edges.get(&e) == Some(&f) {
                    edges.remove(&e);
                }
            }
        }
        for (x, y) in horizon {
            let id = add_face(make(x, y, i), &mut faces, &mut alive, &mut edges);
            live.push(id);
        }
        for &f in &seen {
            visible[f] = false;
        }
        live.retain(|&f| alive[f]);
    }

    let mut vertices: Vec<usize> = live.iter().flat_map(|&f| faces[f].v).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let triangles = live
        .iter()
        .map(|&f| {
            let [a, b, c] = faces[f].v;
            [pos[&a], pos[&b], pos[&c]]
        })
        .collect();
    let facets = live
        .iter()
        .map(|&f| Facet {
            normal: faces[f].n.to_vec(),
            offset: faces[f].off,
        })
        .collect();
    Hull {
        dim: 3,
        affine_dim: 3,
        origin: vec![0.0; 3],
        frame: Vec::new(),
        coords: vertices.iter().map(|&i| points[i].clone()).collect(),
        vertices,
        facets,
        triangles,
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

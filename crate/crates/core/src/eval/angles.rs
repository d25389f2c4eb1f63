use std::io::BufRead;

use crate::error::{Error, Result};
use crate::letter::Letter;

/// Triangles whose shape reflects the cycle and flip symmetries.
pub const TRIANGLES: [[Letter; 3]; 5] = {
    use Letter::*;
    [[A, B, C], [D, E, F], [A, B, F], [B, C, D], [A, C, E]]
};

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleReport {
    pub vertices: [Letter; 3],
    /// Interior angles at each vertex, in degrees.
    pub angles: [f64; 3],
    /// Largest `|angle - 60|`.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleReport {
    /// Angle between each pair of embedding vectors, in degrees.
    pub pairs: Vec<(Letter, Letter, f64)>,
    pub triangles: Vec<TriangleReport>,
}

fn angle_between(u: &[f64], v: &[f64]) -> Option<f64> {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    Some((dot / (nu * nv)).clamp(-1.0, 1.0).acos().to_degrees())
}

/// Rounds to the 0.1 degree reporting resolution.
pub fn round_tenth(deg: f64) -> f64 {
    (deg * 10.0).round() / 10.0
}

/// Pairwise angles of the six letter embeddings and the interior angles of
/// the triangles their endpoints span.
pub fn embedding_angles(vectors: &[Vec<f64>; 6]) -> Result<AngleReport> {
    let dim = vectors[0].len();
    if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::InvalidArgument("embedding rows must share a nonzero dimension".into()));
    }
    for (l, v) in Letter::ALL.iter().zip(vectors) {
        if v.iter().all(|x| *x == 0.0) {
            return Err(Error::ZeroNorm(l.as_char()));
        }
    }
    let vec_of = |l: Letter| &vectors[l.code() as usize];
    let mut pairs = Vec::with_capacity(15);
    for (i, &a) in Letter::ALL.iter().enumerate() {
        for &b in &Letter::ALL[i + 1..] {
            let angle = angle_between(vec_of(a), vec_of(b)).expect("nonzero vectors");
            pairs.push((a, b, angle));
        }
    }
    let mut triangles = Vec::with_capacity(TRIANGLES.len());
    for vertices in TRIANGLES {
        let mut angles = [0.0; 3];
        for k in 0..3 {
            let p = vec_of(vertices[k]);
            let edge = |q: Letter| -> Vec<f64> { vec_of(q).iter().zip(p).map(|(x, y)| x - y).collect() };
            let e1 = edge(vertices[(k + 1) % 3]);
            let e2 = edge(vertices[(k + 2) % 3]);
            angles[k] = angle_between(&e1, &e2).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "triangle {}{}{} has coincident vertices",
                    vertices[0].as_char(),
                    vertices[1].as_char(),
                    vertices[2].as_char()
                ))
            })?;
        }
        let max_deviation = angles.iter().map(|a| (a - 60.0).abs()).fold(0.0, f64::max);
        triangles.push(TriangleReport {
            vertices,
            angles,
            max_deviation,
        });
    }
    Ok(AngleReport { pairs, triangles })
}

/// Six rows of whitespace-separated numbers, one per letter `a`..`f`. A
/// leading letter label on a row is allowed; blank and `#` lines are skipped.
pub fn read_embeddings<R: BufRead>(r: R) -> Result<[Vec<f64>; 6]> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(6);
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace().peekable();
        if let Some(first) = fields.peek() {
            if let Some(l) = first.strip_suffix(':').or(Some(first)).and_then(|s| {
                let mut c = s.chars();
                match (c.next(), c.next()) {
                    (Some(ch), None) => Letter::from_char(ch),
                    _ => None,
                }
            }) {
                if l.code() as usize != rows.len() {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: format!("row for {} is out of order", l.as_char()),
                    });
                }
                fields.next();
            }
        }
        let row = fields
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        rows.push(row);
    }
    let n = rows.len();
    rows.try_into()
        .map_err(|_| Error::InvalidArgument(format!("expected 6 embedding rows, found {n}")))
}

impl AngleReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("pair\tangle_deg\n");
        for (a, b, angle) in &self.pairs {
            out.push_str(&format!("{}{}\t{:.1}\n", a.as_char(), b.as_char(), round_tenth(*angle)));
        }
        out.push_str("triangle\tangle_1\tangle_2\tangle_3\tmax_dev_from_60\n");
        for t in &self.triangles {
            let name: String = t.vertices.iter().map(|l| l.as_char()).collect();
            out.push_str(&format!(
                "{name}\t{:.1}\t{:.1}\t{:.1}\t{:.1}\n",
                round_tenth(t.angles[0]),
                round_tenth(t.angles[1]),
                round_tenth(t.angles[2]),
                round_tenth(t.max_deviation)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex() -> [Vec<f64>; 6] {
        std::array::from_fn(|i| (0..6).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
    }

    fn octahedron() -> [Vec<f64>; 6] {
        // a, b, c and their antipodes d, e, f
        let e = |i: usize, s: f64| (0..3).map(|j| if i == j { s } else { 0.0 }).collect::<Vec<_>>();
        [e(0, 1.0), e(1, 1.0), e(2, 1.0), e(0, -1.0), e(1, -1.0), e(2, -1.0)]
    }

    #[test]
    fn regular_simplex_is_equilateral() {
        let r = embedding_angles(&simplex()).unwrap();
        assert_eq!(r.pairs.len(), 15);
        assert!(r.pairs.iter().all(|(_, _, a)| (a - 90.0).abs() < 1e-9));
        assert!(r.triangles.iter().all(|t| t.max_deviation < 1e-9));
    }

    #[test]
    fn octahedron_faces_are_equilateral() {
        let r = embedding_angles(&octahedron()).unwrap();
        assert!(r.triangles.iter().all(|t| t.max_deviation < 1e-9));
        assert!((r.pairs[2].2 - 180.0).abs() < 1e-9);
    }

    #[test]
    fn self_angle_and_clamp() {
        let u = [0.1, 0.7, -0.3];
        assert_eq!(round_tenth(angle_between(&u, &u).unwrap()), 0.0);
        for s in 1..200 {
            let v: Vec<f64> = u.iter().map(|x| x * s as f64 * 0.37).collect();
            let a = angle_between(&u, &v).unwrap();
            assert!(a.is_finite() && round_tenth(a) == 0.0);
            let w: Vec<f64> = v.iter().map(|x| -x).collect();
            assert_eq!(round_tenth(angle_between(&u, &w).unwrap()), 180.0);
        }
    }

    #[test]
    fn zero_vector_rejected() {
        let mut v = simplex();
        v[4] = vec![0.0; 6];
        assert!(matches!(embedding_angles(&v), Err(Error::ZeroNorm('e'))));
    }

    #[test]
    fn embedding_file() {
        let text = "# letters\na: 1 0\nb 0 1\n1 1\n-1 0\n0 -1\n-1 -1\n";
        let rows = read_embeddings(text.as_bytes()).unwrap();
        assert_eq!(rows[2], vec![1.0, 1.0]);
        assert!(read_embeddings("1 0\n".as_bytes()).is_err());
        assert!(read_embeddings("b 1 0\n".as_bytes()).is_err());
        let report = embedding_angles(&rows).unwrap();
        assert!(report.to_text().contains("ab\t90.0\n"));
    }
}

/// `lo ≤ n · x ≤ hi`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Slab {
    pub n: [f64; 3],
    pub lo: f64,
    pub hi: f64,
}

/// Bounded convex region in three coordinates cut out by slabs, for
/// iterated integration with exact limits at every level.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Polytope {
    slabs: Vec<Slab>,
}

const FEAS_TOL: f64 = 1e-10;

fn feasible(value: f64, lo: f64, hi: f64) -> bool {
    let tol = FEAS_TOL * (1.0 + lo.abs().max(hi.abs()));
    value >= lo - tol && value <= hi + tol
}

/// Solves the `k × k` system `m x = r` by Gaussian elimination with
/// partial pivoting; `None` when (nearly) singular.
fn solve(m: &mut [[f64; 3]], r: &mut [f64], k: usize) -> Option<[f64; 3]> {
    let scale = m[..k]
        .iter()
        .flat_map(|row| row[..k].iter())
        .fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in 0..k {
            if row != col {
                let f = m[row][col] / m[col][col];
                let pivot = m[col];
                for (x, p) in m[row][col..k].iter_mut().zip(&pivot[col..k]) {
                    *x -= f * p;
                }
                r[row] -= f * r[col];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in 0..k {
        x[i] = r[i] / m[i][i];
    }
    Some(x)
}

impl Polytope {
    pub fn new(slabs: Vec<Slab>) -> Self {
        Self { slabs }
    }

    /// Extent of coordinate `fixed.len()` over the section with the first
    /// coordinates fixed to `fixed`.
    pub fn extent(&self, fixed: &[f64]) -> Option<(f64, f64)> {
        let f = fixed.len();
        let k = 3 - f;
        // reduced slabs on the free coordinates
        let mut rows: Vec<([f64; 3], f64, f64)> = Vec::new();
        for sl in &self.slabs {
            let shift: f64 = (0..f).map(|i| sl.n[i] * fixed[i]).sum();
            let mut n = [0.0; 3];
            n[..k].copy_from_slice(&sl.n[f..]);
            let (lo, hi) = (sl.lo - shift, sl.hi - shift);
            if n[..k].iter().all(|&x| x == 0.0) {
                if !feasible(0.0, lo, hi) {
                    return None;
                }
                continue;
            }
            rows.push((n, lo, hi));
        }
        let planes: Vec<([f64; 3], f64)> = rows.iter().flat_map(|&(n, lo, hi)| [(n, lo), (n, hi)]).collect();
        let mut range: Option<(f64, f64)> = None;
        let mut idx = vec![0usize; k];
        let mut visit = |x: [f64; 3]| {
            if rows
                .iter()
                .all(|(n, lo, hi)| feasible((0..k).map(|i| n[i] * x[i]).sum(), *lo, *hi))
            {
                range = Some(match range {
                    None => (x[0], x[0]),
                    Some((l, h)) => (l.min(x[0]), h.max(x[0])),
                });
            }
        };
        // all k-subsets of planes
        fn next(idx: &mut [usize], n: usize) -> bool {
            let k = idx.len();
            for i in (0..k).rev() {
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    return true;
                }
            }
            false
        }
        if planes.len() < k {
            return None;
        }
        for (i, x) in idx.iter_mut().enumerate() {
            *x = i;
        }
        loop {
            let mut m = [[0.0; 3]; 3];
            let mut r = [0.0; 3];
            for (row, &p) in idx.iter().enumerate() {
                m[row] = planes[p].0;
                r[row] = planes[p].1;
            }
            if let Some(x) = solve(&mut m, &mut r, k) {
                visit(x);
            }
            if !next(&mut idx, planes.len()) {
                break;
            }
        }
        range.filter(|(l, h)| h > l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box_with_diagonal(lo: f64, hi: f64) -> Polytope {
        let slab = |n, lo, hi| Slab { n, lo, hi };
        Polytope::new(vec![
            slab([1.0, 0.0, 0.0], 0.0, 1.0),
            slab([0.0, 1.0, 0.0], 0.0, 1.0),
            slab([0.0, 0.0, 1.0], 0.0, 1.0),
            slab([1.0, 1.0, 1.0], lo, hi),
        ])
    }

    #[test]
    fn box_sections() {
        let p = unit_box_with_diagonal(-1.0, 4.0);
        assert_eq!(p.extent(&[]), Some((0.0, 1.0)));
        assert_eq!(p.extent(&[0.5]), Some((0.0, 1.0)));
        assert_eq!(p.extent(&[0.5, 0.5]), Some((0.0, 1.0)));
    }

    #[test]
    fn cut_sections() {
        // x + y + z <= 1/2
        let p = unit_box_with_diagonal(0.0, 0.5);
        let (lo, hi) = p.extent(&[]).unwrap();
        assert!(lo.abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
        let (lo, hi) = p.extent(&[0.25]).unwrap();
        assert!(lo.abs() < 1e-15 && (hi - 0.25).abs() < 1e-15);
        let (lo, hi) = p.extent(&[0.25, 0.1]).unwrap();
        assert!(lo.abs() < 1e-15 && (hi - 0.15).abs() < 1e-15);
        assert_eq!(p.extent(&[0.6]), None);
    }

    #[test]
    fn empty_region() {
        assert_eq!(unit_box_with_diagonal(3.5, 4.0).extent(&[]), None);
        let flat = Polytope::new(vec![Slab {
            n: [0.0, 0.0, 0.0],
            lo: 1.0,
            hi: 2.0,
        }]);
        assert_eq!(flat.extent(&[]), None);
    }
}

use super::poly::{CPoly, QPoly};
use super::scalar::ComplexF;
use super::KernelError;

const MAX_ITER: usize = 2000;

/// All roots of `p` by Aberth–Ehrlich iteration with Newton polishing.
///
/// Roots closer than `tol` are merged by single linkage and replaced by the
/// cluster mean; the output is sorted by (re, im).
pub fn roots(p: &CPoly, tol: f64) -> Result<Vec<ComplexF>, KernelError> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(KernelError::DegreeTooLow),
    };
    let lead = *p.leading().unwrap();
    let monic = p.scale(&(ComplexF::new(1.0, 0.0) / lead));
    let c = monic.coeffs();
    let dp = monic.derivative();

    // Cauchy bound for the initial circle.
    let radius = 1.0 + c[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<ComplexF> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            ComplexF::from_polar(0.5 * radius, theta)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for k in 0..deg {
            let pz = monic.eval(&z[k]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / dp.eval(&z[k]);
            let sum: ComplexF = (0..deg)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        ComplexF::new(0.0, 0.0)
                    } else {
                        ComplexF::new(1.0, 0.0) / diff
                    }
                })
                .sum();
            let step = ratio / (ComplexF::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if z.iter().any(|x| !x.is_finite()) {
        return Err(KernelError::NonConvergence);
    }

    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = dp.eval(zk);
            if d.norm() < 1e-8 {
                break;
            }
            let step = monic.eval(zk) / d;
            let cand = *zk - step;
            if monic.eval(&cand).norm() < monic.eval(zk).norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }

    // Backward error |p(z)| / Σ|c_k||z|^k; reduces to the plain relative
    // residual for roots of modulus ≤ 1 and stays meaningful for large roots.
    let bad = z.iter().any(|zk| {
        let mag: f64 = c.iter().enumerate().map(|(k, ck)| ck.norm() * zk.norm().powi(k as i32)).sum();
        monic.eval(zk).norm() / mag.max(1.0) >= 10.0 * tol.max(1e-15)
    });
    if bad && !converged {
        return Err(KernelError::NonConvergence);
    }

    Ok(cluster(z, tol))
}

/// Roots of an exact polynomial with multiplicity. Multiplicities are split
/// off exactly first, so repeated roots come out to full precision instead
/// of the square root of it.
pub fn roots_exact(p: &QPoly, tol: f64) -> Result<Vec<ComplexF>, KernelError> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(KernelError::DegreeTooLow);
    }
    let mut z = Vec::new();
    for (a, k) in p.squarefree_factors() {
        for r in roots(&a.to_complex(), tol)? {
            z.extend(std::iter::repeat_n(r, k));
        }
    }
    sort_complex(&mut z);
    Ok(z)
}

/// Single-linkage clustering at radius `tol`; members are replaced by the mean.
pub fn cluster(mut z: Vec<ComplexF>, tol: f64) -> Vec<ComplexF> {
    let n = z.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], k: usize) -> usize {
        let mut r = k;
        while label[r] != r {
            r = label[r];
        }
        label[k] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (z[i] - z[j]).norm() < tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|k| find(&mut label, k)).collect();
    let mut means = vec![(ComplexF::new(0.0, 0.0), 0usize); n];
    for k in 0..n {
        means[roots[k]].0 += z[k];
        means[roots[k]].1 += 1;
    }
    for k in 0..n {
        let (s, c) = means[roots[k]];
        z[k] = s / c as f64;
    }
    sort_complex(&mut z);
    z
}

pub fn sort_complex(z: &mut [ComplexF]) {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Distance between two equal-size multisets: the optimal matching cost is
/// approximated greedily, which is exact when both are small perturbations of
/// each other.
pub fn multiset_distance(a: &[ComplexF], b: &[ComplexF]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

//! Dense nonsymmetric eigendecomposition: Householder reduction to
//! Hessenberg form, Francis double-shift QR for the eigenvalues (after the
//! Algol procedures orthes/hqr2 via EISPACK and JAMA), and complex inverse
//! iteration with Rayleigh refinement for the eigenvectors.

use num::complex::Complex64;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Reduces `h` to upper Hessenberg form in place by Householder
/// similarity transformations.
fn orthes(h: &mut Mat<f64>) {
    let n = h.nrows;
    if n < 3 {
        return;
    }
    let (low, high) = (0usize, n - 1);
    let mut ort = vec![0.0; n];
    for m in (low + 1)..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
    }
    for i in 2..n {
        for j in 0..(i - 1) {
            h[(i, j)] = 0.0;
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the implicit double-shift
/// QR iteration; `h` is destroyed.
fn hqr(h: &mut Mat<f64>, values: &mut Vec<Complex64>) -> Result<()> {
    let nn = h.nrows;
    values.clear();
    values.resize(nn, Complex64::zero());
    if nn == 0 {
        return Ok(());
    }
    let low = 0isize;
    let mut n = nn as isize - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z): (f64, f64, f64, f64, f64);
    let (mut x, mut y, mut w): (f64, f64, f64);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Ok(());
    }

    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while n >= low {
        // look for a single small subdiagonal element
        let mut l = n;
        while l > low {
            let (lu, _) = (l as usize, ());
            s = h[(lu - 1, lu - 1)].abs() + h[(lu, lu)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(lu, lu - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            let nu = n as usize;
            values[nu] = Complex64::new(h[(nu, nu)] + exshift, 0.0);
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            let nu = n as usize;
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            x = h[(nu, nu)] + exshift;
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                values[nu - 1] = Complex64::new(x + z, 0.0);
                values[nu] = if z != 0.0 {
                    Complex64::new(x - w / z, 0.0)
                } else {
                    values[nu - 1]
                };
            } else {
                values[nu - 1] = Complex64::new(x + p, z);
                values[nu] = Complex64::new(x + p, -z);
            }
            n -= 2;
            iter = 0;
        } else {
            // form shift
            let nu = n as usize;
            x = h[(nu, nu)];
            y = h[(nu - 1, nu - 1)];
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];

            if iter == 10 {
                // Wilkinson's ad hoc shift
                exshift += x;
                for i in low..=n {
                    let iu = i as usize;
                    h[(iu, iu)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        let iu = i as usize;
                        h[(iu, iu)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total_iter += 1;
            if total_iter > 60 * nn {
                return Err(Error::EigenConvergence);
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            (p, q, r) = (0.0, 0.0, 0.0);
            while m >= l {
                let mu = m as usize;
                z = h[(mu, mu)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - r - s;
                r = h[(mu + 2, mu + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(mu, mu - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=n {
                let iu = i as usize;
                h[(iu, iu - 2)] = 0.0;
                if i > m + 2 {
                    h[(iu, iu - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=n, columns m..=n
            for k in m..=(n - 1) {
                let ku = k as usize;
                let notlast = k != n - 1;
                if k != m {
                    p = h[(ku, ku - 1)];
                    q = h[(ku + 1, ku - 1)];
                    r = if notlast { h[(ku + 2, ku - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[(ku, ku - 1)] = -s * x;
                } else if l != m {
                    h[(ku, ku - 1)] = -h[(ku, ku - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;

                for j in ku..nn {
                    let mut pp = h[(ku, j)] + q * h[(ku + 1, j)];
                    if notlast {
                        pp += r * h[(ku + 2, j)];
                        h[(ku + 2, j)] -= pp * z;
                    }
                    h[(ku, j)] -= pp * x;
                    h[(ku + 1, j)] -= pp * y;
                }
                let top = (n as usize).min(ku + 3);
                for i in 0..=top {
                    let mut pp = x * h[(i, ku)] + y * h[(i, ku + 1)];
                    if notlast {
                        pp += z * h[(i, ku + 2)];
                        h[(i, ku + 2)] -= pp * r;
                    }
                    h[(i, ku)] -= pp;
                    h[(i, ku + 1)] -= pp * q;
                }
            }
        }
    }
    Ok(())
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(a: &Mat<f64>) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("eigenvalues of a non-square matrix".into()));
    }
    let mut h = a.clone();
    orthes(&mut h);
    let mut values = Vec::new();
    hqr(&mut h, &mut values)?;
    Ok(values)
}

fn inf_norm(a: &Mat<f64>) -> f64 {
    (0..a.nrows)
        .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// LU factorization with partial pivoting over complex entries; near-zero
/// pivots are replaced with a tiny multiple of the scale, the standard
/// device that keeps inverse iteration going at an exact eigenvalue.
struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl ComplexLu {
    fn factor(mut m: Vec<Complex64>, n: usize, scale: f64) -> ComplexLu {
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    m[i * n + col]
                        .norm_sqr()
                        .partial_cmp(&m[j * n + col].norm_sqr())
                        .unwrap()
                })
                .unwrap();
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                perm.swap(pivot, col);
            }
            if m[col * n + col].norm() < tiny {
                m[col * n + col] = Complex64::new(tiny, 0.0);
            }
            let inv = m[col * n + col].inv();
            for i in (col + 1)..n {
                let f = m[i * n + col] * inv;
                m[i * n + col] = f;
                for j in (col + 1)..n {
                    let t = f * m[col * n + j];
                    m[i * n + j] -= t;
                }
            }
        }
        ComplexLu { n, lu: m, perm }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                let t = self.lu[i * n + j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let t = self.lu[i * n + j] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

fn residual_inf(a: &Mat<f64>, lambda: Complex64, v: &[Complex64]) -> f64 {
    let n = a.nrows;
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut acc = Complex64::zero();
        for j in 0..n {
            acc += a[(i, j)] * v[j];
        }
        acc -= lambda * v[i];
        worst = worst.max(acc.norm());
    }
    worst
}

/// Eigenvector for one eigenvalue by inverse iteration, returning the
/// Rayleigh-refined eigenvalue, the 2-normalized vector, and the residual.
fn eigenvector_for(a: &Mat<f64>, lambda: Complex64) -> (Complex64, Vec<Complex64>, f64) {
    let n = a.nrows;
    let scale = inf_norm(a).max(1.0);
    let mut best: Option<(Complex64, Vec<Complex64>, f64)> = None;
    for attempt in 0..4 {
        let shift = lambda
            + Complex64::new(
                scale * 1e-11 * attempt as f64,
                scale * 3e-12 * attempt as f64,
            );
        let mut b = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = Complex64::new(a[(i, j)], 0.0);
            }
            b[i * n + i] -= shift;
        }
        let lu = ComplexLu::factor(b, n, scale);
        // deterministic start vector, varied per attempt
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = (i + 1 + attempt * 7) as f64;
                Complex64::new(1.0 + (t * 0.7).sin() * 0.5, (t * 1.3).cos() * 0.25)
            })
            .collect();
        normalize(&mut v);
        for _ in 0..3 {
            v = lu.solve(&v);
            normalize(&mut v);
        }
        // Rayleigh refinement of the eigenvalue
        let mut num = Complex64::zero();
        for i in 0..n {
            let mut row = Complex64::zero();
            for j in 0..n {
                row += a[(i, j)] * v[j];
            }
            num += v[i].conj() * row;
        }
        let refined = num; // v has unit 2-norm
        let res = residual_inf(a, refined, &v);
        if best.as_ref().is_none_or(|(_, _, r)| res < *r) {
            best = Some((refined, v, res));
        }
        if best.as_ref().unwrap().2 <= 1e-12 * scale {
            break;
        }
    }
    best.expect("at least one attempt")
}

/// Complete eigendecomposition: QR eigenvalues, then one inverse-iteration
/// eigenvector per eigenvalue. Residuals satisfy
/// ||A v - lambda v||_inf <= 1e-9 ||A||_inf on well-conditioned inputs.
pub fn eig(a: &Mat<f64>) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let values = eigenvalues(a)?;
    Ok(values
        .into_iter()
        .map(|lambda| {
            let (refined, v, _res) = eigenvector_for(a, lambda);
            (refined, v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Mat<f64> {
        Mat::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let a = mat(&[&[3.0, 0.0], &[0.0, -2.0]]);
        let mut ev: Vec<f64> = eigenvalues(&a).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 2.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_pair_of_rotation() {
        let a = mat(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let ev = eigenvalues(&a).unwrap();
        let mut ims: Vec<f64> = ev.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-12);
        assert!((ims[1] - 1.0).abs() < 1e-12);
        assert!(ev.iter().all(|z| z.re.abs() < 1e-12));
    }

    #[test]
    fn eigenpairs_have_small_residuals() {
        // deterministic pseudo-random matrices of several sizes
        for n in 1..=12usize {
            let mut state = 0x9e3779b97f4a7c15u64 ^ (n as u64);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            };
            let a = Mat::from_fn(n, n, |_, _| next() * 5.0);
            let pairs = eig(&a).unwrap();
            assert_eq!(pairs.len(), n);
            let scale = inf_norm(&a);
            let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
            let sum: Complex64 = pairs.iter().map(|(l, _)| l).sum();
            assert!((sum.re - trace).abs() < 1e-8 * scale.max(1.0), "n={n}");
            assert!(sum.im.abs() < 1e-8 * scale.max(1.0));
            for (lambda, v) in &pairs {
                assert!(residual_inf(&a, *lambda, v) <= 1e-9 * scale.max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn repeated_eigenvalue_still_converges() {
        // Jordan-ish block: eigenvalues {2, 2, 5}
        let a = mat(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let mut ev: Vec<f64> = eigenvalues(&a).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 2.0).abs() < 1e-7);
        assert!((ev[1] - 2.0).abs() < 1e-7);
        assert!((ev[2] - 5.0).abs() < 1e-10);
    }
}

//! Real nonsymmetric eigensolver: Householder reduction to upper Hessenberg
//! form, Francis double-shift QR to real Schur form, then back-substitution
//! for the eigenvectors (EISPACK `orthes`/`hqr2` lineage).

use crate::linalg::Matrix;
use crate::scalar::Real;

/// Raw output: eigenvalues as `(re, im)` and the real eigenvector matrix in
/// the packed convention (complex pair `re ± i im` stores `Re v` in column
/// `k` and `Im v` in column `k + 1`, with `re + i im` the first of the pair).
pub(crate) struct RealEigen<T> {
    pub re: Vec<T>,
    pub im: Vec<T>,
    pub vectors: Matrix<T>,
}

#[derive(Debug)]
pub(crate) struct NoConvergence;

pub(crate) fn nonsymmetric_eigen<T: Real>(a: &Matrix<T>, max_iter: usize) -> Result<RealEigen<T>, NoConvergence> {
    let n = a.rows();
    let mut h = a.clone();
    let mut v = Matrix::zeros(n, n);
    orthes(&mut h, &mut v);
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    hqr2(&mut h, &mut v, &mut d, &mut e, max_iter)?;
    Ok(RealEigen { re: d, im: e, vectors: v })
}

fn orthes<T: Real>(h: &mut Matrix<T>, v: &mut Matrix<T>) {
    let n = h.rows();
    let low = 0usize;
    let high = n - 1;
    let mut ort = vec![T::zero(); n];

    for m in (low + 1)..high {
        let mut scale = T::zero();
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale != T::zero() {
            let mut hh = T::zero();
            for i in (m..=high).rev() {
                ort[i] = h[(i, m - 1)] / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > T::zero() {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = T::zero();
                for i in (m..=high).rev() {
                    f += ort[i] * h[(i, j)];
                }
                f /= hh;
                for i in m..=high {
                    h[(i, j)] -= f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = T::zero();
                for j in (m..=high).rev() {
                    f += ort[j] * h[(i, j)];
                }
                f /= hh;
                for j in m..=high {
                    h[(i, j)] -= f * ort[j];
                }
            }
            ort[m] = scale * ort[m];
            h[(m, m - 1)] = scale * g;
        }
    }

    for i in 0..n {
        for j in 0..n {
            v[(i, j)] = if i == j { T::one() } else { T::zero() };
        }
    }
    if high < 2 {
        return;
    }
    for m in ((low + 1)..high).rev() {
        if h[(m, m - 1)] != T::zero() {
            for i in (m + 1)..=high {
                ort[i] = h[(i, m - 1)];
            }
            for j in m..=high {
                let mut g = T::zero();
                for i in m..=high {
                    g += ort[i] * v[(i, j)];
                }
                g = (g / ort[m]) / h[(m, m - 1)];
                for i in m..=high {
                    v[(i, j)] += g * ort[i];
                }
            }
        }
    }
}

fn cdiv<T: Real>(xr: T, xi: T, yr: T, yi: T) -> (T, T) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

#[allow(clippy::many_single_char_names, clippy::too_many_lines)]
fn hqr2<T: Real>(h: &mut Matrix<T>, v: &mut Matrix<T>, d: &mut [T], e: &mut [T], max_iter: usize) -> Result<(), NoConvergence> {
    let nn = h.rows();
    let zero = T::zero();
    let two = T::lit(2.0);
    let mut n = nn as isize - 1;
    let low: isize = 0;
    let high = nn as isize - 1;
    let eps = T::epsilon();
    let mut exshift = zero;
    let (mut p, mut q, mut r, mut s, mut z) = (zero, zero, zero, zero, zero);
    let (mut t, mut w, mut x, mut y);

    let mut norm = zero;
    for i in 0..nn {
        let start = if i == 0 { 0 } else { i - 1 };
        for j in start..nn {
            norm += h[(i, j)].abs();
        }
    }

    macro_rules! hm {
        ($i:expr, $j:expr) => {
            h[(($i) as usize, ($j) as usize)]
        };
    }

    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while n >= low {
        let mut l = n;
        while l > low {
            s = hm!(l - 1, l - 1).abs() + hm!(l, l).abs();
            if s == zero {
                s = norm;
            }
            if hm!(l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            hm!(n, n) = hm!(n, n) + exshift;
            d[n as usize] = hm!(n, n);
            e[n as usize] = zero;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            w = hm!(n, n - 1) * hm!(n - 1, n);
            p = (hm!(n - 1, n - 1) - hm!(n, n)) / two;
            q = p * p + w;
            z = q.abs().sqrt();
            hm!(n, n) = hm!(n, n) + exshift;
            hm!(n - 1, n - 1) = hm!(n - 1, n - 1) + exshift;
            x = hm!(n, n);

            if q >= zero {
                z = if p >= zero { p + z } else { p - z };
                d[(n - 1) as usize] = x + z;
                d[n as usize] = d[(n - 1) as usize];
                if z != zero {
                    d[n as usize] = x - w / z;
                }
                e[(n - 1) as usize] = zero;
                e[n as usize] = zero;
                x = hm!(n, n - 1);
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;

                for j in (n - 1)..(nn as isize) {
                    z = hm!(n - 1, j);
                    hm!(n - 1, j) = q * z + p * hm!(n, j);
                    hm!(n, j) = q * hm!(n, j) - p * z;
                }
                for i in 0..=n {
                    z = hm!(i, n - 1);
                    hm!(i, n - 1) = q * z + p * hm!(i, n);
                    hm!(i, n) = q * hm!(i, n) - p * z;
                }
                for i in low..=high {
                    let (iu, n1, nu) = (i as usize, (n - 1) as usize, n as usize);
                    z = v[(iu, n1)];
                    v[(iu, n1)] = q * z + p * v[(iu, nu)];
                    v[(iu, nu)] = q * v[(iu, nu)] - p * z;
                }
            } else {
                d[(n - 1) as usize] = x + p;
                d[n as usize] = x + p;
                e[(n - 1) as usize] = z;
                e[n as usize] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            x = hm!(n, n);
            y = zero;
            w = zero;
            if l < n {
                y = hm!(n - 1, n - 1);
                w = hm!(n, n - 1) * hm!(n - 1, n);
            }

            // Wilkinson's exceptional shift
            if iter == 10 {
                exshift += x;
                for i in low..=n {
                    hm!(i, i) = hm!(i, i) - x;
                }
                s = hm!(n, n - 1).abs() + hm!(n - 1, n - 2).abs();
                x = T::lit(0.75) * s;
                y = x;
                w = T::lit(-0.4375) * s * s;
            }

            if iter == 30 {
                s = (y - x) / two;
                s = s * s + w;
                if s > zero {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / two + s);
                    for i in low..=n {
                        hm!(i, i) = hm!(i, i) - s;
                    }
                    exshift += s;
                    x = T::lit(0.964);
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total_iter += 1;
            if total_iter > max_iter {
                return Err(NoConvergence);
            }

            let mut m = n - 2;
            while m >= l {
                z = hm!(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / hm!(m + 1, m) + hm!(m, m + 1);
                q = hm!(m + 1, m + 1) - z - r - s;
                r = hm!(m + 2, m + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if hm!(m, m - 1).abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (hm!(m - 1, m - 1).abs() + z.abs() + hm!(m + 1, m + 1).abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=n {
                hm!(i, i - 2) = zero;
                if i > m + 2 {
                    hm!(i, i - 3) = zero;
                }
            }

            let mut k = m;
            while k < n {
                let notlast = k != n - 1;
                if k != m {
                    p = hm!(k, k - 1);
                    q = hm!(k + 1, k - 1);
                    r = if notlast { hm!(k + 2, k - 1) } else { zero };
                    x = p.abs() + q.abs() + r.abs();
                    if x == zero {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < zero {
                    s = -s;
                }
                if s != zero {
                    if k != m {
                        hm!(k, k - 1) = -s * x;
                    } else if l != m {
                        hm!(k, k - 1) = -hm!(k, k - 1);
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..(nn as isize) {
                        p = hm!(k, j) + q * hm!(k + 1, j);
                        if notlast {
                            p += r * hm!(k + 2, j);
                            hm!(k + 2, j) = hm!(k + 2, j) - p * z;
                        }
                        hm!(k, j) = hm!(k, j) - p * x;
                        hm!(k + 1, j) = hm!(k + 1, j) - p * y;
                    }
                    let upper = n.min(k + 3);
                    for i in 0..=upper {
                        p = x * hm!(i, k) + y * hm!(i, k + 1);
                        if notlast {
                            p += z * hm!(i, k + 2);
                            hm!(i, k + 2) = hm!(i, k + 2) - p * r;
                        }
                        hm!(i, k) = hm!(i, k) - p;
                        hm!(i, k + 1) = hm!(i, k + 1) - p * q;
                    }
                    for i in low..=high {
                        let (iu, ku) = (i as usize, k as usize);
                        p = x * v[(iu, ku)] + y * v[(iu, ku + 1)];
                        if notlast {
                            p += z * v[(iu, ku + 2)];
                            v[(iu, ku + 2)] = v[(iu, ku + 2)] - p * r;
                        }
                        v[(iu, ku)] = v[(iu, ku)] - p;
                        v[(iu, ku + 1)] = v[(iu, ku + 1)] - p * q;
                    }
                }
                k += 1;
            }
        }
    }

    // back-substitution on the quasi-triangular Schur form
    if norm == zero {
        return Ok(());
    }
    let mut n = nn as isize - 1;
    while n >= 0 {
        p = d[n as usize];
        q = e[n as usize];
        if q == zero {
            let mut l = n;
            hm!(n, n) = T::one();
            let mut i = n - 1;
            while i >= 0 {
                w = hm!(i, i) - p;
                r = zero;
                for j in l..=n {
                    r += hm!(i, j) * hm!(j, n);
                }
                if e[i as usize] < zero {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i as usize] == zero {
                        hm!(i, n) = if w != zero { -r / w } else { -r / (eps * norm) };
                    } else {
                        x = hm!(i, i + 1);
                        y = hm!(i + 1, i);
                        q = (d[i as usize] - p) * (d[i as usize] - p) + e[i as usize] * e[i as usize];
                        t = (x * s - z * r) / q;
                        hm!(i, n) = t;
                        hm!(i + 1, n) = if x.abs() > z.abs() { (-r - w * t) / x } else { (-s - y * t) / z };
                    }
                    t = hm!(i, n).abs();
                    if (eps * t) * t > T::one() {
                        for j in i..=n {
                            hm!(j, n) = hm!(j, n) / t;
                        }
                    }
                }
                i -= 1;
            }
        } else if q < zero {
            let mut l = n - 1;
            if hm!(n, n - 1).abs() > hm!(n - 1, n).abs() {
                hm!(n - 1, n - 1) = q / hm!(n, n - 1);
                hm!(n - 1, n) = -(hm!(n, n) - p) / hm!(n, n - 1);
            } else {
                let (cr, ci) = cdiv(zero, -hm!(n - 1, n), hm!(n - 1, n - 1) - p, q);
                hm!(n - 1, n - 1) = cr;
                hm!(n - 1, n) = ci;
            }
            hm!(n, n - 1) = zero;
            hm!(n, n) = T::one();
            let mut i = n - 2;
            while i >= 0 {
                let mut ra = zero;
                let mut sa = zero;
                for j in l..=n {
                    ra += hm!(i, j) * hm!(j, n - 1);
                    sa += hm!(i, j) * hm!(j, n);
                }
                w = hm!(i, i) - p;
                if e[i as usize] < zero {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i as usize] == zero {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        hm!(i, n - 1) = cr;
                        hm!(i, n) = ci;
                    } else {
                        x = hm!(i, i + 1);
                        y = hm!(i + 1, i);
                        let di = d[i as usize] - p;
                        let mut vr = di * di + e[i as usize] * e[i as usize] - q * q;
                        let vi = di * two * q;
                        if vr == zero && vi == zero {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        hm!(i, n - 1) = cr;
                        hm!(i, n) = ci;
                        if x.abs() > z.abs() + q.abs() {
                            hm!(i + 1, n - 1) = (-ra - w * hm!(i, n - 1) + q * hm!(i, n)) / x;
                            hm!(i + 1, n) = (-sa - w * hm!(i, n) - q * hm!(i, n - 1)) / x;
                        } else {
                            let (cr, ci) = cdiv(-r - y * hm!(i, n - 1), -s - y * hm!(i, n), z, q);
                            hm!(i + 1, n - 1) = cr;
                            hm!(i + 1, n) = ci;
                        }
                    }
                    t = hm!(i, n - 1).abs().max(hm!(i, n).abs());
                    if (eps * t) * t > T::one() {
                        for j in i..=n {
                            hm!(j, n - 1) = hm!(j, n - 1) / t;
                            hm!(j, n) = hm!(j, n) / t;
                        }
                    }
                }
                i -= 1;
            }
        }
        n -= 1;
    }

    // back-transform to eigenvectors of the original matrix
    for j in (0..nn).rev() {
        for i in 0..nn {
            let mut acc = zero;
            for k in 0..=j {
                acc += v[(i, k)] * h[(k, j)];
            }
            v[(i, j)] = acc;
        }
    }
    Ok(())
}

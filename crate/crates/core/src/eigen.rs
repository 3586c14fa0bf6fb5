//! Eigenvalues of small dense real matrices.
//!
//! Balancing followed by the Francis double-shift QR iteration on an upper
//! Hessenberg matrix. The polynomial root finder feeds it companion matrices,
//! which are already Hessenberg; general matrices are reduced first.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 60;

/// Square matrix stored 1-based internally so the QR sweep can follow the
/// classical index layout without off-by-one shuffling.
struct Work {
    n: usize,
    data: Vec<f64>,
}

impl Work {
    fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = vec![0.0; (n + 1) * (n + 1)];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                data[(i + 1) * (n + 1) + j + 1] = v;
            }
        }
        Work { n, data }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.n + 1) + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let n = self.n;
        &mut self.data[i * (n + 1) + j]
    }
}

/// Eigenvalues of a dense square matrix given by rows.
///
/// Complex eigenvalues come out as adjacent conjugate pairs.
pub fn eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let mut w = Work::from_rows(rows);
    if w.n == 0 {
        return Ok(Vec::new());
    }
    balance(&mut w);
    reduce_to_hessenberg(&mut w);
    hqr(&mut w)
}

/// Eigenvalues of a matrix that is already upper Hessenberg.
pub fn hessenberg_eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let mut w = Work::from_rows(rows);
    if w.n == 0 {
        return Ok(Vec::new());
    }
    balance(&mut w);
    hqr(&mut w)
}

fn balance(w: &mut Work) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let n = w.n;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += w.at(j, i).abs();
                    r += w.at(i, j).abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        *w.at_mut(i, j) *= g;
                    }
                    for j in 1..=n {
                        *w.at_mut(j, i) *= f;
                    }
                }
            }
        }
    }
}

/// Gaussian elimination with pivoting to upper Hessenberg form.
fn reduce_to_hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    for m in 2..n {
        let mut x: f64 = 0.0;
        let mut i = m;
        for j in m..=n {
            if w.at(j, m - 1).abs() > x.abs() {
                x = w.at(j, m - 1);
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = w.at(i, j);
                *w.at_mut(i, j) = w.at(m, j);
                *w.at_mut(m, j) = t;
            }
            for j in 1..=n {
                let t = w.at(j, i);
                *w.at_mut(j, i) = w.at(j, m);
                *w.at_mut(j, m) = t;
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = w.at(i, m - 1);
                if y != 0.0 {
                    y /= x;
                    *w.at_mut(i, m - 1) = y;
                    for j in m..=n {
                        let v = w.at(m, j);
                        *w.at_mut(i, j) -= y * v;
                    }
                    for j in 1..=n {
                        let v = w.at(j, i);
                        *w.at_mut(j, m) += y * v;
                    }
                }
            }
        }
    }
    // Clear the multipliers stored below the subdiagonal.
    for i in 3..=n {
        for j in 1..(i - 1) {
            *w.at_mut(i, j) = 0.0;
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

fn hqr(w: &mut Work) -> Result<Vec<Complex64>> {
    let n = w.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += w.at(i, j).abs();
        }
    }

    let mut nn = n as isize;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 2 {
                let mut s = w.at(l - 1, l - 1).abs() + w.at(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if w.at(l, l - 1).abs() + s == s {
                    *w.at_mut(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = w.at(nu, nu);
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
            } else {
                let mut y = w.at(nu - 1, nu - 1);
                let mut ww = w.at(nu, nu - 1) * w.at(nu - 1, nu);
                if l == nu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + ww;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != 0.0 {
                            wr[nu] = x - ww / z;
                        }
                        wi[nu - 1] = 0.0;
                        wi[nu] = 0.0;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = z;
                        wi[nu] = -z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITERATIONS {
                        return Err(Error::NoConvergence);
                    }
                    if its > 0 && its % 10 == 0 {
                        // Exceptional shift.
                        t += x;
                        for i in 1..=nu {
                            *w.at_mut(i, i) -= x;
                        }
                        let s = w.at(nu, nu - 1).abs() + w.at(nu - 1, nu - 2).abs();
                        x = 0.75 * s;
                        y = x;
                        ww = -0.4375 * s * s;
                    }
                    its += 1;

                    let (mut p, mut q, mut r);
                    let mut m = nu - 2;
                    loop {
                        let z = w.at(m, m);
                        r = x - z;
                        let s = y - z;
                        p = (r * s - ww) / w.at(m + 1, m) + w.at(m, m + 1);
                        q = w.at(m + 1, m + 1) - z - r - s;
                        r = w.at(m + 2, m + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = w.at(m, m - 1).abs() * (q.abs() + r.abs());
                        let v = p.abs()
                            * (w.at(m - 1, m - 1).abs() + z.abs() + w.at(m + 1, m + 1).abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nu {
                        *w.at_mut(i, i - 2) = 0.0;
                        if i != m + 2 {
                            *w.at_mut(i, i - 3) = 0.0;
                        }
                    }
                    let mut k = m;
                    while k + 1 <= nu {
                        if k != m {
                            p = w.at(k, k - 1);
                            q = w.at(k + 1, k - 1);
                            r = 0.0;
                            if k != nu - 1 {
                                r = w.at(k + 2, k - 1);
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    *w.at_mut(k, k - 1) = -w.at(k, k - 1);
                                }
                            } else {
                                *w.at_mut(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                let mut pp = w.at(k, j) + q * w.at(k + 1, j);
                                if k != nu - 1 {
                                    pp += r * w.at(k + 2, j);
                                    *w.at_mut(k + 2, j) -= pp * z;
                                }
                                *w.at_mut(k + 1, j) -= pp * y;
                                *w.at_mut(k, j) -= pp * x;
                            }
                            let mmin = nu.min(k + 3);
                            for i in l..=mmin {
                                let mut pp = x * w.at(i, k) + y * w.at(i, k + 1);
                                if k != nu - 1 {
                                    pp += z * w.at(i, k + 2);
                                    *w.at_mut(i, k + 2) -= pp * r;
                                }
                                *w.at_mut(i, k + 1) -= pp * q;
                                *w.at_mut(i, k) -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 1 || l + 1 >= nn as usize {
                break;
            }
        }
    }

    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

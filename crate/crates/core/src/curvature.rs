//! Levi-Civita connection and curvature on a chart.
//!
//! All first and second metric derivatives come from jet evaluation, so the
//! Christoffel symbols and the curvature array are exact up to rounding.
//!
//! Sign conventions, fixed once for the whole crate:
//!   R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_[X,Y] Z
//!   R(X,Y,Z,W) = g(R(X,Y)Z, W)
//!   K(X,Y) = −R(X,Y,X,Y) / (g(X,X)g(Y,Y) − g(X,Y)^2)

use crate::chart::Point;
use crate::error::{GeomError, Result};
use crate::fd::richardson_partial;
use crate::field::{MetricField, TensorField};
use nalgebra::DMatrix;

/// Christoffel symbols and their first coordinate derivatives at a point.
pub struct Christoffel {
    pub dim: usize,
    /// gamma[(k*d + i)*d + j] = Γ^k_{ij}
    gamma: Vec<f64>,
    /// dgamma[((m*d + k)*d + i)*d + j] = ∂_m Γ^k_{ij}
    dgamma: Vec<f64>,
}

impl Christoffel {
    #[inline]
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        let d = self.dim;
        self.gamma[(k * d + i) * d + j]
    }

    #[inline]
    pub fn dgamma(&self, m: usize, k: usize, i: usize, j: usize) -> f64 {
        let d = self.dim;
        self.dgamma[((m * d + k) * d + i) * d + j]
    }
}

/// Γ^k_{ij} = ½ g^{kl} (∂_i g_{lj} + ∂_j g_{il} − ∂_l g_{ij}), plus ∂Γ.
pub fn christoffel(g: &MetricField, p: &Point) -> Result<Christoffel> {
    let d = g.dim();
    let jets = g.field.jet_eval(p)?;
    let gmat = DMatrix::from_fn(d, d, |i, j| jets[i * d + j].value);
    let inv = nalgebra::Cholesky::new(gmat)
        .ok_or_else(|| GeomError::DegenerateMetric {
            point: p.coords.clone(),
        })?
        .inverse();

    let dg = |m: usize, i: usize, j: usize| jets[i * d + j].d(m);
    let d2g = |m: usize, l: usize, i: usize, j: usize| jets[i * d + j].dd(m, l);
    // c[l,i,j] = ∂_i g_{lj} + ∂_j g_{il} − ∂_l g_{ij}
    let c = |l: usize, i: usize, j: usize| dg(i, l, j) + dg(j, i, l) - dg(l, i, j);
    let dc = |m: usize, l: usize, i: usize, j: usize| {
        d2g(m, i, l, j) + d2g(m, j, i, l) - d2g(m, l, i, j)
    };

    // ∂_m g^{kl} = −(g^{-1} ∂_m g g^{-1})_{kl}
    let mut dinv = vec![DMatrix::zeros(d, d); d];
    for m in 0..d {
        let dgm = DMatrix::from_fn(d, d, |i, j| dg(m, i, j));
        dinv[m] = -(&inv * dgm * &inv);
    }

    let mut gamma = vec![0.0; d * d * d];
    let mut dgamma = vec![0.0; d * d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for l in 0..d {
                    acc += inv[(k, l)] * c(l, i, j);
                }
                gamma[(k * d + i) * d + j] = 0.5 * acc;
                for m in 0..d {
                    let mut dacc = 0.0;
                    for l in 0..d {
                        dacc += dinv[m][(k, l)] * c(l, i, j) + inv[(k, l)] * dc(m, l, i, j);
                    }
                    dgamma[((m * d + k) * d + i) * d + j] = 0.5 * dacc;
                }
            }
        }
    }
    Ok(Christoffel {
        dim: d,
        gamma,
        dgamma,
    })
}

/// Levi-Civita covariant derivative ∇_X T at `p`, reusing precomputed
/// Christoffel symbols. Supported variances: (1,0), (0,1), (1,1), (0,2).
pub fn covariant_derivative_with(
    ch: &Christoffel,
    t: &TensorField,
    x: &TensorField,
    p: &Point,
) -> Result<Vec<f64>> {
    let d = t.dim();
    let xv = x.eval(p)?;
    let tj = t.jet_eval(p)?;
    let dt = |i: usize, flat: usize| tj[flat].d(i);
    let tv = |flat: usize| tj[flat].value;
    let mut out = vec![0.0; tj.len()];
    match t.variance {
        (1, 0) => {
            for k in 0..d {
                let mut acc = 0.0;
                for i in 0..d {
                    let mut term = dt(i, k);
                    for m in 0..d {
                        term += ch.gamma(k, i, m) * tv(m);
                    }
                    acc += xv[i] * term;
                }
                out[k] = acc;
            }
        }
        (0, 1) => {
            for k in 0..d {
                let mut acc = 0.0;
                for i in 0..d {
                    let mut term = dt(i, k);
                    for m in 0..d {
                        term -= ch.gamma(m, i, k) * tv(m);
                    }
                    acc += xv[i] * term;
                }
                out[k] = acc;
            }
        }
        (1, 1) => {
            for k in 0..d {
                for l in 0..d {
                    let mut acc = 0.0;
                    for i in 0..d {
                        let mut term = dt(i, k * d + l);
                        for m in 0..d {
                            term += ch.gamma(k, i, m) * tv(m * d + l);
                            term -= ch.gamma(m, i, l) * tv(k * d + m);
                        }
                        acc += xv[i] * term;
                    }
                    out[k * d + l] = acc;
                }
            }
        }
        (0, 2) => {
            for k in 0..d {
                for l in 0..d {
                    let mut acc = 0.0;
                    for i in 0..d {
                        let mut term = dt(i, k * d + l);
                        for m in 0..d {
                            term -= ch.gamma(m, i, k) * tv(m * d + l);
                            term -= ch.gamma(m, i, l) * tv(k * d + m);
                        }
                        acc += xv[i] * term;
                    }
                    out[k * d + l] = acc;
                }
            }
        }
        (a, b) => return Err(GeomError::UnsupportedVariance(a, b)),
    }
    Ok(out)
}

pub fn covariant_derivative(
    g: &MetricField,
    t: &TensorField,
    x: &TensorField,
    p: &Point,
) -> Result<Vec<f64>> {
    let ch = christoffel(g, p)?;
    covariant_derivative_with(&ch, t, x, p)
}

/// Coordinate curvature array R^l_{kij}:
/// R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l,
/// R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}.
pub fn riemann_array(g: &MetricField, p: &Point) -> Result<Vec<f64>> {
    let ch = christoffel(g, p)?;
    let d = g.dim();
    let mut r = vec![0.0; d * d * d * d];
    for l in 0..d {
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let mut acc = ch.dgamma(i, l, j, k) - ch.dgamma(j, l, i, k);
                    for m in 0..d {
                        acc += ch.gamma(l, i, m) * ch.gamma(m, j, k)
                            - ch.gamma(l, j, m) * ch.gamma(m, i, k);
                    }
                    r[((l * d + k) * d + i) * d + j] = acc;
                }
            }
        }
    }
    Ok(r)
}

/// R(x, y)z from a precomputed curvature array and vector values.
pub fn riemann_apply_values(riem: &[f64], d: usize, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for l in 0..d {
        let mut acc = 0.0;
        for k in 0..d {
            if z[k] == 0.0 {
                continue;
            }
            for i in 0..d {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..d {
                    acc += riem[((l * d + k) * d + i) * d + j] * z[k] * x[i] * y[j];
                }
            }
        }
        out[l] = acc;
    }
    out
}

pub fn riemann_apply(
    g: &MetricField,
    x: &TensorField,
    y: &TensorField,
    z: &TensorField,
    p: &Point,
) -> Result<Vec<f64>> {
    let riem = riemann_array(g, p)?;
    Ok(riemann_apply_values(
        &riem,
        g.dim(),
        &x.eval(p)?,
        &y.eval(p)?,
        &z.eval(p)?,
    ))
}

/// R(x,y,z,w) = g(R(x,y)z, w) from precomputed data.
pub fn riemann_4_values(
    riem: &[f64],
    gmat: &DMatrix<f64>,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    w: &[f64],
) -> f64 {
    let d = gmat.nrows();
    let rv = riemann_apply_values(riem, d, x, y, z);
    let mut acc = 0.0;
    for l in 0..d {
        for m in 0..d {
            acc += gmat[(l, m)] * rv[l] * w[m];
        }
    }
    acc
}

pub fn riemann_4(
    g: &MetricField,
    x: &TensorField,
    y: &TensorField,
    z: &TensorField,
    w: &TensorField,
    p: &Point,
) -> Result<f64> {
    let riem = riemann_array(g, p)?;
    let gmat = g.matrix(p)?;
    Ok(riemann_4_values(
        &riem,
        &gmat,
        &x.eval(p)?,
        &y.eval(p)?,
        &z.eval(p)?,
        &w.eval(p)?,
    ))
}

/// Gram-Schmidt orthonormalization of `basis` with respect to the inner
/// product `gmat`. Vectors are processed in order.
pub fn gram_schmidt(gmat: &DMatrix<f64>, basis: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = gmat.nrows();
    let ip = |a: &[f64], b: &[f64]| {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += gmat[(i, j)] * a[i] * b[j];
            }
        }
        s
    };
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for v in basis {
        let mut u = v.clone();
        for e in &frame {
            let c = ip(&u, e);
            for i in 0..d {
                u[i] -= c * e[i];
            }
        }
        let n = ip(&u, &u);
        if n <= 1e-14 {
            return Err(GeomError::DegenerateVector(n.max(0.0).sqrt()));
        }
        let n = n.sqrt();
        for x in &mut u {
            *x /= n;
        }
        frame.push(u);
    }
    Ok(frame)
}

/// Ricci tensor components Ric_{ab} = Σ_e R(E_e, ∂_a, ∂_b, E_e) summed over
/// a Gram-Schmidt orthonormal frame built from `basis` (coordinate frame
/// when `basis` is None).
pub fn ricci_frame_sum(g: &MetricField, p: &Point, basis: Option<&[Vec<f64>]>) -> Result<Vec<f64>> {
    let d = g.dim();
    let gmat = g.matrix(p)?;
    let coord: Vec<Vec<f64>>;
    let basis = match basis {
        Some(b) => b,
        None => {
            coord = (0..d)
                .map(|i| {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    e
                })
                .collect();
            &coord
        }
    };
    let frame = gram_schmidt(&gmat, basis)?;
    let riem = riemann_array(g, p)?;
    let mut ric = vec![0.0; d * d];
    for a in 0..d {
        let mut ea = vec![0.0; d];
        ea[a] = 1.0;
        for b in 0..d {
            let mut eb = vec![0.0; d];
            eb[b] = 1.0;
            let mut acc = 0.0;
            for e in &frame {
                acc += riemann_4_values(&riem, &gmat, e, &ea, &eb, e);
            }
            ric[a * d + b] = acc;
        }
    }
    Ok(ric)
}

/// Ricci by index contraction: Ric_{ab} = Σ_i R^i_{b i a}.
pub fn ricci_contraction(g: &MetricField, p: &Point) -> Result<Vec<f64>> {
    let d = g.dim();
    let riem = riemann_array(g, p)?;
    let mut ric = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            let mut acc = 0.0;
            for i in 0..d {
                acc += riem[((i * d + b) * d + i) * d + a];
            }
            ric[a * d + b] = acc;
        }
    }
    Ok(ric)
}

/// Default Ricci evaluation (frame sum over the coordinate frame).
pub fn ricci(g: &MetricField, p: &Point) -> Result<Vec<f64>> {
    ricci_frame_sum(g, p, None)
}

/// Sectional curvature of the plane spanned by x and y.
pub fn sectional(g: &MetricField, x: &[f64], y: &[f64], p: &Point) -> Result<f64> {
    let gxx = g.pair_values(p, x, x)?;
    let gyy = g.pair_values(p, y, y)?;
    let gxy = g.pair_values(p, x, y)?;
    let den = gxx * gyy - gxy * gxy;
    if den <= 1e-12 * gxx * gyy {
        return Err(GeomError::DegeneratePlane(den));
    }
    let riem = riemann_array(g, p)?;
    let gmat = g.matrix(p)?;
    Ok(-riemann_4_values(&riem, &gmat, x, y, x, y) / den)
}

/// Lie bracket [X,Y]^m = X^n ∂_n Y^m − Y^n ∂_n X^m.
pub fn lie_bracket(x: &TensorField, y: &TensorField, p: &Point) -> Result<Vec<f64>> {
    assert_eq!(x.variance, (1, 0));
    assert_eq!(y.variance, (1, 0));
    let d = x.dim();
    let xj = x.jet_eval(p)?;
    let yj = y.jet_eval(p)?;
    let mut out = vec![0.0; d];
    for m in 0..d {
        let mut acc = 0.0;
        for n in 0..d {
            acc += xj[n].value * yj[m].d(n) - yj[n].value * xj[m].d(n);
        }
        out[m] = acc;
    }
    Ok(out)
}

/// Directional derivative of the Ricci tensor, (∇_dir Ric)_{jk}, computed by
/// two-level Richardson extrapolation of the jet-exact Ricci (step 1e-3)
/// plus the usual Christoffel corrections. Third metric derivatives never
/// enter exactly anywhere else, so this is the one finite-difference path in
/// the engine.
pub fn ricci_directional_derivative(g: &MetricField, p: &Point, dir: &[f64]) -> Result<Vec<f64>> {
    let d = g.dim();
    let ch = christoffel(g, p)?;
    let ric = ricci_contraction(g, p)?;
    let h = 1e-3;
    // ∂_i Ric_{jk} for the needed i only (those with dir[i] != 0)
    let mut dric = vec![vec![0.0; d * d]; d];
    for i in 0..d {
        if dir[i] == 0.0 {
            continue;
        }
        for j in 0..d {
            for k in 0..=j {
                let f = |x: &[f64]| {
                    ricci_contraction(g, &Point::new(x.to_vec())).expect("fd step left domain")
                        [j * d + k]
                };
                let v = richardson_partial(&f, &p.coords, i, h, 2);
                dric[i][j * d + k] = v;
                dric[i][k * d + j] = v;
            }
        }
    }
    let mut out = vec![0.0; d * d];
    for j in 0..d {
        for k in 0..d {
            let mut acc = 0.0;
            for i in 0..d {
                if dir[i] == 0.0 {
                    continue;
                }
                let mut term = dric[i][j * d + k];
                for m in 0..d {
                    term -= ch.gamma(m, i, j) * ric[m * d + k];
                    term -= ch.gamma(m, i, k) * ric[j * d + m];
                }
                acc += dir[i] * term;
            }
            out[j * d + k] = acc;
        }
    }
    Ok(out)
}

pub fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

//! Second-order forward jets: truncated Taylor arithmetic carrying a value,
//! a gradient, and a symmetric Hessian. Propagating chart coordinates seeded
//! as variables through a field's component functions yields exact first and
//! second partial derivatives, with no truncation error.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    /// Length = dim.
    pub grad: Vec<f64>,
    /// Row-major dim x dim, symmetric by construction.
    pub hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(dim: usize, value: f64) -> Self {
        Self {
            value,
            grad: vec![0.0; dim],
            hess: vec![0.0; dim * dim],
        }
    }

    /// Seed coordinate `i` as the differentiation variable.
    pub fn variable(dim: usize, i: usize, value: f64) -> Self {
        let mut j = Self::constant(dim, value);
        j.grad[i] = 1.0;
        j
    }

    /// A constant with the same dimension as `like`.
    pub fn constant_like(like: &Jet2, value: f64) -> Self {
        Self::constant(like.dim(), value)
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn d(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn dd(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim() + j]
    }

    /// Univariate chain rule: given outer value f(u), f'(u), f''(u) at
    /// u = self.value, produce the jet of f(self).
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let n = self.dim();
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            grad[i] = f1 * self.grad[i];
            for j in 0..n {
                hess[i * n + j] = f1 * self.hess[i * n + j] + f2 * self.grad[i] * self.grad[j];
            }
        }
        Jet2 {
            value: f0,
            grad,
            hess,
        }
    }

    pub fn recip(&self) -> Jet2 {
        let u = self.value;
        self.chain(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Jet2 {
        let u = self.value;
        self.chain(u.ln(), 1.0 / u, -1.0 / (u * u))
    }

    pub fn sqrt(&self) -> Jet2 {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn powi(&self, n: i32) -> Jet2 {
        let u = self.value;
        self.chain(
            u.powi(n),
            f64::from(n) * u.powi(n - 1),
            f64::from(n * (n - 1)) * u.powi(n - 2),
        )
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn scale(&self, c: f64) -> Jet2 {
        Jet2 {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        debug_assert_eq!(self.dim(), rhs.dim());
        Jet2 {
            value: self.value + rhs.value,
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(a, b)| a + b)
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&rhs.hess)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        debug_assert_eq!(self.dim(), rhs.dim());
        Jet2 {
            value: self.value - rhs.value,
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(a, b)| a - b)
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&rhs.hess)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        let n = self.dim();
        debug_assert_eq!(n, rhs.dim());
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            grad[i] = self.grad[i] * rhs.value + self.value * rhs.grad[i];
            for j in 0..n {
                hess[i * n + j] = self.hess[i * n + j] * rhs.value
                    + self.value * rhs.hess[i * n + j]
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i];
            }
        }
        Jet2 {
            value: self.value * rhs.value,
            grad,
            hess,
        }
    }
}

impl Div for &Jet2 {
    type Output = Jet2;
    // division is multiplication by the reciprocal jet
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Jet2) -> Jet2 {
        self * &rhs.recip()
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $m:ident),*) => {$(
        impl $trait for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 { $trait::$m(&self, &rhs) }
        }
        impl $trait<&Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &Jet2) -> Jet2 { $trait::$m(&self, rhs) }
        }
        impl $trait<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 { $trait::$m(self, &rhs) }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

//! Differential forms in combination storage.
//!
//! A k-form keeps one component per strictly increasing index combination;
//! arbitrary index tuples are recovered by antisymmetry. The wedge uses the
//! determinant (shuffle-sum) convention with no factorial prefactor, so
//! (dx0 ∧ dx1)(∂0, ∂1) = 1.

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{seed_point, ScalarJetFn};
use crate::jet::Jet2;
use std::sync::Arc;

/// Strictly increasing k-combinations of 0..dim, lexicographic.
pub fn combinations(dim: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > dim {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < dim - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn comb_rank(combos: &[Vec<usize>], key: &[usize]) -> usize {
    combos
        .binary_search_by(|c| c.as_slice().cmp(key))
        .expect("combination not found")
}

/// Sort indices, returning (sorted, permutation sign); None when repeated.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = indices.to_vec();
    let mut sign = 1.0;
    // insertion sort, counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// The value of a k-form at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct KFormValue {
    pub dim: usize,
    pub degree: usize,
    /// One entry per increasing combination, lexicographic order.
    pub comps: Vec<f64>,
}

impl KFormValue {
    pub fn zero(dim: usize, degree: usize) -> Self {
        let n = combinations(dim, degree).len();
        Self {
            dim,
            degree,
            comps: vec![0.0; n],
        }
    }

    /// Signed component for an arbitrary index tuple.
    pub fn comp(&self, indices: &[usize]) -> f64 {
        assert_eq!(indices.len(), self.degree);
        match sort_with_sign(indices) {
            None => 0.0,
            Some((sorted, sign)) => {
                let combos = combinations(self.dim, self.degree);
                sign * self.comps[comb_rank(&combos, &sorted)]
            }
        }
    }

    /// Evaluate on `degree` vectors (component slices).
    pub fn apply(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let combos = combinations(self.dim, self.degree);
        let k = self.degree;
        let mut acc = 0.0;
        for (ci, combo) in combos.iter().enumerate() {
            if self.comps[ci] == 0.0 {
                continue;
            }
            // det of the k x k minor picked out by the combination
            let m = nalgebra::DMatrix::from_fn(k, k, |a, b| vectors[b][combo[a]]);
            acc += self.comps[ci] * m.determinant();
        }
        acc
    }

    pub fn add(&self, other: &KFormValue) -> KFormValue {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        KFormValue {
            dim: self.dim,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> KFormValue {
        KFormValue {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|x| x * c).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Shuffle-sum wedge product.
    pub fn wedge(&self, other: &KFormValue) -> Result<KFormValue> {
        assert_eq!(self.dim, other.dim);
        let (k, l) = (self.degree, other.degree);
        if k + l > self.dim {
            return Err(GeomError::DegreeOverflow {
                degree: k + l,
                dim: self.dim,
            });
        }
        let combos_out = combinations(self.dim, k + l);
        let combos_a = combinations(self.dim, k);
        let combos_b = combinations(self.dim, l);
        let mut comps = vec![0.0; combos_out.len()];
        // all k-subsets of each output combination
        let splits = combinations(k + l, k);
        for (ci, combo) in combos_out.iter().enumerate() {
            let mut acc = 0.0;
            for split in &splits {
                let mut ia = Vec::with_capacity(k);
                let mut ib = Vec::with_capacity(l);
                let mut in_a = vec![false; k + l];
                for &s in split {
                    in_a[s] = true;
                }
                for (pos, &idx) in combo.iter().enumerate() {
                    if in_a[pos] {
                        ia.push(idx);
                    } else {
                        ib.push(idx);
                    }
                }
                // sign of the shuffle permutation (ia, ib) relative to combo
                let concat: Vec<usize> = ia.iter().chain(ib.iter()).cloned().collect();
                let (_, sign) = sort_with_sign(&concat).expect("distinct by construction");
                let a = self.comps[comb_rank(&combos_a, &ia)];
                let b = other.comps[comb_rank(&combos_b, &ib)];
                acc += sign * a * b;
            }
            comps[ci] = acc;
        }
        Ok(KFormValue {
            dim: self.dim,
            degree: k + l,
            comps,
        })
    }
}

/// A k-form field: one jet-valued component function per increasing
/// combination.
#[derive(Clone)]
pub struct KFormField {
    pub chart: Arc<Chart>,
    pub degree: usize,
    comps: Arc<Vec<ScalarJetFn>>,
}

impl KFormField {
    pub fn new(chart: Arc<Chart>, degree: usize, comps: Vec<ScalarJetFn>) -> Self {
        assert_eq!(comps.len(), combinations(chart.dim, degree).len());
        Self {
            chart,
            degree,
            comps: Arc::new(comps),
        }
    }

    /// 1-form from a (0,1) tensor field's components.
    pub fn from_covector(eta: &crate::field::TensorField) -> Self {
        assert_eq!(eta.variance, (0, 1));
        let comps = (0..eta.dim()).map(|i| eta.comp_fn(i)).collect();
        Self::new(eta.chart.clone(), 1, comps)
    }

    pub fn jet_eval(&self, p: &Point) -> Result<Vec<Jet2>> {
        self.chart.check(p)?;
        let seeds = seed_point(p);
        Ok(self.comps.iter().map(|f| f(&seeds)).collect())
    }

    pub fn value(&self, p: &Point) -> Result<KFormValue> {
        Ok(KFormValue {
            dim: self.chart.dim,
            degree: self.degree,
            comps: self.jet_eval(p)?.into_iter().map(|j| j.value).collect(),
        })
    }

    /// Exterior derivative at a point:
    /// (dw)_{i0..ik} = sum_j (-1)^j ∂_{ij} w_{i0..îj..ik}.
    pub fn d_value(&self, p: &Point) -> Result<KFormValue> {
        let dim = self.chart.dim;
        let k = self.degree;
        if k + 1 > dim {
            return Err(GeomError::DegreeOverflow { degree: k + 1, dim });
        }
        let jets = self.jet_eval(p)?;
        let combos_in = combinations(dim, k);
        let combos_out = combinations(dim, k + 1);
        let mut comps = vec![0.0; combos_out.len()];
        for (ci, combo) in combos_out.iter().enumerate() {
            let mut acc = 0.0;
            for (j, &omit) in combo.iter().enumerate() {
                let rest: Vec<usize> = combo
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| a != j)
                    .map(|(_, &b)| b)
                    .collect();
                let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sgn * jets[comb_rank(&combos_in, &rest)].d(omit);
            }
            comps[ci] = acc;
        }
        Ok(KFormValue {
            dim,
            degree: k + 1,
            comps,
        })
    }

    /// d(dw) at a point, computed from the Hessians of the components.
    /// Identically zero up to rounding; used as a consistency check.
    pub fn dd_value(&self, p: &Point) -> Result<KFormValue> {
        let dim = self.chart.dim;
        let k = self.degree;
        if k + 2 > dim {
            return Err(GeomError::DegreeOverflow { degree: k + 2, dim });
        }
        let jets = self.jet_eval(p)?;
        let combos_in = combinations(dim, k);
        let combos_mid = combinations(dim, k + 1);
        let combos_out = combinations(dim, k + 2);
        // ∂_m (dw)_J from second derivatives of w
        let d_of_dw = |m: usize, jmulti: &[usize]| -> f64 {
            let mut acc = 0.0;
            for (l, &omit) in jmulti.iter().enumerate() {
                let rest: Vec<usize> = jmulti
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| a != l)
                    .map(|(_, &b)| b)
                    .collect();
                let sgn = if l % 2 == 0 { 1.0 } else { -1.0 };
                acc += sgn * jets[comb_rank(&combos_in, &rest)].dd(m, omit);
            }
            acc
        };
        let mut comps = vec![0.0; combos_out.len()];
        for (ci, combo) in combos_out.iter().enumerate() {
            let mut acc = 0.0;
            for (j, &omit) in combo.iter().enumerate() {
                let rest: Vec<usize> = combo
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| a != j)
                    .map(|(_, &b)| b)
                    .collect();
                debug_assert!(combos_mid.binary_search(&rest).is_ok());
                let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sgn * d_of_dw(omit, &rest);
            }
            comps[ci] = acc;
        }
        Ok(KFormValue {
            dim,
            degree: k + 2,
            comps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::cst;
    use proptest::prelude::*;

    fn chart(dim: usize) -> Arc<Chart> {
        Chart::unrestricted("box", dim, 2.0)
    }

    /// dx^i as a constant 1-form field.
    fn dx(c: &Arc<Chart>, i: usize) -> KFormField {
        let comps = (0..c.dim)
            .map(|j| {
                let v = if j == i { 1.0 } else { 0.0 };
                Arc::new(move |x: &[Jet2]| cst(x, v)) as ScalarJetFn
            })
            .collect();
        KFormField::new(c.clone(), 1, comps)
    }

    #[test]
    fn wedge_convention_anchor() {
        // (dx0 ∧ dx1)(∂0, ∂1) = 1
        let c = chart(3);
        let p = Point::new(vec![0.0; 3]);
        let a = dx(&c, 0).value(&p).unwrap();
        let b = dx(&c, 1).value(&p).unwrap();
        let w = a.wedge(&b).unwrap();
        let e0 = [1.0, 0.0, 0.0];
        let e1 = [0.0, 1.0, 0.0];
        assert!((w.apply(&[&e0, &e1]) - 1.0).abs() < 1e-15);
        assert!((w.apply(&[&e1, &e0]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn d_of_x0_dx1() {
        // d(x0 dx1) = dx0 ∧ dx1, i.e. component (0,1) = 1
        let c = chart(3);
        let comps: Vec<ScalarJetFn> = vec![
            Arc::new(|x: &[Jet2]| cst(x, 0.0)),
            Arc::new(|x: &[Jet2]| x[0].clone()),
            Arc::new(|x: &[Jet2]| cst(x, 0.0)),
        ];
        let w = KFormField::new(c, 1, comps);
        let d = w.d_value(&Point::new(vec![0.7, -0.2, 1.1])).unwrap();
        assert!((d.comp(&[0, 1]) - 1.0).abs() < 1e-15);
        assert!((d.comp(&[1, 0]) + 1.0).abs() < 1e-15);
        assert!(d.comp(&[0, 2]).abs() < 1e-15);
        assert!(d.comp(&[1, 1]).abs() < 1e-15);
    }

    #[test]
    fn degree_overflow_rejected() {
        let c = chart(2);
        let p = Point::new(vec![0.0, 0.0]);
        let a = dx(&c, 0).value(&p).unwrap();
        let b = dx(&c, 1).value(&p).unwrap();
        let top = a.wedge(&b).unwrap();
        assert!(matches!(
            top.wedge(&a),
            Err(GeomError::DegreeOverflow { .. })
        ));
    }

    /// Random polynomial 1- or 2-form on a 4-chart for property tests.
    fn poly_form(c: &Arc<Chart>, degree: usize, coeffs: Vec<f64>) -> KFormField {
        let n = combinations(c.dim, degree).len();
        let comps = (0..n)
            .map(|k| {
                let a = coeffs[(3 * k) % coeffs.len()];
                let b = coeffs[(3 * k + 1) % coeffs.len()];
                let cc = coeffs[(3 * k + 2) % coeffs.len()];
                Arc::new(move |x: &[Jet2]| {
                    x[0].scale(a) + (&x[1] * &x[2]).scale(b) + x[3].powi(2).scale(cc)
                }) as ScalarJetFn
            })
            .collect();
        KFormField::new(c.clone(), degree, comps)
    }

    proptest! {
        #[test]
        fn d_squared_is_zero(
            coeffs in proptest::collection::vec(-2.0..2.0f64, 6),
            deg in 1usize..3,
            px in -1.5..1.5f64, py in -1.5..1.5f64,
        ) {
            let c = chart(5);
            let w = poly_form(&c, deg, coeffs);
            let p = Point::new(vec![px, py, 0.3, -0.8, 0.1]);
            let dd = w.dd_value(&p).unwrap();
            prop_assert!(dd.max_abs() < 1e-12);
        }

        #[test]
        fn wedge_graded_commutative(
            ca in proptest::collection::vec(-2.0..2.0f64, 4),
            cb in proptest::collection::vec(-2.0..2.0f64, 4),
            ka in 1usize..3, kb in 1usize..3,
        ) {
            let c = chart(5);
            let p = Point::new(vec![0.4, -0.3, 1.2, 0.8, -0.5]);
            let a = poly_form(&c, ka, ca).value(&p).unwrap();
            let b = poly_form(&c, kb, cb).value(&p).unwrap();
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let sign = if (ka * kb) % 2 == 0 { 1.0 } else { -1.0 };
            let resid = ab.add(&ba.scale(-sign)).max_abs();
            prop_assert!(resid < 1e-12);
        }

        #[test]
        fn wedge_bilinear(
            ca in proptest::collection::vec(-2.0..2.0f64, 4),
            cb in proptest::collection::vec(-2.0..2.0f64, 4),
            s in -3.0..3.0f64,
        ) {
            let c = chart(5);
            let p = Point::new(vec![0.4, -0.3, 1.2, 0.8, -0.5]);
            let a = poly_form(&c, 1, ca).value(&p).unwrap();
            let b = poly_form(&c, 2, cb).value(&p).unwrap();
            let lhs = a.scale(s).wedge(&b).unwrap();
            let rhs = a.wedge(&b).unwrap().scale(s);
            prop_assert!(lhs.add(&rhs.scale(-1.0)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn shuffle_sum_pair_count() {
        // For 2-forms a, b: (a∧b)(v1..v4) has the 6-shuffle expansion; on
        // a = b it reduces to 2(a12 a34 - a13 a24 + a14 a23).
        let c = chart(4);
        let p = Point::new(vec![0.0; 4]);
        let comps: Vec<ScalarJetFn> = (0..6)
            .map(|k| {
                let v = (k as f64) - 2.0;
                Arc::new(move |x: &[Jet2]| cst(x, v)) as ScalarJetFn
            })
            .collect();
        let a = KFormField::new(c, 2, comps).value(&p).unwrap();
        let w = a.wedge(&a).unwrap();
        // combos of dim 4 deg 2, lexicographic: 01,02,03,12,13,23
        let expect =
            2.0 * (a.comps[0] * a.comps[5] - a.comps[1] * a.comps[4] + a.comps[2] * a.comps[3]);
        assert!((w.comps[0] - expect).abs() < 1e-13);
    }
}

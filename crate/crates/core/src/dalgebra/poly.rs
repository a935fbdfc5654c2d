use std::collections::BTreeMap;

use crate::linalg::Field;

/// Polynomial in formal local coordinates `x_1..x_d`, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

/// A section of the trivial bundle with fibre `V`: one polynomial per basis
/// vector `e_1..e_v`.
pub type Section<F> = Vec<MPoly<F>>;

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// Panics if `exps.len() != nvars`.
    pub fn monomial(nvars: usize, exps: Vec<u32>, c: F) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector has wrong length");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, F::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &F)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Field::modulus).fold(0.0, f64::max)
    }

    fn insert_add(&mut self, exps: Vec<u32>, c: F) {
        match self.terms.remove(&exps) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exps, sum);
                }
            }
            None if !c.is_zero() => {
                self.terms.insert(exps, c);
            }
            None => {}
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert_add(e2, c.clone() * F::from_i64(i64::from(e[i])));
        }
        out
    }

    /// Derivative along the constant vector field `sum_i a_i d/dx_i`.
    pub fn directional(&self, a: &[F]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                out = out.add(&self.partial(i).scale(ai));
            }
        }
        out
    }
}

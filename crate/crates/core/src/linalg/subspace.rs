use super::matrix::{inner, vec_norm};
use super::{Field, Matrix, ToleranceFrame};

/// A linear subspace of `F^ambient`.
///
/// Exact subspaces keep a reduced row echelon basis with pivot columns, so
/// coordinates are read off the pivots and the quotient is modelled on the
/// non-pivot coordinates. Float subspaces keep an orthonormal basis and model
/// the quotient by the orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Option<Vec<usize>>,
}

impl<F: Field> Subspace<F> {
    pub(crate) fn from_echelon(ambient: usize, basis: Vec<Vec<F>>, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.len(), pivots.len());
        Self {
            ambient,
            basis,
            pivots: Some(pivots),
        }
    }

    pub(crate) fn from_orthonormal(ambient: usize, basis: Vec<Vec<F>>) -> Self {
        Self {
            ambient,
            basis,
            pivots: None,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: F::MODE.is_exact().then(Vec::new),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = Matrix::<F>::identity(ambient).row_vecs();
        Self {
            ambient,
            basis,
            pivots: F::MODE.is_exact().then(|| (0..ambient).collect()),
        }
    }

    /// Span of arbitrary vectors; `floor` is the reference scale for float rank.
    pub fn span(vectors: &[Vec<F>], ambient: usize, floor: f64, tol: &ToleranceFrame) -> Self {
        F::span(vectors, ambient, floor, tol)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// `ambient x dim` matrix whose columns are the basis.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Coordinates of `x` in the basis; meaningful only for `x` in the subspace.
    pub fn coords(&self, x: &[F]) -> Vec<F> {
        match &self.pivots {
            Some(p) => p.iter().map(|&i| x[i].clone()).collect(),
            None => self.basis.iter().map(|b| inner(b, x)).collect(),
        }
    }

    /// `x` minus its component in the subspace.
    pub fn residual(&self, x: &[F]) -> Vec<F> {
        let coords = self.coords(x);
        let mut r = x.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri = ri.clone() - c.clone() * bi.clone();
            }
        }
        r
    }

    pub fn contains(&self, x: &[F], tol: &ToleranceFrame) -> bool {
        let r = self.residual(x);
        if F::MODE.is_exact() {
            r.iter().all(Field::is_zero)
        } else {
            vec_norm(&r) <= tol.eps_rank * vec_norm(x)
        }
    }

    /// A basis of a complement: standard vectors off the pivots (exact) or an
    /// orthonormal basis of the orthogonal complement (float).
    pub fn complement_basis(&self, tol: &ToleranceFrame) -> Vec<Vec<F>> {
        let n = self.ambient;
        match &self.pivots {
            Some(p) => (0..n)
                .filter(|i| !p.contains(i))
                .map(|i| {
                    let mut e = vec![F::zero(); n];
                    e[i] = F::one();
                    e
                })
                .collect(),
            None => {
                if self.basis.is_empty() {
                    return Matrix::<F>::identity(n).row_vecs();
                }
                let rows: Vec<Vec<F>> = self
                    .basis
                    .iter()
                    .map(|b| b.iter().map(Field::conj).collect())
                    .collect();
                F::kernel_with_floor(&Matrix::from_rows(&rows), 1.0, tol)
            }
        }
    }

    /// Coordinates of the class of `x` in `F^n / self`, relative to
    /// [`Self::complement_basis`].
    pub fn quotient_coords(&self, x: &[F], tol: &ToleranceFrame) -> Vec<F> {
        match &self.pivots {
            Some(p) => {
                let r = self.residual(x);
                (0..self.ambient)
                    .filter(|i| !p.contains(i))
                    .map(|i| r[i].clone())
                    .collect()
            }
            None => self
                .complement_basis(tol)
                .iter()
                .map(|c| inner(c, x))
                .collect(),
        }
    }

    /// Matrix of `m` restricted to this (assumed invariant) subspace.
    pub fn restrict(&self, m: &Matrix<F>) -> Matrix<F> {
        let cols: Vec<Vec<F>> = self.basis.iter().map(|b| self.coords(&m.mul_vec(b))).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Matrix of the map induced by `m` on the quotient by this (assumed
    /// invariant) subspace.
    pub fn quotient_map(&self, m: &Matrix<F>, tol: &ToleranceFrame) -> Matrix<F> {
        let comp = self.complement_basis(tol);
        let cols: Vec<Vec<F>> = comp
            .iter()
            .map(|c| self.quotient_coords(&m.mul_vec(c), tol))
            .collect();
        Matrix::from_columns(comp.len(), &cols)
    }

    /// Adds `x` to the subspace unless it already lies in it.
    ///
    /// Returns the vector to propagate when closing under linear maps: `x`
    /// itself in exact mode, the new orthonormal direction in float mode.
    /// Float independence means the residual exceeds `eps_rank * max(floor, |x|)`.
    pub fn try_extend(&mut self, x: &[F], floor: f64, tol: &ToleranceFrame) -> Option<Vec<F>> {
        match &mut self.pivots {
            Some(pivots) => {
                let r = {
                    let coords: Vec<F> = pivots.iter().map(|&i| x[i].clone()).collect();
                    let mut r = x.to_vec();
                    for (c, b) in coords.iter().zip(&self.basis) {
                        if !c.is_zero() {
                            for (ri, bi) in r.iter_mut().zip(b) {
                                *ri = ri.clone() - c.clone() * bi.clone();
                            }
                        }
                    }
                    r
                };
                let p = r.iter().position(|c| !c.is_zero())?;
                let inv = F::one() / r[p].clone();
                let row: Vec<F> = r.into_iter().map(|c| c * inv.clone()).collect();
                for b in &mut self.basis {
                    let f = b[p].clone();
                    if !f.is_zero() {
                        for (bi, ri) in b.iter_mut().zip(&row) {
                            *bi = bi.clone() - f.clone() * ri.clone();
                        }
                    }
                }
                let at = pivots.partition_point(|&q| q < p);
                pivots.insert(at, p);
                self.basis.insert(at, row);
                Some(x.to_vec())
            }
            None => {
                let mut r = self.residual(x);
                r = self.residual(&r);
                let norm = vec_norm(&r);
                if norm <= tol.eps_rank * floor.max(vec_norm(x)) || norm == 0.0 {
                    return None;
                }
                let inv = F::one() / F::from_c64(super::C64::new(norm, 0.0));
                let unit: Vec<F> = r.into_iter().map(|c| c * inv.clone()).collect();
                self.basis.push(unit.clone());
                Some(unit)
            }
        }
    }

    /// Whether `m` maps the subspace into itself.
    pub fn is_invariant(&self, m: &Matrix<F>, tol: &ToleranceFrame) -> bool {
        let scale = m.frobenius().max(1.0);
        self.basis.iter().all(|b| {
            let image = m.mul_vec(b);
            if F::MODE.is_exact() {
                self.contains(&image, tol)
            } else {
                vec_norm(&self.residual(&image)) <= tol.eps_eq * scale
            }
        })
    }
}

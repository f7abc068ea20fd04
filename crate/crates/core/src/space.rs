//! Products of type-I Cartan factors and their elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// One irreducible type-I factor: the space of `rows x cols` complex matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub rows: usize,
    pub cols: usize,
}

impl Factor {
    pub fn rank(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn dim(&self) -> usize {
        self.rows * self.cols
    }

    pub fn genus(&self) -> usize {
        self.rows + self.cols
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{{{},{}}}", self.rows, self.cols)
    }
}

/// A finite product of type-I factors, carrying the `l-infinity` sum of the
/// factor triples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleSpace {
    factors: Vec<Factor>,
}

impl TripleSpace {
    pub fn new(factors: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(rows, cols)| Factor { rows, cols })
            .collect();
        if factors.is_empty() {
            return Err(Error::InvalidSpace("at least one factor is required".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.rows == 0 || f.cols == 0) {
            return Err(Error::InvalidSpace(format!("factor {f} has a zero dimension")));
        }
        Ok(Self { factors })
    }

    /// The unit disc, `M_{1,1}`.
    pub fn disc() -> Self {
        Self::matrices(1, 1)
    }

    /// The bidisc, `M_{1,1} x M_{1,1}`.
    pub fn bidisc() -> Self {
        Self {
            factors: vec![Factor { rows: 1, cols: 1 }; 2],
        }
    }

    pub fn matrices(rows: usize, cols: usize) -> Self {
        Self::new([(rows, cols)]).expect("matrix factor with zero dimension")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(Factor::rank).sum()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    /// Offset of each factor's block in the vectorised space.
    pub fn offsets(&self) -> Vec<usize> {
        self.factors
            .iter()
            .scan(0, |acc, f| {
                let start = *acc;
                *acc += f.dim();
                Some(start)
            })
            .collect()
    }

    /// Maps a vector index back to `(factor, row, col)`.
    pub fn locate(&self, mut index: usize) -> (usize, usize, usize) {
        for (k, f) in self.factors.iter().enumerate() {
            if index < f.dim() {
                return (k, index / f.cols, index % f.cols);
            }
            index -= f.dim();
        }
        panic!("index out of range for {self}");
    }

    pub(crate) fn ensure_same(&self, other: &TripleSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::shape(self, other))
        }
    }
}

impl fmt::Display for TripleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// An element of a [`TripleSpace`]: one complex matrix per factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    space: TripleSpace,
    blocks: Vec<CMatrix>,
}

impl Element {
    pub fn new(space: TripleSpace, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != space.num_factors() {
            return Err(Error::shape(
                format!("{} blocks", space.num_factors()),
                format!("{} blocks", blocks.len()),
            ));
        }
        for (f, b) in space.factors().iter().zip(&blocks) {
            if b.shape() != (f.rows, f.cols) {
                return Err(Error::shape(
                    format!("{}x{}", f.rows, f.cols),
                    format!("{}x{}", b.nrows(), b.ncols()),
                ));
            }
        }
        Ok(Self { space, blocks })
    }

    pub fn zeros(space: &TripleSpace) -> Self {
        let blocks = space
            .factors()
            .iter()
            .map(|f| CMatrix::zeros(f.rows, f.cols))
            .collect();
        Self {
            space: space.clone(),
            blocks,
        }
    }

    /// Element of a single-factor space from its matrix.
    pub fn from_matrix(matrix: CMatrix) -> Self {
        let space = TripleSpace::matrices(matrix.nrows(), matrix.ncols());
        Self {
            space,
            blocks: vec![matrix],
        }
    }

    /// Element of a polydisc from one complex coordinate per factor.
    pub fn from_scalars(values: &[C64]) -> Self {
        let space = TripleSpace::new(values.iter().map(|_| (1, 1))).expect("empty polydisc");
        let blocks = values.iter().map(|v| CMatrix::from_element(1, 1, *v)).collect();
        Self { space, blocks }
    }

    /// Matrix unit `E_{ij}` placed in factor `factor`, zero elsewhere.
    pub fn matrix_unit(space: &TripleSpace, factor: usize, i: usize, j: usize) -> Self {
        let mut e = Self::zeros(space);
        e.blocks[factor][(i, j)] = ONE;
        e
    }

    /// Element supported in a single factor.
    pub fn in_factor(space: &TripleSpace, factor: usize, block: CMatrix) -> Result<Self> {
        let mut blocks: Vec<CMatrix> = space
            .factors()
            .iter()
            .map(|f| CMatrix::zeros(f.rows, f.cols))
            .collect();
        if factor >= blocks.len() {
            return Err(Error::shape(format!("factor < {}", blocks.len()), factor));
        }
        blocks[factor] = block;
        Self::new(space.clone(), blocks)
    }

    pub fn space(&self) -> &TripleSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn map_blocks(&self, mut f: impl FnMut(usize, &CMatrix) -> CMatrix) -> Self {
        let blocks = self.blocks.iter().enumerate().map(|(k, b)| f(k, b)).collect();
        Self {
            space: self.space.clone(),
            blocks,
        }
    }

    /// Row-major concatenation of all blocks.
    pub fn to_vector(&self) -> CVector {
        let mut v = Vec::with_capacity(self.space.dim());
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    v.push(b[(i, j)]);
                }
            }
        }
        CVector::from_vec(v)
    }

    pub fn from_vector(space: &TripleSpace, v: &CVector) -> Result<Self> {
        if v.len() != space.dim() {
            return Err(Error::shape(space.dim(), v.len()));
        }
        let mut offset = 0;
        let blocks = space
            .factors()
            .iter()
            .map(|f| {
                let b = CMatrix::from_fn(f.rows, f.cols, |i, j| v[offset + i * f.cols + j]);
                offset += f.dim();
                b
            })
            .collect();
        Ok(Self {
            space: space.clone(),
            blocks,
        })
    }

    /// The standard basis of matrix units, in vectorisation order.
    pub fn basis(space: &TripleSpace) -> Vec<Element> {
        (0..space.dim())
            .map(|idx| {
                let (k, i, j) = space.locate(idx);
                Self::matrix_unit(space, k, i, j)
            })
            .collect()
    }

    /// Spectral norm: the largest singular value over all factors.
    pub fn spectral_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(crate::linalg::op_norm)
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_in_ball(&self) -> bool {
        self.spectral_norm() < 1.0
    }

    pub(crate) fn ensure_in_ball(&self) -> Result<()> {
        let norm = self.spectral_norm();
        if norm < 1.0 {
            Ok(())
        } else {
            Err(Error::OutsideDomain { norm })
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map_blocks(|_, b| b.map(|z| z.conj()))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_blocks(|_, b| b * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.map_blocks(|_, b| b.map(|z| z * c))
    }

    /// Indices of the factors in which this element is non-zero.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.norm() > tol)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.space.ensure_same(&other.space)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.space.ensure_same(&other.space)?;
        Ok(self - other)
    }

    pub(crate) fn zip_blocks(
        &self,
        other: &Element,
        mut f: impl FnMut(&CMatrix, &CMatrix) -> CMatrix,
    ) -> Element {
        assert_eq!(self.space, other.space, "element spaces differ");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Element {
            space: self.space.clone(),
            blocks,
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.zip_blocks(rhs, |a, b| a + b)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.zip_blocks(rhs, |a, b| a - b)
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_blocks(|_, b| -b)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        self.scale_re(rhs)
    }
}

impl Mul<f64> for Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        self.scale_re(rhs)
    }
}

impl Mul<C64> for &Element {
    type Output = Element;
    fn mul(self, rhs: C64) -> Element {
        self.scale(rhs)
    }
}

impl Mul<C64> for Element {
    type Output = Element;
    fn mul(self, rhs: C64) -> Element {
        self.scale(rhs)
    }
}

//! The finite Hecke algebra side: parameters, the tensor module `U^{⊗n}`
//! with Jimbo's R-matrix action, the trivial module, and the operators
//! `A^{(c)}` and `S` used to read off transition rates.
//!
//! All powers of `q^{1/2}` are integer powers of a stored square root `s`
//! with `q = s^2`, so exact mode never needs irrational numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{LatticeError, WeylWord};
use crate::scalar::{q_integer, Complex64, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("tensor slot {slot} out of range for length {len}")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("q must differ from 1")]
    QIsOne,
    #[error("tuple {0} is not sorted ascending")]
    Unsorted(ColorTuple),
    #[error("tuple length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("color {color} outside 1..={n_colors}")]
    ColorOutOfRange { color: u8, n_colors: u8 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `(s, q = s^2, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSpec<S> {
    pub s: S,
    pub q: S,
    pub alpha: S,
}

impl<S: Scalar> ScalarSpec<S> {
    pub fn new(s: S, alpha: S) -> Self {
        let q = s.clone() * s.clone();
        ScalarSpec { s, q, alpha }
    }

    /// The stochastic specialization `alpha = -(1 - q)`.
    pub fn q_boson(s: S) -> Self {
        let q = s.clone() * s.clone();
        let alpha = q.clone() - S::one();
        ScalarSpec { s, q, alpha }
    }

    pub fn one_minus_q(&self) -> S {
        S::one() - self.q.clone()
    }

    /// `q^{n/2}`.
    pub fn half_power(&self, n: i64) -> S {
        self.s.powi(n)
    }
}

impl ScalarSpec<Rational> {
    pub fn exact(s: Rational, alpha: Rational) -> Self {
        Self::new(s, alpha)
    }
}

impl ScalarSpec<Complex64> {
    pub fn complex(q: f64, alpha: f64) -> Self {
        Self::new(Complex64::new(q.sqrt(), 0.0), Complex64::new(alpha, 0.0))
    }
}

impl ScalarSpec<f64> {
    pub fn float(q: f64, alpha: f64) -> Self {
        Self::new(q.sqrt(), alpha)
    }
}

/// A tuple of colors `(mu_1, .., mu_n)`, each in `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorTuple(Vec<u8>);

impl ColorTuple {
    pub fn new(colors: Vec<u8>) -> Self {
        ColorTuple(colors)
    }

    pub fn colors(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ell(mu)`: number of pairs `i < j` with `mu_i > mu_j`.
    pub fn inversions(&self) -> usize {
        let c = &self.0;
        (0..c.len())
            .map(|i| c[i + 1..].iter().filter(|&&b| c[i] > b).count())
            .sum()
    }

    /// Swap of slots `i` and `i+1` (1-based).
    pub fn swapped(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c.swap(i - 1, i);
        ColorTuple(c)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Per-color multiplicities `(m_1, .., m_N)`.
    pub fn counts(&self, n_colors: usize) -> Vec<u32> {
        let mut m = vec![0u32; n_colors];
        for &c in &self.0 {
            m[c as usize - 1] += 1;
        }
        m
    }

    /// All of `{1..N}^n` in lexicographic order.
    pub fn all(n_colors: u8, n: usize) -> Vec<ColorTuple> {
        let mut out = vec![Vec::with_capacity(n)];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (1..=n_colors).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(ColorTuple).collect()
    }
}

impl fmt::Display for ColorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, c) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A sparse vector of `U^{⊗n}` in the basis `u_mu`. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector<S> {
    len: usize,
    terms: BTreeMap<ColorTuple, S>,
}

impl<S: Scalar> ModuleVector<S> {
    pub fn zero(len: usize) -> Self {
        ModuleVector {
            len,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(mu: ColorTuple) -> Self {
        Self::term(mu, S::one())
    }

    pub fn term(mu: ColorTuple, coeff: S) -> Self {
        let mut v = Self::zero(mu.len());
        v.add_term(mu, coeff);
        v
    }

    pub fn from_terms(len: usize, terms: impl IntoIterator<Item = (ColorTuple, S)>) -> Self {
        let mut v = Self::zero(len);
        for (mu, c) in terms {
            v.add_term(mu, c);
        }
        v
    }

    /// Tensor length `n`.
    pub fn tuple_len(&self) -> usize {
        self.len
    }

    pub fn coeff(&self, mu: &ColorTuple) -> S {
        self.terms.get(mu).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ColorTuple, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * u_mu`, pruning a resulting zero.
    pub fn add_term(&mut self, mu: ColorTuple, coeff: S) {
        assert_eq!(mu.len(), self.len, "inhomogeneous tuple length");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&mu) {
            Some(c) => {
                let sum = c.clone() + coeff;
                if sum.is_zero() {
                    self.terms.remove(&mu);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(mu, coeff);
            }
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &S, other: &ModuleVector<S>) {
        for (mu, v) in &other.terms {
            self.add_term(mu.clone(), c.clone() * v.clone());
        }
    }

    pub fn add(&self, other: &ModuleVector<S>) -> ModuleVector<S> {
        let mut r = self.clone();
        r.axpy(&S::one(), other);
        r
    }

    pub fn sub(&self, other: &ModuleVector<S>) -> ModuleVector<S> {
        let mut r = self.clone();
        r.axpy(&-S::one(), other);
        r
    }

    pub fn scale(&self, c: &S) -> ModuleVector<S> {
        let mut r = Self::zero(self.len);
        r.axpy(c, self);
        r
    }

    /// Max-abs norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// Equality up to `tol` in max-abs norm; exact equality in exact fields.
    pub fn approx_eq(&self, other: &ModuleVector<S>, tol: f64) -> bool {
        if S::EXACT {
            self == other
        } else {
            self.sub(other).norm() <= tol
        }
    }
}

impl<S: Scalar> fmt::Display for ModuleVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (mu, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})u{mu}")?;
        }
        Ok(())
    }
}

fn check_slot(i: usize, len: usize) -> Result<(), AlgebraError> {
    if i == 0 || i >= len {
        Err(AlgebraError::SlotOutOfRange { slot: i, len })
    } else {
        Ok(())
    }
}

/// Applies a linear map defined on basis tuples by `image`.
fn apply_on_basis<S: Scalar>(
    v: &ModuleVector<S>,
    mut image: impl FnMut(&ColorTuple, &mut ModuleVector<S>, &S),
) -> ModuleVector<S> {
    let mut out = ModuleVector::zero(v.len);
    for (mu, c) in &v.terms {
        image(mu, &mut out, c);
    }
    out
}

/// `R` on slots `(i, i+1)` of `U^{⊗n}`.
pub fn r_apply<S: Scalar>(
    spec: &ScalarSpec<S>,
    i: usize,
    v: &ModuleVector<S>,
) -> Result<ModuleVector<S>, AlgebraError> {
    check_slot(i, v.len)?;
    Ok(r_unchecked(spec, i, v))
}

fn r_unchecked<S: Scalar>(spec: &ScalarSpec<S>, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
    let one_minus_q = spec.one_minus_q();
    apply_on_basis(v, |mu, out, c| {
        let (a, b) = (mu.0[i - 1], mu.0[i]);
        if a == b {
            out.add_term(mu.clone(), c.clone());
        } else {
            if a < b {
                out.add_term(mu.clone(), one_minus_q.clone() * c.clone());
            }
            out.add_term(mu.swapped(i), spec.s.clone() * c.clone());
        }
    })
}

/// `R^{-1}` on slots `(i, i+1)`.
pub fn r_inv_apply<S: Scalar>(
    spec: &ScalarSpec<S>,
    i: usize,
    v: &ModuleVector<S>,
) -> Result<ModuleVector<S>, AlgebraError> {
    check_slot(i, v.len)?;
    if spec.q.is_zero() {
        return Err(AlgebraError::ZeroQ);
    }
    Ok(r_inv_unchecked(spec, i, v))
}

fn r_inv_unchecked<S: Scalar>(
    spec: &ScalarSpec<S>,
    i: usize,
    v: &ModuleVector<S>,
) -> ModuleVector<S> {
    let s_inv = S::one() / spec.s.clone();
    let diag = -(spec.one_minus_q() / spec.q.clone());
    apply_on_basis(v, |mu, out, c| {
        let (a, b) = (mu.0[i - 1], mu.0[i]);
        if a == b {
            out.add_term(mu.clone(), c.clone());
        } else {
            if a > b {
                out.add_term(mu.clone(), diag.clone() * c.clone());
            }
            out.add_term(mu.swapped(i), s_inv.clone() * c.clone());
        }
    })
}

/// `S` on slots `(i, i+1)`: the transpose of `R^{-1}` under the pairing
/// `(u_mu, u_nu) = delta_{mu nu}`.
pub fn s_op_apply<S: Scalar>(
    spec: &ScalarSpec<S>,
    i: usize,
    v: &ModuleVector<S>,
) -> Result<ModuleVector<S>, AlgebraError> {
    check_slot(i, v.len)?;
    if spec.q.is_zero() {
        return Err(AlgebraError::ZeroQ);
    }
    let s_inv = S::one() / spec.s.clone();
    let diag = S::one() - S::one() / spec.q.clone();
    Ok(apply_on_basis(v, |mu, out, c| {
        let (a, b) = (mu.0[i - 1], mu.0[i]);
        if a == b {
            out.add_term(mu.clone(), c.clone());
        } else {
            if a > b {
                out.add_term(mu.clone(), diag.clone() * c.clone());
            }
            out.add_term(mu.swapped(i), s_inv.clone() * c.clone());
        }
    }))
}

/// `T_w v` (or `T_w^{-1} v`) for `w = s_{i_1}..s_{i_l}` acting through `R`.
/// The word is assumed reduced.
pub fn t_word_apply<S: Scalar>(
    spec: &ScalarSpec<S>,
    word: &WeylWord,
    v: &ModuleVector<S>,
    inverse: bool,
) -> Result<ModuleVector<S>, AlgebraError> {
    let mut out = v.clone();
    if inverse {
        for &i in word.letters() {
            out = r_inv_apply(spec, i, &out)?;
        }
    } else {
        for &i in word.letters().iter().rev() {
            out = r_apply(spec, i, &out)?;
        }
    }
    Ok(out)
}

/// `A^{(c)} = sum_{l=1}^{c} q^{c-l} T_l^{-1} .. T_{c-1}^{-1}` acting on the
/// first `c` slots.
pub fn a_op_apply<S: Scalar>(
    spec: &ScalarSpec<S>,
    c: usize,
    v: &ModuleVector<S>,
) -> Result<ModuleVector<S>, AlgebraError> {
    if c == 0 || c > v.len {
        return Err(AlgebraError::SlotOutOfRange {
            slot: c,
            len: v.len,
        });
    }
    let mut acc = v.clone();
    let mut run = v.clone();
    let mut qpow = S::one();
    for l in (1..c).rev() {
        run = r_inv_apply(spec, l, &run)?;
        qpow = qpow * spec.q.clone();
        acc.axpy(&qpow, &run);
    }
    Ok(acc)
}

/// Closed form of the coefficient of `u_nu` in `A^{(c)} u_eta` for sorted `nu`.
///
/// Nonzero only when `eta` is `nu` with one copy of some color `b` moved to
/// the end; the value is then `[m_b]_q q^{(m_{b+1} + .. + m_N)/2}`.
pub fn a_matrix_element<S: Scalar>(
    spec: &ScalarSpec<S>,
    eta: &ColorTuple,
    nu: &ColorTuple,
    c: usize,
) -> Result<S, AlgebraError> {
    if nu.len() != c {
        return Err(AlgebraError::LengthMismatch {
            expected: c,
            got: nu.len(),
        });
    }
    if eta.len() != c {
        return Err(AlgebraError::LengthMismatch {
            expected: c,
            got: eta.len(),
        });
    }
    if !nu.is_sorted() {
        return Err(AlgebraError::Unsorted(nu.clone()));
    }
    let b = match eta.0.last() {
        Some(&b) => b,
        None => return Ok(S::zero()),
    };
    let Some(pos) = nu.0.iter().position(|&x| x == b) else {
        return Ok(S::zero());
    };
    let mut candidate = nu.0.clone();
    candidate.remove(pos);
    candidate.push(b);
    if candidate != eta.0 {
        return Ok(S::zero());
    }
    let m_b = nu.0.iter().filter(|&&x| x == b).count();
    let above = nu.0.iter().filter(|&&x| x > b).count();
    Ok(q_integer(m_b, &spec.q) * spec.half_power(above as i64))
}

/// The one-dimensional module on which every `T_i` acts as `1`.
pub fn trivial_module_apply<S: Scalar>(_i: usize, v: S) -> S {
    v
}

/// A left module over the finite Hecke algebra `H_k`.
pub trait HeckeModule<S: Scalar>: Send + Sync + fmt::Debug {
    /// Number of tensor slots of the vectors (`k`).
    fn rank(&self) -> usize;

    fn basis(&self) -> Vec<ColorTuple>;

    /// `T_i . v` for `1 <= i < k`; panics on an out-of-range index.
    fn t(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S>;

    fn t_inv(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S>;
}

/// `U^{⊗k}` with `T_i` acting as `R_i`.
#[derive(Clone, Debug)]
pub struct JimboModule<S> {
    spec: ScalarSpec<S>,
    n_colors: u8,
    k: usize,
}

impl<S: Scalar> JimboModule<S> {
    pub fn new(spec: ScalarSpec<S>, n_colors: u8, k: usize) -> Result<Self, AlgebraError> {
        if spec.q.is_zero() {
            return Err(AlgebraError::ZeroQ);
        }
        Ok(JimboModule { spec, n_colors, k })
    }

    pub fn n_colors(&self) -> u8 {
        self.n_colors
    }
}

impl<S: Scalar> HeckeModule<S> for JimboModule<S> {
    fn rank(&self) -> usize {
        self.k
    }

    fn basis(&self) -> Vec<ColorTuple> {
        ColorTuple::all(self.n_colors, self.k)
    }

    fn t(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
        assert!(i >= 1 && i < self.k, "T_{i} out of range");
        r_unchecked(&self.spec, i, v)
    }

    fn t_inv(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
        assert!(i >= 1 && i < self.k, "T_{i} out of range");
        r_inv_unchecked(&self.spec, i, v)
    }
}

/// The trivial module: one basis vector (keyed by the all-ones tuple, so it
/// coincides with `U^{⊗k}` for `N = 1`), every `T_i` acting as the identity.
#[derive(Clone, Debug)]
pub struct TrivialModule {
    k: usize,
}

impl TrivialModule {
    pub fn new(k: usize) -> Self {
        TrivialModule { k }
    }

    pub fn unit(k: usize) -> ColorTuple {
        ColorTuple(vec![1; k])
    }

    pub fn vector<S: Scalar>(&self, c: S) -> ModuleVector<S> {
        ModuleVector::term(Self::unit(self.k), c)
    }
}

impl<S: Scalar> HeckeModule<S> for TrivialModule {
    fn rank(&self) -> usize {
        self.k
    }

    fn basis(&self) -> Vec<ColorTuple> {
        vec![Self::unit(self.k)]
    }

    fn t(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
        assert!(i >= 1 && i < self.k, "T_{i} out of range");
        v.clone()
    }

    fn t_inv(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
        assert!(i >= 1 && i < self.k, "T_{i} out of range");
        v.clone()
    }
}

/// A Hecke module together with the parameters `(q, alpha)`; the context
/// shared by the lattice-function layers.
#[derive(Clone, Debug)]
pub struct Hecke<S> {
    pub spec: ScalarSpec<S>,
    module: Arc<dyn HeckeModule<S>>,
}

impl<S: Scalar> Hecke<S> {
    pub fn new(spec: ScalarSpec<S>, module: Arc<dyn HeckeModule<S>>) -> Result<Self, AlgebraError> {
        if module.rank() < 2 {
            return Err(LatticeError::TooFewParticles {
                min: 2,
                got: module.rank(),
            }
            .into());
        }
        Ok(Hecke { spec, module })
    }

    /// `U^{⊗k}` with `N` colors.
    pub fn jimbo(spec: ScalarSpec<S>, n_colors: u8, k: usize) -> Result<Self, AlgebraError> {
        let m = JimboModule::new(spec.clone(), n_colors, k)?;
        Self::new(spec, Arc::new(m))
    }

    pub fn trivial(spec: ScalarSpec<S>, k: usize) -> Result<Self, AlgebraError> {
        Self::new(spec, Arc::new(TrivialModule::new(k)))
    }

    pub fn k(&self) -> usize {
        self.module.rank()
    }

    pub fn basis(&self) -> Vec<ColorTuple> {
        self.module.basis()
    }

    pub fn zero(&self) -> ModuleVector<S> {
        ModuleVector::zero(self.k())
    }

    pub fn t(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
        self.module.t(i, v)
    }

    pub fn t_inv(&self, i: usize, v: &ModuleVector<S>) -> ModuleVector<S> {
        self.module.t_inv(i, v)
    }

    /// `T_w . v`, or `T_w^{-1} . v` when `inverse`.
    pub fn t_word(&self, word: &WeylWord, v: &ModuleVector<S>, inverse: bool) -> ModuleVector<S> {
        if inverse {
            word.letters()
                .iter()
                .fold(v.clone(), |acc, &i| self.t_inv(i, &acc))
        } else {
            word.letters()
                .iter()
                .rev()
                .fold(v.clone(), |acc, &i| self.t(i, &acc))
        }
    }

    /// Applies `T_{j_1}^{±1} .. T_{j_r}^{±1}` written left to right, i.e. the
    /// last factor acts first.
    pub fn t_product(&self, factors: &[(usize, bool)], v: &ModuleVector<S>) -> ModuleVector<S> {
        factors.iter().rev().fold(v.clone(), |acc, &(i, inv)| {
            if inv {
                self.t_inv(i, &acc)
            } else {
                self.t(i, &acc)
            }
        })
    }
}

/// A linear operator on the module, stored by its images of basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp<S> {
    len: usize,
    images: BTreeMap<ColorTuple, ModuleVector<S>>,
}

impl<S: Scalar> LinearOp<S> {
    pub fn identity(basis: &[ColorTuple]) -> Self {
        let len = basis.first().map(|b| b.len()).unwrap_or(0);
        LinearOp {
            len,
            images: basis
                .iter()
                .map(|b| (b.clone(), ModuleVector::basis(b.clone())))
                .collect(),
        }
    }

    pub fn from_fn(basis: &[ColorTuple], f: impl Fn(&ModuleVector<S>) -> ModuleVector<S>) -> Self {
        let len = basis.first().map(|b| b.len()).unwrap_or(0);
        LinearOp {
            len,
            images: basis
                .iter()
                .map(|b| (b.clone(), f(&ModuleVector::basis(b.clone()))))
                .collect(),
        }
    }

    pub fn apply(&self, v: &ModuleVector<S>) -> ModuleVector<S> {
        let mut out = ModuleVector::zero(self.len);
        for (mu, c) in v.iter() {
            let img = self
                .images
                .get(mu)
                .unwrap_or_else(|| panic!("basis vector u{mu} outside operator domain"));
            out.axpy(c, img);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOp<S>) -> LinearOp<S> {
        LinearOp {
            len: self.len,
            images: other
                .images
                .iter()
                .map(|(b, img)| (b.clone(), self.apply(img)))
                .collect(),
        }
    }

    /// Max-abs distance between the matrices of two operators.
    pub fn distance(&self, other: &LinearOp<S>) -> f64 {
        self.images
            .iter()
            .map(|(b, img)| match other.images.get(b) {
                Some(o) => img.sub(o).norm(),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::One;

    fn spec() -> ScalarSpec<Rational> {
        ScalarSpec::exact(rat(1, 2), rat(2, 3))
    }

    fn u(c: &[u8]) -> ModuleVector<Rational> {
        ModuleVector::basis(ColorTuple::new(c.to_vec()))
    }

    fn t(c: &[u8]) -> ColorTuple {
        ColorTuple::new(c.to_vec())
    }

    #[test]
    fn r_examples() {
        let sp = spec();
        let s = sp.s.clone();
        assert_eq!(r_apply(&sp, 1, &u(&[1, 1])).unwrap(), u(&[1, 1]));
        assert_eq!(r_apply(&sp, 1, &u(&[2, 1])).unwrap(), u(&[1, 2]).scale(&s));
        assert_eq!(
            r_apply(&sp, 1, &u(&[1, 2])).unwrap(),
            u(&[1, 2])
                .scale(&(Rational::one() - sp.q.clone()))
                .add(&u(&[2, 1]).scale(&s))
        );
        assert!(matches!(
            r_apply(&sp, 2, &u(&[1, 2])),
            Err(AlgebraError::SlotOutOfRange { .. })
        ));
    }

    #[test]
    fn r_inverse_examples() {
        let sp = spec();
        let s_inv = Rational::one() / sp.s.clone();
        assert_eq!(r_inv_apply(&sp, 1, &u(&[1, 1])).unwrap(), u(&[1, 1]));
        assert_eq!(
            r_inv_apply(&sp, 1, &u(&[1, 2])).unwrap(),
            u(&[2, 1]).scale(&s_inv)
        );
        let expected = u(&[1, 2])
            .scale(&s_inv)
            .sub(&u(&[2, 1]).scale(&((Rational::one() - sp.q.clone()) / sp.q.clone())));
        assert_eq!(r_inv_apply(&sp, 1, &u(&[2, 1])).unwrap(), expected);
        let zero_q = ScalarSpec::exact(rat(0, 1), rat(1, 1));
        assert_eq!(
            r_inv_apply(&zero_q, 1, &u(&[1, 2])),
            Err(AlgebraError::ZeroQ)
        );
    }

    #[test]
    fn r_and_inverse_cancel() {
        let sp = spec();
        for mu in ColorTuple::all(3, 3) {
            for i in 1..3 {
                let v = ModuleVector::basis(mu.clone());
                assert_eq!(
                    r_apply(&sp, i, &r_inv_apply(&sp, i, &v).unwrap()).unwrap(),
                    v
                );
                assert_eq!(
                    r_inv_apply(&sp, i, &r_apply(&sp, i, &v).unwrap()).unwrap(),
                    v
                );
            }
        }
    }

    #[test]
    fn t_word_examples() {
        let sp = spec();
        let v = u(&[2, 1]);
        assert_eq!(t_word_apply(&sp, &WeylWord::empty(), &v, false).unwrap(), v);
        assert_eq!(
            t_word_apply(&sp, &WeylWord::new(vec![1]), &v, false).unwrap(),
            u(&[1, 2]).scale(&sp.s)
        );
        let w = WeylWord::new(vec![1, 2]);
        for mu in ColorTuple::all(2, 3) {
            let v = ModuleVector::basis(mu);
            let there = t_word_apply(&sp, &w, &v, false).unwrap();
            assert_eq!(t_word_apply(&sp, &w, &there, true).unwrap(), v);
        }
    }

    #[test]
    fn a_op_examples() {
        let sp = spec();
        let s = sp.s.clone();
        let v = u(&[2, 1]).add(&u(&[1, 1]));
        assert_eq!(a_op_apply(&sp, 1, &v).unwrap(), v);
        assert_eq!(
            a_op_apply(&sp, 2, &u(&[1, 2])).unwrap(),
            u(&[1, 2]).add(&u(&[2, 1]).scale(&s))
        );
        assert_eq!(
            a_op_apply(&sp, 2, &u(&[2, 1])).unwrap(),
            u(&[1, 2]).scale(&s).add(&u(&[2, 1]).scale(&sp.q))
        );
        assert!(a_op_apply(&sp, 3, &u(&[2, 1])).is_err());
    }

    #[test]
    fn a_matrix_element_examples() {
        let sp = spec();
        let s = sp.s.clone();
        assert_eq!(
            a_matrix_element(&sp, &t(&[1, 2]), &t(&[1, 2]), 2).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            a_matrix_element(&sp, &t(&[2, 1]), &t(&[1, 2]), 2).unwrap(),
            s.clone()
        );
        assert_eq!(
            a_matrix_element(&sp, &t(&[1, 2, 1]), &t(&[1, 1, 2]), 3).unwrap(),
            (Rational::one() + sp.q.clone()) * s
        );
        assert_eq!(
            a_matrix_element(&sp, &t(&[1, 1, 2]), &t(&[1, 2, 1]), 3),
            Err(AlgebraError::Unsorted(t(&[1, 2, 1])))
        );
    }

    #[test]
    fn s_op_examples() {
        let sp = spec();
        let s_inv = Rational::one() / sp.s.clone();
        assert_eq!(s_op_apply(&sp, 1, &u(&[1, 1])).unwrap(), u(&[1, 1]));
        assert_eq!(
            s_op_apply(&sp, 1, &u(&[1, 2])).unwrap(),
            u(&[2, 1]).scale(&s_inv)
        );
        let diag = Rational::one() - Rational::one() / sp.q.clone();
        assert_eq!(
            s_op_apply(&sp, 1, &u(&[2, 1])).unwrap(),
            u(&[2, 1]).scale(&diag).add(&u(&[1, 2]).scale(&s_inv))
        );
    }

    #[test]
    fn trivial_module_is_identity() {
        assert_eq!(trivial_module_apply(1, rat(1, 1)), rat(1, 1));
        assert_eq!(trivial_module_apply(1, rat(0, 1)), rat(0, 1));
        assert_eq!(trivial_module_apply(2, rat(-7, 3)), rat(-7, 3));
        let h = Hecke::trivial(spec(), 3).unwrap();
        let v = TrivialModule::new(3).vector(rat(5, 2));
        let q = h.spec.q.clone();
        // (T - 1)(T + q) = 0
        let tv = h.t(1, &v);
        let inner = tv.add(&v.scale(&q));
        assert!(h.t(1, &inner).sub(&inner).is_zero());
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let mut v = u(&[1, 2]);
        v.add_term(t(&[1, 2]), rat(-1, 1));
        assert!(v.is_zero());
        assert_eq!(v.num_terms(), 0);
    }

    #[test]
    fn hecke_rejects_single_particle() {
        assert!(Hecke::trivial(spec(), 1).is_err());
    }
}

//! The representation `rho` of the deformed affine Hecke algebra on
//! module-valued lattice functions: shifts `t_j`, the Weyl action, the
//! discrete integral-reflection operators `I_j`, and `rho(T_j) = T_j s_j + I_j`.
//!
//! Functions are lazy closed-form kernels with a memo cache. Operators
//! return new kernels that evaluate their argument on demand, so an
//! operator identity is checked by evaluating both sides on a window.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::algebra::{AlgebraError, Hecke, ModuleVector};
use crate::lattice::{LatticeError, LatticePoint, WeylWord};
use crate::scalar::Scalar;

type Kernel<S> = dyn Fn(&LatticePoint) -> ModuleVector<S> + Send + Sync;

struct Inner<S> {
    kernel: Box<Kernel<S>>,
    cache: RwLock<HashMap<LatticePoint, ModuleVector<S>>>,
}

/// A total function `L -> M` given by a kernel, memoized per point.
pub struct LatticeFunction<S> {
    k: usize,
    inner: Arc<Inner<S>>,
}

impl<S> Clone for LatticeFunction<S> {
    fn clone(&self) -> Self {
        LatticeFunction {
            k: self.k,
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<S> fmt::Debug for LatticeFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeFunction")
            .field("k", &self.k)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> LatticeFunction<S> {
    pub fn new(
        k: usize,
        kernel: impl Fn(&LatticePoint) -> ModuleVector<S> + Send + Sync + 'static,
    ) -> Self {
        LatticeFunction {
            k,
            inner: Arc::new(Inner {
                kernel: Box::new(kernel),
                cache: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn constant(k: usize, m: ModuleVector<S>) -> Self {
        Self::new(k, move |_| m.clone())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eval(&self, x: &LatticePoint) -> ModuleVector<S> {
        debug_assert_eq!(x.k(), self.k);
        if let Some(v) = self.inner.cache.read().unwrap().get(x) {
            return v.clone();
        }
        let v = (self.inner.kernel)(x);
        self.inner
            .cache
            .write()
            .unwrap()
            .entry(x.clone())
            .or_insert(v)
            .clone()
    }

    /// Evaluates the kernel directly, bypassing the cache.
    pub fn eval_uncached(&self, x: &LatticePoint) -> ModuleVector<S> {
        (self.inner.kernel)(x)
    }

    pub fn cached_points(&self) -> usize {
        self.inner.cache.read().unwrap().len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(self.k, move |x| f.eval(x).add(&g.eval(x)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(self.k, move |x| f.eval(x).sub(&g.eval(x)))
    }

    pub fn scale(&self, c: S) -> Self {
        let f = self.clone();
        Self::new(self.k, move |x| f.eval(x).scale(&c))
    }

    /// `sum_i c_i f_i`.
    pub fn linear_combination(k: usize, terms: Vec<(S, Self)>) -> Self {
        Self::new(k, move |x| {
            let mut acc: Option<ModuleVector<S>> = None;
            for (c, f) in &terms {
                let v = f.eval(x);
                match acc.as_mut() {
                    Some(a) => a.axpy(c, &v),
                    None => acc = Some(v.scale(c)),
                }
            }
            acc.unwrap_or_else(|| ModuleVector::zero(k))
        })
    }

    /// Pointwise post-composition with a map on `M`.
    pub fn map_values(
        &self,
        m: impl Fn(&ModuleVector<S>) -> ModuleVector<S> + Send + Sync + 'static,
    ) -> Self {
        let f = self.clone();
        Self::new(self.k, move |x| m(&f.eval(x)))
    }
}

/// `x -> (prod_i mu_i^{x_i}) m`, an eigenfunction of every shift `t_j`
/// with eigenvalue `mu_j^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialKernel<S> {
    pub mu: Vec<S>,
    pub m: ModuleVector<S>,
}

impl<S: Scalar> ExponentialKernel<S> {
    pub fn new(mu: Vec<S>, m: ModuleVector<S>) -> Self {
        assert!(
            mu.iter().all(|z| !z.is_zero()),
            "exponential base must be nonzero"
        );
        ExponentialKernel { mu, m }
    }

    pub fn weight(&self, x: &LatticePoint) -> S {
        self.mu
            .iter()
            .zip(x.coords())
            .fold(S::one(), |acc, (z, &e)| acc * z.powi(e))
    }

    pub fn value(&self, x: &LatticePoint) -> ModuleVector<S> {
        self.m.scale(&self.weight(x))
    }

    pub fn to_function(&self) -> LatticeFunction<S> {
        let kern = self.clone();
        LatticeFunction::new(self.mu.len(), move |x| kern.value(x))
    }
}

/// Operators of the representation `rho` for a fixed module and parameters.
#[derive(Clone, Debug)]
pub struct Rep<S> {
    hecke: Arc<Hecke<S>>,
}

impl<S: Scalar> Rep<S> {
    pub fn new(hecke: Arc<Hecke<S>>) -> Self {
        Rep { hecke }
    }

    pub fn hecke(&self) -> &Arc<Hecke<S>> {
        &self.hecke
    }

    pub fn k(&self) -> usize {
        self.hecke.k()
    }

    fn check(&self, j: usize, max: usize) -> Result<(), AlgebraError> {
        if j == 0 || j > max {
            Err(LatticeError::IndexOutOfRange { index: j, max }.into())
        } else {
            Ok(())
        }
    }

    /// `(t_j f)(x) = f(x - v_j)`.
    pub fn shift(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        self.check(j, self.k())?;
        let f = f.clone();
        Ok(LatticeFunction::new(self.k(), move |x| {
            f.eval(&x.minus_basis(j))
        }))
    }

    /// `(t_j^{-1} f)(x) = f(x + v_j)`.
    pub fn shift_inverse(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        self.check(j, self.k())?;
        let f = f.clone();
        Ok(LatticeFunction::new(self.k(), move |x| {
            f.eval(&x.shifted(j, 1))
        }))
    }

    /// `(w f)(x) = f(w^{-1} x)`.
    pub fn weyl_act(
        &self,
        w: &WeylWord,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        w.validate(self.k())?;
        let (w, f) = (w.clone(), f.clone());
        Ok(LatticeFunction::new(self.k(), move |x| {
            f.eval(&w.act_inverse(x))
        }))
    }

    /// Pointwise module action `(T_j f)(x) = T_j . f(x)`.
    pub fn hat_t(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        self.check(j, self.k() - 1)?;
        let h = Arc::clone(&self.hecke);
        Ok(f.map_values(move |m| h.t(j, m)))
    }

    /// `(I_j f)(x)`, a sum over the `|a_j(x)|` points of the segment between
    /// `x` and `s_j x`.
    pub fn integral_reflection_at(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
        x: &LatticePoint,
    ) -> ModuleVector<S> {
        integral_reflection_value(&self.hecke, j, f, x)
    }

    pub fn integral_reflection(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        self.check(j, self.k() - 1)?;
        let (h, f) = (Arc::clone(&self.hecke), f.clone());
        Ok(LatticeFunction::new(self.k(), move |x| {
            integral_reflection_value(&h, j, &f, x)
        }))
    }

    /// `rho(T_j) f`, i.e. `x -> T_j . f(s_j x) + (I_j f)(x)`.
    pub fn rho_t(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        self.check(j, self.k() - 1)?;
        let (h, f) = (Arc::clone(&self.hecke), f.clone());
        Ok(LatticeFunction::new(self.k(), move |x| {
            let mut v = h.t(j, &f.eval(&x.swapped(j)));
            v.axpy(&S::one(), &integral_reflection_value(&h, j, &f, x));
            v
        }))
    }

    /// `rho(T_j)^{-1} = q^{-1} (rho(T_j) - (1 - q))`.
    pub fn rho_t_inverse(
        &self,
        j: usize,
        f: &LatticeFunction<S>,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        let spec = &self.hecke.spec;
        if spec.q.is_zero() {
            return Err(AlgebraError::ZeroQ);
        }
        let tf = self.rho_t(j, f)?;
        let q_inv = S::one() / spec.q.clone();
        let c = -(spec.one_minus_q() * q_inv.clone());
        Ok(LatticeFunction::linear_combination(
            self.k(),
            vec![(q_inv, tf), (c, f.clone())],
        ))
    }

    /// `rho(T_w) f = rho(T_{i_1}) .. rho(T_{i_l}) f`, or `rho(T_w)^{-1} f`.
    pub fn rho_t_word(
        &self,
        word: &WeylWord,
        f: &LatticeFunction<S>,
        inverse: bool,
    ) -> Result<LatticeFunction<S>, AlgebraError> {
        word.validate(self.k())?;
        let mut g = f.clone();
        if inverse {
            for &i in word.letters() {
                g = self.rho_t_inverse(i, &g)?;
            }
        } else {
            for &i in word.letters().iter().rev() {
                g = self.rho_t(i, &g)?;
            }
        }
        Ok(g)
    }
}

fn integral_reflection_value<S: Scalar>(
    hecke: &Hecke<S>,
    j: usize,
    f: &LatticeFunction<S>,
    x: &LatticePoint,
) -> ModuleVector<S> {
    let n = x.simple_root(j);
    let alpha = &hecke.spec.alpha;
    let omq = hecke.spec.one_minus_q();
    let mut acc = hecke.zero();
    if n > 0 {
        for l in 0..n {
            let y = x.plus_coroot(j, -l);
            acc.axpy(alpha, &f.eval(&y.shifted(j + 1, 1)));
            acc.axpy(&omq, &f.eval(&y));
        }
    } else if n < 0 {
        let (neg_alpha, neg_omq) = (-alpha.clone(), -omq);
        for l in 1..=-n {
            let y = x.plus_coroot(j, l);
            acc.axpy(&neg_alpha, &f.eval(&y.shifted(j + 1, 1)));
            acc.axpy(&neg_omq, &f.eval(&y));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ColorTuple, ScalarSpec, TrivialModule};
    use crate::scalar::{rat, Rational};
    use num_traits::One;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn trivial_rep(k: usize) -> Rep<Rational> {
        let spec = ScalarSpec::exact(rat(1, 2), rat(2, 3));
        Rep::new(Arc::new(Hecke::trivial(spec, k).unwrap()))
    }

    fn one(k: usize) -> ModuleVector<Rational> {
        TrivialModule::new(k).vector(Rational::one())
    }

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec())
    }

    #[test]
    fn cache_is_transparent() {
        let calls = Arc::new(AtomicUsize::new(0));
        let c2 = Arc::clone(&calls);
        let f = LatticeFunction::new(2, move |x: &LatticePoint| {
            c2.fetch_add(1, Ordering::SeqCst);
            TrivialModule::new(2).vector(Rational::from_i64(x.sum()))
        });
        let x = p(&[3, -1]);
        assert_eq!(f.eval(&x), f.eval_uncached(&x));
        assert_eq!(f.eval(&x), f.eval(&x));
        assert_eq!(calls.load(Ordering::SeqCst), 2);
        assert_eq!(f.cached_points(), 1);
    }

    #[test]
    fn shift_examples() {
        let r = trivial_rep(2);
        let c = LatticeFunction::constant(2, one(2).scale(&rat(3, 1)));
        let tc = r.shift(1, &c).unwrap();
        assert_eq!(tc.eval(&p(&[5, 5])), c.eval(&p(&[5, 5])));

        let mu = vec![rat(2, 1), rat(1, 3)];
        let e = ExponentialKernel::new(mu.clone(), one(2)).to_function();
        let te = r.shift(2, &e).unwrap();
        for x in [p(&[0, 0]), p(&[1, -2]), p(&[-3, 4])] {
            assert_eq!(
                te.eval(&x),
                e.eval(&x).scale(&(Rational::one() / mu[1].clone()))
            );
        }

        let delta = LatticeFunction::new(2, |x: &LatticePoint| {
            let c = if x.coords().iter().all(|&v| v == 0) {
                1
            } else {
                0
            };
            TrivialModule::new(2).vector(Rational::from_i64(c))
        });
        let td = r.shift(1, &delta).unwrap();
        assert_eq!(td.eval(&p(&[1, 0])), delta.eval(&p(&[0, 0])));
        assert!(r.shift(3, &delta).is_err());
    }

    #[test]
    fn weyl_act_examples() {
        let r = trivial_rep(3);
        let f = LatticeFunction::new(3, |x: &LatticePoint| {
            let c = x.coords();
            TrivialModule::new(3).vector(Rational::from_i64(c[0] + 10 * c[1] + 100 * c[2]))
        });
        let sym = LatticeFunction::new(3, |x: &LatticePoint| {
            let c = x.coords();
            TrivialModule::new(3).vector(Rational::from_i64(c[0] * c[1] + c[2]))
        });
        let id = r.weyl_act(&WeylWord::empty(), &f).unwrap();
        let s1 = WeylWord::new(vec![1]);
        let s1sym = r.weyl_act(&s1, &sym).unwrap();
        let twice = r.weyl_act(&s1, &r.weyl_act(&s1, &f).unwrap()).unwrap();
        // (s_1 s_2 f)(x) = f(s_2 s_1 x)
        let s12 = r.weyl_act(&WeylWord::new(vec![1, 2]), &f).unwrap();
        let composed = r
            .weyl_act(&s1, &r.weyl_act(&WeylWord::new(vec![2]), &f).unwrap())
            .unwrap();
        for x in crate::lattice::Window::symmetric(1).points(3) {
            assert_eq!(id.eval(&x), f.eval(&x));
            assert_eq!(s1sym.eval(&x), sym.eval(&x));
            assert_eq!(twice.eval(&x), f.eval(&x));
            assert_eq!(s12.eval(&x), composed.eval(&x));
        }
    }

    #[test]
    fn integral_reflection_examples() {
        let r = trivial_rep(2);
        let h = r.hecke().clone();
        let m = one(2).scale(&rat(5, 7));
        let c = LatticeFunction::constant(2, m.clone());
        let a_plus_omq = h.spec.alpha.clone() + h.spec.one_minus_q();
        let ij = r.integral_reflection(1, &c).unwrap();
        assert!(ij.eval(&p(&[2, 2])).is_zero());
        assert_eq!(ij.eval(&p(&[1, 0])), m.scale(&a_plus_omq));
        assert_eq!(ij.eval(&p(&[0, 1])), m.scale(&-a_plus_omq.clone()));
        assert_eq!(ij.eval(&p(&[3, 0])), m.scale(&(a_plus_omq * rat(3, 1))));
        assert!(r.integral_reflection(2, &c).is_err());
    }

    #[test]
    fn integral_reflection_touches_two_points_per_step() {
        let r = trivial_rep(2);
        let calls = Arc::new(AtomicUsize::new(0));
        let c2 = Arc::clone(&calls);
        let f = LatticeFunction::new(2, move |x: &LatticePoint| {
            c2.fetch_add(1, Ordering::SeqCst);
            TrivialModule::new(2).vector(Rational::from_i64(x.coords()[0] * 3 - x.coords()[1]))
        });
        for (x, n) in [(p(&[4, 1]), 3), (p(&[-2, 3]), 5), (p(&[0, 0]), 0)] {
            calls.store(0, Ordering::SeqCst);
            let _ = r.integral_reflection_at(
                1,
                &LatticeFunction::new(2, {
                    let f = f.clone();
                    move |y: &LatticePoint| f.eval_uncached(y)
                }),
                &x,
            );
            assert_eq!(calls.load(Ordering::SeqCst), 2 * n);
        }
    }

    #[test]
    fn rho_t_examples() {
        let r = trivial_rep(2);
        let h = r.hecke().clone();
        let m = one(2);
        let c = LatticeFunction::constant(2, m.clone());
        let t = r.rho_t(1, &c).unwrap();
        assert_eq!(t.eval(&p(&[-1, -1])), m);
        let expected = Rational::one() + h.spec.alpha.clone() + h.spec.one_minus_q();
        assert_eq!(t.eval(&p(&[1, 0])), m.scale(&expected));
    }

    #[test]
    fn rho_t_word_inverse_roundtrip() {
        let spec = ScalarSpec::exact(rat(1, 2), rat(2, 3));
        let hecke = Arc::new(Hecke::jimbo(spec, 2, 3).unwrap());
        let r = Rep::new(hecke);
        let m = ModuleVector::basis(ColorTuple::new(vec![2, 1, 2]))
            .add(&ModuleVector::basis(ColorTuple::new(vec![1, 1, 2])).scale(&rat(3, 1)));
        let f = ExponentialKernel::new(vec![rat(2, 1), rat(-1, 3), rat(3, 2)], m).to_function();
        let w = WeylWord::new(vec![1, 2, 1]);
        let there = r.rho_t_word(&w, &f, false).unwrap();
        let back = r.rho_t_word(&w, &there, true).unwrap();
        let empty = r.rho_t_word(&WeylWord::empty(), &f, false).unwrap();
        let pts = crate::lattice::Window::symmetric(2).points(3);
        for x in pts.iter().step_by(6).take(20) {
            assert_eq!(back.eval(x), f.eval(x));
            assert_eq!(empty.eval(x), f.eval(x));
        }
    }
}

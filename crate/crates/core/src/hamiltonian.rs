//! The discrete Hamiltonian `H`, the propagation operator `G`, the invariant
//! subspace `F_0`, and the restricted Hamiltonian `H^+` on dominant points.
//!
//! `H` and `G` act on total lattice functions; `H^+` acts on functions of
//! dominant points only. [`Hamiltonian::extend_from_dominant`] is the bridge:
//! it rebuilds the unique `F_0` function from its dominant values.
//!
//! Cost: `G f` at `x` evaluates `rho(T_{w_x}) f` at `w_x x`; each `rho(T_j)`
//! layer reads `2|a_j|` further points. Keep windows small (radius 2 or 3).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use crate::algebra::{AlgebraError, Hecke, ModuleVector};
use crate::lattice::{
    cluster_coordinate, d_pm, shortest_to_dominant, LatticeError, LatticePoint, Permutation,
    WeylWord, Window,
};
use crate::rep::{LatticeFunction, Rep};
use crate::scalar::{q_integer, Scalar};

type DomKernel<S> = dyn Fn(&LatticePoint) -> ModuleVector<S> + Send + Sync;

struct DomInner<S> {
    kernel: Box<DomKernel<S>>,
    cache: RwLock<HashMap<LatticePoint, ModuleVector<S>>>,
}

/// A function on the dominant points `L_+`, memoized.
pub struct DominantFunction<S> {
    k: usize,
    inner: Arc<DomInner<S>>,
}

impl<S> Clone for DominantFunction<S> {
    fn clone(&self) -> Self {
        DominantFunction {
            k: self.k,
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<S> fmt::Debug for DominantFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DominantFunction")
            .field("k", &self.k)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> DominantFunction<S> {
    /// The kernel is only ever called on dominant points.
    pub fn new(
        k: usize,
        kernel: impl Fn(&LatticePoint) -> ModuleVector<S> + Send + Sync + 'static,
    ) -> Self {
        DominantFunction {
            k,
            inner: Arc::new(DomInner {
                kernel: Box::new(kernel),
                cache: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn try_eval(&self, x: &LatticePoint) -> Result<ModuleVector<S>, LatticeError> {
        if !x.is_dominant() {
            return Err(LatticeError::NotDominant(x.clone()));
        }
        if let Some(v) = self.inner.cache.read().unwrap().get(x) {
            return Ok(v.clone());
        }
        let v = (self.inner.kernel)(x);
        Ok(self
            .inner
            .cache
            .write()
            .unwrap()
            .entry(x.clone())
            .or_insert(v)
            .clone())
    }

    /// Panics on a non-dominant point.
    pub fn eval(&self, x: &LatticePoint) -> ModuleVector<S> {
        self.try_eval(x).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Restriction of a total function to `L_+`.
    pub fn restrict(f: &LatticeFunction<S>) -> Self {
        let f = f.clone();
        Self::new(f.k(), move |x| f.eval(x))
    }

    /// `x -> P_x g(x)` where `P_x = sum_{w in W_x} q^{-l(w)} T_w` runs over the
    /// stabilizer of `x`. Since `T_i P_x = P_x` for every `i` with
    /// `a_i(x) = 0`, the result satisfies the membership condition of
    /// `script-F(L_+, M)` for any kernel `g`.
    pub fn symmetrized(
        hecke: Arc<Hecke<S>>,
        g: impl Fn(&LatticePoint) -> ModuleVector<S> + Send + Sync + 'static,
    ) -> Self {
        let k = hecke.k();
        Self::new(k, move |x| {
            let m = g(x);
            let clusters = cluster_coordinate(x).expect("dominant point");
            let q_inv = S::one() / hecke.spec.q.clone();
            let mut acc = hecke.zero();
            for w in stabilizer(k, &clusters) {
                let word = w.reduced_word();
                let c = q_inv.powi(word.len() as i64);
                acc.axpy(&c, &hecke.t_word(&word, &m, false));
            }
            acc
        })
    }
}

/// Permutations preserving each block of consecutive indices of sizes `clusters`.
fn stabilizer(k: usize, clusters: &[usize]) -> Vec<Permutation> {
    let mut start = 0;
    let blocks: Vec<(usize, usize)> = clusters
        .iter()
        .map(|&c| {
            let b = (start, c);
            start += c;
            b
        })
        .collect();
    Permutation::all(k)
        .into_iter()
        .filter(|p| {
            blocks.iter().all(|&(s, c)| {
                (s + 1..=s + c).all(|i| {
                    let v = p.apply(i);
                    v > s && v <= s + c
                })
            })
        })
        .collect()
}

/// First violation found by [`Hamiltonian::f0_check`] or
/// [`Hamiltonian::script_f_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub point: LatticePoint,
    pub index: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    pub checked: usize,
    pub max_residual: f64,
    pub violation: Option<Violation>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Hamiltonian<S> {
    hecke: Arc<Hecke<S>>,
    rep: Rep<S>,
}

impl<S: Scalar> Hamiltonian<S> {
    pub fn new(hecke: Arc<Hecke<S>>) -> Self {
        let rep = Rep::new(Arc::clone(&hecke));
        Hamiltonian { hecke, rep }
    }

    pub fn hecke(&self) -> &Arc<Hecke<S>> {
        &self.hecke
    }

    pub fn rep(&self) -> &Rep<S> {
        &self.rep
    }

    pub fn k(&self) -> usize {
        self.hecke.k()
    }

    /// `T_i^{(-)}(x) . m`.
    pub fn t_minus_apply(
        &self,
        x: &LatticePoint,
        i: usize,
        m: &ModuleVector<S>,
    ) -> ModuleVector<S> {
        let form = shortest_to_dominant(x);
        let sig = form.sigma.apply(i);
        let (dm, _) = d_pm(x, i).expect("index in range");
        let h = &self.hecke;
        let mut v = h.t_word(&form.word, m, false);
        for j in (sig - dm..sig).rev() {
            v = h.t_inv(j, &v);
        }
        for j in sig - dm..sig {
            v = h.t_inv(j, &v);
        }
        h.t_word(&form.word, &v, true)
    }

    /// `T_i^{(+)}(x) . m`; zero when `d_i^+(x) = 0`.
    pub fn t_plus_apply(&self, x: &LatticePoint, i: usize, m: &ModuleVector<S>) -> ModuleVector<S> {
        let form = shortest_to_dominant(x);
        let sig = form.sigma.apply(i);
        let (_, dp) = d_pm(x, i).expect("index in range");
        let h = &self.hecke;
        if dp == 0 {
            return h.zero();
        }
        let base = h.t_word(&form.word, m, false);
        let mut sum = h.zero();
        for j in sig..sig + dp {
            let mut v = base.clone();
            for l in sig..j {
                v = h.t(l, &v);
            }
            v = h.t_inv(j, &v);
            for l in (sig..j).rev() {
                v = h.t_inv(l, &v);
            }
            sum.axpy(&S::one(), &v);
        }
        h.t_word(&form.word, &sum, true)
    }

    /// `(H f)(x) = sum_i q^{d_i^-(x)} T_i^{(-)}(x) . (f(x - v_i) - alpha T_i^{(+)}(x) . f(x))`.
    pub fn h_apply(&self, f: &LatticeFunction<S>, x: &LatticePoint) -> ModuleVector<S> {
        let spec = &self.hecke.spec;
        let fx = f.eval(x);
        let mut acc = self.hecke.zero();
        for i in 1..=self.k() {
            let (dm, _) = d_pm(x, i).expect("index in range");
            let mut inner = f.eval(&x.minus_basis(i));
            inner.axpy(&-spec.alpha.clone(), &self.t_plus_apply(x, i, &fx));
            let term = self.t_minus_apply(x, i, &inner);
            acc.axpy(&spec.q.powi(dm as i64), &term);
        }
        acc
    }

    /// `H f` as a lazy lattice function.
    pub fn h_function(&self, f: &LatticeFunction<S>) -> LatticeFunction<S> {
        let (me, f) = (self.clone(), f.clone());
        LatticeFunction::new(self.k(), move |x| me.h_apply(&f, x))
    }

    /// `G f` as a lazy lattice function: `x -> T_{w_x}^{-1} . (rho(T_{w_x}) f)(w_x x)`.
    /// The operator `rho(T_w) f` is built once per word and memoized.
    pub fn g_function(&self, f: &LatticeFunction<S>) -> LatticeFunction<S> {
        let words: Arc<Mutex<HashMap<WeylWord, LatticeFunction<S>>>> = Arc::default();
        let (rep, hecke, f) = (self.rep.clone(), Arc::clone(&self.hecke), f.clone());
        LatticeFunction::new(self.k(), move |x| {
            let form = shortest_to_dominant(x);
            let lifted = words
                .lock()
                .unwrap()
                .entry(form.word.clone())
                .or_insert_with(|| rep.rho_t_word(&form.word, &f, false).expect("valid word"))
                .clone();
            hecke.t_word(&form.word, &lifted.eval(&form.dominant), true)
        })
    }

    /// `(G f)(x)` at a single point.
    pub fn g_apply(&self, f: &LatticeFunction<S>, x: &LatticePoint) -> ModuleVector<S> {
        let form = shortest_to_dominant(x);
        let lifted = self
            .rep
            .rho_t_word(&form.word, f, false)
            .expect("valid word");
        self.hecke
            .t_word(&form.word, &lifted.eval(&form.dominant), true)
    }

    /// The restricted Hamiltonian `H^+` at a dominant point, in cluster form.
    pub fn h_plus_apply(
        &self,
        f: &DominantFunction<S>,
        x: &LatticePoint,
    ) -> Result<ModuleVector<S>, AlgebraError> {
        let spec = &self.hecke.spec;
        let omq = spec.one_minus_q();
        if omq.is_zero() {
            return Err(AlgebraError::QIsOne);
        }
        let clusters = cluster_coordinate(x)?;
        let h = &self.hecke;
        let mut acc = h.zero();
        let mut constant = S::zero();
        let mut end = 0;
        for &c in &clusters {
            let start = end;
            end += c;
            let mut run = f.eval(&x.minus_basis(end));
            acc.axpy(&S::one(), &run);
            let mut qpow = S::one();
            for l in (1..c).rev() {
                run = h.t_inv(start + l, &run);
                qpow = qpow * spec.q.clone();
                acc.axpy(&qpow, &run);
            }
            constant = constant + S::from_i64(c as i64) - q_integer(c, &spec.q);
        }
        let coeff = -(spec.alpha.clone() / omq) * constant;
        acc.axpy(&coeff, &f.eval(x));
        Ok(acc)
    }

    /// Checks `f(s_i x) = T_i^{-1} . f(x)` when `a_i(x) >= 0` and
    /// `f(s_i x) = T_i . f(x)` otherwise, over the window.
    pub fn f0_check(&self, f: &LatticeFunction<S>, window: Window, tol: f64) -> MembershipReport {
        let mut report = MembershipReport {
            checked: 0,
            max_residual: 0.0,
            violation: None,
        };
        for x in window.points(self.k()) {
            let fx = f.eval(&x);
            for i in 1..self.k() {
                let expected = if x.simple_root(i) >= 0 {
                    self.hecke.t_inv(i, &fx)
                } else {
                    self.hecke.t(i, &fx)
                };
                let got = f.eval(&x.swapped(i));
                record(&mut report, &x, i, &got, &expected, tol);
            }
        }
        report
    }

    /// Checks `T_i . f(x) = f(x)` whenever `a_i(x) = 0` on dominant window points.
    pub fn script_f_check(
        &self,
        f: &DominantFunction<S>,
        window: Window,
        tol: f64,
    ) -> MembershipReport {
        let mut report = MembershipReport {
            checked: 0,
            max_residual: 0.0,
            violation: None,
        };
        for x in window.dominant_points(self.k()) {
            let fx = f.eval(&x);
            for i in 1..self.k() {
                if x.simple_root(i) == 0 {
                    let got = self.hecke.t(i, &fx);
                    record(&mut report, &x, i, &got, &fx, tol);
                }
            }
        }
        report
    }

    /// The unique `F_0` function with the given dominant values:
    /// `x -> T_{w_x}^{-1} . f(w_x x)`.
    pub fn extend_from_dominant(&self, f: &DominantFunction<S>) -> LatticeFunction<S> {
        let (hecke, f) = (Arc::clone(&self.hecke), f.clone());
        LatticeFunction::new(self.k(), move |x| {
            let form = shortest_to_dominant(x);
            hecke.t_word(&form.word, &f.eval(&form.dominant), true)
        })
    }
}

fn record<S: Scalar>(
    report: &mut MembershipReport,
    x: &LatticePoint,
    i: usize,
    got: &ModuleVector<S>,
    expected: &ModuleVector<S>,
    tol: f64,
) {
    report.checked += 1;
    let residual = got.sub(expected).norm();
    report.max_residual = report.max_residual.max(residual);
    if report.violation.is_none() && !got.approx_eq(expected, tol) {
        report.violation = Some(Violation {
            point: x.clone(),
            index: i,
            residual,
        });
    }
}

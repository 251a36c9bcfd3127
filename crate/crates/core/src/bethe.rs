//! Bethe wave functions `h(x) = sum_w e^{(w lambda)(x)} phi(w).m`.
//!
//! A spectral parameter is stored through its exponentials
//! `z[i] = e^{lambda(v_i)}`, which may be complex. The Weyl group permutes
//! them: `(w z)[sigma_w(i)] = z[i]`.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Hecke, LinearOp, ModuleVector};
use crate::hamiltonian::{DominantFunction, Hamiltonian};
use crate::lattice::{LatticePoint, Permutation, WeylWord, Window};
use crate::rep::LatticeFunction;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BetheError {
    #[error("resonant spectral point: Y_{index} denominator vanishes{}", .at.as_ref().map(|p| format!(" at w = {:?}", p.images())).unwrap_or_default())]
    Resonance {
        index: usize,
        at: Option<Permutation>,
    },
    #[error("spectral parameter z[{0}] is zero")]
    ZeroParameter(usize),
    #[error("expected {expected} spectral parameters, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `z[i] = e^{lambda(v_i)}`, all nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPoint<S> {
    z: Vec<S>,
}

impl<S: Scalar> SpectralPoint<S> {
    pub fn new(z: Vec<S>) -> Result<Self, BetheError> {
        if let Some(i) = z.iter().position(|v| v.is_zero()) {
            return Err(BetheError::ZeroParameter(i + 1));
        }
        Ok(SpectralPoint { z })
    }

    pub fn k(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[S] {
        &self.z
    }

    /// `w lambda` for the Weyl element with permutation `w`.
    pub fn act(&self, w: &Permutation) -> Self {
        let mut z = self.z.clone();
        for (i, v) in self.z.iter().enumerate() {
            z[w.apply(i + 1) - 1] = v.clone();
        }
        SpectralPoint { z }
    }

    /// `e^{lambda(x)} = prod_i z[i]^{x_i}`.
    pub fn exponential(&self, x: &LatticePoint) -> S {
        self.z
            .iter()
            .zip(x.coords())
            .fold(S::one(), |acc, (z, &e)| acc * z.powi(e))
    }

    /// The eigenvalue `sum_i z[i]^{-1}`.
    pub fn eigenvalue(&self) -> S {
        self.z
            .iter()
            .fold(S::zero(), |acc, z| acc + S::one() / z.clone())
    }
}

fn resonant<S: Scalar>(den: &S, scale: f64) -> bool {
    den.negligible(1e-12 * scale.max(1.0))
}

/// `Y_i(lambda) . m`.
pub fn y_apply<S: Scalar>(
    hecke: &Hecke<S>,
    i: usize,
    z: &SpectralPoint<S>,
    m: &ModuleVector<S>,
) -> Result<ModuleVector<S>, BetheError> {
    let spec = &hecke.spec;
    let (zi, zj) = (z.z[i - 1].clone(), z.z[i].clone());
    let den =
        spec.alpha.clone() * zi.clone() * zj.clone() + zi.clone() - spec.q.clone() * zj.clone();
    let scale = (spec.alpha.clone() * zi.clone() * zj.clone()).magnitude()
        + zi.magnitude()
        + (spec.q.clone() * zj.clone()).magnitude();
    if resonant(&den, scale) {
        return Err(BetheError::Resonance { index: i, at: None });
    }
    let mut out = hecke
        .t(i, m)
        .scale(&((zi.clone() - zj.clone()) / den.clone()));
    let c = -(zi * (spec.alpha.clone() * zj + spec.one_minus_q())) / den;
    out.axpy(&c, m);
    Ok(out)
}

/// The operators `phi_lambda(w)` for every Weyl element.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTable<S> {
    entries: BTreeMap<Permutation, LinearOp<S>>,
}

impl<S: Scalar> CocycleTable<S> {
    pub fn entry(&self, w: &Permutation) -> &LinearOp<S> {
        &self.entries[w]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &LinearOp<S>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest entrywise distance to another table over the same elements.
    pub fn distance(&self, other: &CocycleTable<S>) -> f64 {
        self.entries
            .iter()
            .map(|(w, op)| {
                other
                    .entries
                    .get(w)
                    .map_or(f64::INFINITY, |o| op.distance(o))
            })
            .fold(0.0, f64::max)
    }
}

/// Builds `phi_lambda` breadth-first from `phi(1) = 1` through
/// `phi(s_i w) = Y_i(w lambda) phi(w)`, trying letters in ascending order.
pub fn build_cocycle<S: Scalar>(
    hecke: &Hecke<S>,
    z: &SpectralPoint<S>,
) -> Result<CocycleTable<S>, BetheError> {
    let letters: Vec<usize> = (1..hecke.k()).collect();
    build_cocycle_ordered(hecke, z, &letters)
}

/// As [`build_cocycle`], with the letter order of the spanning tree given
/// explicitly. Different orders reach elements along different reduced words.
pub fn build_cocycle_ordered<S: Scalar>(
    hecke: &Hecke<S>,
    z: &SpectralPoint<S>,
    letters: &[usize],
) -> Result<CocycleTable<S>, BetheError> {
    let k = hecke.k();
    if z.k() != k {
        return Err(BetheError::DimensionMismatch {
            expected: k,
            got: z.k(),
        });
    }
    let basis = hecke.basis();
    let id = Permutation::identity(k);
    let mut entries = BTreeMap::new();
    entries.insert(id.clone(), LinearOp::identity(&basis));
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        let wz = z.act(&w);
        for &i in letters {
            let next = Permutation::transposition(k, i).compose(&w);
            if entries.contains_key(&next) {
                continue;
            }
            // The denominator does not depend on the vector, so one probe decides resonance.
            y_apply(hecke, i, &wz, &hecke.zero()).map_err(|_| BetheError::Resonance {
                index: i,
                at: Some(w.clone()),
            })?;
            let y = LinearOp::from_fn(&basis, |m| {
                y_apply(hecke, i, &wz, m).expect("checked above")
            });
            entries.insert(next.clone(), y.compose(&entries[&w]));
            queue.push_back(next);
        }
    }
    Ok(CocycleTable { entries })
}

/// `h_lambda^m` with its cocycle precomputed.
#[derive(Clone, Debug)]
pub struct BetheFunction<S> {
    k: usize,
    terms: Vec<(SpectralPoint<S>, ModuleVector<S>)>,
    z: SpectralPoint<S>,
}

impl<S: Scalar> BetheFunction<S> {
    pub fn new(
        hecke: &Hecke<S>,
        z: SpectralPoint<S>,
        m: &ModuleVector<S>,
    ) -> Result<Self, BetheError> {
        let table = build_cocycle(hecke, &z)?;
        let terms = table
            .iter()
            .map(|(w, op)| (z.act(w), op.apply(m)))
            .collect();
        Ok(BetheFunction {
            k: hecke.k(),
            terms,
            z,
        })
    }

    pub fn spectral_point(&self) -> &SpectralPoint<S> {
        &self.z
    }

    pub fn eigenvalue(&self) -> S {
        self.z.eigenvalue()
    }

    pub fn eval(&self, x: &LatticePoint) -> ModuleVector<S> {
        let mut acc = ModuleVector::zero(self.k);
        for (wz, v) in &self.terms {
            acc.axpy(&wz.exponential(x), v);
        }
        acc
    }

    /// `sum_w |e^{(w lambda)(x)}| |phi(w) m|`: the size of the terms summed by
    /// [`eval`](Self::eval), which bounds its rounding error.
    pub fn term_scale(&self, x: &LatticePoint) -> f64 {
        self.terms
            .iter()
            .map(|(wz, v)| wz.exponential(x).magnitude() * v.norm())
            .sum()
    }

    pub fn to_function(&self) -> LatticeFunction<S> {
        let me = self.clone();
        LatticeFunction::new(self.k, move |x| me.eval(x))
    }
}

/// Which Hamiltonian an eigencheck exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMode {
    /// `H (G h) = E (G h)` at every window point.
    Full,
    /// `H^+ (h|L+) = E h` at dominant window points.
    Dominant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub mode: EigenMode,
    pub points: usize,
    pub max_residual: f64,
    pub max_value: f64,
    /// Largest [`BetheFunction::term_scale`] over the checked points.
    pub max_term_scale: f64,
}

impl EigenReport {
    /// Residual relative to the largest function value; absolute if that is zero.
    pub fn relative_residual(&self) -> f64 {
        if self.max_value > 0.0 {
            self.max_residual / self.max_value
        } else {
            self.max_residual
        }
    }

    /// Residual relative to the size of the summed terms. Unlike
    /// [`relative_residual`](Self::relative_residual) this stays at rounding
    /// level when `h` is small through cancellation, e.g. for nearly equal
    /// spectral parameters.
    pub fn scaled_residual(&self) -> f64 {
        if self.max_term_scale > 0.0 {
            self.max_residual / self.max_term_scale
        } else {
            self.max_residual
        }
    }
}

pub fn eigencheck<S: Scalar>(
    hecke: Arc<Hecke<S>>,
    z: &SpectralPoint<S>,
    m: &ModuleVector<S>,
    window: Window,
    mode: EigenMode,
) -> Result<EigenReport, BetheError> {
    let bethe = BetheFunction::new(&hecke, z.clone(), m)?;
    let e = bethe.eigenvalue();
    let k = hecke.k();
    let ham = Hamiltonian::new(hecke);
    let h = bethe.to_function();
    let mut report = EigenReport {
        mode,
        points: 0,
        max_residual: 0.0,
        max_value: 0.0,
        max_term_scale: 0.0,
    };
    let mut record = |x: &LatticePoint, value: ModuleVector<S>, image: ModuleVector<S>| {
        report.points += 1;
        report.max_term_scale = report.max_term_scale.max(bethe.term_scale(x));
        report.max_value = report.max_value.max(value.norm());
        report.max_residual = report.max_residual.max(image.sub(&value.scale(&e)).norm());
    };
    match mode {
        EigenMode::Full => {
            let gh = ham.g_function(&h);
            for x in window.points(k) {
                record(&x, gh.eval(&x), ham.h_apply(&gh, &x));
            }
        }
        EigenMode::Dominant => {
            let dom = DominantFunction::restrict(&h);
            for x in window.dominant_points(k) {
                let image = ham.h_plus_apply(&dom, &x).expect("q != 1 and x dominant");
                record(&x, dom.eval(&x), image);
            }
        }
    }
    Ok(report)
}

/// `Y_{i+1}(s_i s_{i+1} l) Y_i(s_{i+1} l) Y_{i+1}(l)` and
/// `Y_i(s_{i+1} s_i l) Y_{i+1}(s_i l) Y_i(l)` applied to `m`.
pub fn ybe_sides<S: Scalar>(
    hecke: &Hecke<S>,
    i: usize,
    z: &SpectralPoint<S>,
    m: &ModuleVector<S>,
) -> Result<(ModuleVector<S>, ModuleVector<S>), BetheError> {
    let k = hecke.k();
    let (si, sj) = (
        Permutation::transposition(k, i),
        Permutation::transposition(k, i + 1),
    );
    let act_word = |letters: &[usize]| {
        z.act(
            &WeylWord::new(letters.to_vec())
                .to_permutation(k)
                .expect("valid word"),
        )
    };
    let mut lhs = y_apply(hecke, i + 1, z, m)?;
    lhs = y_apply(hecke, i, &z.act(&sj), &lhs)?;
    lhs = y_apply(hecke, i + 1, &act_word(&[i, i + 1]), &lhs)?;
    let mut rhs = y_apply(hecke, i, z, m)?;
    rhs = y_apply(hecke, i + 1, &z.act(&si), &rhs)?;
    rhs = y_apply(hecke, i, &act_word(&[i + 1, i]), &rhs)?;
    Ok((lhs, rhs))
}

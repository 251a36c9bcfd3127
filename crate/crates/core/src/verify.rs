//! Named identity checks in exact arithmetic.
//!
//! Each check evaluates both sides of an identity on a finite family of
//! inputs (module bases, window points, closed-form kernels) and reports
//! the first mismatch. [`run_suite`] runs all of them for one parameter set.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{
    a_matrix_element, a_op_apply, r_inv_apply, s_op_apply, ColorTuple, Hecke, ModuleVector,
    ScalarSpec,
};
use crate::bethe::{
    build_cocycle, build_cocycle_ordered, y_apply, ybe_sides, BetheFunction, SpectralPoint,
};
use crate::hamiltonian::{DominantFunction, Hamiltonian};
use crate::lattice::{
    cluster_coordinate, d_pm, inversion_set, shortest_to_dominant, LatticePoint, Permutation,
    Window,
};
use crate::qboson::{
    configurations_in_window, exit_rate, phi_inv, phi_iso, transitions, Configuration, QBosonParams,
};
use crate::rep::{ExponentialKernel, LatticeFunction, Rep};
use crate::scalar::{q_integer, rat, Rational, Scalar};

/// Outcome of one named identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failure: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {} ({} cases)", self.name, self.cases),
            Some(why) => write!(f, "FAIL {} ({} cases): {why}", self.name, self.cases),
        }
    }
}

/// Accumulates cases and keeps the first failure.
struct Tally {
    name: String,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.to_string(),
            cases: 0,
            failure: None,
        }
    }

    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, lhs: &T, rhs: &T, at: impl FnOnce() -> String) {
        self.expect(lhs == rhs, || format!("{} : {lhs} != {rhs}", at()));
    }

    fn done(self) -> Check {
        Check {
            name: self.name,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

/// Parameters of [`run_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub k: usize,
    pub n_colors: u8,
    pub s: Rational,
    pub alpha: Rational,
    pub window: i64,
    /// Test hook: perturbs the rates fed to the generator identity.
    pub corrupt_rates: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            k: 3,
            n_colors: 2,
            s: rat(1, 2),
            alpha: rat(2, 3),
            window: 2,
            corrupt_rates: false,
        }
    }
}

/// Every check for one parameter set.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let spec = ScalarSpec::exact(cfg.s.clone(), cfg.alpha.clone());
    let hecke = Arc::new(Hecke::jimbo(spec.clone(), cfg.n_colors, cfg.k).expect("k >= 2"));
    let window = Window::symmetric(cfg.window);
    let kernels = exponential_kernels(cfg.k, cfg.n_colors);
    let rep = Rep::new(Arc::clone(&hecke));
    let ham = Hamiltonian::new(Arc::clone(&hecke));

    let mut out = vec![lattice_properties(
        cfg.k,
        Window::symmetric(3.max(cfg.window)),
    )];
    out.extend(hecke_relations(&hecke));
    out.push(pairing_duality(&spec, cfg.k, cfg.n_colors));
    out.push(a_closed_form(&spec, 6, 4));
    out.push(row_identity(&spec.q, 8, 4));
    out.extend(integral_reflection_lemma(&rep, &kernels, window));
    out.extend(rho_relations(&rep, &kernels, window));
    out.push(intertwining(&ham, &kernels, window));
    let samples = f0_samples(&ham);
    out.extend(invariance_and_restriction(&ham, &samples, window));
    out.extend(cluster_lemmas(&ham, &samples, window));
    let z = rational_spectral_points(cfg.k);
    out.extend(bethe_identities(&hecke, &z, window));

    let unit = rat(1, 1);
    if cfg.s.clone() * cfg.s.clone() < unit && cfg.s != rat(0, 1) {
        let params = QBosonParams::new(cfg.s.clone()).expect("0 < q < 1");
        let qb = Arc::new(params.hecke(cfg.n_colors, cfg.k).expect("k >= 2"));
        out.push(generator_identity(
            &params,
            qb,
            cfg.k,
            cfg.n_colors,
            Window::symmetric(cfg.window),
            cfg.corrupt_rates,
        ));
        out.extend(rate_properties(
            &params,
            cfg.k,
            cfg.n_colors,
            Window::symmetric(cfg.window),
        ));
        out.push(n1_reduction(&params, 8));
    }
    out
}

fn generic_vector(k: usize, n_colors: u8, salt: i64) -> ModuleVector<Rational> {
    let mut v = ModuleVector::zero(k);
    for (n, mu) in ColorTuple::all(n_colors, k).into_iter().enumerate() {
        let n = n as i64;
        v.add_term(mu, rat((n * 3 + salt) % 7 - 3, 5 + salt));
    }
    v
}

/// Two exponential kernels with generic bases and module vectors.
pub fn exponential_kernels(k: usize, n_colors: u8) -> Vec<LatticeFunction<Rational>> {
    let bases = [
        [rat(2, 1), rat(1, 3), rat(3, 2), rat(-5, 4)],
        [rat(-1, 2), rat(3, 1), rat(2, 5), rat(7, 3)],
    ];
    bases
        .iter()
        .enumerate()
        .map(|(n, mu)| {
            let cycle: Vec<Rational> = (0..k).map(|i| mu[i % 4].clone()).collect();
            ExponentialKernel::new(cycle, generic_vector(k, n_colors, n as i64 + 1)).to_function()
        })
        .collect()
}

/// Sample spectral points with rational entries.
pub fn rational_spectral_points(k: usize) -> Vec<SpectralPoint<Rational>> {
    let pools = [
        [rat(3, 1), rat(-1, 2), rat(5, 7), rat(2, 1)],
        [rat(-4, 3), rat(7, 5), rat(1, 3), rat(-2, 1)],
    ];
    pools
        .iter()
        .map(|p| SpectralPoint::new(p[..k].to_vec()).expect("nonzero"))
        .collect()
}

/// Shortest-element properties over every point of the window.
pub fn lattice_properties(k: usize, window: Window) -> Check {
    let mut t = Tally::new("lattice: shortest element, reflection and shift transport");
    for x in window.points(k) {
        let fx = shortest_to_dominant(&x);
        t.expect(
            fx.dominant.is_dominant()
                && fx.word.act(&x) == fx.dominant
                && fx.word.len() == inversion_set(&x).len(),
            || format!("w_x at {x}"),
        );
        for i in 1..k {
            let a = x.simple_root(i);
            if a > 0 {
                let fy = shortest_to_dominant(&x.swapped(i));
                let mut expected = fx.word.clone();
                expected.push(i);
                t.expect(
                    Some(fy.sigma.clone()) == expected.to_permutation(k).ok()
                        && fy.word.len() == fx.word.len() + 1,
                    || format!("w_(s_{i} x) = w_x s_{i} at {x}"),
                );
            } else if a == 0 {
                let si = fx.sigma.apply(i);
                let lhs = fx.sigma.compose(&Permutation::transposition(k, i));
                let rhs = Permutation::transposition(k, si).compose(&fx.sigma);
                t.expect(fx.sigma.apply(i + 1) == si + 1 && lhs == rhs, || {
                    format!("sigma_x(i+1) = sigma_x(i)+1 at {x}, i={i}")
                });
            }
        }
        for i in 1..=k {
            let (dm, dp) = d_pm(&x, i).expect("in range");
            let s = fx.sigma.apply(i);
            t.expect(
                d_pm(&fx.dominant, s).ok() == Some((dm, dp))
                    && x.epsilon(i) == fx.dominant.epsilon(s),
                || format!("d and epsilon transport at {x}, i={i}"),
            );
            let y = x.minus_basis(i);
            let fy = shortest_to_dominant(&y);
            let (dm_y, _) = d_pm(&y, i).expect("in range");
            t.expect(
                dm_y + fy.word.len() == dp + fx.word.len()
                    && fy.dominant == fx.dominant.minus_basis(s + dp),
                || format!("shift by v_{i} at {x}"),
            );
        }
    }
    t.done()
}

/// Quadratic, braid and far-commutation relations on every basis vector.
pub fn hecke_relations<S: Scalar>(hecke: &Hecke<S>) -> Vec<Check> {
    let k = hecke.k();
    let q = hecke.spec.q.clone();
    let mut quad = Tally::new("hecke: (T_i - 1)(T_i + q) = 0");
    let mut braid = Tally::new("hecke: T_i T_(i+1) T_i = T_(i+1) T_i T_(i+1)");
    let mut far = Tally::new("hecke: T_i T_j = T_j T_i for |i-j| > 1");
    let mut inv = Tally::new("hecke: T_i T_i^-1 = 1");
    for b in hecke.basis() {
        let m = ModuleVector::basis(b.clone());
        for i in 1..k {
            let tm = hecke.t(i, &m);
            let mut lhs = hecke.t(i, &tm);
            lhs.axpy(&(q.clone() - S::one()), &tm);
            lhs.axpy(&-q.clone(), &m);
            quad.expect(lhs.is_zero(), || format!("i={i}, u{b}"));
            inv.expect(hecke.t(i, &hecke.t_inv(i, &m)) == m, || {
                format!("i={i}, u{b}")
            });
            if i + 1 < k {
                let l = hecke.t_product(&[(i, false), (i + 1, false), (i, false)], &m);
                let r = hecke.t_product(&[(i + 1, false), (i, false), (i + 1, false)], &m);
                braid.expect(l == r, || format!("i={i}, u{b}"));
            }
            for j in i + 2..k {
                let l = hecke.t(i, &hecke.t(j, &m));
                let r = hecke.t(j, &hecke.t(i, &m));
                far.expect(l == r, || format!("i={i}, j={j}, u{b}"));
            }
        }
    }
    vec![quad.done(), braid.done(), far.done(), inv.done()]
}

/// `(R^{-1} u, u') = (u, S u')` over all basis pairs.
pub fn pairing_duality<S: Scalar>(spec: &ScalarSpec<S>, k: usize, n_colors: u8) -> Check {
    let mut t = Tally::new("algebra: (R^-1 u, u') = (u, S u')");
    let basis = ColorTuple::all(n_colors, k);
    for i in 1..k {
        for u in &basis {
            let ru = r_inv_apply(spec, i, &ModuleVector::basis(u.clone())).expect("valid slot");
            for v in &basis {
                let sv = s_op_apply(spec, i, &ModuleVector::basis(v.clone())).expect("valid slot");
                t.expect(ru.coeff(v) == sv.coeff(u), || format!("i={i}, u{u}, u{v}"));
            }
        }
    }
    t.done()
}

/// The closed form of `A^{(c)}` matrix elements against the operator itself.
pub fn a_closed_form<S: Scalar>(spec: &ScalarSpec<S>, max_c: usize, max_n: u8) -> Check {
    let mut t = Tally::new("algebra: A^(c) matrix elements, closed form");
    for n in 1..=max_n {
        for c in 1..=max_c {
            let all = ColorTuple::all(n, c);
            let sorted: Vec<&ColorTuple> = all.iter().filter(|nu| nu.is_sorted()).collect();
            for eta in &all {
                let image =
                    a_op_apply(spec, c, &ModuleVector::basis(eta.clone())).expect("valid c");
                for nu in &sorted {
                    let closed = a_matrix_element(spec, eta, nu, c).expect("sorted nu");
                    t.expect(closed == image.coeff(nu), || {
                        format!("N={n}, c={c}, eta={eta}, nu={nu}")
                    });
                }
            }
        }
    }
    t.done()
}

/// `sum_b [m_b]_q q^{m_{b+1}+..+m_N} = [sum m]_q` over count vectors.
pub fn row_identity<S: Scalar>(q: &S, max_total: u32, n_colors: usize) -> Check {
    let mut t = Tally::new("algebra: sum_b [m_b]_q q^(m_>b) = [|m|]_q");
    let mut m = vec![0u32; n_colors];
    loop {
        let total: u32 = m.iter().sum();
        if total <= max_total {
            let lhs = (0..n_colors).fold(S::zero(), |acc, b| {
                let above: u32 = m[b + 1..].iter().sum();
                acc + q_integer(m[b] as usize, q) * q.powi(above as i64)
            });
            t.expect(lhs == q_integer(total as usize, q), || format!("m={m:?}"));
        }
        let mut i = 0;
        while i < n_colors {
            m[i] += 1;
            if m[i] <= max_total {
                break;
            }
            m[i] = 0;
            i += 1;
        }
        if i == n_colors {
            break;
        }
    }
    t.done()
}

/// Operators on lattice functions used to state identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    /// `(s_i f)(x) = f(s_i x)`.
    Reflect(usize),
    /// The integral-reflection operator.
    I(usize),
    /// `rho(T_j)`.
    T(usize),
    /// `rho(X_j)`, the shift `t_j`.
    X(usize),
}

/// `coefficient * (op_1 op_2 ... op_n)`; the rightmost operator acts first.
pub type Term<S> = (S, Vec<Op>);

fn apply_ops<S: Scalar>(rep: &Rep<S>, ops: &[Op], f: &LatticeFunction<S>) -> LatticeFunction<S> {
    let k = rep.k();
    let mut g = f.clone();
    for op in ops.iter().rev() {
        g = match *op {
            Op::Reflect(i) => {
                let g = g.clone();
                LatticeFunction::new(k, move |x| g.eval(&x.swapped(i)))
            }
            Op::I(j) => rep.integral_reflection(j, &g).expect("valid index"),
            Op::T(j) => rep.rho_t(j, &g).expect("valid index"),
            Op::X(j) => rep.shift(j, &g).expect("valid index"),
        };
    }
    g
}

fn apply_terms<S: Scalar>(
    rep: &Rep<S>,
    terms: &[Term<S>],
    f: &LatticeFunction<S>,
) -> LatticeFunction<S> {
    LatticeFunction::linear_combination(
        rep.k(),
        terms
            .iter()
            .map(|(c, ops)| (c.clone(), apply_ops(rep, ops, f)))
            .collect(),
    )
}

fn compare_on<S: Scalar>(
    t: &mut Tally,
    rep: &Rep<S>,
    label: &str,
    lhs: &[Term<S>],
    rhs: &[Term<S>],
    kernels: &[LatticeFunction<S>],
    window: Window,
) {
    for (n, f) in kernels.iter().enumerate() {
        let (l, r) = (apply_terms(rep, lhs, f), apply_terms(rep, rhs, f));
        for x in window.points(rep.k()) {
            let (a, b) = (l.eval(&x), r.eval(&x));
            let ok = if S::EXACT {
                a == b
            } else {
                a.approx_eq(&b, 1e-9)
            };
            t.expect(ok, || format!("{label}, kernel {n}, x={x}"));
        }
    }
}

fn one<S: Scalar>(ops: Vec<Op>) -> Term<S> {
    (S::one(), ops)
}

/// The relations among `s_j` and the integral-reflection operators.
pub fn integral_reflection_lemma<S: Scalar>(
    rep: &Rep<S>,
    kernels: &[LatticeFunction<S>],
    window: Window,
) -> Vec<Check> {
    use Op::{Reflect as R, I};
    let k = rep.k();
    let omq = rep.hecke().spec.one_minus_q();
    let q = rep.hecke().spec.q.clone();
    let mut out = Vec::new();

    let mut t = Tally::new("rep: I_j^2 = (1-q) I_j");
    for j in 1..k {
        compare_on(
            &mut t,
            rep,
            &format!("j={j}"),
            &[one(vec![I(j), I(j)])],
            &[(omq.clone(), vec![I(j)])],
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rep: s_i I_j = I_j s_i for |i-j| >= 2");
    for j in 1..k {
        for i in (1..k).filter(|&i| i.abs_diff(j) >= 2) {
            compare_on(
                &mut t,
                rep,
                &format!("i={i}, j={j}"),
                &[one(vec![R(i), I(j)])],
                &[one(vec![I(j), R(i)])],
                kernels,
                window,
            );
        }
    }
    out.push(t.done());

    let mut t = Tally::new("rep: s_j I_j + I_j s_j = (1-q)(s_j - 1)");
    for j in 1..k {
        compare_on(
            &mut t,
            rep,
            &format!("j={j}"),
            &[one(vec![R(j), I(j)]), one(vec![I(j), R(j)])],
            &[(omq.clone(), vec![R(j)]), (-omq.clone(), vec![])],
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rep: I_j s_(j+1) s_j = s_(j+1) s_j I_(j+1) and mirror");
    for j in 1..k.saturating_sub(1) {
        compare_on(
            &mut t,
            rep,
            &format!("j={j}"),
            &[one(vec![I(j), R(j + 1), R(j)])],
            &[one(vec![R(j + 1), R(j), I(j + 1)])],
            kernels,
            window,
        );
        compare_on(
            &mut t,
            rep,
            &format!("j={j} mirror"),
            &[one(vec![I(j + 1), R(j), R(j + 1)])],
            &[one(vec![R(j), R(j + 1), I(j)])],
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rep: I_j s_(j+1) I_j expansion and mirror");
    for j in 1..k.saturating_sub(1) {
        let (a, b) = (j, j + 1);
        compare_on(
            &mut t,
            rep,
            &format!("j={j}"),
            &[one(vec![I(a), R(b), I(a)])],
            &[
                (omq.clone(), vec![R(b), I(a), R(b)]),
                one(vec![R(b), I(a), I(b)]),
                one(vec![I(b), I(a), R(b)]),
            ],
            kernels,
            window,
        );
        compare_on(
            &mut t,
            rep,
            &format!("j={j} mirror"),
            &[one(vec![I(b), R(a), I(b)])],
            &[
                (omq.clone(), vec![R(a), I(b), R(a)]),
                one(vec![R(a), I(b), I(a)]),
                one(vec![I(a), I(b), R(a)]),
            ],
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rep: I_j I_(j+1) I_j + q s_j I_(j+1) s_j symmetric in j, j+1");
    for j in 1..k.saturating_sub(1) {
        compare_on(
            &mut t,
            rep,
            &format!("j={j}"),
            &[
                one(vec![I(j), I(j + 1), I(j)]),
                (q.clone(), vec![R(j), I(j + 1), R(j)]),
            ],
            &[
                one(vec![I(j + 1), I(j), I(j + 1)]),
                (q.clone(), vec![R(j + 1), I(j), R(j + 1)]),
            ],
            kernels,
            window,
        );
    }
    out.push(t.done());
    out
}

/// The defining relations of the deformed algebra under `rho`.
pub fn rho_relations<S: Scalar>(
    rep: &Rep<S>,
    kernels: &[LatticeFunction<S>],
    window: Window,
) -> Vec<Check> {
    use Op::{T, X};
    let k = rep.k();
    let spec = &rep.hecke().spec;
    let (q, omq, alpha) = (spec.q.clone(), spec.one_minus_q(), spec.alpha.clone());
    let mut out = Vec::new();

    let mut t = Tally::new("rho: (T_i - 1)(T_i + q) = 0");
    for i in 1..k {
        compare_on(
            &mut t,
            rep,
            &format!("i={i}"),
            &[
                one(vec![T(i), T(i)]),
                (q.clone() - S::one(), vec![T(i)]),
                (-q.clone(), vec![]),
            ],
            &[],
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rho: T_i T_(i+1) T_i = T_(i+1) T_i T_(i+1)");
    for i in 1..k.saturating_sub(1) {
        compare_on(
            &mut t,
            rep,
            &format!("i={i}"),
            &[one(vec![T(i), T(i + 1), T(i)])],
            &[one(vec![T(i + 1), T(i), T(i + 1)])],
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rho: T_i T_j = T_j T_i for |i-j| > 1");
    for i in 1..k {
        for j in i + 2..k {
            compare_on(
                &mut t,
                rep,
                &format!("i={i}, j={j}"),
                &[one(vec![T(i), T(j)])],
                &[one(vec![T(j), T(i)])],
                kernels,
                window,
            );
        }
    }
    out.push(t.done());

    let mut t = Tally::new("rho: X_i X_j = X_j X_i");
    for i in 1..=k {
        for j in i + 1..=k {
            compare_on(
                &mut t,
                rep,
                &format!("i={i}, j={j}"),
                &[one(vec![X(i), X(j)])],
                &[one(vec![X(j), X(i)])],
                kernels,
                window,
            );
        }
    }
    out.push(t.done());

    let mut t =
        Tally::new("rho: X_(i+1) T_i - T_i X_i = T_i X_(i+1) - X_i T_i = (1-q) X_(i+1) + alpha");
    for i in 1..k {
        let rhs = [(omq.clone(), vec![X(i + 1)]), (alpha.clone(), vec![])];
        compare_on(
            &mut t,
            rep,
            &format!("i={i} left"),
            &[one(vec![X(i + 1), T(i)]), (-S::one(), vec![T(i), X(i)])],
            &rhs,
            kernels,
            window,
        );
        compare_on(
            &mut t,
            rep,
            &format!("i={i} right"),
            &[one(vec![T(i), X(i + 1)]), (-S::one(), vec![X(i), T(i)])],
            &rhs,
            kernels,
            window,
        );
    }
    out.push(t.done());

    let mut t = Tally::new("rho: X_i T_j = T_j X_i for i != j, j+1");
    for j in 1..k {
        for i in (1..=k).filter(|&i| i != j && i != j + 1) {
            compare_on(
                &mut t,
                rep,
                &format!("i={i}, j={j}"),
                &[one(vec![X(i), T(j)])],
                &[one(vec![T(j), X(i)])],
                kernels,
                window,
            );
        }
    }
    out.push(t.done());
    out
}

/// `H G f = G (sum_i t_i f)` at every window point.
pub fn intertwining<S: Scalar>(
    ham: &Hamiltonian<S>,
    kernels: &[LatticeFunction<S>],
    window: Window,
) -> Check {
    let mut t = Tally::new("hamiltonian: H G = G (t_1 + ... + t_k)");
    let k = ham.k();
    for (n, f) in kernels.iter().enumerate() {
        let shifted = LatticeFunction::linear_combination(
            k,
            (1..=k)
                .map(|j| (S::one(), ham.rep().shift(j, f).expect("valid")))
                .collect(),
        );
        let (gf, gs) = (ham.g_function(f), ham.g_function(&shifted));
        for x in window.points(k) {
            let (a, b) = (ham.h_apply(&gf, &x), gs.eval(&x));
            let ok = if S::EXACT {
                a == b
            } else {
                a.approx_eq(&b, 1e-9)
            };
            t.expect(ok, || format!("kernel {n}, x={x}"));
        }
    }
    t.done()
}

/// Dominant-chamber functions in `script-F`: stabilizer-symmetrized polynomials.
pub fn f0_samples(ham: &Hamiltonian<Rational>) -> Vec<DominantFunction<Rational>> {
    let k = ham.k();
    (0..2i64)
        .map(|salt| {
            let basis = ham.hecke().basis();
            DominantFunction::symmetrized(Arc::clone(ham.hecke()), move |x: &LatticePoint| {
                let mut v = ModuleVector::zero(k);
                for (n, mu) in basis.iter().enumerate() {
                    let n = n as i64 + salt;
                    let val = x
                        .coords()
                        .iter()
                        .enumerate()
                        .fold(rat(n, 1), |acc, (i, &e)| {
                            acc + rat((i as i64 + 2 + salt) * e * e - n * e + 1, 3 + salt)
                        });
                    v.add_term(mu.clone(), val);
                }
                v
            })
        })
        .collect()
}

/// `H` preserves `F_0`, and on `F_0` agrees with `H^+` at dominant points.
pub fn invariance_and_restriction(
    ham: &Hamiltonian<Rational>,
    samples: &[DominantFunction<Rational>],
    window: Window,
) -> Vec<Check> {
    let mut member = Tally::new("hamiltonian: samples lie in F_0");
    let mut inv = Tally::new("hamiltonian: H(F_0) in F_0");
    let mut restr = Tally::new("hamiltonian: H on F_0 equals H^+ at dominant points");
    for (n, dom) in samples.iter().enumerate() {
        let sf = ham.script_f_check(dom, window, 0.0);
        member.expect(sf.passed(), || format!("sample {n}: {:?}", sf.violation));
        let f = ham.extend_from_dominant(dom);
        let r = ham.f0_check(&f, window, 0.0);
        member.expect(r.passed(), || format!("sample {n}: {:?}", r.violation));
        let hf = ham.h_function(&f);
        let r = ham.f0_check(&hf, window, 0.0);
        inv.cases += r.checked;
        if let Some(v) = r.violation {
            inv.expect(false, || format!("sample {n}: {v:?}"));
        }
        for x in window.dominant_points(ham.k()) {
            let rhs = ham.h_plus_apply(dom, &x).expect("q != 1");
            restr.eq(&hf.eval(&x), &rhs, || format!("sample {n}, x={x}"));
        }
    }
    vec![member.done(), inv.done(), restr.done()]
}

/// The two cluster lemmas behind the restricted Hamiltonian.
pub fn cluster_lemmas(
    ham: &Hamiltonian<Rational>,
    samples: &[DominantFunction<Rational>],
    window: Window,
) -> Vec<Check> {
    let h = ham.hecke();
    let q = h.spec.q.clone();
    let j_apply = |p: usize, c: usize, m: &ModuleVector<Rational>| {
        let mut acc = h.zero();
        for l in 1..=c {
            let mut v = m.clone();
            for j in (p + l..p + c).rev() {
                v = h.t_inv(j, &v);
            }
            acc.axpy(&q.powi((c - l) as i64), &v);
        }
        acc
    };
    let mut shift = Tally::new("hamiltonian: cluster shift lemma");
    let mut jinv = Tally::new("hamiltonian: T_(p+i)^-1 J f(x - v_(p+c)) = J f(x - v_(p+c))");
    for (n, dom) in samples.iter().enumerate() {
        let f = ham.extend_from_dominant(dom);
        for x in window.dominant_points(ham.k()) {
            let mut p = 0;
            for c in cluster_coordinate(&x).expect("dominant") {
                let mut lhs = h.zero();
                for l in 1..=c {
                    let mut v = f.eval(&x.minus_basis(p + 1));
                    for j in p + 1..p + l {
                        v = h.t_inv(j, &v);
                    }
                    lhs.axpy(&q.powi(l as i64 - 1), &v);
                }
                let jf = j_apply(p, c, &f.eval(&x.minus_basis(p + c)));
                shift.eq(&lhs, &jf, || format!("sample {n}, x={x}, p={p}"));
                for i in 1..c {
                    jinv.eq(&h.t_inv(p + i, &jf), &jf, || {
                        format!("sample {n}, x={x}, p={p}, i={i}")
                    });
                }
                p += c;
            }
        }
    }
    vec![shift.done(), jinv.done()]
}

/// Unitarity, Yang-Baxter, cocycle well-definedness, rho-invariance and the
/// eigenvalue equations for Bethe functions.
pub fn bethe_identities(
    hecke: &Arc<Hecke<Rational>>,
    points: &[SpectralPoint<Rational>],
    window: Window,
) -> Vec<Check> {
    let k = hecke.k();
    let basis = hecke.basis();
    let mut unit = Tally::new("bethe: Y_i(s_i l) Y_i(l) = 1");
    let mut ybe = Tally::new("bethe: Yang-Baxter relation for Y");
    let mut tree = Tally::new("bethe: cocycle independent of reduced words");
    let mut inv = Tally::new("bethe: rho(T_i) h = h");
    let mut shift = Tally::new("bethe: (t_1 + ... + t_k) h = E h");
    let mut eig = Tally::new("bethe: H^+ h = E h on dominant points");
    let rep = Rep::new(Arc::clone(hecke));
    let ham = Hamiltonian::new(Arc::clone(hecke));
    for (n, z) in points.iter().enumerate() {
        for i in 1..k {
            let sz = z.act(&Permutation::transposition(k, i));
            for b in &basis {
                let m = ModuleVector::basis(b.clone());
                let back = y_apply(hecke, i, z, &m).and_then(|v| y_apply(hecke, i, &sz, &v));
                unit.expect(back.as_ref() == Ok(&m), || {
                    format!("point {n}, i={i}, u{b}")
                });
                if i + 1 < k {
                    let sides = ybe_sides(hecke, i, z, &m);
                    ybe.expect(matches!(&sides, Ok((l, r)) if l == r), || {
                        format!("point {n}, i={i}, u{b}")
                    });
                }
            }
        }
        let reversed: Vec<usize> = (1..k).rev().collect();
        let (a, b) = (
            build_cocycle(hecke, z),
            build_cocycle_ordered(hecke, z, &reversed),
        );
        tree.expect(matches!((&a, &b), (Ok(a), Ok(b)) if a == b), || {
            format!("point {n}")
        });

        let m = generic_vector(k, n_colors_of(&basis), n as i64 + 2);
        let Ok(bethe) = BetheFunction::new(hecke, z.clone(), &m) else {
            eig.expect(false, || format!("point {n} is resonant"));
            continue;
        };
        let e = bethe.eigenvalue();
        let h = bethe.to_function();
        for i in 1..k {
            let rh = rep.rho_t(i, &h).expect("valid");
            for x in window.points(k) {
                inv.eq(&rh.eval(&x), &h.eval(&x), || {
                    format!("point {n}, i={i}, x={x}")
                });
            }
        }
        for x in window.points(k) {
            let lhs = (1..=k).fold(hecke.zero(), |acc, j| acc.add(&h.eval(&x.minus_basis(j))));
            shift.eq(&lhs, &h.eval(&x).scale(&e), || format!("point {n}, x={x}"));
        }
        let dom = DominantFunction::restrict(&h);
        for x in window.dominant_points(k) {
            let lhs = ham.h_plus_apply(&dom, &x).expect("q != 1");
            eig.eq(&lhs, &dom.eval(&x).scale(&e), || {
                format!("point {n}, x={x}")
            });
        }
    }
    vec![
        unit.done(),
        ybe.done(),
        tree.done(),
        inv.done(),
        shift.done(),
        eig.done(),
    ]
}

fn n_colors_of(basis: &[ColorTuple]) -> u8 {
    basis
        .iter()
        .flat_map(|b| b.colors().iter().copied())
        .max()
        .unwrap_or(1)
}

/// `Q = phi^{-1} H^+ phi - k` on every indicator function over windowed
/// configurations. `corrupt` doubles color-1 rates on the generator side.
pub fn generator_identity(
    params: &QBosonParams<Rational>,
    hecke: Arc<Hecke<Rational>>,
    k: usize,
    n_colors: u8,
    window: Window,
    corrupt: bool,
) -> Check {
    let mut t = Tally::new(&format!(
        "qboson: generator = phi^-1 H^+ phi - k (k={k}, N={n_colors})"
    ));
    let ham = Hamiltonian::new(hecke);
    let states = configurations_in_window(k, n_colors, window);
    let kk = rat(k as i64, 1);
    for target in &states {
        let tg = target.clone();
        let indicator = move |c: &Configuration| {
            if *c == tg {
                Rational::one()
            } else {
                Rational::zero()
            }
        };
        let fh = phi_iso(params, n_colors, k, indicator.clone());
        let mut h_plus: std::collections::HashMap<LatticePoint, ModuleVector<Rational>> =
            Default::default();
        for cfg in &states {
            let here = indicator(cfg);
            let lhs = transitions(params, cfg)
                .into_iter()
                .fold(Rational::zero(), |acc, tr| {
                    let rate = if corrupt && tr.moved_color == 1 {
                        tr.rate * rat(2, 1)
                    } else {
                        tr.rate
                    };
                    acc + rate * (indicator(&tr.target) - here.clone())
                });
            let (x, _) = cfg.to_pair();
            let image = h_plus
                .entry(x.clone())
                .or_insert_with(|| ham.h_plus_apply(&fh, &x).expect("q != 1"))
                .clone();
            let img = DominantFunction::new(k, move |_x: &LatticePoint| image.clone());
            let rhs = phi_inv(params, &img, cfg) - kk.clone() * here;
            t.eq(&lhs, &rhs, || format!("h = 1[{target}] at {cfg}"));
        }
    }
    t.done()
}

/// Positivity, exit-rate identity and species conservation of the jumps.
pub fn rate_properties(
    params: &QBosonParams<Rational>,
    k: usize,
    n_colors: u8,
    window: Window,
) -> Vec<Check> {
    let mut pos = Tally::new("qboson: rates positive");
    let mut exit = Tally::new("qboson: exit rate = sum_a [c_a]_q");
    let mut cons = Tally::new("qboson: species conserved");
    for cfg in configurations_in_window(k, n_colors, window) {
        let moves = transitions(params, &cfg);
        let total = moves
            .iter()
            .fold(Rational::zero(), |acc, m| acc + m.rate.clone());
        exit.eq(&total, &exit_rate(params, &cfg), || format!("{cfg}"));
        for m in &moves {
            pos.expect(m.rate > Rational::zero(), || {
                format!("{cfg} color {}", m.moved_color)
            });
            cons.expect(m.target.species_counts() == cfg.species_counts(), || {
                format!("{cfg} -> {}", m.target)
            });
        }
    }
    vec![pos.done(), exit.done(), cons.done()]
}

/// With one color a cluster of `n` emits at rate `[n]_q = (1 - q^n)/(1 - q)`.
pub fn n1_reduction(params: &QBosonParams<Rational>, max_n: usize) -> Check {
    let mut t = Tally::new("qboson: N=1 rates are [n]_q = (1 - q^n)/(1 - q)");
    let q = params.q.clone();
    for n in 1..=max_n {
        let cfg = Configuration::new(1, [(0, vec![n as u32])]).expect("nonempty");
        let moves = transitions(params, &cfg);
        let scalar = (Rational::one() - q.powi(n as i64)) / (Rational::one() - q.clone());
        t.expect(
            moves.len() == 1 && moves[0].rate == q_integer(n, &q) && moves[0].rate == scalar,
            || format!("n={n}"),
        );
    }
    t.done()
}

//! The multi-species q-Boson process: configurations, the isomorphism `phi`
//! between functions on configurations and `script-F(L_+, U^{⊗k})`, jump
//! rates, a truncated generator and an exact-jump simulator.
//!
//! Throughout `alpha = -(1 - q)` and `0 < q < 1`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, ColorTuple, Hecke, ModuleVector, ScalarSpec};
use crate::hamiltonian::DominantFunction;
use crate::lattice::{cluster_coordinate, LatticeError, LatticePoint, Window};
use crate::scalar::{q_integer, RealScalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QBosonError {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    InvalidQ(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("cannot parse configuration {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("state space exceeds the cap of {0} configurations")]
    StateCap(usize),
    #[error("time must be positive and finite, got {0}")]
    InvalidTime(f64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `s` with `q = s^2`, constrained to `0 < q < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QBosonParams<S> {
    pub s: S,
    pub q: S,
}

impl<S: RealScalar> QBosonParams<S> {
    pub fn new(s: S) -> Result<Self, QBosonError> {
        let q = s.clone() * s.clone();
        if !(q > S::zero() && q < S::one()) {
            return Err(QBosonError::InvalidQ(q.to_f64()));
        }
        Ok(QBosonParams { s, q })
    }

    /// The parameters of the Hamiltonian whose conjugate is the generator.
    pub fn spec(&self) -> ScalarSpec<S> {
        ScalarSpec::q_boson(self.s.clone())
    }

    /// The Jimbo module `U^{⊗k}` at these parameters.
    pub fn hecke(&self, n_colors: u8, k: usize) -> Result<Hecke<S>, AlgebraError> {
        Hecke::jimbo(self.spec(), n_colors, k)
    }

    /// `[m_b]_q q^{m_{b+1} + ... + m_N}`: the rate at which a particle of
    /// color `b` leaves a cluster with color counts `m`.
    pub fn rate(&self, counts: &[u32], b: usize) -> S {
        let above: u32 = counts[b..].iter().sum();
        q_integer(counts[b - 1] as usize, &self.q) * self.q.powi(above as i64)
    }
}

/// Particles on `Z` by site: `sites[x][b-1]` is the number of color-`b`
/// particles at `x`. Empty sites are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    n_colors: u8,
    sites: BTreeMap<i64, Vec<u32>>,
}

impl Configuration {
    pub fn new(
        n_colors: u8,
        sites: impl IntoIterator<Item = (i64, Vec<u32>)>,
    ) -> Result<Self, QBosonError> {
        if n_colors == 0 {
            return Err(QBosonError::InvalidConfiguration(
                "at least one color is required".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (site, counts) in sites {
            if counts.len() != n_colors as usize {
                return Err(QBosonError::InvalidConfiguration(format!(
                    "site {site} has {} counts, expected {n_colors}",
                    counts.len()
                )));
            }
            if counts.iter().all(|&c| c == 0) {
                continue;
            }
            if map.insert(site, counts).is_some() {
                return Err(QBosonError::InvalidConfiguration(format!(
                    "site {site} listed twice"
                )));
            }
        }
        if map.is_empty() {
            return Err(QBosonError::InvalidConfiguration("no particles".into()));
        }
        Ok(Configuration {
            n_colors,
            sites: map,
        })
    }

    /// From the pair `(x, nu)` with `x` dominant and `nu = nu[x]`.
    pub fn from_pair(x: &LatticePoint, nu: &ColorTuple, n_colors: u8) -> Result<Self, QBosonError> {
        if x.k() != nu.len() {
            return Err(AlgebraError::LengthMismatch {
                expected: x.k(),
                got: nu.len(),
            }
            .into());
        }
        if mu_sort(x, nu)? != *nu {
            return Err(QBosonError::InvalidConfiguration(format!(
                "{nu} is not sorted within the clusters of {x}"
            )));
        }
        let mut sites: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
        for (&site, &color) in x.coords().iter().zip(nu.colors()) {
            if color == 0 || color > n_colors {
                return Err(AlgebraError::ColorOutOfRange { color, n_colors }.into());
            }
            sites
                .entry(site)
                .or_insert_with(|| vec![0; n_colors as usize])[color as usize - 1] += 1;
        }
        Ok(Configuration { n_colors, sites })
    }

    /// The pair `(x, nu)`: sites in weakly decreasing order, colors ascending within each site.
    pub fn to_pair(&self) -> (LatticePoint, ColorTuple) {
        let mut x = Vec::new();
        let mut nu = Vec::new();
        for (&site, counts) in self.sites.iter().rev() {
            for (b, &m) in counts.iter().enumerate() {
                for _ in 0..m {
                    x.push(site);
                    nu.push(b as u8 + 1);
                }
            }
        }
        (LatticePoint::new(x), ColorTuple::new(nu))
    }

    /// Parses `"2:1,2;-1:4;-3:2,2,3"`: `site:colors` groups separated by `;`.
    pub fn parse(literal: &str, n_colors: u8) -> Result<Self, QBosonError> {
        let err = |reason: String| QBosonError::Parse {
            literal: literal.to_string(),
            reason,
        };
        let mut sites = Vec::new();
        for group in literal.split(';').map(str::trim).filter(|g| !g.is_empty()) {
            let (site, colors) = group
                .split_once(':')
                .ok_or_else(|| err(format!("group {group:?} lacks a ':'")))?;
            let site: i64 = site
                .trim()
                .parse()
                .map_err(|e| err(format!("site {site:?}: {e}")))?;
            let mut counts = vec![0u32; n_colors as usize];
            for c in colors.split(',').map(str::trim) {
                let c: u8 = c.parse().map_err(|e| err(format!("color {c:?}: {e}")))?;
                if c == 0 || c > n_colors {
                    return Err(err(format!("color {c} outside 1..={n_colors}")));
                }
                counts[c as usize - 1] += 1;
            }
            sites.push((site, counts));
        }
        Self::new(n_colors, sites).map_err(|e| err(e.to_string()))
    }

    pub fn n_colors(&self) -> u8 {
        self.n_colors
    }

    /// Total number of particles.
    pub fn k(&self) -> usize {
        self.sites.values().flatten().map(|&m| m as usize).sum()
    }

    pub fn sites(&self) -> &BTreeMap<i64, Vec<u32>> {
        &self.sites
    }

    /// Number of particles of each color over the whole line.
    pub fn species_counts(&self) -> Vec<u32> {
        let mut total = vec![0; self.n_colors as usize];
        for counts in self.sites.values() {
            for (t, &m) in total.iter_mut().zip(counts) {
                *t += m;
            }
        }
        total
    }

    /// Moves one particle of color `b` from `site` to `site - 1`.
    pub fn moved(&self, site: i64, b: u8) -> Configuration {
        let mut sites = self.sites.clone();
        let src = sites.get_mut(&site).expect("occupied source site");
        src[b as usize - 1] -= 1;
        if src.iter().all(|&m| m == 0) {
            sites.remove(&site);
        }
        sites
            .entry(site - 1)
            .or_insert_with(|| vec![0; self.n_colors as usize])[b as usize - 1] += 1;
        Configuration {
            n_colors: self.n_colors,
            sites,
        }
    }

    /// Cluster sizes from the rightmost site leftwards.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.sites
            .values()
            .rev()
            .map(|c| c.iter().map(|&m| m as usize).sum())
            .collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (site, counts)) in self.sites.iter().rev().enumerate() {
            if n > 0 {
                write!(f, ";")?;
            }
            write!(f, "{site}:")?;
            let colors: Vec<String> = counts
                .iter()
                .enumerate()
                .flat_map(|(b, &m)| std::iter::repeat_n((b + 1).to_string(), m as usize))
                .collect();
            write!(f, "{}", colors.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = QBosonError;

    /// Parses the literal form, taking the number of colors to be the largest color present.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let max = s
            .split(';')
            .filter_map(|g| g.split_once(':'))
            .flat_map(|(_, cs)| cs.split(',').filter_map(|c| c.trim().parse::<u8>().ok()))
            .max()
            .unwrap_or(1);
        Self::parse(s, max.max(1))
    }
}

/// Serialized as `{"<site>": [m1, ..., mN], ...}`.
impl Serialize for Configuration {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut map = serializer.serialize_map(Some(self.sites.len()))?;
        for (site, counts) in &self.sites {
            map.serialize_entry(&site.to_string(), counts)?;
        }
        map.end()
    }
}

/// `mu[x]`: `mu` sorted ascending inside each cluster block of `x`.
pub fn mu_sort(x: &LatticePoint, mu: &ColorTuple) -> Result<ColorTuple, QBosonError> {
    if x.k() != mu.len() {
        return Err(AlgebraError::LengthMismatch {
            expected: x.k(),
            got: mu.len(),
        }
        .into());
    }
    let mut out = mu.colors().to_vec();
    let mut start = 0;
    for c in cluster_coordinate(x)? {
        out[start..start + c].sort_unstable();
        start += c;
    }
    Ok(ColorTuple::new(out))
}

/// `(phi h)(x) = sum_mu s^{l(mu)} h(x, mu[x]) u_mu`.
pub fn phi_iso<S: RealScalar>(
    params: &QBosonParams<S>,
    n_colors: u8,
    k: usize,
    h: impl Fn(&Configuration) -> S + Send + Sync + 'static,
) -> DominantFunction<S> {
    let s = params.s.clone();
    let tuples = ColorTuple::all(n_colors, k);
    DominantFunction::new(k, move |x| {
        let mut v = ModuleVector::zero(k);
        for mu in &tuples {
            let cfg = Configuration::from_pair(x, &mu_sort(x, mu).expect("dominant"), n_colors)
                .expect("valid pair");
            v.add_term(mu.clone(), s.powi(mu.inversions() as i64) * h(&cfg));
        }
        v
    })
}

/// `(phi^{-1} f)(x, nu)`: the coefficient of `u_nu` in `f(x)` divided by `s^{l(nu)}`.
pub fn phi_inv<S: RealScalar>(
    params: &QBosonParams<S>,
    f: &DominantFunction<S>,
    cfg: &Configuration,
) -> S {
    let (x, nu) = cfg.to_pair();
    f.eval(&x).coeff(&nu) / params.s.powi(nu.inversions() as i64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition<S> {
    pub target: Configuration,
    pub rate: S,
    pub moved_color: u8,
    pub source_site: i64,
}

/// Every admissible jump out of `cfg`: rightmost cluster first, colors ascending.
pub fn transitions<S: RealScalar>(
    params: &QBosonParams<S>,
    cfg: &Configuration,
) -> Vec<Transition<S>> {
    let mut out = Vec::new();
    for (&site, counts) in cfg.sites.iter().rev() {
        for b in 1..=counts.len() {
            if counts[b - 1] > 0 {
                out.push(Transition {
                    target: cfg.moved(site, b as u8),
                    rate: params.rate(counts, b),
                    moved_color: b as u8,
                    source_site: site,
                });
            }
        }
    }
    out
}

/// Total exit rate, `sum_a [c_a]_q` over the clusters.
pub fn exit_rate<S: RealScalar>(params: &QBosonParams<S>, cfg: &Configuration) -> S {
    cfg.cluster_sizes()
        .into_iter()
        .fold(S::zero(), |acc, c| acc + q_integer(c, &params.q))
}

/// `(Q h)(cfg) = sum over jumps of rate * (h(target) - h(cfg))`.
pub fn generator_apply<S: RealScalar>(
    params: &QBosonParams<S>,
    h: impl Fn(&Configuration) -> S,
    cfg: &Configuration,
) -> S {
    let here = h(cfg);
    transitions(params, cfg)
        .into_iter()
        .fold(S::zero(), |acc, t| {
            acc + t.rate * (h(&t.target) - here.clone())
        })
}

/// All configurations of `k` particles with `n_colors` colors whose sites lie in the window.
pub fn configurations_in_window(k: usize, n_colors: u8, window: Window) -> Vec<Configuration> {
    let mut out = Vec::new();
    for x in window.dominant_points(k) {
        for nu in ColorTuple::all(n_colors, k) {
            if mu_sort(&x, &nu).expect("dominant") == nu {
                out.push(Configuration::from_pair(&x, &nu, n_colors).expect("sorted pair"));
            }
        }
    }
    out
}

/// A generator restricted to the states reachable within a number of jumps.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix<S> {
    states: Vec<Configuration>,
    index: HashMap<Configuration, usize>,
    entries: BTreeMap<(usize, usize), S>,
    interior: Vec<bool>,
}

/// Default bound on the number of enumerated states.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Breadth-first enumeration from `seed` up to `depth` jumps. Rows of states
/// whose jumps all stay inside are interior and sum to zero; the diagonal is
/// always minus the full exit rate, so boundary rows leak the escaping mass.
pub fn build_generator<S: RealScalar>(
    params: &QBosonParams<S>,
    seed: &Configuration,
    depth: usize,
    cap: usize,
) -> Result<GeneratorMatrix<S>, QBosonError> {
    let mut states = vec![seed.clone()];
    let mut index = HashMap::from([(seed.clone(), 0)]);
    let mut level = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if level[i] == depth {
            continue;
        }
        for t in transitions(params, &states[i]) {
            if !index.contains_key(&t.target) {
                if states.len() >= cap {
                    return Err(QBosonError::StateCap(cap));
                }
                index.insert(t.target.clone(), states.len());
                states.push(t.target);
                level.push(level[i] + 1);
                queue.push_back(states.len() - 1);
            }
        }
    }
    let mut entries = BTreeMap::new();
    let mut interior = Vec::with_capacity(states.len());
    for (i, cfg) in states.iter().enumerate() {
        let mut inside = true;
        for t in transitions(params, cfg) {
            match index.get(&t.target) {
                Some(&j) => {
                    entries.insert((i, j), t.rate);
                }
                None => inside = false,
            }
        }
        entries.insert((i, i), -exit_rate(params, cfg));
        interior.push(inside);
    }
    Ok(GeneratorMatrix {
        states,
        index,
        entries,
        interior,
    })
}

impl<S: RealScalar> GeneratorMatrix<S> {
    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, cfg: &Configuration) -> Option<usize> {
        self.index.get(cfg).copied()
    }

    pub fn entry(&self, row: usize, col: usize) -> S {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &S)> {
        self.entries.iter()
    }

    pub fn is_interior(&self, row: usize) -> bool {
        self.interior[row]
    }

    pub fn row_sum(&self, row: usize) -> S {
        self.entries
            .range((row, 0)..=(row, usize::MAX))
            .fold(S::zero(), |acc, (_, v)| acc + v.clone())
    }

    /// Off-diagonal entries positive, every row sum at most zero, interior row
    /// sums zero up to `tol` (exactly zero in exact arithmetic).
    pub fn check_invariants(&self, tol: f64) -> Result<(), String> {
        for (&(i, j), v) in &self.entries {
            if i != j && *v <= S::zero() {
                return Err(format!("entry ({i}, {j}) = {v} is not positive"));
            }
        }
        for i in 0..self.len() {
            let sum = self.row_sum(i);
            if sum.to_f64() > tol {
                return Err(format!("row {i} sums to {sum} > 0"));
            }
            if self.interior[i] && !sum.negligible(tol) {
                return Err(format!("interior row {i} sums to {sum}"));
            }
        }
        Ok(())
    }

    /// `row,col,rate` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,rate\n");
        for (&(i, j), v) in &self.entries {
            out.push_str(&format!("{i},{j},{}\n", v.to_f64()));
        }
        out
    }

    /// `[{"index": i, "state": {...}}, ...]`.
    pub fn state_index_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.states
                .iter()
                .enumerate()
                .map(|(i, s)| serde_json::json!({"index": i, "state": s}))
                .collect(),
        )
    }

    /// `p(t) = p(0) exp(tQ)` by uniformization, starting from a point mass.
    /// Mass that leaves the enumerated states is dropped, so the entries sum
    /// to one minus the escaped mass.
    pub fn transient_distribution(&self, start: usize, t: f64) -> Vec<f64> {
        let n = self.len();
        let lambda = (0..n)
            .map(|i| -self.entry(i, i).to_f64())
            .fold(0.0, f64::max);
        let mut p = vec![0.0; n];
        p[start] = 1.0;
        if lambda == 0.0 || t == 0.0 {
            return p;
        }
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| {
                self.entries
                    .range((i, 0)..=(i, usize::MAX))
                    .map(|(&(_, j), v)| (j, v.to_f64() / lambda + if i == j { 1.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        let lt = lambda * t;
        let mut weight = (-lt).exp();
        let mut acc: Vec<f64> = p.iter().map(|v| v * weight).collect();
        let mut remaining = 1.0 - weight;
        let mut step = 0u32;
        while remaining > 1e-15 && step < 10_000 {
            step += 1;
            let mut next = vec![0.0; n];
            for (i, row) in rows.iter().enumerate() {
                if p[i] != 0.0 {
                    for &(j, v) in row {
                        next[j] += p[i] * v;
                    }
                }
            }
            p = next;
            weight *= lt / step as f64;
            remaining -= weight;
            for (a, v) in acc.iter_mut().zip(&p) {
                *a += weight * v;
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryEvent {
    pub t: f64,
    pub from_site: i64,
    pub color: u8,
    pub state: Configuration,
}

/// The random stream for trajectory `index` under `seed`: ChaCha8 seeded
/// with `seed`, stream number `index`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Exact-jump simulation up to `t_end`. Waiting times are `-ln(U)/R` with
/// `U = 1 - uniform[0,1)`; the jump is the first whose cumulative rate
/// exceeds `uniform[0,1) * R`.
pub fn simulate_with<R: Rng>(
    params: &QBosonParams<f64>,
    seed_cfg: &Configuration,
    t_end: f64,
    rng: &mut R,
    mut on_event: impl FnMut(&TrajectoryEvent),
) -> Result<Configuration, QBosonError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(QBosonError::InvalidTime(t_end));
    }
    let mut cfg = seed_cfg.clone();
    let mut t = 0.0;
    loop {
        let moves = transitions(params, &cfg);
        let total: f64 = moves.iter().map(|m| m.rate).sum();
        let u: f64 = 1.0 - rng.random::<f64>();
        t += -u.ln() / total;
        if t > t_end {
            return Ok(cfg);
        }
        let mut target = rng.random::<f64>() * total;
        let mut chosen = moves.len() - 1;
        for (i, m) in moves.iter().enumerate() {
            if target < m.rate {
                chosen = i;
                break;
            }
            target -= m.rate;
        }
        let m = moves.into_iter().nth(chosen).expect("nonempty");
        cfg = m.target;
        on_event(&TrajectoryEvent {
            t,
            from_site: m.source_site,
            color: m.moved_color,
            state: cfg.clone(),
        });
    }
}

/// A full trajectory for `(seed, stream 0)`.
pub fn simulate(
    params: &QBosonParams<f64>,
    seed_cfg: &Configuration,
    t_end: f64,
    seed: u64,
) -> Result<Vec<TrajectoryEvent>, QBosonError> {
    let mut events = Vec::new();
    simulate_with(params, seed_cfg, t_end, &mut trajectory_rng(seed, 0), |e| {
        events.push(e.clone())
    })?;
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn params() -> QBosonParams<Rational> {
        QBosonParams::new(rat(1, 2)).unwrap()
    }

    fn tuple(c: &[u8]) -> ColorTuple {
        ColorTuple::new(c.to_vec())
    }

    #[test]
    fn mu_sort_examples() {
        let x = LatticePoint::new(vec![2, 2, -1, -1, -1]);
        assert_eq!(
            mu_sort(&x, &tuple(&[3, 1, 4, 2, 5])).unwrap(),
            tuple(&[1, 3, 2, 4, 5])
        );
        assert_eq!(
            mu_sort(&x, &tuple(&[1, 3, 2, 4, 5])).unwrap(),
            tuple(&[1, 3, 2, 4, 5])
        );
        let y = LatticePoint::new(vec![3, 1, 0]);
        assert_eq!(mu_sort(&y, &tuple(&[2, 1, 1])).unwrap(), tuple(&[2, 1, 1]));
        assert!(mu_sort(&y, &tuple(&[1, 2])).is_err());
    }

    #[test]
    fn figure_configuration_round_trip() {
        let cfg = Configuration::parse("2:1,2;-1:4;-3:2,2,3", 4).unwrap();
        let (x, nu) = cfg.to_pair();
        assert_eq!(x, LatticePoint::new(vec![2, 2, -1, -3, -3, -3]));
        assert_eq!(nu, tuple(&[1, 2, 4, 2, 2, 3]));
        assert_eq!(Configuration::from_pair(&x, &nu, 4).unwrap(), cfg);
        assert_eq!(cfg.to_string(), "2:1,2;-1:4;-3:2,2,3");
        assert_eq!(cfg.to_string().parse::<Configuration>().unwrap(), cfg);
        assert_eq!(
            serde_json::to_string(&cfg).unwrap(),
            r#"{"-3":[0,2,1,0],"-1":[0,0,0,1],"2":[1,1,0,0]}"#
        );
        assert!(Configuration::from_pair(&x, &tuple(&[2, 1, 4, 2, 2, 3]), 4).is_err());
        assert!(Configuration::parse("1:5", 4).is_err());
        assert!(Configuration::parse("1;2", 4).is_err());
    }

    #[test]
    fn rates_examples() {
        let p = params();
        let single = Configuration::parse("0:1,1,1,1", 1).unwrap();
        let t = transitions(&p, &single);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].rate, q_integer(4, &p.q));

        let cfg = Configuration::parse("0:2,2,3", 3).unwrap();
        let t = transitions(&p, &cfg);
        assert_eq!(
            t.iter()
                .map(|t| (t.moved_color, t.rate.clone()))
                .collect::<Vec<_>>(),
            vec![(2, rat(5, 16)), (3, rat(1, 1))]
        );

        let cfg = Configuration::parse("0:1,2,2", 2).unwrap();
        let t = transitions(&p, &cfg);
        assert_eq!(t[0].rate, rat(1, 16));
        assert_eq!(t[1].rate, rat(5, 4));
        assert_eq!(exit_rate(&p, &cfg), rat(21, 16));
    }

    #[test]
    fn merging_and_new_clusters() {
        let p = params();
        let cfg = Configuration::parse("1:1,2;0:2", 2).unwrap();
        let targets: Vec<String> = transitions(&p, &cfg)
            .into_iter()
            .map(|t| t.target.to_string())
            .collect();
        assert_eq!(targets, ["1:2;0:1,2", "1:1;0:2,2", "1:1,2;-1:2"]);
    }

    #[test]
    fn phi_examples() {
        let p = params();
        let target = Configuration::parse("0:1,2", 2).unwrap();
        let t2 = target.clone();
        let f = phi_iso(
            &p,
            2,
            2,
            move |c| if *c == t2 { rat(1, 1) } else { rat(0, 1) },
        );
        let v = f.eval(&LatticePoint::new(vec![0, 0]));
        let expected =
            ModuleVector::basis(tuple(&[1, 2])).add(&ModuleVector::term(tuple(&[2, 1]), rat(1, 2)));
        assert_eq!(v, expected);
        assert_eq!(phi_inv(&p, &f, &target), rat(1, 1));

        let g = DominantFunction::new(2, |_x: &LatticePoint| {
            ModuleVector::term(tuple(&[2, 1]), rat(1, 2))
        });
        let cfg =
            Configuration::from_pair(&LatticePoint::new(vec![1, 0]), &tuple(&[2, 1]), 2).unwrap();
        assert_eq!(phi_inv(&p, &g, &cfg), rat(1, 1));
    }

    #[test]
    fn generator_examples() {
        let p = params();
        let cfg = Configuration::parse("3:1,2;0:2", 2).unwrap();
        assert_eq!(generator_apply(&p, |_| rat(7, 3), &cfg), rat(0, 1));
        let t = transitions(&p, &cfg);
        let target = t[1].target.clone();
        assert_eq!(
            generator_apply(
                &p,
                |c| if *c == target { rat(1, 1) } else { rat(0, 1) },
                &cfg
            ),
            t[1].rate
        );

        let g = build_generator(&p, &cfg, 0, 10).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.entry(0, 0), -(q_integer(2, &p.q) + rat(1, 1)));

        let one = Configuration::parse("0:1", 1).unwrap();
        let g = build_generator(&p, &one, 3, 10).unwrap();
        assert_eq!(g.len(), 4);
        for i in 0..4 {
            assert_eq!(g.entry(i, i), rat(-1, 1));
            if i < 3 {
                assert_eq!(g.entry(i, i + 1), rat(1, 1));
                assert_eq!(g.row_sum(i), rat(0, 1));
            }
        }
        assert!(g.check_invariants(0.0).is_ok());
        assert!(matches!(
            build_generator(&p, &cfg, 5, 3),
            Err(QBosonError::StateCap(3))
        ));
        assert!(g.to_csv().starts_with("row,col,rate\n0,0,-1\n0,1,1\n"));
    }

    #[test]
    fn invalid_q_rejected() {
        assert!(QBosonParams::new(rat(1, 1)).is_err());
        assert!(QBosonParams::new(rat(0, 1)).is_err());
        assert!(QBosonParams::new(1.5f64).is_err());
    }

    #[test]
    fn simulation_is_deterministic() {
        let p = QBosonParams::new(0.5).unwrap();
        let cfg = Configuration::parse("0:1,2", 2).unwrap();
        let a = simulate(&p, &cfg, 3.0, 11).unwrap();
        let b = simulate(&p, &cfg, 3.0, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].t < w[1].t));
        assert!(simulate(&p, &cfg, 0.0, 1).is_err());
        // A first waiting time beyond a tiny horizon leaves no events.
        assert!(simulate(&p, &cfg, 1e-12, 3).unwrap().is_empty());
    }
}

//! Type A Weyl group combinatorics on the lattice `L = Z^k`.
//!
//! Indices follow the mathematical convention: basis vectors `v_1..v_k`,
//! simple reflections `s_1..s_{k-1}`. A Weyl element `w` is stored as the
//! permutation `sigma` with `w v_i = v_{sigma(i)}`, so `(w x)[sigma(i)] = x[i]`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("point {0} is not dominant")]
    NotDominant(LatticePoint),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("particle count must be at least {min}, got {got}")]
    TooFewParticles { min: usize, got: usize },
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
}

fn check_index(index: usize, max: usize) -> Result<(), LatticeError> {
    if index == 0 || index > max {
        Err(LatticeError::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}

/// A point of `L = Z^k`; `coords[i-1]` is the coefficient of `v_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(k: usize) -> Self {
        LatticePoint(vec![0; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `epsilon_i(x)`, 1-based.
    pub fn epsilon(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    /// Value of the simple root `a_i = epsilon_i - epsilon_{i+1}`.
    pub fn simple_root(&self, i: usize) -> i64 {
        self.0[i - 1] - self.0[i]
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// `x + delta * v_i`.
    pub fn shifted(&self, i: usize, delta: i64) -> Self {
        let mut c = self.0.clone();
        c[i - 1] += delta;
        LatticePoint(c)
    }

    /// `x - v_i`.
    pub fn minus_basis(&self, i: usize) -> Self {
        self.shifted(i, -1)
    }

    /// `x + l * a_j^vee` where `a_j^vee = v_j - v_{j+1}`.
    pub fn plus_coroot(&self, j: usize, l: i64) -> Self {
        let mut c = self.0.clone();
        c[j - 1] += l;
        c[j] -= l;
        LatticePoint(c)
    }

    /// The simple reflection `s_i x` (swap of coordinates `i`, `i+1`), unchecked.
    pub fn swapped(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c.swap(i - 1, i);
        LatticePoint(c)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for LatticePoint {
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

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

/// A word in the simple reflections `s_1..s_{k-1}`: `letters = [i_1,..,i_l]`
/// stands for `s_{i_1} ... s_{i_l}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylWord(Vec<usize>);

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        WeylWord(letters)
    }

    pub fn empty() -> Self {
        WeylWord(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &WeylWord) -> WeylWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        WeylWord(v)
    }

    pub fn reversed(&self) -> WeylWord {
        WeylWord(self.0.iter().rev().copied().collect())
    }

    /// Checks every letter lies in `1..k`.
    pub fn validate(&self, k: usize) -> Result<(), LatticeError> {
        self.0
            .iter()
            .try_for_each(|&i| check_index(i, k.saturating_sub(1)))
    }

    pub fn to_permutation(&self, k: usize) -> Result<Permutation, LatticeError> {
        self.validate(k)?;
        let mut p = Permutation::identity(k);
        for &i in &self.0 {
            p = p.compose(&Permutation::transposition(k, i));
        }
        Ok(p)
    }

    /// Acts on a point: `s_{i_1}( ... s_{i_l}(x))`.
    pub fn act(&self, x: &LatticePoint) -> LatticePoint {
        self.0.iter().rev().fold(x.clone(), |p, &i| p.swapped(i))
    }

    /// Acts by the inverse element: `s_{i_l}( ... s_{i_1}(x))`.
    pub fn act_inverse(&self, x: &LatticePoint) -> LatticePoint {
        self.0.iter().fold(x.clone(), |p, &i| p.swapped(i))
    }

    pub fn is_reduced(&self, k: usize) -> bool {
        self.to_permutation(k)
            .map(|p| p.length() == self.len())
            .unwrap_or(false)
    }
}

/// A bijection of `{1..k}`; `images[i-1] = sigma(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, LatticeError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &v in &images {
            if v == 0 || v > k || seen[v - 1] {
                return Err(LatticeError::NotAPermutation(images));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((1..=k).collect())
    }

    /// The transposition `(i, i+1)`, i.e. the permutation of `s_i`.
    pub fn transposition(k: usize, i: usize) -> Self {
        let mut p = Self::identity(k);
        p.0.swap(i - 1, i);
        p
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j - 1]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Inversion number, which is the Coxeter length of the Weyl element.
    pub fn length(&self) -> usize {
        let p = &self.0;
        (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// The element acting on a point: `result[sigma(i)] = x[i]`.
    pub fn act(&self, x: &LatticePoint) -> LatticePoint {
        let mut c = vec![0; x.k()];
        for (i, &v) in self.0.iter().enumerate() {
            c[v - 1] = x.0[i];
        }
        LatticePoint(c)
    }

    /// A reduced word for this element, obtained by bubble sort.
    pub fn reduced_word(&self) -> WeylWord {
        // Sorting `images` to the identity by adjacent swaps on positions
        // applies right multiplications by s_j; the recorded swaps reversed
        // spell the element.
        let mut p = self.0.clone();
        let mut swaps = Vec::new();
        let n = p.len();
        for pass in 0..n {
            for j in 0..n.saturating_sub(1 + pass) {
                if p[j] > p[j + 1] {
                    p.swap(j, j + 1);
                    swaps.push(j + 1);
                }
            }
        }
        swaps.reverse();
        WeylWord(swaps)
    }

    /// All permutations of `{1..k}` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == k {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 1..=k {
                if !used[v - 1] {
                    used[v - 1] = true;
                    cur.push(v);
                    rec(k, cur, used, out);
                    cur.pop();
                    used[v - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(k, &mut Vec::new(), &mut vec![false; k], &mut out);
        out
    }
}

/// `s_i x`, checked.
pub fn reflect(i: usize, x: &LatticePoint) -> Result<LatticePoint, LatticeError> {
    check_index(i, x.k().saturating_sub(1))?;
    Ok(x.swapped(i))
}

/// `I(x)` as index pairs `(i, j)`, `i < j`, with `x_i < x_j`.
pub fn inversion_set(x: &LatticePoint) -> BTreeSet<(usize, usize)> {
    let c = x.coords();
    let mut out = BTreeSet::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if c[i] < c[j] {
                out.insert((i + 1, j + 1));
            }
        }
    }
    out
}

/// The shortest Weyl element `w_x` moving `x` into the dominant chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantForm {
    pub word: WeylWord,
    pub sigma: Permutation,
    pub dominant: LatticePoint,
}

pub fn shortest_to_dominant(x: &LatticePoint) -> DominantForm {
    let k = x.k();
    let mut c = x.coords().to_vec();
    // Stable bubble sort into weakly decreasing order: only strict
    // ascents are swapped, so equal coordinates keep their order.
    let mut swaps = Vec::new();
    for pass in 0..k {
        for j in 0..k.saturating_sub(1 + pass) {
            if c[j] < c[j + 1] {
                c.swap(j, j + 1);
                swaps.push(j + 1);
            }
        }
    }
    swaps.reverse();
    let word = WeylWord(swaps);
    let sigma = word
        .to_permutation(k)
        .expect("bubble sort letters are in range");
    DominantForm {
        word,
        sigma,
        dominant: LatticePoint(c),
    }
}

/// `(d_i^-(x), d_i^+(x))`: how many coordinates before / after position `i`
/// equal `x_i`.
pub fn d_pm(x: &LatticePoint, i: usize) -> Result<(usize, usize), LatticeError> {
    check_index(i, x.k())?;
    let e = x.epsilon(i);
    let c = x.coords();
    let minus = c[..i - 1].iter().filter(|&&v| v == e).count();
    let plus = c[i..].iter().filter(|&&v| v == e).count();
    Ok((minus, plus))
}

/// Run lengths of equal consecutive coordinates of a dominant point.
pub fn cluster_coordinate(x: &LatticePoint) -> Result<Vec<usize>, LatticeError> {
    if !x.is_dominant() {
        return Err(LatticeError::NotDominant(x.clone()));
    }
    let mut out: Vec<usize> = Vec::new();
    let c = x.coords();
    for (n, v) in c.iter().enumerate() {
        if n > 0 && c[n - 1] == *v {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
    }
    Ok(out)
}

/// The cube `[lo, hi]^k` of lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    pub fn symmetric(radius: i64) -> Self {
        Window {
            lo: -radius,
            hi: radius,
        }
    }

    pub fn points(&self, k: usize) -> Vec<LatticePoint> {
        let mut out = vec![Vec::with_capacity(k)];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (self.lo..=self.hi).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(LatticePoint).collect()
    }

    pub fn dominant_points(&self, k: usize) -> Vec<LatticePoint> {
        self.points(k)
            .into_iter()
            .filter(|x| x.is_dominant())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec())
    }

    /// Brute force: the shortest Weyl element sending `x` to a dominant point.
    fn brute_shortest(x: &LatticePoint) -> Permutation {
        Permutation::all(x.k())
            .into_iter()
            .filter(|s| s.act(x).is_dominant())
            .min_by_key(|s| s.length())
            .unwrap()
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(1, &p(&[3, 3])).unwrap(), p(&[3, 3]));
        assert_eq!(reflect(1, &p(&[0, 1])).unwrap(), p(&[1, 0]));
        assert_eq!(
            reflect(2, &p(&[2, 2, -1, -3, -3])).unwrap(),
            p(&[2, -1, 2, -3, -3])
        );
        assert!(matches!(
            reflect(2, &p(&[0, 1])),
            Err(LatticeError::IndexOutOfRange { .. })
        ));
        assert!(reflect(0, &p(&[0, 1])).is_err());
    }

    #[test]
    fn inversion_set_examples() {
        assert!(inversion_set(&p(&[5, 2, 0])).is_empty());
        assert_eq!(
            inversion_set(&p(&[0, 1])).into_iter().collect::<Vec<_>>(),
            vec![(1, 2)]
        );
        assert_eq!(
            inversion_set(&p(&[0, 1, 2]))
                .into_iter()
                .collect::<Vec<_>>(),
            vec![(1, 2), (1, 3), (2, 3)]
        );
    }

    #[test]
    fn shortest_to_dominant_examples() {
        let f = shortest_to_dominant(&p(&[5, 2, 0]));
        assert!(f.word.is_empty());
        assert!(f.sigma.is_identity());
        assert_eq!(f.dominant, p(&[5, 2, 0]));

        let f = shortest_to_dominant(&p(&[0, 1]));
        assert_eq!(f.word, WeylWord::new(vec![1]));
        assert_eq!(f.sigma.images(), &[2, 1]);
        assert_eq!(f.dominant, p(&[1, 0]));

        let x = p(&[-1, 2, 2]);
        let f = shortest_to_dominant(&x);
        assert_eq!(f.dominant, p(&[2, 2, -1]));
        assert_eq!(f.sigma.apply(1), 3);
        assert_eq!(f.word.len(), 2);
        let brute = brute_shortest(&x);
        assert_eq!(brute, f.sigma);
        assert_eq!(brute.length(), 2);
    }

    #[test]
    fn d_pm_examples() {
        let x = p(&[2, 2, -1, -3, -3]);
        assert_eq!(d_pm(&x, 1).unwrap(), (0, 1));
        assert_eq!(d_pm(&x, 3).unwrap(), (0, 0));
        assert_eq!(d_pm(&x, 5).unwrap(), (1, 0));
        assert!(d_pm(&x, 6).is_err());
    }

    #[test]
    fn cluster_coordinate_examples() {
        assert_eq!(
            cluster_coordinate(&p(&[2, 2, -1, -3, -3])).unwrap(),
            vec![2, 1, 2]
        );
        assert_eq!(cluster_coordinate(&p(&[3, 2, 1])).unwrap(), vec![1, 1, 1]);
        assert_eq!(cluster_coordinate(&p(&[0, 0, 0, 0])).unwrap(), vec![4]);
        assert!(matches!(
            cluster_coordinate(&p(&[0, 1])),
            Err(LatticeError::NotDominant(_))
        ));
    }

    #[test]
    fn word_and_permutation_agree() {
        for k in 2..=4 {
            for sigma in Permutation::all(k) {
                let w = sigma.reduced_word();
                assert_eq!(w.len(), sigma.length());
                assert_eq!(w.to_permutation(k).unwrap(), sigma);
                let x = p(&(0..k as i64).map(|v| 10 * v + 1).collect::<Vec<_>>());
                assert_eq!(w.act(&x), sigma.act(&x));
                assert_eq!(w.act_inverse(&w.act(&x)), x);
            }
        }
    }

    /// Exhaustive check of the shortest-element properties over `[-3,3]^k`.
    #[test]
    fn shortest_element_properties_exhaustive() {
        for k in 2..=4 {
            for x in Window::symmetric(3).points(k) {
                let fx = shortest_to_dominant(&x);
                assert_eq!(fx.word.len(), inversion_set(&x).len());
                assert!(fx.dominant.is_dominant());
                assert_eq!(fx.sigma.act(&x), fx.dominant);
                assert_eq!(fx.word.act(&x), fx.dominant);
                assert_eq!(brute_shortest(&x), fx.sigma, "x = {x}");

                for i in 1..k {
                    let a = x.simple_root(i);
                    if a > 0 {
                        let y = x.swapped(i);
                        let fy = shortest_to_dominant(&y);
                        let mut expected = fx.word.clone();
                        expected.push(i);
                        assert_eq!(fy.sigma, expected.to_permutation(k).unwrap());
                        assert_eq!(fy.word.len(), fx.word.len() + 1);
                    }
                    if a == 0 {
                        let si = fx.sigma.apply(i);
                        assert_eq!(fx.sigma.apply(i + 1), si + 1);
                        let lhs = fx.sigma.compose(&Permutation::transposition(k, i));
                        let rhs = Permutation::transposition(k, si).compose(&fx.sigma);
                        assert_eq!(lhs, rhs);
                        assert_eq!(lhs.length(), fx.sigma.length() + 1);
                    }
                }

                for i in 1..=k {
                    let (dm, dp) = d_pm(&x, i).unwrap();
                    let s = fx.sigma.apply(i);
                    assert_eq!(d_pm(&fx.dominant, s).unwrap(), (dm, dp));
                    assert_eq!(x.epsilon(i), fx.dominant.epsilon(s));

                    let y = x.minus_basis(i);
                    let fy = shortest_to_dominant(&y);
                    let (dm_y, _) = d_pm(&y, i).unwrap();
                    assert_eq!(dm_y + fy.word.len(), dp + fx.word.len());
                    assert_eq!(fy.dominant, fx.dominant.minus_basis(s + dp));
                    for j in s..s + dp {
                        assert_eq!(fx.dominant.simple_root(j), 0);
                    }
                    let sy = fy.sigma.apply(i);
                    for j in sy - dm_y..sy {
                        assert_eq!(fy.dominant.simple_root(j), 0);
                    }
                    // s_{σ_y(i)-d} ... s_{σ_y(i)-1} w_y = s_{σ_x(i)+d^+-1} ... s_{σ_x(i)} w_x
                    let lhs = (sy - dm_y..sy).rev().fold(fy.sigma.clone(), |acc, j| {
                        Permutation::transposition(k, j).compose(&acc)
                    });
                    let rhs = (s..s + dp).fold(fx.sigma.clone(), |acc, j| {
                        Permutation::transposition(k, j).compose(&acc)
                    });
                    assert_eq!(lhs, rhs, "x = {x}, i = {i}");
                }
            }
        }
    }

    #[test]
    fn windows() {
        assert_eq!(Window::symmetric(1).points(2).len(), 9);
        assert_eq!(Window::symmetric(2).dominant_points(3).len(), 35);
    }
}

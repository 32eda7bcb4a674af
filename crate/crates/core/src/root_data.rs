//! Root systems of rank at most two, their integral weight lattices and Weyl
//! groups.
//!
//! Weights are stored in the basis of fundamental weights, so the pairing of a
//! weight with the coroot of the `i`-th simple root is simply its `i`-th
//! coordinate. Coordinates in the basis of simple roots are rational in
//! general (type A2 has thirds) and are computed on demand.
//!
//! Conventions used throughout the crate:
//!
//! * simple root `0` is called `alpha` and its reflection `s`; simple root `1`
//!   is called `beta` and its reflection `t`,
//! * for A2, `alpha = [2,-1]`, `beta = [-1,2]` and `rho = [1,1]`,
//! * a word such as `st` denotes the product `s * t`, acting on weights as
//!   "first `t`, then `s`".

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coverage::{self, Op};

pub const MAX_RANK: usize = 2;

type Mat = [[i64; MAX_RANK]; MAX_RANK];

const IDENTITY: Mat = [[1, 0], [0, 1]];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[0; MAX_RANK]; MAX_RANK];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..MAX_RANK).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unknown root system type `{0}` (expected a1, a1a1 or a2)")]
    UnknownType(String),
    #[error("weight {weight} has rank {got}, expected rank {expected}")]
    RankMismatch {
        weight: String,
        got: usize,
        expected: usize,
    },
    #[error("unknown parabolic `{0}`")]
    UnknownParabolic(String),
    #[error("`{0}` is not a word in the simple reflections")]
    BadWord(String),
}

/// An integral weight, in fundamental-weight coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: [i64; MAX_RANK],
    rank: u8,
}

impl Weight {
    pub fn new(coords: &[i64]) -> Self {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_RANK,
            "weights have between 1 and {MAX_RANK} coordinates"
        );
        let mut c = [0; MAX_RANK];
        c[..coords.len()].copy_from_slice(coords);
        Weight {
            coords: c,
            rank: coords.len() as u8,
        }
    }

    pub fn zero(rank: usize) -> Self {
        Weight::new(&vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.rank as usize]
    }

    /// `<self, alpha_i^vee>`.
    pub fn pairing(&self, i: usize) -> i64 {
        self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        self += rhs;
        self
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        debug_assert_eq!(self.rank, rhs.rank);
        for i in 0..MAX_RANK {
            self.coords[i] += rhs.coords[i];
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        self -= rhs;
        self
    }
}

impl SubAssign for Weight {
    fn sub_assign(&mut self, rhs: Weight) {
        debug_assert_eq!(self.rank, rhs.rank);
        for i in 0..MAX_RANK {
            self.coords[i] -= rhs.coords[i];
        }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(mut self) -> Weight {
        for c in self.coords.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<Weight> for i64 {
    type Output = Weight;
    fn mul(self, mut rhs: Weight) -> Weight {
        for c in rhs.coords.iter_mut() {
            *c *= self;
        }
        rhs
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<i64>::deserialize(deserializer)?;
        if coords.is_empty() || coords.len() > MAX_RANK {
            return Err(serde::de::Error::custom(format!(
                "a weight has 1 to {MAX_RANK} coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Weight::new(&coords))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootType {
    A1,
    A1xA1,
    A2,
}

impl RootType {
    pub fn rank(self) -> usize {
        match self {
            RootType::A1 => 1,
            RootType::A1xA1 | RootType::A2 => 2,
        }
    }
}

impl FromStr for RootType {
    type Err = RootDataError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(RootType::A1),
            "a1a1" | "a1xa1" => Ok(RootType::A1xA1),
            "a2" => Ok(RootType::A2),
            other => Err(RootDataError::UnknownType(other.to_string())),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::A1 => "a1",
            RootType::A1xA1 => "a1a1",
            RootType::A2 => "a2",
        })
    }
}

/// Element of the Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElem {
    index: usize,
    /// Lexicographically smallest reduced word.
    reduced_word: Vec<usize>,
    matrix: Mat,
    length: usize,
}

const LETTERS: [char; MAX_RANK] = ['s', 't'];

impl WeylElem {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn reduced_word(&self) -> &[usize] {
        &self.reduced_word
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Ordinary (linear) action on a weight.
    pub fn apply(&self, w: Weight) -> Weight {
        let mut out = [0; MAX_RANK];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..MAX_RANK).map(|k| self.matrix[i][k] * w.coords[k]).sum();
        }
        Weight {
            coords: out,
            rank: w.rank,
        }
    }

    /// `e` for the identity, otherwise the reduced word in the letters `s`, `t`.
    pub fn name(&self) -> String {
        if self.reduced_word.is_empty() {
            "e".to_string()
        } else {
            self.reduced_word.iter().map(|&i| LETTERS[i]).collect()
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElem>,
    by_matrix: HashMap<Mat, usize>,
    // bruhat[x][y] == (x <= y)
    bruhat: Vec<Vec<bool>>,
    mul: Vec<Vec<usize>>,
    rank: usize,
}

impl WeylGroup {
    fn generate(reflections: &[Mat]) -> Self {
        let rank = reflections.len();
        let mut elements: Vec<(Vec<usize>, Mat)> = vec![(vec![], IDENTITY)];
        let mut by_matrix = HashMap::from([(IDENTITY, 0)]);
        let mut lengths = vec![0usize];
        let mut frontier = vec![0usize];
        let mut len = 0;
        while !frontier.is_empty() {
            len += 1;
            let mut next = Vec::new();
            for &idx in &frontier {
                for (i, refl) in reflections.iter().enumerate() {
                    let m = mat_mul(refl, &elements[idx].1);
                    if by_matrix.contains_key(&m) {
                        continue;
                    }
                    let mut word = vec![i];
                    word.extend_from_slice(&elements[idx].0);
                    by_matrix.insert(m, elements.len());
                    next.push(elements.len());
                    elements.push((word, m));
                    lengths.push(len);
                }
            }
            frontier = next;
        }

        let n = elements.len();
        let mut mul = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                mul[a][b] = by_matrix[&mat_mul(&elements[a].1, &elements[b].1)];
            }
        }
        let simple_idx: Vec<usize> = reflections.iter().map(|m| by_matrix[m]).collect();

        let mut group = WeylGroup {
            elements: elements
                .into_iter()
                .enumerate()
                .map(|(index, (word, matrix))| WeylElem {
                    index,
                    reduced_word: word,
                    matrix,
                    length: lengths[index],
                })
                .collect(),
            by_matrix,
            bruhat: vec![],
            mul,
            rank,
        };

        for idx in 0..n {
            let words = group.reduced_words_of(idx, &simple_idx);
            group.elements[idx].reduced_word = words.into_iter().min().unwrap_or_default();
        }

        // Subword property: x <= y iff x is a product of a subword of any
        // fixed reduced word of y.
        let mut bruhat = vec![vec![false; n]; n];
        for y in 0..n {
            let word = group.elements[y].reduced_word.clone();
            for mask in 0u32..(1 << word.len()) {
                let mut x = 0;
                for (pos, &letter) in word.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        x = group.mul[x][simple_idx[letter]];
                    }
                }
                bruhat[x][y] = true;
            }
        }
        group.bruhat = bruhat;
        group
    }

    fn reduced_words_of(&self, idx: usize, simple_idx: &[usize]) -> Vec<Vec<usize>> {
        if self.elements[idx].length == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &s) in simple_idx.iter().enumerate() {
            let shorter = self.mul[s][idx];
            if self.elements[shorter].length < self.elements[idx].length {
                for mut w in self.reduced_words_of(shorter, simple_idx) {
                    w.insert(0, i);
                    out.push(w);
                }
            }
        }
        out
    }

    /// All reduced words of an element.
    pub fn reduced_words(&self, x: &WeylElem) -> Vec<Vec<usize>> {
        let simple_idx: Vec<usize> = (0..self.rank).map(|i| self.simple(i).index).collect();
        let mut words = self.reduced_words_of(x.index, &simple_idx);
        words.sort();
        words
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElem] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> &WeylElem {
        &self.elements[index]
    }

    pub fn identity(&self) -> &WeylElem {
        &self.elements[0]
    }

    pub fn simple(&self, i: usize) -> &WeylElem {
        self.elements
            .iter()
            .find(|e| e.reduced_word == [i])
            .expect("simple reflection present")
    }

    pub fn longest(&self) -> &WeylElem {
        self.elements
            .iter()
            .max_by_key(|e| e.length)
            .expect("nonempty group")
    }

    pub fn mul(&self, a: &WeylElem, b: &WeylElem) -> &WeylElem {
        &self.elements[self.mul[a.index][b.index]]
    }

    pub fn inverse(&self, a: &WeylElem) -> &WeylElem {
        let idx = (0..self.len())
            .find(|&b| self.mul[a.index][b] == 0)
            .expect("group element has an inverse");
        &self.elements[idx]
    }

    /// Element with the given word; `e` (or the empty string) is the identity.
    /// Words need not be reduced.
    pub fn from_word(&self, word: &str) -> Result<&WeylElem, RootDataError> {
        let mut m = IDENTITY;
        if word != "e" {
            for ch in word.chars() {
                let i = LETTERS[..self.rank]
                    .iter()
                    .position(|&l| l == ch)
                    .ok_or_else(|| RootDataError::BadWord(word.to_string()))?;
                m = mat_mul(&m, &self.simple(i).matrix);
            }
        }
        Ok(&self.elements[self.by_matrix[&m]])
    }

    pub fn bruhat_leq(&self, x: &WeylElem, y: &WeylElem) -> bool {
        coverage::hit(Op::BruhatLeq);
        self.bruhat[x.index][y.index]
    }
}

/// A root system of type A1, A1 x A1 or A2 together with its Weyl group.
#[derive(Clone, Debug)]
pub struct RootSystem {
    root_type: RootType,
    rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`.
    cartan: Mat,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    rho: Weight,
    det: i64,
    // det * (C^T)^{-1}: maps fundamental coordinates to det * root coordinates
    adj: Mat,
    weyl: WeylGroup,
}

impl RootSystem {
    pub fn new(root_type: RootType) -> Self {
        let rank = root_type.rank();
        let cartan: Mat = match root_type {
            RootType::A1 => [[2, 0], [0, 1]],
            RootType::A1xA1 => [[2, 0], [0, 2]],
            RootType::A2 => [[2, -1], [-1, 2]],
        };
        let simple_roots: Vec<Weight> =
            (0..rank).map(|i| Weight::new(&cartan[i][..rank])).collect();
        let positive_roots = match root_type {
            RootType::A2 => vec![
                simple_roots[0],
                simple_roots[1],
                simple_roots[0] + simple_roots[1],
            ],
            _ => simple_roots.clone(),
        };
        let (det, adj) = if rank == 1 {
            (2, [[1, 0], [0, 0]])
        } else {
            let c = cartan;
            (
                c[0][0] * c[1][1] - c[0][1] * c[1][0],
                [[c[1][1], -c[1][0]], [-c[0][1], c[0][0]]],
            )
        };

        let reflections: Vec<Mat> = (0..rank)
            .map(|i| {
                // s_i(x) = x - x_i alpha_i
                let mut m = IDENTITY;
                for r in 0..MAX_RANK {
                    let a = if r < rank {
                        simple_roots[i].coords[r]
                    } else {
                        0
                    };
                    m[r][i] -= a;
                }
                m
            })
            .collect();
        let weyl = WeylGroup::generate(&reflections);

        RootSystem {
            root_type,
            rank,
            cartan,
            simple_roots,
            positive_roots,
            rho: Weight::new(&vec![1; rank]),
            det,
            adj,
            weyl,
        }
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_pairing(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn rho(&self) -> Weight {
        self.rho
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.rank)
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn weight(&self, coords: &[i64]) -> Result<Weight, RootDataError> {
        if coords.len() != self.rank {
            return Err(RootDataError::RankMismatch {
                weight: format!("{coords:?}"),
                got: coords.len(),
                expected: self.rank,
            });
        }
        Ok(Weight::new(coords))
    }

    /// `sum_j r_j alpha_j`.
    pub fn from_root_coords(&self, r: &[i64]) -> Weight {
        let mut w = self.zero();
        for (j, &rj) in r.iter().enumerate() {
            w += rj * self.simple_roots[j];
        }
        w
    }

    pub(crate) fn root_coords_scaled(&self, w: Weight) -> [i64; MAX_RANK] {
        let mut out = [0; MAX_RANK];
        for (i, o) in out.iter_mut().enumerate().take(self.rank) {
            *o = (0..self.rank).map(|k| self.adj[i][k] * w.coords[k]).sum();
        }
        out
    }

    /// Coordinates in the basis of simple roots.
    pub fn root_coords(&self, w: Weight) -> Vec<Rational64> {
        self.root_coords_scaled(w)[..self.rank]
            .iter()
            .map(|&c| Rational64::new(c, self.det))
            .collect()
    }

    /// Integer simple-root coordinates, if `w` lies in the root lattice.
    pub fn integral_root_coords(&self, w: Weight) -> Option<[i64; MAX_RANK]> {
        let mut r = self.root_coords_scaled(w);
        for c in r.iter_mut().take(self.rank) {
            if *c % self.det != 0 {
                return None;
            }
            *c /= self.det;
        }
        Some(r)
    }

    /// `lambda <= mu`, i.e. `mu - lambda` is a non-negative integer
    /// combination of simple roots.
    pub fn leq(&self, lambda: Weight, mu: Weight) -> bool {
        match self.integral_root_coords(mu - lambda) {
            Some(r) => r[..self.rank].iter().all(|&c| c >= 0),
            None => false,
        }
    }

    pub fn lt(&self, lambda: Weight, mu: Weight) -> bool {
        lambda != mu && self.leq(lambda, mu)
    }

    /// Sum of simple-root coordinates.
    pub fn height(&self, w: Weight) -> Rational64 {
        Rational64::new(self.height_scaled(w), self.det)
    }

    pub(crate) fn height_scaled(&self, w: Weight) -> i64 {
        self.root_coords_scaled(w)[..self.rank].iter().sum()
    }

    pub fn reflect(&self, i: usize, w: Weight) -> Weight {
        w - w.coords[i] * self.simple_roots[i]
    }

    /// `w . lambda = w(lambda + rho) - rho`.
    pub fn dot_action(&self, w: &WeylElem, lambda: Weight) -> Weight {
        coverage::hit(Op::DotAction);
        w.apply(lambda + self.rho) - self.rho
    }

    /// The distinct weights `w . lambda`, each paired with the minimal-length
    /// representative of its coset modulo the dot-stabilizer of `lambda`.
    /// Sorted by decreasing height; equal heights are ordered by the
    /// representative (shorter first, then by reduced word).
    pub fn dot_orbit(&self, lambda: Weight) -> Vec<(WeylElem, Weight)> {
        coverage::hit(Op::DotOrbit);
        let mut seen: HashMap<Weight, usize> = HashMap::new();
        let mut orbit = Vec::new();
        // elements are stored by increasing length, so the first hit is the
        // minimal coset representative
        for w in self.weyl.elements() {
            let mu = w.apply(lambda + self.rho) - self.rho;
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(mu) {
                e.insert(w.index);
                orbit.push((w.clone(), mu));
            }
        }
        orbit.sort_by(|(x, a), (y, b)| {
            self.height_scaled(*b)
                .cmp(&self.height_scaled(*a))
                .then(x.length.cmp(&y.length))
                .then(x.reduced_word.cmp(&y.reduced_word))
        });
        orbit
    }

    /// `<lambda + rho, alpha^vee> <= 0` for every simple root.
    pub fn is_dot_antidominant(&self, lambda: Weight) -> bool {
        lambda.coords().iter().all(|&c| c < 0)
    }

    /// The unique antidominant weight in the dot-orbit of `lambda`.
    pub fn antidominant_rep(&self, lambda: Weight) -> Weight {
        self.weyl
            .elements()
            .iter()
            .map(|w| w.apply(lambda + self.rho) - self.rho)
            .find(|&mu| self.is_dot_antidominant(mu))
            .expect("every integral dot-orbit has an antidominant member")
    }

    /// True when the dot-stabilizer of `lambda` is trivial.
    pub fn is_dot_regular(&self, lambda: Weight) -> bool {
        self.dot_orbit(lambda).len() == self.weyl.len()
    }

    /// Name of a weight in the dot-orbit of 0 (`e`, `s`, `st`, ...), if it
    /// lies there.
    pub fn orbit_name(&self, lambda: Weight) -> Option<String> {
        self.weyl
            .elements()
            .iter()
            .find(|w| self.dot_action(w, self.zero()) == lambda)
            .map(|w| w.name())
    }

    pub fn parabolic(&self, levi: &[usize]) -> ParabolicData {
        ParabolicData::new(self, levi)
    }

    /// `none` (Borel), `alpha`, `beta` or `all`.
    pub fn parabolic_by_name(&self, name: &str) -> Result<ParabolicData, RootDataError> {
        let levi: Vec<usize> = match name {
            "none" | "b" => vec![],
            "alpha" => vec![0],
            "beta" if self.rank > 1 => vec![1],
            "all" | "g" => (0..self.rank).collect(),
            other => return Err(RootDataError::UnknownParabolic(other.to_string())),
        };
        Ok(self.parabolic(&levi))
    }
}

/// A standard parabolic subalgebra, given by the simple roots of its Levi
/// factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicData {
    levi_simples: Vec<usize>,
    rank: usize,
    levi_positive_roots: Vec<Weight>,
    /// Negative roots outside the Levi factor.
    m_roots: Vec<Weight>,
    /// Indices of the elements of the parabolic Weyl subgroup.
    levi_weyl: Vec<usize>,
}

impl ParabolicData {
    fn new(rs: &RootSystem, levi: &[usize]) -> Self {
        let mut levi_simples = levi.to_vec();
        levi_simples.sort_unstable();
        levi_simples.dedup();
        let in_levi = |root: &Weight| {
            let r = rs
                .integral_root_coords(*root)
                .expect("roots lie in the root lattice");
            (0..rs.rank).all(|j| r[j] == 0 || levi_simples.contains(&j))
        };
        let (levi_positive_roots, outside): (Vec<Weight>, Vec<Weight>) =
            rs.positive_roots.iter().partition(|r| in_levi(r));
        let levi_weyl = rs
            .weyl
            .elements()
            .iter()
            .filter(|w| w.reduced_word.iter().all(|i| levi_simples.contains(i)))
            .map(|w| w.index)
            .collect();
        ParabolicData {
            levi_simples,
            rank: rs.rank,
            levi_positive_roots,
            m_roots: outside.into_iter().map(|r| -r).collect(),
            levi_weyl,
        }
    }

    pub fn levi_simples(&self) -> &[usize] {
        &self.levi_simples
    }

    pub fn levi_positive_roots(&self) -> &[Weight] {
        &self.levi_positive_roots
    }

    pub fn m_roots(&self) -> &[Weight] {
        &self.m_roots
    }

    pub fn levi_weyl<'a>(&'a self, rs: &'a RootSystem) -> impl Iterator<Item = &'a WeylElem> + 'a {
        self.levi_weyl.iter().map(move |&i| rs.weyl.get(i))
    }

    pub fn is_borel(&self) -> bool {
        self.levi_simples.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.levi_simples.len() == self.rank
    }

    /// `<lambda, alpha^vee> >= 0` for every simple root of the Levi factor.
    pub fn is_levi_dominant(&self, lambda: Weight) -> bool {
        self.levi_simples.iter().all(|&i| lambda.pairing(i) >= 0)
    }

    pub fn name(&self) -> &'static str {
        if self.is_borel() {
            "none"
        } else if self.is_full() {
            "all"
        } else if self.levi_simples == [0] {
            "alpha"
        } else {
            "beta"
        }
    }

    /// Greek letter for display, e.g. `β` in `Δ^{p_β}(s)`.
    pub fn symbol(&self) -> &'static str {
        match self.name() {
            "none" => "b",
            "all" => "g",
            "alpha" => "α",
            _ => "β",
        }
    }
}

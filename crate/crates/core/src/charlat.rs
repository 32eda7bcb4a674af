//! Formal characters of weight modules whose support lies below finitely many
//! ceilings and whose weight spaces are finite-dimensional.
//!
//! Such characters usually have infinite support, so they are represented as
//! memoized evaluators over an expression tree rather than as maps. Finite
//! maps only come out of [`Character::restrict`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coverage::{self, Op};
use crate::root_data::{RootSystem, Weight};
use crate::standard_chars::KostantTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("character takes the negative value {value} at weight {weight}")]
    Negative { weight: Weight, value: i64 },
}

/// The finite window `{nu : floor <= nu <= c for some ceiling c}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub floor: Weight,
    pub ceilings: Vec<Weight>,
}

impl Region {
    pub fn new(floor: Weight, ceilings: Vec<Weight>) -> Self {
        Region { floor, ceilings }
    }

    /// Box reaching `depth` steps below the ceilings in every simple-root
    /// direction; the floor sits below all of them.
    pub fn below(rs: &RootSystem, ceilings: Vec<Weight>, depth: i64) -> Self {
        let Some(&first) = ceilings.first() else {
            return Region::new(rs.zero(), ceilings);
        };
        let mut low = vec![0i64; rs.rank()];
        for &c in &ceilings {
            for (l, r) in low.iter_mut().zip(rs.root_coords(c - first)) {
                *l = (*l).min(r.floor().to_integer());
            }
        }
        let low: Vec<i64> = low.iter().map(|l| l - depth).collect();
        Region::new(first + rs.from_root_coords(&low), ceilings)
    }

    pub fn contains(&self, rs: &RootSystem, w: Weight) -> bool {
        rs.leq(self.floor, w) && self.ceilings.iter().any(|&c| rs.leq(w, c))
    }

    /// All weights of the region, by decreasing height and then by
    /// coordinates.
    pub fn weights(&self, rs: &RootSystem) -> Vec<Weight> {
        let mut set = BTreeSet::new();
        for &c in &self.ceilings {
            for_each_in_box(rs, self.floor, c, |w| {
                set.insert(w);
            });
        }
        let mut out: Vec<Weight> = set.into_iter().collect();
        out.sort_by(|a, b| {
            rs.height_scaled(*b)
                .cmp(&rs.height_scaled(*a))
                .then(a.cmp(b))
        });
        out
    }
}

/// Calls `f` on every weight `nu` with `floor <= nu <= ceiling`.
pub(crate) fn for_each_in_box(
    rs: &RootSystem,
    floor: Weight,
    ceiling: Weight,
    mut f: impl FnMut(Weight),
) {
    let Some(depth) = rs.integral_root_coords(ceiling - floor) else {
        return;
    };
    let rank = rs.rank();
    if depth[..rank].iter().any(|&d| d < 0) {
        return;
    }
    let simple = rs.simple_roots();
    if rank == 1 {
        for a in 0..=depth[0] {
            f(ceiling - a * simple[0]);
        }
    } else {
        for a in 0..=depth[0] {
            for b in 0..=depth[1] {
                f(ceiling - a * simple[0] - b * simple[1]);
            }
        }
    }
}

/// Drops ceilings that lie below another ceiling.
fn maximal(rs: &RootSystem, ceilings: impl IntoIterator<Item = Weight>) -> Vec<Weight> {
    let all: BTreeSet<Weight> = ceilings.into_iter().collect();
    all.iter()
        .copied()
        .filter(|&c| !all.iter().any(|&d| rs.lt(c, d)))
        .collect()
}

enum Expr {
    Finite(BTreeMap<Weight, i64>),
    /// `nu -> p(top - nu)` for a Kostant partition function `p`.
    Partition {
        top: Weight,
        table: Arc<KostantTable>,
    },
    Sum(Vec<(i64, VirtualCharacter)>),
    Tensor(VirtualCharacter, VirtualCharacter),
}

struct Node {
    rs: Arc<RootSystem>,
    ceilings: Vec<Weight>,
    expr: Expr,
    memo: RwLock<HashMap<Weight, i64>>,
}

/// A character with integer (possibly negative) weight multiplicities.
#[derive(Clone)]
pub struct VirtualCharacter(Arc<Node>);

impl fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VirtualCharacter")
            .field("ceilings", &self.0.ceilings)
            .finish_non_exhaustive()
    }
}

impl VirtualCharacter {
    fn from_expr(rs: Arc<RootSystem>, ceilings: Vec<Weight>, expr: Expr) -> Self {
        VirtualCharacter(Arc::new(Node {
            rs,
            ceilings,
            expr,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    pub fn zero(rs: Arc<RootSystem>) -> Self {
        Self::finite(rs, BTreeMap::new())
    }

    pub fn finite(rs: Arc<RootSystem>, mut entries: BTreeMap<Weight, i64>) -> Self {
        entries.retain(|_, v| *v != 0);
        let ceilings = maximal(&rs, entries.keys().copied());
        Self::from_expr(rs, ceilings, Expr::Finite(entries))
    }

    pub(crate) fn partition(rs: Arc<RootSystem>, top: Weight, table: Arc<KostantTable>) -> Self {
        Self::from_expr(rs, vec![top], Expr::Partition { top, table })
    }

    /// `sum_i k_i * c_i`.
    pub fn linear_combination(rs: Arc<RootSystem>, terms: Vec<(i64, VirtualCharacter)>) -> Self {
        let terms: Vec<_> = terms.into_iter().filter(|(k, _)| *k != 0).collect();
        let ceilings = maximal(
            &rs,
            terms.iter().flat_map(|(_, c)| c.0.ceilings.iter().copied()),
        );
        Self::from_expr(rs, ceilings, Expr::Sum(terms))
    }

    pub fn add(&self, other: &VirtualCharacter) -> Self {
        Self::linear_combination(
            self.0.rs.clone(),
            vec![(1, self.clone()), (1, other.clone())],
        )
    }

    pub fn sub(&self, other: &VirtualCharacter) -> Self {
        Self::linear_combination(
            self.0.rs.clone(),
            vec![(1, self.clone()), (-1, other.clone())],
        )
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::linear_combination(self.0.rs.clone(), vec![(k, self.clone())])
    }

    pub fn tensor(&self, other: &VirtualCharacter) -> Self {
        let rs = self.0.rs.clone();
        let ceilings = maximal(
            &rs,
            self.0
                .ceilings
                .iter()
                .flat_map(|&a| other.0.ceilings.iter().map(move |&b| a + b)),
        );
        Self::from_expr(rs, ceilings, Expr::Tensor(self.clone(), other.clone()))
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.0.rs
    }

    pub fn ceilings(&self) -> &[Weight] {
        &self.0.ceilings
    }

    fn below_ceiling(&self, mu: Weight) -> bool {
        self.0.ceilings.iter().any(|&c| self.0.rs.leq(mu, c))
    }

    pub fn eval(&self, mu: Weight) -> i64 {
        if !self.below_ceiling(mu) {
            return 0;
        }
        match &self.0.expr {
            Expr::Finite(map) => map.get(&mu).copied().unwrap_or(0),
            Expr::Partition { top, table } => table.count(*top - mu) as i64,
            Expr::Sum(_) | Expr::Tensor(..) => {
                if let Some(&v) = self.0.memo.read().expect("memo lock").get(&mu) {
                    return v;
                }
                let v = self.compute(mu);
                self.0.memo.write().expect("memo lock").insert(mu, v);
                v
            }
        }
    }

    fn compute(&self, mu: Weight) -> i64 {
        match &self.0.expr {
            Expr::Sum(terms) => terms.iter().map(|(k, c)| k * c.eval(mu)).sum(),
            Expr::Tensor(a, b) => {
                let rs = &self.0.rs;
                // nu ranges over weights with nu <= a-ceiling and mu - nu <= b-ceiling
                if a.0.ceilings.len() == 1 && b.0.ceilings.len() == 1 {
                    let mut total = 0;
                    for_each_in_box(rs, mu - b.0.ceilings[0], a.0.ceilings[0], |nu| {
                        let x = a.eval(nu);
                        if x != 0 {
                            total += x * b.eval(mu - nu);
                        }
                    });
                    total
                } else {
                    let mut pairs = HashSet::new();
                    for &ca in &a.0.ceilings {
                        for &cb in &b.0.ceilings {
                            for_each_in_box(rs, mu - cb, ca, |nu| {
                                pairs.insert(nu);
                            });
                        }
                    }
                    pairs
                        .into_iter()
                        .map(|nu| {
                            let x = a.eval(nu);
                            if x == 0 {
                                0
                            } else {
                                x * b.eval(mu - nu)
                            }
                        })
                        .sum()
                }
            }
            Expr::Finite(_) | Expr::Partition { .. } => unreachable!("not memoized"),
        }
    }

    /// Nonzero values on a finite region.
    pub fn restrict(&self, region: &Region) -> BTreeMap<Weight, i64> {
        region
            .weights(&self.0.rs)
            .into_iter()
            .filter_map(|w| {
                let v = self.eval(w);
                (v != 0).then_some((w, v))
            })
            .collect()
    }
}

/// Character of a genuine module: all multiplicities are non-negative.
///
/// Evaluation is memoized behind an internal lock, so a character can be
/// shared across threads; every evaluation of the same weight returns the
/// same value.
#[derive(Clone, Debug)]
pub struct Character(VirtualCharacter);

impl Character {
    /// Wraps a virtual character known to be non-negative. Violations surface
    /// on evaluation.
    pub fn from_virtual(v: VirtualCharacter) -> Self {
        Character(v)
    }

    pub fn zero(rs: Arc<RootSystem>) -> Self {
        Character(VirtualCharacter::zero(rs))
    }

    pub fn finite(rs: Arc<RootSystem>, entries: BTreeMap<Weight, u64>) -> Self {
        Character(VirtualCharacter::finite(
            rs,
            entries.into_iter().map(|(w, m)| (w, m as i64)).collect(),
        ))
    }

    pub fn as_virtual(&self) -> &VirtualCharacter {
        &self.0
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        self.0.root_system()
    }

    pub fn ceilings(&self) -> &[Weight] {
        self.0.ceilings()
    }

    pub fn try_eval(&self, mu: Weight) -> Result<u64, CharError> {
        let v = self.0.eval(mu);
        u64::try_from(v).map_err(|_| CharError::Negative {
            weight: mu,
            value: v,
        })
    }

    /// Dimension of the weight space of weight `mu`.
    ///
    /// Panics if the underlying virtual character is negative at `mu`, which
    /// means the character was built from an inconsistent formula.
    pub fn eval(&self, mu: Weight) -> u64 {
        coverage::hit(Op::Eval);
        match self.try_eval(mu) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub(crate) fn eval_i(&self, mu: Weight) -> i64 {
        self.0.eval(mu)
    }

    pub fn tensor(&self, other: &Character) -> Character {
        coverage::hit(Op::Tensor);
        Character(self.0.tensor(&other.0))
    }

    pub fn add(&self, other: &Character) -> Character {
        coverage::hit(Op::Add);
        Character(self.0.add(&other.0))
    }

    pub fn scale(&self, k: u64) -> Character {
        coverage::hit(Op::Scale);
        Character(self.0.scale(k as i64))
    }

    pub fn sum<'a>(
        rs: Arc<RootSystem>,
        terms: impl IntoIterator<Item = (u64, &'a Character)>,
    ) -> Self {
        coverage::hit(Op::Add);
        Character(VirtualCharacter::linear_combination(
            rs,
            terms
                .into_iter()
                .map(|(k, c)| (k as i64, c.0.clone()))
                .collect(),
        ))
    }

    /// Chevalley duality preserves every weight space, so this is the
    /// identity on characters.
    pub fn star_dual(&self) -> Character {
        coverage::hit(Op::StarDual);
        self.clone()
    }

    /// All nonzero multiplicities inside a finite region.
    pub fn restrict(&self, region: &Region) -> BTreeMap<Weight, u64> {
        coverage::hit(Op::Restrict);
        self.0
            .restrict(region)
            .into_iter()
            .map(|(w, v)| {
                let v = u64::try_from(v).unwrap_or_else(|_| {
                    panic!(
                        "{}",
                        CharError::Negative {
                            weight: w,
                            value: v
                        }
                    )
                });
                (w, v)
            })
            .collect()
    }

    pub fn agrees_on(&self, other: &Character, region: &Region) -> bool {
        region
            .weights(self.root_system())
            .into_iter()
            .all(|w| self.eval_i(w) == other.eval_i(w))
    }

    pub fn dump(&self, region: &Region) -> CharacterDump {
        CharacterDump {
            ceilings: self.ceilings().to_vec(),
            region: region.clone(),
            entries: self.restrict(region).into_iter().collect(),
        }
    }
}

/// JSON form of a character restricted to a region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDump {
    pub ceilings: Vec<Weight>,
    pub region: Region,
    pub entries: Vec<(Weight, u64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::RootType;

    fn rs() -> Arc<RootSystem> {
        Arc::new(RootSystem::new(RootType::A2))
    }

    fn point(rs: &Arc<RootSystem>, entries: &[([i64; 2], u64)]) -> Character {
        Character::finite(
            rs.clone(),
            entries.iter().map(|(c, m)| (Weight::new(c), *m)).collect(),
        )
    }

    #[test]
    fn region_enumeration() {
        let rs = rs();
        let [a, b] = [rs.simple_roots()[0], rs.simple_roots()[1]];
        let region = Region::new(-a - b, vec![rs.zero()]);
        let ws = region.weights(&rs);
        assert_eq!(ws.len(), 4);
        assert_eq!(ws[0], rs.zero());
        assert_eq!(ws[3], -a - b);
        assert!(region.contains(&rs, -a));
        assert!(!region.contains(&rs, -2 * a));
        // ceiling not above floor: empty
        assert!(Region::new(rs.zero(), vec![-a]).weights(&rs).is_empty());
    }

    #[test]
    fn finite_tensor_and_add() {
        let rs = rs();
        let x = point(&rs, &[([0, 0], 1), ([-2, 1], 2)]);
        let y = point(&rs, &[([0, 0], 3), ([1, -2], 1)]);
        let t = x.tensor(&y);
        assert_eq!(t.eval(Weight::new(&[0, 0])), 3);
        assert_eq!(t.eval(Weight::new(&[-2, 1])), 6);
        assert_eq!(t.eval(Weight::new(&[-1, -1])), 2);
        assert_eq!(t.eval(Weight::new(&[1, -2])), 1);
        let s = x.add(&Character::zero(rs.clone()));
        assert_eq!(s.eval(Weight::new(&[-2, 1])), 2);
        assert_eq!(x.scale(3).eval(Weight::new(&[-2, 1])), 6);
        assert_eq!(x.star_dual().eval(Weight::new(&[-2, 1])), 2);
    }

    #[test]
    fn negative_values_are_reported() {
        let rs = rs();
        let v = VirtualCharacter::finite(rs.clone(), BTreeMap::from([(rs.zero(), -1)]));
        let c = Character::from_virtual(v);
        assert_eq!(
            c.try_eval(rs.zero()),
            Err(CharError::Negative {
                weight: rs.zero(),
                value: -1
            })
        );
    }

    #[test]
    fn ceilings_are_maximal() {
        let rs = rs();
        let x = point(&rs, &[([0, 0], 1), ([-2, 1], 2), ([1, -2], 1)]);
        assert_eq!(x.ceilings(), &[rs.zero()]);
    }

    #[test]
    fn dump_json_shape() {
        let rs = rs();
        let x = point(&rs, &[([0, 0], 1), ([-2, 1], 2)]);
        let region = Region::new(Weight::new(&[-2, 1]), vec![rs.zero()]);
        let json = serde_json::to_string(&x.dump(&region)).unwrap();
        assert_eq!(
            json,
            r#"{"ceilings":[[0,0]],"region":{"floor":[-2,1],"ceilings":[[0,0]]},"entries":[[[-2,1],2],[[0,0],1]]}"#
        );
    }
}

//! Composition multiplicities of characters, and projection onto a block.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::category::CategoryO;
use crate::charlat::{Character, Region};
use crate::coverage::{self, Op};
use crate::label::weight_json;
use crate::root_data::{RootSystem, Weight, WeylElem};
use crate::standard_chars::VermaExpansion;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("negative residual {value} at weight {weight}: input is not a genuine character")]
    NegativeResidual { weight: Weight, value: i64 },
}

/// A dot-orbit of the Weyl group: the integral weights of one block.
#[derive(Debug)]
pub struct LinkageClass {
    antidominant: Weight,
    /// `dot_orbit(antidominant)`: minimal coset representatives `x` with the
    /// weights `x . antidominant`, highest first.
    orbit: Vec<(WeylElem, Weight)>,
    index: HashMap<Weight, usize>,
    // below[i][j]: rep j <= rep i in the Bruhat order
    below: Vec<Vec<bool>>,
    expansions: Vec<VermaExpansion>,
}

impl LinkageClass {
    fn new(rs: &RootSystem, antidominant: Weight) -> Self {
        let orbit = rs.dot_orbit(antidominant);
        let n = orbit.len();
        let g = rs.weyl();
        let below: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| g.bruhat_leq(&orbit[j].0, &orbit[i].0))
                    .collect()
            })
            .collect();
        let index = orbit
            .iter()
            .enumerate()
            .map(|(i, (_, w))| (*w, i))
            .collect();

        // ch Delta(x) = sum_{y <= x} ch L(y); invert by increasing length.
        let mut by_length: Vec<usize> = (0..n).collect();
        by_length.sort_by_key(|&i| orbit[i].0.length());
        let mut expansions = vec![VermaExpansion::new(); n];
        for &i in &by_length {
            let mut e = VermaExpansion::single(orbit[i].1);
            for &j in &by_length {
                if j != i && below[i][j] {
                    let lower = expansions[j].clone();
                    e.add_scaled(&lower, -1);
                }
            }
            expansions[i] = e;
        }
        LinkageClass {
            antidominant,
            orbit,
            index,
            below,
            expansions,
        }
    }

    pub fn antidominant_rep(&self) -> Weight {
        self.antidominant
    }

    pub fn orbit(&self) -> &[(WeylElem, Weight)] {
        &self.orbit
    }

    /// Highest weight of the orbit.
    pub fn top(&self) -> Weight {
        self.orbit[0].1
    }

    pub fn contains(&self, w: Weight) -> bool {
        self.index.contains_key(&w)
    }

    pub fn weights(&self) -> impl Iterator<Item = Weight> + '_ {
        self.orbit.iter().map(|(_, w)| *w)
    }

    pub(crate) fn simple_expansion(&self, lambda: Weight) -> VermaExpansion {
        self.expansions[self.index[&lambda]].clone()
    }

    /// `{y . a : x <= y}` for `lambda = x . a`, highest first.
    pub(crate) fn weights_above(&self, lambda: Weight) -> Vec<Weight> {
        let i = self.index[&lambda];
        (0..self.orbit.len())
            .filter(|&j| self.below[j][i])
            .map(|j| self.orbit[j].1)
            .collect()
    }
}

/// Multiplicities `[M : L(mu)]`, certified for every `mu` in `region`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub entries: BTreeMap<Weight, u64>,
    pub region: Region,
    /// Highest weight of the block this result was projected onto, if any.
    pub block: Option<Weight>,
}

impl DecompositionResult {
    pub fn get(&self, lambda: Weight) -> u64 {
        self.entries.get(&lambda).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by decreasing height, then coordinates.
    pub fn sorted_entries(&self, rs: &RootSystem) -> Vec<(Weight, u64)> {
        let mut v: Vec<(Weight, u64)> = self.entries.iter().map(|(&w, &m)| (w, m)).collect();
        v.sort_by(|(a, _), (b, _)| {
            rs.height_scaled(*b)
                .cmp(&rs.height_scaled(*a))
                .then_with(|| orbit_order(rs, *a, *b))
        });
        v
    }

    /// `{"block": "W·0", "entries": [["st", 1], ...]}`; weights outside the
    /// orbit of 0 are written as coordinate arrays.
    pub fn to_json(&self, rs: &RootSystem) -> Value {
        let block = self.block.map(|b| match rs.orbit_name(b) {
            Some(_) if b.is_zero() => "W·0".to_string(),
            _ => format!("W·{b}"),
        });
        json!({
            "block": block,
            "entries": self
                .sorted_entries(rs)
                .into_iter()
                .map(|(w, m)| json!([weight_json(rs, w), m]))
                .collect::<Vec<_>>(),
        })
    }
}

// Ties in height among orbit-of-0 weights follow the reduced words.
fn orbit_order(rs: &RootSystem, a: Weight, b: Weight) -> std::cmp::Ordering {
    match (rs.orbit_name(a), rs.orbit_name(b)) {
        (Some(x), Some(y)) => x.len().cmp(&y.len()).then(x.cmp(&y)),
        _ => a.cmp(&b),
    }
}

impl CategoryO {
    /// The block containing `lambda`.
    pub fn linkage_class(&self, lambda: Weight) -> Arc<LinkageClass> {
        let anti = self.rs.antidominant_rep(lambda);
        if let Some(c) = self.linkage_cache.read().expect("linkage cache").get(&anti) {
            return c.clone();
        }
        let class = Arc::new(LinkageClass::new(&self.rs, anti));
        self.linkage_cache
            .write()
            .expect("linkage cache")
            .entry(anti)
            .or_insert(class)
            .clone()
    }

    /// Unique multiplicities `m_mu` (`mu >= floor`) with
    /// `ch = sum m_mu ch L(mu)` at every weight `>= floor`.
    ///
    /// Greedy: walk the region from the top; the residual at a weight is its
    /// multiplicity once everything above it has been subtracted.
    pub fn decompose(
        &self,
        c: &Character,
        floor: Weight,
    ) -> Result<DecompositionResult, DecompError> {
        coverage::hit(Op::Decompose);
        self.decompose_with_tiebreak(c, floor, |_| 0u8)
    }

    /// [`CategoryO::decompose`] with a custom order among weights of equal
    /// height. Any order gives the same result.
    pub fn decompose_with_tiebreak<K: Ord>(
        &self,
        c: &Character,
        floor: Weight,
        key: impl Fn(Weight) -> K,
    ) -> Result<DecompositionResult, DecompError> {
        let rs = &self.rs;
        let region = Region::new(floor, c.ceilings().to_vec());
        let mut order = region.weights(rs);
        order.sort_by(|a, b| {
            rs.height_scaled(*b)
                .cmp(&rs.height_scaled(*a))
                .then_with(|| key(*a).cmp(&key(*b)))
        });
        let mut residual: HashMap<Weight, i64> = order.iter().map(|&w| (w, c.eval_i(w))).collect();
        let mut entries = BTreeMap::new();
        for (i, &nu) in order.iter().enumerate() {
            let r = residual[&nu];
            if r < 0 {
                return Err(DecompError::NegativeResidual {
                    weight: nu,
                    value: r,
                });
            }
            if r == 0 {
                continue;
            }
            entries.insert(nu, r as u64);
            let simple = self.simple_char(nu);
            for &lower in &order[i..] {
                if rs.leq(lower, nu) {
                    *residual.get_mut(&lower).expect("region weight") -= r * simple.eval_i(lower);
                }
            }
        }
        Ok(DecompositionResult {
            entries,
            region,
            block: None,
        })
    }

    /// Composition multiplicities of the summand of `c` in the given block.
    pub fn block_project(
        &self,
        c: &Character,
        block: &LinkageClass,
    ) -> Result<DecompositionResult, DecompError> {
        coverage::hit(Op::BlockProject);
        let mut d = self.decompose(c, block.antidominant_rep())?;
        d.entries.retain(|w, _| block.contains(*w));
        d.block = Some(block.top());
        Ok(d)
    }

    /// `[M : L(lambda)]`.
    pub fn comp_mult(&self, c: &Character, lambda: Weight) -> Result<u64, DecompError> {
        coverage::hit(Op::CompMult);
        Ok(self.decompose(c, lambda)?.get(lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::RootType;

    fn a2() -> CategoryO {
        CategoryO::new(RootType::A2)
    }

    fn orbit_map(o: &CategoryO, entries: &[(&str, u64)]) -> BTreeMap<Weight, u64> {
        entries.iter().map(|&(w, m)| (o.w0(w), m)).collect()
    }

    #[test]
    fn simple_decomposes_to_itself() {
        let o = a2();
        for w in ["e", "s", "t", "st", "ts", "sts"] {
            let d = o.decompose(&o.simple_char(o.w0(w)), o.w0("sts")).unwrap();
            assert_eq!(d.entries, orbit_map(&o, &[(w, 1)]));
        }
    }

    /// Brute-force oracle: `[Delta(x) : L(y)] = 1 iff y <= x`, inverted by
    /// exhaustive back-substitution over the 6x6 matrix.
    #[test]
    fn verma_decomposes_into_whole_block() {
        let o = a2();
        let d = o.decompose(&o.verma_char(o.w0("e")), o.w0("sts")).unwrap();
        assert_eq!(
            d.entries,
            orbit_map(
                &o,
                &[
                    ("e", 1),
                    ("s", 1),
                    ("t", 1),
                    ("st", 1),
                    ("ts", 1),
                    ("sts", 1)
                ]
            )
        );
        assert_eq!(
            o.comp_mult(&o.verma_char(o.rs.zero()), o.w0("sts"))
                .unwrap(),
            1
        );
        let dst = o.decompose(&o.verma_char(o.w0("st")), o.w0("sts")).unwrap();
        assert_eq!(dst.entries, orbit_map(&o, &[("st", 1), ("sts", 1)]));
    }

    #[test]
    fn g_table_sample_cells() {
        let o = a2();
        let ls = o.simple_char(o.w0("s"));
        let lt = o.simple_char(o.w0("t"));
        let l0 = o.linkage_class(o.rs.zero());
        let d = o.block_project(&ls.tensor(&lt), &l0).unwrap();
        assert_eq!(
            d.entries,
            orbit_map(&o, &[("st", 1), ("ts", 1), ("sts", 2)])
        );
        assert_eq!(o.comp_mult(&ls.tensor(&lt), o.w0("sts")).unwrap(), 2);
        assert_eq!(o.comp_mult(&ls, o.rs.zero()).unwrap(), 0);

        let d = o.block_project(&ls.tensor(&ls), &l0).unwrap();
        assert_eq!(d.entries, orbit_map(&o, &[("st", 1)]));
        let lst = o.simple_char(o.w0("st"));
        assert!(o.block_project(&lst.tensor(&lst), &l0).unwrap().is_zero());
        let d = o.block_project(&o.simple_char(o.rs.zero()), &l0).unwrap();
        assert_eq!(d.entries, orbit_map(&o, &[("e", 1)]));
    }

    #[test]
    fn negative_residual_is_an_error() {
        let o = a2();
        let virt = o
            .verma_char(o.w0("st"))
            .as_virtual()
            .sub(o.verma_char(o.w0("e")).as_virtual());
        let c = Character::from_virtual(virt);
        assert!(matches!(
            o.decompose(&c, o.w0("sts")),
            Err(DecompError::NegativeResidual { .. })
        ));
    }

    #[test]
    fn tiebreak_does_not_matter() {
        let o = a2();
        let ls = o.simple_char(o.w0("s"));
        let lt = o.simple_char(o.w0("t"));
        let c = ls.tensor(&lt).add(&o.verma_char(o.w0("t")));
        let floor = o.w0("sts") - o.rs.rho();
        let a = o.decompose_with_tiebreak(&c, floor, |w| w).unwrap();
        let b = o
            .decompose_with_tiebreak(&c, floor, std::cmp::Reverse)
            .unwrap();
        let d = o
            .decompose_with_tiebreak(&c, floor, |w| w.pairing(1) * 7 - w.pairing(0))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, d);
    }

    #[test]
    fn json_form() {
        let o = a2();
        let ls = o.simple_char(o.w0("s"));
        let lt = o.simple_char(o.w0("t"));
        let d = o
            .block_project(&ls.tensor(&lt), &o.linkage_class(o.rs.zero()))
            .unwrap();
        assert_eq!(
            d.to_json(&o.rs).to_string(),
            r#"{"block":"W·0","entries":[["st",1],["ts",1],["sts",2]]}"#
        );
    }
}

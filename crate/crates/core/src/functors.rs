//! The functors `G_M N = (M (x) N)|_0`, `F_M N = (M^* (x) N)^{<=0}|_0` and
//! `H_M = * o F_{M*} o *` at the level of characters and standard flags.
//!
//! `G` works on arbitrary characters. `F` and `H` work on flagged inputs
//! only: the generators of `M^* (x) N` are `nu - mu` for `nu` a generator of
//! `N` and `mu` a weight of `M`, so the `*`-dual never has to be formed.

use serde_json::{json, Value};

use crate::block_decomp::{DecompError, DecompositionResult};
use crate::category::CategoryO;
use crate::charlat::Character;
use crate::coverage::{self, Op};
use crate::free_flag::{FlagError, FreePresentation};
use crate::label::{render_sum, weight_name};
use crate::root_data::{RootSystem, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorResult {
    Simples(DecompositionResult),
    DeltaFlag(FreePresentation),
    NablaFlag(FreePresentation),
    Zero,
}

impl FunctorResult {
    pub fn is_zero(&self) -> bool {
        match self {
            FunctorResult::Zero => true,
            FunctorResult::Simples(d) => d.is_zero(),
            FunctorResult::DeltaFlag(f) | FunctorResult::NablaFlag(f) => f.is_zero(),
        }
    }

    /// `L(st)+L(ts)+2·L(sts)`, `Δ(e)+Δ(t)`, `∇^{p_β}(e)` or `0`.
    pub fn render(&self, rs: &RootSystem) -> String {
        match self {
            FunctorResult::Zero => "0".to_string(),
            FunctorResult::Simples(d) => render_simples(rs, d),
            FunctorResult::DeltaFlag(f) => f.render(rs, false),
            FunctorResult::NablaFlag(f) => f.render(rs, true),
        }
    }

    pub fn to_json(&self, rs: &RootSystem) -> Value {
        match self {
            FunctorResult::Zero => json!({ "kind": "zero" }),
            FunctorResult::Simples(d) => json!({ "kind": "simples", "value": d.to_json(rs) }),
            FunctorResult::DeltaFlag(f) => json!({ "kind": "delta-flag", "value": f.to_json(rs) }),
            FunctorResult::NablaFlag(f) => json!({ "kind": "nabla-flag", "value": f.to_json(rs) }),
        }
    }
}

pub fn render_simples(rs: &RootSystem, d: &DecompositionResult) -> String {
    render_sum(
        d.sorted_entries(rs)
            .into_iter()
            .map(|(w, m)| (format!("L({})", weight_name(rs, w)), m)),
    )
}

impl CategoryO {
    /// Composition multiplicities of `G_M N`.
    pub fn apply_g(
        &self,
        m: &Character,
        n: &Character,
    ) -> Result<DecompositionResult, DecompError> {
        coverage::hit(Op::ApplyG);
        let block = self.linkage_class(self.rs.zero());
        self.block_project(&m.tensor(n), &block)
    }

    /// Flag of `F_M N` for `N` with a (parabolic) Verma flag.
    ///
    /// `M` has to lie in the parabolic category of `N`'s flag, so that
    /// `M^* (x) N` regroups into Levi blocks. This is checked on every weight
    /// of `M` the computation reads: a failure returns
    /// [`FlagError::NotLeviFinite`].
    pub fn apply_f(
        &self,
        m: &Character,
        n: &FreePresentation,
    ) -> Result<FreePresentation, FlagError> {
        coverage::hit(Op::ApplyF);
        let rs = &self.rs;
        let p = n.parabolic().clone();
        let gens = n.generator_weights();
        let read = |mu: Weight| -> Result<i64, FlagError> {
            let v = m.eval_i(mu);
            for &i in p.levi_simples() {
                if m.eval_i(rs.reflect(i, mu)) != v {
                    return Err(FlagError::NotLeviFinite {
                        weight: mu,
                        parabolic: p.name(),
                    });
                }
            }
            Ok(v)
        };
        // generator multiplicity of M^* (x) N at x
        let mult = |x: Weight| -> Result<i64, FlagError> {
            let mut total = 0;
            for (&nu, &k) in &gens {
                total += k as i64 * read(nu - x)?;
            }
            Ok(total)
        };
        let block = self.linkage_class(rs.zero());
        let mut tops = Vec::new();
        for lambda in block.weights() {
            if !p.is_levi_dominant(lambda) {
                continue;
            }
            let k = self.levi_multiplicity(&p, lambda, mult)?;
            if k < 0 {
                return Err(FlagError::Regroup {
                    weight: lambda,
                    value: k,
                });
            }
            tops.push((lambda, k as u64));
        }
        let projected = self.presentation(&p, tops)?;
        Ok(self.truncate_leq(&projected, rs.zero()))
    }

    /// `H_M N` for `N` with a (parabolic) dual Verma flag, given by the same
    /// generator data as the `Delta`-flag it dualizes.
    pub fn apply_h(&self, m: &Character, n: &FreePresentation) -> Result<FunctorResult, FlagError> {
        coverage::hit(Op::ApplyH);
        let f = self.apply_f(&m.star_dual(), n)?;
        Ok(if f.is_zero() {
            FunctorResult::Zero
        } else {
            FunctorResult::NablaFlag(f)
        })
    }

    /// Multiplicity shadow of the surjection `G_{Delta(0)} M -> M`: every
    /// composition multiplicity of `G_{Delta(0)} M` is at least that of
    /// `M|_0`.
    pub fn check_dominance(&self, m: &Character) -> Result<bool, DecompError> {
        coverage::hit(Op::CheckDominance);
        let g = self.apply_g(&self.verma_char(self.rs.zero()), m)?;
        let block = self.linkage_class(self.rs.zero());
        let own = self.block_project(m, &block)?;
        Ok(own.entries.iter().all(|(&w, &k)| g.get(w) >= k))
    }
}

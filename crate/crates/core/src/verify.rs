//! Verification suites comparing computed results with the golden corpus and
//! with the identities the functors satisfy.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::category::CategoryO;
use crate::charlat::{Character, Region};
use crate::coverage;
use crate::free_flag::FreePresentation;
use crate::functors::{render_simples, FunctorResult};
use crate::label::{label_name, parse_expr, parse_label, weight_name};
use crate::root_data::{RootType, Weight};
use crate::standard_chars::{StandardKind, StandardLabel};
use crate::table::{
    block_order, CellMethod, CellValue, Functor, GoldenTable, TableError, TableSpec,
};

pub const SUITES: [&str; 6] = [
    "paper-tables",
    "figure1",
    "fnd",
    "identity",
    "dominance",
    "all",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (expected one of paper-tables, figure1, fnd, identity, dominance, all)")]
    UnknownSuite(String),
    #[error("suite `{suite}` needs the golden corpus, which exists for type a2 only")]
    NoGolden { suite: String },
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line per failure, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in self.failures() {
            out.push_str(&format!("FAIL {}: {}\n", c.name, c.detail));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        ));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn run_suite(o: &CategoryO, suite: &str) -> Result<Report, VerifyError> {
    let needs_golden = matches!(suite, "paper-tables" | "figure1" | "all");
    if needs_golden && o.root_system().root_type() != RootType::A2 {
        return Err(VerifyError::NoGolden {
            suite: suite.to_string(),
        });
    }
    let mut r = Report::default();
    match suite {
        "paper-tables" => paper_tables(o, &mut r)?,
        "figure1" => figure1(o, &mut r)?,
        "fnd" => fnd(o, &mut r)?,
        "identity" => identity(o, &mut r, 20, 7)?,
        "dominance" => dominance(o, &mut r, 20, 11)?,
        "all" => {
            paper_tables(o, &mut r)?;
            fnd(o, &mut r)?;
            identity(o, &mut r, 20, 7)?;
            dominance(o, &mut r, 20, 11)?;
        }
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    }
    Ok(r)
}

fn cell_name(functor: Functor, row: &str, col: &str) -> String {
    format!("{}_{row} {col}", functor.to_string().to_uppercase())
}

fn simple_terms(o: &CategoryO, text: &str) -> Result<BTreeMap<Weight, u64>, TableError> {
    let expr = parse_expr(o.root_system(), text)?;
    let mut out = BTreeMap::new();
    for (label, m) in expr.terms()? {
        if label.kind != StandardKind::Simple {
            return Err(TableError::Golden(format!(
                "`{text}` is not a sum of simples"
            )));
        }
        *out.entry(label.weight).or_insert(0) += m;
    }
    Ok(out)
}

/// The region certified for `F` cells: from the antidominant weight of the
/// block up to the cell's ceilings.
fn cell_region(o: &CategoryO, a: &Character, b: &Character) -> Region {
    let mut ceilings = a.ceilings().to_vec();
    ceilings.extend_from_slice(b.ceilings());
    if ceilings.is_empty() {
        ceilings.push(o.root_system().zero());
    }
    Region::new(o.w0_longest(), ceilings)
}

impl CategoryO {
    /// `w_0 . 0`, the antidominant weight of the block of 0.
    pub fn w0_longest(&self) -> Weight {
        let rs = self.root_system();
        rs.dot_action(rs.weyl().longest(), rs.zero())
    }
}

fn g_table(o: &CategoryO, r: &mut Report) -> Result<(), TableError> {
    let rs = o.root_system();
    let golden = GoldenTable::g_a2();
    let spec = TableSpec::simples(o, Functor::G);
    let table = o.mult_table(&spec)?;
    for (i, row) in spec.rows.iter().enumerate() {
        for (j, col) in spec.columns.iter().enumerate() {
            let (rn, cn) = (label_name(rs, row), label_name(rs, col));
            let name = cell_name(Functor::G, &rn, &cn);
            let Some(text) = golden.get(&rn, &cn) else {
                r.check(name, false, "missing from the golden corpus");
                continue;
            };
            let expected = simple_terms(o, text)?;
            let CellValue::Result(FunctorResult::Simples(d)) = &table.cells[i][j].value else {
                r.check(name, false, "not computed");
                continue;
            };
            r.check(
                name.clone(),
                d.entries == expected,
                format!("computed {}, expected {text}", render_simples(rs, d)),
            );
            // the golden multiset, turned back into a character, decomposes to itself
            let c = parse_expr(rs, text)?
                .character(o)
                .map_err(TableError::from)?;
            let back = o.decompose(&c, o.w0_longest()).map_err(TableError::from)?;
            r.check(
                format!("{name} round trip"),
                back.entries == expected,
                format!("decomposes to {}", render_simples(rs, &back)),
            );
        }
    }
    Ok(())
}

fn f_like_table(o: &CategoryO, r: &mut Report, functor: Functor) -> Result<(), TableError> {
    let rs = o.root_system();
    let golden = if functor == Functor::H {
        GoldenTable::f_a2().dualized()
    } else {
        GoldenTable::f_a2()
    };
    let spec = TableSpec::simples(o, functor);
    let table = o.mult_table(&spec)?;
    for (i, row) in spec.rows.iter().enumerate() {
        for (j, col) in spec.columns.iter().enumerate() {
            let (rn, cn) = (label_name(rs, row), label_name(rs, col));
            let name = cell_name(functor, &rn, &cn);
            let cell = &table.cells[i][j];
            let Some(text) = golden.get(&rn, &cn) else {
                r.check(name, false, "missing from the golden corpus");
                continue;
            };
            let expr = parse_expr(rs, text)?;
            let expected = expr.expansion(o).map_err(TableError::from)?;
            let Some(got) = cell.expansion(o)? else {
                r.check(name, false, "unresolved");
                continue;
            };
            r.check(
                name.clone(),
                got == expected,
                format!(
                    "{} cell {}, expected {text}",
                    cell.method.name(),
                    cell.render(o)
                ),
            );
            if cell.method == CellMethod::AdjunctionZero {
                // no L(k) has N among the composition factors of G_M L(k)
                let m = o
                    .character_of(row)
                    .map_err(crate::free_flag::FlagError::from)?;
                let mut total = 0;
                for k in block_order(o) {
                    total += o.comp_mult(&m.tensor(&o.simple_char(k)), col.weight)?;
                }
                r.check(
                    format!("{name} adjunction"),
                    total == 0,
                    format!("{total} composition factors {cn} in G_{rn} of the simples"),
                );
            }
            if cell.method == CellMethod::Computed {
                let computed = cell.character(o)?.expect("flag cells have characters");
                let wanted = expr.character(o).map_err(TableError::from)?;
                let region = cell_region(o, &computed, &wanted);
                r.check(
                    format!("{name} character"),
                    computed.restrict(&region) == wanted.restrict(&region),
                    "weight multiplicities above the antidominant weight",
                );
            }
        }
    }
    Ok(())
}

fn filtrations(o: &CategoryO, r: &mut Report) -> Result<(), TableError> {
    let rs = o.root_system();
    for f in GoldenTable::f_a2().filtrations {
        let label = parse_label(rs, &f.module)?;
        let flag: BTreeSet<Weight> = o
            .projective_flag(label.weight)
            .map_err(|e| TableError::from(crate::free_flag::FlagError::from(e)))?
            .into_iter()
            .collect();
        let mut expected = BTreeSet::new();
        for v in &f.vermas {
            expected.insert(parse_label(rs, v)?.weight);
        }
        r.check(
            format!("standard filtration of {}", f.module),
            flag == expected,
            format!("{} Verma subquotients", flag.len()),
        );
    }
    Ok(())
}

/// `G` cells with a Verma-flagged column, recomputed through the free
/// presentation of the column.
fn g_through_free(o: &CategoryO, r: &mut Report) -> Result<(), TableError> {
    let rs = o.root_system();
    let floor = o.w0_longest();
    let block = o.linkage_class(rs.zero());
    let column = o.verma_presentation(floor);
    for m in block_order(o) {
        let mc = o.simple_char(m);
        let ceilings = mc.ceilings().iter().map(|&c| c + floor).collect();
        let region = Region::new(floor, ceilings);
        let fp = o
            .tensor_with_free(&mc, &column, &region)
            .map_err(TableError::from)?;
        let via_free = o
            .block_project(&o.char_of(&fp), &block)
            .map_err(TableError::from)?;
        let direct = o
            .apply_g(&mc, &o.simple_char(floor))
            .map_err(TableError::from)?;
        r.check(
            format!(
                "G_L({}) L(sts) through the free presentation",
                weight_name(rs, m)
            ),
            via_free.entries == direct.entries,
            render_simples(rs, &via_free),
        );
    }
    Ok(())
}

fn paper_tables(o: &CategoryO, r: &mut Report) -> Result<(), TableError> {
    g_table(o, r)?;
    f_like_table(o, r, Functor::F)?;
    f_like_table(o, r, Functor::H)?;
    filtrations(o, r)?;
    g_through_free(o, r)?;
    figure1(o, r)?;
    fnd(o, r)?;
    for w in block_order(o) {
        let ok = o
            .check_dominance(&o.simple_char(w))
            .map_err(TableError::from)?;
        r.check(
            format!("dominance L({})", weight_name(o.root_system(), w)),
            ok,
            "",
        );
    }
    let missing = coverage::missing();
    r.check(
        "operation coverage",
        missing.is_empty(),
        format!("not exercised: {missing:?}"),
    );
    Ok(())
}

#[derive(Deserialize)]
struct FigureGolden {
    height: i64,
    simples: Vec<FigureEntry>,
    absent: Vec<FigureAbsent>,
}

#[derive(Deserialize)]
struct FigureEntry {
    module: String,
    multiplicities: String,
}

#[derive(Deserialize)]
struct FigureAbsent {
    module: String,
    weight: String,
}

fn figure1(o: &CategoryO, r: &mut Report) -> Result<(), TableError> {
    let rs = o.root_system();
    let golden: FigureGolden = serde_json::from_str(include_str!("../golden/figure1_a2.json"))
        .map_err(|e| TableError::Golden(e.to_string()))?;
    for entry in &golden.simples {
        let label = parse_label(rs, &entry.module)?;
        let top = label.weight;
        let c = o.simple_char(top);
        let depth: Vec<i64> = vec![golden.height; rs.rank()];
        let region = Region::new(top - rs.from_root_coords(&depth), vec![top]);
        let mut bad = None;
        for mu in region.weights(rs) {
            let h = rs.height(top - mu);
            if h > golden.height.into() {
                continue;
            }
            let v = c.eval(mu);
            let ok = match entry.multiplicities.as_str() {
                "unit" => v <= 1,
                "kostant" => v == o.kostant(top - mu),
                other => return Err(TableError::Golden(format!("unknown rule `{other}`"))),
            };
            if !ok {
                bad = Some((mu, v));
                break;
            }
        }
        r.check(
            format!("support of {}", entry.module),
            bad.is_none(),
            match bad {
                Some((mu, v)) => format!("multiplicity {v} at {mu}"),
                None => format!(
                    "{} rule up to height {}",
                    entry.multiplicities, golden.height
                ),
            },
        );
    }
    for a in &golden.absent {
        let label = parse_label(rs, &a.module)?;
        let w = parse_label(rs, &format!("L({})", a.weight))?.weight;
        let v = o.simple_char(label.weight).eval(w);
        r.check(
            format!("{} vanishes at {}", a.module, a.weight),
            v == 0,
            format!("multiplicity {v}"),
        );
    }
    Ok(())
}

fn fnd(o: &CategoryO, r: &mut Report) -> Result<(), TableError> {
    let rs = o.root_system();
    let expected = BTreeMap::from([(rs.zero(), 1)]);
    for lambda in block_order(o) {
        let name = weight_name(rs, lambda);
        let d = o.verma_presentation(lambda);
        let f = o
            .apply_f(&o.dual_verma_char(lambda), &d)
            .map_err(TableError::from)?;
        r.check(
            format!("F_∇({name}) Δ({name}) = Δ(e)"),
            f.tops() == expected,
            f.render(rs, false),
        );
        let h = o
            .apply_h(&o.verma_char(lambda), &d)
            .map_err(TableError::from)?;
        let ok = matches!(&h, FunctorResult::NablaFlag(fp) if fp.tops() == expected);
        r.check(format!("H_Δ({name}) ∇({name}) = ∇(e)"), ok, h.render(rs));
    }
    Ok(())
}

/// Random `N0`-combination of standard objects of the block of 0.
pub fn random_character(o: &CategoryO, rng: &mut impl Rng) -> (String, Character) {
    let rs = o.root_system();
    let block = block_order(o);
    let parabolics = o.parabolics_by_size();
    let mut terms = Vec::new();
    let mut names = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let w = block[rng.gen_range(0..block.len())];
        let k: u64 = rng.gen_range(1..=3);
        let label = match rng.gen_range(0..4) {
            0 => StandardLabel::simple(w),
            1 => StandardLabel::new(rs, StandardKind::Verma, w, None).expect("valid"),
            2 => StandardLabel::new(rs, StandardKind::Projective, w, None).expect("regular"),
            _ => {
                let p = parabolics
                    .iter()
                    .find(|p| !p.is_borel() && p.is_levi_dominant(w))
                    .cloned();
                match p {
                    Some(p) => StandardLabel::new(rs, StandardKind::ParabolicVerma, w, Some(p))
                        .expect("Levi-dominant"),
                    None => StandardLabel::simple(w),
                }
            }
        };
        names.push(format!("{k}·{}", label_name(rs, &label)));
        terms.push((k, o.character_of(&label).expect("valid label")));
    }
    let c = Character::sum(rs.clone(), terms.iter().map(|(k, c)| (*k, c)));
    (names.join("+"), c)
}

/// Random parabolic flag with tops in the block of 0.
pub fn random_flag(o: &CategoryO, rng: &mut impl Rng) -> FreePresentation {
    let parabolics = o.parabolics_by_size();
    let p = &parabolics[rng.gen_range(0..parabolics.len())];
    let tops: Vec<Weight> = block_order(o)
        .into_iter()
        .filter(|&w| p.is_levi_dominant(w))
        .collect();
    let picks: Vec<(Weight, u64)> = (0..rng.gen_range(1..=3))
        .map(|_| (tops[rng.gen_range(0..tops.len())], rng.gen_range(1..=2)))
        .collect();
    o.presentation(p, picks).expect("Levi-dominant tops")
}

fn identity(o: &CategoryO, r: &mut Report, n: usize, seed: u64) -> Result<(), TableError> {
    let rs = o.root_system();
    let mut rng = StdRng::seed_from_u64(seed);
    let unit = o.simple_char(rs.zero());
    let block = o.linkage_class(rs.zero());
    for i in 0..n {
        let (name, c) = random_character(o, &mut rng);
        let g = o.apply_g(&unit, &c).map_err(TableError::from)?;
        let own = o.block_project(&c, &block).map_err(TableError::from)?;
        r.check(
            format!("identity G #{i} on {name}"),
            g.entries == own.entries,
            render_simples(rs, &g),
        );

        let fp = random_flag(o, &mut rng);
        let f = o.apply_f(&unit, &fp).map_err(TableError::from)?;
        r.check(
            format!("identity F #{i} on {}", fp.render(rs, false)),
            f == fp,
            f.render(rs, false),
        );
        let h = o.apply_h(&unit, &fp).map_err(TableError::from)?;
        let ok = matches!(&h, FunctorResult::NablaFlag(x) if *x == fp);
        r.check(
            format!("identity H #{i} on {}", fp.render(rs, true)),
            ok,
            h.render(rs),
        );
    }
    Ok(())
}

fn dominance(o: &CategoryO, r: &mut Report, n: usize, seed: u64) -> Result<(), TableError> {
    let rs = o.root_system();
    for w in block_order(o) {
        let name = weight_name(rs, w);
        let ok = o
            .check_dominance(&o.simple_char(w))
            .map_err(TableError::from)?;
        r.check(format!("dominance L({name})"), ok, "");
        let ok = o
            .check_dominance(&o.verma_char(w))
            .map_err(TableError::from)?;
        r.check(format!("dominance Δ({name})"), ok, "");
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..n {
        let (name, c) = random_character(o, &mut rng);
        let ok = o.check_dominance(&c).map_err(TableError::from)?;
        r.check(format!("dominance #{i} {name}"), ok, "");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        let o = CategoryO::new(RootType::A2);
        assert!(matches!(
            run_suite(&o, "nope"),
            Err(VerifyError::UnknownSuite(_))
        ));
        let o = CategoryO::new(RootType::A1);
        assert!(matches!(
            run_suite(&o, "figure1"),
            Err(VerifyError::NoGolden { .. })
        ));
        assert!(run_suite(&o, "fnd").unwrap().passed());
    }

    #[test]
    fn suites_pass_in_a1xa1() {
        let o = CategoryO::new(RootType::A1xA1);
        for s in ["fnd", "identity", "dominance"] {
            let r = run_suite(&o, s).unwrap();
            assert!(r.passed(), "{s}: {}", r.to_text());
        }
    }
}

//! Sheets and birational sheets, indexed by their (Levi, rigid orbit) data.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::induction::{
    birational_data_for, birationally_rigid_data, canonical_datum, data_on_levi, induce, is_birational_with, is_rigid,
    InductionDatum,
};
use crate::orbits::{enumerate_orbits, orbit_dim, OrbitLabel};
use crate::partition::Partition;
use crate::rootsys::{
    enumerate_levis, normalizer_for, orbit_stabilizer_group, ClassicalType, DClass, Family, FiniteLinearGroup, LeviLabel,
};
use crate::tables::{self, CriterionTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheetRecord {
    pub datum: InductionDatum,
    pub contained_nilpotent: OrbitLabel,
    pub sheet_dim: u64,
}

/// One sheet per class of `(l, O')` with `O'` rigid in `l`.
pub fn enumerate_sheets(ty: ClassicalType) -> Result<Vec<SheetRecord>> {
    let mut out: Vec<SheetRecord> = Vec::new();
    for levi in enumerate_levis(ty) {
        for d in data_on_levi(ty, &levi) {
            if !d.gl_orbits.iter().all(|p| p.parts().iter().all(|&x| x == 1)) {
                continue;
            }
            if let Some(t) = &d.tail_orbit {
                if !is_rigid(t)? {
                    continue;
                }
            }
            let d = canonical_datum(&d)?;
            if out.iter().any(|r| r.datum == d) {
                continue;
            }
            let o = induce(&d)?;
            let sheet_dim = orbit_dim(&o) + levi.center_dim(ty) as u64;
            out.push(SheetRecord { datum: d, contained_nilpotent: o, sheet_dim });
        }
    }
    Ok(out)
}

/// The subspace `xi_i = 0 (i in zero)`. Only zero patterns can break
/// birationality: coincidences `xi_i = +-xi_j` give gl-type centralizers, where
/// induction is always birational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoincidencePattern {
    pub zero: Vec<usize>,
}

/// Complement semantics: the regular locus is `z(l)` minus the union of the patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceArrangement {
    pub ambient_dim: usize,
    pub patterns: Vec<CoincidencePattern>,
}

impl SubspaceArrangement {
    /// Whether a zero set (block indices with `xi_i = 0`) lies in the arrangement.
    pub fn contains_zero_set(&self, zero: &BTreeSet<usize>) -> bool {
        self.patterns.iter().any(|p| p.zero.iter().all(|i| zero.contains(i)))
    }
}

/// Induction from `l` to the centralizer of a generic `xi` vanishing on `s`.
pub(crate) fn partial_birational(table: &CriterionTable, d: &InductionDatum, s: &[usize]) -> Result<bool> {
    let ty = d.ambient;
    let blocks: Vec<u32> = s.iter().map(|&i| d.levi.blocks[i]).collect();
    let gl: Vec<Partition> = s.iter().map(|&i| d.gl_orbits[i].clone()).collect();
    let sub = if ty.family == Family::A {
        let total: u32 = blocks.iter().sum();
        if total < 2 {
            return Ok(true);
        }
        let sty = ClassicalType::tail(Family::A, total - 1);
        let levi = LeviLabel::new(blocks, 0, None);
        let mut order: Vec<usize> = (0..gl.len()).collect();
        order.sort_by(|&a, &b| gl[b].size().cmp(&gl[a].size()));
        InductionDatum { ambient: sty, levi, gl_orbits: order.iter().map(|&i| gl[i].clone()).collect(), tail_orbit: None, xi: None }
    } else {
        let m = d.levi.tail_rank;
        let sty = ClassicalType::tail(ty.family, m + blocks.iter().sum::<u32>());
        let needs_class = ty.family == Family::D && m == 0 && blocks.iter().all(|b| b % 2 == 0);
        let class = needs_class.then(|| d.levi.d_class.unwrap_or(DClass::Plus));
        let mut pairs: Vec<(u32, Partition)> = blocks.into_iter().zip(gl).collect();
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        let levi = LeviLabel::new(pairs.iter().map(|p| p.0).collect(), m, class);
        InductionDatum {
            ambient: sty,
            levi,
            gl_orbits: pairs.into_iter().map(|p| p.1).collect(),
            tail_orbit: d.tail_orbit.clone(),
            xi: None,
        }
    };
    is_birational_with(table, &sub)
}

/// Minimal zero patterns on `z(l)` along which induction stops being birational.
pub fn regular_locus(d: &InductionDatum) -> Result<SubspaceArrangement> {
    let table = tables::active()?;
    let k = d.levi.blocks.len();
    let mut failing: Vec<BTreeSet<usize>> = Vec::new();
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << k))
        .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by_key(|s| s.len());
    for s in subsets {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        if failing.iter().any(|f| f.is_subset(&set)) {
            continue;
        }
        if ty_has_zero_patterns(d) && !partial_birational(&table, d, &s)? {
            failing.push(set);
        }
    }
    let mut patterns: Vec<CoincidencePattern> =
        failing.into_iter().map(|f| CoincidencePattern { zero: f.into_iter().collect() }).collect();
    patterns.sort();
    Ok(SubspaceArrangement { ambient_dim: d.levi.center_dim(d.ambient) as usize, patterns })
}

fn ty_has_zero_patterns(d: &InductionDatum) -> bool {
    d.ambient.family != Family::A || d.levi.blocks.len() > 1
}

/// Whether every element of `group` permutes the patterns.
pub fn arrangement_is_stable(arr: &SubspaceArrangement, group: &FiniteLinearGroup) -> bool {
    let set: BTreeSet<&CoincidencePattern> = arr.patterns.iter().collect();
    group.elements.iter().all(|g| {
        arr.patterns.iter().all(|p| {
            let mut img: Vec<usize> = p.zero.iter().map(|&i| g.perm[i]).collect();
            img.sort_unstable();
            set.contains(&CoincidencePattern { zero: img })
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirationalSheet {
    pub datum: InductionDatum,
    pub induced_nilpotent: OrbitLabel,
    pub regular_locus: SubspaceArrangement,
    pub weyl_action: FiniteLinearGroup,
    pub quotient_dim: u32,
}

pub fn birational_sheet(d: &InductionDatum, induced: &OrbitLabel) -> Result<BirationalSheet> {
    let action = normalizer_for(d.ambient, &d.levi)?;
    let weyl_action = orbit_stabilizer_group(&action, &d.levi, &d.gl_orbits, d.tail_orbit.as_ref())?;
    Ok(BirationalSheet {
        datum: d.clone(),
        induced_nilpotent: induced.clone(),
        regular_locus: regular_locus(d)?,
        weyl_action,
        quotient_dim: d.levi.center_dim(d.ambient),
    })
}

pub fn birational_sheets(ty: ClassicalType) -> Result<Vec<BirationalSheet>> {
    birationally_rigid_data(ty)?.iter().map(|(d, o)| birational_sheet(d, o)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRow {
    pub orbit: OrbitLabel,
    pub count: usize,
    pub witnesses: Vec<InductionDatum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    #[serde(rename = "type")]
    pub ty: ClassicalType,
    pub rows: Vec<CoverRow>,
    pub pass: bool,
    /// Adjoint case: the cover group is trivial, so the freeness claim holds vacuously.
    pub freeness: String,
}

/// For every nilpotent orbit, counts the birational sheets through it.
pub fn verify_disjoint_cover(ty: ClassicalType) -> Result<CoverReport> {
    let mut rows = Vec::new();
    for o in enumerate_orbits(ty) {
        let witnesses = birational_data_for(&o)?;
        rows.push(CoverRow { orbit: o, count: witnesses.len(), witnesses });
    }
    let pass = rows.iter().all(|r| r.count == 1);
    Ok(CoverReport {
        ty,
        rows,
        pass,
        freeness: "adjoint group: H = Z_G(x), A trivial; nothing to check".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(f: Family, n: u32) -> ClassicalType {
        ClassicalType::new(f, n).unwrap()
    }

    #[test]
    fn sheets_small() {
        let a2 = enumerate_sheets(t(Family::A, 2)).unwrap();
        assert_eq!(a2.len(), 3);
        let c2 = enumerate_sheets(t(Family::C, 2)).unwrap();
        let rigid = c2.iter().find(|r| r.contained_nilpotent.partition == Partition::new(vec![2, 1, 1])).unwrap();
        assert!(rigid.datum.levi.is_full(t(Family::C, 2)));
        assert_eq!(rigid.sheet_dim, 4);
        for r in &c2 {
            if r.datum.levi.is_full(t(Family::C, 2)) {
                assert_eq!(r.sheet_dim, orbit_dim(&r.contained_nilpotent));
            }
        }
    }

    #[test]
    fn birational_sheets_small() {
        assert_eq!(birational_sheets(t(Family::A, 2)).unwrap().len(), 3);
        let c2 = birational_sheets(t(Family::C, 2)).unwrap();
        assert_eq!(c2.len(), 4);
        for s in &c2 {
            if s.quotient_dim == 0 {
                assert_eq!(s.weyl_action.order(), 1);
            }
            assert!(arrangement_is_stable(&s.regular_locus, &s.weyl_action));
        }
        let gl2 = c2.iter().find(|s| s.datum.levi == LeviLabel::new(vec![2], 0, None)).unwrap();
        assert!(gl2.regular_locus.patterns.is_empty());
    }

    #[test]
    fn arrangement_detects_non_birational_zero() {
        // [1] + 2[1,1] = [3,2] must collapse
        let b2 = t(Family::B, 2);
        let d = InductionDatum::zero(b2, LeviLabel::new(vec![2], 0, None)).unwrap();
        let arr = regular_locus(&d).unwrap();
        assert_eq!(arr.patterns, vec![CoincidencePattern { zero: vec![0] }]);
        let d = InductionDatum::zero(b2, LeviLabel::cartan(b2)).unwrap();
        assert!(regular_locus(&d).unwrap().patterns.is_empty());
        assert!(regular_locus(&InductionDatum::zero(t(Family::A, 3), LeviLabel::cartan(t(Family::A, 3))).unwrap())
            .unwrap()
            .patterns
            .is_empty());
    }

    #[test]
    fn covers_small() {
        for ty in [t(Family::A, 3), t(Family::C, 2), t(Family::B, 2)] {
            let r = verify_disjoint_cover(ty).unwrap();
            assert!(r.pass, "{ty}: {:?}", r.rows);
        }
        assert_eq!(verify_disjoint_cover(t(Family::A, 3)).unwrap().rows.len(), 5);
    }
}

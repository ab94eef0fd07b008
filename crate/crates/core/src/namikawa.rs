//! Codimension-2 leaves of `Spec C[O]`, the Namikawa space and the
//! Namikawa-Weyl group.
//!
//! Leaves come from Kraft-Procesi row and column cancellation; the irreducible
//! remainders and their `pi_1` actions are read from the criterion table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::induction::{birational_datum, InductionDatum};
use crate::orbits::{closure_leq, enumerate_orbits, h2_dim, orbit_dim, OrbitLabel};
use crate::partition::Partition;
use crate::rootsys::{normalizer_for, orbit_stabilizer_group, ClassicalType, Family};
use crate::tables::{self, CriterionTable, ReductionRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoxeterFamily {
    A,
    B,
    C,
    D,
}

/// An irreducible Coxeter type; also used for Kleinian slice types (A and D only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoxeterType {
    pub family: CoxeterFamily,
    pub rank: u32,
}

impl CoxeterType {
    pub fn order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            CoxeterFamily::A => fact(n + 1),
            CoxeterFamily::B | CoxeterFamily::C => (1u64 << n) * fact(n),
            CoxeterFamily::D => (1u64 << (n - 1)) * fact(n),
        }
    }

    pub fn reflection_count(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            CoxeterFamily::A => n * (n + 1) / 2,
            CoxeterFamily::B | CoxeterFamily::C => n * n,
            CoxeterFamily::D => n * (n - 1),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            CoxeterFamily::A => 'A',
            CoxeterFamily::B => 'B',
            CoxeterFamily::C => 'C',
            CoxeterFamily::D => 'D',
        };
        write!(f, "{c}{}", self.rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pi1Action {
    Trivial,
    Order2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinianLeaf {
    pub boundary_orbit: OrbitLabel,
    pub slice_type: CoxeterType,
    pub pi1_action: Pi1Action,
    pub fixed_space_dim: u32,
    pub folded_weyl: CoxeterType,
    /// Table record that classified the reduced pair.
    pub reduction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamikawaData {
    pub orbit: OrbitLabel,
    pub h2_dim: u32,
    pub leaves: Vec<KleinianLeaf>,
    pub cartan_dim: u32,
    /// One factor per leaf, sorted.
    pub weyl_group: Vec<CoxeterType>,
}

impl NamikawaData {
    pub fn weyl_order(&self) -> u64 {
        self.weyl_group.iter().map(CoxeterType::order).product()
    }

    pub fn reflection_count(&self) -> u64 {
        self.weyl_group.iter().map(CoxeterType::reflection_count).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Gl,
    Sp,
    So,
}

impl Form {
    fn flip(self) -> Form {
        match self {
            Form::Gl => Form::Gl,
            Form::Sp => Form::So,
            Form::So => Form::Sp,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Form::Gl => "gl",
            Form::Sp => "sp",
            Form::So => "so",
        }
    }

    /// Parts carrying an orthogonal multiplicity factor.
    fn orthogonal_part(self, p: u32) -> bool {
        match self {
            Form::Gl => false,
            Form::So => p % 2 == 1,
            Form::Sp => p % 2 == 0,
        }
    }
}

/// Result of cancelling common leading rows and columns.
struct Reduced {
    lambda: Vec<u32>,
    mu: Vec<u32>,
    form: Form,
    rows: usize,
    cols: u32,
}

fn reduce(lambda: &Partition, mu: &Partition, form: Form) -> Reduced {
    let mut l: Vec<u32> = lambda.parts().to_vec();
    let mut m: Vec<u32> = mu.parts().to_vec();
    let (mut form, mut rows, mut cols) = (form, 0usize, 0u32);
    loop {
        if l.is_empty() || m.is_empty() {
            break;
        }
        if l[0] == m[0] {
            l.remove(0);
            m.remove(0);
            rows += 1;
        } else if l.len() == m.len() {
            l = l.iter().map(|x| x - 1).filter(|&x| x > 0).collect();
            m = m.iter().map(|x| x - 1).filter(|&x| x > 0).collect();
            cols += 1;
            form = form.flip();
        } else {
            break;
        }
    }
    Reduced { lambda: l, mu: m, form, rows, cols }
}

/// Matches the reduced pair against the known irreducible degenerations,
/// returning the record id and parameter `k`.
fn classify(r: &Reduced) -> Option<(&'static str, u32)> {
    let (l, m) = (r.lambda.as_slice(), r.mu.as_slice());
    match (r.form, l, m) {
        (Form::Gl, [a], [b, 1]) if *a == b + 1 && *b >= 1 => Some(("a", *b)),
        (Form::Sp, [2], [1, 1]) => Some(("sp-a", 1)),
        (Form::Sp, [a], [b, 2]) if a % 2 == 0 && *a >= 4 && *b + 2 == *a => Some(("b", a / 2)),
        (Form::So, [a], [b, 1, 1]) if a % 2 == 1 && *a >= 3 && b + 2 == *a => Some(("c", (a - 1) / 2)),
        (Form::Sp, [a, a2], [b, b2, 2]) if a == a2 && b == b2 && a % 2 == 1 && b + 1 == *a && *b >= 2 => {
            Some(("d", (a - 1) / 2))
        }
        (Form::So, [a, a2], [b, b2, 1, 1]) if a == a2 && b == b2 && a % 2 == 0 && b + 1 == *a && *b >= 1 => {
            Some(("e", a / 2))
        }
        _ => None,
    }
}

/// Sign patterns on the reduced boundary's orthogonal parts realized by
/// `Z_G(e)` for `e` in the big boundary orbit. A reduced part is free when its
/// big part has rows outside the reduced block.
fn realizable_signs(family: Family, mu: &Partition, r: &Reduced) -> BTreeSet<BTreeMap<u32, i8>> {
    let big_form = match family {
        Family::A => Form::Gl,
        Family::B | Family::D => Form::So,
        Family::C => Form::Sp,
    };
    let big: Vec<(u32, u32)> = mu.multiplicities().into_iter().filter(|&(p, _)| big_form.orthogonal_part(p)).collect();
    let red_parts: BTreeSet<u32> = r.mu.iter().copied().filter(|&p| r.form.orthogonal_part(p)).collect();
    let window = r.rows..r.rows + r.mu.len();
    let mut linked: BTreeMap<u32, Option<usize>> = BTreeMap::new();
    for &v in &red_parts {
        let big_value = v + r.cols;
        let rows: Vec<usize> = (0..mu.len()).filter(|&i| mu.part(i) == big_value).collect();
        let inside = rows.iter().all(|i| window.contains(i));
        let idx = big.iter().position(|&(p, _)| p == big_value);
        linked.insert(v, if inside { idx } else { None });
    }
    let mut out = BTreeSet::new();
    let n = big.len();
    for mask in 0u32..(1 << n) {
        let s: Vec<i8> = (0..n).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
        if family.is_orthogonal() && s.iter().filter(|&&x| x < 0).count() % 2 == 1 {
            continue;
        }
        let free: Vec<u32> = linked.iter().filter(|(_, l)| l.is_none()).map(|(&v, _)| v).collect();
        for fmask in 0u32..(1 << free.len()) {
            let mut pat = BTreeMap::new();
            for (&v, l) in &linked {
                let sign = match l {
                    Some(i) => s[*i],
                    None => {
                        let j = free.iter().position(|&f| f == v).unwrap();
                        if fmask & (1 << j) != 0 {
                            -1
                        } else {
                            1
                        }
                    }
                };
                pat.insert(v, sign);
            }
            out.insert(pat);
        }
    }
    out
}

fn sign(p: &BTreeMap<u32, i8>, v: u32) -> i8 {
    p.get(&v).copied().unwrap_or(1)
}

fn folded(slice: CoxeterType, action: Pi1Action) -> Result<(CoxeterType, u32)> {
    let k = slice.rank;
    match (slice.family, action) {
        (_, Pi1Action::Trivial) => Ok((slice, k)),
        (CoxeterFamily::A, Pi1Action::Order2) if k % 2 == 1 => {
            Ok((CoxeterType { family: CoxeterFamily::C, rank: k.div_ceil(2) }, k.div_ceil(2)))
        }
        (CoxeterFamily::D, Pi1Action::Order2) => Ok((CoxeterType { family: CoxeterFamily::B, rank: k - 1 }, k - 1)),
        _ => Err(Error::ActionUndetermined(format!("order-2 action on {slice}"))),
    }
}

/// `(pi_1 action, number of leaves)` for one degeneration.
fn actions_for(
    rec: &ReductionRecord,
    k: u32,
    lambda: &OrbitLabel,
    pats: &BTreeSet<BTreeMap<u32, i8>>,
) -> Result<Vec<Pi1Action>> {
    let fold = |b: bool| if b { Pi1Action::Order2 } else { Pi1Action::Trivial };
    let any = |f: &dyn Fn(&BTreeMap<u32, i8>) -> bool| pats.iter().any(f);
    Ok(match rec.action.as_str() {
        "trivial" => vec![Pi1Action::Trivial],
        "b" if k >= 3 => vec![fold(any(&|p| sign(p, 2 * k - 2) != sign(p, 2)))],
        "b" => vec![fold(any(&|p| sign(p, 2) == -1))],
        "c" => vec![fold(k >= 2 && any(&|p| sign(p, 1) == -1))],
        "d" => vec![fold(k >= 2 && any(&|p| sign(p, 2 * k) == -1))],
        "e" => {
            let (a, b) = (2 * k - 1, 1);
            let both = k >= 2 && any(&|p| sign(p, a) == -1 && sign(p, b) == -1);
            if lambda.is_very_even() {
                vec![fold(both)]
            } else {
                // reduced determinant: product of the signs of the odd parts
                let swap = any(&|p| p.iter().filter(|(v, _)| *v % 2 == 1).map(|(_, s)| *s).product::<i8>() == -1);
                if swap {
                    vec![fold(both)]
                } else {
                    vec![fold(both); rec.branches as usize]
                }
            }
        }
        other => return Err(Error::Table(format!("unknown action rule {other:?} in record {}", rec.id))),
    })
}

pub fn codim2_leaves_with(table: &CriterionTable, o: &OrbitLabel) -> Result<Vec<KleinianLeaf>> {
    let form = match o.ty.family {
        Family::A => Form::Gl,
        Family::B | Family::D => Form::So,
        Family::C => Form::Sp,
    };
    let d = orbit_dim(o);
    let mut out = Vec::new();
    for mu in enumerate_orbits(o.ty) {
        if orbit_dim(&mu) + 2 != d || !closure_leq(&mu, o)? {
            continue;
        }
        let red = reduce(&o.partition, &mu.partition, form);
        let (id, k) = classify(&red).ok_or_else(|| {
            Error::ReductionTableGap(format!(
                "{o} -> {mu}: reduced pair {:?} > {:?} in {}",
                red.lambda,
                red.mu,
                red.form.name()
            ))
        })?;
        let rec = table.reduction(id)?;
        if rec.algebra != red.form.name() || k < rec.k_min {
            return Err(Error::ReductionTableGap(format!("record {id} does not cover {} at k={k}", red.form.name())));
        }
        let slice = CoxeterType {
            family: match rec.slice.as_str() {
                "A" => CoxeterFamily::A,
                "D" => CoxeterFamily::D,
                other => return Err(Error::Table(format!("slice type {other:?} cannot occur for classical algebras"))),
            },
            rank: rec.slice_rank(k)?,
        };
        let pats = realizable_signs(o.ty.family, &mu.partition, &red);
        for action in actions_for(rec, k, o, &pats)? {
            let (w, fixed) = folded(slice, action)?;
            out.push(KleinianLeaf {
                boundary_orbit: mu.clone(),
                slice_type: slice,
                pi1_action: action,
                fixed_space_dim: fixed,
                folded_weyl: w,
                reduction: id.to_string(),
            });
        }
    }
    Ok(out)
}

pub fn codim2_leaves(o: &OrbitLabel) -> Result<Vec<KleinianLeaf>> {
    codim2_leaves_with(&*tables::active()?, o)
}

pub fn namikawa_space(o: &OrbitLabel) -> Result<NamikawaData> {
    let leaves = codim2_leaves(o)?;
    let h2 = h2_dim(o);
    let cartan_dim = h2 + leaves.iter().map(|l| l.fixed_space_dim).sum::<u32>();
    let mut weyl_group: Vec<CoxeterType> = leaves.iter().map(|l| l.folded_weyl).collect();
    weyl_group.sort();
    Ok(NamikawaData { orbit: o.clone(), h2_dim: h2, leaves, cartan_dim, weyl_group })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylMatchReport {
    pub orbit: OrbitLabel,
    pub datum: InductionDatum,
    pub cartan_dim: u32,
    pub center_dim: u32,
    pub namikawa_weyl_order: u64,
    pub stabilizer_order: u64,
    pub namikawa_reflections: u64,
    pub stabilizer_reflections: u64,
    pub pass: bool,
}

/// Compares the Namikawa side with `W(l, O')` of the birational datum.
pub fn check_weyl_match(o: &OrbitLabel) -> Result<WeylMatchReport> {
    let nd = namikawa_space(o)?;
    let datum = birational_datum(o)?;
    let action = normalizer_for(o.ty, &datum.levi)?;
    let stab = orbit_stabilizer_group(&action, &datum.levi, &datum.gl_orbits, datum.tail_orbit.as_ref())?;
    let center_dim = datum.levi.center_dim(o.ty);
    let stabilizer_order = stab.order() as u64;
    let stabilizer_reflections = stab.reflection_count() as u64;
    let pass = nd.cartan_dim == center_dim
        && nd.weyl_order() == stabilizer_order
        && nd.reflection_count() == stabilizer_reflections;
    Ok(WeylMatchReport {
        orbit: o.clone(),
        datum,
        cartan_dim: nd.cartan_dim,
        center_dim,
        namikawa_weyl_order: nd.weyl_order(),
        stabilizer_order,
        namikawa_reflections: nd.reflection_count(),
        stabilizer_reflections,
        pass,
    })
}

/// `check_weyl_match` for every orbit of `ty`, in orbit order.
pub fn verify_weyl_match(ty: ClassicalType) -> Result<Vec<WeylMatchReport>> {
    crate::induction::birationally_rigid_data(ty)?;
    enumerate_orbits(ty).par_iter().map(check_weyl_match).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> OrbitLabel {
        s.parse().unwrap()
    }

    fn weyl(s: &str) -> Vec<String> {
        namikawa_space(&o(s)).unwrap().weyl_group.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn leaves_small() {
        let l = codim2_leaves(&o("A2:3")).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].boundary_orbit, o("A2:2,1"));
        assert_eq!((l[0].slice_type.to_string(), l[0].fixed_space_dim), ("A2".to_string(), 2));
        let l = codim2_leaves(&o("C2:2,2")).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!((l[0].slice_type.to_string(), l[0].fixed_space_dim), ("A1".to_string(), 1));
        assert!(codim2_leaves(&o("C2:2,1,1")).unwrap().is_empty());
    }

    #[test]
    fn namikawa_small() {
        let n = namikawa_space(&o("A2:3")).unwrap();
        assert_eq!((n.cartan_dim, n.weyl_order()), (2, 6));
        for s in ["B2:5", "C2:4"] {
            let n = namikawa_space(&o(s)).unwrap();
            assert_eq!((n.cartan_dim, n.weyl_order()), (2, 8));
        }
        let n = namikawa_space(&o("C2:2,1,1")).unwrap();
        assert_eq!((n.cartan_dim, n.weyl_order()), (0, 1));
        assert_eq!(weyl("D4:7,1"), ["D4"]);
        assert_eq!(weyl("D4:4,4:I"), ["C2"]);
        assert_eq!(weyl("C3:3,3"), ["A1"]);
        assert_eq!(weyl("C5:5,5"), ["C2"]);
        let n = namikawa_space(&o("D5:2^4,1,1")).unwrap();
        assert_eq!((n.h2_dim, n.leaves.len(), n.cartan_dim), (1, 0, 1));
    }

    #[test]
    fn weyl_match_small() {
        for s in ["C2:2,2", "A3:2,2", "C2:2,1,1", "D4:4,4:I", "B3:5,1,1"] {
            let r = check_weyl_match(&o(s)).unwrap();
            assert!(r.pass, "{s}: {r:?}");
        }
    }

    #[test]
    fn table_gap_is_reported() {
        let table = CriterionTable::parse("version = 1\n").unwrap();
        assert!(matches!(codim2_leaves_with(&table, &o("C2:2,2")), Err(Error::ReductionTableGap(_))));
    }
}

//! Lusztig-Spaltenstein induction, collapses, rigidity and birational rigidity.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::{enumerate_orbits, is_valid_partition, is_very_even_partition, OrbitLabel, VeryEvenTag};
use crate::partition::{partitions_of, Partition};
use crate::rootsys::{enumerate_levis, maximal_levis, normalizer_for, ClassicalType, DClass, Family, LeviLabel};
use crate::tables::{self, CriterionTable};
use crate::Rational;

/// A point of `z(l)` in block coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CentralParameter {
    pub coords: Vec<Rational>,
}

impl CentralParameter {
    pub fn zero(k: usize) -> Self {
        CentralParameter { coords: vec![Rational::from_integer(0); k] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == Rational::from_integer(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InductionDatum {
    pub ambient: ClassicalType,
    pub levi: LeviLabel,
    pub gl_orbits: Vec<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_orbit: Option<OrbitLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<CentralParameter>,
}

impl InductionDatum {
    pub fn new(
        ambient: ClassicalType,
        levi: LeviLabel,
        gl_orbits: Vec<Partition>,
        tail_orbit: Option<OrbitLabel>,
    ) -> Result<Self> {
        let d = InductionDatum { ambient, levi, gl_orbits, tail_orbit, xi: None };
        d.validate()?;
        Ok(d)
    }

    pub fn with_xi(mut self, xi: CentralParameter) -> Result<Self> {
        self.xi = Some(xi);
        self.validate()?;
        Ok(self)
    }

    /// The datum `(l, 0, 0)`.
    pub fn zero(ambient: ClassicalType, levi: LeviLabel) -> Result<Self> {
        let gl = levi.blocks.iter().map(|&a| Partition::ones(a)).collect();
        let tail = levi.tail_type(ambient).filter(|_| levi.tail_rank > 0).map(OrbitLabel::zero);
        InductionDatum::new(ambient, levi, gl, tail)
    }

    /// `(g, o)`.
    pub fn identity(o: &OrbitLabel) -> Self {
        let levi = LeviLabel::full(o.ty);
        match o.ty.family {
            Family::A => InductionDatum { ambient: o.ty, levi, gl_orbits: vec![o.partition.clone()], tail_orbit: None, xi: None },
            _ => InductionDatum {
                ambient: o.ty,
                levi,
                gl_orbits: vec![],
                tail_orbit: if o.ty.rank > 0 { Some(o.clone()) } else { None },
                xi: None,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.levi.validate(self.ambient)?;
        if self.gl_orbits.len() != self.levi.blocks.len() {
            return Err(Error::InvalidDatum(format!(
                "{} gl orbits for {} blocks",
                self.gl_orbits.len(),
                self.levi.blocks.len()
            )));
        }
        for (p, &a) in self.gl_orbits.iter().zip(&self.levi.blocks) {
            if p.size() != a {
                return Err(Error::InvalidDatum(format!("gl orbit {p} is not a partition of {a}")));
            }
        }
        match (&self.tail_orbit, self.levi.tail_type(self.ambient)) {
            (None, None) => {}
            (None, Some(_)) if self.levi.tail_rank == 0 => {}
            (Some(t), Some(tt)) if tt == t.ty && self.levi.tail_rank > 0 => {
                OrbitLabel::new(t.ty, t.partition.clone(), t.tag)?;
            }
            (Some(t), _) => {
                return Err(Error::InvalidDatum(format!("tail orbit {t} does not match levi {}", self.levi)));
            }
            (None, Some(tt)) => {
                return Err(Error::InvalidDatum(format!("levi {} needs a tail orbit of {tt}", self.levi)));
            }
        }
        if let Some(xi) = &self.xi {
            if xi.coords.len() != self.levi.blocks.len() {
                return Err(Error::InvalidDatum(format!(
                    "xi has {} coordinates, levi has {} blocks",
                    xi.coords.len(),
                    self.levi.blocks.len()
                )));
            }
            if self.ambient.family == Family::A {
                let trace: Rational = xi.coords.iter().zip(&self.levi.blocks).map(|(x, &a)| *x * a as i64).sum();
                if trace != Rational::from_integer(0) {
                    return Err(Error::InvalidDatum(format!("xi violates the trace relation (sum a_i xi_i = {trace})")));
                }
            }
        }
        Ok(())
    }

    /// The tail partition, `[1]` for a `B0` tail and empty otherwise when `m = 0`.
    pub fn tail_partition(&self) -> Partition {
        match (&self.tail_orbit, self.levi.tail_type(self.ambient)) {
            (Some(t), _) => t.partition.clone(),
            (None, Some(tt)) => Partition::ones(tt.natural_dim()),
            (None, None) => Partition::empty(),
        }
    }

    /// Dimension of the orbit `O'` inside `l`.
    pub fn levi_orbit_dim(&self) -> u64 {
        let gl: u64 = self
            .gl_orbits
            .iter()
            .map(|p| {
                let a = p.size() as u64;
                a * a - p.sum_sq_transpose()
            })
            .sum();
        gl + self.tail_orbit.as_ref().map(crate::orbits::orbit_dim).unwrap_or(0)
    }
}

fn bad_parity(family: Family) -> u32 {
    match family {
        Family::C => 1,
        _ => 0,
    }
}

/// The largest `family`-valid partition dominated by `p`.
pub fn collapse(family: Family, p: &Partition) -> Partition {
    if family == Family::A {
        return p.clone();
    }
    let bad = bad_parity(family);
    let mut parts: Vec<u32> = p.parts().to_vec();
    loop {
        let q = Partition::new(parts.clone())
            .multiplicities()
            .into_iter()
            .find(|&(q, m)| q % 2 == bad && m % 2 == 1)
            .map(|(q, _)| q);
        let Some(q) = q else { break };
        let last = parts.iter().rposition(|&x| x == q).unwrap();
        parts[last] = q - 1;
        let j = (last + 1..).find(|&j| parts.get(j).copied().unwrap_or(0) < q - 1).unwrap();
        if j == parts.len() {
            parts.push(0);
        }
        parts[j] += 1;
    }
    Partition::new(parts)
}

/// Tag of an induced very even orbit: the tail's tag, else the levi's class.
fn induced_tag(d: &InductionDatum) -> Result<VeryEvenTag> {
    if let Some(t) = d.tail_orbit.as_ref().and_then(|t| t.tag) {
        return Ok(t);
    }
    match d.levi.d_class {
        Some(DClass::Plus) => Ok(VeryEvenTag::I),
        Some(DClass::Minus) => Ok(VeryEvenTag::II),
        None => Err(Error::Internal(format!("very even orbit induced from {} without a tag source", d.levi))),
    }
}

/// The dense orbit in `G (O' + n)`; `xi` is ignored.
pub fn induce(d: &InductionDatum) -> Result<OrbitLabel> {
    d.validate()?;
    let sum = d.gl_orbits.iter().fold(Partition::empty(), |acc, p| acc.add(p));
    let ty = d.ambient;
    if ty.family == Family::A {
        return OrbitLabel::new(ty, sum, None);
    }
    let raw = d.tail_partition().add(&sum).add(&sum);
    let p = collapse(ty.family, &raw);
    let tag = if is_very_even_partition(ty.family, &p) { Some(induced_tag(d)?) } else { None };
    OrbitLabel::new(ty, p, tag)
}

pub fn dim_nilradical(ambient: ClassicalType, levi: &LeviLabel) -> Result<u64> {
    levi.validate(ambient)?;
    Ok((ambient.lie_dim() - levi.dim(ambient)) / 2)
}

/// Zero-orbit gl blocks whose Richardson induction gives the block orbits.
fn refined_blocks(d: &InductionDatum) -> Vec<u32> {
    let mut out: Vec<u32> = d.gl_orbits.iter().flat_map(|p| p.transpose().parts().to_vec()).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Runs the tail-collapse rule with the refined blocks added in the given order.
///
/// With `very_even_exception` a collapsing step onto an empty or very even
/// tail stays birational: both halves of the `O(N)`-orbit induce the same orbit.
pub(crate) fn tail_collapse_birational(family: Family, tail: &Partition, blocks: &[u32], very_even_exception: bool) -> bool {
    let mut nu = tail.clone();
    for &b in blocks {
        let cand = nu.add(&Partition::new(vec![2; b as usize]));
        if is_valid_partition(family, &cand) {
            nu = cand;
        } else if very_even_exception && (nu.is_empty() || is_very_even_partition(family, &nu)) {
            nu = collapse(family, &cand);
        } else {
            return false;
        }
    }
    true
}

pub fn is_birational_with(table: &CriterionTable, d: &InductionDatum) -> Result<bool> {
    d.validate()?;
    let rule = table.birationality_rule(d.ambient.family)?;
    match rule.rule.as_str() {
        "always" => Ok(true),
        "tail-collapse" => Ok(tail_collapse_birational(
            d.ambient.family,
            &d.tail_partition(),
            &refined_blocks(d),
            rule.very_even_exception,
        )),
        other => Err(Error::Table(format!("unknown birationality rule {other:?}"))),
    }
}

/// Whether the generalized Springer map of `d` is birational onto its image.
pub fn is_birational_induction(d: &InductionDatum) -> Result<bool> {
    is_birational_with(&*tables::active()?, d)
}

/// Every datum on `levi`: all gl orbit assignments and all tail orbits.
pub fn data_on_levi(ambient: ClassicalType, levi: &LeviLabel) -> Vec<InductionDatum> {
    let mut out: Vec<InductionDatum> = vec![InductionDatum {
        ambient,
        levi: levi.clone(),
        gl_orbits: vec![],
        tail_orbit: None,
        xi: None,
    }];
    for &a in &levi.blocks {
        let choices = partitions_of(a);
        out = out
            .into_iter()
            .flat_map(|d| {
                choices.iter().map(move |p| {
                    let mut e = d.clone();
                    e.gl_orbits.push(p.clone());
                    e
                })
            })
            .collect();
    }
    if let Some(tt) = levi.tail_type(ambient).filter(|_| levi.tail_rank > 0) {
        let tails = enumerate_orbits(tt);
        out = out
            .into_iter()
            .flat_map(|d| {
                tails.iter().map(move |t| {
                    let mut e = d.clone();
                    e.tail_orbit = Some(t.clone());
                    e
                })
            })
            .collect();
    }
    out
}

/// Not induced from any proper Levi.
pub fn is_rigid(o: &OrbitLabel) -> Result<bool> {
    for levi in maximal_levis(o.ty) {
        for d in data_on_levi(o.ty, &levi) {
            if induce(&d)? == *o {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

static BIR_RIGID_CACHE: Lazy<Mutex<HashMap<OrbitLabel, bool>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Brute force: no datum on a maximal Levi induces `o` birationally.
pub fn is_birationally_rigid_brute(o: &OrbitLabel) -> Result<bool> {
    if let Some(&b) = BIR_RIGID_CACHE.lock().unwrap().get(o) {
        return Ok(b);
    }
    let table = tables::active()?;
    let mut rigid = true;
    'outer: for levi in maximal_levis(o.ty) {
        for d in data_on_levi(o.ty, &levi) {
            if induce(&d)? == *o && is_birational_with(&table, &d)? {
                rigid = false;
                break 'outer;
            }
        }
    }
    BIR_RIGID_CACHE.lock().unwrap().insert(o.clone(), rigid);
    Ok(rigid)
}

/// Birational rigidity, computed by brute force and from the Namikawa space;
/// the two must agree.
pub fn is_birationally_rigid(o: &OrbitLabel) -> Result<bool> {
    let brute = is_birationally_rigid_brute(o)?;
    let cartan = crate::namikawa::namikawa_space(o)?.cartan_dim;
    if brute != (cartan == 0) {
        return Err(Error::InconsistentBirationalRigidity(format!(
            "{o}: brute force says {}, Namikawa space has dimension {cartan}",
            if brute { "rigid" } else { "induced" }
        )));
    }
    Ok(brute)
}

/// Whether some coset of `N_W(W_L)/W_L` acts on the tail by an odd number of sign changes.
pub(crate) fn tail_tags_conjugate(ambient: ClassicalType, levi: &LeviLabel) -> Result<bool> {
    if ambient.family != Family::D || levi.tail_rank == 0 {
        return Ok(false);
    }
    Ok(normalizer_for(ambient, levi)?.elements.iter().any(|g| g.tail_odd))
}

/// Canonical representative of a birationally rigid datum up to conjugacy.
pub(crate) fn canonical_datum(d: &InductionDatum) -> Result<InductionDatum> {
    let mut d = d.clone();
    if let Some(t) = &d.tail_orbit {
        if t.tag == Some(VeryEvenTag::II) && tail_tags_conjugate(d.ambient, &d.levi)? {
            d.tail_orbit = Some(t.toggled());
        }
    }
    Ok(d)
}

type DataMap = Arc<Vec<(InductionDatum, OrbitLabel)>>;

static BIR_DATA_CACHE: Lazy<Mutex<HashMap<ClassicalType, DataMap>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// All classes of birationally rigid data `(l, 0, nu)` that induce birationally,
/// with the induced orbit.
pub fn birationally_rigid_data(ty: ClassicalType) -> Result<DataMap> {
    if let Some(m) = BIR_DATA_CACHE.lock().unwrap().get(&ty) {
        return Ok(m.clone());
    }
    let table = tables::active()?;
    let mut out: Vec<(InductionDatum, OrbitLabel)> = Vec::new();
    for levi in enumerate_levis(ty) {
        for d in data_on_levi(ty, &levi) {
            if !d.gl_orbits.iter().all(|p| p.parts().iter().all(|&x| x == 1)) {
                continue;
            }
            if let Some(t) = &d.tail_orbit {
                if !is_birationally_rigid_brute(t)? {
                    continue;
                }
            }
            let d = canonical_datum(&d)?;
            if out.iter().any(|(e, _)| *e == d) {
                continue;
            }
            if is_birational_with(&table, &d)? {
                let o = induce(&d)?;
                out.push((d, o));
            }
        }
    }
    let arc = Arc::new(out);
    BIR_DATA_CACHE.lock().unwrap().insert(ty, arc.clone());
    Ok(arc)
}

/// All classes of birationally rigid data inducing `o` birationally.
pub fn birational_data_for(o: &OrbitLabel) -> Result<Vec<InductionDatum>> {
    Ok(birationally_rigid_data(o.ty)?.iter().filter(|(_, p)| p == o).map(|(d, _)| d.clone()).collect())
}

/// The unique class of birationally rigid data inducing `o` birationally.
pub fn birational_datum(o: &OrbitLabel) -> Result<InductionDatum> {
    let mut found = birational_data_for(o)?;
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        n => Err(Error::UniquenessViolated(format!(
            "{o} has {n} birationally rigid birational induction data{}",
            if n == 0 {
                String::new()
            } else {
                format!(
                    ": {}",
                    found.iter().map(|d| d.levi.to_string()).collect::<Vec<_>>().join(", ")
                )
            }
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessRow {
    pub orbit: OrbitLabel,
    pub count: usize,
    pub datum: Option<InductionDatum>,
    pub rigid: bool,
    pub birationally_rigid: bool,
}

/// Birational data and rigidity of every orbit of `ty`. Disagreeing rigidity
/// tests surface as an error.
pub fn verify_uniqueness(ty: ClassicalType) -> Result<Vec<UniquenessRow>> {
    birationally_rigid_data(ty)?;
    enumerate_orbits(ty)
        .par_iter()
        .map(|o| {
            let data = birational_data_for(o)?;
            Ok(UniquenessRow {
                orbit: o.clone(),
                count: data.len(),
                datum: (data.len() == 1).then(|| data[0].clone()),
                rigid: is_rigid(o)?,
                birationally_rigid: is_birationally_rigid(o)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(f: Family, n: u32) -> ClassicalType {
        ClassicalType::new(f, n).unwrap()
    }

    fn o(s: &str) -> OrbitLabel {
        s.parse().unwrap()
    }

    #[test]
    fn collapses() {
        assert_eq!(collapse(Family::C, &Partition::new(vec![2, 2])).parts(), &[2, 2]);
        assert_eq!(collapse(Family::B, &Partition::new(vec![3, 2])).parts(), &[3, 1, 1]);
        assert_eq!(collapse(Family::D, &Partition::new(vec![3, 3, 1, 1])).parts(), &[3, 3, 1, 1]);
        assert_eq!(collapse(Family::D, &Partition::new(vec![8])).parts(), &[7, 1]);
        assert_eq!(collapse(Family::C, &Partition::new(vec![3, 3, 3, 1])).parts(), &[3, 3, 2, 2]);
    }

    #[test]
    fn induce_examples() {
        let a2 = t(Family::A, 2);
        let d = InductionDatum::zero(a2, LeviLabel::new(vec![1, 1, 1], 0, None)).unwrap();
        assert_eq!(induce(&d).unwrap(), o("A2:3"));
        let c2 = t(Family::C, 2);
        let d = InductionDatum::zero(c2, LeviLabel::new(vec![2], 0, None)).unwrap();
        assert_eq!(induce(&d).unwrap(), o("C2:2,2"));
        assert!(is_birational_induction(&d).unwrap());
        let b2 = t(Family::B, 2);
        let d = InductionDatum::zero(b2, LeviLabel::new(vec![2], 0, None)).unwrap();
        assert_eq!(induce(&d).unwrap(), o("B2:3,1,1"));
        assert!(!is_birational_induction(&d).unwrap());
        let d4 = t(Family::D, 4);
        let d = InductionDatum::zero(d4, LeviLabel::new(vec![2, 2], 0, Some(DClass::Minus))).unwrap();
        assert_eq!(induce(&d).unwrap(), o("D4:4,4:II"));
    }

    #[test]
    fn nilradicals() {
        assert_eq!(dim_nilradical(t(Family::A, 2), &LeviLabel::new(vec![2, 1], 0, None)).unwrap(), 2);
        assert_eq!(dim_nilradical(t(Family::C, 2), &LeviLabel::new(vec![2], 0, None)).unwrap(), 3);
        assert_eq!(dim_nilradical(t(Family::C, 2), &LeviLabel::full(t(Family::C, 2))).unwrap(), 0);
    }

    #[test]
    fn rigidity_examples() {
        assert!(is_rigid(&o("C2:1^4")).unwrap());
        assert!(!is_rigid(&o("A2:3")).unwrap());
        assert!(is_rigid(&o("C2:2,1,1")).unwrap());
        assert!(is_birationally_rigid(&o("C2:2,1,1")).unwrap());
        assert!(is_birationally_rigid(&o("B3:1^7")).unwrap());
        assert!(!is_birationally_rigid(&o("A3:2,2")).unwrap());
    }

    #[test]
    fn datum_examples() {
        let d = birational_datum(&o("A2:2,1")).unwrap();
        assert_eq!(d.levi, LeviLabel::new(vec![2, 1], 0, None));
        let d = birational_datum(&o("C2:2,2")).unwrap();
        assert_eq!(d.levi, LeviLabel::new(vec![2], 0, None));
        assert_eq!(d.gl_orbits, vec![Partition::ones(2)]);
        let d = birational_datum(&o("C2:2,1,1")).unwrap();
        assert!(d.levi.is_full(t(Family::C, 2)));
        let d = birational_datum(&o("D4:4,4:I")).unwrap();
        assert_eq!(d.levi, LeviLabel::new(vec![2, 2], 0, Some(DClass::Plus)));
    }

    fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn criterion_ignores_block_order() {
        for ty in [t(Family::B, 4), t(Family::C, 4), t(Family::D, 4), t(Family::D, 5)] {
            for levi in enumerate_levis(ty) {
                for d in data_on_levi(ty, &levi) {
                    let blocks = refined_blocks(&d);
                    let exc = ty.family == Family::D;
                    let answers: Vec<bool> = permutations(&blocks)
                        .iter()
                        .map(|p| tail_collapse_birational(ty.family, &d.tail_partition(), p, exc))
                        .collect();
                    assert!(answers.iter().all(|&a| a == answers[0]), "{ty} {} {:?}", levi, d.gl_orbits);
                }
            }
        }
    }

    #[test]
    fn so6_matches_sl4() {
        // gl1 x so4 with [2,2]_I corresponds to s(gl2 x gl2) with ([2],[1,1]) in sl4
        let d3 = ClassicalType::tail(Family::D, 3);
        let tail = OrbitLabel::new(ClassicalType::tail(Family::D, 2), Partition::new(vec![2, 2]), Some(VeryEvenTag::I)).unwrap();
        let d = InductionDatum::new(d3, LeviLabel::new(vec![1], 2, None), vec![Partition::ones(1)], Some(tail)).unwrap();
        assert_eq!(induce(&d).unwrap().partition.parts(), &[3, 3]);
        assert!(is_birational_induction(&d).unwrap());
        assert!(!is_birationally_rigid_brute(&OrbitLabel::new(d3, Partition::new(vec![3, 3]), None).unwrap()).unwrap());
    }

    #[test]
    fn missing_rule_is_reported() {
        let table = CriterionTable::parse("version = 1\n").unwrap();
        let d = InductionDatum::zero(t(Family::C, 2), LeviLabel::new(vec![2], 0, None)).unwrap();
        assert!(matches!(is_birational_with(&table, &d), Err(Error::CriterionNotTranscribed(_))));
    }

    #[test]
    fn invalid_data_are_rejected() {
        let c2 = t(Family::C, 2);
        assert!(InductionDatum::new(c2, LeviLabel::new(vec![2], 0, None), vec![Partition::ones(3)], None).is_err());
        let d = InductionDatum::zero(t(Family::A, 2), LeviLabel::new(vec![2, 1], 0, None)).unwrap();
        let xi = CentralParameter { coords: vec![Rational::from_integer(1), Rational::from_integer(1)] };
        assert!(d.clone().with_xi(xi).is_err());
        let xi = CentralParameter { coords: vec![Rational::from_integer(1), Rational::from_integer(-2)] };
        assert!(d.with_xi(xi).is_ok());
    }
}

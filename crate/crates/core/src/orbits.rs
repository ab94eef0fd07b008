//! Nilpotent orbits of classical Lie algebras as partitions.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::rootsys::{ClassicalType, Family};

/// Distinguishes the two orbits sharing a very even partition in type D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VeryEvenTag {
    I,
    II,
}

impl VeryEvenTag {
    pub fn other(self) -> Self {
        match self {
            VeryEvenTag::I => VeryEvenTag::II,
            VeryEvenTag::II => VeryEvenTag::I,
        }
    }
}

impl fmt::Display for VeryEvenTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VeryEvenTag::I => "I",
            VeryEvenTag::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitLabel {
    #[serde(rename = "type")]
    pub ty: ClassicalType,
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<VeryEvenTag>,
}

/// The first violated parity rule, if any.
fn parity_violation(family: Family, p: &Partition) -> Option<String> {
    for (part, mult) in p.multiplicities() {
        let bad = match family {
            Family::A => false,
            Family::B | Family::D => part % 2 == 0,
            Family::C => part % 2 == 1,
        };
        if bad && mult % 2 == 1 {
            let kind = if part % 2 == 0 { "even" } else { "odd" };
            return Some(format!("{kind} part {part} has odd multiplicity"));
        }
    }
    None
}

pub fn is_valid_partition(family: Family, p: &Partition) -> bool {
    parity_violation(family, p).is_none()
}

/// All parts even and at least one part.
pub fn is_very_even_partition(family: Family, p: &Partition) -> bool {
    family == Family::D && !p.is_empty() && p.parts().iter().all(|x| x % 2 == 0)
}

impl OrbitLabel {
    /// Validates `partition` against `ty` (any rank, including Levi tail types).
    pub fn new(ty: ClassicalType, partition: Partition, tag: Option<VeryEvenTag>) -> Result<Self> {
        if partition.size() != ty.natural_dim() {
            return Err(Error::InvalidLabel(format!(
                "partition {partition} has size {} but {ty} needs {}",
                partition.size(),
                ty.natural_dim()
            )));
        }
        if let Some(msg) = parity_violation(ty.family, &partition) {
            return Err(Error::InvalidLabel(msg));
        }
        let very_even = is_very_even_partition(ty.family, &partition);
        match (very_even, tag) {
            (true, None) => Err(Error::InvalidLabel("very even partition requires tag".into())),
            (false, Some(_)) => Err(Error::InvalidLabel(format!("tag given for {partition}, which is not very even in {ty}"))),
            _ => Ok(OrbitLabel { ty, partition, tag }),
        }
    }

    pub fn zero(ty: ClassicalType) -> Self {
        OrbitLabel { ty, partition: Partition::ones(ty.natural_dim()), tag: None }
    }

    pub fn regular(ty: ClassicalType) -> Self {
        let n = ty.natural_dim();
        let parts = match ty.family {
            Family::D if n >= 2 => vec![n - 1, 1],
            _ => vec![n],
        };
        OrbitLabel { ty, partition: Partition::new(parts), tag: None }
    }

    pub fn is_very_even(&self) -> bool {
        self.tag.is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.partition.parts().iter().all(|&p| p == 1)
    }

    /// Same partition, other very even tag (identity otherwise).
    pub fn toggled(&self) -> Self {
        OrbitLabel { tag: self.tag.map(VeryEvenTag::other), ..self.clone() }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.ty)?;
        for (i, p) in self.partition.parts().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        if let Some(t) = self.tag {
            write!(f, ":{t}")?;
        }
        Ok(())
    }
}

/// Parses `B3:3,2,2` or `D4:2,2,2,2:I`. Parts may use exponents: `2^4,1`.
impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = |column: usize, message: &str| Error::Syntax { column, message: message.to_string() };
        let mut fields = s.split(':');
        let ty_text = fields.next().unwrap_or("");
        let ty: ClassicalType = ty_text.parse()?;
        let parts_text = fields.next().ok_or_else(|| syntax(ty_text.len() + 1, "expected ':' followed by parts"))?;
        let mut col = ty_text.len() + 2;
        let mut parts = Vec::new();
        for item in parts_text.split(',') {
            let item_trim = item.trim();
            let (base, exp) = match item_trim.split_once('^') {
                Some((b, e)) => (b, e),
                None => (item_trim, "1"),
            };
            let base: u32 = base.parse().map_err(|_| syntax(col, &format!("expected a positive integer, found {item_trim:?}")))?;
            let exp: u32 = exp.parse().map_err(|_| syntax(col, &format!("bad exponent in {item_trim:?}")))?;
            if base == 0 {
                return Err(syntax(col, "parts must be positive"));
            }
            parts.extend(std::iter::repeat(base).take(exp as usize));
            col += item.len() + 1;
        }
        let tag = match fields.next().map(str::trim) {
            None => None,
            Some("I") | Some("i") => Some(VeryEvenTag::I),
            Some("II") | Some("ii") => Some(VeryEvenTag::II),
            Some(other) => return Err(syntax(col, &format!("unknown tag {other:?} (expected I or II)"))),
        };
        if fields.next().is_some() {
            return Err(syntax(col, "too many ':' separated fields"));
        }
        validate_label(ty, parts, tag)
    }
}

/// Canonical label from raw parts, or a diagnostic naming the violated rule.
pub fn validate_label(ty: ClassicalType, parts: Vec<u32>, tag: Option<VeryEvenTag>) -> Result<OrbitLabel> {
    OrbitLabel::new(ty, Partition::new(parts), tag)
}

/// All orbits, sorted by dimension then partition; very even partitions appear twice.
pub fn enumerate_orbits(ty: ClassicalType) -> Vec<OrbitLabel> {
    let mut out = Vec::new();
    for p in partitions_of(ty.natural_dim()) {
        if !is_valid_partition(ty.family, &p) {
            continue;
        }
        if is_very_even_partition(ty.family, &p) {
            out.push(OrbitLabel { ty, partition: p.clone(), tag: Some(VeryEvenTag::I) });
            out.push(OrbitLabel { ty, partition: p, tag: Some(VeryEvenTag::II) });
        } else {
            out.push(OrbitLabel { ty, partition: p, tag: None });
        }
    }
    out.sort_by(|a, b| orbit_dim(a).cmp(&orbit_dim(b)).then_with(|| a.partition.cmp(&b.partition)).then(a.tag.cmp(&b.tag)));
    out
}

pub fn centralizer_dim(o: &OrbitLabel) -> u64 {
    let s = o.partition.sum_sq_transpose();
    let odd = o.partition.count_odd_parts() as u64;
    match o.ty.family {
        Family::A => s - 1,
        Family::B | Family::D => (s - odd) / 2,
        Family::C => (s + odd) / 2,
    }
}

pub fn orbit_dim(o: &OrbitLabel) -> u64 {
    o.ty.lie_dim() - centralizer_dim(o)
}

/// `a` lies in the closure of `b`.
pub fn closure_leq(a: &OrbitLabel, b: &OrbitLabel) -> Result<bool> {
    if a.ty != b.ty {
        return Err(Error::TypeMismatch(a.ty.to_string(), b.ty.to_string()));
    }
    if !a.partition.dominated_by(&b.partition) {
        return Ok(false);
    }
    match (a.tag, b.tag) {
        (Some(ta), Some(tb)) if ta != tb => {
            // Two very even orbits with different tags are comparable only through
            // an orbit in between that is not very even.
            if a.partition == b.partition {
                return Ok(false);
            }
            let between = partitions_of(a.ty.natural_dim()).into_iter().any(|nu| {
                is_valid_partition(a.ty.family, &nu)
                    && !is_very_even_partition(a.ty.family, &nu)
                    && nu != b.partition
                    && nu.dominated_by(&b.partition)
                    && a.partition.dominated_by(&nu)
            });
            Ok(between)
        }
        _ => Ok(true),
    }
}

/// Reductive part of the centralizer `Z_G(x)` by factor type.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CentralizerType {
    pub gl_factors: Vec<u32>,
    pub sp_factors: Vec<u32>,
    pub so_factors: Vec<u32>,
    /// Rank of the character lattice of the centralizer in the adjoint group.
    pub torus_rank: u32,
}

impl CentralizerType {
    pub fn dim(&self, adjoint_a: bool) -> u64 {
        let gl: u64 = self.gl_factors.iter().map(|&m| (m as u64).pow(2)).sum();
        let sp: u64 = self.sp_factors.iter().map(|&m| (m as u64) * (m as u64 + 1) / 2).sum();
        let so: u64 = self.so_factors.iter().map(|&m| (m as u64) * (m as u64).saturating_sub(1) / 2).sum();
        gl + sp + so - u64::from(adjoint_a)
    }
}

/// Whether a distinct part carries an orthogonal multiplicity factor.
fn orthogonal_part(family: Family, part: u32) -> bool {
    match family {
        Family::A => false,
        Family::B | Family::D => part % 2 == 1,
        Family::C => part % 2 == 0,
    }
}

pub fn reductive_centralizer(o: &OrbitLabel) -> CentralizerType {
    let mut out = CentralizerType::default();
    for (part, mult) in o.partition.multiplicities() {
        match o.ty.family {
            Family::A => out.gl_factors.push(mult),
            f if orthogonal_part(f, part) => out.so_factors.push(mult),
            _ => out.sp_factors.push(mult),
        }
    }
    out.torus_rank = h2_dim(o);
    out
}

/// Rank of the character group of `Z_G(x)`, which is `dim H^2(O, C)`.
///
/// In type D the centralizer is `S(prod O(m_i)) x prod Sp`; it has a rank-one
/// character group exactly when the odd parts are one value of multiplicity 2,
/// so that the orthogonal part is `SO(2)`.
pub fn h2_dim(o: &OrbitLabel) -> u32 {
    match o.ty.family {
        Family::A => o.partition.multiplicities().len() as u32 - 1,
        Family::B | Family::C => 0,
        Family::D => {
            let odd: Vec<(u32, u32)> = o.partition.multiplicities().into_iter().filter(|(p, _)| p % 2 == 1).collect();
            u32::from(odd.len() == 1 && odd[0].1 == 2)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGroup {
    /// Orders of the cyclic factors (empty for the trivial group).
    pub cyclic_orders: Vec<u32>,
}

impl ComponentGroup {
    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().map(|&c| c as u64).product()
    }
}

/// `A(O)` in the adjoint group.
///
/// For B, C, D: one sign per orthogonal factor `O(m_i)`; in the orthogonal
/// cases the signs multiply to 1 (determinant of an odd part is the sign). The
/// quotient is by the image of `-Id`, which has sign `(-1)^{m_i}` on each
/// orthogonal factor and exists only when `-Id` lies in the isometry group's
/// identity part, i.e. types C and D.
pub fn component_group(o: &OrbitLabel) -> ComponentGroup {
    let family = o.ty.family;
    if family == Family::A {
        let g = o.partition.parts().iter().fold(0u32, |g, &p| g.gcd(&p));
        return ComponentGroup { cyclic_orders: if g > 1 { vec![g] } else { vec![] } };
    }
    let mults: Vec<u32> = o
        .partition
        .multiplicities()
        .into_iter()
        .filter(|&(p, _)| orthogonal_part(family, p))
        .map(|(_, m)| m)
        .collect();
    let r = mults.len() as u32;
    let mut rank = r;
    if family.is_orthogonal() && r > 0 {
        rank -= 1;
    }
    let center_nontrivial = matches!(family, Family::C | Family::D) && mults.iter().any(|m| m % 2 == 1);
    if center_nontrivial {
        rank -= 1;
    }
    ComponentGroup { cyclic_orders: vec![2; rank as usize] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> OrbitLabel {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_small() {
        let a2 = ClassicalType::new(Family::A, 2).unwrap();
        assert_eq!(enumerate_orbits(a2).len(), 3);
        let c2 = ClassicalType::new(Family::C, 2).unwrap();
        let parts: Vec<String> = enumerate_orbits(c2).iter().map(|o| o.partition.to_string()).collect();
        assert_eq!(parts, ["[1,1,1,1]", "[2,1,1]", "[2,2]", "[4]"]);
        let b2 = ClassicalType::new(Family::B, 2).unwrap();
        let parts: Vec<String> = enumerate_orbits(b2).iter().map(|o| o.partition.to_string()).collect();
        assert_eq!(parts, ["[1,1,1,1,1]", "[2,2,1]", "[3,1,1]", "[5]"]);
        let d4 = ClassicalType::new(Family::D, 4).unwrap();
        assert_eq!(enumerate_orbits(d4).len(), 12);
    }

    #[test]
    fn validation_messages() {
        let e = "C2:3,1".parse::<OrbitLabel>().unwrap_err();
        assert_eq!(e, Error::InvalidLabel("odd part 3 has odd multiplicity".into()));
        let e = "D4:2,2,2,2".parse::<OrbitLabel>().unwrap_err();
        assert_eq!(e, Error::InvalidLabel("very even partition requires tag".into()));
        assert!("B2:3,1,1".parse::<OrbitLabel>().is_ok());
        assert!("B3:3,2,2".parse::<OrbitLabel>().is_ok());
        assert!(matches!("B3:3,x".parse::<OrbitLabel>(), Err(Error::Syntax { column: 6, .. })));
        assert!("C2:4:I".parse::<OrbitLabel>().is_err());
        assert_eq!(o("D4:2^4:II").to_string(), "D4:2,2,2,2:II");
    }

    #[test]
    fn dimensions() {
        assert_eq!(orbit_dim(&o("A2:3")), 6);
        assert_eq!(orbit_dim(&o("C2:2,1,1")), 4);
        assert_eq!(orbit_dim(&o("C2:2,2")), 6);
        assert_eq!(orbit_dim(&o("B2:3,1,1")), 6);
        assert_eq!(orbit_dim(&o("D4:1^8")), 0);
        assert_eq!(orbit_dim(&o("D4:7,1")), 24);
    }

    #[test]
    fn closure() {
        assert!(closure_leq(&o("C2:2,1,1"), &o("C2:2,2")).unwrap());
        assert!(!closure_leq(&o("C2:2,2"), &o("C2:2,1,1")).unwrap());
        assert!(!closure_leq(&o("D4:2^4:I"), &o("D4:2^4:II")).unwrap());
        assert!(closure_leq(&o("D4:2^4:II"), &o("D4:4,4:I")).unwrap());
        assert!(closure_leq(&o("D4:2^4:II"), &o("D4:3,1^5")).is_ok());
        assert!(closure_leq(&o("A2:3"), &o("C2:4")).is_err());
    }

    #[test]
    fn centralizers() {
        let c = reductive_centralizer(&o("A2:2,1"));
        assert_eq!(c.gl_factors, vec![1, 1]);
        let c = reductive_centralizer(&o("C2:2,1,1"));
        assert_eq!((c.so_factors.clone(), c.sp_factors.clone()), (vec![1], vec![2]));
        let c = reductive_centralizer(&o("C2:1^4"));
        assert_eq!(c.sp_factors, vec![4]);
        assert_eq!(c.dim(false), 10);
    }

    #[test]
    fn h2_and_components() {
        assert_eq!(h2_dim(&o("A2:2,1")), 1);
        assert_eq!(h2_dim(&o("A2:3")), 0);
        assert_eq!(h2_dim(&o("C2:2,2")), 0);
        assert_eq!(h2_dim(&o("D5:2^4,1,1")), 1);
        assert_eq!(h2_dim(&o("D4:3,3,1,1")), 0);
        assert_eq!(component_group(&o("A2:3")).cyclic_orders, vec![3]);
        assert_eq!(component_group(&o("A2:2,1")).order(), 1);
        // -Id acts by -1 on the O(1) factor of part 2, so the adjoint group kills it
        assert_eq!(component_group(&o("C2:2,1,1")).order(), 1);
        assert_eq!(component_group(&o("C2:4")).order(), 1);
        assert_eq!(component_group(&o("B2:3,1,1")).order(), 2);
        assert_eq!(component_group(&o("D4:5,3")).order(), 1);
        assert_eq!(component_group(&o("C3:4,2")).order(), 2);
    }
}

//! Orbit-method labels: adjoint orbits as `(l, O', xi mod W(l, O'))`.
//!
//! An adjoint orbit is stored through the centralizer Levi of its semisimple
//! part, the semisimple part in block coordinates, and the nilpotent part in the
//! centralizer. Labels are computed in explicit coordinates and mapped back to
//! the standard realization of each Levi by an explicit Weyl group element.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::induction::{birational_datum, induce, CentralParameter, InductionDatum};
use crate::orbits::{enumerate_orbits, OrbitLabel, VeryEvenTag};
use crate::partition::{partitions_of, Partition};
use crate::rootsys::{
    normalizer_for, orbit_stabilizer_group, BlockAction, ClassicalType, DClass, Family, FiniteLinearGroup, LeviLabel,
};
use crate::sheets::partial_birational;
use crate::tables;
use crate::Rational;

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// A gl block given by coordinates and signs: `f = sum sign_p e_p`.
#[derive(Debug, Clone)]
struct ExplicitBlock {
    coords: Vec<(usize, i8)>,
    value: Rational,
    orbit: Partition,
}

/// A datum in the standard realization of its Levi.
#[derive(Debug, Clone, PartialEq, Eq)]
struct StdDatum {
    levi: LeviLabel,
    xi: Vec<Rational>,
    gl: Vec<Partition>,
    tail: Option<OrbitLabel>,
}

/// Conjugates an explicit Levi (blocks plus tail coordinates, the tail in the
/// frame "given order, positive signs") to its standard realization.
fn standardize(ty: ClassicalType, mut blocks: Vec<ExplicitBlock>, tail: &[usize], tail_orbit: Option<OrbitLabel>) -> Result<StdDatum> {
    blocks.sort_by(|a, b| b.coords.len().cmp(&a.coords.len()));
    let sizes: Vec<u32> = blocks.iter().map(|b| b.coords.len() as u32).collect();
    let m = tail.len() as u32;
    let mut xi: Vec<Rational> = blocks.iter().map(|b| b.value).collect();
    let gl: Vec<Partition> = blocks.iter().map(|b| b.orbit.clone()).collect();
    let mut tail_orbit = tail_orbit;
    let mut class = None;
    if ty.family == Family::D {
        if m == 1 && ty.rank != 1 {
            return Err(Error::Internal("rank-one tail in type D".into()));
        }
        let flips = blocks.iter().flat_map(|b| b.coords.iter()).filter(|(_, s)| *s < 0).count();
        let needs_class = m == 0 && !sizes.is_empty() && sizes.iter().all(|a| a % 2 == 0);
        if needs_class {
            class = Some(if flips % 2 == 0 { DClass::Plus } else { DClass::Minus });
        } else if flips % 2 == 1 {
            if m > 0 {
                tail_orbit = tail_orbit.map(|t| t.toggled());
            } else {
                let odd = sizes.iter().position(|a| a % 2 == 1).unwrap();
                xi[odd] = -xi[odd];
            }
        }
    }
    let levi = LeviLabel::new(sizes, m, class);
    Ok(StdDatum { levi, xi, gl, tail: tail_orbit })
}

/// Applies a normalizer coset to block data.
fn act(g: &BlockAction, xi: &[Rational], gl: &[Partition], tail: &Option<OrbitLabel>) -> (Vec<Rational>, Vec<Partition>, Option<OrbitLabel>) {
    let xi2 = g.apply(xi);
    let mut gl2 = gl.to_vec();
    for (i, p) in gl.iter().enumerate() {
        gl2[g.perm[i]] = p.clone();
    }
    let tail2 = if g.tail_odd { tail.as_ref().map(|t| t.toggled()) } else { tail.clone() };
    (xi2, gl2, tail2)
}

/// An adjoint orbit: semisimple part with exact centralizer, plus nilpotent part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdjointOrbitLabel {
    #[serde(rename = "type")]
    pub ty: ClassicalType,
    pub centralizer_levi: LeviLabel,
    pub ss_param: CentralParameter,
    pub gl_orbits: Vec<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_orbit: Option<OrbitLabel>,
}

impl AdjointOrbitLabel {
    fn from_std(ty: ClassicalType, d: StdDatum) -> Result<Self> {
        let o = AdjointOrbitLabel {
            ty,
            centralizer_levi: d.levi,
            ss_param: CentralParameter { coords: d.xi },
            gl_orbits: d.gl,
            tail_orbit: d.tail,
        };
        o.canonical()
    }

    /// The least representative under `N_W(W_L)/W_L`.
    pub fn canonical(&self) -> Result<Self> {
        self.validate()?;
        let group = normalizer_for(self.ty, &self.centralizer_levi)?;
        let best = group
            .elements
            .iter()
            .map(|g| act(g, &self.ss_param.coords, &self.gl_orbits, &self.tail_orbit))
            .min()
            .unwrap();
        Ok(AdjointOrbitLabel {
            ty: self.ty,
            centralizer_levi: self.centralizer_levi.clone(),
            ss_param: CentralParameter { coords: best.0 },
            gl_orbits: best.1,
            tail_orbit: best.2,
        })
    }

    /// Checks the nilpotent parts and that `xi` has no further coincidences.
    pub fn validate(&self) -> Result<()> {
        let d = InductionDatum {
            ambient: self.ty,
            levi: self.centralizer_levi.clone(),
            gl_orbits: self.gl_orbits.clone(),
            tail_orbit: self.tail_orbit.clone(),
            xi: Some(self.ss_param.clone()),
        };
        d.validate()?;
        let xi = &self.ss_param.coords;
        let k = xi.len();
        for i in 0..k {
            for j in i + 1..k {
                let clash = match self.ty.family {
                    Family::A => xi[i] == xi[j],
                    _ => xi[i] == xi[j] || xi[i] == -xi[j],
                };
                if clash {
                    return Err(Error::InvalidLabel(format!("xi coordinates {i} and {j} coincide; centralizer is larger")));
                }
            }
            if self.ty.family != Family::A && xi[i] == zero() {
                let d1 = self.ty.family == Family::D && self.centralizer_levi.tail_rank == 0 && self.centralizer_levi.blocks[i] == 1;
                if !d1 {
                    return Err(Error::InvalidLabel(format!("xi coordinate {i} vanishes on a gl block")));
                }
            }
        }
        Ok(())
    }

    /// Semisimple part in standard Cartan coordinates.
    pub fn cartan_coords(&self) -> Vec<Rational> {
        let real = self.centralizer_levi.realization(self.ty);
        let mut out = vec![zero(); self.ty.coord_count()];
        for (b, &x) in real.blocks.iter().zip(&self.ss_param.coords) {
            for &(p, s) in b {
                out[p] = x * s as i64;
            }
        }
        out
    }

    pub fn is_nilpotent(&self) -> bool {
        self.ss_param.is_zero()
    }

    pub fn nilpotent(o: &OrbitLabel) -> Result<Self> {
        let d = InductionDatum::identity(o);
        let k = d.levi.blocks.len();
        AdjointOrbitLabel {
            ty: o.ty,
            centralizer_levi: d.levi,
            ss_param: CentralParameter::zero(k),
            gl_orbits: d.gl_orbits,
            tail_orbit: d.tail_orbit,
        }
        .canonical()
    }

    /// Builds the orbit of `xi + e` from Cartan coordinates and one nilpotent part
    /// per eigenvalue class (classes in order of first appearance of `|xi_p|`,
    /// by value in type A; the zero class, if any, last).
    pub fn from_coordinates(ty: ClassicalType, xi: &[Rational], parts: &[(Partition, Option<VeryEvenTag>)]) -> Result<Self> {
        if xi.len() != ty.coord_count() {
            return Err(Error::InvalidLabel(format!("{ty} needs {} coordinates, got {}", ty.coord_count(), xi.len())));
        }
        if ty.family == Family::A && xi.iter().sum::<Rational>() != zero() {
            return Err(Error::InvalidLabel("type A coordinates must sum to zero".into()));
        }
        let classes = coordinate_classes(ty, xi);
        if classes.len() != parts.len() {
            return Err(Error::InvalidLabel(format!("{} eigenvalue classes but {} nilpotent parts", classes.len(), parts.len())));
        }
        let mut blocks = Vec::new();
        let mut tail: Vec<usize> = Vec::new();
        let mut tail_orbit = None;
        for (class, (p, tag)) in classes.into_iter().zip(parts) {
            match class {
                CoordClass::Block { value, coords } => {
                    if tag.is_some() || p.size() != coords.len() as u32 {
                        return Err(Error::InvalidLabel(format!("class of {value} needs a partition of {}", coords.len())));
                    }
                    blocks.push(ExplicitBlock { coords, value, orbit: p.clone() });
                }
                CoordClass::Tail(coords) => {
                    let tty = ClassicalType::tail(ty.family, coords.len() as u32);
                    let orbit = OrbitLabel::new(tty, p.clone(), *tag)?;
                    if ty.family == Family::D && coords.len() == 1 {
                        blocks.push(ExplicitBlock { coords: vec![(coords[0], 1)], value: zero(), orbit: Partition::ones(1) });
                    } else {
                        tail = coords;
                        tail_orbit = Some(orbit);
                    }
                }
            }
        }
        if tail.is_empty() && ty.family != Family::A && tail_orbit.is_none() {
            tail_orbit = None;
        }
        AdjointOrbitLabel::from_std(ty, standardize(ty, blocks, &tail, tail_orbit)?)
    }
}

enum CoordClass {
    Block { value: Rational, coords: Vec<(usize, i8)> },
    Tail(Vec<usize>),
}

fn coordinate_classes(ty: ClassicalType, xi: &[Rational]) -> Vec<CoordClass> {
    let mut order: Vec<Rational> = Vec::new();
    let mut members: BTreeMap<Rational, Vec<(usize, i8)>> = BTreeMap::new();
    let mut zeros = Vec::new();
    for (p, &x) in xi.iter().enumerate() {
        if ty.family == Family::A {
            if !members.contains_key(&x) {
                order.push(x);
            }
            members.entry(x).or_default().push((p, 1));
        } else if x == zero() {
            zeros.push(p);
        } else {
            let v = if x < zero() { -x } else { x };
            if !members.contains_key(&v) {
                order.push(v);
            }
            members.entry(v).or_default().push((p, if x < zero() { -1 } else { 1 }));
        }
    }
    let mut out: Vec<CoordClass> = order
        .into_iter()
        .map(|v| CoordClass::Block { value: v, coords: members.remove(&v).unwrap() })
        .collect();
    if !zeros.is_empty() {
        out.push(CoordClass::Tail(zeros));
    }
    out
}

fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for AdjointOrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xi = self.cartan_coords();
        let classes = coordinate_classes(self.ty, &xi);
        let real = self.centralizer_levi.realization(self.ty);
        let mut parts: Vec<String> = Vec::new();
        for class in &classes {
            match class {
                CoordClass::Block { coords, .. } => {
                    let first = coords[0].0;
                    let i = real.blocks.iter().position(|b| b.iter().any(|&(p, _)| p == first)).unwrap();
                    parts.push(self.gl_orbits[i].to_string());
                }
                CoordClass::Tail(_) => match &self.tail_orbit {
                    Some(t) => parts.push(match t.tag {
                        Some(tag) => format!("{}:{tag}", t.partition),
                        None => t.partition.to_string(),
                    }),
                    None => parts.push("[1,1]".to_string()),
                },
            }
        }
        let xs: Vec<String> = xi.iter().map(fmt_rational).collect();
        write!(f, "{} | xi=({}) | nilp={}", self.ty, xs.join(";"), parts.join(";"))
    }
}

fn parse_rational(s: &str, column: usize) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Syntax { column, message: format!("expected a rational p/q, found {s:?}") };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(Error::Syntax { column, message: "zero denominator".into() });
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses one nilpotent part: `[2,1^2]`, `2,2,2,2:I`.
pub fn parse_nilpotent_part(s: &str, column: usize) -> Result<(Partition, Option<VeryEvenTag>)> {
    let s = s.trim();
    let (body, tag) = match s.rsplit_once(':') {
        Some((b, "I")) => (b, Some(VeryEvenTag::I)),
        Some((b, "II")) => (b, Some(VeryEvenTag::II)),
        Some((_, t)) => return Err(Error::Syntax { column, message: format!("unknown tag {t:?}") }),
        None => (s, None),
    };
    let body = body.trim().trim_start_matches('[').trim_end_matches(']');
    let mut parts = Vec::new();
    for item in body.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (b, e) = item.split_once('^').unwrap_or((item, "1"));
        let b: u32 = b.parse().map_err(|_| Error::Syntax { column, message: format!("bad part {item:?}") })?;
        let e: usize = e.parse().map_err(|_| Error::Syntax { column, message: format!("bad exponent in {item:?}") })?;
        if b == 0 {
            return Err(Error::Syntax { column, message: "parts must be positive".into() });
        }
        parts.extend(std::iter::repeat(b).take(e));
    }
    Ok((Partition::new(parts), tag))
}

/// Parses `C2 | xi=(1;0) | nilp=[1];[2]`. Without `xi` the orbit is nilpotent.
pub fn parse_adjoint_orbit(text: &str) -> Result<AdjointOrbitLabel> {
    let mut fields = text.split('|');
    let ty: ClassicalType = fields.next().unwrap_or("").trim().parse()?;
    let mut col = text.find('|').map(|c| c + 1).unwrap_or(text.len());
    let mut xi = None;
    let mut nilp = None;
    for field in fields {
        let f = field.trim();
        if let Some(body) = f.strip_prefix("xi=") {
            let body = body.trim();
            let inner = body
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| Error::Syntax { column: col, message: "xi must look like (a;b;...)".into() })?;
            let coords = inner.split(';').map(|x| parse_rational(x, col)).collect::<Result<Vec<_>>>()?;
            xi = Some(coords);
        } else if let Some(body) = f.strip_prefix("nilp=") {
            nilp = Some(body.split(';').map(|x| parse_nilpotent_part(x, col)).collect::<Result<Vec<_>>>()?);
        } else {
            return Err(Error::Syntax { column: col, message: format!("unknown field {f:?} (expected xi= or nilp=)") });
        }
        col += field.len() + 1;
    }
    let xi = xi.unwrap_or_else(|| vec![zero(); ty.coord_count()]);
    let nilp = nilp.ok_or_else(|| Error::Syntax { column: text.len(), message: "missing nilp= field".into() })?;
    AdjointOrbitLabel::from_coordinates(ty, &xi, &nilp)
}

/// `(l, O', xi)` with `O'` birationally rigid, `xi` in `z(l)` taken modulo `W(l, O')`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitMethodLabel {
    pub levi: LeviLabel,
    pub bir_rigid_orbit: InductionDatum,
    pub xi_class: CentralParameter,
    pub weyl_action: FiniteLinearGroup,
}

/// Hashable normal form of an orbit-method label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelKey {
    pub levi: LeviLabel,
    pub gl_orbits: Vec<Partition>,
    pub tail_orbit: Option<OrbitLabel>,
    pub xi: Vec<Rational>,
}

impl OrbitMethodLabel {
    fn datum_with(&self, xi: &[Rational]) -> InductionDatum {
        let mut d = self.bir_rigid_orbit.clone();
        d.xi = Some(CentralParameter { coords: xi.to_vec() });
        d
    }

    /// Moves a tail tag II to I when some normalizer element swaps the two.
    fn normalized(&self) -> Result<(InductionDatum, Vec<Rational>)> {
        let d = &self.bir_rigid_orbit;
        let xi = self.xi_class.coords.clone();
        if let Some(t) = &d.tail_orbit {
            if t.tag == Some(VeryEvenTag::II) {
                let group = normalizer_for(d.ambient, &d.levi)?;
                if let Some(g) = group.elements.iter().find(|g| g.tail_odd) {
                    let (xi2, gl2, tail2) = act(g, &xi, &d.gl_orbits, &d.tail_orbit);
                    let mut d2 = d.clone();
                    d2.gl_orbits = gl2;
                    d2.tail_orbit = tail2;
                    d2.xi = None;
                    return Ok((d2, xi2));
                }
            }
        }
        let mut d2 = d.clone();
        d2.xi = None;
        Ok((d2, xi))
    }

    pub fn key(&self) -> Result<LabelKey> {
        let (d, xi) = self.normalized()?;
        let normalizer = normalizer_for(d.ambient, &d.levi)?;
        let w = orbit_stabilizer_group(&normalizer, &d.levi, &d.gl_orbits, d.tail_orbit.as_ref())?;
        let best = w.elements.iter().map(|g| g.apply(&xi)).min().unwrap();
        Ok(LabelKey { levi: d.levi, gl_orbits: d.gl_orbits, tail_orbit: d.tail_orbit, xi: best })
    }
}

/// Equality of labels: same `(l, O')` up to conjugacy and `xi` in one `W(l, O')`-orbit.
pub fn labels_equal(a: &OrbitMethodLabel, b: &OrbitMethodLabel) -> Result<bool> {
    let (da, xa) = a.normalized()?;
    let (db, xb) = b.normalized()?;
    if da != db {
        return Ok(false);
    }
    let normalizer = normalizer_for(da.ambient, &da.levi)?;
    let w = orbit_stabilizer_group(&normalizer, &da.levi, &da.gl_orbits, da.tail_orbit.as_ref())?;
    Ok(w.elements.iter().any(|g| g.apply(&xa) == xb))
}

/// Refines the centralizer datum of `o` by the birational data of its
/// nilpotent parts.
pub fn orbit_to_label(o: &AdjointOrbitLabel) -> Result<OrbitMethodLabel> {
    let o = o.canonical()?;
    let ty = o.ty;
    let real = o.centralizer_levi.realization(ty);
    let mut blocks = Vec::new();
    for ((coords, &value), pi) in real.blocks.iter().zip(&o.ss_param.coords).zip(&o.gl_orbits) {
        let mut start = 0;
        for size in pi.transpose().parts() {
            let size = *size as usize;
            blocks.push(ExplicitBlock { coords: coords[start..start + size].to_vec(), value, orbit: Partition::ones(size as u32) });
            start += size;
        }
    }
    let mut tail = Vec::new();
    let mut tail_orbit = None;
    if let Some(nu) = &o.tail_orbit {
        let dt = birational_datum(nu)?;
        let treal = dt.levi.realization(dt.ambient);
        for (coords, pi) in treal.blocks.iter().zip(&dt.gl_orbits) {
            let coords = coords.iter().map(|&(p, s)| (real.tail[p], s)).collect();
            blocks.push(ExplicitBlock { coords, value: zero(), orbit: pi.clone() });
        }
        tail = treal.tail.iter().map(|&p| real.tail[p]).collect();
        tail_orbit = dt.tail_orbit.clone();
    }
    let sd = standardize(ty, blocks, &tail, tail_orbit)?;
    let datum = InductionDatum { ambient: ty, levi: sd.levi.clone(), gl_orbits: sd.gl, tail_orbit: sd.tail, xi: None };
    let normalizer = normalizer_for(ty, &datum.levi)?;
    let weyl_action = orbit_stabilizer_group(&normalizer, &datum.levi, &datum.gl_orbits, datum.tail_orbit.as_ref())?;
    let label = OrbitMethodLabel {
        levi: datum.levi.clone(),
        bir_rigid_orbit: datum,
        xi_class: CentralParameter { coords: sd.xi },
        weyl_action,
    };
    let (d, xi) = label.normalized()?;
    let normalizer = normalizer_for(ty, &d.levi)?;
    let weyl_action = orbit_stabilizer_group(&normalizer, &d.levi, &d.gl_orbits, d.tail_orbit.as_ref())?;
    Ok(OrbitMethodLabel { levi: d.levi.clone(), bir_rigid_orbit: d, xi_class: CentralParameter { coords: xi }, weyl_action })
}

/// Inverse map: induces `O'` to the centralizer of `xi`. Fails with
/// `XiNotRegular` when that induction is not birational.
pub fn label_to_orbit(label: &OrbitMethodLabel) -> Result<AdjointOrbitLabel> {
    let d = label.datum_with(&label.xi_class.coords);
    d.validate()?;
    let ty = d.ambient;
    let xi = &label.xi_class.coords;
    let s: Vec<usize> = (0..xi.len()).filter(|&i| xi[i] == zero()).collect();
    if ty.family != Family::A && !s.is_empty() {
        let table = tables::active()?;
        if !partial_birational(&table, &d, &s)? {
            return Err(Error::XiNotRegular(format!("xi vanishes on blocks {s:?} of {}", d.levi)));
        }
    }
    let real = d.levi.realization(ty);
    // Nonzero classes, keyed by value (type A) or absolute value.
    let mut classes: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (i, &x) in xi.iter().enumerate() {
        if ty.family == Family::A {
            classes.entry(x).or_default().push(i);
        } else if x != zero() {
            classes.entry(if x < zero() { -x } else { x }).or_default().push(i);
        }
    }
    let mut blocks = Vec::new();
    for (v, members) in classes {
        let mut coords = Vec::new();
        let mut orbit = Partition::empty();
        for &i in &members {
            let flip: i8 = if xi[i] < zero() { -1 } else { 1 };
            coords.extend(real.blocks[i].iter().map(|&(p, sg)| (p, sg * flip)));
            orbit = orbit.add(&d.gl_orbits[i]);
        }
        blocks.push(ExplicitBlock { coords, value: v, orbit });
    }
    let mut tail: Vec<usize> = Vec::new();
    let mut tail_orbit = None;
    if ty.family != Family::A {
        let mut t: Vec<usize> = real.tail.clone();
        for &i in &s {
            t.extend(real.blocks[i].iter().map(|&(p, _)| p));
        }
        t.sort_unstable();
        if ty.family == Family::D && t.len() == 1 {
            blocks.push(ExplicitBlock { coords: vec![(t[0], 1)], value: zero(), orbit: Partition::ones(1) });
        } else if !t.is_empty() || d.tail_orbit.is_some() {
            let pos = |p: usize| t.iter().position(|&q| q == p).unwrap();
            let sub_blocks: Vec<ExplicitBlock> = s
                .iter()
                .map(|&i| ExplicitBlock {
                    coords: real.blocks[i].iter().map(|&(p, sg)| (pos(p), sg)).collect(),
                    value: zero(),
                    orbit: d.gl_orbits[i].clone(),
                })
                .collect();
            let sub_tail: Vec<usize> = real.tail.iter().map(|&p| pos(p)).collect();
            let sty = ClassicalType::tail(ty.family, t.len() as u32);
            let sd = standardize(sty, sub_blocks, &sub_tail, d.tail_orbit.clone())?;
            let sub = InductionDatum { ambient: sty, levi: sd.levi, gl_orbits: sd.gl, tail_orbit: sd.tail, xi: None };
            tail_orbit = if t.is_empty() { None } else { Some(induce(&sub)?) };
            tail = t;
        }
    }
    AdjointOrbitLabel::from_std(ty, standardize(ty, blocks, &tail, tail_orbit)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InjectivityReport {
    #[serde(rename = "type")]
    pub ty: ClassicalType,
    pub seed: u64,
    pub samples: usize,
    pub distinct_orbits: usize,
    pub distinct_labels: usize,
    /// Pairs with equal labels but different orbits.
    pub collisions: Vec<(AdjointOrbitLabel, AdjointOrbitLabel)>,
    /// Orbits whose label does not map back to them.
    pub roundtrip_failures: Vec<AdjointOrbitLabel>,
    pub pass: bool,
}

const SAMPLE_VALUES: [(i64, i64); 7] = [(0, 1), (0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-3, 1)];

/// One random adjoint orbit; the small value set makes repeated orbits likely.
pub fn sample_orbit(ty: ClassicalType, rng: &mut impl Rng) -> Result<AdjointOrbitLabel> {
    let n = ty.coord_count();
    let mut xi: Vec<Rational> = (0..n)
        .map(|_| {
            let (p, q) = SAMPLE_VALUES[rng.gen_range(0..SAMPLE_VALUES.len())];
            Rational::new(p, q)
        })
        .collect();
    if ty.family == Family::A {
        let mean = xi.iter().sum::<Rational>() / Rational::from_integer(n as i64);
        for x in xi.iter_mut() {
            *x -= mean;
        }
    }
    let mut parts = Vec::new();
    for class in coordinate_classes(ty, &xi) {
        match class {
            CoordClass::Block { coords, .. } => {
                let all = partitions_of(coords.len() as u32);
                parts.push((all[rng.gen_range(0..all.len())].clone(), None));
            }
            CoordClass::Tail(coords) => {
                let all = enumerate_orbits(ClassicalType::tail(ty.family, coords.len() as u32));
                let o = &all[rng.gen_range(0..all.len())];
                parts.push((o.partition.clone(), o.tag));
            }
        }
    }
    AdjointOrbitLabel::from_coordinates(ty, &xi, &parts)
}

/// Samples adjoint orbits and checks that equal labels come from equal orbits
/// and that every label maps back to its orbit.
pub fn verify_injectivity(ty: ClassicalType, samples: usize, seed: u64) -> Result<InjectivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_key: HashMap<LabelKey, AdjointOrbitLabel> = HashMap::new();
    let mut by_datum: BTreeMap<LabelKey, Vec<(OrbitMethodLabel, AdjointOrbitLabel)>> = BTreeMap::new();
    let mut orbits = std::collections::BTreeSet::new();
    let mut collisions = Vec::new();
    let mut roundtrip_failures = Vec::new();
    for _ in 0..samples {
        let o = sample_orbit(ty, &mut rng)?;
        let label = orbit_to_label(&o)?;
        match label_to_orbit(&label) {
            Ok(back) if back == o => {}
            _ => roundtrip_failures.push(o.clone()),
        }
        let key = label.key()?;
        match by_key.get(&key) {
            Some(prev) if *prev != o => collisions.push((prev.clone(), o.clone())),
            Some(_) => {}
            None => {
                by_key.insert(key.clone(), o.clone());
            }
        }
        if orbits.insert(o.clone()) {
            let group = LabelKey { xi: vec![], ..key };
            by_datum.entry(group).or_default().push((label, o));
        }
    }
    // Cross-check the keys against the group-orbit test itself.
    for members in by_datum.values() {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if labels_equal(&members[i].0, &members[j].0)? {
                    collisions.push((members[i].1.clone(), members[j].1.clone()));
                }
            }
        }
    }
    let pass = collisions.is_empty() && roundtrip_failures.is_empty();
    Ok(InjectivityReport {
        ty,
        seed,
        samples,
        distinct_orbits: orbits.len(),
        distinct_labels: by_key.len(),
        collisions,
        roundtrip_failures,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(f: Family, n: u32) -> ClassicalType {
        ClassicalType::new(f, n).unwrap()
    }

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn regular_semisimple_gets_cartan_label() {
        let a2 = t(Family::A, 2);
        let o = parse_adjoint_orbit("A2 | xi=(1;0;-1) | nilp=[1];[1];[1]").unwrap();
        assert_eq!(o.centralizer_levi, LeviLabel::cartan(a2));
        let l = orbit_to_label(&o).unwrap();
        assert_eq!(l.levi, LeviLabel::cartan(a2));
        assert_eq!(l.weyl_action.order(), 6);
        assert_eq!(label_to_orbit(&l).unwrap(), o);
    }

    #[test]
    fn sign_and_order_do_not_matter() {
        let a = parse_adjoint_orbit("C2 | xi=(1;2) | nilp=[1];[1]").unwrap();
        let b = parse_adjoint_orbit("C2 | xi=(-1;-2) | nilp=[1];[1]").unwrap();
        let c = parse_adjoint_orbit("C2 | xi=(2;1) | nilp=[1];[1]").unwrap();
        let d = parse_adjoint_orbit("C2 | xi=(1;3) | nilp=[1];[1]").unwrap();
        let la = orbit_to_label(&a).unwrap();
        assert!(labels_equal(&la, &orbit_to_label(&b).unwrap()).unwrap());
        assert!(labels_equal(&la, &orbit_to_label(&c).unwrap()).unwrap());
        assert!(!labels_equal(&la, &orbit_to_label(&d).unwrap()).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn mixed_orbit_in_c2() {
        // xi = (1, 0): centralizer gl1 x sp2 with the regular nilpotent of sp2
        let o = parse_adjoint_orbit("C2 | xi=(1;0) | nilp=[1];[2]").unwrap();
        assert_eq!(o.centralizer_levi, LeviLabel::new(vec![1], 1, None));
        let l = orbit_to_label(&o).unwrap();
        assert_eq!(l.levi, LeviLabel::cartan(t(Family::C, 2)));
        assert_eq!(l.xi_class.coords.iter().filter(|x| **x == zero()).count(), 1);
        assert_eq!(label_to_orbit(&l).unwrap(), o);
        // zero nilpotent part stays on the larger Levi
        let o = parse_adjoint_orbit("C2 | xi=(1;0) | nilp=[1];[1,1]").unwrap();
        assert_eq!(orbit_to_label(&o).unwrap().levi, LeviLabel::new(vec![1], 1, None));
    }

    #[test]
    fn non_regular_xi_is_rejected() {
        // B2 gl2 Levi: xi = 0 induces [3,1,1] non-birationally
        let b2 = t(Family::B, 2);
        let d = InductionDatum::zero(b2, LeviLabel::new(vec![2], 0, None)).unwrap();
        let label = OrbitMethodLabel {
            levi: d.levi.clone(),
            bir_rigid_orbit: d.clone(),
            xi_class: CentralParameter::zero(1),
            weyl_action: orbit_stabilizer_group(&normalizer_for(b2, &d.levi).unwrap(), &d.levi, &d.gl_orbits, None).unwrap(),
        };
        assert!(matches!(label_to_orbit(&label), Err(Error::XiNotRegular(_))));
        let mut ok = label.clone();
        ok.xi_class = CentralParameter { coords: q(&[1]) };
        assert!(label_to_orbit(&ok).is_ok());
    }

    #[test]
    fn nilpotent_orbits_roundtrip() {
        for ty in [t(Family::A, 3), t(Family::B, 3), t(Family::C, 3), t(Family::D, 4)] {
            for o in enumerate_orbits(ty) {
                let a = AdjointOrbitLabel::nilpotent(&o).unwrap();
                let l = orbit_to_label(&a).unwrap();
                assert_eq!(label_to_orbit(&l).unwrap(), a, "{o}");
            }
        }
    }

    #[test]
    fn very_even_tail_in_d4() {
        let a = parse_adjoint_orbit("D4 | nilp=[2,2,2,2]:I").unwrap();
        let b = parse_adjoint_orbit("D4 | nilp=[2,2,2,2]:II").unwrap();
        assert_ne!(a, b);
        let (la, lb) = (orbit_to_label(&a).unwrap(), orbit_to_label(&b).unwrap());
        assert!(!labels_equal(&la, &lb).unwrap());
        assert_eq!(label_to_orbit(&lb).unwrap(), b);
        // one vanishing coordinate: the centralizer has a torus factor
        let c = parse_adjoint_orbit("D4 | xi=(1;2;3;0) | nilp=[1];[1];[1];[1,1]").unwrap();
        assert_eq!(c.centralizer_levi, LeviLabel::cartan(t(Family::D, 4)));
    }

    #[test]
    fn parse_and_display() {
        let o = parse_adjoint_orbit("C2 | xi=(1/2;0) | nilp=[1];[1^2]").unwrap();
        let again = parse_adjoint_orbit(&o.to_string()).unwrap();
        assert_eq!(o, again);
        assert!(matches!(parse_adjoint_orbit("C2 | xi=(1;x) | nilp=[1];[2]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_adjoint_orbit("C2 | xi=(1;0) | nilp=[1]"), Err(Error::InvalidLabel(_))));
        assert!(parse_adjoint_orbit("A2 | xi=(1;1;1) | nilp=[3]").is_err());
    }

    #[test]
    fn injectivity_small() {
        for ty in [t(Family::A, 2), t(Family::C, 2), t(Family::B, 2)] {
            let r = verify_injectivity(ty, 200, 7).unwrap();
            assert!(r.pass, "{ty}: {:?} {:?}", r.collisions.first(), r.roundtrip_failures.first());
            assert!(r.distinct_orbits < r.samples);
        }
    }
}

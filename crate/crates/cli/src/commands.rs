use serde::Serialize;

use nilsheet_core::induction::{
    birational_datum, induce, is_birational_induction, is_birationally_rigid, is_rigid, verify_uniqueness, InductionDatum,
};
use nilsheet_core::namikawa::{namikawa_space, verify_weyl_match, NamikawaData};
use nilsheet_core::orbitmethod::{orbit_to_label, parse_adjoint_orbit, parse_nilpotent_part, verify_injectivity};
use nilsheet_core::orbits::{component_group, enumerate_orbits, h2_dim, orbit_dim, ComponentGroup, OrbitLabel};
use nilsheet_core::partition::Partition;
use nilsheet_core::rootsys::{ClassicalType, LeviLabel};
use nilsheet_core::sheets::{birational_sheets, enumerate_sheets, verify_disjoint_cover};
use nilsheet_core::{Error, Result};

use crate::report::Report;

pub const RANK_ENV: &str = "NILSHEET_MAX_RANK";
const DEFAULT_MAX_RANK: u32 = 8;

/// Either a whole type or a single orbit of it.
#[derive(Debug, Clone)]
pub enum Target {
    Type(ClassicalType),
    Orbit(OrbitLabel),
}

impl Target {
    fn orbits(&self) -> Vec<OrbitLabel> {
        match self {
            Target::Type(t) => enumerate_orbits(*t),
            Target::Orbit(o) => vec![o.clone()],
        }
    }
}

fn max_rank() -> u32 {
    std::env::var(RANK_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_RANK)
}

pub fn check_rank(ty: ClassicalType) -> Result<ClassicalType> {
    let cap = max_rank();
    if ty.rank > cap {
        return Err(Error::InvalidType(format!("{ty} exceeds the rank cap {cap} (set {RANK_ENV} to raise it)")));
    }
    Ok(ty)
}

pub fn parse_type(s: &str) -> Result<ClassicalType> {
    check_rank(s.parse()?)
}

/// `B3` is a type, `B3:3,2,2` an orbit.
pub fn parse_target(s: &str) -> Result<Target> {
    if s.contains(':') {
        let o: OrbitLabel = s.parse()?;
        check_rank(o.ty)?;
        Ok(Target::Orbit(o))
    } else {
        Ok(Target::Type(parse_type(s)?))
    }
}

/// Parses `TYPE LEVI` plus optional gl parts (`[1,1];[1]`) and tail orbit (`2,2:I`).
/// Missing parts default to zero orbits.
pub fn parse_datum(ty: &str, levi: &str, gl: Option<&str>, tail: Option<&str>) -> Result<InductionDatum> {
    let ty = parse_type(ty)?;
    let levi = LeviLabel::parse(ty, levi)?;
    let gl_orbits = match gl {
        Some(text) => text
            .split(';')
            .map(|p| parse_nilpotent_part(p, 0).map(|x| x.0))
            .collect::<Result<Vec<Partition>>>()?,
        None => levi.blocks.iter().map(|&a| Partition::ones(a)).collect(),
    };
    let tail_orbit = match levi.tail_type(ty) {
        Some(tty) if tty.rank > 0 => Some(match tail {
            Some(text) => {
                let (p, tag) = parse_nilpotent_part(text, 0)?;
                OrbitLabel::new(tty, p, tag)?
            }
            None => OrbitLabel::zero(tty),
        }),
        _ => {
            if tail.is_some() {
                return Err(Error::InvalidDatum(format!("{levi} has no tail orbit")));
            }
            None
        }
    };
    InductionDatum::new(ty, levi, gl_orbits, tail_orbit)
}

fn datum_cells(d: &InductionDatum) -> [String; 3] {
    let gl: Vec<String> = d.gl_orbits.iter().map(|p| p.to_string()).collect();
    let tail = d.tail_orbit.as_ref().map_or("-".to_string(), |t| match t.tag {
        Some(tag) => format!("{}:{tag}", t.partition),
        None => t.partition.to_string(),
    });
    [d.levi.to_string(), if gl.is_empty() { "-".into() } else { gl.join(";") }, tail]
}

fn weyl_text(n: &NamikawaData) -> String {
    if n.weyl_group.is_empty() {
        "1".into()
    } else {
        n.weyl_group.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("x")
    }
}

#[derive(Serialize)]
struct OrbitRow {
    orbit: OrbitLabel,
    dim: u64,
    h2_dim: u32,
    component_group: ComponentGroup,
}

pub fn orbits(ty: ClassicalType) -> Result<Report> {
    let records: Vec<OrbitRow> = enumerate_orbits(ty)
        .into_iter()
        .map(|o| OrbitRow { dim: orbit_dim(&o), h2_dim: h2_dim(&o), component_group: component_group(&o), orbit: o })
        .collect();
    let rows = records
        .iter()
        .map(|r| vec![r.orbit.to_string(), r.dim.to_string(), r.h2_dim.to_string(), r.component_group.order().to_string()])
        .collect();
    Ok(Report::new(&["orbit", "dim", "h2", "A(O)"], rows, &records))
}

#[derive(Serialize)]
struct InduceRecord {
    datum: InductionDatum,
    induced: OrbitLabel,
    dim: u64,
    birational: bool,
}

pub fn induce_cmd(d: &InductionDatum) -> Result<Report> {
    let induced = induce(d)?;
    let rec = InduceRecord { dim: orbit_dim(&induced), birational: is_birational_induction(d)?, induced, datum: d.clone() };
    let [levi, gl, tail] = datum_cells(d);
    let rows = vec![vec![levi, gl, tail, rec.induced.to_string(), rec.dim.to_string(), rec.birational.to_string()]];
    Ok(Report::new(&["levi", "gl", "tail", "induced", "dim", "birational"], rows, &rec))
}

#[derive(Serialize)]
struct FlagRow {
    orbit: OrbitLabel,
    value: bool,
}

pub fn rigidity(t: &Target, birational: bool) -> Result<Report> {
    let mut records = Vec::new();
    for o in t.orbits() {
        let value = if birational { is_birationally_rigid(&o)? } else { is_rigid(&o)? };
        records.push(FlagRow { orbit: o, value });
    }
    let rows = records.iter().map(|r| vec![r.orbit.to_string(), r.value.to_string()]).collect();
    let col = if birational { "birationally_rigid" } else { "rigid" };
    Ok(Report::new(&["orbit", col], rows, &records))
}

#[derive(Serialize)]
struct DatumRow {
    orbit: OrbitLabel,
    datum: InductionDatum,
    center_dim: u32,
}

pub fn datum(t: &Target) -> Result<Report> {
    let mut records = Vec::new();
    for o in t.orbits() {
        let datum = birational_datum(&o)?;
        records.push(DatumRow { center_dim: datum.levi.center_dim(o.ty), orbit: o, datum });
    }
    let rows = records
        .iter()
        .map(|r| {
            let [levi, gl, tail] = datum_cells(&r.datum);
            vec![r.orbit.to_string(), levi, gl, tail, r.center_dim.to_string()]
        })
        .collect();
    Ok(Report::new(&["orbit", "levi", "gl", "tail", "dim z(l)"], rows, &records))
}

pub fn namikawa(t: &Target) -> Result<Report> {
    let records = t.orbits().iter().map(namikawa_space).collect::<Result<Vec<_>>>()?;
    let rows = records
        .iter()
        .map(|n| {
            vec![
                n.orbit.to_string(),
                n.h2_dim.to_string(),
                n.leaves.len().to_string(),
                n.cartan_dim.to_string(),
                weyl_text(n),
                n.weyl_order().to_string(),
            ]
        })
        .collect();
    Ok(Report::new(&["orbit", "h2", "leaves", "cartanDim", "weyl", "order"], rows, &records))
}

pub fn sheets(ty: ClassicalType, birational: bool) -> Result<Report> {
    if birational {
        let records = birational_sheets(ty)?;
        let rows = records
            .iter()
            .map(|s| {
                let [levi, gl, tail] = datum_cells(&s.datum);
                let patterns: Vec<String> =
                    s.regular_locus.patterns.iter().map(|p| format!("{:?}", p.zero)).collect();
                vec![
                    levi,
                    gl,
                    tail,
                    s.induced_nilpotent.to_string(),
                    s.quotient_dim.to_string(),
                    s.weyl_action.order().to_string(),
                    if patterns.is_empty() { "-".into() } else { patterns.join(" ") },
                ]
            })
            .collect();
        Ok(Report::new(&["levi", "gl", "tail", "nilpotent", "dim z(l)", "|W|", "zero patterns"], rows, &records))
    } else {
        let records = enumerate_sheets(ty)?;
        let rows = records
            .iter()
            .map(|s| {
                let [levi, gl, tail] = datum_cells(&s.datum);
                vec![levi, gl, tail, s.contained_nilpotent.to_string(), s.sheet_dim.to_string()]
            })
            .collect();
        Ok(Report::new(&["levi", "gl", "tail", "nilpotent", "dim"], rows, &records))
    }
}

#[derive(Serialize)]
struct LabelRecord {
    orbit: nilsheet_core::orbitmethod::AdjointOrbitLabel,
    label: nilsheet_core::orbitmethod::OrbitMethodLabel,
    key: nilsheet_core::orbitmethod::LabelKey,
}

pub fn label(text: &str) -> Result<Report> {
    let orbit = parse_adjoint_orbit(text)?;
    check_rank(orbit.ty)?;
    let label = orbit_to_label(&orbit)?;
    let key = label.key()?;
    let [levi, gl, tail] = datum_cells(&label.bir_rigid_orbit);
    let xi: Vec<String> = key.xi.iter().map(|x| x.to_string()).collect();
    let rows = vec![vec![orbit.to_string(), levi, gl, tail, format!("({})", xi.join(";")), label.weyl_action.order().to_string()]];
    Ok(Report::new(&["orbit", "levi", "gl", "tail", "xi", "|W(l,O')|"], rows, &LabelRecord { orbit, label, key }))
}

pub fn verify_cover(ty: ClassicalType) -> Result<Report> {
    let r = verify_disjoint_cover(ty)?;
    let rows = r
        .rows
        .iter()
        .map(|row| vec![row.orbit.to_string(), row.count.to_string(), row.witnesses.first().map_or("-".into(), |d| d.levi.to_string())])
        .collect();
    Ok(Report::new(&["orbit", "sheets", "levi"], rows, &r).with_pass(r.pass))
}

pub fn verify_unique(ty: ClassicalType) -> Result<Report> {
    let rows_data = verify_uniqueness(ty)?;
    let pass = rows_data.iter().all(|r| r.count == 1 && (!r.rigid || r.birationally_rigid));
    let rows = rows_data
        .iter()
        .map(|r| {
            vec![
                r.orbit.to_string(),
                r.count.to_string(),
                r.datum.as_ref().map_or("-".into(), |d| d.levi.to_string()),
                r.rigid.to_string(),
                r.birationally_rigid.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(&["orbit", "data", "levi", "rigid", "birationally_rigid"], rows, &rows_data).with_pass(pass))
}

pub fn verify_weyl(ty: ClassicalType) -> Result<Report> {
    let reports = verify_weyl_match(ty)?;
    let pass = reports.iter().all(|r| r.pass);
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.orbit.to_string(),
                format!("{}/{}", r.cartan_dim, r.center_dim),
                format!("{}/{}", r.namikawa_weyl_order, r.stabilizer_order),
                format!("{}/{}", r.namikawa_reflections, r.stabilizer_reflections),
                r.pass.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(&["orbit", "cartanDim/dim z(l)", "|W_X|/|W(l,O')|", "reflections", "pass"], rows, &reports).with_pass(pass))
}

pub fn verify_inj(ty: ClassicalType, samples: usize, seed: u64) -> Result<Report> {
    let r = verify_injectivity(ty, samples, seed)?;
    let rows = vec![vec![
        r.ty.to_string(),
        r.samples.to_string(),
        r.distinct_orbits.to_string(),
        r.distinct_labels.to_string(),
        r.collisions.len().to_string(),
        r.roundtrip_failures.len().to_string(),
    ]];
    Ok(Report::new(&["type", "samples", "orbits", "labels", "collisions", "roundtrip failures"], rows, &r).with_pass(r.pass))
}

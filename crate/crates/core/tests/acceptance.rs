//! The ten acceptance criteria, one PASS/FAIL line each.

use std::io::Write;
use std::time::{Duration, Instant};

use nilsheet_core::induction::{
    birational_datum, collapse, data_on_levi, dim_nilradical, induce, is_birationally_rigid, is_rigid, InductionDatum,
};
use nilsheet_core::namikawa::{check_weyl_match, namikawa_space};
use nilsheet_core::orbitmethod::verify_injectivity;
use nilsheet_core::orbits::{enumerate_orbits, is_valid_partition, orbit_dim, OrbitLabel};
use nilsheet_core::partition::{partitions_of, Partition};
use nilsheet_core::rootsys::{enumerate_levis, weyl_group, ClassicalType, DClass, Family, LeviLabel};
use nilsheet_core::sheets::{arrangement_is_stable, birational_sheets, verify_disjoint_cover};
use nilsheet_core::Result;

fn types_up_to(max_rank: u32) -> Vec<ClassicalType> {
    let mut out = Vec::new();
    for (f, lo) in [(Family::A, 1), (Family::B, 2), (Family::C, 2), (Family::D, 4)] {
        for n in lo..=max_rank {
            out.push(ClassicalType::new(f, n).unwrap());
        }
    }
    out
}

/// A criterion outcome: failures are listed, errors count as failures.
struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: Result<bool>, what: impl FnOnce() -> String) {
        self.checked += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.failures.push(what()),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }
}

fn nilcone_recovery() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(4).into_iter().filter(|t| t.rank >= 2) {
        out.check(
            (|| {
                let n = namikawa_space(&OrbitLabel::regular(ty))?;
                Ok(n.cartan_dim == ty.rank && n.weyl_order() == weyl_group(ty)?.len() as u64)
            })(),
            || format!("{ty} regular orbit"),
        );
    }
    out
}

fn unique_datum() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(5) {
        for o in enumerate_orbits(ty) {
            out.check(birational_datum(&o).map(|_| true), || o.to_string());
        }
    }
    out
}

fn weyl_match() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(4) {
        for o in enumerate_orbits(ty) {
            out.check(check_weyl_match(&o).map(|r| r.pass), || o.to_string());
        }
    }
    out
}

fn disjoint_cover() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(5) {
        out.check(verify_disjoint_cover(ty).map(|r| r.pass), || ty.to_string());
    }
    out
}

/// Splits `l2` into smaller Levis `l1`: a composition of each gl block and a
/// Levi of the tail. Returns `l1` with, for each `l1` block, the index of the
/// `l2` block it came from (`None` for blocks inside the tail), plus the tail Levi.
fn refinements(ty: ClassicalType, l2: &LeviLabel) -> Vec<(Vec<(u32, Option<usize>)>, Option<LeviLabel>)> {
    let mut acc: Vec<Vec<(u32, Option<usize>)>> = vec![vec![]];
    for (j, &b) in l2.blocks.iter().enumerate() {
        let mut next = Vec::new();
        for prefix in &acc {
            for p in partitions_of(b) {
                let mut v = prefix.clone();
                v.extend(p.parts().iter().map(|&a| (a, Some(j))));
                next.push(v);
            }
        }
        acc = next;
    }
    let tails: Vec<Option<LeviLabel>> = if ty.family == Family::A || l2.tail_rank == 0 {
        vec![None]
    } else {
        enumerate_levis(l2.tail_type(ty).unwrap()).into_iter().map(Some).collect()
    };
    let mut out = Vec::new();
    for blocks in &acc {
        for t in &tails {
            let mut v = blocks.clone();
            if let Some(t) = t {
                v.extend(t.blocks.iter().map(|&a| (a, None)));
            }
            out.push((v, t.clone()));
        }
    }
    out
}

fn sort_blocks<T: Clone>(pairs: &[(u32, T)]) -> Vec<(u32, T)> {
    let mut v = pairs.to_vec();
    v.sort_by(|a, b| b.0.cmp(&a.0));
    v
}

fn stages_for(ty: ClassicalType, l2: &LeviLabel, out: &mut Outcome) {
    for (blocks, tail_levi) in refinements(ty, l2) {
        let m1 = tail_levi.as_ref().map_or(l2.tail_rank, |t| t.tail_rank);
        let needs_class = ty.family == Family::D && m1 == 0 && blocks.iter().all(|(a, _)| a % 2 == 0);
        let class = needs_class.then(|| match &tail_levi {
            Some(t) if l2.tail_rank > 0 => t.d_class.unwrap_or(DClass::Plus),
            _ => l2.d_class.unwrap_or(DClass::Plus),
        });
        let sorted = sort_blocks(&blocks);
        let l1 = LeviLabel::new(sorted.iter().map(|p| p.0).collect(), m1, class);
        for d1 in data_on_levi(ty, &l1) {
            let res = (|| {
                let direct = induce(&d1)?;
                // stage one: inside each gl block, and inside the tail of l2
                let mut gl2 = vec![Partition::empty(); l2.blocks.len()];
                let mut tail_blocks = Vec::new();
                for ((_, src), pi) in sorted.iter().zip(&d1.gl_orbits) {
                    match src {
                        Some(j) => gl2[*j] = gl2[*j].add(pi),
                        None => tail_blocks.push(pi.clone()),
                    }
                }
                let tail2 = match &tail_levi {
                    Some(t) => {
                        let sty = l2.tail_type(ty).unwrap();
                        let sub = InductionDatum::new(sty, t.clone(), tail_blocks, d1.tail_orbit.clone())?;
                        Some(induce(&sub)?)
                    }
                    None => d1.tail_orbit.clone(),
                };
                let d2 = InductionDatum::new(ty, l2.clone(), gl2, tail2)?;
                Ok(induce(&d2)? == direct)
            })();
            out.check(res, || format!("{ty} {l1} -> {l2}: {:?}", d1));
        }
    }
}

fn induction_laws() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(5) {
        for levi in enumerate_levis(ty) {
            for d in data_on_levi(ty, &levi) {
                let res = (|| {
                    let o = induce(&d)?;
                    Ok(orbit_dim(&o) == d.levi_orbit_dim() + 2 * dim_nilradical(ty, &levi)?)
                })();
                out.check(res, || format!("dimension {d:?}"));
            }
            if ty.rank <= 4 {
                stages_for(ty, &levi, &mut out);
            }
        }
    }
    out
}

fn collapse_oracle() -> Outcome {
    let mut out = Outcome::new();
    for n in 1..=12u32 {
        let all = partitions_of(n);
        for family in [Family::B, Family::C, Family::D] {
            let size_ok = match family {
                Family::B => n % 2 == 1,
                _ => n % 2 == 0,
            };
            if !size_ok {
                continue;
            }
            for p in &all {
                let below: Vec<&Partition> =
                    all.iter().filter(|q| is_valid_partition(family, q) && q.dominated_by(p)).collect();
                let maximal: Vec<&Partition> = below
                    .iter()
                    .copied()
                    .filter(|q| !below.iter().any(|r| r != q && q.dominated_by(r)))
                    .collect();
                let c = collapse(family, p);
                out.check(Ok(maximal.len() == 1 && *maximal[0] == c), || format!("{}-collapse of {p}", family.letter()));
            }
        }
    }
    out
}

fn rigidity_consistency() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(5) {
        for o in enumerate_orbits(ty) {
            let res = (|| {
                let bir = is_birationally_rigid(&o)?;
                let cartan = namikawa_space(&o)?.cartan_dim;
                Ok((!is_rigid(&o)? || bir) && (bir == (cartan == 0)))
            })();
            out.check(res, || o.to_string());
        }
    }
    out
}

fn type_a_closed_forms() -> Outcome {
    let mut out = Outcome::new();
    for n in 1..=5 {
        let ty = ClassicalType::new(Family::A, n).unwrap();
        for o in enumerate_orbits(ty) {
            let res = (|| {
                let d = birational_datum(&o)?;
                let blocks = o.partition.transpose().parts().to_vec();
                let zero = d.gl_orbits.iter().all(|p| p.parts().iter().all(|&x| x == 1));
                let cartan = namikawa_space(&o)?.cartan_dim;
                Ok(d.levi.blocks == blocks && zero && cartan == o.partition.part(0) - 1)
            })();
            out.check(res, || o.to_string());
        }
    }
    out
}

fn injectivity() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(4) {
        out.check(verify_injectivity(ty, 1000, 20240611).map(|r| r.pass), || ty.to_string());
    }
    out
}

fn regular_locus_stability() -> Outcome {
    let mut out = Outcome::new();
    for ty in types_up_to(4) {
        match birational_sheets(ty) {
            Ok(sheets) => {
                for s in sheets {
                    out.check(Ok(arrangement_is_stable(&s.regular_locus, &s.weyl_action)), || format!("{ty} {:?}", s.datum));
                }
            }
            Err(e) => out.check(Err(e), || ty.to_string()),
        }
    }
    out
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("nilpotent-cone recovery", nilcone_recovery, Duration::from_secs(10)),
        ("unique birational datum", unique_datum, Duration::from_secs(300)),
        ("namikawa/induction weyl match", weyl_match, Duration::from_secs(300)),
        ("disjoint cover", disjoint_cover, Duration::from_secs(600)),
        ("induction laws", induction_laws, Duration::from_secs(600)),
        ("collapse oracle", collapse_oracle, Duration::from_secs(600)),
        ("rigidity consistency", rigidity_consistency, Duration::from_secs(600)),
        ("type A closed forms", type_a_closed_forms, Duration::from_secs(600)),
        ("orbit-method injectivity", injectivity, Duration::from_secs(120)),
        ("regular-locus stability", regular_locus_stability, Duration::from_secs(600)),
    ];
    let mut failed = Vec::new();
    // Written to the stdout handle directly so the lines survive output capture.
    let mut stdout = std::io::stdout();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = run();
        let took = t0.elapsed();
        let pass = outcome.failures.is_empty() && took <= *limit;
        let mut line = format!(
            "acceptance {:>2} {} {name}: {} checks, {} failures, {:.2?} (limit {:?})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.checked,
            outcome.failures.len(),
            took,
            limit
        );
        if let Some(f) = outcome.failures.first() {
            line.push_str(&format!("; first: {f}"));
        }
        writeln!(stdout, "{line}").unwrap();
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

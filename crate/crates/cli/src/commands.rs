use std::io::Write;
use std::time::{Duration, Instant};

use hallforge_core::verify::{self, GreenCache, IdentityReport};
use hallforge_core::{ClassId, DimVector, HallAlgebra, HallElement, KacCounter, RepCategory, Twist};
use serde::{Deserialize, Serialize};

use crate::config::{Format, HallOp, Identity, RunConfig};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};
use crate::json::{ElementJson, ScalarJson, TensorJson};
use crate::output::{write_csv, write_json, Table};
use crate::sweep::try_par_map;

fn category(cfg: &RunConfig) -> CliResult<RepCategory> {
    Ok(RepCategory::new((*cfg.quiver).clone(), cfg.p, cfg.e, cfg.s, cfg.guards)?)
}

fn require_dims(cfg: &RunConfig) -> CliResult<&[DimVector]> {
    if cfg.dims.is_empty() {
        return Err(CliError::input("no dimension vector given; pass at least one --dim"));
    }
    Ok(&cfg.dims)
}

fn label(id: &ClassId) -> String {
    if id.dims.is_zero() {
        "[0]".into()
    } else {
        format!("[{id}]")
    }
}

// ---------------------------------------------------------------- orbits

#[derive(Debug, Serialize)]
pub struct OrbitRow {
    pub class: String,
    pub dims: String,
    pub orbit_size: u64,
    pub aut: u128,
    pub indecomposable: bool,
    pub absolutely_indecomposable: bool,
    pub min_field_degree: u32,
    pub representative: String,
}

pub fn orbit_rows(cfg: &RunConfig) -> CliResult<Vec<OrbitRow>> {
    let cat = category(cfg)?;
    let mut classes = Vec::new();
    for d in require_dims(cfg)? {
        classes.extend(cat.orbit_census(d)?.classes);
    }
    try_par_map(&classes, cfg.threads, |c| -> CliResult<OrbitRow> {
        let rep = &c.representative;
        let indec = cat.is_indecomposable(rep)?;
        Ok(OrbitRow {
            class: label(&c.id),
            dims: c.id.dims.to_string(),
            orbit_size: c.orbit_size,
            aut: c.aut_count,
            indecomposable: indec,
            absolutely_indecomposable: indec && cat.is_absolutely_indecomposable(rep)?,
            min_field_degree: cat.minimal_field_of_definition(rep)?,
            representative: cat.describe(c),
        })
    })
}

pub fn cmd_orbits(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let rows = orbit_rows(cfg)?;
    match cfg.format {
        Format::Json => write_json(&rows, out)?,
        Format::Csv => write_csv(&rows, out)?,
        Format::Table => {
            let mut t = Table::new(&["class", "dims", "orbit", "aut", "indec", "abs_indec", "min_field", "representative"]);
            for r in &rows {
                t.push(vec![
                    r.class.clone(),
                    r.dims.clone(),
                    r.orbit_size.to_string(),
                    r.aut.to_string(),
                    r.indecomposable.to_string(),
                    r.absolutely_indecomposable.to_string(),
                    r.min_field_degree.to_string(),
                    r.representative.clone(),
                ]);
            }
            t.write(out)?;
        }
    }
    Ok(EXIT_OK)
}

// ------------------------------------------------------------------ hall

/// Accepts `"1,0:0"`, `"[1,0:0]"`, `"S<vertex>"` for a simple and `"0"` for
/// the zero class, and checks the id names a real class.
pub fn resolve_class(h: &HallAlgebra, text: &str) -> CliResult<ClassId> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    if t == "0" {
        return Ok(h.zero_class());
    }
    let unknown = || CliError::input(format!("unknown class id {text:?}"));
    if let Some(v) = t.strip_prefix('S') {
        let vertex = h.category().quiver().vertex_index(v).map_err(|_| unknown())?;
        return Ok(h.simple_class(vertex)?);
    }
    let id: ClassId = t.parse().map_err(|_| unknown())?;
    if id.dims.len() != h.category().quiver().num_vertices() {
        return Err(unknown());
    }
    if id.point as u128 >= h.category().point_space(&id.dims)?.count() {
        return Err(unknown());
    }
    let census = h.census(&id.dims)?;
    census.ordinal(&id).ok_or_else(unknown)?;
    Ok(id)
}

fn legend(h: &HallAlgebra, ids: impl IntoIterator<Item = ClassId>, out: &mut dyn Write) -> CliResult<()> {
    let mut ids: Vec<ClassId> = ids.into_iter().collect();
    ids.sort();
    ids.dedup();
    for id in ids {
        let class = h.class(&id)?;
        writeln!(out, "  {} = {}", label(&id), h.category().describe(&class))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CoefCsv<'a> {
    class: &'a str,
    a: String,
    b: String,
}

fn write_element(h: &HallAlgebra, x: &HallElement, fmt: Format, out: &mut dyn Write) -> CliResult<()> {
    match fmt {
        Format::Json => write_json(&ElementJson::from_element(x), out),
        Format::Csv => {
            let j = ElementJson::from_element(x);
            let rows: Vec<CoefCsv> = j
                .terms
                .iter()
                .map(|t| CoefCsv { class: &t.class, a: t.coef.a.clone(), b: t.coef.b.clone() })
                .collect();
            write_csv(&rows, out)
        }
        Format::Table => {
            writeln!(out, "{x}")?;
            legend(h, x.terms().keys().cloned(), out)
        }
    }
}

pub fn cmd_hall(cfg: &RunConfig, op: &HallOp, out: &mut dyn Write) -> CliResult<i32> {
    let h = HallAlgebra::new(category(cfg)?);
    let twist = cfg.twist;
    match op {
        HallOp::Mul { classes } => {
            let xs = classes
                .iter()
                .map(|c| Ok(h.basis(&resolve_class(&h, c)?)))
                .collect::<CliResult<Vec<_>>>()?;
            write_element(&h, &h.multiply_many(&xs, twist)?, cfg.format, out)?;
        }
        HallOp::Antipode { class } => {
            let id = resolve_class(&h, class)?;
            write_element(&h, &h.antipode_basis(&id, twist, cfg.convention)?, cfg.format, out)?;
        }
        HallOp::Comul { class } => {
            let id = resolve_class(&h, class)?;
            let t = h.comultiply(&h.basis(&id), twist)?;
            match cfg.format {
                Format::Json => write_json(&TensorJson::from_tensor(&t), out)?,
                Format::Csv => {
                    let j = TensorJson::from_tensor(&t);
                    let keys: Vec<String> = j.terms.iter().map(|t| t.classes.join("|")).collect();
                    let rows: Vec<CoefCsv> = j
                        .terms
                        .iter()
                        .zip(&keys)
                        .map(|(t, key)| CoefCsv { class: key, a: t.coef.a.clone(), b: t.coef.b.clone() })
                        .collect();
                    write_csv(&rows, out)?;
                }
                Format::Table => {
                    writeln!(out, "{t}")?;
                    legend(&h, t.terms().keys().flatten().cloned(), out)?;
                }
            }
        }
        HallOp::Pairing { left, right } => {
            let (a, b) = (resolve_class(&h, left)?, resolve_class(&h, right)?);
            let c = h.hopf_pairing(&h.basis(&a), &h.basis(&b))?;
            match cfg.format {
                Format::Json => write_json(&ScalarJson::from_coef(&c), out)?,
                Format::Csv => {
                    let j = ScalarJson::from_coef(&c);
                    write_csv(&[CoefCsv { class: "", a: j.value.a, b: j.value.b }], out)?;
                }
                Format::Table => writeln!(out, "{c}")?,
            }
        }
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- verify

fn timed(f: impl FnOnce() -> hallforge_core::Result<IdentityReport>) -> CliResult<IdentityReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Runs one identity sweep; reports come back in canonical input order.
pub fn sweep(h: &HallAlgebra, cfg: &RunConfig, which: Identity) -> CliResult<Vec<IdentityReport>> {
    let gammas = cfg.sweep_dims();
    let threads = cfg.threads;
    let quiver = h.category().quiver().clone();
    let mut pairs_by_gamma = Vec::new();
    for g in &gammas {
        pairs_by_gamma.push(verify::pairs_of_total(h, g)?);
    }
    let triples = || -> CliResult<Vec<[ClassId; 3]>> {
        let mut out = Vec::new();
        for (g, pairs) in gammas.iter().zip(&pairs_by_gamma) {
            for l in h.classes(g)? {
                for (m, n) in pairs {
                    out.push([m.clone(), n.clone(), l.clone()]);
                }
            }
        }
        Ok(out)
    };
    let classes = || -> CliResult<Vec<ClassId>> {
        let mut out = Vec::new();
        for g in &gammas {
            out.extend(h.classes(g)?);
        }
        Ok(out)
    };
    let loop_free: Vec<usize> = (0..quiver.num_vertices()).filter(|&v| !quiver.has_loop(v)).collect();
    let reports = match which {
        Identity::Green => {
            let mut quads = Vec::new();
            for pairs in &pairs_by_gamma {
                for (m1, n1) in pairs {
                    for (m2, n2) in pairs {
                        quads.push([m1.clone(), m2.clone(), n1.clone(), n2.clone()]);
                    }
                }
            }
            let cache = GreenCache::new();
            try_par_map(&quads, threads, |[m1, m2, n1, n2]| {
                timed(|| verify::check_green_formula(h, &cache, m1, m2, n1, n2))
            })?
        }
        Identity::Rp => try_par_map(&triples()?, threads, |[m, n, l]| timed(|| verify::check_riedtmann_peng(h, m, n, l)))?,
        Identity::Adjoint => try_par_map(&triples()?, threads, |[m, n, l]| timed(|| verify::check_adjointness(h, l, m, n)))?,
        Identity::Bialgebra => {
            let totals: Vec<DimVector> = gammas.iter().filter(|g| !g.is_zero()).cloned().collect();
            let inputs = verify::bialgebra_inputs(h, &totals)?;
            let mut reports = try_par_map(&inputs, threads, |(m, n, u, v)| timed(|| verify::check_bialgebra(h, m, n, u, v)))?;
            let pairs: Vec<(ClassId, ClassId)> = pairs_by_gamma.iter().flatten().cloned().collect();
            reports.extend(try_par_map(&pairs, threads, |(m, n)| timed(|| verify::check_green_theorem(h, m, n)))?);
            reports
        }
        Identity::Coassoc => {
            let inputs: Vec<(ClassId, Twist)> = classes()?
                .into_iter()
                .flat_map(|c| [(c.clone(), Twist::Untwisted), (c, Twist::Twisted)])
                .collect();
            try_par_map(&inputs, threads, |(m, t)| timed(|| verify::check_coassociativity(h, m, *t)))?
        }
        Identity::Antipode => {
            let mut inputs = Vec::new();
            for c in classes()? {
                for t in [Twist::Untwisted, Twist::Twisted] {
                    for right in [false, true] {
                        inputs.push((c.clone(), t, right));
                    }
                }
            }
            try_par_map(&inputs, threads, |(m, t, right)| {
                timed(|| verify::check_antipode_axiom(h, m, *t, cfg.convention, *right))
            })?
        }
        Identity::Anti => {
            let pairs: Vec<(ClassId, ClassId)> = pairs_by_gamma.iter().flatten().cloned().collect();
            let mut reports = try_par_map(&pairs, threads, |(m, n)| {
                timed(|| verify::check_antipode_antimultiplicative(h, m, n, cfg.convention))
            })?;
            reports.extend(try_par_map(&classes()?, threads, |m| {
                timed(|| verify::check_antipode_anticomultiplicative(h, m, cfg.convention))
            })?);
            reports
        }
        Identity::Serre => {
            let mut inputs = Vec::new();
            for &i in &loop_free {
                for &j in &loop_free {
                    if i != j {
                        inputs.push((i, j));
                    }
                }
            }
            try_par_map(&inputs, threads, |(i, j)| timed(|| verify::check_serre(h, *i, *j)))?
        }
        Identity::Coincide => {
            let mut seqs: Vec<Vec<usize>> = vec![Vec::new()];
            let mut inputs = Vec::new();
            for _ in 0..loop_free.len().min(cfg.limit_dim as usize) {
                let mut next = Vec::new();
                for s in &seqs {
                    for &v in &loop_free {
                        if !s.contains(&v) {
                            let mut t = s.clone();
                            t.push(v);
                            next.push(t);
                        }
                    }
                }
                inputs.extend(next.iter().cloned());
                seqs = next;
            }
            try_par_map(&inputs, threads, |vs| timed(|| verify::check_coincide(h, vs)))?
        }
        Identity::All => {
            let mut all = Vec::new();
            for w in ALL_IDENTITIES {
                all.extend(sweep(h, cfg, w)?);
            }
            all
        }
    };
    Ok(reports)
}

pub const ALL_IDENTITIES: [Identity; 9] = [
    Identity::Green,
    Identity::Rp,
    Identity::Bialgebra,
    Identity::Adjoint,
    Identity::Coassoc,
    Identity::Antipode,
    Identity::Anti,
    Identity::Serre,
    Identity::Coincide,
];

#[derive(Debug, Serialize)]
pub struct FailureOut {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub advisory: bool,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub identity: String,
    pub checked: usize,
    pub failed: usize,
    pub advisory_mismatches: usize,
    pub failures: Vec<FailureOut>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Serialize)]
pub struct VerifyOut {
    pub quiver: String,
    pub q: u64,
    pub dims: Vec<String>,
    pub sweeps: Vec<SweepSummary>,
    pub ok: bool,
}

/// Groups reports by identity name in order of first appearance.
pub fn summarize(reports: &[IdentityReport]) -> Vec<SweepSummary> {
    let mut out: Vec<SweepSummary> = Vec::new();
    for r in reports {
        let pos = match out.iter().position(|s| s.identity == r.identity) {
            Some(p) => p,
            None => {
                out.push(SweepSummary {
                    identity: r.identity.clone(),
                    checked: 0,
                    failed: 0,
                    advisory_mismatches: 0,
                    failures: Vec::new(),
                    elapsed: Duration::ZERO,
                });
                out.len() - 1
            }
        };
        let s = &mut out[pos];
        s.checked += 1;
        s.elapsed += r.elapsed;
        if r.equal {
            continue;
        }
        if r.advisory {
            s.advisory_mismatches += 1;
        } else {
            s.failed += 1;
        }
        s.failures.push(FailureOut {
            inputs: r.inputs.clone(),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            advisory: r.advisory,
            diagnostic: r.diagnostic.clone(),
        });
    }
    out
}

#[derive(Serialize)]
struct SweepCsv<'a> {
    identity: &'a str,
    checked: usize,
    failed: usize,
    advisory_mismatches: usize,
}

const ADVISORY_SHOWN: usize = 5;

pub fn cmd_verify(cfg: &RunConfig, which: Identity, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let h = HallAlgebra::new(category(cfg)?);
    let start = Instant::now();
    let reports = sweep(&h, cfg, which)?;
    let sweeps = summarize(&reports);
    let ok = verify::all_hold(&reports);
    for s in &sweeps {
        writeln!(err, "{}: {} checks, {:.3}s summed", s.identity, s.checked, s.elapsed.as_secs_f64())?;
    }
    writeln!(err, "wall time {:.3}s", start.elapsed().as_secs_f64())?;
    match cfg.format {
        Format::Json => write_json(
            &VerifyOut {
                quiver: cfg.quiver_name(),
                q: h.q(),
                dims: cfg.sweep_dims().iter().map(ToString::to_string).collect(),
                sweeps,
                ok,
            },
            out,
        )?,
        Format::Csv => {
            let rows: Vec<SweepCsv> = sweeps
                .iter()
                .map(|s| SweepCsv {
                    identity: &s.identity,
                    checked: s.checked,
                    failed: s.failed,
                    advisory_mismatches: s.advisory_mismatches,
                })
                .collect();
            write_csv(&rows, out)?;
        }
        Format::Table => {
            let mut t = Table::new(&["identity", "checked", "failed", "advisory"]);
            for s in &sweeps {
                t.push(vec![
                    s.identity.clone(),
                    s.checked.to_string(),
                    s.failed.to_string(),
                    s.advisory_mismatches.to_string(),
                ]);
            }
            t.write(out)?;
            for s in &sweeps {
                let mut shown_advisory = 0;
                for f in &s.failures {
                    if f.advisory {
                        shown_advisory += 1;
                        if shown_advisory > ADVISORY_SHOWN {
                            continue;
                        }
                    }
                    let tag = if f.advisory { "NOTE" } else { "FAIL" };
                    writeln!(out, "{tag} {} ({})", s.identity, f.inputs.join(", "))?;
                    writeln!(out, "  lhs = {}", f.lhs)?;
                    writeln!(out, "  rhs = {}", f.rhs)?;
                    if let Some(d) = &f.diagnostic {
                        writeln!(out, "  {d}")?;
                    }
                }
                if shown_advisory > ADVISORY_SHOWN {
                    writeln!(out, "NOTE {}: {} more advisory mismatches", s.identity, shown_advisory - ADVISORY_SHOWN)?;
                }
            }
            writeln!(out, "{}", if ok { "all identities hold" } else { "IDENTITY VIOLATED" })?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

// ---------------------------------------------------------------- census

#[derive(Debug, Serialize, Deserialize)]
pub struct CensusOut {
    pub quiver: String,
    pub alpha: String,
    pub q: u64,
    pub s: u32,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "I")]
    pub i: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "M_F_direct")]
    pub mf_direct: u64,
    #[serde(rename = "M_F_formula")]
    pub mf_formula: u64,
    #[serde(rename = "M_min")]
    pub m_min: u64,
    pub agree: bool,
}

pub fn census_rows(cfg: &RunConfig) -> CliResult<Vec<CensusOut>> {
    let dims = require_dims(cfg)?;
    let counter = KacCounter::new((*cfg.quiver).clone(), &cfg.quiver_name(), cfg.p, cfg.e, cfg.guards)?;
    let jobs: Vec<(DimVector, u32)> = dims
        .iter()
        .flat_map(|d| (1..=cfg.s).map(move |s| (d.clone(), s)))
        .collect();
    try_par_map(&jobs, cfg.threads, |(alpha, s)| -> CliResult<CensusOut> {
        let r = counter.row(alpha, *s)?;
        Ok(CensusOut {
            agree: r.agree(),
            quiver: r.quiver,
            alpha: r.alpha.to_string(),
            q: r.q,
            s: r.s,
            m: r.m,
            i: r.i,
            a: r.a,
            mf_direct: r.mf_direct,
            mf_formula: r.mf_formula,
            m_min: r.m_min,
        })
    })
}

pub fn cmd_census(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let rows = census_rows(cfg)?;
    match cfg.format {
        Format::Json => write_json(&rows, out)?,
        Format::Csv => write_csv(&rows, out)?,
        Format::Table => {
            let mut t = Table::new(&["quiver", "alpha", "q", "s", "M", "I", "A", "M_F_direct", "M_F_formula", "M_min", "agree"]);
            for r in &rows {
                t.push(vec![
                    r.quiver.clone(),
                    r.alpha.clone(),
                    r.q.to_string(),
                    r.s.to_string(),
                    r.m.to_string(),
                    r.i.to_string(),
                    r.a.to_string(),
                    r.mf_direct.to_string(),
                    r.mf_formula.to_string(),
                    r.m_min.to_string(),
                    r.agree.to_string(),
                ]);
            }
            t.write(out)?;
        }
    }
    Ok(if rows.iter().all(|r| r.agree) { EXIT_OK } else { EXIT_VIOLATION })
}

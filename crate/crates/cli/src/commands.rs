use std::fs;
use std::path::Path;

use anyhow::Result;
use cayden::cayley::{self, DigraphLiteral};
use cayden::density::{self, format_rational};
use cayden::kappa::{self, KappaCache};
use cayden::literal::{parse_digraph, parse_matrix};
use cayden::mdd::{self, Mdd};
use cayden::zmatrix::smith_normal_form;
use cayden::{CayleyDigraph, Error};
use serde_json::Value;

use crate::report::{Cell, Format, Report};
use crate::{tables, CheckFailed, Global, Inconsistent};

pub fn digraph_cell(g: &CayleyDigraph) -> Cell {
    serde_json::to_value(DigraphLiteral::from(g.clone()))
        .expect("literal serializes")
        .into()
}

fn conjectural(d: u32) -> bool {
    density::density_constant(d).is_ok_and(|c| c.is_conjectural())
}

fn read_mdd(path: &Path) -> Result<Mdd> {
    Ok(Mdd::parse_text(&fs::read_to_string(path)?)?)
}

fn write_or_text(text: String, output: Option<&Path>, summary: Report) -> Result<Report> {
    match output {
        Some(path) => {
            fs::write(path, &text)?;
            Ok(summary)
        }
        None => Ok(summary.with_text(text)),
    }
}

pub fn snf(matrix: &str) -> Result<Report> {
    let m = parse_matrix(matrix)?;
    let snf = smith_normal_form(&m);
    if !snf.verify(&m) {
        return Err(Error::Parse("Smith normal form failed verification".into()).into());
    }
    let factors: Vec<String> = snf
        .invariant_factors()
        .iter()
        .map(ToString::to_string)
        .collect();
    Ok(Report::record(vec![
        ("matrix", m.to_string().into()),
        (
            "invariant_factors",
            format!("[{}]", factors.join(",")).into(),
        ),
        ("S", snf.s.to_string().into()),
        ("U", snf.u.to_string().into()),
        ("V", snf.v.to_string().into()),
    ]))
}

pub fn proper(digraph: &str, tessellation: Option<&str>) -> Result<Report> {
    let g = parse_digraph(digraph)?;
    let via_lshape = if g.degree() == 2 {
        Value::Bool(mdd::is_proper_via_lshape(&g)?)
    } else {
        Value::Null
    };
    let mut fields = vec![
        ("digraph", digraph_cell(&g)),
        ("proper", mdd::is_proper(&g).into()),
        ("proper_by_lshape", via_lshape.into()),
        (
            "tessellation",
            mdd::tessellation_matrix(&g).to_string().into(),
        ),
    ];
    if let Some(t) = tessellation {
        let m = parse_matrix(t)?;
        let witness = mdd::proper_witness(&g, &m)?;
        fields.push((
            "witness_V",
            witness
                .map_or(Value::Null, |w| w.v.to_string().into())
                .into(),
        ));
    }
    Ok(Report::record(fields))
}

pub fn diameter(digraph: &str) -> Result<Report> {
    let g = parse_digraph(digraph)?;
    Ok(Report::record(vec![
        ("digraph", digraph_cell(&g)),
        ("name", g.pretty().into()),
        ("degree", g.degree().into()),
        ("order", g.order().into()),
        ("diameter", cayley::diameter(&g).into()),
    ]))
}

pub fn density(digraph: &str) -> Result<Report> {
    let g = parse_digraph(digraph)?;
    let d = g.degree() as u32;
    let constant = density::density_constant(d)?;
    let checked = density::check_density(&g)?;
    Ok(Report::record(vec![
        ("digraph", digraph_cell(&g)),
        ("order", g.order().into()),
        ("diameter", cayley::diameter(&g).into()),
        ("density", format_rational(&checked.value).into()),
        (
            "global_density",
            Cell::primed(
                format_rational(&constant.delta()),
                constant.is_conjectural(),
            ),
        ),
        ("attains", (checked.value == constant.delta()).into()),
    ]))
}

fn mdd_summary(h: &Mdd) -> Report {
    let shape = mdd::extract_lshape(h).ok().map(|s| s.to_string());
    Report::record(vec![
        ("digraph", digraph_cell(h.source())),
        ("cubes", h.len().into()),
        ("max_norm", h.max_norm().into()),
        ("solid_diameter", mdd::solid_diameter(h).into()),
        ("lshape", shape.map_or(Value::Null, Value::from).into()),
    ])
}

/// Human output is the MDD file, CSV one row per cube, JSONL a summary.
fn mdd_report(h: &Mdd, format: Format, output: Option<&Path>) -> Result<Report> {
    let text = match format {
        Format::Csv => mdd::render_points_csv(h),
        _ => h.to_text(),
    };
    match output {
        Some(path) => {
            fs::write(path, text)?;
            Ok(mdd_summary(h))
        }
        None => Ok(mdd_summary(h)
            .with_csv(mdd::render_points_csv(h))
            .with_text(text)),
    }
}

pub fn mdd_build(digraph: &str, output: Option<&Path>, format: Format) -> Result<Report> {
    let g = parse_digraph(digraph)?;
    let h = mdd::build_mdd(&g)?;
    mdd_report(&h, format, output)
}

pub fn mdd_verify(path: &Path, format: Format) -> Result<Report> {
    let h = read_mdd(path)?;
    let violation = mdd::mdd_violation(&h);
    let report = Report::record(vec![
        ("file", path.display().to_string().into()),
        ("valid", violation.is_none().into()),
        ("cubes", h.len().into()),
        ("solid_diameter", mdd::solid_diameter(&h).into()),
        (
            "violation",
            violation.clone().map_or(Value::Null, Value::from).into(),
        ),
    ]);
    if let Some(v) = violation {
        eprint!("{}", report.render(format)?);
        return Err(CheckFailed(format!("{} is not an MDD: {v}", path.display())).into());
    }
    Ok(report)
}

pub fn mdd_render(path: &Path, output: Option<&Path>) -> Result<Report> {
    let h = read_mdd(path)?;
    let text = match h.source().degree() {
        2 => mdd::render_svg(&h),
        3 => mdd::render_layers(&h),
        d => return Err(Error::UnsupportedDegree(d as u32).into()),
    }
    .expect("degree checked");
    write_or_text(text, output, mdd_summary(&h))
}

fn dilated(g: &CayleyDigraph, m: u64, strict: bool) -> Result<CayleyDigraph> {
    Ok(if strict {
        cayley::dilate_digraph_strict(g, m)?
    } else {
        cayley::dilate_digraph(g, m)?
    })
}

pub fn dilate(digraph: &str, m: u64, strict: bool) -> Result<Report> {
    let g = parse_digraph(digraph)?;
    let mg = dilated(&g, m, strict)?;
    Ok(Report::record(vec![
        ("digraph", digraph_cell(&mg)),
        ("name", mg.pretty().into()),
        ("order", mg.order().into()),
        ("diameter", cayley::diameter(&mg).into()),
        ("proper", mdd::is_proper(&g).into()),
    ]))
}

pub fn dilate_file(
    path: &Path,
    m: u64,
    strict: bool,
    output: Option<&Path>,
    format: Format,
) -> Result<Report> {
    let h = read_mdd(path)?;
    dilated(h.source(), m, strict)?;
    let mh = mdd::dilate_mdd(&h, m)?;
    mdd_report(&mh, format, output)
}

pub fn bound(d: u32, n: Option<u64>, k: Option<u64>) -> Result<Report> {
    let primed = conjectural(d);
    Ok(match (n, k) {
        (Some(n), _) => {
            let l = density::lower_bound(d, n)?;
            Report::record(vec![
                ("d", d.into()),
                ("n", n.into()),
                ("ell", Cell::primed(l.value, primed)),
            ])
        }
        (None, Some(k)) => {
            let big_n = density::max_order(d, k)?;
            Report::record(vec![
                ("d", d.into()),
                ("k", k.into()),
                ("max_order", Cell::primed(big_n.value.to_string(), primed)),
            ])
        }
        (None, None) => return Err(Error::Parse("give -n or -k".into()).into()),
    })
}

pub fn tight_digraph(digraph: &str) -> Result<Report> {
    let g = parse_digraph(digraph)?;
    let d = g.degree() as u32;
    let t = density::tightness(&g)?;
    let l = density::lower_bound(d, g.order())?;
    Ok(Report::record(vec![
        ("digraph", digraph_cell(&g)),
        ("order", g.order().into()),
        ("diameter", cayley::diameter(&g).into()),
        ("ell", Cell::primed(l.value, l.conjectural)),
        ("tightness", Cell::primed(t.value, t.conjectural)),
    ]))
}

pub fn coefficient_cell(c: &density::Flagged<density::TightnessCoefficient>) -> Cell {
    let v: Value = match c.value {
        density::TightnessCoefficient::Finite(c) => c.into(),
        density::TightnessCoefficient::Infinite => "INFINITE".into(),
    };
    Cell::primed(v, c.conjectural)
}

pub fn tight_coeff(d: u32, n: u64) -> Result<Report> {
    let c = density::tightness_coefficient(d, n)?;
    let beta = density::tightness_coefficient_by_beta(d, n)?;
    if c != beta {
        return Err(Inconsistent(format!("c({d},{n}): loop gives {c}, β gives {beta}")).into());
    }
    Ok(Report::record(vec![
        ("d", d.into()),
        ("n", n.into()),
        ("coefficient", coefficient_cell(&c)),
    ]))
}

pub fn tight_cd(d: u32, x: u64) -> Result<Report> {
    Ok(Report::record(vec![
        ("d", d.into()),
        ("x", x.into()),
        ("in_cd", density::in_cd(x, d)?.into()),
    ]))
}

pub fn tight_xd(d: u32) -> Result<Report> {
    Ok(Report::record(vec![
        ("d", d.into()),
        ("x_d", density::min_attaining_x(d)?.into()),
    ]))
}

fn open_cache(g: &Global) -> Result<Option<KappaCache>> {
    Ok(match &g.cache {
        Some(p) => Some(KappaCache::open(p)?),
        None => KappaCache::from_env()?,
    })
}

pub fn kappa(d: u32, n: u64, g: &Global) -> Result<Report> {
    let options = g.search();
    let mut cache = open_cache(g)?;
    let bound = density::lower_bound(d, n)?;
    let (kappa, witness, millis, cached) = match cache.as_ref().and_then(|c| c.get(d, n)) {
        Some(r) => (
            r.kappa,
            CayleyDigraph::try_from(r.witness.clone())?,
            r.millis,
            true,
        ),
        None => {
            let k = kappa::kappa(d, n, &options)?;
            if let Some(c) = cache.as_mut() {
                c.put(k.record(&options))?;
            }
            (k.kappa, k.witness, k.millis, false)
        }
    };
    let primed = bound.conjectural;
    Ok(Report::record(vec![
        ("d", d.into()),
        ("n", n.into()),
        ("kappa", kappa.into()),
        ("ell", Cell::primed(bound.value, primed)),
        ("gap", Cell::primed(kappa as i64 - bound.value, primed)),
        ("witness", digraph_cell(&witness)),
        ("name", witness.pretty().into()),
        ("millis", millis.into()),
        ("cached", cached.into()),
    ]))
}

pub fn gaps(
    d: u32,
    from: u64,
    to: u64,
    csv: Option<&Path>,
    svg: Option<&Path>,
    g: &Global,
) -> Result<Report> {
    let mut cache = open_cache(g)?;
    let rows = kappa::gap_table(d, from, to, &g.search(), cache.as_mut())?;
    if let Some(path) = csv {
        tables::write_gaps_csv(&rows, path)?;
    }
    if let Some(path) = svg {
        fs::write(path, tables::render_gaps_svg(&rows, conjectural(d)))?;
    }
    Ok(tables::gaps_report(&rows, conjectural(d)))
}

pub fn upsilon(d: u32, m: u64) -> Result<Report> {
    let g = cayley::upsilon(d, m)?;
    let h = mdd::build_mdd(&g)?;
    let shape = mdd::extract_lshape(&h).ok().map(|s| s.to_string());
    Ok(Report::record(vec![
        ("digraph", digraph_cell(&g)),
        ("name", g.pretty().into()),
        ("order", g.order().into()),
        ("diameter", cayley::diameter(&g).into()),
        (
            "density",
            format_rational(&cayley::solid_density(&g)).into(),
        ),
        ("lshape", shape.map_or(Value::Null, Value::from).into()),
    ]))
}

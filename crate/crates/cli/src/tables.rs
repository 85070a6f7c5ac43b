//! The dilation tables and the gap plot.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Result;
use cayden::cayley::{diameter, dilate_digraph};
use cayden::density::{lower_bound, tightness};
use cayden::kappa::GapRow;
use cayden::mdd::{build_mdd, extract_lshape, verify_mdd};
use cayden::CayleyDigraph;

use crate::commands::digraph_cell;
use crate::report::{Cell, Format, Report};
use crate::Inconsistent;

fn seeds_order_72() -> [(&'static str, CayleyDigraph); 2] {
    [
        (
            "Γ1",
            CayleyDigraph::from_parts(&[1, 72], &[&[-1, 4], &[-3, 11]]).expect("valid"),
        ),
        (
            "Γ2",
            CayleyDigraph::from_parts(&[3, 24], &[&[0, 1], &[-1, 3]]).expect("valid"),
        ),
    ]
}

/// `mΓ_1` and `mΓ_2` for `m = 1..4`: digraph, L-shape, diameter, `ℓ`.
pub fn table1() -> Result<Report> {
    let mut machine = Report::table(&[
        "family", "m", "digraph", "name", "order", "lshape", "k", "ell",
    ]);
    let mut human = Report::table(&["", "m", "digraph", "n", "L-shape", "k", "ℓ"]);
    for (family, g) in seeds_order_72() {
        for m in 1..=4u64 {
            let mg = dilate_digraph(&g, m)?;
            let h = build_mdd(&mg)?;
            if !verify_mdd(&h) {
                return Err(
                    Inconsistent(format!("MDD of {} fails verification", mg.pretty())).into(),
                );
            }
            let shape = extract_lshape(&h)?.to_string();
            let k = diameter(&mg);
            tightness(&mg)?;
            let ell = lower_bound(2, mg.order())?.value;
            machine.push(vec![
                family.into(),
                m.into(),
                digraph_cell(&mg),
                mg.pretty().into(),
                mg.order().into(),
                shape.clone().into(),
                k.into(),
                ell.into(),
            ]);
            human.push(vec![
                family.into(),
                m.into(),
                mg.pretty().into(),
                mg.order().into(),
                shape.into(),
                k.into(),
                ell.into(),
            ]);
        }
    }
    Ok(machine.with_text(human.render(Format::Human)?))
}

/// `mΓ` for `Γ = Cay(Z_16,{1,4,5})`, `m = 1..5`: diameter against `ℓ'`.
pub fn table2() -> Result<Report> {
    let g = CayleyDigraph::from_parts(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]])
        .expect("valid");
    let mut machine = Report::table(&["m", "digraph", "group", "order", "k", "ell", "t"]);
    let mut human = Report::table(&["m", "group", "n", "k", "ℓ'", "t'"]);
    for m in 1..=5u64 {
        let mg = dilate_digraph(&g, m)?;
        let k = diameter(&mg);
        let ell = lower_bound(3, mg.order())?;
        let t = tightness(&mg)?;
        let group = mg.group().to_string();
        machine.push(vec![
            m.into(),
            digraph_cell(&mg),
            group.clone().into(),
            mg.order().into(),
            k.into(),
            Cell::primed(ell.value, ell.conjectural),
            Cell::primed(t.value, t.conjectural),
        ]);
        // the header carries the prime in the human table
        human.push(vec![
            m.into(),
            group.into(),
            mg.order().into(),
            k.into(),
            ell.value.into(),
            t.value.into(),
        ]);
    }
    Ok(machine.with_text(human.render(Format::Human)?))
}

pub fn gaps_report(rows: &[GapRow], primed: bool) -> Report {
    let mut r = Report::table(&["n", "gap"]);
    for row in rows {
        r.push(vec![row.n.into(), Cell::primed(row.gap, primed)]);
    }
    r
}

/// Two-column `n,gap` CSV; header only when `rows` is empty.
pub fn write_gaps_csv(rows: &[GapRow], path: &Path) -> Result<()> {
    fs::write(path, gaps_report(rows, false).render(Format::Csv)?)?;
    Ok(())
}

/// One bar per order, height proportional to the gap.
pub fn render_gaps_svg(rows: &[GapRow], primed: bool) -> String {
    const BAR: i64 = 6;
    const UNIT: i64 = 40;
    const MARGIN: i64 = 30;
    let max_gap = rows.iter().map(|r| r.gap).max().unwrap_or(0).max(1);
    let width = MARGIN * 2 + BAR * rows.len() as i64;
    let height = MARGIN * 2 + UNIT * max_gap;
    let base = height - MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="#333"/>"##,
        width - MARGIN
    );
    for g in 0..=max_gap {
        let y = base - g * UNIT;
        let _ = writeln!(out, r#"  <text x="4" y="{}">{g}</text>"#, y + 3);
    }
    for (i, row) in rows.iter().enumerate() {
        let x = MARGIN + BAR * i as i64;
        let h = row.gap.max(0) * UNIT;
        let _ = writeln!(
            out,
            r##"  <rect x="{x}" y="{}" width="{}" height="{h}" fill="#457b9d"><title>n={} gap={}</title></rect>"##,
            base - h,
            BAR - 1,
            row.n,
            row.gap
        );
    }
    if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
        let _ = writeln!(
            out,
            r#"  <text x="{MARGIN}" y="{}">{}</text>"#,
            base + 14,
            first.n
        );
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="end">{}</text>"#,
            width - MARGIN,
            base + 14,
            last.n
        );
    }
    let label = if primed { "κ − ℓ'" } else { "κ − ℓ" };
    let _ = writeln!(out, r#"  <text x="{MARGIN}" y="14">{label}</text>"#);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: u64, gap: i64) -> GapRow {
        GapRow {
            n,
            kappa: 0,
            bound: 0,
            gap,
        }
    }

    #[test]
    fn gap_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gaps.csv");
        write_gaps_csv(&[row(16, 0), row(17, 1)], &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "n,gap\n16,0\n17,1\n");
        write_gaps_csv(&[], &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "n,gap\n");
    }

    #[test]
    fn gap_svg() {
        let svg = render_gaps_svg(&[row(4, 1), row(5, 0), row(6, 1)], true);
        assert_eq!(svg.matches("<rect").count(), 3);
        assert!(svg.contains("ℓ'"));
        assert!(render_gaps_svg(&[], false).ends_with("</svg>\n"));
    }

    #[test]
    fn tables_build() {
        let t1 = table1().unwrap().render(Format::Human).unwrap();
        assert_eq!(t1.lines().count(), 9);
        assert!(t1.contains("L(44,32,16,16)"));
        let t2 = table2().unwrap().render(Format::Csv).unwrap();
        assert_eq!(t2.lines().count(), 6);
    }
}

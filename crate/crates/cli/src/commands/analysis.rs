use std::fmt::Write;

use anyhow::{bail, Result};
use bellab_core::bounds::{enumerate_extremes, max_discrepancy, scan_violation, Inefficiencies, BOUND_TOL};
use bellab_core::lhv::{btcc_check, DEFAULT_BTCC_TOL};
use bellab_core::rng::CounterRng;
use bellab_core::{qm_full_distribution, CorrelationSign, Outcome, QmSource, Sign};
use serde_json::json;

use super::{BtccArgs, PredictArgs, ScanArgs, TablesArgs};
use crate::args::{AngleArg, SignArg};
use crate::config::Resolver;
use crate::{emit, json_body, path_display, svg, Format};

pub(super) fn qm_source(r: &mut Resolver, eta: Option<f64>, f: Option<f64>, sign: Option<SignArg>) -> Result<QmSource> {
    let eta = r.get("eta", eta, 1.0)?;
    let f = r.get("F", f, 1.0)?;
    let sign = r.get("sign", sign, SignArg(CorrelationSign::Parallel))?;
    Ok(QmSource::new(sign.0, f, eta)?)
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let mut r = Resolver::new("predict", args.config.as_deref())?;
    let src = qm_source(&mut r, args.eta, args.f, args.sign)?;
    let a: AngleArg = r.required("a", args.a)?;
    let b: AngleArg = r.required("b", args.b)?;
    let format = r.get("format", args.format, Format::Text)?;
    r.record("out", &path_display(&args.out));
    r.finish()?;

    let table = qm_full_distribution(&src, a.angle(), b.angle());
    let signed = |x, y| table.signed(x, y);
    let concordant = signed(Sign::Plus, Sign::Plus) + signed(Sign::Minus, Sign::Minus);
    let discordant = signed(Sign::Plus, Sign::Minus) + signed(Sign::Minus, Sign::Plus);
    let c_eff = (concordant - discordant) / (concordant + discordant);

    let body = match format {
        Format::Text => {
            let mut s = r.header();
            s.push('\n');
            s.push_str("r\\q,+1,-1,0\n");
            for x in Outcome::ALL {
                write!(s, "{}", label(x)).unwrap();
                for y in Outcome::ALL {
                    write!(s, ",{}", table.get(x, y)).unwrap();
                }
                s.push('\n');
            }
            writeln!(s, "C_eff,{c_eff}").unwrap();
            s
        }
        Format::Json => json_body(&json!({
            "bellab": r.header_json(),
            "outcomes": ["+1", "-1", "0"],
            "table": table.cells,
            "c_eff": c_eff,
        }))?,
    };
    emit(args.out.as_deref(), &body)
}

fn label(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "+1",
        Outcome::Block => "-1",
        Outcome::Undetected => "0",
    }
}

pub fn scan(args: ScanArgs) -> Result<()> {
    let mut r = Resolver::new("scan", args.config.as_deref())?;
    let src = qm_source(&mut r, args.eta, args.f, args.sign)?;
    let grid = r.get("grid", args.grid, 256)?;
    r.record("out", &path_display(&args.out));
    r.record("svg", &path_display(&args.svg));
    r.finish()?;

    let scan = scan_violation(&src, grid)?;
    let mut csv = r.header();
    csv.push_str("\nphi_rad,G,violated\n");
    for p in &scan.points {
        writeln!(csv, "{},{},{}", p.phi, p.g, p.violated).unwrap();
    }
    emit(args.out.as_deref(), &csv)?;
    if let Some(path) = &args.svg {
        let pts: Vec<(f64, f64)> = scan.points.iter().map(|p| (p.phi, p.g)).collect();
        let plot = svg::line_plot(&pts, "phi (rad)", "G(phi)", r.header().trim_start_matches("# "));
        emit(Some(path), &plot)?;
    }
    for (lo, hi) in &scan.intervals {
        eprintln!("violation interval: ({lo:.6}, {hi:.6}) rad");
    }
    if scan.intervals.is_empty() {
        eprintln!("no violation on this grid");
    }
    if let Some((phi, g)) = scan.maximizer {
        eprintln!("maximum: G = {g:.9} at phi = {phi:.9} rad");
    }
    Ok(())
}

pub fn tables(args: TablesArgs) -> Result<()> {
    let mut r = Resolver::new("tables", args.config.as_deref())?;
    let samples = r.get("samples", args.samples, 10_000)?;
    let seed = r.seed(args.seed)?;
    r.record("out", &path_display(&args.out));
    r.finish()?;
    if samples == 0 {
        bail!("--samples must be at least 1");
    }

    let rng = CounterRng::new(seed);
    let mut worst = 0.0f64;
    let mut worst_at = None;
    let mut positive = [false; 16];
    for k in 0..samples {
        let mut d = rng.event(0, k);
        let slots = [(); 6].map(|_| d.next_f64());
        let ineff = Inefficiencies::from_slots(slots);
        let rows = enumerate_extremes(&ineff)?;
        let disc = max_discrepancy(&rows);
        if disc > worst || worst_at.is_none() {
            worst = disc;
            worst_at = Some(ineff);
        }
        for row in &rows {
            positive[row.index - 1] |= row.g > 0.0;
        }
    }
    let ideal = enumerate_extremes(&Inefficiencies::IDEAL)?;
    let ideal_max = ideal.iter().map(|row| row.g).fold(f64::NEG_INFINITY, f64::max);
    let report = json!({
        "bellab": r.header_json(),
        "samples": samples,
        "max_discrepancy": worst,
        "worst_inefficiencies": worst_at,
        "tolerance": BOUND_TOL,
        "agreement": worst <= BOUND_TOL,
        "rows_seen_positive": (1..=16).filter(|i| positive[i - 1]).collect::<Vec<_>>(),
        "ideal": {
            "max_g": ideal_max,
            "max_discrepancy": max_discrepancy(&ideal),
            "max_g_is_zero": ideal_max == 0.0,
            "rows": ideal.iter().map(|row| json!({
                "row": row.index,
                "g": row.g,
                "limit": row.symbolic,
            })).collect::<Vec<_>>(),
        },
    });
    emit(args.out.as_deref(), &json_body(&report)?)
}

pub fn btcc(args: BtccArgs) -> Result<()> {
    let mut r = Resolver::new("btcc", args.config.as_deref())?;
    let model = r.required("model", args.model)?;
    let direction = r.get("direction", args.direction, "0rad".parse().expect("literal angle"))?;
    let samples = r.get("samples", args.samples, 1_000_000)?;
    let tol = r.get("tol", args.tol, DEFAULT_BTCC_TOL)?;
    let seed = r.seed(args.seed)?;
    r.record("out", &path_display(&args.out));
    r.finish()?;

    let report = btcc_check(&model.0, direction.angle(), samples, tol, seed)?;
    emit(
        args.out.as_deref(),
        &json_body(&json!({ "bellab": r.header_json(), "report": report }))?,
    )
}

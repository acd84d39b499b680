use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use bellab_core::montecarlo::{chsh_from_counts, g_statistic_from_counts, Efficiency};
use bellab_core::{
    assumption_a_test, quad_from_phi, ratio_statistic, run_experiment, CountsTable, ExperimentConfig, SettingsQuad,
    Sign, Source,
};
use serde_json::{json, Value};

use super::analysis::qm_source;
use super::SimulateArgs;
use crate::args::{AngleArg, EfficiencyArg, SourceArg};
use crate::config::Resolver;
use crate::{emit, json_body};

fn or_error<T: serde::Serialize>(r: bellab_core::Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("serializable report"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn resolve_quad(r: &mut Resolver, args: &SimulateArgs) -> Result<SettingsQuad> {
    let explicit = [
        r.optional("a", args.a.clone())?,
        r.optional("b", args.b.clone())?,
        r.optional("a_prime", args.a_prime.clone())?,
        r.optional("b_prime", args.b_prime.clone())?,
    ];
    match explicit {
        [Some(a), Some(b), Some(ap), Some(bp)] => {
            r.ignore(&["phi"]);
            Ok(SettingsQuad::new(a.angle(), b.angle(), ap.angle(), bp.angle()))
        }
        [None, None, None, None] => {
            let phi: AngleArg = r.get("phi", args.phi.clone(), "45deg".parse().expect("literal angle"))?;
            Ok(quad_from_phi(phi.radians)?)
        }
        _ => bail!("give all four of a, b, a_prime, b_prime, or none of them"),
    }
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let mut r = Resolver::new("simulate", args.config.as_deref())?;
    let source_arg: SourceArg = r.required("source", args.source)?;
    let source = match source_arg {
        SourceArg::Qm => Source::Qm(qm_source(&mut r, args.eta, args.f, args.sign)?),
        SourceArg::Model(m) => {
            r.ignore(&["eta", "F", "sign"]);
            Source::lhv(m)
        }
    };
    let quad = resolve_quad(&mut r, &args)?;
    let pairs_per_setting = r.get("pairs_per_setting", args.pairs_per_setting, 100_000)?;
    let unit = EfficiencyArg(Efficiency::Constant(1.0));
    let e1 = r.get("efficiency1", args.efficiency1, unit)?;
    let e2 = r.get("efficiency2", args.efficiency2, unit)?;
    let seed = r.seed(args.seed)?;
    let workers = r.unrecorded("workers", args.workers)?;
    let out_dir: PathBuf = r
        .get(
            "out_dir",
            args.out_dir.as_ref().map(|p| p.display().to_string()),
            ".".into(),
        )?
        .into();
    r.finish()?;

    let cfg = ExperimentConfig {
        source,
        setting_pairs: quad.extended_ch_pairs().to_vec(),
        pairs_per_setting,
        efficiency: [e1.0, e2.0],
        seed,
        workers,
    };
    let counts = run_experiment(&cfg)?;

    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut csv = r.header().into_bytes();
    csv.push(b'\n');
    counts.write_csv(&mut csv)?;
    emit(Some(&out_dir.join("counts.csv")), std::str::from_utf8(&csv)?)?;

    let report = report(&r, &counts, &quad);
    emit(Some(&out_dir.join("report.json")), &json_body(&report)?)?;

    if let Ok(rp) = ratio_statistic(&counts, &quad, Sign::Plus, Sign::Plus) {
        println!(
            "ratio(+,+) = {:.6} ± {:.6}  violated = {}",
            rp.ratio, rp.stderr, rp.violated
        );
    }
    if let Ok(a) = assumption_a_test(&counts) {
        println!("direction independence: p = {:.4}  pass = {}", a.p_value, a.pass);
    }
    println!("wrote {}", out_dir.join("counts.csv").display());
    println!("wrote {}", out_dir.join("report.json").display());
    Ok(())
}

fn report(r: &Resolver, counts: &CountsTable, quad: &SettingsQuad) -> Value {
    let mut ratio = Vec::new();
    let mut g = Vec::new();
    for s in Sign::BOTH {
        for t in Sign::BOTH {
            ratio.push(or_error(ratio_statistic(counts, quad, s, t)));
            let mut entry = or_error(g_statistic_from_counts(counts, quad, s, t));
            if let Value::Object(m) = &mut entry {
                m.insert("r".into(), json!(s.value()));
                m.insert("q".into(), json!(t.value()));
            }
            g.push(entry);
        }
    }
    json!({
        "bellab": r.header_json(),
        "quad": quad,
        "ratio": ratio,
        "g": g,
        "chsh": or_error(chsh_from_counts(counts, quad)),
        "assumption_a": or_error(assumption_a_test(counts)),
    })
}

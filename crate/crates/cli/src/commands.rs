use std::collections::BTreeMap;
use std::fs;

use serde_json::{json, Map, Value};

use nubshift_core::abelian::{classify_shift, Mode};
use nubshift_core::limits::{
    build_example_5_6_with, build_example_c4, centre_on_periodic_points, connector_check,
    homoclinic_trivial_certificate_with, right_inverse_search, support_growth_exhaustive, truncated_bcg,
};
use nubshift_core::restricted::{scale_report, tidy_components, LevelSubgroupSym};
use nubshift_core::series::{equivalent_series_with, opennormal_series_with, SubnormalSeries};
use nubshift_core::structure::{
    depth, eta, eta_solve, homoclinic_closure, homoclinic_points, is_topologically_transitive, nub, Direction,
};
use nubshift_core::{Ctx, Group, GroupShiftSFT, SlidingBlockHom};

use crate::formats::{parse_word, sft_to_json, word_to_json};
use crate::session::{Session, BUILTINS};
use crate::{suite, Cli, CliError, Command, DirectionArg, Example, LimitsCommand, ModeArg, ShiftArgs};

/// What a command produced, before it is printed and serialized.
#[derive(Default)]
struct Out {
    results: Map<String, Value>,
    certificates: Map<String, Value>,
    verdicts: BTreeMap<String, bool>,
    /// Replaces the default `key: value` listing on standard output.
    text: Option<Vec<String>>,
}

impl Out {
    fn result(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), v.into());
        self
    }

    fn cert(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.certificates.insert(key.into(), v.into());
        self
    }

    fn verdict(&mut self, key: &str, v: bool) -> &mut Self {
        self.verdicts.insert(key.into(), v);
        self
    }

    fn failed(&self) -> Vec<&str> {
        self.verdicts.iter().filter(|(_, &v)| !v).map(|(k, _)| k.as_str()).collect()
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn run(cli: Cli, argv: &[String]) -> u8 {
    let mut ctx = Ctx::default();
    if let Some(c) = cli.width_cap {
        ctx = ctx.with_width_cap(c);
    }
    if let Some(b) = cli.budget {
        ctx = ctx.with_budget(b);
    }
    let result = match &cli.session {
        Some(path) => Session::load(path),
        None => Ok(Session::default()),
    }
    .and_then(|s| dispatch(&cli.command, &s, &ctx, cli.session.is_some()));

    let (code, report) = match result {
        Ok(out) => {
            match &out.text {
                Some(lines) => lines.iter().for_each(|l| println!("{l}")),
                None => {
                    for (k, v) in &out.results {
                        println!("{k}: {}", show(v));
                    }
                    for (k, v) in &out.certificates {
                        println!("certificate {k}: {}", show(v));
                    }
                    for (k, v) in &out.verdicts {
                        println!("verdict {k}: {}", if *v { "PASS" } else { "FAIL" });
                    }
                }
            }
            let failed = out.failed();
            if !failed.is_empty() {
                eprintln!("failed: {}", failed.join(", "));
            }
            let code = if failed.is_empty() { 0 } else { 1 };
            let report = json!({
                "command": argv,
                "results": out.results,
                "certificates": out.certificates,
                "verdicts": out.verdicts,
                "exit_status": code,
            });
            (code, report)
        }
        Err(e) => {
            let code = e.exit_code();
            eprintln!("error: {}: {e}", e.kind());
            let report = json!({
                "command": argv,
                "results": {},
                "certificates": {},
                "verdicts": {},
                "error": {"kind": e.kind(), "message": e.to_string()},
                "exit_status": code,
            });
            (code, report)
        }
    };
    if let Some(path) = &cli.out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(e) = fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    code
}

fn group_opt(s: &Session, g: &Option<String>) -> Result<Option<Group>, CliError> {
    g.as_deref().map(|n| s.group(n)).transpose()
}

fn shift(s: &Session, a: &ShiftArgs) -> Result<GroupShiftSFT, CliError> {
    let g = group_opt(s, &a.group)?;
    s.sft(&a.sft, g.as_ref())
}

fn dispatch(cmd: &Command, s: &Session, ctx: &Ctx, have_session: bool) -> Result<Out, CliError> {
    let mut out = Out::default();
    match cmd {
        Command::Define => {
            if !have_session {
                return Err(CliError::Usage("define needs --session <file>".into()));
            }
            let mut lines = Vec::new();
            let mut bindings = Map::new();
            for (name, obj) in s.entries() {
                lines.push(format!("{name}: {} ({})", obj.kind(), obj.describe()));
                bindings.insert(name.clone(), json!({"kind": obj.kind(), "summary": obj.describe()}));
            }
            if lines.is_empty() {
                lines.push("no bindings".into());
            }
            lines.push(format!("builtins: {}", BUILTINS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")));
            out.result("bindings", Value::Object(bindings));
            out.text = Some(lines);
        }
        Command::Depth(a) => {
            let h = shift(s, a)?;
            let r = depth(&h)?;
            out.result("depth", r.depth).result("boundary", to_value(&r.boundary));
            out.cert(
                "depth",
                json!({"kind": "exact", "windows": [r.window, r.check_window]}),
            );
        }
        Command::Nub(a) => {
            let h = shift(s, a)?.trim();
            let n = nub(&h)?;
            out.result("index_in_host", n.index_in_host as u64)
                .result("nub_is_host", n.nub.same_points(&h)?)
                .result("nub_is_trivial", n.nub.is_trivial())
                .result("nub", sft_to_json(&n.nub));
            out.cert("index_in_host", json!({"kind": "exact", "window": h.window()}));
        }
        Command::Transitive(a) => {
            let h = shift(s, a)?;
            out.result("transitive", is_topologically_transitive(&h));
            out.cert("transitive", json!({"kind": "exact", "window": h.window()}));
        }
        Command::Homoclinic { shift: a, width } => {
            let h = shift(s, a)?.trim();
            let pts = homoclinic_points(&h, *width)?;
            let closure = homoclinic_closure(&h);
            let dense = closure.same_points(&h)?;
            out.result("points_in_window", pts.len() as u64)
                .result("closure_is_host", dense)
                .result("closure", sft_to_json(&closure));
            out.cert("points_in_window", json!({"kind": "exhaustive", "support": [0, width]}));
            if is_topologically_transitive(&h) {
                out.verdict("homoclinic_dense", dense);
            }
        }
        Command::ClassifyAbelian { shift: a, mode } => {
            let h = shift(s, a)?;
            let mode = match mode {
                ModeArg::Stable => Mode::Stable,
                ModeArg::Invariant => Mode::Invariant,
            };
            let (d, tag) = classify_shift(&h, mode)?;
            out.result("case", to_value(&tag)).result("descriptor", to_value(&d));
            out.cert("case", "exact: annihilator from the blocks");
        }
        Command::Series(a) => {
            let h = shift(s, a)?;
            let on = opennormal_series_with(&h, ctx)?;
            let factors: Vec<Value> = on.factors.iter().map(|f| to_value(&f.summary())).collect();
            let product: usize = on.factors.iter().map(|f| f.simple_alphabet.order()).product();
            out.result("complete", on.is_complete())
                .result("factors", factors)
                .result("series", to_value(&on.series.report()));
            if let Some(u) = &on.unsupported {
                out.result("unsupported", u.clone());
            }
            if on.is_complete() {
                let d = depth(&h)?.depth;
                out.result("depth", d).verdict("depth_equals_factor_product", d == product);
            }
            out.cert("series", json!({"kind": "image certificates", "stages": on.stages.len()}));
        }
        Command::JhCompare { host, group, series } => {
            if series.len() != 2 {
                return Err(CliError::Usage("jh-compare needs exactly two --series".into()));
            }
            let g = group_opt(s, group)?;
            let host = s.sft(host, g.as_ref())?;
            let triv = GroupShiftSFT::trivial(host.alphabet());
            let mut built = Vec::new();
            for spec in series {
                let mut chain = vec![triv.clone()];
                for r in spec.split(',').map(str::trim).filter(|r| !r.is_empty()) {
                    chain.push(s.sft(r, g.as_ref())?);
                }
                chain.push(host.clone());
                built.push(SubnormalSeries::new_with(&host, chain, ctx)?);
            }
            let eq = equivalent_series_with(&built[0], &built[1], ctx)?;
            out.result("equivalent", eq)
                .result("series", built.iter().map(|b| to_value(&b.report())).collect::<Vec<_>>());
            out.cert("equivalent", "exact: factor multisets up to isomorphism");
            out.verdict("equivalent", eq);
        }
        Command::Eta { group, word, k } => {
            let g = s.group(group)?;
            let f = parse_word(&g, word)?;
            let x = eta_solve(&f, *k)?;
            let back = eta(&x, *k)?;
            out.result("f", word_to_json(&f)).result("solution", word_to_json(&x));
            out.cert("solution", "exact");
            out.verdict("round_trip", back == f);
        }
        Command::Limits {
            command:
                LimitsCommand::RunExample {
                    example,
                    p,
                    levels,
                    depth: d,
                    width,
                    n,
                    period,
                    span,
                },
        } => match example {
            Example::SupportGrowth => {
                let g = support_growth_exhaustive(*p, *width)?;
                let sys = build_example_5_6_with(*p, *levels, ctx)?;
                let cert = homoclinic_trivial_certificate_with(&sys, *d, ctx)?;
                let depths = sys.level_depths()?;
                let erg = sys.ergquot_checks(ctx)?;
                out.result("support_growth", to_value(&g))
                    .result("level_depths", to_value(&depths))
                    .result("ergquot", to_value(&erg));
                out.cert("homoclinic_trivial", to_value(&cert));
                out.verdict("support_growth", g.holds)
                    .verdict("homoclinic_trivial", cert.issued)
                    .verdict("level_depths", depths.iter().all(|&x| x == *p as usize))
                    .verdict("ergquot", erg.iter().all(|&b| b));
            }
            Example::C4 => {
                let (_, lv) = build_example_c4(*n.max(&1))?;
                let c2 = nubshift_core::algebra::make_cyclic(2)?;
                let sum = SlidingBlockHom::linear(&c2, &[1, 1], 0)?;
                let search = right_inverse_search(&sum, *span, ctx)?;
                out.result("levels", to_value(&lv))
                    .result("right_inverse_found", search.found.is_some());
                out.cert(
                    "right_inverse_found",
                    json!({"kind": "exhaustive", "max_span": span, "candidates": search.candidates}),
                );
                out.verdict("does_not_split", lv.iter().all(|l| l.holds()))
                    .verdict("no_sliding_right_inverse", search.found.is_none());
            }
            Example::FiniteCentre => {
                let c = connector_check(*n, 4, ctx)?;
                let r = centre_on_periodic_points(*n, *period, ctx)?;
                let b = truncated_bcg(*n, 4, 3, ctx)?;
                out.result("connector", to_value(&c))
                    .result("centre", to_value(&r))
                    .result("bcg", to_value(&b));
                out.cert("centre", json!({"kind": "exhaustive", "max_period": period}));
                out.verdict("connector", c.holds())
                    .verdict("centre_matches_kernel", r.matches_kernel)
                    .verdict("centre_matches_periodic_claim", r.matches_periodic_claim)
                    .verdict("bcg_is_c3", b.closure_is_c3);
            }
        },
        Command::ScaleRestricted { group, direction } => {
            let g = s.group(group)?;
            let dir = match direction {
                DirectionArg::Fwd => Direction::Forward,
                DirectionArg::Rev => Direction::Backward,
            };
            let r = scale_report(&g, dir, -2..=2);
            let t = tidy_components(&g, LevelSubgroupSym::new(0), dir);
            let expected = match dir {
                Direction::Forward => 1,
                Direction::Backward => g.order(),
            };
            out.result("scale", r.scale)
                .result("indices", to_value(&r.indices))
                .result("tidy", to_value(&t));
            out.cert("scale", json!({"kind": "exact", "levels": [-2, 2]}));
            out.verdict("scale", r.scale == expected)
                .verdict("uniformly_minimizing", r.uniformly_minimizing)
                .verdict("tidy", t.tidy_above && t.tidy_below && t.minimizing);
        }
        Command::PaperSuite {
            filter,
            parallel,
            inject_fault,
        } => {
            let outcomes = suite::run(filter.as_deref(), *parallel, *inject_fault, ctx);
            if outcomes.is_empty() {
                return Err(CliError::Usage(format!(
                    "no criterion matches filter `{}`",
                    filter.as_deref().unwrap_or("")
                )));
            }
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for o in &outcomes {
                let mark = if o.pass { "PASS" } else { "FAIL" };
                let fault = if o.fault_injected { " (fault injected)" } else { "" };
                lines.push(format!("{:>2} {mark} {}: {} [{}]{fault}", o.id, o.name, o.detail, o.certificate));
                rows.push(json!({
                    "id": o.id,
                    "tag": o.tag,
                    "name": o.name,
                    "pass": o.pass,
                    "detail": o.detail,
                    "fault_injected": o.fault_injected,
                }));
                out.certificates.insert(o.id.to_string(), o.certificate.clone().into());
                out.verdicts.insert(format!("{:02} {}", o.id, o.name), o.pass);
            }
            let passed = outcomes.iter().filter(|o| o.pass).count();
            lines.push(format!("{passed}/{} criteria passed", outcomes.len()));
            out.result("criteria", rows);
            out.text = Some(lines);
        }
    }
    Ok(out)
}

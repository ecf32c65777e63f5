use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::{
    CbCmd, Command, DichotomyCmd, EmbedCmd, ExampleCmd, GameCmd, MachineSide, Report,
    SchreierCmd, SpreadmapCmd, Status, TargetArg,
};
use crate::cbindex::{self, RankOutcome, RankResult};
use crate::dichotomy::{
    self, check_example_noninclusions, diagonalize_first_lemma, example, Outcome, SearchParams,
};
use crate::embed::{self, EmbeddingCertificate};
use crate::error::{Error, Result};
use crate::family::{FamilyOracle, FinSet, SeqView};
use crate::games::{self, GameSpec, SolveOptions, Strategy};
use crate::io::{self, parse_family, parse_policy, Artifact, Cache};
use crate::ordinal::Ordinal;
use crate::schreier::{self, Target, TupleSpec};
use crate::spreadmap::{self, SpreadingMap};

const MATERIALIZE_CAP: usize = 1 << 20;

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn report<T: Serialize>(
    kind: &str,
    ins: BTreeMap<String, String>,
    seed: Option<u64>,
    result: T,
    text: String,
    status: Status,
) -> Result<Report> {
    Ok(Report {
        json: Artifact::new(kind, ins, seed, result).to_json()?,
        text,
        status,
    })
}

fn verified(ok: bool) -> Status {
    if ok {
        Status::Verified
    } else {
        Status::Failed
    }
}

fn target(t: &TargetArg) -> Result<(Target, String)> {
    match (&t.alpha, &t.tuple) {
        (Some(a), _) => Ok((Target::Schreier(a.parse()?), format!("s:{a}"))),
        (_, Some(tu)) => Ok((Target::from(tu.parse::<TupleSpec>()?), format!("tuple:{tu}"))),
        _ => Err(Error::Precondition("give --alpha or --tuple".into())),
    }
}

pub(super) fn dispatch<W: Write>(cmd: &Command, stdout: &mut W) -> Result<Report> {
    match cmd {
        Command::Schreier(c) => schreier_cmd(c),
        Command::Game(c) => game_cmd(c, stdout),
        Command::Spreadmap(c) => spreadmap_cmd(c),
        Command::Embed(c) => embed_cmd(c),
        Command::Dichotomy(c) => dichotomy_cmd(c),
        Command::Example(c) => example_cmd(c),
        Command::Cb(c) => cb_cmd(c),
    }
}

fn schreier_cmd(c: &SchreierCmd) -> Result<Report> {
    match c {
        SchreierCmd::Member { target: t, set } => {
            let (target, name) = target(t)?;
            let e: FinSet = set.parse()?;
            let member = target.contains(&e);
            let body = json!({
                "member": member,
                "family": name,
                "set": e.to_string(),
                "version": crate::VERSION,
            });
            Ok(Report {
                json: serde_json::to_string_pretty(&body)? + "\n",
                text: format!("{e} {} {name}", if member { "is in" } else { "is not in" }),
                status: Status::Verified,
            })
        }
        SchreierCmd::Enum { target: t, bound, cap } | SchreierCmd::Count { target: t, bound, cap } => {
            let (target, name) = target(t)?;
            let fam = schreier::enumerate(&target, *bound, *cap)?;
            let ins = inputs(&[("family", name.clone()), ("bound", bound.to_string()), ("cap", cap.to_string())]);
            let text = format!("{} members of {name} within [1, {bound}]", fam.len());
            if matches!(c, SchreierCmd::Count { .. }) {
                return report("schreier-count", ins, None, json!({ "count": fam.len() }), text, Status::Verified);
            }
            let members: Vec<FinSet> = fam.iter().collect();
            report("schreier-enum", ins, None, members, text, Status::Verified)
        }
    }
}

fn solve_cached(
    tuple: &TupleSpec,
    fam: &FamilyOracle,
    universe: u64,
    opts: SolveOptions,
) -> Result<Option<Strategy>> {
    let cache = Cache::from_env();
    let key = format!("{tuple}|{fam}|{universe}|{opts:?}");
    if let Some(hit) = cache.get::<Option<Strategy>>("solve", &key) {
        return Ok(hit);
    }
    let s = games::solve_n(tuple, fam, universe, opts)?;
    cache.put("solve", &key, &s)?;
    Ok(s)
}

fn game_cmd<W: Write>(c: &GameCmd, stdout: &mut W) -> Result<Report> {
    let g = match c {
        GameCmd::Play { game, .. } | GameCmd::Solve { game, .. } | GameCmd::Verify { game, .. } => game,
    };
    let tuple: TupleSpec = g.tuple.parse()?;
    let fam = parse_family(&g.family, Some(g.universe))?;
    let mut ins = inputs(&[
        ("tuple", tuple.to_string()),
        ("family", g.family.clone()),
        ("universe", g.universe.to_string()),
    ]);
    match c {
        GameCmd::Play { machine, .. } => {
            let side = match machine {
                MachineSide::N => games::Side::N,
                MachineSide::S => games::Side::S,
            };
            ins.insert("machine".into(), format!("{side:?}"));
            let stdin = std::io::stdin();
            let t = games::interactive_play(&tuple, &fam, side, g.universe, stdin.lock(), &mut *stdout)?;
            let text = format!("{} moves, {:?}", t.moves.len(), t.status);
            report("game-play", ins, None, t, text, Status::Verified)
        }
        GameCmd::Solve { n_budget, allow_truncation, cap, .. } => {
            let opts = SolveOptions {
                n_budget: n_budget.unwrap_or(g.universe),
                allow_truncation: *allow_truncation,
                cap: *cap,
            };
            ins.insert("n_budget".into(), opts.n_budget.to_string());
            ins.insert("allow_truncation".into(), opts.allow_truncation.to_string());
            ins.insert("cap".into(), opts.cap.to_string());
            let s = solve_cached(&tuple, &fam, g.universe, opts)?;
            let (text, status) = match &s {
                Some(s) => (
                    format!("N wins with {} decisions (truncation win: {})", s.decisions.len(), s.truncation_win),
                    Status::Verified,
                ),
                None => ("no winning strategy for N within the budgets".to_string(), Status::Undecided),
            };
            report("game-solve", ins, None, s, text, status)
        }
        GameCmd::Verify { strategy, .. } => {
            let policy = parse_policy(strategy)?;
            ins.insert("strategy".into(), policy.fingerprint());
            let v = games::verify_strategy(&tuple, &policy, &fam, g.universe)?;
            let status = verified(v.wins && !v.truncation_win);
            let text = format!(
                "wins: {}, truncation win: {}, plays checked: {}",
                v.wins, v.truncation_win, v.plays_checked
            );
            report("game-verify", ins, None, v, text, status)
        }
    }
}

fn build_map_cached(spec: &GameSpec, budget: u64) -> Result<SpreadingMap> {
    let cache = Cache::from_env();
    let key = format!("{}|{}|{budget}", spec.tuple, spec.policy()?.fingerprint());
    if let Some(hit) = cache.get::<SpreadingMap>("spreadmap", &key) {
        return Ok(hit);
    }
    let map = spreadmap::build(spec, budget)?;
    cache.put("spreadmap", &key, &map)?;
    Ok(map)
}

fn spreadmap_cmd(c: &SpreadmapCmd) -> Result<Report> {
    let g = match c {
        SpreadmapCmd::Build { game } | SpreadmapCmd::Verify { game, .. } => game,
    };
    let policy = parse_policy(&g.policy)?;
    let spec = GameSpec::bound(g.tuple.parse()?, policy.clone());
    let ins = inputs(&[
        ("tuple", spec.tuple.to_string()),
        ("policy", policy.fingerprint()),
        ("budget", g.budget.to_string()),
    ]);
    match c {
        SpreadmapCmd::Build { .. } => {
            let map = build_map_cached(&spec, g.budget)?;
            let text = format!("f on [1, {}] = {:?}", g.budget, map.table);
            report("spreadmap", ins, None, map, text, Status::Verified)
        }
        SpreadmapCmd::Verify { map, .. } => {
            let map = match map {
                Some(p) => io::read_artifact::<SpreadingMap>(p)
                    .map(|a| a.result)
                    .or_else(|_| Ok::<_, Error>(serde_json::from_str(&std::fs::read_to_string(p)?)?))?,
                None => build_map_cached(&spec, g.budget)?,
            };
            let v = spreadmap::verify(&map, &spec, g.budget)?;
            let text = format!("ok: {}, plays checked: {}", v.ok, v.plays_checked);
            report("spreadmap-verify", ins, None, v.clone(), text, verified(v.ok))
        }
    }
}

fn embed_cmd(c: &EmbedCmd) -> Result<Report> {
    match c {
        EmbedCmd::Build { family, tuple, policy, universe } => {
            let oracle = parse_family(family, Some(*universe))?;
            let fam = io::materialize(&oracle, *universe, MATERIALIZE_CAP)?;
            let spec: TupleSpec = tuple.parse()?;
            let policy = parse_policy(policy)?;
            let cert = embed::build_embedding(&fam, &spec, &policy, *universe)?;
            let ins = inputs(&[
                ("family", family.clone()),
                ("tuple", spec.to_string()),
                ("policy", policy.fingerprint()),
                ("universe", universe.to_string()),
            ]);
            let text = format!(
                "{} members embedded, {} failures",
                cert.verified_members,
                cert.failures.len()
            );
            let ok = cert.accepted();
            report("embedding", ins, None, cert, text, verified(ok))
        }
        EmbedCmd::Verify { cert } => {
            let text = std::fs::read_to_string(cert)?;
            let c: EmbeddingCertificate = serde_json::from_str::<Artifact<EmbeddingCertificate>>(&text)
                .map(|a| a.result)
                .or_else(|_| serde_json::from_str(&text))?;
            let check = embed::verify_certificate(&c);
            let ins = inputs(&[("cert", cert.display().to_string())]);
            let summary = format!("ok: {}, checked: {}", check.ok, check.checked);
            let ok = check.ok;
            report("embedding-verify", ins, None, check, summary, verified(ok))
        }
    }
}

fn dichotomy_cmd(c: &DichotomyCmd) -> Result<Report> {
    let DichotomyCmd::Run {
        family,
        spec,
        universe,
        depth,
        inclusion_len,
        n_budget,
        max_candidates,
        seed,
    } = c;
    let oracle = parse_family(family, Some(*universe))?;
    let fam = io::materialize(&oracle, *universe, MATERIALIZE_CAP)?;
    let tuple: TupleSpec = spec.parse()?;
    let params = SearchParams {
        inclusion_len: *inclusion_len,
        n_budget: n_budget.unwrap_or(0),
        max_candidates: *max_candidates,
        seed: *seed,
        ..SearchParams::default()
    };
    let cert = dichotomy::dichotomy_search(&fam, &tuple, *universe, None, params)?;
    let check = dichotomy::verify_dichotomy(&cert, &fam)?;
    let lemma = match depth {
        Some(d) => {
            let ords = tuple.ordinals();
            if ords.len() < 2 || !ords[0].is_zero() {
                return Err(Error::Precondition(
                    "--depth needs a spec of the form 0,α₁,…,αᵣ".into(),
                ));
            }
            let inner = TupleSpec::new(ords[1..].to_vec())?;
            Some(diagonalize_first_lemma(&fam, &inner, *universe, *d, params)?)
        }
        None => None,
    };
    let status = match cert.outcome {
        _ if !check.ok => Status::Failed,
        Outcome::UndecidedAtTruncation => Status::Undecided,
        _ => Status::Verified,
    };
    let text = format!(
        "{:?}; re-verified: {}{}",
        cert.outcome,
        check.ok,
        lemma
            .as_ref()
            .map(|l| format!("; L = {} ({:?})", l.l, l.side))
            .unwrap_or_default()
    );
    let ins = inputs(&[
        ("family", family.clone()),
        ("spec", tuple.to_string()),
        ("universe", universe.to_string()),
        ("depth", depth.map_or("none".into(), |d| d.to_string())),
        ("params", format!("{params:?}")),
    ]);
    let body = json!({ "certificate": cert, "reverification": check, "lemma": lemma });
    report("dichotomy", ins, Some(*seed), body, text, status)
}

fn example_cmd(c: &ExampleCmd) -> Result<Report> {
    let ExampleCmd::Amt { kmax, m, check } = c;
    let fam = example::example_family(*kmax)?;
    let universe = example::universe_for(*kmax);
    let prefix: Vec<u64> = match m {
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| Error::Parse {
                    what: "sequence",
                    input: s.clone(),
                    reason: format!("`{t}` is not an integer"),
                })
            })
            .collect::<Result<_>>()?,
        None => (1..=universe).collect(),
    };
    let bound = prefix.iter().copied().max().unwrap_or(1).max(universe);
    let seq = SeqView::new(prefix, bound)?;
    let ins = inputs(&[("kmax", kmax.to_string()), ("m", seq.to_string())]);
    if !check {
        let members: Vec<FinSet> = fam.iter().collect();
        let text = format!("{} members within [1, {universe}]", members.len());
        return report("example-family", ins, None, members, text, Status::Verified);
    }
    let w = check_example_noninclusions(*kmax, &seq)?;
    let ok = !example::contains(&w.s1_not_in_f)
        && schreier::member(&Ordinal::one(), &w.s1_preimage)
        && !schreier::member(&Ordinal::one(), &w.f_not_in_s1);
    let text = format!(
        "S_1 witness {} (from {}), F witness {} with l = {}",
        w.s1_not_in_f, w.s1_preimage, w.f_not_in_s1, w.l
    );
    report("example-witnesses", ins, None, w, text, verified(ok))
}

fn rank_text(r: &RankResult) -> String {
    match &r.outcome {
        RankOutcome::Rank { rank } => rank.to_string(),
        RankOutcome::NotInFamily => "not in the family".into(),
        RankOutcome::PatternUndetected { .. } => "pattern undetected".into(),
    }
}

fn rank_status(r: &RankResult) -> Status {
    match r.outcome {
        RankOutcome::Rank { .. } => Status::Verified,
        RankOutcome::NotInFamily => Status::Failed,
        RankOutcome::PatternUndetected { .. } => Status::Undecided,
    }
}

fn cb_cmd(c: &CbCmd) -> Result<Report> {
    match c {
        CbCmd::Rank { family, set, window } => {
            let fam = parse_family(family, None)?;
            let a: FinSet = set.parse()?;
            let r = cbindex::rank(&fam, &a, *window)?;
            let ins = inputs(&[("family", family.clone()), ("set", a.to_string()), ("window", window.to_string())]);
            let text = format!("rank of {a}: {}", rank_text(&r));
            let status = rank_status(&r);
            report("cb-rank", ins, None, r, text, status)
        }
        CbCmd::Index { family, window } => {
            let fam = parse_family(family, None)?;
            let r = cbindex::index(&fam, *window)?;
            let ins = inputs(&[("family", family.clone()), ("window", window.to_string())]);
            let text = format!("index: {}", rank_text(&r));
            let status = rank_status(&r);
            report("cb-index", ins, None, r, text, status)
        }
        CbCmd::Bar { family, bound } => {
            let fam = cbindex::bar(&parse_family(family, Some(*bound))?);
            let members = fam.members_within(*bound, MATERIALIZE_CAP)?;
            let ins = inputs(&[("family", family.clone()), ("bound", bound.to_string())]);
            let text = format!("{} members of {fam} within [1, {bound}]", members.len());
            report("cb-bar", ins, None, members, text, Status::Verified)
        }
    }
}

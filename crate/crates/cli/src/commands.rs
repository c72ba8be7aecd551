use std::fmt::Write as _;
use std::io::{BufWriter, Read, Write};

use constellation_core::bidding::{self, Bidding};
use constellation_core::enumerate::{self, CycleTypeTable, DEFAULT_CAP};
use constellation_core::maps::dot::{constellation_to_dot, half_edge_map_to_dot};
use constellation_core::maps::Constellation;
use constellation_core::nebula::{self, Nebula};
use constellation_core::puzzle;
use constellation_core::registry::Registry;
use constellation_core::report::{IdentityReport, SCHEMA};
use constellation_core::symmetry;
use constellation_core::{catalog, Composition, Error, Permutation};
use serde_json::{json, Value};

use crate::{Cli, CliError, Command, Direction, Family, Format, Size};

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced: a verdict, a human summary and a JSON payload.
pub struct Outcome {
    pub ok: bool,
    pub text: String,
    pub result: Value,
}

impl Outcome {
    pub fn render(&self, cli: &Cli, name: &str) -> String {
        match cli.format {
            Format::Json => format!("{}\n", envelope(cli, name, self.ok, ("result", self.result.clone()))),
            Format::Text | Format::Dot => self.text.clone(),
        }
    }
}

fn envelope(cli: &Cli, name: &str, ok: bool, body: (&str, Value)) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "command": name,
        "threads": rayon::current_num_threads(),
        "cap": cap(cli).to_string(),
        "params": params(&cli.command),
        "ok": ok,
    });
    v[body.0] = body.1;
    v
}

fn params(c: &Command) -> Value {
    let size = |s: &Size| json!({ "k": s.k, "n": s.n });
    let mut v = match c {
        Command::Count(a) => json!({ "size": size(&a.size), "p": a.p, "m": a.m, "kappa": a.kappa, "gamma": a.gamma }),
        Command::JacksonCheck(a) | Command::PointingCheck(a) => json!({ "size": size(&a.size), "p": a.p, "all_p": a.all_p }),
        Command::GfCheck(a) => json!({ "size": size(&a.size), "x": a.x, "all_x": a.all_x }),
        Command::MvCheck(a) => json!({ "size": size(&a.size), "gamma": a.gamma, "all": a.all }),
        Command::SymmetryCheck(s) => json!({ "size": size(s) }),
        Command::Roundtrip(a) => json!({ "size": size(&a.size), "bijection": a.bijection }),
        Command::Puzzle(a) => json!({ "size": size(&a.size), "p": a.p, "sample": a.sample, "seed": a.seed }),
        Command::Render(a) => json!({ "input": a.input, "perms": a.perms }),
        Command::Enumerate(a) => json!({ "size": size(&a.size), "family": format!("{:?}", a.family), "p": a.p }),
        Command::Psi(a) => json!({ "direction": format!("{:?}", a.direction), "input": a.input }),
    };
    if let Some(size) = v.as_object_mut().and_then(|o| o.remove("size")) {
        v["k"] = size["k"].clone();
        v["n"] = size["n"].clone();
    }
    v
}

pub fn error_report(cli: &Cli, name: &str, e: &CliError) -> Value {
    envelope(cli, name, false, ("error", json!(e.to_string())))
}

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Count(_) => "count",
        Command::JacksonCheck(_) => "jackson-check",
        Command::GfCheck(_) => "gf-check",
        Command::MvCheck(_) => "mv-check",
        Command::SymmetryCheck(_) => "symmetry-check",
        Command::Roundtrip(_) => "roundtrip",
        Command::PointingCheck(_) => "pointing-check",
        Command::Puzzle(_) => "puzzle",
        Command::Render(_) => "render",
        Command::Enumerate(_) => "enumerate",
        Command::Psi(_) => "psi",
    }
}

fn cap(cli: &Cli) -> u128 {
    cli.cap.unwrap_or(DEFAULT_CAP)
}

fn tuple<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn check_size(size: Size) -> Result<()> {
    if size.k < 2 {
        return Err(CliError::Usage("--k must be at least 2".into()));
    }
    Ok(())
}

fn check_positive(size: Size) -> Result<()> {
    check_size(size)?;
    if size.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(())
}

fn check_p(size: Size, p: &[usize]) -> Result<()> {
    if p.len() != size.k {
        return Err(CliError::Usage(format!("--p has {} entries but --k is {}", p.len(), size.k)));
    }
    Ok(())
}

fn type_list(size: Size, p: &Option<Vec<usize>>, lo: usize) -> Result<Vec<Vec<usize>>> {
    match p {
        Some(p) => {
            check_p(size, p)?;
            Ok(vec![p.clone()])
        }
        None => Ok(enumerate::grid(size.k, lo, size.n)),
    }
}

/// "1,2;3" → one composition per factor.
fn parse_compositions(s: &str, size: Size) -> Result<Vec<Composition>> {
    let comps = s
        .split(';')
        .map(|part| {
            let parts = part
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("bad part {x:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            Composition::new(parts).map_err(CliError::from)
        })
        .collect::<Result<Vec<_>>>()?;
    if comps.len() != size.k {
        return Err(CliError::Usage(format!("{} compositions given but --k is {}", comps.len(), size.k)));
    }
    if let Some(c) = comps.iter().find(|c| c.size() != size.n) {
        return Err(CliError::Usage(format!("{c} is not a composition of {}", size.n)));
    }
    Ok(comps)
}

fn identity_json(p: &[usize], r: &IdentityReport) -> Value {
    json!({ "p": p, "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "equal": r.equal })
}

fn read_input(path: &std::path::Path) -> Result<Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| CliError::Usage(format!("not a valid {what}: {e}")))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Render(_)) {
        return Err(CliError::Usage("--format dot applies to render only".into()));
    }
    let cap = cap(cli);
    match &cli.command {
        Command::Count(a) => count(a, cap),
        Command::JacksonCheck(a) => jackson(a, cap),
        Command::GfCheck(a) => gf(a, cap),
        Command::MvCheck(a) => mv(a, cap),
        Command::SymmetryCheck(size) => symmetry_check(*size, cap),
        Command::Roundtrip(a) => roundtrip(a, cap),
        Command::PointingCheck(a) => pointing(a, cap),
        Command::Puzzle(a) => puzzle_cmd(a),
        Command::Render(a) => render(a),
        Command::Enumerate(a) => enumerate_cmd(a, cap),
        Command::Psi(a) => psi(a),
    }
}

fn count(a: &crate::CountArgs, cap: u128) -> Result<Outcome> {
    check_size(a.size)?;
    let Size { n, .. } = a.size;
    let (quantity, label, value) = if let Some(kappa) = &a.kappa {
        let parts = parse_compositions(kappa, a.size)?;
        let label = format!("κ{}", tuple(&parts));
        ("kappa", label, enumerate::count_kappa(&parts, cap)?)
    } else if let Some(gamma) = &a.gamma {
        let comps = parse_compositions(gamma, a.size)?;
        let label = format!("c{}", tuple(&comps));
        ("color_compositions", label, enumerate::count_by_color_compositions(&comps, cap)?)
    } else if let Some(p) = &a.p {
        check_p(a.size, p)?;
        if a.m {
            let q: Vec<i64> = p.iter().map(|&x| x as i64).collect();
            ("m", format!("M^{n}_{}", tuple(p)), enumerate::m_coefficient(n, &q)?)
        } else {
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            ("colored", format!("C^{n}_{}", tuple(p)), enumerate::count_colored(n, p, cap)?)
        }
    } else {
        return Err(CliError::Usage("give --p, --p with --m, --kappa or --gamma".into()));
    };
    Ok(Outcome {
        ok: true,
        text: format!("{label} = {value}\n"),
        result: json!({ "quantity": quantity, "k": a.size.k, "n": n, "label": label, "value": value.to_string() }),
    })
}

fn jackson(a: &crate::TypeArgs, cap: u128) -> Result<Outcome> {
    check_positive(a.size)?;
    let table = CycleTypeTable::new(a.size.n, a.size.k, cap)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for p in type_list(a.size, &a.p, 1)? {
        let r = enumerate::verify_jackson_with(&table, &p)?;
        ok &= r.equal;
        writeln!(text, "p={}: C = {}, n!^(k-1)·M = {}  {}", tuple(&p), r.lhs, r.rhs, verdict(r.equal)).unwrap();
        rows.push(identity_json(&p, &r));
    }
    writeln!(text, "{} type vectors, {}", rows.len(), if ok { "all equal" } else { "some differ" }).unwrap();
    Ok(Outcome { ok, text, result: json!({ "k": a.size.k, "n": a.size.n, "checks": rows }) })
}

fn gf(a: &crate::GfArgs, cap: u128) -> Result<Outcome> {
    check_positive(a.size)?;
    let points: Vec<Vec<i64>> = match &a.x {
        Some(x) => {
            if x.len() != a.size.k {
                return Err(CliError::Usage(format!("--x has {} entries but --k is {}", x.len(), a.size.k)));
            }
            vec![x.clone()]
        }
        None => enumerate::grid(a.size.k, 1, 3).into_iter().map(|p| p.into_iter().map(|v| v as i64).collect()).collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for x in points {
        let r = enumerate::verify_gf_identity(a.size.n, &x, cap)?;
        ok &= r.equal;
        writeln!(text, "x={}: Σ x^cycles = {}, Σ binomials·M = {}  {}", tuple(&x), r.lhs, r.rhs, verdict(r.equal)).unwrap();
        rows.push(json!({ "x": x, "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "equal": r.equal }));
    }
    Ok(Outcome { ok, text, result: json!({ "k": a.size.k, "n": a.size.n, "checks": rows }) })
}

fn mv(a: &crate::MvArgs, cap: u128) -> Result<Outcome> {
    check_positive(a.size)?;
    let Size { n, k } = a.size;
    let tuples: Vec<Vec<Composition>> = match &a.gamma {
        Some(g) => vec![parse_compositions(g, a.size)?],
        None => {
            let all = Composition::all(n);
            let needed = (all.len() as u128).saturating_pow(k as u32);
            if needed > cap {
                return Err(Error::CapExceeded { needed, cap }.into());
            }
            let mut out: Vec<Vec<Composition>> = vec![Vec::new()];
            for _ in 0..k {
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        all.iter().map(move |c| {
                            let mut next = prefix.clone();
                            next.push(c.clone());
                            next
                        })
                    })
                    .collect();
            }
            out
        }
    };
    let table = CycleTypeTable::new(n, k, cap)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for gammas in &tuples {
        let r = enumerate::verify_mv_formula_with(&table, gammas)?;
        ok &= r.equal;
        writeln!(text, "γ={}: c = {}, closed form = {}  {}", tuple(gammas), r.lhs, r.rhs, verdict(r.equal)).unwrap();
        rows.push(json!({ "gamma": gammas, "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "equal": r.equal }));
    }
    Ok(Outcome { ok, text, result: json!({ "k": k, "n": n, "checks": rows }) })
}

fn symmetry_check(size: Size, cap: u128) -> Result<Outcome> {
    check_positive(size)?;
    let checks = symmetry::verify_symmetry(size.n, size.k, cap)?;
    let ok = checks.iter().all(|c| c.equal);
    let mut text = String::new();
    for c in &checks {
        writeln!(
            text,
            "lengths={}: {} tuples, c ranges over [{}, {}], closed form {}  {}",
            tuple(&c.lengths),
            c.tuples,
            c.min,
            c.max,
            c.closed_form,
            verdict(c.equal)
        )
        .unwrap();
    }
    Ok(Outcome { ok, text, result: json!({ "k": size.k, "n": size.n, "profiles": checks }) })
}

fn roundtrip(a: &crate::RoundtripArgs, cap: u128) -> Result<Outcome> {
    check_positive(a.size)?;
    let registry = Registry::standard();
    let report = registry.run(&a.bijection, a.size.n, a.size.k, cap)?;
    let mut text = format!("{} at n={} k={}\n", a.bijection, a.size.n, a.size.k);
    for c in &report.checks {
        writeln!(text, "  {}: {} passed, {} failed", c.name, c.passed, c.failed).unwrap();
        for e in &c.examples {
            writeln!(text, "    e.g. {e}").unwrap();
        }
    }
    writeln!(text, "{} checks, {} failures", report.checked(), report.failures()).unwrap();
    Ok(Outcome { ok: report.ok(), text, result: serde_json::to_value(&report).expect("serializable") })
}

fn pointing(a: &crate::TypeArgs, cap: u128) -> Result<Outcome> {
    check_positive(a.size)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for p in type_list(a.size, &a.p, 0)? {
        let pointed = nebula::verify_pointing(a.size.n, &p, cap)?;
        let nebulas = nebula::verify_nebula_count(a.size.n, &p, cap)?;
        ok &= pointed.equal && nebulas.equal;
        writeln!(
            text,
            "p={}: tree-pointed·∏p! = {}, Σ tree-rooted = {}  {}; nebulas·∏p! = {}, Σ colored = {}  {}",
            tuple(&p),
            pointed.lhs,
            pointed.rhs,
            verdict(pointed.equal),
            nebulas.lhs,
            nebulas.rhs,
            verdict(nebulas.equal)
        )
        .unwrap();
        rows.push(json!({ "p": p, "pointing": pointed, "nebulas": nebulas }));
    }
    Ok(Outcome { ok, text, result: json!({ "k": a.size.k, "n": a.size.n, "checks": rows }) })
}

fn puzzle_cmd(a: &crate::PuzzleArgs) -> Result<Outcome> {
    check_positive(a.size)?;
    check_p(a.size, &a.p)?;
    let (n, k) = (a.size.n, a.size.k);
    if let Some(trials) = a.sample {
        let threads = rayon::current_num_threads();
        let est = puzzle::sample_puzzle(n, &a.p, trials, a.seed, threads)?;
        let se = est.standard_error();
        let ok = (est.tree - est.r1).abs() <= 3.0 * se;
        let text = format!(
            "P(tree) ≈ {} ({} of {})\nP(|R_1| = {}) ≈ {} ({} of {})\nstandard error {:.6}, {} attempts, seed {}, {} threads  {}\n",
            est.tree,
            est.tree_hits,
            est.trials,
            k - 1,
            est.r1,
            est.r1_hits,
            est.trials,
            se,
            est.attempts,
            est.seed,
            est.threads,
            if ok { "within 3 standard errors" } else { "MORE THAN 3 STANDARD ERRORS APART" }
        );
        let result = json!({ "k": k, "n": n, "p": a.p, "sample": est, "standard_error": se, "within_three_se": ok });
        return Ok(Outcome { ok, text, result });
    }
    let r = puzzle::verify_puzzle(n, &a.p)?;
    let mut ok = r.equal;
    let mut text = format!(
        "P(tree) = {}\nP(|R_1| = {}) = {}\n{} = {}  {}\n",
        r.tree,
        k - 1,
        r.r1,
        r.tree,
        r.r1,
        verdict(r.equal)
    );
    let mut result = json!({ "k": k, "n": n, "p": a.p, "tree": r.tree, "r1": r.r1, "equal": r.equal });
    if k == 3 {
        let ie = puzzle::verify_k3_inclusion_exclusion(n, &a.p)?;
        ok &= ie.ok();
        writeln!(text, "nine-term inclusion–exclusion = {}  {}", ie.nine_terms.rhs, verdict(ie.nine_terms.equal)).unwrap();
        writeln!(text, "pair events = {}  {}", ie.pairs.rhs, verdict(ie.pairs.equal)).unwrap();
        let mut exchanges = Vec::new();
        for abc in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let e = puzzle::verify_exchange_lemma(n, &a.p, abc)?;
            ok &= e.ok();
            writeln!(
                text,
                "exchange (a,b,c)={}: {} = {}, events {} and {}  {}",
                tuple(&e.abc),
                e.identity.lhs,
                e.identity.rhs,
                e.first_event,
                e.second_event,
                verdict(e.ok())
            )
            .unwrap();
            exchanges.push(e);
        }
        result["inclusion_exclusion"] = serde_json::to_value(&ie).expect("serializable");
        result["exchange"] = serde_json::to_value(&exchanges).expect("serializable");
    }
    Ok(Outcome { ok, text, result })
}

fn render(a: &crate::RenderArgs) -> Result<Outcome> {
    let (dot, kind) = if let Some(perms) = &a.perms {
        let factors = perms
            .split(';')
            .map(|f| {
                let line = f
                    .split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("bad entry {x:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Permutation::from_one_line(&line).map_err(CliError::from)
            })
            .collect::<Result<Vec<_>>>()?;
        (constellation_to_dot(&Constellation::from_permutations(&factors)?, None), "constellation")
    } else {
        let v = read_input(a.input.as_deref().expect("group requires one source"))?;
        if v.get("omegas").is_some() {
            let b: Bidding = from_value(v, "bidding")?;
            let nb = bidding::psi_inverse(&b)?;
            (half_edge_map_to_dot(&nb.half_edge_map(), Some(nb.root())), "nebula")
        } else if v.get("white_next").is_some() {
            let nb: Nebula = from_value(v, "nebula")?;
            (half_edge_map_to_dot(&nb.half_edge_map(), Some(nb.root())), "nebula")
        } else {
            let inner = v.get("constellation").cloned().unwrap_or(v);
            let c: Constellation = from_value(inner, "constellation")?;
            (constellation_to_dot(&c, None), "constellation")
        }
    };
    Ok(Outcome { ok: true, result: json!({ "kind": kind, "dot": dot }), text: dot })
}

fn emit_lines<T: serde::Serialize>(items: impl IntoIterator<Item = T>) -> Result<usize> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut count = 0;
    for item in items {
        serde_json::to_writer(&mut out, &item).map_err(|e| CliError::Io(e.into()))?;
        out.write_all(b"\n")?;
        count += 1;
    }
    out.flush()?;
    Ok(count)
}

fn enumerate_cmd(a: &crate::EnumerateArgs, cap: u128) -> Result<Outcome> {
    check_positive(a.size)?;
    let Size { n, k } = a.size;
    if let Some(p) = &a.p {
        check_p(a.size, p)?;
    }
    let count = match a.family {
        Family::Cacti => emit_lines(enumerate::enumerate_factorizations(n, k, cap)?)?,
        Family::Colored => {
            let p = a.p.as_ref().ok_or_else(|| CliError::Usage("--family colored needs --p".into()))?;
            emit_lines(enumerate::colored_factorizations(n, p, cap)?)?
        }
        Family::TreeRooted => match &a.p {
            Some(p) => emit_lines(catalog::tree_rooted(n, p, cap)?)?,
            None => emit_lines(catalog::all_tree_rooted(n, k, cap)?)?,
        },
        Family::TreePointed => emit_lines(catalog::tree_pointed(n, k, a.p.as_deref(), cap)?)?,
        Family::Nebulas => {
            let mut all = Vec::new();
            for p in type_list(a.size, &a.p, 0)? {
                all.extend(nebula::rooted_nebulas(n, &p, cap)?);
            }
            emit_lines(all)?
        }
        Family::Prebiddings | Family::Biddings => {
            let mut pre = Vec::new();
            for p in type_list(a.size, &a.p, 0)? {
                pre.extend(bidding::valid_prebiddings(n, &p));
            }
            if matches!(a.family, Family::Prebiddings) {
                emit_lines(pre)?
            } else {
                let mut all = pre.iter().map(bidding::sigma).collect::<std::result::Result<Vec<_>, _>>()?;
                all.sort();
                emit_lines(all)?
            }
        }
    };
    Ok(Outcome { ok: true, text: String::new(), result: json!({ "emitted": count }) })
}

fn psi(a: &crate::PsiArgs) -> Result<Outcome> {
    let v = read_input(&a.input)?;
    let (output, text, ok) = match a.direction {
        Direction::Fwd => {
            let nb: Nebula = from_value(v, "nebula")?;
            let b = bidding::psi(&nb)?;
            let ok = b.is_valid();
            (serde_json::to_value(&b).expect("serializable"), serde_json::to_string(&b).expect("serializable"), ok)
        }
        Direction::Inv => {
            let b: Bidding = from_value(v, "bidding")?;
            let nb = bidding::psi_inverse(&b)?;
            (serde_json::to_value(&nb).expect("serializable"), serde_json::to_string(&nb).expect("serializable"), true)
        }
    };
    Ok(Outcome { ok, text: format!("{text}\n"), result: output })
}

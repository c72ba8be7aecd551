//! One verdict line per acceptance criterion. All tolerances are exact
//! integer or rational equality; a single mismatch fails the criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use constellation_core::bidding::{self, Bidding};
use constellation_core::catalog;
use constellation_core::enumerate::{self, CycleTypeTable};
use constellation_core::maps::Constellation;
use constellation_core::nebula::{self, ClosureStrategy};
use constellation_core::puzzle;
use constellation_core::registry::Registry;
use constellation_core::symmetry;
use constellation_core::Permutation;

const CAP: u128 = 100_000_000;
const TOLERANCE: &str = "exact";

type Verdict = Result<String, String>;

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn cycles(a: &[usize]) -> usize {
    let mut seen = vec![false; a.len()];
    let mut c = 0;
    for s in 0..a.len() {
        if !seen[s] {
            c += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = a[x];
            }
        }
    }
    c
}

/// Cycle counts of every k-tuple whose product is x ↦ x+1.
fn long_cycle_factorizations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let perms = all_perms(n);
    let long: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k - 1];
    loop {
        let mut prod: Vec<usize> = (0..n).collect();
        let mut counts = Vec::with_capacity(k);
        for &i in &idx {
            prod = compose(&prod, &perms[i]);
            counts.push(cycles(&perms[i]));
        }
        counts.push(cycles(&compose(&invert(&prod), &long)));
        out.push(counts);
        let mut d = 0;
        while d < k - 1 {
            idx[d] += 1;
            if idx[d] < perms.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == k - 1 {
            return out;
        }
    }
}

fn binom(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn surjections(m: usize, p: usize) -> i128 {
    (0..=p)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binom(p as u128, j as u128) as i128 * ((p - j) as i128).pow(m as u32)
        })
        .sum()
}

fn fact(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Tuples of n subsets of [k], none full, with type t in exactly p_t of them.
fn m_oracle(n: usize, p: &[i64]) -> u128 {
    if p.iter().any(|&x| x < 0) {
        return 0;
    }
    let k = p.len();
    let full = (1u32 << k) - 1;
    let mut count = 0;
    let mut idx = vec![0u32; n];
    loop {
        let hit = (0..k).all(|t| idx.iter().filter(|&&r| r >> t & 1 == 1).count() as i64 == p[t]);
        if hit {
            count += 1;
        }
        let mut d = 0;
        while d < n {
            idx[d] += 1;
            if idx[d] < full {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == n {
            return count;
        }
    }
}

fn jackson() -> Verdict {
    let mut checked = 0;
    for (k, max_n) in [(2, 5), (3, 4), (4, 3)] {
        for n in 1..=max_n {
            let table = CycleTypeTable::new(n, k, CAP).map_err(|e| e.to_string())?;
            let facts = long_cycle_factorizations(n, k);
            for p in enumerate::grid(k, 1, n) {
                let brute: i128 = facts
                    .iter()
                    .map(|cs| cs.iter().zip(&p).map(|(&c, &q)| surjections(c, q)).product::<i128>())
                    .sum();
                let shifted: Vec<i64> = p.iter().map(|&x| x as i64 - 1).collect();
                let formula = fact(n).pow(k as u32 - 1) * m_oracle(n - 1, &shifted);
                let r = enumerate::verify_jackson_with(&table, &p).map_err(|e| e.to_string())?;
                if !r.equal || r.lhs.to_string() != brute.to_string() || brute as u128 != formula {
                    return Err(format!("k={k} n={n} p={p:?}: library {} vs {}, brute {brute}, formula {formula}", r.lhs, r.rhs));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} type vectors, library and brute force agree"))
}

fn gf_identity() -> Verdict {
    let mut checked = 0;
    for k in 2..=3 {
        for n in 1..=4 {
            let facts = long_cycle_factorizations(n, k);
            for x in enumerate::grid(k, 1, 3) {
                let x: Vec<i64> = x.into_iter().map(|v| v as i64).collect();
                let brute: i128 =
                    facts.iter().map(|cs| cs.iter().zip(&x).map(|(&c, &v)| (v as i128).pow(c as u32)).product::<i128>()).sum();
                let r = enumerate::verify_gf_identity(n, &x, CAP).map_err(|e| e.to_string())?;
                if !r.equal || r.lhs.to_string() != brute.to_string() {
                    return Err(format!("k={k} n={n} x={x:?}: {} vs {}, brute {brute}", r.lhs, r.rhs));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} points"))
}

fn symmetry_check() -> Verdict {
    let mut profiles = 0;
    let mut tuples = 0;
    for (k, max_n) in [(2, 4), (3, 3)] {
        for n in 1..=max_n {
            for c in symmetry::verify_symmetry(n, k, CAP).map_err(|e| e.to_string())? {
                if !c.equal || c.min != c.max || c.closed_form.to_string() != c.min.to_string() {
                    return Err(format!("k={k} n={n} lengths={:?}: [{}, {}] vs {}", c.lengths, c.min, c.max, c.closed_form));
                }
                profiles += 1;
                tuples += c.tuples;
            }
        }
    }
    Ok(format!("{profiles} length profiles, {tuples} composition tuples"))
}

fn roundtrips() -> Verdict {
    let registry = Registry::standard();
    let small = vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)];
    let wide: Vec<(usize, usize)> = (2..=3).flat_map(|k| (1..=3).map(move |n| (k, n))).collect();
    let plan = [
        ("phi", &small),
        ("swap", &wide),
        ("lambda", &wide),
        ("theta", &small),
        ("sigma", &small),
        ("psi", &small),
    ];
    let mut parts = Vec::new();
    for (name, sizes) in plan {
        let mut checks = 0;
        for &(k, n) in sizes.iter() {
            let r = registry.run(name, n, k, CAP).map_err(|e| e.to_string())?;
            if !r.ok() {
                return Err(format!("{name} at k={k} n={n}: {} failures", r.failures()));
            }
            checks += r.checked();
        }
        parts.push(format!("{name} {checks}"));
    }
    Ok(format!("checks: {}", parts.join(", ")))
}

fn cardinality_chains() -> Verdict {
    let mut checked = 0;
    for n in 1..=3 {
        for p in enumerate::grid(2, 0, n) {
            let nb = nebula::verify_nebula_count(n, &p, CAP).map_err(|e| e.to_string())?;
            let b = bidding::verify_bidding_counts(n, &p, CAP).map_err(|e| e.to_string())?;
            if !nb.equal || !b.ok() {
                return Err(format!("n={n} p={p:?}: nebulas {} vs {}, biddings {b:?}", nb.lhs, nb.rhs));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} type vectors"))
}

fn pointing() -> Verdict {
    let mut checked = 0;
    for n in 1..=3 {
        for p in enumerate::grid(2, 0, n) {
            let r = nebula::verify_pointing(n, &p, CAP).map_err(|e| e.to_string())?;
            if !r.equal {
                return Err(format!("n={n} p={p:?}: {} vs {}", r.lhs, r.rhs));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} type vectors"))
}

fn tree_puzzle() -> Verdict {
    let mut checked = 0;
    for (k, max_n) in [(2, 6), (3, 4), (4, 3)] {
        for n in 1..=max_n {
            for p in puzzle::feasible_types(n, k) {
                let r = puzzle::verify_puzzle(n, &p).map_err(|e| e.to_string())?;
                if !r.equal {
                    return Err(format!("k={k} n={n} p={p:?}: {} vs {}", r.tree, r.r1));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} feasible (k, n, p)"))
}

fn k3_internals() -> Verdict {
    let mut checked = 0;
    let labellings = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for n in 1..=4 {
        for p in puzzle::feasible_types(n, 3) {
            let ie = puzzle::verify_k3_inclusion_exclusion(n, &p).map_err(|e| e.to_string())?;
            if !ie.ok() {
                return Err(format!("n={n} p={p:?}: inclusion–exclusion {ie:?}"));
            }
            for abc in labellings {
                let e = puzzle::verify_exchange_lemma(n, &p, abc).map_err(|e| e.to_string())?;
                if !e.ok() {
                    return Err(format!("n={n} p={p:?} abc={abc:?}: {e:?}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} type vectors, 6 labellings each"))
}

fn figures() -> Verdict {
    let cyc = |cs: &[&[usize]]| Permutation::from_cycles(5, cs).unwrap();
    let left = [cyc(&[&[1, 2, 5], &[3, 4]]), cyc(&[&[1, 3]]), cyc(&[&[1, 4]])];
    let right = [cyc(&[&[1, 3, 5], &[2, 4]]), cyc(&[&[1, 4], &[2, 3]]), cyc(&[&[2, 4]])];
    let cl = Constellation::from_permutations(&left).map_err(|e| e.to_string())?;
    let cr = Constellation::from_permutations(&right).map_err(|e| e.to_string())?;
    let got = (
        cl.product() == cyc(&[&[1, 3, 2, 5]]),
        cr.product() == cyc(&[&[1, 2, 3, 4, 5]]),
        cl.white_face_count(),
        cr.white_face_count(),
        cl.genus().map_err(|e| e.to_string())?,
        cr.genus().map_err(|e| e.to_string())?,
        cr.to_permutations() == right,
    );
    if got != (true, true, 2, 1, 0, 1, true) {
        return Err(format!("two-triple figure: {got:?}"));
    }
    let caption = r#"{"omegas":[[1,4,3,2],[3,2,1,4],[4,1,3,2]],"subsets":[[2],[2,3],[1,2],[2,3]]}"#;
    let b: Bidding = serde_json::from_str(caption).map_err(|e| e.to_string())?;
    let nb = bidding::psi_inverse(&b).map_err(|e| e.to_string())?;
    let stored: constellation_core::nebula::Nebula =
        serde_json::from_str(&serde_json::to_string(&nb).unwrap()).map_err(|e| e.to_string())?;
    let again = serde_json::to_string(&bidding::psi(&stored).map_err(|e| e.to_string())?).unwrap();
    if again != caption || nb.type_vector() != [1, 4, 2] {
        return Err(format!("bidding figure: type {:?}, Ψ gives {again}", nb.type_vector()));
    }
    Ok("products, 2 and 1 white faces, genera 0 and 1, bidding byte-equal".into())
}

fn union_find_transitive(n: usize, perms: &[&Vec<usize>]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for perm in perms {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, perm[x]));
            parent[a] = b;
        }
    }
    let r = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == r)
}

fn properties() -> Verdict {
    let mut rho = 0;
    for k in 2..=3 {
        for n in 1..=4 {
            let perms = all_perms(n);
            let mut idx = vec![0usize; k];
            'tuples: loop {
                let raw: Vec<&Vec<usize>> = idx.iter().map(|&i| &perms[i]).collect();
                let tuple: Vec<Permutation> = raw.iter().map(|p| Permutation::from_images((*p).clone()).unwrap()).collect();
                match (union_find_transitive(n, &raw), Constellation::from_permutations(&tuple)) {
                    (true, Ok(c)) if c.validate().is_ok() && c.to_permutations() == tuple => rho += 1,
                    (false, Err(_)) => rho += 1,
                    _ => return Err(format!("ϱ at k={k} n={n}: {tuple:?}")),
                }
                for d in 0..k {
                    idx[d] += 1;
                    if idx[d] < perms.len() {
                        continue 'tuples;
                    }
                    idx[d] = 0;
                }
                break;
            }
        }
    }
    let mut closures = 0;
    for k in 2..=3 {
        for n in 1..=3 {
            for tp in catalog::tree_pointed(n, k, None, CAP).map_err(|e| e.to_string())? {
                let nb = nebula::dual_opening(&tp);
                let s = nebula::closure(&nb, ClosureStrategy::Stack).map_err(|e| e.to_string())?;
                let f = nebula::closure(&nb, ClosureStrategy::Fixpoint).map_err(|e| e.to_string())?;
                let typed = s.pairs.iter().chain(&f.pairs).all(|&(w, b)| w % k == b % k);
                if !typed || s.white_next != f.white_next || s.bud_edges != f.bud_edges || s.pairs.len() != s.bud_edges.len() {
                    return Err(format!("closure at k={k} n={n}: {nb:?}"));
                }
                closures += 1;
            }
        }
    }
    let mut tally = BTreeMap::new();
    for n in 1..=3 {
        for tp in catalog::tree_pointed(n, 2, None, CAP).map_err(|e| e.to_string())? {
            let nb = nebula::dual_opening(&tp);
            let paren = nebula::is_parenthesis_nebula(&nb);
            let rooted = nebula::dual_closure(&nb).map_err(|e| e.to_string())?.is_tree_rooted();
            if paren != tp.is_tree_rooted() || paren != rooted {
                return Err(format!("parenthesis at n={n}: {nb:?}"));
            }
            *tally.entry(paren).or_insert(0) += 1;
        }
    }
    Ok(format!(
        "ϱ {rho} tuples, closure {closures} nebulas, parenthesis {} rooted / {} not",
        tally.get(&true).unwrap_or(&0),
        tally.get(&false).unwrap_or(&0)
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("colored counts against n!^(k-1)·M", jackson),
        ("generating function at integer points", gf_identity),
        ("symmetry of color-composition counts", symmetry_check),
        ("bijection round trips over full domains", roundtrips),
        ("nebula and bidding cardinality chains", cardinality_chains),
        ("pointing correspondence", pointing),
        ("tree puzzle probabilities", tree_puzzle),
        ("k=3 inclusion–exclusion and exchange", k3_internals),
        ("figure-level checks", figures),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS [{TOLERANCE}] {title}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{TOLERANCE}] {title}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

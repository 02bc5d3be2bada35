//! The experiment commands. Each takes a validated scenario and returns a
//! report; components fan out over rayon and results are reassembled in
//! degree order, so reports do not depend on scheduling.

use std::sync::Arc;
use std::time::Instant;

use lclab_core::cech::{coset_profile, CosetProfile, Outcome};
use lclab_core::group::InvariantSlices;
use lclab_core::invariants::{quotient_profile, verify_regular_sequence, window_radius};
use lclab_core::{
    fundamental_invariants, hsop_limit_component, monomial_component, noether_generators,
    CechEngine, ComponentDim, Error as CoreError, FieldElement, Finiteness, MultiPoly, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{Check, Report, Table};
use crate::scenario::{Functor, Ideal, Scenario};
use crate::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Invariants,
    VanishWindow,
    CosetReport,
    Periodicity,
    InjectionCheck,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::VanishWindow => "vanish-window",
            Command::CosetReport => "coset-report",
            Command::Periodicity => "periodicity",
            Command::InjectionCheck => "injection-check",
            Command::OracleCompare => "oracle-compare",
        }
    }
}

pub fn run(command: Command, scenario: &Scenario) -> Result<Report, LabError> {
    let start = Instant::now();
    let mut report = Report::new(command.name(), scenario.echo(), scenario.seed);
    match command {
        Command::Invariants => invariants(scenario, &mut report),
        Command::VanishWindow => vanish_window(scenario, &mut report)?,
        Command::CosetReport => coset_report(scenario, &mut report)?,
        Command::Periodicity => periodicity(scenario, &mut report)?,
        Command::InjectionCheck => injection_check(scenario, &mut report)?,
        Command::OracleCompare => oracle_compare(scenario, &mut report)?,
    }
    report.finish();
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn functor(s: &Scenario) -> Result<&Functor, LabError> {
    s.functor.as_ref().ok_or_else(|| {
        LabError::Invalid(format!(
            "{}: this command needs a [functor] table",
            s.origin
        ))
    })
}

fn order_factorial(s: &Scenario) -> Result<u64, LabError> {
    s.group
        .factorial_order()
        .ok_or_else(|| LabError::Core(CoreError::ResourceLimit("|G|! overflows".into())))
}

/// Generators of the ideal, all invariant and homogeneous.
pub fn ideal_generators(s: &Scenario, ideal: &Ideal) -> Result<Vec<MultiPoly>, LabError> {
    Ok(match ideal {
        Ideal::Augmentation => noether_generators(s.group.clone())?.generators,
        Ideal::Unit => vec![MultiPoly::one(s.vars)],
        Ideal::Zero => Vec::new(),
        Ideal::Generators(g) => g.clone(),
    })
}

pub fn engine(s: &Scenario) -> Result<(usize, CechEngine), LabError> {
    let f = functor(s)?;
    let gens = ideal_generators(s, &f.ideal)?;
    let slices = Arc::new(InvariantSlices::new(s.group.clone()));
    Ok((f.i, CechEngine::new(slices, &gens, s.policy)?))
}

fn outcome_cells(r: &Result<ComponentDim, CoreError>) -> [String; 3] {
    let o = Outcome::from_result(r);
    let kind = match &o {
        Outcome::Finite { .. } => "finite",
        Outcome::Divergent => "divergent",
        Outcome::Undetermined { .. } => "undetermined",
    };
    let dim = o.dim().map_or_else(String::new, |d| d.to_string());
    let at = match r {
        Ok(c) => c.confirmed_at().to_string(),
        Err(e) => e.to_string(),
    };
    [kind.to_string(), dim, at]
}

fn components(engine: &CechEngine, i: usize, ns: &[i64]) -> Vec<Result<ComponentDim, CoreError>> {
    ns.par_iter().map(|&n| engine.component(i, n)).collect()
}

fn component_table(ns: &[i64], results: &[Result<ComponentDim, CoreError>]) -> Table {
    let mut t = Table::new(&["n", "kind", "dim", "confirmed_at"]);
    for (n, r) in ns.iter().zip(results) {
        let [k, d, a] = outcome_cells(r);
        t.push(vec![n.to_string(), k, d, a]);
    }
    t
}

fn polys_table(name: &str, polys: &[MultiPoly]) -> Table {
    let mut t = Table::new(&["set", "index", "degree", "polynomial"]);
    for (k, p) in polys.iter().enumerate() {
        let d = p
            .homogeneous_degree()
            .map_or_else(String::new, |d| d.to_string());
        t.push(vec![
            name.to_string(),
            (k + 1).to_string(),
            d,
            p.to_string(),
        ]);
    }
    t
}

fn invariants(s: &Scenario, r: &mut Report) {
    let m = s.vars;
    let algebra = match noether_generators(s.group.clone()) {
        Ok(a) => a,
        Err(e) => {
            r.checks
                .push(Check::undetermined("noether-generators", e.to_string()));
            return;
        }
    };
    r.tables.insert(
        "generators".into(),
        polys_table("noether", &algebra.generators),
    );
    let mut cert = Table::new(&["degree", "subalgebra_dim", "invariant_dim"]);
    for (d, a, b) in &algebra.certificate {
        cert.push(vec![d.to_string(), a.to_string(), b.to_string()]);
    }
    r.tables.insert("certificate".into(), cert);
    r.checks.push(if algebra.is_certified() {
        Check::pass(
            "noether-certificate",
            format!(
                "generators in degrees {:?} span R^G through degree 2|G|",
                algebra.degrees()
            ),
        )
    } else {
        Check::fail(
            "noether-certificate",
            "generated subalgebra misses invariants",
        )
    });

    let fi = match fundamental_invariants(s.group.clone(), s.seed, &s.hsop) {
        Ok(fi) => fi,
        Err(e) => {
            if let (Some(c), CoreError::ResourceLimit(_)) = (s.group.factorial_order(), &e) {
                r.flags.push(format!(
                    "a degree-{c} h.s.o.p. search is beyond the desk budget (max degree {})",
                    s.hsop.max_degree
                ));
            }
            r.checks
                .push(Check::undetermined("fundamental-invariants", e.to_string()));
            return;
        }
    };
    let c = fi.c;
    r.checks.push(Check::pass(
        "fundamental-invariants",
        format!(
            "c = {c}; f after {} attempt(s), g after {} (seed {})",
            fi.f.attempts, fi.g.attempts, fi.seed
        ),
    ));
    let mut tuples = polys_table("f", fi.f());
    tuples.rows.extend(polys_table("g", fi.g()).rows);
    r.tables.insert("fundamental".into(), tuples);

    let dual = fi.dual_algebra.group.clone();
    let degree_ok = |t: &[MultiPoly]| t.iter().all(|p| p.homogeneous_degree() == Some(c as u32));
    let inv = |g: &lclab_core::MatrixGroup, t: &[MultiPoly]| -> Result<bool, CoreError> {
        t.iter()
            .try_fold(true, |ok, p| Ok(ok && g.is_invariant(p)?))
    };
    for (name, tuple, group) in [
        ("f-invariant", fi.f(), &s.group),
        ("g-dual-invariant", fi.g(), &dual),
    ] {
        r.checks.push(match inv(group, tuple) {
            Ok(true) if degree_ok(tuple) => {
                Check::pass(name, format!("{m} invariant forms of degree {c}"))
            }
            Ok(_) => Check::fail(name, "a form is not invariant of degree c"),
            Err(e) => Check::undetermined(name, e.to_string()),
        });
    }
    for (name, tuple) in [("f-regular", fi.f()), ("g-regular", fi.g())] {
        r.checks.push(
            match verify_regular_sequence(
                tuple,
                (m as u64 * c) as i64,
                s.hsop.order,
                &s.hsop.groebner,
            ) {
                Ok(true) => Check::pass(name, "Koszul H_1 vanishes and the quotient is finite"),
                Ok(false) => Check::fail(name, "not a regular sequence"),
                Err(e) => Check::undetermined(name, e.to_string()),
            },
        );
    }

    let profile = match quotient_profile(fi.f(), c, s.hsop.order, &s.hsop.groebner) {
        Ok(p) => p,
        Err(e) => {
            r.checks
                .push(Check::undetermined("quotient-profile", e.to_string()));
            return;
        }
    };
    let expected = lclab_core::invariants::complete_intersection_series(c, m);
    let mut t = Table::new(&["degree", "dim", "expected"]);
    for j in 0..profile.dims.len().max(expected.len()) {
        let cell = |v: Option<&u128>| v.map_or_else(|| "0".to_string(), |d| d.to_string());
        t.push(vec![
            j.to_string(),
            cell(profile.dims.get(j)),
            cell(expected.get(j)),
        ]);
    }
    r.tables.insert("profile".into(), t);
    let total_ok = Some(profile.total) == (c as u128).checked_pow(m as u32);
    r.checks
        .push(if profile.matches_complete_intersection && total_ok {
            Check::pass(
                "quotient-profile",
                format!("dims {:?}, total {} = c^m", profile.dims, profile.total),
            )
        } else {
            Check::fail(
                "quotient-profile",
                format!("dims {:?}, expected {:?}", profile.dims, expected),
            )
        });

    let mut b = Table::new(&["quantity", "value"]);
    b.push(vec!["top_degree".into(), profile.top_degree.to_string()]);
    b.push(vec!["m(c-1)".into(), profile.hilbert_bound.to_string()]);
    b.push(vec!["(c-1)^m".into(), profile.power_bound.to_string()]);
    b.push(vec![
        "bounds_differ".into(),
        profile.bounds_differ.to_string(),
    ]);
    b.push(vec![
        "top_exceeds_(c-1)^m".into(),
        profile.exceeds_power_bound.to_string(),
    ]);
    r.tables.insert("bounds".into(), b);
    let top_ok = profile.top_degree == profile.hilbert_bound;
    r.checks.push(if top_ok {
        Check::pass(
            "top-degree",
            format!("top degree {} = m(c-1)", profile.top_degree),
        )
    } else {
        Check::fail(
            "top-degree",
            format!(
                "top degree {} != m(c-1) = {}",
                profile.top_degree, profile.hilbert_bound
            ),
        )
    });
    if profile.bounds_differ {
        r.flags.push(format!(
            "bound discrepancy: top degree m(c-1) = {} while (c-1)^m = {}{}",
            profile.hilbert_bound,
            profile.power_bound,
            if profile.exceeds_power_bound {
                "; the top degree exceeds (c-1)^m"
            } else {
                ""
            }
        ));
    }
}

fn vanish_window(s: &Scenario, r: &mut Report) -> Result<(), LabError> {
    let (i, engine) = engine(s)?;
    let m = s.vars as i64;
    let c = order_factorial(s)?;
    let w = window_radius(c, s.vars)?;
    let (lo, hi) = (-m - w, w);
    let mut wt = Table::new(&["quantity", "value"]);
    wt.push(vec!["c".into(), c.to_string()]);
    wt.push(vec!["W".into(), w.to_string()]);
    wt.push(vec!["window".into(), format!("[{lo}, {hi}]")]);
    wt.push(vec!["extension".into(), s.extension.to_string()]);
    r.tables.insert("parameters".into(), wt);

    let ns: Vec<i64> = (lo..=hi).collect();
    let results = components(&engine, i, &ns);
    r.tables
        .insert("window".into(), component_table(&ns, &results));
    let outcomes: Vec<Outcome> = results.iter().map(Outcome::from_result).collect();
    let witnesses: Vec<i64> = ns
        .iter()
        .zip(&outcomes)
        .filter(|(_, o)| o.is_nonzero() == Some(true))
        .map(|(n, _)| *n)
        .collect();
    if let Some(n) = witnesses.first() {
        r.checks.push(Check::pass(
            "vanish-window",
            format!(
                "nonvanishing witnessed at n = {n} ({} nonzero components in the window)",
                witnesses.len()
            ),
        ));
        return Ok(());
    }
    if outcomes.iter().any(Outcome::is_undetermined) {
        r.checks.push(Check::undetermined(
            "vanish-window",
            "some window components are undetermined",
        ));
        return Ok(());
    }
    r.checks.push(Check::pass(
        "vanish-window",
        format!("all components in [{lo}, {hi}] vanish"),
    ));

    let e = s.extension;
    let ext: Vec<i64> = (lo - e..lo).chain(hi + 1..=hi + e).collect();
    let ext_results = components(&engine, i, &ext);
    r.tables
        .insert("extended".into(), component_table(&ext, &ext_results));
    let ext_outcomes: Vec<Outcome> = ext_results.iter().map(Outcome::from_result).collect();
    let alarms: Vec<i64> = ext
        .iter()
        .zip(&ext_outcomes)
        .filter(|(_, o)| o.is_nonzero() == Some(true))
        .map(|(n, _)| *n)
        .collect();
    r.checks.push(if !alarms.is_empty() {
        Check::fail(
            "extended-scan",
            format!("theorem-violation alarm: nonzero components at n = {alarms:?}"),
        )
    } else if ext_outcomes.iter().any(Outcome::is_undetermined) {
        Check::undetermined("extended-scan", "some extended components are undetermined")
    } else {
        Check::pass(
            "extended-scan",
            format!("consistent: {} further degrees vanish", ext.len()),
        )
    });
    Ok(())
}

fn profiles(s: &Scenario) -> Result<(usize, Vec<CosetProfile>), LabError> {
    let (i, engine) = engine(s)?;
    let c = order_factorial(s)? as i64;
    let (t_lo, t_hi) = s.t_range;
    let profiles = (0..c)
        .into_par_iter()
        .map(|l| coset_profile(&engine, i, l, c, t_lo, t_hi))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((i, profiles))
}

fn coset_table(profiles: &[CosetProfile]) -> Table {
    let mut t = Table::new(&["l", "t", "n", "kind", "dim"]);
    for p in profiles {
        for e in &p.entries {
            let kind = match &e.outcome {
                Outcome::Finite { .. } => "finite",
                Outcome::Divergent => "divergent",
                Outcome::Undetermined { .. } => "undetermined",
            };
            let dim = e.outcome.dim().map_or_else(String::new, |d| d.to_string());
            t.push(vec![
                p.l.to_string(),
                e.t.to_string(),
                e.n.to_string(),
                kind.into(),
                dim,
            ]);
        }
    }
    t
}

fn coset_report(s: &Scenario, r: &mut Report) -> Result<(), LabError> {
    let (_, profiles) = profiles(s)?;
    r.tables.insert("cosets".into(), coset_table(&profiles));
    let mut fits = Table::new(&[
        "l",
        "tail",
        "formula",
        "degree",
        "t_from",
        "t_to",
        "coefficients",
    ]);
    for p in &profiles {
        for (tail, fit) in [("alpha", &p.alpha), ("beta", &p.beta)] {
            if let Some(f) = fit {
                fits.push(vec![
                    p.l.to_string(),
                    tail.into(),
                    f.formula.clone(),
                    f.degree.map_or_else(|| "zero".into(), |d| d.to_string()),
                    f.t_from.to_string(),
                    f.t_to.to_string(),
                    f.coefficients.join(" "),
                ]);
            }
        }
        let kind = match p
            .entries
            .iter()
            .find(|e| !e.outcome.is_undetermined())
            .map(|e| &e.outcome)
        {
            Some(Outcome::Divergent) => "divergent",
            Some(_) => "finite",
            None => "undetermined",
        };
        r.checks.push(Check::new(
            format!("dichotomy[l={}]", p.l),
            p.dichotomy,
            format!("coset {} is uniformly {kind}", p.l),
        ));
        let window = match p.vanishing_window {
            Some((a, b)) => format!("Δ^m = 0 on t ∈ [{a}, {b}]"),
            None if kind == "divergent" => "divergent coset, no growth fit".into(),
            None => "no Δ^m window".into(),
        };
        r.checks
            .push(Check::new(format!("growth[l={}]", p.l), p.growth, window));
    }
    r.tables.insert("fits".into(), fits);
    Ok(())
}

/// Length of the constant run at the start of `flags`.
fn run_length(flags: &[bool]) -> usize {
    flags.iter().take_while(|&&f| f == flags[0]).count()
}

fn periodicity(s: &Scenario, r: &mut Report) -> Result<(), LabError> {
    let (_, profiles) = profiles(s)?;
    let mut pattern = Table::new(&["l", "t", "n", "nonzero"]);
    let mut thresholds = Table::new(&["l", "left_value", "n0", "right_value", "n0_prime"]);
    for p in &profiles {
        let name = format!("pattern[l={}]", p.l);
        let flags: Option<Vec<bool>> = p.entries.iter().map(|e| e.outcome.is_nonzero()).collect();
        for e in &p.entries {
            let v = e
                .outcome
                .is_nonzero()
                .map_or_else(|| "undetermined".into(), |b| b.to_string());
            pattern.push(vec![p.l.to_string(), e.t.to_string(), e.n.to_string(), v]);
        }
        let Some(flags) = flags.filter(|f| !f.is_empty()) else {
            r.checks.push(Check::undetermined(
                name,
                "pattern has undetermined components",
            ));
            continue;
        };
        let left = run_length(&flags);
        let rev: Vec<bool> = flags.iter().rev().copied().collect();
        let right = run_length(&rev);
        let n0 = p.entries[left - 1].n;
        let n0_prime = p.entries[flags.len() - right].n;
        thresholds.push(vec![
            p.l.to_string(),
            flags[0].to_string(),
            n0.to_string(),
            rev[0].to_string(),
            n0_prime.to_string(),
        ]);
        let word = |b: bool| if b { "nonzero" } else { "zero" };
        let detail = if left == flags.len() {
            format!("{} on the whole computed range", word(flags[0]))
        } else {
            format!(
                "{} for n <= {n0}, {} for n >= {n0_prime}",
                word(flags[0]),
                word(rev[0])
            )
        };
        r.checks.push(if left >= s.min_tail && right >= s.min_tail {
            Check::pass(name, detail)
        } else {
            Check::fail(
                name,
                format!("{detail}; a tail has fewer than {} points", s.min_tail),
            )
        });
    }
    r.tables.insert("pattern".into(), pattern);
    r.tables.insert("thresholds".into(), thresholds);
    Ok(())
}

/// Seeded candidates: scenario forms, then ρ(ξ^d) and the norm ∏σ(ξ) for
/// random linear forms ξ, deduplicated and ordered by degree.
fn candidates(s: &Scenario) -> Result<Vec<(String, MultiPoly)>, CoreError> {
    let m = s.vars;
    let g = &s.group;
    let mut out: Vec<(String, MultiPoly)> = s
        .injection
        .candidates
        .iter()
        .map(|p| ("scenario".into(), p.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut generated = Vec::new();
    for _ in 0..s.injection.random_candidates {
        let xi = (0..m).fold(MultiPoly::zero(m), |acc, j| {
            let a: i64 = loop {
                let a = rng.gen_range(-9..=9);
                if a != 0 {
                    break a;
                }
            };
            &acc + &MultiPoly::var(m, j).scale(&FieldElement::from_int(a))
        });
        for d in 1..=s.injection.max_degree {
            generated.push((format!("rho(({xi})^{d})"), g.reynolds(&xi.pow(d))?));
        }
        let norm =
            (0..g.order()).try_fold(MultiPoly::one(m), |acc, k| acc.try_mul(&g.act(k, &xi)?))?;
        generated.push((format!("norm({xi})"), norm));
    }
    generated.sort_by_key(|(_, p)| p.homogeneous_degree());
    for (label, p) in generated {
        if !p.is_zero() && p.homogeneous_degree() != Some(0) && !out.iter().any(|(_, q)| q == &p) {
            out.push((label, p));
        }
    }
    Ok(out)
}

enum Verdict {
    Injective,
    Fails(i64),
    Unknown(String),
}

fn injective_at(engine: &CechEngine, i: usize, theta: &MultiPoly, n: i64) -> Verdict {
    match engine.multiplication_action(theta, i, n) {
        Ok(a) if a.is_injective() => Verdict::Injective,
        Ok(_) => Verdict::Fails(n),
        Err(CoreError::Divergent { .. }) => {
            // Stage-level check on the images H_t → H_s over a few stages.
            let t0 = engine
                .first_stage(n)
                .max(engine.first_stage(n + theta.homogeneous_degree().unwrap_or(0) as i64));
            for t in t0..t0 + engine.policy().confirmation_window {
                match engine.stage_multiplication_ranks(theta, i, n, t) {
                    Ok((a, b)) if a == b => {}
                    Ok(_) => return Verdict::Fails(n),
                    Err(e) => return Verdict::Unknown(e.to_string()),
                }
            }
            Verdict::Injective
        }
        Err(e) => Verdict::Unknown(e.to_string()),
    }
}

fn injection_check(s: &Scenario, r: &mut Report) -> Result<(), LabError> {
    let (i, engine) = engine(s)?;
    let (lo, hi) = (s.n_range.0.max(0), s.n_range.1);
    let ns: Vec<i64> = (lo..=hi).collect();
    let results = components(&engine, i, &ns);
    r.tables
        .insert("components".into(), component_table(&ns, &results));
    if results.iter().any(|c| c.is_err()) {
        r.checks.push(Check::undetermined(
            "injection",
            "some nonnegative components are undetermined",
        ));
        return Ok(());
    }
    let support: Vec<i64> = ns
        .iter()
        .zip(&results)
        .filter(|(_, c)| c.as_ref().is_ok_and(|c| c.value.is_nonzero()))
        .map(|(n, _)| *n)
        .collect();
    if support.is_empty() {
        r.checks.push(Check::pass(
            "injection",
            format!("vacuous: every component in [{lo}, {hi}] vanishes"),
        ));
        return Ok(());
    }
    let mut table = Table::new(&["source", "theta", "degree", "result"]);
    let mut found = None;
    let mut unknown = false;
    for (label, theta) in candidates(s)? {
        let verdicts: Vec<Verdict> = support
            .par_iter()
            .map(|&n| injective_at(&engine, i, &theta, n))
            .collect();
        let result = if let Some(Verdict::Fails(n)) =
            verdicts.iter().find(|v| matches!(v, Verdict::Fails(_)))
        {
            format!("fails at n = {n}")
        } else if let Some(Verdict::Unknown(why)) =
            verdicts.iter().find(|v| matches!(v, Verdict::Unknown(_)))
        {
            unknown = true;
            format!("undetermined: {why}")
        } else {
            "injective".to_string()
        };
        let degree = theta.homogeneous_degree().unwrap_or(0);
        table.push(vec![
            label,
            theta.to_string(),
            degree.to_string(),
            result.clone(),
        ]);
        if result == "injective" && found.is_none() {
            found = Some((theta, degree));
        }
    }
    r.tables.insert("candidates".into(), table);
    r.checks.push(match found {
        Some((theta, d)) => Check::pass(
            "injection",
            format!("theta = {theta} of degree {d} is injective on every nonzero component in [{lo}, {hi}]"),
        ),
        None if unknown => Check::undetermined("injection", "no candidate verified; some checks undetermined"),
        None => Check::undetermined("injection", "no injective candidate within budget"),
    });
    Ok(())
}

fn finiteness_cells(v: &Result<Finiteness, String>) -> String {
    match v {
        Ok(Finiteness::Finite { dim }) => format!("finite({dim})"),
        Ok(Finiteness::Divergent) => "divergent".into(),
        Err(e) => format!("undetermined: {e}"),
    }
}

fn trail(c: &Result<ComponentDim, CoreError>) -> String {
    match c {
        Ok(c) => c
            .observations
            .iter()
            .map(|o| format!("{}:{}/{}", o.t, o.stage_dim, o.transition_rank))
            .collect::<Vec<_>>()
            .join(" "),
        Err(CoreError::Undetermined { trail, .. }) => trail
            .iter()
            .map(|(t, d, k)| format!("{t}:{d}/{k}"))
            .collect::<Vec<_>>()
            .join(" "),
        Err(_) => String::new(),
    }
}

fn oracle_compare(s: &Scenario, r: &mut Report) -> Result<(), LabError> {
    let f = functor(s)?;
    let gens = ideal_generators(s, &f.ideal)?;
    let squarefree = gens.iter().all(|p| {
        p.len() == 1
            && p.terms()
                .all(|(mono, c)| c.is_one() && mono.0.iter().all(|&e| e <= 1))
    });
    let (i, engine) = engine(s)?;
    let (lo, hi) = s.n_range;
    let ns: Vec<i64> = (lo..=hi).collect();
    let mut table = Table::new(&["n", "engine", "oracle", "engine_trail", "oracle_trail"]);
    let rows: Vec<(String, String, String, String, Status)> = if s.group.is_trivial() && squarefree
    {
        let oracle_gens = if gens.is_empty() {
            vec![MultiPoly::zero(s.vars)]
        } else {
            gens.clone()
        };
        r.flags
            .push("oracle: Hochster-type formula for squarefree monomial ideals".into());
        ns.par_iter()
            .map(|&n| {
                let e = engine.component(i, n);
                let o = monomial_component(&oracle_gens, i, n).map_err(|e| e.to_string());
                row(&e, &o, String::new())
            })
            .collect()
    } else if f.ideal == Ideal::Augmentation && i == s.vars {
        let fi = fundamental_invariants(s.group.clone(), s.seed, &s.hsop)?;
        r.flags.push(format!(
            "oracle: limit over powers of the fundamental invariants (c = {})",
            fi.c
        ));
        ns.par_iter()
            .map(|&n| {
                let e = engine.component(i, n);
                let oc = hsop_limit_component(&s.group, fi.f(), fi.c, n, s.policy);
                let ot = trail(&oc);
                row(&e, &oc.map(|c| c.value).map_err(|e| e.to_string()), ot)
            })
            .collect()
    } else {
        return Err(LabError::Invalid(format!(
            "{}: no oracle applies (need squarefree monomial generators with the trivial group, or S+ at i = m)",
            s.origin
        )));
    };
    let mut statuses = Vec::new();
    let mut disagreements = Vec::new();
    for (n, (ev, ov, et, ot, st)) in ns.iter().zip(rows) {
        if st == Status::Fail {
            disagreements.push(*n);
        }
        statuses.push(st);
        table.push(vec![n.to_string(), ev, ov, et, ot]);
    }
    r.tables.insert("comparison".into(), table);
    let status = Status::all(statuses);
    r.checks.push(match status {
        Status::Pass => Check::pass(
            "agreement",
            format!("engine and oracle agree on n ∈ [{lo}, {hi}]"),
        ),
        Status::Fail => Check::fail(
            "agreement",
            format!("disagreement at n = {disagreements:?}"),
        ),
        Status::Undetermined => {
            Check::undetermined("agreement", "some components are undetermined")
        }
    });
    Ok(())
}

fn row(
    e: &Result<ComponentDim, CoreError>,
    o: &Result<Finiteness, String>,
    oracle_trail: String,
) -> (String, String, String, String, Status) {
    let ev = e.as_ref().map(|c| c.value).map_err(|e| e.to_string());
    let status = match (&ev, o) {
        (Ok(a), Ok(b)) if a == b => Status::Pass,
        (Ok(_), Ok(_)) => Status::Fail,
        _ => Status::Undetermined,
    };
    (
        finiteness_cells(&ev),
        finiteness_cells(o),
        trail(e),
        oracle_trail,
        status,
    )
}

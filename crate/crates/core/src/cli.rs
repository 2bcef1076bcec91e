//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches, and returns the exit status with the
//! rendered report, so the binary is a thin wrapper and the whole surface is
//! testable in-process. Exit status: 0 when every requested check passes or
//! is not applicable, 1 when one fails, 2 on input or usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::atoms::{atom_partition, generator_atom_mask, is_hausdorff, Partition};
use crate::closure::{named_closure_with, NamedClass, Nullary};
use crate::error::Error;
use crate::predicates::{classify, hypothesis_t31, kappa_equals_sigma, ClassFlag, SEMI_RING_DEFINITION};
use crate::sets::{EmptyMeetPolicy, SetFamily, Universe};
use crate::setsys::{parse_with_diagnostics, serialize_set_system, ParsedSystem};
use crate::verify::{
    blackwell_compare, exhaustive_scan, random_scan, verify_corollaries, verify_lemma_3_1,
    verify_theorem_3_1, CorollaryId, CorollaryReport, LemmaReport, ScanOptions, ScanReport,
    TheoremCheck, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Universe,
    Empty,
}

impl From<PolicyArg> for EmptyMeetPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Universe => EmptyMeetPolicy::Universe,
            PolicyArg::Empty => EmptyMeetPolicy::Empty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NullaryArg {
    Include,
    Exclude,
}

impl From<NullaryArg> for Nullary {
    fn from(n: NullaryArg) -> Self {
        match n {
            NullaryArg::Include => Nullary::Include,
            NullaryArg::Exclude => Nullary::Exclude,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Kappa,
    Sigma,
    Lambda,
    Monotone,
    UnionF,
    InterF,
    DisjunionF,
    SigmaDelta,
}

impl From<ClassArg> for NamedClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Kappa => NamedClass::Kappa,
            ClassArg::Sigma => NamedClass::Sigma,
            ClassArg::Lambda => NamedClass::Lambda,
            ClassArg::Monotone => NamedClass::Monotone,
            ClassArg::UnionF => NamedClass::UnionF,
            ClassArg::InterF => NamedClass::InterF,
            ClassArg::DisjunionF => NamedClass::DisjunionF,
            ClassArg::SigmaDelta => NamedClass::SigmaDelta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Theorem31,
    Lemma31,
    Cor41,
    Cor42,
    Cor43,
    Cor44,
    Cor45,
    All,
}

impl Target {
    fn corollaries(self) -> &'static [CorollaryId] {
        match self {
            Target::Cor41 => &[CorollaryId::Cor41],
            Target::Cor42 => &[CorollaryId::Cor42, CorollaryId::Cor42Weak],
            Target::Cor43 => &[CorollaryId::Cor43],
            Target::Cor44 => &[CorollaryId::Cor44],
            Target::Cor45 => &[CorollaryId::Cor45],
            Target::All => &CorollaryId::ALL,
            Target::Theorem31 | Target::Lemma31 => &[],
        }
    }

    fn includes_theorem(self) -> bool {
        matches!(self, Target::Theorem31 | Target::All)
    }

    fn includes_lemma(self) -> bool {
        matches!(self, Target::Lemma31 | Target::All)
    }

    fn name(self) -> &'static str {
        match self {
            Target::Theorem31 => "theorem31",
            Target::Lemma31 => "lemma31",
            Target::Cor41 => "cor41",
            Target::Cor42 => "cor42",
            Target::Cor43 => "cor43",
            Target::Cor44 => "cor44",
            Target::Cor45 => "cor45",
            Target::All => "all",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sigatoms", version, about = "Atoms of generated sigma-algebras and closure classes of set families")]
pub struct Invocation {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Close a family under a named class.
    Closure {
        #[arg(long, value_enum)]
        class: ClassArg,
        /// Empty unions/intersections (kappa only; default include).
        #[arg(long, value_enum)]
        nullary: Option<NullaryArg>,
        file: PathBuf,
    },
    /// Atom partition and generator atoms.
    Atoms {
        #[arg(long, value_enum, default_value_t = PolicyArg::Universe)]
        policy: PolicyArg,
        file: PathBuf,
    },
    /// Structural class flags and the complement hypothesis.
    Check {
        #[arg(long, value_enum, default_value_t = NullaryArg::Include)]
        nullary: NullaryArg,
        file: PathBuf,
    },
    /// Verify the lemma, theorem, or corollaries on one family.
    Verify {
        #[arg(long, value_enum, default_value_t = Target::All)]
        target: Target,
        #[arg(long, value_enum, default_value_t = PolicyArg::Universe)]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value_t = NullaryArg::Include)]
        nullary: NullaryArg,
        file: PathBuf,
    },
    /// Scan every family (or seeded random families) on n points.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        exhaustive: bool,
        /// Number of random families.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Universe)]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value_t = NullaryArg::Include)]
        nullary: NullaryArg,
        /// Which failures decide the exit status.
        #[arg(long, value_enum, default_value_t = Target::Theorem31)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare the sigma-algebras generated by two families.
    Compare { first: PathBuf, second: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Closure { .. } => "closure",
            Command::Atoms { .. } => "atoms",
            Command::Check { .. } => "check",
            Command::Verify { .. } => "verify",
            Command::Scan { .. } => "scan",
            Command::Compare { .. } => "compare",
        }
    }
}

/// Exit status plus what the binary writes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn usage(message: impl Into<String>) -> RunOutput {
        RunOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

struct Report {
    failed: bool,
    modes: Value,
    inputs: Vec<Value>,
    results: Value,
    text: String,
}

struct Input {
    path: String,
    parsed: ParsedSystem,
}

fn load(path: &Path) -> Result<Input, String> {
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| format!("error: {name}: {e}"))?;
    let text = String::from_utf8(bytes).map_err(|_| format!("error: {name}: input is not valid UTF-8"))?;
    let parsed = parse_with_diagnostics(&text).map_err(|e| format!("error: {name}: {e}"))?;
    Ok(Input { path: name, parsed })
}

fn labels(universe: &Universe, mask: u64) -> Value {
    Value::from(universe.labels_of(mask))
}

fn family_json(family: &SetFamily) -> Value {
    Value::from(
        family
            .masks()
            .iter()
            .map(|&m| labels(family.universe(), m))
            .collect::<Vec<_>>(),
    )
}

fn partition_json(p: &Partition) -> Value {
    Value::from(
        p.block_masks()
            .iter()
            .map(|&b| labels(p.universe(), b))
            .collect::<Vec<_>>(),
    )
}

fn input_json(input: &Input) -> Value {
    json!({
        "path": input.path,
        "document": serialize_set_system(&input.parsed.family),
        "warnings": input.parsed.warnings,
    })
}

fn warnings_text(input: &Input) -> String {
    input
        .parsed
        .warnings
        .iter()
        .map(|w| format!("# warning: {}: {w}\n", input.path))
        .collect()
}

/// Parses `args` (including the program name) and runs the invocation.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let invocation = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => RunOutput {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => RunOutput::usage(rendered),
            };
        }
    };
    execute(&invocation)
}

pub fn execute(invocation: &Invocation) -> RunOutput {
    let report = match dispatch(&invocation.command) {
        Ok(r) => r,
        Err(message) => return RunOutput::usage(format!("{message}\n")),
    };
    let stdout = match invocation.format {
        Format::Text => report.text,
        Format::Structured => {
            let doc = json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "subcommand": invocation.command.name(),
                "modes": report.modes,
                "inputs": report.inputs,
                "results": report.results,
            });
            // serde_json maps are ordered, so keys come out sorted.
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
    };
    RunOutput {
        code: if report.failed { EXIT_FAIL } else { EXIT_OK },
        stdout,
        stderr: String::new(),
    }
}

fn dispatch(command: &Command) -> Result<Report, String> {
    match command {
        Command::Closure { class, nullary, file } => {
            let class = NamedClass::from(*class);
            if nullary.is_some() && class != NamedClass::Kappa {
                return Err(format!(
                    "error: --nullary only applies to --class kappa, not {}",
                    class.name()
                ));
            }
            let nullary = nullary.map(Nullary::from).unwrap_or_default();
            let input = load(file)?;
            Ok(closure_report(&input, class, nullary))
        }
        Command::Atoms { policy, file } => Ok(atoms_report(&load(file)?, (*policy).into())),
        Command::Check { nullary, file } => Ok(check_report(&load(file)?, (*nullary).into())),
        Command::Verify {
            target,
            policy,
            nullary,
            file,
        } => verify_report(&load(file)?, *target, (*policy).into(), (*nullary).into()),
        Command::Scan {
            n,
            exhaustive,
            count,
            seed,
            policy,
            nullary,
            target,
            jobs,
        } => {
            if *jobs == 0 {
                return Err("error: --jobs must be at least 1".into());
            }
            let opts = ScanOptions::new((*policy).into(), (*nullary).into()).with_jobs(*jobs);
            let report = match (exhaustive, count) {
                (true, None) => {
                    if seed.is_some() {
                        return Err("error: --seed only applies to random scans (--count)".into());
                    }
                    exhaustive_scan(*n, opts)
                }
                (false, Some(count)) => random_scan(*n, *count, seed.unwrap_or(0), opts),
                (true, Some(_)) => return Err("error: --exhaustive and --count are mutually exclusive".into()),
                (false, None) => return Err("error: scan needs --exhaustive or --count".into()),
            }
            .map_err(|e| format!("error: {e}"))?;
            Ok(scan_report(&report, *target))
        }
        Command::Compare { first, second } => compare_report(&load(first)?, &load(second)?),
    }
}

fn closure_report(input: &Input, class: NamedClass, nullary: Nullary) -> Report {
    let family = &input.parsed.family;
    let closed = named_closure_with(family, class, nullary);
    let mut modes = Map::new();
    modes.insert("class".into(), class.name().into());
    if class == NamedClass::Kappa {
        modes.insert("nullary".into(), nullary.name().into());
    }
    let header = if class == NamedClass::Kappa {
        format!("# class: {}, nullary: {}, {} members\n", class.name(), nullary.name(), closed.len())
    } else {
        format!("# class: {}, {} members\n", class.name(), closed.len())
    };
    Report {
        failed: false,
        modes: Value::Object(modes),
        inputs: vec![input_json(input)],
        results: json!({ "family": family_json(&closed), "size": closed.len() }),
        text: format!("{}{header}{}", warnings_text(input), serialize_set_system(&closed)),
    }
}

fn atoms_report(input: &Input, policy: EmptyMeetPolicy) -> Report {
    let family = &input.parsed.family;
    let u = family.universe();
    let partition = atom_partition(family);
    let hausdorff = is_hausdorff(family);
    let mut points = Vec::new();
    let mut text = warnings_text(input);
    text.push_str(&format!("atoms: {}\nhausdorff: {hausdorff}\npolicy: {}\n", partition.render(), policy.name()));
    for p in 0..u.len() {
        let g = generator_atom_mask(family, p, policy);
        let s = partition.block_mask_of(p);
        points.push(json!({
            "point": u.label(p),
            "generator_atom": labels(u, g),
            "sigma_atom": labels(u, s),
            "agree": g == s,
        }));
        text.push_str(&format!(
            "point {}: generator atom {}, sigma atom {}{}\n",
            u.label(p),
            u.render_mask(g),
            u.render_mask(s),
            if g == s { "" } else { "  (differ)" }
        ));
    }
    Report {
        failed: false,
        modes: json!({ "policy": policy.name() }),
        inputs: vec![input_json(input)],
        results: json!({ "partition": partition_json(&partition), "hausdorff": hausdorff, "points": points }),
        text,
    }
}

fn check_report(input: &Input, nullary: Nullary) -> Report {
    let family = &input.parsed.family;
    let u = family.universe();
    let profile = classify(family, nullary);
    let hyp = hypothesis_t31(family, nullary);
    let kes = kappa_equals_sigma(family, nullary);
    let mut flags = Map::new();
    let mut witnesses = Map::new();
    let mut text = warnings_text(input);
    for flag in ClassFlag::ALL {
        flags.insert(flag.name().into(), profile.flag(flag).into());
        let witness = profile.witnesses.get(&flag).map(|w| w.describe(u));
        text.push_str(&format!(
            "{}: {}{}\n",
            flag.name(),
            profile.flag(flag),
            witness.as_deref().map(|w| format!("  ({w})")).unwrap_or_default()
        ));
        if let Some(w) = witness {
            witnesses.insert(flag.name().into(), w.into());
        }
    }
    let hyp_witness = hyp.witness.map(|s| labels(u, s.mask()));
    text.push_str(&format!(
        "complement hypothesis: {}{}\nkappa equals sigma: {kes}\n# monotone_class is always true on a finite universe\n# {SEMI_RING_DEFINITION}\n",
        hyp.holds,
        hyp.witness
            .map(|s| format!("  (complement of {} not in kappa)", u.render_mask(s.mask())))
            .unwrap_or_default(),
    ));
    Report {
        failed: false,
        modes: json!({ "nullary": nullary.name() }),
        inputs: vec![input_json(input)],
        results: json!({
            "flags": flags,
            "witnesses": witnesses,
            "hypothesis_t31": { "holds": hyp.holds, "witness": hyp_witness },
            "kappa_equals_sigma": kes,
            "notes": [
                "monotone_class is always true on a finite universe",
                SEMI_RING_DEFINITION,
            ],
        }),
        text,
    }
}

fn theorem_json(u: &Universe, t: &TheoremCheck) -> Value {
    json!({
        "verdict": t.verdict.name(),
        "hypothesis_holds": t.hypothesis.holds,
        "hypothesis_witness": t.hypothesis.witness.map(|s| labels(u, s.mask())),
        "atoms_agree": t.agreement.agree,
        "disagreements": t.agreement.disagreements.iter().map(|d| json!({
            "point": u.label(d.point),
            "generator_atom": labels(u, d.generator_atom.mask()),
            "sigma_atom": labels(u, d.sigma_atom.mask()),
        })).collect::<Vec<_>>(),
    })
}

fn lemma_json(u: &Universe, r: &LemmaReport) -> Value {
    let checks: Map<String, Value> = r
        .checks
        .entries()
        .iter()
        .map(|(k, v)| ((*k).to_string(), Value::from(*v)))
        .collect();
    json!({
        "point": u.label(r.point),
        "verdict": if r.checks.all_pass() { "PASS" } else { "FAIL" },
        "generator_atom": labels(u, r.generator_atom),
        "g_family": family_json(&r.g_family),
        "checks": checks,
    })
}

fn corollary_json(report: &CorollaryReport, ids: &[CorollaryId]) -> Value {
    let map: Map<String, Value> = ids
        .iter()
        .map(|&id| {
            let c = report.get(id);
            (
                id.name().to_string(),
                json!({
                    "verdict": c.verdict.name(),
                    "applicable": c.applicable,
                    "condition": c.condition,
                    "atoms_agree": c.agreement,
                    "failed_direction": c.failed_direction,
                }),
            )
        })
        .collect();
    Value::Object(map)
}

fn verify_report(input: &Input, target: Target, policy: EmptyMeetPolicy, nullary: Nullary) -> Result<Report, String> {
    let family = &input.parsed.family;
    let u = family.universe();
    let mut failed = false;
    let mut results = Map::new();
    let mut text = warnings_text(input);
    text.push_str(&format!(
        "# target: {}, policy: {}, nullary: {}\n",
        target.name(),
        policy.name(),
        nullary.name()
    ));

    if target.includes_theorem() {
        let t = verify_theorem_3_1(family, policy, nullary);
        failed |= t.verdict == Verdict::Fail;
        text.push_str(&format!("theorem31: {}\n", t.verdict.name()));
        if let Some(w) = t.hypothesis.witness {
            text.push_str(&format!("  complement of {} is not in kappa\n", u.render_mask(w.mask())));
        }
        for d in &t.agreement.disagreements {
            text.push_str(&format!(
                "  point {}: generator atom {} vs sigma atom {}\n",
                u.label(d.point),
                u.render_mask(d.generator_atom.mask()),
                u.render_mask(d.sigma_atom.mask())
            ));
        }
        results.insert("theorem31".into(), theorem_json(u, &t));
    }
    if target.includes_lemma() {
        let mut per_point = Vec::new();
        for p in 0..u.len() {
            let r = verify_lemma_3_1(family, p).map_err(|e| format!("error: {}: {e}", input.path))?;
            let ok = r.checks.all_pass();
            failed |= !ok;
            text.push_str(&format!(
                "lemma31 @ {}: {} (G has {} members)\n",
                u.label(p),
                if ok { "PASS" } else { "FAIL" },
                r.g_family.len()
            ));
            per_point.push(lemma_json(u, &r));
        }
        results.insert("lemma31".into(), per_point.into());
    }
    let ids = target.corollaries();
    if !ids.is_empty() {
        let report = verify_corollaries(family, policy, nullary);
        for &id in ids {
            let c = report.get(id);
            failed |= c.verdict == Verdict::Fail;
            text.push_str(&format!(
                "{}: {}{}\n",
                id.name(),
                c.verdict.name(),
                match c.failed_direction {
                    Some(d) => format!("  ({d:?} direction)").to_lowercase(),
                    None => String::new(),
                }
            ));
        }
        results.insert("corollaries".into(), corollary_json(&report, ids));
    }
    results.insert("failed".into(), failed.into());
    Ok(Report {
        failed,
        modes: json!({ "policy": policy.name(), "nullary": nullary.name(), "target": target.name() }),
        inputs: vec![input_json(input)],
        results: Value::Object(results),
        text,
    })
}

fn scan_failed(report: &ScanReport, target: Target) -> bool {
    match target {
        Target::All => report.counters.violations > 0,
        Target::Theorem31 => report.theorem_failures() > 0,
        Target::Lemma31 => report.lemma.is_some_and(|l| l.failures > 0),
        other => other.corollaries().iter().any(|id| report.tally(id.name()).fail > 0),
    }
}

fn scan_report(report: &ScanReport, target: Target) -> Report {
    let failed = scan_failed(report, target);
    let mut text = format!(
        "# scan n = {}, {}, policy: {}, nullary: {}, target: {}\n",
        report.universe_size,
        match report.enumeration {
            crate::verify::Enumeration::Exhaustive => "exhaustive".to_string(),
            crate::verify::Enumeration::Random { seed, count } => format!("random count = {count} seed = {seed}"),
        },
        report.policy.name(),
        report.nullary.name(),
        target.name(),
    );
    let c = &report.counters;
    text.push_str(&format!(
        "families_total: {}\nhypothesis_holds: {}\natoms_agree: {}\nboth: {}\nviolations: {}\n",
        c.families_total, c.hypothesis_holds, c.atoms_agree, c.both, c.violations
    ));
    text.push_str(&format!(
        "strata: empty_family {}, uncovered {}, policy_sensitive {}\n",
        report.strata.empty_family, report.strata.uncovered, report.strata.policy_sensitive
    ));
    for (name, t) in &report.tallies {
        text.push_str(&format!(
            "{name}: pass {} fail {} n/a {}{}\n",
            t.pass,
            t.fail,
            t.not_applicable,
            if t.fail > 0 {
                format!(
                    " (forward {}, reverse {}, empty family {}, uncovered {})",
                    t.fail_forward, t.fail_reverse, t.fail_empty_family, t.fail_uncovered
                )
            } else {
                String::new()
            }
        ));
    }
    if let Some(l) = report.lemma {
        text.push_str(&format!("lemma31: points {} failures {}\n", l.points_checked, l.failures));
    }
    let e = &report.equivalence;
    text.push_str(&format!(
        "kappa=sigma vs hypothesis: checked {} mismatches {} (empty family {})\n",
        e.checked, e.mismatches, e.mismatches_empty_family
    ));
    for w in &report.witnesses {
        text.push_str(&format!("violation {} [{:?}]: {}\n", w.family, w.stratum, w.failed.join(", ")).replace("EmptyFamily", "empty_family").replace("Uncovered", "uncovered").replace("Covered", "covered"));
    }
    Report {
        failed,
        modes: json!({
            "policy": report.policy.name(),
            "nullary": report.nullary.name(),
            "target": target.name(),
        }),
        inputs: Vec::new(),
        results: serde_json::to_value(report).expect("scan reports serialize"),
        text,
    }
}

fn compare_report(first: &Input, second: &Input) -> Result<Report, String> {
    let r = blackwell_compare(&first.parsed.family, &second.parsed.family).map_err(|e| match e {
        Error::UniverseMismatch => format!(
            "error: {} and {} use different universes",
            first.path, second.path
        ),
        other => format!("error: {other}"),
    })?;
    let failed = !r.consistent();
    let mut text = warnings_text(first);
    text.push_str(&warnings_text(second));
    text.push_str(&format!(
        "atoms first: {}\natoms second: {}\nrelation: {}\nby enumeration: {}\n",
        r.atoms_first.render(),
        r.atoms_second.render(),
        r.relation.name(),
        r.by_enumeration.map(|x| x.name()).unwrap_or("skipped"),
    ));
    Ok(Report {
        failed,
        modes: json!({}),
        inputs: vec![input_json(first), input_json(second)],
        results: json!({
            "atoms_first": partition_json(&r.atoms_first),
            "atoms_second": partition_json(&r.atoms_second),
            "relation": r.relation.name(),
            "by_enumeration": r.by_enumeration.map(|x| x.name()),
            "consistent": r.consistent(),
        }),
        text,
    })
}

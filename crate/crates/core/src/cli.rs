//! The `s2t` command line.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::base::BaseGroup;
use crate::certifier::{self, ActionOptions, LevelOptions};
use crate::report::{Report, Verdict};
use crate::session;
use crate::tower::Tower;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "s2t", version, about = "Sharply 2-transitive tower sessions and certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Base-group commands.
    #[command(subcommand)]
    Base(BaseCommand),
    /// Tower session commands.
    #[command(subcommand)]
    Tower(TowerCommand),
    /// Certify the base, every level, the decision procedures and the action.
    Certify(CertifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum BaseCommand {
    /// Check the standing hypotheses on a base configuration.
    Verify {
        config: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TowerCommand {
    /// Start a session from a base configuration.
    New {
        config: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Print f with A f = A u and A t f = A v, extending and saving if needed.
    Resolve {
        session: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Print a representative of (A · coset) · g.
    Act {
        session: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        coset: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// List levels, registry and generators.
    Show { session: PathBuf },
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub session: PathBuf,
    /// Radius of the level balls; caps every other radius.
    #[arg(long)]
    pub max_len: Option<u32>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = certifier::DEFAULT_SEED)]
    pub seed: u64,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(stderr: impl Into<String>) -> Outcome {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text)
                }
                _ => Outcome::usage(text),
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Base(BaseCommand::Verify { config, max_len, json }) => base_verify(&config, max_len, json.as_deref()),
        Command::Tower(cmd) => tower(cmd),
        Command::Certify(args) => certify(args),
    };
    result.unwrap_or_else(Outcome::usage)
}

fn read_base(path: &Path) -> Result<BaseGroup, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("error: {}: {e}", path.display()))?;
    BaseGroup::from_json(&text).map_err(|e| format!("error: {}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Tower, String> {
    session::load(path).map_err(|e| format!("error: {}: {e}", path.display()))
}

fn save(tower: &Tower, path: &Path) -> Result<(), String> {
    session::save(tower, path).map_err(|e| format!("error: {}: {e}", path.display()))
}

fn word(tower: &Tower, flag: &str, text: &str) -> Result<crate::Element, String> {
    tower.parse(text).map_err(|e| format!("error: --{flag} \"{text}\": {e}"))
}

fn finish(report: &Report, json: Option<&Path>) -> Result<Outcome, String> {
    if let Some(path) = json {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| format!("error: {}: {e}", path.display()))?;
    }
    let mut stdout = report.to_text();
    if report.checks.iter().any(|c| c.verdict == Verdict::VacuousPass) {
        stdout.push_str("warning: some checks passed vacuously\n");
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

fn base_verify(config: &Path, max_len: u32, json: Option<&Path>) -> Result<Outcome, String> {
    let base = read_base(config)?;
    finish(&certifier::verify_base(&base, max_len), json)
}

fn tower(cmd: TowerCommand) -> Result<Outcome, String> {
    match cmd {
        TowerCommand::New { config, output } => {
            let tower = Tower::new(read_base(&config)?);
            save(&tower, &output)?;
            let mut out = format!("session written to {}\n", output.display());
            if tower.algebra().base().config().t.is_none() {
                out.push_str(&format!("t = {}\n", tower.format(&tower.algebra().t())));
            }
            Ok(Outcome::ok(out))
        }
        TowerCommand::Resolve { session: path, u, v } => {
            let mut tower = load(&path)?;
            let (u, v) = (word(&tower, "u", &u)?, word(&tower, "v", &v)?);
            let r = tower.resolve_f(&u, &v).map_err(|e| format!("error: {e}"))?;
            save(&tower, &path)?;
            let mut out = format!("{}\n", tower.format(&r.f));
            if let Some(k) = r.extended {
                let level = tower.algebra().level(k);
                out.push_str(&format!(
                    "extended: level {k} ({}) over {}\n",
                    level.kind,
                    tower.format(&level.v)
                ));
            }
            Ok(Outcome::ok(out))
        }
        TowerCommand::Act { session: path, coset, g } => {
            let tower = load(&path)?;
            let (x, g) = (word(&tower, "coset", &coset)?, word(&tower, "g", &g)?);
            let y = tower.act(&tower.coset(x), &g);
            Ok(Outcome::ok(format!("{}\n", tower.format(&y.rep))))
        }
        TowerCommand::Show { session: path } => {
            let tower = load(&path)?;
            Ok(Outcome::ok(show(&tower)))
        }
    }
}

fn show(tower: &Tower) -> String {
    let alg = tower.algebra();
    let base = alg.base();
    let mut out = String::new();
    out.push_str(&format!("levels: {}\n", tower.top()));
    out.push_str(&format!("base generators: {}\n", base.generator_names().join(" ")));
    out.push_str(&format!("t = {}\n", tower.format(&alg.t())));
    let a_gens: Vec<String> = base.a_generators().iter().map(|a| base.format(a)).collect();
    out.push_str(&format!(
        "A generated by: {}\n",
        if a_gens.is_empty() { "1".to_string() } else { a_gens.join(" ") }
    ));
    for entry in tower.registry() {
        out.push_str(&format!(
            "level {} {} v = {}  letters: {}\n",
            entry.level,
            entry.kind,
            tower.format(&entry.v),
            entry.letters.join(" ")
        ));
    }
    for q in tower.queries() {
        out.push_str(&format!(
            "f({}, {}) = {}{}\n",
            tower.format(&q.u),
            tower.format(&q.v),
            tower.format(&q.answer),
            q.extended.map(|k| format!("  [level {k}]")).unwrap_or_default()
        ));
    }
    out
}

/// Radii used by a full certification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub base: u32,
    pub level: u32,
    pub cross_check: u32,
    pub action: u32,
}

impl Bounds {
    pub const DEFAULT: Bounds = Bounds { base: 8, level: 6, cross_check: 5, action: 4 };

    pub fn capped(cap: Option<u32>) -> Bounds {
        let d = Bounds::DEFAULT;
        match cap {
            None => d,
            Some(l) => Bounds {
                base: d.base.min(l),
                level: l,
                cross_check: d.cross_check.min(l),
                action: d.action.min(l),
            },
        }
    }
}

fn prefixed(mut report: Report, prefix: &str) -> Report {
    for c in &mut report.checks {
        c.name = format!("{prefix}{}", c.name);
    }
    report.timing_ms = report.timing_ms.into_iter().map(|(k, v)| (format!("{prefix}{k}"), v)).collect();
    report.notes = report.notes.into_iter().map(|n| format!("{prefix}{n}")).collect();
    report
}

/// The full certification of a tower, as run by `s2t certify`.
pub fn certify_tower(tower: &Tower, bounds: Bounds, samples: usize, seed: u64) -> Report {
    let alg = tower.algebra();
    let mut report = Report::new(format!(
        "certification of a tower with {} level(s) (L = {})",
        tower.top(),
        bounds.level
    ));
    report.seed = Some(seed);
    let base = certifier::verify_base(alg.base(), bounds.base);
    report.classification = base.classification.clone();
    report.extend(prefixed(base, "base: "));
    report.extend(prefixed(certifier::cross_check_dc(alg, 0, bounds.cross_check), "base: "));
    for k in 1..=tower.top() {
        let prefix = format!("level {k}: ");
        report.extend(prefixed(certifier::certify_level(alg, k, LevelOptions::new(bounds.level)), &prefix));
        report.extend(prefixed(certifier::cross_check_dc(alg, k, bounds.cross_check), &prefix));
    }
    let mut opts = ActionOptions::new(bounds.action, samples);
    opts.seed = seed;
    report.extend(prefixed(certifier::certify_action(tower, opts), "action: "));
    report
}

fn certify(args: CertifyArgs) -> Result<Outcome, String> {
    let tower = load(&args.session)?;
    let bounds = Bounds::capped(args.max_len);
    let report = certify_tower(&tower, bounds, args.samples, args.seed);
    let mut outcome = finish(&report, args.json.as_deref())?;
    if args.max_len == Some(0) {
        outcome.stdout.push_str("warning: --max-len 0 leaves every bounded check vacuous\n");
    }
    Ok(outcome)
}

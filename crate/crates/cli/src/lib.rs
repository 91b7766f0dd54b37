//! The `arena` command-line tool.

pub mod frames;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use arena_core::agent::{
    parse_replay, run_episode, run_series, verify_replay, write_golden_files, AgentSpec,
    EpisodeOptions, EpisodeRecord, RandomPolicy, Seat,
};
use arena_core::fixtures::{all_fixture_maps, fixture_by_name, fixture_map, fixture_text};
use arena_core::scenarios::{
    parse_map, EpisodeLimits, GameKind, IntegratedConfig, MapErrors, MapSpec,
};
use arena_core::tournament::{
    format_standings, run_tournament_with, AgentEpisodePlayer, TournamentConfig,
};

use frames::{frame_steps, render_frame, Camera, FRAME_SIZE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "arena", version, about = "Deterministic 2D disc-sports arena")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one episode and print its outcome.
    Run(RunArgs),
    /// Play an integrated series of 4 to 6 scenarios.
    Series(SeriesArgs),
    /// Export top-down frames from a replay file.
    Replay(ReplayArgs),
    /// Re-simulate a replay and compare every recorded state.
    Verify(VerifyArgs),
    /// Check map files and report every problem found.
    Validate(ValidateArgs),
    /// Measure throughput and replay-hash stability.
    Bench(BenchArgs),
    /// Run a Swiss tournament from a config file.
    Tournament(TournamentArgs),
    /// Write the golden protocol files and bundled maps.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Args)]
pub struct AgentArgs {
    /// Agent on side A: noop, random[:SEED], scripted_forward or cmd:COMMAND.
    #[arg(long, default_value = "noop")]
    pub agent_a: String,
    #[arg(long, default_value = "noop")]
    pub agent_b: String,
    /// Reply deadline per step for external agents.
    #[arg(long, default_value_t = 100)]
    pub deadline_ms: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Map file, or the name of a bundled map.
    #[arg(long)]
    pub map: String,
    /// Scenario kind; defaults to the map's own.
    #[arg(long)]
    pub kind: Option<GameKind>,
    #[command(flatten)]
    pub agents: AgentArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the replay file.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    #[arg(long)]
    pub max_steps: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Comma-separated scenario kinds.
    #[arg(long, value_delimiter = ',', required = true)]
    pub kinds: Vec<GameKind>,
    /// Map files or bundled names overriding the default map of their kind.
    #[arg(long)]
    pub map: Vec<String>,
    #[command(flatten)]
    pub agents: AgentArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Schedule seed; defaults to --seed.
    #[arg(long)]
    pub shuffle_seed: Option<u64>,
    /// Directory receiving one replay per game.
    #[arg(long)]
    pub replay_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub replay: PathBuf,
    /// Map file or bundled name; by default the bundled map with the
    /// replay's checksum.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long, default_value = "frames")]
    pub out: PathBuf,
    /// Take a frame every k steps.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub every: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub replay: PathBuf,
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub map: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    pub episodes: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TournamentArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's worker count.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Directory receiving per-round standings and the final ranking.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    #[arg(long, default_value = "fixtures")]
    pub out: PathBuf,
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

type Outcome = Result<(), Failure>;

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a, out),
        Command::Series(a) => cmd_series(&a, out),
        Command::Replay(a) => cmd_replay(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Validate(a) => cmd_validate(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Tournament(a) => cmd_tournament(&a, out),
        Command::Fixtures(a) => cmd_fixtures(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Loads a map from a file, falling back to the bundled map of that name.
pub fn load_map(spec: &str) -> Result<MapSpec, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{spec}: {e}")))?;
        return parse_map(&text).map_err(|errs| usage(format!("{spec}: {}", MapErrors(&errs))));
    }
    fixture_by_name(spec)
        .ok_or_else(|| usage(format!("map '{spec}' is neither a file nor a bundled map")))
}

fn seats(a: &AgentArgs) -> Result<(Seat, Seat), Failure> {
    let deadline = Some(Duration::from_millis(a.deadline_ms));
    let parse = |s: &str| s.parse::<AgentSpec>().map_err(usage);
    Ok((
        parse(&a.agent_a)?.seat(deadline),
        parse(&a.agent_b)?.seat(deadline),
    ))
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn outcome_line(r: &EpisodeRecord) -> String {
    let o = r.outcome;
    format!(
        "{} {}: {:?} ({:?}) after {} steps, score {:+}/{:+}, replay {}",
        r.header.kind,
        r.header.map_name,
        o.result,
        o.reason,
        r.step_count(),
        o.score.0,
        o.score.1,
        r.replay_hash
    )
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Outcome {
    let map = load_map(&a.map)?;
    let kind = a.kind.unwrap_or(map.kind);
    if kind != map.kind {
        return Err(usage(format!(
            "map '{}' is a {} map, not {kind}",
            map.name, map.kind
        )));
    }
    let (mut sa, mut sb) = seats(&a.agents)?;
    let opts = EpisodeOptions {
        limits: a.max_steps.map(|max_steps| EpisodeLimits { max_steps }),
        ..Default::default()
    };
    let record = run_episode(kind, &map, [&mut sa, &mut sb], a.seed, &opts)
        .map_err(|e| usage(e.to_string()))?;
    if let Some(path) = &a.replay {
        write_file(path, record.to_text().as_bytes())?;
    }
    let _ = writeln!(out, "{}", outcome_line(&record));
    Ok(())
}

fn cmd_series(a: &SeriesArgs, out: &mut dyn Write) -> Outcome {
    let config = IntegratedConfig::new(a.kinds.clone(), a.shuffle_seed.unwrap_or(a.seed))
        .map_err(|e| usage(e.to_string()))?;
    let mut maps: BTreeMap<GameKind, MapSpec> =
        a.kinds.iter().map(|k| (*k, fixture_map(*k))).collect();
    for m in &a.map {
        let spec = load_map(m)?;
        if !maps.contains_key(&spec.kind) {
            return Err(usage(format!(
                "map '{}' is a {} map, which is not in the series",
                spec.name, spec.kind
            )));
        }
        maps.insert(spec.kind, spec);
    }
    let (mut sa, mut sb) = seats(&a.agents)?;
    let (report, records) = run_series(
        &config,
        &maps,
        [&mut sa, &mut sb],
        a.seed,
        &EpisodeOptions::default(),
    )
    .map_err(|e| usage(e.to_string()))?;
    for (i, r) in records.iter().enumerate() {
        if let Some(dir) = &a.replay_dir {
            write_file(
                &dir.join(format!("game_{i}_{}.replay", r.header.kind)),
                r.to_text().as_bytes(),
            )?;
        }
        let _ = writeln!(out, "{}", outcome_line(r));
    }
    let o = report.outcome;
    let _ = writeln!(
        out,
        "series: {:?} ({:?}), score {:+}/{:+}",
        o.result, o.reason, o.score.0, o.score.1
    );
    Ok(())
}

fn load_replay(path: &Path, map: Option<&str>) -> Result<(EpisodeRecord, MapSpec), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let record = parse_replay(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let map = match map {
        Some(m) => load_map(m)?,
        None => all_fixture_maps()
            .into_iter()
            .find(|m| m.checksum == record.header.map_checksum)
            .ok_or_else(|| usage("no bundled map matches the replay; pass --map"))?,
    };
    if map.checksum != record.header.map_checksum {
        return Err(invalid(format!(
            "map checksum {} does not match the replay's {}",
            map.checksum, record.header.map_checksum
        )));
    }
    Ok((record, map))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let (record, map) = load_replay(&a.replay, a.map.as_deref())?;
    verify_replay(&record, &map).map_err(|e| invalid(e.to_string()))?;
    let _ = writeln!(
        out,
        "ok: {} steps reproduce, replay {}",
        record.step_count(),
        record.replay_hash
    );
    Ok(())
}

fn cmd_replay(a: &ReplayArgs, out: &mut dyn Write) -> Outcome {
    let (record, map) = load_replay(&a.replay, a.map.as_deref())?;
    std::fs::create_dir_all(&a.out).map_err(|e| usage(format!("{}: {e}", a.out.display())))?;
    let camera = Camera::fit(FRAME_SIZE, map.bounds.w, map.bounds.h);
    let shapes = map.static_shapes();
    let steps = frame_steps(record.step_count(), a.every);
    for &s in &steps {
        let bodies = record.bodies_at(s).expect("frame steps are in range");
        let frame = render_frame(&camera, &shapes, bodies);
        write_file(&a.out.join(format!("frame_{s:05}.ppm")), &frame.to_ppm())?;
    }
    let _ = writeln!(out, "wrote {} frames to {}", steps.len(), a.out.display());
    Ok(())
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> Outcome {
    let mut bad = 0;
    for path in &a.map {
        let text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        match parse_map(&text) {
            Ok(m) => {
                let _ = writeln!(
                    out,
                    "{}: ok ({} map '{}', checksum {})",
                    path.display(),
                    m.kind,
                    m.name,
                    m.checksum
                );
            }
            Err(errs) => {
                bad += 1;
                let _ = writeln!(out, "{}: {} error(s)", path.display(), errs.len());
                for e in &errs {
                    let _ = writeln!(out, "  {}: {e}", e.kind.label());
                }
            }
        }
    }
    if bad > 0 {
        return Err(invalid(format!("{bad} invalid map(s)")));
    }
    Ok(())
}

/// Hashes of `n` seeded random-vs-random episodes over the bundled maps,
/// with the total number of steps played.
pub fn bench_hashes(n: u32, seed: u64) -> (Vec<String>, u64) {
    let maps = all_fixture_maps();
    let mut hashes = Vec::with_capacity(n as usize);
    let mut steps = 0;
    for i in 0..n {
        let map = &maps[i as usize % maps.len()];
        let s = seed.wrapping_add(u64::from(i));
        let mut a = Seat::policy(RandomPolicy::new(s.wrapping_mul(2)));
        let mut b = Seat::policy(RandomPolicy::new(s.wrapping_mul(2).wrapping_add(1)));
        let r = run_episode(
            map.kind,
            map,
            [&mut a, &mut b],
            s,
            &EpisodeOptions::default(),
        )
        .expect("bundled maps run");
        steps += u64::from(r.step_count());
        hashes.push(r.replay_hash);
    }
    (hashes, steps)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let (first, steps) = bench_hashes(a.episodes, a.seed);
    let elapsed = start.elapsed().as_secs_f64();
    let (second, _) = bench_hashes(a.episodes, a.seed);
    let stable = first == second;
    let report = serde_json::json!({
        "episodes": a.episodes,
        "seed": a.seed,
        "steps": steps,
        "seconds": elapsed,
        "steps_per_second": if elapsed > 0.0 { steps as f64 / elapsed } else { 0.0 },
        "hashes_stable": stable,
        "hashes": first,
    });
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if stable {
        Ok(())
    } else {
        Err(invalid("replay hashes differ between identical runs"))
    }
}

fn cmd_tournament(a: &TournamentArgs, out: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| usage(format!("{}: {e}", a.config.display())))?;
    let cfg = TournamentConfig::parse(&text).map_err(|e| usage(e.to_string()))?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let pool = cfg.load_pool(base).map_err(|e| usage(e.to_string()))?;
    let mut settings = cfg.settings();
    if let Some(j) = a.jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        settings.jobs = j;
    }
    let players = cfg.players();
    let player = AgentEpisodePlayer::new(
        cfg.game.clone(),
        pool,
        Some(Duration::from_millis(cfg.deadline_ms)),
    );
    let mut write_err = None;
    let report = run_tournament_with(&players, &settings, &player, |log| {
        let _ = writeln!(out, "round {}", log.round);
        for m in &log.results {
            let _ = writeln!(
                out,
                "  {} vs {}: {} - {}",
                m.pair.0, m.pair.1, m.points.0, m.points.1
            );
        }
        if let Some(b) = &log.pairing.bye {
            let _ = writeln!(out, "  {b}: bye");
        }
        if let Some(dir) = &a.out {
            let json = serde_json::to_string_pretty(log).expect("round log serializes");
            if let Err(e) = write_file(
                &dir.join(format!("round_{:02}.json", log.round)),
                json.as_bytes(),
            ) {
                write_err.get_or_insert(e);
            }
        }
    })
    .map_err(|e| usage(e.to_string()))?;
    if let Some(e) = write_err {
        return Err(e);
    }
    if let Some(dir) = &a.out {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        write_file(&dir.join("final.json"), json.as_bytes())?;
    }
    let _ = write!(out, "\n{}", format_standings(&report.ranking, &players));
    Ok(())
}

fn cmd_fixtures(a: &FixturesArgs, out: &mut dyn Write) -> Outcome {
    let protocol = a.out.join("protocol");
    let written =
        write_golden_files(&protocol).map_err(|e| usage(format!("{}: {e}", protocol.display())))?;
    for p in &written {
        let _ = writeln!(out, "{}", p.display());
    }
    for kind in GameKind::ALL {
        let map = fixture_map(kind);
        let path = a
            .out
            .join("maps")
            .join(format!("{}.json", map.name.replace('-', "_")));
        write_file(&path, fixture_text(kind).as_bytes())?;
        let _ = writeln!(out, "{}", path.display());
    }
    Ok(())
}

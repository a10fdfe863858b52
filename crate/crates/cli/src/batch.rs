//! JSONL batch mode. Lines are checked concurrently; reports are written in
//! input order, one per line.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use collidere_core::obstructions::aggregate_verdict;
use serde::Deserialize;

use crate::commands::{build_problem, headline, observe_problem};
use crate::deviations::Recorder;
use crate::{Config, Format, EXIT_OK, EXIT_USAGE};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Line {
    source: String,
    targets: String,
}

fn process(line: &str, config: &Config, dev: &mut Recorder) -> Result<String, String> {
    let l: Line = serde_json::from_str(line).map_err(|e| format!("malformed line: {e}"))?;
    let p = build_problem(&l.source, &l.targets)?;
    observe_problem(&p, dev);
    let r = aggregate_verdict(&p, config.budget);
    Ok(match config.format {
        Format::Json => serde_json::to_string(&r.to_json()).expect("JSON values serialize"),
        Format::Text => headline(&r),
    })
}

pub fn run(path: &Path, config: &Config, dev: &mut Recorder) -> u8 {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let mut lines = Vec::new();
    for (i, l) in BufReader::new(file).lines().enumerate() {
        match l {
            Ok(l) if l.trim().is_empty() => {}
            Ok(l) => lines.push((i + 1, l)),
            Err(e) => {
                eprintln!("error: {}: line {}: {e}", path.display(), i + 1);
                return EXIT_USAGE;
            }
        }
    }

    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(lines.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<String, String>)>();
    let mut code = EXIT_OK;
    thread::scope(|s| {
        let mut handles = Vec::new();
        for _ in 0..workers {
            let tx = tx.clone();
            let (lines, next) = (&lines, &next);
            handles.push(s.spawn(move || {
                let mut local = Recorder::default();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some((_, text)) = lines.get(i) else { break };
                    if tx.send((i, process(text, config, &mut local))).is_err() {
                        break;
                    }
                }
                local
            }));
        }
        drop(tx);

        let mut stdout = std::io::stdout().lock();
        let mut pending = BTreeMap::new();
        let mut emitted = 0;
        for (i, res) in rx {
            pending.insert(i, res);
            while let Some(res) = pending.remove(&emitted) {
                match res {
                    Ok(out) => {
                        if writeln!(stdout, "{out}").is_err() {
                            code = EXIT_USAGE;
                        }
                    }
                    Err(msg) => {
                        eprintln!("error: line {}: {msg}", lines[emitted].0);
                        code = EXIT_USAGE;
                    }
                }
                emitted += 1;
            }
        }
        let _ = stdout.flush();
        for h in handles {
            dev.merge(h.join().expect("batch worker panicked"));
        }
    });
    code
}

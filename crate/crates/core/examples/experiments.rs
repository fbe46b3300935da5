//! Running bundled experiment configs from code, as the `framerecon` binary does.
//!
//! `cargo run --release --example experiments [name ...]`

use framerecon::cli::{bundled, execute, list_experiments};

fn main() {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let catalog = list_experiments().expect("bundled configs parse");
    let selected: Vec<String> = if names.is_empty() {
        catalog
            .iter()
            .map(|e| e.name.clone())
            .filter(|n| !n.starts_with("weighted"))
            .collect()
    } else {
        names
    };
    for name in selected {
        let Some(cfg) = bundled(&name) else {
            eprintln!("no bundled experiment named {name}; try one of:");
            for e in &catalog {
                eprintln!("  {}", e.name);
            }
            std::process::exit(2);
        };
        match execute(&cfg) {
            Ok(doc) => {
                println!(
                    "{:<28} passed {:<5} ({:.2}s)",
                    doc.experiment, doc.passed, doc.wall_time_seconds
                );
                for s in &doc.sections {
                    println!("    {:<36} {}", s.key, s.verdict);
                }
            }
            Err(e) => println!("{name:<28} setup error: {e}"),
        }
    }
}

//! Defining a structure in a JSON model file, loading it and writing a
//! built-in model back out.
//!
//! cargo run --example model_files

use separable_poisson::casimir::CasimirSet;
use separable_poisson::models::{instantiate, load_model_file, parse_model, Params};

const FILE: &str = r#"{
  "name": "logistic-exponential",
  "dimension": 3,
  "matrix": [["0", "1/2", "-1"], ["-1/2", "0", "3"], ["1", "-3", "0"]],
  "charts": [
    {"family": "logistic"},
    {"family": "exp", "lambda": "1"},
    {"family": "power", "k": 2}
  ],
  "domain": [[0, 1], ["-inf", "inf"], [0.5, "inf"]],
  "hamiltonian": "x1 + x2^2 + 1/x3"
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_model(FILE, "inline")?;
    let s = m.structure().expect("separable");
    println!("{}: dimension {}, rank {}", m.name, m.dim(), s.rank());
    print!("{}", CasimirSet::new(s));

    let dir = std::env::temp_dir().join("separable-poisson-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("game.json");
    let game = instantiate("two_by_two_game", &Params::new())?;
    std::fs::write(&path, game.to_json())?;
    println!(
        "\n{} written as\n{}",
        game.name,
        std::fs::read_to_string(&path)?
    );
    let back = load_model_file(&path)?;
    println!("reloaded identical: {}", back.kind == game.kind);

    // malformed files are rejected with the offending entries named
    let bad = FILE.replace(r#"["-1/2", "0", "3"]"#, r#"["1/2", "0", "3"]"#);
    println!(
        "\nnon-skew matrix: {}",
        parse_model(&bad, "edited").unwrap_err()
    );
    Ok(())
}

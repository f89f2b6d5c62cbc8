//! Parses a TOML run configuration the way the `qgsw` binary does and prints the result.
//!
//! `cargo run --example run_config -- [path.toml]`

use qgsw::cli::parse_config;

const SAMPLE: &str = r#"
[grid]
n = 64

[sweep]
lambdas = [0.1, 0.05, 0.025]
t_final = 0.5

[sweep.theta_rule]
c = "fit"
alpha = 0.5

[output]
formats = ["csv", "json", "svg"]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    match parse_config(&text) {
        Ok(cfg) => {
            println!("sweep: n = {}, λ = {:?}, T = {}", cfg.sweep.n, cfg.sweep.lambdas, cfg.sweep.t_final);
            println!("solver: {:?}", cfg.sweep.solver);
            println!("patch study: {:?} at n = {}", cfg.patch_preset, cfg.patch_study.n);
            println!("formats: {:?}", cfg.formats);
        }
        Err(e) => println!("rejected: {e}"),
    }
    for typo in ["[sweep]\nlamda = [0.1]\n", "[grid]\nn = 48\n"] {
        println!("{typo:?} → {}", parse_config(typo).unwrap_err());
    }
    Ok(())
}

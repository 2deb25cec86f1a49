//! Drives the `sepois` command line in-process, as the binary would.
//!
//! cargo run --example command_line

use separable_poisson::cli;

fn main() {
    for args in [
        "sepois models",
        "sepois verify --model toda --param N=3 --samples 100 --seed 7",
        "sepois casimirs --model kermack_mckendric --param r=1 --param a=1",
        "sepois darboux --model relativistic_toda --param N=2",
        "sepois simulate --model circle_map --t-end 2 --consistency",
    ] {
        println!("$ {args}");
        let outcome = cli::run(args.split_whitespace());
        print!("{}{}", outcome.stdout, outcome.stderr);
        println!("[exit {}]\n", outcome.code);
    }
}

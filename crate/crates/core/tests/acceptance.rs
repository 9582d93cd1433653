//! One line per acceptance criterion; exits nonzero if any fails.

use qaffine::verify::run_criterion;

fn main() {
    let mut failed = 0;
    for id in 1..=9 {
        let r = run_criterion(id);
        println!("{}", r.line());
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!("    {} residual {} {}", c.anchor, c.residual, c.detail);
        }
        if !r.pass() {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Prints the inequality constants in fixture format.

use vvlab::conorms::suites::{div_curl_suite, embedding_suite, SUITE_SAMPLES, SUITE_SEED};

fn main() -> vvlab::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(32);
    let e = embedding_suite(n, SUITE_SAMPLES, SUITE_SEED)?;
    let d = div_curl_suite(n, SUITE_SAMPLES, SUITE_SEED)?;
    println!("version = 1");
    println!("grid = {n}");
    println!("samples = {SUITE_SAMPLES}");
    println!("seed = {SUITE_SEED:#x}");
    println!("embedding = {:.6}", e.constant());
    println!("div_curl = {:.6}", d.constant());
    Ok(())
}

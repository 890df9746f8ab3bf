//! Greedy support growth on a two-variable Runge-type function sampled on a
//! 21 x 21 grid. Pass `full` to use the dense null space instead of the cascade.

use ndloewner::{fit_adaptive, DataSource, FitOptions, NullspaceMethod};

fn main() -> ndloewner::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic.json");
    let source = DataSource::load(path)?;
    let mut options = FitOptions::default();
    if std::env::args().any(|a| a == "full") {
        options.method = NullspaceMethod::Full;
    }
    let res = fit_adaptive(&source, 1e-6, &options)?;
    for it in &res.log.iterations {
        println!(
            "iter {}: columns {:?} flops {} error {:.3e} added {:?}",
            it.iteration, it.columns, it.flops, it.max_error, it.added
        );
    }
    println!("converged: {} {:?}", res.converged, res.warnings);
    Ok(())
}

//! Two variables: fit s^2 t/(s - t + 1), build its Lagrange-basis realization,
//! compress it and export both the model and the realization as JSON.

use ndloewner::{build_realization, fit_direct, Complex64, DataSource, FitOptions, VariableSplit};

fn main() -> ndloewner::Result<()> {
    let source = DataSource::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/two_variable.json"
    ))?;
    let fit = fit_direct(
        &source,
        &FitOptions {
            degrees: Some(vec![2, 1]),
            ..FitOptions::default()
        },
    )?;
    println!(
        "weights {:?}",
        fit.model.weights().iter().map(|z| z.re).collect::<Vec<_>>()
    );

    let real = build_realization(&fit.model, &VariableSplit::first_variable(2))?;
    let compressed = real.compress();
    println!(
        "realization size {}, compressed {}",
        real.size(),
        compressed.size()
    );

    let x = [Complex64::new(0.3, 0.1), Complex64::new(2.2, -0.4)];
    let truth = x[0] * x[0] * x[1] / (x[0] - x[1] + 1.0);
    println!("truth      {truth}");
    println!("model      {}", fit.model.eval(&x)?);
    println!("full       {}", real.eval(&x)?);
    println!("compressed {}", compressed.eval(&x)?);
    println!(
        "Phi at {x:?}:\n{}",
        real.phi(&x)?.map(|z| (z.re * 1e6).round() / 1e6)
    );

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("two_variable_model.json"), fit.model.to_json()?)?;
    std::fs::write(dir.join("two_variable_realization.json"), real.to_json()?)?;
    println!("wrote model and realization to {}", dir.display());
    Ok(())
}

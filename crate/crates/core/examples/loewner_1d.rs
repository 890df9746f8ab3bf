//! One variable: Loewner matrix, barycentric weights and a three-state realization
//! of (s^2 + 4)/(s + 1).

use ndloewner::loewner::{build_loewner_1d, DEFAULT_REL_TOL};
use ndloewner::{
    build_realization, fit_direct, nullspace_vector, Complex64, DataSource, FitOptions,
    NullspaceMethod, VariableSplit,
};

fn main() -> ndloewner::Result<()> {
    let h = |s: f64| Complex64::new((s * s + 4.0) / (s + 1.0), 0.0);
    let lam = [1.0, 3.0, 5.0];
    let mu = [2.0, 4.0, 6.0, 8.0];
    let re = |xs: &[f64]| {
        xs.iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect::<Vec<_>>()
    };
    let w: Vec<Complex64> = lam.iter().map(|&s| h(s)).collect();
    let v: Vec<Complex64> = mu.iter().map(|&s| h(s)).collect();

    let l = build_loewner_1d(&re(&lam), &w, &re(&mu), &v)?;
    println!("Loewner matrix:\n{}", l.map(|z| z.re));
    let ns = nullspace_vector(&l, DEFAULT_REL_TOL)?;
    println!(
        "rank {} of {}; weights {:?}",
        ns.rank,
        l.ncols(),
        ns.vector.iter().map(|z| z.re).collect::<Vec<_>>()
    );

    let source = DataSource::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/one_variable.json"
    ))?;
    let fit = fit_direct(
        &source,
        &FitOptions {
            method: NullspaceMethod::Full,
            ..FitOptions::default()
        },
    )?;
    println!("detected degree {:?}", fit.degrees);
    let real = build_realization(&fit.model, &VariableSplit::first_variable(1))?;
    let zero = [Complex64::new(0.0, 0.0)];
    println!(
        "H(0) from the model {}, from the {}-state realization {}",
        fit.model.eval(&zero)?,
        real.size(),
        real.eval(&zero)?
    );
    Ok(())
}

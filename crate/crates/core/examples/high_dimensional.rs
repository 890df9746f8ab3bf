//! Eight variables, 14580 barycentric weights: the dense Loewner matrix would
//! need 3.2 GiB and is refused, while the cascade solves small problems only.

use ndloewner::{
    fit_direct, Complex64, DataSource, Error, FitOptions, NullspaceMethod, Oracle, VariableGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXPRESSION: &str = "(3*x1^3 + 4*x2^2*x8 + x3*x4 + x5^2 + x6 + x7^2) / \
     (x1^4 + x2^3 + x3^2 + x4^2*x5 + x5 + pi*x6^2 + x7 + x8^2 + 20)";

fn main() -> ndloewner::Result<()> {
    let degrees = vec![4, 3, 2, 2, 2, 2, 2, 2];
    let grids = degrees
        .iter()
        .enumerate()
        .map(|(l, &d)| {
            let k = d + 1;
            let step = 1.5 / (2 * k) as f64;
            let lam: Vec<f64> = (0..k).map(|i| 0.5 + 2.0 * i as f64 * step).collect();
            let mu: Vec<f64> = (0..k)
                .map(|i| 0.5 + (2.0 * i as f64 + 1.0) * step)
                .collect();
            VariableGrid::real(format!("x{}", l + 1), &lam, &mu)
        })
        .collect::<ndloewner::Result<Vec<_>>>()?;
    let oracle = Oracle::new(grids, EXPRESSION)?;
    let source = DataSource::Oracle(oracle.clone());

    let full = FitOptions {
        method: NullspaceMethod::Full,
        degrees: Some(degrees.clone()),
        ..FitOptions::default()
    };
    match fit_direct(&source, &full) {
        Err(e @ Error::MemoryGuard { .. }) => println!("dense method: {e}"),
        other => println!(
            "dense method unexpectedly returned {:?}",
            other.map(|f| f.degrees)
        ),
    }

    let start = std::time::Instant::now();
    let fit = fit_direct(
        &source,
        &FitOptions {
            degrees: Some(degrees),
            ..FitOptions::default()
        },
    )?;
    println!(
        "cascade: {} weights, {} flops (dense would be {}), {:.2?}",
        fit.model.weights().len(),
        fit.report.cascaded_flops,
        fit.report.full_flops,
        start.elapsed()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let x: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.random_range(0.5..2.0), 0.0))
            .collect();
        worst = worst.max((fit.model.eval(&x)? - oracle.evaluate(&x)?).norm());
    }
    println!("largest absolute error at 50 random points: {worst:.2e}");
    Ok(())
}

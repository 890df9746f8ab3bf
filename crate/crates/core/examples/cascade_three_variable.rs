//! Three variables: the cascaded null space in two variable orders against the
//! dense Loewner matrix, with the realization sizes of two variable splits.

use ndloewner::cascade::{cascaded_nullspace, flop_full, CascadeOptions};
use ndloewner::loewner::{leading_selection, DEFAULT_REL_TOL};
use ndloewner::{
    build_loewner_nd, build_realization, fit_direct, nullspace_vector, DataSource, FitOptions,
    VariableSplit,
};

fn main() -> ndloewner::Result<()> {
    let source = DataSource::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/three_variable.json"
    ))?;
    let ks = [2, 2, 3];
    let selection = leading_selection(&source, &ks)?;

    let dense = build_loewner_nd(&source, &selection, None)?;
    let ns = nullspace_vector(&dense.matrix, DEFAULT_REL_TOL)?;
    let last = *ns.vector.last().unwrap();
    println!(
        "dense {}x{}: rank {}, {} flops",
        dense.matrix.nrows(),
        dense.matrix.ncols(),
        ns.rank,
        flop_full(&ks)
    );
    println!(
        "  c = {:?}",
        ns.vector.iter().map(|z| (z / last).re).collect::<Vec<_>>()
    );

    for order in [vec![0, 1, 2], vec![2, 1, 0]] {
        let res = cascaded_nullspace(
            &source,
            &selection,
            &CascadeOptions {
                order: order.clone(),
                anchors: None,
                rel_tol: DEFAULT_REL_TOL,
            },
        )?;
        let last = *res.vector.last().unwrap();
        println!("cascade order {order:?}: {} flops", res.flops);
        println!(
            "  c = {:?}",
            res.vector.iter().map(|z| (z / last).re).collect::<Vec<_>>()
        );
    }

    let fit = fit_direct(
        &source,
        &FitOptions {
            degrees: Some(vec![1, 1, 2]),
            ..FitOptions::default()
        },
    )?;
    for (right, left) in [(vec![0, 1], vec![2]), (vec![0], vec![1, 2])] {
        let real = build_realization(
            &fit.model,
            &VariableSplit {
                right: right.clone(),
                left: left.clone(),
            },
        )?;
        println!(
            "split {right:?}|{left:?}: m = {}, compressed {}",
            real.size(),
            real.compress().size()
        );
    }
    Ok(())
}

//! The cascade factors the weights of a three-variable function into one
//! short vector per variable; multiplying them back gives the full vector.

use ndloewner::cascade::{cascaded_nullspace, CascadeOptions};
use ndloewner::loewner::{leading_selection, DEFAULT_REL_TOL};
use ndloewner::DataSource;

fn main() -> ndloewner::Result<()> {
    let source = DataSource::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/separable.json"))?;
    let selection = leading_selection(&source, &[3, 2, 2])?;
    let res = cascaded_nullspace(
        &source,
        &selection,
        &CascadeOptions {
            order: vec![0, 1, 2],
            anchors: None,
            rel_tol: DEFAULT_REL_TOL,
        },
    )?;
    let names = source.names();
    for (level, blocks) in res.weights.levels.iter().enumerate() {
        let var = &names[res.weights.order[level]];
        for (b, block) in blocks.iter().enumerate() {
            println!(
                "{var} block {b}: {:?}",
                block.iter().map(|z| z.re).collect::<Vec<_>>()
            );
        }
    }
    // 29 is the common denominator of the weights.
    println!(
        "29 c = {:?}",
        res.vector
            .iter()
            .map(|z| (29.0 * z.re).round())
            .collect::<Vec<_>>()
    );
    println!(
        "recombination exact: {}",
        res.weights.recombine() == res.vector
    );
    Ok(())
}

//! Cost and storage of the cascaded and dense null-space methods for a few
//! degree vectors, including the twenty-variable case.

use ndloewner::cascade::{
    flop_worst_case, format_bytes, memory_estimate, optimal_variable_order, FlopReport,
};

fn main() {
    let cases: [(&str, Vec<usize>); 5] = [
        ("two variables", vec![2, 1]),
        ("three variables", vec![1, 1, 2]),
        ("six variables", vec![19, 5, 3, 5, 7, 1]),
        ("synthetic final step", vec![4, 3]),
        (
            "twenty variables",
            vec![10, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 1, 1, 1, 1],
        ),
    ];
    for (label, degrees) in cases {
        let ks: Vec<usize> = degrees.iter().map(|d| d + 1).collect();
        let natural: Vec<usize> = (0..ks.len()).collect();
        let given = FlopReport::new(&ks, &natural);
        let best = FlopReport::new(&ks, &optimal_variable_order(&ks));
        let mem = memory_estimate(&ks);
        println!("{label} {degrees:?}");
        println!(
            "  cascade {} flops as given, {} in decreasing order; dense {}",
            given.cascaded_flops, best.cascaded_flops, given.full_flops
        );
        println!(
            "  memory: dense {}, cascade {}",
            format_bytes(mem.full_bytes),
            format_bytes(mem.cascaded_bytes)
        );
    }
    println!("worst case k=2, n=20: {} flops", flop_worst_case(2, 20));
}

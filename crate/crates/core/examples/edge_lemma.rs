//! Non-overlapping edge sets on a path and the signed weight identity.

use qverify::catalog::{edge_weight, enumerate_edge_sets, random_tuples, verify_chu_collapse, verify_edge_lemma};
use qverify::suite::report_text;

fn main() {
    let s = [4, 2, 1];
    for e in enumerate_edge_sets(3) {
        println!("E = {:?}: wt = {}", e.edges, edge_weight(&e, &s));
    }
    for j in 0..=10 {
        println!("j = {j:>2}: {} edge sets", enumerate_edge_sets(j).len());
    }
    let samples = random_tuples(8, 50, 1);
    println!("{}", report_text(&verify_edge_lemma(8, &samples)));
    println!("alternating binomial sums collapse for j <= 20: {}", (0..=20).all(verify_chu_collapse));
}

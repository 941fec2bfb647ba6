//! The two Rogers-Ramanujan identities, checked against partition counts.

use qverify::catalog::{ag_product_specs, ag_sum_spec};
use qverify::oracle::{count_gap_partitions, count_partitions_in_residues};
use qverify::product::eval_product_sum;
use qverify::summation::eval_multisum;
use qverify::HalfInt;

fn main() -> qverify::Result<()> {
    let order = HalfInt::from_int(40);
    for r in 0..=1u32 {
        let sum = eval_multisum(&ag_sum_spec(1, r), order)?;
        let product = eval_product_sum(&ag_product_specs(1, r), order)?;
        let cmp = sum.value.eq_upto(&product);
        println!("r = {r}: sum side {} terms, equal through q^{}: {}", sum.tuple_count, cmp.compared_order, cmp.equal);

        let residues: &[u32] = if r == 0 { &[1, 4] } else { &[2, 3] };
        for n in [10u32, 20, 39] {
            let c = sum.value.coeff_q(n as i64).unwrap();
            println!(
                "  q^{n:<2}: series {c}, gap partitions {}, residue partitions {}",
                count_gap_partitions(n, 1, r)?,
                count_partitions_in_residues(n, 5, residues)
            );
        }
    }
    Ok(())
}

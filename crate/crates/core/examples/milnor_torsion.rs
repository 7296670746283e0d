// Torsion of based integer complexes, computed from a chain contraction and
// compared against the alternating product of homology orders.

use padent::quotients::{IntMatrix, IntegerComplex};
use padent::torsion::{torsion_rational, BasedComplex};

pub fn main() -> padent::Result<()> {
    // Z --6--> Z
    let c = BasedComplex::from_complex(IntegerComplex::new(vec![IntMatrix::from_rows(&[vec![6]])?])?);
    let r = torsion_rational(&c)?;
    println!("[[6]]: torsion {} vs homology product {}", r.torsion_abs, r.homology_product);

    // A hidden normal form: blocks diag(2, 3), diag(6), diag(1, 2), then
    // elementary basis changes that scramble it.
    let moves = [(0, 0, 1, 1), (1, 2, 0, -2), (2, 1, 0, 3), (1, 0, 1, 1)];
    let c = BasedComplex::normal_form(&[vec![2, 3], vec![6], vec![1, 2]], &moves)?;
    for (i, d) in c.complex().boundaries().iter().enumerate() {
        println!("d_{} = {:?}", i + 1, d.to_rows());
    }
    let r = torsion_rational(&c)?;
    println!(
        "torsion {} (alternate pivots {}), homology orders {:?}, match = {}",
        r.torsion_abs,
        r.torsion_alt,
        r.homology_orders.iter().map(ToString::to_string).collect::<Vec<_>>(),
        r.matches
    );
    Ok(())
}

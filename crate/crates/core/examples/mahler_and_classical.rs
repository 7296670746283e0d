use padent::entropy::{classical_entropy_periodic, entropy_compare, mahler_measure};
use padent::quotients::{FreeResolution, SubgroupSequence};
use padent::ring::{parse_poly, LaurentMatrix};

pub fn main() -> padent::Result<()> {
    for f in ["t - 2", "4 - 3*t", "t^2 - t - 1", "3 + t1 + t2", "1 + t1 + t2"] {
        let m = mahler_measure(&parse_poly(f, None)?)?;
        println!("m({f}) = {:.10}  (grid {}, converged {})", m.value, m.grid, m.converged);
    }

    let f = parse_poly("t^2 - t - 1", None)?;
    let res = FreeResolution::principal(LaurentMatrix::scalar(f.clone()))?;
    let c = classical_entropy_periodic(&res, &SubgroupSequence::diagonal(1, 1..=24)?)?;
    for row in c.rows.iter().step_by(4) {
        println!("n = {:>2}  (1/n) log |chi| = {:.10}", row.index, row.value);
    }

    let r = entropy_compare(&parse_poly("4 - 3*t", None)?, 3, &SubgroupSequence::diagonal(1, 1..=12)?, 20)?;
    println!("4 - 3t: h = {:.10}, h_3 = {}", r.h, r.h_p.map_or("none".into(), |h| h.to_string()));
    Ok(())
}

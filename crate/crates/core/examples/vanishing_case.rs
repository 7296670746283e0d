// t - 2 over p = 2: the classical entropy is log 2, while the 2-adic entropy
// is exactly zero since |X_n| = 2^n - 1 is a 1-unit.

use padent::entropy::{classical_entropy_periodic, mahler_measure, padic_entropy, CountMode};
use padent::quotients::{FreeResolution, SubgroupSequence};
use padent::ring::{parse_poly, LaurentMatrix};

pub fn main() -> padent::Result<()> {
    let f = parse_poly("t - 2", None)?;
    let res = FreeResolution::principal(LaurentMatrix::scalar(f.clone()))?;

    let r = padic_entropy(&res, 2, &SubgroupSequence::diagonal(1, 1..=12)?, 20, CountMode::Euler)?;
    for l in &r.convergence.levels {
        println!("n = {:>2}  renormalized log = {}", l.index, l.value);
    }
    // The last level is only known to be 0 modulo 2^(n - v_2(n)).
    if let Some(h) = &r.entropy {
        println!("h_2 by the limit:  0 mod 2^{}", h.valuation());
    }
    println!("h_2 by the series: {}", r.series_route.map_or("none".into(), |h| h.to_string()));

    let c = classical_entropy_periodic(&res, &SubgroupSequence::diagonal(1, 1..=30)?)?;
    println!("classical estimate at n = 30: {:.12}", c.estimate);
    println!("Mahler measure:               {:.12}", mahler_measure(&f)?.value);
    Ok(())
}

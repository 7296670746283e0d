// For f = 4 - 3t and p = 3 the renormalized logs of |Z[t^±1]/(f, t^n - 1)|
// converge to log_3(4), which is also log_3 det of f by the series route.

use padent::padic::{limit_checker, padic_log, PadicNumber};
use padent::padic_det::logdet_matrix;
use padent::quotients::{euler_characteristic, FreeResolution, SubgroupSequence};
use padent::ring::{parse_poly, LaurentMatrix};

pub fn main() -> padent::Result<()> {
    let (p, k) = (3, 20);
    let f = LaurentMatrix::scalar(parse_poly("4 - 3*t", None)?);
    let res = FreeResolution::principal(f.clone())?;
    let seq = SubgroupSequence::diagonal(1, 1..=12)?;

    let mut pairs = Vec::new();
    for delta in seq.levels() {
        pairs.push((delta.index().into(), euler_characteristic(&res, delta)?));
    }
    let report = limit_checker(&pairs, p, k)?;
    let target = padic_log(&PadicNumber::from_i64(4, p, k))?;
    for (level, (n, chi)) in report.levels.iter().zip(&pairs) {
        let v = level.value.valuation_of_difference(&target)?;
        println!("n = {n:>2}  chi = {chi:>8}  v_3(level - log 4) = {v}");
    }

    let series = logdet_matrix(&f, p, k)?.determinant_route;
    println!("limit:  {}", report.extrapolated.map_or("not Cauchy".into(), |x| x.to_string()));
    println!("series: {series}");
    Ok(())
}

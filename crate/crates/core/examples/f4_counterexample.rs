// Z[t^±1]/(2, t^2 + t + 1) is the field with four elements, t acting by a
// generator of its multiplicative group. Renormalized fixed-point counts do
// not converge p-adically; renormalized Euler characteristics do, to 0.

use padent::entropy::{padic_entropy, CountMode};
use padent::quotients::{euler_characteristic, fixed_points_count, koszul_resolution, SubgroupSequence};
use padent::ring::{parse_poly, LaurentPoly};

pub fn main() -> padent::Result<()> {
    let m = koszul_resolution(&[LaurentPoly::constant(1, 2), parse_poly("t^2 + t + 1", None)?])?;
    let seq = SubgroupSequence::diagonal(1, (1..=6).map(|n| 3 * n))?;

    println!("{:>6} {:>6} {:>6}", "index", "|X|", "chi");
    for delta in seq.levels() {
        let x = fixed_points_count(&m, delta)?;
        let chi = euler_characteristic(&m, delta)?;
        println!("{:>6} {:>6} {:>6}", delta.index(), x, chi);
    }

    for p in [3, 5] {
        let euler = padic_entropy(&m, p, &seq, 12, CountMode::Euler)?;
        let fixed = padic_entropy(&m, p, &seq, 12, CountMode::FixedPoints)?;
        println!(
            "p = {p}: Euler count gives {}, fixed-point count is {}",
            euler.entropy.map_or("no limit".into(), |h| h.to_string()),
            if fixed.convergence.cauchy { "Cauchy" } else { "not Cauchy" },
        );
    }
    Ok(())
}

use padent::expansive::{check_classical_n1, check_finite_module_padic, check_principal_padic, DEFAULT_TOLERANCE};
use padent::ring::{parse_poly, LaurentMatrix, LaurentPoly};

pub fn main() -> padent::Result<()> {
    for (f, p) in [("t - 2", 2), ("t - 2", 3), ("4 - 3*t", 3), ("9 + 3*t", 3), ("3 + t1 + t2", 2)] {
        let v = check_principal_padic(&LaurentMatrix::scalar(parse_poly(f, None)?), p)?;
        println!("{f:<12} p = {p}: {:<26} {}", v.kind(), v.witness().unwrap_or(""));
    }

    // Z[t^±1]/(2, t^2 + t + 1) is killed by 2, a unit away from p = 2.
    let ann = [LaurentPoly::constant(1, 2), parse_poly("t^2 + t + 1", None)?];
    for p in [2, 3, 5] {
        println!("F_4, p = {p}: {}", check_finite_module_padic(&ann, p)?.kind());
    }

    for f in ["t - 2", "t^2 + t + 1", "t^2 - t - 1", "2*t^2 - 3*t + 2"] {
        let v = check_classical_n1(&parse_poly(f, None)?, DEFAULT_TOLERANCE)?;
        println!("classical {f:<16} {:<14} {}", v.kind(), v.witness().unwrap_or(""));
    }
    Ok(())
}

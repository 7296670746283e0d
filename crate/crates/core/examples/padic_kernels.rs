use num_bigint::BigInt;
use num_rational::BigRational;
use padent::padic::{component_decomposition, log_rational, padic_exp, padic_log, teichmuller, PadicNumber};

pub fn main() -> padent::Result<()> {
    let k = 12;
    for p in [2u64, 3, 5, 7] {
        let x = BigRational::new(BigInt::from(10), BigInt::from(3));
        let y = BigRational::from_integer(BigInt::from(-21));
        let lhs = log_rational(&(&x * &y), p, k)?;
        let rhs = log_rational(&x, p, k)?.try_add(&log_rational(&y, p, k)?)?;
        println!("p = {p}: log(xy) = {lhs}, log x + log y = {rhs}");

        let n = 1 + if p == 2 { 4 } else { p as i64 } * 17;
        let u = PadicNumber::from_i64(n, p, k);
        let back = padic_exp(&padic_log(&u)?)?;
        println!("        exp(log {n}) agrees with {n} to p^{}: {}", k - 1, back.agrees_to(&u, k as i64 - 1));

        let z = PadicNumber::from_rational(&BigRational::new(BigInt::from(p * p * 6), BigInt::from(5)), p, k)?;
        let d = component_decomposition(&z)?;
        println!(
            "        {}/5 = p^{} * omega({}) * <{}> mod p^{k}",
            p * p * 6,
            d.nu,
            d.teichmuller,
            d.one_unit
        );
        let c = BigInt::from(if p == 2 { 3 } else { 2 });
        println!("        Teichmuller lift of {c} mod p^6: {}", teichmuller(&c, p, 6)?);
    }
    println!("log_2(-1) = {}", log_rational(&BigRational::from_integer((-1).into()), 2, k)?);
    Ok(())
}

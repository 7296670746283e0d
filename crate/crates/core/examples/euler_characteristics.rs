// Euler characteristics of Z[Z^N]/(f) over finite quotients, checked against
// the determinant of multiplication by f on Z[Z^N/Δ].

use padent::quotients::{euler_characteristic, exact_determinant, homology_at, FiniteIndexSubgroup, FreeResolution};
use padent::ring::{parse_poly, LaurentMatrix};

pub fn main() -> padent::Result<()> {
    let f = parse_poly("3 + t1 + t2", None)?;
    let res = FreeResolution::principal(LaurentMatrix::scalar(f.clone()))?;
    let lattices = [vec![vec![2, 0], vec![0, 2]], vec![vec![3, 1], vec![0, 2]], vec![vec![4, 2], vec![0, 3]]];
    for basis in lattices {
        let delta = FiniteIndexSubgroup::from_matrix(&basis)?;
        let chi = euler_characteristic(&res, &delta)?;
        let det = exact_determinant(&delta.quotient().action_matrix(&f)?)?;
        let h = homology_at(&res, &delta)?;
        let orders: Vec<String> = h.degrees.iter().map(|d| d.order.to_string()).collect();
        println!("Δ = {basis:?}: index {}, chi = {chi}, det = {det}, |H_i| = {orders:?}", delta.index());
    }
    Ok(())
}

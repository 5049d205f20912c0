//! Circulant eigen-data, the determinant identity and the factor series.

use bosonic_minent::fock::C64;
use bosonic_minent::theta_multimode::{
    build_circulant_system, series_terms, theta_char_closed, theta_char_laguerre, theta_factor,
};

fn main() -> bosonic_minent::Result<()> {
    let n = 1.0;
    for k in [2usize, 3, 5] {
        let sys = build_circulant_system(k, n)?;
        let target = (n + 1.0f64).powi(k as i32) - n.powi(k as i32);
        println!(
            "k = {k}: product {:.12}, dense {:.12}, (n+1)^k - n^k = {target}",
            sys.determinant_product().re,
            sys.determinant_dense()
        );
        for j in 1..k {
            let f = theta_factor(&sys, j)?;
            let nu = C64::new(0.4, -0.3);
            let series = theta_char_laguerre(&f, nu, series_terms(&f)?)?;
            let closed = theta_char_closed(&sys, j, nu)?;
            println!(
                "  j = {j}: prefactor {:.6}, ratio {:.6}, |series - closed| = {:.1e}",
                f.prefactor,
                f.ratio,
                (series - closed).norm()
            );
        }
    }
    Ok(())
}

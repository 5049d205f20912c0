//! Rényi, von Neumann, Wehrl and Rényi-Wehrl entropies of a noisy Fock state.

use bosonic_minent::channels::{apply_classical_noise, converged_dim, ClassicalNoiseSpec};
use bosonic_minent::entropies::{renyi_entropy, renyi_wehrl_estimate, von_neumann, wehrl_estimate, HusimiRule};
use bosonic_minent::fock::fock_state;
use bosonic_minent::quadrature::QuadratureRule;

fn main() -> bosonic_minent::Result<()> {
    let n = 1.0;
    let dim = converged_dim(3, n);
    let out = apply_classical_noise(
        &fock_state(2, dim)?.to_density(),
        ClassicalNoiseSpec::new(n)?,
        &QuadratureRule::default(),
    )?;
    println!("von Neumann {:.8}", von_neumann(&out)?);
    for z in [0.5, 2.0, 3.0, f64::INFINITY] {
        println!("S_{z} = {:.8}", renyi_entropy(&out, z)?);
    }
    let rule = HusimiRule::auto(&out);
    let w = wehrl_estimate(&out, rule)?;
    println!(
        "Wehrl {:.8} (grid error {:.1e}, minimum 1 + ln 2 = {:.8})",
        w.value,
        w.grid_error,
        1.0 + 2f64.ln()
    );
    for z in [1.5, 2.0] {
        let rw = renyi_wehrl_estimate(&out, z, rule)?;
        println!("Renyi-Wehrl z = {z}: {:.8}", rw.value);
    }
    Ok(())
}

//! The classical-noise channel acting on vacuum and on a Fock state.

use bosonic_minent::channels::{apply_classical_noise, converged_dim, ClassicalNoiseSpec};
use bosonic_minent::entropies::renyi_entropy;
use bosonic_minent::fock::fock_state;
use bosonic_minent::quadrature::QuadratureRule;

fn main() -> bosonic_minent::Result<()> {
    let quad = QuadratureRule::default();
    for n in [0.5, 1.0, 2.0] {
        let spec = ClassicalNoiseSpec::new(n)?;
        let dim = converged_dim(2, n);
        let vac = apply_classical_noise(&fock_state(0, dim)?.to_density(), spec, &quad)?;
        let one = apply_classical_noise(&fock_state(1, dim)?.to_density(), spec, &quad)?;
        println!(
            "n = {n}: vacuum S_2 = {:.8} (ln(2n+1) = {:.8}), |1> S_2 = {:.8}, mean photons {:.6}",
            renyi_entropy(&vac, 2.0)?,
            (2.0 * n + 1.0).ln(),
            renyi_entropy(&one, 2.0)?,
            one.mean_photon_number()
        );
    }
    Ok(())
}

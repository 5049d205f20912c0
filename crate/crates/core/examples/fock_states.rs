//! Coherent, Fock and thermal states on a truncated Fock space.

use bosonic_minent::fock::{
    coherent_dim, coherent_state, displacement_matrix, fock_state, thermal_dim, thermal_state, C64,
};

fn main() -> bosonic_minent::Result<()> {
    let alpha = C64::new(1.2, -0.5);
    let dim = coherent_dim(alpha);
    let psi = coherent_state(alpha, dim)?;
    println!(
        "|alpha> with alpha = {alpha}: cutoff {dim}, tail mass {:.2e}",
        psi.tail_mass()
    );

    let rho = psi.to_density();
    println!(
        "<a> = {:.6}, <n> = {:.6}",
        rho.mean_amplitude(),
        rho.mean_photon_number()
    );

    // D(alpha)|0> on a roomier space reproduces the coherent state.
    let big = dim + 30;
    let displaced = displacement_matrix(alpha, big)?.apply(&fock_state(0, big)?)?;
    let overlap = coherent_state(alpha, big)?.amplitudes().dotc(&displaced).norm();
    println!("|<alpha|D(alpha)|0>| = {overlap:.12}");

    let nbar = 0.8;
    let tau = thermal_state(nbar, thermal_dim(nbar))?;
    println!(
        "thermal nbar = {nbar}: cutoff {}, purity {:.6} (exact {:.6})",
        tau.dim(),
        tau.purity(),
        1.0 / (2.0 * nbar + 1.0)
    );
    Ok(())
}

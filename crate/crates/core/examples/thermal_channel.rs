//! Thermal-noise channel and its factorisation into loss followed by classical noise.

use bosonic_minent::channels::{apply_thermal_noise, verify_composition, ThermalNoiseSpec};
use bosonic_minent::entropies::renyi_entropy;
use bosonic_minent::fock::{coherent_state, thermal_dim, C64};

fn main() -> bosonic_minent::Result<()> {
    let rho = coherent_state(C64::new(0.9, 0.3), 50)?.to_density();
    for (eta, n_env) in [(0.3, 1.0), (0.7, 0.5), (0.5, 2.0)] {
        let spec = ThermalNoiseSpec::new(eta, n_env)?;
        let out = apply_thermal_noise(&rho, spec, thermal_dim(n_env))?;
        println!(
            "eta = {eta}, N = {n_env}: S_2 = {:.8}, ln(2(1-eta)N+1) = {:.8}, composition deviation {:.2e}",
            renyi_entropy(&out, 2.0)?,
            (2.0 * spec.effective_noise() + 1.0).ln(),
            verify_composition(&rho, spec)?
        );
    }
    Ok(())
}

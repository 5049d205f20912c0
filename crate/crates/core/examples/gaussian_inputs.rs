//! Squeezed-state inputs: the output entropy is smallest at zero squeezing.

use bosonic_minent::channels::ChannelSpec;
use bosonic_minent::minimizer::{gaussian_output_entropy, gaussian_output_photon, minimize_gaussian};

fn main() -> bosonic_minent::Result<()> {
    let channel = ChannelSpec::thermal(0.4, 1.5)?;
    let z = 2.0;
    for s in [0.25, 0.5, 1.0, 2.0, 4.0] {
        println!(
            "s = {s}: n' = {:.6}, S_2 = {:.8}",
            gaussian_output_photon(&channel, s)?,
            gaussian_output_entropy(&channel, z, s)?
        );
    }
    let m = minimize_gaussian(&channel, z)?;
    println!("argmin s = {}, n' = {:.6}, value {:.8}", m.s, m.n_prime, m.value);
    Ok(())
}

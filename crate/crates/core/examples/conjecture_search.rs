//! Multi-start search for an input beating the coherent-state output entropy.

use bosonic_minent::channels::ChannelSpec;
use bosonic_minent::minimizer::{minimize_output_renyi, minimize_output_wehrl, SearchConfig};

fn main() -> bosonic_minent::Result<()> {
    let cfg = SearchConfig::new(3, 6, 42);
    for (channel, z) in [
        (ChannelSpec::classical(1.0)?, 0.7),
        (ChannelSpec::thermal(0.6, 1.0)?, 2.0),
    ] {
        let r = minimize_output_renyi(channel, z, &cfg)?;
        println!(
            "{:?} z = {z}: best {:.8}, coherent {:.8}, gap {:.1e}, violation {}",
            channel, r.best_value, r.coherent_value, r.gap, r.violation
        );
    }
    let r = minimize_output_wehrl(ChannelSpec::classical(1.0)?, &SearchConfig::new(2, 3, 42))?;
    println!(
        "Wehrl: best {:.6}, coherent {:.6}, grid error {:.1e}",
        r.best_value, r.coherent_value, r.truncation_error
    );
    Ok(())
}

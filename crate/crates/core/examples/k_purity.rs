//! Integer-order purity of a classical-noise output, computed two ways, against the bound.

use bosonic_minent::fock::{PureState, C64};
use bosonic_minent::quadrature::QuadratureRule;
use bosonic_minent::theta_multimode::{
    croma_bound, k_purity_direct, k_purity_via_expectation, DEFAULT_EXPECTATION_ORDER,
};
use nalgebra::DVector;

fn main() -> bosonic_minent::Result<()> {
    let n = 0.5;
    let psi = PureState::normalized(DVector::from_vec(vec![
        C64::new(0.6, 0.0),
        C64::new(0.0, 0.5),
        C64::new(0.4, -0.2),
    ]))?;
    for k in [2u32, 3, 4] {
        let direct = k_purity_direct(&psi, n, k, &QuadratureRule::default())?;
        let expect = k_purity_via_expectation(&psi, n, k, DEFAULT_EXPECTATION_ORDER)?;
        println!(
            "k = {k}: direct {direct:.10}, expectation {expect:.10}, bound {:.10}",
            croma_bound(k as usize, n)?
        );
    }
    Ok(())
}

//! Reference solutions and error measurement.

mod cache;
mod norms;
mod profiles;
mod riemann;

pub use cache::{read_reference, write_reference};
pub use norms::{
    l2_error, l2_error_against, observed_order, restrict_to_mesh, sample_field, ErrorNorms, ObservedOrder,
    ROUND_OFF_FLOOR,
};
pub use profiles::{contact_wave_exact, smooth_pulse_init, ContactWave};
pub use riemann::{solve_riemann_isothermal, IsothermalRiemann, Wave};

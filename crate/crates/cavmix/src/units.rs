//! Unit conversions at the boundary of the crate.
//!
//! Internally everything is expressed in natural units with c = 1: lengths
//! and times in metres, frequencies and masses in inverse metres. These
//! helpers convert to and from laboratory units; they are the only place a
//! value of c appears.

/// Speed of light in m/s (exact SI definition).
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// hbar c in eV m, for quoting field masses in eV.
pub const HBAR_C_EV_M: f64 = 1.973_269_804e-7;

/// Angular frequency: 1/m -> rad/s.
pub fn frequency_to_si(omega_per_m: f64) -> f64 {
    omega_per_m * SPEED_OF_LIGHT_M_PER_S
}

/// Angular frequency: rad/s -> 1/m.
pub fn frequency_from_si(omega_per_s: f64) -> f64 {
    omega_per_s / SPEED_OF_LIGHT_M_PER_S
}

/// Rate (inverse time): 1/m -> 1/s. Same scaling as a frequency.
pub fn rate_to_si(rate_per_m: f64) -> f64 {
    rate_per_m * SPEED_OF_LIGHT_M_PER_S
}

/// Duration: m -> s.
pub fn time_to_si(tau_m: f64) -> f64 {
    tau_m / SPEED_OF_LIGHT_M_PER_S
}

/// Duration: s -> m.
pub fn time_from_si(t_s: f64) -> f64 {
    t_s * SPEED_OF_LIGHT_M_PER_S
}

/// Angular frequency in rad/s -> revolutions per minute.
pub fn angular_si_to_rpm(omega_per_s: f64) -> f64 {
    omega_per_s * 60.0 / std::f64::consts::TAU
}

/// Angular frequency in 1/m -> revolutions per minute.
pub fn frequency_to_rpm(omega_per_m: f64) -> f64 {
    angular_si_to_rpm(frequency_to_si(omega_per_m))
}

/// Angular frequency in rad/s -> cyclic frequency in Hz.
pub fn angular_si_to_hz(omega_per_s: f64) -> f64 {
    omega_per_s / std::f64::consts::TAU
}

/// Field mass quoted in eV -> 1/m (divides by hbar c).
pub fn mass_ev_to_per_m(mass_ev: f64) -> f64 {
    mass_ev / HBAR_C_EV_M
}

//! CODATA 2018 values (SI units).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Elementary charge, C (also J per eV).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Debye, C·m.
pub const DEBYE: f64 = 3.335_640_952e-30;

pub const TWO_PI: f64 = std::f64::consts::TAU;

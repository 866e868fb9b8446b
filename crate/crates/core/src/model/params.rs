use crate::error::{Error, Result};

/// Rates and frequencies of the emitter–cavity system, all as ordinary
/// frequencies in Hz.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    /// Emitter–cavity coupling g.
    pub g: f64,
    /// Cavity energy decay rate κ.
    pub kappa: f64,
    /// Bare spontaneous emission rate Γ₀.
    pub gamma0: f64,
    /// Pure dephasing rate Γ_d.
    pub gamma_d: f64,
    /// Spectral diffusion: the transition frequency is Gaussian distributed with FWHM 2Γ_sd.
    pub gamma_sd: f64,
    /// Emitter transition frequency ω_a.
    pub omega_a: f64,
    /// Fraction of cavity loss into the bus waveguide.
    pub eta_cav: f64,
    /// Cavity–emitter detuning Δ_ac = ω_c - ω_a.
    pub delta_ac: f64,
}

impl SystemParams {
    /// `2π × (42.4 MHz, 5.22 GHz, 169.3 kHz, 0.645 GHz, 1.69 GHz)` for the
    /// rates, ω_a = 2π × 226.141974 THz, η_cav = 0.358, on resonance.
    pub fn reference() -> Self {
        Self {
            g: 42.4e6,
            kappa: 5.22e9,
            gamma0: 169.3e3,
            gamma_d: 0.645e9,
            gamma_sd: 1.69e9,
            omega_a: 226.141_974e12,
            eta_cav: 0.358,
            delta_ac: 0.0,
        }
    }

    /// Cavity frequency ω_c.
    pub fn omega_c(&self) -> f64 {
        self.omega_a + self.delta_ac
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma0", self.gamma0),
            ("gamma_d", self.gamma_d),
            ("gamma_sd", self.gamma_sd),
            ("omega_a", self.omega_a),
            ("eta_cav", self.eta_cav),
            ("delta_ac", self.delta_ac),
        ];
        if let Some((k, _)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{k} must be finite")));
        }
        for (k, v) in [("kappa", self.kappa), ("gamma0", self.gamma0), ("omega_a", self.omega_a)] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{k} must be positive, got {v}")));
            }
        }
        for (k, v) in [("g", self.g), ("gamma_d", self.gamma_d), ("gamma_sd", self.gamma_sd)] {
            if v < 0.0 {
                return Err(Error::InvalidParameter(format!("{k} must be non-negative, got {v}")));
            }
        }
        if !(0.0..=0.5).contains(&self.eta_cav) {
            return Err(Error::InvalidParameter(format!(
                "eta_cav must lie in [0, 0.5] (under-coupled), got {}",
                self.eta_cav
            )));
        }
        if self.g >= self.kappa {
            log::warn!(
                "g = {:.3e} Hz is not below kappa = {:.3e} Hz; outside the bad-cavity regime",
                self.g,
                self.kappa
            );
        }
        Ok(())
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// Pulsed resonant excitation and detection window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSpec {
    /// Optical power at the cavity input, W.
    pub p_in: f64,
    /// Laser frequency ω_L, Hz.
    pub omega_l: f64,
    /// Rectangular pulse length, s.
    pub pulse_width: f64,
    pub repetition_period: f64,
    /// Dead time after the pulse before detection starts, s.
    pub t0: f64,
    /// Overall detection efficiency.
    pub eta_sys: f64,
}

impl DriveSpec {
    /// 17 nW at ω_a of [`SystemParams::reference`], 900 ns pulses every 8 μs,
    /// t₀ = 170 ns, η_sys = 0.091.
    pub fn reference() -> Self {
        Self {
            p_in: 17e-9,
            omega_l: SystemParams::reference().omega_a,
            pulse_width: 900e-9,
            repetition_period: 8e-6,
            t0: 170e-9,
            eta_sys: 0.091,
        }
    }

    /// Start of the collection window.
    pub fn window_start(&self) -> f64 {
        self.pulse_width + self.t0
    }

    /// Length of the collection window.
    pub fn window_length(&self) -> f64 {
        self.repetition_period - self.window_start()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.p_in >= 0.0 && self.p_in.is_finite()) {
            return bad(format!("p_in must be finite and non-negative, got {}", self.p_in));
        }
        if !(self.omega_l > 0.0 && self.omega_l.is_finite()) {
            return bad(format!("omega_l must be positive, got {}", self.omega_l));
        }
        if !(self.pulse_width > 0.0) {
            return bad(format!("pulse_width must be positive, got {}", self.pulse_width));
        }
        if !(self.t0 >= 0.0) {
            return bad(format!("t0 must be non-negative, got {}", self.t0));
        }
        if !(self.window_length() > 0.0 && self.repetition_period.is_finite()) {
            return bad(format!(
                "pulse_width + t0 ({:e} s) must be shorter than the repetition period ({:e} s)",
                self.window_start(),
                self.repetition_period
            ));
        }
        if !(0.0..=1.0).contains(&self.eta_sys) {
            return bad(format!("eta_sys must lie in [0, 1], got {}", self.eta_sys));
        }
        Ok(())
    }
}

impl Default for DriveSpec {
    fn default() -> Self {
        Self::reference()
    }
}

/// Numerical settings of the master-equation runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimSettings {
    /// Initial photon cutoff.
    pub n_max: usize,
    /// Largest cutoff tried when the top Fock level is too populated.
    pub max_n_max: usize,
    /// Odd number of spectral-diffusion quadrature nodes.
    pub diffusion_points: usize,
    /// Half-span of the quadrature grid in Gaussian standard deviations.
    pub diffusion_span_sigmas: f64,
    /// Trace sampling step, s.
    pub dt_record: f64,
    /// Largest tolerated population of the top Fock level.
    pub truncation_threshold: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            n_max: 4,
            max_n_max: 16,
            diffusion_points: 21,
            diffusion_span_sigmas: 3.5,
            dt_record: 1e-9,
            truncation_threshold: 1e-6,
        }
    }
}

impl SimSettings {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 || self.max_n_max < self.n_max {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= n_max <= max_n_max, got {} and {}",
                self.n_max, self.max_n_max
            )));
        }
        if self.diffusion_points < 1 || self.diffusion_points % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "diffusion_points must be odd, got {}",
                self.diffusion_points
            )));
        }
        if !(self.diffusion_span_sigmas > 0.0) {
            return Err(Error::InvalidParameter("diffusion span must be positive".into()));
        }
        if !(self.dt_record > 0.0) {
            return Err(Error::InvalidParameter("dt_record must be positive".into()));
        }
        if !(self.truncation_threshold > 0.0) {
            return Err(Error::InvalidParameter("truncation threshold must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn references_validate() {
        SystemParams::reference().validate().unwrap();
        DriveSpec::reference().validate().unwrap();
        SimSettings::default().validate().unwrap();
        assert!((DriveSpec::reference().window_length() - 6.93e-6).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_values() {
        let s = SystemParams {
            kappa: -1.0,
            ..SystemParams::reference()
        };
        assert!(s.validate().is_err());
        let s = SystemParams {
            eta_cav: 0.6,
            ..SystemParams::reference()
        };
        assert!(s.validate().is_err());
        let d = DriveSpec {
            pulse_width: 9e-6,
            ..DriveSpec::reference()
        };
        assert!(d.validate().is_err());
        let st = SimSettings {
            diffusion_points: 4,
            ..SimSettings::default()
        };
        assert!(st.validate().is_err());
    }

    #[test]
    fn zero_rates_allowed() {
        let s = SystemParams {
            g: 0.0,
            gamma_d: 0.0,
            gamma_sd: 0.0,
            ..SystemParams::reference()
        };
        s.validate().unwrap();
    }
}

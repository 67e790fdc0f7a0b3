//! Closed-form payoff expressions, transcribed exactly as published.
//!
//! Nothing here is corrected. Where a printed coefficient is suspect, the
//! `*_with` variants take it as an argument so a caller can test alternatives
//! against the simulation; the plain functions always use the printed value.

use std::fmt;

use crate::coins::GameConfig;
use crate::noise::ChannelKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaId {
    Eq15,
    Eq16,
    Eq17,
    Eq18Ad,
    Eq18Dp,
    Eq18Pd,
    Eq19Ad,
    Eq19Dp,
    Eq19Pd,
    Eq20Ad,
    Eq20Dp,
    Eq20Pd,
    Eq21Ad,
    Eq21Dp,
    Eq21Pd,
    ASeriesAd,
    ASeriesDp,
    ASeriesPd,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        use FormulaId::*;
        match self {
            Eq15 => "EQ15",
            Eq16 => "EQ16",
            Eq17 => "EQ17",
            Eq18Ad => "EQ18_AD",
            Eq18Dp => "EQ18_DP",
            Eq18Pd => "EQ18_PD",
            Eq19Ad => "EQ19_AD",
            Eq19Dp => "EQ19_DP",
            Eq19Pd => "EQ19_PD",
            Eq20Ad => "EQ20_AD",
            Eq20Dp => "EQ20_DP",
            Eq20Pd => "EQ20_PD",
            Eq21Ad => "EQ21_AD",
            Eq21Dp => "EQ21_DP",
            Eq21Pd => "EQ21_PD",
            ASeriesAd => "A_SERIES_AD",
            ASeriesDp => "A_SERIES_DP",
            ASeriesPd => "A_SERIES_PD",
        }
    }

    /// Formulas whose coefficients are printed as rounded decimals.
    pub fn is_rounded(self) -> bool {
        use FormulaId::*;
        matches!(self, Eq18Ad | Eq18Dp | Eq21Ad | Eq21Dp | Eq21Pd)
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Absolute tolerance for comparisons against decimal-rounded formulas.
pub const ROUNDED_TOLERANCE: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub formula: FormulaId,
}

/// Angles entering the single-`AAB` expressions. γ and the α phases do not
/// appear in them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AabAngles {
    pub theta: f64,
    pub delta: f64,
    pub phi: [f64; 4],
    pub beta: [f64; 4],
}

impl From<&GameConfig> for AabAngles {
    fn from(cfg: &GameConfig) -> Self {
        Self {
            theta: cfg.coin_a.theta(),
            delta: cfg.coin_a.delta(),
            phi: cfg.coin_b.phi(),
            beta: cfg.coin_b.beta(),
        }
    }
}

impl AabAngles {
    fn cos_sq_phi(&self, i: usize) -> f64 {
        self.phi[i].cos().powi(2)
    }

    /// `cos(2δ + β_i) sin 2φ_i`
    fn phase_term(&self, i: usize) -> f64 {
        (2.0 * self.delta + self.beta[i]).cos() * (2.0 * self.phi[i]).sin()
    }

    /// `−X₁ + X₂ + X₃ − w·X₄` with `X_i = cos(2δ + β_i) sin 2φ_i`.
    fn phase_sum(&self, beta4_weight: f64) -> f64 {
        -self.phase_term(0) + self.phase_term(1) + self.phase_term(2) - beta4_weight * self.phase_term(3)
    }
}

/// Amplitude damping, single `AAB`.
pub fn eq15_ad_aab(a: &AabAngles, p: f64) -> OracleResult {
    let c2 = |i| a.cos_sq_phi(i);
    let x = |i| a.phase_term(i);
    let cos_t = a.theta.cos();
    let poly = 3.0 - 6.0 * p + 4.0 * p * p;
    let sq = (1.0 - p).sqrt();
    let one_m_2p_sq = (1.0 - 2.0 * p).powi(2);

    let head = 3.0 * p + c2(0) - c2(3)
        + p * ((-4.0 + (5.0 - 2.0 * p) * p) * c2(0) + (-1.0 + 2.0 * p) * ((-1.0 + p) * (c2(1) + c2(2)) - p * c2(3)));

    let quartic = p * (-3.0 + 6.0 * p - 4.0 * p * p) * (2.0 * a.phi[0]).cos()
        + p * poly * (2.0 * a.phi[1]).cos()
        + 2.0 * p * poly * c2(2)
        - 2.0 * p * poly * c2(3)
        + (1.0 - p).powf(1.5) * (-x(0) + x(1) + x(2) - x(3));

    let quadratic = -4.0 * p + 2.0 * one_m_2p_sq * (-1.0 + p) * c2(0) - 2.0 * p * poly * c2(1) - 2.0 * p * poly * c2(2)
        + 2.0 * c2(3)
        + 2.0 * one_m_2p_sq * p * c2(3)
        + sq * x(0)
        + sq * (-p * x(0) + (-1.0 + p) * (x(1) + x(2) - x(3)));

    OracleResult {
        value: head + cos_t.powi(4) * quartic + cos_t.powi(2) * quadratic,
        formula: FormulaId::Eq15,
    }
}

/// Suspect coefficients of the depolarizing and phase damping expressions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseFactors {
    /// Multiplier of the `cos 2θ (−cos²φ₁ + cos²φ₄)` term.
    pub cos2theta: f64,
    /// Multiplier of the `cos(2δ + β₄) sin 2φ₄` term.
    pub beta4: f64,
}

impl PhaseFactors {
    pub const EQ16_PRINTED: Self = Self {
        cos2theta: 2.0,
        beta4: 2.0,
    };
    pub const EQ17_PRINTED: Self = Self {
        cos2theta: 1.0,
        beta4: 2.0,
    };
    pub const UNIT: Self = Self {
        cos2theta: 1.0,
        beta4: 1.0,
    };
}

/// Depolarizing, single `AAB`, printed coefficients.
pub fn eq16_dp_aab(a: &AabAngles, p: f64) -> OracleResult {
    eq16_dp_aab_with(a, p, PhaseFactors::EQ16_PRINTED)
}

pub fn eq16_dp_aab_with(a: &AabAngles, p: f64, f: PhaseFactors) -> OracleResult {
    let (s, c) = a.theta.sin_cos();
    let q = -1.0 + p;
    let value = q
        * q
        * (f.cos2theta * (2.0 * a.theta).cos() * (-a.cos_sq_phi(0) + a.cos_sq_phi(3))
            + q * c * c * s * s * a.phase_sum(f.beta4));
    OracleResult {
        value,
        formula: FormulaId::Eq16,
    }
}

/// Phase damping, single `AAB`, printed coefficients.
pub fn eq17_pd_aab(a: &AabAngles, p: f64) -> OracleResult {
    eq17_pd_aab_with(a, p, PhaseFactors::EQ17_PRINTED)
}

pub fn eq17_pd_aab_with(a: &AabAngles, p: f64, f: PhaseFactors) -> OracleResult {
    let (s, c) = a.theta.sin_cos();
    let value = f.cos2theta * (2.0 * a.theta).cos() * (-a.cos_sq_phi(0) + a.cos_sq_phi(3))
        - (1.0 - p).powf(1.5) * c * c * s * s * a.phase_sum(f.beta4);
    OracleResult {
        value,
        formula: FormulaId::Eq17,
    }
}

/// Single-`AAB` expression for a channel. The noiseless case evaluates the
/// amplitude damping expression at `p = 0`.
pub fn aab(a: &AabAngles, p: f64, channel: ChannelKind) -> OracleResult {
    match channel {
        ChannelKind::AmplitudeDamping => eq15_ad_aab(a, p),
        ChannelKind::Depolarizing => eq16_dp_aab(a, p),
        ChannelKind::PhaseDamping => eq17_pd_aab(a, p),
        ChannelKind::None => eq15_ad_aab(a, 0.0),
    }
}

// The repeated-sequence expressions below are p-independent for phase
// damping and equal their p = 0 value there, so the noiseless channel maps
// onto the phase damping row.

/// Repeated `AAB` at the maximum-payoff phases.
pub fn eq18_series_aab(epsilon: f64, p: f64, channel: ChannelKind) -> OracleResult {
    let e = epsilon;
    match channel {
        ChannelKind::AmplitudeDamping => OracleResult {
            value: (1.0 / 60.0) * p + (2.0 / 15.0 - 2.27 * p + 0.27 * p * p) * e,
            formula: FormulaId::Eq18Ad,
        },
        ChannelKind::Depolarizing => OracleResult {
            value: (2.0 / 15.0 - 0.35 * p + 0.24 * p * p) * e,
            formula: FormulaId::Eq18Dp,
        },
        ChannelKind::PhaseDamping | ChannelKind::None => OracleResult {
            value: (2.0 / 15.0) * e,
            formula: FormulaId::Eq18Pd,
        },
    }
}

/// Single `B`.
pub fn eq19_b(epsilon: f64, p: f64, channel: ChannelKind) -> OracleResult {
    match channel {
        ChannelKind::AmplitudeDamping => OracleResult {
            value: (1.0 / 30.0) * (2.0 + p * (-7.0 - 20.0 * epsilon + p * (-29.0 + 22.0 * p))),
            formula: FormulaId::Eq19Ad,
        },
        ChannelKind::Depolarizing => OracleResult {
            value: (3.0 - 4.0 * p).powi(2) / 135.0,
            formula: FormulaId::Eq19Dp,
        },
        ChannelKind::PhaseDamping | ChannelKind::None => OracleResult {
            value: 1.0 / 15.0,
            formula: FormulaId::Eq19Pd,
        },
    }
}

/// `BB`.
pub fn eq20_bb(epsilon: f64, p: f64, channel: ChannelKind) -> OracleResult {
    let e = epsilon;
    match channel {
        ChannelKind::AmplitudeDamping => OracleResult {
            value: (1.0 / 400.0)
                * (13.0 - 2.0 * p * (67.0 + 2.0 * p * (51.0 - 64.0 * p + 22.0 * p * p))
                    + 10.0 * e * (2.0 + p * (-11.0 - 62.0 * p + 44.0 * p * p))),
            formula: FormulaId::Eq20Ad,
        },
        ChannelKind::Depolarizing => OracleResult {
            value: (1.0 / 32400.0) * ((3.0 - 4.0 * p).powi(2) * (117.0 + 180.0 * e + 88.0 * (3.0 - 2.0 * p) * p)),
            formula: FormulaId::Eq20Dp,
        },
        ChannelKind::PhaseDamping | ChannelKind::None => OracleResult {
            value: 13.0 / 400.0 + e / 20.0,
            formula: FormulaId::Eq20Pd,
        },
    }
}

/// `BBB`, decimal coefficients as printed.
pub fn eq21_bbb(epsilon: f64, p: f64, channel: ChannelKind) -> OracleResult {
    let e = epsilon;
    let (p2, p3) = (p * p, p * p * p);
    match channel {
        ChannelKind::AmplitudeDamping => OracleResult {
            value: (0.017 - 0.41 * p - 0.13 * p2 + 0.45 * p3) + (0.03 - 1.11 * p + 0.44 * p2 - 2.66 * p3) * e,
            formula: FormulaId::Eq21Ad,
        },
        ChannelKind::Depolarizing => OracleResult {
            value: (0.017 + 0.01 * p - 0.13 * p2 + 0.10 * p3) + (0.03 + 0.15 * p - 0.73 * p2 + 0.83 * p3) * e,
            formula: FormulaId::Eq21Dp,
        },
        ChannelKind::PhaseDamping | ChannelKind::None => OracleResult {
            value: 0.017 + 0.03 * e,
            formula: FormulaId::Eq21Pd,
        },
    }
}

/// Repeated `A`.
pub fn a_series(epsilon: f64, p: f64, channel: ChannelKind) -> OracleResult {
    match channel {
        ChannelKind::AmplitudeDamping => OracleResult {
            value: -(3.0 / 32.0) * epsilon * p,
            formula: FormulaId::ASeriesAd,
        },
        ChannelKind::Depolarizing => OracleResult {
            value: 0.0,
            formula: FormulaId::ASeriesDp,
        },
        ChannelKind::PhaseDamping | ChannelKind::None => OracleResult {
            value: 0.0,
            formula: FormulaId::ASeriesPd,
        },
    }
}

/// Tolerance to use when comparing a simulated value with `formula`.
pub fn tolerance_for(formula: FormulaId, exact_tol: f64) -> f64 {
    if formula.is_rounded() {
        ROUNDED_TOLERANCE
    } else {
        exact_tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const EPS: f64 = 1.0 / 168.0;

    fn angles() -> AabAngles {
        AabAngles {
            theta: 0.7,
            delta: 1.3,
            phi: [0.2, 0.9, 1.4, 2.5],
            beta: [0.4, 2.2, 3.9, 5.1],
        }
    }

    #[test]
    fn eq15_fully_damped_at_right_angle() {
        let mut a = angles();
        a.theta = FRAC_PI_2;
        let v = eq15_ad_aab(&a, 1.0).value;
        // cos θ = 0 leaves 3 + cos²φ₁ − cos²φ₄ + (−1)cos²φ₁ − cos²φ₄
        assert!((v - (3.0 - 2.0 * a.phi[3].cos().powi(2))).abs() < 1e-12);
    }

    #[test]
    fn eq16_limits() {
        let a = angles();
        assert_eq!(eq16_dp_aab(&a, 1.0).value, 0.0);
        // at p = 1/2 the two terms scale by 1/4 and −1/8 relative to p = 0
        let first = 2.0 * (2.0 * a.theta).cos() * (-a.cos_sq_phi(0) + a.cos_sq_phi(3));
        let (s, c) = a.theta.sin_cos();
        let second = -(c * c * s * s) * a.phase_sum(2.0);
        assert!((eq16_dp_aab(&a, 0.0).value - (first + second)).abs() < 1e-15);
        assert!((eq16_dp_aab(&a, 0.5).value - (first / 4.0 + second / 8.0)).abs() < 1e-15);
    }

    #[test]
    fn eq17_limits() {
        let a = angles();
        let classical = (2.0 * a.theta).cos() * (-a.cos_sq_phi(0) + a.cos_sq_phi(3));
        assert!((eq17_pd_aab(&a, 1.0).value - classical).abs() < 1e-15);
        let mut flat = a;
        flat.theta = 0.0;
        let v = eq17_pd_aab(&flat, 0.37).value;
        assert!((v - (-a.cos_sq_phi(0) + a.cos_sq_phi(3))).abs() < 1e-15);
    }

    #[test]
    fn eq17_is_pi_periodic_in_delta() {
        let mut a = angles();
        for d in [0.1, 0.8, 2.0] {
            a.delta = d;
            let v0 = eq17_pd_aab(&a, 0.5).value;
            a.delta = d + PI;
            assert!((eq17_pd_aab(&a, 0.5).value - v0).abs() < 1e-12);
        }
    }

    #[test]
    fn series_values() {
        use ChannelKind::*;
        assert!((eq18_series_aab(EPS, 0.0, AmplitudeDamping).value - 2.0 / 15.0 * EPS).abs() < 1e-15);
        assert_eq!(eq18_series_aab(EPS, 0.6, PhaseDamping).value, 2.0 / 15.0 * EPS);
        let expected = (1.0 / 60.0) * 0.5 + (2.0 / 15.0 - 2.27 * 0.5 + 0.27 * 0.25) * EPS;
        assert!((eq18_series_aab(EPS, 0.5, AmplitudeDamping).value - expected).abs() < 1e-15);

        assert!((eq19_b(EPS, 0.0, AmplitudeDamping).value - 1.0 / 15.0).abs() < 1e-15);
        assert!((eq19_b(EPS, 0.0, Depolarizing).value - 1.0 / 15.0).abs() < 1e-15);
        assert_eq!(eq19_b(EPS, 0.75, Depolarizing).value, 0.0);
        assert_eq!(eq19_b(EPS, 0.3, PhaseDamping).value, 1.0 / 15.0);

        let pd20 = 13.0 / 400.0 + EPS / 20.0;
        assert_eq!(eq20_bb(EPS, 0.0, PhaseDamping).value, pd20);
        assert!((eq20_bb(EPS, 0.0, AmplitudeDamping).value - pd20).abs() < 1e-15);
        assert!((eq20_bb(EPS, 0.0, Depolarizing).value - pd20).abs() < 1e-15);

        assert_eq!(eq21_bbb(EPS, 0.9, PhaseDamping).value, 0.017 + 0.03 * EPS);
        assert!(eq21_bbb(EPS, 0.0, AmplitudeDamping).formula.is_rounded());

        assert_eq!(a_series(EPS, 0.4, AmplitudeDamping).value, -(3.0 / 32.0) * EPS * 0.4);
        assert_eq!(a_series(EPS, 0.0, AmplitudeDamping).value, 0.0);
        assert_eq!(a_series(EPS, 0.4, Depolarizing).value, 0.0);
    }

    #[test]
    fn phase_damping_rows_ignore_p() {
        for p in [0.0, 0.2, 0.5, 1.0] {
            for f in [eq18_series_aab, eq19_b, eq20_bb, eq21_bbb] {
                let v = f(EPS, p, ChannelKind::PhaseDamping).value;
                assert_eq!(v, f(EPS, 0.0, ChannelKind::PhaseDamping).value);
            }
        }
    }

    #[test]
    fn a_series_is_bilinear() {
        let f = |e, p| a_series(e, p, ChannelKind::AmplitudeDamping).value;
        assert!((f(2.0 * EPS, 0.3) - 2.0 * f(EPS, 0.3)).abs() < 1e-18);
        assert!((f(EPS, 0.6) - 2.0 * f(EPS, 0.3)).abs() < 1e-18);
    }
}

//! Tuned `(U, gamma, eta)` choices for Exp3.G.

use log::warn;

use super::Exp3GParams;
use crate::error::{Error, Result};
use crate::graph::{GraphProfile, Observability};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub explore: Vec<usize>,
    pub gamma: f64,
    pub eta: f64,
    /// Set when the horizon is outside the regime the tuning is meant for.
    pub warning: Option<String>,
}

impl Preset {
    pub fn params(&self) -> Exp3GParams {
        Exp3GParams {
            eta: self.eta,
            gamma: self.gamma,
            explore: self.explore.clone(),
        }
    }
}

/// `gamma = min{(1/(alpha T))^{1/2}, 1/2}`, `eta = 2 gamma`.
pub fn strong_rates(alpha: f64, horizon: u64) -> (f64, f64) {
    let gamma = (1.0 / (alpha * horizon as f64)).sqrt().min(0.5);
    (gamma, 2.0 * gamma)
}

/// `gamma = min{(delta ln K / T)^{1/3}, 1/2}`, `eta = gamma^2 / delta`.
pub fn weak_rates(delta: f64, num_actions: usize, horizon: u64) -> (f64, f64) {
    let gamma = (delta * (num_actions as f64).ln() / horizon as f64).cbrt().min(0.5);
    (gamma, gamma * gamma / delta)
}

fn check_horizon(horizon: u64) -> Result<()> {
    if horizon == 0 {
        Err(Error::invalid("horizon must be positive"))
    } else {
        Ok(())
    }
}

/// Strongly observable graphs: explore over all of `V`.
pub fn preset_strong(profile: &GraphProfile, horizon: u64) -> Result<Preset> {
    check_horizon(horizon)?;
    if profile.class != Observability::StronglyObservable {
        return Err(Error::WrongClass(format!(
            "strong preset needs a strongly observable graph, got {}",
            profile.class
        )));
    }
    if profile.num_vertices < 2 || profile.alpha < 1 {
        return Err(Error::invalid("strong preset needs K >= 2 and alpha >= 1"));
    }
    let (gamma, eta) = strong_rates(profile.alpha as f64, horizon);
    Ok(Preset {
        explore: (0..profile.num_vertices).collect(),
        gamma,
        eta,
        warning: None,
    })
}

/// Weakly observable graphs: explore over a minimum weakly dominating set.
/// Horizons below `K^3 ln K / delta^2` only produce a warning.
pub fn preset_weak(profile: &GraphProfile, horizon: u64) -> Result<Preset> {
    check_horizon(horizon)?;
    if profile.class != Observability::WeaklyObservable {
        return Err(Error::WrongClass(format!(
            "weak preset needs a weakly observable graph, got {}",
            profile.class
        )));
    }
    let delta = profile.delta.unwrap_or(0);
    if delta == 0 {
        return Err(Error::invalid("weak preset needs delta >= 1"));
    }
    let k = profile.num_vertices;
    let kf = k as f64;
    let threshold = kf.powi(3) * kf.ln() / (delta * delta) as f64;
    let warning = ((horizon as f64) < threshold).then(|| {
        let msg = format!(
            "horizon {horizon} is below K^3 ln K / delta^2 = {threshold:.1}; the regret guarantee may not hold"
        );
        warn!("{msg}");
        msg
    });
    let (gamma, eta) = weak_rates(delta as f64, k, horizon);
    Ok(Preset {
        explore: profile.delta_witness.clone(),
        gamma,
        eta,
        warning,
    })
}

/// Loopless clique: `eta = sqrt(ln K / (2T))`, `gamma = 2 eta`, `U = V`.
/// `gamma` is capped at 1 for horizons shorter than `2 ln K`.
pub fn preset_loopless_clique(num_actions: usize, horizon: u64) -> Result<Preset> {
    check_horizon(horizon)?;
    if num_actions < 2 {
        return Err(Error::invalid("loopless clique preset needs K >= 2"));
    }
    let eta = ((num_actions as f64).ln() / (2.0 * horizon as f64)).sqrt();
    let gamma = 2.0 * eta;
    let warning = (gamma > 1.0).then(|| {
        let msg = format!("gamma = {gamma:.3} > 1 at horizon {horizon}; capped at 1");
        warn!("{msg}");
        msg
    });
    Ok(Preset {
        explore: (0..num_actions).collect(),
        gamma: gamma.min(1.0),
        eta,
        warning,
    })
}

/// Uninformed time-varying weakly observable graphs: `U = V` with the weak
/// tuning at `delta = K`.
pub fn preset_uninformed(num_actions: usize, horizon: u64) -> Result<Preset> {
    check_horizon(horizon)?;
    if num_actions < 2 {
        return Err(Error::invalid("uninformed preset needs K >= 2"));
    }
    let (gamma, eta) = weak_rates(num_actions as f64, num_actions, horizon);
    Ok(Preset {
        explore: (0..num_actions).collect(),
        gamma,
        eta,
        warning: None,
    })
}

use crate::params::{ModelParams, SpacetimeError};

/// Hard bound on |Φ|/c².
pub const WEAK_FIELD_LIMIT: f64 = 0.05;
/// |Φ|/c² above which a warning is logged.
pub const WEAK_FIELD_WARNING: f64 = 0.01;

/// Φ(x) = −GM / max(|x|, r_min).
pub fn potential(x: f64, params: &ModelParams) -> f64 {
    if params.gm == 0.0 {
        return 0.0;
    }
    -params.gm / x.abs().max(params.r_min)
}

fn field_ratio(x: f64, params: &ModelParams) -> f64 {
    potential(x, params).abs() / (params.c * params.c)
}

/// Largest |Φ|/c² over the sample points; error above the hard bound.
pub fn check_weak_field(
    xs: impl IntoIterator<Item = f64>,
    params: &ModelParams,
) -> crate::Result<f64> {
    let mut worst = (0.0, 0.0);
    for x in xs {
        let r = field_ratio(x, params);
        if r > worst.0 {
            worst = (r, x);
        }
    }
    let (ratio, x) = worst;
    if ratio > WEAK_FIELD_LIMIT {
        return Err(SpacetimeError::WeakField {
            x,
            ratio,
            limit: WEAK_FIELD_LIMIT,
        });
    }
    if ratio > WEAK_FIELD_WARNING {
        log::warn!("|Phi|/c^2 reaches {ratio:.4} at x = {x}");
    }
    Ok(ratio)
}

/// g₀₀ = 1 + 2Φ/c² at a separation from the source.
pub fn metric_g00(x_rel: f64, params: &ModelParams) -> crate::Result<f64> {
    let ratio = field_ratio(x_rel, params);
    if ratio > WEAK_FIELD_LIMIT {
        return Err(SpacetimeError::WeakField {
            x: x_rel,
            ratio,
            limit: WEAK_FIELD_LIMIT,
        });
    }
    Ok(metric_g00_unchecked(x_rel, params))
}

/// g₀₀ without the weak-field check, for bulk kernel sampling after the
/// grid has been validated once.
pub fn metric_g00_unchecked(x_rel: f64, params: &ModelParams) -> f64 {
    1.0 + 2.0 * potential(x_rel, params) / (params.c * params.c)
}

/// γ = √(1 + k²/(m²c²)).
pub fn gamma_factor(k: f64, m: f64, c: f64) -> f64 {
    let r = k / (m * c);
    (1.0 + r * r).sqrt()
}

/// Δ = √g₀₀(x_rel) / γ(k): proper-time rate of the particle.
pub fn worldline_delta(x_rel: f64, k: f64, m: f64, params: &ModelParams) -> crate::Result<f64> {
    Ok(metric_g00(x_rel, params)?.sqrt() / gamma_factor(k, m, params.c))
}

use crate::error::{Error, Result};

/// Least-squares line through `(log eps, log norm)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
}

/// Fits `log norm = slope * log eps + intercept`. Nonpositive or non-finite
/// norms are dropped with a warning; fewer than three usable pairs is an error.
pub fn fit_rate(eps: &[f64], norms: &[f64]) -> Result<RateFit> {
    if eps.len() != norms.len() {
        return Err(Error::Fit(format!("{} viscosities for {} norms", eps.len(), norms.len())));
    }
    let mut pts = Vec::with_capacity(eps.len());
    for (&e, &n) in eps.iter().zip(norms) {
        if !(e > 0.0) {
            return Err(Error::Fit(format!("viscosity {e} must be positive")));
        }
        if n > 0.0 && n.is_finite() {
            pts.push((e.ln(), n.ln()));
        } else {
            log::warn!("norm {n} at eps = {e:e} excluded from the fit");
        }
    }
    if pts.len() < 3 {
        return Err(Error::Fit(format!("{} usable points, at least 3 needed", pts.len())));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all viscosities coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    // A constant series is fitted exactly.
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(RateFit { slope, intercept, r2, n_points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps() -> Vec<f64> {
        (6..=14).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn exact_power_laws() {
        let e = eps();
        for p in [1.0, 0.75, 0.0] {
            let n: Vec<f64> = e.iter().map(|x| 3.0 * x.powf(p)).collect();
            let f = fit_rate(&e, &n).unwrap();
            assert!((f.slope - p).abs() < 1e-12);
            assert!((f.r2 - 1.0).abs() < 1e-12);
            assert!((f.intercept - 3f64.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn nonpositive_points_dropped() {
        let e = eps();
        let mut n: Vec<f64> = e.iter().map(|x| x.sqrt()).collect();
        n[0] = 0.0;
        n[1] = -1.0;
        let f = fit_rate(&e, &n).unwrap();
        assert_eq!(f.n_points, 7);
        assert!((f.slope - 0.5).abs() < 1e-12);
        let few = vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!(matches!(fit_rate(&e, &few), Err(Error::Fit(_))));
    }
}

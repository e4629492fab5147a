//! Fits the rescaled model to synthetic data and recovers its parameters.

use hiersurf::experiments::{fit_rescaled, l_min};

fn main() -> hiersurf::Result<()> {
    let (alpha, beta, gamma) = (1.6, -1.2, -2.5);
    let mut points = Vec::new();
    for r in [0.25, 0.5, 1.0, 2.0] {
        for l in [3, 5, 7] {
            let ln_e = (alpha * f64::ln(r) + beta) * l as f64 + gamma;
            points.push((r, l, ln_e.exp()));
        }
    }
    let fit = fit_rescaled(&points)?;
    println!("alpha {:.3}  beta {:.3}  gamma {:.3}", fit.alpha.unwrap(), fit.beta.unwrap(), fit.gamma.unwrap());
    println!("eps0 {:.4}  kappa {:.4}", fit.eps0, fit.kappa);
    println!("L needed for 1e-12: {:?}", l_min(fit.eps0, fit.kappa, 1e-12));
    Ok(())
}

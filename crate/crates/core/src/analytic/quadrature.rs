//! Composite Gauss-Legendre quadrature with panel doubling.

use std::sync::OnceLock;

pub const NODES_PER_PANEL: usize = 64;
const MAX_DOUBLINGS: u32 = 12;

/// Nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn rule64() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES_PER_PANEL))
}

fn composite<F, E>(f: &mut F, a: f64, b: f64, panels: usize) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (x, w) = rule64();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + h / 2.0;
        let mut acc = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            acc += wi * f(mid + xi * h / 2.0)?;
        }
        total += acc * h / 2.0;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quadrature<E> {
    Converged(f64),
    NotConverged { last: f64, rel_change: f64 },
    Failed(E),
}

/// Integrates `f` over `[a, b]`, doubling the panel count until two
/// successive estimates agree to `rel_tol`.
pub fn integrate<F, E>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Quadrature<E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut panels = 1;
    let mut prev = match composite(&mut f, a, b, panels) {
        Ok(v) => v,
        Err(e) => return Quadrature::Failed(e),
    };
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = match composite(&mut f, a, b, panels) {
            Ok(v) => v,
            Err(e) => return Quadrature::Failed(e),
        };
        change = if next == 0.0 {
            (next - prev).abs()
        } else {
            ((next - prev) / next).abs()
        };
        prev = next;
        if change < rel_tol {
            return Quadrature::Converged(next);
        }
    }
    Quadrature::NotConverged {
        last: prev,
        rel_change: change,
    }
}

//! Fixed-order Gaussian quadrature rules.
//!
//! Nodes are found by Newton iteration on the three-term recurrences of the
//! Legendre and Laguerre polynomials. Rules are built once per order and
//! cached for the lifetime of the process.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-14;
const MAX_NEWTON: usize = 100;

/// Nodes and weights of a Gauss rule on its reference domain.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre(Arc<GaussRule>);

/// Gauss-Laguerre rule for `∫_0^∞ f(x) e^{-x} dx`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre(Arc<GaussRule>);

fn cache() -> &'static Mutex<HashMap<(u8, usize), Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, usize), Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: u8, n: usize, build: fn(usize) -> Result<GaussRule>) -> Result<Arc<GaussRule>> {
    if let Some(rule) = cache().lock().expect("quadrature cache poisoned").get(&(kind, n)) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build(n)?);
    cache()
        .lock()
        .expect("quadrature cache poisoned")
        .insert((kind, n), Arc::clone(&rule));
    Ok(rule)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Quadrature("Gauss-Legendre order must be positive".into()));
        }
        cached(0, n, legendre_rule).map(Self)
    }

    pub fn rule(&self) -> &GaussRule {
        &self.0
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .0
            .nodes
            .iter()
            .zip(&self.0.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * sum
    }
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Quadrature("Gauss-Laguerre order must be positive".into()));
        }
        cached(1, n, laguerre_rule).map(Self)
    }

    pub fn rule(&self) -> &GaussRule {
        &self.0
    }

    /// Approximates `∫_0^∞ f(x) e^{-x} dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.0
            .nodes
            .iter()
            .zip(&self.0.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_rule(n: usize) -> Result<GaussRule> {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (p1, p2) = legendre_pair(n, z);
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Legendre root {i} of order {n} did not converge"
            )));
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(GaussRule { nodes, weights })
}

/// Returns (P_n(z), P_{n-1}(z)).
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

fn laguerre_rule(n: usize) -> Result<GaussRule> {
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
            }
        };
        let mut converged = false;
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..MAX_NEWTON {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_TOL * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Laguerre root {i} of order {n} did not converge"
            )));
        }
        nodes.push(z);
        weights.push(-1.0 / (pp * nf * p2));
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Quadrature(format!(
            "Laguerre nodes of order {n} are not strictly increasing"
        )));
    }
    Ok(GaussRule { nodes, weights })
}

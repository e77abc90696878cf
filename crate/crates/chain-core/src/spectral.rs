//! Spectral quantities of the symmetrized generator `S = -D^{1/2} L D^{-1/2}`.
//!
//! `S` is positive semidefinite with kernel spanned by `u = sqrt(pi)`.
//! Eigenvectors `v_k` of `S` give `L^2(pi)`-orthonormal eigenfunctions
//! `phi_k = v_k / sqrt(pi)` of `-L`.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::chain::ReversibleChain;
use crate::error::{ChainError, Result};

/// Largest state space for which the gap is taken from a dense eigensolve.
pub const DENSE_GAP_LIMIT: usize = 1024;

/// Full eigendecomposition of `S`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: Mat<f64>,
    sqrt_pi: Vec<f64>,
}

impl Spectrum {
    /// Dense symmetric eigensolve of `S`.
    pub fn compute(chain: &ReversibleChain) -> Result<Self> {
        let s = chain.symmetrized_dense();
        let evd = s
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| ChainError::EigensolverFailure(format!("{e:?}")))?;
        let n = chain.n();
        let values: Vec<f64> = (0..n).map(|i| evd.S().column_vector()[i]).collect();
        let mut vectors = evd.U().to_owned();
        let sqrt_pi: Vec<f64> = chain.pi().iter().map(|p| p.sqrt()).collect();
        // The bottom eigenvector must be the stationary direction; pin it
        // exactly so that later sums over k >= 1 are sums over u-orthogonal modes.
        let overlap: f64 = (0..n).map(|i| vectors[(i, 0)] * sqrt_pi[i]).sum();
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        if overlap.abs() < 1.0 - 1e-8 || values[0].abs() > 1e-10 * scale {
            return Err(ChainError::EigensolverFailure(format!(
                "bottom eigenpair is not stationary: value {:e}, overlap {overlap}",
                values[0]
            )));
        }
        for i in 0..n {
            vectors[(i, 0)] = sqrt_pi[i];
        }
        let mut values = values;
        values[0] = 0.0;
        Ok(Self { values, vectors, sqrt_pi })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues of `-L`, ascending, with `values()[0] = 0`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors of `S` as columns.
    pub fn vectors(&self) -> faer::MatRef<'_, f64> {
        self.vectors.as_ref()
    }

    pub fn sqrt_pi(&self) -> &[f64] {
        &self.sqrt_pi
    }

    /// Smallest nonzero eigenvalue.
    pub fn gap(&self) -> f64 {
        if self.n() > 1 {
            self.values[1]
        } else {
            f64::INFINITY
        }
    }

    /// `phi_k = v_k / sqrt(pi)`, normalized so that `pi(phi_k^2) = 1`.
    pub fn eigenfunction(&self, k: usize) -> Vec<f64> {
        (0..self.n()).map(|i| self.vectors[(i, k)] / self.sqrt_pi[i]).collect()
    }

    /// `P_t f` through the spectral decomposition.
    pub fn semigroup_apply(&self, f: &[f64], t: f64) -> Vec<f64> {
        let n = self.n();
        let g: Vec<f64> = f.iter().zip(&self.sqrt_pi).map(|(a, s)| a * s).collect();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let col = self.vectors.col(k);
            let c: f64 = (0..n).map(|i| col[i] * g[i]).sum::<f64>() * (-self.values[k] * t).exp();
            for i in 0..n {
                out[i] += c * col[i];
            }
        }
        out.iter().zip(&self.sqrt_pi).map(|(a, s)| a / s).collect()
    }
}

/// How the gap was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMethod {
    Dense,
    ShiftInvertLanczos,
}

/// Spectral gap with its eigenfunction and an a-posteriori certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapEstimate {
    /// Rayleigh quotient of the returned eigenfunction.
    pub gap: f64,
    /// Certified lower bound on the gap.
    pub certified_lower: f64,
    /// `|| S v - gap v ||` for the unit vector `v = sqrt(pi) phi`.
    pub residual: f64,
    /// `pi(phi)`, zero up to rounding.
    pub mean_under_pi: f64,
    /// Eigenfunction with `pi(phi^2) = 1`.
    pub eigenfunction: Vec<f64>,
    pub method: GapMethod,
}

fn residual_of(chain: &ReversibleChain, sqrt_pi: &[f64], v: &[f64]) -> (f64, f64) {
    let sv = chain.symmetrized_apply(v, sqrt_pi);
    let norm2: f64 = v.iter().map(|a| a * a).sum();
    let rq = v.iter().zip(&sv).map(|(a, b)| a * b).sum::<f64>() / norm2;
    let res = sv.iter().zip(v).map(|(a, b)| (a - rq * b).powi(2)).sum::<f64>().sqrt() / norm2.sqrt();
    (rq, res)
}

fn finish(chain: &ReversibleChain, sqrt_pi: &[f64], v: Vec<f64>, lower: f64, method: GapMethod) -> GapEstimate {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let v: Vec<f64> = v.iter().map(|a| a / norm).collect();
    let (gap, residual) = residual_of(chain, sqrt_pi, &v);
    let eigenfunction: Vec<f64> = v.iter().zip(sqrt_pi).map(|(a, s)| a / s).collect();
    let mean_under_pi = eigenfunction.iter().zip(chain.pi()).map(|(f, p)| f * p).sum();
    GapEstimate { gap, certified_lower: lower.min(gap), residual, mean_under_pi, eigenfunction, method }
}

/// Smallest nonzero eigenvalue of `-L`.
///
/// Dense eigensolve up to [`DENSE_GAP_LIMIT`] states; beyond that, Lanczos on
/// `(S + a u u^T)^{-1}` restricted to `u^\perp`. The Lanczos answer is certified
/// by a successful Cholesky factorization of `S + a u u^T - mu I`, which
/// proves that no eigenvalue lies below `mu`.
pub fn spectral_gap(chain: &ReversibleChain) -> Result<GapEstimate> {
    if chain.n() < 2 {
        return Err(ChainError::InvalidArgument("gap of a one-state chain".into()));
    }
    if chain.n() <= DENSE_GAP_LIMIT {
        return dense_gap(chain);
    }
    match lanczos_gap(chain) {
        Ok(g) => Ok(g),
        Err(_) => dense_gap(chain),
    }
}

/// Gap from a full dense eigensolve.
pub fn dense_gap(chain: &ReversibleChain) -> Result<GapEstimate> {
    let spec = Spectrum::compute(chain)?;
    let v: Vec<f64> = spec.vectors().col(1).iter().copied().collect();
    let sqrt_pi = spec.sqrt_pi().to_vec();
    let g = finish(chain, &sqrt_pi, v, f64::INFINITY, GapMethod::Dense);
    // Some eigenvalue lies within the residual of the Rayleigh quotient, and
    // the dense solver ranks it second.
    let lower = spec.gap() - g.residual;
    Ok(GapEstimate { certified_lower: lower.min(g.gap), ..g })
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c: f64 = q.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
            w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
        }
    }
}

fn lanczos_gap(chain: &ReversibleChain) -> Result<GapEstimate> {
    let n = chain.n();
    let sqrt_pi: Vec<f64> = chain.pi().iter().map(|p| p.sqrt()).collect();
    let shift = 2.0 * chain.max_exit_rate() + 1.0;
    let mut b = chain.symmetrized_dense();
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] += shift * sqrt_pi[i] * sqrt_pi[j];
        }
    }
    let llt = b.llt(Side::Lower).map_err(|e| ChainError::EigensolverFailure(format!("{e:?}")))?;

    let mut basis: Vec<Vec<f64>> = vec![sqrt_pi.clone()];
    let mut q: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5).collect();
    orthogonalize(&mut q, &basis);
    let nq = q.iter().map(|a| a * a).sum::<f64>().sqrt();
    q.iter_mut().for_each(|a| *a /= nq);

    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let max_steps = 300.min(n - 1);
    let mut ritz: Option<(f64, Vec<f64>)> = None;
    for step in 0..max_steps {
        basis.push(q.clone());
        let mut w = Mat::<f64>::from_fn(n, 1, |i, _| q[i]);
        llt.solve_in_place(w.as_mut());
        let mut w: Vec<f64> = (0..n).map(|i| w[(i, 0)]).collect();
        let alpha: f64 = w.iter().zip(&q).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        orthogonalize(&mut w, &basis);
        let beta = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        let m = alphas.len();
        if step % 4 == 3 || beta < 1e-14 || m == max_steps {
            let t = Mat::<f64>::from_fn(m, m, |i, j| {
                if i == j {
                    alphas[i]
                } else if i + 1 == j {
                    betas[i]
                } else if j + 1 == i {
                    betas[j]
                } else {
                    0.0
                }
            });
            let evd = t
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| ChainError::EigensolverFailure(format!("{e:?}")))?;
            let theta = evd.S().column_vector()[m - 1];
            let s_last = evd.U()[(m - 1, m - 1)];
            let coeffs: Vec<f64> = (0..m).map(|i| evd.U()[(i, m - 1)]).collect();
            if (beta * s_last).abs() <= 1e-11 * theta.abs() || beta < 1e-14 || m == max_steps {
                let mut v = vec![0.0; n];
                for (c, qv) in coeffs.iter().zip(&basis[1..]) {
                    v.iter_mut().zip(qv).for_each(|(vi, qi)| *vi += c * qi);
                }
                ritz = Some((theta, v));
                break;
            }
        }
        betas.push(beta);
        q = w.iter().map(|a| a / beta).collect();
    }
    let (_, mut v) = ritz.ok_or_else(|| ChainError::EigensolverFailure("Lanczos did not converge".into()))?;
    orthogonalize(&mut v, &basis[..1]);
    let (rq, residual) = residual_of(chain, &sqrt_pi, &v);
    let mu = rq * (1.0 - 1e-6) - residual;
    for i in 0..n {
        b[(i, i)] -= mu;
    }
    b.llt(Side::Lower)
        .map_err(|_| ChainError::EigensolverFailure("Lanczos missed an eigenvalue below the Ritz value".into()))?;
    Ok(finish(chain, &sqrt_pi, v, mu, GapMethod::ShiftInvertLanczos))
}

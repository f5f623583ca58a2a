//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! Built for smooth integrands that may be sharply peaked, like the
//! Laplace-type integrands of the Cole-Hopf oracle: the worst segment is
//! bisected until the summed error estimate meets the tolerance, so panels
//! concentrate around the peak.

use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("invalid integration interval [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("quadrature failed to converge: error estimate {err} after {panels} panels")]
    NotConverged { err: f64, panels: usize },
    #[error("integrand returned a non-finite value")]
    NonFiniteIntegrand,
}

/// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
/// Abscissae are symmetric; only the non-negative half is stored.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Integral and error estimate of one Kronrod panel.
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        // The centre abscissa appears once, not as a symmetric pair.
        let pair = if x == 0.0 {
            f(mid)
        } else {
            f(mid - half * x) + f(mid + half * x)
        };
        if !pair.is_finite() {
            return Err(QuadError::NonFiniteIntegrand);
        }
        kronrod += wk * pair;
        // Odd Kronrod indices are the embedded 7-point Gauss abscissae.
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    Ok((value, err))
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub panels: usize,
}

const MAX_PANELS: usize = 20_000;

/// Integrate `f` over `[a, b]` until the summed panel error drops below
/// `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult, QuadError> {
    integrate_with_breaks(f, a, b, &[], rel_tol, abs_tol)
}

/// Like [`integrate`], but for integrands known to be sharply peaked at
/// `peak`: initial panels shrink geometrically towards the peak, so it is
/// resolved no matter how narrow it is. Plain adaptive bisection would
/// otherwise sample straight past a needle far narrower than the interval.
pub fn integrate_peaked<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    peak: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult, QuadError> {
    if !a.is_finite() || !b.is_finite() || a >= b || !peak.is_finite() {
        return Err(QuadError::BadInterval(a, b));
    }
    let span = (peak - a).max(b - peak).max(f64::MIN_POSITIVE);
    let mut breaks = Vec::with_capacity(104);
    for k in 1..=50 {
        let d = span * 0.5_f64.powi(k);
        breaks.push(peak - d);
        breaks.push(peak + d);
    }
    integrate_with_breaks(f, a, b, &breaks, rel_tol, abs_tol)
}

fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult, QuadError> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(QuadError::BadInterval(a, b));
    }
    let mut edges: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .chain([a, b])
        .collect();
    edges.sort_by(|p, q| p.partial_cmp(q).expect("finite break points"));
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut total_value = 0.0;
    let mut total_err = 0.0;
    let mut panels = 0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let (value, err) = kronrod_panel(&f, lo, hi)?;
        total_value += value;
        total_err += err;
        panels += 1;
        heap.push(Segment {
            a: lo,
            b: hi,
            value,
            err,
        });
    }
    while total_err > abs_tol.max(rel_tol * total_value.abs()) {
        if panels >= MAX_PANELS {
            return Err(QuadError::NotConverged {
                err: total_err,
                panels,
            });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; nothing left to split.
            return Err(QuadError::NotConverged {
                err: total_err,
                panels,
            });
        }
        let (lv, le) = kronrod_panel(&f, worst.a, mid)?;
        let (rv, re) = kronrod_panel(&f, mid, worst.b)?;
        total_value += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
        });
        panels += 1;
    }
    Ok(QuadResult {
        value: total_value,
        err_est: total_err,
        panels,
    })
}

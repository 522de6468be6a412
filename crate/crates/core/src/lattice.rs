//! Summation over the dual lattice `Λ* = 2πℤ³`.
//!
//! Points are grouped into shells of equal integer norm `|n|² = m`. Radial
//! summands are evaluated once per shell and weighted by the shell count
//! `r₃(m)`, obtained from the fundamental domain `0 ≤ n₁ ≤ n₂ ≤ n₃` with
//! orbit multiplicities. General summands are evaluated on every point of
//! every shell, generated from the same fundamental representatives. Each
//! shell is reduced in a fixed order and the shells are then accumulated
//! sequentially with compensated summation, so results do not depend on the
//! number of threads.

use crate::coefficients::{momentum, norm, KernelSet, Vec3};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut k = KahanSum::new();
        for x in iter {
            k.add(x);
        }
        k
    }
}

/// Compensated sum of a slice in index order.
pub fn kahan(values: &[f64]) -> f64 {
    values.iter().copied().collect::<KahanSum>().value()
}

fn orbit_size(a: i64, b: i64, c: i64) -> u32 {
    let perms = if a == b && b == c {
        1
    } else if a == b || b == c {
        3
    } else {
        6
    };
    let nonzero = [a, b, c].iter().filter(|&&x| x != 0).count() as u32;
    perms * (1 << nonzero)
}

/// All distinct signed permutations of a fundamental-domain point, in a fixed order.
pub fn orbit(rep: [i64; 3]) -> Vec<[i64; 3]> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::with_capacity(48);
    for p in perms {
        for s in 0..8 {
            let v = [
                if s & 1 == 0 { rep[p[0]] } else { -rep[p[0]] },
                if s & 2 == 0 { rep[p[1]] } else { -rep[p[1]] },
                if s & 4 == 0 { rep[p[2]] } else { -rep[p[2]] },
            ];
            out.push(v);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Shell counts `r₃(m)` for `0 ≤ m ≤ m_max`.
#[derive(Debug)]
pub struct ShellCounts {
    counts: Vec<u32>,
}

impl ShellCounts {
    pub fn build(m_max: usize) -> Self {
        let nmax = (m_max as f64).sqrt() as i64 + 1;
        let chunks: Vec<i64> = (0..=nmax).collect();
        let counts = chunks
            .par_iter()
            .fold(
                || vec![0u32; m_max + 1],
                |mut acc, &a| {
                    let a2 = a * a;
                    if a2 as usize > m_max {
                        return acc;
                    }
                    let mut b = a;
                    while (a2 + 2 * b * b) as usize <= m_max {
                        let ab = a2 + b * b;
                        let mut c = b;
                        loop {
                            let m = (ab + c * c) as usize;
                            if m > m_max {
                                break;
                            }
                            acc[m] += orbit_size(a, b, c);
                            c += 1;
                        }
                        b += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u32; m_max + 1],
                |mut x, y| {
                    for (u, v) in x.iter_mut().zip(y) {
                        *u += v;
                    }
                    x
                },
            );
        Self { counts }
    }

    /// Shared table covering at least `m_max`.
    pub fn shared(m_max: usize) -> Arc<ShellCounts> {
        static CACHE: OnceLock<Mutex<Option<Arc<ShellCounts>>>> = OnceLock::new();
        let cell = CACHE.get_or_init(|| Mutex::new(None));
        let mut guard = cell.lock().unwrap();
        if let Some(t) = guard.as_ref() {
            if t.m_max() >= m_max {
                return t.clone();
            }
        }
        let t = Arc::new(ShellCounts::build(m_max));
        *guard = Some(t.clone());
        t
    }

    pub fn m_max(&self) -> usize {
        self.counts.len() - 1
    }

    #[inline]
    pub fn count(&self, m: usize) -> u32 {
        self.counts[m]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of lattice points with `|n|² ≤ m`.
    pub fn cumulative(&self, m: usize) -> u64 {
        self.counts[..=m].iter().map(|&c| c as u64).sum()
    }
}

/// Fundamental-domain representatives grouped by shell.
#[derive(Debug)]
pub struct ShellReps {
    start: Vec<usize>,
    reps: Vec<[i64; 3]>,
}

impl ShellReps {
    pub fn build(m_max: usize) -> Self {
        let nmax = (m_max as f64).sqrt() as i64 + 1;
        let mut all: Vec<(usize, [i64; 3])> = Vec::new();
        for a in 0..=nmax {
            for b in a..=nmax {
                for c in b..=nmax {
                    let m = (a * a + b * b + c * c) as usize;
                    if m > m_max {
                        break;
                    }
                    all.push((m, [a, b, c]));
                }
            }
        }
        all.sort_unstable();
        let mut start = vec![0usize; m_max + 2];
        for &(m, _) in &all {
            start[m + 1] += 1;
        }
        for i in 1..start.len() {
            start[i] += start[i - 1];
        }
        Self {
            start,
            reps: all.into_iter().map(|(_, r)| r).collect(),
        }
    }

    pub fn shared(m_max: usize) -> Arc<ShellReps> {
        static CACHE: OnceLock<Mutex<Option<Arc<ShellReps>>>> = OnceLock::new();
        let cell = CACHE.get_or_init(|| Mutex::new(None));
        let mut guard = cell.lock().unwrap();
        if let Some(t) = guard.as_ref() {
            if t.m_max() >= m_max {
                return t.clone();
            }
        }
        let t = Arc::new(ShellReps::build(m_max));
        *guard = Some(t.clone());
        t
    }

    pub fn m_max(&self) -> usize {
        self.start.len() - 2
    }

    pub fn shell(&self, m: usize) -> &[[i64; 3]] {
        &self.reps[self.start[m]..self.start[m + 1]]
    }

    /// Every lattice point with `|n|² = m`, in a fixed order.
    pub fn points(&self, m: usize) -> Vec<[i64; 3]> {
        self.shell(m).iter().flat_map(|&r| orbit(r)).collect()
    }

    /// Indices `m ≤ m_max` of the nonempty shells, in increasing order.
    pub fn nonempty(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.m_max()).filter(|&m| self.start[m + 1] > self.start[m])
    }
}

fn find_point(m: usize) -> [i64; 3] {
    let n = (m as f64).sqrt() as i64 + 1;
    for a in 0..=n {
        for b in a..=n {
            let r = m as i64 - a * a - b * b;
            if r < b * b {
                break;
            }
            let c = (r as f64).sqrt().round() as i64;
            if c * c == r {
                return [a, b, c];
            }
        }
    }
    [0, 0, 0]
}

/// Function summed over the lattice; arguments are momenta `p = 2πn`.
#[derive(Clone, Copy)]
pub enum Summand<'a> {
    Radial(&'a (dyn Fn(f64) -> f64 + Sync)),
    Vector(&'a (dyn Fn(Vec3) -> f64 + Sync)),
}

/// Treatment of the region beyond the outer radius.
#[derive(Clone, Copy)]
pub enum TailModel<'a> {
    None,
    /// Fit `A |p|^{−s}` on the outer half of the shells and add its integral.
    PowerLaw { exponent: f64 },
    /// Caller-supplied value of the sum beyond a momentum radius.
    ClosedForm(&'a (dyn Fn(f64) -> f64 + Sync)),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Full,
    /// 48-fold reduction; radial summands only.
    Cubic48,
}

/// Momentum points with `inner < |p| ≤ outer` (so `inner = 0` excludes the origin).
#[derive(Clone, Copy)]
pub struct SumSpec<'a> {
    pub summand: Summand<'a>,
    pub inner: f64,
    pub outer: f64,
    pub tail: TailModel<'a>,
    pub symmetry: Symmetry,
}

impl<'a> SumSpec<'a> {
    /// Radial sum over `Λ*₊` up to `outer`, symmetry-reduced, no tail.
    pub fn radial(f: &'a (dyn Fn(f64) -> f64 + Sync), outer: f64) -> Self {
        Self {
            summand: Summand::Radial(f),
            inner: 0.0,
            outer,
            tail: TailModel::None,
            symmetry: Symmetry::Cubic48,
        }
    }

    /// General sum over `Λ*₊` up to `outer`, no tail.
    pub fn vector(f: &'a (dyn Fn(Vec3) -> f64 + Sync), outer: f64) -> Self {
        Self {
            summand: Summand::Vector(f),
            inner: 0.0,
            outer,
            tail: TailModel::None,
            symmetry: Symmetry::Full,
        }
    }

    pub fn with_tail(mut self, tail: TailModel<'a>) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_inner(mut self, inner: f64) -> Self {
        self.inner = inner;
        self
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.inner >= 0.0 && self.outer > self.inner && self.outer.is_finite()) {
            return Err(Error::InvalidSum(format!(
                "need outer > inner >= 0, got inner = {}, outer = {}",
                self.inner, self.outer
            )));
        }
        if let TailModel::PowerLaw { exponent } = self.tail {
            if !(exponent > 3.0) {
                return Err(Error::InvalidSum(format!(
                    "power-law tail exponent must exceed 3, got {exponent}"
                )));
            }
        }
        if self.symmetry == Symmetry::Cubic48 && matches!(self.summand, Summand::Vector(_)) {
            return Err(Error::InvalidSum(
                "cubic symmetry reduction requires a radial summand".into(),
            ));
        }
        Ok(())
    }
}

/// Sum value with truncation-error estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SumResult {
    pub value: f64,
    pub error: f64,
    /// Summand evaluations performed.
    pub points: u64,
    /// Contribution of the tail model (included in `value`).
    pub tail: f64,
}

fn shell_range(inner: f64, outer: f64) -> (usize, usize) {
    let scale = 1.0 / (4.0 * PI * PI);
    let lo2 = inner * inner * scale;
    let hi2 = outer * outer * scale;
    let mut lo = lo2.floor() as usize;
    while (lo as f64) <= lo2 * (1.0 + 1e-14) && !(inner == 0.0 && lo == 0) {
        lo += 1;
    }
    if inner == 0.0 {
        lo = lo.max(1);
    }
    let mut hi = hi2.floor() as usize;
    if ((hi + 1) as f64) <= hi2 * (1.0 + 1e-14) {
        hi += 1;
    }
    (lo, hi)
}

/// Evaluates a lattice sum described by `spec`.
pub fn lattice_sum(spec: &SumSpec) -> Result<SumResult> {
    spec.validate()?;
    let (m_lo, m_hi) = shell_range(spec.inner, spec.outer);
    if m_hi < m_lo {
        return Ok(SumResult {
            value: 0.0,
            error: 0.0,
            points: 0,
            tail: 0.0,
        });
    }
    let counts = ShellCounts::shared(m_hi);
    let ms: Vec<usize> = (m_lo..=m_hi).filter(|&m| counts.count(m) > 0).collect();

    let (shell_sums, evals): (Vec<f64>, u64) = match (spec.summand, spec.symmetry) {
        (Summand::Radial(f), Symmetry::Cubic48) => {
            let v: Vec<f64> = ms
                .par_iter()
                .map(|&m| counts.count(m) as f64 * f(2.0 * PI * (m as f64).sqrt()))
                .collect();
            (v, ms.len() as u64)
        }
        (summand, _) => {
            let reps = ShellReps::shared(m_hi);
            let v: Vec<f64> = ms
                .par_iter()
                .map(|&m| {
                    let mut k = KahanSum::new();
                    for n in reps.points(m) {
                        let x = match summand {
                            Summand::Radial(f) => f(norm(momentum(n))),
                            Summand::Vector(f) => f(momentum(n)),
                        };
                        k.add(x);
                    }
                    k.value()
                })
                .collect();
            let evals = ms.iter().map(|&m| counts.count(m) as u64).sum();
            (v, evals)
        }
    };

    for (i, s) in shell_sums.iter().enumerate() {
        if !s.is_finite() {
            let m = ms[i];
            let point = match spec.summand {
                Summand::Vector(f) => ShellReps::shared(m)
                    .points(m)
                    .into_iter()
                    .find(|&n| !f(momentum(n)).is_finite())
                    .unwrap_or_else(|| find_point(m)),
                Summand::Radial(_) => find_point(m),
            };
            return Err(Error::NonFinite { point });
        }
    }

    let body = kahan(&shell_sums);
    let last = shell_sums.last().copied().unwrap_or(0.0);
    let last_count = ms.last().map(|&m| counts.count(m)).unwrap_or(1).max(1) as f64;
    let edge = last.abs() / last_count;
    let outer_n = spec.outer / (2.0 * PI);
    let inner_n = spec.inner / (2.0 * PI);
    let lattice_points: f64 = ms.iter().map(|&m| counts.count(m) as f64).sum();
    let volume = 4.0 / 3.0 * PI * (outer_n.powi(3) - inner_n.powi(3));
    let boundary = edge * (lattice_points - volume).abs();

    let (tail, tail_err) = match spec.tail {
        TailModel::None => (0.0, 0.0),
        TailModel::ClosedForm(t) => (t(spec.outer), 0.0),
        TailModel::PowerLaw { exponent: s } => {
            let amp = |lo: f64, hi: f64| {
                let mut num = KahanSum::new();
                let mut den = KahanSum::new();
                for (i, &m) in ms.iter().enumerate() {
                    let p = 2.0 * PI * (m as f64).sqrt();
                    if p >= lo && p <= hi {
                        num.add(shell_sums[i]);
                        den.add(counts.count(m) as f64 * p.powf(-s));
                    }
                }
                if den.value() > 0.0 {
                    num.value() / den.value()
                } else {
                    0.0
                }
            };
            let lo = spec.inner.max(0.5 * spec.outer);
            let mid = 0.5 * (lo + spec.outer);
            let a_all = amp(lo, spec.outer);
            let a1 = amp(lo, mid);
            let a2 = amp(mid, spec.outer);
            let tail = a_all * 4.0 * PI / (2.0 * PI).powi(3) * spec.outer.powf(3.0 - s) / (s - 3.0);
            let drift = if a_all != 0.0 {
                ((a1 - a2) / a_all).abs()
            } else {
                0.0
            };
            (tail, tail.abs() * drift)
        }
    };
    Ok(SumResult {
        value: body + tail,
        error: tail_err + boundary + last.abs(),
        points: evals,
        tail,
    })
}

/// Lattice norms of the quadratic and cubic kernels at fixed `(N, κ)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SigmaNorms {
    /// `Σ σ_p²`.
    pub l2_squared: f64,
    /// `Σ |σ_p|`.
    pub l1: f64,
    /// `Σ |γ_p σ_p − η∞,p|`.
    pub gamma_sigma_minus_eta: f64,
    /// `Σ |η_p − σ_p|`.
    pub eta_minus_sigma_l1: f64,
    /// `Σ p⁴ |η_p − σ_p|²`.
    pub eta_minus_sigma_h2: f64,
}

/// Outer truncation (in units of `L`) for the single-momentum kernel sums.
pub const KERNEL_TRUNCATION: f64 = 24.0;

/// Single-momentum kernel norms (power-law tails for the slowly decaying ℓ¹ sums).
pub fn sigma_norms(ks: &KernelSet) -> Result<SigmaNorms> {
    let outer = KERNEL_TRUNCATION * ks.params().box_length;
    let run = |f: &(dyn Fn(f64) -> f64 + Sync), tail: TailModel| -> Result<f64> {
        Ok(lattice_sum(&SumSpec::radial(f, outer).with_tail(tail))?.value)
    };
    let l2 = run(&|k| ks.sigma(k).powi(2), TailModel::PowerLaw { exponent: 8.0 })?;
    let l1 = run(&|k| ks.sigma(k).abs(), TailModel::PowerLaw { exponent: 4.0 })?;
    let gs = run(
        &|k| (ks.gamma(k) * ks.sigma(k) - ks.eta_inf(k)).abs(),
        TailModel::PowerLaw { exponent: 8.0 },
    )?;
    let es1 = run(&|k| (ks.eta(k) - ks.sigma(k)).abs(), TailModel::PowerLaw { exponent: 8.0 })?;
    let es2 = run(
        &|k| k.powi(4) * (ks.eta(k) - ks.sigma(k)).powi(2),
        TailModel::PowerLaw { exponent: 8.0 },
    )?;
    Ok(SigmaNorms {
        l2_squared: l2,
        l1,
        gamma_sigma_minus_eta: gs,
        eta_minus_sigma_l1: es1,
        eta_minus_sigma_h2: es2,
    })
}

/// Collects nonempty shells `(|p|, r₃)` with `inner < |p| ≤ outer`.
pub fn radial_shells(inner: f64, outer: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = shell_range(inner, outer);
    if hi < lo {
        return Vec::new();
    }
    let counts = ShellCounts::shared(hi);
    (lo..=hi)
        .filter(|&m| counts.count(m) > 0)
        .map(|m| (2.0 * PI * (m as f64).sqrt(), counts.count(m) as f64))
        .collect()
}

/// `Σ_{p,q} |A_{p,q}|²` with the denominator averaged over the relative
/// angle of each shell pair,
/// `⟨(p² + q² + (p+q)²)^{−2}⟩ = ¼ ((p²+q²)² − p²q²)^{−1}`.
pub fn cubic_l2_squared_shell_averaged(ks: &KernelSet, truncation: f64) -> f64 {
    let pe = ks.params().p_eta;
    let outer = truncation * pe;
    let ps = radial_shells(pe, outer);
    let qs: Vec<(f64, f64, f64)> = radial_shells(ks.params().p_sigma, outer)
        .into_iter()
        .map(|(q, w)| (q, w, ks.sigma(q).powi(2)))
        .filter(|t| t.2 != 0.0)
        .collect();
    let rows: Vec<f64> = ps
        .par_iter()
        .map(|&(p, wp)| {
            let e = ks.eta(p);
            if e == 0.0 {
                return 0.0;
            }
            let p2 = p * p;
            let mut k = KahanSum::new();
            for &(q, wq, s2) in &qs {
                let q2 = q * q;
                k.add(wq * s2 / ((p2 + q2).powi(2) - p2 * q2));
            }
            wp * p2 * p2 * e * e * k.value()
        })
        .collect();
    kahan(&rows) / ks.params().n
}

/// Exact `Σ_{p,q} |A_{p,q}|²` over `|n_p|, |n_q| ≤ radius` (small `N` only).
pub fn cubic_l2_squared_exact(ks: &KernelSet, radius: f64) -> f64 {
    let m_hi = (radius * radius) as usize;
    let reps = ShellReps::shared(m_hi);
    let pts: Vec<Vec3> = (1..=m_hi)
        .flat_map(|m| reps.points(m))
        .map(momentum)
        .collect();
    let rows: Vec<f64> = pts
        .par_iter()
        .map(|&p| {
            if ks.eta_at(p) == 0.0 {
                return 0.0;
            }
            pts.iter()
                .map(|&q| ks.cubic(p, q).powi(2))
                .collect::<KahanSum>()
                .value()
        })
        .collect();
    kahan(&rows)
}

/// `Σ_{p,q} |A_K^low(p,q)|²` over `p, q ∈ Λ*₊` (the kernel factorizes).
pub fn kinetic_low_l2_squared(ks: &KernelSet) -> Result<f64> {
    let pe = ks.params().p_eta;
    let pp = lattice_sum(&SumSpec::radial(&|k| ks.kinetic_low_p(k).powi(2), 2.0 * pe + 1.0))?.value;
    Ok(pp * sigma_norms(ks)?.l2_squared)
}

/// `Σ_p |A_{p,−p−q}|` at fixed `q`.
pub fn cubic_row_l1(ks: &KernelSet, q: Vec3, truncation: f64) -> Result<f64> {
    let outer = truncation * ks.params().box_length;
    let f = |p: Vec3| ks.cubic(p, crate::coefficients::neg(crate::coefficients::add(p, q))).abs();
    Ok(lattice_sum(&SumSpec::vector(&f, outer).with_inner(ks.params().p_eta))?.value)
}

/// Residual of the discrete scattering identity at `p ∈ Λ*₊`:
/// `p² η∞,p + (N^κ/2) V̂(p/L) + (N^κ/2N) Σ_{q ∈ Λ*₊} V̂((p−q)/L) η∞,q`,
/// with the `q` sum truncated at `truncation · L`.
pub fn discrete_scattering_residual(ks: &KernelSet, p: Vec3, truncation: f64) -> Result<SumResult> {
    discrete_scattering_residual_with(ks, p, truncation, f64::INFINITY)
}

/// As [`discrete_scattering_residual`], failing if the truncation error
/// estimate (in units of the residual's sum term) exceeds `tolerance`.
pub fn discrete_scattering_residual_with(
    ks: &KernelSet,
    p: Vec3,
    truncation: f64,
    tolerance: f64,
) -> Result<SumResult> {
    let nk = ks.n_kappa();
    let n = ks.params().n;
    let kp = norm(p);
    let f = |q: Vec3| ks.v_hat(norm(crate::coefficients::sub(p, q))) * ks.eta_inf_at(q);
    let outer = truncation * ks.params().box_length;
    let s = lattice_sum(&SumSpec::vector(&f, outer).with_tail(TailModel::PowerLaw { exponent: 6.0 }))?;
    let scale = nk / (2.0 * n);
    let err = s.error * scale;
    if err > tolerance {
        return Err(Error::Truncation {
            estimate: err,
            tolerance,
        });
    }
    let value = kp * kp * ks.eta_inf(kp) + 0.5 * nk * ks.v_hat(kp) + scale * s.value;
    Ok(SumResult {
        value,
        error: err,
        points: s.points,
        tail: s.tail * scale,
    })
}

/// `Σ_{p ∈ Λ*₊} N^κ V̂(p/L) η∞,p − (8πa − V̂(0)) N^{1+κ}`.
pub fn eta_correction_sum(ks: &KernelSet, truncation: f64) -> Result<SumResult> {
    let nk = ks.n_kappa();
    let f = |k: f64| nk * ks.v_hat(k) * ks.eta_inf(k);
    let outer = truncation * ks.params().box_length;
    let s = lattice_sum(&SumSpec::radial(&f, outer).with_tail(TailModel::PowerLaw { exponent: 6.0 }))?;
    let a = ks.scattering_length();
    let lead = (8.0 * PI * a - ks.v_hat(0.0)) * ks.params().n * nk;
    Ok(SumResult {
        value: s.value - lead,
        ..s
    })
}

/// The first `count` nonempty shells of `Λ*₊`, each with one representative momentum.
pub fn first_shells(count: usize) -> Vec<(usize, Vec3)> {
    let mut m_max = 32;
    loop {
        let reps = ShellReps::shared(m_max);
        let found: Vec<(usize, Vec3)> = reps
            .nonempty()
            .filter(|&m| m > 0)
            .take(count)
            .map(|m| (m, momentum(reps.shell(m)[0])))
            .collect();
        if found.len() == count {
            return found;
        }
        m_max *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes_match_counting() {
        for rep in [[0, 0, 0], [0, 0, 1], [1, 1, 1], [0, 1, 2], [1, 2, 3], [2, 2, 5]] {
            assert_eq!(orbit(rep).len() as u32, orbit_size(rep[0], rep[1], rep[2]));
        }
    }

    #[test]
    fn shell_counts_known_values() {
        let c = ShellCounts::build(30);
        let expected = [1, 6, 12, 8, 6, 24, 24, 0, 12, 30, 24];
        for (m, &e) in expected.iter().enumerate() {
            assert_eq!(c.count(m), e, "r3({m})");
        }
    }

    #[test]
    fn reps_and_counts_agree() {
        let reps = ShellReps::build(500);
        let counts = ShellCounts::build(500);
        for m in 0..=500 {
            assert_eq!(reps.points(m).len() as u32, counts.count(m));
            for n in reps.points(m) {
                assert_eq!((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as usize, m);
            }
        }
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut v = vec![1e16];
        v.extend(std::iter::repeat_n(1.0, 1000));
        v.push(-1e16);
        assert_eq!(kahan(&v), 1000.0);
    }

    #[test]
    fn shell_range_boundaries() {
        let two_pi = 2.0 * PI;
        assert_eq!(shell_range(0.0, two_pi * 2.0), (1, 4));
        assert_eq!(shell_range(two_pi, two_pi * 3.0), (2, 9));
    }
}

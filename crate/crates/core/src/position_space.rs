//! Position-space kernels on the unit torus `Λ = [−1/2, 1/2)³`.
//!
//! `σ̌` and `(γ−1)̌` are synthesized by a 3-D inverse FFT from the momentum
//! coefficients with `|n_i| < M/2`. The Nyquist planes are left empty so the
//! truncated series stays real. The cubic kernel `Ǎ` is only sampled along
//! the two coordinate rays, through precomputed row and column sums.

use crate::coefficients::{add, momentum, norm, norm2, KernelSet, Vec3};
use crate::error::{Error, Result};
use crate::fit::{line, LineFit};
use crate::lattice::{kahan, KahanSum, ShellReps};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

/// Default tolerance on the Nyquist-shell ratio `max|c_p|_{|n|≈M/2} / max|c_p|`.
pub const DEFAULT_ALIASING_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Sigma,
    GammaMinusOne,
}

impl Which {
    fn coefficient(self, ks: &KernelSet, k: f64) -> f64 {
        match self {
            Which::Sigma => ks.sigma(k),
            Which::GammaMinusOne => {
                let s = ks.sigma(k);
                // cosh μ − 1 without cancellation
                s * s / (ks.gamma(k) + 1.0)
            }
        }
    }
}

/// Real field sampled on the `M³` grid `x = j/M`, `j ∈ [−M/2, M/2)³`.
#[derive(Debug, Clone)]
pub struct TorusField {
    m: usize,
    values: Vec<f64>,
    imag_residue: f64,
    nyquist_ratio: f64,
}

impl TorusField {
    /// Field from raw values stored with index `j mod M` per axis, `x` fastest.
    pub fn from_values(m: usize, values: Vec<f64>) -> Result<Self> {
        if !m.is_power_of_two() || m < 2 {
            return Err(Error::GridSize(m));
        }
        if values.len() != m * m * m {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                m * m * m,
                values.len()
            )));
        }
        Ok(Self {
            m,
            values,
            imag_residue: 0.0,
            nyquist_ratio: 0.0,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest `|Im|` left after the inverse transform, relative to `max |Re|`.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    pub fn nyquist_ratio(&self) -> f64 {
        self.nyquist_ratio
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.m + j) * self.m + i
    }

    /// Value at grid offset `j ∈ [−M/2, M/2)³`.
    pub fn at(&self, j: [i64; 3]) -> f64 {
        let m = self.m as i64;
        let w = |x: i64| x.rem_euclid(m) as usize;
        self.values[self.index(w(j[0]), w(j[1]), w(j[2]))]
    }

    /// Signed grid offset of storage index `i`.
    #[inline]
    fn offset(&self, i: usize) -> i64 {
        let h = self.m / 2;
        if i >= h {
            i as i64 - self.m as i64
        } else {
            i as i64
        }
    }

    /// `(1/M³) Σ |field|²`.
    pub fn l2_squared(&self) -> f64 {
        let parts: Vec<f64> = self
            .values
            .par_chunks(self.m * self.m)
            .map(|s| s.iter().map(|v| v * v).collect::<KahanSum>().value())
            .collect();
        kahan(&parts) / (self.m as f64).powi(3)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

fn coefficient_table(ks: &KernelSet, which: Which, m_max: usize) -> Vec<f64> {
    (0..=m_max)
        .into_par_iter()
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                which.coefficient(ks, 2.0 * PI * (m as f64).sqrt())
            }
        })
        .collect()
}

/// `max |c_p|` over the lattice shells with `M/2 − 1 < |n| ≤ M/2`, relative to `max |c_p|`.
pub fn nyquist_ratio(ks: &KernelSet, which: Which, m: usize) -> f64 {
    let h = (m / 2) as f64;
    let lo = ((h - 1.0) * (h - 1.0)) as usize + 1;
    let hi = (h * h) as usize;
    let reps = ShellReps::shared(hi);
    let edge = (lo..=hi)
        .filter(|&s| !reps.shell(s).is_empty())
        .map(|s| which.coefficient(ks, 2.0 * PI * (s as f64).sqrt()).abs())
        .fold(0.0, f64::max);
    let peak = (1..=hi)
        .filter(|&s| !reps.shell(s).is_empty())
        .map(|s| which.coefficient(ks, 2.0 * PI * (s as f64).sqrt()).abs())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        0.0
    } else {
        edge / peak
    }
}

fn required_grid(ks: &KernelSet, which: Which, m: usize, tolerance: f64) -> usize {
    let mut mm = m;
    while mm < 1 << 14 {
        mm *= 2;
        if nyquist_ratio(ks, which, mm) <= tolerance {
            return mm;
        }
    }
    mm
}

/// `Σ_{|n_i| < M/2} c_p e^{ip·x}` on the `M³` grid, with the default aliasing tolerance.
pub fn kernel_fft(ks: &KernelSet, which: Which, m: usize) -> Result<TorusField> {
    kernel_fft_with(ks, which, m, DEFAULT_ALIASING_TOLERANCE)
}

pub fn kernel_fft_with(ks: &KernelSet, which: Which, m: usize, tolerance: f64) -> Result<TorusField> {
    if !m.is_power_of_two() || m < 4 {
        return Err(Error::GridSize(m));
    }
    let ratio = nyquist_ratio(ks, which, m);
    if ratio > tolerance {
        return Err(Error::Aliasing {
            ratio,
            tolerance,
            required: required_grid(ks, which, m, tolerance),
        });
    }
    let h = (m / 2) as i64;
    let table = coefficient_table(ks, which, 3 * (h as usize) * (h as usize));
    let mut data = vec![Complex64::new(0.0, 0.0); m * m * m];
    data.par_chunks_mut(m * m).enumerate().for_each(|(k, plane)| {
        let nk = if k as i64 >= h { k as i64 - m as i64 } else { k as i64 };
        if nk == -h {
            return;
        }
        for j in 0..m {
            let nj = if j as i64 >= h { j as i64 - m as i64 } else { j as i64 };
            if nj == -h {
                continue;
            }
            for i in 0..m {
                let ni = if i as i64 >= h { i as i64 - m as i64 } else { i as i64 };
                if ni == -h {
                    continue;
                }
                let s = (ni * ni + nj * nj + nk * nk) as usize;
                plane[j * m + i] = Complex64::new(table[s], 0.0);
            }
        }
    });
    inverse_fft_3d(&mut data, m);
    let max_re = data.iter().fold(0.0f64, |a, c| a.max(c.re.abs()));
    let max_im = data.iter().fold(0.0f64, |a, c| a.max(c.im.abs()));
    Ok(TorusField {
        m,
        values: data.iter().map(|c| c.re).collect(),
        imag_residue: if max_re > 0.0 { max_im / max_re } else { max_im },
        nyquist_ratio: ratio,
    })
}

/// Unnormalized inverse transform `Σ_n c_n e^{2πi n·j/M}` along all three axes.
fn inverse_fft_3d(data: &mut [Complex64], m: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_inverse(m);
    // x lines are contiguous
    data.par_chunks_mut(m).for_each(|line| fft.process(line));
    // y lines: within each z-plane
    data.par_chunks_mut(m * m).for_each(|plane| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            for j in 0..m {
                buf[j] = plane[j * m + i];
            }
            fft.process(&mut buf);
            for j in 0..m {
                plane[j * m + i] = buf[j];
            }
        }
    });
    // z lines: transpose through column blocks
    let plane = m * m;
    let columns: Vec<Vec<Complex64>> = (0..plane)
        .into_par_iter()
        .map(|c| {
            let mut buf: Vec<Complex64> = (0..m).map(|k| data[k * plane + c]).collect();
            fft.process(&mut buf);
            buf
        })
        .collect();
    for (c, col) in columns.into_iter().enumerate() {
        for (k, v) in col.into_iter().enumerate() {
            data[k * plane + c] = v;
        }
    }
}

/// Radial envelope of a field in bins of width `1/M`, up to `|x| = 1/2`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DecayProfile {
    pub radius: Vec<f64>,
    pub max_abs: Vec<f64>,
    pub mean_abs: Vec<f64>,
}

impl DecayProfile {
    pub fn len(&self) -> usize {
        self.radius.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radius.is_empty()
    }

    /// Log-log slope of `max_abs` over radii in `[lo, hi]`.
    pub fn window_slope(&self, lo: f64, hi: f64) -> Result<LineFit> {
        const NEEDED: usize = 3;
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .radius
            .iter()
            .zip(&self.max_abs)
            .filter(|(r, v)| **r >= lo && **r <= hi && **r > 0.0 && **v > 0.0)
            .map(|(r, v)| (r.ln(), v.ln()))
            .unzip();
        if x.len() < NEEDED {
            return Err(Error::WindowEmpty { lo, hi, needed: NEEDED });
        }
        line(&x, &y)
    }

    /// Writes `radius,max_abs,mean_abs` rows, at most `rows` of them.
    pub fn write_csv(&self, path: impl AsRef<Path>, rows: usize) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["radius", "max_abs", "mean_abs"])?;
        for i in 0..rows.min(self.len()) {
            w.write_record(&[
                format!("{:.10e}", self.radius[i]),
                format!("{:.10e}", self.max_abs[i]),
                format!("{:.10e}", self.mean_abs[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn decay_profile(field: &TorusField) -> DecayProfile {
    let m = field.m;
    let bins = m / 2 + 1;
    let partial: Vec<(Vec<f64>, Vec<f64>, Vec<u64>)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let mut mx = vec![0.0f64; bins];
            let mut sum = vec![0.0f64; bins];
            let mut cnt = vec![0u64; bins];
            let zk = field.offset(k) as f64;
            for j in 0..m {
                let yj = field.offset(j) as f64;
                for i in 0..m {
                    let xi = field.offset(i) as f64;
                    let b = (xi * xi + yj * yj + zk * zk).sqrt().round() as usize;
                    if b < bins {
                        let v = field.values[field.index(i, j, k)].abs();
                        mx[b] = mx[b].max(v);
                        sum[b] += v;
                        cnt[b] += 1;
                    }
                }
            }
            (mx, sum, cnt)
        })
        .collect();
    let mut mx = vec![0.0f64; bins];
    let mut sums = vec![KahanSum::new(); bins];
    let mut cnt = vec![0u64; bins];
    for (a, s, c) in partial {
        for b in 0..bins {
            mx[b] = mx[b].max(a[b]);
            sums[b].add(s[b]);
            cnt[b] += c[b];
        }
    }
    let mut p = DecayProfile {
        radius: Vec::new(),
        max_abs: Vec::new(),
        mean_abs: Vec::new(),
    };
    for b in 0..bins {
        if cnt[b] > 0 {
            p.radius.push(b as f64 / m as f64);
            p.max_abs.push(mx[b]);
            p.mean_abs.push(sums[b].value() / cnt[b] as f64);
        }
    }
    p
}

/// `(Σ_u ‖f_u‖₂, Σ_u ‖f_u‖₁)` over the cubes of side `ℓ_B` centred on
/// `ℓ_B ℤ³ ∩ Λ`, trimmed to the torus; norms use the measure `dx`.
pub fn localized_norms(field: &TorusField, l_b: f64) -> Result<(f64, f64)> {
    let m = field.m;
    if l_b < 2.0 / m as f64 {
        return Err(Error::InvalidParams(format!(
            "box side {l_b:.4e} is below two grid cells (2/M = {:.4e})",
            2.0 / m as f64
        )));
    }
    // half-open cubes [c − ℓ/2, c + ℓ/2)
    let cell = |i: usize| -> i64 { ((field.offset(i) as f64 / m as f64) / l_b + 0.5).floor() as i64 };
    let idx: Vec<i64> = (0..m).map(cell).collect();
    let lo = *idx.iter().min().unwrap();
    let hi = *idx.iter().max().unwrap();
    let nb = (hi - lo + 1) as usize;
    let boxes = nb * nb * nb;
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let mut l2 = vec![0.0; boxes];
            let mut l1 = vec![0.0; boxes];
            let bk = (idx[k] - lo) as usize;
            #[allow(clippy::needless_range_loop)]
            for j in 0..m {
                let bj = (idx[j] - lo) as usize;
                for i in 0..m {
                    let bi = (idx[i] - lo) as usize;
                    let b = (bk * nb + bj) * nb + bi;
                    let v = field.values[field.index(i, j, k)];
                    l2[b] += v * v;
                    l1[b] += v.abs();
                }
            }
            (l2, l1)
        })
        .collect();
    let vol = (m as f64).powi(3);
    let mut l2 = vec![KahanSum::new(); boxes];
    let mut l1 = vec![KahanSum::new(); boxes];
    for (a, b) in partial {
        for u in 0..boxes {
            l2[u].add(a[u]);
            l1[u].add(b[u]);
        }
    }
    let s2: KahanSum = l2.iter().map(|k| (k.value() / vol).sqrt()).collect();
    let s1: KahanSum = l1.iter().map(|k| k.value() / vol).collect();
    Ok((s2.value(), s1.value()))
}

/// Lattice points with `inner < |p| ≤ outer`, plus a radial weight evaluated once per point.
fn weighted_points(inner: f64, outer: f64, w: impl Fn(f64) -> f64 + Sync) -> Vec<(Vec3, f64)> {
    let m_hi = (outer / (2.0 * PI)).powi(2).floor() as usize;
    let reps = ShellReps::shared(m_hi.max(1));
    (1..=m_hi)
        .flat_map(|s| reps.points(s))
        .map(momentum)
        .filter(|p| norm(*p) > inner)
        .filter_map(|p| {
            let v = w(norm(p));
            (v != 0.0).then_some((p, v))
        })
        .collect()
}

/// Truncated double Fourier series of the cubic kernel, sampled along the
/// rays `(x e, 0)` and `(0, y e)`; all momenta satisfy `|p|, |q| ≤ truncation · p_η`.
pub struct CubicRays {
    ps: Vec<(Vec3, f64)>,
    qs: Vec<(Vec3, f64)>,
    /// `Σ_q A_{p,q}` for each retained `p`.
    col: Vec<f64>,
    /// `Σ_p A_{p,q}` for each retained `q`.
    row: Vec<f64>,
}

impl CubicRays {
    pub fn new(ks: &KernelSet, truncation: f64) -> Self {
        let pe = ks.params().p_eta;
        let outer = truncation * pe;
        let n = ks.params().n;
        // 2p²η(p)/√N and σ(q)
        let ps = weighted_points(pe, outer, |k| 2.0 * k * k * ks.eta(k) / n.sqrt());
        let qs = weighted_points(ks.params().p_sigma, outer, |k| ks.sigma(k));
        let a = |(p, wp): &(Vec3, f64), (q, wq): &(Vec3, f64)| {
            wp * wq / (norm2(*p) + norm2(*q) + norm2(add(*p, *q)))
        };
        let col = ps
            .par_iter()
            .map(|pp| qs.iter().map(|qq| a(pp, qq)).collect::<KahanSum>().value())
            .collect();
        let row = qs
            .par_iter()
            .map(|qq| ps.iter().map(|pp| a(pp, qq)).collect::<KahanSum>().value())
            .collect();
        Self { ps, qs, col, row }
    }

    /// `Ǎ(0, 0) = Σ_{p,q} A_{p,q}`.
    pub fn at_origin(&self) -> f64 {
        kahan(&self.col)
    }

    /// `Ǎ(x, 0)`.
    pub fn along_x(&self, x: Vec3) -> f64 {
        self.ps
            .iter()
            .zip(&self.col)
            .map(|((p, _), c)| c * crate::coefficients::dot(*p, x).cos())
            .collect::<KahanSum>()
            .value()
    }

    /// `Ǎ(0, y)`.
    pub fn along_y(&self, y: Vec3) -> f64 {
        self.qs
            .iter()
            .zip(&self.row)
            .map(|((q, _), r)| r * crate::coefficients::dot(*q, y).cos())
            .collect::<KahanSum>()
            .value()
    }

    pub fn points(&self) -> (usize, usize) {
        (self.ps.len(), self.qs.len())
    }
}

/// Pointwise `Ǎ(x, y)` by the truncated double sum; fails if shrinking the
/// truncation by a quarter moves the value by more than `tolerance`.
pub fn cubic_kernel_position(
    ks: &KernelSet,
    x: Vec3,
    y: Vec3,
    truncation: f64,
    tolerance: f64,
) -> Result<f64> {
    let pe = ks.params().p_eta;
    let eval = |t: f64| -> f64 {
        let outer = t * pe;
        let n = ks.params().n;
        let ps = weighted_points(pe, outer, |k| 2.0 * k * k * ks.eta(k) / n.sqrt());
        let qs = weighted_points(ks.params().p_sigma, outer, |k| ks.sigma(k));
        let rows: Vec<f64> = ps
            .par_iter()
            .map(|(p, wp)| {
                let px = crate::coefficients::dot(*p, x);
                qs.iter()
                    .map(|(q, wq)| {
                        wp * wq * (px + crate::coefficients::dot(*q, y)).cos()
                            / (norm2(*p) + norm2(*q) + norm2(add(*p, *q)))
                    })
                    .collect::<KahanSum>()
                    .value()
            })
            .collect();
        kahan(&rows)
    };
    let full = eval(truncation);
    let coarse = eval(0.75 * truncation);
    let estimate = (full - coarse).abs();
    if estimate > tolerance {
        return Err(Error::Truncation { estimate, tolerance });
    }
    Ok(full)
}

/// Writes a localized-norm table `n,l_b,sum_l2,sum_l1,l2,ratio`.
pub fn write_localized_table(path: impl AsRef<Path>, rows: &[(f64, f64, f64, f64, f64)]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "n,l_b,sum_l2,sum_l1,l2,ratio")?;
    for &(n, lb, s2, s1, l2) in rows {
        let ratio = if l2 > 0.0 { s2 / l2 } else { 0.0 };
        writeln!(f, "{n:e},{lb:.10e},{s2:.10e},{s1:.10e},{l2:.10e},{ratio:.10e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{Interaction, ModelParams};

    fn ks(n: f64) -> KernelSet {
        Interaction::soft_sphere(2.0, 1.0)
            .unwrap()
            .kernels(ModelParams::new(n, 0.6).unwrap())
    }

    #[test]
    fn grid_size_must_be_power_of_two() {
        assert!(matches!(kernel_fft(&ks(1e3), Which::Sigma, 48), Err(Error::GridSize(48))));
    }

    #[test]
    fn origin_and_parseval() {
        let k = ks(1e3);
        let m = 32;
        let f = kernel_fft_with(&k, Which::Sigma, m, 1.0).unwrap();
        let h = (m / 2) as i64;
        let mut sum = KahanSum::new();
        let mut sq = KahanSum::new();
        for a in -h + 1..h {
            for b in -h + 1..h {
                for c in -h + 1..h {
                    let s = k.sigma_at(momentum([a, b, c]));
                    sum.add(s);
                    sq.add(s * s);
                }
            }
        }
        assert!((f.at([0, 0, 0]) - sum.value()).abs() <= 1e-10 * sum.value().abs());
        assert!((f.l2_squared() - sq.value()).abs() <= 1e-10 * sq.value());
        assert!(f.imag_residue() < 1e-12);
    }

    #[test]
    fn partition_identity_for_single_box() {
        let m = 16;
        let mut v = vec![0.0; m * m * m];
        v[0] = 2.0;
        v[1] = -1.0;
        let f = TorusField::from_values(m, v).unwrap();
        let (s2, s1) = localized_norms(&f, 0.25).unwrap();
        assert!((s2 - f.l2_squared().sqrt()).abs() < 1e-15);
        assert!((s1 - 3.0 / 4096.0).abs() < 1e-15);
    }

    #[test]
    fn profile_bins() {
        let m = 16;
        let f = TorusField::from_values(m, vec![1.0; m * m * m]).unwrap();
        let p = decay_profile(&f);
        assert_eq!(p.len(), m / 2 + 1);
        assert!(p.max_abs.iter().all(|&v| v == 1.0));
        assert!(matches!(p.window_slope(0.3, 0.31), Err(Error::WindowEmpty { .. })));
    }
}

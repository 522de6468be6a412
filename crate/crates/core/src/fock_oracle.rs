//! Truncated bosonic Fock space over a finite set of lattice momenta.
//!
//! Basis states are occupation vectors with a per-mode cap and a total cap,
//! optionally restricted to one total-momentum sector. Operators are built
//! from normal-ordered monomials `c a†…a† a…a`, grouped by their
//! annihilation multiset, and stored as CSR matrices. Matrix elements that
//! would leave the truncated basis are dropped; the mass sitting on capped
//! states is reported as leakage.

use crate::asymptotics::bogoliubov_pair_energy;
use crate::coefficients::{momentum, norm, KernelSet, Vec3};
use crate::error::{Error, Result};
use crate::lattice::{KahanSum, ShellReps};
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use sprs::{CsMat, TriMat};
use std::collections::{BTreeMap, HashMap};

pub type Mode = [i64; 3];

/// Creation multisets and summed coefficients sharing one annihilation multiset.
type CreationGroup = Vec<(Vec<usize>, f64)>;

/// Default limit on the basis dimension.
pub const DEFAULT_BUDGET: usize = 200_000;

fn neg_mode(m: Mode) -> Mode {
    [-m[0], -m[1], -m[2]]
}

fn add_mode(a: Mode, b: Mode) -> Mode {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub_mode(a: Mode, b: Mode) -> Mode {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn is_zero(m: Mode) -> bool {
    m == [0, 0, 0]
}

/// All integer vectors whose squared norm is in `shells`, in a fixed order (origin first).
pub fn shell_modes(shells: &[usize]) -> Vec<Mode> {
    let m_max = shells.iter().copied().max().unwrap_or(0);
    let reps = ShellReps::shared(m_max.max(1));
    let mut sorted: Vec<usize> = shells.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.into_iter().flat_map(|s| reps.points(s)).collect()
}

/// `{0, ±p, ±q, ±(p+q)}`: the smallest closed list on which the cubic kernel acts.
pub fn triangle_modes(p: Mode, q: Mode) -> Vec<Mode> {
    let r = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
    vec![[0, 0, 0], p, neg_mode(p), q, neg_mode(q), r, neg_mode(r)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceOptions {
    /// Keep only states of this total momentum (integer units).
    pub sector: Option<Mode>,
    pub budget: usize,
}

impl Default for SpaceOptions {
    fn default() -> Self {
        Self {
            sector: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Normal-ordered monomial `coef · Π a†_{create} Π a_{annihilate}` (mode indices).
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub create: Vec<usize>,
    pub annihilate: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FockRep {
    modes: Vec<Mode>,
    neg: Vec<usize>,
    n_max: u8,
    total_cap: u32,
    sector: Option<Mode>,
    basis: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

/// Basis with the default options (no sector restriction).
pub fn build_space(modes: &[Mode], n_max: u8, total_cap: u32) -> Result<FockRep> {
    FockRep::new(modes, n_max, total_cap, SpaceOptions::default())
}

impl FockRep {
    pub fn new(modes: &[Mode], n_max: u8, total_cap: u32, opts: SpaceOptions) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidModes("mode list is empty".into()));
        }
        let mut seen = HashMap::new();
        for (i, &m) in modes.iter().enumerate() {
            if seen.insert(m, i).is_some() {
                return Err(Error::InvalidModes(format!("duplicate mode {m:?}")));
            }
        }
        let neg = modes
            .iter()
            .map(|&m| {
                seen.get(&neg_mode(m))
                    .copied()
                    .ok_or_else(|| Error::InvalidModes(format!("mode {m:?} present but {:?} missing", neg_mode(m))))
            })
            .collect::<Result<Vec<_>>>()?;
        if n_max == 0 || total_cap == 0 {
            return Err(Error::InvalidModes("caps must be positive".into()));
        }
        let mut basis = Vec::new();
        let mut occ = vec![0u8; modes.len()];
        let limit = opts.budget.saturating_mul(64).max(opts.budget);
        let mut visited = 0usize;
        enumerate(
            modes,
            0,
            n_max,
            total_cap,
            [0, 0, 0],
            opts.sector,
            &mut occ,
            &mut basis,
            &mut visited,
            limit,
            opts.budget,
        )?;
        if basis.len() > opts.budget {
            return Err(Error::DimensionBudget {
                dimension: basis.len(),
                budget: opts.budget,
            });
        }
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        Ok(Self {
            modes: modes.to_vec(),
            neg,
            n_max,
            total_cap,
            sector: opts.sector,
            basis,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn n_max(&self) -> u8 {
        self.n_max
    }

    pub fn total_cap(&self) -> u32 {
        self.total_cap
    }

    pub fn sector(&self) -> Option<Mode> {
        self.sector
    }

    pub fn mode_index(&self, m: Mode) -> Option<usize> {
        self.modes.iter().position(|&x| x == m)
    }

    /// Index of `−p` for mode index `i`.
    pub fn negative(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn occupations(&self, i: usize) -> &[u8] {
        &self.basis[i]
    }

    pub fn state_index(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn total_momentum(&self, i: usize) -> Mode {
        let mut t = [0i64; 3];
        for (m, &n) in self.modes.iter().zip(&self.basis[i]) {
            for d in 0..3 {
                t[d] += m[d] * n as i64;
            }
        }
        t
    }

    /// Vacuum vector; fails if the vacuum is outside the chosen sector.
    pub fn vacuum(&self) -> Result<Vec<f64>> {
        let i = self
            .state_index(&vec![0u8; self.modes.len()])
            .ok_or_else(|| Error::InvalidModes("vacuum not in the selected sector".into()))?;
        let mut v = vec![0.0; self.dim()];
        v[i] = 1.0;
        Ok(v)
    }

    /// True if some mode sits at its cap or the total occupation equals the total cap.
    pub fn is_capped(&self, i: usize) -> bool {
        let b = &self.basis[i];
        b.iter().any(|&n| n >= self.n_max) || b.iter().map(|&n| n as u32).sum::<u32>() >= self.total_cap
    }

    /// Fraction of `‖v‖²` on capped states.
    pub fn leakage(&self, v: &[f64]) -> f64 {
        let total: f64 = v.iter().map(|x| x * x).sum();
        if total == 0.0 {
            return 0.0;
        }
        let capped: f64 = v
            .iter()
            .enumerate()
            .filter(|(i, _)| self.is_capped(*i))
            .map(|(_, x)| x * x)
            .sum();
        capped / total
    }

    /// CSR matrix of a sum of monomials on the truncated basis.
    pub fn operator(&self, terms: &[Term]) -> CsMat<f64> {
        let mut groups: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, f64>> = BTreeMap::new();
        for t in terms {
            if t.coef == 0.0 {
                continue;
            }
            let mut a = t.annihilate.clone();
            a.sort_unstable();
            let mut c = t.create.clone();
            c.sort_unstable();
            *groups.entry(a).or_default().entry(c).or_insert(0.0) += t.coef;
        }
        let groups: Vec<(Vec<usize>, CreationGroup)> = groups
            .into_iter()
            .map(|(a, cs)| (a, cs.into_iter().filter(|(_, v)| *v != 0.0).collect()))
            .collect();
        let columns: Vec<Vec<(usize, f64)>> = (0..self.dim())
            .into_par_iter()
            .map(|col| {
                let mut out = Vec::new();
                let src = &self.basis[col];
                for (ann, creates) in &groups {
                    let mut occ = src.clone();
                    let mut amp = 1.0;
                    let mut ok = true;
                    for &m in ann {
                        if occ[m] == 0 {
                            ok = false;
                            break;
                        }
                        amp *= (occ[m] as f64).sqrt();
                        occ[m] -= 1;
                    }
                    if !ok {
                        continue;
                    }
                    for (cr, coef) in creates {
                        let mut o = occ.clone();
                        let mut a = amp;
                        let mut fits = true;
                        for &m in cr {
                            if o[m] >= self.n_max {
                                fits = false;
                                break;
                            }
                            o[m] += 1;
                            a *= (o[m] as f64).sqrt();
                        }
                        if !fits {
                            continue;
                        }
                        if let Some(&row) = self.index.get(&o) {
                            out.push((row, coef * a));
                        }
                    }
                }
                out
            })
            .collect();
        let mut tri = TriMat::new((self.dim(), self.dim()));
        for (col, entries) in columns.into_iter().enumerate() {
            for (row, v) in entries {
                tri.add_triplet(row, col, v);
            }
        }
        tri.to_csr()
    }

    pub fn annihilation(&self, mode: usize) -> CsMat<f64> {
        self.operator(&[Term {
            coef: 1.0,
            create: vec![],
            annihilate: vec![mode],
        }])
    }

    pub fn creation(&self, mode: usize) -> CsMat<f64> {
        adjoint(&self.annihilation(mode))
    }

    /// `Σ_p a†_p a_p` over all modes.
    pub fn number(&self) -> CsMat<f64> {
        let terms: Vec<Term> = (0..self.modes.len())
            .map(|m| Term {
                coef: 1.0,
                create: vec![m],
                annihilate: vec![m],
            })
            .collect();
        self.operator(&terms)
    }

    pub fn mode_number(&self, mode: usize) -> CsMat<f64> {
        self.operator(&[Term {
            coef: 1.0,
            create: vec![mode],
            annihilate: vec![mode],
        }])
    }

    /// True if every stored element connects states of equal total momentum.
    pub fn conserves_momentum(&self, op: &CsMat<f64>) -> bool {
        op.iter().all(|(_, (r, c))| self.total_momentum(r) == self.total_momentum(c))
    }

    /// `max |⟨v, [a_p, a_q†] v⟩ − δ_pq|` over basis states `v` away from the caps.
    pub fn ccr_residual(&self) -> f64 {
        let a: Vec<CsMat<f64>> = (0..self.modes.len()).map(|m| self.annihilation(m)).collect();
        let ad: Vec<CsMat<f64>> = a.iter().map(adjoint).collect();
        let interior: Vec<usize> = (0..self.dim())
            .filter(|&i| {
                let b = &self.basis[i];
                b.iter().all(|&n| n + 1 < self.n_max) && b.iter().map(|&n| n as u32).sum::<u32>() + 2 <= self.total_cap
            })
            .collect();
        let mut worst = 0.0f64;
        #[allow(clippy::needless_range_loop)]
        for p in 0..a.len() {
            for q in 0..a.len() {
                let ab = &a[p] * &ad[q];
                let ba = &ad[q] * &a[p];
                for &i in &interior {
                    let x = ab.get(i, i).copied().unwrap_or(0.0) - ba.get(i, i).copied().unwrap_or(0.0);
                    let target = if p == q { 1.0 } else { 0.0 };
                    worst = worst.max((x - target).abs());
                }
            }
        }
        worst
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    modes: &[Mode],
    i: usize,
    n_max: u8,
    remaining: u32,
    mom: Mode,
    sector: Option<Mode>,
    occ: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
    visited: &mut usize,
    limit: usize,
    budget: usize,
) -> Result<()> {
    if i == modes.len() {
        *visited += 1;
        if *visited > limit {
            return Err(Error::DimensionBudget {
                dimension: *visited,
                budget,
            });
        }
        if sector.is_none_or(|s| s == mom) {
            out.push(occ.clone());
            if out.len() > budget {
                return Err(Error::DimensionBudget {
                    dimension: out.len(),
                    budget,
                });
            }
        }
        return Ok(());
    }
    let top = (n_max as u32).min(remaining);
    for n in 0..=top {
        occ[i] = n as u8;
        let m = modes[i];
        let next = [mom[0] + m[0] * n as i64, mom[1] + m[1] * n as i64, mom[2] + m[2] * n as i64];
        enumerate(modes, i + 1, n_max, remaining - n, next, sector, occ, out, visited, limit, budget)?;
    }
    occ[i] = 0;
    Ok(())
}

/// Transpose (the adjoint for real data).
pub fn adjoint(m: &CsMat<f64>) -> CsMat<f64> {
    m.transpose_view().to_csr()
}

/// `y = M x` with rows reduced in index order.
pub fn matvec(m: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    let csr = if m.is_csr() { None } else { Some(m.to_csr()) };
    let m = csr.as_ref().unwrap_or(m);
    let indptr = m.indptr();
    let ip = indptr.raw_storage();
    let idx = m.indices();
    let data = m.data();
    (0..m.rows())
        .into_par_iter()
        .map(|r| {
            let mut s = 0.0;
            for k in ip[r]..ip[r + 1] {
                s += data[k] * x[idx[k]];
            }
            s
        })
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).collect::<KahanSum>().value()
}

pub fn vec_norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `⟨x, M x⟩`.
pub fn expectation(m: &CsMat<f64>, x: &[f64]) -> f64 {
    dot(x, &matvec(m, x))
}

/// `max |M_ij − M_ji|`.
pub fn max_asymmetry(m: &CsMat<f64>) -> f64 {
    let t = adjoint(m);
    let mut worst = 0.0f64;
    for (v, (r, c)) in m.iter() {
        worst = worst.max((v - t.get(r, c).copied().unwrap_or(0.0)).abs());
    }
    for (v, (r, c)) in t.iter() {
        worst = worst.max((v - m.get(r, c).copied().unwrap_or(0.0)).abs());
    }
    worst
}

fn one_norm(m: &CsMat<f64>) -> f64 {
    let mut col = vec![0.0f64; m.cols()];
    for (v, (_, c)) in m.iter() {
        col[c] += v.abs();
    }
    col.into_iter().fold(0.0, f64::max)
}

/// Maximum number of Taylor terms per scaling step.
const MAX_TERMS: usize = 60;

/// `e^{tX} v` by scaled Taylor series (steps chosen so each has `‖tX‖₁/s ≤ 1`).
pub fn expm_action(x: &CsMat<f64>, t: f64, v: &[f64]) -> Result<Vec<f64>> {
    let nrm = one_norm(x) * t.abs();
    let steps = nrm.ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut y = v.to_vec();
    for _ in 0..steps {
        let mut term = y.clone();
        let mut acc = y.clone();
        let mut converged = false;
        for k in 1..=MAX_TERMS {
            term = matvec(x, &term);
            let f = h / k as f64;
            term.iter_mut().for_each(|e| *e *= f);
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += b;
            }
            if vec_norm(&term) <= 1e-17 * vec_norm(&acc).max(f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SeriesNonConvergent { terms: MAX_TERMS });
        }
        y = acc;
    }
    Ok(y)
}

/// State vector over a truncated basis, with its norm and cap leakage.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OracleState {
    pub coefficients: Vec<f64>,
    pub norm: f64,
    pub leakage: f64,
}

impl OracleState {
    pub fn new(rep: &FockRep, coefficients: Vec<f64>) -> Self {
        let norm = vec_norm(&coefficients);
        let leakage = rep.leakage(&coefficients);
        Self {
            coefficients,
            norm,
            leakage,
        }
    }

    pub fn vacuum(rep: &FockRep) -> Result<Self> {
        Ok(Self::new(rep, rep.vacuum()?))
    }
}

fn mode_momentum(m: Mode) -> Vec3 {
    momentum(m)
}

/// `Σ_p |p|² a†_p a_p`.
pub fn kinetic(rep: &FockRep) -> CsMat<f64> {
    let terms: Vec<Term> = rep
        .modes()
        .iter()
        .enumerate()
        .map(|(i, &m)| Term {
            coef: crate::coefficients::norm2(mode_momentum(m)),
            create: vec![i],
            annihilate: vec![i],
        })
        .collect();
    rep.operator(&terms)
}

fn interaction_terms(rep: &FockRep, ks: &KernelSet) -> Vec<Term> {
    let pref = ks.n_kappa() / (2.0 * ks.params().n);
    let modes = rep.modes();
    let mut terms = Vec::new();
    for (ip, &p) in modes.iter().enumerate() {
        for (iq, &q) in modes.iter().enumerate() {
            for (is, &s) in modes.iter().enumerate() {
                let r = sub_mode(s, p);
                let t = sub_mode(q, r);
                if let Some(it) = rep.mode_index(t) {
                    terms.push(Term {
                        coef: pref * ks.v_hat(norm(momentum(r))),
                        create: vec![is, it],
                        annihilate: vec![iq, ip],
                    });
                }
            }
        }
    }
    terms
}

/// `(N^κ/2N) Σ V̂(r/L) a†_{p+r} a†_{q−r} a_q a_p` over the mode list.
pub fn interaction(rep: &FockRep, ks: &KernelSet) -> CsMat<f64> {
    rep.operator(&interaction_terms(rep, ks))
}

/// Kinetic plus interaction.
pub fn build_hamiltonian(rep: &FockRep, ks: &KernelSet) -> CsMat<f64> {
    &kinetic(rep) + &interaction(rep, ks)
}

/// Terms of `A† = Σ_{p,q} A_{p,q} a†_{p+q} a†_{−p} a†_{−q}` with `p, q, p+q ≠ 0` in the mode list.
pub fn cubic_creation_terms(rep: &FockRep, ks: &KernelSet, scale: f64) -> Vec<Term> {
    let modes = rep.modes();
    let mut terms = Vec::new();
    for &p in modes {
        for &q in modes {
            let s = add_mode(p, q);
            if is_zero(p) || is_zero(q) || is_zero(s) {
                continue;
            }
            let (Some(i_s), Some(i_p), Some(i_q)) =
                (rep.mode_index(s), rep.mode_index(neg_mode(p)), rep.mode_index(neg_mode(q)))
            else {
                continue;
            };
            let a = ks.cubic(momentum(p), momentum(q));
            if a != 0.0 {
                terms.push(Term {
                    coef: scale * a,
                    create: vec![i_s, i_p, i_q],
                    annihilate: vec![],
                });
            }
        }
    }
    terms
}

/// `A†` (times `scale`) as a matrix.
pub fn cubic_creation(rep: &FockRep, ks: &KernelSet, scale: f64) -> CsMat<f64> {
    rep.operator(&cubic_creation_terms(rep, ks, scale))
}

/// Terms of `C_N† = (N^κ√N₀/N) Σ_{p,r} V̂(r/L) σ_p a†_{p+r} a†_{−r} a†_{−p}`.
pub fn c_star_terms(rep: &FockRep, ks: &KernelSet, n0: f64) -> Vec<Term> {
    let pref = ks.n_kappa() * n0.sqrt() / ks.params().n;
    let modes = rep.modes();
    let mut terms = Vec::new();
    for &p in modes {
        for &r in modes {
            let s = add_mode(p, r);
            if is_zero(p) || is_zero(r) || is_zero(s) {
                continue;
            }
            let (Some(i_s), Some(i_r), Some(i_p)) =
                (rep.mode_index(s), rep.mode_index(neg_mode(r)), rep.mode_index(neg_mode(p)))
            else {
                continue;
            };
            let c = pref * ks.v_hat(norm(momentum(r))) * ks.sigma_at(momentum(p));
            if c != 0.0 {
                terms.push(Term {
                    coef: c,
                    create: vec![i_s, i_r, i_p],
                    annihilate: vec![],
                });
            }
        }
    }
    terms
}

pub fn c_star(rep: &FockRep, ks: &KernelSet, n0: f64) -> CsMat<f64> {
    rep.operator(&c_star_terms(rep, ks, n0))
}

/// Generator `B† − B` with `B = ½ Σ_p μ_p a_p a_{−p}`.
pub fn pair_generator(rep: &FockRep, ks: &KernelSet) -> CsMat<f64> {
    let terms: Vec<Term> = rep
        .modes()
        .iter()
        .enumerate()
        .filter(|(_, &m)| !is_zero(m))
        .map(|(i, &m)| Term {
            coef: 0.5 * ks.mu(norm(momentum(m))),
            create: vec![],
            annihilate: vec![i, rep.negative(i)],
        })
        .collect();
    let b = rep.operator(&terms);
    &adjoint(&b) - &b
}

/// Generator `A† − A` scaled by `scale`.
pub fn cubic_generator(rep: &FockRep, ks: &KernelSet, scale: f64) -> CsMat<f64> {
    let ad = cubic_creation(rep, ks, scale);
    &ad - &adjoint(&ad)
}

/// Applies `e^{B†−B}`.
pub fn apply_bogoliubov(rep: &FockRep, ks: &KernelSet, state: &OracleState) -> Result<OracleState> {
    let x = pair_generator(rep, ks);
    Ok(OracleState::new(rep, expm_action(&x, 1.0, &state.coefficients)?))
}

/// Applies `W = exp(√N₀ a₀† − √N₀ a₀)`; fails if the leakage exceeds `threshold`.
pub fn apply_weyl(rep: &FockRep, n0: f64, state: &OracleState, threshold: f64) -> Result<OracleState> {
    let z = rep
        .mode_index([0, 0, 0])
        .ok_or_else(|| Error::InvalidModes("zero mode missing".into()))?;
    let a = rep.annihilation(z);
    let x = &adjoint(&a) - &a;
    let out = OracleState::new(rep, expm_action(&x, n0.sqrt(), &state.coefficients)?);
    if out.leakage > threshold {
        return Err(Error::Leakage {
            leakage: out.leakage,
            threshold,
        });
    }
    Ok(out)
}

/// Applies `e^{s(A†−A)}`.
pub fn apply_cubic(rep: &FockRep, ks: &KernelSet, scale: f64, state: &OracleState) -> Result<OracleState> {
    let x = cubic_generator(rep, ks, scale);
    Ok(OracleState::new(rep, expm_action(&x, 1.0, &state.coefficients)?))
}

/// Lowest eigenvalue of `h` in the Krylov space generated from `start`.
pub fn lanczos_ground(h: &CsMat<f64>, start: &[f64], max_dim: usize) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let n0 = vec_norm(start);
    let mut v: Vec<f64> = start.iter().map(|x| x / n0).collect();
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for _ in 0..max_dim {
        let mut w = matvec(h, &v);
        let a = dot(&w, &v);
        alpha.push(a);
        basis.push(v.clone());
        // full reorthogonalization
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nb = vec_norm(&w);
        if nb < 1e-12 {
            break;
        }
        beta.push(nb);
        v = w.into_iter().map(|x| x / nb).collect();
    }
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    SymmetricEigen::new(t).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Result of the two-mode Bogoliubov diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadCheck {
    pub ground: f64,
    pub closed_form: f64,
    pub residual: f64,
}

/// Lowest eigenvalue of `Σ_{±p}[(p²+G) a†a + (G/2)(a†_p a†_{−p} + h.c.)]` on modes
/// `{0, ±n}` with per-mode cap `n_max`, against `√(p⁴+2p²G) − p² − G`.
pub fn quad_ground_energy(n: Mode, g: f64, n_max: u8) -> Result<QuadCheck> {
    let modes = [[0, 0, 0], n, neg_mode(n)];
    let rep = FockRep::new(
        &modes,
        n_max,
        3 * n_max as u32,
        SpaceOptions {
            sector: Some([0, 0, 0]),
            budget: DEFAULT_BUDGET,
        },
    )?;
    let k = norm(momentum(n));
    let mut terms = Vec::new();
    for i in [1usize, 2] {
        terms.push(Term {
            coef: k * k + g,
            create: vec![i],
            annihilate: vec![i],
        });
        terms.push(Term {
            coef: 0.5 * g,
            create: vec![i, rep.negative(i)],
            annihilate: vec![],
        });
        terms.push(Term {
            coef: 0.5 * g,
            create: vec![],
            annihilate: vec![i, rep.negative(i)],
        });
    }
    let h = rep.operator(&terms);
    let ground = lanczos_ground(&h, &rep.vacuum()?, rep.dim().min(400));
    let closed_form = bogoliubov_pair_energy(k, g);
    Ok(QuadCheck {
        ground,
        closed_form,
        residual: (ground - closed_form).abs(),
    })
}

/// [`quad_ground_energy`] with `G = N^κ V̂f(|p|/L)` from the kernel set.
pub fn quad_ground_energy_check(ks: &KernelSet, n: Mode, n_max: u8) -> Result<QuadCheck> {
    quad_ground_energy(n, ks.g(norm(momentum(n))), n_max)
}

/// `max_v ‖(e^{B−B†} a_p e^{B†−B} − γ_p a_p − σ_p a†_{−p}) v‖` over basis
/// states `v` with total occupation at most 2, on modes `{0, ±n}`.
pub fn bogoliubov_conjugation_residual(ks: &KernelSet, n: Mode, n_max: u8) -> Result<f64> {
    let modes = [[0, 0, 0], n, neg_mode(n)];
    let rep = FockRep::new(&modes, n_max, 3 * n_max as u32, SpaceOptions::default())?;
    let x = pair_generator(&rep, ks);
    let ip = 1;
    let a = rep.annihilation(ip);
    let adm = rep.creation(rep.negative(ip));
    let k = norm(momentum(n));
    let (g, s) = (ks.gamma(k), ks.sigma(k));
    let mut worst = 0.0f64;
    for i in 0..rep.dim() {
        if rep.occupations(i).iter().map(|&o| o as u32).sum::<u32>() > 2 {
            continue;
        }
        let mut v = vec![0.0; rep.dim()];
        v[i] = 1.0;
        let u = expm_action(&x, 1.0, &v)?;
        let au = matvec(&a, &u);
        let lhs = expm_action(&x, -1.0, &au)?;
        let av = matvec(&a, &v);
        let cv = matvec(&adm, &v);
        let r: Vec<f64> = (0..rep.dim()).map(|j| lhs[j] - g * av[j] - s * cv[j]).collect();
        worst = worst.max(vec_norm(&r));
    }
    Ok(worst)
}

/// `⟨e^{B†−B}Ω, 𝒩 e^{B†−B}Ω⟩` and `Σ σ_p²` over the nonzero modes.
pub fn bogoliubov_number(rep: &FockRep, ks: &KernelSet) -> Result<(f64, f64, f64)> {
    let psi = apply_bogoliubov(rep, ks, &OracleState::vacuum(rep)?)?;
    let num = expectation(&rep.number(), &psi.coefficients);
    let target: f64 = rep
        .modes()
        .iter()
        .filter(|m| !is_zero(**m))
        .map(|&m| ks.sigma_at(momentum(m)).powi(2))
        .sum();
    Ok((num, target, psi.leakage))
}

/// Energy decomposition of the cubic state at one kernel scale.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PertCheck {
    pub scale: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub leakage: f64,
}

/// Operators needed for the perturbative energy check, built once per space.
pub struct PertOperators {
    pub kinetic: CsMat<f64>,
    pub interaction: CsMat<f64>,
    pub c_star: CsMat<f64>,
    pub a_star: CsMat<f64>,
}

impl PertOperators {
    pub fn new(rep: &FockRep, ks: &KernelSet, n0: f64) -> Self {
        Self {
            kinetic: kinetic(rep),
            interaction: interaction(rep, ks),
            c_star: c_star(rep, ks, n0),
            a_star: cubic_creation(rep, ks, 1.0),
        }
    }
}

/// `⟨ξ, (𝒦 + 𝒞 + 𝒞† + 𝒱) ξ⟩` with `ξ = e^{s(A†−A)}Ω` against
/// `s⟨Ω,(A𝒞† + 𝒞A†)Ω⟩ + s²⟨Ω, A(𝒦+𝒱)A†Ω⟩`.
pub fn perturbative_energy_check(rep: &FockRep, ops: &PertOperators, scale: f64) -> Result<PertCheck> {
    let omega = rep.vacuum()?;
    let x = &(&ops.a_star - &adjoint(&ops.a_star)) * scale;
    let xi = expm_action(&x, 1.0, &omega)?;
    let c = adjoint(&ops.c_star);
    let h = &(&(&ops.kinetic + &ops.interaction) + &ops.c_star) + &c;
    let lhs = expectation(&h, &xi);
    let a_omega = matvec(&ops.a_star, &omega);
    let c_omega = matvec(&ops.c_star, &omega);
    let first = 2.0 * dot(&a_omega, &c_omega);
    let kv = &ops.kinetic + &ops.interaction;
    let second = expectation(&kv, &a_omega);
    let rhs = scale * first + scale * scale * second;
    Ok(PertCheck {
        scale,
        lhs,
        rhs,
        residual: lhs - rhs,
        leakage: rep.leakage(&xi),
    })
}

/// `⟨Ω, A 𝒞† Ω⟩` by sparse matrices and by direct index contraction.
pub fn cubic_contraction_two_ways(rep: &FockRep, ks: &KernelSet, n0: f64) -> Result<(f64, f64)> {
    let omega = rep.vacuum()?;
    let by_matrix = dot(
        &matvec(&cubic_creation(rep, ks, 1.0), &omega),
        &matvec(&c_star(rep, ks, n0), &omega),
    );
    let collect = |terms: Vec<Term>| {
        let mut m: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for t in terms {
            let mut k = t.create;
            k.sort_unstable();
            *m.entry(k).or_insert(0.0) += t.coef;
        }
        m
    };
    let a = collect(cubic_creation_terms(rep, ks, 1.0));
    let c = collect(c_star_terms(rep, ks, n0));
    let mut by_contraction = KahanSum::new();
    for (k, va) in &a {
        if let Some(vc) = c.get(k) {
            // ⟨a†_{k1}a†_{k2}a†_{k3}Ω, a†_{k1}a†_{k2}a†_{k3}Ω⟩ = Π m_k!
            let mut mult = 1.0;
            let mut run = 1.0;
            for w in 1..k.len() {
                if k[w] == k[w - 1] {
                    run += 1.0;
                    mult *= run;
                } else {
                    run = 1.0;
                }
            }
            by_contraction.add(va * vc * mult);
        }
    }
    Ok((by_matrix, by_contraction.value()))
}

/// `⟨ψ, 𝒱_N ψ⟩` for `ψ = a†_p a†_{−p} Ω` in Fock space.
pub fn two_body_expectation(ks: &KernelSet, n: Mode) -> Result<f64> {
    let modes = shell_modes(&[0, n[0].pow(2) as usize + n[1].pow(2) as usize + n[2].pow(2) as usize]);
    let rep = build_space(&modes, 2, 2)?;
    let ip = rep.mode_index(n).expect("mode present");
    let im = rep.negative(ip);
    let psi = matvec(&rep.creation(ip), &matvec(&rep.creation(im), &rep.vacuum()?));
    Ok(expectation(&interaction(&rep, ks), &psi) / dot(&psi, &psi))
}

/// Same expectation in first quantization: `v(x₁ − x₂)` with Fourier
/// coefficients `(N^κ/N) V̂(k/L)` in the symmetric plane-wave state of `(p, −p)`.
pub fn two_body_first_quantized(ks: &KernelSet, n: Mode) -> f64 {
    let configs = [(n, neg_mode(n)), (neg_mode(n), n)];
    let v = |k: Mode| ks.n_kappa() / ks.params().n * ks.v_hat(norm(momentum(k)));
    let mut total = 0.0;
    for &(p1, p2) in &configs {
        for &(q1, q2) in &configs {
            // e^{ik(x₁−x₂)} maps (p1, p2) to (p1 + k, p2 − k)
            let k = sub_mode(q1, p1);
            if sub_mode(p2, k) == q2 {
                total += 0.5 * v(k);
            }
        }
    }
    total
}

/// Summary of the composed trial state `W e^{B†−B} e^{A†−A} Ω`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompositeCheck {
    pub number: f64,
    pub lower_bound: f64,
    pub pair_amplitude: f64,
    pub leakage: f64,
}

/// Particle number of the composed state and the largest `|⟨ξ, a_p a_{−p} ξ⟩|` for `ξ = e^{A†−A}Ω`.
pub fn composite_state_check(rep: &FockRep, ks: &KernelSet, n0: f64, cubic_scale: f64) -> Result<CompositeCheck> {
    let omega = OracleState::vacuum(rep)?;
    let xi = apply_cubic(rep, ks, cubic_scale, &omega)?;
    let mut pair = 0.0f64;
    for (i, &m) in rep.modes().iter().enumerate() {
        if is_zero(m) {
            continue;
        }
        let op = rep.operator(&[Term {
            coef: 1.0,
            create: vec![],
            annihilate: vec![i, rep.negative(i)],
        }]);
        pair = pair.max(dot(&xi.coefficients, &matvec(&op, &xi.coefficients)).abs());
    }
    let b = apply_bogoliubov(rep, ks, &xi)?;
    let psi = apply_weyl(rep, n0, &b, 1.0)?;
    let number = expectation(&rep.number(), &psi.coefficients);
    let sigma2: f64 = rep
        .modes()
        .iter()
        .filter(|m| !is_zero(**m))
        .map(|&m| ks.sigma_at(momentum(m)).powi(2))
        .sum();
    Ok(CompositeCheck {
        number,
        lower_bound: n0 + sigma2,
        pair_amplitude: pair,
        leakage: psi.leakage.max(xi.leakage).max(b.leakage),
    })
}

/// JSON-serializable record of one oracle configuration.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FockReport {
    pub modes: Vec<Mode>,
    pub n_max: u8,
    pub total_cap: u32,
    pub dimension: usize,
    pub leakage: f64,
    pub residuals: BTreeMap<String, f64>,
}

impl FockReport {
    pub fn new(rep: &FockRep) -> Self {
        Self {
            modes: rep.modes().to_vec(),
            n_max: rep.n_max(),
            total_cap: rep.total_cap(),
            dimension: rep.dim(),
            leakage: 0.0,
            residuals: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_ladder() {
        let rep = build_space(&[[0, 0, 0]], 3, 3).unwrap();
        assert_eq!(rep.dim(), 4);
        let a = rep.annihilation(0);
        for k in 1..4 {
            assert!((a.get(k - 1, k).copied().unwrap() - (k as f64).sqrt()).abs() < 1e-15);
        }
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn empty_and_unclosed_mode_lists_rejected() {
        assert!(matches!(build_space(&[], 2, 2), Err(Error::InvalidModes(_))));
        assert!(matches!(build_space(&[[1, 0, 0]], 2, 2), Err(Error::InvalidModes(_))));
    }

    #[test]
    fn budget_enforced() {
        let modes = shell_modes(&[0, 1, 2]);
        let r = FockRep::new(
            &modes,
            4,
            8,
            SpaceOptions {
                sector: None,
                budget: 1000,
            },
        );
        assert!(matches!(r, Err(Error::DimensionBudget { .. })));
    }

    #[test]
    fn weyl_coherent_mean() {
        let rep = build_space(&[[0, 0, 0]], 20, 20).unwrap();
        let w = apply_weyl(&rep, 1.0, &OracleState::vacuum(&rep).unwrap(), 1e-6).unwrap();
        let n0 = expectation(&rep.mode_number(0), &w.coefficients);
        assert!((n0 - 1.0).abs() < 1e-8);
        let a0 = dot(&w.coefficients, &matvec(&rep.annihilation(0), &w.coefficients));
        assert!((a0 - 1.0).abs() < 1e-8);
    }
}

//! Lower-bound estimation of operator norms between the function spaces in
//! this crate, plus growth curves of those estimates over operator families.
//!
//! Every estimate comes from evaluating the operator on concrete probe
//! signals, so it is a certified lower bound with a stored witness. Probe
//! lists are prefix-ordered and refinement passes are anchored at
//! power-of-two prefixes, which makes a larger budget evaluate a strict
//! superset of a smaller one: raising the budget can never lower the
//! estimate.

use std::fmt;

use rustfft::num_complex::Complex64;

use crate::engine::{randomized_block_multiplier, square_function, RademacherDraw};
use crate::error::{Error, Result};
use crate::gabor::{default_lattice, GaborSystem};
use crate::grid::{dft, idft, modulate, translate, Grid, Signal};
use crate::io::fmt_g17;
use crate::linalg::{start_vector, vdot, vnorm};
use crate::modnorm::{
    lp_of_l2_aggregate, mod_norm_blocks, mod_norm_gabor, mod_norm_stft, mod_norm_vector_blocks,
};
use crate::norms::{signal_lp, Exponent, MixedNormParams, NormMode};
use crate::partition::{partition_bumps, BlockPartition, PartitionKind};
use crate::rng::CounterRng;
use crate::stft::Window;
use crate::symbols::{
    collection_dyadic, collection_ex1, collection_unit, sym_chirp, Interval, IntervalCollection,
    Symbol,
};

/// Input norms below this threshold (relative to the l2 size) mark a probe
/// as degenerate for the ratio; such probes are skipped, not scored.
const ZERO_DENOM_TOL: f64 = 1e-12;

/// Sign patterns are enumerated exhaustively up to this collection size.
const EXHAUSTIVE_SIGN_LIMIT: usize = 12;

/// Exact spectrum evaluation builds a dense matrix; refuse beyond this.
const EXACT_DENSE_LIMIT: usize = 4096;

// ---------------------------------------------------------------------------
// norm specifications

/// A norm on signals (or on signal lists for the vector-valued variants),
/// with all of its context resolved against a concrete grid.
#[derive(Clone)]
pub enum NormSpec {
    Lp {
        p: Exponent,
        mode: NormMode,
    },
    MpqBlocks {
        part: BlockPartition,
        params: MixedNormParams,
    },
    MpqStft {
        window: Window,
        params: MixedNormParams,
    },
    MpqGabor {
        sys: GaborSystem,
        params: MixedNormParams,
    },
    /// `M_{p,q}` of the pointwise l2 aggregate of a signal list, measured
    /// through the block definition.
    MpqVectorL2 {
        part: BlockPartition,
        params: MixedNormParams,
    },
    /// `L^p` of the pointwise l2 aggregate of a signal list.
    LpVectorL2 {
        p: Exponent,
        mode: NormMode,
    },
}

impl NormSpec {
    pub fn lp(p: Exponent, mode: NormMode) -> NormSpec {
        NormSpec::Lp { p, mode }
    }

    /// Human-readable tag naming the definition and its context; reports and
    /// printed values always carry this.
    pub fn label(&self) -> String {
        let kind_tag = |k: PartitionKind| match k {
            PartitionKind::Smooth => "smooth",
            PartitionKind::FlatCenter => "flat",
        };
        match self {
            NormSpec::Lp { p, mode } => format!("L^{p} ({mode})"),
            NormSpec::MpqBlocks { part, params } => format!(
                "M({},{}) blocks/{} ({})",
                params.p,
                params.q,
                kind_tag(part.kind()),
                params.mode
            ),
            NormSpec::MpqStft { params, .. } => {
                format!("M({},{}) stft ({})", params.p, params.q, params.mode)
            }
            NormSpec::MpqGabor { sys, params } => format!(
                "M({},{}) gabor a={} b={} ({})",
                params.p,
                params.q,
                sys.time_step(),
                sys.freq_step(),
                params.mode
            ),
            NormSpec::MpqVectorL2 { part, params } => format!(
                "M({},{})(l2) blocks/{} ({})",
                params.p,
                params.q,
                kind_tag(part.kind()),
                params.mode
            ),
            NormSpec::LpVectorL2 { p, mode } => format!("L^{p}(l2) ({mode})"),
        }
    }

    pub fn eval_one(&self, f: &Signal) -> Result<f64> {
        match self {
            NormSpec::Lp { p, mode } => Ok(signal_lp(f, *p, *mode)),
            NormSpec::MpqBlocks { part, params } => mod_norm_blocks(f, part, *params),
            NormSpec::MpqStft { window, params } => mod_norm_stft(f, window, *params),
            NormSpec::MpqGabor { sys, params } => mod_norm_gabor(f, sys, *params),
            NormSpec::MpqVectorL2 { part, params } => {
                mod_norm_vector_blocks(std::slice::from_ref(f), part, *params)
            }
            NormSpec::LpVectorL2 { p, mode } => {
                lp_of_l2_aggregate(std::slice::from_ref(f), *p, *mode)
            }
        }
    }

    pub fn eval_many(&self, fs: &[Signal]) -> Result<f64> {
        match self {
            NormSpec::MpqVectorL2 { part, params } => mod_norm_vector_blocks(fs, part, *params),
            NormSpec::LpVectorL2 { p, mode } => lp_of_l2_aggregate(fs, *p, *mode),
            _ => Err(Error::InvalidParameter(format!(
                "{} is a scalar norm, cannot take a signal list",
                self.label()
            ))),
        }
    }

    pub fn eval(&self, out: &ProbeOutput) -> Result<f64> {
        match out {
            ProbeOutput::One(f) => self.eval_one(f),
            ProbeOutput::Many(fs) => self.eval_many(fs),
        }
    }
}

/// A grid-free norm description; `compile` resolves the context (partition,
/// window, lattice) on a concrete grid. Growth experiments use recipes
/// because the grid can change along the curve.
#[derive(Clone, Debug)]
pub enum SpecRecipe {
    Lp { p: Exponent, mode: NormMode },
    MpqBlocks { kind: PartitionKind, params: MixedNormParams },
    MpqStft { params: MixedNormParams },
    MpqGabor { params: MixedNormParams },
    MpqVectorL2 { kind: PartitionKind, params: MixedNormParams },
    LpVectorL2 { p: Exponent, mode: NormMode },
}

impl SpecRecipe {
    pub fn compile(&self, grid: &Grid) -> Result<NormSpec> {
        Ok(match self {
            SpecRecipe::Lp { p, mode } => NormSpec::Lp { p: *p, mode: *mode },
            SpecRecipe::MpqBlocks { kind, params } => NormSpec::MpqBlocks {
                part: partition_bumps(grid, *kind)?,
                params: *params,
            },
            SpecRecipe::MpqStft { params } => NormSpec::MpqStft {
                window: Window::gaussian(*grid),
                params: *params,
            },
            SpecRecipe::MpqGabor { params } => {
                let (a, b) = default_lattice(grid.n());
                NormSpec::MpqGabor {
                    sys: GaborSystem::new(Window::gaussian(*grid), a, b)?,
                    params: *params,
                }
            }
            SpecRecipe::MpqVectorL2 { kind, params } => NormSpec::MpqVectorL2 {
                part: partition_bumps(grid, *kind)?,
                params: *params,
            },
            SpecRecipe::LpVectorL2 { p, mode } => NormSpec::LpVectorL2 { p: *p, mode: *mode },
        })
    }
}

// ---------------------------------------------------------------------------
// operator handles

/// Output of an operator: a signal, or a list of signals for square
/// functions and other vector-valued maps.
#[derive(Clone)]
pub enum ProbeOutput {
    One(Signal),
    Many(Vec<Signal>),
}

type ApplyFn = dyn Fn(&Signal) -> Result<ProbeOutput>;
type AdjointFn = dyn Fn(&Signal) -> Result<Signal>;

/// An operator under test: its action, an optional adjoint (enables the
/// duality iteration on `L^p`), and optional structure hints that unlock
/// aligned probe families.
pub struct ProbeOp {
    grid: Grid,
    label: String,
    apply: Box<ApplyFn>,
    adjoint: Option<Box<AdjointFn>>,
    intervals: Option<IntervalCollection>,
    aligned_signs: Option<Vec<f64>>,
}

impl ProbeOp {
    pub fn from_fn(
        grid: Grid,
        label: impl Into<String>,
        apply: impl Fn(&Signal) -> Result<ProbeOutput> + 'static,
    ) -> ProbeOp {
        ProbeOp {
            grid,
            label: label.into(),
            apply: Box::new(apply),
            adjoint: None,
            intervals: None,
            aligned_signs: None,
        }
    }

    /// Fourier multiplier operator; the adjoint is the conjugate symbol.
    pub fn multiplier(m: &Symbol) -> ProbeOp {
        let fwd = m.clone();
        let conj = Symbol::new(
            *m.grid(),
            m.values().iter().map(|z| z.conj()).collect(),
            format!("conj({})", m.label()),
        )
        .expect("conjugate symbol keeps the grid");
        ProbeOp {
            grid: *m.grid(),
            label: m.label().to_string(),
            apply: Box::new(move |f| {
                Ok(ProbeOutput::One(crate::engine::apply_multiplier(&fwd, f)?))
            }),
            adjoint: Some(Box::new(move |f| crate::engine::apply_multiplier(&conj, f))),
            intervals: None,
            aligned_signs: None,
        }
    }

    /// Square function over a collection: `f -> { S_omega f }`.
    pub fn square_fn(c: &IntervalCollection, grid: Grid) -> ProbeOp {
        let cc = c.clone();
        ProbeOp {
            grid,
            label: format!("square function ({} pieces)", c.len()),
            apply: Box::new(move |f| Ok(ProbeOutput::Many(square_function(&cc, f)?))),
            adjoint: None,
            intervals: Some(c.clone()),
            aligned_signs: None,
        }
    }

    pub fn with_intervals(mut self, c: IntervalCollection) -> ProbeOp {
        self.intervals = Some(c);
        self
    }

    pub fn with_aligned_signs(mut self, signs: Vec<f64>) -> ProbeOp {
        self.aligned_signs = Some(signs);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, f: &Signal) -> Result<ProbeOutput> {
        (self.apply)(f)
    }

    fn apply_one(&self, f: &Signal) -> Result<Signal> {
        match self.apply(f)? {
            ProbeOutput::One(g) => Ok(g),
            ProbeOutput::Many(_) => Err(Error::InvalidParameter(
                "operator output is a list, not a signal".into(),
            )),
        }
    }
}

/// Probe counts. `probes` is the number of randomized probes on top of the
/// always-on structured ones, `ascent_steps` drives the refinement passes,
/// `sign_draws` is the number of sign patterns tried by worst-sign families
/// (ignored when the pattern space is small enough to enumerate).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeBudget {
    pub probes: usize,
    pub ascent_steps: usize,
    pub sign_draws: usize,
}

impl Default for ProbeBudget {
    fn default() -> ProbeBudget {
        ProbeBudget {
            probes: 24,
            ascent_steps: 160,
            sign_draws: 32,
        }
    }
}

impl ProbeBudget {
    /// Cheap setting for scans and tests.
    pub fn quick() -> ProbeBudget {
        ProbeBudget {
            probes: 8,
            ascent_steps: 40,
            sign_draws: 8,
        }
    }

    /// Structured probes only; used to rank sign draws before refining the
    /// worst one.
    pub fn structured_only() -> ProbeBudget {
        ProbeBudget {
            probes: 0,
            ascent_steps: 0,
            sign_draws: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMethod {
    ExactL2,
    RandomProbe,
    StructuredProbe,
    Ascent,
}

impl fmt::Display for ProbeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeMethod::ExactL2 => "exact_l2",
            ProbeMethod::RandomProbe => "random_probe",
            ProbeMethod::StructuredProbe => "structured_probe",
            ProbeMethod::Ascent => "ascent",
        })
    }
}

/// A certified lower bound on an operator norm: the value, the probe that
/// attained it, and the attaining signal itself.
#[derive(Clone)]
pub struct OpNormEstimate {
    pub value: f64,
    pub witness: String,
    pub method: ProbeMethod,
    pub witness_signal: Signal,
}

impl OpNormEstimate {
    /// Recompute the ratio of the stored witness; equals `value` up to
    /// floating-point reproduction.
    pub fn reevaluate(&self, op: &ProbeOp, inspec: &NormSpec, outspec: &NormSpec) -> Result<f64> {
        match ratio_for(op, inspec, outspec, &self.witness_signal)? {
            Some(v) => Ok(v),
            None => Err(Error::InvalidParameter(
                "stored witness has degenerate input norm".into(),
            )),
        }
    }
}

fn ratio_for(
    op: &ProbeOp,
    inspec: &NormSpec,
    outspec: &NormSpec,
    f: &Signal,
) -> Result<Option<f64>> {
    let innorm = inspec.eval_one(f)?;
    if !innorm.is_finite() || innorm < ZERO_DENOM_TOL * (1.0 + f.l2()) {
        return Ok(None);
    }
    let out = op.apply(f)?;
    let outnorm = outspec.eval(&out)?;
    Ok(Some(outnorm / innorm))
}

// ---------------------------------------------------------------------------
// exact l2 operator norm

/// Largest singular value of the operator on the grid, by power iteration
/// on `T* T` applied through a dense column matrix. The returned value is
/// the l2 ratio attained by the final iterate, so it is a lower bound that
/// the stored witness reproduces exactly.
pub fn opnorm_exact_l2(op: &ProbeOp) -> Result<OpNormEstimate> {
    let n = op.grid.n();
    if n > EXACT_DENSE_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exact spectrum limited to grids of length <= {EXACT_DENSE_LIMIT}, got {n}"
        )));
    }
    // columns of T, stacked over list outputs
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let col = match op.apply(&Signal::delta(op.grid, j))? {
            ProbeOutput::One(f) => f.into_data(),
            ProbeOutput::Many(fs) => fs.into_iter().flat_map(|f| f.into_data()).collect(),
        };
        cols.push(col);
    }
    let m = cols[0].len();
    let gram = |v: &[Complex64]| -> Vec<Complex64> {
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        for (j, col) in cols.iter().enumerate() {
            let c = v[j];
            if c.norm_sqr() != 0.0 {
                for (wi, &ci) in w.iter_mut().zip(col) {
                    *wi += ci * c;
                }
            }
        }
        cols.iter().map(|col| vdot(col, &w)).collect()
    };
    let mut v = start_vector(n, 0x51f0);
    let mut converged = false;
    for _ in 0..10000 {
        let w = gram(&v);
        let nw = vnorm(&w);
        if nw == 0.0 {
            return Ok(OpNormEstimate {
                value: 0.0,
                witness: "power-top".into(),
                method: ProbeMethod::ExactL2,
                witness_signal: Signal::new(op.grid, v)?,
            });
        }
        let lambda = vdot(&v, &w).re.max(0.0);
        // residual || (T*T) v - lambda v ||
        let resid = vnorm(
            &w.iter()
                .zip(&v)
                .map(|(wi, vi)| wi - vi * lambda)
                .collect::<Vec<_>>(),
        );
        v = w.into_iter().map(|z| z / nw).collect();
        if resid <= 1e-8 * lambda.max(1e-300) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(
            "power iteration on the Gram operator did not settle".into(),
        ));
    }
    let witness = Signal::new(op.grid, v)?;
    let spec = NormSpec::lp(Exponent::Finite(2.0), NormMode::Discrete);
    let value = ratio_for(op, &spec, &spec, &witness)?.unwrap_or(0.0);
    Ok(OpNormEstimate {
        value,
        witness: "power-top".into(),
        method: ProbeMethod::ExactL2,
        witness_signal: witness,
    })
}

// ---------------------------------------------------------------------------
// probe construction

struct Candidate {
    id: String,
    method: ProbeMethod,
    signal: Signal,
}

fn normalized(f: Signal) -> Option<Signal> {
    let l2 = f.l2();
    if l2 > 0.0 && l2.is_finite() {
        Some(f.scale(Complex64::new(1.0 / l2, 0.0)))
    } else {
        None
    }
}

/// Signal whose spectrum has the given coefficients on the given bins.
fn spectral_probe(grid: &Grid, entries: &[(usize, Complex64)]) -> Option<Signal> {
    let mut spec = Signal::zero(*grid);
    for &(j, c) in entries {
        spec.data_mut()[j] += c;
    }
    normalized(idft(&spec))
}

fn mid_bin(iv: &Interval, grid: &Grid) -> Option<usize> {
    let bins = iv.bins(grid);
    if bins.is_empty() {
        None
    } else {
        Some(bins[bins.len() / 2])
    }
}

/// Group interval indices by rounded log2 width, widest group first.
fn width_groups(c: &IntervalCollection) -> Vec<Vec<usize>> {
    let mut keyed: Vec<(i64, usize)> = c
        .intervals()
        .iter()
        .enumerate()
        .map(|(i, iv)| ((iv.width().log2() * 2.0).round() as i64, i))
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut groups: Vec<(i64, Vec<usize>)> = Vec::new();
    for (k, i) in keyed {
        match groups.last_mut() {
            Some((gk, g)) if *gk == k => g.push(i),
            _ => groups.push((k, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

fn push_structured(cands: &mut Vec<Candidate>, op: &ProbeOp) {
    let grid = &op.grid;
    let Some(coll) = &op.intervals else { return };
    let one = Complex64::new(1.0, 0.0);
    let interval_bins: Vec<Vec<usize>> = coll.intervals().iter().map(|iv| iv.bins(grid)).collect();
    let push = |cands: &mut Vec<Candidate>, id: &str, entries: &[(usize, Complex64)]| {
        if let Some(sig) = spectral_probe(grid, entries) {
            cands.push(Candidate {
                id: id.into(),
                method: ProbeMethod::StructuredProbe,
                signal: sig,
            });
        }
    };

    let union: Vec<(usize, Complex64)> = interval_bins
        .iter()
        .flat_map(|bins| bins.iter().map(|&j| (j, one)))
        .collect();
    push(cands, "union", &union);

    if let Some(signs) = &op.aligned_signs {
        if signs.len() >= coll.len() {
            let aligned: Vec<(usize, Complex64)> = interval_bins
                .iter()
                .zip(signs)
                .flat_map(|(bins, &s)| bins.iter().map(move |&j| (j, one * s)))
                .collect();
            push(cands, "aligned-union", &aligned);
            let chars: Vec<(usize, Complex64)> = coll
                .intervals()
                .iter()
                .zip(signs)
                .filter_map(|(iv, &s)| mid_bin(iv, grid).map(|j| (j, one * s)))
                .collect();
            push(cands, "aligned-chars", &chars);
        }
    }

    let chars: Vec<(usize, Complex64)> = coll
        .intervals()
        .iter()
        .filter_map(|iv| mid_bin(iv, grid).map(|j| (j, one)))
        .collect();
    push(cands, "chars", &chars);

    let groups = width_groups(coll);
    if groups.len() >= 2 {
        // suffix unions from the second group on: the narrow shells carry
        // the growth in nested families, so probe them without the broad ones
        for g in 1..groups.len() {
            let tail: Vec<(usize, Complex64)> = groups[g..]
                .iter()
                .flatten()
                .flat_map(|&i| interval_bins[i].iter().map(|&j| (j, one)))
                .collect();
            push(cands, &format!("tail-{g}"), &tail);
        }
        for (gi, g) in groups.iter().enumerate() {
            let lvl: Vec<(usize, Complex64)> = g
                .iter()
                .flat_map(|&i| interval_bins[i].iter().map(|&j| (j, one)))
                .collect();
            push(cands, &format!("lvl-{gi}"), &lvl);
        }
    }
}

#[derive(Clone, Copy)]
enum RandomKind {
    GaussShift,
    BandNoise,
    SignChars,
    UnionNoise,
    Singular,
    Pole,
}

fn push_random(
    cands: &mut Vec<Candidate>,
    op: &ProbeOp,
    inspec: &NormSpec,
    outspec: &NormSpec,
    count: usize,
    seed: u64,
) {
    let grid = op.grid;
    let n = grid.n();
    let lp_pair = matches!(
        (inspec, outspec),
        (NormSpec::Lp { .. }, NormSpec::Lp { .. }) | (NormSpec::Lp { .. }, NormSpec::LpVectorL2 { .. })
    );
    let kinds: Vec<RandomKind> = if op.intervals.is_some() {
        vec![
            RandomKind::GaussShift,
            RandomKind::BandNoise,
            RandomKind::SignChars,
            RandomKind::UnionNoise,
        ]
    } else if lp_pair {
        vec![
            RandomKind::GaussShift,
            RandomKind::BandNoise,
            RandomKind::Singular,
            RandomKind::Pole,
        ]
    } else {
        vec![RandomKind::GaussShift, RandomKind::BandNoise]
    };
    let gauss = Window::gaussian(grid);
    for i in 0..count {
        let (id, sig) = match kinds[i % kinds.len()] {
            RandomKind::GaussShift => {
                let r = CounterRng::new(seed, 0x6a05 + i as u64);
                let x0 = r.index_at(0, n) as i64;
                let k0 = r.index_at(1, n) as i64;
                (
                    format!("gauss-{i}"),
                    normalized(modulate(&translate(gauss.signal(), x0), k0)),
                )
            }
            RandomKind::BandNoise => {
                let r = CounterRng::new(seed, 0x7010 + i as u64);
                let mut spec = Signal::zero(grid);
                for j in 0..n {
                    if grid.centered_bin(j).abs() * 4 <= n as i64 {
                        spec.data_mut()[j] =
                            Complex64::new(r.normal_at(2 * j as u64), r.normal_at(2 * j as u64 + 1));
                    }
                }
                (format!("noise-{i}"), normalized(idft(&spec)))
            }
            RandomKind::SignChars => {
                let r = CounterRng::new(seed, 0x51c0 + i as u64);
                let coll = op.intervals.as_ref().unwrap();
                let entries: Vec<(usize, Complex64)> = coll
                    .intervals()
                    .iter()
                    .enumerate()
                    .filter_map(|(k, iv)| {
                        mid_bin(iv, &grid)
                            .map(|j| (j, Complex64::new(r.sign_at(k as u64), 0.0)))
                    })
                    .collect();
                (format!("signs-{i}"), spectral_probe(&grid, &entries))
            }
            RandomKind::UnionNoise => {
                let r = CounterRng::new(seed, 0xba0d + i as u64);
                let coll = op.intervals.as_ref().unwrap();
                let mut spec = Signal::zero(grid);
                for j in 0..n {
                    let xi = grid.freq(j);
                    if coll.intervals().iter().any(|iv| iv.contains(xi)) {
                        spec.data_mut()[j] =
                            Complex64::new(r.normal_at(2 * j as u64), r.normal_at(2 * j as u64 + 1));
                    }
                }
                (format!("unoise-{i}"), normalized(idft(&spec)))
            }
            RandomKind::Singular => {
                let r = CounterRng::new(seed, 0x5109 + i as u64);
                let t0 = r.index_at(0, n) as f64;
                let beta = [0.3, 0.5, 0.7][(i / kinds.len()) % 3];
                let sig = Signal::new(
                    grid,
                    (0..n)
                        .map(|t| {
                            let d = 2.0
                                * ((std::f64::consts::PI * (t as f64 - t0) / n as f64).sin())
                                    .abs();
                            Complex64::new((d + 1.0 / n as f64).powf(-beta), 0.0)
                        })
                        .collect(),
                )
                .ok();
                (format!("sing-{i}"), sig.and_then(normalized))
            }
            RandomKind::Pole => {
                let r = CounterRng::new(seed, 0x901e + i as u64);
                let t0 = r.index_at(0, n) as f64;
                let rr = [0.9, 0.95][(i / kinds.len()) % 2];
                let gamma = [0.4, 0.6][(i / (2 * kinds.len())) % 2];
                let sig = Signal::new(
                    grid,
                    (0..n)
                        .map(|t| {
                            let ang = std::f64::consts::TAU * (t as f64 - t0) / n as f64;
                            let z = Complex64::new(1.0 - rr * ang.cos(), -rr * ang.sin());
                            z.powf(-gamma)
                        })
                        .collect(),
                )
                .ok();
                (format!("pole-{i}"), sig.and_then(normalized))
            }
        };
        if let Some(sig) = sig {
            cands.push(Candidate {
                id,
                method: ProbeMethod::RandomProbe,
                signal: sig,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// refinement passes

/// Greedy spectral moves on the support of the witness: multiply one
/// coefficient by one of `{-1, i, -i, 1/2, 2}` and keep strict improvements.
fn ascent_refine(
    op: &ProbeOp,
    inspec: &NormSpec,
    outspec: &NormSpec,
    start: &Signal,
    steps: usize,
    seed: u64,
    stream: u64,
) -> Result<Option<(f64, Signal)>> {
    let n = op.grid.n();
    let mut spec = dft(start);
    let peak = spec.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(None);
    }
    let support: Vec<usize> = (0..n)
        .filter(|&j| spec.data()[j].norm() > 1e-13 * peak)
        .collect();
    let moves = [
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(2.0, 0.0),
    ];
    let r = CounterRng::new(seed, stream);
    let mut cur_sig = match normalized(idft(&spec)) {
        Some(s) => s,
        None => return Ok(None),
    };
    let mut cur_val = match ratio_for(op, inspec, outspec, &cur_sig)? {
        Some(v) => v,
        None => return Ok(None),
    };
    let mut improved = false;
    for t in 0..steps {
        let j = support[r.index_at(2 * t as u64, support.len())];
        let mv = moves[r.index_at(2 * t as u64 + 1, moves.len())];
        let old = spec.data()[j];
        spec.data_mut()[j] = old * mv;
        let trial = match normalized(idft(&spec)) {
            Some(s) => s,
            None => {
                spec.data_mut()[j] = old;
                continue;
            }
        };
        match ratio_for(op, inspec, outspec, &trial)? {
            Some(v) if v > cur_val * (1.0 + 1e-12) => {
                cur_val = v;
                cur_sig = trial;
                improved = true;
                // keep the working spectrum bounded
                let l2 = vnorm(spec.data());
                for z in spec.data_mut() {
                    *z /= l2;
                }
            }
            _ => {
                spec.data_mut()[j] = old;
            }
        }
    }
    Ok(if improved { Some((cur_val, cur_sig)) } else { None })
}

/// Fixed-point duality iteration for `L^p -> L^q` ratios: push the witness
/// through `T`, dualize with the `q`-norming map, pull back through `T*`,
/// dualize with the `p'`-norming map. Needs an adjoint and finite exponents
/// with `p > 1`.
fn boyd_refine(
    op: &ProbeOp,
    inspec: &NormSpec,
    outspec: &NormSpec,
    start: &Signal,
) -> Result<Option<(f64, Signal)>> {
    let Some(adjoint) = &op.adjoint else {
        return Ok(None);
    };
    let (NormSpec::Lp { p: pin, .. }, NormSpec::Lp { p: pout, .. }) = (inspec, outspec) else {
        return Ok(None);
    };
    let (Exponent::Finite(pin), Exponent::Finite(pout)) = (pin, pout) else {
        return Ok(None);
    };
    if !(*pin > 1.0) {
        return Ok(None);
    }
    let pin_conj = Exponent::Finite(*pin).conjugate().value();
    let norming = |f: &Signal, p: f64| -> Option<Signal> {
        let data: Vec<Complex64> = f
            .data()
            .iter()
            .map(|z| {
                let a = z.norm();
                if a == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z / a * a.powf(p - 1.0)
                }
            })
            .collect();
        normalized(Signal::new(*f.grid(), data).ok()?)
    };
    let mut x = match normalized(start.clone()) {
        Some(s) => s,
        None => return Ok(None),
    };
    let mut best: Option<(f64, Signal)> = None;
    for _ in 0..20 {
        if let Some(v) = ratio_for(op, inspec, outspec, &x)? {
            if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                best = Some((v, x.clone()));
            }
        }
        let y = match op.apply_one(&x) {
            Ok(y) => y,
            Err(_) => return Ok(best),
        };
        let u = match norming(&y, *pout) {
            Some(u) => u,
            None => break,
        };
        let z = adjoint(&u)?;
        x = match norming(&z, pin_conj) {
            Some(x) => x,
            None => break,
        };
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// the main probe

/// Best ratio `out_norm(T f) / in_norm(f)` over the probe families the
/// budget affords. Deterministic in `(op, specs, budget, seed)`; ties keep
/// the earliest probe.
pub fn opnorm_probe(
    op: &ProbeOp,
    inspec: &NormSpec,
    outspec: &NormSpec,
    budget: &ProbeBudget,
    seed: u64,
) -> Result<OpNormEstimate> {
    let mut cands: Vec<Candidate> = Vec::new();
    push_structured(&mut cands, op);
    push_random(&mut cands, op, inspec, outspec, budget.probes, seed);

    let mut scores: Vec<Option<f64>> = Vec::with_capacity(cands.len());
    let mut best: Option<OpNormEstimate> = None;
    for c in &cands {
        let v = ratio_for(op, inspec, outspec, &c.signal)?;
        scores.push(v);
        if let Some(v) = v {
            if best.as_ref().map_or(true, |b| v > b.value) {
                best = Some(OpNormEstimate {
                    value: v,
                    witness: c.id.clone(),
                    method: c.method,
                    witness_signal: c.signal.clone(),
                });
            }
        }
    }

    // refinement anchored at power-of-two prefixes, so a larger probe list
    // only adds anchors
    let mut asz = 1usize;
    while asz <= cands.len() && asz <= 32 {
        let anchor = (0..asz)
            .filter_map(|i| scores[i].map(|v| (i, v)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)));
        if let Some((ai, _)) = anchor {
            if budget.ascent_steps > 0 {
                if let Some((v, sig)) = ascent_refine(
                    op,
                    inspec,
                    outspec,
                    &cands[ai].signal,
                    budget.ascent_steps,
                    seed,
                    0xacce ^ asz as u64,
                )? {
                    if best.as_ref().map_or(true, |b| v > b.value) {
                        best = Some(OpNormEstimate {
                            value: v,
                            witness: format!("ascent{asz}({})", cands[ai].id),
                            method: ProbeMethod::Ascent,
                            witness_signal: sig,
                        });
                    }
                }
                if let Some((v, sig)) = boyd_refine(op, inspec, outspec, &cands[ai].signal)? {
                    if best.as_ref().map_or(true, |b| v > b.value) {
                        best = Some(OpNormEstimate {
                            value: v,
                            witness: format!("boyd{asz}({})", cands[ai].id),
                            method: ProbeMethod::Ascent,
                            witness_signal: sig,
                        });
                    }
                }
            }
        }
        asz *= 2;
    }

    best.ok_or_else(|| {
        Error::InvalidParameter("every probe had a degenerate input norm".into())
    })
}

// ---------------------------------------------------------------------------
// growth curves

#[derive(Clone)]
pub struct GrowthCurve {
    pub family: String,
    pub sizes: Vec<usize>,
    pub estimates: Vec<OpNormEstimate>,
    pub seed: u64,
}

impl GrowthCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,estimate,witness,method,seed\n");
        for (sz, est) in self.sizes.iter().zip(&self.estimates) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                sz,
                fmt_g17(est.value),
                est.witness,
                est.method,
                self.seed
            ));
        }
        out
    }

    /// Last estimate over first.
    pub fn growth_ratio(&self) -> f64 {
        self.estimates.last().expect("curve is nonempty").value
            / self.estimates.first().expect("curve is nonempty").value
    }

    /// Max estimate over min.
    pub fn spread(&self) -> f64 {
        let lo = self.estimates.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
        let hi = self.estimates.iter().map(|e| e.value).fold(0.0f64, f64::max);
        hi / lo
    }
}

/// Operator family a growth curve walks through. The size axis means block
/// count, refinement depth, shell count or grid length depending on the
/// family.
#[derive(Clone, Debug)]
pub enum GrowthFamily {
    /// Unit-cell blocks with the worst of many sign patterns; size = block
    /// count.
    UnitBlocksWorstSign { grid: Grid },
    /// Nested refinement collection with worst signs; size = depth.
    Ex1Depth { grid: Grid },
    /// Unimodular chirp multiplier on a fixed time extent; size = grid
    /// length, spacing = extent / size.
    ChirpBandwidth { alpha: f64, extent: f64 },
    /// Square function over the nested refinement collection; size = depth.
    SquareFunctionEx1 { grid: Grid },
    /// Square function over mirrored dyadic shells; size = shell count.
    DyadicEquivalence { grid: Grid },
    /// Square function over random subcell intervals; size = interval count.
    RubioRandom { grid: Grid },
}

impl GrowthFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthFamily::UnitBlocksWorstSign { .. } => "unit_blocks_random_signs",
            GrowthFamily::Ex1Depth { .. } => "ex1_depth",
            GrowthFamily::ChirpBandwidth { .. } => "chirp_bandwidth",
            GrowthFamily::SquareFunctionEx1 { .. } => "square_function_ex1",
            GrowthFamily::DyadicEquivalence { .. } => "dyadic_equivalence",
            GrowthFamily::RubioRandom { .. } => "rubio_random",
        }
    }
}

/// Worst-of-signs block multiplier estimate: rank every sign pattern with
/// the structured probes alone, then spend the full budget on the worst
/// pattern. Patterns are enumerated exhaustively for small collections,
/// drawn from the seed otherwise.
pub fn worst_sign_block_estimate(
    collection: &IntervalCollection,
    grid: &Grid,
    inspec: &NormSpec,
    outspec: &NormSpec,
    budget: &ProbeBudget,
    seed: u64,
) -> Result<OpNormEstimate> {
    let m = collection.len();
    let draws: Vec<RademacherDraw> = if m <= EXHAUSTIVE_SIGN_LIMIT {
        (0..1u64 << m)
            .map(|bits| {
                RademacherDraw::from_signs(
                    (0..m)
                        .map(|k| if bits >> k & 1 == 1 { 1.0 } else { -1.0 })
                        .collect(),
                    seed,
                    bits,
                )
            })
            .collect()
    } else {
        (0..budget.sign_draws.max(1) as u64)
            .map(|w| RademacherDraw::new(seed, w, m))
            .collect()
    };
    let quick = ProbeBudget::structured_only();
    let mut best: Option<(usize, f64)> = None;
    for (wi, d) in draws.iter().enumerate() {
        let sym = randomized_block_multiplier(collection, d, grid)?;
        let op = ProbeOp::multiplier(&sym)
            .with_intervals(collection.clone())
            .with_aligned_signs(d.signs().to_vec());
        let v = opnorm_probe(&op, inspec, outspec, &quick, seed)?.value;
        if best.map_or(true, |(_, bv)| v > bv) {
            best = Some((wi, v));
        }
    }
    let (wi, _) = best.ok_or(Error::EmptyList)?;
    let d = &draws[wi];
    let sym = randomized_block_multiplier(collection, d, grid)?;
    let op = ProbeOp::multiplier(&sym)
        .with_intervals(collection.clone())
        .with_aligned_signs(d.signs().to_vec());
    let mut est = opnorm_probe(&op, inspec, outspec, budget, seed ^ 0x517a)?;
    est.witness = format!("w{wi}:{}", est.witness);
    Ok(est)
}

/// Disjoint random subintervals of distinct unit cells, at least 2.5 bins
/// wide each.
fn random_cell_collection(count: usize, grid: &Grid, seed: u64) -> Result<IntervalCollection> {
    if count == 0 {
        return Err(Error::EmptyList);
    }
    let (_, band_hi) = grid.band();
    let max_cells = (band_hi.floor() as i64 - 1).max(0) as usize;
    if count > max_cells {
        return Err(Error::InvalidParameter(format!(
            "{count} random cells requested but the band only holds {max_cells}"
        )));
    }
    let r = CounterRng::new(seed, 0x4bf0);
    let bin = grid.bin_spacing();
    let mut ivs = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let c = (i + 1) as f64;
        let lo_f = 0.05 + 0.4 * r.f64_at(2 * i);
        let min_w = (2.5 * bin).max(0.1);
        let max_w = (0.95 - lo_f - min_w).max(0.0);
        let w = min_w + max_w * r.f64_at(2 * i + 1);
        ivs.push(Interval::new(c + lo_f, c + lo_f + w)?);
    }
    let coll = IntervalCollection::new(ivs)?;
    coll.check_resolved(grid)?;
    Ok(coll)
}

/// One operator-norm estimate per size along a family, with the in/out
/// norms rebuilt on each size's grid from the recipes.
pub fn growth_experiment(
    family: &GrowthFamily,
    sizes: &[usize],
    in_recipe: &SpecRecipe,
    out_recipe: &SpecRecipe,
    budget: &ProbeBudget,
    seed: u64,
) -> Result<GrowthCurve> {
    if sizes.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut estimates = Vec::with_capacity(sizes.len());
    for (si, &size) in sizes.iter().enumerate() {
        let step_seed = seed ^ ((si as u64 + 1) << 16);
        let est = match family {
            GrowthFamily::UnitBlocksWorstSign { grid } => {
                let c = collection_unit(size, grid)?;
                worst_sign_block_estimate(
                    &c,
                    grid,
                    &in_recipe.compile(grid)?,
                    &out_recipe.compile(grid)?,
                    budget,
                    step_seed,
                )?
            }
            GrowthFamily::Ex1Depth { grid } => {
                let c = collection_ex1(size as u32, grid)?;
                worst_sign_block_estimate(
                    &c,
                    grid,
                    &in_recipe.compile(grid)?,
                    &out_recipe.compile(grid)?,
                    budget,
                    step_seed,
                )?
            }
            GrowthFamily::ChirpBandwidth { alpha, extent } => {
                let grid = Grid::new(size, extent / size as f64)?;
                let m = sym_chirp(*alpha, &grid)?;
                let op = ProbeOp::multiplier(&m);
                opnorm_probe(
                    &op,
                    &in_recipe.compile(&grid)?,
                    &out_recipe.compile(&grid)?,
                    budget,
                    step_seed,
                )?
            }
            GrowthFamily::SquareFunctionEx1 { grid } => {
                let c = collection_ex1(size as u32, grid)?;
                let op = ProbeOp::square_fn(&c, *grid);
                opnorm_probe(
                    &op,
                    &in_recipe.compile(grid)?,
                    &out_recipe.compile(grid)?,
                    budget,
                    step_seed,
                )?
            }
            GrowthFamily::DyadicEquivalence { grid } => {
                let c = collection_dyadic(size, grid)?;
                let op = ProbeOp::square_fn(&c, *grid);
                opnorm_probe(
                    &op,
                    &in_recipe.compile(grid)?,
                    &out_recipe.compile(grid)?,
                    budget,
                    step_seed,
                )?
            }
            GrowthFamily::RubioRandom { grid } => {
                let c = random_cell_collection(size, grid, seed ^ 0xce11)?;
                let op = ProbeOp::square_fn(&c, *grid);
                opnorm_probe(
                    &op,
                    &in_recipe.compile(grid)?,
                    &out_recipe.compile(grid)?,
                    budget,
                    step_seed,
                )?
            }
        };
        estimates.push(est);
    }
    Ok(GrowthCurve {
        family: family.name().to_string(),
        sizes: sizes.to_vec(),
        estimates,
        seed,
    })
}

//! Exact distribution theory for the number of summands.
//!
//! With no adjacency constraint, picking a legal count from each bin
//! independently and uniformly over all legal selections makes the
//! per-bin count `Y_n` a random variable with an exact rational PMF:
//! `P(Y_n = i) = C(b_n, i) / Σ_{t ∈ A_n} C(b_n, t)`. Everything here —
//! per-bin moments, cumulative Lyapunov-ratio series, the convolved
//! distribution of the total count, and its empirical counterpart read
//! off actual decompositions — is computed in exact big-rational
//! arithmetic. Floats appear only when rendering and when measuring
//! distance to the standard normal.

mod normal;

pub use normal::standard_normal_cdf;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::binom::binomial;
use crate::constructor::omega;
use crate::decomposer::Decomposer;
use crate::error::{Error, Result};
use crate::schedule::{AllowedSet, BinSchedule};
use crate::sequence::Sequence;

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int_ratio(value: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

fn rational_pow(base: &BigRational, exp: u32) -> BigRational {
    BigRational::new(base.numer().pow(exp), base.denom().pow(exp))
}

/// Exact distribution of the pick count for one bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinPmf {
    bin: usize,
    support: Vec<u64>,
    probs: Vec<BigRational>,
}

impl BinPmf {
    /// 1-based index of the bin this PMF describes.
    pub fn bin(&self) -> usize {
        self.bin
    }

    /// The allowed counts, ascending.
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    /// Probabilities aligned with [`support`](Self::support).
    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// `(count, probability)` pairs, ascending by count.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.support.iter().copied().zip(self.probs.iter())
    }
}

/// Exact first, second, and absolute `(2+δ)`-th central moments of one
/// bin's pick count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTriple {
    bin: usize,
    delta: u32,
    mu: BigRational,
    sigma2: BigRational,
    rho2d: BigRational,
}

impl MomentTriple {
    pub fn bin(&self) -> usize {
        self.bin
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Mean `μ = E[Y]`.
    pub fn mu(&self) -> &BigRational {
        &self.mu
    }

    /// Variance `σ² = E[(Y−μ)²]`.
    pub fn sigma2(&self) -> &BigRational {
        &self.sigma2
    }

    /// Absolute central moment `ρ^{2+δ} = E|Y−μ|^{2+δ}`.
    pub fn rho2d(&self) -> &BigRational {
        &self.rho2d
    }
}

/// One row of the cumulative Lyapunov-ratio series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyapunovRow {
    n: usize,
    delta: u32,
    s2: BigRational,
    e: BigRational,
}

impl LyapunovRow {
    /// Number of leading bins summed into this row.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cumulative variance `s² = Σ σ_n²`.
    pub fn s2(&self) -> &BigRational {
        &self.s2
    }

    /// Cumulative absolute-moment sum `e = Σ ρ_n^{2+δ}`.
    pub fn e(&self) -> &BigRational {
        &self.e
    }

    /// The squared Lyapunov ratio `e² / (s²)^{2+δ}`, or `None` while the
    /// cumulative variance is still zero.  Reducing the quotient can cost
    /// far more than the sums themselves on late rows of fast-growing
    /// schedules, so it is computed on demand rather than stored.
    pub fn squared_ratio(&self) -> Option<BigRational> {
        if self.s2.is_zero() {
            None
        } else {
            Some(&self.e * &self.e / rational_pow(&self.s2, 2 + self.delta))
        }
    }
}

/// Cumulative Lyapunov statistics for the leading bins of a schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyapunovSeries {
    delta: u32,
    rows: Vec<LyapunovRow>,
}

impl LyapunovSeries {
    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Rows for `N = 1..=maxN`, in order.
    pub fn rows(&self) -> &[LyapunovRow] {
        &self.rows
    }

    /// Row for a specific `N` (1-based).
    pub fn row(&self, n: usize) -> Option<&LyapunovRow> {
        self.rows.get(n.checked_sub(1)?)
    }
}

/// Where a summand-count distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfSource {
    /// Convolution of per-bin count polynomials.
    Model,
    /// Tallied from decompositions of actual integers.
    Empirical,
}

/// Distribution of the total number of summands, as exact weights.
///
/// For a model distribution the weights are selection counts (products
/// of binomial coefficients); for an empirical one they are integer
/// tallies. Probabilities, mean, and variance are derived exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandPmf {
    source: PmfSource,
    bin: usize,
    include_top_bin: bool,
    weights: BTreeMap<u64, BigUint>,
    total: BigUint,
}

impl SummandPmf {
    fn new(
        source: PmfSource,
        bin: usize,
        include_top_bin: bool,
        weights: BTreeMap<u64, BigUint>,
    ) -> Self {
        let total = weights.values().sum();
        SummandPmf {
            source,
            bin,
            include_top_bin,
            weights,
            total,
        }
    }

    pub fn source(&self) -> PmfSource {
        self.source
    }

    /// The bin index `N` the distribution refers to.
    pub fn bin(&self) -> usize {
        self.bin
    }

    /// Whether bin `N` itself contributes a (nonzero) pick.
    pub fn include_top_bin(&self) -> bool {
        self.include_top_bin
    }

    /// Raw weights: summand count → selection count or tally.
    pub fn weights(&self) -> &BTreeMap<u64, BigUint> {
        &self.weights
    }

    /// Sum of all weights.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Exact probability of each summand count.
    pub fn probs(&self) -> BTreeMap<u64, BigRational> {
        self.weights
            .iter()
            .map(|(&k, w)| (k, ratio(w.clone(), self.total.clone())))
            .collect()
    }

    /// Exact probability of one summand count.
    pub fn prob(&self, count: u64) -> BigRational {
        match self.weights.get(&count) {
            Some(w) => ratio(w.clone(), self.total.clone()),
            None => BigRational::zero(),
        }
    }

    /// Exact mean of the summand count.
    pub fn mean(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (&k, w) in &self.weights {
            acc += BigRational::from_integer(BigInt::from(k) * BigInt::from(w.clone()));
        }
        acc / BigRational::from_integer(BigInt::from(self.total.clone()))
    }

    /// Exact variance of the summand count.
    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        let mut acc = BigRational::zero();
        for (&k, w) in &self.weights {
            let d = int_ratio(k) - &mean;
            acc += &d * &d * BigRational::from_integer(BigInt::from(w.clone()));
        }
        acc / BigRational::from_integer(BigInt::from(self.total.clone()))
    }
}

/// Distance from a standardized summand-count distribution to the
/// standard normal.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussReport {
    ks_distance: f64,
    mean: f64,
    std_dev: f64,
    grid_size: usize,
}

impl GaussReport {
    /// Supremum distance between the standardized step CDF and the
    /// normal CDF, taken over both sides of every jump.
    pub fn ks_distance(&self) -> f64 {
        self.ks_distance
    }

    /// Mean used for standardization.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard deviation used for standardization.
    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    /// Number of jump points examined.
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }
}

/// Boundedness report for the scaled absolute moments of full-count
/// bins (`b_n = n`, all counts allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem35Report {
    delta: u32,
    max_n: usize,
    rhos: Vec<BigRational>,
    ratios: Vec<BigRational>,
    max_ratio: BigRational,
    argmax: usize,
    bounded: bool,
    sigma_is_quarter_n: bool,
    closed_form_matches_general: bool,
    alternating_sum_vanishes: bool,
    weighted_alternating_sum_vanishes: bool,
}

impl Theorem35Report {
    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `ρ_n^{2+δ}` for `n = 1..=maxN` (1-based accessor).
    pub fn rho(&self, n: usize) -> Option<&BigRational> {
        self.rhos.get(n.checked_sub(1)?)
    }

    /// `ρ_n^{2+δ} / n^δ` for `n = 1..=maxN` (1-based accessor).
    pub fn ratio(&self, n: usize) -> Option<&BigRational> {
        self.ratios.get(n.checked_sub(1)?)
    }

    pub fn ratios(&self) -> &[BigRational] {
        &self.ratios
    }

    /// Largest scaled moment over the examined range, and where.
    pub fn max_ratio(&self) -> (&BigRational, usize) {
        (&self.max_ratio, self.argmax)
    }

    /// Whether the scaled moments look bounded: the overall maximum
    /// exceeds the maximum over the first three quarters of the range
    /// by at most 5%. A genuinely growing sequence fails this; a
    /// sequence leveling off at a finite limit passes.
    pub fn bounded(&self) -> bool {
        self.bounded
    }

    /// `σ_n² = n/4` held exactly for every examined `n`.
    pub fn sigma_is_quarter_n(&self) -> bool {
        self.sigma_is_quarter_n
    }

    /// The direct binomial-sum form of `ρ_n^{2+δ}` agreed exactly with
    /// the generic moment computation for every examined `n`.
    pub fn closed_form_matches_general(&self) -> bool {
        self.closed_form_matches_general
    }

    /// `Σ_j (−1)^j C(2+δ, j) = 0`: the leading-order cancellation that
    /// keeps the scaled moments from growing like `n^{2+δ}`.
    pub fn alternating_sum_vanishes(&self) -> bool {
        self.alternating_sum_vanishes
    }

    /// `Σ_j (−1)^j (j²−j) C(2+δ, j) = 0`: the next-order cancellation.
    pub fn weighted_alternating_sum_vanishes(&self) -> bool {
        self.weighted_alternating_sum_vanishes
    }
}

/// Exact PMF of the pick count for a bin with the given allowed counts:
/// `P(Y = i) = C(b, i) / Σ_{t} C(b, t)`.
pub fn bin_pmf(bin: usize, allowed: &AllowedSet) -> BinPmf {
    let b = allowed.bin_size();
    let weight: BigUint = allowed.counts().iter().map(|&t| binomial(b, t)).sum();
    let support: Vec<u64> = allowed.counts().iter().copied().collect();
    let probs = support
        .iter()
        .map(|&i| ratio(binomial(b, i), weight.clone()))
        .collect();
    BinPmf { bin, support, probs }
}

/// Exact `μ`, `σ²`, and `ρ^{2+δ} = E|Y−μ|^{2+δ}` for one bin's pick
/// count. `delta` must be a positive integer so the absolute moment
/// stays rational.
pub fn bin_moments(bin: usize, allowed: &AllowedSet, delta: u32) -> Result<MomentTriple> {
    if delta == 0 {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let pmf = bin_pmf(bin, allowed);
    let mut mu = BigRational::zero();
    for (i, p) in pmf.entries() {
        mu += int_ratio(i) * p;
    }
    let mut sigma2 = BigRational::zero();
    let mut rho2d = BigRational::zero();
    for (i, p) in pmf.entries() {
        let d = int_ratio(i) - &mu;
        sigma2 += &d * &d * p;
        rho2d += rational_pow(&d.abs(), 2 + delta) * p;
    }
    Ok(MomentTriple {
        bin,
        delta,
        mu,
        sigma2,
        rho2d,
    })
}

/// Cumulative variance, cumulative absolute moments, and the squared
/// Lyapunov ratio `e_N² / (s_N²)^{2+δ}` for `N = 1..=maxN`, all exact.
/// Requires an adjacency-free schedule (the independence model).
pub fn lyapunov_series(
    schedule: &BinSchedule,
    delta: u32,
    max_n: usize,
) -> Result<LyapunovSeries> {
    if schedule.adjacency() != 0 {
        return Err(Error::Precondition(
            "the independence model needs an adjacency-free schedule".into(),
        ));
    }
    if delta == 0 {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    if max_n == 0 {
        return Err(Error::Precondition("maxN must be positive".into()));
    }
    let mut rows = Vec::with_capacity(max_n);
    let mut s2 = BigRational::zero();
    let mut e = BigRational::zero();
    for n in 1..=max_n {
        let m = bin_moments(n, &schedule.allowed(n)?, delta)?;
        s2 += m.sigma2();
        e += m.rho2d();
        rows.push(LyapunovRow {
            n,
            delta,
            s2: s2.clone(),
            e: e.clone(),
        });
    }
    Ok(LyapunovSeries { delta, rows })
}

fn poly_mul(a: &BTreeMap<u64, BigUint>, b: &BTreeMap<u64, BigUint>) -> BTreeMap<u64, BigUint> {
    let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (da, ca) in a {
        for (db, cb) in b {
            let coeff = ca * cb;
            out.entry(da + db)
                .and_modify(|c| *c += &coeff)
                .or_insert(coeff);
        }
    }
    out
}

/// Count polynomial of one bin: coefficient `C(b, i)` at degree `i` for
/// each allowed count `i`, optionally restricted to nonzero counts.
fn bin_poly(allowed: &AllowedSet, nonzero_only: bool) -> BTreeMap<u64, BigUint> {
    let b = allowed.bin_size();
    allowed
        .counts()
        .iter()
        .copied()
        .filter(|&i| !nonzero_only || i > 0)
        .map(|i| (i, binomial(b, i)))
        .collect()
}

/// Exact model distribution of the total summand count over bins
/// `1..N`, i.e. of `Y_1 + ⋯ + Y_{N−1}`, via polynomial convolution.
/// With `include_top_bin`, bin `N` contributes a pick conditioned on
/// being nonempty — the distribution for integers whose largest summand
/// sits in bin `N`.
pub fn model_summand_pmf(
    schedule: &BinSchedule,
    top_bin: usize,
    include_top_bin: bool,
) -> Result<SummandPmf> {
    if schedule.adjacency() != 0 {
        return Err(Error::Precondition(
            "the independence model needs an adjacency-free schedule".into(),
        ));
    }
    if top_bin == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    let mut poly: BTreeMap<u64, BigUint> = BTreeMap::new();
    poly.insert(0, BigUint::one());
    for n in 1..top_bin {
        poly = poly_mul(&poly, &bin_poly(&schedule.allowed(n)?, false));
    }
    if include_top_bin {
        let top = bin_poly(&schedule.allowed(top_bin)?, true);
        if top.is_empty() {
            return Err(Error::Precondition(format!(
                "bin {top_bin} allows only empty picks; no integer has its largest summand there"
            )));
        }
        poly = poly_mul(&poly, &top);
    }
    Ok(SummandPmf::new(
        PmfSource::Model,
        top_bin,
        include_top_bin,
        poly,
    ))
}

/// Smallest nonzero sum a pick from `bin` can have: take the fewest
/// allowed (nonzero) elements from the front.
fn min_nonzero_pick(seq: &Sequence, bin: usize) -> Result<Option<BigUint>> {
    let elements = seq.bin(bin)?;
    let allowed = seq.schedule().allowed(bin)?;
    let mut best: Option<BigUint> = None;
    for count in allowed.nonzero_counts() {
        let sum: BigUint = elements.iter().take(count as usize).sum();
        if best.as_ref().is_none_or(|b| sum < *b) {
            best = Some(sum);
        }
    }
    Ok(best)
}

/// Empirical distribution of the summand count among all integers whose
/// decomposition has its highest nonempty pick in bin `top_bin`. Every
/// candidate integer between the smallest nonzero bin-`top_bin` pick and
/// the largest sum reachable from bins `1..=top_bin` is decomposed; for
/// sequences with several decompositions per integer, the first one in
/// canonical order is the one classified.
pub fn empirical_summand_pmf(seq: &Sequence, top_bin: usize) -> Result<SummandPmf> {
    if top_bin == 0 || top_bin > seq.num_bins() {
        return Err(Error::Precondition(format!(
            "N must lie in 1..={}",
            seq.num_bins()
        )));
    }
    let lo = min_nonzero_pick(seq, top_bin)?.ok_or_else(|| {
        Error::Precondition(format!(
            "bin {top_bin} allows only empty picks; no integer has its largest summand there"
        ))
    })?;
    let hi = omega(seq, top_bin)?;
    let dec = Decomposer::new(seq)?;
    let mut weights: BTreeMap<u64, BigUint> = BTreeMap::new();
    let mut x = lo;
    while x <= hi {
        if let Some(d) = dec.decompose(&x)? {
            if d.top_bin() == Some(top_bin) {
                weights
                    .entry(d.count_summands())
                    .and_modify(|c| *c += BigUint::one())
                    .or_insert_with(BigUint::one);
            }
        }
        x += BigUint::one();
    }
    Ok(SummandPmf::new(PmfSource::Empirical, top_bin, true, weights))
}

/// Kolmogorov–Smirnov distance between the standardized summand-count
/// distribution and the standard normal, evaluated on both sides of
/// every jump of the step CDF. Needs a nondegenerate distribution.
pub fn gaussian_distance(pmf: &SummandPmf) -> Result<GaussReport> {
    let variance = pmf.variance();
    if variance.is_zero() {
        return Err(Error::Precondition(
            "distribution has zero variance; nothing to standardize".into(),
        ));
    }
    let mean = pmf
        .mean()
        .to_f64()
        .ok_or_else(|| Error::Precondition("mean does not fit in a float".into()))?;
    let std_dev = variance
        .to_f64()
        .ok_or_else(|| Error::Precondition("variance does not fit in a float".into()))?
        .sqrt();
    let total = BigRational::from_integer(BigInt::from(pmf.total().clone()));
    let mut cumulative = BigRational::zero();
    let mut ks = 0.0f64;
    let mut grid = 0usize;
    for (&k, w) in pmf.weights() {
        let before = (&cumulative / &total)
            .to_f64()
            .expect("cumulative probability fits in a float");
        cumulative += BigRational::from_integer(BigInt::from(w.clone()));
        let after = (&cumulative / &total)
            .to_f64()
            .expect("cumulative probability fits in a float");
        let z = (k as f64 - mean) / std_dev;
        let phi = standard_normal_cdf(z);
        ks = ks.max((after - phi).abs()).max((before - phi).abs());
        grid += 1;
    }
    Ok(GaussReport {
        ks_distance: ks,
        mean,
        std_dev,
        grid_size: grid,
    })
}

/// Scaled absolute moments of full-count bins: with `b_n = n` and all
/// counts allowed, computes `ρ_n^{2+δ} = Σ_i C(n,i)|2i−n|^{2+δ} /
/// 2^{n+δ+2}` exactly for `n = 1..=maxN`, checks it against the generic
/// moment pipeline and `σ_n² = n/4`, reports whether `ρ_n^{2+δ}/n^δ`
/// stays bounded, and verifies the two alternating-sum cancellations
/// that force boundedness. `delta` must be even (and positive) so the
/// absolute value can be dropped in the binomial sum.
pub fn theorem35_check(max_n: usize, delta: u32) -> Result<Theorem35Report> {
    if delta == 0 || delta % 2 != 0 {
        return Err(Error::Precondition("delta must be a positive even integer".into()));
    }
    if max_n == 0 {
        return Err(Error::Precondition("maxN must be positive".into()));
    }
    let mut rhos = Vec::with_capacity(max_n);
    let mut ratios = Vec::with_capacity(max_n);
    let mut sigma_ok = true;
    let mut closed_matches = true;
    for n in 1..=max_n {
        // Direct binomial-sum form, using |2i−n| to stay in integers:
        // ρ = Σ_i C(n,i)|2i−n|^{2+δ} / 2^{n+δ+2}.
        let mut numer = BigUint::zero();
        for i in 0..=n as u64 {
            let gap = (2 * i).abs_diff(n as u64);
            numer += binomial(n as u64, i) * BigUint::from(gap).pow(2 + delta);
        }
        let rho = ratio(numer, BigUint::from(2u32).pow(n as u32 + delta + 2));

        let allowed = AllowedSet::new(n, n as u64, (0..=n as u64).collect())?;
        let general = bin_moments(n, &allowed, delta)?;
        if general.rho2d() != &rho {
            closed_matches = false;
        }
        if general.sigma2() != &(int_ratio(n as u64) / int_ratio(4)) {
            sigma_ok = false;
        }

        ratios.push(&rho / rational_pow(&int_ratio(n as u64), delta));
        rhos.push(rho);
    }
    let (argmax, max_ratio) = ratios
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.cmp(b))
        .map(|(i, r)| (i + 1, r.clone()))
        .expect("maxN is positive");
    // Plateau test: a bounded sequence's overall max is (nearly) reached
    // within the first three quarters of the range already.
    let early = (max_n * 3).div_ceil(4);
    let early_max = ratios[..early].iter().max().expect("range is non-empty");
    let bounded = max_ratio <= early_max * BigRational::new(BigInt::from(21), BigInt::from(20));

    let m = 2 + delta; // exponent in the expanded power
    let mut alt = BigInt::zero();
    let mut weighted = BigInt::zero();
    for j in 0..=m as u64 {
        let c = BigInt::from(binomial(m as u64, j));
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        alt += &sign * &c;
        weighted += sign * c * BigInt::from(j * j - j);
    }

    Ok(Theorem35Report {
        delta,
        max_n,
        rhos,
        ratios,
        max_ratio,
        argmax,
        bounded,
        sigma_is_quarter_n: sigma_ok,
        closed_form_matches_general: closed_matches,
        alternating_sum_vanishes: alt.is_zero(),
        weighted_alternating_sum_vanishes: weighted.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::{build_sequence, DEFAULT_STATE_CAP};
    use crate::schedule::parse_schedule;

    fn allowed(b: u64, counts: &[u64]) -> AllowedSet {
        AllowedSet::new(1, b, counts.iter().copied().collect()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bin_pmf_small_cases() {
        let pmf = bin_pmf(1, &allowed(1, &[0, 1]));
        assert_eq!(pmf.probs(), &[rat(1, 2), rat(1, 2)]);
        let pmf = bin_pmf(1, &allowed(2, &[0, 1]));
        assert_eq!(pmf.probs(), &[rat(1, 3), rat(2, 3)]);
        let pmf = bin_pmf(1, &allowed(3, &[0, 2]));
        assert_eq!(pmf.support(), &[0, 2]);
        assert_eq!(pmf.probs(), &[rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn bin_pmf_sums_to_one() {
        for (b, counts) in [
            (5, vec![0, 1]),
            (5, vec![0, 1, 2, 3, 4, 5]),
            (4, vec![0, 1, 2, 4]),
            (6, vec![2, 3]),
        ] {
            let pmf = bin_pmf(1, &allowed(b, &counts));
            let total: BigRational = pmf.probs().iter().sum();
            assert!(total.is_one(), "b={b} counts={counts:?}");
        }
    }

    #[test]
    fn zero_one_moments_have_closed_forms() {
        for b in 1..=12u64 {
            let m = bin_moments(1, &allowed(b, &[0, 1]), 2).unwrap();
            assert_eq!(m.mu(), &rat(b as i64, b as i64 + 1));
            assert_eq!(m.sigma2(), &rat(b as i64, (b as i64 + 1).pow(2)));
            // The absolute-moment bound for two-point counts is strict.
            for delta in 1..=3 {
                let m = bin_moments(1, &allowed(b, &[0, 1]), delta).unwrap();
                assert!(m.rho2d() < m.sigma2(), "b={b} delta={delta}");
            }
        }
        let m = bin_moments(1, &allowed(1, &[0, 1]), 2).unwrap();
        assert_eq!(m.rho2d(), &rat(1, 16));
    }

    #[test]
    fn pairwise_difference_form_of_variance_agrees() {
        // σ² can also be written Σ_{i≠j} (i−j)² P(i)P(j) / 2; check the
        // two forms agree exactly on assorted count sets.
        for (b, counts) in [(4, vec![0, 1, 2, 4]), (5, vec![0, 2, 5]), (3, vec![0, 1, 2, 3])] {
            let set = allowed(b, &counts);
            let pmf = bin_pmf(1, &set);
            let mut pair_sum = BigRational::zero();
            for (i, pi) in pmf.entries() {
                for (j, pj) in pmf.entries() {
                    let d = int_ratio(i) - int_ratio(j);
                    pair_sum += &d * &d * pi * pj;
                }
            }
            pair_sum /= int_ratio(2);
            let m = bin_moments(1, &set, 1).unwrap();
            assert_eq!(m.sigma2(), &pair_sum, "b={b} counts={counts:?}");
        }
    }

    #[test]
    fn full_count_bins_have_quarter_n_variance() {
        for n in 1..=12u64 {
            let counts: Vec<u64> = (0..=n).collect();
            let m = bin_moments(1, &allowed(n, &counts), 2).unwrap();
            assert_eq!(m.sigma2(), &rat(n as i64, 4));
        }
    }

    #[test]
    fn skip_set_moments_by_hand() {
        let m = bin_moments(1, &allowed(3, &[0, 2]), 1).unwrap();
        assert_eq!(m.mu(), &rat(3, 2));
        assert_eq!(m.sigma2(), &rat(3, 4));
        // E|Y−3/2|³ = (1/4)(3/2)³ + (3/4)(1/2)³ = 15/16.
        assert_eq!(m.rho2d(), &rat(15, 16));
    }

    #[test]
    fn lyapunov_series_for_fibonacci_counts() {
        let schedule = parse_schedule("const:1/zero-one/adj:0").unwrap();
        let series = lyapunov_series(&schedule, 2, 100).unwrap();
        for n in [1usize, 10, 100] {
            let row = series.row(n).unwrap();
            assert_eq!(row.s2(), &rat(n as i64, 4));
            assert_eq!(row.e(), &rat(n as i64, 16));
            assert_eq!(
                row.squared_ratio().unwrap(),
                rat(1, (n * n) as i64),
                "N={n}"
            );
        }
    }

    #[test]
    fn lyapunov_series_is_cumulative_over_leading_bins() {
        for c in [2i64, 3, 5] {
            let schedule = parse_schedule(&format!("const:{c}/zero-one/adj:0")).unwrap();
            let series = lyapunov_series(&schedule, 2, 40).unwrap();
            let mut prev_s2 = BigRational::zero();
            let mut prev_e = BigRational::zero();
            for row in series.rows() {
                // Each row adds one bin: s² = N·c/(c+1)².
                assert_eq!(row.s2(), &(rat(c, (c + 1).pow(2)) * int_ratio(row.n() as u64)));
                assert!(row.s2() >= &prev_s2 && row.e() >= &prev_e);
                prev_s2 = row.s2().clone();
                prev_e = row.e().clone();
            }
        }
    }

    #[test]
    fn lyapunov_needs_adjacency_free_schedules() {
        let schedule = parse_schedule("const:1/zero-one/adj:1").unwrap();
        assert!(lyapunov_series(&schedule, 2, 10).is_err());
        let schedule = parse_schedule("const:1/zero-one/adj:0").unwrap();
        assert!(lyapunov_series(&schedule, 0, 10).is_err());
    }

    #[test]
    fn model_pmf_matches_hand_convolution() {
        let schedule = parse_schedule("const:2/zero-one/adj:0").unwrap();
        let pmf = model_summand_pmf(&schedule, 3, true).unwrap();
        assert_eq!(pmf.prob(1), rat(1, 9));
        assert_eq!(pmf.prob(2), rat(4, 9));
        assert_eq!(pmf.prob(3), rat(4, 9));
        assert_eq!(pmf.prob(0), rat(0, 1));
        let total: BigRational = pmf.probs().values().sum();
        assert!(total.is_one());
    }

    #[test]
    fn model_pmf_trivial_and_binomial_cases() {
        let schedule = parse_schedule("const:1/zero-one/adj:0").unwrap();
        let pmf = model_summand_pmf(&schedule, 1, false).unwrap();
        assert_eq!(pmf.prob(0), rat(1, 1));
        let pmf = model_summand_pmf(&schedule, 11, false).unwrap();
        for k in 0..=10u64 {
            assert_eq!(
                pmf.prob(k),
                ratio(binomial(10, k), BigUint::from(1024u32)),
                "k={k}"
            );
        }
    }

    #[test]
    fn model_pmf_mean_and_variance_add_over_bins() {
        let schedule = parse_schedule("const:3/zero-one/adj:0").unwrap();
        let pmf = model_summand_pmf(&schedule, 5, false).unwrap();
        let mut mu = BigRational::zero();
        let mut var = BigRational::zero();
        for n in 1..5 {
            let m = bin_moments(n, &schedule.allowed(n).unwrap(), 2).unwrap();
            mu += m.mu();
            var += m.sigma2();
        }
        assert_eq!(pmf.mean(), mu);
        assert_eq!(pmf.variance(), var);
    }

    #[test]
    fn model_pmf_rejects_empty_top_bin() {
        let schedule = parse_schedule("const:2/set:0/adj:0").unwrap();
        assert!(model_summand_pmf(&schedule, 2, true).is_err());
        // Without the top-bin condition the same schedule is fine.
        assert!(model_summand_pmf(&schedule, 2, false).is_ok());
    }

    #[test]
    fn empirical_pmf_counts_integers_by_top_bin() {
        let schedule = parse_schedule("const:2/zero-one/adj:0").unwrap();
        let seq = build_sequence(&schedule, 3, DEFAULT_STATE_CAP).unwrap();
        let pmf = empirical_summand_pmf(&seq, 3).unwrap();
        assert_eq!(pmf.total(), &BigUint::from(18u32));
        let weights: Vec<(u64, u32)> = pmf
            .weights()
            .iter()
            .map(|(&k, w)| (k, w.try_into().unwrap()))
            .collect();
        assert_eq!(weights, [(1, 2), (2, 8), (3, 8)]);
        // Exact agreement with the model: the selection↔integer bijection.
        let model = model_summand_pmf(&schedule, 3, true).unwrap();
        assert_eq!(model.probs(), pmf.probs());
    }

    #[test]
    fn empirical_pmf_single_integer_case() {
        let schedule = parse_schedule("const:1/zero-one/adj:0").unwrap();
        let seq = build_sequence(&schedule, 2, DEFAULT_STATE_CAP).unwrap();
        let pmf = empirical_summand_pmf(&seq, 1).unwrap();
        assert_eq!(pmf.total(), &BigUint::one());
        assert_eq!(pmf.prob(1), rat(1, 1));
    }

    #[test]
    fn gaussian_distance_at_binomial_goldens() {
        let schedule = parse_schedule("const:1/zero-one/adj:0").unwrap();
        let small = model_summand_pmf(&schedule, 11, false).unwrap();
        let report = gaussian_distance(&small).unwrap();
        // Frozen against a double-precision normal-CDF oracle.
        assert!((report.ks_distance() - 0.123046875).abs() < 1e-6);
        assert_eq!(report.grid_size(), 11);
        assert!((report.mean() - 5.0).abs() < 1e-12);

        let large = model_summand_pmf(&schedule, 101, false).unwrap();
        let report_large = gaussian_distance(&large).unwrap();
        assert!((report_large.ks_distance() - 0.039794618694).abs() < 1e-6);
        assert!(report_large.ks_distance() < report.ks_distance());
    }

    #[test]
    fn gaussian_distance_needs_positive_variance() {
        let schedule = parse_schedule("const:1/zero-one/adj:0").unwrap();
        let point_mass = model_summand_pmf(&schedule, 1, false).unwrap();
        assert!(gaussian_distance(&point_mass).is_err());
    }

    #[test]
    fn bounded_moment_report_for_full_count_bins() {
        let report = theorem35_check(60, 2).unwrap();
        assert_eq!(report.rho(2).unwrap(), &rat(1, 2));
        assert_eq!(report.ratio(2).unwrap(), &rat(1, 8));
        // ρ_n⁴/n² = (3n−2)/(16n) exactly; spot-check the last row.
        assert_eq!(report.ratio(60).unwrap(), &rat(178, 960));
        assert!(report.bounded());
        assert!(report.sigma_is_quarter_n());
        assert!(report.closed_form_matches_general());
        assert!(report.alternating_sum_vanishes());
        assert!(report.weighted_alternating_sum_vanishes());
        let (max_ratio, argmax) = report.max_ratio();
        assert_eq!(argmax, 60);
        assert_eq!(max_ratio, &rat(89, 480));
    }

    #[test]
    fn bounded_moment_report_rejects_odd_delta() {
        assert!(theorem35_check(10, 1).is_err());
        assert!(theorem35_check(10, 0).is_err());
        assert!(theorem35_check(0, 2).is_err());
    }
}

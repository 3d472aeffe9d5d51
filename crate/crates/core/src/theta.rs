//! Dimension proportions `p(k,n) = binom(n,k)_q / S(n)`, their centred
//! even/odd forms and the discrete Gaussian laws they converge to.
//!
//! Points of `Z` and `1/2 + Z` are both stored as twice their value, so
//! `t = 3` means `3/2` and `t = -4` means `-2`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::combinatorics::{qbinom_unchecked, sum_qbinom_unchecked};
use crate::constants::{euler_kq, inverse_nome, kq_truncated, quarter_power, theta2, theta3, CertifiedInterval, Precision};
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::interval::Interval;

/// `binom(n,k)_q / S(n)` as an exact fraction (not reduced).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactProportion {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl ExactProportion {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator.clone().into())
    }
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

/// `p(k, n)`; zero for `k` outside `[0, n]`.
pub fn exact_p(k: i64, n: u64, q: u64) -> Result<ExactProportion> {
    check_q(q)?;
    Ok(ExactProportion { numerator: qbinom_unchecked(n, k, q), denominator: sum_qbinom_unchecked(n, q) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    /// The limit law on the matching lattice.
    pub fn variant(self) -> ThetaVariant {
        match self {
            Parity::Even => ThetaVariant::Theta3,
            Parity::Odd => ThetaVariant::Theta2,
        }
    }

    fn length(self, m: u64) -> u64 {
        match self {
            Parity::Even => 2 * m,
            Parity::Odd => 2 * m + 1,
        }
    }
}

/// Renders a twice-value point: `4` as `2`, `-3` as `-3/2`.
pub fn format_half(t: i64) -> String {
    if t % 2 == 0 {
        (t / 2).to_string()
    } else {
        format!("{t}/2")
    }
}

/// `P^e_m(r) = p(m - r, 2m)` on `Z`, or `P^o_m(r) = p(m - r + 1/2, 2m + 1)`
/// on `1/2 + Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedDimensionDistribution {
    pub parity: Parity,
    pub m: u64,
    pub q: u64,
    /// Support in increasing order, as twice-values.
    pub support: Vec<i64>,
    pub pmf: Vec<BigRational>,
}

impl ShiftedDimensionDistribution {
    /// Probability of the twice-value point `t`; zero off the support.
    pub fn prob(&self, t: i64) -> BigRational {
        match self.support.binary_search(&t) {
            Ok(i) => self.pmf[i].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn total(&self) -> BigRational {
        self.pmf.iter().sum()
    }
}

pub fn shifted_distribution(parity: Parity, m: u64, q: u64) -> Result<ShiftedDimensionDistribution> {
    check_q(q)?;
    let n = parity.length(m);
    let s: BigInt = sum_qbinom_unchecked(n, q).into();
    // k runs from n down to 0 so that r = m - k (+1/2) increases.
    let mut support = Vec::with_capacity(n as usize + 1);
    let mut pmf = Vec::with_capacity(n as usize + 1);
    for k in (0..=n).rev() {
        let t = match parity {
            Parity::Even => 2 * (m as i64 - k as i64),
            Parity::Odd => 2 * (m as i64 - k as i64) + 1,
        };
        support.push(t);
        pmf.push(BigRational::new(qbinom_unchecked(n, k as i64, q).into(), s.clone()));
    }
    Ok(ShiftedDimensionDistribution { parity, m, q, support, pmf })
}

/// Total variation distance between two exact distributions.
pub fn tv_exact(a: &ShiftedDimensionDistribution, b: &ShiftedDimensionDistribution) -> Result<BigRational> {
    if a.parity != b.parity {
        return Err(Error::LatticeMismatch("integer and half-integer supports".into()));
    }
    let mut points: Vec<i64> = a.support.iter().chain(&b.support).copied().collect();
    points.sort_unstable();
    points.dedup();
    let sum: BigRational = points.iter().map(|&t| (a.prob(t) - b.prob(t)).abs()).sum();
    Ok(sum / BigRational::from_integer(2.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaVariant {
    Theta2,
    Theta3,
}

impl ThetaVariant {
    pub fn name(self) -> &'static str {
        match self {
            ThetaVariant::Theta2 => "theta2",
            ThetaVariant::Theta3 => "theta3",
        }
    }

    pub fn from_name(s: &str) -> Option<ThetaVariant> {
        match s {
            "theta2" => Some(ThetaVariant::Theta2),
            "theta3" => Some(ThetaVariant::Theta3),
            _ => None,
        }
    }
}

/// The law with mass proportional to `w^{k²}` on `Z` (θ₃) or `1/2 + Z` (θ₂).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteThetaDistribution {
    pub variant: ThetaVariant,
    pub nome: BigRational,
    pub normalizer: CertifiedInterval,
    quarter: Interval,
    bits: u32,
}

impl DiscreteThetaDistribution {
    pub fn new(variant: ThetaVariant, nome: BigRational, prec: Precision) -> Result<DiscreteThetaDistribution> {
        let tol = prec.finest_tolerance();
        let normalizer = match variant {
            ThetaVariant::Theta2 => theta2(&nome, tol, prec)?,
            ThetaVariant::Theta3 => theta3(&nome, tol, prec)?,
        };
        let bits = prec.bits();
        let quarter = quarter_power(&nome, bits);
        Ok(DiscreteThetaDistribution { variant, nome, normalizer, quarter, bits })
    }

    /// The limit law for `P^e_m` or `P^o_m` at nome `1/q`.
    pub fn for_parity(parity: Parity, q: u64, prec: Precision) -> Result<DiscreteThetaDistribution> {
        check_q(q)?;
        DiscreteThetaDistribution::new(parity.variant(), inverse_nome(q), prec)
    }

    pub fn in_support(&self, t: i64) -> bool {
        (t.rem_euclid(2) == 1) == (self.variant == ThetaVariant::Theta2)
    }

    /// `w^{k²}` for the twice-value point `t`, before normalization.
    fn weight(&self, t: i64) -> Interval {
        let t = t.unsigned_abs();
        let e = (t * t / 4) as usize;
        let w = Interval::from_rational(&num_traits::pow(self.nome.clone(), e), self.bits);
        match self.variant {
            ThetaVariant::Theta3 => w,
            // t odd: t²/4 = (t² - 1)/4 + 1/4
            ThetaVariant::Theta2 => &w * &self.quarter,
        }
    }

    /// `w^{k²} / θ(w)` at the twice-value point `t`.
    pub fn pmf(&self, t: i64) -> Result<Interval> {
        if !self.in_support(t) {
            return Err(Error::NotInSupport(format!("{} is not a {} support point", format_half(t), self.variant.name())));
        }
        Ok(&self.weight(t) / &self.normalizer.interval)
    }

    /// Support points in sampling order `0, -1, 1, -2, 2, ...` (θ₃) or
    /// `-1/2, 1/2, -3/2, 3/2, ...` (θ₂).
    fn point(&self, i: u64) -> i64 {
        let i = i as i64;
        match self.variant {
            ThetaVariant::Theta3 => {
                if i == 0 {
                    0
                } else if i % 2 == 1 {
                    -(i + 1)
                } else {
                    i
                }
            }
            ThetaVariant::Theta2 => {
                if i % 2 == 0 {
                    -(i + 1)
                } else {
                    i
                }
            }
        }
    }
}

/// `theta_pmf(dist, t)`, the same as [`DiscreteThetaDistribution::pmf`].
pub fn theta_pmf(dist: &DiscreteThetaDistribution, t: i64) -> Result<Interval> {
    dist.pmf(t)
}

/// The right-hand side of `p^e(k,m) ~ K_q / (K_q(k) θ₃(1/q)) q^{-(m-k)²}`
/// and `p^o(k,m) ~ K_q / (K_q(k) θ₂(1/q)) q^{-(m-k+1/2)²}`.
pub fn asymptotic_p(parity: Parity, k: u64, m: u64, q: u64, prec: Precision) -> Result<Interval> {
    check_q(q)?;
    let tol = prec.finest_tolerance();
    let bits = prec.bits();
    let w = inverse_nome(q);
    let kq = euler_kq(q, tol, prec)?.interval;
    let kk = kq_truncated(q, k, tol, prec)?.interval;
    let d = (m as i64 - k as i64).unsigned_abs();
    let (theta, power) = match parity {
        Parity::Even => (theta3(&w, tol, prec)?.interval, Interval::from_rational(&num_traits::pow(w.clone(), (d * d) as usize), bits)),
        Parity::Odd => {
            // (m - k + 1/2)² = s(s+1) + 1/4 with s = m - k
            let s = m as i64 - k as i64;
            let e = (s * (s + 1)) as usize;
            let p = &Interval::from_rational(&num_traits::pow(w.clone(), e), bits) * &quarter_power(&w, bits);
            (theta2(&w, tol, prec)?.interval, p)
        }
    };
    Ok(&(&kq / &(&kk * &theta)) * &power)
}

fn check_lattice(d: &ShiftedDimensionDistribution, theta: &DiscreteThetaDistribution) -> Result<()> {
    if d.parity.variant() != theta.variant {
        return Err(Error::LatticeMismatch(format!(
            "{} distribution against {} law",
            d.parity.name(),
            theta.variant.name()
        )));
    }
    Ok(())
}

/// `|P(t) - P_θ(t)|` at one twice-value point.
pub fn pointwise_gap(d: &ShiftedDimensionDistribution, theta: &DiscreteThetaDistribution, t: i64) -> Result<Interval> {
    check_lattice(d, theta)?;
    let p = Interval::from_rational(&d.prob(t), theta.bits);
    Ok((&p - &theta.pmf(t)?).abs())
}

/// Total variation distance `(1/2) sum_r |P(r) - P_θ(r)|`.
///
/// Off the finite support the sum is the θ mass there, which equals one
/// minus the θ mass on the support.
pub fn tv_distance(d: &ShiftedDimensionDistribution, theta: &DiscreteThetaDistribution) -> Result<Interval> {
    check_lattice(d, theta)?;
    let bits = theta.bits;
    let mut inside = Interval::zero(bits);
    let mut diff = Interval::zero(bits);
    for (t, p) in d.support.iter().zip(&d.pmf) {
        let th = theta.pmf(*t)?;
        diff = &diff + &(&Interval::from_rational(p, bits) - &th).abs();
        inside = &inside + &th;
    }
    let outside = &Interval::one(bits) - &inside;
    let outside = Interval::from_raw(outside.lo_raw().clone().max(BigInt::zero()), outside.hi_raw().clone(), bits);
    Ok(&(&diff + &outside) / &Interval::from_int(2, bits))
}

/// `sup_r |P(r) - P_θ(r)|` over the support and the nearest point beyond it,
/// which carries the largest θ mass off the support.
pub fn sup_gap(d: &ShiftedDimensionDistribution, theta: &DiscreteThetaDistribution) -> Result<Interval> {
    check_lattice(d, theta)?;
    let beyond = d.support.last().expect("nonempty support") + 2;
    let mut best = pointwise_gap(d, theta, beyond)?;
    for &t in &d.support {
        best = best.max(&pointwise_gap(d, theta, t)?);
    }
    Ok(best)
}

/// `binom(2m,m)_q / S(2m)` or `binom(2m+1,m)_q / S(2m+1)` against its limit
/// `1/θ₃(1/q)` or `1/(q^{1/4} θ₂(1/q))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralShare {
    pub exact: BigRational,
    pub limit: Interval,
}

impl CentralShare {
    pub fn gap(&self) -> Interval {
        (&Interval::from_rational(&self.exact, self.limit.bits()) - &self.limit).abs()
    }
}

pub fn central_share(parity: Parity, m: u64, q: u64, prec: Precision) -> Result<CentralShare> {
    check_q(q)?;
    let n = parity.length(m);
    let exact = exact_p(m as i64, n, q)?.value();
    let tol = prec.finest_tolerance();
    let w = inverse_nome(q);
    let bits = prec.bits();
    let limit = match parity {
        Parity::Even => theta3(&w, tol, prec)?.interval.recip(),
        Parity::Odd => {
            let q4 = quarter_power(&BigRational::from_integer(q.into()), bits);
            (&q4 * &theta2(&w, tol, prec)?.interval).recip()
        }
    };
    Ok(CentralShare { exact, limit })
}

/// One row of a convergence report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub m: u64,
    pub exact_gap: Interval,
    pub tv: Interval,
}

/// Rough cost of the exact distributions for `m` in the range.
fn report_work(ms: &[u64]) -> u64 {
    ms.iter().fold(0u64, |acc, &m| acc.saturating_add((2 * m + 2).saturating_mul(m.saturating_mul(m).max(1))))
}

/// Sup-gap and TV distance between `P^e_m`/`P^o_m` and its θ limit.
pub fn convergence_report(
    parity: Parity,
    q: u64,
    ms: impl IntoIterator<Item = u64>,
    work_ceiling: u64,
    prec: Precision,
) -> Result<Vec<ConvergenceRow>> {
    let ms: Vec<u64> = ms.into_iter().collect();
    let work = report_work(&ms);
    if work > work_ceiling {
        return Err(Error::WorkCeiling { work: work.to_string(), ceiling: work_ceiling });
    }
    let theta = DiscreteThetaDistribution::for_parity(parity, q, prec)?;
    ms.into_iter()
        .map(|m| {
            let d = shifted_distribution(parity, m, q)?;
            Ok(ConvergenceRow { m, exact_gap: sup_gap(&d, &theta)?, tv: tv_distance(&d, &theta)? })
        })
        .collect()
}

/// Inverse-CDF sampler for a discrete θ law.
///
/// Points are taken in the order `0, -1, 1, -2, 2, ...` until the remaining
/// mass drops below `2^-64`; the cumulative table holds probabilities scaled
/// by `2^64`.
#[derive(Clone, Debug)]
pub struct Sampler {
    points: Vec<i64>,
    cumulative: Vec<u128>,
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(dist: &DiscreteThetaDistribution, seed: u64) -> Sampler {
        let scale = BigRational::from_integer(BigInt::one() << 64);
        let mut points = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = BigRational::zero();
        let one = BigRational::one();
        let floor = BigRational::new(BigInt::one(), BigInt::one() << 64);
        let mut i = 0;
        loop {
            let t = dist.point(i);
            acc += dist.pmf(t).expect("support point").mid();
            points.push(t);
            let c = (&acc * &scale).floor().to_integer().to_u128().unwrap_or(u128::MAX);
            cumulative.push(c.min(1u128 << 64));
            if &one - &acc < floor {
                break;
            }
            i += 1;
        }
        *cumulative.last_mut().expect("at least one point") = 1u128 << 64;
        Sampler { points, cumulative, rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// Next twice-value sample.
    pub fn sample(&mut self) -> i64 {
        let u = self.rng.next_u64() as u128;
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.points[i]
    }

    pub fn table_len(&self) -> usize {
        self.points.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::geometric_two_sided_sum;

    fn prec() -> Precision {
        Precision::default()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn close(x: &Interval, v: f64, tol: f64) -> bool {
        (x.lo_f64() - v).abs() < tol && (x.hi_f64() - v).abs() < tol
    }

    #[test]
    fn proportions() {
        assert_eq!(exact_p(1, 2, 2).unwrap().value(), rat(3, 5));
        assert!(exact_p(-1, 2, 2).unwrap().value().is_zero());
        assert!(exact_p(3, 2, 2).unwrap().value().is_zero());
        let total: BigRational = (0..=4).map(|k| exact_p(k, 4, 2).unwrap().value()).sum();
        assert!(total.is_one());
        assert!(exact_p(1, 2, 6).is_err());
    }

    #[test]
    fn shifted_examples() {
        let d = shifted_distribution(Parity::Even, 1, 2).unwrap();
        assert_eq!(d.support, vec![-2, 0, 2]);
        assert_eq!(d.pmf, vec![rat(1, 5), rat(3, 5), rat(1, 5)]);
        let o = shifted_distribution(Parity::Odd, 0, 2).unwrap();
        assert_eq!(o.support, vec![-1, 1]);
        assert_eq!(o.pmf, vec![rat(1, 2), rat(1, 2)]);
        let e = shifted_distribution(Parity::Even, 4, 3).unwrap();
        assert_eq!(e.support.len(), 9);
        assert_eq!(shifted_distribution(Parity::Odd, 4, 3).unwrap().support.len(), 10);
    }

    #[test]
    fn symmetry_and_normalization() {
        for q in [2u64, 3] {
            for m in 0..=20 {
                for parity in [Parity::Even, Parity::Odd] {
                    let d = shifted_distribution(parity, m, q).unwrap();
                    assert!(d.total().is_one());
                    for &t in &d.support {
                        assert_eq!(d.prob(t), d.prob(-t));
                    }
                }
            }
        }
    }

    #[test]
    fn theta_pmf_examples() {
        let t3 = DiscreteThetaDistribution::new(ThetaVariant::Theta3, rat(1, 2), prec()).unwrap();
        assert!(close(&t3.pmf(0).unwrap(), 0.46971802414148265, 1e-15));
        assert_eq!(t3.pmf(4).unwrap(), t3.pmf(-4).unwrap());
        assert!(matches!(t3.pmf(1), Err(Error::NotInSupport(_))));
        let t2 = DiscreteThetaDistribution::new(ThetaVariant::Theta2, rat(1, 2), prec()).unwrap();
        assert!(close(&theta_pmf(&t2, 1).unwrap(), 0.39498523733496619, 1e-15));
        assert!(t2.pmf(2).is_err());
        let mass: Interval = (-40..=40).filter(|t: &i64| t % 2 != 0).fold(Interval::zero(200), |a, t| &a + &t2.pmf(t).unwrap());
        assert!(close(&mass, 1.0, 1e-40));
    }

    #[test]
    fn asymptotic_p_examples() {
        let p = asymptotic_p(Parity::Even, 60, 60, 2, prec()).unwrap();
        assert!(close(&p, 0.46971802414148265, 1e-15));
        let p = asymptotic_p(Parity::Odd, 60, 60, 2, prec()).unwrap();
        assert!(close(&p, 0.39498523733496619, 1e-15));
        let p = asymptotic_p(Parity::Even, 57, 60, 2, prec()).unwrap();
        assert!(close(&p, 0.00091741801590, 1e-13));
        // for small m the K_q/K_q(k) factor matters
        let p = asymptotic_p(Parity::Odd, 2, 2, 2, prec()).unwrap();
        let kq = 0.28878809508660242;
        assert!(close(&p, 2f64.powf(-0.25) * kq / (0.375 * 2.128931250513027558592), 1e-12));
    }

    #[test]
    fn tv_examples() {
        let d = shifted_distribution(Parity::Even, 1, 2).unwrap();
        assert!(tv_exact(&d, &d).unwrap().is_zero());
        let t3 = DiscreteThetaDistribution::for_parity(Parity::Even, 2, prec()).unwrap();
        let tv = tv_distance(&d, &t3).unwrap();
        assert!(close(&tv, 0.13028, 1e-5));
        assert!(tv.certainly_positive() && tv.hi_f64() < 0.5);
        let far = shifted_distribution(Parity::Even, 20, 2).unwrap();
        assert!(tv_distance(&far, &t3).unwrap().hi_f64() < 1e-3);
        let odd = shifted_distribution(Parity::Odd, 1, 2).unwrap();
        assert!(matches!(tv_distance(&odd, &t3), Err(Error::LatticeMismatch(_))));
        assert!(tv_exact(&d, &odd).is_err());
    }

    #[test]
    fn central_shares() {
        let c = central_share(Parity::Even, 20, 2, prec()).unwrap();
        assert!(c.gap().hi_f64() < 1e-3);
        assert!(c.gap().certainly_lt(&central_share(Parity::Even, 5, 2, prec()).unwrap().gap()));
        let o = central_share(Parity::Odd, 20, 2, prec()).unwrap();
        assert!(o.gap().hi_f64() < 1e-3);
    }

    #[test]
    fn reports() {
        let rows = convergence_report(Parity::Even, 2, 1..=20, 1_000_000_000, prec()).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(rows.iter().all(|r| r.tv.certainly_positive()));
        assert!(rows[19].tv.hi_f64() < 1e-3);
        assert!(rows[19].exact_gap.certainly_lt(&rows[4].exact_gap));
        assert!(close(&rows[4].tv, 0.005664, 1e-6));
        let one = convergence_report(Parity::Odd, 2, [7], 1_000_000_000, prec()).unwrap();
        assert_eq!(one.len(), 1);
        assert!(convergence_report(Parity::Odd, 2, 1..=2000, 1_000_000_000, prec()).unwrap_err().is_ceiling());
    }

    #[test]
    fn sampler_is_reproducible() {
        let t3 = DiscreteThetaDistribution::for_parity(Parity::Even, 2, prec()).unwrap();
        let mut a = Sampler::new(&t3, 7);
        let mut b = Sampler::new(&t3, 7);
        let xs: Vec<i64> = (0..100).map(|_| a.sample()).collect();
        let ys: Vec<i64> = (0..100).map(|_| b.sample()).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|t| t % 2 == 0));
        let t2 = DiscreteThetaDistribution::for_parity(Parity::Odd, 2, prec()).unwrap();
        let mut s = Sampler::new(&t2, 1);
        assert!((0..1000).all(|_| s.sample() % 2 != 0));
        assert!(s.table_len() > 10 && s.table_len() < 40);
    }

    #[test]
    fn sampler_frequency() {
        let t3 = DiscreteThetaDistribution::for_parity(Parity::Even, 2, prec()).unwrap();
        let mut s = Sampler::new(&t3, 2024);
        let trials = 1_000_000;
        let zeros = (0..trials).filter(|_| s.sample() == 0).count() as f64;
        let p = 0.46971802414148265;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((zeros / trials as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn geometric_dominating_series() {
        for q in [2u64, 3, 4] {
            let partial: f64 = (-200i32..=200).map(|r| (q as f64).powi(-r.abs())).sum();
            let closed = geometric_two_sided_sum(q);
            assert!((partial - crate::interval::rational_to_f64(&closed)).abs() < 1e-12);
        }
    }

    #[test]
    fn half_formatting() {
        assert_eq!(format_half(4), "2");
        assert_eq!(format_half(-3), "-3/2");
        assert_eq!(format_half(0), "0");
    }
}

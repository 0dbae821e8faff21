//! Closed-form probabilities and bounds behind the random-coloring
//! constructions, evaluated exactly where possible.
//!
//! Every report carries its scope: a *family tail* is the exact probability
//! of an event about one explicit tree family (stars, or the paired trees of
//! the two-class case), while a *true-event bound* bounds the probability of
//! the event over all S-trees. The two are never interchangeable.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest `n` for which the union bound is also evaluated as an exact rational.
pub const EXACT_N_LIMIT: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("unknown case tag `{0}`")]
    UnknownCase(String),
    #[error("case `{case}` is not evaluated by this function")]
    WrongFamily { case: BoundCase },
    #[error("n = {n} is too small (need n >= {min})")]
    NTooSmall { n: u64, min: u64 },
    #[error("k = {0} is too small (need k >= 3)")]
    KTooSmall(u32),
    #[error("l must be at least 1")]
    LTooSmall,
    #[error("ramsey estimates need k >= 2 and t >= 2")]
    RamseyRange,
}

/// Which expression a [`BoundReport`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCase {
    /// `1 - 2^k n^(k+l-1) (1 - p2)^(n-k-l+1)`: union-bound lower bound on the
    /// probability that a uniform `(k+1)`-coloring of `K_{n,n}` works.
    UnionBound,
    /// `K_{n,n}`, three terminals in one class, 3 colors: probability that at
    /// most one of the `n` stars is rainbow.
    BipStarTail,
    /// Two terminals `x, y` in one class and `z` in the other, `xz` and `yz`
    /// colored alike: probability the paired-tree family has no 2-packing.
    BipPairSame,
    /// As [`BoundCase::BipPairSame`] with `xz`, `yz` colored differently.
    BipPairDistinct,
    /// The two conditional values combined with weights 1/3 and 2/3.
    BipPairTotal,
    /// `2n (7/9)^(n-2)`, an upper bound for [`BoundCase::BipPairTotal`].
    BipPairEnvelope,
    /// `K_{n,n,n}`, terminals in one class: `4 n^2 (7/9)^(2n-2)`.
    TriOneClass,
    /// `K_{n,n,n}`, terminals in two classes: `n^2 (7/9)^(n-2)`.
    TriTwoClass,
    /// Terminals in three classes, triangle rainbow: `3 (7/9)^(2n-2)`.
    TriDistinct,
    /// Triangle with two colors: `(2n+1) (7/9)^(2n-2)`.
    TriTwoColor,
    /// Monochromatic triangle: `3 (3n^2+1) (7/9)^(2n-2)`.
    TriMono,
    /// The three triangle cases weighted by 2/9, 2/3 and 1/9.
    TriSpreadTotal,
}

impl BoundCase {
    pub const ALL: [BoundCase; 12] = [
        BoundCase::UnionBound,
        BoundCase::BipStarTail,
        BoundCase::BipPairSame,
        BoundCase::BipPairDistinct,
        BoundCase::BipPairTotal,
        BoundCase::BipPairEnvelope,
        BoundCase::TriOneClass,
        BoundCase::TriTwoClass,
        BoundCase::TriDistinct,
        BoundCase::TriTwoColor,
        BoundCase::TriMono,
        BoundCase::TriSpreadTotal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundCase::UnionBound => "union-bound",
            BoundCase::BipStarTail => "bip-star-tail",
            BoundCase::BipPairSame => "bip-pair-same",
            BoundCase::BipPairDistinct => "bip-pair-distinct",
            BoundCase::BipPairTotal => "bip-pair-total",
            BoundCase::BipPairEnvelope => "bip-pair-envelope",
            BoundCase::TriOneClass => "tri-one-class",
            BoundCase::TriTwoClass => "tri-two-class",
            BoundCase::TriDistinct => "tri-distinct",
            BoundCase::TriTwoColor => "tri-two-color",
            BoundCase::TriMono => "tri-mono",
            BoundCase::TriSpreadTotal => "tri-spread-total",
        }
    }

    pub fn kind(self) -> BoundKind {
        match self {
            BoundCase::UnionBound => BoundKind::LowerBound,
            BoundCase::BipStarTail | BoundCase::BipPairSame | BoundCase::BipPairDistinct | BoundCase::BipPairTotal => {
                BoundKind::Probability
            }
            _ => BoundKind::UpperBound,
        }
    }

    pub fn scope(self) -> Scope {
        match self.kind() {
            BoundKind::Probability => Scope::FamilyTail,
            _ => Scope::TrueEventBound,
        }
    }

    /// Smallest `n` for which the expression is defined.
    pub fn min_n(self) -> u64 {
        match self {
            BoundCase::UnionBound => 1,
            BoundCase::BipStarTail => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundCase {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundCase::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| BoundsError::UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// The value is a probability and lies in `[0, 1]`.
    Probability,
    /// Bounds a probability from above; may exceed 1.
    UpperBound,
    /// Bounds a probability from below; may be negative.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    FamilyTail,
    TrueEventBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalScheme {
    /// `value` is the exact rational rounded to the nearest `f64`.
    ExactRational,
    /// `value` comes from logarithms in `f64`; no exact value.
    LogSpace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub case: BoundCase,
    pub n: u64,
    pub k: u32,
    pub l: u32,
    pub exact: Option<BigRational>,
    pub value: f64,
    pub scheme: EvalScheme,
}

impl BoundReport {
    fn exact(case: BoundCase, n: u64, k: u32, l: u32, value: BigRational) -> Self {
        Self {
            case,
            n,
            k,
            l,
            value: to_f64(&value),
            exact: Some(value),
            scheme: EvalScheme::ExactRational,
        }
    }

    pub fn kind(&self) -> BoundKind {
        self.case.kind()
    }

    pub fn scope(&self) -> Scope {
        self.case.scope()
    }

    /// `bound <case> <n> <num>/<den> <float>`; the rational is `-` when only a
    /// log-space value exists.
    pub fn machine_line(&self) -> String {
        let exact = match &self.exact {
            Some(q) => format!("{}/{}", q.numer(), q.denom()),
            None => "-".to_string(),
        };
        format!("bound {} {} {} {:e}", self.case, self.n, exact, self.value)
    }
}

/// Nearest `f64`, saturating to infinities.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn pow(base: &BigRational, exp: u64) -> BigRational {
    let e = u32::try_from(exp).expect("exponent fits in u32");
    BigRational::new(
        num_traits::pow::Pow::pow(base.numer(), e),
        num_traits::pow::Pow::pow(base.denom(), e),
    )
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, x| acc * x)
}

fn falling(t: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(t - i))
}

/// Probability that a `k`-edge star is rainbow when each edge gets one of `t`
/// colors uniformly and independently: `t (t-1) ... (t-k+1) / t^k`.
pub fn star_rainbow_prob(k: u32, t: u32) -> BigRational {
    if k as u64 > t as u64 || t == 0 {
        return BigRational::zero();
    }
    let (k, t) = (k as u64, t as u64);
    BigRational::new(falling(t, k), num_traits::pow::Pow::pow(BigInt::from(t), k as u32))
}

/// Probability that a `(k+1)`-edge double star is rainbow under a uniform
/// `(k+1)`-coloring: `(k+1)! / (k+1)^(k+1)`.
pub fn double_star_rainbow_prob(k: u32) -> BigRational {
    let m = k as u64 + 1;
    BigRational::new(factorial(m), num_traits::pow::Pow::pow(BigInt::from(m), m as u32))
}

/// Probabilities that the triangle on three terminals in distinct classes is
/// rainbow, two-colored, or monochromatic under a uniform 3-coloring.
pub fn triangle_pattern_weights() -> [BigRational; 3] {
    let all = 27i64;
    let distinct = 3 * 2; // 3 * 2 * 1
    let mono = 3;
    [ratio(distinct, all), ratio(all - distinct - mono, all), ratio(mono, all)]
}

fn check_union_args(n: u64, k: u32, l: u32) -> Result<(), BoundsError> {
    if k < 3 {
        return Err(BoundsError::KTooSmall(k));
    }
    if l < 1 {
        return Err(BoundsError::LTooSmall);
    }
    let min = k as u64 + l as u64;
    if n < min {
        return Err(BoundsError::NTooSmall { n, min });
    }
    Ok(())
}

/// `ln` of the subtracted term `2^k n^(k+l-1) (1 - p2)^(n-k-l+1)`.
fn union_term_ln(n: u64, k: u32, l: u32) -> f64 {
    let p2 = to_f64(&double_star_rainbow_prob(k));
    let e1 = (k + l - 1) as f64;
    let e2 = (n - k as u64 - l as u64 + 1) as f64;
    k as f64 * std::f64::consts::LN_2 + e1 * (n as f64).ln() + e2 * (-p2).ln_1p()
}

fn union_term_exact(n: u64, k: u32, l: u32) -> BigRational {
    let p2 = double_star_rainbow_prob(k);
    let miss = BigRational::one() - p2;
    let e2 = n - k as u64 - l as u64 + 1;
    int(1u64 << k) * pow(&int(n), (k + l - 1) as u64) * pow(&miss, e2)
}

/// The union-bound lower bound on the probability that a uniform
/// `(k+1)`-coloring of `K_{n,n}` gives every `k`-set `l` internally disjoint
/// rainbow trees. Exact for `n <= 200`, log-space beyond. Negative values are
/// vacuous.
pub fn union_success_bound(n: u64, k: u32, l: u32) -> Result<BoundReport, BoundsError> {
    check_union_args(n, k, l)?;
    if n <= EXACT_N_LIMIT {
        let value = BigRational::one() - union_term_exact(n, k, l);
        return Ok(BoundReport::exact(BoundCase::UnionBound, n, k, l, value));
    }
    Ok(BoundReport {
        case: BoundCase::UnionBound,
        n,
        k,
        l,
        exact: None,
        value: -union_term_ln(n, k, l).exp_m1(),
        scheme: EvalScheme::LogSpace,
    })
}

/// The subtracted term of [`union_success_bound`] in both evaluation schemes
/// (exact, log-space). Used to check that they agree.
pub fn union_term_both(n: u64, k: u32, l: u32) -> Result<(BigRational, f64), BoundsError> {
    check_union_args(n, k, l)?;
    Ok((union_term_exact(n, k, l), union_term_ln(n, k, l).exp()))
}

/// Exact test `union_success_bound(n, k, l) > 0`, valid for every `n`.
pub fn union_bound_positive(n: u64, k: u32, l: u32) -> Result<bool, BoundsError> {
    check_union_args(n, k, l)?;
    // 2^k n^e1 (q - a)^e2 < q^e2 with p2 = a / q
    let p2 = double_star_rainbow_prob(k);
    let a = p2.numer().to_biguint().expect("probability is positive");
    let q = p2.denom().to_biguint().expect("denominator is positive");
    let e1 = k + l - 1;
    let e2 = u32::try_from(n - k as u64 - l as u64 + 1).expect("exponent fits in u32");
    let lhs = (BigUint::one() << k) * num_traits::pow::Pow::pow(BigUint::from(n), e1) * num_traits::pow::Pow::pow(&q - &a, e2);
    let rhs = num_traits::pow::Pow::pow(q, e2);
    Ok(lhs < rhs)
}

/// Least `n` at which [`union_success_bound`] is positive.
///
/// `ln` of the subtracted term is concave in `n`, so the positive region is a
/// tail `[N, inf)`. The crossing is located in floating point past the
/// term's maximum and then settled with exact integer comparisons.
pub fn find_threshold(k: u32, l: u32) -> Result<u64, BoundsError> {
    let start = k as u64 + l as u64;
    check_union_args(start, k, l)?;
    let p2 = to_f64(&double_star_rainbow_prob(k));
    // derivative of the log term vanishes at (k+l-1) / -ln(1-p2)
    let peak = ((k + l - 1) as f64 / -(-p2).ln_1p()).ceil() as u64;
    let mut lo = peak.max(start);
    let mut hi = lo.max(start + 1);
    while union_term_ln(hi, k, l) >= 0.0 {
        lo = hi;
        hi *= 2;
    }
    // first float-negative point in (lo, hi]
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if union_term_ln(mid, k, l) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut n = hi;
    while n > start && union_bound_positive(n - 1, k, l)? {
        n -= 1;
    }
    while !union_bound_positive(n, k, l)? {
        n += 1;
    }
    Ok(n)
}

fn seven_ninths() -> BigRational {
    ratio(7, 9)
}

/// Evaluates one of the bipartite `k = 3` expressions at `n`.
pub fn bipartite_pair_formulas(n: u64, case: BoundCase) -> Result<BoundReport, BoundsError> {
    if n < case.min_n() {
        return Err(BoundsError::NTooSmall { n, min: case.min_n() });
    }
    let q = seven_ninths();
    let value = match case {
        BoundCase::BipStarTail => {
            int(n) * ratio(2, 9) * pow(&q, n - 1) + pow(&q, n)
        }
        BoundCase::BipPairSame => ratio(2 * n as i64 + 5, 9) * pow(&q, n - 2),
        BoundCase::BipPairDistinct => int(2) * pow(&q, n - 1) - pow(&ratio(5, 9), n - 1),
        BoundCase::BipPairTotal => {
            let same = bipartite_pair_formulas(n, BoundCase::BipPairSame)?.exact.expect("exact");
            let diff = bipartite_pair_formulas(n, BoundCase::BipPairDistinct)?.exact.expect("exact");
            ratio(1, 3) * same + ratio(2, 3) * diff
        }
        BoundCase::BipPairEnvelope => int(2 * n) * pow(&q, n - 2),
        other => return Err(BoundsError::WrongFamily { case: other }),
    };
    Ok(BoundReport::exact(case, n, 3, 2, value))
}

/// Evaluates one of the `K_{n,n,n}`, `k = 3`, `l = 3` upper bounds at `n`.
pub fn tripartite_formulas(n: u64, case: BoundCase) -> Result<BoundReport, BoundsError> {
    if n < 2 {
        return Err(BoundsError::NTooSmall { n, min: 2 });
    }
    let q = seven_ninths();
    let tail = pow(&q, 2 * n - 2);
    let value = match case {
        BoundCase::TriOneClass => int(4 * n * n) * tail,
        BoundCase::TriTwoClass => int(n * n) * pow(&q, n - 2),
        BoundCase::TriDistinct => int(3) * tail,
        BoundCase::TriTwoColor => int(2 * n + 1) * tail,
        BoundCase::TriMono => int(3 * (3 * n * n + 1)) * tail,
        BoundCase::TriSpreadTotal => {
            let [w_distinct, w_two, w_mono] = triangle_pattern_weights();
            let sub = |c| tripartite_formulas(n, c).map(|r| r.exact.expect("exact"));
            w_distinct * sub(BoundCase::TriDistinct)? + w_two * sub(BoundCase::TriTwoColor)? + w_mono * sub(BoundCase::TriMono)?
        }
        other => return Err(BoundsError::WrongFamily { case: other }),
    };
    Ok(BoundReport::exact(case, n, 3, 3, value))
}

/// Evaluates any case; `k` and `l` are used only by [`BoundCase::UnionBound`].
pub fn evaluate(case: BoundCase, n: u64, k: u32, l: u32) -> Result<BoundReport, BoundsError> {
    match case {
        BoundCase::UnionBound => union_success_bound(n, k, l),
        BoundCase::BipStarTail
        | BoundCase::BipPairSame
        | BoundCase::BipPairDistinct
        | BoundCase::BipPairTotal
        | BoundCase::BipPairEnvelope => bipartite_pair_formulas(n, case),
        _ => tripartite_formulas(n, case),
    }
}

/// Leading-order terms of the known bounds on the multicolor bipartite
/// Ramsey number `b_k(t)`, without their `(1 + o(1))` factors. These are
/// asymptotic estimates, not certified bounds for any particular `k, t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyEstimates {
    /// `(t / e) * sqrt(k)^(t+1)`
    pub lower: f64,
    /// `k^(t+1) * log_k(t)`
    pub upper: f64,
    pub certified: bool,
}

pub fn ramsey_bound_estimates(k: u32, t: u32) -> Result<RamseyEstimates, BoundsError> {
    if k < 2 || t < 2 {
        return Err(BoundsError::RamseyRange);
    }
    let (kf, tf) = (k as f64, t as f64);
    Ok(RamseyEstimates {
        lower: tf / std::f64::consts::E * kf.sqrt().powf(tf + 1.0),
        upper: kf.powf(tf + 1.0) * tf.ln() / kf.ln(),
        certified: false,
    })
}

/// `C(n, j) p^j (1-p)^(n-j)` summed over `j <= upto`, exactly.
pub fn binomial_cdf(n: u64, p: &BigRational, upto: u64) -> BigRational {
    let miss = BigRational::one() - p;
    let mut total = BigRational::zero();
    let mut choose = BigInt::one();
    for j in 0..=upto.min(n) {
        if j > 0 {
            choose = choose * BigInt::from(n - j + 1) / BigInt::from(j);
        }
        total += BigRational::from_integer(choose.clone()) * pow(p, j) * pow(&miss, n - j);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn star_probabilities() {
        assert_eq!(star_rainbow_prob(3, 4), q(3, 8));
        assert_eq!(star_rainbow_prob(3, 3), q(2, 9));
        assert_eq!(star_rainbow_prob(4, 3), q(0, 1));
        assert_eq!(star_rainbow_prob(1, 5), q(1, 1));
    }

    #[test]
    fn double_star_probabilities() {
        assert_eq!(double_star_rainbow_prob(3), q(3, 32));
        assert_eq!(double_star_rainbow_prob(2), q(2, 9));
        for k in 2..8 {
            assert_eq!(
                double_star_rainbow_prob(k) / star_rainbow_prob(k, k + 1),
                q(1, k as i64 + 1)
            );
        }
    }

    #[test]
    fn bipartite_examples() {
        let n = 5;
        let case1 = bipartite_pair_formulas(n, BoundCase::BipStarTail).unwrap().exact.unwrap();
        assert_eq!(case1, pow(&q(7, 9), 5) + int(5) * q(2, 9) * pow(&q(7, 9), 4));
        let same = bipartite_pair_formulas(5, BoundCase::BipPairSame).unwrap().exact.unwrap();
        assert_eq!(same, q(1715, 2187));
        let diff = bipartite_pair_formulas(2, BoundCase::BipPairDistinct).unwrap().exact.unwrap();
        assert_eq!(diff, q(1, 1));
        assert!(matches!(
            bipartite_pair_formulas(5, BoundCase::TriMono),
            Err(BoundsError::WrongFamily { .. })
        ));
    }

    #[test]
    fn tripartite_examples() {
        let sub2 = tripartite_formulas(4, BoundCase::TriTwoColor).unwrap().exact.unwrap();
        assert_eq!(sub2, int(9) * pow(&q(7, 9), 6));
        let w = triangle_pattern_weights();
        assert_eq!(w, [q(2, 9), q(2, 3), q(1, 9)]);
        assert_eq!(w.iter().cloned().fold(BigRational::zero(), |a, b| a + b), q(1, 1));
    }

    #[test]
    fn union_bound_small_n_is_vacuous() {
        let r = union_success_bound(10, 3, 1).unwrap();
        assert!(r.value < 0.0);
        assert!(r.exact.unwrap().is_negative());
        assert_eq!(union_success_bound(3, 3, 1), Err(BoundsError::NTooSmall { n: 3, min: 4 }));
        assert_eq!(union_success_bound(10, 2, 1), Err(BoundsError::KTooSmall(2)));
    }

    #[test]
    fn union_bound_switches_scheme() {
        assert_eq!(union_success_bound(200, 3, 1).unwrap().scheme, EvalScheme::ExactRational);
        let far = union_success_bound(5000, 3, 1).unwrap();
        assert_eq!(far.scheme, EvalScheme::LogSpace);
        assert!(far.value > 0.999_999);
    }

    #[test]
    fn ramsey_estimates() {
        let r = ramsey_bound_estimates(2, 2).unwrap();
        assert!((r.upper - 8.0).abs() < 1e-12);
        assert!((r.lower - 2.0 / std::f64::consts::E * 2f64.sqrt().powi(3)).abs() < 1e-12);
        assert!((r.lower - 2.08).abs() < 0.01);
        assert!(!r.certified);
        assert_eq!(ramsey_bound_estimates(1, 3), Err(BoundsError::RamseyRange));
    }

    #[test]
    fn case_tags_round_trip() {
        for c in BoundCase::ALL {
            assert_eq!(c.tag().parse::<BoundCase>().unwrap(), c);
        }
        assert_eq!("nope".parse::<BoundCase>(), Err(BoundsError::UnknownCase("nope".into())));
    }

    #[test]
    fn machine_line_format() {
        let r = bipartite_pair_formulas(2, BoundCase::BipPairDistinct).unwrap();
        assert_eq!(r.machine_line(), "bound bip-pair-distinct 2 1/1 1e0");
    }
}

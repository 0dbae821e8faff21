//! Uniform random colorings, frequency estimates of failure events, and a
//! randomized search for good colorings.
//!
//! Trial `i` of a run with master seed `s` draws from ChaCha8 seeded with `s`
//! on stream `i`, so every trial is reproducible on its own and trials can be
//! evaluated in any order on any number of threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{binomial_cdf, star_rainbow_prob, triangle_pattern_weights};
use crate::graph::{Coloring, GraphError, MultipartiteGraph, VertexId};
use crate::index::{lower_bound_structural, verify_coloring, verify_coloring_par, IndexError};
use crate::packing::has_l_packing;
use crate::parallel::with_jobs;
use crate::tree::{double_star_family, edges_rainbow, star_family, TerminalSet, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("attempts must be at least 1")]
    ZeroAttempts,
    #[error("unknown event tag `{0}`")]
    UnknownEvent(String),
    #[error("unknown terminal-set case `{0}`")]
    UnknownCase(String),
    #[error("event `{event}` needs {needs}")]
    Shape { event: Event, needs: &'static str },
    #[error("cannot place the `{case}` terminal set with k = {k} in classes {sizes:?}")]
    CaseUnplaceable { case: SetCase, k: usize, sizes: Vec<usize> },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// The per-trial random generator: ChaCha8 keyed by `master_seed`, stream `trial`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Colors every edge independently and uniformly from `1..=t`, in canonical
/// edge order.
pub fn random_coloring<R: Rng + ?Sized>(graph: &MultipartiteGraph, t: u32, rng: &mut R) -> Result<Coloring, GraphError> {
    if t == 0 {
        return Err(GraphError::NoColors);
    }
    let colors = (0..graph.edge_count()).map(|_| rng.random_range(1..=t)).collect();
    Coloring::new(graph, t, colors)
}

/// Named terminal-set shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetCase {
    /// The first `k` vertices of the lowest class with at least `k` vertices.
    OneClass,
    /// The first `k - 1` vertices of class 0 and the first vertex of class 1.
    TwoClasses,
    /// The first vertex of each of classes `0..k`.
    Spread,
}

impl SetCase {
    pub fn tag(self) -> &'static str {
        match self {
            SetCase::OneClass => "one-class",
            SetCase::TwoClasses => "two-classes",
            SetCase::Spread => "spread",
        }
    }

    pub fn terminals(self, graph: &MultipartiteGraph, k: usize) -> Result<TerminalSet, McError> {
        let sizes = graph.class_sizes();
        let unplaceable = || McError::CaseUnplaceable {
            case: self,
            k,
            sizes: sizes.to_vec(),
        };
        let vertices: Vec<VertexId> = match self {
            SetCase::OneClass => {
                let class = sizes.iter().position(|&n| n >= k).ok_or_else(unplaceable)?;
                (0..k).map(|o| VertexId::new(class, o)).collect()
            }
            SetCase::TwoClasses => {
                if k < 2 || sizes[0] < k - 1 {
                    return Err(unplaceable());
                }
                (0..k - 1)
                    .map(|o| VertexId::new(0, o))
                    .chain(std::iter::once(VertexId::new(1, 0)))
                    .collect()
            }
            SetCase::Spread => {
                if k > sizes.len() {
                    return Err(unplaceable());
                }
                (0..k).map(|c| VertexId::new(c, 0)).collect()
            }
        };
        Ok(TerminalSet::new(graph, &vertices)?)
    }
}

impl fmt::Display for SetCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SetCase {
    type Err = McError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [SetCase::OneClass, SetCase::TwoClasses, SetCase::Spread]
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| McError::UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Explicit(TerminalSet),
    /// Every `k`-set at once; only meaningful for [`Event::AnySetFails`].
    AllSets { k: usize },
    Case { case: SetCase, k: usize },
}

/// Events whose frequency can be estimated. Family events look only at one
/// explicit tree family; full events run the packing engine over all trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    /// At most `l - 1` stars of the star family are rainbow.
    StarTail,
    /// At most `l - 1` double stars of the double-star family are rainbow.
    DoubleStarTail,
    /// `S = {x, y, z}` with `x, y` in one class, `z` in another, `t = 3`:
    /// the paired trees through `z` cannot supply two disjoint rainbow trees.
    PairFamilyFails,
    /// The triangle on three terminals in distinct classes is rainbow.
    TriangleDistinct,
    /// The triangle uses exactly two colors.
    TriangleTwo,
    /// The triangle is monochromatic.
    TriangleMono,
    /// `S` has at least one rainbow S-tree.
    RainbowTree,
    /// `S` has fewer than `l` internally disjoint rainbow S-trees.
    PackingFails,
    /// Some `k`-set has fewer than `l` internally disjoint rainbow S-trees.
    AnySetFails,
}

impl Event {
    pub const ALL: [Event; 9] = [
        Event::StarTail,
        Event::DoubleStarTail,
        Event::PairFamilyFails,
        Event::TriangleDistinct,
        Event::TriangleTwo,
        Event::TriangleMono,
        Event::RainbowTree,
        Event::PackingFails,
        Event::AnySetFails,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Event::StarTail => "star-tail",
            Event::DoubleStarTail => "double-star-tail",
            Event::PairFamilyFails => "pair-family-fail",
            Event::TriangleDistinct => "triangle-distinct",
            Event::TriangleTwo => "triangle-two",
            Event::TriangleMono => "triangle-mono",
            Event::RainbowTree => "rainbow-tree",
            Event::PackingFails => "packing-fail",
            Event::AnySetFails => "any-set-fail",
        }
    }

    /// True for events restricted to an explicit tree family or edge pattern.
    pub fn is_family_restricted(self) -> bool {
        !matches!(self, Event::RainbowTree | Event::PackingFails | Event::AnySetFails)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Event {
    type Err = McError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Event::ALL
            .into_iter()
            .find(|e| e.tag() == s)
            .ok_or_else(|| McError::UnknownEvent(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McConfig {
    pub master_seed: u64,
    pub trials: u64,
    pub t: u32,
    pub l: usize,
    pub selector: Selector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub event: Event,
    pub successes: u64,
    pub trials: u64,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl McEstimate {
    fn new(event: Event, successes: u64, trials: u64, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        Self {
            event,
            successes,
            trials,
            seed,
            estimate: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `successes / trials` as an exact fraction.
    pub fn exact_estimate(&self) -> BigRational {
        BigRational::new(BigInt::from(self.successes), BigInt::from(self.trials))
    }

    /// `mc <event> <trials> <successes> <estimate> <stderr>`
    pub fn machine_line(&self) -> String {
        format!(
            "mc {} {} {} {:.10} {:.10}",
            self.event, self.trials, self.successes, self.estimate, self.stderr
        )
    }

    /// Number of standard errors between the estimate and `p`, measured with
    /// the standard error of `p` itself so that exact agreement at `p = 0` or
    /// `p = 1` is not reported as infinitely far.
    pub fn z_score(&self, p: f64) -> f64 {
        let sd = (p * (1.0 - p) / self.trials as f64).sqrt();
        if sd == 0.0 {
            return if self.estimate == p { 0.0 } else { f64::INFINITY };
        }
        (self.estimate - p) / sd
    }
}

/// Everything a single trial needs, resolved once per run.
enum Plan {
    Family { trees: Vec<Vec<usize>>, max_fail: usize },
    Pair { xz: usize, yz: usize, arms: Vec<(usize, usize)> },
    Triangle { edges: [usize; 3], colors_used: usize },
    Rainbow(TerminalSet),
    Packing(TerminalSet, usize),
    AnySet(usize, usize),
}

fn terminals_of(graph: &MultipartiteGraph, selector: &Selector, event: Event) -> Result<TerminalSet, McError> {
    match selector {
        Selector::Explicit(s) => Ok(s.clone()),
        Selector::Case { case, k } => case.terminals(graph, *k),
        Selector::AllSets { .. } => Err(McError::Shape {
            event,
            needs: "a single terminal set, not all sets",
        }),
    }
}

fn plan(graph: &MultipartiteGraph, config: &McConfig, event: Event) -> Result<Plan, McError> {
    if let Event::AnySetFails = event {
        return match config.selector {
            Selector::AllSets { k } => Ok(Plan::AnySet(k, config.l)),
            _ => Err(McError::Shape {
                event,
                needs: "the all-sets selector",
            }),
        };
    }
    let s = terminals_of(graph, &config.selector, event)?;
    let family_plan = |trees: Vec<crate::tree::STree>| Plan::Family {
        trees: trees.into_iter().map(|t| t.edges().to_vec()).collect(),
        max_fail: config.l.saturating_sub(1),
    };
    Ok(match event {
        Event::StarTail => family_plan(star_family(graph, &s)?),
        Event::DoubleStarTail => family_plan(double_star_family(graph, &s)?),
        Event::PairFamilyFails => {
            let needs = "t = 3 and S = {x, y, z} with x, y in one class and z in another";
            let shape = Err(McError::Shape { event, needs });
            if config.t != 3 || s.k() != 3 {
                return shape;
            }
            let v = s.vertices();
            let (x, y, z) = match (v[0].class == v[1].class, v[1].class == v[2].class, v[0].class == v[2].class) {
                (true, false, false) => (v[0], v[1], v[2]),
                (false, true, false) => (v[1], v[2], v[0]),
                (false, false, true) => (v[0], v[2], v[1]),
                _ => return shape,
            };
            let arms = graph
                .class_vertices(z.class)
                .filter(|&w| w != z)
                .map(|w| Ok((graph.edge_between(x, w)?, graph.edge_between(y, w)?)))
                .collect::<Result<Vec<_>, GraphError>>()?;
            Plan::Pair {
                xz: graph.edge_between(x, z)?,
                yz: graph.edge_between(y, z)?,
                arms,
            }
        }
        Event::TriangleDistinct | Event::TriangleTwo | Event::TriangleMono => {
            let v = s.vertices();
            if v.len() != 3 || v[0].class == v[1].class || v[1].class == v[2].class || v[0].class == v[2].class {
                return Err(McError::Shape {
                    event,
                    needs: "three terminals in three distinct classes",
                });
            }
            let edges = [
                graph.edge_between(v[0], v[1])?,
                graph.edge_between(v[1], v[2])?,
                graph.edge_between(v[0], v[2])?,
            ];
            let colors_used = match event {
                Event::TriangleDistinct => 3,
                Event::TriangleTwo => 2,
                _ => 1,
            };
            Plan::Triangle { edges, colors_used }
        }
        Event::RainbowTree => Plan::Rainbow(s),
        Event::PackingFails => Plan::Packing(s, config.l),
        Event::AnySetFails => unreachable!("handled above"),
    })
}

fn run_trial(graph: &MultipartiteGraph, coloring: &Coloring, plan: &Plan) -> Result<bool, McError> {
    Ok(match plan {
        Plan::Family { trees, max_fail } => {
            trees.iter().filter(|e| edges_rainbow(e, coloring)).count() <= *max_fail
        }
        Plan::Pair { xz, yz, arms } => {
            let (a, b) = (coloring.color_at(*xz), coloring.color_at(*yz));
            // an arm w supplies the trees {xz, xw, yw} or {yz, xw, yw} when
            // its two colors avoid the color of the connecting edge
            let pair = |w: &(usize, usize)| {
                let (p, q) = (coloring.color_at(w.0), coloring.color_at(w.1));
                (p != q).then(|| 6 - p - q)
            };
            if a == b {
                arms.iter().filter(|w| pair(w) == Some(a)).count() <= 1
            } else {
                let via_x = arms.iter().any(|w| pair(w) == Some(a));
                let via_y = arms.iter().any(|w| pair(w) == Some(b));
                !(via_x && via_y)
            }
        }
        Plan::Triangle { edges, colors_used } => {
            let c = edges.map(|e| coloring.color_at(e));
            let distinct = 1 + usize::from(c[1] != c[0]) + usize::from(c[2] != c[0] && c[2] != c[1]);
            distinct == *colors_used
        }
        Plan::Rainbow(s) => has_l_packing(graph, coloring, s, 1).is_some(),
        Plan::Packing(s, l) => has_l_packing(graph, coloring, s, *l).is_none(),
        Plan::AnySet(k, l) => verify_coloring(graph, coloring, *k, *l)?.is_some(),
    })
}

/// Estimates the frequency of `event` over `config.trials` random colorings.
/// Trials run on the current thread pool; the result does not depend on it.
pub fn estimate_event(graph: &MultipartiteGraph, config: &McConfig, event: Event) -> Result<McEstimate, McError> {
    if config.trials == 0 {
        return Err(McError::ZeroTrials);
    }
    if config.t == 0 {
        return Err(GraphError::NoColors.into());
    }
    let plan = plan(graph, config, event)?;
    let hits = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let coloring = random_coloring(graph, config.t, &mut trial_rng(config.master_seed, trial))?;
            run_trial(graph, &coloring, &plan).map(u64::from)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(McEstimate::new(event, hits, config.trials, config.master_seed))
}

/// [`estimate_event`] on a dedicated pool of `jobs` threads.
pub fn estimate_event_par(
    graph: &MultipartiteGraph,
    config: &McConfig,
    event: Event,
    jobs: usize,
) -> Result<McEstimate, McError> {
    with_jobs(jobs, || estimate_event(graph, config, event))
}

/// Exact probability of a family-restricted event under uniform colorings,
/// where a closed form exists; `None` for full events.
pub fn exact_probability(graph: &MultipartiteGraph, config: &McConfig, event: Event) -> Result<Option<BigRational>, McError> {
    let max_fail = config.l.saturating_sub(1) as u64;
    Ok(match event {
        Event::StarTail => {
            let s = terminals_of(graph, &config.selector, event)?;
            let m = star_family(graph, &s)?.len() as u64;
            Some(binomial_cdf(m, &star_rainbow_prob(s.k() as u32, config.t), max_fail))
        }
        Event::DoubleStarTail => {
            let s = terminals_of(graph, &config.selector, event)?;
            let m = double_star_family(graph, &s)?.len() as u64;
            Some(binomial_cdf(m, &star_rainbow_prob(s.k() as u32 + 1, config.t), max_fail))
        }
        Event::PairFamilyFails => {
            let Plan::Pair { arms, .. } = plan(graph, config, event)? else {
                unreachable!("pair plan")
            };
            let m = arms.len() as u64;
            let frac = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
            let same = binomial_cdf(m, &frac(2, 9), 1);
            // no arm for x, or no arm for y
            let distinct = frac(2, 1) * binomial_cdf(m, &frac(2, 9), 0) - binomial_cdf(m, &frac(4, 9), 0);
            Some(frac(1, 3) * same + frac(2, 3) * distinct)
        }
        Event::TriangleDistinct | Event::TriangleTwo | Event::TriangleMono if config.t == 3 => {
            let [d, two, mono] = triangle_pattern_weights();
            Some(match event {
                Event::TriangleDistinct => d,
                Event::TriangleTwo => two,
                _ => mono,
            })
        }
        _ => None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `attempt` is the 0-based index of the first passing coloring.
    Found { coloring: Coloring, attempt: u64 },
    Exhausted { attempts: u64, reason: ExhaustReason },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExhaustReason {
    /// No coloring with this few colors can work.
    BelowLowerBound { t: u32, bound: u32 },
    /// Every attempt had a failing set; the one from the last attempt is kept.
    AllFailed { last_failing: TerminalSet },
}

impl fmt::Display for ExhaustReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExhaustReason::BelowLowerBound { t, bound } => {
                write!(f, "t = {t} is below the structural lower bound {bound}")
            }
            ExhaustReason::AllFailed { last_failing } => {
                write!(f, "every attempt failed; last failing set {last_failing}")
            }
        }
    }
}

/// Samples colorings for attempts `0, 1, ...` and returns the first one that
/// gives every `k`-set `l` internally disjoint rainbow trees.
pub fn search_good_coloring(
    graph: &MultipartiteGraph,
    t: u32,
    k: usize,
    l: usize,
    attempts: u64,
    seed: u64,
) -> Result<SearchOutcome, McError> {
    search_good_coloring_par(graph, t, k, l, attempts, seed, 1)
}

/// [`search_good_coloring`] verifying each attempt on `jobs` threads.
pub fn search_good_coloring_par(
    graph: &MultipartiteGraph,
    t: u32,
    k: usize,
    l: usize,
    attempts: u64,
    seed: u64,
    jobs: usize,
) -> Result<SearchOutcome, McError> {
    if attempts == 0 {
        return Err(McError::ZeroAttempts);
    }
    let bound = lower_bound_structural(graph, k, l)?;
    if t < bound {
        return Ok(SearchOutcome::Exhausted {
            attempts: 0,
            reason: ExhaustReason::BelowLowerBound { t, bound },
        });
    }
    let mut last_failing = None;
    for attempt in 0..attempts {
        let coloring = random_coloring(graph, t, &mut trial_rng(seed, attempt))?;
        match verify_coloring_par(graph, &coloring, k, l, jobs)? {
            None => return Ok(SearchOutcome::Found { coloring, attempt }),
            Some(s) => last_failing = Some(s),
        }
    }
    Ok(SearchOutcome::Exhausted {
        attempts,
        reason: ExhaustReason::AllFailed {
            last_failing: last_failing.expect("at least one attempt"),
        },
    })
}

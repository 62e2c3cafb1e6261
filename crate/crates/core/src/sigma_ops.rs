//! Set operations on the completion Ω̄.
//!
//! Binary operations act index-wise on fast subsequences, so the new modulus
//! is closed-form: `(A∪B) △ (A'∪B') ⊆ (A△A') ∪ (B△B')`, hence two tails of
//! `2^(−k−1)` give `2^-k` at index `k + 1`. Complement preserves distances
//! exactly.
//!
//! The countable union follows the finite-union approximation
//! `Y_L = ∪_{i<N_L} B^i_{K_L}`: `N_L` is chosen so a certified bound on the
//! mass outside the first `N_L` members is below `1/(2L)`, and `K_L` so the
//! summed approximation error of those members is below `1/(2L)`. Then
//! `d̄(Y_L, E) < 1/L` and the result has modulus `k ↦ 2^(k+1)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::completion::{
    extract_fast, measure_completion, zero_point, CauchyPoint, Certification, FastPoint,
};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set_algebra::{AlgebraConfig, Element};

fn binary_pt(
    x: &CauchyPoint,
    y: &CauchyPoint,
    name: &str,
    op: fn(&Element, &Element) -> Result<Element>,
) -> Result<CauchyPoint> {
    x.config().check_same(y.config())?;
    let (fx, fy) = (extract_fast(x), extract_fast(y));
    let settled = x.settled().zip(y.settled()).map(|(a, b)| a.max(b));
    let (ax, ay) = (x.clone(), y.clone());
    let mut p = CauchyPoint::new(
        x.config().clone(),
        format!("{name}({}, {})", x.label(), y.label()),
        move |n| op(&fx.approximant(n), &fy.approximant(n)).expect("configs checked at construction"),
        |k| k as usize + 1,
    )
    .with_audit(Arc::new(move |k| combine_audits(&[ax.certify(k + 1), ay.certify(k + 1)])));
    if let Some(s) = settled {
        p = p.settled_at(s);
    }
    Ok(p)
}

fn combine_audits(certs: &[Certification]) -> Certification {
    certs.iter().find(|c| !c.is_full()).cloned().unwrap_or(Certification::Full)
}

pub fn union_pt(x: &CauchyPoint, y: &CauchyPoint) -> Result<CauchyPoint> {
    binary_pt(x, y, "union", Element::union)
}

pub fn intersect_pt(x: &CauchyPoint, y: &CauchyPoint) -> Result<CauchyPoint> {
    binary_pt(x, y, "intersect", Element::intersect)
}

/// `x ∩ yᶜ`, in one step rather than through `complement_pt`.
pub fn difference_pt(x: &CauchyPoint, y: &CauchyPoint) -> Result<CauchyPoint> {
    binary_pt(x, y, "diff", Element::difference)
}

pub fn complement_pt(x: &CauchyPoint) -> CauchyPoint {
    let fx = extract_fast(x);
    let ax = x.clone();
    let mut p = CauchyPoint::new(
        x.config().clone(),
        format!("complement({})", x.label()),
        move |n| fx.approximant(n).complement(),
        |k| k as usize,
    )
    .with_audit(Arc::new(move |k| ax.certify(k)));
    if let Some(s) = x.settled() {
        p = p.settled_at(s);
    }
    p
}

fn ceil_log2(m: usize) -> usize {
    m.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Finite union of any number of points: `n ↦ ∪ fast_i(n + ⌈log₂ m⌉)`.
pub fn union_all_pt(config: &AlgebraConfig, points: &[CauchyPoint]) -> Result<CauchyPoint> {
    if points.is_empty() {
        return Ok(zero_point(config));
    }
    for p in points {
        config.check_same(p.config())?;
    }
    let extra = ceil_log2(points.len());
    let fast: Vec<FastPoint> = points.iter().map(extract_fast).collect();
    let settled = points.iter().map(CauchyPoint::settled).try_fold(0usize, |acc, s| s.map(|s| acc.max(s)));
    let cfg = config.clone();
    let audited = points.to_vec();
    let label = if points.len() <= 3 {
        format!("union_all({})", points.iter().map(CauchyPoint::label).collect::<Vec<_>>().join(", "))
    } else {
        format!("union_all({} points)", points.len())
    };
    let mut p = CauchyPoint::new(
        config.clone(),
        label,
        move |n| {
            let parts: Vec<Element> = fast.iter().map(|f| f.approximant(n)).collect();
            Element::union_all(&cfg, &parts).expect("configs checked at construction")
        },
        move |k| k as usize + extra,
    )
    .with_audit(Arc::new(move |k| {
        combine_audits(&audited.iter().map(|p| p.certify(k + extra as u32)).collect::<Vec<_>>())
    }));
    if let Some(s) = settled {
        p = p.settled_at(s);
    }
    Ok(p)
}

/// Enclosure of `lim μ(B^x_n ∩ B^y_n)`; the points are disjoint in Ω̄ iff
/// this limit is 0.
pub fn disjoint_within(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Enclosure> {
    Ok(measure_completion(&intersect_pt(x, y)?, depth))
}

/// Enclosure of `|μ̄(x ∪ y) − μ̄(x) − μ̄(y)|` from the three measure
/// enclosures. Contains 0 whenever the points are disjoint.
pub fn additivity_defect(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Enclosure> {
    let u = measure_completion(&union_pt(x, y)?, depth);
    let mx = measure_completion(x, depth);
    let my = measure_completion(y, depth);
    Ok(u.sub(&mx).sub(&my).abs())
}

/// How the mass of a countable union beyond its first `N` members is
/// controlled.
#[derive(Clone)]
pub enum TailCertificate {
    /// Members are nested increasing. The remainder beyond member `N−1` is
    /// at most `μ(X) − μ̄(member N−1)`; `N` is searched up to
    /// [`INCREASING_SEARCH_CAP`].
    Increasing,
    /// `bound(N) ≥ μ̄(∪_{i≥N} member_i)`, nonnegative, nonincreasing, → 0.
    SummableBound(Arc<dyn Fn(usize) -> Rational + Send + Sync>),
    /// No structural information: the remainder beyond `N` members is at
    /// most `μ(X) − μ̄(∪_{i<N} member_i)`, searched for `N ≤ cap`.
    SearchCap(usize),
}

pub const INCREASING_SEARCH_CAP: usize = 1 << 24;

// Largest N tried for a summable bound, and for its exact-zero check.
const SUMMABLE_SEARCH_LIMIT: usize = 1 << 20;
const ZERO_TAIL_SEARCH_LIMIT: usize = 1 << 12;

impl TailCertificate {
    pub fn summable(bound: impl Fn(usize) -> Rational + Send + Sync + 'static) -> Self {
        TailCertificate::SummableBound(Arc::new(bound))
    }
}

impl fmt::Debug for TailCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailCertificate::Increasing => write!(f, "Increasing"),
            TailCertificate::SummableBound(_) => write!(f, "SummableBound(..)"),
            TailCertificate::SearchCap(c) => write!(f, "SearchCap({c})"),
        }
    }
}

/// An indexed family `i ↦ E_i` of completion points, `i ≥ 0`.
#[derive(Clone)]
pub struct Family {
    config: AlgebraConfig,
    member: Arc<dyn Fn(usize) -> CauchyPoint + Send + Sync>,
    // Constant families skip the point wrapper when building finite unions.
    elements: Option<Arc<dyn Fn(usize) -> Element + Send + Sync>>,
    // Every member settles by this index.
    settled_by: Option<usize>,
    label: String,
}

impl Family {
    pub fn points(
        config: AlgebraConfig,
        label: impl Into<String>,
        member: impl Fn(usize) -> CauchyPoint + Send + Sync + 'static,
    ) -> Self {
        Family { config, member: Arc::new(member), elements: None, settled_by: None, label: label.into() }
    }

    /// A family of constant points `E_{A_i}`.
    pub fn constants(
        config: AlgebraConfig,
        label: impl Into<String>,
        member: impl Fn(usize) -> Element + Send + Sync + 'static,
    ) -> Self {
        let member: Arc<dyn Fn(usize) -> Element + Send + Sync> = Arc::new(member);
        let wrapped = member.clone();
        Family {
            config,
            member: Arc::new(move |i| crate::completion::constant_point(wrapped(i))),
            elements: Some(member),
            settled_by: Some(0),
            label: label.into(),
        }
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.config
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn member(&self, i: usize) -> CauchyPoint {
        let p = (self.member)(i);
        assert!(
            self.config.check_same(p.config()).is_ok(),
            "family {} member {i} has a different algebra configuration",
            self.label
        );
        p
    }

    /// Certified `Σ_{i<n} d̄(fast_i(k), E_i)`.
    fn approximation_error(&self, n: usize, k: usize) -> Rational {
        match self.settled_by {
            Some(s) if k >= s => Rational::zero(),
            _ => Rational::from_integer(n as i64) * Rational::pow2(-(k as i64)),
        }
    }

    /// Smallest `k` with `approximation_error(n, k) < budget`.
    fn precision_for(&self, n: usize, budget: &Rational) -> usize {
        let mut k = 0;
        while self.approximation_error(n, k) >= *budget {
            k += 1;
        }
        k
    }

    fn finite_union(&self, n: usize, k: usize) -> Element {
        let parts: Vec<Element> = match &self.elements {
            Some(element) => (0..n).map(|i| element(i)).collect(),
            None => (0..n).map(|i| extract_fast(&self.member(i)).approximant(k)).collect(),
        };
        Element::union_all(&self.config, &parts).expect("member configs checked")
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family").field("label", &self.label).finish_non_exhaustive()
    }
}

/// The choices made at stage `L`: `Y_L` is the union of the first `members`
/// members at fast index `fast_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagePlan {
    pub stage: usize,
    pub members: usize,
    pub fast_index: usize,
    /// Certified bound on the mass of `E` outside the first `members` members.
    pub tail_bound: Rational,
    /// Certified bound on `d̄(Y_L, ∪_{i<members} E_i)`.
    pub approximation_bound: Rational,
}

struct UnionState {
    family: Family,
    cert: TailCertificate,
    plans: Mutex<HashMap<usize, Option<StagePlan>>>,
    stages: Mutex<HashMap<usize, Element>>,
}

/// `∪_i E_i` together with its per-stage construction.
#[derive(Clone)]
pub struct CountableUnion {
    state: Arc<UnionState>,
    point: CauchyPoint,
    exact_members: Option<usize>,
}

impl fmt::Debug for CountableUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CountableUnion")
            .field("family", &self.state.family.label)
            .field("cert", &self.state.cert)
            .field("exact_members", &self.exact_members)
            .finish()
    }
}

/// Binary search for the smallest `n` in `[lo, hi]` with `pred(n)`, given
/// `pred(hi)`; the returned value always satisfies `pred`.
fn bisect(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi
}

/// Galloping search over `start, 2·start, ...` up to `cap`, then bisection.
fn gallop(start: usize, cap: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
    let mut prev = start.saturating_sub(1);
    let mut n = start;
    loop {
        if pred(n) {
            return Some(if n == start { n } else { bisect(prev + 1, n, &pred) });
        }
        if n >= cap {
            return None;
        }
        prev = n;
        n = n.saturating_mul(2).max(1).min(cap);
    }
}

impl UnionState {
    fn plan(&self, stage: usize) -> Option<StagePlan> {
        if let Some(p) = self.plans.lock().expect("plan cache poisoned").get(&stage) {
            return p.clone();
        }
        let plan = self.compute_plan(stage);
        self.plans.lock().expect("plan cache poisoned").insert(stage, plan.clone());
        plan
    }

    fn compute_plan(&self, stage: usize) -> Option<StagePlan> {
        let half = Rational::new(1, 2 * stage as i64);
        let family = &self.family;
        let mass = family.config.total_mass();
        match &self.cert {
            TailCertificate::SummableBound(bound) => {
                let members = gallop(0, SUMMABLE_SEARCH_LIMIT, |n| bound(n) < half)?;
                let k = family.precision_for(members, &half);
                Some(StagePlan {
                    stage,
                    members,
                    fast_index: k,
                    tail_bound: bound(members),
                    approximation_bound: family.approximation_error(members, k),
                })
            }
            TailCertificate::Increasing => {
                // With members nested, μ̄(E_{n−1}) ≥ μ(fast_{n−1}(k)) − err_{n−1}(k).
                let tail = |n: usize| -> Rational {
                    let k = family.precision_for(n, &half);
                    let last = extract_fast(&family.member(n - 1));
                    &mass - &last.approximant(k).measure() + last.tail_bound(k)
                };
                let members = gallop(1, INCREASING_SEARCH_CAP, |n| tail(n) < half)?;
                let k = family.precision_for(members, &half);
                Some(StagePlan {
                    stage,
                    members,
                    fast_index: k,
                    tail_bound: tail(members),
                    approximation_bound: family.approximation_error(members, k),
                })
            }
            TailCertificate::SearchCap(cap) => {
                let tail = |n: usize| -> Rational {
                    let k = family.precision_for(n, &half);
                    &mass - &family.finite_union(n, k).measure() + family.approximation_error(n, k)
                };
                let members = gallop(1, (*cap).max(1), |n| tail(n) < half)?;
                let k = family.precision_for(members, &half);
                Some(StagePlan {
                    stage,
                    members,
                    fast_index: k,
                    tail_bound: tail(members),
                    approximation_bound: family.approximation_error(members, k),
                })
            }
        }
    }

    /// Largest certifiable stage `≤ stage`, if any.
    fn best_stage(&self, stage: usize) -> Option<usize> {
        self.plan(1)?;
        // Certifiability is monotone in L: a smaller budget needs more members.
        let first_bad = bisect(2, stage, |l| self.plan(l).is_none());
        Some(first_bad - 1)
    }

    fn stage_element(&self, stage: usize) -> Element {
        if let Some(e) = self.stages.lock().expect("stage cache poisoned").get(&stage) {
            return e.clone();
        }
        let e = match self.plan(stage) {
            Some(plan) => self.family.finite_union(plan.members, plan.fast_index),
            None => match self.best_stage(stage) {
                Some(best) => self.stage_element(best),
                None => Element::empty(&self.family.config),
            },
        };
        self.stages.lock().expect("stage cache poisoned").insert(stage, e.clone());
        e
    }

    fn certify(&self, k: u32) -> Certification {
        let stage = stage_for_precision(k);
        if self.plan(stage).is_some() {
            return Certification::Full;
        }
        match self.best_stage(stage) {
            Some(best) => Certification::Partial { stage: best, precision: Rational::new(1, best as i64) },
            None => Certification::Partial { stage: 0, precision: self.family.config.total_mass() },
        }
    }
}

/// `L = 2^(k+1)`, the stage whose error `1/L` halves `2^-k`.
fn stage_for_precision(k: u32) -> usize {
    1usize.checked_shl(k + 1).unwrap_or(usize::MAX)
}

/// The countable union `∪_i family(i)` as a point of Ω̄ whose `L`-th
/// approximant is `Y_L` (approximant 0 repeats `Y_1`).
///
/// When a summable bound reaches exactly 0 at some `N` and every member is
/// settled, the union is the finite union of the first `N` members and the
/// result is settled.
pub fn countable_union(family: &Family, cert: TailCertificate) -> Result<CountableUnion> {
    // Surface a mismatched family now rather than inside an approximant.
    let first = (family.member)(0);
    family.config.check_same(first.config())?;
    if let TailCertificate::SearchCap(0) = cert {
        return Err(Error::Usage("search cap must be positive".into()));
    }

    let exact_members = match (&cert, family.settled_by) {
        (TailCertificate::SummableBound(bound), Some(_)) => {
            gallop(0, ZERO_TAIL_SEARCH_LIMIT, |n| bound(n).is_zero())
        }
        _ => None,
    };

    let state = Arc::new(UnionState {
        family: family.clone(),
        cert,
        plans: Mutex::new(HashMap::new()),
        stages: Mutex::new(HashMap::new()),
    });

    let label = format!("cup({})", family.label);
    let point = match (exact_members, family.settled_by) {
        (Some(n), Some(s)) => {
            let y = family.finite_union(n, s);
            CauchyPoint::new(family.config.clone(), label, move |_| y.clone(), |_| 0).settled_at(0)
        }
        _ => {
            let st = state.clone();
            let audit_state = state.clone();
            CauchyPoint::new(
                family.config.clone(),
                label,
                move |i| st.stage_element(i.max(1)),
                stage_for_precision,
            )
            .with_audit(Arc::new(move |k| audit_state.certify(k)))
        }
    };
    Ok(CountableUnion { state, point, exact_members })
}

impl CountableUnion {
    pub fn point(&self) -> &CauchyPoint {
        &self.point
    }

    pub fn family(&self) -> &Family {
        &self.state.family
    }

    /// `Some(N)` when the union is known to equal the union of its first `N`
    /// members exactly.
    pub fn exact_members(&self) -> Option<usize> {
        self.exact_members
    }

    /// The plan for stage `L`, or `None` when the certificate cannot reach it.
    pub fn stage(&self, stage: usize) -> Option<StagePlan> {
        assert!(stage >= 1, "stages start at 1");
        if let Some(n) = self.exact_members {
            return Some(StagePlan {
                stage,
                members: n,
                fast_index: self.state.family.settled_by.unwrap_or(0),
                tail_bound: Rational::zero(),
                approximation_bound: Rational::zero(),
            });
        }
        self.state.plan(stage)
    }

    pub fn certify(&self, k: u32) -> Certification {
        self.point.certify(k)
    }

    /// `Y_L`.
    pub fn stage_element(&self, stage: usize) -> Element {
        self.point.approximant(stage.max(1))
    }

    /// The finite union `⊔_{i<N_L} E_i` as a point of Ω̄.
    pub fn partial_union(&self, stage: usize) -> Result<CauchyPoint> {
        let plan = self
            .stage(stage)
            .ok_or_else(|| Error::Usage(format!("stage {stage} is not certified")))?;
        let members: Vec<CauchyPoint> = (0..plan.members).map(|i| self.state.family.member(i)).collect();
        union_all_pt(&self.state.family.config, &members)
    }

    /// Enclosures of `μ̄(U ⊓ E)` and `μ̄(U)` for `U = ⊔_{i<N_L} E_i`. They
    /// agree up to slack because every finite partial union sits inside `E`.
    pub fn domination(&self, stage: usize, depth: u32) -> Result<(Enclosure, Enclosure)> {
        let partial = self.partial_union(stage)?;
        let inside = measure_completion(&intersect_pt(&partial, &self.point)?, depth);
        Ok((inside, measure_completion(&partial, depth)))
    }

    /// Enclosure of `μ̄(E ∩ (⊔_{i<N_L} E_i)ᶜ)`; at most `1/(2L)` plus slack.
    pub fn remainder(&self, stage: usize, depth: u32) -> Result<Enclosure> {
        let partial = self.partial_union(stage)?;
        let rest = difference_pt(&self.point, &partial)?;
        Ok(measure_completion(&rest, depth))
    }
}

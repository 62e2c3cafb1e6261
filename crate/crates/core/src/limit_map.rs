//! The map `F` from the completion to limsup sets, and the checks that it is
//! a well-defined isometry and a σ-algebra isomorphism.
//!
//! `F(x)` is never materialized as a point set. A [`MeasurableHandle`] is the
//! fast approximant stream `B_{f(n)}` of `x` plus the bound
//! `μ*(B_{f(n)} △ limsup) ≤ Σ_{k≥n} 2^-k = 2^(−n+1)`, which telescopes from
//! the fast tail. Handles combined index-wise add their bounds, so a handle
//! carries a weight `w` and the bound `w·2^(−n+1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::completion::{dist_completion, equivalent_within, extract_fast, CauchyPoint, Certification, FastPoint};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set_algebra::{AlgebraConfig, Element};
use crate::sigma_ops::{complement_pt, countable_union, intersect_pt, union_pt, Family, TailCertificate};

type Stream = Arc<dyn Fn(usize) -> Element + Send + Sync>;
type Exactness = Arc<dyn Fn(usize) -> bool + Send + Sync>;

/// `F(x)`: a representative of the limsup of the fast approximants of `x`.
#[derive(Clone)]
pub struct MeasurableHandle {
    config: AlgebraConfig,
    stream: Stream,
    exact: Exactness,
    weight: u64,
    fast: Option<FastPoint>,
    label: String,
}

impl fmt::Debug for MeasurableHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasurableHandle")
            .field("label", &self.label)
            .field("weight", &self.weight)
            .finish_non_exhaustive()
    }
}

#[allow(non_snake_case)]
pub fn apply_F(x: &CauchyPoint) -> MeasurableHandle {
    let fast = extract_fast(x);
    let (s, e) = (fast.clone(), fast.clone());
    MeasurableHandle {
        config: x.config().clone(),
        stream: Arc::new(move |n| s.approximant(n)),
        exact: Arc::new(move |n| e.is_exact_at(n)),
        weight: 1,
        fast: Some(fast),
        label: format!("F({})", x.label()),
    }
}

impl MeasurableHandle {
    pub fn config(&self) -> &AlgebraConfig {
        &self.config
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn approximant(&self, n: usize) -> Element {
        (self.stream)(n)
    }

    /// Certified `μ*(approximant(n) △ S)`.
    pub fn bound(&self, n: usize) -> Rational {
        if (self.exact)(n) {
            Rational::zero()
        } else {
            Rational::from_integer(self.weight as i64) * Rational::pow2(1 - n as i64)
        }
    }

    /// The completion point this handle was built from, as its fast
    /// sequence. `None` for handles combined from several points.
    pub fn source_point(&self) -> Option<CauchyPoint> {
        self.fast.as_ref().map(FastPoint::as_point)
    }

    fn combine(
        &self,
        other: &MeasurableHandle,
        name: &str,
        op: fn(&Element, &Element) -> Result<Element>,
    ) -> Result<MeasurableHandle> {
        self.config.check_same(&other.config)?;
        let (a, b) = (self.stream.clone(), other.stream.clone());
        let (ea, eb) = (self.exact.clone(), other.exact.clone());
        Ok(MeasurableHandle {
            config: self.config.clone(),
            stream: Arc::new(move |n| op(&a(n), &b(n)).expect("configs checked at construction")),
            exact: Arc::new(move |n| ea(n) && eb(n)),
            weight: self.weight + other.weight,
            fast: None,
            label: format!("{name}({}, {})", self.label, other.label),
        })
    }

    pub fn union(&self, other: &MeasurableHandle) -> Result<MeasurableHandle> {
        self.combine(other, "union", Element::union)
    }

    pub fn intersect(&self, other: &MeasurableHandle) -> Result<MeasurableHandle> {
        self.combine(other, "intersect", Element::intersect)
    }

    pub fn complement(&self) -> MeasurableHandle {
        let a = self.stream.clone();
        MeasurableHandle {
            config: self.config.clone(),
            stream: Arc::new(move |n| a(n).complement()),
            exact: self.exact.clone(),
            weight: self.weight,
            fast: None,
            label: format!("complement({})", self.label),
        }
    }

    /// Index-wise union of many handles; the weight is the sum.
    pub fn union_all(config: &AlgebraConfig, handles: &[MeasurableHandle]) -> Result<MeasurableHandle> {
        for h in handles {
            config.check_same(&h.config)?;
        }
        let streams: Vec<Stream> = handles.iter().map(|h| h.stream.clone()).collect();
        let exact: Vec<Exactness> = handles.iter().map(|h| h.exact.clone()).collect();
        let cfg = config.clone();
        Ok(MeasurableHandle {
            config: config.clone(),
            stream: Arc::new(move |n| {
                let parts: Vec<Element> = streams.iter().map(|s| s(n)).collect();
                Element::union_all(&cfg, &parts).expect("configs checked at construction")
            }),
            exact: Arc::new(move |n| exact.iter().all(|e| e(n))),
            weight: handles.iter().map(|h| h.weight).sum(),
            fast: None,
            label: format!("union_all({} handles)", handles.len()),
        })
    }
}

/// Enclosure of `μ*(S △ T)` from the approximants at index `depth`.
pub fn handle_distance(s: &MeasurableHandle, t: &MeasurableHandle, depth: u32) -> Result<Enclosure> {
    s.config.check_same(&t.config)?;
    let n = depth as usize;
    let center = s.approximant(n).distance(&t.approximant(n))?;
    Ok(Enclosure::around(center, s.bound(n) + t.bound(n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ThreeValued {
    In,
    Out,
    Unknown,
}

/// `In` when `μ*(S △ T) ≤ tolerance` is certified, `Out` when `> tolerance`
/// is certified.
pub fn handle_ae_equal(
    s: &MeasurableHandle,
    t: &MeasurableHandle,
    tolerance: &Rational,
    depth: u32,
) -> Result<ThreeValued> {
    if !tolerance.is_positive() {
        return Err(Error::Usage(format!("tolerance must be positive, got {tolerance}")));
    }
    let e = handle_distance(s, t, depth)?;
    Ok(if e.hi() <= tolerance {
        ThreeValued::In
    } else if e.lo() > tolerance {
        ThreeValued::Out
    } else {
        ThreeValued::Unknown
    })
}

/// Outcome of a pointwise probe with the number of window approximants that
/// did and did not contain the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub answer: ThreeValued,
    pub inside: usize,
    pub outside: usize,
}

/// Heuristic limsup membership of `q` over the approximants in `window`.
/// Diagnostic only: membership of a single point is not determined by the
/// measure class, and no verifier relies on it.
pub fn member_at_depth(s: &MeasurableHandle, q: &Rational, window: Range<usize>) -> Result<Probe> {
    if q.is_negative() || *q >= Rational::one() {
        return Err(Error::Domain(format!("probe point {q} is outside [0, 1)")));
    }
    if window.is_empty() {
        return Err(Error::Usage("probe window is empty".into()));
    }
    if s.config != AlgebraConfig::IntervalUnit {
        return Ok(Probe { answer: ThreeValued::Unknown, inside: 0, outside: 0 });
    }
    let inside = window
        .clone()
        .filter(|&n| s.approximant(n).as_intervals().is_some_and(|set| set.contains(q)))
        .count();
    let outside = window.len() - inside;
    let answer = match (inside, outside) {
        (_, 0) => ThreeValued::In,
        (0, _) => ThreeValued::Out,
        _ => ThreeValued::Unknown,
    };
    Ok(Probe { answer, inside, outside })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Partial,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates Partial dominates Pass.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Partial, _) | (_, Verdict::Partial) => Verdict::Partial,
            _ => Verdict::Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Partial => "PARTIAL",
        })
    }
}

fn enclosure_pairs<S: Serializer>(map: &BTreeMap<String, Enclosure>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let mut m = serializer.serialize_map(Some(map.len()))?;
    for (k, e) in map {
        m.serialize_entry(k, &[e.lo().to_string(), e.hi().to_string()])?;
    }
    m.end()
}

/// One verifier outcome. Serializes as
/// `{claim, depth, enclosures: {name: ["lo", "hi"]}, verdict, slack}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub claim: String,
    pub depth: u32,
    #[serde(serialize_with = "enclosure_pairs")]
    pub enclosures: BTreeMap<String, Enclosure>,
    pub verdict: Verdict,
    pub slack: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    fn new(claim: &str, depth: u32, slack: Rational) -> Self {
        Report {
            claim: claim.into(),
            depth,
            enclosures: BTreeMap::new(),
            verdict: Verdict::Pass,
            slack,
            note: None,
        }
    }

    fn with(mut self, name: &str, e: Enclosure) -> Self {
        self.enclosures.insert(name.into(), e);
        self
    }

    pub fn enclosure(&self, name: &str) -> Option<&Enclosure> {
        self.enclosures.get(name)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn geometric_slack(depth: u32, extra: i64) -> Rational {
    Rational::pow2(extra - depth as i64)
}

/// `x ∼ y ⇒ F(x) = F(y)` a.e. Inputs certified non-equivalent pass
/// vacuously.
pub fn verify_well_defined(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Report> {
    let slack = geometric_slack(depth, 3);
    let eq = equivalent_within(x, y, depth)?;
    let hd = handle_distance(&apply_F(x), &apply_F(y), depth)?;
    let mut r = Report::new("well-defined", depth, slack.clone())
        .with("equivalence", eq.clone())
        .with("handle_distance", hd.clone());
    if eq.lo().is_positive() {
        r.note = Some("inputs are not equivalent".into());
    } else {
        r.verdict = Verdict::from_bool(*hd.hi() <= eq.hi() + &slack);
    }
    Ok(r)
}

/// `d̄(x, y) = μ*(F(x) △ F(y))`: the two enclosures must intersect.
///
/// The handle side is evaluated one index deeper so that both enclosures
/// have width at most `2^(−depth+2)`.
pub fn verify_isometry(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Report> {
    let d = dist_completion(x, y, depth)?;
    let h = handle_distance(&apply_F(x), &apply_F(y), depth + 1)?;
    let mut r = Report::new("isometry", depth, geometric_slack(depth, 2));
    r.verdict = Verdict::from_bool(d.intersects(&h));
    Ok(r.with("completion_distance", d).with("handle_distance", h))
}

fn hom_report(claim: &str, defect: Enclosure, depth: u32) -> Report {
    let slack = geometric_slack(depth, 3);
    let ok = defect.contains_zero() && *defect.hi() <= slack;
    let mut r = Report::new(claim, depth, slack).with("defect", defect);
    r.verdict = Verdict::from_bool(ok);
    r
}

/// `F(x ∪ y) = F(x) ∪ F(y)` a.e.
pub fn verify_union_hom(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Report> {
    let lhs = apply_F(&union_pt(x, y)?);
    let rhs = apply_F(x).union(&apply_F(y))?;
    Ok(hom_report("union-hom", handle_distance(&lhs, &rhs, depth)?, depth))
}

/// `F(x ∩ y) = F(x) ∩ F(y)` a.e.
pub fn verify_intersect_hom(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Report> {
    let lhs = apply_F(&intersect_pt(x, y)?);
    let rhs = apply_F(x).intersect(&apply_F(y))?;
    Ok(hom_report("intersect-hom", handle_distance(&lhs, &rhs, depth)?, depth))
}

/// `F(xᶜ) = F(x)ᶜ` a.e.
pub fn verify_complement_hom(x: &CauchyPoint, depth: u32) -> Result<Report> {
    let lhs = apply_F(&complement_pt(x));
    let rhs = apply_F(x).complement();
    Ok(hom_report("complement-hom", handle_distance(&lhs, &rhs, depth)?, depth))
}

/// Intersection computed as `(xᶜ ∪ yᶜ)ᶜ` against the direct path: both
/// defects against `F(x) ∩ F(y)` must pass and the two paths must agree.
pub fn verify_de_morgan(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Report> {
    let direct = apply_F(&intersect_pt(x, y)?);
    let via = apply_F(&complement_pt(&union_pt(&complement_pt(x), &complement_pt(y))?));
    let target = apply_F(x).intersect(&apply_F(y))?;
    let d_direct = handle_distance(&direct, &target, depth)?;
    let d_via = handle_distance(&via, &target, depth)?;
    let paths = handle_distance(&direct, &via, depth)?;
    let slack = geometric_slack(depth, 3);
    let ok = [&d_direct, &d_via, &paths].iter().all(|e| e.contains_zero() && *e.hi() <= slack)
        && d_direct.intersects(&d_via);
    let mut r = Report::new("de-morgan", depth, slack)
        .with("direct_defect", d_direct)
        .with("de_morgan_defect", d_via)
        .with("path_distance", paths);
    r.verdict = Verdict::from_bool(ok);
    Ok(r)
}

fn ceil_log2(m: usize) -> u32 {
    m.max(1).next_power_of_two().trailing_zeros()
}

/// `F(∪ E_i) = ∪ F(E_i)` a.e., stage by stage for `L = 1..=max_stage`.
///
/// At stage `L`, `F(E)` is compared with the union of the first `N_L`
/// member handles; the true distance is below `1/(2L)`, and the check
/// allows `1/L + 2^(−depth+2)`. Stages the certificate cannot reach make the
/// verdict PARTIAL, with the achieved precision in the note.
pub fn verify_countable_union_hom(
    family: &Family,
    cert: TailCertificate,
    depth: u32,
    max_stage: usize,
) -> Result<Report> {
    let union = countable_union(family, cert)?;
    let fe = apply_F(union.point());
    let slack = geometric_slack(depth, 2);
    let mut r = Report::new("countable-union-hom", depth, slack.clone());
    let mut worst: Option<(Rational, usize, Enclosure)> = None;
    let mut reached = 0;
    let mut handles: Vec<MeasurableHandle> = Vec::new();
    for stage in 1..=max_stage.max(1) {
        let Some(plan) = union.stage(stage) else { break };
        reached = stage;
        while handles.len() < plan.members {
            handles.push(apply_F(&family.member(handles.len())));
        }
        let members = MeasurableHandle::union_all(family.config(), &handles[..plan.members])?;
        let n = depth + 1;
        let fe_n = fe.approximant(n as usize);
        let m = n + ceil_log2(plan.members);
        let center = fe_n.distance(&members.approximant(m as usize))?;
        let defect = Enclosure::around(center, fe.bound(n as usize) + members.bound(m as usize));
        let allowed = Rational::new(1, stage as i64) + &slack;
        if *defect.hi() > allowed {
            r.verdict = Verdict::Fail;
        }
        // Track the stage with the least headroom.
        let headroom = &allowed - defect.hi();
        if worst.as_ref().is_none_or(|(h, _, _)| headroom < *h) {
            worst = Some((headroom, stage, defect));
        }
    }
    if let Some((_, stage, defect)) = worst {
        r = r.with(&format!("defect_stage_{stage}"), defect);
    }
    let measure = crate::completion::measure_completion(union.point(), depth);
    r = r.with("measure", measure);
    let certification = union.certify(depth);
    if reached < max_stage.max(1) || !certification.is_full() {
        if r.verdict == Verdict::Pass {
            r.verdict = Verdict::Partial;
        }
        let precision = match certification {
            Certification::Partial { precision, .. } => precision,
            Certification::Full if reached > 0 => Rational::new(1, reached as i64),
            Certification::Full => family.config().total_mass(),
        };
        r.note = Some(format!("certified only to precision {precision}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{constant_point, zero_point};
    use crate::families;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> Element {
        Element::from_raw_intervals(&[(q(lo), q(hi))]).unwrap()
    }

    #[test]
    fn verdicts_combine() {
        use Verdict::*;
        assert_eq!(Pass.and(Pass), Pass);
        assert_eq!(Pass.and(Partial), Partial);
        assert_eq!(Partial.and(Fail), Fail);
        assert_eq!(Fail.and(Pass), Fail);
    }

    #[test]
    fn apply_f_on_constants() {
        let a = iv("0", "1/2");
        let h = apply_F(&constant_point(a.clone()));
        for n in [0, 3, 9] {
            assert_eq!(h.approximant(n), a);
            assert_eq!(h.bound(n), q("0"));
        }
        let z = apply_F(&zero_point(&AlgebraConfig::IntervalUnit));
        assert!(z.approximant(4).is_empty());
    }

    #[test]
    fn apply_f_on_fat_cantor() {
        let h = apply_F(&families::fat_cantor());
        for n in 0..6usize {
            assert_eq!(h.approximant(n), Element::from_intervals(families::fat_cantor_stage(n)));
            assert_eq!(h.bound(n), Rational::pow2(1 - n as i64));
            // The limsup is the fat Cantor set itself, of measure 1/2.
            let true_gap = h.approximant(n).measure() - q("1/2");
            assert!(true_gap <= h.bound(n));
        }
    }

    #[test]
    fn handle_distance_examples() {
        let fc = apply_F(&families::fat_cantor());
        assert!(handle_distance(&fc, &fc, 10).unwrap().contains_zero());
        let a = apply_F(&constant_point(iv("0", "1/2")));
        let b = apply_F(&constant_point(iv("1/4", "3/4")));
        assert_eq!(handle_distance(&a, &b, 2).unwrap(), Enclosure::exact(q("1/2")));
        let z = apply_F(&zero_point(&AlgebraConfig::IntervalUnit));
        assert!(handle_distance(&fc, &z, 20).unwrap().contains(&q("1/2")));
    }

    #[test]
    fn ae_equality() {
        let fc = families::fat_cantor();
        let h = apply_F(&fc);
        assert_eq!(handle_ae_equal(&h, &h, &Rational::pow2(-15), 18).unwrap(), ThreeValued::In);
        let a = apply_F(&constant_point(iv("0", "1/2")));
        let b = apply_F(&constant_point(iv("1/2", "1")));
        assert_eq!(handle_ae_equal(&a, &b, &q("1/4"), 8).unwrap(), ThreeValued::Out);
        let s = apply_F(&fc.shift(2));
        let t = apply_F(&fc.reindex("fc∘(i+i%3)", |i| i + i % 3));
        assert_eq!(handle_ae_equal(&s, &t, &Rational::pow2(-6), 12).unwrap(), ThreeValued::In);
        assert!(handle_ae_equal(&s, &t, &q("0"), 12).is_err());
    }

    #[test]
    fn membership_probe() {
        let h = apply_F(&constant_point(iv("0", "1/2")));
        assert_eq!(member_at_depth(&h, &q("1/4"), 0..5).unwrap().answer, ThreeValued::In);
        assert_eq!(member_at_depth(&h, &q("3/4"), 0..5).unwrap().answer, ThreeValued::Out);
        let fc = apply_F(&families::fat_cantor());
        let p = member_at_depth(&fc, &q("1/2"), 1..9).unwrap();
        assert_eq!((p.answer, p.inside, p.outside), (ThreeValued::Out, 0, 8));
        assert_eq!(member_at_depth(&fc, &q("1/2"), 0..3).unwrap().answer, ThreeValued::Unknown);
        assert!(member_at_depth(&fc, &q("1"), 0..3).is_err());
        assert!(member_at_depth(&fc, &q("0"), 3..3).is_err());
    }

    #[test]
    fn well_defined_reports() {
        let fc = families::fat_cantor();
        let r = verify_well_defined(&fc, &fc, 12).unwrap();
        assert!(r.passed());
        assert!(r.enclosure("equivalence").unwrap().contains_zero());
        assert!(r.enclosure("handle_distance").unwrap().contains_zero());

        let r = verify_well_defined(&fc.shift(3), &fc.reindex("fc∘(i+i%2)", |i| i + i % 2), 16).unwrap();
        assert!(r.passed());
        assert!(*r.enclosure("handle_distance").unwrap().hi() <= Rational::pow2(-13));

        let a = constant_point(iv("0", "1/2"));
        let b = constant_point(iv("1/2", "1"));
        let r = verify_well_defined(&a, &b, 8).unwrap();
        assert!(r.passed());
        assert!(r.note.is_some());
    }

    #[test]
    fn isometry_reports() {
        let a = constant_point(iv("0", "1/2"));
        let b = constant_point(iv("1/4", "3/4"));
        let r = verify_isometry(&a, &b, 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.enclosure("completion_distance").unwrap(), &Enclosure::exact(q("1/2")));

        let z = zero_point(&AlgebraConfig::IntervalUnit);
        let r = verify_isometry(&families::fat_cantor(), &z, 16).unwrap();
        assert!(r.passed());
        for e in r.enclosures.values() {
            assert!(e.contains(&q("1/2")));
            assert!(e.width() <= Rational::pow2(-14));
        }
    }

    #[test]
    fn homomorphism_reports() {
        let a = constant_point(iv("0", "1/2"));
        let b = constant_point(iv("1/4", "3/4"));
        let r = verify_union_hom(&a, &b, 5).unwrap();
        assert_eq!(r.enclosure("defect").unwrap(), &Enclosure::exact(q("0")));

        let r = verify_complement_hom(&families::fat_cantor(), 16).unwrap();
        assert!(r.passed());
        assert!(*r.enclosure("defect").unwrap().hi() <= Rational::pow2(-13));

        let (x, y) = (families::fat_cantor(), families::perturb(21));
        assert!(verify_union_hom(&x, &y, 12).unwrap().passed());
        assert!(verify_intersect_hom(&x, &y, 12).unwrap().passed());
        let r = verify_de_morgan(&x, &y, 12).unwrap();
        assert!(r.passed());
        assert_eq!(r.enclosure("path_distance").unwrap().lo(), &q("0"));
        assert!(r.enclosure("direct_defect").unwrap().intersects(r.enclosure("de_morgan_defect").unwrap()));
    }

    #[test]
    fn countable_union_reports() {
        let unit = AlgebraConfig::IntervalUnit;
        let inc = Family::constants(unit.clone(), "prefix", |i| families::prefix_element(i as u64));
        let r = verify_countable_union_hom(&inc, TailCertificate::Increasing, 10, 16).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.enclosure("measure").unwrap().contains(&q("1")));

        let blocks = Family::constants(unit.clone(), "dyadic", |i| families::dyadic_block_element(i as u64 + 1));
        let cert = TailCertificate::summable(|n| Rational::pow2(-(n as i64) - 1));
        let r = verify_countable_union_hom(&blocks, cert, 10, 16).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.enclosure("measure").unwrap().contains(&q("1/2")));

        let capped = verify_countable_union_hom(&inc, TailCertificate::SearchCap(16), 10, 16).unwrap();
        assert_eq!(capped.verdict, Verdict::Partial);
        assert!(capped.note.as_deref().unwrap().contains("precision"));
    }

    #[test]
    fn round_trip_through_source_point() {
        let h = apply_F(&families::perturb(8));
        let back = apply_F(&h.source_point().unwrap());
        for depth in [4, 10] {
            let e = handle_distance(&h, &back, depth).unwrap();
            assert_eq!(e.lo(), &q("0"));
            assert_eq!(h.approximant(depth as usize), back.approximant(depth as usize));
        }
        let u = h.union(&back).unwrap();
        assert!(u.source_point().is_none());
    }

    #[test]
    fn report_json_shape() {
        let a = constant_point(iv("0", "1/2"));
        let r = verify_complement_hom(&a, 4).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"claim":"complement-hom","depth":4,"enclosures":{"defect":["0/1","0/1"]},"verdict":"PASS","slack":"1/2"}"#
        );
    }

    #[test]
    fn mixed_configs() {
        let cfg = AlgebraConfig::finite_weighted(vec![q("1")]).unwrap();
        let a = apply_F(&zero_point(&cfg));
        let b = apply_F(&zero_point(&AlgebraConfig::IntervalUnit));
        assert!(handle_distance(&a, &b, 3).is_err());
        assert!(a.union(&b).is_err());
    }
}

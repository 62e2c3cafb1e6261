//! Seeded verification batteries behind `caratheodory verify`.
//!
//! Each suite draws its trials from independent per-trial random streams,
//! runs them in parallel and reports in trial order, so the JSON output is a
//! pure function of the flags.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::completion::{constant_point, dist_completion, measure_completion, CauchyPoint};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::families;
use crate::generators::{random_cover, random_element, random_point, random_weights, trial_rng, Reindex};
use crate::limit_map::{
    apply_F, handle_distance, verify_complement_hom, verify_countable_union_hom, verify_de_morgan,
    verify_intersect_hom, verify_isometry, verify_union_hom, verify_well_defined, Report, Verdict,
};
use crate::outer_measure::{cover_cost, is_cover, outer_measure_element, Cover};
use crate::rational::Rational;
use crate::set_algebra::{AlgebraConfig, Element};
use crate::sigma_ops::{additivity_defect, countable_union, Family, TailCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Metric,
    Restriction,
    Isometry,
    SigmaHom,
    CountableUnion,
    WellDefined,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Metric,
        Suite::Restriction,
        Suite::Isometry,
        Suite::SigmaHom,
        Suite::CountableUnion,
        Suite::WellDefined,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Restriction => "restriction",
            Suite::Isometry => "isometry",
            Suite::SigmaHom => "sigma-hom",
            Suite::CountableUnion => "countable-union",
            Suite::WellDefined => "well-defined",
            Suite::Oracle => "oracle",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Metric => 10_000,
            Suite::Restriction => 1_000,
            Suite::Isometry | Suite::SigmaHom => 100,
            Suite::WellDefined | Suite::Oracle => 50,
            Suite::CountableUnion => 1,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}'")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: AlgebraConfig,
    pub depth: u32,
    pub tolerance: Rational,
    pub seed: u64,
    pub trials: Option<usize>,
    /// Atom count for the oracle when no finite algebra is given.
    pub atoms: usize,
    /// Covers drawn per element in the restriction suite.
    pub covers: usize,
    /// Runs the countable-union suite with a search-capped certificate.
    pub cap: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: AlgebraConfig::IntervalUnit,
            depth: 16,
            tolerance: Rational::pow2(-10),
            seed: 0,
            trials: None,
            atoms: 8,
            covers: 100,
            cap: None,
        }
    }
}

/// Aggregate outcome of one suite run. `failures` keeps the first few
/// failing reports, in trial order.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub depth: u32,
    pub trials: usize,
    pub checks: u64,
    pub violations: u64,
    pub verdict: Verdict,
    pub summary: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Report>,
}

const KEPT_FAILURES: usize = 10;

impl SuiteReport {
    fn new(suite: Suite, cfg: &RunConfig, trials: usize) -> Self {
        SuiteReport {
            suite: suite.name().into(),
            seed: cfg.seed,
            depth: cfg.depth,
            trials,
            checks: 0,
            violations: 0,
            verdict: Verdict::Pass,
            summary: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn absorb(&mut self, r: Report) {
        self.checks += 1;
        self.verdict = self.verdict.and(r.verdict);
        if r.verdict == Verdict::Fail {
            self.violations += 1;
        }
        if r.verdict != Verdict::Pass && self.failures.len() < KEPT_FAILURES {
            self.failures.push(r);
        }
    }

    fn check(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            self.verdict = Verdict::Fail;
        }
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.insert(key.into(), value.to_string());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    if cfg.depth == 0 {
        return Err(Error::Usage("depth must be positive".into()));
    }
    let trials = cfg.trials.unwrap_or(suite.default_trials());
    match suite {
        Suite::Metric => metric(cfg, trials),
        Suite::Restriction => restriction(cfg, trials),
        Suite::Isometry => isometry(cfg, trials),
        Suite::SigmaHom => sigma_hom(cfg, trials),
        Suite::CountableUnion => countable(cfg, trials),
        Suite::WellDefined => well_defined(cfg, trials),
        Suite::Oracle => oracle(cfg, trials),
    }
}

fn interval_only(suite: Suite, cfg: &RunConfig) -> Result<()> {
    match cfg.algebra {
        AlgebraConfig::IntervalUnit => Ok(()),
        _ => Err(Error::Usage(format!("suite {suite} runs on the interval algebra"))),
    }
}

/// Symmetry, identity of indiscernibles on canonical forms, and the triangle
/// inequality, checked exactly.
fn metric(cfg: &RunConfig, trials: usize) -> Result<SuiteReport> {
    let outcomes: Vec<[bool; 4]> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let [a, b, c] = [0; 3].map(|_| random_element(&mut rng, &cfg.algebra));
            let d = |x: &Element, y: &Element| x.distance(y).expect("same configuration");
            let (ab, ba, bc, ac) = (d(&a, &b), d(&b, &a), d(&b, &c), d(&a, &c));
            [
                ab == ba,
                ab.is_zero() == (a == b),
                ac <= &ab + &bc,
                d(&a, &a).is_zero() && !ab.is_negative(),
            ]
        })
        .collect();
    let mut report = SuiteReport::new(Suite::Metric, cfg, trials);
    let names = ["symmetry", "identity", "triangle", "zero_self"];
    let mut per = [0u64; 4];
    for o in &outcomes {
        for (k, ok) in o.iter().enumerate() {
            report.check(*ok);
            per[k] += u64::from(!ok);
        }
    }
    for (name, v) in names.iter().zip(per) {
        report.note(&format!("{name}_violations"), v);
    }
    Ok(report)
}

/// `μ*|_Ω = μ`: every cover costs at least the measure, and the singleton
/// cover attains it.
fn restriction(cfg: &RunConfig, trials: usize) -> Result<SuiteReport> {
    let covers = cfg.covers.max(1);
    let outcomes: Vec<(u64, u64, u64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let e = random_element(&mut rng, &cfg.algebra);
            let mu = e.measure();
            let mut bad = 0;
            let mut checked = 0;
            for _ in 0..covers {
                let c = random_cover(&mut rng, &e);
                if is_cover(&e, &c).expect("same configuration") {
                    checked += 1;
                    bad += u64::from(cover_cost(&c) < mu);
                }
            }
            let single = Cover::singleton(e.clone());
            bad += u64::from(cover_cost(&single) != mu || outer_measure_element(&e) != mu);
            (checked, bad, covers as u64 - checked)
        })
        .collect();
    let mut report = SuiteReport::new(Suite::Restriction, cfg, trials);
    let (mut checked, mut skipped) = (0, 0);
    for (c, bad, s) in outcomes {
        report.checks += c + 1;
        report.violations += bad;
        checked += c;
        skipped += s;
    }
    if report.violations > 0 {
        report.verdict = Verdict::Fail;
    }
    report.note("covers_checked", checked);
    report.note("non_covers_skipped", skipped);
    Ok(report)
}

fn random_pair(seed: u64, t: u64) -> (CauchyPoint, CauchyPoint) {
    let mut rng = trial_rng(seed, t);
    (random_point(&mut rng), random_point(&mut rng))
}

fn isometry(cfg: &RunConfig, trials: usize) -> Result<SuiteReport> {
    interval_only(Suite::Isometry, cfg)?;
    let reports: Vec<Report> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let (x, y) = random_pair(cfg.seed, t);
            verify_isometry(&x, &y, cfg.depth)
        })
        .collect::<Result<_>>()?;
    let width_limit = Rational::pow2(2 - cfg.depth as i64);
    let mut report = SuiteReport::new(Suite::Isometry, cfg, trials);
    let mut max_gap = Rational::zero();
    let mut max_width = Rational::zero();
    for r in reports {
        let d = r.enclosure("completion_distance").expect("isometry report").clone();
        let h = r.enclosure("handle_distance").expect("isometry report").clone();
        max_gap = max_gap.max(d.gap(&h));
        max_width = max_width.max(d.width()).max(h.width());
        report.check(d.width() <= width_limit && h.width() <= width_limit);
        report.absorb(r);
    }
    report.note("max_interval_gap", max_gap);
    report.note("max_width", max_width);
    Ok(report)
}

fn sigma_hom(cfg: &RunConfig, trials: usize) -> Result<SuiteReport> {
    interval_only(Suite::SigmaHom, cfg)?;
    let depth = cfg.depth;
    let reports: Vec<Vec<Report>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let (x, y) = random_pair(cfg.seed, t);
            Ok(vec![
                verify_union_hom(&x, &y, depth)?,
                verify_intersect_hom(&x, &y, depth)?,
                verify_complement_hom(&x, depth)?,
                verify_complement_hom(&y, depth)?,
                verify_de_morgan(&x, &y, depth)?,
            ])
        })
        .collect::<Result<_>>()?;
    let mut report = SuiteReport::new(Suite::SigmaHom, cfg, trials);
    let mut max_defect = Rational::zero();
    for r in reports.into_iter().flatten() {
        for e in r.enclosures.values() {
            max_defect = max_defect.max(e.hi().clone());
        }
        report.absorb(r);
    }
    report.note("max_defect_hi", max_defect);
    Ok(report)
}

fn well_defined(cfg: &RunConfig, trials: usize) -> Result<SuiteReport> {
    interval_only(Suite::WellDefined, cfg)?;
    let reports: Vec<Report> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let x = random_point(&mut rng);
            let g = Reindex::random(&mut rng);
            let mut h = Reindex::random(&mut rng);
            while h == g {
                h = Reindex::random(&mut rng);
            }
            verify_well_defined(&g.apply(&x), &h.apply(&x), cfg.depth)
        })
        .collect::<Result<_>>()?;
    let mut report = SuiteReport::new(Suite::WellDefined, cfg, trials);
    let mut max_hi = Rational::zero();
    for r in reports {
        max_hi = max_hi.max(r.enclosure("handle_distance").expect("well-defined report").hi().clone());
        report.absorb(r);
    }
    report.note("max_handle_distance_hi", max_hi);
    Ok(report)
}

/// Stage `L` remainder bound and the measure enclosure for the increasing
/// prefix family, the dyadic-block family, and the union homomorphism for
/// both.
fn countable(cfg: &RunConfig, _trials: usize) -> Result<SuiteReport> {
    interval_only(Suite::CountableUnion, cfg)?;
    let depth = cfg.depth;
    let unit = AlgebraConfig::IntervalUnit;
    let prefix = Family::constants(unit.clone(), "prefix(i)", |i| families::prefix_element(i as u64));
    let blocks = Family::constants(unit, "dyadicblocks(i+1)", |i| families::dyadic_block_element(i as u64 + 1));
    let prefix_cert = cfg.cap.map_or(TailCertificate::Increasing, TailCertificate::SearchCap);
    let block_cert = || TailCertificate::summable(|n| Rational::pow2(-(n as i64) - 1));

    let mut report = SuiteReport::new(Suite::CountableUnion, cfg, 2);
    const STAGES: usize = 64;

    let e = countable_union(&prefix, prefix_cert.clone())?;
    let remainders: Vec<Option<Enclosure>> = (1..=STAGES)
        .into_par_iter()
        .map(|stage| e.stage(stage).map(|_| e.remainder(stage, depth)).transpose())
        .collect::<Result<_>>()?;
    let mut worst = Rational::zero();
    for (stage, r) in (1..=STAGES).zip(&remainders) {
        if let Some(r) = r {
            let limit = Rational::new(1, stage as i64);
            report.check(*r.hi() <= limit);
            worst = worst.max(r.hi() * &Rational::from_integer(stage as i64));
        }
    }
    report.note("prefix_worst_remainder_times_stage", worst);
    let m = measure_completion(e.point(), depth);
    report.check(m.contains(&Rational::one()) || !e.certify(depth).is_full());
    report.note("prefix_measure", format!("[{}, {}]", m.lo(), m.hi()));

    let b = countable_union(&blocks, block_cert())?;
    let mb = measure_completion(b.point(), depth);
    report.check(mb.contains(&Rational::new(1, 2)));
    report.note("dyadic_measure", format!("[{}, {}]", mb.lo(), mb.hi()));

    let (r1, r2) = rayon::join(
        || verify_countable_union_hom(&prefix, prefix_cert.clone(), depth, STAGES),
        || verify_countable_union_hom(&blocks, block_cert(), depth, STAGES),
    );
    report.absorb(r1?);
    report.absorb(r2?);
    if let Some(f) = report.failures.iter().find_map(|r| r.note.clone()) {
        report.note("certification", f);
    }
    Ok(report)
}

fn finite_config(cfg: &RunConfig, seed: u64) -> Result<AlgebraConfig> {
    match &cfg.algebra {
        AlgebraConfig::FiniteWeighted(_) => Ok(cfg.algebra.clone()),
        AlgebraConfig::IntervalUnit => {
            if !(1..=12).contains(&cfg.atoms) {
                return Err(Error::Usage(format!("oracle runs on 1..=12 atoms, got {}", cfg.atoms)));
            }
            AlgebraConfig::finite_weighted(random_weights(&mut trial_rng(seed, u64::MAX), cfg.atoms))
        }
    }
}

/// Brute force over a weighted powerset: with constant sequences the
/// completion is the algebra itself and every defect must be exactly zero.
fn oracle(cfg: &RunConfig, trials: usize) -> Result<SuiteReport> {
    let fin = finite_config(cfg, cfg.seed)?;
    let atoms = fin.atom_count().expect("finite configuration");
    if atoms > 12 {
        return Err(Error::Usage(format!("oracle enumerates all pairs; {atoms} atoms is too many")));
    }
    let depth = cfg.depth;
    let size = 1u64 << atoms;
    let elements: Vec<Element> = (0..size).map(|m| Element::from_mask(&fin, m).expect("mask fits")).collect();
    let points: Vec<CauchyPoint> = elements.iter().cloned().map(constant_point).collect();
    let zero = Rational::zero();
    let exact_zero = Enclosure::exact(zero.clone());

    // Per element: F is the identity up to ∼ and μ̄ is exact.
    let singles: Vec<u64> = (0..size as usize)
        .into_par_iter()
        .map(|a| {
            let h = apply_F(&points[a]);
            let mut bad = 0u64;
            bad += u64::from(h.approximant(depth as usize) != elements[a] || !h.bound(depth as usize).is_zero());
            bad += u64::from(measure_completion(&points[a], depth) != Enclosure::exact(elements[a].measure()));
            let r = verify_complement_hom(&points[a], depth).expect("same configuration");
            bad += u64::from(r.enclosure("defect") != Some(&exact_zero));
            bad
        })
        .collect();

    let pairs: Vec<u64> = (0..size as usize)
        .into_par_iter()
        .map(|a| {
            let mut bad = 0u64;
            for b in 0..size as usize {
                let (x, y) = (&points[a], &points[b]);
                let d = elements[a].distance(&elements[b]).expect("same configuration");
                let exact_d = Enclosure::exact(d);
                let dc = dist_completion(x, y, depth).expect("same configuration");
                let hd = handle_distance(&apply_F(x), &apply_F(y), depth).expect("same configuration");
                bad += u64::from(dc != exact_d || hd != exact_d);
                let u = verify_union_hom(x, y, depth).expect("same configuration");
                let i = verify_intersect_hom(x, y, depth).expect("same configuration");
                bad += u64::from(u.enclosure("defect") != Some(&exact_zero));
                bad += u64::from(i.enclosure("defect") != Some(&exact_zero));
                if elements[a].intersect(&elements[b]).expect("same configuration").is_empty() {
                    bad += u64::from(additivity_defect(x, y, depth).expect("same configuration") != exact_zero);
                }
            }
            bad
        })
        .collect();

    // Eventually constant countable unions equal their finite unions exactly.
    let unions: Vec<(u64, Option<Report>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let len = rng.gen_range(1..=10usize);
            let masks: Vec<u64> = (0..len).map(|_| rng.gen_range(0..size)).collect();
            let f2 = fin.clone();
            let ms = masks.clone();
            let family = Family::constants(fin.clone(), format!("eventually-constant #{t}"), move |i| {
                Element::from_mask(&f2, ms.get(i).copied().unwrap_or(0)).expect("mask fits")
            });
            let mass = fin.total_mass();
            let cert = move || {
                let mass = mass.clone();
                TailCertificate::summable(move |n| if n >= len { Rational::zero() } else { mass.clone() })
            };
            let expected = constant_point(
                Element::from_mask(&fin, masks.iter().fold(0, |m, x| m | x)).expect("mask fits"),
            );
            let e = countable_union(&family, cert()).expect("same configuration");
            let mut bad = u64::from(e.exact_members() != Some(len));
            bad += u64::from(dist_completion(e.point(), &expected, depth).expect("same configuration") != exact_zero);
            let r = verify_countable_union_hom(&family, cert(), depth, 8).expect("same configuration");
            let defects_exact = r
                .enclosures
                .iter()
                .filter(|(k, _)| k.starts_with("defect"))
                .all(|(_, e)| *e == exact_zero);
            bad += u64::from(!defects_exact);
            (bad, (r.verdict != Verdict::Pass).then_some(r))
        })
        .collect();

    let mut report = SuiteReport::new(Suite::Oracle, cfg, trials);
    report.checks = 3 * size + 5 * size * size + 3 * trials as u64;
    report.violations = singles.iter().chain(&pairs).sum::<u64>();
    for (bad, r) in unions {
        report.violations += bad;
        if let Some(r) = r {
            report.absorb(r);
        }
    }
    if report.violations > 0 {
        report.verdict = Verdict::Fail;
    }
    report.note("atoms", atoms);
    report.note("pairs", size * size);
    report.note("total_mass", fin.total_mass());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> RunConfig {
        RunConfig { trials: Some(trials), depth: 10, ..RunConfig::default() }
    }

    #[test]
    fn suites_pass_on_small_runs() {
        for suite in Suite::ALL {
            let cfg = RunConfig { atoms: 4, covers: 10, ..small(8) };
            let r = run(suite, &cfg).unwrap();
            assert!(r.passed(), "{suite}: {r:?}");
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = small(20);
        let a = serde_json::to_string(&run(Suite::Metric, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run(Suite::Metric, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        let other = RunConfig { seed: 1, ..cfg };
        let c = serde_json::to_string(&run(Suite::Metric, &other).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn capped_countable_union_is_partial() {
        let cfg = RunConfig { cap: Some(32), ..small(1) };
        let r = run(Suite::CountableUnion, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Partial, "{r:?}");
        assert!(r.summary["certification"].contains("precision"));
    }

    #[test]
    fn suite_names() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}

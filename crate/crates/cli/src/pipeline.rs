//! Runs the requested checks and assembles the report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use qhopf_core::catalog::{build_family, build_hat_family, enumerate_compatible, validate_compat, QlsComodDatum};
use qhopf_core::comodalg::{cross_check_simplicity, extend_by_cp, is_right_simple, verify_comodule_algebra, Certificate};
use qhopf_core::crossed::verify_iso_ahs_h;
use qhopf_core::pointed::{build_ahs, build_bosonization, build_twisted, dassociator_closed_form, delta_js_expanded};
use qhopf_core::quasihopf::{twisted_associator, verify_quasibialgebra, verify_quasihopf};
use qhopf_core::tensoralg::{render, Tensor};
use qhopf_core::{CheckRecord, Error, PointedDatum, Status, VerificationReport};

use crate::config::RunConfig;

pub const SCHEMA: &str = "qhopf-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Hopf,
    Twist,
    Ahs,
    Crossed,
    Comod,
    Simplicity,
    HatFamily,
    ExtendCp,
    Census,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Hopf,
        Check::Twist,
        Check::Ahs,
        Check::Crossed,
        Check::Comod,
        Check::Simplicity,
        Check::HatFamily,
        Check::ExtendCp,
        Check::Census,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Hopf => "hopf",
            Check::Twist => "twist",
            Check::Ahs => "ahs",
            Check::Crossed => "crossed",
            Check::Comod => "comod",
            Check::Simplicity => "simplicity",
            Check::HatFamily => "hatfamily",
            Check::ExtendCp => "extendcp",
            Check::Census => "census",
        }
    }

    /// Checks run when neither the config nor the command line names any.
    pub fn defaults(has_comod: bool) -> Vec<Check> {
        let mut v = vec![Check::Hopf, Check::Twist, Check::Ahs, Check::Crossed];
        if has_comod {
            v.extend([Check::Comod, Check::Simplicity]);
        }
        v
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check `{s}` (known: {})", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: Check,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
    pub records: Vec<CheckRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub datum: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comod: Option<String>,
    pub status: Status,
    pub checks: Vec<CheckOutcome>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

type Outcome = qhopf_core::Result<VerificationReport>;

fn need_comod(cfg: &RunConfig) -> qhopf_core::Result<&QlsComodDatum> {
    cfg.comod.as_ref().ok_or_else(|| Error::Precondition("this check needs a [comod] section".into()))
}

fn compare(r: &mut VerificationReport, name: &str, lhs: &Tensor, rhs: &Tensor, show: impl Fn(&Tensor) -> String) {
    if lhs == rhs {
        r.push(CheckRecord::pass(name));
    } else {
        r.push(CheckRecord::fail(name, "").with_sides(show(lhs), show(rhs)));
    }
}

fn hopf(dat: &PointedDatum) -> Outcome {
    let h = build_bosonization(dat);
    let mut r = VerificationReport::new();
    let want = (dat.n() as usize) * dat.pbw_count();
    r.expect("dim", h.alg().dim() == want, || format!("dim H = {} ≠ {want}", h.alg().dim()));
    r.absorb("", verify_quasibialgebra(&h.hopf.base));
    r.absorb("", verify_quasihopf(&h.hopf));
    Ok(r)
}

fn twist(dat: &PointedDatum) -> Outcome {
    let h = build_bosonization(dat);
    let tp = build_twisted(&h, dat.s())?;
    let mut r = VerificationReport::new();
    let (phi, _) = twisted_associator(&h.hopf.base, &tp.twist);
    let idem: Vec<Tensor> = (0..dat.m() as i64).map(|j| h.idem_sigma(j)).collect();
    let closed = dassociator_closed_form(dat, dat.m() - dat.s(), &idem);
    let algs = tp.hj.base.algs(3);
    compare(&mut r, "phi_closed_form", &phi, &closed, |t| render(&algs, t));
    r.absorb("twisted", verify_quasibialgebra(&tp.hj.base));
    r.absorb("twisted", verify_quasihopf(&tp.hj));
    Ok(r)
}

fn ahs(dat: &PointedDatum) -> Outcome {
    let h = build_bosonization(dat);
    let tp = build_twisted(&h, dat.s())?;
    let a = build_ahs(&h, &tp)?;
    let mut r = VerificationReport::new();
    let want = dat.m() as usize * dat.pbw_count();
    r.expect("dim", a.alg().dim() == want, || format!("dim A(H,s) = {} ≠ {want}", a.alg().dim()));
    let algs = tp.hj.base.algs(2);
    for i in 0..dat.theta() {
        let computed = tp.hj.base.delta(&h.x(i));
        let formula = delta_js_expanded(&h, dat.s(), i);
        compare(&mut r, &format!("delta_x{}", i + 1), &computed, &formula, |t| render(&algs, t));
    }
    let findings: Vec<String> = a
        .closure
        .checks
        .iter()
        .map(|c| format!("{}: {}", c.name, if c.passed() { "holds".into() } else { c.witness.clone().unwrap_or_default() }))
        .collect();
    match &a.hopf {
        Some(q) => {
            r.push(CheckRecord::pass("normalized_antipode").with_detail(findings.join("; ")));
            r.absorb("quasi_hopf", verify_quasibialgebra(&q.base));
            r.absorb("quasi_hopf", verify_quasihopf(q));
        }
        None => {
            r.push(CheckRecord::fail("normalized_antipode", findings.join("; ")));
            r.absorb("quasi_bialgebra", verify_quasibialgebra(&a.quasi));
        }
    }
    Ok(r)
}

fn crossed(dat: &PointedDatum) -> Outcome {
    let iso = verify_iso_ahs_h(dat)?;
    Ok(iso.report)
}

fn comod(cfg: &RunConfig) -> Outcome {
    let d = need_comod(cfg)?;
    let mut r = VerificationReport::new();
    let violations = validate_compat(d);
    if !violations.is_empty() {
        for v in violations {
            r.push(CheckRecord::fail("compatibility", v));
        }
        return Ok(r);
    }
    r.push(CheckRecord::pass("compatibility"));
    let h = build_bosonization(&cfg.datum);
    let k = build_family(d, &h)?;
    r.expect("dim", k.dim() == d.dim(), || format!("dim K = {} ≠ {}", k.dim(), d.dim()));
    r.absorb("axioms", verify_comodule_algebra(&k));
    Ok(r)
}

fn certificate(c: &Certificate) -> String {
    match c {
        Certificate::RankOne { word, dim_e } => format!("rank-one operator {word}, dim E = {dim_e}"),
        Certificate::Closure { dim_e } => format!("closure, dim E = {dim_e}"),
        Certificate::InvariantSubspace { basis } => format!("invariant subspace of dimension {}", basis.len()),
    }
}

fn simplicity(cfg: &RunConfig) -> Outcome {
    let d = need_comod(cfg)?;
    let h = build_bosonization(&cfg.datum);
    let k = build_family(d, &h)?;
    let mut r = VerificationReport::new();
    let s = is_right_simple(&k);
    let rec = if s.simple { CheckRecord::pass("right_simple") } else { CheckRecord::fail("right_simple", certificate(&s.certificate)) };
    r.push(rec.with_detail(certificate(&s.certificate)));
    r.absorb("coherence", cross_check_simplicity(&k, &h.degrees())?);
    Ok(r)
}

fn hat_family(cfg: &RunConfig) -> Outcome {
    let d = need_comod(cfg)?;
    let h = build_bosonization(&cfg.datum);
    let tp = build_twisted(&h, cfg.datum.s())?;
    let a = build_ahs(&h, &tp)?;
    let hat = build_hat_family(d, &h, &tp, &a)?;
    let mut r = VerificationReport::new();
    r.absorb("axioms", verify_comodule_algebra(&hat));
    let s = is_right_simple(&hat);
    r.expect("right_simple", s.simple, || certificate(&s.certificate));
    Ok(r)
}

/// Extends the family with trivial group part: the `[comod]` datum when it
/// has `f_order = 1`, otherwise the graded family on every generator.
fn extend_cp(cfg: &RunConfig) -> Outcome {
    let d = match &cfg.comod {
        Some(d) if d.f_order == 1 => d.clone(),
        _ => QlsComodDatum::zero(cfg.datum.clone(), 1, (0..cfg.datum.theta()).collect()),
    };
    let h = build_bosonization(&cfg.datum);
    let k = build_family(&d, &h)?;
    let e = extend_by_cp(&k, &h, &d.weighted_degrees())?;
    let mut r = VerificationReport::new();
    let want = cfg.datum.m() as usize * k.dim();
    r.expect("dim", e.dim() == want, || format!("dim = {} ≠ {want}", e.dim()));
    r.absorb("axioms", verify_comodule_algebra(&e));
    let s = is_right_simple(&e);
    r.expect("right_simple", s.simple, || certificate(&s.certificate));
    Ok(r)
}

fn census(cfg: &RunConfig) -> Outcome {
    let h = build_bosonization(&cfg.datum);
    let entries = enumerate_compatible(&cfg.datum, cfg.census_max_nonzero);
    let mut r = VerificationReport::new();
    r.push(CheckRecord::pass("count").with_detail(format!("{} entries; nonzero ξ, α normalized to 1", entries.len())));
    for (k, d) in entries.iter().enumerate() {
        let name = format!("entry{k}");
        let rec = match build_family(d, &h) {
            Err(e) => CheckRecord::error(&name, e.to_string()),
            Ok(fam) => {
                let ax = verify_comodule_algebra(&fam);
                let simple = is_right_simple(&fam).simple;
                let first = ax.failures().next().map(|f| format!("{}: {}", f.name, f.witness.clone().unwrap_or_default()));
                match first {
                    Some(w) => CheckRecord::fail(&name, w),
                    None if !simple => CheckRecord::fail(&name, "not right simple"),
                    None => CheckRecord::pass(&name),
                }
            }
        };
        r.push(rec.with_detail(d.to_string()));
    }
    Ok(r)
}

fn run_one(cfg: &RunConfig, c: Check) -> Outcome {
    match c {
        Check::Hopf => hopf(&cfg.datum),
        Check::Twist => twist(&cfg.datum),
        Check::Ahs => ahs(&cfg.datum),
        Check::Crossed => crossed(&cfg.datum),
        Check::Comod => comod(cfg),
        Check::Simplicity => simplicity(cfg),
        Check::HatFamily => hat_family(cfg),
        Check::ExtendCp => extend_cp(cfg),
        Check::Census => census(cfg),
    }
}

/// Runs `checks` (canonical order, duplicates removed). Timings are
/// recorded only when asked for, so that default reports are reproducible
/// byte for byte.
pub fn run_pipeline(cfg: &RunConfig, checks: &[Check], timings: bool) -> RunReport {
    let mut checks = checks.to_vec();
    checks.sort();
    checks.dedup();
    let outcomes: Vec<CheckOutcome> = checks
        .into_iter()
        .map(|c| {
            let t = Instant::now();
            let (status, records) = match run_one(cfg, c) {
                Ok(r) => (if r.all_passed() { Status::Pass } else { Status::Fail }, r.checks),
                Err(e) => (Status::Error, vec![CheckRecord::error(c.name(), e.to_string())]),
            };
            let elapsed_ms = timings.then(|| t.elapsed().as_millis() as u64);
            CheckOutcome { name: c, status, elapsed_ms, records }
        })
        .collect();
    let status = if outcomes.iter().all(|o| o.status == Status::Pass) { Status::Pass } else { Status::Fail };
    RunReport {
        schema: SCHEMA.to_string(),
        datum: cfg.datum.to_string(),
        comod: cfg.comod.as_ref().map(|d| d.to_string()),
        status,
        checks: outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn running_datum_core_checks_pass() {
        let cfg = parse_config("[datum]\nm = 2\nd = 1\nb = 1\ns = 1\n").unwrap();
        let rep = run_pipeline(&cfg, &Check::defaults(false), false);
        for c in &rep.checks {
            assert_eq!(c.status, Status::Pass, "{}: {:?}", c.name, c.records.iter().find(|r| !r.passed()));
        }
        assert!(rep.passed());
    }

    #[test]
    fn census_without_generators_lists_divisors() {
        let cfg = parse_config("[datum]\nm = 2\ns = 1\n").unwrap();
        let rep = run_pipeline(&cfg, &[Check::Census], false);
        assert!(rep.passed());
        assert_eq!(rep.checks[0].records.len(), 1 + 3);
    }

    #[test]
    fn corrupted_alpha_is_reported() {
        let text = "[datum]\nm = 2\nd = 1, 3\nb = 1, 1\ns = 1\n[comod]\nf_order = 1\nalpha = 0, 1; 0, 0\n";
        let cfg = parse_config(text).unwrap();
        let rep = run_pipeline(&cfg, &[Check::Comod], false);
        assert_eq!(rep.checks[0].status, Status::Fail);
        let w = rep.checks[0].records[0].witness.clone().unwrap();
        assert!(w.contains("parameters2"), "{w}");
    }

    #[test]
    fn missing_comod_is_an_error_not_a_panic() {
        let cfg = parse_config("[datum]\nm = 2\nd = 1\nb = 1\ns = 1\n").unwrap();
        let rep = run_pipeline(&cfg, &[Check::Simplicity], false);
        assert_eq!(rep.checks[0].status, Status::Error);
        assert!(!rep.passed());
    }

    #[test]
    fn order_is_canonical() {
        let cfg = parse_config("[datum]\nm = 2\ns = 1\n").unwrap();
        let rep = run_pipeline(&cfg, &[Check::Census, Check::Hopf, Check::Census], false);
        let names: Vec<Check> = rep.checks.iter().map(|c| c.name).collect();
        assert_eq!(names, vec![Check::Hopf, Check::Census]);
    }
}

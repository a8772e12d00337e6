//! Check execution and reporting: each fixture kind maps to a pipeline of
//! named checks, producing a deterministic report with per-check status,
//! numeric tables, and witnesses. Table text is a formatting layer over the
//! same data the JSON rendering shows.

use crate::error::Error;
use crate::fixture::{
    resolve_graph, BundleFixture, ComponentSetFixture, FixtureFile, FixturePayload,
    GkmGraphFixture, SectionFixture, SeriesFixture, ZeroschemeFixture,
};
use crate::gkm::{
    chern_character_check, formality_series, gkm_cohomology_dim, gkm_ktheory_check,
    localize_bundle_k,
};
use crate::weyl::{invariant_dim, molien_dims, FiniteActionGroup};
use crate::zeroscheme::{poincare_series_report, reduced_ring_dims, ZeroSchemeModel};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    Refused,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub fixture: String,
    pub kind: String,
    pub checks: Vec<CheckResult>,
    pub tables: Vec<NumericTable>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub long_running: bool,
    pub degree_bound: Option<i64>,
    pub check_filter: Option<String>,
}

impl RunOptions {
    fn cap(&self, d: i64) -> i64 {
        self.degree_bound.map_or(d, |b| b.min(d))
    }

    fn enabled(&self, name: &str) -> bool {
        self.check_filter.as_deref().is_none_or(|f| f == name)
    }
}

impl Report {
    fn new(fixture: &FixtureFile) -> Report {
        Report {
            fixture: fixture.name.clone(),
            kind: fixture.payload.kind_name().to_string(),
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) {
        let name = name.into();
        debug_assert!(
            self.checks.iter().all(|c| c.name != name),
            "duplicate check name {name}"
        );
        self.checks.push(CheckResult { name, status, detail: detail.into() });
    }

    /// Runs `body` as the named check unless filtered out; maps `Ok(None)`
    /// to pass, `Ok(Some(msg))` to failure, refusals to refused status, and
    /// other errors to failure.
    fn check<F>(&mut self, opts: &RunOptions, name: &str, body: F)
    where
        F: FnOnce(&mut Report) -> crate::error::Result<Option<String>>,
    {
        if !opts.enabled(name) {
            self.push(name, CheckStatus::Skipped, "filtered out by --check");
            return;
        }
        match body(self) {
            Ok(None) => self.push(name, CheckStatus::Pass, ""),
            Ok(Some(msg)) => self.push(name, CheckStatus::Fail, msg),
            Err(Error::Refused(msg)) => self.push(name, CheckStatus::Refused, msg),
            Err(e) => self.push(name, CheckStatus::Fail, e.to_string()),
        }
    }

    fn skip_all(&mut self, names: &[&str], why: &str) {
        for name in names {
            self.push(*name, CheckStatus::Skipped, why);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fixture: {} ({})", self.fixture, self.kind);
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
                CheckStatus::Refused => "REFUSED",
            };
            if c.detail.is_empty() {
                let _ = writeln!(out, "  [{tag}] {}", c.name);
            } else {
                let _ = writeln!(out, "  [{tag}] {} — {}", c.name, c.detail);
            }
        }
        for t in &self.tables {
            let _ = writeln!(out, "  {}:", t.title);
            let widths: Vec<usize> = t
                .columns
                .iter()
                .enumerate()
                .map(|(j, h)| {
                    t.rows
                        .iter()
                        .map(|r| r.get(j).map_or(0, String::len))
                        .chain([h.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let fmt_row = |cells: &[String]| -> String {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "    {}", fmt_row(&t.columns));
            for r in &t.rows {
                let _ = writeln!(out, "    {}", fmt_row(r));
            }
        }
        out
    }
}

/// Dispatch a fixture to the pipeline for its kind.
pub fn run_fixture(fixture: &FixtureFile, opts: &RunOptions) -> Report {
    match &fixture.payload {
        FixturePayload::Zeroscheme(z) => run_zeroscheme(fixture, z, opts),
        FixturePayload::GkmGraph(g) => run_gkm_graph(fixture, g, opts),
        FixturePayload::BundleData(b) => run_bundles(fixture, b, opts),
        FixturePayload::Section(s) => run_section(fixture, s, opts),
        FixturePayload::ComponentSet(c) => run_component_set(fixture, c, opts),
        FixturePayload::Series(s) => run_series(fixture, s, opts),
    }
}

fn run_zeroscheme(fixture: &FixtureFile, z: &ZeroschemeFixture, opts: &RunOptions) -> Report {
    let mut report = Report::new(fixture);
    let checks = &z.checks;
    let mut declared: Vec<&str> = vec!["build"];
    if checks.global_dims.is_some() {
        declared.push("global-dims");
    }
    if checks.closed_form.is_some() {
        declared.push("closed-form");
    }
    if checks.h1_zero_through.is_some() {
        declared.push("h1-vanishing");
    }
    if checks.h2_total.is_some() {
        declared.push("h2-total");
    }
    if z.long_running && !opts.long_running {
        report.skip_all(&declared, "long-running fixture; enable with --long-running");
        return report;
    }
    let model: ZeroSchemeModel = match z.build() {
        Ok(m) => m,
        Err(e) => {
            report.push("build", CheckStatus::Fail, e.to_string());
            report.skip_all(&declared[1..], "model unavailable");
            return report;
        }
    };
    report.push(
        "build",
        CheckStatus::Pass,
        format!("{} charts retained, {} dropped", model.num_charts(), model.dropped.len()),
    );

    if let Some(expected) = &checks.global_dims {
        let hi = opts.cap(expected.len() as i64 - 1);
        report.check(opts, "global-dims", |rep| {
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            for d in 0..=hi {
                let got = model.global_sections_dim(d)?;
                let want = expected[d as usize];
                rows.push(vec![d.to_string(), got.to_string(), want.to_string()]);
                if got != want {
                    bad.push(d);
                }
            }
            rep.tables.push(NumericTable {
                title: "graded section dimensions".into(),
                columns: vec!["degree".into(), "computed".into(), "declared".into()],
                rows,
            });
            Ok((!bad.is_empty()).then(|| format!("mismatch at degrees {bad:?}")))
        });
    }

    if let Some(expected) = &checks.closed_form {
        report.check(opts, "closed-form", |_| {
            let bound = opts.cap(z.truncation);
            let summary = poincare_series_report(&model, bound)?;
            match summary.closed_form {
                Some(form) if &form == expected => Ok(None),
                Some(form) => Ok(Some(format!("computed {form}, declared {expected}"))),
                None => Ok(Some(format!(
                    "no closed form detected from {} coefficients",
                    summary.dims.len()
                ))),
            }
        });
    }

    let cech_levels = if checks.h2_total.is_some() { 3 } else { 2 };
    let need_cech = checks.h1_zero_through.is_some() || checks.h2_total.is_some();
    let complex = if need_cech {
        match model.cech(cech_levels.min(model.num_charts() - 1), z.truncation as u32) {
            Ok(c) => Some(c),
            Err(e) => {
                let msg = format!("cover complex unavailable: {e}");
                if checks.h1_zero_through.is_some() {
                    report.push("h1-vanishing", CheckStatus::Fail, msg.clone());
                }
                if checks.h2_total.is_some() {
                    report.push("h2-total", CheckStatus::Fail, msg);
                }
                None
            }
        }
    } else {
        None
    };
    if let Some(complex) = &complex {
        if let Some(through) = checks.h1_zero_through {
            report.check(opts, "h1-vanishing", |_| {
                let mut bad = Vec::new();
                for d in 0..=opts.cap(through) {
                    if complex.cohomology_dim(1, d)? != 0 {
                        bad.push(d);
                    }
                }
                Ok((!bad.is_empty()).then(|| format!("nonzero at degrees {bad:?}")))
            });
        }
        if let Some(total) = checks.h2_total {
            let through = checks.h2_through.unwrap_or(z.truncation);
            report.check(opts, "h2-total", |rep| {
                let mut rows = Vec::new();
                let mut sum = 0usize;
                for d in 0..=opts.cap(through) {
                    let h2 = complex.cohomology_dim(2, d)?;
                    sum += h2;
                    rows.push(vec![d.to_string(), h2.to_string()]);
                }
                rep.tables.push(NumericTable {
                    title: "second cohomology per degree".into(),
                    columns: vec!["degree".into(), "dimension".into()],
                    rows,
                });
                Ok((sum != total).then(|| format!("total {sum}, declared {total}")))
            });
        }
    }
    report
}

fn run_gkm_graph(fixture: &FixtureFile, g: &GkmGraphFixture, opts: &RunOptions) -> Report {
    let mut report = Report::new(fixture);
    let graph = match g.to_graph() {
        Ok(graph) => graph,
        Err(e) => {
            report.push("build", CheckStatus::Fail, e.to_string());
            report.skip_all(&["dims-match-formality"], "graph unavailable");
            return report;
        }
    };
    report.push(
        "build",
        CheckStatus::Pass,
        format!(
            "{} vertices, {} edges, connected: {}",
            graph.vertices.len(),
            graph.edges.len(),
            graph.is_connected()
        ),
    );
    let through = opts.cap(g.check_to_degree.unwrap_or(16));
    match &g.betti {
        Some(betti) => report.check(opts, "dims-match-formality", |rep| {
            let series = formality_series(betti, graph.rank)?;
            let expected = series.expand_integers(through as usize)?;
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            for d in 0..=through {
                let got = gkm_cohomology_dim(&graph, d)?;
                let want = expected[d as usize];
                rows.push(vec![d.to_string(), got.to_string(), want.to_string()]);
                if got as i64 != want {
                    bad.push(d);
                }
            }
            rep.tables.push(NumericTable {
                title: "graph cohomology vs formality series".into(),
                columns: vec!["degree".into(), "graph".into(), "series".into()],
                rows,
            });
            Ok((!bad.is_empty()).then(|| format!("mismatch at degrees {bad:?}")))
        }),
        None => report.check(opts, "dims-match-formality", |rep| {
            let mut rows = Vec::new();
            for d in 0..=through {
                let got = gkm_cohomology_dim(&graph, d)?;
                rows.push(vec![d.to_string(), got.to_string()]);
            }
            rep.tables.push(NumericTable {
                title: "graph cohomology dimensions".into(),
                columns: vec!["degree".into(), "dimension".into()],
                rows,
            });
            Err(Error::refused("no Betti numbers declared; dimensions reported only"))
        }),
    }
    report
}

fn run_bundles(fixture: &FixtureFile, b: &BundleFixture, opts: &RunOptions) -> Report {
    let mut report = Report::new(fixture);
    let graph = match resolve_graph(&b.graph) {
        Ok(g) => g,
        Err(e) => {
            report.push("resolve-graph", CheckStatus::Fail, e.to_string());
            return report;
        }
    };
    report.push(
        "resolve-graph",
        CheckStatus::Pass,
        format!("graph {} with {} edges", b.graph, graph.edges.len()),
    );
    let mut rows = Vec::new();
    for spec in &b.bundles {
        let name = format!("k-consistency:{}", spec.name);
        report.check(opts, &name, |_| {
            let data = spec.to_data(&graph)?;
            let class = localize_bundle_k(&data);
            let (_, violated) = gkm_ktheory_check(&class, &graph)?;
            rows.push(vec![
                spec.name.clone(),
                data.bundle_rank().to_string(),
                format!("{violated:?}"),
                format!("{:?}", spec.expect_violations),
            ]);
            Ok((violated != spec.expect_violations).then(|| {
                format!("violated edges {violated:?}, declared {:?}", spec.expect_violations)
            }))
        });
        if spec.expect_violations.is_empty() {
            let name = format!("chern-character:{}", spec.name);
            report.check(opts, &name, |_| {
                let data = spec.to_data(&graph)?;
                Ok((!chern_character_check(&data, 4)?)
                    .then(|| "exponential route disagrees with Newton route".to_string()))
            });
        }
    }
    report.tables.push(NumericTable {
        title: "edge congruence results".into(),
        columns: vec!["bundle".into(), "rank".into(), "violated".into(), "declared".into()],
        rows,
    });
    report
}

fn run_section(fixture: &FixtureFile, s: &SectionFixture, opts: &RunOptions) -> Report {
    let mut report = Report::new(fixture);
    let section = match s.section.build() {
        Ok(sec) => sec,
        Err(e) => {
            report.push("build", CheckStatus::Fail, e.to_string());
            return report;
        }
    };
    report.push(
        "build",
        CheckStatus::Pass,
        format!(
            "{} parameters on {n}x{n} matrices",
            section.params.len(),
            n = section.base.n
        ),
    );
    if let Some(expected) = &s.checks.parameter_weights {
        report.check(opts, "parameter-weights", |_| {
            let got = section.parameter_weights();
            Ok((&got != expected).then(|| format!("computed {got:?}, declared {expected:?}")))
        });
    }
    if let Some(expected) = s.checks.centralizer_dimension {
        report.check(opts, "centralizer-dimension", |_| {
            let got = crate::lie::centralizer_dimension(&section.base)?;
            Ok((got != expected).then(|| format!("computed {got}, declared {expected}")))
        });
    }
    if s.checks.constant_jacobian == Some(true) {
        report.check(opts, "constant-jacobian", |_| {
            let jac = crate::lie::char_poly_jacobian_det(&section)?;
            if jac.is_zero() {
                Ok(Some("jacobian determinant vanishes".to_string()))
            } else if !jac.is_constant() {
                Ok(Some(format!("jacobian determinant {jac} is not constant")))
            } else {
                Ok(None)
            }
        });
    }
    if let Some(through) = s.checks.invariants_match_through {
        report.check(opts, "invariants-match-molien", |rep| {
            let n = section.params.len();
            let group = FiniteActionGroup::symmetric_group(n);
            let through = opts.cap(through as i64).max(0) as usize;
            let molien = molien_dims(&group, through)?;
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            for (d, &want) in molien.iter().enumerate() {
                let got = invariant_dim(&group, d as u32)?;
                rows.push(vec![d.to_string(), got.to_string(), want.to_string()]);
                if got != want {
                    bad.push(d);
                }
            }
            rep.tables.push(NumericTable {
                title: "invariant dimensions vs trace series".into(),
                columns: vec!["degree".into(), "fixed space".into(), "series".into()],
                rows,
            });
            Ok((!bad.is_empty()).then(|| format!("mismatch at degrees {bad:?}")))
        });
    }
    report
}

fn run_component_set(fixture: &FixtureFile, c: &ComponentSetFixture, opts: &RunOptions) -> Report {
    let mut report = Report::new(fixture);
    let model = match crate::fixture::bundled_by_name(&c.zeroscheme).map(|f| f.payload) {
        Ok(FixturePayload::Zeroscheme(z)) => match z.build() {
            Ok(m) => m,
            Err(e) => {
                report.push("resolve-model", CheckStatus::Fail, e.to_string());
                return report;
            }
        },
        Ok(other) => {
            report.push(
                "resolve-model",
                CheckStatus::Fail,
                format!("fixture {} has kind {}, expected zeroscheme", c.zeroscheme, other.kind_name()),
            );
            return report;
        }
        Err(e) => {
            report.push("resolve-model", CheckStatus::Fail, e.to_string());
            return report;
        }
    };
    report.push("resolve-model", CheckStatus::Pass, format!("model {}", c.zeroscheme));
    let set = match c.to_curve_set() {
        Ok(s) => s,
        Err(e) => {
            report.push("components-lie-on-model", CheckStatus::Fail, e.to_string());
            report.skip_all(&["reduced-tuple-comparison"], "component set unavailable");
            return report;
        }
    };
    report.check(opts, "components-lie-on-model", |_| {
        set.validate_against(&model)?;
        Ok(None)
    });
    report.check(opts, "reduced-tuple-comparison", |rep| {
        let mut rows = Vec::new();
        let mut wrong = Vec::new();
        for d in 0..=opts.cap(c.compare_through) {
            let tuples = reduced_ring_dims(&set, d)?;
            let global = model.global_sections_dim(d)?;
            let differs = tuples != global;
            rows.push(vec![
                d.to_string(),
                tuples.to_string(),
                global.to_string(),
                if differs { "yes".into() } else { "".into() },
            ]);
            if differs != c.expect_differ_at.contains(&d) {
                wrong.push(d);
            }
        }
        rep.tables.push(NumericTable {
            title: "reduced tuple dims vs model sections".into(),
            columns: vec!["degree".into(), "tuples".into(), "model".into(), "differs".into()],
            rows,
        });
        Ok((!wrong.is_empty()).then(|| {
            format!("divergence pattern wrong at degrees {wrong:?} (declared {:?})", c.expect_differ_at)
        }))
    });
    report
}

fn run_series(fixture: &FixtureFile, s: &SeriesFixture, opts: &RunOptions) -> Report {
    let mut report = Report::new(fixture);
    let hi = opts.cap(s.expand_to as i64).max(0) as usize;
    let mut expansions: Vec<Option<Vec<i64>>> = Vec::new();
    for entry in &s.entries {
        let name = format!("expansion:{}", entry.name);
        let mut got: Option<Vec<i64>> = None;
        report.check(opts, &name, |_| {
            let coeffs = entry.to_series()?.expand_integers(hi)?;
            got = Some(coeffs.clone());
            match &entry.expected {
                Some(want) if want.len() != hi + 1 => Ok(Some(format!(
                    "declared {} coefficients, expansion has {}",
                    want.len(),
                    hi + 1
                ))),
                Some(want) => Ok((&coeffs != want)
                    .then(|| format!("computed {coeffs:?}, declared {want:?}"))),
                None => Ok(None),
            }
        });
        expansions.push(got);
    }
    let mut columns = vec!["degree".to_string()];
    columns.extend(s.entries.iter().map(|e| e.name.clone()));
    let compare = s.compare.filter(|&[a, b]| {
        a < expansions.len()
            && b < expansions.len()
            && expansions[a].is_some()
            && expansions[b].is_some()
    });
    if compare.is_some() {
        columns.push("difference".into());
    }
    let mut rows = Vec::new();
    for d in 0..=hi {
        let mut row = vec![d.to_string()];
        for exp in &expansions {
            row.push(exp.as_ref().map_or_else(String::new, |c| c[d].to_string()));
        }
        if let Some([a, b]) = compare {
            let ca = expansions[a].as_ref().expect("checked above")[d];
            let cb = expansions[b].as_ref().expect("checked above")[d];
            row.push((ca - cb).to_string());
        }
        rows.push(row);
    }
    report.tables.push(NumericTable {
        title: "series expansions side by side".into(),
        columns,
        rows,
    });
    report
}

//! JSON fixture files: schemas for every input kind the command line
//! accepts (zero-scheme setups, moment graphs, bundle weight data, section
//! constructions, component gluings, series displays), builders turning
//! them into domain objects, and the bundled catalog.

use crate::charts::{ChartedAction, ChartedSpace};
use crate::error::{Error, Result};
use crate::gkm::{EquivariantBundleData, MomentGraph};
use crate::lie::{kostant_section, MatrixElt, OneParamSubgroup, SectionFamily, SectionKind};
use crate::poly::{MultiPoly, PolyRing, Rat};
use crate::series::RationalSeries;
use crate::zeroscheme::{
    build_zero_scheme, ComponentCurve, ComponentCurveSet, ComponentIncidence, ZeroSchemeModel,
};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

pub const DEFAULT_TRUNCATION: i64 = 20;

fn default_truncation() -> i64 {
    DEFAULT_TRUNCATION
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FixtureFile {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(flatten)]
    pub payload: FixturePayload,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FixturePayload {
    Zeroscheme(ZeroschemeFixture),
    GkmGraph(GkmGraphFixture),
    BundleData(BundleFixture),
    Section(SectionFixture),
    ComponentSet(ComponentSetFixture),
    Series(SeriesFixture),
}

impl FixturePayload {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FixturePayload::Zeroscheme(_) => "zeroscheme",
            FixturePayload::GkmGraph(_) => "gkm-graph",
            FixturePayload::BundleData(_) => "bundle-data",
            FixturePayload::Section(_) => "section",
            FixturePayload::ComponentSet(_) => "component-set",
            FixturePayload::Series(_) => "series",
        }
    }
}

// ---------------------------------------------------------------------------
// Section and space specifications (shared by several fixture kinds).

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SectionSpec {
    /// Explicit nilpotent base plus commuting direction matrices.
    Solvable {
        base: Vec<Vec<String>>,
        #[serde(default)]
        torus_basis: Vec<Vec<Vec<String>>>,
        #[serde(default)]
        params: Vec<String>,
        subgroup: Vec<i64>,
    },
    /// The principal section of gl_n.
    ReductiveGl { n: usize },
}

impl SectionSpec {
    pub fn build(&self) -> Result<SectionFamily> {
        match self {
            SectionSpec::Solvable { base, torus_basis, params, subgroup } => {
                let ring = PolyRing::new(Vec::<String>::new());
                let e = MatrixElt::parse(&ring, base)?;
                let dirs = torus_basis
                    .iter()
                    .map(|m| MatrixElt::parse(&ring, m))
                    .collect::<Result<Vec<_>>>()?;
                kostant_section(SectionKind::Solvable {
                    e,
                    torus_basis: dirs,
                    params: params.clone(),
                    subgroup: OneParamSubgroup { exponents: subgroup.clone() },
                })
            }
            SectionSpec::ReductiveGl { n } => kostant_section(SectionKind::ReductiveGl { n: *n }),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SpaceSpec {
    Projective {
        n: usize,
        #[serde(default)]
        chart_names: Option<Vec<Vec<String>>>,
    },
    Product { factors: Vec<usize> },
    Grassmannian { k: usize, n: usize },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<ChartedSpace> {
        match self {
            SpaceSpec::Projective { n, chart_names: Some(names) } => {
                ChartedSpace::projective_named(*n, names)
            }
            SpaceSpec::Projective { n, chart_names: None } => Ok(ChartedSpace::projective(*n)),
            SpaceSpec::Product { factors } => ChartedSpace::product(factors),
            SpaceSpec::Grassmannian { k, n } => ChartedSpace::grassmannian(*k, *n),
        }
    }
}

// ---------------------------------------------------------------------------
// Zero-scheme fixtures.

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ZeroschemeFixture {
    pub section: SectionSpec,
    pub space: SpaceSpec,
    #[serde(default)]
    pub torus_characters: Vec<Vec<i64>>,
    #[serde(default)]
    pub char_box: Vec<(i64, i64)>,
    #[serde(default = "default_truncation")]
    pub truncation: i64,
    #[serde(default)]
    pub long_running: bool,
    #[serde(default)]
    pub checks: ZeroschemeChecks,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct ZeroschemeChecks {
    /// Expected global-section dimensions from degree 0 upward.
    #[serde(default)]
    pub global_dims: Option<Vec<usize>>,
    /// Expected closed form of the graded series.
    #[serde(default)]
    pub closed_form: Option<String>,
    /// First cohomology must vanish for all degrees up to this bound.
    #[serde(default)]
    pub h1_zero_through: Option<i64>,
    /// Expected total second cohomology over degrees 0..=h2_through.
    #[serde(default)]
    pub h2_total: Option<usize>,
    #[serde(default)]
    pub h2_through: Option<i64>,
}

impl ZeroschemeFixture {
    pub fn build(&self) -> Result<ZeroSchemeModel> {
        let section = self.section.build()?;
        let space = self.space.build()?;
        let action = ChartedAction::from_section(space, &section, self.torus_characters.clone())?;
        let model = build_zero_scheme(&section, action, self.truncation)?;
        if self.char_box.is_empty() {
            Ok(model)
        } else {
            model.with_char_box(self.char_box.clone())
        }
    }
}

// ---------------------------------------------------------------------------
// Moment-graph fixtures.

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub character: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct GkmGraphFixture {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    /// Ordinary Betti numbers, for the formality cross-check.
    #[serde(default)]
    pub betti: Option<Vec<i64>>,
    #[serde(default)]
    pub check_to_degree: Option<i64>,
}

impl GkmGraphFixture {
    pub fn to_graph(&self) -> Result<MomentGraph> {
        let idx = |label: &str| -> Result<usize> {
            self.vertices
                .iter()
                .position(|v| v == label)
                .ok_or_else(|| Error::structural(format!("unknown vertex label {label}")))
        };
        let edges = self
            .edges
            .iter()
            .map(|e| Ok((idx(&e.from)?, idx(&e.to)?, e.character.clone())))
            .collect::<Result<Vec<_>>>()?;
        MomentGraph::new(self.rank, self.vertices.clone(), edges)
    }
}

// ---------------------------------------------------------------------------
// Bundle weight data over a named graph fixture.

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BundleFixture {
    /// Name of a bundled gkm-graph fixture.
    pub graph: String,
    pub bundles: Vec<BundleSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BundleSpec {
    pub name: String,
    /// Per vertex (in graph order), the multiset of weight vectors.
    pub weights: Vec<Vec<Vec<i64>>>,
    /// Edge indices this bundle is expected to violate (empty = must pass).
    #[serde(default)]
    pub expect_violations: Vec<usize>,
}

impl BundleSpec {
    pub fn to_data(&self, g: &MomentGraph) -> Result<EquivariantBundleData> {
        if self.weights.len() != g.vertices.len() {
            return Err(Error::structural(format!(
                "bundle {} has {} vertex entries, graph has {}",
                self.name,
                self.weights.len(),
                g.vertices.len()
            )));
        }
        EquivariantBundleData::new(g.rank, self.weights.clone())
    }
}

// ---------------------------------------------------------------------------
// Section fixtures.

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SectionFixture {
    pub section: SectionSpec,
    #[serde(default)]
    pub checks: SectionChecks,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct SectionChecks {
    #[serde(default)]
    pub parameter_weights: Option<Vec<i64>>,
    #[serde(default)]
    pub centralizer_dimension: Option<usize>,
    /// The coefficient map of the characteristic polynomial must have a
    /// constant nonzero Jacobian determinant.
    #[serde(default)]
    pub constant_jacobian: Option<bool>,
    /// Invariant dimensions of the symmetric group on n letters must match
    /// the trace-series route through this degree.
    #[serde(default)]
    pub invariants_match_through: Option<u32>,
}

// ---------------------------------------------------------------------------
// Component-set fixtures (reduced gluings over a zero-scheme fixture).

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ComponentSetFixture {
    /// Name of the bundled zeroscheme fixture this glues.
    pub zeroscheme: String,
    pub components: Vec<ComponentSpecJson>,
    pub incidences: Vec<IncidenceSpecJson>,
    /// Compare tuple counts with model global sections through this degree.
    pub compare_through: i64,
    /// Degrees where the two counts are expected to differ.
    #[serde(default)]
    pub expect_differ_at: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ComponentSpecJson {
    pub name: String,
    /// None for point components.
    #[serde(default)]
    pub parameter_weight: Option<i64>,
    #[serde(default)]
    pub parametrizations: Vec<ParametrizationJson>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ParametrizationJson {
    pub chart: usize,
    /// One polynomial in "u" per model-ring variable.
    pub images: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct IncidenceSpecJson {
    pub a: String,
    pub b: String,
    pub a_param: String,
    pub b_param: String,
    pub chart: usize,
    pub point: Vec<String>,
}

fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| Error::parse(format!("bad rational {s}: {e}")))
}

impl ComponentSetFixture {
    pub fn to_curve_set(&self) -> Result<ComponentCurveSet> {
        let uring = PolyRing::new(vec!["u"]);
        let components = self
            .components
            .iter()
            .map(|c| {
                let parametrizations = c
                    .parametrizations
                    .iter()
                    .map(|p| {
                        let images = p
                            .images
                            .iter()
                            .map(|s| uring.parse(s))
                            .collect::<Result<Vec<MultiPoly>>>()?;
                        Ok((p.chart, images))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ComponentCurve {
                    name: c.name.clone(),
                    parameter_weight: c.parameter_weight,
                    parametrizations,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let find = |name: &str| -> Result<usize> {
            components
                .iter()
                .position(|c: &ComponentCurve| c.name == name)
                .ok_or_else(|| Error::structural(format!("unknown component {name}")))
        };
        let incidences = self
            .incidences
            .iter()
            .map(|i| {
                Ok(ComponentIncidence {
                    a: find(&i.a)?,
                    b: find(&i.b)?,
                    a_param: parse_rat(&i.a_param)?,
                    b_param: parse_rat(&i.b_param)?,
                    chart: i.chart,
                    point: i.point.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ComponentCurveSet { components, incidences })
    }
}

// ---------------------------------------------------------------------------
// Series fixtures.

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SeriesFixture {
    pub entries: Vec<SeriesEntry>,
    pub expand_to: usize,
    /// Indices of two entries whose coefficient difference is reported.
    #[serde(default)]
    pub compare: Option<[usize; 2]>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SeriesEntry {
    pub name: String,
    pub numerator: String,
    pub denominator: String,
    #[serde(default)]
    pub expected: Option<Vec<i64>>,
}

impl SeriesEntry {
    pub fn to_series(&self) -> Result<RationalSeries> {
        RationalSeries::parse(&self.numerator, &self.denominator)
    }
}

// ---------------------------------------------------------------------------
// Parsing and the bundled catalog.

pub fn parse_fixture(json: &str) -> Result<FixtureFile> {
    serde_json::from_str(json).map_err(|e| Error::parse(format!("fixture parse error: {e}")))
}

/// Every fixture shipped with the binary, as (file name, contents).
pub fn bundled() -> Vec<(&'static str, &'static str)> {
    vec![
        ("exthick.json", include_str!("../fixtures/exthick.json")),
        ("nilpotent-line.json", include_str!("../fixtures/nilpotent-line.json")),
        ("p1-cstar.json", include_str!("../fixtures/p1-cstar.json")),
        ("gr24-torus.json", include_str!("../fixtures/gr24-torus.json")),
        ("p1.json", include_str!("../fixtures/p1.json")),
        ("p1xp1.json", include_str!("../fixtures/p1xp1.json")),
        ("flag-sl3.json", include_str!("../fixtures/flag-sl3.json")),
        ("gr24.json", include_str!("../fixtures/gr24.json")),
        ("p1xp1-bundles.json", include_str!("../fixtures/p1xp1-bundles.json")),
        ("flag-bundles.json", include_str!("../fixtures/flag-bundles.json")),
        ("gr24-bundles.json", include_str!("../fixtures/gr24-bundles.json")),
        ("sl2-section.json", include_str!("../fixtures/sl2-section.json")),
        ("gl3-section.json", include_str!("../fixtures/gl3-section.json")),
        ("gl4-section.json", include_str!("../fixtures/gl4-section.json")),
        ("exthick-reduced.json", include_str!("../fixtures/exthick-reduced.json")),
        ("discriminant.json", include_str!("../fixtures/discriminant.json")),
    ]
}

pub fn bundled_by_name(name: &str) -> Result<FixtureFile> {
    for (file, json) in bundled() {
        let fixture = parse_fixture(json)?;
        if fixture.name == name || file == name || file.trim_end_matches(".json") == name {
            return Ok(fixture);
        }
    }
    Err(Error::parse(format!("no bundled fixture named {name}")))
}

/// Load a fixture from a path, falling back to the bundled catalog.
pub fn load(path_or_name: &str) -> Result<FixtureFile> {
    if std::path::Path::new(path_or_name).is_file() {
        let text = std::fs::read_to_string(path_or_name)
            .map_err(|e| Error::parse(format!("cannot read {path_or_name}: {e}")))?;
        return parse_fixture(&text);
    }
    bundled_by_name(path_or_name)
}

/// Resolve a graph reference against the bundled catalog.
pub fn resolve_graph(name: &str) -> Result<MomentGraph> {
    match bundled_by_name(name)?.payload {
        FixturePayload::GkmGraph(g) => g.to_graph(),
        other => Err(Error::structural(format!(
            "fixture {name} has kind {}, expected gkm-graph",
            other.kind_name()
        ))),
    }
}

//! End-to-end pipeline: diagram, colorings, covers, certificates and verdicts for
//! every knot of a table and every modulus.
//!
//! Output is deterministic: orbits, sections and knots are emitted in canonical
//! order and every map is ordered. Each reported number carries the operation that
//! produced it and a summary of its inputs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coloring::{coloring_orbits, fox_colorings, Coloring, ColoringOrbit};
use crate::covers::{branched_homology, genus_bound, sheet_census, CoverHomology, SheetCensus};
use crate::coverarith::ih_euler_characteristic;
use crate::diagram::{parse_braid, KnotDiagram};
use crate::error::{Error, Result};
use crate::linalg::{AbelianGroup, IntMatrix};
use crate::surfaces::{
    double_cover_homology, linking_form, metabolizers, rho_bar, seifert_matrix, vanishes_on_some, Metabolizer, SeifertData,
};
use crate::table::{KnotRecord, KnotTable};
use crate::xi::{
    assemble_xi, bridge_bound, characteristic_classes, linking_self_value, obstruction_verdict, ribbon_bound, tristram_levine_family,
    xi3_parity_check, CharacteristicClass, ParityCheck, Verdict, XiCertificate,
};

pub const DEFAULT_MODULI: [u64; 4] = [3, 5, 7, 15];

/// Memoizes expensive operations, keyed by operation name and canonical input JSON.
/// A cache must never change a result, only avoid recomputing it.
pub trait Cache: Sync {
    fn get(&self, op: &str, input: &str) -> Option<String>;
    fn put(&self, op: &str, input: &str, output: &str);
}

pub struct NoCache;

impl Cache for NoCache {
    fn get(&self, _: &str, _: &str) -> Option<String> {
        None
    }

    fn put(&self, _: &str, _: &str, _: &str) {}
}

fn cached<T, I>(cache: &dyn Cache, op: &str, input: &I, f: impl FnOnce() -> Result<T>) -> Result<T>
where
    T: Serialize + DeserializeOwned,
    I: Serialize,
{
    let key = serde_json::to_string(input).map_err(|e| Error::Internal(e.to_string()))?;
    if let Some(hit) = cache.get(op, &key) {
        if let Ok(v) = serde_json::from_str(&hit) {
            return Ok(v);
        }
    }
    let v = f()?;
    if let Ok(out) = serde_json::to_string(&v) {
        cache.put(op, &key, &out);
    }
    Ok(v)
}

/// Caller-supplied data for one coloring orbit. A bare integer is shorthand for `{"sigma_w": n}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "OrbitInputRepr")]
pub struct OrbitInput {
    pub sigma_w: Option<i64>,
    /// Index into the characteristic classes of the knot's braid Seifert matrix.
    pub class: Option<usize>,
    /// `L_V(κ, κ)` given directly, overriding the class computation.
    pub l_v: Option<i64>,
    /// Braid word (text form) whose closure is the characteristic knot `κ`.
    pub kappa_braid: Option<String>,
    /// Seifert matrix of `κ`, overriding `kappa_braid`.
    pub kappa_seifert: Option<IntMatrix>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrbitInputRepr {
    Sigma(i64),
    Full(OrbitInputFields),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitInputFields {
    sigma_w: Option<i64>,
    class: Option<usize>,
    l_v: Option<i64>,
    kappa_braid: Option<String>,
    kappa_seifert: Option<IntMatrix>,
}

impl From<OrbitInputRepr> for OrbitInput {
    fn from(r: OrbitInputRepr) -> Self {
        match r {
            OrbitInputRepr::Sigma(s) => OrbitInput { sigma_w: Some(s), ..Default::default() },
            OrbitInputRepr::Full(f) => OrbitInput {
                sigma_w: f.sigma_w,
                class: f.class,
                l_v: f.l_v,
                kappa_braid: f.kappa_braid,
                kappa_seifert: f.kappa_seifert,
            },
        }
    }
}

/// Orbit id (`o0`, `o1`, ...) to its inputs, for one knot and one modulus.
pub type SectionInputs = BTreeMap<String, OrbitInput>;

/// Knot name, then modulus (as a string key), then orbit id.
pub type ReportInputs = BTreeMap<String, BTreeMap<String, SectionInputs>>;

/// A value with the operation and inputs that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Traced<T> {
    pub value: T,
    pub op: String,
    pub inputs: String,
}

fn traced<T>(value: T, op: &str, inputs: impl Into<String>) -> Traced<T> {
    Traced { value, op: op.to_string(), inputs: inputs.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: u32,
    pub moduli: Vec<u64>,
    pub knots: Vec<KnotReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotReport {
    pub name: String,
    pub crossings: usize,
    pub determinant: Traced<u64>,
    pub double_cover_homology: Traced<AbelianGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seifert_determinant: Option<Traced<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    pub bridge_n: Traced<usize>,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCensus {
    pub total: usize,
    pub surjective: usize,
    pub orbits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// `(p-1)(n-1)/2`.
    pub bridge: Traced<u64>,
    /// `(p-1)(n-2)/2`, which also bounds `rk H₁(M)`.
    pub genus: Traced<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub p: u64,
    pub divides_determinant: bool,
    pub census: Traced<ColoringCensus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metabolizers: Option<Traced<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic_classes: Option<Traced<Vec<Vec<u64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub orbits: Vec<OrbitReport>,
    /// Orbits passing the metabolizer filter.
    pub candidates: Vec<String>,
    pub verdict: Option<Verdict>,
    pub notes: Vec<String>,
}

impl Section {
    /// True if some certificate failed because a signature was numerically degenerate.
    pub fn has_degenerate_signature(&self) -> bool {
        self.orbits.iter().any(|o| o.degenerate_signature)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub id: String,
    pub representative: Vec<u64>,
    pub size: usize,
    pub passes_filter: Option<Traced<bool>>,
    pub cover: Traced<CoverHomology>,
    pub sheets: Traced<SheetCensus>,
    pub rk_h1_m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus_bound_holds: Option<bool>,
    pub ribbon_bound: Traced<u64>,
    pub ih_euler: Traced<i64>,
    pub certificate: XiCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi3_parity: Option<ParityCheck>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub degenerate_signature: bool,
}

/// Everything about a knot that does not depend on the modulus.
pub struct KnotContext<'a> {
    pub record: &'a KnotRecord,
    pub diagram: KnotDiagram,
    pub determinant: u64,
    pub seifert: Option<SeifertData>,
    pub bridge_n: usize,
}

impl<'a> KnotContext<'a> {
    pub fn new(record: &'a KnotRecord) -> Result<Self> {
        let diagram = record.diagram()?;
        let determinant = crate::surfaces::determinant(&diagram)?;
        let seifert = record.braid.as_ref().map(seifert_matrix);
        let bridge_n = record.bridge_n.unwrap_or_else(|| diagram.bridge_upper_bound());
        Ok(KnotContext { record, diagram, determinant, seifert, bridge_n })
    }

    fn bridge_source(&self) -> &'static str {
        if self.record.bridge_n.is_some() {
            "table override"
        } else {
            "bridge_upper_bound"
        }
    }
}

pub fn report(table: &KnotTable, moduli: &[u64], inputs: &ReportInputs, cache: &dyn Cache) -> Result<Report> {
    let empty = BTreeMap::new();
    let knots = table
        .knots
        .par_iter()
        .map(|k| knot_report(k, moduli, inputs.get(&k.name).unwrap_or(&empty), cache))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report { version: 1, moduli: moduli.to_vec(), knots })
}

pub fn knot_report(
    record: &KnotRecord,
    moduli: &[u64],
    inputs: &BTreeMap<String, SectionInputs>,
    cache: &dyn Cache,
) -> Result<KnotReport> {
    let ctx = KnotContext::new(record)?;
    let name = &record.name;
    let seifert_determinant = ctx
        .seifert
        .as_ref()
        .map(|s| -> Result<Traced<u64>> {
            let det = s.symmetrized.determinant()?;
            let det = u64::try_from(det.magnitude().clone()).map_err(|_| Error::Internal("determinant exceeds u64".into()))?;
            Ok(traced(det, "seifert_matrix", format!("braid of {name}: |det(L+L^T)|")))
        })
        .transpose()?;
    let routes_agree = seifert_determinant.as_ref().map(|s| s.value == ctx.determinant);
    let empty = BTreeMap::new();
    let sections = moduli
        .iter()
        .map(|&p| section(&ctx, p, inputs.get(&p.to_string()).unwrap_or(&empty), cache))
        .collect::<Result<Vec<_>>>()?;
    Ok(KnotReport {
        name: name.clone(),
        crossings: ctx.diagram.crossing_count(),
        determinant: traced(ctx.determinant, "determinant", format!("pd of {name}")),
        double_cover_homology: traced(double_cover_homology(&ctx.diagram), "double_cover_homology", format!("pd of {name}")),
        seifert_determinant,
        routes_agree,
        bridge_n: traced(ctx.bridge_n, ctx.bridge_source(), name.to_string()),
        sections,
    })
}

/// Classes of the knot's own Seifert matrix, when a braid is available and `p | det`.
fn classes_for(ctx: &KnotContext, p: u64) -> Result<Option<Vec<CharacteristicClass>>> {
    match &ctx.seifert {
        Some(s) if ctx.determinant.is_multiple_of(p) => Ok(Some(characteristic_classes(s, p)?)),
        _ => Ok(None),
    }
}

pub fn section(ctx: &KnotContext, p: u64, inputs: &SectionInputs, cache: &dyn Cache) -> Result<Section> {
    let name = &ctx.record.name;
    let d = &ctx.diagram;
    let all = fox_colorings(d, p)?;
    let surjective: Vec<Coloring> = all.iter().filter(|c| c.surjective).cloned().collect();
    let orbits = coloring_orbits(&surjective);
    let census = ColoringCensus { total: all.len(), surjective: surjective.len(), orbits: orbits.len() };
    let divides = ctx.determinant.is_multiple_of(p);
    let mut notes = Vec::new();
    if divides != !surjective.is_empty() {
        return Err(Error::Internal(format!("{name}: surjective {p}-colorings exist = {}, p | det = {divides}", !surjective.is_empty())));
    }

    let bounds = if ctx.bridge_n >= 2 {
        Some(Bounds {
            bridge: traced(bridge_bound(p, ctx.bridge_n)?, "bridge_bound", format!("p={p}, n={}", ctx.bridge_n)),
            genus: traced(genus_bound(p, ctx.bridge_n)?, "genus_bound", format!("p={p}, n={}", ctx.bridge_n)),
        })
    } else {
        None
    };

    for id in inputs.keys() {
        if !(0..orbits.len()).any(|k| orbit_id(k) == *id) {
            return Err(Error::InvalidArgument(format!("{name}, p={p}: no coloring orbit '{id}'")));
        }
    }

    let mut section = Section {
        p,
        divides_determinant: divides,
        census: traced(census, "fox_colorings", format!("pd of {name}, p={p}")),
        metabolizers: None,
        characteristic_classes: None,
        bounds,
        orbits: Vec::new(),
        candidates: Vec::new(),
        verdict: None,
        notes: Vec::new(),
    };
    if !divides {
        notes.push(format!("{p} does not divide the determinant {}: no surjective colorings", ctx.determinant));
        section.notes = notes;
        return Ok(section);
    }

    let lf = linking_form(d)?;
    let mets: Option<Vec<Metabolizer>> = match metabolizers(&lf) {
        Ok(m) => Some(m),
        Err(e @ Error::BudgetExceeded { .. }) => {
            notes.push(format!("metabolizer filter skipped ({e}); every orbit is a candidate"));
            None
        }
        Err(e) => return Err(e),
    };
    section.metabolizers = mets.as_ref().map(|m| traced(m.len(), "metabolizers", format!("linking_form(pd of {name})")));

    let classes = classes_for(ctx, p)?;
    section.characteristic_classes = classes
        .as_ref()
        .map(|cs| traced(cs.iter().map(|c| c.xi.clone()).collect(), "characteristic_classes", format!("seifert_matrix(braid of {name}), p={p}")));
    if ctx.seifert.is_none() {
        notes.push("no braid word: L_V must be supplied per orbit".into());
    }
    let auto_class = orbits.len() == 1 && classes.as_ref().is_some_and(|c| c.len() == 1);

    let orbit_reports = orbits
        .par_iter()
        .enumerate()
        .map(|(k, o)| {
            let phi = rho_bar(&o.representative, d, &lf)?;
            let passes = mets.as_ref().map(|m| vanishes_on_some(&phi, p, m));
            orbit_report(ctx, p, k, o, passes, inputs.get(&orbit_id(k)), classes.as_deref(), auto_class, cache)
        })
        .collect::<Result<Vec<_>>>()?;

    let candidates: Vec<&OrbitReport> =
        orbit_reports.iter().filter(|o| o.passes_filter.as_ref().is_none_or(|t| t.value)).collect();
    section.candidates = candidates.iter().map(|o| o.id.clone()).collect();
    if candidates.is_empty() {
        notes.push(
            "no coloring passes the metabolizer filter, so no slice disk is compatible with any coloring; sliceness itself is never checked"
                .into(),
        );
    } else {
        let certs: Vec<XiCertificate> = candidates.iter().map(|o| o.certificate.clone()).collect();
        section.verdict = Some(obstruction_verdict(p, &certs)?);
    }
    section.orbits = orbit_reports;
    section.notes = notes;
    Ok(section)
}

pub fn orbit_id(k: usize) -> String {
    format!("o{k}")
}

#[derive(Serialize)]
struct CoverKey<'a> {
    pd: &'a KnotDiagram,
    p: u64,
    labels: &'a [u64],
}

#[allow(clippy::too_many_arguments)]
fn orbit_report(
    ctx: &KnotContext,
    p: u64,
    k: usize,
    orbit: &ColoringOrbit,
    passes: Option<bool>,
    input: Option<&OrbitInput>,
    classes: Option<&[CharacteristicClass]>,
    auto_class: bool,
    cache: &dyn Cache,
) -> Result<OrbitReport> {
    let name = &ctx.record.name;
    let id = orbit_id(k);
    let c = &orbit.representative;
    let key = CoverKey { pd: &ctx.diagram, p, labels: &c.labels };
    let cover = cached(cache, "branched_homology", &key, || branched_homology(&ctx.diagram, c))?;
    let sheets = sheet_census(&ctx.diagram, c, Some(ctx.bridge_n))?;
    let rk = cover.branched.rank;
    let genus_bound_holds = (ctx.bridge_n >= 2).then(|| genus_bound(p, ctx.bridge_n).map(|g| rk as u64 <= g)).transpose()?;
    let bound = ribbon_bound(p, rk as u64);
    let at = format!("{name}, p={p}, {id}");

    let (certificate, degenerate) = certificate(ctx, p, input, classes, auto_class)?;
    let certificate = certificate.with_bound(bound).with_coloring_id(id.clone());
    let xi3_parity = (p == 3).then(|| xi3_parity_check(&certificate, rk == 0)).transpose()?;

    Ok(OrbitReport {
        id,
        representative: c.labels.clone(),
        size: orbit.size(),
        passes_filter: passes.map(|v| traced(v, "coloring_passes_metabolizer_filter", at.clone())),
        cover: traced(cover, "branched_homology", at.clone()),
        sheets: traced(sheets, "sheet_census", format!("{at}, n={}", ctx.bridge_n)),
        rk_h1_m: rk,
        genus_bound_holds,
        ribbon_bound: traced(bound, "ribbon_bound", format!("p={p}, rk={rk}")),
        ih_euler: traced(ih_euler_characteristic(p, rk as u64)?, "ih_euler_characteristic", format!("p={p}, rk={rk}")),
        certificate,
        xi3_parity,
        degenerate_signature: degenerate,
    })
}

/// Assembles `Ξ_p` when all three summands are available; otherwise returns an
/// indeterminate certificate recording what is missing. The flag reports a
/// degenerate Tristram–Levine form.
fn certificate(
    ctx: &KnotContext,
    p: u64,
    input: Option<&OrbitInput>,
    classes: Option<&[CharacteristicClass]>,
    auto_class: bool,
) -> Result<(XiCertificate, bool)> {
    let default = OrbitInput::default();
    let input = input.unwrap_or(&default);
    let mut missing = Vec::new();

    let l_v = match (input.l_v, input.class, classes, &ctx.seifert) {
        (Some(v), _, _, _) => Some(v),
        (None, Some(i), Some(cs), Some(s)) => {
            let cc = cs.get(i).ok_or_else(|| Error::InvalidArgument(format!("class index {i} out of range ({} classes)", cs.len())))?;
            Some(linking_self_value(s, cc)?)
        }
        (None, None, Some(cs), Some(s)) if auto_class => Some(linking_self_value(s, &cs[0])?),
        (None, None, Some(_), Some(_)) => {
            missing.push("L_V: several classes or orbits, give 'class' or 'l_v'");
            None
        }
        _ => {
            missing.push("L_V: no Seifert route, give 'l_v'");
            None
        }
    };
    if input.sigma_w.is_none() {
        missing.push("sigma_W not supplied");
    }

    let kappa = match (&input.kappa_seifert, &input.kappa_braid) {
        (Some(m), _) => Some(m.clone()),
        (None, Some(b)) => Some(seifert_matrix(&parse_braid(b)?).l),
        (None, None) => {
            missing.push("Seifert matrix of the characteristic knot not supplied");
            None
        }
    };
    let mut degenerate = false;
    let tl = match kappa.map(|l| tristram_levine_family(&l, p)) {
        Some(Ok(tl)) => Some(tl),
        Some(Err(e)) if e.is_indeterminate() => {
            degenerate = true;
            missing.push("Tristram-Levine form degenerate at a p-th root of unity");
            None
        }
        Some(Err(e)) => return Err(e),
        None => None,
    };

    if let (Some(l_v), Some(sigma_w), Some(tl)) = (l_v, input.sigma_w, &tl) {
        return Ok((assemble_xi(p, l_v, sigma_w, tl)?, false));
    }
    let mut cert = XiCertificate::missing(p, None, missing.join("; "));
    cert.l_v = l_v;
    cert.sigma_w = input.sigma_w;
    cert.tl_signatures = tl;
    Ok((cert, degenerate))
}

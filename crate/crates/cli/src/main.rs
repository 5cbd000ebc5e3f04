mod cache;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dihedralsig::coloring::coloring_orbits;
use dihedralsig::coverarith::{
    disk_cover_euler, ih_euler_characteristic, sashka_signature, viro_signature, CoverSpec,
};
use dihedralsig::covers::{branched_homology, sheet_census};
use dihedralsig::diagram::{parse_braid, parse_pd};
use dihedralsig::report::{self, Cache, KnotContext, NoCache, ReportInputs, SectionInputs, DEFAULT_MODULI};
use dihedralsig::surfaces::{double_cover_homology, seifert_matrix};
use dihedralsig::xi::{
    assemble_xi, characteristic_classes, linking_self_value, ribbon_bound, tristram_levine_family, xi3_parity_check, Verdict,
};
use dihedralsig::{fox_colorings, Error, IntMatrix, KnotRecord, KnotTable};

use cache::FileCache;

/// Dihedral branched covers of knots: colorings, cover homology, Ξ_p and ribbon obstructions.
#[derive(Parser)]
#[command(name = "dihedralsig", version)]
struct Cli {
    /// Knot table (JSON); the bundled table by default.
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Do not read or write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory (the DIHEDRALSIG_CACHE environment variable takes precedence).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Census of Fox p-colorings.
    Color {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long)]
        p: u64,
        /// Also list every coloring.
        #[arg(long)]
        list: bool,
    },
    /// Determinant and first homology of the double branched cover.
    Det {
        #[command(flatten)]
        knot: KnotArgs,
    },
    /// First homology of the irregular dihedral covers, one per coloring orbit.
    CoverH1 {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long)]
        p: u64,
    },
    /// Assemble a Ξ_p certificate from its summands.
    #[command(allow_negative_numbers = true)]
    Xi(XiArgs),
    /// Ribbon obstruction for one knot and modulus.
    Obstruct {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long)]
        p: u64,
        /// JSON object from orbit id to sigma_W (or to {sigma_w, class, l_v, kappa_braid, kappa_seifert}).
        #[arg(long)]
        sigma_w_file: Option<PathBuf>,
    },
    /// Signature of a cyclic-type branched cover: n σ(Y) - Σ (r²-1)/3 e(A_r).
    #[command(allow_negative_numbers = true)]
    Viro {
        #[arg(long, required_unless_present = "batch")]
        n: Option<u64>,
        #[arg(long, required_unless_present = "batch")]
        sigma_y: Option<i64>,
        /// Branching index and Euler number as r:e (repeatable).
        #[arg(long = "e", value_parser = parse_index_pair)]
        euler: Vec<(u32, i64)>,
        /// JSON array of specs {n, sigma_y, euler_numbers}.
        #[arg(long, conflicts_with_all = ["n", "sigma_y", "euler"])]
        batch: Option<PathBuf>,
    },
    /// Intersection-homology signature of a dihedral cover: p σ(Y) - (p-1)/4 e(B) + Ξ_p.
    #[command(allow_negative_numbers = true)]
    Sashka {
        #[arg(long, required_unless_present = "batch")]
        p: Option<u64>,
        #[arg(long, required_unless_present = "batch")]
        sigma_y: Option<i64>,
        #[arg(long, required_unless_present = "batch")]
        e_b: Option<i64>,
        #[arg(long, required_unless_present = "batch")]
        xi: Option<i64>,
        /// JSON array of {p, sigma_y, e_b, xi}.
        #[arg(long, conflicts_with_all = ["p", "sigma_y", "e_b", "xi"])]
        batch: Option<PathBuf>,
    },
    /// Intersection-homology Euler characteristic 1 - rk H₁(M) + (p+1)/2, or (p+1)/2 for the disk cover.
    Euler {
        #[arg(long, required_unless_present = "batch")]
        p: Option<u64>,
        #[arg(long, required_unless_present_any = ["disk", "batch"])]
        rk: Option<u64>,
        /// Euler characteristic of the disk cover instead.
        #[arg(long, conflicts_with = "rk")]
        disk: bool,
        /// JSON array of {p, rk} (or {p} with "disk": true).
        #[arg(long, conflicts_with_all = ["p", "rk", "disk"])]
        batch: Option<PathBuf>,
    },
    /// Full report over the table.
    Report {
        /// Restrict to these knots (repeatable).
        #[arg(long = "knot")]
        knots: Vec<String>,
        /// Moduli, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MODULI)]
        p: Vec<u64>,
        /// JSON: knot name -> modulus -> orbit id -> inputs.
        #[arg(long)]
        inputs: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct KnotArgs {
    /// Knot name in the table.
    #[arg(required_unless_present_any = ["pd", "unknot"])]
    knot: Option<String>,
    /// PD code given directly, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".
    #[arg(long, conflicts_with_all = ["knot", "unknot"])]
    pd: Option<String>,
    /// The 0-crossing unknot.
    #[arg(long, conflicts_with = "knot")]
    unknot: bool,
    /// Braid word for the Seifert route, e.g. "k=2; 1 1 1".
    #[arg(long)]
    braid: Option<String>,
    /// Bridge number upper bound overriding the table or diagram value.
    #[arg(long)]
    bridge_n: Option<usize>,
}

#[derive(Args)]
struct XiArgs {
    #[arg(long)]
    p: u64,
    /// L_V(κ,κ) directly.
    #[arg(long, conflicts_with = "knot")]
    l_v: Option<i64>,
    /// Compute L_V from this table knot's braid Seifert matrix.
    #[arg(long, required_unless_present = "l_v")]
    knot: Option<String>,
    /// Characteristic class index (needed when the knot has several).
    #[arg(long, requires = "knot")]
    class: Option<usize>,
    #[arg(long)]
    sigma_w: i64,
    /// Tristram–Levine signatures σ_{ζ^i}(κ), i = 1..p-1, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present_any = ["kappa_braid", "kappa_seifert"])]
    tl: Vec<i64>,
    /// Braid word whose closure is κ.
    #[arg(long, conflicts_with_all = ["tl", "kappa_seifert"])]
    kappa_braid: Option<String>,
    /// Seifert matrix of κ as a JSON array of rows.
    #[arg(long, conflicts_with = "tl")]
    kappa_seifert: Option<String>,
    /// rk H₁(M); when given, the ribbon bound and verdict are filled in.
    #[arg(long)]
    rk: Option<u64>,
}

fn parse_index_pair(s: &str) -> Result<(u32, i64), String> {
    let (r, e) = s.split_once(':').ok_or("expected r:e")?;
    Ok((r.trim().parse().map_err(|e| format!("{e}"))?, e.trim().parse().map_err(|e| format!("{e}"))?))
}

/// Exit 2 for input errors, 3 for results that cannot be decided at working precision.
enum Failure {
    Input(String),
    Indeterminate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_indeterminate() {
            Failure::Indeterminate(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

/// What a command prints, and whether the result was indeterminate.
struct Output {
    json: Value,
    text: String,
    indeterminate: bool,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Output { json, text: text.into(), indeterminate: false }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    Ok(serde_json::to_value(v)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize"));
            } else {
                println!("{}", out.text.trim_end());
            }
            if out.indeterminate {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Indeterminate(m)) => {
            eprintln!("indeterminate: {m}");
            ExitCode::from(3)
        }
    }
}

fn load_table(cli: &Cli) -> Result<KnotTable, Failure> {
    match &cli.table {
        Some(path) => Ok(KnotTable::from_json(&std::fs::read_to_string(path)?)?),
        None => Ok(KnotTable::bundled()),
    }
}

fn make_cache(cli: &Cli) -> Box<dyn Cache> {
    if cli.no_cache {
        return Box::new(NoCache);
    }
    match cache::resolve_dir(cli.cache_dir.as_deref()) {
        Some(dir) => Box::new(FileCache::new(dir)),
        None => Box::new(NoCache),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

impl KnotArgs {
    fn record(&self, table: &KnotTable) -> Result<KnotRecord, Failure> {
        let mut record = if let Some(pd) = &self.pd {
            let d = parse_pd(pd)?;
            let pd = d.pd().iter().map(|x| x.map(u64::from)).collect();
            KnotRecord { name: "input".into(), pd, braid: None, bridge_n: None }
        } else if self.unknot {
            KnotRecord { name: "unknot".into(), pd: Vec::new(), braid: None, bridge_n: None }
        } else {
            table.get(self.knot.as_deref().expect("clap requires a knot"))?.clone()
        };
        if let Some(b) = &self.braid {
            record.braid = Some(parse_braid(b)?);
        }
        if self.bridge_n.is_some() {
            record.bridge_n = self.bridge_n;
        }
        Ok(record)
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Color { knot, p, list } => cmd_color(&knot.record(&load_table(cli)?)?, *p, *list),
        Command::Det { knot } => cmd_det(&knot.record(&load_table(cli)?)?),
        Command::CoverH1 { knot, p } => cmd_cover_h1(&knot.record(&load_table(cli)?)?, *p, make_cache(cli).as_ref()),
        Command::Xi(args) => cmd_xi(args, &load_table(cli)?),
        Command::Obstruct { knot, p, sigma_w_file } => {
            let inputs: SectionInputs = match sigma_w_file {
                Some(path) => read_json(path)?,
                None => SectionInputs::new(),
            };
            cmd_obstruct(&knot.record(&load_table(cli)?)?, *p, &inputs, make_cache(cli).as_ref())
        }
        Command::Viro { n, sigma_y, euler, batch } => match batch {
            Some(path) => batch_eval(path, |v| Ok(viro_signature(&serde_json::from_value::<CoverSpec>(v)?)?)),
            None => {
                let spec = CoverSpec {
                    n: n.expect("clap"),
                    sigma_y: sigma_y.expect("clap"),
                    euler_numbers: euler.iter().copied().collect(),
                    dihedral: None,
                };
                let value = viro_signature(&spec)?;
                Ok(Output::new(json!({ "value": value }), value.to_string()))
            }
        },
        Command::Sashka { p, sigma_y, e_b, xi, batch } => match batch {
            Some(path) => batch_eval(path, |v| {
                let get = |k: &str| v.get(k).and_then(Value::as_i64).ok_or_else(|| Failure::Input(format!("missing integer '{k}'")));
                Ok(sashka_signature(get("p")? as u64, get("sigma_y")?, get("e_b")?, get("xi")?)?)
            }),
            None => {
                let value = sashka_signature(p.expect("clap"), sigma_y.expect("clap"), e_b.expect("clap"), xi.expect("clap"))?;
                Ok(Output::new(json!({ "value": value }), value.to_string()))
            }
        },
        Command::Euler { p, rk, disk, batch } => match batch {
            Some(path) => batch_eval(path, |v| {
                let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Failure::Input("missing integer 'p'".into()))?;
                if v.get("disk").and_then(Value::as_bool).unwrap_or(false) {
                    return Ok(disk_cover_euler(p)? as i64);
                }
                let rk = v.get("rk").and_then(Value::as_u64).ok_or_else(|| Failure::Input("missing integer 'rk'".into()))?;
                Ok(ih_euler_characteristic(p, rk)?)
            }),
            None => {
                let p = p.expect("clap");
                let value = if *disk { disk_cover_euler(p)? as i64 } else { ih_euler_characteristic(p, rk.expect("clap"))? };
                Ok(Output::new(json!({ "value": value }), value.to_string()))
            }
        },
        Command::Report { knots, p, inputs, out } => {
            let mut table = load_table(cli)?;
            if !knots.is_empty() {
                for k in knots {
                    table.get(k)?;
                }
                table.knots.retain(|r| knots.contains(&r.name));
            }
            let inputs: ReportInputs = match inputs {
                Some(path) => read_json(path)?,
                None => ReportInputs::new(),
            };
            let r = report::report(&table, p, &inputs, make_cache(cli).as_ref())?;
            let json = to_value(&r)?;
            if let Some(path) = out {
                let mut text = serde_json::to_string_pretty(&json)?;
                text.push('\n');
                std::fs::write(path, text)?;
                return Ok(Output::new(json!({ "written": path }), format!("report written to {}", path.display())));
            }
            let text = serde_json::to_string_pretty(&json)?;
            Ok(Output::new(json, text))
        }
    }
}

/// Evaluates every element of a JSON array; per-element errors are reported in place.
fn batch_eval(path: &Path, f: impl Fn(Value) -> Result<i64, Failure>) -> Outcome {
    let items: Vec<Value> = read_json(path)?;
    let mut results = Vec::with_capacity(items.len());
    let mut lines = Vec::new();
    for item in items {
        match f(item) {
            Ok(v) => {
                lines.push(v.to_string());
                results.push(json!({ "value": v }));
            }
            Err(Failure::Input(m) | Failure::Indeterminate(m)) => {
                lines.push(format!("error: {m}"));
                results.push(json!({ "error": m }));
            }
        }
    }
    Ok(Output::new(Value::Array(results), lines.join("\n")))
}

fn cmd_color(record: &KnotRecord, p: u64, list: bool) -> Outcome {
    let d = record.diagram()?;
    let all = fox_colorings(&d, p)?;
    let surjective: Vec<_> = all.iter().filter(|c| c.surjective).cloned().collect();
    let orbits = coloring_orbits(&surjective);
    let mut json = json!({
        "knot": record.name,
        "p": p,
        "total": all.len(),
        "surjective": surjective.len(),
        "orbits": orbits.len(),
    });
    let mut text = format!(
        "{}: {} colorings mod {p}, {} surjective, {} orbits",
        record.name,
        all.len(),
        surjective.len(),
        orbits.len()
    );
    if list {
        json["colorings"] = to_value(&all.iter().map(|c| &c.labels).collect::<Vec<_>>())?;
        for c in &all {
            text.push_str(&format!("\n{:?}{}", c.labels, if c.surjective { "" } else { " (constant mod a prime)" }));
        }
    }
    Ok(Output::new(json, text))
}

fn cmd_det(record: &KnotRecord) -> Outcome {
    let d = record.diagram()?;
    let det = dihedralsig::surfaces::determinant(&d)?;
    let h1 = double_cover_homology(&d);
    let seifert = match &record.braid {
        Some(b) => {
            let det = seifert_matrix(b).symmetrized.determinant()?;
            Some(u64::try_from(det.magnitude()).map_err(|_| Failure::Input("Seifert determinant exceeds u64".into()))?)
        }
        None => None,
    };
    let mut text = format!("{}: determinant {det}, H1(double branched cover) = {h1}", record.name);
    if let Some(s) = &seifert {
        text.push_str(&format!(", |det(L+L^T)| = {s}"));
    }
    let json = json!({ "knot": record.name, "determinant": det, "double_cover_homology": h1, "seifert_determinant": seifert });
    Ok(Output::new(json, text))
}

fn cmd_cover_h1(record: &KnotRecord, p: u64, cache: &dyn Cache) -> Outcome {
    let ctx = KnotContext::new(record)?;
    let surjective: Vec<_> = fox_colorings(&ctx.diagram, p)?.into_iter().filter(|c| c.surjective).collect();
    let orbits = coloring_orbits(&surjective);
    let mut out = Vec::new();
    let mut text = format!("{}, p={p}: {} coloring orbits", record.name, orbits.len());
    for (k, o) in orbits.iter().enumerate() {
        let h = cached_cover(cache, &ctx, p, &o.representative)?;
        let sheets = sheet_census(&ctx.diagram, &o.representative, Some(ctx.bridge_n))?;
        text.push_str(&format!(
            "\n{}: coloring {:?}: H1(unbranched) = {}, H1(M) = {}",
            report::orbit_id(k),
            o.representative.labels,
            h.unbranched,
            h.branched
        ));
        out.push(json!({
            "id": report::orbit_id(k),
            "representative": o.representative.labels,
            "size": o.size(),
            "unbranched": h.unbranched,
            "branched": h.branched,
            "meridian_lift_orbits": h.meridian_lift_orbits,
            "sheets": sheets,
        }));
    }
    if orbits.is_empty() {
        text.push_str(&format!(" ({p} does not divide the determinant {})", ctx.determinant));
    }
    Ok(Output::new(json!({ "knot": record.name, "p": p, "orbits": out }), text))
}

fn cached_cover(
    cache: &dyn Cache,
    ctx: &KnotContext,
    p: u64,
    c: &dihedralsig::Coloring,
) -> Result<dihedralsig::CoverHomology, Failure> {
    let key = serde_json::to_string(&json!({ "pd": ctx.diagram, "p": p, "labels": c.labels }))?;
    if let Some(hit) = cache.get("branched_homology", &key).and_then(|s| serde_json::from_str(&s).ok()) {
        return Ok(hit);
    }
    let h = branched_homology(&ctx.diagram, c)?;
    cache.put("branched_homology", &key, &serde_json::to_string(&h)?);
    Ok(h)
}

fn cmd_xi(args: &XiArgs, table: &KnotTable) -> Outcome {
    let p = args.p;
    let l_v = match (args.l_v, &args.knot) {
        (Some(v), _) => v,
        (None, Some(name)) => {
            let record = table.get(name)?;
            let braid = record.braid.as_ref().ok_or_else(|| Failure::Input(format!("{name} has no braid word")))?;
            let s = seifert_matrix(braid);
            let classes = characteristic_classes(&s, p)?;
            let idx = match (args.class, classes.len()) {
                (Some(i), n) if i < n => i,
                (Some(i), n) => return Err(Failure::Input(format!("class index {i} out of range ({n} classes)"))),
                (None, 1) => 0,
                (None, n) => return Err(Failure::Input(format!("{name} has {n} characteristic classes mod {p}; pass --class"))),
            };
            linking_self_value(&s, &classes[idx])?
        }
        (None, None) => unreachable!("clap requires --l-v or --knot"),
    };
    let tl = if let Some(b) = &args.kappa_braid {
        tristram_levine_family(&seifert_matrix(&parse_braid(b)?).l, p)?
    } else if let Some(m) = &args.kappa_seifert {
        let m: IntMatrix = serde_json::from_str(m)?;
        tristram_levine_family(&m, p)?
    } else {
        args.tl.clone()
    };
    let mut cert = assemble_xi(p, l_v, args.sigma_w, &tl)?;
    if let Some(rk) = args.rk {
        cert = cert.with_bound(ribbon_bound(p, rk));
    }
    let mut json = to_value(&cert)?;
    let xi = cert.xi.expect("assembled");
    let mut text = format!("Xi_{p} = {xi}  (L_V = {l_v}, sigma_W = {}, tl = {tl:?})", args.sigma_w);
    if let Some(b) = cert.bound {
        text.push_str(&format!("\nbound {b}: {}", cert.verdict));
    }
    if p == 3 {
        let parity = xi3_parity_check(&cert, args.rk == Some(0))?;
        json["xi3_parity"] = to_value(&parity)?;
        text.push_str(&format!("\nparity check: {}", to_value(&parity)?.as_str().unwrap_or_default()));
    }
    Ok(Output::new(json, text))
}

fn cmd_obstruct(record: &KnotRecord, p: u64, inputs: &SectionInputs, cache: &dyn Cache) -> Outcome {
    let ctx = KnotContext::new(record)?;
    let section = report::section(&ctx, p, inputs, cache)?;
    let mut text = format!(
        "{}, p={p}: determinant {}, {} surjective colorings in {} orbits",
        record.name, ctx.determinant, section.census.value.surjective, section.census.value.orbits
    );
    if let Some(b) = &section.bounds {
        text.push_str(&format!("\nbridge bound {} (n={}), genus bound {}", b.bridge.value, ctx.bridge_n, b.genus.value));
    }
    for o in &section.orbits {
        let filter = o.passes_filter.as_ref().map_or("unchecked".to_string(), |t| t.value.to_string());
        let xi = o.certificate.xi.map_or("?".to_string(), |x| x.to_string());
        text.push_str(&format!(
            "\n{}: rk H1(M) = {}, bound {}, passes metabolizer filter: {filter}, Xi = {xi}, {}",
            o.id, o.rk_h1_m, o.ribbon_bound.value, o.certificate.verdict
        ));
        if let Some(note) = &o.certificate.note {
            text.push_str(&format!(" ({note})"));
        }
    }
    match section.verdict {
        Some(v) => text.push_str(&format!("\nverdict: {v}")),
        None => text.push_str("\nverdict: none"),
    }
    for n in &section.notes {
        text.push_str(&format!("\nnote: {n}"));
    }
    let mut json = to_value(&section)?;
    json["knot"] = Value::String(record.name.clone());
    let indeterminate = section.has_degenerate_signature() && section.verdict != Some(Verdict::ConsistentWithRibbon);
    Ok(Output { json, text, indeterminate })
}


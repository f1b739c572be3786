//! `masure`: queries and checkers for Coxeter data, apartments and tree atlases.
//!
//! Exit codes: 0 success, 1 a checker found a violation, 2 input error,
//! 3 no violation but some case was inconclusive at the given bounds.

mod input;

use apartment::DEFAULT_HEIGHT;
use clap::{Args, Parser, Subcommand, ValueEnum};
use coxeter_core::rational::vec_to_strings;
use coxeter_core::roots::{imaginary_roots_up_to_height, roots_up_to_height};
use coxeter_core::{CartanKind, GroupElement, Realization};
use infinity::{
    check_opposite_distances, check_twinning, check_w_distance, compare, window_graph, Facade, FacetAtInfinity, SectorGerm,
};
use input::{err, InputError};
use masure_atlas::{AxiomReport, Center, CheckBounds, GluedAtlas, TreeAtlas, DEFAULT_CHART_LIMIT};
use residue::{residue_at, Mode};
use serde_json::{json, Value};
use std::process::ExitCode;
use tits_cone::{Location, Sign};

#[derive(Parser)]
#[command(name = "masure", version, about = "Coxeter data, Tits cones, enclosures, tree atlases and their checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DatumArgs {
    /// A named datum: A2, B2, G2, ~A2, A1xA1, rank2:a,b, ...
    #[arg(long)]
    datum: Option<String>,
    /// A data file.
    #[arg(long)]
    file: Option<String>,
    /// Root height truncation H.
    #[arg(long, env = "MASURE_HEIGHT", default_value_t = DEFAULT_HEIGHT)]
    height: i64,
}

#[derive(Args)]
struct AtlasArgs {
    /// Tree atlas, e.g. `--tree q=2 depth=4`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    tree: Vec<String>,
    /// Product of trees, e.g. `--product q=2,2 depth=2`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    product: Vec<String>,
    /// Refuse atlases with more charts than this.
    #[arg(long, default_value_t = DEFAULT_CHART_LIMIT)]
    chart_limit: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axiom {
    Mao,
    Ma2,
    Ma4,
    Thickness,
    Cocycle,
    HalfApartments,
    Twinning,
    Wdistance,
    Opposite,
}

#[derive(Subcommand)]
enum Command {
    /// Matrices, type and root counts of a datum.
    CoxeterInfo(DatumArgs),
    /// Positive roots up to the height truncation.
    Roots(DatumArgs),
    /// The vectorial facet containing a vector.
    Locate {
        #[command(flatten)]
        datum: DatumArgs,
        /// Coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// The enclosure of a finite set of points.
    Enclose {
        #[command(flatten)]
        datum: DatumArgs,
        /// A point; repeat for more.
        #[arg(long = "point", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
        /// Exact levels instead of levels rounded into the value groups.
        #[arg(long)]
        exact: bool,
    },
    /// Build a tree atlas and print it in the glued atlas format or as a summary.
    AtlasBuild {
        #[command(flatten)]
        atlas: AtlasArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run axiom checkers on a tree atlas, or the cocycle check on a glued atlas file.
    AtlasCheck {
        #[command(flatten)]
        atlas: AtlasArgs,
        /// A glued atlas file instead of a tree atlas.
        #[arg(long, conflicts_with_all = ["tree", "product"])]
        glued: Option<String>,
        /// Defaults to mao,ma2,ma4,thickness for tree atlases and cocycle for glued ones.
        #[arg(long, value_enum, value_delimiter = ',')]
        axioms: Vec<Axiom>,
        /// Half-width of the lattice sampled by the glued cocycle check.
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Retract a point onto the chart of a sector germ.
    Retract {
        #[command(flatten)]
        atlas: AtlasArgs,
        /// `CHART:a` or `CHART:b`.
        #[arg(long)]
        center: String,
        /// `CHART:COORDS`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Retract a segment and report its breakpoints and folds.
    Fold {
        #[command(flatten)]
        atlas: AtlasArgs,
        #[arg(long)]
        center: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// The global preorder between two points.
    Leq {
        #[command(flatten)]
        atlas: AtlasArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Distance or codistance of two sector germs, each `+L1,L2` or `-L1,L2`.
    InfinityDist {
        #[command(flatten)]
        atlas: AtlasArgs,
        #[arg(long, allow_hyphen_values = true)]
        first: String,
        #[arg(long, allow_hyphen_values = true)]
        second: String,
    },
    /// The façade of a facet at infinity given by one leaf or `*` per factor.
    Facade {
        #[command(flatten)]
        atlas: AtlasArgs,
        #[arg(long)]
        ends: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Chamber germs, distances and checks of the residue at a point.
    Residue {
        #[command(flatten)]
        atlas: AtlasArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        nonrestricted: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Ok,
    Inconclusive,
    Violation,
}

impl Verdict {
    fn of(reports: &[&AxiomReport]) -> Self {
        if reports.iter().any(|r| !r.passed()) {
            Verdict::Violation
        } else if reports.iter().any(|r| r.inconclusive > 0) {
            Verdict::Inconclusive
        } else {
            Verdict::Ok
        }
    }

    fn code(self) -> u8 {
        match self {
            Verdict::Ok => 0,
            Verdict::Violation => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

fn word(re: &Realization, w: &GroupElement) -> Vec<String> {
    w.labels(re)
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

fn kind_str(k: CartanKind) -> &'static str {
    match k {
        CartanKind::Finite => "finite",
        CartanKind::Affine => "affine",
        CartanKind::Indefinite => "indefinite",
    }
}

fn loc_strings(loc: &[masure_atlas::TreeLoc]) -> Vec<String> {
    loc.iter().map(ToString::to_string).collect()
}

fn bounds_json(at: &TreeAtlas, b: &CheckBounds) -> Value {
    let shape: Vec<Value> = at.factors().iter().map(|f| json!({"q": f.q(), "depth": f.depth()})).collect();
    json!({"window": shape, "charts": at.chart_count(), "height": b.height, "seed": b.seed})
}

/// Version of the JSON report layout, written into every report.
const SCHEMA_VERSION: u32 = 1;

fn emit(text: &str) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(v: &Value) {
    let mut v = v.clone();
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    emit(&(serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"));
}

fn run(cmd: Command) -> Result<Verdict, InputError> {
    match cmd {
        Command::CoxeterInfo(d) => {
            let m = input::load_model(d.datum.as_deref(), d.file.as_deref(), d.height)?;
            let re = m.realization();
            let datum = re.datum();
            let all: Vec<usize> = (0..datum.rank()).collect();
            let coxeter: Vec<Vec<Value>> = datum
                .coxeter_matrix()
                .iter()
                .map(|row| row.iter().map(|b| b.map_or(json!("inf"), |m| json!(m))).collect())
                .collect();
            let real = roots_up_to_height(datum, d.height).iter().filter(|r| r.is_positive()).count();
            let imaginary = imaginary_roots_up_to_height(datum, d.height).iter().filter(|c| c.iter().all(|&x| x >= 0)).count();
            print(&json!({
                "labels": datum.labels(),
                "rank": datum.rank(),
                "dim": re.dim(),
                "coxeter": coxeter,
                "cartan": datum.cartan(),
                "kind": kind_str(datum.kind()),
                "spherical": datum.is_spherical(&all),
                "positive_real_roots": real,
                "positive_imaginary_roots": imaginary,
                "height": d.height,
            }));
            Ok(Verdict::Ok)
        }
        Command::Roots(d) => {
            let m = input::load_model(d.datum.as_deref(), d.file.as_deref(), d.height)?;
            let datum = m.realization().datum();
            let mut real: Vec<Vec<i64>> = roots_up_to_height(datum, d.height).into_iter().filter(|r| r.is_positive()).map(|r| r.coeffs).collect();
            real.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
            let mut imaginary: Vec<Vec<i64>> =
                imaginary_roots_up_to_height(datum, d.height).into_iter().filter(|c| c.iter().all(|&x| x >= 0)).collect();
            imaginary.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
            print(&json!({"labels": datum.labels(), "height": d.height, "real": real, "imaginary": imaginary}));
            Ok(Verdict::Ok)
        }
        Command::Locate { datum: d, vector } => {
            let m = input::load_model(d.datum.as_deref(), d.file.as_deref(), d.height)?;
            let re = m.realization();
            let v = input::vector(&vector, re.dim())?;
            let location = match m.cone().locate(&v) {
                Location::Facet(f) => json!({
                    "sign": sign_str(f.sign),
                    "w": word(re, &f.w),
                    "j": f.j.iter().map(|&i| re.datum().labels()[i].clone()).collect::<Vec<_>>(),
                }),
                Location::NotInCone => json!("outside"),
                Location::Unknown => json!("unknown"),
            };
            print(&json!({"vector": vec_to_strings(&v), "location": location}));
            Ok(Verdict::Ok)
        }
        Command::Enclose { datum: d, points, exact } => {
            let m = input::load_model(d.datum.as_deref(), d.file.as_deref(), d.height)?;
            let pts: Vec<Vec<_>> = points.iter().map(|p| input::vector(p, m.dim())).collect::<Result<_, _>>()?;
            let e = if exact { m.enclose_exact(&pts)? } else { m.enclose(&pts)? };
            print(&json!({"height": e.height, "exact": exact, "half_spaces": e.half_spaces(&m)}));
            Ok(Verdict::Ok)
        }
        Command::AtlasBuild { atlas, format } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            match format {
                Format::Text => emit(&at.to_glued(atlas.chart_limit)?.to_text()),
                Format::Json => print(&json!({
                    "rank": at.rank(),
                    "factors": at.factors().iter().map(|f| json!({
                        "q": f.q(), "depth": f.depth(), "vertices": f.vertex_count(), "leaves": f.leaf_count(), "edges": f.edges(),
                    })).collect::<Vec<_>>(),
                    "charts": at.chart_count(),
                    "vertices": at.vertices().len(),
                })),
                Format::Dot => {
                    let mut out = String::new();
                    for (k, f) in at.factors().iter().enumerate() {
                        out += &format!("graph factor{k} {{\n");
                        for (a, b) in f.edges() {
                            out += &format!("  v{a} -- v{b};\n");
                        }
                        out += "}\n";
                    }
                    emit(&out);
                }
            }
            Ok(Verdict::Ok)
        }
        Command::AtlasCheck { atlas, glued, axioms, radius, seed } => {
            let bounds = CheckBounds { seed, ..CheckBounds::default() };
            if let Some(path) = glued {
                let text = std::fs::read_to_string(&path).map_err(|e| InputError(format!("{path}: {e}")))?;
                let g = GluedAtlas::from_text(&text).map_err(|e| InputError(format!("{path}: {e}")))?;
                if axioms.iter().any(|a| *a != Axiom::Cocycle) {
                    return err("a glued atlas supports only --axioms cocycle");
                }
                let rep = g.check_cocycle(radius, &bounds);
                print(&json!({"bounds": {"radius": radius, "height": g.model().height(), "charts": g.charts().len()}, "reports": [rep]}));
                return Ok(Verdict::of(&[&rep]));
            }
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let axioms = if axioms.is_empty() { vec![Axiom::Mao, Axiom::Ma2, Axiom::Ma4, Axiom::Thickness] } else { axioms };
            let mut reports: Vec<AxiomReport> = Vec::new();
            let mut thickness = Vec::new();
            let mut twins = Vec::new();
            for a in &axioms {
                match a {
                    Axiom::Mao => {
                        let v = at.vertices();
                        let pairs: Vec<_> =
                            (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (i, j))).map(|(i, j)| (v[i].clone(), v[j].clone())).collect();
                        reports.push(at.check_mao(&pairs, &bounds));
                    }
                    Axiom::Ma2 => reports.push(at.check_ma2(&bounds)),
                    Axiom::Ma4 => reports.push(at.check_ma4(&bounds)),
                    Axiom::Cocycle => reports.push(at.check_cocycle(500, &bounds)),
                    Axiom::HalfApartments => {
                        for k in 0..at.rank() {
                            reports.push(at.check_half_apartment_gluing(k, &bounds));
                        }
                    }
                    Axiom::Thickness => {
                        for k in 0..at.rank() {
                            thickness.push(at.thickness(k));
                        }
                    }
                    Axiom::Twinning => twins.push(check_twinning(&at, &bounds).map_err(|e| InputError(e.to_string()))?),
                    Axiom::Wdistance => {
                        for s in [Sign::Plus, Sign::Minus] {
                            reports.push(check_w_distance(&at, s, &bounds).map_err(|e| InputError(e.to_string()))?);
                        }
                    }
                    Axiom::Opposite => reports.push(check_opposite_distances(&at, &bounds).map_err(|e| InputError(e.to_string()))?),
                }
            }
            let mut all: Vec<&AxiomReport> = reports.iter().collect();
            for t in &twins {
                all.extend([&t.tw1, &t.tw2, &t.tw3]);
            }
            let mut verdict = Verdict::of(&all);
            if thickness.iter().any(|t| !t.passed()) {
                verdict = Verdict::Violation;
            }
            print(&json!({
                "bounds": bounds_json(&at, &bounds),
                "reports": reports,
                "twinning": twins,
                "thickness": thickness,
                "passed": verdict == Verdict::Ok,
            }));
            Ok(verdict)
        }
        Command::Retract { atlas, center, point } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let (chart, end) = input::chart_end(&at, &center)?;
            let p = input::point(&at, &point)?;
            let c = Center { chart, end };
            let r = at.retract_point(&c, &p)?;
            print(&json!({
                "center": {"chart": chart, "end": c.end},
                "point": loc_strings(&at.location(&p)?),
                "image": {"chart": r.chart, "coords": vec_to_strings(&r.coords)},
            }));
            Ok(Verdict::Ok)
        }
        Command::Fold { atlas, center, from, to } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let re = at.realization();
            let (chart, end) = input::chart_end(&at, &center)?;
            let (x, y) = (at.location(&input::point(&at, &from)?)?, at.location(&input::point(&at, &to)?)?);
            let seg = at.retract_segment(&Center { chart, end }, &x, &y)?;
            let folds: Vec<Value> = seg
                .folds
                .iter()
                .map(|f| json!({"index": f.index, "w_plus": word(re, &f.w_plus), "w_minus": word(re, &f.w_minus), "positive": f.positive}))
                .collect();
            print(&json!({
                "chart": seg.chart,
                "points": seg.points.iter().map(|p| vec_to_strings(p)).collect::<Vec<_>>(),
                "folds": folds,
                "increasing": seg.increasing,
                "positively_folded": seg.positively_folded(),
            }));
            Ok(Verdict::Ok)
        }
        Command::Leq { atlas, from, to } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let (x, y) = (at.location(&input::point(&at, &from)?)?, at.location(&input::point(&at, &to)?)?);
            let leq = at.global_leq(&x, &y)?;
            let everywhere = at.global_leq_everywhere(&x, &y);
            print(&json!({"from": loc_strings(&x), "to": loc_strings(&y), "leq": leq, "chart_independent": everywhere.is_some()}));
            Ok(Verdict::Ok)
        }
        Command::InfinityDist { atlas, first, second } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let (s1, e1) = input::germ(&at, &first)?;
            let (s2, e2) = input::germ(&at, &second)?;
            let (q1, q2) = (SectorGerm::new(s1, e1), SectorGerm::new(s2, e2));
            let w = infinity::distance::relative_position(&at, &q1, &q2).map_err(|e| InputError(e.to_string()))?;
            let kind = if s1 == s2 { "distance" } else { "codistance" };
            print(&json!({"kind": kind, "w": word(at.realization(), &w), "length": w.length()}));
            Ok(Verdict::Ok)
        }
        Command::Facade { atlas, ends, format } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let ends = input::facet_ends(&at, &ends)?;
            let fi = FacetAtInfinity::from_ends(&at, &ends).map_err(|e| InputError(e.to_string()))?;
            let fa = Facade::new(&at, &fi).map_err(|e| InputError(e.to_string()))?;
            match format {
                Format::Dot | Format::Text => emit(&fa.to_dot()),
                Format::Json => {
                    let comparison = (fa.factors.len() == 1).then(|| compare(&fa.graph(), &window_graph(&at.factors()[fa.factors[0]])));
                    print(&json!({
                        "ends": ends,
                        "factors": fa.factors,
                        "apartments": fa.apartments,
                        "vertices": fa.vertices.iter().map(|v| loc_strings(v)).collect::<Vec<_>>(),
                        "edges": fa.edges,
                        "factor_window": comparison,
                    }));
                }
            }
            Ok(Verdict::Ok)
        }
        Command::Residue { atlas, point, nonrestricted } => {
            let at = input::atlas(&atlas.tree, &atlas.product, atlas.chart_limit)?;
            let p = input::point(&at, &point)?;
            let mode = if nonrestricted { Mode::NonRestricted } else { Mode::Restricted };
            let bounds = CheckBounds::default();
            let r = residue_at(&at, &p, mode).map_err(|e| InputError(e.to_string()))?;
            let rep = r.report(&bounds).map_err(|e| InputError(e.to_string()))?;
            let verdict = if !rep.passed() {
                Verdict::Violation
            } else if rep.twinning.inconclusive() > 0 || rep.checks.iter().any(|c| c.inconclusive > 0) {
                Verdict::Inconclusive
            } else {
                Verdict::Ok
            };
            print(&json!({"bounds": bounds_json(&at, &bounds), "residue": rep}));
            Ok(verdict)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(v) => ExitCode::from(v.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

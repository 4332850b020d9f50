use clap::{Args, Parser, Subcommand};
use okcaps::algcap::{
    alg_caps_seq, alg_minimizers, asym_summary, delpezzo_route, PolarizedSurface,
};
use okcaps::apps::{eef_curve, embed_verdict, staircase_verdict, Target, DEFAULT_KMAX};
use okcaps::exactgeom::{int, parse_rat, to_f64, Rat};
use okcaps::io::{
    caps_csv, eef_csv, from_json, parse_divisor, parse_weights, to_json, AlgcapJson, AsymJson,
    DomainJson, NOBodyJson, StaircaseJson, SurfaceJson, TreeJson, VerdictJson, ZariskiJson,
};
use okcaps::moment::{reconstruct, wt_concave, wt_convex, MomentDomain, WeightTree};
use okcaps::okounkov::no_body;
use okcaps::picard::{zariski, SurfaceModel};
use okcaps::svg::{polygon_svg, polyline_svg};
use okcaps::toric_ech::{ball_caps, ech_caps, ellipsoid_caps, CapacitySeq};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "okcaps",
    version,
    about = "Capacities, weight sequences and Newton-Okounkov bodies of rational surfaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight sequence of a moment domain
    Wt(WtArgs),
    /// ECH capacities of a toric domain, as CSV k,c_k
    Ech(EchArgs),
    /// Algebraic capacities of a polarized surface
    Algcap(AlgcapArgs),
    /// Zariski decomposition of a divisor
    Zariski(ZariskiArgs),
    /// Newton-Okounkov body for a flag on a negative curve
    Nobody(NobodyArgs),
    /// Capacity test for embedding a concave domain into a target
    Embed(EmbedArgs),
    /// Discriminant test for infinite staircases
    Staircase(StaircaseArgs),
    /// Lower bounds for the ellipsoid embedding function, as CSV
    Eef(EefArgs),
    /// Weyl-law error terms over a range of k
    Asym(AsymArgs),
}

#[derive(Args)]
struct WtArgs {
    /// Convex domain: JSON file or inline JSON
    #[arg(long, group = "src")]
    convex: Option<String>,
    /// Concave domain: JSON file or inline JSON
    #[arg(long, group = "src")]
    concave: Option<String>,
    /// Emit the full weight tree instead of head and weights
    #[arg(long)]
    tree: bool,
    /// Emit an SVG of the domain
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct EchArgs {
    /// Domain JSON file or inline JSON
    #[arg(long, group = "src")]
    domain: Option<String>,
    /// Ball B(c)
    #[arg(long, group = "src")]
    ball: Option<String>,
    /// Ellipsoid E(a,b), given as "a,b"
    #[arg(long, group = "src")]
    ellipsoid: Option<String>,
    /// Convex domain from a weight sequence "c;a1,...,an"
    #[arg(long, group = "src")]
    weights: Option<String>,
    #[arg(long, default_value_t = 20)]
    kmax: usize,
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    /// Blow up n general points; A defaults to -K
    #[arg(long)]
    delpezzo: Option<usize>,
    /// Polarization "c,a1,...,an" meaning cH - sum a_i E_i
    #[arg(long = "A")]
    a: Option<String>,
    /// Surface JSON file or inline JSON
    #[arg(long)]
    surface: Option<String>,
    /// Tower weight sequence "c;a1,...,an"
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args)]
struct AlgcapArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value_t = 20)]
    kmax: usize,
    /// Only this k
    #[arg(long)]
    k: Option<usize>,
    /// CSV k,c_k instead of JSON
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct ZariskiArgs {
    #[arg(long)]
    delpezzo: Option<usize>,
    /// Model JSON file or inline JSON, instead of --delpezzo
    #[arg(long)]
    model: Option<String>,
    /// Divisor "c,a1,...,an"
    #[arg(long = "D")]
    d: String,
}

#[derive(Args)]
struct NobodyArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// 1-based position of the flag curve in the model's curve list (E_1..E_n first)
    #[arg(long)]
    flag: usize,
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct EmbedArgs {
    /// Concave source domain: JSON file or inline JSON
    #[arg(long, group = "source")]
    src: Option<String>,
    /// Source ball B(c)
    #[arg(long, group = "source")]
    src_ball: Option<String>,
    /// Source ellipsoid "a,b"
    #[arg(long, group = "source")]
    src_ellipsoid: Option<String>,
    #[command(flatten)]
    target: SurfaceArgs,
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: usize,
}

#[derive(Args)]
struct StaircaseArgs {
    /// Weight sequence "c;a1,...,an"
    #[arg(long)]
    weights: String,
    /// Picard rank; defaults to n + 1
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Args)]
struct EefArgs {
    #[command(flatten)]
    target: SurfaceArgs,
    #[arg(long, default_value = "1")]
    zmin: String,
    #[arg(long, default_value = "4")]
    zmax: String,
    #[arg(long, default_value_t = 12)]
    zsteps: usize,
    #[arg(long, default_value_t = 60)]
    kmax: usize,
    /// Polyline chart instead of CSV
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct AsymArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value_t = 100)]
    klo: usize,
    #[arg(long, default_value_t = 1000)]
    khi: usize,
}

enum Fail {
    Malformed(String),
    Domain(okcaps::Error),
}

impl From<okcaps::Error> for Fail {
    fn from(e: okcaps::Error) -> Self {
        if e.is_malformed() {
            Fail::Malformed(e.to_string())
        } else {
            Fail::Domain(e)
        }
    }
}

type Out = Result<String, Fail>;

fn bad(msg: impl Into<String>) -> Fail {
    Fail::Malformed(msg.into())
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
fn read_json(arg: &str) -> Result<String, Fail> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| bad(format!("{arg}: {e}")))
    }
}

fn read_domain(arg: &str) -> Result<MomentDomain, Fail> {
    Ok(from_json::<DomainJson>(&read_json(arg)?)?.to_domain()?)
}

fn rat_pair(s: &str) -> Result<(Rat, Rat), Fail> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| bad(format!("expected a,b: {s}")))?;
    Ok((parse_rat(a.trim())?, parse_rat(b.trim())?))
}

fn surface(a: &SurfaceArgs) -> Result<PolarizedSurface, Fail> {
    match (a.delpezzo, &a.a, &a.surface, &a.weights) {
        (Some(n), None, None, None) => Ok(PolarizedSurface::anticanonical(n)?),
        (n, Some(div), None, None) => {
            let d = parse_divisor(div)?;
            let n = n.unwrap_or(d.n());
            if n != d.n() {
                return Err(bad(format!(
                    "--A has {} multiplicities but --delpezzo is {n}",
                    d.n()
                )));
            }
            let model = if n == 0 {
                SurfaceModel::plane()
            } else {
                SurfaceModel::delpezzo(n)?
            };
            Ok(PolarizedSurface::new(model, d)?)
        }
        (None, None, Some(path), None) => {
            Ok(from_json::<SurfaceJson>(&read_json(path)?)?.to_surface()?)
        }
        (None, None, None, Some(w)) => {
            let (c, ws) = parse_weights(w)?;
            Ok(PolarizedSurface::tower(c, ws)?)
        }
        _ => Err(bad(
            "give one of --delpezzo [--A], --A, --surface, --weights",
        )),
    }
}

fn target(a: &SurfaceArgs) -> Result<Target, Fail> {
    if let (Some(w), None, None, None) = (&a.weights, a.delpezzo, &a.a, &a.surface) {
        let (c, ws) = parse_weights(w)?;
        return Ok(match WeightTree::from_flat(c.clone(), &ws) {
            Ok(t) if reconstruct(&t).is_ok() => Target::Weights(t),
            _ => Target::Surface(delpezzo_route(&c, &ws)?),
        });
    }
    Ok(Target::Surface(surface(a)?))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    to_json(v) + "\n"
}

fn wt(a: &WtArgs) -> Out {
    let (d, t) = match (&a.convex, &a.concave) {
        (Some(s), None) => {
            let d = read_domain(s)?;
            let t = wt_convex(&d)?;
            (d, t)
        }
        (None, Some(s)) => {
            let d = read_domain(s)?;
            let t = wt_concave(&d)?;
            (d, t)
        }
        _ => return Err(bad("give --convex or --concave")),
    };
    if a.svg {
        return Ok(polygon_svg(&d.ring()));
    }
    Ok(json(&if a.tree {
        TreeJson::of(&t)
    } else {
        TreeJson::flat(&t)
    }))
}

fn ech(a: &EchArgs) -> Out {
    let caps: CapacitySeq = match (&a.domain, &a.ball, &a.ellipsoid, &a.weights) {
        (Some(s), ..) => ech_caps(&read_domain(s)?, a.kmax)?,
        (_, Some(c), ..) => ball_caps(&parse_rat(c)?, a.kmax)?,
        (_, _, Some(e), _) => {
            let (x, y) = rat_pair(e)?;
            ellipsoid_caps(&x, &y, a.kmax)?
        }
        (.., Some(w)) => {
            let (c, ws) = parse_weights(w)?;
            let d = reconstruct(&WeightTree::from_flat(c, &ws)?)?;
            ech_caps(&d, a.kmax)?
        }
        _ => return Err(bad("give one of --domain, --ball, --ellipsoid, --weights")),
    };
    Ok(caps_csv(&caps))
}

fn algcap(a: &AlgcapArgs) -> Out {
    if let (Some(w), None, None, None) = (
        &a.surface.weights,
        a.surface.delpezzo,
        &a.surface.a,
        &a.surface.surface,
    ) {
        if a.csv {
            let (c, ws) = parse_weights(w)?;
            return Ok(caps_csv(&alg_caps_seq(&c, &ws, a.kmax)?.0));
        }
    }
    let s = surface(&a.surface)?;
    let kmax = a.k.unwrap_or(a.kmax);
    let rows = alg_minimizers(&s, kmax)?;
    if a.csv {
        return Ok(caps_csv(&CapacitySeq::new(
            "alg",
            rows.into_iter().map(|(v, _)| v).collect(),
        )));
    }
    let recs: Vec<AlgcapJson> = rows
        .iter()
        .enumerate()
        .map(|(k, (v, d))| AlgcapJson::of(k, v, d))
        .collect();
    Ok(match a.k {
        Some(k) => json(&recs[k]),
        None => json(&recs),
    })
}

fn zariski_cmd(a: &ZariskiArgs) -> Out {
    let d = parse_divisor(&a.d)?;
    let model = match (&a.model, a.delpezzo) {
        (Some(m), None) => from_json::<okcaps::io::ModelJson>(&read_json(m)?)?.to_model()?,
        (None, n) => {
            let n = n.unwrap_or(d.n());
            if n == 0 {
                SurfaceModel::plane()
            } else {
                SurfaceModel::delpezzo(n)?
            }
        }
        _ => return Err(bad("give --delpezzo or --model, not both")),
    };
    if model.n() != d.n() {
        return Err(bad(format!(
            "--D has {} multiplicities, model has {}",
            d.n(),
            model.n()
        )));
    }
    Ok(json(&ZariskiJson::of(&zariski(&d, &model)?, &model)))
}

fn nobody(a: &NobodyArgs) -> Out {
    let s = surface(&a.surface)?;
    if a.flag == 0 {
        return Err(bad("--flag is 1-based"));
    }
    let b = no_body(&s, a.flag - 1)?;
    if a.svg {
        let p = b.polygon()?;
        return Ok(polygon_svg(p.vertices()));
    }
    Ok(json(&NOBodyJson::of(&b, s.model())))
}

fn embed(a: &EmbedArgs) -> Out {
    let src = match (&a.src, &a.src_ball, &a.src_ellipsoid) {
        (Some(s), ..) => read_domain(s)?,
        (_, Some(c), _) => MomentDomain::delta(parse_rat(c)?),
        (.., Some(e)) => {
            let (x, y) = rat_pair(e)?;
            MomentDomain::ellipsoid(x, y)
        }
        _ => return Err(bad("give one of --src, --src-ball, --src-ellipsoid")),
    };
    Ok(json(&VerdictJson::of(&embed_verdict(
        &src,
        &target(&a.target)?,
        a.kmax,
    )?)))
}

fn staircase(a: &StaircaseArgs) -> Out {
    let (c, ws) = parse_weights(&a.weights)?;
    let r = a.rank.unwrap_or(ws.len() + 1);
    Ok(json(&StaircaseJson::of(&staircase_verdict(
        &WeightTree::sequence(c, &ws),
        r,
    )?)))
}

fn eef(a: &EefArgs) -> Out {
    let (lo, hi) = (parse_rat(&a.zmin)?, parse_rat(&a.zmax)?);
    if a.zsteps == 0 || hi < lo {
        return Err(bad("need zsteps > 0 and zmin <= zmax"));
    }
    let step = (&hi - &lo) / int(a.zsteps as i64);
    let zs: Vec<Rat> = (0..=a.zsteps)
        .map(|i| &lo + &step * int(i as i64))
        .collect();
    let rows = eef_curve(&target(&a.target)?, &zs, a.kmax)?;
    if a.svg {
        let pts: Vec<(f64, f64)> = rows.iter().map(|b| (to_f64(&b.z), to_f64(&b.lo))).collect();
        return Ok(polyline_svg(&pts));
    }
    Ok(eef_csv(&rows))
}

fn asym(a: &AsymArgs) -> Out {
    Ok(json(&AsymJson::of(&asym_summary(
        &surface(&a.surface)?,
        a.klo,
        a.khi,
    )?)))
}

fn run(cmd: &Cmd) -> Out {
    match cmd {
        Cmd::Wt(a) => wt(a),
        Cmd::Ech(a) => ech(a),
        Cmd::Algcap(a) => algcap(a),
        Cmd::Zariski(a) => zariski_cmd(a),
        Cmd::Nobody(a) => nobody(a),
        Cmd::Embed(a) => embed(a),
        Cmd::Staircase(a) => staircase(a),
        Cmd::Eef(a) => eef(a),
        Cmd::Asym(a) => asym(a),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("OKCAPS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        okcaps::par::init_threads(n);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Fail::Malformed(m)) => {
            eprintln!("{}", error_json("malformed_input", &m));
            ExitCode::from(1)
        }
        Err(Fail::Domain(e)) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(2)
        }
    }
}

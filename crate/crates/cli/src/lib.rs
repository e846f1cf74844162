//! The `amc` command line: argument parsing, JSON/text rendering, certificate
//! verification and the fixture corpus runner.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! text that would go to stdout and stderr, so the binary and the tests share
//! one code path.

use std::fs;
use std::path::{Path, PathBuf};

use amc_core::binform::{apolar_ideal, multiplicity_type, point_to_form, rnc_rank, BinaryForm, ProjPoint};
use amc_core::curvegen::{SchemeSpec, Target};
use amc_core::groebner::{buchberger, GbCaps, GbError};
use amc_core::poly::{MonomialOrder, Poly, Ring};
use amc_core::qmap::{rank3_harvest, HarvestConfig};
use amc_core::quadrics::QuadraticForm;
use amc_core::rankindex::{
    certify_qr, conjecture_scan, delta, rank_index, verify_obstruction, verify_qr, Budget, Conjecture,
    ObstructionCertificate, QrCertificate, QrOutcome,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "amc", version, about = "Apolarity, projected rational normal curves and quadratic rank certificates")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Without a value: re-validate the certificates this run produces. With
    /// `--verify=FILE` (or `--verify=-` for stdin): only re-validate the
    /// certificates in it.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, value_name = "FILE")]
    verify: Option<Option<PathBuf>>,
}

#[derive(Args, Debug, Clone, Default)]
struct SchemeArgs {
    /// Scheme descriptor such as `monomial:6,3`, `point:0,0,1,0,1,0,0`,
    /// `apolar:S^3-S*T^2,T^5`, `scroll:1,4`, `rnc:6`, `union:...`.
    #[arg(long)]
    scheme: Option<String>,
    /// Projection center as comma separated rationals.
    #[arg(long)]
    point: Option<String>,
    /// Apolar generators `g1,g2` of the center.
    #[arg(long)]
    apolar: Option<String>,
    /// Coordinate center, e.g. `d=6,c=3`.
    #[arg(long)]
    monomial_center: Option<String>,
    /// Rational normal curve of this degree.
    #[arg(long)]
    rnc: Option<usize>,
    /// Rational normal surface scroll `a,b`.
    #[arg(long)]
    scroll: Option<String>,
    /// Curve plus trisecant line for a center of rank three.
    #[arg(long)]
    union_point: Option<String>,
}

impl SchemeArgs {
    fn spec(&self) -> Result<SchemeSpec, String> {
        let mut picks: Vec<String> = Vec::new();
        if let Some(s) = &self.scheme {
            picks.push(s.clone());
        }
        if let Some(s) = &self.point {
            picks.push(format!("point:{s}"));
        }
        if let Some(s) = &self.apolar {
            picks.push(format!("apolar:{s}"));
        }
        if let Some(s) = &self.monomial_center {
            picks.push(format!("monomial:{s}"));
        }
        if let Some(d) = self.rnc {
            picks.push(format!("rnc:{d}"));
        }
        if let Some(s) = &self.scroll {
            picks.push(format!("scroll:{s}"));
        }
        if let Some(s) = &self.union_point {
            picks.push(format!("union:{s}"));
        }
        match picks.as_slice() {
            [one] => SchemeSpec::parse(one).map_err(|e| e.to_string()),
            [] => Err("give one scheme: --scheme, --point, --apolar, --monomial-center, --rnc, --scroll or --union-point".into()),
            _ => Err("give exactly one scheme option".into()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apolar ideal (g1, g2) of a point or a form.
    Apolar {
        #[arg(long)]
        point: Option<String>,
        /// Form in divided-power-free monomial coefficients, written in s, t.
        #[arg(long)]
        form: Option<String>,
    },
    /// Rank of a point with respect to the rational normal curve.
    Rank {
        #[arg(long)]
        point: String,
    },
    /// Parametrization of a projected curve.
    Param {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Basis of the quadrics in the ideal.
    Gens {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Reduced Gröbner basis of an ideal.
    Gb {
        /// Comma separated variable names.
        #[arg(long)]
        vars: String,
        /// `grevlex`, `lex` or `elim:<k>`.
        #[arg(long, default_value = "grevlex")]
        order: String,
        /// Generators separated by `;`.
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        max_pairs: Option<usize>,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Rank and symmetric matrix of a quadric.
    Quad {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        quadric: String,
    },
    /// Independent quadrics of rank at most k in the ideal.
    Harvest {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Bounds on the span of the rank <= t quadrics.
    Delta {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 3)]
        t: usize,
    },
    /// Decide QR(k) with a certificate.
    Certify {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Smallest k with QR(k).
    RankIndex {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Sampled QR(3) runs over random rational centers.
    Scan {
        /// `1.2` or `1.4`.
        #[arg(long)]
        conjecture: String,
        /// Degree range such as `5..8` or a single degree.
        #[arg(long, default_value = "5..8")]
        d: String,
        #[arg(long, default_value_t = 6)]
        samples: usize,
    },
    /// Replay the example corpus and report pass/fail per item.
    Fixtures {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// Exit code and JSON body produced by a command.
struct Reply {
    code: i32,
    body: Value,
}

fn reply(code: i32, body: Value) -> Result<Reply, Failure> {
    Ok(Reply { code, body })
}

enum Failure {
    Usage(String),
    Cap(String),
    Other(String),
}

fn usage<E: ToString>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn other<E: ToString>(e: E) -> Failure {
    Failure::Other(e.to_string())
}

/// Directory of the shipped example corpus.
pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_DECIDED,
                _ => EXIT_USAGE,
            };
            let (stdout, stderr) = if code == EXIT_DECIDED {
                (e.to_string(), String::new())
            } else {
                (String::new(), e.to_string())
            };
            return Outcome { code, stdout, stderr };
        }
    };
    if let Some(Some(path)) = &cli.verify {
        return finish(&cli, verify_file(path));
    }
    let result = dispatch(&cli).map(|mut r| {
        if matches!(cli.verify, Some(None)) {
            let (n, failures) = verify_value(&r.body);
            if let Value::Object(map) = &mut r.body {
                map.insert("verified".into(), json!(failures.is_empty()));
                map.insert("verified_certificates".into(), json!(n));
                if !failures.is_empty() {
                    map.insert("verification_failures".into(), json!(failures));
                }
            }
            if !failures.is_empty() {
                r.code = EXIT_FAILED;
            }
        }
        r
    });
    finish(&cli, result)
}

fn finish(cli: &Cli, result: Result<Reply, Failure>) -> Outcome {
    match result {
        Ok(r) => Outcome {
            code: r.code,
            stdout: if cli.text { render_text(&r.body) } else { pretty(&r.body) },
            stderr: String::new(),
        },
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Cap(m) => (EXIT_RESOURCE_CAP, m),
                Failure::Other(m) => (EXIT_FAILED, m),
            };
            Outcome {
                code,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = v else {
        return pretty(v);
    };
    for (k, val) in map {
        let line = match val {
            Value::String(s) => s.clone(),
            Value::Number(_) | Value::Bool(_) | Value::Null => val.to_string(),
            Value::Array(items) if items.iter().all(Value::is_string) => items
                .iter()
                .filter_map(Value::as_str)
                .collect::<Vec<_>>()
                .join("\n  "),
            Value::Array(items) => format!("{} entries", items.len()),
            Value::Object(inner) => inner
                .iter()
                .filter(|(_, x)| !x.is_array())
                .map(|(a, b)| format!("{a}={}", b.as_str().map(str::to_string).unwrap_or_else(|| b.to_string())))
                .collect::<Vec<_>>()
                .join(" "),
        };
        out.push_str(&format!("{k}: {line}\n"));
    }
    out
}

fn budget(cli: &Cli) -> Result<Budget, Failure> {
    Ok(Budget::from_env().map_err(usage)?.with_seed(cli.seed))
}

fn dispatch(cli: &Cli) -> Result<Reply, Failure> {
    let Some(command) = &cli.command else {
        return Err(usage("missing command (try --help)"));
    };
    match command {
        Command::Apolar { point, form } => {
            let f = match (point, form) {
                (Some(p), None) => point_to_form(&ProjPoint::parse(p).map_err(usage)?),
                (None, Some(f)) => BinaryForm::parse(f).map_err(usage)?,
                _ => return Err(usage("give exactly one of --point and --form")),
            };
            let pair = apolar_ideal(&f).map_err(usage)?;
            let mut body = json!({
                "command": "apolar",
                "d": pair.d,
                "g1": pair.g1.to_string(),
                "g2": pair.g2.to_string(),
                "d1": pair.d1(),
                "d2": pair.d2(),
                "rank": pair.d1(),
            });
            if pair.d1() == 3 {
                body["multiplicity_type"] = json!(multiplicity_type(&pair).map_err(other)?.to_string());
            }
            reply(EXIT_DECIDED, body)
        }
        Command::Rank { point } => {
            let p = ProjPoint::parse(point).map_err(usage)?;
            reply(EXIT_DECIDED, json!({"command": "rank", "point": p.to_text(), "rank": rnc_rank(&p)}))
        }
        Command::Param { scheme } => {
            let spec = scheme.spec().map_err(usage)?;
            let t = Target::build(&spec).map_err(usage)?;
            let sys = t.system.as_ref().ok_or_else(|| usage("this scheme has no curve parametrization"))?;
            let comps: Vec<String> = sys.forms().iter().map(|f| f.display_with("s", "t")).collect();
            let mut body = json!({
                "command": "param",
                "scheme": spec.to_string(),
                "degree": sys.degree(),
                "coordinates": t.ring.vars(),
                "components": comps,
            });
            if let Some((a, b)) = t.scroll_type() {
                body["scroll"] = json!([a, b]);
            }
            reply(EXIT_DECIDED, body)
        }
        Command::Gens { scheme } => {
            let spec = scheme.spec().map_err(usage)?;
            let t = Target::build(&spec).map_err(usage)?;
            let ranks: Vec<usize> = t
                .basis
                .iter()
                .map(|q| amc_core::quadrics::quad_rank(q).map_err(other))
                .collect::<Result<_, _>>()?;
            reply(
                EXIT_DECIDED,
                json!({
                    "command": "gens",
                    "scheme": spec.to_string(),
                    "coordinates": t.ring.vars(),
                    "dim_i2": t.dim_i2(),
                    "quadrics": t.basis.iter().map(Poly::to_string).collect::<Vec<_>>(),
                    "ranks": ranks,
                }),
            )
        }
        Command::Gb {
            vars,
            order,
            ideal,
            max_pairs,
            max_degree,
        } => {
            let order = MonomialOrder::parse(order).map_err(usage)?;
            let ring = Ring::new(vars.split(',').map(str::trim), order).map_err(usage)?;
            let gens: Vec<Poly> = ideal
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| Poly::parse(s, &ring))
                .collect::<Result<_, _>>()
                .map_err(usage)?;
            let mut caps = GbCaps::default();
            if let Some(p) = max_pairs {
                caps.max_pairs = *p;
            }
            if let Some(d) = max_degree {
                caps.max_degree = *d;
            }
            match buchberger(&gens, &ring, caps) {
                Ok(gb) => reply(
                    EXIT_DECIDED,
                    json!({
                        "command": "gb",
                        "order": order.to_string(),
                        "basis": gb.gens().iter().map(Poly::to_string).collect::<Vec<_>>(),
                        "unit": gb.is_unit(),
                        "stats": gb.stats,
                    }),
                ),
                Err(GbError::Inconclusive(why)) => Err(Failure::Cap(why)),
                Err(e) => Err(other(e)),
            }
        }
        Command::Quad { vars, quadric } => {
            let ring = Ring::new(vars.split(',').map(str::trim), MonomialOrder::DegRevLex).map_err(usage)?;
            let q = Poly::parse(quadric, &ring).map_err(usage)?;
            let f = QuadraticForm::from_poly(&q).map_err(usage)?;
            let m: Vec<Vec<String>> = f
                .matrix()
                .iter()
                .map(|r| r.iter().map(amc_core::poly::format_rat).collect())
                .collect();
            reply(
                EXIT_DECIDED,
                json!({"command": "quad", "quadric": q.to_string(), "rank": f.rank().map_err(other)?, "matrix": m}),
            )
        }
        Command::Harvest { scheme, k, samples } => {
            let spec = scheme.spec().map_err(usage)?;
            let t = Target::build(&spec).map_err(usage)?;
            let b = budget(cli)?;
            let cfg = HarvestConfig {
                max_samples: samples.unwrap_or(b.harvest_samples),
                seed: cli.seed,
                exec: b.exec,
            };
            let h = rank3_harvest(&t, *k, &cfg);
            let items: Vec<Value> = h
                .items
                .iter()
                .map(|it| json!({"quadric": it.quadric.to_string(), "origin": it.origin}))
                .collect();
            reply(
                if h.complete() { EXIT_DECIDED } else { EXIT_INCONCLUSIVE },
                json!({
                    "command": "harvest",
                    "scheme": spec.to_string(),
                    "k": k,
                    "span": h.span(),
                    "dim_i2": h.goal,
                    "complete": h.complete(),
                    "samples": h.samples,
                    "items": items,
                }),
            )
        }
        Command::Delta { scheme, t } => {
            let spec = scheme.spec().map_err(usage)?;
            let r = delta(&spec, *t, &budget(cli)?).map_err(other)?;
            let code = if r.bounds.exact { EXIT_DECIDED } else { EXIT_INCONCLUSIVE };
            let mut body = json!({"command": "delta"});
            merge(&mut body, serde_json::to_value(&r).map_err(other)?);
            reply(code, body)
        }
        Command::Certify { scheme, k } => {
            let spec = scheme.spec().map_err(usage)?;
            let out = certify_qr(&spec, *k, &budget(cli)?).map_err(other)?;
            let code = outcome_code(&out);
            let mut body = json!({"command": "certify"});
            merge(&mut body, serde_json::to_value(&out).map_err(other)?);
            reply(code, body)
        }
        Command::RankIndex { scheme } => {
            let spec = scheme.spec().map_err(usage)?;
            let r = rank_index(&spec, &budget(cli)?).map_err(other)?;
            let code = match r.value() {
                Some(_) => EXIT_DECIDED,
                None => r.levels.iter().map(outcome_code).max().unwrap_or(EXIT_INCONCLUSIVE).max(EXIT_INCONCLUSIVE),
            };
            let mut body = json!({"command": "rank-index", "rank_index": r.value()});
            merge(&mut body, serde_json::to_value(&r).map_err(other)?);
            reply(code, body)
        }
        Command::Scan { conjecture, d, samples } => {
            let conj = Conjecture::parse(conjecture).ok_or_else(|| usage(format!("unknown conjecture `{conjecture}`")))?;
            let range = parse_range(d).map_err(usage)?;
            let r = conjecture_scan(conj, range, *samples, &budget(cli)?).map_err(other)?;
            let mut body = json!({"command": "scan"});
            merge(&mut body, serde_json::to_value(&r).map_err(other)?);
            reply(EXIT_DECIDED, body)
        }
        Command::Fixtures { dir } => {
            let dir = dir.clone().unwrap_or_else(default_fixture_dir);
            let report = run_fixtures(&dir, cli.seed).map_err(other)?;
            let code = if report["failed"] == json!(0) { EXIT_DECIDED } else { EXIT_FAILED };
            reply(code, report)
        }
    }
}

fn outcome_code(out: &QrOutcome) -> i32 {
    match out {
        QrOutcome::Holds(_) | QrOutcome::Fails(_) => EXIT_DECIDED,
        QrOutcome::Inconclusive(p) if p.capped => EXIT_RESOURCE_CAP,
        QrOutcome::Inconclusive(_) => EXIT_INCONCLUSIVE,
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    let bad = || format!("bad degree range `{text}`");
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (text, text),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

// ---------------------------------------------------------------------------
// Verification

/// Finds every certificate object (one carrying `cert_version`) in a JSON value
/// and re-validates it. Returns the number found and the failure messages.
pub fn verify_value(v: &Value) -> (usize, Vec<String>) {
    let mut found = 0;
    let mut failures = Vec::new();
    walk_certificates(v, &mut |obj| {
        found += 1;
        if let Err(e) = verify_object(obj) {
            failures.push(e);
        }
    });
    (found, failures)
}

fn walk_certificates(v: &Value, f: &mut dyn FnMut(&Value)) {
    match v {
        Value::Object(map) => {
            if map.contains_key("cert_version") {
                f(v);
            } else {
                map.values().for_each(|x| walk_certificates(x, f));
            }
        }
        Value::Array(items) => items.iter().for_each(|x| walk_certificates(x, f)),
        _ => {}
    }
}

fn verify_object(obj: &Value) -> Result<(), String> {
    let has = |k: &str| obj.get(k).is_some();
    if has("basis_matrix") {
        let c: QrCertificate = serde_json::from_value(obj.clone()).map_err(|e| e.to_string())?;
        verify_qr(&c)
    } else if has("forms") && has("frames") {
        let c: ObstructionCertificate = serde_json::from_value(obj.clone()).map_err(|e| e.to_string())?;
        verify_obstruction(&c)
    } else {
        Err("object with cert_version is neither kind of certificate".into())
    }
}

fn verify_file(path: &Path) -> Result<Reply, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(usage)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    let v: Value = serde_json::from_str(&text).map_err(usage)?;
    let (n, failures) = verify_value(&v);
    let ok = n > 0 && failures.is_empty();
    reply(
        if ok { EXIT_DECIDED } else { EXIT_FAILED },
        json!({"command": "verify", "certificates": n, "valid": ok, "failures": failures}),
    )
}

// ---------------------------------------------------------------------------
// Fixture corpus

/// Runs every item of every `*.json` file in `dir` (in file-name order) with
/// the given seed. Items look like
/// `{"id": .., "args": [..], "exit": 0, "expect": {"/json/pointer": value}}`.
pub fn run_fixtures(dir: &Path, seed: u64) -> Result<Value, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut results = Vec::new();
    let (mut passed, mut failed) = (0usize, 0usize);
    for file in &files {
        let text = fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", file.display()))?;
        let items = doc["items"].as_array().ok_or_else(|| format!("{}: missing items", file.display()))?;
        for item in items {
            let id = item["id"].as_str().unwrap_or("?").to_string();
            let args: Vec<String> = item["args"]
                .as_array()
                .map(|a| a.iter().filter_map(|x| x.as_str().map(str::to_string)).collect())
                .unwrap_or_default();
            let mut argv = vec!["amc".to_string()];
            argv.extend(args);
            argv.extend(["--json".to_string(), "--seed".to_string(), seed.to_string()]);
            let out = run(argv);
            let output: Value = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
            let mut problems = Vec::new();
            let want_exit = item["exit"].as_i64().unwrap_or(0) as i32;
            if out.code != want_exit {
                problems.push(format!("exit {} (expected {want_exit}) {}", out.code, out.stderr.trim()));
            }
            if let Some(expect) = item["expect"].as_object() {
                for (ptr, want) in expect {
                    match output.pointer(ptr) {
                        Some(got) if got == want => {}
                        got => problems.push(format!("{ptr}: got {}, expected {want}", got.unwrap_or(&Value::Null))),
                    }
                }
            }
            let pass = problems.is_empty();
            if pass {
                passed += 1;
            } else {
                failed += 1;
            }
            results.push(json!({
                "id": id,
                "basis": item["basis"].clone(),
                "pass": pass,
                "problems": problems,
                "exit": out.code,
                "output": output,
            }));
        }
    }
    Ok(json!({
        "command": "fixtures",
        "seed": seed,
        "passed": passed,
        "failed": failed,
        "items": results,
    }))
}

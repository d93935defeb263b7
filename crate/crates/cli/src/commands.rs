use std::io::Write;
use std::str::FromStr;

use anyhow::Result;
use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use yaglom_core::bounds::{
    emit_curve, region_residual, sample_grid, CurveKind, CurveParams, TvzParams, LARGE_TVZ_PRIME,
};
use yaglom_core::constructor::{
    greedy_gilbert, lee_bch, rs_code, to_spherical, DistanceReport, Metric,
};
use yaglom_core::euclid::{min_sq_distance_words, sq_euclid_distance};
use yaglom_core::{verify, ConcatenatedCode, Constellation, Error, LinearCode, Word};

use crate::output::{self, num, Format, Table};
use crate::{BoundsArgs, BuildArgs, Cli, Command, RegionArgs, VerifyArgs};

/// Gilbert codes up to this size get an exhaustive pairwise distance scan.
const PAIRWISE_LIMIT: usize = 4000;

/// Largest linear codebook listed in full.
const LIST_LIMIT: u64 = 100_000;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::Usage(msg.into()).into()
}

/// Exit status for an error: 2 for bad input, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Usage(_) | Error::Domain(_)) => 2,
        _ if e.downcast_ref::<clap::Error>().is_some() => 2,
        _ => 1,
    }
}

/// Returns `Ok(false)` when verification ran and something failed.
pub fn run(cli: Cli) -> Result<bool> {
    let out = output::open(cli.output.as_deref())?;
    match cli.command {
        Command::Bounds(args) => bounds(args, out, cli.format).map(|()| true),
        Command::Region(args) => region(args, out, cli.format).map(|()| true),
        Command::Build(args) => build(args, out, cli.format, cli.seed).map(|()| true),
        Command::Verify(args) => verify(args, out, cli.format, cli.seed),
    }
}

fn parse_prime(s: &str) -> Result<BigUint> {
    if s.eq_ignore_ascii_case("large") {
        return Ok(BigUint::from_str(LARGE_TVZ_PRIME)?);
    }
    BigUint::from_str(s.trim())
        .map_err(|_| usage(format!("--p must be a decimal integer, got '{s}'")))
}

fn tvz_params(args: &BoundsArgs) -> Result<Option<TvzParams>> {
    let Some(p) = args.p.as_deref() else {
        return Ok(None);
    };
    let p = parse_prime(p)?;
    let lambda = args.lambda.unwrap_or(1.0);
    let params = match (args.t, args.tau, u64::try_from(&p)) {
        (Some(t), None, Ok(p)) => TvzParams::new(p, t, lambda)?,
        (None, Some(tau), _) => TvzParams::with_tau(p, tau, lambda)?,
        (Some(_), Some(_), _) => return Err(usage("give either --t or --tau, not both")),
        (Some(_), None, Err(_)) => return Err(usage("--t needs a 64-bit --p; use --tau")),
        (None, None, _) => return Err(usage("tvz_line needs --t or --tau")),
    };
    Ok(Some(params))
}

#[derive(Serialize)]
struct CurveRow<'a> {
    x: f64,
    rho: Option<f64>,
    rate: f64,
    curve: &'a str,
}

fn bounds(args: BoundsArgs, out: Box<dyn Write>, format: Format) -> Result<()> {
    let kinds = args
        .kind
        .iter()
        .map(|k| CurveKind::from_str(k))
        .collect::<Result<Vec<_>, _>>()?;
    let base = CurveParams {
        q: args.q,
        tvz: tvz_params(&args)?,
        c: None,
        lambda: args.lambda,
    };
    let mut table = Table::new(out, format, &["x", "rho", "rate", "curve"]);
    for kind in kinds {
        let runs: Vec<(CurveParams, String)> = if kind == CurveKind::Envelope && args.c.len() > 1 {
            args.c
                .iter()
                .map(|&c| {
                    (
                        CurveParams {
                            c: Some(c),
                            ..base.clone()
                        },
                        format!("envelope[c={c}]"),
                    )
                })
                .collect()
        } else {
            vec![(
                CurveParams {
                    c: args.c.first().copied(),
                    ..base.clone()
                },
                kind.to_string(),
            )]
        };
        for (params, label) in runs {
            for pt in emit_curve(kind, &params, args.x_min, args.x_max, args.samples)? {
                let rho = pt.rho();
                table.row(
                    &[
                        num(pt.x),
                        rho.map(num).unwrap_or_default(),
                        num(pt.rate),
                        label.clone(),
                    ],
                    &CurveRow {
                        x: pt.x,
                        rho,
                        rate: pt.rate,
                        curve: &label,
                    },
                )?;
            }
        }
    }
    table.finish()
}

#[derive(Serialize)]
struct RegionRow {
    x: f64,
    y: f64,
    residual: f64,
    feasible: bool,
}

fn region(args: RegionArgs, out: Box<dyn Write>, format: Format) -> Result<()> {
    if !(args.x_min <= args.x_max && args.x_max < 1.0) {
        return Err(usage("region needs x-min <= x-max < 1"));
    }
    if !(0.0 < args.y_min && args.y_min <= args.y_max) {
        return Err(usage("region needs 0 < y-min <= y-max"));
    }
    if args.nx == 0 || args.ny == 0 {
        return Err(usage("grid sizes must be positive"));
    }
    let mut table = Table::new(out, format, &["x", "y", "residual", "feasible"]);
    for x in sample_grid(args.x_min, args.x_max, args.nx) {
        for y in sample_grid(args.y_min, args.y_max, args.ny) {
            let residual = region_residual(x, y, args.lambda)?;
            let feasible = residual <= 0.0;
            table.row(
                &[num(x), num(y), num(residual), feasible.to_string()],
                &RegionRow {
                    x,
                    y,
                    residual,
                    feasible,
                },
            )?;
        }
    }
    table.finish()
}

/// What `build` reports about a code.
#[derive(Debug, Serialize)]
struct BuildSummary {
    construction: String,
    q: u32,
    n: usize,
    size: Option<u64>,
    log2_size: f64,
    floor: u64,
    min_sq_distance: u64,
    distance_method: &'static str,
    distance_pairs: u64,
    spherical_points: usize,
    rho: Option<f64>,
    guaranteed_rho: f64,
    binary_rate: f64,
}

struct Built {
    construction: String,
    constellation: Constellation,
    n: usize,
    size: Option<u64>,
    log2_size: f64,
    floor: u64,
    distance: DistanceReport,
    /// Codewords lifted to the sphere: all of them, or a seeded sample.
    lifted: Vec<Word>,
}

fn need<T>(v: Option<T>, flag: &str, what: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("{what} needs --{flag}")))
}

fn build(args: BuildArgs, out: Box<dyn Write>, format: Format, seed: u64) -> Result<()> {
    let built = if args.gilbert {
        build_gilbert(&args, seed)?
    } else if args.inner.is_some() {
        build_bch(&args, seed)?
    } else {
        return Err(usage("build needs --gilbert or --inner bch [--outer rs]"));
    };
    let sph = to_spherical(&built.constellation, &built.lifted, built.floor)?;
    let summary = BuildSummary {
        construction: built.construction,
        q: built.constellation.q(),
        n: built.n,
        size: built.size,
        log2_size: built.log2_size,
        floor: built.floor,
        min_sq_distance: built.distance.min_sq_distance,
        distance_method: if built.distance.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        },
        distance_pairs: built.distance.pairs,
        spherical_points: sph.len(),
        rho: sph.rho,
        guaranteed_rho: sph.guaranteed_rho,
        binary_rate: built.log2_size / (built.n + 1) as f64,
    };
    write_summary(out, format, &summary)?;
    if let Some(path) = &args.points {
        let mut w = output::open(Some(path))?;
        for p in &sph.points {
            let row: Vec<String> = p.coords().iter().map(|&c| num(c)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn write_summary(mut out: Box<dyn Write>, format: Format, s: &BuildSummary) -> Result<()> {
    match format {
        Format::Jsonl => writeln!(out, "{}", serde_json::to_string(s)?)?,
        Format::Csv => {
            let value = serde_json::to_value(s)?;
            let obj = value.as_object().expect("summary is a struct");
            writeln!(out, "key,value")?;
            for (k, v) in obj {
                let v = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Null => String::new(),
                    other => other.to_string(),
                };
                writeln!(out, "{k},{v}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn build_gilbert(args: &BuildArgs, seed: u64) -> Result<Built> {
    let what = "--gilbert";
    let q = need(args.q, "q", what)?;
    let n = need(args.n, "n", what)?;
    let d = need(args.d, "d", what)?;
    let words = greedy_gilbert(q, n, d)?;
    let c = Constellation::new(q)?;
    let distance = if words.len() < 2 {
        DistanceReport {
            min_sq_distance: 0,
            exhaustive: true,
            pairs: 0,
        }
    } else if words.len() <= PAIRWISE_LIMIT {
        let m = words.len() as u64;
        DistanceReport {
            min_sq_distance: min_sq_distance_words(&c, &words)?,
            exhaustive: true,
            pairs: m * (m - 1) / 2,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = u64::MAX;
        for _ in 0..args.pairs {
            let i = rng.gen_range(0..words.len());
            let j = loop {
                let j = rng.gen_range(0..words.len());
                if j != i {
                    break j;
                }
            };
            best = best.min(sq_euclid_distance(&c, &words[i], &words[j])?);
        }
        DistanceReport {
            min_sq_distance: best,
            exhaustive: false,
            pairs: args.pairs,
        }
    };
    let lifted = if words.len() <= args.sample_points {
        words.clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut idx = sample(&mut rng, words.len(), args.sample_points).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| words[i].clone()).collect()
    };
    Ok(Built {
        construction: format!("gilbert q={q} n={n} d={d}"),
        constellation: c,
        n,
        size: Some(words.len() as u64),
        log2_size: (words.len() as f64).log2(),
        floor: d,
        distance,
        lifted,
    })
}

fn build_bch(args: &BuildArgs, seed: u64) -> Result<Built> {
    let what = "--inner bch";
    let p = need(args.p, "p", what)?;
    let t = need(args.t, "t", what)?;
    let inner = lee_bch(p, t)?;
    if args.outer.is_none() {
        return build_linear(inner, p, t, args, seed);
    }
    let what = "--outer rs";
    let n_out = need(args.n_out, "n-out", what)?;
    let k_out = need(args.k_out, "k-out", what)?;
    let outer = rs_code(p, inner.dimension(), n_out, k_out)?;
    let code = ConcatenatedCode::new(outer, inner)?;
    let distance = code.measure_min_distance(args.pairs, seed)?;
    let lifted = match code.codewords() {
        Ok(all) if all.len() <= args.sample_points => all,
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let mut words = vec![Word::zero(code.len())];
            while words.len() < args.sample_points {
                words.push(code.encode(&code.random_message(&mut rng))?);
            }
            words
        }
    };
    Ok(Built {
        construction: format!("bch p={p} t={t} + rs n_out={n_out} k_out={k_out}"),
        constellation: code.constellation(),
        n: code.len(),
        size: code.size(),
        log2_size: code.dimension() as f64 * f64::from(p).log2(),
        floor: code.metric_floor(),
        distance,
        lifted,
    })
}

fn build_linear(code: LinearCode, p: u32, t: u32, args: &BuildArgs, seed: u64) -> Result<Built> {
    let min = code.min_weight(Metric::Euclidean);
    let size = code.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut lifted = Vec::new();
    match size.filter(|&s| s <= LIST_LIMIT && s as usize <= args.sample_points) {
        Some(s) => {
            let mut msg = vec![0u32; code.dimension()];
            for _ in 0..s {
                lifted.push(code.encode(&msg)?);
                for m in msg.iter_mut() {
                    *m += 1;
                    if *m < p {
                        break;
                    }
                    *m = 0;
                }
            }
        }
        None => {
            lifted.push(Word::zero(code.len()));
            while lifted.len() < args.sample_points {
                let msg: Vec<u32> = (0..code.dimension()).map(|_| rng.gen_range(0..p)).collect();
                lifted.push(code.encode(&msg)?);
            }
        }
    }
    Ok(Built {
        construction: format!("bch p={p} t={t}"),
        constellation: code.constellation(),
        n: code.len(),
        size,
        log2_size: code.dimension() as f64 * f64::from(p).log2(),
        floor: code.metric_floor(),
        distance: DistanceReport {
            min_sq_distance: min,
            exhaustive: true,
            pairs: 0,
        },
        lifted,
    })
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn verify(args: VerifyArgs, out: Box<dyn Write>, format: Format, seed: u64) -> Result<bool> {
    let selected: Vec<&verify::Criterion> = verify::CRITERIA
        .iter()
        .filter(|c| args.only.as_deref().is_none_or(|s| c.matches(s)))
        .collect();
    if selected.is_empty() {
        return Err(usage(format!(
            "no criterion matches '{}'",
            args.only.unwrap_or_default()
        )));
    }
    let mut table = Table::new(
        out,
        format,
        &["id", "name", "pass", "elapsed_secs", "detail"],
    );
    let mut failed = Vec::new();
    for c in selected {
        let r = c.run(seed);
        eprintln!("{r}");
        table.row(
            &[
                r.id.to_string(),
                r.name.to_string(),
                r.pass.to_string(),
                num(r.elapsed.as_secs_f64()),
                csv_quote(&r.detail),
            ],
            &r,
        )?;
        if !r.pass {
            failed.push(format!("{} ({})", r.id, r.name));
        }
    }
    table.finish()?;
    if failed.is_empty() {
        Ok(true)
    } else {
        eprintln!("verification failed: {}", failed.join(", "));
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyhow::anyhow;

    #[test]
    fn prime_literals() {
        assert_eq!(parse_prime("7").unwrap(), BigUint::from(7u32));
        assert_eq!(parse_prime("large").unwrap().to_string().len(), 137);
        assert!(parse_prime("seven").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&usage("x")), 2);
        assert_eq!(exit_code(&Error::Domain("x".into()).into()), 2);
        assert_eq!(exit_code(&Error::Numeric("x".into()).into()), 1);
        assert_eq!(exit_code(&anyhow!("io")), 1);
    }
}

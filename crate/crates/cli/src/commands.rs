use std::fs;
use std::io::{self, Write};
use std::path::Path;

use convrep::enlargements::{t_breve, t_se, transport, Biggest, Enlargement, EnlargementSet, EpsSubdifferential};
use convrep::io::{
    write_convergence_log, write_enlargement_json, write_grid_csv, write_members_csv, write_surface_csv,
};
use convrep::iteration::{a_iterate, autoconjugate_check, qc_check, stopping_bound};
use convrep::representations::{fenchel_young, fenchel_young_grid, fitzpatrick, mix, sigma};
use convrep::suite::{run_all, Lab};
use convrep::transforms::conjugate_with;
use convrep::{BifunctionGrid, BuiltinFunction, Config, FunctionSpec};
use serde_json::json;

use crate::{Cli, Command, HChoice, Kind};

pub enum Failure {
    /// A check ran and did not pass.
    Check(String),
    /// Bad flags, bad input or a failed computation.
    Usage(String),
}

impl From<convrep::Error> for Failure {
    fn from(e: convrep::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Rejects flags the command does not read.
fn only(cli: &Cli, name: &str, allowed: &[&str]) -> Outcome {
    let given = [
        ("epsilon", cli.epsilon.is_some()),
        ("x", cli.x.is_some()),
        ("kind", cli.kind.is_some()),
        ("h", cli.h.is_some()),
        ("max-iter", cli.max_iter.is_some()),
        ("tol", cli.tol.is_some()),
    ];
    for (flag, set) in given {
        if set && !allowed.contains(&flag) {
            return Err(usage(format!("--{flag} does not apply to `{name}`")));
        }
    }
    Ok(())
}

fn emit(output: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> convrep::Result<()>) -> Outcome {
    match output {
        Some(p) => {
            let mut f = io::BufWriter::new(fs::File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?);
            write(&mut f)?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    Ok(())
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    Ok(match &cli.config {
        Some(p) => Config::from_path(p)?,
        None => Config::standard(),
    })
}

fn parse_point(s: &str, d: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("{what}: expected {d} comma-separated numbers, got {s:?}")))?;
    if v.len() != d || v.iter().any(|c| !c.is_finite()) {
        return Err(usage(format!("{what}: expected {d} finite coordinates, got {s:?}")));
    }
    Ok(v)
}

fn epsilon(cli: &Cli, default: f64) -> Result<f64, Failure> {
    let e = cli.epsilon.unwrap_or(default);
    if e >= 0.0 && e.is_finite() {
        Ok(e)
    } else {
        Err(usage(format!("--epsilon must be >= 0, got {e}")))
    }
}

fn fenchel_young_of(cfg: &Config) -> Result<BifunctionGrid, Failure> {
    let opts = cfg.tolerances.transform_options();
    match &cfg.function {
        Some(FunctionSpec::Builtin(f)) => Ok(fenchel_young(f, &cfg.primal, &cfg.bidual)?),
        Some(FunctionSpec::Tabulated { grid, .. }) => Ok(fenchel_young_grid(grid, &cfg.bidual, &opts)?),
        None => Err(usage("the Fenchel–Young function needs `function` in the config")),
    }
}

fn representation(cfg: &Config, h: HChoice) -> Result<BifunctionGrid, Failure> {
    let opts = cfg.tolerances.transform_options();
    Ok(match h {
        HChoice::Fy => fenchel_young_of(cfg)?,
        HChoice::Fitz => fitzpatrick(&cfg.graph()?, &cfg.primal, &cfg.bidual)?,
        HChoice::Sigma => sigma(&cfg.graph()?, &cfg.primal, &cfg.bidual, &opts)?.func,
        HChoice::Mix(l) => mix(
            &fenchel_young_of(cfg)?,
            &fitzpatrick(&cfg.graph()?, &cfg.primal, &cfg.bidual)?,
            l,
        )?,
    })
}

fn h_name(h: HChoice) -> String {
    match h {
        HChoice::Fy => "fy".into(),
        HChoice::Fitz => "fitz".into(),
        HChoice::Sigma => "sigma".into(),
        HChoice::Mix(l) => format!("mix:{l}"),
    }
}

fn enlargement(cli: &Cli, cfg: &Config) -> Result<Box<dyn Enlargement>, Failure> {
    let kind = cli.kind.ok_or_else(|| usage("--kind is required"))?;
    if cli.h.is_some() && kind != Kind::Breve {
        return Err(usage("--h only applies to --kind breve"));
    }
    let tol = cli.tol.unwrap_or(cfg.tolerances.tol_member);
    let opts = cfg.tolerances.transform_options();
    Ok(match kind {
        Kind::Be => Box::new(Biggest::new(cfg.graph()?, cfg.bidual.clone(), tol)?),
        Kind::Se => Box::new(t_se(&cfg.graph()?, &cfg.primal, &cfg.bidual, tol, &opts)?),
        Kind::Breve => {
            let h = representation(cfg, cli.h.unwrap_or(HChoice::Fy))?;
            Box::new(t_breve(&h, tol, &opts)?)
        }
        Kind::Epsdiff => {
            let f = cfg
                .builtin()
                .ok_or_else(|| usage("--kind epsdiff needs a closed-form function"))?;
            Box::new(EpsSubdifferential::new(f, cfg.bidual.clone(), tol)?)
        }
    })
}

fn member_set(cli: &Cli, cfg: &Config) -> Result<EnlargementSet, Failure> {
    let e = enlargement(cli, cfg)?;
    let x = parse_point(
        cli.x.as_deref().ok_or_else(|| usage("--x is required"))?,
        cfg.dim,
        "--x",
    )?;
    Ok(e.members(epsilon(cli, 0.0)?, &x)?)
}

pub fn run(cli: &Cli) -> Outcome {
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Conjugate => {
            only(cli, "conjugate", &[])?;
            let cfg = load_config(cli)?;
            let opts = cfg.tolerances.transform_options();
            let f = cfg.sampled_function()?;
            let c = conjugate_with(&f, &cfg.dual, opts.method)?;
            let flagged = c.flagged_count();
            let g = c.effective(opts.flag_ceiling);
            eprintln!(
                "{flagged} boundary-flagged nodes, {} set to inf",
                g.len() - g.dom_size()
            );
            emit(out, |w| write_grid_csv(w, &g))
        }
        Command::FenchelYoung => {
            only(cli, "fenchel-young", &[])?;
            let h = fenchel_young_of(&load_config(cli)?)?;
            emit(out, |w| write_grid_csv(w, h.base()))
        }
        Command::Fitzpatrick => {
            only(cli, "fitzpatrick", &[])?;
            let h = representation(&load_config(cli)?, HChoice::Fitz)?;
            emit(out, |w| write_grid_csv(w, h.base()))
        }
        Command::Sigma => {
            only(cli, "sigma", &[])?;
            let h = representation(&load_config(cli)?, HChoice::Sigma)?;
            emit(out, |w| write_grid_csv(w, h.base()))
        }
        Command::Aiterate => aiterate(cli),
        Command::Enlarge => {
            only(cli, "enlarge", &["epsilon", "x", "kind", "h", "tol"])?;
            let set = member_set(cli, &load_config(cli)?)?;
            emit(out, |w| write_enlargement_json(w, &set))
        }
        Command::Transport { m1, m2, alpha } => {
            only(cli, "transport", &["kind", "h", "tol"])?;
            let cfg = load_config(cli)?;
            let e = enlargement(cli, &cfg)?;
            let parse = |s: &str, what: &str| -> Result<(f64, Vec<f64>, Vec<f64>), Failure> {
                let parts: Vec<&str> = s.split(':').collect();
                let [eps, x, xs] = parts[..] else {
                    return Err(usage(format!("{what}: expected EPS:X:XSTAR, got {s:?}")));
                };
                let eps = parse_point(eps, 1, what)?[0];
                Ok((eps, parse_point(x, cfg.dim, what)?, parse_point(xs, cfg.dim, what)?))
            };
            let (e1, x1, s1) = parse(m1, "--m1")?;
            let (e2, x2, s2) = parse(m2, "--m2")?;
            let r = transport(e.as_ref(), (e1, &x1, &s1), (e2, &x2, &s2), *alpha)?;
            emit(out, |w| {
                serde_json::to_writer_pretty(&mut *w, &r)?;
                writeln!(w)?;
                Ok(())
            })?;
            if r.member {
                Ok(())
            } else {
                Err(Failure::Check(format!("transported point has slack {:e}", r.slack)))
            }
        }
        Command::Verify => verify(cli),
        Command::PlotData => {
            let cfg = load_config(cli)?;
            if cli.kind.is_some() {
                only(cli, "plot-data --kind", &["epsilon", "x", "kind", "h", "tol"])?;
                let set = member_set(cli, &cfg)?;
                emit(out, |w| write_members_csv(w, &set))
            } else {
                only(cli, "plot-data", &["h"])?;
                let h = representation(&cfg, cli.h.unwrap_or(HChoice::Fy))?;
                emit(out, |w| write_surface_csv(w, &h))
            }
        }
    }
}

fn aiterate(cli: &Cli) -> Outcome {
    only(cli, "aiterate", &["epsilon", "h", "max-iter", "tol"])?;
    let cfg = load_config(cli)?;
    let opts = cfg.tolerances.transform_options();
    let eps = epsilon(cli, cfg.iteration.epsilon)?;
    if eps == 0.0 {
        return Err(usage("--epsilon must be positive"));
    }
    let max_n = cli.max_iter.unwrap_or(cfg.iteration.max_n);
    let tol = cli.tol.unwrap_or(cfg.tolerances.tol_disc);
    let choice = cli.h.unwrap_or(HChoice::Fitz);
    let h = representation(&cfg, choice)?;
    let t = a_iterate(&h, eps, max_n, &opts)?;
    let gap1 = t.gap1().unwrap_or(0.0);
    let bound = if gap1 > 0.0 {
        Some(stopping_bound(gap1, eps)?)
    } else {
        None
    };
    let ac = autoconjugate_check(&t.final_iterate, tol, &opts)?;
    let qc = qc_check(&h, &opts)?;
    let report = json!({
        "h": h_name(choice),
        "epsilon": eps,
        "gap1": gap1,
        "stopping_bound": bound,
        "converged": t.converged,
        "converged_at": t.converged_at,
        "n_final": t.n_final,
        "autoconjugate": ac,
        "qc": qc,
    });
    match cli.output.as_deref() {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            emit(Some(&dir.join("convergence.jsonl")), |w| {
                write_convergence_log(w, &t.records)
            })?;
            emit(Some(&dir.join("final.csv")), |w| {
                write_grid_csv(w, t.final_iterate.base())
            })?;
            emit(Some(&dir.join("report.json")), |w| {
                serde_json::to_writer_pretty(&mut *w, &report)?;
                writeln!(w)?;
                Ok(())
            })?;
        }
        None => {
            emit(None, |w| write_convergence_log(w, &t.records))?;
            eprintln!("{report}");
        }
    }
    if t.converged {
        Ok(())
    } else {
        Err(Failure::Check(format!("gap above 2 epsilon after {max_n} iterations")))
    }
}

fn verify(cli: &Cli) -> Outcome {
    only(cli, "verify", &["tol"])?;
    let cfg = load_config(cli)?;
    let a = match (cfg.builtin(), cfg.dim) {
        (Some(BuiltinFunction::Quadratic { a }), 1) => a,
        _ => return Err(usage("verify needs a one-dimensional quadratic function")),
    };
    let mut tol = cfg.tolerances;
    if let Some(t) = cli.tol {
        tol.tol_disc = t;
    }
    let lab = Lab::new(cfg.primal.clone(), cfg.bidual.clone(), a, tol)?;
    let outcomes = run_all(&lab);
    for o in &outcomes {
        println!(
            "[{}] criterion {:>2} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail
        );
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    if let Some(p) = cli.output.as_deref() {
        emit(Some(p), |w| {
            serde_json::to_writer_pretty(&mut *w, &json!({ "pass": failed == 0, "criteria": outcomes }))?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{failed} of {} criteria failed",
            outcomes.len()
        )))
    }
}

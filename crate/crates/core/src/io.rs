//! Text formats: grid CSV, operator graph CSV, convergence logs and plot data.
//!
//! Grid CSV has one `# axis i: min,max,points` line per axis, then one row per node in
//! row-major order: coordinates, then the value, with `inf` for `+inf`. Numbers are
//! written with the shortest representation that parses back to the same bits.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::enlargements::EnlargementSet;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::grid::{BifunctionGrid, GridAxis, GridFn};
use crate::iteration::IterationRecord;
use crate::operator::OperatorGraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(line: usize, t: &str) -> Result<f64> {
    t.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("not a number: {:?}", t.trim())))
}

pub fn write_grid_csv<W: Write>(mut w: W, f: &GridFn) -> Result<()> {
    for (i, a) in f.axes().iter().enumerate() {
        writeln!(w, "# axis {i}: {},{},{}", a.min(), a.max(), a.points())?;
    }
    let mut line = String::new();
    for flat in 0..f.len() {
        line.clear();
        for c in f.coords(flat) {
            line.push_str(&c.to_string());
            line.push(',');
        }
        line.push_str(&f.at(flat).to_string());
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_csv<R: Read>(r: R) -> Result<GridFn> {
    let mut axes = Vec::new();
    let mut values = Vec::new();
    // Zero-valued grid over the axes read so far, created at the first data row.
    let mut probe: Option<GridFn> = None;
    for (k, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let no = k + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            let Some(spec) = rest.trim().strip_prefix("axis ") else {
                continue;
            };
            if probe.is_some() {
                return Err(parse_err(no, "axis header after data rows"));
            }
            let (idx, nums) = spec
                .split_once(':')
                .ok_or_else(|| parse_err(no, "expected `axis i: min,max,points`"))?;
            if idx.trim().parse::<usize>().ok() != Some(axes.len()) {
                return Err(parse_err(no, format!("axis index {:?} out of order", idx.trim())));
            }
            let parts: Vec<&str> = nums.split(',').collect();
            if parts.len() != 3 {
                return Err(parse_err(no, "expected `min,max,points`"));
            }
            let points = parts[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| parse_err(no, format!("bad point count {:?}", parts[2].trim())))?;
            let axis = GridAxis::new(parse_f64(no, parts[0])?, parse_f64(no, parts[1])?, points)
                .map_err(|e| parse_err(no, e.to_string()))?;
            axes.push(axis);
            continue;
        }
        if axes.is_empty() {
            return Err(parse_err(no, "data row before any axis header"));
        }
        if probe.is_none() {
            probe = Some(GridFn::from_fn(axes.clone(), |_| ExtReal::ZERO)?);
        }
        let probe = probe.as_ref().expect("set above");
        let cols: Vec<&str> = t.split(',').collect();
        if cols.len() != axes.len() + 1 {
            return Err(parse_err(
                no,
                format!("expected {} columns, got {}", axes.len() + 1, cols.len()),
            ));
        }
        let flat = values.len();
        if flat >= probe.len() {
            return Err(parse_err(no, "more rows than grid nodes"));
        }
        for (c, want) in cols.iter().zip(probe.coords(flat)) {
            if parse_f64(no, c)? != want {
                return Err(parse_err(
                    no,
                    format!("coordinate {} does not match node {want}", c.trim()),
                ));
            }
        }
        let v: ExtReal = cols[axes.len()]
            .parse()
            .map_err(|e: Error| parse_err(no, e.to_string()))?;
        values.push(v);
    }
    if axes.is_empty() {
        return Err(parse_err(0, "no axis header"));
    }
    GridFn::new(axes, values)
}

pub fn save_grid(path: &Path, f: &GridFn) -> Result<()> {
    write_grid_csv(fs::File::create(path)?, f)
}

pub fn load_grid(path: &Path) -> Result<GridFn> {
    read_grid_csv(open(path)?)
}

/// Loads a bifunction saved with [`save_grid`]: the first half of the axes is `X`.
pub fn load_bifunction(path: &Path) -> Result<BifunctionGrid> {
    let g = load_grid(path)?;
    let d = g.dim() / 2;
    BifunctionGrid::new(g, d)
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

/// Operator graph CSV: one row per pair, `x..., xstar...`. `#` lines are comments.
pub fn read_graph_csv<R: Read>(r: R) -> Result<OperatorGraph> {
    let mut pairs = Vec::new();
    let mut width = None;
    for (k, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let no = k + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = t.split(',').map(|c| parse_f64(no, c)).collect::<Result<_>>()?;
        if row.is_empty() || !row.len().is_multiple_of(2) {
            return Err(parse_err(
                no,
                format!("expected an even number of columns, got {}", row.len()),
            ));
        }
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(parse_err(no, "column count changes"));
        }
        let d = row.len() / 2;
        pairs.push((row[..d].to_vec(), row[d..].to_vec()));
    }
    OperatorGraph::new(pairs)
}

pub fn load_graph(path: &Path) -> Result<OperatorGraph> {
    read_graph_csv(open(path)?)
}

pub fn write_graph_csv<W: Write>(mut w: W, g: &OperatorGraph) -> Result<()> {
    for (x, xs) in g.pairs() {
        let row: Vec<String> = x.iter().chain(xs).map(f64::to_string).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_convergence_log<W: Write>(mut w: W, records: &[IterationRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_enlargement_json<W: Write>(mut w: W, set: &EnlargementSet) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, set)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn axis_names(d: usize, star: bool) -> Vec<String> {
    let base = if star { "xstar" } else { "x" };
    match d {
        1 => vec![base.to_string()],
        _ => (0..d).map(|i| format!("{base}{i}")).collect(),
    }
}

/// Surface data for a bifunction: `x..., xstar..., value` with `+inf` rows left out.
pub fn write_surface_csv<W: Write>(mut w: W, h: &BifunctionGrid) -> Result<()> {
    let skipped = h.values().iter().filter(|v| v.is_inf()).count();
    writeln!(w, "# inf rows omitted: {skipped}")?;
    let mut cols = axis_names(h.d(), false);
    cols.extend(axis_names(h.d(), true));
    cols.push("value".into());
    writeln!(w, "{}", cols.join(","))?;
    for i in 0..h.len() {
        if let Some(v) = h.at(i).finite() {
            let (x, xs) = h.point(i);
            let mut row: Vec<String> = x.iter().chain(&xs).map(f64::to_string).collect();
            row.push(v.to_string());
            writeln!(w, "{}", row.join(","))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Scatter data for an enlargement: one `xstar..., slack` row per member.
pub fn write_members_csv<W: Write>(mut w: W, set: &EnlargementSet) -> Result<()> {
    let x: Vec<String> = set.x.iter().map(f64::to_string).collect();
    let kind = serde_json::to_value(set.kind)?;
    writeln!(
        w,
        "# kind {}, epsilon {}, x {}",
        kind.as_str().unwrap_or_default(),
        set.epsilon,
        x.join(",")
    )?;
    let mut cols = axis_names(set.x.len(), true);
    cols.push("slack".into());
    writeln!(w, "{}", cols.join(","))?;
    for m in &set.members {
        let mut row: Vec<String> = m.xstar.iter().map(f64::to_string).collect();
        row.push(m.slack.to_string());
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

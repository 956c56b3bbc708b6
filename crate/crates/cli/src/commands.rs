use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use warpdeg::census::{self, Limits, DEFAULT_KNOT_LIMIT, DEFAULT_LINK_LIMIT};
use warpdeg::codec::{canonical, emit_gauss, emit_pd};
use warpdeg::corpus::{load_corpus, parse_corpus, Corpus};
use warpdeg::region_opt::{emit_dimacs, independent_sets_for_base, region_choice_matrix};
use warpdeg::{ir, ir_base, verify_bounds, warping_degree_shadow, BoundsReport, Shadow};

use crate::output::{emit, ids, pass_fail, Report};
use crate::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] warpdeg::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

pub enum Outcome {
    Done,
    Violations(Vec<String>),
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Done => ExitCode::SUCCESS,
            Outcome::Violations(names) => {
                for n in names {
                    eprintln!("violation: {n}");
                }
                ExitCode::from(1)
            }
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let (report, outcome) = match &cli.command {
        Command::Parse(input) => (parse(&load(&input.file)?), Outcome::Done),
        Command::Regions(input) => (regions(&load(&input.file)?)?, Outcome::Done),
        Command::Warp(input) => (warp(&load(&input.file)?)?, Outcome::Done),
        Command::Ir { input, crossing, all_sets, emit_dimacs: k } => {
            let corpus = load(&input.file)?;
            if let Some(k) = k {
                let text = dimacs(&corpus, crossing.unwrap_or(1), *k)?;
                emit(text.as_bytes(), cli.out.as_deref()).map_err(io_err(Path::new("output")))?;
                return Ok(Outcome::Done);
            }
            (ir_report(&corpus, *crossing, *all_sets)?, Outcome::Done)
        }
        Command::Verify { path, file } => {
            let path =
                path.as_ref().or(file.as_ref()).ok_or_else(|| CliError::Usage("verify needs a PD file".into()))?;
            let corpus = load(path)?;
            bounds_report(&corpus, false)?
        }
        Command::Enumerate { from, to, table, links, reduced, limit, dir } => {
            let to = to.unwrap_or(*from);
            let limits = Limits {
                knots: if *links { DEFAULT_KNOT_LIMIT } else { limit.unwrap_or(DEFAULT_KNOT_LIMIT) },
                links: if *links { limit.unwrap_or(DEFAULT_LINK_LIMIT) } else { DEFAULT_LINK_LIMIT },
            };
            if *from == 0 || *from > to {
                return Err(CliError::Usage(format!("empty crossing range {from}..={to}")));
            }
            let report = if *table {
                table_report(*from, to, *links, &limits)?
            } else {
                census_report(*from, to, *links, *reduced, &limits, dir.as_deref())?
            };
            (report, Outcome::Done)
        }
        Command::Corpus { file, dir } => {
            let (source, corpus) = match (file, dir) {
                (Some(f), _) => (f.display().to_string(), load(f)?),
                (None, Some(d)) => (d.display().to_string(), load_dir(d)?),
                (None, None) => return Err(CliError::Usage("corpus needs --file or --dir".into())),
            };
            let (mut report, outcome) = bounds_report(&corpus, true)?;
            report.preamble = vec![format!("corpus {source}: {} entries", corpus.entries.len())];
            report.json = json!({ "source": source, "entries": corpus.entries.len(), "rows": report.json });
            (report, outcome)
        }
    };
    let bytes = report.render(cli.format).map_err(io_err(Path::new("output")))?;
    match &cli.out {
        Some(p) => emit(&bytes, Some(p)).map_err(io_err(p))?,
        None => emit(&bytes, None).map_err(io_err(Path::new("stdout")))?,
    }
    Ok(outcome)
}

fn load(path: &Path) -> Result<Corpus> {
    let corpus = load_corpus(path)?;
    for w in &corpus.warnings {
        eprintln!("warning: {w}");
    }
    Ok(corpus)
}

fn load_dir(dir: &Path) -> Result<Corpus> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .collect();
    files.sort();
    let mut text = String::new();
    for f in &files {
        text.push_str(&fs::read_to_string(f).map_err(io_err(f))?);
        text.push('\n');
    }
    let corpus = parse_corpus(&text, &dir.display().to_string())?;
    for w in &corpus.warnings {
        eprintln!("warning: {w}");
    }
    Ok(corpus)
}

fn parse(corpus: &Corpus) -> Report {
    let mut r =
        Report::new(&["name", "crossings", "components", "reduced", "regions", "canonical", "gauss"], Value::Null);
    let mut json = Vec::new();
    for e in &corpus.entries {
        let s = &e.shadow;
        let code = canonical(s).0;
        let gauss = emit_gauss(s);
        r.rows.push(vec![
            e.name.clone(),
            s.crossing_count().to_string(),
            s.component_count().to_string(),
            u8::from(s.is_reduced()).to_string(),
            s.regions().len().to_string(),
            code.clone(),
            gauss.clone(),
        ]);
        json.push(json!({
            "name": e.name,
            "crossings": s.crossing_count(),
            "components": s.component_count(),
            "reduced": s.is_reduced(),
            "nugatory": s.nugatory_crossings(),
            "regions": s.regions().len(),
            "canonical": code,
            "gauss": gauss,
            "pd": emit_pd(s),
        }));
    }
    r.json = Value::Array(json);
    r
}

fn regions(corpus: &Corpus) -> Result<Report> {
    let mut r = Report::new(&["name", "region", "size", "crossings"], Value::Null);
    let mut json = Vec::new();
    for e in &corpus.entries {
        let m = region_choice_matrix(&e.shadow)?;
        let mut list = Vec::new();
        for reg in e.shadow.regions() {
            r.rows.push(vec![e.name.clone(), (reg.id + 1).to_string(), reg.len().to_string(), ids(&reg.crossings)]);
            list.push(json!({ "region": reg.id, "size": reg.len(), "crossings": reg.crossings }));
        }
        json.push(json!({ "name": e.name, "matrix": m, "regions": list }));
    }
    r.json = Value::Array(json);
    Ok(r)
}

fn per_entry<T: Send>(corpus: &Corpus, f: impl Fn(&Shadow) -> warpdeg::Result<T> + Sync) -> Result<Vec<T>> {
    corpus
        .entries
        .par_iter()
        .map(|e| f(&e.shadow).map_err(|err| CliError::Usage(format!("{}: {err}", e.name))))
        .collect()
}

fn warp(corpus: &Corpus) -> Result<Report> {
    let reports = per_entry(corpus, warping_degree_shadow)?;
    let mut r = Report::new(&["name", "crossings", "d", "assignment", "direction", "base_edge"], Value::Null);
    let mut json = Vec::new();
    for (e, w) in corpus.entries.iter().zip(&reports) {
        r.rows.push(vec![
            e.name.clone(),
            e.shadow.crossing_count().to_string(),
            w.d.to_string(),
            w.witness.assignment.to_string(),
            format!("{:?}", w.witness.direction).to_lowercase(),
            (w.witness.base_edge + 1).to_string(),
        ]);
        json.push(named(&e.name, w));
    }
    r.json = Value::Array(json);
    Ok(r)
}

fn named(name: &str, value: &impl Serialize) -> Value {
    json!({ "name": name, "report": value })
}

fn base_index(corpus: &Corpus, crossing: usize) -> Result<usize> {
    if crossing == 0 {
        return Err(CliError::Usage("crossings are numbered from 1".into()));
    }
    if let Some(e) = corpus.entries.iter().find(|e| crossing > e.shadow.crossing_count()) {
        return Err(warpdeg::Error::CrossingOutOfRange { index: crossing, crossings: e.shadow.crossing_count() }.into());
    }
    Ok(crossing - 1)
}

fn ir_report(corpus: &Corpus, crossing: Option<usize>, all_sets: bool) -> Result<Report> {
    let Some(crossing) = crossing else {
        let reports = per_entry(corpus, ir)?;
        let mut r = Report::new(&["name", "crossings", "ir", "base_crossing", "regions"], Value::Null);
        let mut json = Vec::new();
        for (e, rep) in corpus.entries.iter().zip(&reports) {
            r.rows.push(vec![
                e.name.clone(),
                e.shadow.crossing_count().to_string(),
                rep.ir.to_string(),
                (rep.base_crossing + 1).to_string(),
                ids(&rep.region_set),
            ]);
            json.push(named(&e.name, rep));
        }
        r.json = Value::Array(json);
        return Ok(r);
    };
    let base = base_index(corpus, crossing)?;
    if all_sets {
        let mut r = Report::new(&["name", "crossing", "size", "regions"], Value::Null);
        let mut json = Vec::new();
        for e in &corpus.entries {
            let sets = independent_sets_for_base(&region_choice_matrix(&e.shadow)?, base)?;
            for v in &sets {
                r.rows.push(vec![e.name.clone(), crossing.to_string(), v.size().to_string(), ids(&v.regions())]);
            }
            json.push(json!({ "name": e.name, "base_crossing": base, "sets": sets }));
        }
        r.json = Value::Array(json);
        return Ok(r);
    }
    let results = per_entry(corpus, |s| ir_base(s, base))?;
    let mut r = Report::new(&["name", "crossing", "ir", "regions"], Value::Null);
    let mut json = Vec::new();
    for (e, (v, set)) in corpus.entries.iter().zip(&results) {
        r.rows.push(vec![e.name.clone(), crossing.to_string(), v.to_string(), ids(set)]);
        json.push(json!({ "name": e.name, "base_crossing": base, "ir": v, "region_set": set }));
    }
    r.json = Value::Array(json);
    Ok(r)
}

fn dimacs(corpus: &Corpus, crossing: usize, k: usize) -> Result<String> {
    let [entry] = corpus.entries.as_slice() else {
        return Err(CliError::Usage(format!(
            "--emit-dimacs needs a file with exactly one entry, found {}",
            corpus.entries.len()
        )));
    };
    let base = base_index(corpus, crossing)?;
    Ok(emit_dimacs(&entry.shadow, base, k)?)
}

const BOUNDS_HEADER: [&str; 7] = ["name", "crossings", "reduced", "d", "ir", "lower_ok", "upper_ok"];

fn bounds_report(corpus: &Corpus, with_verdicts: bool) -> Result<(Report, Outcome)> {
    let reports: Vec<BoundsReport> = per_entry(corpus, verify_bounds)?;
    let mut header = BOUNDS_HEADER.to_vec();
    if with_verdicts {
        header.extend(["squeeze", "ir_upper", "ir_lower"]);
    }
    let mut r = Report::new(&header, Value::Null);
    let mut json = Vec::new();
    let mut failed = Vec::new();
    for (e, b) in corpus.entries.iter().zip(&reports) {
        let mut row = vec![
            e.name.clone(),
            b.crossings.to_string(),
            u8::from(b.reduced).to_string(),
            b.d.to_string(),
            b.ir.to_string(),
            pass_fail(b.lower_ok),
            pass_fail(b.upper_ok),
        ];
        if with_verdicts {
            for v in [b.squeeze, b.ir_upper, b.ir_lower] {
                row.push(serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default());
            }
        }
        r.rows.push(row);
        let mut obj = json!({ "name": e.name });
        if let (Value::Object(o), Ok(Value::Object(fields))) = (&mut obj, serde_json::to_value(b)) {
            o.extend(fields);
        }
        json.push(obj);
        if b.has_violation() {
            failed.push(format!("{} ({})", e.name, e.provenance));
        }
    }
    r.json = Value::Array(json);
    let outcome = if failed.is_empty() { Outcome::Done } else { Outcome::Violations(failed) };
    Ok((r, outcome))
}

fn table_report(from: usize, to: usize, links: bool, limits: &Limits) -> Result<Report> {
    if links {
        let rows: Vec<census::LinkCensusRow> =
            (from..=to).map(|c| census::link_row(c, limits)).collect::<warpdeg::Result<_>>()?;
        let mut r = Report::new(&["c", "count", "m_min"], serde_json::to_value(&rows).unwrap_or_default());
        r.rows = rows.iter().map(|x| vec![x.c.to_string(), x.count.to_string(), x.m_min.to_string()]).collect();
        return Ok(r);
    }
    let rows = census::dmin_table(from, to, limits)?;
    let mut r = Report::new(
        &["c", "count_reduced", "d_min", "ir_min", "ir_max"],
        serde_json::to_value(&rows).unwrap_or_default(),
    );
    r.rows = rows
        .iter()
        .map(|x| [x.c, x.count_reduced, x.d_min, x.ir_min, x.ir_max].iter().map(ToString::to_string).collect())
        .collect();
    Ok(r)
}

fn census_report(
    from: usize,
    to: usize,
    links: bool,
    reduced: bool,
    limits: &Limits,
    dir: Option<&Path>,
) -> Result<Report> {
    let mut r = Report::new(&["c", "count", "file"], Value::Null);
    let mut json = Vec::new();
    for c in from..=to {
        let shadows = if links {
            census::enumerate_link_shadows(c, limits)?
        } else {
            census::enumerate_knot_shadows(c, reduced, limits)?
        };
        let text = census::render_census(links, c, &shadows);
        let file = match dir {
            Some(d) => {
                fs::create_dir_all(d).map_err(io_err(d))?;
                let path = d.join(census::census_file_name(links, c));
                fs::write(&path, &text).map_err(io_err(&path))?;
                path.display().to_string()
            }
            None => String::new(),
        };
        r.rows.push(vec![c.to_string(), shadows.len().to_string(), file.clone()]);
        let entries: Vec<Value> =
            text.lines().zip(&shadows).map(|(line, s)| json!({ "entry": line, "canonical": canonical(s).0 })).collect();
        json.push(json!({ "c": c, "count": shadows.len(), "file": file, "shadows": entries }));
    }
    r.json = Value::Array(json);
    Ok(r)
}

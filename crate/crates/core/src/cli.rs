//! Job files and command dispatch for the `cdga` binary.
//!
//! A job is a sequence of `object <kind> <name> { ... }` blocks followed by
//! one `run <command> <args>` line. Kinds are `lie`, `cdga`, `subcdga`,
//! `morphism` and `automorphism`; `#` starts a comment.
//!
//! ```text
//! object lie g { heisenberg(1) + abelian(2) }
//! object cdga a {
//!   generators
//!     x : 1
//!     y : 1
//!     w : 1
//!   d
//!     w -> -x*y
//! }
//! object automorphism f {
//!   on a
//!   order 4
//!   map x -> y
//!   map y -> -x
//!   map w -> w
//! }
//! run mapping_torus f t
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::ValueEnum;

use crate::cdga::{Algebra, Cdga, Complex, Derivation, SubCdga};
use crate::error::{Error, Result};
use crate::gca::{Element, GeneratorSet};
use crate::homology::cohomology;
use crate::lie::{heisenberg_sum, LieAlgebra};
use crate::models::{
    almost_formal_index, ce_almost_formal_presentation, check_quasi_iso, chevalley_decompose, invariant_subcomplex,
    mapping_torus_model, rank_of_form, AutomorphismSpec, MorphismSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Tsv,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub top: Option<usize>,
    pub format: Format,
}

#[derive(Debug, Clone)]
enum Object {
    Lie(LieAlgebra, Arc<Cdga>),
    Cdga(Arc<Cdga>),
    Sub(Arc<SubCdga>),
    Morphism(MorphismSpec),
    Automorphism(AutomorphismSpec),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Lie(..) => "lie",
            Object::Cdga(_) => "cdga",
            Object::Sub(_) => "subcdga",
            Object::Morphism(_) => "morphism",
            Object::Automorphism(_) => "automorphism",
        }
    }
}

type Line = (usize, String);

struct Block {
    kind: String,
    name: String,
    line: usize,
    body: Vec<Line>,
}

/// Attaches a job line number; line 0 stands for the command-line command.
fn at(line: usize, e: impl Into<Error>) -> Error {
    if line == 0 {
        return e.into();
    }
    Error::AtLine {
        line,
        source: Box::new(e.into()),
    }
}

fn split_job(text: &str) -> Result<(Vec<Block>, Option<Line>)> {
    let mut blocks = Vec::new();
    let mut run: Option<Line> = None;
    let mut open: Option<Block> = None;
    for (n, raw) in text.lines().enumerate() {
        let n = n + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(block) = open.as_mut() {
            let (content, closes) = match line.strip_suffix('}') {
                Some(c) => (c.trim(), true),
                None => (line, false),
            };
            if !content.is_empty() {
                block.body.push((n, content.to_string()));
            }
            if closes {
                blocks.push(open.take().unwrap());
            }
            continue;
        }
        if run.is_some() {
            return Err(at(n, "nothing may follow the run line"));
        }
        if let Some(rest) = line.strip_prefix("run ") {
            run = Some((n, rest.trim().to_string()));
            continue;
        }
        let Some(rest) = line.strip_prefix("object ") else {
            return Err(at(n, format!("expected `object` or `run`, got `{line}`")));
        };
        let (head, tail) = rest
            .split_once('{')
            .ok_or_else(|| at(n, "expected `{` after the object name"))?;
        let mut words = head.split_whitespace();
        let (Some(kind), Some(name), None) = (words.next(), words.next(), words.next()) else {
            return Err(at(n, "expected `object <kind> <name> {`"));
        };
        let mut block = Block {
            kind: kind.to_string(),
            name: name.to_string(),
            line: n,
            body: Vec::new(),
        };
        let tail = tail.trim();
        match tail.strip_suffix('}') {
            Some(inner) => {
                if !inner.trim().is_empty() {
                    block.body.push((n, inner.trim().to_string()));
                }
                blocks.push(block);
            }
            None => {
                if !tail.is_empty() {
                    block.body.push((n, tail.to_string()));
                }
                open = Some(block);
            }
        }
    }
    if let Some(b) = open {
        return Err(at(b.line, format!("object {} is not closed", b.name)));
    }
    Ok((blocks, run))
}

/// Parsed job: named objects plus the command line, if any.
pub struct Job {
    objects: HashMap<String, Object>,
    run: Option<Line>,
}

impl Job {
    pub fn parse(text: &str) -> Result<Self> {
        let (blocks, run) = split_job(text)?;
        let mut job = Job {
            objects: HashMap::new(),
            run,
        };
        for b in blocks {
            if job.objects.contains_key(&b.name) {
                return Err(at(b.line, format!("duplicate object name {}", b.name)));
            }
            let obj = match b.kind.as_str() {
                "lie" => {
                    let lie = parse_lie(&b.body)?;
                    let ce = Arc::new(lie.chevalley_eilenberg().map_err(|e| at(b.line, e))?);
                    Object::Lie(lie, ce)
                }
                "cdga" => Object::Cdga(Arc::new(parse_cdga(&b.body)?)),
                "subcdga" => Object::Sub(Arc::new(job.parse_sub(&b)?)),
                "morphism" => Object::Morphism(job.parse_morphism(&b, false)?.0),
                "automorphism" => {
                    let (m, order) = job.parse_morphism(&b, true)?;
                    let order = order.ok_or_else(|| at(b.line, "automorphism needs an `order` line"))?;
                    Object::Automorphism(AutomorphismSpec::new(m, order).map_err(|e| at(b.line, e))?)
                }
                other => return Err(at(b.line, format!("unknown object kind `{other}`"))),
            };
            job.objects.insert(b.name, obj);
        }
        Ok(job)
    }

    pub fn run_line(&self) -> Option<&str> {
        self.run.as_ref().map(|(_, s)| s.as_str())
    }

    fn get(&self, name: &str, line: usize) -> Result<&Object> {
        self.objects
            .get(name)
            .ok_or_else(|| at(line, format!("unknown object `{name}`")))
    }

    fn algebra(&self, name: &str, line: usize) -> Result<Algebra> {
        match self.get(name, line)? {
            Object::Lie(_, ce) => Ok(Algebra::Free(ce.clone())),
            Object::Cdga(c) => Ok(Algebra::Free(c.clone())),
            Object::Sub(s) => Ok(Algebra::Sub(s.clone())),
            other => Err(at(line, format!("`{name}` is a {}, not an algebra", other.kind()))),
        }
    }

    fn parse_sub(&self, b: &Block) -> Result<SubCdga> {
        let mut ambient = None;
        let mut top = None;
        let mut lines = Vec::new();
        for (n, l) in &b.body {
            if let Some(rest) = l.strip_prefix("ambient ") {
                match self.algebra(rest.trim(), *n)? {
                    Algebra::Free(c) => ambient = Some(c),
                    Algebra::Sub(_) => return Err(at(*n, "the ambient must be a free CDGA")),
                }
            } else if let Some(rest) = l.strip_prefix("top ") {
                top = Some(rest.trim().parse().map_err(|_| at(*n, "bad top degree"))?);
            } else {
                lines.push(l.as_str());
            }
        }
        let ambient = ambient.ok_or_else(|| at(b.line, "subcdga needs an `ambient` line"))?;
        SubCdga::parse(ambient, &lines.join("\n"), top).map_err(|e| at(b.line, e))
    }

    fn parse_morphism(&self, b: &Block, auto: bool) -> Result<(MorphismSpec, Option<usize>)> {
        let (mut source, mut target, mut order) = (None, None, None);
        let mut maps: Vec<(String, String)> = Vec::new();
        for (n, l) in &b.body {
            let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l.as_str(), ""));
            let rest = rest.trim();
            match key {
                "source" | "on" => source = Some(self.algebra(rest, *n)?),
                "target" => target = Some(self.algebra(rest, *n)?),
                "order" if auto => order = Some(rest.parse().map_err(|_| at(*n, "bad order"))?),
                "map" => {
                    let (g, e) = rest
                        .split_once("->")
                        .ok_or_else(|| at(*n, "expected `map <gen> -> <element>`"))?;
                    maps.push((g.trim().to_string(), e.trim().to_string()));
                }
                _ => return Err(at(*n, format!("unexpected line `{l}`"))),
            }
        }
        let source = source.ok_or_else(|| at(b.line, "missing `source` line"))?;
        let target = match (target, auto) {
            (Some(t), false) => t,
            (None, true) => source.clone(),
            (Some(_), true) => return Err(at(b.line, "an automorphism has no separate target")),
            (None, false) => return Err(at(b.line, "missing `target` line")),
        };
        let pairs: Vec<(&str, &str)> = maps.iter().map(|(g, e)| (g.as_str(), e.as_str())).collect();
        let m = MorphismSpec::from_named(source, target, &pairs).map_err(|e| at(b.line, e))?;
        Ok((m, order))
    }
}

fn parse_lie(body: &[Line]) -> Result<LieAlgebra> {
    let first = body.first().ok_or_else(|| Error::Parse("empty lie object".into()))?;
    if !first.1.starts_with("dim") && !first.1.starts_with("labels") {
        if body.len() > 1 {
            return Err(at(body[1].0, "a preset takes a single line"));
        }
        return parse_preset(&first.1).map_err(|e| at(first.0, e));
    }
    let mut dim = None;
    let mut labels: Option<Vec<String>> = None;
    let mut entries = Vec::new();
    for (n, l) in body {
        if let Some(rest) = l.strip_prefix("dim ") {
            dim = Some(rest.trim().parse::<usize>().map_err(|_| at(*n, "bad dimension"))?);
        } else if let Some(rest) = l.strip_prefix("labels ") {
            labels = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if l.starts_with('[') {
            let m = dim.ok_or_else(|| at(*n, "`dim` must come first"))?;
            let names = labels
                .clone()
                .unwrap_or_else(|| (1..=m).map(|i| format!("e{i}")).collect());
            let gens = GeneratorSet::exterior(names).map_err(|e| at(*n, e))?;
            let (lhs, rhs) = l.split_once('=').ok_or_else(|| at(*n, "expected `[i,j] = ...`"))?;
            let pair = lhs
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| at(*n, "expected `[i,j]`"))?;
            let (i, j) = pair.split_once(',').ok_or_else(|| at(*n, "expected `[i,j]`"))?;
            let index = |s: &str| -> Result<usize> {
                let s = s.trim();
                match s.parse::<usize>() {
                    Ok(k) if (1..=m).contains(&k) => Ok(k - 1),
                    _ => gens.index_of(s).ok_or_else(|| at(*n, format!("bad basis index `{s}`"))),
                }
            };
            let (i, j) = (index(i)?, index(j)?);
            let value = Element::parse(&gens, rhs.trim()).map_err(|e| at(*n, e))?;
            if !value.is_homogeneous_of(1) && !value.is_zero() {
                return Err(at(*n, "a bracket must be a linear combination of basis vectors"));
            }
            for (mono, c) in value.terms() {
                let k = (0..m).find(|&k| mono.exponent(k) == 1).expect("linear term");
                entries.push((i, j, k, c.clone()));
            }
        } else {
            return Err(at(*n, format!("unexpected line `{l}`")));
        }
    }
    let m = dim.ok_or_else(|| at(body[0].0, "missing `dim` line"))?;
    LieAlgebra::from_brackets(m, entries, labels).map_err(|e| at(body[0].0, e))
}

/// `heisenberg(l)`, `abelian(r)` or `heisenberg(l) + abelian(r)`.
fn parse_preset(s: &str) -> Result<LieAlgebra> {
    let mut l = None;
    let mut r = None;
    for term in s.split('+') {
        let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, arg) = term
            .strip_suffix(')')
            .and_then(|t| t.split_once('('))
            .ok_or_else(|| Error::Parse(format!("bad preset `{term}`")))?;
        let n: usize = arg
            .parse()
            .map_err(|_| Error::Parse(format!("bad preset argument `{arg}`")))?;
        let slot = match name {
            "heisenberg" => &mut l,
            "abelian" => &mut r,
            _ => return Err(Error::Parse(format!("unknown preset `{name}`"))),
        };
        if slot.replace(n).is_some() {
            return Err(Error::Parse(format!("preset `{name}` given twice")));
        }
    }
    Ok(match (l, r) {
        (Some(l), r) => heisenberg_sum(l, r.unwrap_or(0)),
        (None, Some(r)) => LieAlgebra::abelian(r),
        (None, None) => unreachable!("split yields at least one term"),
    })
}

fn parse_cdga(body: &[Line]) -> Result<Cdga> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Gens,
        D,
    }
    let mut section = Section::None;
    let mut gens: Vec<(String, usize)> = Vec::new();
    let mut diffs: Vec<(usize, String, String)> = Vec::new();
    for (n, l) in body {
        match l.as_str() {
            "generators" => section = Section::Gens,
            "d" => section = Section::D,
            _ if section == Section::Gens => {
                for item in l.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (name, deg) = item
                        .split_once(':')
                        .ok_or_else(|| at(*n, format!("expected `name : degree`, got `{item}`")))?;
                    let deg = deg
                        .trim()
                        .parse()
                        .map_err(|_| at(*n, format!("bad degree in `{item}`")))?;
                    gens.push((name.trim().to_string(), deg));
                }
            }
            _ if section == Section::D => {
                let (g, e) = l
                    .split_once("->")
                    .ok_or_else(|| at(*n, "expected `<gen> -> <element>`"))?;
                diffs.push((*n, g.trim().to_string(), e.trim().to_string()));
            }
            _ => return Err(at(*n, "expected `generators` or `d`")),
        }
    }
    let first = body.first().map_or(0, |l| l.0);
    let set = GeneratorSet::new(gens).map_err(|e| at(first, e))?;
    let mut values = vec![Element::zero(&set); set.len()];
    for (n, g, e) in diffs {
        let i = set
            .index_of(&g)
            .ok_or_else(|| at(n, Error::UnknownGenerator(g.clone())))?;
        values[i] = Element::parse(&set, &e).map_err(|err| at(n, err))?;
    }
    Cdga::new(&set, values).map_err(|e| at(first, e))
}

/// Runs the job's command, or `command` when the job has none.
pub fn execute(text: &str, command: Option<&str>, opts: Options) -> Result<String> {
    let job = Job::parse(text)?;
    let (line, cmd) = match (&job.run, command) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse(
                "the job already has a run line; give exactly one command".into(),
            ))
        }
        (Some((n, c)), None) => (*n, c.clone()),
        (None, Some(c)) => (0, c.to_string()),
        (None, None) => return Err(Error::Parse("no command given".into())),
    };
    let mut words = cmd.split_whitespace();
    let name = words.next().ok_or_else(|| at(line, "empty command"))?;
    let args: Vec<&str> = words.collect();
    let ctx = |e: Error| match e {
        Error::AtLine { .. } => e,
        other => at(line, other),
    };
    run_command(&job, name, &args, line, opts).map_err(ctx)
}

fn arity(args: &[&str], min: usize, usage: &str, line: usize) -> Result<()> {
    if args.len() < min {
        return Err(at(line, format!("usage: {usage}")));
    }
    Ok(())
}

fn run_command(job: &Job, name: &str, args: &[&str], line: usize, opts: Options) -> Result<String> {
    let tsv = opts.format == Format::Tsv;
    let mut out = String::new();
    match name {
        "betti" => {
            arity(args, 1, "betti <object>", line)?;
            let h = cohomology(job.algebra(args[0], line)?, opts.top)?;
            for (k, b) in h.betti_numbers().iter().enumerate() {
                if tsv {
                    writeln!(out, "{k}\t{b}").unwrap();
                } else {
                    writeln!(out, "b[{k}]={b}").unwrap();
                }
            }
        }
        "cohomology" => {
            arity(args, 1, "cohomology <object>", line)?;
            let h = cohomology(job.algebra(args[0], line)?, opts.top)?;
            if tsv {
                for k in 0..=h.top() {
                    let reps: Vec<String> = h.representatives(k).iter().map(|r| r.to_string()).collect();
                    writeln!(out, "{k}\t{}\t{}", h.betti(k), reps.join(",")).unwrap();
                }
            } else {
                out.push_str(&h.to_string());
            }
        }
        "classify" => {
            arity(args, 1, "classify <lie>", line)?;
            let lie = lie_object(job, args[0], line)?;
            match lie.classify_heisenberg_type()? {
                Some(l) if tsv => writeln!(out, "HEISENBERG_TYPE\t{l}\t{}", lie.dim()).unwrap(),
                Some(l) => writeln!(out, "HEISENBERG_TYPE l={l} m={}", lie.dim()).unwrap(),
                None => writeln!(out, "NOT_ALMOST_FORMAL").unwrap(),
            }
        }
        "index" => {
            arity(args, 1, "index <lie>", line)?;
            let lie = lie_object(job, args[0], line)?;
            match ce_almost_formal_presentation(lie)? {
                Some(p) => {
                    let l = almost_formal_index(&p)?;
                    let sep = if tsv { "\t" } else { ": " };
                    writeln!(out, "INDEX{sep}{l}").unwrap();
                }
                None => writeln!(out, "NOT_ALMOST_FORMAL").unwrap(),
            }
        }
        "rank" => {
            arity(args, 2, "rank <object> <eta>", line)?;
            let a = free_algebra(job, args[0], line)?;
            let eta = a.element(&args[1..].join(" "))?;
            let max = Algebra::Free(a.clone()).require_top(opts.top)?;
            let r = rank_of_form(&a, &eta, max)?;
            if tsv {
                writeln!(out, "RANK\t{}\t{}", r.rank(), r.p).unwrap();
            } else {
                writeln!(out, "RANK: {} (p={})", r.rank(), r.p).unwrap();
            }
        }
        "mapping_torus" => {
            arity(args, 2, "mapping_torus <automorphism|algebra> <y>", line)?;
            let base = match job.get(args[0], line)? {
                Object::Automorphism(phi) => {
                    let inv = invariant_subcomplex(phi, opts.top)?;
                    writeln!(out, "invariant").unwrap();
                    for l in inv.to_string().lines() {
                        writeln!(out, "  {l}").unwrap();
                    }
                    Algebra::Sub(Arc::new(inv))
                }
                _ => job.algebra(args[0], line)?,
            };
            let model = mapping_torus_model(base, args[1])?;
            write_algebra(&mut out, &model);
            let h = cohomology(model, None)?;
            for (k, b) in h.betti_numbers().iter().enumerate() {
                if tsv {
                    writeln!(out, "{k}\t{b}").unwrap();
                } else {
                    writeln!(out, "b[{k}]={b}").unwrap();
                }
            }
        }
        "qiso" => {
            arity(args, 1, "qiso <morphism>", line)?;
            let psi = match job.get(args[0], line)? {
                Object::Morphism(m) => m,
                Object::Automorphism(a) => a.morphism(),
                other => return Err(at(line, format!("`{}` is a {}, not a morphism", args[0], other.kind()))),
            };
            let report = check_quasi_iso(psi, opts.top)?;
            if tsv {
                for d in &report.degrees {
                    writeln!(out, "{}\t{}\t{}\t{}", d.degree, d.source_betti, d.target_betti, d.rank).unwrap();
                }
                writeln!(out, "QISO\t{}", if report.is_quasi_iso() { "yes" } else { "no" }).unwrap();
            } else {
                out.push_str(&report.to_string());
            }
        }
        "decompose" => {
            arity(args, 2, "decompose <object> <generator> [y]", line)?;
            let b = job.algebra(args[0], line)?;
            let gens = b.generators().clone();
            let der = Derivation::dual_contraction(&gens, args[1])?;
            let eta = Element::var(&gens, args[1])?;
            let y = args.get(2).copied().unwrap_or("y");
            let dec = chevalley_decompose(b, &der, &eta, y, opts.top)?;
            writeln!(out, "kernel").unwrap();
            for l in dec.kernel.to_string().lines() {
                writeln!(out, "  {l}").unwrap();
            }
            write_algebra(&mut out, &dec.model);
            writeln!(out, "inverse").unwrap();
            for l in dec.inverse.to_string().lines() {
                writeln!(out, "  {l}").unwrap();
            }
            writeln!(out, "ISO: verified in degrees 0..{}", dec.degrees_checked - 1).unwrap();
        }
        other => return Err(at(line, format!("unknown command `{other}`"))),
    }
    Ok(out)
}

fn write_algebra(out: &mut String, a: &Algebra) {
    writeln!(out, "model").unwrap();
    for l in a.cdga().to_string().lines() {
        writeln!(out, "  {l}").unwrap();
    }
    if let Algebra::Sub(s) = a {
        for l in s.to_string().lines() {
            writeln!(out, "  {l}").unwrap();
        }
    }
}

fn lie_object<'a>(job: &'a Job, name: &str, line: usize) -> Result<&'a LieAlgebra> {
    match job.get(name, line)? {
        Object::Lie(l, _) => Ok(l),
        other => Err(at(line, format!("`{name}` is a {}, not a lie algebra", other.kind()))),
    }
}

fn free_algebra(job: &Job, name: &str, line: usize) -> Result<Arc<Cdga>> {
    match job.algebra(name, line)? {
        Algebra::Free(c) => Ok(c),
        Algebra::Sub(_) => Err(at(line, format!("`{name}` must be a free CDGA or a lie algebra"))),
    }
}

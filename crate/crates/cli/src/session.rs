//! Named objects: session files and the `builtin:` catalogue.
//!
//! A session file holds one definition per line, `<name> = <constructor>(<args>)`.
//! Arguments are integers, quoted strings, bracketed integer lists, names
//! bound on earlier lines, or `builtin:<name>` references. Every line is
//! built and type-checked when the file is loaded.

use std::collections::BTreeMap;
use std::fmt;

use nubshift_core::algebra::{alternating_group, direct_product, make_cyclic, normal_subgroups, symmetric_group};
use nubshift_core::limits::{build_example_5_6, build_finite_centre, InverseSystem};
use nubshift_core::shift::{graph_subgroup, image_sft, kernel_sft};
use nubshift_core::{EPWord, Group, GroupShiftSFT, SlidingBlockHom};

use crate::formats::{read_group_table, read_hom, read_sft, resolve_group};
use crate::CliError;

#[derive(Clone)]
pub enum Object {
    Group(Group),
    Word(EPWord),
    Sft(GroupShiftSFT),
    Hom(SlidingBlockHom),
    System(InverseSystem),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Group(_) => "group",
            Object::Word(_) => "word",
            Object::Sft(_) => "sft",
            Object::Hom(_) => "hom",
            Object::System(_) => "inverse-system",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Object::Group(g) => format!("{} of order {}", g.name(), g.order()),
            Object::Word(w) => format!("{w} over {}", w.alphabet().name()),
            Object::Sft(h) => format!(
                "window {} with {} blocks over {}",
                h.window(),
                h.num_blocks(),
                h.alphabet().name()
            ),
            Object::Hom(p) => format!(
                "span {} anchor {} from {} to {}",
                p.span(),
                p.anchor(),
                p.domain().name(),
                p.codomain().name()
            ),
            Object::System(s) => format!("{} levels", s.levels().len()),
        }
    }
}

pub const BUILTINS: &[(&str, &str)] = &[
    ("full-shift", "the full shift over --group"),
    ("constants", "constant points over --group"),
    ("trivial", "the trivial subgroup over --group"),
    ("c2xc2", "the full shift over C2xC2"),
    ("h1", "points of C2xC2 with second coordinate 0"),
    ("h2", "points of C2xC2 with first coordinate 0"),
    ("hphi", "the graph of (a, b) -> a + b on C2, inside C2xC2"),
    ("second-constant", "points of C2xC2 whose second coordinate is constant"),
    ("c2xc3", "the full shift over C2xC3"),
    ("s3", "the full shift over S3"),
    ("c3-in-s3", "points of S3^Z with values in the rotation subgroup"),
    ("g0 .. g5", "the finite-centre levels, recoded over S3xC2"),
];

fn klein() -> Group {
    let c2 = make_cyclic(2).expect("C2");
    direct_product(&c2, &c2)
}

fn sum_rule() -> SlidingBlockHom {
    SlidingBlockHom::linear(&make_cyclic(2).expect("C2"), &[1, 1], 0).expect("rule")
}

/// Built-in shifts. `group` is consulted by the parametric entries.
pub fn builtin_sft(name: &str, group: Option<&Group>) -> Result<GroupShiftSFT, CliError> {
    let need = || group.cloned().ok_or_else(|| CliError::Usage(format!("builtin:{name} needs --group")));
    Ok(match name {
        "full-shift" => GroupShiftSFT::full(&need()?),
        "constants" => GroupShiftSFT::constants(&need()?),
        "trivial" => GroupShiftSFT::trivial(&need()?),
        "c2xc2" => GroupShiftSFT::full(&klein()),
        "h1" => GroupShiftSFT::symbol_subgroup(&klein(), &[0, 2])?,
        "h2" => GroupShiftSFT::symbol_subgroup(&klein(), &[0, 1])?,
        "hphi" => graph_subgroup(&sum_rule())?,
        "second-constant" => {
            let mut blocks = Vec::new();
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        blocks.push(vec![a * 2 + c, b * 2 + c]);
                    }
                }
            }
            GroupShiftSFT::new(klein(), 2, &blocks)?
        }
        "c2xc3" => GroupShiftSFT::full(&direct_product(&make_cyclic(2)?, &make_cyclic(3)?)),
        "s3" => GroupShiftSFT::full(&symmetric_group(3)?),
        "c3-in-s3" => {
            let s3 = symmetric_group(3)?;
            let a3 = normal_subgroups(&s3)
                .into_iter()
                .find(|n| n.order() == 3)
                .expect("S3 has a normal subgroup of order 3");
            GroupShiftSFT::symbol_subgroup(&s3, a3.members())?
        }
        _ => match name.strip_prefix('g').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) => build_finite_centre(n)?.shift,
            None => return Err(CliError::Usage(format!("unknown builtin `{name}`"))),
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Arg {
    Int(i64),
    Str(String),
    List(Vec<i64>),
    Name(String),
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Str(s) => write!(f, "{s:?}"),
            Arg::List(l) => write!(f, "{l:?}"),
            Arg::Name(n) => write!(f, "{n}"),
        }
    }
}

fn split_args(body: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    let (mut depth, mut quoted, mut cur) = (0i32, false, String::new());
    for c in body.chars() {
        match c {
            '"' => quoted = !quoted,
            '[' if !quoted => depth += 1,
            ']' if !quoted => depth -= 1,
            ',' if !quoted && depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if quoted || depth != 0 {
        return Err(CliError::Usage(format!("unbalanced arguments `{body}`")));
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur);
    }
    Ok(out.into_iter().map(|s| s.trim().to_string()).collect())
}

fn parse_arg(t: &str) -> Result<Arg, CliError> {
    if let Some(s) = t.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
        return Ok(Arg::Str(s.to_string()));
    }
    if let Some(body) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let items = body
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i64>().map_err(|_| CliError::Usage(format!("bad list entry `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Arg::List(items));
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(Arg::Int(n));
    }
    let ok = !t.is_empty()
        && t
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | ':' | '.'));
    if ok {
        Ok(Arg::Name(t.to_string()))
    } else {
        Err(CliError::Usage(format!("bad argument `{t}`")))
    }
}

#[derive(Clone, Default)]
pub struct Session {
    bindings: BTreeMap<String, Object>,
    order: Vec<String>,
}

impl Session {
    pub fn load(path: &str) -> Result<Session, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
        Session::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Session, CliError> {
        let mut s = Session::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: CliError| match e {
                CliError::Usage(m) => CliError::Usage(format!("line {}: {m}", i + 1)),
                other => other,
            };
            let (name, rhs) = line
                .split_once('=')
                .ok_or_else(|| at(CliError::Usage("expected `<name> = <constructor>(<args>)`".into())))?;
            let name = name.trim();
            let valid = !name.is_empty()
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                && !name.starts_with(|c: char| c.is_ascii_digit());
            if !valid {
                return Err(at(CliError::Usage(format!("bad name `{name}`"))));
            }
            if s.bindings.contains_key(name) {
                return Err(at(CliError::Usage(format!("`{name}` is defined twice"))));
            }
            let obj = s.construct(rhs.trim()).map_err(at)?;
            s.bindings.insert(name.to_string(), obj);
            s.order.push(name.to_string());
        }
        Ok(s)
    }

    #[cfg(test)]
    pub fn get(&self, name: &str) -> Option<&Object> {
        self.bindings.get(name)
    }

    /// Bindings in definition order.
    pub fn entries(&self) -> impl Iterator<Item = (&String, &Object)> {
        self.order.iter().map(move |n| (n, &self.bindings[n]))
    }

    pub fn group_lookup(&self) -> impl Fn(&str) -> Option<Group> + '_ {
        move |n| match self.bindings.get(n) {
            Some(Object::Group(g)) => Some(g.clone()),
            _ => None,
        }
    }

    pub fn group(&self, name: &str) -> Result<Group, CliError> {
        resolve_group(name, &self.group_lookup())
    }

    /// A shift given as a session name, `builtin:<name>`, a bare builtin
    /// name, or a path to an SFT descriptor.
    pub fn sft(&self, r: &str, group: Option<&Group>) -> Result<GroupShiftSFT, CliError> {
        if let Some(b) = r.strip_prefix("builtin:") {
            return builtin_sft(b, group);
        }
        match self.bindings.get(r) {
            Some(Object::Sft(h)) => return Ok(h.clone()),
            Some(o) => return Err(CliError::Usage(format!("`{r}` is a {}, not an sft", o.kind()))),
            None => {}
        }
        if r.ends_with(".json") {
            return read_sft(r, &self.group_lookup());
        }
        builtin_sft(r, group)
    }

    fn object(&self, a: &Arg) -> Result<Object, CliError> {
        match a {
            Arg::Name(n) => {
                if let Some(b) = n.strip_prefix("builtin:") {
                    return Ok(Object::Sft(builtin_sft(b, None)?));
                }
                if let Some(o) = self.bindings.get(n) {
                    return Ok(o.clone());
                }
                Ok(Object::Group(self.group(n)?))
            }
            other => Err(CliError::Usage(format!("expected a name, found {other}"))),
        }
    }

    fn group_arg(&self, a: &Arg) -> Result<Group, CliError> {
        match self.object(a)? {
            Object::Group(g) => Ok(g),
            o => Err(CliError::Usage(format!("expected a group, found a {}", o.kind()))),
        }
    }

    fn sft_arg(&self, a: &Arg) -> Result<GroupShiftSFT, CliError> {
        match self.object(a)? {
            Object::Sft(h) => Ok(h),
            o => Err(CliError::Usage(format!("expected an sft, found a {}", o.kind()))),
        }
    }

    fn hom_arg(&self, a: &Arg) -> Result<SlidingBlockHom, CliError> {
        match self.object(a)? {
            Object::Hom(h) => Ok(h),
            o => Err(CliError::Usage(format!("expected a hom, found a {}", o.kind()))),
        }
    }

    fn construct(&self, rhs: &str) -> Result<Object, CliError> {
        let (ctor, body) = rhs
            .strip_suffix(')')
            .and_then(|r| r.split_once('('))
            .ok_or_else(|| CliError::Usage(format!("expected `<constructor>(<args>)`, found `{rhs}`")))?;
        let args = split_args(body)?
            .iter()
            .map(|t| parse_arg(t))
            .collect::<Result<Vec<_>, _>>()?;
        let ctor = ctor.trim();
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{ctor} takes {n} arguments, got {}", args.len())))
            }
        };
        let int = |a: &Arg| match a {
            Arg::Int(n) => Ok(*n),
            other => Err(CliError::Usage(format!("expected an integer, found {other}"))),
        };
        let uint = |a: &Arg| {
            int(a).and_then(|n| usize::try_from(n).map_err(|_| CliError::Usage(format!("expected a non-negative integer, found {n}"))))
        };
        let string = |a: &Arg| match a {
            Arg::Str(s) => Ok(s.clone()),
            other => Err(CliError::Usage(format!("expected a quoted string, found {other}"))),
        };
        let list = |a: &Arg| match a {
            Arg::List(l) => Ok(l.clone()),
            other => Err(CliError::Usage(format!("expected a list, found {other}"))),
        };
        let ulist = |a: &Arg| -> Result<Vec<usize>, CliError> {
            list(a)?
                .into_iter()
                .map(|x| usize::try_from(x).map_err(|_| CliError::Usage(format!("negative entry {x}"))))
                .collect()
        };
        Ok(match ctor {
            "cyclic" => {
                arity(1)?;
                Object::Group(make_cyclic(uint(&args[0])?)?)
            }
            "symmetric" => {
                arity(1)?;
                Object::Group(symmetric_group(uint(&args[0])?)?)
            }
            "alternating" => {
                arity(1)?;
                Object::Group(alternating_group(uint(&args[0])?)?)
            }
            "product" => {
                arity(2)?;
                Object::Group(direct_product(&self.group_arg(&args[0])?, &self.group_arg(&args[1])?))
            }
            "group_file" => {
                arity(1)?;
                Object::Group(read_group_table(&string(&args[0])?)?)
            }
            "full" => {
                arity(1)?;
                Object::Sft(GroupShiftSFT::full(&self.group_arg(&args[0])?))
            }
            "constants" => {
                arity(1)?;
                Object::Sft(GroupShiftSFT::constants(&self.group_arg(&args[0])?))
            }
            "trivial" => {
                arity(1)?;
                Object::Sft(GroupShiftSFT::trivial(&self.group_arg(&args[0])?))
            }
            "symbols" => {
                arity(2)?;
                Object::Sft(GroupShiftSFT::symbol_subgroup(&self.group_arg(&args[0])?, &ulist(&args[1])?)?)
            }
            "sft_file" => {
                arity(1)?;
                Object::Sft(read_sft(&string(&args[0])?, &self.group_lookup())?)
            }
            "hom_file" => {
                arity(1)?;
                Object::Hom(read_hom(&string(&args[0])?, &self.group_lookup())?)
            }
            "linear" => {
                arity(3)?;
                let g = self.group_arg(&args[0])?;
                Object::Hom(SlidingBlockHom::linear(&g, &list(&args[1])?, int(&args[2])?)?)
            }
            "kernel" => {
                let phi = self.hom_arg(&args[0])?;
                let host = match args.len() {
                    1 => GroupShiftSFT::full(phi.domain()),
                    2 => self.sft_arg(&args[1])?,
                    n => return Err(CliError::Usage(format!("kernel takes 1 or 2 arguments, got {n}"))),
                };
                Object::Sft(kernel_sft(&phi, &host)?)
            }
            "image" => {
                let phi = self.hom_arg(&args[0])?;
                let host = match args.len() {
                    1 => GroupShiftSFT::full(phi.domain()),
                    2 => self.sft_arg(&args[1])?,
                    n => return Err(CliError::Usage(format!("image takes 1 or 2 arguments, got {n}"))),
                };
                Object::Sft(image_sft(&phi, &host)?.0)
            }
            "graph" => {
                arity(1)?;
                Object::Sft(graph_subgroup(&self.hom_arg(&args[0])?)?)
            }
            "intersect" => {
                arity(2)?;
                Object::Sft(self.sft_arg(&args[0])?.intersect(&self.sft_arg(&args[1])?)?)
            }
            "word" => {
                arity(3)?;
                let g = self.group_arg(&args[0])?;
                Object::Word(EPWord::finite(&g, int(&args[1])?, ulist(&args[2])?)?)
            }
            "example_5_6" => {
                arity(2)?;
                let p = uint(&args[0])? as u64;
                Object::System(build_example_5_6(p, uint(&args[1])?)?)
            }
            other => return Err(CliError::Usage(format!("unknown constructor `{other}`"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_definitions() {
        let s = Session::parse(
            "# a small session\n\
             G = product(C2, C2)\n\
             phi = linear(C2, [1, 1], 0)\n\
             K = kernel(phi)\n\
             H = graph(phi)\n\
             M = intersect(H, builtin:h2)\n\
             f = word(C2, -1, [1, 0, 1])\n",
        )
        .unwrap();
        let kinds: Vec<&str> = s.entries().map(|(_, o)| o.kind()).collect();
        assert_eq!(kinds, ["group", "hom", "sft", "sft", "sft", "word"]);
        match s.get("M") {
            Some(Object::Sft(m)) => assert_eq!(m.finite_order(), Some(2)),
            _ => panic!("M should be an sft"),
        }
    }

    #[test]
    fn rejects_bad_sessions() {
        assert!(Session::parse("G = cyclic(2)\nG = cyclic(3)\n").is_err());
        assert!(Session::parse("H = full(phi)\n").is_err());
        assert!(Session::parse("phi = linear(C2, [1], 0)\nH = full(phi)\n").is_err());
        assert!(Session::parse("x = nothing(1)\n").is_err());
        assert!(Session::parse("x cyclic(2)\n").is_err());
    }

    #[test]
    fn builtins_resolve() {
        let s = Session::default();
        let c3 = make_cyclic(3).unwrap();
        assert_eq!(s.sft("builtin:full-shift", Some(&c3)).unwrap().alphabet().order(), 3);
        assert!(s.sft("builtin:full-shift", None).is_err());
        assert!(s.sft("hphi", None).is_ok());
        assert!(s.sft("builtin:nope", None).is_err());
    }
}

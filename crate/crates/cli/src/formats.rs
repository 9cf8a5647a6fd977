//! Input formats: group tables, SFT and hom descriptors, and the word syntax
//! used on the command line.

use std::fs;

use serde_json::{json, Value};

use nubshift_core::algebra::{group_by_name, FiniteGroup};
use nubshift_core::{EPWord, Group, GroupShiftSFT, SlidingBlockHom};

use crate::CliError;

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
}

/// `group <name> <order>`, then one row of products per element, then an
/// optional `names` line.
pub fn parse_group_table(text: &str) -> Result<Group, CliError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::Usage("empty group file".into()))?
        .split_whitespace()
        .collect();
    let (name, order) = match head.as_slice() {
        ["group", name, order] => (
            *name,
            order
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad order {order}")))?,
        ),
        _ => return Err(CliError::Usage("group file must start with `group <name> <order>`".into())),
    };
    let mut rows = Vec::with_capacity(order);
    for _ in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| CliError::Usage(format!("group file has fewer than {order} rows")))?;
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| CliError::Usage(format!("bad table entry {t}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let g = FiniteGroup::from_table(name, rows)?;
    match lines.next() {
        None => Ok(g),
        Some(line) => {
            let names: Vec<String> = match line.strip_prefix("names") {
                Some(rest) => rest.split_whitespace().map(String::from).collect(),
                None => return Err(CliError::Usage(format!("unexpected line `{line}` after the table"))),
            };
            Ok(std::sync::Arc::new((*g).clone().with_names(names)?))
        }
    }
}

pub fn read_group_table(path: &str) -> Result<Group, CliError> {
    parse_group_table(&read(path)?)
}

/// Resolves an alphabet name through `lookup` first, then the built-in names.
pub fn resolve_group(name: &str, lookup: &dyn Fn(&str) -> Option<Group>) -> Result<Group, CliError> {
    if let Some(g) = lookup(name) {
        return Ok(g);
    }
    group_by_name(name).map_err(|e| CliError::Usage(format!("unknown group `{name}`: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Usage(format!("descriptor is missing `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::Usage(format!("`{what}` must be a non-negative integer")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::Usage(format!("`{what}` must be a list")))?
        .iter()
        .map(|x| as_usize(x, what))
        .collect()
}

/// `{"alphabet": "<group>", "window": l, "blocks": [[i, ...], ...]}`.
pub fn parse_sft(text: &str, lookup: &dyn Fn(&str) -> Option<Group>) -> Result<GroupShiftSFT, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad SFT descriptor: {e}")))?;
    let name = field(&v, "alphabet")?
        .as_str()
        .ok_or_else(|| CliError::Usage("`alphabet` must be a string".into()))?;
    let g = resolve_group(name, lookup)?;
    let window = as_usize(field(&v, "window")?, "window")?;
    let blocks = field(&v, "blocks")?
        .as_array()
        .ok_or_else(|| CliError::Usage("`blocks` must be a list".into()))?
        .iter()
        .map(|b| usize_list(b, "blocks"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupShiftSFT::new(g, window, &blocks)?)
}

pub fn read_sft(path: &str, lookup: &dyn Fn(&str) -> Option<Group>) -> Result<GroupShiftSFT, CliError> {
    parse_sft(&read(path)?, lookup)
}

pub fn sft_to_json(h: &GroupShiftSFT) -> Value {
    json!({
        "alphabet": h.alphabet().name(),
        "window": h.window(),
        "blocks": h.block_words(),
    })
}

/// `{"domain": "<group>", "codomain": "<group>", "anchor": a,
/// "rule": {"span": k, "table": [...]}}`, the table indexed by block code
/// with position 0 the least significant digit. `codomain` defaults to
/// `domain` and `anchor` to 0.
pub fn parse_hom(text: &str, lookup: &dyn Fn(&str) -> Option<Group>) -> Result<SlidingBlockHom, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad hom descriptor: {e}")))?;
    let name = |key: &str| -> Result<Option<Group>, CliError> {
        match v.get(key) {
            None => Ok(None),
            Some(s) => {
                let s = s
                    .as_str()
                    .ok_or_else(|| CliError::Usage(format!("`{key}` must be a string")))?;
                resolve_group(s, lookup).map(Some)
            }
        }
    };
    let domain = name("domain")?.ok_or_else(|| CliError::Usage("descriptor is missing `domain`".into()))?;
    let codomain = name("codomain")?.unwrap_or_else(|| domain.clone());
    let anchor = match v.get("anchor") {
        None => 0,
        Some(a) => a
            .as_i64()
            .ok_or_else(|| CliError::Usage("`anchor` must be an integer".into()))?,
    };
    let rule = field(&v, "rule")?;
    let span = as_usize(field(rule, "span")?, "span")?;
    let table = usize_list(field(rule, "table")?, "table")?;
    Ok(SlidingBlockHom::new(domain, codomain, span, anchor, table)?)
}

pub fn read_hom(path: &str, lookup: &dyn Fn(&str) -> Option<Group>) -> Result<SlidingBlockHom, CliError> {
    parse_hom(&read(path)?, lookup)
}

/// A finitely supported word written `start:s0,s1,...` or `s0,s1,...`
/// (start 0). Symbols are element indices.
pub fn parse_word(g: &Group, text: &str) -> Result<EPWord, CliError> {
    let (start, body) = match text.split_once(':') {
        Some((s, b)) => (
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("bad word start `{s}`")))?,
            b,
        ),
        None => (0, text),
    };
    let core = body
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .ok()
                .filter(|&s| s < g.order())
                .ok_or_else(|| CliError::Usage(format!("bad symbol `{t}` for {}", g.name())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EPWord::finite(g, start, core)?)
}

pub fn word_to_json(w: &EPWord) -> Value {
    json!({
        "left": w.left(),
        "start": w.start(),
        "core": w.core(),
        "right": w.right(),
        "text": w.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nubshift_core::algebra::make_cyclic;

    fn none(_: &str) -> Option<Group> {
        None
    }

    #[test]
    fn group_tables() {
        let g = parse_group_table("group Z3 3\n0 1 2\n1 2 0\n2 0 1\nnames e a b\n").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.label(1), "a");
        assert!(parse_group_table("group Z2 2\n0 1\n").is_err());
        assert!(parse_group_table("grp Z2 2\n0 1\n1 0\n").is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        let h = parse_sft(r#"{"alphabet": "C2", "window": 2, "blocks": [[0,0],[1,1]]}"#, &none).unwrap();
        assert!(h.same_points(&GroupShiftSFT::constants(&make_cyclic(2).unwrap())).unwrap());
        let again = parse_sft(&sft_to_json(&h).to_string(), &none).unwrap();
        assert!(again.same_points(&h).unwrap());
        let phi = parse_hom(r#"{"domain": "C2", "rule": {"span": 2, "table": [0,1,1,0]}}"#, &none).unwrap();
        let f = parse_word(phi.domain(), "0:1").unwrap();
        assert_eq!(phi.apply(&f).unwrap(), parse_word(phi.domain(), "-1:1,1").unwrap());
        assert!(parse_word(phi.domain(), "0:2").is_err());
    }
}

//! Coefficient notation for roots: `3a+2b` means three times the first
//! simple root plus twice the second.
//!
//! For rank-two systems the Greek labels `α`/`β` are also accepted. `α` is
//! the simple root the doubly- and triply-laced arguments pivot on: the short
//! root of `G2`, the last (Bourbaki) root of `B2`, `C2` and `BC2`. In rank
//! one `α` is the only simple root.

use crate::error::{Error, Result};
use crate::rootsystem::{Root, RootSystem, Series};

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

pub fn simple_label(index: usize) -> String {
    match LETTERS.get(index) {
        Some(&c) => (c as char).to_string(),
        None => format!("a{index}"),
    }
}

pub fn format_root(r: &Root) -> String {
    let mut out = String::new();
    for (i, &c) in r.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&simple_label(i));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn greek_index(sys: &RootSystem, greek: char) -> Option<usize> {
    if sys.rank() == 1 {
        return (greek == 'α').then_some(0);
    }
    if sys.rank() != 2 {
        return None;
    }
    let alpha = match sys.series() {
        Some(Series::B | Series::C | Series::BC) => 1,
        _ => 0,
    };
    match greek {
        'α' => Some(alpha),
        'β' => Some(1 - alpha),
        _ => None,
    }
}

fn label_index(sys: &RootSystem, label: &str) -> Option<usize> {
    let mut chars = label.chars();
    let first = chars.next()?;
    if chars.as_str().is_empty() {
        if let Some(i) = greek_index(sys, first) {
            return Some(i);
        }
        let i = LETTERS.iter().position(|&c| c as char == first)?;
        return (i < sys.rank()).then_some(i);
    }
    let rest = label.strip_prefix('a')?;
    rest.parse().ok().filter(|&i: &usize| i < sys.rank())
}

/// Parses `3a+2b`, `α+β`, `-a` or `[3,2]` into a coefficient vector for `sys`.
pub fn parse_root(sys: &RootSystem, text: &str) -> Result<Root> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::domain(format!("cannot parse root `{text}`"));
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let coeffs = inner
            .split(',')
            .map(|c| c.parse::<i32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != sys.rank() {
            return Err(bad());
        }
        return Ok(Root::new(coeffs));
    }
    let mut coeffs = vec![0; sys.rank()];
    let mut rest = text.as_str();
    if rest.is_empty() {
        return Err(bad());
    }
    while !rest.is_empty() {
        let mut sign = 1;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        }
        let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let k: i32 = if digits == 0 {
            1
        } else {
            rest[..digits].parse().map_err(|_| bad())?
        };
        rest = &rest[digits..];
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let index = label_index(sys, &rest[..end]).ok_or_else(bad)?;
        coeffs[index] += sign * k;
        rest = &rest[end..];
    }
    Ok(Root::new(coeffs))
}

/// Parses a simple-root label set: `none`, `∅`, `b`, `a,c`, `β`.
pub fn parse_simple_set(sys: &RootSystem, text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || t == "none" || t == "∅" || t == "{}" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        let part = part.trim();
        let idx = match part.parse::<usize>() {
            Ok(i) if i < sys.rank() => i,
            _ => label_index(sys, part)
                .ok_or_else(|| Error::domain(format!("unknown simple root `{part}`")))?,
        };
        if !out.contains(&idx) {
            out.push(idx);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        let g2 = RootSystem::build(Series::G, 2).unwrap();
        let r = Root::new(vec![3, 2]);
        assert_eq!(format_root(&r), "3a+2b");
        assert_eq!(parse_root(&g2, "3a+2b").unwrap(), r);
        assert_eq!(parse_root(&g2, "3α+2β").unwrap(), r);
        assert_eq!(parse_root(&g2, "[3,2]").unwrap(), r);
        assert_eq!(format_root(&Root::new(vec![-1, 0])), "-a");
        assert_eq!(parse_root(&g2, "-a").unwrap(), Root::new(vec![-1, 0]));
        assert!(parse_root(&g2, "c").is_err());
    }

    #[test]
    fn greek_labels_follow_the_pivot_convention() {
        let c2 = RootSystem::build(Series::C, 2).unwrap();
        assert_eq!(parse_root(&c2, "α+2β").unwrap(), Root::new(vec![2, 1]));
        assert_eq!(parse_simple_set(&c2, "β").unwrap(), vec![0]);
        assert_eq!(parse_simple_set(&c2, "none").unwrap(), Vec::<usize>::new());
    }
}

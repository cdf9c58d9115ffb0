//! Low-level text helpers for the schedule grammar.
//!
//! All functions report [`Error::Parse`] with the byte offset of the
//! offending token inside the original schedule string.

use crate::error::{Error, Result};

/// Split schedule text into its three `/`-separated fields, keeping each
/// field's byte offset.
pub(super) fn split_fields(spec: &str) -> Result<[(usize, &str); 3]> {
    let mut fields = Vec::with_capacity(4);
    let mut start = 0;
    for (i, ch) in spec.char_indices() {
        if ch == '/' {
            fields.push((start, &spec[start..i]));
            start = i + 1;
            if fields.len() == 3 {
                // A third separator means a fourth field begins here.
                return Err(Error::Parse {
                    position: i,
                    message: "expected exactly three fields: SIZE/COUNTS/adj:<n>".into(),
                });
            }
        }
    }
    fields.push((start, &spec[start..]));
    match <[(usize, &str); 3]>::try_from(fields) {
        Ok(arr) => Ok(arr),
        Err(_) => Err(Error::Parse {
            position: spec.len(),
            message: "expected exactly three fields: SIZE/COUNTS/adj:<n>".into(),
        }),
    }
}

/// Split one field into keyword and optional argument text.
///
/// Returns `(keyword, keyword_offset, args, args_offset)`; for fields
/// without a colon, `args` is `None` and `args_offset` points past the
/// keyword.
pub(super) fn split_keyword(field: &str, at: usize) -> (&str, usize, Option<&str>, usize) {
    match field.find(':') {
        Some(i) => (&field[..i], at, Some(&field[i + 1..]), at + i + 1),
        None => (field, at, None, at + field.len()),
    }
}

/// The rule takes no arguments; error if any were given.
pub(super) fn forbid_args(args: Option<&str>, at: usize, rule: &str) -> Result<()> {
    match args {
        None => Ok(()),
        Some(_) => Err(Error::Parse {
            position: at,
            message: format!("rule `{rule}` takes no arguments"),
        }),
    }
}

/// Parse a mandatory unsigned integer argument.
pub(super) fn require_uint(args: Option<&str>, at: usize, rule: &str) -> Result<u64> {
    let text = args.ok_or_else(|| Error::Parse {
        position: at,
        message: format!("rule `{rule}` requires an argument"),
    })?;
    parse_uint(text, at)
}

/// Parse a mandatory `INT "," INT` argument pair.
pub(super) fn require_int_pair(args: Option<&str>, at: usize, rule: &str) -> Result<(i64, i64)> {
    let text = args.ok_or_else(|| Error::Parse {
        position: at,
        message: format!("rule `{rule}` requires two arguments"),
    })?;
    let comma = text.find(',').ok_or_else(|| Error::Parse {
        position: at + text.len(),
        message: format!("rule `{rule}` requires two comma-separated integers"),
    })?;
    let first = parse_int(&text[..comma], at)?;
    let second = parse_int(&text[comma + 1..], at + comma + 1)?;
    Ok((first, second))
}

/// Parse a mandatory non-empty comma-separated list of unsigned integers.
pub(super) fn require_uint_list(args: Option<&str>, at: usize, rule: &str) -> Result<Vec<u64>> {
    let text = args.ok_or_else(|| Error::Parse {
        position: at,
        message: format!("rule `{rule}` requires at least one argument"),
    })?;
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_uint(part, at + offset)?);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn parse_uint(text: &str, at: usize) -> Result<u64> {
    text.parse::<u64>().map_err(|_| Error::Parse {
        position: at,
        message: format!("expected unsigned integer, found `{text}`"),
    })
}

fn parse_int(text: &str, at: usize) -> Result<i64> {
    text.parse::<i64>().map_err(|_| Error::Parse {
        position: at,
        message: format!("expected integer, found `{text}`"),
    })
}

// SPDX-License-Identifier: Apache-2.0

//! Field escaping shared by every TSV the tool reads or writes.
//!
//! Tab, newline and backslash are written as `\t`, `\n` and `\\`. Bytes that
//! are not part of a valid UTF-8 sequence are written as `\xHH` (lowercase
//! hex). Decoding reverses this exactly.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeError {
    pub offset: usize,
}

impl fmt::Display for EscapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad escape sequence at byte {}", self.offset)
    }
}

impl std::error::Error for EscapeError {}

/// Appends the escaped form of `raw` to `out`.
pub fn escape_into(raw: &[u8], out: &mut String) {
    for chunk in raw.utf8_chunks() {
        for c in chunk.valid().chars() {
            match c {
                '\t' => out.push_str("\\t"),
                '\n' => out.push_str("\\n"),
                '\\' => out.push_str("\\\\"),
                c => out.push(c),
            }
        }
        for b in chunk.invalid() {
            out.push_str(&format!("\\x{b:02x}"));
        }
    }
}

pub fn escape(raw: &[u8]) -> String {
    let mut out = String::with_capacity(raw.len());
    escape_into(raw, &mut out);
    out
}

/// Escapes a text field; only `\t`, `\n` and `\\` can occur.
pub fn escape_str(s: &str) -> String {
    escape(s.as_bytes())
}

pub fn unescape(field: &[u8]) -> Result<Vec<u8>, EscapeError> {
    let mut out = Vec::with_capacity(field.len());
    let mut i = 0;
    while i < field.len() {
        let b = field[i];
        if b != b'\\' {
            out.push(b);
            i += 1;
            continue;
        }
        match field.get(i + 1) {
            Some(b't') => out.push(b'\t'),
            Some(b'n') => out.push(b'\n'),
            Some(b'\\') => out.push(b'\\'),
            Some(b'x') => {
                let hex = field.get(i + 2..i + 4).ok_or(EscapeError { offset: i })?;
                let mut byte = [0u8; 1];
                hex::decode_to_slice(hex, &mut byte).map_err(|_| EscapeError { offset: i })?;
                out.push(byte[0]);
                i += 4;
                continue;
            }
            _ => return Err(EscapeError { offset: i }),
        }
        i += 2;
    }
    Ok(out)
}

/// Splits one line (without its terminating newline) into tab-separated fields.
pub fn split_fields(line: &[u8]) -> impl Iterator<Item = &[u8]> {
    line.split(|&b| b == b'\t')
}

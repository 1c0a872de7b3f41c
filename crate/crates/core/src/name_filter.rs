// SPDX-License-Identifier: Apache-2.0

//! Author-name plausibility filters and name tokenization.
//!
//! Rules run in a fixed order and the first match decides the verdict:
//! not UTF-8, an email address, blank only, more than 10% non-letters,
//! longer than 100 characters. Lengths and ratios count Unicode scalar
//! values. Whitespace is excluded from both sides of the non-letter ratio.

use std::fmt;

use unicode_general_category::{get_general_category, GeneralCategory as Gc};

pub const MAX_NON_LETTER_PERCENT: usize = 10;
pub const MAX_NAME_CHARS: usize = 100;
pub const MIN_TOKEN_CHARS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RejectReason {
    NotUtf8,
    IsEmail,
    BlankOnly,
    TooManyNonLetters,
    TooLong,
}

impl RejectReason {
    /// All reasons, in rule order.
    pub const ALL: [RejectReason; 5] = [
        RejectReason::NotUtf8,
        RejectReason::IsEmail,
        RejectReason::BlankOnly,
        RejectReason::TooManyNonLetters,
        RejectReason::TooLong,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::NotUtf8 => "not-utf8",
            RejectReason::IsEmail => "is-email",
            RejectReason::BlankOnly => "blank-only",
            RejectReason::TooManyNonLetters => "too-many-non-letters",
            RejectReason::TooLong => "too-long",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameVerdict {
    Plausible(String),
    Rejected(RejectReason),
}

impl NameVerdict {
    pub fn plausible_name(&self) -> Option<&str> {
        match self {
            NameVerdict::Plausible(name) => Some(name),
            NameVerdict::Rejected(_) => None,
        }
    }

    pub fn reason(&self) -> Option<RejectReason> {
        match self {
            NameVerdict::Plausible(_) => None,
            NameVerdict::Rejected(r) => Some(*r),
        }
    }
}

pub fn classify_name(raw: &[u8]) -> NameVerdict {
    let Ok(name) = std::str::from_utf8(raw) else {
        return NameVerdict::Rejected(RejectReason::NotUtf8);
    };
    if is_email_shaped(name) {
        return NameVerdict::Rejected(RejectReason::IsEmail);
    }
    let (non_letters, visible) = count_non_letters(name);
    if visible == 0 {
        return NameVerdict::Rejected(RejectReason::BlankOnly);
    }
    if non_letters * 100 > visible * MAX_NON_LETTER_PERCENT {
        return NameVerdict::Rejected(RejectReason::TooManyNonLetters);
    }
    if name.chars().count() > MAX_NAME_CHARS {
        return NameVerdict::Rejected(RejectReason::TooLong);
    }
    NameVerdict::Plausible(name.to_owned())
}

/// `local@domain` with no inner whitespace, both parts non-empty and a dot
/// in the domain. Surrounding whitespace is ignored.
pub fn is_email_shaped(name: &str) -> bool {
    let trimmed = name.trim();
    if trimmed.chars().any(char::is_whitespace) {
        return false;
    }
    match trimmed.rsplit_once('@') {
        Some((local, domain)) => !local.is_empty() && !domain.is_empty() && domain.contains('.'),
        None => false,
    }
}

/// Letters are the Unicode `L*` categories plus combining marks, so that
/// decomposed accents count with their base letter.
pub fn is_letter(c: char) -> bool {
    matches!(
        get_general_category(c),
        Gc::UppercaseLetter
            | Gc::LowercaseLetter
            | Gc::TitlecaseLetter
            | Gc::ModifierLetter
            | Gc::OtherLetter
            | Gc::NonspacingMark
            | Gc::SpacingMark
            | Gc::EnclosingMark
    )
}

fn count_non_letters(name: &str) -> (usize, usize) {
    name.chars()
        .filter(|c| !c.is_whitespace())
        .fold((0, 0), |(bad, all), c| {
            (bad + usize::from(!is_letter(c)), all + 1)
        })
}

/// Share of non-whitespace characters that are not letters. `None` when the
/// name has no non-whitespace characters.
pub fn non_letter_ratio(name: &str) -> Option<f64> {
    let (non_letters, visible) = count_non_letters(name);
    (visible > 0).then(|| non_letters as f64 / visible as f64)
}

/// Splits a name on whitespace runs and at lower→upper case transitions.
///
/// Tokens shorter than two characters or without any letter are dropped.
/// Returned tokens are in display form (first letter upper, rest lower);
/// use [`lookup_key`] for frequency-table matching.
pub fn tokenize_name(name: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in name.split_whitespace() {
        let mut start = 0;
        let mut prev: Option<char> = None;
        for (i, c) in chunk.char_indices() {
            if prev.is_some_and(char::is_lowercase) && c.is_uppercase() {
                push_token(&chunk[start..i], &mut tokens);
                start = i;
            }
            prev = Some(c);
        }
        push_token(&chunk[start..], &mut tokens);
    }
    tokens
}

fn push_token(piece: &str, tokens: &mut Vec<String>) {
    if piece.chars().count() < MIN_TOKEN_CHARS || !piece.chars().any(is_letter) {
        return;
    }
    let mut chars = piece.chars();
    let mut token = String::with_capacity(piece.len());
    if let Some(first) = chars.next() {
        token.extend(first.to_uppercase());
    }
    for c in chars {
        token.extend(c.to_lowercase());
    }
    tokens.push(token);
}

/// Case-insensitive lookup form of a token.
pub fn lookup_key(token: &str) -> String {
    token.to_lowercase()
}

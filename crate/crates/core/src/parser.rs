//! Manifest parsing, class-usage scanning, and statement counting.
//!
//! Deliberately not a Java parser: the tool only needs declaration lines
//! from the manifest and whole-word class-name detection in user sources,
//! so everything here is token-level with comment and string stripping.

use std::collections::BTreeSet;
use std::fmt;

use crate::codegen;
use crate::store::ElementKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A problem found while parsing, pointing at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    pub line_number: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: line {}: {}", tag, self.line_number, self.message)
    }
}

/// One parsed array declaration from the manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayDecl {
    pub name: String,
    pub kind: ElementKind,
    pub extents: Vec<usize>,
}

impl ArrayDecl {
    /// Canonical declaration line; parsing it back yields this decl with
    /// no issues.
    pub fn render(&self) -> String {
        let ty = self.kind.java_type();
        let brackets = "[]".repeat(self.extents.len());
        let alloc: String = self.extents.iter().map(|e| format!("[{e}]")).collect();
        format!("{ty}{brackets} {} = new {ty}{alloc};", self.name)
    }
}

impl fmt::Display for ArrayDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses the array-declaration manifest: one declaration per line,
/// `type ["[]"] name ["[]"] = new type "[" int "]" ["[" int "]"] ";"`.
///
/// Malformed lines become Error issues and are skipped; a declared type
/// without brackets (legacy input) is accepted with a Warning. Nothing is
/// fatal — all problems surface through the issue list.
pub fn parse_infile(text: &str) -> (Vec<ArrayDecl>, Vec<ParseIssue>) {
    let mut decls = Vec::new();
    let mut issues = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_number = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_decl_line(line) {
            Ok((decl, warning)) => {
                if let Some(message) = warning {
                    issues.push(ParseIssue {
                        line_number,
                        message,
                        severity: Severity::Warning,
                    });
                }
                decls.push(decl);
            }
            Err(message) => issues.push(ParseIssue {
                line_number,
                message,
                severity: Severity::Error,
            }),
        }
    }
    (decls, issues)
}

fn element_kind_of(token: &str) -> Option<ElementKind> {
    match token {
        "int" => Some(ElementKind::Integer),
        "double" => Some(ElementKind::Double),
        "String" => Some(ElementKind::Text),
        "char" => Some(ElementKind::Char),
        _ => None,
    }
}

fn parse_decl_line(line: &str) -> Result<(ArrayDecl, Option<String>), String> {
    let tokens = tokenize(&strip_comments_and_strings(line));
    let mut pos = 0usize;
    let next = |pos: &mut usize| -> Option<&Token> {
        let t = tokens.get(*pos);
        *pos += 1;
        t
    };
    let type_tok = next(&mut pos).ok_or("empty declaration")?;
    let kind = element_kind_of(&type_tok.text)
        .ok_or_else(|| format!("unknown element type `{}`", type_tok.text))?;

    let mut declared_brackets = consume_bracket_pairs(&tokens, &mut pos)?;

    let name_tok = next(&mut pos).ok_or("missing array name")?;
    if !is_identifier(&name_tok.text) || element_kind_of(&name_tok.text).is_some() {
        return Err(format!("`{}` is not a valid array name", name_tok.text));
    }
    let name = name_tok.text.clone();

    declared_brackets += consume_bracket_pairs(&tokens, &mut pos)?;

    expect_punct(&tokens, &mut pos, "=")?;
    let new_tok = next(&mut pos).ok_or("missing `new`")?;
    if new_tok.text != "new" {
        return Err(format!("expected `new`, found `{}`", new_tok.text));
    }
    let alloc_type = next(&mut pos).ok_or("missing allocation type")?;
    let alloc_kind = element_kind_of(&alloc_type.text)
        .ok_or_else(|| format!("unknown allocation type `{}`", alloc_type.text))?;
    if alloc_kind != kind {
        return Err(format!(
            "declared type `{}` does not match allocated type `{}`",
            kind.java_type(),
            alloc_kind.java_type()
        ));
    }

    let mut extents = Vec::new();
    while matches!(tokens.get(pos), Some(t) if t.text == "[") {
        pos += 1;
        let ext_tok = next(&mut pos).ok_or("missing array extent")?;
        let extent: usize = ext_tok
            .text
            .parse()
            .map_err(|_| format!("`{}` is not a valid extent", ext_tok.text))?;
        if extent == 0 {
            return Err("array extent must be at least 1".to_string());
        }
        extents.push(extent);
        expect_punct(&tokens, &mut pos, "]")?;
    }
    if extents.is_empty() {
        return Err("allocation has no extent".to_string());
    }
    if extents.len() > 2 {
        return Err("at most two dimensions are supported".to_string());
    }

    expect_punct(&tokens, &mut pos, ";")?;
    if pos != tokens.len() {
        return Err(format!(
            "unexpected trailing `{}`",
            tokens[pos..]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }

    let warning = if declared_brackets == 0 {
        Some(format!(
            "declared type has no array brackets; treating `{name}` as an array"
        ))
    } else if declared_brackets != extents.len() {
        Some(format!(
            "declared {declared_brackets} bracket pair(s) but allocation has {} dimension(s)",
            extents.len()
        ))
    } else {
        None
    };

    Ok((ArrayDecl { name, kind, extents }, warning))
}

fn consume_bracket_pairs(tokens: &[Token], pos: &mut usize) -> Result<usize, String> {
    let mut pairs = 0;
    while matches!(tokens.get(*pos), Some(t) if t.text == "[") {
        *pos += 1;
        match tokens.get(*pos) {
            Some(t) if t.text == "]" => *pos += 1,
            _ => return Err("unclosed `[` in declared type".to_string()),
        }
        pairs += 1;
    }
    Ok(pairs)
}

fn expect_punct(tokens: &[Token], pos: &mut usize, want: &str) -> Result<(), String> {
    match tokens.get(*pos) {
        Some(t) if t.text == want => {
            *pos += 1;
            Ok(())
        }
        Some(t) => Err(format!("expected `{want}`, found `{}`", t.text)),
        None => Err(format!("expected `{want}`, found end of line")),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
}

/// Names of the twelve predefined classes appearing as whole-word
/// identifiers in `source`, outside comments and string literals.
pub fn scan_class_usages(source: &str) -> BTreeSet<String> {
    let known: BTreeSet<String> = codegen::predefined_classes()
        .iter()
        .map(|(op, kind)| codegen::class_name(*op, *kind))
        .collect();
    let stripped = strip_comments_and_strings(source);
    tokenize(&stripped)
        .into_iter()
        .filter(|t| known.contains(&t.text))
        .map(|t| t.text)
        .collect()
}

/// Counts statements in a Java-subset source.
///
/// After stripping comments and string-literal contents, the count covers
/// class/interface/enum headers, field declarations, method and
/// constructor signatures, `;`-terminated simple statements, and
/// control-flow headers (if/else/for/while/switch/try/catch/do/finally).
/// Insensitive to whitespace and comments by construction.
pub fn count_statements(source: &str) -> usize {
    count_statements_with_issues(source).0
}

/// [`count_statements`] plus a warning channel for lexically-tolerated
/// damage such as unbalanced braces.
pub fn count_statements_with_issues(source: &str) -> (usize, Vec<ParseIssue>) {
    let stripped = strip_comments_and_strings(source);
    let tokens = tokenize(&stripped);
    let mut issues = Vec::new();
    let mut count = 0usize;
    let mut depth = 0i64;
    let mut depth_underflowed = false;
    let mut buf: Vec<&str> = Vec::new();
    let mut i = 0usize;
    while i < tokens.len() {
        let text = tokens[i].text.as_str();
        match text {
            "if" | "for" | "while" | "switch" | "catch" | "synchronized" => {
                count += 1;
                i += 1;
                if matches!(tokens.get(i), Some(t) if t.text == "(") {
                    i = skip_group(&tokens, i, "(", ")");
                }
            }
            "else" | "try" | "do" | "finally" => {
                count += 1;
                i += 1;
            }
            "(" => {
                let end = skip_group(&tokens, i, "(", ")");
                for t in &tokens[i..end] {
                    buf.push(t.text.as_str());
                }
                i = end;
            }
            "{" => {
                // `= { ... }` and `new T[]{ ... }` braces belong to the
                // statement as initializers, not to block structure.
                if matches!(buf.last(), Some(&"=") | Some(&",") | Some(&"]")) {
                    let end = skip_group(&tokens, i, "{", "}");
                    for t in &tokens[i..end] {
                        buf.push(t.text.as_str());
                    }
                    i = end;
                } else {
                    if buf.iter().any(|w| matches!(*w, "class" | "interface" | "enum")) {
                        count += 1;
                    } else if buf.contains(&"(") {
                        count += 1;
                    }
                    buf.clear();
                    depth += 1;
                    i += 1;
                }
            }
            "}" => {
                buf.clear();
                depth -= 1;
                if depth < 0 && !depth_underflowed {
                    depth_underflowed = true;
                    issues.push(ParseIssue {
                        line_number: tokens[i].line,
                        message: "unbalanced `}`; count is best-effort".to_string(),
                        severity: Severity::Warning,
                    });
                }
                i += 1;
            }
            ";" => {
                if !buf.is_empty() {
                    count += 1;
                }
                buf.clear();
                i += 1;
            }
            _ => {
                buf.push(text);
                i += 1;
            }
        }
    }
    if depth > 0 {
        issues.push(ParseIssue {
            line_number: tokens.last().map(|t| t.line).unwrap_or(1),
            message: "unclosed `{`; count is best-effort".to_string(),
            severity: Severity::Warning,
        });
    }
    (count, issues)
}

/// Index just past the group that opens at `start` (`tokens[start]` must
/// be `open`). Tolerates a missing closer by running to the end.
fn skip_group(tokens: &[Token], start: usize, open: &str, close: &str) -> usize {
    let mut depth = 0i64;
    let mut i = start;
    while i < tokens.len() {
        if tokens[i].text == open {
            depth += 1;
        } else if tokens[i].text == close {
            depth -= 1;
            if depth == 0 {
                return i + 1;
            }
        }
        i += 1;
    }
    tokens.len()
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
}

/// Splits into identifiers/keywords, numbers, and single-char punctuation.
/// Assumes comments and literal contents are already stripped.
fn tokenize(source: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut line = 1usize;
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '$')
            {
                i += 1;
            }
            tokens.push(Token {
                text: chars[start..i].iter().collect(),
                line,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '.' || chars[i] == '_')
            {
                i += 1;
            }
            tokens.push(Token {
                text: chars[start..i].iter().collect(),
                line,
            });
        } else {
            tokens.push(Token {
                text: c.to_string(),
                line,
            });
            i += 1;
        }
    }
    tokens
}

/// Blanks comments and the contents of string/char literals while
/// preserving line structure and the quote marks themselves.
fn strip_comments_and_strings(source: &str) -> String {
    #[derive(PartialEq)]
    enum State {
        Normal,
        LineComment,
        BlockComment,
        InString,
        InChar,
    }
    let mut out = String::with_capacity(source.len());
    let mut state = State::Normal;
    let mut chars = source.chars().peekable();
    while let Some(c) = chars.next() {
        match state {
            State::Normal => match c {
                '/' if chars.peek() == Some(&'/') => {
                    chars.next();
                    out.push_str("  ");
                    state = State::LineComment;
                }
                '/' if chars.peek() == Some(&'*') => {
                    chars.next();
                    out.push_str("  ");
                    state = State::BlockComment;
                }
                '"' => {
                    out.push('"');
                    state = State::InString;
                }
                '\'' => {
                    out.push('\'');
                    state = State::InChar;
                }
                _ => out.push(c),
            },
            State::LineComment => {
                if c == '\n' {
                    out.push('\n');
                    state = State::Normal;
                } else {
                    out.push(' ');
                }
            }
            State::BlockComment => {
                if c == '*' && chars.peek() == Some(&'/') {
                    chars.next();
                    out.push_str("  ");
                    state = State::Normal;
                } else if c == '\n' {
                    out.push('\n');
                } else {
                    out.push(' ');
                }
            }
            State::InString | State::InChar => {
                let closer = if state == State::InString { '"' } else { '\'' };
                if c == '\\' {
                    chars.next();
                } else if c == closer {
                    out.push(closer);
                    state = State::Normal;
                } else if c == '\n' {
                    // Literals cannot span lines; tolerate by closing.
                    out.push(closer);
                    out.push('\n');
                    state = State::Normal;
                }
            }
        }
    }
    out
}

//! Reader and writer for the line-oriented DGS event-trace format.
//!
//! A trace begins with the magic line `DGS004`, then a header line
//! `<name> <int> <int>` (the two declared counts are written as `0 0` and
//! ignored on read), then one event per line:
//!
//! ```text
//! st <time>                      step marker
//! an <id> [attrs]                node added
//! dn <id>                        node removed
//! ae <id> <src> <dst> [<|>] [attrs]   edge added; `>` directs src→dst,
//!                                      `<` directs dst→src, absent means
//!                                      undirected
//! de <id>                        edge removed
//! cn <id> <attrs>                node attribute change(s)
//! ce <id> <attrs>                edge attribute change(s)
//! cg <attrs>                     graph attribute change(s)
//! ```
//!
//! Attributes are space-separated `key=value` pairs. A value is a number
//! (decimal with optional sign, fraction, and exponent), `true`/`false`, a
//! double-quoted string with `\"` and `\\` escapes, or a comma-separated
//! list inside `{}` (elements may be any value, including nested lists).
//! `key=` with no value removes the attribute and is only meaningful in the
//! change events `cn`/`ce`/`cg`. A change line carrying several pairs
//! parses to one event per pair, in line order; the writer always emits one
//! pair per line.
//!
//! `#` starts a comment running to the end of the line; blank lines are
//! ignored. Identifiers (ids and attribute keys) are any non-empty run of
//! characters excluding whitespace, `"`, `#`, and `=`. Encoding is UTF-8;
//! the writer ends lines with `\n`, the reader also accepts `\r\n`.
//!
//! Reading is single-pass: memory stays proportional to the longest line
//! and never to the number of events. Writing is deterministic: attribute
//! keys are emitted in lexicographic order and numbers use the shortest
//! representation that parses back to the same value.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::event::{valid_id, AttributeValue, Attributes, GraphEvent, Timestamp};

/// Magic token on the first line of every trace.
pub const MAGIC: &str = "DGS004";

#[derive(Debug, Error)]
pub enum DgsError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("identifier `{id}` cannot be written to a trace")]
    InvalidIdentifier { id: String },
    #[error("attribute value holds a non-finite number")]
    NonFiniteNumber,
    #[error("string value contains a line break and cannot be written")]
    UnrepresentableText,
}

/// A parsed trace: its header name and its events in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgsDocument {
    pub name: String,
    pub events: Vec<GraphEvent>,
}

/// Identifier rule at the format boundary: the shared event rule plus no
/// `#` (comment start) and no `=` (attribute separator).
pub fn writable_id(id: &str) -> bool {
    valid_id(id) && !id.contains('#') && !id.contains('=')
}

/// Parses a whole trace held in memory.
pub fn parse_dgs(text: &str) -> Result<Vec<GraphEvent>, DgsError> {
    Ok(parse_document(text)?.events)
}

/// Parses a whole trace, keeping the header name.
pub fn parse_document(text: &str) -> Result<DgsDocument, DgsError> {
    let reader = DgsReader::new(text.as_bytes())?;
    let name = reader.name().to_string();
    let events = reader.collect::<Result<Vec<_>, _>>()?;
    Ok(DgsDocument { name, events })
}

/// Writes a whole event list to a `String`.
pub fn write_dgs(events: &[GraphEvent], name: &str) -> Result<String, DgsError> {
    let mut writer = DgsWriter::new(Vec::new(), name)?;
    for event in events {
        writer.write_event(event)?;
    }
    Ok(String::from_utf8(writer.into_inner()).expect("writer emits UTF-8"))
}

/// Opens a trace file for streaming reads.
pub fn open(path: &Path) -> Result<DgsReader<BufReader<File>>, DgsError> {
    DgsReader::new(BufReader::new(File::open(path)?))
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

/// Streaming trace reader; yields events in file order.
///
/// The header is consumed by [`DgsReader::new`]. Iteration yields
/// `Result<GraphEvent, DgsError>` and stops at end of input or after the
/// first error.
pub struct DgsReader<R: BufRead> {
    input: R,
    name: String,
    line_no: usize,
    line_buf: String,
    chars_buf: Vec<char>,
    pending: VecDeque<GraphEvent>,
    failed: bool,
}

impl<R: BufRead> DgsReader<R> {
    pub fn new(input: R) -> Result<Self, DgsError> {
        let mut reader = DgsReader {
            input,
            name: String::new(),
            line_no: 0,
            line_buf: String::new(),
            chars_buf: Vec::new(),
            pending: VecDeque::new(),
            failed: false,
        };
        reader.read_header()?;
        Ok(reader)
    }

    /// Trace name from the header line.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// 1-based number of the line the most recent event came from.
    pub fn line(&self) -> usize {
        self.line_no
    }

    /// Reads one physical line into `line_buf`, stripping the trailing
    /// newline (`\n` or `\r\n`). Returns false at end of input.
    fn next_line(&mut self) -> Result<bool, DgsError> {
        self.line_buf.clear();
        let n = self.input.read_line(&mut self.line_buf)?;
        if n == 0 {
            return Ok(false);
        }
        self.line_no += 1;
        if self.line_buf.ends_with('\n') {
            self.line_buf.pop();
        }
        if self.line_buf.ends_with('\r') {
            self.line_buf.pop();
        }
        Ok(true)
    }

    fn read_header(&mut self) -> Result<(), DgsError> {
        if !self.next_line()? {
            return Err(DgsError::Parse {
                line: 1,
                col: 1,
                message: format!("empty input, expected `{MAGIC}` magic line"),
            });
        }
        if self.line_buf != MAGIC {
            return Err(DgsError::Parse {
                line: 1,
                col: 1,
                message: format!("bad magic line `{}`, expected `{MAGIC}`", self.line_buf),
            });
        }
        if !self.next_line()? {
            return Err(DgsError::Parse {
                line: 2,
                col: 1,
                message: "missing header line `<name> <int> <int>`".into(),
            });
        }
        self.chars_buf.clear();
        self.chars_buf.extend(self.line_buf.chars());
        let mut cursor = Cursor::new(&self.chars_buf, self.line_no);
        cursor.skip_ws();
        self.name = cursor.read_ident("trace name")?;
        for _ in 0..2 {
            cursor.skip_ws();
            let (token, col) = cursor.read_bare_token();
            if token.parse::<i64>().is_err() {
                return Err(cursor.err_at(col, format!("malformed header count `{token}`")));
            }
        }
        cursor.expect_end()?;
        Ok(())
    }
}

impl<R: BufRead> Iterator for DgsReader<R> {
    type Item = Result<GraphEvent, DgsError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            if let Some(event) = self.pending.pop_front() {
                return Some(Ok(event));
            }
            match self.next_line() {
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
                Ok(false) => return None,
                Ok(true) => {
                    self.chars_buf.clear();
                    self.chars_buf.extend(self.line_buf.chars());
                    match parse_line(&self.chars_buf, self.line_no) {
                        Err(e) => {
                            self.failed = true;
                            return Some(Err(e));
                        }
                        Ok(events) => self.pending.extend(events),
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Line parsing
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(chars: &'a [char], line: usize) -> Self {
        Cursor {
            chars,
            pos: 0,
            line,
        }
    }

    fn err(&self, message: impl Into<String>) -> DgsError {
        self.err_at(self.pos + 1, message)
    }

    fn err_at(&self, col: usize, message: impl Into<String>) -> DgsError {
        DgsError::Parse {
            line: self.line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    /// End of meaningful input: end of line or a comment start at a token
    /// boundary.
    fn at_end(&self) -> bool {
        matches!(self.peek(), None | Some('#'))
    }

    fn expect_end(&mut self) -> Result<(), DgsError> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn is_ident_char(c: char) -> bool {
        !c.is_whitespace() && c != '"' && c != '#' && c != '='
    }

    fn read_ident(&mut self, what: &str) -> Result<String, DgsError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if Self::is_ident_char(c)) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("malformed identifier: expected {what}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// Token for numbers and booleans; also terminated by `,` and `}` so
    /// it can be used inside lists. Returns the token and its start column.
    fn read_bare_token(&mut self) -> (String, usize) {
        let start = self.pos;
        while matches!(
            self.peek(),
            Some(c) if !c.is_whitespace() && c != '#' && c != ',' && c != '}' && c != '"'
        ) {
            self.pos += 1;
        }
        (self.chars[start..self.pos].iter().collect(), start + 1)
    }

    fn read_number(&mut self, what: &str) -> Result<f64, DgsError> {
        let (token, col) = self.read_bare_token();
        let number_like = token
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_digit() || c == '+' || c == '-' || c == '.');
        if !number_like {
            return Err(self.err_at(col, format!("malformed {what}: `{token}`")));
        }
        let value: f64 = token
            .parse()
            .map_err(|_| self.err_at(col, format!("malformed {what}: `{token}`")))?;
        if !value.is_finite() {
            return Err(self.err_at(col, format!("non-finite number `{token}`")));
        }
        Ok(value)
    }

    fn read_string(&mut self) -> Result<String, DgsError> {
        debug_assert_eq!(self.peek(), Some('"'));
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated string")),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    Some(c) => {
                        return Err(self.err(format!("malformed attribute: unknown escape `\\{c}`")))
                    }
                    None => return Err(self.err("unterminated string")),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn read_value(&mut self) -> Result<AttributeValue, DgsError> {
        match self.peek() {
            Some('"') => Ok(AttributeValue::Text(self.read_string()?)),
            Some('{') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_ws();
                if self.peek() == Some('}') {
                    self.pos += 1;
                    return Ok(AttributeValue::List(items));
                }
                loop {
                    self.skip_ws();
                    items.push(self.read_value()?);
                    self.skip_ws();
                    match self.bump() {
                        Some(',') => continue,
                        Some('}') => return Ok(AttributeValue::List(items)),
                        _ => return Err(self.err("malformed attribute: expected `,` or `}` in list")),
                    }
                }
            }
            _ => {
                let save = self.pos;
                let (token, col) = self.read_bare_token();
                match token.as_str() {
                    "true" => Ok(AttributeValue::Flag(true)),
                    "false" => Ok(AttributeValue::Flag(false)),
                    _ => {
                        self.pos = save;
                        let _ = col;
                        Ok(AttributeValue::Number(self.read_number("attribute value")?))
                    }
                }
            }
        }
    }

    /// `key=value` pairs to end of line. `value` may be absent (removal)
    /// when `allow_removal` is set.
    fn read_attr_pairs(
        &mut self,
        allow_removal: bool,
    ) -> Result<Vec<(String, Option<AttributeValue>)>, DgsError> {
        let mut pairs = Vec::new();
        loop {
            self.skip_ws();
            if self.at_end() {
                return Ok(pairs);
            }
            let key_col = self.pos + 1;
            let key = self.read_ident("attribute key")?;
            if self.peek() != Some('=') {
                return Err(self.err_at(
                    key_col,
                    format!("malformed attribute `{key}`: expected `=`"),
                ));
            }
            self.pos += 1;
            let value_absent = self.at_end() || self.peek().is_some_and(char::is_whitespace);
            if value_absent {
                if !allow_removal {
                    return Err(self.err_at(
                        key_col,
                        format!("malformed attribute `{key}`: a value is required here"),
                    ));
                }
                pairs.push((key, None));
            } else {
                pairs.push((key, Some(self.read_value()?)));
            }
        }
    }

    fn read_attributes(&mut self) -> Result<Attributes, DgsError> {
        Ok(self
            .read_attr_pairs(false)?
            .into_iter()
            .map(|(key, value)| (key, value.expect("removal rejected")))
            .collect())
    }
}

/// Parses one line into zero (blank/comment) or more events.
fn parse_line(chars: &[char], line_no: usize) -> Result<Vec<GraphEvent>, DgsError> {
    let mut cursor = Cursor::new(chars, line_no);
    cursor.skip_ws();
    if cursor.at_end() {
        return Ok(Vec::new());
    }
    let keyword_col = cursor.pos + 1;
    let keyword = cursor.read_ident("event keyword")?;
    let events = match keyword.as_str() {
        "st" => {
            cursor.skip_ws();
            let col = cursor.pos + 1;
            let value = cursor.read_number("step time")?;
            let time = Timestamp::new(value)
                .ok_or_else(|| cursor.err_at(col, format!("negative step time `{value}`")))?;
            cursor.expect_end()?;
            vec![GraphEvent::StepBegins { time }]
        }
        "an" => {
            cursor.skip_ws();
            let node_id = cursor.read_ident("node id")?;
            let attrs = cursor.read_attributes()?;
            cursor.expect_end()?;
            vec![GraphEvent::NodeAdded { node_id, attrs }]
        }
        "dn" => {
            cursor.skip_ws();
            let node_id = cursor.read_ident("node id")?;
            cursor.expect_end()?;
            vec![GraphEvent::NodeRemoved { node_id }]
        }
        "ae" => {
            cursor.skip_ws();
            let edge_id = cursor.read_ident("edge id")?;
            cursor.skip_ws();
            let first = cursor.read_ident("source node id")?;
            cursor.skip_ws();
            let second = cursor.read_ident("target node id")?;
            cursor.skip_ws();
            // A lone `<` or `>` token directs the edge; anything longer is
            // the start of an attribute key.
            let mut directed = false;
            let mut reversed = false;
            if matches!(cursor.peek(), Some('<') | Some('>')) {
                let boundary = cursor
                    .chars
                    .get(cursor.pos + 1)
                    .is_none_or(|c| c.is_whitespace() || *c == '#');
                if boundary {
                    directed = true;
                    reversed = cursor.bump() == Some('<');
                }
            }
            let attrs = cursor.read_attributes()?;
            cursor.expect_end()?;
            let (src_id, dst_id) = if reversed { (second, first) } else { (first, second) };
            vec![GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                directed,
                attrs,
            }]
        }
        "de" => {
            cursor.skip_ws();
            let edge_id = cursor.read_ident("edge id")?;
            cursor.expect_end()?;
            vec![GraphEvent::EdgeRemoved { edge_id }]
        }
        "cn" | "ce" => {
            cursor.skip_ws();
            let id = cursor.read_ident("element id")?;
            let pairs_col = cursor.pos + 1;
            let pairs = cursor.read_attr_pairs(true)?;
            if pairs.is_empty() {
                return Err(cursor.err_at(pairs_col, "change event requires at least one attribute"));
            }
            cursor.expect_end()?;
            pairs
                .into_iter()
                .map(|(key, value)| {
                    if keyword == "cn" {
                        GraphEvent::NodeAttrChanged {
                            node_id: id.clone(),
                            key,
                            value,
                        }
                    } else {
                        GraphEvent::EdgeAttrChanged {
                            edge_id: id.clone(),
                            key,
                            value,
                        }
                    }
                })
                .collect()
        }
        "cg" => {
            let pairs_col = cursor.pos + 1;
            let pairs = cursor.read_attr_pairs(true)?;
            if pairs.is_empty() {
                return Err(cursor.err_at(pairs_col, "change event requires at least one attribute"));
            }
            cursor.expect_end()?;
            pairs
                .into_iter()
                .map(|(key, value)| GraphEvent::GraphAttrChanged { key, value })
                .collect()
        }
        other => {
            return Err(cursor.err_at(keyword_col, format!("unknown keyword `{other}`")));
        }
    };
    Ok(events)
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

/// Streaming trace writer. The header is written on construction.
pub struct DgsWriter<W: Write> {
    out: W,
    line_buf: String,
}

impl<W: Write> DgsWriter<W> {
    pub fn new(out: W, name: &str) -> Result<Self, DgsError> {
        check_id(name)?;
        let mut writer = DgsWriter {
            out,
            line_buf: String::new(),
        };
        writer.out.write_all(MAGIC.as_bytes())?;
        writer.out.write_all(b"\n")?;
        writer.out.write_all(name.as_bytes())?;
        writer.out.write_all(b" 0 0\n")?;
        Ok(writer)
    }

    pub fn write_event(&mut self, event: &GraphEvent) -> Result<(), DgsError> {
        self.line_buf.clear();
        format_event(event, &mut self.line_buf)?;
        self.line_buf.push('\n');
        self.out.write_all(self.line_buf.as_bytes())?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), DgsError> {
        self.out.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

fn check_id(id: &str) -> Result<(), DgsError> {
    if writable_id(id) {
        Ok(())
    } else {
        Err(DgsError::InvalidIdentifier { id: id.to_string() })
    }
}

fn format_event(event: &GraphEvent, out: &mut String) -> Result<(), DgsError> {
    match event {
        GraphEvent::StepBegins { time } => {
            out.push_str("st ");
            out.push_str(&time.to_string());
        }
        GraphEvent::NodeAdded { node_id, attrs } => {
            check_id(node_id)?;
            out.push_str("an ");
            out.push_str(node_id);
            format_attrs(attrs, out)?;
        }
        GraphEvent::NodeRemoved { node_id } => {
            check_id(node_id)?;
            out.push_str("dn ");
            out.push_str(node_id);
        }
        GraphEvent::EdgeAdded {
            edge_id,
            src_id,
            dst_id,
            directed,
            attrs,
        } => {
            check_id(edge_id)?;
            check_id(src_id)?;
            check_id(dst_id)?;
            out.push_str("ae ");
            out.push_str(edge_id);
            out.push(' ');
            out.push_str(src_id);
            out.push(' ');
            out.push_str(dst_id);
            if *directed {
                out.push_str(" >");
            }
            format_attrs(attrs, out)?;
        }
        GraphEvent::EdgeRemoved { edge_id } => {
            check_id(edge_id)?;
            out.push_str("de ");
            out.push_str(edge_id);
        }
        GraphEvent::NodeAttrChanged {
            node_id,
            key,
            value,
        } => {
            check_id(node_id)?;
            out.push_str("cn ");
            out.push_str(node_id);
            format_pair(key, value.as_ref(), out)?;
        }
        GraphEvent::EdgeAttrChanged {
            edge_id,
            key,
            value,
        } => {
            check_id(edge_id)?;
            out.push_str("ce ");
            out.push_str(edge_id);
            format_pair(key, value.as_ref(), out)?;
        }
        GraphEvent::GraphAttrChanged { key, value } => {
            out.push_str("cg");
            format_pair(key, value.as_ref(), out)?;
        }
    }
    Ok(())
}

fn format_attrs(attrs: &Attributes, out: &mut String) -> Result<(), DgsError> {
    for (key, value) in attrs {
        format_pair(key, Some(value), out)?;
    }
    Ok(())
}

fn format_pair(key: &str, value: Option<&AttributeValue>, out: &mut String) -> Result<(), DgsError> {
    check_id(key)?;
    out.push(' ');
    out.push_str(key);
    out.push('=');
    if let Some(value) = value {
        format_value(value, out)?;
    }
    Ok(())
}

fn format_value(value: &AttributeValue, out: &mut String) -> Result<(), DgsError> {
    match value {
        AttributeValue::Number(n) => {
            if !n.is_finite() {
                return Err(DgsError::NonFiniteNumber);
            }
            out.push_str(&n.to_string());
        }
        AttributeValue::Flag(b) => out.push_str(if *b { "true" } else { "false" }),
        AttributeValue::Text(s) => {
            if s.contains('\n') || s.contains('\r') {
                return Err(DgsError::UnrepresentableText);
            }
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    _ => out.push(c),
                }
            }
            out.push('"');
        }
        AttributeValue::List(items) => {
            out.push('{');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                format_value(item, out)?;
            }
            out.push('}');
        }
    }
    Ok(())
}

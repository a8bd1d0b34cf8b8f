use thiserror::Error;

use crate::term::{self, attribute_atom, Term};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{origin}:{line}:{col}: expected {expected}, found {found}")]
pub struct XmlParseError {
    pub origin: String,
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Keep text nodes that consist only of whitespace.
    pub keep_ws: bool,
}

/// Parses an XML document into its root node term.
pub fn parse_document(src: &str) -> Result<Term, XmlParseError> {
    parse_document_with(src, ParseOptions::default(), "<memory>")
}

pub fn parse_document_with(src: &str, opts: ParseOptions, origin: &str) -> Result<Term, XmlParseError> {
    let mut p = XmlParser {
        src,
        pos: 0,
        opts,
        origin,
    };
    p.document()
}

struct XmlParser<'a> {
    src: &'a str,
    pos: usize,
    opts: ParseOptions,
    origin: &'a str,
}

fn describe(s: &str) -> String {
    match s.chars().next() {
        None => "end of input".into(),
        Some(_) => {
            let snippet: String = s.chars().take(12).collect();
            format!("{snippet:?}")
        }
    }
}

impl<'a> XmlParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err_at(&self, pos: usize, expected: impl Into<String>) -> XmlParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        XmlParseError {
            origin: self.origin.to_string(),
            line,
            col,
            expected: expected.into(),
            found: describe(&self.src[pos..]),
        }
    }

    fn err(&self, expected: impl Into<String>) -> XmlParseError {
        self.err_at(self.pos, expected)
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), XmlParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("`{s}`")))
        }
    }

    fn document(&mut self) -> Result<Term, XmlParseError> {
        self.eat("\u{feff}");
        self.skip_ws();
        if self.rest().starts_with("<?xml") && self.rest()[5..].starts_with(|c: char| c.is_whitespace() || c == '?') {
            let end = self.rest().find("?>").ok_or_else(|| self.err("`?>` closing the XML declaration"))?;
            self.pos += end + 2;
        }
        self.misc()?;
        if self.rest().starts_with("<!DOCTYPE") {
            return Err(self.err("root element (document type declarations are not supported)"));
        }
        if !self.rest().starts_with('<') {
            return Err(self.err("root element"));
        }
        let root = self.element()?;
        self.misc()?;
        if !self.rest().is_empty() {
            return Err(self.err("end of document after the root element"));
        }
        Ok(root)
    }

    // Whitespace, comments and processing instructions outside the root are skipped.
    fn misc(&mut self) -> Result<(), XmlParseError> {
        loop {
            self.skip_ws();
            if self.rest().starts_with("<!--") {
                self.comment()?;
            } else if self.rest().starts_with("<?") {
                self.pi()?;
            } else {
                return Ok(());
            }
        }
    }

    fn name(&mut self) -> Result<&'a str, XmlParseError> {
        let r = self.rest();
        let end = r
            .char_indices()
            .find(|&(i, c)| {
                if i == 0 {
                    !(c.is_alphabetic() || c == '_')
                } else {
                    !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
                }
            })
            .map_or(r.len(), |(i, _)| i);
        if end == 0 {
            return Err(self.err("a name"));
        }
        self.pos += end;
        Ok(&r[..end])
    }

    fn decode(&self, raw: &str, start: usize) -> Result<String, XmlParseError> {
        let mut out = String::with_capacity(raw.len());
        let mut rest = raw;
        let mut offset = start;
        while let Some(i) = rest.find('&') {
            out.push_str(&rest[..i]);
            let after = &rest[i..];
            let (text, len) = [("&lt;", '<'), ("&gt;", '>'), ("&amp;", '&'), ("&quot;", '"'), ("&apos;", '\'')]
                .iter()
                .find(|(e, _)| after.starts_with(e))
                .map(|(e, c)| (*c, e.len()))
                .ok_or_else(|| {
                    let what = if after.starts_with("&#") {
                        "a named entity (character references are not supported)"
                    } else {
                        "one of &lt; &gt; &amp; &quot; &apos;"
                    };
                    self.err_at(offset + i, what)
                })?;
            out.push(text);
            rest = &after[len..];
            offset += i + len;
        }
        out.push_str(rest);
        Ok(out)
    }

    fn comment(&mut self) -> Result<Term, XmlParseError> {
        let start = self.pos;
        self.expect("<!--")?;
        let end = self
            .rest()
            .find("-->")
            .ok_or_else(|| self.err_at(start, "`-->` closing the comment"))?;
        let body = &self.rest()[..end];
        self.pos += end + 3;
        Ok(term::comment(body.trim()))
    }

    fn pi(&mut self) -> Result<Term, XmlParseError> {
        let start = self.pos;
        self.expect("<?")?;
        let end = self
            .rest()
            .find('>')
            .ok_or_else(|| self.err_at(start, "`>` closing the processing instruction"))?;
        let body = &self.rest()[..end];
        self.pos += end + 1;
        let body = body.strip_suffix('?').unwrap_or(body);
        Ok(term::pi(body.trim()))
    }

    fn element(&mut self) -> Result<Term, XmlParseError> {
        self.expect("<")?;
        let name = self.name()?;
        let mut attrs: Vec<Term> = Vec::new();
        let mut seen: Vec<&str> = Vec::new();
        loop {
            let had_ws = {
                let before = self.pos;
                self.skip_ws();
                self.pos != before
            };
            if self.eat("/>") {
                return Ok(term::element(Term::atom(name), Term::list(attrs), Term::nil()));
            }
            if self.eat(">") {
                break;
            }
            if !had_ws {
                return Err(self.err("whitespace, `>` or `/>`"));
            }
            let at = self.pos;
            let id = self.name().map_err(|_| self.err("an attribute name, `>` or `/>`"))?;
            if seen.contains(&id) {
                return Err(self.err_at(at, format!("a new attribute (duplicate `{id}`)")));
            }
            seen.push(id);
            self.skip_ws();
            self.expect("=")?;
            self.skip_ws();
            let quote = match self.rest().chars().next() {
                Some(q @ ('"' | '\'')) => q,
                _ => return Err(self.err("a quoted attribute value")),
            };
            self.pos += 1;
            let vstart = self.pos;
            let end = self
                .rest()
                .find(quote)
                .ok_or_else(|| self.err("closing quote of the attribute value"))?;
            let raw = &self.rest()[..end];
            if let Some(i) = raw.find('<') {
                return Err(self.err_at(vstart + i, "attribute value text (`<` must be escaped)"));
            }
            let value = self.decode(raw, vstart)?;
            self.pos += end + 1;
            attrs.push(Term::atom(&attribute_atom(id, &value)));
        }
        let children = self.content(name)?;
        Ok(term::element(Term::atom(name), Term::list(attrs), Term::list(children)))
    }

    fn content(&mut self, name: &str) -> Result<Vec<Term>, XmlParseError> {
        let mut children = Vec::new();
        loop {
            let start = self.pos;
            let end = self.rest().find('<').unwrap_or(self.rest().len());
            if end > 0 {
                let raw = &self.rest()[..end];
                self.pos += end;
                if self.opts.keep_ws || !raw.trim().is_empty() {
                    children.push(term::text(&self.decode(raw, start)?));
                }
            }
            let r = self.rest();
            if r.is_empty() {
                return Err(self.err(format!("`</{name}>`")));
            }
            if r.starts_with("</") {
                self.pos += 2;
                let close_at = self.pos;
                let close = self.name()?;
                if close != name {
                    return Err(self.err_at(close_at, format!("`</{name}>`")));
                }
                self.skip_ws();
                self.expect(">")?;
                return Ok(children);
            }
            if r.starts_with("<!--") {
                children.push(self.comment()?);
            } else if r.starts_with("<![CDATA[") {
                return Err(self.err("element content (CDATA sections are not supported)"));
            } else if r.starts_with("<!") {
                return Err(self.err("element content"));
            } else if r.starts_with("<?") {
                children.push(self.pi()?);
            } else {
                children.push(self.element()?);
            }
        }
    }
}

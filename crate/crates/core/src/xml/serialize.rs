use super::validate::{check_serializable, ValidationError};
use crate::term::{as_element, format_float, split_attribute, Term};

#[derive(Clone, Copy, Debug, Default)]
pub struct SerializeOptions {
    /// Two-space indentation, one node per line.
    pub pretty: bool,
}

pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
    out
}

pub fn escape_attr(s: &str) -> String {
    escape_text(s).replace('"', "&quot;")
}

/// Inverse of the escaping above, for the five named entities.
pub fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let hit = [("&lt;", '<'), ("&gt;", '>'), ("&amp;", '&'), ("&quot;", '"'), ("&apos;", '\'')]
            .iter()
            .find(|(e, _)| rest.starts_with(e));
        match hit {
            Some((e, c)) => {
                out.push(*c);
                rest = &rest[e.len()..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn payload(t: &Term) -> String {
    match t {
        Term::Atom(a) => a.to_string(),
        Term::Int(i) => i.to_string(),
        Term::Float(f) => format_float(*f),
        other => other.to_string(),
    }
}

struct Writer {
    out: String,
    pretty: bool,
}

impl Writer {
    fn indent(&mut self, depth: usize) {
        if self.pretty {
            if !self.out.is_empty() {
                self.out.push('\n');
            }
            for _ in 0..depth {
                self.out.push_str("  ");
            }
        }
    }

    fn node(&mut self, t: &Term, depth: usize) {
        let c = t.as_compound().expect("validated node");
        match &*c.functor {
            "text" => {
                self.indent(depth);
                self.out.push_str(&escape_text(&payload(&c.args[0])));
            }
            "comment" => {
                self.indent(depth);
                self.out.push_str("<!--");
                self.out.push_str(&payload(&c.args[0]));
                self.out.push_str("-->");
            }
            "pi" => {
                self.indent(depth);
                self.out.push_str("<?");
                self.out.push_str(&payload(&c.args[0]));
                self.out.push_str("?>");
            }
            _ => self.element(t, depth),
        }
    }

    fn element(&mut self, t: &Term, depth: usize) {
        let (name, attrs, children) = as_element(t).expect("validated element");
        let name = name.as_atom().expect("validated name");
        self.indent(depth);
        self.out.push('<');
        self.out.push_str(name);
        for a in attrs.list_items().unwrap_or_default() {
            let (id, value) = a.as_atom().and_then(split_attribute).expect("validated attribute");
            self.out.push(' ');
            self.out.push_str(id);
            self.out.push_str("=\"");
            self.out.push_str(&escape_attr(value));
            self.out.push('"');
        }
        let children = children.list_items().unwrap_or_default();
        if children.is_empty() {
            self.out.push_str("/>");
            return;
        }
        self.out.push('>');
        let text_only = children.iter().all(|c| c.functor() == Some(("text", 1)));
        if self.pretty && text_only {
            for ch in &children {
                self.out.push_str(&escape_text(&payload(&ch.as_compound().unwrap().args[0])));
            }
        } else {
            for ch in &children {
                self.node(ch, depth + 1);
            }
            self.indent(depth);
        }
        self.out.push_str("</");
        self.out.push_str(name);
        self.out.push('>');
    }
}

/// Writes a node term as XML. Validation runs first; nothing is produced on error.
pub fn serialize_document(t: &Term) -> Result<String, ValidationError> {
    serialize_with(t, SerializeOptions::default())
}

pub fn serialize_with(t: &Term, opts: SerializeOptions) -> Result<String, ValidationError> {
    check_serializable(t)?;
    let mut w = Writer {
        out: String::new(),
        pretty: opts.pretty,
    };
    w.node(t, 0);
    if opts.pretty {
        w.out.push('\n');
    }
    Ok(w.out)
}

/// Writes a sequence of nodes with no common root. Every node is validated first.
pub fn serialize_fragments(nodes: &[Term], opts: SerializeOptions) -> Result<String, ValidationError> {
    for (i, n) in nodes.iter().enumerate() {
        check_serializable(n).map_err(|mut e| {
            e.path.insert(0, i);
            e
        })?;
    }
    let mut w = Writer {
        out: String::new(),
        pretty: opts.pretty,
    };
    for n in nodes {
        w.node(n, 0);
    }
    if opts.pretty && !w.out.is_empty() {
        w.out.push('\n');
    }
    Ok(w.out)
}

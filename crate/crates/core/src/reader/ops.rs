use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixity {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
}

impl Fixity {
    pub fn is_prefix(self) -> bool {
        matches!(self, Fixity::Fy | Fixity::Fx)
    }
}

impl FromStr for Fixity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "xfx" => Fixity::Xfx,
            "xfy" => Fixity::Xfy,
            "yfx" => Fixity::Yfx,
            "fy" => Fixity::Fy,
            "fx" => Fixity::Fx,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Fixity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fixity::Xfx => "xfx",
            Fixity::Xfy => "xfy",
            Fixity::Yfx => "yfx",
            Fixity::Fy => "fy",
            Fixity::Fx => "fx",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDef {
    pub name: String,
    pub precedence: u16,
    pub fixity: Fixity,
}

impl OperatorDef {
    pub fn new(name: &str, precedence: u16, fixity: Fixity) -> Self {
        OperatorDef {
            name: name.to_string(),
            precedence,
            fixity,
        }
    }
}

/// Operator table with one infix and one prefix slot per name.
#[derive(Clone, Debug, Default)]
pub struct OperatorTable {
    infix: HashMap<String, (u16, Fixity)>,
    prefix: HashMap<String, (u16, Fixity)>,
}

impl OperatorTable {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_defaults() -> Self {
        let mut t = Self::empty();
        for op in default_operators() {
            t.add(op);
        }
        t
    }

    /// Adds or replaces a definition. Precedence 0 removes it.
    pub fn add(&mut self, op: OperatorDef) {
        let slot = if op.fixity.is_prefix() {
            &mut self.prefix
        } else {
            &mut self.infix
        };
        if op.precedence == 0 {
            slot.remove(&op.name);
        } else {
            slot.insert(op.name, (op.precedence, op.fixity));
        }
    }

    pub fn infix(&self, name: &str) -> Option<(u16, Fixity)> {
        self.infix.get(name).copied()
    }

    pub fn prefix(&self, name: &str) -> Option<(u16, Fixity)> {
        self.prefix.get(name).copied()
    }

    pub fn is_operator(&self, name: &str) -> bool {
        self.infix.contains_key(name) || self.prefix.contains_key(name)
    }

    pub fn definitions(&self) -> impl Iterator<Item = OperatorDef> + '_ {
        self.infix
            .iter()
            .chain(self.prefix.iter())
            .map(|(n, (p, f))| OperatorDef::new(n, *p, *f))
    }

    /// First definition for `name`, infix before prefix.
    pub fn lookup(&self, name: &str) -> Option<(u16, Fixity)> {
        self.infix(name).or_else(|| self.prefix(name))
    }
}

const NAVIGATION_INFIX: [&str; 9] = ["/", "^", "@", "?", "id", "#", "c", "sort", "level"];
const NAVIGATION_PREFIX: [&str; 10] = [
    "atts",
    "sortbyName",
    "child",
    "descendant",
    "copy",
    "copy_of",
    "last",
    "count",
    "name",
    "distinct",
];

pub fn default_operators() -> Vec<OperatorDef> {
    use Fixity::*;
    let mut ops = vec![
        OperatorDef::new(":-", 1200, Xfx),
        OperatorDef::new(":-", 1200, Fx),
        OperatorDef::new("?-", 1200, Fx),
        OperatorDef::new(";", 1100, Xfy),
        OperatorDef::new("->", 1050, Xfy),
        OperatorDef::new(",", 1000, Xfy),
        OperatorDef::new("\\+", 900, Fy),
    ];
    for name in ["=", "\\=", "==", "\\==", "is", "<", ">", "=<", ">=", "=:=", "=\\="] {
        ops.push(OperatorDef::new(name, 700, Xfx));
    }
    for name in ["+", "-"] {
        ops.push(OperatorDef::new(name, 500, Yfx));
    }
    ops.push(OperatorDef::new("-", 200, Fy));
    ops.push(OperatorDef::new("+", 200, Fy));
    for name in ["*", "mod", "//"] {
        ops.push(OperatorDef::new(name, 400, Yfx));
    }
    // Navigation operators bind tighter than arithmetic; `/` is one of them.
    for name in NAVIGATION_INFIX {
        ops.push(OperatorDef::new(name, 100, Yfx));
    }
    for name in NAVIGATION_PREFIX {
        ops.push(OperatorDef::new(name, 100, Fy));
    }
    ops
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let t = OperatorTable::with_defaults();
        assert_eq!(t.lookup("/"), Some((100, Fixity::Yfx)));
        assert_eq!(t.lookup("atts"), Some((100, Fixity::Fy)));
        assert_eq!(t.lookup("unknownop"), None);
        assert_eq!(t.infix("-"), Some((500, Fixity::Yfx)));
        assert_eq!(t.prefix("-"), Some((200, Fixity::Fy)));
    }

    #[test]
    fn zero_precedence_removes() {
        let mut t = OperatorTable::with_defaults();
        t.add(OperatorDef::new("c", 0, Fixity::Yfx));
        assert_eq!(t.lookup("c"), None);
    }
}

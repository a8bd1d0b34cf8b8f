use super::ReadError;
use crate::term::is_symbol_char;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// Unquoted or quoted name.
    Name { text: String, quoted: bool },
    Var(String),
    Int(i64),
    Float(f64),
    /// Double-quoted text; read as an atom.
    Str(String),
    Punct(char),
    /// Clause terminator.
    End,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte offset of the first character.
    pub offset: usize,
    /// Whitespace or a comment preceded this token.
    pub spaced: bool,
}

pub struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ReadError {
        ReadError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    /// Skips whitespace and `%` comments; reports whether anything was skipped.
    fn skip_layout(&mut self) -> bool {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
        self.pos != start
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, ReadError> {
        let mut out = Vec::new();
        loop {
            let spaced = self.skip_layout() || out.is_empty();
            let (line, col, offset) = (self.line, self.col, self.pos);
            let Some(c) = self.peek() else { break };
            let tok = self.next_tok(c)?;
            out.push(Token {
                tok,
                line,
                col,
                offset,
                spaced,
            });
        }
        Ok(out)
    }

    fn next_tok(&mut self, c: char) -> Result<Tok, ReadError> {
        if c.is_ascii_digit() {
            return self.number();
        }
        if c == '_' || c.is_uppercase() {
            let text = self.take_while(|c| c.is_alphanumeric() || c == '_');
            return Ok(Tok::Var(text));
        }
        if c.is_alphabetic() {
            let text = self.take_while(|c| c.is_alphanumeric() || c == '_');
            return Ok(Tok::Name {
                text,
                quoted: false,
            });
        }
        match c {
            '\'' => {
                let text = self.quoted('\'')?;
                Ok(Tok::Name { text, quoted: true })
            }
            '"' => Ok(Tok::Str(self.quoted('"')?)),
            '(' | ')' | '[' | ']' | '{' | '}' | ',' | '|' => {
                self.bump();
                Ok(Tok::Punct(c))
            }
            '!' | ';' => {
                self.bump();
                Ok(Tok::Name {
                    text: c.to_string(),
                    quoted: false,
                })
            }
            '.' if self
                .peek_at(1)
                .is_none_or(|n| n.is_whitespace() || n == '%') =>
            {
                self.bump();
                Ok(Tok::End)
            }
            c if is_symbol_char(c) => {
                let text = self.take_while(is_symbol_char);
                Ok(Tok::Name {
                    text,
                    quoted: false,
                })
            }
            other => Err(self.error(format!("unexpected character `{other}`"))),
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    fn number(&mut self) -> Result<Tok, ReadError> {
        let mut text = self.take_while(|c| c.is_ascii_digit());
        let mut is_float = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            is_float = true;
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let sign = self.peek_at(1);
            let digit_at = if matches!(sign, Some('+' | '-')) { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                is_float = true;
                text.push('e');
                self.bump();
                if digit_at == 2 {
                    text.push(self.bump().unwrap());
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            }
        }
        if is_float {
            text.parse::<f64>()
                .map(Tok::Float)
                .map_err(|_| self.error(format!("bad float `{text}`")))
        } else {
            text.parse::<i64>()
                .map(Tok::Int)
                .map_err(|_| self.error(format!("integer out of range `{text}`")))
        }
    }

    fn quoted(&mut self, delim: char) -> Result<String, ReadError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(ReadError::Syntax {
                    line,
                    col,
                    message: "unterminated quoted atom".into(),
                });
            };
            if c == delim {
                if self.peek() == Some(delim) {
                    self.bump();
                    out.push(delim);
                    continue;
                }
                return Ok(out);
            }
            if c == '\\' {
                let Some(e) = self.bump() else { continue };
                match e {
                    'n' => out.push('\n'),
                    't' => out.push('\t'),
                    'r' => out.push('\r'),
                    '\\' | '\'' | '"' | '`' | ' ' => out.push(e),
                    '\n' => {}
                    other => return Err(self.error(format!("unknown escape `\\{other}`"))),
                }
                continue;
            }
            out.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        Lexer::new(s)
            .tokenize()
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect()
    }

    fn name(s: &str) -> Tok {
        Tok::Name {
            text: s.into(),
            quoted: false,
        }
    }

    #[test]
    fn basic_clause() {
        assert_eq!(
            toks("gcd(A,0,A)."),
            vec![
                name("gcd"),
                Tok::Punct('('),
                Tok::Var("A".into()),
                Tok::Punct(','),
                Tok::Int(0),
                Tok::Punct(','),
                Tok::Var("A".into()),
                Tok::Punct(')'),
                Tok::End
            ]
        );
    }

    #[test]
    fn symbols_and_floats() {
        assert_eq!(
            toks("X^name#1 :- Y is 1.5e3."),
            vec![
                Tok::Var("X".into()),
                name("^"),
                name("name"),
                name("#"),
                Tok::Int(1),
                name(":-"),
                Tok::Var("Y".into()),
                name("is"),
                Tok::Float(1500.0),
                Tok::End
            ]
        );
    }

    #[test]
    fn quoted_atoms() {
        assert_eq!(
            toks("'don''t' 'hello\\ world' 'id=\"1\"'"),
            vec![
                Tok::Name {
                    text: "don't".into(),
                    quoted: true
                },
                Tok::Name {
                    text: "hello world".into(),
                    quoted: true
                },
                Tok::Name {
                    text: "id=\"1\"".into(),
                    quoted: true
                },
            ]
        );
        assert!(Lexer::new("'abc").tokenize().is_err());
    }

    #[test]
    fn comments_are_layout() {
        assert_eq!(toks("a. % tail\n% full line\nb."), vec![name("a"), Tok::End, name("b"), Tok::End]);
    }
}

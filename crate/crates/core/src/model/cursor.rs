//! A small character cursor shared by the model DSL and the term parser.

pub(crate) struct Cursor<'a> {
    pub src: &'a str,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let r = self.rest();
        let trimmed = r.trim_start();
        self.pos += r.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Consumes `tok` if the input continues with it.
    pub fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    /// Reads a maximal run of characters accepted by `ok`.
    pub fn ident(&mut self, ok: impl Fn(char) -> bool) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let len: usize = r.chars().take_while(|&c| ok(c)).map(char::len_utf8).sum();
        if len == 0 {
            None
        } else {
            self.pos += len;
            Some(&r[..len])
        }
    }
}

pub(crate) fn is_type_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '*'
}

pub(crate) fn is_var_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

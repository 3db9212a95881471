use crate::bicategory::span::Elem;
use crate::bracketing::Bracketing;

use super::lexer::{lex, syntax, Tok, Token};
use super::{
    DiagramDocument, EdgeDecl, FaceDecl, FormatError, GlobalDecl, LegDecl, MatrixBlock,
    MatrixCellDecl, ModelBlock, ModelKind, PathExpr, Scalar, SetDecl, SpanBlock, SpanCellDecl,
    SpanDecl,
};

/// Parses a `.paste` document.
pub fn parse(text: &str) -> Result<DiagramDocument, FormatError> {
    let mut p = Parser::new(text)?;
    let mut doc = DiagramDocument::default();
    while let Some(t) = p.next_statement() {
        let Tok::Word(keyword) = &t.tok else {
            return Err(p.unexpected(&t, "a statement"));
        };
        match keyword.as_str() {
            "diagram" => {
                if !doc.name.is_empty() {
                    return Err(syntax(t.line, t.column, "the diagram is named twice"));
                }
                doc.name = p.word()?;
            }
            "objects" => {
                doc.objects.push(p.word()?);
                while let Tok::Word(_) = p.peek().tok {
                    doc.objects.push(p.word()?);
                }
            }
            "edge" => {
                let name = p.word()?;
                p.expect(Tok::Colon)?;
                let tail = p.word()?;
                p.expect(Tok::Arrow)?;
                let head = p.word()?;
                doc.edges.push(EdgeDecl { name, tail, head });
            }
            "face" => {
                let name = p.word()?;
                p.expect(Tok::Colon)?;
                let dom = p.field("dom", |p| p.path())?;
                p.expect(Tok::Semi)?;
                let cod = p.field("cod", |p| p.path())?;
                doc.faces.push(FaceDecl { name, dom, cod });
            }
            "global" => {
                if doc.global.is_some() {
                    return Err(syntax(t.line, t.column, "second global block"));
                }
                let source = p.field("source", |p| p.word())?;
                p.expect(Tok::Semi)?;
                let sink = p.field("sink", |p| p.word())?;
                p.expect(Tok::Semi)?;
                let dom = p.field("dom", |p| p.path())?;
                p.expect(Tok::Semi)?;
                let cod = p.field("cod", |p| p.path())?;
                doc.global = Some(GlobalDecl {
                    source,
                    sink,
                    dom,
                    cod,
                });
            }
            "model" => {
                if doc.model.is_some() {
                    return Err(syntax(t.line, t.column, "second model block"));
                }
                let kind = p.model_kind()?;
                p.end_statement()?;
                doc.model = Some(p.model_block(kind)?);
                continue;
            }
            other => {
                return Err(syntax(
                    t.line,
                    t.column,
                    format!("unknown statement '{other}'"),
                ))
            }
        }
        p.end_statement()?;
    }
    Ok(doc)
}

/// Parses a file holding only a model block.
pub fn parse_assignments(text: &str) -> Result<ModelBlock, FormatError> {
    let mut p = Parser::new(text)?;
    let Some(t) = p.next_statement() else {
        return Err(syntax(1, 1, "expected 'model'"));
    };
    if t.tok != Tok::Word("model".into()) {
        return Err(p.unexpected(&t, "'model'"));
    }
    let kind = p.model_kind()?;
    p.end_statement()?;
    p.model_block(kind)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, FormatError> {
        Ok(Self {
            tokens: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, t: &Token, wanted: &str) -> FormatError {
        syntax(
            t.line,
            t.column,
            format!("expected {wanted}, found {}", t.tok.describe()),
        )
    }

    /// Skips blank lines and returns the first token of the next statement.
    fn next_statement(&mut self) -> Option<Token> {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
        match self.peek().tok {
            Tok::Eof => None,
            _ => Some(self.bump()),
        }
    }

    fn end_statement(&mut self) -> Result<(), FormatError> {
        let t = self.bump();
        match t.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            _ => Err(self.unexpected(&t, "end of line")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, FormatError> {
        let t = self.bump();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.unexpected(&t, &tok.describe()))
        }
    }

    fn word(&mut self) -> Result<String, FormatError> {
        let t = self.bump();
        match t.tok {
            Tok::Word(w) => Ok(w),
            _ => Err(self.unexpected(&t, "a name")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FormatError> {
        let t = self.bump();
        match &t.tok {
            Tok::Word(w) if w == kw => Ok(()),
            _ => Err(self.unexpected(&t, &format!("'{kw}'"))),
        }
    }

    /// `kw = value`.
    fn field<T>(
        &mut self,
        kw: &str,
        value: impl FnOnce(&mut Self) -> Result<T, FormatError>,
    ) -> Result<T, FormatError> {
        self.keyword(kw)?;
        self.expect(Tok::Eq)?;
        value(self)
    }

    fn path(&mut self) -> Result<PathExpr, FormatError> {
        let mut edges = Vec::new();
        let start = self.peek().clone();
        let shape = self.group(&mut edges, None)?;
        if edges.is_empty() {
            return Err(self.unexpected(&start, "a path"));
        }
        Ok(PathExpr { edges, shape })
    }

    /// Items up to the closing parenthesis of `open`, or up to the end of the
    /// path when `open` is `None`.
    fn group(
        &mut self,
        edges: &mut Vec<String>,
        open: Option<&Token>,
    ) -> Result<Bracketing, FormatError> {
        let mut items: Vec<(Token, Bracketing)> = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Word(w) => {
                    edges.push(w.clone());
                    self.bump();
                    items.push((t, Bracketing::Dash));
                }
                Tok::LParen => {
                    self.bump();
                    let inner = self.group(edges, Some(&t))?;
                    items.push((t, inner));
                }
                Tok::RParen if open.is_some() => {
                    self.bump();
                    break;
                }
                _ => {
                    if let Some(o) = open {
                        return Err(syntax(o.line, o.column, "unmatched '('"));
                    }
                    break;
                }
            }
        }
        match items.len() {
            0 => {
                let t = self.peek().clone();
                Err(self.unexpected(&t, "an edge name or '('"))
            }
            1 => Ok(items.pop().expect("one item").1),
            2 => {
                let r = items.pop().expect("two items").1;
                let l = items.pop().expect("two items").1;
                Ok(Bracketing::pair(l, r))
            }
            _ => {
                let t = &items[2].0;
                Err(syntax(
                    t.line,
                    t.column,
                    "a group holds at most two items; add parentheses to fix the bracketing",
                ))
            }
        }
    }

    fn model_kind(&mut self) -> Result<ModelKind, FormatError> {
        let t = self.bump();
        match &t.tok {
            Tok::Word(w) if w == "span" => Ok(ModelKind::Span),
            Tok::Word(w) if w == "matrix" => Ok(ModelKind::Matrix),
            _ => Err(self.unexpected(&t, "'span' or 'matrix'")),
        }
    }

    fn model_block(&mut self, kind: ModelKind) -> Result<ModelBlock, FormatError> {
        let mut block = match kind {
            ModelKind::Span => ModelBlock::Span(SpanBlock::default()),
            ModelKind::Matrix => ModelBlock::Matrix(MatrixBlock::default()),
        };
        while let Some(t) = self.next_statement() {
            let Tok::Word(keyword) = &t.tok else {
                return Err(self.unexpected(&t, "a model statement"));
            };
            match (&mut block, keyword.as_str()) {
                (ModelBlock::Span(b), "set") => {
                    let vertex = self.word()?;
                    self.expect(Tok::Eq)?;
                    let elements = self.braced(|p| p.word())?;
                    b.sets.push(SetDecl { vertex, elements });
                }
                (ModelBlock::Span(b), "span") => {
                    let edge = self.word()?;
                    self.expect(Tok::Eq)?;
                    let legs = self.braced(|p| {
                        let apex = p.word()?;
                        p.expect(Tok::Colon)?;
                        let left = p.word()?;
                        p.expect(Tok::Arrow)?;
                        let right = p.word()?;
                        Ok(LegDecl { apex, left, right })
                    })?;
                    b.spans.push(SpanDecl { edge, legs });
                }
                (ModelBlock::Span(b), "cell") => {
                    let face = self.word()?;
                    self.expect(Tok::Eq)?;
                    let map = self.braced(|p| {
                        let a = p.elem()?;
                        p.expect(Tok::Arrow)?;
                        let b = p.elem()?;
                        Ok((a, b))
                    })?;
                    b.cells.push(SpanCellDecl { face, map });
                }
                (ModelBlock::Matrix(b), "dim") => {
                    let edge = self.word()?;
                    self.expect(Tok::Eq)?;
                    let t = self.peek().clone();
                    let dim = self
                        .word()?
                        .parse::<usize>()
                        .ok()
                        .filter(|&d| d > 0)
                        .ok_or_else(|| {
                            syntax(t.line, t.column, "a dimension is a positive integer")
                        })?;
                    b.dims.push((edge, dim));
                }
                (ModelBlock::Matrix(b), "cell") => {
                    let face = self.word()?;
                    self.expect(Tok::Eq)?;
                    let rows = self.matrix()?;
                    b.cells.push(MatrixCellDecl { face, rows });
                }
                (_, "model") => return Err(syntax(t.line, t.column, "second model block")),
                (_, other) => {
                    return Err(syntax(
                        t.line,
                        t.column,
                        format!("unknown statement '{other}' in a {kind} model block"),
                    ))
                }
            }
            self.end_statement()?;
        }
        Ok(block)
    }

    /// `{ item, item, ... }`, possibly empty.
    fn braced<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, FormatError>,
    ) -> Result<Vec<T>, FormatError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if self.peek().tok == Tok::RBrace {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            let t = self.bump();
            match t.tok {
                Tok::Comma => {}
                Tok::RBrace => return Ok(out),
                _ => return Err(self.unexpected(&t, "',' or '}'")),
            }
        }
    }

    fn elem(&mut self) -> Result<Elem, FormatError> {
        let t = self.bump();
        match t.tok {
            Tok::Word(w) => Ok(Elem::atom(&w)),
            Tok::LParen => {
                let a = self.elem()?;
                self.expect(Tok::Comma)?;
                let b = self.elem()?;
                self.expect(Tok::RParen)?;
                Ok(Elem::pair(a, b))
            }
            _ => Err(self.unexpected(&t, "an apex element")),
        }
    }

    /// `[ row ; row ; ... ]` with whitespace-separated entries.
    fn matrix(&mut self) -> Result<Vec<Vec<Scalar>>, FormatError> {
        let open = self.expect(Tok::LBracket)?;
        let mut rows = vec![Vec::new()];
        loop {
            match self.peek().tok {
                Tok::RBracket => {
                    self.bump();
                    break;
                }
                Tok::Semi => {
                    self.bump();
                    rows.push(Vec::new());
                }
                _ => {
                    let x = self.scalar()?;
                    rows.last_mut().expect("nonempty").push(x);
                }
            }
        }
        if rows.len() == 1 && rows[0].is_empty() {
            return Err(syntax(open.line, open.column, "empty matrix"));
        }
        Ok(rows)
    }

    fn scalar(&mut self) -> Result<Scalar, FormatError> {
        let start = self.peek().clone();
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let bad = || {
            syntax(
                start.line,
                start.column,
                "expected a number such as 2, -1 or 1/3",
            )
        };
        let int = |w: String| w.parse::<i64>().map_err(|_| bad());
        let num = match self.bump().tok {
            Tok::Word(w) => int(w)?,
            _ => return Err(bad()),
        };
        let den = if self.peek().tok == Tok::Slash {
            self.bump();
            match self.bump().tok {
                Tok::Word(w) => int(w)?,
                _ => return Err(bad()),
            }
        } else {
            1
        };
        if den == 0 {
            return Err(syntax(start.line, start.column, "zero denominator"));
        }
        let x = Scalar::new(num, den);
        Ok(if negative { -x } else { x })
    }
}

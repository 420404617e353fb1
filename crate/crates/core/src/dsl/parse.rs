use std::collections::HashMap;

use crate::assembly::{GlueTable, TileId, TileSet, NULL_LABEL};
use crate::staged::StagedSystem;

use super::{Diagnostic, DiagnosticKind, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Comma,
    Equals,
}

/// A token and its 1-based column.
type Spanned = (Tok, usize);

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Spanned>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            ',' => out.push((Tok::Comma, col)),
            '=' => out.push((Tok::Equals, col)),
            c if c.is_whitespace() => {}
            c if is_word(c) => {
                let start = i;
                while i + 1 < chars.len() && is_word(chars[i + 1]) {
                    i += 1;
                }
                out.push((Tok::Word(chars[start..=i].iter().collect()), col));
            }
            other => {
                return Err(Diagnostic {
                    kind: DiagnosticKind::Syntax,
                    line: lineno,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// A name and where it was written.
#[derive(Debug, Clone)]
struct Name {
    text: String,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone)]
enum Stmt {
    System(Name),
    Temperature(u32, Name),
    Glue(Name, u32),
    Tile(Name, Vec<(usize, Name)>),
    Stage(u32, Name),
    Bin { name: Name, from: Vec<Name>, add: Vec<Name> },
    Output(Vec<Name>),
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    at: usize,
    line: usize,
    end: usize,
}

impl Cursor<'_> {
    fn error(&self, expected: &str) -> Diagnostic {
        let (found, column) = match self.toks.get(self.at) {
            Some((Tok::Word(w), c)) => (format!("`{w}`"), *c),
            Some((Tok::Comma, c)) => ("`,`".into(), *c),
            Some((Tok::Equals, c)) => ("`=`".into(), *c),
            None => ("end of line".into(), self.end),
        };
        Diagnostic {
            kind: DiagnosticKind::Syntax,
            line: self.line,
            column,
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn peek_word(&self) -> Option<&str> {
        match self.toks.get(self.at) {
            Some((Tok::Word(w), _)) => Some(w),
            _ => None,
        }
    }

    fn word(&mut self, expected: &str) -> Result<Name, Diagnostic> {
        match self.toks.get(self.at) {
            Some((Tok::Word(w), c)) => {
                self.at += 1;
                Ok(Name { text: w.clone(), line: self.line, column: *c })
            }
            _ => Err(self.error(expected)),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), Diagnostic> {
        if self.peek_word() == Some(k) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{k}`")))
        }
    }

    fn int(&mut self) -> Result<(u32, Name), Diagnostic> {
        let before = self.at;
        let n = self.word("an integer")?;
        match n.text.parse::<u32>() {
            Ok(v) => Ok((v, n)),
            Err(_) => {
                self.at = before;
                Err(self.error("an integer"))
            }
        }
    }

    fn list(&mut self, what: &str) -> Result<Vec<Name>, Diagnostic> {
        let mut out = vec![self.word(what)?];
        while let Some((Tok::Comma, _)) = self.toks.get(self.at) {
            self.at += 1;
            out.push(self.word(what)?);
        }
        Ok(out)
    }

    fn done(&self) -> Result<(), Diagnostic> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("end of line"))
        }
    }
}

fn statement(toks: &[Spanned], line: usize, end: usize) -> Result<Stmt, Diagnostic> {
    let mut c = Cursor { toks, at: 0, line, end };
    let head = c.word("a statement")?;
    let stmt = match head.text.as_str() {
        "system" => Stmt::System(c.word("a system name")?),
        "temperature" => {
            let (v, n) = c.int()?;
            Stmt::Temperature(v, n)
        }
        "glue" => {
            let name = c.word("a glue name")?;
            c.keyword("strength")?;
            let (v, _) = c.int()?;
            Stmt::Glue(name, v)
        }
        "tile" => {
            let name = c.word("a tile name")?;
            let mut sides = Vec::new();
            while c.at < toks.len() {
                let before = c.at;
                let side = c.word("`n=`, `e=`, `s=` or `w=`")?;
                let idx = match side.text.as_str() {
                    "n" => 0,
                    "e" => 1,
                    "s" => 2,
                    "w" => 3,
                    _ => {
                        c.at = before;
                        return Err(c.error("`n=`, `e=`, `s=` or `w=`"));
                    }
                };
                match toks.get(c.at) {
                    Some((Tok::Equals, _)) => c.at += 1,
                    _ => return Err(c.error("`=`")),
                }
                sides.push((idx, c.word("a glue name")?));
            }
            Stmt::Tile(name, sides)
        }
        "stage" => {
            let (v, n) = c.int()?;
            Stmt::Stage(v, n)
        }
        "bin" => {
            let name = c.word("a bin name")?;
            let mut from = Vec::new();
            let mut add = Vec::new();
            if c.peek_word() == Some("from") {
                c.at += 1;
                from = c.list("a bin name")?;
            }
            if c.peek_word() == Some("add") {
                c.at += 1;
                add = c.list("a tile name")?;
            }
            Stmt::Bin { name, from, add }
        }
        "output" => Stmt::Output(c.list("a bin name")?),
        _ => {
            c.at = 0;
            return Err(c.error("`system`, `temperature`, `glue`, `tile`, `stage`, `bin` or `output`"));
        }
    };
    c.done()?;
    Ok(stmt)
}

struct Checker {
    out: Vec<Diagnostic>,
}

impl Checker {
    fn at(&mut self, n: &Name, message: String) {
        self.out.push(Diagnostic {
            kind: DiagnosticKind::Semantic,
            line: n.line,
            column: n.column,
            message,
        });
    }
}

/// Parses a system, collecting every syntax error, or every semantic error if there are none.
pub fn parse_system(text: &str) -> Result<StagedSystem, ParseError> {
    let mut stmts = Vec::new();
    let mut syntax = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = match lex(line, i + 1) {
            Ok(t) => t,
            Err(d) => {
                syntax.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        match statement(&toks, i + 1, line.chars().count() + 1) {
            Ok(s) => stmts.push(s),
            Err(d) => syntax.push(d),
        }
    }
    if !syntax.is_empty() {
        return Err(ParseError(syntax));
    }
    build(&stmts).map_err(ParseError)
}

fn build(stmts: &[Stmt]) -> Result<StagedSystem, Vec<Diagnostic>> {
    let mut ck = Checker { out: Vec::new() };
    let origin = Name { text: String::new(), line: 1, column: 1 };
    let mut name: Option<&Name> = None;
    let mut temperature: Option<u32> = None;
    let mut glues = GlueTable::new();
    for s in stmts {
        match s {
            Stmt::System(n) => match name {
                Some(_) => ck.at(n, "`system` declared twice".into()),
                None => name = Some(n),
            },
            Stmt::Temperature(v, n) => {
                if temperature.is_some() {
                    ck.at(n, "`temperature` declared twice".into());
                } else if *v == 0 {
                    ck.at(n, "temperature must be positive".into());
                } else {
                    temperature = Some(*v);
                }
            }
            Stmt::Glue(n, strength) => {
                if n.text == NULL_LABEL {
                    ck.at(n, format!("`{NULL_LABEL}` is the null glue and cannot be declared"));
                } else if let Err(e) = glues.declare(&n.text, *strength) {
                    ck.at(n, e.to_string());
                }
            }
            _ => {}
        }
    }
    if name.is_none() {
        ck.at(&origin, "missing `system` declaration".into());
    }
    if temperature.is_none() && !ck.out.iter().any(|d| d.message.contains("temperature")) {
        ck.at(&origin, "missing `temperature` declaration".into());
    }
    let mut tiles = TileSet::new(glues);
    for s in stmts {
        if let Stmt::Tile(n, sides) = s {
            let mut labels = [NULL_LABEL; 4];
            let mut given = [false; 4];
            let mut ok = true;
            for (idx, g) in sides {
                if given[*idx] {
                    ck.at(g, format!("side `{}` given twice", ["n", "e", "s", "w"][*idx]));
                    ok = false;
                }
                given[*idx] = true;
                if tiles.glues.id(&g.text).is_none() {
                    ck.at(g, format!("undeclared glue `{}`", g.text));
                    ok = false;
                }
                labels[*idx] = &g.text;
            }
            if ok {
                if let Err(e) = tiles.add_tile(&n.text, labels) {
                    ck.at(n, e.to_string());
                }
            }
        }
    }
    let mut sys = StagedSystem::new(name.map_or("", |n| n.text.as_str()), temperature.unwrap_or(1), tiles);
    let mut scopes: Vec<HashMap<String, usize>> = Vec::new();
    let mut outputs: Option<&Vec<Name>> = None;
    for s in stmts {
        match s {
            Stmt::Stage(v, n) => {
                let expected = scopes.len() as u32 + 1;
                if *v != expected {
                    ck.at(n, format!("stage {v} out of order; expected stage {expected}"));
                }
                sys.add_stage();
                scopes.push(HashMap::new());
            }
            Stmt::Bin { name, from, add } => {
                let Some(stage) = scopes.len().checked_sub(1) else {
                    ck.at(name, "bin declared before any `stage`".into());
                    continue;
                };
                let mut preds = Vec::new();
                for f in from {
                    match stage.checked_sub(1).and_then(|p| scopes[p].get(&f.text)) {
                        Some(&b) => preds.push(b),
                        None if scopes[..stage.saturating_sub(1)].iter().any(|sc| sc.contains_key(&f.text)) => {
                            ck.at(f, format!("bin `{}` is not in the previous stage; edges cannot skip stages", f.text))
                        }
                        None => ck.at(f, format!("undeclared bin `{}` in stage {}", f.text, stage)),
                    }
                }
                let mut ids: Vec<TileId> = Vec::new();
                for t in add {
                    match sys.tiles.id(&t.text) {
                        Some(id) => ids.push(id),
                        None => ck.at(t, format!("undeclared tile `{}`", t.text)),
                    }
                }
                if scopes[stage].contains_key(&name.text) {
                    ck.at(name, format!("bin `{}` declared twice in stage {}", name.text, stage + 1));
                    continue;
                }
                let b = sys.add_bin(stage, &name.text, &preds, &ids);
                scopes[stage].insert(name.text.clone(), b);
            }
            Stmt::Output(list) => {
                if outputs.is_some() {
                    ck.at(&list[0], "`output` declared twice".into());
                }
                outputs = Some(list);
            }
            _ => {}
        }
    }
    match (outputs, scopes.last()) {
        (Some(list), Some(last)) => {
            let mut bins = Vec::new();
            for n in list {
                match last.get(&n.text) {
                    Some(&b) => bins.push(b),
                    None => ck.at(n, format!("output bin `{}` is not in the last stage", n.text)),
                }
            }
            sys.set_output(&bins);
        }
        (Some(list), None) => ck.at(&list[0], "`output` without any stage".into()),
        (None, Some(_)) => ck.at(&origin, "missing `output` declaration".into()),
        (None, None) => {}
    }
    if ck.out.is_empty() {
        Ok(sys)
    } else {
        ck.out.sort_by_key(|d| (d.line, d.column));
        Err(ck.out)
    }
}

//! Parser for the `.adt` declaration language.
//!
//! ```text
//! decl := "data" Name Param* ("=" ctor ("|" ctor)*)?
//! ctor := Name atom*
//! atom := PrimName | ParamName | Name | "(" Name atom+ ")"
//! ```
//!
//! Line comments start with `--`. Declarations may be separated by `;` or
//! simply start at the next `data` keyword; newlines are whitespace.

use std::fmt;

use thiserror::Error;

use crate::schema::{validate, ConstructorDecl, DataDecl, PrimType, Schema, SchemaError, TypeExpr};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let Some(e) = &self.expected {
            write!(f, " (expected {e})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Data,
    Upper(String),
    Lower(String),
    Equals,
    Bar,
    LParen,
    RParen,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Data => "`data`".into(),
            Tok::Upper(s) | Tok::Lower(s) => format!("`{s}`"),
            Tok::Equals => "`=`".into(),
            Tok::Bar => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn error_at(pos: Pos, message: impl Into<String>, expected: Option<&str>) -> ParseError {
    ParseError { line: pos.line, column: pos.column, message: message.into(), expected: expected.map(str::to_string) }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
            continue;
        }
        if c == '-' {
            chars.next();
            advance(c, &mut pos);
            if chars.peek() == Some(&'-') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    advance(c, &mut pos);
                }
                continue;
            }
            return Err(error_at(start, "unexpected character `-`", Some("`--` comment")));
        }
        let tok = match c {
            '=' => Some(Tok::Equals),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = tok {
            chars.next();
            advance(c, &mut pos);
            out.push((tok, start));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' {
                    ident.push(c);
                    chars.next();
                    advance(c, &mut pos);
                } else {
                    break;
                }
            }
            let tok = if ident == "data" {
                Tok::Data
            } else if ident.starts_with(char::is_uppercase) {
                Tok::Upper(ident)
            } else {
                Tok::Lower(ident)
            };
            out.push((tok, start));
            continue;
        }
        if c == '[' {
            return Err(error_at(start, "list bracket syntax is not supported; write `(List a)`", None));
        }
        return Err(error_at(start, format!("unexpected character {c:?}"), None));
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}

/// Source positions of a parsed declaration's pieces, used to place
/// validation diagnostics.
struct DeclSpans {
    name: Pos,
    constructors: Vec<(Pos, Vec<Pos>)>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        error_at(self.pos(), format!("unexpected {}", self.peek().describe()), Some(expected))
    }

    fn decl(&mut self) -> Result<(DataDecl, DeclSpans), ParseError> {
        self.bump(); // `data`
        let (name, name_pos) = match self.bump() {
            (Tok::Upper(n), p) => (n, p),
            (Tok::Lower(n), p) => return Err(error_at(p, format!("type name `{n}` must be capitalized"), None)),
            (t, p) => return Err(error_at(p, format!("unexpected {}", t.describe()), Some("type name"))),
        };
        if PrimType::from_name(&name).is_some() {
            return Err(error_at(name_pos, format!("`{name}` is a primitive type"), None));
        }
        let mut params: Vec<String> = Vec::new();
        while let Tok::Lower(p) = self.peek().clone() {
            if params.contains(&p) {
                return Err(error_at(self.pos(), format!("duplicate parameter `{p}`"), None));
            }
            params.push(p);
            self.bump();
        }
        let mut spans = DeclSpans { name: name_pos, constructors: Vec::new() };
        let mut constructors = Vec::new();
        match self.peek() {
            Tok::Equals => {
                self.bump();
                loop {
                    let (ctor, ctor_spans) = self.constructor(&params)?;
                    constructors.push(ctor);
                    spans.constructors.push(ctor_spans);
                    if *self.peek() == Tok::Bar {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            Tok::Data | Tok::Semi | Tok::Eof => {}
            _ => return Err(self.unexpected("parameter name, `=`, `;`, `data` or end of input")),
        }
        match self.peek() {
            Tok::Data | Tok::Semi | Tok::Eof => {}
            _ => return Err(self.unexpected("`|`, `;`, `data` or end of input")),
        }
        Ok((DataDecl::new(name, params, constructors), spans))
    }

    fn constructor(&mut self, params: &[String]) -> Result<(ConstructorDecl, (Pos, Vec<Pos>)), ParseError> {
        let (name, pos) = match self.bump() {
            (Tok::Upper(n), p) => (n, p),
            (t, p) => return Err(error_at(p, format!("unexpected {}", t.describe()), Some("constructor name"))),
        };
        let mut fields = Vec::new();
        let mut field_pos = Vec::new();
        while matches!(self.peek(), Tok::Upper(_) | Tok::Lower(_) | Tok::LParen) {
            field_pos.push(self.pos());
            fields.push(self.atom(params)?);
        }
        Ok((ConstructorDecl::new(name, fields), (pos, field_pos)))
    }

    fn atom(&mut self, params: &[String]) -> Result<TypeExpr, ParseError> {
        match self.bump() {
            (Tok::Upper(n), _) => Ok(name_type(n, Vec::new())),
            (Tok::Lower(p), pos) => param_ref(&p, pos, params),
            (Tok::LParen, _) => {
                let inner = match self.bump() {
                    (Tok::Upper(n), pos) => {
                        let mut args = Vec::new();
                        while matches!(self.peek(), Tok::Upper(_) | Tok::Lower(_) | Tok::LParen) {
                            args.push(self.atom(params)?);
                        }
                        if !args.is_empty() && PrimType::from_name(&n).is_some() {
                            return Err(error_at(pos, format!("primitive type `{n}` takes no arguments"), None));
                        }
                        name_type(n, args)
                    }
                    (Tok::Lower(p), pos) => {
                        if matches!(self.peek(), Tok::Upper(_) | Tok::Lower(_) | Tok::LParen) {
                            return Err(error_at(
                                pos,
                                format!(
                                    "parameter `{p}` cannot be applied; higher-kinded parameters are not supported"
                                ),
                                None,
                            ));
                        }
                        param_ref(&p, pos, params)?
                    }
                    (t, p) => return Err(error_at(p, format!("unexpected {}", t.describe()), Some("type name"))),
                };
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (t, p) => Err(error_at(p, format!("unexpected {}", t.describe()), Some("`)`"))),
                }
            }
            (t, p) => Err(error_at(p, format!("unexpected {}", t.describe()), Some("field type"))),
        }
    }
}

/// Structural identity up to parameter names.
fn same_shape(a: &DataDecl, b: &DataDecl) -> bool {
    a.param_count() == b.param_count() && a.constructors == b.constructors
}

fn name_type(name: String, args: Vec<TypeExpr>) -> TypeExpr {
    match PrimType::from_name(&name) {
        Some(p) if args.is_empty() => TypeExpr::Prim(p),
        _ => TypeExpr::Named(name, args),
    }
}

fn param_ref(name: &str, pos: Pos, params: &[String]) -> Result<TypeExpr, ParseError> {
    params
        .iter()
        .position(|p| p == name)
        .map(TypeExpr::Param)
        .ok_or_else(|| error_at(pos, format!("unbound type parameter `{name}`"), None))
}

/// Parses `.adt` source into a schema containing the built-ins followed by
/// the parsed declarations. The result is validated; the first diagnostic
/// is reported as a positioned error.
pub fn parse_schema(text: &str) -> Result<Schema, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut schema = Schema::with_builtins();
    let builtins = schema.len();
    let mut spans = Vec::new();
    loop {
        match p.peek() {
            Tok::Eof => break,
            Tok::Semi => {
                p.bump();
            }
            Tok::Data => {
                let (decl, decl_spans) = p.decl()?;
                let name = decl.name.clone();
                if schema.is_builtin(&name) && schema.get(&name).is_some_and(|b| same_shape(b, &decl)) {
                    continue;
                }
                schema.insert(decl).map_err(|e| {
                    let message = match e {
                        SchemaError::DuplicateDecl(_) if schema.is_builtin(&name) => {
                            format!("`{name}` redeclares a built-in type")
                        }
                        other => other.to_string(),
                    };
                    error_at(decl_spans.name, message, None)
                })?;
                spans.push(decl_spans);
            }
            _ => return Err(p.unexpected("`data`")),
        }
    }
    if let Some(d) = validate(&schema).into_iter().next() {
        let pos = d
            .location
            .decl
            .checked_sub(builtins)
            .and_then(|i| spans.get(i))
            .map(|s| match (d.location.constructor, d.location.field) {
                (Some(c), Some(f)) => s.constructors[c].1[f],
                (Some(c), None) => s.constructors[c].0,
                _ => s.name,
            })
            .unwrap_or(Pos { line: 1, column: 1 });
        return Err(error_at(pos, d.to_string(), None));
    }
    Ok(schema)
}

/// Parses a ground type such as `Int` or `List (Maybe Bool)` against a
/// schema.
pub fn parse_type_expr(text: &str, schema: &Schema) -> Result<TypeExpr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let start = p.pos();
    let ty = match p.bump() {
        (Tok::Upper(n), _) => {
            let mut args = Vec::new();
            while matches!(p.peek(), Tok::Upper(_) | Tok::Lower(_) | Tok::LParen) {
                args.push(p.atom(&[])?);
            }
            name_type(n, args)
        }
        (Tok::LParen, _) => {
            p.at -= 1;
            p.atom(&[])?
        }
        (t, pos) => return Err(error_at(pos, format!("unexpected {}", t.describe()), Some("type name"))),
    };
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of type"));
    }
    schema.check_ground(&ty).map_err(|e| error_at(start, e.to_string(), None))?;
    Ok(ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use TypeExpr::{Named, Param, Prim};

    fn user(text: &str) -> Vec<DataDecl> {
        parse_schema(text).unwrap().user_decls().cloned().collect()
    }

    #[test]
    fn parses_two_constructor_type() {
        let decls = user("data B2 = C1 Int | C2 Int");
        assert_eq!(
            decls,
            vec![DataDecl::new(
                "B2",
                vec![],
                vec![
                    ConstructorDecl::new("C1", vec![Prim(PrimType::Int)]),
                    ConstructorDecl::new("C2", vec![Prim(PrimType::Int)]),
                ],
            )]
        );
    }

    #[test]
    fn identical_builtin_redeclaration_is_accepted() {
        let s =
            parse_schema("data B = B1 Int | B2 Int\ndata Nat = Zero | Suc Nat\ndata List x = Nil | Cons x (List x)")
                .unwrap();
        assert_eq!(s, Schema::with_builtins());
        let b = s.get("B").unwrap();
        assert_eq!(b.param_count(), 0);
        assert_eq!(
            b.constructors,
            vec![
                ConstructorDecl::new("B1", vec![Prim(PrimType::Int)]),
                ConstructorDecl::new("B2", vec![Prim(PrimType::Int)]),
            ]
        );
        assert_eq!(
            s.get("Nat").unwrap().constructors,
            vec![ConstructorDecl::new("Zero", vec![]), ConstructorDecl::new("Suc", vec![Named("Nat".into(), vec![])])]
        );
    }

    #[test]
    fn differing_builtin_redeclaration_is_rejected() {
        let e = parse_schema("data B = B1 Int | B2 Bool").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(e.message.contains("built-in"));
    }

    #[test]
    fn parses_recursive_and_nested_types() {
        let decls = user("data N = Z | S N\ndata T a = MkT Int a (Maybe a) (List (List a))");
        assert_eq!(decls[0].constructors[1].fields, vec![Named("N".into(), vec![])]);
        assert_eq!(decls[1].param_count(), 1);
        assert_eq!(
            decls[1].constructors[0].fields,
            vec![
                Prim(PrimType::Int),
                Param(0),
                Named("Maybe".into(), vec![Param(0)]),
                Named("List".into(), vec![Named("List".into(), vec![Param(0)])]),
            ]
        );
    }

    #[test]
    fn unresolved_name_is_positioned() {
        let e = parse_schema("data Z = MkZ (Foo Int)").unwrap_err();
        assert!(e.message.contains("Foo"), "{e}");
        assert_eq!((e.line, e.column), (1, 14));
    }

    #[test]
    fn arity_error_points_at_field() {
        let e = parse_schema("-- header\ndata Y = MkY Int (List Int Int)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 18));
        assert!(e.message.contains("expects 1"));
    }

    #[test]
    fn empty_types_and_separators() {
        let decls = user("data V; data W = W Int ; data U2\n");
        assert_eq!(decls.len(), 3);
        assert!(decls[0].constructors.is_empty());
        assert!(decls[2].constructors.is_empty());
    }

    #[test]
    fn comments_and_empty_input() {
        assert_eq!(user("").len(), 0);
        assert_eq!(user("-- nothing here\n   \n").len(), 0);
        assert_eq!(user("data P = P Int -- trailing\n  | Q").len(), 1);
    }

    #[test]
    fn errors_cover_bad_syntax() {
        for (src, needle) in [
            ("data X = MkX [Int]", "bracket"),
            ("data X a = MkX (a Int)", "higher-kinded"),
            ("data X = MkX b", "unbound"),
            ("data x = X", "capitalized"),
            ("data X = MkX (Int Bool)", "primitive"),
            ("data Int = I", "primitive"),
            ("data X a a = X", "duplicate parameter"),
            ("data X = A | A", "duplicate constructor"),
            ("data X = A\ndata X = B", "already declared"),
            ("X = A", "unexpected"),
            ("data X = A (List Int", "unexpected end of input"),
            ("data X = A & B", "unexpected character"),
        ] {
            let e = parse_schema(src).unwrap_err();
            assert!(e.message.contains(needle), "{src:?}: {e}");
        }
    }

    #[test]
    fn type_expressions_parse_against_schema() {
        let s = Schema::with_builtins();
        assert_eq!(parse_type_expr("Int", &s), Ok(Prim(PrimType::Int)));
        assert_eq!(
            parse_type_expr("List (Maybe Bool)", &s),
            Ok(Named("List".into(), vec![Named("Maybe".into(), vec![Prim(PrimType::Bool)])]))
        );
        assert_eq!(parse_type_expr("(Maybe Int)", &s).unwrap().head(), "Maybe");
        assert!(parse_type_expr("List", &s).is_err());
        assert!(parse_type_expr("Foo", &s).is_err());
    }
}

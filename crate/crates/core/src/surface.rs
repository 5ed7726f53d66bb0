//! Surface syntax: concept and context symbols, context templates, and the
//! sentence language in its natural and symbolic spellings.
//!
//! | natural                    | symbolic                                 |
//! |----------------------------|------------------------------------------|
//! | `all a are b`              | `a [= b`                                 |
//! | `if p(a) then p(b)`        | `a [=_p b`                               |
//! | `p is upward monotone`     | `forall x,y (x [= y <-> x [=_p y)`       |
//! | `p is downward monotone`   | `forall x,y (x [= y <-> y [=_p x)`       |
//!
//! Concepts and contexts that would be ambiguous when written bare (multi-word
//! names containing a keyword, punctuation, template strings with spaces) are
//! written between double quotes, with `\"` and `\\` escapes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

/// The distinguished slot token of a context template.
pub const VARIABLE: &str = "x";

const KEYWORDS: &[&str] = &["all", "are", "if", "then", "is", "forall"];
const SUBSUMES: &str = "[=";
const SUBSUMES_IN: &str = "[=_";
const IFF: &str = "<->";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("unrecognized sentence: {0:?}")]
    Syntax(String),
    #[error("context {0:?} is not registered")]
    UnknownContext(String),
    #[error("empty concept")]
    EmptyConcept,
    #[error("\"{VARIABLE}\" is reserved for the context slot and cannot name a concept")]
    ReservedConcept,
    #[error("empty context identifier")]
    EmptyContext,
    #[error("context template has no \"{VARIABLE}\" slot: {0:?}")]
    NoVariable(String),
    #[error("context template has {count} \"{VARIABLE}\" slots, expected one: {text:?}")]
    MultipleVariables { text: String, count: usize },
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<SurfaceError>,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Lowercase, trim, and collapse internal whitespace to single spaces.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptSymbol(String);

impl ConceptSymbol {
    pub fn new(raw: &str) -> Result<Self, SurfaceError> {
        let name = normalize(raw);
        if name.is_empty() {
            return Err(SurfaceError::EmptyConcept);
        }
        if name == VARIABLE {
            return Err(SurfaceError::ReservedConcept);
        }
        Ok(Self(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ConceptSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a context: the normalized token sequence, so
/// `There were no x today.` and `there were  no x today .` share an id.
/// Abstract contexts (`p`, `p1`) are just short names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextSymbol(String);

impl ContextSymbol {
    pub fn new(raw: &str) -> Result<Self, SurfaceError> {
        let spaced: Vec<String> = tokenize(raw).into_iter().map(|t| t.text).collect();
        let id = normalize(&spaced.join(" "));
        if id.is_empty() {
            return Err(SurfaceError::EmptyContext);
        }
        Ok(Self(id))
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ContextSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A surface token. `glued` tokens were written without whitespace before
/// them (detached trailing punctuation), so rendering reproduces the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub glued: bool,
}

fn is_detachable(c: char) -> bool {
    matches!(c, '.' | ',' | ';' | ':' | '!' | '?')
}

/// Whitespace tokenization with trailing punctuation runs split off as
/// their own (glued) tokens: `"today."` becomes `today` + `.`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for word in text.split_whitespace() {
        let stem = word.trim_end_matches(is_detachable);
        if stem.is_empty() || stem.len() == word.len() {
            tokens.push(Token {
                text: word.to_string(),
                glued: false,
            });
        } else {
            tokens.push(Token {
                text: stem.to_string(),
                glued: false,
            });
            tokens.push(Token {
                text: word[stem.len()..].to_string(),
                glued: true,
            });
        }
    }
    tokens
}

/// Join tokens back into a string, honouring glue.
pub fn render_tokens<'a>(tokens: impl IntoIterator<Item = &'a Token>) -> String {
    let mut out = String::new();
    for t in tokens {
        if !out.is_empty() && !t.glued {
            out.push(' ');
        }
        out.push_str(&t.text);
    }
    out
}

fn is_variable(token: &Token) -> bool {
    token.text.eq_ignore_ascii_case(VARIABLE)
}

/// A sentence with exactly one gap, marked by the token `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextTemplate {
    symbol: ContextSymbol,
    tokens: Vec<Token>,
    slot: usize,
}

impl ContextTemplate {
    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        Self::from_tokens(tokenize(text))
    }

    pub fn from_tokens(mut tokens: Vec<Token>) -> Result<Self, SurfaceError> {
        let slots: Vec<usize> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| is_variable(t))
            .map(|(i, _)| i)
            .collect();
        match slots.len() {
            0 => Err(SurfaceError::NoVariable(render_tokens(&tokens))),
            1 => {
                let slot = slots[0];
                tokens[slot].text = VARIABLE.to_string();
                let id = tokens
                    .iter()
                    .map(|t| t.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                Ok(Self {
                    symbol: ContextSymbol::new(&id)?,
                    tokens,
                    slot,
                })
            }
            count => Err(SurfaceError::MultipleVariables {
                text: render_tokens(&tokens),
                count,
            }),
        }
    }

    pub fn symbol(&self) -> &ContextSymbol {
        &self.symbol
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    /// `p(a)`: the template with its slot filled by `a`.
    pub fn substitute(&self, concept: &ConceptSymbol) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if !out.is_empty() && !t.glued {
                out.push(' ');
            }
            if i == self.slot {
                out.push_str(concept.name());
            } else {
                out.push_str(&t.text);
            }
        }
        out
    }
}

impl fmt::Display for ContextTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tokens(&self.tokens))
    }
}

/// Shorthand for [`ContextTemplate::parse`].
pub fn parse_context(text: &str) -> Result<ContextTemplate, SurfaceError> {
    ContextTemplate::parse(text)
}

/// Shorthand for [`ContextTemplate::substitute`].
pub fn substitute(template: &ContextTemplate, concept: &ConceptSymbol) -> String {
    template.substitute(concept)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sentence {
    /// `all a are b`
    Subsumption(ConceptSymbol, ConceptSymbol),
    /// `if p(a) then p(b)`
    ContextEntailment(ContextSymbol, ConceptSymbol, ConceptSymbol),
    /// `p is upward monotone`
    UpwardMonotone(ContextSymbol),
    /// `p is downward monotone`
    DownwardMonotone(ContextSymbol),
}

impl Sentence {
    pub fn concepts(&self) -> impl Iterator<Item = &ConceptSymbol> {
        let (a, b) = match self {
            Sentence::Subsumption(a, b) | Sentence::ContextEntailment(_, a, b) => (Some(a), Some(b)),
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }

    pub fn context(&self) -> Option<&ContextSymbol> {
        match self {
            Sentence::Subsumption(..) => None,
            Sentence::ContextEntailment(p, ..)
            | Sentence::UpwardMonotone(p)
            | Sentence::DownwardMonotone(p) => Some(p),
        }
    }

    pub fn format(&self, style: Style) -> String {
        format_sentence(self, style)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sentence(self, Style::Natural))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Style {
    #[default]
    Natural,
    Symbolic,
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn is_delimiter(c: char) -> bool {
    matches!(c, '"' | '(' | ')' | ',')
}

fn needs_quoting(c: char) -> bool {
    is_delimiter(c) || c == '\\' || c == '#'
}

fn is_plain_word(word: &str) -> bool {
    !KEYWORDS.contains(&word) && !word.starts_with(SUBSUMES) && word != IFF
}

fn concept_spelling(c: &ConceptSymbol) -> String {
    let name = c.name();
    if name.chars().any(needs_quoting) || !name.split(' ').all(is_plain_word) {
        quote(name)
    } else {
        name.to_string()
    }
}

fn context_spelling(p: &ContextSymbol) -> String {
    let id = p.id();
    let bare = id
        .chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
        && !KEYWORDS.contains(&id);
    if bare {
        id.to_string()
    } else {
        quote(id)
    }
}

pub fn format_sentence(sentence: &Sentence, style: Style) -> String {
    use Sentence::*;
    match (style, sentence) {
        (Style::Natural, Subsumption(a, b)) => {
            format!("all {} are {}", concept_spelling(a), concept_spelling(b))
        }
        (Style::Natural, ContextEntailment(p, a, b)) => {
            let p = context_spelling(p);
            format!(
                "if {p}({}) then {p}({})",
                concept_spelling(a),
                concept_spelling(b)
            )
        }
        (Style::Natural, UpwardMonotone(p)) => {
            format!("{} is upward monotone", context_spelling(p))
        }
        (Style::Natural, DownwardMonotone(p)) => {
            format!("{} is downward monotone", context_spelling(p))
        }
        (Style::Symbolic, Subsumption(a, b)) => {
            format!("{} [= {}", concept_spelling(a), concept_spelling(b))
        }
        (Style::Symbolic, ContextEntailment(p, a, b)) => format!(
            "{} [=_{} {}",
            concept_spelling(a),
            context_spelling(p),
            concept_spelling(b)
        ),
        (Style::Symbolic, UpwardMonotone(p)) => {
            format!("forall x,y (x [= y <-> x [=_{} y)", context_spelling(p))
        }
        (Style::Symbolic, DownwardMonotone(p)) => {
            format!("forall x,y (x [= y <-> y [=_{} x)", context_spelling(p))
        }
    }
}

/// Known context templates. An open registry accepts any context reference;
/// a closed one (loaded from a registry file) rejects unregistered ids.
#[derive(Clone, Debug, Default)]
pub struct ContextRegistry {
    templates: BTreeMap<ContextSymbol, ContextTemplate>,
    closed: bool,
}

impl ContextRegistry {
    pub fn open() -> Self {
        Self::default()
    }

    pub fn closed(templates: impl IntoIterator<Item = ContextTemplate>) -> Self {
        Self {
            templates: templates
                .into_iter()
                .map(|t| (t.symbol().clone(), t))
                .collect(),
            closed: true,
        }
    }

    /// Registry file: one template per line; `#` comments and blank lines
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        let mut templates = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let t = ContextTemplate::parse(line).map_err(|e| SurfaceError::Line {
                line: i + 1,
                source: Box::new(e),
            })?;
            templates.push(t);
        }
        Ok(Self::closed(templates))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SurfaceError> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn get(&self, id: &ContextSymbol) -> Option<&ContextTemplate> {
        self.templates.get(id)
    }

    pub fn templates(&self) -> impl Iterator<Item = &ContextTemplate> {
        self.templates.values()
    }

    /// Context id for a command-line style reference: a template such as
    /// `There were no x today .` or a bare identifier such as `p`.
    pub fn resolve_reference(&self, reference: &str) -> Result<ContextSymbol, SurfaceError> {
        self.resolve(reference, true)
    }

    fn resolve(&self, reference: &str, quoted: bool) -> Result<ContextSymbol, SurfaceError> {
        let symbol = if quoted {
            match ContextTemplate::parse(reference) {
                Ok(t) => t.symbol,
                Err(_) => ContextSymbol::new(reference)?,
            }
        } else {
            ContextSymbol::new(reference)?
        };
        if self.closed && !self.templates.contains_key(&symbol) {
            return Err(SurfaceError::UnknownContext(symbol.0));
        }
        Ok(symbol)
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, SurfaceError> {
    std::fs::read_to_string(path).map_err(|e| SurfaceError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Lexeme {
    Word(String),
    Quoted(String),
    Subsumes,
    SubsumesIn,
    Iff,
    Open,
    Close,
    Comma,
}

fn lex(text: &str) -> Result<Vec<Lexeme>, SurfaceError> {
    let syntax = || SurfaceError::Syntax(text.to_string());
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' => {
                chars.next();
                out.push(match c {
                    '(' => Lexeme::Open,
                    ')' => Lexeme::Close,
                    _ => Lexeme::Comma,
                });
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\\') => s.push(chars.next().ok_or_else(syntax)?),
                        Some(c) => s.push(c),
                        None => return Err(syntax()),
                    }
                }
                out.push(Lexeme::Quoted(s));
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || is_delimiter(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                if let Some(rest) = word.strip_prefix(SUBSUMES_IN) {
                    out.push(Lexeme::SubsumesIn);
                    if !rest.is_empty() {
                        out.push(Lexeme::Word(rest.to_string()));
                    }
                } else if word == SUBSUMES {
                    out.push(Lexeme::Subsumes);
                } else if word == IFF {
                    out.push(Lexeme::Iff);
                } else {
                    out.push(Lexeme::Word(word));
                }
            }
        }
    }
    Ok(out)
}

struct SentenceParser<'a> {
    text: &'a str,
    items: Vec<Lexeme>,
    pos: usize,
    registry: &'a ContextRegistry,
}

impl<'a> SentenceParser<'a> {
    fn syntax(&self) -> SurfaceError {
        SurfaceError::Syntax(self.text.to_string())
    }

    fn peek(&self) -> Option<&Lexeme> {
        self.items.get(self.pos)
    }

    fn next(&mut self) -> Option<Lexeme> {
        let item = self.items.get(self.pos).cloned();
        self.pos += 1;
        item
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SurfaceError> {
        match self.next() {
            Some(Lexeme::Word(w)) if w.eq_ignore_ascii_case(kw) => Ok(()),
            _ => Err(self.syntax()),
        }
    }

    fn expect(&mut self, item: Lexeme) -> Result<(), SurfaceError> {
        if self.next().as_ref() == Some(&item) {
            Ok(())
        } else {
            Err(self.syntax())
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Lexeme::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn finish(&self) -> Result<(), SurfaceError> {
        if self.pos == self.items.len() {
            Ok(())
        } else {
            Err(self.syntax())
        }
    }

    /// A concept: one quoted string, or a run of bare words ending before
    /// `stop` (or at the end of input / any non-word lexeme).
    fn concept(&mut self, stop: Option<&str>) -> Result<ConceptSymbol, SurfaceError> {
        if let Some(Lexeme::Quoted(s)) = self.peek() {
            let s = s.clone();
            self.pos += 1;
            return ConceptSymbol::new(&s);
        }
        let mut words = Vec::new();
        while let Some(Lexeme::Word(w)) = self.peek() {
            if stop.is_some_and(|kw| w.eq_ignore_ascii_case(kw)) {
                break;
            }
            words.push(w.clone());
            self.pos += 1;
        }
        ConceptSymbol::new(&words.join(" "))
    }

    fn context(&mut self) -> Result<ContextSymbol, SurfaceError> {
        match self.next() {
            Some(Lexeme::Word(w)) => self.registry.resolve(&w, false),
            Some(Lexeme::Quoted(s)) => self.registry.resolve(&s, true),
            _ => Err(self.syntax()),
        }
    }

    fn variable(&mut self) -> Result<String, SurfaceError> {
        match self.next() {
            Some(Lexeme::Word(w)) if w == "x" || w == "y" => Ok(w),
            _ => Err(self.syntax()),
        }
    }

    fn parse(mut self) -> Result<Sentence, SurfaceError> {
        if self.items.is_empty() {
            return Err(self.syntax());
        }
        let sentence = if self.at_keyword("all") {
            self.pos += 1;
            let a = self.concept(Some("are"))?;
            self.keyword("are")?;
            let b = self.concept(None)?;
            Sentence::Subsumption(a, b)
        } else if self.at_keyword("if") {
            self.pos += 1;
            let p = self.context()?;
            self.expect(Lexeme::Open)?;
            let a = self.concept(None)?;
            self.expect(Lexeme::Close)?;
            self.keyword("then")?;
            let q = self.context()?;
            if p != q {
                return Err(self.syntax());
            }
            self.expect(Lexeme::Open)?;
            let b = self.concept(None)?;
            self.expect(Lexeme::Close)?;
            Sentence::ContextEntailment(p, a, b)
        } else if self.at_keyword("forall") {
            self.pos += 1;
            self.parse_quantified()?
        } else if self.items.contains(&Lexeme::Subsumes) || self.items.contains(&Lexeme::SubsumesIn)
        {
            let a = self.concept(None)?;
            match self.next() {
                Some(Lexeme::Subsumes) => Sentence::Subsumption(a, self.concept(None)?),
                Some(Lexeme::SubsumesIn) => {
                    let p = self.context()?;
                    Sentence::ContextEntailment(p, a, self.concept(None)?)
                }
                _ => return Err(self.syntax()),
            }
        } else {
            let p = self.context()?;
            self.keyword("is")?;
            let upward = match self.next() {
                Some(Lexeme::Word(w)) if w.eq_ignore_ascii_case("upward") => true,
                Some(Lexeme::Word(w)) if w.eq_ignore_ascii_case("downward") => false,
                _ => return Err(self.syntax()),
            };
            self.keyword("monotone")?;
            if upward {
                Sentence::UpwardMonotone(p)
            } else {
                Sentence::DownwardMonotone(p)
            }
        };
        self.finish()?;
        Ok(sentence)
    }

    // forall x,y (x [= y <-> x [=_p y)   |   forall x,y (x [= y <-> y [=_p x)
    fn parse_quantified(&mut self) -> Result<Sentence, SurfaceError> {
        let first = self.variable()?;
        self.expect(Lexeme::Comma)?;
        let second = self.variable()?;
        if first == second {
            return Err(self.syntax());
        }
        self.expect(Lexeme::Open)?;
        let lhs = self.variable()?;
        self.expect(Lexeme::Subsumes)?;
        let rhs = self.variable()?;
        if lhs == rhs {
            return Err(self.syntax());
        }
        self.expect(Lexeme::Iff)?;
        let l = self.variable()?;
        self.expect(Lexeme::SubsumesIn)?;
        let p = self.context()?;
        let r = self.variable()?;
        self.expect(Lexeme::Close)?;
        if (l.as_str(), r.as_str()) == (lhs.as_str(), rhs.as_str()) {
            Ok(Sentence::UpwardMonotone(p))
        } else if (l.as_str(), r.as_str()) == (rhs.as_str(), lhs.as_str()) {
            Ok(Sentence::DownwardMonotone(p))
        } else {
            Err(self.syntax())
        }
    }
}

/// Parse one sentence in either spelling.
pub fn parse_sentence(text: &str, registry: &ContextRegistry) -> Result<Sentence, SurfaceError> {
    SentenceParser {
        text,
        items: lex(text)?,
        pos: 0,
        registry,
    }
    .parse()
}

/// Theory file: one sentence per line, `#` comments, blank lines ignored.
pub fn parse_theory_text(
    text: &str,
    registry: &ContextRegistry,
) -> Result<Vec<Sentence>, SurfaceError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let s = parse_sentence(line, registry).map_err(|e| SurfaceError::Line {
            line: i + 1,
            source: Box::new(e),
        })?;
        out.push(s);
    }
    Ok(out)
}

// `#` outside a quoted string starts a comment.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

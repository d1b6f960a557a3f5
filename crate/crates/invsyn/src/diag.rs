//! Source positions and diagnostics shared by the parser, resolver, and CLI.

use std::fmt;

/// 1-based line/column position in a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub const fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Type,
    Name,
    PrimedVariable,
    UnrepairableScope,
    Config,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Type => "type error",
            DiagnosticKind::Name => "name error",
            DiagnosticKind::PrimedVariable => "primed variable error",
            DiagnosticKind::UnrepairableScope => "unrepairable scope error",
            DiagnosticKind::Config => "config error",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: Option<Span>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, span: Option<Span>, message: impl Into<String>) -> Self {
        Diagnostic { kind, span, message: message.into() }
    }

    pub fn syntax(span: Span, message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Syntax, Some(span), message)
    }

    pub fn type_err(span: Span, message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Type, Some(span), message)
    }

    pub fn name_err(span: Span, message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Name, Some(span), message)
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Config, None, message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(sp) => write!(f, "{sp}: {}: {}", self.kind, self.message),
            None => write!(f, "{}: {}", self.kind, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Render a diagnostic list for terminal output, one per line.
pub fn render_all(diags: &[Diagnostic]) -> String {
    let mut out = String::new();
    for d in diags {
        out.push_str(&d.to_string());
        out.push('\n');
    }
    out
}

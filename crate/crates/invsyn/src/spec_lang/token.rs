//! Token set for the protocol spec language.

use crate::diag::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    // Keywords.
    Sort,
    Const,
    Var,
    Init,
    Action,
    Safety,
    Require,
    Unchanged,
    SetKw,
    MapKw,
    BoolKw,
    TrueKw,
    FalseKw,
    Except,

    // Identifiers: plain and primed (`x'`).
    Ident(String),
    PrimedIdent(String),

    // Logical operators.
    And,     // /\
    Or,      // \/
    Not,     // ~
    Implies, // =>
    Iff,     // <=>

    // Comparison.
    Eq,  // =
    Neq, // #

    // Set operators.
    In,        // \in
    NotIn,     // \notin
    Subseteq,  // \subseteq
    Union,     // \cup
    Inter,     // \cap
    SetMinus,  // \ (difference)

    // Quantifiers.
    Forall, // \A
    Exists, // \E

    // Punctuation.
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,
    Bang, // ! in EXCEPT syntax: f' = [f EXCEPT ![k] = v]
    Arrow, // -> in EXCEPT-free map literal positions (reserved)

    Eof,
}

impl Tok {
    /// Human-readable name used in error messages.
    pub fn describe(&self) -> String {
        match self {
            Tok::Sort => "'SORT'".into(),
            Tok::Const => "'CONST'".into(),
            Tok::Var => "'VAR'".into(),
            Tok::Init => "'INIT'".into(),
            Tok::Action => "'ACTION'".into(),
            Tok::Safety => "'SAFETY'".into(),
            Tok::Require => "'REQUIRE'".into(),
            Tok::Unchanged => "'UNCHANGED'".into(),
            Tok::SetKw => "'SET'".into(),
            Tok::MapKw => "'MAP'".into(),
            Tok::BoolKw => "'BOOL'".into(),
            Tok::TrueKw => "'TRUE'".into(),
            Tok::FalseKw => "'FALSE'".into(),
            Tok::Except => "'EXCEPT'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::PrimedIdent(s) => format!("primed identifier '{s}''"),
            Tok::And => "'/\\'".into(),
            Tok::Or => "'\\/'".into(),
            Tok::Not => "'~'".into(),
            Tok::Implies => "'=>'".into(),
            Tok::Iff => "'<=>'".into(),
            Tok::Eq => "'='".into(),
            Tok::Neq => "'#'".into(),
            Tok::In => "'\\in'".into(),
            Tok::NotIn => "'\\notin'".into(),
            Tok::Subseteq => "'\\subseteq'".into(),
            Tok::Union => "'\\cup'".into(),
            Tok::Inter => "'\\cap'".into(),
            Tok::SetMinus => "'\\'".into(),
            Tok::Forall => "'\\A'".into(),
            Tok::Exists => "'\\E'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Semi => "';'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannedTok {
    pub tok: Tok,
    pub span: Span,
}

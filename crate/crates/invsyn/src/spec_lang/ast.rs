//! Typed AST for protocol specifications and clause expressions.
//!
//! Bound variables use de Bruijn indices after resolution: index 0 is the
//! innermost binder. Action parameters form the outermost binder scope of an
//! action's guard and update expressions, bound in declaration order (the
//! first parameter is the outermost binder).

use crate::diag::Span;

/// Index into `ProtocolSpec::sorts`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

/// Index into `ProtocolSpec::variables` (declaration order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

/// Index into `ProtocolSpec::constants` (declaration order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstId(pub u32);

impl SortId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}
impl VarId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}
impl ConstId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Codomain of a map type: restricted to booleans or sort elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MapCod {
    Bool,
    Elem(SortId),
}

impl MapCod {
    pub fn as_var_type(self) -> VarType {
        match self {
            MapCod::Bool => VarType::Bool,
            MapCod::Elem(s) => VarType::Elem(s),
        }
    }
}

/// Type of a state variable, constant, or expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarType {
    Bool,
    Elem(SortId),
    SetOf(SortId),
    Map { key: SortId, cod: MapCod },
}

impl VarType {
    /// Render with sort names filled in from `spec`.
    pub fn display(&self, spec: &ProtocolSpec) -> String {
        match self {
            VarType::Bool => "BOOL".to_string(),
            VarType::Elem(s) => spec.sorts[s.idx()].clone(),
            VarType::SetOf(s) => format!("SET {}", spec.sorts[s.idx()]),
            VarType::Map { key, cod } => {
                let cod_s = match cod {
                    MapCod::Bool => "BOOL".to_string(),
                    MapCod::Elem(s) => spec.sorts[s.idx()].clone(),
                };
                format!("MAP {} {}", spec.sorts[key.idx()], cod_s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantKind {
    Forall,
    Exists,
}

/// An expression node with its source position.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    True,
    False,

    /// Unresolved name, present only between parsing and resolution.
    Ident(String),

    /// State variable reference.
    Var(VarId, String),
    /// Declared constant reference.
    Const(ConstId, String),
    /// Bound-variable reference (de Bruijn index; 0 = innermost binder).
    /// The name is the binder's surface name, kept for printing.
    Bound(u32, String),
    /// Concrete sort element (only producible when an element table is in
    /// scope, e.g. when re-parsing clauses against a ground instance).
    ElemLit { sort: SortId, index: u8, name: String },
    /// A sort used as a set value (the full sort), e.g. `vote_yes = Node`.
    SortSet(SortId, String),

    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Quant { kind: QuantKind, var: String, sort: Option<SortId>, sort_name: String, body: Box<Expr> },

    Eq(Box<Expr>, Box<Expr>),
    In(Box<Expr>, Box<Expr>),
    Subseteq(Box<Expr>, Box<Expr>),
    Union(Box<Expr>, Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    /// Set literal `{}` / `{e1, e2}`. The sort is filled by the resolver
    /// (`None` only before resolution or for `{}` pending inference).
    SetLit { sort: Option<SortId>, elems: Vec<Expr> },

    /// Map application `m[k]`.
    MapApp { map: Box<Expr>, key: Box<Expr> },
    /// Map update `[m EXCEPT ![k] = v]`.
    MapUpdate { map: Box<Expr>, key: Box<Expr>, val: Box<Expr> },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Total number of AST nodes (used as the clause-size tie-break).
    pub fn node_count(&self) -> usize {
        let mut n = 1;
        self.for_each_child(|c| n += c.node_count());
        n
    }

    /// Visit direct children.
    pub fn for_each_child<'a>(&'a self, mut f: impl FnMut(&'a Expr)) {
        match &self.kind {
            ExprKind::True
            | ExprKind::False
            | ExprKind::Ident(_)
            | ExprKind::Var(..)
            | ExprKind::Const(..)
            | ExprKind::Bound(..)
            | ExprKind::ElemLit { .. }
            | ExprKind::SortSet(..) => {}
            ExprKind::Not(a) => f(a),
            ExprKind::And(xs) | ExprKind::Or(xs) => xs.iter().for_each(f),
            ExprKind::Implies(a, b)
            | ExprKind::Iff(a, b)
            | ExprKind::Eq(a, b)
            | ExprKind::In(a, b)
            | ExprKind::Subseteq(a, b)
            | ExprKind::Union(a, b)
            | ExprKind::Inter(a, b)
            | ExprKind::Diff(a, b) => {
                f(a);
                f(b);
            }
            ExprKind::Quant { body, .. } => f(body),
            ExprKind::SetLit { elems, .. } => elems.iter().for_each(f),
            ExprKind::MapApp { map, key } => {
                f(map);
                f(key);
            }
            ExprKind::MapUpdate { map, key, val } => {
                f(map);
                f(key);
                f(val);
            }
        }
    }

    /// Whether any `Ident` (unresolved name) remains.
    pub fn has_unresolved(&self) -> bool {
        if matches!(self.kind, ExprKind::Ident(_)) {
            return true;
        }
        let mut found = false;
        self.for_each_child(|c| found = found || c.has_unresolved());
        found
    }

    /// Collect the distinct state variables referenced, in ascending id order.
    pub fn state_vars(&self) -> Vec<VarId> {
        fn walk(e: &Expr, out: &mut Vec<VarId>) {
            if let ExprKind::Var(v, _) = e.kind {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            e.for_each_child(|c| walk(c, out));
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out
    }
}

/// One protocol action: guard plus a per-variable update table.
#[derive(Debug, Clone)]
pub struct Action {
    pub name: String,
    pub params: Vec<(String, SortId)>,
    /// All REQUIRE statements conjoined (TRUE when there are none).
    pub guard: Expr,
    /// Indexed by `VarId`. `Some(e)` gives the next value; `None` is UNCHANGED.
    pub updates: Vec<Option<Expr>>,
    pub span: Span,
}

/// A parsed, resolved, type-checked protocol specification.
#[derive(Debug, Clone)]
pub struct ProtocolSpec {
    pub name: String,
    pub sorts: Vec<String>,
    pub constants: Vec<(String, VarType)>,
    pub variables: Vec<(String, VarType)>,
    pub init: Expr,
    pub actions: Vec<Action>,
    pub safety: Expr,
}

impl ProtocolSpec {
    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name).map(|i| SortId(i as u32))
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|(n, _)| n == name).map(|i| VarId(i as u32))
    }

    pub fn const_id(&self, name: &str) -> Option<ConstId> {
        self.constants.iter().position(|(n, _)| n == name).map(|i| ConstId(i as u32))
    }

    pub fn var_type(&self, v: VarId) -> VarType {
        self.variables[v.idx()].1
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.variables[v.idx()].0
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.idx()]
    }

    /// True when `name` names a sort, constant, variable, or action.
    pub fn is_spec_name(&self, name: &str) -> bool {
        self.sort_id(name).is_some()
            || self.const_id(name).is_some()
            || self.var_id(name).is_some()
            || self.actions.iter().any(|a| a.name == name)
    }
}

/// Canonicalized quantifier prefix with an implicit hole for the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantifierTemplate {
    pub prefix: Vec<(QuantKind, SortId)>,
}

impl QuantifierTemplate {
    /// Render in clause syntax with canonical bound names and a hole marker,
    /// e.g. `\A v1 \in Node : \E v2 \in Value : <clause>`.
    pub fn display(&self, spec: &ProtocolSpec) -> String {
        let mut out = String::new();
        for (i, (kind, sort)) in self.prefix.iter().enumerate() {
            let q = match kind {
                QuantKind::Forall => "\\A",
                QuantKind::Exists => "\\E",
            };
            out.push_str(&format!("{q} v{} \\in {} : ", i + 1, spec.sort_name(*sort)));
        }
        out.push_str("<clause>");
        out
    }
}

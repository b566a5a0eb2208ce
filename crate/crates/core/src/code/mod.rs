//! Language-neutral object-oriented code model.
//!
//! A package holds modules (classes); a module holds state variables and
//! transformations (methods). Method bodies are lists of [`Block`]s: blocks
//! carry no meaning and exist so renderers can place blank lines and
//! comments between conceptual fragments.
//!
//! The state types name the classes of the generated story manager directly
//! ([`StateType::Node`], [`StateType::StoryManager`], ...), which ties the
//! model to this one application.

pub mod build;
mod validate;

use serde::Serialize;

pub use validate::{validate_ir, IrDiagCode, IrDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractCode {
    pub package: Package,
}

impl AbstractCode {
    /// Stable JSON dump used by snapshot tests.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("IR serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Package {
    pub name: String,
    pub modules: Vec<CodeModule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeModule {
    pub name: String,
    pub scope: Scope,
    pub vars: Vec<StateVar>,
    pub funcs: Vec<Transformation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transformation {
    pub name: String,
    pub scope: Scope,
    pub ret: TransType,
    pub params: Vec<Parameter>,
    pub body: Vec<Block>,
}

impl Transformation {
    pub fn is_constructor(&self) -> bool {
        matches!(self.ret, TransType::Construct(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block(pub Vec<Statement>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Statement {
    Assign { target: Value, source: Value },
    Decl(Declaration),
    Cond(Conditional),
    Iter(Iteration),
    Jump(Jump),
    Return(Value),
    Value(Value),
    Comment(Comment),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Declaration {
    VarDec { name: String, ty: StateType },
    ListDec { name: String, elem: StateType, capacity: usize },
    /// `aux` names a helper array for dialects that cannot initialize a list
    /// from literals directly.
    ListDecLiterals { name: String, aux: String, elem: StateType, literals: Vec<Literal> },
    VarDecDef { name: String, ty: StateType, init: Value },
    ObjDecDef { name: String, ty: StateType, init: Value },
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::VarDec { name, .. }
            | Declaration::ListDec { name, .. }
            | Declaration::ListDecLiterals { name, .. }
            | Declaration::VarDecDef { name, .. }
            | Declaration::ObjDecDef { name, .. } => name,
        }
    }

    pub fn ty(&self) -> StateType {
        match self {
            Declaration::VarDec { ty, .. } | Declaration::VarDecDef { ty, .. } | Declaration::ObjDecDef { ty, .. } => {
                ty.clone()
            }
            Declaration::ListDec { elem, .. } | Declaration::ListDecLiterals { elem, .. } => {
                StateType::List(Box::new(elem.clone()))
            }
        }
    }
}

/// `if` / `else if` chain with an optional `else`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conditional {
    pub branches: Vec<(Value, Vec<Block>)>,
    pub otherwise: Option<Vec<Block>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Iteration {
    While { cond: Value, body: Vec<Block> },
    For { init: Box<Statement>, cond: Value, step: Box<Statement>, body: Vec<Block> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Jump {
    Break,
    Continue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Comment {
    Line(String),
    /// Banner: the text followed by dashes up to `width` columns.
    Delimit(String, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BaseType {
    Bool,
    Int,
    String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum StateType {
    Node,
    NodeTransition,
    Section,
    SectionTransition,
    Story,
    StoryManager,
    List(Box<StateType>),
    Base(BaseType),
}

impl StateType {
    /// The six object types, in the order their classes are generated.
    pub const OBJECTS: [StateType; 6] = [
        StateType::Node,
        StateType::NodeTransition,
        StateType::Section,
        StateType::SectionTransition,
        StateType::Story,
        StateType::StoryManager,
    ];

    /// Class implementing an object type.
    pub fn class_name(&self) -> Option<&'static str> {
        Some(match self {
            StateType::Node => "Node",
            StateType::NodeTransition => "NodeTransition",
            StateType::Section => "Section",
            StateType::SectionTransition => "SectionTransition",
            StateType::Story => "Story",
            StateType::StoryManager => "StoryManager",
            StateType::List(_) | StateType::Base(_) => return None,
        })
    }

    pub fn from_class_name(name: &str) -> Option<StateType> {
        StateType::OBJECTS.into_iter().find(|t| t.class_name() == Some(name))
    }

    pub fn is_object(&self) -> bool {
        self.class_name().is_some()
    }

    pub fn list_depth(&self) -> usize {
        match self {
            StateType::List(inner) => 1 + inner.list_depth(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TransType {
    State(StateType),
    Void,
    Construct(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scope {
    Private,
    Public,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Parameter {
    State { name: String, ty: StateType },
    Func { name: String, ret: TransType, params: Vec<Parameter> },
}

impl Parameter {
    pub fn name(&self) -> &str {
        match self {
            Parameter::State { name, .. } | Parameter::Func { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateVar {
    pub name: String,
    pub scope: Scope,
    pub ty: StateType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Literal {
    Bool(bool),
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinOp {
    Less,
    /// Identity for objects, value equality for `int` and `bool`.
    Eq,
    /// Content equality of strings.
    StrEq,
    And,
    Add,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Value {
    Var(String),
    Lit(Literal),
    ObjVar(Box<Value>, String),
    ObjAccess(Box<Value>, Function),
    BinOp(BinOp, Box<Value>, Box<Value>),
    New(StateType, Vec<Value>),
    Call(String, Vec<Value>),
    ListIndex(Box<Value>, Box<Value>),
}

impl Value {
    pub fn is_lvalue(&self) -> bool {
        matches!(self, Value::Var(_) | Value::ObjVar(..))
    }
}

/// What can follow `.` on a value: a method of a generated class or one of
/// the built-in list operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Function {
    Method(String, Vec<Value>),
    ListSize,
    ListInsert(Box<Value>, Box<Value>),
    ListAppend(Box<Value>),
}

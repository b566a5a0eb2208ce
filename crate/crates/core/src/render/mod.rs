//! Code model to source text.
//!
//! Every dialect is a [`RenderConfig`]: a record with one render function per
//! kind of code-model node. [`generic`] holds the shared defaults (which
//! happen to produce Java); the dialect modules copy the generic record and
//! replace only the entries whose syntax differs.
//!
//! ```
//! use saga::code::build::*;
//! use saga::code::{AbstractCode, Package, StateType};
//! use saga::render::{render_package, Dialect};
//!
//! let m = pub_module("Flag", vec![priv_var(boolean(), "up")], vec![
//!     pub_func(typ(boolean()), "IsUp", vec![], one_liner(return_var("up"))),
//! ]);
//! let code = AbstractCode { package: Package { name: "StoryDSL".into(), modules: vec![m] } };
//! let files = render_package(Dialect::CSharp, &code).unwrap();
//! assert_eq!(files[0].path, "StoryDSL/Flag.cs");
//! assert!(files[0].content.contains("    public bool IsUp() {\n        return up;\n    }\n"));
//! ```

mod csharp;
mod cxx;
mod doc;
pub mod generic;
mod java;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::code::{
    AbstractCode, BaseType, BinOp, Block, CodeModule, Conditional, Declaration, Jump, Literal, Package, Parameter,
    Scope, StateType, StateVar, Statement, TransType, Transformation, Value,
};

pub use doc::{banner, banner_at, indent, Doc, Line, LineKind, INDENT_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    /// Relative, `/`-separated.
    pub path: String,
    pub content: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    Java,
    CSharp,
    Cxx,
}

impl Dialect {
    pub const ALL: [Dialect; 3] = [Dialect::Java, Dialect::CSharp, Dialect::Cxx];

    pub fn as_str(self) -> &'static str {
        match self {
            Dialect::Java => "java",
            Dialect::CSharp => "csharp",
            Dialect::Cxx => "cxx",
        }
    }

    pub fn config(self) -> RenderConfig {
        match self {
            Dialect::Java => java::config(),
            Dialect::CSharp => csharp::config(),
            Dialect::Cxx => cxx::config(),
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown target `{0}` (expected java, csharp or cxx)")]
pub struct UnknownDialect(pub String);

impl FromStr for Dialect {
    type Err = UnknownDialect;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dialect::ALL.into_iter().find(|d| d.as_str() == s).ok_or_else(|| UnknownDialect(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("type {state_type:?} has no {dialect} equivalent")]
    UnmappableType { state_type: StateType, dialect: Dialect },
    #[error("{construct} cannot be expressed in {dialect}")]
    Unsupported { construct: String, dialect: Dialect },
}

pub type RenderResult<T> = Result<T, RenderError>;

type C = RenderConfig;

/// The dispatch table. Entries call each other through the record, so an
/// override is picked up everywhere the construct appears.
#[derive(Clone, Copy)]
pub struct RenderConfig {
    pub dialect: Dialect,

    // Files.
    pub files: fn(&C, &Package) -> RenderResult<Vec<OutputFile>>,
    pub preamble: fn(&C, &Package) -> Doc,
    pub module_path: fn(&C, &Package, &CodeModule) -> String,

    // Modules and members.
    pub module: fn(&C, &CodeModule) -> RenderResult<Doc>,
    pub module_open: fn(&C, &CodeModule) -> String,
    pub header_module: fn(&C, &CodeModule) -> RenderResult<Doc>,
    pub impl_module: fn(&C, &CodeModule) -> RenderResult<Doc>,
    pub scope: fn(Scope) -> &'static str,
    pub state_vars: fn(&C, &[StateVar]) -> RenderResult<Doc>,
    pub state_var: fn(&C, &StateVar) -> RenderResult<String>,
    pub transformations: fn(&C, &CodeModule) -> RenderResult<Doc>,
    pub transformation: fn(&C, &CodeModule, &Transformation) -> RenderResult<Doc>,
    pub signature: fn(&C, &CodeModule, &Transformation) -> RenderResult<String>,
    pub parameters: fn(&C, &[Parameter]) -> RenderResult<String>,
    pub state_param: fn(&C, &str, &StateType) -> RenderResult<String>,
    pub func_param: fn(&C, &str, &TransType, &[Parameter]) -> RenderResult<String>,

    // Bodies and statements.
    pub body: fn(&C, &[Block]) -> RenderResult<Doc>,
    pub block: fn(&C, &Block) -> RenderResult<Doc>,
    pub statement: fn(&C, &Statement) -> RenderResult<Doc>,
    pub terminator: fn() -> &'static str,
    pub assign: fn(&C, &Value, &Value) -> RenderResult<String>,
    pub declaration: fn(&C, &Declaration) -> RenderResult<Doc>,
    pub var_dec: fn(&C, &str, &StateType) -> RenderResult<Doc>,
    pub list_dec: fn(&C, &str, &StateType, usize) -> RenderResult<Doc>,
    pub list_dec_literals: fn(&C, &str, &str, &StateType, &[Literal]) -> RenderResult<Doc>,
    pub var_dec_def: fn(&C, &str, &StateType, &Value) -> RenderResult<Doc>,
    pub obj_dec_def: fn(&C, &str, &StateType, &Value) -> RenderResult<Doc>,
    pub conditional: fn(&C, &Conditional) -> RenderResult<Doc>,
    pub while_loop: fn(&C, &Value, &[Block]) -> RenderResult<Doc>,
    pub for_loop: fn(&C, &Statement, &Value, &Statement, &[Block]) -> RenderResult<Doc>,
    pub jump: fn(Jump) -> &'static str,
    pub return_stmt: fn(&C, &Value) -> RenderResult<String>,
    pub value_stmt: fn(&C, &Value) -> RenderResult<String>,
    pub comment: fn(&str) -> Doc,
    pub comment_delimit: fn(&str, usize) -> Doc,

    // Values.
    pub value: fn(&C, &Value) -> RenderResult<String>,
    pub var: fn(&str) -> String,
    pub literal: fn(&Literal) -> String,
    pub obj_var: fn(&C, &Value, &str) -> RenderResult<String>,
    pub method_call: fn(&C, &Value, &str, &[Value]) -> RenderResult<String>,
    pub list_size: fn(&C, &Value) -> RenderResult<String>,
    pub list_insert: fn(&C, &Value, &Value, &Value) -> RenderResult<String>,
    pub list_append: fn(&C, &Value, &Value) -> RenderResult<String>,
    pub list_index: fn(&C, &Value, &Value) -> RenderResult<String>,
    pub bin_op: fn(&C, BinOp, &Value, &Value) -> RenderResult<String>,
    pub operator: fn(BinOp) -> &'static str,
    pub new_object: fn(&C, &StateType, &[Value]) -> RenderResult<String>,
    pub new_list: fn(&C, &StateType, &[Value]) -> RenderResult<String>,
    pub call: fn(&C, &str, &[Value]) -> RenderResult<String>,
    pub arguments: fn(&C, &[Value]) -> RenderResult<String>,

    // Types.
    pub state_type: fn(&C, &StateType) -> RenderResult<String>,
    pub object_type: fn(&StateType) -> String,
    pub base_type: fn(BaseType) -> &'static str,
    pub list_type: fn(&C, &StateType) -> RenderResult<String>,
    pub list_elem: fn(&C, &StateType) -> RenderResult<String>,
    pub trans_type: fn(&C, &TransType) -> RenderResult<String>,
}

impl RenderConfig {
    /// Number of render functions in the record.
    pub const ENTRIES: usize = 56;
}

impl fmt::Debug for RenderConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RenderConfig").field("dialect", &self.dialect).finish_non_exhaustive()
    }
}

/// Renders every module of the package into the dialect's file layout.
pub fn render_package(dialect: Dialect, code: &AbstractCode) -> RenderResult<Vec<OutputFile>> {
    let c = dialect.config();
    (c.files)(&c, &code.package)
}

/// Dialect spelling of a state type.
pub fn type_map(dialect: Dialect, t: &StateType) -> RenderResult<String> {
    let c = dialect.config();
    (c.state_type)(&c, t)
}

/// Dialect spelling of a return type.
pub fn trans_type_map(dialect: Dialect, t: &TransType) -> RenderResult<String> {
    let c = dialect.config();
    (c.trans_type)(&c, t)
}

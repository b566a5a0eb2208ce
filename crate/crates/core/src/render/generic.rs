//! Shared renderers. Used as-is by Java; the other dialects override a
//! subset.

use super::{Doc, OutputFile, RenderConfig as C, RenderError, RenderResult};
use crate::code::{
    BaseType, BinOp, Block, CodeModule, Comment, Conditional, Declaration, Function, Iteration, Jump, Literal, Package,
    Parameter, Scope, StateType, StateVar, Statement, TransType, Transformation, Value,
};

/// Deepest list nesting the type tables cover.
pub const MAX_LIST_DEPTH: usize = 2;

pub fn config(dialect: super::Dialect) -> C {
    C {
        dialect,
        files,
        preamble,
        module_path,
        module,
        module_open,
        header_module,
        impl_module,
        scope,
        state_vars,
        state_var,
        transformations,
        transformation,
        signature,
        parameters,
        state_param,
        func_param,
        body,
        block,
        statement,
        terminator,
        assign,
        declaration,
        var_dec,
        list_dec,
        list_dec_literals,
        var_dec_def,
        obj_dec_def: var_dec_def,
        conditional,
        while_loop,
        for_loop,
        jump,
        return_stmt,
        value_stmt,
        comment,
        comment_delimit,
        value,
        var,
        literal,
        obj_var,
        method_call,
        list_size,
        list_insert,
        list_append,
        list_index,
        bin_op,
        operator,
        new_object,
        new_list,
        call,
        arguments,
        state_type,
        object_type,
        base_type,
        list_type,
        list_elem,
        trans_type,
    }
}

pub fn unsupported<T>(c: &C, construct: &str) -> RenderResult<T> {
    Err(RenderError::Unsupported { construct: construct.into(), dialect: c.dialect })
}

/// One file per module: preamble, then the module.
pub fn files(c: &C, p: &Package) -> RenderResult<Vec<OutputFile>> {
    p.modules
        .iter()
        .map(|m| {
            let mut d = (c.preamble)(c, p);
            d.append((c.module)(c, m)?);
            Ok(OutputFile { path: (c.module_path)(c, p, m), content: d.render() })
        })
        .collect()
}

pub fn preamble(_: &C, p: &Package) -> Doc {
    Doc::vcat([
        Doc::line(format!("package {};", p.name)),
        Doc::blank(),
        Doc::line("import java.util.Arrays;"),
        Doc::line("import java.util.Vector;"),
        Doc::blank(),
    ])
}

pub fn module_path(_: &C, p: &Package, m: &CodeModule) -> String {
    format!("{}/{}.java", p.name, m.name)
}

/// Header line, methods, then fields.
pub fn module(c: &C, m: &CodeModule) -> RenderResult<Doc> {
    let mut d = Doc::line((c.module_open)(c, m));
    d.append(Doc::separated([(c.transformations)(c, m)?, (c.state_vars)(c, &m.vars)?]).nest(1));
    d.push("}");
    Ok(d)
}

pub fn module_open(_: &C, m: &CodeModule) -> String {
    match m.scope {
        Scope::Public => format!("public class {} {{", m.name),
        Scope::Private => format!("class {} {{", m.name),
    }
}

/// Languages without separate declarations declare and define at once.
pub fn header_module(c: &C, m: &CodeModule) -> RenderResult<Doc> {
    (c.module)(c, m)
}

pub fn impl_module(_: &C, _: &CodeModule) -> RenderResult<Doc> {
    Ok(Doc::empty())
}

pub fn scope(s: Scope) -> &'static str {
    match s {
        Scope::Public => "public",
        Scope::Private => "private",
    }
}

pub fn state_vars(c: &C, vars: &[StateVar]) -> RenderResult<Doc> {
    let lines = vars.iter().map(|v| (c.state_var)(c, v).map(Doc::line)).collect::<RenderResult<Vec<_>>>()?;
    Ok(Doc::vcat(lines))
}

pub fn state_var(c: &C, v: &StateVar) -> RenderResult<String> {
    Ok(format!("{} {} {}{}", (c.scope)(v.scope), (c.state_type)(c, &v.ty)?, v.name, (c.terminator)()))
}

pub fn transformations(c: &C, m: &CodeModule) -> RenderResult<Doc> {
    let docs = m.funcs.iter().map(|f| (c.transformation)(c, m, f)).collect::<RenderResult<Vec<_>>>()?;
    Ok(Doc::separated(docs))
}

pub fn transformation(c: &C, m: &CodeModule, f: &Transformation) -> RenderResult<Doc> {
    let mut d = Doc::line(format!("{} {{", (c.signature)(c, m, f)?));
    d.append((c.body)(c, &f.body)?.nest(1));
    d.push("}");
    Ok(d)
}

pub fn signature(c: &C, _: &CodeModule, f: &Transformation) -> RenderResult<String> {
    let params = (c.parameters)(c, &f.params)?;
    let scope = (c.scope)(f.scope);
    Ok(match &f.ret {
        TransType::Construct(class) => format!("{scope} {class}({params})"),
        ret => format!("{scope} {} {}({params})", (c.trans_type)(c, ret)?, f.name),
    })
}

pub fn parameters(c: &C, ps: &[Parameter]) -> RenderResult<String> {
    let parts = ps
        .iter()
        .map(|p| match p {
            Parameter::State { name, ty } => (c.state_param)(c, name, ty),
            Parameter::Func { name, ret, params } => (c.func_param)(c, name, ret, params),
        })
        .collect::<RenderResult<Vec<_>>>()?;
    Ok(parts.join(", "))
}

pub fn state_param(c: &C, name: &str, ty: &StateType) -> RenderResult<String> {
    Ok(format!("{} {name}", (c.state_type)(c, ty)?))
}

pub fn func_param(c: &C, _: &str, _: &TransType, _: &[Parameter]) -> RenderResult<String> {
    unsupported(c, "function-valued parameter")
}

/// Blocks separated by one blank line.
pub fn body(c: &C, blocks: &[Block]) -> RenderResult<Doc> {
    let docs = blocks.iter().map(|b| (c.block)(c, b)).collect::<RenderResult<Vec<_>>>()?;
    Ok(Doc::separated(docs))
}

pub fn block(c: &C, b: &Block) -> RenderResult<Doc> {
    let docs = b.0.iter().map(|s| (c.statement)(c, s)).collect::<RenderResult<Vec<_>>>()?;
    Ok(Doc::vcat(docs))
}

pub fn statement(c: &C, s: &Statement) -> RenderResult<Doc> {
    let t = (c.terminator)();
    Ok(match s {
        Statement::Assign { target, source } => Doc::line(format!("{}{t}", (c.assign)(c, target, source)?)),
        Statement::Decl(d) => (c.declaration)(c, d)?,
        Statement::Cond(k) => (c.conditional)(c, k)?,
        Statement::Iter(Iteration::While { cond, body }) => (c.while_loop)(c, cond, body)?,
        Statement::Iter(Iteration::For { init, cond, step, body }) => (c.for_loop)(c, init, cond, step, body)?,
        Statement::Jump(j) => Doc::line(format!("{}{t}", (c.jump)(*j))),
        Statement::Return(v) => Doc::line(format!("{}{t}", (c.return_stmt)(c, v)?)),
        Statement::Value(v) => Doc::line(format!("{}{t}", (c.value_stmt)(c, v)?)),
        Statement::Comment(Comment::Line(text)) => (c.comment)(text),
        Statement::Comment(Comment::Delimit(text, width)) => (c.comment_delimit)(text, *width),
    })
}

pub fn terminator() -> &'static str {
    ";"
}

pub fn assign(c: &C, target: &Value, source: &Value) -> RenderResult<String> {
    Ok(format!("{} = {}", (c.value)(c, target)?, (c.value)(c, source)?))
}

pub fn declaration(c: &C, d: &Declaration) -> RenderResult<Doc> {
    match d {
        Declaration::VarDec { name, ty } => (c.var_dec)(c, name, ty),
        Declaration::ListDec { name, elem, capacity } => (c.list_dec)(c, name, elem, *capacity),
        Declaration::ListDecLiterals { name, aux, elem, literals } => {
            (c.list_dec_literals)(c, name, aux, elem, literals)
        }
        Declaration::VarDecDef { name, ty, init } => (c.var_dec_def)(c, name, ty, init),
        Declaration::ObjDecDef { name, ty, init } => (c.obj_dec_def)(c, name, ty, init),
    }
}

pub fn var_dec(c: &C, name: &str, ty: &StateType) -> RenderResult<Doc> {
    Ok(Doc::line(format!("{} {name}{}", (c.state_type)(c, ty)?, (c.terminator)())))
}

/// `List<T> xs = new List<T>(capacity);`
pub fn list_dec(c: &C, name: &str, elem: &StateType, capacity: usize) -> RenderResult<Doc> {
    let ty = (c.list_type)(c, elem)?;
    Ok(Doc::line(format!("{ty} {name} = new {ty}({capacity}){}", (c.terminator)())))
}

pub fn list_dec_literals(c: &C, name: &str, _: &str, elem: &StateType, lits: &[Literal]) -> RenderResult<Doc> {
    let ty = (c.list_type)(c, elem)?;
    let items: Vec<_> = lits.iter().map(|l| (c.literal)(l)).collect();
    Ok(Doc::line(format!("{ty} {name} = new {ty}(Arrays.asList({})){}", items.join(", "), (c.terminator)())))
}

pub fn var_dec_def(c: &C, name: &str, ty: &StateType, init: &Value) -> RenderResult<Doc> {
    Ok(Doc::line(format!("{} {name} = {}{}", (c.state_type)(c, ty)?, (c.value)(c, init)?, (c.terminator)())))
}

fn nested_body(c: &C, blocks: &[Block]) -> RenderResult<Doc> {
    Ok((c.body)(c, blocks)?.nest(1))
}

pub fn conditional(c: &C, k: &Conditional) -> RenderResult<Doc> {
    let mut d = Doc::empty();
    for (i, (cond, then)) in k.branches.iter().enumerate() {
        let cond = (c.value)(c, cond)?;
        d.push(if i == 0 { format!("if ({cond}) {{") } else { format!("}} else if ({cond}) {{") });
        d.append(nested_body(c, then)?);
    }
    if let Some(otherwise) = &k.otherwise {
        d.push("} else {");
        d.append(nested_body(c, otherwise)?);
    }
    d.push("}");
    Ok(d)
}

pub fn while_loop(c: &C, cond: &Value, blocks: &[Block]) -> RenderResult<Doc> {
    let mut d = Doc::line(format!("while ({}) {{", (c.value)(c, cond)?));
    d.append(nested_body(c, blocks)?);
    d.push("}");
    Ok(d)
}

/// A statement squeezed onto one line without its terminator, as in a
/// `for` header.
pub fn inline_statement(c: &C, s: &Statement) -> RenderResult<String> {
    let d = (c.statement)(c, s)?;
    match d.0.as_slice() {
        [super::Line { kind: super::LineKind::Text(t), .. }] => {
            Ok(t.strip_suffix((c.terminator)()).unwrap_or(t).to_string())
        }
        _ => unsupported(c, "multi-line statement in a loop header"),
    }
}

pub fn for_loop(c: &C, init: &Statement, cond: &Value, step: &Statement, blocks: &[Block]) -> RenderResult<Doc> {
    let header = format!(
        "for ({}; {}; {}) {{",
        inline_statement(c, init)?,
        (c.value)(c, cond)?,
        inline_statement(c, step)?
    );
    let mut d = Doc::line(header);
    d.append(nested_body(c, blocks)?);
    d.push("}");
    Ok(d)
}

pub fn jump(j: Jump) -> &'static str {
    match j {
        Jump::Break => "break",
        Jump::Continue => "continue",
    }
}

pub fn return_stmt(c: &C, v: &Value) -> RenderResult<String> {
    Ok(format!("return {}", (c.value)(c, v)?))
}

pub fn value_stmt(c: &C, v: &Value) -> RenderResult<String> {
    (c.value)(c, v)
}

pub fn comment(text: &str) -> Doc {
    Doc::line(format!("// {text}"))
}

pub fn comment_delimit(text: &str, width: usize) -> Doc {
    Doc::banner(text, width)
}

pub fn value(c: &C, v: &Value) -> RenderResult<String> {
    match v {
        Value::Var(n) => Ok((c.var)(n)),
        Value::Lit(l) => Ok((c.literal)(l)),
        Value::ObjVar(o, field) => (c.obj_var)(c, o, field),
        Value::ObjAccess(o, f) => match f {
            Function::Method(name, args) => (c.method_call)(c, o, name, args),
            Function::ListSize => (c.list_size)(c, o),
            Function::ListInsert(i, x) => (c.list_insert)(c, o, i, x),
            Function::ListAppend(x) => (c.list_append)(c, o, x),
        },
        Value::BinOp(op, a, b) => (c.bin_op)(c, *op, a, b),
        Value::New(StateType::List(elem), args) => (c.new_list)(c, elem, args),
        Value::New(ty, args) => (c.new_object)(c, ty, args),
        Value::Call(name, args) => (c.call)(c, name, args),
        Value::ListIndex(l, i) => (c.list_index)(c, l, i),
    }
}

/// A value used as an operand or receiver; compound values get parentheses.
pub fn operand(c: &C, v: &Value) -> RenderResult<String> {
    let s = (c.value)(c, v)?;
    Ok(if matches!(v, Value::BinOp(..) | Value::New(..)) { format!("({s})") } else { s })
}

pub fn var(name: &str) -> String {
    name.to_string()
}

pub fn literal(l: &Literal) -> String {
    match l {
        Literal::Bool(b) => b.to_string(),
        Literal::Int(i) => i.to_string(),
        Literal::Str(s) => {
            let mut out = String::from("\"");
            for ch in s.chars() {
                match ch {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    _ => out.push(ch),
                }
            }
            out.push('"');
            out
        }
    }
}

pub fn obj_var(c: &C, o: &Value, field: &str) -> RenderResult<String> {
    Ok(format!("{}.{field}", operand(c, o)?))
}

pub fn method_call(c: &C, o: &Value, name: &str, args: &[Value]) -> RenderResult<String> {
    Ok(format!("{}.{name}({})", operand(c, o)?, (c.arguments)(c, args)?))
}

pub fn list_size(c: &C, l: &Value) -> RenderResult<String> {
    Ok(format!("{}.size()", operand(c, l)?))
}

pub fn list_insert(c: &C, l: &Value, i: &Value, x: &Value) -> RenderResult<String> {
    Ok(format!("{}.add({}, {})", operand(c, l)?, (c.value)(c, i)?, (c.value)(c, x)?))
}

pub fn list_append(c: &C, l: &Value, x: &Value) -> RenderResult<String> {
    Ok(format!("{}.add({})", operand(c, l)?, (c.value)(c, x)?))
}

pub fn list_index(c: &C, l: &Value, i: &Value) -> RenderResult<String> {
    Ok(format!("{}.get({})", operand(c, l)?, (c.value)(c, i)?))
}

pub fn bin_op(c: &C, op: BinOp, a: &Value, b: &Value) -> RenderResult<String> {
    if op == BinOp::StrEq {
        return Ok(format!("{}.equals({})", operand(c, a)?, (c.value)(c, b)?));
    }
    Ok(format!("{} {} {}", operand(c, a)?, (c.operator)(op), operand(c, b)?))
}

pub fn operator(op: BinOp) -> &'static str {
    match op {
        BinOp::Less => "<",
        BinOp::Eq | BinOp::StrEq => "==",
        BinOp::And => "&&",
        BinOp::Add => "+",
    }
}

pub fn new_object(c: &C, ty: &StateType, args: &[Value]) -> RenderResult<String> {
    match ty.class_name() {
        Some(class) => Ok(format!("new {class}({})", (c.arguments)(c, args)?)),
        None => unsupported(c, &format!("`new` of non-object type {ty:?}")),
    }
}

pub fn new_list(c: &C, elem: &StateType, args: &[Value]) -> RenderResult<String> {
    Ok(format!("new {}({})", (c.list_type)(c, elem)?, (c.arguments)(c, args)?))
}

pub fn call(c: &C, name: &str, args: &[Value]) -> RenderResult<String> {
    Ok(format!("{name}({})", (c.arguments)(c, args)?))
}

pub fn arguments(c: &C, args: &[Value]) -> RenderResult<String> {
    let parts = args.iter().map(|a| (c.value)(c, a)).collect::<RenderResult<Vec<_>>>()?;
    Ok(parts.join(", "))
}

pub fn state_type(c: &C, t: &StateType) -> RenderResult<String> {
    match t {
        StateType::List(elem) => {
            if t.list_depth() > MAX_LIST_DEPTH {
                return Err(RenderError::UnmappableType { state_type: t.clone(), dialect: c.dialect });
            }
            (c.list_type)(c, elem)
        }
        StateType::Base(b) => Ok((c.base_type)(*b).to_string()),
        obj => Ok((c.object_type)(obj)),
    }
}

pub fn object_type(t: &StateType) -> String {
    t.class_name().unwrap_or_default().to_string()
}

pub fn base_type(b: BaseType) -> &'static str {
    match b {
        BaseType::Bool => "boolean",
        BaseType::Int => "int",
        BaseType::String => "String",
    }
}

pub fn list_type(c: &C, elem: &StateType) -> RenderResult<String> {
    Ok(format!("Vector<{}>", (c.list_elem)(c, elem)?))
}

/// Generic containers hold boxed primitives.
pub fn list_elem(c: &C, elem: &StateType) -> RenderResult<String> {
    Ok(match elem {
        StateType::Base(BaseType::Bool) => "Boolean".into(),
        StateType::Base(BaseType::Int) => "Integer".into(),
        other => (c.state_type)(c, other)?,
    })
}

pub fn trans_type(c: &C, t: &TransType) -> RenderResult<String> {
    match t {
        TransType::State(s) => (c.state_type)(c, s),
        TransType::Void => Ok("void".into()),
        TransType::Construct(class) => Ok(class.clone()),
    }
}

//! Combinators for writing code-model fragments by hand.
//!
//! ```
//! use saga::code::build::*;
//! use saga::code::StateType;
//!
//! let getter = pub_func(typ(StateType::Node), "GetSrcNode", vec![], one_liner(return_var("srcNode")));
//! assert_eq!(getter.body.len(), 1);
//! ```

use thiserror::Error;

use super::*;

pub fn pub_module(name: &str, vars: Vec<StateVar>, funcs: Vec<Transformation>) -> CodeModule {
    CodeModule { name: name.into(), scope: Scope::Public, vars, funcs }
}

pub fn priv_var(ty: StateType, name: &str) -> StateVar {
    StateVar { name: name.into(), scope: Scope::Private, ty }
}

pub fn pub_var(ty: StateType, name: &str) -> StateVar {
    StateVar { name: name.into(), scope: Scope::Public, ty }
}

pub fn pub_func(ret: TransType, name: &str, params: Vec<Parameter>, body: Vec<Block>) -> Transformation {
    Transformation { name: name.into(), scope: Scope::Public, ret, params, body }
}

pub fn priv_func(ret: TransType, name: &str, params: Vec<Parameter>, body: Vec<Block>) -> Transformation {
    Transformation { name: name.into(), scope: Scope::Private, ret, params, body }
}

/// A public constructor for `module`.
pub fn constructor(module: &str, params: Vec<Parameter>, body: Vec<Block>) -> Transformation {
    pub_func(TransType::Construct(module.into()), module, params, body)
}

pub fn param(name: &str, ty: StateType) -> Parameter {
    Parameter::State { name: name.into(), ty }
}

pub fn typ(ty: StateType) -> TransType {
    TransType::State(ty)
}

pub fn list(elem: StateType) -> StateType {
    StateType::List(Box::new(elem))
}

pub fn string() -> StateType {
    StateType::Base(BaseType::String)
}

pub fn int() -> StateType {
    StateType::Base(BaseType::Int)
}

pub fn boolean() -> StateType {
    StateType::Base(BaseType::Bool)
}

pub fn block(stmts: Vec<Statement>) -> Block {
    Block(stmts)
}

/// A body made of exactly one block holding one statement.
pub fn one_liner(stmt: Statement) -> Vec<Block> {
    vec![Block(vec![stmt])]
}

pub fn var(name: &str) -> Value {
    Value::Var(name.into())
}

pub fn this_var(field: &str) -> Value {
    Value::ObjVar(Box::new(var("this")), field.into())
}

pub fn obj_var(obj: Value, field: &str) -> Value {
    Value::ObjVar(Box::new(obj), field.into())
}

pub fn lit_str(s: &str) -> Value {
    Value::Lit(Literal::Str(s.into()))
}

pub fn lit_int(i: i64) -> Value {
    Value::Lit(Literal::Int(i))
}

pub fn lit_bool(b: bool) -> Value {
    Value::Lit(Literal::Bool(b))
}

pub fn new_obj(ty: StateType, args: Vec<Value>) -> Value {
    Value::New(ty, args)
}

pub fn call(name: &str, args: Vec<Value>) -> Value {
    Value::Call(name.into(), args)
}

pub fn method(name: &str, args: Vec<Value>) -> Function {
    Function::Method(name.into(), args)
}

/// `v.f`
pub fn access(v: Value, f: Function) -> Value {
    Value::ObjAccess(Box::new(v), f)
}

/// `obj.name(args)`
pub fn invoke(obj: Value, name: &str, args: Vec<Value>) -> Value {
    access(obj, method(name, args))
}

pub fn list_size(list: Value) -> Value {
    access(list, Function::ListSize)
}

pub fn list_at(list: Value, index: Value) -> Value {
    Value::ListIndex(Box::new(list), Box::new(index))
}

/// Statement inserting `value` at `index` of `list`.
pub fn list_insert(list: Value, index: Value, value: Value) -> Statement {
    Statement::Value(access(list, Function::ListInsert(Box::new(index), Box::new(value))))
}

pub fn list_append(list: Value, value: Value) -> Statement {
    Statement::Value(access(list, Function::ListAppend(Box::new(value))))
}

fn bin(op: BinOp, a: Value, b: Value) -> Value {
    Value::BinOp(op, Box::new(a), Box::new(b))
}

/// `name < v`
pub fn less(name: &str, v: Value) -> Value {
    bin(BinOp::Less, var(name), v)
}

pub fn equal(a: Value, b: Value) -> Value {
    bin(BinOp::Eq, a, b)
}

pub fn str_equal(a: Value, b: Value) -> Value {
    bin(BinOp::StrEq, a, b)
}

pub fn and(a: Value, b: Value) -> Value {
    bin(BinOp::And, a, b)
}

pub fn add(a: Value, b: Value) -> Value {
    bin(BinOp::Add, a, b)
}

/// `name = v` for a plain variable name.
pub fn assign(name: &str, v: Value) -> Statement {
    Statement::Assign { target: var(name), source: v }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("only Var and ObjVar values can be assigned to, not {0:?}")]
pub struct NotAnLValue(pub Value);

/// Assignment to an arbitrary value; only variables and object fields are
/// accepted as targets.
pub fn assign_lvalue(target: Value, source: Value) -> Result<Statement, NotAnLValue> {
    if target.is_lvalue() {
        Ok(Statement::Assign { target, source })
    } else {
        Err(NotAnLValue(target))
    }
}

pub fn return_var(name: &str) -> Statement {
    Statement::Return(var(name))
}

pub fn ret(v: Value) -> Statement {
    Statement::Return(v)
}

pub fn expr(v: Value) -> Statement {
    Statement::Value(v)
}

pub fn decl(d: Declaration) -> Statement {
    Statement::Decl(d)
}

pub fn var_dec_def(name: &str, ty: StateType, init: Value) -> Statement {
    decl(Declaration::VarDecDef { name: name.into(), ty, init })
}

pub fn obj_dec_def(name: &str, ty: StateType, init: Value) -> Statement {
    decl(Declaration::ObjDecDef { name: name.into(), ty, init })
}

pub fn list_dec(name: &str, elem: StateType, capacity: usize) -> Statement {
    decl(Declaration::ListDec { name: name.into(), elem, capacity })
}

pub fn if_then(cond: Value, body: Vec<Block>) -> Statement {
    Statement::Cond(Conditional { branches: vec![(cond, body)], otherwise: None })
}

pub fn if_else(cond: Value, then: Vec<Block>, otherwise: Vec<Block>) -> Statement {
    Statement::Cond(Conditional { branches: vec![(cond, then)], otherwise: Some(otherwise) })
}

pub fn while_loop(cond: Value, body: Vec<Block>) -> Statement {
    Statement::Iter(Iteration::While { cond, body })
}

/// `for (int i = 0; i < bound; i = i + 1)`
pub fn for_range(index: &str, bound: Value, body: Vec<Block>) -> Statement {
    Statement::Iter(Iteration::For {
        init: Box::new(var_dec_def(index, int(), lit_int(0))),
        cond: less(index, bound),
        step: Box::new(assign(index, add(var(index), lit_int(1)))),
        body,
    })
}

pub fn comment(text: &str) -> Statement {
    Statement::Comment(Comment::Line(text.into()))
}

pub fn comment_delimit(text: &str, width: usize) -> Statement {
    Statement::Comment(Comment::Delimit(text.into(), width))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_liner_is_single_block() {
        assert_eq!(one_liner(return_var("x")), vec![Block(vec![Statement::Return(Value::Var("x".into()))])]);
    }

    #[test]
    fn lvalue_assignment() {
        assert!(assign_lvalue(var("x"), var("y")).is_ok());
        assert!(assign_lvalue(this_var("f"), var("y")).is_ok());
        let err = assign_lvalue(lit_int(3), var("y")).unwrap_err();
        assert_eq!(err, NotAnLValue(lit_int(3)));
        assert!(assign_lvalue(call("f", vec![]), var("y")).is_err());
    }

    #[test]
    fn builders_are_pure() {
        let a = for_range("i", list_size(var("xs")), one_liner(expr(call("f", vec![var("i")]))));
        let b = for_range("i", list_size(var("xs")), one_liner(expr(call("f", vec![var("i")]))));
        assert_eq!(a, b);
    }
}

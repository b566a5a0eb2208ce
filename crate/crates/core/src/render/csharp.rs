use super::generic::{self, operand};
use super::{Dialect, Doc, RenderConfig as C, RenderResult};
use crate::code::{BaseType, BinOp, CodeModule, Literal, Package, Parameter, StateType, TransType, Value};

pub fn config() -> C {
    C {
        preamble,
        module_path,
        func_param,
        list_dec_literals,
        list_size,
        list_insert,
        list_append,
        list_index,
        bin_op,
        base_type,
        list_type,
        list_elem: generic::state_type,
        ..generic::config(Dialect::CSharp)
    }
}

fn preamble(_: &C, p: &Package) -> Doc {
    Doc::vcat([
        Doc::line("using System;"),
        Doc::line("using System.Collections.Generic;"),
        Doc::blank(),
        Doc::line(format!("namespace {};", p.name)),
        Doc::blank(),
    ])
}

fn module_path(_: &C, p: &Package, m: &CodeModule) -> String {
    format!("{}/{}.cs", p.name, m.name)
}

/// `Func<A, R>` or `Action<A>`.
fn func_param(c: &C, name: &str, ret: &TransType, params: &[Parameter]) -> RenderResult<String> {
    let mut args = params
        .iter()
        .map(|p| match p {
            Parameter::State { ty, .. } => (c.state_type)(c, ty),
            Parameter::Func { .. } => generic::unsupported(c, "nested function parameter"),
        })
        .collect::<RenderResult<Vec<_>>>()?;
    let ty = match ret {
        TransType::Void if args.is_empty() => "Action".to_string(),
        TransType::Void => format!("Action<{}>", args.join(", ")),
        ret => {
            args.push((c.trans_type)(c, ret)?);
            format!("Func<{}>", args.join(", "))
        }
    };
    Ok(format!("{ty} {name}"))
}

/// `T[] aux = {...};` then a list copied from it.
fn list_dec_literals(c: &C, name: &str, aux: &str, elem: &StateType, lits: &[Literal]) -> RenderResult<Doc> {
    let elem_ty = (c.state_type)(c, elem)?;
    let ty = (c.list_type)(c, elem)?;
    let items: Vec<_> = lits.iter().map(|l| (c.literal)(l)).collect();
    let t = (c.terminator)();
    Ok(Doc::vcat([
        Doc::line(format!("{elem_ty}[] {aux} = {{{}}}{t}", items.join(", "))),
        Doc::line(format!("{ty} {name} = new {ty}({aux}){t}")),
    ]))
}

fn list_size(c: &C, l: &Value) -> RenderResult<String> {
    Ok(format!("{}.Count", operand(c, l)?))
}

fn list_insert(c: &C, l: &Value, i: &Value, x: &Value) -> RenderResult<String> {
    Ok(format!("{}.Insert({}, {})", operand(c, l)?, (c.value)(c, i)?, (c.value)(c, x)?))
}

fn list_append(c: &C, l: &Value, x: &Value) -> RenderResult<String> {
    Ok(format!("{}.Add({})", operand(c, l)?, (c.value)(c, x)?))
}

fn list_index(c: &C, l: &Value, i: &Value) -> RenderResult<String> {
    Ok(format!("{}[{}]", operand(c, l)?, (c.value)(c, i)?))
}

/// `string` has value equality under `==`.
fn bin_op(c: &C, op: BinOp, a: &Value, b: &Value) -> RenderResult<String> {
    Ok(format!("{} {} {}", operand(c, a)?, (c.operator)(op), operand(c, b)?))
}

fn base_type(b: BaseType) -> &'static str {
    match b {
        BaseType::Bool => "bool",
        BaseType::Int => "int",
        BaseType::String => "string",
    }
}

fn list_type(c: &C, elem: &StateType) -> RenderResult<String> {
    Ok(format!("List<{}>", (c.list_elem)(c, elem)?))
}

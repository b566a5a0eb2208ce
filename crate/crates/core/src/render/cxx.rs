//! C++: one header and one implementation file, rendered by two passes over
//! the same package.

use super::generic::{self, operand};
use super::{Dialect, Doc, OutputFile, RenderConfig as C, RenderResult};
use crate::code::{
    BaseType, CodeModule, Literal, Package, Parameter, Scope, StateType, StateVar, TransType, Transformation, Value,
};

pub fn config() -> C {
    C {
        files,
        header_module,
        impl_module,
        state_var,
        signature,
        func_param,
        list_dec,
        list_dec_literals,
        obj_var,
        method_call,
        list_insert,
        list_append,
        list_index,
        bin_op,
        new_list,
        object_type,
        base_type,
        list_type,
        list_elem: generic::state_type,
        ..generic::config(Dialect::Cxx)
    }
}

fn header_name(p: &Package) -> String {
    format!("{}.h", p.name)
}

fn files(c: &C, p: &Package) -> RenderResult<Vec<OutputFile>> {
    let guard = format!("{}_H", p.name.to_ascii_uppercase());
    let forward: Vec<_> = p
        .modules
        .iter()
        .filter(|m| StateType::from_class_name(&m.name).is_some())
        .map(|m| Doc::line(format!("class {};", m.name)))
        .collect();
    let mut classes = vec![Doc::vcat(forward)];
    for m in &p.modules {
        classes.push((c.header_module)(c, m)?);
    }

    let mut header = Doc::vcat([
        Doc::line(format!("#ifndef {guard}")),
        Doc::line(format!("#define {guard}")),
        Doc::blank(),
        Doc::line("#include <string>"),
        Doc::line("#include <vector>"),
        Doc::blank(),
        Doc::line("using namespace std;"),
        Doc::blank(),
        Doc::line(format!("namespace {} {{", p.name)),
    ]);
    header.append(Doc::separated(classes).nest(1));
    header.append(Doc::vcat([Doc::line("}"), Doc::blank(), Doc::line(format!("#endif // {guard}"))]));

    let mut defs = Vec::new();
    for m in &p.modules {
        defs.push((c.impl_module)(c, m)?);
    }
    let source = Doc::separated([
        Doc::line(format!("#include \"{}\"", header_name(p))),
        Doc::line(format!("using namespace {};", p.name)),
        Doc::separated(defs),
    ]);

    Ok(vec![
        OutputFile { path: header_name(p), content: header.render() },
        OutputFile { path: format!("{}.cpp", p.name), content: source.render() },
    ])
}

fn region(label: &str, members: Vec<String>) -> Doc {
    if members.is_empty() {
        return Doc::empty();
    }
    let mut d = Doc::line(format!("{label}:"));
    d.append(Doc::vcat(members.into_iter().map(Doc::line)).nest(1));
    d
}

fn declaration_line(c: &C, f: &Transformation) -> RenderResult<String> {
    let params = (c.parameters)(c, &f.params)?;
    Ok(match &f.ret {
        TransType::Construct(class) => format!("{class}({params});"),
        ret => format!("{} {}({params});", (c.trans_type)(c, ret)?, f.name),
    })
}

/// Class declaration grouped into `public:` and `private:` regions.
fn header_module(c: &C, m: &CodeModule) -> RenderResult<Doc> {
    let mut regions = Vec::new();
    for (scope, label) in [(Scope::Public, "public"), (Scope::Private, "private")] {
        let mut members = Vec::new();
        for f in m.funcs.iter().filter(|f| f.scope == scope) {
            members.push(declaration_line(c, f)?);
        }
        for v in m.vars.iter().filter(|v| v.scope == scope) {
            members.push((c.state_var)(c, v)?);
        }
        regions.push(region(label, members));
    }
    let mut d = Doc::line(format!("class {} {{", m.name));
    d.append(Doc::separated(regions).nest(1));
    d.push("};");
    Ok(d)
}

/// Out-of-class definitions of every method.
fn impl_module(c: &C, m: &CodeModule) -> RenderResult<Doc> {
    let defs = m.funcs.iter().map(|f| (c.transformation)(c, m, f)).collect::<RenderResult<Vec<_>>>()?;
    Ok(Doc::separated(defs))
}

fn state_var(c: &C, v: &StateVar) -> RenderResult<String> {
    Ok(format!("{} {}{}", (c.state_type)(c, &v.ty)?, v.name, (c.terminator)()))
}

/// `Ret Class::name(params)`
fn signature(c: &C, m: &CodeModule, f: &Transformation) -> RenderResult<String> {
    let params = (c.parameters)(c, &f.params)?;
    Ok(match &f.ret {
        TransType::Construct(class) => format!("{}::{class}({params})", m.name),
        ret => format!("{} {}::{}({params})", (c.trans_type)(c, ret)?, m.name, f.name),
    })
}

/// `Ret (*name)(Args)`
fn func_param(c: &C, name: &str, ret: &TransType, params: &[Parameter]) -> RenderResult<String> {
    let args = params
        .iter()
        .map(|p| match p {
            Parameter::State { ty, .. } => (c.state_type)(c, ty),
            Parameter::Func { .. } => generic::unsupported(c, "nested function parameter"),
        })
        .collect::<RenderResult<Vec<_>>>()?;
    Ok(format!("{} (*{name})({})", (c.trans_type)(c, ret)?, args.join(", ")))
}

/// An empty vector with room reserved for `capacity` elements.
fn list_dec(c: &C, name: &str, elem: &StateType, capacity: usize) -> RenderResult<Doc> {
    let t = (c.terminator)();
    let mut d = Doc::line(format!("{} {name}{t}", (c.list_type)(c, elem)?));
    if capacity > 0 {
        d.push(format!("{name}.reserve({capacity}){t}"));
    }
    Ok(d)
}

/// `T aux[] = {...};` then a vector over the array's range.
fn list_dec_literals(c: &C, name: &str, aux: &str, elem: &StateType, lits: &[Literal]) -> RenderResult<Doc> {
    let t = (c.terminator)();
    let ty = (c.list_type)(c, elem)?;
    if lits.is_empty() {
        return Ok(Doc::line(format!("{ty} {name}{t}")));
    }
    let items: Vec<_> = lits.iter().map(|l| (c.literal)(l)).collect();
    Ok(Doc::vcat([
        Doc::line(format!("{} {aux}[] = {{{}}}{t}", (c.state_type)(c, elem)?, items.join(", "))),
        Doc::line(format!("{ty} {name}({aux}, {aux} + {}){t}", lits.len())),
    ]))
}

fn obj_var(c: &C, o: &Value, field: &str) -> RenderResult<String> {
    Ok(format!("{}->{field}", operand(c, o)?))
}

fn method_call(c: &C, o: &Value, name: &str, args: &[Value]) -> RenderResult<String> {
    Ok(format!("{}->{name}({})", operand(c, o)?, (c.arguments)(c, args)?))
}

fn list_insert(c: &C, l: &Value, i: &Value, x: &Value) -> RenderResult<String> {
    let l = operand(c, l)?;
    Ok(format!("{l}.insert({l}.begin() + {}, {})", operand(c, i)?, (c.value)(c, x)?))
}

fn list_append(c: &C, l: &Value, x: &Value) -> RenderResult<String> {
    Ok(format!("{}.push_back({})", operand(c, l)?, (c.value)(c, x)?))
}

fn list_index(c: &C, l: &Value, i: &Value) -> RenderResult<String> {
    Ok(format!("{}[{}]", operand(c, l)?, (c.value)(c, i)?))
}

/// `std::string` compares by content under `==`.
fn bin_op(c: &C, op: crate::code::BinOp, a: &Value, b: &Value) -> RenderResult<String> {
    Ok(format!("{} {} {}", operand(c, a)?, (c.operator)(op), operand(c, b)?))
}

/// Vectors are values, not heap objects.
fn new_list(c: &C, elem: &StateType, args: &[Value]) -> RenderResult<String> {
    Ok(format!("{}({})", (c.list_type)(c, elem)?, (c.arguments)(c, args)?))
}

fn object_type(t: &StateType) -> String {
    format!("{}*", generic::object_type(t))
}

fn base_type(b: BaseType) -> &'static str {
    match b {
        BaseType::Bool => "bool",
        BaseType::Int => "int",
        BaseType::String => "string",
    }
}

fn list_type(c: &C, elem: &StateType) -> RenderResult<String> {
    Ok(format!("vector<{}>", (c.list_elem)(c, elem)?))
}

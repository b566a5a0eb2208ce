//! Well-formedness checks over the code model, including a small type
//! inference pass that resolves every variable, field and method reference.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrDiagCode {
    DuplicateModule,
    DuplicateMember,
    DuplicateLocal,
    BadConstructor,
    NotAnLValue,
    UnresolvedReference,
    ArityMismatch,
    TypeMismatch,
    JumpOutsideLoop,
    BadCommentWidth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrDiagnostic {
    pub code: IrDiagCode,
    /// `Module` or `Module.method`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for IrDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}: {}", self.code, self.location, self.message)
    }
}

struct Signature<'a> {
    ret: &'a TransType,
    params: &'a [Parameter],
}

struct ClassInfo<'a> {
    fields: HashMap<&'a str, &'a StateType>,
    methods: HashMap<&'a str, Signature<'a>>,
    ctor_arity: Option<usize>,
}

/// Inferred type of an expression.
#[derive(Debug, Clone, PartialEq)]
enum Ty {
    State(StateType),
    /// `this` inside the module being checked.
    This,
    Void,
    /// Already reported; suppress follow-on diagnostics.
    Unknown,
}

struct Checker<'a, 'o> {
    classes: &'o HashMap<&'a str, ClassInfo<'a>>,
    module: &'a CodeModule,
    location: String,
    scopes: Vec<HashMap<String, StateType>>,
    loop_depth: usize,
    out: &'o mut Vec<IrDiagnostic>,
}

impl<'a, 'o> Checker<'a, 'o> {
    fn report(&mut self, code: IrDiagCode, message: String) {
        self.out.push(IrDiagnostic { code, location: self.location.clone(), message });
    }

    fn lookup(&self, name: &str) -> Option<StateType> {
        self.scopes.iter().rev().find_map(|s| s.get(name).cloned())
    }

    fn declare(&mut self, name: &str, ty: StateType) {
        if self.lookup(name).is_some() {
            self.report(IrDiagCode::DuplicateLocal, format!("`{name}` is already declared"));
        }
        self.scopes.last_mut().expect("scope").insert(name.to_string(), ty);
    }

    fn field_type(&mut self, class: &str, field: &str) -> Ty {
        match self.classes.get(class).and_then(|c| c.fields.get(field)) {
            Some(t) => Ty::State((*t).clone()),
            None => {
                self.report(IrDiagCode::UnresolvedReference, format!("no field `{field}` in `{class}`"));
                Ty::Unknown
            }
        }
    }

    fn class_of(&mut self, ty: &Ty, what: &str) -> Option<String> {
        match ty {
            Ty::This => Some(self.module.name.clone()),
            Ty::State(t) if t.is_object() => {
                let name = t.class_name().expect("object").to_string();
                if self.classes.contains_key(name.as_str()) {
                    Some(name)
                } else {
                    self.report(IrDiagCode::UnresolvedReference, format!("class `{name}` is not in the package"));
                    None
                }
            }
            Ty::Unknown => None,
            other => {
                self.report(IrDiagCode::TypeMismatch, format!("{what} on a non-object value of type {other:?}"));
                None
            }
        }
    }

    fn check_args(&mut self, callee: &str, params: &[Parameter], args: &[Value]) {
        if params.len() != args.len() {
            self.report(
                IrDiagCode::ArityMismatch,
                format!("`{callee}` takes {} argument(s), got {}", params.len(), args.len()),
            );
        }
        for a in args {
            self.value(a);
        }
    }

    fn call_result(ret: &TransType) -> Ty {
        match ret {
            TransType::State(t) => Ty::State(t.clone()),
            TransType::Void => Ty::Void,
            TransType::Construct(c) => StateType::from_class_name(c).map(Ty::State).unwrap_or(Ty::Unknown),
        }
    }

    fn value(&mut self, v: &Value) -> Ty {
        match v {
            Value::Var(name) if name == "this" => Ty::This,
            Value::Var(name) => {
                if let Some(t) = self.lookup(name) {
                    return Ty::State(t);
                }
                if let Some(f) = self.module.vars.iter().find(|f| &f.name == name) {
                    return Ty::State(f.ty.clone());
                }
                self.report(IrDiagCode::UnresolvedReference, format!("unknown variable `{name}`"));
                Ty::Unknown
            }
            Value::Lit(Literal::Bool(_)) => Ty::State(StateType::Base(BaseType::Bool)),
            Value::Lit(Literal::Int(_)) => Ty::State(StateType::Base(BaseType::Int)),
            Value::Lit(Literal::Str(_)) => Ty::State(StateType::Base(BaseType::String)),
            Value::ObjVar(obj, field) => {
                let t = self.value(obj);
                match self.class_of(&t, "field access") {
                    Some(class) => self.field_type(&class, field),
                    None => Ty::Unknown,
                }
            }
            Value::ObjAccess(obj, f) => {
                let t = self.value(obj);
                self.function(t, f)
            }
            Value::BinOp(op, a, b) => {
                self.value(a);
                self.value(b);
                match op {
                    BinOp::Less | BinOp::Eq | BinOp::StrEq | BinOp::And => {
                        Ty::State(StateType::Base(BaseType::Bool))
                    }
                    BinOp::Add => Ty::State(StateType::Base(BaseType::Int)),
                }
            }
            Value::New(ty, args) => {
                match ty {
                    StateType::List(_) => {
                        if args.len() > 1 {
                            self.report(IrDiagCode::ArityMismatch, "a list takes at most a capacity".into());
                        }
                        for a in args {
                            self.value(a);
                        }
                    }
                    t if t.is_object() => {
                        let class = t.class_name().expect("object");
                        match self.classes.get(class).map(|c| c.ctor_arity) {
                            None => {
                                self.report(IrDiagCode::UnresolvedReference, format!("class `{class}` is not in the package"))
                            }
                            Some(arity) => {
                                let arity = arity.unwrap_or(0);
                                if arity != args.len() {
                                    self.report(
                                        IrDiagCode::ArityMismatch,
                                        format!("`new {class}` takes {arity} argument(s), got {}", args.len()),
                                    );
                                }
                            }
                        }
                        for a in args {
                            self.value(a);
                        }
                    }
                    _ => self.report(IrDiagCode::TypeMismatch, format!("cannot construct {ty:?}")),
                }
                Ty::State(ty.clone())
            }
            Value::Call(name, args) => {
                let module = self.module;
                match module.funcs.iter().find(|f| &f.name == name && !f.is_constructor()) {
                    Some(f) => {
                        self.check_args(name, &f.params, args);
                        Self::call_result(&f.ret)
                    }
                    None => {
                        self.report(IrDiagCode::UnresolvedReference, format!("unknown method `{name}`"));
                        Ty::Unknown
                    }
                }
            }
            Value::ListIndex(list, index) => {
                let t = self.value(list);
                self.value(index);
                match t {
                    Ty::State(StateType::List(elem)) => Ty::State(*elem),
                    Ty::Unknown => Ty::Unknown,
                    other => {
                        self.report(IrDiagCode::TypeMismatch, format!("indexing a non-list of type {other:?}"));
                        Ty::Unknown
                    }
                }
            }
        }
    }

    fn function(&mut self, recv: Ty, f: &Function) -> Ty {
        match f {
            Function::Method(name, args) => {
                let Some(class) = self.class_of(&recv, "method call") else {
                    for a in args {
                        self.value(a);
                    }
                    return Ty::Unknown;
                };
                let found = self.classes.get(class.as_str()).and_then(|c| c.methods.get(name.as_str())).map(|s| (s.ret, s.params));
                match found {
                    Some((ret, params)) => {
                        self.check_args(name, params, args);
                        Self::call_result(ret)
                    }
                    None => {
                        self.report(IrDiagCode::UnresolvedReference, format!("no method `{name}` in `{class}`"));
                        Ty::Unknown
                    }
                }
            }
            list_op => {
                let elem = match recv {
                    Ty::State(StateType::List(elem)) => Some(*elem),
                    Ty::Unknown => None,
                    other => {
                        self.report(IrDiagCode::TypeMismatch, format!("list operation on {other:?}"));
                        None
                    }
                };
                match list_op {
                    Function::ListSize => Ty::State(StateType::Base(BaseType::Int)),
                    Function::ListInsert(i, v) => {
                        self.value(i);
                        self.expect(v, elem.as_ref());
                        Ty::Void
                    }
                    Function::ListAppend(v) => {
                        self.expect(v, elem.as_ref());
                        Ty::Void
                    }
                    Function::Method(..) => unreachable!(),
                }
            }
        }
    }

    fn expect(&mut self, v: &Value, ty: Option<&StateType>) {
        let got = self.value(v);
        if let (Some(want), Ty::State(got)) = (ty, &got) {
            if want != got {
                self.report(IrDiagCode::TypeMismatch, format!("expected {want:?}, found {got:?}"));
            }
        }
    }

    fn blocks(&mut self, body: &[Block]) {
        for stmt in body.iter().flat_map(|b| &b.0) {
            self.statement(stmt);
        }
    }

    fn scoped(&mut self, body: &[Block]) {
        self.scopes.push(HashMap::new());
        self.blocks(body);
        self.scopes.pop();
    }

    fn statement(&mut self, s: &Statement) {
        match s {
            Statement::Assign { target, source } => {
                if !target.is_lvalue() {
                    self.report(IrDiagCode::NotAnLValue, format!("cannot assign to {target:?}"));
                }
                self.value(target);
                self.value(source);
            }
            Statement::Decl(d) => {
                match d {
                    Declaration::VarDecDef { init, .. } | Declaration::ObjDecDef { init, .. } => {
                        self.value(init);
                    }
                    Declaration::ListDecLiterals { aux, .. } if aux == d.name() => {
                        self.report(IrDiagCode::DuplicateLocal, format!("helper `{aux}` shadows the list"));
                    }
                    _ => {}
                }
                self.declare(d.name(), d.ty());
            }
            Statement::Cond(c) => {
                for (cond, body) in &c.branches {
                    self.value(cond);
                    self.scoped(body);
                }
                if let Some(body) = &c.otherwise {
                    self.scoped(body);
                }
            }
            Statement::Iter(it) => {
                self.scopes.push(HashMap::new());
                self.loop_depth += 1;
                match it {
                    Iteration::While { cond, body } => {
                        self.value(cond);
                        self.scoped(body);
                    }
                    Iteration::For { init, cond, step, body } => {
                        self.statement(init);
                        self.value(cond);
                        self.statement(step);
                        self.scoped(body);
                    }
                }
                self.loop_depth -= 1;
                self.scopes.pop();
            }
            Statement::Jump(j) => {
                if self.loop_depth == 0 {
                    self.report(IrDiagCode::JumpOutsideLoop, format!("{j:?} outside a loop"));
                }
            }
            Statement::Return(v) | Statement::Value(v) => {
                self.value(v);
            }
            Statement::Comment(Comment::Delimit(text, width)) => {
                if *width < text.len() + 4 {
                    self.report(IrDiagCode::BadCommentWidth, format!("banner `{text}` does not fit in {width} columns"));
                }
            }
            Statement::Comment(Comment::Line(_)) => {}
        }
    }
}

/// Checks uniqueness, constructor naming, assignment targets and reference
/// resolution. Blocks are transparent: flattening them never changes the
/// result.
pub fn validate_ir(code: &AbstractCode) -> Vec<IrDiagnostic> {
    let mut out = Vec::new();
    let package = &code.package;

    let mut seen = HashSet::new();
    for m in &package.modules {
        if !seen.insert(m.name.as_str()) {
            out.push(IrDiagnostic {
                code: IrDiagCode::DuplicateModule,
                location: package.name.clone(),
                message: format!("module `{}` is defined more than once", m.name),
            });
        }
    }

    let mut classes = HashMap::new();
    for m in &package.modules {
        let mut members = HashSet::new();
        for name in m.vars.iter().map(|v| v.name.as_str()).chain(m.funcs.iter().filter(|f| !f.is_constructor()).map(|f| f.name.as_str())) {
            if !members.insert(name) {
                out.push(IrDiagnostic {
                    code: IrDiagCode::DuplicateMember,
                    location: m.name.clone(),
                    message: format!("member `{name}` is defined more than once"),
                });
            }
        }
        let ctors: Vec<_> = m.funcs.iter().filter(|f| f.is_constructor()).collect();
        if ctors.len() > 1 {
            out.push(IrDiagnostic {
                code: IrDiagCode::DuplicateMember,
                location: m.name.clone(),
                message: "more than one constructor".into(),
            });
        }
        for f in &m.funcs {
            let bad = match &f.ret {
                TransType::Construct(c) => c != &m.name || f.name != m.name,
                _ => f.name == m.name,
            };
            if bad {
                out.push(IrDiagnostic {
                    code: IrDiagCode::BadConstructor,
                    location: format!("{}.{}", m.name, f.name),
                    message: format!("constructors of `{}` must be named `{}` and return Construct(`{}`)", m.name, m.name, m.name),
                });
            }
        }
        classes.entry(m.name.as_str()).or_insert_with(|| ClassInfo {
            fields: m.vars.iter().map(|v| (v.name.as_str(), &v.ty)).collect(),
            methods: m
                .funcs
                .iter()
                .filter(|f| !f.is_constructor())
                .map(|f| (f.name.as_str(), Signature { ret: &f.ret, params: &f.params }))
                .collect(),
            ctor_arity: ctors.first().map(|c| c.params.len()),
        });
    }

    for m in &package.modules {
        for f in &m.funcs {
            let mut params = HashMap::new();
            let mut checker = Checker {
                classes: &classes,
                module: m,
                location: format!("{}.{}", m.name, f.name),
                scopes: Vec::new(),
                loop_depth: 0,
                out: &mut out,
            };
            for p in &f.params {
                if let Parameter::State { name, ty } = p {
                    if params.insert(name.clone(), ty.clone()).is_some() {
                        checker.report(IrDiagCode::DuplicateLocal, format!("parameter `{name}` repeats"));
                    }
                }
            }
            checker.scopes = vec![params, HashMap::new()];
            checker.blocks(&f.body);
        }
    }
    out
}

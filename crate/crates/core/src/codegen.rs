//! Story graph to code model.
//!
//! The generated package always has the same six classes (the state machine
//! interpreter, identical for every story) plus a `Main` class whose single
//! method builds the story's nodes, transitions and sections and hands them
//! to a `StoryManager`.

use std::collections::HashSet;

use thiserror::Error;

use crate::code::build::*;
use crate::code::{
    validate_ir, AbstractCode, Block, CodeModule, Declaration, IrDiagnostic, Literal, Package, StateType, Statement,
    Transformation, TransType,
};
use crate::model::{StoryGraph, Transition};

pub const PACKAGE_NAME: &str = "StoryDSL";
pub const DRIVER_MODULE: &str = "Main";
pub const DRIVER_FUNCTION: &str = "CreateStoryManager";
/// Columns a banner comment may span, indentation included.
pub const BANNER_WIDTH: usize = 80;

/// `prefix__label` with every character outside `[A-Za-z0-9_]` replaced by
/// `_`.
pub fn mangle(prefix: &str, label: &str) -> String {
    let body: String = label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    format!("{prefix}__{body}")
}

/// Issues mangled identifiers that are unique within one scope; a clash
/// gets `_2`, `_3`, ... in the order names are requested.
#[derive(Debug, Default)]
pub struct Mangler {
    issued: HashSet<String>,
}

impl Mangler {
    pub fn new() -> Self {
        Mangler::default()
    }

    pub fn issue(&mut self, prefix: &str, label: &str) -> String {
        let base = mangle(prefix, label);
        let mut name = base.clone();
        let mut n = 2;
        while self.issued.contains(&name) {
            name = format!("{base}_{n}");
            n += 1;
        }
        self.issued.insert(name.clone());
        name
    }
}

fn node_transition_like(module: &str, events_field: &str, events_getter: &str) -> CodeModule {
    let (src_node, src, dst_node, dst, evts) = ("srcNode", "src", "dstNode", "dst", "evts");
    pub_module(
        module,
        vec![
            priv_var(StateType::Node, src_node),
            priv_var(StateType::Node, dst_node),
            priv_var(list(string()), events_field),
        ],
        vec![
            constructor(
                module,
                vec![param(src, StateType::Node), param(dst, StateType::Node), param(evts, list(string()))],
                vec![block(vec![assign(src_node, var(src)), assign(dst_node, var(dst)), assign(events_field, var(evts))])],
            ),
            pub_func(typ(StateType::Node), "GetSrcNode", vec![], one_liner(return_var(src_node))),
            pub_func(typ(StateType::Node), "GetDstNode", vec![], one_liner(return_var(dst_node))),
            pub_func(typ(list(string())), events_getter, vec![], one_liner(return_var(events_field))),
        ],
    )
}

fn node_module() -> CodeModule {
    pub_module(
        "Node",
        vec![priv_var(string(), "nodeName")],
        vec![
            constructor("Node", vec![param("name", string())], one_liner(assign("nodeName", var("name")))),
            pub_func(typ(string()), "GetNodeName", vec![], one_liner(return_var("nodeName"))),
        ],
    )
}

fn section_module() -> CodeModule {
    let nodes = list(StateType::Node);
    let trans = list(StateType::NodeTransition);
    pub_module(
        "Section",
        vec![
            priv_var(string(), "sectName"),
            priv_var(nodes.clone(), "sectNodes"),
            priv_var(trans.clone(), "sectNodeTrans"),
        ],
        vec![
            constructor(
                "Section",
                vec![param("name", string()), param("nodes", nodes), param("trans", trans.clone())],
                vec![block(vec![
                    assign("sectName", var("name")),
                    assign("sectNodes", var("nodes")),
                    assign("sectNodeTrans", var("trans")),
                ])],
            ),
            pub_func(typ(string()), "GetSectName", vec![], one_liner(return_var("sectName"))),
            pub_func(typ(list(StateType::Node)), "GetSectNodes", vec![], one_liner(return_var("sectNodes"))),
            pub_func(typ(trans), "GetSectNodeTrans", vec![], one_liner(return_var("sectNodeTrans"))),
            pub_func(
                typ(boolean()),
                "HasNode",
                vec![param("node", StateType::Node)],
                vec![
                    block(vec![for_range(
                        "i",
                        list_size(var("sectNodes")),
                        one_liner(if_then(
                            equal(list_at(var("sectNodes"), var("i")), var("node")),
                            one_liner(ret(lit_bool(true))),
                        )),
                    )]),
                    block(vec![ret(lit_bool(false))]),
                ],
            ),
        ],
    )
}

fn story_module() -> CodeModule {
    let sects = list(StateType::Section);
    let sect_trans = list(StateType::SectionTransition);
    pub_module(
        "Story",
        vec![
            priv_var(string(), "storyName"),
            priv_var(sects.clone(), "storySects"),
            priv_var(sect_trans.clone(), "storySectTrans"),
            priv_var(StateType::Node, "initialNode"),
        ],
        vec![
            constructor(
                "Story",
                vec![
                    param("name", string()),
                    param("sects", sects.clone()),
                    param("sectTrans", sect_trans.clone()),
                    param("initial", StateType::Node),
                ],
                vec![block(vec![
                    assign("storyName", var("name")),
                    assign("storySects", var("sects")),
                    assign("storySectTrans", var("sectTrans")),
                    assign("initialNode", var("initial")),
                ])],
            ),
            pub_func(typ(string()), "GetStoryName", vec![], one_liner(return_var("storyName"))),
            pub_func(typ(sects), "GetSections", vec![], one_liner(return_var("storySects"))),
            pub_func(typ(sect_trans), "GetSectionTransitions", vec![], one_liner(return_var("storySectTrans"))),
            pub_func(typ(StateType::Node), "GetInitialNode", vec![], one_liner(return_var("initialNode"))),
        ],
    )
}

/// One group of transitions the manager scans in `Step`.
struct TransitionScan<'a> {
    owner: &'a str,
    getter: &'a str,
    list_name: &'a str,
    item: &'a str,
    elem: StateType,
    events_getter: &'a str,
}

/// Loop over a transition list looking for one out of the current node whose
/// events have all happened; on success move there.
fn fire_first(scan: TransitionScan<'_>, also: Vec<Statement>) -> Block {
    let TransitionScan { owner, getter, list_name, item, elem, events_getter } = scan;
    let list_ty = list(elem.clone());
    let ready = and(
        equal(invoke(var(item), "GetSrcNode", vec![]), var("currentNode")),
        call("AllHappened", vec![invoke(var(item), events_getter, vec![])]),
    );
    let mut on_ready = vec![assign("currentNode", invoke(var(item), "GetDstNode", vec![]))];
    on_ready.extend(also);
    on_ready.push(ret(lit_bool(true)));
    block(vec![
        var_dec_def(list_name, list_ty, invoke(var(owner), getter, vec![])),
        for_range(
            "i",
            list_size(var(list_name)),
            vec![block(vec![
                obj_dec_def(item, elem, list_at(var(list_name), var("i"))),
                if_then(ready, vec![block(on_ready)]),
            ])],
        ),
    ])
}

fn story_manager_module() -> CodeModule {
    let has_happened = pub_func(
        typ(boolean()),
        "HasHappened",
        vec![param("evt", string())],
        vec![
            block(vec![for_range(
                "i",
                list_size(var("happened")),
                one_liner(if_then(
                    str_equal(list_at(var("happened"), var("i")), var("evt")),
                    one_liner(ret(lit_bool(true))),
                )),
            )]),
            block(vec![ret(lit_bool(false))]),
        ],
    );
    let all_happened = pub_func(
        typ(boolean()),
        "AllHappened",
        vec![param("evts", list(string()))],
        vec![
            block(vec![for_range(
                "i",
                list_size(var("evts")),
                one_liner(if_then(
                    equal(call("HasHappened", vec![list_at(var("evts"), var("i"))]), lit_bool(false)),
                    one_liner(ret(lit_bool(false))),
                )),
            )]),
            block(vec![ret(lit_bool(true))]),
        ],
    );
    let signal = pub_func(
        typ(boolean()),
        "SignalEvent",
        vec![param("evt", string())],
        vec![
            block(vec![if_then(
                equal(call("HasHappened", vec![var("evt")]), lit_bool(false)),
                one_liner(list_append(var("happened"), var("evt"))),
            )]),
            block(vec![
                var_dec_def("fired", boolean(), lit_bool(false)),
                var_dec_def("moved", boolean(), call("Step", vec![])),
                while_loop(
                    var("moved"),
                    vec![block(vec![assign("fired", lit_bool(true)), assign("moved", call("Step", vec![]))])],
                ),
            ]),
            block(vec![return_var("fired")]),
        ],
    );
    let step = priv_func(
        typ(boolean()),
        "Step",
        vec![],
        vec![
            fire_first(
                TransitionScan {
                    owner: "currentSect",
                    getter: "GetSectNodeTrans",
                    list_name: "trans",
                    item: "t",
                    elem: StateType::NodeTransition,
                    events_getter: "GetNodeTransEvents",
                },
                vec![],
            ),
            fire_first(
                TransitionScan {
                    owner: "story",
                    getter: "GetSectionTransitions",
                    list_name: "sectTrans",
                    item: "st",
                    elem: StateType::SectionTransition,
                    events_getter: "GetSectTransEvents",
                },
                vec![assign("currentSect", call("FindSection", vec![var("currentNode")]))],
            ),
            block(vec![ret(lit_bool(false))]),
        ],
    );
    let find_section = priv_func(
        typ(StateType::Section),
        "FindSection",
        vec![param("node", StateType::Node)],
        vec![
            block(vec![
                var_dec_def("sects", list(StateType::Section), invoke(var("story"), "GetSections", vec![])),
                for_range(
                    "i",
                    list_size(var("sects")),
                    one_liner(if_then(
                        invoke(list_at(var("sects"), var("i")), "HasNode", vec![var("node")]),
                        one_liner(ret(list_at(var("sects"), var("i")))),
                    )),
                ),
            ]),
            block(vec![return_var("currentSect")]),
        ],
    );
    pub_module(
        "StoryManager",
        vec![
            priv_var(StateType::Story, "story"),
            priv_var(StateType::Node, "currentNode"),
            priv_var(StateType::Section, "currentSect"),
            priv_var(list(string()), "happened"),
        ],
        vec![
            constructor(
                "StoryManager",
                vec![param("s", StateType::Story)],
                vec![
                    block(vec![
                        assign("story", var("s")),
                        assign("currentNode", invoke(var("s"), "GetInitialNode", vec![])),
                        assign("happened", new_obj(list(string()), vec![])),
                    ]),
                    block(vec![assign("currentSect", call("FindSection", vec![var("currentNode")]))]),
                ],
            ),
            pub_func(typ(StateType::Node), "GetCurrentNode", vec![], one_liner(return_var("currentNode"))),
            pub_func(typ(StateType::Section), "GetCurrentSection", vec![], one_liner(return_var("currentSect"))),
            signal,
            has_happened,
            all_happened,
            step,
            find_section,
        ],
    )
}

/// The six story-independent classes, in their fixed order.
pub fn generate_pattern_modules() -> Vec<CodeModule> {
    vec![
        node_module(),
        node_transition_like("NodeTransition", "nodeTransEvents", "GetNodeTransEvents"),
        section_module(),
        node_transition_like("SectionTransition", "sectTransEvents", "GetSectTransEvents"),
        story_module(),
        story_manager_module(),
    ]
}

fn insert_all(list_name: &str, items: &[String]) -> Vec<Statement> {
    items
        .iter()
        .enumerate()
        .map(|(i, item)| list_insert(var(list_name), lit_int(i as i64), var(item)))
        .collect()
}

fn transition_label(graph: &StoryGraph, t: &Transition) -> String {
    format!("{} GOES {}", graph.node_label(t.src), graph.node_label(t.dst))
}

/// Declares the event list and the transition object for one transition.
fn transition_decls(
    graph: &StoryGraph,
    names: &mut Mangler,
    t: &Transition,
    ty: StateType,
    prefix: &str,
    node_ident: &[String],
) -> (String, Vec<Statement>) {
    let label = transition_label(graph, t);
    let events = names.issue("events", &label);
    let aux = names.issue("eventsArr", &label);
    let ident = names.issue(prefix, &label);
    let literals = t.events.iter().map(|e| Literal::Str(graph.event_label(*e).to_string())).collect();
    let stmts = vec![
        decl(Declaration::ListDecLiterals { name: events.clone(), aux, elem: string(), literals }),
        obj_dec_def(
            &ident,
            ty.clone(),
            new_obj(ty, vec![var(&node_ident[t.src.index()]), var(&node_ident[t.dst.index()]), var(&events)]),
        ),
    ];
    (ident, stmts)
}

/// The routine that builds this story's objects and returns a manager.
pub fn generate_story_instantiation(graph: &StoryGraph) -> Transformation {
    let mut names = Mangler::new();
    let mut body = Vec::new();

    let mut node_ident = vec![String::new(); graph.nodes.len()];
    for s in &graph.sections {
        for n in &s.nodes {
            node_ident[n.index()] = names.issue("node", graph.node_label(*n));
        }
    }

    // Nodes, grouped per section.
    let mut node_lists = Vec::new();
    for s in &graph.sections {
        let mut decls = vec![comment(&format!("\"{}\"", s.name))];
        for n in &s.nodes {
            decls.push(obj_dec_def(
                &node_ident[n.index()],
                StateType::Node,
                new_obj(StateType::Node, vec![lit_str(graph.node_label(*n))]),
            ));
        }
        body.push(block(decls));

        let list_name = names.issue("nodes", &s.name);
        let idents: Vec<_> = s.nodes.iter().map(|n| node_ident[n.index()].clone()).collect();
        let mut stmts = vec![list_dec(&list_name, StateType::Node, idents.len())];
        stmts.extend(insert_all(&list_name, &idents));
        stmts.push(comment_delimit("End Nodes", BANNER_WIDTH));
        body.push(block(stmts));
        node_lists.push(list_name);
    }

    // Transitions inside each section.
    let mut trans_lists = Vec::new();
    for s in &graph.sections {
        let mut stmts = vec![comment(&format!("\"{}\" transitions", s.name))];
        let mut idents = Vec::new();
        for t in &s.transitions {
            let (ident, decls) =
                transition_decls(graph, &mut names, t, StateType::NodeTransition, "nodeTrans", &node_ident);
            stmts.extend(decls);
            idents.push(ident);
        }
        body.push(block(stmts));

        let list_name = names.issue("nodeTransList", &s.name);
        let mut stmts = vec![list_dec(&list_name, StateType::NodeTransition, idents.len())];
        stmts.extend(insert_all(&list_name, &idents));
        stmts.push(comment_delimit("End Node Transitions", BANNER_WIDTH));
        body.push(block(stmts));
        trans_lists.push(list_name);
    }

    // Sections.
    let mut stmts = vec![comment("Sections")];
    let mut sect_idents = Vec::new();
    for (i, s) in graph.sections.iter().enumerate() {
        let ident = names.issue("sect", &s.name);
        stmts.push(obj_dec_def(
            &ident,
            StateType::Section,
            new_obj(StateType::Section, vec![lit_str(&s.name), var(&node_lists[i]), var(&trans_lists[i])]),
        ));
        sect_idents.push(ident);
    }
    body.push(block(stmts));
    let sections_list = names.issue("sections", &graph.name);
    let mut stmts = vec![list_dec(&sections_list, StateType::Section, sect_idents.len())];
    stmts.extend(insert_all(&sections_list, &sect_idents));
    stmts.push(comment_delimit("End Sections", BANNER_WIDTH));
    body.push(block(stmts));

    // Transitions between sections.
    let mut idents = Vec::new();
    let mut stmts = vec![comment("Section transitions")];
    for t in &graph.section_transitions {
        let (ident, decls) =
            transition_decls(graph, &mut names, t, StateType::SectionTransition, "sectTrans", &node_ident);
        stmts.extend(decls);
        idents.push(ident);
    }
    if !idents.is_empty() {
        body.push(block(stmts));
    }
    let sect_trans_list = names.issue("sectTransList", &graph.name);
    let mut stmts = vec![list_dec(&sect_trans_list, StateType::SectionTransition, idents.len())];
    stmts.extend(insert_all(&sect_trans_list, &idents));
    stmts.push(comment_delimit("End Section Transitions", BANNER_WIDTH));
    body.push(block(stmts));

    let story = names.issue("story", &graph.name);
    body.push(block(vec![
        obj_dec_def(
            &story,
            StateType::Story,
            new_obj(
                StateType::Story,
                vec![
                    lit_str(&graph.name),
                    var(&sections_list),
                    var(&sect_trans_list),
                    var(&node_ident[graph.initial.index()]),
                ],
            ),
        ),
        ret(new_obj(StateType::StoryManager, vec![var(&story)])),
    ]));

    pub_func(typ(StateType::StoryManager), DRIVER_FUNCTION, vec![], body)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("generated code failed validation (generator bug): {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Internal(Vec<IrDiagnostic>),
}

/// Builds the complete package for a validated story graph.
pub fn compile(graph: &StoryGraph) -> Result<AbstractCode, CodegenError> {
    let mut modules = generate_pattern_modules();
    modules.push(pub_module(DRIVER_MODULE, vec![], vec![generate_story_instantiation(graph)]));
    let code = AbstractCode { package: Package { name: PACKAGE_NAME.into(), modules } };
    let diags = validate_ir(&code);
    if diags.is_empty() {
        Ok(code)
    } else {
        Err(CodegenError::Internal(diags))
    }
}

/// Every state type appearing anywhere in a package.
pub fn state_types_used(code: &AbstractCode) -> Vec<StateType> {
    fn value(v: &crate::code::Value, out: &mut Vec<StateType>) {
        use crate::code::{Function, Value};
        match v {
            Value::New(t, args) => {
                out.push(t.clone());
                args.iter().for_each(|a| value(a, out));
            }
            Value::Call(_, args) => args.iter().for_each(|a| value(a, out)),
            Value::Var(_) | Value::Lit(_) => {}
            Value::ObjVar(o, _) => value(o, out),
            Value::ObjAccess(o, f) => {
                value(o, out);
                match f {
                    Function::Method(_, args) => args.iter().for_each(|a| value(a, out)),
                    Function::ListInsert(a, b) => {
                        value(a, out);
                        value(b, out);
                    }
                    Function::ListAppend(a) => value(a, out),
                    Function::ListSize => {}
                }
            }
            Value::BinOp(_, a, b) | Value::ListIndex(a, b) => {
                value(a, out);
                value(b, out);
            }
        }
    }
    fn stmt(s: &Statement, out: &mut Vec<StateType>) {
        use crate::code::{Iteration, Statement as S};
        match s {
            S::Assign { target, source } => {
                value(target, out);
                value(source, out);
            }
            S::Decl(d) => {
                out.push(d.ty());
                if let Declaration::VarDecDef { init, .. } | Declaration::ObjDecDef { init, .. } = d {
                    value(init, out);
                }
            }
            S::Cond(c) => {
                for (v, b) in &c.branches {
                    value(v, out);
                    blocks(b, out);
                }
                if let Some(b) = &c.otherwise {
                    blocks(b, out);
                }
            }
            S::Iter(Iteration::While { cond, body }) => {
                value(cond, out);
                blocks(body, out);
            }
            S::Iter(Iteration::For { init, cond, step, body }) => {
                stmt(init, out);
                value(cond, out);
                stmt(step, out);
                blocks(body, out);
            }
            S::Return(v) | S::Value(v) => value(v, out),
            S::Jump(_) | S::Comment(_) => {}
        }
    }
    fn blocks(bs: &[Block], out: &mut Vec<StateType>) {
        bs.iter().flat_map(|b| &b.0).for_each(|s| stmt(s, out));
    }
    let mut out = Vec::new();
    for m in &code.package.modules {
        out.extend(m.vars.iter().map(|v| v.ty.clone()));
        for f in &m.funcs {
            if let TransType::State(t) = &f.ret {
                out.push(t.clone());
            }
            for p in &f.params {
                if let crate::code::Parameter::State { ty, .. } = p {
                    out.push(ty.clone());
                }
            }
            blocks(&f.body, &mut out);
        }
    }
    let mut uniq = Vec::new();
    for t in out {
        if !uniq.contains(&t) {
            uniq.push(t);
        }
    }
    uniq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{Scope, Value};
    use crate::model::Story;

    #[test]
    fn mangle_examples() {
        assert_eq!(mangle("node", "Good Won't Save You"), "node__Good_Won_t_Save_You");
        assert_eq!(mangle("nodes", "Fate Decides"), "nodes__Fate_Decides");
    }

    #[test]
    fn collisions_get_numbered() {
        let mut m = Mangler::new();
        assert_eq!(m.issue("node", "A B"), "node__A_B");
        assert_eq!(m.issue("node", "A_B"), "node__A_B_2");
        assert_eq!(m.issue("node", "A-B"), "node__A_B_3");
        assert_eq!(m.issue("node", "A_B_2"), "node__A_B_2_2");
    }

    #[test]
    fn node_transition_module_shape() {
        let m = &generate_pattern_modules()[1];
        assert_eq!(m.name, "NodeTransition");
        let vars: Vec<_> = m.vars.iter().map(|v| (v.name.as_str(), v.scope)).collect();
        assert_eq!(vars, [("srcNode", Scope::Private), ("dstNode", Scope::Private), ("nodeTransEvents", Scope::Private)]);
        let funcs: Vec<_> = m.funcs.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(funcs, ["NodeTransition", "GetSrcNode", "GetDstNode", "GetNodeTransEvents"]);
        assert_eq!(m.funcs[0].params.len(), 3);
        assert_eq!(m.funcs[0].body[0].0.len(), 3);
    }

    #[test]
    fn pattern_modules_validate() {
        let code = AbstractCode { package: Package { name: PACKAGE_NAME.into(), modules: generate_pattern_modules() } };
        assert!(validate_ir(&code).is_empty(), "{:?}", validate_ir(&code));
    }

    #[test]
    fn empty_where_gives_zero_capacity_list() {
        let story = Story::from_source("STORY S INITIAL A SECTION X { A GOES B WHEN e } WHERE").unwrap();
        let f = generate_story_instantiation(&story.graph);
        let caps: Vec<_> = f
            .body
            .iter()
            .flat_map(|b| &b.0)
            .filter_map(|s| match s {
                Statement::Decl(Declaration::ListDec { elem: StateType::SectionTransition, capacity, .. }) => {
                    Some(*capacity)
                }
                _ => None,
            })
            .collect();
        assert_eq!(caps, [0]);
    }

    #[test]
    fn compile_is_deterministic() {
        let story = Story::from_source("STORY S INITIAL A SECTION X { A GOES B WHEN e } WHERE").unwrap();
        let a = compile(&story.graph).unwrap();
        assert_eq!(a, compile(&story.graph).unwrap());
        assert_eq!(a.package.modules.len(), 7);
        let nodes = a.package.modules[6].funcs[0]
            .body
            .iter()
            .flat_map(|b| &b.0)
            .filter(|s| matches!(s, Statement::Decl(Declaration::ObjDecDef { init: Value::New(StateType::Node, _), .. })))
            .count();
        assert_eq!(nodes, story.graph.nodes.len());
    }
}

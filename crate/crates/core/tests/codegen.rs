use std::collections::{BTreeSet, HashMap};

use saga::code::{
    validate_ir, AbstractCode, Block, Declaration, Function, Iteration, Literal, Statement, Transformation, Value,
};
use saga::codegen::{compile, mangle, Mangler, DRIVER_FUNCTION, DRIVER_MODULE};
use saga::render::{render_package, Dialect};
use saga::Story;
use saga_testkit::gen::{GenStory, StoryOpts};
use saga_testkit::rng;

fn compile_src(src: &str) -> AbstractCode {
    compile(&Story::from_source(src).unwrap().graph).unwrap()
}

fn driver(code: &AbstractCode) -> &Transformation {
    let main = code.package.modules.iter().find(|m| m.name == DRIVER_MODULE).unwrap();
    main.funcs.iter().find(|f| f.name == DRIVER_FUNCTION).unwrap()
}

fn statements(body: &[Block]) -> impl Iterator<Item = &Statement> {
    body.iter().flat_map(|b| b.0.iter())
}

fn random_codes(seed: u64, cases: usize) -> Vec<(GenStory, AbstractCode)> {
    let mut r = rng(seed);
    let opts = StoryOpts { max_nodes: 14, or_prob: 0.3, ..StoryOpts::default() };
    (0..cases)
        .map(|_| {
            let g = GenStory::random(&mut r, opts);
            let code = compile_src(&g.to_source(false));
            (g, code)
        })
        .collect()
}

#[test]
fn generated_code_validates() {
    assert!(validate_ir(&compile_src(saga::SAMPLE_STORY)).is_empty());
    for (_, code) in random_codes(1, 150) {
        assert_eq!(validate_ir(&code), vec![]);
    }
}

fn flatten_blocks(blocks: &[Block]) -> Vec<Block> {
    let stmts = blocks.iter().flat_map(|b| b.0.iter()).map(flatten_stmt).collect();
    vec![Block(stmts)]
}

fn flatten_stmt(s: &Statement) -> Statement {
    match s {
        Statement::Cond(c) => {
            let mut c = c.clone();
            for (_, body) in &mut c.branches {
                *body = flatten_blocks(body);
            }
            if let Some(o) = &mut c.otherwise {
                *o = flatten_blocks(o);
            }
            Statement::Cond(c)
        }
        Statement::Iter(Iteration::While { cond, body }) => {
            Statement::Iter(Iteration::While { cond: cond.clone(), body: flatten_blocks(body) })
        }
        Statement::Iter(Iteration::For { init, cond, step, body }) => Statement::Iter(Iteration::For {
            init: init.clone(),
            cond: cond.clone(),
            step: step.clone(),
            body: flatten_blocks(body),
        }),
        other => other.clone(),
    }
}

fn flatten(code: &AbstractCode) -> AbstractCode {
    let mut code = code.clone();
    for m in &mut code.package.modules {
        for f in &mut m.funcs {
            f.body = flatten_blocks(&f.body);
        }
    }
    code
}

/// Renames the first variable read of every `Return` so the validator has
/// something to say.
fn break_returns(blocks: &mut [Block]) {
    for b in blocks {
        for s in &mut b.0 {
            match s {
                Statement::Return(Value::Var(name)) => *name = format!("{name}_missing"),
                Statement::Cond(c) => {
                    for (_, body) in &mut c.branches {
                        break_returns(body);
                    }
                }
                Statement::Iter(Iteration::While { body, .. } | Iteration::For { body, .. }) => break_returns(body),
                _ => {}
            }
        }
    }
}

#[test]
fn blocks_carry_no_meaning() {
    let code = compile_src(saga::SAMPLE_STORY);
    assert_eq!(validate_ir(&flatten(&code)), validate_ir(&code));

    let mut broken = code.clone();
    for m in &mut broken.package.modules {
        for f in &mut m.funcs {
            break_returns(&mut f.body);
        }
    }
    let diags = validate_ir(&broken);
    assert!(!diags.is_empty());
    assert_eq!(validate_ir(&flatten(&broken)), diags);
}

#[test]
fn mangle_examples() {
    assert_eq!(mangle("node", "Good Won't Save You"), "node__Good_Won_t_Save_You");
    assert_eq!(mangle("nodes", "Fate Decides"), "nodes__Fate_Decides");
}

#[test]
fn mangle_collisions_are_exactly_the_sanitizer_classes() {
    // Every string of length <= 3 over a small alphabet. Two labels collide
    // iff they agree after mapping each non-identifier character to `_`.
    let alphabet = ['a', 'B', '7', '_', ' ', '\'', '-'];
    let mut labels = vec![String::new()];
    for len in 1..=3 {
        let mut next = Vec::new();
        for l in labels.iter().filter(|l| l.len() == len - 1) {
            for c in alphabet {
                next.push(format!("{l}{c}"));
            }
        }
        labels.extend(next);
    }
    let class = |s: &str| -> String { s.chars().map(|c| if matches!(c, ' ' | '\'' | '-') { '_' } else { c }).collect() };
    let mut pairs = 0;
    for a in &labels {
        for b in &labels {
            let collide = mangle("node", a) == mangle("node", b);
            assert_eq!(collide, class(a) == class(b), "{a:?} vs {b:?}");
            pairs += 1;
        }
    }
    assert_eq!(pairs, labels.len() * labels.len());

    let mut m = Mangler::new();
    let issued: Vec<_> = ["a b", "a-b", "a_b", "a'b"].iter().map(|l| m.issue("node", l)).collect();
    assert_eq!(issued, ["node__a_b", "node__a_b_2", "node__a_b_3", "node__a_b_4"]);
}

#[test]
fn every_node_and_event_is_traceable() {
    for (g, code) in random_codes(2, 100) {
        let f = driver(&code);
        let mut node_literals = BTreeSet::new();
        let mut strings = BTreeSet::new();
        for s in statements(&f.body) {
            match s {
                Statement::Decl(Declaration::ObjDecDef { init: Value::New(saga::code::StateType::Node, args), .. }) => {
                    if let [Value::Lit(Literal::Str(l))] = args.as_slice() {
                        node_literals.insert(l.clone());
                    }
                }
                Statement::Decl(Declaration::ListDecLiterals { literals, .. }) => {
                    for l in literals {
                        if let Literal::Str(s) = l {
                            strings.insert(s.clone());
                        }
                    }
                }
                _ => {}
            }
        }
        let labels: BTreeSet<_> = g.labels.iter().cloned().collect();
        assert_eq!(node_literals, labels);
        let used: BTreeSet<_> =
            g.transitions.iter().flat_map(|t| t.events.iter().map(|&e| g.events[e].clone())).collect();
        assert_eq!(strings, used);
    }
}

#[test]
fn locals_are_unique() {
    for (_, code) in random_codes(3, 100) {
        let mut seen = HashMap::new();
        for s in statements(&driver(&code).body) {
            if let Statement::Decl(d) = s {
                let mut names = vec![d.name().to_string()];
                if let Declaration::ListDecLiterals { aux, .. } = d {
                    names.push(aux.clone());
                }
                for n in names {
                    assert!(seen.insert(n.clone(), ()).is_none(), "duplicate local {n}");
                }
            }
        }
    }
}

#[test]
fn pattern_modules_do_not_depend_on_the_story() {
    let sample = compile_src(saga::SAMPLE_STORY);
    let pattern = |c: &AbstractCode| c.package.modules.iter().filter(|m| m.name != DRIVER_MODULE).cloned().collect::<Vec<_>>();
    assert_eq!(pattern(&sample).len(), 6);
    for (_, code) in random_codes(4, 20) {
        assert_eq!(pattern(&code), pattern(&sample));
    }
}

#[test]
fn every_dialect_renders_every_story() {
    for (_, code) in random_codes(5, 40) {
        for d in Dialect::ALL {
            let files = render_package(d, &code).unwrap();
            assert!(!files.is_empty());
        }
    }
}

#[test]
fn fate_decides_list_has_five_positional_inserts() {
    let code = compile_src(saga::SAMPLE_STORY);
    let stmts: Vec<_> = statements(&driver(&code).body).collect();
    let at = stmts
        .iter()
        .position(|s| matches!(s, Statement::Decl(Declaration::ListDec { name, capacity: 5, .. }) if name == "nodes__Fate_Decides"))
        .expect("capacity-5 list for Fate Decides");
    let expected = ["Good_Won_t_Save_You", "Winding_Down", "Final_Choice", "Battle", "Can_t_Escape"];
    for (i, label) in expected.iter().enumerate() {
        let Statement::Value(Value::ObjAccess(list, Function::ListInsert(index, item))) = stmts[at + 1 + i] else {
            panic!("expected insert, found {:?}", stmts[at + 1 + i]);
        };
        assert_eq!(**list, Value::Var("nodes__Fate_Decides".into()));
        assert_eq!(**index, Value::Lit(Literal::Int(i as i64)));
        assert_eq!(**item, Value::Var(format!("node__{label}")));
    }
}

#[test]
fn ir_json_snapshot() {
    let code = compile_src("STORY Tiny INITIAL Dark SECTION Night { Dark GOES Light WHEN dawn AND birds } WHERE");
    let json = code.to_json();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/snapshots/tiny_ir.json");
    if std::env::var_os("SAGA_BLESS").is_some() {
        std::fs::write(path, &json).unwrap();
    }
    let expected = std::fs::read_to_string(path).expect("run with SAGA_BLESS=1 to create the snapshot");
    assert_eq!(json, expected);
}

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use galilean::expr::{parse_expression, parse_statement, BinaryOp, Expression, Statement};
use galilean::intelligibility::{
    canonicalize, fold_statement, galilean_intelligibility, groups_of, score,
    significantly_different, ComparisonVerdict, Counts,
};
use galilean::ontology::{
    bind_symbols, classify_statement, AnnotationSet, Concept, ConceptKind, StatementRegion,
    SymbolBinding,
};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{Config, TestRunner};
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn concept(id: &str, kind: ConceptKind, measurable: bool, grounding: &str) -> Concept {
    Concept {
        id: id.into(),
        kind,
        measurable,
        grounding: grounding.into(),
    }
}

/// Binds each symbol to a concept of the same name.
pub fn self_bound(concepts: Vec<Concept>, operators: &[&str]) -> AnnotationSet {
    AnnotationSet {
        bindings: concepts
            .iter()
            .map(|c| SymbolBinding {
                symbol: c.id.clone(),
                concept: c.id.clone(),
            })
            .collect(),
        concepts,
        auxiliaries: Vec::new(),
        operators: operators.iter().map(|s| s.to_string()).collect(),
    }
}

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];
pub const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];

/// Three grounded measurable variables, four empirical constants, `pi`, a
/// neutral operator `f` and a function `h` bound to an empirical constant.
pub fn standard_ontology() -> AnnotationSet {
    let mut concepts: Vec<Concept> = VARIABLES
        .iter()
        .map(|v| concept(v, ConceptKind::Variable, true, "measured quantity"))
        .collect();
    concepts.extend(
        CONSTANTS
            .iter()
            .map(|c| concept(c, ConceptKind::EmpiricalConstant, true, "fitted constant")),
    );
    concepts.push(concept("pi", ConceptKind::MathematicalConstant, false, ""));
    concepts.push(concept(
        "h",
        ConceptKind::EmpiricalConstant,
        true,
        "fitted function",
    ));
    self_bound(concepts, &["f"])
}

pub fn standard_symbols() -> Vec<String> {
    VARIABLES
        .iter()
        .chain(CONSTANTS.iter())
        .chain(["pi"].iter())
        .map(|s| s.to_string())
        .collect()
}

fn arb_number() -> impl Strategy<Value = Expression> {
    prop_oneof![
        (0i64..20).prop_map(Expression::integer),
        (0i64..1000)
            .prop_map(|n| Expression::Number(BigRational::new(BigInt::from(n), BigInt::from(100)))),
    ]
}

fn arb_op() -> impl Strategy<Value = BinaryOp> {
    select(vec![
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Pow,
    ])
}

/// Expressions over `symbols` with applications of `functions`. Literals
/// are non-negative, as the parser never produces negative literals.
pub fn arb_expr(symbols: Vec<String>, functions: Vec<String>) -> BoxedStrategy<Expression> {
    let leaf = prop_oneof![
        1 => arb_number(),
        3 => select(symbols).prop_map(Expression::Symbol),
    ];
    leaf.prop_recursive(5, 40, 3, move |inner| {
        prop_oneof![
            1 => inner.clone().prop_map(Expression::negate),
            4 => (arb_op(), inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| Expression::binary(op, l, r)),
            1 => (select(functions.clone()), prop::collection::vec(inner, 1..3))
                .prop_map(|(f, args)| Expression::apply(f, args)),
        ]
    })
    .boxed()
}

pub fn arb_standard_statement() -> impl Strategy<Value = Statement> {
    let e = || arb_expr(standard_symbols(), vec!["f".into(), "h".into()]);
    (e(), e()).prop_map(|(l, r)| Statement::new(l, r))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn outcome<T: std::fmt::Debug>(
    result: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    result.map_err(|e| e.to_string())
}

pub fn check_intelligibility_bounds(cases: u32) -> Result<(), String> {
    outcome(
        runner(cases).run(&(0u64..1_000_000, 1u64..1_000_000), |(n_e, n_o)| {
            let i = galilean_intelligibility(n_e, n_o).finite().unwrap();
            prop_assert!(i <= Ratio::from_integer(1));
            prop_assert_eq!(i == Ratio::from_integer(1), n_e == 0);
            Ok(())
        }),
    )
}

pub fn check_monotonicity(cases: u32) -> Result<(), String> {
    outcome(
        runner(cases).run(&(0u64..1_000_000, 1u64..1_000_000), |(n_e, n_o)| {
            let i = galilean_intelligibility(n_e, n_o);
            prop_assert!(galilean_intelligibility(n_e + 1, n_o) < i);
            let more_vars = galilean_intelligibility(n_e, n_o + 1);
            if n_e > 0 {
                prop_assert!(more_vars > i);
            } else {
                prop_assert_eq!(more_vars, i);
            }
            Ok(())
        }),
    )
}

fn group_sets(stmt: &Statement, ann: &AnnotationSet) -> Vec<BTreeSet<String>> {
    let bound = bind_symbols(stmt, ann).unwrap();
    groups_of(&canonicalize(&bound))
        .into_iter()
        .map(|g| g.members)
        .collect()
}

pub fn check_fusion_idempotence(cases: u32) -> Result<(), String> {
    let ann = standard_ontology();
    outcome(runner(cases).run(&arb_standard_statement(), |stmt| {
        let canonical = canonicalize(&bind_symbols(&stmt, &ann).unwrap());
        let once = fold_statement(&canonical);
        prop_assert_eq!(&fold_statement(&once), &once);
        let before: Vec<_> = groups_of(&canonical)
            .into_iter()
            .map(|g| g.members)
            .collect();
        let after: Vec<_> = groups_of(&once).into_iter().map(|g| g.members).collect();
        prop_assert_eq!(before, after);
        Ok(())
    }))
}

type Summary = Option<(u64, u64, Ratio<i64>, StatementRegion)>;

fn summary(stmt: &Statement, ann: &AnnotationSet) -> Summary {
    score(stmt, ann)
        .ok()
        .map(|r| (r.n_o, r.n_e, r.intelligibility, r.region))
}

pub fn check_rename_invariance(cases: u32) -> Result<(), String> {
    let ann = standard_ontology();
    let mut renamed = ann.clone();
    for b in &mut renamed.bindings {
        b.symbol = format!("{}_r'", b.symbol);
    }
    outcome(runner(cases).run(&arb_standard_statement(), |stmt| {
        let mut rename = |s: &str| Expression::symbol(format!("{s}_r'"));
        let other = stmt.map_symbols(&mut rename);
        let other = Statement {
            left: rename_functions(&other.left),
            right: rename_functions(&other.right),
            ..other
        };
        prop_assert_eq!(summary(&stmt, &ann), summary(&other, &renamed));
        Ok(())
    }))
}

fn rename_functions(e: &Expression) -> Expression {
    match e {
        Expression::Apply { function, args } if function == "h" => {
            Expression::apply("h_r'", args.iter().map(rename_functions).collect())
        }
        Expression::Apply { function, args } => Expression::apply(
            function.clone(),
            args.iter().map(rename_functions).collect(),
        ),
        Expression::Negate(c) => Expression::negate(rename_functions(c)),
        Expression::Binary { op, left, right } => {
            Expression::binary(*op, rename_functions(left), rename_functions(right))
        }
        leaf => leaf.clone(),
    }
}

/// Replacing every occurrence of one symbol `s` by `s*s` changes neither
/// count.
pub fn check_duplicate_occurrence_invariance(cases: u32) -> Result<(), String> {
    let ann = standard_ontology();
    let strategy = (arb_standard_statement(), select(standard_symbols()));
    outcome(runner(cases).run(&strategy, |(stmt, target)| {
        let doubled = stmt.map_symbols(&mut |s| {
            let sym = Expression::symbol(s);
            if s == target {
                Expression::binary(BinaryOp::Mul, sym.clone(), sym)
            } else {
                sym
            }
        });
        let a = score(&stmt, &ann).ok().map(|r| r.counts());
        let b = score(&doubled, &ann).ok().map(|r| r.counts());
        prop_assert_eq!(a, b);
        Ok(())
    }))
}

pub fn check_parser_round_trip(cases: u32) -> Result<(), String> {
    let strategy = arb_expr(standard_symbols(), vec!["f".into(), "h".into()]);
    outcome(runner(cases).run(&(strategy.clone(), strategy), |(l, r)| {
        let text = l.to_string();
        prop_assert_eq!(
            parse_expression(&text).ok(),
            Some(l.clone()),
            "text: {}",
            text
        );
        let stmt = Statement::new(l, r);
        prop_assert_eq!(parse_statement(&stmt.to_string()).ok(), Some(stmt));
        Ok(())
    }))
}

fn arb_concept(id: String) -> impl Strategy<Value = Concept> {
    (
        select(vec![
            ConceptKind::Variable,
            ConceptKind::EmpiricalConstant,
            ConceptKind::MathematicalConstant,
        ]),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(move |(kind, measurable, grounded)| {
            let measurable = measurable && kind != ConceptKind::MathematicalConstant;
            concept(
                &id,
                kind,
                measurable,
                if grounded { "grounding" } else { "" },
            )
        })
}

/// Random ontologies over the standard symbols.
pub fn arb_ontology() -> impl Strategy<Value = AnnotationSet> {
    let mut ids = standard_symbols();
    ids.push("h".into());
    ids.into_iter()
        .map(arb_concept)
        .collect::<Vec<_>>()
        .prop_map(|concepts| self_bound(concepts, &["f"]))
}

pub fn check_classify_totality(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(
        &(arb_standard_statement(), arb_ontology()),
        |(stmt, ann)| {
            let bound = bind_symbols(&stmt, &ann).unwrap();
            let region = classify_statement(&bound);
            match region {
                StatementRegion::EmpiricalMathematical => {
                    prop_assert!(bound.measurable_concepts().len() >= 2)
                }
                StatementRegion::PureMathematical => {
                    prop_assert!(bound.grounded_concepts().is_empty())
                }
                _ => prop_assert!(!bound.grounded_concepts().is_empty()),
            }
            // Stripping measurability always demotes out of the empirical region.
            let mut flat = ann.clone();
            flat.concepts.iter_mut().for_each(|c| c.measurable = false);
            let demoted = classify_statement(&bind_symbols(&stmt, &flat).unwrap());
            prop_assert_ne!(demoted, StatementRegion::EmpiricalMathematical);
            Ok(())
        },
    ))
}

pub fn check_compare_symmetry(cases: u32) -> Result<(), String> {
    let counts = || (0u64..60, 1u64..60).prop_map(|(e, o)| Counts::new(e, o));
    outcome(runner(cases).run(&(counts(), counts()), |(a, b)| {
        prop_assert_eq!(
            significantly_different(a, b),
            significantly_different(b, a).swapped()
        );
        prop_assert_eq!(
            significantly_different(a, a),
            ComparisonVerdict::NotSignificant
        );
        Ok(())
    }))
}

/// Independent rewrite-to-fixpoint model of constant fusion on binary trees.
///
/// Subtraction becomes addition, division multiplication, negation is
/// dropped. Constants are then moved left and up through `+` and `*`
/// chains, and any operator whose operands are all constant collapses to a
/// single constant. At the fixpoint every remaining constant node is one
/// group.
pub mod oracle {
    use super::*;

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub enum Tree {
        Var,
        Const(BTreeSet<String>),
        Add(Box<Tree>, Box<Tree>),
        Mul(Box<Tree>, Box<Tree>),
        Pow(Box<Tree>, Box<Tree>),
        Call(Vec<Tree>),
    }

    use Tree::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Role {
        Variable,
        Empirical,
        Mathematical,
    }

    pub fn from_expr(e: &Expression, role: &dyn Fn(&str) -> Role) -> Tree {
        match e {
            Expression::Number(_) => Const(BTreeSet::new()),
            Expression::Symbol(s) => match role(s) {
                Role::Variable => Var,
                Role::Empirical => Const(BTreeSet::from([s.clone()])),
                Role::Mathematical => Const(BTreeSet::new()),
            },
            Expression::Negate(c) => from_expr(c, role),
            Expression::Binary { op, left, right } => {
                let (l, r) = (
                    Box::new(from_expr(left, role)),
                    Box::new(from_expr(right, role)),
                );
                match op {
                    BinaryOp::Add | BinaryOp::Sub => Add(l, r),
                    BinaryOp::Mul | BinaryOp::Div => Mul(l, r),
                    BinaryOp::Pow => Pow(l, r),
                }
            }
            Expression::Apply { args, .. } => {
                Call(args.iter().map(|a| from_expr(a, role)).collect())
            }
        }
    }

    fn union(a: &BTreeSet<String>, b: &BTreeSet<String>) -> BTreeSet<String> {
        a.union(b).cloned().collect()
    }

    fn is_const(t: &Tree) -> bool {
        matches!(t, Const(_))
    }

    /// One rewrite at the root, if any rule matches there.
    fn rewrite_root(t: &Tree) -> Option<Tree> {
        // The same rules for both associative-commutative operators.
        fn ac(
            l: &Tree,
            r: &Tree,
            mk: fn(Box<Tree>, Box<Tree>) -> Tree,
            same: fn(&Tree) -> Option<(&Tree, &Tree)>,
        ) -> Option<Tree> {
            match (l, r) {
                (Const(a), Const(b)) => Some(Const(union(a, b))),
                (x, Const(c)) => Some(mk(Box::new(Const(c.clone())), Box::new(x.clone()))),
                (Const(a), inner) => match same(inner) {
                    Some((Const(b), y)) => {
                        Some(mk(Box::new(Const(union(a, b))), Box::new(y.clone())))
                    }
                    _ => None,
                },
                (inner, y) => {
                    if let Some((Const(a), x)) = same(inner) {
                        return Some(mk(
                            Box::new(Const(a.clone())),
                            Box::new(mk(Box::new(x.clone()), Box::new(y.clone()))),
                        ));
                    }
                    if let Some((Const(a), z)) = same(y) {
                        return Some(mk(
                            Box::new(Const(a.clone())),
                            Box::new(mk(Box::new(inner.clone()), Box::new(z.clone()))),
                        ));
                    }
                    None
                }
            }
        }
        fn as_add(t: &Tree) -> Option<(&Tree, &Tree)> {
            match t {
                Add(l, r) => Some((l, r)),
                _ => None,
            }
        }
        fn as_mul(t: &Tree) -> Option<(&Tree, &Tree)> {
            match t {
                Mul(l, r) => Some((l, r)),
                _ => None,
            }
        }
        match t {
            Add(l, r) => ac(l, r, Add, as_add),
            Mul(l, r) => ac(l, r, Mul, as_mul),
            Pow(l, r) => match (l.as_ref(), r.as_ref()) {
                (Const(a), Const(b)) => Some(Const(union(a, b))),
                _ => None,
            },
            Call(args) if args.iter().all(is_const) => {
                Some(Const(args.iter().fold(BTreeSet::new(), |acc, a| match a {
                    Const(m) => union(&acc, m),
                    _ => acc,
                })))
            }
            _ => None,
        }
    }

    /// One rewrite anywhere, innermost first.
    fn step(t: &Tree) -> Option<Tree> {
        let child = match t {
            Var | Const(_) => None,
            Add(l, r) | Mul(l, r) | Pow(l, r) => {
                if let Some(l2) = step(l) {
                    Some(rebuild(t, l2, (**r).clone()))
                } else {
                    step(r).map(|r2| rebuild(t, (**l).clone(), r2))
                }
            }
            Call(args) => args.iter().enumerate().find_map(|(i, a)| {
                step(a).map(|a2| {
                    let mut args = args.clone();
                    args[i] = a2;
                    Call(args)
                })
            }),
        };
        child.or_else(|| rewrite_root(t))
    }

    fn rebuild(t: &Tree, l: Tree, r: Tree) -> Tree {
        match t {
            Add(..) => Add(Box::new(l), Box::new(r)),
            Mul(..) => Mul(Box::new(l), Box::new(r)),
            Pow(..) => Pow(Box::new(l), Box::new(r)),
            _ => unreachable!(),
        }
    }

    pub fn normalize(mut t: Tree) -> Tree {
        for _ in 0..10_000 {
            match step(&t) {
                Some(next) => t = next,
                None => return t,
            }
        }
        panic!("rewriting did not reach a fixpoint");
    }

    fn collect(t: &Tree, out: &mut BTreeSet<BTreeSet<String>>) {
        match t {
            Var => {}
            Const(m) => {
                if !m.is_empty() {
                    out.insert(m.clone());
                }
            }
            Add(l, r) | Mul(l, r) | Pow(l, r) => {
                collect(l, out);
                collect(r, out);
            }
            Call(args) => args.iter().for_each(|a| collect(a, out)),
        }
    }

    /// Distinct constant groups of `left = right` at the fixpoint.
    pub fn group_count(stmt: &Statement, role: &dyn Fn(&str) -> Role) -> usize {
        let mut out = BTreeSet::new();
        for side in stmt.sides() {
            collect(&normalize(from_expr(side, role)), &mut out);
        }
        out.len()
    }
}

/// Random expression with at most `budget` nodes over the standard
/// variables, constants, small literals and a neutral operator `f`.
pub fn random_expression(rng: &mut impl Rng, budget: usize) -> Expression {
    let choice = if budget <= 1 { 0 } else { rng.gen_range(0..6) };
    match choice {
        1 => Expression::negate(random_expression(rng, budget - 1)),
        2 | 3 if budget >= 3 => {
            let left = rng.gen_range(1..=budget - 2);
            let op = [
                BinaryOp::Add,
                BinaryOp::Sub,
                BinaryOp::Mul,
                BinaryOp::Div,
                BinaryOp::Pow,
            ][rng.gen_range(0..5)];
            Expression::binary(
                op,
                random_expression(rng, left),
                random_expression(rng, budget - 1 - left),
            )
        }
        4 => Expression::apply("f", vec![random_expression(rng, budget - 1)]),
        5 if budget >= 3 => {
            let left = rng.gen_range(1..=budget - 2);
            Expression::apply(
                "f",
                vec![
                    random_expression(rng, left),
                    random_expression(rng, budget - 1 - left),
                ],
            )
        }
        _ => match rng.gen_range(0..8) {
            0..=2 => Expression::symbol(VARIABLES[rng.gen_range(0..3)]),
            3..=6 => Expression::symbol(CONSTANTS[rng.gen_range(0..4)]),
            _ => Expression::integer(rng.gen_range(0..4)),
        },
    }
}

pub fn standard_role(s: &str) -> oracle::Role {
    if VARIABLES.contains(&s) {
        oracle::Role::Variable
    } else if CONSTANTS.contains(&s) {
        oracle::Role::Empirical
    } else {
        oracle::Role::Mathematical
    }
}

pub struct Agreement {
    pub total: usize,
    pub agree: usize,
    /// Cases where the oracle found two or more groups.
    pub multi_group: usize,
    pub first_disagreement: Option<String>,
}

/// Compares the fusion pass with the oracle on `n` seeded random
/// expressions.
pub fn fusion_agreement(seed: u64, n: usize) -> Agreement {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ann = standard_ontology();
    let mut report = Agreement {
        total: n,
        agree: 0,
        multi_group: 0,
        first_disagreement: None,
    };
    for _ in 0..n {
        let budget = rng.gen_range(1..=7);
        let expr = random_expression(&mut rng, budget);
        assert!(expr.node_count() <= 7);
        let stmt = Statement::new(expr, Expression::integer(0));
        let ours = group_sets(&stmt, &ann).len();
        let theirs = oracle::group_count(&stmt, &standard_role);
        if theirs >= 2 {
            report.multi_group += 1;
        }
        if ours == theirs {
            report.agree += 1;
        } else if report.first_disagreement.is_none() {
            report.first_disagreement = Some(format!("{stmt}: fusion {ours}, oracle {theirs}"));
        }
    }
    report
}

pub fn load_bundled() -> BTreeMap<String, galilean::corpus::CorpusEntry> {
    let load = galilean::corpus::load_corpus(&corpus_dir()).unwrap();
    assert!(load.failures.is_empty(), "{:?}", load.failures);
    load.entries
        .into_iter()
        .map(|e| (e.name.clone(), e))
        .collect()
}

pub fn check_network_floor(cases: u32) -> Result<(), String> {
    use galilean::netintel::{nn_empirical_constants, nn_score, NetworkSpec};
    outcome(
        runner(cases).run(&(1u64..=1_000_000, 1u64..1000), |(n_h, n_o)| {
            let spec = NetworkSpec::new("net", n_h, n_o);
            let n_e = nn_empirical_constants(&spec).unwrap();
            prop_assert!(n_e >= 4);
            prop_assert_eq!(n_e, 2 * n_h + 2);
            if n_o == 2 {
                prop_assert_eq!(nn_score(&spec).unwrap(), Ratio::from_integer(-(n_h as i64)));
            }
            Ok(())
        }),
    )
}

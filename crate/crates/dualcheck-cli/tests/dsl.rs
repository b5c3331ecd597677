//! The declaration language: round trips, canonical printing and errors.

use std::path::PathBuf;

use dualcheck::geom::demo::{fixture, FIXTURE_IDS};
use dualcheck::geom::{double_pendulum, example_1_6_cc};
use dualcheck_cli::dsl::{parse, print, ErrorKind, SystemDecl};

fn corpus() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sys"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    out
}

/// Source text without comment lines.
fn uncommented(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn corpus_is_canonical_and_round_trips() {
    let corpus = corpus();
    assert!(corpus.len() >= 8);
    for (path, text) in corpus {
        let decl = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed = print(&decl);
        assert_eq!(
            printed,
            uncommented(&text),
            "{} is not in canonical form",
            path.display()
        );
        assert_eq!(parse(&printed).unwrap(), decl);
    }
}

#[test]
fn every_fixture_round_trips() {
    for id in FIXTURE_IDS {
        let fx = fixture(id).unwrap();
        let decl = SystemDecl::from_operator(fx.id, &fx.operator, &fx.unknowns);
        let again = parse(&print(&decl)).unwrap_or_else(|e| panic!("{id}: {e}\n{}", print(&decl)));
        assert_eq!(again, decl, "{id}");
        assert_eq!(again.operator(), fx.operator, "{id}");
    }
}

#[test]
fn pendulum_source_gives_the_pendulum_matrix() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/double_pendulum.sys"
    ))
    .unwrap();
    assert_eq!(parse(&text).unwrap().operator(), double_pendulum());
}

#[test]
fn example_1_6_prints_back_identically() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/example_1_6.sys"
    ))
    .unwrap();
    let decl = parse(&text).unwrap();
    assert_eq!(print(&decl), text);
    assert_eq!(decl.dep, ["y", "u", "v"]);
    // The compatibility condition of d22 y = u, d12 y - y = v, written on (u, v).
    let cc = SystemDecl::from_operator("cc", &example_1_6_cc(), &["u".into(), "v".into()]);
    assert_eq!(
        print(&cc).lines().nth(3).unwrap(),
        "  eq e1: -d[2,2](v) + d[1,2](u) - u;"
    );
}

#[test]
fn second_derivative_example() {
    let decl = parse("system p(){ indep x; dep y; eq e: d[1,1](y); }").unwrap();
    assert_eq!(
        print(&decl),
        "system p() {\n  indep x;\n  dep y;\n  eq e: d[1,1](y);\n}\n"
    );
}

#[test]
fn implicit_products_and_powers() {
    let a =
        parse("system s(k){ indep x, t; dep u; eq e: 2 x^2 k d[1](u) - (t + 1)/(t - 1) u / 3; }")
            .unwrap();
    let b =
        parse("system s(k){ indep x, t; dep u; eq e: 2*k*x^2*d[1](u) - ((t + 1)/(3*t - 3))*u; }")
            .unwrap();
    assert_eq!(a, b);
    let c = parse("system s(){ indep x; dep u; eq e: x^-2 u - u/x/x; }").unwrap();
    assert!(c.operator().is_zero());
}

fn kind(src: &str) -> (ErrorKind, usize, usize) {
    let e = parse(src).unwrap_err();
    (e.kind, e.pos.line, e.pos.col)
}

#[test]
fn errors() {
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: d[1](z); }"),
        (ErrorKind::Undeclared, 1, 40)
    );
    assert_eq!(
        kind("system p(){\n  indep x;\n  dep y;\n  eq e: y + q;\n}"),
        (ErrorKind::Undeclared, 4, 13)
    );
    assert_eq!(
        kind("system p(){ indep x, y; dep y; eq e: y; }").0,
        ErrorKind::Duplicate
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: y; eq e: y; }").0,
        ErrorKind::Duplicate
    );
    assert_eq!(
        kind("system p(){ indep x, t; dep y; eq e: d(y); }").0,
        ErrorKind::Arity
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: d[0](y); }").0,
        ErrorKind::Arity
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: x*d[1](x); }").0,
        ErrorKind::NotLinear
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: y/y; }").0,
        ErrorKind::NotLinear
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: y/(x - x); }").0,
        ErrorKind::NotLinear
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: x; }").0,
        ErrorKind::NotLinear
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: y $ 1; }"),
        (ErrorKind::Syntax, 1, 37)
    );
    assert_eq!(
        kind("system p(){ indep x; dep y; eq e: y }").0,
        ErrorKind::Syntax
    );
    assert_eq!(kind("system p(){ indep d; dep y; }").0, ErrorKind::Syntax);
    assert_eq!(
        kind("system p(){ indep x; dep y; } extra").0,
        ErrorKind::Syntax
    );
}

use super::*;
use crate::catalog::{families, make_family, make_vir_lsc_symbolic, make_virasoro, make_w_symbolic, ParamAssignment};
use crate::conformal::{AlgebraKind, Constraint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WAB: &str = "\
# W(a,b)
algebra W lie;
params a, b;
generators L, W;
bracket [L _ L] = (del + 2*lam)*L;
bracket [L _ W] = (del + a*lam + b)*W;
bracket [W _ L] = ((a - 1)*del + a*lam - b)*W;
default zero;
";

fn err(text: &str) -> ParseError {
    parse_and_elaborate(text).expect_err("should be rejected")
}

#[test]
fn tokens_carry_positions() {
    let toks = tokenize("bracket [L _ L] = 3/4*del;").unwrap();
    let kinds: Vec<&TokenKind> = toks.iter().map(|t| &t.kind).collect();
    assert_eq!(kinds[0], &TokenKind::Keyword("bracket"));
    assert_eq!(kinds[3], &TokenKind::Underscore);
    assert!(matches!(kinds[7], TokenKind::Rat(_)));
    assert_eq!(toks[7].text, "3/4");
    assert_eq!(toks[7].span, SourceSpan { line: 1, column: 19, length: 3 });
    assert_eq!(toks.last().unwrap().kind, TokenKind::Eof);
}

#[test]
fn spaced_slash_is_division() {
    let toks = tokenize("3 / 4").unwrap();
    assert_eq!(toks[1].kind, TokenKind::Slash);
}

#[test]
fn lexical_errors() {
    let e = tokenize("a $ b").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Lexical);
    assert_eq!(e.span, SourceSpan { line: 1, column: 3, length: 1 });
    let e = tokenize("\n 1/0").unwrap_err();
    assert_eq!((e.span.line, e.span.column, e.span.length), (2, 2, 3));
}

#[test]
fn wab_matches_catalog_table() {
    let parsed = parse_and_elaborate(WAB).unwrap();
    let w = make_w_symbolic();
    assert_eq!(parsed.kind, AlgebraKind::Lie);
    assert_eq!(parsed.universe(), w.universe());
    assert_eq!(parsed.table(), w.table());
}

#[test]
fn missing_pair_needs_default() {
    let text = WAB.replace("default zero;\n", "");
    let e = err(&text);
    assert_eq!(e.kind, ParseErrorKind::Semantic);
    assert!(e.message.contains("W _ W"), "{}", e.message);
}

#[test]
fn dangling_caret_expects_exponent() {
    let e = err("algebra V lie;\ngenerators L;\nbracket [L _ L] = lam^;\n");
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    assert_eq!(e.span.line, 3);
    assert_eq!(e.span.column, 23);
    assert!(e.expected.iter().any(|x| x.contains("integer")), "{:?}", e.expected);
    let rendered = e.render("algebra V lie;\ngenerators L;\nbracket [L _ L] = lam^;\n");
    assert!(rendered.contains("lam^;"));
    assert!(rendered.ends_with('^'));
}

#[test]
fn semantic_rejections() {
    let base = "algebra V lie;\nparams c;\ngenerators L;\n";
    for (body, needle) in [
        ("bracket [L _ L] = L*L;", "not linear"),
        ("bracket [L _ L] = del + L;", "not attached"),
        ("bracket [L _ L] = (del + 2*lam)*X;", "X"),
        ("bracket [L _ L] = mu*L;", "mu"),
        ("bracket [L _ L] = L/del;", "divisor"),
        ("bracket [L _ L] = L/(c - c);", "zero"),
        ("bracket [L _ L] = lam^33*L;", "exponent"),
        ("bracket [L _ L] = L;\nbracket [L _ L] = L;", "duplicate"),
    ] {
        let e = err(&format!("{base}{body}\n"));
        assert_eq!(e.kind, ParseErrorKind::Semantic, "{body}: {e}");
        assert!(e.message.to_lowercase().contains(&needle.to_lowercase()), "{body}: {e}");
    }
}

#[test]
fn division_by_parameter_expression() {
    let text = "algebra V lsc;\nparams b nonzero, d;\ngenerators L;\nbracket [L _ L] = (del + lam - d^2/b)*L;\n";
    let alg = parse_and_elaborate(text).unwrap();
    assert_eq!(alg.constraints(), &[Constraint::NonZero(crate::arith::Symbol::new("b"))]);
    let again = parse_and_elaborate(&export(&alg)).unwrap();
    assert_eq!(again, alg);
}

#[test]
fn export_round_trips_catalog() {
    let mut algebras = vec![make_virasoro(), make_vir_lsc_symbolic(), make_w_symbolic()];
    for spec in families() {
        algebras.push(make_family(spec.id, &ParamAssignment::new()).unwrap().algebra);
    }
    for alg in algebras {
        let text = export(&alg);
        let back = parse_and_elaborate(&text).unwrap_or_else(|e| panic!("{}\n{}", e.render(&text), text));
        assert_eq!(back.kind, alg.kind, "{text}");
        assert_eq!(back.universe(), alg.universe(), "{text}");
        assert_eq!(back.constraints(), alg.constraints(), "{text}");
        assert_eq!(back.table(), alg.table(), "{text}");
    }
}

#[test]
fn printer_round_trips_ast() {
    let def = parse_algebra(WAB).unwrap();
    let printed = print_algebra(&def);
    assert_eq!(parse_algebra(&printed).unwrap(), def);
    let nested = "algebra X raw;\nparams p, q;\nnonzero (p, q);\ngenerators A;\n\
                  bracket [A _ A] = -(p - (q - 1))^2*(-A) / (2 - p*q) - 1/2*lam^3*A;\n";
    let def = parse_algebra(nested).unwrap();
    assert_eq!(parse_algebra(&print_algebra(&def)).unwrap(), def);
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let open = "(".repeat(10_000);
    let e = err(&format!("algebra V lie;\ngenerators L;\nbracket [L _ L] = {open}L;\n"));
    assert!(e.message.contains("nested"), "{e}");
    let sum = |n: usize, op: &str| vec!["lam"; n].join(op);
    let body = |e: String| format!("algebra V lie;\ngenerators L;\nbracket [L _ L] = ({e})*L;\n");
    assert!(parse_and_elaborate(&body(sum(1000, " + "))).is_ok());
    assert!(err(&body(sum(5000, " + "))).message.contains("deeper"));
    assert!(err(&body(sum(1000, " * "))).message.contains("degree"));
}

fn span_in_bounds(text: &str, span: SourceSpan) -> bool {
    let lines: Vec<&str> = text.split('\n').collect();
    if span.line == 0 || span.line > lines.len() {
        return false;
    }
    let width = lines[span.line - 1].chars().count();
    span.column >= 1 && span.column + span.length.max(1) - 1 <= width.max(1)
}

#[test]
fn fuzzed_mutations_never_panic() {
    const ALPHABET: &[char] = &[
        '(', ')', '[', ']', '_', '*', '+', '-', '/', '^', ';', ',', '=', '#', ' ', '\n', '0', '1', '7', 'a', 'L', 'W',
        'x', 'é', '\t', '$',
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x15ca);
    let seed: Vec<char> = WAB.chars().collect();
    let mut rejected = 0;
    for _ in 0..10_000 {
        let mut chars = seed.clone();
        for _ in 0..rng.gen_range(1..=4) {
            let pos = rng.gen_range(0..=chars.len());
            match rng.gen_range(0..3) {
                0 => chars.insert(pos, ALPHABET[rng.gen_range(0..ALPHABET.len())]),
                1 if pos < chars.len() => {
                    chars.remove(pos);
                }
                _ if pos < chars.len() => chars[pos] = ALPHABET[rng.gen_range(0..ALPHABET.len())],
                _ => {}
            }
        }
        let text: String = chars.into_iter().collect();
        if let Err(e) = parse_and_elaborate(&text) {
            rejected += 1;
            assert!(span_in_bounds(&text, e.span), "span {:?} out of bounds for\n{text}", e.span);
            assert!(!e.render(&text).is_empty());
        }
    }
    assert!(rejected > 1000);
}

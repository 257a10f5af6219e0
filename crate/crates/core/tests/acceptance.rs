//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::error::Error as StdError;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use mauto::automata::{parse_automaton, print_automaton, MAutomaton, TupleWord};
use mauto::logic::{parse_formula, Formula};
use mauto::mso::{compile_mso, mso_holds};
use mauto::msoplus::{brute_force_sat, derived_bound, find_model, parse_msoplus, sat_plus};
use mauto::structures::{
    cnf_add, compile_fo, decide_fo, ees_presentation, oracle_from_presentation,
    ordinal_presentation, skolem_decode, skolem_encode, skolem_presentation, Cnf,
};
use mauto::theories::presburger::define_numeral;
use mauto::theories::{registry, Element, FiniteStructure, PadMode, Presburger, Theory};
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{insert_track, random_automaton, tuples, two, words, MsoGen};

type Outcome = Result<String, Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn nats(w: &[u64]) -> Vec<Element> {
    w.iter().map(|&n| Element::Nat(n)).collect()
}

fn nat_tuple(ws: &[&[u64]]) -> TupleWord {
    TupleWord(ws.iter().map(|w| nats(w)).collect())
}

fn figure_one() -> Outcome {
    let a = MAutomaton::load(&fixture("fig1.aut"))?;
    let alphabet = nats(&[0, 1, 2]);
    let mut checked = 0;
    for w in words(&alphabet, 4).into_iter().filter(|w| !w.is_empty()) {
        let expected = w[0] == Element::Nat(1) && w[1..].iter().all(|e| *e == Element::Nat(0));
        let got = a.accepts(&TupleWord(vec![w.clone()]))?;
        ensure!(got == expected, "word {w:?}: automaton says {got}");
        checked += 1;
    }
    ensure!(checked == 120, "checked {checked} words");
    Ok(format!("{checked} words, accepted set is 1·0^k"))
}

fn ordinals(max_len: usize, max_coeff: u64) -> Vec<Cnf> {
    let mut out = vec![Cnf::zero()];
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..=max_coeff).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(
            layer
                .iter()
                .filter(|w| w.last() != Some(&0))
                .map(|w| Cnf::new(w.clone()).unwrap()),
        );
    }
    out
}

fn ordinal_addition() -> Outcome {
    let p = ordinal_presentation()?;
    let plus = p.relation("plus").unwrap();
    let all = ordinals(4, 3);
    ensure!(all.len() == 256, "{} ordinals", all.len());
    let mut pairs = Vec::new();
    for a in &all {
        for b in &all {
            let s = cnf_add(a, b);
            pairs.push(nat_tuple(&[a.coeffs(), b.coeffs(), s.coeffs()]));
        }
    }
    let got = plus.accepts_all(&pairs)?;
    let bad = got.iter().filter(|g| !**g).count();
    ensure!(bad == 0, "{bad} sums rejected");
    let functional = parse_formula(
        "(forall a (forall b (forall c (forall d \
         (implies (and (rel plus a b c) (rel plus a b d)) (= c d))))))",
        p.signature(),
    )?;
    ensure!(decide_fo(&p, &functional)?, "plus is not functional");
    let worked = nat_tuple(&[&[11, 2, 0, 3, 4, 0, 5], &[0, 2, 6, 17], &[0, 2, 6, 20, 4, 0, 5]]);
    ensure!(plus.accepts(&worked)?, "worked example rejected");
    Ok(format!("{} pairs agree, plus is functional, worked triple accepted", pairs.len()))
}

struct Corpus {
    automata: Vec<MAutomaton>,
    partners: Vec<MAutomaton>,
}

fn corpus() -> Corpus {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut automata = Vec::new();
    let mut partners = Vec::new();
    for i in 0..100 {
        let k = 1 + i % 2;
        automata.push(random_automaton(&mut rng, k));
        partners.push(random_automaton(&mut rng, k));
    }
    Corpus { automata, partners }
}

fn closure_algebra(c: &Corpus) -> Outcome {
    let letters = common::letters();
    let mut checks = 0usize;
    for (a, b) in c.automata.iter().zip(&c.partners) {
        let k = a.tracks();
        let space = tuples(&letters, k, 3);
        let comp = a.complement()?;
        let union = a.union(b)?;
        let inter = a.intersect(b)?;
        for w in &space {
            let (x, y) = (a.accepts(w)?, b.accepts(w)?);
            ensure!(comp.accepts(w)? == !x, "complement differs on {w:?}");
            ensure!(union.accepts(w)? == (x || y), "union differs on {w:?}");
            ensure!(inter.accepts(w)? == (x && y), "intersection differs on {w:?}");
            checks += 3;
        }
        if k == 2 {
            for i in 1..=2 {
                let p = a.project(i)?;
                for w in tuples(&letters, 1, 3) {
                    // a shortest removed word is at most |Q| longer than the rest
                    let bound = w.len() + a.state_count();
                    let mut exists = false;
                    for u in words(&letters, bound) {
                        if a.accepts(&insert_track(&w, i - 1, u))? {
                            exists = true;
                            break;
                        }
                    }
                    ensure!(p.accepts(&w)? == exists, "projection {i} differs on {w:?}");
                    checks += 1;
                }
            }
        } else {
            for pos in 1..=2 {
                let cyl = a.cylindrify(pos)?;
                for w in tuples(&letters, 2, 3) {
                    let mut rest = w.0.clone();
                    rest.remove(pos - 1);
                    let expected = a.accepts(&TupleWord(rest))?;
                    ensure!(cyl.accepts(&w)? == expected, "cylinder {pos} differs on {w:?}");
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{} automata, {checks} membership comparisons", c.automata.len()))
}

fn emptiness(c: &Corpus) -> Outcome {
    let letters = common::letters();
    let mut empty = 0;
    for a in c.automata.iter().chain(&c.partners) {
        let bound = a.state_count();
        let mut witness = false;
        for w in tuples(&letters, a.tracks(), bound) {
            if a.accepts(&w)? {
                witness = true;
                break;
            }
        }
        let is_empty = a.is_empty()?;
        ensure!(is_empty == !witness, "is_empty = {is_empty} but bounded witness = {witness}");
        if let Some(w) = a.find_word()? {
            ensure!(a.accepts(&w)?, "find_word returned a rejected word");
            ensure!(w.len() <= bound, "find_word returned length {} > {bound}", w.len());
        }
        if is_empty {
            empty += 1;
        }
    }
    Ok(format!("200 automata ({empty} empty), all agree"))
}

fn mso_compiler() -> Outcome {
    let t = two();
    let mut rng = StdRng::seed_from_u64(0x3550);
    let mut gen = MsoGen::new(&mut rng);
    let space = words(&common::letters(), 4);
    let (mut checked, mut mixed, mut sets) = (0, 0, 0);
    for _ in 0..200 {
        let phi = gen.sentence(3);
        sets += phi.has_set_quantifier() as usize;
        let mut seen = [false; 2];
        ensure!(phi.depth() <= 3, "depth {} for {phi}", phi.depth());
        let a = compile_mso(&phi, 1, t.clone())?;
        for w in &space {
            let w = TupleWord(vec![w.clone()]);
            let direct = mso_holds(&phi, &w, &t)?;
            ensure!(a.accepts(&w)? == direct, "{phi} differs on {w:?}");
            seen[direct as usize] = true;
            checked += 1;
        }
        mixed += (seen[0] && seen[1]) as usize;
    }
    Ok(format!(
        "200 sentences ({sets} with set quantifiers, {mixed} true on some words and false on others), {checked} word checks"
    ))
}

fn ordinal_sentences() -> Outcome {
    let p = ordinal_presentation()?;
    let d = |s: &str| -> Result<bool, Box<dyn StdError>> {
        Ok(decide_fo(&p, &parse_formula(s, p.signature())?)?)
    };
    let assoc = "(forall a (forall b (forall c (exists d (exists e (exists f (and \
        (rel plus a b d) (rel plus d c e) (rel plus b c f) (rel plus a f e))))))))";
    let noncomm = "(exists a (exists b (exists c (exists d \
        (and (rel plus a b c) (rel plus b a d) (not (= c d)))))))";
    let comm = "(forall a (forall b (exists c (and (rel plus a b c) (rel plus b a c)))))";
    ensure!(d(assoc)?, "associativity decided false");
    ensure!(d(noncomm)?, "non-commutativity decided false");
    ensure!(!d(comm)?, "commutativity decided true");
    let small = ordinals(3, 2);
    let mut comm_fails = 0;
    for a in &small {
        for b in &small {
            if cnf_add(a, b) != cnf_add(b, a) {
                comm_fails += 1;
            }
            for c in &small {
                ensure!(
                    cnf_add(&cnf_add(a, b), c) == cnf_add(a, &cnf_add(b, c)),
                    "CNF associativity fails"
                );
            }
        }
    }
    ensure!(comm_fails > 0, "no non-commuting pair among small ordinals");
    Ok(format!(
        "associative, not commutative; CNF oracle agrees on {} ordinals",
        small.len()
    ))
}

fn skolem() -> Outcome {
    let p = skolem_presentation()?;
    let f = |s: &str| parse_formula(s, p.signature());
    let comm = "(forall x (forall y (forall z (implies (rel times x y z) (rel times y x z)))))";
    ensure!(decide_fo(&p, &f(comm)?)?, "commutativity decided false");
    ensure!(
        decide_fo(&p, &f("(exists x (forall y (rel times x y y)))")?)?,
        "unit decided false"
    );
    ensure!(
        !decide_fo(&p, &f("(forall x (exists y (rel times y y x)))")?)?,
        "every number decided square"
    );
    let non_square = compile_fo(&p, &f("(not (exists y (rel times y y x)))")?, &["x".into()])?;
    let TupleWord(w) = non_square.find_word()?.ok_or("no counterexample word")?;
    let mut letters: Vec<u64> = w[0].iter().map(|e| e.as_nat().unwrap()).collect();
    while letters.last() == Some(&0) {
        letters.pop();
    }
    let n = skolem_decode(&letters).ok_or("counterexample does not decode")?;
    ensure!((1..=n).all(|r| r * r != n), "counterexample {n} is a square");
    let times = p.relation("times").unwrap();
    for a in 1..=12u64 {
        for b in 1..=12u64 {
            let t = |x: u64| skolem_encode(x).unwrap();
            ensure!(
                times.accepts(&nat_tuple(&[&t(a), &t(b), &t(a * b)]))?,
                "{a}·{b} rejected"
            );
            ensure!(
                !times.accepts(&nat_tuple(&[&t(a), &t(b), &t(a * b + 1)]))?,
                "{a}·{b} = {} accepted",
                a * b + 1
            );
        }
    }
    Ok(format!("3 sentences exact, counterexample {n} is not a square"))
}

fn one(v: &str) -> String {
    format!(
        "(and (not (rel plus {v} {v} {v})) (forall a{v} (forall b{v} \
         (implies (rel plus a{v} b{v} {v}) (or (rel plus a{v} a{v} a{v}) (rel plus b{v} b{v} b{v}))))))"
    )
}

fn presburger_sentences() -> Vec<(String, bool)> {
    let o = one("o");
    let p1 = one("p");
    let odd = |x: &str| format!("(exists h (exists o (exists w (and {o} (rel plus h h w) (rel plus w o {x})))))");
    let even = |x: &str| format!("(exists h (rel plus h h {x}))");
    let lt = |x: &str, y: &str| format!("(exists d (and (rel plus {x} d {y}) (not (rel plus d d d))))");
    let mut s: Vec<(String, bool)> = vec![
        ("(exists x (rel plus x x x))".into(), true),
        ("(forall x (exists y (rel plus x y x)))".into(), true),
        ("(forall x (forall y (exists z (rel plus x y z))))".into(), true),
        ("(forall x (forall y (forall z (implies (rel plus x y z) (rel plus y x z)))))".into(), true),
        ("(exists x (exists y (and (rel plus x y x) (not (rel plus y y y)))))".into(), false),
        (format!("(forall x (or {} {}))", even("x"), odd("x")), true),
        ("(forall x (exists y (rel plus y y x)))".into(), false),
        ("(exists z (forall x (rel plus x z x)))".into(), true),
        ("(forall z (implies (forall x (rel plus x z x)) (rel plus z z z)))".into(), true),
        (format!("(exists o {o})"), true),
        (format!("(forall o (forall p (implies (and {o} {p1}) (= o p))))"), true),
        ("(exists x (exists y (and (not (= x y)) (rel plus x x y))))".into(), true),
        ("(forall x (forall y (or (exists z (rel plus x z y)) (exists z (rel plus y z x)))))".into(), true),
        ("(exists x (forall y (exists z (rel plus x z y))))".into(), true),
        ("(exists x (forall y (exists z (rel plus y z x))))".into(), false),
        (format!("(forall x (exists y {}))", lt("x", "y")), true),
        ("(exists x (exists y (and (rel plus x y x) (rel plus y x y) (not (= x y)))))".into(), false),
        ("(forall x (forall y (implies (rel plus x x y) (rel plus y y y))))".into(), false),
        (
            "(exists x (exists y (exists z (and (rel plus x y z) (not (= x z)) (not (= y z)) (not (= x y))))))"
                .into(),
            true,
        ),
        (
            "(exists x (exists y (exists w (and (not (rel plus x x x)) (rel plus y y x) (rel plus w w y)))))"
                .into(),
            true,
        ),
        (format!("(not (exists x (and {} {})))", even("x"), odd("x")), true),
        (format!("(exists x (and {} {}))", even("x"), odd("x")), false),
        (
            format!("(forall x (implies (not (rel plus x x x)) (exists y (exists o (and {o} (rel plus y o x))))))"),
            true,
        ),
        (
            format!("(exists x (and (not (rel plus x x x)) (forall y (forall o (implies {o} (not (rel plus y o x)))))))"),
            false,
        ),
        (
            "(forall x (forall y (forall z (forall w (implies (and (rel plus x y z) (rel plus x y w)) (= z w))))))"
                .into(),
            true,
        ),
        ("(forall x (forall y (forall z (implies (and (rel plus x z y) (rel plus y z x)) (= x y)))))".into(), true),
        (
            "(forall x (forall y (forall z (forall w (implies (and (rel plus x z w) (rel plus y z w)) (= x y))))))"
                .into(),
            true,
        ),
        ("(exists x (exists y (and (rel plus x y y) (not (rel plus x x x)))))".into(), false),
        (
            format!("(forall x (exists y (exists z (and (rel plus y z x) (or (= y z) (exists o (and {o} (rel plus z o y))))))))"),
            true,
        ),
        ("(exists x (exists y (and (rel plus x x y) (rel plus y y x) (not (rel plus x x x)))))".into(), false),
        ("(exists x (exists y (exists z (and (rel plus x x y) (rel plus y x z) (rel plus z z z)))))".into(), true),
        ("(exists x (forall y (rel plus x y y)))".into(), true),
        ("(forall x (exists y (rel plus x x y)))".into(), true),
        ("(forall x (forall y (exists z (or (rel plus x z y) (rel plus y z x)))))".into(), true),
        (format!("(exists x (exists y (and {} {})))", lt("x", "y"), lt("y", "x")), false),
        (format!("(exists x (and {} (rel plus x x x)))", one("x")), false),
        ("(exists x (exists y (and (rel plus x x y) (rel plus y y x))))".into(), true),
        (
            "(exists x (exists y (exists z (and (rel plus x y z) (rel plus y z x) (not (rel plus x x x))))))".into(),
            true,
        ),
        (
            "(exists x (exists y (exists z (and (rel plus x x z) (rel plus y y z) (not (= x y))))))".into(),
            false,
        ),
        (
            "(exists x (exists y (exists z (exists w (and (rel plus x x z) (rel plus z x w) (rel plus y y w) (not (rel plus x x x)))))))"
                .into(),
            true,
        ),
        (
            "(exists x (exists z (exists w (and (rel plus x x z) (rel plus z x w) (rel plus w w w) (not (rel plus x x x))))))"
                .into(),
            false,
        ),
        ("(forall x (exists y (exists z (and (rel plus x y z) (rel plus z z z)))))".into(), false),
        (
            "(exists x (forall y (implies (not (rel plus y y y)) (exists z (and (rel plus x z y) (not (= z y)))))))"
                .into(),
            true,
        ),
        ("(exists x (exists y (and (not (= x y)) (rel plus x y x))))".into(), true),
        ("(forall x (exists y (not (= x y))))".into(), true),
        ("(exists x (forall y (= x y)))".into(), false),
        ("(exists x (exists y (exists z (and (rel plus x y z) (rel plus x z y) (not (rel plus x x x))))))".into(), false),
        (
            format!("(forall x (implies {} (exists y (exists w (and (rel plus y y w) (rel plus w w x))))))", even("x")),
            false,
        ),
        (
            format!("(forall x (implies (exists y (exists w (and (rel plus y y w) (rel plus w w x)))) {}))", even("x")),
            true,
        ),
    ];
    // definability of numerals: ∃x (x = n ∧ x even)
    for n in 0..6u64 {
        let def = define_numeral(n, "x");
        s.push((format!("(exists x (and {def} {}))", even("x")), n % 2 == 0));
    }
    s
}

/// Split `∃x̄ φ` with `φ` quantifier-free.
fn existential(f: &Formula) -> Option<(Vec<String>, &Formula)> {
    let mut vars = Vec::new();
    let mut g = f;
    while let Formula::Exists(v, body) = g {
        vars.push(v.clone());
        g = body;
    }
    (!vars.is_empty() && g.is_quantifier_free()).then_some((vars, g))
}

fn presburger() -> Outcome {
    let theory = registry::presburger();
    let diag = Presburger::new();
    let cases = presburger_sentences();
    let mut witnessed = 0;
    for (text, truth) in &cases {
        let f = parse_formula(text, theory.signature())?;
        ensure!(theory.decide(&f)? == *truth, "wrong verdict for {text}");
        if let (true, Some((vars, body))) = (*truth, existential(&f)) {
            let env = diag
                .diagonal_search(body, &vars, 20)?
                .ok_or_else(|| format!("no diagonal witness for {text}"))?;
            ensure!(theory.eval(body, &env)?, "witness fails for {text}");
            witnessed += 1;
        }
    }
    ensure!(cases.len() >= 50, "only {} sentences", cases.len());
    Ok(format!("{} sentences exact, {witnessed} existential witnesses", cases.len()))
}

const NESTED: &str = "symvars x z
(existsS X (and
  (forallP p (implies (not (existsP q (lt q p))) (in p X)))
  (forallP p (forallP q (implies
     (and (lt p q) (not (existsP m (and (lt p m) (lt m q)))))
     (and (implies (in p X) (not (in q X))) (implies (not (in p X)) (in q X))))))
  (in x X)
  (forallP y (implies (in y X) (theta (= v1 v2) x y)))
  (not (existsP t (lt t z)))
  (forallP y (implies (not (in y X)) (theta (rel prefix v1 v2) y z)))))";

fn msoplus() -> Outcome {
    let t = two();
    let mut rng = StdRng::seed_from_u64(0x9105);
    let mut gen = MsoGen::new(&mut rng);
    let (mut sat, mut total, mut max_bound) = (0, 0, 0);
    for n in 0..=2 {
        for p in 0..=3 {
            for _ in 0..8 {
                let phi = gen.fragment(n, p, 3);
                let bound = derived_bound(&phi, &t)?;
                max_bound = max_bound.max(bound);
                let fast = sat_plus(&phi, &t)?;
                let slow = brute_force_sat(&phi, &t, bound)?;
                ensure!(fast == slow, "sat_plus {fast}, brute force {slow} (B = {bound}) on {phi}");
                if let Some(w) = find_model(&phi, &t)? {
                    ensure!(phi.holds(&w, &t)?, "model fails on {phi}");
                }
                sat += fast as usize;
                total += 1;
            }
        }
    }
    let pres = registry::padded(registry::presburger(), PadMode::Fresh)?;
    for name in ["repeated.msoplus", "double_tail.msoplus"] {
        let phi = parse_msoplus(&std::fs::read_to_string(fixture(name))?, pres.signature())?;
        ensure!(sat_plus(&phi, &pres)?, "{name} reported unsatisfiable");
    }
    let base = Arc::new(FiniteStructure::new("ab", &["a", "b"])?);
    let ees = registry::padded(
        oracle_from_presentation(Arc::new(ees_presentation(base)?)),
        PadMode::Fresh,
    )?;
    let nested = parse_msoplus(NESTED, ees.signature())?;
    ensure!(sat_plus(&nested, &ees)?, "nested sentence reported unsatisfiable");
    Ok(format!(
        "{total} generated sentences agree ({sat} satisfiable, bounds up to {max_bound}); 3 example sentences satisfiable"
    ))
}

fn round_trip(a: &MAutomaton) -> Result<(), Box<dyn StdError>> {
    let text = print_automaton(&a.renumbered());
    let back = parse_automaton(&text, None)?;
    let again = print_automaton(&back.renumbered());
    ensure!(again == text, "text changed:\n{text}\n---\n{again}");
    Ok(())
}

fn serialization(c: &Corpus) -> Outcome {
    let mut n = 0;
    for (a, b) in c.automata.iter().zip(&c.partners) {
        let mut produced = vec![a.complement()?, a.union(b)?, a.intersect(b)?, a.trim()?, a.determinize()?];
        if a.tracks() == 2 {
            produced.push(a.project(1)?);
            produced.push(a.project(2)?);
        } else {
            produced.push(a.cylindrify(1)?);
        }
        for p in &produced {
            round_trip(p)?;
            n += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(7);
    let mut gen = MsoGen::new(&mut rng);
    for _ in 0..20 {
        round_trip(&compile_mso(&gen.sentence(3), 1, two())?)?;
        n += 1;
    }
    let p = ordinal_presentation()?;
    for (_, r) in p.relations() {
        round_trip(r)?;
        n += 1;
    }
    Ok(format!("{n} automata round-trip"))
}

fn main() {
    let started = Instant::now();
    let c = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("figure 1 fixture", Box::new(figure_one)),
        ("ordinal addition fixture", Box::new(ordinal_addition)),
        ("closure algebra soundness", Box::new(|| closure_algebra(&c))),
        ("emptiness vs bounded witness", Box::new(|| emptiness(&c))),
        ("MSO compiler vs direct semantics", Box::new(mso_compiler)),
        ("FO over ordinals", Box::new(ordinal_sentences)),
        ("FO over Skolem arithmetic", Box::new(skolem)),
        ("Presburger backend", Box::new(presburger)),
        ("MSO+ satisfiability", Box::new(msoplus)),
        ("serialization round trip", Box::new(|| serialization(&c))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

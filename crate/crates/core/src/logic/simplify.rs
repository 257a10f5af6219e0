use super::Formula;

/// Semantics-preserving cleanup: constant folding of `true`/`false`, double
/// negation, flattening of nested conjunctions/disjunctions, duplicate
/// removal, trivial equalities and vacuous quantifiers.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Pad(_) => f.clone(),
        Formula::Eq(a, b) => {
            if a == b {
                Formula::True
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => match simplify(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(h) => *h,
            h => Formula::Not(Box::new(h)),
        },
        Formula::And(gs) => {
            let mut out: Vec<Formula> = Vec::with_capacity(gs.len());
            for g in gs {
                match simplify(g) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    Formula::And(hs) => {
                        for h in hs {
                            push_unique(&mut out, h);
                        }
                    }
                    h => push_unique(&mut out, h),
                }
            }
            if has_complementary(&out) {
                return Formula::False;
            }
            match out.len() {
                0 => Formula::True,
                1 => out.pop().unwrap(),
                _ => Formula::And(out),
            }
        }
        Formula::Or(gs) => {
            let mut out: Vec<Formula> = Vec::with_capacity(gs.len());
            for g in gs {
                match simplify(g) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    Formula::Or(hs) => {
                        for h in hs {
                            push_unique(&mut out, h);
                        }
                    }
                    h => push_unique(&mut out, h),
                }
            }
            if has_complementary(&out) {
                return Formula::True;
            }
            match out.len() {
                0 => Formula::False,
                1 => out.pop().unwrap(),
                _ => Formula::Or(out),
            }
        }
        Formula::Implies(a, b) => match (simplify(a), simplify(b)) {
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (Formula::True, b) => b,
            (a, Formula::False) => simplify(&Formula::not(a)),
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        },
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = simplify(g);
            match body {
                Formula::True | Formula::False => body,
                body if !body.has_free(v) => body,
                body => {
                    if matches!(f, Formula::Exists(..)) {
                        Formula::Exists(v.clone(), Box::new(body))
                    } else {
                        Formula::Forall(v.clone(), Box::new(body))
                    }
                }
            }
        }
    }
}

fn push_unique(out: &mut Vec<Formula>, f: Formula) {
    if !out.contains(&f) {
        out.push(f);
    }
}

fn has_complementary(fs: &[Formula]) -> bool {
    fs.iter().any(|f| match f {
        Formula::Not(g) => fs.contains(g),
        _ => false,
    })
}

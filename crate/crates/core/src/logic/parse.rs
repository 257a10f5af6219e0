use super::{Formula, Signature, Term};
use crate::sexp::{self, Sexp};
use crate::{Error, Result};

/// Parse the prefix syntax
/// `(rel R t…) | (= t t) | (pad t) | (not f) | (and f…) | (or f…) |
/// (implies f f) | (exists x f) | (forall x f) | true | false`.
///
/// Identifiers declared as constants in `sig` become constant terms; every
/// other identifier is a variable. Relation arities are checked against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    formula_from_sexp(&sexp::parse(text)?, sig)
}

pub fn formula_from_sexp(s: &Sexp, sig: &Signature) -> Result<Formula> {
    let items = match s {
        Sexp::Atom(a) => {
            return match a.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                other => Err(Error::parse(format!("expected a formula, found `{other}`"))),
            }
        }
        Sexp::List(items) => items,
    };
    let head = s
        .head()
        .ok_or_else(|| Error::parse(format!("expected an operator in `{s}`")))?;
    let args = &items[1..];
    let expect = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::parse(format!(
                "`{head}` expects {n} arguments, found {} in `{s}`",
                args.len()
            )))
        }
    };
    let term = |x: &Sexp| -> Result<Term> {
        let name = x
            .as_atom()
            .ok_or_else(|| Error::parse(format!("expected a term, found `{x}`")))?;
        if name == "true" || name == "false" {
            return Err(Error::parse(format!("`{name}` is not a term")));
        }
        Ok(if sig.is_constant(name) {
            Term::Const(name.to_string())
        } else {
            Term::Var(name.to_string())
        })
    };
    let ident = |x: &Sexp| -> Result<String> {
        let name = x
            .as_atom()
            .ok_or_else(|| Error::parse(format!("expected a variable, found `{x}`")))?;
        if sig.is_constant(name) {
            return Err(Error::parse(format!("cannot bind constant `{name}`")));
        }
        Ok(name.to_string())
    };
    let sub = |x: &Sexp| formula_from_sexp(x, sig);
    match head {
        "rel" => {
            let (name, rest) = args
                .split_first()
                .ok_or_else(|| Error::parse("`rel` needs a relation name"))?;
            let name = name
                .as_atom()
                .ok_or_else(|| Error::parse("relation name must be an identifier"))?;
            let arity = sig
                .arity(name)
                .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
            if arity != rest.len() {
                return Err(Error::Arity {
                    name: name.to_string(),
                    expected: arity,
                    found: rest.len(),
                });
            }
            Ok(Formula::Rel(
                name.to_string(),
                rest.iter().map(term).collect::<Result<_>>()?,
            ))
        }
        "=" => {
            expect(2)?;
            Ok(Formula::Eq(term(&args[0])?, term(&args[1])?))
        }
        "pad" => {
            expect(1)?;
            Ok(Formula::Pad(term(&args[0])?))
        }
        "not" => {
            expect(1)?;
            Ok(Formula::not(sub(&args[0])?))
        }
        "and" => Ok(Formula::And(args.iter().map(sub).collect::<Result<_>>()?)),
        "or" => Ok(Formula::Or(args.iter().map(sub).collect::<Result<_>>()?)),
        "implies" => {
            expect(2)?;
            Ok(Formula::implies(sub(&args[0])?, sub(&args[1])?))
        }
        "exists" | "forall" => {
            expect(2)?;
            let v = ident(&args[0])?;
            let body = sub(&args[1])?;
            Ok(if head == "exists" {
                Formula::exists(&v, body)
            } else {
                Formula::forall(&v, body)
            })
        }
        other => Err(Error::parse(format!("unknown operator `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::new().with_relation("plus", 3).unwrap();
        s.add_constant("c").unwrap();
        s
    }

    #[test]
    fn round_trips_through_display() {
        let texts = [
            "(forall x (exists y (rel plus x y x)))",
            "(implies (pad t1) (not (= t1 c)))",
            "(and (or true false) (and))",
        ];
        for t in texts {
            let f = parse_formula(t, &sig()).unwrap();
            assert_eq!(f.to_string(), t);
        }
    }

    #[test]
    fn whitespace_insensitive() {
        let f = parse_formula("  ( exists   x\n (rel plus x x x) ) ", &sig()).unwrap();
        assert_eq!(f.to_string(), "(exists x (rel plus x x x))");
    }

    #[test]
    fn rejects_arity_mismatch_and_unknown() {
        assert!(matches!(
            parse_formula("(rel plus x y)", &sig()),
            Err(Error::Arity { expected: 3, found: 2, .. })
        ));
        assert!(matches!(
            parse_formula("(rel times x y z)", &sig()),
            Err(Error::UnknownRelation(_))
        ));
        assert!(parse_formula("(exists c true)", &sig()).is_err());
        assert!(parse_formula("(frob x)", &sig()).is_err());
    }

    #[test]
    fn constants_are_recognised() {
        let f = parse_formula("(= x c)", &sig()).unwrap();
        assert_eq!(f, Formula::Eq(Term::var("x"), Term::constant("c")));
    }
}
